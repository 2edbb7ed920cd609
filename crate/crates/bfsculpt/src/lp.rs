//! Dense exact-rational simplex.
//!
//! Every linear program in this crate has few rows (at most a couple dozen)
//! and possibly many columns, so a full-tableau two-phase simplex over
//! `BigRational` is both exact and fast enough. Entering columns follow the
//! most-negative rule with lowest-index tie-breaks, falling back to Bland's
//! rule after an iteration budget so termination is guaranteed. Pivoting is
//! deterministic, which keeps every derived witness reproducible.

use crate::error::{Error, Result};
use crate::exact::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

pub struct Lp {
    maximize: bool,
    objective: Vec<Rat>,
    rows: Vec<(Vec<Rat>, Rel, Rat)>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal objective value in the caller's orientation.
    pub objective: Rat,
    /// Values of the structural variables.
    pub x: Vec<Rat>,
    /// One multiplier per constraint row, in the convention where the dual
    /// of `max c'x : Ax <= b, x >= 0` is `min y'b : y'A >= c, y >= 0`.
    pub duals: Vec<Rat>,
}

impl Lp {
    /// `maximize c'x` (or minimize) over `x >= 0` subject to added rows.
    pub fn new(maximize: bool, objective: Vec<Rat>) -> Self {
        Lp {
            maximize,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    m: usize,
    n_struct: usize,
    cols: usize,
    art_start: usize,
    /// m constraint rows followed by the reduced-cost row; each row has
    /// `cols + 1` entries, the last being the rhs.
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    dead: Vec<bool>,
}

const BLAND_SWITCH: usize = 2_000;

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.rows.len();
        let n = lp.objective.len();
        let n_slack = lp
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Rel::Eq)
            .count();
        let cols = n + n_slack + m;
        let art_start = n + n_slack;
        let mut t = vec![vec![Rat::zero(); cols + 1]; m + 1];
        let mut slack_idx = n;
        for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
            let flip = rhs.is_negative();
            for (j, c) in coeffs.iter().enumerate() {
                t[i][j] = if flip { -c.clone() } else { c.clone() };
            }
            let rel = match (rel, flip) {
                (Rel::Le, true) => Rel::Ge,
                (Rel::Ge, true) => Rel::Le,
                (r, _) => *r,
            };
            match rel {
                Rel::Le => {
                    t[i][slack_idx] = Rat::one();
                    slack_idx += 1;
                }
                Rel::Ge => {
                    t[i][slack_idx] = -Rat::one();
                    slack_idx += 1;
                }
                Rel::Eq => {}
            }
            t[i][art_start + i] = Rat::one();
            t[i][cols] = if flip { -rhs.clone() } else { rhs.clone() };
        }
        Tableau {
            m,
            n_struct: n,
            cols,
            art_start,
            t,
            basis: (art_start..art_start + m).collect(),
            dead: vec![false; m],
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v /= &piv;
        }
        for r in 0..=self.m {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let factor = self.t[r][col].clone();
            for j in 0..=self.cols {
                let delta = &factor * &self.t[row][j];
                self.t[r][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs the simplex loop on the current reduced-cost row, minimizing.
    fn iterate(&mut self, allow_artificial: bool) -> Result<()> {
        let mut iters = 0usize;
        loop {
            iters += 1;
            let bland = iters > BLAND_SWITCH;
            let limit = if allow_artificial {
                self.cols
            } else {
                self.art_start
            };
            let mut entering: Option<usize> = None;
            let mut best = Rat::zero();
            for j in 0..limit {
                let rc = &self.t[self.m][j];
                if rc.is_negative() {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if *rc < best {
                        best = rc.clone();
                        entering = Some(j);
                    }
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<usize> = None;
            let mut best_ratio: Option<Rat> = None;
            for i in 0..self.m {
                if self.dead[i] || !self.t[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.t[i][self.cols] / &self.t[i][col];
                let better = match &best_ratio {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leaving.expect("leaving set")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    leaving = Some(i);
                }
            }
            let Some(row) = leaving else {
                return Err(Error::Lp("unbounded"));
            };
            self.pivot(row, col);
        }
    }

    fn set_costs(&mut self, costs: &[Rat]) {
        for j in 0..self.cols {
            self.t[self.m][j] = costs[j].clone();
        }
        self.t[self.m][self.cols] = Rat::zero();
        // eliminate basic columns from the cost row
        for i in 0..self.m {
            if self.dead[i] {
                continue;
            }
            let c = self.t[self.m][self.basis[i]].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..=self.cols {
                let delta = &c * &self.t[i][j];
                self.t[self.m][j] -= delta;
            }
        }
    }

    fn solve(mut self, lp: &Lp) -> Result<LpSolution> {
        // Phase 1: drive the artificial basis out.
        let mut costs = vec![Rat::zero(); self.cols];
        for j in self.art_start..self.cols {
            costs[j] = Rat::one();
        }
        self.set_costs(&costs);
        self.iterate(true)?;
        if self.t[self.m][self.cols].is_negative() {
            return Err(Error::Lp("infeasible"));
        }
        for i in 0..self.m {
            if self.basis[i] >= self.art_start {
                // basic artificial at zero: pivot it out or retire the row
                if let Some(col) = (0..self.art_start).find(|&j| !self.t[i][j].is_zero()) {
                    self.pivot(i, col);
                } else {
                    self.dead[i] = true;
                }
            }
        }

        // Phase 2: original objective, artificials barred from entering.
        let mut costs = vec![Rat::zero(); self.cols];
        for j in 0..self.n_struct {
            costs[j] = if lp.maximize {
                -lp.objective[j].clone()
            } else {
                lp.objective[j].clone()
            };
        }
        self.set_costs(&costs);
        self.iterate(false)?;

        let mut x = vec![Rat::zero(); self.n_struct];
        for i in 0..self.m {
            if !self.dead[i] && self.basis[i] < self.n_struct {
                x[self.basis[i]] = self.t[i][self.cols].clone();
            }
        }
        let mut duals = Vec::with_capacity(self.m);
        for i in 0..self.m {
            // reduced cost of the artificial column of row i equals -y_i
            let y = -self.t[self.m][self.art_start + i].clone();
            duals.push(if lp.maximize { -y } else { y });
        }
        let obj_min = -self.t[self.m][self.cols].clone();
        let objective = if lp.maximize { -obj_min } else { obj_min };
        Ok(LpSolution {
            objective,
            x,
            duals,
        })
    }
}

/// Solves a square rational linear system by Gaussian elimination.
/// Returns `None` for singular systems.
pub fn solve_linear_system(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &d;
        }
        b[col] /= &d;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_ratio, rat_u64};

    #[test]
    fn packing_lp_with_duals() {
        // max u1+u2+u3 s.t. u1+u2 <= 1, u2+u3 <= 1, u1+u3 <= 1
        let mut lp = Lp::new(true, vec![rat_u64(1), rat_u64(1), rat_u64(1)]);
        lp.add_row(vec![rat_u64(1), rat_u64(1), rat_u64(0)], Rel::Le, rat_u64(1));
        lp.add_row(vec![rat_u64(0), rat_u64(1), rat_u64(1)], Rel::Le, rat_u64(1));
        lp.add_row(vec![rat_u64(1), rat_u64(0), rat_u64(1)], Rel::Le, rat_u64(1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, rat_ratio(3, 2));
        // dual = fractional cover: all 1/2, total 3/2
        assert_eq!(sol.duals, vec![rat_ratio(1, 2); 3]);
        // complementary slackness: every dual > 0 row is tight
        for (i, y) in sol.duals.iter().enumerate() {
            assert!(y > &Rat::zero(), "row {i}");
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x1 + 2 x2 s.t. x1 + x2 = 1, x1 >= 1/4
        let mut lp = Lp::new(false, vec![rat_u64(1), rat_u64(2)]);
        lp.add_row(vec![rat_u64(1), rat_u64(1)], Rel::Eq, rat_u64(1));
        lp.add_row(vec![rat_u64(1), rat_u64(0)], Rel::Ge, rat_ratio(1, 4));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, rat_u64(1));
        assert_eq!(sol.x, vec![rat_u64(1), rat_u64(0)]);
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = Lp::new(false, vec![rat_u64(1)]);
        lp.add_row(vec![rat_u64(1)], Rel::Le, rat_u64(1));
        lp.add_row(vec![rat_u64(1)], Rel::Ge, rat_u64(2));
        assert!(matches!(lp.solve(), Err(Error::Lp("infeasible"))));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = Lp::new(true, vec![rat_u64(1), rat_u64(0)]);
        lp.add_row(vec![rat_u64(0), rat_u64(1)], Rel::Le, rat_u64(1));
        assert!(matches!(lp.solve(), Err(Error::Lp("unbounded"))));
    }

    #[test]
    fn linear_system() {
        let a = vec![
            vec![rat_u64(2), rat_u64(1)],
            vec![rat_u64(1), rat_u64(3)],
        ];
        let b = vec![rat_u64(5), rat_u64(10)];
        let x = solve_linear_system(a, b).unwrap();
        assert_eq!(x, vec![rat_u64(1), rat_u64(3)]);
        let singular = vec![
            vec![rat_u64(1), rat_u64(2)],
            vec![rat_u64(2), rat_u64(4)],
        ];
        assert!(solve_linear_system(singular, vec![rat_u64(1), rat_u64(2)]).is_none());
    }
}
