//! Auditable query transcripts emitted by every algorithm run.

use serde::Serialize;

/// Ordered record of oracle queries with phase labels. Phase marks point at
/// offsets into the query list; queries between consecutive marks belong to
/// the earlier phase.
#[derive(Debug, Clone, Default, Serialize)]
pub struct QueryTranscript {
    pub queries: Vec<(usize, bool)>,
    pub phase_marks: Vec<(String, usize)>,
    /// Irregularities observed during the run (never errors): e.g. the
    /// oracle input lying outside the promise an algorithm assumes.
    pub flags: Vec<String>,
    pub seed: Option<u64>,
    pub verdict: Option<String>,
}

impl QueryTranscript {
    pub fn new(seed: Option<u64>) -> Self {
        QueryTranscript {
            seed,
            ..Default::default()
        }
    }

    pub fn mark(&mut self, label: impl Into<String>) {
        self.phase_marks.push((label.into(), self.queries.len()));
    }

    pub fn flag(&mut self, note: impl Into<String>) {
        self.flags.push(note.into());
    }

    pub fn record(&mut self, pos: usize, bit: bool) {
        self.queries.push((pos, bit));
    }

    pub fn total(&self) -> usize {
        self.queries.len()
    }

    /// Number of queries issued within phases carrying `label`.
    pub fn phase_total(&self, label: &str) -> usize {
        let mut total = 0;
        for (k, (name, start)) in self.phase_marks.iter().enumerate() {
            if name != label {
                continue;
            }
            let end = self
                .phase_marks
                .get(k + 1)
                .map_or(self.queries.len(), |(_, s)| *s);
            total += end - start;
        }
        total
    }

    /// True iff every recorded bit matches the true input `x`.
    pub fn replay_matches(&self, x: u32) -> bool {
        self.queries.iter().all(|&(pos, bit)| (x >> pos & 1 == 1) == bit)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("transcript serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_partition_queries() {
        let mut t = QueryTranscript::new(Some(7));
        t.mark("a");
        t.record(0, true);
        t.record(3, false);
        t.mark("b");
        t.record(1, true);
        assert_eq!(t.total(), 3);
        assert_eq!(t.phase_total("a"), 2);
        assert_eq!(t.phase_total("b"), 1);
        assert!(t.replay_matches(0b0011));
        assert!(!t.replay_matches(0b1011));
    }
}
