//! Bit-exact file formats for truth tables.
//!
//! The `.bf` text format is two lines: `n=<N>` and then exactly `2^N`
//! characters from `{0,1,*}` in increasing integer-index order (`*` marks a
//! point outside the domain), with a required trailing newline. The JSON
//! format is the object `{"n": <int>, "values": "<same string>"}`.

use crate::bitmap::Bitmap;
use crate::error::{Error, Result};
use crate::function::BooleanFunction;
use serde::{Deserialize, Serialize};

/// The `{0,1,*}` table string of a function, in increasing index order.
pub fn table_string(f: &BooleanFunction) -> String {
    (0..f.size() as u32)
        .map(|i| match f.value(i) {
            None => '*',
            Some(false) => '0',
            Some(true) => '1',
        })
        .collect()
}

fn function_from_table(n: usize, table: &str, line: usize) -> Result<BooleanFunction> {
    let size = 1usize
        .checked_shl(n as u32)
        .filter(|_| n <= crate::function::MAX_ARITY)
        .ok_or(Error::ArityOutOfRange(n, crate::function::MAX_ARITY))?;
    if table.len() != size {
        return Err(Error::Parse {
            line,
            reason: format!("expected {size} table characters, got {}", table.len()),
        });
    }
    let mut domain = Bitmap::zeros(size);
    let mut values = Bitmap::zeros(size);
    for (i, c) in table.chars().enumerate() {
        match c {
            '*' => {}
            '0' => domain.set(i),
            '1' => {
                domain.set(i);
                values.set(i);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!("character {other:?} outside {{0,1,*}} at offset {i}"),
                })
            }
        }
    }
    BooleanFunction::new(n, domain, values)
}

/// Parses the `.bf` text format.
pub fn parse_bf(input: &str) -> Result<BooleanFunction> {
    let mut lines = input.split_inclusive('\n');
    let header = lines.next().unwrap_or("");
    let header_body = header.strip_suffix('\n').ok_or(Error::Parse {
        line: 1,
        reason: "missing newline after header".into(),
    })?;
    let n: usize = header_body
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or(Error::Parse {
            line: 1,
            reason: format!("expected header n=<N>, got {header_body:?}"),
        })?;
    let table = lines.next().ok_or(Error::Parse {
        line: 2,
        reason: "missing table line".into(),
    })?;
    let table_body = table.strip_suffix('\n').ok_or(Error::Parse {
        line: 2,
        reason: "missing trailing newline".into(),
    })?;
    if lines.next().is_some() {
        return Err(Error::Parse {
            line: 3,
            reason: "trailing content after table line".into(),
        });
    }
    function_from_table(n, table_body, 2)
}

/// Emits the canonical `.bf` encoding, with trailing newline.
pub fn emit_bf(f: &BooleanFunction) -> String {
    format!("n={}\n{}\n", f.n(), table_string(f))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTable {
    n: usize,
    values: String,
}

/// Parses the JSON table format.
pub fn parse_json(input: &str) -> Result<BooleanFunction> {
    let t: JsonTable = serde_json::from_str(input).map_err(|e| Error::Json(e.to_string()))?;
    function_from_table(t.n, &t.values, 1)
}

/// Emits the canonical JSON encoding (single line, no trailing newline).
pub fn emit_json(f: &BooleanFunction) -> String {
    serde_json::to_string(&JsonTable {
        n: f.n(),
        values: table_string(f),
    })
    .expect("table serialization cannot fail")
}
