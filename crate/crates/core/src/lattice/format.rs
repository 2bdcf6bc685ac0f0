//! Line format for families: one subset per line as a sorted comma-separated
//! element list (`1,3,4`), `-` for the empty set. Blank lines and lines
//! starting with `#` are ignored.

use super::{SetFamily, SubsetMask, MAX_FAMILY_N};
use crate::error::{Error, Result};

/// Parses a family. If `n` is `None` the ground set is the largest element
/// mentioned (at least 1).
pub fn parse_family(text: &str, n: Option<u32>) -> Result<SetFamily> {
    let mut members = Vec::new();
    let mut max_element = 0u32;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "-" {
            members.push(SubsetMask::EMPTY);
            continue;
        }
        let mut mask = 0u64;
        for tok in line.split(',') {
            let tok = tok.trim();
            let e: u32 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected a positive element, found {tok:?}"),
            })?;
            if e == 0 || e > MAX_FAMILY_N {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("element {e} outside 1..={MAX_FAMILY_N}"),
                });
            }
            if let Some(limit) = n {
                if e > limit {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("element {e} outside ground set [{limit}]"),
                    });
                }
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("element {e} repeated"),
                });
            }
            mask |= bit;
            max_element = max_element.max(e);
        }
        members.push(SubsetMask(mask));
    }
    let n = n.unwrap_or(max_element.max(1));
    SetFamily::new(n, members).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })
}

/// Renders a family in the line format, one member per line, in level order.
pub fn render_family(family: &SetFamily) -> String {
    let mut out = String::new();
    for line in family.lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
