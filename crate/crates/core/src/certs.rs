//! Witness and certificate file formats.
//!
//! ```text
//! s NAE-SATISFIABLE          s CUT-FOUND            k 3
//! v 1 -2 3 0                 v 2 5 0                1 1
//!                                                   2 2
//! s NAE-UNSATISFIABLE        s NO-CUT               3 3
//! ```
//!
//! The `v` line of an assignment lists every variable with its sign; the `v`
//! line of a cut lists the vertices on side A. Lines starting with `c` are
//! comments everywhere.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::Assignment;
use crate::graphs::{Colouring, Cut, Vertex};

pub const NAE_SAT: &str = "s NAE-SATISFIABLE";
pub const NAE_UNSAT: &str = "s NAE-UNSATISFIABLE";
pub const CUT_FOUND: &str = "s CUT-FOUND";
pub const NO_CUT: &str = "s NO-CUT";
pub const COLOURING_FOUND: &str = "s COLOURING-FOUND";
pub const NO_COLOURING: &str = "s NO-COLOURING";

pub fn write_nae_witness(a: Option<&Assignment>) -> String {
    match a {
        None => format!("{NAE_UNSAT}\n"),
        Some(a) => {
            let mut out = format!("{NAE_SAT}\nv");
            for l in a.to_literals() {
                let _ = write!(out, " {l}");
            }
            out.push_str(" 0\n");
            out
        }
    }
}

pub fn write_cut_witness(cut: Option<&Cut>) -> String {
    match cut {
        None => format!("{NO_CUT}\n"),
        Some(cut) => {
            let mut out = format!("{CUT_FOUND}\nv");
            for v in cut.side_a() {
                let _ = write!(out, " {v}");
            }
            out.push_str(" 0\n");
            out
        }
    }
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut out = format!("k {}\n", c.k());
    for (i, col) in c.colours().iter().enumerate() {
        let _ = writeln!(out, "{} {col}", i + 1);
    }
    out
}

/// Status line and the integers of all `v` lines (terminating 0 removed).
fn split_witness(text: &str) -> Result<(String, Vec<i64>)> {
    let mut status = None;
    let mut values = Vec::new();
    let mut terminated = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with("s ") {
            if status.is_some() {
                return Err(Error::parse(lineno, "duplicate status line"));
            }
            status = Some(line.split_whitespace().collect::<Vec<_>>().join(" "));
        } else if let Some(rest) = line.strip_prefix('v') {
            if terminated {
                return Err(Error::parse(lineno, "values after terminating 0"));
            }
            for tok in rest.split_whitespace() {
                let x: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("invalid value `{tok}`")))?;
                if x == 0 {
                    terminated = true;
                } else if terminated {
                    return Err(Error::parse(lineno, "values after terminating 0"));
                } else {
                    values.push(x);
                }
            }
        } else {
            return Err(Error::parse(lineno, format!("unexpected line `{line}`")));
        }
    }
    let status = status.ok_or_else(|| Error::parse(0, "missing status line"))?;
    if !values.is_empty() && !terminated {
        return Err(Error::parse(0, "value list not terminated by 0"));
    }
    Ok((status, values))
}

/// `Ok(None)` for an UNSAT claim. Every variable `1..=n` must appear exactly
/// once, where `n` is the largest index listed.
pub fn parse_nae_witness(text: &str) -> Result<Option<Assignment>> {
    let (status, values) = split_witness(text)?;
    match status.as_str() {
        NAE_UNSAT => Ok(None),
        NAE_SAT => {
            let n = values.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as usize;
            let mut slots: Vec<Option<bool>> = vec![None; n];
            for x in values {
                let slot = &mut slots[x.unsigned_abs() as usize - 1];
                if slot.is_some() {
                    return Err(Error::parse(0, format!("variable {} listed twice", x.abs())));
                }
                *slot = Some(x > 0);
            }
            slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| Error::parse(0, format!("variable {} missing", i + 1))))
                .collect::<Result<Vec<_>>>()
                .map(|v| Some(Assignment::new(v)))
        }
        other => Err(Error::parse(0, format!("unknown status `{other}`"))),
    }
}

/// `Ok(None)` for a NO-CUT claim. The listed vertices form side A of a cut
/// of an `n`-vertex graph.
pub fn parse_cut_witness(text: &str, n: usize) -> Result<Option<Cut>> {
    let (status, values) = split_witness(text)?;
    match status.as_str() {
        NO_CUT => Ok(None),
        CUT_FOUND => {
            let mut side_a = Vec::with_capacity(values.len());
            for x in values {
                let v = Vertex::try_from(x)
                    .map_err(|_| Error::parse(0, format!("invalid vertex {x}")))?;
                if side_a.contains(&v) {
                    return Err(Error::parse(0, format!("vertex {v} listed twice")));
                }
                side_a.push(v);
            }
            Cut::from_side_a(n, side_a).map(Some)
        }
        other => Err(Error::parse(0, format!("unknown status `{other}`"))),
    }
}

/// Parses a colouring certificate: `k <k>` then `<vertex> <colour>` lines
/// covering vertices `1..=n` exactly once. A leading status line is skipped.
pub fn parse_colouring(text: &str, n: usize) -> Result<Colouring> {
    let mut k = None;
    let mut colours: Vec<Option<u32>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line == COLOURING_FOUND {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["k", kk] => {
                if k.is_some() {
                    return Err(Error::parse(lineno, "duplicate `k` line"));
                }
                k = Some(
                    kk.parse::<u32>()
                        .map_err(|_| Error::parse(lineno, "malformed `k` line"))?,
                );
            }
            [v, c] => {
                let (Ok(v), Ok(c)) = (v.parse::<usize>(), c.parse::<u32>()) else {
                    return Err(Error::parse(lineno, "malformed colour line"));
                };
                if v == 0 || v > n {
                    return Err(Error::parse(lineno, format!("vertex {v} outside 1..={n}")));
                }
                if colours[v - 1].replace(c).is_some() {
                    return Err(Error::parse(lineno, format!("vertex {v} coloured twice")));
                }
            }
            _ => return Err(Error::parse(lineno, format!("unexpected line `{line}`"))),
        }
    }
    let k = k.ok_or_else(|| Error::parse(0, "missing `k` line"))?;
    let colours = colours
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::parse(0, format!("vertex {} uncoloured", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Colouring::new(k, colours))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nae_witness_text() {
        let a = Assignment::new(vec![true, false, true]);
        let text = write_nae_witness(Some(&a));
        assert_eq!(text, "s NAE-SATISFIABLE\nv 1 -2 3 0\n");
        assert_eq!(parse_nae_witness(&text).unwrap(), Some(a));
        assert_eq!(write_nae_witness(None), "s NAE-UNSATISFIABLE\n");
        assert_eq!(parse_nae_witness("s NAE-UNSATISFIABLE\n").unwrap(), None);
        assert_eq!(
            write_nae_witness(Some(&Assignment::all(0, false))),
            "s NAE-SATISFIABLE\nv 0\n"
        );
    }

    #[test]
    fn nae_witness_errors() {
        assert!(parse_nae_witness("v 1 2 0\n").is_err());
        assert!(parse_nae_witness("s NAE-SATISFIABLE\nv 1 -1 0\n").is_err());
        assert!(parse_nae_witness("s NAE-SATISFIABLE\nv 1 3 0\n").is_err());
        assert!(parse_nae_witness("s NAE-SATISFIABLE\nv 1 2\n").is_err());
        assert!(parse_nae_witness("s MAYBE\n").is_err());
    }

    #[test]
    fn cut_witness_text() {
        let cut = Cut::from_side_a(4, [2, 4]).unwrap();
        let text = write_cut_witness(Some(&cut));
        assert_eq!(text, "s CUT-FOUND\nv 2 4 0\n");
        assert_eq!(parse_cut_witness(&text, 4).unwrap(), Some(cut));
        assert_eq!(parse_cut_witness("s NO-CUT\n", 4).unwrap(), None);
        assert!(parse_cut_witness("s CUT-FOUND\nv 5 0\n", 4).is_err());
        assert!(parse_cut_witness("s CUT-FOUND\nv 2 2 0\n", 4).is_err());
    }

    #[test]
    fn colouring_text() {
        let c = Colouring::new(3, vec![1, 2, 3]);
        let text = write_colouring(&c);
        assert_eq!(text, "k 3\n1 1\n2 2\n3 3\n");
        assert_eq!(parse_colouring(&text, 3).unwrap(), c);
        assert!(parse_colouring("k 3\n1 1\n2 2\n", 3).is_err());
        assert!(parse_colouring("1 1\n", 1).is_err());
        assert!(parse_colouring("k 2\n1 1\n1 2\n", 1).is_err());
        let with_status = format!("{COLOURING_FOUND}\n{text}");
        assert_eq!(parse_colouring(&with_status, 3).unwrap(), c);
    }
}
