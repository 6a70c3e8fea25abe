//! Variable splitting: every variable occurring `k > 1` times is replaced by
//! `k` copies `y_1..y_k`, one per occurrence, and the copies are tied
//! together by the equality clauses `(y_i ∨ ¬y_{i+1})`.
//!
//! Under NAE semantics a 2-clause `(y_i ∨ ¬y_{i+1})` holds exactly when
//! `y_i = y_{i+1}`, so the rewritten formula is NAE-satisfiable iff the
//! original is.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, CnfFormula, Literal, Var};

/// Where a clause of the transformed formula came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseOrigin {
    /// Rewritten copy of source clause `source` (0-based).
    Prime { source: usize },
    /// `(y_link ∨ ¬y_{link+1})` for `original`; `link` is 1-based.
    Equality { original: Var, link: usize },
}

/// Provenance of [`split_repeated_variables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformMap {
    /// Entry `x - 1` lists the replacement variables of original `x`.
    replacements: Vec<Vec<Var>>,
    num_source_clauses: usize,
}

impl TransformMap {
    pub fn identity(num_vars: u32, num_clauses: usize) -> Self {
        TransformMap {
            replacements: (1..=num_vars).map(|v| vec![v]).collect(),
            num_source_clauses: num_clauses,
        }
    }

    pub fn num_original_vars(&self) -> usize {
        self.replacements.len()
    }

    pub fn num_output_vars(&self) -> usize {
        self.replacements.iter().map(Vec::len).sum()
    }

    pub fn num_source_clauses(&self) -> usize {
        self.num_source_clauses
    }

    pub fn num_equality_clauses(&self) -> usize {
        self.replacements.iter().map(|r| r.len() - 1).sum()
    }

    pub fn replacements(&self, original: Var) -> &[Var] {
        &self.replacements[original as usize - 1]
    }

    /// Origin of every output clause, in output order: the rewritten source
    /// clauses first, then the equality chains by original variable.
    pub fn clause_origins(&self) -> Vec<ClauseOrigin> {
        let mut out: Vec<ClauseOrigin> = (0..self.num_source_clauses)
            .map(|source| ClauseOrigin::Prime { source })
            .collect();
        for (i, reps) in self.replacements.iter().enumerate() {
            for link in 1..reps.len() {
                out.push(ClauseOrigin::Equality {
                    original: i as Var + 1,
                    link,
                });
            }
        }
        out
    }

    /// Text form: one `map <orig> <y1> <y2> ...` line per original variable
    /// followed by `clauses <m>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, reps) in self.replacements.iter().enumerate() {
            let _ = write!(out, "map {}", i + 1);
            for y in reps {
                let _ = write!(out, " {y}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "clauses {}", self.num_source_clauses);
        out
    }

    /// Parses [`TransformMap::to_text`] output. Lines may carry a leading
    /// `c ` so the map can be read back from DIMACS comments; other lines are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(Var, Vec<Var>, usize)> = Vec::new();
        let mut num_clauses = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            let line = line.strip_prefix("c ").map(str::trim_start).unwrap_or(line);
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("map") => {
                    let nums = toks
                        .map(|t| t.parse::<Var>().ok().filter(|&v| v > 0))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::parse(lineno, "malformed map line"))?;
                    let Some((&orig, reps)) = nums.split_first() else {
                        return Err(Error::parse(lineno, "map line without variable"));
                    };
                    if reps.is_empty() {
                        return Err(Error::parse(lineno, "map line without replacements"));
                    }
                    entries.push((orig, reps.to_vec(), lineno));
                }
                Some("clauses") => {
                    let m = toks
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(lineno, "malformed clauses line"))?;
                    num_clauses = Some(m);
                }
                _ => {}
            }
        }
        entries.sort_by_key(|e| e.0);
        let mut replacements = Vec::with_capacity(entries.len());
        for (i, (orig, reps, lineno)) in entries.into_iter().enumerate() {
            if orig as usize != i + 1 {
                return Err(Error::parse(lineno, format!("map entry for variable {orig} out of sequence")));
            }
            replacements.push(reps);
        }
        let mut seen = HashSet::new();
        if let Some(y) = replacements.iter().flatten().find(|&&y| !seen.insert(y)) {
            return Err(Error::parse(0, format!("replacement variable {y} listed twice")));
        }
        let num_source_clauses =
            num_clauses.ok_or_else(|| Error::parse(0, "missing `clauses` line"))?;
        Ok(TransformMap {
            replacements,
            num_source_clauses,
        })
    }
}

/// Rewrites a monotone 3-CNF so that every variable occurs at most three
/// times.
///
/// Occurrences are ordered by (clause index, position). The first copy of a
/// variable keeps its index; further copies get fresh indices from `n + 1`
/// upward, allocated by original variable in increasing order. The output
/// lists the rewritten clauses in source order, then the equality chains in
/// original-variable order.
pub fn split_repeated_variables(f: &CnfFormula) -> Result<(CnfFormula, TransformMap)> {
    f.require_monotone_3sat()?;
    let n = f.num_vars();
    let counts = f.occurrence_counts();

    let mut next = n + 1;
    let replacements: Vec<Vec<Var>> = counts
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut reps = vec![i as Var + 1];
            for _ in 1..k {
                reps.push(next);
                next += 1;
            }
            reps
        })
        .collect();

    let mut seen = vec![0usize; n as usize];
    let mut clauses = Vec::with_capacity(f.num_clauses() + counts.len());
    for c in f.clauses() {
        let lits = c
            .vars()
            .map(|v| {
                let j = &mut seen[v as usize - 1];
                let y = replacements[v as usize - 1][*j];
                *j += 1;
                Literal::pos(y)
            })
            .collect();
        clauses.push(Clause::new(lits)?);
    }
    for reps in &replacements {
        for pair in reps.windows(2) {
            clauses.push(Clause::new(vec![Literal::pos(pair[0]), Literal::neg(pair[1])])?);
        }
    }

    let out = CnfFormula::new(next - 1, clauses)?;
    Ok((
        out,
        TransformMap {
            replacements,
            num_source_clauses: f.num_clauses(),
        },
    ))
}

/// The six structural properties of a transformed formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Properties {
    /// 1. Every clause is `(x ∨ y ∨ z)` or `(x ∨ ¬y)`.
    pub clause_shapes: bool,
    /// 2. Every variable occurs at most three times.
    pub at_most_three_occurrences: bool,
    /// 3. No two variables share more than one clause.
    pub pairs_share_at_most_one_clause: bool,
    /// 4. Every occurring variable lies in exactly one 3-clause.
    pub exactly_one_triple: bool,
    /// 5. A variable occurring once or twice has an unnegated occurrence.
    pub low_occurrence_unnegated: bool,
    /// 6. A variable occurring three times is negated exactly once.
    pub triple_occurrence_one_negation: bool,
}

impl Properties {
    pub fn as_array(&self) -> [bool; 6] {
        [
            self.clause_shapes,
            self.at_most_three_occurrences,
            self.pairs_share_at_most_one_clause,
            self.exactly_one_triple,
            self.low_occurrence_unnegated,
            self.triple_occurrence_one_negation,
        ]
    }

    pub fn all(&self) -> bool {
        self.as_array().iter().all(|&b| b)
    }

    /// 1-based number of the first failing property.
    pub fn first_violation(&self) -> Option<u8> {
        self.as_array()
            .iter()
            .position(|&b| !b)
            .map(|i| i as u8 + 1)
    }
}

pub fn check_properties(f: &CnfFormula) -> Properties {
    let n = f.num_vars() as usize;
    let mut occurrences = vec![0usize; n];
    let mut negations = vec![0usize; n];
    let mut triples = vec![0usize; n];
    let mut clause_shapes = true;
    let mut pairs = HashSet::new();
    let mut pairs_ok = true;

    for c in f.clauses() {
        let lits = c.literals();
        let negs = lits.iter().filter(|l| !l.is_positive()).count();
        clause_shapes &= match lits.len() {
            3 => negs == 0,
            2 => negs == 1,
            _ => false,
        };
        for l in lits {
            let i = l.var() as usize - 1;
            occurrences[i] += 1;
            if !l.is_positive() {
                negations[i] += 1;
            }
            if lits.len() == 3 {
                triples[i] += 1;
            }
        }
        for (i, a) in lits.iter().enumerate() {
            for b in &lits[i + 1..] {
                let key = (a.var().min(b.var()), a.var().max(b.var()));
                pairs_ok &= pairs.insert(key);
            }
        }
    }

    let occurring = || (0..n).filter(|&i| occurrences[i] > 0);
    Properties {
        clause_shapes,
        at_most_three_occurrences: occurrences.iter().all(|&k| k <= 3),
        pairs_share_at_most_one_clause: pairs_ok,
        exactly_one_triple: occurring().all(|i| triples[i] == 1),
        low_occurrence_unnegated: occurring()
            .filter(|&i| occurrences[i] <= 2)
            .all(|i| negations[i] < occurrences[i]),
        triple_occurrence_one_negation: occurring()
            .filter(|&i| occurrences[i] == 3)
            .all(|i| negations[i] == 1),
    }
}

/// Gives every copy of `x` the value `a(x)`.
pub fn lift_assignment(map: &TransformMap, a: &Assignment) -> Result<Assignment> {
    if a.len() != map.num_original_vars() {
        return Err(Error::SizeMismatch {
            expected: map.num_original_vars(),
            found: a.len(),
        });
    }
    let mut out = Assignment::all(map.num_output_vars(), false);
    for (i, reps) in map.replacements.iter().enumerate() {
        let value = a.value(i as Var + 1);
        for &y in reps {
            out.set(y, value);
        }
    }
    Ok(out)
}

/// Reads `a(x)` off the copies of `x`, which must all agree.
pub fn project_assignment(map: &TransformMap, a: &Assignment) -> Result<Assignment> {
    if a.len() != map.num_output_vars() {
        return Err(Error::SizeMismatch {
            expected: map.num_output_vars(),
            found: a.len(),
        });
    }
    map.replacements
        .iter()
        .enumerate()
        .map(|(i, reps)| {
            let value = a.value(reps[0]);
            if reps.iter().all(|&y| a.value(y) == value) {
                Ok(value)
            } else {
                Err(Error::ChainViolated(i as Var + 1))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Assignment::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{emit_cnf, parse_cnf};

    fn f(n: u32, t: &[[Var; 3]]) -> CnfFormula {
        CnfFormula::from_triples(n, t).unwrap()
    }

    #[test]
    fn no_repeats_is_identity() {
        let src = f(3, &[[1, 2, 3]]);
        let (out, map) = split_repeated_variables(&src).unwrap();
        assert_eq!(out, src);
        assert_eq!(map, TransformMap::identity(3, 1));
    }

    #[test]
    fn single_repeat() {
        let (out, map) = split_repeated_variables(&f(5, &[[1, 2, 3], [1, 4, 5]])).unwrap();
        let want = parse_cnf("p cnf 6 3\n1 2 3 0\n6 4 5 0\n1 -6 0\n").unwrap();
        assert_eq!(out, want);
        assert_eq!(map.replacements(1), &[1, 6]);
        assert!(emit_cnf(&out).contains("-6"));
        assert!(!out.is_monotone_3sat());
        assert!(out.occurrence_counts().iter().all(|&k| k <= 3));
    }

    #[test]
    fn two_repeats() {
        let (out, map) = split_repeated_variables(&f(4, &[[1, 2, 3], [1, 2, 4]])).unwrap();
        assert_eq!(out.num_vars(), 6);
        assert_eq!(out.num_clauses(), 4);
        assert_eq!(map.num_equality_clauses(), 2);
        assert_eq!(map.replacements(1), &[1, 5]);
        assert_eq!(map.replacements(2), &[2, 6]);
        assert_eq!(
            map.clause_origins(),
            vec![
                ClauseOrigin::Prime { source: 0 },
                ClauseOrigin::Prime { source: 1 },
                ClauseOrigin::Equality { original: 1, link: 1 },
                ClauseOrigin::Equality { original: 2, link: 1 },
            ]
        );
        assert!(check_properties(&out).all());
    }

    #[test]
    fn rejects_non_monotone() {
        let two = parse_cnf("p cnf 2 1\n1 -2 0").unwrap();
        assert!(matches!(split_repeated_variables(&two), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn unused_variables_stay_isolated() {
        let (out, map) = split_repeated_variables(&f(5, &[[1, 2, 3]])).unwrap();
        assert_eq!(out.num_vars(), 5);
        assert_eq!(map.replacements(5), &[5]);
        assert!(check_properties(&out).all());
    }

    #[test]
    fn property_failures() {
        let p = check_properties(&f(4, &[[1, 2, 3], [1, 2, 4]]));
        assert!(!p.pairs_share_at_most_one_clause);
        assert_eq!(p.first_violation(), Some(3));

        let p = check_properties(&parse_cnf("p cnf 2 1\n1 -2 0").unwrap());
        assert!(!p.exactly_one_triple);

        let p = check_properties(&parse_cnf("p cnf 2 1\n1 2 0").unwrap());
        assert!(!p.clause_shapes);

        let four = f(9, &[[1, 2, 3], [1, 4, 5], [1, 6, 7], [1, 8, 9]]);
        assert!(!check_properties(&four).at_most_three_occurrences);
    }

    #[test]
    fn negation_counts() {
        // x1 in a triple plus twice negated.
        let t = "p cnf 5 3\n1 2 3 0\n4 -1 0\n5 -1 0\n";
        let p = check_properties(&parse_cnf(t).unwrap());
        assert!(!p.triple_occurrence_one_negation);
        // x4 occurs once, negated.
        let t = "p cnf 4 2\n1 2 3 0\n1 -4 0\n";
        let p = check_properties(&parse_cnf(t).unwrap());
        assert!(!p.low_occurrence_unnegated);
    }

    #[test]
    fn last_copy_has_one_positive_occurrence() {
        let (out, map) = split_repeated_variables(&f(7, &[[1, 2, 3], [1, 4, 5], [1, 6, 7]])).unwrap();
        let last = *map.replacements(1).last().unwrap();
        let signs: Vec<bool> = out
            .clauses()
            .iter()
            .flat_map(|c| c.literals().iter().copied())
            .filter(|l| l.var() == last)
            .map(|l| l.is_positive())
            .collect();
        assert_eq!(signs, vec![true, false]);
        assert!(check_properties(&out).low_occurrence_unnegated);
    }

    #[test]
    fn lift_and_project() {
        let (_, map) = split_repeated_variables(&f(5, &[[1, 2, 3], [1, 4, 5]])).unwrap();
        let a = Assignment::new(vec![true, false, true, false, true]);
        let lifted = lift_assignment(&map, &a).unwrap();
        assert!(lifted.value(1) && lifted.value(6));
        assert_eq!(project_assignment(&map, &lifted).unwrap(), a);

        let mut broken = lifted.clone();
        broken.set(6, false);
        assert_eq!(project_assignment(&map, &broken), Err(Error::ChainViolated(1)));

        let all_false = Assignment::all(6, false);
        assert!(!project_assignment(&map, &all_false).unwrap().value(1));

        let id = TransformMap::identity(3, 1);
        let a = Assignment::new(vec![true, false, false]);
        assert_eq!(lift_assignment(&id, &a).unwrap(), a);
        assert_eq!(project_assignment(&id, &a).unwrap(), a);
    }

    #[test]
    fn map_text_round_trip() {
        let (_, map) = split_repeated_variables(&f(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4]])).unwrap();
        let text = map.to_text();
        assert!(text.starts_with("map 1 1 5 6\n"));
        assert_eq!(TransformMap::parse(&text).unwrap(), map);
        let commented: String = text.lines().map(|l| format!("c {l}\n")).collect();
        assert_eq!(TransformMap::parse(&commented).unwrap(), map);
        assert!(TransformMap::parse("map 1 1\n").is_err());
        assert!(TransformMap::parse("map 2 2\nclauses 0\n").is_err());
        assert!(TransformMap::parse("map 1 1 3\nmap 2 3\nclauses 1\n").is_err());
    }
}
