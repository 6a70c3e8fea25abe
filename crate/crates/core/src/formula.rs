//! CNF formulas with 2- and 3-literal clauses, NAE semantics, DIMACS I/O
//! and the variable incidence graph.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphs::{Graph, Vertex};

/// Variable index, starting at 1.
pub type Var = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    /// # Panics
    /// If `var` is 0.
    pub fn new(var: Var, positive: bool) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive }
    }

    pub fn pos(var: Var) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: Var) -> Self {
        Literal::new(var, false)
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    /// `None` for 0 or an index that does not fit a [`Var`].
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        let var = Var::try_from(lit.unsigned_abs()).ok().filter(|&v| v != 0)?;
        Some(Literal::new(var, lit > 0))
    }

    /// Truth value of the literal under `a`.
    pub fn eval(self, a: &Assignment) -> bool {
        a.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// A clause of two or three literals over distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(lits: Vec<Literal>) -> Result<Self> {
        if !(2..=3).contains(&lits.len()) {
            return Err(Error::InvalidClause(format!(
                "clause has {} literals, expected 2 or 3",
                lits.len()
            )));
        }
        for (i, l) in lits.iter().enumerate() {
            if lits[..i].iter().any(|o| o.var == l.var) {
                return Err(Error::InvalidClause(format!(
                    "variable {} repeated in clause",
                    l.var
                )));
            }
        }
        Ok(Clause { lits })
    }

    /// Monotone 3-clause `(a ∨ b ∨ c)`.
    pub fn triple(a: Var, b: Var, c: Var) -> Result<Self> {
        Clause::new(vec![Literal::pos(a), Literal::pos(b), Literal::pos(c)])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn is_monotone_triple(&self) -> bool {
        self.lits.len() == 3 && self.lits.iter().all(|l| l.positive)
    }

    /// Not all literal values are equal.
    pub fn nae_satisfied(&self, a: &Assignment) -> bool {
        let first = self.lits[0].eval(a);
        self.lits[1..].iter().any(|l| l.eval(a) != first)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self> {
        if let Some(v) = clauses
            .iter()
            .flat_map(Clause::vars)
            .find(|&v| v > num_vars)
        {
            return Err(Error::InvalidClause(format!(
                "variable {v} exceeds declared count {num_vars}"
            )));
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Monotone 3-CNF from variable triples.
    pub fn from_triples(num_vars: u32, triples: &[[Var; 3]]) -> Result<Self> {
        let clauses = triples
            .iter()
            .map(|t| Clause::triple(t[0], t[1], t[2]))
            .collect::<Result<Vec<_>>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Every clause has exactly three unnegated literals.
    pub fn is_monotone_3sat(&self) -> bool {
        self.clauses.iter().all(Clause::is_monotone_triple)
    }

    pub fn nae_satisfies(&self, a: &Assignment) -> bool {
        a.len() == self.num_vars as usize && self.clauses.iter().all(|c| c.nae_satisfied(a))
    }

    /// Number of clauses each variable occurs in; entry `v - 1` is variable `v`.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars as usize];
        for v in self.clauses.iter().flat_map(Clause::vars) {
            counts[v as usize - 1] += 1;
        }
        counts
    }

    pub(crate) fn require_monotone_3sat(&self) -> Result<()> {
        match self.clauses.iter().position(|c| !c.is_monotone_triple()) {
            None => Ok(()),
            Some(i) => Err(Error::NotMonotone(format!(
                "clause {} {} is not three unnegated literals",
                i + 1,
                self.clauses[i]
            ))),
        }
    }
}

pub fn is_monotone_3sat(f: &CnfFormula) -> bool {
    f.is_monotone_3sat()
}

pub fn nae_satisfies(f: &CnfFormula, a: &Assignment) -> bool {
    f.nae_satisfies(a)
}

pub fn occurrence_counts(f: &CnfFormula) -> Vec<usize> {
    f.occurrence_counts()
}

/// Total truth assignment over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// `values[v - 1]` is the value of variable `v`.
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(n: usize, value: bool) -> Self {
        Assignment {
            values: vec![value; n],
        }
    }

    pub fn value(&self, v: Var) -> bool {
        self.values[v as usize - 1]
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.values[v as usize - 1] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn complement(&self) -> Self {
        Assignment {
            values: self.values.iter().map(|&b| !b).collect(),
        }
    }

    /// Signed DIMACS literals, one per variable.
    pub fn to_literals(&self) -> Vec<i64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
            .collect()
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; clauses may span lines
/// and are terminated by `0`. Only 2- and 3-literal clauses over distinct
/// variables are accepted.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(lineno, "duplicate problem line"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                ["p", "cnf", n, m] => n.parse::<u32>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some(h) => header = Some(h),
                None => return Err(Error::parse(lineno, format!("malformed header `{line}`"))),
            }
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::parse(lineno, "clause before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid literal `{tok}`")))?;
            if lit == 0 {
                let clause = Clause::new(std::mem::take(&mut pending))
                    .map_err(|e| Error::parse(pending_line.max(lineno), e.to_string()))?;
                clauses.push(clause);
                continue;
            }
            let l = Literal::from_dimacs(lit)
                .filter(|l| l.var() <= n)
                .ok_or_else(|| {
                    Error::parse(lineno, format!("literal {lit} outside variables 1..={n}"))
                })?;
            if pending.is_empty() {
                pending_line = lineno;
            }
            pending.push(l);
        }
    }

    let Some((n, m)) = header else {
        return Err(Error::parse(last_line, "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(Error::parse(pending_line, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(n, clauses)
}

pub fn emit_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Which incidence graph to build from a monotone 3-CNF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidenceVariant {
    /// Variables only, adjacent iff they share a clause.
    A,
    /// Variant A plus one vertex per clause joined to its three variables.
    B,
}

/// Vertex ids assigned by [`incidence_graph`]: variable `v` is vertex `v`,
/// clause `i` (0-based) is vertex `clause_vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMap {
    pub var_vertices: Vec<Vertex>,
    pub clause_vertices: Vec<Vertex>,
}

pub fn incidence_graph(f: &CnfFormula, variant: IncidenceVariant) -> Result<(Graph, IncidenceMap)> {
    f.require_monotone_3sat()?;
    let n = f.num_vars as usize;
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for c in &f.clauses {
        let v: Vec<Var> = c.vars().collect();
        for i in 0..3 {
            for j in i + 1..3 {
                pairs.push((v[i].min(v[j]), v[i].max(v[j])));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut clause_vertices = Vec::new();
    let total = match variant {
        IncidenceVariant::A => n,
        IncidenceVariant::B => {
            for (i, c) in f.clauses.iter().enumerate() {
                let cv = (n + i + 1) as Vertex;
                clause_vertices.push(cv);
                pairs.extend(c.vars().map(|v| (v, cv)));
            }
            n + f.clauses.len()
        }
    };
    let g = Graph::from_edges(total, pairs)?;
    Ok((
        g,
        IncidenceMap {
            var_vertices: (1..=n as Vertex).collect(),
            clause_vertices,
        },
    ))
}
