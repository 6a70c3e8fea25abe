//! Exact search oracles, the 4-colourable fast paths, and the seeded
//! instance generator.
//!
//! Both searches return the lexicographically smallest witness. They walk
//! variables (vertices) in index order, try `false` (side B) before `true`
//! (side A), and prune with rules that only discard values no witness can
//! take, so the first leaf reached is the smallest witness:
//!
//! * a clause (triangle) with all but one member fixed and the fixed members
//!   equal forces the last member to the opposite value;
//! * an unfixed triangle `T` whose members all neighbour a fixed vertex on
//!   side A and a fixed vertex on side B is infeasible, since two members of
//!   `T` share a side and close a triangle with one of those neighbours.
//!
//! The budget counts search nodes (decisions), not candidate assignments.

use std::collections::{HashMap, HashSet};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::formula::{incidence_graph, Assignment, Clause, CnfFormula, IncidenceVariant, Literal, Var};
use crate::graphs::{colouring_defect, verify_cut_triangle_free, Colouring, Cut, Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    max_states: u64,
}

impl SearchBudget {
    pub const DEFAULT_STATES: u64 = 1 << 24;

    /// # Panics
    /// If `max_states` is 0.
    pub fn new(max_states: u64) -> Self {
        assert!(max_states > 0, "search budget must be positive");
        SearchBudget { max_states }
    }

    pub fn max_states(&self) -> u64 {
        self.max_states
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(Self::DEFAULT_STATES)
    }
}

/// Smallest NAE-satisfying assignment of `f` (variable 1 most significant,
/// false before true), or `None` if there is none.
pub fn brute_force_nae(f: &CnfFormula, budget: SearchBudget) -> Result<Option<Assignment>> {
    let mut search = NaeSearch::new(f, budget.max_states);
    if !search.run()? {
        return Ok(None);
    }
    let a = Assignment::new(search.value.iter().map(|v| v.unwrap_or(false)).collect());
    assert!(f.nae_satisfies(&a), "NAE search returned a non-witness");
    Ok(Some(a))
}

struct NaeSearch<'a> {
    clauses: &'a [Clause],
    value: Vec<Option<bool>>,
    /// Clause indices per variable.
    occurs: Vec<Vec<usize>>,
    /// For each all-positive 3-clause, the variables `v` such that `v`
    /// together with any two of its members is also a clause.
    completers: Vec<Vec<Var>>,
    /// Clauses that each variable completes.
    completes: Vec<Vec<usize>>,
    trail: Vec<Var>,
    nodes: u64,
    budget: u64,
}

impl<'a> NaeSearch<'a> {
    fn new(f: &'a CnfFormula, budget: u64) -> Self {
        let n = f.num_vars() as usize;
        let clauses = f.clauses();
        let mut occurs = vec![Vec::new(); n];
        for (i, c) in clauses.iter().enumerate() {
            for v in c.vars() {
                occurs[v as usize - 1].push(i);
            }
        }

        let mut triples: HashSet<[Var; 3]> = HashSet::new();
        let mut thirds: HashMap<(Var, Var), Vec<Var>> = HashMap::new();
        for c in clauses.iter().filter(|c| c.is_monotone_triple()) {
            let mut t: [Var; 3] = [0; 3];
            for (slot, v) in t.iter_mut().zip(c.vars()) {
                *slot = v;
            }
            t.sort_unstable();
            if triples.insert(t) {
                thirds.entry((t[0], t[1])).or_default().push(t[2]);
                thirds.entry((t[0], t[2])).or_default().push(t[1]);
                thirds.entry((t[1], t[2])).or_default().push(t[0]);
            }
        }
        let is_triple = |a: Var, b: Var, c: Var| {
            let mut t = [a, b, c];
            t.sort_unstable();
            triples.contains(&t)
        };
        let mut completers = vec![Vec::new(); clauses.len()];
        let mut completes = vec![Vec::new(); n];
        for (i, c) in clauses.iter().enumerate() {
            if !c.is_monotone_triple() {
                continue;
            }
            let mut t: Vec<Var> = c.vars().collect();
            t.sort_unstable();
            let mut found: Vec<Var> = thirds
                .get(&(t[0], t[1]))
                .into_iter()
                .flatten()
                .copied()
                .filter(|&v| v != t[2] && is_triple(v, t[1], t[2]) && is_triple(v, t[0], t[2]))
                .collect();
            found.sort_unstable();
            found.dedup();
            for &v in &found {
                completes[v as usize - 1].push(i);
            }
            completers[i] = found;
        }

        NaeSearch {
            clauses,
            value: vec![None; n],
            occurs,
            completers,
            completes,
            trail: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn lit_value(&self, l: Literal) -> Option<bool> {
        self.value[l.var() as usize - 1].map(|v| v == l.is_positive())
    }

    /// Assigns `var` and propagates; `false` on conflict. The trail records
    /// every assignment made so the caller can undo them.
    fn assign(&mut self, var: Var, val: bool) -> bool {
        let mut queue = vec![(var, val)];
        while let Some((v, b)) = queue.pop() {
            match self.value[v as usize - 1] {
                Some(cur) if cur == b => continue,
                Some(_) => return false,
                None => {}
            }
            self.value[v as usize - 1] = Some(b);
            self.trail.push(v);

            for &ci in &self.occurs[v as usize - 1] {
                let lits = self.clauses[ci].literals();
                let mut open = None;
                let mut open_count = 0;
                let mut seen = [false; 2];
                for &l in lits {
                    match self.lit_value(l) {
                        Some(x) => seen[x as usize] = true,
                        None => {
                            open_count += 1;
                            open = Some(l);
                        }
                    }
                }
                if seen[0] && seen[1] {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        // The last literal must differ from the others.
                        let want_lit = !seen[1];
                        queue.push((l.var(), want_lit == l.is_positive()));
                    }
                    _ => {}
                }
            }

            for &ci in &self.completes[v as usize - 1] {
                let open = self.clauses[ci]
                    .vars()
                    .all(|w| self.value[w as usize - 1].is_none());
                if open
                    && self.completers[ci]
                        .iter()
                        .any(|&u| self.value[u as usize - 1] == Some(!b))
                {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v as usize - 1] = None;
        }
    }

    fn run(&mut self) -> Result<bool> {
        self.descend(0)
    }

    fn descend(&mut self, from: usize) -> Result<bool> {
        let Some(idx) = (from..self.value.len()).find(|&i| self.value[i].is_none()) else {
            return Ok(true);
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let var = idx as Var + 1;
        for val in [false, true] {
            let mark = self.trail.len();
            if self.assign(var, val) && self.descend(idx + 1)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// Smallest triangle-free cut of `g` under the encoding "vertex on side A is
/// bit 1", vertex 1 most significant and fixed to side B. `None` when no cut
/// with both sides non-empty avoids monochromatic triangles, including every
/// graph with fewer than two vertices.
pub fn brute_force_cut(g: &Graph, budget: SearchBudget) -> Result<Option<Cut>> {
    if g.num_vertices() < 2 {
        return Ok(None);
    }
    let mut search = CutSearch::new(g, budget.max_states);
    if !search.run()? {
        return Ok(None);
    }
    let cut = Cut::from_membership(search.side.iter().map(|s| *s == Some(true)).collect());
    assert!(verify_cut_triangle_free(g, &cut), "cut search returned a non-witness");
    Ok(Some(cut))
}

struct CutSearch {
    /// `Some(true)` is side A.
    side: Vec<Option<bool>>,
    triangles: Vec<[Vertex; 3]>,
    /// Triangle indices per vertex.
    member_of: Vec<Vec<usize>>,
    /// Common neighbours of each triangle.
    apexes: Vec<Vec<Vertex>>,
    /// Triangles each vertex is an apex of.
    apex_of: Vec<Vec<usize>>,
    trail: Vec<Vertex>,
    nodes: u64,
    budget: u64,
}

impl CutSearch {
    fn new(g: &Graph, budget: u64) -> Self {
        let n = g.num_vertices();
        let triangles = g.triangles();
        let mut member_of = vec![Vec::new(); n];
        let mut apex_of = vec![Vec::new(); n];
        let mut apexes = Vec::with_capacity(triangles.len());
        for (i, t) in triangles.iter().enumerate() {
            for &v in t {
                member_of[v as usize - 1].push(i);
            }
            let common = g.common_neighbours(t);
            for &w in &common {
                apex_of[w as usize - 1].push(i);
            }
            apexes.push(common);
        }
        CutSearch {
            side: vec![None; n],
            triangles,
            member_of,
            apexes,
            apex_of,
            trail: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn place(&mut self, vertex: Vertex, in_a: bool) -> bool {
        let mut queue = vec![(vertex, in_a)];
        while let Some((v, s)) = queue.pop() {
            match self.side[v as usize - 1] {
                Some(cur) if cur == s => continue,
                Some(_) => return false,
                None => {}
            }
            self.side[v as usize - 1] = Some(s);
            self.trail.push(v);

            for &ti in &self.member_of[v as usize - 1] {
                let t = self.triangles[ti];
                let others: Vec<Vertex> = t.iter().copied().filter(|&w| w != v).collect();
                let (p, q) = (self.side[others[0] as usize - 1], self.side[others[1] as usize - 1]);
                match (p, q) {
                    (Some(x), Some(y)) if x == s && y == s => return false,
                    (Some(x), None) if x == s => queue.push((others[1], !s)),
                    (None, Some(y)) if y == s => queue.push((others[0], !s)),
                    _ => {}
                }
            }

            for &ti in &self.apex_of[v as usize - 1] {
                let open = self.triangles[ti]
                    .iter()
                    .all(|&w| self.side[w as usize - 1].is_none());
                if open
                    && self.apexes[ti]
                        .iter()
                        .any(|&u| self.side[u as usize - 1] == Some(!s))
                {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.side[v as usize - 1] = None;
        }
    }

    fn run(&mut self) -> Result<bool> {
        self.nodes += 1;
        if !self.place(1, false) {
            return Ok(false);
        }
        self.descend(1)
    }

    fn descend(&mut self, from: usize) -> Result<bool> {
        let Some(idx) = (from..self.side.len()).find(|&i| self.side[i].is_none()) else {
            return Ok(self.side.contains(&Some(true)));
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        for in_a in [false, true] {
            let mark = self.trail.len();
            if self.place(idx as Vertex + 1, in_a) && self.descend(idx + 1)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

fn require_four_colouring(g: &Graph, c: &Colouring) -> Result<()> {
    if c.k() > 4 || c.max_colour() > 4 {
        return Err(Error::ImproperColouring(format!(
            "fast path needs at most 4 colours, got {}",
            c.k().max(c.max_colour())
        )));
    }
    match colouring_defect(g, c) {
        Some(defect) => Err(Error::ImproperColouring(defect)),
        None => Ok(()),
    }
}

/// NAE witness from a proper ≤4-colouring of the variant-A incidence graph:
/// colours 1 and 2 are true. A clause's three variables carry three distinct
/// colours, which cannot all fall in one pair.
pub fn assignment_from_4colouring(f: &CnfFormula, c: &Colouring) -> Result<Assignment> {
    let (g, _) = incidence_graph(f, IncidenceVariant::A)?;
    require_four_colouring(&g, c)?;
    let a = Assignment::new(c.colours().iter().map(|&col| col <= 2).collect());
    debug_assert!(f.nae_satisfies(&a));
    Ok(a)
}

/// Triangle-free cut from a proper ≤4-colouring: colours 1 and 2 on side A.
///
/// If a side comes out empty, every vertex carries one of two colours and
/// the two colour classes (both independent) become the sides instead. If
/// only one colour is used, the largest vertex moves across.
pub fn cut_from_4colouring(g: &Graph, c: &Colouring) -> Result<Cut> {
    require_four_colouring(g, c)?;
    if g.num_vertices() < 2 {
        return Err(Error::SizeMismatch {
            expected: 2,
            found: g.num_vertices(),
        });
    }
    let one_sided = |in_a: &[bool]| in_a.iter().all(|&x| x == in_a[0]);
    let mut in_a: Vec<bool> = c.colours().iter().map(|&col| col <= 2).collect();
    if one_sided(&in_a) {
        let low = if in_a[0] { 1 } else { 3 };
        in_a = c.colours().iter().map(|&col| col == low).collect();
    }
    if one_sided(&in_a) {
        let last = in_a.len() - 1;
        in_a[last] = !in_a[last];
    }
    let cut = Cut::from_membership(in_a);
    debug_assert!(verify_cut_triangle_free(g, &cut));
    Ok(cut)
}

/// Deterministic random source for instance generation: ChaCha8 seeded with
/// `seed_from_u64`, drawing bounded integers by rejection on `next_u64`.
pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `0..bound`.
    ///
    /// # Panics
    /// If `bound` is 0.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.0.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    /// Uniform 3-subset of `1..=n`, sorted, drawn by rejection.
    pub fn triple(&mut self, n: u32) -> [Var; 3] {
        let mut t = [0; 3];
        let mut filled = 0;
        while filled < 3 {
            let v = self.below(n as u64) as Var + 1;
            if !t[..filled].contains(&v) {
                t[filled] = v;
                filled += 1;
            }
        }
        t.sort_unstable();
        t
    }
}

/// Retries per clause before [`generate_instance`] gives up under
/// `distinct_pairs`.
pub const MAX_CLAUSE_RETRIES: usize = 10_000;

/// Seeded monotone 3-CNF with `m` clauses over `n` variables, each clause a
/// uniform 3-subset. With `distinct_pairs`, clauses sharing a variable pair
/// with an earlier clause are redrawn.
pub fn generate_instance(seed: u64, n: u32, m: usize, distinct_pairs: bool) -> Result<CnfFormula> {
    if n < 3 {
        return Err(Error::Infeasible(format!("need at least 3 variables, got {n}")));
    }
    let mut rng = InstanceRng::new(seed);
    let mut used: HashSet<(Var, Var)> = HashSet::new();
    let mut triples = Vec::with_capacity(m);
    for i in 0..m {
        let mut attempts = 0;
        let t = loop {
            let t = rng.triple(n);
            let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
            if !distinct_pairs || pairs.iter().all(|p| !used.contains(p)) {
                used.extend(pairs);
                break t;
            }
            attempts += 1;
            if attempts >= MAX_CLAUSE_RETRIES {
                return Err(Error::Infeasible(format!(
                    "no pair-disjoint clause {} of {m} over {n} variables",
                    i + 1
                )));
            }
        };
        triples.push(t);
    }
    CnfFormula::from_triples(n, &triples)
}

/// Instance size for sweep seed `seed`, always with `n` in `3..=14` and `m`
/// in `1..=20`. One draw in four is uniform over that whole range; the rest
/// come from the dense corner `n` in `5..=8`, `m` in `16..=20`, where a
/// useful share of instances is NAE-unsatisfiable.
pub fn sweep_size(seed: u64) -> (u32, usize) {
    let mut rng = InstanceRng::new(seed ^ 0x5157_4545_5053_495a);
    if rng.below(4) == 0 {
        (rng.range(3, 14) as u32, rng.range(1, 20) as usize)
    } else {
        (rng.range(5, 8) as u32, rng.range(16, 20) as usize)
    }
}

/// Random graph on `n` vertices with a planted proper colouring in `k`
/// colours: vertices get uniform colours and each bichromatic pair becomes an
/// edge with probability `percent / 100`.
pub fn generate_colourable_graph(seed: u64, n: usize, k: u32, percent: u64) -> (Graph, Colouring) {
    let mut rng = InstanceRng::new(seed);
    let colours: Vec<u32> = (0..n).map(|_| rng.below(k as u64) as u32 + 1).collect();
    let mut edges = Vec::new();
    for u in 1..=n as Vertex {
        for v in u + 1..=n as Vertex {
            if colours[u as usize - 1] != colours[v as usize - 1] && rng.below(100) < percent {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("generated edges are valid");
    (g, Colouring::new(k, colours))
}

/// Erdős–Rényi style graph: each pair is an edge with probability
/// `percent / 100`.
pub fn generate_graph(seed: u64, n: usize, percent: u64) -> Graph {
    let mut rng = InstanceRng::new(seed);
    let mut edges = Vec::new();
    for u in 1..=n as Vertex {
        for v in u + 1..=n as Vertex {
            if rng.below(100) < percent {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_cnf;
    use crate::reduction::gadget_graph;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn nae_smallest_witness() {
        let f = CnfFormula::from_triples(3, &[[1, 2, 3]]).unwrap();
        let a = brute_force_nae(&f, budget()).unwrap().unwrap();
        assert_eq!(a.values(), &[false, false, true]);

        let empty = CnfFormula::new(2, vec![]).unwrap();
        assert_eq!(brute_force_nae(&empty, budget()).unwrap(), Some(Assignment::all(2, false)));

        let none = CnfFormula::new(0, vec![]).unwrap();
        assert_eq!(brute_force_nae(&none, budget()).unwrap(), Some(Assignment::all(0, false)));
    }

    #[test]
    fn nae_unsat_on_complete_3_uniform_hypergraph() {
        // Every 2-colouring of 5 points leaves 3 on one side.
        let mut triples = Vec::new();
        for a in 1..=5 {
            for b in a + 1..=5 {
                for c in b + 1..=5 {
                    triples.push([a, b, c]);
                }
            }
        }
        let f = CnfFormula::from_triples(5, &triples).unwrap();
        assert_eq!(brute_force_nae(&f, budget()).unwrap(), None);
    }

    #[test]
    fn nae_two_clauses_propagate() {
        let f = parse_cnf("p cnf 3 2\n1 -2 0\n2 -3 0\n").unwrap();
        let a = brute_force_nae(&f, budget()).unwrap().unwrap();
        assert_eq!(a, Assignment::all(3, false));
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let f = CnfFormula::new(30, vec![]).unwrap();
        assert_eq!(
            brute_force_nae(&f, SearchBudget::new(3)),
            Err(Error::BudgetExceeded(3))
        );
        let g = Graph::empty(30);
        assert_eq!(
            brute_force_cut(&g, SearchBudget::new(3)),
            Err(Error::BudgetExceeded(3))
        );
    }

    #[test]
    fn cut_small_cases() {
        let cut = brute_force_cut(&Graph::complete(3), budget()).unwrap().unwrap();
        assert_eq!(cut.side_a(), vec![3]);
        assert_eq!(brute_force_cut(&Graph::complete(6), budget()).unwrap(), None);
        // Five vertices always leave three on one side.
        assert_eq!(brute_force_cut(&Graph::complete(5), budget()).unwrap(), None);
        let k4 = brute_force_cut(&Graph::complete(4), budget()).unwrap().unwrap();
        assert_eq!(k4.side_a(), vec![3, 4]);
        assert_eq!(brute_force_cut(&Graph::empty(1), budget()).unwrap(), None);
        assert_eq!(
            brute_force_cut(&Graph::empty(2), budget()).unwrap().unwrap().side_a(),
            vec![2]
        );
    }

    #[test]
    fn cut_on_gadget_keeps_endpoints_together() {
        let cut = brute_force_cut(&gadget_graph(), budget()).unwrap().unwrap();
        assert_eq!(cut.in_side_a(1), cut.in_side_a(2));
    }

    #[test]
    fn fast_path_assignment() {
        let f = CnfFormula::from_triples(3, &[[1, 2, 3]]).unwrap();
        let a = assignment_from_4colouring(&f, &Colouring::new(3, vec![1, 2, 3])).unwrap();
        assert_eq!(a.values(), &[true, true, false]);
        assert!(assignment_from_4colouring(&f, &Colouring::new(5, vec![1, 2, 5])).is_err());
        assert!(assignment_from_4colouring(&f, &Colouring::new(3, vec![1, 1, 3])).is_err());
    }

    #[test]
    fn fast_path_cut() {
        let cut = cut_from_4colouring(&Graph::complete(3), &Colouring::new(3, vec![1, 2, 3])).unwrap();
        assert_eq!(cut.side_a(), vec![1, 2]);

        let path = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let cut = cut_from_4colouring(&path, &Colouring::new(2, vec![1, 2, 1, 2])).unwrap();
        assert_eq!(cut.side_a(), vec![1, 3]);
        let cut = cut_from_4colouring(&path, &Colouring::new(4, vec![1, 3, 1, 3])).unwrap();
        assert_eq!(cut.side_a(), vec![1, 3]);

        let one_side = cut_from_4colouring(&Graph::empty(3), &Colouring::new(1, vec![1, 1, 1])).unwrap();
        assert!(one_side.is_proper());
        assert!(cut_from_4colouring(&Graph::empty(1), &Colouring::new(1, vec![1])).is_err());
    }

    #[test]
    fn generator_basics() {
        let f = generate_instance(1, 3, 1, false).unwrap();
        assert_eq!(f, CnfFormula::from_triples(3, &[[1, 2, 3]]).unwrap());
        assert_eq!(
            generate_instance(9, 10, 8, true).unwrap(),
            generate_instance(9, 10, 8, true).unwrap()
        );
        assert!(generate_instance(1, 2, 1, false).is_err());
        // Any two triples over 4 variables share a pair.
        assert!(matches!(generate_instance(1, 4, 2, true), Err(Error::Infeasible(_))));
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = InstanceRng::new(3);
        for bound in [1u64, 2, 3, 7, 1 << 40] {
            for _ in 0..100 {
                assert!(rng.below(bound) < bound);
            }
        }
        for seed in 0..50 {
            let (n, m) = sweep_size(seed);
            assert!((3..=14).contains(&n) && (1..=20).contains(&m));
        }
    }
}
