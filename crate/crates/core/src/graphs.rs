//! Simple undirected graphs on vertices `1..=n`, bipartitions (cuts),
//! colourings, and the DIMACS edge format.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Default node budget for [`find_k_colouring`].
pub const DEFAULT_COLOURING_BUDGET: u64 = 10_000_000;

/// A simple undirected graph. Vertex ids run from 1 to `num_vertices`.
///
/// Adjacency lists are kept sorted, so `neighbours` can be intersected with a
/// linear merge and `has_edge` is a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    num_edges: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            num_edges: 0,
        }
    }

    /// Builds a graph from an edge list. Endpoint order is irrelevant.
    /// Self-loops, out-of-range endpoints and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        g.finish();
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let n32 = n as Vertex;
        let edges = (1..=n32).flat_map(|u| (u + 1..=n32).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph edges are valid")
    }

    fn try_add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.adj.len();
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
        }
        for w in [u, v] {
            if w == 0 || w as usize > n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: w as usize,
                });
            }
        }
        let list = &mut self.adj[u as usize - 1];
        if list.contains(&v) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {} {}",
                u.min(v),
                u.max(v)
            )));
        }
        list.push(v);
        self.adj[v as usize - 1].push(u);
        self.num_edges += 1;
        Ok(())
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.adj.len() as Vertex
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbours(v).len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u as usize > self.adj.len() || v as usize > self.adj.len() {
            return false;
        }
        self.neighbours(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Copy of the graph with one extra edge.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Self> {
        Graph::from_edges(self.num_vertices(), self.edges().chain([(u, v)]))
    }

    /// Copy of the graph with edge `{u, v}` removed (no-op when absent).
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Self {
        let (u, v) = (u.min(v), u.max(v));
        Graph::from_edges(self.num_vertices(), self.edges().filter(|&e| e != (u, v)))
            .expect("subgraph of a valid graph is valid")
    }

    /// All 3-cliques `(u, v, w)` with `u < v < w`, in lexicographic order.
    ///
    /// Iterates edges `u < v` and merges the two sorted neighbour lists,
    /// keeping common neighbours `w > v`.
    pub fn triangles(&self) -> Vec<[Vertex; 3]> {
        let mut out = Vec::new();
        for (u, v) in self.edges() {
            let (nu, nv) = (self.neighbours(u), self.neighbours(v));
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            out.push([u, v, nu[i]]);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        out
    }

    /// Vertices adjacent to every vertex of `set`.
    pub fn common_neighbours(&self, set: &[Vertex]) -> Vec<Vertex> {
        let Some((&first, rest)) = set.split_first() else {
            return Vec::new();
        };
        self.neighbours(first)
            .iter()
            .copied()
            .filter(|&w| rest.iter().all(|&x| self.has_edge(w, x)))
            .collect()
    }
}

pub fn enumerate_triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    g.triangles()
}

pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

/// A bipartition of the vertex set into side A and side B.
///
/// Either side may be empty as a value; a *cut* in the problem sense needs
/// both sides non-empty, see [`Cut::is_proper`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    in_a: Vec<bool>,
}

impl Cut {
    /// `in_a[v - 1]` tells whether vertex `v` is on side A.
    pub fn from_membership(in_a: Vec<bool>) -> Self {
        Cut { in_a }
    }

    /// Cut of an `n`-vertex graph with the listed vertices on side A.
    pub fn from_side_a<I>(n: usize, side_a: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut in_a = vec![false; n];
        for v in side_a {
            if v == 0 || v as usize > n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: v as usize,
                });
            }
            in_a[v as usize - 1] = true;
        }
        Ok(Cut { in_a })
    }

    pub fn num_vertices(&self) -> usize {
        self.in_a.len()
    }

    pub fn in_side_a(&self, v: Vertex) -> bool {
        self.in_a[v as usize - 1]
    }

    pub fn side_a(&self) -> Vec<Vertex> {
        self.side(true)
    }

    pub fn side_b(&self) -> Vec<Vertex> {
        self.side(false)
    }

    fn side(&self, a: bool) -> Vec<Vertex> {
        self.in_a
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == a)
            .map(|(i, _)| i as Vertex + 1)
            .collect()
    }

    /// Both sides non-empty.
    pub fn is_proper(&self) -> bool {
        self.in_a.iter().any(|&x| x) && self.in_a.iter().any(|&x| !x)
    }

    pub fn swapped(&self) -> Self {
        Cut {
            in_a: self.in_a.iter().map(|&x| !x).collect(),
        }
    }

    pub fn membership(&self) -> &[bool] {
        &self.in_a
    }
}

/// First triangle of `g` lying wholly on one side of `cut`, if any.
pub fn monochromatic_triangle(g: &Graph, cut: &Cut) -> Option<[Vertex; 3]> {
    if cut.num_vertices() != g.num_vertices() {
        return None;
    }
    g.triangles().into_iter().find(|t| {
        let s = cut.in_side_a(t[0]);
        cut.in_side_a(t[1]) == s && cut.in_side_a(t[2]) == s
    })
}

/// Both sides non-empty and neither side contains a triangle of `g`.
pub fn verify_cut_triangle_free(g: &Graph, cut: &Cut) -> bool {
    cut.num_vertices() == g.num_vertices()
        && cut.is_proper()
        && monochromatic_triangle(g, cut).is_none()
}

/// Vertex colouring with colours `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Colouring {
    k: u32,
    colours: Vec<u32>,
}

impl Colouring {
    /// `colours[v - 1]` is the colour of vertex `v`.
    pub fn new(k: u32, colours: Vec<u32>) -> Self {
        Colouring { k, colours }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn colour(&self, v: Vertex) -> u32 {
        self.colours[v as usize - 1]
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    /// Number of distinct colours actually used.
    pub fn num_used(&self) -> usize {
        let mut seen: Vec<u32> = self.colours.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn max_colour(&self) -> u32 {
        self.colours.iter().copied().max().unwrap_or(0)
    }
}

/// Describes why `c` is not a proper colouring of `g`, or `None` if it is.
pub fn colouring_defect(g: &Graph, c: &Colouring) -> Option<String> {
    if c.colours.len() != g.num_vertices() {
        return Some(format!(
            "colouring covers {} vertices, graph has {}",
            c.colours.len(),
            g.num_vertices()
        ));
    }
    if let Some(v) = g.vertices().find(|&v| !(1..=c.k).contains(&c.colour(v))) {
        return Some(format!("vertex {v} has colour {} outside 1..={}", c.colour(v), c.k));
    }
    g.edges()
        .find(|&(u, v)| c.colour(u) == c.colour(v))
        .map(|(u, v)| format!("edge {u} {v} is monochromatic (colour {})", c.colour(u)))
}

pub fn verify_colouring(g: &Graph, c: &Colouring) -> bool {
    colouring_defect(g, c).is_none()
}

/// Exact k-colouring by backtracking over vertices in id order, trying
/// colours in increasing order. A vertex never opens more than one new colour
/// beyond those already in use, which fixes vertex 1 to colour 1 and keeps
/// the first colouring found the lexicographically smallest one.
///
/// Returns `Ok(None)` when no k-colouring exists and
/// [`Error::BudgetExceeded`] when more than `budget` search nodes are needed.
pub fn find_k_colouring(g: &Graph, k: u32, budget: u64) -> Result<Option<Colouring>> {
    if k == 0 {
        return Ok(if g.num_vertices() == 0 {
            Some(Colouring::new(0, Vec::new()))
        } else {
            None
        });
    }
    let mut search = ColourSearch {
        g,
        k,
        colours: vec![0; g.num_vertices()],
        nodes: 0,
        budget,
    };
    if search.extend(0, 0)? {
        let c = Colouring::new(k, search.colours);
        debug_assert!(verify_colouring(g, &c));
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

struct ColourSearch<'a> {
    g: &'a Graph,
    k: u32,
    colours: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl ColourSearch<'_> {
    fn extend(&mut self, idx: usize, used: u32) -> Result<bool> {
        if idx == self.colours.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let v = idx as Vertex + 1;
        let limit = self.k.min(used + 1);
        for c in 1..=limit {
            let clash = self
                .g
                .neighbours(v)
                .iter()
                .any(|&w| self.colours[w as usize - 1] == c);
            if clash {
                continue;
            }
            self.colours[idx] = c;
            if self.extend(idx + 1, used.max(c))? {
                return Ok(true);
            }
        }
        self.colours[idx] = 0;
        Ok(false)
    }
}

/// Parses the DIMACS edge format: `c` comments, one `p edge <n> <m>` header,
/// then `e <u> <v>` lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(lineno, "duplicate problem line"));
                }
                let fmt = toks.next();
                let n = toks.next().and_then(|t| t.parse::<usize>().ok());
                let m = toks.next().and_then(|t| t.parse::<usize>().ok());
                match (fmt, n, m, toks.next()) {
                    (Some("edge") | Some("col"), Some(n), Some(m), None) => header = Some((n, m)),
                    _ => return Err(Error::parse(lineno, "malformed problem line")),
                }
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(Error::parse(lineno, "edge before problem line"));
                };
                let u = toks.next().and_then(|t| t.parse::<Vertex>().ok());
                let v = toks.next().and_then(|t| t.parse::<Vertex>().ok());
                let (Some(u), Some(v), None) = (u, v, toks.next()) else {
                    return Err(Error::parse(lineno, "malformed edge line"));
                };
                if u == v {
                    return Err(Error::parse(lineno, format!("self-loop on vertex {u}")));
                }
                if u == 0 || v == 0 || u as usize > n || v as usize > n {
                    return Err(Error::parse(lineno, format!("vertex out of range 1..={n}")));
                }
                edges.push((lineno, u.min(v), u.max(v)));
            }
            _ => return Err(Error::parse(lineno, format!("unexpected line `{line}`"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::parse(0, "missing problem line"));
    };
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let mut g = Graph::empty(n);
    for (lineno, u, v) in edges {
        g.try_add_edge(u, v)
            .map_err(|_| Error::parse(lineno, format!("duplicate edge {u} {v}")))?;
    }
    g.finish();
    Ok(g)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::complete(3)
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n as Vertex).map(|v| (v, v + 1))).unwrap()
    }

    #[test]
    fn parses_k3() {
        let g = parse_graph("p edge 3 3\ne 1 2\ne 1 3\ne 2 3").unwrap();
        assert_eq!(g, k3());
    }

    #[test]
    fn rejects_self_loop_and_range() {
        assert!(parse_graph("p edge 2 1\ne 1 1").is_err());
        assert!(parse_graph("p edge 2 1\ne 1 3").is_err());
        assert!(parse_graph("p edge 2 1\ne 0 1").is_err());
    }

    #[test]
    fn rejects_duplicate_edges_and_count_mismatch() {
        assert!(parse_graph("p edge 3 2\ne 1 2\ne 2 1").is_err());
        assert!(parse_graph("p edge 3 2\ne 1 2").is_err());
        assert!(parse_graph("e 1 2").is_err());
    }

    #[test]
    fn normalizes_edge_orientation() {
        let g = parse_graph("c hi\np edge 3 2\r\ne 3 1\ne 2 1\n").unwrap();
        assert_eq!(emit_graph(&g), "p edge 3 2\ne 1 2\ne 1 3\n");
    }

    #[test]
    fn triangles_of_small_graphs() {
        assert_eq!(k3().triangles(), vec![[1, 2, 3]]);
        assert!(path(6).triangles().is_empty());
        assert_eq!(Graph::complete(4).triangles().len(), 4);
    }

    #[test]
    fn degrees() {
        assert_eq!(k3().max_degree(), 2);
        assert_eq!(Graph::empty(0).max_degree(), 0);
        assert_eq!(path(4).degree(1), 1);
    }

    #[test]
    fn k3_cuts() {
        let split = Cut::from_side_a(3, [1]).unwrap();
        assert!(verify_cut_triangle_free(&k3(), &split));
        let all = Cut::from_side_a(3, [1, 2, 3]).unwrap();
        assert!(!all.is_proper());
        assert!(!verify_cut_triangle_free(&k3(), &all));
        assert_eq!(monochromatic_triangle(&k3(), &all), Some([1, 2, 3]));
    }

    #[test]
    fn colouring_complete_graphs() {
        for k in 1..=6u32 {
            let kk = Graph::complete(k as usize);
            let c = find_k_colouring(&kk, k, DEFAULT_COLOURING_BUDGET).unwrap().unwrap();
            assert!(verify_colouring(&kk, &c));
            let k1 = Graph::complete(k as usize + 1);
            assert_eq!(find_k_colouring(&k1, k, DEFAULT_COLOURING_BUDGET).unwrap(), None);
        }
        let c = find_k_colouring(&k3(), 3, 100).unwrap().unwrap();
        assert_eq!(c.colours(), &[1, 2, 3]);
    }

    #[test]
    fn colouring_budget_is_distinct_from_none() {
        let k7 = Graph::complete(7);
        assert_eq!(find_k_colouring(&k7, 6, 5), Err(Error::BudgetExceeded(5)));
    }

    #[test]
    fn colouring_defects() {
        let g = k3();
        assert!(colouring_defect(&g, &Colouring::new(3, vec![1, 1, 2])).is_some());
        assert!(colouring_defect(&g, &Colouring::new(2, vec![1, 2, 3])).is_some());
        assert!(colouring_defect(&g, &Colouring::new(3, vec![1, 2])).is_some());
        assert!(colouring_defect(&g, &Colouring::new(3, vec![3, 1, 2])).is_none());
    }
}
