//! Graph construction from a transformed formula and certificate translation
//! in both directions.
//!
//! Every variable becomes a vertex. A 3-clause becomes a triangle on its
//! variable vertices; an equality clause `(x ∨ ¬y)` becomes a gadget made of
//! two tetrahedra glued on a shared face `a b c`, with apexes `x` and `y`:
//!
//! ```text
//!        x
//!      / | \
//!     a--b--c     (a-c also adjacent)
//!      \ | /
//!        y
//! ```
//!
//! In any triangle-free cut of the gadget two of `a, b, c` share a side, and
//! they form a triangle with whichever apex sits on that side too, so `x`
//! and `y` always end up together. Conversely `{x, y, a} | {b, c}` is
//! triangle-free.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{Assignment, CnfFormula, Var};
use crate::graphs::{colouring_defect, monochromatic_triangle, verify_cut_triangle_free, Colouring, Cut, Graph, Vertex};
use crate::transform::check_properties;

/// A glued-tetrahedra gadget joining endpoint vertices `x` and `y` through
/// the internal triangle `a b c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gadget {
    pub x: Vertex,
    pub y: Vertex,
    pub a: Vertex,
    pub b: Vertex,
    pub c: Vertex,
}

impl Gadget {
    /// The stand-alone gadget on vertices 1..=5 with `x = 1`, `y = 2`.
    pub const CANONICAL: Gadget = Gadget {
        x: 1,
        y: 2,
        a: 3,
        b: 4,
        c: 5,
    };

    pub fn edges(&self) -> [(Vertex, Vertex); 9] {
        let Gadget { x, y, a, b, c } = *self;
        [
            (x, a),
            (x, b),
            (x, c),
            (y, a),
            (y, b),
            (y, c),
            (a, b),
            (b, c),
            (c, a),
        ]
    }

    pub fn internals(&self) -> [Vertex; 3] {
        [self.a, self.b, self.c]
    }

    pub fn vertices(&self) -> [Vertex; 5] {
        [self.x, self.y, self.a, self.b, self.c]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices().contains(&v)
    }
}

/// The canonical gadget as a 5-vertex graph.
pub fn gadget_graph() -> Graph {
    Graph::from_edges(5, Gadget::CANONICAL.edges()).expect("gadget edges are valid")
}

/// Which gadget to use when building the graph. `WithoutInternalEdge` drops
/// edge `a b` and exists only to check that the equivalence checks notice a
/// broken gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GadgetShape {
    #[default]
    GluedTetrahedra,
    WithoutInternalEdge,
}

/// Provenance of [`build_graph`]. Clause ids are 1-based indices into the
/// transformed formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    num_vertices: usize,
    var_vertex: Vec<Vertex>,
    clause_triangles: Vec<(usize, [Vertex; 3])>,
    clause_gadgets: Vec<(usize, Gadget)>,
}

/// What part of the construction a triangle of the reduced graph belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleKind {
    Clause(usize),
    Gadget(usize),
}

impl ReductionMap {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_vars(&self) -> usize {
        self.var_vertex.len()
    }

    pub fn var_vertex(&self, v: Var) -> Vertex {
        self.var_vertex[v as usize - 1]
    }

    pub fn clause_triangles(&self) -> &[(usize, [Vertex; 3])] {
        &self.clause_triangles
    }

    pub fn clause_gadgets(&self) -> &[(usize, Gadget)] {
        &self.clause_gadgets
    }

    pub fn is_internal(&self, v: Vertex) -> bool {
        v as usize > self.var_vertex.len()
    }

    /// `None` if the triangle is neither a clause triangle nor contained in a
    /// single gadget.
    pub fn classify_triangle(&self, t: [Vertex; 3]) -> Option<TriangleKind> {
        let mut sorted = t;
        sorted.sort_unstable();
        if let Some((id, _)) = self.clause_triangles.iter().find(|(_, tri)| {
            let mut s = *tri;
            s.sort_unstable();
            s == sorted
        }) {
            return Some(TriangleKind::Clause(*id));
        }
        self.clause_gadgets
            .iter()
            .find(|(_, gad)| t.iter().all(|&v| gad.contains(v)))
            .map(|(id, _)| TriangleKind::Gadget(*id))
    }

    /// Text form with `var`, `tri` and `gad` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.var_vertex.iter().enumerate() {
            let _ = writeln!(out, "var {} {v}", i + 1);
        }
        for (id, t) in &self.clause_triangles {
            let _ = writeln!(out, "tri {id} {} {} {}", t[0], t[1], t[2]);
        }
        for (id, g) in &self.clause_gadgets {
            let _ = writeln!(out, "gad {id} {} {} {} {} {}", g.x, g.y, g.a, g.b, g.c);
        }
        out
    }

    /// Parses [`ReductionMap::to_text`]. `num_vertices` is taken as the
    /// largest vertex id mentioned.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vars: Vec<(Var, Vertex, usize)> = Vec::new();
        let mut clause_triangles = Vec::new();
        let mut clause_gadgets = Vec::new();
        let mut max_vertex = 0;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let kind = toks.next().unwrap_or_default();
            let nums = toks
                .map(|t| t.parse::<u32>().ok().filter(|&x| x > 0))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::parse(lineno, "expected positive integers"))?;
            let arity = match kind {
                "var" => 2,
                "tri" => 4,
                "gad" => 6,
                _ => return Err(Error::parse(lineno, format!("unknown record `{kind}`"))),
            };
            if nums.len() != arity {
                return Err(Error::parse(lineno, format!("`{kind}` takes {arity} fields")));
            }
            max_vertex = max_vertex.max(*nums[1..].iter().max().unwrap_or(&0));
            match kind {
                "var" => vars.push((nums[0], nums[1], lineno)),
                "tri" => clause_triangles.push((nums[0] as usize, [nums[1], nums[2], nums[3]])),
                _ => clause_gadgets.push((
                    nums[0] as usize,
                    Gadget {
                        x: nums[1],
                        y: nums[2],
                        a: nums[3],
                        b: nums[4],
                        c: nums[5],
                    },
                )),
            }
        }
        vars.sort_by_key(|v| v.0);
        let mut var_vertex = Vec::with_capacity(vars.len());
        for (i, (v, vertex, lineno)) in vars.into_iter().enumerate() {
            if v as usize != i + 1 {
                return Err(Error::parse(lineno, format!("`var {v}` out of sequence")));
            }
            var_vertex.push(vertex);
        }
        Ok(ReductionMap {
            num_vertices: max_vertex as usize,
            var_vertex,
            clause_triangles,
            clause_gadgets,
        })
    }
}

pub fn build_graph(f: &CnfFormula) -> Result<(Graph, ReductionMap)> {
    build_graph_with(f, GadgetShape::GluedTetrahedra)
}

/// Builds the reduced graph of a formula satisfying all six transform
/// properties. Variable `v` is vertex `v`; gadget internals follow in clause
/// order, three per equality clause.
pub fn build_graph_with(f: &CnfFormula, shape: GadgetShape) -> Result<(Graph, ReductionMap)> {
    if let Some(p) = check_properties(f).first_violation() {
        return Err(Error::PropertyViolated(p));
    }
    let n = f.num_vars();
    let mut next = n + 1;
    let mut edges = Vec::new();
    let mut clause_triangles = Vec::new();
    let mut clause_gadgets = Vec::new();

    for (i, c) in f.clauses().iter().enumerate() {
        let id = i + 1;
        let lits = c.literals();
        if lits.len() == 3 {
            let t = [lits[0].var(), lits[1].var(), lits[2].var()];
            edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
            clause_triangles.push((id, t));
        } else {
            let (pos, neg) = if lits[0].is_positive() {
                (lits[0], lits[1])
            } else {
                (lits[1], lits[0])
            };
            let gadget = Gadget {
                x: pos.var(),
                y: neg.var(),
                a: next,
                b: next + 1,
                c: next + 2,
            };
            next += 3;
            edges.extend(
                gadget
                    .edges()
                    .into_iter()
                    .filter(|&e| shape == GadgetShape::GluedTetrahedra || e != (gadget.a, gadget.b)),
            );
            clause_gadgets.push((id, gadget));
        }
    }

    let num_vertices = (next - 1) as usize;
    let g = Graph::from_edges(num_vertices, edges)?;
    let map = ReductionMap {
        num_vertices,
        var_vertex: (1..=n).collect(),
        clause_triangles,
        clause_gadgets,
    };
    Ok((g, map))
}

/// Explicit colouring with at most five colours: clause triangles get
/// 1, 2, 3 in literal order, variables outside any triangle get 1, and each
/// gadget's internal triangle takes the three smallest colours not used by
/// its endpoints.
///
/// # Panics
/// If the result is not proper, which means `g` was not built from `rm`.
pub fn construct_5_colouring(g: &Graph, rm: &ReductionMap) -> Colouring {
    let mut colours = vec![1u32; g.num_vertices()];
    for (_, t) in &rm.clause_triangles {
        for (c, &v) in (1..=3).zip(t) {
            colours[v as usize - 1] = c;
        }
    }
    for (_, gad) in &rm.clause_gadgets {
        let taken = [colours[gad.x as usize - 1], colours[gad.y as usize - 1]];
        let free = (1..=5u32).filter(|c| !taken.contains(c));
        for (v, c) in gad.internals().into_iter().zip(free) {
            colours[v as usize - 1] = c;
        }
    }
    let k = colours.iter().copied().max().unwrap_or(0);
    let colouring = Colouring::new(k, colours);
    if let Some(defect) = colouring_defect(g, &colouring) {
        panic!("constructed colouring is improper: {defect}");
    }
    colouring
}

/// Places variable vertices by truth value (true on side A). Each gadget's
/// endpoints share a side `s`; `a` joins them on `s` and `b`, `c` go to the
/// other side.
pub fn assignment_to_cut(f: &CnfFormula, rm: &ReductionMap, a: &Assignment) -> Result<Cut> {
    if !f.nae_satisfies(a) {
        return Err(Error::NotSatisfying);
    }
    if a.len() != rm.num_vars() {
        return Err(Error::SizeMismatch {
            expected: rm.num_vars(),
            found: a.len(),
        });
    }
    let mut in_a = vec![false; rm.num_vertices];
    for (i, &v) in rm.var_vertex.iter().enumerate() {
        in_a[v as usize - 1] = a.value(i as Var + 1);
    }
    for (_, gad) in &rm.clause_gadgets {
        let side = in_a[gad.x as usize - 1];
        debug_assert_eq!(side, in_a[gad.y as usize - 1]);
        in_a[gad.a as usize - 1] = side;
        in_a[gad.b as usize - 1] = !side;
        in_a[gad.c as usize - 1] = !side;
    }
    let cut = Cut::from_membership(in_a);
    if !cut.is_proper() {
        return Err(Error::EmptySide);
    }
    Ok(cut)
}

/// Variable `x` is true iff its vertex is on side A.
pub fn cut_to_assignment(g: &Graph, rm: &ReductionMap, cut: &Cut) -> Result<Assignment> {
    if cut.num_vertices() != g.num_vertices() {
        return Err(Error::SizeMismatch {
            expected: g.num_vertices(),
            found: cut.num_vertices(),
        });
    }
    if !cut.is_proper() {
        return Err(Error::EmptySide);
    }
    if let Some(t) = monochromatic_triangle(g, cut) {
        return Err(Error::NotTriangleFree(Some(t)));
    }
    Ok(Assignment::new(
        rm.var_vertex.iter().map(|&v| cut.in_side_a(v)).collect(),
    ))
}

/// One variable per vertex (vertex `v` is variable `v`) and one monotone
/// clause per triangle.
pub fn extract_nae(g: &Graph) -> (CnfFormula, Vec<Var>) {
    let f = CnfFormula::from_triples(g.num_vertices() as u32, &g.triangles())
        .expect("triangles have three distinct in-range vertices");
    (f, g.vertices().collect())
}

/// Turns a NAE witness of [`extract_nae`]`(g)` into a triangle-free cut.
/// When every vertex landed on one side, the smallest vertex lying in no
/// triangle moves to the other side. `None` if that is impossible or the
/// result is not triangle-free.
pub fn nae_witness_to_cut(g: &Graph, a: &Assignment) -> Option<Cut> {
    if a.len() != g.num_vertices() || g.num_vertices() < 2 {
        return None;
    }
    let mut in_a = a.values().to_vec();
    let all_same = in_a.iter().all(|&x| x == in_a[0]);
    if all_same {
        let mut in_triangle = vec![false; g.num_vertices()];
        for t in g.triangles() {
            for v in t {
                in_triangle[v as usize - 1] = true;
            }
        }
        let free = in_triangle.iter().position(|&x| !x)?;
        in_a[free] = !in_a[free];
    }
    let cut = Cut::from_membership(in_a);
    verify_cut_triangle_free(g, &cut).then_some(cut)
}

/// Outcome of [`gadget_certify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    /// Bipartitions examined (always 2⁵).
    pub bipartitions: usize,
    pub triangle_free_cuts: usize,
    /// Triangle-free cuts putting `x` and `y` on different sides.
    pub separating_cuts: usize,
    /// Colour pairs `(colour(x), colour(y))` out of 25 that extend to a
    /// proper 5-colouring.
    pub extendable_colour_pairs: usize,
    pub endpoints_nonadjacent: bool,
    pub endpoint_degrees: (usize, usize),
}

impl GadgetReport {
    /// (i) every triangle-free cut keeps `x` and `y` together.
    pub fn endpoints_forced_together(&self) -> bool {
        self.separating_cuts == 0
    }

    /// (ii) some triangle-free cut exists.
    pub fn cut_exists(&self) -> bool {
        self.triangle_free_cuts > 0
    }

    /// (iii) every endpoint colour pair extends to a 5-colouring.
    pub fn all_colour_pairs_extend(&self) -> bool {
        self.extendable_colour_pairs == 25
    }

    /// (iv) `x`, `y` non-adjacent, each of degree 3.
    pub fn endpoint_shape(&self) -> bool {
        self.endpoints_nonadjacent && self.endpoint_degrees == (3, 3)
    }

    pub fn as_array(&self) -> [bool; 4] {
        [
            self.endpoints_forced_together(),
            self.cut_exists(),
            self.all_colour_pairs_extend(),
            self.endpoint_shape(),
        ]
    }

    pub fn passes_all(&self) -> bool {
        self.as_array().iter().all(|&b| b)
    }
}

/// Exhaustively checks the gadget properties on a 5-vertex graph with
/// endpoints `x` and `y`.
pub fn gadget_certify(g: &Graph, x: Vertex, y: Vertex) -> Result<GadgetReport> {
    if g.num_vertices() != 5 {
        return Err(Error::SizeMismatch {
            expected: 5,
            found: g.num_vertices(),
        });
    }
    if x == y || !(1..=5).contains(&x) || !(1..=5).contains(&y) {
        return Err(Error::InvalidGraph(format!("bad gadget endpoints {x}, {y}")));
    }

    let mut triangle_free_cuts = 0;
    let mut separating_cuts = 0;
    for mask in 0u32..32 {
        let cut = Cut::from_membership((0..5).map(|i| mask >> i & 1 == 1).collect());
        if cut.is_proper() && monochromatic_triangle(g, &cut).is_none() {
            triangle_free_cuts += 1;
            if cut.in_side_a(x) != cut.in_side_a(y) {
                separating_cuts += 1;
            }
        }
    }

    let others: Vec<Vertex> = (1..=5).filter(|&v| v != x && v != y).collect();
    let mut extendable_colour_pairs = 0;
    for cx in 1..=5u32 {
        for cy in 1..=5u32 {
            let extends = (0..125u32).any(|code| {
                let mut colours = vec![0; 5];
                colours[x as usize - 1] = cx;
                colours[y as usize - 1] = cy;
                for (i, &v) in others.iter().enumerate() {
                    colours[v as usize - 1] = code / 5u32.pow(i as u32) % 5 + 1;
                }
                colouring_defect(g, &Colouring::new(5, colours)).is_none()
            });
            if extends {
                extendable_colour_pairs += 1;
            }
        }
    }

    Ok(GadgetReport {
        bipartitions: 32,
        triangle_free_cuts,
        separating_cuts,
        extendable_colour_pairs,
        endpoints_nonadjacent: !g.has_edge(x, y),
        endpoint_degrees: (g.degree(x), g.degree(y)),
    })
}
