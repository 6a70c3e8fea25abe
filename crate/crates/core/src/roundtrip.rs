//! Per-instance check of the whole pipeline: the source formula, its
//! transform, the reduced graph and the formula extracted back from that
//! graph must agree on satisfiability, every certificate map must produce a
//! valid witness, and the reduced graph must meet its structural bounds.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::Result;
use crate::formula::CnfFormula;
use crate::graphs::verify_cut_triangle_free;
use crate::reduction::{
    assignment_to_cut, build_graph_with, construct_5_colouring, cut_to_assignment, extract_nae,
    nae_witness_to_cut, GadgetShape, TriangleKind,
};
use crate::solvers::{brute_force_cut, brute_force_nae, generate_instance, SearchBudget};
use crate::transform::{check_properties, lift_assignment, project_assignment, split_repeated_variables};

pub const MAX_DEGREE_BOUND: usize = 8;
pub const COLOUR_BOUND: u32 = 5;
pub const OCCURRENCE_BOUND: usize = 7;
pub const INTERNAL_TRIANGLES: usize = 5;

#[derive(Debug, Clone, Copy, Default)]
pub struct TrialOptions {
    pub budget: Option<SearchBudget>,
    pub gadget: GadgetShape,
}

impl TrialOptions {
    fn budget(&self) -> SearchBudget {
        self.budget.unwrap_or_default()
    }
}

/// Everything measured for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub seed: u64,
    pub num_vars: u32,
    pub num_clauses: usize,
    pub transformed_vars: u32,
    pub transformed_clauses: usize,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub max_degree: usize,
    pub colours_used: u32,
    pub max_occurrences: usize,
    pub source_sat: bool,
    pub transform_sat: bool,
    pub cut_found: bool,
    pub extract_sat: bool,
    pub properties_hold: bool,
    /// Human-readable description of every failed check.
    pub failures: Vec<String>,
    /// Witness files produced along the way, for determinism checks.
    pub witnesses: String,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn equivalent(&self) -> bool {
        self.source_sat == self.transform_sat
            && self.source_sat == self.cut_found
            && self.source_sat == self.extract_sat
    }

    pub fn summary_line(&self) -> String {
        let yn = |b: bool| if b { "sat" } else { "unsat" };
        format!(
            "{:>6} {:>3} {:>3} {:>5} {:>6} {:>4} {:>6} {:>7} {:>5} {:>5} {}",
            self.seed,
            self.num_vars,
            self.num_clauses,
            self.vertices,
            self.edges,
            self.max_degree,
            self.colours_used,
            yn(self.source_sat),
            yn(self.cut_found),
            yn(self.extract_sat),
            if self.passed() { "ok" } else { "FAIL" }
        )
    }
}

pub const SUMMARY_HEADER: &str =
    "  seed   n   m     V      E  deg colours  source   cut  extr status";

/// Runs every check on `f`. Only a budget overrun is an error; everything
/// else is recorded in [`TrialReport::failures`].
pub fn run_trial(seed: u64, f: &CnfFormula, opts: TrialOptions) -> Result<TrialReport> {
    use crate::certs::{write_cut_witness, write_nae_witness};

    let budget = opts.budget();
    let mut failures = Vec::new();
    let mut witnesses = String::new();
    let mut fail = |msg: String| failures.push(msg);

    let source = brute_force_nae(f, budget)?;
    witnesses.push_str(&write_nae_witness(source.as_ref()));

    let (tf, tmap) = split_repeated_variables(f)?;
    let props = check_properties(&tf);
    if !props.all() {
        fail(format!("transform property {} violated", props.first_violation().unwrap_or(0)));
    }
    let transformed = brute_force_nae(&tf, budget)?;
    witnesses.push_str(&write_nae_witness(transformed.as_ref()));

    if let Some(a) = &source {
        let lifted = lift_assignment(&tmap, a)?;
        if !tf.nae_satisfies(&lifted) {
            fail("lifted witness does not satisfy the transform".into());
        }
        match project_assignment(&tmap, &lifted) {
            Ok(back) if &back == a => {}
            _ => fail("project(lift(a)) != a".into()),
        }
    }
    if let Some(b) = &transformed {
        match project_assignment(&tmap, b) {
            Ok(p) if f.nae_satisfies(&p) => {}
            _ => fail("projected transform witness does not satisfy the source".into()),
        }
    }

    let (g, rm) = build_graph_with(&tf, opts.gadget)?;
    let triangles = g.triangles();
    let cut = brute_force_cut(&g, budget)?;
    witnesses.push_str(&write_cut_witness(cut.as_ref()));

    if let Some(cut) = &cut {
        match cut_to_assignment(&g, &rm, cut) {
            Ok(a) if tf.nae_satisfies(&a) => {}
            _ => fail("cut_to_assignment gave a non-witness".into()),
        }
    }
    if let Some(a) = &source {
        let lifted = lift_assignment(&tmap, a)?;
        match assignment_to_cut(&tf, &rm, &lifted) {
            Ok(c) if verify_cut_triangle_free(&g, &c) => match cut_to_assignment(&g, &rm, &c) {
                Ok(back) if back == lifted => {}
                _ => fail("cut_to_assignment(assignment_to_cut(a)) != a".into()),
            },
            _ => fail("assignment_to_cut gave an invalid cut".into()),
        }
    }

    let (extracted, _) = extract_nae(&g);
    let ex = brute_force_nae(&extracted, budget)?;
    witnesses.push_str(&write_nae_witness(ex.as_ref()));
    let extract_sat = match &ex {
        Some(a) => {
            let c = nae_witness_to_cut(&g, a);
            if c.is_none() {
                fail("extracted witness does not rebalance into a cut".into());
            }
            c.is_some()
        }
        None => false,
    };

    let max_degree = g.max_degree();
    if max_degree > MAX_DEGREE_BOUND {
        fail(format!("max degree {max_degree} > {MAX_DEGREE_BOUND}"));
    }
    let colouring = construct_5_colouring(&g, &rm);
    if colouring.k() > COLOUR_BOUND {
        fail(format!("constructed colouring uses {} colours", colouring.k()));
    }
    let max_occurrences = extracted.occurrence_counts().into_iter().max().unwrap_or(0);
    if max_occurrences > OCCURRENCE_BOUND {
        fail(format!("a variable occurs {max_occurrences} times in the extracted formula"));
    }
    let mut per_vertex = vec![0usize; g.num_vertices()];
    for &t in &triangles {
        for v in t {
            per_vertex[v as usize - 1] += 1;
        }
        match rm.classify_triangle(t) {
            Some(TriangleKind::Clause(_)) | Some(TriangleKind::Gadget(_)) => {}
            None => fail(format!("triangle {t:?} is neither a clause nor inside a gadget")),
        }
    }
    for v in g.vertices() {
        let count = per_vertex[v as usize - 1];
        if rm.is_internal(v) && count != INTERNAL_TRIANGLES {
            fail(format!("internal vertex {v} lies in {count} triangles"));
        }
        if !rm.is_internal(v) && count > OCCURRENCE_BOUND {
            fail(format!("variable vertex {v} lies in {count} triangles"));
        }
    }

    let mut report = TrialReport {
        seed,
        num_vars: f.num_vars(),
        num_clauses: f.num_clauses(),
        transformed_vars: tf.num_vars(),
        transformed_clauses: tf.num_clauses(),
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        triangles: triangles.len(),
        max_degree,
        colours_used: colouring.k(),
        max_occurrences,
        source_sat: source.is_some(),
        transform_sat: transformed.is_some(),
        cut_found: cut.is_some(),
        extract_sat,
        properties_hold: props.all(),
        failures,
        witnesses,
    };
    if !report.equivalent() {
        let msg = format!(
            "equivalence broken: source {} transform {} cut {} extract {}",
            report.source_sat, report.transform_sat, report.cut_found, report.extract_sat
        );
        report.failures.push(msg);
    }
    Ok(report)
}

/// Runs `trials` instances of `n` variables and `m` clauses, trial `i` using
/// seed `seed + i`. Trials run in parallel; the result is in trial order and
/// does not depend on scheduling.
pub fn run_trials(
    seed: u64,
    n: u32,
    m: usize,
    trials: u64,
    distinct_pairs: bool,
    opts: TrialOptions,
) -> Result<Vec<TrialReport>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let f = generate_instance(s, n, m, distinct_pairs)?;
            run_trial(s, &f, opts)
        })
        .collect()
}

pub fn summary_table(reports: &[TrialReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SUMMARY_HEADER}");
    for r in reports {
        let _ = writeln!(out, "{}", r.summary_line());
        for f in &r.failures {
            let _ = writeln!(out, "       ! {f}");
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let sat = reports.iter().filter(|r| r.source_sat).count();
    let _ = writeln!(
        out,
        "trials {} passed {} failed {} satisfiable {}",
        reports.len(),
        passed,
        reports.len() - passed,
        sat
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trials_pass() {
        let reports = run_trials(11, 6, 5, 8, false, TrialOptions::default()).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn broken_gadget_is_detected() {
        let opts = TrialOptions {
            gadget: GadgetShape::WithoutInternalEdge,
            ..TrialOptions::default()
        };
        let reports = run_trials(1, 5, 10, 4, false, opts).unwrap();
        assert!(reports.iter().any(|r| !r.passed()));
    }

    #[test]
    fn empty_run() {
        let reports = run_trials(0, 5, 3, 0, false, TrialOptions::default()).unwrap();
        assert!(reports.is_empty());
        assert!(summary_table(&reports).contains("trials 0 passed 0"));
    }
}
