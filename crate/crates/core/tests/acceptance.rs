//! Acceptance suite. Each test prints one `PASS`/`FAIL` line per criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use naecut::formula::{incidence_graph, CnfFormula, IncidenceVariant};
use naecut::graphs::{find_k_colouring, verify_cut_triangle_free, Graph, DEFAULT_COLOURING_BUDGET};
use naecut::reduction::{gadget_certify, gadget_graph};
use naecut::roundtrip::{run_trial, TrialOptions, TrialReport};
use naecut::solvers::{
    assignment_from_4colouring, brute_force_cut, cut_from_4colouring, generate_colourable_graph,
    generate_instance, sweep_size, SearchBudget,
};
use naecut::transform::{check_properties, split_repeated_variables};

const SWEEP_BASE_SEED: u64 = 2024;
const SWEEP_INSTANCES: u64 = 200;
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(60);
const FAST_PATH_INSTANCES: usize = 100;
const RAMSEY_TIME_LIMIT: Duration = Duration::from_secs(1);

/// Written to the stdout handle directly so the line survives output capture.
fn report(criterion: &str, ok: bool, detail: &str) {
    let line = format!("{} criterion {criterion}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}

fn sweep_instance(i: u64) -> (u64, CnfFormula) {
    let seed = SWEEP_BASE_SEED + i;
    let (n, m) = sweep_size(seed);
    (seed, generate_instance(seed, n, m, false).expect("sweep instance"))
}

fn sweep() -> (Vec<TrialReport>, Duration) {
    let start = Instant::now();
    let reports = (0..SWEEP_INSTANCES)
        .map(|i| {
            let (seed, f) = sweep_instance(i);
            run_trial(seed, &f, TrialOptions::default()).expect("sweep within budget")
        })
        .collect();
    (reports, start.elapsed())
}

#[test]
fn criterion_1_cut_equivalence() {
    let (reports, elapsed) = sweep();
    let agree = reports.iter().filter(|r| r.source_sat == r.cut_found).count();
    let sat = reports.iter().filter(|r| r.source_sat).count();
    let ok = agree == SWEEP_INSTANCES as usize && elapsed < SWEEP_TIME_LIMIT;
    report(
        "1",
        ok,
        &format!(
            "{agree}/{SWEEP_INSTANCES} agree (satisfiable {sat}), full sweep {:.2?}",
            elapsed
        ),
    );
    assert!(sat > 0 && sat < SWEEP_INSTANCES as usize, "sweep should mix sat and unsat");
    assert!(ok);
}

#[test]
fn criterion_2_extraction_equivalence() {
    let (reports, _) = sweep();
    let agree = reports.iter().filter(|r| r.source_sat == r.extract_sat).count();
    let ok = agree == SWEEP_INSTANCES as usize;
    report("2", ok, &format!("{agree}/{SWEEP_INSTANCES} agree"));
    assert!(ok);
}

#[test]
fn criterion_3_structural_bounds() {
    let (reports, _) = sweep();
    let violations: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.failures
                .iter()
                .filter(|f| {
                    f.contains("degree")
                        || f.contains("colour")
                        || f.contains("occurs")
                        || f.contains("triangles")
                        || f.contains("neither")
                })
                .map(move |f| format!("seed {}: {f}", r.seed))
        })
        .collect();
    let max_deg = reports.iter().map(|r| r.max_degree).max().unwrap_or(0);
    let max_col = reports.iter().map(|r| r.colours_used).max().unwrap_or(0);
    let max_occ = reports.iter().map(|r| r.max_occurrences).max().unwrap_or(0);
    let ok = violations.is_empty() && max_deg <= 8 && max_col <= 5 && max_occ <= 7;
    report(
        "3",
        ok,
        &format!(
            "max degree {max_deg}, max colours {max_col}, max occurrences {max_occ}, {} violations",
            violations.len()
        ),
    );
    assert!(ok, "{violations:#?}");
}

#[test]
fn criterion_4_transform_contract() {
    let mut props_ok = 0;
    for i in 0..SWEEP_INSTANCES {
        let (_, f) = sweep_instance(i);
        let (tf, _) = split_repeated_variables(&f).unwrap();
        if check_properties(&tf).all() {
            props_ok += 1;
        }
    }
    let (reports, _) = sweep();
    let lift_failures = reports
        .iter()
        .filter(|r| r.failures.iter().any(|f| f.contains("lift") || f.contains("project")))
        .count();
    let ok = props_ok == SWEEP_INSTANCES && lift_failures == 0;
    report(
        "4",
        ok,
        &format!("properties hold {props_ok}/{SWEEP_INSTANCES}, lift/project failures {lift_failures}"),
    );
    assert!(ok);
}

#[test]
fn criterion_5_gadget_certification() {
    let canonical = gadget_certify(&gadget_graph(), 1, 2).unwrap();
    let with_xy = gadget_certify(&gadget_graph().with_edge(1, 2).unwrap(), 1, 2).unwrap();
    let without_ab = gadget_certify(&gadget_graph().without_edge(3, 4), 1, 2).unwrap();
    let ok = canonical.passes_all()
        && canonical.bipartitions == 32
        && !with_xy.endpoint_shape()
        && !without_ab.endpoints_forced_together();
    report(
        "5",
        ok,
        &format!(
            "canonical {:?} ({} triangle-free cuts, {}/25 colour pairs); +xy {:?}; -ab {:?}",
            canonical.as_array(),
            canonical.triangle_free_cuts,
            canonical.extendable_colour_pairs,
            with_xy.as_array(),
            without_ab.as_array()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6_four_colourable_fast_paths() {
    let mut formulas_ok = 0;
    let mut seed = 0u64;
    let mut tried = 0;
    while tried < FAST_PATH_INSTANCES {
        seed += 1;
        let (n, m) = sweep_size(seed);
        let f = generate_instance(seed, n, m.min(8), false).unwrap();
        let (g, _) = incidence_graph(&f, IncidenceVariant::A).unwrap();
        let Some(c) = find_k_colouring(&g, 4, DEFAULT_COLOURING_BUDGET).unwrap() else {
            continue;
        };
        tried += 1;
        if let Ok(a) = assignment_from_4colouring(&f, &c) {
            if f.nae_satisfies(&a) {
                formulas_ok += 1;
            }
        }
    }

    let mut graphs_ok = 0;
    for seed in 0..FAST_PATH_INSTANCES as u64 {
        let n = 2 + (seed % 14) as usize;
        let (g, c) = generate_colourable_graph(seed, n, 4, 60);
        if let Ok(cut) = cut_from_4colouring(&g, &c) {
            if verify_cut_triangle_free(&g, &cut) {
                graphs_ok += 1;
            }
        }
    }
    let ok = formulas_ok == FAST_PATH_INSTANCES && graphs_ok == FAST_PATH_INSTANCES;
    report(
        "6",
        ok,
        &format!(
            "assignments {formulas_ok}/{FAST_PATH_INSTANCES}, cuts {graphs_ok}/{FAST_PATH_INSTANCES}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_7_ramsey_sanity() {
    let start = Instant::now();
    let k6 = brute_force_cut(&Graph::complete(6), SearchBudget::default()).unwrap();
    let k5 = brute_force_cut(&Graph::complete(5), SearchBudget::default()).unwrap();
    let elapsed = start.elapsed();
    let k6_ok = k6.is_none();
    let k5_ok = k5.is_some();
    report(
        "7",
        k6_ok && k5_ok && elapsed < RAMSEY_TIME_LIMIT,
        &format!(
            "K6 cut: {}, K5 cut: {} (required: none / found), {:.2?}",
            if k6.is_some() { "found" } else { "none" },
            if k5.is_some() { "found" } else { "none" },
            elapsed
        ),
    );
    assert!(k6_ok, "K6 must have no triangle-free cut");
    assert!(k5_ok, "criterion requires a triangle-free cut of K5");
}

#[test]
fn criterion_8_determinism() {
    let witnesses = |reports: &[TrialReport]| -> String {
        reports.iter().map(|r| r.witnesses.as_str()).collect()
    };
    let (first, _) = sweep();
    let (second, _) = sweep();

    let parallel = naecut::roundtrip::run_trials(SWEEP_BASE_SEED, 10, 12, 40, false, TrialOptions::default()).unwrap();
    let serial: Vec<TrialReport> = (0..40)
        .map(|i| {
            let s = SWEEP_BASE_SEED + i;
            run_trial(s, &generate_instance(s, 10, 12, false).unwrap(), TrialOptions::default()).unwrap()
        })
        .collect();

    let gadget_a = format!("{:?}", gadget_certify(&gadget_graph(), 1, 2).unwrap());
    let gadget_b = format!("{:?}", gadget_certify(&gadget_graph(), 1, 2).unwrap());
    let k4_a = brute_force_cut(&Graph::complete(4), SearchBudget::default()).unwrap();
    let k4_b = brute_force_cut(&Graph::complete(4), SearchBudget::default()).unwrap();

    let ok = witnesses(&first) == witnesses(&second)
        && witnesses(&parallel) == witnesses(&serial)
        && gadget_a == gadget_b
        && k4_a == k4_b;
    report(
        "8",
        ok,
        &format!(
            "{} witness bytes identical across runs and worker counts",
            witnesses(&first).len()
        ),
    );
    assert!(ok);
}
