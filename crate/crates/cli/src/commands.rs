use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};

use naecut::certs::{
    parse_colouring, parse_cut_witness, parse_nae_witness, write_colouring, write_cut_witness,
    write_nae_witness, COLOURING_FOUND, NO_COLOURING, NO_CUT,
};
use naecut::formula::{emit_cnf, parse_cnf, CnfFormula};
use naecut::graphs::{
    colouring_defect, emit_graph, find_k_colouring, monochromatic_triangle, parse_graph, Graph,
    DEFAULT_COLOURING_BUDGET,
};
use naecut::reduction::{build_graph, construct_5_colouring, cut_to_assignment, GadgetShape, ReductionMap};
use naecut::roundtrip::{run_trials, summary_table, TrialOptions};
use naecut::solvers::{brute_force_cut, brute_force_nae};
use naecut::transform::{check_properties, project_assignment, split_repeated_variables};
use naecut::{Error, SearchBudget, TransformMap};

pub const BUDGET_VAR: &str = "NAE_REDUCE_BUDGET";

/// Decision reached by a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Yes => ExitCode::SUCCESS,
            Outcome::No => ExitCode::from(1),
        }
    }
}

fn decide(yes: bool) -> Outcome {
    if yes {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: &str) -> anyhow::Error {
    Usage(msg.to_string()).into()
}

/// 3 for an exhausted search budget, 2 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 3,
        _ => 2,
    }
}

fn budget() -> anyhow::Result<SearchBudget> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(SearchBudget::default()),
        Ok(raw) => match raw.trim().parse::<u64>() {
            Ok(n) if n > 0 => Ok(SearchBudget::new(n)),
            _ => Err(usage(&format!("{BUDGET_VAR} must be a positive integer, got `{raw}`"))),
        },
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_cnf(path: &Path) -> anyhow::Result<CnfFormula> {
    parse_cnf(&read(path)?).with_context(|| path.display().to_string())
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_graph(&read(path)?).with_context(|| path.display().to_string())
}

fn literals(values: impl IntoIterator<Item = i64>) -> String {
    values.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn transform(cnf: &Path, output: Option<&Path>, map: Option<&Path>) -> anyhow::Result<Outcome> {
    let f = load_cnf(cnf)?;
    let (tf, tmap) = split_repeated_variables(&f)?;
    let map_text = tmap.to_text();
    let mut text = emit_cnf(&tf);
    for line in map_text.lines() {
        let _ = writeln!(text, "c {line}");
    }
    if let Some(path) = map {
        write(path, &map_text)?;
    }
    match output {
        Some(path) => {
            write(path, &text)?;
            println!(
                "c variables {} -> {}, clauses {} -> {}",
                f.num_vars(),
                tf.num_vars(),
                f.num_clauses(),
                tf.num_clauses()
            );
        }
        None => print!("{text}"),
    }
    Ok(Outcome::Yes)
}

pub fn reduce(
    cnf: &Path,
    output: Option<&Path>,
    map: Option<&Path>,
    skip_transform: bool,
) -> anyhow::Result<Outcome> {
    let f = load_cnf(cnf)?;
    let tf = if skip_transform {
        if let Some(p) = check_properties(&f).first_violation() {
            return Err(Error::PropertyViolated(p).into());
        }
        f
    } else {
        split_repeated_variables(&f)?.0
    };
    let (g, rm) = build_graph(&tf)?;
    let colouring = construct_5_colouring(&g, &rm);

    let mut report = String::new();
    let _ = writeln!(report, "c vertices {}", g.num_vertices());
    let _ = writeln!(report, "c edges {}", g.num_edges());
    let _ = writeln!(report, "c triangles {}", g.triangles().len());
    let _ = writeln!(report, "c max degree {}", g.max_degree());
    let _ = writeln!(report, "c colours {}", colouring.k());
    if tf.num_clauses() == 0 {
        let verdict = if g.num_vertices() >= 2 { "every split is a cut" } else { "no cut exists" };
        let _ = writeln!(report, "c no clauses, graph is {} isolated vertices: {verdict}", g.num_vertices());
    }
    print!("{report}");

    if let Some(path) = map {
        write(path, &rm.to_text())?;
    }
    match output {
        Some(path) => write(path, &emit_graph(&g))?,
        None => print!("{}", emit_graph(&g)),
    }
    Ok(Outcome::Yes)
}

pub fn solve_nae(cnf: &Path) -> anyhow::Result<Outcome> {
    let f = load_cnf(cnf)?;
    let witness = brute_force_nae(&f, budget()?)?;
    print!("{}", write_nae_witness(witness.as_ref()));
    Ok(decide(witness.is_some()))
}

pub fn solve_cut(graph: &Path) -> anyhow::Result<Outcome> {
    let g = load_graph(graph)?;
    if g.num_vertices() < 2 {
        println!("c fewer than two vertices: no split into two non-empty sides");
        println!("{NO_CUT}");
        return Ok(Outcome::No);
    }
    if g.triangles().is_empty() {
        println!("c graph has no triangles: every split is a cut");
    }
    let cut = brute_force_cut(&g, budget()?)?;
    print!("{}", write_cut_witness(cut.as_ref()));
    Ok(decide(cut.is_some()))
}

pub fn color(graph: &Path, k: u32) -> anyhow::Result<Outcome> {
    let g = load_graph(graph)?;
    let limit = match std::env::var_os(BUDGET_VAR) {
        Some(_) => budget()?.max_states(),
        None => DEFAULT_COLOURING_BUDGET,
    };
    match find_k_colouring(&g, k, limit)? {
        Some(c) => {
            println!("{COLOURING_FOUND}");
            print!("{}", write_colouring(&c));
            Ok(Outcome::Yes)
        }
        None => {
            println!("{NO_COLOURING}");
            Ok(Outcome::No)
        }
    }
}

pub fn triangles(graph: &Path) -> anyhow::Result<Outcome> {
    let g = load_graph(graph)?;
    let ts = g.triangles();
    let mut out = format!("c triangles {}\n", ts.len());
    for t in ts {
        let _ = writeln!(out, "v {} {} {}", t[0], t[1], t[2]);
    }
    // A reader that stops early (`| head`) is not an error.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    Ok(Outcome::Yes)
}

pub fn verify_assignment(cnf: &Path, cert: &Path, map: Option<&Path>) -> anyhow::Result<Outcome> {
    let f = load_cnf(cnf)?;
    let claim = parse_nae_witness(&read(cert)?).with_context(|| cert.display().to_string())?;
    let Some(a) = claim else {
        return Ok(match brute_force_nae(&f, budget()?)? {
            None => {
                println!("c unsatisfiability confirmed by exhaustive search");
                Outcome::Yes
            }
            Some(w) => {
                println!("c claim is wrong, formula is satisfied by");
                println!("v {} 0", literals(w.to_literals()));
                Outcome::No
            }
        });
    };
    if a.len() != f.num_vars() as usize {
        return Err(Error::SizeMismatch {
            expected: f.num_vars() as usize,
            found: a.len(),
        }
        .into());
    }
    if let Some((i, c)) = f.clauses().iter().enumerate().find(|(_, c)| !c.nae_satisfied(&a)) {
        let lits = literals(c.literals().iter().map(|l| l.to_dimacs()));
        println!("clause {} ({lits}) is not NAE-satisfied", i + 1);
        return Ok(Outcome::No);
    }
    if let Some(path) = map {
        let tmap = TransformMap::parse(&read(path)?).with_context(|| path.display().to_string())?;
        let expected_clauses = tmap.num_source_clauses() + tmap.num_equality_clauses();
        if tmap.num_output_vars() != a.len() || expected_clauses != f.num_clauses() {
            return Err(anyhow!(
                "map describes {} variables and {} clauses, formula has {} and {}",
                tmap.num_output_vars(),
                expected_clauses,
                a.len(),
                f.num_clauses()
            ));
        }
        match project_assignment(&tmap, &a) {
            Ok(p) => println!("c source assignment: {} 0", literals(p.to_literals())),
            Err(Error::ChainViolated(v)) => {
                println!("copies of source variable {v} disagree");
                return Ok(Outcome::No);
            }
            Err(e) => return Err(e.into()),
        }
    }
    println!("c certificate valid");
    Ok(Outcome::Yes)
}

pub fn verify_cut(
    graph: &Path,
    cert: &Path,
    map: Option<&Path>,
    assignment: Option<&Path>,
) -> anyhow::Result<Outcome> {
    let g = load_graph(graph)?;
    let claim =
        parse_cut_witness(&read(cert)?, g.num_vertices()).with_context(|| cert.display().to_string())?;
    let Some(cut) = claim else {
        return Ok(match brute_force_cut(&g, budget()?)? {
            None => {
                println!("c absence of a cut confirmed by exhaustive search");
                Outcome::Yes
            }
            Some(c) => {
                println!("c claim is wrong, side A of a cut:");
                println!("v {} 0", literals(c.side_a().into_iter().map(i64::from)));
                Outcome::No
            }
        });
    };
    if !cut.is_proper() {
        println!("cut has an empty side");
        return Ok(Outcome::No);
    }
    if let Some(t) = monochromatic_triangle(&g, &cut) {
        println!("monochromatic triangle {} {} {}", t[0], t[1], t[2]);
        return Ok(Outcome::No);
    }
    if let Some(path) = map {
        let rm = ReductionMap::parse(&read(path)?).with_context(|| path.display().to_string())?;
        if rm.num_vertices() != g.num_vertices() {
            return Err(Error::SizeMismatch {
                expected: g.num_vertices(),
                found: rm.num_vertices(),
            }
            .into());
        }
        let derived = cut_to_assignment(&g, &rm, &cut)?;
        println!("c encoded assignment: {} 0", literals(derived.to_literals()));
        if let Some(apath) = assignment {
            let a = parse_nae_witness(&read(apath)?)
                .with_context(|| apath.display().to_string())?
                .ok_or_else(|| usage("assignment file carries no assignment"))?;
            if a.len() != derived.len() {
                return Err(Error::SizeMismatch {
                    expected: derived.len(),
                    found: a.len(),
                }
                .into());
            }
            // Swapping the sides of a cut complements the assignment.
            let flipped = a.complement();
            if a != derived && flipped != derived {
                let v = (1..=a.len() as u32)
                    .find(|&v| a.value(v) != derived.value(v))
                    .unwrap_or(1);
                println!("variable {v}: cut does not match the assignment");
                return Ok(Outcome::No);
            }
        }
    }
    println!("c certificate valid");
    Ok(Outcome::Yes)
}

pub fn verify_coloring(graph: &Path, cert: &Path) -> anyhow::Result<Outcome> {
    let g = load_graph(graph)?;
    let c = parse_colouring(&read(cert)?, g.num_vertices()).with_context(|| cert.display().to_string())?;
    match colouring_defect(&g, &c) {
        Some(defect) => {
            println!("{defect}");
            Ok(Outcome::No)
        }
        None => {
            println!("c proper colouring with {} colours", c.k());
            Ok(Outcome::Yes)
        }
    }
}

pub fn roundtrip(seed: u64, n: u32, m: usize, trials: u64, break_gadget: bool) -> anyhow::Result<Outcome> {
    let opts = TrialOptions {
        budget: Some(budget()?),
        gadget: if break_gadget {
            GadgetShape::WithoutInternalEdge
        } else {
            GadgetShape::GluedTetrahedra
        },
    };
    let reports = run_trials(seed, n, m, trials, false, opts)?;
    print!("{}", summary_table(&reports));
    Ok(decide(reports.iter().all(|r| r.passed())))
}
