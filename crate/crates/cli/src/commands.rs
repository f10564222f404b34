use std::fs;
use std::path::Path;

use orientkit::classify::{classify as classify_gamma, curated_table, GammaSpec};
use orientkit::format::{parse_any, parse_document, parse_kind};
use orientkit::instance::validate;
use orientkit::kplumber::{render, solve_kplumber, TileGrid};
use orientkit::random::pool_instance;
use orientkit::simulate::library::{check_document, FILES};
use orientkit::simulate::{derived_type_with_cap, env_edge_cap, Gadget};
use orientkit::solve::brute::{count_brute_with_cap, solve_brute_with_cap};
use orientkit::solve::Algorithm;
use orientkit::tiling::{
    check_tiling, checkerboard_invariant, count_tilings, tile_exact_cover, tile_greedy, verify_port_gadget,
    PortGadget, Region, TileSet, Tiling, EXACT_COVER_CAP,
};
use orientkit::{Error, Instance, Orientation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{digest, Report};
use crate::{ClassifyArgs, KplumberArgs, SimulateArgs, SolveArgs, TileAlgorithm, TileArgs, TileCommand, VerifySuiteArgs};

pub const SOLVE_ALGORITHMS: [&str; 11] =
    ["auto", "2sat", "affine", "gapfree", "monotone", "top-down", "bottom-up", "k5", "lp", "netflow", "brute"];

pub struct Outcome {
    pub report: Report,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::CapExceeded { .. } | Error::PolyFragmentViolation(_) => 3,
            _ => 2,
        };
        Failure { message: e.to_string(), code }
    }
}

type Res = Result<Outcome, Failure>;

fn usage(message: String) -> Failure {
    Failure { message, code: 2 }
}

/// Read and parse a file; errors name the file.
fn load<T>(path: &Path, parse: impl Fn(&str) -> orientkit::Result<T>) -> Result<(T, String), Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let value = parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((value, digest(text.as_bytes())))
}

/// `GO_ENUM_CAP` when set, otherwise the default raised to `needed`.
fn enum_cap(needed: usize) -> usize {
    if std::env::var_os("GO_ENUM_CAP").is_some() {
        env_edge_cap()
    } else {
        env_edge_cap().max(needed)
    }
}

pub fn classify(a: &ClassifyArgs) -> Res {
    let (mut gamma, d) = load(&a.gamma, GammaSpec::parse)?;
    gamma.has_constants |= a.constants;
    gamma.terminators.extend(a.terminator.iter().copied());
    let v = classify_gamma(&gamma, a.planar)?;
    let code = if v.tag() == "Unknown" { 3 } else { 0 };
    let mut report = Report::new("classify", Some(d), serde_json::to_value(&v).expect("verdict serializes"));
    if let Some(alg) = v.algorithm() {
        report = report.with_algorithm(alg);
    }
    Ok(Outcome { report, code })
}

fn run(alg: Algorithm, inst: &Instance) -> orientkit::Result<Option<Orientation>> {
    match alg {
        Algorithm::Brute => solve_brute_with_cap(inst, env_edge_cap()),
        _ => alg.run(inst),
    }
}

fn arcs(inst: &Instance, o: &Orientation) -> Vec<String> {
    inst.edges()
        .iter()
        .zip(&o.0)
        .map(|(e, &a_to_b)| {
            let (t, h) = if a_to_b { (e.a, e.b) } else { (e.b, e.a) };
            format!("{}:{}->{}:{}", inst.name(t.vertex), t.port, inst.name(h.vertex), h.port)
        })
        .collect()
}

pub fn solve(a: &SolveArgs) -> Res {
    let (doc, d) = load(&a.instance, parse_any)?;
    let inst = doc.instance;
    let alg = match a.algorithm.as_str() {
        "auto" => match orientkit::classify::choose_algorithm(&inst) {
            Some(alg) => alg,
            None if a.allow_brute => Algorithm::Brute,
            None => {
                let result = json!({ "status": "unknown", "note": "no polynomial algorithm applies; pass --allow-brute to enumerate" });
                return Ok(Outcome { report: Report::new("solve", Some(d), result), code: 3 });
            }
        },
        "monotone" => match Algorithm::TopDown.run(&inst) {
            Err(Error::Precondition(_)) => Algorithm::BottomUp,
            _ => Algorithm::TopDown,
        },
        name => name.parse()?,
    };
    let found = run(alg, &inst)?;
    let mut result = serde_json::Map::new();
    result.insert("status".into(), json!(if found.is_some() { "SAT" } else { "UNSAT" }));
    if let Some(o) = &found {
        let bad = validate(&inst, o);
        if !bad.is_empty() {
            return Err(Failure { message: format!("{alg} returned an invalid orientation at {bad:?}"), code: 2 });
        }
        result.insert("orientation".into(), json!(arcs(&inst, o)));
    }
    if a.count {
        result.insert("count".into(), json!(count_brute_with_cap(&inst, env_edge_cap())?));
    }
    let code = if found.is_some() { 0 } else { 1 };
    Ok(Outcome { report: Report::new("solve", Some(d), Value::Object(result)).with_algorithm(alg), code })
}

pub fn simulate(a: &SimulateArgs) -> Res {
    let (doc, d) = load(&a.gadget, parse_any)?;
    let g = Gadget::from_document(&doc)?;
    let derived = derived_type_with_cap(&g, enum_cap(g.instance.num_edges()))?;
    let target = match &a.target {
        Some(t) => Some(parse_kind(t).map_err(|e| usage(format!("--target: {e}")))?),
        None => doc.target.clone(),
    }
    .map(|k| k.expand());
    let simulates = target.as_ref().map(|t| *t == derived);
    let result = json!({
        "arity": g.arity(),
        "derived": derived.word_strings(),
        "target": target.as_ref().map(|t| t.word_strings()),
        "simulates": simulates,
    });
    let code = if simulates == Some(false) { 1 } else { 0 };
    Ok(Outcome { report: Report::new("simulate", Some(d), result), code })
}

pub fn kplumber(a: &KplumberArgs) -> Res {
    let (grid, d) = load(&a.grid, TileGrid::parse)?;
    let alg = if grid.has_curve() { "brute" } else { "lp" };
    let solved = solve_kplumber(&grid, a.allow_brute)?;
    let result = match &solved {
        Some(rg) => json!({ "status": "SAT", "cells": rg.names(), "rendered": render(rg) }),
        None => json!({ "status": "UNSAT" }),
    };
    let code = if solved.is_some() { 0 } else { 1 };
    Ok(Outcome { report: Report::new("kplumber", Some(d), result).with_algorithm(alg), code })
}

fn render_tiling(r: &Region, t: &Tiling) -> String {
    const LETTERS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    let (rows, cols) = t
        .iter()
        .flatten()
        .chain(r.cells.iter())
        .fold((0, 0), |(a, b), &(x, y)| (a.max(x + 1), b.max(y + 1)));
    let mut g = vec![vec!['.'; cols]; rows];
    for &(x, y) in &r.cells {
        g[x][y] = '#';
    }
    for (i, piece) in t.iter().enumerate() {
        for &(x, y) in piece {
            g[x][y] = LETTERS[i % LETTERS.len()] as char;
        }
    }
    g.into_iter().map(|row| row.into_iter().collect::<String>() + "\n").collect()
}

pub fn tile(a: &TileArgs) -> Res {
    if let Some(TileCommand::VerifyGadget { gadget, target }) = &a.sub {
        return verify_tile_gadget(gadget, target);
    }
    let (region, tiles) = (a.region.as_ref().expect("required"), a.tiles.as_ref().expect("required"));
    let (r, d) = load(region, Region::parse)?;
    let tiles = TileSet::parse(tiles).map_err(|e| usage(format!("--tiles: {e}")))?;
    let cap = enum_cap(EXACT_COVER_CAP);
    let found = match a.algorithm {
        TileAlgorithm::Greedy => tile_greedy(&r, &tiles)?,
        TileAlgorithm::Dlx => tile_exact_cover(&r, &tiles, cap)?,
    };
    let mut result = serde_json::Map::new();
    result.insert("status".into(), json!(if found.is_some() { "SAT" } else { "UNSAT" }));
    match &found {
        Some(t) => {
            if !check_tiling(&r, &tiles, t) {
                return Err(Failure { message: "tiler returned an invalid tiling".into(), code: 2 });
            }
            result.insert("pieces".into(), json!(t));
            result.insert("rendered".into(), json!(render_tiling(&r, t)));
        }
        None => {
            if let Some(why) = checkerboard_invariant(&tiles, &r) {
                result.insert("obstruction".into(), json!(why));
            }
        }
    }
    if a.count {
        result.insert("count".into(), json!(count_tilings(&r, &tiles, cap)?));
    }
    let alg = match a.algorithm {
        TileAlgorithm::Greedy => "greedy",
        TileAlgorithm::Dlx => "dlx",
    };
    let code = if found.is_some() { 0 } else { 1 };
    Ok(Outcome { report: Report::new("tile", Some(d), Value::Object(result)).with_algorithm(alg), code })
}

fn verify_tile_gadget(path: &Path, target: &str) -> Res {
    let (g, d) = load(path, PortGadget::parse)?;
    let target = parse_kind(target).map_err(|e| usage(format!("--target: {e}")))?.expand();
    if target.arity() != g.ports.len() {
        return Err(usage(format!("target has arity {} but the gadget has {} ports", target.arity(), g.ports.len())));
    }
    let derived = verify_port_gadget(&g, enum_cap(EXACT_COVER_CAP))?;
    let matches = derived == target;
    let result = json!({
        "ports": g.ports.len(),
        "derived": derived.word_strings(),
        "target": target.word_strings(),
        "matches": matches,
    });
    Ok(Outcome { report: Report::new("tile verify-gadget", Some(d), result), code: if matches { 0 } else { 1 } })
}

/// (name, contents) of the gadget files to check.
fn gadget_files(dir: Option<&Path>) -> Result<Vec<(String, String)>, Failure> {
    let Some(dir) = dir else {
        return Ok(FILES.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect());
    };
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gdg"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, text))
        })
        .collect()
}

pub fn verify_suite(a: &VerifySuiteArgs, seed: u64) -> Res {
    let files = gadget_files(a.gadgets.as_deref())?;
    let all_text: String = files.iter().map(|(_, t)| t.as_str()).collect();
    let mut ok = true;

    let mut gadgets = Vec::new();
    for (name, text) in &files {
        let doc = parse_document(text).map_err(|e| usage(format!("{name}: {e}")))?;
        let check = check_document(&doc).map_err(|e| usage(format!("{name}: {e}")))?;
        ok &= check.passed();
        gadgets.push(json!({ "name": name, "passed": check.passed() }));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut table, mut sampled, mut disagreements) = (Vec::new(), 0usize, Vec::new());
    for row in curated_table() {
        let v = classify_gamma(&row.gamma, row.planar)?;
        let passed = v.tag() == row.expected;
        ok &= passed;
        table.push(json!({ "name": row.name, "expected": row.expected, "got": v.tag(), "passed": passed }));
        let Some(alg) = v.algorithm() else { continue };
        let kinds = row.gamma.kinds();
        let mut done = 0;
        for _ in 0..a.samples * 20 {
            if done == a.samples {
                break;
            }
            let Some(inst) = pool_instance(&mut rng, &kinds, 10, row.planar) else { continue };
            done += 1;
            let got = alg.run(&inst);
            let truth = solve_brute_with_cap(&inst, env_edge_cap())?;
            let agrees = match &got {
                Ok(Some(o)) => truth.is_some() && validate(&inst, o).is_empty(),
                Ok(None) => truth.is_none(),
                Err(_) => false,
            };
            if !agrees {
                disagreements.push(json!({ "example": row.name, "algorithm": alg.name() }));
            }
        }
        sampled += done;
    }
    ok &= disagreements.is_empty();

    let result = json!({
        "passed": ok,
        "gadgets": gadgets,
        "classifier": table,
        "oracle": { "instances": sampled, "disagreements": disagreements.len() },
        "disagreements": disagreements,
    });
    let mut report = Report::new("verify-suite", Some(digest(all_text.as_bytes())), result);
    report.seed = Some(seed);
    Ok(Outcome { report, code: if ok { 0 } else { 1 } })
}
