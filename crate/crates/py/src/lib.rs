//! Python bindings. Inputs are the same text formats the command line reads.

use orientkit::classify::{classify as classify_gamma, GammaSpec};
use orientkit::format::{parse_any, parse_document, parse_kind};
use orientkit::kplumber::{render, solve_kplumber, TileGrid};
use orientkit::simulate::library::{check_document, FILES};
use orientkit::simulate::{derived_type, Gadget};
use orientkit::solve::{dispatch, Algorithm, Dispatch};
use orientkit::tiling::{tile_exact_cover, Region, TileSet, EXACT_COVER_CAP};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: orientkit::Error) -> PyErr {
    match e {
        orientkit::Error::Parse { .. } | orientkit::Error::Invalid(_) | orientkit::Error::Rotation(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Verdict for a gamma file as `(tag, algorithm or route or note)`.
#[pyfunction]
#[pyo3(signature = (gamma, planar = false, constants = false))]
fn classify(gamma: &str, planar: bool, constants: bool) -> PyResult<(String, String)> {
    let mut g = GammaSpec::parse(gamma).map_err(err)?;
    g.has_constants |= constants;
    let v = classify_gamma(&g, planar).map_err(err)?;
    let detail = match &v.outcome {
        orientkit::classify::Outcome::P { algorithm, .. } => algorithm.to_string(),
        orientkit::classify::Outcome::NpComplete { route } => route.clone(),
        orientkit::classify::Outcome::Unknown { note } => note.clone(),
    };
    Ok((v.tag().to_string(), detail))
}

/// `(algorithm, orientation)`; the orientation is one bool per edge (true
/// means first endpoint to second) or None when unsatisfiable.
#[pyfunction]
#[pyo3(signature = (instance, algorithm = "auto", allow_brute = false))]
fn solve(instance: &str, algorithm: &str, allow_brute: bool) -> PyResult<(String, Option<Vec<bool>>)> {
    let inst = parse_any(instance).map_err(err)?.instance;
    let (alg, o) = if algorithm == "auto" {
        match dispatch(&inst, allow_brute).map_err(err)? {
            Dispatch::Solved { algorithm, orientation } => (algorithm, orientation),
            Dispatch::NoneKnown => return Err(PyRuntimeError::new_err("no polynomial algorithm applies")),
        }
    } else {
        let alg: Algorithm = algorithm.parse().map_err(err)?;
        (alg, alg.run(&inst).map_err(err)?)
    };
    Ok((alg.to_string(), o.map(|o| o.0)))
}

/// Words of the type a gadget simulates, port 0 first.
#[pyfunction]
fn simulate(gadget: &str) -> PyResult<Vec<String>> {
    let doc = parse_document(gadget).map_err(err)?;
    let g = Gadget::from_document(&doc).map_err(err)?;
    Ok(derived_type(&g).map_err(err)?.word_strings())
}

/// Words of a vertex kind written in instance syntax, e.g. `"sym 3 S=1"`.
#[pyfunction]
fn expand_kind(kind: &str) -> PyResult<Vec<String>> {
    Ok(parse_kind(kind).map_err(err)?.expand().word_strings())
}

/// Rendered solution of a pipe grid, or None when unsolvable.
#[pyfunction]
#[pyo3(signature = (grid, allow_brute = false))]
fn kplumber(grid: &str, allow_brute: bool) -> PyResult<Option<String>> {
    let g = TileGrid::parse(grid).map_err(err)?;
    Ok(solve_kplumber(&g, allow_brute).map_err(err)?.map(|rg| render(&rg)))
}

/// Pieces of one exact tiling as (row, col) lists, or None.
#[pyfunction]
fn tile(region: &str, tiles: &str) -> PyResult<Option<Vec<Vec<(usize, usize)>>>> {
    let r = Region::parse(region).map_err(err)?;
    let t = TileSet::parse(tiles).map_err(err)?;
    tile_exact_cover(&r, &t, EXACT_COVER_CAP).map_err(err)
}

/// `(name, passed)` for every shipped gadget.
#[pyfunction]
fn verify_gadgets() -> PyResult<Vec<(String, bool)>> {
    FILES
        .iter()
        .map(|(name, text)| {
            let doc = parse_document(text).map_err(err)?;
            Ok((name.to_string(), check_document(&doc).map_err(err)?.passed()))
        })
        .collect()
}

#[pymodule]
fn orientkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(expand_kind, m)?)?;
    m.add_function(wrap_pyfunction!(kplumber, m)?)?;
    m.add_function(wrap_pyfunction!(tile, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gadgets, m)?)?;
    Ok(())
}
