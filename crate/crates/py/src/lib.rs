use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use singerlab::amodule::AModule;
use singerlab::description::parse_module;
use singerlab::ext::{epsilon_tower_comparison, minimal_resolution};
use singerlab::extpower;
use singerlab::singer::rplus_truncation;
use singerlab::suites::{run_suite, Suite};
use singerlab::tate_ss::{certify_collapse, e2_page, Variance};
use singerlab::{Error, Prime};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn module(description: &str) -> PyResult<AModule> {
    parse_module(description).map_err(err)
}

fn prime(p: u32) -> PyResult<Prime> {
    Prime::new(p).map_err(err)
}

fn variance(cohomological: bool) -> Variance {
    if cohomological {
        Variance::Cohomological
    } else {
        Variance::Homological
    }
}

/// Adem violations of a JSON module description, one string each.
#[pyfunction]
fn validate(description: &str) -> PyResult<Vec<String>> {
    Ok(module(description)?.validate_action().iter().map(|v| v.to_string()).collect())
}

/// `(name, degree, filtration)` for the basis of F^n R_+(M) in degrees `lo..=hi`.
#[pyfunction]
fn rplus_basis(description: &str, n: i64, lo: i64, hi: i64) -> PyResult<Vec<(String, i64, i64)>> {
    let m = module(description)?;
    let t = rplus_truncation(&m, n, (lo, hi)).map_err(err)?;
    Ok(t.keys().iter().enumerate().map(|(i, e)| (t.module().name_of(i).to_string(), t.module().degree_of(i), e.fil(&m))).collect())
}

/// `{(s, t): dim}` for Ext over the Steenrod algebra, `s <= s_max`, `t <= t_max`.
#[pyfunction]
fn ext_chart(description: &str, s_max: usize, t_max: i64) -> PyResult<BTreeMap<(usize, i64), usize>> {
    let m = module(description)?;
    Ok(minimal_resolution(&m, s_max, t_max).map_err(err)?.chart().cells)
}

#[pyfunction]
fn ext_chart_tsv(description: &str, s_max: usize, t_max: i64) -> PyResult<String> {
    let m = module(description)?;
    Ok(minimal_resolution(&m, s_max, t_max).map_err(err)?.chart().to_tsv())
}

/// Cells where the tower limit for F^n R_+(M), n = 0..depth, disagrees with Ext(M).
#[pyfunction]
fn tower_mismatches(description: &str, depth: i64, s_max: usize, max_stem: i64) -> PyResult<Vec<String>> {
    let m = module(description)?;
    Ok(epsilon_tower_comparison(&m, depth, s_max, (0, max_stem)).map_err(err)?.mismatches())
}

#[pyfunction]
#[pyo3(signature = (description, s_window, t_window, cohomological = false))]
fn tate_page_tsv(description: &str, s_window: (i64, i64), t_window: (i64, i64), cohomological: bool) -> PyResult<String> {
    let m = module(description)?;
    Ok(e2_page(m.space(), s_window, t_window, variance(cohomological)).to_tsv())
}

#[pyfunction]
#[pyo3(signature = (description, s_window, t_window, cohomological = false))]
fn collapse_certified(description: &str, s_window: (i64, i64), t_window: (i64, i64), cohomological: bool) -> PyResult<bool> {
    let m = module(description)?;
    Ok(certify_collapse(m.space(), s_window, t_window, variance(cohomological)).is_certified())
}

/// Runs a named invariant suite on the seeded fixtures; returns `(passed, failures)`.
#[pyfunction]
#[pyo3(signature = (suite, p, seed = 0))]
fn verify(suite: &str, p: u32, seed: u64) -> PyResult<(bool, Vec<String>)> {
    let s = Suite::parse(suite).ok_or_else(|| PyValueError::new_err(format!("unknown suite {suite:?}")))?;
    let r = run_suite(s, prime(p)?, seed, None).map_err(err)?;
    Ok((r.passed(), r.failures))
}

#[pyfunction]
fn coeff_alpha(q: i64, p: u32) -> PyResult<u32> {
    Ok(extpower::coeff_alpha(q, prime(p)?))
}

#[pyfunction]
fn coeff_nu(q: i64, p: u32) -> PyResult<u32> {
    Ok(extpower::coeff_nu(q, prime(p)?))
}

#[pyfunction]
fn binom_mod_p(n: i64, k: i64, p: u32) -> PyResult<u32> {
    Ok(singerlab::binom_mod_p(n, k, prime(p)?))
}

#[pymodule]
fn singerlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(rplus_basis, m)?)?;
    m.add_function(wrap_pyfunction!(ext_chart, m)?)?;
    m.add_function(wrap_pyfunction!(ext_chart_tsv, m)?)?;
    m.add_function(wrap_pyfunction!(tower_mismatches, m)?)?;
    m.add_function(wrap_pyfunction!(tate_page_tsv, m)?)?;
    m.add_function(wrap_pyfunction!(collapse_certified, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_nu, m)?)?;
    m.add_function(wrap_pyfunction!(binom_mod_p, m)?)?;
    Ok(())
}
