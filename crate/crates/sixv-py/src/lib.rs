//! Python module `sixv`: sampling, exact symmetric functions, the contour
//! formula for the extreme holes and the edge constants.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sixv_core::asymptotics::{cdf_contour as core_cdf, default_contour, gue_edge_cdf as core_gue, limit_constants as core_lc};
use sixv_core::sampler::{ChainSampler, SampleKey};
use sixv_core::{extract_holes, Hole, ModelParams, PathCollection, Signature, Spin};

fn err(e: sixv_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn signature(parts: Vec<i64>) -> PyResult<Signature> {
    Signature::new(parts).map_err(err)
}

fn collection(rows: Vec<Vec<i64>>) -> PyResult<PathCollection> {
    PathCollection::new(rows.into_iter().map(signature).collect::<PyResult<_>>()?).map_err(err)
}

/// Rows `λ^1, …, λ^N` of the path collection with the given sample index.
#[pyfunction]
#[pyo3(signature = (q, u, v, n, m, seed, index = 0))]
fn sample(q: f64, u: f64, v: f64, n: usize, m: usize, seed: u64, index: u64) -> PyResult<Vec<Vec<i64>>> {
    let p = ModelParams::homogeneous(q, u, v, n, m).map_err(err)?;
    let w = ChainSampler::new(&p).map_err(err)?.sample(SampleKey { seed, sample: index }).map_err(err)?;
    Ok((1..=n).map(|k| w.row(k).parts().to_vec()).collect())
}

/// Hole columns `Y^j` for `j = 1..=k`; infinite holes are `inf`.
#[pyfunction]
fn holes(rows: Vec<Vec<i64>>, k: usize) -> PyResult<Vec<Vec<f64>>> {
    let h = extract_holes(&collection(rows)?, k).map_err(err)?;
    Ok((1..=k)
        .map(|j| {
            h.column(j)
                .iter()
                .map(|y| match y {
                    Hole::At(x) => *x as f64,
                    Hole::Infinite => f64::INFINITY,
                })
                .collect()
        })
        .collect())
}

/// `F_λ(u)` for a strict signature.
#[pyfunction]
fn f_sym(lam: Vec<i64>, u: Vec<f64>, q: f64) -> PyResult<f64> {
    sixv_core::symm::f_sym(&signature(lam)?, &u, Spin::six_vertex(q)).map_err(err)
}

/// `G^c_ν(v)` for a strict signature.
#[pyfunction]
fn g_sym(nu: Vec<i64>, v: Vec<f64>, q: f64) -> PyResult<f64> {
    sixv_core::symm::g_sym(&signature(nu)?, &v, Spin::six_vertex(q)).map_err(err)
}

/// `ℙ(Y¹₁ ≤ m_1, …, Y^k_k ≤ m_k)` by the contour formula.
#[pyfunction]
fn cdf_contour(ms: Vec<usize>, q: f64, u: f64, v: f64, n: usize, m: usize) -> PyResult<f64> {
    let p = ModelParams::homogeneous(q, u, v, n, m).map_err(err)?;
    core_cdf(&ms, &p, &default_contour(&p)).map_err(err)
}

/// Edge constants as a dict with keys `a`, `a2`, `b1`, `c`.
#[pyfunction]
fn limit_constants(q: f64, u: f64, v: f64) -> PyResult<BTreeMap<&'static str, f64>> {
    let c = core_lc(q, u, v).map_err(err)?;
    Ok(BTreeMap::from([("a", c.a), ("a2", c.a2), ("b1", c.b1), ("c", c.c)]))
}

/// `ℙ(λ¹₁ ≤ x_1, …, λ^k_k ≤ x_k)` for the GUE-corners process.
#[pyfunction]
fn gue_edge_cdf(xs: Vec<f64>) -> PyResult<f64> {
    core_gue(&xs).map_err(err)
}

/// Number of Gelfand–Tsetlin patterns with top row `lam` (weakly increasing).
#[pyfunction]
#[pyo3(signature = (lam, strict = false))]
fn gt_count(lam: Vec<i64>, strict: bool) -> num_bigint::BigUint {
    sixv_core::gt::gt_count(&lam, strict)
}

#[pymodule]
fn sixv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(holes, m)?)?;
    m.add_function(wrap_pyfunction!(f_sym, m)?)?;
    m.add_function(wrap_pyfunction!(g_sym, m)?)?;
    m.add_function(wrap_pyfunction!(cdf_contour, m)?)?;
    m.add_function(wrap_pyfunction!(limit_constants, m)?)?;
    m.add_function(wrap_pyfunction!(gue_edge_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(gt_count, m)?)?;
    Ok(())
}
