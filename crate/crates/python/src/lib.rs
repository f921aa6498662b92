//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (Python `int` is accepted wherever a rational is expected).

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qeuler::{euler, fermionic, qcore, symmetry, verify};
use qeuler::{EulerParams, EvalPoint, QContext, SymmetryParams, TruncationBudget};

fn err(e: qeuler::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts `Fraction` or `int`.
#[derive(Clone)]
struct Rational(BigRational);

impl<'py> FromPyObject<'_, 'py> for Rational {
    type Error = PyErr;

    fn extract(ob: Borrowed<'_, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(r) = ob.extract::<BigRational>() {
            return Ok(Rational(r));
        }
        let n: BigInt = ob.extract()?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

fn ctx(q: Rational) -> PyResult<QContext> {
    QContext::new(q.0).map_err(err)
}

fn point(q: Rational, t: Rational) -> PyResult<EvalPoint> {
    EvalPoint::new(q.0, t.0).map_err(err)
}

fn params(n: u32, h: i64, r: u32) -> PyResult<EulerParams> {
    EulerParams::new(n, h, r).map_err(err)
}

fn budget(terms: usize) -> PyResult<TruncationBudget> {
    TruncationBudget::new(terms).map_err(err)
}

/// Result of an infinite-series evaluation.
#[pyclass(frozen, get_all)]
struct ApproxValue {
    value: BigRational,
    tail_bound: BigRational,
    /// "truncated" or "extrapolated"
    method: String,
    terms_used: usize,
}

#[pymethods]
impl ApproxValue {
    fn contains(&self, x: Rational) -> bool {
        let d = &self.value - &x.0;
        d <= self.tail_bound && -d <= self.tail_bound
    }

    fn __repr__(&self) -> String {
        format!(
            "ApproxValue(value={}, tail_bound={}, method={:?}, terms_used={})",
            self.value, self.tail_bound, self.method, self.terms_used
        )
    }
}

impl From<qeuler::ApproxValue> for ApproxValue {
    fn from(v: qeuler::ApproxValue) -> Self {
        let method = match v.method {
            qeuler::Summation::Truncated => "truncated",
            qeuler::Summation::Extrapolated => "extrapolated",
        };
        Self {
            value: v.value,
            tail_bound: v.tail_bound,
            method: method.to_string(),
            terms_used: v.terms_used,
        }
    }
}

/// `[x]_q = (1 - q^x) / (1 - q)`.
#[pyfunction]
fn q_number(q: Rational, x: i64) -> PyResult<BigRational> {
    Ok(ctx(q)?.q_number(x))
}

#[pyfunction]
fn gauss_binomial(q: Rational, n: i64, i: i64) -> PyResult<BigRational> {
    Ok(ctx(q)?.gauss_binomial(n, i))
}

/// `(a; q)_n`.
#[pyfunction]
fn q_pochhammer(q: Rational, a: Rational, n: u32) -> PyResult<BigRational> {
    Ok(ctx(q)?.pochhammer(&a.0, n))
}

#[pyfunction]
fn classical_euler_poly(n: u32, r: u32, x: Rational) -> BigRational {
    euler::classical_euler_poly(n, r, &x.0)
}

/// Closed form at base `q` and `T = q^x`.
#[pyfunction]
fn q_euler_closed(n: u32, h: i64, r: u32, q: Rational, t: Rational) -> PyResult<BigRational> {
    euler::q_euler_closed(&params(n, h, r)?, &point(q, t)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, h, r, q, t, terms=60))]
fn q_euler_series(
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
    terms: usize,
) -> PyResult<ApproxValue> {
    euler::q_euler_series(&params(n, h, r)?, &point(q, t)?, budget(terms)?)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, h, r, q, t, terms=40))]
fn q_euler_multisum(
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
    terms: usize,
) -> PyResult<ApproxValue> {
    euler::q_euler_multisum(&params(n, h, r)?, &point(q, t)?, budget(terms)?)
        .map(Into::into)
        .map_err(err)
}

/// Iterated alternating-sum oracle for the `r`-fold integral.
#[pyfunction]
#[pyo3(signature = (n, h, r, q, t, terms=40))]
fn fermionic_integral(
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
    terms: usize,
) -> PyResult<ApproxValue> {
    fermionic::fermionic_integral_rd(&params(n, h, r)?, &point(q, t)?, budget(terms)?)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn q_to_1_limit(n: u32, h: i64, r: u32, x: u32) -> PyResult<BigRational> {
    euler::q_to_1_limit(&params(n, h, r)?, x).map_err(err)
}

#[pyfunction]
fn t_sum(n: u32, i: u32, q: Rational, h: i64, r: u32, w: u32) -> PyResult<BigRational> {
    symmetry::t_sum(n, i, &ctx(q)?, h, r, w).map_err(err)
}

#[pyfunction]
fn check_q_binomial_finite(
    q: Rational,
    b: Rational,
    n: u32,
) -> PyResult<(BigRational, BigRational, bool)> {
    let c = qcore::check_q_binomial_finite(&ctx(q)?, &b.0, n);
    Ok((c.lhs, c.rhs, c.equal))
}

fn symmetry_params(
    w1: u32,
    w2: u32,
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
) -> PyResult<SymmetryParams> {
    SymmetryParams::new(w1, w2, params(n, h, r)?, q.0, t.0).map_err(err)
}

/// Both sides of the polynomial-level symmetry and whether they agree.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn check_thm3(
    w1: u32,
    w2: u32,
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
) -> PyResult<(BigRational, BigRational, bool)> {
    let c = symmetry::check_thm3(&symmetry_params(w1, w2, n, h, r, q, t)?).map_err(err)?;
    Ok((c.lhs, c.rhs, c.equal))
}

/// Both sides of the convolution-level symmetry and whether they, and each
/// against its polynomial-level counterpart, agree.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn check_thm4(
    w1: u32,
    w2: u32,
    n: u32,
    h: i64,
    r: u32,
    q: Rational,
    t: Rational,
) -> PyResult<(BigRational, BigRational, bool)> {
    let c = symmetry::check_thm4(&symmetry_params(w1, w2, n, h, r, q, t)?).map_err(err)?;
    let holds = c.holds();
    Ok((c.convolution.lhs, c.convolution.rhs, holds))
}

#[pyfunction]
fn sample_points(seed: u64, count: usize) -> Vec<(BigRational, BigRational)> {
    verify::sample::sample_points(seed, count)
}

/// Runs a verification suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite="all", n_max=4, r_max=2, h_values=None, w_pairs=None, q_samples=3, truncation=40, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    suite: &str,
    n_max: u32,
    r_max: u32,
    h_values: Option<Vec<i64>>,
    w_pairs: Option<Vec<(u32, u32)>>,
    q_samples: usize,
    truncation: usize,
    seed: u64,
) -> PyResult<String> {
    let defaults = verify::RunConfig::default();
    let config = verify::RunConfig {
        suite: suite.parse().map_err(err)?,
        n_max,
        r_max,
        h_values: h_values.unwrap_or(defaults.h_values),
        w_pairs: w_pairs.unwrap_or(defaults.w_pairs),
        q_samples,
        truncation,
        seed,
        format: verify::Format::Json,
        fault: None,
    };
    let report = verify::run(&config).map_err(err)?;
    verify::render(&report, verify::Format::Json).map_err(err)
}

#[pymodule]
fn qeuler_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ApproxValue>()?;
    m.add_function(wrap_pyfunction!(q_number, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(q_pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(classical_euler_poly, m)?)?;
    m.add_function(wrap_pyfunction!(q_euler_closed, m)?)?;
    m.add_function(wrap_pyfunction!(q_euler_series, m)?)?;
    m.add_function(wrap_pyfunction!(q_euler_multisum, m)?)?;
    m.add_function(wrap_pyfunction!(fermionic_integral, m)?)?;
    m.add_function(wrap_pyfunction!(q_to_1_limit, m)?)?;
    m.add_function(wrap_pyfunction!(t_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_q_binomial_finite, m)?)?;
    m.add_function(wrap_pyfunction!(check_thm3, m)?)?;
    m.add_function(wrap_pyfunction!(check_thm4, m)?)?;
    m.add_function(wrap_pyfunction!(sample_points, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
