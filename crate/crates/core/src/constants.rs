//! The lower-bound sieve constant `C(θ)` on `[1/4, 2/7]` and the exponent map `ν(η)`.

use serde::Serialize;

use crate::buchstab::BuchstabTable;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadResult};

pub const THETA_MIN: f64 = 0.25;
pub const THETA_MAX: f64 = 2.0 / 7.0;

/// Level `θ = 7/22` used for the exponent `ν`.
pub const THETA_NU: f64 = 7.0 / 22.0;

const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaConstant {
    pub theta: f64,
    pub value: f64,
    /// sum of the reported quadrature error estimates
    pub error: f64,
    pub i1: f64,
    pub i2: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(THETA_MIN..=THETA_MAX).contains(&theta) {
        return Err(Error::precondition(format!(
            "C(theta) is only defined here for 1/4 <= theta <= 2/7 (= {THETA_MAX:.6}); got {theta}. \
             Beyond 2/7 further four-dimensional correction integrals are required, which are not implemented"
        )));
    }
    Ok(())
}

/// Integrates `f` over `[a, b]`, split at `at` when it lies strictly inside.
fn integrate_split<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, at: f64, tol: f64) -> QuadResult {
    if at > a && at < b {
        let l = integrate(&mut f, a, at, tol / 2.0, 1e-14);
        let r = integrate(&mut f, at, b, tol / 2.0, 1e-14);
        QuadResult {
            value: l.value + r.value,
            error: l.error + r.error,
        }
    } else {
        integrate(f, a, b, tol, 1e-14)
    }
}

/// `∫_{1−2θ}^{1/2} ∫_{1−θ−α}^{(1−α)/2} dβ dα / (αβ(1−α−β))`.
pub fn first_integral(theta: f64) -> QuadResult {
    let mut inner_err = 0.0;
    let outer = integrate(
        |alpha: f64| {
            let r = integrate(
                |beta: f64| 1.0 / (alpha * beta * (1.0 - alpha - beta)),
                1.0 - theta - alpha,
                (1.0 - alpha) / 2.0,
                INNER_TOL,
                1e-14,
            );
            inner_err += r.error;
            r.value
        },
        1.0 - 2.0 * theta,
        0.5,
        OUTER_TOL,
        1e-14,
    );
    QuadResult {
        value: outer.value,
        error: outer.error + inner_err.min(1.0) * (0.5 - (1.0 - 2.0 * theta)),
    }
}

/// `∫_{(1−θ)/3}^{θ} ∫_{(1−θ−α)/2}^{α} ℬ((1−α−β)/β) dβ dα / (αβ²)`.
///
/// The Buchstab argument crosses 2 at `β = (1−α)/3`, which happens only for
/// `α ≥ 1/4`; both integrals are split there.
pub fn second_integral(theta: f64, table: &BuchstabTable) -> QuadResult {
    let mut inner_err = 0.0;
    let lo = (1.0 - theta) / 3.0;
    let outer = integrate_split(
        |alpha: f64| {
            let r = integrate_split(
                |beta: f64| {
                    let arg = ((1.0 - alpha - beta) / beta).max(1.0);
                    table.eval(arg).expect("argument stays in [1, 2.2]") / (alpha * beta * beta)
                },
                (1.0 - theta - alpha) / 2.0,
                alpha,
                (1.0 - alpha) / 3.0,
                INNER_TOL,
            );
            inner_err += r.error;
            r.value
        },
        lo,
        theta,
        0.25,
        OUTER_TOL,
    );
    QuadResult {
        value: outer.value,
        error: outer.error + inner_err.min(1.0) * (theta - lo),
    }
}

pub fn c_theta(theta: f64, table: &BuchstabTable) -> Result<ThetaConstant> {
    check_theta(theta)?;
    // largest Buchstab argument on the domain, at the corner α = β = (1−θ)/3
    let corner = (1.0 + 2.0 * theta) / (1.0 - theta);
    if corner > table.u_max() || corner < 1.0 {
        return Err(Error::precondition("Buchstab table too short for C(theta)"));
    }
    let i1 = first_integral(theta);
    let i2 = second_integral(theta, table);
    Ok(ThetaConstant {
        theta,
        value: 1.0 - i1.value - i2.value,
        error: i1.error + i2.error,
        i1: i1.value,
        i2: i2.value,
    })
}

/// Least-squares fit of `1 − C(θ)` against `(θ − 1/4)²` through the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeFit {
    pub points: Vec<ThetaConstant>,
    /// fitted `K` in `1 − C(θ) ≈ K (θ − 1/4)²`
    pub coefficient: f64,
    /// `max |1 − C − K δ²| / (K δ²)` over grid points with `δ > 0`
    pub max_relative_residual: f64,
    pub strictly_decreasing: bool,
}

impl EnvelopeFit {
    /// Relative residual `|1 − C(θ) − Kδ²| / (Kδ²)` at a given `θ`.
    pub fn relative_residual_at(&self, theta: f64, table: &BuchstabTable) -> Result<f64> {
        let c = c_theta(theta, table)?;
        let quad = self.coefficient * (theta - 0.25).powi(2);
        Ok(((1.0 - c.value) - quad).abs() / quad)
    }
}

pub fn envelope_check(grid: &[f64], table: &BuchstabTable) -> Result<EnvelopeFit> {
    let points = grid
        .iter()
        .map(|&t| c_theta(t, table))
        .collect::<Result<Vec<_>>>()?;
    let (mut num, mut den) = (0.0, 0.0);
    for p in &points {
        let d2 = (p.theta - 0.25).powi(2);
        num += (1.0 - p.value) * d2;
        den += d2 * d2;
    }
    let k = if den > 0.0 { num / den } else { 0.0 };
    let max_relative_residual = points
        .iter()
        .filter(|p| p.theta > 0.25)
        .map(|p| {
            let q = k * (p.theta - 0.25).powi(2);
            ((1.0 - p.value) - q).abs() / q
        })
        .fold(0.0, f64::max);
    let strictly_decreasing = points.windows(2).all(|w| w[1].value < w[0].value);
    Ok(EnvelopeFit {
        points,
        coefficient: k,
        max_relative_residual,
        strictly_decreasing,
    })
}

/// `n + 1` equally spaced points on `[1/4, 2/7]`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == n {
                THETA_MAX
            } else {
                THETA_MIN + k as f64 * (THETA_MAX - THETA_MIN) / n as f64
            }
        })
        .collect()
}

/// The two branches `((θ/2 − η)/(1 + 2η), (1/4 − η/2)/(3/2 + η))` at `θ = 7/22`.
pub fn nu_branches(eta: f64) -> (f64, f64) {
    (
        (THETA_NU / 2.0 - eta) / (1.0 + 2.0 * eta),
        (0.25 - eta / 2.0) / (1.5 + eta),
    )
}

/// `ν(η) = min` of the two branches, for `0 ≤ η < 7/44`.
pub fn nu_of_eta(eta: f64) -> Result<f64> {
    if !(0.0..7.0 / 44.0).contains(&eta) {
        return Err(Error::precondition(format!(
            "nu(eta) needs 0 <= eta < 7/44, got {eta} (nu would not be positive)"
        )));
    }
    let (a, b) = nu_branches(eta);
    Ok(a.min(b))
}
