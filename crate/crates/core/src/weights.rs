//! Weight families on ideals, audits of the sieve conditions, and the
//! Größencharacter, Fourier and Mellin computations for the real product weight.
//!
//! Real fields use `Ψ(𝔫) = Σ_{(k)=𝔫} f(σ₁(k)/√N) f(σ₂(k)/√N)` with
//! `f(x) = (e^{−πx²} − e^{−2πx²})^C`, summed over units as
//! `2 Σ_n f(εⁿ|σ₁|/√N) f(ε^{−n}|σ₂|/√N)`. All products of `f` are formed in
//! log space so that `C = 64` does not underflow.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgInt, FieldSpec};
use crate::ideals::{dk, enumerate_prime_ideals, norm_coefficients, IdealTable, PrimeIdeal};
use crate::quad::integrate;
use crate::special::gamma;

/// Terms below this fraction of the running maximum end a unit sum.
const UNIT_SUM_CUTOFF: f64 = 41.5; // ln(1e18)

/// Width of the Gaussian windows in `F(𝔮)`, in units of `Δ`.
const WINDOW: f64 = 7.0;

/// A weight function `W_N : ℐ → ℝ≥0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `1_{1 ≤ N(𝔫) ≤ N}`
    Characteristic { n: f64 },
    /// `π · exp(−π N(𝔫)/N)` (imaginary fields)
    Gaussian { n: f64 },
    /// `(exp(−πN(𝔫)/N) − exp(−2πN(𝔫)/N))^C / constant` (imaginary fields)
    ImagGaussPow { n: f64, c: u32, constant: f64 },
    /// `Ψ(𝔫) / constant` (real fields); `ln_constant` avoids underflow for large `C`
    RealProduct { n: f64, c: u32, ln_constant: f64, regulator: f64 },
    /// `ω = λ W`, with `W` the imaginary power weight or the real product weight
    Omega { base: Box<WeightSpec>, lambda: f64 },
    /// `ω̃(𝔮) = N/N(𝔮) · (constant · W(𝔮)) · F(𝔮)`
    OmegaTilde { base: Box<WeightSpec>, delta: f64, target: [f64; 2] },
}

fn check_scale(n: f64) -> Result<()> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::precondition(format!("weight scale N must be at least 1, got {n}")));
    }
    Ok(())
}

fn check_c(c: u32) -> Result<()> {
    if !(1..=64).contains(&c) {
        return Err(Error::precondition(format!("C must lie in [1, 64], got {c}")));
    }
    Ok(())
}

fn need_imaginary(field: &FieldSpec) -> Result<()> {
    if !field.is_imaginary() {
        return Err(Error::precondition("this weight is defined for imaginary fields"));
    }
    Ok(())
}

fn need_real(field: &FieldSpec) -> Result<f64> {
    field
        .regulator()
        .ok_or_else(|| Error::precondition("this weight is defined for real fields"))
}

/// Default `C = ⌈100/ε⌉`, capped at 64.
pub fn default_c(epsilon: f64) -> u32 {
    ((100.0 / epsilon).ceil() as u32).clamp(1, 64)
}

impl WeightSpec {
    pub fn characteristic(n: f64) -> Result<Self> {
        check_scale(n)?;
        Ok(WeightSpec::Characteristic { n })
    }

    pub fn gaussian(field: &FieldSpec, n: f64) -> Result<Self> {
        check_scale(n)?;
        need_imaginary(field)?;
        Ok(WeightSpec::Gaussian { n })
    }

    pub fn imag_gauss_pow(field: &FieldSpec, n: f64, c: u32) -> Result<Self> {
        check_scale(n)?;
        check_c(c)?;
        need_imaginary(field)?;
        Ok(WeightSpec::ImagGaussPow {
            n,
            c,
            constant: imag_constant(c),
        })
    }

    /// Power weight with an explicit normalizer.
    pub fn imag_gauss_pow_with_constant(field: &FieldSpec, n: f64, c: u32, constant: f64) -> Result<Self> {
        check_scale(n)?;
        check_c(c)?;
        need_imaginary(field)?;
        if !(constant > 0.0) {
            return Err(Error::precondition("the normalizing constant must be positive"));
        }
        Ok(WeightSpec::ImagGaussPow { n, c, constant })
    }

    pub fn real_product(field: &FieldSpec, n: f64, c: u32) -> Result<Self> {
        check_scale(n)?;
        check_c(c)?;
        let regulator = need_real(field)?;
        Ok(WeightSpec::RealProduct {
            n,
            c,
            ln_constant: real_ln_constant(field, c)?,
            regulator,
        })
    }

    /// `ω = λW` with `λ = δ²·constant/√D` (real) or `δ²·constant` (imaginary),
    /// the mean size of `ω̃` relative to `W`.
    pub fn omega(field: &FieldSpec, n: f64, c: u32, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let base = Self::base_weight(field, n, c)?;
        let lambda = lambda_for(field, &base, delta);
        Ok(WeightSpec::Omega {
            base: Box::new(base),
            lambda,
        })
    }

    /// `ω̃` with target point `(x₁, x₂)`: the two real coordinates of a real
    /// field, or the `ω`-coordinates of `α = x₁ + x₂ω` in an imaginary one.
    ///
    /// The imaginary form is a reconstruction: it reuses the real-field
    /// product of two windows, applied in `ω`-coordinates.
    pub fn omega_tilde(field: &FieldSpec, n: f64, c: u32, delta: f64, target: [f64; 2]) -> Result<Self> {
        check_delta(delta)?;
        if !target.iter().all(|t| t.is_finite()) {
            return Err(Error::precondition("target coordinates must be finite"));
        }
        let base = Self::base_weight(field, n, c)?;
        Ok(WeightSpec::OmegaTilde {
            base: Box::new(base),
            delta,
            target,
        })
    }

    fn base_weight(field: &FieldSpec, n: f64, c: u32) -> Result<Self> {
        if field.is_imaginary() {
            Self::imag_gauss_pow(field, n, c)
        } else {
            Self::real_product(field, n, c)
        }
    }

    /// The scale `N`.
    pub fn scale(&self) -> f64 {
        match self {
            WeightSpec::Characteristic { n }
            | WeightSpec::Gaussian { n }
            | WeightSpec::ImagGaussPow { n, .. }
            | WeightSpec::RealProduct { n, .. } => *n,
            WeightSpec::Omega { base, .. } | WeightSpec::OmegaTilde { base, .. } => base.scale(),
        }
    }

    /// `⌊N⌋` for the characteristic weight, whose sums are exact integers.
    pub fn characteristic_bound(&self) -> Option<u64> {
        match self {
            WeightSpec::Characteristic { n } => Some(n.floor() as u64),
            _ => None,
        }
    }

    /// Whether the value depends on `N(𝔫)` alone.
    pub fn norm_only(&self) -> bool {
        match self {
            WeightSpec::Characteristic { .. } | WeightSpec::Gaussian { .. } | WeightSpec::ImagGaussPow { .. } => true,
            WeightSpec::RealProduct { .. } | WeightSpec::OmegaTilde { .. } => false,
            WeightSpec::Omega { base, .. } => base.norm_only(),
        }
    }

    /// Norm bound beyond which the weight is negligible.
    ///
    /// Smooth weights decay at least like `exp(−πC·N(𝔫)/N)`; the bound is
    /// `N · min(log² N, 1 + 38/(πC))`, which leaves a tail below `e^{−38}` per
    /// unit of mass.
    pub fn norm_budget(&self, _field: &FieldSpec) -> f64 {
        let n = self.scale();
        let smooth = |c: u32| n * (n.ln().powi(2)).min(1.0 + 38.0 / (PI * c as f64)).max(1.0);
        match self {
            WeightSpec::Characteristic { n } => n.floor(),
            WeightSpec::Gaussian { .. } => smooth(1),
            WeightSpec::ImagGaussPow { c, .. } | WeightSpec::RealProduct { c, .. } => smooth(*c),
            WeightSpec::Omega { base, .. } | WeightSpec::OmegaTilde { base, .. } => base.norm_budget(_field),
        }
    }

    /// `W(𝔫)` for `𝔫 = (gen)` of norm `norm`.
    pub fn eval(&self, field: &FieldSpec, gen: AlgInt, norm: u64) -> f64 {
        match self {
            WeightSpec::Characteristic { n } => {
                if norm >= 1 && norm as f64 <= *n {
                    1.0
                } else {
                    0.0
                }
            }
            WeightSpec::Gaussian { n } => PI * (-PI * norm as f64 / n).exp(),
            WeightSpec::ImagGaussPow { n, c, constant } => {
                (ln_gauss_pow(norm as f64 / n, *c)).exp() / constant
            }
            WeightSpec::RealProduct {
                n,
                c,
                ln_constant,
                regulator,
            } => {
                let (s1, s2) = field.sigma(gen);
                (ln_psi(s1.abs(), s2.abs(), *n, *c, *regulator) - ln_constant).exp()
            }
            WeightSpec::Omega { base, lambda } => lambda * base.eval(field, gen, norm),
            WeightSpec::OmegaTilde { base, delta, target } => {
                let n = base.scale();
                let ln_num = base.ln_numerator(field, gen, norm);
                let f = window_sum(field, gen, norm, *delta / n.sqrt(), *target);
                n / norm as f64 * ln_num.exp() * f
            }
        }
    }

    /// `ln(constant · W(𝔫))`: the unnormalized weight in log space.
    fn ln_numerator(&self, field: &FieldSpec, gen: AlgInt, norm: u64) -> f64 {
        match self {
            WeightSpec::ImagGaussPow { n, c, .. } => ln_gauss_pow(norm as f64 / n, *c),
            WeightSpec::RealProduct { n, c, regulator, .. } => {
                let (s1, s2) = field.sigma(gen);
                ln_psi(s1.abs(), s2.abs(), *n, *c, *regulator)
            }
            other => other.eval(field, gen, norm).ln(),
        }
    }

    /// Normalizing constant of the base weight (`π` for the Gaussian weight).
    pub fn constant(&self) -> f64 {
        match self {
            WeightSpec::Characteristic { .. } => 1.0,
            WeightSpec::Gaussian { .. } => PI,
            WeightSpec::ImagGaussPow { constant, .. } => *constant,
            WeightSpec::RealProduct { ln_constant, .. } => ln_constant.exp(),
            WeightSpec::Omega { base, .. } | WeightSpec::OmegaTilde { base, .. } => base.constant(),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::precondition(format!("delta must lie in (0, 1/2], got {delta}")));
    }
    Ok(())
}

fn lambda_for(field: &FieldSpec, base: &WeightSpec, delta: f64) -> f64 {
    let d2c = delta * delta * base.constant();
    if field.is_imaginary() {
        d2c
    } else {
        d2c / (field.discriminant() as f64).sqrt()
    }
}

/// `ln f(x)` with `f(x) = (e^{−πx²} − e^{−2πx²})^C`.
pub fn ln_f(x: f64, c: u32) -> f64 {
    let u = PI * x * x;
    if u == 0.0 {
        return f64::NEG_INFINITY;
    }
    c as f64 * (-u + (-(-u).exp_m1()).ln())
}

/// `ln (e^{−πt} − e^{−2πt})^C`.
fn ln_gauss_pow(t: f64, c: u32) -> f64 {
    let u = PI * t;
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    c as f64 * (-u + (-(-u).exp_m1()).ln())
}

/// `ln Σ_n f(e^{a + nR}) f(e^{b − nR})` for `a = ln s₁`, `b = ln s₂`.
fn ln_unit_sum(a: f64, b: f64, regulator: f64, c: u32) -> f64 {
    if !a.is_finite() || !b.is_finite() {
        return f64::NEG_INFINITY;
    }
    let term = |n: i64| ln_f((a + n as f64 * regulator).exp(), c) + ln_f((b - n as f64 * regulator).exp(), c);
    // the summand peaks where both arguments balance
    let n0 = ((b - a) / (2.0 * regulator)).round() as i64;
    let mut terms = vec![term(n0)];
    let mut max = terms[0];
    for dir in [1i64, -1] {
        let mut n = n0 + dir;
        let mut prev = terms[0];
        loop {
            let t = term(n);
            if t > max {
                max = t;
            }
            terms.push(t);
            if t < max - UNIT_SUM_CUTOFF && t <= prev {
                break;
            }
            prev = t;
            n += dir;
        }
    }
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln Ψ(𝔫)` from `|σ₁(k)|, |σ₂(k)|` of any generator.
pub fn ln_psi(s1: f64, s2: f64, n: f64, c: u32, regulator: f64) -> f64 {
    let root = n.sqrt();
    2f64.ln() + ln_unit_sum((s1 / root).ln(), (s2 / root).ln(), regulator, c)
}

/// `∫₀^∞ 4^C f(u) du`, integrated with its peak at `u² = ln 2/π` scaled to 1.
fn scaled_f_integral(c: u32) -> f64 {
    let cf = c as f64;
    let ln4 = 4f64.ln();
    let g = |u: f64| (ln_f(u, c) + cf * ln4).exp();
    let peak = (2f64.ln() / PI).sqrt();
    let upper = ((cf * ln4 + 60.0) / (PI * cf)).sqrt() + 1.0;
    let l = integrate(g, 0.0, peak, 1e-16, 1e-14);
    let r = integrate(g, peak, upper, 1e-16, 1e-14);
    l.value + r.value
}

fn real_cache() -> &'static Mutex<HashMap<(i64, u32), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, u32), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ln` of the real normalizer `(2/π) Σ_{a,b=C}^{2C} (−1)^{a+b} C(C,2C−a) C(C,2C−b) ∫ (aε^{2y} + bε^{−2y})^{−1} dy`.
///
/// With `∫ (aε^{2y} + bε^{−2y})^{−1} dy = π/(4 log ε √(ab))` the double sum
/// factors into `2 (∫₀^∞ f)² / log ε`, whose integrand is positive; the
/// alternating form loses every digit to cancellation by `C ≈ 30`.
pub fn real_ln_constant(field: &FieldSpec, c: u32) -> Result<f64> {
    check_c(c)?;
    let regulator = need_real(field)?;
    let key = (field.d(), c);
    if let Some(v) = real_cache().lock().expect("constant cache").get(&key) {
        return Ok(*v);
    }
    let ln = 2f64.ln() + 2.0 * (scaled_f_integral(c).ln() - c as f64 * 4f64.ln()) - regulator.ln();
    real_cache().lock().expect("constant cache").insert(key, ln);
    Ok(ln)
}

/// The alternating double sum with each `y`-integral done by quadrature; only
/// usable for small `C`.
pub fn real_constant_direct(field: &FieldSpec, c: u32) -> Result<f64> {
    check_c(c)?;
    let regulator = need_real(field)?;
    let cu = c as u64;
    let mut total = 0.0;
    for a in cu..=2 * cu {
        for b in cu..=2 * cu {
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            let coef = crate::arith::binomial(cu, 2 * cu - a) as f64 * crate::arith::binomial(cu, 2 * cu - b) as f64;
            let (af, bf) = (a as f64, b as f64);
            // symmetric integrand around its peak y* = ln(b/a)/(4 log ε)
            let center = (bf / af).ln() / (4.0 * regulator);
            let span = 40.0 / regulator;
            let integrand = |y: f64| 1.0 / (af * (2.0 * regulator * y).exp() + bf * (-2.0 * regulator * y).exp());
            let i = integrate(integrand, center - span, center + span, 1e-15, 1e-14).value;
            total += sign * coef * i;
        }
    }
    Ok(2.0 / PI * total)
}

fn imag_cache() -> &'static Mutex<HashMap<u32, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `∫₀^∞ (e^{−πu} − e^{−2πu})^C du`, the normalizer that makes the prime sum
/// of the power weight `≈ N/log N`.
pub fn imag_constant(c: u32) -> f64 {
    if let Some(v) = imag_cache().lock().expect("constant cache").get(&c) {
        return *v;
    }
    let cf = c as f64;
    let ln4 = 4f64.ln();
    let g = |u: f64| (ln_gauss_pow(u, c) + cf * ln4).exp();
    let peak = 2f64.ln() / PI;
    let upper = (cf * ln4 + 60.0) / (PI * cf) + 1.0;
    let v = (integrate(g, 0.0, peak, 1e-16, 1e-14).value + integrate(g, peak, upper, 1e-16, 1e-14).value)
        * (-cf * ln4).exp();
    imag_cache().lock().expect("constant cache").insert(c, v);
    v
}

/// `F(𝔮) = Σ_{p∈𝒪} Ω_Δ(x₁ − c₁(p/q)) Ω_Δ(x₂ − c₂(p/q))`, `Ω_Δ(x) = exp(−πx²/Δ²)`,
/// where `c₁, c₂` are the real embeddings (real fields) or `ω`-coordinates.
///
/// `F` does not depend on the generator: `p ↦ up` permutes `𝒪` for every unit `u`.
pub fn window_sum(field: &FieldSpec, q: AlgInt, norm: u64, delta_n: f64, target: [f64; 2]) -> f64 {
    let omega = AlgInt::new(0, 1);
    let qw = field.mul(q, omega);
    let reach = WINDOW * delta_n;
    let mut total = 0.0;
    if field.is_imaginary() {
        // p/q = (A + Bω)/N(q) with p·conj(q) = A + Bω; p ≈ q(x₁ + x₂ω)
        let centre_u = target[0] * q.a as f64 + target[1] * qw.a as f64;
        let centre_v = target[0] * q.b as f64 + target[1] * qw.b as f64;
        let du = reach * (q.a.abs() as f64 + qw.a.abs() as f64) + 1.0;
        let dv = reach * (q.b.abs() as f64 + qw.b.abs() as f64) + 1.0;
        let qc = field.conj(q);
        let nq = norm as f64;
        for u in (centre_u - du).floor() as i64..=(centre_u + du).ceil() as i64 {
            for v in (centre_v - dv).floor() as i64..=(centre_v + dv).ceil() as i64 {
                let z = field.mul(AlgInt::new(u, v), qc);
                let e1 = (target[0] - z.a as f64 / nq) / delta_n;
                let e2 = (target[1] - z.b as f64 / nq) / delta_n;
                total += (-PI * (e1 * e1 + e2 * e2)).exp();
            }
        }
    } else {
        // balance the generator so both windows have comparable width
        let q = field.canonical(q);
        let (s1, s2) = field.sigma(q);
        let w = field.omega_value().re;
        let w2 = field.trace() as f64 - w;
        let t1 = target[0] * s1;
        let t2 = target[1] * s2;
        let v0 = (t1 - t2) / (w - w2);
        let u0 = t1 - v0 * w;
        let (r1, r2) = (reach * s1.abs(), reach * s2.abs());
        let dv = (r1 + r2) / (w - w2).abs() + 1.0;
        let du = r1 + w.abs() * dv + 1.0;
        for v in (v0 - dv).floor() as i64..=(v0 + dv).ceil() as i64 {
            for u in (u0 - du).floor() as i64..=(u0 + du).ceil() as i64 {
                let p1 = u as f64 + v as f64 * w;
                let p2 = u as f64 + v as f64 * w2;
                let e1 = (target[0] - p1 / s1) / delta_n;
                let e2 = (target[1] - p2 / s2) / delta_n;
                total += (-PI * (e1 * e1 + e2 * e2)).exp();
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Größencharacters, Fourier coefficients, Mellin transform

/// `θ(k) = log|σ₁(k)/σ₂(k)| / (2 log ε)`; shifts by 1 under `k ↦ εk`.
pub fn character_angle(field: &FieldSpec, k: AlgInt) -> Result<f64> {
    let regulator = need_real(field)?;
    if k.is_zero() {
        return Err(Error::precondition("the zero ideal has no character value"));
    }
    let (s1, s2) = field.sigma(k);
    Ok((s1.abs().ln() - s2.abs().ln()) / (2.0 * regulator))
}

/// `λ^m(𝔫) = e(m θ(k))` for any generator `k` of `𝔫`.
pub fn hecke_lambda(field: &FieldSpec, m: i64, k: AlgInt) -> Result<Complex64> {
    let theta = character_angle(field, k)?;
    // reduce mθ mod 1 before scaling by 2π
    let x = (m as f64 * theta).rem_euclid(1.0);
    Ok(Complex64::from_polar(1.0, 2.0 * PI * x))
}

/// `G(θ, x) = Σ_n f(ε^{n+θ}√x) f(ε^{−(n+θ)}√x)`.
pub fn g_series(field: &FieldSpec, theta: f64, x: f64, c: u32) -> Result<f64> {
    let regulator = need_real(field)?;
    check_c(c)?;
    if !(x >= 0.0) {
        return Err(Error::precondition("G(theta, x) needs x >= 0"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let half = 0.5 * x.ln();
    Ok(ln_unit_sum(theta * regulator + half, -theta * regulator + half, regulator, c).exp())
}

/// `F_y(x) = f(ε^y √x) f(ε^{−y} √x)`.
fn unfolded(regulator: f64, y: f64, x: f64, c: u32) -> f64 {
    let half = 0.5 * x.ln();
    (ln_f((y * regulator + half).exp(), c) + ln_f((-y * regulator + half).exp(), c)).exp()
}

/// `c_m(x)` from the periodic form `∫₀¹ G(θ,x) e(−mθ) dθ` (trapezoid rule,
/// spectrally accurate for the smooth periodic `G`). `G` is even in `θ`, so
/// `c_m` is real and `c_{−m} = c_m`.
pub fn fourier_cm(field: &FieldSpec, m: i64, x: f64, c: u32) -> Result<f64> {
    const POINTS: usize = 512;
    let mut total = 0.0;
    for j in 0..POINTS {
        let theta = j as f64 / POINTS as f64;
        total += g_series(field, theta, x, c)? * (2.0 * PI * m as f64 * theta).cos();
    }
    Ok(total / POINTS as f64)
}

/// `c_m(x)` from the unfolded form `∫_ℝ f(ε^y√x) f(ε^{−y}√x) e(−my) dy`.
pub fn fourier_cm_unfolded(field: &FieldSpec, m: i64, x: f64, c: u32) -> Result<f64> {
    let regulator = need_real(field)?;
    check_c(c)?;
    if !(x > 0.0) {
        return Ok(0.0);
    }
    // beyond |y| = Y one factor is below e^{−60}
    let big = ((60.0 / (PI * c as f64) + 1.0) / x).ln().max(0.0) / (2.0 * regulator)
        + (0.5 * x.ln()).abs() / regulator
        + 2.0;
    let pieces = (2.0 * big).ceil() as usize * 4;
    let width = 2.0 * big / pieces as f64;
    let mut total = 0.0;
    for i in 0..pieces {
        let a = -big + i as f64 * width;
        total += integrate(
            |y: f64| unfolded(regulator, y, x, c) * (2.0 * PI * m as f64 * y).cos(),
            a,
            a + width,
            1e-17,
            1e-13,
        )
        .value;
    }
    Ok(total)
}

/// `2 Σ_{|m| ≤ m_max} c_m(x) λ^m`, evaluated at `θ(k)` with `x = N(𝔫)/N`.
pub fn psi_from_characters(field: &FieldSpec, k: AlgInt, n: f64, c: u32, m_max: i64) -> Result<f64> {
    let theta = character_angle(field, k)?;
    let x = field.norm(k).unsigned_abs() as f64 / n;
    let mut total = fourier_cm(field, 0, x, c)?;
    for m in 1..=m_max {
        total += 2.0 * fourier_cm(field, m, x, c)? * (2.0 * PI * m as f64 * theta).cos();
    }
    Ok(2.0 * total)
}

/// `φ_y(s) = π^{−s} Γ(s) Σ_{a,b=C}^{2C} (−1)^{a+b} C(C,2C−a) C(C,2C−b) (aε^{2y} + bε^{−2y})^{−s}`,
/// the Mellin transform of `F_y`. The alternating sum limits this to `C ≤ 12`.
pub fn mellin_phi(field: &FieldSpec, y: f64, s: Complex64, c: u32) -> Result<Complex64> {
    let regulator = need_real(field)?;
    if !(1..=12).contains(&c) {
        return Err(Error::precondition("the Mellin closed form is evaluated for 1 <= C <= 12"));
    }
    if !(s.re > 0.0) {
        return Err(Error::precondition("the Mellin transform needs Re(s) > 0"));
    }
    let g = gamma(s).ok_or_else(|| Error::precondition("Gamma has a pole at s"))?;
    let cu = c as u64;
    let (up, down) = ((2.0 * y * regulator).exp(), (-2.0 * y * regulator).exp());
    let mut total = Complex64::new(0.0, 0.0);
    for a in cu..=2 * cu {
        for b in cu..=2 * cu {
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            let coef = crate::arith::binomial(cu, 2 * cu - a) as f64 * crate::arith::binomial(cu, 2 * cu - b) as f64;
            let base = a as f64 * up + b as f64 * down;
            total += sign * coef * (-s * base.ln()).exp();
        }
    }
    Ok((-s * PI.ln()).exp() * g * total)
}

/// `∫₀^∞ x^{s−1} F_y(x) dx` by quadrature in `t = log x`.
pub fn mellin_phi_quadrature(field: &FieldSpec, y: f64, s: Complex64, c: u32) -> Result<Complex64> {
    let regulator = need_real(field)?;
    check_c(c)?;
    let integrand = |t: f64, part: usize| {
        let x = t.exp();
        let v = unfolded(regulator, y, x, c) * (s * t).exp();
        if part == 0 {
            v.re
        } else {
            v.im
        }
    };
    // F_y(x) ≈ (π²x²)^C near 0 and decays like e^{−πCx cosh} at infinity
    let (lo, hi) = (-60.0 / (2.0 * c as f64 + s.re), (80.0f64).ln() + 2.0 * (y * regulator).abs());
    let mut parts = [0.0; 2];
    for (p, out) in parts.iter_mut().enumerate() {
        let pieces = 64;
        let w = (hi - lo) / pieces as f64;
        for i in 0..pieces {
            let a = lo + i as f64 * w;
            *out += integrate(|t| integrand(t, p), a, a + w, 1e-18, 1e-13).value;
        }
    }
    Ok(Complex64::new(parts[0], parts[1]))
}

// ---------------------------------------------------------------------------
// Condition audits

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Keycond,
    Finitecond,
    Tailcond,
    Xcond,
    Newsmallandlarge,
    NeededWbound,
}

impl Condition {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "keycond" => Condition::Keycond,
            "finitecond" => Condition::Finitecond,
            "tailcond" => Condition::Tailcond,
            "xcond" => Condition::Xcond,
            "newsmallandlarge" => Condition::Newsmallandlarge,
            "neededwbound" => Condition::NeededWbound,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub lhs: f64,
    pub model: f64,
    pub ratio: f64,
    /// pass threshold: on `|ratio − 1|` for keycond, on `ratio` otherwise
    pub tolerance: f64,
    pub pass: bool,
    pub parameters: BTreeMap<String, f64>,
}

/// Ideals to sum over: norm coefficients suffice for norm-only weights,
/// other weights need a table of generators.
pub struct Enumeration<'a> {
    pub field: &'a FieldSpec,
    pub table: Option<&'a IdealTable>,
}

impl<'a> Enumeration<'a> {
    /// `Σ W(𝔞𝔯) g(N(𝔞))` over ideals `𝔞` with `N(𝔞) ≤ limit`, `g` a norm filter/multiplier,
    /// optionally weighted by `d_k(𝔞𝔯)` (only for `𝔯 = 𝒪`).
    fn sum<G: Fn(u64) -> f64>(
        &self,
        weight: &WeightSpec,
        r: (AlgInt, u64),
        limit: f64,
        divisor_k: Option<u32>,
        g: G,
    ) -> Result<f64> {
        if divisor_k.is_some() && r.1 != 1 {
            return Err(Error::precondition("divisor-weighted sums are taken with r = O"));
        }
        if weight.norm_only() {
            let x = limit.floor() as u64;
            let coeffs = norm_coefficients(self.field, x, divisor_k.unwrap_or(1))?;
            let mut total = 0.0;
            for (m, &a) in coeffs.iter().enumerate().skip(1) {
                if a == 0 {
                    continue;
                }
                let w = g(m as u64);
                if w != 0.0 {
                    total += a as f64 * w * weight.eval(self.field, AlgInt::ONE, m as u64 * r.1);
                }
            }
            return Ok(total);
        }
        let table = self
            .table
            .ok_or_else(|| Error::precondition("this weight needs an ideal table"))?;
        if limit > table.max_norm() as f64 {
            return Err(Error::budget(
                format!("ideal table reaches norm {}", table.max_norm()),
                limit.ceil() as u64,
            ));
        }
        let mut total = 0.0;
        for &i in table.up_to(limit) {
            let m = table.norm(i);
            let w = g(m);
            if w == 0.0 {
                continue;
            }
            let mult = match divisor_k {
                Some(k) => dk(k, &table.rep(i))? as f64,
                None => 1.0,
            };
            let gen = self.field.mul(table.generator(i), r.0);
            total += mult * w * weight.eval(self.field, gen, m * r.1);
        }
        Ok(total)
    }
}

/// Audit thresholds and parameters; defaults follow the sieve's conventions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditParams {
    /// keycond passes iff `|ratio − 1| ≤ c_audit · log log N / log(N/N(r))`
    pub c_audit: f64,
    pub epsilon: f64,
    pub xi: f64,
    pub a: f64,
    pub eta: f64,
    pub delta: f64,
    /// finitecond passes iff the ratio is at most this
    pub finite_bound: f64,
    /// neededWbound passes iff `max W(𝔫) · x` is at most this
    pub needed_bound: f64,
}

impl Default for AuditParams {
    fn default() -> Self {
        AuditParams {
            c_audit: 3.0,
            epsilon: 0.05,
            xi: 0.5,
            a: 2.0,
            eta: 0.01,
            delta: 0.25,
            finite_bound: 5.0,
            needed_bound: 1.0,
        }
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn check_r(n: f64, r_norm: u64) -> Result<f64> {
    if r_norm as f64 > n / 2.0 {
        return Err(Error::precondition("the condition is stated for N(r) <= N/2"));
    }
    Ok(n / r_norm as f64)
}

/// `Σ_{𝔰 ∈ ℙ} W(𝔯𝔰)` against `(N/N(𝔯)) / log(N/N(𝔯))`, over every prime
/// ideal inside the weight's norm budget.
pub fn audit_keycond(field: &FieldSpec, weight: &WeightSpec, r: (AlgInt, u64), p: &AuditParams) -> Result<ConditionReport> {
    let n = weight.scale();
    let y = check_r(n, r.1)?;
    let limit = weight.norm_budget(field) / r.1 as f64;
    let primes = enumerate_prime_ideals(field, limit)?;
    let mut lhs = 0.0;
    for q in &primes {
        lhs += weight.eval(field, field.mul(q.generator, r.0), q.norm * r.1);
    }
    let model = y / y.ln();
    let ratio = lhs / model;
    let tolerance = p.c_audit * n.ln().ln() / y.ln();
    Ok(ConditionReport {
        condition: Condition::Keycond,
        lhs,
        model,
        ratio,
        tolerance,
        pass: (ratio - 1.0).abs() <= tolerance,
        parameters: params(&[("N", n), ("N(r)", r.1 as f64), ("c_audit", p.c_audit)]),
    })
}

fn finitecond_report(n: f64, r_norm: u64, pn: f64, lhs: f64, p: &AuditParams) -> ConditionReport {
    let model = pn / pn.ln();
    let ratio = lhs / model;
    ConditionReport {
        condition: Condition::Finitecond,
        lhs,
        model,
        ratio,
        tolerance: p.finite_bound,
        pass: ratio <= p.finite_bound,
        parameters: params(&[("N", n), ("N(r)", r_norm as f64), ("N(p)", pn), ("epsilon", p.epsilon)]),
    }
}

/// `Σ_{𝔰 ≺ 𝔭} W(𝔯𝔰)` against `N(𝔭)/log N(𝔭)` for `N(𝔭) ≥ N^ε`.
pub fn audit_finitecond(
    field: &FieldSpec,
    primes: &[PrimeIdeal],
    weight: &WeightSpec,
    r: (AlgInt, u64),
    p_rank: usize,
    params_in: &AuditParams,
) -> Result<ConditionReport> {
    let n = weight.scale();
    check_r(n, r.1)?;
    let pk = primes
        .get(p_rank)
        .ok_or_else(|| Error::precondition("prime rank outside the list"))?;
    if (pk.norm as f64) < n.powf(params_in.epsilon) {
        return Err(Error::precondition("finitecond is stated for N(p) >= N^epsilon"));
    }
    let lhs = primes[..p_rank]
        .iter()
        .fold(0.0, |acc, q| acc + weight.eval(field, field.mul(q.generator, r.0), q.norm * r.1));
    Ok(finitecond_report(n, r.1, pk.norm as f64, lhs, params_in))
}

/// finitecond at the prime of the list where the ratio is largest, among
/// those with `N(𝔭) ≥ max(N^ε, 2)`.
pub fn audit_finitecond_worst(
    field: &FieldSpec,
    primes: &[PrimeIdeal],
    weight: &WeightSpec,
    r: (AlgInt, u64),
    params_in: &AuditParams,
) -> Result<ConditionReport> {
    let n = weight.scale();
    check_r(n, r.1)?;
    let floor = n.powf(params_in.epsilon);
    let mut lhs = 0.0;
    let mut worst: Option<ConditionReport> = None;
    for q in primes {
        let pn = q.norm as f64;
        if pn >= floor && pn >= 2.0 {
            let rep = finitecond_report(n, r.1, pn, lhs, params_in);
            if worst.as_ref().map_or(true, |w| rep.ratio > w.ratio) {
                worst = Some(rep);
            }
        }
        lhs += weight.eval(field, field.mul(q.generator, r.0), q.norm * r.1);
    }
    worst.ok_or_else(|| Error::precondition("no prime of norm at least N^epsilon in the list"))
}

/// `Σ_{N(𝔞𝔯) > Ñ} W(𝔞𝔯)`, `Ñ = N log^ξ N`, against `(N/N(𝔯)) / log²(N/N(𝔯))`.
///
/// The Gaussian weight is held to the stronger `(N/N(𝔯)) exp(−(log N)^{ξ/2})`.
pub fn audit_tailcond(
    en: &Enumeration,
    weight: &WeightSpec,
    r: (AlgInt, u64),
    p: &AuditParams,
) -> Result<ConditionReport> {
    let n = weight.scale();
    let y = check_r(n, r.1)?;
    let n_tilde = n * n.ln().powf(p.xi);
    let limit = weight.norm_budget(en.field) / r.1 as f64;
    let cut = n_tilde / r.1 as f64;
    let lhs = en.sum(weight, r, limit, None, |m| if m as f64 > cut { 1.0 } else { 0.0 })?;
    let model = match weight {
        WeightSpec::Gaussian { .. } => y * (-(n.ln()).powf(p.xi / 2.0)).exp(),
        _ => y / y.ln().powi(2),
    };
    let ratio = lhs / model;
    Ok(ConditionReport {
        condition: Condition::Tailcond,
        lhs,
        model,
        ratio,
        tolerance: 1.0,
        pass: ratio <= 1.0,
        parameters: params(&[("N", n), ("N(r)", r.1 as f64), ("xi", p.xi), ("N_tilde", n_tilde)]),
    })
}

/// `x` with `N = x^{1−ε}`.
pub fn x_of(n: f64, epsilon: f64) -> f64 {
    n.powf(1.0 / (1.0 - epsilon))
}

/// `Σ d₅(𝔫) w(𝔫) ≤ x^A`.
pub fn audit_xcond(en: &Enumeration, w: &WeightSpec, p: &AuditParams) -> Result<ConditionReport> {
    let n = w.scale();
    let x = x_of(n, p.epsilon);
    let limit = w.norm_budget(en.field);
    let lhs = en.sum(w, (AlgInt::ONE, 1), limit, Some(5), |_| 1.0)?;
    let model = x.powf(p.a);
    let ratio = lhs / model;
    Ok(ConditionReport {
        condition: Condition::Xcond,
        lhs,
        model,
        ratio,
        tolerance: 1.0,
        pass: ratio <= 1.0,
        parameters: params(&[("N", n), ("x", x), ("A", p.a), ("epsilon", p.epsilon)]),
    })
}

/// `Σ_{N(𝔫) ∉ (x^{1−ι}, x)} d₅(𝔫) w(𝔫) ≤ λ N^{1−η}` with `ι = 2ε`.
pub fn audit_newsmallandlarge(
    en: &Enumeration,
    w: &WeightSpec,
    lambda: f64,
    p: &AuditParams,
) -> Result<ConditionReport> {
    let n = w.scale();
    let x = x_of(n, p.epsilon);
    let iota = 2.0 * p.epsilon;
    let lo = x.powf(1.0 - iota);
    let limit = w.norm_budget(en.field);
    let lhs = en.sum(w, (AlgInt::ONE, 1), limit, Some(5), |m| {
        let m = m as f64;
        if m > lo && m < x {
            0.0
        } else {
            1.0
        }
    })?;
    let model = lambda * n.powf(1.0 - p.eta);
    let ratio = lhs / model;
    Ok(ConditionReport {
        condition: Condition::Newsmallandlarge,
        lhs,
        model,
        ratio,
        tolerance: 1.0,
        pass: ratio <= 1.0,
        parameters: params(&[
            ("N", n),
            ("x", x),
            ("iota", iota),
            ("eta", p.eta),
            ("lambda", lambda),
        ]),
    })
}

/// Largest `W(𝔫) · x` over the ideals of the table with `N(𝔫) < x^{1−2ε}`.
pub fn audit_needed_wbound(
    table: &IdealTable,
    w: &WeightSpec,
    samples: usize,
    p: &AuditParams,
) -> Result<ConditionReport> {
    let n = w.scale();
    let x = x_of(n, p.epsilon);
    let bound = x.powf(1.0 - 2.0 * p.epsilon);
    let ideals = table.up_to(bound.min(table.max_norm() as f64));
    if ideals.is_empty() {
        return Err(Error::precondition("no ideals below x^(1-2 epsilon)"));
    }
    // evenly spaced sample of the range, always including the largest norm
    let step = (ideals.len() / samples.max(1)).max(1);
    let field = table.field();
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for (j, &i) in ideals.iter().enumerate() {
        if j % step != 0 && j + 1 != ideals.len() {
            continue;
        }
        worst = worst.max(w.eval(field, table.generator(i), table.norm(i)) * x);
        count += 1;
    }
    Ok(ConditionReport {
        condition: Condition::NeededWbound,
        lhs: worst / x,
        model: 1.0 / x,
        ratio: worst,
        tolerance: p.needed_bound,
        pass: worst <= p.needed_bound,
        parameters: params(&[
            ("N", n),
            ("x", x),
            ("epsilon", p.epsilon),
            ("samples", count as f64),
            ("norm_limit", bound),
        ]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn plug_in_values() {
        let k = FieldSpec::new(-1).unwrap();
        let chi = WeightSpec::characteristic(100.0).unwrap();
        assert_eq!(chi.eval(&k, AlgInt::new(7, 1), 50), 1.0);
        assert_eq!(chi.eval(&k, AlgInt::new(10, 1), 101), 0.0);
        let w = WeightSpec::imag_gauss_pow_with_constant(&k, 100.0, 1, 1.0).unwrap();
        let expected = (-PI).exp() - (-2.0 * PI).exp();
        assert!((w.eval(&k, AlgInt::new(10, 0), 100) - expected).abs() < 1e-15);
        assert!((expected - 0.04134).abs() < 1e-5);
    }

    /// Closed form `(1/π) Σ_j (−1)^j C(C,j)/(C+j)` for small `C`.
    #[test]
    fn imaginary_constant_matches_binomial_form() {
        for c in 1..=6u32 {
            let closed: f64 = (0..=c)
                .map(|j| {
                    let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                    s * crate::arith::binomial(c as u64, j as u64) as f64 / (c + j) as f64
                })
                .sum::<f64>()
                / PI;
            assert!((imag_constant(c) - closed).abs() < 1e-13 * closed.abs().max(1e-3));
        }
    }

    #[test]
    fn real_constant_matches_alternating_form() {
        let k = q3();
        // the alternating form loses about a digit per unit of C
        for (c, tol) in [(1, 1e-12), (2, 1e-11), (3, 1e-10), (4, 1e-8)] {
            let positive = real_ln_constant(&k, c).unwrap().exp();
            let direct = real_constant_direct(&k, c).unwrap();
            assert!((positive - direct).abs() < tol * positive, "C = {c}: {positive} vs {direct}");
        }
        // large C stays finite and positive
        let big = real_ln_constant(&k, 64).unwrap();
        assert!(big.is_finite() && big < -150.0);
    }

    #[test]
    fn real_product_is_unit_invariant() {
        let k = q3();
        let w = WeightSpec::real_product(&k, 10.0, 2).unwrap();
        let g = AlgInt::new(1, 1);
        let a = w.eval(&k, g, 2);
        for e in [-3, -1, 1, 2, 5] {
            let b = w.eval(&k, k.mul_unit_power(g, e), 2);
            assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
        }
        let neg = w.eval(&k, k.neg(g), 2);
        assert!((a - neg).abs() <= 1e-12 * a);
    }

    /// Direct sum over generators `±εⁿk` with `|n| ≤ 60`.
    #[test]
    fn psi_matches_generator_sum() {
        let k = q3();
        let n: f64 = 50.0;
        let c = 2;
        let g = AlgInt::new(5, 2);
        let reg = k.regulator().unwrap();
        let direct: f64 = (-60..=60)
            .map(|e| {
                let (s1, s2) = k.sigma(g);
                let f = |x: f64| ((-PI * x * x).exp() - (-2.0 * PI * x * x).exp()).powi(c as i32);
                let a = s1.abs() * (e as f64 * reg).exp() / n.sqrt();
                let b = s2.abs() * (-(e as f64) * reg).exp() / n.sqrt();
                2.0 * f(a) * f(b)
            })
            .sum();
        let (s1, s2) = k.sigma(g);
        let psi = ln_psi(s1.abs(), s2.abs(), n, c, reg).exp();
        assert!((psi - direct).abs() < 1e-14 + 1e-12 * direct);
    }

    #[test]
    fn g_series_is_periodic_and_even() {
        let k = q3();
        for i in 0..20 {
            let theta = -2.0 + i as f64 * 0.213;
            let a = g_series(&k, theta, 0.7, 2).unwrap();
            let b = g_series(&k, theta + 1.0, 0.7, 2).unwrap();
            let c = g_series(&k, -theta, 0.7, 2).unwrap();
            assert!((a - b).abs() <= 1e-14);
            assert!((a - c).abs() <= 1e-14);
        }
        assert_eq!(g_series(&k, 0.3, 0.0, 2).unwrap(), 0.0);
    }

    /// Oracle: 10⁴-term symmetric partial sum.
    #[test]
    fn g_series_matches_long_partial_sum() {
        let k = q3();
        let reg = k.regulator().unwrap();
        let f = |x: f64| ((-PI * x * x).exp() - (-2.0 * PI * x * x).exp()).powi(2);
        let mut direct = 0.0;
        for n in -5000i64..5000 {
            let e = (n as f64 + 0.25) * reg;
            if e.abs() > 700.0 {
                continue;
            }
            direct += f(e.exp()) * f((-e).exp());
        }
        let g = g_series(&k, 0.25, 1.0, 2).unwrap();
        assert!((g - direct).abs() < 1e-15 + 1e-13 * direct);
    }

    #[test]
    fn fourier_forms_agree() {
        let k = q3();
        for m in [0, 1, 3, 7] {
            let a = fourier_cm(&k, m, 1.0, 2).unwrap();
            let b = fourier_cm_unfolded(&k, m, 1.0, 2).unwrap();
            assert!((a - b).abs() < 1e-8, "m = {m}: {a} vs {b}");
        }
        assert!(fourier_cm(&k, 40, 1.0, 2).unwrap().abs() < 1e-8);
    }

    #[test]
    fn character_is_unit_invariant() {
        let k = q3();
        let g = AlgInt::new(1, 1);
        assert_eq!(hecke_lambda(&k, 0, g).unwrap(), Complex64::new(1.0, 0.0));
        for m in [1, 2, 5] {
            let a = hecke_lambda(&k, m, g).unwrap();
            let b = hecke_lambda(&k, m, k.mul_unit_power(g, 3)).unwrap();
            assert!((a - b).norm() < 1e-12);
            assert!((a.norm() - 1.0).abs() < 1e-12);
        }
        assert!(hecke_lambda(&k, 1, AlgInt::ZERO).is_err());
    }

    #[test]
    fn mellin_plug_in() {
        let k = q3();
        let v = mellin_phi(&k, 0.0, Complex64::new(1.0, 0.0), 1).unwrap();
        assert!((v.re - 1.0 / (12.0 * PI)).abs() < 1e-15);
        let s = Complex64::new(1.5, 2.0);
        let a = mellin_phi(&k, 0.3, s, 2).unwrap();
        let b = mellin_phi(&k, -0.3, s, 2).unwrap();
        assert!((a - b).norm() <= 1e-15 * a.norm().max(1e-300) * 10.0);
        let q = mellin_phi_quadrature(&k, 0.3, s, 2).unwrap();
        assert!((a - q).norm() < 1e-8, "{a} vs {q}");
        assert!(mellin_phi(&k, 0.0, Complex64::new(-1.0, 0.0), 1).is_err());
    }

    #[test]
    fn f_is_bounded_by_min_one_and_power() {
        for c in [1u32, 2, 5] {
            for i in 1..2000 {
                let x = i as f64 * 0.002;
                let f = ln_f(x, c).exp();
                assert!(f <= 1.0f64.min((PI * x * x).powi(c as i32)) + 1e-300);
                assert!(f <= 1.0f64.min(x.powi(2 * c as i32)) * PI.powi(c as i32));
            }
        }
    }

    /// Mean of `F(𝔮)` over the target is `N(𝔮)Δ²` (imaginary) or `N(𝔮)Δ²/√D` (real).
    #[test]
    fn window_sum_has_the_expected_mean() {
        let k = FieldSpec::new(-1).unwrap();
        let q = AlgInt::new(3, 2);
        let dn = 0.3;
        let mut mean = 0.0;
        let grid = 20;
        // unit shifts of the target are periods of F
        for i in 0..grid {
            for j in 0..grid {
                let t = [i as f64 / grid as f64, j as f64 / grid as f64];
                mean += window_sum(&k, q, 13, dn, t);
            }
        }
        mean /= (grid * grid) as f64;
        assert!((mean - 13.0 * dn * dn).abs() < 1e-9 * mean);

        let r = q3();
        let q = AlgInt::new(7, 2);
        let norm = r.norm(q).unsigned_abs() as u64;
        let w1 = r.omega_value().re;
        let w2 = r.trace() as f64 - w1;
        let dn = 0.2;
        let mut mean = 0.0;
        let samples = 24;
        // (1, 1) and (σ₁(ω), σ₂(ω)) span the period lattice
        for i in 0..samples {
            for j in 0..samples {
                let (a, b) = (i as f64 / samples as f64, j as f64 / samples as f64);
                mean += window_sum(&r, q, norm, dn, [a + b * w1, a + b * w2]);
            }
        }
        mean /= (samples * samples) as f64;
        let expected = norm as f64 * dn * dn / 12f64.sqrt();
        assert!((mean - expected).abs() < 1e-6 * expected, "{mean} vs {expected}");
    }
}
