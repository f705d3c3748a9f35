//! Diophantine approximation by prime elements.
//!
//! Imaginary fields: records of `‖pα‖_ω` over prime elements `p`, where
//! `‖ϱ‖_ω` is the larger distance to `ℤ` of the two `ω`-coordinates of `ϱ`.
//! Real fields: Dirichlet witnesses `|x_i − σ_i(u+v√d)/σ_i(f+g√d)| ≤ 1/|N(f+g√d)|`,
//! a gcd-growth classifier for η-good pairs, and records over prime elements.
//!
//! Scans run in double precision; every reported verdict is recomputed with
//! decimal arithmetic (60 significant digits).

use std::fmt;
use std::str::FromStr;

use bigdecimal::BigDecimal;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgInt, FieldSpec, Sigma};
use crate::ideals::{prime_ideals_up_to, DEFAULT_IDEAL_CAP};
use crate::precision::{self, dist_to_int, le_power, nearest_int, to_f64};

pub const NMAX_GUARD: u64 = 10_000_000_000;
pub const WMAX_GUARD: u64 = 10_000_000;

/// Relative slack on double-precision screening, about a thousand times its
/// rounding error; survivors are re-verified in decimal.
const SCAN_SLACK: f64 = 1.0 + 1e-9;

/// Largest denominator tried when looking for a nearby field element.
const FIELD_POINT_DENOMINATORS: i64 = 1000;

/// A non-negative rational exponent such as `7/44`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    pub const SEVEN_44: Exponent = Exponent { num: 7, den: 44 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::precondition("exponent denominator must be positive"));
        }
        let g = num.gcd(&den).max(1);
        Ok(Exponent {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `a/b` or a decimal with at most four places.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::precondition(format!("cannot read exponent {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            return Exponent::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        let x: f64 = s.trim().parse().map_err(|_| bad())?;
        if !(0.0..=10.0).contains(&x) {
            return Err(bad());
        }
        Exponent::new((x * 10_000.0).round() as u32, 10_000)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A complex number held in decimal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtComplex {
    pub re: BigDecimal,
    pub im: BigDecimal,
}

impl ExtComplex {
    pub fn parse(re: &str, im: &str) -> Result<Self> {
        let read = |s: &str| {
            precision::parse(s).ok_or_else(|| Error::precondition(format!("cannot read number {s:?}")))
        };
        Ok(ExtComplex {
            re: read(re)?,
            im: read(im)?,
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// `ω`-coordinates `(c₁, c₂)` of `z = c₁ + c₂ω`.
pub fn omega_coords(field: &FieldSpec, z: Complex64) -> (f64, f64) {
    let w = field.omega_value();
    let c2 = z.im / w.im;
    (z.re - c2 * w.re, c2)
}

/// `‖z‖_ω = max(‖c₁‖, ‖c₂‖)` for an imaginary field.
pub fn dist_omega(field: &FieldSpec, z: Complex64) -> Result<f64> {
    if !field.is_imaginary() {
        return Err(Error::precondition("the omega distance is defined for imaginary fields"));
    }
    let (c1, c2) = omega_coords(field, z);
    Ok(crate::arith::dist_to_int(c1).max(crate::arith::dist_to_int(c2)))
}

fn ext_omega_coords(field: &FieldSpec, re: &BigDecimal, im: &BigDecimal) -> (BigDecimal, BigDecimal) {
    let half_root = precision::sqrt_int(field.discriminant().abs()) / BigDecimal::from(2);
    let c2 = precision::trim(im / half_root);
    let c1 = precision::trim(re - &c2 * BigDecimal::from(field.trace()) / BigDecimal::from(2));
    (c1, c2)
}

/// `pα` in decimal.
fn ext_product(field: &FieldSpec, p: AlgInt, alpha: &ExtComplex) -> (BigDecimal, BigDecimal) {
    let e = field.embed_ext(p, Sigma::One);
    (
        precision::trim(&e.re * &alpha.re - &e.im * &alpha.im),
        precision::trim(&e.re * &alpha.im + &e.im * &alpha.re),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxRecord {
    /// prime element, canonical associate
    pub p: AlgInt,
    pub norm: u64,
    /// `‖pα‖_ω`
    pub dist: f64,
    /// `−log(dist) / log(norm)`
    pub nu_p: f64,
    /// lattice point nearest to `pα` in `ω`-coordinates
    pub nearest: AlgInt,
    /// verdict `dist ≤ norm^{−ν}` recomputed in decimal
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordSearch {
    pub nmax: u64,
    pub nu_target: Exponent,
    pub scanned: usize,
    pub records: Vec<ApproxRecord>,
    /// records that raise the running maximum of `nu_p` over all scanned primes
    pub running_max: Vec<ApproxRecord>,
    pub warnings: Vec<String>,
}

/// Small-height field elements `(a + bω)/c` within `1e−25` of `α`.
fn imaginary_field_point_warning(field: &FieldSpec, alpha: &ExtComplex) -> Option<String> {
    let (c1, c2) = ext_omega_coords(field, &alpha.re, &alpha.im);
    let tiny = BigDecimal::from_str("1e-25").expect("literal");
    for c in 1..=FIELD_POINT_DENOMINATORS {
        let cb = BigDecimal::from(c);
        if dist_to_int(&(&c1 * &cb)) < &tiny * &cb && dist_to_int(&(&c2 * &cb)) < &tiny * &cb {
            return Some(format!(
                "alpha lies within 1e-25 of a field element with denominator {c}; approximation is trivially easy"
            ));
        }
    }
    None
}

/// Scans canonical prime elements with `N(p) ≤ nmax` and keeps those with
/// `‖pα‖_ω ≤ N(p)^{−ν}`. Split primes contribute both conjugate ideals.
pub fn record_search(field: &FieldSpec, alpha: &ExtComplex, nmax: u64, nu_target: Exponent) -> Result<RecordSearch> {
    if !field.is_imaginary() {
        return Err(Error::precondition("record search over omega distances needs an imaginary field"));
    }
    if nmax > NMAX_GUARD {
        return Err(Error::budget("record search norm bound above the 1e10 guard", nmax));
    }
    let primes = prime_ideals_up_to(field, nmax, DEFAULT_IDEAL_CAP)?;
    let mut warnings: Vec<String> = imaginary_field_point_warning(field, alpha).into_iter().collect();
    let a = alpha.to_complex();
    let nu = nu_target.value();
    let scan: Vec<(f64, bool)> = primes
        .par_iter()
        .map(|q| {
            let z = field.complex(q.generator) * a;
            let d = dist_omega(field, z).expect("imaginary field");
            let n = q.norm as f64;
            (d, d <= SCAN_SLACK * n.powf(-nu))
        })
        .collect();
    let verified: Vec<Option<ApproxRecord>> = primes
        .par_iter()
        .zip(scan.par_iter())
        .map(|(q, &(_, candidate))| {
            if !candidate {
                return None;
            }
            let rec = exact_record(field, q.generator, q.norm, alpha, nu_target);
            rec.verified.then_some(rec)
        })
        .collect();
    let records: Vec<ApproxRecord> = verified.into_iter().flatten().collect();
    if records.iter().any(|r| r.dist == 0.0) {
        warnings.push("a prime element maps alpha exactly onto the lattice; alpha is a field element".into());
    }
    // running maximum over every scanned prime, not only the records
    let mut running_max = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (q, &(d, _)) in primes.iter().zip(&scan) {
        let nu_p = if d > 0.0 { -d.ln() / (q.norm as f64).ln() } else { f64::INFINITY };
        if nu_p > best {
            best = nu_p;
            running_max.push(exact_record(field, q.generator, q.norm, alpha, nu_target));
        }
    }
    Ok(RecordSearch {
        nmax,
        nu_target,
        scanned: primes.len(),
        records,
        running_max,
        warnings,
    })
}

/// Decimal recomputation of `‖pα‖_ω` and of the verdict `dist ≤ N(p)^{−ν}`.
pub fn exact_record(field: &FieldSpec, p: AlgInt, norm: u64, alpha: &ExtComplex, nu: Exponent) -> ApproxRecord {
    let (re, im) = ext_product(field, p, alpha);
    let (c1, c2) = ext_omega_coords(field, &re, &im);
    let (d1, d2) = (dist_to_int(&c1), dist_to_int(&c2));
    let dist = if d1 >= d2 { d1 } else { d2 };
    let verified = le_power(&dist, norm, nu.num, nu.den);
    let df = to_f64(&dist);
    ApproxRecord {
        p,
        norm,
        dist: df,
        nu_p: if dist.is_zero() {
            f64::INFINITY
        } else {
            -precision::ln(&dist) / (norm as f64).ln()
        },
        nearest: AlgInt::new(nearest_int(&c1), nearest_int(&c2)),
        verified,
    }
}

/// `c_ω = max(|1 + ω|, |1 − ω|)`: `|c₁ + c₂ω| ≤ c_ω max(|c₁|, |c₂|)`.
pub fn distortion_constant(field: &FieldSpec) -> f64 {
    let w = field.omega_value();
    (Complex64::new(1.0, 0.0) + w).norm().max((Complex64::new(1.0, 0.0) - w).norm())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalReport {
    pub p: AlgInt,
    pub norm: u64,
    /// `|α − a/p|`
    pub lhs: f64,
    /// `c_ω · dist / √N(p)`
    pub bound: f64,
    pub distortion: f64,
    pub holds: bool,
    /// `lhs ≤ N(p)^{−1/2−ν}` for the search target `ν`
    pub target_holds: bool,
}

/// `|α − a/p| = |pα − a|/|p| ≤ c_ω ‖pα‖_ω / √N(p)`, checked in decimal.
pub fn rational_check(field: &FieldSpec, rec: &ApproxRecord, alpha: &ExtComplex, nu: Exponent) -> RationalReport {
    let (re, im) = ext_product(field, rec.p, alpha);
    let a = field.embed_ext(rec.nearest, Sigma::One);
    let (dr, di) = (precision::trim(re - a.re), precision::trim(im - a.im));
    let abs_rho = precision::trim(&dr * &dr + &di * &di).sqrt().unwrap_or_default();
    let norm_root = precision::sqrt_int(rec.norm as i64);
    let lhs = precision::trim(abs_rho / &norm_root);
    let lhs_f = to_f64(&lhs);
    let distortion = distortion_constant(field);
    let bound = distortion * rec.dist / (rec.norm as f64).sqrt();
    // lhs ≤ N^{−1/2 − num/den}  ⟺  lhs^{2den} · N^{den + 2num} ≤ 1
    let target_holds = le_power(&lhs, rec.norm, nu.den + 2 * nu.num, 2 * nu.den);
    RationalReport {
        p: rec.p,
        norm: rec.norm,
        lhs: lhs_f,
        bound,
        distortion,
        holds: lhs_f <= bound * (1.0 + 1e-12),
        target_holds,
    }
}

// ---------------------------------------------------------------------------
// Real fields

/// A target pair `(x₁, x₂)` held in decimal.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtPair {
    pub x1: BigDecimal,
    pub x2: BigDecimal,
}

impl ExtPair {
    pub fn parse(x1: &str, x2: &str) -> Result<Self> {
        let read = |s: &str| {
            precision::parse(s).ok_or_else(|| Error::precondition(format!("cannot read number {s:?}")))
        };
        Ok(ExtPair {
            x1: read(x1)?,
            x2: read(x2)?,
        })
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x1), to_f64(&self.x2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub u: i64,
    pub v: i64,
    pub f: i64,
    pub g: i64,
    /// `|N(f + g√d)|`
    pub w: u64,
    pub gcd: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub wmax: u64,
    pub witnesses: Vec<Witness>,
    pub warnings: Vec<String>,
}

fn need_real_sqrt_d(field: &FieldSpec) -> Result<()> {
    if field.is_imaginary() {
        return Err(Error::precondition("this search needs a real field"));
    }
    if field.trace() != 0 {
        return Err(Error::UnsupportedField {
            d: field.d(),
            reason: "coordinates f + g*sqrt(d) need d = 2, 3 mod 4".into(),
        });
    }
    Ok(())
}

fn real_field_point_warning(field: &FieldSpec, x: &ExtPair) -> Option<String> {
    let two = BigDecimal::from(2);
    let root = precision::sqrt_int(field.d());
    let s = precision::trim((&x.x1 + &x.x2) / &two);
    let t = precision::trim((&x.x1 - &x.x2) / (&two * &root));
    let tiny = BigDecimal::from_str("1e-25").expect("literal");
    for c in 1..=FIELD_POINT_DENOMINATORS {
        let cb = BigDecimal::from(c);
        if dist_to_int(&(&s * &cb)) < &tiny * &cb && dist_to_int(&(&t * &cb)) < &tiny * &cb {
            return Some(format!(
                "(x1, x2) lies within 1e-25 of the embedding of a field element with denominator {c}"
            ));
        }
    }
    None
}

/// `|x_i − σ_i(a)/σ_i(q)|` for `i = 1, 2` in double precision.
fn real_errors(field: &FieldSpec, x: (f64, f64), a: AlgInt, q: AlgInt) -> (f64, f64) {
    let (a1, a2) = field.sigma(a);
    let (q1, q2) = field.sigma(q);
    ((x.0 - a1 / q1).abs(), (x.1 - a2 / q2).abs())
}

/// Decimal `|x_i − σ_i(a)/σ_i(q)|`.
fn real_errors_ext(field: &FieldSpec, x: &ExtPair, a: AlgInt, q: AlgInt) -> (BigDecimal, BigDecimal) {
    let a1 = field.embed_ext(a, Sigma::One).re;
    let a2 = field.embed_ext(a, Sigma::Two).re;
    let q1 = field.embed_ext(q, Sigma::One).re;
    let q2 = field.embed_ext(q, Sigma::Two).re;
    (
        precision::trim(&x.x1 - a1 / q1).abs(),
        precision::trim(&x.x2 - a2 / q2).abs(),
    )
}

/// Lattice points near `σ⁻¹(x₁σ₁(q), x₂σ₂(q))`: the rounded point and its neighbours.
fn nearby_numerators(field: &FieldSpec, x: (f64, f64), q: AlgInt) -> impl Iterator<Item = AlgInt> {
    let (q1, q2) = field.sigma(q);
    let root = (field.d() as f64).sqrt();
    let (t1, t2) = (x.0 * q1, x.1 * q2);
    let u0 = ((t1 + t2) / 2.0).round() as i64;
    let v0 = ((t1 - t2) / (2.0 * root)).round() as i64;
    (-1..=1).flat_map(move |du| (-1..=1).map(move |dv| AlgInt::new(u0 + du, v0 + dv)))
}

/// Canonical `f + g√d` with `1 ≤ |N| ≤ wmax`, in increasing `(W, f, g)` order.
fn canonical_denominators(field: &FieldSpec, wmax: u64) -> Vec<(u64, AlgInt)> {
    let d = field.d();
    let eps = field.fundamental_unit().expect("real field");
    let (e1, _) = field.sigma(eps);
    let reach = e1 * (wmax as f64).sqrt();
    let g_max = (reach / (d as f64).sqrt()).ceil() as i64 + 1;
    let mut out: Vec<(u64, AlgInt)> = (0..=g_max)
        .into_par_iter()
        .flat_map_iter(|g| {
            let dg2 = d as i128 * (g as i128) * (g as i128);
            // |f² − dg²| ≤ W  ⟺  f² ∈ [dg² − W, dg² + W]
            let lo_sq = (dg2 - wmax as i128).max(0);
            let hi_sq = dg2 + wmax as i128;
            let lo = crate::arith::isqrt(lo_sq as u128) as i64;
            let hi = crate::arith::isqrt(hi_sq as u128) as i64;
            let mut found = Vec::new();
            for f in lo.saturating_sub(1)..=hi + 1 {
                for (ff, gg) in [(f, g), (-f, g), (f, -g), (-f, -g)] {
                    let x = AlgInt::new(ff, gg);
                    if x.is_zero() {
                        continue;
                    }
                    let n = field.norm(x).unsigned_abs() as u64;
                    if n == 0 || n > wmax {
                        continue;
                    }
                    if field.canonical(x) == x {
                        found.push((n, x));
                    }
                }
            }
            found
        })
        .collect();
    out.sort_by_key(|&(n, x)| (n, x.a, x.b));
    out.dedup();
    out
}

/// Pairs `(u + v√d, f + g√d)`, coprime, with both errors at most `1/W`.
pub fn dirichlet_witnesses(field: &FieldSpec, x: &ExtPair, wmax: u64) -> Result<WitnessSearch> {
    need_real_sqrt_d(field)?;
    if wmax > WMAX_GUARD {
        return Err(Error::budget("witness search above the 1e7 guard", wmax));
    }
    let mut warnings: Vec<String> = real_field_point_warning(field, x).into_iter().collect();
    let xf = x.to_f64();
    let dens = canonical_denominators(field, wmax);
    let found: Vec<Option<Witness>> = dens
        .par_iter()
        .map(|&(w, q)| {
            let limit = SCAN_SLACK / w as f64;
            for a in nearby_numerators(field, xf, q) {
                let (e1, e2) = real_errors(field, xf, a, q);
                if e1 > limit || e2 > limit {
                    continue;
                }
                let (x1, x2) = real_errors_ext(field, x, a, q);
                let bound = precision::trim(BigDecimal::from(1) / BigDecimal::from(w));
                if x1 <= bound && x2 <= bound && field.coprime(a, q) {
                    return Some(Witness {
                        u: a.a,
                        v: a.b,
                        f: q.a,
                        g: q.b,
                        w,
                        gcd: q.a.unsigned_abs().gcd(&q.b.unsigned_abs()),
                    });
                }
            }
            None
        })
        .collect();
    let witnesses: Vec<Witness> = found.into_iter().flatten().collect();
    if witnesses.iter().any(|wt| {
        let (a, b) = real_errors_ext(field, x, AlgInt::new(wt.u, wt.v), AlgInt::new(wt.f, wt.g));
        a.is_zero() && b.is_zero()
    }) {
        warnings.push("a witness hits (x1, x2) exactly; the pair is a field point".into());
    }
    Ok(WitnessSearch {
        wmax,
        witnesses,
        warnings,
    })
}

/// Decimal re-check of a witness against `1/W`.
pub fn verify_witness(field: &FieldSpec, x: &ExtPair, wt: &Witness) -> bool {
    let (a, q) = (AlgInt::new(wt.u, wt.v), AlgInt::new(wt.f, wt.g));
    if field.norm(q).unsigned_abs() as u64 != wt.w {
        return false;
    }
    let (e1, e2) = real_errors_ext(field, x, a, q);
    let bound = precision::trim(BigDecimal::from(1) / BigDecimal::from(wt.w));
    e1 <= bound && e2 <= bound && field.coprime(a, q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Classification {
    /// the observed gcd growth is bounded by `c · W^η` at this grid `η`
    ConsistentWithEtaGood { eta: f64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodPairReport {
    pub witnesses: usize,
    /// per dyadic `W`-range, the witness with the smallest gcd
    pub minima: Vec<Witness>,
    /// least-squares slope of `log gcd` against `log W` over `minima`
    pub eta_estimate: f64,
    pub envelope_constant: f64,
    pub classification: Classification,
}

pub const MIN_WITNESSES: usize = 10;
pub const MIN_DECADES: f64 = 3.0;

/// `0, 0.01, …, 0.5`.
pub fn default_eta_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 100.0).collect()
}

/// Smallest grid `η` with `gcd ≤ c · W^η` for the per-dyadic-range minimal
/// gcds. Goodness is an infinitary property, so the best verdict is
/// "consistent with η-good".
pub fn classify_eta_good(witnesses: &[Witness], eta_grid: &[f64], c: f64) -> GoodPairReport {
    let mut minima: Vec<Witness> = Vec::new();
    for wt in witnesses {
        if wt.w < 2 {
            continue;
        }
        let band = 63 - wt.w.leading_zeros();
        match minima.last_mut() {
            Some(last) if 63 - last.w.leading_zeros() == band => {
                if wt.gcd < last.gcd {
                    *last = *wt;
                }
            }
            _ => minima.push(*wt),
        }
    }
    let logs: Vec<(f64, f64)> = minima
        .iter()
        .map(|m| ((m.w as f64).ln(), (m.gcd.max(1) as f64).ln()))
        .collect();
    let eta_estimate = if logs.len() >= 2 {
        let n = logs.len() as f64;
        let (sx, sy) = logs.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let (num, den) = logs
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    } else {
        0.0
    };
    let (wmin, wmax) = witnesses
        .iter()
        .fold((u64::MAX, 0), |a, w| (a.0.min(w.w.max(1)), a.1.max(w.w)));
    let decades = if witnesses.is_empty() {
        0.0
    } else {
        (wmax as f64 / wmin as f64).log10()
    };
    let classification = if witnesses.len() < MIN_WITNESSES {
        Classification::Inconclusive {
            reason: format!("{} witnesses, need at least {MIN_WITNESSES}", witnesses.len()),
        }
    } else if decades < MIN_DECADES {
        Classification::Inconclusive {
            reason: format!("witnesses span {decades:.2} decades of W, need {MIN_DECADES}"),
        }
    } else {
        let tol = 1e-9;
        match eta_grid.iter().copied().find(|&eta| {
            minima
                .iter()
                .all(|m| (m.gcd as f64).ln() <= c.ln() + eta * (m.w as f64).ln() + tol)
        }) {
            Some(eta) => Classification::ConsistentWithEtaGood { eta },
            None => Classification::Inconclusive {
                reason: "gcd growth exceeds every grid exponent".into(),
            },
        }
    };
    GoodPairReport {
        witnesses: witnesses.len(),
        minima,
        eta_estimate,
        envelope_constant: c,
        classification,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealRecord {
    pub p: AlgInt,
    pub norm: u64,
    pub a: AlgInt,
    /// `max_i |x_i − σ_i(a)/σ_i(p)|`
    pub dist: f64,
    /// `−log(dist)/log N(p) − 1/2`
    pub nu_p: f64,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealRecordSearch {
    pub nmax: u64,
    pub nu_target: Exponent,
    pub scanned: usize,
    pub records: Vec<RealRecord>,
    pub warnings: Vec<String>,
}

/// Prime elements `p` with some `a` satisfying `|x_i − σ_i(a)/σ_i(p)| ≤ N(p)^{−1/2−ν}`, `i = 1, 2`.
pub fn real_record_search(field: &FieldSpec, x: &ExtPair, nmax: u64, nu_target: Exponent) -> Result<RealRecordSearch> {
    need_real_sqrt_d(field)?;
    if nmax > NMAX_GUARD {
        return Err(Error::budget("record search norm bound above the 1e10 guard", nmax));
    }
    let mut warnings: Vec<String> = real_field_point_warning(field, x).into_iter().collect();
    let primes = prime_ideals_up_to(field, nmax, DEFAULT_IDEAL_CAP)?;
    let xf = x.to_f64();
    let nu = nu_target.value();
    let found: Vec<Option<RealRecord>> = primes
        .par_iter()
        .map(|q| {
            let p = q.generator;
            let n = q.norm as f64;
            let best = nearby_numerators(field, xf, p)
                .map(|a| {
                    let (e1, e2) = real_errors(field, xf, a, p);
                    (e1.max(e2), a)
                })
                .min_by(|l, r| l.0.total_cmp(&r.0).then((l.1.a, l.1.b).cmp(&(r.1.a, r.1.b))))?;
            if best.0 > SCAN_SLACK * n.powf(-0.5 - nu) {
                return None;
            }
            let (e1, e2) = real_errors_ext(field, x, best.1, p);
            let dist = if e1 >= e2 { e1 } else { e2 };
            let verified = le_power(&dist, q.norm, nu_target.den + 2 * nu_target.num, 2 * nu_target.den);
            if !verified {
                return None;
            }
            Some(RealRecord {
                p,
                norm: q.norm,
                a: best.1,
                dist: to_f64(&dist),
                nu_p: if dist.is_zero() {
                    f64::INFINITY
                } else {
                    -precision::ln(&dist) / n.ln() - 0.5
                },
                verified,
            })
        })
        .collect();
    let records: Vec<RealRecord> = found.into_iter().flatten().collect();
    if records.iter().any(|r| r.dist == 0.0) {
        warnings.push("a prime element hits (x1, x2) exactly; the pair is a field point".into());
    }
    Ok(RealRecordSearch {
        nmax,
        nu_target,
        scanned: primes.len(),
        records,
        warnings,
    })
}
