//! Sifting sums `Φ_r(W, 𝔮)` and `S_r(W, z)` over an [`IdealTable`], the
//! Buchstab identity as a residual, asymptotic comparisons against `ℬ(u)`,
//! and the smoothed indicator behind cosmetic surgery.
//!
//! Coprimality with `Π(𝔮)` is the predicate "smallest prime factor ⪰ 𝔮".
//! Sums run over the table in `(norm, generator)` order, so floating results
//! are reproducible bit for bit.

use std::f64::consts::PI;

use serde::Serialize;

use crate::buchstab::BuchstabTable;
use crate::error::{Error, Result};
use crate::field::AlgInt;
use crate::ideals::IdealTable;
use crate::quad::gauss_legendre16;
use crate::weights::WeightSpec;

/// The fixed ideal `𝔯` of a sifting sum, given by a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Multiplier {
    pub generator: AlgInt,
    pub norm: u64,
}

impl Multiplier {
    pub fn unit() -> Self {
        Multiplier {
            generator: AlgInt::ONE,
            norm: 1,
        }
    }

    pub fn from_table(table: &IdealTable, i: u32) -> Self {
        Multiplier {
            generator: table.generator(i),
            norm: table.norm(i),
        }
    }

    pub fn times(&self, table: &IdealTable, i: u32) -> Self {
        Multiplier {
            generator: table.field().mul(self.generator, table.generator(i)),
            norm: self.norm * table.norm(i),
        }
    }

    pub fn times_prime(&self, table: &IdealTable, rank: u32) -> Self {
        let q = table.primes()[rank as usize];
        Multiplier {
            generator: table.field().mul(self.generator, q.generator),
            norm: self.norm * q.norm,
        }
    }
}

/// A sifting sum: exact for characteristic weights, floating otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SieveSum {
    pub exact: Option<u64>,
    pub value: f64,
}

/// Largest `N(𝔞)` that can contribute to a sum with multiplier norm `r_norm`.
fn norm_limit(weight: &WeightSpec, table: &IdealTable, r_norm: u64) -> Result<f64> {
    let budget = weight.norm_budget(table.field());
    if budget > table.max_norm() as f64 * r_norm as f64 {
        return Err(Error::budget(
            format!(
                "ideal table reaches norm {} but the weight needs {:.0} / N(r)",
                table.max_norm(),
                budget
            ),
            (budget / r_norm as f64).ceil() as u64,
        ));
    }
    Ok(budget / r_norm as f64)
}

/// `Φ_r(W, 𝔮)` with `𝔮` given by its ≺-rank; a rank equal to the number of
/// primes in the table admits only ideals without prime factors in it.
pub fn phi(table: &IdealTable, r: Multiplier, q_rank: u32, weight: &WeightSpec) -> Result<SieveSum> {
    let limit = norm_limit(weight, table, r.norm)?;
    let ideals = table.up_to(limit);
    if let Some(n) = weight.characteristic_bound() {
        let y = n / r.norm;
        let count = ideals
            .iter()
            .take_while(|&&i| table.norm(i) <= y)
            .filter(|&&i| table.spf_rank(i) >= q_rank)
            .count() as u64;
        return Ok(SieveSum {
            exact: Some(count),
            value: count as f64,
        });
    }
    let field = table.field();
    let mut total = 0.0;
    for &i in ideals {
        if table.spf_rank(i) >= q_rank {
            let g = field.mul(table.generator(i), r.generator);
            total += weight.eval(field, g, table.norm(i) * r.norm);
        }
    }
    Ok(SieveSum {
        exact: None,
        value: total,
    })
}

/// `S_r(W, z)`: ideals with every prime factor of norm at least `z`.
pub fn sifted(table: &IdealTable, r: Multiplier, z: f64, weight: &WeightSpec) -> Result<SieveSum> {
    let rank = table.primes().partition_point(|q| (q.norm as f64) < z) as u32;
    phi(table, r, rank, weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    /// exact `LHS − RHS` for characteristic weights
    pub exact_residual: Option<i128>,
    pub residual: f64,
    pub terms: usize,
}

/// `Φ_r(W,𝔭) − Φ_r(W,𝔮) − Σ_{𝔭 ⪯ 𝔰 ≺ 𝔮} Φ_{r𝔰}(W,𝔰)` for ranks `p < q`.
pub fn buchstab_identity_check(
    table: &IdealTable,
    r: Multiplier,
    p_rank: u32,
    q_rank: u32,
    weight: &WeightSpec,
) -> Result<IdentityResidual> {
    if p_rank >= q_rank {
        return Err(Error::precondition("Buchstab identity needs p strictly before q"));
    }
    let lhs = phi(table, r, p_rank, weight)?;
    let first = phi(table, r, q_rank, weight)?;
    let budget = weight.norm_budget(table.field());
    let mut exact_sum: Option<i128> = first.exact.map(|v| v as i128);
    let mut float_sum = first.value;
    let mut terms = 1;
    for s in p_rank..q_rank {
        let rs = r.times_prime(table, s);
        if rs.norm as f64 > budget {
            break;
        }
        let term = phi(table, rs, s, weight)?;
        float_sum += term.value;
        if let (Some(acc), Some(v)) = (exact_sum.as_mut(), term.exact) {
            *acc += v as i128;
        }
        terms += 1;
    }
    let exact_residual = match (lhs.exact, exact_sum) {
        (Some(l), Some(r)) => Some(l as i128 - r),
        _ => None,
    };
    Ok(IdentityResidual {
        lhs: lhs.value,
        rhs: float_sum,
        exact_residual,
        residual: lhs.value - float_sum,
        terms,
    })
}

/// Exact sifting sum against `ℬ(u) · y / log N(𝔭)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n: f64,
    pub r_norm: u64,
    pub p_norm: u64,
    pub y: f64,
    pub u: f64,
    pub exact: f64,
    pub predicted: f64,
    pub relative_error: f64,
}

pub const U_MIN: f64 = 1.05;
pub const U_MAX: f64 = 6.0;

/// Compares `Φ_r(W, 𝔭)` with `ℬ(u) y / log N(𝔭)`, `y = N/N(r)`, `u = log y / log N(𝔭)`.
pub fn asymptotic_check(
    table: &IdealTable,
    buchstab: &BuchstabTable,
    weight: &WeightSpec,
    r: Multiplier,
    p_rank: u32,
) -> Result<AsymptoticReport> {
    let n = weight.scale();
    if r.norm as f64 > n / 2.0 {
        return Err(Error::precondition("asymptotic check needs N(r) <= N/2"));
    }
    let p = table
        .primes()
        .get(p_rank as usize)
        .ok_or_else(|| Error::precondition("prime rank outside the table"))?;
    let y = n / r.norm as f64;
    let u = y.ln() / (p.norm as f64).ln();
    if !(U_MIN..=U_MAX).contains(&u) {
        return Err(Error::precondition(format!(
            "u = {u:.4} outside [{U_MIN}, {U_MAX}], where the asymptotic regime is not defined"
        )));
    }
    let exact = phi(table, r, p_rank, weight)?.value;
    let predicted = buchstab.eval(u)? * y / (p.norm as f64).ln();
    Ok(AsymptoticReport {
        n,
        r_norm: r.norm,
        p_norm: p.norm,
        y,
        u,
        exact,
        predicted,
        relative_error: (exact - predicted) / predicted,
    })
}

/// Rough-ideal count with the characteristic weight of `N`; `𝔭 = 𝔔(y^{1/u})`.
pub fn rough_asymptotic_check(
    table: &IdealTable,
    buchstab: &BuchstabTable,
    n: u64,
    r: Multiplier,
    target_u: f64,
) -> Result<AsymptoticReport> {
    let weight = WeightSpec::Characteristic { n: n as f64 };
    let y = n as f64 / r.norm as f64;
    let rank = table.q_of_rank(y.powf(1.0 / target_u))?;
    asymptotic_check(table, buchstab, &weight, r, rank)
}

/// Same comparison for a general weight; `𝔭 = 𝔔(y^{1/u})`.
pub fn genweight_asymptotic_check(
    table: &IdealTable,
    buchstab: &BuchstabTable,
    weight: &WeightSpec,
    r: Multiplier,
    target_u: f64,
) -> Result<AsymptoticReport> {
    let y = weight.scale() / r.norm as f64;
    let rank = table.q_of_rank(y.powf(1.0 / target_u))?;
    asymptotic_check(table, buchstab, weight, r, rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurgeryReport {
    pub gamma: f64,
    pub rho: f64,
    pub t: f64,
    pub approximation: f64,
    /// `|1_{γ<ρ} − approximation|`
    pub error: f64,
    /// `1 / (T |γ − ρ|)`
    pub bound_unit: f64,
    /// `error · T |γ − ρ|`, the constant this instance needs
    pub constant: f64,
}

/// `(1/π) ∫_{−T}^{T} e^{iγt} sin(ρt)/t dt`, folded to `(2/π) ∫_0^T cos(γt) sin(ρt)/t dt`.
pub fn smoothed_indicator(gamma: f64, rho: f64, t: f64) -> Result<SurgeryReport> {
    if !(gamma > 0.0 && rho > 0.0) {
        return Err(Error::precondition("gamma and rho must be positive"));
    }
    if gamma == rho {
        return Err(Error::precondition("gamma = rho is excluded"));
    }
    if !(t >= 1.0) {
        return Err(Error::precondition("T must be at least 1"));
    }
    let mut f = |s: f64| {
        if s == 0.0 {
            rho
        } else {
            (gamma * s).cos() * (rho * s).sin() / s
        }
    };
    // half-period panels of the fastest oscillation
    let panel = PI / (gamma + rho);
    let panels = (t / panel).ceil() as usize;
    let width = t / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = k as f64 * width;
        total += gauss_legendre16(&mut f, a, a + width);
    }
    let approximation = 2.0 / PI * total;
    let indicator = if gamma < rho { 1.0 } else { 0.0 };
    let error = (indicator - approximation).abs();
    let bound_unit = 1.0 / (t * (gamma - rho).abs());
    Ok(SurgeryReport {
        gamma,
        rho,
        t,
        approximation,
        error,
        bound_unit,
        constant: error / bound_unit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurgeryFit {
    pub samples: usize,
    pub fitted_constant: f64,
    pub worst: SurgeryReport,
}

/// Samples `γ, ρ ∈ (0.1, 5)` and log-uniform `T ∈ [10, 10⁴]`; the fitted
/// constant is the largest `error · T|γ − ρ|` observed.
pub fn surgery_fit(samples: usize, seed: u64) -> Result<SurgeryFit> {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(f64, f64, f64)> = (0..samples)
        .map(|_| {
            let gamma = rng.gen_range(0.1..5.0);
            let mut rho = rng.gen_range(0.1..5.0);
            while rho == gamma {
                rho = rng.gen_range(0.1..5.0);
            }
            let t = 10f64.powf(rng.gen_range(1.0..4.0));
            (gamma, rho, t)
        })
        .collect();
    let reports = params
        .par_iter()
        .map(|&(g, r, t)| smoothed_indicator(g, r, t))
        .collect::<Result<Vec<_>>>()?;
    let worst = *reports
        .iter()
        .max_by(|a, b| a.constant.total_cmp(&b.constant))
        .ok_or_else(|| Error::precondition("surgery fit needs at least one sample"))?;
    Ok(SurgeryFit {
        samples,
        fitted_constant: worst.constant,
        worst,
    })
}
