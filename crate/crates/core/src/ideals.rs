//! Prime ideals, the order ≺, and enumeration of all ideals up to a norm bound.
//!
//! Every ideal is principal, so an ideal is stored as its canonical generator.
//! Prime ideals are ordered by `(norm, a, b)` of that generator; this is the
//! total order ≺ used by the sifting sums.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::arith::{binomial, is_prime, kronecker, primes_up_to, sqrt_mod};
use crate::error::{Error, Result};
use crate::field::{AlgInt, FieldSpec};
use crate::quad::li2;

/// Default cap on the number of ideals a table may hold.
pub const DEFAULT_IDEAL_CAP: usize = 40_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for SplitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitTag::Split => "split",
            SplitTag::Inert => "inert",
            SplitTag::Ramified => "ramified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub tag: SplitTag,
    pub generator: AlgInt,
    pub norm: u64,
}

impl PrimeIdeal {
    fn key(&self) -> (u64, i64, i64) {
        (self.norm, self.generator.a, self.generator.b)
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The order ≺: norm first, then the canonical generator's coordinates.
impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A nonzero ideal with its canonical generator and factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealRep {
    pub generator: AlgInt,
    pub norm: u64,
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealRep {
    pub fn unit() -> Self {
        IdealRep {
            generator: AlgInt::ONE,
            norm: 1,
            factors: Vec::new(),
        }
    }

    /// Smallest prime factor under ≺, `None` for the unit ideal.
    pub fn smallest_prime_factor(&self) -> Option<&PrimeIdeal> {
        self.factors.iter().map(|(p, _)| p).min()
    }
}

pub fn mobius(a: &IdealRep) -> i32 {
    if a.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if a.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of ordered factorizations of `a` into `k` ideals.
pub fn dk(k: u32, a: &IdealRep) -> Result<u64> {
    if !(1..=5).contains(&k) {
        return Err(Error::precondition(format!("d_k needs 1 <= k <= 5, got {k}")));
    }
    Ok(a.factors
        .iter()
        .map(|&(_, e)| binomial((e + k - 1) as u64, (k - 1) as u64))
        .product())
}

pub fn splitting_type(field: &FieldSpec, p: u64) -> Result<SplitTag> {
    if !is_prime(p) {
        return Err(Error::precondition(format!("{p} is not a rational prime")));
    }
    Ok(match kronecker(field.discriminant(), p) {
        0 => SplitTag::Ramified,
        1 => SplitTag::Split,
        _ => SplitTag::Inert,
    })
}

/// Roots of `X² − tX + n` modulo `p`, where `ω² = tω − n`.
fn omega_roots_mod(field: &FieldSpec, p: u64) -> Vec<u64> {
    let t = field.trace();
    let n = field.omega_norm();
    let pi = p as i64;
    let poly = |x: i64| ((x * x - t * x + n) % pi + pi) % pi;
    if p < 64 {
        return (0..pi).filter(|&x| poly(x) == 0).map(|x| x as u64).collect();
    }
    let disc = field.discriminant().rem_euclid(pi) as u64;
    let s = match sqrt_mod(disc, p) {
        Some(s) => s as i64,
        None => return Vec::new(),
    };
    let inv2 = (pi + 1) / 2;
    let mut roots: Vec<u64> = [t + s, t - s]
        .iter()
        .map(|&v| ((v.rem_euclid(pi) as i128 * inv2 as i128) % pi as i128) as u64)
        .collect();
    roots.sort_unstable();
    roots.dedup();
    debug_assert!(roots.iter().all(|&r| poly(r as i64) == 0));
    roots
}

/// Integer quadratic form `(A, B, C)` on coordinates `(a, b)`: the norm form for
/// imaginary fields, `σ₁² + σ₂²` for real fields.
fn size_form(field: &FieldSpec) -> (i128, i128, i128) {
    let t = field.trace() as i128;
    let n = field.omega_norm() as i128;
    if field.is_imaginary() {
        (1, t, n)
    } else {
        (2, 2 * t, t * t - 2 * n)
    }
}

fn eval_form(f: (i128, i128, i128), v: (i128, i128)) -> i128 {
    f.0 * v.0 * v.0 + f.1 * v.0 * v.1 + f.2 * v.1 * v.1
}

/// Lagrange-Gauss reduction of a lattice basis with respect to a positive form.
fn reduce(f: (i128, i128, i128), mut v1: (i128, i128), mut v2: (i128, i128)) -> ((i128, i128), (i128, i128)) {
    if eval_form(f, v1) > eval_form(f, v2) {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let q1 = eval_form(f, v1);
        // 2·B(v1, v2)
        let two_b = eval_form(f, (v1.0 + v2.0, v1.1 + v2.1)) - q1 - eval_form(f, v2);
        let mu = div_round(two_b, 2 * q1);
        v2 = (v2.0 - mu * v1.0, v2.1 - mu * v1.1);
        if eval_form(f, v2) < q1 {
            std::mem::swap(&mut v1, &mut v2);
        } else {
            return (v1, v2);
        }
    }
}

fn div_round(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r >= b {
        q + 1
    } else {
        q
    }
}

/// All lattice vectors `k1·v1 + k2·v2` with form value at most `bound`.
fn short_vectors(
    f: (i128, i128, i128),
    v1: (i128, i128),
    v2: (i128, i128),
    bound: i128,
) -> Vec<(i128, i128)> {
    let a = eval_form(f, v1);
    let c = eval_form(f, v2);
    let b = eval_form(f, (v1.0 + v2.0, v1.1 + v2.1)) - a - c;
    let delta = 4 * a * c - b * b;
    let k2_max = ((4.0 * a as f64 * bound as f64 / delta as f64).sqrt()).floor() as i128 + 1;
    let mut out = Vec::new();
    for k2 in -k2_max..=k2_max {
        // a·k1² + b·k2·k1 + (c·k2² − bound) ≤ 0
        let disc = (b * k2) as f64 * (b * k2) as f64 - 4.0 * a as f64 * (c * k2 * k2 - bound) as f64;
        if disc < 0.0 {
            continue;
        }
        let lo = ((-(b * k2) as f64 - disc.sqrt()) / (2.0 * a as f64)).floor() as i128 - 1;
        let hi = ((-(b * k2) as f64 + disc.sqrt()) / (2.0 * a as f64)).ceil() as i128 + 1;
        for k1 in lo..=hi {
            let v = (k1 * v1.0 + k2 * v2.0, k1 * v1.1 + k2 * v2.1);
            if eval_form(f, v) <= bound {
                out.push(v);
            }
        }
    }
    out
}

/// Generator of the prime ideal `(p, ω − r)` above a split or ramified `p`.
fn generator_for_root(field: &FieldSpec, p: u64, r: u64) -> AlgInt {
    let f = size_form(field);
    let (v1, v2) = reduce(f, (p as i128, 0), (-(r as i128), 1));
    let bound = if field.is_imaginary() {
        p as i128
    } else {
        let eps = field.sigma(field.fundamental_unit().expect("real field")).0;
        (2.0 * eps * p as f64 * (1.0 + 1e-9)).ceil() as i128 + 1
    };
    short_vectors(f, v1, v2, bound)
        .into_iter()
        .map(|(a, b)| AlgInt::new(a as i64, b as i64))
        .find(|x| field.norm(*x).unsigned_abs() == p as u128)
        .map(|x| field.canonical(x))
        .expect("class number one: the prime ideal has a generator of norm ±p")
}

/// The prime ideals above the rational prime `p`, in ≺ order.
pub fn primes_above(field: &FieldSpec, p: u64) -> Result<Vec<PrimeIdeal>> {
    let tag = splitting_type(field, p)?;
    let mut out = match tag {
        SplitTag::Inert => vec![PrimeIdeal {
            p,
            tag,
            generator: AlgInt::new(p as i64, 0),
            norm: p.checked_mul(p).ok_or(Error::Overflow("inert prime norm"))?,
        }],
        _ => omega_roots_mod(field, p)
            .into_iter()
            .map(|r| PrimeIdeal {
                p,
                tag,
                generator: generator_for_root(field, p, r),
                norm: p,
            })
            .collect(),
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every prime ideal of norm at most `max_norm`, sorted by ≺.
pub fn prime_ideals_up_to(field: &FieldSpec, max_norm: u64, cap: usize) -> Result<Vec<PrimeIdeal>> {
    let rational = primes_up_to(max_norm);
    if rational.len() > cap / 2 {
        return Err(Error::budget(
            format!("prime ideal table of norm <= {max_norm} exceeds the cap of {cap} entries"),
            max_norm,
        ));
    }
    let mut out = Vec::with_capacity(rational.len() * 2);
    for p in rational {
        for q in primes_above(field, p)? {
            if q.norm <= max_norm {
                out.push(q);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every prime ideal of norm strictly below `x`, sorted by ≺.
pub fn enumerate_prime_ideals(field: &FieldSpec, x: f64) -> Result<Vec<PrimeIdeal>> {
    if !(x >= 2.0) {
        return Err(Error::precondition(format!("prime ideal enumeration needs X >= 2, got {x}")));
    }
    let max = (x.ceil() as u64).saturating_sub(1);
    prime_ideals_up_to(field, max, DEFAULT_IDEAL_CAP)
}

/// Index of 𝔔(z), the ≺-smallest prime ideal of norm at least `z`, in a sorted list.
pub fn q_of_index(primes: &[PrimeIdeal], z: f64) -> Result<usize> {
    let i = primes.partition_point(|q| (q.norm as f64) < z);
    if i == primes.len() {
        let top = primes.last().map_or(0, |q| q.norm);
        return Err(Error::budget(
            format!("no prime ideal of norm >= {z} below the enumeration bound {top}; extend enumeration"),
            z.ceil() as u64,
        ));
    }
    Ok(i)
}

pub fn q_of(primes: &[PrimeIdeal], z: f64) -> Result<PrimeIdeal> {
    q_of_index(primes, z).map(|i| primes[i])
}

/// Factorization of the principal ideal `(x)` by trial division of its norm.
pub fn factor_element(field: &FieldSpec, x: AlgInt) -> Result<IdealRep> {
    if x.is_zero() {
        return Err(Error::precondition("the zero ideal has no factorization"));
    }
    let norm = u64::try_from(field.norm(x).unsigned_abs()).map_err(|_| Error::Overflow("ideal norm"))?;
    let mut rest = x;
    let mut m = norm;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while m > 1 {
        if p * p > m {
            p = m;
        }
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            for q in primes_above(field, p)? {
                let mut e = 0;
                while let Some(y) = field.div_exact(rest, q.generator) {
                    // unit drift in real fields would otherwise grow the coordinates
                    rest = field.canonical(y);
                    e += 1;
                }
                if e > 0 {
                    factors.push((q, e));
                }
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factors.sort();
    Ok(IdealRep {
        generator: field.canonical(x),
        norm,
        factors,
    })
}

/// `#ℙ(z)` next to the logarithmic-integral prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeCount {
    pub z: f64,
    pub count: u64,
    pub li: f64,
    /// `count · log z / z`
    pub ratio: f64,
    /// `(count − li) / (z exp(−√log z))`
    pub normalized_error: f64,
}

pub fn pi_k(field: &FieldSpec, z: f64) -> Result<PrimeCount> {
    let count = if z <= 2.0 {
        0
    } else {
        enumerate_prime_ideals(field, z)?.len() as u64
    };
    Ok(prime_count_report(z, count))
}

pub fn prime_count_report(z: f64, count: u64) -> PrimeCount {
    let li = li2(z);
    PrimeCount {
        z,
        count,
        li,
        ratio: count as f64 * z.ln() / z,
        normalized_error: (count as f64 - li) / (z * (-z.ln().sqrt()).exp()),
    }
}

/// `a_k(n) = Σ_{N(𝔫) = n} d_k(𝔫)` for `0 ≤ n ≤ x` (`a_1` counts ideals of norm `n`).
pub fn norm_coefficients(field: &FieldSpec, x: u64, k: u32) -> Result<Vec<u32>> {
    if !(1..=5).contains(&k) {
        return Err(Error::precondition(format!("d_k needs 1 <= k <= 5, got {k}")));
    }
    let n = x as usize;
    let mut out = vec![1u32; n + 1];
    out[0] = 0;
    let dkp = |e: u64| binomial(e + k as u64 - 1, k as u64 - 1);
    for p in primes_up_to(x) {
        let tag = splitting_type(field, p)?;
        let mut pe = p;
        let mut e = 1u64;
        loop {
            let local = match tag {
                SplitTag::Split => (0..=e).map(|i| dkp(i) * dkp(e - i)).sum::<u64>(),
                SplitTag::Inert => {
                    if e % 2 == 0 {
                        dkp(e / 2)
                    } else {
                        0
                    }
                }
                SplitTag::Ramified => dkp(e),
            } as u32;
            // multiply every m with exact p-power p^e
            let mut m = pe;
            while m <= x {
                if (m / pe) % p != 0 {
                    out[m as usize] = out[m as usize].saturating_mul(local);
                }
                m += pe;
            }
            match pe.checked_mul(p) {
                Some(next) if next <= x => {
                    pe = next;
                    e += 1;
                }
                _ => break,
            }
        }
    }
    Ok(out)
}

/// All ideals of norm at most `max_norm`, generated depth-first as products of
/// prime powers in ≺ order.
#[derive(Clone, Debug)]
pub struct IdealTable {
    field: FieldSpec,
    max_norm: u64,
    primes: Vec<PrimeIdeal>,
    norms: Vec<u64>,
    gens: Vec<AlgInt>,
    spf: Vec<u32>,
    last: Vec<(u32, u32)>,
    parent: Vec<u32>,
    order: Vec<u32>,
}

/// Rank stored for the unit ideal, which has no prime factor.
pub const NO_PRIME: u32 = u32::MAX;

impl IdealTable {
    pub fn build(field: &FieldSpec, max_norm: u64) -> Result<Self> {
        Self::build_with_cap(field, max_norm, DEFAULT_IDEAL_CAP)
    }

    pub fn build_with_cap(field: &FieldSpec, max_norm: u64, cap: usize) -> Result<Self> {
        let primes = prime_ideals_up_to(field, max_norm, cap)?;
        let mut t = IdealTable {
            field: field.clone(),
            max_norm,
            primes,
            norms: vec![1],
            gens: vec![AlgInt::ONE],
            spf: vec![NO_PRIME],
            last: vec![(NO_PRIME, 0)],
            parent: vec![0],
            order: Vec::new(),
        };
        t.grow(0, 0, cap)?;
        let mut order: Vec<u32> = (0..t.norms.len() as u32).collect();
        order.sort_unstable_by_key(|&i| (t.norms[i as usize], t.gens[i as usize]));
        t.order = order;
        Ok(t)
    }

    fn grow(&mut self, start: usize, idx: usize, cap: usize) -> Result<()> {
        let norm = self.norms[idx];
        let gen = self.gens[idx];
        for j in start..self.primes.len() {
            let q = self.primes[j];
            if norm > self.max_norm / q.norm {
                break;
            }
            let mut n = norm;
            let mut g = gen;
            let mut e = 0;
            while n <= self.max_norm / q.norm {
                n *= q.norm;
                g = self.field.canonical(self.field.mul(g, q.generator));
                e += 1;
                if self.norms.len() >= cap {
                    return Err(Error::budget(
                        format!("ideal table of norm <= {} exceeds the cap of {cap} entries", self.max_norm),
                        self.max_norm,
                    ));
                }
                let spf = if idx == 0 { j as u32 } else { self.spf[idx] };
                self.norms.push(n);
                self.gens.push(g);
                self.spf.push(spf);
                self.last.push((j as u32, e));
                self.parent.push(idx as u32);
                let new = self.norms.len() - 1;
                self.grow(j + 1, new, cap)?;
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn max_norm(&self) -> u64 {
        self.max_norm
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn norm(&self, i: u32) -> u64 {
        self.norms[i as usize]
    }

    pub fn generator(&self, i: u32) -> AlgInt {
        self.gens[i as usize]
    }

    /// ≺-rank of the smallest prime factor ([`NO_PRIME`] for the unit ideal).
    pub fn spf_rank(&self, i: u32) -> u32 {
        self.spf[i as usize]
    }

    /// Table indices sorted by `(norm, generator)`.
    pub fn by_norm(&self) -> &[u32] {
        &self.order
    }

    /// Table indices of all ideals with norm at most `bound`, sorted by norm.
    pub fn up_to(&self, bound: f64) -> &[u32] {
        let k = self.order.partition_point(|&i| (self.norms[i as usize] as f64) <= bound);
        &self.order[..k]
    }

    /// `(prime rank, exponent)` pairs, ascending in ≺.
    pub fn factor_ranks(&self, i: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut cur = i as usize;
        while cur != 0 {
            out.push(self.last[cur]);
            cur = self.parent[cur] as usize;
        }
        out.reverse();
        out
    }

    pub fn rep(&self, i: u32) -> IdealRep {
        IdealRep {
            generator: self.gens[i as usize],
            norm: self.norms[i as usize],
            factors: self
                .factor_ranks(i)
                .into_iter()
                .map(|(r, e)| (self.primes[r as usize], e))
                .collect(),
        }
    }

    pub fn rank_of(&self, q: &PrimeIdeal) -> Option<u32> {
        self.primes.binary_search(q).ok().map(|r| r as u32)
    }

    /// Rank of 𝔔(z).
    pub fn q_of_rank(&self, z: f64) -> Result<u32> {
        q_of_index(&self.primes, z).map(|i| i as u32)
    }

    /// Table index of the ideal generated by `x`, if it lies in the table.
    pub fn index_of(&self, x: AlgInt) -> Option<u32> {
        let g = self.field.canonical(x);
        let n = self.field.norm(g).unsigned_abs() as u64;
        let lo = self.order.partition_point(|&i| (self.norms[i as usize], self.gens[i as usize]) < (n, g));
        self.order
            .get(lo)
            .copied()
            .filter(|&i| self.norms[i as usize] == n && self.gens[i as usize] == g)
    }
}
