//! Exact arithmetic in the ring of integers of a quadratic field of class
//! number one.
//!
//! Elements are stored as integer coordinates over the basis `{1, ω}` where
//! `ω = √d` for `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` for `d ≡ 1 (mod 4)`.
//! Writing `ω² = tω − n`, every embedding of `a + bω` equals
//! `((2a + bt) ± b√D)/2` with `D` the discriminant, which is what the exact
//! sign tests below work with.

use std::cmp::Ordering;
use std::fmt;

use bigdecimal::BigDecimal;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{is_square, is_squarefree, isqrt};
use crate::error::{Error, Result};
use crate::precision;

/// The nine imaginary quadratic fields of class number one.
pub const IMAGINARY_CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// Supported real quadratic fields: class number one and `d ≡ 3 (mod 4)`.
pub const REAL_SUPPORTED: [i64; 6] = [3, 7, 11, 19, 31, 43];

/// An element `a + bω` of the ring of integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgInt {
    pub a: i64,
    pub b: i64,
}

impl AlgInt {
    pub const ZERO: AlgInt = AlgInt { a: 0, b: 0 };
    pub const ONE: AlgInt = AlgInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        AlgInt { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ω"),
            (a, b) if b < 0 => write!(f, "{a}-{}ω", -b),
            (a, b) => write!(f, "{a}+{b}ω"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaKind {
    /// `ω = √d`
    SqrtD,
    /// `ω = (1 + √d)/2`
    HalfOnePlusSqrtD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sigma {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Embedding {
    Real(f64),
    Complex(Complex64),
}

impl Embedding {
    pub fn abs(&self) -> f64 {
        match self {
            Embedding::Real(x) => x.abs(),
            Embedding::Complex(z) => z.norm(),
        }
    }
}

/// An embedding evaluated in extended precision (imaginary part zero for real fields).
#[derive(Clone, Debug, PartialEq)]
pub struct ExtEmbedding {
    pub re: BigDecimal,
    pub im: BigDecimal,
}

/// A quadratic field `Q(√d)` of class number one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    d: i64,
    omega: OmegaKind,
    discriminant: i64,
    trace: i64,
    omega_norm: i64,
    fundamental_unit: Option<AlgInt>,
    unit_norm: i64,
}

impl FieldSpec {
    /// Builds a supported field, rejecting anything outside the class-number-one tables.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::UnsupportedField {
                d,
                reason: "d must be squarefree and different from 0 and 1".into(),
            });
        }
        if d < 0 && !IMAGINARY_CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::UnsupportedField {
                d,
                reason: format!(
                    "imaginary fields must have class number one, d in {IMAGINARY_CLASS_NUMBER_ONE:?}"
                ),
            });
        }
        if d > 0 && !REAL_SUPPORTED.contains(&d) {
            return Err(Error::UnsupportedField {
                d,
                reason: format!("real fields are limited to d in {REAL_SUPPORTED:?}"),
            });
        }
        let mut field = Self::raw(d);
        if d > 0 {
            let eps = fundamental_unit(d)?;
            field.unit_norm = field.norm(eps) as i64;
            field.fundamental_unit = Some(eps);
        }
        Ok(field)
    }

    fn raw(d: i64) -> Self {
        let (omega, trace, omega_norm, discriminant) = if d.rem_euclid(4) == 1 {
            (OmegaKind::HalfOnePlusSqrtD, 1, (1 - d) / 4, d)
        } else {
            (OmegaKind::SqrtD, 0, -d, 4 * d)
        };
        FieldSpec {
            d,
            omega,
            discriminant,
            trace,
            omega_norm,
            fundamental_unit: None,
            unit_norm: 1,
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `t` in `ω² = tω − n`.
    pub fn trace(&self) -> i64 {
        self.trace
    }

    /// `n = N(ω)` in `ω² = tω − n`.
    pub fn omega_norm(&self) -> i64 {
        self.omega_norm
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// Always true for a constructed field: construction fails otherwise.
    pub fn class_number_one(&self) -> bool {
        true
    }

    pub fn fundamental_unit(&self) -> Option<AlgInt> {
        self.fundamental_unit
    }

    /// `log ε` for real fields.
    pub fn regulator(&self) -> Option<f64> {
        self.fundamental_unit.map(|e| self.sigma(e).0.ln())
    }

    /// Number of roots of unity in the ring.
    pub fn roots_of_unity(&self) -> usize {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// The roots of unity, as ring elements.
    pub fn torsion_units(&self) -> Vec<AlgInt> {
        match self.d {
            -1 => vec![
                AlgInt::new(1, 0),
                AlgInt::new(0, 1),
                AlgInt::new(-1, 0),
                AlgInt::new(0, -1),
            ],
            -3 => vec![
                AlgInt::new(1, 0),
                AlgInt::new(0, 1),
                AlgInt::new(-1, 1),
                AlgInt::new(-1, 0),
                AlgInt::new(0, -1),
                AlgInt::new(1, -1),
            ],
            _ => vec![AlgInt::new(1, 0), AlgInt::new(-1, 0)],
        }
    }

    pub fn add(&self, x: AlgInt, y: AlgInt) -> AlgInt {
        AlgInt::new(x.a + y.a, x.b + y.b)
    }

    pub fn sub(&self, x: AlgInt, y: AlgInt) -> AlgInt {
        AlgInt::new(x.a - y.a, x.b - y.b)
    }

    pub fn neg(&self, x: AlgInt) -> AlgInt {
        AlgInt::new(-x.a, -x.b)
    }

    pub fn mul(&self, x: AlgInt, y: AlgInt) -> AlgInt {
        let bb = x.b as i128 * y.b as i128;
        let a = x.a as i128 * y.a as i128 - self.omega_norm as i128 * bb;
        let b = x.a as i128 * y.b as i128 + x.b as i128 * y.a as i128 + self.trace as i128 * bb;
        debug_assert!(a.unsigned_abs() < i64::MAX as u128 && b.unsigned_abs() < i64::MAX as u128);
        AlgInt::new(a as i64, b as i64)
    }

    pub fn pow(&self, x: AlgInt, mut e: u32) -> AlgInt {
        let mut acc = AlgInt::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, x: AlgInt, k: i64) -> AlgInt {
        AlgInt::new(x.a * k, x.b * k)
    }

    /// Galois conjugate.
    pub fn conj(&self, x: AlgInt) -> AlgInt {
        AlgInt::new(x.a + x.b * self.trace, -x.b)
    }

    /// Exact norm `N(a + bω) = a² + tab + nb²`.
    pub fn norm(&self, x: AlgInt) -> i128 {
        let (a, b) = (x.a as i128, x.b as i128);
        a * a + self.trace as i128 * a * b + self.omega_norm as i128 * b * b
    }

    /// `x / y` when it lies in the ring.
    pub fn div_exact(&self, x: AlgInt, y: AlgInt) -> Option<AlgInt> {
        let n = self.norm(y);
        if n == 0 {
            return None;
        }
        let c = self.conj(y);
        let bb = x.b as i128 * c.b as i128;
        let a = x.a as i128 * c.a as i128 - self.omega_norm as i128 * bb;
        let b = x.a as i128 * c.b as i128 + x.b as i128 * c.a as i128 + self.trace as i128 * bb;
        (a % n == 0 && b % n == 0).then(|| AlgInt::new((a / n) as i64, (b / n) as i64))
    }

    pub fn divides(&self, y: AlgInt, x: AlgInt) -> bool {
        self.div_exact(x, y).is_some()
    }

    /// The integer pair `(2a + bt, b)`: an embedding equals `(A ± B√D)/2`.
    fn doubled(&self, x: AlgInt) -> (i128, i128) {
        (2 * x.a as i128 + self.trace as i128 * x.b as i128, x.b as i128)
    }

    /// Exact sign of a real embedding.
    pub fn sign_sigma(&self, x: AlgInt, which: Sigma) -> Ordering {
        assert!(!self.is_imaginary(), "sign of an embedding needs a real field");
        let (big_a, b) = self.doubled(x);
        let big_b = match which {
            Sigma::One => b,
            Sigma::Two => -b,
        };
        sign_of_surd(big_a, big_b, self.discriminant as i128)
    }

    /// Exact comparison `|σ₁(x)|` against `|σ₂(x)|` (real fields).
    pub fn cmp_abs_sigmas(&self, x: AlgInt) -> Ordering {
        // σ₁² − σ₂² = (σ₁ + σ₂)(σ₁ − σ₂) = A · B√D
        let (big_a, b) = self.doubled(x);
        (big_a.signum() * b.signum()).cmp(&0)
    }

    /// Both real embeddings in double precision; the smaller one is recovered
    /// from the norm to avoid cancellation.
    pub fn sigma(&self, x: AlgInt) -> (f64, f64) {
        assert!(!self.is_imaginary(), "real embeddings need a real field");
        let (big_a, b) = self.doubled(x);
        let root = (self.discriminant as f64).sqrt();
        let s1 = (big_a as f64 + b as f64 * root) / 2.0;
        let s2 = (big_a as f64 - b as f64 * root) / 2.0;
        let n = self.norm(x) as f64;
        if s1.abs() >= s2.abs() {
            (s1, if s1 == 0.0 { 0.0 } else { n / s1 })
        } else {
            (n / s2, s2)
        }
    }

    /// The complex embedding of an imaginary field (σ₂ is its conjugate).
    pub fn complex(&self, x: AlgInt) -> Complex64 {
        assert!(self.is_imaginary(), "complex embedding needs an imaginary field");
        let (big_a, b) = self.doubled(x);
        Complex64::new(
            big_a as f64 / 2.0,
            b as f64 * ((-self.discriminant) as f64).sqrt() / 2.0,
        )
    }

    /// `ω` as a complex number (imaginary fields) or `σ₁(ω)` as `re` (real fields).
    pub fn omega_value(&self) -> Complex64 {
        let root = (self.discriminant.abs() as f64).sqrt();
        let t = self.trace as f64;
        if self.is_imaginary() {
            Complex64::new(t / 2.0, root / 2.0)
        } else {
            Complex64::new((t + root) / 2.0, 0.0)
        }
    }

    pub fn embed(&self, x: AlgInt, which: Sigma) -> Embedding {
        if self.is_imaginary() {
            let z = self.complex(x);
            match which {
                Sigma::One => Embedding::Complex(z),
                Sigma::Two => Embedding::Complex(z.conj()),
            }
        } else {
            let (s1, s2) = self.sigma(x);
            Embedding::Real(match which {
                Sigma::One => s1,
                Sigma::Two => s2,
            })
        }
    }

    /// Embedding evaluated with roughly 100 significant digits.
    pub fn embed_ext(&self, x: AlgInt, which: Sigma) -> ExtEmbedding {
        let (big_a, b) = self.doubled(x);
        let root = precision::sqrt_int(self.discriminant.abs());
        let half = BigDecimal::from(2);
        let re_rational = BigDecimal::from(big_a as i64) / &half;
        let surd = BigDecimal::from(b as i64) * root / half;
        let sign = match which {
            Sigma::One => 1,
            Sigma::Two => -1,
        };
        if self.is_imaginary() {
            ExtEmbedding {
                re: re_rational,
                im: surd * BigDecimal::from(sign),
            }
        } else {
            ExtEmbedding {
                re: re_rational + surd * BigDecimal::from(sign),
                im: BigDecimal::from(0),
            }
        }
    }

    /// Inverse of the fundamental unit.
    pub fn unit_inverse(&self) -> Option<AlgInt> {
        self.fundamental_unit
            .map(|e| self.scale(self.conj(e), self.unit_norm))
    }

    /// `x · ε^k` for a real field.
    pub fn mul_unit_power(&self, x: AlgInt, k: i64) -> AlgInt {
        let (e, inv) = match (self.fundamental_unit, self.unit_inverse()) {
            (Some(e), Some(inv)) => (e, inv),
            _ => return x,
        };
        let step = if k >= 0 { e } else { inv };
        let mut y = x;
        for _ in 0..k.unsigned_abs() {
            y = self.mul(y, step);
        }
        y
    }

    /// The canonical associate of a nonzero element.
    ///
    /// Imaginary fields: the associate with argument in `[0, 2π/w)`, `w` the
    /// number of roots of unity. Real fields: the associate with
    /// `σ₁ ∈ [√N, ε√N)`, which forces `σ₁ > 0` and `|σ₂| ∈ (√N/ε, √N]`.
    pub fn canonical(&self, x: AlgInt) -> AlgInt {
        assert!(!x.is_zero(), "zero has no canonical associate");
        if self.is_imaginary() {
            self.torsion_units()
                .into_iter()
                .map(|u| self.mul(x, u))
                .find(|y| self.in_imaginary_domain(*y))
                .expect("exactly one associate lies in the fundamental sector")
        } else {
            self.canonical_real(x)
        }
    }

    fn in_imaginary_domain(&self, y: AlgInt) -> bool {
        let (big_a, b) = self.doubled(y);
        match self.d {
            // arg in [0, π/2)
            -1 => y.a > 0 && y.b >= 0,
            // arg in [0, π/3): Im ≥ 0 and Im < √3·Re reduces to a > 0, b ≥ 0
            -3 => y.a > 0 && y.b >= 0,
            // arg in [0, π)
            _ => b > 0 || (b == 0 && big_a > 0),
        }
    }

    fn canonical_real(&self, x: AlgInt) -> AlgInt {
        let inv = self.unit_inverse().expect("real field has a unit");
        let eps = self.fundamental_unit.expect("real field has a unit");
        let log_eps = self.regulator().expect("real field has a unit");
        let (s1, s2) = self.sigma(x);
        // jump close to the target first, then settle with exact comparisons
        let k = ((s2.abs().ln() - s1.abs().ln()) / (2.0 * log_eps)).round() as i64;
        let mut y = self.mul_unit_power(x, k);
        while self.cmp_abs_sigmas(y) == Ordering::Less {
            y = self.mul(y, eps);
        }
        loop {
            let down = self.mul(y, inv);
            if self.cmp_abs_sigmas(down) != Ordering::Less {
                y = down;
            } else {
                break;
            }
        }
        if self.sign_sigma(y, Sigma::One) == Ordering::Less {
            y = self.neg(y);
        }
        y
    }

    /// Whether `x` and `y` generate the unit ideal.
    ///
    /// The ideal `(x, y)` is the lattice spanned by `x, xω, y, yω`; its index in
    /// the ring is the gcd of all 2×2 minors of those coordinate vectors.
    pub fn coprime(&self, x: AlgInt, y: AlgInt) -> bool {
        let omega = AlgInt::new(0, 1);
        let v = [x, self.mul(x, omega), y, self.mul(y, omega)];
        let mut g: i128 = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let m = v[i].a as i128 * v[j].b as i128 - v[i].b as i128 * v[j].a as i128;
                g = num_integer::Integer::gcd(&g, &m);
            }
        }
        g == 1
    }
}

/// Exact sign of `A + B√D` for `D > 0` not a perfect square.
pub(crate) fn sign_of_surd(big_a: i128, big_b: i128, disc: i128) -> Ordering {
    let sa = big_a.signum();
    let sb = big_b.signum();
    if sb == 0 {
        return sa.cmp(&0);
    }
    if sa == 0 || sa == sb {
        return sb.cmp(&0);
    }
    // opposite signs: compare A² with B²D
    let lhs = big_a * big_a;
    let rhs = big_b * big_b * disc;
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa.cmp(&0),
        Ordering::Less => sb.cmp(&0),
        Ordering::Equal => Ordering::Equal,
    }
}

/// The fundamental unit `ε > 1` of the maximal order of `Q(√d)`, expressed
/// over that field's `{1, ω}` basis.
///
/// Units of `Z[√d]` come from the continued fraction of `√d`; for
/// `d ≡ 1 (mod 4)` the half-integral solutions of `x² − dy² = ±4` are
/// checked as well.
pub fn fundamental_unit(d: i64) -> Result<AlgInt> {
    if d <= 1 {
        return Err(Error::precondition(format!(
            "fundamental unit requires d > 1, got {d}"
        )));
    }
    if is_square(d as i128) {
        return Err(Error::precondition(format!(
            "d = {d} is a perfect square, Q(√d) is not a quadratic field"
        )));
    }
    let half_integral = d.rem_euclid(4) == 1;
    let dd = d as i128;
    // small d ≡ 1 (mod 4) where the ±4 solution precedes Legendre's bound
    if half_integral {
        for q in 1..=8i128 {
            for target in [-4i128, 4] {
                let p2 = dd * q * q + target;
                if p2 > 0 && is_square(p2) {
                    let p = isqrt(p2 as u128) as i128;
                    return Ok(AlgInt::new(((p - q) / 2) as i64, q as i64));
                }
            }
        }
    }
    let a0 = isqrt(dd as u128) as i128;
    let (mut m, mut den, mut a) = (0i128, 1i128, a0);
    let (mut p_prev, mut p) = (1i128, a0);
    let (mut q_prev, mut q) = (0i128, 1i128);
    loop {
        let n = p * p - dd * q * q;
        if half_integral && (n == 4 || n == -4) && (p - q) % 2 == 0 {
            return Ok(AlgInt::new(((p - q) / 2) as i64, q as i64));
        }
        if n == 1 || n == -1 {
            return Ok(if half_integral {
                // p + q√d = (p − q) + 2qω
                AlgInt::new((p - q) as i64, (2 * q) as i64)
            } else {
                AlgInt::new(p as i64, q as i64)
            });
        }
        m = den * a - m;
        den = (dd - m * m) / den;
        a = (a0 + m) / den;
        let p_next = a
            .checked_mul(p)
            .and_then(|v| v.checked_add(p_prev))
            .ok_or(Error::Overflow("continued fraction convergent"))?;
        let q_next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .ok_or(Error::Overflow("continued fraction convergent"))?;
        if p_next > i64::MAX as i128 / 4 {
            return Err(Error::Overflow("fundamental unit exceeds 62-bit coordinates"));
        }
        p_prev = p;
        p = p_next;
        q_prev = q;
        q = q_next;
    }
}

/// Result of a bounded norm-equation search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormSolutions {
    pub solutions: Vec<AlgInt>,
    /// True when every associate class of solutions is represented.
    pub complete: bool,
}

/// All `x` with `|N(x)| = n`; real fields restrict to `|σ₁(x)|, |σ₂(x)| ≤ bound`.
///
/// Imaginary fields ignore `bound`: the norm form is positive definite.
pub fn solve_norm_equation(field: &FieldSpec, n: u64, bound: f64) -> Result<NormSolutions> {
    if n == 0 {
        return Err(Error::precondition("norm equation needs n >= 1"));
    }
    let disc = field.discriminant as i128;
    let t = field.trace as i128;
    let nw = field.omega_norm as i128;
    let n = n as i128;
    let mut out = Vec::new();
    let (b_max, targets): (i128, &[i128]) = if field.is_imaginary() {
        // 4N = (2a + tb)² + |D| b²
        (isqrt((4 * n / -disc) as u128) as i128 + 1, &[1])
    } else {
        (
            (2.0 * bound / (disc as f64).sqrt()).floor() as i128 + 1,
            &[1, -1],
        )
    };
    for b in -b_max..=b_max {
        for &s in targets {
            // a² + tb·a + (n_ω b² − s n) = 0
            let c = nw * b * b - s * n;
            let delta = t * t * b * b - 4 * c;
            if !is_square(delta) {
                continue;
            }
            let r = isqrt(delta as u128) as i128;
            for root in [-t * b + r, -t * b - r] {
                if root % 2 != 0 {
                    continue;
                }
                let x = AlgInt::new((root / 2) as i64, b as i64);
                if out.contains(&x) {
                    continue;
                }
                if !field.is_imaginary() {
                    let (s1, s2) = field.sigma(x);
                    if s1.abs() > bound || s2.abs() > bound {
                        continue;
                    }
                }
                out.push(x);
            }
        }
    }
    out.sort();
    let complete = match field.fundamental_unit {
        None => true,
        Some(e) => bound >= field.sigma(e).0 * (n as f64).sqrt(),
    };
    Ok(NormSolutions {
        solutions: out,
        complete,
    })
}
