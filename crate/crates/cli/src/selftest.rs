//! A quick pass over the main invariants, printed as a table.

use num_complex::Complex64;

use harmanlab::approx::{self, ExtComplex, Exponent};
use harmanlab::buchstab::BuchstabTable;
use harmanlab::constants;
use harmanlab::ideals::{self, IdealTable};
use harmanlab::sieve::{self, Multiplier};
use harmanlab::weights::{self, WeightSpec};
use harmanlab::{AlgInt, FieldSpec, Result};

type Check = fn() -> Result<(bool, String)>;

fn buchstab_values() -> Result<(bool, String)> {
    let t = BuchstabTable::default();
    let b2 = t.eval(2.0)?;
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let u = 2.0 + i as f64 / 100.0;
        worst = worst.max((t.eval_recursive(u)? - (1.0 + (u - 1.0).ln()) / u).abs());
    }
    Ok((b2 == 0.5 && worst <= 1e-8, format!("B(2) = {b2}, recursion drift {worst:.1e}")))
}

fn ideal_counts() -> Result<(bool, String)> {
    let k = FieldSpec::new(-1)?;
    let brute = (-32..=32i64)
        .flat_map(|a| (-32..=32i64).map(move |b| (a, b)))
        .filter(|&(a, b)| (a, b) != (0, 0) && a * a + b * b <= 1000)
        .map(|(a, b)| k.canonical(AlgInt::new(a, b)))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let t = IdealTable::build(&k, 1000)?;
    let per_norm = ideals::norm_coefficients(&k, 1000, 1)?.iter().map(|&a| a as usize).sum::<usize>();
    Ok((
        t.len() == per_norm && t.len() == brute,
        format!("Z[i], N <= 1000: table {}, norm coefficients {per_norm}, lattice {brute}", t.len()),
    ))
}

fn identity_exact() -> Result<(bool, String)> {
    let k = FieldSpec::new(3)?;
    let t = IdealTable::build(&k, 20_000)?;
    let w = WeightSpec::characteristic(20_000.0)?;
    let res = sieve::buchstab_identity_check(&t, Multiplier::unit(), 0, 40, &w)?;
    Ok((res.exact_residual == Some(0), format!("Q(sqrt 3), N = 2e4: residual {:?}", res.exact_residual)))
}

fn landau() -> Result<(bool, String)> {
    let r = ideals::pi_k(&FieldSpec::new(-1)?, 1e5)?;
    Ok(((r.ratio - 1.0).abs() <= 0.12, format!("pi_K(1e5) = {}, ratio {:.4}", r.count, r.ratio)))
}

fn sieve_constant() -> Result<(bool, String)> {
    let t = BuchstabTable::default();
    let a = constants::c_theta(0.25, &t)?.value;
    let b = constants::c_theta(0.27, &t)?.value;
    let c = constants::c_theta(2.0 / 7.0, &t)?.value;
    let rejected = constants::c_theta(0.3, &t).is_err();
    Ok((
        a == 1.0 && b < a && c < b && rejected,
        format!("C(1/4) = {a}, C(0.27) = {b:.8}, C(2/7) = {c:.8}"),
    ))
}

fn nu_map() -> Result<(bool, String)> {
    let v = constants::nu_of_eta(0.0)?;
    Ok((v == 7.0 / 44.0, format!("nu(0) = {v}")))
}

fn mellin() -> Result<(bool, String)> {
    let k = FieldSpec::new(3)?;
    let v = weights::mellin_phi(&k, 0.0, Complex64::new(1.0, 0.0), 1)?;
    let exact = 1.0 / (12.0 * std::f64::consts::PI);
    let q = weights::mellin_phi_quadrature(&k, 0.2, Complex64::new(1.3, 0.4), 2)?;
    let c = weights::mellin_phi(&k, 0.2, Complex64::new(1.3, 0.4), 2)?;
    Ok((
        (v.re - exact).abs() < 1e-15 && (q - c).norm() < 1e-8,
        format!("phi_0(1) = {:.15}, quadrature gap {:.1e}", v.re, (q - c).norm()),
    ))
}

fn characters() -> Result<(bool, String)> {
    let k = FieldSpec::new(3)?;
    let g = AlgInt::new(7, 3);
    let u = k.fundamental_unit().expect("real field");
    let a = weights::hecke_lambda(&k, 5, g)?;
    let b = weights::hecke_lambda(&k, 5, k.mul(g, u))?;
    Ok(((a - b).norm() < 1e-12, format!("unit drift {:.1e}", (a - b).norm())))
}

fn records() -> Result<(bool, String)> {
    let k = FieldSpec::new(-1)?;
    let alpha = ExtComplex::parse("3.14159265358979323846264338327950288", "2.71828182845904523536028747135266250")?;
    let s = approx::record_search(&k, &alpha, 20_000, Exponent::SEVEN_44)?;
    Ok((
        !s.records.is_empty() && s.records.iter().all(|r| r.verified),
        format!("{} records up to norm 2e4", s.records.len()),
    ))
}

fn surgery() -> Result<(bool, String)> {
    let f = sieve::surgery_fit(100, 0)?;
    Ok((f.fitted_constant <= 5.0, format!("fitted c = {:.4}", f.fitted_constant)))
}

const CHECKS: [(&str, Check); 10] = [
    ("buchstab", buchstab_values),
    ("ideal table", ideal_counts),
    ("buchstab identity", identity_exact),
    ("prime ideal count", landau),
    ("C(theta)", sieve_constant),
    ("nu(eta)", nu_map),
    ("mellin transform", mellin),
    ("characters", characters),
    ("record search", records),
    ("cosmetic surgery", surgery),
];

/// Prints one line per check; true iff all pass.
pub fn run() -> bool {
    let mut all = true;
    println!("{:<20} {:<6} detail", "check", "result");
    for (name, check) in CHECKS {
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, e.to_string()),
        };
        all &= ok;
        println!("{:<20} {:<6} {detail}", name, if ok { "pass" } else { "FAIL" });
    }
    all
}
