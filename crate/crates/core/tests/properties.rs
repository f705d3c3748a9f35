use proptest::prelude::*;

use harmanlab::approx::{self, Exponent};
use harmanlab::buchstab::BuchstabTable;
use harmanlab::constants;
use harmanlab::ideals::{self, IdealTable};
use harmanlab::sieve::{self, Multiplier};
use harmanlab::weights::{self, WeightSpec};
use harmanlab::{AlgInt, FieldSpec};
use num_complex::Complex64;

const FIELDS: [i64; 15] = [-1, -2, -3, -7, -11, -19, -43, -67, -163, 3, 7, 11, 19, 31, 43];

fn field() -> impl Strategy<Value = FieldSpec> {
    proptest::sample::select(FIELDS.to_vec()).prop_map(|d| FieldSpec::new(d).unwrap())
}

fn small() -> impl Strategy<Value = AlgInt> {
    (-300i64..300, -300i64..300)
        .prop_filter("nonzero", |&(a, b)| (a, b) != (0, 0))
        .prop_map(|(a, b)| AlgInt::new(a, b))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(k in field(), x in small(), y in small()) {
        prop_assert_eq!(k.norm(k.mul(x, y)), k.norm(x) * k.norm(y));
    }

    #[test]
    fn canonical_associate_is_unit_invariant(k in field(), x in small(), j in 0usize..12, e in -3i64..=3) {
        let units = k.torsion_units();
        let mut y = k.mul(x, units[j % units.len()]);
        if !k.is_imaginary() {
            y = k.mul_unit_power(y, e);
        }
        let c = k.canonical(x);
        prop_assert_eq!(k.canonical(y), c);
        prop_assert_eq!(k.canonical(c), c);
    }

    #[test]
    fn divisor_functions_are_multiplicative(k in field(), x in small(), y in small(), kk in 1u32..=5) {
        prop_assume!(k.coprime(x, y));
        let (fx, fy) = (ideals::factor_element(&k, x).unwrap(), ideals::factor_element(&k, y).unwrap());
        let fxy = ideals::factor_element(&k, k.mul(x, y)).unwrap();
        prop_assert_eq!(ideals::dk(kk, &fxy).unwrap(), ideals::dk(kk, &fx).unwrap() * ideals::dk(kk, &fy).unwrap());
        prop_assert_eq!(ideals::mobius(&fxy), ideals::mobius(&fx) * ideals::mobius(&fy));
    }

    #[test]
    fn omega_distance_is_lattice_periodic(
        d in proptest::sample::select(vec![-1i64, -2, -3, -7, -163]),
        re in -3.0f64..3.0, im in -3.0f64..3.0, a in -20i64..20, b in -20i64..20,
    ) {
        let k = FieldSpec::new(d).unwrap();
        let z = Complex64::new(re, im);
        let shifted = z + k.complex(AlgInt::new(a, b));
        let (d0, d1) = (approx::dist_omega(&k, z).unwrap(), approx::dist_omega(&k, shifted).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-9);
        prop_assert!((0.0..=0.5).contains(&d0));
    }

    #[test]
    fn characters_ignore_the_generator(d in proptest::sample::select(vec![3i64, 7, 11, 19]), x in small(), m in -60i64..60) {
        let k = FieldSpec::new(d).unwrap();
        let a = weights::hecke_lambda(&k, m, x).unwrap();
        let b = weights::hecke_lambda(&k, m, k.mul_unit_power(x, 1)).unwrap();
        let c = weights::hecke_lambda(&k, m, k.neg(x)).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
        prop_assert!((a - b).norm() < 1e-10 && (a - c).norm() < 1e-12);
    }

    #[test]
    fn real_weight_ignores_the_generator(x in small(), n in 10.0f64..5000.0) {
        let k = FieldSpec::new(3).unwrap();
        let w = WeightSpec::real_product(&k, n, 2).unwrap();
        let norm = k.norm(x).unsigned_abs() as u64;
        let a = w.eval(&k, x, norm);
        let b = w.eval(&k, k.mul_unit_power(x, 2), norm);
        // exp(-t) carries a relative error of about t·eps, and t reaches ~650 near underflow
        let tol = 1e-13 * a.ln().abs().max(1.0);
        prop_assert!((a - b).abs() <= tol * a.max(1e-300), "{} {}", a, b);
    }

    #[test]
    fn exponent_round_trips(num in 0u32..500, den in 1u32..500) {
        let e = Exponent::new(num, den).unwrap();
        let back: Exponent = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
        prop_assert!((e.value() - num as f64 / den as f64).abs() < 1e-15);
    }

    #[test]
    fn nu_is_decreasing(a in 0.0f64..0.159, b in 0.0f64..0.159) {
        prop_assume!(a < b);
        prop_assert!(constants::nu_of_eta(a).unwrap() > constants::nu_of_eta(b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Exact Buchstab identity and monotonicity in the sifting level.
    #[test]
    fn sifting_sums_obey_the_identity(d in proptest::sample::select(vec![-1i64, -3, -7, 3, 7]), n in 50u64..4000, seed in any::<u64>()) {
        let k = FieldSpec::new(d).unwrap();
        let t = IdealTable::build(&k, 4000).unwrap();
        let w = WeightSpec::characteristic(n as f64).unwrap();
        let primes = t.primes().partition_point(|q| q.norm <= n) as u32;
        prop_assume!(primes >= 2);
        let q = 1 + (seed % primes as u64) as u32;
        let p = ((seed >> 20) % q as u64) as u32;
        let res = sieve::buchstab_identity_check(&t, Multiplier::unit(), p, q, &w).unwrap();
        prop_assert_eq!(res.exact_residual, Some(0));
        let hi = sieve::phi(&t, Multiplier::unit(), q, &w).unwrap().exact.unwrap();
        let lo = sieve::phi(&t, Multiplier::unit(), p, &w).unwrap().exact.unwrap();
        prop_assert!(lo >= hi);
    }

    #[test]
    fn buchstab_stays_between_its_bounds(u in 1.0f64..20.0) {
        let t = BuchstabTable::new(20.0, 1e-3).unwrap();
        let b = t.eval(u).unwrap();
        prop_assert!(b >= 0.5 - 1e-12 && b <= 1.0);
    }
}
