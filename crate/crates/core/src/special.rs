//! Complex Gamma function (Lanczos approximation, g = 7, nine terms).

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)`; returns `None` at the poles `z = 0, −1, −2, …`.
pub fn gamma(z: Complex64) -> Option<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return None;
    }
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1 − z) = π / sin(πz)
        let other = gamma(Complex64::new(1.0, 0.0) - z)?;
        return Some(Complex64::new(PI, 0.0) / ((z * PI).sin() * other));
    }
    Some(ln_gamma_right(z).exp())
}

/// `log Γ(z)` for `Re z ≥ 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}
