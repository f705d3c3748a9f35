//! The Buchstab function `ℬ(u)`: `1/u` on `[1, 2]`, `(uℬ(u))' = ℬ(u − 1)` beyond.
//!
//! The table stores `ℬ` on a uniform grid together with the running integral
//! `∫₁^u ℬ`, so that `ℬ(u) = (1 + ∫₁^{u−1} ℬ) / u` can be read off directly.
//! The step divides 1 an even number of times, which keeps every Simpson pair
//! on one side of the kinks at `u = 2, 3, …`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_U_MAX: f64 = 20.0;
pub const DEFAULT_STEP: f64 = 2.5e-4;

#[derive(Clone, Debug, Serialize)]
pub struct BuchstabTable {
    u_max: f64,
    /// grid points per unit length (even)
    per_unit: usize,
    values: Vec<f64>,
    integral: Vec<f64>,
}

impl Default for BuchstabTable {
    fn default() -> Self {
        Self::new(DEFAULT_U_MAX, DEFAULT_STEP).expect("default parameters are valid")
    }
}

impl BuchstabTable {
    /// Builds the grid on `[1, u_max]` with step at most `h`.
    pub fn new(u_max: f64, h: f64) -> Result<Self> {
        if !(1.0..=50.0).contains(&u_max) {
            return Err(Error::precondition(format!("u_max must lie in [1, 50], got {u_max}")));
        }
        if !(h > 0.0 && h <= 1e-3) {
            return Err(Error::precondition(format!("step must lie in (0, 1e-3], got {h}")));
        }
        let mut m = (1.0 / h).ceil() as usize;
        m += m % 2;
        let hh = 1.0 / m as f64;
        let len = ((u_max - 1.0) * m as f64).ceil() as usize + 4;
        let mut values = vec![0.0; len + 1];
        let mut integral = vec![0.0; len + 1];
        let u = |i: usize| 1.0 + i as f64 * hh;
        for (i, v) in values.iter_mut().enumerate().take((m + 1).min(len + 1)) {
            *v = 1.0 / u(i);
        }
        // ℬ(u_i) needs J(u_i − 1) = integral[i − m]; J(k) needs values up to k + 1
        for i in (m + 1)..=len {
            let k = i - m;
            values[i] = (1.0 + integral_at(&values, &mut integral, k, hh)) / u(i);
        }
        for k in 0..=len {
            if k + 1 <= len {
                integral_at(&values, &mut integral, k, hh);
            }
        }
        Ok(BuchstabTable {
            u_max,
            per_unit: m,
            values,
            integral,
        })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        1.0 / self.per_unit as f64
    }

    fn check(&self, u: f64) -> Result<()> {
        if !(1.0..=self.u_max).contains(&u) {
            return Err(Error::precondition(format!(
                "Buchstab function evaluated at u = {u}, outside [1, {}]",
                self.u_max
            )));
        }
        Ok(())
    }

    /// `ℬ(u)`: exact on `[1, 2]`, closed form on `(2, 3]`, integral recursion beyond.
    pub fn eval(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok(if u <= 2.0 {
            1.0 / u
        } else if u <= 3.0 {
            (1.0 + (u - 1.0).ln()) / u
        } else {
            self.recursion(u)
        })
    }

    /// `ℬ(u)` from `(1 + ∫₁^{u−1} ℬ)/u` for any `u ≥ 2`, bypassing the closed form.
    pub fn eval_recursive(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        if u < 2.0 {
            return Err(Error::precondition("the integral recursion starts at u = 2"));
        }
        Ok(self.recursion(u))
    }

    fn recursion(&self, u: f64) -> f64 {
        (1.0 + self.integral_to(u - 1.0)) / u
    }

    /// `∫₁^v ℬ`.
    pub fn integral_to(&self, v: f64) -> f64 {
        let m = self.per_unit;
        let h = 1.0 / m as f64;
        let pos = (v - 1.0) * m as f64;
        let mut k = pos.floor() as usize;
        if k + 1 >= self.values.len() {
            k = self.values.len() - 2;
        }
        let s = pos - k as f64;
        if s == 0.0 {
            return self.integral[k];
        }
        // cubic through four grid points on one side of any integer u
        let start = if k % m == 0 {
            k
        } else if (k + 1) % m == 0 {
            k.saturating_sub(2)
        } else {
            k - 1
        };
        let start = start.min(self.values.len() - 4);
        let f = [
            self.values[start],
            self.values[start + 1],
            self.values[start + 2],
            self.values[start + 3],
        ];
        // integrate the Lagrange cubic from x0 = k − start to x0 + s (node spacing 1)
        let x0 = (k - start) as f64;
        let x1 = x0 + s;
        let nodes = [0.0, 1.0, 2.0, 3.0];
        let mut acc = 0.0;
        for j in 0..4 {
            let others: Vec<f64> = (0..4).filter(|&i| i != j).map(|i| nodes[i]).collect();
            let denom: f64 = others.iter().map(|&o| nodes[j] - o).product();
            // (x − a)(x − b)(x − c) = x³ − e1 x² + e2 x − e3
            let e1 = others[0] + others[1] + others[2];
            let e2 = others[0] * others[1] + others[0] * others[2] + others[1] * others[2];
            let e3 = others[0] * others[1] * others[2];
            let prim = |x: f64| x.powi(4) / 4.0 - e1 * x.powi(3) / 3.0 + e2 * x * x / 2.0 - e3 * x;
            acc += f[j] * (prim(x1) - prim(x0)) / denom;
        }
        self.integral[k] + acc * h
    }

    /// Grid values `(u, ℬ(u))`.
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = self.step();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (1.0 + i as f64 * h, v))
            .take_while(|&(u, _)| u <= self.u_max + 1e-12)
    }

    /// `(u, ℬ(u))` for `u = u0, u0 + step, …, ≤ u1`.
    pub fn dump(&self, u0: f64, u1: f64, step: f64) -> Result<Vec<(f64, f64)>> {
        if !(step > 0.0) || u1 < u0 {
            return Err(Error::precondition("dump needs u0 <= u1 and a positive step"));
        }
        let n = ((u1 - u0) / step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let u = u0 + i as f64 * step;
                self.eval(u).map(|b| (u, b))
            })
            .collect()
    }
}

/// Fills `integral[k]` (and its even predecessor) and returns it.
///
/// Even offsets use composite Simpson; odd offsets add one interval with the
/// three-point rule `h(5f₀ + 8f₁ − f₂)/12`.
fn integral_at(values: &[f64], integral: &mut [f64], k: usize, h: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k % 2 == 0 {
        let simpson = h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
        integral[k] = integral[k - 2] + simpson;
    } else {
        let base = k - 1;
        integral[k] = integral[base] + h * (5.0 * values[base] + 8.0 * values[k] - values[k + 1]) / 12.0;
    }
    integral[k]
}
