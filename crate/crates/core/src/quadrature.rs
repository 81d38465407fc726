//! Fourth-order cumulative quadrature on a uniform mesh.
//!
//! `cumulative(g, h)[p]` approximates `∫_0^{p h} g` from samples
//! `g[0], g[1], …` at spacing `h` (which may be negative). Even `p` use
//! composite Simpson; odd `p ≥ 3` use Simpson up to `p − 3` followed by the
//! three-eighths rule; `p = 1` uses the third-order one-interval formula
//! `h/12 (5 g0 + 8 g1 − g2)`. Every entry is built from earlier ones in O(1).

use num_complex::Complex64;

/// Values that can be linearly combined for quadrature.
pub trait Linear: Clone {
    fn zero_like(&self) -> Self;
    fn axpy(&mut self, a: f64, x: &Self);
}

impl Linear for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Linear for Vec<Complex64> {
    fn zero_like(&self) -> Self {
        vec![Complex64::new(0.0, 0.0); self.len()]
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }
}

fn combo<T: Linear>(base: &T, terms: &[(f64, &T)]) -> T {
    let mut out = base.clone();
    for (a, x) in terms {
        out.axpy(*a, x);
    }
    out
}

pub fn cumulative<T: Linear>(g: &[T], h: f64) -> Vec<T> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let zero = g[0].zero_like();
    let mut out: Vec<T> = Vec::with_capacity(n);
    out.push(zero.clone());
    if n == 1 {
        return out;
    }
    if n == 2 {
        // Trapezoid is the best available with two samples.
        out.push(combo(&zero, &[(0.5 * h, &g[0]), (0.5 * h, &g[1])]));
        return out;
    }
    for p in 1..n {
        let v = if p == 1 {
            combo(
                &zero,
                &[
                    (5.0 * h / 12.0, &g[0]),
                    (8.0 * h / 12.0, &g[1]),
                    (-h / 12.0, &g[2]),
                ],
            )
        } else if p % 2 == 0 {
            let c = h / 3.0;
            combo(
                &out[p - 2],
                &[(c, &g[p - 2]), (4.0 * c, &g[p - 1]), (c, &g[p])],
            )
        } else {
            let c = 3.0 * h / 8.0;
            combo(
                &out[p - 3],
                &[
                    (c, &g[p - 3]),
                    (3.0 * c, &g[p - 2]),
                    (3.0 * c, &g[p - 1]),
                    (c, &g[p]),
                ],
            )
        };
        out.push(v);
    }
    out
}
