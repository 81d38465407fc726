//! The frequency-restricted product
//! `P_c(u1, u2)^(ξ, η) = ∫ χ_{|ξ1| ≤ c|ξ − ξ1|} û1(ξ1, η1) û2(ξ − ξ1, η − η1)`.
//!
//! On the grid the restriction only involves the x mode numbers, so `u1` is
//! split into shells of equal `|j1|`; each shell multiplies the part of `u2`
//! with `|j1| ≤ c|j2|` in physical space. Inputs and output are dealiased,
//! which makes the discrete product exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    dealias_mask, forward_transform, inverse_transform, PhysicalField, SpectralField,
};
use crate::norms::SpaceTimeField;

fn restricted(f: &SpectralField, keep: impl Fn(usize) -> bool) -> SpectralField {
    let g = *f.grid();
    let mut out = f.clone();
    for i in 0..g.nx() {
        if !keep(i) {
            for k in 0..g.ny() {
                out.coeffs_mut()[g.index(i, k)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

pub fn paraproduct(u1: &SpectralField, u2: &SpectralField, c: f64) -> Result<SpectralField> {
    u1.check_grid(u2)?;
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "paraproduct cutoff must be positive, got {c}"
        )));
    }
    let g = *u1.grid();
    let mask = dealias_mask(&g);
    let (mut a, mut b) = (u1.clone(), u2.clone());
    mask.apply(&mut a);
    mask.apply(&mut b);

    let mut acc = PhysicalField::zeros(g);
    let mut add_product = |x: &SpectralField, y: &SpectralField| {
        let (px, py) = (inverse_transform(x), inverse_transform(y));
        for ((o, p), q) in acc
            .values_mut()
            .iter_mut()
            .zip(px.values())
            .zip(py.values())
        {
            *o += p * q;
        }
    };
    if c.is_infinite() {
        add_product(&a, &b);
    } else {
        let jmax = (g.nx() / 2) as i64;
        for shell in 0..=jmax {
            let part = restricted(&a, |i| g.mode_x(i).abs() == shell);
            if part.coeffs().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            let partner = restricted(&b, |i| shell as f64 <= c * g.mode_x(i).abs() as f64);
            add_product(&part, &partner);
        }
    }
    let mut out = forward_transform(&acc);
    mask.apply(&mut out);
    Ok(out)
}

/// Slice-wise [`paraproduct`]; returns the raw slices, whose `ξ = 0` column
/// may carry round-off.
pub fn paraproduct_space_time(
    u1: &SpaceTimeField,
    u2: &SpaceTimeField,
    c: f64,
) -> Result<Vec<SpectralField>> {
    if u1.nt() != u2.nt() || u1.window() != u2.window() {
        return Err(Error::GridMismatch);
    }
    u1.slices()
        .iter()
        .zip(u2.slices())
        .map(|(a, b)| paraproduct(a, b, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use std::f64::consts::PI;

    fn mode(g: Grid2D, j: i64) -> SpectralField {
        SpectralField::single_mode(g, j, 0, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn low_high_pair_is_kept_and_equal_pair_removed() {
        let g = Grid2D::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let kept = paraproduct(&mode(g, 1), &mode(g, 6), 1.0 / 3.0).unwrap();
        let full = paraproduct(&mode(g, 1), &mode(g, 6), f64::INFINITY).unwrap();
        assert!(kept.l2_norm() > 0.0);
        assert!(kept.sub(&full).unwrap().l2_norm() < 1e-14 * full.l2_norm());
        let gone = paraproduct(&mode(g, 3), &mode(g, 3), 1.0 / 3.0).unwrap();
        assert!(gone.l2_norm() < 1e-15);
    }

    #[test]
    fn unrestricted_product_is_the_square() {
        let g = Grid2D::new(32, 32, 2.0 * PI, 2.0 * PI).unwrap();
        let u = forward_transform(&PhysicalField::from_fn(g, |x, y| {
            (x + 2.0 * y).sin() + 0.5 * (3.0 * x).cos()
        }));
        let p = inverse_transform(&paraproduct(&u, &u, f64::INFINITY).unwrap());
        for i in 0..g.nx() {
            for k in 0..g.ny() {
                let (x, y) = (g.x(i), g.y(k));
                let v = (x + 2.0 * y).sin() + 0.5 * (3.0 * x).cos();
                assert!((p.values()[g.index(i, k)].re - v * v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn halves_recombine_into_the_full_product() {
        // No |j1| = |j2| coincidences, so the two halves partition the product.
        let g = Grid2D::new(32, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let u1 = forward_transform(&PhysicalField::from_fn(g, |x, y| {
            (2.0 * x - y).cos() + (5.0 * x).sin()
        }));
        let u2 = forward_transform(&PhysicalField::from_fn(g, |x, y| {
            (x + y).sin() - (4.0 * x + 2.0 * y).cos()
        }));
        let a = paraproduct(&u1, &u2, 1.0).unwrap();
        let b = paraproduct(&u2, &u1, 1.0).unwrap();
        let full = paraproduct(&u1, &u2, f64::INFINITY).unwrap();
        let sum = a.add_scaled(&b, Complex64::new(1.0, 0.0)).unwrap();
        assert!(sum.sub(&full).unwrap().l2_norm() < 1e-13 * full.l2_norm());
    }
}
