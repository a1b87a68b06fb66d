//! Weighted L^p norms of sampled fields.

use num_complex::Complex64;

use super::grid::{Field, Mask, MagnitudeField};
use crate::error::{require, Result};

/// Scalar types whose modulus can be integrated.
pub trait Modulus: Copy {
    fn modulus(&self) -> f64;
}

impl Modulus for f64 {
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl Modulus for Complex64 {
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// `(sum |F_i|^p w_i dx dw)^{1/p}` over the selected nodes.
///
/// Missing `weight` means `w = 1`; missing `mask` means every node.
pub fn lp_field_norm<T: Modulus>(
    field: &Field<T>,
    p: f64,
    weight: Option<&MagnitudeField>,
    mask: Option<&Mask>,
) -> Result<f64> {
    Ok(lp_field_norm_pow(field, p, weight, mask)?.powf(1.0 / p))
}

/// The integral `sum |F_i|^p w_i dx dw` without the final root.
pub fn lp_field_norm_pow<T: Modulus>(
    field: &Field<T>,
    p: f64,
    weight: Option<&MagnitudeField>,
    mask: Option<&Mask>,
) -> Result<f64> {
    require(p >= 1.0 && p.is_finite(), "p", "must lie in [1, inf)")?;
    let grid = field.grid();
    if let Some(w) = weight {
        grid.check_same(w.grid(), "weight grid differs from field grid")?;
    }
    if let Some(m) = mask {
        grid.check_same(m.grid(), "mask grid differs from field grid")?;
    }
    let mut acc = 0.0;
    for (idx, v) in field.values().iter().enumerate() {
        if mask.is_some_and(|m| !m.contains(idx)) {
            continue;
        }
        let w = weight.map_or(1.0, |w| w.values()[idx]);
        let m = v.modulus();
        if m == 0.0 || w == 0.0 {
            continue;
        }
        acc += m.powf(p) * w;
    }
    Ok(acc * grid.cell_area())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::grid::TfGrid;
    use crate::tf::signal::GaussianSum;
    use crate::tf::transform::magnitude_field;

    #[test]
    fn zero_field_has_zero_norm() {
        let g = TfGrid::square(1.0, 5).unwrap();
        let f = MagnitudeField::constant(g, 0.0);
        assert_eq!(lp_field_norm(&f, 2.0, None, None).unwrap(), 0.0);
        assert!(lp_field_norm(&f, 0.5, None, None).is_err());
    }

    #[test]
    fn gaussian_tail_outside_ball() {
        let g = TfGrid::square(5.0, 401).unwrap();
        let mag = magnitude_field(&GaussianSum::gaussian(), &g);
        let r = 1.0;
        let outside = Mask::disc(g, 0.0, 0.0, r).complement();
        let v = lp_field_norm(&mag, 2.0, None, Some(&outside)).unwrap();
        let expected = (-std::f64::consts::PI * r * r).exp().sqrt();
        assert!((v / expected - 1.0).abs() < 0.02, "{v} vs {expected}");
    }

    #[test]
    fn rejects_mismatched_mask() {
        let g = TfGrid::square(1.0, 5).unwrap();
        let h = TfGrid::square(1.0, 6).unwrap();
        let f = MagnitudeField::constant(g, 1.0);
        assert!(lp_field_norm(&f, 2.0, None, Some(&Mask::full(h))).is_err());
    }
}
