//! Elementwise real-valued multiset operations.
//!
//! Intersection and union are the elementwise minimum and maximum, the
//! complement is negation, and the common product combines both through the
//! conjoint sign. Binary operations require both arguments on the same grid.
//!
//! The sign convention is `sign(0) = +1` everywhere.

use crate::error::Result;
use crate::signal::{Sign, SignSeries, Signal};

/// Multiset complement, `-f`.
pub fn complement(f: &Signal) -> Signal {
    f.map_finite(|v| -v)
}

/// `+1` where `f >= 0`, `-1` elsewhere.
pub fn sign_fn(f: &Signal) -> SignSeries {
    SignSeries::from_parts(
        f.dt(),
        f.t0(),
        f.samples().iter().map(|&v| Sign::of(v)).collect(),
    )
}

/// Product of the two sign functions.
pub fn conjoint_sign(f: &Signal, g: &Signal) -> Result<SignSeries> {
    f.require_same_grid(g)?;
    let values = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(&a, &b)| Sign::of(a).product(Sign::of(b)))
        .collect();
    Ok(SignSeries::from_parts(f.dt(), f.t0(), values))
}

/// Elementwise minimum.
pub fn intersection(f: &Signal, g: &Signal) -> Result<Signal> {
    f.require_same_grid(g)?;
    Ok(zip_finite(f, g, min))
}

/// Elementwise maximum.
pub fn union(f: &Signal, g: &Signal) -> Result<Signal> {
    f.require_same_grid(g)?;
    Ok(zip_finite(f, g, max))
}

pub fn absolute(f: &Signal) -> Signal {
    f.map_finite(f64::abs)
}

/// Restores signedness: `a * s` elementwise. Inverse of [`absolute`] under
/// the same sign series.
pub fn signify(a: &Signal, s: &SignSeries) -> Result<Signal> {
    s.require_grid_of(a)?;
    let samples = a
        .samples()
        .iter()
        .zip(s.values())
        .map(|(&v, &sg)| match sg {
            Sign::Pos => v,
            Sign::Neg => -v,
        })
        .collect();
    Ok(Signal::from_parts(a.dt(), a.t0(), samples))
}

/// Elementwise common product, `s_fg * min(|f|, |g|)`.
pub fn common_product(f: &Signal, g: &Signal) -> Result<Signal> {
    f.require_same_grid(g)?;
    Ok(zip_finite(f, g, common_product_at))
}

/// Common product of two scalars.
#[inline]
pub fn common_product_at(a: f64, b: f64) -> f64 {
    let m = min(a.abs(), b.abs());
    match Sign::of(a).product(Sign::of(b)) {
        Sign::Pos => m,
        Sign::Neg => -m,
    }
}

// Plain comparisons, `a` wins ties. Inputs are never NaN.
#[inline]
fn min(a: f64, b: f64) -> f64 {
    if a <= b {
        a
    } else {
        b
    }
}

#[inline]
fn max(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

fn zip_finite(f: &Signal, g: &Signal, op: impl Fn(f64, f64) -> f64) -> Signal {
    let samples = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(&a, &b)| op(a, b))
        .collect();
    Signal::from_parts(f.dt(), f.t0(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(1.0, 0.0, v.to_vec()).unwrap()
    }

    fn signs(s: &SignSeries) -> Vec<i8> {
        s.values().iter().map(|&v| v as i8).collect()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            complement(&sig(&[1.0, -2.0, 0.0])).samples(),
            &[-1.0, 2.0, 0.0]
        );
        assert_eq!(complement(&sig(&[0.0, 0.0])).samples(), &[0.0, 0.0]);
    }

    #[test]
    fn sign_of_zero_is_positive() {
        assert_eq!(signs(&sign_fn(&sig(&[3.0, 0.0, -0.5]))), vec![1, 1, -1]);
        assert_eq!(signs(&sign_fn(&sig(&[-0.0]))), vec![1]);
    }

    #[test]
    fn conjoint_examples() {
        let s = conjoint_sign(&sig(&[1.0, -1.0]), &sig(&[1.0, 1.0])).unwrap();
        assert_eq!(signs(&s), vec![1, -1]);
        let s = conjoint_sign(&sig(&[0.0, -2.0]), &sig(&[-3.0, -4.0])).unwrap();
        assert_eq!(signs(&s), vec![-1, 1]);
    }

    #[test]
    fn min_max_examples() {
        let f = sig(&[1.0, -2.0]);
        let g = sig(&[0.0, -1.0]);
        assert_eq!(intersection(&f, &g).unwrap().samples(), &[0.0, -2.0]);
        assert_eq!(union(&f, &g).unwrap().samples(), &[1.0, -1.0]);
    }

    #[test]
    fn absolute_and_signify_examples() {
        assert_eq!(
            absolute(&sig(&[-1.0, 2.0, 0.0])).samples(),
            &[1.0, 2.0, 0.0]
        );
        let s = SignSeries::new(1.0, 0.0, vec![Sign::Neg, Sign::Pos]).unwrap();
        assert_eq!(
            signify(&sig(&[1.0, 2.0]), &s).unwrap().samples(),
            &[-1.0, 2.0]
        );
    }

    #[test]
    fn common_product_sign_table() {
        let cp = |a: f64, b: f64| common_product(&sig(&[a]), &sig(&[b])).unwrap().samples()[0];
        assert_eq!(cp(3.0, 5.0), 3.0);
        assert_eq!(cp(3.0, -5.0), -3.0);
        assert_eq!(cp(-3.0, -5.0), 3.0);
        assert_eq!(cp(0.0, -5.0), 0.0);
        assert_eq!(cp(-5.0, 0.0), 0.0);
    }

    #[test]
    fn shape_mismatch_everywhere() {
        let f = sig(&[1.0, 2.0]);
        let g = sig(&[1.0]);
        let h = Signal::new(0.5, 0.0, vec![1.0, 2.0]).unwrap();
        assert!(matches!(intersection(&f, &g), Err(Error::ShapeMismatch(_))));
        assert!(matches!(union(&f, &h), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            common_product(&f, &h),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            conjoint_sign(&f, &g),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            signify(&f, &sign_fn(&g)),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
