//! Spherical Bessel functions of the first kind `j_l` and second kind `n_l`
//! (the Neumann convention `n_0(x) = -cos x / x`), with their derivatives.
//!
//! Orders `l <= 2` use the trigonometric closed forms. Higher orders use
//! upward recurrence for `n_l`, which is stable, and Miller's downward
//! recurrence for `j_l`, normalized against `j_0` or `j_1`. Small arguments
//! of `j_l` are evaluated from the power series to avoid the cancellation in
//! the closed forms.
//!
//! The checked entry points (`sph_j`, `sph_n`, ...) validate their input; the
//! crate-internal `j`, `n`, `jp`, `np` skip validation for use in inner loops
//! where the arguments are known to be positive and finite.

use crate::error::{ensure_finite, Error, Result};

/// `j_l(x)`. `x = 0` is allowed and returns the limit value.
pub fn sph_j(l: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sph_j argument must be non-negative, got {x}"
        )));
    }
    Ok(j(l, x))
}

/// `n_l(x)` for `x > 0`.
pub fn sph_n(l: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("sph_n requires x > 0, got {x}")));
    }
    Ok(n(l, x))
}

/// `d j_l(x) / dx`.
pub fn sph_j_prime(l: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sph_j_prime argument must be non-negative, got {x}"
        )));
    }
    Ok(jp(l, x))
}

/// `d n_l(x) / dx`.
pub fn sph_n_prime(l: u32, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!(
            "sph_n_prime requires x > 0, got {x}"
        )));
    }
    Ok(np(l, x))
}

fn uses_series(l: u32, x: f64) -> bool {
    x < 0.1 * (l as f64 + 1.0)
}

pub(crate) fn j(l: u32, x: f64) -> f64 {
    if uses_series(l, x) {
        return j_series(l, x);
    }
    let (s, c) = x.sin_cos();
    match l {
        0 => s / x,
        1 => (s / x - c) / x,
        2 => {
            let x2 = x * x;
            (3.0 / x2 - 1.0) * s / x - 3.0 * c / x2
        }
        _ => j_miller(l, x),
    }
}

pub(crate) fn n(l: u32, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let n0 = -c / x;
    let n1 = (-c / x - s) / x;
    match l {
        0 => n0,
        1 => n1,
        2 => {
            let x2 = x * x;
            (1.0 - 3.0 / x2) * c / x - 3.0 * s / x2
        }
        _ => {
            let (mut prev, mut cur) = (n0, n1);
            for m in 1..l {
                let next = (2 * m + 1) as f64 / x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

pub(crate) fn jp(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 1 { 1.0 / 3.0 } else { 0.0 };
    }
    if l == 0 {
        -j(1, x)
    } else {
        j(l - 1, x) - (l + 1) as f64 / x * j(l, x)
    }
}

pub(crate) fn np(l: u32, x: f64) -> f64 {
    if l == 0 {
        -n(1, x)
    } else {
        n(l - 1, x) - (l + 1) as f64 / x * n(l, x)
    }
}

/// `x^l / (2l+1)!! * sum_m (-x^2/2)^m / (m! (2l+3)(2l+5)...(2l+2m+1))`.
fn j_series(l: u32, x: f64) -> f64 {
    let mut lead = 1.0;
    for m in 0..l {
        lead *= x / (2 * m + 3) as f64;
    }
    // x^l / (2l+1)!! accumulated without forming x^l separately
    let half_x2 = -0.5 * x * x;
    let mut term = lead;
    let mut sum = lead;
    for m in 1..60 {
        term *= half_x2 / (m as f64 * (2 * l + 2 * m + 1) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn j_miller(l: u32, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let top = (l as f64).max(x);
    let start = (top + 20.0 + 4.0 * top.sqrt()).ceil() as u32;
    let mut upper = 0.0; // f_{m+1}
    let mut cur = 1e-30; // f_m
    let mut at_l = 0.0;
    for m in (1..=start).rev() {
        let lower = (2 * m + 1) as f64 / x * cur - upper;
        upper = cur;
        cur = lower;
        if m - 1 == l {
            at_l = cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            upper /= RESCALE;
            at_l /= RESCALE;
        }
    }
    // cur = f_0, upper = f_1
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = (s / x - c) / x;
    if j0.abs() >= j1.abs() {
        at_l * (j0 / cur)
    } else {
        at_l * (j1 / upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_values() {
        assert!(sph_j(0, PI).unwrap().abs() < 1e-14);
        assert_eq!(sph_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(sph_j(3, 0.0).unwrap(), 0.0);
        let x: f64 = 0.01;
        assert_relative_eq!(
            sph_j(1, x).unwrap(),
            x / 3.0 - x.powi(3) / 30.0,
            max_relative = 1e-9
        );
        assert!(sph_n(0, PI / 2.0).unwrap().abs() < 1e-14);
        assert_relative_eq!(sph_n(0, PI).unwrap(), 1.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn n1_diverges_as_inverse_square() {
        for &x in &[1e-3, 1e-5, 1e-7] {
            assert_relative_eq!(sph_n(1, x).unwrap() * x * x, -1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn derivative_identities() {
        assert!((sph_j_prime(0, PI).unwrap() + sph_j(1, PI).unwrap()).abs() < 1e-13);
        assert!((sph_n_prime(0, PI / 2.0).unwrap() + sph_n(1, PI / 2.0).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        let x = 1.7;
        let fd = (j(2, x + h) - j(2, x - h)) / (2.0 * h);
        assert!((fd - jp(2, x)).abs() < 1e-9);
        let fd = (n(2, x + h) - n(2, x - h)) / (2.0 * h);
        assert!((fd - np(2, x)).abs() < 1e-8);
    }

    #[test]
    fn miller_agrees_with_upward_recurrence_at_large_argument() {
        // upward recurrence for j is stable once x > l
        for &x in &[12.0, 25.0, 49.0] {
            let (s, c) = f64::sin_cos(x);
            let (mut prev, mut cur) = (s / x, (s / x - c) / x);
            for m in 1..10u32 {
                let next = (2 * m + 1) as f64 / x * cur - prev;
                prev = cur;
                cur = next;
            }
            assert_relative_eq!(j(10, x), cur, max_relative = 1e-10);
        }
    }

    #[test]
    fn series_and_closed_form_meet_at_switch() {
        for l in 0..=2u32 {
            let x = 0.1 * (l as f64 + 1.0);
            let below = j(l, x * (1.0 - 1e-12));
            let above = j(l, x);
            assert_relative_eq!(below, above, max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(sph_n(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sph_n_prime(1, -1.0), Err(Error::Domain(_))));
        assert!(matches!(sph_j(0, f64::NAN), Err(Error::InvalidArgument(_))));
        assert!(matches!(sph_j(0, -1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            sph_n(0, f64::INFINITY),
            Err(Error::InvalidArgument(_))
        ));
    }
}
