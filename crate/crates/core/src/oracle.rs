//! Independent phase shifts from direct integration of the radial equation
//! `P'' = [l(l+1)/r² + 2U(r) - k²] P`.
//!
//! Each constant-potential region is integrated with the Numerov scheme on
//! its own uniform grid, so `R_in` and `R_o` are always nodes. At a region
//! boundary the outgoing `(P, P')` is taken from the left grid and the next
//! region is restarted from a Taylor step. The innermost region starts from
//! the regular power series `P ∝ r^{l+1}`. The phase is read off by matching
//! `P` at two exterior radii a quarter wavelength apart to
//! `kr [j_l(kr) cos δ - n_l(kr) sin δ]`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Potential, ScatterState};
use crate::phase::{fold_half_pi, phase_shift};
use crate::specfun::{j, n};

/// Agreement required between the last two step halvings.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-8;

/// Radial function sampled on the integration nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_max: f64,
    /// Nominal step inside the potential; exterior steps may be longer.
    pub step: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

/// One region with constant potential.
#[derive(Debug, Clone, Copy)]
struct Region {
    start: f64,
    end: f64,
    /// `2 V - k²`, constant inside the region.
    offset: f64,
    step: f64,
}

struct Setup {
    regions: Vec<Region>,
    k: f64,
    /// Exterior radius for the first matching point.
    r_match: f64,
}

fn setup(potential: &Potential, energy: f64, step_scale: f64) -> Result<Setup> {
    let ScatterState { k, q, .. } = ScatterState::new(energy, potential.depth())?;
    let ro = potential.outer_radius();
    let quarter = PI / (2.0 * k);
    let r_max = ro + 10.0 / k;
    let inner_step = (2.0 * PI / q / 400.0).min(0.01) * step_scale;
    let outer_step = inner_step.max((2.0 * PI / k / 400.0).min(0.05) * step_scale);

    let mut edges = vec![0.0];
    edges.extend(potential.discontinuities());
    edges.push(r_max);
    let regions = edges
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let exterior = w[0] >= ro;
            Region {
                start: w[0],
                end: w[1],
                offset: 2.0 * potential.value(mid) - k * k,
                step: if exterior { outer_step } else { inner_step },
            }
        })
        .collect();
    Ok(Setup {
        regions,
        k,
        r_match: r_max - quarter,
    })
}

fn centrifugal(l: u32) -> f64 {
    (l * (l + 1)) as f64
}

/// Regular solution near the origin for a constant offset `g`:
/// `r^{l+1} Σ a_m r^{2m}`, `a_m = g a_{m-1} / (2m (2m + 2l + 1))`.
fn origin_series(l: u32, g: f64, r: f64) -> f64 {
    let r2 = r * r;
    let mut term = r.powi(l as i32 + 1);
    let mut sum = term;
    for m in 1..80 {
        term *= g * r2 / ((2 * m) as f64 * (2 * m + 2 * l as usize + 1) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `P(r0 + h)` from `P(r0)`, `P'(r0)` with `f = c/r² + g`, to fifth order.
fn taylor_step(l: u32, g: f64, r0: f64, p: f64, dp: f64, h: f64) -> f64 {
    let c = centrifugal(l);
    let f0 = c / (r0 * r0) + g;
    let f1 = -2.0 * c / r0.powi(3);
    let f2 = 6.0 * c / r0.powi(4);
    let f3 = -24.0 * c / r0.powi(5);
    let d2 = f0 * p;
    let d3 = f1 * p + f0 * dp;
    let d4 = f2 * p + 2.0 * f1 * dp + f0 * d2;
    let d5 = f3 * p + 3.0 * f2 * dp + 3.0 * f1 * d2 + f0 * d3;
    p + h * (dp + h * (d2 / 2.0 + h * (d3 / 6.0 + h * (d4 / 24.0 + h * d5 / 120.0))))
}

/// Numerov propagation through all regions; `visit` sees every node `(r, P)`.
fn propagate(l: u32, setup: &Setup, mut visit: impl FnMut(f64, f64)) {
    let c = centrifugal(l);
    let mut boundary: Option<(f64, f64)> = None; // (P, P') at region start
    let n_regions = setup.regions.len();
    for (index, region) in setup.regions.iter().enumerate() {
        let width = region.end - region.start;
        let steps = ((width / region.step).ceil() as usize).max(3);
        let h = width / steps as f64;
        let h2 = h * h;
        let f = |r: f64| c / (r * r) + region.offset;
        let exterior = index + 1 == n_regions;

        // nodes r_i = start + i h; (y_prev, y_cur) = (y_{i-1}, y_i)
        let (mut i, mut y_prev, mut y_cur) = match boundary {
            None => {
                let (y1, y2) = (
                    origin_series(l, region.offset, h),
                    origin_series(l, region.offset, 2.0 * h),
                );
                visit(0.0, 0.0);
                visit(h, y1);
                visit(2.0 * h, y2);
                (2usize, y1, y2)
            }
            Some((p, dp)) => {
                let y1 = taylor_step(l, region.offset, region.start, p, dp, h);
                visit(region.start + h, y1);
                (1usize, p, y1)
            }
        };
        let mut f_prev = f(region.start + (i - 1) as f64 * h);
        let mut f_cur = f(region.start + i as f64 * h);
        // interior regions take one step past their end for the boundary derivative
        let last_index = if exterior { steps } else { steps + 1 };
        while i < last_index {
            let r_next = region.start + (i + 1) as f64 * h;
            let f_next = f(r_next);
            let w_prev = (1.0 - h2 * f_prev / 12.0) * y_prev;
            let w_cur = (1.0 - h2 * f_cur / 12.0) * y_cur;
            let w_next = 2.0 * w_cur - w_prev + h2 * f_cur * y_cur;
            let y_next = w_next / (1.0 - h2 * f_next / 12.0);
            if i == steps {
                // y_prev = P(end - h), y_cur = P(end), y_next = P(end + h)
                let dp =
                    (y_next - y_prev) / (2.0 * h) - h * (f_next * y_next - f_prev * y_prev) / 12.0;
                boundary = Some((y_cur, dp));
            } else {
                let r = if i + 1 == steps { region.end } else { r_next };
                visit(r, y_next);
            }
            y_prev = y_cur;
            y_cur = y_next;
            f_prev = f_cur;
            f_cur = f_next;
            i += 1;
        }
    }
}

fn extract_phase(l: u32, k: f64, (r1, p1): (f64, f64), (r2, p2): (f64, f64)) -> f64 {
    let (x1, x2) = (k * r1, k * r2);
    let (j1, n1) = (x1 * j(l, x1), x1 * n(l, x1));
    let (j2, n2) = (x2 * j(l, x2), x2 * n(l, x2));
    fold_half_pi((p2 * j1 - p1 * j2).atan2(p2 * n1 - p1 * n2))
}

fn phase_at_scale(potential: &Potential, l: u32, energy: f64, scale: f64) -> Result<f64> {
    let setup = setup(potential, energy, scale)?;
    let mut first: Option<(f64, f64)> = None;
    let mut latest = (0.0, 0.0);
    let r_match = setup.r_match;
    propagate(l, &setup, |r, p| {
        if first.is_none() && r >= r_match {
            first = Some((r, p));
        }
        latest = (r, p);
    });
    let first = first.ok_or_else(|| {
        Error::NumericalDegeneracy(format!("exterior grid too short at E = {energy}"))
    })?;
    Ok(extract_phase(l, setup.k, first, latest))
}

/// Phase shift (mod π, in `(-π/2, π/2]`) from Numerov integration. The
/// nominal step is halved twice; the last two levels must agree to
/// [`CONVERGENCE_TOLERANCE`] and are combined by Richardson extrapolation.
pub fn numerov_phase(potential: &Potential, l: u32, energy: f64) -> Result<f64> {
    let mid = phase_at_scale(potential, l, energy, 0.5)?;
    let fine = phase_at_scale(potential, l, energy, 0.25)?;
    let change = fold_half_pi(fine - mid);
    if change.abs() > CONVERGENCE_TOLERANCE || !change.is_finite() {
        return Err(Error::NonConvergence { energy, change });
    }
    Ok(fold_half_pi(fine + change / 15.0))
}

/// Single Numerov evaluation at a nominal step multiplier; `1.0` is the
/// coarsest level used by [`numerov_phase`].
pub fn numerov_phase_with_step(
    potential: &Potential,
    l: u32,
    energy: f64,
    step_scale: f64,
) -> Result<f64> {
    if !(step_scale > 0.0 && step_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step scale must be positive, got {step_scale}"
        )));
    }
    phase_at_scale(potential, l, energy, step_scale)
}

/// The radial function on every node, for inspection and plotting.
pub fn integrate_radial(potential: &Potential, l: u32, energy: f64) -> Result<RadialGrid> {
    let setup = setup(potential, energy, 1.0)?;
    let step = setup.regions[0].step;
    let r_max = setup.regions.last().unwrap().end;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    propagate(l, &setup, |r, p| {
        radii.push(r);
        values.push(p);
    });
    Ok(RadialGrid {
        r_max,
        step,
        radii,
        values,
    })
}

/// Worst `|δ_analytic - δ_numerov|` (mod π) over `energies`.
pub fn oracle_sweep(potential: &Potential, l: u32, energies: &[f64]) -> Result<f64> {
    let diffs: Vec<f64> = energies
        .par_iter()
        .map(|&e| {
            let analytic = phase_shift(potential, l, e)?;
            let numeric = numerov_phase(potential, l, e)?;
            Ok(fold_half_pi(analytic - numeric).abs())
        })
        .collect::<Result<_>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ShellWell, SquareWell};

    #[test]
    fn free_wave_has_zero_phase() {
        let free: Potential = SquareWell::new(0.0, 2.0).unwrap().into();
        for l in 0..=1 {
            for &e in &[1e-4, 0.1] {
                let d = numerov_phase(&free, l, e).unwrap();
                assert!(d.abs() < 1e-9, "l={l} E={e} δ={d}");
            }
        }
    }

    #[test]
    fn origin_series_matches_sine() {
        // l = 0, g = -q²: P = sin(qr)/q
        let q: f64 = 0.7;
        for &r in &[0.01, 0.5, 3.0] {
            let p = origin_series(0, -q * q, r);
            assert!((p - (q * r).sin() / q).abs() < 1e-13);
        }
    }

    #[test]
    fn taylor_step_matches_riccati_bessel() {
        // l = 1, free: P = x j_1(x) with x = kr
        let k: f64 = 0.8;
        let p = |r: f64| {
            let x = k * r;
            x.sin() / x - x.cos()
        };
        let dp = |r: f64| {
            let x = k * r;
            k * (x.cos() / x - x.sin() / (x * x) + x.sin())
        };
        let (r0, h) = (2.0, 0.01);
        let next = taylor_step(1, -k * k, r0, p(r0), dp(r0), h);
        assert!((next - p(r0 + h)).abs() < 1e-13);
    }

    #[test]
    fn well_phase_agrees_with_matching() {
        let w: Potential = SquareWell::new(0.258, 2.0).unwrap().into();
        let a = phase_shift(&w, 0, 0.01).unwrap();
        let b = numerov_phase(&w, 0, 0.01).unwrap();
        assert!(fold_half_pi(a - b).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn shell_phase_agrees_with_matching() {
        let s: Potential = ShellWell::new(0.0511, 5.0, 7.0).unwrap().into();
        let a = phase_shift(&s, 0, 0.01).unwrap();
        let b = numerov_phase(&s, 0, 0.01).unwrap();
        assert!(fold_half_pi(a - b).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn radial_grid_reaches_asymptotic_region() {
        let s: Potential = ShellWell::new(0.05, 5.0, 7.0).unwrap().into();
        let g = integrate_radial(&s, 0, 0.01).unwrap();
        let k = (0.02f64).sqrt();
        assert!(g.r_max >= 7.0 + 10.0 / k - 1e-9);
        let q = (0.02f64 + 0.1).sqrt();
        assert!(g.step <= 2.0 * PI / q / 40.0);
        assert_eq!(g.radii.len(), g.values.len());
        assert!((g.radii.last().unwrap() - g.r_max).abs() < 1e-9);
    }
}
