//! Wigner time delay `τ_l(E) = 2 dδ_l/dE` and its jump across a critical depth.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::levels::critical_depth;
use crate::model::{Geometry, Potential};
use crate::phase::{fold_half_pi, phase_shift};

/// Energy at which the delay jumps are compared by default.
pub const JUMP_ENERGY: f64 = 5e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelaySample {
    pub energy: f64,
    pub tau: f64,
    /// Richardson estimate of the finite-difference truncation error.
    pub fd_error: f64,
}

/// Delay by central differences of the phase, step `h = max(1e-3 E, 1e-9)`,
/// Richardson-extrapolated from steps `h` and `h/2`.
pub fn wigner_delay(potential: &Potential, l: u32, energy: f64) -> Result<DelaySample> {
    ensure_finite("energy", energy)?;
    if energy <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delay needs E > 0, got {energy}"
        )));
    }
    let h = (1e-3 * energy).max(1e-9);
    if energy - h <= 0.0 {
        return Err(Error::StepUnderflow { energy });
    }
    let coarse = central_slope(potential, l, energy, h)?;
    let fine = central_slope(potential, l, energy, 0.5 * h)?;
    Ok(DelaySample {
        energy,
        tau: 2.0 * (4.0 * fine - coarse) / 3.0,
        fd_error: 2.0 * (coarse - fine).abs() / 3.0,
    })
}

fn central_slope(potential: &Potential, l: u32, energy: f64, h: f64) -> Result<f64> {
    let up = phase_shift(potential, l, energy + h)?;
    let down = phase_shift(potential, l, energy - h)?;
    let diff = fold_half_pi(up - down);
    // a fold this large means the phase moves by ~π/2 within 2h
    if diff.abs() > std::f64::consts::FRAC_PI_4 {
        return Err(Error::BranchFold { energy });
    }
    Ok(diff / (2.0 * h))
}

/// Delay samples on the given energies.
pub fn delay_curve(potential: &Potential, l: u32, energies: &[f64]) -> Result<Vec<DelaySample>> {
    use rayon::prelude::*;
    energies
        .par_iter()
        .map(|&e| wigner_delay(potential, l, e))
        .collect()
}

/// Largest delay on `[e_min, e_max]`: a 400-point log scan, then golden-section
/// refinement around the best node.
pub fn delay_maximum(potential: &Potential, l: u32, e_min: f64, e_max: f64) -> Result<DelaySample> {
    if !(e_min > 0.0 && e_max > e_min) {
        return Err(Error::InvalidArgument(format!(
            "maximum search needs 0 < e_min < e_max, got [{e_min}, {e_max}]"
        )));
    }
    const POINTS: usize = 400;
    let ratio = (e_max / e_min).ln() / (POINTS - 1) as f64;
    let nodes: Vec<f64> = (0..POINTS)
        .map(|i| e_min * (ratio * i as f64).exp())
        .collect();
    let samples = delay_curve(potential, l, &nodes)?;
    let best = (0..POINTS)
        .max_by(|&a, &b| samples[a].tau.total_cmp(&samples[b].tau))
        .unwrap();
    if best == 0 || best == POINTS - 1 {
        return Ok(samples[best]);
    }

    // golden section on ln E
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (nodes[best - 1].ln(), nodes[best + 1].ln());
    let tau_at = |t: f64| wigner_delay(potential, l, t.exp()).map(|s| s.tau);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (tau_at(c)?, tau_at(d)?);
    for _ in 0..60 {
        if b - a < 1e-10 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = tau_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = tau_at(d)?;
        }
    }
    wigner_delay(potential, l, (0.5 * (a + b)).exp())
}

/// Least-squares slope of `ln|τ_0|` against `ln E` over `[5e-5, 5e-4]`.
pub fn threshold_divergence_exponent(potential: &Potential) -> Result<f64> {
    const POINTS: usize = 16;
    let (lo, hi) = (5e-5f64, 5e-4f64);
    let mut xs = Vec::with_capacity(POINTS);
    let mut ys = Vec::with_capacity(POINTS);
    let mut sign = 0.0;
    for i in 0..POINTS {
        let e = lo * (hi / lo).powf(i as f64 / (POINTS - 1) as f64);
        let tau = wigner_delay(potential, 0, e)?.tau;
        if tau == 0.0 || (sign != 0.0 && tau.signum() != sign) {
            return Err(Error::FitDegenerate(format!(
                "τ_0 changes sign or vanishes near E = {e}"
            )));
        }
        sign = tau.signum();
        xs.push(e.ln());
        ys.push(tau.abs().ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

/// Least-squares slope of `ln|δ_l|` against `ln k` over `k ∈ [1e-3, 1e-2]`;
/// close to `2l + 1` when there is no state near threshold.
pub fn threshold_phase_exponent(potential: &Potential, l: u32) -> Result<f64> {
    const POINTS: usize = 16;
    let (lo, hi) = (1e-3f64, 1e-2f64);
    let mut xs = Vec::with_capacity(POINTS);
    let mut ys = Vec::with_capacity(POINTS);
    for i in 0..POINTS {
        let k = lo * (hi / lo).powf(i as f64 / (POINTS - 1) as f64);
        let delta = phase_shift(potential, l, 0.5 * k * k)?;
        if delta == 0.0 {
            return Err(Error::FitDegenerate(format!("δ_{l} vanishes at k = {k}")));
        }
        xs.push(k.ln());
        ys.push(delta.abs().ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Delays just below and just above the critical depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpReport {
    pub family: &'static str,
    pub l: u32,
    pub energy: f64,
    pub delta_u: f64,
    pub u_critical: f64,
    pub u_below: f64,
    pub u_above: f64,
    pub tau_below: f64,
    pub tau_above: f64,
    /// `tau_below - tau_above`.
    pub jump: f64,
}

pub fn delay_jump(geometry: &Geometry, l: u32, delta_u: f64, energy: f64) -> Result<JumpReport> {
    let u_critical = critical_depth(geometry, l)?.u_critical;
    jump_at(geometry, l, u_critical, delta_u, |_below| Ok(energy))
}

/// As [`delay_jump`], but evaluated at the energy where the below-critical
/// delay peaks inside `[e_min, e_max]`.
pub fn delay_jump_at_maximum(
    geometry: &Geometry,
    l: u32,
    delta_u: f64,
    e_min: f64,
    e_max: f64,
) -> Result<JumpReport> {
    let u_critical = critical_depth(geometry, l)?.u_critical;
    jump_at(geometry, l, u_critical, delta_u, |below| {
        delay_maximum(below, l, e_min, e_max).map(|s| s.energy)
    })
}

fn jump_at(
    geometry: &Geometry,
    l: u32,
    u_critical: f64,
    delta_u: f64,
    energy_for: impl FnOnce(&Potential) -> Result<f64>,
) -> Result<JumpReport> {
    ensure_finite("delta_u", delta_u)?;
    if delta_u <= 0.0 || u_critical - delta_u <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < ΔU < U_c = {u_critical}, got ΔU = {delta_u}"
        )));
    }
    let (u_below, u_above) = (u_critical - delta_u, u_critical + delta_u);
    let below = geometry.with_depth(u_below)?;
    let above = geometry.with_depth(u_above)?;
    let energy = energy_for(&below)?;
    let tau_below = wigner_delay(&below, l, energy)?.tau;
    let tau_above = wigner_delay(&above, l, energy)?.tau;
    Ok(JumpReport {
        family: geometry.family_name(),
        l,
        energy,
        delta_u,
        u_critical,
        u_below,
        u_above,
        tau_below,
        tau_above,
        jump: tau_below - tau_above,
    })
}
