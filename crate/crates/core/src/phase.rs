//! Partial-wave phase shifts by logarithmic-derivative matching, and
//! continuous phase curves over energy grids.
//!
//! The matching routines return the tangent as a pair `(A, B)` with
//! `tan δ = A / B` so that `δ = ±π/2` is an ordinary value rather than an
//! overflow. Interior radial functions are written for `R(r) = P(r)/r`;
//! the exterior solution is `j_l(kr) cos δ - n_l(kr) sin δ`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::levels::count_bound_states;
use crate::model::{Potential, ScatterState, ShellWell, SquareWell};
use crate::specfun::{j, jp, n, np};

const MAX_REFINEMENT_LEVELS: u32 = 20;

/// `tan δ = numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPair {
    pub numerator: f64,
    pub denominator: f64,
}

impl TangentPair {
    fn checked(numerator: f64, denominator: f64, context: impl FnOnce() -> String) -> Result<Self> {
        if !(numerator.is_finite() && denominator.is_finite())
            || (numerator.abs() < 1e-300 && denominator.abs() < 1e-300)
        {
            return Err(Error::NumericalDegeneracy(context()));
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn phase(&self) -> f64 {
        principal_phase(*self)
    }
}

/// Square-well matching at `r = R_o`.
///
/// With the interior `j_l(qr)` and `γ = q j_l'(qR_o) / j_l(qR_o)`, continuity
/// of the logarithmic derivative gives
/// `tan δ = (k j_l'(kR_o) - γ j_l(kR_o)) / (k n_l'(kR_o) - γ n_l(kR_o))`;
/// both components are multiplied through by `j_l(qR_o)`.
pub fn match_well(well: &SquareWell, l: u32, energy: f64) -> Result<TangentPair> {
    let ScatterState { k, q, .. } = ScatterState::new(energy, well.depth())?;
    let r = well.radius();
    let (jq, jpq) = (j(l, q * r), q * jp(l, q * r));
    let (kr, jk, jpk) = (k * r, j(l, k * r), k * jp(l, k * r));
    let (nk, npk) = (n(l, kr), k * np(l, kr));
    TangentPair::checked(jpk * jq - jk * jpq, npk * jq - nk * jpq, || {
        format!("square well l = {l}, E = {energy}")
    })
}

/// Coefficients `(c_j, c_n)` of the shell-region solution
/// `c_j j_l(qr) + c_n n_l(qr)` that joins `j_l(kr)` smoothly at `r = R_in`.
/// Scaled so the larger coefficient has unit magnitude.
fn shell_region_coefficients(l: u32, k: f64, q: f64, inner_radius: f64) -> (f64, f64) {
    let (ky, qy) = (k * inner_radius, q * inner_radius);
    let (jk, jpk) = (j(l, ky), k * jp(l, ky));
    let c_j = q * jk * np(l, qy) - jpk * n(l, qy);
    let c_n = -(q * jk * jp(l, qy) - jpk * j(l, qy));
    let scale = c_j.abs().max(c_n.abs());
    if scale > 0.0 && scale.is_finite() {
        (c_j / scale, c_n / scale)
    } else {
        (c_j, c_n)
    }
}

/// `D_l(R_in) = c_n / c_j`: the admixture of `n_l(qr)` in the shell region.
///
/// Infinite where `c_j` vanishes; [`match_shell`] works with the coefficient
/// pair and never forms this ratio.
pub fn shell_d(l: u32, k: f64, q: f64, inner_radius: f64) -> Result<f64> {
    for (name, v) in [("k", k), ("q", q), ("inner radius", inner_radius)] {
        ensure_finite(name, v)?;
        if v <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let (c_j, c_n) = shell_region_coefficients(l, k, q, inner_radius);
    Ok(c_n / c_j)
}

/// Shell matching: `j_l(kr)` inside `R_in`, `j_l(qr) + D_l n_l(qr)` in the
/// shell, matched again at `R_o` to the exterior combination.
pub fn match_shell(shell: &ShellWell, l: u32, energy: f64) -> Result<TangentPair> {
    let ScatterState { k, q, .. } = ScatterState::new(energy, shell.depth())?;
    let (c_j, c_n) = shell_region_coefficients(l, k, q, shell.inner_radius());
    let ro = shell.outer_radius();
    let qx = q * ro;
    let f = c_j * j(l, qx) + c_n * n(l, qx);
    let fp = q * (c_j * jp(l, qx) + c_n * np(l, qx));
    let kx = k * ro;
    let (jk, jpk, nk, npk) = (j(l, kx), k * jp(l, kx), n(l, kx), k * np(l, kx));
    TangentPair::checked(fp * jk - f * jpk, fp * nk - f * npk, || {
        format!("shell l = {l}, E = {energy}")
    })
}

pub fn tangent_pair(potential: &Potential, l: u32, energy: f64) -> Result<TangentPair> {
    match potential {
        Potential::Well(w) => match_well(w, l, energy),
        Potential::Shell(s) => match_shell(s, l, energy),
    }
}

/// Principal phase shift in `(-π/2, π/2]`.
pub fn phase_shift(potential: &Potential, l: u32, energy: f64) -> Result<f64> {
    tangent_pair(potential, l, energy).map(principal_phase)
}

/// Two-argument arctangent folded into `(-π/2, π/2]`.
pub fn principal_phase(pair: TangentPair) -> f64 {
    fold_half_pi(pair.numerator.atan2(pair.denominator))
}

/// Reduce an angle modulo π into `(-π/2, π/2]`.
pub fn fold_half_pi(angle: f64) -> f64 {
    let mut a = angle - PI * (angle / PI).round();
    if a <= -FRAC_PI_2 {
        a += PI;
    } else if a > FRAC_PI_2 {
        a -= PI;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Log,
}

/// Energy window and initial sampling of a phase curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub points: usize,
    pub kind: GridKind,
}

impl Default for EnergyGrid {
    fn default() -> Self {
        Self {
            e_min: 5e-5,
            e_max: 1.0,
            points: 400,
            kind: GridKind::Log,
        }
    }
}

impl EnergyGrid {
    pub fn log(e_min: f64, e_max: f64, points: usize) -> Self {
        Self {
            e_min,
            e_max,
            points,
            kind: GridKind::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("e_min", self.e_min)?;
        ensure_finite("e_max", self.e_max)?;
        if !(self.e_min > 0.0 && self.e_min < self.e_max) {
            return Err(Error::InvalidArgument(format!(
                "energy window needs 0 < e_min < e_max, got [{}, {}]",
                self.e_min, self.e_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidArgument(
                "energy grid needs at least 2 points".into(),
            ));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.points - 1) as f64;
        let mut nodes: Vec<f64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.kind {
                    GridKind::Linear => self.e_min + t * (self.e_max - self.e_min),
                    GridKind::Log => (self.e_min.ln() + t * (self.e_max / self.e_min).ln()).exp(),
                }
            })
            .collect();
        // pin the endpoints exactly
        nodes[0] = self.e_min;
        *nodes.last_mut().unwrap() = self.e_max;
        Ok(nodes)
    }

    fn midpoint(&self, a: f64, b: f64) -> f64 {
        match self.kind {
            GridKind::Linear => 0.5 * (a + b),
            GridKind::Log => (a * b).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub energy: f64,
    pub principal: f64,
    pub continuous: f64,
}

/// Continuous phase `δ_l(E)` normalized so that the low-energy end sits
/// near `n π`, `n` being the number of bound states with this `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCurve {
    pub l: u32,
    pub potential: Potential,
    pub points: Vec<PhasePoint>,
    pub levinson_count: u32,
    /// Multiple of π added after unwrapping from the high-energy anchor.
    pub branch_shift: i64,
}

impl PhaseCurve {
    pub fn energies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.energy).collect()
    }

    pub fn low_end(&self) -> &PhasePoint {
        &self.points[0]
    }

    pub fn high_end(&self) -> &PhasePoint {
        self.points.last().unwrap()
    }

    /// `δ(E_min) - n π`.
    pub fn levinson_residual(&self) -> f64 {
        self.low_end().continuous - self.levinson_count as f64 * PI
    }
}

/// Build a continuous phase curve.
///
/// Principal phases are evaluated on the initial grid, intervals whose phase
/// step exceeds π/4 are bisected, the curve is unwrapped downward from
/// `e_max`, and finally shifted by a multiple of π so the `e_min` end is the
/// value closest to `n π`.
pub fn phase_curve(potential: &Potential, l: u32, grid: &EnergyGrid) -> Result<PhaseCurve> {
    if grid.points < 16 {
        return Err(Error::InvalidArgument(format!(
            "phase curve needs at least 16 initial points, got {}",
            grid.points
        )));
    }
    let nodes = grid.nodes()?;
    let initial: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&e| phase_shift(potential, l, e).map(|p| (e, p)))
        .collect::<Result<_>>()?;

    let mut samples = Vec::with_capacity(initial.len());
    samples.push(initial[0]);
    for pair in initial.windows(2) {
        refine(potential, l, grid, pair[0], pair[1], 0, &mut samples)?;
    }

    let mut continuous = vec![0.0; samples.len()];
    let last = samples.len() - 1;
    continuous[last] = samples[last].1;
    for i in (0..last).rev() {
        continuous[i] = continuous[i + 1] + fold_half_pi(samples[i].1 - samples[i + 1].1);
    }

    let levinson_count = count_bound_states(potential, l)?;
    let target = levinson_count as f64 * PI;
    let branch_shift = ((target - continuous[0]) / PI).round() as i64;
    let shift = branch_shift as f64 * PI;

    let points = samples
        .iter()
        .zip(&continuous)
        .map(|(&(energy, principal), &c)| PhasePoint {
            energy,
            principal,
            continuous: c + shift,
        })
        .collect();
    Ok(PhaseCurve {
        l,
        potential: *potential,
        points,
        levinson_count,
        branch_shift,
    })
}

/// Append the refined samples of `(a, b]` to `out`.
fn refine(
    potential: &Potential,
    l: u32,
    grid: &EnergyGrid,
    a: (f64, f64),
    b: (f64, f64),
    level: u32,
    out: &mut Vec<(f64, f64)>,
) -> Result<()> {
    if fold_half_pi(b.1 - a.1).abs() < FRAC_PI_4 {
        out.push(b);
        return Ok(());
    }
    if level >= MAX_REFINEMENT_LEVELS {
        return Err(Error::RefinementLimit {
            levels: MAX_REFINEMENT_LEVELS,
            energy: a.0,
        });
    }
    let e = grid.midpoint(a.0, b.0);
    let mid = (e, phase_shift(potential, l, e)?);
    refine(potential, l, grid, a, mid, level + 1, out)?;
    refine(potential, l, grid, mid, b, level + 1, out)
}
