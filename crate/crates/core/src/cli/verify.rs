//! Invariant suite behind `verify`.

use serde::Serialize;

use super::{default_delta_u, Family};
use crate::delay::{delay_jump, threshold_phase_exponent, JumpReport, JUMP_ENERGY};
use crate::levels::critical_depth;
use crate::model::{Geometry, Potential, ShellWell, SquareWell};
use crate::oracle::oracle_sweep;
use crate::phase::{fold_half_pi, phase_curve, phase_shift, EnergyGrid};
use crate::specfun;

pub type BesselFn = fn(u32, f64) -> crate::Result<f64>;

/// The spherical Bessel functions the Wronskian check is run against.
#[derive(Clone, Copy)]
pub struct BesselSet {
    pub j: BesselFn,
    pub n: BesselFn,
    pub j_prime: BesselFn,
    pub n_prime: BesselFn,
}

impl Default for BesselSet {
    fn default() -> Self {
        Self {
            j: specfun::sph_j,
            n: specfun::sph_n,
            j_prime: specfun::sph_j_prime,
            n_prime: specfun::sph_n_prime,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub passed: bool,
    pub quick: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, limit: f64, worst: crate::Result<(f64, bool)>) -> Check {
    match worst {
        Ok((worst, ok)) => Check {
            name,
            passed: ok && worst.is_finite() && worst <= limit,
            worst,
            limit,
            error: None,
        },
        Err(e) => Check {
            name,
            passed: false,
            worst: f64::NAN,
            limit,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_suite(quick: bool, bessel: &BesselSet) -> Report {
    let checks = vec![
        check(
            "wronskian",
            1e-10,
            wronskian(bessel, quick).map(|w| (w, true)),
        ),
        check(
            "threshold_law",
            0.05,
            threshold_law(quick).map(|w| (w, true)),
        ),
        check("levinson", 1e-3, levinson(quick)),
        check(
            "shell_well_limit",
            1e-8,
            shell_well_limit(quick).map(|w| (w, true)),
        ),
        check("oracle", 1e-6, oracle(quick).map(|w| (w, true))),
        check("jump_structure", 0.0, jump_structure(quick)),
    ];
    Report {
        passed: checks.iter().all(|c| c.passed),
        quick,
        checks,
    }
}

fn log_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Worst relative defect of `j_l n_l' - j_l' n_l = 1/x²` over `l ≤ l_max`
pub fn max_wronskian_defect(bessel: &BesselSet, l_max: u32, xs: &[f64]) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for l in 0..=l_max {
        for &x in xs {
            let w = (bessel.j)(l, x)? * (bessel.n_prime)(l, x)?
                - (bessel.j_prime)(l, x)? * (bessel.n)(l, x)?;
            let defect = (w * x * x - 1.0).abs();
            worst = worst.max(if defect.is_nan() {
                f64::INFINITY
            } else {
                defect
            });
        }
    }
    Ok(worst)
}

fn wronskian(bessel: &BesselSet, quick: bool) -> crate::Result<f64> {
    let (l_max, n) = if quick { (6, 60) } else { (10, 400) };
    max_wronskian_defect(bessel, l_max, &log_nodes(1e-3, 50.0, n))
}

fn reference_geometry(family: Family) -> Geometry {
    match family {
        Family::Well => Geometry::Well { radius: 2.0 },
        Family::Shell => Geometry::Shell {
            inner_radius: 5.0,
            outer_radius: 7.0,
        },
    }
}

/// `(family, l, depth, above critical)` for every reference configuration.
fn configurations(quick: bool) -> crate::Result<Vec<(Geometry, u32, f64, bool)>> {
    let mut out = Vec::new();
    for family in [Family::Well, Family::Shell] {
        let g = reference_geometry(family);
        for l in 0..=1 {
            let uc = critical_depth(&g, l)?.u_critical;
            let offsets = default_delta_u(family, l).expect("reference groups have defaults");
            let take = if quick { 1 } else { offsets.len() };
            for &du in &offsets[..take] {
                out.push((g, l, uc - du, false));
                out.push((g, l, uc + du, true));
            }
        }
    }
    Ok(out)
}

fn threshold_law(quick: bool) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for (g, l, depth, above) in configurations(quick)? {
        if above {
            continue;
        }
        let slope = threshold_phase_exponent(&g.with_depth(depth)?, l)?;
        worst = worst.max((slope - (2 * l + 1) as f64).abs());
    }
    Ok(worst)
}

/// The unwrapped phase must reach `n π` at the threshold without any extra
/// branch shift, starting from the principal value at high energy.
fn levinson(quick: bool) -> crate::Result<(f64, bool)> {
    let grid = EnergyGrid::log(1e-12, 50.0, if quick { 200 } else { 800 });
    let mut worst = 0.0f64;
    let mut unshifted = true;
    for (g, l, depth, above) in configurations(quick)? {
        let curve = phase_curve(&g.with_depth(depth)?, l, &grid)?;
        worst = worst.max(curve.levinson_residual().abs());
        unshifted &= curve.branch_shift == 0 && curve.levinson_count == above as u32;
    }
    Ok((worst, unshifted))
}

fn shell_well_limit(quick: bool) -> crate::Result<f64> {
    let energies = log_nodes(5e-5, 1.0, if quick { 20 } else { 100 });
    let mut worst = 0.0f64;
    for (l, depth) in [(0, 0.258), (0, 0.358), (1, 1.134), (1, 1.334)] {
        let well: Potential = SquareWell::new(depth, 2.0)?.into();
        let shell: Potential = ShellWell::new(depth, 1e-6, 2.0)?.into();
        for &e in &energies {
            let d = fold_half_pi(phase_shift(&shell, l, e)? - phase_shift(&well, l, e)?);
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Representative configurations: each family both below and above
/// critical, covering l = 0 and 1.
pub fn oracle_configurations() -> crate::Result<Vec<(Potential, u32)>> {
    let well = Geometry::Well { radius: 2.0 };
    let shell = reference_geometry(Family::Shell);
    let uc = |g: &Geometry, l| critical_depth(g, l).map(|c| c.u_critical);
    Ok(vec![
        (well.with_depth(uc(&well, 0)? - 0.05)?, 0),
        (well.with_depth(uc(&well, 1)? + 0.1)?, 1),
        (shell.with_depth(uc(&shell, 0)? + 0.0071)?, 0),
        (shell.with_depth(uc(&shell, 1)? - 0.0117)?, 1),
    ])
}

fn oracle(quick: bool) -> crate::Result<f64> {
    let energies = log_nodes(5e-5, 1.0, if quick { 8 } else { 100 });
    let mut worst = 0.0f64;
    for (p, l) in oracle_configurations()? {
        worst = worst.max(oracle_sweep(&p, l, &energies)?);
    }
    Ok(worst)
}

/// Zero when every jump has the right signs, decreases with the offset, and
/// the shell jump exceeds the well jump at each pair index; otherwise the
/// number of violations.
fn jump_structure(quick: bool) -> crate::Result<(f64, bool)> {
    let mut violations = 0usize;
    let mut table: Vec<Vec<JumpReport>> = Vec::new();
    for family in [Family::Well, Family::Shell] {
        let g = reference_geometry(family);
        for l in 0..=1 {
            let offsets = default_delta_u(family, l).expect("reference groups have defaults");
            let take = if quick { 2 } else { 3 };
            let group = offsets[..take]
                .iter()
                .map(|&du| delay_jump(&g, l, du, JUMP_ENERGY))
                .collect::<crate::Result<Vec<_>>>()?;
            for r in &group {
                if !(r.tau_below > 0.0 && r.tau_above < 0.0) {
                    violations += 1;
                }
            }
            for w in group.windows(2) {
                if !(w[0].jump > w[1].jump) {
                    violations += 1;
                }
            }
            table.push(group);
        }
    }
    // table order: well s, well p, shell s, shell p
    for (well, shell) in [(0, 2), (1, 3)] {
        for (a, b) in table[well].iter().zip(&table[shell]) {
            if !(b.jump > a.jump) {
                violations += 1;
            }
        }
    }
    Ok((violations as f64, violations == 0))
}
