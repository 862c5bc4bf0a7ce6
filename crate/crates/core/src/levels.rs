//! Critical depths at which a zero-binding-energy level of a given `l`
//! appears, and the bound-state count used for Levinson normalization.
//!
//! At zero energy the radial function is `r^l` inside `R_in` (or regular at
//! the origin for the well) and `r^{-l-1}` outside `R_o`. Joining these to
//! `B j_l(qr) + C n_l(qr)` in the attractive region gives, with `x = qR_o`
//! and `y = qR_in`,
//!
//! ```text
//! g_l(q) = j_{l+1}(y) n_{l-1}(x) - n_{l+1}(y) j_{l-1}(x) = 0,
//! ```
//!
//! using `j_{-1}(x) = cos x / x`, `n_{-1}(x) = sin x / x`. For the well
//! (`y -> 0`) it reduces to `j_{l-1}(qR_o) = 0`: `cos qR_o = 0` for s-waves,
//! `j_0(qR_o) = 0` for p-waves. `g_l` is the tan-form residual multiplied
//! through by its denominators, so it has no poles and every sign change is
//! a root.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::{Geometry, Potential};
use crate::specfun::{j, n};

const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalLevel {
    pub l: u32,
    pub q_critical: f64,
    #[serde(rename = "U_critical")]
    pub u_critical: f64,
}

impl CriticalLevel {
    fn from_q(l: u32, q: f64) -> Self {
        Self {
            l,
            q_critical: q,
            u_critical: 0.5 * q * q,
        }
    }
}

/// Closed-form critical depth of the square well: `π²/(8R²)` for s,
/// `π²/(2R²)` for p.
pub fn critical_depth_well(l: u32, radius: f64) -> Result<CriticalLevel> {
    check_positive("radius", radius)?;
    let (q, u) = match l {
        0 => (PI / (2.0 * radius), PI * PI / (8.0 * radius * radius)),
        1 => (PI / radius, PI * PI / (2.0 * radius * radius)),
        _ => return Err(Error::UnsupportedOrder(l)),
    };
    Ok(CriticalLevel {
        l,
        q_critical: q,
        u_critical: u,
    })
}

/// Shell threshold condition in its tangent form,
/// `tan x + (cos y + y sin y)/(sin y - y cos y)` for s and
/// `tan x + (3 j_1(y) - y j_0(y))/(3 n_1(y) - y n_0(y))` for p.
///
/// Returns [`Error::Pole`] where `cos x` or the fraction's denominator
/// vanishes.
pub fn shell_critical_residual(
    l: u32,
    q: f64,
    inner_radius: f64,
    outer_radius: f64,
) -> Result<f64> {
    check_positive("q", q)?;
    check_shell(inner_radius, outer_radius)?;
    let (x, y) = (q * outer_radius, q * inner_radius);
    let (sy, cy) = y.sin_cos();
    let (num, den) = match l {
        0 => (cy + y * sy, sy - y * cy),
        1 => (3.0 * j(1, y) - y * j(0, y), 3.0 * n(1, y) - y * n(0, y)),
        _ => return Err(Error::UnsupportedOrder(l)),
    };
    let cx = x.cos();
    if cx == 0.0 || den == 0.0 {
        return Err(Error::Pole { q });
    }
    let f = x.tan() + num / den;
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::Pole { q })
    }
}

/// Smallest critical depth of the shell, by bracket scan in `q` with step
/// `π/(50 R_o)` followed by bisection.
pub fn critical_depth_shell(l: u32, inner_radius: f64, outer_radius: f64) -> Result<CriticalLevel> {
    if l > 1 {
        return Err(Error::UnsupportedOrder(l));
    }
    check_shell(inner_radius, outer_radius)?;
    let q_max = 20.0 / outer_radius;
    let residual = |q: f64| threshold_residual(l, q, Some(inner_radius), outer_radius);
    let step = PI / (50.0 * outer_radius);
    first_root(residual, step, q_max)
        .map(|q| CriticalLevel::from_q(l, q))
        .ok_or(Error::NoRootFound { q_max })
}

/// Critical depth of either family.
pub fn critical_depth(geometry: &Geometry, l: u32) -> Result<CriticalLevel> {
    match *geometry {
        Geometry::Well { radius } => critical_depth_well(l, radius),
        Geometry::Shell {
            inner_radius,
            outer_radius,
        } => critical_depth_shell(l, inner_radius, outer_radius),
    }
}

/// Number of bound states with angular momentum `l`: the count of critical
/// depths at or below the potential's depth.
pub fn count_bound_states(potential: &Potential, l: u32) -> Result<u32> {
    let q0 = (2.0 * potential.depth()).sqrt();
    if q0 == 0.0 {
        return Ok(0);
    }
    match potential {
        Potential::Well(w) => {
            let x0 = q0 * w.radius();
            Ok(match l {
                0 => (x0 / PI + 0.5).floor() as u32,
                1 => (x0 / PI).floor() as u32,
                _ => count_roots(|x| j(l - 1, x), PI / 50.0, x0),
            })
        }
        Potential::Shell(s) => {
            let (rin, ro) = (s.inner_radius(), s.outer_radius());
            let residual = |q: f64| threshold_residual(l, q, Some(rin), ro);
            Ok(count_roots(residual, PI / (50.0 * ro), q0))
        }
    }
}

/// Pole-free zero-energy matching residual `g_l(q)`; `None` for the inner
/// radius selects the square-well limit.
pub fn threshold_residual(l: u32, q: f64, inner_radius: Option<f64>, outer_radius: f64) -> f64 {
    let x = q * outer_radius;
    let (j_prev, n_prev) = if l == 0 {
        (x.cos() / x, x.sin() / x)
    } else {
        (j(l - 1, x), n(l - 1, x))
    };
    match inner_radius {
        None => j_prev,
        Some(rin) => {
            let y = q * rin;
            j(l + 1, y) * n_prev - n(l + 1, y) * j_prev
        }
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= BISECTION_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `f` on `(0, upper]`, in increasing order.
fn scan_roots(f: impl Fn(f64) -> f64, step: f64, upper: f64, stop_at_first: bool) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut a = step.min(upper);
    let mut fa = f(a);
    if fa == 0.0 {
        roots.push(a);
        if stop_at_first {
            return roots;
        }
    }
    while a < upper {
        let b = (a + step).min(upper);
        let fb = f(b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            roots.push(bisect(&f, a, b, fa));
        }
        if stop_at_first && !roots.is_empty() {
            break;
        }
        a = b;
        fa = fb;
    }
    roots
}

fn first_root(f: impl Fn(f64) -> f64, step: f64, upper: f64) -> Option<f64> {
    scan_roots(f, step, upper, true).into_iter().next()
}

fn count_roots(f: impl Fn(f64) -> f64, step: f64, upper: f64) -> u32 {
    scan_roots(f, step, upper, false).len() as u32
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    ensure_finite(name, v)?;
    if v <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )));
    }
    Ok(())
}

fn check_shell(inner_radius: f64, outer_radius: f64) -> Result<()> {
    check_positive("inner radius", inner_radius)?;
    check_positive("outer radius", outer_radius)?;
    if inner_radius >= outer_radius {
        return Err(Error::InvalidArgument(format!(
            "shell requires inner radius < outer radius, got {inner_radius} >= {outer_radius}"
        )));
    }
    Ok(())
}
