//! Potentials and the kinematic relations between exterior and interior
//! wavenumbers. Atomic units throughout: energies in hartree, lengths in bohr.
//! Depths are stored as positive numbers; the potential inside the attractive
//! region is `-depth`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Spherical square well: `U(r) = -depth` for `r < radius`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SquareWellFields")]
pub struct SquareWell {
    depth: f64,
    radius: f64,
}

impl SquareWell {
    pub fn new(depth: f64, radius: f64) -> Result<Self> {
        check_depth(depth)?;
        check_length("radius", radius)?;
        Ok(Self { depth, radius })
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn value(&self, r: f64) -> f64 {
        if r < self.radius {
            -self.depth
        } else {
            0.0
        }
    }
}

/// Spherical shell: `U(r) = -depth` only for `inner_radius < r < outer_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShellWellFields")]
pub struct ShellWell {
    depth: f64,
    inner_radius: f64,
    outer_radius: f64,
}

impl ShellWell {
    pub fn new(depth: f64, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        check_depth(depth)?;
        check_length("inner radius", inner_radius)?;
        check_length("outer radius", outer_radius)?;
        if inner_radius >= outer_radius {
            return Err(Error::InvalidArgument(format!(
                "shell requires inner radius < outer radius, got {inner_radius} >= {outer_radius}"
            )));
        }
        Ok(Self {
            depth,
            inner_radius,
            outer_radius,
        })
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn value(&self, r: f64) -> f64 {
        if r > self.inner_radius && r < self.outer_radius {
            -self.depth
        } else {
            0.0
        }
    }
}

#[derive(Deserialize)]
struct SquareWellFields {
    depth: f64,
    radius: f64,
}

impl TryFrom<SquareWellFields> for SquareWell {
    type Error = Error;

    fn try_from(f: SquareWellFields) -> Result<Self> {
        SquareWell::new(f.depth, f.radius)
    }
}

#[derive(Deserialize)]
struct ShellWellFields {
    depth: f64,
    inner_radius: f64,
    outer_radius: f64,
}

impl TryFrom<ShellWellFields> for ShellWell {
    type Error = Error;

    fn try_from(f: ShellWellFields) -> Result<Self> {
        ShellWell::new(f.depth, f.inner_radius, f.outer_radius)
    }
}

/// Either of the two supported potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Potential {
    Well(SquareWell),
    Shell(ShellWell),
}

impl Potential {
    pub fn depth(&self) -> f64 {
        match self {
            Potential::Well(w) => w.depth(),
            Potential::Shell(s) => s.depth(),
        }
    }

    pub fn outer_radius(&self) -> f64 {
        match self {
            Potential::Well(w) => w.radius(),
            Potential::Shell(s) => s.outer_radius(),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Potential::Well(w) => w.value(r),
            Potential::Shell(s) => s.value(r),
        }
    }

    pub fn geometry(&self) -> Geometry {
        match *self {
            Potential::Well(w) => Geometry::Well { radius: w.radius() },
            Potential::Shell(s) => Geometry::Shell {
                inner_radius: s.inner_radius(),
                outer_radius: s.outer_radius(),
            },
        }
    }

    /// Boundaries where the potential jumps, in increasing order.
    pub fn discontinuities(&self) -> Vec<f64> {
        match self {
            Potential::Well(w) => vec![w.radius()],
            Potential::Shell(s) => vec![s.inner_radius(), s.outer_radius()],
        }
    }
}

impl From<SquareWell> for Potential {
    fn from(w: SquareWell) -> Self {
        Potential::Well(w)
    }
}

impl From<ShellWell> for Potential {
    fn from(s: ShellWell) -> Self {
        Potential::Shell(s)
    }
}

/// Depth-free shape of a potential. Combined with a depth it yields a
/// [`Potential`]; on its own it fixes the critical depths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Geometry {
    Well {
        radius: f64,
    },
    Shell {
        inner_radius: f64,
        outer_radius: f64,
    },
}

impl Geometry {
    pub fn with_depth(&self, depth: f64) -> Result<Potential> {
        Ok(match *self {
            Geometry::Well { radius } => SquareWell::new(depth, radius)?.into(),
            Geometry::Shell {
                inner_radius,
                outer_radius,
            } => ShellWell::new(depth, inner_radius, outer_radius)?.into(),
        })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Geometry::Well { .. } => "well",
            Geometry::Shell { .. } => "shell",
        }
    }
}

/// Continuum kinematics at kinetic energy `E`: `k = sqrt(2E)`, `q^2 = k^2 + 2 U0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterState {
    pub energy: f64,
    pub k: f64,
    pub q: f64,
}

impl ScatterState {
    pub fn new(energy: f64, depth: f64) -> Result<Self> {
        ensure_finite("energy", energy)?;
        if energy <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "scattering energy must be positive, got {energy}"
            )));
        }
        let q = interior_wavenumber(energy, depth)?;
        Ok(Self {
            energy,
            k: (2.0 * energy).sqrt(),
            q,
        })
    }
}

/// Bound-state kinematics: binding energy `kappa^2 / 2`, `q^2 = 2 U0 - kappa^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundKinematics {
    pub kappa: f64,
    pub q: f64,
}

impl BoundKinematics {
    pub fn new(kappa: f64, depth: f64) -> Result<Self> {
        Ok(Self {
            kappa,
            q: bound_interior_wavenumber(kappa, depth)?,
        })
    }

    pub fn binding_energy(&self) -> f64 {
        0.5 * self.kappa * self.kappa
    }
}

/// `q = sqrt(2E + 2U0)`.
pub fn interior_wavenumber(energy: f64, depth: f64) -> Result<f64> {
    ensure_finite("energy", energy)?;
    ensure_finite("depth", depth)?;
    if energy < 0.0 || depth < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "interior wavenumber needs E >= 0 and U0 >= 0, got E = {energy}, U0 = {depth}"
        )));
    }
    Ok((2.0 * energy + 2.0 * depth).sqrt())
}

/// `q = sqrt(2U0 - kappa^2)`; zero binding (`kappa = 0`) gives the
/// threshold wavenumber used by all critical-depth conditions.
pub fn bound_interior_wavenumber(kappa: f64, depth: f64) -> Result<f64> {
    ensure_finite("kappa", kappa)?;
    ensure_finite("depth", depth)?;
    if kappa < 0.0 || depth < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bound kinematics needs kappa >= 0 and U0 >= 0, got kappa = {kappa}, U0 = {depth}"
        )));
    }
    let q2 = 2.0 * depth - kappa * kappa;
    // kappa = sqrt(2 U0) lands on the threshold up to rounding
    if q2 < -4.0 * f64::EPSILON * 2.0 * depth {
        return Err(Error::Domain(format!(
            "kappa^2 = {} exceeds 2 U0 = {}",
            kappa * kappa,
            2.0 * depth
        )));
    }
    Ok(q2.max(0.0).sqrt())
}

fn check_depth(depth: f64) -> Result<()> {
    ensure_finite("depth", depth)?;
    if depth < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "depth is stored as a non-negative number, got {depth}"
        )));
    }
    Ok(())
}

fn check_length(name: &str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {value}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn interior_wavenumber_examples() {
        assert_eq!(interior_wavenumber(0.0, 0.5).unwrap(), 1.0);
        assert_eq!(interior_wavenumber(0.5, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            interior_wavenumber(5e-5, 0.308).unwrap(),
            (1e-4f64 + 0.616).sqrt(),
            max_relative = 1e-15
        );
        assert!(interior_wavenumber(-1.0, 0.1).is_err());
        assert!(interior_wavenumber(1.0, -0.1).is_err());
    }

    #[test]
    fn bound_interior_wavenumber_examples() {
        assert_relative_eq!(
            bound_interior_wavenumber(0.0, 0.044).unwrap(),
            0.088f64.sqrt(),
            max_relative = 1e-15
        );
        let u0: f64 = 0.3;
        assert_eq!(
            bound_interior_wavenumber((2.0 * u0).sqrt(), u0).unwrap(),
            0.0
        );
        assert_relative_eq!(
            bound_interior_wavenumber(0.0, PI * PI / 32.0).unwrap(),
            PI / 4.0,
            max_relative = 1e-15
        );
        assert!(matches!(
            bound_interior_wavenumber(1.0, 0.1),
            Err(Error::Domain(_))
        ));
        let b = BoundKinematics::new(0.2, 0.1).unwrap();
        assert_relative_eq!(b.binding_energy(), 0.02, max_relative = 1e-15);
    }

    #[test]
    fn potential_profiles() {
        let w = SquareWell::new(0.3, 2.0).unwrap();
        assert_eq!(w.value(1.0), -0.3);
        assert_eq!(w.value(2.5), 0.0);
        let s = ShellWell::new(0.044, 5.0, 7.0).unwrap();
        assert_eq!(s.value(4.0), 0.0);
        assert_eq!(s.value(6.0), -0.044);
        assert_eq!(s.value(8.0), 0.0);
        assert!(ShellWell::new(0.1, 7.0, 5.0).is_err());
        assert!(SquareWell::new(0.1, 0.0).is_err());
        assert!(SquareWell::new(-0.1, 1.0).is_err());
    }

    #[test]
    fn scatter_state_relation() {
        let s = ScatterState::new(0.01, 0.2).unwrap();
        assert_relative_eq!(s.q * s.q, s.k * s.k + 0.4, max_relative = 1e-14);
        assert!(s.q > s.k);
        assert!(ScatterState::new(0.0, 0.2).is_err());
    }

    #[test]
    fn potential_json_round_trip() {
        let p: Potential = ShellWell::new(0.05, 5.0, 7.0).unwrap().into();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"family\":\"shell\""));
        let back: Potential = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"family":"shell","depth":0.1,"inner_radius":7.0,"outer_radius":5.0}"#;
        assert!(serde_json::from_str::<Potential>(bad).is_err());
    }

    proptest! {
        #[test]
        fn free_particle_round_trip(e in 0.0f64..10.0) {
            prop_assert_eq!(interior_wavenumber(e, 0.0).unwrap(), (2.0 * e).sqrt());
        }

        #[test]
        fn interior_wavenumber_is_increasing(e in 0.0f64..5.0, u in 0.0f64..5.0, de in 1e-6f64..1.0) {
            let base = interior_wavenumber(e, u).unwrap();
            prop_assert!(interior_wavenumber(e + de, u).unwrap() > base);
            prop_assert!(interior_wavenumber(e, u + de).unwrap() > base);
        }
    }
}
