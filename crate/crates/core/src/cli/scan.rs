//! Figure data sets: one CSV per depth plus a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::{
    curve_rows, default_delta_u, rows_to_csv, svg, Failure, Family, Grid, SHELL_P_ASSUMPTION,
};
use crate::delay::{delay_jump, delay_jump_at_maximum, JumpReport, JUMP_ENERGY};
use crate::levels::{critical_depth, CriticalLevel};
use crate::model::Geometry;
use crate::phase::{phase_curve, EnergyGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig4,
    Fig5,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    fn family(self) -> Family {
        match self {
            Figure::Fig1 | Figure::Fig2 => Family::Well,
            Figure::Fig4 | Figure::Fig5 => Family::Shell,
        }
    }

    fn l(self) -> u32 {
        match self {
            Figure::Fig1 | Figure::Fig4 => 0,
            Figure::Fig2 | Figure::Fig5 => 1,
        }
    }

    fn geometry(self) -> Geometry {
        match self.family() {
            Family::Well => Geometry::Well { radius: 2.0 },
            Family::Shell => Geometry::Shell {
                inner_radius: 5.0,
                outer_radius: 7.0,
            },
        }
    }
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(value_enum)]
    figure: Figure,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "e-min", default_value_t = 5e-5)]
    e_min: f64,
    #[arg(long = "e-max", default_value_t = 1.0)]
    e_max: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Grid::Log)]
    grid: Grid,
    /// Also write one SVG per panel
    #[arg(long)]
    svg: bool,
}

#[derive(Serialize)]
struct DepthEntry {
    file: String,
    side: &'static str,
    pair: usize,
    delta_u: f64,
    depth: f64,
    bound_states: u32,
    rows: usize,
}

#[derive(Serialize)]
struct Convention {
    applied: &'static str,
    delta_u: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    alternate: Option<Alternate>,
    assumptions: Vec<&'static str>,
}

#[derive(Serialize)]
struct Alternate {
    description: &'static str,
    delta_u: [f64; 3],
    jumps_at_default_energy: Vec<JumpReport>,
}

#[derive(Serialize)]
struct Manifest {
    figure: &'static str,
    geometry: Geometry,
    l: u32,
    critical: CriticalLevel,
    grid: EnergyGrid,
    delta_u_convention: Convention,
    depths: Vec<DepthEntry>,
    jumps_at_default_energy: Vec<JumpReport>,
    jumps_at_below_maximum: Vec<JumpReport>,
    versions: Versions,
}

#[derive(Serialize)]
struct Versions {
    crate_version: &'static str,
    specfun: &'static str,
    model: &'static str,
    phase: &'static str,
    levels: &'static str,
    delay: &'static str,
    oracle: &'static str,
    cli: &'static str,
}

impl Versions {
    fn current() -> Self {
        let v = env!("CARGO_PKG_VERSION");
        Self {
            crate_version: v,
            specfun: v,
            model: v,
            phase: v,
            levels: v,
            delay: v,
            oracle: v,
            cli: v,
        }
    }
}

pub(super) fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let fig = args.figure;
    let grid = EnergyGrid {
        e_min: args.e_min,
        e_max: args.e_max,
        points: args.points,
        kind: args.grid.into(),
    };
    grid.validate()?;
    let files = build(fig, &grid, args.svg)?;
    write_into(&args.out, &files)
}

/// Compute every artifact of a figure; nothing is written here.
fn build(fig: Figure, grid: &EnergyGrid, with_svg: bool) -> Result<Vec<(String, String)>, Failure> {
    let geometry = fig.geometry();
    let l = fig.l();
    let critical = critical_depth(&geometry, l)?;
    let offsets = default_delta_u(fig.family(), l).expect("figure groups have defaults");

    let mut files = Vec::new();
    let mut depths = Vec::new();
    let mut delta_series = Vec::new();
    let mut tau_series = Vec::new();
    for (i, &du) in offsets.iter().enumerate() {
        for (side, sign) in [("below", -1.0), ("above", 1.0)] {
            let depth = critical.u_critical + sign * du;
            let potential = geometry.with_depth(depth)?;
            let curve = phase_curve(&potential, l, grid)?;
            let rows = curve_rows(&curve)?;
            let file = format!("{}_pair{}_{side}.csv", fig.name(), i + 1);
            depths.push(DepthEntry {
                file: file.clone(),
                side,
                pair: i + 1,
                delta_u: du,
                depth,
                bound_states: curve.levinson_count,
                rows: rows.len(),
            });
            if with_svg {
                let label = format!("U0 = {depth:.4}");
                delta_series.push(svg::Series {
                    label: label.clone(),
                    points: rows.iter().map(|r| (r.energy, r.delta)).collect(),
                });
                tau_series.push(svg::Series {
                    label,
                    points: rows.iter().map(|r| (r.energy, r.tau)).collect(),
                });
            }
            files.push((file, rows_to_csv(&rows)));
        }
    }

    let jumps_now = offsets
        .iter()
        .map(|&du| delay_jump(&geometry, l, du, JUMP_ENERGY))
        .collect::<crate::Result<Vec<_>>>()?;
    let jumps_max = offsets
        .iter()
        .map(|&du| delay_jump_at_maximum(&geometry, l, du, grid.e_min, grid.e_max))
        .collect::<crate::Result<Vec<_>>>()?;

    let alternate = if l == 0 {
        let doubled = offsets.map(|d| 2.0 * d);
        let jumps = doubled
            .iter()
            .map(|&du| delay_jump(&geometry, l, du, JUMP_ENERGY))
            .collect::<crate::Result<Vec<_>>>()?;
        Some(Alternate {
            description: "offsets read as twice the listed values (first pair quoted as dU = 0.1 for the well); jumps only, no curves",
            delta_u: doubled,
            jumps_at_default_energy: jumps,
        })
    } else {
        None
    };
    let mut assumptions = Vec::new();
    if fig == Figure::Fig4 {
        assumptions.push("first shell s-wave offset taken as 0.0071 (16% of U_s), not 0.0710");
    }
    if fig == Figure::Fig5 {
        assumptions.push(SHELL_P_ASSUMPTION);
    }

    let manifest = Manifest {
        figure: fig.name(),
        geometry,
        l,
        critical,
        grid: *grid,
        delta_u_convention: Convention {
            applied: "U0 = U_c - dU (below) and U_c + dU (above); jump = tau_below - tau_above",
            delta_u: offsets,
            alternate,
            assumptions,
        },
        depths,
        jumps_at_default_energy: jumps_now,
        jumps_at_below_maximum: jumps_max,
        versions: Versions::current(),
    };
    files.push((
        "manifest.json".into(),
        serde_json::to_string_pretty(&manifest).expect("plain struct serializes") + "\n",
    ));

    if with_svg {
        let log_x = grid.kind == crate::phase::GridKind::Log;
        let wave = if l == 0 { "s" } else { "p" };
        files.push((
            format!("{}_delta.svg", fig.name()),
            svg::plot(
                &format!("{} {wave}-wave phase shift", fig.family_label()),
                "E (hartree)",
                "delta (rad)",
                &delta_series,
                log_x,
            ),
        ));
        files.push((
            format!("{}_tau.svg", fig.name()),
            svg::plot(
                &format!("{} {wave}-wave time delay", fig.family_label()),
                "E (hartree)",
                "tau (a.u.)",
                &tau_series,
                log_x,
            ),
        ));
    }
    Ok(files)
}

impl Figure {
    fn family_label(self) -> &'static str {
        match self.family() {
            Family::Well => "square well",
            Family::Shell => "spherical shell",
        }
    }
}

/// Write `files` into `dir`. Everything is staged under temporary names
/// first; on failure the staged files, and the directory if this call made
/// it, are removed.
fn write_into(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    let created_dir = !dir.exists();
    if created_dir {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = fs::remove_file(tmp);
        }
        if created_dir {
            let _ = fs::remove_dir(dir);
        }
    };
    for (name, content) in files {
        let path = dir.join(name);
        let tmp = dir.join(format!(".{name}.partial"));
        if let Err(e) = fs::write(&tmp, content) {
            let _ = fs::remove_file(&tmp);
            cleanup(&staged);
            return Err(Failure::Io(format!("cannot write {}: {e}", path.display())));
        }
        staged.push((tmp, path));
    }
    for (tmp, path) in &staged {
        fs::rename(tmp, path)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
