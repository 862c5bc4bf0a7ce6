//! Acceptance criteria. `acceptance_criteria` prints one PASS/FAIL line per
//! criterion and fails if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;

use shallow_delay::delay::{
    delay_jump, delay_jump_at_maximum, delay_maximum, threshold_divergence_exponent,
    threshold_phase_exponent, wigner_delay, JumpReport, JUMP_ENERGY,
};
use shallow_delay::levels::{
    count_bound_states, critical_depth, critical_depth_shell, critical_depth_well,
};
use shallow_delay::oracle::oracle_sweep;
use shallow_delay::phase::{fold_half_pi, phase_curve, phase_shift, EnergyGrid};
use shallow_delay::{Geometry, Potential, ShellWell, SquareWell};

const WELL: Geometry = Geometry::Well { radius: 2.0 };
const SHELL: Geometry = Geometry::Shell {
    inner_radius: 5.0,
    outer_radius: 7.0,
};

/// (geometry, l, offsets), ordered well s, shell s, well p, shell p as in the jump table.
fn groups() -> [(Geometry, u32, [f64; 3]); 4] {
    [
        (WELL, 0, [0.05, 0.10, 0.15]),
        (SHELL, 0, [0.0071, 0.0143, 0.0214]),
        (WELL, 1, [0.1, 0.2, 0.3]),
        (SHELL, 1, [0.0117, 0.0234, 0.0350]),
    ]
}

const REFERENCE_JUMPS: [[f64; 3]; 4] = [
    [2.6e3, 1.3e3, 0.88e3],
    [6.2e3, 4.8e3, 3.3e3],
    [1.7e2, 0.6e2, 0.3e2],
    [1.9e3, 7.5e2, 4.2e2],
];

struct Config {
    label: String,
    potential: Potential,
    l: u32,
    above: bool,
}

fn configurations() -> Vec<Config> {
    let mut out = Vec::new();
    for (g, l, offsets) in groups() {
        let uc = critical_depth(&g, l).unwrap().u_critical;
        for du in offsets {
            for (above, u) in [(false, uc - du), (true, uc + du)] {
                out.push(Config {
                    label: format!("{} l={l} U0={u:.5}", g.family_name()),
                    potential: g.with_depth(u).unwrap(),
                    l,
                    above,
                });
            }
        }
    }
    out
}

fn well(u: f64) -> Potential {
    SquareWell::new(u, 2.0).unwrap().into()
}

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

fn outcome(passed: bool, summary: String, details: Vec<String>) -> Outcome {
    Outcome {
        passed,
        summary,
        details,
    }
}

fn criterion_1() -> Outcome {
    let ws = critical_depth_well(0, 2.0).unwrap().u_critical;
    let wp = critical_depth_well(1, 2.0).unwrap().u_critical;
    let ss = critical_depth_shell(0, 5.0, 7.0).unwrap();
    let sp = critical_depth_shell(1, 5.0, 7.0).unwrap();
    let ok = (ws - PI * PI / 32.0).abs() < 1e-10
        && (ws - 0.30843).abs() < 1e-5
        && (wp - PI * PI / 8.0).abs() < 1e-10
        && (wp - 1.23370).abs() < 1e-5
        && (ss.q_critical - 0.296).abs() <= 1e-3
        && (ss.u_critical - 0.044).abs() <= 1e-3
        && (sp.q_critical - 0.541).abs() <= 1e-3
        && (sp.u_critical - 0.146).abs() <= 1e-3;
    outcome(
        ok,
        format!(
            "well s {ws:.10}, well p {wp:.10}, shell s q={:.6} U={:.6}, shell p q={:.6} U={:.6}",
            ss.q_critical, ss.u_critical, sp.q_critical, sp.u_critical
        ),
        vec![],
    )
}

fn criterion_2() -> Outcome {
    let grid = EnergyGrid::log(1e-8, 1.0, 400);
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    let mut ok = true;
    for c in configurations() {
        let n = count_bound_states(&c.potential, c.l).unwrap();
        let curve = phase_curve(&c.potential, c.l, &grid).unwrap();
        let residual = (curve.low_end().continuous - n as f64 * PI).abs();
        let good = residual < 1e-3 && n == c.above as u32;
        ok &= good;
        worst = worst.max(residual);
        if !good {
            details.push(format!(
                "{}: n={n} |δ(1e-8) - nπ| = {residual:.3e}",
                c.label
            ));
        }
    }
    outcome(
        ok,
        format!("worst |δ(1e-8) - nπ| = {worst:.3e} (limit 1e-3)"),
        details,
    )
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for c in configurations().into_iter().filter(|c| !c.above) {
        let slope = threshold_phase_exponent(&c.potential, c.l).unwrap();
        let dev = (slope - (2 * c.l + 1) as f64).abs();
        worst = worst.max(dev);
        if dev > 0.05 {
            details.push(format!("{}: slope {slope:.4}", c.label));
        }
    }
    outcome(
        worst <= 0.05,
        format!("worst slope deviation {worst:.4} (limit 0.05)"),
        details,
    )
}

fn criterion_4() -> Outcome {
    let mut details = Vec::new();
    for c in configurations() {
        let tau = wigner_delay(&c.potential, c.l, JUMP_ENERGY).unwrap().tau;
        if (tau > 0.0) == c.above || tau == 0.0 {
            details.push(format!("{}: τ = {tau:.4e}", c.label));
        }
    }
    outcome(
        details.is_empty(),
        format!("{} sign violations over 24 configurations", details.len()),
        details,
    )
}

fn jump_table() -> Vec<Vec<JumpReport>> {
    groups()
        .iter()
        .map(|(g, l, offsets)| {
            offsets
                .iter()
                .map(|&du| delay_jump(g, *l, du, JUMP_ENERGY).unwrap())
                .collect()
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let table = jump_table();
    let mut details = Vec::new();
    for group in &table {
        for w in group.windows(2) {
            if !(w[0].jump > w[1].jump) {
                details.push(format!(
                    "{} l={}: {} !> {}",
                    w[0].family, w[0].l, w[0].jump, w[1].jump
                ));
            }
        }
    }
    for (w, s) in [(0, 1), (2, 3)] {
        for (a, b) in table[w].iter().zip(&table[s]) {
            if !(b.jump > a.jump) {
                details.push(format!("l={}: shell {} !> well {}", a.l, b.jump, a.jump));
            }
        }
    }
    outcome(
        details.is_empty(),
        format!("{} ordering violations", details.len()),
        details,
    )
}

/// Frozen closed-form s-wave delays for the square well at `E = 5e-5`.
fn frozen_baselines() -> Vec<(f64, f64)> {
    let uc = PI * PI / 32.0;
    vec![
        (0.208, 673.365804501264),
        (uc - 0.05, 1663.76716208674),
        (uc + 0.05, -2294.59269561909),
        (uc - 0.10, 677.582569687623),
        (uc + 0.10, -1313.54619298888),
        (uc - 0.15, 344.650109654689),
        (uc + 0.15, -981.424435670987),
        (0.408, -1317.78470704306),
    ]
}

fn baseline_failures() -> Vec<String> {
    frozen_baselines()
        .into_iter()
        .filter_map(|(u, expect)| {
            let tau = wigner_delay(&well(u), 0, JUMP_ENERGY).unwrap().tau;
            ((tau / expect - 1.0).abs() > 1e-3)
                .then(|| format!("baseline U0={u:.5}: τ = {tau} vs {expect}"))
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let table = jump_table();
    let mut details = Vec::new();
    let mut worst = 1.0f64;
    for (group, reference) in table.iter().zip(REFERENCE_JUMPS) {
        for (r, expect) in group.iter().zip(reference) {
            let factor = (r.jump / expect).max(expect / r.jump);
            worst = worst.max(factor);
            if !(factor <= 2.0) {
                details.push(format!(
                    "{} l={} ΔU={}: jump {:.4e} vs {:.2e} (factor {factor:.2})",
                    r.family, r.l, r.delta_u, r.jump, expect
                ));
            }
        }
    }
    let baseline = baseline_failures();
    let ok = details.is_empty() && baseline.is_empty();
    let summary = format!(
        "{} of 12 jumps outside factor 2 (worst {worst:.1}); {} of 8 frozen baselines off by > 0.1%",
        details.len(),
        baseline.len()
    );
    details.extend(baseline);
    outcome(ok, summary, details)
}

fn log_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    EnergyGrid::log(lo, hi, n).nodes().unwrap()
}

fn oracle_configurations() -> Vec<(&'static str, Potential, u32)> {
    let uc = |g: &Geometry, l| critical_depth(g, l).unwrap().u_critical;
    vec![
        (
            "well s below",
            WELL.with_depth(uc(&WELL, 0) - 0.05).unwrap(),
            0,
        ),
        (
            "well p above",
            WELL.with_depth(uc(&WELL, 1) + 0.1).unwrap(),
            1,
        ),
        (
            "shell s above",
            SHELL.with_depth(uc(&SHELL, 0) + 0.0071).unwrap(),
            0,
        ),
        (
            "shell p below",
            SHELL.with_depth(uc(&SHELL, 1) - 0.0117).unwrap(),
            1,
        ),
    ]
}

fn criterion_7() -> Outcome {
    let energies = log_nodes(5e-5, 1.0, 100);
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (name, p, l) in oracle_configurations() {
        match oracle_sweep(&p, l, &energies) {
            Ok(d) => {
                worst = worst.max(d);
                details.push(format!("{name}: {d:.3e}"));
            }
            Err(e) => {
                worst = f64::INFINITY;
                details.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!("worst |δ_analytic - δ_numerov| = {worst:.3e} (limit 1e-6)"),
        details,
    )
}

fn criterion_8() -> Outcome {
    let energies = log_nodes(5e-5, 1.0, 100);
    let mut worst = 0.0f64;
    for l in 0..=1 {
        for &u in &[0.158, 0.258, 0.358, 0.458, 0.934, 1.134, 1.334, 1.534] {
            let w = well(u);
            let s: Potential = ShellWell::new(u, 1e-6, 2.0).unwrap().into();
            for &e in &energies {
                let d =
                    fold_half_pi(phase_shift(&s, l, e).unwrap() - phase_shift(&w, l, e).unwrap());
                worst = worst.max(d.abs());
            }
        }
    }
    outcome(
        worst < 1e-8,
        format!("worst shell - well difference {worst:.3e} (limit 1e-8)"),
        vec![],
    )
}

fn criterion_9() -> Outcome {
    let below = threshold_divergence_exponent(&well(0.208)).unwrap();
    let above = threshold_divergence_exponent(&well(0.408)).unwrap();
    let ok = (below + 0.5).abs() <= 0.02 && (above + 0.5).abs() <= 0.02;
    outcome(
        ok,
        format!("slopes {below:.4} (U0=0.208), {above:.4} (U0=0.408)"),
        vec![],
    )
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (u, expect) in [(1.134, 0.031), (1.034, 0.061), (0.934, 0.092)] {
        let m = delay_maximum(&well(u), 1, 5e-5, 1.0).unwrap();
        ok &= (m.energy / expect - 1.0).abs() <= 0.2 && m.tau > 0.0;
        parts.push(format!("U0={u}: E={:.4} (expect {expect})", m.energy));
    }
    outcome(ok, parts.join(", "), vec![])
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("critical depths", criterion_1),
        ("Levinson endpoints at E = 1e-8", criterion_2),
        ("threshold law δ ∝ k^(2l+1)", criterion_3),
        ("delay sign structure at E = 5e-5", criterion_4),
        ("jump trend", criterion_5),
        ("jump magnitudes and frozen baselines", criterion_6),
        ("oracle equivalence", criterion_7),
        ("shell to well limit", criterion_8),
        ("threshold divergence τ_0 ∝ E^(-1/2)", criterion_9),
        ("p-wave delay maxima", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {}", i + 1, o.summary);
        for d in &o.details {
            println!("         {d}");
        }
        if !o.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn frozen_delay_baselines() {
    let failures = baseline_failures();
    assert!(failures.is_empty(), "{failures:?}");
}

/// The p-wave jumps compared where the below-critical delay peaks.
#[test]
fn p_wave_jumps_at_delay_maxima() {
    for (g, reference) in [(WELL, REFERENCE_JUMPS[2]), (SHELL, REFERENCE_JUMPS[3])] {
        let offsets = groups()
            .into_iter()
            .find(|x| x.0 == g && x.1 == 1)
            .unwrap()
            .2;
        for (&du, expect) in offsets.iter().zip(reference) {
            let r = delay_jump_at_maximum(&g, 1, du, 5e-5, 1.0).unwrap();
            let factor = (r.jump / expect).max(expect / r.jump);
            println!(
                "{} ΔU={du}: E={:.4} jump {:.4e} vs {expect:.2e}",
                r.family, r.energy, r.jump
            );
            assert!(factor <= 2.0, "{r:?}");
        }
    }
}

#[test]
fn finite_difference_error_is_small() {
    for c in configurations() {
        let s = wigner_delay(&c.potential, c.l, JUMP_ENERGY).unwrap();
        assert!(s.fd_error < 1e-3 * s.tau.abs(), "{}: {s:?}", c.label);
    }
    for (name, p, l) in oracle_configurations() {
        for e in log_nodes(5e-5, 1.0, 50) {
            let s = wigner_delay(&p, l, e).unwrap();
            assert!(
                s.fd_error < 1e-3 * s.tau.abs().max(1e-3),
                "{name} E={e}: {s:?}"
            );
        }
    }
}
