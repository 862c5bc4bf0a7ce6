use shallow_delay::levels::{count_bound_states, critical_depth_shell, critical_depth_well};
use shallow_delay::phase::{fold_half_pi, phase_curve, phase_shift, EnergyGrid};
use shallow_delay::{Potential, ShellWell, SquareWell};

fn grid() -> Vec<f64> {
    EnergyGrid::log(5e-5, 1.0, 100).nodes().unwrap()
}

#[test]
fn vanishing_inner_radius_reproduces_the_well() {
    for l in 0..=2 {
        for &u in &[0.05, 0.258, 0.358, 1.134, 1.334, 3.0] {
            let well: Potential = SquareWell::new(u, 2.0).unwrap().into();
            let shell: Potential = ShellWell::new(u, 1e-6, 2.0).unwrap().into();
            for e in grid() {
                let d = fold_half_pi(
                    phase_shift(&shell, l, e).unwrap() - phase_shift(&well, l, e).unwrap(),
                );
                assert!(d.abs() < 1e-8, "l={l} U0={u} E={e} diff={d}");
            }
            assert_eq!(
                count_bound_states(&shell, l).unwrap(),
                count_bound_states(&well, l).unwrap()
            );
        }
    }
}

#[test]
fn continuous_curves_coincide_in_the_limit() {
    let well: Potential = SquareWell::new(0.358, 2.0).unwrap().into();
    let shell: Potential = ShellWell::new(0.358, 1e-6, 2.0).unwrap().into();
    let g = EnergyGrid::default();
    let a = phase_curve(&well, 0, &g).unwrap();
    let b = phase_curve(&shell, 0, &g).unwrap();
    assert_eq!(a.points.len(), b.points.len());
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!((p.continuous - q.continuous).abs() < 1e-8);
    }
}

#[test]
fn critical_depths_converge() {
    for l in 0..=1 {
        let w = critical_depth_well(l, 2.0).unwrap();
        let s = critical_depth_shell(l, 1e-6, 2.0).unwrap();
        assert!(
            (s.u_critical / w.u_critical - 1.0).abs() < 1e-8,
            "l={l} {s:?} {w:?}"
        );
    }
}
