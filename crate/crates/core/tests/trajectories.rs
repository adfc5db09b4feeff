use proptest::prelude::*;
use resham::bihamiltonian::derive_biham;
use resham::simulate::{conservation_report, integrate, IntegratorConfig, Method, Simulation};
use resham::systems::Registry;

fn config(name: &str, step: f64, t_end: f64) -> IntegratorConfig {
    let sys = Registry::builtin().get(name).unwrap();
    IntegratorConfig { step, t_end, param_bindings: sys.default_values(), ..Default::default() }
}

fn euler_drifts(step: f64) -> (f64, f64) {
    let sys = Registry::builtin().get("euler_rotor").unwrap();
    let sim = Simulation::new(sys.assemble(), sys.hamiltonian.clone()).with_g("x^2+y^2+z^2".parse().unwrap());
    let traj = sim.integrate([1.0, 1.0, 1.0], &config("euler_rotor", step, 10.0)).unwrap();
    (conservation_report(&traj, "H").unwrap(), conservation_report(&traj, "G").unwrap())
}

#[test]
fn rk4_is_fourth_order_on_euler_rotor() {
    let (k2, l2) = euler_drifts(2e-3);
    let (k1, l1) = euler_drifts(1e-3);
    assert!(k1 < 1e-6 && l1 < 1e-6);
    assert!(k2 >= 8.0 * k1, "K drift {k2:e} -> {k1:e}");
    assert!(l2 >= 8.0 * l1, "L^2 drift {l2:e} -> {l1:e}");
}

#[test]
fn dissipative_rotor_loses_energy_monotonically() {
    let sys = Registry::builtin().get("euler_rotor_dissipative").unwrap();
    let traj = integrate(&sys.assemble(), &sys.hamiltonian, [1.0, 1.0, 1.0], &config(&sys.name, 1e-3, 10.0)).unwrap();
    let k = traj.channel("H").unwrap();
    assert!(k.windows(2).all(|w| w[1] <= w[0]));
    assert!(k.last().unwrap() < &(0.5 * k[0]));
}

#[test]
fn chen_is_not_conservative() {
    let sys = Registry::builtin().get("chen").unwrap();
    let traj = integrate(&sys.assemble(), &sys.hamiltonian, [1.0, 1.0, 1.0], &config("chen", 1e-3, 2.0)).unwrap();
    assert!(!traj.diverged);
    assert!(conservation_report(&traj, "H").unwrap() > 1.0);
}

#[test]
fn divergence_channel_is_constant_for_chaotic_systems() {
    for name in ["reduced_three_wave", "rabinovich", "chen", "lu", "modified_lu", "qi"] {
        let sys = Registry::builtin().get(name).unwrap();
        let traj = integrate(&sys.assemble(), &sys.hamiltonian, [0.5, 0.4, 0.3], &config(name, 1e-3, 1.0)).unwrap();
        let div = traj.channel("div").unwrap();
        let expected = sys.field_divergence().eval_f64(&sys.default_values().iter().map(|(p, v)| (resham::polyfield::Symbol::Param(*p), *v)).collect()).unwrap();
        assert!(div.iter().all(|d| (d - expected).abs() <= 1e-12 * expected.abs().max(1.0)), "{name}");
    }
}

#[test]
fn derived_three_wave_conserves_g() {
    let sys = Registry::builtin().get("reduced_three_wave").unwrap();
    let derived = derive_biham(sys, None, &Default::default()).unwrap();
    let drift = |step: f64| {
        let sim = Simulation::new(derived.rhs.clone(), sys.hamiltonian.clone()).with_g(derived.g.clone());
        let traj = sim.integrate([0.3, 0.4, 0.5], &config(&sys.name, step, 5.0)).unwrap();
        conservation_report(&traj, "G").unwrap()
    };
    let (coarse, fine) = (drift(2e-3), drift(1e-3));
    assert!(fine < 1e-6);
    assert!(coarse >= 8.0 * fine, "{coarse:e} -> {fine:e}");
}

#[test]
fn rk45_matches_rk4() {
    let sys = Registry::builtin().get("euler_rotor").unwrap();
    let mut cfg = config("euler_rotor", 1e-2, 5.0);
    let a = integrate(&sys.assemble(), &sys.hamiltonian, [1.0, 1.0, 1.0], &cfg).unwrap();
    cfg.method = Method::Rk45;
    let b = integrate(&sys.assemble(), &sys.hamiltonian, [1.0, 1.0, 1.0], &cfg).unwrap();
    let (ea, eb) = (a.states.last().unwrap(), b.states.last().unwrap());
    for i in 0..3 {
        assert!((ea[i] - eb[i]).abs() < 1e-7, "{ea:?} vs {eb:?}");
    }
    assert!(conservation_report(&b, "H").unwrap() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn energy_rate_residual_is_second_order(
        which in prop::sample::select(vec!["euler_rotor", "euler_rotor_dissipative", "rlc_circuit"]),
        x0 in prop::array::uniform3(-1.5f64..1.5),
        step in prop::sample::select(vec![5e-4, 1e-3, 2e-3, 5e-3]),
    ) {
        let sys = Registry::builtin().get(which).unwrap();
        let traj = integrate(&sys.assemble(), &sys.hamiltonian, x0, &config(which, step, 2.0)).unwrap();
        let worst = traj.channel("energy_rate_residual").unwrap().iter().cloned().fold(0.0, f64::max);
        prop_assert!(worst < 10.0 * step * step, "{} residual {:e} at step {}", which, worst, step);
    }
}
