//! Closed forms and the subproblem solver against brute-force references.

mod common;

use common::*;
use fdrelay::beamforming::solve_bf_subproblem;
use fdrelay::channel::{EnvParams, Vec3};
use fdrelay::positioning::{conditional_optimal_position, FeasibleBox, LinkBudget};
use fdrelay::rates::{achievable_rates, optimal_powers, EffectiveGains, NoisePowers};
use num_complex::Complex64;
use rand::Rng;

fn random_placement(r: &mut rand_chacha::ChaCha8Rng) -> (LinkBudget, EnvParams, Vec3, f64) {
    let side = |r: &mut rand_chacha::ChaCha8Rng| r.random_range(2..=8u32).pow(2) as f64;
    let budget = LinkBudget {
        array_s2v: side(r) * side(r),
        array_v2d: side(r) * side(r),
        source_power: 10f64.powf(r.random_range(-3.0..1.0)),
        relay_power: 10f64.powf(r.random_range(-3.0..1.0)),
        noise_at_relay: 10f64.powf(r.random_range(-15.0..-12.0)),
        noise_at_dest: 10f64.powf(r.random_range(-15.0..-12.0)),
    };
    let env = EnvParams { los_exponent: r.random_range(1.6..2.6), nlos_exponent: 3.3, ..EnvParams::default() };
    let rad = r.random_range(20.0..1000.0);
    let phi = r.random_range(0.0..std::f64::consts::TAU);
    let dn = Vec3::new(rad * phi.cos(), rad * phi.sin(), 0.0);
    (budget, env, dn, r.random_range(50.0..200.0))
}

#[test]
fn placement_matches_grid_search() {
    let mut r = rng(101);
    for case_no in 0..100 {
        let (budget, env, dn, h) = random_placement(&mut r);
        let region = FeasibleBox::between(Vec3::ORIGIN, dn, h, h + 100.0, [1.0; 3]).unwrap();
        let (p, split) = conditional_optimal_position(&budget, &region, &env, dn).unwrap();
        let case = PlacementCase {
            dn: (dn.x, dn.y),
            h,
            alpha: env.los_exponent,
            k: 2.997_924_58e8 / (4.0 * std::f64::consts::PI * env.carrier_freq),
            s2v_scale: budget.array_s2v * budget.source_power / budget.noise_at_relay,
            v2d_scale: budget.array_v2d * budget.relay_power / budget.noise_at_dest,
        };
        let split_grid = placement_grid_oracle(&case, 1e-5);
        assert!((split - split_grid).abs() <= 2e-5, "case {case_no}: {split} vs grid {split_grid}");
        assert!(case.min_bound(split) >= case.min_bound(split_grid) - 1e-9);
        assert_eq!(p.z, h);
    }
}

#[test]
fn power_control_matches_grid_search() {
    let mut r = rng(202);
    for case_no in 0..100 {
        let c = random_power_case(&mut r);
        let gains = EffectiveGains { g_s2v: c.g_s2v, g_si: c.g_si, g_v2d: c.g_v2d, g_s2d: c.g_s2d };
        let noises = NoisePowers { noise_at_relay: c.noise_at_relay, noise_at_dest: c.noise_at_dest };
        let p = optimal_powers(&gains, c.source_cap, c.relay_cap, noises).unwrap();
        let got = c.min_rate(p.source, p.relay);
        let grid = power_grid_oracle(&c, 200);
        assert!(got >= grid - 1e-9, "case {case_no}: {got} < grid {grid}");
        let lib = achievable_rates(&gains, p, noises);
        let (s2v, v2d) = c.rates(p.source, p.relay);
        assert!((lib.s2v - s2v).abs() < 1e-12 && (lib.v2d - v2d).abs() < 1e-12);
        let unclamped = p.source < c.source_cap || p.relay < c.relay_cap;
        if unclamped && p.source > 0.0 && p.relay > 0.0 {
            assert!((s2v - v2d).abs() <= 1e-9, "case {case_no}: rates {s2v} vs {v2d}");
        }
    }
}

#[test]
fn two_element_solver_matches_exhaustive_search() {
    let mut r = rng(303);
    let cap = 1.0 / 2f64.sqrt();
    for case_no in 0..50 {
        let a = [complex_normal(&mut r), complex_normal(&mut r)];
        let b = [complex_normal(&mut r), complex_normal(&mut r)];
        let full = cap * (b[0].norm() + b[1].norm());
        let max_leakage = full * r.random_range(0.0..1.0f64).powi(2);
        let sol = solve_bf_subproblem(&a, &b, max_leakage, cap).unwrap();
        let oracle = two_element_oracle(a, b, max_leakage, cap);
        assert!(oracle <= cap * (a[0].norm() + a[1].norm()) + 1e-12);
        assert!((sol.objective - oracle).abs() <= 1e-4, "case {case_no}: solver {} vs oracle {oracle}", sol.objective);
        assert!(sol.interference <= max_leakage + 1e-8);
        assert!(sol.weights.iter().all(|w| w.norm() <= cap + 1e-12));
    }
}

#[test]
fn inactive_constraint_gives_matched_filter() {
    let mut r = rng(404);
    for _ in 0..20 {
        let n = 16;
        let a: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut r)).collect();
        let b: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut r)).collect();
        let cap = 0.25;
        let sol = solve_bf_subproblem(&a, &b, 1e6, cap).unwrap();
        let want: f64 = a.iter().map(|z| cap * z.norm()).sum();
        assert!((sol.objective - want).abs() <= 1e-12 * want);
        for (w, z) in sol.weights.iter().zip(&a) {
            assert!((w - z / z.norm() * cap).norm() < 1e-12);
        }
    }
}
