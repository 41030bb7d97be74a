//! Brute-force reference implementations shared by the integration tests.
//! None of them call into the library's closed forms.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log2_1p(x: f64) -> f64 {
    (1.0 + x).log2()
}

/// Random inputs of the placement problem.
#[derive(Debug, Clone, Copy)]
pub struct PlacementCase {
    pub dn: (f64, f64),
    pub h: f64,
    pub alpha: f64,
    pub k: f64,
    /// `N_S N_r P_S / sigma1^2`
    pub s2v_scale: f64,
    /// `N_t N_D P_V / sigma2^2`
    pub v2d_scale: f64,
}

impl PlacementCase {
    /// LoS-only bounds when the relay sits a fraction `split` of the way to
    /// the DN at altitude `h`.
    pub fn bounds(&self, split: f64) -> (f64, f64) {
        let (x, y) = self.dn;
        let d1_sq = (split * x).powi(2) + (split * y).powi(2) + self.h * self.h;
        let d2_sq = ((1.0 - split) * x).powi(2) + ((1.0 - split) * y).powi(2) + self.h * self.h;
        let g = |scale: f64, d_sq: f64| log2_1p(self.k * self.k * scale * d_sq.powf(-self.alpha / 2.0));
        (g(self.s2v_scale, d1_sq), g(self.v2d_scale, d2_sq))
    }

    pub fn min_bound(&self, split: f64) -> f64 {
        let (a, b) = self.bounds(split);
        a.min(b)
    }
}

/// Maximizer of the smaller LoS bound over a uniform `split` grid.
pub fn placement_grid_oracle(case: &PlacementCase, step: f64) -> f64 {
    let n = (1.0 / step).round() as usize;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=n {
        let split = i as f64 / n as f64;
        let v = case.min_bound(split);
        if v > best.0 {
            best = (v, split);
        }
    }
    best.1
}

/// Gains and budget of the power-control problem.
#[derive(Debug, Clone, Copy)]
pub struct PowerCase {
    pub g_s2v: f64,
    pub g_si: f64,
    pub g_v2d: f64,
    pub g_s2d: f64,
    pub source_cap: f64,
    pub relay_cap: f64,
    pub noise_at_relay: f64,
    pub noise_at_dest: f64,
}

impl PowerCase {
    pub fn rates(&self, source: f64, relay: f64) -> (f64, f64) {
        let s2v = self.g_s2v * source / (self.g_si * relay + self.noise_at_relay);
        let v2d = self.g_v2d * relay / (self.g_s2d * source + self.noise_at_dest);
        (log2_1p(s2v), log2_1p(v2d))
    }

    pub fn min_rate(&self, source: f64, relay: f64) -> f64 {
        let (a, b) = self.rates(source, relay);
        a.min(b)
    }
}

/// Best min-rate over an `n x n` grid of `(0, source_cap] x (0, relay_cap]`.
pub fn power_grid_oracle(case: &PowerCase, n: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 1..=n {
        for j in 1..=n {
            let source = case.source_cap * i as f64 / n as f64;
            let relay = case.relay_cap * j as f64 / n as f64;
            best = best.max(case.min_rate(source, relay));
        }
    }
    best
}

pub fn random_power_case(r: &mut ChaCha8Rng) -> PowerCase {
    let mut g = || 10f64.powf(r.random_range(-16.0..-8.0));
    let (g_s2v, g_si, g_v2d, g_s2d) = (g(), g(), g(), g());
    PowerCase {
        g_s2v,
        g_si,
        g_v2d,
        g_s2d,
        source_cap: 10f64.powf(r.random_range(-3.0..0.0)),
        relay_cap: 10f64.powf(r.random_range(-3.0..0.0)),
        noise_at_relay: 1e-14,
        noise_at_dest: 1e-14,
    }
}

fn inner(w: &[Complex64], h: &[Complex64]) -> Complex64 {
    w.iter().zip(h).map(|(x, y)| x.conj() * y).sum()
}

/// Best `|w^H a|` over two-element `w` with `|w_n| <= cap` and
/// `|w^H b| <= max_leakage`.
///
/// With the first phase fixed to zero, for fixed relative phase the feasible
/// magnitudes form a convex set and the objective is convex in them, so the
/// maximum sits on a box corner or on the constraint curve. The curve is
/// traced by solving the constraint for the second magnitude on a grid of
/// (phase, first magnitude), then the best cell is refined. Points where the
/// curve meets the `|w_2| = cap` edge are found by solving for the phase.
pub fn two_element_oracle(a: [Complex64; 2], b: [Complex64; 2], max_leakage: f64, cap: f64) -> f64 {
    let eval = |phi: f64, r1: f64| -> f64 {
        let rot = Complex64::from_polar(1.0, -phi);
        let u = r1 * b[0];
        let v = rot * b[1];
        let mut cands = vec![0.0, cap];
        let qa = v.norm_sqr();
        let qb = 2.0 * (u * v.conj()).re;
        let qc = u.norm_sqr() - max_leakage * max_leakage;
        if qa > 0.0 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                cands.push((-qb + disc.sqrt()) / (2.0 * qa));
                cands.push((-qb - disc.sqrt()) / (2.0 * qa));
            }
        }
        let mut best = f64::NEG_INFINITY;
        for r2 in cands {
            if !(0.0..=cap).contains(&r2) {
                continue;
            }
            let w = [Complex64::new(r1, 0.0), Complex64::from_polar(r2, phi)];
            if inner(&w, &b).norm() <= max_leakage * (1.0 + 1e-12) + 1e-15 {
                best = best.max(inner(&w, &a).norm());
            }
        }
        best
    };
    let n = 720;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        let phi = TAU * i as f64 / n as f64;
        for j in 0..=n {
            let r1 = cap * j as f64 / n as f64;
            let v = eval(phi, r1);
            if v > best.0 {
                best = (v, phi, r1);
            }
        }
    }
    let (mut d_phi, mut d_r) = (TAU / n as f64, cap / n as f64);
    for _ in 0..8 {
        let (_, phi0, r0) = best;
        for i in -10..=10 {
            for j in -10..=10 {
                let phi = phi0 + d_phi * i as f64 / 5.0;
                let r1 = (r0 + d_r * j as f64 / 5.0).clamp(0.0, cap);
                let v = eval(phi, r1);
                if v > best.0 {
                    best = (v, phi, r1);
                }
            }
        }
        d_phi /= 5.0;
        d_r /= 5.0;
    }
    // |r1 b_1 + r2 e^{-j phi} b_2|^2 = max_leakage^2  <=>  cos(phi - arg(b_1) + arg(b_2)) = c
    let on_curve = |r1: f64, r2: f64| -> f64 {
        let denom = 2.0 * r1 * r2 * b[0].norm() * b[1].norm();
        if denom == 0.0 {
            return f64::NEG_INFINITY;
        }
        let c = (max_leakage * max_leakage - (r1 * b[0].norm()).powi(2) - (r2 * b[1].norm()).powi(2)) / denom;
        if c.abs() > 1.0 {
            return f64::NEG_INFINITY;
        }
        let shift = b[1].arg() - b[0].arg();
        let mut best = f64::NEG_INFINITY;
        for phi in [c.acos() + shift, -c.acos() + shift] {
            let w = [Complex64::new(r1, 0.0), Complex64::from_polar(r2, phi)];
            if inner(&w, &b).norm() <= max_leakage * (1.0 + 1e-9) + 1e-15 {
                best = best.max(inner(&w, &a).norm());
            }
        }
        best
    };
    // the free magnitude only meets the curve inside a window of width
    // about 2 max_leakage / |b_i|, which is scanned on its own besides the full range
    let scan = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        let (lo, hi) = (lo.max(0.0), hi.min(cap));
        if lo > hi {
            return f64::NEG_INFINITY;
        }
        let m = 20_000;
        (0..=m).map(|j| f(lo + (hi - lo) * j as f64 / m as f64)).fold(f64::NEG_INFINITY, f64::max)
    };
    let (n0, n1) = (b[0].norm(), b[1].norm());
    let first_free = |r: f64| on_curve(r, cap);
    let second_free = |r: f64| on_curve(cap, r);
    best.0 = best
        .0
        .max(scan(0.0, cap, &first_free))
        .max(scan((cap * n1 - max_leakage) / n0, (cap * n1 + max_leakage) / n0, &first_free))
        .max(scan(0.0, cap, &second_free))
        .max(scan((cap * n0 - max_leakage) / n1, (cap * n0 + max_leakage) / n1, &second_free));
    best.0
}

pub fn complex_normal(r: &mut ChaCha8Rng) -> Complex64 {
    let (u1, u2): (f64, f64) = (r.random::<f64>().max(1e-300), r.random());
    let m = (-2.0 * u1.ln()).sqrt() / 2f64.sqrt();
    Complex64::from_polar(m, TAU * u2)
}

/// Plain-loop steering vector: element `(m, n)` at index `m * cols + n`.
pub fn steering_reference(rows: usize, cols: usize, spacing: f64, elevation: f64, azimuth: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rows * cols);
    for m in 0..rows {
        for n in 0..cols {
            let phase = 2.0 * PI * spacing * elevation.cos() * (m as f64 * azimuth.cos() + n as f64 * azimuth.sin());
            out.push(Complex64::new(phase.cos(), phase.sin()));
        }
    }
    out
}

/// Mean and standard error of `xs`.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
