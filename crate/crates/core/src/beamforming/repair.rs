//! Constant-modulus repair of subproblem solutions.
//!
//! Two interior elements `i`, `j` whose signal and interference entries
//! share one ratio (`h_sig[i] / h_int[i] == h_sig[j] / h_int[j]`) can be
//! re-phased so that both land on the cap circle (or, when the lengths do
//! not close a triangle, so that one does) while leaving both `w^H h_sig`
//! and `w^H h_int` unchanged.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

/// Result of [`cm_repair`].
#[derive(Debug, Clone, PartialEq)]
pub struct RepairOutcome {
    pub weights: Vec<Complex64>,
    /// Pairs re-phased onto the cap circle.
    pub repaired_pairs: usize,
    /// Interior pairs left alone because their entries do not share a ratio.
    pub skipped_pairs: usize,
    /// Elements still strictly inside the cap afterwards.
    pub interior_remaining: usize,
}

const INTERIOR_TOL: f64 = 1e-9;

fn is_interior(w: Complex64, cap: f64) -> bool {
    w.norm() < cap - INTERIOR_TOL
}

fn constant_ratio(sig: &[Complex64], int: &[Complex64], i: usize, j: usize) -> bool {
    let cross = sig[i] * int[j] - sig[j] * int[i];
    let scale = (sig[i].norm() * int[j].norm()).max(sig[j].norm() * int[i].norm());
    cross.norm() <= 1e-9 * scale || (scale == 0.0 && cross.norm() == 0.0)
}

/// Re-phases the pair `(i, j)` so that `conj(w_i) h_i + conj(w_j) h_j` is
/// unchanged.
fn repair_pair(w: &mut [Complex64], h: &[Complex64], i: usize, j: usize, cap: f64) {
    let sum = w[i].conj() * h[i] + w[j].conj() * h[j];
    let a_bar = sum.norm();
    let b_bar = cap * h[i].norm();
    let c_bar = cap * h[j].norm();
    let u = sum.arg();
    let th_i = h[i].arg();
    let th_j = h[j].arg();
    if a_bar >= (b_bar - c_bar).abs() {
        // both elements on the circle, the two terms closing a triangle on `sum`
        let (v1, v2) = if a_bar <= 1e-300 {
            (FRAC_PI_2, FRAC_PI_2)
        } else {
            let cos1 = (a_bar * a_bar + b_bar * b_bar - c_bar * c_bar) / (2.0 * a_bar * b_bar);
            let cos2 = (a_bar * a_bar + c_bar * c_bar - b_bar * b_bar) / (2.0 * a_bar * c_bar);
            (cos1.clamp(-1.0, 1.0).acos(), cos2.clamp(-1.0, 1.0).acos())
        };
        w[i] = Complex64::from_polar(cap, -(u - v1 - th_i));
        w[j] = Complex64::from_polar(cap, -(u + v2 - th_j));
    } else if b_bar >= c_bar {
        // the shorter side goes to the cap pointing backwards, the longer one
        // stays interior and absorbs the difference
        w[j] = Complex64::from_polar(cap, -(u - th_j + PI));
        w[i] = Complex64::from_polar((a_bar + c_bar) / h[i].norm(), -(u - th_i));
    } else {
        w[i] = Complex64::from_polar(cap, -(u - th_i + PI));
        w[j] = Complex64::from_polar((a_bar + b_bar) / h[j].norm(), -(u - th_j));
    }
}

/// Repeatedly repairs interior pairs with the constant-ratio property until
/// at most one interior element among such pairs remains.
pub fn cm_repair(w: &[Complex64], h_sig: &[Complex64], h_int: &[Complex64], cap: f64) -> RepairOutcome {
    assert_eq!(w.len(), h_sig.len());
    assert_eq!(w.len(), h_int.len());
    let mut w = w.to_vec();
    let mut repaired_pairs = 0;
    loop {
        let interior: Vec<usize> = (0..w.len()).filter(|&n| is_interior(w[n], cap)).collect();
        let mut pair = None;
        'search: for (k, &i) in interior.iter().enumerate() {
            for &j in &interior[k + 1..] {
                if constant_ratio(h_sig, h_int, i, j) {
                    pair = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = pair else { break };
        // Run the construction on whichever vector carries the pair; the
        // shared ratio carries the other inner product along.
        let zero = Complex64::new(0.0, 0.0);
        let h = if h_sig[i] != zero || h_sig[j] != zero { h_sig } else { h_int };
        if h[i] == zero && h[j] == zero {
            w[i] = Complex64::new(cap, 0.0);
            w[j] = Complex64::new(cap, 0.0);
        } else if h[i] == zero || h[j] == zero {
            // one entry carries nothing: park it on the circle, leave the other
            let idle = if h[i] == zero { i } else { j };
            w[idle] = Complex64::new(cap, 0.0);
        } else {
            repair_pair(&mut w, h, i, j, cap);
        }
        repaired_pairs += 1;
        if repaired_pairs > w.len() * w.len() {
            break;
        }
    }
    let interior: Vec<usize> = (0..w.len()).filter(|&n| is_interior(w[n], cap)).collect();
    let mut skipped_pairs = 0;
    for (k, &i) in interior.iter().enumerate() {
        for &j in &interior[k + 1..] {
            if !constant_ratio(h_sig, h_int, i, j) {
                skipped_pairs += 1;
            }
        }
    }
    RepairOutcome { weights: w, repaired_pairs, skipped_pairs, interior_remaining: interior.len() }
}
