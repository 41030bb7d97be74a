//! Exact solver for the interference-capped beamforming subproblem
//!
//! ```text
//! maximize Re(w^H a)  subject to  |w^H b| <= max_leakage,  |w_n| <= cap
//! ```
//!
//! Writing `x_n = conj(w_n)` and dualizing the interference constraint with
//! a complex multiplier `nu` gives the dual function
//!
//! ```text
//! D(nu) = cap * sum_n |a_n - nu b_n| + max_leakage |nu|
//!       = sum_n cap |b_n| |nu - a_n / b_n| + max_leakage |nu - 0| + const
//! ```
//!
//! which is a weighted Fermat-Weber (geometric median) problem in the
//! complex plane. Strong duality holds, so minimizing `D` and reading the
//! primal point off the minimizer solves the subproblem to machine
//! precision. When the minimizer sits exactly on an anchor, the elements
//! attached to that anchor are free in the Lagrangian and are fixed by a
//! small two-disk problem instead.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Result of [`solve_bf_subproblem`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    pub weights: Vec<Complex64>,
    /// `Re(w^H a)`, equal to `|w^H a|` after phase normalization.
    pub objective: f64,
    /// `|w^H b|`.
    pub interference: f64,
    /// Dual value at the computed multiplier; an upper bound on the optimum.
    pub dual_bound: f64,
    /// Whether the dual minimizer coincides with an anchor point.
    pub at_anchor: bool,
}

impl SubproblemSolution {
    /// Elements strictly inside the magnitude cap.
    pub fn interior_count(&self, cap: f64) -> usize {
        self.weights.iter().filter(|w| w.norm() < cap - 1e-9).count()
    }

    pub fn duality_gap(&self) -> f64 {
        (self.dual_bound - self.objective).max(0.0)
    }
}

struct Anchor {
    point: Complex64,
    weight: f64,
    /// Element indices attached to this point (empty for the origin anchor).
    members: Vec<usize>,
}

fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn dot(u: Complex64, v: Complex64) -> f64 {
    u.re * v.re + u.im * v.im
}

/// Solves the subproblem for signal vector `h_sig`, interference vector
/// `h_int`, interference cap `max_leakage` and per-element cap `cap`.
///
/// The returned weights are rotated so that `w^H h_sig` is real and
/// nonnegative.
pub fn solve_bf_subproblem(
    h_sig: &[Complex64],
    h_int: &[Complex64],
    max_leakage: f64,
    cap: f64,
) -> Result<SubproblemSolution> {
    if h_sig.len() != h_int.len() {
        return Err(Error::DimensionMismatch { expected: h_sig.len(), actual: h_int.len() });
    }
    if max_leakage < 0.0 {
        return Err(Error::NegativeLeakage(max_leakage));
    }
    if !(cap > 0.0 && cap.is_finite()) || !max_leakage.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need a finite cap > 0 and a finite leakage cap, got {cap}, {max_leakage}"
        )));
    }
    if h_sig.iter().chain(h_int).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidInput("non-finite channel entries".into()));
    }
    let n = h_sig.len();

    // Work on unit-scale copies; the optimal w is unchanged when a is scaled
    // and when b and max_leakage are scaled together.
    let sig_scale = h_sig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let int_scale = h_int.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let a: Vec<Complex64> = h_sig.iter().map(|z| if sig_scale > 0.0 { z / sig_scale } else { *z }).collect();
    let b: Vec<Complex64> = h_int.iter().map(|z| if int_scale > 0.0 { z / int_scale } else { *z }).collect();
    let max_leakage_n = if int_scale > 0.0 { max_leakage / int_scale } else { max_leakage };

    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut constant = 0.0;
    let mut anchors_raw: Vec<(Complex64, f64, usize)> = Vec::new();
    for i in 0..n {
        if b[i] == Complex64::new(0.0, 0.0) {
            w[i] = phase(a[i]) * cap;
            constant += cap * a[i].norm();
        } else {
            anchors_raw.push((a[i] / b[i], cap * b[i].norm(), i));
        }
    }

    let anchors = group_anchors(&anchors_raw, max_leakage_n);
    let (nu, at_anchor) = minimize_dual(&anchors);

    for i in 0..n {
        if b[i] != Complex64::new(0.0, 0.0) {
            w[i] = phase(a[i] - nu * b[i]) * cap;
        }
    }
    if let Some(g) = at_anchor {
        let group = &anchors[g];
        let mut r = Complex64::new(0.0, 0.0);
        for i in 0..n {
            if !group.members.contains(&i) {
                r += w[i].conj() * b[i];
            }
        }
        let b_sum: f64 = group.members.iter().map(|&i| b[i].norm()).sum();
        let radius = cap * b_sum;
        let s = lens_maximizer(group.point, r, max_leakage_n, radius);
        for &i in &group.members {
            let x = s * b[i].norm() / (b[i] * b_sum);
            w[i] = x.conj();
        }
    }

    let dual_value = dual_objective(&anchors, nu) + constant;

    // Restore feasibility lost to rounding.
    let z: Complex64 = w.iter().zip(&b).map(|(wi, bi)| wi.conj() * bi).sum();
    let noise_floor = (1e-10 * max_leakage_n).max(1e-15 * cap * b.iter().map(|z| z.norm()).sum::<f64>());
    if z.norm() > max_leakage_n + noise_floor {
        let shrink = max_leakage_n / z.norm();
        for wi in w.iter_mut() {
            *wi *= shrink;
        }
    }

    let s: Complex64 = w.iter().zip(h_sig).map(|(wi, ai)| wi.conj() * ai).sum();
    let rot = phase(s);
    if s.norm() > 0.0 {
        for wi in w.iter_mut() {
            *wi *= rot;
        }
    }
    let objective = w.iter().zip(h_sig).map(|(wi, ai)| wi.conj() * ai).sum::<Complex64>().re;
    let interference = w.iter().zip(h_int).map(|(wi, bi)| wi.conj() * bi).sum::<Complex64>().norm();
    Ok(SubproblemSolution {
        weights: w,
        objective,
        interference,
        dual_bound: dual_value * sig_scale,
        at_anchor: at_anchor.is_some(),
    })
}

/// Merges anchors that coincide up to rounding and appends the origin
/// anchor with weight `max_leakage`.
fn group_anchors(raw: &[(Complex64, f64, usize)], max_leakage: f64) -> Vec<Anchor> {
    let scale = raw.iter().map(|r| r.0.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-11 * scale;
    let mut out: Vec<Anchor> = Vec::new();
    let mut push = |point: Complex64, weight: f64, member: Option<usize>| {
        if let Some(g) = out.iter_mut().find(|g| (g.point - point).norm() <= tol) {
            g.weight += weight;
            g.members.extend(member);
        } else {
            out.push(Anchor { point, weight, members: member.into_iter().collect() });
        }
    };
    push(Complex64::new(0.0, 0.0), max_leakage, None);
    for &(p, wt, i) in raw {
        push(p, wt, Some(i));
    }
    out
}

fn dual_objective(anchors: &[Anchor], nu: Complex64) -> f64 {
    anchors.iter().map(|g| g.weight * (nu - g.point).norm()).sum()
}

/// Minimizer of the weighted distance sum and, when it is an anchor, that
/// anchor's index.
fn minimize_dual(anchors: &[Anchor]) -> (Complex64, Option<usize>) {
    let total: f64 = anchors.iter().map(|g| g.weight).sum();
    if total == 0.0 {
        return (Complex64::new(0.0, 0.0), Some(0));
    }
    // An anchor is optimal iff the pull of all other anchors does not exceed
    // its own weight.
    let mut best_anchor: Option<(usize, f64)> = None;
    for (k, g) in anchors.iter().enumerate() {
        let pull: Complex64 = anchors
            .iter()
            .enumerate()
            .filter(|&(j, h)| j != k && h.weight > 0.0)
            .map(|(_, h)| h.weight * phase(g.point - h.point))
            .sum();
        let excess = pull.norm() - g.weight;
        if excess <= 1e-12 * total && best_anchor.is_none_or(|(_, e)| excess < e) {
            best_anchor = Some((k, excess));
        }
    }
    if let Some((k, _)) = best_anchor {
        return (anchors[k].point, Some(k));
    }
    (newton_median(anchors, total), None)
}

struct LocalModel {
    /// Gradient of the smooth part (anchors not coincident with `nu`).
    grad: Complex64,
    hxx: f64,
    hxy: f64,
    hyy: f64,
    /// Total weight of anchors sitting at `nu`.
    resting: f64,
}

fn local_model(anchors: &[Anchor], nu: Complex64) -> LocalModel {
    let mut m = LocalModel { grad: Complex64::new(0.0, 0.0), hxx: 0.0, hxy: 0.0, hyy: 0.0, resting: 0.0 };
    for g in anchors {
        if g.weight == 0.0 {
            continue;
        }
        let d = nu - g.point;
        let r = d.norm();
        if r <= 1e-15 * (1.0 + g.point.norm()) {
            m.resting += g.weight;
            continue;
        }
        let u = d / r;
        m.grad += u * g.weight;
        let c = g.weight / r;
        m.hxx += c * (1.0 - u.re * u.re);
        m.hxy -= c * u.re * u.im;
        m.hyy += c * (1.0 - u.im * u.im);
    }
    m
}

/// Norm of the minimum-norm subgradient.
fn stationarity(m: &LocalModel) -> f64 {
    (m.grad.norm() - m.resting).max(0.0)
}

/// Weighted geometric median when no anchor is optimal: damped Newton,
/// stepping along the steepest descent ray whenever an iterate sits on an
/// anchor.
fn newton_median(anchors: &[Anchor], total: f64) -> Complex64 {
    let mut nu: Complex64 = anchors.iter().map(|g| g.point * g.weight).sum::<Complex64>() / total;
    let mut f = dual_objective(anchors, nu);
    for g in anchors {
        let fa = dual_objective(anchors, g.point);
        if fa < f {
            nu = g.point;
            f = fa;
        }
    }
    let mut m = local_model(anchors, nu);
    for _ in 0..500 {
        let station = stationarity(&m);
        if station <= 1e-15 * total {
            break;
        }
        let (step, slope) = if m.resting > 0.0 {
            // on an anchor: steepest descent ray of the nonsmooth term, with
            // a length from the curvature of the rest
            let pull = m.grad.norm();
            let d = -m.grad / pull;
            let curvature = m.hxx * d.re * d.re + 2.0 * m.hxy * d.re * d.im + m.hyy * d.im * d.im;
            let len = (pull - m.resting) / curvature.max(f64::MIN_POSITIVE);
            (d * len, (m.resting - pull) * len)
        } else {
            let det = m.hxx * m.hyy - m.hxy * m.hxy;
            let g = m.grad;
            let mut s = Complex64::new(-(m.hyy * g.re - m.hxy * g.im) / det, -(m.hxx * g.im - m.hxy * g.re) / det);
            if !(det > 0.0) || !(s.re.is_finite() && s.im.is_finite()) || dot(s, g) >= 0.0 {
                s = -g / (m.hxx + m.hyy).max(f64::MIN_POSITIVE);
            }
            (s, dot(s, g))
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..80 {
            let cand = nu + step * t;
            if cand == nu {
                break;
            }
            let fc = dual_objective(anchors, cand);
            let armijo = fc <= f + 1e-4 * t * slope && fc < f;
            // once f is flat to rounding, progress is judged on the gradient
            let flat = fc <= f + 4.0 * f64::EPSILON * f.abs();
            let mc = local_model(anchors, cand);
            if armijo || (flat && stationarity(&mc) < 0.5 * station) {
                accepted = true;
                nu = cand;
                f = fc.min(f);
                m = mc;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    nu
}

/// Maximizes `Re(p s)` over `|s| <= radius` and `|r + s| <= max_leakage`. If the
/// two disks do not meet, returns the point of the first disk closest to
/// `-r`.
fn lens_maximizer(p: Complex64, r: Complex64, max_leakage: f64, radius: f64) -> Complex64 {
    let q = -r;
    let closest = if q.norm() <= radius { q } else { q * (radius / q.norm()) };
    let dir = p.conj();
    if dir.norm() == 0.0 {
        return closest;
    }
    let u = dir / dir.norm();
    let slack = 1e-12 * (radius + max_leakage + q.norm());
    let s1 = u * radius;
    if (s1 - q).norm() <= max_leakage + slack {
        return s1;
    }
    let s2 = q + u * max_leakage;
    if s2.norm() <= radius + slack {
        return s2;
    }
    let dist = q.norm();
    if dist == 0.0 || dist > radius + max_leakage || dist < (radius - max_leakage).abs() {
        return closest;
    }
    let e = q / dist;
    let along = (radius * radius - max_leakage * max_leakage + dist * dist) / (2.0 * dist);
    let across = (radius * radius - along * along).max(0.0).sqrt();
    let perp = Complex64::new(-e.im, e.re);
    let c1 = e * along + perp * across;
    let c2 = e * along - perp * across;
    if dot(c1, u) >= dot(c2, u) {
        c1
    } else {
        c2
    }
}
