//! Relay placement: the closed-form conditional optimum on the SN-DN segment,
//! the expanding-neighborhood search for a dual-LoS position, and the
//! ideal-beamforming rate bounds.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelMatrix, EnvParams, EnvironmentRealization, LinkRole, Placement, Vec3};
use crate::error::{Error, Result};
use crate::rates::log2_1p;

/// Feasible relay region (the axis-aligned box spanned by SN and DN, at
/// altitudes `[min_altitude, max_altitude]`) and its search grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleBox {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub min_altitude: f64,
    pub max_altitude: f64,
    /// Grid steps `(eps_x, eps_y, eps_h)`, meters.
    pub step: [f64; 3],
}

impl FeasibleBox {
    /// Box between `sn` and `dn` in the horizontal plane.
    pub fn between(sn: Vec3, dn: Vec3, min_altitude: f64, max_altitude: f64, step: [f64; 3]) -> Result<Self> {
        if !(min_altitude > 0.0 && min_altitude <= max_altitude && max_altitude.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 0 < minimum altitude <= maximum altitude, got {min_altitude}, {max_altitude}"
            )));
        }
        if step.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(format!("grid steps must be positive, got {step:?}")));
        }
        if !(sn.is_finite() && dn.is_finite()) {
            return Err(Error::InvalidInput("node positions must be finite".into()));
        }
        Ok(Self {
            x: [sn.x.min(dn.x), sn.x.max(dn.x)],
            y: [sn.y.min(dn.y), sn.y.max(dn.y)],
            min_altitude,
            max_altitude,
            step,
        })
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let tol = 1e-9;
        p.x >= self.x[0] - tol
            && p.x <= self.x[1] + tol
            && p.y >= self.y[0] - tol
            && p.y <= self.y[1] + tol
            && p.z >= self.min_altitude - tol
            && p.z <= self.max_altitude + tol
    }

    /// Grid points per axis, `ceil(extent / step)` (at least 1).
    pub fn grid_counts(&self) -> [u64; 3] {
        let count = |extent: f64, step: f64| ((extent / step).ceil() as u64).max(1);
        [
            count(self.x[1] - self.x[0], self.step[0]),
            count(self.y[1] - self.y[0], self.step[1]),
            count(self.max_altitude - self.min_altitude, self.step[2]),
        ]
    }

    /// Worst-case number of LoS checks of the neighborhood search.
    pub fn search_complexity(&self) -> u64 {
        self.grid_counts().iter().product()
    }
}

/// Array gains, power caps and noise powers of the two relay hops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// `N_S * N_r`.
    pub array_s2v: f64,
    /// `N_t * N_D`.
    pub array_v2d: f64,
    pub source_power: f64,
    pub relay_power: f64,
    pub noise_at_relay: f64,
    pub noise_at_dest: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.array_s2v,
            self.array_v2d,
            self.source_power,
            self.relay_power,
            self.noise_at_relay,
            self.noise_at_dest,
        ];
        if vals.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidInput(format!("link budget entries must be positive: {self:?}")));
        }
        Ok(())
    }

    /// Array-and-power SNR scale of the S2V hop, `N_S N_r P_S / sigma1^2`.
    pub fn s2v_scale(&self) -> f64 {
        self.array_s2v * self.source_power / self.noise_at_relay
    }

    /// `N_t N_D P_V / sigma2^2`.
    pub fn v2d_scale(&self) -> f64 {
        self.array_v2d * self.relay_power / self.noise_at_dest
    }
}

/// Closed-form relay position maximizing the smaller of the two LoS rate
/// bounds. Returns `(position, split)` where the position is `split * dn` lifted
/// to `min_altitude`.
pub fn conditional_optimal_position(
    budget: &LinkBudget,
    region: &FeasibleBox,
    env: &EnvParams,
    dn: Vec3,
) -> Result<(Vec3, f64)> {
    budget.validate()?;
    if dn.x == 0.0 && dn.y == 0.0 {
        return Err(Error::SnDnCoincide);
    }
    let split = optimal_split(
        budget.s2v_scale() / budget.v2d_scale(),
        dn.x * dn.x + dn.y * dn.y,
        region.min_altitude,
        env.los_exponent,
    );
    Ok((Vec3::new(split * dn.x, split * dn.y, region.min_altitude), split))
}

/// Fraction of the way from SN to DN at which the two bounds balance, for
/// budget ratio `ratio`, squared ground distance `dist_sq` and relay altitude.
pub fn optimal_split(ratio: f64, dist_sq: f64, altitude: f64, exponent: f64) -> f64 {
    let near = altitude.powf(exponent);
    let far = (dist_sq + altitude * altitude).powf(exponent / 2.0);
    if ratio <= near / far {
        return 0.0;
    }
    if ratio >= far / near {
        return 1.0;
    }
    if ratio == 1.0 {
        return 0.5;
    }
    // balance equation ratio^(2/exponent) ((1-split)^2 D^2 + altitude^2) = split^2 D^2 + altitude^2
    let weight = ratio.powf(2.0 / exponent);
    let qa = (weight - 1.0) * dist_sq;
    let qb = -2.0 * weight * dist_sq;
    let qc = weight * dist_sq + (weight - 1.0) * altitude * altitude;
    let split = if qa.abs() < 1e-12 * qb.abs() {
        -qc / qb
    } else {
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
        2.0 * qc / (-qb + disc.sqrt())
    };
    split.clamp(0.0, 1.0)
}

fn bound(scale: f64, distance: f64, env: &EnvParams) -> f64 {
    let k = env.free_space_factor();
    log2_1p(k * k * scale / distance.powf(env.los_exponent))
}

/// LoS-only, ideal-beamforming upper bounds `(R_S2V, R_V2D)` in bps/Hz.
pub fn approx_upper_bounds(
    position: Vec3,
    budget: &LinkBudget,
    env: &EnvParams,
    sn: Vec3,
    dn: Vec3,
) -> Result<(f64, f64)> {
    let d1 = position.distance(sn);
    let d2 = position.distance(dn);
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(Error::DegenerateGeometry);
    }
    Ok((bound(budget.s2v_scale(), d1, env), bound(budget.v2d_scale(), d2, env)))
}

fn path_power(h: &ChannelMatrix) -> Result<f64> {
    if h.role == LinkRole::SI {
        return Err(Error::MissingComponents(h.role.name()));
    }
    Ok(h.components.iter().map(|c| c.gain.norm_sqr()).sum())
}

/// All-path, ideal-beamforming upper bounds `(R_S2V, R_V2D)` in bps/Hz.
pub fn strict_upper_bounds(h_s2v: &ChannelMatrix, h_v2d: &ChannelMatrix, budget: &LinkBudget) -> Result<(f64, f64)> {
    let n1 = (h_s2v.tx_len() * h_s2v.rx_len()) as f64;
    let n2 = (h_v2d.tx_len() * h_v2d.rx_len()) as f64;
    let r1 = log2_1p(path_power(h_s2v)? * n1 * budget.source_power / budget.noise_at_relay);
    let r2 = log2_1p(path_power(h_v2d)? * n2 * budget.relay_power / budget.noise_at_dest);
    Ok((r1, r2))
}

/// Offsets `(i, j, k)` of the `t`-th ring: `|i|, |j| <= t`, `0 <= k <= t`
/// and at least one coordinate at distance exactly `t`.
pub fn ring_offsets(t: i64) -> impl Iterator<Item = (i64, i64, i64)> {
    (-t..=t).flat_map(move |i| {
        (-t..=t).flat_map(move |j| (0..=t).filter_map(move |k| (i.abs().max(j.abs()).max(k) == t).then_some((i, j, k))))
    })
}

const STREAM_TIES: u64 = 0x5469_6573;

/// Expanding-ring search around `closed_form` over grid points of `region`.
///
/// Returns `closed_form` if it is acceptable; otherwise the closest acceptable
/// point of the first ring that contains one, with exact distance ties
/// broken uniformly by `rng`.
pub fn neighborhood_search<R: Rng>(
    closed_form: Vec3,
    region: &FeasibleBox,
    mut acceptable: impl FnMut(Vec3) -> bool,
    rng: &mut R,
) -> Result<Vec3> {
    if acceptable(closed_form) {
        return Ok(closed_form);
    }
    let [sx, sy, sh] = region.step;
    let reach = |lo: f64, hi: f64, c: f64, s: f64| ((c - lo).abs().max((hi - c).abs()) / s).ceil() as i64;
    let t_max = reach(region.x[0], region.x[1], closed_form.x, sx)
        .max(reach(region.y[0], region.y[1], closed_form.y, sy))
        .max(reach(region.min_altitude, region.max_altitude, closed_form.z, sh))
        .max(1);
    for t in 1..=t_max {
        let mut best: Vec<(f64, Vec3)> = Vec::new();
        for (i, j, k) in ring_offsets(t) {
            let p =
                Vec3::new(closed_form.x + i as f64 * sx, closed_form.y + j as f64 * sy, closed_form.z + k as f64 * sh);
            if !region.contains(p) || !acceptable(p) {
                continue;
            }
            best.push((p.distance(closed_form), p));
        }
        if let Some(d_min) = best.iter().map(|b| b.0).reduce(f64::min) {
            let ties: Vec<Vec3> = best.into_iter().filter(|b| b.0 <= d_min * (1.0 + 1e-12)).map(|b| b.1).collect();
            let pick = if ties.len() == 1 { 0 } else { rng.random_range(0..ties.len()) };
            return Ok(ties[pick]);
        }
    }
    Err(Error::NoLosPosition)
}

/// Deployed relay position: `closed_form` if both hops see LoS there, otherwise
/// the nearest dual-LoS grid point found by [`neighborhood_search`].
pub fn los_adjusted_position(
    env_real: &EnvironmentRealization,
    env: &EnvParams,
    closed_form: Vec3,
    region: &FeasibleBox,
    sn: Vec3,
    dn: Vec3,
) -> Result<Vec3> {
    let mut failure = None;
    let mut rng = env_real.stream(&[STREAM_TIES]);
    let found = neighborhood_search(
        closed_form,
        region,
        |uav| {
            let placement = Placement { sn, uav, dn };
            let dual = placement
                .has_los(LinkRole::S2V, env_real, env)
                .and_then(|a| Ok(a && placement.has_los(LinkRole::V2D, env_real, env)?));
            match dual {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    false
                }
            }
        },
        &mut rng,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    found
}
