//! Seeded Monte Carlo trials of the full pipeline and its two baselines.
//!
//! Every trial derives its own seed from the master seed and its index, so
//! trials are independent of execution order and can run on any number of
//! workers. Within a trial all schemes share one environment realization.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beamforming::{init_beamformers, run_ais, AisConfig, BeamformerSet, InteriorCensus, IterationRecord};
use crate::channel::{
    mix, ArraySet, ChannelMatrix, ChannelSet, EnvParams, EnvironmentRealization, LinkRole, PathComponent, Placement,
    UpaSpec, Vec3,
};
use crate::error::{Error, Result};
use crate::positioning::{
    approx_upper_bounds, conditional_optimal_position, los_adjusted_position, strict_upper_bounds, FeasibleBox,
    LinkBudget,
};
use crate::rates::{
    achievable_rates, dbm_to_watts, effective_gains, optimal_powers, EffectiveGains, NoisePowers, PowerPair,
};

const STREAM_DN: u64 = 0x444e;
const STREAM_RANDPOS: u64 = 0x5250;
const STREAM_MISALIGN: u64 = 0x4d41;

/// Where the destination node goes in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DnRule {
    Fixed(Vec3),
    /// Uniform over the disk of this radius around the SN.
    Disk(f64),
    /// Uniform on the circle of this radius around the SN.
    Circle(f64),
}

/// Everything needed to run trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub dn_rule: DnRule,
    pub min_altitude: f64,
    pub max_altitude: f64,
    pub grid: [f64; 3],
    pub arrays: ArraySet,
    /// Watts.
    pub source_power: f64,
    pub relay_power: f64,
    pub noise_at_relay: f64,
    pub noise_at_dest: f64,
    pub env: EnvParams,
    pub shrink_factor: f64,
    pub min_rate_gain: f64,
    pub max_iters: usize,
    pub cm_repair: bool,
    /// Full width of the uniform angle error, degrees.
    pub misalignment_deg: f64,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            dn_rule: DnRule::Disk(500.0),
            min_altitude: 100.0,
            max_altitude: 300.0,
            grid: [1.0; 3],
            arrays: ArraySet::uniform(UpaSpec::square(4)),
            source_power: dbm_to_watts(20.0),
            relay_power: dbm_to_watts(20.0),
            noise_at_relay: dbm_to_watts(-110.0),
            noise_at_dest: dbm_to_watts(-110.0),
            env: EnvParams::default(),
            shrink_factor: 10.0,
            min_rate_gain: 0.01,
            max_iters: 50,
            cm_repair: false,
            misalignment_deg: 0.0,
            trials: 1000,
            master_seed: 1,
            workers: 0,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.budget().validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if !(self.misalignment_deg >= 0.0 && self.misalignment_deg.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "misalignment must be >= 0 degrees, got {}",
                self.misalignment_deg
            )));
        }
        match self.dn_rule {
            DnRule::Disk(r) | DnRule::Circle(r) if !(r >= 10.0 && r.is_finite()) => {
                return Err(Error::InvalidInput(format!("DN radius must be at least 10 m, got {r}")));
            }
            _ => {}
        }
        FeasibleBox::between(Vec3::ORIGIN, Vec3::new(1.0, 1.0, 0.0), self.min_altitude, self.max_altitude, self.grid)?;
        self.ais_config().validate()
    }

    pub fn budget(&self) -> LinkBudget {
        LinkBudget {
            array_s2v: (self.arrays.sn.total() * self.arrays.rx.total()) as f64,
            array_v2d: (self.arrays.tx.total() * self.arrays.dn.total()) as f64,
            source_power: self.source_power,
            relay_power: self.relay_power,
            noise_at_relay: self.noise_at_relay,
            noise_at_dest: self.noise_at_dest,
        }
    }

    pub fn noises(&self) -> NoisePowers {
        NoisePowers { noise_at_relay: self.noise_at_relay, noise_at_dest: self.noise_at_dest }
    }

    /// Floor of the interference caps: a tenth of the noise amplitude
    /// referred to the transmit power, the tighter of the two hops.
    pub fn leakage_floor(&self) -> f64 {
        let a = self.noise_at_relay.sqrt() / (10.0 * self.source_power.sqrt());
        let b = self.noise_at_dest.sqrt() / (10.0 * self.relay_power.sqrt());
        a.min(b)
    }

    pub fn ais_config(&self) -> AisConfig {
        AisConfig {
            leakage_floor: self.leakage_floor(),
            shrink_factor: self.shrink_factor,
            min_rate_gain: self.min_rate_gain,
            max_iters: self.max_iters,
            cm_repair: self.cm_repair,
        }
    }

    /// Seed of trial `index`.
    pub fn trial_seed(&self, index: usize) -> u64 {
        mix(self.master_seed, &[index as u64])
    }
}

/// Rate and design of one scheme in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeResult {
    pub position: Vec3,
    /// End-to-end rate, bps/Hz (on the perturbed channels when misaligned).
    pub rate: f64,
    /// Rate on the nominal channels the design was made for.
    pub design_rate: f64,
    pub iterations: usize,
    pub gains: EffectiveGains,
    pub powers: PowerPair,
}

/// Everything recorded about one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub seed: u64,
    pub dn: Vec3,
    pub split: f64,
    pub closed_form: Vec3,
    /// True when no dual-LoS position was found and `closed_form` was used.
    pub fallback: bool,
    pub proposed: SchemeResult,
    pub randpos_ais: SchemeResult,
    pub despos_steer: SchemeResult,
    /// min of the two LoS-only bounds at the deployed position.
    pub approx_bound: f64,
    /// min of the two all-path bounds at the deployed position.
    pub strict_bound: f64,
    pub trace: Vec<IterationRecord>,
    pub census: InteriorCensus,
    /// Interference-cap floor used by the loop.
    pub leakage_floor: f64,
}

fn sample_dn(rule: DnRule, real: &EnvironmentRealization) -> Vec3 {
    let mut rng = real.stream(&[STREAM_DN]);
    match rule {
        DnRule::Fixed(p) => p,
        DnRule::Circle(r) => {
            let phi = rng.random::<f64>() * TAU;
            Vec3::new(r * phi.cos(), r * phi.sin(), 0.0)
        }
        DnRule::Disk(r) => loop {
            let rad = r * rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * TAU;
            if rad >= 10.0 {
                break Vec3::new(rad * phi.cos(), rad * phi.sin(), 0.0);
            }
        },
    }
}

/// Uniform grid point of `region`.
fn random_grid_point<R: Rng>(region: &FeasibleBox, rng: &mut R) -> Vec3 {
    let pick = |lo: f64, hi: f64, step: f64, u: f64| {
        let n = ((hi - lo) / step).floor();
        lo + (u * (n + 1.0)).floor().min(n) * step
    };
    Vec3::new(
        pick(region.x[0], region.x[1], region.step[0], rng.random()),
        pick(region.y[0], region.y[1], region.step[1], rng.random()),
        pick(region.min_altitude, region.max_altitude, region.step[2], rng.random()),
    )
}

/// Angle errors of one link: four uniforms on `[-1/2, 1/2]` per path slot
/// (departure elevation/azimuth, arrival elevation/azimuth). Slot 0 is the
/// LoS path, slots `1..` the NLoS paths.
fn misalignment_draws(seed: u64, role: LinkRole, slots: usize) -> Vec<[f64; 4]> {
    let mut rng = EnvironmentRealization::new(seed, [1.0; 3]).stream(&[STREAM_MISALIGN, role.tag()]);
    (0..slots).map(|_| std::array::from_fn(|_| rng.random::<f64>() - 0.5)).collect()
}

fn perturb(h: &ChannelMatrix, delta_rad: f64, seed: u64, tx: &UpaSpec, rx: &UpaSpec) -> ChannelMatrix {
    let nlos = h.components.iter().filter(|c| !c.is_los).count();
    let draws = misalignment_draws(seed, h.role, nlos + 1);
    let mut next_nlos = 1;
    let components: Vec<PathComponent> = h
        .components
        .iter()
        .map(|c| {
            let slot = if c.is_los {
                0
            } else {
                next_nlos += 1;
                next_nlos - 1
            };
            let [a, b, cc, d] = draws[slot];
            let mut out = *c;
            out.departure.elevation += delta_rad * a;
            out.departure.azimuth = (out.departure.azimuth + delta_rad * b).rem_euclid(TAU);
            out.arrival.elevation += delta_rad * cc;
            out.arrival.azimuth = (out.arrival.azimuth + delta_rad * d).rem_euclid(TAU);
            out
        })
        .collect();
    ChannelMatrix::from_components(h.role, components, tx, rx)
}

/// Perturbs every S2V and V2D path angle by an independent uniform error on
/// `[-delta_m/2, delta_m/2]` degrees. The SI and S2D channels are returned
/// unchanged. The same `seed` gives the same errors per path slot.
pub fn apply_misalignment(channels: &ChannelSet, arrays: &ArraySet, misalignment_deg: f64, seed: u64) -> ChannelSet {
    if misalignment_deg == 0.0 {
        return channels.clone();
    }
    let delta = misalignment_deg.to_radians();
    ChannelSet {
        s2v: perturb(&channels.s2v, delta, seed, &arrays.sn, &arrays.rx),
        v2d: perturb(&channels.v2d, delta, seed, &arrays.tx, &arrays.dn),
        s2d: channels.s2d.clone(),
        si: channels.si.clone(),
    }
}

enum Design {
    Ais,
    Steer,
}

struct Evaluated {
    result: SchemeResult,
    trace: Vec<IterationRecord>,
    census: InteriorCensus,
    channels: ChannelSet,
}

fn evaluate(
    scenario: &Scenario,
    real: &EnvironmentRealization,
    placement: Placement,
    design: Design,
    seed: u64,
) -> Result<Evaluated> {
    let channels = ChannelSet::build(real, &scenario.env, &placement, &scenario.arrays)?;
    let (_, los_s2v) = placement.los_link(LinkRole::S2V)?;
    let (_, los_v2d) = placement.los_link(LinkRole::V2D)?;
    let init = init_beamformers(&scenario.arrays, los_s2v, los_v2d);
    let noises = scenario.noises();
    let (beams, powers, gains, design_rate, iterations, trace, census): (
        BeamformerSet,
        PowerPair,
        EffectiveGains,
        f64,
        usize,
        Vec<IterationRecord>,
        InteriorCensus,
    ) = match design {
        Design::Ais => {
            let out =
                run_ais(&channels, init, scenario.source_power, scenario.relay_power, noises, &scenario.ais_config())?;
            (out.beams, out.powers, out.gains, out.rate, out.iterations, out.trace, out.census)
        }
        Design::Steer => {
            let gains = effective_gains(
                &init.source.weights,
                &init.relay_rx.weights,
                &init.relay_tx.weights,
                &init.dest.weights,
                &channels,
            )?;
            let powers = optimal_powers(&gains, scenario.source_power, scenario.relay_power, noises)?;
            let rate = achievable_rates(&gains, powers, noises).end_to_end;
            (init, powers, gains, rate, 0, Vec::new(), InteriorCensus::default())
        }
    };
    let rate = if scenario.misalignment_deg > 0.0 {
        let actual = apply_misalignment(&channels, &scenario.arrays, scenario.misalignment_deg, seed);
        let g = effective_gains(
            &beams.source.weights,
            &beams.relay_rx.weights,
            &beams.relay_tx.weights,
            &beams.dest.weights,
            &actual,
        )?;
        achievable_rates(&g, powers, noises).end_to_end
    } else {
        design_rate
    };
    Ok(Evaluated {
        result: SchemeResult { position: placement.uav, rate, design_rate, iterations, gains, powers },
        trace,
        census,
        channels,
    })
}

/// Runs trial `index` of `scenario`: proposed placement plus AIS, the
/// steering baseline at the same placement, and AIS at a random placement.
pub fn run_trial(scenario: &Scenario, index: usize) -> Result<TrialResult> {
    run_trial_inner(scenario, index).map_err(|e| Error::Trial { trial: index, source: Box::new(e) })
}

/// Placement stage of a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionReport {
    pub dn: Vec3,
    pub split: f64,
    pub closed_form: Vec3,
    /// Deployed position: the nearest dual-LoS grid point, or `closed_form` on fallback.
    pub position: Vec3,
    pub fallback: bool,
    /// LoS-only bounds (S2V, V2D) at the deployed position.
    pub approx_bounds: (f64, f64),
}

/// Closed-form placement and LoS adjustment of trial `index`.
pub fn design_position(scenario: &Scenario, index: usize) -> Result<PositionReport> {
    let real = EnvironmentRealization::new(scenario.trial_seed(index), scenario.grid);
    position_stage(scenario, &real)
}

fn position_stage(scenario: &Scenario, real: &EnvironmentRealization) -> Result<PositionReport> {
    let sn = Vec3::ORIGIN;
    let dn = sample_dn(scenario.dn_rule, real);
    let region = FeasibleBox::between(sn, dn, scenario.min_altitude, scenario.max_altitude, scenario.grid)?;
    let budget = scenario.budget();
    let (closed_form, split) = conditional_optimal_position(&budget, &region, &scenario.env, dn)?;
    let (position, fallback) = match los_adjusted_position(real, &scenario.env, closed_form, &region, sn, dn) {
        Ok(p) => (p, false),
        Err(Error::NoLosPosition) => (closed_form, true),
        Err(e) => return Err(e),
    };
    let approx_bounds = approx_upper_bounds(position, &budget, &scenario.env, sn, dn)?;
    Ok(PositionReport { dn, split, closed_form, position, fallback, approx_bounds })
}

fn run_trial_inner(scenario: &Scenario, index: usize) -> Result<TrialResult> {
    let seed = scenario.trial_seed(index);
    let real = EnvironmentRealization::new(seed, scenario.grid);
    let sn = Vec3::ORIGIN;
    let PositionReport { dn, split, closed_form, position, fallback, approx_bounds: (a1, a2) } =
        position_stage(scenario, &real)?;
    let region = FeasibleBox::between(sn, dn, scenario.min_altitude, scenario.max_altitude, scenario.grid)?;
    let designed = Placement { sn, uav: position, dn };
    let proposed = evaluate(scenario, &real, designed, Design::Ais, seed)?;
    let steer = evaluate(scenario, &real, designed, Design::Steer, seed)?;
    let random_uav = random_grid_point(&region, &mut real.stream(&[STREAM_RANDPOS]));
    let randpos = evaluate(scenario, &real, Placement { sn, uav: random_uav, dn }, Design::Ais, seed)?;

    let (s1, s2) = strict_upper_bounds(&proposed.channels.s2v, &proposed.channels.v2d, &scenario.budget())?;
    let mut census = proposed.census;
    census.merge(&randpos.census);
    Ok(TrialResult {
        index,
        seed,
        dn,
        split,
        closed_form,
        fallback,
        proposed: proposed.result,
        randpos_ais: randpos.result,
        despos_steer: steer.result,
        approx_bound: a1.min(a2),
        strict_bound: s1.min(s2),
        trace: proposed.trace,
        census,
        leakage_floor: scenario.leakage_floor(),
    })
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Runs all trials of `scenario` in parallel, in index order.
pub fn run_trials(scenario: &Scenario) -> Result<Vec<TrialResult>> {
    scenario.validate()?;
    with_pool(scenario.workers, || {
        (0..scenario.trials).into_par_iter().map(|i| run_trial(scenario, i)).collect::<Result<Vec<_>>>()
    })?
}

/// Quantity swept by [`run_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    SourcePowerDbm,
    RelayPowerDbm,
    /// SN-DN distance in meters (DN on a circle around the SN).
    Distance,
    /// Side `N_a` of all four square arrays.
    Array,
    MisalignmentDeg,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::SourcePowerDbm,
        SweepParam::RelayPowerDbm,
        SweepParam::Distance,
        SweepParam::Array,
        SweepParam::MisalignmentDeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::SourcePowerDbm => "p_s_tot_dbm",
            SweepParam::RelayPowerDbm => "p_v_tot_dbm",
            SweepParam::Distance => "distance",
            SweepParam::Array => "array",
            SweepParam::MisalignmentDeg => "delta_m_deg",
        }
    }

    /// `base` with the swept quantity set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = base.clone();
        match self {
            SweepParam::SourcePowerDbm => s.source_power = dbm_to_watts(value),
            SweepParam::RelayPowerDbm => s.relay_power = dbm_to_watts(value),
            SweepParam::Distance => s.dn_rule = DnRule::Circle(value),
            SweepParam::Array => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= 64.0) {
                    return Err(Error::InvalidInput(format!("array side must be an integer in 1..=64, got {value}")));
                }
                s.arrays =
                    ArraySet::uniform(UpaSpec::new(value as usize, value as usize, s.arrays.sn.spacing_over_lambda)?);
            }
            SweepParam::MisalignmentDeg => s.misalignment_deg = value,
        }
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter '{s}'")))
    }
}

/// A parameter, its values and the scenario they modify.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub base: Scenario,
}

/// One aggregated output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_param: String,
    pub sweep_value: f64,
    pub scheme: String,
    pub mean_rate_bps_hz: f64,
    pub stderr: f64,
    pub n_trials: usize,
    pub mean_iters: f64,
    pub fallback_frac: f64,
}

/// Scheme names in output order.
pub const SCHEMES: [&str; 4] = ["proposed", "randpos_ais", "despos_steer", "strict_bound"];

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-scheme rows for one set of trials.
pub fn aggregate(param: &str, value: f64, trials: &[TrialResult]) -> Vec<SweepRow> {
    let fallback_frac = trials.iter().filter(|t| t.fallback).count() as f64 / trials.len().max(1) as f64;
    SCHEMES
        .iter()
        .map(|&scheme| {
            let (rates, iters): (Vec<f64>, Vec<f64>) = trials
                .iter()
                .map(|t| match scheme {
                    "proposed" => (t.proposed.rate, t.proposed.iterations as f64),
                    "randpos_ais" => (t.randpos_ais.rate, t.randpos_ais.iterations as f64),
                    "despos_steer" => (t.despos_steer.rate, 0.0),
                    _ => (t.strict_bound, 0.0),
                })
                .unzip();
            let (mean, stderr) = mean_stderr(&rates);
            SweepRow {
                sweep_param: param.to_string(),
                sweep_value: value,
                scheme: scheme.to_string(),
                mean_rate_bps_hz: mean,
                stderr,
                n_trials: trials.len(),
                mean_iters: mean_stderr(&iters).0,
                fallback_frac,
            }
        })
        .collect()
}

/// Runs every value of `spec` and returns four rows per value.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(spec.values.len() * SCHEMES.len());
    for &v in &spec.values {
        let scenario = spec.param.apply(&spec.base, v)?;
        let trials = run_trials(&scenario)?;
        rows.extend(aggregate(spec.param.name(), v, &trials));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Scenario {
        Scenario { trials: 4, master_seed: 11, workers: 2, ..Scenario::default() }
    }

    #[test]
    fn trial_replays_bit_exactly() {
        let s = small();
        let a = run_trial(&s, 3).unwrap();
        let b = run_trial(&s, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn steering_never_beats_the_bound() {
        let s = small();
        for t in run_trials(&s).unwrap() {
            assert!(t.despos_steer.rate <= t.strict_bound + 1e-9);
            assert!(t.proposed.rate <= t.strict_bound + 1e-9);
            assert!(t.trace.len() <= s.max_iters + 1);
        }
    }

    #[test]
    fn zero_misalignment_is_identity() {
        let s = small();
        let real = EnvironmentRealization::new(5, s.grid);
        let placement =
            Placement { sn: Vec3::ORIGIN, uav: Vec3::new(100.0, 80.0, 120.0), dn: Vec3::new(200.0, 150.0, 0.0) };
        let ch = ChannelSet::build(&real, &s.env, &placement, &s.arrays).unwrap();
        assert_eq!(apply_misalignment(&ch, &s.arrays, 0.0, 9), ch);
        let moved = apply_misalignment(&ch, &s.arrays, 5.0, 9);
        assert_ne!(moved.s2v, ch.s2v);
        assert_eq!(moved.si, ch.si);
        assert_eq!(moved, apply_misalignment(&ch, &s.arrays, 5.0, 9));
    }

    #[test]
    fn disk_sampling_respects_minimum_separation() {
        for seed in 0..200 {
            let real = EnvironmentRealization::new(seed, [1.0; 3]);
            let dn = sample_dn(DnRule::Disk(500.0), &real);
            let r = dn.x.hypot(dn.y);
            assert!((10.0..=500.0).contains(&r));
        }
    }

    #[test]
    fn random_grid_points_stay_in_box() {
        let region = FeasibleBox::between(Vec3::ORIGIN, Vec3::new(-30.5, 12.0, 0.0), 100.0, 300.0, [1.0; 3]).unwrap();
        let mut rng = EnvironmentRealization::new(1, [1.0; 3]).stream(&[1]);
        for _ in 0..1000 {
            assert!(region.contains(random_grid_point(&region, &mut rng)));
        }
    }

    #[test]
    fn sweep_names_round_trip() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        assert!("bogus".parse::<SweepParam>().is_err());
    }

    #[test]
    fn default_eta_matches_noise_floor() {
        let s = Scenario::default();
        let want = 1e-7 / (10.0 * 0.1f64.sqrt());
        assert!((s.leakage_floor() - want).abs() < 1e-18);
    }
}
