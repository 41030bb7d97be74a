//! Alternating interference suppression.
//!
//! Each iteration re-solves the four BFVs in turn (relay Rx, relay Tx, SN,
//! DN), each against the latest version of the other three. The SI and
//! SN-DN interference caps start at the interference of the initial beams
//! and shrink by `shrink_factor` every half-step toward the floor `leakage_floor`. After the
//! beams, the powers are reset to the max-min allocation and the rate is
//! recorded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{cm_repair, normalize_cm, solve_bf_subproblem, Beamformer, BeamformerSet};
use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::rates::{achievable_rates, effective_gains, optimal_powers, EffectiveGains, NoisePowers, PowerPair};

/// Loop parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AisConfig {
    /// Floor of the interference caps (amplitude).
    pub leakage_floor: f64,
    /// Shrink factor of the caps, `> 1`.
    pub shrink_factor: f64,
    /// Stop once an iteration improves the rate by no more than this.
    pub min_rate_gain: f64,
    pub max_iters: usize,
    /// Apply the constant-modulus repair before normalizing.
    pub cm_repair: bool,
}

impl AisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.leakage_floor >= 0.0 && self.leakage_floor.is_finite()) {
            return Err(Error::NegativeLeakage(self.leakage_floor));
        }
        if !(self.shrink_factor > 1.0 && self.shrink_factor.is_finite()) {
            return Err(Error::InvalidInput(format!("shrink factor must exceed 1, got {}", self.shrink_factor)));
        }
        if !(self.min_rate_gain > 0.0) {
            return Err(Error::InvalidInput(format!(
                "stopping threshold must be positive, got {}",
                self.min_rate_gain
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Interference caps `eta_i = leakage_floor + mu_i`. `slack[0]`/`slack[1]` belong to the SI
/// pair (relay Rx, relay Tx) and `slack[2]`/`slack[3]` to the SN-DN pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionSchedule {
    pub leakage_floor: f64,
    pub shrink_factor: f64,
    pub slack: [f64; 4],
}

impl SuppressionSchedule {
    pub fn cap(&self, i: usize) -> f64 {
        self.leakage_floor + self.slack[i]
    }
}

/// Power budget and noise seen by the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Budget {
    source_cap: f64,
    relay_cap: f64,
    noises: NoisePowers,
}

/// One row of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub rate: f64,
    pub gains: EffectiveGains,
    pub powers: PowerPair,
    pub caps: [f64; 4],
}

/// Counts of subproblem outputs with elements strictly inside the cap,
/// before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InteriorCensus {
    pub solves: usize,
    pub solves_with_interior: usize,
    pub max_interior: usize,
    /// Interior pairs the repair skipped for lack of a shared ratio.
    pub skipped_pairs: usize,
}

impl InteriorCensus {
    fn record(&mut self, interior: usize, skipped: usize) {
        self.solves += 1;
        if interior > 0 {
            self.solves_with_interior += 1;
        }
        self.max_interior = self.max_interior.max(interior);
        self.skipped_pairs += skipped;
    }

    pub fn merge(&mut self, other: &InteriorCensus) {
        self.solves += other.solves;
        self.solves_with_interior += other.solves_with_interior;
        self.max_interior = self.max_interior.max(other.max_interior);
        self.skipped_pairs += other.skipped_pairs;
    }
}

/// Loop state after `completed` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct AisState {
    pub beams: BeamformerSet,
    pub schedule: SuppressionSchedule,
    pub powers: PowerPair,
    pub gains: EffectiveGains,
    pub trace: Vec<IterationRecord>,
    pub completed: usize,
    pub census: InteriorCensus,
}

/// Final beams, powers and trace of [`run_ais`].
#[derive(Debug, Clone, PartialEq)]
pub struct AisOutcome {
    pub beams: BeamformerSet,
    pub powers: PowerPair,
    pub gains: EffectiveGains,
    pub rate: f64,
    pub trace: Vec<IterationRecord>,
    pub iterations: usize,
    pub census: InteriorCensus,
}

fn gains_of(beams: &BeamformerSet, channels: &ChannelSet) -> Result<EffectiveGains> {
    effective_gains(
        &beams.source.weights,
        &beams.relay_rx.weights,
        &beams.relay_tx.weights,
        &beams.dest.weights,
        channels,
    )
}

fn settle(beams: &BeamformerSet, channels: &ChannelSet, budget: &Budget) -> Result<(EffectiveGains, PowerPair, f64)> {
    let gains = gains_of(beams, channels)?;
    let powers = optimal_powers(&gains, budget.source_cap, budget.relay_cap, budget.noises)?;
    let rate = achievable_rates(&gains, powers, budget.noises).end_to_end;
    Ok((gains, powers, rate))
}

impl AisState {
    /// Iteration-0 state: the given beams, caps seeded from their current
    /// SI and SN-DN leakage, and max-min powers.
    pub fn start(
        beams: BeamformerSet,
        channels: &ChannelSet,
        leakage_floor: f64,
        shrink_factor: f64,
        source_cap: f64,
        relay_cap: f64,
        noises: NoisePowers,
    ) -> Result<Self> {
        let budget = Budget { source_cap, relay_cap, noises };
        let (gains, powers, rate) = settle(&beams, channels, &budget)?;
        let mu2 = gains.g_si.sqrt();
        let mu4 = gains.g_s2d.sqrt();
        let schedule = SuppressionSchedule { leakage_floor, shrink_factor, slack: [0.0, mu2, 0.0, mu4] };
        let caps = [schedule.cap(0), schedule.cap(1), schedule.cap(2), schedule.cap(3)];
        Ok(Self {
            beams,
            schedule,
            powers,
            gains,
            trace: vec![IterationRecord { iteration: 0, rate, gains, powers, caps }],
            completed: 0,
            census: InteriorCensus::default(),
        })
    }

    pub fn rate(&self) -> f64 {
        self.trace.last().map_or(0.0, |r| r.rate)
    }

    /// One full pass over the four BFVs followed by power control.
    pub fn iterate(
        mut self,
        channels: &ChannelSet,
        source_cap: f64,
        relay_cap: f64,
        noises: NoisePowers,
        repair: bool,
    ) -> Result<Self> {
        let budget = Budget { source_cap, relay_cap, noises };
        let k = self.completed + 1;
        let shrink_factor = self.schedule.shrink_factor;
        let mut census = self.census;
        let mut step =
            |name: &'static str, h_sig: Vec<Complex64>, h_int: Vec<Complex64>, leakage_floor: f64, cap: f64| {
                let sol = solve_bf_subproblem(&h_sig, &h_int, leakage_floor, cap).map_err(|e| Error::Solver {
                    iteration: k,
                    problem: name,
                    reason: e.to_string(),
                })?;
                let mut w = sol.weights;
                let mut skipped = 0;
                if repair {
                    let out = cm_repair(&w, &h_sig, &h_int, cap);
                    skipped = out.skipped_pairs;
                    w = out.weights;
                }
                let interior = w.iter().filter(|z| z.norm() < cap - 1e-9).count();
                census.record(interior, skipped);
                Ok::<Beamformer, Error>(normalize_cm(&w, cap))
            };

        self.schedule.slack[0] = self.schedule.slack[1] / shrink_factor;
        let beams = &mut self.beams;
        beams.relay_rx = step(
            "relay receive",
            channels.s2v.apply(&beams.source.weights),
            channels.si.apply(&beams.relay_tx.weights),
            self.schedule.cap(0),
            beams.relay_rx.cap,
        )?;
        self.schedule.slack[1] = self.schedule.slack[0] / shrink_factor;
        beams.relay_tx = step(
            "relay transmit",
            channels.v2d.apply_adjoint(&beams.dest.weights),
            channels.si.apply_adjoint(&beams.relay_rx.weights),
            self.schedule.cap(1),
            beams.relay_tx.cap,
        )?;
        self.schedule.slack[2] = self.schedule.slack[3] / shrink_factor;
        beams.source = step(
            "source transmit",
            channels.s2v.apply_adjoint(&beams.relay_rx.weights),
            channels.s2d.apply_adjoint(&beams.dest.weights),
            self.schedule.cap(2),
            beams.source.cap,
        )?;
        self.schedule.slack[3] = self.schedule.slack[2] / shrink_factor;
        beams.dest = step(
            "destination receive",
            channels.v2d.apply(&beams.relay_tx.weights),
            channels.s2d.apply(&beams.source.weights),
            self.schedule.cap(3),
            beams.dest.cap,
        )?;
        self.census = census;

        let (gains, powers, rate) = settle(&self.beams, channels, &budget)?;
        if !rate.is_finite() {
            return Err(Error::Solver { iteration: k, problem: "rate", reason: format!("non-finite rate {rate}") });
        }
        let s = &self.schedule;
        self.trace.push(IterationRecord {
            iteration: k,
            rate,
            gains,
            powers,
            caps: [s.cap(0), s.cap(1), s.cap(2), s.cap(3)],
        });
        self.gains = gains;
        self.powers = powers;
        self.completed = k;
        Ok(self)
    }
}

/// Runs the loop from `init` until an iteration improves the rate by at
/// most `min_rate_gain` or `max_iters` iterations have run.
pub fn run_ais(
    channels: &ChannelSet,
    init: BeamformerSet,
    source_cap: f64,
    relay_cap: f64,
    noises: NoisePowers,
    config: &AisConfig,
) -> Result<AisOutcome> {
    config.validate()?;
    let mut state =
        AisState::start(init, channels, config.leakage_floor, config.shrink_factor, source_cap, relay_cap, noises)?;
    while state.completed < config.max_iters {
        let before = state.rate();
        state = state.iterate(channels, source_cap, relay_cap, noises, config.cm_repair)?;
        if state.rate() - before <= config.min_rate_gain {
            break;
        }
    }
    Ok(AisOutcome {
        rate: state.rate(),
        beams: state.beams,
        powers: state.powers,
        gains: state.gains,
        iterations: state.completed,
        trace: state.trace,
        census: state.census,
    })
}
