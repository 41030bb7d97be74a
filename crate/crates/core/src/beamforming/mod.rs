//! Analog beamforming: LoS steering initialization, the interference-capped
//! subproblem, constant-modulus projection and the alternating suppression
//! loop.

mod ais;
mod repair;
mod solver;

pub use ais::{run_ais, AisConfig, AisOutcome, AisState, InteriorCensus, IterationRecord, SuppressionSchedule};
pub use repair::{cm_repair, RepairOutcome};
pub use solver::{solve_bf_subproblem, SubproblemSolution};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{steering_vector, AngleSet, ArraySet};

/// Phase-shifter weights with per-element magnitude cap `1/sqrt(N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beamformer {
    pub weights: Vec<Complex64>,
    pub cap: f64,
}

impl Beamformer {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// All elements on the cap circle (within 1e-9).
    pub fn is_constant_modulus(&self) -> bool {
        self.weights.iter().all(|w| (w.norm() - self.cap).abs() <= 1e-9)
    }

    /// Normalized steering vector `a(angles) / sqrt(N)`.
    pub fn steering(upa: &crate::channel::UpaSpec, angles: AngleSet) -> Self {
        let a = steering_vector(upa, angles);
        let cap = element_cap(a.len());
        Self { weights: a.into_iter().map(|z| z * cap).collect(), cap }
    }
}

/// `1 / sqrt(n)`.
pub fn element_cap(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

/// Projects every element onto the cap circle, keeping its phase. Zero
/// elements map to `cap`.
pub fn normalize_cm(w: &[Complex64], cap: f64) -> Beamformer {
    let weights = w
        .iter()
        .map(|z| {
            let r = z.norm();
            if r > 0.0 {
                z * (cap / r)
            } else {
                Complex64::new(cap, 0.0)
            }
        })
        .collect();
    Beamformer { weights, cap }
}

/// The four BFVs: SN transmit, relay receive, relay transmit, DN receive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamformerSet {
    pub source: Beamformer,
    pub relay_rx: Beamformer,
    pub relay_tx: Beamformer,
    pub dest: Beamformer,
}

/// LoS-steered starting point: the S2V pair steers along the SN-relay line,
/// the V2D pair along the DN-relay line.
pub fn init_beamformers(arrays: &ArraySet, los_s2v: AngleSet, los_v2d: AngleSet) -> BeamformerSet {
    BeamformerSet {
        source: Beamformer::steering(&arrays.sn, los_s2v),
        relay_rx: Beamformer::steering(&arrays.rx, los_s2v),
        relay_tx: Beamformer::steering(&arrays.tx, los_v2d),
        dest: Beamformer::steering(&arrays.dn, los_v2d),
    }
}
