//! Chord directions of `φ` near a point: one-sided limits at corners,
//! spirals, direction clusters at irrationals, and the empirical constant of
//! the `√|h|/√q` increment bound.
//!
//! Offsets `h` are in `x` units throughout (`t = x/(2π)`).

mod chord;
mod cluster;
mod corner;
mod lemma;
mod profile;
mod schedule;
mod spiral;

use core::f64::consts::TAU;

pub use chord::{chord_direction, Chord, ChordSource, PhiChords};
pub use cluster::{cluster_from, convergent_offsets, direction_cluster, ClusterReport, ClusterVerdict};
pub use corner::{corner_check, CornerReport};
pub use lemma::{lemma_constant_estimate, lemma_constant_estimate_with, lemma_ratio, LemmaConfig, LemmaEstimate};
pub use profile::{
    accumulated_turning, axial_spread, max_circular_gap, nearest_eighth_root, DirectionProfile,
    DirectionSample,
};
pub use schedule::{HSchedule, Side};
pub use spiral::{spiral_profile, SpiralReport};

use crate::diophantine::Rational;
use crate::error::invalid;
use crate::series::{Evaluator, TimePoint};
use crate::Result;

/// Shared settings of the chord analyses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub evaluator: Evaluator,
    /// Relative tolerance of each chord (see `phi_delta`).
    pub rel_tol: f64,
    /// Required ratio of chord magnitude to its error bound.
    pub resolve_factor: f64,
    /// Per-chord truncation budget for refinement of small chords.
    pub budget: u64,
    /// Fraction of a profile forming its tail window.
    pub tail_fraction: f64,
    /// Tail dispersion below which a limit is reported (radians).
    pub limit_dispersion: f64,
    /// Direction gap below which a spiral counts as dense (radians).
    pub spiral_gap: f64,
    /// Neighbourhood radius of visited directions (radians).
    pub cluster_radius: f64,
    /// Spread above which no single tangent exists (radians).
    pub cluster_threshold: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            evaluator: Evaluator::default(),
            rel_tol: 1e-4,
            resolve_factor: 10.0,
            budget: 150_000_000,
            tail_fraction: 1.0 / 3.0,
            limit_dispersion: 0.02,
            spiral_gap: 10f64.to_radians(),
            cluster_radius: 5f64.to_radians(),
            cluster_threshold: 30f64.to_radians(),
        }
    }
}

impl GeometryConfig {
    /// The evaluator's offset floor converted to `x` units.
    pub fn floor_x(&self) -> f64 {
        TAU * self.evaluator.config.h_floor
    }
}

pub(crate) fn time_point(pq: &Rational) -> Result<TimePoint> {
    let (p, q) = pq
        .to_small()
        .ok_or_else(|| invalid("pq", "numerator and denominator must fit in 64 bits"))?;
    TimePoint::rational(p, q)
}
