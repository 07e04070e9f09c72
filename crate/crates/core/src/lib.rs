//! Bond and site percolation on directed random graphs with a prescribed
//! joint (in, out) degree distribution.
//!
//! The crate samples uniform simple digraphs through the directed
//! configuration model, percolates them, measures the largest strongly
//! connected component, and evaluates the generating-function predictions
//! for the percolation threshold `π_c = μ/μ₁₁` and the giant component
//! fractions `c^bond(π)` and `c^site(π) = π·c^bond(π)`.

pub mod components;
pub mod configmodel;
pub mod degrees;
pub mod error;
pub mod experiments;
pub mod io;
pub mod percolation;
pub mod rng;
pub mod theory;

pub use components::{
    largest_scc_fraction, strong_component_of, strongly_connected_components, SccPartition,
};
pub use configmodel::{
    matching_probability, sample_configuration, sample_simple, simple_probability, Digraph, Probability,
    SimpleFormula, SimpleSample, SimpleSampler, DEFAULT_MAX_ATTEMPTS,
};
pub use degrees::{realize_sequence, DegreeDistribution, DegreeSequence, PropernessReport, Validity};
pub use error::{Error, Result};
pub use experiments::{
    run_experiment, summarize, ExperimentConfig, ExperimentResult, PiSummary, TrialRecord,
};
pub use io::DistributionSource;
pub use percolation::{bond_percolate, percolate, site_percolate, Mode, PercolationOutcome};
pub use rng::Stream;
pub use theory::{
    bond_distribution, critical_threshold, gscc_fraction, pgf_eval, site_distribution, solve_fixed_point,
    u_minus, u_plus, TheoryMode, TheoryPrediction,
};
