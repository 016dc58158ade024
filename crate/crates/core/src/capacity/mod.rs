//! Hop entropies, optimal pair distributions, the single-source capacity
//! solver, closed forms for the unbounded cascade and the cut-set oracle.

pub mod appendix;
pub mod closed_form;
pub mod cutset;
pub mod profile;
pub mod solver;

pub use appendix::{appendix_checks, AppendixReport};
pub use closed_form::{capacity_infinite, duty_cycle_infinite, infinite_listen_fraction, time_sharing_rate};
pub use cutset::{cutset_min_entropy, CutSetReport, StructuredJoint};
pub use profile::{h_first_hop, h_hop, pair_pmf, ListenProfile, PairPmf};
pub use solver::{capacity_single_relay, solve_capacity, CapacityResult, DEFAULT_TOL};
