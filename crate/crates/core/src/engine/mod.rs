//! Generic sampling API and its two executors.
//!
//! A [`SamplingSpec`] describes an algorithm; [`run_sampling`] expands it
//! from a list of roots, one synchronous step at a time. Every random choice
//! is keyed by `(seed, sample, step, slot)` through [`crate::rng`], so the
//! sample-parallel and transit-parallel executors return identical
//! [`SampleSet`]s for any number of workers. They differ only in how work is
//! grouped and in how often neighbor lists are read ([`AccessStats`]).

mod collective;
mod executor;
mod sample_set;
mod spec;
mod transit;

pub use executor::{execute_sample_parallel, execute_transit_parallel, run_sampling, AccessStats, Strategy};
pub use sample_set::{Sample, SampleDiff, SampleSet, StepRecord, SAMPLE_FORMAT_VERSION, SAMPLE_MAGIC};
pub use spec::{
    CollectiveContext, CollectiveSampler, CollectiveScope, NextContext, SampleView, SamplingSpec, SamplingType,
};
pub use transit::{build_transit_groups, TransitGroup};
