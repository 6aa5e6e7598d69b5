//! Symmetric graph lifts (line graphs of bipartite double covers), lift
//! towers, continuous-time quantum walks and coherence metrics.

pub mod coherence;
pub mod commands;
pub mod config;
pub mod ctqw;
pub mod format;
pub mod graph;
pub mod rng;
pub mod spectral;
pub mod structural;
