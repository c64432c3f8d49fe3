//! Simulation and verification of hierarchical quantum information splitting.
//!
//! A dealer (Alice) shares a four-qubit channel with three agents and
//! teleports an unknown qubit so that Diana can recover it with the help of
//! either Bob or Charlie, while Bob or Charlie need both of the others.

pub mod access_audit;
pub mod parallel;
pub mod protocol;
pub mod qmath;
pub mod rng;
pub mod sampling;
