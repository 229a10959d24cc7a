//! Interconnect topologies built from lattices: the `n`-dimensional mesh,
//! the hypercube, and the symplectic topology whose nodes are the weights
//! of the `sp(2n, C)` representation with highest weight `(M, ..., M)` and
//! whose edges are its roots.
//!
//! Distances, diameters, degrees and densities come from closed forms;
//! [`oracle`] checks them against breadth-first search on the explicit
//! graph.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod metrics;
pub mod oracle;
pub mod roots;
pub mod topology;

pub use error::{Error, Result};
pub use lattice::{label, node_count, unlabel, Family, NodeAddress, NodeLabel, TopologySpec};
pub use metrics::{
    density, density_ratio, diameter, distance, mean_path_length, path_length_histogram,
    path_length_histogram_sampled, summary, PathLengthHistogram, TopologySummary,
};
pub use topology::{NodeClass, Topology};
