//! Curvature-aware embedding and collective link prediction for two-layer
//! multiplex networks.
//!
//! Each network layer gets its own constant-curvature space: the layer's
//! curvature is estimated from Ollivier-Ricci curvature on edges, nodes are
//! embedded with a curvature-aware graph attention encoder, and training
//! combines intra-network contrastive losses (node-node, node-supernode via
//! I-Louvain communities) with an inter-network loss on anchor pairs.
//! Evaluation covers intra-link prediction (AUC/F1 through a Fermi-Dirac
//! decoder) and cross-network alignment (Hit@K/MRR in the common tangent
//! space).

pub mod autodiff;
pub mod checkpoint;
pub mod community;
pub mod config;
pub mod curvature;
pub mod evaluation;
pub mod graph;
pub mod linalg;
pub mod manifold;
pub mod model;
pub mod training;

mod error;

pub use error::{Error, Result};
