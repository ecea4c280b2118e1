//! Finite simplicial complexes, the integer Green function of their connection Laplacian,
//! curvature identities, and critical points of the Helmholtz free energy.

pub mod cliques;
pub mod complex;
pub mod curvature;
pub mod derived;
pub mod error;
pub mod fixtures;
pub mod hodge;
pub mod io;
pub mod linalg;
pub mod potential;
pub mod thermo;
pub mod verify;

pub use complex::{erdos_renyi_graph, Face, GraphSpec, SimplicialComplex, DEFAULT_FACE_CAP};
pub use error::{Error, Result};
pub use linalg::ExactMatrix;
pub use potential::{green_function, GreenFunction};
