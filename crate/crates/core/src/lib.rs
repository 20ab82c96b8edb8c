//! ED degrees and ED critical points of orthogonally invariant matrix
//! varieties, computed on the diagonal restriction and lifted back to
//! matrix space through a singular value decomposition.

pub mod linalg;
pub mod polyalg;
pub mod homotopy;
pub mod spectral;
pub mod arrangements;
pub mod edcrit;
pub mod transfer;
pub mod catalog;
