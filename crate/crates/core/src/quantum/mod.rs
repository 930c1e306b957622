//! Finite-dimensional multipartite states and the linear algebra on them.

mod density;
mod family;
mod io;
mod isometry;
mod pure;
pub mod sampling;
mod signature;

pub use density::{DensityMatrix, SPECTRUM_FLOOR};
pub use family::{bell, bell_c, embed_product, ghz, make_product_family, w_state};
pub use io::{MatrixRecord, State, StateRecord};
pub use isometry::Isometry;
pub use pure::{PureState, Schmidt};
pub use sampling::{random_density, random_pure};
pub use signature::{label, Bipartition, CutLayout, DimSignature};
