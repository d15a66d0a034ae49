//! Exact scalars, polynomials, tridegrees, sparse linear algebra and truncated series.

pub mod linalg;
pub mod poly;
pub mod polymat;
pub mod rat;
pub mod series;
pub mod tridegree;

pub use linalg::{ColMat, Echelon, SparseVec};
pub use poly::{Image, MPoly, Mono, PolyError, Var, VarSet};
pub use polymat::PolyMat;
pub use rat::Rat;
pub use series::{expand_closed_form, Floor, GradedDims, RatFn, SeriesError, SeriesWindow};
pub use tridegree::TriDeg;
