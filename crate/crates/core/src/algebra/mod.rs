//! Exact arithmetic: prime and extension fields, truncated rings, matrices,
//! and the semilinear solver behind the Lang equation.

pub mod embed;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod semilinear;
pub mod trunc;

pub use embed::{subfield_embedding, SubfieldEmbedding};
pub use field::{field, FieldDesc, Fq};
pub use linalg::{Echelon, FieldMatrix, ModMatrix};
pub use poly::{char_poly, min_poly, squarefree_test, Poly};
pub use semilinear::{solve_semilinear, SemilinearKernel};
pub use trunc::{TruncElem, TruncMatrix};
