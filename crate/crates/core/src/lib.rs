//! Twisting operators, character tables and flag counts for `GL_n` and
//! `SL_n` over `F_q[π]/π^r`.

pub mod algebra;
pub mod characters;
pub mod error;
pub mod flags;
pub mod groups;
pub mod twist;

pub use error::{Error, Result};
