pub mod clifford;
pub mod cyclo;
pub mod dixon;
pub mod invariance;
pub mod orbits;

pub use clifford::{clifford_nilpotent_chars, CliffordReport, InducedCharacter};
pub use cyclo::{CycValue, Cyclotomic};
pub use dixon::{dixon_table, CharacterTable, DixonPrime, MAX_CLASSES};
pub use invariance::{allowed_degrees, sh_fixed_rows, verify_invariance, CharacterRow, InvarianceReport, MovedWitness};
pub use orbits::{orbit_map, orbit_twist_offenders, AdjointOrbit, OrbitContext, OrbitMapResult, OrbitType, RowOrbit};
