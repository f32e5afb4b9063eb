pub mod cycle;
pub mod embed;
pub mod enumerate;
pub mod flag;

pub use cycle::{cycle_report, special_flag, CycleCase, CycleOptions, CycleReport};
pub use enumerate::{coxeter_count, enumerate_brute, enumerate_cycle, FlagSpace, MAX_FLAGS};
pub use flag::{cycle_perm, in_dl_variety, relpos, Flag, Perm};
