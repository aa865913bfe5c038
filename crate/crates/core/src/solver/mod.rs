//! Scattering and Bloch solutions of `A'' + (energy - V(x)) A = 0`.

pub mod bloch;
pub mod field;
pub mod oracle;
pub mod tm;

pub use bloch::{bloch_analysis, BlochAnalysis};
pub use field::{amplitudes_from_tm, solve_scattering, FieldSolution, Incidence, RegionWave};
pub use oracle::ode_oracle;
pub use tm::{cos_sinc, monodromy, segment_tm, total_tm, Propagator, TransferMatrix};
