//! Experiments over perfect squares `n = k²`: identity verification, leading
//! spectra, sweeps, the oscillatory fit overlay, and growth-rate probes.

mod fit;
mod probe;
mod spectra;
mod sweep;
mod verify;

pub use fit::{fit_overlay, FitCurveConfig, FitSample, LogBase};
pub use probe::{conjecture_probe, probe_records, ProbeSummary};
pub use spectra::{top_spectrum, SpectrumKind, DEFAULT_TOP};
pub use sweep::{sweep, sweep_record, SweepConfig, SweepRecord, SweepValues, EIG_SLOTS};
pub use verify::{verify_identities, CheckOutcome, CheckStatus, VerificationReport, Tolerances};
