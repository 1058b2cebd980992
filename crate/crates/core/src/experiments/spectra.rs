use std::fmt;
use std::str::FromStr;

use crate::builder::{MatrixKind, MertensFamily};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, SpectrumResult};
use crate::scalar::exact_sqrt;

pub const DEFAULT_TOP: usize = 8;

/// The two matrices whose spectra are swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    /// The Mertens matrix `T U⁻¹ T`.
    M,
    /// The preconditioned inverse `K⁻¹`.
    Kinv,
}

impl SpectrumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumKind::M => "M",
            SpectrumKind::Kinv => "Kinv",
        }
    }

    pub fn matrix_kind(self) -> MatrixKind {
        match self {
            SpectrumKind::M => MatrixKind::M,
            SpectrumKind::Kinv => MatrixKind::Kinv,
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" => Ok(SpectrumKind::M),
            "Kinv" => Ok(SpectrumKind::Kinv),
            other => Err(Error::Parse(format!("spectrum kind must be M or Kinv, got {other:?}"))),
        }
    }
}

/// Leading `count` eigenpairs of `M_n` or `K_n⁻¹` (fewer when the matrix is smaller).
pub fn top_spectrum(n: u64, kind: SpectrumKind, count: usize, dim_cap: usize) -> Result<SpectrumResult<f64>> {
    if exact_sqrt(n).filter(|&r| r > 0).is_none() {
        return Err(Error::NotPerfectSquare(n));
    }
    let family = MertensFamily::<f64>::new(n, dim_cap)?;
    let a = family.build(kind.matrix_kind())?;
    sym_eig(&a, count.min(a.dim()))
}
