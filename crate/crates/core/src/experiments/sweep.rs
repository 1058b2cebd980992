use std::thread;

use crate::builder::MertensFamily;
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, symmetric_eigenvalues};
use crate::sieve::MertensTable;

use super::spectra::SpectrumKind;

/// Eigenvalue columns in a sweep row.
pub const EIG_SLOTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub k_min: u64,
    pub k_max: u64,
    pub step: u64,
    pub kind: SpectrumKind,
    pub workers: usize,
    pub dim_cap: usize,
    pub sieve_limit: u64,
}

impl SweepConfig {
    pub fn ks(&self) -> impl Iterator<Item = u64> {
        (self.k_min..=self.k_max).step_by(self.step.max(1) as usize)
    }

    fn validate(&self) -> Result<()> {
        if self.k_min < 2 || self.k_min > self.k_max {
            return Err(Error::Domain(format!(
                "sweep needs 2 <= k_min <= k_max, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        if self.step == 0 {
            return Err(Error::Domain("sweep step must be >= 1".into()));
        }
        Ok(())
    }
}

/// Measured quantities for one `n = k²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepValues {
    /// Signed eigenvalues by decreasing magnitude; at most [`EIG_SLOTS`].
    pub eig: Vec<f64>,
    pub spectral_norm: f64,
    pub frobenius_norm: f64,
    pub mertens_n: i64,
    pub w_norm_sq: f64,
    /// `‖K⁻¹‖₂ ‖w‖²`; only for `Kinv` rows.
    pub bound_rhs: Option<f64>,
    pub norm_over_sqrt_n: f64,
    pub norm_over_log_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub k: u64,
    pub n: u64,
    pub kind: SpectrumKind,
    pub values: Option<SweepValues>,
    /// `None` for `ok`, otherwise the error code.
    pub error: Option<String>,
}

impl SweepRecord {
    pub fn status(&self) -> String {
        match &self.error {
            None => "ok".to_string(),
            Some(code) => format!("error:{code}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// One sweep row. Numerical failures and violated bounds are recorded in
/// the row rather than returned.
pub fn sweep_record(k: u64, kind: SpectrumKind, table: &MertensTable, dim_cap: usize) -> SweepRecord {
    let n = k * k;
    let mut record = SweepRecord { k, n, kind, values: None, error: None };
    match measure(n, kind, table, dim_cap) {
        Ok(values) => {
            let violated = match kind {
                SpectrumKind::M => (values.mertens_n.abs() as f64) > values.spectral_norm,
                SpectrumKind::Kinv => values.bound_rhs.is_some_and(|rhs| (values.mertens_n.abs() as f64) > rhs),
            };
            if violated {
                record.error = Some(match kind {
                    SpectrumKind::M => "bound_b1".into(),
                    SpectrumKind::Kinv => "bound_b2".into(),
                });
            }
            record.values = Some(values);
        }
        Err(e) => record.error = Some(e.code().to_string()),
    }
    record
}

fn measure(n: u64, kind: SpectrumKind, table: &MertensTable, dim_cap: usize) -> Result<SweepValues> {
    let mertens_n = table.get(n).ok_or(Error::Capacity { requested: n, max: table.limit() })?;
    let family = MertensFamily::<f64>::new(n, dim_cap)?;
    let a = family.build(kind.matrix_kind())?;
    let all = symmetric_eigenvalues(&a)?;
    let spectral = all.first().map_or(0.0, |l| l.abs());
    let w_norm_sq = family.weights().norm_sq();
    let nf = n as f64;
    Ok(SweepValues {
        eig: all.into_iter().take(EIG_SLOTS).collect(),
        spectral_norm: spectral,
        frobenius_norm: frobenius_norm(&a),
        mertens_n,
        w_norm_sq,
        bound_rhs: (kind == SpectrumKind::Kinv).then_some(spectral * w_norm_sq),
        norm_over_sqrt_n: spectral / nf.sqrt(),
        norm_over_log_n: spectral / nf.ln(),
    })
}

/// Runs a sweep, in ascending `k` whatever the worker count.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let ks: Vec<u64> = config.ks().collect();
    let n_max = ks.last().map_or(1, |k| k * k);
    let table = MertensTable::with_max(n_max, config.sieve_limit)?;
    let workers = config.workers.clamp(1, ks.len().max(1));

    if workers == 1 {
        return Ok(ks.iter().map(|&k| sweep_record(k, config.kind, &table, config.dim_cap)).collect());
    }

    let mut slots: Vec<Option<SweepRecord>> = vec![None; ks.len()];
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let ks = &ks;
                let table = &table;
                scope.spawn(move || {
                    (w..ks.len())
                        .step_by(workers)
                        .map(|i| (i, sweep_record(ks[i], config.kind, table, config.dim_cap)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, rec) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(rec);
            }
        }
    });
    Ok(slots.into_iter().map(|r| r.expect("every k assigned")).collect())
}
