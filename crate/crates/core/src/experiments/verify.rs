use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::builder::{u_entries, u_kernel_entries, MertensFamily};
use crate::error::{Error, Result};
use crate::linalg::rational::as_integer;
use crate::linalg::{frobenius_norm, rational_solve_allones, spectral_norm, RationalMatrix, RATIONAL_DIM_LIMIT};
use crate::scalar::exact_sqrt;
use crate::sieve::MertensTable;

/// Tolerances for each identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|uᵀU⁻¹u − M(n)|` in floating point.
    pub quadratic_form: f64,
    /// `|wᵀK⁻¹w − M(n)|`, relative to `max(1, |M(n)|)`.
    pub weighted_form: f64,
    /// `|M_n[0][0] − M(n)|`.
    pub corner: f64,
    /// Entrywise against `M(⌊n/(s_i s_j)⌋)`.
    pub entrywise: f64,
    /// Slack on the norm inequalities, relative to the larger side.
    pub bound_slack: f64,
    /// `‖w⁻‖²` against its closed form, relative.
    pub closed_form: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadratic_form: 1e-9,
            weighted_form: 1e-8,
            corner: 1e-8,
            entrywise: 1e-6,
            bound_slack: 1e-9,
            closed_form: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub note: Option<String>,
}

impl CheckOutcome {
    fn measured(name: &'static str, discrepancy: f64, tolerance: f64) -> Self {
        let status = if discrepancy <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name, discrepancy, tolerance, status, note: None }
    }

    fn failed(name: &'static str, cause: &Error) -> Self {
        Self {
            name,
            discrepancy: f64::NAN,
            tolerance: 0.0,
            status: CheckStatus::Fail,
            note: Some(cause.to_string()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: u64,
    pub k: u64,
    pub dim: usize,
    pub mertens: i64,
    pub checks: Vec<CheckOutcome>,
    /// `det U` from the LU factorization; informational only.
    pub det_u: Option<f64>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} k={} dim={} M(n)={}", self.n, self.k, self.dim, self.mertens)?;
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            write!(f, "  {:<4} {:<9} discrepancy={:e} tol={:e}", status, c.name, c.discrepancy, c.tolerance)?;
            if let Some(note) = &c.note {
                write!(f, " ({note})")?;
            }
            writeln!(f)?;
        }
        if let Some(det) = self.det_u {
            writeln!(f, "  info det(U)={det}")?;
        }
        Ok(())
    }
}

/// Runs every identity and bound check for one perfect square `n`.
///
/// Kernel failures show up as failed checks; only a non-square `n` or a
/// sieve table that is too short is an `Err`.
pub fn verify_identities(n: u64, table: &MertensTable, dim_cap: usize, tol: &Tolerances) -> Result<VerificationReport> {
    let k = exact_sqrt(n).filter(|&k| k > 0).ok_or(Error::NotPerfectSquare(n))?;
    if table.limit() < n {
        return Err(Error::Capacity { requested: n, max: table.limit() });
    }
    let mertens = table.mertens(n);
    let mut report = VerificationReport { n, k, dim: (2 * k - 1) as usize, mertens, checks: Vec::new(), det_u: None };

    let family = match MertensFamily::<f64>::new(n, dim_cap) {
        Ok(f) => f,
        Err(e) => {
            report.checks.push(CheckOutcome::failed("build", &e));
            return Ok(report);
        }
    };
    report.det_u = Some(family.lu().determinant());
    let m = mertens as f64;
    let checks = &mut report.checks;

    checks.push(exact_quadratic_form(&family, mertens));

    checks.push(match family.lu().solve(&family.weights().u) {
        Ok(x) => CheckOutcome::measured("I1-float", (x.iter().sum::<f64>() - m).abs(), tol.quadratic_form),
        Err(e) => CheckOutcome::failed("I1-float", &e),
    });

    let k_inv = family.k_inverse();
    checks.push(match &k_inv {
        Ok(ki) => match ki.bilinear(&family.weights().w, &family.weights().w) {
            Ok(q) => CheckOutcome::measured("I2", (q - m).abs(), tol.weighted_form * m.abs().max(1.0)),
            Err(e) => CheckOutcome::failed("I2", &e),
        },
        Err(e) => CheckOutcome::failed("I2", e),
    });

    let mm = family.mertens_matrix();
    match &mm {
        Ok(mm) => {
            checks.push(CheckOutcome::measured("I3", (mm[(0, 0)] - m).abs(), tol.corner));
            let s = family.set().values();
            let mut worst = 0.0f64;
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let arg = crate::builder::floor_quotient(n, s[i], s[j]);
                    worst = worst.max((mm[(i, j)] - table.mertens(arg) as f64).abs());
                }
            }
            checks.push(CheckOutcome::measured("O1", worst, tol.entrywise));
        }
        Err(e) => {
            checks.push(CheckOutcome::failed("I3", e));
            checks.push(CheckOutcome::failed("O1", e));
        }
    }

    checks.push(kernel_construction_equality(&family, n));

    checks.push(match &mm {
        Ok(mm) => match spectral_norm(mm) {
            Ok(two) => {
                let fro = frobenius_norm(mm);
                let gap = (m.abs() - two).max(two - fro).max(0.0);
                CheckOutcome::measured("B1", gap, tol.bound_slack * fro.max(1.0))
                    .with_note(format!("|M|={} spectral={two} frobenius={fro}", m.abs()))
            }
            Err(e) => CheckOutcome::failed("B1", &e),
        },
        Err(e) => CheckOutcome::failed("B1", e),
    });

    let weights = family.weights();
    checks.push(match &k_inv {
        Ok(ki) => match spectral_norm(ki) {
            Ok(two) => {
                let wsq = weights.norm_sq();
                let rhs = two * wsq;
                let cap = weights.norm_sq_upper_bound();
                let gap = (m.abs() - rhs).max(wsq - cap).max(0.0);
                CheckOutcome::measured("B2", gap, tol.bound_slack * rhs.max(cap).max(1.0))
                    .with_note(format!("|M|={} bound={rhs} |w|^2={wsq} |w|^2 cap={cap}", m.abs()))
            }
            Err(e) => CheckOutcome::failed("B2", &e),
        },
        Err(e) => CheckOutcome::failed("B2", e),
    });

    let closed = weights.minus_norm_sq_closed_form();
    checks.push(CheckOutcome::measured(
        "W1",
        (weights.minus_norm_sq() - closed).abs(),
        tol.closed_form * closed.max(1.0),
    ));

    let mut asym = Vec::new();
    let named = [
        ("U", Ok(family.u().clone())),
        ("T", Ok(family.t())),
        ("K", family.k()),
        ("Kinv", k_inv),
        ("M", mm),
    ];
    for (label, mat) in named {
        if let Ok(mat) = mat {
            if let Some((i, j)) = mat.asymmetry() {
                asym.push(format!("{label}[{i},{j}]"));
            }
        }
    }
    let sym = CheckOutcome::measured("SYM", asym.len() as f64, 0.0);
    checks.push(if asym.is_empty() { sym } else { sym.with_note(asym.join(" ")) });

    Ok(report)
}

fn exact_quadratic_form(family: &MertensFamily<f64>, mertens: i64) -> CheckOutcome {
    let dim = family.dim();
    if dim > RATIONAL_DIM_LIMIT {
        return CheckOutcome {
            name: "I1-exact",
            discrepancy: f64::NAN,
            tolerance: 0.0,
            status: CheckStatus::Skipped,
            note: Some(format!("dim {dim} above rational limit {RATIONAL_DIM_LIMIT}")),
        };
    }
    let ints = u_entries(family.set());
    let rational = RationalMatrix::from_integers(dim, |i, j| ints[(i, j)] as i64);
    match rational_solve_allones(&rational) {
        Ok(q) => {
            let exact = as_integer(&q);
            let discrepancy = match exact {
                Some(v) => (v - mertens).unsigned_abs() as f64,
                None => (q.to_f64().unwrap_or(f64::NAN) - mertens as f64).abs().max(f64::MIN_POSITIVE),
            };
            let out = CheckOutcome::measured("I1-exact", discrepancy, 0.0);
            if exact.is_none() {
                out.with_note(format!("non-integer result {q}"))
            } else {
                out
            }
        }
        Err(e) => CheckOutcome::failed("I1-exact", &e),
    }
}

fn kernel_construction_equality(family: &MertensFamily<f64>, n: u64) -> CheckOutcome {
    let kernel = match u_kernel_entries(n) {
        Ok(k) => k,
        Err(e) => return CheckOutcome::failed("E1", &e),
    };
    let s_indexed = u_entries(family.set());
    if kernel.dim() != s_indexed.dim() {
        return CheckOutcome::measured("E1", f64::INFINITY, 0.0)
            .with_note(format!("dims differ: {} vs {}", kernel.dim(), s_indexed.dim()));
    }
    let mut mismatches = 0usize;
    let mut first = None;
    for i in 0..kernel.dim() {
        for j in 0..kernel.dim() {
            if kernel[(i, j)] != s_indexed[(i, j)] {
                mismatches += 1;
                first.get_or_insert((i, j, kernel[(i, j)], s_indexed[(i, j)]));
            }
        }
    }
    let out = CheckOutcome::measured("E1", mismatches as f64, 0.0);
    match first {
        Some((i, j, a, b)) => out.with_note(format!(
            "first counterexample at ({},{}): kernel {} vs divisor-set {}",
            i + 1,
            j + 1,
            a,
            b
        )),
        None => out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::DEFAULT_DIM_CAP;

    #[test]
    fn n4_passes_with_exact_zero() {
        let table = MertensTable::new(4).unwrap();
        let r = verify_identities(4, &table, DEFAULT_DIM_CAP, &Tolerances::default()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.check("I1-exact").unwrap().discrepancy, 0.0);
        assert_eq!(r.mertens, -1);
        assert_eq!(r.checks.len(), 10);
    }

    #[test]
    fn n1_passes() {
        let table = MertensTable::new(1).unwrap();
        let r = verify_identities(1, &table, DEFAULT_DIM_CAP, &Tolerances::default()).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn n1600_passes() {
        let table = MertensTable::new(1600).unwrap();
        let r = verify_identities(1600, &table, DEFAULT_DIM_CAP, &Tolerances::default()).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn dim_cap_becomes_failed_check() {
        let table = MertensTable::new(100).unwrap();
        let r = verify_identities(100, &table, 5, &Tolerances::default()).unwrap();
        assert!(!r.all_passed());
        assert_eq!(r.checks[0].name, "build");
    }

    #[test]
    fn non_square_and_short_table_are_errors() {
        let table = MertensTable::new(100).unwrap();
        assert!(verify_identities(8, &table, DEFAULT_DIM_CAP, &Tolerances::default()).is_err());
        assert!(verify_identities(121, &table, DEFAULT_DIM_CAP, &Tolerances::default()).is_err());
    }

    #[test]
    fn over_tight_tolerance_fails() {
        let table = MertensTable::new(400).unwrap();
        let tol = Tolerances { entrywise: -1.0, ..Tolerances::default() };
        let r = verify_identities(400, &table, DEFAULT_DIM_CAP, &tol).unwrap();
        assert_eq!(r.check("O1").unwrap().status, CheckStatus::Fail);
    }
}
