//! JSON documents read and written by the command-line tool.

use qmaxent::{CMatrix64, Complex, DensityOperator64, HermitianOperator64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest asymmetry tolerated in a document before it is symmetrized.
pub const DOCUMENT_HERMITIAN_TOL: f64 = 1e-9;

/// Entries beyond this magnitude are rejected: they overflow every
/// downstream spectral computation.
pub const MAX_ENTRY: f64 = 1e100;

/// Hermitian matrix with split real and imaginary parts.
///
/// `im` may be omitted for real symmetric operators; it is always written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Maxent,
    PriorTilt,
    Flow,
    Metric,
    Entropy,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Maxent => "maxent",
            Mode::PriorTilt => "prior_tilt",
            Mode::Flow => "flow",
            Mode::Metric => "metric",
            Mode::Entropy => "entropy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default)]
    pub observables: Vec<OperatorDocument>,
    #[serde(default)]
    pub targets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<OperatorDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

fn invalid(what: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{what}: {msg}"))
}

fn check_block(what: &str, part: &str, rows: &[Vec<f64>], dim: usize) -> Result<(), CliError> {
    if rows.len() != dim {
        return Err(invalid(
            what,
            format!("{part} has {} rows, expected dim = {dim}", rows.len()),
        ));
    }
    for (j, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(invalid(
                what,
                format!(
                    "{part} row {j} has {} entries, expected dim = {dim}",
                    row.len()
                ),
            ));
        }
        if let Some(k) = row
            .iter()
            .position(|x| !x.is_finite() || x.abs() > MAX_ENTRY)
        {
            return Err(invalid(
                what,
                format!(
                    "{part}[{j}][{k}] = {} is not finite or exceeds {MAX_ENTRY:e}",
                    row[k]
                ),
            ));
        }
    }
    Ok(())
}

impl OperatorDocument {
    fn name(&self, fallback: &str) -> String {
        match &self.label {
            Some(l) => format!("{fallback} '{l}'"),
            None => fallback.to_string(),
        }
    }

    /// Validates shape and document-level Hermiticity, then symmetrizes.
    pub fn to_operator(&self, what: &str) -> Result<HermitianOperator64, CliError> {
        let what = self.name(what);
        let n = self.dim;
        if n == 0 {
            return Err(invalid(&what, "dim must be at least 1"));
        }
        check_block(&what, "re", &self.re, n)?;
        if let Some(im) = &self.im {
            check_block(&what, "im", im, n)?;
        }
        let im = |j: usize, k: usize| self.im.as_ref().map_or(0.0, |m| m[j][k]);

        let mut re_asym = 0.0f64;
        let mut im_asym = 0.0f64;
        for j in 0..n {
            for k in j..n {
                re_asym = re_asym.max((self.re[j][k] - self.re[k][j]).abs());
                im_asym = im_asym.max((im(j, k) + im(k, j)).abs());
            }
        }
        if re_asym > DOCUMENT_HERMITIAN_TOL {
            return Err(invalid(
                &what,
                format!("re is not symmetric (asymmetry {re_asym:e} > {DOCUMENT_HERMITIAN_TOL:e})"),
            ));
        }
        if im_asym > DOCUMENT_HERMITIAN_TOL {
            return Err(invalid(
                &what,
                format!(
                    "im is not antisymmetric (asymmetry {im_asym:e} > {DOCUMENT_HERMITIAN_TOL:e})"
                ),
            ));
        }

        // Pairs that already match are kept as written, so a document
        // produced by `from_operator` reloads bit for bit.
        let m = CMatrix64::from_fn(n, n, |j, k| {
            let (re, re_t) = (self.re[j][k], self.re[k][j]);
            let (im, im_t) = (im(j, k), im(k, j));
            Complex::new(
                if re == re_t { re } else { 0.5 * (re + re_t) },
                if im == -im_t { im } else { 0.5 * (im - im_t) },
            )
        });
        HermitianOperator64::new(m).map_err(|e| invalid(&what, e))
    }

    pub fn to_density(&self, what: &str) -> Result<DensityOperator64, CliError> {
        let op = self.to_operator(what)?;
        DensityOperator64::from_hermitian(op).map_err(|e| invalid(&self.name(what), e))
    }

    pub fn from_operator(op: &HermitianOperator64, label: Option<String>) -> Self {
        let m = op.matrix();
        let n = op.dim();
        let block = |f: fn(&Complex<f64>) -> f64| {
            (0..n)
                .map(|j| (0..n).map(|k| f(&m[(j, k)])).collect())
                .collect()
        };
        Self {
            dim: n,
            re: block(|z| z.re),
            im: Some(block(|z| z.im)),
            label,
        }
    }

    pub fn from_density(rho: &DensityOperator64, label: Option<String>) -> Self {
        Self::from_operator(rho.as_operator(), label)
    }
}

impl ProblemDocument {
    /// Rejects a document whose declared mode belongs to another subcommand.
    pub fn expect_mode(&self, accepted: &[Mode], command: &str) -> Result<(), CliError> {
        match self.mode {
            Some(m) if !accepted.contains(&m) => Err(CliError::Invalid(format!(
                "problem mode '{}' does not match subcommand '{command}'",
                m.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn observables(&self) -> Result<Vec<HermitianOperator64>, CliError> {
        self.observables
            .iter()
            .enumerate()
            .map(|(j, d)| d.to_operator(&format!("observable {j}")))
            .collect()
    }

    /// The prior, or the maximally mixed state of dimension `dim`.
    pub fn prior_or_mixed(&self, dim: usize) -> Result<DensityOperator64, CliError> {
        match &self.prior {
            Some(p) => p.to_density("prior"),
            None => Ok(DensityOperator64::maximally_mixed(dim)),
        }
    }

    /// Dimension shared by all operators in the document.
    pub fn dim(&self) -> Result<usize, CliError> {
        let mut dims = self
            .observables
            .iter()
            .map(|d| d.dim)
            .chain(self.prior.iter().map(|d| d.dim));
        let first = dims.next().ok_or_else(|| {
            CliError::Invalid("problem has neither observables nor a prior".into())
        })?;
        if let Some(other) = dims.find(|&d| d != first) {
            return Err(CliError::Invalid(format!(
                "operator dimensions disagree ({first} vs {other})"
            )));
        }
        Ok(first)
    }

    /// The single observable required by tilt and flow problems.
    pub fn single_observable(&self, command: &str) -> Result<HermitianOperator64, CliError> {
        if self.observables.len() != 1 {
            return Err(CliError::Invalid(format!(
                "{command} requires exactly one observable, found {}",
                self.observables.len()
            )));
        }
        self.observables[0].to_operator("observable 0")
    }
}
