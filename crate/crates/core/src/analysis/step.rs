use std::fmt;

use num_traits::One;

use crate::constructors::{apply_scale_rule, ScaleRule};
use crate::statecore::{dense_inner, SparseState};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of checking one scale step against its rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub valid: bool,
    pub checks: Vec<StepCheck>,
    pub extracted_s: Option<usize>,
}

impl StepReport {
    pub fn check(&self, name: &str) -> Option<&StepCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for StepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        match self.extracted_s {
            Some(s) => writeln!(f, "extracted_s: {s}")?,
            None => writeln!(f, "extracted_s: none")?,
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, result: std::result::Result<String, String>) -> StepCheck {
    match result {
        Ok(detail) => StepCheck {
            name,
            passed: true,
            detail,
        },
        Err(detail) => StepCheck {
            name,
            passed: false,
            detail,
        },
    }
}

/// Checks that `next` is `prev` advanced by `rule`. Failures are report
/// entries, never errors.
pub fn verify_scale_step(prev: &SparseState, next: &SparseState, rule: &ScaleRule) -> StepReport {
    let mut checks = Vec::new();

    let count_ok = rule.coefficients.len() == rule.s;
    checks.push(check(
        "coefficient_count",
        if count_ok {
            Ok(format!("{} records", rule.s))
        } else {
            Err(format!(
                "{} records, expected s = {}",
                rule.coefficients.len(),
                rule.s
            ))
        },
    ));

    let mags = rule
        .check_coefficients()
        .map_err(|e| e.to_string())
        .and_then(|_| {
            let w = rule.coefficient_weight();
            if w == Rational::one() {
                Ok(format!("each |alpha|^2 = 1/{}, sum = {w}", rule.s))
            } else {
                Err(format!("sum of |alpha|^2 = {w}"))
            }
        });
    let mags_ok = mags.is_ok();
    checks.push(check("coefficient_magnitudes", mags));

    let resolved = rule.resolve(prev);
    checks.push(check(
        "predecessor",
        match &resolved {
            Err(e) => Err(e.to_string()),
            Ok(_) if rule.references_predecessor(prev) => Ok("referenced".into()),
            Ok(_) => Err("no referenced slot vector is the predecessor".into()),
        },
    ));

    checks.push(check(
        "slot_orthonormality",
        match &resolved {
            Err(e) => Err(e.to_string()),
            Ok(r) => rule
                .check_orthonormal(r)
                .map(|_| "orthonormal within 1e-9".to_string())
                .map_err(|e| e.to_string()),
        },
    ));

    let recon = match apply_scale_rule(prev, rule) {
        Ok(built) if built == *next => Ok("exact match".to_string()),
        Ok(built) => Err(format!(
            "rebuilt state differs ({} vs {} entries)",
            built.support_size(),
            next.support_size()
        )),
        Err(e) => Err(e.to_string()),
    };
    let recon_ok = recon.is_ok();
    checks.push(check("reconstruction", recon));

    let norm = next.norm_squared();
    checks.push(check(
        "norm",
        if norm == Rational::one() {
            Ok("1".into())
        } else {
            Err(format!("norm squared {norm}"))
        },
    ));

    let valid = checks.iter().all(|c| c.passed);
    StepReport {
        valid,
        checks,
        extracted_s: (count_ok && mags_ok && recon_ok).then_some(rule.s),
    }
}

/// `|⟨slot product_k | state⟩|²` for each coefficient record, evaluated on the
/// dense path and snapped to a multiple of `1/s` (tolerance `1e-9`).
pub fn rule_basis_probabilities(
    state: &SparseState,
    rule: &ScaleRule,
    prev: &SparseState,
) -> Result<Vec<Rational>> {
    const TOL: f64 = 1e-9;
    rule.check_coefficients()?;
    let resolved = rule.resolve(prev)?;
    let target = state.to_dense::<f64>()?;
    let s = rule.s as u64;
    rule.slot_products(&resolved)?
        .iter()
        .map(|p| {
            if p.num_qudits() != state.num_qudits() || p.local_dim() != state.local_dim() {
                return Err(Error::QuditCountMismatch(
                    p.num_qudits(),
                    state.num_qudits(),
                ));
            }
            let overlap = dense_inner(&p.to_dense::<f64>()?, &target).norm_sqr();
            let k = (overlap * s as f64).round();
            if (overlap - k / s as f64).abs() > TOL || k < 0.0 {
                return Err(Error::NotSnappable {
                    value: overlap,
                    denominator: s,
                });
            }
            Ok(Rational::new((k as i64).into(), (s as i64).into()))
        })
        .collect()
}
