//! Structural certification.
//!
//! `sum s_k(n) q^n = (E_{k+1} - 1) / c_{k+1}`, `n^j` acts as `D^j`, and a
//! convolution `sum m^j s_a(m) s_b(n-m)` is the `q^n` coefficient of
//! `D^j(E_{a+1} - 1) (E_{b+1} - 1) / (c_{a+1} c_{b+1})`. After multiplying
//! through by `n^d` to clear negative powers, `lhs - rhs` becomes a finite sum
//! of quasimodular forms, grouped by weight. The identity holds for all `n`
//! exactly when every positive-weight group is zero, and each group is
//! decided by its coordinates over the weight's generators.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use super::notation::{Arith, Side};
use super::registry::{IdentityRecord, SeriesIdentity};
use super::{Failure, Status, VerificationReport};
use crate::exprcli::eval::{eval_difference, EvalError as ExprError, Grade};
use crate::forms::{delta_product, eisenstein, eisenstein_constant, GradedForm};
use crate::qseries::{QSeries, Rational};
use crate::quasidecomp::{decompose, solve_bound, DecompError, DecompositionRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("s{0} has no Eisenstein series E{1} to carry it")]
    UnsupportedSigma(u32, u32),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("the two sides do not have a common weight")]
    Inhomogeneous,
}

/// Outcome of decomposing every weight part of a difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub certified: bool,
    /// Highest coefficient index the decompositions were solved on.
    pub bound: usize,
    pub parts: Vec<WeightPart>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPart {
    pub weight: u32,
    pub outcome: Result<DecompositionRecord, DecompError>,
}

impl WeightPart {
    pub fn is_zero(&self) -> bool {
        matches!(&self.outcome, Ok(rec) if rec.is_zero())
    }
}

impl Certification {
    /// One line per weight part: nonzero coordinates or the structural error.
    pub fn detail(&self) -> String {
        if self.parts.is_empty() {
            return "difference is constant".into();
        }
        self.parts
            .iter()
            .map(|p| match &p.outcome {
                Ok(rec) if rec.is_zero() => format!("weight {}: all coordinates 0", p.weight),
                Ok(rec) => {
                    let coords: Vec<String> = rec
                        .nonzero()
                        .iter()
                        .map(|(l, c)| format!("{l} -> {c}"))
                        .collect();
                    format!("weight {}: {}", p.weight, coords.join(", "))
                }
                Err(e) => format!("weight {}: {e}", p.weight),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// One symbolic summand: `coefficient * D^derivs(product of factors)`.
#[derive(Clone, Debug)]
struct Piece {
    coefficient: Rational,
    derivs: u32,
    factors: Vec<Factor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    /// `D^j E_k`.
    Eis {
        k: u32,
        j: u32,
    },
    Delta,
}

impl Factor {
    fn weight(self) -> u32 {
        match self {
            Factor::Eis { k, j } => k + 2 * j,
            Factor::Delta => 12,
        }
    }
}

impl Piece {
    fn weight(&self) -> u32 {
        self.factors.iter().map(|f| f.weight()).sum::<u32>() + 2 * self.derivs
    }
}

fn carrier(k: u32) -> Result<Rational, CertifyError> {
    eisenstein_constant(k + 1).map_err(|_| CertifyError::UnsupportedSigma(k, k + 1))
}

fn pieces(
    side: &Side,
    shift: i32,
    sign: &Rational,
    out: &mut Vec<Piece>,
) -> Result<(), CertifyError> {
    for t in &side.closed {
        let e = (t.n_power + shift) as u32;
        let c = sign * &t.coefficient;
        match t.arith {
            Arith::Tau => out.push(Piece {
                coefficient: c,
                derivs: e,
                factors: vec![Factor::Delta],
            }),
            Arith::Sigma(k) => {
                let ck = carrier(k)?;
                out.push(Piece {
                    coefficient: &c / &ck,
                    derivs: e,
                    factors: vec![Factor::Eis { k: k + 1, j: 0 }],
                });
                out.push(Piece {
                    coefficient: -(&c / &ck),
                    derivs: e,
                    factors: vec![],
                });
            }
        }
    }
    for conv in &side.convolutions {
        let (a, b) = (conv.left + 1, conv.right + 1);
        let cab = carrier(conv.left)? * carrier(conv.right)?;
        for m in &conv.monomials {
            let e = (m.n_power + shift) as u32;
            let c = sign * &m.coefficient / &cab;
            let left = Factor::Eis { k: a, j: m.m_power };
            let right = Factor::Eis { k: b, j: 0 };
            out.push(Piece {
                coefficient: c.clone(),
                derivs: e,
                factors: vec![left, right],
            });
            out.push(Piece {
                coefficient: -c.clone(),
                derivs: e,
                factors: vec![left],
            });
            if m.m_power == 0 {
                out.push(Piece {
                    coefficient: -c.clone(),
                    derivs: e,
                    factors: vec![right],
                });
                out.push(Piece {
                    coefficient: c,
                    derivs: e,
                    factors: vec![],
                });
            }
        }
    }
    Ok(())
}

/// Symbolic pieces of `n^d (lhs - rhs)` with `d` clearing every `1/n`.
fn difference_pieces(lhs: &Side, rhs: &Side) -> Result<(u32, Vec<Piece>), CertifyError> {
    let d = -lhs.min_n_power().min(rhs.min_n_power());
    let mut out = Vec::new();
    pieces(lhs, d, &Rational::from_integer(1.into()), &mut out)?;
    pieces(rhs, d, &Rational::from_integer((-1).into()), &mut out)?;
    Ok((d as u32, out))
}

fn build(pieces: &[Piece], truncation: usize) -> BTreeMap<u32, QSeries> {
    let mut eis: BTreeMap<u32, QSeries> = BTreeMap::new();
    let mut delta: Option<QSeries> = None;
    let mut by_weight: BTreeMap<u32, QSeries> = BTreeMap::new();
    for p in pieces {
        let mut s = QSeries::one(truncation);
        for f in &p.factors {
            let base = match *f {
                Factor::Eis { k, j } => eis
                    .entry(k)
                    .or_insert_with(|| {
                        eisenstein(k, truncation)
                            .expect("carried weight")
                            .into_series()
                    })
                    .derive(j),
                Factor::Delta => delta
                    .get_or_insert_with(|| delta_product(truncation).into_series())
                    .clone(),
            };
            s = s.mul(&base);
        }
        let s = s.derive(p.derivs).scale(&p.coefficient);
        by_weight
            .entry(p.weight())
            .and_modify(|acc| *acc = acc.add(&s))
            .or_insert(s);
    }
    by_weight
}

fn decompose_parts(by_weight: BTreeMap<u32, QSeries>) -> (Vec<WeightPart>, usize) {
    let mut bound = 0;
    let parts: Vec<WeightPart> = by_weight
        .into_iter()
        .filter(|(w, _)| *w > 0)
        .map(|(w, s)| {
            let outcome = solve_bound(w).and_then(|b| {
                bound = bound.max(b);
                let f =
                    GradedForm::new(s, w, w / 2).map_err(|_| DecompError::BadWeight(w as i64))?;
                decompose(&f, w, w / 2)
            });
            WeightPart { weight: w, outcome }
        })
        .collect();
    (parts, bound)
}

fn max_bound(weights: impl IntoIterator<Item = u32>) -> usize {
    weights
        .into_iter()
        .filter(|&w| w > 0)
        .filter_map(|w| solve_bound(w).ok())
        .max()
        .unwrap_or(0)
}

/// Certifies an identity record for all `n` at once.
pub fn certify(record: &IdentityRecord) -> Result<VerificationReport, CertifyError> {
    let (_, ps) = difference_pieces(&record.lhs, &record.rhs)?;
    let truncation = max_bound(ps.iter().map(Piece::weight));
    let (parts, bound) = decompose_parts(build(&ps, truncation));
    let certified = parts.iter().all(WeightPart::is_zero);
    Ok(VerificationReport {
        id: record.id.clone(),
        anchor: record.anchor.clone(),
        range: (0, bound),
        status: if certified {
            Status::Certified
        } else {
            Status::failing(record.status)
        },
        first_failure: None,
        certification: Some(Certification {
            certified,
            bound,
            parts,
        }),
    })
}

/// Certifies a series identity by decomposing `lhs - rhs` in its weight.
pub fn certify_series(record: &SeriesIdentity) -> Result<VerificationReport, CertifyError> {
    let (_, _, probe) = eval_difference(&record.lhs, &record.rhs, 2)?;
    let (certified, bound, parts, first_failure) = match probe.grade {
        Grade::Inhomogeneous => return Err(CertifyError::Inhomogeneous),
        Grade::Neutral => {
            let (l, r, d) = eval_difference(&record.lhs, &record.rhs, 0)?;
            let ok = d.series.is_zero();
            let failure = (!ok).then(|| Failure {
                n: 0,
                lhs: l.series.coeffs()[0].clone(),
                rhs: r.series.coeffs()[0].clone(),
            });
            (ok, 0, vec![], failure)
        }
        Grade::Graded { weight, .. } => {
            let bound = max_bound([weight]);
            let (_, _, d) = eval_difference(&record.lhs, &record.rhs, bound)?;
            let mut by_weight = BTreeMap::new();
            if weight == 0 {
                let ok = d.series.coeffs()[0].is_zero();
                (ok, 0, vec![], None)
            } else {
                by_weight.insert(weight, d.series);
                let (parts, bound) = decompose_parts(by_weight);
                let ok = parts.iter().all(WeightPart::is_zero);
                (ok, bound, parts, None)
            }
        }
    };
    Ok(VerificationReport {
        id: record.id.clone(),
        anchor: record.anchor.clone(),
        range: (0, bound),
        status: if certified {
            Status::Certified
        } else {
            Status::failing(record.status)
        },
        first_failure,
        certification: Some(Certification {
            certified,
            bound,
            parts,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::registry::builtin_registry;
    use crate::quasidecomp::generator_count;
    use num_traits::One;

    #[test]
    fn vdp_identity_certifies_in_weight_12() {
        let rep = certify(builtin_registry().identity("thm2.1.i").unwrap()).unwrap();
        let cert = rep.certification.unwrap();
        assert!(cert.certified, "{}", cert.detail());
        assert_eq!(rep.status, Status::Certified);
        assert!(cert.parts.iter().any(|p| p.weight == 12));
        assert_eq!(cert.bound, generator_count(12).unwrap() + 4);
    }

    #[test]
    fn e8_equals_e4_squared_uses_nine_coefficients() {
        let rep = certify_series(builtin_registry().series_identity("thm3.1.i").unwrap()).unwrap();
        let cert = rep.certification.unwrap();
        assert!(cert.certified);
        assert_eq!(cert.bound, 8);
    }

    #[test]
    fn perturbed_identity_has_nonzero_coordinate() {
        let mut rec = builtin_registry().identity("thm2.1.i").unwrap().clone();
        rec.rhs.convolutions[0].monomials[0].coefficient += Rational::one();
        let rep = certify(&rec).unwrap();
        assert_eq!(rep.status, Status::Failed);
        let cert = rep.certification.unwrap();
        assert!(!cert.certified);
        assert!(cert
            .parts
            .iter()
            .any(|p| matches!(&p.outcome, Ok(r) if !r.is_zero())));
    }

    #[test]
    fn divided_identities_certify() {
        for id in ["thm2.1.iii", "thm2.6.iii", "thm2.9.iii", "cor2.10"] {
            let rep = certify(builtin_registry().identity(id).unwrap()).unwrap();
            assert_eq!(
                rep.status,
                Status::Certified,
                "{id}: {}",
                rep.certification.unwrap().detail()
            );
        }
    }

    #[test]
    fn misprinted_entries_do_not_certify() {
        for id in ["thm2.7.i", "thm2.9.iv"] {
            let rep = certify(builtin_registry().identity(id).unwrap()).unwrap();
            assert_eq!(rep.status, Status::AuditFlagged, "{id}");
        }
    }
}
