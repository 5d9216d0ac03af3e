use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use super::ast::{Atom, Expr, PhiOperand};
use crate::brackets::{quasi_bracket, rc_bracket, BracketError};
use crate::forms::{delta_product, eisenstein, GradedForm};
use crate::qseries::QSeries;

/// Weight bookkeeping of an evaluated expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    /// A scalar: no weight of its own, absorbed by products.
    Neutral,
    Graded {
        weight: u32,
        depth: u32,
    },
    /// A sum of parts with different weights.
    Inhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluated {
    pub series: QSeries,
    pub grade: Grade,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("bracket operand must be a modular form: {0}")]
    Bracket(#[from] BracketError),
    #[error("bracket operand is {0}")]
    NotGraded(&'static str),
    #[error("expression is not homogeneous in weight")]
    Inhomogeneous,
}

impl Evaluated {
    fn scalar(series: QSeries) -> Self {
        Evaluated {
            series,
            grade: Grade::Neutral,
        }
    }

    fn is_zero_scalar(&self) -> bool {
        self.grade == Grade::Neutral && self.series.is_zero()
    }

    /// The value as a graded form; scalars are treated as weight 0.
    pub fn to_form(&self) -> Result<GradedForm, EvalError> {
        let (w, d) = match self.grade {
            Grade::Neutral => (0, 0),
            Grade::Graded { weight, depth } => (weight, depth),
            Grade::Inhomogeneous => return Err(EvalError::Inhomogeneous),
        };
        Ok(GradedForm::new(self.series.clone(), w, d).expect("grades are kept admissible"))
    }

    pub fn weight(&self) -> Option<u32> {
        match self.grade {
            Grade::Neutral => Some(0),
            Grade::Graded { weight, .. } => Some(weight),
            Grade::Inhomogeneous => None,
        }
    }
}

fn add_grades(a: &Evaluated, b: &Evaluated) -> Grade {
    if a.is_zero_scalar() {
        return b.grade;
    }
    if b.is_zero_scalar() {
        return a.grade;
    }
    match (a.grade, b.grade) {
        (Grade::Neutral, Grade::Neutral) => Grade::Neutral,
        (
            Grade::Graded {
                weight: w1,
                depth: d1,
            },
            Grade::Graded {
                weight: w2,
                depth: d2,
            },
        ) if w1 == w2 => Grade::Graded {
            weight: w1,
            depth: d1.max(d2),
        },
        _ => Grade::Inhomogeneous,
    }
}

fn mul_grades(a: Grade, b: Grade) -> Grade {
    match (a, b) {
        (Grade::Neutral, g) | (g, Grade::Neutral) => g,
        (
            Grade::Graded {
                weight: w1,
                depth: d1,
            },
            Grade::Graded {
                weight: w2,
                depth: d2,
            },
        ) => Grade::Graded {
            weight: w1 + w2,
            depth: d1 + d2,
        },
        _ => Grade::Inhomogeneous,
    }
}

/// Evaluates expressions at a fixed truncation, caching the named forms.
pub struct Evaluator {
    truncation: usize,
    atoms: HashMap<Atom, QSeries>,
}

impl Evaluator {
    pub fn new(truncation: usize) -> Self {
        Evaluator {
            truncation,
            atoms: HashMap::new(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn atom(&mut self, a: Atom) -> QSeries {
        let n = self.truncation;
        self.atoms
            .entry(a)
            .or_insert_with(|| match a {
                Atom::Delta => delta_product(n).into_series(),
                _ => eisenstein(a.weight(), n)
                    .expect("listed weight")
                    .into_series(),
            })
            .clone()
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Evaluated, EvalError> {
        let n = self.truncation;
        Ok(match e {
            Expr::Rational(r) => Evaluated::scalar(QSeries::constant(r.clone(), n)),
            Expr::Atom(a) => Evaluated {
                series: self.atom(*a),
                grade: Grade::Graded {
                    weight: a.weight(),
                    depth: u32::from(*a == Atom::E2),
                },
            },
            Expr::Derive { order, arg } => {
                let v = self.eval(arg)?;
                let grade = match v.grade {
                    Grade::Graded { weight, depth } if *order > 0 => Grade::Graded {
                        weight: weight + 2 * order,
                        depth: depth + order,
                    },
                    g => g,
                };
                Evaluated {
                    series: v.series.derive(*order),
                    grade,
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let series = if matches!(e, Expr::Add(..)) {
                    x.series.add(&y.series)
                } else {
                    x.series.sub(&y.series)
                };
                Evaluated {
                    series,
                    grade: add_grades(&x, &y),
                }
            }
            Expr::Mul(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let series = if is_constant(&x.series) {
                    y.series.scale(&x.series.coeffs()[0])
                } else if is_constant(&y.series) {
                    x.series.scale(&y.series.coeffs()[0])
                } else {
                    x.series.mul(&y.series)
                };
                Evaluated {
                    series,
                    grade: mul_grades(x.grade, y.grade),
                }
            }
            Expr::Neg(a) => {
                let v = self.eval(a)?;
                Evaluated {
                    series: v.series.neg(),
                    grade: v.grade,
                }
            }
            Expr::Pow(a, k) => {
                let v = self.eval(a)?;
                let grade = match v.grade {
                    _ if *k == 0 => Grade::Neutral,
                    Grade::Graded { weight, depth } => Grade::Graded {
                        weight: weight * k,
                        depth: depth * k,
                    },
                    g => g,
                };
                Evaluated {
                    series: v.series.pow(*k),
                    grade,
                }
            }
            Expr::Bracket { left, right, order } => {
                let f = self.operand(left)?;
                let g = self.operand(right)?;
                let h = rc_bracket(&f, &g, *order)?;
                Evaluated {
                    grade: Grade::Graded {
                        weight: h.weight(),
                        depth: 0,
                    },
                    series: h.into_series(),
                }
            }
            Expr::Phi { order, left, right } => {
                let f = self.phi_operand(left)?;
                let g = self.phi_operand(right)?;
                let h = quasi_bracket(
                    *order,
                    &f,
                    (left.weight, left.depth),
                    &g,
                    (right.weight, right.depth),
                )?;
                Evaluated {
                    grade: Grade::Graded {
                        weight: h.weight(),
                        depth: h.depth(),
                    },
                    series: h.into_series(),
                }
            }
        })
    }

    fn operand(&mut self, e: &Expr) -> Result<GradedForm, EvalError> {
        let v = self.eval(e)?;
        match v.grade {
            Grade::Graded { .. } => v.to_form(),
            Grade::Neutral => Err(EvalError::NotGraded("a scalar")),
            Grade::Inhomogeneous => Err(EvalError::NotGraded("inhomogeneous")),
        }
    }

    fn phi_operand(&mut self, op: &PhiOperand) -> Result<GradedForm, EvalError> {
        self.operand(&op.form)
    }
}

/// Evaluates `e` to truncation `n`.
pub fn eval_expr(e: &Expr, n: usize) -> Result<Evaluated, EvalError> {
    Evaluator::new(n).eval(e)
}

/// `lhs - rhs` of a statement, as a single value.
pub fn eval_difference(
    lhs: &Expr,
    rhs: &Expr,
    n: usize,
) -> Result<(Evaluated, Evaluated, Evaluated), EvalError> {
    let mut ev = Evaluator::new(n);
    let l = ev.eval(lhs)?;
    let r = ev.eval(rhs)?;
    let d = Evaluated {
        series: l.series.sub(&r.series),
        grade: add_grades(&l, &r),
    };
    Ok((l, r, d))
}

/// `true` when every coefficient past the constant term is zero.
pub fn is_constant(s: &QSeries) -> bool {
    s.coeffs()[1..].iter().all(Zero::is_zero)
}
