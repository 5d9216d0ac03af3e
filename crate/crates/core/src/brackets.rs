//! Rankin-Cohen brackets.
//!
//! For modular `f` (weight `k`) and `g` (weight `l`):
//!
//! ```text
//! [f, g]_v = sum_{r=0}^{v} (-1)^r C(v+k-1, v-r) C(v+l-1, r) D^r f D^{v-r} g
//! ```
//!
//! and for quasimodular `f` (weight `k`, depth `s`), `g` (weight `l`, depth `t`):
//!
//! ```text
//! Phi_{n;k,s;l,t}(f, g) = sum_{r=0}^{n} (-1)^r C(k-s+n-1, n-r) C(l-t+n-1, r) D^r f D^{n-r} g
//! ```
//!
//! The result has weight `k + l + 2n` and depth at most `s + t`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::forms::GradedForm;
use crate::par::Execution;
use crate::qseries::{QSeries, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("the modular bracket needs depth-0 operands, got depth {0}")]
    NotModular(u32),
    #[error("the modular bracket needs weights >= 4, got {0}")]
    WeightTooSmall(u32),
    #[error("quasimodular bracket needs weight >= 2, got {0}")]
    QuasiWeightTooSmall(u32),
    #[error("declared depth {depth} exceeds half the weight {weight}")]
    DepthExceedsHalfWeight { weight: u32, depth: u32 },
    #[error("declared weight {declared} does not match the operand weight {actual}")]
    WeightMismatch { declared: u32, actual: u32 },
    #[error("declared depth {declared} is below the operand's depth bound {actual}")]
    DepthBelowBound { declared: u32, actual: u32 },
}

/// Shape of a bracket: order and the `(weight, depth)` of both operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketSpec {
    pub order: u32,
    pub left_weight: u32,
    pub left_depth: u32,
    pub right_weight: u32,
    pub right_depth: u32,
}

impl BracketSpec {
    pub fn result_weight(&self) -> u32 {
        self.left_weight + self.right_weight + 2 * self.order
    }

    pub fn result_depth(&self) -> u32 {
        self.left_depth + self.right_depth
    }

    /// `(-1)^r C(k-s+n-1, n-r) C(l-t+n-1, r)` for `r = 0..=n`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        let n = self.order as i64;
        let a = self.left_weight as i64 - self.left_depth as i64 + n - 1;
        let b = self.right_weight as i64 - self.right_depth as i64 + n - 1;
        (0..=n)
            .map(|r| {
                let c = binomial(a, n - r) * binomial(b, r);
                if r % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }
}

/// `C(a, b)`, defined as 0 unless `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

fn bracket_series(spec: &BracketSpec, f: &QSeries, g: &QSeries, exec: Execution) -> QSeries {
    let n = spec.order;
    let coeffs = spec.coefficients();
    let terms: Vec<(u32, BigInt)> = (0..=n).zip(coeffs).filter(|(_, c)| !c.is_zero()).collect();
    let parts = exec.map_slice(&terms, |(r, c)| {
        let df = if *r == 0 { f.clone() } else { f.derive(*r) };
        let dg = if n - r == 0 {
            g.clone()
        } else {
            g.derive(n - r)
        };
        df.mul_with(&dg, Execution::Sequential)
            .scale(&Rational::from_integer(c.clone()))
    });
    let trunc = f.truncation().min(g.truncation());
    parts.iter().fold(QSeries::zero(trunc), |acc, p| acc.add(p))
}

/// The `nu`-th Rankin-Cohen bracket of two modular forms.
pub fn rc_bracket(f: &GradedForm, g: &GradedForm, nu: u32) -> Result<GradedForm, BracketError> {
    rc_bracket_with(f, g, nu, Execution::default())
}

pub fn rc_bracket_with(
    f: &GradedForm,
    g: &GradedForm,
    nu: u32,
    exec: Execution,
) -> Result<GradedForm, BracketError> {
    for x in [f, g] {
        if x.depth() != 0 {
            return Err(BracketError::NotModular(x.depth()));
        }
        if x.weight() < 4 {
            return Err(BracketError::WeightTooSmall(x.weight()));
        }
    }
    let spec = BracketSpec {
        order: nu,
        left_weight: f.weight(),
        left_depth: 0,
        right_weight: g.weight(),
        right_depth: 0,
    };
    let series = bracket_series(&spec, f.series(), g.series(), exec);
    Ok(GradedForm::new(series, spec.result_weight(), 0).expect("even weight, depth 0"))
}

/// `Phi_{n;k,s;l,t}(f, g)` with the weights and depth bounds declared explicitly.
pub fn quasi_bracket(
    n: u32,
    f: &GradedForm,
    (k, s): (u32, u32),
    g: &GradedForm,
    (l, t): (u32, u32),
) -> Result<GradedForm, BracketError> {
    quasi_bracket_with(n, f, (k, s), g, (l, t), Execution::default())
}

pub fn quasi_bracket_with(
    n: u32,
    f: &GradedForm,
    (k, s): (u32, u32),
    g: &GradedForm,
    (l, t): (u32, u32),
    exec: Execution,
) -> Result<GradedForm, BracketError> {
    for (form, weight, depth) in [(f, k, s), (g, l, t)] {
        if weight < 2 {
            return Err(BracketError::QuasiWeightTooSmall(weight));
        }
        if 2 * depth > weight {
            return Err(BracketError::DepthExceedsHalfWeight { weight, depth });
        }
        if form.weight() != weight {
            return Err(BracketError::WeightMismatch {
                declared: weight,
                actual: form.weight(),
            });
        }
        if depth < form.depth() {
            return Err(BracketError::DepthBelowBound {
                declared: depth,
                actual: form.depth(),
            });
        }
    }
    let spec = BracketSpec {
        order: n,
        left_weight: k,
        left_depth: s,
        right_weight: l,
        right_depth: t,
    };
    let series = bracket_series(&spec, f.series(), g.series(), exec);
    Ok(
        GradedForm::new(series, spec.result_weight(), spec.result_depth())
            .expect("s + t <= (k + l + 2n)/2 whenever s <= k/2 and t <= l/2"),
    )
}

/// `true` iff the constant term is exactly zero.
pub fn is_cuspidal(h: &GradedForm) -> bool {
    h.series().coeffs()[0].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta_product, eisenstein};

    const N: usize = 40;

    fn e(k: u32) -> GradedForm {
        eisenstein(k, N).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    /// `sum c * D^a(x) * D^b(y)` over a list of integer-weighted products.
    fn combo(terms: &[(i64, &GradedForm, u32, &GradedForm, u32)]) -> QSeries {
        terms.iter().fold(QSeries::zero(N), |acc, (c, x, a, y, b)| {
            acc.add(
                &x.derive(*a)
                    .series()
                    .mul(y.derive(*b).series())
                    .scale(&int(*c)),
            )
        })
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(-1, 0), BigInt::zero());
    }

    #[test]
    fn order_zero_is_the_product() {
        let p = rc_bracket(&e(4), &e(6), 0).unwrap();
        assert_eq!(p.series(), &e(4).series().mul(e(6).series()));
        assert_eq!(p.weight(), 10);
    }

    #[test]
    fn e4_e4_second_bracket_expansion_and_constant() {
        let b = rc_bracket(&e(4), &e(4), 2).unwrap();
        let e4 = e(4);
        assert_eq!(
            b.series(),
            &combo(&[(20, &e4, 0, &e4, 2), (-25, &e4, 1, &e4, 1)])
        );
        // the literal bracket is 4800 Delta; 960 Delta is 2 D^2 E8 - 9 (D E4)^2
        assert_eq!(b.series(), &delta_product(N).series().scale(&int(4800)));
        assert_eq!(b.weight(), 12);
    }

    #[test]
    fn vanishing_brackets() {
        assert!(rc_bracket(&e(4), &e(8), 1).unwrap().series().is_zero());
        assert!(rc_bracket(&e(4), &e(6), 2).unwrap().series().is_zero());
    }

    #[test]
    fn e4_e6_first_bracket_is_minus_3456_delta() {
        let b = rc_bracket(&e(4), &e(6), 1).unwrap();
        assert_eq!(b.series(), &delta_product(N).series().scale(&int(-3456)));
        assert!(is_cuspidal(&b));
    }

    #[test]
    fn rejects_quasimodular_operands() {
        assert_eq!(
            rc_bracket(&e(2), &e(4), 1),
            Err(BracketError::NotModular(1))
        );
        let c = GradedForm::modular(QSeries::one(5), 0).unwrap();
        assert_eq!(
            rc_bracket(&c, &e(4), 1),
            Err(BracketError::WeightTooSmall(0))
        );
    }

    #[test]
    fn niebur_brackets_f1_to_f6() {
        let e2 = e(2);
        let d = |r: u32| e2.derive(r);
        let f1 = quasi_bracket(1, &d(3), (8, 4), &e2, (2, 1)).unwrap();
        let f2 = quasi_bracket(1, &d(2), (6, 3), &d(1), (4, 2)).unwrap();
        let f3 = quasi_bracket(2, &d(2), (6, 3), &e2, (2, 1)).unwrap();
        let f4 = quasi_bracket(2, &d(1), (4, 2), &d(1), (4, 2)).unwrap();
        let f5 = quasi_bracket(3, &d(1), (4, 2), &e2, (2, 1)).unwrap();
        let f6 = quasi_bracket(4, &e2, (2, 1), &e2, (2, 1)).unwrap();
        let (d0, d1, d2, d3) = (d(0), d(1), d(2), d(3));
        assert_eq!(
            f1.series(),
            &combo(&[(4, &d3, 0, &d1, 0), (-1, &d0, 0, &d0, 4)])
        );
        assert_eq!(
            f2.series(),
            &combo(&[(3, &d2, 0, &d2, 0), (-2, &d3, 0, &d1, 0)])
        );
        assert_eq!(
            f3.series(),
            &combo(&[
                (6, &d2, 0, &d2, 0),
                (-8, &d3, 0, &d1, 0),
                (1, &d0, 0, &d0, 4)
            ])
        );
        assert_eq!(
            f4.series(),
            &combo(&[(6, &d3, 0, &d1, 0), (-9, &d2, 0, &d2, 0)])
        );
        assert_eq!(
            f5.series(),
            &combo(&[
                (16, &d3, 0, &d1, 0),
                (-18, &d2, 0, &d2, 0),
                (-1, &d0, 0, &d0, 4)
            ])
        );
        assert_eq!(f5.series(), &delta_product(N).series().scale(&int(24)));
        assert_eq!(f6.series(), &f5.series().scale(&int(-2)));
        assert_eq!(f4.series(), &f2.series().scale(&int(-3)));
        for f in [&f1, &f2, &f3, &f4, &f5, &f6] {
            assert_eq!(f.weight(), 12);
        }
        assert_eq!(
            [
                f1.depth(),
                f2.depth(),
                f3.depth(),
                f4.depth(),
                f5.depth(),
                f6.depth()
            ],
            [5, 5, 4, 4, 3, 2]
        );
    }

    #[test]
    fn quasi_bracket_validates_declarations() {
        let e2 = e(2);
        assert!(matches!(
            quasi_bracket(1, &e2, (2, 2), &e2, (2, 1)),
            Err(BracketError::DepthExceedsHalfWeight { .. })
        ));
        assert!(matches!(
            quasi_bracket(1, &e2, (4, 1), &e2, (2, 1)),
            Err(BracketError::WeightMismatch { .. })
        ));
        assert!(matches!(
            quasi_bracket(1, &e2, (2, 0), &e2, (2, 1)),
            Err(BracketError::DepthBelowBound { .. })
        ));
    }

    #[test]
    fn quasi_bracket_with_depth_zero_is_rc_bracket() {
        for (k, l) in [(4, 4), (4, 6), (6, 8), (4, 10)] {
            for nu in 0..4 {
                let a = rc_bracket(&e(k), &e(l), nu).unwrap();
                let b = quasi_bracket(nu, &e(k), (k, 0), &e(l), (l, 0)).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn result_weight_and_depth() {
        let spec = BracketSpec {
            order: 3,
            left_weight: 4,
            left_depth: 2,
            right_weight: 2,
            right_depth: 1,
        };
        assert_eq!(spec.result_weight(), 12);
        assert_eq!(spec.result_depth(), 3);
        let c: Vec<i64> = spec
            .coefficients()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        // D^0 f D^3 g, D f D^2 g, D^2 f D g, D^3 f g
        assert_eq!(c, vec![4, -18, 12, -1]);
    }
}
