//! Truncated power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] knows its coefficients at exponents `0..=truncation`; anything
//! above is unknown, so binary operations return the smaller truncation of
//! their operands and never invent precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::par::Execution;

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator; zero is `0/1`.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("coefficient index {index} is beyond the truncation {truncation}")]
    OutOfRange { index: usize, truncation: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from its coefficients `a_0..=a_N`.
    ///
    /// # Panics
    /// If `coeffs` is empty (a series always knows at least `a_0`).
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a q-series needs at least one coefficient"
        );
        QSeries { coeffs }
    }

    pub fn from_integers<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = BigInt>,
    {
        Self::from_coeffs(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero(truncation: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); truncation + 1],
        }
    }

    pub fn constant(value: Rational, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = value;
        s
    }

    pub fn one(truncation: usize) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&Rational, QSeriesError> {
        self.coeffs.get(n).ok_or(QSeriesError::OutOfRange {
            index: n,
            truncation: self.truncation(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops every coefficient above `truncation`.
    ///
    /// # Panics
    /// If `truncation` exceeds the current truncation.
    pub fn truncate(&self, truncation: usize) -> Self {
        assert!(
            truncation <= self.truncation(),
            "cannot extend a series from {} to {truncation}",
            self.truncation()
        );
        QSeries {
            coeffs: self.coeffs[..=truncation].to_vec(),
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product, truncated at the smaller truncation.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        self.mul_with(other, Execution::default())
    }

    /// Cauchy product under an explicit execution policy.
    ///
    /// Both operands are scaled to integer vectors by the lcm of their
    /// denominators, convolved over `BigInt`, and divided back once per
    /// output coefficient.
    pub fn mul_with(&self, other: &QSeries, exec: Execution) -> QSeries {
        let n = self.truncation().min(other.truncation());
        let (da, a) = integer_form(&self.coeffs[..=n]);
        let (db, b) = integer_form(&other.coeffs[..=n]);
        let denom = da * db;
        let (Some(va), Some(vb)) = (first_nonzero(&a), first_nonzero(&b)) else {
            return QSeries::zero(n);
        };
        let coeffs = exec.map_range(0..n + 1, |k| {
            if k < va + vb {
                return Rational::zero();
            }
            let mut acc = BigInt::zero();
            for i in va..=k - vb {
                if !a[i].is_zero() && !b[k - i].is_zero() {
                    acc += &a[i] * &b[k - i];
                }
            }
            Rational::new(acc, denom.clone())
        });
        QSeries { coeffs }
    }

    /// `D^times` where `D = q d/dq`: the `n`-th coefficient is multiplied by `n^times`.
    pub fn derive(&self, times: u32) -> QSeries {
        if times == 0 {
            return self.clone();
        }
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    if c.is_zero() || n == 0 {
                        Rational::zero()
                    } else {
                        c * BigInt::from(n).pow(times)
                    }
                })
                .collect(),
        }
    }

    /// Raises to a non-negative integer power by repeated squaring.
    pub fn pow(&self, exp: u32) -> QSeries {
        let mut result = QSeries::one(self.truncation());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Returns `(L, [L*c_i])` with `L` the lcm of the denominators.
fn integer_form(coeffs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                c.numer() * &lcm
            } else {
                c.numer() * (&lcm / c.denom())
            }
        })
        .collect();
    (lcm, ints)
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}

impl fmt::Display for QSeries {
    /// `1 - 24q + 252q^2 + O(q^3)`; zero terms are skipped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            if n == 0 || !mag.is_one() {
                let text = if mag.is_integer() || n == 0 {
                    mag.to_string()
                } else {
                    format!("({mag})")
                };
                write!(f, "{text}{var}")?;
            } else {
                write!(f, "{var}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> QSeries {
        QSeries::from_integers(v.iter().map(|&x| BigInt::from(x)))
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn add_is_coefficientwise() {
        assert_eq!(&s(&[1, 2]) + &s(&[3, 4]), s(&[4, 6]));
        assert_eq!(&s(&[1, 2, 3]) + &QSeries::zero(2), s(&[1, 2, 3]));
    }

    #[test]
    fn binary_ops_take_min_truncation() {
        let a = s(&[1, 1, 1, 1]);
        let b = s(&[1, 1]);
        assert_eq!((&a + &b).truncation(), 1);
        assert_eq!((&a * &b).truncation(), 1);
        assert_eq!((&a - &b).truncation(), 1);
    }

    #[test]
    fn mul_small_cases() {
        assert_eq!(&s(&[1, 1, 0]) * &s(&[1, 1, 0]), s(&[1, 2, 1]));
        let f = s(&[3, -1, 4, 1, -5]);
        assert_eq!(&f * &QSeries::one(4), f);
        assert_eq!(&f * &QSeries::zero(4), QSeries::zero(4));
    }

    #[test]
    fn mul_with_rational_coefficients() {
        let a = QSeries::from_coeffs(vec![r(1, 2), r(1, 3)]);
        let b = QSeries::from_coeffs(vec![r(2, 5), r(-3, 7)]);
        let p = &a * &b;
        assert_eq!(p.coeffs()[0], r(1, 5));
        assert_eq!(p.coeffs()[1], r(-3, 14) + r(2, 15));
    }

    #[test]
    fn scale_cases() {
        assert_eq!(s(&[1, 1]).scale(&r(2, 1)), s(&[2, 2]));
        assert!(s(&[5, -3, 2]).scale(&Rational::zero()).is_zero());
    }

    #[test]
    fn derive_cases() {
        assert!(QSeries::constant(r(7, 3), 5).derive(1).is_zero());
        let f = s(&[4, 3, 2, 1]);
        assert_eq!(f.derive(1), s(&[0, 3, 4, 3]));
        assert_eq!(f.derive(1).derive(1), f.derive(2));
        assert_eq!(f.derive(3), s(&[0, 3, 16, 27]));
        assert_eq!(f.derive(0), f);
    }

    #[test]
    fn coefficient_range_error() {
        let f = s(&[1, -24]);
        assert_eq!(f.coefficient(1).unwrap(), &r(-24, 1));
        assert_eq!(
            f.coefficient(2),
            Err(QSeriesError::OutOfRange {
                index: 2,
                truncation: 1
            })
        );
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = s(&[1, 2, -1, 3, 0, 1]);
        assert_eq!(f.pow(3), &(&f * &f) * &f);
        assert_eq!(f.pow(0), QSeries::one(5));
    }

    #[test]
    fn canonical_rationals() {
        let a = QSeries::from_coeffs(vec![r(2, 4), r(-6, -9)]);
        let p = &a * &a;
        for c in p.coeffs() {
            assert!(c.denom().is_positive());
            assert!(c.numer().gcd(c.denom()).is_one());
        }
        assert_eq!(p.coeffs()[1], r(2, 3));
    }

    #[test]
    fn sequential_and_parallel_mul_agree() {
        let f = s(&[1, -3, 0, 7, 2, 2, -9, 4, 1, 1, 0, 5]);
        let g = s(&[0, 0, 2, 1, -1, 3, 3, 0, -2, 1, 1, 1]);
        assert_eq!(
            f.mul_with(&g, Execution::Sequential),
            f.mul_with(&g, Execution::Parallel)
        );
    }

    #[test]
    fn display_form() {
        assert_eq!(s(&[1, -24, 252]).to_string(), "1 - 24q + 252q^2 + O(q^3)");
        assert_eq!(QSeries::zero(2).to_string(), "0 + O(q^3)");
        let h = QSeries::from_coeffs(vec![Rational::zero(), r(1, 2), r(-1, 1)]);
        assert_eq!(h.to_string(), "(1/2)q - q^2 + O(q^3)");
    }
}
