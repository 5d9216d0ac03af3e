//! Exact evaluation of registry entries at individual `n`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::notation::{Arith, Side};
use super::registry::{CongruenceRecord, IdentityRecord};
use crate::forms::{sigma_table, tau_table, TauStrategy};
use crate::par::Execution;
use crate::qseries::Rational;

/// Above this limit tau comes from the quasi-linear convolution formula
/// instead of the quadratic-cost product expansion.
pub const PRODUCT_TAU_LIMIT: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no table for s{0}")]
    MissingSigma(u32),
    #[error("no tau table loaded")]
    MissingTau,
    #[error("no convolution table for sum m^{power} s{left}(m) s{right}(n-m)")]
    MissingConvolution { left: u32, right: u32, power: u32 },
    #[error("n = {n} is outside the tables (1..={limit})")]
    OutOfRange { n: usize, limit: usize },
}

/// What a set of sides needs to be evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Needs {
    pub sigmas: BTreeSet<u32>,
    pub convolutions: BTreeSet<(u32, u32, u32)>,
    pub tau: bool,
}

impl Needs {
    pub fn add_side(&mut self, side: &Side) {
        for t in &side.closed {
            match t.arith {
                Arith::Tau => self.tau = true,
                Arith::Sigma(k) => {
                    self.sigmas.insert(k);
                }
            }
        }
        for c in &side.convolutions {
            self.sigmas.insert(c.left);
            self.sigmas.insert(c.right);
            for m in &c.monomials {
                self.convolutions.insert((c.left, c.right, m.m_power));
            }
        }
    }

    pub fn of_sides<'a>(sides: impl IntoIterator<Item = &'a Side>) -> Needs {
        let mut n = Needs::default();
        for s in sides {
            n.add_side(s);
        }
        n
    }
}

/// Precomputed divisor sums, tau values and convolution sums up to `limit`.
#[derive(Clone, Debug)]
pub struct EvalContext {
    limit: usize,
    sigma: BTreeMap<u32, Vec<BigInt>>,
    tau: Option<Vec<BigInt>>,
    conv: BTreeMap<(u32, u32, u32), Vec<BigInt>>,
}

impl EvalContext {
    pub fn new(needs: &Needs, limit: usize, exec: Execution) -> Self {
        let sigma: BTreeMap<u32, Vec<BigInt>> = needs
            .sigmas
            .iter()
            .map(|&k| {
                let t = sigma_table(k, limit);
                let mut v = vec![BigInt::zero()];
                v.extend((1..=limit).map(|n| t.get(n).clone()));
                (k, v)
            })
            .collect();
        let tau = needs.tau.then(|| {
            let strategy = if limit <= PRODUCT_TAU_LIMIT {
                TauStrategy::Product
            } else {
                TauStrategy::Vdp
            };
            tau_table(limit, strategy, exec)
        });
        let keys: Vec<(u32, u32, u32)> = needs.convolutions.iter().copied().collect();
        let conv = keys
            .iter()
            .map(|&(a, b, j)| {
                let (sa, sb) = (&sigma[&a], &sigma[&b]);
                let sums = exec.map_range(0..limit + 1, |n| {
                    let mut acc = BigInt::zero();
                    for m in 1..n {
                        let w = &sa[m] * &sb[n - m];
                        acc += if j == 0 {
                            w
                        } else {
                            w * BigInt::from(m).pow(j)
                        };
                    }
                    acc
                });
                ((a, b, j), sums)
            })
            .collect();
        EvalContext {
            limit,
            sigma,
            tau,
            conv,
        }
    }

    /// A context covering every side of `records`.
    pub fn for_identities<'a>(
        records: impl IntoIterator<Item = &'a IdentityRecord>,
        limit: usize,
        exec: Execution,
    ) -> Self {
        let mut needs = Needs::default();
        for r in records {
            needs.add_side(&r.lhs);
            needs.add_side(&r.rhs);
        }
        EvalContext::new(&needs, limit, exec)
    }

    pub fn for_congruences<'a>(
        records: impl IntoIterator<Item = &'a CongruenceRecord>,
        limit: usize,
        exec: Execution,
    ) -> Self {
        let mut needs = Needs::default();
        for r in records {
            needs.add_side(&r.lhs);
            needs.add_side(&r.rhs);
        }
        EvalContext::new(&needs, limit, exec)
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn tau(&self, n: usize) -> Result<&BigInt, EvalError> {
        self.check(n)?;
        Ok(&self.tau.as_ref().ok_or(EvalError::MissingTau)?[n])
    }

    pub fn sigma(&self, k: u32, n: usize) -> Result<&BigInt, EvalError> {
        self.check(n)?;
        Ok(&self.sigma.get(&k).ok_or(EvalError::MissingSigma(k))?[n])
    }

    /// `sum_{m=1}^{n-1} m^power s_left(m) s_right(n-m)`.
    pub fn convolution(
        &self,
        left: u32,
        right: u32,
        power: u32,
        n: usize,
    ) -> Result<&BigInt, EvalError> {
        self.check(n)?;
        let v = self
            .conv
            .get(&(left, right, power))
            .ok_or(EvalError::MissingConvolution { left, right, power })?;
        Ok(&v[n])
    }

    fn check(&self, n: usize) -> Result<(), EvalError> {
        if n == 0 || n > self.limit {
            return Err(EvalError::OutOfRange {
                n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Value of one side at `n`.
    pub fn side_value(&self, side: &Side, n: usize) -> Result<Rational, EvalError> {
        let nn = BigInt::from(n);
        let n_pow = |p: i32| -> Rational {
            let a = nn.pow(p.unsigned_abs());
            if p >= 0 {
                Rational::from_integer(a)
            } else {
                Rational::new(BigInt::one(), a)
            }
        };
        let mut acc = Rational::zero();
        for t in &side.closed {
            let f = match t.arith {
                Arith::Tau => self.tau(n)?,
                Arith::Sigma(k) => self.sigma(k, n)?,
            };
            acc += &t.coefficient * n_pow(t.n_power) * f;
        }
        for c in &side.convolutions {
            for m in &c.monomials {
                let s = self.convolution(c.left, c.right, m.m_power, n)?;
                acc += &m.coefficient * n_pow(m.n_power) * s;
            }
        }
        Ok(acc)
    }
}

/// `lhs(n) - rhs(n)`; zero exactly when the identity holds at `n`.
pub fn evaluate(
    record: &IdentityRecord,
    n: usize,
    ctx: &EvalContext,
) -> Result<Rational, EvalError> {
    Ok(ctx.side_value(&record.lhs, n)? - ctx.side_value(&record.rhs, n)?)
}

/// First `n` in `1..=limit` where the sides differ, with both values.
pub fn first_mismatch(
    lhs: &Side,
    rhs: &Side,
    limit: usize,
    ctx: &EvalContext,
    exec: Execution,
) -> Result<Option<(usize, Rational, Rational)>, EvalError> {
    let rows = exec.map_range(
        1..limit + 1,
        |n| -> Result<Option<(usize, Rational, Rational)>, EvalError> {
            let l = ctx.side_value(lhs, n)?;
            let r = ctx.side_value(rhs, n)?;
            Ok((l != r).then_some((n, l, r)))
        },
    );
    for row in rows {
        if let Some(hit) = row? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("side value {value} at n = {n} is not an integer")]
    NonIntegral { n: usize, value: Rational },
}

/// First admissible `n` in `1..=limit` violating the congruence.
pub fn first_violation(
    record: &CongruenceRecord,
    limit: usize,
    ctx: &EvalContext,
    exec: Execution,
) -> Result<Option<(usize, BigInt, BigInt)>, CongruenceError> {
    let g = BigInt::from(record.coprime_to);
    let rows = exec.map_range(
        1..limit + 1,
        |n| -> Result<Option<(usize, BigInt, BigInt)>, CongruenceError> {
            if !BigInt::from(n).gcd(&g).is_one() {
                return Ok(None);
            }
            let int = |side: &Side| -> Result<BigInt, CongruenceError> {
                let v = ctx.side_value(side, n)?;
                if !v.is_integer() {
                    return Err(CongruenceError::NonIntegral { n, value: v });
                }
                Ok(v.to_integer())
            };
            let (l, r) = (int(&record.lhs)?, int(&record.rhs)?);
            Ok((!(&l - &r).mod_floor(&record.modulus).is_zero()).then_some((n, l, r)))
        },
    );
    for row in rows {
        if let Some(hit) = row? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}
