//! Named forms: Bernoulli numbers, divisor-power sieves, the Eisenstein
//! series `E_2 .. E_12`, the discriminant `Delta`, and Ramanujan's tau.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::par::Execution;
use crate::qseries::{QSeries, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("no Eisenstein series of weight {0} is available (supported: 2, 4, 6, 8, 10, 12)")]
    UnsupportedWeight(u32),
    #[error("weight {0} is odd; level-one forms have even weight")]
    OddWeight(i64),
    #[error("depth {depth} exceeds half the weight {weight}")]
    DepthExceedsHalfWeight { weight: u32, depth: u32 },
    #[error("cannot add forms of weights {left} and {right}")]
    WeightMismatch { left: u32, right: u32 },
    #[error("tau strategies disagree at n = {n}: {}", render_values(.values))]
    StrategyDisagreement {
        n: usize,
        values: Vec<(TauStrategy, BigInt)>,
    },
    #[error("unknown tau strategy `{0}` (expected product, eisenstein, vdp or niebur)")]
    UnknownStrategy(String),
}

fn render_values(values: &[(TauStrategy, BigInt)]) -> String {
    values
        .iter()
        .map(|(s, v)| format!("{s}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `B_m` under the convention `x/(e^x - 1) = sum B_m x^m / m!`, so `B_1 = -1/2`.
pub fn bernoulli(m: u32) -> Rational {
    bernoulli_table(m).pop().expect("table is non-empty")
}

/// `B_0 ..= B_m`, from `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(m: u32) -> Vec<Rational> {
    let m = m as usize;
    let mut table: Vec<Rational> = Vec::with_capacity(m + 1);
    table.push(Rational::one());
    // row holds C(k+1, 0..=k+1) for the current k
    let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for k in 1..=m {
        let mut next = vec![BigInt::one(); k + 2];
        for j in 1..=k {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
        let sum = (0..k).fold(Rational::zero(), |acc, j| {
            acc + &table[j] * Rational::from_integer(row[j].clone())
        });
        table.push(-sum / Rational::from_integer(BigInt::from(k + 1)));
    }
    table
}

/// `sigma_k(1..=limit)`, filled by a divisor sieve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTable {
    k: u32,
    // values[0] is a zero placeholder so that values[n] = sigma_k(n)
    values: Vec<BigInt>,
}

impl SigmaTable {
    pub fn new(k: u32, limit: usize) -> Self {
        let mut values = vec![BigInt::zero(); limit + 1];
        for d in 1..=limit {
            let power = BigInt::from(d).pow(k);
            for j in (d..=limit).step_by(d) {
                values[j] += &power;
            }
        }
        SigmaTable { k, values }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `sigma_k(n)` for `1 <= n <= limit`.
    ///
    /// # Panics
    /// If `n` is zero or above the limit.
    pub fn get(&self, n: usize) -> &BigInt {
        assert!(
            n >= 1 && n <= self.limit(),
            "sigma_{}({n}) is outside the table",
            self.k
        );
        &self.values[n]
    }

    /// The table as `i128`s where they fit (index 0 is a zero placeholder).
    pub fn to_i128(&self) -> Vec<Option<i128>> {
        self.values.iter().map(ToPrimitive::to_i128).collect()
    }

    /// `sum_{n=1}^{N} sigma_k(n) q^n`.
    ///
    /// # Panics
    /// If `truncation` exceeds the table limit.
    pub fn generating_series(&self, truncation: usize) -> QSeries {
        assert!(truncation <= self.limit());
        QSeries::from_integers(self.values[..=truncation].iter().cloned())
    }
}

pub fn sigma_table(k: u32, limit: usize) -> SigmaTable {
    SigmaTable::new(k, limit)
}

/// A q-expansion tagged with a weight and an upper bound on its depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedForm {
    series: QSeries,
    weight: u32,
    depth: u32,
}

impl GradedForm {
    pub fn new(series: QSeries, weight: u32, depth: u32) -> Result<Self, FormsError> {
        if weight % 2 == 1 {
            return Err(FormsError::OddWeight(weight as i64));
        }
        if depth > weight / 2 {
            return Err(FormsError::DepthExceedsHalfWeight { weight, depth });
        }
        Ok(GradedForm {
            series,
            weight,
            depth,
        })
    }

    /// A modular (depth 0) form.
    pub fn modular(series: QSeries, weight: u32) -> Result<Self, FormsError> {
        Self::new(series, weight, 0)
    }

    pub fn zero(weight: u32, truncation: usize) -> Self {
        GradedForm {
            series: QSeries::zero(truncation),
            weight: weight + weight % 2,
            depth: 0,
        }
    }

    pub fn series(&self) -> &QSeries {
        &self.series
    }

    pub fn into_series(self) -> QSeries {
        self.series
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn truncation(&self) -> usize {
        self.series.truncation()
    }

    pub fn coefficient(&self, n: usize) -> &Rational {
        &self.series.coeffs()[n]
    }

    pub fn mul(&self, other: &GradedForm) -> GradedForm {
        GradedForm {
            series: self.series.mul(&other.series),
            weight: self.weight + other.weight,
            depth: self.depth + other.depth,
        }
    }

    /// `D^times`: weight grows by `2*times`, the depth bound by `times`.
    pub fn derive(&self, times: u32) -> GradedForm {
        if times == 0 {
            return self.clone();
        }
        GradedForm {
            series: self.series.derive(times),
            weight: self.weight + 2 * times,
            depth: self.depth + times,
        }
    }

    pub fn scale(&self, c: &Rational) -> GradedForm {
        GradedForm {
            series: self.series.scale(c),
            weight: self.weight,
            depth: self.depth,
        }
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm, FormsError> {
        if self.weight != other.weight {
            return Err(FormsError::WeightMismatch {
                left: self.weight,
                right: other.weight,
            });
        }
        Ok(GradedForm {
            series: self.series.add(&other.series),
            weight: self.weight,
            depth: self.depth.max(other.depth),
        })
    }

    pub fn sub(&self, other: &GradedForm) -> Result<GradedForm, FormsError> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Loosens the recorded depth bound.
    pub fn with_depth(self, depth: u32) -> Result<GradedForm, FormsError> {
        GradedForm::new(self.series, self.weight, depth.max(self.depth))
    }
}

/// The constant `c_k` in `E_k = 1 + c_k sum sigma_{k-1}(n) q^n`.
pub fn eisenstein_constant(k: u32) -> Result<Rational, FormsError> {
    let c = match k {
        2 => Rational::from_integer((-24).into()),
        4 => Rational::from_integer(240.into()),
        6 => Rational::from_integer((-504).into()),
        8 => Rational::from_integer(480.into()),
        10 => Rational::from_integer((-264).into()),
        12 => Rational::new(65520.into(), 691.into()),
        _ => return Err(FormsError::UnsupportedWeight(k)),
    };
    Ok(c)
}

/// `-2k / B_k`, the normalisation that the listed constants follow.
pub fn bernoulli_normalization(k: u32) -> Rational {
    let b = bernoulli(k);
    -Rational::from_integer(BigInt::from(2 * k)) / b
}

/// `E_k` to truncation `n`; `E_2` carries depth 1.
pub fn eisenstein(k: u32, n: usize) -> Result<GradedForm, FormsError> {
    let c = eisenstein_constant(k)?;
    assert_eq!(
        c,
        bernoulli_normalization(k),
        "listed E_{k} constant disagrees with -2k/B_k"
    );
    let sigma = SigmaTable::new(k - 1, n);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::one());
    coeffs.extend((1..=n).map(|i| &c * Rational::from_integer(sigma.get(i).clone())));
    let depth = if k == 2 { 1 } else { 0 };
    GradedForm::new(QSeries::from_coeffs(coeffs), k, depth)
}

/// `Delta = q prod_{n>=1} (1 - q^n)^24`, expanded factor by factor.
pub fn delta_product(n: usize) -> GradedForm {
    // c[i] is the q^i coefficient of the running product; only q^0..q^{n-1}
    // matter because of the leading q.
    let len = n.max(1);
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    for k in 1..len {
        for _ in 0..24 {
            for i in (k..len).rev() {
                let (lo, hi) = c.split_at_mut(i);
                if !lo[i - k].is_zero() {
                    hi[0] -= &lo[i - k];
                }
            }
        }
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(BigInt::zero());
    coeffs.extend(c.into_iter().take(n));
    GradedForm::new(QSeries::from_integers(coeffs), 12, 0).expect("weight 12, depth 0")
}

/// `Delta` from `E_12 - E_8 E_4 = (65520/691 - 720) Delta`.
pub fn delta_eisenstein(n: usize) -> GradedForm {
    delta_eisenstein_with(n, Execution::default())
}

pub fn delta_eisenstein_with(n: usize, exec: Execution) -> GradedForm {
    let e4 = eisenstein(4, n).expect("weight 4");
    let e8 = eisenstein(8, n).expect("weight 8");
    let e12 = eisenstein(12, n).expect("weight 12");
    let diff = e12.series().sub(&e8.series().mul_with(e4.series(), exec));
    let factor = eisenstein_constant(12).expect("weight 12") - Rational::from_integer(720.into());
    let series = diff.scale(&(Rational::one() / factor));
    GradedForm::new(series, 12, 0).expect("weight 12, depth 0")
}

/// Dimension of `M_k(SL_2(Z))`.
pub fn dim_modular(k: i64) -> Result<usize, FormsError> {
    if k % 2 != 0 {
        return Err(FormsError::OddWeight(k));
    }
    if k < 0 || k == 2 {
        return Ok(0);
    }
    let base = (k / 12) as usize;
    Ok(if k % 12 == 2 { base } else { base + 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TauStrategy {
    /// Coefficients of the product expansion of `Delta`.
    Product,
    /// Coefficients of `(E_12 - E_8 E_4) / (65520/691 - 720)`.
    Eisenstein,
    /// `n^2 sigma_7(n) - 540 sum m(n-m) sigma_3(m) sigma_3(n-m)`.
    Vdp,
    /// `n^4 sigma(n) - 24 sum (35m^4 - 52m^3 n + 18m^2 n^2) sigma(m) sigma(n-m)`.
    Niebur,
}

impl TauStrategy {
    pub const ALL: [TauStrategy; 4] = [
        TauStrategy::Product,
        TauStrategy::Eisenstein,
        TauStrategy::Vdp,
        TauStrategy::Niebur,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TauStrategy::Product => "product",
            TauStrategy::Eisenstein => "eisenstein",
            TauStrategy::Vdp => "vdp",
            TauStrategy::Niebur => "niebur",
        }
    }
}

impl fmt::Display for TauStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TauStrategy {
    type Err = FormsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TauStrategy::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| FormsError::UnknownStrategy(s.to_string()))
    }
}

/// `tau(n)` by one strategy.
///
/// # Panics
/// If `n == 0`.
pub fn tau(n: usize, strategy: TauStrategy) -> BigInt {
    assert!(n >= 1, "tau is defined for n >= 1");
    tau_table(n, strategy, Execution::Sequential).swap_remove(n)
}

/// `tau(0..=max_n)` by one strategy; entry 0 is a zero placeholder.
pub fn tau_table(max_n: usize, strategy: TauStrategy, exec: Execution) -> Vec<BigInt> {
    match strategy {
        TauStrategy::Product => integer_coeffs(delta_product(max_n).series()),
        TauStrategy::Eisenstein => integer_coeffs(delta_eisenstein_with(max_n, exec).series()),
        TauStrategy::Vdp => {
            let s3 = SigmaTable::new(3, max_n);
            let s7 = SigmaTable::new(7, max_n);
            convolution_formula(max_n, exec, &s7, 2, -540, &s3, &s3, |m, n| m * (n - m))
        }
        TauStrategy::Niebur => {
            let s1 = SigmaTable::new(1, max_n);
            convolution_formula(max_n, exec, &s1, 4, -24, &s1, &s1, |m, n| {
                35 * m.pow(4) - 52 * m.pow(3) * n + 18 * m * m * n * n
            })
        }
    }
}

/// Runs every strategy and returns the common table, or the smallest `n`
/// where any two disagree.
pub fn tau_consensus(max_n: usize, exec: Execution) -> Result<Vec<BigInt>, FormsError> {
    let tables: Vec<(TauStrategy, Vec<BigInt>)> = TauStrategy::ALL
        .iter()
        .map(|&s| (s, tau_table(max_n, s, exec)))
        .collect();
    let reference = &tables[0].1;
    for n in 1..=max_n {
        if tables.iter().any(|(_, t)| t[n] != reference[n]) {
            return Err(FormsError::StrategyDisagreement {
                n,
                values: tables.iter().map(|(s, t)| (*s, t[n].clone())).collect(),
            });
        }
    }
    Ok(tables.into_iter().next().expect("four strategies").1)
}

fn integer_coeffs(series: &QSeries) -> Vec<BigInt> {
    series
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "Delta has integral coefficients");
            c.to_integer()
        })
        .collect()
}

/// `n^p sigma_closed(n) + scale * sum_{m=1}^{n-1} w(m, n) left(m) right(n-m)`
/// for every `1 <= n <= max_n`, with an `i128` fast path.
#[allow(clippy::too_many_arguments)]
fn convolution_formula<W>(
    max_n: usize,
    exec: Execution,
    closed: &SigmaTable,
    closed_power: u32,
    scale: i128,
    left: &SigmaTable,
    right: &SigmaTable,
    weight: W,
) -> Vec<BigInt>
where
    W: Fn(i128, i128) -> i128 + Sync + Send,
{
    let closed_small = closed.to_i128();
    let left_small = left.to_i128();
    let right_small = right.to_i128();
    let mut out = exec.map_range(0..max_n + 1, |n| {
        if n == 0 {
            return BigInt::zero();
        }
        let fast = (|| {
            let ni = n as i128;
            let mut acc: i128 = 0;
            for m in 1..n {
                let term = weight(m as i128, ni)
                    .checked_mul(left_small[m]?)?
                    .checked_mul(right_small[n - m]?)?;
                acc = acc.checked_add(term)?;
            }
            let head = ni
                .checked_pow(closed_power)?
                .checked_mul(closed_small[n]?)?;
            head.checked_add(acc.checked_mul(scale)?)
        })();
        match fast {
            Some(v) => BigInt::from(v),
            None => {
                let ni = n as i128;
                let mut acc = BigInt::zero();
                for m in 1..n {
                    acc += BigInt::from(weight(m as i128, ni)) * left.get(m) * right.get(n - m);
                }
                BigInt::from(n).pow(closed_power) * closed.get(n) + acc * BigInt::from(scale)
            }
        }
    });
    out[0] = BigInt::zero();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    /// `B_m / m!` as the coefficients of the reciprocal of `(e^x - 1)/x`.
    fn bernoulli_by_series_inversion(m: usize) -> Vec<Rational> {
        let mut fact = vec![BigInt::one()];
        for i in 1..=m + 1 {
            let next = &fact[i - 1] * BigInt::from(i);
            fact.push(next);
        }
        // (e^x - 1)/x = sum x^j / (j+1)!
        let a: Vec<Rational> = (0..=m)
            .map(|j| Rational::new(BigInt::one(), fact[j + 1].clone()))
            .collect();
        let mut inv = vec![Rational::one()];
        for k in 1..=m {
            let s = (1..=k).fold(Rational::zero(), |acc, j| acc + &a[j] * &inv[k - j]);
            inv.push(-s);
        }
        (0..=m)
            .map(|k| &inv[k] * Rational::from_integer(fact[k].clone()))
            .collect()
    }

    #[test]
    fn bernoulli_matches_series_inversion() {
        let oracle = bernoulli_by_series_inversion(20);
        assert_eq!(bernoulli_table(20), oracle);
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    fn sigma_by_enumeration(k: u32, n: usize) -> BigInt {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| BigInt::from(d).pow(k))
            .sum()
    }

    #[test]
    fn sieve_matches_enumeration() {
        for k in [0, 1, 3, 5, 7, 9, 11] {
            let t = sigma_table(k, 200);
            for n in 1..=200 {
                assert_eq!(t.get(n), &sigma_by_enumeration(k, n), "sigma_{k}({n})");
            }
        }
        assert_eq!(sigma_table(1, 1).get(1), &BigInt::from(1));
        assert_eq!(sigma_table(3, 4).get(4), &BigInt::from(73));
        assert_eq!(sigma_table(5, 2).get(2), &BigInt::from(33));
    }

    #[test]
    fn sigma_multiplicative_spot_checks() {
        let t = sigma_table(5, 100);
        for (a, b) in [(3, 4), (5, 9), (7, 8), (4, 25)] {
            assert_eq!(t.get(a * b), &(t.get(a) * t.get(b)));
        }
        for p in [2usize, 3, 5, 7, 11, 97] {
            assert_eq!(t.get(p), &(BigInt::from(p).pow(5) + 1));
        }
    }

    #[test]
    fn eisenstein_leading_coefficients() {
        for (k, c1) in [
            (2, q(-24, 1)),
            (4, q(240, 1)),
            (6, q(-504, 1)),
            (8, q(480, 1)),
        ] {
            let e = eisenstein(k, 5).unwrap();
            assert_eq!(e.coefficient(0), &q(1, 1));
            assert_eq!(e.coefficient(1), &c1);
        }
        assert_eq!(eisenstein(10, 3).unwrap().coefficient(1), &q(-264, 1));
        assert_eq!(eisenstein(12, 3).unwrap().coefficient(1), &q(65520, 691));
        assert_eq!(eisenstein(2, 3).unwrap().depth(), 1);
        assert_eq!(eisenstein(4, 3).unwrap().depth(), 0);
        assert_eq!(eisenstein(14, 3), Err(FormsError::UnsupportedWeight(14)));
    }

    #[test]
    fn four_k_over_bernoulli_is_twice_the_listed_constant() {
        for k in [4, 6, 8, 10, 12] {
            let four = -Rational::from_integer(BigInt::from(4 * k)) / bernoulli(k);
            assert_eq!(four, eisenstein_constant(k).unwrap() * q(2, 1));
        }
    }

    #[test]
    fn derive_e4_second_coefficient() {
        let d = eisenstein(4, 4).unwrap().derive(1);
        assert_eq!(d.coefficient(2), &q(4320, 1));
        assert_eq!(d.weight(), 6);
        assert_eq!(d.depth(), 1);
    }

    #[test]
    fn delta_leading_terms() {
        let d = delta_product(10);
        assert_eq!(d.coefficient(0), &q(0, 1));
        assert_eq!(d.coefficient(1), &q(1, 1));
        assert_eq!(d.coefficient(2), &q(-24, 1));
        assert_eq!(d.coefficient(3), &q(252, 1));
        assert_eq!(delta_product(1).truncation(), 1);
    }

    #[test]
    fn delta_routes_agree() {
        assert_eq!(delta_product(60), delta_eisenstein(60));
        let e4 = eisenstein(4, 40).unwrap();
        let e6 = eisenstein(6, 40).unwrap();
        let cube = e4.series().pow(3);
        let sq = e6.series().pow(2);
        assert_eq!(
            cube.sub(&sq).scale(&q(1, 1728)),
            *delta_product(40).series()
        );
    }

    #[test]
    fn tau_small_values_all_strategies() {
        let expected = [0i64, 1, -24, 252, -1472, 4830, -6048, -16744, 84480];
        for s in TauStrategy::ALL {
            let t = tau_table(8, s, Execution::Sequential);
            let got: Vec<i64> = t.iter().map(|v| v.to_i64().unwrap()).collect();
            assert_eq!(got, expected, "{s}");
        }
        assert_eq!(tau(2, TauStrategy::Vdp), BigInt::from(-24));
        assert_eq!(tau(1, TauStrategy::Niebur), BigInt::from(1));
    }

    #[test]
    fn consensus_reports_agreement() {
        let t = tau_consensus(120, Execution::Parallel).unwrap();
        assert_eq!(t[6], &t[2] * &t[3]);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in TauStrategy::ALL {
            assert_eq!(s.to_string().parse::<TauStrategy>().unwrap(), s);
        }
        assert!("ramanujan".parse::<TauStrategy>().is_err());
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(dim_modular(0).unwrap(), 1);
        assert_eq!(dim_modular(2).unwrap(), 0);
        assert_eq!(dim_modular(4).unwrap(), 1);
        assert_eq!(dim_modular(12).unwrap(), 2);
        assert_eq!(dim_modular(14).unwrap(), 1);
        assert_eq!(dim_modular(24).unwrap(), 3);
        assert_eq!(dim_modular(26).unwrap(), 2);
        assert_eq!(dim_modular(-4).unwrap(), 0);
        assert_eq!(dim_modular(7), Err(FormsError::OddWeight(7)));
    }

    #[test]
    fn graded_form_bookkeeping() {
        let e2 = eisenstein(2, 5).unwrap();
        let e4 = eisenstein(4, 5).unwrap();
        let p = e2.derive(2).mul(&e4);
        assert_eq!((p.weight(), p.depth()), (10, 3));
        assert!(e2.add(&e4).is_err());
        assert!(GradedForm::new(QSeries::zero(3), 4, 3).is_err());
        assert!(GradedForm::new(QSeries::zero(3), 5, 0).is_err());
    }
}
