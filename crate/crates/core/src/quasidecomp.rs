//! Exact decomposition of quasimodular forms of level one.
//!
//! A quasimodular form of weight `k` (even, depth at most `k/2`) is written
//! uniquely over the generators
//!
//! ```text
//! D^i(b)        for 0 <= i <= k/2 - 1 and b in an echelon basis of M_{k-2i}
//! D^{k/2-1}(E2)
//! ```
//!
//! Bases of `M_k` are built from the monomials `E4^a E6^b` (descending `a`) and
//! reduced to echelon form, so the `j`-th basis element is `q^j + O(q^dim)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::forms::{dim_modular, eisenstein, GradedForm};
use crate::qseries::{QSeries, Rational};

/// Extra coefficients used beyond the generator count when solving.
pub const OVERDETERMINATION: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("weight {0} is odd or negative")]
    BadWeight(i64),
    #[error("depth bound {depth} exceeds half the weight {weight}")]
    DepthExceedsHalfWeight { weight: u32, depth: u32 },
    #[error("form has weight {actual}, decomposition asked for weight {declared}")]
    WeightMismatch { declared: u32, actual: u32 },
    #[error("truncation {available} is below the {needed} coefficients the solve needs")]
    TruncationTooSmall { needed: usize, available: usize },
    #[error("not in the graded space: coefficient of q^{index} cannot be matched")]
    NotInSpace { index: usize },
    #[error("generators are dependent on the sampled coefficients (rank {rank} of {cols})")]
    Degenerate { rank: usize, cols: usize },
    #[error("coordinate on {label} (depth {depth}) is nonzero but the depth bound is {bound}")]
    DepthViolation {
        label: String,
        depth: u32,
        bound: u32,
    },
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("inconsistent system at row {row}")]
    Inconsistent { row: usize },
    #[error("rank {rank} is below the column count {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("fewer rows ({rows}) than columns ({cols})")]
    Underdetermined { rows: usize, cols: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub form: GradedForm,
}

/// Coordinates of a form over the generators of its weight, in generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionRecord {
    pub weight: u32,
    pub depth: u32,
    pub coordinates: Vec<(String, Rational)>,
}

impl DecompositionRecord {
    pub fn nonzero(&self) -> Vec<(&str, &Rational)> {
        self.coordinates
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.as_str(), c))
            .collect()
    }

    pub fn get(&self, label: &str) -> Option<&Rational> {
        self.coordinates
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, c)| c)
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|(_, c)| c.is_zero())
    }
}

fn check_weight(k: u32) -> Result<(), DecompError> {
    if k % 2 == 1 {
        return Err(DecompError::BadWeight(k as i64));
    }
    Ok(())
}

/// Echelon basis of `M_k(SL_2(Z))`, truncated at `n`.
pub fn modular_basis(k: u32, n: usize) -> Result<Vec<BasisElement>, DecompError> {
    check_weight(k)?;
    let dim = dim_modular(k as i64).map_err(|_| DecompError::BadWeight(k as i64))?;
    if dim == 0 {
        return Ok(Vec::new());
    }
    if n + 1 < dim {
        return Err(DecompError::TruncationTooSmall {
            needed: dim - 1,
            available: n,
        });
    }
    let e4 = eisenstein(4, n).expect("weight 4").into_series();
    let e6 = eisenstein(6, n).expect("weight 6").into_series();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut a = k / 4;
    loop {
        let rest = k - 4 * a;
        if rest.is_multiple_of(6) {
            let s = e4.pow(a).mul(&e6.pow(rest / 6));
            rows.push(s.into_coeffs());
        }
        if a == 0 {
            break;
        }
        a -= 1;
    }
    debug_assert_eq!(rows.len(), dim);

    let pivots = reduce_rows(&mut rows);
    let mut elems: Vec<(usize, Vec<Rational>)> = pivots.into_iter().zip(rows).collect();
    elems.sort_by_key(|(p, _)| *p);
    Ok(elems
        .into_iter()
        .map(|(p, coeffs)| {
            let label = if k == 0 {
                "1".to_string()
            } else if dim == 1 {
                format!("E{k}")
            } else if k == 12 && p == 1 {
                "Delta".to_string()
            } else {
                format!("M{k}[q^{p}]")
            };
            let form = GradedForm::modular(QSeries::from_coeffs(coeffs), k).expect("even weight");
            BasisElement { label, form }
        })
        .collect())
}

/// Reduced row echelon form in place; returns each row's pivot column.
fn reduce_rows(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::with_capacity(rows.len());
    let mut next = 0;
    for col in 0..width {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = Rational::one() / &rows[next][col];
        for x in rows[next].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

fn derivative_label(inner: &str, i: u32) -> String {
    match i {
        0 => inner.to_string(),
        1 => format!("D({inner})"),
        _ => format!("D^{i}({inner})"),
    }
}

/// The generators of weight `k`, in a fixed order: by derivative count, then
/// basis order, then the `E2` term.
pub fn generators(k: u32, n: usize) -> Result<Vec<BasisElement>, DecompError> {
    check_weight(k)?;
    if k == 0 {
        return modular_basis(0, n);
    }
    let half = k / 2;
    let mut out = Vec::new();
    for i in 0..half {
        for b in modular_basis(k - 2 * i, n)? {
            out.push(BasisElement {
                label: derivative_label(&b.label, i),
                form: b.form.derive(i),
            });
        }
    }
    let e2 = eisenstein(2, n).expect("weight 2");
    out.push(BasisElement {
        label: derivative_label("E2", half - 1),
        form: e2.derive(half - 1),
    });
    Ok(out)
}

/// Number of generators of weight `k`.
pub fn generator_count(k: u32) -> Result<usize, DecompError> {
    check_weight(k)?;
    if k == 0 {
        return Ok(1);
    }
    let dims: usize = (0..k / 2)
        .map(|i| dim_modular((k - 2 * i) as i64).expect("even"))
        .sum();
    Ok(dims + 1)
}

/// Highest coefficient index sampled by [`decompose`] at weight `k`.
pub fn solve_bound(k: u32) -> Result<usize, DecompError> {
    Ok(generator_count(k)? + OVERDETERMINATION)
}

/// Solves `A x = b` exactly for `A` with at least as many rows as columns.
///
/// Row indices in errors refer to the caller's row order.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, SolveError> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    assert_eq!(rows, b.len(), "right-hand side length");
    if rows < cols {
        return Err(SolveError::Underdetermined { rows, cols });
    }
    let mut m: Vec<(usize, Vec<Rational>)> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            (i, r)
        })
        .collect();

    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..cols {
        let Some(found) = (rank..rows).find(|&r| !m[r].1[col].is_zero()) else {
            continue;
        };
        m.swap(rank, found);
        let inv = Rational::one() / &m[rank].1[col];
        for x in m[rank].1.iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[rank].1.clone();
        for (r, (_, row)) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    if let Some(row) = m[rank..]
        .iter()
        .filter(|(_, r)| !r[cols].is_zero())
        .map(|(i, _)| *i)
        .min()
    {
        return Err(SolveError::Inconsistent { row });
    }
    if rank < cols {
        return Err(SolveError::RankDeficient { rank, cols });
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r].1[cols].clone();
    }
    Ok(x)
}

/// Coordinates of `f` over the weight-`k` generators, with depth bound `s`.
///
/// The system is solved on coefficients `0..=G(k)+4` and the solution is then
/// checked against every coefficient of `f`.
pub fn decompose(f: &GradedForm, k: u32, s: u32) -> Result<DecompositionRecord, DecompError> {
    check_weight(k)?;
    if f.weight() != k {
        return Err(DecompError::WeightMismatch {
            declared: k,
            actual: f.weight(),
        });
    }
    if s > k / 2 {
        return Err(DecompError::DepthExceedsHalfWeight {
            weight: k,
            depth: s,
        });
    }
    let bound = solve_bound(k)?;
    let trunc = f.truncation();
    if trunc < bound {
        return Err(DecompError::TruncationTooSmall {
            needed: bound,
            available: trunc,
        });
    }
    let gens = generators(k, trunc)?;
    let a: Vec<Vec<Rational>> = (0..=bound)
        .map(|i| gens.iter().map(|g| g.form.coefficient(i).clone()).collect())
        .collect();
    let b: Vec<Rational> = (0..=bound).map(|i| f.coefficient(i).clone()).collect();
    let x = solve_exact(&a, &b).map_err(|e| match e {
        SolveError::Inconsistent { row } => DecompError::NotInSpace { index: row },
        SolveError::RankDeficient { rank, cols }
        | SolveError::Underdetermined { rows: rank, cols } => {
            DecompError::Degenerate { rank, cols }
        }
    })?;

    let rebuilt = combine(&gens, &x, trunc);
    if let Some(index) = (0..=trunc).find(|&i| rebuilt.coeffs()[i] != *f.coefficient(i)) {
        return Err(DecompError::NotInSpace { index });
    }
    for (g, c) in gens.iter().zip(&x) {
        if !c.is_zero() && g.form.depth() > s {
            return Err(DecompError::DepthViolation {
                label: g.label.clone(),
                depth: g.form.depth(),
                bound: s,
            });
        }
    }
    Ok(DecompositionRecord {
        weight: k,
        depth: s,
        coordinates: gens.into_iter().map(|g| g.label).zip(x).collect(),
    })
}

fn combine(gens: &[BasisElement], x: &[Rational], n: usize) -> QSeries {
    gens.iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .fold(QSeries::zero(n), |acc, (g, c)| {
            acc.add(&g.form.series().scale(c))
        })
}

/// Rebuilds the form described by `rec`, truncated at `n`.
pub fn recompose(rec: &DecompositionRecord, n: usize) -> Result<GradedForm, DecompError> {
    let gens = generators(rec.weight, n)?;
    let by_label: BTreeMap<&str, &BasisElement> =
        gens.iter().map(|g| (g.label.as_str(), g)).collect();
    let mut acc = QSeries::zero(n);
    for (label, c) in &rec.coordinates {
        let g = by_label
            .get(label.as_str())
            .ok_or_else(|| DecompError::UnknownLabel(label.clone()))?;
        if !c.is_zero() {
            acc = acc.add(&g.form.series().scale(c));
        }
    }
    let depth = rec.depth.min(rec.weight / 2);
    Ok(GradedForm::new(acc, rec.weight, depth).expect("depth clamped to weight/2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::quasi_bracket;
    use crate::forms::delta_product;

    const N: usize = 30;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn e(k: u32) -> GradedForm {
        eisenstein(k, N).unwrap()
    }

    fn golden(f: &GradedForm, k: u32, s: u32) -> Vec<(String, Rational)> {
        decompose(f, k, s)
            .unwrap()
            .nonzero()
            .into_iter()
            .map(|(l, c)| (l.to_string(), c.clone()))
            .collect()
    }

    fn pairs(v: &[(&str, Rational)]) -> Vec<(String, Rational)> {
        v.iter().map(|(l, c)| (l.to_string(), c.clone())).collect()
    }

    #[test]
    fn basis_shapes() {
        assert!(modular_basis(2, N).unwrap().is_empty());
        let b8 = modular_basis(8, N).unwrap();
        assert_eq!(b8.len(), 1);
        assert_eq!(b8[0].label, "E8");
        assert_eq!(b8[0].form, e(8));
        let b12 = modular_basis(12, N).unwrap();
        assert_eq!(b12.len(), 2);
        assert_eq!(b12[0].form.coefficient(0), &r(1, 1));
        assert_eq!(b12[0].form.coefficient(1), &r(0, 1));
        assert_eq!(b12[1].form.coefficient(0), &r(0, 1));
        assert_eq!(b12[1].form.coefficient(1), &r(1, 1));
        assert_eq!(b12[1].label, "Delta");
        assert_eq!(b12[1].form, delta_product(N));
        assert_eq!(modular_basis(0, N).unwrap()[0].label, "1");
        assert!(modular_basis(7, N).is_err());
    }

    #[test]
    fn echelon_pivots_for_large_weight() {
        let b = modular_basis(36, N).unwrap();
        assert_eq!(b.len(), 4);
        for (j, el) in b.iter().enumerate() {
            for i in 0..4 {
                let want = if i == j { r(1, 1) } else { r(0, 1) };
                assert_eq!(el.form.coefficient(i), &want, "element {j}, q^{i}");
            }
        }
    }

    #[test]
    fn generator_counts_match_lists() {
        for k in (0..=24).step_by(2) {
            assert_eq!(generators(k, N).unwrap().len(), generator_count(k).unwrap());
        }
        assert_eq!(generator_count(8).unwrap(), 4);
        assert_eq!(generator_count(12).unwrap(), 7);
        let labels: Vec<String> = generators(8, N)
            .unwrap()
            .into_iter()
            .map(|g| g.label)
            .collect();
        assert_eq!(labels, ["E8", "D(E6)", "D^2(E4)", "D^3(E2)"]);
    }

    #[test]
    fn solver_basics() {
        let one = r(1, 1);
        let zero = r(0, 1);
        let id = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ];
        let b = vec![r(3, 1), r(-2, 5)];
        assert_eq!(solve_exact(&id, &b).unwrap(), b);
        assert_eq!(
            solve_exact(&[vec![r(2, 1)]], &[r(1, 1)]).unwrap(),
            vec![r(1, 2)]
        );
        let a = vec![vec![one.clone()], vec![one.clone()], vec![r(2, 1)]];
        assert_eq!(
            solve_exact(&a, &[r(1, 1), r(1, 1), r(3, 1)]),
            Err(SolveError::Inconsistent { row: 2 })
        );
        let dep = vec![vec![one.clone(), one.clone()], vec![r(2, 1), r(2, 1)]];
        assert_eq!(
            solve_exact(&dep, &[r(1, 1), r(2, 1)]),
            Err(SolveError::RankDeficient { rank: 1, cols: 2 })
        );
    }

    #[test]
    fn bracket_table() {
        let e2 = e(2);
        let d = |i: u32| e2.derive(i);
        let f1 = quasi_bracket(1, &d(3), (8, 4), &e2, (2, 1)).unwrap();
        let f2 = quasi_bracket(1, &d(2), (6, 3), &d(1), (4, 2)).unwrap();
        let f3 = quasi_bracket(2, &d(2), (6, 3), &e2, (2, 1)).unwrap();
        let f5 = quasi_bracket(3, &d(1), (4, 2), &e2, (2, 1)).unwrap();
        assert_eq!(
            golden(&f1, 12, 5),
            pairs(&[("Delta", r(24, 7)), ("D^4(E4)", r(3, 35))])
        );
        assert_eq!(
            golden(&f2, 12, 5),
            pairs(&[("Delta", r(-24, 7)), ("D^4(E4)", r(1, 70))])
        );
        assert_eq!(
            golden(&f3, 12, 4),
            pairs(&[("Delta", r(-72, 7)), ("D^4(E4)", r(-2, 35))])
        );
        assert_eq!(golden(&f5, 12, 3), pairs(&[("Delta", r(24, 1))]));
        for f in [&f1, &f2, &f3, &f5] {
            let rec = decompose(f, 12, 6).unwrap();
            assert_eq!(recompose(&rec, N).unwrap().series(), f.series());
        }
    }

    #[test]
    fn e2_products() {
        let e2 = e(2);
        let sq = e2.derive(1).mul(&e2.derive(1));
        let mixed = e2.mul(&e2.derive(2));
        assert_eq!(
            golden(&sq, 8, 4),
            pairs(&[("D^2(E4)", r(1, 5)), ("D^3(E2)", r(2, 1))])
        );
        assert_eq!(
            golden(&mixed, 8, 4),
            pairs(&[("D^2(E4)", r(3, 10)), ("D^3(E2)", r(4, 1))])
        );
    }

    #[test]
    fn zero_and_empty() {
        let z = GradedForm::zero(10, N);
        assert!(decompose(&z, 10, 5).unwrap().is_zero());
        let empty = DecompositionRecord {
            weight: 10,
            depth: 0,
            coordinates: Vec::new(),
        };
        assert!(recompose(&empty, N).unwrap().series().is_zero());
    }

    #[test]
    fn truncation_independence() {
        let f = e(2).mul(&e(4)).mul(&e(6));
        let short = GradedForm::new(f.series().truncate(17), 12, 1).unwrap();
        let lo = decompose(&short, 12, 1).unwrap();
        let hi = decompose(&f, 12, 1).unwrap();
        assert_eq!(lo, hi);
    }

    #[test]
    fn failures_are_reported() {
        let e2 = e(2);
        assert!(matches!(
            decompose(&e2.mul(&e(4)), 6, 0),
            Err(DecompError::DepthViolation { .. })
        ));
        let mut c = e(8).into_series().into_coeffs();
        c[N] += r(1, 1);
        let bumped = GradedForm::modular(QSeries::from_coeffs(c), 8).unwrap();
        assert_eq!(
            decompose(&bumped, 8, 0),
            Err(DecompError::NotInSpace { index: N })
        );
        let short = GradedForm::modular(e(8).series().truncate(5), 8).unwrap();
        assert!(matches!(
            decompose(&short, 8, 0),
            Err(DecompError::TruncationTooSmall { needed: 8, .. })
        ));
        let bad = DecompositionRecord {
            weight: 8,
            depth: 0,
            coordinates: vec![("E9".into(), r(1, 1))],
        };
        assert_eq!(
            recompose(&bad, N),
            Err(DecompError::UnknownLabel("E9".into()))
        );
    }
}
