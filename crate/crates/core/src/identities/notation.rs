//! Plain-text notation for divisor-sum identities and congruences.
//!
//! ```text
//! tau(n) = n^2 s7(n) - 540 sum[m(n-m) s3(m) s3(n-m)]
//! 12 tau(n) == 5n s3(n) + 7n s5(n) (mod 2^3*3*5*7)
//! (6n-5) s1(n) == s3(n) (mod 24), gcd(n,6)=1
//! ```
//!
//! `sK` is the divisor power sum, `sum[...]` runs over `1 <= m <= n-1`, and
//! juxtaposition multiplies. Division is only by monomials `c n^j`. Products
//! are expanded into flat term lists when parsed.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::qseries::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {offset}")]
pub struct NotationError {
    pub offset: usize,
    pub message: String,
}

/// The arithmetic function in a closed term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arith {
    Tau,
    Sigma(u32),
}

impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arith::Tau => f.write_str("tau(n)"),
            Arith::Sigma(k) => write!(f, "s{k}(n)"),
        }
    }
}

/// `coefficient * n^n_power * arith(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedTerm {
    pub coefficient: Rational,
    pub n_power: i32,
    pub arith: Arith,
}

/// `coefficient * m^m_power * n^n_power` inside a convolution sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coefficient: Rational,
    pub m_power: u32,
    pub n_power: i32,
}

/// `sum_{m=1}^{n-1} P(m, n) s_left(m) s_right(n-m)` with `P` a monomial list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionTerm {
    pub left: u32,
    pub right: u32,
    pub monomials: Vec<Monomial>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Side {
    pub closed: Vec<ClosedTerm>,
    pub convolutions: Vec<ConvolutionTerm>,
}

impl Side {
    pub fn is_empty(&self) -> bool {
        self.closed.is_empty() && self.convolutions.is_empty()
    }

    /// Every divisor-sum exponent used on this side.
    pub fn sigma_exponents(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self
            .closed
            .iter()
            .filter_map(|t| match t.arith {
                Arith::Sigma(k) => Some(k),
                Arith::Tau => None,
            })
            .chain(self.convolutions.iter().flat_map(|c| [c.left, c.right]))
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    pub fn uses_tau(&self) -> bool {
        self.closed.iter().any(|t| t.arith == Arith::Tau)
    }

    /// The most negative power of `n` (0 if none).
    pub fn min_n_power(&self) -> i32 {
        self.closed
            .iter()
            .map(|t| t.n_power)
            .chain(
                self.convolutions
                    .iter()
                    .flat_map(|c| c.monomials.iter().map(|m| m.n_power)),
            )
            .min()
            .unwrap_or(0)
            .min(0)
    }

    /// Every rational coefficient, closed terms first.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.closed
            .iter()
            .map(|t| t.coefficient.clone())
            .chain(
                self.convolutions
                    .iter()
                    .flat_map(|c| c.monomials.iter().map(|m| m.coefficient.clone())),
            )
            .collect()
    }

    fn from_poly(p: Poly, offset: usize) -> Result<Side, NotationError> {
        let mut closed = Vec::new();
        let mut conv: BTreeMap<(u32, u32), Vec<Monomial>> = BTreeMap::new();
        for (key, c) in p.0 {
            let err = |m: &str| NotationError {
                offset,
                message: m.to_string(),
            };
            match key.atoms.as_slice() {
                [Atom::Conv(a, b)] => conv.entry((*a, *b)).or_default().push(Monomial {
                    coefficient: c,
                    m_power: key.m_power,
                    n_power: key.n_power,
                }),
                [atom] if key.m_power > 0 => {
                    return Err(err(&format!("m outside a sum next to {atom:?}")))
                }
                [Atom::Tau] => closed.push(ClosedTerm {
                    coefficient: c,
                    n_power: key.n_power,
                    arith: Arith::Tau,
                }),
                [Atom::SigmaN(k)] => closed.push(ClosedTerm {
                    coefficient: c,
                    n_power: key.n_power,
                    arith: Arith::Sigma(*k),
                }),
                [] => return Err(err("term without an arithmetic function")),
                [_] => return Err(err("s(m) or s(n-m) outside a sum")),
                _ => return Err(err("product of arithmetic functions outside a sum")),
            }
        }
        Ok(Side {
            closed,
            convolutions: conv
                .into_iter()
                .map(|((left, right), monomials)| ConvolutionTerm {
                    left,
                    right,
                    monomials,
                })
                .collect(),
        })
    }
}

fn write_coefficient(out: &mut String, c: &Rational, first: bool, unit_ok: bool) {
    let neg = c.is_negative();
    let a = c.abs();
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    if !(unit_ok && a.is_one()) {
        write!(out, "{a} ").expect("string write");
    }
}

fn write_n_power(out: &mut String, p: i32) {
    match p {
        0 => {}
        1 => out.push_str("n "),
        p if p > 0 => write!(out, "n^{p} ").expect("string write"),
        -1 => out.push_str("/n "),
        p => write!(out, "/n^{} ", -p).expect("string write"),
    }
}

/// Renders a side back into the notation; the output parses to the same side.
impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut first = true;
        for t in &self.closed {
            write_coefficient(&mut out, &t.coefficient, first, t.n_power >= 0);
            write_n_power(&mut out, t.n_power);
            write!(out, "{}", t.arith)?;
            first = false;
        }
        for c in &self.convolutions {
            let d = c
                .monomials
                .iter()
                .map(|m| m.n_power)
                .min()
                .unwrap_or(0)
                .min(0);
            let lead = c.monomials[0].coefficient.clone();
            write_coefficient(&mut out, &lead, first, d == 0);
            write_n_power(&mut out, d);
            let inner: Vec<String> = c
                .monomials
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let mut s = String::new();
                    let bare = m.m_power == 0 && m.n_power == d;
                    write_coefficient(&mut s, &(&m.coefficient / &lead), i == 0, !bare);
                    match m.m_power {
                        0 => {}
                        1 => s.push_str("m "),
                        p => write!(s, "m^{p} ").expect("string write"),
                    }
                    write_n_power(&mut s, m.n_power - d);
                    s.trim_end().to_string()
                })
                .collect();
            if inner.len() == 1 && inner[0] == "1" {
                write!(out, "sum[s{}(m) s{}(n-m)]", c.left, c.right)?;
            } else {
                write!(
                    out,
                    "sum[({}) s{}(m) s{}(n-m)]",
                    inner.concat(),
                    c.left,
                    c.right
                )?;
            }
            first = false;
        }
        f.write_str(&out)
    }
}

/// A parsed identity or congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub lhs: Side,
    pub rhs: Side,
    pub congruence: Option<Congruence>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub modulus: BigInt,
    /// Only `n` with `gcd(n, coprime_to) = 1` are admissible.
    pub coprime_to: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Tau,
    SigmaN(u32),
    SigmaM(u32),
    SigmaNM(u32),
    Conv(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    n_power: i32,
    m_power: u32,
    atoms: Vec<Atom>,
}

/// Sparse polynomial in `n`, `m` (and `1/n`) over arithmetic atoms.
#[derive(Clone, Debug, Default)]
struct Poly(BTreeMap<Key, Rational>);

impl Poly {
    fn single(key: Key, c: Rational) -> Poly {
        let mut p = Poly::default();
        p.push(key, c);
        p
    }

    fn constant(c: Rational) -> Poly {
        Poly::single(
            Key {
                n_power: 0,
                m_power: 0,
                atoms: Vec::new(),
            },
            c,
        )
    }

    fn push(&mut self, key: Key, c: Rational) {
        let slot = self.0.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&key);
        }
    }

    fn add(mut self, other: Poly, sign: i32) -> Poly {
        for (k, c) in other.0 {
            self.push(k, if sign < 0 { -c } else { c });
        }
        self
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ka, ca) in &self.0 {
            for (kb, cb) in &other.0 {
                let mut atoms = [ka.atoms.clone(), kb.atoms.clone()].concat();
                atoms.sort();
                out.push(
                    Key {
                        n_power: ka.n_power + kb.n_power,
                        m_power: ka.m_power + kb.m_power,
                        atoms,
                    },
                    ca * cb,
                );
            }
        }
        out
    }

    /// The single term `c n^j` this polynomial consists of, if it is one.
    fn as_n_monomial(&self) -> Option<(Rational, i32)> {
        match self.0.iter().collect::<Vec<_>>().as_slice() {
            [(k, c)] if k.atoms.is_empty() && k.m_power == 0 => Some(((*c).clone(), k.n_power)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    N,
    M,
    Tau,
    Sum,
    Mod,
    Gcd,
    Sigma(u32),
    Sym(&'static str),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, NotationError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: &str| NotationError {
        offset,
        message: message.to_string(),
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            while i < b.len() && b[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word = &text[start..i];
            match word {
                "tau" => out.push((start, Tok::Tau)),
                "sum" => out.push((start, Tok::Sum)),
                "mod" => out.push((start, Tok::Mod)),
                "gcd" => out.push((start, Tok::Gcd)),
                "s" => {
                    let ds = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    let k: u32 = text[ds..i]
                        .parse()
                        .map_err(|_| err(start, "expected s followed by an exponent"))?;
                    out.push((start, Tok::Sigma(k)));
                }
                w if w.bytes().all(|x| x == b'm' || x == b'n') => {
                    for (j, x) in w.bytes().enumerate() {
                        out.push((start + j, if x == b'n' { Tok::N } else { Tok::M }));
                    }
                }
                w => return Err(err(start, &format!("unknown word {w:?}"))),
            }
        } else {
            let two = text.get(i..i + 2);
            if two == Some("==") {
                out.push((start, Tok::Sym("==")));
                i += 2;
                continue;
            }
            let sym = match c {
                b'+' => "+",
                b'-' => "-",
                b'*' => "*",
                b'/' => "/",
                b'^' => "^",
                b'(' => "(",
                b')' => ")",
                b'[' => "[",
                b']' => "]",
                b',' => ",",
                b'=' => "=",
                _ => return Err(err(start, "unexpected character")),
            };
            out.push((start, Tok::Sym(sym)));
            i += 1;
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    in_sum: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: &str) -> NotationError {
        NotationError {
            offset: self.offset(),
            message: format!("{message}, found {:?}", self.peek()),
        }
    }

    fn is(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn expect(&mut self, s: &'static str) -> Result<(), NotationError> {
        if self.is(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{s}'")))
        }
    }

    fn expect_int(&mut self) -> Result<BigInt, NotationError> {
        match self.bump() {
            Tok::Int(v) => Ok(v),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn side(&mut self) -> Result<Poly, NotationError> {
        let mut acc = if self.is("-") {
            self.bump();
            Poly::default().add(self.term()?, -1)
        } else {
            self.term()?
        };
        loop {
            if self.is("+") {
                self.bump();
                acc = acc.add(self.term()?, 1);
            } else if self.is("-") {
                self.bump();
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::N | Tok::M | Tok::Tau | Tok::Sum | Tok::Sigma(_) => true,
            Tok::Sym("(") => *self.peek_at(1) != Tok::Mod,
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Poly, NotationError> {
        let mut acc = self.factor()?;
        loop {
            if self.is("*") {
                self.bump();
                acc = acc.mul(&self.factor()?);
            } else if self.is("/") {
                self.bump();
                let at = self.offset();
                let d = self.factor()?;
                let (c, j) =
                    d.as_n_monomial()
                        .filter(|(c, _)| !c.is_zero())
                        .ok_or(NotationError {
                            offset: at,
                            message: "division by something other than c n^j".into(),
                        })?;
                acc = acc.mul(&Poly::single(
                    Key {
                        n_power: -j,
                        m_power: 0,
                        atoms: Vec::new(),
                    },
                    Rational::one() / c,
                ));
            } else if self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, NotationError> {
        let base = self.primary()?;
        if self.is("^") {
            self.bump();
            let e = self.expect_int()?;
            let e = e.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            let mut acc = Poly::constant(Rational::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn var(&self, n_power: i32, m_power: u32) -> Poly {
        Poly::single(
            Key {
                n_power,
                m_power,
                atoms: Vec::new(),
            },
            Rational::one(),
        )
    }

    fn primary(&mut self) -> Result<Poly, NotationError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Poly::constant(Rational::from_integer(v)))
            }
            Tok::N => {
                self.bump();
                Ok(self.var(1, 0))
            }
            Tok::M if self.in_sum => {
                self.bump();
                Ok(self.var(0, 1))
            }
            Tok::M => Err(self.err("m outside a sum")),
            Tok::Tau => {
                self.bump();
                self.expect("(")?;
                if self.bump() != Tok::N {
                    self.pos -= 1;
                    return Err(self.err("tau takes n"));
                }
                self.expect(")")?;
                Ok(atom(Atom::Tau))
            }
            Tok::Sigma(k) => {
                self.bump();
                self.expect("(")?;
                let a = match (self.bump(), self.peek()) {
                    (Tok::N, Tok::Sym("-")) if self.in_sum => {
                        self.bump();
                        if self.bump() != Tok::M {
                            self.pos -= 1;
                            return Err(self.err("expected n-m"));
                        }
                        Atom::SigmaNM(k)
                    }
                    (Tok::N, _) => Atom::SigmaN(k),
                    (Tok::M, _) if self.in_sum => Atom::SigmaM(k),
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected n, m or n-m"));
                    }
                };
                self.expect(")")?;
                Ok(atom(a))
            }
            Tok::Sym("(") => {
                self.bump();
                let p = self.side()?;
                self.expect(")")?;
                Ok(p)
            }
            Tok::Sum if !self.in_sum => {
                self.bump();
                let at = self.offset();
                self.expect("[")?;
                self.in_sum = true;
                let inner = self.side();
                self.in_sum = false;
                let inner = inner?;
                self.expect("]")?;
                let mut out = Poly::default();
                for (k, c) in inner.0 {
                    let conv = match k.atoms.as_slice() {
                        [Atom::SigmaM(a), Atom::SigmaNM(b)] => Atom::Conv(*a, *b),
                        _ => {
                            return Err(NotationError {
                                offset: at,
                                message: "each summand needs exactly one s(m) and one s(n-m)"
                                    .into(),
                            })
                        }
                    };
                    out.push(
                        Key {
                            n_power: k.n_power,
                            m_power: k.m_power,
                            atoms: vec![conv],
                        },
                        c,
                    );
                }
                Ok(out)
            }
            _ => Err(self.err("expected a factor")),
        }
    }

    fn modulus(&mut self) -> Result<BigInt, NotationError> {
        let mut acc = BigInt::one();
        loop {
            let base = self.expect_int()?;
            let mut f = base.clone();
            if self.is("^") {
                self.bump();
                let e = self
                    .expect_int()?
                    .to_u32()
                    .ok_or_else(|| self.err("exponent too large"))?;
                f = num_traits::pow(base, e as usize);
            }
            acc *= f;
            if self.is("*") {
                self.bump();
            } else {
                return Ok(acc);
            }
        }
    }
}

fn atom(a: Atom) -> Poly {
    Poly::single(
        Key {
            n_power: 0,
            m_power: 0,
            atoms: vec![a],
        },
        Rational::one(),
    )
}

/// Parses an identity `lhs = rhs` or a congruence `lhs == rhs (mod M)[, gcd(n,g)=1]`.
pub fn parse_statement(text: &str) -> Result<Statement, NotationError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        in_sum: false,
    };
    let lhs_at = p.offset();
    let lhs = p.side()?;
    let congruent = if p.is("==") {
        true
    } else if p.is("=") {
        false
    } else {
        return Err(p.err("expected '=' or '=='"));
    };
    p.bump();
    let rhs_at = p.offset();
    let rhs = p.side()?;
    let congruence = if congruent {
        p.expect("(")?;
        if p.bump() != Tok::Mod {
            p.pos -= 1;
            return Err(p.err("expected mod"));
        }
        let modulus = p.modulus()?;
        p.expect(")")?;
        let mut coprime_to = 1u64;
        if p.is(",") {
            p.bump();
            if p.bump() != Tok::Gcd {
                p.pos -= 1;
                return Err(p.err("expected gcd"));
            }
            p.expect("(")?;
            if p.bump() != Tok::N {
                p.pos -= 1;
                return Err(p.err("expected n"));
            }
            p.expect(",")?;
            coprime_to = p
                .expect_int()?
                .to_u64()
                .ok_or_else(|| p.err("gcd argument too large"))?;
            p.expect(")")?;
            p.expect("=")?;
            if p.expect_int()? != BigInt::one() {
                return Err(p.err("only gcd(n,g)=1 is supported"));
            }
        }
        if modulus.is_zero() || coprime_to == 0 {
            return Err(p.err("modulus and gcd argument must be positive"));
        }
        Some(Congruence {
            modulus,
            coprime_to,
        })
    } else {
        None
    };
    if *p.peek() != Tok::End {
        return Err(p.err("expected end of statement"));
    }
    Ok(Statement {
        lhs: Side::from_poly(lhs, lhs_at)?,
        rhs: Side::from_poly(rhs, rhs_at)?,
        congruence,
    })
}

/// `gcd(n, g) == 1`.
pub fn admissible(n: u64, coprime_to: u64) -> bool {
    n.gcd(&coprime_to) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn van_der_pol_expansion() {
        let s =
            parse_statement("tau(n) = n^2 s3(n) + 60 sum[(2n-3m)(n-3m) s3(m) s3(n-m)]").unwrap();
        assert_eq!(
            s.lhs.closed,
            vec![ClosedTerm {
                coefficient: r(1, 1),
                n_power: 0,
                arith: Arith::Tau
            }]
        );
        assert_eq!(s.rhs.closed[0].n_power, 2);
        let c = &s.rhs.convolutions[0];
        assert_eq!((c.left, c.right), (3, 3));
        // 60 (2n^2 - 9mn + 9m^2)
        let mut got: Vec<(u32, i32, Rational)> = c
            .monomials
            .iter()
            .map(|m| (m.m_power, m.n_power, m.coefficient.clone()))
            .collect();
        got.sort();
        assert_eq!(
            got,
            vec![(0, 2, r(120, 1)), (1, 1, r(-540, 1)), (2, 0, r(540, 1))]
        );
    }

    #[test]
    fn division_by_n() {
        let s = parse_statement("tau(n) = n^2 s7(n) - 1080/n sum[m^2(n-m) s3(m) s3(n-m)]").unwrap();
        assert_eq!(s.rhs.min_n_power(), -1);
        let s = parse_statement(
            "tau(n) = 65/756 s11(n) + 691/756 s5(n) - 2*691/(3n) sum[m s5(m) s5(n-m)]",
        )
        .unwrap();
        let m = &s.rhs.convolutions[0].monomials[0];
        assert_eq!(m.coefficient, r(-2 * 691, 3));
        assert_eq!((m.m_power, m.n_power), (1, -1));
        assert!(parse_statement("tau(n) = 1/(n+1) s3(n)").is_err());
    }

    #[test]
    fn affine_factors_expand() {
        let s = parse_statement("tau(n) = 5*691/9504 s1(n) - (6n-5)*691/864 s9(n) + 2275/1584 s11(n) - 5*691/864 sum[s1(m) s9(n-m)]")
            .unwrap();
        let s9: Vec<(i32, Rational)> = s
            .rhs
            .closed
            .iter()
            .filter(|t| t.arith == Arith::Sigma(9))
            .map(|t| (t.n_power, t.coefficient.clone()))
            .collect();
        assert_eq!(s9, vec![(0, r(5 * 691, 864)), (1, r(-6 * 691, 864))]);
    }

    #[test]
    fn congruences() {
        let s = parse_statement("12 tau(n) == 5n s3(n) + 7n s5(n) (mod 2^3*3*5*7)").unwrap();
        assert_eq!(
            s.congruence,
            Some(Congruence {
                modulus: 840.into(),
                coprime_to: 1
            })
        );
        let s = parse_statement("(6n-5) s1(n) == s3(n) (mod 24), gcd(n,6)=1").unwrap();
        assert_eq!(s.congruence.unwrap().coprime_to, 6);
        assert!(admissible(5, 6));
        assert!(!admissible(2, 6));
    }

    #[test]
    fn zero_side_and_errors() {
        let s = parse_statement("sum[(2m^3 - 3m^2n + mn^2) s1(m) s1(n-m)] = 0").unwrap();
        assert!(s.rhs.is_empty());
        assert!(parse_statement("tau(n) = m s3(n)").is_err());
        assert!(parse_statement("tau(n) = s3(n) s5(n)").is_err());
        assert!(parse_statement("tau(n) = sum[m s3(m)]").is_err());
        assert!(parse_statement("tau(n) = 3").is_err());
        assert!(parse_statement("tau(n) = s3(n) +").is_err());
    }

    #[test]
    fn render_round_trip() {
        for text in [
            "tau(n) = n^2 s7(n) - 540 sum[m(n-m) s3(m) s3(n-m)]",
            "tau(n) = -1/2 n^2 s7(n) + 3/2 n^2 s3(n) + 360/n sum[m^3 s3(m) s3(n-m)]",
            "tau(n) = 65/756 s11(n) + 5*691/(12*756n) s7(n) + 691/(12*108n) s5(n) - 5*691/(54n^2) sum[(3n-7m) s5(m) s7(n-m)] - 13*691/(9n^2) sum[m(n-m) s5(m) s5(n-m)]",
            "sum[m s1(m) s1(n-m)] = 1/24 n(1-6n) s1(n) + 5/24 n s3(n)",
            "tau(n) = 1/n s3(n) - 1/n sum[s1(m) s1(n-m)]",
        ] {
            let s = parse_statement(text).unwrap();
            let again = format!("{} = {}", s.lhs, s.rhs);
            let t = parse_statement(&again).unwrap();
            assert_eq!(s, t, "{text} -> {again}");
        }
    }
}
