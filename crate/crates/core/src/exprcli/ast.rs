use std::fmt;

use num_traits::Signed;

use crate::qseries::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    E2,
    E4,
    E6,
    E8,
    E10,
    E12,
    Delta,
}

impl Atom {
    pub const ALL: [Atom; 7] = [
        Atom::E2,
        Atom::E4,
        Atom::E6,
        Atom::E8,
        Atom::E10,
        Atom::E12,
        Atom::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Atom::E2 => "E2",
            Atom::E4 => "E4",
            Atom::E6 => "E6",
            Atom::E8 => "E8",
            Atom::E10 => "E10",
            Atom::E12 => "E12",
            Atom::Delta => "Delta",
        }
    }

    pub fn from_name(s: &str) -> Option<Atom> {
        Atom::ALL.into_iter().find(|a| a.name() == s)
    }

    pub fn weight(self) -> u32 {
        match self {
            Atom::E2 => 2,
            Atom::E4 => 4,
            Atom::E6 => 6,
            Atom::E8 => 8,
            Atom::E10 => 10,
            Atom::E12 | Atom::Delta => 12,
        }
    }
}

/// One side of a declared `(weight, depth)` pair in `Phi(n; f, k, s; g, l, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiOperand {
    pub form: Box<Expr>,
    pub weight: u32,
    pub depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(Rational),
    Atom(Atom),
    Derive {
        order: u32,
        arg: Box<Expr>,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Bracket {
        left: Box<Expr>,
        right: Box<Expr>,
        order: u32,
    },
    Phi {
        order: u32,
        left: PhiOperand,
        right: PhiOperand,
    },
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn atom(a: Atom) -> Expr {
        Expr::Atom(a)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Rational(Rational::from_integer(v.into()))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn derive(order: u32, a: Expr) -> Expr {
        Expr::Derive {
            order,
            arg: Box::new(a),
        }
    }
}

/// Prints in a fully parenthesized form that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) if r.is_negative() => write!(f, "(-{})", -r),
            Expr::Rational(r) if r.is_integer() => write!(f, "{r}"),
            Expr::Rational(r) => write!(f, "({r})"),
            Expr::Atom(a) => f.write_str(a.name()),
            Expr::Derive { order: 1, arg } => write!(f, "D({arg})"),
            Expr::Derive { order, arg } => write!(f, "D^{order}({arg})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
            Expr::Bracket { left, right, order } => write!(f, "[{left}, {right}]_{order}"),
            Expr::Phi { order, left, right } => write!(
                f,
                "Phi({order}; {}, {}, {}; {}, {}, {})",
                left.form, left.weight, left.depth, right.form, right.weight, right.depth
            ),
        }
    }
}
