//! The built-in identities, congruences and series relations.
//!
//! Each record is parsed from its anchor text, so the stored terms cannot
//! drift from the statement they encode.

use std::sync::OnceLock;

use num_bigint::BigInt;

use super::notation::{parse_statement, Side};
use crate::exprcli::ast::Expr;
use crate::exprcli::parser;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecordStatus {
    ExpectedTrue,
    /// Known to fail as stated; the audit reports the fitted form.
    AuditFlagged,
}

use RecordStatus::{AuditFlagged as F, ExpectedTrue as T};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub anchor: String,
    pub lhs: Side,
    pub rhs: Side,
    pub status: RecordStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceRecord {
    pub id: String,
    pub anchor: String,
    pub lhs: Side,
    pub rhs: Side,
    pub modulus: BigInt,
    pub coprime_to: u64,
}

/// An equality of q-series written in the expression language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesIdentity {
    pub id: String,
    pub anchor: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub status: RecordStatus,
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub identities: Vec<IdentityRecord>,
    pub congruences: Vec<CongruenceRecord>,
    pub series: Vec<SeriesIdentity>,
}

impl Registry {
    pub fn identity(&self, id: &str) -> Option<&IdentityRecord> {
        self.identities.iter().find(|r| r.id == id)
    }

    pub fn congruence(&self, id: &str) -> Option<&CongruenceRecord> {
        self.congruences.iter().find(|r| r.id == id)
    }

    pub fn series_identity(&self, id: &str) -> Option<&SeriesIdentity> {
        self.series.iter().find(|r| r.id == id)
    }
}

const IDENTITIES: &[(&str, RecordStatus, &str)] = &[
    ("eq1.1", T, "tau(n) = n^2 s3(n) + 60 sum[(2n-3m)(n-3m) s3(m) s3(n-m)]"),
    ("eq1.2", T, "tau(n) = n^2 s7(n) - 540 sum[m(n-m) s3(m) s3(n-m)]"),
    ("thm2.1.i", T, "tau(n) = n^2 s7(n) - 540 sum[m(n-m) s3(m) s3(n-m)]"),
    ("thm2.1.ii", T, "tau(n) = -5/4 n^2 s7(n) + 9/4 n^2 s3(n) + 540 sum[m^2 s3(m) s3(n-m)]"),
    ("thm2.1.iii", T, "tau(n) = n^2 s7(n) - 1080/n sum[m^2(n-m) s3(m) s3(n-m)]"),
    ("thm2.1.iv", T, "tau(n) = -1/2 n^2 s7(n) + 3/2 n^2 s3(n) + 360/n sum[m^3 s3(m) s3(n-m)]"),
    ("thm2.2.i", T, "tau(n) = -11/24 n s9(n) + 35/24 n s5(n) + 350 sum[(n-m) s3(m) s5(n-m)]"),
    ("thm2.2.ii", T, "tau(n) = 11/36 n s9(n) + 25/36 n s3(n) - 350 sum[m s3(m) s5(n-m)]"),
    ("thm2.2.iii", T, "tau(n) = 1/6 n s9(n) + 5/6 n s3(n) - 420/n sum[m^2 s3(m) s5(n-m)]"),
    ("thm2.2.iv", T, "tau(n) = n s9(n) - 2100/n sum[m(n-m) s3(m) s5(n-m)]"),
    ("thm2.2.v", T, "tau(n) = -1/4 n s9(n) + 5/4 n s5(n) + 300/n sum[(n-m)^2 s3(m) s5(n-m)]"),
    ("thm2.3", T, "tau(n) = 65/756 s11(n) + 691/756 s5(n) - 2*691/(3n) sum[m s5(m) s5(n-m)]"),
    ("thm2.4.i", T, "tau(n) = -91/600 s11(n) + 691/600 s3(n) + 4*691/(5n) sum[m s3(m) s7(n-m)]"),
    ("thm2.4.ii", T, "tau(n) = -91/600 s11(n) + 691/600 s7(n) + 2*691/(5n) sum[(n-m) s3(m) s7(n-m)]"),
    ("thm2.5.i", T, "tau(n) = n^4 s1(n) - 24 sum[(35m^4 - 52m^3n + 18m^2n^2) s1(m) s1(n-m)]"),
    ("thm2.5.ii", T, "tau(n) = n^4(7 s1(n) - 6 s3(n)) - 168 sum[(5m^4 - 4m^3n) s1(m) s1(n-m)]"),
    ("thm2.5.iii", T, "tau(n) = n^4 s3(n) - 168 sum[(5m^4 - 8m^3n + 3m^2n^2) s1(m) s1(n-m)]"),
    ("thm2.5.iv", T, "tau(n) = n^4/3 (7 s1(n) - 4 s3(n)) - 56 sum[(15m^4 - 20m^3n + 6m^2n^2) s1(m) s1(n-m)]"),
    ("thm2.6.i", T, "tau(n) = 5/12 n s3(n) + 7/12 n s5(n) + 70 sum[(2n-5m) s3(m) s5(n-m)]"),
    ("thm2.6.ii", T, "tau(n) = n^2 s3(n) + 60 sum[(4n^2 - 13mn + 9m^2) s3(m) s3(n-m)]"),
    ("thm2.6.iii", T, "tau(n) = 65/756 s11(n) + 5*691/(12*756n) s7(n) + 691/(12*108n) s5(n) - 5*691/(54n^2) sum[(3n-7m) s5(m) s7(n-m)] - 13*691/(9n^2) sum[m(n-m) s5(m) s5(n-m)]"),
    ("thm2.6.iv", T, "tau(n) = 65/756 s11(n) + 3*691/(8*441) s3(n) + 5*691/(24*441) s7(n) + 5*691/(441n^2) sum[(91m^2 - 65mn + 10n^2) s3(m) s7(n-m)] - 13*691/(9n^2) sum[m(n-m) s5(m) s5(n-m)]"),
    ("thm2.6.v", T, "tau(n) = 65/756 s11(n) + 25*691/(36*756n) s3(n) + 11*691/(36*756n) s9(n) - 55*691/(1134n^2) sum[(7m-2n) s3(m) s9(n-m)] - 13*691/(9n^2) sum[m(n-m) s5(m) s5(n-m)]"),
    ("thm2.7.i", F, "tau(n) = 5*691/9504 s1(n) - (6n-5)*691/864 s9(n) + 2275/1584 s11(n) - 5*691/864 sum[s1(m) s9(n-m)]"),
    ("thm2.7.ii", T, "tau(n) = 15/32 n s1(n) - 33/32 n s9(n) + 50/32 n^2 s7(n) + 225 sum[m s1(m) s7(n-m)]"),
    ("thm2.7.iii", T, "tau(n) = 6/7 n^2 s1(n) - 9/7 n^3 s5(n) + 10/7 n^2 s7(n) - 24*18 sum[m^2 s1(m) s5(n-m)]"),
    ("thm2.7.iv", T, "tau(n) = 14/5 n^3 s1(n) + 12/5 n^4 s3(n) - 21/5 n^3 s5(n) + 24*28 sum[m^3 s1(m) s3(n-m)]"),
    ("thm2.7.v", T, "tau(n) = 5/12 n s1(n) + 25/24 n s7(n) - 11/24 n s9(n) + 25 sum[(9m-n) s1(m) s7(n-m)]"),
    ("thm2.7.vi", T, "tau(n) = 9/14 n^2 s1(n) + 5/14 n^2 s7(n) - 108 sum[(4m^2-mn) s1(m) s5(n-m)]"),
    ("thm2.7.vii", T, "tau(n) = 8/5 n^3 s1(n) - 3/5 n^3 s5(n) + 96 sum[(7m^3-3m^2n) s1(m) s3(n-m)]"),
    ("thm2.7.viii", T, "tau(n) = 1/2 n^2 s1(n) + 1/2 n^2 s5(n) - 12 sum[(36m^2-16mn+n^2) s1(m) s5(n-m)]"),
    ("thm2.7.ix", T, "tau(n) = n^3 s1(n) - 24 sum[(21m^2n-28m^3-3mn^2) s1(m) s3(n-m)]"),
    ("thm2.9.i", T, "sum[m^3 s1(m) s1(n-m)] = 1/12 n^3 s3(n) - 1/24 n^3(3n-1) s1(n)"),
    ("thm2.9.ii", T, "sum[m^2 s1(m) s1(n-m)] = 1/8 n^2 s3(n) - 1/24 n^2(4n-1) s1(n)"),
    ("thm2.9.iii", T, "sum[m s1(m) s1(n-m)] = 1/24 n(1-6n) s1(n) + 5/24 n s3(n)"),
    ("thm2.9.iv", F, "sum[m^2 s1(m) s3(n-m)] = -1/240 n^2 s1(n) - 1/120 n^2 s3(n) + 1/80 n^2 s5(n)"),
    ("thm2.9.v", T, "sum[m s1(m) s3(n-m)] = -1/240 n s1(n) - 1/40 n^2 s3(n) + 7/240 n s5(n)"),
    ("thm2.9.vi", T, "sum[m s1(m) s5(n-m)] = 1/504 n s1(n) - 1/84 n^2 s5(n) + 5/504 n s7(n)"),
    ("thm2.9.vii", T, "sum[s1(m) s5(n-m)] = 1/504 s1(n) - 1/12 n s5(n) + 1/24 s5(n) + 5/126 s7(n)"),
    ("thm2.9.viii", T, "sum[s1(m) s7(n-m)] = -1/480 s1(n) + 1/24 s7(n) + 11/480 s9(n) - 1/16 n s7(n)"),
    ("cor2.10", T, "sum[(2m^3 - 3m^2n + mn^2) s1(m) s1(n-m)] = 0"),
    ("cor2.11", T, "tau(n) = 50n^4 s3(n) - 7n^4(12n-5) s1(n) - 840 sum[m^4 s1(m) s1(n-m)]"),
    ("id1", T, "24 sum[(4m^3 - 3m^2n) s1(m) s1(n-m)] = n^3 s1(n) - n^3 s3(n)"),
    ("id4", T, "12 sum[(5m^2 - 3mn) s1(m) s1(n-m)] = n^2 s1(n) - n^3 s1(n)"),
    ("id5", T, "24 sum[(3m^3 - 2m^2n) s1(m) s1(n-m)] = n^3 s1(n) - n^4 s1(n)"),
];

const CONGRUENCES: &[(&str, &str)] = &[
    (
        "cor2.8.i",
        "12 tau(n) == 5n s3(n) + 7n s5(n) (mod 2^3*3*5*7)",
    ),
    (
        "cor2.8.ii",
        "32 tau(n) == 15n s1(n) + 50n^2 s7(n) - 33n s9(n) (mod 2^5*3^2*5^2)",
    ),
    (
        "cor2.8.iii",
        "7 tau(n) == 6n^2 s1(n) - 9n^3 s5(n) + 10n^2 s7(n) (mod 2^4*3^3*7)",
    ),
    (
        "cor2.8.iv",
        "5 tau(n) == 14n^3 s1(n) + 12n^4 s3(n) - 21n^3 s5(n) (mod 2^5*3*5*7)",
    ),
    (
        "cor2.8.v",
        "24 tau(n) == 10n s1(n) + 25n s7(n) - 11n s9(n) (mod 2^3*3*5^2)",
    ),
    (
        "cor2.8.vi",
        "14 tau(n) == 9n^2 s1(n) + 5n^2 s7(n) (mod 2^3*3^3*7)",
    ),
    (
        "cor2.8.vii",
        "5 tau(n) == 8n^3 s1(n) - 3n^3 s5(n) (mod 2^5*3*5)",
    ),
    (
        "cor2.8.viii",
        "2 tau(n) == n^2 s1(n) + n^2 s5(n) (mod 2^3*3)",
    ),
    ("cor2.12.i", "(6n-5) s1(n) == s3(n) (mod 24), gcd(n,6)=1"),
    (
        "cor2.12.ii",
        "s1(n) + 2n s3(n) == 3 s5(n) (mod 16), gcd(n,2)=1",
    ),
    (
        "cor2.12.iii",
        "n s1(n) + 5n s7(n) == 6n^2 s5(n) (mod 2^3*3^2*7), gcd(n,42)=1",
    ),
    (
        "cor2.12.iv",
        "20 s7(n) + 11 s9(n) == s1(n) + 30n s7(n) (mod 2^5*3*5)",
    ),
    (
        "cor2.12.v",
        "5 s1(n) + 6n s7(n) == 11 s9(n) (mod 2^5), gcd(n,2)=1",
    ),
    (
        "cor2.12.vi",
        "s1(n) + 2n s3(n) == 3 s5(n) (mod 2^4*5), gcd(n,10)=1",
    ),
    (
        "cor2.12.vii",
        "s1(n) + 10(3n-2) s7(n) == 11 s9(n) (mod 2^3*3*5), gcd(n,30)=1",
    ),
];

const F1: &str = "Phi(1; D^3(E2), 8, 4; E2, 2, 1)";
const F2: &str = "Phi(1; D^2(E2), 6, 3; D(E2), 4, 2)";
const F3: &str = "Phi(2; D^2(E2), 6, 3; E2, 2, 1)";
const F4: &str = "Phi(2; D(E2), 4, 2; D(E2), 4, 2)";
const F5: &str = "Phi(3; D(E2), 4, 2; E2, 2, 1)";
const F6: &str = "Phi(4; E2, 2, 1; E2, 2, 1)";

fn series_statements() -> Vec<(&'static str, RecordStatus, String)> {
    let s = |id, st, text: &str| (id, st, text.to_string());
    vec![
        s("thm3.1.i", T, "E8 = E4^2"),
        s("thm3.1.ii", T, "E10 = E4 E6"),
        s("thm3.1.iii", T, "E12 - E8 E4 = (65520/691 - 720) Delta"),
        s("thm3.1.iv", T, "E12 - E6^2 = (65520/691 + 1008) Delta"),
        s("d2e8-expansion", T, "D^2(E8) = 2 D(E4)^2 + 2 E4 D^2(E4)"),
        s(
            "rc-e4-e4-2-expansion",
            T,
            "[E4, E4]_2 = 20 D^2(E4) E4 - 25 D(E4)^2",
        ),
        s("rc-e4-e4-2", F, "[E4, E4]_2 = 960 Delta"),
        s("d2e8-de4sq", T, "2 D^2(E8) - 9 D(E4)^2 = 960 Delta"),
        s("d2e8-e4d2e4", T, "-5 D^2(E8) + 18 E4 D^2(E4) = 1920 Delta"),
        s("d3e8-ddelta", T, "960 D(Delta) = -D^3(E8) + 6 E4 D^3(E4)"),
        s("de10-expansion", T, "D(E10) = E6 D(E4) + E4 D(E6)"),
        s(
            "rc-e4-e6-1-expansion",
            T,
            "[E4, E6] = 4 E4 D(E6) - 6 E6 D(E4)",
        ),
        s("e4de6-e6de4", T, "4 E4 D(E6) - 6 E6 D(E4) = -3456 Delta"),
        s("rc-e4-e6-1", F, "[E4, E6]_1 = 3456 Delta"),
        s(
            "d2e10-expansion",
            T,
            "D^2(E10) = E6 D^2(E4) + 2 D(E4) D(E6) + E4 D^2(E6)",
        ),
        s(
            "e4e6-second-order",
            T,
            "-2 D(E4) D(E6) + 4 E4 D^2(E6) - 6 E6 D^2(E4) = -3456 D(Delta)",
        ),
        s(
            "d2e10-ddelta-a",
            T,
            "2 D^2(E10) - 5 (E6 D^2(E4) + D(E4) D(E6)) = -1728 D(Delta)",
        ),
        s("rc-e4-e6-2", T, "[E4, E6]_2 = 0"),
        s(
            "rc-e4-e6-2-expansion",
            T,
            "10 E4 D^2(E6) - 35 D(E4) D(E6) + 21 E6 D^2(E4) = 0",
        ),
        s(
            "d2e10-ddelta-b",
            T,
            "-D^2(E10) - 5 E6 D^2(E4) + 5 E4 D^2(E6) + 3456 D(Delta) = 0",
        ),
        s(
            "d2e10-zero-a",
            T,
            "-35 D^2(E10) + 77 E6 D^2(E4) + 55 E4 D^2(E6) = 0",
        ),
        s(
            "d2e10-e6d2e4",
            T,
            "24 D^2(E10) - 132 E6 D^2(E4) + 38016 D(Delta) = 0",
        ),
        s(
            "d2e10-ddelta-c",
            T,
            "-3 D^2(E10) + 5 D(E4) D(E6) + 5 E4 D^2(E6) + 1728 D(Delta) = 0",
        ),
        s(
            "d2e10-zero-b",
            T,
            "-21 D^2(E10) + 77 D(E4) D(E6) + 11 E4 D^2(E6) = 0",
        ),
        s(
            "de12-e4e8",
            T,
            "D(E12) - E4 D(E8) - E8 D(E4) = (65520/691 - 720) D(Delta)",
        ),
        s("rc-e4-e8-1", T, "[E4, E8] = 0"),
        s("e4de8-e8de4", T, "E4 D(E8) = 2 E8 D(E4)"),
        s(
            "de12-e4de8",
            T,
            "D(E12) - 3/2 E4 D(E8) = (65520/691 - 720) D(Delta)",
        ),
        s(
            "d2e12-e6",
            T,
            "2 D(E6)^2 + 2 E6 D^2(E6) = D^2(E12) - (65520/691 + 1008) D^2(Delta)",
        ),
        s(
            "rc-e6-e6-2-expansion",
            T,
            "[E6, E6]_2 = 42 E6 D^2(E6) - 49 D(E6)^2",
        ),
        s("rc-e6-e6-2", F, "[E6, E6]_2 = -49/48 [E6, E8]"),
        s(
            "rc-e6-e6-2-explicit",
            F,
            "[E6, E6]_2 = -49/48 (8 E8 D(E6) - 6 E6 D(E8))",
        ),
        (
            "f1-definition",
            T,
            format!("{F1} = 4 D^3(E2) D(E2) - E2 D^4(E2)"),
        ),
        (
            "f2-definition",
            T,
            format!("{F2} = 3 D^2(E2)^2 - 2 D^3(E2) D(E2)"),
        ),
        (
            "f3-definition",
            T,
            format!("{F3} = 6 D^2(E2)^2 - 8 D^3(E2) D(E2) + E2 D^4(E2)"),
        ),
        (
            "f4-definition",
            T,
            format!("{F4} = 6 D^3(E2) D(E2) - 9 D^2(E2)^2"),
        ),
        (
            "f5-definition",
            T,
            format!("{F5} = 16 D^3(E2) D(E2) - 18 D^2(E2)^2 - E2 D^4(E2)"),
        ),
        (
            "f6-definition",
            T,
            format!("{F6} = -32 D^3(E2) D(E2) + 36 D^2(E2)^2 + 2 E2 D^4(E2)"),
        ),
        ("f6-f5", T, format!("{F6} = -2 {F5}")),
        ("f4-f2", T, format!("{F4} = -3 {F2}")),
        (
            "f1-decomposition",
            T,
            format!("{F1} = 24/7 Delta + 3/35 D^4(E4)"),
        ),
        (
            "f2-decomposition",
            T,
            format!("{F2} = -24/7 Delta + 1/70 D^4(E4)"),
        ),
        (
            "f3-decomposition",
            T,
            format!("{F3} = -72/7 Delta - 2/35 D^4(E4)"),
        ),
        ("f5-decomposition", T, format!("{F5} = 24 Delta")),
        s(
            "delta-e2",
            F,
            "Delta = E2 D^4(E2) - 16 D(E2) D^3(E2) + 18 D^2(E2)^2",
        ),
        s("id2", T, "3 D(E2)^2 - 2 E2 D^2(E2) + 2 D^3(E2) = 0"),
        s("id3", T, "D^4(E2) - E2 D^3(E2) + 2 D(E2) D^2(E2) = 0"),
        s("e2-dsq", F, "D(E2)^2 = 1/5 D(E6) + 2 D^3(E2)"),
        s("e2-d2", F, "E2 D^2(E2) = 3/10 D(E6) + 4 D^3(E2)"),
    ]
}

fn build() -> Registry {
    let identities = IDENTITIES
        .iter()
        .map(|(id, status, text)| {
            let st = parse_statement(text).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(st.congruence.is_none(), "{id} is an identity");
            IdentityRecord {
                id: id.to_string(),
                anchor: text.to_string(),
                lhs: st.lhs,
                rhs: st.rhs,
                status: *status,
            }
        })
        .collect();
    let congruences = CONGRUENCES
        .iter()
        .map(|(id, text)| {
            let st = parse_statement(text).unwrap_or_else(|e| panic!("{id}: {e}"));
            let c = st
                .congruence
                .unwrap_or_else(|| panic!("{id} is a congruence"));
            CongruenceRecord {
                id: id.to_string(),
                anchor: text.to_string(),
                lhs: st.lhs,
                rhs: st.rhs,
                modulus: c.modulus,
                coprime_to: c.coprime_to,
            }
        })
        .collect();
    let series = series_statements()
        .into_iter()
        .map(|(id, status, text)| {
            let (lhs, rhs) = parser::parse_statement(&text).unwrap_or_else(|e| panic!("{id}: {e}"));
            SeriesIdentity {
                id: id.to_string(),
                anchor: text,
                lhs,
                rhs,
                status,
            }
        })
        .collect();
    Registry {
        identities,
        congruences,
        series,
    }
}

/// The built-in registry, parsed once per process.
pub fn builtin_registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(build)
}
