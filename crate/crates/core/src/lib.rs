//! Exact q-expansion arithmetic for level-one modular and quasimodular forms.
//!
//! The crate computes Ramanujan's tau function by several independent routes
//! and checks a registry of tau/divisor-sum identities and congruences, both
//! numerically (exact residuals over a range of `n`) and structurally (by
//! decomposing the difference of both sides over an explicit basis of the
//! relevant space of quasimodular forms).
//!
//! Module map:
//!
//! * [`qseries`]: truncated power series over exact rationals, and `D = q d/dq`.
//! * [`forms`]: Bernoulli numbers, divisor sieves, Eisenstein series, `Delta`, tau.
//! * [`brackets`]: Rankin-Cohen brackets for modular and quasimodular forms.
//! * [`quasidecomp`]: echelon bases and exact decomposition of quasimodular forms.
//! * [`identities`]: the identity/congruence registry, verification, certification, audit.
//! * [`exprcli`]: a small expression language over named forms, and the CLI.
//! * [`par`]: the sequential/parallel execution switch shared by the sweeps.

pub mod brackets;
pub mod exprcli;
pub mod forms;
pub mod identities;
pub mod par;
pub mod qseries;
pub mod quasidecomp;

pub use forms::{GradedForm, SigmaTable, TauStrategy};
pub use par::Execution;
pub use qseries::{QSeries, Rational};
