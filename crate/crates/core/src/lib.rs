//! Exact symbolic engine for twisted spectral triples.

pub mod boost;
pub mod clifford;
pub mod coeff;
pub mod fluct;
pub mod gammarep;
pub mod gauge;
pub mod grassmann;
pub mod lichnerowicz;
pub mod models;
pub mod operator;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod suites;
pub mod symfield;
pub mod triple;
pub mod twist;

pub use coeff::{Cq, Q};
pub use operator::{sandwich_antilinear, AntilinearOp, GenOp, MatDiffOp, OpError, SymMatrix};
pub use symfield::{Assignment, Atom, Deriv, Mono, SymError, SymExpr, Symbol};
