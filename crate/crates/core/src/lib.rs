//! Lyndon words, free Lie algebra rewriting, the decorated forest differential
//! and the parametrized algebraic cycles `L_W`, `L¹_W` attached to binary
//! Lyndon words.
//!
//! The pipeline runs bottom-up:
//!
//! - [`words`]: Lyndon words over `{0,1}` and their standard factorization.
//! - [`trees`]: trivalent trees, the Hall basis and the `Dec` rewriting.
//! - [`dual`]: the dual tree sums `T_W`.
//! - [`forest`]: decorated forests, `d_cy` and the `α`/`β` tables.
//! - [`coeffs`]: the derived tables `a`, `b`, `a′`, `b′` and their quadratic relations.
//! - [`cycles`]: colored trees, the map `Γ` and cubical boundaries.
//! - [`numerics`]: multiple polylogarithms and the weight-3 integral.
//! - [`cli`]: the `mzv` command-line front end.

pub mod cli;
pub mod coeffs;
pub mod cycles;
pub mod dual;
pub mod error;
pub mod forest;
pub mod linalg;
pub mod lincomb;
pub mod numerics;
pub mod trees;
pub mod words;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use words::LyndonWord;

/// Exact rational scalar used by every symbolic table.
pub type Q = num_rational::BigRational;

/// Integer as an exact rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` into a rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == 0.into() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
