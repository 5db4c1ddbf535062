//! Brute-force reference implementations. Nothing here shares code with
//! `uassign`; preferences are plain class-boundary lists (1-based, inclusive
//! ends of each class, last entry `n`) and matrices are plain vectors.

pub mod grid;
pub mod lp;
pub mod matching;

pub use num_rational::BigRational as Q;

pub fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}
