//! Exact laboratory for quotient rings of finite associative unital rings.
//!
//! A finite ring is presented by structure constants over a product of
//! cyclic groups. From that presentation the crate computes, with integer
//! arithmetic only:
//!
//! * the lattice of right ideals, with dense and essential classification;
//! * the maximal right ring of quotients `Q_max(R)`, realized as the
//!   endomorphism ring of the minimal dense right ideal;
//! * the total right ring of quotients `Q_tot(R)`, by three routes: the
//!   fixpoint of the derived-subring chain, a descending chain of rings of
//!   quotients driven by Gabriel filters, and (for semihereditary rings) a
//!   one-shot membership formula;
//! * a brute-force oracle for `Q_tot` over the family of perfect
//!   intermediate extensions, plus a verification suite that checks the
//!   structural facts the chain constructions rely on.
//!
//! The `parallel` feature (on by default) runs the wide scans on rayon;
//! without it every code path falls back to equivalent sequential loops.

pub mod bits;
pub mod construct;
pub mod error;
pub mod ideals;
pub mod mat;
pub mod module;
pub mod quotient;
pub mod par;
pub mod report;
pub mod ring;
pub mod tot;

pub use error::Error;
