//! Exact computations for secondary homological stability: bidegree calculus,
//! free graded Lie and Gerstenhaber algebras, homology of bigraded CDGAs,
//! tautological classes, poset connectivity, Sp₄(𝔽₂) and abelianizations.

pub mod cdga;
pub mod exactla;
pub mod freealg;
pub mod grading;
pub mod posets;
pub mod presentations;
pub mod sympf2;
pub mod taut;

/// Serde helpers rendering exact numbers as strings (`"-3/4"`, `"128024064"`).
pub mod ser {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::exactla::fmt_rational(q))
    }

    pub fn bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| n.to_string()))
    }
}
