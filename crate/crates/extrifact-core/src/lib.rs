//! Finite verification engine for torsion-pair and factorization-system
//! structure on extriangulated categories with a negative first extension.
//!
//! The library instantiates two families of categories on finite data:
//!
//! * module categories of linearly oriented type-A path algebras, and
//! * their m-extended versions (direct sums of shifts `X[i]`, `0 <= i < m`,
//!   inside the bounded derived category), which carry a genuine negative
//!   first extension `E^{-1}(C, A) = Hom(C, A[-1])`.
//!
//! On top of that substrate it verifies, with exact F_p linear algebra and
//! reproducible search orders:
//!
//! * s-torsion pairs (the three conditions, with realized witness triangles),
//! * inflation/deflation factorization systems and the bijection with
//!   s-torsion pairs, including explicit factorizations `f = r ∘ l`,
//! * (m+1)-term silting objects and the torsion pairs they cut out,
//! * recollements: axioms, exactness hypotheses, adjoint isomorphism of
//!   negative extensions, and gluing of torsion pairs and factorization
//!   systems through the bijection.
//!
//! # Layout
//!
//! | module      | contents |
//! |-------------|----------|
//! | [`exactlin`]  | dense F_p matrices: rank, solve, kernel, echelon forms |
//! | [`repkernel`] | intervals, quiver representations, hom/ext closed forms and oracles |
//! | [`derived`]   | perfect complexes, cones, minimization, homology, chain hom spaces |
//! | [`excat`]     | presentations of the finite categories, morphisms, conflations |
//! | [`torsion`]   | s-torsion pair verification, star membership, enumeration |
//! | [`factsys`]   | orthogonality, inflation classes, factorization, the bijection |
//! | [`silting`]   | (m+1)-term silting checks and induced pairs |
//! | [`recoll`]    | recollement data, axiom checks, gluing |
//! | [`acceptance`]| the end-to-end acceptance fixture, one runner per criterion |
//!
//! All search and enumeration orders are deterministic; parallel runs (the
//! default `parallel` feature) merge worker results in canonical order, so
//! output never depends on the job count.

// index-driven loops throughout walk several tables by one object index
#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod derived;
pub mod error;
pub mod exactlin;
pub mod excat;
pub mod factsys;
pub mod par;
pub mod recoll;
pub mod repkernel;
pub mod silting;
pub mod torsion;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
