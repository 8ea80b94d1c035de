//! Exact arithmetic and Newton-polygon machinery for Jacobian pairs in
//! `L^(l) = Q[x^(1/l), x^(-1/l), y]`.
//!
//! The crate provides sparse Laurent polynomials with rational x-exponents,
//! `(rho,sigma)`-valuations and leading forms, the Jacobian bracket, the
//! structure theory of homogeneous elements (slices, squarefree data, power
//! decompositions, the `F` element), elementary automorphisms and flips, a
//! corner-candidate search engine with a pluggable filter ladder, and the
//! degree-reduction pipeline for the minimal-corner configuration.

pub mod corners;
pub mod direction;
pub mod geom;
pub mod homog;
pub mod linsolve;
pub mod morphisms;
pub mod pipeline;
pub mod poly;
pub mod rational;
pub mod search;
pub mod testkit;
pub mod text;
pub mod unipoly;

pub use direction::Direction;
pub use geom::{DegreeValue, NewtonPolygon};
pub use poly::{ExpPoint, LaurentPoly};
pub use rational::{PlanePoint, Q};
