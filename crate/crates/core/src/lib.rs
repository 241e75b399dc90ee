//! Discriminantly separable polynomials and integrable systems of
//! Kowalevski type.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`]: dense exact/float polynomials and discriminants,
//! * [`separability`]: certificates that discriminants factor,
//! * [`fixtures`]: the concrete polynomial families the systems are built on,
//! * [`theorem`]: first-integral coefficient sets for the `f_i = x_i^m r + x_i^n γ₃` subclass,
//! * [`catalog`]: the four concrete vector fields with their relations and measures,
//! * [`integrator`]: adaptive Dormand–Prince integration with dense output,
//! * [`verifier`]: drift, relation classification, separation variables and quadratures.

pub mod catalog;
pub mod fixtures;
pub mod integrator;
pub mod poly;
pub mod separability;
pub mod theorem;
pub mod verifier;
