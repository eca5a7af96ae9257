// Exact-arithmetic checkers for torus-equivariant cohomology data.
//
// The crate decides algebraic realizability-style criteria with exact
// rational arithmetic throughout (no floating point anywhere):
//
// - `lattice`: closed subgroups of a torus encoded by character annihilator
//   lattices, Hermite normal forms, saturation, and the stable pair poset
//   used by the diagram checkers.
// - `linalg` / `poly`: sparse exact linear algebra over ℚ and homogeneous
//   multivariate polynomials with hyperplane restriction.
// - `tgraph`: labelled moment graphs — fixed subgraphs, parallel classes,
//   realizability, graded cohomology, minimal generators, freeness probe.
// - `circle`: circle-equivariant algebra models — validation, localization,
//   split-semisimplicity, realizability classification.
// - `cdga` / `system`: finite diagrams of graded-commutative differential
//   algebras with cohomology R-structures, and the TC / SC / LC condition
//   checkers plus the aggregated hypothesis report.
// - `criterion`: the subspace-indexed module-family criterion checker.
// - `fixtures`: bundled example inputs.

pub mod cdga;
pub mod circle;
pub mod criterion;
pub mod error;
pub mod fixtures;
pub mod jsonutil;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod system;
pub mod tgraph;

pub use error::{TfError, TfResult};

/// Version tag stamped into every JSON report.
pub const SCHEMA: &str = "torusfix/1";
