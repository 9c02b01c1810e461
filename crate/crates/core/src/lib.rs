//! Exact derivation spaces of finite-dimensional evolution algebras.
//!
//! An evolution algebra is given by a structure matrix over the rationals:
//! basis squares expand along the matrix rows and distinct basis elements
//! multiply to zero. A derivation is a linear map satisfying the Leibniz
//! rule on that product. This crate computes the space of all derivations
//! exactly, with no floating point anywhere:
//!
//! - [`algebra`] parses and holds structure matrices with [`rational`]
//!   (arbitrary-precision rational) entries.
//! - [`graph`] and [`twin`] build the associated directed graph and the twin
//!   partition that together control where derivation entries can live.
//! - [`structural`] proves individual entries zero by graph-theoretic rules
//!   and records a replayable certificate for each proof.
//! - [`solver`] assembles the full linear constraint system and solves it by
//!   exact Gauss-Jordan elimination, giving dimension and a basis; it is the
//!   ground truth the certificates are audited against.
//! - [`classify3`] matches three-dimensional algebras against a fixed table
//!   of arrow patterns and their derivation templates.
//! - [`report`] bundles everything into one analysis and a deterministic
//!   JSON document; [`cli`] exposes it all as a command-line tool.

pub mod algebra;
pub mod classify3;
pub mod cli;
pub mod graph;
mod linalg;
pub mod rational;
pub mod report;
pub mod solver;
pub mod structural;
pub mod twin;
