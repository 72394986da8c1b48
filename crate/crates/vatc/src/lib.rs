//! Exact computation of twisted conjugacy invariants for finitely generated
//! virtually abelian groups.
//!
//! A group `G` is described by a finite-index normal subgroup `N = Z^n`
//! together with finite extension data (coset multiplication table, cocycle,
//! and the conjugation action of each coset on the lattice). Given an
//! endomorphism `phi` of `G` that preserves `N`, this crate computes canonical
//! forms for the twisted conjugacy classes `[g] = { z g phi(z)^-1 }`, the
//! Reidemeister number `R(phi)`, Reidemeister numbers of the finite quotients
//! `G / (kZ)^n`, and the growth series of balls, class counts, and quotient
//! class counts — all in exact integer arithmetic.
//!
//! Module layout:
//! - [`intlin`]: integer matrices, Smith normal form, Hermite normal form
//!   lattices, minimal residue representatives.
//! - [`group`]: virtually abelian group data, element arithmetic, validation,
//!   endomorphisms, twisted conjugation.
//! - [`tc`]: canonical class forms, Reidemeister numbers, quotient
//!   Reidemeister numbers.
//! - [`growth`]: ball enumeration, growth series, log-log slope fits.
//! - [`schema`]: JSON file formats for groups, endomorphisms, generating sets.
//! - [`cli`]: the `vatc` command-line interface.

pub mod cli;
pub mod group;
pub mod growth;
pub mod intlin;
pub mod schema;
pub mod tc;
