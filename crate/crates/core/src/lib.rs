//! Normal edge-transitive Cayley graphs on Frobenius groups of order `pq`
//! and the surrounding machinery: permutation groups, graph automorphisms,
//! isomorphism testing and classification of small cases.

pub mod affine;
pub mod autiso;
pub mod classify;
pub mod geometry;
pub mod graphcore;
pub mod group;
pub mod houlis;
pub mod modarith;
pub mod netcayley;
pub mod permgrp;
