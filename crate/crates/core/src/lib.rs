//! Minimal-genus bounds for embedded surfaces in closed 4-manifolds, driven
//! entirely by the intersection form.
//!
//! The input is a unimodular symmetric Gram matrix and a homology class; the
//! output is a lower bound on the genus of any smoothly embedded surface
//! representing it, with the characteristic vector that certifies the bound.
//! All arithmetic is exact (`BigInt`/`BigRational`); no floating point
//! enters any bound.
//!
//! Layout:
//! * [`lattice`] — Gram matrices, class vectors, signatures, characteristic
//!   elements.
//! * [`search`] — the optimization engine: maximize `c²` over characteristic
//!   vectors with prescribed pairings, exactly.
//! * [`bounds`] — the adjunction bound, the characteristic-number set for
//!   divisible classes, and the moduli-dimension formula.
//! * [`constructions`] — upper bounds from explicit surface configurations.
//! * [`intersections`] — lower bounds on intersections of algebraically
//!   disjoint classes.
//! * [`catalog`] — closed forms and exact values for the named families, and
//!   the finiteness enumeration of reduced classes.

pub mod bounds;
pub mod catalog;
pub mod constructions;
mod enumerate;
pub mod error;
pub mod intersections;
pub mod lattice;
mod linalg;
pub mod search;

pub use bounds::{
    adjunction_genus_lb, characteristic_class_bound, characteristic_numbers,
    divisible_genus_lb, formal_dimension, k_set, BoundReport, Hypothesis, KParity,
    KSetResult, Method,
};
pub use catalog::{
    closed_form_lb, exact_genus, list_reduced_classes_with_genus_le, ExactFamily, Family,
    Hypotheses, ReducedEnumeration, ReducedForm,
};
pub use constructions::{
    multiple_class_upper_bound, primitive_bound_transfer, reduced_class_construction,
    resolve_genus, ConstructionPlan, PlanComponent,
};
pub use error::{Error, Result};
pub use intersections::{
    disjointness_obstruction, gilmer_lb, intersection_lb, IntersectionReport,
};
pub use lattice::{divisibility, ClassVector, Lattice, Signature};
pub use search::{
    brute_force_min_pairing, max_square_with_pairings, min_abs_pairing, min_pairing_sum_2,
    CharWitness, SearchBudget,
};
