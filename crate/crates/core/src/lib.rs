//! Competition and phylogeny (moral) graphs of degree-bounded acyclic
//! digraphs.
//!
//! The crate builds competition graphs C(D), underlying graphs U(D) and
//! phylogeny graphs P(D) = U(D) ∪ C(D) of acyclic digraphs, decides
//! chordality with certificates, enumerates holes, classifies acyclic
//! cycle orientations as forbidden or permitted for the class of (2,2)
//! digraphs with chordal phylogeny graphs, maps holes of P(D) to holes
//! of U(D), and verifies the structural statements behind all of that by
//! exhaustive and randomized sweeps at desk scale.
//!
//! The headline facts the verifier sweeps: phylogeny graphs of (2,2)
//! digraphs are K5-free; a hole of length at least 7 in U(D) forces
//! P(D) non-chordal; a chordal U(D) forces a chordal P(D); and when the
//! holes of P(D) are pairwise disjoint and U(D) has no hole of length 4
//! or 6, holes of P(D) inject into holes of U(D). The two phenomena
//! that fail without those hypotheses are found by search, not fixture.

mod bits;
pub mod canon;
pub mod chordal;
mod dense;
pub mod graph;
pub mod hole_map;
pub mod orientations;
pub mod phylogeny;
pub mod verifier;

pub use canon::{canonical_form, CanonicalCapExceeded, CanonicalForm, CANONICAL_VERTEX_CAP};
pub use chordal::{
    common_neighbor_on_cycle, contains_w_configuration, enumerate_holes, enumerate_holes_with_cap,
    is_chordal, is_chordal_bool, opposite_to_chord_vertices, simplicial_vertices,
    verify_elimination_ordering, w_configuration, ChordalError, ChordalityCertificate, Hole,
    HOLE_ENUMERATION_CAP,
};
pub use graph::{
    DegreeBounds, DegreeViolation, Digraph, GraphError, InvalidBounds, SimpleGraph, TopologicalSort,
};
pub use hole_map::{
    extending_sets, obtained_subgraph, phi, verify_hole_correspondence,
    verify_hole_correspondence_with_cap, CorrespondenceHypotheses, CorrespondenceReport,
    ExtendingSet, HoleMapError, ObtainedSubgraph, CORRESPONDENCE_VERTEX_CAP,
};
pub use orientations::{
    classify_orientation, enumerate_cycle_orientations, forbidden_catalog, scan_forbidden_induced,
    verify_witness, ForbiddenMatch, OrientationClass, OrientationError, OrientationStatus,
    DEFAULT_WITNESS_EXTRA_VERTICES, MIN_FORBIDDEN_HOLE_LENGTH,
};
pub use phylogeny::{
    care_bound_check, cared_edges, competition_graph, phylogeny_graph, CareReport, CareViolation,
    CaredEdge, PhylogenyError,
};
pub use verifier::{
    enumerate_digraphs, find_hole_counterexamples, long_hole_extension_sweep, random_digraph,
    run_check, run_suite, CheckKind, CheckOutcome, Counterexample, ExtensionSweep, HoleCounterexample,
    HoleCounterexamples, SuiteReport, SweepMode, SweepScope, VerifierError, EXHAUSTIVE_VERTEX_LIMIT,
    RANDOM_VERTEX_LIMIT,
};
