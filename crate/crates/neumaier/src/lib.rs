//! Construction, classification and verification engine for the Neumaier
//! graphs with parameters (48, 14, 2; 1, 4).
//!
//! The crate builds 48-vertex edge-regular graphs by stacking three layers of
//! 16-vertex ingredient graphs along prescribed part bijections, classifies
//! the results up to isomorphism, computes their spectra exactly, and checks
//! the full census against embedded expected counts. Companion modules cover
//! the smaller instances of the same layered construction and the proof
//! obligations around them.
//!
//! Modules, bottom up:
//!
//! * [`graphkit`]: bitset graphs up to 64 vertices, regularity parameters,
//!   cliques, graph6 round-tripping.
//! * [`canon`]: canonical forms, automorphism generators and group orders,
//!   vertex-transitivity.
//! * [`spectra`]: exact characteristic polynomials, the factor catalog,
//!   relation partitions and their quotient matrices, multiplicity solving.
//! * [`triples`]: the twelve 16-vertex ingredient classes and their
//!   cycle-alignment invariants.
//! * [`stacker`]: the three-layer stacking construction, admissible
//!   bijection enumeration, exhaustive small searches.
//! * [`census`]: the full (48, 14, 2; 1, 4) census, family records, expected
//!   data comparison, report output.
//! * [`samples`]: named reference graphs used throughout the tests and
//!   examples.

pub mod canon;
pub mod census;
pub mod graphkit;
pub mod samples;
pub mod spectra;
pub mod stacker;
pub mod triples;
