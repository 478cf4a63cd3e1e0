//! Exact computation of intersection-cohomology data for normal toric
//! varieties with coefficients in finite-order rank-one local systems.
//!
//! The library builds the intersection complex for an arbitrary perversity
//! directly on the fan, propagating monodromy characters cone by cone with
//! exact integer-lattice arithmetic, and certifies the vanishing of the
//! twisted intersection cohomology groups orbit by orbit.

pub mod charsys;
pub mod fan;
pub mod icengine;
pub mod lattice;
pub mod toruscoh;
