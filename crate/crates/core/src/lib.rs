//! Born-Oppenheimer effective potentials, WKB and Numerov spectra, and
//! atom-molecule scattering for planar heavy-heavy-light systems.

// Negated comparisons are deliberate: they reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod potentials;
pub mod quad;
pub mod radial;
pub mod roots;
pub mod scattering;
pub mod specfun;
pub mod twobody;
pub mod wkb;
