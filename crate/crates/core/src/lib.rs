//! Bridge-arc systems on the 6-punctured sphere.
//!
//! Arc systems are stored in equatorial coordinates ([`sphere`]), superposed
//! into planar maps and reduced to minimal position ([`arrangement`]), and
//! compared by the rectangle condition, waves and normal form ([`criteria`]).
//! New systems of the trivial tangle come from rewiring one arc at a time
//! ([`moves`]); fixtures, the text format and SVG output live in [`catalog`],
//! [`format`] and [`svg`]; [`harness`] runs the bounded verification for the
//! knot 8_5.

pub mod arrangement;
pub mod catalog;
pub mod criteria;
pub mod format;
pub mod harness;
pub mod moves;
pub mod sphere;
pub mod svg;

pub use arrangement::{superpose, Arrangement, Owner};
pub use sphere::{are_isotopic, validate_system, ArcCoord, ArcSystem, Event, Hemisphere, Puncture, Segment};
