//! Exact correction terms, Chern–Simons spectra and definite-filling
//! obstructions for connected sums of spherical space forms.
//!
//! The crate reproduces two independent obstructions for the family
//! `mP # −kO` (Poincaré sphere `P`, octahedral manifold `O`):
//!
//! * [`dinv`]: Heegaard Floer correction terms rule out negative-definite
//!   fillings once `k > 8m`.
//! * [`ledger`]: Chern–Simons energy bookkeeping on a one-dimensional
//!   instanton moduli space rules out positive-definite fillings for every
//!   `m ≥ 1`.
//!
//! All quantities are exact rationals; the only floating point lives in the
//! SU(2) representation oracle of [`flat::oracle`].

pub mod alexander;
pub mod dinv;
pub mod exact;
pub mod flat;
pub mod group;
pub mod ledger;
pub mod manifold;

pub use exact::{mod_one, rat, ModOne, Rational};
pub use group::{hom_counts, FiniteAbelianGroup};
pub use manifold::{parse_descriptor, Atom, AtomKind, Manifold, Orientation, Registry};
