//! Factories for group rings, representation rings, SU(2)/SO(3), and
//! direct, free and semidirect products, with their canonical embeddings.

pub mod chartab;
pub(crate) mod direct;
pub(crate) mod free;
pub mod group;
pub(crate) mod semidirect;
pub(crate) mod su2;

pub use chartab::{rep_ring, CharacterSpec, CharacterTable, CharacterTableSpec, ClassSpec, Cyclotomic};
pub use direct::{direct_product, ProductConstruction};
pub use free::free_product;
pub use group::{group_ring, multiplication_table, FiniteGroupPresentation, GroupSpec};
pub use semidirect::{semidirect_product, ActionSpec, RingAutomorphismAction, SemidirectConstruction};
pub use su2::{so3_ring, so3_subring, su2_ring};

pub(crate) use chartab::rep_ring_from_spec;
pub(crate) use group::group_ring_from_spec;
pub(crate) use semidirect::semidirect_with_spec;
