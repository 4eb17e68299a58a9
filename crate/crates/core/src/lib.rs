//! Exact computations with fusion rings, based modules, divisible
//! subrings, induction and restriction, and torsion modules.

pub mod basis;
pub mod canonical;
pub mod cli;
pub mod constructions;
pub mod element;
pub mod error;
pub mod induction;
pub mod io;
pub mod module;
pub mod ring;
pub mod subring;
pub mod torsion;
pub mod verdict;

pub use basis::BasisId;
pub use element::{Element, NNElement};
pub use error::{Error, Result};
pub use module::BasedModule;
pub use ring::BasedRing;
pub use subring::{DivisibilityCertificate, EmbeddingMap, SubringEmbedding};
pub use verdict::{Verdict, Witness};
