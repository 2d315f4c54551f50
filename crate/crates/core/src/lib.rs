//! Generalized Fine sequences: words, paths, succession systems, insertion
//! trees for pattern-avoiding permutations, and tree-path bijections.

pub mod bijection;
pub mod error;
pub mod families;
pub mod limits;
pub mod numbers;
pub mod paths;
pub mod patterns;
pub mod perm;
pub mod render;
pub mod succession;
pub mod words;

pub use bijection::{PathKey, Transport, TreePath};
pub use error::{Error, Result};
pub use families::{FamilySpec, TreeObject};
pub use limits::Limits;
pub use paths::{DyckPath, Step};
pub use patterns::PatternSet;
pub use perm::{Permutation, Symmetry};
pub use succession::{ChildSpec, Label, LabelKind, LevelProfile, SuccessionSystem};
pub use words::{FineParams, FineWord, SimilarityRelation, SimilarityWord};
