//! Permutations, the Cayley metric, non-crossing partitions and class algebra.

pub mod canonical;
pub mod class;
pub mod nc;
pub mod perm;

pub use canonical::{canonical, delta, f_hat, gamma, gamma_tb, is_vertical, CanonicalKind, Choice, ChoiceFunction};
pub use class::{partitions, ClassAlgebra, ClassFunction, Partition};
pub use nc::{catalan, enumerate_geodesics, is_geodesic, nc_to_perm, perm_to_nc, NonCrossingPartition};
pub use perm::{factorial, Permutation, SymmetricGroup};
