//! Classification of cords and 1-handles attached to surface-knots through
//! double cosets of peripheral subgroups in the knot group.

pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod double_coset;
pub mod enumeration;
pub mod input;
pub mod quotient;
pub mod selftest;
pub mod validation;
pub mod word;

pub use classifier::{
    CaseLabel, ClassifierContext, ClassifierError, HandleClass, HandleInvariant, HandleKind,
    UnorderedPair,
};
pub use double_coset::{DoubleCosetClass, DoubleCosetError, DoubleCosetId, DoubleCosetSpace};
pub use enumeration::{enumerate, CosetTable, EnumerationError, EnumerationLimits, TableError};
pub use input::{parse_input, GroupPresentation, InputError, SurfaceKnotInput};
pub use quotient::{
    find_homomorphisms, quotient_separate, HomomorphismSearch, Permutation, PermutationAssignment,
    Separation, SeparationOptions,
};
pub use validation::{validate, validate_tables, Check, CheckStatus, ValidationReport};
pub use word::{Letter, Word};
