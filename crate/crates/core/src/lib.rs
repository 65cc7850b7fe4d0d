//! Link groups from diagrams, surgery presentations, coset enumeration,
//! finite quotients and exact icosahedral geometry.

pub mod corpus;
pub mod decide;
pub mod icosa;
pub mod link;
pub mod perm;
pub mod presentation;
pub mod smith;
pub mod word;

pub use decide::{
    find_homomorphisms, prove_nontrivial, todd_coxeter, Certificate, CosetTable, DecideError,
    Homomorphism, DEFAULT_MAX_COSETS,
};
pub use icosa::{GoldenNumber, GoldenRotation, GoldenVector, Polyhedron};
pub use link::{Crossing, LinkDiagram, LinkError, MeridianMap};
pub use perm::{check_relations, evaluate_word, PermError, Permutation, PermutationGroup};
pub use presentation::{Presentation, PresentationError};
pub use smith::{smith_normal_form, AbelianGroupDescriptor, IntegerMatrix, SmithForm};
pub use word::{Generator, Letter, Word, WordError};
