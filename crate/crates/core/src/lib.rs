//! A desk-scale laboratory for computability over a small combinatory
//! language: a fuel-bounded S/K interpreter with numerals and code
//! primitives, a bijective Godel codec, the standard model of partial
//! computable functions on codes, numberings with bounded equivalence
//! checking and totalizers, and executable fixed-point constructions on top
//! (recursion theorems, diagonal-avoiding totalization, a limit-approximation
//! fixed-point demonstrator, and finite-precision continuous functionals on
//! Baire space).



pub mod adn;
pub mod arslanov;
pub mod codec;

pub mod eval;




pub mod corpus;
pub mod fixedpoint;
pub mod k1;
pub mod k2;
pub mod numbering;
pub mod pca;
pub mod rng;
pub mod syntax;
pub mod term;

pub use codec::{decode, encode, Code};
pub use eval::{evaluate, EvalOptions, EvalResult, Fuel};
pub use term::{Term, Tm};
