//! String and band combinatorics for finite-dimensional quiver algebras.
//!
//! The library models presentations of algebras by quivers with monomial
//! relations, enumerates strings and bands, decides whether band modules are
//! bricks by scanning the periodic word `∞b∞` for common quotient/submodule
//! substrings, and decides tau-tilting finiteness for special biserial
//! presentations (no band module is a brick) and for Brauer graph algebras
//! (cycle criterion on the graph). Every combinatorial count can be
//! cross-checked against an exact rational linear-algebra oracle that builds
//! the modules explicitly and solves intertwiner systems.
//!
//! ```
//! use bandbrick::quiver::parse_presentation;
//! use bandbrick::tau::{decide_tau_finite_sb, Verdict};
//!
//! let pres = parse_presentation("vertices: 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n").unwrap();
//! let decision = decide_tau_finite_sb(&pres, 6).unwrap();
//! assert_eq!(decision.verdict, Verdict::TauInfinite);
//! assert_eq!(decision.certificate.unwrap().band, "a b-");
//! ```

pub mod brauer;
pub mod corpus;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod tau;
pub mod words;

pub use quiver::{Arrow, ArrowId, Direction, Letter, Path, Presentation, Quiver, VertexId, Walk};
pub use words::{Band, StringWord};
