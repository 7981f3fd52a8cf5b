//! Characteristic classes of coincident tuples: exact computation over
//! `Z_p`, evaluation on concrete spaces, and explicit local witnesses.

pub mod certify;
pub mod charclass;
pub mod error;
pub mod gpoly;
pub mod oracle;
pub mod spaces;
pub mod symfun;

pub use certify::Certificate;
pub use charclass::{compute_s, AlphaResult, SqdResult};
pub use error::{Error, Result};
pub use gpoly::{GradedPoly, Monomial, Ring, RingPresentation};
pub use spaces::ClassSeries;
pub use symfun::{ElementaryBasis, SymmetricPoly};
