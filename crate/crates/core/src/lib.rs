//! Normalized duality mappings on `l_p`, `L1` and `C[0,1]`, and numerical
//! certificates that given pairs lie outside the Mordukhovich coderivative
//! of `J`.
//!
//! The three backends ([`lp`], [`l1`], [`c01`]) share the [`DualitySpace`]
//! trait. The [`engine`] evaluates coderivative difference quotients along
//! probe curves inside the graph of `J`, and the [`suite`] checks the
//! classical properties of `J` on random samples.

pub mod c01;
pub mod engine;
mod error;
pub mod l1;
pub mod lp;
mod space;
pub mod suite;

pub use error::{Error, Result};
pub use space::DualitySpace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lp.md")]
    mod lp {}
    #[doc = include_str!("../../../book/src/l1.md")]
    mod l1 {}
    #[doc = include_str!("../../../book/src/c01.md")]
    mod c01 {}
    #[doc = include_str!("../../../book/src/coderivative.md")]
    mod coderivative {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/properties.md")]
    mod properties {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
