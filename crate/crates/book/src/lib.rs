//! Compiles the guide's code listings as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/charclasses.md")]
pub mod charclasses {}

#[doc = include_str!("../../../book/src/ktheory.md")]
pub mod ktheory {}

#[doc = include_str!("../../../book/src/kcycles.md")]
pub mod kcycles {}

#[doc = include_str!("../../../book/src/dsl.md")]
pub mod dsl {}
