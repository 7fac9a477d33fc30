//! Doc-tested mirror of the guide in `book/`.
//!
//! mdBook cannot run example code against a crate dependency, so every
//! chapter is also included here as a doc comment: `cargo test --doc -p
//! ncg-guide` compiles and runs each code block, keeping the book in sync
//! with the `ncg` API. Build the rendered book with `mdbook build book/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/constructions.md")]
pub mod constructions {}

#[doc = include_str!("../../../book/src/equilibria.md")]
pub mod equilibria {}

#[doc = include_str!("../../../book/src/structure.md")]
pub mod structure {}

#[doc = include_str!("../../../book/src/enumeration.md")]
pub mod enumeration {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
