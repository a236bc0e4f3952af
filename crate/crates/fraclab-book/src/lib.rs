//! The guide under `book/` as doc-tests: every fenced Rust block in the
//! chapters compiles and runs against the current `fraclab`, so the prose
//! cannot drift from the library. `cargo test -p fraclab-book --doc` runs
//! just the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/parameters.md")]
pub mod parameters {}

#[doc = include_str!("../../../book/src/radial-spectral.md")]
pub mod radial_spectral {}

#[doc = include_str!("../../../book/src/grid-energy.md")]
pub mod grid_energy {}

#[doc = include_str!("../../../book/src/ground-states.md")]
pub mod ground_states {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
