pub mod algebra;
pub mod catalog;
pub mod chart;
pub mod dynamics;
pub mod contact;
pub mod error;
pub mod exactness;
pub mod families;
pub mod forms;
pub mod maps;
pub mod parse;
pub mod workbench;

pub use error::{Error, Result};

// The book chapters, compiled as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/contact.md")]
    mod contact {}
    #[doc = include_str!("../../../book/src/exactness.md")]
    mod exactness {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/workbench.md")]
    mod workbench {}
}
