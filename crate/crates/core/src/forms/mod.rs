//! Algebra-valued forms in the free Grassmann algebra.

pub mod form;
pub mod generic;
pub mod mono;
pub mod paren;

pub use form::{Form, TermKey, WedgeOptions};
pub use generic::{
    generic_form, generic_form_fp, generic_var, graded_generic_form, probe, split_generic_form,
    ProbeOutcome,
};
pub use mono::GMono;
pub use paren::{ParenTree, PAREN_ENUMERATION_CAP};
