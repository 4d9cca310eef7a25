//! Even symmetric forms in the power-sum basis.

mod form;
mod format;
mod term;

pub use form::{anchor_terms, enumerate_basis, power_sum_value, PowerSumForm};
pub use format::{parse_form, render_form};
pub use term::PowerSumTerm;
