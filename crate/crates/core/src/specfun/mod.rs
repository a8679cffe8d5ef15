//! Real special functions: log-gamma, digamma, Pochhammer symbols and
//! hypergeometric series.

pub mod dd;
mod gamma;
mod hyper;

pub use gamma::{digamma, gamma, ln_gamma, ln_pochhammer, pochhammer};
pub use hyper::{
    hyp_1f1, hyp_1f1_with_cap, hyp_3f2_terminating, hyp_pfq_unit, hyp_pfq_unit_with,
    laguerre_assoc, PFqParams, SeriesSum, UnitSeriesOptions, HYP1F1_MAX_TERMS,
};

pub(crate) use gamma::{digamma_pos, lgamma_pos, ln_factorial};
pub(crate) use hyper::terminating_sum_dd;
pub(crate) use hyper::kummer_terminating as hyper_kummer_terminating;
