//! Degree-1 Kähler differentials of one-variable function fields in
//! characteristic p: d, dlog, the Cartier operator and exactness, the
//! inverse-Cartier ℘, trace maps for separable and purely inseparable
//! extensions, and the dlog-generator rewriting of Ω¹_K/dK.

pub mod bta;
pub mod field;
pub mod form;
pub mod ratfun;
pub mod trace;

pub use bta::{bta_rewrite, bta_rewrite_factored, BtaRewrite, BtaTerm};
pub use field::{FfElem, FunField, FunLayer, LayerKind};
pub use form::Diff1;
pub use ratfun::RatFun;
pub use trace::{norm_ff, trace_ff, trace_form, trace_form_insep, trace_form_sep, verify_ntr};
