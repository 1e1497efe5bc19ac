//! Exact multivariate resultants, discriminants and iterated projection operators.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse polynomials over the rationals with named variables.
//! - [`euclid`]: contents, exact division, multivariate gcd, squarefree parts.
//! - [`resultant`]: Sylvester resultants and discriminants.
//! - [`projection`]: the squarefreed iterated resultant and Han's projection.
//! - [`genform`]: generic forms, Macaulay resultants, the multivariate
//!   discriminant, the Taylor remainder operator and the Busé factors.
//! - [`verify`]: exact and randomized checks of the identities relating them.

mod dense;
pub mod error;
pub mod euclid;
pub mod genform;
pub mod matrix;
mod parse;
pub mod poly;
pub mod projection;
pub mod resultant;
mod upoly;
pub mod verify;

pub use error::{Error, Result};
pub use euclid::{content, exact_div, gcd, primitive_part, sqrfree_part, NormalizedPoly};
pub use genform::{
    buse_factors, form_discriminant, generic_form, macaulay_resultant, multi_discriminant, resultant_of_forms,
    taylor_delta, BuseFactors, GenericForm, MacaulaySystem, ResultantMode,
};
pub use poly::{arith, ArithOp, Coefficient, Monomial, Poly, VarTable};
pub use projection::{bproj, bproj_step, hproj, hproj_branch, ProjCache, ProjCacheKey, ProjOrder, Projector};
pub use resultant::{discriminant, resultant, resultant_prs, sylvester, SylvesterMatrix};
pub use verify::{
    check_buse, check_degree, check_main, check_main2, check_remark, check_witness, probabilistic_divides, CheckMode,
    CheckReport, SpecializationPlan, TrialRecord, Verdict, Verifier,
};
