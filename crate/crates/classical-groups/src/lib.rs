//! Split classical groups (Sp(2n), SO(2n+1)) over truncated local rings.
//!
//! The crate provides the shared arithmetic substrate for the workspace:
//! truncated local rings Z/p^k and F_p[t]/(t^k), dense matrices over them,
//! group descriptors with exact orders and finite enumeration, the adjoint
//! representation with polynomial entries, the Cayley transform, and the
//! lambda-coset machinery (diagonal uniformizer shifts of the Iwahori
//! subgroup, canonical Hermite keys, class counts that are exact powers
//! of the residue field size).

pub mod fqlin;
pub mod group;
pub mod lambda;
pub mod mat;
pub mod poly;
pub mod ring;

pub use group::{
    cayley, is_unipotent, poly_adjugate, poly_det, so3_from_gl2, AdjointRep,
    GroupDescriptor, GroupError, GroupKind,
};
pub use lambda::{
    a_lambda, conj_exponents, coset_key, lambda_class_representatives, lambda_length,
    CosetKey, LambdaClassSet, LambdaError, MultiIndex, PiDiagonal,
};
pub use mat::Mat;
pub use poly::{rational_in_ring, Poly, PolyMat};
pub use ring::{is_square_mod, primitive_root_mod_pk, Ring, RingError, RingKind, Rv};
