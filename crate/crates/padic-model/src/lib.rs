//! Finite-precision models of a local field and exact measure computation.
//!
//! A model fixes an odd prime p, a truncation depth k, and a coefficient
//! ring kind (Z/p^k or F_p[t]/(t^k)). Formulas in the three-sorted
//! language evaluate to three-valued answers: atoms undecidable at the
//! working precision report Unknown together with a blame mask naming the
//! truncated inputs. On top of evaluation the crate provides ambient
//! product spaces (free coordinates, classical groups, varieties), exact
//! Serre-Oesterle volumes with depth-escalation stability certificates,
//! deterministic point enumeration, and a content-addressed result cache.

pub mod ambient;
pub mod cache;
pub mod elem;
pub mod eval;
pub mod model;
pub mod points;
pub mod volume;

pub use ambient::{AmbientError, AmbientFactor, AmbientSpace, SeededAmbient};
pub use cache::{digest, CacheHandle, CacheRecord, CACHE_VERSION};
pub use elem::{ResValue, TriBool, ValInterval, VB};
pub use eval::{eval_formula, eval_term, EvalError, PointValue, TermOutcome, TruncatedElement};
pub use model::{ModelError, ModelKind, ModelSpec, MAX_MODEL_DEPTH};
pub use points::enumerate_points;
pub use volume::{
    count_and_volume, counts_at_depth, VolumeCounts, VolumeError, VolumeOptions, VolumeResult,
};
