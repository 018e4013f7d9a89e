//! Model parameters: which finite-precision local ring formulas are read in.
//!
//! A model fixes an odd prime p, a working depth k (arithmetic happens in
//! O / pi^k), the kind of ring (Z/p^k or F_p[t]/(t^k)) and a search bound for
//! value-sort quantifiers. Both kinds share the residue field F_p.

use classical_groups::{Ring, RingKind};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// O = Z/p^k, the depth-k truncation of the p-adic integers.
    MixedChar,
    /// O = F_p[t]/(t^k), the depth-k truncation of formal power series.
    EqualChar,
}

impl ModelKind {
    pub fn ring_kind(self) -> RingKind {
        match self {
            ModelKind::MixedChar => RingKind::Mixed,
            ModelKind::EqualChar => RingKind::Equal,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::MixedChar => "mixed",
            ModelKind::EqualChar => "equal",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("prime must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("depth must satisfy 1 <= k <= {max}, got {got}")]
    DepthRange { got: u32, max: u32 },
    #[error("p^k = {p}^{k} does not fit the point-code range")]
    DepthOverflow { p: u64, k: u32 },
    #[error("value bound must be nonnegative, got {0}")]
    NegativeValueBound(i64),
}

/// Largest supported working depth. Deep enough for the depth-escalation cap
/// plus the shift budget of any formula the builders produce.
pub const MAX_MODEL_DEPTH: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    p: u64,
    depth: u32,
    kind: ModelKind,
    value_bound: i64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ModelSpec {
    /// A model of O/pi^depth. The value-sort search bound defaults to the
    /// depth: the order of any element resolvable at depth k lies in [0, k).
    pub fn new(p: u64, depth: u32, kind: ModelKind) -> Result<Self, ModelError> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(ModelError::NotOddPrime(p));
        }
        if depth < 1 || depth > MAX_MODEL_DEPTH {
            return Err(ModelError::DepthRange { got: depth, max: MAX_MODEL_DEPTH });
        }
        let mut modulus: u64 = 1;
        for _ in 0..depth {
            let Some(next) = modulus.checked_mul(p) else {
                return Err(ModelError::DepthOverflow { p, k: depth });
            };
            modulus = next;
        }
        Ok(ModelSpec { p, depth, kind, value_bound: depth as i64 })
    }

    pub fn with_value_bound(mut self, bound: i64) -> Result<Self, ModelError> {
        if bound < 0 {
            return Err(ModelError::NegativeValueBound(bound));
        }
        self.value_bound = bound;
        Ok(self)
    }

    /// The same model one level deeper.
    pub fn deepen(&self) -> Result<Self, ModelError> {
        let spec = ModelSpec::new(self.p, self.depth + 1, self.kind)?;
        spec.with_value_bound(self.value_bound.max(self.depth as i64 + 1))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn value_bound(&self) -> i64 {
        self.value_bound
    }

    /// p^depth, the number of valued points mod pi^depth.
    pub fn point_count(&self) -> u64 {
        self.p.pow(self.depth)
    }

    /// The coefficient ring at the model's own depth.
    pub fn ring(&self) -> Ring {
        self.ring_at(self.depth)
    }

    /// The coefficient ring at a chosen level <= MAX_DEPTH of the ring type.
    pub fn ring_at(&self, level: u32) -> Ring {
        Ring::new(self.kind.ring_kind(), self.p, level).expect("validated model parameters")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_validated() {
        assert_eq!(ModelSpec::new(2, 1, ModelKind::MixedChar), Err(ModelError::NotOddPrime(2)));
        assert_eq!(ModelSpec::new(9, 1, ModelKind::MixedChar), Err(ModelError::NotOddPrime(9)));
        assert_eq!(
            ModelSpec::new(3, 0, ModelKind::EqualChar),
            Err(ModelError::DepthRange { got: 0, max: MAX_MODEL_DEPTH })
        );
        assert!(ModelSpec::new(3, 41, ModelKind::MixedChar).is_err());
        let m = ModelSpec::new(3, 2, ModelKind::MixedChar).unwrap();
        assert_eq!(m.point_count(), 9);
        assert_eq!(m.value_bound(), 2);
    }

    #[test]
    fn large_primes_at_depth_are_rejected_before_overflow() {
        // 10^19-scale moduli would overflow the u64 point codes.
        let err = ModelSpec::new(104729, 5, ModelKind::MixedChar)
            .and_then(|m| m.deepen())
            .and_then(|m| m.deepen())
            .and_then(|m| m.deepen());
        assert!(err.is_err());
    }

    #[test]
    fn deepen_raises_depth_and_value_bound() {
        let m = ModelSpec::new(5, 2, ModelKind::EqualChar).unwrap().deepen().unwrap();
        assert_eq!(m.depth(), 3);
        assert_eq!(m.value_bound(), 3);
        assert_eq!(m.kind(), ModelKind::EqualChar);
    }
}
