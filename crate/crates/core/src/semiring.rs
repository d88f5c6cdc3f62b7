//! Scalar semirings: `N ∪ {-∞}` with `(max, +)`, the four-valued `Ω` and the
//! three-valued `Ω̄`, plus the bar projection between them.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::Zero;

/// A semiring in max-plus notation: `oplus` is the max, `otimes` the sum.
pub trait Semiring: Clone + Eq + Hash + fmt::Debug {
    /// Neutral element of `oplus`, absorbing for `otimes` (`-∞`).
    fn zero() -> Self;
    /// Neutral element of `otimes` (`0`).
    fn one() -> Self;
    fn oplus(&self, rhs: &Self) -> Self;
    fn otimes(&self, rhs: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Projection of a value onto `Ω̄`: `-∞ ↦ -∞`, `0 ↦ 0`, anything positive ↦ `1`.
pub trait Bar {
    fn bar(&self) -> BarValue;
}

/// An element of `N ∪ {-∞}`. Finite values are arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum NmaxValue {
    #[default]
    NegInf,
    Finite(BigUint),
}

impl NmaxValue {
    pub fn finite(v: impl Into<BigUint>) -> Self {
        NmaxValue::Finite(v.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NmaxValue::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            NmaxValue::Finite(v) => Some(v),
            NmaxValue::NegInf => None,
        }
    }

    /// `c · self`, with `c · (-∞) = -∞` for every `c`.
    pub fn scale(&self, c: &BigUint) -> Self {
        match self {
            NmaxValue::NegInf => NmaxValue::NegInf,
            NmaxValue::Finite(v) => NmaxValue::Finite(v * c),
        }
    }

    /// Ordinary sum with a natural number (`-∞` stays `-∞`).
    pub fn add_nat(&self, c: &BigUint) -> Self {
        match self {
            NmaxValue::NegInf => NmaxValue::NegInf,
            NmaxValue::Finite(v) => NmaxValue::Finite(v + c),
        }
    }
}

impl From<u64> for NmaxValue {
    fn from(v: u64) -> Self {
        NmaxValue::Finite(BigUint::from(v))
    }
}

impl Semiring for NmaxValue {
    fn zero() -> Self {
        NmaxValue::NegInf
    }

    fn one() -> Self {
        NmaxValue::Finite(BigUint::zero())
    }

    fn oplus(&self, rhs: &Self) -> Self {
        if self >= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    fn otimes(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (NmaxValue::Finite(a), NmaxValue::Finite(b)) => NmaxValue::Finite(a + b),
            _ => NmaxValue::NegInf,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, NmaxValue::NegInf)
    }
}

impl Bar for NmaxValue {
    fn bar(&self) -> BarValue {
        match self {
            NmaxValue::NegInf => BarValue::NegInf,
            NmaxValue::Finite(v) if v.is_zero() => BarValue::Zero,
            NmaxValue::Finite(_) => BarValue::One,
        }
    }
}

impl fmt::Display for NmaxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NmaxValue::NegInf => f.write_str("-inf"),
            NmaxValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// An element of `Ω = {-∞, 0, 1, ∞}`, totally ordered by declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaValue {
    NegInf,
    Zero,
    One,
    Inf,
}

impl OmegaValue {
    pub const ALL: [OmegaValue; 4] = [
        OmegaValue::NegInf,
        OmegaValue::Zero,
        OmegaValue::One,
        OmegaValue::Inf,
    ];

    /// Stabilisation of a scalar: `1` and `∞` become `∞`, the rest is fixed.
    pub fn sharp(self) -> Self {
        match self {
            OmegaValue::One | OmegaValue::Inf => OmegaValue::Inf,
            v => v,
        }
    }

    /// Inverse of the lift; `None` for `∞`.
    pub fn to_bar(self) -> Option<BarValue> {
        match self {
            OmegaValue::NegInf => Some(BarValue::NegInf),
            OmegaValue::Zero => Some(BarValue::Zero),
            OmegaValue::One => Some(BarValue::One),
            OmegaValue::Inf => None,
        }
    }
}

impl Semiring for OmegaValue {
    fn zero() -> Self {
        OmegaValue::NegInf
    }

    fn one() -> Self {
        OmegaValue::Zero
    }

    fn oplus(&self, rhs: &Self) -> Self {
        (*self).max(*rhs)
    }

    fn otimes(&self, rhs: &Self) -> Self {
        // -∞ absorbs (even ∞), 0 is neutral, and otherwise the larger one wins.
        if *self == OmegaValue::NegInf || *rhs == OmegaValue::NegInf {
            OmegaValue::NegInf
        } else {
            (*self).max(*rhs)
        }
    }
}

impl Bar for OmegaValue {
    fn bar(&self) -> BarValue {
        match self {
            OmegaValue::NegInf => BarValue::NegInf,
            OmegaValue::Zero => BarValue::Zero,
            OmegaValue::One | OmegaValue::Inf => BarValue::One,
        }
    }
}

impl fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaValue::NegInf => "-inf",
            OmegaValue::Zero => "0",
            OmegaValue::One => "1",
            OmegaValue::Inf => "inf",
        })
    }
}

/// An element of `Ω̄ = {-∞, 0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BarValue {
    NegInf,
    Zero,
    One,
}

impl BarValue {
    pub const ALL: [BarValue; 3] = [BarValue::NegInf, BarValue::Zero, BarValue::One];

    pub fn lift(self) -> OmegaValue {
        match self {
            BarValue::NegInf => OmegaValue::NegInf,
            BarValue::Zero => OmegaValue::Zero,
            BarValue::One => OmegaValue::One,
        }
    }
}

impl From<BarValue> for OmegaValue {
    fn from(v: BarValue) -> Self {
        v.lift()
    }
}

impl Semiring for BarValue {
    fn zero() -> Self {
        BarValue::NegInf
    }

    fn one() -> Self {
        BarValue::Zero
    }

    fn oplus(&self, rhs: &Self) -> Self {
        (*self).max(*rhs)
    }

    fn otimes(&self, rhs: &Self) -> Self {
        if *self == BarValue::NegInf || *rhs == BarValue::NegInf {
            BarValue::NegInf
        } else {
            (*self).max(*rhs)
        }
    }
}

impl Bar for BarValue {
    fn bar(&self) -> BarValue {
        *self
    }
}

impl fmt::Display for BarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.lift().fmt(f)
    }
}

/// Convenience for tests and fixtures.
pub fn nmax(v: u64) -> NmaxValue {
    NmaxValue::from(v)
}
