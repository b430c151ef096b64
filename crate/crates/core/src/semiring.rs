//! Feature-instance counts extended with both infinities, and the catalogue
//! of numeric semirings defined over them.
//!
//! Counts are natural numbers; `-inf` and `inf` extend them so that a single
//! value type serves every semiring in the catalogue. Each semiring admits
//! only one of the two infinities (Boolean admits neither) and rejects the
//! other at operation time instead of silently absorbing it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A feature-instance count extended with `-inf` and `inf`.
///
/// The derived order is total: `-inf < 0 < 1 < ... < inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCount {
    NegInf,
    Fin(u64),
    PosInf,
}

pub use ExtendedCount::{Fin, NegInf, PosInf};

impl ExtendedCount {
    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// Saturating addition: either infinity absorbs finite values.
    /// Adding `inf` to `-inf` is undefined and rejected.
    pub fn checked_add(self, other: ExtendedCount) -> Result<ExtendedCount> {
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => Err(Error::InvalidArgument(
                "cannot add inf and -inf".to_string(),
            )),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (Fin(a), Fin(b)) => a
                .checked_add(b)
                .map(Fin)
                .ok_or(Error::CountOverflow { op: "addition" }),
        }
    }

    pub fn min(self, other: ExtendedCount) -> ExtendedCount {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtendedCount) -> ExtendedCount {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for ExtendedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            Fin(n) => write!(f, "{n}"),
            PosInf => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtendedCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(PosInf),
            "-inf" => Ok(NegInf),
            t => t
                .parse::<u64>()
                .map(Fin)
                .map_err(|_| Error::InvalidArgument(format!("invalid count `{t}`"))),
        }
    }
}

/// Whether weights of a semiring act as lower bounds, upper bounds, or
/// carry no bound semantics at all when matched against a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundDirection {
    /// Weights are requirements: a configuration must dominate them.
    Lower,
    /// Weights are capacities: a configuration must stay below them.
    Upper,
    /// Weights carry no bound meaning (Boolean).
    None,
}

/// The catalogue of numeric semirings over [`ExtendedCount`].
///
/// | semiring     | plus | times | zero   | one    | direction |
/// |--------------|------|-------|--------|--------|-----------|
/// | max-tropical | max  | +     | `-inf` | `0`    | lower     |
/// | min-tropical | min  | +     | `inf`  | `0`    | upper     |
/// | min-min      | min  | min   | `inf`  | `inf`  | upper     |
/// | max-max      | max  | max   | `-inf` | `-inf` | lower     |
/// | boolean      | or   | and   | `0`    | `1`    | none      |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericSemiring {
    MaxTropical,
    MinTropical,
    MinMin,
    MaxMax,
    Boolean,
}

impl NumericSemiring {
    pub const ALL: [NumericSemiring; 5] = [
        NumericSemiring::MaxTropical,
        NumericSemiring::MinTropical,
        NumericSemiring::MinMin,
        NumericSemiring::MaxMax,
        NumericSemiring::Boolean,
    ];

    /// The token used in automaton files and on the command line.
    pub fn token(self) -> &'static str {
        match self {
            NumericSemiring::MaxTropical => "max-tropical",
            NumericSemiring::MinTropical => "min-tropical",
            NumericSemiring::MinMin => "min-min",
            NumericSemiring::MaxMax => "max-max",
            NumericSemiring::Boolean => "boolean",
        }
    }

    pub fn from_token(token: &str) -> Result<NumericSemiring> {
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.token() == token)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown semiring `{token}`")))
    }

    /// Identity of `plus`; absent transitions and states carry this weight.
    pub fn zero(self) -> ExtendedCount {
        match self {
            NumericSemiring::MaxTropical | NumericSemiring::MaxMax => NegInf,
            NumericSemiring::MinTropical | NumericSemiring::MinMin => PosInf,
            NumericSemiring::Boolean => Fin(0),
        }
    }

    /// Identity of `times`; the weight of an empty path segment.
    pub fn one(self) -> ExtendedCount {
        match self {
            NumericSemiring::MaxTropical | NumericSemiring::MinTropical => Fin(0),
            NumericSemiring::MinMin => PosInf,
            NumericSemiring::MaxMax => NegInf,
            NumericSemiring::Boolean => Fin(1),
        }
    }

    /// Is `v` inside this semiring's admissible sub-carrier?
    ///
    /// Max-flavoured semirings admit `-inf` but not `inf`; min-flavoured
    /// semirings the reverse; Boolean admits exactly `0` and `1`.
    pub fn admits(self, v: ExtendedCount) -> bool {
        match self {
            NumericSemiring::MaxTropical | NumericSemiring::MaxMax => v != PosInf,
            NumericSemiring::MinTropical | NumericSemiring::MinMin => v != NegInf,
            NumericSemiring::Boolean => matches!(v, Fin(0) | Fin(1)),
        }
    }

    fn check(self, v: ExtendedCount) -> Result<()> {
        if self.admits(v) {
            Ok(())
        } else {
            Err(Error::RejectedOperand {
                semiring: self.token(),
                value: v.to_string(),
            })
        }
    }

    /// The additive operation of the semiring.
    pub fn plus(self, a: ExtendedCount, b: ExtendedCount) -> Result<ExtendedCount> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            NumericSemiring::MaxTropical | NumericSemiring::MaxMax | NumericSemiring::Boolean => {
                a.max(b)
            }
            NumericSemiring::MinTropical | NumericSemiring::MinMin => a.min(b),
        })
    }

    /// The multiplicative operation of the semiring.
    pub fn times(self, a: ExtendedCount, b: ExtendedCount) -> Result<ExtendedCount> {
        self.check(a)?;
        self.check(b)?;
        match self {
            NumericSemiring::MaxTropical | NumericSemiring::MinTropical => a.checked_add(b),
            NumericSemiring::MinMin | NumericSemiring::Boolean => Ok(a.min(b)),
            NumericSemiring::MaxMax => Ok(a.max(b)),
        }
    }

    pub fn is_zero(self, v: ExtendedCount) -> bool {
        v == self.zero()
    }

    pub fn bound_direction(self) -> BoundDirection {
        match self {
            NumericSemiring::MaxTropical | NumericSemiring::MaxMax => BoundDirection::Lower,
            NumericSemiring::MinTropical | NumericSemiring::MinMin => BoundDirection::Upper,
            NumericSemiring::Boolean => BoundDirection::None,
        }
    }

    /// Does `times` accumulate along a path (numeric addition)?
    ///
    /// Accumulating semirings can pump a weight entry without bound around a
    /// cycle; min/max flavoured `times` cannot.
    pub fn accumulates(self) -> bool {
        matches!(
            self,
            NumericSemiring::MaxTropical | NumericSemiring::MinTropical
        )
    }

    /// Does extending a path never improve (lower) its weight under the
    /// natural exploration order? Holds whenever `times` cannot decrease a
    /// value, given that admissible weights of these semirings are
    /// non-negative or the absorbed infinity.
    pub fn extension_monotone(self) -> bool {
        matches!(
            self,
            NumericSemiring::MaxTropical | NumericSemiring::MinTropical | NumericSemiring::MaxMax
        )
    }

}

impl fmt::Display for NumericSemiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use NumericSemiring::*;

    #[test]
    fn order_is_total_and_natural() {
        assert!(NegInf < Fin(0));
        assert!(Fin(0) < Fin(1));
        assert!(Fin(41) < Fin(42));
        assert!(Fin(u64::MAX) < PosInf);
        assert!(NegInf < PosInf);
    }

    #[test]
    fn addition_saturates_at_infinity() {
        assert_eq!(NegInf.checked_add(Fin(7)).unwrap(), NegInf);
        assert_eq!(PosInf.checked_add(Fin(7)).unwrap(), PosInf);
        assert_eq!(Fin(2).checked_add(Fin(3)).unwrap(), Fin(5));
        assert!(PosInf.checked_add(NegInf).is_err());
        assert!(Fin(u64::MAX).checked_add(Fin(1)).is_err());
    }

    #[test]
    fn catalogue_identities() {
        assert_eq!(MaxTropical.zero(), NegInf);
        assert_eq!(MaxTropical.one(), Fin(0));
        assert_eq!(MinTropical.zero(), PosInf);
        assert_eq!(MinTropical.one(), Fin(0));
        assert_eq!(MinMin.zero(), PosInf);
        assert_eq!(MinMin.one(), PosInf);
        assert_eq!(MaxMax.zero(), NegInf);
        assert_eq!(MaxMax.one(), NegInf);
        assert_eq!(Boolean.zero(), Fin(0));
        assert_eq!(Boolean.one(), Fin(1));
    }

    #[test]
    fn plus_and_times_examples() {
        assert_eq!(MaxTropical.plus(Fin(3), Fin(5)).unwrap(), Fin(5));
        assert_eq!(MaxTropical.plus(NegInf, Fin(7)).unwrap(), Fin(7));
        assert_eq!(MaxTropical.times(Fin(2), Fin(3)).unwrap(), Fin(5));
        assert_eq!(MaxTropical.times(NegInf, Fin(7)).unwrap(), NegInf);
        assert_eq!(MinMin.plus(Fin(4), Fin(9)).unwrap(), Fin(4));
        assert_eq!(MinMin.times(Fin(4), Fin(9)).unwrap(), Fin(4));
        assert_eq!(MinTropical.plus(Fin(4), Fin(9)).unwrap(), Fin(4));
        assert_eq!(MinTropical.times(PosInf, Fin(9)).unwrap(), PosInf);
        assert_eq!(MaxMax.times(Fin(4), Fin(9)).unwrap(), Fin(9));
        assert_eq!(Boolean.plus(Fin(0), Fin(1)).unwrap(), Fin(1));
        assert_eq!(Boolean.times(Fin(0), Fin(1)).unwrap(), Fin(0));
    }

    #[test]
    fn operands_outside_the_carrier_are_rejected() {
        assert!(MinTropical.plus(NegInf, Fin(0)).is_err());
        assert!(MinMin.times(Fin(1), NegInf).is_err());
        assert!(MaxTropical.plus(PosInf, Fin(0)).is_err());
        assert!(MaxMax.times(PosInf, Fin(1)).is_err());
        assert!(Boolean.plus(Fin(2), Fin(0)).is_err());
        assert!(Boolean.times(Fin(1), PosInf).is_err());
    }

    #[test]
    fn directions() {
        assert_eq!(MaxTropical.bound_direction(), BoundDirection::Lower);
        assert_eq!(MaxMax.bound_direction(), BoundDirection::Lower);
        assert_eq!(MinTropical.bound_direction(), BoundDirection::Upper);
        assert_eq!(MinMin.bound_direction(), BoundDirection::Upper);
        assert_eq!(Boolean.bound_direction(), BoundDirection::None);
    }

    #[test]
    fn count_literals_round_trip() {
        for v in [NegInf, Fin(0), Fin(17), PosInf] {
            assert_eq!(v.to_string().parse::<ExtendedCount>().unwrap(), v);
        }
        assert!("x".parse::<ExtendedCount>().is_err());
        assert!("-3".parse::<ExtendedCount>().is_err());
    }

    /// Sample values inside the given semiring's carrier.
    fn carrier_sample(s: NumericSemiring) -> Vec<ExtendedCount> {
        [NegInf, Fin(0), Fin(1), Fin(2), Fin(3), Fin(7), PosInf]
            .into_iter()
            .filter(|v| s.admits(*v))
            .collect()
    }

    /// Semiring axioms, checked exhaustively over a small carrier sample.
    ///
    /// In min-min and max-max the two identity elements coincide (0̄ = 1̄ =
    /// the absorbed infinity), so no operation can satisfy both the
    /// ⊗-identity law and the annihilation law on a nontrivial carrier. The
    /// catalogue keeps ⊗ literal — the worked multiset weights depend on 1̄
    /// acting as the identity — and the zero element's absorbing role is
    /// structural instead: absent transitions and unmarked states. The
    /// annihilation law is therefore asserted exactly where it is
    /// satisfiable, and the coincidence is pinned for the other two.
    #[test]
    fn axioms_hold_on_carrier_sample() {
        for s in NumericSemiring::ALL {
            let sample = carrier_sample(s);
            let degenerate = s.zero() == s.one();
            for &a in &sample {
                assert_eq!(s.plus(a, s.zero()).unwrap(), a, "{s}: a + 0 = a");
                assert_eq!(s.times(a, s.one()).unwrap(), a, "{s}: a * 1 = a");
                assert_eq!(s.times(s.one(), a).unwrap(), a, "{s}: 1 * a = a");
                if degenerate {
                    assert!(matches!(s, MinMin | MaxMax));
                } else {
                    assert_eq!(s.times(a, s.zero()).unwrap(), s.zero(), "{s}: a * 0 = 0");
                    assert_eq!(s.times(s.zero(), a).unwrap(), s.zero(), "{s}: 0 * a = 0");
                }
                for &b in &sample {
                    assert_eq!(
                        s.plus(a, b).unwrap(),
                        s.plus(b, a).unwrap(),
                        "{s}: + commutes"
                    );
                    for &c in &sample {
                        assert_eq!(
                            s.plus(s.plus(a, b).unwrap(), c).unwrap(),
                            s.plus(a, s.plus(b, c).unwrap()).unwrap(),
                            "{s}: + associates"
                        );
                        assert_eq!(
                            s.times(s.times(a, b).unwrap(), c).unwrap(),
                            s.times(a, s.times(b, c).unwrap()).unwrap(),
                            "{s}: * associates"
                        );
                        assert_eq!(
                            s.times(a, s.plus(b, c).unwrap()).unwrap(),
                            s.plus(s.times(a, b).unwrap(), s.times(a, c).unwrap())
                                .unwrap(),
                            "{s}: left distributivity"
                        );
                        assert_eq!(
                            s.times(s.plus(a, b).unwrap(), c).unwrap(),
                            s.plus(s.times(a, c).unwrap(), s.times(b, c).unwrap())
                                .unwrap(),
                            "{s}: right distributivity"
                        );
                    }
                }
            }
        }
    }
}
