//! Featured multisets and the semirings lifted over them.
//!
//! A featured multiset maps every feature of a shared alphabet to an
//! [`ExtendedCount`]. Storage is sparse: only entries that deviate from the
//! multiset's declared default are kept, so lookups, equality, and hashing
//! are independent of which entries happen to be spelled out.
//!
//! The same numeric semiring operations lift element-wise, which makes the
//! set of featured multisets a semiring again. Composite weights bundle
//! several such multisets (one per declared component) and operate
//! component-wise.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semiring::{BoundDirection, ExtendedCount, Fin, NumericSemiring};

/// An ordered set of distinct feature names shared by multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureAlphabet {
    names: Vec<String>,
}

impl FeatureAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidArgument(
                "feature alphabet must not be empty".to_string(),
            ));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvalidArgument(
                    "feature names must not be empty".to_string(),
                ));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate feature `{n}`")));
            }
        }
        Ok(FeatureAlphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Is every feature of `self` also a feature of `other`?
    pub fn is_subset_of(&self, other: &FeatureAlphabet) -> bool {
        self.names.iter().all(|n| other.index_of(n).is_some())
    }
}

impl fmt::Display for FeatureAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(","))
    }
}

/// A sparse map from features to extended counts with a declared default.
///
/// Two multisets are equal when they agree on every feature of the same
/// alphabet, regardless of which entries are stored explicitly.
#[derive(Debug, Clone)]
pub struct FeaturedMultiset {
    alphabet: Arc<FeatureAlphabet>,
    default: ExtendedCount,
    entries: BTreeMap<usize, ExtendedCount>,
}

impl FeaturedMultiset {
    /// The all-default multiset. Configurations use default `0`, weights use
    /// the multiplicative identity of their semiring.
    pub fn new(alphabet: Arc<FeatureAlphabet>, default: ExtendedCount) -> Self {
        FeaturedMultiset {
            alphabet,
            default,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I, S>(
        alphabet: Arc<FeatureAlphabet>,
        default: ExtendedCount,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, ExtendedCount)>,
        S: AsRef<str>,
    {
        let mut m = FeaturedMultiset::new(alphabet, default);
        for (name, v) in pairs {
            m.set_by_name(name.as_ref(), v)?;
        }
        Ok(m)
    }

    pub fn alphabet(&self) -> &Arc<FeatureAlphabet> {
        &self.alphabet
    }

    pub fn default_count(&self) -> ExtendedCount {
        self.default
    }

    pub fn get(&self, idx: usize) -> ExtendedCount {
        debug_assert!(idx < self.alphabet.len());
        self.entries.get(&idx).copied().unwrap_or(self.default)
    }

    pub fn get_by_name(&self, name: &str) -> Result<ExtendedCount> {
        let idx = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
        Ok(self.get(idx))
    }

    /// Set one entry, keeping storage canonical: values equal to the default
    /// are not stored.
    pub fn set(&mut self, idx: usize, v: ExtendedCount) {
        debug_assert!(idx < self.alphabet.len());
        if v == self.default {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
    }

    pub fn set_by_name(&mut self, name: &str, v: ExtendedCount) -> Result<()> {
        let idx = self
            .alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
        self.set(idx, v);
        Ok(())
    }

    /// Non-default entries in alphabet order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, ExtendedCount)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, *v))
    }

    /// All values in alphabet order, defaults included.
    pub fn values(&self) -> impl Iterator<Item = ExtendedCount> + '_ {
        (0..self.alphabet.len()).map(|i| self.get(i))
    }

    pub fn is_uniform(&self, v: ExtendedCount) -> bool {
        self.values().all(|x| x == v)
    }

    /// Is every entry finite?
    pub fn is_finite(&self) -> bool {
        self.values().all(|v| v.is_finite())
    }

    fn check_same_alphabet(&self, other: &FeaturedMultiset) -> Result<()> {
        if self.alphabet.as_ref() == other.alphabet.as_ref() {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            })
        }
    }

    /// Element-wise combination with an arbitrary operation.
    fn zip_with<F>(&self, other: &FeaturedMultiset, mut op: F) -> Result<FeaturedMultiset>
    where
        F: FnMut(ExtendedCount, ExtendedCount) -> Result<ExtendedCount>,
    {
        self.check_same_alphabet(other)?;
        let default = op(self.default, other.default)?;
        let mut out = FeaturedMultiset::new(Arc::clone(&self.alphabet), default);
        let touched: std::collections::BTreeSet<usize> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .collect();
        for idx in touched {
            out.set(idx, op(self.get(idx), other.get(idx))?);
        }
        Ok(out)
    }
}

impl PartialEq for FeaturedMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.as_ref() == other.alphabet.as_ref()
            && self.values().eq(other.values())
    }
}

impl Eq for FeaturedMultiset {}

impl Hash for FeaturedMultiset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.hash(state);
        for v in self.values() {
            v.hash(state);
        }
    }
}

impl fmt::Display for FeaturedMultiset {
    /// The literal syntax: `{Team=2,Player=3}`, defaults omitted,
    /// infinities spelled `inf` and `-inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (idx, v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}={}", self.alphabet.name(idx), v)?;
        }
        write!(f, "}}")
    }
}

/// Element-wise semiring addition of two multisets over the same alphabet.
pub fn mplus(
    s: NumericSemiring,
    a: &FeaturedMultiset,
    b: &FeaturedMultiset,
) -> Result<FeaturedMultiset> {
    a.zip_with(b, |x, y| s.plus(x, y))
}

/// Element-wise semiring multiplication of two multisets over the same alphabet.
pub fn mtimes(
    s: NumericSemiring,
    a: &FeaturedMultiset,
    b: &FeaturedMultiset,
) -> Result<FeaturedMultiset> {
    a.zip_with(b, |x, y| s.times(x, y))
}

/// Element-wise maximum, the multiset union.
pub fn lift_union(a: &FeaturedMultiset, b: &FeaturedMultiset) -> Result<FeaturedMultiset> {
    a.zip_with(b, |x, y| Ok(x.max(y)))
}

/// Element-wise minimum, the multiset intersection.
pub fn lift_intersection(a: &FeaturedMultiset, b: &FeaturedMultiset) -> Result<FeaturedMultiset> {
    a.zip_with(b, |x, y| Ok(x.min(y)))
}

/// Element-wise sum of instance counts.
pub fn lift_sum(a: &FeaturedMultiset, b: &FeaturedMultiset) -> Result<FeaturedMultiset> {
    a.zip_with(b, |x, y| x.checked_add(y))
}

/// The sub-multiset relation: `a(f) <= b(f)` for every feature.
pub fn submultiset(a: &FeaturedMultiset, b: &FeaturedMultiset) -> Result<bool> {
    a.check_same_alphabet(b)?;
    Ok(a.values().zip(b.values()).all(|(x, y)| x <= y))
}

/// Does `config` satisfy the bound expressed by `weight` in the given
/// direction?
///
/// `weight` may range over a sub-alphabet of `config` (composite components
/// do); features are matched by name. `Lower` reads the weight as a
/// requirement the configuration must cover, `Upper` as a capacity it must
/// not exceed, `None` as no constraint at all. A `Lower` weight with an
/// `inf` entry is unsatisfiable by any finite configuration and yields
/// `false`, not an error.
pub fn satisfies(
    config: &FeaturedMultiset,
    weight: &FeaturedMultiset,
    direction: BoundDirection,
) -> Result<bool> {
    if direction == BoundDirection::None {
        return Ok(true);
    }
    for (idx, name) in weight.alphabet().names().iter().enumerate() {
        let w = weight.get(idx);
        let c = config.get_by_name(name)?;
        let ok = match direction {
            BoundDirection::Lower => w <= c,
            BoundDirection::Upper => c <= w,
            BoundDirection::None => unreachable!(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One multiset per component of a composite semiring, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeWeight {
    pub components: Vec<FeaturedMultiset>,
}

impl fmt::Display for CompositeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A weight value: a bare count, a featured multiset, or a composite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    Scalar(ExtendedCount),
    Multiset(FeaturedMultiset),
    Composite(CompositeWeight),
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Scalar(v) => write!(f, "{{{v}}}"),
            Weight::Multiset(m) => write!(f, "{m}"),
            Weight::Composite(c) => write!(f, "{c}"),
        }
    }
}

impl Weight {
    fn kind(&self) -> &'static str {
        match self {
            Weight::Scalar(_) => "scalar",
            Weight::Multiset(_) => "multiset",
            Weight::Composite(_) => "composite",
        }
    }
}

/// One component of a composite semiring: a numeric semiring applied to a
/// subset of the features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeComponent {
    pub semiring: NumericSemiring,
    pub features: Arc<FeatureAlphabet>,
}

/// The weight domain of an automaton, fixed when the automaton is created.
///
/// `Scalar` works directly on extended counts, `Multiset` lifts one numeric
/// semiring element-wise over a feature alphabet, and `Composite` combines
/// several lifted semirings component-wise. For a composite the component
/// feature subsets must cover the full alphabet.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSemiring {
    Scalar(NumericSemiring),
    Multiset {
        semiring: NumericSemiring,
        features: Arc<FeatureAlphabet>,
    },
    Composite {
        components: Vec<CompositeComponent>,
        features: Arc<FeatureAlphabet>,
    },
}

impl WeightSemiring {
    pub fn multiset(semiring: NumericSemiring, features: Arc<FeatureAlphabet>) -> Self {
        WeightSemiring::Multiset { semiring, features }
    }

    /// Build a composite domain, checking that the component subsets are
    /// drawn from and together cover the full feature alphabet.
    pub fn composite(
        components: Vec<CompositeComponent>,
        features: Arc<FeatureAlphabet>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument(
                "composite semiring needs at least one component".to_string(),
            ));
        }
        for c in &components {
            if !c.features.is_subset_of(&features) {
                return Err(Error::InvalidArgument(format!(
                    "component features [{}] are not a subset of [{}]",
                    c.features, features
                )));
            }
        }
        for name in features.names() {
            if !components.iter().any(|c| c.features.index_of(name).is_some()) {
                return Err(Error::InvalidArgument(format!(
                    "feature `{name}` is covered by no composite component"
                )));
            }
        }
        Ok(WeightSemiring::Composite {
            components,
            features,
        })
    }

    /// The full feature alphabet, if this is not a scalar domain.
    pub fn features(&self) -> Option<&Arc<FeatureAlphabet>> {
        match self {
            WeightSemiring::Scalar(_) => None,
            WeightSemiring::Multiset { features, .. } => Some(features),
            WeightSemiring::Composite { features, .. } => Some(features),
        }
    }

    /// The numeric semirings involved, one per component.
    pub fn numeric_semirings(&self) -> Vec<NumericSemiring> {
        match self {
            WeightSemiring::Scalar(s) => vec![*s],
            WeightSemiring::Multiset { semiring, .. } => vec![*semiring],
            WeightSemiring::Composite { components, .. } => {
                components.iter().map(|c| c.semiring).collect()
            }
        }
    }

    pub fn zero(&self) -> Weight {
        match self {
            WeightSemiring::Scalar(s) => Weight::Scalar(s.zero()),
            WeightSemiring::Multiset { semiring, features } => Weight::Multiset(
                FeaturedMultiset::new(Arc::clone(features), semiring.zero()),
            ),
            WeightSemiring::Composite { components, .. } => Weight::Composite(CompositeWeight {
                components: components
                    .iter()
                    .map(|c| FeaturedMultiset::new(Arc::clone(&c.features), c.semiring.zero()))
                    .collect(),
            }),
        }
    }

    pub fn one(&self) -> Weight {
        match self {
            WeightSemiring::Scalar(s) => Weight::Scalar(s.one()),
            WeightSemiring::Multiset { semiring, features } => Weight::Multiset(
                FeaturedMultiset::new(Arc::clone(features), semiring.one()),
            ),
            WeightSemiring::Composite { components, .. } => Weight::Composite(CompositeWeight {
                components: components
                    .iter()
                    .map(|c| FeaturedMultiset::new(Arc::clone(&c.features), c.semiring.one()))
                    .collect(),
            }),
        }
    }

    pub fn is_zero(&self, w: &Weight) -> bool {
        *w == self.zero()
    }

    /// True when 0̄ and 1̄ coincide (min-min, max-max, and composites built
    /// only from them). Such domains cannot distinguish "no transition"
    /// from "identity-weight transition" by value, so sparse containers must
    /// store identity weights explicitly rather than dropping them.
    pub fn degenerate(&self) -> bool {
        self.zero() == self.one()
    }

    /// Check that a weight value has the right shape and stays inside every
    /// component's carrier.
    pub fn validate_weight(&self, w: &Weight) -> Result<()> {
        match (self, w) {
            (WeightSemiring::Scalar(s), Weight::Scalar(v)) => {
                if !s.admits(*v) {
                    return Err(Error::RejectedOperand {
                        semiring: s.token(),
                        value: v.to_string(),
                    });
                }
            }
            (WeightSemiring::Multiset { semiring, features }, Weight::Multiset(m)) => {
                if m.alphabet().as_ref() != features.as_ref() {
                    return Err(Error::AlphabetMismatch {
                        left: m.alphabet().to_string(),
                        right: features.to_string(),
                    });
                }
                for v in m.values() {
                    if !semiring.admits(v) {
                        return Err(Error::RejectedOperand {
                            semiring: semiring.token(),
                            value: v.to_string(),
                        });
                    }
                }
            }
            (WeightSemiring::Composite { components, .. }, Weight::Composite(c)) => {
                if c.components.len() != components.len() {
                    return Err(Error::InvalidWeight(format!(
                        "expected {} composite components, got {}",
                        components.len(),
                        c.components.len()
                    )));
                }
                for (decl, m) in components.iter().zip(&c.components) {
                    if m.alphabet().as_ref() != decl.features.as_ref() {
                        return Err(Error::AlphabetMismatch {
                            left: m.alphabet().to_string(),
                            right: decl.features.to_string(),
                        });
                    }
                    for v in m.values() {
                        if !decl.semiring.admits(v) {
                            return Err(Error::RejectedOperand {
                                semiring: decl.semiring.token(),
                                value: v.to_string(),
                            });
                        }
                    }
                }
            }
            (d, w) => {
                return Err(Error::InvalidWeight(format!(
                    "{} weight does not fit a {} domain",
                    w.kind(),
                    d.kind()
                )))
            }
        }
        Ok(())
    }

    fn kind(&self) -> &'static str {
        match self {
            WeightSemiring::Scalar(_) => "scalar",
            WeightSemiring::Multiset { .. } => "multiset",
            WeightSemiring::Composite { .. } => "composite",
        }
    }

    pub fn plus(&self, a: &Weight, b: &Weight) -> Result<Weight> {
        self.combine(a, b, |s, x, y| s.plus(x, y))
    }

    pub fn times(&self, a: &Weight, b: &Weight) -> Result<Weight> {
        self.combine(a, b, |s, x, y| s.times(x, y))
    }

    fn combine<F>(&self, a: &Weight, b: &Weight, op: F) -> Result<Weight>
    where
        F: Fn(NumericSemiring, ExtendedCount, ExtendedCount) -> Result<ExtendedCount>,
    {
        match (self, a, b) {
            (WeightSemiring::Scalar(s), Weight::Scalar(x), Weight::Scalar(y)) => {
                Ok(Weight::Scalar(op(*s, *x, *y)?))
            }
            (
                WeightSemiring::Multiset { semiring, .. },
                Weight::Multiset(x),
                Weight::Multiset(y),
            ) => Ok(Weight::Multiset(
                x.zip_with(y, |u, v| op(*semiring, u, v))?,
            )),
            (
                WeightSemiring::Composite { components, .. },
                Weight::Composite(x),
                Weight::Composite(y),
            ) => {
                if x.components.len() != components.len() || y.components.len() != components.len()
                {
                    return Err(Error::InvalidWeight(
                        "composite component count mismatch".to_string(),
                    ));
                }
                let mut out = Vec::with_capacity(components.len());
                for ((decl, mx), my) in components.iter().zip(&x.components).zip(&y.components) {
                    out.push(mx.zip_with(my, |u, v| op(decl.semiring, u, v))?);
                }
                Ok(Weight::Composite(CompositeWeight { components: out }))
            }
            _ => Err(Error::InvalidWeight(format!(
                "cannot combine {} and {} weights in a {} domain",
                a.kind(),
                b.kind(),
                self.kind()
            ))),
        }
    }

    /// The all-zero configuration for this domain.
    pub fn empty_config(&self) -> Weight {
        match self {
            WeightSemiring::Scalar(_) => Weight::Scalar(Fin(0)),
            WeightSemiring::Multiset { features, .. }
            | WeightSemiring::Composite { features, .. } => {
                Weight::Multiset(FeaturedMultiset::new(Arc::clone(features), Fin(0)))
            }
        }
    }

    /// Check that `config` has the right shape for this domain.
    ///
    /// Configurations are scalar counts for scalar domains and a single
    /// multiset over the full feature alphabet otherwise. `inf` entries mean
    /// "unrestricted" and are allowed unless `require_finite` is set;
    /// `-inf` never is.
    pub fn validate_config(&self, config: &Weight, require_finite: bool) -> Result<()> {
        let check = |v: ExtendedCount| -> Result<()> {
            match v {
                ExtendedCount::NegInf => Err(Error::InvalidConfiguration(
                    "configuration entries must not be -inf".to_string(),
                )),
                ExtendedCount::PosInf if require_finite => Err(Error::InvalidConfiguration(
                    "configuration entries must be finite".to_string(),
                )),
                _ => Ok(()),
            }
        };
        match (self, config) {
            (WeightSemiring::Scalar(_), Weight::Scalar(v)) => check(*v),
            (
                WeightSemiring::Multiset { features, .. }
                | WeightSemiring::Composite { features, .. },
                Weight::Multiset(m),
            ) => {
                if m.alphabet().as_ref() != features.as_ref() {
                    return Err(Error::AlphabetMismatch {
                        left: m.alphabet().to_string(),
                        right: features.to_string(),
                    });
                }
                m.values().try_for_each(check)
            }
            (d, c) => Err(Error::InvalidConfiguration(format!(
                "{} configuration does not fit a {} domain",
                c.kind(),
                d.kind()
            ))),
        }
    }

    /// Does `config` satisfy `weight`? Each component is judged under its
    /// own bound direction; a composite satisfies iff every component does.
    pub fn satisfies(&self, config: &Weight, weight: &Weight) -> Result<bool> {
        match (self, config, weight) {
            (WeightSemiring::Scalar(s), Weight::Scalar(c), Weight::Scalar(w)) => {
                Ok(match s.bound_direction() {
                    BoundDirection::Lower => w <= c,
                    BoundDirection::Upper => c <= w,
                    BoundDirection::None => true,
                })
            }
            (
                WeightSemiring::Multiset { semiring, .. },
                Weight::Multiset(c),
                Weight::Multiset(w),
            ) => satisfies(c, w, semiring.bound_direction()),
            (
                WeightSemiring::Composite { components, .. },
                Weight::Multiset(c),
                Weight::Composite(w),
            ) => {
                for (decl, m) in components.iter().zip(&w.components) {
                    if !satisfies(c, m, decl.semiring.bound_direction())? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::InvalidArgument(format!(
                "cannot match a {} configuration against a {} weight",
                config.kind(),
                weight.kind()
            ))),
        }
    }

    /// True when extending a path can never move its weight earlier in the
    /// exploration order (see `NumericSemiring::extension_monotone`); for a
    /// composite, every component must qualify.
    pub fn extension_monotone(&self) -> bool {
        self.numeric_semirings()
            .iter()
            .all(|s| s.extension_monotone())
    }
}
