//! Cardinality-based feature models and configuration validation under the
//! global (total instance count) semantics.
//!
//! A model is a feature tree whose edges carry multiplicity intervals
//! `⟨l,u⟩`, plus alternative groups and require/exclude cross edges. A
//! configuration assigns a total count to every concrete feature; it is
//! valid if counts for the abstract features can be chosen (the root always
//! counts 1) such that
//!
//! * every non-root feature `f` with parent `p` satisfies
//!   `l·count(p) ≤ count(f) ≤ u·count(p)` (an unbounded `u` imposes no
//!   upper constraint, even for `count(p) = 0`),
//! * the members of an alternative group sum to their parent's count,
//! * a require edge whose source count lies in the source interval forces
//!   the target count into the target interval, and
//! * an exclude edge forbids both counts lying in their intervals at once.
//!
//! Abstract counts are found by bounded enumeration: every candidate count
//! is tried up to `B = 1 + max(concrete counts, finite interval endpoints)`.
//! Within desk-scale models the sandwich between parent and child counts
//! keeps every satisfiable assignment below this bound.
//!
//! Features without an explicit interval default to the mandatory
//! shorthand `⟨1,1⟩`; members of an alternative group default to `⟨0,*⟩`
//! instead, since their selection is governed by the group sum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multiset::FeaturedMultiset;
use crate::semiring::ExtendedCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityInterval {
    pub lower: u64,
    /// `None` is the wildcard `*`.
    pub upper: Option<u64>,
}

impl CardinalityInterval {
    pub fn new(lower: u64, upper: Option<u64>) -> Result<Self> {
        if let Some(u) = upper {
            if lower > u {
                return Err(Error::InvalidArgument(format!(
                    "interval {lower}..{u} has lower > upper"
                )));
            }
        }
        Ok(CardinalityInterval { lower, upper })
    }

    pub fn contains(&self, n: u64) -> bool {
        self.lower <= n && self.upper.map_or(true, |u| n <= u)
    }
}

impl fmt::Display for CardinalityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "{}..{}", self.lower, u),
            None => write!(f, "{}..*", self.lower),
        }
    }
}

impl FromStr for CardinalityInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, u) = s.split_once("..").ok_or_else(|| {
            Error::InvalidArgument(format!("interval `{s}` is not of the form l..u"))
        })?;
        let lower = l
            .parse::<u64>()
            .map_err(|_| Error::InvalidArgument(format!("bad interval lower bound `{l}`")))?;
        let upper = if u == "*" {
            None
        } else {
            Some(u.parse::<u64>().map_err(|_| {
                Error::InvalidArgument(format!("bad interval upper bound `{u}`"))
            })?)
        };
        CardinalityInterval::new(lower, upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Abstract,
    Concrete,
}

#[derive(Debug, Clone)]
struct FeatureDecl {
    name: String,
    kind: FeatureKind,
    /// `None` only for the root.
    parent: Option<usize>,
    /// `None` means "defaulted": ⟨1,1⟩, or ⟨0,*⟩ for group members.
    card: Option<CardinalityInterval>,
}

#[derive(Debug, Clone)]
struct Group {
    parent: usize,
    members: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Require,
    Exclude,
}

#[derive(Debug, Clone)]
struct CrossEdge {
    kind: EdgeKind,
    source: usize,
    source_iv: CardinalityInterval,
    target: usize,
    target_iv: CardinalityInterval,
}

#[derive(Debug, Clone)]
pub struct CardinalityFeatureModel {
    features: Vec<FeatureDecl>,
    groups: Vec<Group>,
    cross: Vec<CrossEdge>,
}

/// One broken constraint, identified well enough to assert on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `tree:<feature>`, `group:<parent>`, `require:<src>-><tgt>`,
    /// `exclude:<src>/<tgt>`, or `root:<feature>`.
    pub constraint: String,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub valid: bool,
    /// Violations of the least-violating abstract-count assignment.
    pub violations: Vec<Violation>,
    /// On success, the counts chosen for the abstract features (root
    /// included).
    pub abstract_counts: Option<Vec<(String, u64)>>,
}

impl CardinalityFeatureModel {
    pub fn new(root: impl Into<String>, kind: FeatureKind) -> Self {
        CardinalityFeatureModel {
            features: vec![FeatureDecl {
                name: root.into(),
                kind,
                parent: None,
                card: None,
            }],
            groups: Vec::new(),
            cross: Vec::new(),
        }
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    fn require_feature(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn root(&self) -> &str {
        &self.features[0].name
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn concrete_features(&self) -> Vec<&str> {
        self.features
            .iter()
            .filter(|f| f.kind == FeatureKind::Concrete)
            .map(|f| f.name.as_str())
            .collect()
    }

    pub fn is_concrete(&self, name: &str) -> bool {
        self.index_of(name)
            .map_or(false, |i| self.features[i].kind == FeatureKind::Concrete)
    }

    pub fn add_feature(
        &mut self,
        name: impl Into<String>,
        kind: FeatureKind,
        parent: &str,
        card: Option<CardinalityInterval>,
    ) -> Result<()> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate feature `{name}`"
            )));
        }
        let parent = self.require_feature(parent)?;
        self.features.push(FeatureDecl {
            name,
            kind,
            parent: Some(parent),
            card,
        });
        Ok(())
    }

    /// Declare an alternative group: the member counts must sum to the
    /// parent's count. Members must be children of the parent.
    pub fn add_alternative_group(&mut self, parent: &str, members: &[&str]) -> Result<()> {
        let parent = self.require_feature(parent)?;
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "alternative group without members".to_string(),
            ));
        }
        let mut ids = Vec::new();
        for m in members {
            let id = self.require_feature(m)?;
            if self.features[id].parent != Some(parent) {
                return Err(Error::InvalidArgument(format!(
                    "group member `{m}` is not a child of `{}`",
                    self.features[parent].name
                )));
            }
            if self.groups.iter().any(|g| g.members.contains(&id)) || ids.contains(&id) {
                return Err(Error::InvalidArgument(format!(
                    "feature `{m}` already belongs to a group"
                )));
            }
            ids.push(id);
        }
        self.groups.push(Group {
            parent,
            members: ids,
        });
        Ok(())
    }

    fn add_cross(
        &mut self,
        kind: EdgeKind,
        source: &str,
        source_iv: CardinalityInterval,
        target: &str,
        target_iv: CardinalityInterval,
    ) -> Result<()> {
        let source = self.require_feature(source)?;
        let target = self.require_feature(target)?;
        for id in [source, target] {
            if self.features[id].kind != FeatureKind::Concrete {
                return Err(Error::InvalidArgument(format!(
                    "cross-edge endpoint `{}` is abstract",
                    self.features[id].name
                )));
            }
        }
        self.cross.push(CrossEdge {
            kind,
            source,
            source_iv,
            target,
            target_iv,
        });
        Ok(())
    }

    pub fn add_require(
        &mut self,
        source: &str,
        source_iv: CardinalityInterval,
        target: &str,
        target_iv: CardinalityInterval,
    ) -> Result<()> {
        self.add_cross(EdgeKind::Require, source, source_iv, target, target_iv)
    }

    pub fn add_exclude(
        &mut self,
        source: &str,
        source_iv: CardinalityInterval,
        target: &str,
        target_iv: CardinalityInterval,
    ) -> Result<()> {
        self.add_cross(EdgeKind::Exclude, source, source_iv, target, target_iv)
    }

    /// The tree interval actually enforced for a non-root feature.
    fn effective_card(&self, id: usize) -> CardinalityInterval {
        if let Some(card) = self.features[id].card {
            return card;
        }
        if self.groups.iter().any(|g| g.members.contains(&id)) {
            CardinalityInterval {
                lower: 0,
                upper: None,
            }
        } else {
            CardinalityInterval {
                lower: 1,
                upper: Some(1),
            }
        }
    }

    /// All constraint violations under a fixed full count assignment.
    fn violations_for(&self, counts: &[u64]) -> Vec<Violation> {
        let mut out = Vec::new();
        if counts[0] != 1 {
            out.push(Violation {
                constraint: format!("root:{}", self.features[0].name),
                description: format!(
                    "root feature {} must have exactly 1 instance, found {}",
                    self.features[0].name, counts[0]
                ),
            });
        }
        for (id, f) in self.features.iter().enumerate() {
            let Some(parent) = f.parent else { continue };
            let card = self.effective_card(id);
            let low = card.lower.saturating_mul(counts[parent]);
            let high = card.upper.map(|u| u.saturating_mul(counts[parent]));
            let ok = counts[id] >= low && high.map_or(true, |h| counts[id] <= h);
            if !ok {
                let scaled = match high {
                    Some(h) => format!("{low}..{h}"),
                    None => format!("{low}..*"),
                };
                out.push(Violation {
                    constraint: format!("tree:{}", f.name),
                    description: format!(
                        "{} count {} outside {scaled} ({} per {}, {} instances)",
                        f.name, counts[id], card, self.features[parent].name, counts[parent]
                    ),
                });
            }
        }
        for g in &self.groups {
            let sum: u64 = g.members.iter().map(|&m| counts[m]).sum();
            if sum != counts[g.parent] {
                let names: Vec<&str> = g
                    .members
                    .iter()
                    .map(|&m| self.features[m].name.as_str())
                    .collect();
                out.push(Violation {
                    constraint: format!("group:{}", self.features[g.parent].name),
                    description: format!(
                        "alternative group members {} sum to {}, expected {} (count of {})",
                        names.join("/"),
                        sum,
                        counts[g.parent],
                        self.features[g.parent].name
                    ),
                });
            }
        }
        for e in &self.cross {
            let src_in = e.source_iv.contains(counts[e.source]);
            let tgt_in = e.target_iv.contains(counts[e.target]);
            let src = &self.features[e.source].name;
            let tgt = &self.features[e.target].name;
            match e.kind {
                EdgeKind::Require => {
                    if src_in && !tgt_in {
                        out.push(Violation {
                            constraint: format!("require:{src}->{tgt}"),
                            description: format!(
                                "{} instances of {src} require the {tgt} count \
                                 to lie in {}, found {}",
                                counts[e.source], e.target_iv, counts[e.target]
                            ),
                        });
                    }
                }
                EdgeKind::Exclude => {
                    if src_in && tgt_in {
                        out.push(Violation {
                            constraint: format!("exclude:{src}/{tgt}"),
                            description: format!(
                                "{} instances of {src} exclude a {tgt} count in {}, \
                                 but {} instances are selected",
                                counts[e.source], e.target_iv, counts[e.target]
                            ),
                        });
                    }
                }
            }
        }
        out
    }

    /// The enumeration bound for abstract counts.
    fn enumeration_bound(&self, concrete: &BTreeMap<usize, u64>) -> u64 {
        let mut b = 0;
        for &c in concrete.values() {
            b = b.max(c);
        }
        for id in 1..self.features.len() {
            let card = self.effective_card(id);
            b = b.max(card.lower);
            if let Some(u) = card.upper {
                b = b.max(u);
            }
        }
        b + 1
    }

    /// Validate a configuration of concrete-feature counts.
    ///
    /// Every feature named in `m`'s alphabet must be a concrete feature of
    /// this model and every entry must be finite; features left out count
    /// zero.
    pub fn validate_config(&self, m: &FeaturedMultiset) -> Result<ValidationReport> {
        let mut concrete: BTreeMap<usize, u64> = BTreeMap::new();
        for (name, value) in m.alphabet().names().iter().zip(m.values()) {
            let id = self.require_feature(name)?;
            if self.features[id].kind != FeatureKind::Concrete {
                return Err(Error::InvalidConfiguration(format!(
                    "configurations assign counts to concrete features only, \
                     `{name}` is abstract"
                )));
            }
            let ExtendedCount::Fin(n) = value else {
                return Err(Error::InvalidConfiguration(format!(
                    "count for `{name}` must be finite, got {value}"
                )));
            };
            concrete.insert(id, n);
        }

        let abstracts: Vec<usize> = (1..self.features.len())
            .filter(|&id| self.features[id].kind == FeatureKind::Abstract)
            .collect();
        let bound = self.enumeration_bound(&concrete);
        let combos = (bound + 1)
            .checked_pow(abstracts.len() as u32)
            .filter(|&n| n <= 5_000_000)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "bounded validation over {} abstract features up to {} is too large",
                    abstracts.len(),
                    bound
                ))
            })?;

        let mut counts = vec![0u64; self.features.len()];
        for (&id, &n) in &concrete {
            counts[id] = n;
        }
        if self.features[0].kind == FeatureKind::Abstract {
            counts[0] = 1;
        }

        let mut best: Option<Vec<Violation>> = None;
        for combo in 0..combos {
            let mut rest = combo;
            for &id in &abstracts {
                counts[id] = rest % (bound + 1);
                rest /= bound + 1;
            }
            let violations = self.violations_for(&counts);
            if violations.is_empty() {
                let witness = std::iter::once((self.features[0].name.clone(), counts[0]))
                    .chain(
                        abstracts
                            .iter()
                            .map(|&id| (self.features[id].name.clone(), counts[id])),
                    )
                    .collect();
                return Ok(ValidationReport {
                    valid: true,
                    violations: Vec::new(),
                    abstract_counts: Some(witness),
                });
            }
            if best.as_ref().map_or(true, |b| violations.len() < b.len()) {
                best = Some(violations);
            }
        }
        Ok(ValidationReport {
            valid: false,
            violations: best.unwrap_or_default(),
            abstract_counts: None,
        })
    }
}

/// Parse the line-oriented model format:
///
/// ```text
/// feature MultiplayerGame abstract root
/// feature ProcMod concrete parent=MultiplayerGame card=0..*
/// group Communication alternative WiFi BT
/// require BT 1..* -> Player 0..20
/// exclude Team 1..* ProcMod 4..5
/// ```
///
/// `#` starts a comment. Features must be declared before they are used as
/// parents; groups and cross edges are resolved after all features, so they
/// may appear anywhere.
pub fn parse_cfm(text: &str) -> Result<CardinalityFeatureModel> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (i + 1, line.split_whitespace().collect::<Vec<_>>())
        })
        .filter(|(_, tokens)| !tokens.is_empty())
        .collect();

    let at = |line: usize, msg: String| Error::parse(line, msg);
    let mut model: Option<CardinalityFeatureModel> = None;

    for (line, tokens) in &lines {
        if tokens[0] != "feature" {
            continue;
        }
        let [_, name, kind, rest @ ..] = tokens.as_slice() else {
            return Err(at(*line, "feature needs a name and a kind".to_string()));
        };
        let kind = match *kind {
            "abstract" => FeatureKind::Abstract,
            "concrete" => FeatureKind::Concrete,
            other => {
                return Err(at(*line, format!("unknown feature kind `{other}`")));
            }
        };
        if rest == ["root"] {
            if model.is_some() {
                return Err(at(*line, "a second root feature".to_string()));
            }
            model = Some(CardinalityFeatureModel::new(*name, kind));
            continue;
        }
        let model = model
            .as_mut()
            .ok_or_else(|| at(*line, "the root feature must be declared first".to_string()))?;
        let mut parent = None;
        let mut card = None;
        for opt in rest {
            match opt.split_once('=') {
                Some(("parent", p)) => parent = Some(p),
                Some(("card", c)) => {
                    card = Some(
                        c.parse::<CardinalityInterval>()
                            .map_err(|e| at(*line, e.to_string()))?,
                    )
                }
                _ => return Err(at(*line, format!("unknown feature option `{opt}`"))),
            }
        }
        let parent =
            parent.ok_or_else(|| at(*line, format!("feature `{name}` needs parent=")))?;
        model
            .add_feature(*name, kind, parent, card)
            .map_err(|e| at(*line, e.to_string()))?;
    }

    let mut model = model.ok_or_else(|| {
        Error::parse(
            lines.last().map(|(l, _)| *l).unwrap_or(0),
            "no root feature declared".to_string(),
        )
    })?;

    for (line, tokens) in &lines {
        let at = |msg: String| Error::parse(*line, msg);
        match tokens[0] {
            "feature" => {}
            "group" => {
                let [_, parent, kind, members @ ..] = tokens.as_slice() else {
                    return Err(at("group needs a parent and a kind".to_string()));
                };
                if *kind != "alternative" {
                    return Err(at(format!("unknown group kind `{kind}`")));
                }
                model
                    .add_alternative_group(parent, members)
                    .map_err(|e| at(e.to_string()))?;
            }
            "require" => {
                let [_, src, src_iv, arrow, tgt, tgt_iv] = tokens.as_slice() else {
                    return Err(at(
                        "require takes `<src> <l..u> -> <tgt> <l..u>`".to_string()
                    ));
                };
                if *arrow != "->" {
                    return Err(at(format!("expected `->`, found `{arrow}`")));
                }
                model
                    .add_require(
                        src,
                        src_iv.parse().map_err(|e: Error| at(e.to_string()))?,
                        tgt,
                        tgt_iv.parse().map_err(|e: Error| at(e.to_string()))?,
                    )
                    .map_err(|e| at(e.to_string()))?;
            }
            "exclude" => {
                let [_, src, src_iv, tgt, tgt_iv] = tokens.as_slice() else {
                    return Err(at("exclude takes `<src> <l..u> <tgt> <l..u>`".to_string()));
                };
                model
                    .add_exclude(
                        src,
                        src_iv.parse().map_err(|e: Error| at(e.to_string()))?,
                        tgt,
                        tgt_iv.parse().map_err(|e: Error| at(e.to_string()))?,
                    )
                    .map_err(|e| at(e.to_string()))?;
            }
            other => {
                return Err(at(format!("unknown declaration `{other}`")));
            }
        }
    }
    Ok(model)
}
