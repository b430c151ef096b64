//! The line-oriented automaton text format and the weight/configuration
//! literal syntax.
//!
//! A document starts with a header — one `semiring` line, an optional
//! `features` line (its absence makes the automaton scalar), and one
//! `alphabet` line — followed by `state` and `trans` lines:
//!
//! ```text
//! semiring max-tropical
//! features Team Player ProcMod BT WiFi Solitaire Chess
//! alphabet addTeam addPlayer addSolitaire addChess addProcMod addBT addWiFi
//! state q1 initial
//! state q5 final
//! trans q1 q2 addTeam {Team=1}
//! ```
//!
//! Composite domains name one numeric semiring per component, each with its
//! feature subset: `semiring max-max over=BT,WiFi; min-min over=BT,WiFi`.
//! Scalar documents write weights as brace-wrapped counts (`initial={2}`),
//! multiset documents as multiset literals (`{Team=1,Player=2}`, omitted
//! entries default to the semiring's one), composite documents as
//! `|`-separated component literals. Bare `initial`/`final` flags assign
//! weight one. `#` starts a comment; blank lines are skipped; literals must
//! not contain whitespace.

use std::sync::Arc;

use crate::automaton::WeightedAutomaton;
use crate::error::{parse, Error, Result};
use crate::multiset::{
    CompositeComponent, CompositeWeight, FeatureAlphabet, FeaturedMultiset, Weight, WeightSemiring,
};
use crate::semiring::{ExtendedCount, NumericSemiring};

/// Parse a multiset literal such as `{Team=2,Player=3}` over `alphabet`,
/// filling unmentioned features with `default`.
pub fn parse_multiset(
    alphabet: &Arc<FeatureAlphabet>,
    default: ExtendedCount,
    text: &str,
) -> Result<FeaturedMultiset> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| {
            Error::InvalidArgument(format!("multiset literal `{text}` must be brace-wrapped"))
        })?;
    let mut m = FeaturedMultiset::new(Arc::clone(alphabet), default);
    if inner.is_empty() {
        return Ok(m);
    }
    for part in inner.split(',') {
        let (name, value) = part.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("expected `feature=count`, got `{part}`"))
        })?;
        m.set_by_name(name, value.parse()?)?;
    }
    Ok(m)
}

/// Parse a weight literal in the shape `semiring` expects; unmentioned
/// features default to one.
pub fn parse_weight(semiring: &WeightSemiring, text: &str) -> Result<Weight> {
    let w = match semiring {
        WeightSemiring::Scalar(_) => {
            let inner = text
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("scalar literal `{text}` must be brace-wrapped"))
                })?;
            Weight::Scalar(inner.parse()?)
        }
        WeightSemiring::Multiset { semiring, features } => {
            Weight::Multiset(parse_multiset(features, semiring.one(), text)?)
        }
        WeightSemiring::Composite { components, .. } => {
            let parts: Vec<&str> = text.split('|').collect();
            if parts.len() != components.len() {
                return Err(Error::InvalidWeight(format!(
                    "expected {} `|`-separated components, got {}",
                    components.len(),
                    parts.len()
                )));
            }
            let ms = components
                .iter()
                .zip(parts)
                .map(|(c, p)| parse_multiset(&c.features, c.semiring.one(), p))
                .collect::<Result<Vec<_>>>()?;
            Weight::Composite(CompositeWeight { components: ms })
        }
    };
    semiring.validate_weight(&w)?;
    Ok(w)
}

/// Parse a configuration literal: a brace-wrapped count for scalar domains,
/// otherwise a multiset literal over the full feature alphabet with
/// unmentioned features at 0. `inf` entries are allowed here; the analyses
/// decide whether to accept them.
pub fn parse_config(semiring: &WeightSemiring, text: &str) -> Result<Weight> {
    let config = match semiring.features() {
        None => {
            let inner = text
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .unwrap_or(text);
            Weight::Scalar(inner.parse()?)
        }
        Some(features) => {
            Weight::Multiset(parse_multiset(features, ExtendedCount::Fin(0), text)?)
        }
    };
    semiring.validate_config(&config, false)?;
    Ok(config)
}

/// `max-max over=BT,WiFi` → semiring token plus the named feature subset.
fn parse_semiring_component(text: &str) -> Result<(NumericSemiring, Option<Vec<String>>)> {
    let mut tokens = text.split_whitespace();
    let name = tokens
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty semiring component".to_string()))?;
    let semiring = NumericSemiring::from_token(name)?;
    let over = match tokens.next() {
        None => None,
        Some(t) => {
            let list = t.strip_prefix("over=").ok_or_else(|| {
                Error::InvalidArgument(format!("expected `over=...`, got `{t}`"))
            })?;
            Some(list.split(',').map(str::to_string).collect())
        }
    };
    if let Some(extra) = tokens.next() {
        return Err(Error::InvalidArgument(format!(
            "unexpected token `{extra}` in semiring declaration"
        )));
    }
    Ok((semiring, over))
}

/// The `semiring` declaration collected during parsing; turned into a
/// [`WeightSemiring`] once the `features` line (if any) is known.
struct SemiringDecl {
    components: Vec<(NumericSemiring, Option<Vec<String>>)>,
}

impl SemiringDecl {
    fn resolve(&self, features: Option<Arc<FeatureAlphabet>>) -> Result<WeightSemiring> {
        let composite = self.components.len() > 1 || self.components[0].1.is_some();
        match (composite, features) {
            (false, None) => Ok(WeightSemiring::Scalar(self.components[0].0)),
            (false, Some(f)) => Ok(WeightSemiring::multiset(self.components[0].0, f)),
            (true, None) => Err(Error::InvalidArgument(
                "composite semiring requires a `features` line".to_string(),
            )),
            (true, Some(f)) => {
                let components = self
                    .components
                    .iter()
                    .map(|(s, over)| {
                        let names = over.as_ref().ok_or_else(|| {
                            Error::InvalidArgument(
                                "every composite component needs `over=...`".to_string(),
                            )
                        })?;
                        for n in names {
                            if f.index_of(n).is_none() {
                                return Err(Error::UnknownFeature(n.clone()));
                            }
                        }
                        Ok(CompositeComponent {
                            semiring: *s,
                            features: Arc::new(FeatureAlphabet::new(names.iter().cloned())?),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                WeightSemiring::composite(components, f)
            }
        }
    }
}

pub fn parse_automaton(text: &str) -> Result<WeightedAutomaton> {
    let mut semiring_decl: Option<SemiringDecl> = None;
    let mut features: Option<Arc<FeatureAlphabet>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut automaton: Option<WeightedAutomaton> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| parse(line_no, e.to_string());
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        let rest = line[keyword.len()..].trim();
        match keyword {
            "semiring" => {
                if semiring_decl.is_some() {
                    return Err(parse(line_no, "duplicate `semiring` line"));
                }
                let components = rest
                    .split(';')
                    .map(|c| parse_semiring_component(c.trim()).map_err(at))
                    .collect::<Result<Vec<_>>>()?;
                if components.is_empty() {
                    return Err(parse(line_no, "semiring declaration is empty"));
                }
                semiring_decl = Some(SemiringDecl { components });
            }
            "features" => {
                if features.is_some() {
                    return Err(parse(line_no, "duplicate `features` line"));
                }
                features = Some(Arc::new(FeatureAlphabet::new(tokens).map_err(at)?));
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(parse(line_no, "duplicate `alphabet` line"));
                }
                alphabet = Some(tokens.map(str::to_string).collect());
            }
            "state" | "trans" => {
                if automaton.is_none() {
                    let decl = semiring_decl
                        .as_ref()
                        .ok_or_else(|| parse(line_no, "missing `semiring` line"))?;
                    let semiring = decl.resolve(features.clone()).map_err(at)?;
                    let mut a = WeightedAutomaton::new(semiring);
                    for s in alphabet
                        .as_ref()
                        .ok_or_else(|| parse(line_no, "missing `alphabet` line"))?
                    {
                        a.add_symbol(s.clone()).map_err(at)?;
                    }
                    automaton = Some(a);
                }
                let a = automaton.as_mut().unwrap();
                if keyword == "state" {
                    parse_state_line(a, tokens).map_err(at)?;
                } else {
                    parse_trans_line(a, tokens).map_err(at)?;
                }
            }
            other => {
                return Err(parse(line_no, format!("unknown keyword `{other}`")));
            }
        }
    }

    match automaton {
        Some(a) => Ok(a),
        // A stateless document is still a (trivial) automaton as long as
        // its header is complete.
        None => {
            let decl =
                semiring_decl.ok_or_else(|| parse(0, "missing `semiring` line"))?;
            let semiring = decl.resolve(features)?;
            let mut a = WeightedAutomaton::new(semiring);
            for s in alphabet.ok_or_else(|| parse(0, "missing `alphabet` line"))? {
                a.add_symbol(s)?;
            }
            Ok(a)
        }
    }
}

fn parse_state_line<'a>(
    a: &mut WeightedAutomaton,
    mut tokens: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let name = tokens
        .next()
        .ok_or_else(|| Error::InvalidArgument("`state` needs a name".to_string()))?;
    let q = a.add_state(name)?;
    let one = a.semiring().one();
    for flag in tokens {
        let (kind, weight) = match flag.split_once('=') {
            None => (flag, one.clone()),
            Some((kind, literal)) => (kind, parse_weight(a.semiring(), literal)?),
        };
        match kind {
            "initial" => a.set_initial(q, weight)?,
            "final" => a.set_final(q, weight)?,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown state flag `{other}`"
                )))
            }
        }
    }
    Ok(())
}

fn parse_trans_line<'a>(
    a: &mut WeightedAutomaton,
    mut tokens: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| Error::InvalidArgument(format!("`trans` is missing its {what}")))
    };
    let from = a.state_id(next("source state")?)?;
    let to = a.state_id(next("target state")?)?;
    let symbol = a.symbol_id(next("symbol")?)?;
    let weight = match tokens.next() {
        None => a.semiring().one(),
        Some(literal) => parse_weight(a.semiring(), literal)?,
    };
    if let Some(extra) = tokens.next() {
        return Err(Error::InvalidArgument(format!(
            "unexpected token `{extra}` after transition weight"
        )));
    }
    a.add_transition(from, symbol, to, weight)
}

fn semiring_header(s: &WeightSemiring) -> String {
    match s {
        WeightSemiring::Scalar(n) | WeightSemiring::Multiset { semiring: n, .. } => {
            format!("semiring {}", n.token())
        }
        WeightSemiring::Composite { components, .. } => {
            let parts: Vec<String> = components
                .iter()
                .map(|c| {
                    format!(
                        "{} over={}",
                        c.semiring.token(),
                        c.features.names().join(",")
                    )
                })
                .collect();
            format!("semiring {}", parts.join("; "))
        }
    }
}

/// Serialize in canonical form: header, then states in declaration order
/// with `initial`/`final` flags (bare when the weight is one), then
/// transitions sorted by source, symbol, and target.
pub fn serialize_automaton(a: &WeightedAutomaton) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "{}", semiring_header(a.semiring()));
    if let Some(features) = a.semiring().features() {
        let _ = writeln!(out, "features {}", features.names().join(" "));
    }
    let _ = writeln!(out, "alphabet {}", a.symbol_names().join(" "));
    let one = a.semiring().one();
    let initials: std::collections::BTreeMap<_, _> = a.initial_states().collect();
    let finals: std::collections::BTreeMap<_, _> = a.final_states().collect();
    for q in 0..a.num_states() {
        let mut line = format!("state {}", a.state_name(q));
        for (flag, w) in [("initial", initials.get(&q)), ("final", finals.get(&q))] {
            let Some(&w) = w else { continue };
            if *w == one {
                let _ = write!(line, " {flag}");
            } else {
                let _ = write!(line, " {flag}={w}");
            }
        }
        let _ = writeln!(out, "{line}");
    }
    for (q, sym, to, w) in a.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {} {w}",
            a.state_name(q),
            a.state_name(to),
            a.symbol_name(sym)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::semiring::Fin;

    const MULTIPLAYER: &str = "\
# Multiplayer game, max-tropical lower bounds
semiring max-tropical
features Team Player Solitaire Chess ProcMod BT WiFi
alphabet addTeam addPlayer addSolitaire addChess addProcMod addBT addWiFi
state q1 initial
state q2
state q3
state q4
state q5 final
trans q1 q2 addTeam {Team=1}
trans q2 q2 addPlayer {Player=1}
trans q2 q3 addTeam {Team=1}
trans q2 q4 addSolitaire {Player=1,Solitaire=1}
trans q3 q3 addPlayer {Player=1}
trans q3 q4 addChess {Player=2,Chess=2}
trans q4 q5 addBT {ProcMod=1,BT=1}
trans q4 q5 addWiFi {WiFi=3}
trans q4 q1 addProcMod {ProcMod=2}
";

    #[test]
    fn multiplayer_document_matches_the_programmatic_automaton() {
        let parsed = parse_automaton(MULTIPLAYER).unwrap();
        assert_eq!(parsed, examples::multiplayer(NumericSemiring::MaxTropical));
        let word = [
            "addTeam",
            "addSolitaire",
            "addProcMod",
            "addTeam",
            "addTeam",
            "addChess",
            "addBT",
        ];
        let w = parsed.word_weight_by_names(&word).unwrap();
        assert_eq!(
            w.to_string(),
            "{Team=3,Player=3,Solitaire=1,Chess=2,ProcMod=3,BT=1}"
        );
    }

    #[test]
    fn scalar_document_round_trips() {
        let text = "\
semiring min-tropical
alphabet a
state q1 initial={2} final={0}
state q2 initial={1} final={5}
trans q1 q1 a {2}
trans q1 q2 a {1}
trans q2 q2 a {1}
";
        let parsed = parse_automaton(text).unwrap();
        assert_eq!(parsed, examples::fig4());
        assert_eq!(parse_automaton(&serialize_automaton(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn composite_document_round_trips() {
        let a = examples::fig8();
        let text = serialize_automaton(&a);
        assert!(text.contains("semiring max-max over=ProcMod,BT,WiFi,Player; min-min over=ProcMod,BT,WiFi,Player"));
        assert!(text.contains("trans q4 q5 addBT {ProcMod=1,BT=1}|{ProcMod=1,BT=1,WiFi=0}"));
        assert_eq!(parse_automaton(&text).unwrap(), a);
    }

    #[test]
    fn undeclared_names_error_with_the_line_number() {
        let bad_feature = "\
semiring max-tropical
features Team
alphabet addTeam
state q1 initial final
trans q1 q1 addTeam {Player=1}
";
        match parse_automaton(bad_feature) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("Player"), "{msg}");
            }
            other => panic!("expected a line-5 parse error, got {other:?}"),
        }
        let bad_state = "\
semiring boolean
alphabet a
state q1 initial final
trans q1 q2 a {1}
";
        match parse_automaton(bad_state) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_transition_errors() {
        let text = "\
semiring boolean
alphabet a
state q1 initial final
trans q1 q1 a {1}
trans q1 q1 a {1}
";
        match parse_automaton(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("duplicate transition"), "{msg}");
            }
            other => panic!("expected a duplicate-transition error, got {other:?}"),
        }
    }

    #[test]
    fn config_literals() {
        let a = examples::multiplayer(NumericSemiring::MaxTropical);
        let c = parse_config(a.semiring(), "{Team=1,Player=1,Solitaire=1,WiFi=3}").unwrap();
        let Weight::Multiset(m) = &c else { panic!() };
        assert_eq!(m.get_by_name("Team").unwrap(), Fin(1));
        assert_eq!(m.get_by_name("Chess").unwrap(), Fin(0));
        let c = parse_config(a.semiring(), "{Player=inf}").unwrap();
        let Weight::Multiset(m) = &c else { panic!() };
        assert_eq!(m.get_by_name("Player").unwrap(), ExtendedCount::PosInf);
        assert!(parse_config(a.semiring(), "{Player=-inf}").is_err());
        assert!(parse_config(a.semiring(), "{Robot=1}").is_err());

        let s = examples::fig4();
        assert_eq!(parse_config(s.semiring(), "{7}").unwrap(), Weight::Scalar(Fin(7)));
        assert_eq!(parse_config(s.semiring(), "9").unwrap(), Weight::Scalar(Fin(9)));
    }

    #[test]
    fn weight_literal_defaults_follow_the_semiring() {
        let a = examples::multiplayer(NumericSemiring::MinMin);
        let w = parse_weight(a.semiring(), "{Team=1}").unwrap();
        let Weight::Multiset(m) = &w else { panic!() };
        assert_eq!(m.get_by_name("Player").unwrap(), ExtendedCount::PosInf);
        // max-tropical weights may not contain inf (it is reserved for
        // min-style zero elements).
        let a = examples::multiplayer(NumericSemiring::MaxTropical);
        assert!(parse_weight(a.semiring(), "{Team=inf}").is_err());
    }

    #[test]
    fn random_automata_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for i in 0..100 {
            let a = examples::random_automaton(&mut rng, i % 2 == 0);
            let text = serialize_automaton(&a);
            let parsed = parse_automaton(&text).unwrap_or_else(|e| {
                panic!("round-trip parse failed: {e}\n{text}");
            });
            assert_eq!(parsed, a, "document:\n{text}");
            // Serialization is canonical, so it is a fixed point.
            assert_eq!(serialize_automaton(&parsed), text);
        }
        let _ = rng.gen::<u8>();
    }
}
