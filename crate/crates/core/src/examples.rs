//! Shared automata for unit tests: the two-state scalar loop, the
//! multiplayer-game model in several semiring interpretations, the
//! two-transition composite fragment, and a seeded random generator for
//! round-trip and differential tests.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use crate::automaton::WeightedAutomaton;
use crate::multiset::{
    CompositeComponent, CompositeWeight, FeatureAlphabet, FeaturedMultiset, Weight, WeightSemiring,
};
use crate::semiring::{ExtendedCount, Fin, NumericSemiring};

/// The scalar min-tropical two-state automaton: q1 (initial 2, final 0) and
/// q2 (initial 1, final 5), both with an `a` self-loop, connected q1 → q2.
/// Its language is aᵏ ↦ 2k+2 for k < 5 and k+6 afterwards.
pub(crate) fn fig4() -> WeightedAutomaton {
    let mut a = WeightedAutomaton::new(WeightSemiring::Scalar(NumericSemiring::MinTropical));
    let sym = a.add_symbol("a").unwrap();
    let q1 = a.add_state("q1").unwrap();
    let q2 = a.add_state("q2").unwrap();
    a.set_initial(q1, Weight::Scalar(Fin(2))).unwrap();
    a.set_final(q1, Weight::Scalar(Fin(0))).unwrap();
    a.set_initial(q2, Weight::Scalar(Fin(1))).unwrap();
    a.set_final(q2, Weight::Scalar(Fin(5))).unwrap();
    a.add_transition(q1, sym, q1, Weight::Scalar(Fin(2))).unwrap();
    a.add_transition(q1, sym, q2, Weight::Scalar(Fin(1))).unwrap();
    a.add_transition(q2, sym, q2, Weight::Scalar(Fin(1))).unwrap();
    a
}

pub(crate) const MULTIPLAYER_FEATURES: [&str; 7] = [
    "Team",
    "Player",
    "Solitaire",
    "Chess",
    "ProcMod",
    "BT",
    "WiFi",
];

/// The multiplayer-game feature model: at least two teams of players with a
/// game mode each, optional processing modules with an optional
/// communication link, a 4..5 processing-module gap when teams are present,
/// and a 20-player cap under Bluetooth.
pub(crate) const MPG_CFM: &str = "\
feature MultiplayerGame abstract root
feature ProcMod concrete parent=MultiplayerGame card=0..*
feature Communication abstract parent=ProcMod card=0..1
feature WiFi concrete parent=Communication
feature BT concrete parent=Communication
feature Team concrete parent=MultiplayerGame card=2..*
feature Player concrete parent=Team card=1..*
feature GameMode abstract parent=Team card=1..1
feature Solitaire concrete parent=GameMode
feature Chess concrete parent=GameMode
group Communication alternative WiFi BT
group GameMode alternative Solitaire Chess
require BT 1..* -> Player 0..20
exclude Team 1..* ProcMod 4..5
";

pub(crate) fn mpg() -> crate::cfm::CardinalityFeatureModel {
    crate::cfm::parse_cfm(MPG_CFM).unwrap()
}

/// The multiplayer-game automaton interpreted in `s`, with the transitions
/// whose symbols appear in `skip` left out (the alphabet keeps them).
pub(crate) fn multiplayer_without(s: NumericSemiring, skip: &[&str]) -> WeightedAutomaton {
    let features = Arc::new(FeatureAlphabet::new(MULTIPLAYER_FEATURES).unwrap());
    let mut a = WeightedAutomaton::new(WeightSemiring::multiset(s, Arc::clone(&features)));
    for sym in [
        "addTeam",
        "addPlayer",
        "addSolitaire",
        "addChess",
        "addProcMod",
        "addBT",
        "addWiFi",
    ] {
        a.add_symbol(sym).unwrap();
    }
    for q in ["q1", "q2", "q3", "q4", "q5"] {
        a.add_state(q).unwrap();
    }
    a.mark_initial(a.state_id("q1").unwrap()).unwrap();
    a.mark_final(a.state_id("q5").unwrap()).unwrap();
    let weight = |entries: &[(&str, u64)]| {
        let mut m = FeaturedMultiset::new(Arc::clone(&features), s.one());
        for (n, v) in entries {
            m.set_by_name(n, Fin(*v)).unwrap();
        }
        Weight::Multiset(m)
    };
    let transitions: [(&str, &str, &str, &[(&str, u64)]); 9] = [
        ("q1", "q2", "addTeam", &[("Team", 1)]),
        ("q2", "q2", "addPlayer", &[("Player", 1)]),
        ("q2", "q3", "addTeam", &[("Team", 1)]),
        ("q2", "q4", "addSolitaire", &[("Player", 1), ("Solitaire", 1)]),
        ("q3", "q3", "addPlayer", &[("Player", 1)]),
        ("q3", "q4", "addChess", &[("Player", 2), ("Chess", 2)]),
        ("q4", "q5", "addBT", &[("ProcMod", 1), ("BT", 1)]),
        ("q4", "q5", "addWiFi", &[("WiFi", 3)]),
        ("q4", "q1", "addProcMod", &[("ProcMod", 2)]),
    ];
    for (from, to, sym, entries) in transitions {
        if skip.contains(&sym) {
            continue;
        }
        a.add_transition(
            a.state_id(from).unwrap(),
            a.symbol_id(sym).unwrap(),
            a.state_id(to).unwrap(),
            weight(entries),
        )
        .unwrap();
    }
    a
}

pub(crate) fn multiplayer(s: NumericSemiring) -> WeightedAutomaton {
    multiplayer_without(s, &[])
}

/// The composite (max-max lower bounds | min-min upper bounds) fragment:
/// q4 → q5 by addBT or addWiFi, the two excluding each other through their
/// upper components.
pub(crate) fn fig8() -> WeightedAutomaton {
    let features = Arc::new(FeatureAlphabet::new(["ProcMod", "BT", "WiFi", "Player"]).unwrap());
    let semiring = WeightSemiring::composite(
        vec![
            CompositeComponent {
                semiring: NumericSemiring::MaxMax,
                features: Arc::clone(&features),
            },
            CompositeComponent {
                semiring: NumericSemiring::MinMin,
                features: Arc::clone(&features),
            },
        ],
        Arc::clone(&features),
    )
    .unwrap();
    let mut a = WeightedAutomaton::new(semiring);
    let add_bt = a.add_symbol("addBT").unwrap();
    let add_wifi = a.add_symbol("addWiFi").unwrap();
    let q4 = a.add_state("q4").unwrap();
    let q5 = a.add_state("q5").unwrap();
    a.mark_initial(q4).unwrap();
    a.mark_final(q5).unwrap();
    let pair = |lower: &[(&str, u64)], upper: &[(&str, u64)]| {
        let mut lo = FeaturedMultiset::new(Arc::clone(&features), NumericSemiring::MaxMax.one());
        for (n, v) in lower {
            lo.set_by_name(n, Fin(*v)).unwrap();
        }
        let mut up = FeaturedMultiset::new(Arc::clone(&features), NumericSemiring::MinMin.one());
        for (n, v) in upper {
            up.set_by_name(n, Fin(*v)).unwrap();
        }
        Weight::Composite(CompositeWeight {
            components: vec![lo, up],
        })
    };
    a.add_transition(
        q4,
        add_bt,
        q5,
        pair(&[("ProcMod", 1), ("BT", 1)], &[("ProcMod", 1), ("BT", 1), ("WiFi", 0)]),
    )
    .unwrap();
    a.add_transition(
        q4,
        add_wifi,
        q5,
        pair(&[("WiFi", 3)], &[("WiFi", 3), ("BT", 0)]),
    )
    .unwrap();
    a
}

/// A random automaton for round-trip and differential tests: ≤ 4 states,
/// ≤ 3 symbols, finite weight entries ≤ 3. `scalar` picks the domain shape;
/// multiset mode occasionally produces composite domains.
pub(crate) fn random_automaton(rng: &mut StdRng, scalar: bool) -> WeightedAutomaton {
    let semiring = if scalar {
        WeightSemiring::Scalar(random_numeric(rng))
    } else {
        let n_features = rng.gen_range(1..=4);
        let names: Vec<String> = (0..n_features).map(|i| format!("f{i}")).collect();
        let features = Arc::new(FeatureAlphabet::new(names).unwrap());
        if rng.gen_bool(0.3) {
            let n_components = rng.gen_range(1..=2);
            let components = (0..n_components)
                .map(|_| {
                    // Each component must still cover the alphabet when it
                    // is the only one; keep it simple and use all features.
                    CompositeComponent {
                        semiring: random_numeric(rng),
                        features: Arc::clone(&features),
                    }
                })
                .collect();
            WeightSemiring::composite(components, features).unwrap()
        } else {
            WeightSemiring::multiset(random_numeric(rng), features)
        }
    };
    let mut a = WeightedAutomaton::new(semiring);
    let n_states = rng.gen_range(1..=4);
    let n_syms = rng.gen_range(1..=3);
    for i in 0..n_syms {
        a.add_symbol(format!("s{i}")).unwrap();
    }
    for i in 0..n_states {
        a.add_state(format!("q{i}")).unwrap();
    }
    for q in 0..n_states {
        if rng.gen_bool(0.6) {
            let w = random_weight(rng, a.semiring());
            a.set_initial(q, w).unwrap();
        }
        if rng.gen_bool(0.6) {
            let w = random_weight(rng, a.semiring());
            a.set_final(q, w).unwrap();
        }
        for sym in 0..n_syms {
            for to in 0..n_states {
                if rng.gen_bool(0.35) {
                    let w = random_weight(rng, a.semiring());
                    a.add_transition(q, sym, to, w).unwrap();
                }
            }
        }
    }
    a
}

fn random_numeric(rng: &mut StdRng) -> NumericSemiring {
    NumericSemiring::ALL[rng.gen_range(0..NumericSemiring::ALL.len())]
}

fn random_value(rng: &mut StdRng, s: NumericSemiring) -> ExtendedCount {
    if s == NumericSemiring::Boolean {
        Fin(rng.gen_range(0..=1))
    } else {
        Fin(rng.gen_range(0..=3))
    }
}

fn random_weight(rng: &mut StdRng, semiring: &WeightSemiring) -> Weight {
    match semiring {
        WeightSemiring::Scalar(s) => Weight::Scalar(random_value(rng, *s)),
        WeightSemiring::Multiset { semiring: s, features } => {
            Weight::Multiset(random_multiset(rng, *s, features))
        }
        WeightSemiring::Composite { components, .. } => Weight::Composite(CompositeWeight {
            components: components
                .iter()
                .map(|c| random_multiset(rng, c.semiring, &c.features))
                .collect(),
        }),
    }
}

fn random_multiset(
    rng: &mut StdRng,
    s: NumericSemiring,
    features: &Arc<FeatureAlphabet>,
) -> FeaturedMultiset {
    let mut m = FeaturedMultiset::new(Arc::clone(features), s.one());
    for i in 0..features.len() {
        if rng.gen_bool(0.6) {
            m.set(i, random_value(rng, s));
        }
    }
    m
}
