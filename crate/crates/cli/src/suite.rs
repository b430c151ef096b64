//! The standard 17-configuration benchmark suite for the multiplayer-game
//! variants.
//!
//! The suite mixes easy and hard instances of both configuration-dependent
//! analyses: configurations whose non-emptiness witness is a short word,
//! configurations that prune the whole search space, universality instances
//! that fail on the first completed path, and instances whose smallest
//! counterexample hides behind a long stretch of satisfying words. Three of
//! the seventeen put a finite cap on `Player` — the feature fed by the
//! cheapest loops — which is what makes their universality counterexamples
//! expensive to reach and spreads the verdict-flip points across the
//! benchmark's range of path bounds.

/// Configuration literals over the multiplayer-game feature alphabet.
pub const STANDARD_SUITE: [&str; 17] = [
    // A WiFi-only build with one solitaire team pair; a short witness.
    "{Team=2,Player=inf,Solitaire=1,Chess=0,ProcMod=0,BT=0,WiFi=3}",
    // A Bluetooth chess build; empty on the chess-less variants.
    "{Team=2,Player=inf,Solitaire=0,Chess=2,ProcMod=1,BT=1,WiFi=0}",
    // No communication hardware at all: every run attaches some, so the
    // satisfied language is empty everywhere.
    "{Team=2,Player=inf,Solitaire=0,Chess=2}",
    // Nothing but players: the very first assembly step already exceeds it.
    "{Player=inf}",
    // Fully unconstrained; every variant satisfies every run.
    "{Team=inf,Player=inf,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
    // At most one Bluetooth link; runs attach at most one, so this holds.
    "{Team=inf,Player=inf,Solitaire=inf,Chess=inf,ProcMod=inf,BT=1,WiFi=inf}",
    // No Bluetooth at all; the first Bluetooth run violates it.
    "{Team=inf,Player=inf,Solitaire=inf,Chess=inf,ProcMod=inf,BT=0,WiFi=inf}",
    // At most two processing modules; fails wherever the module loop exists.
    "{Team=inf,Player=inf,Solitaire=inf,Chess=inf,ProcMod=2,BT=inf,WiFi=inf}",
    // At most three teams; violated a few module loops in.
    "{Team=3,Player=inf,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
    // A roomy mixed build.
    "{Team=2,Player=inf,Solitaire=2,Chess=2,ProcMod=1,BT=1,WiFi=3}",
    // A deep Bluetooth build that needs several module loops to satisfy.
    "{Team=4,Player=inf,Solitaire=2,Chess=4,ProcMod=5,BT=1,WiFi=0}",
    // Player-restricting #1: only the player count is capped, so every word
    // below the violation satisfies it and the flip arrives hundreds of
    // entries in on the richer variants.
    "{Team=inf,Player=5,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
    // Player-restricting #2: one more player roughly triples the satisfying
    // prefix of the search on the full automaton.
    "{Team=inf,Player=6,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
    // Player-restricting #3: the deepest flip point in the suite.
    "{Team=inf,Player=7,Solitaire=inf,Chess=inf,ProcMod=inf,BT=inf,WiFi=inf}",
    // The two-team baseline with both links allowed.
    "{Team=2,Player=inf,Solitaire=1,Chess=2,ProcMod=1,BT=1,WiFi=3}",
    // Generous mode and module caps, tight team cap.
    "{Team=2,Player=inf,Solitaire=3,Chess=2,ProcMod=5,BT=1,WiFi=6}",
    // Game modes forbidden entirely: empty, since every run picks one.
    "{Team=2,Player=inf,Solitaire=0,Chess=0,ProcMod=4,BT=1,WiFi=3}",
];
