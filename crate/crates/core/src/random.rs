//! Seeded random automata for self-tests and benchmarks.
//!
//! Each instance is drawn from its own ChaCha stream keyed by
//! `(seed, class, index)`, so instances do not depend on generation order or
//! thread scheduling. Distribution: `n` uniform in `1..=max_n`, one atomic
//! proposition (two letters), initial state 0; every `(q, a, q')` triple is a
//! transition with probability `density ∈ [0.35, 0.65]`, and each
//! transition carries each colour with probability `p ∈ [0.3, 0.6]`, or
//! `p ∈ [0.05, 0.25]` for colours that occur under a `Fin` (all drawn per
//! instance). The lower `Fin` rate keeps most Rabin-like instances from
//! having an empty language.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acceptance::AcceptanceFormula as F;
use crate::error::{Error, Result};
use crate::sets::Colour;
use crate::tela::{Symbol, Tela, Transition};

/// Acceptance families the generator can draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomClass {
    Ba,
    Cba,
    Gba,
    Gcba,
    Rabin,
    Parity,
    GenRabin,
    El,
}

impl RandomClass {
    pub const ALL: [RandomClass; 8] = [
        RandomClass::Ba,
        RandomClass::Cba,
        RandomClass::Gba,
        RandomClass::Gcba,
        RandomClass::Rabin,
        RandomClass::Parity,
        RandomClass::GenRabin,
        RandomClass::El,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomClass::Ba => "ba",
            RandomClass::Cba => "cba",
            RandomClass::Gba => "gba",
            RandomClass::Gcba => "gcba",
            RandomClass::Rabin => "rabin",
            RandomClass::Parity => "parity",
            RandomClass::GenRabin => "genrabin",
            RandomClass::El => "el",
        }
    }

    fn stream_id(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for RandomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RandomClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RandomClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown class `{s}` (expected one of ba, cba, gba, gcba, rabin, parity, genrabin, el)")))
    }
}

/// Size limits for generated automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_states: usize,
    pub num_aps: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_states: 4, num_aps: 1 }
    }
}

fn rng_for(seed: u64, class: RandomClass, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((class.stream_id() << 40) ^ index);
    rng
}

/// The `index`-th random automaton of `class` under `seed`.
pub fn random_automaton(seed: u64, class: RandomClass, index: u64, params: GenParams) -> Result<Tela> {
    let mut rng = rng_for(seed, class, index);
    let (k, alpha) = random_condition(&mut rng, class);
    let n = rng.random_range(1..=params.max_states.max(1));
    let symbols = 1usize << params.num_aps;
    let density = rng.random_range(0.35..=0.65);
    let colour_p = rng.random_range(0.3..=0.6);
    let fin_p = rng.random_range(0.05..=0.25);
    let fin = alpha.fin_colours();
    let rate: Vec<f64> = (0..k).map(|c| if fin.contains(c) { fin_p } else { colour_p }).collect();
    let mut transitions = Vec::new();
    for q in 0..n as u32 {
        for a in 0..symbols as Symbol {
            for q2 in 0..n as u32 {
                if rng.random_bool(density) {
                    let colours: Vec<Colour> = (0..k).filter(|&c| rng.random_bool(rate[c as usize])).collect();
                    transitions.push(Transition::new(q, a, q2, colours));
                }
            }
        }
    }
    Ok(Tela::new(Tela::aps_named(params.num_aps), n, [0], k, alpha, transitions)?
        .with_name(format!("{class}-{seed}-{index}")))
}

fn random_condition(rng: &mut ChaCha8Rng, class: RandomClass) -> (u32, F) {
    match class {
        RandomClass::Ba => (1, F::Inf(0)),
        RandomClass::Cba => (1, F::Fin(0)),
        RandomClass::Gba => {
            let k = rng.random_range(1..=3);
            (k, F::generalized_buchi(k))
        }
        RandomClass::Gcba => {
            let k = rng.random_range(1..=3);
            (k, F::or((0..k).map(F::Fin)))
        }
        RandomClass::Rabin => {
            let pairs = rng.random_range(1..=2);
            (2 * pairs, F::or((0..pairs).map(|j| F::and([F::Fin(2 * j), F::Inf(2 * j + 1)]))))
        }
        RandomClass::Parity => {
            let k = rng.random_range(2..=4);
            (k, F::parity_min_odd(k))
        }
        RandomClass::GenRabin => {
            let pairs = rng.random_range(1..=2);
            let mut next = 0;
            let mut clauses = Vec::new();
            for _ in 0..pairs {
                let l = rng.random_range(1..=2);
                let mut atoms = vec![F::Fin(next)];
                atoms.extend((next + 1..=next + l).map(F::Inf));
                next += l + 1;
                clauses.push(F::and(atoms));
            }
            (next, F::or(clauses))
        }
        RandomClass::El => {
            let k = rng.random_range(1..=3);
            (k, random_formula(rng, k, 3))
        }
    }
}

fn random_formula(rng: &mut ChaCha8Rng, k: u32, depth: u32) -> F {
    if depth == 0 || rng.random_bool(0.3) {
        let c = rng.random_range(0..k);
        return if rng.random_bool(0.5) { F::Fin(c) } else { F::Inf(c) };
    }
    let width = rng.random_range(2..=3);
    let children: Vec<F> = (0..width).map(|_| random_formula(rng, k, depth - 1)).collect();
    if rng.random_bool(0.5) {
        F::and(children)
    } else {
        F::or(children)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AccClass;

    #[test]
    fn reproducible_and_order_independent() {
        let p = GenParams::default();
        let a = random_automaton(7, RandomClass::El, 3, p).unwrap();
        let _ = random_automaton(7, RandomClass::El, 2, p).unwrap();
        let b = random_automaton(7, RandomClass::El, 3, p).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        let c = random_automaton(8, RandomClass::El, 3, p).unwrap();
        let d = random_automaton(7, RandomClass::El, 4, p).unwrap();
        assert!(a.to_string() != c.to_string() || a.to_string() != d.to_string());
    }

    #[test]
    fn classes_have_the_expected_shape() {
        let p = GenParams::default();
        for i in 0..40 {
            let class_of = |c| random_automaton(1, c, i, p).unwrap().acceptance().classify();
            assert_eq!(class_of(RandomClass::Ba), AccClass::Buchi);
            assert_eq!(class_of(RandomClass::Cba), AccClass::CoBuchi);
            assert!(matches!(class_of(RandomClass::Gba), AccClass::Gba | AccClass::Buchi));
            assert!(matches!(class_of(RandomClass::Gcba), AccClass::Gcba | AccClass::CoBuchi));
            assert_eq!(class_of(RandomClass::Rabin), AccClass::Rabin);
            assert!(matches!(class_of(RandomClass::GenRabin), AccClass::GenRabin | AccClass::Rabin));
            let a = random_automaton(1, RandomClass::Parity, i, p).unwrap();
            assert!(a.num_states() <= 4 && a.num_colours() <= 4 && a.num_symbols() == 2);
        }
    }

    #[test]
    fn class_names_parse() {
        for c in RandomClass::ALL {
            assert_eq!(c.name().parse::<RandomClass>().unwrap(), c);
        }
        assert!("nope".parse::<RandomClass>().is_err());
    }
}
