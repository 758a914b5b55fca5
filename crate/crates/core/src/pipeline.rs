//! Choosing a construction for an input automaton and reporting sizes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::acceptance::{to_gen_rabin, AccClass};
use crate::compl_inf::{complement_inf, complement_valid, q2_space, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::modular::{complement_rabin, complement_tela, mod_compl, universal, SubTrue};
use crate::ranking::count_tight;
use crate::tela::Tela;
use crate::transform::{degeneralize, fin_removal, reduce_inf};

/// Which construction [`dispatch`] uses.
///
/// `Auto` picks by class, most specific first: Inf-only conditions (Büchi,
/// generalized Büchi) go to the rank-based Inf construction; co-Büchi to the
/// breakpoint construction; Rabin to one rank-based modular complement per
/// pair; everything else (generalized co-Büchi, parity, generalized Rabin,
/// arbitrary conditions) through the DNF.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Auto,
    Inf,
    Modular,
    FinRemoval,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "inf" => Ok(Backend::Inf),
            "modular" => Ok(Backend::Modular),
            "fin-removal" => Ok(Backend::FinRemoval),
            _ => Err(Error::Usage(format!("unknown backend `{s}` (expected auto, inf, modular or fin-removal)"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Auto => "auto",
            Backend::Inf => "inf",
            Backend::Modular => "modular",
            Backend::FinRemoval => "fin-removal",
        })
    }
}

/// Generalized Büchi output, or Büchi after degeneralisation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputForm {
    #[default]
    Gba,
    Ba,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplementOptions {
    pub backend: Backend,
    pub output: OutputForm,
    pub budget: usize,
    /// Prune useless states and merge bisimilar ones in the result.
    pub reduce: bool,
    /// Seed for the randomized commands; unused by [`dispatch`].
    pub seed: u64,
}

impl Default for ComplementOptions {
    fn default() -> Self {
        ComplementOptions { backend: Backend::Auto, output: OutputForm::Gba, budget: DEFAULT_BUDGET, reduce: true, seed: 1 }
    }
}

impl ComplementOptions {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Usage("budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// The construction actually used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// The condition is unsatisfiable: the complement accepts everything.
    Universal,
    /// The condition always holds: accept words without infinite runs.
    NoInfiniteRun,
    Inf,
    CoBuchi,
    Rabin,
    Dnf,
    FinRemoval,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Universal => "universal",
            Route::NoInfiniteRun => "no-infinite-run",
            Route::Inf => "inf",
            Route::CoBuchi => "co-buchi",
            Route::Rabin => "rabin",
            Route::Dnf => "dnf",
            Route::FinRemoval => "fin-removal",
        })
    }
}

/// A named theoretical figure evaluated for the input; `None` on overflow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub name: String,
    pub value: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub class: AccClass,
    pub route: Route,
    pub input_states: usize,
    pub input_colours: u32,
    pub output_states: usize,
    pub output_colours: u32,
    pub output_transitions: usize,
    /// States of the generalized Büchi automaton built by Fin removal.
    pub intermediate_states: Option<usize>,
    /// `|Q₁ ∪ Q₂|` for the Inf construction on at most three states.
    pub state_space: Option<usize>,
    pub bounds: Vec<Bound>,
}

impl SizeReport {
    /// Exactly checkable size facts that fail for this run.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.input_states;
        if self.route == Route::CoBuchi {
            let cap = 3u128.checked_pow(n as u32);
            if cap.is_some_and(|c| (self.output_states as u128) > c) {
                out.push(format!("{} states exceed 3^{n}", self.output_states));
            }
        }
        if let Some(space) = self.state_space {
            if self.output_states > space {
                out.push(format!("{} states exceed the {space}-element macrostate space", self.output_states));
            }
        }
        if let Some(g) = self.intermediate_states {
            let want = self.bounds.iter().find(|b| b.name == "n(k+1)").and_then(|b| b.value);
            if want != Some(g as u128) {
                out.push(format!("intermediate automaton has {g} states, expected {want:?}"));
            }
        }
        out
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class: {}", self.class)?;
        writeln!(f, "route: {}", self.route)?;
        writeln!(f, "input: {} states, {} colours", self.input_states, self.input_colours)?;
        writeln!(
            f,
            "output: {} states, {} colours, {} transitions",
            self.output_states, self.output_colours, self.output_transitions
        )?;
        if let Some(g) = self.intermediate_states {
            writeln!(f, "intermediate: {g} states")?;
        }
        if let Some(s) = self.state_space {
            writeln!(f, "macrostate space: {s}")?;
        }
        for b in &self.bounds {
            match b.value {
                Some(v) => writeln!(f, "bound {}: {v}", b.name)?,
                None => writeln!(f, "bound {}: overflow", b.name)?,
            }
        }
        Ok(())
    }
}

fn bound(name: &str, value: Option<u128>) -> Bound {
    Bound { name: name.to_string(), value }
}

/// Conditions with more colours than this skip the validity pre-check.
const VALIDITY_CHECK_COLOURS: usize = 16;

fn is_valid_condition(aut: &Tela) -> bool {
    let alpha = aut.acceptance();
    alpha.colours().len() <= VALIDITY_CHECK_COLOURS && alpha.minimal_models(aut.num_colours()).is_empty()
}

/// Complements `aut` according to `opts`.
pub fn dispatch(aut: &Tela, opts: &ComplementOptions) -> Result<(Tela, SizeReport)> {
    opts.validate()?;
    let budget = opts.budget;
    let alpha = aut.acceptance();
    let class = alpha.classify();
    let n = aut.num_states();
    let k = aut.num_colours();
    let mut intermediate = None;
    let mut state_space = None;
    let (route, complement) = if alpha.dnf().is_empty() {
        (Route::Universal, universal(aut)?)
    } else if is_valid_condition(aut) {
        (Route::NoInfiniteRun, complement_valid(aut, budget)?)
    } else {
        let backend = match opts.backend {
            Backend::Auto => match class {
                AccClass::Buchi | AccClass::Gba | AccClass::InfOnly => Backend::Inf,
                _ => Backend::Auto,
            },
            b => b,
        };
        match backend {
            Backend::Inf => {
                if alpha.has_fin() {
                    return Err(Error::Unsupported {
                        code: "backend",
                        message: format!("the inf backend needs an Inf-only condition, got {alpha}"),
                    });
                }
                if n <= 3 {
                    state_space = Some((1usize << n) + q2_space(aut)?.len());
                }
                (Route::Inf, complement_inf(aut, budget)?.automaton)
            }
            Backend::Modular => (Route::Dnf, complement_tela(aut, budget)?),
            Backend::FinRemoval => {
                let (rewritten, pairs) = to_gen_rabin(aut)?;
                let g = fin_removal(&rewritten, &pairs)?;
                intermediate = Some(g.num_states());
                let g = if opts.reduce { reduce_inf(&g)? } else { g };
                (Route::FinRemoval, complement_inf(&g, budget)?.automaton)
            }
            Backend::Auto => match class {
                AccClass::CoBuchi => {
                    let c = alpha.fin_colours().iter().next().expect("co-Büchi has a Fin colour");
                    (Route::CoBuchi, mod_compl(&SubTrue, aut, c, budget)?.automaton)
                }
                AccClass::Rabin => (Route::Rabin, complement_rabin(aut, budget)?),
                _ => (Route::Dnf, complement_tela(aut, budget)?),
            },
        }
    };
    let complement = if opts.reduce { reduce_inf(&complement)? } else { complement };
    let complement = match opts.output {
        OutputForm::Gba => complement,
        OutputForm::Ba => degeneralize(&complement)?,
    };
    let clauses = to_gen_rabin(aut)?.1.len();
    let tight = count_tight(n as u32 + 1).ok();
    let mut bounds = vec![bound("3^n", 3u128.checked_pow(n as u32)), bound("tight(n+1)", tight)];
    if intermediate.is_some() {
        bounds.push(bound("n(k+1)", (n as u128).checked_mul(clauses as u128 + 1)));
    }
    bounds.push(bound(
        "tight(n+1)^pairs",
        tight.and_then(|t| t.checked_pow(clauses as u32)),
    ));
    let report = SizeReport {
        class,
        route,
        input_states: n,
        input_colours: k,
        output_states: complement.num_states(),
        output_colours: complement.num_colours(),
        output_transitions: complement.num_transitions(),
        intermediate_states: intermediate,
        state_space,
        bounds,
    };
    Ok((complement, report))
}
