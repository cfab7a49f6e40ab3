//! Equational axiom systems and a randomized / exhaustive checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::atomset::AtomSet;
use super::structure::{CaAtomStructure, Kind};
use super::term::{parse_statement, Statement, INDICES};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_TRIALS: usize = 10_000;
/// Per index instantiation, the exhaustive pass enumerates at most this many
/// variable assignments before switching to a seeded sample of the pool.
pub const EXHAUSTIVE_LIMIT: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    Df,
    Sc,
    CA,
    Q,
}

impl System {
    pub fn required_kind(self) -> Kind {
        match self {
            System::Df => Kind::Df,
            System::Sc => Kind::Sc,
            System::CA => Kind::CA,
            System::Q => Kind::PEA,
        }
    }

    pub fn parse(name: &str) -> Option<System> {
        match name.to_ascii_lowercase().as_str() {
            "df" => Some(System::Df),
            "sc" => Some(System::Sc),
            "ca" | "ca_n" => Some(System::CA),
            "q" | "qea" => Some(System::Q),
            _ => None,
        }
    }
}

/// One row of the axiom table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AxiomSpec {
    pub id: String,
    pub systems: Vec<System>,
    pub statement: String,
    /// Pairs of index symbols that must take different values.
    pub distinct: Vec<(char, char)>,
    pub note: String,
}

const NE_IJ: &[(char, char)] = &[('i', 'j')];
const NE_K: &[(char, char)] = &[('k', 'i'), ('k', 'j')];
const NE_ALL: &[(char, char)] = &[('i', 'j'), ('k', 'i'), ('k', 'j')];

fn row(id: &str, systems: &[System], statement: &str, distinct: &[(char, char)], note: &str) -> AxiomSpec {
    AxiomSpec {
        id: id.into(),
        systems: systems.to_vec(),
        statement: statement.into(),
        distinct: distinct.to_vec(),
        note: note.into(),
    }
}

/// The shipped axiom table. The Q rows are a reconstruction of the
/// quasi-polyadic equality laws used for the graph algebras; see `docs/axioms.md`.
pub fn axiom_table() -> Vec<AxiomSpec> {
    use System::*;
    vec![
        row("C1", &[Df, Sc, CA], "c(i, 0) = 0", &[], "normality"),
        row("C2", &[Df, Sc, CA], "x <= c(i, x)", &[], "extensivity"),
        row("C3", &[Df, Sc, CA], "c(i, meet(x, c(i, y))) = meet(c(i, x), c(i, y))", &[], "quasi-multiplicativity"),
        row("C4", &[Df, Sc, CA], "c(i, c(j, x)) = c(j, c(i, x))", &[], "commutativity"),
        row("ADD", &[Df, Sc, CA], "c(i, join(x, y)) = join(c(i, x), c(i, y))", &[], "additivity"),
        row("C5", &[CA], "d(i, i) = 1", &[], ""),
        row("C6", &[CA], "d(i, j) = c(k, meet(d(i, k), d(k, j)))", NE_K, ""),
        row("C7", &[CA], "meet(c(i, meet(d(i, j), x)), c(i, meet(d(i, j), neg(x)))) = 0", NE_IJ, ""),
        row("DSYM", &[CA], "d(i, j) = d(j, i)", &[], "derivable"),
        row("S1", &[Sc], "sub(i, i, x) = x", &[], ""),
        row("S2", &[Sc], "sub(i, j, join(x, y)) = join(sub(i, j, x), sub(i, j, y))", &[], ""),
        row("S3", &[Sc], "sub(i, j, neg(x)) = neg(sub(i, j, x))", &[], ""),
        row("S4", &[Sc], "sub(i, j, c(i, x)) = c(i, x)", NE_IJ, ""),
        row("S5", &[Sc], "c(i, sub(i, j, x)) = sub(i, j, x)", NE_IJ, ""),
        row("S6", &[Sc], "sub(i, j, c(k, x)) = c(k, sub(i, j, x))", NE_K, ""),
        row("S7", &[Sc], "c(i, sub(j, i, x)) = c(j, sub(i, j, x))", NE_IJ, ""),
        row("Q1a", &[Q], "sub(i, i, x) = x", &[], "trivial replacement"),
        row("Q1b", &[Q], "swap(i, i, x) = x", &[], "trivial transposition"),
        row("Q1c", &[Q], "swap(i, j, x) = swap(j, i, x)", &[], "transposition symmetric in its indices"),
        row("Q2", &[Q], "x <= c(i, x)", &[], ""),
        row("Q3", &[Q], "c(i, join(x, y)) = join(c(i, x), c(i, y))", &[], ""),
        row("Q4", &[Q], "sub(i, j, c(i, x)) = c(i, x)", NE_IJ, ""),
        row("Q5", &[Q], "c(i, sub(i, j, x)) = sub(i, j, x)", NE_IJ, ""),
        row("Q6", &[Q], "sub(i, j, c(k, x)) = c(k, sub(i, j, x))", NE_K, ""),
        row("Q7a", &[Q], "swap(i, j, join(x, y)) = join(swap(i, j, x), swap(i, j, y))", &[], ""),
        row("Q7b", &[Q], "swap(i, j, neg(x)) = neg(swap(i, j, x))", &[], ""),
        row("Q7c", &[Q], "sub(i, j, join(x, y)) = join(sub(i, j, x), sub(i, j, y))", &[], ""),
        row("Q7d", &[Q], "sub(i, j, neg(x)) = neg(sub(i, j, x))", &[], ""),
        row("Q8", &[Q], "swap(i, j, swap(i, j, x)) = x", &[], ""),
        row("Q9", &[Q], "swap(i, j, sub(i, j, x)) = sub(j, i, x)", NE_IJ, ""),
        row("Q10", &[Q], "swap(i, j, swap(i, k, x)) = swap(j, k, swap(i, j, x))", NE_ALL, ""),
        row("Q11a", &[Q], "sub(i, j, d(i, j)) = 1", NE_IJ, ""),
        row("Q11b", &[Q], "meet(x, d(i, j)) <= sub(i, j, x)", NE_IJ, ""),
    ]
}

pub fn axioms_for(system: System) -> Vec<AxiomSpec> {
    axiom_table().into_iter().filter(|a| a.systems.contains(&system)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    ExhaustiveAtoms,
    Randomized { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub indices: Vec<usize>,
    pub sets: Vec<AtomSet>,
    pub lhs: AtomSet,
    pub rhs: AtomSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub statement: String,
    pub status: Status,
    pub trials: usize,
    pub seed: u64,
    /// False when the exhaustive pass had to sample part of the pool.
    pub complete: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AxiomError {
    #[error("structure of kind {have:?} cannot interpret system {system:?}")]
    Signature { have: Kind, system: System },
    #[error("bad axiom row {0}: {1}")]
    Table(String, String),
}

struct Compiled {
    spec: AxiomSpec,
    statement: Statement,
    instantiations: Vec<Vec<usize>>,
    vars: usize,
}

fn compile(spec: &AxiomSpec, n: usize) -> Result<Compiled, AxiomError> {
    let statement = parse_statement(&spec.statement).map_err(|e| AxiomError::Table(spec.id.clone(), e.0))?;
    let k = statement
        .lhs
        .index_count()
        .max(statement.rhs.index_count())
        .max(spec.distinct.iter().map(|&(a, b)| ix_of(a).max(ix_of(b)) + 1).max().unwrap_or(0));
    let vars = statement.lhs.var_count().max(statement.rhs.var_count());
    let mut instantiations = Vec::new();
    let mut cur = vec![0usize; k];
    loop {
        if spec.distinct.iter().all(|&(a, b)| cur[ix_of(a)] != cur[ix_of(b)]) {
            instantiations.push(cur.clone());
        }
        // odometer over n^k
        let mut p = 0;
        loop {
            if p == k {
                return Ok(Compiled {
                    spec: spec.clone(),
                    statement,
                    instantiations,
                    vars,
                });
            }
            cur[p] += 1;
            if cur[p] < n {
                break;
            }
            cur[p] = 0;
            p += 1;
        }
    }
}

fn ix_of(c: char) -> usize {
    INDICES.iter().position(|&x| x == c).expect("index symbol")
}

impl Compiled {
    fn violation(&self, s: &CaAtomStructure, ix: &[usize], sets: &[AtomSet]) -> Option<Counterexample> {
        let lhs = self.statement.lhs.eval(s, ix, sets);
        let rhs = self.statement.rhs.eval(s, ix, sets);
        let holds = if self.statement.inclusion { lhs.is_subset(&rhs) } else { lhs == rhs };
        (!holds).then(|| Counterexample {
            indices: ix.to_vec(),
            sets: sets.to_vec(),
            lhs,
            rhs,
        })
    }
}

/// Deterministic per-trial generator, independent of scheduling.
fn trial_rng(seed: u64, axiom: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(axiom as u64 + 1);
    rng.set_word_pos(trial as u128 * 1024);
    let base: u64 = rng.gen();
    ChaCha8Rng::seed_from_u64(base ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A random set whose density is itself random, so that sparse sets,
/// near-singletons and half-full sets are all exercised.
pub fn random_set(rng: &mut ChaCha8Rng, universe: usize) -> AtomSet {
    let density = match rng.gen_range(0..4) {
        0 => 0.5,
        1 => 0.25,
        2 => 0.05,
        _ => (2.0 / universe as f64).min(1.0),
    };
    AtomSet::from_atoms(universe, (0..universe as u32).filter(|_| rng.gen_bool(density)))
}

fn check_one(s: &CaAtomStructure, idx: usize, c: &Compiled, mode: Mode) -> AxiomReport {
    let universe = s.atom_count();
    let (status, trials, seed, complete, cex) = match mode {
        Mode::Randomized { trials, seed } => {
            let cex = (0..trials).into_par_iter().find_map_first(|t| {
                let mut rng = trial_rng(seed, idx, t);
                let ix = &c.instantiations[rng.gen_range(0..c.instantiations.len())];
                let sets: Vec<AtomSet> = (0..c.vars).map(|_| random_set(&mut rng, universe)).collect();
                c.violation(s, ix, &sets)
            });
            (cex.is_none(), trials, seed, true, cex)
        }
        Mode::ExhaustiveAtoms => {
            // pool: singletons and their complements, i.e. Boolean depth one over atoms
            let mut pool: Vec<AtomSet> = Vec::with_capacity(2 * universe);
            for a in 0..universe as u32 {
                let single = AtomSet::singleton(universe, a);
                pool.push(single.complement());
                pool.push(single);
            }
            let total = pool.len().saturating_pow(c.vars as u32);
            let complete = total <= EXHAUSTIVE_LIMIT;
            let per_inst = total.min(EXHAUSTIVE_LIMIT);
            let jobs: Vec<(usize, usize)> = (0..c.instantiations.len())
                .flat_map(|i| (0..per_inst).map(move |t| (i, t)))
                .collect();
            let cex = jobs.par_iter().find_map_first(|&(i, t)| {
                let sets: Vec<AtomSet> = if complete {
                    let mut rest = t;
                    (0..c.vars)
                        .map(|_| {
                            let v = rest % pool.len();
                            rest /= pool.len();
                            pool[v].clone()
                        })
                        .collect()
                } else {
                    // the first variable still walks the pool; the others are drawn
                    let mut rng = trial_rng(DEFAULT_SEED, idx, i * per_inst + t);
                    (0..c.vars)
                        .map(|v| {
                            if v == 0 {
                                pool[t % pool.len()].clone()
                            } else {
                                pool[rng.gen_range(0..pool.len())].clone()
                            }
                        })
                        .collect()
                };
                c.violation(s, &c.instantiations[i], &sets)
            });
            (cex.is_none(), jobs.len(), DEFAULT_SEED, complete, cex)
        }
    };
    AxiomReport {
        axiom: c.spec.id.clone(),
        statement: c.spec.statement.clone(),
        status: if status { Status::Pass } else { Status::Fail },
        trials,
        seed,
        complete,
        counterexample: cex,
    }
}

/// Check every equation of `system` on the complex algebra of `s`.
pub fn check_axioms(s: &CaAtomStructure, system: System, mode: Mode) -> Result<Vec<AxiomReport>, AxiomError> {
    if !s.kind().covers(system.required_kind()) {
        return Err(AxiomError::Signature { have: s.kind(), system });
    }
    let compiled = axioms_for(system)
        .iter()
        .map(|a| compile(a, s.dim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compiled
        .iter()
        .enumerate()
        .map(|(idx, c)| check_one(s, idx, c, mode))
        .collect())
}

/// Re-evaluate a reported counterexample; true iff the violation is genuine.
pub fn replay(s: &CaAtomStructure, axiom: &str, cex: &Counterexample) -> Result<bool, AxiomError> {
    let spec = axiom_table()
        .into_iter()
        .find(|a| a.id == axiom)
        .ok_or_else(|| AxiomError::Table(axiom.into(), "unknown axiom".into()))?;
    let c = compile(&spec, s.dim())?;
    if !c.instantiations.contains(&cex.indices) || cex.sets.len() != c.vars {
        return Ok(false);
    }
    Ok(c.violation(s, &cex.indices, &cex.sets).is_some())
}

pub fn all_pass(reports: &[AxiomReport]) -> bool {
    reports.iter().all(|r| r.status == Status::Pass)
}
