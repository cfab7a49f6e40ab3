use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use cylbench_core::bao::axioms::all_pass;
use cylbench_core::bao::{check_axioms, is_simple, CaAtomStructure, Mode, System};
use cylbench_core::games::{
    play, solve, verify_certificate, ExistsSide, ForallScript, ForallSide, Game, GameError, GameKind, NetworkGame, RainbowGame, Winner,
    DEFAULT_STATE_BUDGET,
};
use cylbench_core::graphs::{chromatic_number, girth, parse_dimacs, sample_high_girth_chromatic, to_dimacs, Graph, GraphError};
use cylbench_core::hyperbasis::{build_model, check_hyperbasis, check_square, search_hyperbasis, CheckMode, HyperNet, SearchOutcome};
use cylbench_core::monk::{
    basic_matrices, basic_matrices_from, build_alpha, build_m, check_cylindric_basis, check_ra_atomstructure, enumerate_matrices, pack,
    MonkError, RaAtomStructure, RaJson, DEFAULT_ATOM_BOUND,
};
use cylbench_core::qea::{build_eta, check_lemma2, eta_to_ca, DEFAULT_ETA_BOUND};
use cylbench_core::rainbow::{enumerate_atoms, forall_cone_pigeonhole, forall_red_descent, ColouredGraph, Preset, DEFAULT_RAINBOW_BOUND};

use crate::report::{Output, Status};
use crate::{BuildArgs, CheckArgs, Cli, Command, Format, GameArgs, GameChoice, Kind, ReportArgs, SampleArgs, SearchArgs, Source, Strategy, Suite};

type Result<T> = std::result::Result<T, String>;

const DEFAULT_SEARCH_BUDGET: u64 = 1_000;
const DEFAULT_SAMPLE_BUDGET: u64 = 10_000;

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Build(a) => build(cli, a),
        Command::Check(a) => check(cli, a),
        Command::Game(a) => game(cli, a),
        Command::Search(a) => search(cli, a),
        Command::SampleGraph(a) => sample_graph(cli, a),
        Command::Report(a) => report(cli, a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// A graph by name, or from a DIMACS file when the argument is a path.
fn load_graph(src: &Source) -> Result<Graph> {
    let name = src.graph.as_deref().ok_or("--graph is required")?;
    let path = Path::new(name);
    if path.is_file() {
        return parse_dimacs(&read(path)?).map_err(|e| format!("{name}: {e}"));
    }
    Graph::named(name).map_err(|e| e.to_string())
}

fn load_ras(src: &Source) -> Result<RaAtomStructure> {
    match &src.input {
        Some(path) => {
            let j: RaJson = serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            RaAtomStructure::from_json_value(&j).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => build_alpha(&load_graph(src)?, src.dim).map_err(|e| e.to_string()),
    }
}

fn preset(cli: &Cli) -> Result<Preset> {
    Preset::named(cli.preset.as_deref().unwrap_or("smooth(3)")).map_err(|e| e.to_string())
}

fn bound(cli: &Cli, default: usize) -> usize {
    cli.budget.map_or(default, |b| b as usize)
}

/// The atom structure of `kind`, or the structure JSON in `--input`.
/// `Err(Ok(report))` carries a failed relation-algebra check.
fn load_structure(cli: &Cli, kind: Kind, src: &Source) -> std::result::Result<CaAtomStructure, std::result::Result<Value, String>> {
    if let Some(path) = &src.input {
        if kind != Kind::Matn {
            let text = read(path).map_err(Err)?;
            return CaAtomStructure::from_json(&text).map_err(|e| Err(format!("{}: {e}", path.display())));
        }
    }
    match kind {
        Kind::Alpha => Err(Err("alpha is a relation-algebra structure; use `check ra`".into())),
        Kind::Matn => {
            let ras = load_ras(src).map_err(Err)?;
            basic_matrices(&ras, src.dim).map(|m| m.structure).map_err(|e| match e {
                MonkError::NotAnAtomStructure(r) => Ok(json!({ "error": "not a relation algebra atom structure", "ra": r })),
                other => Err(other.to_string()),
            })
        }
        Kind::Eta => {
            let g = load_graph(src).map_err(Err)?;
            let e = build_eta(&g, src.dim, bound(cli, DEFAULT_ETA_BOUND)).map_err(|e| Err(e.to_string()))?;
            eta_to_ca(&e).map_err(|e| Err(e.to_string()))
        }
        Kind::Rainbow => {
            let p = preset(cli).map_err(Err)?;
            enumerate_atoms(&p, bound(cli, DEFAULT_RAINBOW_BOUND)).map(|r| r.structure).map_err(|e| Err(e.to_string()))
        }
        Kind::M => {
            let g = load_graph(src).map_err(Err)?;
            build_m(&g, src.dim, bound(cli, DEFAULT_ATOM_BOUND)).map(|d| d.structure).map_err(|e| Err(e.to_string()))
        }
    }
}

fn structure_or_report(cli: &Cli, kind: Kind, src: &Source) -> Result<std::result::Result<CaAtomStructure, Output>> {
    match load_structure(cli, kind, src) {
        Ok(s) => Ok(Ok(s)),
        Err(Ok(failure)) => Ok(Err(Output::report(cli, Status::Fail, failure))),
        Err(Err(e)) => Err(e),
    }
}

fn build(cli: &Cli, a: &BuildArgs) -> Result<Output> {
    if a.format == Format::Dimacs {
        return Err("dimacs output is for sample-graph".into());
    }
    if a.kind == Kind::Alpha {
        if a.format == Format::Dot {
            return Err("dot output is for rainbow atoms".into());
        }
        let ras = load_ras(&a.source)?;
        let result = json!({ "kind": a.kind, "atoms": ras.atom_count(), "structure": ras.to_json_value() });
        return Ok(Output::report(cli, Status::Done, result));
    }
    if a.kind == Kind::Rainbow {
        let p = preset(cli)?;
        let r = enumerate_atoms(&p, bound(cli, DEFAULT_RAINBOW_BOUND)).map_err(|e| e.to_string())?;
        if a.format == Format::Dot {
            let text: String = r.atoms.iter().map(|atom| atom.graph.to_dot()).collect();
            return Ok(Output::Text(text, Status::Done));
        }
        let atoms: Vec<Value> = (0..r.atoms.len()).map(|k| r.atom_json(k)).collect();
        let result = json!({
            "kind": a.kind,
            "preset": p.name,
            "atoms": r.atoms.len(),
            "graphs": atoms,
            "structure": r.structure.to_json_value(),
        });
        return Ok(Output::report(cli, Status::Done, result));
    }
    if a.format == Format::Dot {
        return Err("dot output is for rainbow atoms".into());
    }
    let s = match structure_or_report(cli, a.kind, &a.source)? {
        Ok(s) => s,
        Err(out) => return Ok(out),
    };
    let result = json!({ "kind": a.kind, "atoms": s.atom_count(), "structure": s.to_json_value() });
    Ok(Output::report(cli, Status::Done, result))
}

fn lifted(ras: &RaAtomStructure, dim: usize) -> Result<Vec<HyperNet>> {
    if dim != 3 {
        return Err(format!("hypernetworks are 3-wide; got --dim {dim}"));
    }
    Ok(enumerate_matrices(ras, 3).iter().map(|m| HyperNet::lift(3, m)).collect())
}

fn check(cli: &Cli, a: &CheckArgs) -> Result<Output> {
    let src = &a.source;
    let mode = if a.exhaustive {
        Mode::ExhaustiveAtoms
    } else {
        Mode::Randomized { trials: a.trials, seed: cli.seed }
    };
    let (status, result) = match a.suite {
        Suite::Ra => {
            let r = check_ra_atomstructure(&load_ras(src)?);
            (Status::of(r.pass()), json!(r))
        }
        Suite::Ca | Suite::Qea => {
            let (system, default) = if a.suite == Suite::Ca { (System::CA, Kind::Matn) } else { (System::Q, Kind::Eta) };
            let s = match structure_or_report(cli, a.kind.unwrap_or(default), src)? {
                Ok(s) => s,
                Err(out) => return Ok(out),
            };
            let reports = check_axioms(&s, system, mode).map_err(|e| e.to_string())?;
            (Status::of(all_pass(&reports)), json!({ "atoms": s.atom_count(), "axioms": reports }))
        }
        Suite::Simple => {
            let s = match structure_or_report(cli, a.kind.unwrap_or(Kind::Eta), src)? {
                Ok(s) => s,
                Err(out) => return Ok(out),
            };
            let v = is_simple(&s, a.trials, cli.seed);
            (Status::of(v.simple), json!(v))
        }
        Suite::Lemma2 => {
            let e = build_eta(&load_graph(src)?, src.dim, bound(cli, DEFAULT_ETA_BOUND)).map_err(|e| e.to_string())?;
            let r = check_lemma2(&e);
            (Status::of(r.pass()), json!(r))
        }
        Suite::Basis => {
            let ras = load_ras(src)?;
            let ra = check_ra_atomstructure(&ras);
            if !ra.pass() {
                (Status::Fail, json!({ "error": "not a relation algebra atom structure", "ra": ra }))
            } else {
                let mats = basic_matrices(&ras, src.dim).map_err(|e| e.to_string())?;
                let r = check_cylindric_basis(&mats, &ras);
                (Status::of(r.pass()), json!({ "matrices": mats.len(), "basis": r }))
            }
        }
        Suite::Hyperbasis => {
            let ras = load_ras(src)?;
            let h = lifted(&ras, src.dim)?;
            let r = check_hyperbasis(&ras, &h, 1, CheckMode::Full);
            (Status::of(r.pass()), json!({ "failed": r.failed(), "report": r }))
        }
        Suite::Square => {
            let ras = load_ras(src)?;
            let h = lifted(&ras, src.dim)?;
            let run = build_model(&ras, &h, a.stages).map_err(|e| e.to_string())?;
            let square = check_square(&run.model, &ras, 3).map_err(|e| e.to_string())?;
            let unmet: Vec<usize> = (1..=a.stages).map(|s| run.unmet_from_stage(&ras, s).len()).collect();
            let result = json!({
                "nodes": run.model.node_count(),
                "stages": run.stages,
                "unmet_by_stage": unmet,
                "unresolved": run.unresolved,
                "square": square,
                "square_matches_unresolved": square.failures == run.unresolved,
            });
            (Status::of(square.pass()), result)
        }
    };
    Ok(Output::report(cli, status, result))
}

fn winner_name(w: Option<Winner>) -> Value {
    match w {
        Some(Winner::ForAll) => json!("forall"),
        Some(Winner::Exists) => json!("exists"),
        None => Value::Null,
    }
}

fn solve_and_report<G: Game>(cli: &Cli, a: &GameArgs, game: &G, script: Option<ForallScript<'_, G>>) -> Result<Output> {
    let side = || match script {
        Some(f) => ForallSide::Script(f),
        None => ForallSide::Search,
    };
    if a.rounds == 0 {
        let result = json!({ "verdict": Value::Null, "rounds": 0 });
        return Ok(Output::report(cli, Status::Done, result));
    }
    let budget = cli.budget.unwrap_or(DEFAULT_STATE_BUDGET);
    let solved = match solve(game, side(), a.rounds, budget) {
        Ok(r) => r,
        Err(GameError::Budget { states }) => {
            return Ok(Output::report(cli, Status::Exhausted, json!({ "verdict": Value::Null, "states": states })));
        }
        Err(e) => return Err(e.to_string()),
    };
    let verified = verify_certificate(game, &side(), a.rounds, &solved.certificate);
    let mut result = json!({
        "verdict": winner_name(Some(solved.winner)),
        "depth": solved.depth,
        "states": solved.states,
        "certificate_nodes": solved.certificate.nodes.len(),
        "certificate_verified": verified.is_ok(),
    });
    if a.transcript {
        let t = play(game, side(), ExistsSide::Search, a.rounds, budget).map_err(|e| e.to_string())?;
        result["transcript"] = json!(t);
    }
    let status = if verified.is_ok() { Status::Done } else { Status::Fail };
    Ok(Output::report(cli, status, result))
}

fn game(cli: &Cli, a: &GameArgs) -> Result<Output> {
    match a.game {
        GameChoice::Rainbow => {
            let p = preset(cli)?;
            let game = RainbowGame { preset: &p, node_budget: a.nodes };
            let nodes = a.nodes;
            let pigeonhole = |g: Option<&ColouredGraph>, r: usize| forall_cone_pigeonhole(&p, g, r, nodes).map_err(|e| e.to_string());
            let descent = |g: Option<&ColouredGraph>, r: usize| forall_red_descent(&p, g, r, nodes).map_err(|e| e.to_string());
            let script: Option<ForallScript<'_, RainbowGame>> = match a.forall {
                Strategy::Search => None,
                Strategy::Pigeonhole => Some(&pigeonhole),
                Strategy::Descent => Some(&descent),
            };
            solve_and_report(cli, a, &game, script)
        }
        GameChoice::Gk | GameChoice::Fm => {
            if a.forall != Strategy::Search {
                return Err("scripted strategies are for the rainbow game".into());
            }
            let ras = load_ras(&a.source)?;
            let s = basic_matrices(&ras, a.source.dim).map_err(|e| e.to_string())?.structure;
            let kind = if a.game == GameChoice::Gk { GameKind::Gk } else { GameKind::Fm };
            let game = NetworkGame::new(&s, kind, a.nodes);
            solve_and_report(cli, a, &game, None)
        }
    }
}

fn search(cli: &Cli, a: &SearchArgs) -> Result<Output> {
    let ras = load_ras(&a.source)?;
    if a.source.dim != 3 {
        return Err(format!("hypernetworks are 3-wide; got --dim {}", a.source.dim));
    }
    let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let outcome = search_hyperbasis(&ras, 3, a.lambda, a.size.unwrap_or(usize::MAX), budget);
    let (status, result) = match outcome {
        SearchOutcome::Found { basis, evaluations } => {
            let hb = check_hyperbasis(&ras, &basis, a.lambda, CheckMode::Full);
            let cylindric = if a.lambda == 1 {
                let keys = basis.iter().map(|n| pack(3, n.matrix())).collect();
                let mats = basic_matrices_from(&ras, 3, keys).map_err(|e| e.to_string())?;
                Some(check_cylindric_basis(&mats, &ras).pass())
            } else {
                None
            };
            let pass = hb.pass() && cylindric != Some(false);
            let mut result = json!({
                "outcome": "found",
                "evaluations": evaluations,
                "size": basis.len(),
                "hyperbasis": hb,
                "cylindric_basis": cylindric,
            });
            if a.emit_basis {
                result["basis"] = json!(basis);
            }
            (Status::of(pass), result)
        }
        SearchOutcome::NoneWithinBounds { candidates, evaluations } => (
            Status::Fail,
            json!({ "outcome": "none-within-bounds", "candidates": candidates, "evaluations": evaluations }),
        ),
        SearchOutcome::BudgetExhausted { evaluations } => (Status::Exhausted, json!({ "outcome": "budget-exhausted", "evaluations": evaluations })),
    };
    Ok(Output::report(cli, status, result))
}

fn sample_graph(cli: &Cli, a: &SampleArgs) -> Result<Output> {
    let budget = cli.budget.unwrap_or(DEFAULT_SAMPLE_BUDGET) as usize;
    let g = match sample_high_girth_chromatic(a.girth, a.chi, budget, cli.seed) {
        Ok(g) => g,
        Err(GraphError::Exhausted(n)) => {
            return Ok(Output::report(cli, Status::Exhausted, json!({ "attempts": n })));
        }
        Err(e) => return Err(e.to_string()),
    };
    match a.format {
        Format::Dot => Ok(Output::Text(g.to_dot(), Status::Done)),
        Format::Dimacs => Ok(Output::Text(to_dimacs(&g), Status::Done)),
        Format::Json => {
            let chi = chromatic_number(&g);
            let result = json!({
                "nodes": g.node_count(),
                "edges": g.edges().collect::<Vec<_>>(),
                "girth": girth(&g),
                "chi": chi.chi,
                "colouring": chi.witness,
            });
            Ok(Output::report(cli, Status::Done, result))
        }
    }
}

fn report(cli: &Cli, a: &ReportArgs) -> Result<Output> {
    if a.files.is_empty() {
        return Err("no report files given".into());
    }
    let mut rows = Vec::new();
    let mut overall = Status::Pass;
    for path in &a.files {
        let v: Value = serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        if v.get("schema_version").is_none() {
            return Err(format!("{}: not a cylbench report", path.display()));
        }
        let status = v["status"].as_str().unwrap_or("fail").to_string();
        match status.as_str() {
            "fail" => overall = Status::Fail,
            "exhausted" if overall != Status::Fail => overall = Status::Exhausted,
            _ => {}
        }
        rows.push(json!({
            "file": path.display().to_string(),
            "command": v["run"]["command"],
            "status": status,
        }));
    }
    Ok(Output::report(cli, overall, json!({ "reports": rows })))
}
