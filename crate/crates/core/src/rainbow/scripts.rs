use serde::Serialize;

use super::graph::{check_consistency, subsets, ColouredGraph};
use super::palette::{Colour, Preset};

/// A `∀` move on a rainbow board.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RainbowMove {
    /// Start the game with a complete consistent graph.
    Initial(#[serde(serialize_with = "graph_json")] ColouredGraph),
    /// Drop node `drop` (if any), then add an apex joined to `base` by
    /// `g_0^tint` from `base[0]` and `g_i` from `base[i]`.
    Cone { base: Vec<usize>, tint: u8, drop: Option<usize> },
}

fn graph_json<S: serde::Serializer>(g: &ColouredGraph, s: S) -> Result<S::Ok, S::Error> {
    g.to_json().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum ScriptError {
    #[error("position not reachable under the script: {0}")]
    Unreachable(String),
    #[error("the palette has no tint with value {0}")]
    NoTint(i32),
    #[error("illegal move: {0}")]
    Illegal(String),
}

/// Apply `∀`'s move: the returned graph has the new node labelled only
/// towards the face; also returns the new node and the face.
pub fn apply_move(p: &Preset, g: Option<&ColouredGraph>, mv: &RainbowMove) -> Result<(ColouredGraph, usize, Vec<usize>), ScriptError> {
    match (mv, g) {
        (RainbowMove::Initial(start), None) => {
            check_consistency(p, start).map_err(|v| ScriptError::Illegal(format!("initial graph inconsistent: {v:?}")))?;
            Ok((start.clone(), usize::MAX, Vec::new()))
        }
        (RainbowMove::Cone { base, tint, drop }, Some(g)) => {
            let n = p.palette.n;
            if base.len() != n - 1 || base.iter().any(|&b| b >= g.node_count()) {
                return Err(ScriptError::Illegal(format!("bad base {base:?}")));
            }
            if *tint as usize >= p.palette.tints.len() {
                return Err(ScriptError::Illegal(format!("no tint {tint}")));
            }
            let mut h = g.clone();
            let mut base = base.clone();
            if let Some(d) = *drop {
                if d >= g.node_count() || base.contains(&d) {
                    return Err(ScriptError::Illegal(format!("cannot drop node {d}")));
                }
                h.remove_node(d);
                for b in &mut base {
                    if *b > d {
                        *b -= 1;
                    }
                }
            }
            let apex = h.add_node();
            h.set_edge(base[0], apex, Colour::Tint(*tint));
            for (i, &b) in base.iter().enumerate().skip(1) {
                h.set_edge(b, apex, Colour::Green(i as u8));
            }
            if let Some(mask) = h.yellow(&base) {
                if !h.has_internal_green(&base) && mask & (1 << tint) == 0 {
                    return Err(ScriptError::Illegal(format!("tint {tint} is not in the yellow on the base")));
                }
            }
            Ok((h, apex, base))
        }
        _ => Err(ScriptError::Illegal("initial move expected exactly at the start".into())),
    }
}

/// The base of `n−1` nodes joined by `w_0`, labelled by the yellow of all tints.
fn white_base(p: &Preset) -> ColouredGraph {
    let n = p.palette.n;
    let mut g = ColouredGraph::new(p.palette.red_rule, n - 1);
    for v in 0..n - 1 {
        for u in 0..v {
            g.set_edge(u, v, Colour::White(0));
        }
    }
    g.set_yellow(&(0..n - 1).collect::<Vec<_>>(), p.palette.yellow_universe());
    g
}

fn expect_base(p: &Preset, g: &ColouredGraph) -> Result<Vec<usize>, ScriptError> {
    let n = p.palette.n;
    let base: Vec<usize> = (0..n - 1).collect();
    if g.node_count() < n - 1 {
        return Err(ScriptError::Unreachable(format!("{} nodes, no base", g.node_count())));
    }
    for v in 0..n - 1 {
        for u in 0..v {
            if g.edge(u, v) != Some(Colour::White(0)) {
                return Err(ScriptError::Unreachable(format!("base edge ({u}, {v}) is not w0")));
            }
        }
    }
    if g.yellow(&base) != Some(p.palette.yellow_universe()) {
        return Err(ScriptError::Unreachable("base yellow is not the full one".into()));
    }
    Ok(base)
}

/// Drop the oldest apex when the board is full.
fn drop_oldest(p: &Preset, g: &ColouredGraph, budget: usize) -> Option<usize> {
    (g.node_count() >= budget).then_some(p.palette.n - 1)
}

/// The pigeonhole attack: a white base labelled by the yellow of every
/// tint, then an apex per round with tints `0, 1, 2, …` (cyclically),
/// replacing the oldest apex once `budget` nodes are on the board.
pub fn forall_cone_pigeonhole(p: &Preset, g: Option<&ColouredGraph>, round: usize, budget: usize) -> Result<RainbowMove, ScriptError> {
    let Some(g) = g else {
        return Ok(RainbowMove::Initial(white_base(p)));
    };
    let base = expect_base(p, g)?;
    let tints = p.palette.tints.len();
    if tints == 0 {
        return Err(ScriptError::NoTint(0));
    }
    Ok(RainbowMove::Cone {
        base,
        tint: ((round - 1) % tints) as u8,
        drop: drop_oldest(p, g, budget),
    })
}

/// The descent attack: a white base labelled by the yellow of every tint
/// with one apex of tint value 0, then apexes of tint values `−1, −2, …`,
/// replacing the oldest apex once `budget` nodes are on the board.
pub fn forall_red_descent(p: &Preset, g: Option<&ColouredGraph>, round: usize, budget: usize) -> Result<RainbowMove, ScriptError> {
    let Some(g) = g else {
        let n = p.palette.n;
        let mut start = white_base(p);
        let apex = start.add_node();
        let t0 = p.palette.tint_with_value(0).ok_or(ScriptError::NoTint(0))?;
        start.set_edge(0, apex, Colour::Tint(t0));
        for i in 1..n - 1 {
            start.set_edge(i, apex, Colour::Green(i as u8));
        }
        for set in subsets(n, n - 1) {
            if set.contains(&apex) && !start.has_internal_green(&set) {
                let mask = start.cone_tints(&set);
                start.set_yellow(&set, mask);
            }
        }
        return Ok(RainbowMove::Initial(start));
    };
    let base = expect_base(p, g)?;
    let value = -(round as i32);
    let tint = p.palette.tint_with_value(value).ok_or(ScriptError::NoTint(value))?;
    Ok(RainbowMove::Cone {
        base,
        tint,
        drop: drop_oldest(p, g, budget),
    })
}
