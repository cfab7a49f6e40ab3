use std::collections::HashMap;

use super::solve::Game;
use crate::rainbow::{all_completions, apply_move, subsets, Colour, ColouredGraph, Preset, RainbowMove, RedRule};

/// Cone moves on coloured graphs with at most `node_budget` nodes; `∃`
/// answers with every consistent labelling of the new node's edges.
pub struct RainbowGame<'a> {
    pub preset: &'a Preset,
    pub node_budget: usize,
}

impl RainbowGame<'_> {
    fn bases(&self, g: &ColouredGraph) -> Vec<Vec<usize>> {
        let n = self.preset.palette.n;
        let mut out = Vec::new();
        for set in subsets(g.node_count(), n - 1) {
            for perm in crate::combinat::permutations(n - 1) {
                out.push(perm.iter().map(|&p| set[p]).collect());
            }
        }
        out
    }
}

impl Game for RainbowGame<'_> {
    type Position = ColouredGraph;
    type Move = RainbowMove;

    /// `∀` opens with the white base; afterwards every cone over every
    /// ordered base, reusing any node outside the base when the board is full.
    fn forall_moves(&self, pos: Option<&ColouredGraph>) -> Vec<RainbowMove> {
        let Some(g) = pos else {
            let start = crate::rainbow::forall_cone_pigeonhole(self.preset, None, 0, self.node_budget);
            return start.into_iter().collect();
        };
        let full = g.node_count() >= self.node_budget;
        let mut out = Vec::new();
        for base in self.bases(g) {
            let drops: Vec<Option<usize>> = if full {
                (0..g.node_count()).filter(|d| !base.contains(d)).map(Some).collect()
            } else {
                vec![None]
            };
            for tint in 0..self.preset.palette.tints.len() as u8 {
                for &drop in &drops {
                    let mv = RainbowMove::Cone { base: base.clone(), tint, drop };
                    if apply_move(self.preset, Some(g), &mv).is_ok() {
                        out.push(mv);
                    }
                }
            }
        }
        out
    }

    fn for_each_reply(&self, pos: Option<&ColouredGraph>, mv: &RainbowMove, visit: &mut dyn FnMut(ColouredGraph) -> bool) {
        let Ok((h, apex, _)) = apply_move(self.preset, pos, mv) else { return };
        if pos.is_none() {
            visit(h);
            return;
        }
        for r in all_completions(self.preset, &h, apex) {
            if !visit(r) {
                return;
            }
        }
    }

    fn key(&self, pos: &ColouredGraph) -> Vec<u8> {
        rainbow_key(pos)
    }

    fn describe(&self, pos: &ColouredGraph) -> serde_json::Value {
        pos.to_json()
    }
}

/// Encode a coloured graph after renaming red superscripts (and, under the
/// pattern rule, red indices) in order of first occurrence.
pub fn rainbow_key(g: &ColouredGraph) -> Vec<u8> {
    let mut sups: HashMap<u8, u8> = HashMap::new();
    let mut idx: HashMap<u8, u8> = HashMap::new();
    let pattern = g.rule() == RedRule::Pattern;
    let mut out = vec![g.node_count() as u8];
    for v in 0..g.node_count() {
        for u in 0..v {
            let code = match g.edge(u, v) {
                None => [0, 0, 0, 0],
                Some(Colour::Green(i)) => [1, i, 0, 0],
                Some(Colour::Tint(t)) => [2, t, 0, 0],
                Some(Colour::White(i)) => [3, i, 0, 0],
                Some(Colour::Shade) => [4, 0, 0, 0],
                Some(Colour::Red { sup, j, k }) => {
                    let next = sups.len() as u8;
                    let s = *sups.entry(sup).or_insert(next);
                    let (mut j, mut k) = (j, k);
                    if pattern {
                        let next = idx.len() as u8;
                        j = *idx.entry(j).or_insert(next);
                        let next = idx.len() as u8;
                        k = *idx.entry(k).or_insert(next);
                        if j > k {
                            std::mem::swap(&mut j, &mut k);
                        }
                    }
                    [5, s, j, k]
                }
            };
            out.extend_from_slice(&code);
        }
    }
    for (set, mask) in g.yellows() {
        out.push(0xff);
        out.extend(set.iter().map(|&x| x as u8));
        out.extend_from_slice(&mask.to_le_bytes());
    }
    out
}
