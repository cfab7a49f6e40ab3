use std::collections::HashMap;

use rayon::prelude::*;

use super::graph::{subsets, triangle_allowed, ColouredGraph};
use super::palette::{Colour, Preset};
use super::RainbowError;
use crate::bao::{AtomSet, CaAtomStructure, Kind, Relation, Replacement, Signature};
use crate::combinat::{block_count, canonical_rgs, set_partitions};

pub const DEFAULT_RAINBOW_BOUND: usize = 50_000;

/// A surjection from the `n` coordinates onto a consistent coloured graph,
/// named by its restricted growth string: coordinate `i` goes to node
/// `partition[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RainbowAtom {
    pub partition: Vec<u8>,
    pub graph: ColouredGraph,
}

impl RainbowAtom {
    /// The atom read through `order`: coordinate `p` of the result is
    /// coordinate `order[p]` here.
    pub fn reindex(&self, order: &[usize]) -> RainbowAtom {
        let raw: Vec<u8> = order.iter().map(|&p| self.partition[p]).collect();
        let partition = canonical_rgs(&raw);
        let mut nodes = vec![0usize; block_count(&partition)];
        for (p, &b) in partition.iter().enumerate() {
            nodes[b as usize] = raw[p] as usize;
        }
        RainbowAtom {
            partition,
            graph: self.graph.induced(&nodes),
        }
    }

    /// What the coordinates other than `i` see: their equality pattern, the
    /// colours between them and the yellow on them when they are distinct.
    fn key_without(&self, i: usize, n: usize) -> (Vec<u8>, Vec<Option<Colour>>, Option<u32>) {
        let rest: Vec<usize> = (0..n).filter(|&p| p != i).collect();
        let pattern = canonical_rgs(&rest.iter().map(|&p| self.partition[p]).collect::<Vec<_>>());
        let mut colours = Vec::new();
        for (a, &p) in rest.iter().enumerate() {
            for &q in &rest[a + 1..] {
                let (u, v) = (self.partition[p] as usize, self.partition[q] as usize);
                colours.push((u != v).then(|| self.graph.edge(u, v).expect("complete")));
            }
        }
        let nodes: Vec<usize> = rest.iter().map(|&p| self.partition[p] as usize).collect();
        let yellow = if block_count(&pattern) == n - 1 { self.graph.yellow(&nodes) } else { None };
        (pattern, colours, yellow)
    }
}

#[derive(Clone, Debug)]
pub struct RainbowStructure {
    pub preset: Preset,
    pub atoms: Vec<RainbowAtom>,
    pub structure: CaAtomStructure,
}

impl RainbowStructure {
    pub fn index_of(&self, a: &RainbowAtom) -> Option<u32> {
        self.atoms.binary_search(a).ok().map(|k| k as u32)
    }

    pub fn atom_json(&self, k: usize) -> serde_json::Value {
        let a = &self.atoms[k];
        serde_json::json!({"id": k, "partition": a.partition, "graph": a.graph.to_json()})
    }
}

/// Edge colourings of the complete graph on `k` nodes with no forbidden
/// triangle, in slot order `(0,1), (0,2), (1,2), (0,3), …`.
fn for_each_skeleton(p: &Preset, k: usize, visit: &mut dyn FnMut(&ColouredGraph)) {
    let colours = p.palette.colours();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    fn go(p: &Preset, colours: &[Colour], pairs: &[(usize, usize)], g: &mut ColouredGraph, at: usize, visit: &mut dyn FnMut(&ColouredGraph)) {
        let Some(&(u, v)) = pairs.get(at) else {
            visit(g);
            return;
        };
        for &c in colours {
            g.set_edge(u, v, c);
            // the new edge closes the triangles (x, u, v) for x < u
            let ok = (0..u).all(|x| triangle_allowed(p, g.edge(x, u).expect("set"), c, g.edge(x, v).expect("set")));
            if ok {
                go(p, colours, pairs, g, at + 1, visit);
            }
        }
        g.clear_edge(u, v);
    }
    let mut g = ColouredGraph::new(p.palette.red_rule, k);
    go(p, &colours, &pairs, &mut g, 0, visit);
}

/// For each `(n−1)`-set needing a yellow, the tints its cones force.
fn yellow_demands(p: &Preset, g: &ColouredGraph) -> Vec<(Vec<usize>, u32)> {
    subsets(g.node_count(), p.palette.n - 1)
        .into_iter()
        .filter(|b| !g.has_internal_green(b))
        .map(|b| {
            let req = g.cone_tints(&b);
            (b, req)
        })
        .collect()
}

/// All masks `S` with `req ⊆ S ⊆ universe`, ascending.
fn supersets(req: u32, universe: u32) -> Vec<u32> {
    let free = universe & !req;
    let mut out = Vec::new();
    let mut sub = free;
    loop {
        out.push(req | sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    out.sort_unstable();
    out
}

/// The number of atoms, without building them.
pub fn count_atoms(p: &Preset) -> u128 {
    let n = p.palette.n;
    let universe = p.palette.yellow_universe();
    let mut per_blocks = vec![0u128; n + 1];
    for (k, slot) in per_blocks.iter_mut().enumerate().skip(1) {
        let mut total = 0u128;
        for_each_skeleton(p, k, &mut |g| {
            let mut ways = 1u128;
            for (_, req) in yellow_demands(p, g) {
                ways *= 1u128 << (universe & !req).count_ones();
            }
            total += ways;
        });
        *slot = total;
    }
    set_partitions(n).iter().map(|rgs| per_blocks[block_count(rgs)]).sum()
}

/// Materialize every atom and the polyadic-equality structure on them.
pub fn enumerate_atoms(p: &Preset, bound: usize) -> Result<RainbowStructure, RainbowError> {
    let n = p.palette.n;
    let universe = p.palette.yellow_universe();
    let mut graphs: Vec<Vec<ColouredGraph>> = vec![Vec::new(); n + 1];
    let mut total = 0usize;
    for k in 1..=n {
        let mut skeletons = Vec::new();
        let mut overflow = false;
        for_each_skeleton(p, k, &mut |g| {
            if skeletons.len() <= bound {
                skeletons.push(g.clone());
            } else {
                overflow = true;
            }
        });
        if overflow {
            return Err(RainbowError::TooManyAtoms(bound));
        }
        let expanded: Vec<Vec<ColouredGraph>> = skeletons
            .par_iter()
            .map(|g| {
                let mut out = vec![g.clone()];
                for (b, req) in yellow_demands(p, g) {
                    let masks = supersets(req, universe);
                    out = out
                        .iter()
                        .flat_map(|h| {
                            masks.iter().map(|&m| {
                                let mut h = h.clone();
                                h.set_yellow(&b, m);
                                h
                            })
                        })
                        .collect();
                    if out.len() > bound {
                        break;
                    }
                }
                out
            })
            .collect();
        for e in expanded {
            total += e.len();
            if total > bound {
                return Err(RainbowError::TooManyAtoms(bound));
            }
            graphs[k].extend(e);
        }
    }
    let mut atoms = Vec::new();
    for rgs in set_partitions(n) {
        for g in &graphs[block_count(&rgs)] {
            atoms.push(RainbowAtom {
                partition: rgs.clone(),
                graph: g.clone(),
            });
            if atoms.len() > bound {
                return Err(RainbowError::TooManyAtoms(bound));
            }
        }
    }
    atoms.sort();
    let structure = to_structure(n, &atoms)?;
    Ok(RainbowStructure {
        preset: p.clone(),
        atoms,
        structure,
    })
}

fn to_structure(n: usize, atoms: &[RainbowAtom]) -> Result<CaAtomStructure, RainbowError> {
    let index: HashMap<&RainbowAtom, u32> = atoms.iter().enumerate().map(|(k, a)| (a, k as u32)).collect();
    let cyl = (0..n)
        .map(|i| Relation::from_keys(&atoms.iter().map(|a| a.key_without(i, n)).collect::<Vec<_>>()))
        .collect();
    let mut diag = Vec::new();
    for i in 0..n {
        for j in 0..n {
            diag.push(AtomSet::from_atoms(
                atoms.len(),
                (0..atoms.len() as u32).filter(|&k| atoms[k as usize].partition[i] == atoms[k as usize].partition[j]),
            ));
        }
    }
    let mut transp = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut tau: Vec<usize> = (0..n).collect();
            tau.swap(i, j);
            let map = atoms
                .iter()
                .map(|a| index.get(&a.reindex(&tau)).copied().ok_or(RainbowError::NotClosed))
                .collect::<Result<Vec<u32>, _>>()?;
            transp.push(Relation::from_function(map));
        }
    }
    Ok(CaAtomStructure::new(
        Signature { dim: n, kind: Kind::PEA },
        atoms.len(),
        cyl,
        Some(diag),
        Replacement::Derived,
        Some(transp),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{check_axioms, Mode, Status, System};
    use crate::rainbow::palette::{RedRule, TintWhite};
    use crate::rainbow::{check_consistency, Preset};

    /// Forbidden-triangle test written out case by case from the table.
    fn oracle_triangle_ok(p: &Preset, cols: [Colour; 3]) -> bool {
        let greens = cols.iter().filter(|c| matches!(c, Colour::Green(_) | Colour::Tint(_))).count();
        if greens == 3 {
            return false;
        }
        for w in 0..3 {
            let others = [cols[(w + 1) % 3], cols[(w + 2) % 3]];
            match (cols[w], others) {
                (Colour::White(0), [Colour::Tint(s), Colour::Tint(t)]) if s != t || p.table.tint_white == TintWhite::Any => return false,
                (Colour::White(i), [Colour::Green(a), Colour::Green(b)]) if i > 0 && a == i && b == i => return false,
                _ => {}
            }
        }
        let reds: Vec<(u8, u8, u8)> = cols
            .iter()
            .filter_map(|c| match *c {
                Colour::Red { sup, j, k } => Some((sup, j, k)),
                _ => None,
            })
            .collect();
        if reds.len() == 3 {
            assert_eq!(p.palette.red_rule, RedRule::Pattern);
            if reds.iter().any(|r| r.0 != reds[0].0) {
                return false;
            }
            // some labelling of the three nodes by distinct indices realizes the pairs
            let idx: Vec<u8> = (0..p.palette.red_indices as u8).collect();
            let mut found = false;
            for &a in &idx {
                for &b in &idx {
                    for &c in &idx {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        let want = [(a.min(b), a.max(b)), (b.min(c), b.max(c)), (a.min(c), a.max(c))];
                        if (0..3).all(|e| (reds[e].1, reds[e].2) == want[e]) {
                            found = true;
                        }
                    }
                }
            }
            return found;
        }
        true
    }

    /// Every labelled graph on up to `n` nodes: every edge colouring and
    /// every choice of absent-or-present yellow on every pair.
    fn brute_count_n3(p: &Preset) -> u128 {
        assert_eq!(p.palette.n, 3);
        let colours = p.palette.colours();
        let universe = p.palette.yellow_universe();
        let yellow_choices: Vec<Option<u32>> = std::iter::once(None).chain((0..=universe).map(Some)).collect();
        let yellow_ok = |green: bool, req: u32, y: Option<u32>| match y {
            None => green,
            Some(s) => !green && s & req == req,
        };
        let mut three = 0u128;
        for &a in &colours {
            for &b in &colours {
                for &c in &colours {
                    // a = (0,1), b = (1,2), c = (0,2)
                    if !oracle_triangle_ok(p, [a, b, c]) {
                        continue;
                    }
                    let cone = |x: Colour, y: Colour| match (x, y) {
                        (Colour::Tint(t), Colour::Green(1)) | (Colour::Green(1), Colour::Tint(t)) => 1u32 << t,
                        _ => 0,
                    };
                    // base {0,1} apex 2 sees (0,2)=c, (1,2)=b; base {1,2} apex 0: a, c; base {0,2} apex 1: a, b
                    let sets = [(a, cone(c, b)), (b, cone(a, c)), (c, cone(a, b))];
                    for &y0 in &yellow_choices {
                        if !yellow_ok(sets[0].0.is_green(), sets[0].1, y0) {
                            continue;
                        }
                        for &y1 in &yellow_choices {
                            if !yellow_ok(sets[1].0.is_green(), sets[1].1, y1) {
                                continue;
                            }
                            for &y2 in &yellow_choices {
                                if yellow_ok(sets[2].0.is_green(), sets[2].1, y2) {
                                    three += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut two = 0u128;
        for &a in &colours {
            for &y in &yellow_choices {
                if yellow_ok(a.is_green(), 0, y) {
                    two += 1;
                }
            }
        }
        // partitions of 3: one with three blocks, three with two, one with one
        three + 3 * two + 1
    }

    #[test]
    fn smooth_count_matches_brute_force() {
        let p = Preset::smooth(3).unwrap();
        assert_eq!(count_atoms(&p), brute_count_n3(&p));
    }

    #[test]
    fn weak_count_matches_brute_force() {
        let p = Preset::named("hodkinson-weak").unwrap();
        assert_eq!(count_atoms(&p), brute_count_n3(&p));
    }

    #[test]
    fn mini_atoms_are_exactly_the_consistent_labelled_graphs() {
        let p = Preset::named("mini").unwrap();
        let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
        assert_eq!(s.atoms.len() as u128, count_atoms(&p));
        assert_eq!(s.atoms.len() as u128, brute_count_n3(&p));
        for a in &s.atoms {
            check_consistency(&p, &a.graph).unwrap();
            assert!(a.graph.edge_colours().all(|c| c != Colour::Shade));
        }
    }

    #[test]
    fn whites_only_palette() {
        let p = Preset::named("whites-only").unwrap();
        let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
        assert!(s.atoms.iter().all(|a| a.graph.edge_colours().all(|c| matches!(c, Colour::White(_)))));
        // no triangle of whites is forbidden and every yellow is y_∅
        assert_eq!(s.atoms.len(), 8 + 3 * 2 + 1);
    }

    #[test]
    fn merged_coordinates_lie_in_the_diagonal() {
        let p = Preset::named("mini").unwrap();
        let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
        for (k, a) in s.atoms.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    let d = s.structure.diagonal(i, j).unwrap();
                    assert_eq!(d.contains(k as u32), a.partition[i] == a.partition[j]);
                }
            }
        }
    }

    #[test]
    fn mini_structure_passes_the_cylindric_axioms() {
        let p = Preset::named("mini").unwrap();
        let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
        for system in [System::CA, System::Q] {
            let reports = check_axioms(&s.structure, system, Mode::Randomized { trials: 300, seed: 11 }).unwrap();
            let failed: Vec<_> = reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.axiom.clone()).collect();
            assert!(failed.is_empty(), "{system:?}: {failed:?}");
        }
    }

    #[test]
    fn atom_bound_is_enforced() {
        let p = Preset::smooth(3).unwrap();
        assert_eq!(enumerate_atoms(&p, 1000).unwrap_err(), RainbowError::TooManyAtoms(1000));
    }
}
