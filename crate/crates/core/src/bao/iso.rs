//! Isomorphism of atom structures by colour refinement, individualization
//! and backtracking. Any map found is verified relation by relation.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::relation::Relation;
use super::structure::{CaAtomStructure, Replacement};

pub const DEFAULT_ISO_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IsoVerdict {
    /// `map[a]` is the image of atom `a`.
    Isomorphic(Vec<u32>),
    NotIsomorphic,
    BudgetExceeded { nodes: u64 },
}

/// Relations of a structure flattened to adjacency form, with diagonal
/// memberships folded into a per-atom initial colour.
struct Flat {
    n: usize,
    initial: Vec<u64>,
    forward: Vec<Vec<Vec<u32>>>,
    backward: Vec<Vec<Vec<u32>>>,
    relations: Vec<Relation>,
}

fn flatten(s: &CaAtomStructure) -> Flat {
    let n = s.atom_count();
    let dim = s.dim();
    let mut initial = vec![0u64; n];
    if s.kind().has_diagonals() {
        let mut bit = 0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    for a in s.diagonal(i, j).expect("diagonal") {
                        initial[a as usize] |= 1 << bit;
                    }
                }
                bit += 1;
            }
        }
    }
    let mut relations: Vec<Relation> = (0..dim).map(|i| s.cyl(i).clone()).collect();
    if let Replacement::Stored(v) = s.replacement() {
        relations.extend(v.iter().flatten().cloned());
    }
    if s.kind().has_transpositions() {
        for i in 0..dim {
            for j in i + 1..dim {
                relations.push(s.transposition(i, j).expect("transposition").clone());
            }
        }
    }
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for r in &relations {
        let mut f = vec![Vec::new(); n];
        let mut b = vec![Vec::new(); n];
        for (x, y) in r.pairs() {
            f[x as usize].push(y);
            b[y as usize].push(x);
        }
        forward.push(f);
        backward.push(b);
    }
    Flat {
        n,
        initial,
        forward,
        backward,
        relations,
    }
}

/// One refinement round over both structures at once, so colour ids agree.
fn refine_round(flats: [&Flat; 2], cols: [&Vec<u32>; 2]) -> [Vec<u32>; 2] {
    let mut multiset_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut sigs: [Vec<Vec<u32>>; 2] = [Vec::new(), Vec::new()];
    for side in 0..2 {
        let f = flats[side];
        let col = cols[side];
        sigs[side] = (0..f.n)
            .map(|a| {
                let mut sig = vec![col[a]];
                for r in 0..f.forward.len() {
                    for lists in [&f.forward[r], &f.backward[r]] {
                        let mut ms: Vec<u32> = lists[a].iter().map(|&b| col[b as usize]).collect();
                        ms.sort_unstable();
                        let next = multiset_ids.len() as u32;
                        sig.push(*multiset_ids.entry(ms).or_insert(next));
                    }
                }
                sig
            })
            .collect();
    }
    // multiset ids are first-seen; renumber them by content so that the
    // resulting colours do not depend on which side was scanned first
    let mut by_content: Vec<(&Vec<u32>, u32)> = multiset_ids.iter().map(|(k, &v)| (k, v)).collect();
    by_content.sort();
    let mut remap = vec![0u32; by_content.len()];
    for (rank, (_, id)) in by_content.iter().enumerate() {
        remap[*id as usize] = rank as u32;
    }
    for side in sigs.iter_mut() {
        for s in side.iter_mut() {
            for x in s.iter_mut().skip(1) {
                *x = remap[*x as usize];
            }
        }
    }
    let mut ranks: BTreeMap<&Vec<u32>, u32> = BTreeMap::new();
    for s in sigs.iter().flatten() {
        ranks.insert(s, 0);
    }
    for (i, v) in ranks.values_mut().enumerate() {
        *v = i as u32;
    }
    [
        sigs[0].iter().map(|s| ranks[s]).collect(),
        sigs[1].iter().map(|s| ranks[s]).collect(),
    ]
}

fn count_classes(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn histogram(c: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Refine to stability; `None` if the colour histograms diverge.
fn stabilize(flats: [&Flat; 2], mut cols: [Vec<u32>; 2]) -> Option<[Vec<u32>; 2]> {
    loop {
        if histogram(&cols[0]) != histogram(&cols[1]) {
            return None;
        }
        let before = count_classes(&cols[0]);
        let next = refine_round(flats, [&cols[0], &cols[1]]);
        if histogram(&next[0]) != histogram(&next[1]) {
            return None;
        }
        let after = count_classes(&next[0]);
        cols = next;
        if after == before {
            return Some(cols);
        }
    }
}

fn verify(a: &Flat, b: &Flat, map: &[u32]) -> bool {
    if a.initial.iter().enumerate().any(|(x, &c)| b.initial[map[x] as usize] != c) {
        return false;
    }
    for (ra, rb) in a.relations.iter().zip(&b.relations) {
        let pa = ra.pairs();
        if pa.len() != rb.pairs().len() {
            return false;
        }
        if pa.iter().any(|&(x, y)| !rb.related(map[x as usize], map[y as usize])) {
            return false;
        }
    }
    true
}

struct Search<'a> {
    a: &'a Flat,
    b: &'a Flat,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, cols: [Vec<u32>; 2]) -> Result<Option<Vec<u32>>, ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let hist = histogram(&cols[0]);
        let target = hist.iter().filter(|(_, &size)| size > 1).min_by_key(|(&c, &size)| (size, c));
        let Some((&cell, _)) = target else {
            let mut map = vec![0u32; self.a.n];
            let mut inv = HashMap::new();
            for (y, &c) in cols[1].iter().enumerate() {
                inv.insert(c, y as u32);
            }
            for (x, c) in cols[0].iter().enumerate() {
                map[x] = inv[c];
            }
            return Ok(verify(self.a, self.b, &map).then_some(map));
        };
        let fresh = cols[0].iter().max().copied().unwrap_or(0) + 1;
        let x = cols[0].iter().position(|&c| c == cell).expect("cell member");
        let candidates: Vec<usize> = cols[1]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cell)
            .map(|(y, _)| y)
            .collect();
        for y in candidates {
            let mut ca = cols[0].clone();
            let mut cb = cols[1].clone();
            ca[x] = fresh;
            cb[y] = fresh;
            if let Some(next) = stabilize([self.a, self.b], [ca, cb]) {
                if let Some(map) = self.run(next)? {
                    return Ok(Some(map));
                }
            }
        }
        Ok(None)
    }
}

pub fn iso_check(a: &CaAtomStructure, b: &CaAtomStructure, budget: u64) -> IsoVerdict {
    if a.signature() != b.signature() || a.atom_count() != b.atom_count() || a.replacement_shape() != b.replacement_shape() {
        return IsoVerdict::NotIsomorphic;
    }
    let fa = flatten(a);
    let fb = flatten(b);
    // initial colours: diagonal profile, renumbered jointly
    let mut profiles: Vec<u64> = fa.initial.iter().chain(&fb.initial).copied().collect();
    profiles.sort_unstable();
    profiles.dedup();
    let rank = |p: &u64| profiles.binary_search(p).expect("profile") as u32;
    let cols = [fa.initial.iter().map(rank).collect(), fb.initial.iter().map(rank).collect()];
    let Some(cols) = stabilize([&fa, &fb], cols) else {
        return IsoVerdict::NotIsomorphic;
    };
    let mut search = Search {
        a: &fa,
        b: &fb,
        nodes: 0,
        budget,
    };
    match search.run(cols) {
        Ok(Some(map)) => IsoVerdict::Isomorphic(map),
        Ok(None) => IsoVerdict::NotIsomorphic,
        Err(()) => IsoVerdict::BudgetExceeded { nodes: search.nodes },
    }
}

impl CaAtomStructure {
    fn replacement_shape(&self) -> u8 {
        match self.replacement() {
            Replacement::Absent => 0,
            Replacement::Stored(_) => 1,
            Replacement::Derived => 2,
        }
    }
}
