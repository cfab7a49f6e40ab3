use super::Graph;

/// `count` disjoint copies of `K_clique_size`.
pub fn gen_clique_union(clique_size: usize, count: usize) -> Graph {
    let mut g = Graph::empty(clique_size * count);
    for block in 0..count {
        let base = (block * clique_size) as u32;
        for u in 0..clique_size as u32 {
            for v in u + 1..clique_size as u32 {
                g.add_edge(base + u, base + v).expect("in range");
            }
        }
    }
    g
}

/// Nodes `0..m`, with an edge between `i` and `j` iff `0 < |i - j| < width`.
pub fn gen_band(m: usize, width: usize) -> Graph {
    let mut g = Graph::empty(m);
    for i in 0..m {
        for j in i + 1..m.min(i + width.max(1)) {
            g.add_edge(i as u32, j as u32).expect("in range");
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::chromatic_number;

    #[test]
    fn clique_unions() {
        let g = gen_clique_union(3, 2);
        assert_eq!((g.node_count(), g.edge_count()), (6, 6));
        assert_eq!(chromatic_number(&g).chi, 3);
        let e = gen_clique_union(1, 5);
        assert_eq!((e.node_count(), e.edge_count()), (5, 0));
        assert_eq!(chromatic_number(&gen_clique_union(4, 3)).chi, 4);
        for k in 1..=5 {
            for c in 1..=3 {
                assert_eq!(chromatic_number(&gen_clique_union(k, c)).chi, k, "k={k} c={c}");
            }
        }
    }

    #[test]
    fn bands() {
        assert_eq!(gen_band(5, 1).edge_count(), 0);
        assert_eq!(gen_band(5, 2), Graph::path(5));
        let g = gen_band(8, 4);
        assert_eq!(chromatic_number(&g).chi, 4);
        // residues mod the width colour it
        assert!(g.edges().all(|(u, v)| u % 4 != v % 4));
    }
}
