use std::collections::VecDeque;

use super::Graph;

/// Length of a shortest cycle, or `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let adj = g.adjacency_lists();
    let n = g.node_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![u32::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(u32::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root as u32]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if best.is_some_and(|b| 2 * du + 1 >= b) {
                break;
            }
            for &w in &adj[u as usize] {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = du + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                } else if parent[u as usize] != w {
                    let len = du + dist[w as usize] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            p[x] = find(p, p[x]);
        }
        p[x]
    }

    fn has_cycle_union_find(g: &Graph) -> bool {
        let mut p: Vec<usize> = (0..g.node_count()).collect();
        for (u, v) in g.edges() {
            let (a, b) = (find(&mut p, u as usize), find(&mut p, v as usize));
            if a == b {
                return true;
            }
            p[a] = b;
        }
        false
    }

    #[test]
    fn examples() {
        assert_eq!(girth(&Graph::path(6)), None);
        assert_eq!(girth(&Graph::cycle(5)), Some(5));
        assert_eq!(girth(&Graph::complete(4)), Some(3));
        assert_eq!(girth(&Graph::petersen()), Some(5));
        // star tree
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(girth(&star), None);
        // even cycle with a chord
        let mut c6 = Graph::cycle(6);
        c6.add_edge(0, 3).unwrap();
        assert_eq!(girth(&c6), Some(4));
    }

    proptest! {
        #[test]
        fn infinite_iff_acyclic(n in 1usize..12, edges in proptest::collection::vec((0u32..12, 0u32..12), 0..16)) {
            let mut g = Graph::empty(n);
            for (u, v) in edges {
                let (u, v) = (u % n as u32, v % n as u32);
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            prop_assert_eq!(girth(&g).is_none(), !has_cycle_union_find(&g));
            if let Some(k) = girth(&g) {
                prop_assert!(k >= 3 && k <= n);
            }
        }
    }
}
