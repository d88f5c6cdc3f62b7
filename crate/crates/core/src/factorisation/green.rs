//! Green's relations on the semigroup of paths, as strongly connected
//! components of its Cayley graphs.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::semigroup::{Closure, PathElement};
use crate::semiring::BarValue;

pub(crate) struct GreenStructure {
    index: HashMap<PathElement, usize>,
    r_class: Vec<usize>,
    l_class: Vec<usize>,
    j_class: Vec<usize>,
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, edges.len());
    for _ in 0..n {
        g.add_node(());
    }
    for &(x, y) in edges {
        g.add_edge(NodeIndex::new(x), NodeIndex::new(y), ());
    }
    let mut class = vec![0; n];
    for (c, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            class[v.index()] = c;
        }
    }
    class
}

impl GreenStructure {
    /// `paths` must be closed under product; `gens` generate it.
    pub(crate) fn new(paths: &Closure<BarValue>, gens: &[PathElement]) -> Self {
        let n = paths.len();
        let index: HashMap<PathElement, usize> = paths
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let mut right = Vec::new();
        let mut left = Vec::new();
        for (i, e) in paths.elements().iter().enumerate() {
            for g in gens {
                right.push((i, index[&e.mul(g)]));
                left.push((i, index[&g.mul(e)]));
            }
        }
        let both: Vec<_> = right.iter().chain(&left).copied().collect();
        GreenStructure {
            r_class: components(n, &right),
            l_class: components(n, &left),
            j_class: components(n, &both),
            index,
        }
    }

    fn id(&self, e: &PathElement) -> usize {
        *self
            .index
            .get(e)
            .expect("tree labels belong to the semigroup of paths")
    }

    pub(crate) fn j(&self, e: &PathElement) -> usize {
        self.j_class[self.id(e)]
    }

    pub(crate) fn r(&self, e: &PathElement) -> usize {
        self.r_class[self.id(e)]
    }

    pub(crate) fn l(&self, e: &PathElement) -> usize {
        self.l_class[self.id(e)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_a, running_b};
    use crate::semigroup::{generators, paths_closure, ClosureConfig};

    #[test]
    fn classes_refine_correctly() {
        let gens = generators(&running_a(), &running_b()).unwrap();
        let paths = paths_closure(&gens, ClosureConfig::default()).unwrap();
        let g: Vec<_> = gens.iter().map(|(e, _)| e.clone()).collect();
        let green = GreenStructure::new(&paths, &g);
        for x in paths.elements() {
            for y in paths.elements() {
                // R ⊆ J and L ⊆ J.
                if green.r(x) == green.r(y) || green.l(x) == green.l(y) {
                    assert_eq!(green.j(x), green.j(y));
                }
                // In a finite semigroup, R-related elements generate the same right ideal.
                if green.r(x) == green.r(y) && x != y {
                    assert!(paths.elements().iter().any(|s| x.mul(s) == *y));
                }
            }
        }
        // Idempotent e_a sits with everything reachable from it in both directions.
        let ea = &g[0];
        assert_eq!(green.j(ea), green.j(&ea.mul(ea)));
    }
}
