//! Twin partition of the vertex set.
//!
//! Two vertices are twins when they have exactly the same out-neighborhood.
//! Being twins is an equivalence relation; its classes drive every structural
//! zero rule, because a derivation of a non-degenerate algebra vanishes at
//! all cells whose row and column index lie in different classes.

use crate::graph::DirectedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinClass {
    /// Class members, ascending.
    pub members: Vec<usize>,
    /// Members carrying a loop, ascending.
    pub with_loop: Vec<usize>,
    /// Members without a loop, ascending.
    pub without_loop: Vec<usize>,
    /// The common out-neighborhood of the members, ascending. Empty exactly
    /// when the members are sinks.
    pub shared_descendants: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPartition {
    /// Classes ordered by smallest member.
    pub classes: Vec<TwinClass>,
    class_index: Vec<usize>,
}

impl TwinPartition {
    /// Index into `classes` of the class containing `v`.
    pub fn class_of(&self, v: usize) -> usize {
        self.class_index[v]
    }

    /// All classes are singletons.
    pub fn is_twin_free(&self) -> bool {
        self.classes.iter().all(|c| c.members.len() == 1)
    }
}

pub fn twin_partition(g: &DirectedGraph) -> TwinPartition {
    let n = g.order();
    let neighborhoods: Vec<Vec<usize>> = (0..n).map(|v| g.out_neighbors(v)).collect();

    let mut classes: Vec<TwinClass> = Vec::new();
    let mut class_index = vec![usize::MAX; n];
    for v in 0..n {
        if class_index[v] != usize::MAX {
            continue;
        }
        let members: Vec<usize> =
            (v..n).filter(|&w| neighborhoods[w] == neighborhoods[v]).collect();
        for &w in &members {
            class_index[w] = classes.len();
        }
        let (with_loop, without_loop) =
            members.iter().partition(|&&w| g.has_loop(w));
        classes.push(TwinClass {
            members,
            with_loop,
            without_loop,
            shared_descendants: neighborhoods[v].clone(),
        });
    }
    TwinPartition { classes, class_index }
}

/// Standalone form of [`TwinPartition::is_twin_free`].
pub fn is_twin_free(p: &TwinPartition) -> bool {
    p.is_twin_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::graph::associated_graph;

    fn partition_of(text: &str) -> TwinPartition {
        twin_partition(&associated_graph(&parse_algebra(text).unwrap()))
    }

    fn members(p: &TwinPartition) -> Vec<Vec<usize>> {
        p.classes.iter().map(|c| c.members.clone()).collect()
    }

    #[test]
    fn groups_by_shared_neighborhood() {
        let p = partition_of("3\n0 1 0\n0 0 1\n0 0 1");
        assert_eq!(members(&p), vec![vec![0], vec![1, 2]]);
        assert!(!p.is_twin_free());
        assert_eq!(p.classes[1].shared_descendants, vec![2]);
        assert_eq!(p.classes[1].with_loop, vec![2]);
        assert_eq!(p.classes[1].without_loop, vec![1]);
        assert_eq!(p.class_of(1), p.class_of(2));
    }

    #[test]
    fn change_of_basis_can_merge_classes() {
        let p = partition_of("3\n0 1/2 1/2\n0 -1 1\n0 -1 1");
        assert_eq!(members(&p), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn sinks_form_a_class_like_any_other() {
        let p = partition_of("4\n0 1 0 0\n0 0 0 0\n0 0 0 0\n1 0 0 0");
        assert_eq!(members(&p), vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(p.classes[1].shared_descendants, Vec::<usize>::new());
    }

    #[test]
    fn twin_free_when_all_rows_differ() {
        let p = partition_of("3\n2 1 0\n-1 0 3\n0 0 3");
        assert!(p.is_twin_free());
        assert!(is_twin_free(&p));
    }
}
