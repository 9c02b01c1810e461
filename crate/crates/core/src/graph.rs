//! Directed graphs attached to evolution algebras.
//!
//! The associated graph has one vertex per generator and an arrow i -> j
//! exactly when the structure constant at (i, j) is nonzero. Sinks (vertices
//! with no outgoing arrow) correspond to nilpotent generators; a sink-free
//! graph is what makes the algebra non-degenerate. Connectivity is taken in
//! the undirected sense.

use crate::algebra::EvolutionAlgebra;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    adjacency: Vec<Vec<bool>>,
}

/// A directed cycle v_0 -> v_1 -> ... -> v_{m-1} -> v_0 of length m >= 1;
/// a loop is the length-one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCycle {
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphProperties {
    /// Vertices with no outgoing arrows, ascending.
    pub sinks: Vec<usize>,
    /// True exactly when there are no sinks.
    pub non_degenerate: bool,
    /// Undirected connectivity; a single vertex is connected.
    pub connected: bool,
    /// Present if and only if the graph has a directed cycle.
    pub cycle: Option<VertexCycle>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("vertex index {index} out of range for a graph on {order} vertices")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub order: usize,
}

impl DirectedGraph {
    pub fn new(adjacency: Vec<Vec<bool>>) -> Self {
        let n = adjacency.len();
        assert!(adjacency.iter().all(|row| row.len() == n), "adjacency must be square");
        Self { adjacency }
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to]
    }

    /// Out-neighborhood of a vertex, ascending.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.order()).filter(|&w| self.adjacency[v][w]).collect()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adjacency[v][v]
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.adjacency[v].iter().all(|&b| !b)
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }
}

impl VertexCycle {
    /// Whether this is a directed cycle of the graph: nonempty, pairwise
    /// distinct vertices, consecutive arrows present including the closing
    /// arrow back to the start.
    pub fn is_cycle_of(&self, g: &DirectedGraph) -> bool {
        let m = self.vertices.len();
        if m == 0 || self.vertices.iter().any(|&v| v >= g.order()) {
            return false;
        }
        let mut seen = vec![false; g.order()];
        for &v in &self.vertices {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..m).all(|t| g.has_arrow(self.vertices[t], self.vertices[(t + 1) % m]))
    }
}

/// Builds the associated graph of an algebra from the zero pattern of its
/// structure matrix.
pub fn associated_graph(a: &EvolutionAlgebra) -> DirectedGraph {
    let n = a.dimension();
    let adjacency = (0..n)
        .map(|i| (0..n).map(|j| !a.entry(i, j).is_zero()).collect())
        .collect();
    DirectedGraph::new(adjacency)
}

/// First-generation descendants of a vertex set: the union of the
/// out-neighborhoods of its members, ascending.
pub fn descendants(g: &DirectedGraph, set: &[usize]) -> Result<Vec<usize>, IndexOutOfRange> {
    let n = g.order();
    let mut hit = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(IndexOutOfRange { index: v, order: n });
        }
        for (w, slot) in hit.iter_mut().enumerate() {
            *slot |= g.has_arrow(v, w);
        }
    }
    Ok((0..n).filter(|&w| hit[w]).collect())
}

pub fn graph_properties(g: &DirectedGraph) -> GraphProperties {
    let n = g.order();
    let sinks: Vec<usize> = (0..n).filter(|&v| g.is_sink(v)).collect();
    let non_degenerate = sinks.is_empty();

    let mut reached = vec![false; n];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for (w, seen) in reached.iter_mut().enumerate() {
            if !*seen && (g.has_arrow(v, w) || g.has_arrow(w, v)) {
                *seen = true;
                stack.push(w);
            }
        }
    }
    let connected = reached.iter().all(|&b| b);

    let cycle = if non_degenerate { Some(forward_walk_cycle(g, 0)) } else { find_cycle(g) };
    GraphProperties { sinks, non_degenerate, connected, cycle }
}

/// Walks forward from `start`, always taking the smallest out-neighbor; in a
/// sink-free graph the walk must revisit a vertex, and the segment between
/// the two visits is a directed cycle.
pub(crate) fn forward_walk_cycle(g: &DirectedGraph, start: usize) -> VertexCycle {
    let (walk, repeat_at) = forward_walk(g, start);
    VertexCycle { vertices: walk[repeat_at..walk.len() - 1].to_vec() }
}

/// The forward walk from `start` up to and including the first repeated
/// vertex, plus the position of that vertex's first visit. Requires a
/// sink-free graph.
pub(crate) fn forward_walk(g: &DirectedGraph, start: usize) -> (Vec<usize>, usize) {
    let mut first_visit = vec![usize::MAX; g.order()];
    let mut walk = vec![start];
    first_visit[start] = 0;
    let mut v = start;
    loop {
        let w = *g.out_neighbors(v).first().expect("walk requires a sink-free graph");
        walk.push(w);
        if first_visit[w] != usize::MAX {
            return (walk, first_visit[w]);
        }
        first_visit[w] = walk.len() - 1;
        v = w;
    }
}

/// Deterministic depth-first back-edge search; used when sinks may stall the
/// forward walk. Returns a cycle if and only if one exists.
fn find_cycle(g: &DirectedGraph) -> Option<VertexCycle> {
    let n = g.order();
    // 0 = unvisited, 1 = on the current path, 2 = finished.
    let mut state = vec![0u8; n];
    let mut path: Vec<usize> = Vec::new();

    fn visit(
        g: &DirectedGraph,
        v: usize,
        state: &mut [u8],
        path: &mut Vec<usize>,
    ) -> Option<VertexCycle> {
        state[v] = 1;
        path.push(v);
        for w in g.out_neighbors(v) {
            match state[w] {
                0 => {
                    if let Some(c) = visit(g, w, state, path) {
                        return Some(c);
                    }
                }
                1 => {
                    let from = path.iter().position(|&u| u == w).unwrap();
                    return Some(VertexCycle { vertices: path[from..].to_vec() });
                }
                _ => {}
            }
        }
        path.pop();
        state[v] = 2;
        None
    }

    for v in 0..n {
        if state[v] == 0 {
            if let Some(c) = visit(g, v, &mut state, &mut path) {
                return Some(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn graph_of(text: &str) -> DirectedGraph {
        associated_graph(&parse_algebra(text).unwrap())
    }

    #[test]
    fn builds_adjacency_from_zero_pattern() {
        let g = graph_of("3\n2 1 0\n-1 0 3\n0 0 3");
        assert!(g.has_arrow(0, 0) && g.has_arrow(0, 1) && !g.has_arrow(0, 2));
        assert_eq!(g.out_neighbors(1), vec![0, 2]);
        assert!(g.has_loop(2));
    }

    #[test]
    fn descendants_are_first_generation() {
        let g = graph_of("5\n1 2 0 1 -1\n-3 0 3 0 2\n0 1 0 1 -3\n1 0 -2 1 1\n-1 1 2 -5 0");
        assert_eq!(descendants(&g, &[0]).unwrap(), vec![0, 1, 3, 4]);
        assert_eq!(descendants(&g, &[1, 2]).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(descendants(&g, &[]).unwrap(), Vec::<usize>::new());
        assert_eq!(descendants(&g, &[7]).unwrap_err(), IndexOutOfRange { index: 7, order: 5 });
    }

    #[test]
    fn identity_pattern_is_disconnected_with_loop_cycle() {
        let g = graph_of("2\n1 0\n0 1");
        let props = graph_properties(&g);
        assert_eq!(props.sinks, Vec::<usize>::new());
        assert!(props.non_degenerate);
        assert!(!props.connected);
        assert_eq!(props.cycle, Some(VertexCycle { vertices: vec![0] }));
    }

    #[test]
    fn sink_makes_graph_degenerate() {
        let g = graph_of("2\n0 1\n0 0");
        let props = graph_properties(&g);
        assert_eq!(props.sinks, vec![1]);
        assert!(!props.non_degenerate);
        assert!(props.connected);
        assert_eq!(props.cycle, None);
    }

    #[test]
    fn cycle_found_even_when_greedy_walk_stalls() {
        // 2 -> 1 (a sink) comes before 2 -> 3, yet 2 -> 3 -> 2 is a cycle.
        let g = graph_of("3\n0 0 0\n1 0 1\n0 1 0");
        let props = graph_properties(&g);
        let cycle = props.cycle.expect("cycle exists");
        assert!(cycle.is_cycle_of(&g));
        assert_eq!(cycle.vertices, vec![1, 2]);
    }

    #[test]
    fn forward_walk_prefers_smallest_target() {
        let g = graph_of("3\n0 1 1\n1 0 1\n1 1 0");
        let props = graph_properties(&g);
        assert_eq!(props.cycle, Some(VertexCycle { vertices: vec![0, 1] }));
    }

    #[test]
    fn single_vertex_is_connected() {
        let g = graph_of("1\n1");
        let props = graph_properties(&g);
        assert!(props.connected);
        assert_eq!(props.cycle, Some(VertexCycle { vertices: vec![0] }));
    }
}
