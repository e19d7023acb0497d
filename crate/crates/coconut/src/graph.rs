//! Graph families under study: paths, cycles, and coconut trees.
//!
//! Vertices are indexed 0-based internally and 1-based in I/O. For a coconut
//! tree `CT(p,s)` the path vertices `v_1..v_p` occupy indices `0..p-1` and the
//! leaves `l_1..l_s` occupy indices `p..p+s-1`, so r/d vectors serialize in
//! path-then-leaves order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("{name} must be at least {min}, got {got}")]
    Domain {
        name: &'static str,
        min: usize,
        got: usize,
    },
    #[error("edge ({u}, {v}) is out of range or a self-loop")]
    BadEdge { u: usize, v: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
}

/// Simple undirected connected finite graph, immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 0-based edges, rejecting self-loops, duplicate
    /// edges, out-of-range endpoints, and disconnected graphs.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Domain {
                name: "vertex count",
                min: 1,
                got: 0,
            });
        }
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u == v || u >= vertex_count || v >= vertex_count {
                return Err(GraphError::BadEdge { u, v });
            }
            if neighbors[u].contains(&v) {
                return Err(GraphError::BadEdge { u, v });
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let graph = Graph { neighbors };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.neighbors[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }
}

/// The `(p, s)` labeling convention for a coconut tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoconutShape {
    pub p: usize,
    pub s: usize,
}

impl CoconutShape {
    pub fn vertex_count(&self) -> usize {
        self.p + self.s
    }

    /// Index of path vertex `v_k`, `1 <= k <= p`.
    pub fn path_index(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.p);
        k - 1
    }

    /// Index of leaf `l_j`, `1 <= j <= s`.
    pub fn leaf_index(&self, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.s);
        self.p + j - 1
    }

    /// Index of the central vertex `v_p`.
    pub fn central_index(&self) -> usize {
        self.p - 1
    }
}

/// Builds `CT(p, s)`: a path `v_1..v_p` with `s` leaves attached to `v_p`.
pub fn build_coconut_tree(p: usize, s: usize) -> Result<(Graph, CoconutShape), GraphError> {
    if p == 0 {
        return Err(GraphError::Domain {
            name: "p",
            min: 1,
            got: 0,
        });
    }
    if s == 0 {
        return Err(GraphError::Domain {
            name: "s",
            min: 1,
            got: 0,
        });
    }
    let shape = CoconutShape { p, s };
    let mut edges = Vec::with_capacity(p + s - 1);
    for k in 1..p {
        edges.push((k - 1, k));
    }
    for j in 1..=s {
        edges.push((shape.central_index(), shape.leaf_index(j)));
    }
    let graph = Graph::from_edges(p + s, &edges)?;
    Ok((graph, shape))
}

/// Builds the path graph on `n` vertices.
pub fn build_path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Domain {
            name: "n",
            min: 1,
            got: 0,
        });
    }
    let edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
    Graph::from_edges(n, &edges)
}

/// Builds the cycle graph on `n >= 3` vertices.
pub fn build_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::Domain {
            name: "n",
            min: 3,
            got: n,
        });
    }
    let mut edges: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges)
}

/// JSON graph form: either a named family or an explicit edge list with
/// 1-based vertex indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphJson {
    Family {
        family: String,
        p: usize,
        s: usize,
    },
    Explicit {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<(Graph, Option<CoconutShape>), GraphError> {
        match self {
            GraphJson::Family { family, p, s } => {
                if family != "coconut_tree" {
                    return Err(GraphError::UnknownFamily(family.clone()));
                }
                let (graph, shape) = build_coconut_tree(*p, *s)?;
                Ok((graph, Some(shape)))
            }
            GraphJson::Explicit { vertices, edges } => {
                let zero_based: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(u, v)| {
                        if u == 0 || v == 0 {
                            Err(GraphError::BadEdge { u, v })
                        } else {
                            Ok((u - 1, v - 1))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                Ok((Graph::from_edges(*vertices, &zero_based)?, None))
            }
        }
    }

    pub fn from_graph(graph: &Graph, shape: Option<CoconutShape>) -> Self {
        if let Some(shape) = shape {
            GraphJson::Family {
                family: "coconut_tree".into(),
                p: shape.p,
                s: shape.s,
            }
        } else {
            let mut edges = Vec::new();
            for v in 0..graph.vertex_count() {
                for &u in graph.neighbors(v) {
                    if v < u {
                        edges.push((v + 1, u + 1));
                    }
                }
            }
            GraphJson::Explicit {
                vertices: graph.vertex_count(),
                edges,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coconut_tree_3_3() {
        let (g, shape) = build_coconut_tree(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.degree(shape.central_index()), 4);
    }

    #[test]
    fn coconut_tree_p_1_is_path() {
        for p in 1..=6 {
            let (g, _) = build_coconut_tree(p, 1).unwrap();
            let path = build_path(p + 1).unwrap();
            assert_eq!(g, path);
        }
    }

    #[test]
    fn coconut_tree_1_s_is_star() {
        let (g, shape) = build_coconut_tree(1, 4).unwrap();
        assert_eq!(g.degree(shape.central_index()), 4);
        for j in 1..=4 {
            assert_eq!(g.degree(shape.leaf_index(j)), 1);
        }
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(build_coconut_tree(0, 3).is_err());
        assert!(build_coconut_tree(3, 0).is_err());
        assert!(build_path(0).is_err());
        assert!(build_cycle(2).is_err());
    }

    #[test]
    fn path_shapes() {
        let g = build_path(5).unwrap();
        let degrees: Vec<_> = (0..5).map(|v| g.degree(v)).collect();
        assert_eq!(degrees, vec![1, 2, 2, 2, 1]);
        assert!(build_path(1).is_ok());
        assert_eq!(build_path(2).unwrap().edge_count(), 1);
    }

    #[test]
    fn cycle_shapes() {
        let g = build_cycle(3).unwrap();
        assert_eq!(g.edge_count(), 3);
        let g = build_cycle(4).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn adjacency_symmetry_and_leaf_degrees() {
        for p in 1..=4 {
            for s in 1..=4 {
                let (g, shape) = build_coconut_tree(p, s).unwrap();
                assert_eq!(g.edge_count(), p + s - 1);
                for v in 0..g.vertex_count() {
                    for &u in g.neighbors(v) {
                        assert!(g.neighbors(u).contains(&v));
                    }
                }
                let leaves = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).count();
                if p > 1 {
                    assert_eq!(leaves, s + 1);
                } else if s == 1 {
                    // CT(1,1) is a single edge; both ends have degree 1.
                    assert_eq!(leaves, 2);
                } else {
                    assert_eq!(leaves, s);
                    assert_eq!(g.degree(shape.central_index()), s);
                }
            }
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let (g, shape) = build_coconut_tree(3, 2).unwrap();
        let json = GraphJson::from_graph(&g, Some(shape));
        let (g2, shape2) = json.to_graph().unwrap();
        assert_eq!(g, g2);
        assert_eq!(shape2, Some(shape));

        let explicit: GraphJson =
            serde_json::from_str(r#"{"vertices":3,"edges":[[1,2],[2,3]]}"#).unwrap();
        let (g3, _) = explicit.to_graph().unwrap();
        assert_eq!(g3, build_path(3).unwrap());
    }
}
