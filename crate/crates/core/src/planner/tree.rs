use serde::{Deserialize, Serialize};

use crate::hybrid_time::{concatenate_all, SolutionPair};
use crate::systems::distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub state: Vec<f64>,
    /// Index into the tree's edge list of the edge ending here.
    pub incoming: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub pair: SolutionPair,
}

/// A forest of state-labelled vertices joined by solution-pair-labelled edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTree {
    direction: Direction,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    roots: Vec<usize>,
}

impl SearchTree {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            vertices: Vec::new(),
            edges: Vec::new(),
            roots: Vec::new(),
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn add_root(&mut self, state: Vec<f64>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex {
            id,
            state,
            incoming: None,
        });
        self.roots.push(id);
        id
    }

    /// Add the endpoint of `pair`, grown from `parent`. The new vertex state
    /// is copied from the pair's final sample.
    pub fn add_vertex(&mut self, parent: usize, pair: SolutionPair) -> usize {
        debug_assert_eq!(pair.initial_state(), self.vertices[parent].state.as_slice());
        let id = self.vertices.len();
        self.vertices.push(Vertex {
            id,
            state: pair.final_state().to_vec(),
            incoming: Some(self.edges.len()),
        });
        self.edges.push(Edge {
            from: parent,
            to: id,
            pair,
        });
        id
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn state(&self, id: usize) -> &[f64] {
        &self.vertices[id].state
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn incoming_edge(&self, id: usize) -> Option<&Edge> {
        self.vertices[id].incoming.map(|e| &self.edges[e])
    }

    /// Vertex ids from the root down to `id`.
    pub fn path_to(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(e) = self.incoming_edge(cur) {
            cur = e.from;
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Edges along the path from the root down to `id`.
    pub fn path_edges(&self, id: usize) -> Vec<&Edge> {
        let path = self.path_to(id);
        path[1..]
            .iter()
            .map(|&v| self.incoming_edge(v).expect("non-root vertex has an incoming edge"))
            .collect()
    }

    /// Concatenation of the edge pairs from the root down to `id`; `None` at a root.
    pub fn path_pair(&self, id: usize) -> Option<SolutionPair> {
        concatenate_all(self.path_edges(id).into_iter().map(|e| &e.pair))
            .map(|r| r.expect("tree edges share dimensions"))
    }

    /// Closest vertex satisfying `allowed`; ties go to the lowest id.
    pub fn nearest(&self, x: &[f64], allowed: &dyn Fn(&[f64]) -> bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for v in &self.vertices {
            if !allowed(&v.state) {
                continue;
            }
            let d = distance(&v.state, x);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((v.id, d));
            }
        }
        best.map(|(id, _)| id)
    }
}
