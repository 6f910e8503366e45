//! Connection graph between balls, endpoints and valleys, and the shortest
//! path through it that defines the deformed contour.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ExitPoint, NonOscRegion};
use crate::tracer::{SDPath, Terminal};

/// Relative slack for ball membership of vertices that sit on a boundary.
const MEMBERSHIP_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Stationary,
    FiniteEndpoint,
    Exit,
    Entrance,
    Valley,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Position; for valleys the unit vector in the valley direction.
    pub location: Complex64,
    /// Valley angle, for valley vertices.
    pub angle: Option<f64>,
    pub ball: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    BallLine,
    /// Index into the list of traced paths.
    SDContour { path: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    /// Euclidean length, or polyline arc length for contours.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformationGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

/// Where each traced path starts in the vertex list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOrigin {
    Exit(usize),
    Endpoint(usize),
}

/// Inputs to [`build_graph`] besides the ball region.
#[derive(Debug, Clone, Copy)]
pub struct GraphInputs<'a> {
    pub endpoints: &'a [Complex64],
    pub exits: &'a [ExitPoint],
    pub valleys: &'a [f64],
    pub paths: &'a [SDPath],
    /// Origin of `paths[k]`, indexing `exits` or `endpoints`.
    pub origins: &'a [PathOrigin],
}

/// Vertex index ranges by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexLayout {
    pub stationary: usize,
    pub endpoints: usize,
    pub exits: usize,
    pub entrances: usize,
    pub valleys: usize,
}

impl VertexLayout {
    pub fn endpoint(&self, k: usize) -> usize {
        self.stationary + k
    }

    pub fn exit(&self, k: usize) -> usize {
        self.stationary + self.endpoints + k
    }

    pub fn valley(&self, k: usize) -> usize {
        self.stationary + self.endpoints + self.exits + self.entrances + k
    }
}

/// Builds the graph: vertices for ball centres, finite endpoints, exits,
/// entrances (one per contour ending in a ball) and valleys; straight edges
/// between every pair of vertices sharing a ball and between the centres of
/// overlapping balls; one edge per traced contour.
pub fn build_graph(region: &NonOscRegion, inputs: &GraphInputs<'_>) -> (DeformationGraph, VertexLayout) {
    let mut vertices = Vec::new();
    for (k, ball) in region.balls.iter().enumerate() {
        vertices.push(Vertex {
            kind: VertexKind::Stationary,
            location: ball.center,
            angle: None,
            ball: Some(k),
        });
    }
    for &z in inputs.endpoints {
        vertices.push(Vertex {
            kind: VertexKind::FiniteEndpoint,
            location: z,
            angle: None,
            ball: region.containing_ball(z),
        });
    }
    for exit in inputs.exits {
        vertices.push(Vertex {
            kind: VertexKind::Exit,
            location: exit.location,
            angle: None,
            ball: Some(exit.owner),
        });
    }
    let mut entrance_vertex = vec![None; inputs.paths.len()];
    let entrances_start = vertices.len();
    for (k, path) in inputs.paths.iter().enumerate() {
        if let Terminal::Entrance { ball, point } = path.terminal {
            entrance_vertex[k] = Some(vertices.len());
            vertices.push(Vertex {
                kind: VertexKind::Entrance,
                location: point,
                angle: None,
                ball: Some(ball),
            });
        }
    }
    let layout = VertexLayout {
        stationary: region.balls.len(),
        endpoints: inputs.endpoints.len(),
        exits: inputs.exits.len(),
        entrances: vertices.len() - entrances_start,
        valleys: inputs.valleys.len(),
    };
    for &angle in inputs.valleys {
        vertices.push(Vertex {
            kind: VertexKind::Valley,
            location: Complex64::from_polar(1.0, angle),
            angle: Some(angle),
            ball: None,
        });
    }

    let mut edges = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut add_line = |edges: &mut Vec<Edge>, u: usize, v: usize| {
        if u == v {
            return;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(Edge {
                kind: EdgeKind::BallLine,
                from: key.0,
                to: key.1,
                length: (vertices[u].location - vertices[v].location).norm(),
            });
        }
    };

    let finite = layout.valley(0);
    for (k, ball) in region.balls.iter().enumerate() {
        let members: Vec<usize> = (0..finite)
            .filter(|&i| {
                let v = &vertices[i];
                let own = matches!(v.kind, VertexKind::Exit | VertexKind::Entrance) && v.ball == Some(k);
                own || (v.location - ball.center).norm() <= ball.radius * (1.0 + MEMBERSHIP_SLACK)
            })
            .collect();
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                add_line(&mut edges, u, v);
            }
        }
    }
    for (i, bi) in region.balls.iter().enumerate() {
        for (j, bj) in region.balls.iter().enumerate().skip(i + 1) {
            if (bi.center - bj.center).norm() < bi.radius + bj.radius {
                add_line(&mut edges, i, j);
            }
        }
    }
    for (k, path) in inputs.paths.iter().enumerate() {
        let from = match inputs.origins[k] {
            PathOrigin::Exit(e) => layout.exit(e),
            PathOrigin::Endpoint(e) => layout.endpoint(e),
        };
        let to = match path.terminal {
            Terminal::Entrance { .. } => entrance_vertex[k].expect("entrance vertex"),
            Terminal::Valley { index, .. } => layout.valley(index),
        };
        edges.push(Edge {
            kind: EdgeKind::SDContour { path: k },
            from,
            to,
            length: path.arc_length(),
        });
    }

    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (e, edge) in edges.iter().enumerate() {
        adjacency[edge.from].push(e);
        adjacency[edge.to].push(e);
    }
    (
        DeformationGraph {
            vertices,
            edges,
            adjacency,
        },
        layout,
    )
}

/// An edge of the deformation with its traversal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: usize,
    /// `+1` when traversed from `from` to `to`, `-1` otherwise.
    pub sign: i8,
}

/// Chain of edges from the start vertex to the end vertex.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuasiSDDeformation {
    pub vertices: Vec<usize>,
    pub edges: Vec<OrientedEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cost {
    hops: usize,
    length: f64,
}

impl Cost {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.hops
            .cmp(&other.hops)
            .then(self.length.total_cmp(&other.length))
    }
}

#[derive(Debug, PartialEq)]
struct Entry {
    cost: Cost,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (cost, vertex)
        other
            .cost
            .cmp_key(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl DeformationGraph {
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Fewest-edge path from `start` to `end`, ties broken by total length.
    pub fn shortest_path(&self, start: usize, end: usize) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        let mut best: Vec<Option<Cost>> = vec![None; n];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        best[start] = Some(Cost { hops: 0, length: 0.0 });
        heap.push(Entry {
            cost: Cost { hops: 0, length: 0.0 },
            vertex: start,
        });
        while let Some(Entry { cost, vertex }) = heap.pop() {
            if best[vertex].is_some_and(|b| b.cmp_key(&cost) == Ordering::Less) {
                continue;
            }
            if vertex == end {
                break;
            }
            for &e in &self.adjacency[vertex] {
                let edge = &self.edges[e];
                let next = if edge.from == vertex { edge.to } else { edge.from };
                let cand = Cost {
                    hops: cost.hops + 1,
                    length: cost.length + edge.length,
                };
                if best[next].is_none_or(|b| cand.cmp_key(&b) == Ordering::Less) {
                    best[next] = Some(cand);
                    pred[next] = Some((vertex, e));
                    heap.push(Entry { cost: cand, vertex: next });
                }
            }
        }
        if best[end].is_none() {
            return Err(Error::DeformationNotFound);
        }
        let mut chain = Vec::new();
        let mut v = end;
        while v != start {
            let (u, e) = pred[v].expect("predecessor on a reached vertex");
            chain.push(e);
            v = u;
        }
        chain.reverse();
        Ok(chain)
    }

    /// Tags each edge of a path from `start` with its traversal direction.
    pub fn orient(&self, path: &[usize], start: usize) -> QuasiSDDeformation {
        let mut vertices = vec![start];
        let mut edges = Vec::with_capacity(path.len());
        let mut at = start;
        for &e in path {
            let edge = &self.edges[e];
            let (sign, next) = if edge.from == at { (1, edge.to) } else { (-1, edge.from) };
            edges.push(OrientedEdge { edge: e, sign });
            vertices.push(next);
            at = next;
        }
        QuasiSDDeformation { vertices, edges }
    }
}
