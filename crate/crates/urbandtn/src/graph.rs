//! The junction graph every mobility model moves on.
//!
//! Built from normalized map tables: one undirected edge per way, vertices
//! are way endpoints, parallel edges between the same junction pair are
//! retained (distinct way ids). Neighbor enumeration is in a canonical
//! order (sorted by neighbor id, then way id) because mobility models draw
//! uniformly over it and the draw sequence must not depend on container
//! iteration order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geo::GeoPoint;
use crate::map::MapTables;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(i64),
    #[error("vertex {vertex} is not an endpoint of way {way_id}")]
    NotAnEndpoint { vertex: i64, way_id: i64 },
}

/// One road segment between two junctions.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadEdge {
    pub way_id: i64,
    /// Endpoints in way order: `a` is the first node of the source way.
    pub a: i64,
    pub b: i64,
    pub e_type: i64,
    pub weight_km: f64,
    /// Geographic polyline of the source way, ordered from `a` to `b`.
    pub geometry: Vec<GeoPoint>,
}

impl RoadEdge {
    pub fn other_endpoint(&self, v: i64) -> Option<i64> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

/// Undirected multigraph over junction vertices.
#[derive(Debug, Clone, Default)]
pub struct RoadGraph {
    /// Vertex id -> coordinate.
    vertices: BTreeMap<i64, GeoPoint>,
    /// way_id -> edge; each way appears on exactly one edge.
    edges: BTreeMap<i64, RoadEdge>,
    /// Vertex id -> incident way ids, kept in canonical neighbor order.
    adjacency: BTreeMap<i64, Vec<i64>>,
}

impl RoadGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: i64) -> bool {
        self.vertices.contains_key(&v)
    }

    /// Vertex ids in ascending order.
    pub fn vertex_ids(&self) -> Vec<i64> {
        self.vertices.keys().copied().collect()
    }

    pub fn vertex_position(&self, v: i64) -> Option<GeoPoint> {
        self.vertices.get(&v).copied()
    }

    pub fn edge(&self, way_id: i64) -> Option<&RoadEdge> {
        self.edges.get(&way_id)
    }

    pub fn edges(&self) -> impl Iterator<Item = &RoadEdge> {
        self.edges.values()
    }

    /// All `(neighbor vertex, edge)` pairs at `v` whose road class is in
    /// `allowed_types`, sorted by neighbor id then way id.
    pub fn neighbors(
        &self,
        v: i64,
        allowed_types: &[i64],
    ) -> Result<Vec<(i64, &RoadEdge)>, GraphError> {
        let incident = self.adjacency.get(&v).ok_or(GraphError::UnknownVertex(v))?;
        let mut out: Vec<(i64, &RoadEdge)> = Vec::with_capacity(incident.len());
        for way_id in incident {
            let edge = &self.edges[way_id];
            if !allowed_types.contains(&edge.e_type) {
                continue;
            }
            let other = edge.other_endpoint(v).expect("adjacency is consistent");
            out.push((other, edge));
        }
        // adjacency is pre-sorted, but parallel edges to distinct neighbors
        // interleave; re-sort to the canonical order.
        out.sort_by_key(|(n, e)| (*n, e.way_id));
        Ok(out)
    }

    /// All `(neighbor vertex, edge)` pairs at `v` regardless of road class,
    /// in canonical order.
    pub fn neighbors_any(&self, v: i64) -> Result<Vec<(i64, &RoadEdge)>, GraphError> {
        let incident = self.adjacency.get(&v).ok_or(GraphError::UnknownVertex(v))?;
        let mut out: Vec<(i64, &RoadEdge)> = incident
            .iter()
            .map(|way_id| {
                let edge = &self.edges[way_id];
                (edge.other_endpoint(v).expect("adjacency is consistent"), edge)
            })
            .collect();
        out.sort_by_key(|(n, e)| (*n, e.way_id));
        Ok(out)
    }

    /// Degree of `v` counting every incident edge (loops once).
    pub fn degree(&self, v: i64) -> Option<usize> {
        self.adjacency.get(&v).map(|inc| inc.len())
    }

    /// The source way's coordinates ordered so the first point is
    /// `from_vertex`'s coordinate.
    pub fn movement_waypoints(
        &self,
        way_id: i64,
        from_vertex: i64,
    ) -> Result<Vec<GeoPoint>, GraphError> {
        let edge = self
            .edges
            .get(&way_id)
            .ok_or(GraphError::NotAnEndpoint { vertex: from_vertex, way_id })?;
        if from_vertex == edge.a {
            Ok(edge.geometry.clone())
        } else if from_vertex == edge.b {
            let mut rev = edge.geometry.clone();
            rev.reverse();
            Ok(rev)
        } else {
            Err(GraphError::NotAnEndpoint { vertex: from_vertex, way_id })
        }
    }

    /// Edge list dump: `a b e_type weight_km way_id` per line.
    pub fn export_edge_list(&self) -> String {
        let mut out = String::new();
        for e in self.edges.values() {
            out.push_str(&format!("{} {} {} {} {}\n", e.a, e.b, e.e_type, e.weight_km, e.way_id));
        }
        out
    }
}

/// Builds the junction graph from normalized tables: one edge per way,
/// vertex set = union of way endpoints.
pub fn build_graph(tables: &MapTables) -> RoadGraph {
    let mut g = RoadGraph::default();
    for way in tables.ways.values() {
        let a = *way.node_sequence.first().expect("ways have >= 2 nodes");
        let b = *way.node_sequence.last().expect("ways have >= 2 nodes");
        let geometry: Vec<GeoPoint> =
            way.node_sequence.iter().map(|n| tables.nodes[n].point()).collect();
        g.vertices.insert(a, tables.nodes[&a].point());
        g.vertices.insert(b, tables.nodes[&b].point());
        g.edges.insert(
            way.way_id,
            RoadEdge { way_id: way.way_id, a, b, e_type: way.way_type, weight_km: way.length_km, geometry },
        );
        g.adjacency.entry(a).or_default().push(way.way_id);
        if b != a {
            g.adjacency.entry(b).or_default().push(way.way_id);
        }
    }
    for incident in g.adjacency.values_mut() {
        incident.sort_unstable();
    }
    g
}
