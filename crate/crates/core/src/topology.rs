//! Per-slot network graphs and shortest-path routing.
//!
//! Node numbering: satellites keep their constellation ids `0..N`, the source
//! ground station is `N` and the destination ground station is `N + 1`.
//! Graphs are stored in compressed adjacency form and are immutable once
//! built; [`SlotGraph::restrict`] derives the graph for a shorter laser range
//! without recomputing any geometry.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::constellation::SnapshotPositions;
use crate::geo::consts::{ATMOSPHERE_HEIGHT_KM, EARTH_RADIUS_KM};
use crate::geo::{elevation_angle, Vec3};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Lisl,
    Uplink,
    Downlink,
}

/// A half-edge in the adjacency structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub to: NodeId,
    pub weight_km: f64,
    pub kind: EdgeKind,
}

/// A ground station's view of one satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundLink {
    pub satellite: NodeId,
    pub distance_km: f64,
    pub elevation_deg: f64,
}

/// Undirected weighted graph of one time slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotGraph {
    pub time_s: f64,
    pub lisl_range_km: f64,
    satellite_count: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    source_links: Vec<GroundLink>,
    destination_links: Vec<GroundLink>,
}

impl SlotGraph {
    /// Builds a graph from an explicit undirected edge list over `node_count` nodes.
    ///
    /// The last two nodes play the role of the ground stations; `satellite_count`
    /// is `node_count - 2`. Intended for synthetic graphs and tests.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId, f64)]) -> SlotGraph {
        assert!(node_count >= 2, "a slot graph has at least the two ground nodes");
        let satellite_count = node_count - 2;
        let (offsets, targets, weights) = compress(node_count, edges);
        SlotGraph {
            time_s: 0.0,
            lisl_range_km: f64::INFINITY,
            satellite_count,
            offsets,
            targets,
            weights,
            source_links: Vec::new(),
            destination_links: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.satellite_count + 2
    }

    pub fn satellite_count(&self) -> usize {
        self.satellite_count
    }

    pub fn source(&self) -> NodeId {
        self.satellite_count
    }

    pub fn destination(&self) -> NodeId {
        self.satellite_count + 1
    }

    /// Edges leaving `node`, in ascending neighbour order.
    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = Edge> + '_ {
        let span = self.offsets[node]..self.offsets[node + 1];
        self.targets[span.clone()]
            .iter()
            .zip(&self.weights[span])
            .map(move |(&to, &weight_km)| Edge {
                to: to as NodeId,
                weight_km,
                kind: edge_kind(node, to as NodeId, self.satellite_count),
            })
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Weight of the edge between `a` and `b`, if present.
    pub fn edge_weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        self.neighbors(a).find(|e| e.to == b).map(|e| e.weight_km)
    }

    /// Satellites visible from the source ground station.
    pub fn source_links(&self) -> &[GroundLink] {
        &self.source_links
    }

    /// Satellites visible from the destination ground station.
    pub fn destination_links(&self) -> &[GroundLink] {
        &self.destination_links
    }

    /// Elevation (degrees) at which ground node `gs` sees `satellite`, if linked.
    pub fn ground_elevation(&self, gs: NodeId, satellite: NodeId) -> Option<f64> {
        let links = if gs == self.source() {
            &self.source_links
        } else if gs == self.destination() {
            &self.destination_links
        } else {
            return None;
        };
        links
            .iter()
            .find(|l| l.satellite == satellite)
            .map(|l| l.elevation_deg)
    }

    /// The same slot with every laser link longer than `lisl_range_km` removed.
    pub fn restrict(&self, lisl_range_km: f64) -> SlotGraph {
        let mut offsets = Vec::with_capacity(self.offsets.len());
        let mut targets = Vec::with_capacity(self.targets.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        offsets.push(0);
        for node in 0..self.node_count() {
            for e in self.neighbors(node) {
                if e.kind != EdgeKind::Lisl || e.weight_km <= lisl_range_km {
                    targets.push(e.to as u32);
                    weights.push(e.weight_km);
                }
            }
            offsets.push(targets.len());
        }
        SlotGraph {
            time_s: self.time_s,
            lisl_range_km: lisl_range_km.min(self.lisl_range_km),
            satellite_count: self.satellite_count,
            offsets,
            targets,
            weights,
            source_links: self.source_links.clone(),
            destination_links: self.destination_links.clone(),
        }
    }
}

fn edge_kind(from: NodeId, to: NodeId, satellite_count: usize) -> EdgeKind {
    if from == satellite_count || to == satellite_count {
        EdgeKind::Uplink
    } else if from == satellite_count + 1 || to == satellite_count + 1 {
        EdgeKind::Downlink
    } else {
        EdgeKind::Lisl
    }
}

/// Compressed adjacency from an undirected pair list.
///
/// Each node's neighbours appear in the order its pairs appear in `pairs`;
/// for pairs generated with ascending ids that order is ascending.
fn compress(
    node_count: usize,
    pairs: &[(NodeId, NodeId, f64)],
) -> (Vec<usize>, Vec<u32>, Vec<f64>) {
    let mut offsets = vec![0usize; node_count + 1];
    for &(a, b, _) in pairs {
        offsets[a + 1] += 1;
        offsets[b + 1] += 1;
    }
    for i in 0..node_count {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut half: Vec<(u32, f64)> = vec![(0, 0.0); offsets[node_count]];
    for &(a, b, w) in pairs {
        half[fill[a]] = (b as u32, w);
        fill[a] += 1;
        half[fill[b]] = (a as u32, w);
        fill[b] += 1;
    }
    let (targets, weights) = half.into_iter().unzip();
    (offsets, targets, weights)
}

/// True if the straight segment `a`–`b` stays above the atmosphere shell.
pub fn clears_atmosphere(a: Vec3, b: Vec3) -> bool {
    let limit = EARTH_RADIUS_KM + ATMOSPHERE_HEIGHT_KM;
    let d = b - a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 {
        (-a.dot(d) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + d * t).norm_squared() >= limit * limit
}

/// Builds the graph of one slot.
///
/// A laser link joins two satellites when they are within `lisl_range_km` and the
/// line of sight clears the atmosphere. A ground link joins a station and a
/// satellite seen at or above `min_elevation_deg`. Weights are distances in km.
pub fn build_slot_graph(
    positions: &SnapshotPositions,
    source: Vec3,
    destination: Vec3,
    lisl_range_km: f64,
    min_elevation_deg: f64,
) -> SlotGraph {
    let sats = &positions.positions;
    let n = sats.len();
    let range2 = lisl_range_km * lisl_range_km;
    let shell2 = (EARTH_RADIUS_KM + ATMOSPHERE_HEIGHT_KM).powi(2);
    let xs: Vec<f64> = sats.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = sats.iter().map(|p| p.y).collect();
    let zs: Vec<f64> = sats.iter().map(|p| p.z).collect();
    let norms2: Vec<f64> = sats.iter().map(|p| p.norm_squared()).collect();
    let mut pairs: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let mut d2s = vec![0.0f64; n];

    for i in 0..n {
        let pi = sats[i];
        // branch-free distance pass first, so it vectorizes
        for j in (i + 1)..n {
            let (dx, dy, dz) = (xs[j] - pi.x, ys[j] - pi.y, zs[j] - pi.z);
            d2s[j] = dx * dx + dy * dy + dz * dz;
        }
        for j in (i + 1)..n {
            let d2 = d2s[j];
            if d2 > range2 {
                continue;
            }
            // a chord of length d between points at radius >= r stays above
            // sqrt(r^2 - d^2/4), so short links need no occlusion test
            let safe = 4.0 * (norms2[i].min(norms2[j]) - shell2) >= d2;
            if safe || clears_atmosphere(pi, sats[j]) {
                pairs.push((i, j, d2.sqrt()));
            }
        }
    }

    let mut ground = |gs: Vec3, node: NodeId| -> Vec<GroundLink> {
        let mut links = Vec::new();
        for (s, &p) in sats.iter().enumerate() {
            if let Some(el) = elevation_angle(gs, p) {
                if el >= min_elevation_deg {
                    let w = gs.distance(p);
                    pairs.push((s, node, w));
                    links.push(GroundLink {
                        satellite: s,
                        distance_km: w,
                        elevation_deg: el,
                    });
                }
            }
        }
        links
    };
    let source_links = ground(source, n);
    let destination_links = ground(destination, n + 1);

    let (offsets, targets, weights) = compress(n + 2, &pairs);
    SlotGraph {
        time_s: positions.time_s,
        lisl_range_km,
        satellite_count: n,
        offsets,
        targets,
        weights,
        source_links,
        destination_links,
    }
}

/// A route from the source to the destination ground station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    /// Node ids in travel order, both ground stations included.
    pub nodes: Vec<NodeId>,
    /// Length of each hop (km); `edge_km.len() == nodes.len() - 1`.
    pub edge_km: Vec<f64>,
}

impl Path {
    pub fn total_km(&self) -> f64 {
        self.edge_km.iter().sum()
    }

    /// The satellites on the path, ingress first.
    pub fn satellites(&self) -> &[NodeId] {
        if self.nodes.len() < 2 {
            &[]
        } else {
            &self.nodes[1..self.nodes.len() - 1]
        }
    }

    /// Distances of the inter-satellite hops only.
    pub fn isl_km(&self) -> &[f64] {
        if self.edge_km.len() < 2 {
            &[]
        } else {
            &self.edge_km[1..self.edge_km.len() - 1]
        }
    }

    pub fn uplink_km(&self) -> f64 {
        self.edge_km[0]
    }

    pub fn downlink_km(&self) -> f64 {
        self.edge_km[self.edge_km.len() - 1]
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Queued {
    dist: f64,
    node: NodeId,
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-distance path from `source` to `destination`, or `None` when unreachable.
///
/// Ties are broken towards lower node ids: nodes settle in (distance, id)
/// order, and among equal-distance predecessors the lowest id is kept.
pub fn dijkstra(g: &SlotGraph, source: NodeId, destination: NodeId) -> Option<Path> {
    dijkstra_within(g, source, destination, f64::INFINITY)
}

/// [`dijkstra`] on the graph as if [`SlotGraph::restrict`]ed to `lisl_range_km`,
/// without building the restricted copy.
pub fn dijkstra_within(g: &SlotGraph, source: NodeId, destination: NodeId, lisl_range_km: f64) -> Option<Path> {
    let n = g.node_count();
    let satellites = g.satellite_count;
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Queued { dist: 0.0, node: source });

    while let Some(Queued { dist: d, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == destination {
            break;
        }
        let span = g.offsets[u]..g.offsets[u + 1];
        for (&to, &w) in g.targets[span.clone()].iter().zip(&g.weights[span]) {
            let v = to as NodeId;
            if done[v] || (w > lisl_range_km && u < satellites && v < satellites) {
                continue;
            }
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(Queued { dist: nd, node: v });
            } else if nd == dist[v] && u < pred[v] {
                pred[v] = u;
            }
        }
    }

    if !done[destination] {
        return None;
    }
    let mut nodes = vec![destination];
    let mut cur = destination;
    while cur != source {
        cur = pred[cur];
        nodes.push(cur);
    }
    nodes.reverse();
    let edge_km = nodes
        .windows(2)
        .map(|w| g.edge_weight(w[0], w[1]).expect("path follows graph edges"))
        .collect();
    Some(Path { nodes, edge_km })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{generate, propagate, WalkerParams};
    use crate::geo::{geodetic_to_ecef, GeoPoint};

    fn snapshot(points: Vec<Vec3>) -> SnapshotPositions {
        SnapshotPositions {
            time_s: 0.0,
            positions: points,
        }
    }

    #[test]
    fn close_pair_linked_antipodes_blocked() {
        let r = EARTH_RADIUS_KM + 550.0;
        let a = Vec3::new(r, 0.0, 0.0);
        let b = Vec3::new(r, 1.0, 0.0);
        let far = Vec3::new(-r, 0.0, 0.0);
        let gs = Vec3::new(0.0, 0.0, EARTH_RADIUS_KM);
        let g = build_slot_graph(&snapshot(vec![a, b]), gs, gs, 1575.0, 25.0);
        assert_eq!(g.edge_weight(0, 1), Some(1.0));
        let g = build_slot_graph(&snapshot(vec![a, far]), gs, gs, 20_000.0, 25.0);
        assert_eq!(g.edge_weight(0, 1), None);
    }

    #[test]
    fn toy_dijkstra() {
        // g_s = 2, g_d = 3; A = 0, B = 1
        let g = SlotGraph::from_edges(4, &[(2, 0, 10.0), (0, 3, 10.0), (2, 1, 15.0), (1, 3, 15.0)]);
        let p = dijkstra(&g, g.source(), g.destination()).unwrap();
        assert_eq!(p.nodes, vec![2, 0, 3]);
        assert_eq!(p.total_km(), 20.0);
        assert_eq!(p.satellites(), &[0]);
        assert!(p.isl_km().is_empty());
    }

    #[test]
    fn unreachable() {
        let g = SlotGraph::from_edges(4, &[(2, 0, 10.0), (0, 1, 10.0)]);
        assert!(dijkstra(&g, 2, 3).is_none());
    }

    #[test]
    fn ties_prefer_low_ids() {
        let g = SlotGraph::from_edges(4, &[(2, 1, 10.0), (1, 3, 10.0), (2, 0, 10.0), (0, 3, 10.0)]);
        assert_eq!(dijkstra(&g, 2, 3).unwrap().nodes, vec![2, 0, 3]);
    }

    #[test]
    fn restrict_drops_long_lisl_only() {
        let g = SlotGraph::from_edges(4, &[(2, 0, 5000.0), (0, 1, 3000.0), (1, 3, 4000.0)]);
        let r = g.restrict(2000.0);
        assert_eq!(r.edge_weight(0, 1), None);
        assert_eq!(r.edge_weight(0, 2), Some(5000.0));
        assert_eq!(r.edge_weight(1, 3), Some(4000.0));
    }

    #[test]
    fn starlink_degree_and_invariants() {
        let c = generate(&WalkerParams::starlink_p1v3()).unwrap();
        let pos = propagate(&c, 0.0);
        let toronto = geodetic_to_ecef(GeoPoint::new(43.65, -79.38, 0.1).unwrap());
        let sydney = geodetic_to_ecef(GeoPoint::new(-33.87, 151.21, 0.1).unwrap());
        let g = build_slot_graph(&pos, toronto, sydney, 1575.0, 25.0);
        let min_deg = (0..g.satellite_count())
            .map(|s| g.neighbors(s).filter(|e| e.kind == EdgeKind::Lisl).count())
            .min()
            .unwrap();
        assert!(min_deg >= 6, "minimum LISL degree {min_deg}");
        for u in 0..g.node_count() {
            for e in g.neighbors(u) {
                assert_eq!(g.edge_weight(e.to, u), Some(e.weight_km));
                if e.kind == EdgeKind::Lisl {
                    assert!(e.weight_km <= 1575.0);
                } else {
                    assert!(!(u >= g.satellite_count() && e.to >= g.satellite_count()));
                }
            }
        }
        for l in g.source_links().iter().chain(g.destination_links()) {
            assert!(l.elevation_deg >= 25.0);
        }
    }
}
