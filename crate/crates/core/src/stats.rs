//! Topological diagnostics: degree distributions, the bipartite local
//! clustering coefficient, similar-user statistics, and the asymptotic
//! second-neighbor estimate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{map_indexed_with_scratch, ExecMode};
use crate::graph::Bigraph;
use crate::ids::{ItemId, Modality, Node, UserId};

/// Exact degree histogram of one modality with its first two raw moments.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    pub modality: Modality,
    pub histogram: BTreeMap<u32, u32>,
    pub mean: f64,
    pub second_moment: f64,
}

impl DegreeDistribution {
    pub fn node_count(&self) -> u64 {
        self.histogram.values().map(|&c| c as u64).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn degree_distribution(graph: &Bigraph, modality: Modality) -> DegreeDistribution {
    let degrees = match modality {
        Modality::User => graph.user_degrees(),
        Modality::Item => graph.item_degrees(),
    };
    let mut histogram = BTreeMap::new();
    for &d in degrees {
        *histogram.entry(d).or_insert(0u32) += 1;
    }
    let n = degrees.len() as f64;
    let mean = degrees.iter().map(|&d| d as f64).sum::<f64>() / n;
    let second_moment = degrees.iter().map(|&d| (d as f64) * (d as f64)).sum::<f64>() / n;
    DegreeDistribution {
        modality,
        histogram,
        mean,
        second_moment,
    }
}

/// A bipartite local clustering coefficient value. When the denominator is
/// zero (no neighbor has degree above one) the value is a `0.0` sentinel
/// with `defined = false`, and means skip the node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blcc {
    pub value: f64,
    pub defined: bool,
}

/// `1 - |N2(j)| / sum_{i in N1(j)} (k_i - 1)` where `N2(j)` is the set of
/// distinct nodes at distance two from `j`, excluding `j` itself.
pub fn blcc(graph: &Bigraph, node: Node) -> Blcc {
    let mut scratch = NeighborScratch::new(graph);
    blcc_with_scratch(graph, node, &mut scratch)
}

fn blcc_with_scratch(graph: &Bigraph, node: Node, scratch: &mut NeighborScratch) -> Blcc {
    let (denominator, second) = match node {
        Node::User(u) => {
            let mut denom = 0u64;
            scratch.begin_user_round();
            let mut count = 0u64;
            for &(item, _) in graph.items_of(u) {
                denom += (graph.item_degree(item) as u64).saturating_sub(1);
                for &(other, _) in graph.users_of(item) {
                    if other != u && scratch.mark_user(other) {
                        count += 1;
                    }
                }
            }
            (denom, count)
        }
        Node::Item(i) => {
            let mut denom = 0u64;
            scratch.begin_item_round();
            let mut count = 0u64;
            for &(user, _) in graph.users_of(i) {
                denom += (graph.user_degree(user) as u64).saturating_sub(1);
                for &(other, _) in graph.items_of(user) {
                    if other != i && scratch.mark_item(other) {
                        count += 1;
                    }
                }
            }
            (denom, count)
        }
    };
    if denominator == 0 {
        Blcc {
            value: 0.0,
            defined: false,
        }
    } else {
        Blcc {
            value: 1.0 - second as f64 / denominator as f64,
            defined: true,
        }
    }
}

/// Mean BLCC over users with a defined value, plus how many were defined.
pub fn mean_user_blcc(graph: &Bigraph, mode: ExecMode) -> (f64, usize) {
    let values = map_indexed_with_scratch(
        graph.user_count(),
        mode,
        || NeighborScratch::new(graph),
        |scratch, u| blcc_with_scratch(graph, Node::User(UserId(u as u32)), scratch),
    );
    let mut sum = 0.0;
    let mut defined = 0usize;
    for b in &values {
        if b.defined {
            sum += b.value;
            defined += 1;
        }
    }
    if defined == 0 {
        (0.0, 0)
    } else {
        (sum / defined as f64, defined)
    }
}

/// The asymptotic estimate of a user's second-neighbor count,
/// `<U> * (<I^2>/<I> - 1)`, from the two degree distributions.
pub fn newman_second_neighbors(
    user_dist: &DegreeDistribution,
    item_dist: &DegreeDistribution,
) -> Result<f64> {
    if item_dist.mean <= 0.0 {
        return Err(Error::UndefinedInput(
            "mean item degree is zero".to_string(),
        ));
    }
    Ok(user_dist.mean * (item_dist.second_moment / item_dist.mean - 1.0))
}

/// Means over users of: the number of other users sharing at least one item
/// (`neighbors`), and the number of items those neighbors rated. The
/// exclusive count drops the focal user's own items, the inclusive count
/// keeps them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarUserStats {
    pub mean_neighbors: f64,
    pub mean_second_items: f64,
    pub mean_second_items_incl: f64,
}

pub fn similar_user_stats(graph: &Bigraph, mode: ExecMode) -> SimilarUserStats {
    let per_user = map_indexed_with_scratch(
        graph.user_count(),
        mode,
        || NeighborScratch::new(graph),
        |scratch, idx| {
            let u = UserId(idx as u32);
            scratch.begin_user_round();
            scratch.begin_item_round();
            let mut neighbors: Vec<UserId> = Vec::new();
            for &(item, _) in graph.items_of(u) {
                scratch.mark_item(item);
                for &(other, _) in graph.users_of(item) {
                    if other != u && scratch.mark_user(other) {
                        neighbors.push(other);
                    }
                }
            }
            // Own items were pre-marked, so newly marked items of neighbors
            // are the exclusive count; own items that some neighbor also
            // rated are added back for the inclusive count.
            let mut second_excl = 0u64;
            for &w in &neighbors {
                for &(item, _) in graph.items_of(w) {
                    if scratch.mark_item(item) {
                        second_excl += 1;
                    }
                }
            }
            let own_shared = graph
                .items_of(u)
                .iter()
                .filter(|&&(item, _)| graph.users_of(item).iter().any(|&(w, _)| w != u))
                .count() as u64;
            (neighbors.len() as u64, second_excl, second_excl + own_shared)
        },
    );
    let n = per_user.len().max(1) as f64;
    let mut nb = 0.0;
    let mut excl = 0.0;
    let mut incl = 0.0;
    for &(a, b, c) in &per_user {
        nb += a as f64;
        excl += b as f64;
        incl += c as f64;
    }
    SimilarUserStats {
        mean_neighbors: nb / n,
        mean_second_items: excl / n,
        mean_second_items_incl: incl / n,
    }
}

/// One-record aggregate of the statistics the benchmark exports per graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSummary {
    pub users: usize,
    pub items: usize,
    pub edges: usize,
    pub mean_user_degree: f64,
    pub mean_item_degree: f64,
    pub mean_blcc_users: f64,
    pub blcc_defined_users: usize,
    pub mean_neighbors: f64,
    pub mean_second_items: f64,
    pub mean_second_items_incl: f64,
    pub newman_second_neighbors: f64,
}

pub fn summarize(graph: &Bigraph) -> GraphSummary {
    summarize_mode(graph, ExecMode::default())
}

pub fn summarize_mode(graph: &Bigraph, mode: ExecMode) -> GraphSummary {
    let user_dist = degree_distribution(graph, Modality::User);
    let item_dist = degree_distribution(graph, Modality::Item);
    let (mean_blcc_users, blcc_defined_users) = mean_user_blcc(graph, mode);
    let similar = similar_user_stats(graph, mode);
    let newman = newman_second_neighbors(&user_dist, &item_dist).unwrap_or(0.0);
    GraphSummary {
        users: graph.user_count(),
        items: graph.item_count(),
        edges: graph.edge_count(),
        mean_user_degree: user_dist.mean,
        mean_item_degree: item_dist.mean,
        mean_blcc_users,
        blcc_defined_users,
        mean_neighbors: similar.mean_neighbors,
        mean_second_items: similar.mean_second_items,
        mean_second_items_incl: similar.mean_second_items_incl,
        newman_second_neighbors: newman,
    }
}

/// Stamped marker arrays reused across per-node rounds, avoiding a set
/// allocation per node.
struct NeighborScratch {
    user_stamp: Vec<u32>,
    item_stamp: Vec<u32>,
    user_round: u32,
    item_round: u32,
}

impl NeighborScratch {
    fn new(graph: &Bigraph) -> Self {
        NeighborScratch {
            user_stamp: vec![0; graph.user_count()],
            item_stamp: vec![0; graph.item_count()],
            user_round: 0,
            item_round: 0,
        }
    }

    fn begin_user_round(&mut self) {
        self.user_round += 1;
    }

    fn begin_item_round(&mut self) {
        self.item_round += 1;
    }

    /// Marks a user for the current round; true when not yet marked.
    fn mark_user(&mut self, user: UserId) -> bool {
        let slot = &mut self.user_stamp[user.index()];
        if *slot == self.user_round {
            false
        } else {
            *slot = self.user_round;
            true
        }
    }

    fn mark_item(&mut self, item: ItemId) -> bool {
        let slot = &mut self.item_stamp[item.index()];
        if *slot == self.item_round {
            false
        } else {
            *slot = self.item_round;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RatedEdge;

    fn graph(n_users: usize, n_items: usize, edges: &[(u32, u32)]) -> Bigraph {
        let edges = edges
            .iter()
            .map(|&(u, i)| RatedEdge::new(u, i, 3))
            .collect();
        Bigraph::from_parts(None, n_users, n_items, edges, Vec::new())
    }

    fn k22() -> Bigraph {
        graph(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)])
    }

    /// u0 - i0 - u1 - i1 - u2
    fn path5() -> Bigraph {
        graph(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)])
    }

    #[test]
    fn blcc_zero_on_trees() {
        let g = graph(2, 1, &[(0, 0), (1, 0)]);
        let b = blcc(&g, Node::User(UserId(0)));
        assert!(b.defined);
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn blcc_half_on_k22() {
        let g = k22();
        for u in 0..2 {
            let b = blcc(&g, Node::User(UserId(u)));
            assert!(b.defined);
            assert_eq!(b.value, 0.5);
        }
        let b = blcc(&g, Node::Item(ItemId(0)));
        assert_eq!(b.value, 0.5);
    }

    #[test]
    fn blcc_sentinel_when_neighbors_have_degree_one() {
        let g = graph(1, 2, &[(0, 0), (0, 1)]);
        let b = blcc(&g, Node::User(UserId(0)));
        assert!(!b.defined);
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn degree_histograms_are_exact() {
        let g = k22();
        let users = degree_distribution(&g, Modality::User);
        assert_eq!(users.histogram.get(&2), Some(&2));
        assert_eq!(users.mean, 2.0);

        let path = path5();
        let items = degree_distribution(&path, Modality::Item);
        assert_eq!(items.histogram.get(&2), Some(&2));
        assert_eq!(items.mean, 2.0);
        assert_eq!(items.second_moment, 4.0);
    }

    #[test]
    fn handshake_identity() {
        let g = crate::generator::generate(crate::params::GeneratorParams::new(
            5, 200, 0.5, 3, 2, 0.5, 0.5, 0.3, 17,
        ))
        .unwrap();
        for modality in [Modality::User, Modality::Item] {
            let dist = degree_distribution(&g, modality);
            let total: u64 = dist.histogram.iter().map(|(&d, &c)| d as u64 * c as u64).sum();
            assert_eq!(total as usize, g.edge_count());
            assert_eq!(dist.node_count() as usize, match modality {
                Modality::User => g.user_count(),
                Modality::Item => g.item_count(),
            });
        }
    }

    #[test]
    fn newman_exact_on_path() {
        let g = path5();
        let ud = degree_distribution(&g, Modality::User);
        let id = degree_distribution(&g, Modality::Item);
        let estimate = newman_second_neighbors(&ud, &id).unwrap();
        assert!((estimate - 4.0 / 3.0).abs() < 1e-12);
        // Measured distinct second neighbors: 1, 2, 1 -> mean 4/3.
        let measured = measured_mean_second_users(&g);
        assert!((estimate - measured).abs() < 1e-12);
    }

    #[test]
    fn newman_zero_when_items_unit_degree() {
        let g = graph(2, 2, &[(0, 0), (1, 1)]);
        let ud = degree_distribution(&g, Modality::User);
        let id = degree_distribution(&g, Modality::Item);
        assert_eq!(newman_second_neighbors(&ud, &id).unwrap(), 0.0);
    }

    #[test]
    fn newman_overcounts_on_cycles() {
        let g = k22();
        let ud = degree_distribution(&g, Modality::User);
        let id = degree_distribution(&g, Modality::Item);
        let estimate = newman_second_neighbors(&ud, &id).unwrap();
        assert_eq!(estimate, 2.0);
        assert_eq!(measured_mean_second_users(&g), 1.0);
    }

    fn measured_mean_second_users(g: &Bigraph) -> f64 {
        let mut total = 0.0;
        for u in 0..g.user_count() {
            let mut seen = std::collections::HashSet::new();
            for &(item, _) in g.items_of(UserId(u as u32)) {
                for &(w, _) in g.users_of(item) {
                    if w.index() != u {
                        seen.insert(w);
                    }
                }
            }
            total += seen.len() as f64;
        }
        total / g.user_count() as f64
    }

    #[test]
    fn similar_users_on_k22() {
        let s = similar_user_stats(&k22(), ExecMode::Sequential);
        assert_eq!(s.mean_neighbors, 1.0);
        // The other user rates exactly the focal user's two items.
        assert_eq!(s.mean_second_items, 0.0);
        assert_eq!(s.mean_second_items_incl, 2.0);
    }

    #[test]
    fn similar_users_on_path() {
        let g = path5();
        let s = similar_user_stats(&g, ExecMode::Sequential);
        // neighbors: u0 -> {u1}, u1 -> {u0, u2}, u2 -> {u1}
        assert!((s.mean_neighbors - 4.0 / 3.0).abs() < 1e-12);
        // exclusive second items: u0 -> {i1}, u1 -> {}, u2 -> {i0}
        assert!((s.mean_second_items - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_stars_have_no_neighbors() {
        let g = graph(2, 4, &[(0, 0), (0, 1), (1, 2), (1, 3)]);
        let s = similar_user_stats(&g, ExecMode::Sequential);
        assert_eq!(s.mean_neighbors, 0.0);
    }

    #[test]
    fn summary_of_k22() {
        let s = summarize_mode(&k22(), ExecMode::Sequential);
        assert_eq!(s.users, 2);
        assert_eq!(s.items, 2);
        assert_eq!(s.edges, 4);
        assert_eq!(s.mean_blcc_users, 0.5);
        assert_eq!(s.blcc_defined_users, 2);
    }

    #[test]
    fn summary_of_single_edge() {
        let g = graph(1, 1, &[(0, 0)]);
        let s = summarize_mode(&g, ExecMode::Sequential);
        assert_eq!(s.mean_blcc_users, 0.0);
        assert_eq!(s.blcc_defined_users, 0);
        assert_eq!(s.mean_neighbors, 0.0);
    }

    #[test]
    fn summaries_identical_across_modes() {
        let g = crate::generator::generate(crate::params::GeneratorParams::new(
            10, 500, 0.5, 4, 3, 0.7, 0.6, 0.5, 23,
        ))
        .unwrap();
        let a = summarize_mode(&g, ExecMode::Parallel);
        let b = summarize_mode(&g, ExecMode::Sequential);
        assert_eq!(a, b);
    }
}
