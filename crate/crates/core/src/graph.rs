//! The bipartite rating graph produced by the generator.

use crate::ids::{ItemId, Modality, UserId};
use crate::params::GeneratorParams;

/// One rated user–item edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RatedEdge {
    pub user: UserId,
    pub item: ItemId,
    pub rating: i32,
}

impl RatedEdge {
    pub fn new(user: u32, item: u32, rating: i32) -> Self {
        RatedEdge {
            user: UserId(user),
            item: ItemId(item),
            rating,
        }
    }
}

/// A simple bipartite graph with integer-rated edges.
///
/// Degrees and adjacency cover training edges only; holdout edges are kept
/// aside until an update batch releases them. Node ids are dense, so nodes
/// created during the holdout phase may have training degree zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Bigraph {
    params: Option<GeneratorParams>,
    user_degrees: Vec<u32>,
    item_degrees: Vec<u32>,
    user_items: Vec<Vec<(ItemId, i32)>>,
    item_users: Vec<Vec<(UserId, i32)>>,
    edges: Vec<RatedEdge>,
    holdout: Vec<RatedEdge>,
}

impl Bigraph {
    /// Assembles a graph from edge lists. Node counts are taken from the
    /// given sizes, which must cover every id referenced by an edge.
    pub fn from_parts(
        params: Option<GeneratorParams>,
        n_users: usize,
        n_items: usize,
        edges: Vec<RatedEdge>,
        holdout: Vec<RatedEdge>,
    ) -> Self {
        let mut graph = Bigraph {
            params,
            user_degrees: vec![0; n_users],
            item_degrees: vec![0; n_items],
            user_items: vec![Vec::new(); n_users],
            item_users: vec![Vec::new(); n_items],
            edges,
            holdout,
        };
        for edge in &graph.edges {
            graph.user_degrees[edge.user.index()] += 1;
            graph.item_degrees[edge.item.index()] += 1;
        }
        for edge in graph.edges.clone() {
            graph.user_items[edge.user.index()].push((edge.item, edge.rating));
            graph.item_users[edge.item.index()].push((edge.user, edge.rating));
        }
        graph
    }

    pub fn params(&self) -> Option<&GeneratorParams> {
        self.params.as_ref()
    }

    pub fn user_count(&self) -> usize {
        self.user_degrees.len()
    }

    pub fn item_count(&self) -> usize {
        self.item_degrees.len()
    }

    pub fn node_count(&self) -> usize {
        self.user_count() + self.item_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[RatedEdge] {
        &self.edges
    }

    pub fn holdout_edges(&self) -> &[RatedEdge] {
        &self.holdout
    }

    pub fn user_degree(&self, user: UserId) -> u32 {
        self.user_degrees[user.index()]
    }

    pub fn item_degree(&self, item: ItemId) -> u32 {
        self.item_degrees[item.index()]
    }

    pub fn user_degrees(&self) -> &[u32] {
        &self.user_degrees
    }

    pub fn item_degrees(&self) -> &[u32] {
        &self.item_degrees
    }

    /// Items rated by `user`, in edge-creation order.
    pub fn items_of(&self, user: UserId) -> &[(ItemId, i32)] {
        &self.user_items[user.index()]
    }

    /// Users who rated `item`, in edge-creation order.
    pub fn users_of(&self, item: ItemId) -> &[(UserId, i32)] {
        &self.item_users[item.index()]
    }
}

/// Per-iteration attachment bookkeeping.
///
/// `preferential` counts edges attached by a plain preferential draw,
/// including bounce attempts that fell back; `bounced` counts edges whose
/// endpoint came out of a completed bounce walk; `random` counts uniform
/// draws as well as forced full-coverage attachments taken when the opposite
/// modality is too small; `shortfall` counts edges that could not be attached
/// at all. The four sum to `u` (user iteration) or `v` (item iteration).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IterationTrace {
    pub modality: TraceModality,
    pub preferential: u32,
    pub random: u32,
    pub bounced: u32,
    pub bounce_fallbacks: u32,
    pub shortfall: u32,
}

// Default only exists so IterationTrace::default() can seed a record; the
// modality is always overwritten.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceModality(pub Modality);

impl Default for TraceModality {
    fn default() -> Self {
        TraceModality(Modality::User)
    }
}

impl IterationTrace {
    pub fn attached(&self) -> u32 {
        self.preferential + self.random + self.bounced
    }

    /// Number of bounce walks started (completed or fallen back).
    pub fn bounce_invocations(&self) -> u32 {
        self.bounced + self.bounce_fallbacks
    }
}

/// The full growth history of one generated graph, holdout phase included.
#[derive(Clone, Debug, Default)]
pub struct GrowthTrace {
    pub iterations: Vec<IterationTrace>,
}

impl GrowthTrace {
    pub fn bounce_invocations(&self) -> u64 {
        self.iterations.iter().map(|t| t.bounce_invocations() as u64).sum()
    }

    pub fn total_shortfall(&self) -> u64 {
        self.iterations.iter().map(|t| t.shortfall as u64).sum()
    }

    pub fn has_shortfall(&self) -> bool {
        self.iterations.iter().any(|t| t.shortfall > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_follow_training_edges_only() {
        let graph = Bigraph::from_parts(
            None,
            2,
            2,
            vec![RatedEdge::new(0, 0, 3), RatedEdge::new(1, 0, 4)],
            vec![RatedEdge::new(1, 1, 2)],
        );
        assert_eq!(graph.user_degree(UserId(0)), 1);
        assert_eq!(graph.item_degree(ItemId(0)), 2);
        assert_eq!(graph.item_degree(ItemId(1)), 0);
        let total: u32 = graph.user_degrees().iter().sum();
        assert_eq!(total as usize, graph.edge_count());
    }
}
