//! Six collaborative-filtering recommenders behind one contract: build from
//! a rating data model, estimate preferences, recommend top-N, fold in new
//! ratings, and report a deterministic memory footprint.
//!
//! Candidate items for a recommendation are the items rated by users who
//! share at least one item with the focal user, minus the user's own items.
//! Every algorithm scores this same candidate set, so recommendation latency
//! always includes the candidate search.
//!
//! Memory is accounted with fixed per-entry costs instead of process-level
//! sampling, so footprints are reproducible: see the `BYTES_PER_*` constants.

mod neighborhood;
mod slope_one;
mod svd;

pub use neighborhood::NeighborhoodModel;
pub use slope_one::SlopeOneModel;
pub use svd::SvdModel;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ItemId, UserId};
use crate::model::{InsertOutcome, RatingDataModel};
use crate::similarity::SimilarityKind;

/// Per-entry costs of the footprint accounting.
pub const BYTES_PER_RATING_ENTRY: u64 = 8;
pub const BYTES_PER_VIEW_SLOT: u64 = 24;
pub const BYTES_PER_DIFF_ENTRY: u64 = 24;
pub const BYTES_PER_FACTOR: u64 = 8;
pub const MODEL_BASE_BYTES: u64 = 64;

/// Retained size of the rating views: every rating appears in both views.
pub fn view_bytes(data: &RatingDataModel) -> u64 {
    2 * data.rating_count() as u64 * BYTES_PER_RATING_ENTRY
        + (data.user_count() + data.item_count()) as u64 * BYTES_PER_VIEW_SLOT
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    UserBased,
    ItemBased,
    SlopeOne,
    UserThreshold,
    KnnItem,
    Svd,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::UserBased,
        AlgorithmKind::ItemBased,
        AlgorithmKind::SlopeOne,
        AlgorithmKind::UserThreshold,
        AlgorithmKind::KnnItem,
        AlgorithmKind::Svd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::UserBased => "userbased",
            AlgorithmKind::ItemBased => "itembased",
            AlgorithmKind::SlopeOne => "slopeone",
            AlgorithmKind::UserThreshold => "userthreshold",
            AlgorithmKind::KnnItem => "knnitem",
            AlgorithmKind::Svd => "svd",
        }
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "userbased" => Ok(AlgorithmKind::UserBased),
            "itembased" => Ok(AlgorithmKind::ItemBased),
            "slopeone" => Ok(AlgorithmKind::SlopeOne),
            "userthreshold" => Ok(AlgorithmKind::UserThreshold),
            "knnitem" => Ok(AlgorithmKind::KnnItem),
            "svd" => Ok(AlgorithmKind::Svd),
            other => Err(format!(
                "unknown algorithm `{other}` (expected userbased|itembased|slopeone|userthreshold|knnitem|svd)"
            )),
        }
    }
}

impl std::fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Algorithm selection plus all hyperparameters. Defaults: Pearson
/// similarity, neighborhood 200, 10 factors, 200 training iterations.
/// `UserThreshold` has no default threshold; it must be set explicitly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecommenderConfig {
    pub algorithm: AlgorithmKind,
    pub similarity: SimilarityKind,
    pub neighborhood_size: usize,
    pub threshold: Option<f64>,
    pub knn_k: usize,
    pub factors: usize,
    pub training_iterations: usize,
    pub learning_rate: f64,
    pub regularization: f64,
    pub top_n: usize,
    pub seed: u64,
}

impl RecommenderConfig {
    pub fn new(algorithm: AlgorithmKind) -> Self {
        RecommenderConfig {
            algorithm,
            similarity: SimilarityKind::Pearson,
            neighborhood_size: 200,
            threshold: None,
            knn_k: 200,
            factors: 10,
            training_iterations: 200,
            learning_rate: 0.01,
            regularization: 0.02,
            top_n: 10,
            seed: 42,
        }
    }

    pub fn with_similarity(mut self, similarity: SimilarityKind) -> Self {
        self.similarity = similarity;
        self
    }

    pub fn with_neighborhood(mut self, size: usize) -> Self {
        self.neighborhood_size = size;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn with_knn_k(mut self, k: usize) -> Self {
        self.knn_k = k;
        self
    }

    pub fn with_top_n(mut self, top_n: usize) -> Self {
        self.top_n = top_n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.neighborhood_size < 1 {
            return Err(Error::invalid("neighborhood", "must be at least 1"));
        }
        if self.knn_k < 1 {
            return Err(Error::invalid("knn-k", "must be at least 1"));
        }
        if self.factors < 1 {
            return Err(Error::invalid("factors", "must be at least 1"));
        }
        if self.training_iterations < 1 {
            return Err(Error::invalid("iterations", "must be at least 1"));
        }
        if self.algorithm == AlgorithmKind::UserThreshold {
            match self.threshold {
                None => {
                    return Err(Error::invalid(
                        "threshold",
                        "required for the userthreshold algorithm",
                    ))
                }
                Some(t) if t < 0.0 => {
                    return Err(Error::invalid("threshold", "must be non-negative"))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// An ordered recommendation list: descending estimate, ties broken by
/// ascending item id, never containing items the user already rated.
#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation {
    pub items: Vec<(ItemId, f64)>,
    /// Set when the requested user was unknown to the model.
    pub unknown_user: bool,
}

impl Recommendation {
    pub fn empty(unknown_user: bool) -> Self {
        Recommendation {
            items: Vec::new(),
            unknown_user,
        }
    }
}

/// A trained recommender of any of the six kinds.
pub enum RecommenderModel {
    Neighborhood(NeighborhoodModel),
    SlopeOne(SlopeOneModel),
    Svd(SvdModel),
}

impl RecommenderModel {
    pub fn build(config: RecommenderConfig, data: RatingDataModel) -> Result<Self> {
        config.validate()?;
        if data.is_empty() {
            return Err(Error::EmptyData);
        }
        Ok(match config.algorithm {
            AlgorithmKind::SlopeOne => RecommenderModel::SlopeOne(SlopeOneModel::build(config, data)),
            AlgorithmKind::Svd => RecommenderModel::Svd(SvdModel::build(config, data)),
            _ => RecommenderModel::Neighborhood(NeighborhoodModel::build(config, data)),
        })
    }

    pub fn kind(&self) -> AlgorithmKind {
        self.config().algorithm
    }

    pub fn config(&self) -> &RecommenderConfig {
        match self {
            RecommenderModel::Neighborhood(m) => m.config(),
            RecommenderModel::SlopeOne(m) => m.config(),
            RecommenderModel::Svd(m) => m.config(),
        }
    }

    pub fn data(&self) -> &RatingDataModel {
        match self {
            RecommenderModel::Neighborhood(m) => m.data(),
            RecommenderModel::SlopeOne(m) => m.data(),
            RecommenderModel::Svd(m) => m.data(),
        }
    }

    /// Estimated preference of `user` for `item`; `None` when the ids are
    /// unknown or there is no usable evidence.
    pub fn estimate(&self, user: UserId, item: ItemId) -> Option<f64> {
        match self {
            RecommenderModel::Neighborhood(m) => m.estimate(user, item),
            RecommenderModel::SlopeOne(m) => m.estimate(user, item),
            RecommenderModel::Svd(m) => m.estimate(user, item),
        }
    }

    /// Scores every candidate item the user has not rated and returns the
    /// `top_n` best. Unknown users get an empty, flagged result.
    pub fn recommend(&self, user: UserId, top_n: usize) -> Recommendation {
        match self {
            RecommenderModel::Neighborhood(m) => m.recommend(user, top_n),
            RecommenderModel::SlopeOne(m) => m.recommend(user, top_n),
            RecommenderModel::Svd(m) => m.recommend(user, top_n),
        }
    }

    /// Folds a batch of new ratings into the model. Duplicate (user, item)
    /// pairs are rejected record by record; the rest proceed.
    pub fn update(&mut self, new_ratings: &[(UserId, ItemId, i32)]) -> InsertOutcome {
        match self {
            RecommenderModel::Neighborhood(m) => m.update(new_ratings),
            RecommenderModel::SlopeOne(m) => m.update(new_ratings),
            RecommenderModel::Svd(m) => m.update(new_ratings),
        }
    }

    /// Deterministic retained size of the trained state, in bytes.
    pub fn footprint_bytes(&self) -> u64 {
        match self {
            RecommenderModel::Neighborhood(m) => m.footprint_bytes(),
            RecommenderModel::SlopeOne(m) => m.footprint_bytes(),
            RecommenderModel::Svd(m) => m.footprint_bytes(),
        }
    }
}

/// Items rated by users who co-rated something with `user`, excluding the
/// user's own items, ascending by id.
pub(crate) fn candidate_items(data: &RatingDataModel, user: UserId) -> Vec<u32> {
    let mut seen_users = vec![false; data.user_count()];
    let mut seen_items = vec![false; data.item_count()];
    for &(i, _) in data.items_of(user) {
        seen_items[i as usize] = true;
    }
    let mut out = Vec::new();
    for &(i, _) in data.items_of(user) {
        for &(w, _) in data.users_of(ItemId(i)) {
            if w as usize == user.index() || seen_users[w as usize] {
                continue;
            }
            seen_users[w as usize] = true;
            for &(j, _) in data.items_of(UserId(w)) {
                if !seen_items[j as usize] {
                    seen_items[j as usize] = true;
                    out.push(j);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Shared ranking rule: estimate descending, ties by ascending item id.
pub(crate) fn rank_and_truncate(mut scored: Vec<(ItemId, f64)>, top_n: usize) -> Vec<(ItemId, f64)> {
    scored.sort_unstable_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("estimates are finite")
            .then_with(|| a.0.cmp(&b.0))
    });
    scored.truncate(top_n);
    scored
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_items_are_second_neighbor_items() {
        // u0: {i0, i1}; u1: {i1, i2}; u2: {i3} (disconnected from u0)
        let data =
            RatingDataModel::from_ratings(&[(0, 0, 5), (0, 1, 3), (1, 1, 4), (1, 2, 2), (2, 3, 1)])
                .unwrap();
        assert_eq!(candidate_items(&data, UserId(0)), vec![2]);
        assert_eq!(candidate_items(&data, UserId(2)), Vec::<u32>::new());
    }

    #[test]
    fn ranking_breaks_ties_by_item_id() {
        let scored = vec![
            (ItemId(5), 1.0),
            (ItemId(2), 3.0),
            (ItemId(9), 3.0),
            (ItemId(1), 2.0),
        ];
        let ranked = rank_and_truncate(scored, 3);
        assert_eq!(
            ranked,
            vec![(ItemId(2), 3.0), (ItemId(9), 3.0), (ItemId(1), 2.0)]
        );
    }

    #[test]
    fn user_threshold_requires_threshold() {
        let config = RecommenderConfig::new(AlgorithmKind::UserThreshold);
        assert!(config.validate().is_err());
        assert!(config.with_threshold(0.1).validate().is_ok());
    }

    #[test]
    fn empty_data_is_a_build_error() {
        let config = RecommenderConfig::new(AlgorithmKind::UserBased);
        match RecommenderModel::build(config, RatingDataModel::new()) {
            Err(Error::EmptyData) => {}
            other => panic!("expected EmptyData, got {:?}", other.is_ok()),
        }
    }
}
