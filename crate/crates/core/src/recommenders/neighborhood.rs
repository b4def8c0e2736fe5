//! The four neighborhood recommenders: UserBased, UserThreshold, ItemBased
//! and KnnItem. Similarities are computed on demand at recommendation time,
//! without caching, so BUILD stays cheap and LATENCY reflects the full
//! neighborhood search.

use crate::ids::{ItemId, UserId};
use crate::model::{InsertOutcome, RatingDataModel};
use crate::similarity::similarity_entries;

use super::{
    candidate_items, rank_and_truncate, view_bytes, AlgorithmKind, Recommendation,
    RecommenderConfig, MODEL_BASE_BYTES,
};

pub struct NeighborhoodModel {
    config: RecommenderConfig,
    data: RatingDataModel,
}

impl NeighborhoodModel {
    pub(crate) fn build(config: RecommenderConfig, data: RatingDataModel) -> Self {
        NeighborhoodModel { config, data }
    }

    pub fn config(&self) -> &RecommenderConfig {
        &self.config
    }

    pub fn data(&self) -> &RatingDataModel {
        &self.data
    }

    fn item_similarity(&self, i: ItemId, j: ItemId) -> Option<f64> {
        similarity_entries(
            self.config.similarity,
            self.data.users_of(i),
            self.data.users_of(j),
            self.data.user_count(),
        )
    }

    /// The user neighborhood, ascending by user id.
    ///
    /// UserBased keeps the `neighborhood_size` most similar users among
    /// those with defined positive similarity; UserThreshold keeps everyone
    /// at or above the threshold, uncapped.
    fn user_neighborhood(&self, user: UserId) -> Vec<(u32, f64)> {
        let mut picked: Vec<(u32, f64)> = Vec::new();
        let focal = self.data.items_of(user);
        for w in 0..self.data.user_count() as u32 {
            if w as usize == user.index() {
                continue;
            }
            let sim = similarity_entries(
                self.config.similarity,
                focal,
                self.data.items_of(UserId(w)),
                self.data.item_count(),
            );
            let Some(s) = sim else { continue };
            match self.config.algorithm {
                AlgorithmKind::UserThreshold => {
                    if s >= self.config.threshold.expect("validated") {
                        picked.push((w, s));
                    }
                }
                _ => {
                    if s > 0.0 {
                        picked.push((w, s));
                    }
                }
            }
        }
        if self.config.algorithm == AlgorithmKind::UserBased
            && picked.len() > self.config.neighborhood_size
        {
            picked.sort_unstable_by(|a, b| {
                b.1.partial_cmp(&a.1).expect("finite").then_with(|| a.0.cmp(&b.0))
            });
            picked.truncate(self.config.neighborhood_size);
            picked.sort_unstable_by_key(|&(w, _)| w);
        }
        picked
    }

    fn estimate_user_based(&self, neighborhood: &[(u32, f64)], item: ItemId) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(w, s) in neighborhood {
            if let Some(r) = self.data.rating(UserId(w), item) {
                num += s * r;
                den += s.abs();
            }
        }
        self.finish_estimate(num, den)
    }

    fn estimate_item_based(&self, user: UserId, item: ItemId) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(j, r) in self.data.items_of(user) {
            if j == item.0 {
                continue;
            }
            if let Some(s) = self.item_similarity(item, ItemId(j)) {
                num += s * r;
                den += s.abs();
            }
        }
        self.finish_estimate(num, den)
    }

    fn estimate_knn_item(&self, user: UserId, item: ItemId) -> Option<f64> {
        let mut scored: Vec<(u32, f64, f64)> = Vec::new();
        for &(j, r) in self.data.items_of(user) {
            if j == item.0 {
                continue;
            }
            if let Some(s) = self.item_similarity(item, ItemId(j)) {
                scored.push((j, r, s));
            }
        }
        if scored.len() > self.config.knn_k {
            scored.sort_unstable_by(|a, b| {
                b.2.partial_cmp(&a.2).expect("finite").then_with(|| a.0.cmp(&b.0))
            });
            scored.truncate(self.config.knn_k);
            scored.sort_unstable_by_key(|&(j, _, _)| j);
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for &(_, r, s) in &scored {
            num += s * r;
            den += s.abs();
        }
        self.finish_estimate(num, den)
    }

    fn finish_estimate(&self, num: f64, den: f64) -> Option<f64> {
        if den > 0.0 {
            let (lo, hi) = self.data.rating_bounds();
            Some((num / den).clamp(lo, hi))
        } else {
            None
        }
    }

    pub fn estimate(&self, user: UserId, item: ItemId) -> Option<f64> {
        if !self.data.has_user(user) || !self.data.has_item(item) {
            return None;
        }
        match self.config.algorithm {
            AlgorithmKind::UserBased | AlgorithmKind::UserThreshold => {
                let neighborhood = self.user_neighborhood(user);
                self.estimate_user_based(&neighborhood, item)
            }
            AlgorithmKind::ItemBased => self.estimate_item_based(user, item),
            AlgorithmKind::KnnItem => self.estimate_knn_item(user, item),
            _ => unreachable!("not a neighborhood algorithm"),
        }
    }

    pub fn recommend(&self, user: UserId, top_n: usize) -> Recommendation {
        if !self.data.has_user(user) {
            return Recommendation::empty(true);
        }
        let candidates = candidate_items(&self.data, user);
        let mut scored: Vec<(ItemId, f64)> = Vec::new();
        match self.config.algorithm {
            AlgorithmKind::UserBased | AlgorithmKind::UserThreshold => {
                let neighborhood = self.user_neighborhood(user);
                // One pass over the neighborhood's ratings scores every
                // candidate; the accumulation order (ascending neighbor id)
                // matches estimate_user_based exactly.
                let mut is_candidate = vec![false; self.data.item_count()];
                for &c in &candidates {
                    is_candidate[c as usize] = true;
                }
                let mut num = vec![0.0f64; self.data.item_count()];
                let mut den = vec![0.0f64; self.data.item_count()];
                for &(w, s) in &neighborhood {
                    for &(j, r) in self.data.items_of(UserId(w)) {
                        if is_candidate[j as usize] {
                            num[j as usize] += s * r;
                            den[j as usize] += s.abs();
                        }
                    }
                }
                for &c in &candidates {
                    if let Some(est) = self.finish_estimate(num[c as usize], den[c as usize]) {
                        scored.push((ItemId(c), est));
                    }
                }
            }
            AlgorithmKind::ItemBased => {
                for &c in &candidates {
                    if let Some(est) = self.estimate_item_based(user, ItemId(c)) {
                        scored.push((ItemId(c), est));
                    }
                }
            }
            AlgorithmKind::KnnItem => {
                for &c in &candidates {
                    if let Some(est) = self.estimate_knn_item(user, ItemId(c)) {
                        scored.push((ItemId(c), est));
                    }
                }
            }
            _ => unreachable!("not a neighborhood algorithm"),
        }
        Recommendation {
            items: rank_and_truncate(scored, top_n),
            unknown_user: false,
        }
    }

    /// New ratings only extend the views; there is no trained structure to
    /// refresh.
    pub fn update(&mut self, new_ratings: &[(UserId, ItemId, i32)]) -> InsertOutcome {
        self.data.insert_all(new_ratings)
    }

    pub fn footprint_bytes(&self) -> u64 {
        view_bytes(&self.data) + MODEL_BASE_BYTES
    }
}
