//! Slope One: precomputed per-item-pair average rating differences with
//! co-rating counts, updated incrementally.

use std::collections::HashMap;

use crate::ids::{ItemId, UserId};
use crate::model::{InsertOutcome, RatingDataModel};

use super::{
    candidate_items, rank_and_truncate, view_bytes, Recommendation, RecommenderConfig,
    BYTES_PER_DIFF_ENTRY, MODEL_BASE_BYTES,
};

/// Running difference stats for an item pair keyed `(lo, hi)` with
/// `sum = sum of (rating_lo - rating_hi)` over co-raters.
#[derive(Clone, Copy, Default)]
struct PairStat {
    count: u32,
    sum: f64,
}

pub struct SlopeOneModel {
    config: RecommenderConfig,
    data: RatingDataModel,
    pairs: HashMap<(u32, u32), PairStat>,
    pair_touches: u64,
}

impl SlopeOneModel {
    pub(crate) fn build(config: RecommenderConfig, data: RatingDataModel) -> Self {
        let mut model = SlopeOneModel {
            config,
            data,
            pairs: HashMap::new(),
            pair_touches: 0,
        };
        for u in 0..model.data.user_count() {
            let row = model.data.items_of(UserId(u as u32)).to_vec();
            for (idx, &(i, ri)) in row.iter().enumerate() {
                for &(j, rj) in &row[idx + 1..] {
                    model.touch_pair(i, ri, j, rj);
                }
            }
        }
        model
    }

    pub fn config(&self) -> &RecommenderConfig {
        &self.config
    }

    pub fn data(&self) -> &RatingDataModel {
        &self.data
    }

    /// Number of stored item pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Cumulative count of pair-entry mutations (build and updates).
    pub fn pair_touches(&self) -> u64 {
        self.pair_touches
    }

    /// `(co-rating count, mean of rating(i) - rating(j))`.
    pub fn diff(&self, i: ItemId, j: ItemId) -> Option<(u32, f64)> {
        if i.0 == j.0 {
            return None;
        }
        let (lo, hi) = if i.0 < j.0 { (i.0, j.0) } else { (j.0, i.0) };
        let stat = self.pairs.get(&(lo, hi))?;
        let mean = stat.sum / stat.count as f64;
        Some((stat.count, if i.0 == lo { mean } else { -mean }))
    }

    fn touch_pair(&mut self, i: u32, ri: f64, j: u32, rj: f64) {
        let (key, delta) = if i < j {
            ((i, j), ri - rj)
        } else {
            ((j, i), rj - ri)
        };
        let stat = self.pairs.entry(key).or_default();
        stat.count += 1;
        stat.sum += delta;
        self.pair_touches += 1;
    }

    pub fn estimate(&self, user: UserId, item: ItemId) -> Option<f64> {
        if !self.data.has_user(user) || !self.data.has_item(item) {
            return None;
        }
        let mut num = 0.0;
        let mut den = 0u64;
        for &(j, r) in self.data.items_of(user) {
            if j == item.0 {
                continue;
            }
            if let Some((count, diff)) = self.diff(item, ItemId(j)) {
                num += count as f64 * (r + diff);
                den += count as u64;
            }
        }
        if den == 0 {
            return None;
        }
        let (lo, hi) = self.data.rating_bounds();
        Some((num / den as f64).clamp(lo, hi))
    }

    pub fn recommend(&self, user: UserId, top_n: usize) -> Recommendation {
        if !self.data.has_user(user) {
            return Recommendation::empty(true);
        }
        let mut scored = Vec::new();
        for c in candidate_items(&self.data, user) {
            if let Some(est) = self.estimate(user, ItemId(c)) {
                scored.push((ItemId(c), est));
            }
        }
        Recommendation {
            items: rank_and_truncate(scored, top_n),
            unknown_user: false,
        }
    }

    /// Adjusts only the pairs that involve an updated user's items, then
    /// extends the views.
    pub fn update(&mut self, new_ratings: &[(UserId, ItemId, i32)]) -> InsertOutcome {
        let mut outcome = InsertOutcome::default();
        for &(user, item, rating) in new_ratings {
            if self.data.rating(user, item).is_some() {
                outcome.rejected += 1;
                continue;
            }
            if self.data.has_user(user) {
                let row = self.data.items_of(user).to_vec();
                for &(j, rj) in &row {
                    self.touch_pair(item.0, rating as f64, j, rj);
                }
            }
            let inserted = self.data.insert(user, item, rating);
            debug_assert!(inserted);
            outcome.accepted += 1;
        }
        outcome
    }

    pub fn footprint_bytes(&self) -> u64 {
        view_bytes(&self.data) + self.pairs.len() as u64 * BYTES_PER_DIFF_ENTRY + MODEL_BASE_BYTES
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommenders::{AlgorithmKind, RecommenderModel};

    fn slope_one(ratings: &[(u32, u32, i32)]) -> RecommenderModel {
        let data = RatingDataModel::from_ratings(ratings).unwrap();
        RecommenderModel::build(RecommenderConfig::new(AlgorithmKind::SlopeOne), data).unwrap()
    }

    /// A: (i,5),(j,3); B: (i,4),(j,2) -> diff(i,j) = +2 with count 2.
    fn fixture() -> Vec<(u32, u32, i32)> {
        vec![(0, 0, 5), (0, 1, 3), (1, 0, 4), (1, 1, 2), (2, 1, 4)]
    }

    #[test]
    fn diff_matrix_from_hand_example() {
        let m = slope_one(&fixture());
        let RecommenderModel::SlopeOne(inner) = &m else { unreachable!() };
        assert_eq!(inner.diff(ItemId(0), ItemId(1)), Some((2, 2.0)));
        assert_eq!(inner.diff(ItemId(1), ItemId(0)), Some((2, -2.0)));
    }

    #[test]
    fn estimate_clamps_into_rating_range() {
        // User C rated j=4; raw estimate is 4 + 2 = 6, clamped to the
        // observed maximum of 5.
        let m = slope_one(&fixture());
        assert_eq!(m.estimate(UserId(2), ItemId(0)), Some(5.0));
        let rec = m.recommend(UserId(2), 1);
        assert_eq!(rec.items, vec![(ItemId(0), 5.0)]);
    }

    #[test]
    fn incremental_update_matches_rebuild() {
        let mut ratings = fixture();
        let mut m = slope_one(&ratings);
        let batch = vec![
            (UserId(3), ItemId(0), 2),
            (UserId(3), ItemId(1), 2),
            (UserId(0), ItemId(2), 1),
        ];
        let outcome = m.update(&batch);
        assert_eq!(outcome.accepted, 3);
        ratings.extend([(3, 0, 2), (3, 1, 2), (0, 2, 1)]);
        let rebuilt = slope_one(&ratings);

        let (RecommenderModel::SlopeOne(updated), RecommenderModel::SlopeOne(fresh)) =
            (&m, &rebuilt)
        else {
            unreachable!()
        };
        assert_eq!(updated.pair_count(), fresh.pair_count());
        for i in 0..3u32 {
            for j in 0..3u32 {
                if i != j {
                    assert_eq!(
                        updated.diff(ItemId(i), ItemId(j)),
                        fresh.diff(ItemId(i), ItemId(j)),
                        "pair ({i}, {j})"
                    );
                }
            }
        }
    }

    #[test]
    fn update_touches_only_updated_users_pairs() {
        let m = slope_one(&fixture());
        let RecommenderModel::SlopeOne(mut inner) = m else { unreachable!() };
        let before = inner.pair_touches();
        // User 2 holds one existing rating, so one new rating touches
        // exactly one pair.
        inner.update(&[(UserId(2), ItemId(2), 3)]);
        assert_eq!(inner.pair_touches() - before, 1);
    }

    #[test]
    fn empty_update_is_a_no_op() {
        let mut m = slope_one(&fixture());
        let before = m.footprint_bytes();
        let est_before = m.estimate(UserId(2), ItemId(0));
        let outcome = m.update(&[]);
        assert_eq!(outcome, InsertOutcome::default());
        assert_eq!(m.footprint_bytes(), before);
        assert_eq!(m.estimate(UserId(2), ItemId(0)), est_before);
    }

    #[test]
    fn duplicate_updates_rejected_per_record() {
        let mut m = slope_one(&fixture());
        let outcome = m.update(&[(UserId(0), ItemId(0), 1), (UserId(2), ItemId(0), 1)]);
        assert_eq!(outcome.accepted, 1);
        assert_eq!(outcome.rejected, 1);
    }

    #[test]
    fn footprint_counts_pairs_and_is_monotone() {
        let mut m = slope_one(&fixture());
        let before = m.footprint_bytes();
        m.update(&[(UserId(2), ItemId(0), 1)]);
        assert!(m.footprint_bytes() >= before);
    }
}
