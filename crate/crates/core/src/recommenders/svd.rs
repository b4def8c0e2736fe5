//! Funk-style matrix factorization trained by plain stochastic gradient
//! descent: a global-mean offset plus user and item factor vectors.
//!
//! Build initializes all factors uniformly in [-0.05, 0.05] from the model
//! seed (user rows ascending, then item rows ascending) and runs
//! `training_iterations` epochs over the ratings in user-major order.
//! Updates fold new ratings in with [`FOLD_IN_PASSES`] gradient passes over
//! only the new ratings; factors for unseen users or items are freshly
//! initialized from a stream derived from the model seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ids::{ItemId, UserId};
use crate::model::{InsertOutcome, RatingDataModel};

use super::{
    candidate_items, rank_and_truncate, view_bytes, Recommendation, RecommenderConfig,
    BYTES_PER_FACTOR, MODEL_BASE_BYTES,
};

/// Gradient passes over the new ratings during an update.
pub const FOLD_IN_PASSES: usize = 10;

pub struct SvdModel {
    config: RecommenderConfig,
    data: RatingDataModel,
    user_factors: Vec<f64>,
    item_factors: Vec<f64>,
    global_mean: f64,
    touches: u64,
    rmse_initial: f64,
    rmse_trained: f64,
}

impl SvdModel {
    pub(crate) fn build(config: RecommenderConfig, data: RatingDataModel) -> Self {
        let factors = config.factors;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut user_factors = vec![0.0; data.user_count() * factors];
        let mut item_factors = vec![0.0; data.item_count() * factors];
        for slot in user_factors.iter_mut().chain(item_factors.iter_mut()) {
            *slot = rng.gen::<f64>() * 0.1 - 0.05;
        }

        let mut sum = 0.0;
        for u in 0..data.user_count() {
            for &(_, r) in data.items_of(UserId(u as u32)) {
                sum += r;
            }
        }
        let global_mean = sum / data.rating_count() as f64;

        let mut model = SvdModel {
            config,
            data,
            user_factors,
            item_factors,
            global_mean,
            touches: 0,
            rmse_initial: 0.0,
            rmse_trained: 0.0,
        };
        model.rmse_initial = model.training_rmse();
        for _ in 0..model.config.training_iterations {
            model.epoch();
        }
        model.rmse_trained = model.training_rmse();
        model
    }

    pub fn config(&self) -> &RecommenderConfig {
        &self.config
    }

    pub fn data(&self) -> &RatingDataModel {
        &self.data
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }

    /// Gradient-pass rating touches; after build this is exactly
    /// `training_iterations * rating_count`.
    pub fn training_touches(&self) -> u64 {
        self.touches
    }

    /// Training-set RMSE before the first epoch.
    pub fn rmse_initial(&self) -> f64 {
        self.rmse_initial
    }

    /// Training-set RMSE after the last epoch.
    pub fn rmse_trained(&self) -> f64 {
        self.rmse_trained
    }

    pub fn user_factor(&self, user: UserId) -> Option<&[f64]> {
        let f = self.config.factors;
        self.user_factors.get(user.index() * f..(user.index() + 1) * f)
    }

    pub fn item_factor(&self, item: ItemId) -> Option<&[f64]> {
        let f = self.config.factors;
        self.item_factors.get(item.index() * f..(item.index() + 1) * f)
    }

    fn epoch(&mut self) {
        let f = self.config.factors;
        let lr = self.config.learning_rate;
        let reg = self.config.regularization;
        for u in 0..self.data.user_count() {
            // Rows are short; cloning the row keeps the borrow checker out
            // of the inner loop.
            let row = self.data.items_of(UserId(u as u32)).to_vec();
            for (i, r) in row {
                self.gradient_step(u, i as usize, r, f, lr, reg);
                self.touches += 1;
            }
        }
    }

    fn gradient_step(&mut self, u: usize, i: usize, rating: f64, f: usize, lr: f64, reg: f64) {
        let uf = &mut self.user_factors[u * f..(u + 1) * f];
        let if_ = &mut self.item_factors[i * f..(i + 1) * f];
        let mut dot = 0.0;
        for k in 0..f {
            dot += uf[k] * if_[k];
        }
        let err = rating - (self.global_mean + dot);
        for k in 0..f {
            let ufv = uf[k];
            let ifv = if_[k];
            uf[k] += lr * (err * ifv - reg * ufv);
            if_[k] += lr * (err * ufv - reg * ifv);
        }
    }

    /// RMSE of the unclamped predictor over all stored ratings.
    fn training_rmse(&self) -> f64 {
        let mut sse = 0.0;
        for u in 0..self.data.user_count() {
            for &(i, r) in self.data.items_of(UserId(u as u32)) {
                let est = self.raw_estimate(u, i as usize);
                sse += (r - est) * (r - est);
            }
        }
        (sse / self.data.rating_count() as f64).sqrt()
    }

    fn raw_estimate(&self, u: usize, i: usize) -> f64 {
        let f = self.config.factors;
        let uf = &self.user_factors[u * f..(u + 1) * f];
        let if_ = &self.item_factors[i * f..(i + 1) * f];
        let mut dot = 0.0;
        for k in 0..f {
            dot += uf[k] * if_[k];
        }
        self.global_mean + dot
    }

    pub fn estimate(&self, user: UserId, item: ItemId) -> Option<f64> {
        if !self.data.has_user(user) || !self.data.has_item(item) {
            return None;
        }
        let (lo, hi) = self.data.rating_bounds();
        Some(self.raw_estimate(user.index(), item.index()).clamp(lo, hi))
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

    pub fn update(&mut self, new_ratings: &[(UserId, ItemId, i32)]) -> InsertOutcome {
        let mut outcome = InsertOutcome::default();
        let mut accepted: Vec<(usize, usize, f64)> = Vec::new();
        for &(user, item, rating) in new_ratings {
            if self.data.has_user(user) && self.data.rating(user, item).is_some() {
                outcome.rejected += 1;
                continue;
            }
            let inserted = self.data.insert(user, item, rating);
            debug_assert!(inserted);
            outcome.accepted += 1;
            accepted.push((user.index(), item.index(), rating as f64));
        }
        if outcome.accepted == 0 {
            return outcome;
        }
        self.grow_factors();
        let (f, lr, reg) = (
            self.config.factors,
            self.config.learning_rate,
            self.config.regularization,
        );
        for _ in 0..FOLD_IN_PASSES {
            for &(u, i, r) in &accepted {
                self.gradient_step(u, i, r, f, lr, reg);
            }
        }
        outcome
    }

    /// Fresh factor rows for entities that appeared after build, drawn from
    /// a per-entity stream derived from the model seed.
    fn grow_factors(&mut self) {
        let f = self.config.factors;
        let seed = self.config.seed;
        while self.user_factors.len() < self.data.user_count() * f {
            let id = (self.user_factors.len() / f) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(entity_seed(seed, 0, id));
            for _ in 0..f {
                self.user_factors.push(rng.gen::<f64>() * 0.1 - 0.05);
            }
        }
        while self.item_factors.len() < self.data.item_count() * f {
            let id = (self.item_factors.len() / f) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(entity_seed(seed, 1, id));
            for _ in 0..f {
                self.item_factors.push(rng.gen::<f64>() * 0.1 - 0.05);
            }
        }
    }

    pub fn footprint_bytes(&self) -> u64 {
        view_bytes(&self.data)
            + (self.user_factors.len() + self.item_factors.len()) as u64 * BYTES_PER_FACTOR
            + MODEL_BASE_BYTES
    }
}

/// Splitmix-style seed derivation for fold-in factor rows.
fn entity_seed(base: u64, kind: u64, id: u64) -> u64 {
    base ^ (id * 2 + kind + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommenders::{AlgorithmKind, RecommenderModel};

    fn ratings_grid() -> Vec<(u32, u32, i32)> {
        // 4 users x 4 items, one missing cell per user.
        let mut out = Vec::new();
        for u in 0..4u32 {
            for i in 0..4u32 {
                if i != u {
                    out.push((u, i, ((u * 3 + i * 2) % 6) as i32));
                }
            }
        }
        out
    }

    fn build(seed: u64) -> SvdModel {
        let data = RatingDataModel::from_ratings(&ratings_grid()).unwrap();
        let config = RecommenderConfig::new(AlgorithmKind::Svd).with_seed(seed);
        SvdModel::build(config, data)
    }

    #[test]
    fn training_reduces_rmse() {
        let m = build(1);
        assert!(
            m.rmse_trained() < m.rmse_initial(),
            "rmse {} -> {}",
            m.rmse_initial(),
            m.rmse_trained()
        );
    }

    #[test]
    fn build_touches_each_rating_once_per_epoch() {
        let m = build(2);
        assert_eq!(
            m.training_touches(),
            (m.config().training_iterations * m.data().rating_count()) as u64
        );
    }

    #[test]
    fn footprint_is_linear_in_nodes() {
        let m = build(3);
        let expected = view_bytes(m.data())
            + ((m.data().user_count() + m.data().item_count()) * m.config().factors) as u64
                * BYTES_PER_FACTOR
            + MODEL_BASE_BYTES;
        assert_eq!(m.footprint_bytes(), expected);
    }

    #[test]
    fn builds_are_deterministic_per_seed() {
        let a = build(9);
        let b = build(9);
        assert_eq!(a.footprint_bytes(), b.footprint_bytes());
        assert_eq!(a.rmse_trained(), b.rmse_trained());
        assert_eq!(
            a.estimate(UserId(0), ItemId(0)),
            b.estimate(UserId(0), ItemId(0))
        );
    }

    #[test]
    fn estimates_stay_in_rating_range() {
        let m = build(4);
        let (lo, hi) = m.data().rating_bounds();
        for u in 0..4 {
            for i in 0..4 {
                if let Some(est) = m.estimate(UserId(u), ItemId(i)) {
                    assert!((lo..=hi).contains(&est));
                }
            }
        }
    }

    #[test]
    fn update_folds_in_new_entities() {
        let data = RatingDataModel::from_ratings(&ratings_grid()).unwrap();
        let config = RecommenderConfig::new(AlgorithmKind::Svd).with_seed(5);
        let mut m = RecommenderModel::build(config, data).unwrap();
        let before = m.footprint_bytes();
        let outcome = m.update(&[(UserId(9), ItemId(1), 4), (UserId(9), ItemId(9), 2)]);
        assert_eq!(outcome.accepted, 2);
        assert!(m.estimate(UserId(9), ItemId(1)).is_some());
        assert!(m.footprint_bytes() > before);
    }

    #[test]
    fn empty_update_changes_nothing() {
        let data = RatingDataModel::from_ratings(&ratings_grid()).unwrap();
        let config = RecommenderConfig::new(AlgorithmKind::Svd).with_seed(6);
        let mut m = RecommenderModel::build(config, data).unwrap();
        let est = m.estimate(UserId(0), ItemId(0));
        let fp = m.footprint_bytes();
        m.update(&[]);
        assert_eq!(m.estimate(UserId(0), ItemId(0)), est);
        assert_eq!(m.footprint_bytes(), fp);
    }
}
