//! Sparse user x item rating store with user-major and item-major views.

use crate::error::{Error, Result};
use crate::graph::Bigraph;
use crate::ids::{ItemId, UserId};

/// Both views hold the same ratings: `user_items[u]` lists `(item, rating)`
/// sorted by item id, `item_users[i]` lists `(user, rating)` sorted by user
/// id. Values are the integer ratings widened to `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatingDataModel {
    user_items: Vec<Vec<(u32, f64)>>,
    item_users: Vec<Vec<(u32, f64)>>,
    rating_count: usize,
    min_rating: f64,
    max_rating: f64,
}

/// Result of a batch insert: duplicates are rejected record by record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InsertOutcome {
    pub accepted: usize,
    pub rejected: usize,
}

impl RatingDataModel {
    pub fn new() -> Self {
        RatingDataModel {
            user_items: Vec::new(),
            item_users: Vec::new(),
            rating_count: 0,
            min_rating: f64::INFINITY,
            max_rating: f64::NEG_INFINITY,
        }
    }

    /// Builds the model from a graph's training edges. Slot counts follow
    /// the graph's node counts, so holdout-phase nodes get empty rows.
    pub fn from_bigraph(graph: &Bigraph) -> Self {
        let mut model = RatingDataModel::new();
        model.ensure_user(graph.user_count().saturating_sub(1) as u32);
        model.ensure_item(graph.item_count().saturating_sub(1) as u32);
        for edge in graph.edges() {
            let inserted = model.insert(edge.user, edge.item, edge.rating);
            debug_assert!(inserted);
        }
        model
    }

    pub fn from_ratings(ratings: &[(u32, u32, i32)]) -> Result<Self> {
        let mut model = RatingDataModel::new();
        for &(u, i, r) in ratings {
            if !model.insert(UserId(u), ItemId(i), r) {
                return Err(Error::Scenario(format!("duplicate rating ({u}, {i})")));
            }
        }
        Ok(model)
    }

    pub fn user_count(&self) -> usize {
        self.user_items.len()
    }

    pub fn item_count(&self) -> usize {
        self.item_users.len()
    }

    pub fn rating_count(&self) -> usize {
        self.rating_count
    }

    pub fn is_empty(&self) -> bool {
        self.rating_count == 0
    }

    pub fn has_user(&self, user: UserId) -> bool {
        user.index() < self.user_items.len()
    }

    pub fn has_item(&self, item: ItemId) -> bool {
        item.index() < self.item_users.len()
    }

    /// `(item id, rating)` pairs of `user`, ascending by item id.
    pub fn items_of(&self, user: UserId) -> &[(u32, f64)] {
        &self.user_items[user.index()]
    }

    /// `(user id, rating)` pairs of `item`, ascending by user id.
    pub fn users_of(&self, item: ItemId) -> &[(u32, f64)] {
        &self.item_users[item.index()]
    }

    pub fn rating(&self, user: UserId, item: ItemId) -> Option<f64> {
        if !self.has_user(user) {
            return None;
        }
        let row = &self.user_items[user.index()];
        row.binary_search_by_key(&item.0, |&(i, _)| i)
            .ok()
            .map(|idx| row[idx].1)
    }

    /// Observed rating range; estimates clamp into it.
    pub fn rating_bounds(&self) -> (f64, f64) {
        if self.rating_count == 0 {
            (0.0, 0.0)
        } else {
            (self.min_rating, self.max_rating)
        }
    }

    /// Inserts one rating, growing both views as needed. Returns false and
    /// leaves the model unchanged when the (user, item) pair already exists.
    pub fn insert(&mut self, user: UserId, item: ItemId, rating: i32) -> bool {
        self.ensure_user(user.0);
        self.ensure_item(item.0);
        let row = &mut self.user_items[user.index()];
        let pos = match row.binary_search_by_key(&item.0, |&(i, _)| i) {
            Ok(_) => return false,
            Err(pos) => pos,
        };
        let value = rating as f64;
        row.insert(pos, (item.0, value));
        let col = &mut self.item_users[item.index()];
        let pos = col
            .binary_search_by_key(&user.0, |&(u, _)| u)
            .expect_err("views out of sync");
        col.insert(pos, (user.0, value));
        self.rating_count += 1;
        self.min_rating = self.min_rating.min(value);
        self.max_rating = self.max_rating.max(value);
        true
    }

    /// Batch insert with per-record duplicate rejection.
    pub fn insert_all(&mut self, ratings: &[(UserId, ItemId, i32)]) -> InsertOutcome {
        let mut outcome = InsertOutcome::default();
        for &(u, i, r) in ratings {
            if self.insert(u, i, r) {
                outcome.accepted += 1;
            } else {
                outcome.rejected += 1;
            }
        }
        outcome
    }

    fn ensure_user(&mut self, user: u32) {
        if self.user_items.len() <= user as usize {
            self.user_items.resize(user as usize + 1, Vec::new());
        }
    }

    fn ensure_item(&mut self, item: u32) {
        if self.item_users.len() <= item as usize {
            self.item_users.resize(item as usize + 1, Vec::new());
        }
    }
}

impl Default for RatingDataModel {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn views_are_transposes() {
        let model =
            RatingDataModel::from_ratings(&[(0, 0, 5), (0, 1, 3), (1, 0, 4), (2, 2, 1)]).unwrap();
        for (u, row) in model.user_items.iter().enumerate() {
            for &(i, r) in row {
                let col = model.users_of(ItemId(i));
                let found = col.iter().find(|&&(w, _)| w == u as u32).unwrap();
                assert_eq!(found.1, r);
            }
        }
        assert_eq!(model.rating_count(), 4);
        assert_eq!(model.rating_bounds(), (1.0, 5.0));
    }

    #[test]
    fn duplicates_rejected_individually() {
        let mut model = RatingDataModel::from_ratings(&[(0, 0, 5)]).unwrap();
        let outcome = model.insert_all(&[
            (UserId(0), ItemId(0), 2),
            (UserId(0), ItemId(1), 2),
            (UserId(9), ItemId(9), 4),
        ]);
        assert_eq!(outcome, InsertOutcome { accepted: 2, rejected: 1 });
        assert_eq!(model.rating(UserId(0), ItemId(0)), Some(5.0));
        assert_eq!(model.user_count(), 10);
        assert_eq!(model.item_count(), 10);
    }

    #[test]
    fn unknown_lookups_are_none() {
        let model = RatingDataModel::from_ratings(&[(0, 0, 5)]).unwrap();
        assert_eq!(model.rating(UserId(3), ItemId(0)), None);
        assert!(!model.has_user(UserId(1)));
    }
}
