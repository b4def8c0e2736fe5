//! Iterative growth of random bipartite rating graphs.
//!
//! Starting from `m` disjoint user–item edges, each iteration adds one node
//! (a user with probability `p`, otherwise an item) and attaches its `u`
//! (resp. `v`) loose edges to distinct nodes of the opposite modality. Each
//! edge picks its endpoint preferentially (probability proportional to the
//! current degree, counting edges attached earlier in the same iteration)
//! with probability `alpha` (resp. `beta`), otherwise uniformly at random.
//! A preferential edge is re-routed through a three-hop bounce walk with
//! probability `b`, which injects transitivity.
//!
//! The RNG draw order is fixed so that runs can be replayed:
//!
//! 1. initialization: one rating draw per seed edge, in edge order;
//! 2. per iteration: one modality draw (`f64 < p` means user);
//! 3. if the opposite modality has no more nodes than edges to attach, the
//!    new node connects to every opposite node in ascending id order with
//!    one rating draw per edge, and the shortfall is recorded;
//! 4. otherwise per edge: one attachment-type draw (`f64 < alpha`/`beta`),
//!    then the target draw (preferential: index draws into the degree pool,
//!    re-drawn on collision up to [`COLLISION_RETRIES`] times, then one
//!    index draw over the unused nodes in ascending id order; random: the
//!    same discipline over node ids), then for preferential edges one
//!    bounce decision draw (`f64 < b`) followed by up to three bounce
//!    micro-step draws, and finally one rating draw.
//!
//! A bounce walk that dies out, or that would land on a node already joined
//! to the new node, falls back to the plain preferential pick made in step 4
//! and is recorded as a fallback in the growth trace.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Bigraph, GrowthTrace, IterationTrace, RatedEdge, TraceModality};
use crate::ids::Modality;
use crate::params::GeneratorParams;

/// Re-draws allowed before a collided target pick falls back to a uniform
/// draw over the unused nodes.
pub const COLLISION_RETRIES: usize = 16;

/// Incremental growth state. Degrees, adjacency and the preferential pools
/// cover every attached edge, holdout phase included; the split into
/// training and holdout edges only affects which list an edge lands in.
pub struct Generator {
    params: GeneratorParams,
    rng: ChaCha8Rng,
    user_degrees: Vec<u32>,
    item_degrees: Vec<u32>,
    user_adj: Vec<Vec<u32>>,
    item_adj: Vec<Vec<u32>>,
    user_pool: Vec<u32>,
    item_pool: Vec<u32>,
    edges: Vec<RatedEdge>,
    holdout: Vec<RatedEdge>,
    trace: GrowthTrace,
}

impl Generator {
    /// Builds the initial graph: `m` users, `m` items, and edge `k`
    /// connecting user `k` to item `k` with a uniformly drawn rating.
    pub fn new(params: GeneratorParams) -> Result<Self> {
        params.validate()?;
        let m = params.m as usize;
        let mut gen = Generator {
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            user_degrees: vec![0; m],
            item_degrees: vec![0; m],
            user_adj: vec![Vec::new(); m],
            item_adj: vec![Vec::new(); m],
            user_pool: Vec::new(),
            item_pool: Vec::new(),
            edges: Vec::new(),
            holdout: Vec::new(),
            trace: GrowthTrace::default(),
            params,
        };
        for k in 0..m as u32 {
            let rating = gen.draw_rating();
            gen.attach(k, k, rating, false);
        }
        Ok(gen)
    }

    pub fn params(&self) -> &GeneratorParams {
        &self.params
    }

    pub fn user_count(&self) -> usize {
        self.user_degrees.len()
    }

    pub fn item_count(&self) -> usize {
        self.item_degrees.len()
    }

    pub fn trace(&self) -> &GrowthTrace {
        &self.trace
    }

    /// Runs one growth iteration. Edges attach to the training list, or to
    /// the holdout list when `holdout` is set.
    pub fn step(&mut self, holdout: bool) {
        let is_user = self.rng.gen::<f64>() < self.params.p;
        if is_user {
            let new_user = self.user_degrees.len() as u32;
            self.user_degrees.push(0);
            self.user_adj.push(Vec::new());
            let (count, pref_prob) = (self.params.u, self.params.alpha);
            self.attach_new_node(Modality::User, new_user, count, pref_prob, holdout);
        } else {
            let new_item = self.item_degrees.len() as u32;
            self.item_degrees.push(0);
            self.item_adj.push(Vec::new());
            let (count, pref_prob) = (self.params.v, self.params.beta);
            self.attach_new_node(Modality::Item, new_item, count, pref_prob, holdout);
        }
    }

    /// Runs the configured `iterations` growth steps followed by
    /// `holdout_steps` holdout iterations.
    pub fn run(&mut self) {
        for _ in 0..self.params.iterations {
            self.step(false);
        }
        for _ in 0..self.params.holdout_steps {
            self.step(true);
        }
    }

    /// Finalizes into an immutable [`Bigraph`] plus the growth trace.
    pub fn finish(self) -> (Bigraph, GrowthTrace) {
        let graph = Bigraph::from_parts(
            Some(self.params),
            self.user_degrees.len(),
            self.item_degrees.len(),
            self.edges,
            self.holdout,
        );
        (graph, self.trace)
    }

    /// Clones the current state into a [`Bigraph`] snapshot.
    pub fn snapshot(&self) -> Bigraph {
        Bigraph::from_parts(
            Some(self.params.clone()),
            self.user_degrees.len(),
            self.item_degrees.len(),
            self.edges.clone(),
            self.holdout.clone(),
        )
    }

    fn draw_rating(&mut self) -> i32 {
        let idx = self.rng.gen_range(0..self.params.rating_values.len());
        self.params.rating_values[idx]
    }

    fn attach(&mut self, user: u32, item: u32, rating: i32, holdout: bool) {
        let edge = RatedEdge::new(user, item, rating);
        if holdout {
            self.holdout.push(edge);
        } else {
            self.edges.push(edge);
        }
        self.user_degrees[user as usize] += 1;
        self.item_degrees[item as usize] += 1;
        self.user_adj[user as usize].push(item);
        self.item_adj[item as usize].push(user);
        self.user_pool.push(user);
        self.item_pool.push(item);
    }

    fn attach_new_node(
        &mut self,
        modality: Modality,
        new_node: u32,
        count: u32,
        pref_prob: f64,
        holdout: bool,
    ) {
        let mut trace = IterationTrace {
            modality: TraceModality(modality),
            ..IterationTrace::default()
        };
        let n_opposite = match modality {
            Modality::User => self.item_degrees.len() as u32,
            Modality::Item => self.user_degrees.len() as u32,
        };

        if count >= n_opposite {
            // Degenerate iteration: attach to every opposite node.
            for target in 0..n_opposite {
                let rating = self.draw_rating();
                match modality {
                    Modality::User => self.attach(new_node, target, rating, holdout),
                    Modality::Item => self.attach(target, new_node, rating, holdout),
                }
            }
            trace.random = n_opposite;
            trace.shortfall = count - n_opposite;
            self.trace.iterations.push(trace);
            return;
        }

        let bounce_prob = self.params.b;
        let mut attached: Vec<u32> = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let preferential = self.rng.gen::<f64>() < pref_prob;
            let target = if preferential {
                let pick = match modality {
                    Modality::User => {
                        pick_with_retries(&mut self.rng, &attached, n_opposite, |rng| {
                            self.item_pool[rng.gen_range(0..self.item_pool.len())]
                        })
                    }
                    Modality::Item => {
                        pick_with_retries(&mut self.rng, &attached, n_opposite, |rng| {
                            self.user_pool[rng.gen_range(0..self.user_pool.len())]
                        })
                    }
                };
                if self.rng.gen::<f64>() < bounce_prob {
                    let landing = match modality {
                        Modality::User => bounce_walk(
                            &mut self.rng,
                            &attached,
                            &self.item_adj,
                            &self.user_adj,
                            new_node,
                        ),
                        Modality::Item => bounce_walk(
                            &mut self.rng,
                            &attached,
                            &self.user_adj,
                            &self.item_adj,
                            new_node,
                        ),
                    };
                    match landing {
                        Some(node) => {
                            trace.bounced += 1;
                            node
                        }
                        None => {
                            trace.bounce_fallbacks += 1;
                            trace.preferential += 1;
                            pick
                        }
                    }
                } else {
                    trace.preferential += 1;
                    pick
                }
            } else {
                trace.random += 1;
                pick_with_retries(&mut self.rng, &attached, n_opposite, |rng| {
                    rng.gen_range(0..n_opposite)
                })
            };
            attached.push(target);
            let rating = self.draw_rating();
            match modality {
                Modality::User => self.attach(new_node, target, rating, holdout),
                Modality::Item => self.attach(target, new_node, rating, holdout),
            }
        }
        self.trace.iterations.push(trace);
    }
}

/// Draws a target with `draw`, re-drawing on collision with already-attached
/// targets; after [`COLLISION_RETRIES`] collisions, draws uniformly over the
/// unused nodes in ascending id order.
fn pick_with_retries(
    rng: &mut ChaCha8Rng,
    attached: &[u32],
    n_opposite: u32,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> u32,
) -> u32 {
    for _ in 0..COLLISION_RETRIES {
        let candidate = draw(rng);
        if !attached.contains(&candidate) {
            return candidate;
        }
    }
    let unused: Vec<u32> = (0..n_opposite).filter(|n| !attached.contains(n)).collect();
    unused[rng.gen_range(0..unused.len())]
}

/// The three-hop bounce walk for a new node whose already-attached targets
/// are `attached` (opposite modality).
///
/// Micro-steps: draw one of the attached targets; draw one of its neighbors
/// other than the new node itself; draw one of that neighbor's neighbors not
/// already joined to the new node. Returns `None` when any step has no
/// candidate; the caller then keeps its plain preferential pick.
fn bounce_walk(
    rng: &mut ChaCha8Rng,
    attached: &[u32],
    opposite_adj: &[Vec<u32>],
    focal_adj: &[Vec<u32>],
    new_node: u32,
) -> Option<u32> {
    if attached.is_empty() {
        return None;
    }
    let first = attached[rng.gen_range(0..attached.len())];
    let step2: Vec<u32> = opposite_adj[first as usize]
        .iter()
        .copied()
        .filter(|&n| n != new_node)
        .collect();
    if step2.is_empty() {
        return None;
    }
    let via = step2[rng.gen_range(0..step2.len())];
    let step3: Vec<u32> = focal_adj[via as usize]
        .iter()
        .copied()
        .filter(|n| !attached.contains(n))
        .collect();
    if step3.is_empty() {
        return None;
    }
    Some(step3[rng.gen_range(0..step3.len())])
}

/// Runs the full growth procedure for `params`.
pub fn generate(params: GeneratorParams) -> Result<Bigraph> {
    generate_with_trace(params).map(|(graph, _)| graph)
}

/// Like [`generate`] but also returns the growth trace.
pub fn generate_with_trace(params: GeneratorParams) -> Result<(Bigraph, GrowthTrace)> {
    let mut gen = Generator::new(params)?;
    gen.run();
    Ok(gen.finish())
}
