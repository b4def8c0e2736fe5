//! Random bipartite rating graphs with controllable topology, and a
//! benchmark harness measuring how six collaborative-filtering recommenders
//! behave on them: build time, retained memory, recommendation latency and
//! update time.

pub mod bench;
pub mod error;
pub mod exec;
pub mod format;
pub mod generator;
pub mod graph;
pub mod ids;
pub mod model;
pub mod params;
pub mod recommenders;
pub mod similarity;
pub mod stats;

pub use error::{Error, Result};
pub use exec::ExecMode;
pub use format::{parse_graph, read_graph, write_graph, write_graph_string};
pub use generator::{generate, generate_with_trace, Generator};
pub use graph::{Bigraph, GrowthTrace, IterationTrace, RatedEdge};
pub use ids::{ItemId, Modality, Node, UserId};
pub use model::{InsertOutcome, RatingDataModel};
pub use params::GeneratorParams;
pub use recommenders::{
    AlgorithmKind, Recommendation, RecommenderConfig, RecommenderModel,
};
pub use similarity::{similarity, SimilarityKind, SparseRatings};
pub use stats::{
    blcc, degree_distribution, newman_second_neighbors, similar_user_stats, summarize,
    summarize_mode, DegreeDistribution, GraphSummary,
};
