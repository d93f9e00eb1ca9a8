//! rulefuse merges several fuzzy rule sets, together with their triangular
//! membership functions, into one optimized knowledge base.
//!
//! Knowledge bases are encoded as variable-length real-coded genomes
//! ([`genome`]) and evolved under an accuracy/complexity fitness
//! ([`fitness`]) by a subpopulation-based evolution strategy ([`evolution`]).
//! Input rule sets can be induced from data shares ([`bootstrap`]) loaded
//! from UCI-style files ([`ingest`]).

pub mod bootstrap;
pub mod dataset;
pub mod error;
pub mod evolution;
pub mod fitness;
pub mod genome;
pub mod inference;
pub mod ingest;
pub mod kb;

pub use dataset::{FeatureValue, Instance, LabeledDataset};
pub use error::{Error, Result};
pub use evolution::{EvolutionConfig, GaConfig, GenerationStats};
pub use fitness::FitnessReport;
pub use kb::{
    AntecedentToken, FeatureKind, FeatureSpec, FuzzyRule, KnowledgeBase, LinguisticPartition,
    Schema, TriangularMF,
};
