//! Connective-based mining of implicit discourse relation pairs from
//! dialogue, and a one-hot logistic regression classifier over dialogue
//! features of the mined pairs.

pub mod classifier;
pub mod connectives;
pub mod corpus;
pub mod extractor;
pub mod features;

pub use classifier::{
    evaluate, predict_all_labels, run_ablation, run_repeated, train, AblationPlan, AblationTable, ClassifierError,
    EvalReport, LinearModel, Prediction, TrainConfig,
};
pub use connectives::{builtin_lexicon, ConnectiveEntry, Lexicon, LexiconError, Pattern, PosGate, RelationLabel};
pub use corpus::{load_corpus, Conversation, CorpusError, CorpusFormat, LoadReport, Speaker, Turn};
pub use extractor::{mine_corpus, DatasetStats, ExtractError, ExtractionConfig, RelationPair};
pub use features::{
    build_feature_space, vectorize_pair, Family, FeatureError, FeatureName, FeatureSpace, FeatureVector,
    ProviderRegistry,
};
