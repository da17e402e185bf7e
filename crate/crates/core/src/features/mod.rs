//! Dialogue features for argument pairs.
//!
//! Five families are computed separately for each argument by pluggable
//! providers and collected into a sparse one-hot vector over a frozen,
//! observed-only feature space.

mod providers;

pub use providers::{
    entity_type_vocabulary, extract_dialogue_act, extract_entity_types, extract_intent, extract_sentiment,
    extract_topic, intent_vocabulary, DialogueAct, DialogueActProvider, Gazetteer, IntentProvider, LabelProvider,
    Sentiment, SentimentLexicon, TopicClassifier, UtteranceContext,
};

use crate::extractor::RelationPair;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("{file}:{line}: {message}")]
    Data { file: String, line: usize, message: String },
    #[error("cannot build a feature space from zero pairs")]
    EmptyInput,
    #[error("unknown feature family `{0}`")]
    UnknownFamily(String),
    #[error("invalid feature space: {0}")]
    InvalidSpace(String),
    #[error("feature space json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DialogueAct,
    Sentiment,
    Intent,
    Topic,
    EntityType,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::DialogueAct, Family::Sentiment, Family::Intent, Family::Topic, Family::EntityType];

    pub fn name(self) -> &'static str {
        match self {
            Family::DialogueAct => "dialogue_act",
            Family::Sentiment => "sentiment",
            Family::Intent => "intent",
            Family::Topic => "topic",
            Family::EntityType => "entity_type",
        }
    }

    /// Every family except entity types yields exactly one label per side.
    pub fn is_single_valued(self) -> bool {
        self != Family::EntityType
    }

    /// Parses a comma-separated list such as `dialogue_act,topic` or `all`.
    pub fn parse_list(list: &str) -> Result<BTreeSet<Family>, FeatureError> {
        if list.trim().eq_ignore_ascii_case("all") {
            return Ok(Family::ALL.into_iter().collect());
        }
        list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm || (norm == "entity" && *f == Family::EntityType))
            .ok_or_else(|| FeatureError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArgSide {
    Arg1,
    Arg2,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureName {
    pub family: Family,
    pub value: String,
    pub side: ArgSide,
}

impl FeatureName {
    pub fn new(family: Family, value: impl Into<String>, side: ArgSide) -> Self {
        FeatureName { family, value: value.into(), side }
    }
}

impl fmt::Display for FeatureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            ArgSide::Arg1 => "arg1",
            ArgSide::Arg2 => "arg2",
        };
        write!(f, "{}={}@{}", self.family, self.value, side)
    }
}

/// One provider per family.
#[derive(Clone)]
pub struct ProviderRegistry {
    providers: BTreeMap<Family, Arc<dyn LabelProvider>>,
}

impl Default for ProviderRegistry {
    fn default() -> Self {
        let mut providers: BTreeMap<Family, Arc<dyn LabelProvider>> = BTreeMap::new();
        providers.insert(Family::DialogueAct, Arc::new(DialogueActProvider));
        providers.insert(Family::Sentiment, Arc::new(providers::default_sentiment().clone()));
        providers.insert(Family::Intent, Arc::new(IntentProvider));
        providers.insert(Family::Topic, Arc::new(providers::default_topics().clone()));
        providers.insert(Family::EntityType, Arc::new(providers::default_gazetteer().clone()));
        ProviderRegistry { providers }
    }
}

impl fmt::Debug for ProviderRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProviderRegistry").field("families", &self.providers.keys().collect::<Vec<_>>()).finish()
    }
}

impl ProviderRegistry {
    /// Replaces the provider for `family`.
    pub fn with(mut self, family: Family, provider: Arc<dyn LabelProvider>) -> Self {
        self.providers.insert(family, provider);
        self
    }

    pub fn provider(&self, family: Family) -> &dyn LabelProvider {
        self.providers[&family].as_ref()
    }

    /// Labels of every family for one pair, both sides.
    pub fn annotate(&self, pair: &RelationPair) -> PairAnnotation {
        let ctx = UtteranceContext { conversation_topic: pair.topic.as_deref() };
        let run = |text: &str| -> BTreeMap<Family, Vec<String>> {
            self.providers
                .iter()
                .map(|(&family, p)| {
                    let mut labels = p.labels(text, &ctx);
                    labels.sort();
                    labels.dedup();
                    (family, labels)
                })
                .collect()
        };
        PairAnnotation { arg1: run(&pair.arg1), arg2: run(&pair.arg2) }
    }

    pub fn annotate_all(&self, pairs: &[RelationPair]) -> Vec<PairAnnotation> {
        pairs.par_iter().map(|p| self.annotate(p)).collect()
    }
}

/// Provider output for both arguments of a pair, computed once and reused
/// across ablation rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAnnotation {
    pub arg1: BTreeMap<Family, Vec<String>>,
    pub arg2: BTreeMap<Family, Vec<String>>,
}

impl PairAnnotation {
    /// Feature names for the enabled families, in sorted order.
    pub fn names(&self, families: &BTreeSet<Family>) -> BTreeSet<FeatureName> {
        let mut out = BTreeSet::new();
        for (side, labels) in [(ArgSide::Arg1, &self.arg1), (ArgSide::Arg2, &self.arg2)] {
            for (&family, values) in labels {
                if families.contains(&family) {
                    out.extend(values.iter().map(|v| FeatureName::new(family, v.clone(), side)));
                }
            }
        }
        out
    }
}

/// Ordered feature names with stable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpace {
    names: Vec<FeatureName>,
    index: HashMap<FeatureName, usize>,
    frozen: bool,
}

impl FeatureSpace {
    /// A frozen space over `names` in the given order.
    pub fn from_names(names: Vec<FeatureName>) -> Result<Self, FeatureError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FeatureError::InvalidSpace(format!("duplicate name {n}")));
            }
        }
        Ok(FeatureSpace { names, index, frozen: true })
    }

    pub fn empty() -> Self {
        FeatureSpace { names: Vec::new(), index: HashMap::new(), frozen: true }
    }

    pub fn names(&self) -> &[FeatureName] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn index_of(&self, name: &FeatureName) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn families(&self) -> BTreeSet<Family> {
        self.names.iter().map(|n| n.family).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.names).expect("feature names always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, FeatureError> {
        Self::from_names(serde_json::from_str(text)?)
    }

    /// SHA-256 of the compact JSON name list; models carry it so they
    /// cannot be applied to vectors from a different space.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(&self.names).expect("feature names always serialize");
        hex::encode(Sha256::digest(json))
    }
}

/// Sparse one-hot vector: sorted active indices into a space of `dim` names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureVector {
    pub indices: Vec<usize>,
    pub dim: usize,
    pub fingerprint: String,
}

impl FeatureVector {
    pub fn active<'a>(&'a self, space: &'a FeatureSpace) -> impl Iterator<Item = &'a FeatureName> + 'a {
        self.indices.iter().map(move |&i| &space.names[i])
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &i in &self.indices {
            v[i] = 1.0;
        }
        v
    }
}

/// Observed-only space from precomputed annotations.
pub fn build_space_from_annotations(
    annotations: &[PairAnnotation],
    families: &BTreeSet<Family>,
) -> Result<FeatureSpace, FeatureError> {
    if annotations.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let names: BTreeSet<FeatureName> = annotations.iter().flat_map(|a| a.names(families)).collect();
    FeatureSpace::from_names(names.into_iter().collect())
}

pub fn build_feature_space(
    pairs: &[RelationPair],
    registry: &ProviderRegistry,
    families: &BTreeSet<Family>,
) -> Result<FeatureSpace, FeatureError> {
    if pairs.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    build_space_from_annotations(&registry.annotate_all(pairs), families)
}

/// Names outside `space` are dropped; so are families the space lacks.
pub fn vectorize_annotation(annotation: &PairAnnotation, space: &FeatureSpace, fingerprint: &str) -> FeatureVector {
    let families = Family::ALL.into_iter().collect();
    let mut indices: Vec<usize> = annotation.names(&families).iter().filter_map(|n| space.index_of(n)).collect();
    indices.sort_unstable();
    FeatureVector { indices, dim: space.len(), fingerprint: fingerprint.to_string() }
}

pub fn vectorize_pair(pair: &RelationPair, space: &FeatureSpace, registry: &ProviderRegistry) -> FeatureVector {
    vectorize_annotation(&registry.annotate(pair), space, &space.fingerprint())
}

pub fn vectorize_all(annotations: &[PairAnnotation], space: &FeatureSpace) -> Vec<FeatureVector> {
    let fp = space.fingerprint();
    annotations.par_iter().map(|a| vectorize_annotation(a, space, &fp)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::{Pattern, RelationLabel};
    use crate::extractor::{PairSpans, TurnSpan};

    fn pair(arg1: &str, arg2: &str, topic: Option<&str>) -> RelationPair {
        let span = TurnSpan { turn: 0, start: 0, end: 0 };
        RelationPair {
            arg1: arg1.into(),
            arg2: arg2.into(),
            relation: RelationLabel::Comparison,
            connective: "however".into(),
            pattern: Pattern::P2Cross,
            conv_id: "c".into(),
            topic: topic.map(String::from),
            turns: vec![0, 1],
            spans: PairSpans { arg1: span, arg2: span, connective: span },
            comma: true,
        }
    }

    fn only(f: Family) -> BTreeSet<Family> {
        BTreeSet::from([f])
    }

    #[test]
    fn single_family_space_has_two_names() {
        let reg = ProviderRegistry::default();
        let pairs = [pair("i bought it", "i sold it", None)];
        let space = build_feature_space(&pairs, &reg, &only(Family::DialogueAct)).unwrap();
        assert_eq!(
            space.names(),
            [
                FeatureName::new(Family::DialogueAct, "Statement", ArgSide::Arg1),
                FeatureName::new(Family::DialogueAct, "Statement", ArgSide::Arg2),
            ]
        );
        assert!(space.is_frozen());
    }

    #[test]
    fn empty_input_is_rejected() {
        let reg = ProviderRegistry::default();
        assert!(matches!(build_feature_space(&[], &reg, &only(Family::Topic)), Err(FeatureError::EmptyInput)));
    }

    #[test]
    fn vectorize_sentiment_example() {
        let reg = ProviderRegistry::default();
        let p = pair("it's a great album.", "it's probably not their best.", None);
        let space = build_feature_space(std::slice::from_ref(&p), &reg, &only(Family::Sentiment)).unwrap();
        let v = vectorize_pair(&p, &space, &reg);
        let active: Vec<_> = v.active(&space).cloned().collect();
        assert!(active.contains(&FeatureName::new(Family::Sentiment, "positive", ArgSide::Arg1)));
        assert!(active.contains(&FeatureName::new(Family::Sentiment, "negative", ArgSide::Arg2)));
    }

    #[test]
    fn empty_space_gives_empty_vector() {
        let reg = ProviderRegistry::default();
        let v = vectorize_pair(&pair("hello there", "i bought it", None), &FeatureSpace::empty(), &reg);
        assert!(v.indices.is_empty());
        assert_eq!(v.dim, 0);
    }

    #[test]
    fn unseen_labels_are_dropped() {
        let reg = ProviderRegistry::default();
        let train = [pair("i bought it", "i sold it", Some("music"))];
        let space = build_feature_space(&train, &reg, &only(Family::Topic)).unwrap();
        let v = vectorize_pair(&pair("i bought it", "i sold it", Some("politics")), &space, &reg);
        assert!(v.indices.is_empty());
    }

    #[test]
    fn space_json_round_trip_and_shape() {
        let reg = ProviderRegistry::default();
        let pairs = [pair("cam newton is my favorite", "what do you think?", Some("sports"))];
        let families = Family::ALL.into_iter().collect();
        let space = build_feature_space(&pairs, &reg, &families).unwrap();
        let json = space.to_json();
        let raw: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(raw[0]["family"], "dialogue_act");
        assert!(raw[0]["side"] == "arg1" || raw[0]["side"] == "arg2");
        let back = FeatureSpace::from_json(&json).unwrap();
        assert_eq!(back, space);
        assert_eq!(back.fingerprint(), space.fingerprint());
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let n = FeatureName::new(Family::Topic, "music", ArgSide::Arg1);
        assert!(FeatureSpace::from_names(vec![n.clone(), n]).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(Family::parse_list("all").unwrap().len(), 5);
        assert_eq!(
            Family::parse_list("dialogue_act, entity").unwrap(),
            BTreeSet::from([Family::DialogueAct, Family::EntityType])
        );
        assert!(Family::parse_list("colour").is_err());
    }

    #[test]
    fn custom_provider_is_used() {
        struct Fixed;
        impl LabelProvider for Fixed {
            fn labels(&self, _: &str, _: &UtteranceContext<'_>) -> Vec<String> {
                vec!["travel".into()]
            }
        }
        let reg = ProviderRegistry::default().with(Family::Topic, Arc::new(Fixed));
        let a = reg.annotate(&pair("x y z", "a b c", Some("music")));
        assert_eq!(a.arg1[&Family::Topic], ["travel"]);
    }
}
