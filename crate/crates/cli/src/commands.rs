use crate::config::ConfigFile;
use crate::output::OutputDir;
use crate::{AblateArgs, AgreementArgs, AnnotateArgs, EvalArgs, MineArgs, SplitArgs, StatsArgs, TrainArgs, TrainOpts};
use anyhow::{anyhow, Context};
use discomine::classifier::{self, AblationPlan, Example, LinearModel, TrainConfig};
use discomine::connectives::{builtin_lexicon, load_lexicon, Pattern, PosGate, RelationLabel};
use discomine::corpus::{load_corpus, CorpusFormat};
use discomine::extractor::{compute_stats, mine_corpus, ExtractionConfig, RelationPair};
use discomine::features::{build_feature_space, vectorize_pair, Family, FeatureSpace, ProviderRegistry};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_CORPUS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_TRAIN: u8 = 3;
pub const EXIT_EVAL: u8 = 4;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

type CmdResult<T = ()> = Result<T, Failure>;

trait Exit<T> {
    fn exit(self, code: u8) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Exit<T> for Result<T, E> {
    fn exit(self, code: u8) -> CmdResult<T> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

fn fail<T>(code: u8, msg: String) -> CmdResult<T> {
    Err(Failure { code, error: anyhow!(msg) })
}

fn jsonl(pairs: &[RelationPair]) -> String {
    pairs.iter().map(|p| p.to_json_line() + "\n").collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

pub fn read_pairs(path: &Path) -> CmdResult<Vec<RelationPair>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read pairs file {}", path.display()))
        .exit(EXIT_INPUT)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .with_context(|| format!("{}:{}: not a relation pair", path.display(), i + 1))
                .exit(EXIT_INPUT)
        })
        .collect()
}

fn parse_gates(list: &str) -> anyhow::Result<BTreeSet<PosGate>> {
    if list.trim().eq_ignore_ascii_case("none") {
        return Ok(BTreeSet::new());
    }
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(PosGate::ALL.into_iter().collect());
    }
    list.split(',').map(|g| g.trim().parse().map_err(|e: String| anyhow!(e))).collect()
}

fn parse_patterns(list: &str) -> anyhow::Result<BTreeSet<Pattern>> {
    list.split(',').map(|p| p.trim().parse().map_err(|e: String| anyhow!(e))).collect()
}

pub fn mine(a: MineArgs) -> CmdResult {
    let cfg = ConfigFile::load(a.config.as_deref()).exit(EXIT_INPUT)?;
    let format_name = a.format.clone().or(cfg.get_str("format").map(String::from)).unwrap_or_else(|| {
        if a.corpus.extension().is_some_and(|e| e == "csv") {
            "csv".into()
        } else {
            "jsonl".into()
        }
    });
    let format: CorpusFormat = format_name.parse().map_err(|e: String| anyhow!(e)).exit(EXIT_INPUT)?;
    let lexicon_path = a.lexicon.clone().or(cfg.get_str("lexicon").map(PathBuf::from));
    let defaults = ExtractionConfig::default();
    let gates = match a.pos_gates.as_deref().or(cfg.get_str("pos_gates")) {
        Some(list) => parse_gates(list).exit(EXIT_INPUT)?,
        None => defaults.enabled_pos_gates.clone(),
    };
    let patterns = match a.patterns.as_deref().or(cfg.get_str("patterns")) {
        Some(list) => parse_patterns(list).exit(EXIT_INPUT)?,
        None => defaults.patterns_enabled.clone(),
    };
    let config = ExtractionConfig {
        min_arg_tokens: cfg.resolve(a.min_arg_tokens, "min_arg_tokens", defaults.min_arg_tokens).exit(EXIT_INPUT)?,
        require_verb: cfg.resolve_switch(a.no_require_verb, "require_verb", defaults.require_verb).exit(EXIT_INPUT)?,
        segment_window_sentences: cfg
            .resolve(a.window, "segment_window_sentences", defaults.segment_window_sentences)
            .exit(EXIT_INPUT)?,
        enabled_pos_gates: gates,
        patterns_enabled: patterns,
        p2_within_turn: cfg.resolve_switch(a.no_within_turn, "p2_within_turn", true).exit(EXIT_INPUT)?,
        p2_cross_turn: cfg.resolve_switch(a.no_cross_turn, "p2_cross_turn", true).exit(EXIT_INPUT)?,
    };
    config.validate().exit(EXIT_INPUT)?;

    let lexicon = match &lexicon_path {
        Some(p) => load_lexicon(p).exit(EXIT_INPUT)?,
        None => builtin_lexicon(),
    };
    let (conversations, report) = load_corpus(&a.corpus, format).exit(EXIT_CORPUS)?;
    let (pairs, stats) = mine_corpus(&conversations, &lexicon, &config).exit(EXIT_INPUT)?;

    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("pairs.jsonl", jsonl(&pairs)).exit(EXIT_INPUT)?;
    out.write("stats.json", pretty(&stats)).exit(EXIT_INPUT)?;
    out.write("stats.txt", stats.to_table()).exit(EXIT_INPUT)?;
    out.write("load_report.json", pretty(&report)).exit(EXIT_INPUT)?;
    let resolved = json!({
        "format": format.to_string(),
        "lexicon": lexicon_path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "builtin".into()),
        "extraction": config,
    });
    let mut inputs = vec![a.corpus.as_path()];
    if let Some(p) = &lexicon_path {
        inputs.push(p);
    }
    out.commit("mine", resolved, &inputs).exit(EXIT_INPUT)?;
    eprintln!(
        "mined {} pairs from {} conversations ({} dropped, {} record errors)",
        stats.total_pairs,
        report.kept,
        report.dropped,
        report.errors.len()
    );
    Ok(())
}

/// Test indices for a seeded split, sorted ascending.
fn choose_test(pairs: &[RelationPair], test_size: usize, seed: u64, stratify: bool) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<usize> = if !stratify {
        sample(&mut rng, pairs.len(), test_size).into_vec()
    } else {
        let mut by_label: BTreeMap<RelationLabel, Vec<usize>> = BTreeMap::new();
        for (i, p) in pairs.iter().enumerate() {
            by_label.entry(p.relation).or_default().push(i);
        }
        // largest-remainder allocation of the test quota
        let n = pairs.len();
        let mut quota: Vec<(RelationLabel, usize, usize)> = by_label
            .iter()
            .map(|(&l, idx)| {
                let exact = test_size * idx.len();
                (l, exact / n, exact % n)
            })
            .collect();
        let mut left = test_size - quota.iter().map(|q| q.1).sum::<usize>();
        let mut order: Vec<usize> = (0..quota.len()).collect();
        order.sort_by(|&x, &y| quota[y].2.cmp(&quota[x].2).then(x.cmp(&y)));
        for i in order {
            if left == 0 {
                break;
            }
            quota[i].1 += 1;
            left -= 1;
        }
        quota
            .iter()
            .flat_map(|&(l, k, _)| {
                let idx = &by_label[&l];
                sample(&mut rng, idx.len(), k).into_iter().map(|j| idx[j]).collect::<Vec<_>>()
            })
            .collect()
    };
    chosen.sort_unstable();
    chosen
}

pub fn split(a: SplitArgs) -> CmdResult {
    let cfg = ConfigFile::load(a.config.as_deref()).exit(EXIT_INPUT)?;
    let test_size: usize = cfg.resolve(a.test_size, "test_size", 400).exit(EXIT_INPUT)?;
    let seed: u64 = cfg.resolve(a.seed, "seed", 0).exit(EXIT_INPUT)?;
    let stratify = a.stratify || cfg.resolve(None, "stratify", false).exit(EXIT_INPUT)?;
    let pairs = read_pairs(&a.pairs)?;
    if test_size > 0 && test_size >= pairs.len() {
        return fail(
            EXIT_INPUT,
            format!("test size {test_size} must be smaller than the {} available pairs", pairs.len()),
        );
    }
    let test_idx: BTreeSet<usize> = choose_test(&pairs, test_size, seed, stratify).into_iter().collect();
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, p) in pairs.into_iter().enumerate() {
        if test_idx.contains(&i) {
            test.push(p)
        } else {
            train.push(p)
        }
    }
    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("train.jsonl", jsonl(&train)).exit(EXIT_INPUT)?;
    out.write("test.jsonl", jsonl(&test)).exit(EXIT_INPUT)?;
    let resolved = json!({ "test_size": test_size, "seed": seed, "stratify": stratify });
    out.commit("split", resolved, &[&a.pairs]).exit(EXIT_INPUT)?;
    eprintln!("{} train / {} test pairs", train.len(), test.len());
    Ok(())
}

pub fn annotate_sample(a: AnnotateArgs) -> CmdResult {
    let cfg = ConfigFile::load(a.config.as_deref()).exit(EXIT_INPUT)?;
    let seed: u64 = cfg.resolve(a.seed, "seed", 0).exit(EXIT_INPUT)?;
    let pairs = read_pairs(&a.pairs)?;
    if a.n > pairs.len() {
        return fail(EXIT_INPUT, format!("cannot sample {} of {} pairs", a.n, pairs.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = sample(&mut rng, pairs.len(), a.n).into_vec();
    chosen.sort_unstable();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["pair_id", "arg1", "arg2", "auto_relation", "human_relation", "forms_relation"])
        .exit(EXIT_INPUT)?;
    for i in chosen {
        let p = &pairs[i];
        w.write_record([&i.to_string(), &p.arg1, &p.arg2, p.relation.as_str(), "", ""]).exit(EXIT_INPUT)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}")).exit(EXIT_INPUT)?;
    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("annotation.csv", bytes).exit(EXIT_INPUT)?;
    out.commit("annotate-sample", json!({ "n": a.n, "seed": seed }), &[&a.pairs]).exit(EXIT_INPUT)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Agreement {
    rows: usize,
    annotated: usize,
    forming_relation: usize,
    forms_relation_rate: f64,
    non_relation_rate: f64,
    label_judged: usize,
    label_match_rate: f64,
}

fn truthy(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "" => None,
        "y" | "yes" | "true" | "1" => Some(true),
        _ => Some(false),
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn agreement(a: AgreementArgs) -> CmdResult {
    let mut reader = csv::Reader::from_path(&a.annotations)
        .with_context(|| format!("cannot read {}", a.annotations.display()))
        .exit(EXIT_INPUT)?;
    let headers = reader.headers().exit(EXIT_INPUT)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("annotation file lacks a `{name}` column"))
            .exit(EXIT_INPUT)
    };
    let (auto, human, forms) = (col("auto_relation")?, col("human_relation")?, col("forms_relation")?);
    let (mut rows, mut annotated, mut forming, mut judged, mut matched) = (0, 0, 0, 0, 0);
    for record in reader.records() {
        let r = record.exit(EXIT_INPUT)?;
        rows += 1;
        let Some(holds) = truthy(r.get(forms).unwrap_or("")) else { continue };
        annotated += 1;
        if !holds {
            continue;
        }
        forming += 1;
        let h = r.get(human).unwrap_or("").trim();
        if !h.is_empty() {
            judged += 1;
            if h.eq_ignore_ascii_case(r.get(auto).unwrap_or("").trim()) {
                matched += 1;
            }
        }
    }
    let summary = Agreement {
        rows,
        annotated,
        forming_relation: forming,
        forms_relation_rate: ratio(forming, annotated),
        non_relation_rate: ratio(annotated - forming, annotated),
        label_judged: judged,
        label_match_rate: ratio(matched, judged),
    };
    println!(
        "annotated {annotated}/{rows}: {:.1}% form a relation, {:.1}% do not; label match {:.1}% of {judged}",
        100.0 * summary.forms_relation_rate,
        100.0 * summary.non_relation_rate,
        100.0 * summary.label_match_rate
    );
    if let Some(dir) = &a.out {
        let mut out = OutputDir::open(dir).exit(EXIT_INPUT)?;
        out.write("agreement.json", pretty(&summary)).exit(EXIT_INPUT)?;
        out.commit("agreement", json!({}), &[&a.annotations]).exit(EXIT_INPUT)?;
    }
    Ok(())
}

fn train_config(o: &TrainOpts, cfg: &ConfigFile) -> anyhow::Result<TrainConfig> {
    let d = TrainConfig::default();
    Ok(TrainConfig {
        learning_rate: cfg.resolve(o.learning_rate, "learning_rate", d.learning_rate)?,
        l2_penalty: cfg.resolve(o.l2_penalty, "l2_penalty", d.l2_penalty)?,
        max_epochs: cfg.resolve(o.max_epochs, "max_epochs", d.max_epochs)?,
        convergence_tol: cfg.resolve(o.convergence_tol, "convergence_tol", d.convergence_tol)?,
        shuffle_seed: cfg.resolve(o.seed, "seed", d.shuffle_seed)?,
        resample: o.resample || cfg.resolve(None, "resample", d.resample)?,
    })
}

fn families(flag: Option<&str>, cfg: &ConfigFile) -> CmdResult<BTreeSet<Family>> {
    let list = flag.or(cfg.get_str("families")).unwrap_or("all");
    let set = Family::parse_list(list).exit(EXIT_INPUT)?;
    if set.is_empty() {
        return fail(EXIT_INPUT, "no feature families selected".into());
    }
    Ok(set)
}

fn examples(pairs: &[RelationPair], space: &FeatureSpace, registry: &ProviderRegistry) -> Vec<Example> {
    pairs.iter().map(|p| (vectorize_pair(p, space, registry), p.relation)).collect()
}

pub fn train(a: TrainArgs) -> CmdResult {
    let cfg = ConfigFile::load(a.opts.config.as_deref()).exit(EXIT_INPUT)?;
    let config = train_config(&a.opts, &cfg).exit(EXIT_INPUT)?;
    let fams = families(a.families.as_deref(), &cfg)?;
    let pairs = read_pairs(&a.train)?;
    let registry = ProviderRegistry::default();
    let space = build_feature_space(&pairs, &registry, &fams).exit(EXIT_TRAIN)?;
    let model = classifier::train(&examples(&pairs, &space, &registry), &config).exit(EXIT_TRAIN)?;
    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("model.json", model.to_json() + "\n").exit(EXIT_INPUT)?;
    out.write("space.json", space.to_json() + "\n").exit(EXIT_INPUT)?;
    let resolved = json!({ "families": fams, "train": config });
    out.commit("train", resolved, &[&a.train]).exit(EXIT_INPUT)?;
    eprintln!("trained on {} pairs over {} features", pairs.len(), space.len());
    Ok(())
}

pub fn eval(a: EvalArgs) -> CmdResult {
    let space_path = a.space.clone().unwrap_or_else(|| a.model.with_file_name("space.json"));
    let model_text = fs::read_to_string(&a.model)
        .with_context(|| format!("cannot read model {}", a.model.display()))
        .exit(EXIT_INPUT)?;
    let model = LinearModel::from_json(&model_text).exit(EXIT_INPUT)?;
    let space_text = fs::read_to_string(&space_path)
        .with_context(|| format!("cannot read feature space {}", space_path.display()))
        .exit(EXIT_INPUT)?;
    let space = FeatureSpace::from_json(&space_text).exit(EXIT_INPUT)?;
    let pairs = read_pairs(&a.test)?;
    let registry = ProviderRegistry::default();
    let report = classifier::evaluate(&model, &examples(&pairs, &space, &registry)).exit(EXIT_EVAL)?;
    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("report.json", pretty(&report)).exit(EXIT_INPUT)?;
    out.write("report.txt", report.to_table()).exit(EXIT_INPUT)?;
    out.commit("eval", json!({ "space": space_path.display().to_string() }), &[&a.model, &space_path, &a.test])
        .exit(EXIT_INPUT)?;
    print!("{}", report.to_table());
    Ok(())
}

pub fn ablate(a: AblateArgs) -> CmdResult {
    let cfg = ConfigFile::load(a.opts.config.as_deref()).exit(EXIT_INPUT)?;
    let config = train_config(&a.opts, &cfg).exit(EXIT_INPUT)?;
    let fams = families(a.families.as_deref(), &cfg)?;
    let runs: usize = cfg.resolve(a.runs, "runs", 5).exit(EXIT_INPUT)?;
    let plan = AblationPlan::default().restricted_to(&fams);
    let train = read_pairs(&a.train)?;
    let test = read_pairs(&a.test)?;
    let table =
        classifier::run_ablation(&train, &test, &ProviderRegistry::default(), &plan, &config, runs).map_err(|e| {
            let code = match e {
                classifier::ClassifierError::EmptyTestSet | classifier::ClassifierError::FingerprintMismatch { .. } => {
                    EXIT_EVAL
                }
                _ => EXIT_TRAIN,
            };
            Failure { code, error: e.into() }
        })?;
    let mut out = OutputDir::open(&a.out).exit(EXIT_INPUT)?;
    out.write("ablation.json", pretty(&table)).exit(EXIT_INPUT)?;
    out.write("ablation.txt", table.to_table()).exit(EXIT_INPUT)?;
    let resolved = json!({ "families": fams, "runs": runs, "train": config, "plan": plan });
    out.commit("ablate", resolved, &[&a.train, &a.test]).exit(EXIT_INPUT)?;
    print!("{}", table.to_table());
    Ok(())
}

pub fn stats(a: StatsArgs) -> CmdResult {
    let pairs = read_pairs(&a.pairs)?;
    let stats = compute_stats(&pairs);
    print!("{}", stats.to_table());
    if let Some(dir) = &a.out {
        let mut out = OutputDir::open(dir).exit(EXIT_INPUT)?;
        out.write("stats.json", pretty(&stats)).exit(EXIT_INPUT)?;
        out.write("stats.txt", stats.to_table()).exit(EXIT_INPUT)?;
        out.commit("stats", json!({}), &[&a.pairs]).exit(EXIT_INPUT)?;
    }
    Ok(())
}
