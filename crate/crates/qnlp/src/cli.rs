//! The `qnlp` command line.
//!
//! Exit codes: 0 on success, 1 for runtime and IO failures, 2 for usage and
//! configuration errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnlp_core::ansatz::{compile, AnsatzConfig, Compiled, DEFAULT_BOND_DIM};
use qnlp_core::backends::ParameterStore;
use qnlp_core::ccg::{parse_auto, to_auto, tree_to_diagram};
use qnlp_core::readers::{cups_read, spiders_read, Sentence};
use qnlp_core::rewrite::{parse_word_list, Rewriter, WordLists};
use qnlp_core::training::{
    compile_dataset, dataset_derivation, evaluate_test, generate_dataset, train, LabeledDataset,
};
use qnlp_core::Diagram;

use crate::config::{parse_sizes, type_sizes, PipelineConfig, ReaderKind};
use crate::corpus::section_to_diagrams;
use crate::error::{Error, Result};
use crate::files::{dataset_to_tsv, history_csv, parse_dataset, read, write, Metrics};
use crate::json::{
    circuit_to_json, diagram_from_json, diagram_to_json, network_to_json, params_from_json, params_to_json,
};
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "qnlp", version, about = "Compile sentences to string diagrams, circuits and tensor networks, and train classifiers on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn a sentence or an AUTO file into diagram JSON.
    Parse(ParseArgs),
    /// Apply rewrite rules to a diagram and normalise it.
    Rewrite(RewriteArgs),
    /// Compile a diagram into a circuit or tensor network.
    Compile(CompileArgs),
    /// Train a classifier and write history, parameters and metrics.
    Train(TrainArgs),
    /// Score saved parameters on the test split.
    Eval(EvalArgs),
    /// Write the generated food/IT dataset and its derivations.
    GenDataset(GenArgs),
}

#[derive(Debug, Args)]
struct ParseArgs {
    /// Sentence text, for the cups and spiders readers.
    text: Option<String>,
    #[arg(long, value_enum)]
    reader: Option<ReaderKind>,
    /// AUTO file or directory of `.auto` files.
    #[arg(long)]
    ccg: Option<PathBuf>,
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
    /// File stem for a single sentence; defaults to the joined tokens.
    #[arg(long)]
    name: Option<String>,
    /// Also write `<name>.svg`.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct RewriteArgs {
    diagram: PathBuf,
    /// Comma-separated rule names.
    #[arg(long, value_delimiter = ',')]
    rules: Vec<String>,
    /// Word list override, `list=path` with list one of auxiliary,
    /// connector, determiner, adverb, preposition.
    #[arg(long = "words")]
    words: Vec<String>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AnsatzKind {
    Iqp,
    Tensor,
    Mps,
    Spider,
}

#[derive(Debug, Args)]
struct CompileArgs {
    diagram: PathBuf,
    #[arg(long, value_enum)]
    ansatz: AnsatzKind,
    /// Qubits per type for iqp, e.g. `n=1,s=1`.
    #[arg(long, default_value = "n=1,s=1")]
    q: String,
    /// Dimensions per type for tensor networks, e.g. `n=2,s=2`.
    #[arg(long, default_value = "n=2,s=2")]
    d: String,
    #[arg(long, default_value_t = 1)]
    layers: usize,
    #[arg(long, default_value_t = DEFAULT_BOND_DIM)]
    bond: usize,
    /// Defaults to 3 for mps and 2 for spider.
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Pipeline {
    #[arg(long)]
    config: PathBuf,
    /// `label<TAB>sentence` file.
    #[arg(long)]
    dataset: PathBuf,
    /// AUTO derivations, one per sentence in order; defaults to the
    /// dataset path with an `.auto` extension when the reader is ccg.
    #[arg(long)]
    derivations: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, value_enum)]
    reader: Option<ReaderKind>,
    /// Comma-separated rewrite rules, replacing the configured ones.
    #[arg(long, value_delimiter = ',')]
    rewrite: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    pipeline: Pipeline,
    #[arg(long, short, default_value = "run")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    pipeline: Pipeline,
    #[arg(long)]
    params: PathBuf,
    /// Metrics file; printed to stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short, default_value = "dataset.tsv")]
    out: PathBuf,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Parse(a) => cmd_parse(a),
        Command::Rewrite(a) => cmd_rewrite(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::GenDataset(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Keeps file names portable.
fn file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "diagram".into()
    } else {
        s
    }
}

fn write_diagram(dir: &Path, stem: &str, d: &Diagram, svg: bool) -> Result<()> {
    let path = dir.join(format!("{stem}.diagram.json"));
    write(&path, &(diagram_to_json(d) + "\n"))?;
    println!("{}", path.display());
    if svg {
        write(&dir.join(format!("{stem}.svg")), &render_svg(d))?;
    }
    Ok(())
}

fn cmd_parse(a: ParseArgs) -> Result<()> {
    match (&a.ccg, &a.text) {
        (Some(path), None) => {
            if matches!(a.reader, Some(r) if r != ReaderKind::Ccg) {
                return Err(usage("--ccg cannot be combined with the cups or spiders reader"));
            }
            let items = section_to_diagrams(path)?;
            let mut ok = 0;
            for item in &items {
                match &item.diagram {
                    Ok(d) => {
                        write_diagram(&a.out, &file_stem(&item.id), d, a.svg)?;
                        ok += 1;
                    }
                    Err(e) => eprintln!("skipped {} ({}:{}): {e}", item.id, item.file.display(), item.line),
                }
            }
            eprintln!("converted {ok} of {} derivations", items.len());
            Ok(())
        }
        (None, Some(text)) => {
            let sentence = Sentence::parse(text)?;
            let d = match a.reader.unwrap_or(ReaderKind::Cups) {
                ReaderKind::Cups => cups_read(&sentence),
                ReaderKind::Spiders => spiders_read(&sentence),
                ReaderKind::Ccg => return Err(usage("the ccg reader takes derivations via --ccg")),
            };
            let stem = a.name.clone().unwrap_or_else(|| sentence.tokens().join("_"));
            write_diagram(&a.out, &file_stem(&stem), &d, a.svg)
        }
        (Some(_), Some(_)) => Err(usage("give either sentence text or --ccg, not both")),
        (None, None) => Err(usage("give sentence text or --ccg")),
    }
}

fn word_lists(specs: &[String]) -> Result<WordLists> {
    let mut lists = WordLists::default();
    for spec in specs {
        let (name, path) = spec.split_once('=').ok_or_else(|| usage(format!("`{spec}` is not list=path")))?;
        let words = parse_word_list(&read(Path::new(path))?);
        match name {
            "auxiliary" => lists.auxiliary = words,
            "connector" => lists.connector = words,
            "determiner" => lists.determiner = words,
            "adverb" => lists.adverb = Some(words),
            "preposition" => lists.preposition = Some(words),
            other => return Err(usage(format!("unknown word list `{other}`"))),
        }
    }
    Ok(lists)
}

/// `x.diagram.json` becomes `x.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".diagram.json").or_else(|| name.strip_suffix(".json")).unwrap_or(&name);
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn cmd_rewrite(a: RewriteArgs) -> Result<()> {
    let rules: Vec<String> = a.rules.into_iter().filter(|r| !r.is_empty()).collect();
    let rewriter = Rewriter::from_names(&rules, &word_lists(&a.words)?)?;
    let d = diagram_from_json(&read(&a.diagram)?)?;
    let out_d = rewriter.apply_normalized(&d);
    let out = a.out.unwrap_or_else(|| sibling(&a.diagram, "rewritten.diagram.json"));
    write(&out, &(diagram_to_json(&out_d) + "\n"))?;
    if a.svg {
        write(&sibling(&out, "svg"), &render_svg(&out_d))?;
    }
    println!("{}", out.display());
    Ok(())
}

fn cmd_compile(a: CompileArgs) -> Result<()> {
    let config = match a.ansatz {
        AnsatzKind::Iqp => AnsatzConfig::Iqp { qubits: type_sizes(&parse_sizes(&a.q)?)?, layers: a.layers },
        AnsatzKind::Tensor => AnsatzConfig::Tensor { dims: type_sizes(&parse_sizes(&a.d)?)? },
        AnsatzKind::Mps => AnsatzConfig::Mps {
            dims: type_sizes(&parse_sizes(&a.d)?)?,
            bond_dim: a.bond,
            max_order: a.max_order.unwrap_or(3),
        },
        AnsatzKind::Spider => {
            AnsatzConfig::Spider { dims: type_sizes(&parse_sizes(&a.d)?)?, max_order: a.max_order.unwrap_or(2) }
        }
    };
    config.validate()?;
    let d = diagram_from_json(&read(&a.diagram)?)?;
    let compiled = compile(&d, &config)?;
    let (text, suffix) = match &compiled {
        Compiled::Circuit(c) => (circuit_to_json(c), "circuit.json"),
        Compiled::Network(tn) => (network_to_json(tn), "network.json"),
    };
    let out = a.out.unwrap_or_else(|| sibling(&a.diagram, suffix));
    write(&out, &(text + "\n"))?;
    let symbols = compiled.symbols();
    let n_params: usize = symbols.iter().map(|s| s.size()).sum();
    println!("{}: {} symbols, {n_params} parameters", out.display(), symbols.len());
    Ok(())
}

struct Loaded {
    config: PipelineConfig,
    dataset: LabeledDataset,
    models: Vec<Compiled>,
}

fn load_pipeline(p: &Pipeline) -> Result<Loaded> {
    let mut config = PipelineConfig::from_toml(&read(&p.config)?).map_err(|e| match e {
        Error::Parse { offset, reason } => usage(format!("{} at byte {offset}: {reason}", p.config.display())),
        other => other,
    })?;
    if let Some(seed) = p.seed {
        config.seed = seed;
    }
    if let Some(n) = p.iterations {
        config.optimizer.set_iterations(n);
    }
    if let Some(r) = p.reader {
        config.reader = r;
    }
    if let Some(rules) = &p.rewrite {
        config.rewrite = rules.iter().filter(|r| !r.is_empty()).cloned().collect();
    }
    config.check()?;

    let dataset = parse_dataset(&read(&p.dataset)?)?;
    let rewriter = Rewriter::from_names(&config.rewrite, &WordLists::default())?;
    let trees = match config.reader {
        ReaderKind::Ccg => {
            let path = p.derivations.clone().unwrap_or_else(|| p.dataset.with_extension("auto"));
            let trees = if path.exists() || p.derivations.is_some() {
                parse_auto(&read(&path)?)?
            } else {
                log::info!("{} not found; using the built-in dataset grammar", path.display());
                dataset.items.iter().map(|(s, _)| dataset_derivation(s)).collect::<qnlp_core::Result<_>>()?
            };
            if trees.len() != dataset.items.len() {
                return Err(Error::Core(qnlp_core::Error::Derivation(format!(
                    "{} derivations for {} sentences",
                    trees.len(),
                    dataset.items.len()
                ))));
            }
            Some(trees)
        }
        _ => None,
    };
    let reader = config.reader;
    let models = compile_dataset(
        &dataset,
        |i, text| {
            let d = match (reader, &trees) {
                (ReaderKind::Ccg, Some(t)) => tree_to_diagram(&t[i])?,
                (ReaderKind::Spiders, _) => spiders_read(&Sentence::parse(text)?),
                _ => cups_read(&Sentence::parse(text)?),
            };
            Ok(rewriter.apply_normalized(&d))
        },
        &config.ansatz.to_config()?,
    )?;
    Ok(Loaded { config, dataset, models })
}

fn metrics_json(m: &Metrics) -> String {
    serde_json::to_string_pretty(m).expect("metrics serialize") + "\n"
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let Loaded { config, dataset, models } = load_pipeline(&a.pipeline)?;
    let cfg = config.train_config();
    let result = train(&models, &dataset, &cfg)?;
    let metrics = Metrics {
        iterations: cfg.iterations,
        test_loss: result.test_loss,
        test_accuracy: result.test_acc,
        final_dev_accuracy: result.history.last().map(|r| r.dev_acc),
    };
    write(&a.out.join("history.csv"), &history_csv(&result.history))?;
    write(&a.out.join("params.json"), &(params_to_json(&result.params) + "\n"))?;
    write(&a.out.join("config.toml"), &config.to_toml())?;
    let text = metrics_json(&metrics);
    write(&a.out.join("metrics.json"), &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let Loaded { config, dataset, models } = load_pipeline(&a.pipeline)?;
    let params: ParameterStore = params_from_json(&read(&a.params)?)?;
    let cfg = config.train_config();
    let (test_loss, test_accuracy) = evaluate_test(&models, &dataset, &params, &cfg)?;
    let text = metrics_json(&Metrics { iterations: cfg.iterations, test_loss, test_accuracy, final_dev_accuracy: None });
    match a.out {
        Some(path) => write(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let ds = generate_dataset(a.seed);
    write(&a.out, &dataset_to_tsv(&ds))?;
    let mut auto = String::new();
    for (i, (text, _)) in ds.items.iter().enumerate() {
        auto.push_str(&format!("ID=gen_{}.{}\n{}\n", a.seed, i + 1, to_auto(&dataset_derivation(text)?)));
    }
    let auto_path = a.out.with_extension("auto");
    write(&auto_path, &auto)?;
    println!("{}\n{}", a.out.display(), auto_path.display());
    Ok(())
}
