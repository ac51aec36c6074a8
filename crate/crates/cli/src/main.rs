use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use invlam::ccg::CategoryMap;
use invlam::corpus::{
    attach_derivations, cross_validate, evaluate, load_corpus, preprocess_clang, CorpusExample,
    CvConfig, Dialect, EvalReport, MatchOptions, SplitMode,
};
use invlam::inverse::{inverse_l, inverse_r};
use invlam::lambda::{parse_term, Signature, Term};
use invlam::learner::{
    checkpoint_text, parse_checkpoint, train_with, Model, TrainConfig, TrainingExample,
};
use invlam::lexicon::Lexicon;

/// Learn semantic parsers with inverse λ operators.
///
/// Every flag can also be set through an `INVLAM_` environment variable,
/// e.g. `INVLAM_EPOCHS=10`.
#[derive(Parser, Debug)]
#[command(name = "invlam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train on a corpus and write a checkpoint.
    Train(TrainArgs),
    /// Print the most probable meaning of each sentence.
    Parse(ParseArgs),
    /// Score a checkpoint on a corpus.
    Eval(EvalArgs),
    /// Cross-validate training on a corpus.
    Crossval(CrossvalArgs),
    /// Solve H = G@F (right) or H = F@G (left) for F.
    Inverse(InverseArgs),
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long, env = "INVLAM_CORPUS")]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = DialectArg::Geo, env = "INVLAM_DIALECT")]
    dialect: DialectArg,
    /// One derivation per corpus example; `-` or an empty line for none.
    #[arg(long, env = "INVLAM_DERIVATIONS")]
    derivations: Option<PathBuf>,
    /// Category renaming file (`FROM TO` per line) for derivations.
    #[arg(long, env = "INVLAM_CATEGORY_MAP")]
    category_map: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LexiconArgs {
    /// Initial lexicon or checkpoint.
    #[arg(
        long = "lexicon-in",
        visible_alias = "lexicon",
        env = "INVLAM_LEXICON_IN"
    )]
    lexicon_in: PathBuf,
    /// Type signature; without one every name is accepted.
    #[arg(long, env = "INVLAM_SIGNATURE")]
    signature: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainKnobs {
    /// Training epochs (T).
    #[arg(long, default_value_t = 50, env = "INVLAM_EPOCHS")]
    epochs: usize,
    /// Lexical generation passes per epoch (n).
    #[arg(long, default_value_t = 3, env = "INVLAM_PASSES")]
    passes: usize,
    #[arg(long, default_value_t = 16, env = "INVLAM_BEAM")]
    beam: usize,
    #[arg(long, default_value_t = 0.1, env = "INVLAM_ALPHA0")]
    alpha0: f64,
    #[arg(long, default_value_t = 0.001, env = "INVLAM_C")]
    c: f64,
    #[arg(long, default_value_t = 0, env = "INVLAM_SEED")]
    seed: u64,
    /// Enable forward and backward composition.
    #[arg(long, env = "INVLAM_COMPOSITION_RULES")]
    composition_rules: bool,
    /// Shuffle examples before each gradient pass.
    #[arg(long, env = "INVLAM_SHUFFLE")]
    shuffle: bool,
}

impl TrainKnobs {
    fn config(&self) -> Result<TrainConfig> {
        if self.beam == 0 {
            bail!("--beam must be at least 1");
        }
        if !(self.alpha0 > 0.0 && self.c >= 0.0) {
            bail!("--alpha0 must be positive and --c non-negative");
        }
        Ok(TrainConfig {
            epochs: self.epochs,
            passes: self.passes.max(1),
            alpha0: self.alpha0,
            c: self.c,
            seed: self.seed,
            beam: self.beam,
            composition: self.composition_rules,
            shuffle: self.shuffle,
            ..TrainConfig::default()
        })
    }
}

#[derive(Args, Debug)]
struct MatchArgs {
    /// Treat `definer` and `definec` as the same head.
    #[arg(long, env = "INVLAM_UNIFY_DEFINE")]
    unify_define: bool,
    /// Commutative heads, one per line (default: and, or).
    #[arg(long, env = "INVLAM_COMMUTATIVE")]
    commutative: Option<PathBuf>,
}

impl MatchArgs {
    fn options(&self) -> Result<MatchOptions> {
        let mut opts = MatchOptions {
            unify_define: self.unify_define,
            ..MatchOptions::default()
        };
        if let Some(p) = &self.commutative {
            opts.commutative = MatchOptions::parse_commutative(&read(p)?);
        }
        Ok(opts)
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long = "lexicon-out", env = "INVLAM_LEXICON_OUT")]
    lexicon_out: PathBuf,
    #[command(flatten)]
    knobs: TrainKnobs,
    /// Per-epoch metrics as JSON lines; standard error when absent.
    #[arg(long, env = "INVLAM_METRICS")]
    metrics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParseArgs {
    #[command(flatten)]
    lexicon: LexiconArgs,
    /// Also print the probability of the chosen meaning.
    #[arg(long)]
    probability: bool,
    /// Sentences to parse; read from standard input, one per line, if none.
    sentences: Vec<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    matching: MatchArgs,
}

#[derive(Args, Debug)]
struct CrossvalArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    knobs: TrainKnobs,
    #[command(flatten)]
    matching: MatchArgs,
    /// Folds, or repetitions of the half split.
    #[arg(long, default_value_t = 10, env = "INVLAM_FOLDS")]
    folds: usize,
    #[arg(long, value_enum, default_value_t = SplitArg::Kfold, env = "INVLAM_SPLIT_MODE")]
    split_mode: SplitArg,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0, env = "INVLAM_JOBS")]
    jobs: usize,
}

#[derive(Args, Debug)]
struct InverseArgs {
    #[arg(long, value_enum, default_value_t = Side::Right)]
    direction: Side,
    /// The known result H.
    h: String,
    /// The known functor (right) or argument (left) G.
    g: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DialectArg {
    Geo,
    Clang,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SplitArg {
    Kfold,
    Half,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Right,
    Left,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn signature(args: &LexiconArgs) -> Result<Signature> {
    match &args.signature {
        Some(p) => {
            Signature::parse(&read(p)?).with_context(|| format!("bad signature {}", p.display()))
        }
        None => Ok(Signature::dynamic()),
    }
}

fn load_lexicon(args: &LexiconArgs) -> Result<(Lexicon, Option<TrainConfig>)> {
    let sig = signature(args)?;
    let text = read(&args.lexicon_in)?;
    parse_checkpoint(&text, &sig)
        .with_context(|| format!("bad lexicon {}", args.lexicon_in.display()))
}

fn load_examples(args: &CorpusArgs) -> Result<Vec<CorpusExample>> {
    let dialect = match args.dialect {
        DialectArg::Geo => Dialect::Geo,
        DialectArg::Clang => Dialect::Clang,
    };
    let load = load_corpus(&args.corpus, dialect)
        .with_context(|| format!("cannot read {}", args.corpus.display()))?;
    for e in &load.errors {
        log::warn!("{}: skipped block at {e}", args.corpus.display());
    }
    let mut examples = load.examples;
    if dialect == Dialect::Clang {
        examples = examples.iter().map(preprocess_clang).collect();
    }
    if let Some(p) = &args.derivations {
        let map = match &args.category_map {
            Some(m) => CategoryMap::parse_file(&read(m)?)
                .with_context(|| format!("bad category map {}", m.display()))?,
            None => CategoryMap::default(),
        };
        attach_derivations(&mut examples, &read(p)?, &map)
            .with_context(|| format!("bad derivations {}", p.display()))?;
    }
    if examples.is_empty() {
        bail!("{} holds no usable examples", args.corpus.display());
    }
    Ok(examples)
}

fn print_table(rows: &[(String, EvalReport)]) {
    println!(
        "{:<10} {:>10} {:>10} {:>10}",
        "", "Precision", "Recall", "F-measure"
    );
    for (name, r) in rows {
        println!(
            "{:<10} {:>10.2} {:>10.2} {:>10.2}",
            name, r.precision, r.recall, r.f_measure
        );
    }
}

fn run_train(a: &TrainArgs) -> Result<ExitCode> {
    let examples = load_examples(&a.corpus)?;
    let (l0, _) = load_lexicon(&a.lexicon)?;
    let cfg = a.knobs.config()?;
    let training: Vec<TrainingExample> = examples.iter().map(|e| e.to_training(&l0)).collect();
    let mut sink: Box<dyn Write> = match &a.metrics {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?)
        }
        None => Box::new(io::stderr()),
    };
    let mut write_err = None;
    let outcome = train_with(&training, &l0, &cfg, &mut |m| {
        let line = serde_json::to_string(m).expect("metrics serialize");
        if let Err(e) = writeln!(sink, "{line}") {
            write_err.get_or_insert(e);
        }
    });
    if let Some(e) = write_err {
        return Err(e).context("cannot write metrics");
    }
    fs::write(
        &a.lexicon_out,
        checkpoint_text(&outcome.model.lexicon, &cfg),
    )
    .with_context(|| format!("cannot write {}", a.lexicon_out.display()))?;
    log::info!(
        "wrote {} entries to {}",
        outcome.model.lexicon.len(),
        a.lexicon_out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn load_model(args: &LexiconArgs) -> Result<Model> {
    let (lex, cfg) = load_lexicon(args)?;
    Ok(Model::new(lex, cfg.unwrap_or_default().chart_config()))
}

fn run_parse(a: &ParseArgs) -> Result<ExitCode> {
    let model = load_model(&a.lexicon)?;
    let sentences: Vec<String> = if a.sentences.is_empty() {
        io::stdin()
            .lock()
            .lines()
            .collect::<io::Result<_>>()
            .context("cannot read standard input")?
    } else {
        a.sentences.clone()
    };
    let mut failed = false;
    for s in sentences.iter().filter(|s| !s.trim().is_empty()) {
        match model.best_parse(&model.tokens(s)) {
            Ok((t, p)) if a.probability => println!("{t}\t{p:.6}"),
            Ok((t, _)) => println!("{t}"),
            Err(e) => {
                failed = true;
                println!("NO-PARSE");
                log::warn!("{e}");
            }
        }
    }
    Ok(if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_eval(a: &EvalArgs) -> Result<ExitCode> {
    let examples = load_examples(&a.corpus)?;
    let model = load_model(&a.lexicon)?;
    let report = evaluate(&model, &examples, &a.matching.options()?);
    print_table(&[("all".to_string(), report)]);
    Ok(ExitCode::SUCCESS)
}

fn run_crossval(a: &CrossvalArgs) -> Result<ExitCode> {
    let examples = load_examples(&a.corpus)?;
    let (l0, _) = load_lexicon(&a.lexicon)?;
    let cv = CvConfig {
        folds: a.folds,
        mode: match a.split_mode {
            SplitArg::Kfold => SplitMode::KFold,
            SplitArg::Half => SplitMode::HalfSplit,
        },
        seed: a.knobs.seed,
        jobs: a.jobs,
    };
    let report = cross_validate(
        &examples,
        &cv,
        &a.knobs.config()?,
        &l0,
        &a.matching.options()?,
    )?;
    let mut rows: Vec<(String, EvalReport)> = report
        .folds
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("fold {}", i + 1), *r))
        .collect();
    rows.push(("aggregate".to_string(), report.aggregate));
    print_table(&rows);
    Ok(ExitCode::SUCCESS)
}

fn run_inverse(a: &InverseArgs) -> Result<ExitCode> {
    let sig = Signature::dynamic();
    let h: Term = parse_term(&a.h, &sig).context("bad H")?;
    let g: Term = parse_term(&a.g, &sig).context("bad G")?;
    let result = match a.direction {
        Side::Right => inverse_r(&h, &g),
        Side::Left => inverse_l(&h, &g),
    }?;
    if result.is_null() {
        eprintln!("no candidates");
    }
    for c in &result.candidates {
        println!("{}\t{}", c.term, c.case);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(a) => run_train(a),
        Command::Parse(a) => run_parse(a),
        Command::Eval(a) => run_eval(a),
        Command::Crossval(a) => run_crossval(a),
        Command::Inverse(a) => run_inverse(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
