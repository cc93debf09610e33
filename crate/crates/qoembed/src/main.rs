use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use qoembed::groups::{build_presentation, recover_graph, GraphStruct, Group, Presentation, Word};
use qoembed::gtrees::{g_embeds, Skeleton};
use qoembed::pipeline::{
    graph_to_metric, run_reduction, run_suite, DeskQuasiOrder, Rational, SuiteParams, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "qoembed", version, about = "Quasi-order reductions, skeletons and graph groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Depth of the bit strings the quasi-order lives on.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Witness and conjugator length bound for bounded checks.
    #[arg(long, global = true, default_value_t = 2)]
    bound: usize,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Pres,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-order to S_T and skeletons, with the comparison matrices.
    Encode {
        /// Quasi-order JSON; defaults to the identity at --depth.
        #[arg(long)]
        relation: Option<PathBuf>,
    },
    /// Decide embeddability between two skeleton files.
    Embeds { a: PathBuf, b: PathBuf },
    /// Graph to its group presentation.
    Group {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Identity test and order of a word.
    Word {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Evaluate gen, Same, (=) and (R) on words.
    Interpret {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        other: Option<String>,
    },
    /// Recover the graph from a presentation.
    Recover {
        #[arg(long)]
        pres: PathBuf,
        /// Generator words separated by `;`; defaults to v_0, v_1, ...
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
    },
    /// Graph to a discrete metric space.
    Metric {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "1")]
        r0: String,
        #[arg(long, default_value = "2")]
        r1: String,
    },
    /// Run a named property suite.
    Check { suite: String },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(Presentation::from_text(&text)?)
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: serde::Serialize>(x: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

/// Returns whether the checked property held.
fn run(cli: &Cli) -> anyhow::Result<bool> {
    let format = cli.format;
    match &cli.command {
        Command::Encode { relation } => {
            let r = match relation {
                Some(p) => read_json::<DeskQuasiOrder>(p)?,
                None => DeskQuasiOrder::identity(cli.depth),
            };
            let bundle = run_reduction(&r)?;
            match format {
                Some(Format::Dot) => {
                    let dots: String = bundle.skeletons.iter().map(Skeleton::to_dot).collect();
                    emit(cli, &dots)?;
                }
                Some(Format::Pres) => bail!("encode writes json or dot"),
                _ => emit(cli, &json(&bundle)?)?,
            }
            if cli.out.is_some() || format == Some(Format::Dot) {
                eprint!("{}", bundle.matrix_text());
            }
            Ok(bundle.coincide())
        }
        Command::Embeds { a, b } => {
            let (a, b): (Skeleton, Skeleton) = (read_json(a)?, read_json(b)?);
            let mut text = String::new();
            match g_embeds(&a, &b)? {
                Some(map) => {
                    text.push_str("embeds\n");
                    for (s, t) in map.assignments() {
                        text.push_str(&format!("  {s} -> {t}\n"));
                    }
                }
                None => text.push_str("does not embed\n"),
            }
            emit(cli, &text)?;
            Ok(true)
        }
        Command::Group { graph } => {
            let g: GraphStruct = read_json(graph)?;
            let p = build_presentation(&g);
            match format {
                Some(Format::Json) => emit(cli, &json(&p)?)?,
                Some(Format::Dot) => emit(cli, &g.to_dot())?,
                _ => emit(cli, &p.to_text())?,
            }
            Ok(true)
        }
        Command::Word { pres, word } => {
            let group = Group::new(read_presentation(pres)?)?;
            let w = Word::parse(word)?;
            let line = if group.is_identity(&w) {
                "identity".to_string()
            } else {
                group.order(&w)?.to_string()
            };
            emit(cli, &format!("{line}\n"))?;
            Ok(true)
        }
        Command::Interpret { pres, word, other } => {
            let group = Group::new(read_presentation(pres)?)?;
            let a = Word::parse(word)?;
            let mut text = match group.gen(&a)? {
                Some(g) => format!("gen: vertex {} sign {:+}\n", g.vertex, g.sign),
                None => "gen: no\n".to_string(),
            };
            if let Some(other) = other {
                let b = Word::parse(other)?;
                text.push_str(&format!("same: {}\n", group.same(&a, &b)?));
                if group.gen(&a)?.is_some() && group.gen(&b)?.is_some() {
                    text.push_str(&format!("eq: {}\n", group.eq_gamma(&a, &b)?));
                    text.push_str(&format!("R: {}\n", group.r_gamma(&a, &b)?));
                    text.push_str(&format!(
                        "eq (bounded {}): {}\n",
                        cli.bound,
                        group.eq_gamma_bounded(&a, &b, cli.bound)
                    ));
                }
            }
            emit(cli, &text)?;
            Ok(true)
        }
        Command::Recover { pres, gens } => {
            let group = Group::new(read_presentation(pres)?)?;
            let gens: Vec<Word> = match gens {
                Some(s) => s.split(';').map(Word::parse).collect::<Result<_, _>>()?,
                None => (0..group.n() as u32).map(Word::gen).collect(),
            };
            let g = recover_graph(&group, &gens)?;
            match format {
                Some(Format::Dot) => emit(cli, &g.to_dot())?,
                _ => emit(cli, &json(&g)?)?,
            }
            Ok(true)
        }
        Command::Metric { graph, r0, r1 } => {
            let g: GraphStruct = read_json(graph)?;
            let r0: Rational = r0.parse().with_context(|| format!("bad r0 {r0:?}"))?;
            let r1: Rational = r1.parse().with_context(|| format!("bad r1 {r1:?}"))?;
            emit(cli, &json(&graph_to_metric(&g, r0, r1)?)?)?;
            Ok(true)
        }
        Command::Check { suite } => {
            let params = SuiteParams { depth: cli.depth, seed: cli.seed, bound: cli.bound };
            let report = run_suite(suite, &params)?;
            let mut text = format!("{}: {}\n", report.name, if report.passed { "pass" } else { "FAIL" });
            for line in &report.lines {
                text.push_str(&format!("  {line}\n"));
            }
            if format == Some(Format::Json) {
                text = json(&report)?;
            }
            emit(cli, &text)?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
