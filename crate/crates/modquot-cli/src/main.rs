//! One binary exposing the library's operations with reproducible,
//! machine-readable output.
//!
//! Exit status: 0 for any computed verdict (including `not_isomorphic`,
//! `undecided`, and `nontrivial`), 2 for input and parameter errors, 3 for
//! refused budgets.  Randomized commands derive all randomness from `--seed`,
//! so identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use modquot::barbell::{build_barbell, theta_readable};
use modquot::genericity::{check_q_with_budget, survey, Condition, GenericityParams, Verdict};
use modquot::isocount::{
    asymptotic_im, encode_presentation, generic_iso, has_free_orbit, orbit_census,
    GenericPresentation,
};
use modquot::smallcancel::{dehn_normalize, dehn_normalize_cyclic};
use modquot::tuples::{
    symmetrized_closure, symmetry_group_order, RelatorTuple, DEFAULT_ORBIT_BUDGET,
};
use modquot::words::{cyclic_reduce, sample_cyclic_ball_with, Word};
use modquot::Error;

#[derive(Parser)]
#[command(
    name = "modquot",
    version,
    about = "Relator tuples over the {a, b, B} alphabet: genericity checks, small cancellation, \
             barbell readability, class counting, and isomorphism verdicts"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output format; csv is available for survey and count.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Threshold profile: paper enforces the strict defaults, experiment
    /// allows desk-scale overrides.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Paper)]
    mode: Mode,

    /// Small-cancellation threshold, an exact fraction like 1/120.
    #[arg(long, global = true)]
    lambda: Option<String>,

    /// Readability threshold, an exact fraction like 1/40.
    #[arg(long, global = true)]
    theta: Option<String>,

    /// Minimum relator length enforced by the battery.
    #[arg(long, global = true)]
    min_length: Option<usize>,

    /// Base seed for all randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trial count for survey.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Enumeration budget for transform searches and tuple walks.
    #[arg(long, global = true)]
    budget: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    Experiment,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountFilter {
    /// Every tuple of the given length.
    All,
    /// Tuples whose equivalence class has the full size 2 m! (2n)^m.
    Free,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a word, optionally normalizing free-form input first.
    Word {
        text: String,
        /// Accept unreduced input and cancel it.
        #[arg(long)]
        normalize: bool,
        /// Invert the word.
        #[arg(long)]
        invert: bool,
        /// Apply the letterwise b <-> B flip.
        #[arg(long)]
        eta: bool,
        /// Reduce cyclically and rotate to the least representative.
        #[arg(long)]
        canonical: bool,
    },
    /// Run the genericity battery on a relator tuple file.
    GenCheck { file: PathBuf },
    /// Decide whether two tuple files present isomorphic quotients.
    Iso { left: PathBuf, right: PathBuf },
    /// Sample relator tuples; sample k depends only on seed ^ k.
    Sample {
        /// Entry length, or the ball radius in ball mode.
        #[arg(long)]
        length: usize,
        /// Relators per tuple.
        #[arg(long, default_value_t = 1)]
        relators: usize,
        /// Number of tuples; text output separates them with blank lines.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Draw nonempty entries uniformly from the ball of the given
        /// radius instead of the sphere.
        #[arg(long)]
        ball: bool,
    },
    /// Estimate battery pass rates over random tuples.
    Survey {
        /// Entry length, or the ball radius without --equal-length.
        #[arg(long)]
        length: usize,
        /// Relators per tuple.
        #[arg(long, default_value_t = 1)]
        relators: usize,
        /// Sample entries from the length sphere instead of the ball.
        #[arg(long)]
        equal_length: bool,
    },
    /// Count tuples of one entry length and their equivalence classes.
    Count {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        relators: usize,
        #[arg(long, value_enum, default_value_t = CountFilter::All)]
        filter: CountFilter,
    },
    /// Decide triviality of a word in the quotient by a tuple file.
    Triviality {
        file: PathBuf,
        word: String,
        /// Scan only linear factors instead of deciding up to conjugacy.
        #[arg(long)]
        linear: bool,
    },
    /// Readability of a word in bar graphs: fixed bar, or a search over all
    /// bars up to the theta threshold.
    Readability {
        word: String,
        /// Check this explicit bar instead of searching.
        #[arg(long)]
        bar: Option<String>,
    },
    /// Encode a presentation file as a 3-bit-per-symbol binary string.
    Encode { file: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Failure {
        let code = match error {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: error.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|error| input_error(format!("{}: {error}", path.display())))
}

fn parse_ratio(text: &str) -> Result<Ratio<u64>, Error> {
    let bad = || Error::BadRational {
        input: text.to_string(),
    };
    let (numer, denom) = text.split_once('/').ok_or_else(bad)?;
    let numer: u64 = numer.trim().parse().map_err(|_| bad())?;
    let denom: u64 = denom.trim().parse().map_err(|_| bad())?;
    if numer == 0 || denom == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(numer, denom))
}

impl Cli {
    fn params(&self) -> Result<GenericityParams, Failure> {
        let defaults = GenericityParams::default();
        let params = GenericityParams {
            lambda: match &self.lambda {
                Some(text) => parse_ratio(text)?,
                None => defaults.lambda,
            },
            theta: match &self.theta {
                Some(text) => parse_ratio(text)?,
                None => defaults.theta,
            },
            min_length: self.min_length.unwrap_or(defaults.min_length),
            experiment: self.mode == Mode::Experiment,
        };
        params.validate()?;
        Ok(params)
    }

    fn theta_threshold(&self) -> Result<Ratio<u64>, Failure> {
        Ok(match &self.theta {
            Some(text) => parse_ratio(text)?,
            None => GenericityParams::default().theta,
        })
    }

    fn budget(&self) -> u128 {
        self.budget.unwrap_or(DEFAULT_ORBIT_BUDGET)
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}

fn reject_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(input_error("csv output is available for survey and count"));
    }
    Ok(())
}

fn read_tuple(path: &Path) -> Result<RelatorTuple, Failure> {
    Ok(RelatorTuple::parse(&read_file(path)?)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Cmd::Word {
            text,
            normalize,
            invert,
            eta,
            canonical,
        } => {
            reject_csv(cli.format)?;
            let mut word = if *normalize {
                Word::normalize(text)?
            } else {
                Word::parse_reduced(text)?
            };
            if *invert {
                word = word.invert();
            }
            if *eta {
                word = word.eta();
            }
            if *canonical {
                word = cyclic_reduce(&word).canonical().into_word();
            }
            let rendered = word.to_string();
            Ok(match cli.format {
                Format::Text => format!("{rendered}\n"),
                _ => pretty(&serde_json::json!({
                    "word": rendered,
                    "length": word.len(),
                })),
            })
        }

        Cmd::GenCheck { file } => {
            let params = cli.params()?;
            let tuple = read_tuple(file)?;
            let report = check_q_with_budget(&tuple, &params, cli.budget())?;
            Ok(match cli.format {
                Format::Text => {
                    let mut out = format!(
                        "lambda={} theta={} min_length={} experiment={}\n",
                        params.lambda, params.theta, params.min_length, params.experiment
                    );
                    for condition in Condition::ALL {
                        let line = match report.verdict(condition) {
                            Verdict::Pass => "pass".to_string(),
                            Verdict::Fail(witness) => format!("fail ({witness})"),
                            Verdict::Undecided { needed, budget } => {
                                format!("undecided (needed {needed}, budget {budget})")
                            }
                        };
                        writeln!(out, "{}: {line}", condition.as_str()).unwrap();
                    }
                    writeln!(
                        out,
                        "overall_q={} overall_u={} overall_uprime={}",
                        report.overall_q, report.overall_u, report.overall_uprime
                    )
                    .unwrap();
                    out
                }
                _ => pretty(&report),
            })
        }

        Cmd::Iso { left, right } => {
            let params = cli.params()?;
            let verdict = generic_iso(&read_tuple(left)?, &read_tuple(right)?, &params)?;
            Ok(match cli.format {
                Format::Text => format!("{verdict}\n"),
                _ => pretty(&verdict),
            })
        }

        Cmd::Sample {
            length,
            relators,
            count,
            ball,
        } => {
            reject_csv(cli.format)?;
            if *relators == 0 {
                return Err(Failure::from(Error::EmptyTuple));
            }
            let mut tuples: Vec<Vec<String>> = Vec::new();
            for index in 0..*count {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed ^ index);
                let tuple = if *ball {
                    let mut words = Vec::with_capacity(*relators);
                    while words.len() < *relators {
                        let word = sample_cyclic_ball_with(*length, &mut rng)?;
                        if !word.is_empty() {
                            words.push(word);
                        }
                    }
                    RelatorTuple::new(words)?
                } else {
                    RelatorTuple::sample_equal_length(*length, *relators, &mut rng)?
                };
                tuples.push(tuple.relators().iter().map(|w| w.to_string()).collect());
            }
            Ok(match cli.format {
                Format::Text => {
                    let blocks: Vec<String> =
                        tuples.iter().map(|tuple| tuple.join("\n")).collect();
                    format!("{}\n", blocks.join("\n\n"))
                }
                _ => pretty(&serde_json::json!({
                    "seed": cli.seed,
                    "length": length,
                    "relators": relators,
                    "ball": ball,
                    "tuples": tuples,
                })),
            })
        }

        Cmd::Survey {
            length,
            relators,
            equal_length,
        } => {
            let params = cli.params()?;
            let trials = cli.trials.unwrap_or(100);
            let table = survey(
                *length,
                *relators,
                trials,
                cli.seed,
                &params,
                *equal_length,
                cli.budget(),
            )?;
            Ok(match cli.format {
                Format::Csv => {
                    let mut out = String::from("condition,n,m,trials,pass_rate,ci_low,ci_high\n");
                    for row in &table.rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            row.condition,
                            row.n,
                            row.m,
                            row.trials,
                            row.pass_rate,
                            row.ci_low,
                            row.ci_high
                        )
                        .unwrap();
                    }
                    out
                }
                Format::Text => {
                    let mut out = String::new();
                    for row in &table.rows {
                        writeln!(
                            out,
                            "{:<20} n={} m={} trials={} passes={} undecided={} rate={:.4} \
                             ci=[{:.4}, {:.4}]",
                            row.condition,
                            row.n,
                            row.m,
                            row.trials,
                            row.passes,
                            row.undecided,
                            row.pass_rate,
                            row.ci_low,
                            row.ci_high
                        )
                        .unwrap();
                    }
                    out
                }
                Format::Json => pretty(&table),
            })
        }

        Cmd::Count {
            length,
            relators,
            filter,
        } => {
            let budget = cli.budget();
            let census = match filter {
                CountFilter::All => orbit_census(*length, *relators, |_| true, budget)?,
                CountFilter::Free => {
                    // The per-tuple class walk runs under the library default;
                    // refuse up front instead of failing mid-enumeration.
                    let order =
                        symmetry_group_order(*length, *relators).unwrap_or(u128::MAX);
                    if order > DEFAULT_ORBIT_BUDGET {
                        return Err(Failure::from(Error::BudgetExceeded {
                            needed: order,
                            budget: DEFAULT_ORBIT_BUDGET,
                        }));
                    }
                    orbit_census(
                        *length,
                        *relators,
                        |t| has_free_orbit(t).expect("group order fits the budget"),
                        budget,
                    )?
                }
            };
            let formula_value = if *length > 0 && length % 2 == 0 {
                Some(asymptotic_im(*length, *relators)?.to_string())
            } else {
                None
            };
            let filter_name = match filter {
                CountFilter::All => "all",
                CountFilter::Free => "free",
            };
            Ok(match cli.format {
                Format::Csv => {
                    let mut out = String::from("n,m,filter,tuples,orbits,formula_value\n");
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        length,
                        relators,
                        filter_name,
                        census.tuples,
                        census.orbits,
                        formula_value.as_deref().unwrap_or("")
                    )
                    .unwrap();
                    out
                }
                Format::Text => format!(
                    "n={} m={} filter={} tuples={} orbits={} formula_value={}\n",
                    length,
                    relators,
                    filter_name,
                    census.tuples,
                    census.orbits,
                    formula_value.as_deref().unwrap_or("-")
                ),
                Format::Json => pretty(&serde_json::json!({
                    "n": length,
                    "m": relators,
                    "filter": filter_name,
                    "tuples": census.tuples,
                    "orbits": census.orbits,
                    "formula_value": formula_value,
                })),
            })
        }

        Cmd::Triviality { file, word, linear } => {
            reject_csv(cli.format)?;
            let set = symmetrized_closure(&read_tuple(file)?);
            let word = Word::normalize(word)?;
            let result = if *linear {
                dehn_normalize(&word, &set)?
            } else {
                dehn_normalize_cyclic(&word, &set)?
            };
            let mode = if *linear { "linear" } else { "cyclic" };
            Ok(match cli.format {
                Format::Text => {
                    if result.trivial {
                        format!("{mode}: trivial (steps={})\n", result.steps)
                    } else {
                        format!(
                            "{mode}: nontrivial, residue {} (steps={})\n",
                            result.normal_form, result.steps
                        )
                    }
                }
                _ => pretty(&serde_json::json!({
                    "mode": mode,
                    "trivial": result.trivial,
                    "normal_form": result.normal_form.to_string(),
                    "steps": result.steps,
                })),
            })
        }

        Cmd::Readability { word, bar } => {
            reject_csv(cli.format)?;
            match bar {
                Some(bar_text) => {
                    let graph = build_barbell(&Word::parse_reduced(bar_text)?)?;
                    let answer = graph.readable(&Word::parse_reduced(word)?);
                    Ok(match cli.format {
                        Format::Text => {
                            if answer.readable {
                                let path = answer
                                    .path
                                    .as_ref()
                                    .map(|p| {
                                        p.iter()
                                            .map(|v| v.to_string())
                                            .collect::<Vec<_>>()
                                            .join(" ")
                                    })
                                    .unwrap_or_default();
                                format!("readable in the {bar_text} graph: vertices {path}\n")
                            } else {
                                format!("not readable in the {bar_text} graph\n")
                            }
                        }
                        _ => pretty(&serde_json::json!({
                            "mode": "bar",
                            "bar": bar_text,
                            "readable": answer.readable,
                            "start_vertex": answer.start_vertex,
                            "path": answer.path,
                        })),
                    })
                }
                None => {
                    let theta = cli.theta_threshold()?;
                    let cyclic = cyclic_reduce(&Word::normalize(word)?);
                    let witness = theta_readable(&cyclic, theta)?;
                    Ok(match cli.format {
                        Format::Text => match &witness {
                            Some(w) => format!(
                                "readable at theta={theta}: bar {} reads window {}\n",
                                w.bar, w.window
                            ),
                            None => format!("not readable at theta={theta}\n"),
                        },
                        _ => pretty(&serde_json::json!({
                            "mode": "theta",
                            "theta": theta.to_string(),
                            "readable": witness.is_some(),
                            "bar": witness.as_ref().map(|w| w.bar.to_string()),
                            "window": witness.as_ref().map(|w| w.window.to_string()),
                        })),
                    })
                }
            }
        }

        Cmd::Encode { file } => {
            reject_csv(cli.format)?;
            let presentation = GenericPresentation::parse(&read_file(file)?)?;
            let coded = encode_presentation(&presentation);
            Ok(match cli.format {
                Format::Text => format!("{} {}\n", coded.hex(), coded.bit_len()),
                _ => pretty(&coded),
            })
        }
    }
}
