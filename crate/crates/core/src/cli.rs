//! The `multidil` command line.
//!
//! Exit codes: 0 success, 1 bad arguments or unreadable files, 2 invalid
//! poset, 3 instance too small / violated precondition / failed
//! verification, 4 orders on different ground sets.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::driver::{self, mk_bounds, Mode};
use crate::error::Error;
use crate::format::{
    extraction_file, homogeneous_file, json_integer, parse_poset, poset_to_json, ResultFile,
};
use crate::genlab::{self, GenSpec, Model};
use crate::multiorder::{
    build_schedule, theorem_multiple, verify_homogeneous, LevelTarget, OrderCheck, Relation,
    ScheduleMode,
};
use crate::poset::{Claim, Poset, SubsetFamily};

#[derive(Parser, Debug)]
#[command(
    name = "multidil",
    version,
    about = "Chains of sets and incomparable families in partial orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract k sets forming a descending chain or a totally incomparable family.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ProfileArg::Thm1)]
        profile: ProfileArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Relaxed)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract k sets homogeneous for every input order.
    Multi {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Practical)]
        schedule: ScheduleArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a poset file.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: Option<usize>,
        /// Layer widths for `layered`, comma separated.
        #[arg(long, value_delimiter = ',')]
        widths: Vec<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        /// Base poset file for `stacked`.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Number of copies for `stacked`.
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a result file against its poset file(s).
    Verify {
        /// One file, or one per order for a multi-order result.
        #[arg(long, num_args = 1.., required = true)]
        poset: Vec<PathBuf>,
        #[arg(long)]
        result: PathBuf,
    },
    /// Print the lower and upper bounds on m_k(n).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Hasse diagram in DOT syntax.
    Dot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    Thm1,
    Thm2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScheduleArg {
    Paper,
    Practical,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Chain,
    Antichain,
    RandomDag,
    Layered,
    Grid,
    Stacked,
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Cycle { .. } | Error::Range { .. } | Error::Parse(_) => 2,
            Error::InstanceTooSmall { .. } | Error::Precondition(_) | Error::Overlap { .. } => 3,
            Error::GroundMismatch { .. } => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Find {
            input,
            k,
            profile,
            mode,
            out,
        } => find(&input, k, profile, mode, out.as_deref()),
        Command::Multi {
            inputs,
            k,
            schedule,
            out,
        } => multi(&inputs, k, schedule, out.as_deref()),
        Command::Gen {
            model,
            n,
            widths,
            p,
            d1,
            d2,
            base,
            copies,
            seed,
            out,
        } => {
            let poset = match model {
                ModelArg::Stacked => {
                    let base = base.ok_or_else(|| Failure::usage("stacked needs --base"))?;
                    let copies = copies.ok_or_else(|| Failure::usage("stacked needs --copies"))?;
                    genlab::stack(&load_poset(&base)?, copies)
                }
                other => {
                    genlab::generate(&GenSpec::new(model_of(other, n, widths, p, d1, d2)?, seed))
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
            };
            emit(out.as_deref(), &poset_to_json(&poset))
        }
        Command::Verify { poset, result } => verify(&poset, &result),
        Command::Bounds { n, k } => {
            let report = mk_bounds(n, k)?;
            let mut text = format!(
                "n      {}\nk      {}\nlower  {:e}\nupper  {:e}\n",
                report.n, report.k, report.lower, report.upper
            );
            if !report.lower_valid {
                text.push_str("note   lower bound outside stated validity (n < (100k)^5)\n");
            }
            emit(None, &text)
        }
        Command::Dot { input, out } => emit(out.as_deref(), &load_poset(&input)?.to_dot()),
    }
}

fn model_of(
    model: ModelArg,
    n: Option<usize>,
    widths: Vec<usize>,
    p: Option<f64>,
    d1: Option<usize>,
    d2: Option<usize>,
) -> std::result::Result<Model, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::usage(format!("--{flag} is required")))
    };
    let prob = || p.ok_or_else(|| Failure::usage("--p is required"));
    Ok(match model {
        ModelArg::Chain => Model::Chain { n: need(n, "n")? },
        ModelArg::Antichain => Model::Antichain { n: need(n, "n")? },
        ModelArg::RandomDag => Model::RandomDag {
            n: need(n, "n")?,
            p: prob()?,
        },
        ModelArg::Layered => {
            if widths.is_empty() {
                return Err(Failure::usage("--widths is required"));
            }
            Model::Layered { widths, p: prob()? }
        }
        ModelArg::Grid => Model::Grid {
            d1: need(d1, "d1")?,
            d2: need(d2, "d2")?,
        },
        ModelArg::Stacked => unreachable!("stacked reads its base from a file"),
    })
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_poset(path: &Path) -> std::result::Result<Poset, Failure> {
    parse_poset(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn find(input: &Path, k: usize, profile: ProfileArg, mode: ModeArg, out: Option<&Path>) -> Outcome {
    let poset = load_poset(input)?;
    let mode = match mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Relaxed => Mode::Relaxed,
    };
    let result = match profile {
        ProfileArg::Thm1 => driver::theorem1(&poset, k, mode)?,
        ProfileArg::Thm2 => driver::theorem2(&poset, k, mode)?,
    };
    let file = extraction_file(&result);
    eprintln!(
        "branch {} sizes {:?} guarantee {}",
        file.kind,
        file.sets.iter().map(Vec::len).collect::<Vec<_>>(),
        file.guarantee.map_or("none".to_string(), |g| g.to_string())
    );
    emit(out, &file.to_json())
}

fn multi(inputs: &[PathBuf], k: usize, schedule: ScheduleArg, out: Option<&Path>) -> Outcome {
    let orders = inputs
        .iter()
        .map(|p| load_poset(p))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let n = orders[0].len();
    let mode = match schedule {
        ScheduleArg::Paper => ScheduleMode::Paper,
        ScheduleArg::Practical => ScheduleMode::Practical,
    };
    if let Some((index, order)) = orders.iter().enumerate().find(|(_, o)| o.len() != n) {
        return Err(Error::GroundMismatch {
            index,
            expected: n,
            found: order.len(),
        }
        .into());
    }
    let schedule = build_schedule(orders.len(), k, n, mode)?;
    let result = theorem_multiple(&orders, k, &schedule)?;
    let targets: Vec<Value> = schedule
        .targets
        .iter()
        .map(|t| match t {
            LevelTarget::Count(c) => json_integer(&(*c).into()),
            LevelTarget::Formula(m) => Value::String(m.to_string()),
        })
        .collect();
    let file = homogeneous_file(&result, targets);
    eprintln!(
        "relations {:?} sizes {:?}",
        result
            .relations
            .iter()
            .map(|r| r.name())
            .collect::<Vec<_>>(),
        file.sets.iter().map(Vec::len).collect::<Vec<_>>()
    );
    emit(out, &file.to_json())
}

fn relation_named(name: &str) -> Option<Relation> {
    match name {
        "ascending" => Some(Relation::Ascending),
        "descending" => Some(Relation::Descending),
        "incomparable" => Some(Relation::Incomparable),
        _ => None,
    }
}

fn verify(posets: &[PathBuf], result: &Path) -> Outcome {
    let orders = posets
        .iter()
        .map(|p| load_poset(p))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let file = ResultFile::from_json(&read(result)?).map_err(|e| Failure::usage(e.to_string()))?;
    let n = orders[0].len();
    let family = SubsetFamily::new(n, file.sets.clone());
    for (i, set) in family.sets.iter().enumerate() {
        if let Some(&bad) = set.iter().find(|&&x| x >= n) {
            return Err(Failure::invalid(format!(
                "set {i} holds id {bad} outside [0, {n})"
            )));
        }
    }
    family.check_disjoint()?;
    if family.min_size() != file.achieved {
        return Err(Failure::invalid(format!(
            "achieved = {} but the smallest set has {}",
            file.achieved,
            family.min_size()
        )));
    }

    let claims: Vec<Relation> = match &file.orders {
        Some(entries) => {
            if entries.len() != orders.len() {
                return Err(Failure::usage(format!(
                    "result covers {} orders, {} poset files given",
                    entries.len(),
                    orders.len()
                )));
            }
            entries
                .iter()
                .map(|e| {
                    relation_named(&e.relation)
                        .ok_or_else(|| Failure::usage(format!("unknown relation {}", e.relation)))
                })
                .collect::<std::result::Result<_, _>>()?
        }
        None => {
            if orders.len() != 1 {
                return Err(Failure::usage(
                    "single-order result needs exactly one poset",
                ));
            }
            let relation = match (file.kind.as_str(), file.direction.as_deref()) {
                ("set_chain", Some("ascending")) => Relation::Ascending,
                ("set_chain", Some("descending")) => Relation::Descending,
                ("incomparable", None) => Relation::Incomparable,
                (kind, dir) => {
                    return Err(Failure::usage(format!(
                        "unknown kind {kind} / direction {dir:?}"
                    )))
                }
            };
            vec![relation]
        }
    };

    for (i, (order, &claim)) in orders.iter().zip(&claims).enumerate() {
        if order.len() != n {
            return Err(Error::GroundMismatch {
                index: i,
                expected: n,
                found: order.len(),
            }
            .into());
        }
        let check = order.verify_structure(
            &family,
            match claim {
                Relation::Ascending => Claim::AscendingChain,
                Relation::Descending => Claim::DescendingChain,
                Relation::Incomparable => Claim::TotallyIncomparable,
            },
        )?;
        if !check.holds {
            let (a, b) = check.counterexample.unwrap_or_default();
            return Err(Failure::invalid(format!(
                "order {i} is not {}: elements {a} and {b}",
                claim.name()
            )));
        }
    }
    if file.orders.is_some() {
        // The declared relations must also be the ones the checker finds.
        for check in verify_homogeneous(&orders, &family)? {
            if let OrderCheck::Violated { order, a, b } = check {
                return Err(Failure::invalid(format!(
                    "order {order} not homogeneous: elements {a} and {b}"
                )));
            }
        }
    }
    eprintln!(
        "valid: {} sets, smallest {}",
        family.len(),
        family.min_size()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(run(["multidil", "find", "--k", "2"]), 1);
        assert_eq!(run(["multidil", "bogus"]), 1);
    }

    #[test]
    fn bounds_rejects_small_n() {
        assert_eq!(run(["multidil", "bounds", "--n", "2", "--k", "2"]), 1);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(
            run(["multidil", "dot", "--input", "/nonexistent/poset.txt"]),
            1
        );
    }

    #[test]
    fn failure_codes() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::Cycle { u: 0, v: 1 }), 2);
        assert_eq!(code(Error::Precondition(vec![])), 3);
        assert_eq!(
            code(Error::GroundMismatch {
                index: 1,
                expected: 2,
                found: 3
            }),
            4
        );
    }
}
