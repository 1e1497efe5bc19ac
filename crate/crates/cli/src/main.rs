//! `discres`: compute resultants, discriminants and projection operators, and run the verification checks.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use discres_core::genform::{fresh_name, gradient_resultant};
use discres_core::poly::parse_coefficient;
use discres_core::{
    discriminant, form_discriminant, generic_form, primitive_part, resultant_of_forms, sqrfree_part, taylor_delta,
    CheckReport, Poly, ProjCache, ProjOrder, Projector, ResultantMode, SpecializationPlan, Verdict, Verifier,
};
use serde_json::{json, Value};

use input::Inputs;

#[derive(Parser, Debug)]
#[command(
    name = "discres",
    version,
    about = "Exact resultants, discriminants and iterated projections"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Directory of the projection cache
    #[arg(long, env = "DISCRES_CACHE", default_value = ".discres-cache", global = true)]
    cache_dir: PathBuf,
    /// Run without the on-disk cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute every cache hit and fail on a mismatch
    #[arg(long, global = true)]
    verify_cache: bool,
    /// Wall-clock limit in seconds
    #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    timeout: u64,
    /// Seed for every randomized step
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Include wall times in JSON reports (breaks byte-identical reruns)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the generic form of degree d in n variables
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        /// Rename parameters to single letters
        #[arg(long)]
        letters: bool,
    },
    /// Squarefree part
    Sqrfree(Inputs),
    /// Sylvester resultant of two polynomials in a variable
    Res {
        #[arg(long)]
        var: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Discriminant in a variable, or of a form in the given variables
    Disc {
        /// Univariate discriminant in this variable
        #[arg(long, conflicts_with = "x")]
        var: Option<String>,
        /// Form variables, comma separated (defaults to the builtin's variables)
        #[arg(long)]
        x: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Iterated squarefree resultant along an order
    Bproj {
        #[arg(long)]
        order: String,
        /// Print every intermediate step
        #[arg(long)]
        steps: bool,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Gcd of the iterated resultants over all branch orders
    Hp {
        #[arg(long)]
        order: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Taylor remainder quotient of order i in a variable
    Delta {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        var: String,
        /// Name of the new variable (default: a fresh name derived from --var)
        #[arg(long = "new")]
        new_var: Option<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Multipolynomial resultant of n forms in n variables
    Macaulay {
        /// Form variables, comma separated (defaults to the builtin's variables)
        #[arg(long)]
        x: Option<String>,
        /// Use the partial derivatives of the single input as the system
        #[arg(long)]
        gradient: bool,
        /// Bind a parameter before taking determinants (repeatable)
        #[arg(long = "at", value_name = "NAME=VALUE")]
        at: Vec<String>,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Verification checks
    Check {
        #[command(subcommand)]
        which: CheckCmd,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Projection cache maintenance
    Cache {
        #[command(subcommand)]
        which: CacheCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// hp(f, order) against the multivariate discriminant of a generic form
    Main {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        /// Allow odd degrees (the statement is then only conjectured)
        #[arg(long)]
        allow_odd: bool,
    },
    /// Ternary forms: hp(f, [x,y,z]) against the discriminant
    Main2 {
        #[arg(long)]
        d: u32,
    },
    /// Ratio constancy of the doubly iterated discriminant factorization
    Buse {
        #[arg(long)]
        d: u32,
    },
    /// Vanishing pattern of the factors on the witness polynomial
    Witness {
        #[arg(long)]
        d: u32,
    },
    /// The counterexample x*y + y^2 + x*z + y*z + k*z^2
    Remark,
    /// Degree of the discriminant of a generic form
    Degree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    /// Every check at its standard size
    All,
}

#[derive(clap::Args, Debug)]
struct PlanArgs {
    /// Random specializations per check
    #[arg(long, default_value_t = 5, global = true)]
    trials: usize,
    /// Parameters kept symbolic, comma separated
    #[arg(long, global = true)]
    keep: Option<String>,
    /// Values are drawn from [-range, range] without 0
    #[arg(long, global = true)]
    range: Option<i64>,
    /// Corrupt one trial on purpose (for testing the harness)
    #[arg(long, hide = true, global = true)]
    inject_fault: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum CacheCmd {
    /// Remove every cached entry
    Clear,
    /// Entry counts per operation and total size
    Stats,
}

/// One unit of output.
enum Item {
    Poly(String, Poly),
    Report(CheckReport),
    Json(Value, String),
}

type Sink = mpsc::Sender<Item>;

fn projector(cli: &Cli) -> Result<Projector> {
    if cli.no_cache {
        return Ok(Projector::new());
    }
    let cache = ProjCache::on_disk(&cli.cache_dir)
        .with_context(|| format!("opening cache {}", cli.cache_dir.display()))?
        .with_verification(cli.verify_cache);
    Ok(Projector::with_cache(cache))
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn form_vars(x: &Option<String>, builtin: Option<Vec<String>>) -> Result<Vec<String>> {
    match (x, builtin) {
        (Some(x), _) => Ok(split_list(x)),
        (None, Some(b)) => Ok(b),
        (None, None) => bail!("form variables unknown: pass --x"),
    }
}

fn bindings(at: &[String]) -> Result<ResultantMode> {
    if at.is_empty() {
        return Ok(ResultantMode::Exact);
    }
    let values = at
        .iter()
        .map(|a| {
            let (name, value) = a
                .split_once('=')
                .ok_or_else(|| anyhow!("expected NAME=VALUE, got `{a}`"))?;
            let c = parse_coefficient(value.trim()).ok_or_else(|| anyhow!("bad rational `{value}`"))?;
            Ok((name.trim().to_string(), c))
        })
        .collect::<Result<_>>()?;
    Ok(ResultantMode::Specialized(values))
}

fn run(cli: &Cli, out: &Sink) -> Result<()> {
    let send = |item: Item| {
        let _ = out.send(item);
    };
    match &cli.command {
        Command::Gen { n, d, letters } => {
            let form = generic_form(*n, *d)?;
            let form = if *letters { form.with_letters()? } else { form };
            send(Item::Poly("form".into(), form.body().clone()));
        }
        Command::Sqrfree(inputs) => {
            let (p, _) = inputs.single()?;
            send(Item::Poly("sqrfree".into(), sqrfree_part(&p).into_inner()));
        }
        Command::Res { var, inputs } => {
            let loaded = inputs.load()?;
            let [p, q] = <[Poly; 2]>::try_from(loaded.polys)
                .map_err(|v| anyhow!("res needs exactly two polynomials, got {}", v.len()))?;
            send(Item::Poly("resultant".into(), discres_core::resultant(&p, &q, var)?));
        }
        Command::Disc { var, x, inputs } => {
            let (p, x_vars) = inputs.single()?;
            let d = match var {
                Some(v) => discriminant(&p, v)?,
                None => {
                    let xs = form_vars(x, x_vars)?;
                    let refs: Vec<&str> = xs.iter().map(String::as_str).collect();
                    form_discriminant(&p, &refs, &ResultantMode::Exact)?.into_inner()
                }
            };
            send(Item::Poly("discriminant".into(), d));
        }
        Command::Bproj { order, steps, inputs } => {
            let (p, _) = inputs.single()?;
            let order = ProjOrder::parse(order)?;
            order.check_against(p.vars())?;
            let proj = projector(cli)?;
            if !*steps {
                send(Item::Poly("bproj".into(), proj.bproj(&p, &order)?));
                return Ok(());
            }
            let mut cur = p;
            for (k, v) in order.vars().iter().enumerate() {
                if k > 0 && !cur.is_zero() {
                    cur = primitive_part(&cur)?.into_inner();
                }
                cur = proj.bproj_step(&cur, v)?;
                send(Item::Poly(format!("step {v}"), cur.clone()));
            }
        }
        Command::Hp { order, inputs } => {
            let (p, _) = inputs.single()?;
            let order = ProjOrder::parse(order)?;
            order.check_against(p.vars())?;
            send(Item::Poly("hp".into(), projector(cli)?.hproj(&p, &order)?.into_inner()));
        }
        Command::Delta {
            i,
            var,
            new_var,
            inputs,
        } => {
            let (p, _) = inputs.single()?;
            let new_var = new_var.clone().unwrap_or_else(|| fresh_name(p.vars(), var));
            send(Item::Poly("delta".into(), taylor_delta(&p, *i, var, &new_var)?));
        }
        Command::Macaulay {
            x,
            gradient,
            at,
            inputs,
        } => {
            let mode = bindings(at)?;
            let loaded = inputs.load()?;
            let xs = form_vars(x, loaded.x_vars)?;
            let refs: Vec<&str> = xs.iter().map(String::as_str).collect();
            let r = if *gradient {
                let [f] = <[Poly; 1]>::try_from(loaded.polys)
                    .map_err(|v| anyhow!("--gradient needs exactly one polynomial, got {}", v.len()))?;
                gradient_resultant(&f, &refs, &mode)?
            } else {
                resultant_of_forms(&loaded.polys, &refs, &mode)?
            };
            send(Item::Poly("resultant".into(), r));
        }
        Command::Check { which, plan } => {
            let mut spec = SpecializationPlan::new(cli.seed, plan.trials);
            if let Some(k) = &plan.keep {
                spec = spec.keep(split_list(k));
            }
            if let Some(r) = plan.range {
                spec = spec.with_range(r);
            }
            let allow_odd = matches!(which, CheckCmd::Main { allow_odd: true, .. });
            let verifier = Verifier::with_projector(projector(cli)?)
                .conjecture_mode(allow_odd)
                .inject_fault(plan.inject_fault);
            let report = match which {
                CheckCmd::Main { n, d, .. } => verifier.check_main(*n, *d, &spec)?,
                CheckCmd::Main2 { d } => verifier.check_main2(*d, &spec)?,
                CheckCmd::Buse { d } => verifier.check_buse(*d, &spec)?,
                CheckCmd::Witness { d } => verifier.check_witness(*d, &spec)?,
                CheckCmd::Remark => verifier.check_remark()?,
                CheckCmd::Degree { n, d } => verifier.check_degree(*n, *d, &spec)?,
                CheckCmd::All => {
                    verifier.check_all_each(&spec, |r| send(Item::Report(r)))?;
                    return Ok(());
                }
            };
            send(Item::Report(report));
        }
        Command::Cache { which } => match which {
            CacheCmd::Clear => {
                ProjCache::clear_dir(&cli.cache_dir)?;
                send(Item::Json(
                    json!({ "cleared": cli.cache_dir.display().to_string() }),
                    format!("cleared {}", cli.cache_dir.display()),
                ));
            }
            CacheCmd::Stats => {
                let stats = ProjCache::disk_stats(&cli.cache_dir)?;
                let entries: serde_json::Map<String, Value> =
                    stats.entries.iter().map(|(tag, n)| (tag.clone(), json!(n))).collect();
                let mut text: Vec<String> = stats.entries.iter().map(|(tag, n)| format!("{tag}: {n}")).collect();
                text.push(format!("bytes: {}", stats.bytes));
                text.push(format!("index lines: {}", stats.index_lines));
                send(Item::Json(
                    json!({ "entries": entries, "bytes": stats.bytes, "index_lines": stats.index_lines }),
                    text.join("\n"),
                ));
            }
        },
    }
    Ok(())
}

fn report_json(r: &CheckReport, timing: bool) -> Value {
    let mut v = r.to_json();
    if !timing {
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_ms");
        }
    }
    v
}

fn report_text(r: &CheckReport) -> String {
    let mut lines = vec![r.summary()];
    lines.extend(r.notes.iter().map(|n| format!("  note: {n}")));
    for t in r.trials.iter().filter(|t| !t.ok || t.degenerate) {
        let state = if t.degenerate { "degenerate" } else { "FAILED" };
        let mut line = format!("  trial {} {state}", t.index);
        if let Some(note) = &t.note {
            line.push_str(&format!(": {note}"));
        }
        if !t.bindings.is_empty() {
            let b: Vec<String> = t.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
            line.push_str(&format!(" [{}]", b.join(", ")));
        }
        lines.push(line);
    }
    lines.join("\n")
}

fn item_json(item: &Item, timing: bool) -> Value {
    match item {
        Item::Poly(label, p) => json!({ "label": label, "poly": p.to_json() }),
        Item::Report(r) => report_json(r, timing),
        Item::Json(v, _) => v.clone(),
    }
}

fn render(cli: &Cli, items: &[Item], partial: Option<&str>) -> String {
    match cli.format {
        Format::Text => {
            let many = items.iter().filter(|i| matches!(i, Item::Poly(..))).count() > 1;
            let mut text = String::new();
            for item in items {
                let line = match item {
                    Item::Poly(label, p) if many => format!("{label}: {p}"),
                    Item::Poly(_, p) => p.to_string(),
                    Item::Report(r) => report_text(r),
                    Item::Json(_, t) => t.clone(),
                };
                text.push_str(&line);
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let values: Vec<Value> = items.iter().map(|i| item_json(i, cli.timing)).collect();
            let doc = match (partial, values.len()) {
                (Some(reason), _) => json!({ "status": reason, "completed": values }),
                (None, 1)
                    if !matches!(
                        cli.command,
                        Command::Check {
                            which: CheckCmd::All,
                            ..
                        }
                    ) =>
                {
                    values.into_iter().next().unwrap()
                }
                (None, _) => Value::Array(values),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    }
}

fn emit(cli: &Cli, items: &[Item], partial: Option<&str>) {
    // a closed pipe is not an error worth reporting
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(render(cli, items, partial).as_bytes());
    let _ = out.flush();
}

fn exit_for(items: &[Item]) -> ExitCode {
    let failed = items
        .iter()
        .any(|i| matches!(i, Item::Report(r) if r.verdict != Verdict::Pass));
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let deadline = Instant::now() + Duration::from_secs(cli.timeout);
    let (tx, rx) = mpsc::channel();
    let cli = std::sync::Arc::new(cli);
    let worker = {
        let cli = cli.clone();
        std::thread::spawn(move || run(&cli, &tx))
    };
    let mut items = Vec::new();
    loop {
        let left = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok(item) => items.push(item),
            Err(mpsc::RecvTimeoutError::Disconnected) => break,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                if cli.format == Format::Text {
                    emit(&cli, &items, None);
                } else {
                    emit(&cli, &items, Some("timeout"));
                }
                eprintln!("error: timed out after {} s; output above is partial", cli.timeout);
                return ExitCode::from(2);
            }
        }
    }
    match worker.join() {
        Ok(Ok(())) => {
            emit(&cli, &items, None);
            exit_for(&items)
        }
        Ok(Err(e)) => {
            if !items.is_empty() {
                emit(&cli, &items, Some("error"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(2)
        }
    }
}
