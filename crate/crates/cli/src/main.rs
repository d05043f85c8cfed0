//! `asm-census`: counts, censuses and ratio checks for symmetric alternating
//! sign matrices.

mod cache;

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use asm_census_core::report::{
    census_to_csv, census_to_json, census_to_text, ratio_line, RatioDocument,
};
use asm_census_core::{
    applicable_orders, asm_total_formula, run_census_with, selfcheck, verify_relation, AsmError,
    BigCount, CensusOptions, CensusRecord, Conjecture, EnumConfig, Enumerator, RatioReport,
    SymmetryClass,
};
use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::Cache;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "asm-census", version)]
#[command(about = "Exact censuses of symmetric odd-order alternating sign matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Largest order any enumeration may run at
    #[arg(long, global = true, env = "ASM_CENSUS_CAP")]
    cap: Option<usize>,

    /// Census cache file
    #[arg(long, global = true, default_value = ".asm-census-cache.json")]
    cache: PathBuf,

    /// Neither read nor write the cache
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total number of ASMs of order n
    Count {
        #[arg(long)]
        n: usize,
        /// Run only one method; by default both run when feasible
        #[arg(long, value_enum)]
        method: Option<CountMethod>,
    },
    /// Counts per central structure for one symmetry class
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: SymmetryClass,
    },
    /// Check ratio relations at every applicable order up to max-n
    Verify {
        #[arg(long, default_value = "all")]
        conjecture: ConjectureArg,
        #[arg(long)]
        max_n: usize,
    },
    /// Print the first matrices of a class as text grids
    List {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "plain")]
        class: SymmetryClass,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Cross-check the engine against independent routes
    Selfcheck {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Enumerate,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ConjectureArg {
    All,
    One(Conjecture),
}

impl std::str::FromStr for ConjectureArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(ConjectureArg::All)
        } else {
            s.parse().map(ConjectureArg::One)
        }
    }
}

/// Process exit code for a successful run of a command.
type Outcome = anyhow::Result<u8>;

struct Ctx {
    format: Format,
    workers: usize,
    config: EnumConfig,
    cache: Cache,
    out: String,
}

impl Ctx {
    fn census(&mut self, n: usize, class: SymmetryClass) -> anyhow::Result<CensusRecord> {
        if let Some(hit) = self.cache.get(n, class) {
            return Ok(hit);
        }
        let opts = CensusOptions {
            workers: self.workers,
            config: self.config,
        };
        let record = run_census_with(n, class, &opts)?;
        if !record.is_consistent() {
            return Err(anyhow!(
                "census ({n}, {}) is internally inconsistent",
                class.tag()
            ));
        }
        self.cache.put(&record);
        Ok(record)
    }
}

fn cmd_count(ctx: &mut Ctx, n: usize, method: Option<CountMethod>) -> Outcome {
    if n == 0 {
        return Err(AsmError::ZeroOrder.into());
    }
    let enumerate = match method {
        Some(CountMethod::Formula) => None,
        Some(CountMethod::Enumerate) => Some(enumerate_total(ctx, n)?),
        None if n <= ctx.config.cap_all => Some(enumerate_total(ctx, n)?),
        None => None,
    };
    let formula = (method != Some(CountMethod::Enumerate)).then(|| asm_total_formula(n));
    let agree = match (&enumerate, &formula) {
        (Some(e), Some(f)) => Some(e == f),
        _ => None,
    };
    let total = enumerate
        .as_ref()
        .or(formula.as_ref())
        .expect("one method ran");
    let show = |c: &Option<BigCount>| c.as_ref().map(ToString::to_string);
    match ctx.format {
        Format::Text => {
            let mut line = format!("n={n} total={total}");
            if let Some(e) = &enumerate {
                write!(line, " enumerate={e}")?;
            }
            if let Some(f) = &formula {
                write!(line, " formula={f}")?;
            }
            match agree {
                Some(true) => line.push_str(" (methods agree)"),
                Some(false) => line.push_str(" (METHODS DISAGREE)"),
                None => {}
            }
            writeln!(ctx.out, "{line}")?;
        }
        Format::Json => {
            let doc = serde_json::json!({
                "n": n,
                "total": total.to_string(),
                "enumerate": show(&enumerate),
                "formula": show(&formula),
                "agree": agree,
            });
            writeln!(ctx.out, "{doc}")?;
        }
        Format::Csv => {
            ctx.out.push_str("n,method,count\n");
            if let Some(e) = &enumerate {
                writeln!(ctx.out, "{n},enumerate,{e}")?;
            }
            if let Some(f) = &formula {
                writeln!(ctx.out, "{n},formula,{f}")?;
            }
        }
    }
    Ok(if agree == Some(false) {
        EXIT_FAILURE
    } else {
        0
    })
}

fn enumerate_total(ctx: &Ctx, n: usize) -> anyhow::Result<BigCount> {
    let parts = Enumerator::new(ctx.config).partitioned(
        n,
        SymmetryClass::Plain,
        ctx.workers,
        || 0u64,
        |c, _| *c += 1,
    )?;
    Ok(parts.into_iter().map(BigCount::from).sum())
}

fn cmd_census(ctx: &mut Ctx, n: usize, class: SymmetryClass) -> Outcome {
    if class == SymmetryClass::Plain {
        return Err(AsmError::UnsupportedClass(class).into());
    }
    let record = ctx.census(n, class)?;
    let text = match ctx.format {
        Format::Text => census_to_text(&record),
        Format::Json => census_to_json(&record) + "\n",
        Format::Csv => census_to_csv(&record),
    };
    ctx.out.push_str(&text);
    Ok(0)
}

fn cmd_verify(ctx: &mut Ctx, which: ConjectureArg, max_n: usize) -> Outcome {
    if max_n > ctx.config.cap_symmetric {
        return Err(AsmError::CapExceeded {
            n: max_n,
            cap: ctx.config.cap_symmetric,
        }
        .into());
    }
    let checks = selfcheck(max_n.min(5))?;
    let engine_ok = checks.iter().all(|c| c.passed);
    for c in checks.iter().filter(|c| !c.passed) {
        eprintln!("self-check failed: {} ({})", c.name, c.detail);
    }

    let conjectures = match which {
        ConjectureArg::All => Conjecture::ALL.to_vec(),
        ConjectureArg::One(c) => vec![c],
    };
    let mut reports: Vec<RatioReport> = Vec::new();
    for c in conjectures {
        for n in applicable_orders(c, max_n) {
            let record = ctx.census(n, c.class())?;
            reports.push(verify_relation(&record)?);
        }
    }

    match ctx.format {
        Format::Text => {
            if reports.is_empty() {
                writeln!(ctx.out, "no applicable orders up to {max_n}")?;
            }
            for r in &reports {
                writeln!(ctx.out, "{}", ratio_line(r))?;
            }
        }
        Format::Json => {
            let docs: Vec<RatioDocument> = reports.iter().map(RatioDocument::from).collect();
            writeln!(ctx.out, "{}", serde_json::to_string(&docs)?)?;
        }
        Format::Csv => {
            ctx.out.push_str(
                "conjecture,n,parameter,numerator,denominator,expected,holds,empty_class\n",
            );
            for r in &reports {
                writeln!(
                    ctx.out,
                    "{},{},{},{},{},{}:{},{},{}",
                    r.conjecture,
                    r.n,
                    r.parameter,
                    r.numerator_count,
                    r.denominator_count,
                    r.expected.0,
                    r.expected.1,
                    r.holds,
                    r.empty_class
                )?;
            }
        }
    }

    let theorem_failed = reports
        .iter()
        .any(|r| r.conjecture.is_theorem() && !r.holds);
    let violated = reports.iter().any(|r| !r.holds);
    Ok(if theorem_failed || !engine_ok {
        EXIT_FAILURE
    } else if violated {
        eprintln!("conjecture violated - verify build");
        EXIT_VIOLATION
    } else {
        0
    })
}

fn cmd_list(ctx: &mut Ctx, n: usize, class: SymmetryClass, limit: usize) -> Outcome {
    let engine = Enumerator::new(ctx.config);
    let mut grids = Vec::new();
    let mut take = |a: &asm_census_core::AsmMatrix| {
        if grids.len() >= limit {
            return ControlFlow::Break(());
        }
        grids.push(a.to_grid());
        if grids.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };
    if limit > 0 {
        if class == SymmetryClass::Plain {
            engine.try_all(n, &mut take)?;
        } else {
            engine.try_symmetric(n, class, &mut take)?;
        }
    }
    ctx.out.push_str(&grids.join("\n"));
    Ok(0)
}

fn cmd_selfcheck(ctx: &mut Ctx, max_n: usize) -> Outcome {
    let checks = selfcheck(max_n)?;
    let passed = checks.iter().all(|c| c.passed);
    match ctx.format {
        Format::Json => {
            let docs: Vec<_> = checks
                .iter()
                .map(|c| serde_json::json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            writeln!(
                ctx.out,
                "{}",
                serde_json::json!({"passed": passed, "checks": docs})
            )?;
        }
        Format::Csv => {
            ctx.out.push_str("check,passed\n");
            for c in &checks {
                writeln!(ctx.out, "{},{}", c.name, c.passed)?;
            }
        }
        Format::Text => {
            for c in &checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                writeln!(ctx.out, "{mark}  {}: {}", c.name, c.detail)?;
            }
            writeln!(
                ctx.out,
                "selfcheck {}",
                if passed { "pass" } else { "FAIL" }
            )?;
        }
    }
    Ok(if passed { 0 } else { EXIT_FAILURE })
}

fn run(cli: Cli) -> Outcome {
    let config = cli.cap.map(EnumConfig::with_cap).unwrap_or_default();
    let workers = cli.workers.map_or_else(
        || std::thread::available_parallelism().map_or(1, |n| n.get()),
        |w| w as usize,
    );
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::open(&cli.cache)
    };
    let mut ctx = Ctx {
        format: cli.format,
        workers,
        config,
        cache,
        out: String::new(),
    };
    let code = match cli.command {
        Command::Count { n, method } => cmd_count(&mut ctx, n, method),
        Command::Census { n, class } => cmd_census(&mut ctx, n, class),
        Command::Verify { conjecture, max_n } => cmd_verify(&mut ctx, conjecture, max_n),
        Command::List { n, class, limit } => cmd_list(&mut ctx, n, class, limit),
        Command::Selfcheck { max_n } => cmd_selfcheck(&mut ctx, max_n),
    }?;
    ctx.cache.save()?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &ctx.out).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(ctx.out.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<AsmError>(),
                Some(
                    AsmError::EvenOrder(_)
                        | AsmError::ZeroOrder
                        | AsmError::CapExceeded { .. }
                        | AsmError::UnsupportedClass(_)
                )
            );
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_FAILURE })
        }
    }
}
