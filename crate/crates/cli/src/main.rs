mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use scroll_ulrich::beilinson::{beilinson_table, monad, resolution, resolution_lowc};
use scroll_ulrich::chow::ChowRing;
use scroll_ulrich::classify::{
    classify_pullbacks, default_g_family, search_line_bundles, search_omega_twists, IntRange,
    SearchBox,
};
use scroll_ulrich::suite::{run_suite, Status, SCHEMA};
use scroll_ulrich::ulrich::{is_pq_regular, is_ulrich, regularity, ulrich_dual};
use scroll_ulrich::{SheafExpr, Variety};

use config::{Config, Format};

#[derive(Parser)]
#[command(
    name = "scroll-ulrich",
    version,
    about = "Ulrich bundles on P(O(a0)+O(a1)) over the plane"
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format; overrides the configuration.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = one per core); overrides the configuration.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Variety as `a0,a1`.
    #[arg(long, value_parser = parse_variety)]
    variety: Option<Variety>,
    /// Sheaf expression, e.g. `2*O(1,0) + Om(0,3)`.
    #[arg(long)]
    sheaf: String,
}

#[derive(Args)]
struct BoxArgs {
    /// Largest a1 (and a0).
    #[arg(long, default_value_t = 4)]
    max_a1: i64,
    /// Range of the H-twist is [-a_abs, a_abs].
    #[arg(long, default_value_t = 4)]
    a_abs: i64,
    /// Range of the F-twist is [-b_abs, b_abs].
    #[arg(long, default_value_t = 12)]
    b_abs: i64,
}

#[derive(Subcommand)]
enum Command {
    /// h^i of a sheaf expression, with the Riemann-Roch cross-check.
    Cohomology(Target),
    /// Ulrich verdict.
    Ulrich(Target),
    /// Ulrich dual `E^* (2, c-3)`.
    Dual(Target),
    /// Least p in the window with (p,0)-regularity.
    Regularity {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Beilinson table against the six-member collection.
    Beilinson(Target),
    /// Four-term resolution of an Ulrich bundle (`--low-c` for the three-term one).
    Resolution {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        low_c: bool,
    },
    /// Monad with the bundle as middle homology.
    Monad(Target),
    /// Search Ulrich line bundles O(a,b).
    ClassifyLines(BoxArgs),
    /// Search Ulrich twists Om(a,b).
    ClassifyOmega(BoxArgs),
    /// Compare direct checks on twisted pullbacks with the Veronese criterion.
    ClassifyPullbacks {
        #[arg(long, value_parser = parse_variety)]
        variety: Option<Variety>,
        #[arg(long, default_value_t = 6)]
        g_max_abs: i64,
        #[arg(long, default_value_t = 3)]
        rank_cap: u64,
        #[arg(long, default_value_t = 12)]
        b_abs: i64,
    },
    /// Run every check of the configuration.
    Suite,
}

fn parse_variety(s: &str) -> Result<Variety, String> {
    let (a0, a1) = s.split_once(',').ok_or("expected a0,a1")?;
    let a0: i64 = a0.trim().parse().map_err(|e| format!("a0: {e}"))?;
    let a1: i64 = a1.trim().parse().map_err(|e| format!("a1: {e}"))?;
    Variety::new(a0, a1).map_err(|e| e.to_string())
}

struct Ctx {
    config: Config,
}

impl Ctx {
    fn variety(&self, given: Option<Variety>) -> Result<Variety> {
        given.or(self.config.variety).ok_or_else(|| {
            anyhow!("no variety given (use --variety a0,a1 or set `variety` in the config)")
        })
    }

    fn target(&self, t: &Target) -> Result<(Variety, SheafExpr)> {
        let v = self.variety(t.variety)?;
        let s: SheafExpr = t.sheaf.parse().map_err(|e| anyhow!("{e}: {:?}", t.sheaf))?;
        Ok((v, s))
    }
}

fn with_header(v: &Variety, s: Option<&SheafExpr>, body: Value) -> Value {
    let mut out = json!({"schema": SCHEMA, "variety": v});
    if let Some(s) = s {
        out["sheaf"] = json!(s.to_string());
    }
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn search_box(b: &BoxArgs) -> SearchBox {
    SearchBox::standard(b.max_a1, b.a_abs, b.b_abs)
}

/// Returns the document to print and whether the run succeeded.
fn execute(ctx: &Ctx, command: &Command) -> Result<(render::Doc, bool)> {
    let sample = ctx.config.sample_box;
    Ok(match command {
        Command::Cohomology(t) => {
            let (v, s) = ctx.target(t)?;
            let h = s.cohomology(&v)?;
            let hrr = ChowRing::new(v).chi_hrr(&s)?;
            let body = json!({"h": h.0, "chi": h.chi(), "hrr": hrr, "agreement": h.chi() == hrr});
            (
                render::Doc::plain(with_header(&v, Some(&s), body)),
                h.chi() == hrr,
            )
        }
        Command::Ulrich(t) => {
            let (v, s) = ctx.target(t)?;
            let verdict = is_ulrich(&s, &v)?;
            (
                render::Doc::plain(with_header(&v, Some(&s), serde_json::to_value(verdict)?)),
                true,
            )
        }
        Command::Dual(t) => {
            let (v, s) = ctx.target(t)?;
            let body = json!({"dual": ulrich_dual(&s, &v).to_string()});
            (render::Doc::plain(with_header(&v, Some(&s), body)), true)
        }
        Command::Regularity { target, window } => {
            let (v, s) = ctx.target(target)?;
            if *window < 1 {
                bail!("window must be at least 1");
            }
            let body = json!({
                "window": window,
                "regularity": regularity(&s, &v, *window)?,
                "regular_0_0": is_pq_regular(&s, &v, 0, 0)?,
            });
            (render::Doc::plain(with_header(&v, Some(&s), body)), true)
        }
        Command::Beilinson(t) => {
            let (v, s) = ctx.target(t)?;
            let table = beilinson_table(&s, &v)?;
            let body = json!({"grid": table.grid, "members": table.members});
            (
                render::Doc::with_markdown(with_header(&v, Some(&s), body), table.to_markdown()),
                true,
            )
        }
        Command::Resolution { target, low_c } => {
            let (v, s) = ctx.target(target)?;
            let r = if *low_c {
                resolution_lowc(&s, &v, &sample)?
            } else {
                resolution(&s, &v, &sample)?
            };
            let md = render::complex_markdown(&r);
            (
                render::Doc::with_markdown(json!({"schema": SCHEMA, "report": r}), md),
                true,
            )
        }
        Command::Monad(t) => {
            let (v, s) = ctx.target(t)?;
            let r = monad(&s, &v, &sample)?;
            let md = render::complex_markdown(&r);
            (
                render::Doc::with_markdown(json!({"schema": SCHEMA, "report": r}), md),
                true,
            )
        }
        Command::ClassifyLines(b) => {
            let r = search_line_bundles(&search_box(b))?;
            let ok = r.agreement;
            (
                render::Doc::plain(json!({"schema": SCHEMA, "report": r})),
                ok,
            )
        }
        Command::ClassifyOmega(b) => {
            let r = search_omega_twists(&search_box(b))?;
            let ok = r.agreement;
            (
                render::Doc::plain(json!({"schema": SCHEMA, "report": r})),
                ok,
            )
        }
        Command::ClassifyPullbacks {
            variety,
            g_max_abs,
            rank_cap,
            b_abs,
        } => {
            let v = ctx.variety(*variety)?;
            let family = default_g_family(*g_max_abs, *rank_cap);
            let r = classify_pullbacks(
                &v,
                &family,
                IntRange::new(-3, 3),
                IntRange::new(-b_abs, *b_abs),
            )?;
            let ok = r.agreement;
            (
                render::Doc::plain(with_header(&v, None, json!({"report": r}))),
                ok,
            )
        }
        Command::Suite => {
            let report = run_suite(&ctx.config.plan())?;
            let summary: Vec<String> = report
                .checks
                .iter()
                .map(|c| {
                    let word = match c.status {
                        Status::Pass if c.detail.get("agreement").is_some() => "agreement",
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Vacuous => "vacuous",
                        Status::Deviation => "deviation",
                        Status::Info => "info",
                    };
                    format!("{}: {word}", c.name)
                })
                .collect();
            let mut doc = serde_json::to_value(&report)?;
            doc["summary"] = json!(summary);
            let ok = report.passed;
            let md = render::suite_markdown(&summary, report.first_failure.as_deref());
            (render::Doc::with_markdown(doc, md), ok)
        }
    })
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let ctx = Ctx { config };
    let (doc, ok) = execute(&ctx, &cli.command)?;
    println!("{}", doc.render(ctx.config.format)?);
    if !ok {
        if let Some(name) = doc.value.get("first_failure").and_then(Value::as_str) {
            eprintln!("error: check `{name}` failed");
        } else {
            eprintln!("error: disagreement reported");
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
