//! Command-line front end: compute, verify and extract descendent series.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hilbk::algebra::rational::{format_rational, rat};
use hilbk::algebra::{Coefficient, MultiSeries};
use hilbk::hilb_c2::{zc2_linebundle, zc2_localization, zc2_macdonald, EqClassC2, Orders};
use hilbk::macdonald::{self, MacdonaldCache, Roles};
use hilbk::toric::{default_configs, parse_bundle, universal_extract, z_surface_checked, ToricSurface, UniversalConfig};
use hilbk::verify::{run_suite, VerifyOptions};
use hilbk::Error;

#[derive(Parser, Debug)]
#[command(name = "hilbk", version, about = "Exact K-theoretic descendent series of Hilbert schemes of points")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads for fixed-point and partition sums.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Emit a LaTeX table of coefficients instead of JSON.
    #[arg(long, global = true)]
    latex: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct OrderArgs {
    /// Largest power of q.
    #[arg(long, default_value_t = 6)]
    qmax: u32,

    /// Largest total degree in the m variables.
    #[arg(long, default_value_t = 3)]
    mmax: u32,

    /// Optional per-variable m orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    m_each: Option<Vec<u32>>,
}

impl OrderArgs {
    fn orders(&self) -> Orders {
        Orders { q: self.qmax, m_total: self.mmax, m_each: self.m_each.clone() }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equivariant series on the affine plane.
    Zc2 {
        /// Class characters separated by ';', e.g. "t1;2 - t2^-1".
        #[arg(long, default_value = "")]
        classes: String,
        #[command(flatten)]
        orders: OrderArgs,
        /// Recompute through the Macdonald routes and require equality.
        #[arg(long)]
        dual_check: bool,
    },
    /// Nonequivariant series of a toric surface.
    Zsurface {
        /// P2, P1xP1 or F<a>.
        #[arg(long)]
        surface: String,
        /// O(d), O(a,b), K or sum:O(..)+O(..)-O(..); repeat for several classes.
        #[arg(long)]
        bundle: Vec<String>,
        #[command(flatten)]
        orders: OrderArgs,
        /// Take the limit along one direction only.
        #[arg(long)]
        single_direction: bool,
    },
    /// Run verification suites.
    Verify {
        /// macdonald, symmetry, descendents, toric or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_size: u32,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 6)]
        qmax: u32,
        #[arg(long, default_value_t = 3)]
        mmax: u32,
        /// Force the Macdonald role assignment, e.g. "t1,t2" or "t2,t1,T".
        #[arg(long)]
        force_roles: Option<String>,
    },
    /// Solve for the universal series from several surfaces.
    Universal {
        /// Ranks of the classes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        ranks: Vec<i64>,
        /// Configurations "S:bundle/bundle" separated by ';'. Defaults span all directions.
        #[arg(long)]
        configs: Option<String>,
        #[arg(long, default_value_t = 3)]
        qmax: u32,
        #[arg(long, default_value_t = 3)]
        mmax: u32,
    },
}

/// Failure with the process exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::NotMonomial(_) | Error::InvalidModel(_) | Error::VariableMismatch(_) | Error::InsufficientTruncation(_) => 2,
            Error::PoleAtOne(_) => 3,
            Error::RankDeficient(_) => 4,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

const SUBCOMMANDS: [&str; 4] = ["zc2", "zsurface", "verify", "universal"];

/// Splice `key=value` lines from `--config <path>` in after the subcommand.
fn expand_config(mut args: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let path = if let Some(p) = args[pos].strip_prefix("--config=") {
        let p = p.to_string();
        args.remove(pos);
        p
    } else {
        if pos + 1 >= args.len() {
            return Err(fail(2, "--config needs a path"));
        }
        let p = args.remove(pos + 1);
        args.remove(pos);
        p
    };
    let text = std::fs::read_to_string(&path).map_err(|e| fail(2, format!("config {path}: {e}")))?;
    let mut command = None;
    let mut extra = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (k, v) = line.split_once('=').ok_or_else(|| fail(2, format!("config line {line:?} is not key=value")))?;
        let (k, v) = (k.trim(), v.trim());
        match (k, v) {
            ("command", c) => command = Some(c.to_string()),
            (k, "true") => extra.push(format!("--{k}")),
            (_, "false") => {}
            (k, v) => {
                extra.push(format!("--{k}"));
                extra.push(v.to_string());
            }
        }
    }
    let sub = args.iter().skip(1).position(|a| SUBCOMMANDS.contains(&a.as_str())).map(|i| i + 1);
    match (sub, command) {
        (Some(i), _) => {
            args.splice(i + 1..i + 1, extra);
        }
        (None, Some(c)) => {
            args.push(c);
            args.extend(extra);
        }
        (None, None) => return Err(fail(2, "no subcommand given on the command line or in the config")),
    }
    Ok(args)
}

fn latex_table<C: Coefficient + Display>(s: &MultiSeries<C>) -> String {
    let mut out = String::new();
    out.push_str("\\begin{tabular}{ll}\n");
    out.push_str(&format!("$({})$ & coefficient \\\\\n\\hline\n", s.vars().join(", ")));
    for (e, c) in s.terms() {
        let e: Vec<String> = e.iter().map(u32::to_string).collect();
        out.push_str(&format!("$({})$ & ${}$ \\\\\n", e.join(", "), c));
    }
    out.push_str("\\end{tabular}\n");
    out
}

fn emit(cli: &Cli, text: String) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_series<C: Coefficient + Display>(cli: &Cli, s: &MultiSeries<C>) -> Result<(), Failure> {
    let text = if cli.latex { latex_table(s) } else { format!("{}\n", s.to_json()) };
    emit(cli, text)
}

fn parse_classes(spec: &str) -> Result<Vec<EqClassC2>, Failure> {
    spec.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| EqClassC2::parse(s).map_err(Failure::from)).collect()
}

fn parse_roles(spec: &str) -> Result<Roles, Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let w = |s: &str| match s {
        "t1" => Ok((1, 0)),
        "t2" => Ok((0, 1)),
        o => Err(fail(2, format!("role {o:?} is not t1 or t2"))),
    };
    match parts.as_slice() {
        [q, t] => Ok(Roles { q: w(q)?, t: w(t)?, transpose: false }),
        [q, t, "T"] => Ok(Roles { q: w(q)?, t: w(t)?, transpose: true }),
        _ => Err(fail(2, format!("roles {spec:?}"))),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().map_err(|e| fail(1, e.to_string()))?;
    }
    match &cli.command {
        Command::Zc2 { classes, orders, dual_check } => {
            let c = parse_classes(classes)?;
            let o = orders.orders();
            let z = zc2_localization(&c, &o)?;
            if *dual_check {
                if zc2_macdonald(&c, &o)? != z {
                    return Err(fail(1, "Macdonald route disagrees with the fixed-point sum"));
                }
                if c.first().is_some_and(|x| x.char0.as_unit_monomial().is_some()) && zc2_linebundle(&c, &o)? != z {
                    return Err(fail(1, "line-bundle route disagrees with the fixed-point sum"));
                }
                eprintln!("dual check: pass");
            }
            emit_series(cli, &z)
        }
        Command::Zsurface { surface, bundle, orders, single_direction } => {
            let s = ToricSurface::parse(surface)?;
            let classes = bundle.iter().map(|b| parse_bundle(&s, b)).collect::<Result<Vec<_>, _>>()?;
            let z = z_surface_checked(&s, &classes, &orders.orders(), !single_direction)?;
            eprintln!("limit directions: {:?}", z.directions);
            emit_series(cli, &z.series)
        }
        Command::Verify { suite, max_size, degree, qmax, mmax, force_roles } => {
            let opts = VerifyOptions { max_size: *max_size, degree: *degree, q: *qmax, m: *mmax };
            let forced;
            let cache: &MacdonaldCache = match force_roles {
                Some(r) => {
                    forced = MacdonaldCache::with_roles(parse_roles(r)?);
                    &forced
                }
                None => macdonald::global(),
            };
            let checks = run_suite(suite, &opts, cache)?;
            for c in &checks {
                eprintln!("[{}] {} / {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
            }
            let all = checks.iter().all(|c| c.passed);
            let report = json!({ "suite": suite, "passed": all, "checks": checks });
            emit(cli, format!("{}\n", serde_json::to_string(&report).expect("report serializes")))?;
            if all {
                Ok(())
            } else {
                Err(fail(1, format!("{} of {} checks failed", checks.iter().filter(|c| !c.passed).count(), checks.len())))
            }
        }
        Command::Universal { ranks, configs, qmax, mmax } => {
            let cfgs = match configs {
                Some(s) => s.split(';').map(str::trim).filter(|x| !x.is_empty()).map(UniversalConfig::parse).collect::<Result<Vec<_>, _>>()?,
                None => default_configs(ranks)?,
            };
            let u = universal_extract(ranks, &cfgs, &Orders::new(*qmax, *mmax))?;
            if cli.latex {
                let mut text = String::new();
                for ((dir, name), s) in u.labels.iter().zip(&u.logs) {
                    text.push_str(&format!("% log {name}, coefficient of {dir}\n{}", latex_table(s)));
                }
                return emit(cli, text);
            }
            let series: serde_json::Map<String, serde_json::Value> =
                u.labels.iter().zip(&u.logs).map(|((_, name), s)| (name.clone(), s.to_json_value())).collect();
            let exps: serde_json::Map<String, serde_json::Value> = u
                .labels
                .iter()
                .map(|(_, name)| u.series(name).map(|s| (name.clone(), s.to_json_value())))
                .collect::<Result<_, _>>()?;
            let directions: serde_json::Map<String, serde_json::Value> =
                u.labels.iter().map(|(d, n)| (n.clone(), json!(d))).collect();
            let doc = json!({
                "ranks": u.ranks,
                "configs": u.configs,
                "residual": format_rational(&u.residual),
                "directions": directions,
                "log_series": series,
                "series": exps,
            });
            emit(cli, format!("{}\n", serde_json::to_string(&doc).expect("report serializes")))?;
            if u.residual != rat(0) {
                return Err(fail(1, format!("nonzero residual {}", u.residual)));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let cli = Cli::parse_from(args);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
