use std::collections::BTreeMap;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use spectral_cones::classical_cones::ConeKind;
use spectral_cones::oracle::{self, Seed};
use spectral_cones::polyhedra::{FloatPoint, Membership, Mode, RationalPoint, RelKind, Violation};
use spectral_cones::{fixtures, lr_coefficient, registry, ConeId, InequalitySystem, Partition, Rational, Variant};

#[derive(Parser)]
#[command(name = "cones", version, about = "Inequalities for eigenvalue and singular value cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the inequality system of a cone.
    Gen {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also list the chamber inequalities of each block.
        #[arg(long)]
        include_chamber: bool,
    },
    /// Test whether a point lies in a cone.
    Check {
        #[command(flatten)]
        cone: ConeArgs,
        /// Blocks separated by `;`, entries by `,`, e.g. "x=1,0;y=1/2,0;z=3/2,0".
        #[arg(long)]
        point: String,
        /// Exact rational arithmetic (the default unless --tol is given).
        #[arg(long, conflicts_with = "tol")]
        exact: bool,
        /// Floating point membership with this tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sample realizable points and check them against the generated system.
    Verify {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = oracle::DEFAULT_TOL)]
        tol: f64,
        /// Also compare with the cone it embeds into.
        #[arg(long)]
        cross: bool,
    },
    /// Print the Littlewood–Richardson coefficient c^λ_{μν}.
    Lr {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Count the relations of a cone by provenance.
    Count {
        #[command(flatten)]
        cone: ConeArgs,
    },
    /// List the stored inequality lists, or print one of them.
    Fixtures {
        name: Option<String>,
    },
}

#[derive(Args)]
struct ConeArgs {
    /// horn, lr, e1, e2, sing, so-odd, a, b, s or t.
    cone: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value = "nonzero")]
    variant: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    /// Exit 1: a membership or verification failure.
    Negative,
    /// Exit 2: bad input.
    Usage(String),
}

type CliResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

impl ConeArgs {
    fn resolve(&self) -> Result<ConeId, Failure> {
        let kind = ConeKind::from_str(&self.cone).map_err(usage)?;
        let variant = Variant::from_str(&self.variant).map_err(usage)?;
        let params = kind
            .param_names()
            .iter()
            .map(|name| {
                let value = match *name {
                    "n" => self.n,
                    "m" => self.m,
                    "p" => self.p,
                    _ => self.q,
                };
                value.ok_or_else(|| usage(format!("{} needs --{name}", kind.name())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ConeId::new(kind, params, variant).map_err(usage)
    }

    fn system(&self) -> Result<std::sync::Arc<InequalitySystem>, Failure> {
        registry::cached(&self.resolve()?).map_err(usage)
    }
}

fn parse_exact(text: &str) -> Result<Rational, Failure> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        let whole: BigInt = format!("{int}{frac}").parse().map_err(|_| usage(format!("bad number `{t}`")))?;
        return Ok(Rational::new(whole, BigInt::from(10).pow(digits)));
    }
    Rational::from_str(t).map_err(|_| usage(format!("bad number `{t}`")))
}

fn parse_point<T>(text: &str, entry: impl Fn(&str) -> Result<T, Failure>) -> Result<BTreeMap<String, Vec<T>>, Failure> {
    let mut point = BTreeMap::new();
    for block in text.split(';').map(str::trim).filter(|b| !b.is_empty()) {
        let (name, values) = block
            .split_once('=')
            .ok_or_else(|| usage(format!("expected name=values in `{block}`")))?;
        let values = values.split(',').map(&entry).collect::<Result<Vec<_>, _>>()?;
        point.insert(name.trim().to_string(), values);
    }
    Ok(point)
}

fn parse_float(text: &str) -> Result<f64, Failure> {
    if text.contains('/') {
        return parse_exact(text)?.to_f64().ok_or_else(|| usage(format!("bad number `{text}`")));
    }
    text.trim().parse().map_err(|_| usage(format!("bad number `{text}`")))
}

fn parse_partition(text: &str) -> Result<Partition, Failure> {
    let parts = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| usage(format!("bad part `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts).map_err(usage)
}

/// `CI_SEED` wins over `--seed`. Without either, CI runs must fail and
/// local runs use seed 1.
fn resolve_seed(flag: Option<u64>) -> Result<Seed, Failure> {
    if let Ok(env) = std::env::var("CI_SEED") {
        return env.trim().parse().map(Seed).map_err(|_| usage(format!("CI_SEED is not an integer: `{env}`")));
    }
    match flag {
        Some(s) => Ok(Seed(s)),
        None if std::env::var_os("CI").is_some() => Err(usage("randomized commands need --seed or CI_SEED under CI")),
        None => Ok(Seed(1)),
    }
}

fn print_violations(system: &InequalitySystem, membership: &Membership) {
    for v in &membership.violations {
        match v {
            Violation::Relation { index, margin } => {
                let rel = &system.relations()[*index];
                println!("violated: {}  (margin {margin:.6})", rel.render(system.blocks()));
            }
            Violation::Chamber { block, index, margin } => {
                println!("violated: chamber of {block} at position {index}  (margin {margin:.6})");
            }
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen { cone, format, include_chamber } => {
            let mut system = (*cone.system()?).clone();
            if include_chamber {
                system = system.with_chamber_relations().map_err(usage)?;
            }
            match format {
                Format::Text => print!("{}", system.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&system.to_json()).map_err(usage)?),
            }
            Ok(())
        }
        Command::Check { cone, point, exact: _, tol } => {
            let system = cone.system()?;
            let membership = match tol {
                Some(tol) => {
                    let p: FloatPoint = parse_point(&point, parse_float)?;
                    system.member_float(&p, tol).map_err(usage)?
                }
                None => {
                    let p: RationalPoint = parse_point(&point, parse_exact)?;
                    system.member(&p, Mode::Exact).map_err(usage)?
                }
            };
            if membership.is_member() {
                println!("member");
                Ok(())
            } else {
                println!("not a member");
                print_violations(&system, &membership);
                Err(Failure::Negative)
            }
        }
        Command::Verify { cone, trials, seed, tol, cross } => {
            let id = cone.resolve()?;
            let seed = resolve_seed(seed)?;
            let system = registry::cached(&id).map_err(usage)?;
            let report = oracle::soundness_check_system(&system, trials, seed, tol).map_err(usage)?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(usage)?);
            let mut clean = report.is_clean();
            if cross {
                let (embedding, target_id) = oracle::registered_embedding(&id).map_err(usage)?;
                let target = registry::cached(&target_id).map_err(usage)?;
                let eq = oracle::equivalence_check(&system, &embedding, &target, trials, seed).map_err(usage)?;
                println!("{}", serde_json::to_string_pretty(&eq).map_err(usage)?);
                clean &= eq.is_clean();
            }
            if clean {
                Ok(())
            } else {
                Err(Failure::Negative)
            }
        }
        Command::Lr { lambda, mu, nu } => {
            let (l, m, n) = (parse_partition(&lambda)?, parse_partition(&mu)?, parse_partition(&nu)?);
            println!("{}", lr_coefficient(&l, &m, &n));
            Ok(())
        }
        Command::Count { cone } => {
            let id = cone.resolve()?;
            let system = registry::cached(&id).map_err(usage)?;
            println!("cone: {id}");
            println!("GE: {}", system.ge_count());
            println!("EQ: {}", system.eq_count());
            for (kind, count) in system.count_by_kind() {
                println!("  {kind}: {count}");
            }
            for fixture in fixtures::for_cone(&id).map_err(usage)? {
                let stored = fixture.relations_for(&id).map_err(usage)?;
                let stored_ge = stored.iter().filter(|r| r.rel() == RelKind::Ge).count();
                let present = stored
                    .iter()
                    .filter(|r| match r.rel() {
                        RelKind::Eq => system.contains_relation(r),
                        RelKind::Ge => system.contains_modulo_equalities(r),
                    })
                    .count();
                let matched = system
                    .relations()
                    .iter()
                    .filter(|g| g.rel() == RelKind::Ge)
                    .filter(|g| stored.iter().any(|s| s.same_form(g)))
                    .count();
                println!(
                    "fixture {}: {stored_ge} GE stored, {present}/{} stored relations generated, {matched} generated GE relations listed in the fixture",
                    fixture.name,
                    stored.len()
                );
            }
            Ok(())
        }
        Command::Fixtures { name } => {
            match name {
                None => {
                    for f in fixtures::all().map_err(usage)? {
                        println!("{}\t{}\t{}", f.name, f.cone, f.description);
                    }
                }
                Some(name) => {
                    let f = fixtures::load(&name).map_err(usage)?;
                    print!("{}", f.to_system().map_err(usage)?.to_text());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
