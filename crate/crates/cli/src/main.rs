mod config;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use harmanlab::approx::{self, ExtComplex, ExtPair, Exponent};
use harmanlab::buchstab::BuchstabTable;
use harmanlab::constants;
use harmanlab::ideals::{self, IdealTable};
use harmanlab::sieve::{self, Multiplier};
use harmanlab::weights::{self, AuditParams, Condition, Enumeration, WeightSpec};
use harmanlab::{AlgInt, Error, FieldSpec};

#[derive(Parser, Serialize)]
#[command(name = "harmanlab", version, about = "Sieve computations over class-number-one quadratic fields")]
struct Cli {
    /// Output format; each subcommand has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Prime ideals of norm at most z, with the Landau comparison
    Primes(PrimesArgs),
    /// Ideal table statistics, or the factorization of one element
    Ideals(IdealsArgs),
    /// The Buchstab function
    Buchstab(BuchstabArgs),
    /// The lower-bound sieve constant C(theta)
    Ctheta(CthetaArgs),
    /// The exponent nu(eta)
    Nu(NuArgs),
    /// Sifting sums and their checks
    #[command(subcommand)]
    Sieve(SieveCommand),
    /// Weight condition audits
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Diophantine approximation by prime elements
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Dirichlet witnesses and the eta-good classifier (same as `approx goodpair`)
    Goodpair(GoodpairArgs),
    /// Quick invariant checks across all modules
    Selftest,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct PrimesArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, value_parser = parse_count)]
    z: u64,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct IdealsArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, value_parser = parse_count, default_value = "1000")]
    max_norm: u64,
    /// Factor the element `a,b` (a + b omega) instead
    #[arg(long, value_parser = parse_alg_int)]
    factor: Option<AlgInt>,
}

#[derive(Args, Serialize)]
struct BuchstabArgs {
    #[arg(long, conflicts_with = "dump")]
    u: Option<f64>,
    /// u0 u1 step
    #[arg(long, num_args = 3, value_names = ["U0", "U1", "STEP"])]
    dump: Option<Vec<f64>>,
    #[arg(long, default_value_t = harmanlab::buchstab::DEFAULT_U_MAX)]
    u_max: f64,
    #[arg(long, default_value_t = harmanlab::buchstab::DEFAULT_STEP)]
    step: f64,
}

#[derive(Args, Serialize)]
struct CthetaArgs {
    #[arg(long, conflicts_with = "sweep")]
    theta: Option<f64>,
    /// theta0 theta1 step
    #[arg(long, num_args = 3, value_names = ["T0", "T1", "STEP"])]
    sweep: Option<Vec<f64>>,
    /// Shorthand for --format csv
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Serialize)]
struct NuArgs {
    #[arg(long)]
    eta: f64,
}

/// Field, scale and weight shared by the sieve and audit commands.
#[derive(Args, Serialize)]
struct WeightArgs {
    /// Field as `d=-1` or `-1`
    #[arg(long, alias = "d", value_parser = parse_field_flag, allow_hyphen_values = true)]
    field: i64,
    #[arg(long = "N", value_parser = parse_scale)]
    n: f64,
    #[arg(long, value_enum)]
    weight: Option<WeightKind>,
    /// Weight exponent C; defaults to ceil(100/epsilon) capped at 64
    #[arg(long)]
    c: Option<u32>,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Target point `x1,x2` for omega-tilde
    #[arg(long, value_parser = parse_pair, default_value = "0,0", allow_hyphen_values = true)]
    target: (f64, f64),
    /// Multiplier ideal r as a generator `a,b`
    #[arg(long, value_parser = parse_alg_int, default_value = "1,0", allow_hyphen_values = true)]
    r: AlgInt,
    /// Extent of the ideal table; defaults to what the weight needs
    #[arg(long, value_parser = parse_count)]
    table_norm: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeightKind {
    /// indicator of N(n) <= N
    Chi,
    /// pi exp(-pi N(n)/N)
    Gauss,
    /// normalized (e^{-pi x} - e^{-2 pi x})^C, imaginary fields
    Pow,
    /// the product weight Psi, real fields
    Psi,
    Omega,
    OmegaTilde,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SieveCommand {
    /// Phi_r(W, z): sum over ideals with no prime factor of norm below z
    Phi {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long, default_value_t = 0.0)]
        z: f64,
    },
    /// Residual of the Buchstab identity between prime ranks p < q
    Identity {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        p_rank: u32,
        #[arg(long)]
        q_rank: u32,
    },
    /// Characteristic-weight rough count against B(u) y / log N(p)
    RoughCheck {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        u: f64,
    },
    /// General-weight sifting sum against B(u) y / log N(p)
    GenweightCheck {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        u: f64,
    },
    /// Smoothed indicator error, or a fitted constant over random samples
    Surgery {
        #[arg(long, required_unless_present = "fit")]
        gamma: Option<f64>,
        #[arg(long, required_unless_present = "fit")]
        rho: Option<f64>,
        #[arg(long = "T", required_unless_present = "fit")]
        t: Option<f64>,
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeightsCommand {
    Audit(AuditArgs),
}

#[derive(Args, Serialize)]
struct AuditArgs {
    #[arg(long, value_parser = parse_condition)]
    cond: Condition,
    #[command(flatten)]
    w: WeightArgs,
    #[arg(long, default_value_t = 3.0)]
    c_audit: f64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    xi: f64,
    #[arg(long = "A", default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    /// Prime rank for finitecond; by default the worst prime of norm >= N^epsilon
    #[arg(long)]
    p_rank: Option<usize>,
    /// Scale lambda for newsmallandlarge; defaults to the omega weight's own lambda, else 1
    #[arg(long)]
    lambda: Option<f64>,
    /// Ideals sampled by neededWbound
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ApproxCommand {
    /// Prime elements p with ||p alpha||_omega <= N(p)^-nu (imaginary fields)
    Records(RecordsArgs),
    /// Prime elements p with |||p x||| <= N(p)^-nu (real fields)
    RealRecords(RealRecordsArgs),
    Goodpair(GoodpairArgs),
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct RecordsArgs {
    #[arg(long)]
    d: i64,
    /// Real part of alpha as a decimal string
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: String,
    #[arg(long, value_parser = parse_count)]
    nmax: u64,
    /// `a/b` or a decimal
    #[arg(long, value_parser = parse_exponent, default_value = "7/44")]
    nu: Exponent,
    /// Also check the Euclidean rational-approximation bound for every record
    #[arg(long)]
    rational: bool,
    /// Shorthand for --format json
    #[arg(long)]
    json: bool,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct RealRecordsArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    x1: String,
    #[arg(long, allow_hyphen_values = true)]
    x2: String,
    #[arg(long, value_parser = parse_count)]
    nmax: u64,
    #[arg(long, value_parser = parse_exponent, default_value = "7/44")]
    nu: Exponent,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct GoodpairArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    x1: String,
    #[arg(long, allow_hyphen_values = true)]
    x2: String,
    #[arg(long, value_parser = parse_count)]
    wmax: u64,
    /// Envelope constant c in gcd <= c W^eta
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

fn parse_count(s: &str) -> Result<u64, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(x >= 0.0 && x.fract() == 0.0 && x < 9.0e18) {
        return Err(format!("expected a non-negative integer, got {s}"));
    }
    Ok(x as u64)
}

fn parse_scale(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(x.is_finite() && x > 0.0) {
        return Err(format!("expected a positive number, got {s}"));
    }
    Ok(x)
}

fn parse_field_flag(s: &str) -> Result<i64, String> {
    s.trim_start_matches("d=")
        .parse()
        .map_err(|_| format!("expected d=<integer>, got {s}"))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s}"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t}"));
    Ok((p(a)?, p(b)?))
}

fn parse_alg_int(s: &str) -> Result<AlgInt, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s}"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {t}"));
    Ok(AlgInt::new(p(a)?, p(b)?))
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    Condition::parse(s).ok_or_else(|| {
        format!("unknown condition {s}; expected keycond, finitecond, tailcond, Xcond, newsmallandlarge or neededWbound")
    })
}

/// What a command produced, before formatting.
enum Output {
    Report(Value),
    Csv { header: &'static str, rows: Vec<String> },
    Text(String),
}

/// Shortest round-trip form, switching to exponent notation for very small or large values.
fn num(x: f64) -> String {
    if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn report<T: Serialize>(v: &T) -> Output {
    Output::Report(serde_json::to_value(v).expect("reports serialize"))
}

type Run = harmanlab::Result<Output>;

fn field_of(d: i64) -> harmanlab::Result<FieldSpec> {
    FieldSpec::new(d)
}

const DEFAULT_EPSILON: f64 = 0.05;

fn build_weight(field: &FieldSpec, w: &WeightArgs, default: WeightKind, epsilon: f64) -> harmanlab::Result<WeightSpec> {
    let kind = w.weight.unwrap_or(default);
    let c = w.c.unwrap_or_else(|| weights::default_c(epsilon));
    match kind {
        WeightKind::Chi => WeightSpec::characteristic(w.n),
        WeightKind::Gauss => WeightSpec::gaussian(field, w.n),
        WeightKind::Pow => WeightSpec::imag_gauss_pow(field, w.n, c),
        WeightKind::Psi => WeightSpec::real_product(field, w.n, c),
        WeightKind::Omega => WeightSpec::omega(field, w.n, c, w.delta),
        WeightKind::OmegaTilde => WeightSpec::omega_tilde(field, w.n, c, w.delta, [w.target.0, w.target.1]),
    }
}

fn smooth_default(field: &FieldSpec) -> WeightKind {
    if field.is_imaginary() {
        WeightKind::Gauss
    } else {
        WeightKind::Psi
    }
}

fn multiplier(field: &FieldSpec, r: AlgInt) -> harmanlab::Result<Multiplier> {
    if r.is_zero() {
        return Err(Error::precondition("the multiplier r must be nonzero"));
    }
    let g = field.canonical(r);
    Ok(Multiplier {
        generator: g,
        norm: field.norm(g).unsigned_abs() as u64,
    })
}

fn table(field: &FieldSpec, needed: f64, given: Option<u64>) -> harmanlab::Result<IdealTable> {
    IdealTable::build(field, given.unwrap_or(needed.ceil().max(1.0) as u64))
}

fn run_sieve(cmd: &SieveCommand, seed: u64) -> Run {
    match cmd {
        SieveCommand::Phi { w, z } => {
            let field = field_of(w.field)?;
            let weight = build_weight(&field, w, WeightKind::Chi, DEFAULT_EPSILON)?;
            let r = multiplier(&field, w.r)?;
            let t = table(&field, weight.norm_budget(&field) / r.norm as f64, w.table_norm)?;
            let sum = sieve::sifted(&t, r, *z, &weight)?;
            Ok(report(&json!({ "r": r, "z": z, "sum": sum })))
        }
        SieveCommand::Identity { w, p_rank, q_rank } => {
            let field = field_of(w.field)?;
            let weight = build_weight(&field, w, WeightKind::Chi, DEFAULT_EPSILON)?;
            let r = multiplier(&field, w.r)?;
            let t = table(&field, weight.norm_budget(&field) / r.norm as f64, w.table_norm)?;
            if *q_rank as usize > t.primes().len() {
                return Err(Error::precondition(format!(
                    "q rank {q_rank} beyond the {} primes of the table",
                    t.primes().len()
                )));
            }
            Ok(report(&sieve::buchstab_identity_check(&t, r, *p_rank, *q_rank, &weight)?))
        }
        SieveCommand::RoughCheck { w, u } => {
            let field = field_of(w.field)?;
            let r = multiplier(&field, w.r)?;
            let n = parse_count(&w.n.to_string()).map_err(Error::precondition)?;
            let t = table(&field, n as f64 / r.norm as f64, w.table_norm)?;
            Ok(report(&sieve::rough_asymptotic_check(&t, &BuchstabTable::default(), n, r, *u)?))
        }
        SieveCommand::GenweightCheck { w, u } => {
            let field = field_of(w.field)?;
            let weight = build_weight(&field, w, smooth_default(&field), DEFAULT_EPSILON)?;
            let r = multiplier(&field, w.r)?;
            let t = table(&field, weight.norm_budget(&field) / r.norm as f64, w.table_norm)?;
            Ok(report(&sieve::genweight_asymptotic_check(&t, &BuchstabTable::default(), &weight, r, *u)?))
        }
        SieveCommand::Surgery {
            gamma,
            rho,
            t,
            fit,
            samples,
        } => {
            if *fit {
                Ok(report(&sieve::surgery_fit(*samples, seed)?))
            } else {
                let (g, r, t) = (gamma.unwrap_or_default(), rho.unwrap_or_default(), t.unwrap_or_default());
                Ok(report(&sieve::smoothed_indicator(g, r, t)?))
            }
        }
    }
}

fn run_audit(a: &AuditArgs) -> Run {
    let field = field_of(a.w.field)?;
    let weight = build_weight(&field, &a.w, smooth_default(&field), a.epsilon)?;
    let r = multiplier(&field, a.w.r)?;
    let params = AuditParams {
        c_audit: a.c_audit,
        epsilon: a.epsilon,
        xi: a.xi,
        a: a.a,
        eta: a.eta,
        delta: a.w.delta,
        ..AuditParams::default()
    };
    let budget = weight.norm_budget(&field);
    let with_table = |needed: f64| -> harmanlab::Result<Option<IdealTable>> {
        if weight.norm_only() {
            Ok(None)
        } else {
            table(&field, needed, a.w.table_norm).map(Some)
        }
    };
    let rep = match a.cond {
        Condition::Keycond => weights::audit_keycond(&field, &weight, (r.generator, r.norm), &params)?,
        Condition::Finitecond => {
            let limit = budget / r.norm as f64;
            let primes = ideals::enumerate_prime_ideals(&field, limit.max(2.0))?;
            match a.p_rank {
                Some(k) => weights::audit_finitecond(&field, &primes, &weight, (r.generator, r.norm), k, &params)?,
                None => weights::audit_finitecond_worst(&field, &primes, &weight, (r.generator, r.norm), &params)?,
            }
        }
        Condition::Tailcond => {
            let t = with_table(budget / r.norm as f64)?;
            let en = Enumeration { field: &field, table: t.as_ref() };
            weights::audit_tailcond(&en, &weight, (r.generator, r.norm), &params)?
        }
        Condition::Xcond => {
            let t = with_table(budget)?;
            let en = Enumeration { field: &field, table: t.as_ref() };
            weights::audit_xcond(&en, &weight, &params)?
        }
        Condition::Newsmallandlarge => {
            let t = with_table(budget)?;
            let en = Enumeration { field: &field, table: t.as_ref() };
            let lambda = a.lambda.unwrap_or(match &weight {
                WeightSpec::Omega { lambda, .. } => *lambda,
                _ => 1.0,
            });
            weights::audit_newsmallandlarge(&en, &weight, lambda, &params)?
        }
        Condition::NeededWbound => {
            let x = weights::x_of(weight.scale(), a.epsilon);
            let t = table(&field, x.powf(1.0 - 2.0 * a.epsilon), a.w.table_norm)?;
            weights::audit_needed_wbound(&t, &weight, a.samples, &params)?
        }
    };
    Ok(report(&rep))
}

fn run_goodpair(g: &GoodpairArgs) -> Run {
    let field = field_of(g.d)?;
    let x = ExtPair::parse(&g.x1, &g.x2)?;
    let search = approx::dirichlet_witnesses(&field, &x, g.wmax)?;
    let classified = approx::classify_eta_good(&search.witnesses, &approx::default_eta_grid(), g.c);
    Ok(report(&json!({
        "wmax": search.wmax,
        "warnings": search.warnings,
        "witness_list": search.witnesses,
        "report": classified,
    })))
}

fn run_approx(cmd: &ApproxCommand) -> Run {
    match cmd {
        ApproxCommand::Records(a) => {
            let field = field_of(a.d)?;
            let alpha = ExtComplex::parse(&a.alpha_re, &a.alpha_im)?;
            let search = approx::record_search(&field, &alpha, a.nmax, a.nu)?;
            if a.rational {
                let checks: Vec<_> = search
                    .records
                    .iter()
                    .map(|rec| approx::rational_check(&field, rec, &alpha, a.nu))
                    .collect();
                Ok(report(&json!({ "search": search, "rational": checks })))
            } else {
                Ok(report(&search))
            }
        }
        ApproxCommand::RealRecords(a) => {
            let field = field_of(a.d)?;
            let x = ExtPair::parse(&a.x1, &a.x2)?;
            Ok(report(&approx::real_record_search(&field, &x, a.nmax, a.nu)?))
        }
        ApproxCommand::Goodpair(g) => run_goodpair(g),
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Primes(a) => {
            let field = field_of(a.d)?;
            let primes = ideals::enumerate_prime_ideals(&field, a.z as f64)?;
            if cli.format == Some(Format::Csv) {
                let rows = primes
                    .iter()
                    .map(|q| format!("{},{},{},{},{}", q.norm, q.p, q.tag, q.generator.a, q.generator.b))
                    .collect();
                return Ok(Output::Csv {
                    header: "norm,p,tag,a,b",
                    rows,
                });
            }
            Ok(report(&ideals::prime_count_report(a.z as f64, primes.len() as u64)))
        }
        Command::Ideals(a) => {
            let field = field_of(a.d)?;
            if let Some(x) = a.factor {
                return Ok(report(&ideals::factor_element(&field, x)?));
            }
            let t = IdealTable::build(&field, a.max_norm)?;
            Ok(report(&json!({
                "max_norm": t.max_norm(),
                "ideals": t.len(),
                "prime_ideals": t.primes().len(),
            })))
        }
        Command::Buchstab(a) => {
            let t = BuchstabTable::new(a.u_max, a.step)?;
            match (&a.u, &a.dump) {
                (Some(u), _) => {
                    let b = t.eval(*u)?;
                    if cli.format == Some(Format::Json) {
                        Ok(report(&json!({ "u": u, "value": b })))
                    } else {
                        Ok(Output::Text(format!("{b}")))
                    }
                }
                (None, Some(d)) => {
                    let rows = t.dump(d[0], d[1], d[2])?.iter().map(|(u, b)| format!("{},{}", num(*u), num(*b))).collect();
                    Ok(Output::Csv { header: "u,B(u)", rows })
                }
                (None, None) => Err(Error::precondition("buchstab needs --u or --dump")),
            }
        }
        Command::Ctheta(a) => {
            let t = BuchstabTable::default();
            match (&a.theta, &a.sweep) {
                (Some(theta), _) => Ok(report(&constants::c_theta(*theta, &t)?)),
                (None, Some(s)) => {
                    if !(s[2] > 0.0) || s[1] < s[0] {
                        return Err(Error::precondition("sweep needs theta0 <= theta1 and a positive step"));
                    }
                    let n = ((s[1] - s[0]) / s[2] + 1e-9).floor() as usize;
                    let points = (0..=n)
                        .map(|i| constants::c_theta(s[0] + i as f64 * s[2], &t))
                        .collect::<harmanlab::Result<Vec<_>>>()?;
                    if a.csv || cli.format == Some(Format::Csv) {
                        let rows = points
                            .iter()
                            .map(|p| [p.theta, p.value, p.error, p.i1, p.i2].map(num).join(","))
                            .collect();
                        Ok(Output::Csv {
                            header: "theta,C,error,I1,I2",
                            rows,
                        })
                    } else {
                        Ok(report(&points))
                    }
                }
                (None, None) => Err(Error::precondition("ctheta needs --theta or --sweep")),
            }
        }
        Command::Nu(a) => {
            let nu = constants::nu_of_eta(a.eta)?;
            let (first, second) = constants::nu_branches(a.eta);
            Ok(report(&json!({ "eta": a.eta, "nu": nu, "branches": [first, second] })))
        }
        Command::Sieve(s) => run_sieve(s, cli.seed),
        Command::Weights(WeightsCommand::Audit(a)) => run_audit(a),
        Command::Approx(a) => run_approx(a),
        Command::Goodpair(g) => run_goodpair(g),
        Command::Selftest => Ok(Output::Text(String::new())),
    }
}

fn threads() -> Result<Option<usize>, String> {
    match std::env::var("HARMANLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("HARMANLAB_THREADS must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match threads() {
        Ok(Some(n)) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if matches!(cli.command, Command::Selftest) {
        return if selftest::run() { ExitCode::SUCCESS } else { ExitCode::from(4) };
    }
    let text = match run(&cli) {
        Ok(Output::Report(v)) => {
            let doc = json!({
                "version": harmanlab::VERSION,
                "config": serde_json::to_value(&cli).expect("config serializes"),
                "report": v,
            });
            serde_json::to_string_pretty(&doc).expect("json")
        }
        Ok(Output::Csv { header, rows }) => {
            let mut out = format!("# harmanlab {} {}\n{header}", harmanlab::VERSION, serde_json::to_string(&cli).expect("json"));
            for r in rows {
                out.push('\n');
                out.push_str(&r);
            }
            out
        }
        Ok(Output::Text(s)) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
        // a closed pipe (`| head`) is not an error
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}
