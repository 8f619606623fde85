//! The `cfsym` command line.
//!
//! Every subcommand prints one table. `--format table` aligns columns for
//! reading, `csv` writes RFC 4180 rows under a header, and `json` writes one
//! object per line. Exact values (fractions, characteristic numbers,
//! `log2(num/den)` frequencies) are printed next to their floating-point
//! renderings.
//!
//! Exit status is 0 on success, 1 when the library rejects an argument or a
//! verification fails, and 2 when the command line itself is malformed.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::census::{self, CensusConfig, CensusRow};
use crate::cf::{
    convergent_matrix, digits_of_rational, evaluate, fundamental_interval, DigitString,
};
use crate::error::{Error, Result};
use crate::families::{self, FamilyKind, FamilySpec, VerifyBounds};
use crate::lab::{self, Density, MonteCarloConfig};
use crate::measure::{chi, pgk_exact};
use crate::symmetry::{self, next_permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cfsym", version, about = "Gauss-Kuzmin frequencies and permutation symmetries of continued-fraction digit strings")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Worker threads for parallel commands [default: available cores].
    #[arg(long, env = "CFSYM_WORKERS", global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value [a1, ..., an] as an exact fraction.
    Eval(StringArg),
    /// Fundamental interval I(a).
    Interval(StringArg),
    /// Characteristic number (p+q)(q'+q).
    Chi(StringArg),
    /// Exact and rounded Gauss-Kuzmin frequency.
    Pgk {
        #[command(flatten)]
        s: StringArg,
        /// Significand bits of the rounded value (1..=53).
        #[arg(long, default_value_t = 53)]
        bits: u32,
    },
    /// Every distinct permutation with its interval and frequency.
    Perms {
        #[command(flatten)]
        s: StringArg,
        #[arg(long, default_value_t = symmetry::DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// Nontrivial symmetries of a string.
    Symmetries {
        #[command(flatten)]
        s: StringArg,
        #[arg(long, default_value_t = symmetry::DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// Distinct frequencies over the orderings of a digit set.
    Nu {
        /// Comma-separated distinct digits.
        set: String,
        /// List the colliding ordering pairs instead of the summary.
        #[arg(long)]
        pairs: bool,
        #[arg(long, default_value_t = symmetry::DEFAULT_MAX_LEN)]
        max_len: usize,
    },
    /// Count exceptional n-subsets of {1..N}.
    Census(CensusArgs),
    /// List exceptional n-subsets of {1..N}.
    Exceptional {
        #[arg(long)]
        n: usize,
        #[arg(long = "N", value_name = "N")]
        big_n: u64,
        /// Run even when the work estimate exceeds the budget.
        #[arg(long)]
        force: bool,
    },
    /// Build a member of a constructive family.
    Families {
        /// stable, s_stable, a_plus or concluding.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated parameters t1,t2,...
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 1)]
        s: u64,
    },
    /// a+ and its nontrivial symmetry for a stable string.
    Aplus(StringArg),
    /// Exhaustive checks of the main results.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Measure experiments with non-Gauss-Kuzmin densities.
    #[command(subcommand)]
    Measurelab(LabCommand),
    /// Seeded Monte Carlo estimate of a string's frequency.
    Montecarlo {
        /// Target string, comma-separated.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long = "digits", default_value_t = 20)]
        digits_per_sample: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Starting points: `uniform` or `invariant` (Gauss-Kuzmin distributed).
        #[arg(long, default_value = "uniform")]
        sampling: String,
    },
    /// Series for external plotting.
    Plotdata {
        /// Figure name; only `fN4_ratio` is known.
        figure: String,
        #[arg(long = "N", value_name = "N", default_value_t = 120)]
        n_max: u64,
    },
}

#[derive(Debug, Args)]
pub struct StringArg {
    /// Comma-separated positive digits, e.g. 3,1,4.
    pub string: String,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "N", value_name = "N")]
    pub big_n: u64,
    /// Report points, e.g. `10,20,30` or `10,20,...,120`.
    #[arg(long)]
    pub report: Option<String>,
    /// Resume from and record progress in this file.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
    /// Maximum characteristic-number evaluations without --force.
    #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
    pub budget: u128,
    /// Leave the elapsed_seconds column empty, for reproducible output.
    #[arg(long)]
    pub omit_timing: bool,
    /// No progress lines on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// No string of length 3 has a nontrivial symmetry.
    Theorem3i {
        #[arg(long, default_value_t = 40)]
        max_digit: u64,
    },
    /// Stable, a+, concluding and s-stable constructions.
    Families {
        #[arg(long, default_value_t = 7)]
        max_len: usize,
        #[arg(long, default_value_t = 50)]
        max_param: u64,
        #[arg(long, default_value_t = 100)]
        max_t: u64,
        #[arg(long, default_value_t = 10)]
        max_s: u64,
        #[arg(long, default_value_t = 50)]
        max_s_param: u64,
    },
    /// Matrix, interval and round-trip identities on random strings.
    Invariants {
        #[arg(long, default_value_t = 10_000)]
        instances: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        max_digit: u64,
    },
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Perturb the Gauss-Kuzmin density on I(a0); omit for Gauss-Kuzmin.
    #[arg(long)]
    pub a0: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = lab::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum LabCommand {
    /// Sample the perturbed density across I(a0).
    Perturb {
        #[arg(long)]
        a0: String,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
    },
    /// mu(I(a)) - mu(I(reverse a)) for one string or all short strings.
    Defect {
        #[command(flatten)]
        density: DensityArgs,
        /// Single string; without it every string up to --max-len is scanned.
        #[arg(long)]
        string: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 8)]
        max_digit: u64,
    },
    /// Interval-width ratios and their limit.
    Lemma5 {
        #[arg(long)]
        string: String,
        #[arg(long, default_value = "1,10,100,1000")]
        t: String,
    },
}

/// Rows of JSON values under named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Plot series: comma-joined rows without a header unless JSON.
    pub series: bool,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), series: false }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut impl Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv | Format::Table if self.series => {
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| csv_cell(&plain(v))).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| csv_cell(&plain(v))).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| format!("{}:{}", Value::from(*c), v))
                        .collect();
                    writeln!(out, "{{{}}}", fields.join(","))?;
                }
            }
            Format::Table => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(plain).collect()).collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
                    .collect();
                let line = |fields: Vec<&str>| -> String {
                    let padded: Vec<String> =
                        fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
                    padded.join("  ").trim_end().to_string()
                };
                writeln!(out, "{}", line(self.columns.clone()))?;
                for r in &cells {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
            }
        }
        Ok(())
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `x` rounded to `sig` significant digits and reparsed.
fn sig_digits(x: f64, sig: usize) -> f64 {
    format!("{:.*e}", sig.saturating_sub(1), x).parse().unwrap_or(x)
}

/// `r` rounded half away from zero to `places` decimals.
pub fn fixed_decimal(r: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = (r * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn parse_string(arg: &str, what: &str) -> Result<DigitString> {
    arg.parse::<DigitString>()
        .map_err(|e| Error::InvalidArgument(format!("{what} `{arg}`: {e}")))
}

fn parse_list(arg: &str, what: &str) -> Result<Vec<u64>> {
    arg.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("{what} `{arg}`: `{t}` is not a nonnegative integer")))
        })
        .collect()
}

/// Comma-separated integers where `a,b,...,z` expands to the arithmetic
/// progression `a, b, b + (b - a), ...` ending at `z`.
pub fn parse_report_points(arg: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let Some(dots) = parts.iter().position(|p| *p == "..." || *p == "…") else {
        return parse_list(arg, "report points");
    };
    let bad = || Error::InvalidArgument(format!("report points `{arg}`: `...` needs two terms before it and one after"));
    if dots < 2 || dots + 2 != parts.len() {
        return Err(bad());
    }
    let head = parse_list(&parts[..dots].join(","), "report points")?;
    let last = parse_list(parts[dots + 1], "report points")?[0];
    let (a, b) = (head[dots - 2], head[dots - 1]);
    if b <= a || last < b || (last - b) % (b - a) != 0 {
        return Err(Error::InvalidArgument(format!(
            "report points `{arg}`: {last} is not reached from {a}, {b} in equal steps"
        )));
    }
    let mut pts = head;
    pts.extend((1..=(last - b) / (b - a)).map(|k| b + k * (b - a)));
    Ok(pts)
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write + Send,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    let format = cli.format;
    let workers = cli.workers.unwrap_or_else(census::default_workers);
    if workers == 0 {
        let _ = writeln!(err, "error: --workers must be at least 1");
        return 2;
    }
    let err = Mutex::new(err);
    match execute(cli.command, workers, &err) {
        Ok((table, ok)) => {
            if let Err(e) = table.write(out, format) {
                let _ = writeln!(err.lock().unwrap(), "error: {e}");
                return 1;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err.lock().unwrap(), "error: {e}");
            1
        }
    }
}

type Outcome = (Table, bool);

fn execute<E: Write + Send>(cmd: Command, workers: usize, err: &Mutex<&mut E>) -> Result<Outcome> {
    let done = |t: Table| Ok((t, true));
    match cmd {
        Command::Eval(StringArg { string }) => {
            let a = parse_string(&string, "string")?;
            let v = evaluate(&a);
            let mut t = Table::new(&["string", "value", "decimal"]);
            t.push(vec![s(&a), s(&v), float(rat_f64(&v))]);
            done(t)
        }
        Command::Interval(StringArg { string }) => {
            let a = parse_string(&string, "string")?;
            let i = fundamental_interval(&a);
            let mut t = Table::new(&["string", "interval", "included", "excluded", "width", "lo", "hi"]);
            t.push(vec![
                s(&a),
                s(&i),
                s(&i.included),
                s(&i.excluded),
                s(i.width()),
                float(rat_f64(i.lo())),
                float(rat_f64(i.hi())),
            ]);
            done(t)
        }
        Command::Chi(StringArg { string }) => {
            let a = parse_string(&string, "string")?;
            let c = chi(&a);
            let p = pgk_exact(&a);
            let mut t = Table::new(&["string", "length", "chi", "pgk_exact", "pgk"]);
            t.push(vec![s(&a), a.len().into(), s(&c.value), s(&p), float(p.to_f64(53)?)]);
            done(t)
        }
        Command::Pgk { s: StringArg { string }, bits } => {
            let a = parse_string(&string, "string")?;
            let p = pgk_exact(&a);
            let mut t = Table::new(&["string", "pgk_exact", "pgk", "decimal"]);
            t.push(vec![s(&a), s(&p), float(p.to_f64(bits)?), s(p.to_decimal(6))]);
            done(t)
        }
        Command::Perms { s: StringArg { string }, max_len } => {
            let a = parse_string(&string, "string")?;
            done(perms_table(&a, max_len)?)
        }
        Command::Symmetries { s: StringArg { string }, max_len } => {
            let a = parse_string(&string, "string")?;
            let r = symmetry::report(&a, max_len)?;
            let mut t = Table::new(&["string", "chi", "partners", "count", "nu", "half_factorial", "exceptional"]);
            let partners: Vec<String> = r.nontrivial_partners.iter().map(ToString::to_string).collect();
            t.push(vec![
                s(&a),
                s(chi(&a).value),
                s(partners.join(" ")),
                r.nontrivial_partners.len().into(),
                r.nu.map_or(Value::Null, Value::from),
                r.half_factorial_bound.map_or(Value::Null, Value::from),
                r.is_exceptional.into(),
            ]);
            done(t)
        }
        Command::Nu { set, pairs, max_len } => {
            let d = parse_string(&set, "digit set")?;
            if pairs {
                let mut t = Table::new(&["first", "second", "chi"]);
                for (x, y) in symmetry::colliding_pairs(&d, max_len)? {
                    let c = chi(&x).value;
                    t.push(vec![s(&x), s(&y), s(c)]);
                }
                return done(t);
            }
            let nu = symmetry::nu(&d, max_len)?;
            let eps = symmetry::epsilon_defect(&d, max_len)?;
            let mut t = Table::new(&["set", "nu", "half_factorial", "exceptional", "epsilon_exact", "epsilon"]);
            t.push(vec![
                s(&d),
                nu.into(),
                symmetry::half_factorial_bound(d.len()).into(),
                symmetry::is_exceptional_set(&d, max_len)?.into(),
                s(&eps),
                float(rat_f64(&eps)),
            ]);
            done(t)
        }
        Command::Census(args) => done(census_table(&args, workers, err)?),
        Command::Exceptional { n, big_n, force } => {
            let sets = census::list_exceptional(n, big_n, workers, force)?;
            let mut t = Table::new(&["set", "nu", "half_factorial", "witness_pairs", "first_witness"]);
            for e in sets {
                let set = DigitString::from_u64s(&e.digits)?;
                let first = e.witnesses.first().map_or(Value::Null, |(x, y)| s(format!("{x} {y}")));
                t.push(vec![
                    s(set),
                    e.nu.into(),
                    symmetry::half_factorial_bound(n).into(),
                    e.witnesses.len().into(),
                    first,
                ]);
            }
            done(t)
        }
        Command::Families { kind, n, params, s: s_param } => {
            let kind: FamilyKind = kind.parse()?;
            let spec = FamilySpec { kind, n, params: parse_list(&params, "params")?, s: s_param };
            let (a, partner) = spec.build()?;
            let mut t = Table::new(&["kind", "n", "params", "string", "chi", "partner", "partner_chi"]);
            t.push(vec![
                s(kind),
                n.into(),
                s(&params),
                s(&a),
                s(chi(&a).value),
                partner.as_ref().map_or(Value::Null, s),
                partner.as_ref().map_or(Value::Null, |b| s(chi(b).value)),
            ]);
            done(t)
        }
        Command::Aplus(StringArg { string }) => {
            let a = parse_string(&string, "string")?;
            let (plus, sigma) = families::a_plus(&a)?;
            let mut t = Table::new(&["string", "a_plus", "sigma", "chi", "sigma_chi", "pgk_exact"]);
            t.push(vec![
                s(&a),
                s(&plus),
                s(&sigma),
                s(chi(&plus).value),
                s(chi(&sigma).value),
                s(pgk_exact(&plus)),
            ]);
            done(t)
        }
        Command::Verify(v) => verify(v),
        Command::Measurelab(l) => done(lab_table(l)?),
        Command::Montecarlo { target, samples, digits_per_sample, seed, sampling } => {
            let a = parse_string(&target, "target")?;
            let cfg = MonteCarloConfig { samples, digits_per_sample, seed, workers, sampling: sampling.parse()? };
            let r = lab::montecarlo_frequency(&a, &cfg)?;
            let mut t = Table::new(&[
                "target", "samples", "digits", "seed", "windows", "hits", "frequency", "expected_exact", "expected",
                "abs_error",
            ]);
            t.push(vec![
                s(&a),
                samples.into(),
                digits_per_sample.into(),
                seed.into(),
                r.windows.into(),
                r.hits.into(),
                float(r.frequency),
                s(&r.expected_exact),
                float(r.expected),
                float(r.abs_error()),
            ]);
            done(t)
        }
        Command::Plotdata { figure, n_max } => {
            if figure != "fN4_ratio" {
                return Err(Error::InvalidArgument(format!("unknown figure `{figure}` (known: fN4_ratio)")));
            }
            let mut t = Table::new(&["N", "ratio"]);
            t.series = true;
            for (big_n, r, _) in census::ratio_series(n_max, workers)? {
                t.push(vec![big_n.into(), s(fixed_decimal(&r, 4))]);
            }
            done(t)
        }
    }
}

fn perms_table(a: &DigitString, max_len: usize) -> Result<Table> {
    if a.len() > max_len {
        return Err(Error::SizeLimit { what: "length", got: a.len().to_string(), limit: max_len.to_string() });
    }
    let mut digits = a.digits().to_vec();
    digits.sort();
    let mut classes: Vec<(bool, num_bigint::BigUint)> = Vec::new();
    let mut t = Table::new(&["string", "interval", "chi", "pgk_exact", "pgk", "class"]);
    loop {
        let b = DigitString::new(digits.clone())?;
        let c = chi(&b);
        let key = (c.odd_length, c.value.clone());
        let class = match classes.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                classes.push(key);
                classes.len() - 1
            }
        };
        let p = pgk_exact(&b);
        t.push(vec![
            s(&b),
            s(fundamental_interval(&b)),
            s(&c.value),
            s(&p),
            float(p.to_f64(53)?),
            (class + 1).into(),
        ]);
        if !next_permutation(&mut digits) {
            break;
        }
    }
    Ok(t)
}

fn census_table<E: Write + Send>(args: &CensusArgs, workers: usize, err: &Mutex<&mut E>) -> Result<Table> {
    let mut cfg = CensusConfig::new(args.n, args.big_n);
    cfg.workers = workers;
    cfg.force = args.force;
    cfg.budget = args.budget;
    cfg.checkpoint = args.checkpoint.clone();
    if let Some(r) = &args.report {
        cfg.report_points = parse_report_points(r)?;
    }
    let last_tenth = Mutex::new(u64::MAX);
    let progress = |done: u64, total: u64| {
        let tenth = done * 10 / total.max(1);
        let mut last = last_tenth.lock().unwrap();
        if *last != tenth {
            *last = tenth;
            let _ = writeln!(err.lock().unwrap(), "census n={} N={}: {done}/{total} ranges", args.n, args.big_n);
        }
    };
    let rows = if args.quiet {
        census::census(&cfg)?
    } else {
        census::census_with_progress(&cfg, Some(&progress))?
    };
    Ok(census_rows(&rows, args.omit_timing))
}

/// Census rows under the `n,N,total,f,delta,elapsed_seconds,delta_exact` header.
pub fn census_rows(rows: &[CensusRow], omit_timing: bool) -> Table {
    let mut t = Table::new(&["n", "N", "total", "f", "delta", "elapsed_seconds", "delta_exact"]);
    for r in rows {
        let elapsed = if omit_timing {
            Value::Null
        } else {
            float((r.elapsed.as_secs_f64() * 1000.0).round() / 1000.0)
        };
        t.push(vec![
            r.n.into(),
            r.big_n.into(),
            s(r.total),
            r.f.into(),
            float(sig_digits(r.delta_f64(), 6)),
            elapsed,
            s(format!("{}/{}", r.f, r.total)),
        ]);
    }
    t
}

fn verify(cmd: VerifyCommand) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Theorem3i { max_digit } => {
            if max_digit == 0 {
                return Err(Error::InvalidArgument("max-digit must be positive".into()));
            }
            let bad = symmetry::scan_length3(max_digit);
            let mut t = Table::new(&["check", "max_digit", "strings", "exceptions", "result"]);
            let result = if bad.is_empty() {
                "no nontrivial symmetry found".to_string()
            } else {
                let list: Vec<String> = bad.iter().take(10).map(ToString::to_string).collect();
                format!("nontrivial symmetries found: {}", list.join(" "))
            };
            t.push(vec![
                s("length-3 strings"),
                max_digit.into(),
                s(max_digit as u128 * max_digit as u128 * max_digit as u128),
                bad.len().into(),
                s(result),
            ]);
            Ok((t, bad.is_empty()))
        }
        VerifyCommand::Families { max_len, max_param, max_t, max_s, max_s_param } => {
            let b = VerifyBounds { max_len, max_param, max_concluding_t: max_t, max_s, max_s_param };
            let v = families::verify_families(&b);
            let mut t = Table::new(&["check", "checked", "failures", "first_failure"]);
            let first = v.failures.first().map_or(Value::Null, s);
            let total = v.failures.len();
            for (name, n) in [
                ("stable", v.stable_checked),
                ("a_plus", v.a_plus_checked),
                ("concluding", v.concluding_checked),
                ("s_stable", v.s_stable_checked),
            ] {
                t.push(vec![s(name), n.into(), Value::Null, Value::Null]);
            }
            t.push(vec![s("all"), (v.stable_checked + v.concluding_checked + v.s_stable_checked).into(), total.into(), first]);
            Ok((t, v.passed()))
        }
        VerifyCommand::Invariants { instances, seed, max_len, max_digit } => {
            if max_len == 0 || max_digit == 0 {
                return Err(Error::InvalidArgument("max-len and max-digit must be positive".into()));
            }
            let fails = invariant_failures(instances, seed, max_len, max_digit);
            let mut t = Table::new(&["invariant", "checked", "failures"]);
            let ok = fails.iter().all(|(_, f)| *f == 0);
            for (name, f) in fails {
                t.push(vec![s(name), instances.into(), f.into()]);
            }
            Ok((t, ok))
        }
    }
}

/// Failure counts of the matrix and interval identities on random strings.
pub fn invariant_failures(instances: u64, seed: u64, max_len: usize, max_digit: u64) -> Vec<(&'static str, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = [0u64; 5];
    for _ in 0..instances {
        let len = rng.gen_range(1..=max_len);
        let d: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=max_digit)).collect();
        let a = DigitString::from_u64s(&d).expect("positive");
        let r = a.reversed();
        let c = convergent_matrix(&a);
        let sign = if len % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        fails[0] += u64::from(c.determinant() != sign);
        fails[1] += u64::from(convergent_matrix(&r) != c.transpose());
        fails[2] += u64::from(chi(&a) != chi(&r));
        let q = BigInt::from(c.q.clone());
        let qp = BigInt::from(c.q_prev.clone());
        let width = BigRational::new(BigInt::one(), &q * (&q + &qp));
        fails[3] += u64::from(fundamental_interval(&a).width() != width);
        // (1) evaluates to 1, outside the domain of the expansion.
        if d != [1] {
            let back = digits_of_rational(&evaluate(&a));
            fails[4] += u64::from(back.map_or(true, |b| b != a.canonicalize()));
        }
    }
    ["determinant", "transpose", "chi_reversal", "width", "round_trip"].into_iter().zip(fails).collect()
}

fn density(args: &DensityArgs) -> Result<Density> {
    match &args.a0 {
        None => Ok(Density::GaussKuzmin),
        Some(a0) => lab::perturbed_density(&parse_string(a0, "a0")?, args.epsilon),
    }
}

fn lab_table(cmd: LabCommand) -> Result<Table> {
    match cmd {
        LabCommand::Perturb { a0, epsilon, points } => {
            let a0 = parse_string(&a0, "a0")?;
            let d = lab::perturbed_density(&a0, epsilon)?;
            let Density::Perturbed(p) = &d else { unreachable!() };
            let points = points.max(2);
            let mut t = Table::new(&["x", "f_gk", "f", "difference"]);
            for i in 0..points {
                let x = p.alpha + (p.beta - p.alpha) * i as f64 / (points - 1) as f64;
                let (g, f) = (lab::gauss_kuzmin_density(x), d.eval(x));
                t.push(vec![float(x), float(g), float(f), float(f - g)]);
            }
            Ok(t)
        }
        LabCommand::Defect { density: dargs, string, max_len, max_digit } => {
            let d = density(&dargs)?;
            let mut t = Table::new(&["string", "reverse", "defect"]);
            let mut one = |a: DigitString| -> Result<()> {
                let defect = lab::symmetry_defect(&d, &a, dargs.tol)?;
                t.push(vec![s(&a), s(a.reversed()), float(defect)]);
                Ok(())
            };
            match string {
                Some(x) => one(parse_string(&x, "string")?)?,
                None => {
                    for len in 1..=max_len {
                        let mut failure = None;
                        families::for_each_tuple(len, max_digit, |digits| {
                            if failure.is_none() {
                                if let Err(e) = one(DigitString::from_u64s(digits).expect("positive")) {
                                    failure = Some(e);
                                }
                            }
                        });
                        if let Some(e) = failure {
                            return Err(e);
                        }
                    }
                }
            }
            Ok(t)
        }
        LabCommand::Lemma5 { string, t: ts } => {
            let a = parse_string(&string, "string")?;
            let tr = lab::lemma5_trace(&a, &parse_list(&ts, "t values")?)?;
            let mut t = Table::new(&["t", "delta", "epsilon", "ratio", "ratio_decimal", "limit", "gap"]);
            for smp in &tr.samples {
                let gap = (&smp.ratio - &tr.limit).abs();
                t.push(vec![
                    smp.t.into(),
                    s(&smp.delta),
                    s(&smp.epsilon),
                    s(&smp.ratio),
                    float(rat_f64(&smp.ratio)),
                    s(&tr.limit),
                    float(rat_f64(&gap)),
                ]);
            }
            Ok(t)
        }
    }
}
