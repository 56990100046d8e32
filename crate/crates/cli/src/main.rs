use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use covstat::core_surface::{core_cyclic, verify_core};
use covstat::expect::{
    build_frame, e_emb_report, e_emb_series, e_fix_exact, e_fix_series, e_fix_subgroup, e_fix_subgroup_series,
    xi_exact,
};
use covstat::oracle::{brute_e_fix, count_homs, sample_estimate, ENUMERATION_CAP};
use covstat::resolve::{growing_resolution, image_resolution};
use covstat::symrep::{zeta_exact, zeta_poly};
use covstat::tiled::canonical_form;
use covstat::words::{are_conjugate, dehn_reduce, free_reduce, max_root, parse_word};
use covstat::{asympt::SeriesReport, configured_threads, CyclicWord, Error, TiledSurface, Word};

#[derive(Parser)]
#[command(name = "covstat", version, about = "Fixed-point statistics of random covers of the genus-2 surface")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized steps (frames, sampling).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Words in the surface group.
    #[command(subcommand)]
    Word(WordCmd),
    /// Tiled surfaces stored as JSON.
    #[command(subcommand)]
    Tiled(TiledCmd),
    /// Core surfaces.
    #[command(subcommand)]
    Core(CoreCmd),
    /// Resolution of a core surface.
    Resolve(ResolveArgs),
    /// Exact value of the normalized representation zeta sum at s = 2.
    Zeta { n: usize },
    /// Expansion of the zeta sum in 1/n up to order M.
    ZetaPoly {
        m: usize,
        #[arg(long, default_value_t = 2)]
        s: u32,
    },
    /// Expected fixed-point and embedding counts.
    #[command(subcommand)]
    Expect(ExpectCmd),
    /// Brute-force ground truth.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum WordCmd {
    /// Free and cyclic Dehn reduction.
    Reduce { word: String },
    /// Whether two words are conjugate.
    Conj { first: String, second: String },
    /// Maximal root `w ~ r^q` and the divisor count of `q`.
    Root { word: String },
}

#[derive(Subcommand)]
enum TiledCmd {
    Validate { file: PathBuf },
    Stats { file: PathBuf },
    /// Boundary cycles with their pieces and flags.
    Boundary { file: PathBuf },
    /// Re-emits the surface (JSON or, with `--format dot`, Graphviz).
    Export { file: PathBuf },
    /// Canonical form, equal for isomorphic surfaces.
    Canonical { file: PathBuf },
}

#[derive(Subcommand)]
enum CoreCmd {
    /// Core surface of the cyclic subgroup generated by a word.
    Build {
        word: String,
        /// Also write the surface to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify { file: PathBuf },
}

#[derive(Args)]
struct ResolveArgs {
    /// Core surface file, or a word when `--word` is given.
    target: String,
    #[arg(long)]
    word: bool,
    /// Keep elements of Euler characteristic at least this value.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "image")]
    chi0: Option<i64>,
    /// Use the resolution by all images.
    #[arg(long)]
    image: bool,
}

#[derive(Args)]
struct Degree {
    /// Degrees: `k`, `a..b` (inclusive) or `a..=b`.
    #[arg(long, value_parser = parse_range)]
    n: Option<(usize, usize)>,
    /// Series truncation order.
    #[arg(long, num_args = 0..=1, default_missing_value = "6")]
    series: Option<i64>,
}

#[derive(Subcommand)]
enum ExpectCmd {
    /// `E_n[fix_w]` for a word.
    Fix {
        word: String,
        #[command(flatten)]
        degree: Degree,
    },
    /// `E_n^emb(Y)` for a tiled surface file.
    Emb {
        file: PathBuf,
        #[command(flatten)]
        degree: Degree,
    },
    /// `E_n[fix_J]` for a subgroup given by its core surface.
    Subgroup {
        file: PathBuf,
        #[command(flatten)]
        degree: Degree,
    },
    /// The representation sum alone, at one degree.
    Xi {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Number of homomorphisms from the surface group to S_n.
    Count {
        n: usize,
        /// Permit the slow top degree.
        #[arg(long)]
        full: bool,
    },
    /// Exact `E_n[fix_w]` by enumeration.
    Fix {
        word: String,
        n: usize,
        #[arg(long)]
        full: bool,
    },
    /// Importance-sampled estimate of `E_n[fix_w]`.
    Sample { word: String, n: usize, samples: usize },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected k, a..b or a..=b, got {:?}", s);
    let (lo, hi) = match s.split_once("..") {
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn word(s: &str) -> Result<Word, Error> {
    parse_word(s)
}

fn load(path: &std::path::Path) -> Result<TiledSurface, Error> {
    TiledSurface::load(path)
}

fn check_cap(n: usize, full: bool) -> Result<(), Error> {
    if n >= ENUMERATION_CAP && !full {
        return Err(Error::Domain(format!("n = {} enumerates for minutes; pass --full to run it", n)));
    }
    Ok(())
}

fn series_json(report: impl serde::Serialize) -> Result<Value, Error> {
    Ok(serde_json::to_value(report)?)
}

fn exact_rows(range: (usize, usize), f: impl Fn(usize) -> Result<Value, Error>) -> Result<Value, Error> {
    let rows: Vec<Value> = (range.0..=range.1).map(f).collect::<Result<_, _>>()?;
    Ok(json!({ "values": rows }))
}

fn degree_mode(d: &Degree) -> Result<DegreeMode, Error> {
    match (d.n, d.series) {
        (Some(_), Some(_)) => Err(Error::Domain("give either --n or --series, not both".into())),
        (Some(r), None) => Ok(DegreeMode::Exact(r)),
        (None, Some(m)) if m < 1 => Err(Error::Domain("the series order must be at least 1".into())),
        (None, Some(m)) => Ok(DegreeMode::Series(m)),
        (None, None) => Ok(DegreeMode::Series(6)),
    }
}

enum DegreeMode {
    Exact((usize, usize)),
    Series(i64),
}

fn run(cli: &Cli) -> Result<Value, Error> {
    match &cli.command {
        Command::Word(c) => match c {
            WordCmd::Reduce { word: w } => {
                let w = word(w)?;
                let free = Word(free_reduce(&w.0));
                let cyc = dehn_reduce(&CyclicWord::from_word(&w));
                Ok(json!({ "input": w.to_string(), "free": free.to_string(), "cyclic": cyc.to_string(), "trivial": cyc.is_empty() }))
            }
            WordCmd::Conj { first, second } => {
                let (a, b) = (word(first)?, word(second)?);
                Ok(json!({ "conjugate": are_conjugate(&a, &b) }))
            }
            WordCmd::Root { word: w } => {
                let r = max_root(&word(w)?)?;
                Ok(json!({ "root": r.root.to_string(), "exponent": r.exponent, "divisor_count": r.divisor_count }))
            }
        },
        Command::Tiled(c) => match c {
            TiledCmd::Validate { file } => {
                let y = load(file)?;
                y.validate()?;
                Ok(json!({ "valid": true }))
            }
            TiledCmd::Stats { file } => Ok(load(file)?.stats()),
            TiledCmd::Boundary { file } => {
                let y = load(file)?;
                let cycles: Vec<Value> = y
                    .boundary_cycles()
                    .iter()
                    .map(|c| json!({ "length": c.len(), "word": c.word(), "flags": c.flags(), "pieces": c.best_pieces() }))
                    .collect();
                Ok(json!({ "cycles": cycles, "flags": y.boundary_flags(), "max_defect": y.max_defect().ok() }))
            }
            TiledCmd::Export { file } => {
                let y = load(file)?;
                if cli.format == Format::Dot {
                    Ok(Value::String(y.to_dot()))
                } else {
                    Ok(serde_json::from_str(&y.to_json())?)
                }
            }
            TiledCmd::Canonical { file } => Ok(json!({ "canonical": format!("{:?}", canonical_form(&load(file)?)) })),
        },
        Command::Core(c) => match c {
            CoreCmd::Build { word: w, out } => {
                let (y, base) = core_cyclic(&word(w)?)?;
                if let Some(p) = out {
                    y.save(p)?;
                }
                let mut s = y.stats();
                s["basepoint"] = json!(base);
                s["boundary_lengths"] = json!(y.boundary_cycles().iter().map(|c| c.len()).collect::<Vec<_>>());
                if cli.format == Format::Dot {
                    return Ok(Value::String(y.to_dot()));
                }
                Ok(s)
            }
            CoreCmd::Verify { file } => {
                verify_core(&load(file)?)?;
                Ok(json!({ "verified": true }))
            }
        },
        Command::Resolve(a) => {
            let y = if a.word { core_cyclic(&word(&a.target)?)?.0 } else { load(&PathBuf::from(&a.target))? };
            let r = match (a.image, a.chi0) {
                (true, _) => image_resolution(&y),
                (false, Some(chi0)) => growing_resolution(&y, chi0)?,
                (false, None) => growing_resolution(&y, y.euler_char())?,
            };
            Ok(r.manifest())
        }
        Command::Zeta { n } => {
            let z = zeta_exact(*n, 2);
            Ok(json!({ "n": n, "exact": z.to_string(), "value": num_traits::ToPrimitive::to_f64(&z) }))
        }
        Command::ZetaPoly { m, s } => Ok(series_json(SeriesReport::from(&zeta_poly(*s, *m)?))?),
        Command::Expect(c) => expect(cli, c),
        Command::Oracle(c) => match c {
            OracleCmd::Count { n, full } => {
                check_cap(*n, *full)?;
                Ok(json!({ "n": n, "count": count_homs(*n)?.to_string() }))
            }
            OracleCmd::Fix { word: w, n, full } => {
                check_cap(*n, *full)?;
                let v = brute_e_fix(&word(w)?, *n)?;
                Ok(json!({ "n": n, "exact": v.to_string(), "value": num_traits::ToPrimitive::to_f64(&v) }))
            }
            OracleCmd::Sample { word: w, n, samples } => {
                let (est, se) = sample_estimate(&word(w)?, *n, *samples, cli.seed)?;
                Ok(json!({ "n": n, "samples": samples, "seed": cli.seed, "estimate": est, "stderr": se }))
            }
        },
    }
}

fn expect(cli: &Cli, c: &ExpectCmd) -> Result<Value, Error> {
    match c {
        ExpectCmd::Fix { word: w, degree } => {
            let w = word(w)?;
            match degree_mode(degree)? {
                DegreeMode::Exact(r) => exact_rows(r, |n| {
                    let v = e_fix_exact(&w, n)?;
                    Ok(json!({ "n": n, "value": v, "tolerance": 1e-9 * v.abs().max(1.0) }))
                }),
                DegreeMode::Series(m) => series_json(e_fix_series(&w, m)?),
            }
        }
        ExpectCmd::Emb { file, degree } => {
            let y = load(file)?;
            match degree_mode(degree)? {
                DegreeMode::Exact(r) => exact_rows(r, |n| Ok(serde_json::to_value(e_emb_report(&y, n)?)?)),
                DegreeMode::Series(m) => series_json(SeriesReport::from(&e_emb_series(&y, m)?)),
            }
        }
        ExpectCmd::Subgroup { file, degree } => {
            let y = load(file)?;
            match degree_mode(degree)? {
                DegreeMode::Exact(r) => exact_rows(r, |n| {
                    let v = e_fix_subgroup(&y, n)?;
                    Ok(json!({ "n": n, "value": v, "tolerance": 1e-9 * v.abs().max(1.0) }))
                }),
                DegreeMode::Series(m) => series_json(e_fix_subgroup_series(&y, m)?),
            }
        }
        ExpectCmd::Xi { file, n } => {
            let frame = build_frame(&load(file)?, cli.seed)?;
            Ok(json!({ "n": n, "seed": cli.seed, "xi": xi_exact(&frame, *n)? }))
        }
    }
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                table(x, &key, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                table(x, &format!("{}[{}]", prefix, i), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{}\t{}\n", prefix, s)),
        _ => out.push_str(&format!("{}\t{}\n", prefix, v)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = configured_threads() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli) {
        Ok(Value::String(s)) if cli.format == Format::Dot => {
            println!("{}", s);
            ExitCode::SUCCESS
        }
        Ok(v) => {
            match cli.format {
                Format::Table => {
                    let mut out = String::new();
                    table(&v, "", &mut out);
                    print!("{}", out);
                }
                _ => println!("{}", serde_json::to_string_pretty(&v).expect("values serialize")),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
