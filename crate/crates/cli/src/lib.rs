//! Command-line frontend. [`run`] parses arguments, dispatches, writes the
//! report and returns the process exit code.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use multiplicity_core::certify::{
    genus_four, genus_oddp, genus_pow2, genus_pow2_rp, multiplicity_modp, multiplicity_rp, projective_sweep,
    Certificate,
};
use multiplicity_core::charclass::{alpha_class, alpha_class_stable, compute_s};
use multiplicity_core::oracle::{morin_tuple, random_moment_tuple, CoincidentTuple, MorinModel, Scalar};
use multiplicity_core::spaces::{cp_pontryagin_virtual, virtual_sw_rp, ClassSeries, SpaceManifest};
use multiplicity_core::Error;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(name = "multiplicity", version, about = "Characteristic classes of coincident tuples")]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leading class s_{q,d} in Stiefel-Whitney classes.
    Sqd {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        show_stability: bool,
    },
    /// Mod-p class alpha_{p,i} in Pontryagin classes.
    Alpha {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        i: u32,
        /// Number of formal roots; defaults to a stable choice.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Multiplicity lower bounds for maps.
    #[command(subcommand)]
    Multiplicity(MultiplicityCmd),
    /// Genus lower bounds for configuration spaces.
    #[command(subcommand)]
    Genus(GenusCmd),
    /// Explicit coincident tuples.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Tables of verdicts.
    #[command(subcommand)]
    Table(TableCmd),
}

#[derive(Debug, Subcommand)]
pub enum MultiplicityCmd {
    /// Maps RP^m -> R^n, q a power of two.
    Rp {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u32,
    },
    /// Odd prime p, Pontryagin series read from a manifest.
    Modp {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Args)]
pub struct DualSource {
    /// Manifest holding the dual class series.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Manifold dimension (defaults to the manifest's `dimension`).
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum GenusCmd {
    /// q a power of two. Either `--l L` for RP^{2^l-2-d}, or `--space FILE`.
    Pow2 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, conflicts_with_all = ["space", "m"])]
        l: Option<u32>,
        #[command(flatten)]
        source: DualSource,
    },
    /// q = 4. Either `--rp M --n N` (immersion RP^M -> R^N), or `--space FILE`.
    Four {
        #[arg(long, requires = "n", conflicts_with_all = ["space", "m"])]
        rp: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        source: DualSource,
    },
    /// Odd prime p. Either `--cp M --n N` (immersion CP^M -> R^N), or `--space FILE`.
    Oddp {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, requires = "n", conflicts_with_all = ["space", "m"])]
        cp: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        source: DualSource,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Coincident (k+1)-tuple of a Morin canonical form.
    Morin {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Compute in f64 instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// q points of a random moment curve in R^{n+d+1}.
    Moment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        float: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    /// Verdicts for RP^{2^l-2-d} -> R^{2^l-2}, q in {2, 4, 8}.
    Theorem3 {
        #[arg(long)]
        l: u32,
    },
}

/// A finished computation, ready to print.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Unstable(_) | Error::RouteDisagreement(_) | Error::RingMismatch { .. } => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name), writing the report
/// to `out` and diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let written = if cli.json {
                serde_json::to_string_pretty(&report.json)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(out, "{s}"))
            } else {
                write!(out, "{}", report.text)
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_INTERNAL
                }
            }
        }
        Err(e) => {
            let code = exit_code_for(&e);
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string(), "exit_code": code }));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Sqd { q, d, show_stability } => sqd(*q, *d, *show_stability),
        Command::Alpha { p, i, k } => alpha(*p, *i, *k),
        Command::Multiplicity(MultiplicityCmd::Rp { m, n, q }) => Ok(certificate_report(&multiplicity_rp(*m, *n, *q)?)),
        Command::Multiplicity(MultiplicityCmd::Modp { space, p }) => {
            let manifest = SpaceManifest::load(space)?;
            Ok(certificate_report(&multiplicity_modp(&manifest.series()?, *p)?))
        }
        Command::Genus(g) => genus(g),
        Command::Oracle(OracleCmd::Morin { k, m, n, float }) => {
            if *float {
                morin::<f64>(*k, *m, *n)
            } else {
                morin::<BigRational>(*k, *m, *n)
            }
        }
        Command::Oracle(OracleCmd::Moment { n, d, q, seed, float }) => {
            if *float {
                moment::<f64>(*n, *d, *q, *seed)
            } else {
                moment::<BigRational>(*n, *d, *q, *seed)
            }
        }
        Command::Table(TableCmd::Theorem3 { l }) => table_theorem3(*l),
    }
}

fn sqd(q: u32, d: u32, show_stability: bool) -> Result<Report, Error> {
    let r = compute_s(q, d)?;
    let mut text = format!("{}\n", r.formula);
    if show_stability {
        text.push_str(&format!(
            "computed at nu = {}, mu = {}; identical at nu = {}, mu = {}\n",
            r.nu, r.mu, r.stable_at.0, r.stable_at.1
        ));
    }
    let json = json!({
        "q": q,
        "d": d,
        "degree": r.degree(),
        "nu": r.nu,
        "mu": r.mu,
        "stable_at": { "nu": r.stable_at.0, "mu": r.stable_at.1 },
        "formula": r.formula.to_json(),
        "text": r.formula.to_string(),
    });
    Ok(Report { text, json, code: EXIT_OK })
}

fn alpha(p: u32, i: u32, k: Option<u32>) -> Result<Report, Error> {
    let (r, stable) = match k {
        Some(k) => (alpha_class(p, i, k)?, false),
        None => (alpha_class_stable(p, i)?, true),
    };
    let mut text = format!("{}\n", r.formula);
    if stable {
        text.push_str(&format!("k = {}; identical at k = {}\n", r.k, r.k + 1));
    }
    let json = json!({
        "p": p,
        "i": i,
        "k": r.k,
        "stability_checked": stable,
        "formula": r.formula.to_json(),
        "text": r.formula.to_string(),
    });
    Ok(Report { text, json, code: EXIT_OK })
}

fn certificate_text(c: &Certificate) -> String {
    let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let kind = match c.kind {
        multiplicity_core::certify::CertificateKind::Multiplicity => "multiplicity",
        multiplicity_core::certify::CertificateKind::Genus => "genus",
    };
    let mut s = format!("{kind} [{}]\n", params.join(" "));
    s.push_str(&format!("evaluated: {}\n", c.evaluated));
    match (c.conclusive, c.bound, c.witness_text()) {
        (true, Some(b), Some(w)) => s.push_str(&format!("conclusive: {kind} >= {b} (witness {w})\n")),
        _ => s.push_str("inconclusive\n"),
    }
    for n in &c.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

fn certificate_report(c: &Certificate) -> Report {
    Report {
        text: certificate_text(c),
        json: serde_json::to_value(c.to_json()).expect("certificate serialises"),
        code: if c.conclusive { EXIT_OK } else { EXIT_INCONCLUSIVE },
    }
}

fn manifest_source(source: &DualSource) -> Result<(u32, ClassSeries), Error> {
    let path = source
        .space
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("a --space manifest is required here".into()))?;
    let manifest = SpaceManifest::load(path)?;
    let m = source
        .m
        .or(manifest.dimension)
        .ok_or_else(|| Error::InvalidParameter("manifold dimension missing: pass --m or set `dimension`".into()))?;
    Ok((m, manifest.series()?))
}

fn genus(cmd: &GenusCmd) -> Result<Report, Error> {
    let cert = match cmd {
        GenusCmd::Pow2 { d, q, l: Some(l), .. } => genus_pow2_rp(*l, *d, *q)?,
        GenusCmd::Pow2 { d, q, l: None, source } => {
            let (m, series) = manifest_source(source)?;
            genus_pow2(m, *d, *q, &series)?
        }
        GenusCmd::Four { rp: Some(m), n, .. } => {
            let n = n.expect("clap enforces --n");
            genus_four(*m, &virtual_sw_rp(*m, n)?)?
        }
        GenusCmd::Four { rp: None, source, .. } => {
            let (m, series) = manifest_source(source)?;
            genus_four(m, &series)?
        }
        GenusCmd::Oddp { p, i, cp: Some(m), n, .. } => {
            let n = n.expect("clap enforces --n");
            genus_oddp(2 * m, *p, *i, &cp_pontryagin_virtual(*m, n, *p)?)?
        }
        GenusCmd::Oddp { p, i, cp: None, source, .. } => {
            let (m, series) = manifest_source(source)?;
            genus_oddp(m, *p, *i, &series)?
        }
    };
    Ok(certificate_report(&cert))
}

fn tuple_text<T: Scalar>(t: &CoincidentTuple<T>) -> String {
    let fmt = |v: &[T]| -> String {
        let parts: Vec<String> = v.iter().map(|x| x.to_json().to_string().trim_matches('"').to_string()).collect();
        format!("({})", parts.join(", "))
    };
    let mut s = String::new();
    for (p, img) in t.points.iter().zip(&t.images) {
        s.push_str(&format!("{} -> {}\n", fmt(p), fmt(img)));
    }
    s.push_str(&format!(
        "residual: {}\nmin separation: {}\n",
        t.residual.to_json().to_string().trim_matches('"'),
        t.min_separation.to_json().to_string().trim_matches('"')
    ));
    s
}

fn tuple_code<T: Scalar>(t: &CoincidentTuple<T>) -> i32 {
    if t.verify(&T::from_ratio(1, 1_000_000_000), &T::zero()) {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

fn morin<T: Scalar>(k: u32, m: usize, n: usize) -> Result<Report, Error> {
    let (model, tuple): (MorinModel<T>, _) = morin_tuple(k, m, n)?;
    let text = format!("Morin model k = {k}, R^{m} -> R^{n}, {} points\n{}", tuple.len(), tuple_text(&tuple));
    let json = json!({
        "model": {
            "k": k,
            "m": m,
            "n": n,
            "coords": model.coords.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        },
        "tuple": tuple.to_json(),
    });
    Ok(Report { text, json, code: tuple_code(&tuple) })
}

fn moment<T: Scalar>(n: usize, d: usize, q: usize, seed: u64) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, t, tuple) = random_moment_tuple::<T, _>(n, d, q, &mut rng)?;
    let on_target = tuple.images.iter().all(|img| img.as_slice() == c.as_slice());
    let text = format!(
        "moment curve in R^{}, seed {seed}, {q} points, image equals c: {on_target}\n{}",
        n + d + 1,
        tuple_text(&tuple)
    );
    let json = json!({
        "n": n,
        "d": d,
        "q": q,
        "seed": seed,
        "c": c.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "t": t.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        "image_equals_c": on_target,
        "tuple": tuple.to_json(),
    });
    let code = if on_target { tuple_code(&tuple) } else { EXIT_INTERNAL };
    Ok(Report { text, json, code })
}

fn table_theorem3(l: u32) -> Result<Report, Error> {
    let rows = projective_sweep(l)?;
    let mut text = format!("RP^(2^{l}-2-d) -> R^{}\n", (1u32 << l) - 2);
    for c in &rows {
        let verdict = match c.witness_text() {
            Some(w) => format!("multiplicity >= {} (witness {w})", c.params["q"]),
            None => "inconclusive".to_string(),
        };
        text.push_str(&format!("q={} d={} m={}: {verdict}\n", c.params["q"], c.params["d"], c.params["m"]));
    }
    let json = json!({
        "table": "theorem3",
        "l": l,
        "n": (1u32 << l) - 2,
        "rows": rows.iter().map(|c| serde_json::to_value(c.to_json()).expect("certificate serialises")).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, code: EXIT_OK })
}
