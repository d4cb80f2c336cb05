use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use g2endo::covers::{self, CoverData};
use g2endo::finitefield::{frobenius_stream, CurveModel};
use g2endo::intpoly::IntPoly;
use g2endo::moduli::{self, humbert_membership, igusa_clebsch, HumbertEquation};
use g2endo::pipeline::{self, AnalysisConfig, DataSet, SurveyConfig};
use g2endo::qforms;

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {
        writeln!(std::io::stdout(), $($t)*)?
    };
}

#[derive(Parser)]
#[command(name = "g2endo", version, about = "Endomorphism rings of genus-2 Jacobians over Q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// Coefficients a0,a1,...,a6 of f (or of g when --h is given), lowest degree first.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
    /// Coefficients of h for a model y² + h(x) y = g(x).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bound and, where possible, certify the geometric endomorphism ring.
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long = "B-irred", default_value_t = 59)]
        b_irred: u64,
        #[arg(long = "B-disc", default_value_t = 200)]
        b_disc: u64,
        /// Directory with humbert/D.eq and cm/list.txt.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Write the JSON report here ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Classify the models y² = x⁵ + a4 x⁴ + ... + a0 in a coefficient box.
    Survey {
        #[arg(long = "box", default_value_t = 10)]
        coefficient_box: i64,
        /// Sample this many models instead of running the whole box.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "B-irred", default_value_t = 59)]
        b_irred: u64,
        #[arg(long = "B-disc", default_value_t = 200)]
        b_disc: u64,
        /// Allow negative a4 as well.
        #[arg(long)]
        all_a4: bool,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Per-model log, one JSON record per line.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Print (p, a, b, ordinary, Ω′) for good odd primes up to a bound.
    FrobeniusDump {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 67)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a Humbert equation at one or more curves.
    HumbertTest {
        /// Equation file.
        equation: PathBuf,
        /// Curves as coefficient lists, lowest degree first.
        #[arg(long = "curve", required = true, allow_hyphen_values = true)]
        curves: Vec<String>,
        #[arg(long, default_value_t = moduli::humbert::DEFAULT_TOL)]
        tol: f64,
    },
    /// Membership queries needed to pin down a QM order, then the verdict.
    QmCertify {
        #[arg(allow_hyphen_values = true)]
        d1: i64,
        #[arg(allow_hyphen_values = true)]
        d2: i64,
        /// Answers such as "36:1,40:0"; discriminants not listed are unknown.
        #[arg(long)]
        answers: Option<String>,
        /// Answer queries from Humbert equations in DATA at CURVE.
        #[arg(long, requires = "curve")]
        data: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        #[arg(long, default_value_t = qforms::DEFAULT_QUERY_CAP)]
        cap: i64,
    },
    /// Check an explicit map from a curve to an elliptic curve.
    CoverVerify {
        file: PathBuf,
        /// Also verify the Galois-conjugate map.
        #[arg(long)]
        conjugate: bool,
    },
}

fn parse_coeffs(s: &str) -> Result<IntPoly> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let c = t
        .split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<BigInt>().with_context(|| format!("bad coefficient '{}'", x)))
        .collect::<Result<Vec<_>>>()?;
    if c.is_empty() {
        bail!("empty coefficient list");
    }
    Ok(IntPoly::new(c))
}

fn curve_from(args: &CurveArgs) -> Result<CurveModel> {
    let g = parse_coeffs(&args.curve)?;
    Ok(match &args.h {
        Some(h) => CurveModel::from_gh(&g, &parse_coeffs(h)?)?,
        None => CurveModel::new(g)?,
    })
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        out!("{}", text);
        Ok(())
    } else {
        std::fs::write(path, format!("{}\n", text)).with_context(|| format!("writing {}", path.display()))
    }
}

fn parse_answers(s: &str) -> Result<BTreeMap<i64, bool>> {
    let mut m = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (d, v) = item.split_once(':').ok_or_else(|| anyhow!("expected D:0 or D:1, got '{}'", item))?;
        let v = match v.trim() {
            "1" | "true" | "on" => true,
            "0" | "false" | "off" => false,
            other => bail!("bad answer '{}'", other),
        };
        m.insert(d.trim().parse()?, v);
    }
    Ok(m)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Analyze { curve, b_irred, b_disc, data, json, timings } => {
            let c = curve_from(&curve)?;
            let cfg = AnalysisConfig { b_irred, b_disc, data_dir: data, timings, ..Default::default() };
            let report = pipeline::analyze(&c, &cfg)?;
            let text = serde_json::to_string_pretty(&report)?;
            match &json {
                Some(p) => write_out(p, &text)?,
                None => {
                    out!("curve: y^2 = {}", report.curve.f);
                    out!("classification: {}", serde_json::to_string(&report.classification)?);
                    out!("proof_status: {}", serde_json::to_string(&report.proof_status)?.trim_matches('"'));
                    if let Some(f) = &report.field_of_definition {
                        out!("field_of_definition: {}", f);
                    }
                    for e in &report.evidence {
                        out!("  {}: {}", e.kind, e.detail);
                    }
                }
            }
            Ok(report.exit_code() as u8)
        }
        Cmd::Survey { coefficient_box, sample, seed, b_irred, b_disc, all_a4, json, log } => {
            let cfg = SurveyConfig { coefficient_box, a4_nonneg: !all_a4, b_irred, b_disc, sample: sample.map(|n| (n, seed)) };
            let (summary, records) = pipeline::survey(&cfg)?;
            if let Some(p) = &log {
                let lines: Vec<String> = records.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
                std::fs::write(p, lines.join("\n") + "\n").with_context(|| format!("writing {}", p.display()))?;
            }
            match &json {
                Some(p) => write_out(p, &serde_json::to_string_pretty(&summary)?)?,
                None => {
                    out!("models: {}", summary.models);
                    for (cat, n) in &summary.counts {
                        out!("  {:<24} {}", serde_json::to_string(cat)?.trim_matches('"'), n);
                    }
                    for (d, n) in &summary.rm_counts {
                        out!("  rm disc {:<16} {}", d, n);
                    }
                    out!("max irreducibility prime: {}", summary.max_irreducibility_prime);
                }
            }
            Ok(0)
        }
        Cmd::FrobeniusDump { curve, bound, json } => {
            let c = curve_from(&curve)?;
            let rows = frobenius_stream(&c, bound).collect::<g2endo::Result<Vec<_>>>()?;
            if json {
                out!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                out!("{:>6} {:>6} {:>8} {:>9} {:>7}", "p", "a", "b", "ordinary", "omega'");
                for r in &rows {
                    out!("{:>6} {:>6} {:>8} {:>9} {:>7}", r.p, r.a, r.b, r.ordinary, r.in_omega_prime);
                }
            }
            Ok(0)
        }
        Cmd::HumbertTest { equation, curves, tol } => {
            let eq = HumbertEquation::load(&equation)?;
            let mut code = 0;
            for s in &curves {
                let c = CurveModel::new(parse_coeffs(s)?)?;
                let r = humbert_membership(&igusa_clebsch(&c)?, &eq, tol)?;
                if !r.reliable {
                    code = 2;
                }
                out!("{}\t{:?}\treliable={}{}", c.f, r.membership, r.reliable, r.min_value.map(|v| format!("\tmin={:e}", v)).unwrap_or_default());
            }
            Ok(code)
        }
        Cmd::QmCertify { d1, d2, answers, data, curve, cap } => {
            let queries = qforms::required_queries(d1, d2, cap)?;
            out!("candidates: {}", qforms::enumerate_candidates(d1, d2)?.len());
            out!("queries: {}", queries.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "));
            let fixed = answers.as_deref().map(parse_answers).transpose()?.unwrap_or_default();
            let from_data = match (&data, &curve) {
                (Some(dir), Some(cs)) => {
                    let ds = DataSet::load(dir)?;
                    let point = igusa_clebsch(&CurveModel::new(parse_coeffs(cs)?)?)?;
                    Some((ds, point))
                }
                _ => None,
            };
            if fixed.is_empty() && from_data.is_none() {
                return Ok(3);
            }
            let ded = qforms::deduce_qm_ring(
                d1,
                d2,
                |d| {
                    if let Some(&b) = fixed.get(&d) {
                        return Some(b);
                    }
                    let (ds, point) = from_data.as_ref()?;
                    let eq = ds.humbert.get(&(d as u64))?;
                    let r = humbert_membership(point, eq, moduli::humbert::DEFAULT_TOL).ok()?;
                    r.reliable.then_some(matches!(r.membership, moduli::Membership::On | moduli::Membership::NumericOn))
                },
                cap,
            )?;
            for (m, v) in &ded.eliminated {
                out!("eliminated {} (represents {})", m, v);
            }
            for m in &ded.survivors {
                out!("survivor {}", m);
            }
            Ok(match &ded.descriptor {
                Some(d) => {
                    out!("verdict: order of discriminant {} in the algebra of discriminant {}, index {}", d.disc, d.algebra_disc, d.index_in_maximal);
                    0
                }
                None => {
                    out!("verdict: undetermined");
                    3
                }
            })
        }
        Cmd::CoverVerify { file, conjugate } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let data = covers::parse_cover(&text)?;
            let mut ok = report_cover("map", &data)?;
            if conjugate {
                ok &= report_cover("conjugate", &covers::conjugate_cover(&data)?)?;
            }
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn report_cover(tag: &str, data: &CoverData) -> Result<bool> {
    let ok = covers::verify_cover(&data.curve, &data.map)?;
    if !ok {
        out!("{}: rejected", tag);
        return Ok(false);
    }
    let deg = covers::map_degree(&data.curve, &data.map)?;
    let (a, b) = covers::pullback_differential(&data.curve, &data.map)?;
    let k = &data.curve.field;
    out!("{}: verified, degree {}, pullback ({})dx/y + ({})x dx/y", tag, deg, k.fmt_elem(&a), k.fmt_elem(&b));
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
