//! `regrich` command line.

use crate::config::ToleranceConfig;
use crate::constraints::{classify, good_match, rich_pair_shortcut, ClassKind};
use crate::error::{Error, Result};
use crate::io;
use crate::linalg::{identity, krylov_reach_detailed};
use crate::richness::{conspicuous_poor_check, is_rich, is_rich_exact, lambda_space_detailed, real_status, regularity_rank};
use crate::rigidity::rigidity_report;
use crate::scanner::scan;
use crate::schubert::{cup_nonzero, diagram_from_jumps, min_area_partner, RankTable, YoungDiagram};
use crate::spectral::analyze;
use crate::transitivity::{is_transitive_with_exact, TransitivityVerdict, VerdictKind};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "regrich", version, about = "Richness and rigidity of projective control data")]
struct Cli {
    /// Relative rank tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Read rational entries and use exact arithmetic where available.
    #[arg(long, global = true)]
    exact: bool,
    /// Also write the full result as JSON to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Exit 3 when the only verdicts are inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Is the datum rich (Λ transitive)?
    Rich {
        #[arg(long)]
        datum: PathBuf,
    },
    /// dim(Λ_N · A^N x0) − 1.
    Rank {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        x0: PathBuf,
        #[arg(long = "N")]
        n: usize,
    },
    /// Spectral data, rectangles and the rig₊ bound.
    Rigidity {
        #[arg(long)]
        matrix: PathBuf,
        /// Construct and verify a witness.
        #[arg(long)]
        witness: bool,
    },
    /// Elementary constraints of A; with B, the good-match test.
    Classify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long = "with-B")]
        with_b: Option<PathBuf>,
    },
    /// Transitivity of a matrix space.
    Transitive {
        #[arg(long)]
        space: PathBuf,
    },
    /// Grid scan of a parameterized system for singular constant inputs.
    Scan {
        #[arg(long)]
        system: PathBuf,
        /// Points per axis, one value or comma-separated per axis.
        #[arg(long, value_delimiter = ',', default_value = "101")]
        grid: Vec<usize>,
    },
    /// Young diagram utilities.
    Schubert {
        #[command(subcommand)]
        op: SchubertOp,
    },
}

#[derive(Args, Debug)]
struct Rect {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    from: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SchubertOp {
    /// Young diagram from jumping numbers.
    Jumps {
        #[command(flatten)]
        rect: Rect,
        #[arg(long, value_delimiter = ',')]
        jumps: Option<Vec<usize>>,
    },
    /// Prints NONZERO or ZERO for λ ⌣ μ.
    Cup {
        #[command(flatten)]
        rect: Rect,
        #[arg(long, value_delimiter = ',')]
        l: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<usize>>,
    },
    /// Least-area μ with λ ⌣ μ = 0.
    Minpartner {
        #[command(flatten)]
        rect: Rect,
        #[arg(long, value_delimiter = ',')]
        l: Option<Vec<usize>>,
    },
}

struct Outcome {
    text: String,
    json: Value,
    inconclusive: bool,
}

impl Outcome {
    fn new(text: String, json: Value) -> Self {
        Outcome { text, json, inconclusive: false }
    }
}

fn kind_str(k: VerdictKind) -> &'static str {
    match k {
        VerdictKind::Transitive => "Transitive",
        VerdictKind::NotTransitive => "NotTransitive",
        VerdictKind::Inconclusive => "Inconclusive",
    }
}

fn verdict_json(v: &TransitivityVerdict) -> Value {
    json!({
        "kind": kind_str(v.kind),
        "margin": v.margin,
        "certificate": v.certificate.map(|c| format!("{:?}", c)),
        "witness": v.witness.as_ref().map(|w| json!({
            "v": io::vector_value(&w.v),
            "w": io::vector_value(&w.w),
            "residual": w.residual,
        })),
    })
}

fn cfg_from(cli: &Cli) -> Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol {
        cfg = cfg.with_rank_tol(t);
    }
    if let Some(s) = cli.seed {
        cfg = cfg.with_seed(s);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn rich(cli: &Cli, path: &PathBuf, cfg: &ToleranceConfig) -> Result<Outcome> {
    let (verdict, lambda_dim, real) = if cli.exact {
        let (a, b) = io::load_exact_datum(path)?;
        let v = is_rich_exact(&a, &b, cfg)?;
        let mut seeds = vec![identity(a.rows)];
        seeds.extend(b.iter().map(|m| m.to_complex()));
        let h = crate::linalg::adjoint_operator(&a.to_complex(), cfg)?;
        let dim = krylov_reach_detailed(&h, &seeds, None, cfg)?.space.dim();
        (v, dim, None)
    } else {
        let datum = io::load_datum(path, cfg)?;
        let v = is_rich(&datum, cfg)?;
        let dim = lambda_space_detailed(&datum, None, cfg)?.space.dim();
        let real = real_status(&datum, &v);
        let line = match v.kind {
            VerdictKind::NotTransitive if v.certificate == Some(crate::transitivity::Certificate::Conspicuous) => {
                let c = conspicuous_poor_check(&datum, cfg)?.ok_or_else(|| Error::Format("missing eigenbasis".into()))?;
                let (i, j) = c.positions[0];
                let p = if (&c.p - identity(datum.d())).norm() <= 1e-12 { "Id" } else { "eigenbasis" };
                Some(format!("POOR (conspicuous: P={}, zero at ({},{}))", p, i + 1, j + 1))
            }
            _ => None,
        };
        let mut out = finish_rich(&v, dim, Some(format!("{:?}", real)), line);
        if let Some(c) = conspicuous_poor_check(&datum, cfg)? {
            out.json["conspicuous_positions"] = json!(c.positions.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>());
        }
        return Ok(out);
    };
    Ok(finish_rich(&verdict, lambda_dim, real, None))
}

fn finish_rich(v: &TransitivityVerdict, dim: usize, real: Option<String>, line: Option<String>) -> Outcome {
    let head = line.unwrap_or_else(|| match v.kind {
        VerdictKind::Transitive => format!("RICH (certificate: {:?}, margin {:.3e})", v.certificate, v.margin),
        VerdictKind::NotTransitive => format!(
            "POOR (witness residual {:.3e})",
            v.witness.as_ref().map_or(0.0, |w| w.residual)
        ),
        VerdictKind::Inconclusive => format!("INCONCLUSIVE (margin {:.3e})", v.margin),
    });
    let text = format!("{}\ndim Lambda = {}", head, dim);
    let json = json!({ "verdict": verdict_json(v), "lambda_dim": dim, "real_status": real });
    Outcome { text, json, inconclusive: v.kind == VerdictKind::Inconclusive }
}

fn rigidity(matrix: &PathBuf, witness: bool, cfg: &ToleranceConfig) -> Result<Outcome> {
    let a = io::load_matrix(matrix)?;
    let sd = analyze(&a, cfg)?;
    let rep = rigidity_report(&a, witness, cfg)?;
    let mut t = String::new();
    t.push_str("jordan type:\n");
    for (l, sizes) in sd.jt.eigenvalues.iter().zip(&sd.jt.block_sizes) {
        t.push_str(&format!("  {:.6}{:+.6}i  blocks {:?}\n", l.re, l.im, sizes));
    }
    t.push_str(&format!("c = {}\npop1 = acyc = {}\nrig+ <= {}\n", rep.c, rep.acyc, rep.upper_bound));
    t.push_str("j-rectangles (row block, col block, banner, weight, latitude):\n");
    for j in &sd.rects.j_rectangles {
        let b = sd.rects.e_rectangles[j.e_rect].banner;
        t.push_str(&format!(
            "  {} {} {:.6}{:+.6}i {} {}\n",
            j.row_block, j.col_block, b.re, b.im, j.weight, j.latitude
        ));
    }
    let wjson = rep.witness.as_ref().map(|w| w.iter().map(io::matrix_value).collect::<Vec<_>>());
    if let Some(w) = &rep.witness {
        t.push_str(&format!("witness: length {}, verified", w.len()));
    }
    let json = json!({
        "jordan_type": sd.jt,
        "c": rep.c,
        "acyc": rep.acyc,
        "upper_bound": rep.upper_bound,
        "rectangles": sd.rects,
        "witness": wjson,
    });
    Ok(Outcome::new(t.trim_end().to_string(), json))
}

fn classify_cmd(matrix: &PathBuf, with_b: Option<&PathBuf>, cfg: &ToleranceConfig) -> Result<Outcome> {
    let a = io::load_matrix(matrix)?;
    let cl = classify(&a, cfg)?;
    let kind = match cl.kind {
        ClassKind::Unconstrained => "UNCONSTRAINED".to_string(),
        ClassKind::IConstrained(t) => format!("I-CONSTRAINED (type {})", t),
        ClassKind::Multiconstrained => "MULTICONSTRAINED".to_string(),
    };
    let mut t = kind;
    for c in &cl.constraints {
        let idx: Vec<usize> = c.indices.iter().map(|i| i + 1).collect();
        t.push_str(&format!("\n  type {} at {:?}", c.ctype, idx));
    }
    if cl.derogatory {
        t.push_str("\n  derogatory");
    }
    let mut json = json!({ "classification": cl });
    if let Some(bp) = with_b {
        let b = io::load_matrix(bp)?;
        match good_match(&a, &b, cfg) {
            Ok(g) => {
                let s = rich_pair_shortcut(&a, &b, cfg)?;
                t.push_str(&format!("\ngood match: {}", g));
                if let Some(r) = s {
                    t.push_str(&format!("\nrich pair: {}", r));
                }
                json["good_match"] = json!(g);
                json["rich_pair"] = json!(s);
            }
            Err(Error::UnsupportedClass(msg)) => {
                t.push_str(&format!("\ngood match: not applicable ({})", msg));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::new(t, json))
}

fn transitive(cli: &Cli, path: &PathBuf, cfg: &ToleranceConfig) -> Result<Outcome> {
    let space = io::load_space(path, cfg)?;
    let exact = if cli.exact { Some(io::load_exact_space(path)?) } else { None };
    let v = is_transitive_with_exact(&space, exact.as_deref(), cfg);
    let mut t = format!("{}\nmargin {:.3e}", kind_str(v.kind), v.margin);
    if let Some(c) = v.certificate {
        t.push_str(&format!("\ncertificate {:?}", c));
    }
    if let Some(w) = &v.witness {
        t.push_str(&format!("\nwitness residual {:.3e}\n  v = {:?}\n  w = {:?}", w.residual, io::vector_value(&w.v), io::vector_value(&w.w)));
    }
    let mut out = Outcome::new(t, json!({ "dim": space.dim(), "verdict": verdict_json(&v) }));
    out.inconclusive = v.kind == VerdictKind::Inconclusive;
    Ok(out)
}

fn scan_cmd(system: &PathBuf, grid: &[usize], cfg: &ToleranceConfig) -> Result<Outcome> {
    let sys = io::load_system(system)?;
    let rep = scan(&sys, grid, cfg)?;
    let mut t = format!(
        "grid points {}\npoor grid points {}\nroots {}",
        rep.grid_points,
        rep.poor_candidates.len(),
        rep.refined_roots.len()
    );
    for r in &rep.refined_roots {
        t.push_str(&format!(
            "\n  u* = {:?}  corank {}  direction {:?}  ({})",
            r.u, r.corank, r.failing_direction, r.certificate
        ));
    }
    for w in &rep.warnings {
        t.push_str(&format!("\nwarning: {}", w));
    }
    Ok(Outcome::new(t, serde_json::to_value(&rep)?))
}

fn rect_args(r: &Rect) -> Result<(usize, usize, Value)> {
    let file = match &r.from {
        Some(p) => io::read_json(p)?,
        None => json!({}),
    };
    let get = |flag: Option<usize>, key: &str| -> Result<usize> {
        flag.or_else(|| file.get(key).and_then(Value::as_u64).map(|x| x as usize))
            .ok_or_else(|| Error::Format(format!("missing --{}", key)))
    };
    Ok((get(r.k, "k")?, get(r.n, "n")?, file))
}

fn list_arg(flag: &Option<Vec<usize>>, file: &Value, key: &str) -> Result<Vec<usize>> {
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    match file.get(key) {
        Some(v) => Ok(serde_json::from_value(v.clone())?),
        None => Err(Error::Format(format!("missing --{}", key))),
    }
}

fn schubert_cmd(op: &SchubertOp) -> Result<Outcome> {
    match op {
        SchubertOp::Jumps { rect, jumps } => {
            let (k, n, f) = rect_args(rect)?;
            let rt = RankTable::new(k, n, list_arg(jumps, &f, "jumps")?)?;
            let y = diagram_from_jumps(&rt)?;
            Ok(Outcome::new(format!("{:?}", y.rows), json!({ "diagram": y, "area": y.area() })))
        }
        SchubertOp::Cup { rect, l, m } => {
            let (k, n, f) = rect_args(rect)?;
            let l = YoungDiagram::new(k, n, list_arg(l, &f, "l")?)?;
            let m = YoungDiagram::new(k, n, list_arg(m, &f, "m")?)?;
            let nz = cup_nonzero(&l, &m)?;
            Ok(Outcome::new(if nz { "NONZERO" } else { "ZERO" }.into(), json!({ "nonzero": nz })))
        }
        SchubertOp::Minpartner { rect, l } => {
            let (k, n, f) = rect_args(rect)?;
            let l = YoungDiagram::new(k, n, list_arg(l, &f, "l")?)?;
            Ok(match min_area_partner(&l) {
                Some((m, a)) => Outcome::new(format!("{:?} area {}", m.rows, a), json!({ "partner": m, "area": a })),
                None => Outcome::new("none (empty diagram)".into(), json!({ "partner": null })),
            })
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let cfg = cfg_from(cli)?;
    match &cli.cmd {
        Cmd::Rich { datum } => rich(cli, datum, &cfg),
        Cmd::Rank { datum, x0, n } => {
            let d = io::load_datum(datum, &cfg)?;
            let x = io::load_vector(x0)?;
            let r = regularity_rank(&d, &x, *n, &cfg)?;
            Ok(Outcome::new(format!("rank {}", r), json!({ "rank": r, "N": n })))
        }
        Cmd::Rigidity { matrix, witness } => rigidity(matrix, *witness, &cfg),
        Cmd::Classify { matrix, with_b } => classify_cmd(matrix, with_b.as_ref(), &cfg),
        Cmd::Transitive { space } => transitive(cli, space, &cfg),
        Cmd::Scan { system, grid } => scan_cmd(system, grid, &cfg),
        Cmd::Schubert { op } => schubert_cmd(op),
    }
}

fn is_input_error(e: &Error) -> bool {
    !matches!(e, Error::Construction { .. } | Error::UnsupportedClass(_) | Error::Ordering(_))
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{}", text) } else { write!(err, "{}", text) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            if let Some(p) = &cli.json_out {
                let body = serde_json::to_string_pretty(&o.json).unwrap_or_default();
                if let Err(e) = std::fs::write(p, body + "\n") {
                    let _ = writeln!(err, "error: cannot write {}: {}", p.display(), e);
                    return 2;
                }
            }
            if cli.strict && o.inconclusive {
                3
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            if is_input_error(&e) {
                2
            } else {
                1
            }
        }
    }
}
