use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flagsym::abnormal::curve::{extract_flag_symbol, flat_curve, random_symplectic, ExtractError, JacobiCurve};
use flagsym::abnormal::{degeneracy_locus, goh_matrix, locus_checks, DegeneracyLocus};
use flagsym::abnormal::goh::jacobi_forms_vanish;
use flagsym::flag::{decompose_azp, flag_prolong};
use flagsym::lie::flat_model;
use flagsym::prolong::hankel::admissible_alphas;
use flagsym::prolong::{coordinate_vars, hankel_minor_space, secant_ideal, standard_prolong, verify_prolongation_theorems, VarietySampler};
use flagsym::symbol::{build_model_space, classify_finiteness, enumerate_symbols, parse_symbol, FlagSymbol, Finiteness};
use flagsym::tanaka::{killing_signature, prolong_symbol, TanakaError, DEFAULT_KMAX};

const SCHEMA: &str = "sp-1";

#[derive(Parser, Debug)]
#[command(name = "flagsym", version, about = "Symplectic flag symbols, prolongations and flat models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Symbol such as "D(2,3)+R(5/2)", or its JSON form.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Manifold dimension; with --rank it selects the symbol.
    #[arg(long, global = true)]
    n: Option<i64>,
    #[arg(long, global = true)]
    rank: Option<i64>,
    /// Degree cap; falls back to SP_KMAX, then 6.
    #[arg(long, global = true)]
    kmax: Option<usize>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse, classify or enumerate symbols.
    Symbol {
        #[command(subcommand)]
        action: SymbolAction,
    },
    /// Structure constants of the flat model.
    FlatModel,
    /// Flag, Tanaka or standard prolongation dimensions.
    Prolong {
        #[arg(value_enum)]
        kind: ProlongKind,
    },
    /// Compare prolongations with their polynomial realizations.
    Verify,
    /// Certified fixed-degree slice of a secant ideal of the rational normal curve.
    Secant {
        /// Degree of the rational normal curve.
        #[arg(long)]
        curve_degree: usize,
        /// Secant order: spans of order + 1 points.
        #[arg(long)]
        order: u32,
        /// Polynomial degree; defaults to order + 2.
        #[arg(long)]
        degree: Option<u32>,
        /// Use the j-th tangential developable instead of the curve.
        #[arg(long)]
        tangent: Option<usize>,
    },
    /// Goh matrix, degeneracy locus and locus identities of the flat model.
    Goh,
    /// Read the flag symbol of a curve of coisotropic subspaces.
    Extract {
        /// JSON file with "sigma", "case" and "columns".
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Print the flat curve of --spec (conjugated with --seed) as JSON instead.
        #[arg(long)]
        emit_curve: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SymbolAction {
    Parse,
    Classify,
    Enumerate,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ProlongKind {
    Flag,
    Tanaka,
    Standard,
}

/// A finished command: JSON payload, text rendering and exit status.
struct Report {
    payload: Value,
    text: String,
    failed: bool,
}

enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn k_max(g: &Global) -> Result<usize, Failure> {
    if let Some(k) = g.kmax {
        return Ok(k);
    }
    match std::env::var("SP_KMAX") {
        Ok(v) => Ok(v.trim().parse().with_context(|| format!("SP_KMAX={v:?} is not a nonnegative integer"))?),
        Err(_) => Ok(DEFAULT_KMAX),
    }
}

fn resolve_symbol(g: &Global) -> Result<FlagSymbol, Failure> {
    let sym = match (&g.spec, g.n, g.rank) {
        (Some(spec), _, _) => {
            if spec.trim_start().starts_with('{') {
                serde_json::from_str(spec).context("symbol JSON")?
            } else {
                parse_symbol(spec)?
            }
        }
        (None, Some(n), Some(rank)) => {
            let mut all = enumerate_symbols(rank, n)?;
            if all.len() != 1 {
                let names: Vec<String> = all.iter().map(|s| s.to_string()).collect();
                return Err(anyhow!("rank {rank}, n = {n} admits {}; pick one with --spec", names.join(", ")).into());
            }
            all.remove(0)
        }
        _ => return Err(anyhow!("need --spec, or --n together with --rank").into()),
    };
    if let Some(n) = g.n {
        let dim = flat_model(&sym).algebra.dim();
        if dim as i64 != n {
            return Err(anyhow!("{sym} lives on a manifold of dimension {dim}, not n = {n}").into());
        }
    }
    Ok(sym)
}

fn symbol_rows(sym: &FlagSymbol) -> Value {
    Value::Array(
        sym.rows()
            .iter()
            .map(|r| json!({"component": r.component, "kind": format!("{:?}", r.kind), "top": r.top.to_string(), "bottom": r.bottom.to_string()}))
            .collect(),
    )
}

fn cmd_symbol(g: &Global, action: &SymbolAction) -> Result<Report, Failure> {
    match action {
        SymbolAction::Parse => {
            let sym = resolve_symbol(g)?;
            let mut text = format!("symbol    {sym}\ndim       {}\nindex_set {}\n", sym.dim(), sym.index_set());
            for r in sym.rows() {
                writeln!(text, "row       {:?} {}..{}", r.kind, r.top, r.bottom).unwrap();
            }
            Ok(Report {
                payload: json!({
                    "symbol": sym.to_string(),
                    "json": sym,
                    "dim": sym.dim(),
                    "index_set": sym.index_set().to_string(),
                    "rows": symbol_rows(&sym),
                }),
                text,
                failed: false,
            })
        }
        SymbolAction::Classify => {
            let sym = resolve_symbol(g)?;
            let f = classify_finiteness(&sym);
            Ok(Report {
                payload: json!({"symbol": sym.to_string(), "finite": f == Finiteness::Finite, "verdict": f.to_string()}),
                text: format!("{f}\n"),
                failed: false,
            })
        }
        SymbolAction::Enumerate => {
            let (Some(n), Some(rank)) = (g.n, g.rank) else {
                return Err(anyhow!("enumerate needs --rank and --n").into());
            };
            let all = enumerate_symbols(rank, n)?;
            let mut text = String::new();
            let mut list = Vec::new();
            for s in &all {
                let f = classify_finiteness(s);
                writeln!(text, "{:<16} {f}", s.to_string()).unwrap();
                list.push(json!({"symbol": s.to_string(), "finite": f == Finiteness::Finite, "verdict": f.to_string()}));
            }
            Ok(Report {
                payload: json!({"rank": rank, "n": n, "symbols": list}),
                text,
                failed: false,
            })
        }
    }
}

fn cmd_flat_model(g: &Global) -> Result<Report, Failure> {
    let sym = resolve_symbol(g)?;
    let fm = flat_model(&sym);
    let a = &fm.algebra;
    let mut text = format!("flat model of {sym}, dim {}\n", a.dim());
    for (l, w) in a.labels.iter().zip(&a.weights) {
        writeln!(text, "  {l:<10} weight {w}").unwrap();
    }
    writeln!(text, "distribution {}", fm.distribution.iter().map(|&i| a.labels[i].as_str()).collect::<Vec<_>>().join(" ")).unwrap();
    for (i, j, k, c) in a.structure_constants() {
        writeln!(text, "  [{}, {}] -> {c} {}", a.labels[i], a.labels[j], a.labels[k]).unwrap();
    }
    let dist: Vec<&str> = fm.distribution.iter().map(|&i| a.labels[i].as_str()).collect();
    Ok(Report {
        payload: json!({"symbol": sym.to_string(), "algebra": a, "distribution": dist, "jacobi": a.check_jacobi().is_ok()}),
        text,
        failed: a.check_jacobi().is_err(),
    })
}

fn cmd_prolong(g: &Global, kind: ProlongKind) -> Result<Report, Failure> {
    let sym = resolve_symbol(g)?;
    let x = build_model_space(&sym);
    match kind {
        ProlongKind::Flag => {
            let fp = flag_prolong(&x);
            let mut text = format!("flag prolongation of {sym}\n");
            let mut pieces = Vec::new();
            for (d, p) in &fp.pieces {
                writeln!(text, "  degree {:>5}  dim {}", d.to_string(), p.dim()).unwrap();
                pieces.push(json!({"degree": d.to_string(), "dim": p.dim()}));
            }
            writeln!(text, "total_dim {}", fp.total_dim()).unwrap();
            Ok(Report {
                payload: json!({"symbol": sym.to_string(), "pieces": pieces, "total_dim": fp.total_dim()}),
                text,
                failed: false,
            })
        }
        ProlongKind::Tanaka => {
            let kmax = k_max(g)?;
            let tp = match prolong_symbol(&x, kmax) {
                Ok(tp) => tp,
                Err(TanakaError::CapReached(tp)) => *tp,
                Err(e) => return Err(Failure::Internal(e.into())),
            };
            let report = tp.report();
            let killing = if tp.terminated() {
                let alg = tp.assemble().map_err(|e| Failure::Internal(e.into()))?;
                Some(killing_signature(&alg))
            } else {
                None
            };
            let mut text = format!("tanaka prolongation of {sym} (k_max {kmax})\n");
            for d in report.negative.iter().chain(std::iter::once(&flagsym::tanaka::DegreeDim { k: 0, dim: report.g0_dim })).chain(&report.degrees) {
                writeln!(text, "  degree {:>3}  dim {}", d.k, d.dim).unwrap();
            }
            match report.termination_degree {
                Some(k) => writeln!(text, "terminated at degree {k}").unwrap(),
                None => writeln!(text, "not terminated by k_max {kmax}").unwrap(),
            }
            writeln!(text, "total_dim {}", report.total_dim).unwrap();
            if let Some(k) = killing {
                writeln!(text, "killing_rank {} (+{}, -{})", k.rank, k.positive, k.negative).unwrap();
            }
            Ok(Report {
                payload: json!({"symbol": sym.to_string(), "k_max": kmax, "report": report, "killing": killing, "total_dim": report.total_dim}),
                text,
                failed: false,
            })
        }
        ProlongKind::Standard => {
            let kmax = k_max(g)?;
            let azp = decompose_azp(&x);
            let vars = coordinate_vars(&x.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>());
            let mut text = format!("standard prolongations of p for {sym} (dim p = {})\n", azp.p.dim());
            let mut dims = Vec::new();
            for k in 1..=kmax {
                let d = standard_prolong(&x.sigma, &vars, &azp.p, k as u32).dim();
                writeln!(text, "  p^({k})  dim {d}").unwrap();
                dims.push(json!({"k": k, "dim": d}));
                if d == 0 {
                    break;
                }
            }
            Ok(Report {
                payload: json!({"symbol": sym.to_string(), "k_max": kmax, "p_dim": azp.p.dim(), "prolongations": dims}),
                text,
                failed: false,
            })
        }
    }
}

fn cmd_verify(g: &Global) -> Result<Report, Failure> {
    let sym = resolve_symbol(g)?;
    let kmax = k_max(g)?;
    let rep = verify_prolongation_theorems(&sym, kmax, g.seed).map_err(|e| Failure::Internal(e.into()))?;
    let mut text = format!("verify {sym} (k_max {kmax}, seed {})\n", g.seed);
    writeln!(text, "  {:>2} {:>5} {:>5} {:>5} {:>5}  ideals", "k", "u", "psi", "p", "l").unwrap();
    for r in &rep.rows {
        let ideals: Vec<String> = r.ideals.iter().map(|c| format!("{}={}{}", c.name, c.dim, if c.exact { "" } else { "(ub)" })).collect();
        writeln!(text, "  {:>2} {:>5} {:>5} {:>5} {:>5}  {}", r.k, r.u, r.psi, r.p, r.l, ideals.join(" ")).unwrap();
    }
    for t in &rep.theorems {
        let status = match t.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        writeln!(text, "{status} {}: {}", t.theorem, t.reason).unwrap();
        for f in &t.failures {
            writeln!(text, "     {f}").unwrap();
        }
    }
    let failed = !rep.passed();
    Ok(Report {
        payload: json!({"report": rep, "passed": !failed}),
        text,
        failed,
    })
}

fn cmd_secant(g: &Global, curve_degree: usize, order: u32, degree: Option<u32>, tangent: Option<usize>) -> Result<Report, Failure> {
    if curve_degree == 0 {
        return Err(anyhow!("--curve-degree must be positive").into());
    }
    let degree = degree.unwrap_or(order + 2);
    let base = VarietySampler::rational_normal_curve(curve_degree);
    let v = match tangent {
        Some(j) => base.tangential_developable(j),
        None => base,
    };
    let ideal = secant_ideal(&v, degree, order, g.seed).map_err(|e| Failure::Internal(e.into()))?;
    let mut text = format!(
        "degree-{degree} slice of the ideal of secant order {order} of {}\ndim {}  certificate {:?}  samples {}  seed {}\n",
        v.name,
        ideal.space.dim(),
        ideal.certificate,
        ideal.samples,
        ideal.seed
    );
    let mut hankel = Vec::new();
    let mut failed = false;
    // Hankel minors of size order + 2 live in degree order + 2 on the curve itself.
    if tangent.is_none() && degree == order + 2 && curve_degree >= 1 {
        let s = curve_degree as i64 - 1;
        for alpha in admissible_alphas(s, order as i64) {
            let minors = hankel_minor_space(s, order as i64, alpha).map_err(|e| Failure::Internal(e.into()))?;
            let inside = minors.is_subspace_of(&ideal.space);
            let equal = inside && minors.dim() == ideal.space.dim();
            failed |= !inside;
            writeln!(text, "hankel alpha {alpha}: dim {}  contained {inside}  equal {equal}", minors.dim()).unwrap();
            hankel.push(json!({"alpha": alpha, "dim": minors.dim(), "contained": inside, "equal": equal}));
        }
    }
    let polys: Vec<String> = ideal.space.basis.iter().map(|p| p.to_string()).collect();
    Ok(Report {
        payload: json!({
            "variety": v.name,
            "order": order,
            "degree": degree,
            "dim": ideal.space.dim(),
            "certificate": ideal.certificate,
            "samples": ideal.samples,
            "seed": ideal.seed,
            "basis": polys,
            "hankel": hankel,
        }),
        text,
        failed,
    })
}

fn cmd_goh(g: &Global) -> Result<Report, Failure> {
    let sym = resolve_symbol(g)?;
    let fm = flat_model(&sym);
    let gm = goh_matrix(&fm);
    let labels: Vec<&str> = gm.distribution.iter().map(|&i| fm.algebra.labels[i].as_str()).collect();
    let entries: Vec<Vec<String>> = gm.entries.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
    let mut text = format!("Goh matrix of {sym} on {}\n", labels.join(" "));
    for r in &entries {
        writeln!(text, "  [{}]", r.join(", ")).unwrap();
    }
    let locus = match degeneracy_locus(&fm) {
        DegeneracyLocus::AlwaysDegenerate { sub_pfaffians } => {
            let subs: Vec<String> = sub_pfaffians.iter().map(|p| p.to_string()).collect();
            writeln!(text, "odd rank: always degenerate; sub-Pfaffians {}", subs.join(", ")).unwrap();
            json!({"kind": "always_degenerate", "sub_pfaffians": subs})
        }
        DegeneracyLocus::Pfaffian { pfaffian, sub_pfaffians } => {
            let subs: Vec<Vec<String>> = sub_pfaffians.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
            writeln!(text, "pfaffian {pfaffian}").unwrap();
            json!({"kind": "pfaffian", "pfaffian": pfaffian.to_string(), "sub_pfaffians": subs})
        }
    };
    let checks = locus_checks(&fm);
    let jacobi = jacobi_forms_vanish(&fm);
    writeln!(text, "{} jacobi consistency of the Goh entries", if jacobi { "PASS" } else { "FAIL" }).unwrap();
    for c in &checks {
        writeln!(text, "{} {}: {}", if c.holds { "PASS" } else { "FAIL" }, c.name, c.statement).unwrap();
    }
    let failed = !jacobi || checks.iter().any(|c| !c.holds) || !gm.is_skew();
    Ok(Report {
        payload: json!({
            "symbol": sym.to_string(),
            "distribution": labels,
            "goh": entries,
            "degeneracy": locus,
            "jacobi_consistent": jacobi,
            "locus_checks": checks,
        }),
        text,
        failed,
    })
}

fn cmd_extract(g: &Global, curve: &Option<PathBuf>, emit: bool) -> Result<Report, Failure> {
    let j: JacobiCurve = match curve {
        Some(path) => {
            if g.spec.is_some() {
                return Err(anyhow!("give either --curve or --spec").into());
            }
            let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?
        }
        None => {
            let sym = resolve_symbol(g)?;
            let j = flat_curve(&build_model_space(&sym)).jacobi_curve();
            let gm = random_symplectic(&j.sigma, g.seed, 3);
            j.conjugate(&gm)
        }
    };
    if emit {
        let text = serde_json::to_string_pretty(&j)?;
        let mut payload = serde_json::to_value(&j)?;
        payload["schema"] = json!(SCHEMA);
        return Ok(Report {
            payload,
            text: text + "\n",
            failed: false,
        });
    }
    match extract_flag_symbol(&j) {
        Ok(sym) => Ok(Report {
            payload: json!({"symbol": sym.to_string(), "json": sym}),
            text: format!("{sym}\n"),
            failed: false,
        }),
        Err(ExtractError::Shape(m)) => Err(anyhow!("curve data: {m}").into()),
        Err(e) => Ok(Report {
            payload: json!({"error": e.to_string()}),
            text: format!("extraction failed: {e}\n"),
            failed: true,
        }),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Symbol { action } => cmd_symbol(g, action),
        Command::FlatModel => cmd_flat_model(g),
        Command::Prolong { kind } => cmd_prolong(g, *kind),
        Command::Verify => cmd_verify(g),
        Command::Secant { curve_degree, order, degree, tangent } => cmd_secant(g, *curve_degree, *order, *degree, *tangent),
        Command::Goh => cmd_goh(g),
        Command::Extract { curve, emit_curve } => cmd_extract(g, curve, *emit_curve),
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Symbol { action } => format!("symbol {}", format!("{action:?}").to_lowercase()),
        Command::FlatModel => "flat-model".into(),
        Command::Prolong { kind } => format!("prolong {}", format!("{kind:?}").to_lowercase()),
        Command::Verify => "verify".into(),
        Command::Secant { .. } => "secant".into(),
        Command::Goh => "goh".into(),
        Command::Extract { .. } => "extract".into(),
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
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal failure: {e:#}");
            return ExitCode::from(2);
        }
    };
    let body = if cli.global.json {
        let mut payload = report.payload;
        if let Value::Object(m) = &mut payload {
            m.insert("schema".into(), json!(SCHEMA));
            m.entry("command").or_insert(json!(command_name(&cli.command)));
        }
        serde_json::to_string_pretty(&payload).expect("JSON values serialize") + "\n"
    } else {
        report.text
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(if report.failed { 2 } else { 0 })
}
