use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::{anyhow, bail, Context as _, Result};
use genpres_core::bohr::{BohrChecker, BohrParams};
use genpres_core::fo::{Record, Summary};
use genpres_core::genpoly::{bohr_expr, check, eval, parse, theorem_a_expr, Context, GenPolyError, TheoremA, Value};
use genpres_core::numeric::AlgebraicReal;
use genpres_core::presets::{cube_root_two, sqrt_two};
use genpres_core::search::{
    calibrate_c, continued_fraction, equidist_check, find_lemma32_witness, find_progression_base, find_small_norm,
    find_weyl_witness, SearchBudget, SearchError, Strategy, WeylTarget,
};
use genpres_core::suite::{section_id, Suite, SuiteConfig, SECTIONS};
use genpres_core::weakmult::{
    build_q, check_solvability, compile_solvability, harness as wm_h, IntPolynomial, QSet, Solvability,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::config::{apply_override, apply_overrides, parse_rational, SessionConfig};
use crate::{BohrCmd, Cli, Command, Global, QuadBuild, QuadCmd, SearchCmd, SeqKind, StrategyArg, VerifyArgs};

/// Samples used when `search lemma32` calibrates C itself.
const CALIBRATION_SAMPLES: usize = 10_000;

struct Session {
    global: Global,
    file: SessionConfig,
}

impl Session {
    fn seed(&self) -> Option<u64> {
        self.global.seed.or(self.file.seed)
    }

    fn threads(&self) -> usize {
        self.global.threads.or(self.file.threads).unwrap_or(1)
    }

    fn out(&self) -> Result<Box<dyn Write>> {
        Ok(match self.global.out.as_ref().or(self.file.out.as_ref()) {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(std::io::stdout().lock())),
        })
    }

    /// Check configuration: defaults or `quick`, then file overrides, then the seed.
    fn suite_config(&self, quick: bool) -> Result<SuiteConfig> {
        let mut cfg = if quick { SuiteConfig::quick() } else { SuiteConfig::default() };
        apply_overrides(&mut cfg, &self.file.overrides)?;
        if let Some(s) = self.seed() {
            cfg.seed = s;
        }
        Ok(cfg)
    }

    /// Declared constants, or the reference constants of `kind` if none are declared.
    fn context(&self, kind: SeqKind) -> Result<Context> {
        if !self.file.constants.is_empty() {
            return self.file.context();
        }
        let (f, second, value) = match kind {
            SeqKind::Generalised => (cube_root_two(), "beta", BigRational::from_integer(1.into())),
            SeqKind::Bohr => (sqrt_two(), "rho", BigRational::new(1.into(), 5.into())),
        };
        let mut ctx = Context::new(f.clone());
        ctx.bind("alpha", AlgebraicReal::theta(&f))?;
        ctx.bind_rational(second, value);
        Ok(ctx)
    }

    fn theorem_a(&self) -> Result<TheoremA> {
        let ctx = self.context(SeqKind::Generalised)?;
        let get = |n: &str| ctx.get(n).cloned().ok_or_else(|| anyhow!("constant `{n}` is not declared"));
        Ok(TheoremA::new(&get("alpha")?, &get("beta")?)?)
    }

    fn bohr(&self, cfg: &SuiteConfig) -> Result<BohrChecker> {
        let ctx = self.context(SeqKind::Bohr)?;
        let alpha = ctx.get("alpha").cloned().ok_or_else(|| anyhow!("constant `alpha` is not declared"))?;
        let rho = ctx
            .get("rho")
            .and_then(AlgebraicReal::as_rational)
            .ok_or_else(|| anyhow!("constant `rho` must be declared as a rational"))?;
        Ok(BohrChecker::new(BohrParams::new(alpha, rho)?, cfg.bohr_bounds.clone())?)
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    let file = match &cli.global.config {
        Some(p) => SessionConfig::load(p)?,
        None => SessionConfig::default(),
    };
    let s = Session { global: cli.global, file };
    match cli.command {
        Command::Eval { expr, n } => cmd_eval(&s, &expr, &n),
        Command::Table { n, kind } => cmd_table(&s, &n, kind),
        Command::Search(c) => cmd_search(&s, c),
        Command::Quadruples(c) => cmd_quadruples(&s, c),
        Command::Compile { poly, check, m_bound, y_bound, z_bound } => {
            cmd_compile(&s, &poly, check, [m_bound, y_bound, z_bound])
        }
        Command::Verify(a) => cmd_verify(&s, &a),
        Command::Equidist { alpha, a, b, c, d, orbit, samples, grid, hist } => {
            cmd_equidist(&s, &alpha, (a, b, c, d), orbit, samples, grid, hist)
        }
        Command::Bohr(c) => cmd_bohr(&s, c),
    }
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<(i64, i64)> {
    let bad = || anyhow!("range must be `a..b` or an integer, found `{text}`");
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        bail!("empty range `{text}`");
    }
    Ok((a, b))
}

// Variant name of an error, e.g. `UnknownConstant`.
fn kind_name(e: &impl std::fmt::Debug) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

// The expression with a caret under byte `pos`.
fn caret(text: &str, pos: usize) -> String {
    let col = text.get(..pos.min(text.len())).map_or(pos, |s| s.chars().count());
    format!("  {text}\n  {}^", " ".repeat(col))
}

fn expr_error(text: &str, e: GenPolyError) -> anyhow::Error {
    let pos = match &e {
        GenPolyError::Syntax { pos, .. } | GenPolyError::UnknownConstant { pos, .. } => Some(*pos),
        _ => None,
    };
    let mut msg = format!("{}: {e}", kind_name(&e));
    if let Some(p) = pos {
        msg = format!("{msg}\n{}", caret(text, p));
    }
    anyhow!(msg)
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Real(r) => format!("{r}\t{:.15}", r.to_f64()),
    }
}

fn cmd_eval(s: &Session, text: &str, range: &str) -> Result<u8> {
    let (lo, hi) = parse_range(range)?;
    let ctx = s.context(SeqKind::Generalised)?;
    let e = parse(text).map_err(|e| expr_error(text, e))?;
    check(&e, &ctx).map_err(|e| expr_error(text, e))?;
    let mut out = s.out()?;
    for n in lo..=hi {
        let v = eval(&e, &ctx, &BigInt::from(n)).map_err(|e| expr_error(text, e))?;
        writeln!(out, "{n}\t{}", format_value(&v))?;
    }
    out.flush()?;
    Ok(0)
}

fn cmd_table(s: &Session, range: &str, kind: SeqKind) -> Result<u8> {
    let (lo, hi) = parse_range(range)?;
    let ctx = s.context(kind)?;
    let g = match kind {
        SeqKind::Generalised => theorem_a_expr("alpha", "beta"),
        SeqKind::Bohr => bohr_expr("alpha", "rho"),
    };
    let inner = parse(if kind == SeqKind::Bohr { "frac(alpha*n*n)" } else { "nint(alpha*n)" })?;
    check(&g, &ctx)?;
    let mut out = s.out()?;
    let head = if kind == SeqKind::Bohr { "frac(alpha*n^2)" } else { "nint(alpha*n)" };
    writeln!(out, "n\t{head}\tg(n)")?;
    for n in lo..=hi {
        let n_big = BigInt::from(n);
        let a = eval(&inner, &ctx, &n_big)?;
        let shown = match &a {
            Value::Int(i) => i.to_string(),
            Value::Real(r) => format!("{:.6}", r.to_f64()),
        };
        writeln!(out, "{n}\t{shown}\t{}", format_value(&eval(&g, &ctx, &n_big)?))?;
    }
    out.flush()?;
    Ok(0)
}

/// Exact value of a constant expression (evaluated at n = 0).
fn constant(ctx: &Context, text: &str) -> Result<AlgebraicReal> {
    let e = parse(text).map_err(|e| expr_error(text, e))?;
    check(&e, ctx).map_err(|e| expr_error(text, e))?;
    Ok(match eval(&e, ctx, &BigInt::from(0)).map_err(|e| expr_error(text, e))? {
        Value::Int(i) => AlgebraicReal::from_int(ctx.field(), i),
        Value::Real(r) => r,
    })
}

fn budget(max: u64, s: StrategyArg) -> SearchBudget {
    let strategy = match s {
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::Hybrid => Strategy::Hybrid,
        StrategyArg::Convergents => Strategy::ConvergentMultiples,
    };
    SearchBudget::new(max, strategy)
}

fn not_found(e: SearchError) -> Result<serde_json::Value> {
    match e {
        SearchError::NotFoundWithinBudget => Ok(json!({ "result": "not-found-within-budget" })),
        other => Err(other.into()),
    }
}

fn cmd_search(s: &Session, c: SearchCmd) -> Result<u8> {
    let line = match c {
        SearchCmd::Cf { expr, terms } => {
            let x = constant(&s.context(SeqKind::Generalised)?, &expr)?;
            let e = continued_fraction(&x, terms)?;
            let q: Vec<String> = e.quotients.iter().map(BigInt::to_string).collect();
            json!({ "expr": expr, "quotients": q, "terminated": e.terminated })
        }
        SearchCmd::SmallNorm { expr, eps, budget: max, strategy } => {
            let x = constant(&s.context(SeqKind::Generalised)?, &expr)?;
            let eps = parse_rational(&eps)?;
            match find_small_norm(&x, &eps, &budget(max, strategy)) {
                Ok(w) => {
                    let achieved: BTreeMap<_, _> = w.achieved.iter().map(|(k, v)| (k.clone(), v.to_f64())).collect();
                    json!({ "result": "found", "m": w.m, "achieved": achieved })
                }
                Err(e) => not_found(e)?,
            }
        }
        SearchCmd::Progression { r, budget: max } => {
            let g = s.theorem_a()?;
            match find_progression_base(r, &g, &SearchBudget::hybrid(max)) {
                Ok(w) => {
                    let achieved: BTreeMap<_, _> = w.achieved.iter().map(|(k, v)| (k.clone(), v.to_f64())).collect();
                    json!({ "result": "found", "r": r, "m": w.m, "achieved": achieved })
                }
                Err(e) => not_found(e)?,
            }
        }
        SearchCmd::Lemma32 { n0, n1, c, budget: max } => {
            let g = s.theorem_a()?;
            let c = match c {
                Some(c) => c,
                None => calibrate_c(&g, CALIBRATION_SAMPLES, s.seed().unwrap_or(genpres_core::search::DEFAULT_SEED))?.c,
            };
            match find_lemma32_witness(&g, n0, n1, c, &SearchBudget::exhaustive(max)) {
                Ok(n2) => json!({ "result": "found", "n0": n0, "n1": n1, "c": c, "n2": n2 }),
                Err(e) => not_found(e)?,
            }
        }
        SearchCmd::Weyl { targets, start, budget: max } => {
            let ctx = s.context(SeqKind::Generalised)?;
            let ts = targets.iter().map(|t| weyl_target(&ctx, t)).collect::<Result<Vec<_>>>()?;
            match find_weyl_witness(&ts, start, &SearchBudget::exhaustive(max)) {
                Ok(n) => json!({ "result": "found", "n": n }),
                Err(e) => not_found(e)?,
            }
        }
    };
    let mut out = s.out()?;
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(0)
}

fn weyl_target(ctx: &Context, spec: &str) -> Result<WeylTarget> {
    let mut parts = spec.rsplitn(3, ':');
    let (hi, lo, expr) = match (parts.next(), parts.next(), parts.next()) {
        (Some(h), Some(l), Some(e)) => (h, l, e),
        _ => bail!("target must be `EXPR:lo:hi`, found `{spec}`"),
    };
    let e = parse(expr).map_err(|e| expr_error(expr, e))?;
    Ok(WeylTarget::from_expr(&e, ctx, parse_rational(lo)?, parse_rational(hi)?)?)
}

fn build(s: &Session, b: &QuadBuild) -> Result<QSet> {
    let suite = Suite::new(s.suite_config(false)?)?;
    let q = build_q(&*suite.checker()?, b.m_max, b.h_factor)?;
    Ok(if b.pm { q.close_pm() } else { q })
}

fn emit(s: &Session, records: &[Record]) -> Result<Summary> {
    let mut out = s.out()?;
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()?;
    Ok(Summary::of(records))
}

fn report_summary(sum: &Summary) -> u8 {
    eprintln!(
        "summary: {} instances, {} pass, {} violations, {} excluded",
        sum.instances, sum.pass, sum.violations, sum.excluded
    );
    u8::from(sum.violations > 0)
}

fn cmd_quadruples(s: &Session, c: QuadCmd) -> Result<u8> {
    match c {
        QuadCmd::Build(b) => {
            let q = build(s, &b)?;
            eprintln!("Q: {} quadruples", q.len());
            Ok(report_summary(&emit(s, &[wm_h::q1(&q)])?))
        }
        QuadCmd::Export(b) => {
            let q = build(s, &b)?;
            let mut out = s.out()?;
            out.write_all(q.to_csv().as_bytes())?;
            out.flush()?;
            eprintln!("Q: {} quadruples", q.len());
            Ok(0)
        }
        QuadCmd::Import { path, q2_k_max } => {
            let q = read_q(&path)?;
            let recs = [wm_h::q1(&q), wm_h::q1_closure(&q), wm_h::q2(&q, q2_k_max)];
            Ok(report_summary(&emit(s, &recs)?))
        }
    }
}

fn read_q(path: &std::path::Path) -> Result<QSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(QSet::from_csv(&text)?)
}

fn cmd_compile(s: &Session, text: &str, run_check: bool, caps: [Option<i128>; 3]) -> Result<u8> {
    let p = IntPolynomial::parse(text, None)?;
    let cfg = s.suite_config(false)?;
    let mut b = cfg.compile_bounds;
    let [m, y, z] = caps;
    b.m_bound = m.unwrap_or(b.m_bound);
    b.y_bound = y.unwrap_or(b.y_bound);
    b.z_bound = z.unwrap_or(b.z_bound);
    let compiled = compile_solvability(&p, &b);
    let mut out = s.out()?;
    writeln!(out, "{}", compiled.sentence)?;
    if run_check {
        let q = Suite::new(cfg)?.compile_q()?;
        match check_solvability(&p, q, &b)? {
            Solvability::Found { m, y, n, verified } => {
                let xs: Vec<String> = n.iter().enumerate().map(|(i, v)| format!("x{} = {v}", i + 1)).collect();
                let check = if verified { "p(x) = 0 checked" } else { "p(x) = 0 NOT confirmed" };
                writeln!(out, "witness: {} (m = {m}, y = {y:?}; {check})", xs.join(", "))?;
            }
            Solvability::NotFound => writeln!(out, "no witness within bounds")?,
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_verify(s: &Session, a: &VerifyArgs) -> Result<u8> {
    let mut cfg = s.suite_config(a.quick)?;
    let ids: Vec<&'static str> = if a.id == "all" {
        SECTIONS.to_vec()
    } else {
        vec![section_id(&a.id).ok_or_else(|| anyhow!("unknown lemma id `{}`", a.id))?]
    };
    apply_shortcuts(&mut cfg, &ids, a)?;
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("--set expects KEY=VALUE, found `{kv}`"))?;
        apply_override(&mut cfg, k.trim(), v.trim())?;
    }
    let records = match &a.from {
        Some(path) => {
            let q = read_q(path)?;
            match ids[..] {
                ["Q1"] => vec![wm_h::q1(&q), wm_h::q1_closure(&q)],
                ["Q2"] => vec![wm_h::q2(&q, cfg.q2_k_max)],
                _ => bail!("--from applies to Q1 and Q2 only"),
            }
        }
        None => {
            let suite = Suite::new(cfg)?;
            suite.run_sections(&ids, s.global.timing, s.threads())?
        }
    };
    let sum = emit(s, &records)?;
    if s.global.verbose {
        let mut per: BTreeMap<&str, Vec<Record>> = BTreeMap::new();
        for r in &records {
            per.entry(r.lemma.as_str()).or_default().push(r.clone());
        }
        for (lemma, rs) in per {
            let t = Summary::of(&rs);
            eprintln!("{lemma}: {} pass, {} violations, {} excluded", t.pass, t.violations, t.excluded);
        }
    }
    Ok(report_summary(&sum))
}

/// `--m-max`, `--h-factor` and `--max` for a single section.
fn apply_shortcuts(cfg: &mut SuiteConfig, ids: &[&str], a: &VerifyArgs) -> Result<()> {
    let given = a.m_max.is_some() || a.h_factor.is_some() || a.max.is_some();
    let [id] = ids else {
        if given {
            bail!("--m-max, --h-factor and --max need a single lemma id; use --set with `all`");
        }
        return Ok(());
    };
    let unsupported = |flag: &str| anyhow!("{flag} does not apply to {id}; use --set");
    if let Some(v) = a.m_max {
        match *id {
            "2.2" => cfg.lemma22_m_max = v,
            "3.3" => cfg.lemma33_m_max = v,
            "3.7" => cfg.lemma37_m_max = v,
            "Q1" | "Q2" | "Q" => {
                cfg.q_m_max = v;
                cfg.q_closed_m_max = v;
            }
            "4.1" => cfg.bohr41_m_max = v,
            "4.2" => cfg.bohr42_m_max = v,
            "4.3" => cfg.bohr43_m_max = v,
            _ => return Err(unsupported("--m-max")),
        }
    }
    if let Some(v) = a.h_factor {
        match *id {
            "3.7" => cfg.lemma37_h_factor = v,
            "Q1" | "Q2" | "Q" => cfg.q_h_factor = v,
            _ => return Err(unsupported("--h-factor")),
        }
    }
    if let Some(v) = a.max {
        match *id {
            "4.5" => cfg.bohr45_max = v,
            "3.5/3.6" => cfg.ell_k_max = v,
            _ => return Err(unsupported("--max")),
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_equidist(
    s: &Session,
    alpha: &str,
    (a, b, c, d): (i64, i64, i64, i64),
    orbit: u64,
    samples: u64,
    grid: usize,
    hist: bool,
) -> Result<u8> {
    let x = constant(&s.context(SeqKind::Generalised)?, alpha)?;
    let seed = s.seed().unwrap_or(genpres_core::search::DEFAULT_SEED);
    let r = equidist_check(&x, a, b, c, d, orbit, samples, grid, seed)?;
    let mut line = json!({
        "alpha": alpha,
        "abcd": [a, b, c, d],
        "theta": r.theta.to_f64(),
        "grid": r.grid,
        "orbit_len": r.orbit_len,
        "push_samples": r.push_samples,
        "sup_cell_discrepancy": r.sup_cell_discrepancy,
        "anchored_box_discrepancy": r.anchored_box_discrepancy,
        "near_origin_fraction": r.near_origin_fraction,
        "seed": seed,
    });
    if hist {
        line["orbit_hist"] = json!(r.orbit_hist);
        line["push_hist"] = json!(r.push_hist);
    }
    let mut out = s.out()?;
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(0)
}

fn cmd_bohr(s: &Session, c: BohrCmd) -> Result<u8> {
    let chk = s.bohr(&s.suite_config(false)?)?;
    let mut out = s.out()?;
    match c {
        BohrCmd::G { n } => {
            let (lo, hi) = parse_range(&n)?;
            for n in lo..=hi {
                writeln!(out, "{n}\t{}", chk.g(n)?)?;
            }
        }
        BohrCmd::Mu { m, big_n } => writeln!(out, "{}", json!({ "m": m, "N": big_n, "mu": chk.mu(m, big_n)? }))?,
        BohrCmd::Lambda { m, big_n, tries, finest } => {
            let w = match chk.lambda(m, big_n)? {
                Some(w) => Some(w),
                None => chk.lambda_witness(m, big_n, tries, finest)?,
            };
            writeln!(out, "{}", json!({ "m": m, "N": big_n, "lambda": w.is_some(), "witness": w }))?;
        }
        BohrCmd::Kappa { m, big_n } => {
            writeln!(out, "{}", json!({ "m": m, "N": big_n, "kappa": chk.kappa(m, big_n)? }))?
        }
        BohrCmd::Nu { m, m_tilde, big_n } => writeln!(
            out,
            "{}",
            json!({ "m": m, "m_tilde": m_tilde, "N": big_n, "nu": chk.nu(m, m_tilde, big_n)? })
        )?,
        BohrCmd::Delta { m, m_tilde } => {
            writeln!(out, "{}", json!({ "m": m, "m_tilde": m_tilde, "delta": chk.delta(m, m_tilde)? }))?
        }
        BohrCmd::Divisibility { m, m_tilde } => {
            let r = chk.divisibility_sequence_check(m, m_tilde)?;
            let mut v = serde_json::to_value(&r)?;
            v["agrees"] = json!(r.agrees());
            writeln!(out, "{v}")?;
        }
    }
    out.flush()?;
    Ok(0)
}
