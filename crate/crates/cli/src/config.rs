//! Session config: `key = value` lines, `#` comments.
//!
//! Constants are `name = rational "p/q"` or
//! `name = algebraic { minpoly = [c0, ..., cd], interval = ["lo", "hi"] }`.
//! `seed`, `threads` and `out` set session defaults; `bounds.*`, `bohr.*` and
//! `suite.*` override fields of the check configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use genpres_core::genpoly::Context;
use genpres_core::numeric::{AlgebraicReal, NumberField};
use genpres_core::suite::SuiteConfig;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq)]
pub enum ConstSpec {
    Rational(BigRational),
    /// The root of `minpoly` isolated in [lo, hi].
    Algebraic { minpoly: Vec<BigInt>, lo: BigRational, hi: BigRational },
}

#[derive(Clone, Debug, Default)]
pub struct SessionConfig {
    pub constants: Vec<(String, ConstSpec)>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    /// `bounds.*`, `bohr.*`, `suite.*` assignments in file order.
    pub overrides: Vec<(String, String)>,
}

fn unquote(s: &str) -> Result<&str> {
    s.strip_prefix('"').and_then(|t| t.strip_suffix('"')).ok_or_else(|| anyhow!("expected a quoted string, found `{s}`"))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let q = BigRational::from_str(s).map_err(|_| anyhow!("not a rational `p/q`: `{s}`"))?;
    Ok(q)
}

// Contents of `[ ... ]` following `key =` inside the algebraic braces.
fn bracket_after<'a>(body: &'a str, key: &str) -> Result<&'a str> {
    let at = body.find(key).ok_or_else(|| anyhow!("missing `{key}`"))?;
    let rest = body[at + key.len()..].trim_start();
    let rest = rest.strip_prefix('=').ok_or_else(|| anyhow!("expected `=` after `{key}`"))?.trim_start();
    let rest = rest.strip_prefix('[').ok_or_else(|| anyhow!("expected `[` after `{key} =`"))?;
    let end = rest.find(']').ok_or_else(|| anyhow!("unclosed `[` in `{key}`"))?;
    Ok(&rest[..end])
}

fn parse_algebraic(v: &str) -> Result<ConstSpec> {
    let body = v
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| anyhow!("algebraic constant needs `{{ ... }}`"))?;
    let minpoly = bracket_after(body, "minpoly")?
        .split(',')
        .map(|c| BigInt::from_str(c.trim()).map_err(|_| anyhow!("minpoly coefficient is not an integer: `{}`", c.trim())))
        .collect::<Result<Vec<_>>>()?;
    let ends: Vec<&str> = bracket_after(body, "interval")?.split(',').map(str::trim).collect();
    if ends.len() != 2 {
        bail!("interval needs exactly two endpoints");
    }
    let lo = parse_rational(unquote(ends[0])?)?;
    let hi = parse_rational(unquote(ends[1])?)?;
    Ok(ConstSpec::Algebraic { minpoly, lo, hi })
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|h| h.is_ascii_alphabetic() || h == '_') && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

impl SessionConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SessionConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cfg.parse_line(line).with_context(|| format!("config line {}", i + 1))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    fn parse_line(&mut self, line: &str) -> Result<()> {
        let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "seed" => self.seed = Some(value.parse().map_err(|_| anyhow!("seed must be an unsigned integer"))?),
            "threads" => self.threads = Some(value.parse().map_err(|_| anyhow!("threads must be a positive integer"))?),
            "out" => self.out = Some(PathBuf::from(unquote(value).unwrap_or(value))),
            k if k.starts_with("bounds.") || k.starts_with("bohr.") || k.starts_with("suite.") => {
                self.overrides.push((k.to_string(), value.to_string()))
            }
            name if is_identifier(name) => {
                let spec = if let Some(v) = value.strip_prefix("rational") {
                    ConstSpec::Rational(parse_rational(unquote(v.trim())?)?)
                } else if let Some(v) = value.strip_prefix("algebraic") {
                    parse_algebraic(v.trim())?
                } else {
                    bail!("constant `{name}` must be `rational \"p/q\"` or `algebraic {{ ... }}`");
                };
                if self.constants.iter().any(|(n, _)| n == name) {
                    bail!("constant `{name}` declared twice");
                }
                self.constants.push((name.to_string(), spec));
            }
            other => bail!("unknown key `{other}`"),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.threads == Some(0) {
            bail!("threads must be at least 1");
        }
        if !self.constants.is_empty() {
            self.context()?;
        }
        apply_overrides(&mut SuiteConfig::default(), &self.overrides)?;
        Ok(())
    }

    /// The field of the algebraic constants, all of which must agree.
    fn field(&self) -> Result<Option<Arc<NumberField>>> {
        let mut field: Option<Arc<NumberField>> = None;
        for (name, spec) in &self.constants {
            if let ConstSpec::Algebraic { minpoly, lo, hi } = spec {
                let f = NumberField::new(minpoly, lo.clone(), hi.clone()).with_context(|| format!("constant `{name}`"))?;
                match &field {
                    Some(g) if **g != *f => bail!("constant `{name}` lies in a second number field; only one is supported"),
                    Some(_) => {}
                    None => field = Some(f),
                }
            }
        }
        Ok(field)
    }

    /// Bindings for every declared constant; algebraic constants denote θ.
    pub fn context(&self) -> Result<Context> {
        let mut ctx = match self.field()? {
            Some(f) => Context::new(f),
            None => Context::rational(),
        };
        let f = ctx.field().clone();
        for (name, spec) in &self.constants {
            match spec {
                ConstSpec::Rational(q) => ctx.bind_rational(name, q.clone()),
                ConstSpec::Algebraic { .. } => ctx.bind(name, AlgebraicReal::theta(&f))?,
            }
        }
        Ok(ctx)
    }
}

fn json_value(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(unquote(text).unwrap_or(text).to_string()))
}

/// Sets `key` (`bounds.x`, `bohr.x` or `suite.path.to.x`) from `value`,
/// read as JSON when possible and as a string otherwise.
pub fn apply_override(cfg: &mut SuiteConfig, key: &str, value: &str) -> Result<()> {
    let path: Vec<&str> = match key.split_once('.') {
        Some(("bounds", rest)) => std::iter::once("bounds").chain(rest.split('.')).collect(),
        Some(("bohr", rest)) => std::iter::once("bohr_bounds").chain(rest.split('.')).collect(),
        Some(("suite", rest)) => rest.split('.').collect(),
        _ => bail!("override key must start with bounds., bohr. or suite.: `{key}`"),
    };
    let mut doc = serde_json::to_value(&*cfg)?;
    let mut slot = &mut doc;
    for part in &path {
        slot = slot.get_mut(*part).ok_or_else(|| anyhow!("unknown setting `{key}`"))?;
    }
    *slot = json_value(value);
    *cfg = serde_json::from_value(doc).map_err(|e| anyhow!("bad value for `{key}`: {e}"))?;
    Ok(())
}

pub fn apply_overrides(cfg: &mut SuiteConfig, overrides: &[(String, String)]) -> Result<()> {
    for (k, v) in overrides {
        apply_override(cfg, k, v)?;
    }
    Ok(())
}
