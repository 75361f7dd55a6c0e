//! Session state and the command set.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use fitshift_core::apps::{euler_factor_closed, euler_factor_direct, DecompositionData};
use fitshift_core::fitting::{fitting_ideal, PresentedModule};
use fitshift_core::groupring::GroupRingSpec;
use fitshift_core::ideals::{frac_equal, ideal_equal, FracVerdict, Ideal};
use fitshift_core::shifts::{shift_trivial, ShiftRequest};

use crate::error::{CliError, CliResult};
use crate::eval::{is_reserved, Env, Value};
use crate::paper::verify_paper;
use crate::parser::{parse_at, Pos};
use crate::printer::{canonical_rows, format_element, format_frac, format_ideal, format_spec};

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides `(k, N)` of every ring the session builds.
    pub precision: Option<(u32, usize)>,
    pub assume_nzd: bool,
    /// Directory against which relative data-file paths resolve.
    pub base_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Certified {
    pub k: u32,
    pub t_precision: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub spec: String,
    pub passed: bool,
    pub certified_precision: Certified,
    pub detail: String,
}

/// The outcome of one command, in both human and machine form.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub spec: Option<String>,
    pub command: String,
    pub verdict: String,
    pub certified_precision: Option<Certified>,
    pub canonical_generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckJson>,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    fn new(session: &Session, command: &str) -> Self {
        Self {
            spec: session.spec.as_ref().map(format_spec),
            command: command.to_string(),
            verdict: "ok".into(),
            certified_precision: None,
            canonical_generators: Vec::new(),
            denominator: None,
            checks: Vec::new(),
            text: Vec::new(),
        }
    }

    /// Whether the command reports a failed comparison or check.
    pub fn is_mismatch(&self) -> bool {
        matches!(self.verdict.as_str(), "unequal" | "fail")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub command: String,
    pub precision: Option<Certified>,
}

pub struct Session {
    spec: Option<Arc<GroupRingSpec>>,
    bindings: BTreeMap<String, Value>,
    log: Vec<LogEntry>,
    opts: Options,
}

#[derive(Deserialize)]
struct EulerFile {
    p: u64,
    k: u32,
    #[serde(rename = "N")]
    n: usize,
    inertia_orders: Vec<usize>,
    m_v: usize,
    q: u64,
    frobenius: Frobenius,
}

#[derive(Deserialize)]
struct Frobenius {
    delta_exponents: Vec<usize>,
    gamma_exponent: u64,
}

/// Split a command line into words at bracket depth zero, keeping each
/// word's position.
fn split_args(line: &str, line_no: usize) -> CliResult<Vec<(String, Pos)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut start = Pos { line: line_no, col: 1 };
    for (i, c) in line.chars().enumerate() {
        let col = i + 1;
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(CliError::parse(Pos { line: line_no, col }, format!("unbalanced '{c}'")));
        }
        if c.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push((std::mem::take(&mut cur), start));
            }
            continue;
        }
        if cur.is_empty() {
            start = Pos { line: line_no, col };
        }
        cur.push(c);
    }
    if depth != 0 {
        return Err(CliError::parse(Pos { line: line_no, col: line.chars().count() + 1 }, "unclosed bracket".into()));
    }
    if !cur.is_empty() {
        out.push((cur, start));
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_precision(s: &str) -> CliResult<(u32, usize)> {
    let (k, n) = s.split_once(',').ok_or_else(|| usage(format!("precision '{s}' must be k,N")))?;
    let k = k.trim().parse().map_err(|_| usage(format!("bad p-adic precision '{k}'")))?;
    let n = n.trim().parse().map_err(|_| usage(format!("bad T-precision '{n}'")))?;
    Ok((k, n))
}

impl Session {
    pub fn new(opts: Options) -> Self {
        Self { spec: None, bindings: BTreeMap::new(), log: Vec::new(), opts }
    }

    pub fn spec(&self) -> Option<&Arc<GroupRingSpec>> {
        self.spec.as_ref()
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    fn ring(&self) -> CliResult<&Arc<GroupRingSpec>> {
        self.spec.as_ref().ok_or_else(|| usage("no ring defined; start with 'spec p=.. k=.. N=.. orders=.. d=..'"))
    }

    fn env(&self) -> CliResult<Env<'_>> {
        Ok(Env { spec: self.ring()?, bindings: &self.bindings, assume_nzd: self.opts.assume_nzd })
    }

    fn eval(&self, word: &(String, Pos)) -> CliResult<Value> {
        self.env()?.eval(&parse_at(&word.0, word.1)?)
    }

    /// Run one line; blank lines and comments give `None`.
    pub fn run_line(&mut self, line: &str, line_no: usize) -> CliResult<Option<Report>> {
        let code = strip_comment(line);
        let words = split_args(code, line_no)?;
        let Some((cmd, _)) = words.first() else {
            return Ok(None);
        };
        let args = &words[1..];
        let mut report = match cmd.as_str() {
            "spec" => self.cmd_spec(code.trim(), args)?,
            "let" => self.cmd_let(code, line_no)?,
            "fitting" => self.cmd_fitting(code.trim(), args)?,
            "ideal-eq" => self.cmd_ideal_eq(code.trim(), args)?,
            "frac-eq" => self.cmd_frac_eq(code.trim(), args)?,
            "shift-trivial" => self.cmd_shift(code.trim(), args)?,
            "euler" => self.cmd_euler(code.trim(), args)?,
            "verify-paper" => self.cmd_verify(code.trim(), args)?,
            "canon" => self.cmd_canon(code.trim(), args)?,
            "show" => self.cmd_show(code.trim(), args)?,
            "log" => self.cmd_log(code.trim()),
            other => return Err(usage(format!("line {line_no}: unknown command '{other}'"))),
        };
        report.spec = self.spec.as_ref().map(format_spec);
        self.log.push(LogEntry { command: report.command.clone(), precision: report.certified_precision });
        Ok(Some(report))
    }

    fn arity(args: &[(String, Pos)], n: usize, cmd: &str) -> CliResult<()> {
        if args.len() != n {
            return Err(usage(format!("'{cmd}' takes {n} argument(s), got {}", args.len())));
        }
        Ok(())
    }

    fn cmd_spec(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for (w, _) in args {
            let (key, val) = w.split_once('=').ok_or_else(|| usage(format!("spec field '{w}' must be key=value")))?;
            if fields.insert(key, val).is_some() {
                return Err(usage(format!("spec field '{key}' given twice")));
            }
        }
        let num = |key: &str| -> CliResult<Option<u64>> {
            fields.get(key).map(|v| v.parse::<u64>().map_err(|_| usage(format!("spec field {key}={v} is not a number")))).transpose()
        };
        for key in fields.keys() {
            if !["p", "k", "N", "orders", "d"].contains(key) {
                return Err(usage(format!("unknown spec field '{key}'")));
            }
        }
        let p = num("p")?.ok_or_else(|| usage("spec needs p="))?;
        let mut k = num("k")?.ok_or_else(|| usage("spec needs k="))? as u32;
        let mut n = num("N")?.ok_or_else(|| usage("spec needs N="))? as usize;
        if let Some((pk, pn)) = self.opts.precision {
            (k, n) = (pk, pn);
        }
        let d = num("d")?.unwrap_or(1) as usize;
        let orders_src = fields.get("orders").copied().unwrap_or("");
        let orders = orders_src
            .trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'))
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad cyclic order '{s}'"))))
            .collect::<CliResult<Vec<_>>>()?;
        let spec = GroupRingSpec::new(p, k, orders, d, n)?;
        self.spec = Some(spec.clone());
        self.bindings.clear();
        let mut r = Report::new(self, line);
        r.text.push(format!("ring {}", format_spec(&spec)));
        Ok(r)
    }

    fn cmd_let(&mut self, line: &str, line_no: usize) -> CliResult<Report> {
        let body = line.trim_start().strip_prefix("let").ok_or_else(|| usage("malformed let"))?;
        let (name, expr) = body.split_once('=').ok_or_else(|| usage(format!("line {line_no}: let needs 'NAME = value'")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(usage(format!("line {line_no}: '{name}' is not a valid name")));
        }
        if is_reserved(name) {
            return Err(usage(format!("line {line_no}: '{name}' is a reserved name")));
        }
        if self.bindings.contains_key(name) {
            return Err(usage(format!("line {line_no}: '{name}' is already bound")));
        }
        // column of the expression within the original line
        let offset = line.chars().count() - expr.chars().count();
        let value = self.env()?.eval(&parse_at(expr, Pos { line: line_no, col: offset + 1 })?)?;
        let mut r = Report::new(self, line.trim());
        r.canonical_generators = generators_of(&value);
        if let Value::Frac(f) = &value {
            r.denominator = Some(format_element(f.denominator()));
        }
        r.text.push(format!("{name} = {}", value.render()));
        self.bindings.insert(name.to_string(), value);
        Ok(r)
    }

    fn cmd_fitting(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        Self::arity(args, 1, "fitting")?;
        let env = self.env()?;
        let m = env.as_matrix(self.eval(&args[0])?, args[0].1)?;
        let fitt = fitting_ideal(&PresentedModule::new(m));
        let mut r = Report::new(self, line);
        r.canonical_generators = fitt.reduced_generators().iter().map(format_element).collect();
        r.text.push(format_ideal(&fitt));
        Ok(r)
    }

    fn two_values(&self, args: &[(String, Pos)], cmd: &str) -> CliResult<(Value, Value)> {
        Self::arity(args, 2, cmd)?;
        Ok((self.eval(&args[0])?, self.eval(&args[1])?))
    }

    fn cmd_ideal_eq(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        let (a, b) = self.two_values(args, "ideal-eq")?;
        let env = self.env()?;
        let (a, b) = (env.as_ideal(a, args[0].1)?, env.as_ideal(b, args[1].1)?);
        let spec = self.ring()?.clone();
        let mut r = Report::new(self, line);
        if ideal_equal(&a, &b)? {
            let cert = Certified { k: spec.k(), t_precision: spec.n() as i64 };
            r.verdict = "equal".into();
            r.certified_precision = Some(cert);
            r.text.push(format!("equal {}", stamp(cert)));
        } else {
            r.verdict = "unequal".into();
            r.text.push("unequal".into());
        }
        r.canonical_generators = a.reduced_generators().iter().map(format_element).collect();
        Ok(r)
    }

    fn cmd_frac_eq(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        let (a, b) = self.two_values(args, "frac-eq")?;
        let env = self.env()?;
        let (a, b) = (env.as_frac(a, args[0].1)?, env.as_frac(b, args[1].1)?);
        let mut r = Report::new(self, line);
        fill_frac_verdict(&mut r, frac_equal(&a, &b)?);
        r.canonical_generators = a.numerator().reduced_generators().iter().map(format_element).collect();
        r.denominator = Some(format_element(a.denominator()));
        Ok(r)
    }

    fn cmd_shift(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        Self::arity(args, 1, "shift-trivial")?;
        let n: i64 = args[0].0.parse().map_err(|_| usage(format!("shift index '{}' is not an integer", args[0].0)))?;
        let value = shift_trivial(&ShiftRequest::new(self.ring()?, n))?;
        let mut r = Report::new(self, line);
        r.canonical_generators = value.numerator().reduced_generators().iter().map(format_element).collect();
        r.denominator = Some(format_element(value.denominator()));
        r.text.push(format_frac(&value));
        Ok(r)
    }

    fn cmd_euler(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        Self::arity(args, 1, "euler")?;
        let path = match &self.opts.base_dir {
            Some(dir) if Path::new(&args[0].0).is_relative() => dir.join(&args[0].0),
            _ => PathBuf::from(&args[0].0),
        };
        let data = load_euler(&path, self.opts.precision)?;
        let closed = euler_factor_closed(&data, self.opts.assume_nzd)?;
        let direct = euler_factor_direct(&data, self.opts.assume_nzd)?;
        let mut r = Report::new(self, line);
        r.text.push(format!("local ring {}", format_spec(data.local())));
        r.text.push(format!("closed form: {}", format_frac(&closed)));
        fill_frac_verdict(&mut r, frac_equal(&direct, &closed)?);
        r.text[2] = format!("direct twist vs closed form: {}", r.text[2]);
        r.canonical_generators = closed.numerator().reduced_generators().iter().map(format_element).collect();
        r.denominator = Some(format_element(closed.denominator()));
        Ok(r)
    }

    fn cmd_verify(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        let mut precision = self.opts.precision;
        let mut it = args.iter();
        while let Some((w, _)) = it.next() {
            match w.as_str() {
                "--precision" => {
                    let (v, _) = it.next().ok_or_else(|| usage("--precision needs k,N"))?;
                    precision = Some(parse_precision(v)?);
                }
                other => return Err(usage(format!("unexpected verify-paper argument '{other}'"))),
            }
        }
        let results = verify_paper(precision);
        let mut r = Report::new(self, line);
        let passed = results.iter().all(|c| c.passed);
        r.verdict = if passed { "pass" } else { "fail" }.into();
        r.text = results.iter().map(|c| c.line()).collect();
        let failed = results.iter().filter(|c| !c.passed).count();
        r.text.push(format!("{} checks, {} failed", results.len(), failed));
        r.checks = results
            .into_iter()
            .map(|c| CheckJson {
                name: c.name,
                spec: c.spec,
                passed: c.passed,
                certified_precision: Certified { k: c.precision.0, t_precision: c.precision.1 },
                detail: c.detail,
            })
            .collect();
        Ok(r)
    }

    fn cmd_canon(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        Self::arity(args, 1, "canon")?;
        let value = self.eval(&args[0])?;
        let ideal: Ideal = match value {
            Value::Frac(f) => f.numerator().clone(),
            v => self.env()?.as_ideal(v, args[0].1)?,
        };
        let rows: Vec<String> = canonical_rows(&ideal).iter().map(format_element).collect();
        let mut r = Report::new(self, line);
        r.text = rows.clone();
        r.canonical_generators = rows;
        Ok(r)
    }

    fn cmd_show(&mut self, line: &str, args: &[(String, Pos)]) -> CliResult<Report> {
        let mut r = Report::new(self, line);
        if args.is_empty() {
            r.text.push(match &self.spec {
                Some(s) => format!("ring {}", format_spec(s)),
                None => "no ring defined".into(),
            });
            for (name, v) in &self.bindings {
                r.text.push(format!("{name} : {} = {}", v.kind(), v.render()));
            }
            return Ok(r);
        }
        for word in args {
            let v = self.eval(word)?;
            r.text.push(v.render());
            r.canonical_generators.extend(generators_of(&v));
        }
        Ok(r)
    }

    fn cmd_log(&mut self, line: &str) -> Report {
        let mut r = Report::new(self, line);
        for e in &self.log {
            r.text.push(match e.precision {
                Some(c) => format!("{} {}", e.command, stamp(c)),
                None => e.command.clone(),
            });
        }
        r
    }
}

fn stamp(c: Certified) -> String {
    format!("(mod p^{}, T-degree < {})", c.k, c.t_precision)
}

fn fill_frac_verdict(r: &mut Report, v: FracVerdict) {
    match v {
        FracVerdict::EqualAtPrecision { k, t_precision } => {
            let cert = Certified { k, t_precision };
            r.verdict = "equal".into();
            r.certified_precision = Some(cert);
            r.text.push(format!("equal {}", stamp(cert)));
        }
        FracVerdict::Unequal => {
            r.verdict = "unequal".into();
            r.text.push("unequal".into());
        }
    }
}

fn generators_of(v: &Value) -> Vec<String> {
    match v {
        Value::Element(x) => vec![format_element(x)],
        Value::Ideal(i) => i.reduced_generators().iter().map(format_element).collect(),
        Value::Frac(f) => f.numerator().reduced_generators().iter().map(format_element).collect(),
        Value::Matrix(m) => m.entries().iter().map(format_element).collect(),
    }
}

/// Read decomposition data from a JSON file.
pub fn load_euler(path: &Path, precision: Option<(u32, usize)>) -> CliResult<DecompositionData> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let f: EulerFile = serde_json::from_str(&text).map_err(|e| CliError::Data { path: shown, msg: e.to_string() })?;
    let (k, n) = precision.unwrap_or((f.k, f.n));
    Ok(DecompositionData::new(
        f.p,
        k,
        n,
        f.inertia_orders,
        f.m_v,
        f.q,
        f.frobenius.delta_exponents,
        f.frobenius.gamma_exponent,
    )?)
}

/// Outcome of a batch of lines.
pub struct BatchOutcome {
    pub reports: Vec<Report>,
    pub error: Option<CliError>,
}

impl BatchOutcome {
    /// 0 when everything ran and matched, 1 on a mismatch, 2 on an error.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.reports.iter().any(Report::is_mismatch) {
            1
        } else {
            0
        }
    }
}

impl Session {
    /// Run lines in order, stopping at the first error.
    pub fn run_lines<'a>(&mut self, lines: impl IntoIterator<Item = &'a str>) -> BatchOutcome {
        let mut reports = Vec::new();
        for (i, line) in lines.into_iter().enumerate() {
            match self.run_line(line, i + 1) {
                Ok(Some(r)) => reports.push(r),
                Ok(None) => {}
                Err(e) => return BatchOutcome { reports, error: Some(e) },
            }
        }
        BatchOutcome { reports, error: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_respects_brackets() {
        let w = split_args("ideal-eq (t1, d1 - 1) [[1, 2]]", 3).unwrap();
        let words: Vec<&str> = w.iter().map(|x| x.0.as_str()).collect();
        assert_eq!(words, ["ideal-eq", "(t1, d1 - 1)", "[[1, 2]]"]);
        assert_eq!(w[1].1, Pos { line: 3, col: 10 });
        assert!(split_args("canon (t1", 1).is_err());
    }

    #[test]
    fn precision_flag() {
        assert_eq!(parse_precision("4,6").unwrap(), (4, 6));
        assert!(parse_precision("4").is_err());
    }
}
