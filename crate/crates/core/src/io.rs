//! Workspace files, reports and the command runner.
//!
//! A workspace is JSON with a `format: 1` field. Rationals are written as
//! `"p/q"` strings (plain integers are accepted on input), algebra elements
//! either as full coefficient lists or as expressions like `"2*e1 - 1/2*α"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{opposite, validate_algebra, Alg, AlgebraData, DgAlgebra};
use crate::blocked::restrict_to_ground;
use crate::catalog::{catalog_entry, opposite_entry, CatalogEntry, NAMES};
use crate::complex::{cohomology, GradedSpace};
use crate::duality::{diagonal_resolution, dual_tensor_omega_inverse, dualhom_check, dualize, hh_via_dualizing, serre_dimension_table};
use crate::error::{Error, Result};
use crate::hochschild::{euler_class, hh0_space, hh_class};
use crate::linalg::{parse_rational, Rational};
use crate::module::{AlgMatrix, Elem, ModuleMap, PerfectModule, SemiFreeModule};
use crate::pairing::{pair_scalar, verify_rr, PairingContext, PairingReport};
use crate::random::{random_perfect, Lcg};

/// Lossless `p/q` rendering (denominator always written).
pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A rational as it appears in a workspace file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Num::Int(i) => Ok(Rational::from_integer((*i).into())),
            Num::Text(s) => parse_rational(s).ok_or_else(|| Error::Input(format!("not a rational: {s:?}"))),
        }
    }

    pub fn from_rational(x: &Rational) -> Num {
        Num::Text(rational_string(x))
    }
}

/// Algebra element: coefficient list or expression over basis labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemDesc {
    Coeffs(Vec<Num>),
    Expr(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDesc {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i32>>,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` on `e_k`.
    pub mult: Vec<(usize, usize, usize, Num)>,
    pub unit: ElemDesc,
    /// `[j, i, c]`: `d(e_j)` has coefficient `c` on `e_i`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<(usize, usize, Num)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub idempotents: Vec<ElemDesc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDesc {
    pub row: usize,
    pub col: usize,
    pub value: ElemDesc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDesc {
    pub algebra: String,
    pub shifts: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twist: Vec<EntryDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<Vec<EntryDesc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDesc {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryDesc>,
}

fn format_one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    #[serde(default = "format_one")]
    pub format: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub use_catalog: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraDesc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleDesc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDesc>,
    /// Resolution name → catalog algebra name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub resolutions: BTreeMap<String, String>,
}

impl Default for WorkspaceFile {
    fn default() -> Self {
        WorkspaceFile {
            format: 1,
            use_catalog: Vec::new(),
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            maps: BTreeMap::new(),
            resolutions: BTreeMap::new(),
        }
    }
}

/// Parsed and validated workspace.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub file: WorkspaceFile,
    pub algebras: BTreeMap<String, Alg>,
    pub modules: BTreeMap<String, PerfectModule>,
    pub maps: BTreeMap<String, ModuleMap>,
    pub resolutions: BTreeMap<String, String>,
}

fn ctx<T>(r: Result<T>, place: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{place}: {m}")),
        other => Error::Input(format!("{place}: {other}")),
    })
}

/// Parses an element expression such as `"2*e1 + -1/2*α - b"` or `"[e1]"`.
pub fn parse_element(a: &DgAlgebra, text: &str) -> Result<Elem> {
    let s = text.trim().trim_start_matches('[').trim_end_matches(']').trim();
    let mut out = a.zero();
    if s.is_empty() || s == "0" {
        return Ok(out);
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('*') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
            neg ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, t) in terms {
        let t = t.trim();
        let (coeff, label) = match t.split_once('*') {
            Some((c, l)) => {
                let c = parse_rational(c.trim()).ok_or_else(|| Error::Input(format!("bad coefficient in {t:?}")))?;
                (c, l.trim())
            }
            None => (Rational::from_integer(1.into()), t),
        };
        let coeff = if neg { -coeff } else { coeff };
        match a.index_of(label) {
            Some(i) => out[i] += coeff,
            None => match parse_rational(label) {
                Some(c) => {
                    for (o, u) in out.iter_mut().zip(a.unit()) {
                        *o += &coeff * &c * u;
                    }
                }
                None => return Err(Error::Input(format!("unknown basis label {label:?} in {}", a.name()))),
            },
        }
    }
    Ok(out)
}

fn elem_value(a: &DgAlgebra, e: &ElemDesc) -> Result<Elem> {
    match e {
        ElemDesc::Expr(s) => parse_element(a, s),
        ElemDesc::Coeffs(cs) => {
            if cs.len() != a.dim() {
                return Err(Error::Input(format!("element has {} coefficients, algebra {} has dimension {}", cs.len(), a.name(), a.dim())));
            }
            cs.iter().map(Num::value).collect()
        }
    }
}

fn algebra_from_desc(name: &str, d: &AlgebraDesc) -> Result<DgAlgebra> {
    let n = d.labels.len();
    let degrees = d.degrees.clone().unwrap_or_else(|| vec![0; n]);
    if degrees.len() != n {
        return Err(Error::Input(format!("{} degrees for {n} labels", degrees.len())));
    }
    let mut mult = Vec::with_capacity(d.mult.len());
    for (t, (i, j, k, c)) in d.mult.iter().enumerate() {
        let c = ctx(c.value(), &format!("mult[{t}]"))?;
        mult.push((*i, *j, *k, c));
    }
    // Resolve the unit against a provisional algebra with the labels only.
    let unit = match &d.unit {
        ElemDesc::Coeffs(cs) => cs.iter().map(Num::value).collect::<Result<Vec<_>>>()?,
        ElemDesc::Expr(s) => {
            let label_only = |l: &str| d.labels.iter().position(|x| x == l);
            let mut v = vec![Rational::from_integer(0.into()); n];
            for part in s.split('+') {
                let i = label_only(part.trim()).ok_or_else(|| Error::Input(format!("unit: unknown label {part:?}")))?;
                v[i] += Rational::from_integer(1.into());
            }
            v
        }
    };
    let mut diff = Vec::with_capacity(d.diff.len());
    for (t, (j, i, c)) in d.diff.iter().enumerate() {
        diff.push((*j, *i, ctx(c.value(), &format!("diff[{t}]"))?));
    }
    let data = AlgebraData { name: name.to_string(), labels: d.labels.clone(), degrees, mult, unit, diff, idempotents: Vec::new() };
    let mut alg = validate_algebra(data)?;
    if !d.idempotents.is_empty() {
        let idems = d.idempotents.iter().map(|e| elem_value(&alg, e)).collect::<Result<Vec<_>>>()?;
        alg = alg.with_idempotents(idems)?;
    }
    Ok(alg)
}

/// Exports an algebra in workspace form (coefficients as `p/q`).
pub fn describe_algebra(a: &DgAlgebra) -> AlgebraDesc {
    let n = a.dim();
    let mut mult = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in a.product_terms(i, j) {
                mult.push((i, j, *k, Num::from_rational(c)));
            }
        }
    }
    let mut diff = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c = a.differential().get(i, j);
            if *c != Rational::from_integer(0.into()) {
                diff.push((j, i, Num::from_rational(c)));
            }
        }
    }
    let coeffs = |x: &[Rational]| ElemDesc::Coeffs(x.iter().map(Num::from_rational).collect());
    AlgebraDesc {
        labels: a.labels().to_vec(),
        degrees: a.degrees().iter().any(|d| *d != 0).then(|| a.degrees().to_vec()),
        mult,
        unit: coeffs(a.unit()),
        diff,
        idempotents: a.idempotents().iter().map(|e| coeffs(e)).collect(),
    }
}

fn alg_matrix(a: &DgAlgebra, rows: usize, cols: usize, entries: &[EntryDesc], what: &str) -> Result<AlgMatrix> {
    let mut m = AlgMatrix::zeros(rows, cols, a.dim());
    for (t, e) in entries.iter().enumerate() {
        if e.row >= rows || e.col >= cols {
            return Err(Error::Input(format!("{what}[{t}]: entry ({}, {}) outside {rows}×{cols}", e.row, e.col)));
        }
        let v = ctx(elem_value(a, &e.value), &format!("{what}[{t}]"))?;
        m.add_at(e.row, e.col, &Rational::from_integer(1.into()), &v);
    }
    Ok(m)
}

impl WorkspaceFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("workspace serializes")
    }
}

/// Parses and validates a workspace; the first error names its location.
pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let file: WorkspaceFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("syntax: {e}")))?;
    build_workspace(file)
}

pub fn build_workspace(file: WorkspaceFile) -> Result<Workspace> {
    if file.format != 1 {
        return Err(Error::Input(format!("unsupported format {}", file.format)));
    }
    let mut ws = Workspace {
        file: file.clone(),
        algebras: BTreeMap::new(),
        modules: BTreeMap::new(),
        maps: BTreeMap::new(),
        resolutions: BTreeMap::new(),
    };
    for name in &file.use_catalog {
        let e = ctx(catalog_entry(name), &format!("use_catalog {name:?}"))?;
        ws.algebras.insert(name.clone(), Arc::new(e.algebra));
    }
    for (name, d) in &file.algebras {
        let a = ctx(algebra_from_desc(name, d), &format!("algebras.{name}"))?;
        ws.algebras.insert(name.clone(), Arc::new(a));
    }
    for (name, d) in &file.modules {
        let place = format!("modules.{name}");
        let a = ctx(ws.algebra(&d.algebra), &place)?;
        let r = d.shifts.len();
        let labels = d.labels.clone().unwrap_or_else(|| (0..r).map(|j| format!("g{j}")).collect());
        let twist = alg_matrix(&a, r, r, &d.twist, &format!("{place}.twist"))?;
        let carrier = ctx(SemiFreeModule::new(a.clone(), labels, d.shifts.clone(), twist), &place)?;
        let idem = match &d.idempotent {
            Some(es) => Some(alg_matrix(&a, r, r, es, &format!("{place}.idempotent"))?),
            None => None,
        };
        ws.modules.insert(name.clone(), ctx(PerfectModule::new(carrier, idem), &place)?);
    }
    for (name, d) in &file.maps {
        let place = format!("maps.{name}");
        let src = ctx(ws.module(&d.source), &place)?;
        let tgt = ctx(ws.module(&d.target), &place)?;
        let a = src.algebra().clone();
        let m = alg_matrix(&a, tgt.carrier.rank(), src.carrier.rank(), &d.entries, &format!("{place}.entries"))?;
        let f = ctx(ModuleMap::new(src.carrier.clone(), tgt.carrier.clone(), d.degree, m), &place)?;
        ws.maps.insert(name.clone(), f);
    }
    for (name, alg) in &file.resolutions {
        ctx(ws.entry(alg).and_then(|e| diagonal_resolution(&e)), &format!("resolutions.{name}"))?;
        ws.resolutions.insert(name.clone(), alg.clone());
    }
    Ok(ws)
}

impl Workspace {
    /// A workspace that only knows the catalog.
    pub fn catalog_only() -> Workspace {
        build_workspace(WorkspaceFile::default()).expect("empty workspace")
    }

    /// Algebra by workspace name or catalog name, with `^op` allowed.
    pub fn algebra(&self, name: &str) -> Result<Alg> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(a.clone());
        }
        if let Some(base) = name.strip_suffix("^op") {
            return Ok(Arc::new(opposite(&*self.algebra(base)?)));
        }
        catalog_entry(name).map(|e| Arc::new(e.algebra))
    }

    /// Catalog entry (with its presentation) for a name, `^op` allowed.
    pub fn entry(&self, name: &str) -> Result<CatalogEntry> {
        if let Some(base) = name.strip_suffix("^op") {
            return Ok(opposite_entry(&self.entry(base)?));
        }
        if self.algebras.contains_key(name) && !self.file.use_catalog.iter().any(|n| n == name) {
            return Err(Error::NoDiagonalResolution(name.to_string()));
        }
        catalog_entry(name)
    }

    pub fn module(&self, name: &str) -> Result<PerfectModule> {
        self.modules.get(name).cloned().ok_or_else(|| Error::Input(format!("unknown module {name:?}")))
    }

    pub fn map(&self, name: &str) -> Result<ModuleMap> {
        self.maps.get(name).cloned().ok_or_else(|| Error::Input(format!("unknown map {name:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// Deterministic record of one command run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

impl Report {
    fn new(command: &str, inputs: &[String], seed: Option<u64>) -> Self {
        Report { command: command.into(), inputs: inputs.to_vec(), seed, results: json!({}), checks: Vec::new(), error: None, pass: true }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.inputs.join(" "));
        if let Some(s) = self.seed {
            out += &format!("seed {s}\n");
        }
        text_value(&self.results, 0, &mut out);
        for c in &self.checks {
            out += &format!("{} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name);
        }
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        out += if self.pass { "result: pass\n" } else { "result: fail\n" };
        out
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn text_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", flat(x))),
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", flat(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text_value(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", flat(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !matches!(x, Value::Object(_) | Value::Array(_)) || (matches!(x, Value::Array(_)) && is_flat(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(flat).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn dims_json(g: &GradedSpace) -> Value {
    Value::Object(g.iter().map(|(p, d)| (p.to_string(), json!(d))).collect())
}

fn rat(x: &Rational) -> Value {
    Value::String(rational_string(x))
}

fn pairing_json(r: &PairingReport) -> Value {
    json!({"instance": r.descriptor, "lhs": rat(&r.lhs), "rhs": rat(&r.rhs), "equal": r.equal})
}

/// Options shared by all commands.
#[derive(Clone, Debug)]
pub struct CommandArgs {
    pub positional: Vec<String>,
    pub seed: u64,
    pub random: Option<usize>,
    pub jobs: usize,
    pub algebras: Vec<String>,
}

impl Default for CommandArgs {
    fn default() -> Self {
        CommandArgs { positional: Vec::new(), seed: 42, random: None, jobs: 1, algebras: Vec::new() }
    }
}

pub const COMMANDS: [&str; 8] = ["validate", "cohomology", "hh0", "class", "pair", "verify-rr", "verify-serre", "verify-suite"];

/// Runs one command. `Err` is an input error (exit status 2); computation
/// failures are recorded in the report (exit status 1).
pub fn run_command(ws: &Workspace, cmd: &str, args: &CommandArgs) -> Result<Report> {
    let seeded = matches!(cmd, "verify-rr" | "verify-serre" | "verify-suite");
    let mut report = Report::new(cmd, &args.positional, seeded.then_some(args.seed));
    let outcome = match cmd {
        "validate" => cmd_validate(ws, &mut report),
        "cohomology" => cmd_cohomology(ws, args, &mut report),
        "hh0" => cmd_hh0(ws, args, &mut report),
        "class" => cmd_class(ws, args, &mut report),
        "pair" => cmd_pair(ws, args, &mut report),
        "verify-rr" => cmd_verify_rr(ws, args, &mut report),
        "verify-serre" => cmd_verify_serre(ws, args, &mut report),
        "verify-suite" => cmd_verify_suite(ws, args, &mut report),
        other => return Err(Error::Input(format!("unknown command {other:?}; expected one of {}", COMMANDS.join(", ")))),
    };
    match outcome {
        Ok(()) => Ok(report),
        Err(e @ Error::Input(_)) => Err(e),
        Err(e) => {
            report.error = Some(e.to_string());
            report.pass = false;
            Ok(report)
        }
    }
}

fn arg<'a>(args: &'a CommandArgs, i: usize, what: &str) -> Result<&'a str> {
    args.positional.get(i).map(String::as_str).ok_or_else(|| Error::Input(format!("missing argument: {what}")))
}

fn cmd_validate(ws: &Workspace, report: &mut Report) -> Result<()> {
    let mut algs = serde_json::Map::new();
    for (name, a) in &ws.algebras {
        algs.insert(name.clone(), json!({"dim": a.dim(), "proper": a.is_proper(), "degree_zero": a.is_degree_zero()}));
        report.check(format!("algebra {name}"), true);
    }
    let mut mods = serde_json::Map::new();
    for (name, m) in &ws.modules {
        let dims = cohomology(restrict_to_ground(m)?.complex())?.space();
        mods.insert(name.clone(), json!({"rank": m.carrier.rank(), "cohomology": dims_json(&dims)}));
        report.check(format!("module {name}"), true);
    }
    let mut maps = serde_json::Map::new();
    for (name, f) in &ws.maps {
        let closed = f.is_closed();
        maps.insert(name.clone(), json!({"degree": f.degree, "closed": closed}));
        report.check(format!("map {name} defined"), true);
    }
    let mut res = serde_json::Map::new();
    let mut names: Vec<String> = ws.resolutions.values().cloned().collect();
    names.extend(ws.file.use_catalog.iter().cloned());
    names.sort();
    names.dedup();
    for alg in names {
        let r = diagonal_resolution(&ws.entry(&alg)?);
        let ok = r.is_ok();
        if let Ok(r) = r {
            res.insert(alg.clone(), json!({"rank": r.resolution.carrier.rank(), "length": r.length()}));
        }
        report.check(format!("resolution {alg} augmentation is a quasi-isomorphism"), ok);
    }
    report.results = json!({"algebras": algs, "modules": mods, "maps": maps, "resolutions": res});
    Ok(())
}

fn cmd_cohomology(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let name = arg(args, 0, "module or algebra name")?;
    let dims = if let Ok(m) = ws.module(name) {
        cohomology(restrict_to_ground(&m)?.complex())?.space()
    } else {
        ws.algebra(name)?.cohomology_dims()
    };
    report.results = json!({"name": name, "dims": dims_json(&dims), "euler_characteristic": dims.euler_characteristic()});
    Ok(())
}

fn cmd_hh0(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let a = ws.algebra(arg(args, 0, "algebra")?)?;
    let h = hh0_space(&a)?;
    report.results = json!({"algebra": a.name(), "dim": h.dim(), "basis": h.basis_labels()});
    Ok(())
}

fn cmd_class(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let m = ws.module(arg(args, 0, "module")?)?;
    let h = hh0_space(m.algebra())?;
    let c = match args.positional.get(1) {
        Some(f) => hh_class(&h, &m, &ws.map(f)?)?,
        None => euler_class(&h, &m)?,
    };
    report.results = json!({
        "algebra": m.algebra().name(),
        "basis": h.basis_labels(),
        "coords": c.coords.iter().map(rat).collect::<Vec<_>>(),
        "class": c.format(),
    });
    Ok(())
}

fn cmd_pair(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let a = ws.algebra(arg(args, 0, "algebra")?)?;
    let op = Arc::new(opposite(&a));
    let lam = hh0_space(&op)?.class_of(&parse_element(&op, arg(args, 1, "class over A^op")?)?);
    let mu = hh0_space(&a)?.class_of(&parse_element(&a, arg(args, 2, "class over A")?)?);
    let v = pair_scalar(&lam, &mu)?;
    report.results = json!({"algebra": a.name(), "lambda": lam.format(), "mu": mu.format(), "value": rat(&v)});
    Ok(())
}

fn suite_names(args: &CommandArgs) -> Vec<String> {
    if args.algebras.is_empty() {
        NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args.algebras.clone()
    }
}

/// Runs `count` random verify-rr instances, in parallel when `jobs > 1`;
/// results are ordered by instance index.
pub fn random_rr_batch(ctx: &PairingContext, seed: u64, count: usize, jobs: usize) -> Result<Vec<PairingReport>> {
    let run = |i: usize| ctx.verify_random(seed, i as u64);
    if jobs <= 1 {
        return (0..count).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Input(e.to_string()))?;
    pool.install(|| (0..count).into_par_iter().map(run).collect())
}

fn cmd_verify_rr(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    if args.positional.len() == 4 {
        let m = ws.module(&args.positional[0])?;
        let f = ws.map(&args.positional[1])?;
        let n = ws.module(&args.positional[2])?;
        let g = ws.map(&args.positional[3])?;
        let mut r = verify_rr(&m, &f, &n, &g)?;
        r.descriptor = args.positional.join(" ");
        report.check(format!("hh_k(N⊗M, g⊗f) = <hh(N,g), hh(M,f)> for {}", r.descriptor), r.equal);
        report.results = pairing_json(&r);
        return Ok(());
    }
    if !args.positional.is_empty() {
        return Err(Error::Input("verify-rr takes M F N G, or --random COUNT".into()));
    }
    let count = args.random.unwrap_or(20);
    let mut per = serde_json::Map::new();
    for name in suite_names(args) {
        let entry = ws.entry(&name)?;
        let ctx = PairingContext::new(&entry)?;
        let reps = random_rr_batch(&ctx, args.seed, count, args.jobs)?;
        let passed = reps.iter().filter(|r| r.equal).count();
        report.check(format!("verify-rr {name}: {passed}/{count}"), passed == count);
        per.insert(name, json!({"passed": passed, "count": count, "instances": reps.iter().map(pairing_json).collect::<Vec<_>>()}));
    }
    report.results = Value::Object(per);
    Ok(())
}

/// The duality checks for one catalog algebra; `(name, pass, detail)`.
pub fn serre_checks(entry: &CatalogEntry, seed: u64) -> Result<(Vec<(String, bool)>, Value)> {
    let a: Alg = Arc::new(entry.algebra.clone());
    let name = a.name().to_string();
    let mut checks = Vec::new();
    let r = diagonal_resolution(entry)?;
    checks.push((format!("{name}: resolution is a quasi-isomorphism"), r.is_quasi_iso()?));
    let mut dd = true;
    for i in 0..20 {
        let mut rng = Lcg::derive(seed, i);
        let m = random_perfect(&a, &mut rng, 4)?;
        let back = dualize(&dualize(&m)?)?;
        dd &= *back.carrier == *m.carrier && back.idempotent_matrix() == m.idempotent_matrix();
    }
    checks.push((format!("{name}: D∘D = id on 20 random modules"), dd));
    let dual_dims = dual_tensor_omega_inverse(&r)?;
    checks.push((format!("{name}: A^*⊗_A ω⁻¹ has the cohomology of A"), dual_dims == GradedSpace::new([(0, a.dim())])));
    let table = serre_dimension_table(&a)?;
    checks.push((format!("{name}: dim Hom(Y,X) = dim Hom(X,SY) on projectives"), table.iter().all(|(_, _, l, r)| l == r)));
    let hh = hh_via_dualizing(&r)?;
    let h0 = hh0_space(&a)?.dim();
    checks.push((format!("{name}: HH_0 via A/[A,A] matches Hom(ω⁻¹, A)"), hh.dim(0) == h0));
    let mut qi = true;
    for i in 0..10 {
        let mut rng = Lcg::derive(seed ^ 0xD0A1, i);
        let n = random_perfect(&a, &mut rng, 3)?;
        let m = random_perfect(&a, &mut rng, 3)?;
        qi &= dualhom_check(&n, &m)?.quasi_iso;
    }
    checks.push((format!("{name}: Hom_A(N,M)^* ≃ M^*⊗_A N on 10 random pairs"), qi));
    let detail = json!({
        "hh0_dim": h0,
        "hom_omega_inverse_dims": dims_json(&hh),
        "dual_tensor_omega_inverse_dims": dims_json(&dual_dims),
        "serre_table": table.iter().map(|(i, j, l, r)| json!([i, j, l, r])).collect::<Vec<_>>(),
    });
    Ok((checks, detail))
}

fn cmd_verify_serre(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let names = if args.positional.is_empty() { suite_names(args) } else { args.positional.clone() };
    let mut per = serde_json::Map::new();
    for name in names {
        let (checks, detail) = serre_checks(&ws.entry(&name)?, args.seed)?;
        for (c, ok) in checks {
            report.check(c, ok);
        }
        per.insert(name, detail);
    }
    report.results = Value::Object(per);
    Ok(())
}

fn cmd_verify_suite(ws: &Workspace, args: &CommandArgs, report: &mut Report) -> Result<()> {
    let count = args.random.unwrap_or(200);
    let mut per = serde_json::Map::new();
    for name in suite_names(args) {
        let entry = ws.entry(&name)?;
        let ctx = PairingContext::new(&entry)?;
        let reps = random_rr_batch(&ctx, args.seed, count, args.jobs)?;
        let passed = reps.iter().filter(|r| r.equal).count();
        report.check(format!("verify-rr {name}: {passed}/{count}"), passed == count);
        let (checks, detail) = serre_checks(&entry, args.seed)?;
        for (c, ok) in checks {
            report.check(c, ok);
        }
        per.insert(name, json!({"verify_rr": {"passed": passed, "count": count}, "duality": detail}));
    }
    report.results = Value::Object(per);
    Ok(())
}
