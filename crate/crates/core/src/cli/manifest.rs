//! Manifest parsing and fail-fast validation.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::algebra::linalg::{parse_scalar, Vector};
use crate::algebra::{Algebra, Grade, ModuleSplit, Submodule};
use crate::budget::Caps;
use crate::ehp::{Condition, GradePremise, Premise, PowerShape};
use crate::error::{Error, Result};
use crate::nil::{Mode, ParenPolicy};
use crate::ring::{rational, Rational};
use crate::zoo;

pub const RUN_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TRIALS: u32 = 20;

/// One certifier invocation with every parameter resolved.
#[derive(Clone, Debug)]
pub enum CheckKind {
    NilBound { subject: Submodule, k: usize, s: usize },
    NilDegree { subject: Submodule, k: usize, s_max: usize },
    WeakNil { subject: Submodule, k: usize, s: usize },
    Solv { subject: Submodule, parts: Vec<Submodule>, k: usize, s: usize, weak: bool },
    TheoremA { premise: Premise, n: Vec<usize>, lambda: Rational, shift: Option<Grade>, shape: PowerShape },
    Flags,
    CdInclusion { k: usize, p: usize, q: usize, l: u32 },
    ZeroDivisor { bound: usize },
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::NilBound { .. } => "nil_bound",
            CheckKind::NilDegree { .. } => "nil_degree",
            CheckKind::WeakNil { .. } => "weak_nil",
            CheckKind::Solv { .. } => "solv",
            CheckKind::TheoremA { .. } => "theorem_a",
            CheckKind::Flags => "flags",
            CheckKind::CdInclusion { .. } => "cd_inclusion",
            CheckKind::ZeroDivisor { .. } => "zero_divisor",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    /// Row key for table summaries.
    pub group: String,
    pub algebra: Arc<Algebra>,
    pub split: ModuleSplit,
    pub paren: ParenPolicy,
    pub check: CheckKind,
}

#[derive(Clone, Debug, Default)]
pub struct CapOverrides {
    pub max_generators: Option<usize>,
    pub max_terms: Option<u64>,
    pub wall_clock_secs: Option<u64>,
}

impl CapOverrides {
    pub fn apply(&self, caps: &mut Caps) {
        if let Some(g) = self.max_generators {
            caps.max_generators = g;
        }
        if let Some(t) = self.max_terms {
            caps.max_terms = t;
        }
        if let Some(s) = self.wall_clock_secs {
            caps.wall_clock_secs = (s != 0).then_some(s);
        }
    }
}

#[derive(Clone, Debug)]
pub struct Manifest {
    pub jobs: Vec<Job>,
    pub mode: Option<Mode>,
    pub caps: CapOverrides,
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    loc: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, loc: impl Into<String>) -> Result<Self> {
        let loc = loc.into();
        let map = v
            .as_object()
            .ok_or_else(|| Error::parse(&loc, "expected an object"))?;
        Ok(Obj { map, loc })
    }

    fn at(&self, key: &str) -> String {
        format!("{}.{key}", self.loc)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|x| Some(x as usize))
                .ok_or_else(|| Error::parse(self.at(key), "expected a non-negative integer")),
        }
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.usize_opt(key)?
            .ok_or_else(|| Error::parse(self.at(key), "missing required integer"))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_bool()
                .ok_or_else(|| Error::parse(self.at(key), "expected a boolean")),
        }
    }

    fn str_opt(&self, key: &str) -> Result<Option<&'a str>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| Error::parse(self.at(key), "expected a string")),
        }
    }

    fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::parse(
                    self.at(key),
                    format!("unknown field; expected one of {}", known.join(", ")),
                ));
            }
        }
        Ok(())
    }
}

/// Reads a manifest file. Relative `file` sources resolve against its
/// directory.
pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let loc = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(&loc, e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::parse(&loc, e.to_string()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_manifest(&v, &base)
}

pub fn parse_manifest(v: &Value, base: &Path) -> Result<Manifest> {
    let top = Obj::new(v, "manifest")?;
    top.reject_unknown(&["schema_version", "algebra", "split", "mode", "trials", "seed", "caps", "checks"])?;
    if let Some(ver) = top.usize_opt("schema_version")? {
        if ver as u32 != RUN_SCHEMA_VERSION {
            return Err(Error::parse(
                top.at("schema_version"),
                format!("unsupported schema version {ver} (expected {RUN_SCHEMA_VERSION})"),
            ));
        }
    }
    let algebra = Arc::new(parse_algebra(
        top.get("algebra")
            .ok_or_else(|| Error::parse(top.at("algebra"), "missing algebra source"))?,
        &top.at("algebra"),
        base,
    )?);
    let split = parse_split(top.get("split"), &algebra, &top.at("split"))?;
    let mode = parse_mode(&top)?;
    let caps = match top.get("caps") {
        None => CapOverrides::default(),
        Some(c) => {
            let c = Obj::new(c, top.at("caps"))?;
            c.reject_unknown(&["max_generators", "max_terms", "wall_clock_secs"])?;
            CapOverrides {
                max_generators: c.usize_opt("max_generators")?,
                max_terms: c.usize_opt("max_terms")?.map(|x| x as u64),
                wall_clock_secs: c.usize_opt("wall_clock_secs")?.map(|x| x as u64),
            }
        }
    };
    let checks = top
        .get("checks")
        .and_then(Value::as_array)
        .filter(|c| !c.is_empty())
        .ok_or_else(|| Error::parse(top.at("checks"), "expected a nonempty array"))?;
    let jobs = checks
        .iter()
        .enumerate()
        .map(|(i, c)| parse_check(c, &format!("manifest.checks[{i}]"), &algebra, &split))
        .collect::<Result<Vec<_>>>()?;
    Ok(Manifest { jobs, mode, caps })
}

fn parse_mode(top: &Obj) -> Result<Option<Mode>> {
    let trials = top.usize_opt("trials")?.map(|t| t as u32);
    let seed = top.usize_opt("seed")?.map(|s| s as u64);
    match top.str_opt("mode")? {
        None => Ok(None),
        Some("exact") => Ok(Some(Mode::Exact)),
        Some("modular") => Ok(Some(Mode::Modular {
            trials: trials.unwrap_or(DEFAULT_TRIALS),
            seed: seed.unwrap_or(0),
        })),
        Some(other) => Err(Error::parse(
            top.at("mode"),
            format!("unknown mode {other:?} (exact | modular)"),
        )),
    }
}

/// `{"zoo": ...}`, `{"inline": <algebra manifest>}` or `{"file": path}`.
pub fn parse_algebra(v: &Value, loc: &str, base: &Path) -> Result<Algebra> {
    let o = Obj::new(v, loc)?;
    if o.get("zoo").is_some() {
        return zoo::from_spec(v, loc);
    }
    if let Some(inline) = o.get("inline") {
        return Algebra::from_manifest(inline).map_err(|e| relocate(e, &o.at("inline")));
    }
    if let Some(path) = o.str_opt("file")? {
        let p: PathBuf = base.join(path);
        let text = std::fs::read_to_string(&p)
            .map_err(|e| Error::parse(o.at("file"), format!("cannot read {}: {e}", p.display())))?;
        let inner: Value = serde_json::from_str(&text)
            .map_err(|e| Error::parse(o.at("file"), format!("{}: {e}", p.display())))?;
        return parse_algebra_value(&inner, &o.at("file"), p.parent().unwrap_or(base));
    }
    Err(Error::parse(loc, "expected one of zoo, inline, file"))
}

/// A bare algebra manifest, a zoo spec, or a source object.
pub fn parse_algebra_value(v: &Value, loc: &str, base: &Path) -> Result<Algebra> {
    match v.as_object() {
        Some(o) if o.contains_key("basis") => {
            Algebra::from_manifest(v).map_err(|e| relocate(e, loc))
        }
        _ => parse_algebra(v, loc, base),
    }
}

fn relocate(e: Error, prefix: &str) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{prefix}: {location}"),
            message,
        },
        other => Error::Parse {
            location: prefix.to_string(),
            message: other.to_string(),
        },
    }
}

fn parse_vectors(v: &Value, dim: usize, loc: &str) -> Result<Vec<Vector>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(loc, "expected an array of vectors"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| {
            let l = format!("{loc}[{i}]");
            let entries = row
                .as_array()
                .ok_or_else(|| Error::parse(&l, "expected an array of coordinates"))?;
            if entries.len() != dim {
                return Err(Error::parse(
                    &l,
                    format!("vector has {} coordinates, algebra has dimension {dim}", entries.len()),
                ));
            }
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| parse_scalar(x, &format!("{l}[{j}]")))
                .collect()
        })
        .collect()
}

fn parse_indices(v: &Value, dim: usize, loc: &str) -> Result<Vec<usize>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(loc, "expected an array of basis indices"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            let idx = x
                .as_u64()
                .ok_or_else(|| Error::parse(format!("{loc}[{i}]"), "expected an index"))?
                as usize;
            if idx >= dim {
                return Err(Error::parse(
                    format!("{loc}[{i}]"),
                    format!("basis index {idx} out of range for dimension {dim}"),
                ));
            }
            Ok(idx)
        })
        .collect()
}

/// `"full"`, `"part0"`, `"part1"`, `{"coordinates": [...]}`,
/// `{"vectors": [[...]]}`, optionally with `"grade"` to take a component.
fn parse_subject(v: Option<&Value>, a: &Arc<Algebra>, split: &ModuleSplit, loc: &str) -> Result<Submodule> {
    let Some(v) = v else {
        return Ok(Submodule::full(a));
    };
    if let Some(s) = v.as_str() {
        return match s {
            "full" => Ok(Submodule::full(a)),
            "part0" => Ok(split.part0().clone()),
            "part1" => Ok(split.part1().clone()),
            other => Err(Error::parse(loc, format!("unknown submodule {other:?} (full | part0 | part1)"))),
        };
    }
    let o = Obj::new(v, loc)?;
    o.reject_unknown(&["coordinates", "vectors", "of", "grade"])?;
    let base = if let Some(c) = o.get("coordinates") {
        Submodule::coordinate(a, &parse_indices(c, a.dim(), &o.at("coordinates"))?)?
    } else if let Some(vs) = o.get("vectors") {
        Submodule::new(a, parse_vectors(vs, a.dim(), &o.at("vectors"))?)
            .map_err(|e| Error::parse(o.at("vectors"), e.to_string()))?
    } else {
        parse_subject(o.get("of"), a, split, &o.at("of"))?
    };
    match o.get("grade") {
        None => Ok(base),
        Some(g) => base.component(&parse_grade(g, a, &o.at("grade"))?),
    }
}

fn parse_grade(v: &Value, a: &Algebra, loc: &str) -> Result<Grade> {
    let g = a
        .grading()
        .ok_or_else(|| Error::parse(loc, format!("{} is not graded", a.display_name())))?;
    Grade::from_json(v, g.rank(), g.parity_rank(), loc)
}

/// Absent or `"whole"`, `{"translations": k}`, or `{"part0": .., "part1": ..}`.
fn parse_split(v: Option<&Value>, a: &Arc<Algebra>, loc: &str) -> Result<ModuleSplit> {
    let whole = ModuleSplit::whole(a);
    let Some(v) = v else {
        return Ok(whole);
    };
    if v.as_str() == Some("whole") {
        return Ok(whole);
    }
    let o = Obj::new(v, loc)?;
    o.reject_unknown(&["translations", "part0", "part1"])?;
    if let Some(k) = o.usize_opt("translations")? {
        if k > a.dim() {
            return Err(Error::parse(o.at("translations"), format!("{k} exceeds dimension {}", a.dim())));
        }
        let t: Vec<usize> = (0..k).collect();
        let r: Vec<usize> = (k..a.dim()).collect();
        return ModuleSplit::from_parts(Submodule::coordinate(a, &t)?, Submodule::coordinate(a, &r)?)
            .map_err(|e| Error::parse(loc, e.to_string()));
    }
    let p0 = parse_subject(o.get("part0"), a, &whole, &o.at("part0"))?;
    let p1 = match o.get("part1") {
        Some(p) => parse_subject(Some(p), a, &whole, &o.at("part1"))?,
        None => Submodule::zero(a),
    };
    ModuleSplit::from_parts(p0, p1).map_err(|e| Error::parse(loc, e.to_string()))
}

fn parse_paren(o: &Obj) -> Result<ParenPolicy> {
    match o.str_opt("paren")? {
        None | Some("auto") => Ok(ParenPolicy::Auto),
        Some("right_nested") => Ok(ParenPolicy::RightNested),
        Some("all") => Ok(ParenPolicy::All),
        Some(other) => Err(Error::parse(
            o.at("paren"),
            format!("unknown policy {other:?} (auto | right_nested | all)"),
        )),
    }
}

fn require_positive(o: &Obj, key: &str, x: usize) -> Result<usize> {
    if x == 0 {
        return Err(Error::parse(o.at(key), "must be at least 1"));
    }
    Ok(x)
}

fn parse_check(v: &Value, loc: &str, a: &Arc<Algebra>, split: &ModuleSplit) -> Result<Job> {
    let o = Obj::new(v, loc)?;
    let name = o
        .str_opt("check")?
        .ok_or_else(|| Error::parse(o.at("check"), "missing check name"))?;
    fn known(extra: &[&'static str]) -> Vec<&'static str> {
        ["check", "paren", "label"].iter().chain(extra).copied().collect()
    }
    let subject = || parse_subject(o.get("subject"), a, split, &o.at("subject"));
    let check = match name {
        "nil_bound" | "weak_nil" => {
            o.reject_unknown(&known(&["subject", "k", "s"]))?;
            let k = require_positive(&o, "k", o.usize("k")?)?;
            let s = o.usize("s")?;
            if name == "nil_bound" {
                CheckKind::NilBound { subject: subject()?, k, s }
            } else {
                if a.grading().is_none() {
                    return Err(Error::parse(loc, format!("weak_nil needs a graded algebra; {} is not", a.display_name())));
                }
                CheckKind::WeakNil { subject: subject()?, k, s }
            }
        }
        "nil_degree" => {
            o.reject_unknown(&known(&["subject", "k", "s_max"]))?;
            CheckKind::NilDegree {
                subject: subject()?,
                k: require_positive(&o, "k", o.usize("k")?)?,
                s_max: require_positive(&o, "s_max", o.usize_or("s_max", 4)?)?,
            }
        }
        "solv" => {
            o.reject_unknown(&known(&["subject", "parts", "k", "s", "weak"]))?;
            let parts_v = o
                .get("parts")
                .and_then(Value::as_array)
                .filter(|p| !p.is_empty())
                .ok_or_else(|| Error::parse(o.at("parts"), "expected a nonempty array of submodules"))?;
            let parts = parts_v
                .iter()
                .enumerate()
                .map(|(i, p)| parse_subject(Some(p), a, split, &format!("{}[{i}]", o.at("parts"))))
                .collect::<Result<Vec<_>>>()?;
            CheckKind::Solv {
                subject: subject()?,
                parts,
                k: require_positive(&o, "k", o.usize("k")?)?,
                s: o.usize("s")?,
                weak: o.bool_or("weak", false)?,
            }
        }
        "theorem_a" => {
            o.reject_unknown(&known(&["condition", "premise", "n", "lambda", "shift", "shape"]))?;
            parse_theorem(&o, a, split)?
        }
        "flags" => {
            o.reject_unknown(&known(&[]))?;
            CheckKind::Flags
        }
        "cd_inclusion" => {
            o.reject_unknown(&known(&["k", "p", "q", "l"]))?;
            let k = require_positive(&o, "k", o.usize_or("k", 1)?)?;
            let p = o.usize_or("p", k)?;
            let q = o.usize_or("q", 0)?;
            if p + q != k {
                return Err(Error::parse(loc, format!("signature ({p},{q}) does not sum to k = {k}")));
            }
            let l = require_positive(&o, "l", o.usize("l")?)?;
            if l > zoo::CD_TOWER_MAX as usize {
                return Err(Error::parse(o.at("l"), format!("tower level above {}", zoo::CD_TOWER_MAX)));
            }
            CheckKind::CdInclusion { k, p, q, l: l as u32 }
        }
        "zero_divisor" => {
            o.reject_unknown(&known(&["bound"]))?;
            CheckKind::ZeroDivisor {
                bound: require_positive(&o, "bound", o.usize_or("bound", 2)?)?,
            }
        }
        other => {
            return Err(Error::parse(
                o.at("check"),
                format!("unknown check {other:?}; known: nil_bound, nil_degree, weak_nil, solv, theorem_a, flags, cd_inclusion, zero_divisor"),
            ))
        }
    };
    Ok(Job {
        group: o.str_opt("label")?.unwrap_or(name).to_string(),
        algebra: Arc::clone(a),
        split: split.clone(),
        paren: parse_paren(&o)?,
        check,
    })
}

fn parse_theorem(o: &Obj, a: &Arc<Algebra>, split: &ModuleSplit) -> Result<CheckKind> {
    let condition = match o.str_opt("condition")?.unwrap_or("G1") {
        "G1" => Condition::G1,
        "G2" => Condition::G2,
        other => return Err(Error::parse(o.at("condition"), format!("unknown condition {other:?} (G1 | G2)"))),
    };
    let entries = o
        .get("premise")
        .and_then(Value::as_array)
        .filter(|p| !p.is_empty())
        .ok_or_else(|| Error::parse(o.at("premise"), "expected a nonempty array"))?;
    let mut grades = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let el = format!("{}[{i}]", o.at("premise"));
        let eo = Obj::new(e, &el)?;
        eo.reject_unknown(&["grade", "k", "s", "parts", "weak"])?;
        let grade = match eo.get("grade") {
            None | Some(Value::Null) => None,
            Some(g) => Some(parse_grade(g, a, &eo.at("grade"))?),
        };
        let parts = match eo.get("parts") {
            None => Vec::new(),
            Some(p) => p
                .as_array()
                .ok_or_else(|| Error::parse(eo.at("parts"), "expected an array of submodules"))?
                .iter()
                .enumerate()
                .map(|(j, x)| parse_subject(Some(x), a, split, &format!("{}[{j}]", eo.at("parts"))))
                .collect::<Result<_>>()?,
        };
        grades.push(GradePremise {
            grade,
            k: require_positive(&eo, "k", eo.usize("k")?)?,
            s: eo.usize("s")?,
            parts,
            weak: eo.bool_or("weak", false)?,
        });
    }
    let n = match o.get("n") {
        None => (3..=7).collect(),
        Some(v) => {
            let arr = v
                .as_array()
                .filter(|x| !x.is_empty())
                .ok_or_else(|| Error::parse(o.at("n"), "expected a nonempty array of dimensions"))?;
            arr.iter()
                .enumerate()
                .map(|(i, x)| match x.as_u64() {
                    Some(n) if n >= 2 => Ok(n as usize),
                    _ => Err(Error::parse(format!("{}[{i}]", o.at("n")), "dimension must be an integer >= 2")),
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let lambda = match o.get("lambda") {
        None => rational::one(),
        Some(v) => parse_scalar(v, &o.at("lambda"))?,
    };
    let shift = match o.get("shift") {
        None | Some(Value::Null) => None,
        Some(g) => Some(parse_grade(g, a, &o.at("shift"))?),
    };
    let shape = match o.str_opt("shape")? {
        None | Some("right_nested") => PowerShape::RightNested,
        Some("left_nested") => PowerShape::LeftNested,
        Some(other) => return Err(Error::parse(o.at("shape"), format!("unknown shape {other:?}"))),
    };
    Ok(CheckKind::TheoremA {
        premise: Premise { condition, grades },
        n,
        lambda,
        shift,
        shape,
    })
}

/// Inline JSON or a path to a JSON file holding an algebra.
pub fn resolve_algebra_arg(arg: &str) -> Result<Algebra> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(arg)?;
        return parse_algebra_value(&v, "algebra", Path::new("."));
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(arg, e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::parse(arg, e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    // A run manifest carries its algebra under "algebra".
    match v.get("algebra") {
        Some(inner) if v.get("checks").is_some() => parse_algebra(inner, "manifest.algebra", base),
        _ => parse_algebra_value(&v, "algebra", base),
    }
}
