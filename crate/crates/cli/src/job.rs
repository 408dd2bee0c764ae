//! Job files: a TOML document naming one command plus the tables it reads.
//!
//! Tables may be written out (`[metric_group]`, `[lattice]`, ...) or, for
//! one-table jobs, flattened into the top level (`factors = [2]` next to
//! `command`). Every problem found is reported with its line and column.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::de::{DeTable, DeValue};
use toml::Spanned;

use tqftkit_core::abgroup::FinAbGroup;
use tqftkit_core::dw::{Cocycle2, FiniteGroup, Word};
use tqftkit_core::exactnum::{parse_reduced_fraction, PhaseQZ};
use tqftkit_core::groupoid::{ActionGroupoid, PiTower};
use tqftkit_core::lattice::EvenLattice;
use tqftkit_core::linalg::Matrix;
use tqftkit_core::metric::MetricGroup;
use tqftkit_core::tqft3::SurgeryPresentation;
use tqftkit_core::tqft4::FourManifoldSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    LatticeInfo,
    Gauss,
    Milgram,
    Tower,
    CenterCheck,
    Mtc,
    Verlinde,
    Rt3,
    Anomaly4,
    DwSurface,
    Dw3,
    Dim1,
    GroupoidCard,
    Sum1,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::LatticeInfo,
        Command::Gauss,
        Command::Milgram,
        Command::Tower,
        Command::CenterCheck,
        Command::Mtc,
        Command::Verlinde,
        Command::Rt3,
        Command::Anomaly4,
        Command::DwSurface,
        Command::Dw3,
        Command::Dim1,
        Command::GroupoidCard,
        Command::Sum1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::LatticeInfo => "lattice-info",
            Command::Gauss => "gauss",
            Command::Milgram => "milgram",
            Command::Tower => "tower",
            Command::CenterCheck => "center-check",
            Command::Mtc => "mtc",
            Command::Verlinde => "verlinde",
            Command::Rt3 => "rt3",
            Command::Anomaly4 => "anomaly4",
            Command::DwSurface => "dw-surface",
            Command::Dw3 => "dw3",
            Command::Dim1 => "dim1",
            Command::GroupoidCard => "groupoid-card",
            Command::Sum1 => "sum1",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Tables the command reads.
    fn tables(self) -> &'static [&'static str] {
        match self {
            Command::LatticeInfo => &["lattice"],
            Command::Gauss | Command::Milgram | Command::Mtc => &["metric_group", "lattice"],
            Command::Tower | Command::CenterCheck => &["lattice", "tower"],
            Command::Verlinde => &["metric_group", "lattice", "surface"],
            Command::Rt3 => &["metric_group", "lattice", "surgery"],
            Command::Anomaly4 => &["metric_group", "lattice", "fourmanifold"],
            Command::DwSurface => &["group", "cocycle", "surface"],
            Command::Dw3 => &["group", "presentation"],
            Command::Dim1 | Command::Sum1 => &["group", "character"],
            Command::GroupoidCard => &["groupoid", "pitower"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a job's metric group comes from. A lattice is kept so that its
/// signature can be compared against the discriminant form.
#[derive(Clone, Debug)]
pub enum MetricSource {
    Explicit(MetricGroup),
    Lattice(EvenLattice),
}

#[derive(Clone, Debug)]
pub enum CardSource {
    Groupoid { group: String, set: String, groupoid: ActionGroupoid },
    Tower(PiTower),
}

#[derive(Clone, Debug)]
pub enum Payload {
    Lattice(EvenLattice),
    Metric(MetricSource),
    Levels { lattice: EvenLattice, levels: Vec<u64> },
    Verlinde { metric: MetricSource, genus: u32 },
    Surgery { metric: MetricSource, link: SurgeryPresentation },
    FourManifold { metric: MetricSource, manifold: FourManifoldSpec },
    Surface { group: FiniteGroup, cocycle: Option<Cocycle2>, genus: u32 },
    Presentation { group: FiniteGroup, generators: usize, relators: Vec<Word> },
    Character { group: FiniteGroup, values: Vec<PhaseQZ> },
    Cardinality(CardSource),
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub payload: Payload,
    /// Hex SHA-256 of the job text.
    pub input_sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JobError {
    #[error("TOML parse error at {0}")]
    Parse(Issue),
    #[error("invalid job: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Schema(Vec<Issue>),
}

impl JobError {
    pub fn code(&self) -> &'static str {
        match self {
            JobError::Parse(_) => "ParseError",
            JobError::Schema(_) => "SchemaError",
        }
    }

    pub fn issues(&self) -> &[Issue] {
        match self {
            JobError::Parse(i) => std::slice::from_ref(i),
            JobError::Schema(v) => v,
        }
    }
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

struct Issues<'t> {
    text: &'t str,
    list: Vec<Issue>,
}

impl<'t> Issues<'t> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn issue(&self, span: &Range<usize>, message: String) -> Issue {
        let (line, column) = self.position(span.start);
        Issue { line, column, message }
    }

    fn at(&mut self, span: &Range<usize>, message: impl Into<String>) {
        let i = self.issue(span, message.into());
        self.list.push(i);
    }
}

type Value<'a> = Spanned<DeValue<'a>>;

struct Field<'v, 'a> {
    key: String,
    value: &'v Value<'a>,
}

/// One table's fields, gathered from a `[table]` block and any flattened
/// top-level keys.
struct Section<'v, 'a> {
    name: &'static str,
    span: Range<usize>,
    fields: Vec<Field<'v, 'a>>,
}

impl<'v, 'a> Section<'v, 'a> {
    fn has(&self, key: &str) -> bool {
        self.fields.iter().any(|f| f.key == key)
    }

    fn take(&mut self, key: &str) -> Option<&'v Value<'a>> {
        let pos = self.fields.iter().position(|f| f.key == key)?;
        Some(self.fields.remove(pos).value)
    }

    fn require(&mut self, key: &str, e: &mut Issues) -> Option<&'v Value<'a>> {
        let v = self.take(key);
        if v.is_none() {
            e.at(&self.span, format!("[{}] needs `{key}`", self.name));
        }
        v
    }

    /// Reports every field nobody consumed.
    fn finish(self, e: &mut Issues) {
        for f in self.fields {
            e.at(&f.value.span(), format!("unknown key `{}` in [{}]", f.key, self.name));
        }
    }
}

/// Top-level keys that stand for a field of some table.
fn flat_target(key: &str, value: &DeValue, command: Command) -> Option<(&'static str, &'static str)> {
    let allowed = command.tables();
    let candidates: &[(&str, &str)] = match key {
        "factors" => &[("metric_group", "factors")],
        "q_diag" => &[("metric_group", "q_diag")],
        "b_off" => &[("metric_group", "b_off")],
        "lattice" if value.is_str() => &[("lattice", "name")],
        "lattice" if value.is_array() => &[("lattice", "gram")],
        "gram" => &[("lattice", "gram")],
        "n" => &[("tower", "n")],
        "genus" => &[("surface", "genus")],
        "linking" => &[("surgery", "linking")],
        "name" => &[("fourmanifold", "name")],
        "b1" => &[("fourmanifold", "b1")],
        "intersection" => &[("fourmanifold", "intersection")],
        "group" if value.is_str() => &[("groupoid", "group"), ("group", "name")],
        "cayley" => &[("group", "cayley")],
        "table" => &[("cocycle", "table")],
        "generators" => &[("presentation", "generators")],
        "relators" => &[("presentation", "relators")],
        "set" => &[("groupoid", "set")],
        "components" => &[("pitower", "components")],
        "character" if value.is_array() => &[("character", "values")],
        _ => &[],
    };
    candidates.iter().copied().find(|(t, _)| allowed.contains(t))
}

fn int(v: &Value, key: &str, e: &mut Issues) -> Option<i64> {
    match v.get_ref() {
        DeValue::Integer(i) => match i64::from_str_radix(i.as_str(), i.radix()) {
            Ok(x) => Some(x),
            Err(_) => {
                e.at(&v.span(), format!("`{key}` is out of range"));
                None
            }
        },
        other => {
            e.at(&v.span(), format!("`{key}` must be an integer, found {}", other.type_str()));
            None
        }
    }
}

fn nonneg(v: &Value, key: &str, e: &mut Issues) -> Option<u64> {
    let x = int(v, key, e)?;
    if x < 0 {
        e.at(&v.span(), format!("`{key}` must be nonnegative"));
        return None;
    }
    Some(x as u64)
}

fn string<'v>(v: &'v Value, key: &str, e: &mut Issues) -> Option<&'v str> {
    let s = v.get_ref().as_str();
    if s.is_none() {
        e.at(&v.span(), format!("`{key}` must be a string, found {}", v.get_ref().type_str()));
    }
    s
}

fn array<'v, 'a>(v: &'v Value<'a>, key: &str, e: &mut Issues) -> Option<Vec<&'v Value<'a>>> {
    match v.get_ref().as_array() {
        Some(a) => Some(a.iter().collect()),
        None => {
            e.at(&v.span(), format!("`{key}` must be an array, found {}", v.get_ref().type_str()));
            None
        }
    }
}

/// Collects every element, reporting all failures rather than the first.
fn list<T>(v: &Value, key: &str, e: &mut Issues, f: impl Fn(&Value, &str, &mut Issues) -> Option<T>) -> Option<Vec<T>> {
    let items = array(v, key, e)?;
    let out: Vec<Option<T>> = items.into_iter().map(|x| f(x, key, e)).collect();
    out.into_iter().collect()
}

fn int_list(v: &Value, key: &str, e: &mut Issues) -> Option<Vec<i64>> {
    list(v, key, e, int)
}

fn int_rows(v: &Value, key: &str, e: &mut Issues) -> Option<Vec<Vec<i64>>> {
    list(v, key, e, int_list)
}

/// A square integer matrix; `[]` is the empty matrix.
fn square(v: &Value, key: &str, e: &mut Issues) -> Option<Matrix<i64>> {
    let rows = int_rows(v, key, e)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        e.at(&v.span(), format!("`{key}` must be a square matrix"));
        return None;
    }
    Some(if n == 0 { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows) })
}

fn symmetric(v: &Value, key: &str, e: &mut Issues) -> Option<Matrix<i64>> {
    let m = square(v, key, e)?;
    if !m.is_symmetric() {
        e.at(&v.span(), format!("`{key}` must be symmetric"));
        return None;
    }
    Some(m)
}

fn fraction(v: &Value, key: &str, e: &mut Issues) -> Option<PhaseQZ> {
    let s = string(v, key, e)?;
    match parse_reduced_fraction(s) {
        Ok(r) => Some(PhaseQZ::from_ratio(r)),
        Err(err) => {
            e.at(&v.span(), format!("`{key}`: {err}"));
            None
        }
    }
}

fn fraction_list(v: &Value, key: &str, e: &mut Issues) -> Option<Vec<PhaseQZ>> {
    list(v, key, e, fraction)
}

fn fraction_rows(v: &Value, key: &str, e: &mut Issues) -> Option<Vec<Vec<PhaseQZ>>> {
    list(v, key, e, fraction_list)
}

/// Turns a construction failure into an issue at `span`.
fn built<T>(r: tqftkit_core::Result<T>, span: &Range<usize>, what: &str, e: &mut Issues) -> Option<T> {
    r.map_err(|err| e.at(span, format!("{what}: {err}"))).ok()
}

fn metric_group(mut s: Section, e: &mut Issues) -> Option<MetricGroup> {
    let span = s.span.clone();
    let factors = s.require("factors", e).and_then(|v| {
        let f = int_list(v, "factors", e)?;
        if f.iter().any(|&d| d < 1) {
            e.at(&v.span(), "`factors` must be positive");
            return None;
        }
        built(FinAbGroup::new(f.into_iter().map(|d| d as u64).collect()), &v.span(), "factors", e)
    });
    let q = s.require("q_diag", e).and_then(|v| fraction_list(v, "q_diag", e).map(|q| (q, v.span())));
    let b = match s.take("b_off") {
        Some(v) => fraction_rows(v, "b_off", e),
        None => Some(Vec::new()),
    };
    s.finish(e);
    let (group, (q, qspan), b) = (factors?, q?, b?);
    if q.len() != group.rank() {
        e.at(&qspan, format!("`q_diag` has {} entries for {} factors", q.len(), group.rank()));
        return None;
    }
    built(MetricGroup::new(group, q, b), &span, "metric group", e)
}

fn lattice(mut s: Section, e: &mut Issues) -> Option<EvenLattice> {
    let span = s.span.clone();
    let name = s.take("name");
    let gram = s.take("gram");
    s.finish(e);
    match (name, gram) {
        (Some(v), None) => {
            let n = string(v, "name", e)?;
            built(EvenLattice::named(n), &v.span(), "lattice", e)
        }
        (None, Some(v)) => {
            let g = square(v, "gram", e)?;
            built(EvenLattice::new(g), &v.span(), "lattice", e)
        }
        _ => {
            e.at(&span, "[lattice] needs exactly one of `name` and `gram`");
            None
        }
    }
}

fn levels(mut s: Section, e: &mut Issues) -> Option<Vec<u64>> {
    let v = s.require("n", e);
    s.finish(e);
    let v = v?;
    let ns = if v.get_ref().is_array() { int_list(v, "n", e)? } else { vec![int(v, "n", e)?] };
    if ns.is_empty() || ns.iter().any(|&n| n < 1) {
        e.at(&v.span(), "`n` must be a positive level or a nonempty list of them");
        return None;
    }
    Some(ns.into_iter().map(|n| n as u64).collect())
}

fn genus(mut s: Section, e: &mut Issues) -> Option<u32> {
    let v = s.require("genus", e);
    s.finish(e);
    let v = v?;
    let g = nonneg(v, "genus", e)?;
    match u32::try_from(g) {
        Ok(g) => Some(g),
        Err(_) => {
            e.at(&v.span(), "`genus` is too large");
            None
        }
    }
}

fn surgery(mut s: Section, e: &mut Issues) -> Option<SurgeryPresentation> {
    let v = s.require("linking", e);
    s.finish(e);
    let v = v?;
    let m = symmetric(v, "linking", e)?;
    built(SurgeryPresentation::new(m), &v.span(), "linking matrix", e)
}

fn four_manifold(mut s: Section, e: &mut Issues) -> Option<FourManifoldSpec> {
    let span = s.span.clone();
    let name = s.take("name");
    let b1 = s.take("b1");
    let q = s.take("intersection");
    s.finish(e);
    match (name, b1, q) {
        (Some(v), None, None) => {
            let n = string(v, "name", e)?;
            built(FourManifoldSpec::named(n), &v.span(), "4-manifold", e)
        }
        (None, b1, Some(qv)) => {
            let b1 = match b1 {
                Some(v) => u32::try_from(nonneg(v, "b1", e)?).ok()?,
                None => 0,
            };
            let q = symmetric(qv, "intersection", e)?;
            built(FourManifoldSpec::new(None, b1, q), &qv.span(), "intersection form", e)
        }
        _ => {
            e.at(&span, "[fourmanifold] needs either `name` or `intersection` (with optional `b1`)");
            None
        }
    }
}

fn group(mut s: Section, e: &mut Issues) -> Option<FiniteGroup> {
    let span = s.span.clone();
    let name = s.take("name");
    let cayley = s.take("cayley");
    s.finish(e);
    match (name, cayley) {
        (Some(v), None) => {
            let n = string(v, "name", e)?;
            built(FiniteGroup::named(n), &v.span(), "group", e)
        }
        (None, Some(v)) => {
            let rows = int_rows(v, "cayley", e)?;
            if rows.iter().flatten().any(|&x| x < 0) {
                e.at(&v.span(), "`cayley` entries are element indices and must be nonnegative");
                return None;
            }
            let table = rows.into_iter().map(|r| r.into_iter().map(|x| x as usize).collect()).collect();
            built(FiniteGroup::from_cayley("cayley", table), &v.span(), "Cayley table", e)
        }
        _ => {
            e.at(&span, "[group] needs exactly one of `name` and `cayley`");
            None
        }
    }
}

fn cocycle(mut s: Section, g: &FiniteGroup, e: &mut Issues) -> Option<Cocycle2> {
    let v = s.require("table", e);
    s.finish(e);
    let v = v?;
    let t = fraction_rows(v, "table", e)?;
    built(Cocycle2::from_table(g.clone(), t), &v.span(), "cocycle", e)
}

fn presentation(mut s: Section, e: &mut Issues) -> Option<(usize, Vec<Word>)> {
    let k = s.require("generators", e).and_then(|v| nonneg(v, "generators", e));
    let rels = match s.take("relators") {
        Some(v) => int_rows(v, "relators", e).map(|r| (r, v.span())),
        None => Some((Vec::new(), s.span.clone())),
    };
    s.finish(e);
    let (k, (rels, span)) = (k? as usize, rels?);
    let mut words = Vec::new();
    for r in rels {
        if r.len() % 2 != 0 {
            e.at(&span, "each relator lists (generator, exponent) pairs");
            return None;
        }
        let mut w = Word::new();
        for p in r.chunks(2) {
            if p[0] < 0 || p[0] as usize >= k {
                e.at(&span, format!("relator uses generator {} of {k}", p[0]));
                return None;
            }
            w.push((p[0] as usize, p[1]));
        }
        words.push(w);
    }
    Some((k, words))
}

fn character(s: Option<Section>, g: &FiniteGroup, e: &mut Issues) -> Option<Vec<PhaseQZ>> {
    let Some(mut s) = s else {
        return Some(vec![PhaseQZ::ZERO; g.order()]);
    };
    let v = s.require("values", e);
    s.finish(e);
    let v = v?;
    let vals = fraction_list(v, "values", e)?;
    if vals.len() != g.order() {
        e.at(&v.span(), format!("character needs {} values, one per element, found {}", g.order(), vals.len()));
        return None;
    }
    Some(vals)
}

fn groupoid(mut s: Section, e: &mut Issues) -> Option<CardSource> {
    let g = s.require("group", e).and_then(|v| {
        let n = string(v, "group", e)?;
        built(FiniteGroup::named(n), &v.span(), "group", e).map(|g| (n.to_string(), g))
    });
    let set = s.require("set", e).and_then(|v| string(v, "set", e).map(|x| (x.to_string(), v.span())));
    s.finish(e);
    let ((name, g), (set, span)) = (g?, set?);
    let groupoid = match set.as_str() {
        "point" => ActionGroupoid::point(g),
        "self-conj" => ActionGroupoid::adjoint(g),
        other => {
            e.at(&span, format!("`set` must be \"point\" or \"self-conj\", found {other:?}"));
            return None;
        }
    };
    Some(CardSource::Groupoid { group: name, set, groupoid })
}

fn pitower(mut s: Section, e: &mut Issues) -> Option<PiTower> {
    let v = s.require("components", e);
    s.finish(e);
    let v = v?;
    let rows = int_rows(v, "components", e)?;
    if rows.iter().flatten().any(|&x| x < 1) {
        e.at(&v.span(), "homotopy group orders must be positive");
        return None;
    }
    let comps = rows.into_iter().map(|r| r.into_iter().map(|x| x as u64).collect()).collect();
    built(PiTower::new(comps), &v.span(), "components", e)
}

fn metric_source(sections: &mut BTreeMap<&'static str, Section>, span: &Range<usize>, e: &mut Issues) -> Option<MetricSource> {
    match (sections.remove("metric_group"), sections.remove("lattice")) {
        (Some(m), None) => metric_group(m, e).map(MetricSource::Explicit),
        (None, Some(l)) => lattice(l, e).map(MetricSource::Lattice),
        (Some(m), Some(_)) => {
            e.at(&m.span, "give either [metric_group] or [lattice], not both");
            None
        }
        (None, None) => {
            e.at(span, "job needs a metric group: [metric_group] or [lattice]");
            None
        }
    }
}

fn required<'v, 'a>(sections: &mut BTreeMap<&'static str, Section<'v, 'a>>, name: &str, span: &Range<usize>, e: &mut Issues) -> Option<Section<'v, 'a>> {
    let s = sections.remove(name);
    if s.is_none() {
        e.at(span, format!("job needs a [{name}] table"));
    }
    s
}

/// Parses and validates a job file.
pub fn parse_job(text: &str) -> Result<JobSpec, JobError> {
    let mut e = Issues { text, list: Vec::new() };
    let root = match DeTable::parse(text) {
        Ok(t) => t,
        Err(err) => {
            let span = err.span().unwrap_or(0..0);
            let first = err.message().lines().next().unwrap_or("invalid TOML").to_string();
            return Err(JobError::Parse(e.issue(&span, first)));
        }
    };
    let doc_span = 0..0;
    let table = root.get_ref();

    let command = match table.get("command") {
        None => {
            e.at(&doc_span, format!("missing `command`; expected one of {}", command_list()));
            return Err(JobError::Schema(e.list));
        }
        Some(v) => match v.get_ref().as_str().and_then(Command::from_name) {
            Some(c) => c,
            None => {
                e.at(&v.span(), format!("unknown command; expected one of {}", command_list()));
                return Err(JobError::Schema(e.list));
            }
        },
    };

    let mut sections: BTreeMap<&'static str, Section> = BTreeMap::new();
    for (key, value) in table.iter() {
        let k: &str = key.get_ref();
        if k == "command" {
            continue;
        }
        if let (Some(&name), Some(inner)) = (command.tables().iter().find(|t| **t == k), value.get_ref().as_table()) {
            let sec = sections.entry(name).or_insert_with(|| Section { name, span: key.span(), fields: Vec::new() });
            sec.span = key.span();
            for (ik, iv) in inner.iter() {
                let ik: &str = ik.get_ref();
                if sec.has(ik) {
                    e.at(&iv.span(), format!("`{ik}` given twice for [{name}]"));
                    continue;
                }
                sec.fields.push(Field { key: ik.to_string(), value: iv });
            }
            continue;
        }
        match flat_target(k, value.get_ref(), command) {
            Some((name, field)) => {
                let sec = sections.entry(name).or_insert_with(|| Section { name, span: key.span(), fields: Vec::new() });
                if sec.has(field) {
                    e.at(&value.span(), format!("`{field}` given twice for [{name}]"));
                    continue;
                }
                sec.fields.push(Field { key: field.to_string(), value });
            }
            None => e.at(&key.span(), format!("unknown key `{k}` for command {command}")),
        }
    }

    let payload = assemble(command, &mut sections, &doc_span, &mut e);
    for (_, s) in sections {
        e.at(&s.span, format!("table [{}] is not used by command {command}", s.name));
    }
    match payload {
        Some(payload) if e.list.is_empty() => Ok(JobSpec { command, payload, input_sha256: sha256_hex(text) }),
        _ => {
            if e.list.is_empty() {
                e.at(&doc_span, "invalid job");
            }
            e.list.sort_by_key(|i| (i.line, i.column));
            Err(JobError::Schema(e.list))
        }
    }
}

fn command_list() -> String {
    Command::ALL.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
}

fn assemble(command: Command, sections: &mut BTreeMap<&'static str, Section>, span: &Range<usize>, e: &mut Issues) -> Option<Payload> {
    match command {
        Command::LatticeInfo => lattice(required(sections, "lattice", span, e)?, e).map(Payload::Lattice),
        Command::Gauss | Command::Milgram | Command::Mtc => metric_source(sections, span, e).map(Payload::Metric),
        Command::Tower | Command::CenterCheck => {
            let l = required(sections, "lattice", span, e).and_then(|s| lattice(s, e));
            let n = required(sections, "tower", span, e).and_then(|s| levels(s, e));
            Some(Payload::Levels { lattice: l?, levels: n? })
        }
        Command::Verlinde => {
            let m = metric_source(sections, span, e);
            let g = required(sections, "surface", span, e).and_then(|s| genus(s, e));
            Some(Payload::Verlinde { metric: m?, genus: g? })
        }
        Command::Rt3 => {
            let m = metric_source(sections, span, e);
            let l = required(sections, "surgery", span, e).and_then(|s| surgery(s, e));
            Some(Payload::Surgery { metric: m?, link: l? })
        }
        Command::Anomaly4 => {
            let m = metric_source(sections, span, e);
            let x = required(sections, "fourmanifold", span, e).and_then(|s| four_manifold(s, e));
            Some(Payload::FourManifold { metric: m?, manifold: x? })
        }
        Command::DwSurface => {
            let g = required(sections, "group", span, e).and_then(|s| group(s, e));
            let genus = required(sections, "surface", span, e).and_then(|s| genus(s, e));
            let c = sections.remove("cocycle");
            let g = g?;
            let cocycle = match c {
                Some(s) => Some(cocycle(s, &g, e)?),
                None => None,
            };
            Some(Payload::Surface { group: g, cocycle, genus: genus? })
        }
        Command::Dw3 => {
            let g = required(sections, "group", span, e).and_then(|s| group(s, e));
            let p = required(sections, "presentation", span, e).and_then(|s| presentation(s, e));
            let (generators, relators) = p?;
            Some(Payload::Presentation { group: g?, generators, relators })
        }
        Command::Dim1 | Command::Sum1 => {
            let g = required(sections, "group", span, e).and_then(|s| group(s, e));
            let c = sections.remove("character");
            let g = g?;
            let values = character(c, &g, e)?;
            Some(Payload::Character { group: g, values })
        }
        Command::GroupoidCard => match (sections.remove("groupoid"), sections.remove("pitower")) {
            (Some(g), None) => groupoid(g, e).map(Payload::Cardinality),
            (None, Some(p)) => pitower(p, e).map(|t| Payload::Cardinality(CardSource::Tower(t))),
            (Some(g), Some(_)) => {
                e.at(&g.span, "give either [groupoid] or [pitower], not both");
                None
            }
            (None, None) => {
                e.at(span, "job needs [groupoid] or [pitower]");
                None
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_lines(text: &str) -> Vec<usize> {
        match parse_job(text) {
            Err(JobError::Schema(v)) => v.iter().map(|i| i.line).collect(),
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn flat_milgram_job() {
        let j = parse_job("command = \"milgram\"\nfactors = [2]\nq_diag = [\"1/4\"]\n").unwrap();
        assert_eq!(j.command, Command::Milgram);
        match j.payload {
            Payload::Metric(MetricSource::Explicit(m)) => assert_eq!(m.order(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tabled_job_matches_flat() {
        let a = parse_job("command = \"milgram\"\n[metric_group]\nfactors = [2]\nq_diag = [\"1/4\"]\n").unwrap();
        assert!(matches!(a.payload, Payload::Metric(MetricSource::Explicit(_))));
    }

    #[test]
    fn non_symmetric_linking_is_schema_error() {
        let text = "command = \"rt3\"\nlattice = \"A1\"\n[surgery]\nlinking = [[1, 2], [0, 1]]\n";
        assert_eq!(schema_lines(text), vec![4]);
    }

    #[test]
    fn anomaly_catalog_lookup() {
        let j = parse_job("command = \"anomaly4\"\nname = \"K3\"\nlattice = \"A1\"\n").unwrap();
        match j.payload {
            Payload::FourManifold { metric: MetricSource::Lattice(l), manifold } => {
                assert_eq!(l.rank(), 1);
                assert_eq!((manifold.euler(), manifold.signature()), (24, -16));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_reduced_fraction_rejected() {
        let text = "command = \"gauss\"\nfactors = [2]\nq_diag = [\"2/8\"]\n";
        assert_eq!(schema_lines(text), vec![3]);
    }

    #[test]
    fn unknown_keys_and_tables() {
        let text = "command = \"dim1\"\ngroup = \"Z3\"\ncolour = 1\n[surgery]\nlinking = [[1]]\n";
        let lines = schema_lines(text);
        assert!(lines.contains(&3));
        assert!(lines.contains(&4));
        let text = "command = \"dw-surface\"\n[group]\nname = \"S3\"\nextra = true\n[surface]\ngenus = 1\n";
        assert_eq!(schema_lines(text), vec![4]);
    }

    #[test]
    fn missing_and_unknown_command() {
        assert!(matches!(parse_job("factors = [2]\n"), Err(JobError::Schema(_))));
        assert_eq!(schema_lines("command = \"frobnicate\"\n"), vec![1]);
    }

    #[test]
    fn toml_syntax_error_has_position() {
        match parse_job("command = \"gauss\"\nfactors = [2\n") {
            Err(JobError::Parse(i)) => assert!(i.line >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn metric_source_conflicts() {
        let text = "command = \"mtc\"\nlattice = \"A2\"\n[metric_group]\nfactors = [3]\nq_diag = [\"1/3\"]\n";
        assert_eq!(schema_lines(text), vec![3]);
        assert_eq!(schema_lines("command = \"mtc\"\n"), vec![1]);
    }

    #[test]
    fn character_defaults_to_trivial() {
        let j = parse_job("command = \"dim1\"\ngroup = \"Z4\"\n").unwrap();
        match j.payload {
            Payload::Character { values, .. } => assert_eq!(values, vec![PhaseQZ::ZERO; 4]),
            other => panic!("{other:?}"),
        }
        let text = "command = \"sum1\"\ngroup = \"Z2\"\ncharacter = [\"0/1\"]\n";
        assert_eq!(schema_lines(text), vec![3]);
    }

    #[test]
    fn presentation_and_groupoid() {
        let j = parse_job("command = \"dw3\"\ngroup = \"S3\"\n[presentation]\ngenerators = 2\nrelators = [[0, 1, 1, 1, 0, -1, 1, -1]]\n")
            .unwrap();
        assert!(matches!(j.payload, Payload::Presentation { generators: 2, .. }));
        let text = "command = \"dw3\"\ngroup = \"S3\"\n[presentation]\ngenerators = 1\nrelators = [[1, 1]]\n";
        assert_eq!(schema_lines(text), vec![5]);
        let j = parse_job("command = \"groupoid-card\"\n[groupoid]\ngroup = \"Z3\"\nset = \"self-conj\"\n").unwrap();
        assert!(matches!(j.payload, Payload::Cardinality(CardSource::Groupoid { .. })));
        let text = "command = \"groupoid-card\"\n[groupoid]\ngroup = \"Z3\"\nset = \"line\"\n";
        assert_eq!(schema_lines(text), vec![4]);
    }

    #[test]
    fn hash_depends_on_text() {
        let a = parse_job("command = \"dim1\"\ngroup = \"Z2\"\n").unwrap();
        let b = parse_job("command = \"dim1\"\ngroup = \"Z2\"\n\n").unwrap();
        assert_ne!(a.input_sha256, b.input_sha256);
        assert_eq!(a.input_sha256.len(), 64);
    }
}
