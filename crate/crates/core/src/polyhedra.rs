//! Integer linear relations over named blocks of variables, the systems they
//! form, exact and approximate membership, sampling-based comparison and
//! serialization.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical_cones::ConeId;
use crate::combinatorics::{Chamber, IndexSet, Rational};
use crate::error::{Error, Result};

pub type Point<T> = BTreeMap<String, Vec<T>>;
pub type RationalPoint = Point<Rational>;
pub type FloatPoint = Point<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableBlock {
    pub name: String,
    pub dim: usize,
    pub chamber: Chamber,
}

impl VariableBlock {
    pub fn new(name: &str, dim: usize, chamber: Chamber) -> Self {
        VariableBlock { name: name.to_string(), dim, chamber }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelKind {
    #[serde(rename = "GE")]
    Ge,
    #[serde(rename = "EQ")]
    Eq,
}

/// Where a relation came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Equality,
    Bound {
        label: String,
    },
    Chamber {
        block: String,
    },
    Pair {
        i: Vec<usize>,
        j: Vec<usize>,
        coeff: u64,
    },
    Triple {
        i: Vec<usize>,
        j: Vec<usize>,
        l: Vec<usize>,
        coeffs: Vec<u64>,
    },
    Polarized {
        i_plus: Vec<usize>,
        i_minus: Vec<usize>,
        j_plus: Vec<usize>,
        j_minus: Vec<usize>,
        l_plus: Vec<usize>,
        l_minus: Vec<usize>,
        coeffs: Vec<u64>,
    },
    Fixture {
        name: String,
    },
    Manual,
}

impl Provenance {
    pub fn kind(&self) -> &'static str {
        match self {
            Provenance::Equality => "equality",
            Provenance::Bound { .. } => "bound",
            Provenance::Chamber { .. } => "chamber",
            Provenance::Pair { .. } => "pair",
            Provenance::Triple { .. } => "triple",
            Provenance::Polarized { .. } => "polarized",
            Provenance::Fixture { .. } => "fixture",
            Provenance::Manual => "manual",
        }
    }
}

type RelationKey = (RelKind, BTreeMap<String, Vec<i64>>);

/// `Σ coeffs·v ≥ 0` or `= 0`, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRelation {
    coeffs: BTreeMap<String, Vec<i64>>,
    rel: RelKind,
    provenance: Provenance,
}

impl LinearRelation {
    pub fn new(
        coeffs: BTreeMap<String, Vec<i64>>,
        rel: RelKind,
        provenance: Provenance,
    ) -> Result<Self> {
        canonicalize(LinearRelation { coeffs, rel, provenance })
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Vec<i64>> {
        &self.coeffs
    }

    pub fn rel(&self) -> RelKind {
        self.rel
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    fn key(&self) -> RelationKey {
        (self.rel, self.coeffs.clone())
    }

    fn negated_coeffs(&self) -> BTreeMap<String, Vec<i64>> {
        self.coeffs
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|c| -c).collect()))
            .collect()
    }

    /// Same coefficients and relation, provenance ignored.
    pub fn same_form(&self, other: &LinearRelation) -> bool {
        self.rel == other.rel && self.coeffs == other.coeffs
    }

    /// Renders as `x1 + 2y1 >= z1`, terms ordered by `blocks` then index.
    pub fn render(&self, blocks: &[VariableBlock]) -> String {
        let mut order: Vec<&str> = blocks.iter().map(|b| b.name.as_str()).collect();
        for name in self.coeffs.keys() {
            if !order.contains(&name.as_str()) {
                order.push(name);
            }
        }
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for name in order {
            let Some(v) = self.coeffs.get(name) else { continue };
            for (i, &c) in v.iter().enumerate() {
                let term = match c.abs() {
                    0 => continue,
                    1 => format!("{name}{}", i + 1),
                    a => format!("{a}{name}{}", i + 1),
                };
                if c > 0 {
                    lhs.push(term);
                } else {
                    rhs.push(term);
                }
            }
        }
        let side = |t: Vec<String>| if t.is_empty() { "0".to_string() } else { t.join(" + ") };
        let sym = match self.rel {
            RelKind::Ge => ">=",
            RelKind::Eq => "=",
        };
        format!("{} {sym} {}", side(lhs), side(rhs))
    }

    /// Parses the text rendering. Accepts `>=`, `<=` and `=`, coefficients
    /// written `2y1`, `2 y1`, `2*y_1`, and `0` for an empty side.
    pub fn parse(text: &str, blocks: &[VariableBlock], provenance: Provenance) -> Result<Self> {
        let (lhs, rhs, rel) = if let Some((l, r)) = text.split_once(">=") {
            (l, r, RelKind::Ge)
        } else if let Some((l, r)) = text.split_once("<=") {
            (r, l, RelKind::Ge)
        } else if let Some((l, r)) = text.split_once('=') {
            (l, r, RelKind::Eq)
        } else {
            return Err(Error::Parse(format!("no relation symbol in `{text}`")));
        };
        let mut form = Form::new(blocks);
        parse_side(lhs, 1, &mut form)?;
        parse_side(rhs, -1, &mut form)?;
        match rel {
            RelKind::Ge => form.ge(provenance),
            RelKind::Eq => form.eq(provenance),
        }
    }

    fn flat(&self, layout: &Layout) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for (name, v) in &self.coeffs {
            let off = layout.offset[name];
            out.extend(v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (off + i, *c)));
        }
        out
    }
}

fn parse_side(side: &str, sign: i64, form: &mut Form) -> Result<()> {
    let cleaned = side.replace('*', " ").replace('-', " + -");
    for raw in cleaned.split('+') {
        let term: String = raw.split_whitespace().collect();
        if term.is_empty() || term == "0" {
            continue;
        }
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.as_str()),
        };
        let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
        let coeff: i64 = if digits == 0 { 1 } else { body[..digits].parse().map_err(|_| bad_term(&term))? };
        let rest = &body[digits..];
        let name_len = rest.chars().take_while(|c| c.is_ascii_alphabetic()).count();
        if name_len == 0 {
            return Err(bad_term(&term));
        }
        let name = &rest[..name_len];
        let index: usize = rest[name_len..]
            .trim_start_matches('_')
            .parse()
            .map_err(|_| bad_term(&term))?;
        let c = if neg { -coeff } else { coeff };
        form.add(name, index, sign * c)?;
    }
    Ok(())
}

fn bad_term(term: &str) -> Error {
    Error::Parse(format!("cannot read term `{term}`"))
}

/// Divides out the content, drops zero blocks and fixes the sign of
/// equalities so that the leading coefficient is positive.
pub fn canonicalize(mut rel: LinearRelation) -> Result<LinearRelation> {
    rel.coeffs.retain(|_, v| v.iter().any(|&c| c != 0));
    let g = rel
        .coeffs
        .values()
        .flatten()
        .fold(0i64, |g, &c| g.gcd(&c));
    if g == 0 {
        return Err(Error::ZeroRelation);
    }
    let leading_negative = rel
        .coeffs
        .values()
        .flatten()
        .find(|&&c| c != 0)
        .is_some_and(|&c| c < 0);
    let d = if rel.rel == RelKind::Eq && leading_negative { -g } else { g };
    for v in rel.coeffs.values_mut() {
        for c in v.iter_mut() {
            *c /= d;
        }
    }
    Ok(rel)
}

/// Accumulates coefficients block by block before turning them into a
/// relation.
#[derive(Debug, Clone)]
pub struct Form {
    coeffs: BTreeMap<String, Vec<i64>>,
}

impl Form {
    pub fn new(blocks: &[VariableBlock]) -> Self {
        Form {
            coeffs: blocks.iter().map(|b| (b.name.clone(), vec![0; b.dim])).collect(),
        }
    }

    /// Adds `c·v_index` (1-based index).
    pub fn add(&mut self, block: &str, index: usize, c: i64) -> Result<&mut Self> {
        let v = self
            .coeffs
            .get_mut(block)
            .ok_or_else(|| Error::UnknownBlock(block.to_string()))?;
        if index == 0 || index > v.len() {
            return Err(Error::DimensionMismatch { expected: v.len(), found: index });
        }
        v[index - 1] += c;
        Ok(self)
    }

    /// Adds `c·|v|_I`.
    pub fn add_set(&mut self, block: &str, set: &IndexSet, c: i64) -> Result<&mut Self> {
        for &i in set.elements() {
            self.add(block, i, c)?;
        }
        Ok(self)
    }

    /// Adds `c·|v|` over the whole block.
    pub fn add_all(&mut self, block: &str, c: i64) -> Result<&mut Self> {
        let dim = self.coeffs.get(block).map(Vec::len).ok_or_else(|| Error::UnknownBlock(block.to_string()))?;
        for i in 1..=dim {
            self.add(block, i, c)?;
        }
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().flatten().all(|&c| c == 0)
    }

    pub fn ge(self, provenance: Provenance) -> Result<LinearRelation> {
        LinearRelation::new(self.coeffs, RelKind::Ge, provenance)
    }

    pub fn eq(self, provenance: Provenance) -> Result<LinearRelation> {
        LinearRelation::new(self.coeffs, RelKind::Eq, provenance)
    }
}

/// Flattened coordinates of a system in block order.
#[derive(Debug, Clone)]
struct Layout {
    offset: HashMap<String, usize>,
    total: usize,
}

#[derive(Debug, Clone)]
struct Compiled {
    layout: Layout,
    rows: Vec<Vec<(usize, i64)>>,
}

/// A cone given by chamber constraints on its blocks and a list of linear
/// relations.
#[derive(Debug, Clone)]
pub struct InequalitySystem {
    cone: ConeId,
    blocks: Vec<VariableBlock>,
    relations: Vec<LinearRelation>,
    seen: HashSet<RelationKey>,
    compiled: OnceLock<Compiled>,
}

impl PartialEq for InequalitySystem {
    fn eq(&self, other: &Self) -> bool {
        self.cone == other.cone && self.blocks == other.blocks && self.relations == other.relations
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "site", rename_all = "kebab-case")]
pub enum Violation {
    /// `index` is 1-based; the failing comparison is between entries
    /// `index` and `index + 1`, or the sign of the last entry.
    Chamber { block: String, index: usize, margin: f64 },
    Relation { index: usize, margin: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Membership {
    pub violations: Vec<Violation>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest amount by which any constraint fails.
    pub fn max_violation(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| match v {
                Violation::Chamber { margin, .. } | Violation::Relation { margin, .. } => margin.abs(),
            })
            .fold(0.0, f64::max)
    }
}

impl InequalitySystem {
    pub fn new(cone: ConeId, blocks: Vec<VariableBlock>) -> Result<Self> {
        let mut names = HashSet::new();
        for b in &blocks {
            if !names.insert(b.name.as_str()) {
                return Err(Error::BlockMismatch(format!("duplicate block `{}`", b.name)));
            }
            if b.dim == 0 {
                return Err(Error::BadRange(format!("block `{}` has dimension 0", b.name)));
            }
        }
        Ok(InequalitySystem {
            cone,
            blocks,
            relations: Vec::new(),
            seen: HashSet::new(),
            compiled: OnceLock::new(),
        })
    }

    pub fn cone(&self) -> &ConeId {
        &self.cone
    }

    pub fn blocks(&self) -> &[VariableBlock] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&VariableBlock> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn relations(&self) -> &[LinearRelation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn form(&self) -> Form {
        Form::new(&self.blocks)
    }

    /// Adds a relation unless an identical one is present. An inequality
    /// whose coefficients are those of an equality (up to sign) is implied
    /// by it and dropped. Returns whether the system changed.
    pub fn insert(&mut self, rel: LinearRelation) -> Result<bool> {
        for (name, v) in &rel.coeffs {
            let block = self.block(name).ok_or_else(|| Error::UnknownBlock(name.clone()))?;
            if block.dim != v.len() {
                return Err(Error::DimensionMismatch { expected: block.dim, found: v.len() });
            }
        }
        let rel = canonicalize(rel)?;
        if self.seen.contains(&rel.key()) {
            return Ok(false);
        }
        match rel.rel {
            RelKind::Ge => {
                let implied = self.seen.contains(&(RelKind::Eq, rel.coeffs.clone()))
                    || self.seen.contains(&(RelKind::Eq, rel.negated_coeffs()));
                if implied {
                    return Ok(false);
                }
            }
            RelKind::Eq => {
                let pos = rel.coeffs.clone();
                let neg = rel.negated_coeffs();
                self.relations.retain(|r| !(r.rel == RelKind::Ge && (r.coeffs == pos || r.coeffs == neg)));
                self.seen.remove(&(RelKind::Ge, pos));
                self.seen.remove(&(RelKind::Ge, neg));
            }
        }
        self.seen.insert(rel.key());
        self.relations.push(rel);
        self.compiled = OnceLock::new();
        Ok(true)
    }

    pub fn contains_relation(&self, rel: &LinearRelation) -> bool {
        self.seen.contains(&rel.key())
    }

    pub fn equalities(&self) -> impl Iterator<Item = &LinearRelation> {
        self.relations.iter().filter(|r| r.rel == RelKind::Eq)
    }

    pub fn ge_count(&self) -> usize {
        self.relations.iter().filter(|r| r.rel == RelKind::Ge).count()
    }

    pub fn eq_count(&self) -> usize {
        self.relations.iter().filter(|r| r.rel == RelKind::Eq).count()
    }

    /// Relation counts keyed by provenance kind.
    pub fn count_by_kind(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for r in &self.relations {
            *out.entry(r.provenance.kind()).or_insert(0) += 1;
        }
        out
    }

    /// Copy of the system whose chamber orderings appear as explicit
    /// relations.
    pub fn with_chamber_relations(&self) -> Result<Self> {
        let mut out = Self::new(self.cone.clone(), self.blocks.clone())?;
        for b in &self.blocks {
            let prov = Provenance::Chamber { block: b.name.clone() };
            if b.chamber != Chamber::Unconstrained {
                for i in 1..b.dim {
                    let mut f = self.form();
                    f.add(&b.name, i, 1)?.add(&b.name, i + 1, -1)?;
                    out.insert(f.ge(prov.clone())?)?;
                }
            }
            if b.chamber == Chamber::DecreasingNonneg {
                let mut f = self.form();
                f.add(&b.name, b.dim, 1)?;
                out.insert(f.ge(prov.clone())?)?;
            }
        }
        for r in &self.relations {
            out.insert(r.clone())?;
        }
        Ok(out)
    }

    fn compiled(&self) -> &Compiled {
        self.compiled.get_or_init(|| {
            let mut offset = HashMap::new();
            let mut total = 0;
            for b in &self.blocks {
                offset.insert(b.name.clone(), total);
                total += b.dim;
            }
            let layout = Layout { offset, total };
            let rows = self.relations.iter().map(|r| r.flat(&layout)).collect();
            Compiled { layout, rows }
        })
    }

    fn flatten<'a, T>(&self, point: &'a Point<T>) -> Result<Vec<&'a T>> {
        let mut flat = Vec::with_capacity(self.compiled().layout.total);
        for b in &self.blocks {
            let v = point.get(&b.name).ok_or_else(|| Error::UnknownBlock(b.name.clone()))?;
            if v.len() != b.dim {
                return Err(Error::DimensionMismatch { expected: b.dim, found: v.len() });
            }
            flat.extend(v.iter());
        }
        if point.len() != self.blocks.len() {
            let extra = point.keys().find(|k| self.block(k).is_none()).cloned().unwrap_or_default();
            return Err(Error::UnknownBlock(extra));
        }
        Ok(flat)
    }

    /// Membership of a rational point. Chamber constraints are checked
    /// first, then every relation.
    pub fn member(&self, point: &RationalPoint, mode: Mode) -> Result<Membership> {
        match mode {
            Mode::Float(tol) => {
                let fp: FloatPoint = point
                    .iter()
                    .map(|(k, v)| (k.clone(), v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()))
                    .collect();
                self.member_float(&fp, tol)
            }
            Mode::Exact => self.member_exact(point),
        }
    }

    pub fn contains_point(&self, point: &RationalPoint) -> Result<bool> {
        Ok(self.member_exact(point)?.is_member())
    }

    fn member_exact(&self, point: &RationalPoint) -> Result<Membership> {
        let flat = self.flatten(point)?;
        let denom = flat.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<BigInt> = flat.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
        let small: Option<Vec<i64>> = scaled.iter().map(|x| x.to_i64()).collect();
        let approx = |x: &BigInt| BigRational::new(x.clone(), denom.clone()).to_f64().unwrap_or(f64::NAN);
        let mut out = Membership::default();
        match small {
            Some(ints) => {
                let values: Vec<i128> = ints.iter().map(|&v| v as i128).collect();
                self.check_chambers(&values, |v| v.is_negative(), |v| approx(&BigInt::from(*v)), &mut out);
                for (idx, row) in self.compiled().rows.iter().enumerate() {
                    let s: i128 = row.iter().map(|&(k, c)| values[k] * c as i128).sum();
                    self.record(idx, s < 0, s != 0, || approx(&BigInt::from(s)), &mut out);
                }
            }
            None => {
                self.check_chambers(&scaled, |v| v.is_negative(), approx, &mut out);
                for (idx, row) in self.compiled().rows.iter().enumerate() {
                    let s: BigInt = row.iter().map(|&(k, c)| &scaled[k] * c).sum();
                    self.record(idx, s.is_negative(), !s.is_zero(), || approx(&s), &mut out);
                }
            }
        }
        Ok(out)
    }

    /// Membership with a tolerance: an inequality fails when its value is
    /// below `-tol`, an equality when its absolute value exceeds `tol`.
    pub fn member_float(&self, point: &FloatPoint, tol: f64) -> Result<Membership> {
        let flat: Vec<f64> = self.flatten(point)?.into_iter().copied().collect();
        let mut out = Membership::default();
        self.check_chambers(&flat, |v| *v < -tol, |v| *v, &mut out);
        for (idx, row) in self.compiled().rows.iter().enumerate() {
            let s: f64 = row.iter().map(|&(k, c)| flat[k] * c as f64).sum();
            self.record(idx, s < -tol, s.abs() > tol, || s, &mut out);
        }
        Ok(out)
    }

    fn record(&self, idx: usize, below: bool, nonzero: bool, value: impl Fn() -> f64, out: &mut Membership) {
        let failed = match self.relations[idx].rel {
            RelKind::Ge => below,
            RelKind::Eq => nonzero,
        };
        if failed {
            out.violations.push(Violation::Relation { index: idx, margin: value() });
        }
    }

    fn check_chambers<T>(
        &self,
        flat: &[T],
        negative: impl Fn(&T) -> bool,
        value: impl Fn(&T) -> f64,
        out: &mut Membership,
    ) where
        T: Clone + std::ops::Sub<Output = T>,
    {
        let mut off = 0;
        for b in &self.blocks {
            let v = &flat[off..off + b.dim];
            if b.chamber != Chamber::Unconstrained {
                for i in 1..b.dim {
                    let gap = v[i - 1].clone() - v[i].clone();
                    if negative(&gap) {
                        out.violations.push(Violation::Chamber { block: b.name.clone(), index: i, margin: value(&gap) });
                    }
                }
            }
            if b.chamber == Chamber::DecreasingNonneg && negative(&v[b.dim - 1]) {
                out.violations.push(Violation::Chamber {
                    block: b.name.clone(),
                    index: b.dim,
                    margin: value(&v[b.dim - 1]),
                });
            }
            off += b.dim;
        }
    }

    /// Eliminates the equalities from `rel`: each equality's leading
    /// coordinate is cancelled out. Two relations equivalent modulo the
    /// equalities reduce to the same form. `None` when nothing is left.
    pub fn reduce_modulo_equalities(&self, rel: &LinearRelation) -> Option<LinearRelation> {
        let mut coeffs = rel.coeffs.clone();
        for b in &self.blocks {
            coeffs.entry(b.name.clone()).or_insert_with(|| vec![0; b.dim]);
        }
        for eq in self.equalities() {
            let Some((pivot_block, pivot_index, pivot)) = eq
                .coeffs
                .iter()
                .flat_map(|(k, v)| v.iter().enumerate().map(move |(i, c)| (k, i, *c)))
                .find(|(_, _, c)| *c != 0)
            else {
                continue;
            };
            let target = coeffs[pivot_block][pivot_index];
            if target == 0 {
                continue;
            }
            for v in coeffs.values_mut() {
                v.iter_mut().for_each(|c| *c *= pivot);
            }
            for (k, v) in &eq.coeffs {
                let dst = coeffs.get_mut(k).expect("equality blocks are declared");
                for (d, c) in dst.iter_mut().zip(v) {
                    *d -= target * c;
                }
            }
        }
        canonicalize(LinearRelation { coeffs, rel: rel.rel, provenance: Provenance::Manual }).ok()
    }

    /// Whether `rel` is one of the relations here, up to adding multiples
    /// of the equalities.
    pub fn contains_modulo_equalities(&self, rel: &LinearRelation) -> bool {
        let Some(target) = self.reduce_modulo_equalities(rel) else {
            return rel.rel == RelKind::Eq || self.equalities().next().is_some();
        };
        self.relations
            .iter()
            .filter(|r| r.rel == rel.rel)
            .filter_map(|r| self.reduce_modulo_equalities(r))
            .any(|r| r.same_form(&target))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            let _ = writeln!(out, "{}", r.render(&self.blocks));
        }
        out
    }

    /// Builds a system from text, one relation per line. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_text(cone: ConeId, blocks: Vec<VariableBlock>, text: &str, provenance: Provenance) -> Result<Self> {
        let mut sys = Self::new(cone, blocks)?;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let rel = LinearRelation::parse(line, &sys.blocks, provenance.clone())?;
            sys.insert(rel)?;
        }
        Ok(sys)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cone": self.cone.name(),
            "params": self.cone.params_json(),
            "blocks": self.blocks,
            "relations": self.relations,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            cone: String,
            params: serde_json::Value,
            blocks: Vec<VariableBlock>,
            relations: Vec<LinearRelation>,
        }
        let doc: Doc = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let cone = ConeId::from_json(&doc.cone, &doc.params)?;
        let mut sys = Self::new(cone, doc.blocks)?;
        for r in doc.relations {
            sys.insert(r)?;
        }
        Ok(sys)
    }

    fn same_layout(&self, other: &InequalitySystem) -> Result<()> {
        if self.blocks != other.blocks {
            return Err(Error::BlockMismatch(format!(
                "{:?} vs {:?}",
                self.blocks.iter().map(|b| (&b.name, b.dim)).collect::<Vec<_>>(),
                other.blocks.iter().map(|b| (&b.name, b.dim)).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

/// Source of exact test points for [`semantically_equal`].
pub trait PointSampler {
    fn sample(&mut self) -> RationalPoint;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equal { trials: usize, members: usize },
    Separated { point: RationalPoint, in_first: bool },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }
}

/// Compares the exact membership predicates of two systems over the same
/// blocks on `trials` sampled points.
pub fn semantically_equal(
    a: &InequalitySystem,
    b: &InequalitySystem,
    sampler: &mut dyn PointSampler,
    trials: usize,
) -> Result<Verdict> {
    a.same_layout(b)?;
    let mut members = 0;
    for _ in 0..trials {
        let point = sampler.sample();
        let in_a = a.contains_point(&point)?;
        let in_b = b.contains_point(&point)?;
        if in_a != in_b {
            return Ok(Verdict::Separated { point, in_first: in_a });
        }
        members += usize::from(in_a);
    }
    Ok(Verdict::Equal { trials, members })
}

/// Random exact points respecting block chambers. Mixes uniform chamber
/// points, jittered copies of anchor points, segments between the two, and
/// boundary-biased variants with repeated entries and zeros. Equalities of
/// the reference system are enforced on most samples by shifting a block.
#[derive(Debug, Clone)]
pub struct MixedSampler {
    blocks: Vec<VariableBlock>,
    equalities: Vec<LinearRelation>,
    anchors: Vec<RationalPoint>,
    rng: ChaCha8Rng,
    max_denominator: i64,
}

impl MixedSampler {
    pub fn new(reference: &InequalitySystem, seed: u64) -> Self {
        MixedSampler {
            blocks: reference.blocks.clone(),
            equalities: reference.equalities().cloned().collect(),
            anchors: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_denominator: 64,
        }
    }

    /// Points expected to lie inside (or near) the cone.
    pub fn with_anchors(mut self, anchors: Vec<RationalPoint>) -> Self {
        self.anchors = anchors;
        self
    }

    fn ratio(&self, num: i64, den: i64) -> Rational {
        Rational::new(num.into(), den.into())
    }

    fn uniform_point(&mut self) -> RationalPoint {
        let den = self.rng.gen_range(1..=self.max_denominator);
        let mut point = RationalPoint::new();
        for b in self.blocks.clone() {
            let lo = if b.chamber == Chamber::DecreasingNonneg { 0 } else { -4 * den };
            let v: Vec<Rational> = (0..b.dim)
                .map(|_| {
                    if self.rng.gen_ratio(1, 4) {
                        Rational::zero()
                    } else {
                        let k = self.rng.gen_range(lo..=4 * den);
                        self.ratio(k, den)
                    }
                })
                .collect();
            point.insert(b.name.clone(), v);
        }
        self.into_chamber(&mut point);
        point
    }

    fn jittered_anchor(&mut self) -> RationalPoint {
        let mut point = self.anchors[self.rng.gen_range(0..self.anchors.len())].clone();
        let den = self.max_denominator;
        let spread = self.rng.gen_range(0..=3);
        for v in point.values_mut() {
            for x in v.iter_mut() {
                let k = self.rng.gen_range(-spread..=spread);
                *x += self.ratio(k, den);
            }
        }
        self.into_chamber(&mut point);
        point
    }

    fn segment_point(&mut self) -> RationalPoint {
        let anchor = self.anchors[self.rng.gen_range(0..self.anchors.len())].clone();
        let other = self.uniform_point();
        let steps = 32;
        let k = self.rng.gen_range(0..=steps);
        let t = self.ratio(k, steps);
        let s = Rational::one() - &t;
        anchor
            .into_iter()
            .map(|(k, v)| {
                let w = v.iter().zip(&other[&k]).map(|(a, b)| a * &t + b * &s).collect();
                (k, w)
            })
            .collect()
    }

    /// Sorts each block into its chamber.
    fn into_chamber(&self, point: &mut RationalPoint) {
        for b in &self.blocks {
            let v = point.get_mut(&b.name).expect("sampler blocks");
            if b.chamber == Chamber::DecreasingNonneg {
                for x in v.iter_mut() {
                    if x.is_negative() {
                        *x = Rational::zero();
                    }
                }
            }
            if b.chamber != Chamber::Unconstrained {
                v.sort_by(|a, b| b.cmp(a));
            }
        }
    }

    /// Repeats neighbouring entries and zeroes trailing ones.
    fn boundary_bias(&mut self, point: &mut RationalPoint) {
        for b in &self.blocks {
            let v = point.get_mut(&b.name).expect("sampler blocks");
            for i in 1..v.len() {
                if self.rng.gen_ratio(1, 4) {
                    v[i] = v[i - 1].clone();
                }
            }
            if b.chamber == Chamber::DecreasingNonneg && self.rng.gen_ratio(1, 4) {
                let from = self.rng.gen_range(0..v.len());
                for x in &mut v[from..] {
                    *x = Rational::zero();
                }
            }
        }
    }

    /// Shifts one block by a constant so that each equality holds.
    fn enforce_equalities(&mut self, point: &mut RationalPoint) {
        for eq in self.equalities.clone() {
            let candidates: Vec<(&String, i64)> = eq
                .coeffs
                .iter()
                .filter(|(k, v)| {
                    let chamber = self.blocks.iter().find(|b| &b.name == *k).map(|b| b.chamber);
                    chamber != Some(Chamber::DecreasingNonneg) && v.iter().all(|c| *c == v[0] && *c != 0)
                })
                .map(|(k, v)| (k, v[0]))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let (name, c) = candidates[self.rng.gen_range(0..candidates.len())];
            let value: Rational = eq
                .coeffs
                .iter()
                .flat_map(|(k, v)| v.iter().zip(&point[k]).map(|(c, x)| x * Rational::from_integer((*c).into())))
                .sum();
            let dim = point[name].len() as i64;
            let shift = value / Rational::from_integer((c * dim).into());
            for x in point.get_mut(name).expect("equality block").iter_mut() {
                *x -= &shift;
            }
        }
    }
}

impl PointSampler for MixedSampler {
    fn sample(&mut self) -> RationalPoint {
        let roll = self.rng.gen_range(0..20);
        let has_anchors = !self.anchors.is_empty();
        let mut point = match roll {
            0..=6 if has_anchors => self.jittered_anchor(),
            7..=13 if has_anchors => self.segment_point(),
            _ => self.uniform_point(),
        };
        if self.rng.gen_ratio(1, 4) {
            self.boundary_bias(&mut point);
        }
        if !self.rng.gen_ratio(1, 20) {
            self.enforce_equalities(&mut point);
        }
        point
    }
}

/// Builds an exact point from integer blocks.
pub fn integer_point(blocks: &[(&str, &[i64])]) -> RationalPoint {
    blocks
        .iter()
        .map(|(k, v)| (k.to_string(), v.iter().map(|&x| Rational::from_integer(x.into())).collect()))
        .collect()
}
