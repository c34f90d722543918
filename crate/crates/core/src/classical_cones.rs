//! Horn(n) and LR(m,n), plus the cone identifiers shared by every generator.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::combinatorics::{Chamber, IndexSet, Rational, SpectrumVector};
use crate::error::{Error, Result};
use crate::lr::lr_subset;
use crate::polyhedra::{InequalitySystem, Provenance, RationalPoint, VariableBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeKind {
    Horn,
    LrMn,
    E1,
    E2,
    Sing,
    SoOdd,
    A,
    B,
    S,
    T,
}

impl ConeKind {
    pub const ALL: [ConeKind; 10] = [
        ConeKind::Horn,
        ConeKind::LrMn,
        ConeKind::E1,
        ConeKind::E2,
        ConeKind::Sing,
        ConeKind::SoOdd,
        ConeKind::A,
        ConeKind::B,
        ConeKind::S,
        ConeKind::T,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConeKind::Horn => "horn",
            ConeKind::LrMn => "lr",
            ConeKind::E1 => "e1",
            ConeKind::E2 => "e2",
            ConeKind::Sing => "sing",
            ConeKind::SoOdd => "so-odd",
            ConeKind::A => "a",
            ConeKind::B => "b",
            ConeKind::S => "s",
            ConeKind::T => "t",
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            ConeKind::Horn | ConeKind::E1 | ConeKind::E2 | ConeKind::B => &["n"],
            ConeKind::LrMn => &["m", "n"],
            ConeKind::SoOdd => &["q"],
            ConeKind::Sing | ConeKind::A | ConeKind::S | ConeKind::T => &["p", "q"],
        }
    }

    pub fn variants(&self) -> &'static [Variant] {
        use Variant::*;
        match self {
            ConeKind::Horn | ConeKind::LrMn | ConeKind::E1 | ConeKind::E2 | ConeKind::T => &[Nonzero, StrictOne],
            ConeKind::Sing | ConeKind::SoOdd | ConeKind::B | ConeKind::S => &[Nonzero, StrictOne, Weak],
            ConeKind::A => &[Nonzero, StrictOne, Fflp, OsWeak],
        }
    }
}

impl FromStr for ConeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnsupportedCone(s.to_string()))
    }
}

/// Which admissibility test selects the index triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Variant {
    /// Every LR coefficient involved is nonzero (the "full" description).
    #[default]
    Nonzero,
    /// Every LR coefficient involved equals one.
    StrictOne,
    /// Drops the second, ♮-reduced coefficient test.
    Weak,
    /// Triples of subsets of `[q]` only (A(p,q)).
    Fflp,
    /// One coefficient test with `2r ≤ p + q` (A(p,q)).
    OsWeak,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Nonzero => "nonzero",
            Variant::StrictOne => "strict-one",
            Variant::Weak => "weak",
            Variant::Fflp => "fflp",
            Variant::OsWeak => "os-weak",
        }
    }

    /// Whether a coefficient passes this variant's threshold.
    pub fn admits(&self, coeff: u64) -> bool {
        match self {
            Variant::StrictOne => coeff == 1,
            _ => coeff != 0,
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonzero" | "full" => Ok(Variant::Nonzero),
            "strict-one" => Ok(Variant::StrictOne),
            "weak" => Ok(Variant::Weak),
            "fflp" => Ok(Variant::Fflp),
            "os-weak" => Ok(Variant::OsWeak),
            _ => Err(Error::Parse(format!("unknown variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the supported cones with its integer parameters, in the order
/// given by [`ConeKind::param_names`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeId {
    pub kind: ConeKind,
    pub params: Vec<usize>,
    pub variant: Variant,
}

impl ConeId {
    pub fn new(kind: ConeKind, params: Vec<usize>, variant: Variant) -> Result<Self> {
        let id = ConeId { kind, params, variant };
        id.validate()?;
        Ok(id)
    }

    fn unchecked(kind: ConeKind, params: Vec<usize>) -> Self {
        ConeId { kind, params, variant: Variant::Nonzero }
    }

    pub fn horn(n: usize) -> Self {
        Self::unchecked(ConeKind::Horn, vec![n])
    }
    pub fn lr_mn(m: usize, n: usize) -> Self {
        Self::unchecked(ConeKind::LrMn, vec![m, n])
    }
    pub fn e1(n: usize) -> Self {
        Self::unchecked(ConeKind::E1, vec![n])
    }
    pub fn e2(n: usize) -> Self {
        Self::unchecked(ConeKind::E2, vec![n])
    }
    pub fn sing(p: usize, q: usize) -> Self {
        Self::unchecked(ConeKind::Sing, vec![p, q])
    }
    pub fn so_odd(q: usize) -> Self {
        Self::unchecked(ConeKind::SoOdd, vec![q])
    }
    pub fn a(p: usize, q: usize) -> Self {
        Self::unchecked(ConeKind::A, vec![p, q])
    }
    pub fn b(n: usize) -> Self {
        Self::unchecked(ConeKind::B, vec![n])
    }
    pub fn s(p: usize, q: usize) -> Self {
        Self::unchecked(ConeKind::S, vec![p, q])
    }
    pub fn t(p: usize, q: usize) -> Self {
        Self::unchecked(ConeKind::T, vec![p, q])
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.kind.param_names();
        if self.params.len() != names.len() {
            return Err(Error::BadRange(format!(
                "{} takes parameters {}",
                self.kind.name(),
                names.join(", ")
            )));
        }
        if let Some(i) = self.params.iter().position(|&v| v == 0) {
            return Err(Error::BadRange(format!("{} must be at least 1", names[i])));
        }
        if names == ["p", "q"] && self.params[0] < self.params[1] {
            return Err(Error::BadRange("p must be at least q".to_string()));
        }
        if !self.kind.variants().contains(&self.variant) {
            return Err(Error::BadRange(format!(
                "variant {} is not available for {}",
                self.variant,
                self.kind.name()
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn param(&self, name: &str) -> Option<usize> {
        let i = self.kind.param_names().iter().position(|&n| n == name)?;
        self.params.get(i).copied()
    }

    pub fn params_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (name, v) in self.kind.param_names().iter().zip(&self.params) {
            obj.insert(name.to_string(), json!(v));
        }
        obj.insert("variant".to_string(), json!(self.variant.name()));
        serde_json::Value::Object(obj)
    }

    pub fn from_json(name: &str, params: &serde_json::Value) -> Result<Self> {
        let kind: ConeKind = name.parse()?;
        let values = kind
            .param_names()
            .iter()
            .map(|p| {
                params
                    .get(p)
                    .and_then(serde_json::Value::as_u64)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::Parse(format!("missing parameter `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let variant = match params.get("variant").and_then(serde_json::Value::as_str) {
            Some(v) => v.parse()?,
            None => Variant::Nonzero,
        };
        Self::new(kind, values, variant)
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(ToString::to_string).collect();
        write!(f, "{}({}) [{}]", self.kind.name(), params.join(","), self.variant)
    }
}

/// An element of `LR^n_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornTriple {
    pub i: IndexSet,
    pub j: IndexSet,
    pub l: IndexSet,
    pub coeff: u64,
}

fn horn_variant(variant: Variant) -> Result<()> {
    match variant {
        Variant::Nonzero | Variant::StrictOne => Ok(()),
        v => Err(Error::BadRange(format!("variant {v} does not apply here"))),
    }
}

/// Triples `(I, J, L) ∈ P(r,n)³` with `c^{μ(L)}_{μ(I),μ(J)}` nonzero, or
/// equal to one for the strict variant, in lexicographic order.
pub fn horn_triples(r: usize, n: usize, variant: Variant) -> Result<Vec<HornTriple>> {
    horn_variant(variant)?;
    if r == 0 || r >= n {
        return Err(Error::BadRange(format!("need 1 <= r < n, got r={r}, n={n}")));
    }
    let subsets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
    let per_i: Vec<Vec<HornTriple>> = subsets
        .par_iter()
        .map(|i| {
            let di = i.mu().size();
            let mut out = Vec::new();
            for j in &subsets {
                let dij = di + j.mu().size();
                for l in &subsets {
                    if l.mu().size() != dij {
                        continue;
                    }
                    let coeff = lr_subset(i, j, l);
                    if coeff > 0 && variant.admits(coeff) {
                        out.push(HornTriple { i: i.clone(), j: j.clone(), l: l.clone(), coeff });
                    }
                }
            }
            out
        })
        .collect();
    Ok(per_i.into_iter().flatten().collect())
}

fn decreasing(name: &str, dim: usize) -> VariableBlock {
    VariableBlock::new(name, dim, Chamber::Decreasing)
}

/// Horn(n): `|x| + |y| = |z|` and `|x|_I + |y|_J ≥ |z|_L` over `LR^n_r`,
/// `r < n`.
pub fn horn_system(n: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::Horn, vec![n], variant)?;
    let mut sys = InequalitySystem::new(cone, vec![decreasing("x", n), decreasing("y", n), decreasing("z", n)])?;
    let mut eq = sys.form();
    eq.add_all("x", 1)?.add_all("y", 1)?.add_all("z", -1)?;
    sys.insert(eq.eq(Provenance::Equality)?)?;
    for r in 1..n {
        for t in horn_triples(r, n, variant)? {
            let mut f = sys.form();
            f.add_set("x", &t.i, 1)?.add_set("y", &t.j, 1)?.add_set("z", &t.l, -1)?;
            sys.insert(f.ge(Provenance::Triple {
                i: t.i.elements().to_vec(),
                j: t.j.elements().to_vec(),
                l: t.l.elements().to_vec(),
                coeffs: vec![t.coeff],
            })?)?;
        }
    }
    Ok(sys)
}

/// Exact membership of `(x, y, z)` in Horn(n).
pub fn horn_member(x: &SpectrumVector, y: &SpectrumVector, z: &SpectrumVector, variant: Variant) -> Result<bool> {
    let n = x.len();
    for v in [y, z] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    if n == 0 {
        return Err(Error::BadRange("n must be at least 1".to_string()));
    }
    let sys = horn_system(n, variant)?;
    let point: RationalPoint = [("x", x), ("y", y), ("z", z)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.entries().to_vec()))
        .collect();
    sys.contains_point(&point)
}

/// LR(m,n): spectra `(z, x, y)` of a Hermitian matrix of size `m + n` and of
/// its two diagonal blocks.
pub fn lr_mn_system(m: usize, n: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::LrMn, vec![m, n], variant)?;
    let mut sys = InequalitySystem::new(cone, vec![decreasing("z", m + n), decreasing("x", m), decreasing("y", n)])?;
    let mut eq = sys.form();
    eq.add_all("z", 1)?.add_all("x", -1)?.add_all("y", -1)?;
    sys.insert(eq.eq(Provenance::Equality)?)?;
    let bound = || Provenance::Bound { label: "interlacing".to_string() };
    for k in 1..=m {
        let mut upper = sys.form();
        upper.add("z", k, 1)?.add("x", k, -1)?;
        sys.insert(upper.ge(bound())?)?;
        let mut lower = sys.form();
        lower.add("x", k, 1)?.add("z", n + k, -1)?;
        sys.insert(lower.ge(bound())?)?;
    }
    for l in 1..=n {
        let mut upper = sys.form();
        upper.add("z", l, 1)?.add("y", l, -1)?;
        sys.insert(upper.ge(bound())?)?;
        let mut lower = sys.form();
        lower.add("y", l, 1)?.add("z", m + l, -1)?;
        sys.insert(lower.ge(bound())?)?;
    }
    for (i, j, l, coeff) in lr_mn_triples(m, n, variant) {
        let mut f = sys.form();
        f.add_set("z", &l, 1)?.add_set("x", &i, -1)?.add_set("y", &j, -1)?;
        sys.insert(f.ge(Provenance::Triple {
            i: i.elements().to_vec(),
            j: j.elements().to_vec(),
            l: l.elements().to_vec(),
            coeffs: vec![coeff],
        })?)?;
    }
    Ok(sys)
}

/// Proper subsets `I ⊊ [m]`, `J ⊊ [n]`, not both empty, and
/// `L ⊂ [m+n]` of size `|I| + |J|` passing the coefficient test.
fn lr_mn_triples(m: usize, n: usize, variant: Variant) -> Vec<(IndexSet, IndexSet, IndexSet, u64)> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..n {
            if a + b == 0 {
                continue;
            }
            let ls: Vec<IndexSet> = IndexSet::subsets(a + b, m + n).collect();
            for i in IndexSet::subsets(a, m) {
                for j in IndexSet::subsets(b, n) {
                    let d = i.mu().size() + j.mu().size();
                    for l in ls.iter().filter(|l| l.mu().size() == d) {
                        let coeff = lr_subset(&i, &j, l);
                        if coeff > 0 && variant.admits(coeff) {
                            out.push((i.clone(), j.clone(), l.clone(), coeff));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exact membership of `(z, x, y)` in LR(m,n).
pub fn lr_mn_member(z: &[Rational], x: &[Rational], y: &[Rational], variant: Variant) -> Result<bool> {
    let sys = lr_mn_system(x.len(), y.len(), variant)?;
    let point: RationalPoint = [("z", z), ("x", x), ("y", y)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_vec()))
        .collect();
    sys.contains_point(&point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{integer_point, RelKind};

    fn s(e: &[usize], n: usize) -> IndexSet {
        IndexSet::new(e.to_vec(), n).unwrap()
    }

    fn sv(v: &[i64]) -> SpectrumVector {
        SpectrumVector::from_integers(v, Chamber::Decreasing).unwrap()
    }

    #[test]
    fn r_one_triples_follow_weyl() {
        let t = horn_triples(1, 2, Variant::Nonzero).unwrap();
        let got: Vec<(usize, usize, usize)> =
            t.iter().map(|t| (t.i.elements()[0], t.j.elements()[0], t.l.elements()[0])).collect();
        assert_eq!(got, vec![(1, 1, 1), (1, 2, 2), (2, 1, 2)]);
        let t4 = horn_triples(1, 4, Variant::Nonzero).unwrap();
        assert_eq!(t4.len(), 10);
        assert!(t4.iter().all(|t| t.l.elements()[0] + 1 == t.i.elements()[0] + t.j.elements()[0]));
    }

    #[test]
    fn bad_range() {
        assert!(matches!(horn_triples(2, 2, Variant::Nonzero), Err(Error::BadRange(_))));
        assert!(matches!(horn_triples(0, 2, Variant::Nonzero), Err(Error::BadRange(_))));
        assert!(horn_system(0, Variant::Nonzero).is_err());
        assert!(horn_system(2, Variant::Weak).is_err());
    }

    #[test]
    fn small_horn_systems() {
        let one = horn_system(1, Variant::Nonzero).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.relations()[0].rel(), RelKind::Eq);
        let two = horn_system(2, Variant::Nonzero).unwrap();
        assert_eq!((two.eq_count(), two.ge_count()), (1, 3));
        assert_eq!(two.to_text().lines().next().unwrap(), "x1 + x2 + y1 + y2 = z1 + z2");
    }

    #[test]
    fn horn_four_strict_count() {
        // r = 1 and r = 3: pairs i + j <= 5. r = 2: the 21 triples with
        // c = 1 inside the 2×2 box, listed by hand from Pieri's rule.
        let per_r: Vec<usize> = (1..4).map(|r| horn_triples(r, 4, Variant::StrictOne).unwrap().len()).collect();
        assert_eq!(per_r, vec![10, 21, 10]);
        assert_eq!(horn_system(4, Variant::StrictOne).unwrap().ge_count(), 41);
        assert_eq!(horn_system(3, Variant::StrictOne).unwrap().ge_count(), 12);
    }

    #[test]
    fn weyl_triples_present_for_four() {
        let t = horn_triples(1, 4, Variant::Nonzero).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                if i + j - 1 <= 4 {
                    assert!(t.iter().any(|t| t.i == s(&[i], 4) && t.j == s(&[j], 4) && t.l == s(&[i + j - 1], 4)));
                }
            }
        }
    }

    #[test]
    fn horn_member_examples() {
        let v = Variant::Nonzero;
        assert!(horn_member(&sv(&[3, -1]), &sv(&[0, 0]), &sv(&[3, -1]), v).unwrap());
        assert!(horn_member(&sv(&[1, 0]), &sv(&[1, 0]), &sv(&[2, 0]), v).unwrap());
        assert!(!horn_member(&sv(&[1, 0]), &sv(&[1, 0]), &sv(&[1, 0]), v).unwrap());
        assert!(horn_member(&sv(&[1]), &sv(&[1, 0]), &sv(&[1, 0]), v).is_err());
    }

    #[test]
    fn lr_one_one_is_interlacing() {
        let sys = lr_mn_system(1, 1, Variant::Nonzero).unwrap();
        assert_eq!(sys.eq_count(), 1);
        assert_eq!(sys.ge_count(), 4);
        assert_eq!(sys.count_by_kind().get("triple"), None);
    }

    #[test]
    fn lr_member_example() {
        let sys = lr_mn_system(2, 2, Variant::Nonzero).unwrap();
        let p = integer_point(&[("z", &[2, 1, 1, 0]), ("x", &[2, 0]), ("y", &[1, 1])]);
        assert!(sys.contains_point(&p).unwrap());
    }

    #[test]
    fn cone_id_json() {
        let id = ConeId::sing(3, 2).with_variant(Variant::Weak);
        assert_eq!(ConeId::from_json(id.name(), &id.params_json()).unwrap(), id);
        assert!(ConeId::new(ConeKind::Sing, vec![2, 3], Variant::Nonzero).is_err());
        assert!(ConeId::new(ConeKind::Horn, vec![0], Variant::Nonzero).is_err());
        assert!(ConeId::new(ConeKind::A, vec![2, 1], Variant::Fflp).is_ok());
        assert!(ConeId::new(ConeKind::Horn, vec![2], Variant::Fflp).is_err());
    }
}
