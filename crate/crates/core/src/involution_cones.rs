//! Cones attached to involutions: E_I(n), E_II(n), sing(p,q),
//! Horn(SO_{2q+1}), A(p,q), B(n), S(p,q) and T(p,q).

use rayon::prelude::*;

use crate::classical_cones::{ConeId, ConeKind, Variant};
use crate::combinatorics::{Chamber, IndexSet, PolarizedSet};
use crate::error::{Error, Result};
use crate::lr::lr_subset;
use crate::polyhedra::{InequalitySystem, Provenance, VariableBlock};

fn block(name: &str, dim: usize, chamber: Chamber) -> VariableBlock {
    VariableBlock::new(name, dim, chamber)
}

fn elems(s: &IndexSet) -> Vec<usize> {
    s.elements().to_vec()
}

/// `c^{μ(L)}_{μ(I),μ(J)}` with the degree check done first.
fn coefficient(i: &IndexSet, j: &IndexSet, l: &IndexSet) -> u64 {
    if i.mu().size() + j.mu().size() != l.mu().size() {
        return 0;
    }
    lr_subset(i, j, l)
}

/// E_I(n): `|x| = |y|` and `|x|_I ≥ |y|_J` whenever `c^J_{I,I}` passes.
pub fn e1_system(n: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::E1, vec![n], variant)?;
    let d = Chamber::Decreasing;
    let mut sys = InequalitySystem::new(cone, vec![block("x", n, d), block("y", n, d)])?;
    let mut eq = sys.form();
    eq.add_all("x", 1)?.add_all("y", -1)?;
    sys.insert(eq.eq(Provenance::Equality)?)?;
    for r in 1..=n {
        let sets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
        for i in &sets {
            for j in &sets {
                let c = coefficient(i, i, j);
                if c > 0 && variant.admits(c) {
                    let mut f = sys.form();
                    f.add_set("x", i, 1)?.add_set("y", j, -1)?;
                    sys.insert(f.ge(Provenance::Pair { i: elems(i), j: elems(j), coeff: c })?)?;
                }
            }
        }
    }
    Ok(sys)
}

/// E_II(n): `|x| = 2|y|` and `|x|_I ≥ 2|y|_J` for `|I| = 2r`, `|J| = r`,
/// `r < n`, whenever `c^I_{J,J}` passes.
pub fn e2_system(n: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::E2, vec![n], variant)?;
    let d = Chamber::Decreasing;
    let mut sys = InequalitySystem::new(cone, vec![block("x", 2 * n, d), block("y", n, d)])?;
    let mut eq = sys.form();
    eq.add_all("x", 1)?.add_all("y", -2)?;
    sys.insert(eq.eq(Provenance::Equality)?)?;
    for r in 1..n {
        let big: Vec<IndexSet> = IndexSet::subsets(2 * r, 2 * n).collect();
        for j in IndexSet::subsets(r, n) {
            for i in &big {
                let c = coefficient(&j, &j, i);
                if c > 0 && variant.admits(c) {
                    let mut f = sys.form();
                    f.add_set("x", i, 1)?.add_set("y", &j, -2)?;
                    sys.insert(f.ge(Provenance::Pair { i: elems(i), j: elems(&j), coeff: c })?)?;
                }
            }
        }
    }
    Ok(sys)
}

/// A triple `I, J, L ∈ B(r,p,q)` admitted by the singular value cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingTriple {
    pub i: IndexSet,
    pub j: IndexSet,
    pub l: IndexSet,
    pub i_parts: PolarizedSet,
    pub j_parts: PolarizedSet,
    pub l_parts: PolarizedSet,
    /// The first coefficient, then the reduced one when it was tested.
    pub coeffs: Vec<u64>,
}

/// Three polarized sets read in their respective ambients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizedTriple {
    pub i: PolarizedSet,
    pub j: PolarizedSet,
    pub l: PolarizedSet,
}

impl PolarizedTriple {
    fn provenance(&self, coeffs: Vec<u64>) -> Provenance {
        Provenance::Polarized {
            i_plus: elems(self.i.plus()),
            i_minus: elems(self.i.minus()),
            j_plus: elems(self.j.plus()),
            j_minus: elems(self.j.minus()),
            l_plus: elems(self.l.plus()),
            l_minus: elems(self.l.minus()),
            coeffs,
        }
    }
}

fn check_pq(p: usize, q: usize) -> Result<()> {
    if q == 0 || p < q {
        return Err(Error::BadRange(format!("need p >= q >= 1, got p={p}, q={q}")));
    }
    Ok(())
}

/// `B(r,p,q)`: subsets of `[p+q]` of size `r` avoiding their opposite and
/// the middle range `{q+1, …, p}`, paired with their polarized parts.
pub fn b_sets(r: usize, p: usize, q: usize) -> Vec<(IndexSet, PolarizedSet)> {
    let mut out: Vec<(IndexSet, PolarizedSet)> = PolarizedSet::all(q)
        .into_iter()
        .filter(|x| x.len() == r)
        .map(|x| (x.embed(p).expect("q <= p"), x))
        .collect();
    out.sort();
    out
}

/// Triples of `B(r,p,q)` passing the coefficient tests of `variant`:
/// `c^{L}_{I^o,J^o}` always, and unless weak also
/// `c^{L♮L^{o,c}}_{I^o♮I^c, J^o♮J^c}`.
/// The two coefficients tested for a sing triple of embedded sets
/// `I, J, L ⊂ [n]`, each disjoint from its opposite.
pub fn sing_coefficients(i: &IndexSet, j: &IndexSet, l: &IndexSet) -> Result<(u64, u64)> {
    let first = coefficient(&i.opposite(), &j.opposite(), l);
    let reduce = |s: &IndexSet| s.opposite().natural(&s.complement());
    let second = coefficient(&reduce(i)?, &reduce(j)?, &l.natural(&l.oc())?);
    Ok((first, second))
}

pub fn sing_triples(r: usize, p: usize, q: usize, variant: Variant) -> Result<Vec<SingTriple>> {
    check_pq(p, q)?;
    if r == 0 || r > q {
        return Err(Error::BadRange(format!("need 1 <= r <= q, got r={r}, q={q}")));
    }
    if !matches!(variant, Variant::Nonzero | Variant::StrictOne | Variant::Weak) {
        return Err(Error::BadRange(format!("variant {variant} does not apply to sing")));
    }
    let sets = b_sets(r, p, q);
    struct Prepared {
        set: IndexSet,
        parts: PolarizedSet,
        opposite: IndexSet,
        reduced: IndexSet,
        self_reduced: IndexSet,
    }
    let prepared: Vec<Prepared> = sets
        .into_iter()
        .map(|(set, parts)| {
            let opposite = set.opposite();
            let reduced = opposite.natural(&set.complement()).expect("I^o avoids I");
            let self_reduced = set.natural(&set.oc()).expect("I avoids I^o");
            Prepared { set, parts, opposite, reduced, self_reduced }
        })
        .collect();
    let per_i: Vec<Vec<SingTriple>> = prepared
        .par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in &prepared {
                for c in &prepared {
                    let first = coefficient(&a.opposite, &b.opposite, &c.set);
                    if first == 0 || !variant.admits(first) {
                        continue;
                    }
                    let mut coeffs = vec![first];
                    if variant != Variant::Weak {
                        let second = coefficient(&a.reduced, &b.reduced, &c.self_reduced);
                        if second == 0 || !variant.admits(second) {
                            continue;
                        }
                        coeffs.push(second);
                    }
                    out.push(SingTriple {
                        i: a.set.clone(),
                        j: b.set.clone(),
                        l: c.set.clone(),
                        i_parts: a.parts.clone(),
                        j_parts: b.parts.clone(),
                        l_parts: c.parts.clone(),
                        coeffs,
                    });
                }
            }
            out
        })
        .collect();
    Ok(per_i.into_iter().flatten().collect())
}

/// sing(p,q): `|x|_{I−} + |y|_{J−} + |z|_{L−} ≥ |x|_{I+} + |y|_{J+} + |z|_{L+}`.
pub fn sing_system(p: usize, q: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::Sing, vec![p, q], variant)?;
    sing_like(cone, p, q, variant)
}

fn sing_like(cone: ConeId, p: usize, q: usize, variant: Variant) -> Result<InequalitySystem> {
    let c = Chamber::DecreasingNonneg;
    let mut sys = InequalitySystem::new(cone, vec![block("x", q, c), block("y", q, c), block("z", q, c)])?;
    for r in 1..=q {
        for t in sing_triples(r, p, q, variant)? {
            let mut f = sys.form();
            for (name, parts) in [("x", &t.i_parts), ("y", &t.j_parts), ("z", &t.l_parts)] {
                f.add_set(name, parts.minus(), 1)?.add_set(name, parts.plus(), -1)?;
            }
            let triple = PolarizedTriple { i: t.i_parts, j: t.j_parts, l: t.l_parts };
            sys.insert(f.ge(triple.provenance(t.coeffs))?)?;
        }
    }
    Ok(sys)
}

/// `♯I₋ + ♯J₋ + ♯L₋ = 2(♯I₊ + ♯J₊ + ♯L₊)`.
pub fn is_regular(t: &SingTriple) -> bool {
    let parts = [&t.i_parts, &t.j_parts, &t.l_parts];
    let minus: usize = parts.iter().map(|x| x.minus().len()).sum();
    let plus: usize = parts.iter().map(|x| x.plus().len()).sum();
    minus == 2 * plus
}

/// True when every triple of the nonzero description of sing(p,q) is
/// regular. This is a sufficient test for sing(p,q) = sing(p',q) for all
/// `p' ≥ p`, not a characterization.
pub fn sing_stabilizes(p: usize, q: usize) -> Result<bool> {
    for r in 1..=q {
        if !sing_triples(r, p, q, Variant::Nonzero)?.iter().all(is_regular) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Horn(SO_{2q+1}), which coincides with sing(q+1, q).
pub fn so_odd_system(q: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::SoOdd, vec![q], variant)?;
    sing_like(cone, q + 1, q, variant)
}

/// A(p,q): `|x|_I − |x|_{J^o} ≥ 2(|y|_{L∩[q]} − |y|_{L^o∩[q]})` over the
/// triples selected by `variant`.
pub fn a_system(p: usize, q: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::A, vec![p, q], variant)?;
    let n = p + q;
    let mut sys = InequalitySystem::new(
        cone,
        vec![block("x", n, Chamber::Decreasing), block("y", q, Chamber::DecreasingNonneg)],
    )?;
    let triples = match variant {
        Variant::Fflp => a_triples_fflp(q, n),
        Variant::OsWeak => a_triples_os(n),
        _ => a_triples_full(p, q, variant),
    };
    for (i, j, l, coeffs) in triples {
        let mut f = sys.form();
        f.add_set("x", &i, 1)?.add_set("x", &j.opposite(), -1)?;
        f.add_set("y", &l.restrict(1, q), -2)?.add_set("y", &l.opposite().restrict(1, q), 2)?;
        if f.is_zero() {
            continue;
        }
        let prov = Provenance::Triple { i: elems(&i), j: elems(&j), l: elems(&l), coeffs };
        sys.insert(f.ge(prov)?)?;
    }
    Ok(sys)
}

type Triple = (IndexSet, IndexSet, IndexSet, Vec<u64>);

fn a_triples_full(p: usize, q: usize, variant: Variant) -> Vec<Triple> {
    let n = p + q;
    let mut out = Vec::new();
    for r in 1..=q {
        let sets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
        let ls: Vec<IndexSet> = b_sets(r, p, q).into_iter().map(|(s, _)| s).collect();
        let chunk: Vec<Vec<Triple>> = sets
            .par_iter()
            .map(|i| {
                let mut local = Vec::new();
                let i_oc = i.oc();
                for j in &sets {
                    if !i.is_disjoint(&j.opposite()) {
                        continue;
                    }
                    let i_red = i.natural(&j.oc()).expect("I avoids J^o");
                    let j_red = j.natural(&i_oc).expect("J avoids I^o");
                    for l in &ls {
                        let first = coefficient(i, j, l);
                        if first == 0 || !variant.admits(first) {
                            continue;
                        }
                        let l_red = l.natural(&l.oc()).expect("L avoids L^o");
                        let second = coefficient(&i_red, &j_red, &l_red);
                        if second == 0 || !variant.admits(second) {
                            continue;
                        }
                        local.push((i.clone(), j.clone(), l.clone(), vec![first, second]));
                    }
                }
                local
            })
            .collect();
        out.extend(chunk.into_iter().flatten());
    }
    out
}

fn a_triples_fflp(q: usize, n: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for r in 1..=q {
        let sets: Vec<IndexSet> = IndexSet::subsets(r, q).collect();
        for i in &sets {
            for j in &sets {
                for l in &sets {
                    let c = coefficient(i, j, l);
                    if c > 0 {
                        let widen = |s: &IndexSet| s.widen(n).expect("q <= n");
                        out.push((widen(i), widen(j), widen(l), vec![c]));
                    }
                }
            }
        }
    }
    out
}

fn a_triples_os(n: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for r in (1..=n).take_while(|r| 2 * r <= n) {
        let sets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
        let chunk: Vec<Vec<Triple>> = sets
            .par_iter()
            .map(|i| {
                let mut local = Vec::new();
                for j in &sets {
                    for l in &sets {
                        let c = coefficient(i, j, l);
                        if c > 0 {
                            local.push((i.clone(), j.clone(), l.clone(), vec![c]));
                        }
                    }
                }
                local
            })
            .collect();
        out.extend(chunk.into_iter().flatten());
    }
    out
}

/// B(n): singular values `x` of a square matrix against the eigenvalues `y`
/// of its Hermitian part.
pub fn b_system(n: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::B, vec![n], variant)?;
    let mut sys = InequalitySystem::new(
        cone,
        vec![block("x", n, Chamber::DecreasingNonneg), block("y", n, Chamber::Decreasing)],
    )?;
    let bound = || Provenance::Bound { label: "hermitian-part".to_string() };
    for k in 1..=n {
        let mut upper = sys.form();
        upper.add("x", k, 1)?.add("y", k, -1)?;
        sys.insert(upper.ge(bound())?)?;
        let mut lower = sys.form();
        lower.add("y", k, 1)?.add("x", n + 1 - k, 1)?;
        sys.insert(lower.ge(bound())?)?;
    }
    for a in 0..n {
        for b in 0..n {
            if a + b == 0 || a + b > n {
                continue;
            }
            let ls: Vec<IndexSet> = IndexSet::subsets(a + b, 2 * n)
                .filter(|l| l.is_disjoint(&l.opposite()))
                .collect();
            for i in IndexSet::subsets(a, n) {
                for j in IndexSet::subsets(b, n) {
                    let j_opp = j.opposite();
                    if !i.is_disjoint(&j_opp) {
                        continue;
                    }
                    let i_red = i.natural(&j.oc()).expect("I avoids J^o");
                    let j_red = j.natural(&i.oc()).expect("J avoids I^o");
                    for l in &ls {
                        let first = coefficient(&i, &j, l);
                        let first_ok = match variant {
                            Variant::Nonzero => first > 0,
                            _ => first == 1,
                        };
                        if !first_ok {
                            continue;
                        }
                        let mut coeffs = vec![first];
                        if variant != Variant::Weak {
                            let l_red = l.natural(&l.oc()).expect("L avoids L^o");
                            let second = coefficient(&i_red, &j_red, &l_red);
                            if second == 0 || !variant.admits(second) {
                                continue;
                            }
                            coeffs.push(second);
                        }
                        let mut f = sys.form();
                        f.add_set("x", &l.restrict(1, n), 1)?
                            .add_set("x", &l.opposite().restrict(1, n), -1)?;
                        f.add_set("y", &i, -1)?.add_set("y", &j_opp, 1)?;
                        let prov = Provenance::Triple { i: elems(&i), j: elems(&j), l: elems(l), coeffs };
                        sys.insert(f.ge(prov)?)?;
                    }
                }
            }
        }
    }
    Ok(sys)
}

/// Which coefficient tests a polarized triple must pass.
fn polarized_admits(variant: Variant, first: u64, second: impl FnOnce() -> u64) -> Option<Vec<u64>> {
    let ok = |c: u64| match variant {
        Variant::Nonzero => c > 0,
        _ => c == 1,
    };
    if !ok(first) {
        return None;
    }
    if variant == Variant::Weak {
        return Some(vec![first]);
    }
    let second = second();
    ok(second).then(|| vec![first, second])
}

struct Embedded {
    parts: PolarizedSet,
    set: IndexSet,
    tilde: IndexSet,
}

fn embedded_sets(q: usize, p: usize) -> Vec<Embedded> {
    PolarizedSet::all(q)
        .into_iter()
        .map(|parts| {
            let set = parts.embed(p).expect("q <= p");
            let tilde = parts.tilde(p).expect("q <= p");
            Embedded { parts, set, tilde }
        })
        .collect()
}

/// Adds `(†)`: `|z|_{L+} − |z|_{L−} ≥ |x|_{I+} − |x|_{I−} + |y|_{J+} − |y|_{J−}`
/// for triples whose embeddings pass the coefficient tests.
fn add_polarized_relations(
    sys: &mut InequalitySystem,
    xs: &[Embedded],
    ys: &[Embedded],
    zs: &[Embedded],
    variant: Variant,
) -> Result<()> {
    let found: Vec<Vec<(PolarizedTriple, Vec<u64>)>> = zs
        .par_iter()
        .map(|l| {
            let mut local = Vec::new();
            for i in xs {
                for j in ys {
                    if l.parts.is_empty() || l.parts.len() != i.parts.len() + j.parts.len() {
                        continue;
                    }
                    let first = coefficient(&i.set, &j.set, &l.set);
                    let second = || coefficient(&i.tilde, &j.tilde, &l.tilde);
                    if let Some(coeffs) = polarized_admits(variant, first, second) {
                        let triple = PolarizedTriple { i: i.parts.clone(), j: j.parts.clone(), l: l.parts.clone() };
                        local.push((triple, coeffs));
                    }
                }
            }
            local
        })
        .collect();
    let mut all: Vec<(PolarizedTriple, Vec<u64>)> = found.into_iter().flatten().collect();
    all.sort();
    for (t, coeffs) in all {
        let mut f = sys.form();
        f.add_set("z", t.l.plus(), 1)?.add_set("z", t.l.minus(), -1)?;
        f.add_set("x", t.i.plus(), -1)?.add_set("x", t.i.minus(), 1)?;
        f.add_set("y", t.j.plus(), -1)?.add_set("y", t.j.minus(), 1)?;
        sys.insert(f.ge(t.provenance(coeffs))?)?;
    }
    Ok(())
}

/// S(p,q): singular values of a square matrix of size `p + q` against those
/// of its two off-diagonal blocks.
pub fn s_system(p: usize, q: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::S, vec![p, q], variant)?;
    let n = p + q;
    let c = Chamber::DecreasingNonneg;
    let mut sys = InequalitySystem::new(cone, vec![block("z", n, c), block("x", q, c), block("y", q, c)])?;
    let bound = || Provenance::Bound { label: "block".to_string() };
    for k in 1..=q {
        for other in ["x", "y"] {
            let mut f = sys.form();
            f.add("z", k, 1)?.add(other, k, -1)?;
            sys.insert(f.ge(bound())?)?;
        }
    }
    let xs = embedded_sets(q, p);
    let zs = embedded_sets(n, n);
    add_polarized_relations(&mut sys, &xs, &xs, &zs, variant)?;
    Ok(sys)
}

/// T(p,q): singular values of a square matrix of size `p + q` against those
/// of its two diagonal blocks.
pub fn t_system(p: usize, q: usize, variant: Variant) -> Result<InequalitySystem> {
    let cone = ConeId::new(ConeKind::T, vec![p, q], variant)?;
    let n = p + q;
    let c = Chamber::DecreasingNonneg;
    let mut sys = InequalitySystem::new(cone, vec![block("z", n, c), block("x", p, c), block("y", q, c)])?;
    let bound = || Provenance::Bound { label: "block".to_string() };
    for k in 1..=p {
        let mut f = sys.form();
        f.add("z", k, 1)?.add("x", k, -1)?;
        sys.insert(f.ge(bound())?)?;
    }
    for k in 1..=q {
        let mut f = sys.form();
        f.add("z", k, 1)?.add("y", k, -1)?;
        sys.insert(f.ge(bound())?)?;
    }
    for l in 1..=p - q {
        let mut f = sys.form();
        f.add("x", l, 1)?.add("z", 2 * q + l, -1)?;
        sys.insert(f.ge(bound())?)?;
    }
    let xs = embedded_sets(p, p);
    let ys = embedded_sets(q, q);
    let zs = embedded_sets(n, n);
    add_polarized_relations(&mut sys, &xs, &ys, &zs, variant)?;
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::RelKind;

    fn texts(sys: &InequalitySystem) -> Vec<String> {
        sys.relations().iter().map(|r| r.render(sys.blocks())).collect()
    }

    #[test]
    fn e1_small() {
        let one = e1_system(1, Variant::Nonzero).unwrap();
        assert_eq!(texts(&one), vec!["x1 = y1"]);
        let two = e1_system(2, Variant::Nonzero).unwrap();
        assert_eq!(texts(&two), vec!["x1 + x2 = y1 + y2", "x1 >= y1"]);
        let three = e1_system(3, Variant::Nonzero).unwrap();
        assert!(three.to_text().contains("x1 + x2 + x3 = y1 + y2 + y3"));
    }

    #[test]
    fn e2_small() {
        let one = e2_system(1, Variant::Nonzero).unwrap();
        assert_eq!(texts(&one), vec!["x1 + x2 = 2y1"]);
    }

    #[test]
    fn sing_one_is_triangle() {
        for p in 1..4 {
            let sys = sing_system(p, 1, Variant::Nonzero).unwrap();
            let mut got = texts(&sys);
            got.sort();
            assert_eq!(got, vec!["x1 + y1 >= z1", "x1 + z1 >= y1", "y1 + z1 >= x1"]);
        }
    }

    #[test]
    fn regular_examples() {
        let t = sing_triples(1, 2, 1, Variant::Nonzero).unwrap();
        assert!(t.iter().all(is_regular));
        assert!(sing_triples(2, 3, 1, Variant::Nonzero).is_err());
    }

    #[test]
    fn so_odd_delegates() {
        let so = so_odd_system(2, Variant::Nonzero).unwrap();
        let sing = sing_system(3, 2, Variant::Nonzero).unwrap();
        assert_eq!(so.relations(), sing.relations());
        assert_eq!(so.cone().kind, ConeKind::SoOdd);
    }

    #[test]
    fn fflp_example() {
        let sys = a_system(2, 1, Variant::Fflp).unwrap();
        assert!(texts(&sys).contains(&"x1 >= x3 + 2y1".to_string()));
    }

    #[test]
    fn b_one() {
        let sys = b_system(1, Variant::StrictOne).unwrap();
        let mut got = texts(&sys);
        got.sort();
        assert_eq!(got, vec!["x1 + y1 >= 0", "x1 >= y1"]);
    }

    #[test]
    fn t_bounds() {
        let sys = t_system(2, 1, Variant::Nonzero).unwrap();
        let got = texts(&sys);
        assert!(got.contains(&"x1 >= z3".to_string()));
        assert!(sys.relations().iter().all(|r| r.rel() == RelKind::Ge));
    }
}
