//! Partitions, index sets and the set operators the cone descriptions are
//! written in. Every index is 1-based.

use std::fmt;
use std::ops::Neg;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Weakly decreasing sequence of non-negative integers, stored without
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn scaled(&self, k: u32) -> Self {
        Partition(self.0.iter().map(|p| p * k).collect())
    }

    /// Young diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn conjugate(&self) -> Self {
        let width = self.part(0) as usize;
        let parts = (0..width)
            .map(|c| self.0.iter().filter(|&&p| p as usize > c).count() as u32)
            .collect();
        Partition(parts)
    }

    /// All partitions fitting in a `rows × cols` box.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        fn go(rows: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if prefix.len() == rows {
                out.push(Partition::new(prefix.clone()).expect("decreasing by construction"));
                return;
            }
            for v in 0..=max {
                prefix.push(v);
                go(rows, v, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(rows, cols, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A subset of `[ambient]` kept in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    elements: Vec<usize>,
    ambient: usize,
}

impl IndexSet {
    pub fn new(elements: Vec<usize>, ambient: usize) -> Result<Self> {
        let increasing = elements.windows(2).all(|w| w[0] < w[1]);
        let in_range = elements.iter().all(|&e| e >= 1 && e <= ambient);
        if !increasing || !in_range {
            return Err(Error::InvalidIndexSet { elements, ambient });
        }
        Ok(IndexSet { elements, ambient })
    }

    pub fn from_unsorted(elements: impl IntoIterator<Item = usize>, ambient: usize) -> Result<Self> {
        let mut v: Vec<usize> = elements.into_iter().collect();
        v.sort_unstable();
        Self::new(v, ambient)
    }

    pub fn empty(ambient: usize) -> Self {
        IndexSet { elements: Vec::new(), ambient }
    }

    /// `[r] ⊂ [n]`.
    pub fn prefix(r: usize, ambient: usize) -> Result<Self> {
        Self::new((1..=r).collect(), ambient)
    }

    pub fn full(ambient: usize) -> Self {
        IndexSet { elements: (1..=ambient).collect(), ambient }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.elements.iter().all(|&e| !other.contains(e))
    }

    /// `μ(I) = (i_r − r, …, i_1 − 1)`.
    pub fn mu(&self) -> Partition {
        let parts = self
            .elements
            .iter()
            .enumerate()
            .rev()
            .map(|(k, &i)| (i - k - 1) as u32)
            .collect();
        Partition::new(parts).expect("i_k - k is weakly increasing")
    }

    /// `λ(I) = μ(I^o)`.
    pub fn lambda(&self) -> Partition {
        self.opposite().mu()
    }

    /// `I^o = {n + 1 − i}`.
    pub fn opposite(&self) -> IndexSet {
        let n = self.ambient;
        IndexSet {
            elements: self.elements.iter().rev().map(|&i| n + 1 - i).collect(),
            ambient: n,
        }
    }

    /// `I^c = [n] − I`.
    pub fn complement(&self) -> IndexSet {
        IndexSet {
            elements: (1..=self.ambient).filter(|&i| !self.contains(i)).collect(),
            ambient: self.ambient,
        }
    }

    /// `I^{o,c}`, the complement of the opposite set.
    pub fn oc(&self) -> IndexSet {
        self.opposite().complement()
    }

    /// `A ♮ B`: the positions of the elements of `A` inside `B`.
    pub fn natural(&self, outer: &IndexSet) -> Result<IndexSet> {
        let positions: Option<Vec<usize>> = self
            .elements
            .iter()
            .map(|a| outer.elements.binary_search(a).ok().map(|pos| pos + 1))
            .collect();
        match positions {
            Some(elements) => Ok(IndexSet { elements, ambient: outer.len() }),
            None => Err(Error::NotNested {
                inner: self.elements.clone(),
                outer: outer.elements.clone(),
            }),
        }
    }

    /// Same elements, read inside a larger ambient.
    pub fn widen(&self, ambient: usize) -> Result<IndexSet> {
        Self::new(self.elements.clone(), ambient)
    }

    /// Elements lying in `lo..=hi`, kept in the same ambient.
    pub fn restrict(&self, lo: usize, hi: usize) -> IndexSet {
        IndexSet {
            elements: self.elements.iter().copied().filter(|&e| e >= lo && e <= hi).collect(),
            ambient: self.ambient,
        }
    }

    /// `|v|_I = Σ_{i∈I} v_i`.
    pub fn sum_of<T>(&self, v: &[T]) -> T
    where
        T: Clone + Zero,
    {
        self.elements
            .iter()
            .fold(T::zero(), |acc, &i| acc + v[i - 1].clone())
    }

    /// `P(r, n)` in lexicographic order.
    pub fn subsets(r: usize, n: usize) -> impl Iterator<Item = IndexSet> {
        (1..=n)
            .combinations(r)
            .map(move |elements| IndexSet { elements, ambient: n })
    }

    /// Every subset of `[n]`, by cardinality then lexicographically.
    pub fn power_set(n: usize) -> impl Iterator<Item = IndexSet> {
        (0..=n).flat_map(move |r| Self::subsets(r, n))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.iter().join(","))
    }
}

/// A pair of disjoint subsets `(X₊, X₋)` of `[q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizedSet {
    plus: IndexSet,
    minus: IndexSet,
}

impl PolarizedSet {
    pub fn new(plus: Vec<usize>, minus: Vec<usize>, ambient: usize) -> Result<Self> {
        let invalid = || Error::InvalidPolarizedSet {
            plus: plus.clone(),
            minus: minus.clone(),
            ambient,
        };
        let p = IndexSet::from_unsorted(plus.iter().copied(), ambient).map_err(|_| invalid())?;
        let m = IndexSet::from_unsorted(minus.iter().copied(), ambient).map_err(|_| invalid())?;
        if !p.is_disjoint(&m) {
            return Err(invalid());
        }
        Ok(PolarizedSet { plus: p, minus: m })
    }

    pub fn plus(&self) -> &IndexSet {
        &self.plus
    }

    pub fn minus(&self) -> &IndexSet {
        &self.minus
    }

    pub fn ambient(&self) -> usize {
        self.plus.ambient
    }

    /// `♯X₊ + ♯X₋`.
    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|v|_{X₊} − |v|_{X₋}`.
    pub fn signed_sum<T>(&self, v: &[T]) -> T
    where
        T: Clone + Zero + std::ops::Sub<Output = T>,
    {
        self.plus.sum_of(v) - self.minus.sum_of(v)
    }

    /// `X^p = X₊ ∪ {p + q + 1 − x : x ∈ X₋}` inside `[p + q]`.
    pub fn embed(&self, p: usize) -> Result<IndexSet> {
        let q = self.ambient();
        if q > p {
            return Err(Error::DimensionMismatch { expected: q, found: p });
        }
        let n = p + q;
        let elements = self
            .plus
            .elements
            .iter()
            .copied()
            .chain(self.minus.elements.iter().map(|&x| n + 1 - x));
        IndexSet::from_unsorted(elements, n)
    }

    /// `X̃^p = X^p ♮ (X^p)^{o,c}` inside `[p + q − r]`.
    pub fn tilde(&self, p: usize) -> Result<IndexSet> {
        let embedded = self.embed(p)?;
        embedded.natural(&embedded.oc())
    }

    /// Inverse of [`PolarizedSet::embed`]: splits `I ⊂ [p + q]` avoiding
    /// `{q+1, …, p}` and its own opposite.
    pub fn from_embedded(set: &IndexSet, p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if set.ambient() != n || q > p {
            return Err(Error::DimensionMismatch { expected: n, found: set.ambient() });
        }
        let plus: Vec<usize> = set.elements().iter().copied().filter(|&i| i <= q).collect();
        let middle = set.elements().iter().any(|&i| i > q && i <= p);
        let minus: Vec<usize> = set
            .elements()
            .iter()
            .filter(|&&i| i > p)
            .map(|&i| n + 1 - i)
            .collect();
        if middle {
            return Err(Error::InvalidPolarizedSet { plus, minus, ambient: q });
        }
        Self::new(plus, minus, q)
    }

    /// All `3^q` polarized subsets of `[q]`, including the empty one.
    pub fn all(q: usize) -> Vec<PolarizedSet> {
        let mut out = Vec::with_capacity(3usize.pow(q as u32));
        for code in 0..3usize.pow(q as u32) {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            let mut c = code;
            for i in 1..=q {
                match c % 3 {
                    1 => plus.push(i),
                    2 => minus.push(i),
                    _ => {}
                }
                c /= 3;
            }
            out.push(PolarizedSet {
                plus: IndexSet { elements: plus, ambient: q },
                minus: IndexSet { elements: minus, ambient: q },
            });
        }
        out.sort();
        out
    }
}

impl fmt::Display for PolarizedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+{}, -{})", self.plus, self.minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chamber {
    Decreasing,
    DecreasingNonneg,
    Unconstrained,
}

impl Chamber {
    pub fn contains<T: PartialOrd + Zero>(&self, v: &[T]) -> bool {
        match self {
            Chamber::Unconstrained => true,
            Chamber::Decreasing => v.windows(2).all(|w| w[0] >= w[1]),
            Chamber::DecreasingNonneg => {
                v.windows(2).all(|w| w[0] >= w[1]) && v.last().map_or(true, |l| *l >= T::zero())
            }
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Chamber::Decreasing => "decreasing",
            Chamber::DecreasingNonneg => "decreasing-nonneg",
            Chamber::Unconstrained => "unconstrained",
        }
    }
}

/// `x̂^{p,q} = (x₁, …, x_q, 0, …, 0, −x_q, …, −x₁)` of length `p + q`.
pub fn hat_entries<T>(x: &[T], p: usize) -> Result<Vec<T>>
where
    T: Clone + Zero + Neg<Output = T>,
{
    let q = x.len();
    if q > p {
        return Err(Error::DimensionMismatch { expected: p, found: q });
    }
    let mut out = x.to_vec();
    out.extend(std::iter::repeat_with(T::zero).take(p - q));
    out.extend(x.iter().rev().map(|v| -v.clone()));
    Ok(out)
}

/// `x^∨ = (−x_n, …, −x₁)`.
pub fn dual_entries<T>(x: &[T]) -> Vec<T>
where
    T: Clone + Neg<Output = T>,
{
    x.iter().rev().map(|v| -v.clone()).collect()
}

/// Exact rational vector tagged with the chamber it is known to lie in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumVector {
    entries: Vec<Rational>,
    chamber: Chamber,
}

impl SpectrumVector {
    pub fn new(entries: Vec<Rational>, chamber: Chamber) -> Result<Self> {
        if !chamber.contains(&entries) {
            return Err(Error::BadRange(format!(
                "entries are not {}",
                chamber.as_str()
            )));
        }
        Ok(SpectrumVector { entries, chamber })
    }

    pub fn from_integers(values: &[i64], chamber: Chamber) -> Result<Self> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect(), chamber)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn chamber(&self) -> Chamber {
        self.chamber
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn tagged(entries: Vec<Rational>) -> Self {
        let chamber = if Chamber::Decreasing.contains(&entries) {
            Chamber::Decreasing
        } else {
            Chamber::Unconstrained
        };
        SpectrumVector { entries, chamber }
    }

    pub fn hat_pq(&self, p: usize, q: usize) -> Result<Self> {
        if self.len() != q {
            return Err(Error::DimensionMismatch { expected: q, found: self.len() });
        }
        Ok(Self::tagged(hat_entries(&self.entries, p)?))
    }

    pub fn hat_nn(&self) -> Self {
        Self::tagged(hat_entries(&self.entries, self.len()).expect("p = q"))
    }

    pub fn dual(&self) -> Self {
        Self::tagged(dual_entries(&self.entries))
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }
}
