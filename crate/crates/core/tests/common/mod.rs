//! Oracles shared by the integration tests. Nothing here calls the
//! library's LR kernel.

#![allow(dead_code)]

use std::collections::HashMap;

use spectral_cones::{IndexSet, Partition};

/// Kostka numbers through horizontal strips: the number of semistandard
/// tableaux of `shape` with content `content`.
#[derive(Default)]
pub struct Kostka {
    memo: HashMap<(Vec<u32>, Vec<u32>), u64>,
}

impl Kostka {
    pub fn count(&mut self, shape: &[u32], content: &[u32]) -> u64 {
        let shape: Vec<u32> = shape.iter().copied().filter(|&p| p > 0).collect();
        let content: Vec<u32> = content.to_vec();
        if shape.iter().sum::<u32>() != content.iter().sum::<u32>() {
            return 0;
        }
        if content.is_empty() {
            return u64::from(shape.is_empty());
        }
        if shape.len() > content.len() {
            return 0;
        }
        let key = (shape.clone(), content.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (&last, rest) = content.split_last().expect("nonempty content");
        let mut total = 0;
        for inner in strip_removals(&shape, last) {
            total += self.count(&inner, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// Shapes `inner` with `shape / inner` a horizontal strip of `size` cells.
fn strip_removals(shape: &[u32], size: u32) -> Vec<Vec<u32>> {
    fn go(shape: &[u32], row: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if row == shape.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let floor = shape.get(row + 1).copied().unwrap_or(0);
        let max_take = (shape[row] - floor).min(left);
        for take in 0..=max_take {
            cur.push(shape[row] - take);
            go(shape, row + 1, left - take, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(shape, 0, size, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `size` with at most `rows` parts, in decreasing lex order.
pub fn partitions(size: u32, rows: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, max: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for part in (1..=max.min(left)).rev() {
            cur.push(part);
            go(left - part, part, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, size, rows, &mut Vec::new(), &mut out);
    out
}

fn padded(p: &[u32], k: usize) -> Vec<u32> {
    let mut v = p.to_vec();
    v.resize(k, 0);
    v
}

/// Littlewood–Richardson coefficients from Schur polynomials in `vars`
/// variables: expand `s_λ s_μ` in monomials at partition exponents and
/// peel off Schur functions from the top in lex order.
pub struct SchurOracle {
    vars: usize,
    kostka: Kostka,
}

impl SchurOracle {
    pub fn new(vars: usize) -> Self {
        SchurOracle { vars, kostka: Kostka::default() }
    }

    /// Coefficient of `x^exponent` in `s_shape`, symmetric in the exponent.
    fn monomial(&mut self, shape: &[u32], exponent: &[u32]) -> u64 {
        let mut sorted = exponent.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        self.kostka.count(shape, &sorted)
    }

    /// Coefficient of `x^target` in `s_λ s_μ`.
    fn product_monomial(&mut self, lambda: &[u32], mu: &[u32], target: &[u32]) -> u64 {
        let k = self.vars;
        let mut total = 0;
        let mut alpha = vec![0u32; k];
        loop {
            let beta: Vec<u32> = target.iter().zip(&alpha).map(|(t, a)| t - a).collect();
            let a = self.monomial(lambda, &alpha);
            if a > 0 {
                total += a * self.monomial(mu, &beta);
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    return total;
                }
                if alpha[pos] < target[pos] {
                    alpha[pos] += 1;
                    break;
                }
                alpha[pos] = 0;
                pos += 1;
            }
        }
    }

    /// All `c^ν_{λ,μ}` with `ℓ(ν) ≤ vars`.
    pub fn expand(&mut self, lambda: &[u32], mu: &[u32]) -> HashMap<Vec<u32>, u64> {
        let k = self.vars;
        let size: u32 = lambda.iter().sum::<u32>() + mu.iter().sum::<u32>();
        let nus = partitions(size, k);
        let mut coeffs: Vec<(Vec<u32>, i64)> = Vec::new();
        for nu in &nus {
            let target = padded(nu, k);
            let mut c = self.product_monomial(lambda, mu, &target) as i64;
            for (kappa, ck) in &coeffs {
                if *ck != 0 {
                    c -= ck * self.kostka.count(kappa, &target) as i64;
                }
            }
            assert!(c >= 0, "negative coefficient in Schur expansion");
            coeffs.push((nu.clone(), c));
        }
        coeffs.into_iter().filter(|(_, c)| *c > 0).map(|(nu, c)| (nu, c as u64)).collect()
    }
}

pub fn parts(p: &Partition) -> Vec<u32> {
    p.parts().to_vec()
}

/// Horn(n) membership by the recursive description alone: the admissible
/// triples of size `r` are those whose partitions lie in Horn(r).
pub struct RecursiveHorn {
    triples: HashMap<(usize, usize), Vec<(IndexSet, IndexSet, IndexSet)>>,
}

impl Default for RecursiveHorn {
    fn default() -> Self {
        Self::new()
    }
}

impl RecursiveHorn {
    pub fn new() -> Self {
        RecursiveHorn { triples: HashMap::new() }
    }

    pub fn member(&mut self, x: &[i64], y: &[i64], z: &[i64]) -> bool {
        let n = x.len();
        let sorted = |v: &[i64]| v.windows(2).all(|w| w[0] >= w[1]);
        if !(sorted(x) && sorted(y) && sorted(z)) {
            return false;
        }
        if x.iter().sum::<i64>() + y.iter().sum::<i64>() != z.iter().sum::<i64>() {
            return false;
        }
        for r in 1..n {
            let triples = self.triples(r, n).to_vec();
            for (i, j, l) in &triples {
                let lhs: i64 = i.elements().iter().map(|&a| x[a - 1]).sum::<i64>()
                    + j.elements().iter().map(|&a| y[a - 1]).sum::<i64>();
                let rhs: i64 = l.elements().iter().map(|&a| z[a - 1]).sum();
                if lhs < rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `LR^n_r` computed through membership in Horn(r).
    pub fn triples(&mut self, r: usize, n: usize) -> &[(IndexSet, IndexSet, IndexSet)] {
        if !self.triples.contains_key(&(r, n)) {
            let subsets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
            let as_vec = |s: &IndexSet| -> Vec<i64> { padded(s.mu().parts(), r).into_iter().map(i64::from).collect() };
            let mut out = Vec::new();
            for i in &subsets {
                for j in &subsets {
                    for l in &subsets {
                        if self.member(&as_vec(i), &as_vec(j), &as_vec(l)) {
                            out.push((i.clone(), j.clone(), l.clone()));
                        }
                    }
                }
            }
            self.triples.insert((r, n), out);
        }
        &self.triples[&(r, n)]
    }
}

/// Set from 1-based elements.
pub fn set(elements: &[usize], ambient: usize) -> IndexSet {
    IndexSet::new(elements.to_vec(), ambient).expect("valid set")
}
