//! Littlewood–Richardson coefficients.
//!
//! `c^λ_{μν}` is the number of skew tableaux of shape `λ/μ` and content `ν`
//! whose reverse reading word is a lattice word. Results are memoized in a
//! process-wide cache.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::combinatorics::{IndexSet, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LrQuery {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

impl LrQuery {
    pub fn new(lambda: Partition, mu: Partition, nu: Partition) -> Self {
        LrQuery { lambda, mu, nu }
    }

    /// The coefficient is symmetric in `(μ, ν)`, so the pair is sorted.
    fn canonical(self) -> Self {
        if self.mu <= self.nu {
            self
        } else {
            LrQuery { lambda: self.lambda, mu: self.nu, nu: self.mu }
        }
    }

    fn is_trivially_zero(&self) -> bool {
        self.mu.size() + self.nu.size() != self.lambda.size()
            || !self.lambda.contains(&self.mu)
            || !self.lambda.contains(&self.nu)
    }
}

/// Thread-safe memo table. `capacity = None` means unbounded; once a capped
/// cache is full, new results are computed but not stored.
#[derive(Debug, Default)]
pub struct LrCache {
    map: RwLock<HashMap<LrQuery, u64>>,
    capacity: Option<usize>,
}

impl LrCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: usize) -> Self {
        LrCache { map: RwLock::default(), capacity: Some(capacity) }
    }

    pub fn coefficient(&self, query: LrQuery) -> u64 {
        if query.is_trivially_zero() {
            return 0;
        }
        let query = query.canonical();
        if let Some(&c) = self.map.read().expect("lr cache poisoned").get(&query) {
            return c;
        }
        let c = count_tableaux(&query.lambda, &query.mu, &query.nu);
        let mut map = self.map.write().expect("lr cache poisoned");
        if self.capacity.map_or(true, |cap| map.len() < cap) {
            map.insert(query, c);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("lr cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().expect("lr cache poisoned").clear();
    }
}

pub fn global_cache() -> &'static LrCache {
    static CACHE: OnceLock<LrCache> = OnceLock::new();
    CACHE.get_or_init(LrCache::new)
}

/// `c^λ_{μν}`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    global_cache().coefficient(LrQuery::new(lambda.clone(), mu.clone(), nu.clone()))
}

pub fn lr_nonzero(lambda: &Partition, mu: &Partition, nu: &Partition) -> bool {
    lr_coefficient(lambda, mu, nu) > 0
}

/// `c^L_{I,J} = c^{μ(L)}_{μ(I),μ(J)}`.
pub fn lr_subset(i: &IndexSet, j: &IndexSet, l: &IndexSet) -> u64 {
    lr_coefficient(&l.mu(), &i.mu(), &j.mu())
}

/// Uncached enumeration of LR tableaux.
pub fn count_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if (LrQuery { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() }).is_trivially_zero() {
        return 0;
    }
    let rows = lambda.len();
    // Cells in reading order: rows top to bottom, each row right to left.
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (mu.part(r) as usize..lambda.part(r) as usize).rev().map(move |c| (r, c)))
        .collect();
    let mut state = Filling {
        lambda,
        mu,
        content: nu.parts().to_vec(),
        grid: (0..rows).map(|r| vec![0u8; lambda.part(r) as usize]).collect(),
        used: vec![0u32; nu.len() + 1],
    };
    state.count(&cells, 0)
}

struct Filling<'a> {
    lambda: &'a Partition,
    mu: &'a Partition,
    content: Vec<u32>,
    grid: Vec<Vec<u8>>,
    /// `used[v]` counts entries equal to `v` (1-based) placed so far.
    used: Vec<u32>,
}

impl Filling<'_> {
    fn count(&mut self, cells: &[(usize, usize)], at: usize) -> u64 {
        let Some(&(row, col)) = cells.get(at) else {
            return 1;
        };
        // Row weakly increasing: bounded by the already placed right neighbour.
        let row_cap = if col + 1 < self.lambda.part(row) as usize {
            self.grid[row][col + 1] as usize
        } else {
            self.content.len()
        };
        // Column strictly increasing below any skew cell above.
        let floor = if row > 0 && col >= self.mu.part(row - 1) as usize {
            self.grid[row - 1][col] as usize + 1
        } else {
            1
        };
        let cap = row_cap.min(row + 1);
        let mut total = 0;
        for v in floor..=cap {
            if self.used[v] >= self.content[v - 1] {
                continue;
            }
            if v > 1 && self.used[v - 1] <= self.used[v] {
                continue;
            }
            self.grid[row][col] = v as u8;
            self.used[v] += 1;
            total += self.count(cells, at + 1);
            self.used[v] -= 1;
        }
        self.grid[row][col] = 0;
        total
    }
}
