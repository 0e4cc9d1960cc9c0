//! Todd–Coxeter coset enumeration over the trivial subgroup (HLT strategy
//! with coincidence processing).

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Regular permutation representation of a finite group.
#[derive(Clone, Debug)]
pub struct CosetTable {
    // table[c][col], col = 2·g for g, 2·g + 1 for g⁻¹
    table: Vec<Vec<usize>>,
}

struct Enumerator {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    cols: usize,
    limit: usize,
}

fn inv(col: usize) -> usize {
    col ^ 1
}

impl Enumerator {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<()> {
        if self.table.len() >= self.limit {
            return Err(Error::Inconclusive {
                radius: 0,
                reason: format!("coset enumeration exceeded {} cosets", self.limit),
            });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.table[c][col] = d;
        self.table[d][inv(col)] = c;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (k, l) = if k < l { (k, l) } else { (l, k) };
        self.parent[l] = k;
        self.queue.push(l);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let l = self.queue[i];
            i += 1;
            for col in 0..self.cols {
                let d = self.table[l][col];
                if d == NONE {
                    continue;
                }
                self.table[d][inv(col)] = NONE;
                let mu = self.rep(l);
                let nu = self.rep(d);
                if self.table[mu][col] != NONE {
                    let t = self.table[mu][col];
                    self.merge(nu, t);
                } else if self.table[nu][inv(col)] != NONE {
                    let t = self.table[nu][inv(col)];
                    self.merge(mu, t);
                } else {
                    self.table[mu][col] = nu;
                    self.table[nu][inv(col)] = mu;
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][inv(w[j - 1])] != NONE {
                b = self.table[b][inv(w[j - 1])];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][w[i]] = b;
                self.table[b][inv(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

impl CosetTable {
    /// Enumerates the group `⟨g_0 … g_{n-1} | relators⟩`. Relators use
    /// columns: `2·g` for `g`, `2·g + 1` for `g⁻¹`. Gives up past `limit`
    /// cosets.
    pub fn enumerate(generators: usize, relators: &[Vec<usize>], limit: usize) -> Result<Self> {
        let cols = 2 * generators;
        let mut e = Enumerator {
            table: vec![vec![NONE; cols]],
            parent: vec![0],
            queue: Vec::new(),
            cols,
            limit: limit.max(1),
        };
        let mut c = 0;
        while c < e.table.len() {
            for r in relators {
                if !e.live(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            for col in 0..cols {
                if !e.live(c) {
                    break;
                }
                if e.table[c][col] == NONE {
                    e.define(c, col)?;
                }
            }
            c += 1;
        }
        // compact the live cosets
        let mut index = vec![NONE; e.table.len()];
        let mut order = Vec::new();
        for (c, slot) in index.iter_mut().enumerate() {
            if e.live(c) {
                *slot = order.len();
                order.push(c);
            }
        }
        let mut table = Vec::with_capacity(order.len());
        for &c in &order {
            let row = (0..cols)
                .map(|col| {
                    let t = e.table[c][col];
                    index[e.rep(t)]
                })
                .collect();
            table.push(row);
        }
        Ok(CosetTable { table })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// The coset reached from the identity by reading `columns`.
    pub fn act(&self, columns: impl IntoIterator<Item = usize>) -> usize {
        columns.into_iter().fold(0, |c, col| self.table[c][col])
    }
}
