//! Brute-force oracles computed straight from the bases list, sharing no
//! code with the library beyond reading `bases()` and `len()`.
#![allow(dead_code)]

use tropical_schubert::matroid::Matroid;

pub struct Brute {
    pub n: usize,
    bases: Vec<u64>,
}

impl Brute {
    pub fn new(m: &Matroid) -> Self {
        Brute { n: m.len(), bases: m.bases().iter().map(|b| b.bits()).collect() }
    }

    pub fn rank_of(&self, s: u64) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn rank(&self) -> usize {
        self.rank_of(self.full())
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn subsets(&self) -> impl Iterator<Item = u64> {
        0..=self.full()
    }

    pub fn is_independent(&self, s: u64) -> bool {
        self.rank_of(s) == s.count_ones() as usize
    }

    pub fn is_flat(&self, s: u64) -> bool {
        let r = self.rank_of(s);
        (0..self.n).filter(|&e| s >> e & 1 == 0).all(|e| self.rank_of(s | 1 << e) > r)
    }

    pub fn flats(&self) -> Vec<u64> {
        self.subsets().filter(|&s| self.is_flat(s)).collect()
    }

    pub fn whitney(&self) -> Vec<usize> {
        let mut w = vec![0; self.rank() + 1];
        for f in self.flats() {
            w[self.rank_of(f)] += 1;
        }
        w
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank() + 1];
        for s in self.subsets().filter(|&s| self.is_independent(s)) {
            f[s.count_ones() as usize] += 1;
        }
        f
    }

    /// `(I, F)` with `F` a flat and `I ⊆ F` independent.
    pub fn admissible_pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for f in self.flats() {
            for i in self.subsets().filter(|&i| i & !f == 0 && self.is_independent(i)) {
                out.push((i, f));
            }
        }
        out
    }

    /// `N_p` from its definition: the alternating sum over `i` of
    /// `Σ f^i` of minors `M(I,F)` of rank `p + i`.
    pub fn big_n(&self, p: usize) -> i64 {
        let mut total = 0i64;
        for (i, f) in self.admissible_pairs() {
            let rk = self.rank_of(f) - i.count_ones() as usize;
            if rk < p {
                continue;
            }
            let k = rk - p;
            // f^k of M(I,F): subsets S of F∖I with I ∪ S independent.
            let rest = f & !i;
            let count = self
                .subsets()
                .filter(|&s| s & !rest == 0 && s.count_ones() as usize == k && self.is_independent(i | s))
                .count() as i64;
            total += if k.is_multiple_of(2) { count } else { -count };
        }
        total
    }

    /// Coefficients of `χ(t) = Σ_S (-1)^|S| t^{r(E) - r(S)}`, low degree first.
    pub fn characteristic(&self) -> Vec<i64> {
        let d = self.rank();
        let mut c = vec![0i64; d + 1];
        for s in self.subsets() {
            let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
            c[d - self.rank_of(s)] += sign;
        }
        c
    }
}

/// `c / (t - 1)` by synthetic division; `None` if the remainder is nonzero.
pub fn divide_by_t_minus_one(c: &[i64]) -> Option<Vec<i64>> {
    if c.len() < 2 {
        return None;
    }
    let mut q = vec![0i64; c.len() - 1];
    let mut carry = 0i64;
    for k in (1..c.len()).rev() {
        carry += c[k];
        q[k - 1] = carry;
    }
    (carry + c[0] == 0).then_some(q)
}

pub fn poly_mul(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
