//! Exact linear algebra over the rationals, exterior powers of coordinate
//! spaces, and a small exact feasibility solver for cone problems.
//!
//! Matrices are stored as sorted sparse rows. Elimination always pivots on
//! the first nonzero column of the incoming row, so ranks and bases are
//! reproducible run to run.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot contract a degree-{covector} covector into a degree-{vector} multivector")]
    DegreeMismatch { covector: usize, vector: usize },
}

type SparseRow = Vec<(usize, Rational)>;

/// `row + factor * other`, both sorted by column.
fn axpy(row: &[(usize, Rational)], factor: &Rational, other: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, factor * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` entries, summing repeats.
    ///
    /// Panics if an index is out of bounds.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let data = acc.into_iter().map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<Rational>], cols: usize) -> Self {
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
        });
        Matrix::from_triplets(rows.len(), cols, entries)
    }

    pub fn from_i64(rows: &[Vec<i64>], cols: usize) -> Self {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        Matrix::from_dense(&dense, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(pos) => self.data[r][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                }
            }
            data.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self.data.iter().map(|row| row.iter().fold(Rational::zero(), |s, (c, a)| s + a * &v[*c])).collect())
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Row echelon form built one row at a time. Pivot rows are normalised so
/// the leading entry is one.
#[derive(Clone, Debug, Default)]
struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &(-coeff), p),
                None => break,
            }
        }
        row
    }

    fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((lead, coeff)) => {
                let inv = coeff.recip();
                let lead = *lead;
                let normalised = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                self.pivots.insert(lead, normalised);
                true
            }
        }
    }

    /// Back-substitutes so every pivot column is zero outside its own row.
    fn into_rref(self) -> Vec<(usize, SparseRow)> {
        let mut done: Vec<(usize, SparseRow)> = Vec::new();
        for (lead, mut row) in self.pivots.into_iter().rev() {
            for (plead, prow) in &done {
                if let Ok(pos) = row.binary_search_by_key(plead, |(c, _)| *c) {
                    let coeff = row[pos].1.clone();
                    row = axpy(&row, &(-coeff), prow);
                }
            }
            done.push((lead, row));
        }
        done.reverse();
        done
    }
}

/// Incremental sparse row space, for relation spaces too large to hold
/// densely. Rows are `(column, value)` lists sorted by column.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    inner: Echelon,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.inner.pivots.len()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: Vec<(usize, Rational)>) -> bool {
        self.inner.insert(row)
    }

    /// The representative of `row` modulo the span with every pivot column
    /// cleared. Two rows are congruent iff their reductions agree.
    pub fn normal_form(&self, row: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
        let mut row = row;
        let mut from = 0;
        loop {
            let hit = row[from..].iter().position(|(c, _)| self.inner.pivots.contains_key(c)).map(|k| k + from);
            let Some(pos) = hit else {
                return row;
            };
            let (col, coeff) = row[pos].clone();
            row = axpy(&row, &(-coeff), &self.inner.pivots[&col]);
            from = row.partition_point(|(c, _)| *c <= col);
        }
    }

    pub fn contains(&self, row: Vec<(usize, Rational)>) -> bool {
        self.normal_form(row).is_empty()
    }
}

/// Rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    let mut ech = Echelon::default();
    let mut r = 0;
    for row in &m.data {
        if !row.is_empty() && ech.insert(row.clone()) {
            r += 1;
        }
    }
    r
}

/// Reduced row echelon form: `(pivot columns, rows)`.
pub fn rref(m: &Matrix) -> (Vec<usize>, Vec<Vec<Rational>>) {
    let mut ech = Echelon::default();
    for row in &m.data {
        ech.insert(row.clone());
    }
    let rows = ech.into_rref();
    let pivots = rows.iter().map(|(l, _)| *l).collect();
    let dense = rows
        .into_iter()
        .map(|(_, row)| {
            let mut d = vec![Rational::zero(); m.cols];
            for (c, v) in row {
                d[c] = v;
            }
            d
        })
        .collect();
    (pivots, dense)
}

/// Basis of the right null space, one vector per non-pivot column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let (pivots, rows) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.cols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// A linear subspace of `Q^n` held by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, pivots: Vec::new(), basis: Vec::new() }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch { expected: ambient, found: v.len() });
            }
        }
        let (pivots, basis) = rref(&Matrix::from_dense(vectors, ambient));
        Ok(Subspace { ambient, pivots, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Coordinates in the echelon basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Rational::zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in recon.iter_mut().zip(row) {
                *slot += c * x;
            }
        }
        (recon.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Basis of the sum of the spans of several families of vectors.
pub fn subspace_sum_basis(families: &[Vec<Vec<Rational>>]) -> Result<Vec<Vec<Rational>>, LinalgError> {
    let all: Vec<Vec<Rational>> = families.iter().flatten().cloned().collect();
    let Some(first) = all.first() else {
        return Ok(Vec::new());
    };
    Ok(Subspace::span(first.len(), &all)?.basis)
}

// ---------------------------------------------------------------------------
// Exterior algebra

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `p`-subsets of `{0..n}` as bitmasks, in lexicographic order of their
/// increasing index lists.
pub fn subsets_lex(n: usize, p: usize) -> Vec<u64> {
    fn go(start: usize, n: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n - left {
            go(i + 1, n, left - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, p));
    if p <= n {
        go(0, n, p, 0, &mut out);
    }
    out
}

/// Position of a `p`-subset in [`subsets_lex`] order.
pub fn subset_lex_index(n: usize, mask: u64) -> usize {
    let p = mask.count_ones() as usize;
    let mut idx = 0;
    let mut prev: isize = -1;
    let mut i = 0;
    for c in 0..n {
        if mask & (1 << c) == 0 {
            continue;
        }
        for j in (prev + 1) as usize..c {
            idx += binomial(n - 1 - j, p - i - 1);
        }
        prev = c as isize;
        i += 1;
    }
    idx
}

/// Sign of `e_A ∧ e_B` relative to `e_{A∪B}` for disjoint sorted index sets.
pub fn merge_sign(a: u64, b: u64) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Standard basis label of the exterior power: a strictly increasing list of
/// coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeBasisIndex {
    pub subset: Vec<usize>,
}

impl WedgeBasisIndex {
    pub fn mask(&self) -> u64 {
        self.subset.iter().fold(0, |m, &i| m | (1 << i))
    }

    pub fn from_mask(mask: u64) -> Self {
        WedgeBasisIndex { subset: (0..64).filter(|i| mask & (1 << i) != 0).collect() }
    }

    pub fn degree(&self) -> usize {
        self.subset.len()
    }
}

/// Element of `Λ^p Q^n` in the lexicographic standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    n: usize,
    degree: usize,
    coeffs: Vec<Rational>,
}

impl Multivector {
    pub fn zero(n: usize, degree: usize) -> Self {
        Multivector { n, degree, coeffs: vec![Rational::zero(); binomial(n, degree)] }
    }

    pub fn one(n: usize) -> Self {
        Multivector { n, degree: 0, coeffs: vec![Rational::one()] }
    }

    pub fn basis(n: usize, mask: u64) -> Self {
        let mut m = Multivector::zero(n, mask.count_ones() as usize);
        m.coeffs[subset_lex_index(n, mask)] = Rational::one();
        m
    }

    pub fn from_vector(v: &[Rational]) -> Self {
        Multivector { n: v.len(), degree: 1, coeffs: v.to_vec() }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Multivector::from_vector(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    pub fn from_coeffs(n: usize, degree: usize, coeffs: Vec<Rational>) -> Result<Self, LinalgError> {
        let expected = binomial(n, degree);
        if coeffs.len() != expected {
            return Err(LinalgError::DimensionMismatch { expected, found: coeffs.len() });
        }
        Ok(Multivector { n, degree, coeffs })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, mask: u64) -> Rational {
        self.coeffs[subset_lex_index(self.n, mask)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero terms as `(subset mask, coefficient)`.
    pub fn terms(&self) -> Vec<(u64, Rational)> {
        subsets_lex(self.n, self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, c.clone()))
            .collect()
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = Multivector::zero(self.n, self.degree + other.degree);
        if out.coeffs.is_empty() {
            return Ok(out);
        }
        let right = other.terms();
        for (a, ca) in self.terms() {
            for (b, cb) in &right {
                if a & b != 0 {
                    continue;
                }
                let v = &ca * cb;
                let slot = &mut out.coeffs[subset_lex_index(self.n, a | b)];
                if merge_sign(a, *b) > 0 {
                    *slot += v;
                } else {
                    *slot -= v;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        Multivector { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector, LinalgError> {
        if self.n != other.n || self.degree != other.degree {
            return Err(LinalgError::DimensionMismatch { expected: self.coeffs.len(), found: other.coeffs.len() });
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Multivector { n: self.n, degree: self.degree, coeffs })
    }

    /// Applies the exterior power of the coordinate projection that zeroes
    /// every coordinate in `killed`.
    pub fn kill_coordinates(&self, killed: u64) -> Multivector {
        let mut out = self.clone();
        for (slot, mask) in out.coeffs.iter_mut().zip(subsets_lex(self.n, self.degree)) {
            if mask & killed != 0 {
                *slot = Rational::zero();
            }
        }
        out
    }

    /// If `self = c * other` with `other` nonzero, returns `c`.
    pub fn ratio_to(&self, other: &Multivector) -> Option<Rational> {
        if self.n != other.n || self.degree != other.degree {
            return None;
        }
        let pos = other.coeffs.iter().position(|c| !c.is_zero())?;
        let c = &self.coeffs[pos] / &other.coeffs[pos];
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == &c * b).then_some(c)
    }

    /// Natural pairing with a covector of the same degree.
    pub fn pair(&self, covector: &Multivector) -> Result<Rational, LinalgError> {
        if self.n != covector.n || self.degree != covector.degree {
            return Err(LinalgError::DegreeMismatch { covector: covector.degree, vector: self.degree });
        }
        Ok(self.coeffs.iter().zip(&covector.coeffs).fold(Rational::zero(), |s, (a, b)| s + a * b))
    }
}

/// Wedge of the given vectors in order. An empty list gives `1 ∈ Λ^0`.
pub fn wedge_all(n: usize, vectors: &[Vec<Rational>]) -> Result<Multivector, LinalgError> {
    let mut acc = Multivector::one(n);
    for v in vectors {
        if v.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: v.len() });
        }
        acc = acc.wedge(&Multivector::from_vector(v))?;
    }
    Ok(acc)
}

/// Wedges of every `p`-subset of `vectors` (subsets taken in lexicographic
/// order of positions), each in the standard basis of `Λ^p Q^n`.
pub fn wedge_power_basis(n: usize, vectors: &[Vec<Rational>], p: usize) -> Result<Vec<Multivector>, LinalgError> {
    if vectors.len() > 64 {
        return Err(LinalgError::DimensionMismatch { expected: 64, found: vectors.len() });
    }
    subsets_lex(vectors.len(), p)
        .into_iter()
        .map(|mask| {
            let chosen: Vec<Vec<Rational>> =
                (0..vectors.len()).filter(|i| mask & (1 << i) != 0).map(|i| vectors[i].clone()).collect();
            wedge_all(n, &chosen)
        })
        .collect()
}

/// The contraction `κ_α ν`, characterised by `⟨κ_α ν, β⟩ = ⟨ν, α ∧ β⟩`.
pub fn contract(alpha: &Multivector, nu: &Multivector) -> Result<Multivector, LinalgError> {
    if alpha.n != nu.n {
        return Err(LinalgError::DimensionMismatch { expected: nu.n, found: alpha.n });
    }
    if alpha.degree > nu.degree {
        return Err(LinalgError::DegreeMismatch { covector: alpha.degree, vector: nu.degree });
    }
    let mut out = Multivector::zero(nu.n, nu.degree - alpha.degree);
    for (a, ca) in alpha.terms() {
        for (d, cd) in nu.terms() {
            if a & d != a {
                continue;
            }
            let b = d & !a;
            let v = &ca * &cd;
            let slot = &mut out.coeffs[subset_lex_index(nu.n, b)];
            if merge_sign(a, b) > 0 {
                *slot += v;
            } else {
                *slot -= v;
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact feasibility

/// Finds `y ≥ 0` with `A y = b`, where `A` has `n` columns, or reports that
/// none exists. Phase-one simplex with Bland's rule in exact arithmetic.
pub fn nonnegative_solution(n: usize, a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    assert_eq!(b.len(), m, "right-hand side length");
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "constraint row length");
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -bi } else { bi.clone() });
        t.push(r);
    }
    let mut obj = vec![Rational::zero(); width];
    for r in &t {
        for j in (0..n).chain(std::iter::once(width - 1)) {
            obj[j] += &r[j];
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n).find(|&j| obj[j].is_positive() && !basis.contains(&j)) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded direction; cannot happen for a phase-one objective
            // bounded below by zero, but stop rather than loop.
            break;
        };
        let inv = t[r][enter].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        let f = obj[enter].clone();
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
        basis[r] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            y[bv] = t[i][width - 1].clone();
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(2)), 2);
        assert_eq!(rank(&Matrix::zeros(3, 4)), 0);
        assert_eq!(rank(&Matrix::from_i64(&[vec![1, 2], vec![2, 4]], 2)), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(2, 3)).len(), 3);
        let m = Matrix::from_i64(&[vec![1, 1, 0]], 3);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.mul_vec(x).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn subspace_sum_examples() {
        let e1 = v(&[1, 0]);
        let e2 = v(&[0, 1]);
        assert_eq!(subspace_sum_basis(&[vec![e1.clone()], vec![e1.clone()]]).unwrap().len(), 1);
        assert_eq!(subspace_sum_basis(&[vec![e1], vec![e2]]).unwrap().len(), 2);
        let a = v(&[1, 1, 0]);
        let c = v(&[0, 0, 1]);
        assert_eq!(subspace_sum_basis(&[vec![a.clone()], vec![a, c]]).unwrap().len(), 2);
        assert!(matches!(
            subspace_sum_basis(&[vec![v(&[1, 0])], vec![v(&[1, 0, 0])]]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subspace_coordinates_roundtrip() {
        let s = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let target = v(&[2, 5, 3]);
        let c = s.coordinates(&target).unwrap();
        assert_eq!(c.len(), 2);
        assert!(s.coordinates(&v(&[1, 0, 0])).is_none());
    }

    #[test]
    fn wedge_examples() {
        let e1 = v(&[1, 0]);
        let e2 = v(&[0, 1]);
        let w = wedge_power_basis(2, &[e1.clone(), e2.clone()], 2).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].coeffs(), &[rat(1)]);
        let w = wedge_power_basis(2, &[e2, e1], 2).unwrap();
        assert_eq!(w[0].coeffs(), &[rat(-1)]);
        let w = wedge_power_basis(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])], 2).unwrap();
        assert_eq!(w[0].coeffs(), &[rat(1), rat(1), rat(1)]);
    }

    #[test]
    fn lex_index_matches_enumeration() {
        for n in 0..7 {
            for p in 0..=n {
                for (i, m) in subsets_lex(n, p).into_iter().enumerate() {
                    assert_eq!(subset_lex_index(n, m), i);
                }
            }
        }
    }

    #[test]
    fn contraction_examples() {
        let nu = Multivector::basis(2, 0b11);
        let alpha = Multivector::basis(2, 0b01);
        let k = contract(&alpha, &nu).unwrap();
        assert_eq!(k, Multivector::basis(2, 0b10));
        assert_eq!(contract(&Multivector::one(2), &nu).unwrap(), nu);
        let nu3 = Multivector::basis(3, 0b111);
        let k = contract(&Multivector::basis(3, 0b011), &nu3).unwrap();
        let beta = Multivector::basis(3, 0b100);
        let lhs = k.pair(&beta).unwrap();
        let rhs = nu3.pair(&Multivector::basis(3, 0b011).wedge(&beta).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(contract(&nu3, &nu), Err(LinalgError::DimensionMismatch { .. })));
        assert!(matches!(contract(&nu3, &Multivector::basis(3, 0b1)), Err(LinalgError::DegreeMismatch { .. })));
    }

    #[test]
    fn feasibility_simple_cases() {
        // y1 - y2 = 1 has a nonnegative solution; -y1 - y2 = 1 does not.
        assert!(nonnegative_solution(2, &[v(&[1, -1])], &[rat(1)]).is_some());
        assert!(nonnegative_solution(2, &[v(&[-1, -1])], &[rat(1)]).is_none());
        let y = nonnegative_solution(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])], &[rat(2), rat(3)]).unwrap();
        assert_eq!(&y[0] + &y[1], rat(2));
        assert_eq!(&y[1] + &y[2], rat(3));
        assert!(y.iter().all(|x| !x.is_negative()));
    }
}
