//! Matroids given by explicit basis lists on small labelled ground sets.
//!
//! Element `i` of the ground set is bit `i` of an [`ElementSet`]. Labels are
//! opaque strings kept in input order; every derived matroid (minor, dual,
//! extension) keeps the relative order of the surviving elements.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{rat, Rational};

pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("a matroid needs at least one basis")]
    EmptyBases,
    #[error("bases have different sizes ({expected} and {found})")]
    UnequalCardinality { expected: usize, found: usize },
    #[error("basis exchange fails: removing {element} from {first} admits no replacement from {second}")]
    ExchangeAxiomFailure { first: String, second: String, element: String },
    #[error("element {0:?} is not in the ground set")]
    ElementNotInGroundSet(String),
    #[error("label {0:?} appears twice in the ground set")]
    DuplicateLabel(String),
    #[error("ground sets with more than {MAX_ELEMENTS} elements are not supported")]
    TooManyElements,
    #[error("({independent}, {flat}) is not an admissible pair")]
    NotAdmissible { independent: String, flat: String },
    #[error("polynomial division by (t - 1) leaves a remainder")]
    DivisionNotExact,
    #[error("matroid has loops: {0}")]
    HasLoops(String),
    #[error("ground sets overlap in {0:?}")]
    GroundSetOverlap(String),
}

/// A subset of a ground set of at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug, Serialize)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElementSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        ElementSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        ElementSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ElementSet) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElementSet) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElementSet) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// All subsets of `self`, in increasing numeric order of bitmasks.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(ElementSet(cur))
        })
    }

    /// Relabels `self ⊆ within` onto positions `0..|within|`.
    pub fn compress(self, within: ElementSet) -> ElementSet {
        ElementSet::from_indices(within.iter().enumerate().filter(|(_, e)| self.contains(*e)).map(|(k, _)| k))
    }

    /// Inverse of [`ElementSet::compress`].
    pub fn expand(self, within: ElementSet) -> ElementSet {
        ElementSet::from_indices(within.iter().enumerate().filter(|(k, _)| self.contains(*k)).map(|(_, e)| e))
    }
}

fn sort_key(s: &ElementSet) -> (usize, u64) {
    (s.len(), s.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    labels: Vec<String>,
    bases: Vec<ElementSet>,
    rank: usize,
    loops: ElementSet,
}

impl Matroid {
    pub fn from_bases(labels: Vec<String>, bases: Vec<ElementSet>) -> Result<Self, MatroidError> {
        if labels.len() > MAX_ELEMENTS {
            return Err(MatroidError::TooManyElements);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(MatroidError::DuplicateLabel(l.clone()));
            }
        }
        let full = ElementSet::full(labels.len());
        let mut bases = bases;
        bases.sort_by_key(sort_key);
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(MatroidError::EmptyBases);
        };
        let rank = first.len();
        for b in &bases {
            if !b.is_subset(full) {
                let stray = b.difference(full).iter().next().unwrap_or(0);
                return Err(MatroidError::ElementNotInGroundSet(format!("#{stray}")));
            }
            if b.len() != rank {
                return Err(MatroidError::UnequalCardinality { expected: rank, found: b.len() });
            }
        }
        let set: HashSet<ElementSet> = bases.iter().copied().collect();
        let fmt = |s: ElementSet| format_set(&labels, s);
        for &b1 in &bases {
            for &b2 in &bases {
                for x in b1.difference(b2).iter() {
                    let ok = b2.difference(b1).iter().any(|y| set.contains(&b1.without(x).with(y)));
                    if !ok {
                        return Err(MatroidError::ExchangeAxiomFailure {
                            first: fmt(b1),
                            second: fmt(b2),
                            element: labels[x].clone(),
                        });
                    }
                }
            }
        }
        let covered = bases.iter().fold(ElementSet::EMPTY, |u, b| u.union(*b));
        Ok(Matroid { loops: full.difference(covered), labels, bases, rank })
    }

    /// Convenience constructor from label lists.
    pub fn from_labeled(ground: &[&str], bases: &[&[&str]]) -> Result<Self, MatroidError> {
        let labels: Vec<String> = ground.iter().map(|s| s.to_string()).collect();
        let lookup = |l: &str| {
            labels.iter().position(|x| x == l).ok_or_else(|| MatroidError::ElementNotInGroundSet(l.to_string()))
        };
        let mut sets = Vec::new();
        for b in bases {
            let mut s = ElementSet::EMPTY;
            for l in *b {
                s = s.with(lookup(l)?);
            }
            sets.push(s);
        }
        Matroid::from_bases(labels, sets)
    }

    pub fn uniform(r: usize, n: usize) -> Result<Self, MatroidError> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::TooManyElements);
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let bases = ElementSet::full(n).subsets().filter(|s| s.len() == r).collect();
        Matroid::from_bases(labels, bases)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.labels.len())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn loops(&self) -> ElementSet {
        self.loops
    }

    pub fn coloops(&self) -> ElementSet {
        self.bases.iter().fold(self.ground(), |acc, b| acc.intersection(*b))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn subset(&self, labels: &[&str]) -> Result<ElementSet, MatroidError> {
        let mut s = ElementSet::EMPTY;
        for l in labels {
            let i = self.index_of(l).ok_or_else(|| MatroidError::ElementNotInGroundSet(l.to_string()))?;
            s = s.with(i);
        }
        Ok(s)
    }

    pub fn format_set(&self, s: ElementSet) -> String {
        format_set(&self.labels, s)
    }

    /// `r(S) = max |B ∩ S|`. Elements outside the ground set are ignored.
    pub fn rank_of(&self, s: ElementSet) -> usize {
        self.bases.iter().map(|b| b.intersection(s).len()).max().unwrap_or(0)
    }

    pub fn closure(&self, s: ElementSet) -> ElementSet {
        let r = self.rank_of(s);
        let mut out = s;
        for e in self.ground().difference(s).iter() {
            if self.rank_of(s.with(e)) == r {
                out = out.with(e);
            }
        }
        out
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        self.bases.iter().any(|b| s.is_subset(*b))
    }

    pub fn is_flat(&self, s: ElementSet) -> bool {
        s.is_subset(self.ground()) && self.closure(s) == s
    }

    /// All independent sets, ordered by size and then bitmask.
    pub fn independent_sets(&self) -> Vec<ElementSet> {
        let mut out: HashSet<ElementSet> = HashSet::new();
        for b in &self.bases {
            out.extend(b.subsets());
        }
        let mut out: Vec<ElementSet> = out.into_iter().collect();
        out.sort_by_key(sort_key);
        out
    }

    pub fn flat_lattice(&self) -> FlatLattice {
        FlatLattice::new(self)
    }

    pub fn whitney_numbers(&self) -> Vec<usize> {
        self.flat_lattice().whitney_numbers()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank + 1];
        for s in self.independent_sets() {
            f[s.len()] += 1;
        }
        f
    }

    pub fn dual(&self) -> Matroid {
        let full = self.ground();
        Matroid::from_bases(self.labels.clone(), self.bases.iter().map(|b| full.difference(*b)).collect())
            .expect("dual of a valid matroid is valid")
    }

    /// A label not yet used, starting from `"0"`.
    pub fn fresh_label(&self) -> String {
        let mut label = "0".to_string();
        while self.labels.contains(&label) {
            label.push('\'');
        }
        label
    }

    /// Free extension `M + 0`; the new element is placed first.
    pub fn free_extension(&self) -> Result<Matroid, MatroidError> {
        if self.len() + 1 > MAX_ELEMENTS {
            return Err(MatroidError::TooManyElements);
        }
        let mut labels = vec![self.fresh_label()];
        labels.extend(self.labels.iter().cloned());
        let shift = |s: ElementSet| ElementSet(s.0 << 1);
        let mut bases: Vec<ElementSet> = self.bases.iter().map(|b| shift(*b)).collect();
        if self.rank > 0 {
            for i in self.independent_sets() {
                if i.len() + 1 == self.rank {
                    bases.push(shift(i).with(0));
                }
            }
        }
        Matroid::from_bases(labels, bases)
    }

    /// Free coextension `(M* + 0)*`; the new element is placed first.
    pub fn free_coextension(&self) -> Result<Matroid, MatroidError> {
        Ok(self.dual().free_extension()?.dual())
    }

    /// Restriction `M|S`, on the elements of `S` in ground order.
    pub fn restrict(&self, s: ElementSet) -> Matroid {
        let r = self.rank_of(s);
        let labels = s.iter().map(|e| self.labels[e].clone()).collect();
        let bases =
            self.bases.iter().map(|b| b.intersection(s)).filter(|b| b.len() == r).map(|b| b.compress(s)).collect();
        Matroid::from_bases(labels, bases).expect("restriction of a valid matroid is valid")
    }

    /// Contraction `M/S`, on the complement of `S` in ground order.
    pub fn contract(&self, s: ElementSet) -> Matroid {
        let rest = self.ground().difference(s);
        let r = self.rank_of(s);
        let labels = rest.iter().map(|e| self.labels[e].clone()).collect();
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(s).len() == r)
            .map(|b| b.intersection(rest).compress(rest))
            .collect();
        Matroid::from_bases(labels, bases).expect("contraction of a valid matroid is valid")
    }

    pub fn is_admissible(&self, i: ElementSet, f: ElementSet) -> bool {
        i.is_subset(f) && self.is_independent(i) && self.is_flat(f)
    }

    /// The minor `M(I,F) = (M|F)/I` on `F ∖ I`; loops of the minor stay in
    /// its ground set.
    pub fn minor(&self, i: ElementSet, f: ElementSet) -> Result<Matroid, MatroidError> {
        if !self.is_admissible(i, f) {
            return Err(MatroidError::NotAdmissible { independent: self.format_set(i), flat: self.format_set(f) });
        }
        let restricted = self.restrict(f);
        Ok(restricted.contract(i.compress(f)))
    }

    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        for l in &other.labels {
            if self.labels.contains(l) {
                return Err(MatroidError::GroundSetOverlap(l.clone()));
            }
        }
        if self.len() + other.len() > MAX_ELEMENTS {
            return Err(MatroidError::TooManyElements);
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let shift = self.len();
        let mut bases = Vec::new();
        for a in &self.bases {
            for b in &other.bases {
                bases.push(ElementSet(a.0 | (b.0 << shift)));
            }
        }
        Matroid::from_bases(labels, bases)
    }

    /// Same matroid with labels `prefix1, prefix2, ...`.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Matroid, MatroidError> {
        if labels.len() != self.len() {
            return Err(MatroidError::ElementNotInGroundSet(format!(
                "{} labels for {} elements",
                labels.len(),
                self.len()
            )));
        }
        Matroid::from_bases(labels, self.bases.clone())
    }

    /// Connected components, minimal nonempty separators, ordered by their
    /// smallest element.
    pub fn connected_components(&self) -> Vec<ElementSet> {
        let full = self.ground();
        let separator = |s: ElementSet| self.rank_of(s) + self.rank_of(full.difference(s)) == self.rank;
        let mut remaining = full;
        let mut out = Vec::new();
        while let Some(e) = remaining.iter().next() {
            let comp = remaining
                .subsets()
                .filter(|s| s.contains(e) && separator(*s))
                .min_by_key(sort_key)
                .expect("the remaining set is itself a separator");
            out.push(comp);
            remaining = remaining.difference(comp);
        }
        out
    }

    /// `χ_M(t) = Σ_F μ(cl ∅, F) t^{d - r(F)}`, identically zero with loops.
    pub fn characteristic_polynomial(&self) -> Polynomial {
        if !self.loops.is_empty() {
            return Polynomial::zero();
        }
        let lattice = self.flat_lattice();
        let mu = lattice.mobius_from_bottom();
        let mut coeffs = BTreeMap::new();
        for (k, m) in mu.iter().enumerate() {
            let deg = self.rank - lattice.rank(k);
            *coeffs.entry(deg).or_insert_with(Rational::zero) += rat(*m);
        }
        Polynomial::from_map(coeffs)
    }

    /// `χ_M(t) / (t - 1)`. Errors when `M` has loops or has rank zero, the
    /// two cases where no reduced polynomial is defined.
    pub fn reduced_characteristic_polynomial(&self) -> Result<Polynomial, MatroidError> {
        if !self.loops.is_empty() {
            return Err(MatroidError::DivisionNotExact);
        }
        self.characteristic_polynomial().divide_by_t_minus_one()
    }

    /// Checks `|χ̄^k| = f^{d-k}` for the free coextension, all `k`.
    pub fn coext_f_identity_check(&self) -> bool {
        let Ok(coext) = self.free_coextension() else {
            return false;
        };
        let Ok(reduced) = coext.reduced_characteristic_polynomial() else {
            return false;
        };
        let f = self.f_vector();
        let d = self.rank;
        if reduced.degree() != Some(d) {
            return false;
        }
        (0..=d).all(|k| reduced.coefficient(k).abs() == rat(f[d - k] as i64))
    }

    /// All admissible pairs, ordered by flat (lattice order), then by the
    /// independent set (size, then bitmask).
    pub fn admissible_pairs(&self) -> Vec<AdmissiblePair> {
        let lattice = self.flat_lattice();
        let indep = self.independent_sets();
        let mut out = Vec::new();
        for (k, &f) in lattice.flats().iter().enumerate() {
            for &i in &indep {
                if i.is_subset(f) {
                    out.push(AdmissiblePair { independent: i, flat: f, rank: lattice.rank(k) - i.len() });
                }
            }
        }
        out
    }

    /// `n_p^i = Σ_{rk(I,F) = p+i} f^i_{M(I,F)}`.
    pub fn n_p_i(&self, p: usize, i: usize) -> usize {
        let indep = self.independent_sets();
        self.admissible_pairs()
            .iter()
            .filter(|pair| pair.rank == p + i)
            .map(|pair| {
                indep
                    .iter()
                    .filter(|j| {
                        j.len() == pair.independent.len() + i
                            && pair.independent.is_subset(**j)
                            && j.is_subset(pair.flat)
                    })
                    .count()
            })
            .sum()
    }

    /// `N_p = Σ_i (-1)^i n_p^i`.
    pub fn big_n(&self, p: usize) -> i64 {
        (0..=self.rank).map(|i| if i % 2 == 0 { 1 } else { -1 } * self.n_p_i(p, i) as i64).sum()
    }
}

pub fn format_set(labels: &[String], s: ElementSet) -> String {
    if s.is_empty() {
        return "∅".to_string();
    }
    let parts: Vec<&str> = s.iter().map(|e| labels.get(e).map(String::as_str).unwrap_or("?")).collect();
    if parts.iter().all(|p| p.chars().count() == 1) {
        parts.concat()
    } else {
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bases: Vec<String> = self.bases.iter().map(|b| self.format_set(*b)).collect();
        write!(f, "matroid of rank {} on [{}] with bases {{{}}}", self.rank, self.labels.join(","), bases.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct FlatLattice {
    flats: Vec<ElementSet>,
    ranks: Vec<usize>,
    index: HashMap<ElementSet, usize>,
    covers: Vec<(usize, usize)>,
    join: Vec<Vec<usize>>,
}

impl FlatLattice {
    fn new(m: &Matroid) -> Self {
        let mut set: HashSet<ElementSet> = HashSet::new();
        for s in m.ground().subsets() {
            set.insert(m.closure(s));
        }
        let mut flats: Vec<(usize, ElementSet)> = set.into_iter().map(|f| (m.rank_of(f), f)).collect();
        flats.sort_by_key(|(r, f)| (*r, f.0));
        let ranks: Vec<usize> = flats.iter().map(|(r, _)| *r).collect();
        let flats: Vec<ElementSet> = flats.into_iter().map(|(_, f)| f).collect();
        let index: HashMap<ElementSet, usize> = flats.iter().enumerate().map(|(k, f)| (*f, k)).collect();
        let mut covers = Vec::new();
        for (a, fa) in flats.iter().enumerate() {
            for (b, fb) in flats.iter().enumerate() {
                if ranks[b] == ranks[a] + 1 && fa.is_subset(*fb) {
                    covers.push((a, b));
                }
            }
        }
        let join = (0..flats.len())
            .map(|a| (0..flats.len()).map(|b| index[&m.closure(flats[a].union(flats[b]))]).collect())
            .collect();
        FlatLattice { flats, ranks, index, covers, join }
    }

    /// Flats ordered by rank, then bitmask.
    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks[k]
    }

    pub fn index_of(&self, f: ElementSet) -> Option<usize> {
        self.index.get(&f).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.flats[a].intersection(self.flats[b])]
    }

    pub fn whitney_numbers(&self) -> Vec<usize> {
        let mut w = vec![0; self.ranks.last().map_or(0, |r| r + 1)];
        for &r in &self.ranks {
            w[r] += 1;
        }
        w
    }

    /// `μ(bottom, F)` for every flat, in lattice order.
    pub fn mobius_from_bottom(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.flats.len()];
        for k in 0..self.flats.len() {
            if k == 0 {
                mu[k] = 1;
                continue;
            }
            let below: i64 = (0..k).filter(|&g| self.flats[g].is_subset(self.flats[k])).map(|g| mu[g]).sum();
            mu[k] = -below;
        }
        mu
    }
}

/// An admissible pair `(I, F)`: `I` independent, `F` a flat, `I ⊆ F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissiblePair {
    pub independent: ElementSet,
    pub flat: ElementSet,
    /// `r(F) - |I|`, the rank of the minor `M(I,F)`.
    pub rank: usize,
}

impl AdmissiblePair {
    pub fn label(&self, m: &Matroid) -> String {
        format!("M({},{})", m.format_set(self.independent), m.format_set(self.flat))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// The order on admissible pairs: `(J,G) ⪯ (I,F)` iff `I ⊆ J` and `G ⊆ F`.
pub fn pair_order(a: &AdmissiblePair, b: &AdmissiblePair) -> PairOrdering {
    let le =
        |x: &AdmissiblePair, y: &AdmissiblePair| y.independent.is_subset(x.independent) && x.flat.is_subset(y.flat);
    match (le(a, b), le(b, a)) {
        (true, true) => PairOrdering::Equal,
        (true, false) => PairOrdering::Less,
        (false, true) => PairOrdering::Greater,
        (false, false) => PairOrdering::Incomparable,
    }
}

/// Cover relations `lower ≺· upper` among the given admissible pairs.
///
/// Either the flat is kept and one element is dropped from the independent
/// set of the lower pair, or the independent set is kept and the flat grows
/// by a lattice cover.
pub fn pair_covers(m: &Matroid, pairs: &[AdmissiblePair]) -> Vec<(usize, usize)> {
    let index: HashMap<(ElementSet, ElementSet), usize> =
        pairs.iter().enumerate().map(|(k, p)| ((p.independent, p.flat), k)).collect();
    let lattice = m.flat_lattice();
    let mut out = Vec::new();
    for (lo, p) in pairs.iter().enumerate() {
        for j in p.independent.iter() {
            if let Some(&hi) = index.get(&(p.independent.without(j), p.flat)) {
                out.push((lo, hi));
            }
        }
        let fk = lattice.index_of(p.flat).expect("flat in lattice");
        for &(a, b) in lattice.covers() {
            if a == fk {
                if let Some(&hi) = index.get(&(p.independent, lattice.flats()[b])) {
                    out.push((lo, hi));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Polynomial with rational coefficients; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: BTreeMap<usize, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn from_map(coeffs: BTreeMap<usize, Rational>) -> Self {
        Polynomial { coeffs: coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::from_map(coeffs.iter().enumerate().map(|(k, &c)| (k, rat(c))).collect())
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    /// Exact division by `t - 1`. The zero polynomial and constants are
    /// rejected since no reduced polynomial is attached to them.
    pub fn divide_by_t_minus_one(&self) -> Result<Polynomial, MatroidError> {
        let Some(deg) = self.degree() else {
            return Err(MatroidError::DivisionNotExact);
        };
        if deg == 0 {
            return Err(MatroidError::DivisionNotExact);
        }
        // Synthetic division at t = 1, from the top coefficient down.
        let mut quotient = BTreeMap::new();
        let mut carry = Rational::zero();
        for k in (1..=deg).rev() {
            carry += self.coefficient(k);
            quotient.insert(k - 1, carry.clone());
        }
        let remainder = carry + self.coefficient(0);
        if !remainder.is_zero() {
            return Err(MatroidError::DivisionNotExact);
        }
        Ok(Polynomial::from_map(quotient))
    }

    pub fn evaluate(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut power = Rational::one();
        let mut k = 0;
        for (deg, c) in &self.coeffs {
            while k < *deg {
                power *= t;
                k += 1;
            }
            acc += c * &power;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().rev().map(|(k, c)| format!("({c})t^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex82() -> Matroid {
        Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]]).unwrap()
    }

    #[test]
    fn construction_and_errors() {
        let u22 = Matroid::from_labeled(&["1", "2"], &[&["1", "2"]]).unwrap();
        assert_eq!(u22.rank(), 2);
        assert_eq!(u22, Matroid::uniform(2, 2).unwrap());
        assert_eq!(ex82().bases().len(), 2);
        let bad = Matroid::from_labeled(&["1", "2"], &[&["1"], &["1", "2"]]);
        assert!(matches!(bad, Err(MatroidError::UnequalCardinality { .. })));
        assert_eq!(Matroid::from_labeled(&["1"], &[]), Err(MatroidError::EmptyBases));
        // {12} and {34} alone violate exchange.
        let bad = Matroid::from_labeled(&["1", "2", "3", "4"], &[&["1", "2"], &["3", "4"]]);
        assert!(matches!(bad, Err(MatroidError::ExchangeAxiomFailure { .. })));
    }

    #[test]
    fn rank_closure_independence() {
        let m = ex82();
        let s = m.subset(&["1", "2"]).unwrap();
        assert_eq!(m.rank_of(s), 1);
        assert_eq!(m.closure(s), s);
        assert!(!m.is_independent(s));
        assert_eq!(m.closure(ElementSet::EMPTY), m.loops());
        let u22 = Matroid::uniform(2, 2).unwrap();
        let one = u22.subset(&["1"]).unwrap();
        assert_eq!(u22.rank_of(one), 1);
        assert_eq!(u22.closure(one), one);
        assert!(matches!(m.subset(&["9"]), Err(MatroidError::ElementNotInGroundSet(_))));
    }

    #[test]
    fn lattices_and_counts() {
        assert_eq!(Matroid::uniform(2, 2).unwrap().whitney_numbers(), vec![1, 2, 1]);
        let m = ex82();
        let flats: Vec<String> = m.flat_lattice().flats().iter().map(|f| m.format_set(*f)).collect();
        assert_eq!(flats, vec!["∅", "12", "3", "123"]);
        assert_eq!(m.whitney_numbers(), vec![1, 2, 1]);
        assert_eq!(Matroid::uniform(1, 2).unwrap().whitney_numbers(), vec![1, 1]);
        assert_eq!(Matroid::uniform(2, 2).unwrap().f_vector(), vec![1, 2, 1]);
        assert_eq!(Matroid::uniform(0, 0).unwrap().f_vector(), vec![1]);
        assert_eq!(m.f_vector(), vec![1, 3, 2]);
    }

    #[test]
    fn duality_and_extensions() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        let d = u22.dual();
        assert_eq!(d.rank(), 0);
        assert_eq!(d.loops(), d.ground());
        let coext = u22.free_coextension().unwrap();
        assert_eq!(coext.bases().len(), 1);
        assert_eq!(coext.rank(), 3);
        let m = ex82();
        let back = m.free_coextension().unwrap().contract(ElementSet::singleton(0));
        assert_eq!(back, m);
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn minors() {
        let m = ex82();
        let i = m.subset(&["1"]).unwrap();
        let pair = m.minor(i, m.ground()).unwrap();
        assert_eq!(pair.labels(), &["2".to_string(), "3".to_string()]);
        assert_eq!(pair.loops(), ElementSet::singleton(0));
        assert_eq!(m.minor(ElementSet::EMPTY, m.ground()).unwrap(), m);
        let u22 = Matroid::uniform(2, 2).unwrap();
        let minor = u22.minor(ElementSet::singleton(0), u22.ground()).unwrap();
        assert_eq!(minor, Matroid::from_labeled(&["2"], &[&["2"]]).unwrap());
        assert!(matches!(m.minor(m.subset(&["1", "2"]).unwrap(), m.ground()), Err(MatroidError::NotAdmissible { .. })));
    }

    #[test]
    fn characteristic_polynomials() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert_eq!(u22.characteristic_polynomial(), Polynomial::from_i64(&[1, -2, 1]));
        assert_eq!(u22.reduced_characteristic_polynomial().unwrap(), Polynomial::from_i64(&[-1, 1]));
        let u33 = Matroid::uniform(3, 3).unwrap();
        assert_eq!(u33.reduced_characteristic_polynomial().unwrap(), Polynomial::from_i64(&[1, -2, 1]));
        let empty = Matroid::uniform(0, 0).unwrap();
        assert_eq!(empty.characteristic_polynomial(), Polynomial::from_i64(&[1]));
        assert_eq!(empty.reduced_characteristic_polynomial(), Err(MatroidError::DivisionNotExact));
        let looped = Matroid::uniform(0, 1).unwrap();
        assert!(looped.characteristic_polynomial().is_zero());
        assert_eq!(looped.reduced_characteristic_polynomial(), Err(MatroidError::DivisionNotExact));
    }

    #[test]
    fn coextension_identity() {
        assert!(Matroid::uniform(2, 2).unwrap().coext_f_identity_check());
        assert!(Matroid::uniform(1, 1).unwrap().coext_f_identity_check());
        assert!(ex82().coext_f_identity_check());
    }

    #[test]
    fn admissible_pairs_and_order() {
        assert_eq!(Matroid::uniform(2, 2).unwrap().admissible_pairs().len(), 9);
        let m = ex82();
        let pairs = m.admissible_pairs();
        assert_eq!(pairs.len(), 12);
        let find = |i: &[&str], f: &[&str]| {
            let (i, f) = (m.subset(i).unwrap(), m.subset(f).unwrap());
            *pairs.iter().find(|p| p.independent == i && p.flat == f).unwrap()
        };
        let bottom = find(&[], &[]);
        assert_eq!(pair_order(&bottom, &find(&[], &["1", "2", "3"])), PairOrdering::Less);
        assert_eq!(pair_order(&bottom, &find(&["1"], &["1", "2"])), PairOrdering::Incomparable);
        assert_eq!(pair_order(&bottom, &bottom), PairOrdering::Equal);
    }

    #[test]
    fn big_n_examples() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert_eq!(u22.n_p_i(1, 0), 4);
        assert_eq!(u22.n_p_i(1, 1), 2);
        assert_eq!(u22.big_n(1), 2);
        assert_eq!(u22.big_n(3), 0);
        let m = ex82();
        assert_eq!((0..3).map(|p| m.big_n(p)).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn direct_sums() {
        let a = Matroid::from_labeled(&["1"], &[&["1"]]).unwrap();
        let b = Matroid::from_labeled(&["2"], &[&["2"]]).unwrap();
        assert_eq!(a.direct_sum(&b).unwrap(), Matroid::uniform(2, 2).unwrap());
        let pair = Matroid::from_labeled(&["1", "2"], &[&["1"], &["2"]]).unwrap();
        let coloop = Matroid::from_labeled(&["3"], &[&["3"]]).unwrap();
        let sum = pair.direct_sum(&coloop).unwrap();
        assert_eq!(sum, ex82());
        assert_eq!(sum.flat_lattice().len(), pair.flat_lattice().len() * coloop.flat_lattice().len());
        assert!(matches!(a.direct_sum(&a), Err(MatroidError::GroundSetOverlap(_))));
        assert_eq!(sum.connected_components().len(), 2);
    }

    #[test]
    fn element_set_helpers() {
        let s = ElementSet::from_indices([1, 3]);
        assert_eq!(s.subsets().count(), 4);
        let within = ElementSet::from_indices([1, 2, 3]);
        assert_eq!(s.compress(within), ElementSet::from_indices([0, 2]));
        assert_eq!(s.compress(within).expand(within), s);
    }
}
