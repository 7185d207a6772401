//! The rank spectral sequence of `Y_M` on its `E_1` page, where each
//! stratum contributes multi-tangent spaces at the cone point of its fan,
//! and the flat-rank filtration that splits `(E_1, d_1)` into Koszul
//! complexes.
//!
//! `E_1^{a,0}` has basis `w_S` for `(I,F)` admissible of rank `a` and
//! `S ⊆ F∖I` with `I ∪ S` independent, `|S| = a − p`. Along a cover
//! `(J,G) ≺· (I,F)` the differential is `u ↦ n ∧ u` with `n = −e_j` when
//! `J = I ⊔ j` and `n = e_{F∖G}` when `I = J`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{cochain_complex_on, multi_tangent_spaces, CohomologyError};
use crate::linalg::{self, merge_sign, rat, Matrix, Rational};
use crate::matroid::{AdmissiblePair, ElementSet, Matroid};
use crate::schubert::FaceComplex;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("d1 does not square to zero at a = {0}")]
    SignConsistencyFailure(usize),
    #[error("flat-rank preserving differential mixes Koszul blocks at generator {0}")]
    DecompositionFailure(String),
    #[error("wedge image {0} is not a basis monomial of the target")]
    MissingGenerator(String),
}

/// A basis monomial `w_S` in the summand of the stratum `pair`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E1Generator {
    pub pair: usize,
    pub s: ElementSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageEntry {
    pub a: usize,
    pub b: i64,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub page: usize,
    pub p: usize,
    pub pairs: Vec<AdmissiblePair>,
    /// `generators[a]` spans `E_1^{a,0}`.
    pub generators: Vec<Vec<E1Generator>>,
    /// `differentials[a]: E_1^{a,0} → E_1^{a+1,0}`.
    pub differentials: Vec<Matrix>,
}

impl SpectralPage {
    pub fn dims(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    pub fn entries(&self) -> Vec<PageEntry> {
        self.dims().into_iter().enumerate().map(|(a, dim)| PageEntry { a, b: 0, dim }).collect()
    }

    pub fn check_square_zero(&self) -> Result<(), SpectralError> {
        for a in 0..self.differentials.len().saturating_sub(1) {
            if !self.differentials[a + 1].mul(&self.differentials[a]).expect("shapes chain").is_zero() {
                return Err(SpectralError::SignConsistencyFailure(a));
            }
        }
        Ok(())
    }

    /// Homology of `(E_1^{•,0}, d_1)`.
    pub fn homology_dims(&self) -> Vec<usize> {
        homology(&self.dims(), &self.differentials)
    }

    fn describe(&self, m: &Matroid, g: E1Generator) -> String {
        format!("w_{} in {}", m.format_set(g.s), self.pairs[g.pair].label(m))
    }
}

fn homology(dims: &[usize], maps: &[Matrix]) -> Vec<usize> {
    let ranks: Vec<usize> = maps.iter().map(linalg::rank).collect();
    (0..dims.len())
        .map(|a| dims[a] - ranks.get(a).copied().unwrap_or(0) - if a == 0 { 0 } else { ranks[a - 1] })
        .collect()
}

fn e1_generators(m: &Matroid, pairs: &[AdmissiblePair], p: usize) -> Vec<Vec<E1Generator>> {
    let d = m.rank();
    let mut gens = vec![Vec::new(); d + 1];
    for (k, pair) in pairs.iter().enumerate() {
        let Some(size) = pair.rank.checked_sub(p) else {
            continue;
        };
        let free = pair.flat.difference(pair.independent);
        let mut subsets: Vec<ElementSet> =
            free.subsets().filter(|s| s.len() == size && m.is_independent(s.union(pair.independent))).collect();
        subsets.sort_by_key(|s| s.bits());
        gens[pair.rank].extend(subsets.into_iter().map(|s| E1Generator { pair: k, s }));
    }
    gens
}

/// Rank-raising covers `(lower, upper, n)` with `n` given by its support and
/// sign.
fn rank_covers(pairs: &[AdmissiblePair]) -> Vec<(usize, usize, ElementSet, i32)> {
    let mut out = Vec::new();
    for (lo, a) in pairs.iter().enumerate() {
        for (hi, b) in pairs.iter().enumerate() {
            if b.rank != a.rank + 1 || !b.independent.is_subset(a.independent) || !a.flat.is_subset(b.flat) {
                continue;
            }
            if a.flat == b.flat {
                out.push((lo, hi, a.independent.difference(b.independent), -1));
            } else if a.independent == b.independent {
                out.push((lo, hi, b.flat.difference(a.flat), 1));
            }
        }
    }
    out
}

/// `n ∧ w_S` expanded on monomials: `(T, coefficient)`.
fn wedge_with(n_support: ElementSet, n_sign: i32, s: ElementSet) -> Vec<(ElementSet, i32)> {
    n_support
        .iter()
        .filter(|&e| !s.contains(e))
        .map(|e| {
            let single = ElementSet::singleton(e);
            (s.with(e), n_sign * merge_sign(single.bits(), s.bits()))
        })
        .collect()
}

/// `E_1^{•,0}` for the given `p`, with bases and `d_1`.
pub fn e1_page(m: &Matroid, p: usize) -> Result<SpectralPage, SpectralError> {
    let pairs = m.admissible_pairs();
    let generators = e1_generators(m, &pairs, p);
    let index: HashMap<E1Generator, usize> =
        generators.iter().flat_map(|g| g.iter().enumerate().map(|(i, &x)| (x, i))).collect();
    let covers = rank_covers(&pairs);
    let d = m.rank();
    let mut triplets: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); d];
    for &(lo, hi, support, sign) in &covers {
        let a = pairs[lo].rank;
        for (col, g) in generators[a].iter().enumerate().filter(|(_, g)| g.pair == lo) {
            for (t, c) in wedge_with(support, sign, g.s) {
                let target = E1Generator { pair: hi, s: t };
                let &row = index.get(&target).ok_or_else(|| {
                    SpectralError::MissingGenerator(format!("{} in {}", m.format_set(t), pairs[hi].label(m)))
                })?;
                triplets[a].push((row, col, rat(i64::from(c))));
            }
        }
    }
    let differentials = triplets
        .into_iter()
        .enumerate()
        .map(|(a, t)| Matrix::from_triplets(generators[a + 1].len(), generators[a].len(), t))
        .collect();
    let page = SpectralPage { page: 1, p, pairs, generators, differentials };
    page.check_square_zero()?;
    Ok(page)
}

/// The block `E_1^{a,0} → E_1^{a+1,0}` of `d_1`.
pub fn e1_differential(m: &Matroid, p: usize, a: usize) -> Result<Matrix, SpectralError> {
    let page = e1_page(m, p)?;
    Ok(page.differentials.get(a).cloned().unwrap_or_else(|| {
        let dims = page.dims();
        Matrix::zeros(dims.get(a + 1).copied().unwrap_or(0), dims.get(a).copied().unwrap_or(0))
    }))
}

/// `a ↦ dim E_2^{a,0}`.
pub fn e2_dims(m: &Matroid, p: usize) -> Result<Vec<usize>, SpectralError> {
    Ok(e1_page(m, p)?.homology_dims())
}

/// `Σ_a (−1)^{a−p} dim E_1^{a,0} = W_p`.
pub fn euler_characteristic(m: &Matroid, p: usize) -> Result<i64, SpectralError> {
    let dims = e1_page(m, p)?.dims();
    Ok(dims
        .iter()
        .enumerate()
        .map(|(a, &x)| {
            let x = x as i64;
            if (a + p).is_multiple_of(2) {
                x
            } else {
                -x
            }
        })
        .sum())
}

pub fn euler_check(m: &Matroid, p: usize) -> Result<bool, SpectralError> {
    let w = m.whitney_numbers().get(p).copied().unwrap_or(0) as i64;
    Ok(euler_characteristic(m, p)? == w)
}

/// `E_1^{a,b}` computed cellularly: compactly supported cohomology of the
/// strata of `Y_M` of rank `a`, in total degree `a + b`. Indexed `[a][q]`.
pub fn cellular_e1(complex: &FaceComplex, p: usize) -> Result<Vec<Vec<usize>>, CohomologyError> {
    let spaces = multi_tangent_spaces(complex, p);
    let strata = complex.strata();
    let d = complex.dim();
    (0..=d)
        .map(|a| {
            let include = |k: usize| strata[complex.cells()[k].stratum].rank == a;
            let mut h = cochain_complex_on(complex, &spaces, &include)?.cohomology_dims();
            h.resize(d + 1, 0);
            Ok(h)
        })
        .collect()
}

/// One summand `D^•(J,F)` of `Ξ_0`.
#[derive(Clone, Debug)]
pub struct KoszulComplexData {
    pub independent: ElementSet,
    pub flat: ElementSet,
    pub p: usize,
    /// `terms[i]` lists the generators `w_{J_i}` in `(J∖J_i, F)`.
    pub terms: Vec<Vec<E1Generator>>,
    pub differentials: Vec<Matrix>,
}

impl KoszulComplexData {
    pub fn homology_dims(&self) -> Vec<usize> {
        homology(&self.terms.iter().map(Vec::len).collect::<Vec<_>>(), &self.differentials)
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_dims().iter().all(|&h| h == 0)
    }

    /// Compares with the exterior algebra on `Q^J` with `v = −Σ e_j`, term by
    /// term in the basis `e_{J_i}`.
    pub fn matches_exterior_koszul(&self) -> bool {
        let j = self.independent;
        let size = j.len();
        (0..self.differentials.len()).all(|i| {
            let src: Vec<ElementSet> = self.terms[i].iter().map(|g| g.s.compress(j)).collect();
            let dst: Vec<ElementSet> = self.terms[i + 1].iter().map(|g| g.s.compress(j)).collect();
            let pos: HashMap<ElementSet, usize> = dst.iter().enumerate().map(|(r, &s)| (s, r)).collect();
            let mut expected = Vec::new();
            for (c, &s) in src.iter().enumerate() {
                for e in 0..size {
                    if s.contains(e) {
                        continue;
                    }
                    let sign = -merge_sign(1 << e, s.bits());
                    match pos.get(&s.with(e)) {
                        Some(&r) => expected.push((r, c, rat(i64::from(sign)))),
                        None => return false,
                    }
                }
            }
            let expected = Matrix::from_triplets(dst.len(), src.len(), expected);
            expected.to_dense() == self.differentials[i].to_dense()
        })
    }
}

/// Splits the flat-rank preserving part of `d_1` into the blocks
/// `D^•(J,F)`, labelled by `J = I ∪ S`.
pub fn koszul_complexes(m: &Matroid, p: usize) -> Result<Vec<KoszulComplexData>, SpectralError> {
    let page = e1_page(m, p)?;
    let pairs = &page.pairs;
    let label = |g: &E1Generator| (g.s.union(pairs[g.pair].independent), pairs[g.pair].flat);
    // Per block, generators by stratum rank, with their index in the page.
    type Block = Vec<Vec<(usize, E1Generator)>>;
    let mut blocks: BTreeMap<(u64, u64), Block> = BTreeMap::new();
    for gens in &page.generators {
        for (i, g) in gens.iter().enumerate() {
            let (j, f) = label(g);
            if j.len() + p != m.rank_of(f) {
                return Err(SpectralError::DecompositionFailure(page.describe(m, *g)));
            }
            let entry = blocks.entry((f.bits(), j.bits())).or_insert_with(|| vec![Vec::new(); j.len() + 1]);
            entry[g.s.len()].push((i, *g));
        }
    }
    // Every flat-preserving entry of d_1 must stay inside one block.
    for (a, d) in page.differentials.iter().enumerate() {
        for r in 0..d.nrows() {
            for (c, _) in d.row(r) {
                let (src, dst) = (page.generators[a][*c], page.generators[a + 1][r]);
                if pairs[src.pair].flat == pairs[dst.pair].flat && label(&src) != label(&dst) {
                    return Err(SpectralError::DecompositionFailure(page.describe(m, src)));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(blocks.len());
    for ((f, j), terms) in blocks {
        let (flat, independent) = (ElementSet(f), ElementSet(j));
        let differentials = (0..independent.len())
            .map(|i| {
                let a = p + i;
                let d = &page.differentials[a];
                let rows: HashMap<usize, usize> = terms[i + 1].iter().enumerate().map(|(k, (r, _))| (*r, k)).collect();
                let t: Vec<(usize, usize, Rational)> = terms[i]
                    .iter()
                    .enumerate()
                    .flat_map(|(c, (col, _))| {
                        rows.iter().filter_map(move |(&r, &k)| {
                            let x = d.get(r, *col);
                            (!x.is_zero()).then_some((k, c, x))
                        })
                    })
                    .collect();
                Matrix::from_triplets(terms[i + 1].len(), terms[i].len(), t)
            })
            .collect();
        let terms = terms.into_iter().map(|t| t.into_iter().map(|(_, g)| g).collect()).collect();
        out.push(KoszulComplexData { independent, flat, p, terms, differentials });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub blocks: usize,
    pub acyclic_nonempty: bool,
    pub empty_total: usize,
    pub whitney: usize,
    pub exterior_shape: bool,
    pub passed: bool,
}

/// Blocks with `J ≠ ∅` are exact; blocks with `J = ∅` are a single line in
/// degree `p`, and there are `W_p` of them.
pub fn acyclicity_check(m: &Matroid, p: usize) -> Result<KoszulReport, SpectralError> {
    let blocks = koszul_complexes(m, p)?;
    let mut acyclic_nonempty = true;
    let mut empty_total = 0;
    let mut exterior_shape = true;
    for b in &blocks {
        exterior_shape &= b.matches_exterior_koszul();
        if b.independent.is_empty() {
            let h = b.homology_dims();
            if h == [1] {
                empty_total += 1;
            } else {
                acyclic_nonempty = false;
            }
        } else {
            acyclic_nonempty &= b.is_acyclic();
        }
    }
    let whitney = m.whitney_numbers().get(p).copied().unwrap_or(0);
    let passed = acyclic_nonempty && exterior_shape && empty_total == whitney;
    Ok(KoszulReport { blocks: blocks.len(), acyclic_nonempty, empty_total, whitney, exterior_shape, passed })
}

/// `Ξ_1^{k,l}`, read off the Koszul blocks: block `(J,F)` has `k = r(F)` and
/// its `i`-th term sits in total degree `p + i`, so `l = p + i − k`.
pub fn xi1_page(m: &Matroid, p: usize) -> Result<BTreeMap<(usize, i64), usize>, SpectralError> {
    let mut out = BTreeMap::new();
    for b in koszul_complexes(m, p)? {
        let k = m.rank_of(b.flat);
        for (i, h) in b.homology_dims().into_iter().enumerate() {
            if h > 0 {
                *out.entry((k, (p + i) as i64 - k as i64)).or_insert(0) += h;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubert::build_face_complex;

    fn ex82() -> Matroid {
        Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]]).unwrap()
    }

    #[test]
    fn e1_dims_examples() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert_eq!(e1_page(&u22, 0).unwrap().dims(), vec![4, 4, 1]);
        assert_eq!(e1_page(&u22, 2).unwrap().dims(), vec![0, 0, 1]);
        assert_eq!(e1_page(&u22, 3).unwrap().dims(), vec![0, 0, 0]);
        let u11 = Matroid::uniform(1, 1).unwrap();
        assert_eq!(e1_page(&u11, 0).unwrap().dims(), vec![2, 1]);
    }

    #[test]
    fn d1_examples() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        let d = e1_differential(&u22, 0, 0).unwrap();
        assert_eq!((d.nrows(), d.ncols(), d.rank()), (4, 4, 3));
        let d = e1_differential(&Matroid::uniform(1, 1).unwrap(), 0, 0).unwrap();
        assert_eq!((d.nrows(), d.ncols(), d.rank()), (1, 2, 1));
    }

    #[test]
    fn wedge_with_factor_vanishes() {
        let s = ElementSet::from_indices([0, 2]);
        assert!(wedge_with(ElementSet::singleton(0), -1, s).is_empty());
    }

    #[test]
    fn e2_and_euler() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert_eq!(e2_dims(&u22, 1).unwrap(), vec![0, 2, 0]);
        assert_eq!(e2_dims(&ex82(), 0).unwrap(), vec![1, 0, 0]);
        assert_eq!(e2_dims(&ex82(), 2).unwrap(), vec![0, 0, 1]);
        assert_eq!(euler_characteristic(&u22, 0).unwrap(), 1);
        assert_eq!(euler_characteristic(&u22, 1).unwrap(), 2);
        assert!(euler_check(&u22, 5).unwrap());
    }

    #[test]
    fn cellular_e1_agrees() {
        for m in [Matroid::uniform(2, 2).unwrap(), ex82(), Matroid::uniform(1, 1).unwrap()] {
            let y = build_face_complex(&m).unwrap();
            for p in 0..=m.rank() {
                let cell = cellular_e1(&y, p).unwrap();
                let dims = e1_page(&m, p).unwrap().dims();
                for (a, row) in cell.iter().enumerate() {
                    for (q, &h) in row.iter().enumerate() {
                        assert_eq!(h, if q == a { dims[a] } else { 0 }, "p={p} a={a} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn koszul_examples() {
        let m = ex82();
        let f12 = m.subset(&["1", "2"]).unwrap();
        // |J| = r(F) - p forces p = 0 for the block ({1}, 12).
        let blocks = koszul_complexes(&m, 0).unwrap();
        let b = blocks.iter().find(|b| b.flat == f12 && b.independent == m.subset(&["1"]).unwrap()).unwrap();
        assert!(koszul_complexes(&m, 1).unwrap().iter().all(|b| b.flat != f12 || b.independent.is_empty()));
        assert_eq!(b.terms.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(b.differentials[0].get(0, 0), rat(-1));
        assert!(b.is_acyclic());

        let u22 = Matroid::uniform(2, 2).unwrap();
        let blocks = koszul_complexes(&u22, 0).unwrap();
        let full = ElementSet::full(2);
        let b = blocks.iter().find(|b| b.flat == full && b.independent == full).unwrap();
        assert_eq!(b.terms.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert!(b.is_acyclic() && b.matches_exterior_koszul());
        for b in blocks.iter().filter(|b| b.independent.is_empty()) {
            assert_eq!(b.homology_dims(), vec![1]);
        }
        assert!(acyclicity_check(&u22, 0).unwrap().passed);
    }

    #[test]
    fn xi1_examples() {
        let u22 = Matroid::uniform(2, 2).unwrap();
        assert_eq!(xi1_page(&u22, 1).unwrap().into_iter().collect::<Vec<_>>(), vec![((1, 0), 2)]);
        assert_eq!(xi1_page(&ex82(), 0).unwrap().into_iter().collect::<Vec<_>>(), vec![((0, 0), 1)]);
        assert!(xi1_page(&u22, 3).unwrap().is_empty());
    }
}
