//! The face complex of `Y_M`, the closure of `|Σ⁺_M|` in `(TP¹)^E`.
//!
//! Cells are the projections `π^ζ(σ)` of cones of `Σ⁺_M` to the torus
//! orbits `O(J,K)` whose orthant meets `σ` in its relative interior. Each
//! cell sits in the stratum of the admissible pair `(J, E∖K)`.
//!
//! Orientation: a cell is oriented by the wedge of its primitive rays in the
//! order of [`crate::fan::ray_order_key`]. For a cover `τ ≺· σ` the sign is
//! fixed by `ν_σ = sgn · n ∧ ν_τ`, where `n` is the outward direction: minus
//! the dropped ray when the orbit is kept, and the vector of `σ` pointing
//! into the new orbit's orthant when `τ` lies at infinity.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bergman::build_augmented;
use crate::fan::{closure_cells_of_cone, primitive, sort_rays, IntVec, OrbitCone, OrbitLabel};
use crate::linalg::{rat, wedge_all, Multivector, Rational};
use crate::matroid::{pair_covers, pair_order, AdmissiblePair, ElementSet, Matroid, PairOrdering};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SchubertError {
    #[error("incidence signs are inconsistent at cell {0}")]
    SignConsistencyFailure(usize),
    #[error("cell in orbit {0} does not correspond to an admissible pair")]
    UnexpectedOrbit(String),
    #[error("face {0} of a cell is missing from the complex")]
    MissingFace(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub orbit: OrbitLabel,
    /// Primitive generators in canonical order, zero on the orbit's
    /// coordinates at infinity.
    pub rays: Vec<IntVec>,
    /// Index into [`FaceComplex::strata`].
    pub stratum: usize,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn killed(&self) -> ElementSet {
        self.orbit.killed()
    }

    /// `ν_σ`, the wedge of the generators in canonical order.
    pub fn orientation(&self, n: usize) -> Multivector {
        wedge_all(n, &self.rational_rays()).expect("rays live in the ambient space")
    }

    pub fn rational_rays(&self) -> Vec<Vec<Rational>> {
        self.rays.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }
}

/// `lower ≺· upper` with incidence sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    pub sign: i8,
    pub same_orbit: bool,
}

#[derive(Clone, Debug)]
pub struct FaceComplex {
    matroid: Matroid,
    strata: Vec<AdmissiblePair>,
    cells: Vec<Cell>,
    covers: Vec<Cover>,
}

impl FaceComplex {
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn ambient_dim(&self) -> usize {
        self.matroid.len()
    }

    pub fn strata(&self) -> &[AdmissiblePair] {
        &self.strata
    }

    /// Cells sorted by dimension, stratum, orbit and rays.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    /// Number of cells per dimension.
    pub fn dims_histogram(&self) -> Vec<usize> {
        let top = self.cells.iter().map(Cell::dim).max().unwrap_or(0);
        let mut h = vec![0; top + 1];
        for c in &self.cells {
            h[c.dim()] += 1;
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().map(Cell::dim).max().unwrap_or(0)
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else {
        -1
    }
}

fn cover_sign(n_dim: usize, upper: &Cell, normal: &[Rational], lift: &[Vec<Rational>]) -> Option<i8> {
    let nu = upper.orientation(n_dim);
    let mut vecs = vec![normal.to_vec()];
    vecs.extend(lift.iter().cloned());
    let candidate = wedge_all(n_dim, &vecs).ok()?;
    let ratio = nu.ratio_to(&candidate)?;
    (!ratio.is_zero()).then(|| sign_of(&ratio))
}

/// Builds the face complex of `Y_M` with incidence signs and checks `∂² = 0`.
pub fn build_face_complex(m: &Matroid) -> Result<FaceComplex, SchubertError> {
    let n = m.len();
    let abf = build_augmented(m);
    let fan = abf.fan();
    let mut all: BTreeSet<OrbitCone> = BTreeSet::new();
    for k in 0..fan.cones().len() {
        let mut rays = fan.cone_vectors(k);
        sort_rays(&mut rays);
        all.extend(closure_cells_of_cone(&OrbitCone { orbit: OrbitLabel::ZERO, rays }));
    }

    let strata = m.admissible_pairs();
    let stratum_index: HashMap<(ElementSet, ElementSet), usize> =
        strata.iter().enumerate().map(|(k, p)| ((p.independent, p.flat), k)).collect();
    let ground = m.ground();
    let mut cells = Vec::with_capacity(all.len());
    for oc in all {
        let flat = ground.difference(oc.orbit.neg);
        let Some(&stratum) = stratum_index.get(&(oc.orbit.pos, flat)) else {
            return Err(SchubertError::UnexpectedOrbit(oc.orbit.describe(n)));
        };
        cells.push(Cell { orbit: oc.orbit, rays: oc.rays, stratum });
    }
    cells.sort_by(|a, b| (a.dim(), a.stratum, a.orbit, &a.rays).cmp(&(b.dim(), b.stratum, b.orbit, &b.rays)));
    let index: HashMap<(OrbitLabel, Vec<IntVec>), usize> =
        cells.iter().enumerate().map(|(k, c)| ((c.orbit, c.rays.clone()), k)).collect();

    let mut covers = Vec::new();
    for (u, cell) in cells.iter().enumerate() {
        let rays_q = cell.rational_rays();
        for drop in 0..cell.dim() {
            let mut face = cell.rays.clone();
            face.remove(drop);
            let Some(&l) = index.get(&(cell.orbit, face)) else {
                return Err(SchubertError::MissingFace(format!("{:?} of cell {u}", cell.rays[drop])));
            };
            let normal: Vec<Rational> = rays_q[drop].iter().map(|x| -x).collect();
            let lift: Vec<Vec<Rational>> =
                rays_q.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, r)| r.clone()).collect();
            let sign = cover_sign(n, cell, &normal, &lift).ok_or(SchubertError::SignConsistencyFailure(u))?;
            covers.push(Cover { lower: l, upper: u, sign, same_orbit: true });
        }
        let here = OrbitCone { orbit: cell.orbit, rays: cell.rays.clone() };
        for image in closure_cells_of_cone(&here) {
            if image.orbit == cell.orbit || image.dim() + 1 != cell.dim() {
                continue;
            }
            let Some(&l) = index.get(&(image.orbit, image.rays.clone())) else {
                return Err(SchubertError::MissingFace(format!("{} of cell {u}", image.orbit.describe(n))));
            };
            let new_killed = image.orbit.killed().difference(cell.killed());
            let inside = |r: &IntVec| r.iter().enumerate().all(|(i, &x)| x == 0 || new_killed.contains(i));
            let mut normal = vec![0i64; n];
            for r in cell.rays.iter().filter(|r| inside(r)) {
                for (s, x) in normal.iter_mut().zip(r) {
                    *s += x;
                }
            }
            let killed = image.orbit.killed();
            let mut lift = Vec::with_capacity(image.dim());
            for t in &image.rays {
                let src = cell
                    .rays
                    .iter()
                    .find(|r| {
                        let p: IntVec =
                            r.iter().enumerate().map(|(i, &x)| if killed.contains(i) { 0 } else { x }).collect();
                        p.iter().any(|&x| x != 0) && primitive(&p) == *t
                    })
                    .ok_or(SchubertError::SignConsistencyFailure(u))?;
                lift.push(src.iter().map(|&x| rat(x)).collect());
            }
            let normal_q: Vec<Rational> = normal.iter().map(|&x| rat(x)).collect();
            let sign = cover_sign(n, cell, &normal_q, &lift).ok_or(SchubertError::SignConsistencyFailure(u))?;
            covers.push(Cover { lower: l, upper: u, sign, same_orbit: false });
        }
    }
    covers.sort_by_key(|c| (c.upper, c.lower));
    let complex = FaceComplex { matroid: m.clone(), strata, cells, covers };
    check_boundary_squared(&complex)?;
    Ok(complex)
}

/// Covers grouped by their upper cell.
pub fn boundary_lists(complex: &FaceComplex) -> Vec<Vec<(usize, i8)>> {
    let mut by_upper = vec![Vec::new(); complex.cells.len()];
    for c in &complex.covers {
        by_upper[c.upper].push((c.lower, c.sign));
    }
    by_upper
}

/// Verifies `∂∂ = 0` on integral chains with the stored signs.
pub fn check_boundary_squared(complex: &FaceComplex) -> Result<(), SchubertError> {
    let by_upper = boundary_lists(complex);
    for (s, faces) in by_upper.iter().enumerate() {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(t, s1) in faces {
            for &(r, s2) in &by_upper[t] {
                *acc.entry(r).or_insert(0) += i64::from(s1) * i64::from(s2);
            }
        }
        if acc.values().any(|&v| v != 0) {
            return Err(SchubertError::SignConsistencyFailure(s));
        }
    }
    Ok(())
}

/// Cells grouped by stratum, in stratum order.
pub fn stratification(complex: &FaceComplex) -> Vec<(AdmissiblePair, Vec<usize>)> {
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); complex.strata.len()];
    for (k, c) in complex.cells.iter().enumerate() {
        groups[c.stratum].push(k);
    }
    complex.strata.iter().copied().zip(groups).collect()
}

fn cone_key(mut rays: Vec<IntVec>) -> Vec<IntVec> {
    rays.sort();
    rays
}

/// Compares each stratum with the augmented Bergman fan of its minor,
/// embedded in the stratum's coordinates. Returns the mismatching strata.
pub fn stratum_fan_mismatches(complex: &FaceComplex) -> Vec<AdmissiblePair> {
    let m = &complex.matroid;
    let n = m.len();
    let mut bad = Vec::new();
    for (pair, members) in stratification(complex) {
        let minor = m.minor(pair.independent, pair.flat).expect("strata are admissible");
        let coords: Vec<usize> = pair.flat.difference(pair.independent).iter().collect();
        let abf = build_augmented(&minor);
        let mut expected: Vec<Vec<IntVec>> = (0..abf.fan().cones().len())
            .map(|k| {
                cone_key(
                    abf.fan()
                        .cone_vectors(k)
                        .into_iter()
                        .map(|r| {
                            let mut v = vec![0; n];
                            for (c, x) in coords.iter().zip(r) {
                                v[*c] = x;
                            }
                            v
                        })
                        .collect(),
                )
            })
            .collect();
        let orbit = OrbitLabel { pos: pair.independent, neg: m.ground().difference(pair.flat) };
        let mut found: Vec<Vec<IntVec>> = Vec::new();
        let mut orbit_ok = true;
        for &k in &members {
            let c = &complex.cells[k];
            orbit_ok &= c.orbit == orbit;
            found.push(cone_key(c.rays.clone()));
        }
        expected.sort();
        found.sort();
        if !orbit_ok || expected != found {
            bad.push(pair);
        }
    }
    bad
}

/// For each stratum, the set of strata meeting its closure.
pub fn stratum_closures(complex: &FaceComplex) -> Vec<Vec<bool>> {
    let s = complex.strata.len();
    let by_upper = boundary_lists(complex);
    let mut reach: Vec<Vec<bool>> = Vec::with_capacity(complex.cells.len());
    for (k, c) in complex.cells.iter().enumerate() {
        let mut r = vec![false; s];
        r[c.stratum] = true;
        for &(lower, _) in &by_upper[k] {
            for (slot, &x) in r.iter_mut().zip(&reach[lower]) {
                *slot |= x;
            }
        }
        reach.push(r);
    }
    let mut out = vec![vec![false; s]; s];
    for (k, c) in complex.cells.iter().enumerate() {
        for (slot, &x) in out[c.stratum].iter_mut().zip(&reach[k]) {
            *slot |= x;
        }
    }
    out
}

/// Whether stratum `A` meets the closure of stratum `B` exactly when
/// `A ⪯ B` in the admissible-pair order.
pub fn stratum_order_check(complex: &FaceComplex) -> bool {
    let closures = stratum_closures(complex);
    for (b, row) in closures.iter().enumerate() {
        for (a, &inside) in row.iter().enumerate() {
            let le =
                matches!(pair_order(&complex.strata[a], &complex.strata[b]), PairOrdering::Less | PairOrdering::Equal);
            if le != inside {
                return false;
            }
        }
    }
    true
}

/// Levels `Y^k` for `k = 0..=d`: cells whose stratum has rank at least `k`.
pub fn rank_filtration(complex: &FaceComplex) -> Vec<Vec<usize>> {
    let d = complex.matroid.rank();
    (0..=d)
        .map(|k| (0..complex.cells.len()).filter(|&c| complex.strata[complex.cells[c].stratum].rank >= k).collect())
        .collect()
}

/// Structural checks on the filtration and covers: rank-`k` strata are
/// `k`-dimensional, covers raise dimension by one, never lower the stratum
/// rank from the lower to the upper cell, and either keep the orbit or
/// come from a larger one.
pub fn filtration_check(complex: &FaceComplex) -> bool {
    let mut top = vec![None; complex.matroid.rank() + 1];
    for c in &complex.cells {
        let r = complex.strata[c.stratum].rank;
        top[r] = Some(top[r].map_or(c.dim(), |t: usize| t.max(c.dim())));
    }
    let dims_ok = top.iter().enumerate().all(|(k, t)| t.is_none_or(|t| t == k));
    let covers_ok = complex.covers.iter().all(|cv| {
        let (lo, hi) = (&complex.cells[cv.lower], &complex.cells[cv.upper]);
        let rank_ok = complex.strata[lo.stratum].rank <= complex.strata[hi.stratum].rank;
        let orbit_ok =
            if cv.same_orbit { lo.orbit == hi.orbit } else { hi.orbit.is_below(&lo.orbit) && lo.orbit != hi.orbit };
        lo.dim() + 1 == hi.dim() && rank_ok && orbit_ok
    });
    dims_ok && covers_ok
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub strata: (usize, usize, usize),
    pub strata_factor: bool,
    pub ranks_add: bool,
    pub order_is_product: bool,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.strata_factor && self.ranks_add && self.order_is_product
    }
}

/// Strata of `Y_{N ⊕ O}` against pairs of strata of `Y_N` and `Y_O`.
pub fn product_decomposition_check(a: &Matroid, b: &Matroid) -> Result<ProductReport, crate::matroid::MatroidError> {
    let sum = a.direct_sum(b)?;
    let pa = a.admissible_pairs();
    let pb = b.admissible_pairs();
    let ps = sum.admissible_pairs();
    let left = a.ground();
    let right_shift = a.len();
    let split = |p: &AdmissiblePair| {
        let li = p.independent.intersection(left);
        let lf = p.flat.intersection(left);
        let ri = ElementSet(p.independent.0 >> right_shift);
        let rf = ElementSet(p.flat.0 >> right_shift);
        (li, lf, ri, rf)
    };
    let index_a: HashMap<(ElementSet, ElementSet), &AdmissiblePair> =
        pa.iter().map(|p| ((p.independent, p.flat), p)).collect();
    let index_b: HashMap<(ElementSet, ElementSet), &AdmissiblePair> =
        pb.iter().map(|p| ((p.independent, p.flat), p)).collect();
    let mut seen = BTreeSet::new();
    let mut ranks_add = true;
    let mut factors = Vec::new();
    for p in &ps {
        let (li, lf, ri, rf) = split(p);
        match (index_a.get(&(li, lf)), index_b.get(&(ri, rf))) {
            (Some(x), Some(y)) => {
                ranks_add &= x.rank + y.rank == p.rank;
                seen.insert((li, lf, ri, rf));
                factors.push((**x, **y));
            }
            _ => ranks_add = false,
        }
    }
    let strata_factor = ps.len() == pa.len() * pb.len() && seen.len() == ps.len();
    let le =
        |x: &AdmissiblePair, y: &AdmissiblePair| matches!(pair_order(x, y), PairOrdering::Less | PairOrdering::Equal);
    let mut order_is_product = factors.len() == ps.len();
    if order_is_product {
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in ps.iter().enumerate() {
                let prod = le(&factors[i].0, &factors[j].0) && le(&factors[i].1, &factors[j].1);
                order_is_product &= le(p, q) == prod;
            }
        }
    }
    Ok(ProductReport { strata: (pa.len(), pb.len(), ps.len()), strata_factor, ranks_add, order_is_product })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph of the admissible-pair poset, edges along covers from the
/// smaller pair to the larger.
pub fn export_stratification_dot(m: &Matroid) -> String {
    let pairs = m.admissible_pairs();
    let mut out = String::from("digraph stratification {\n  rankdir=BT;\n");
    for (k, p) in pairs.iter().enumerate() {
        let _ = writeln!(out, "  s{k} [label=\"{}\"];", dot_escape(&p.label(m)));
    }
    for (lo, hi) in pair_covers(m, &pairs) {
        let _ = writeln!(out, "  s{lo} -> s{hi};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex82() -> Matroid {
        Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]]).unwrap()
    }

    #[test]
    fn u22_census() {
        let y = build_face_complex(&Matroid::uniform(2, 2).unwrap()).unwrap();
        assert_eq!(y.cells().len(), 27);
        let strata = stratification(&y);
        assert_eq!(strata.len(), 9);
        let mut sizes: Vec<(usize, usize)> = strata.iter().map(|(p, c)| (p.rank, c.len())).collect();
        sizes.sort();
        assert_eq!(sizes, vec![(0, 1), (0, 1), (0, 1), (0, 1), (1, 3), (1, 3), (1, 3), (1, 3), (2, 11)]);
        let corner = strata.iter().find(|(p, _)| p.independent == y.matroid().ground()).unwrap();
        assert_eq!(corner.1.len(), 1);
        assert_eq!(y.cells()[corner.1[0]].dim(), 0);
    }

    #[test]
    fn u11_is_the_projective_line() {
        let y = build_face_complex(&Matroid::uniform(1, 1).unwrap()).unwrap();
        assert_eq!(y.cells().len(), 5);
        assert_eq!(y.dims_histogram(), vec![3, 2]);
        // The ray towards +∞ has boundary [∞] - [0].
        let ray = y.cells().iter().position(|c| c.rays == vec![vec![1]]).unwrap();
        let mut faces: Vec<(bool, i8)> = y
            .covers()
            .iter()
            .filter(|c| c.upper == ray)
            .map(|c| (y.cells()[c.lower].orbit == OrbitLabel::ZERO, c.sign))
            .collect();
        faces.sort();
        assert_eq!(faces, vec![(false, 1), (true, -1)]);
    }

    #[test]
    fn ex82_strata() {
        let m = ex82();
        let y = build_face_complex(&m).unwrap();
        assert_eq!(stratification(&y).len(), 12);
        assert!(stratum_fan_mismatches(&y).is_empty());
        assert!(stratum_order_check(&y));
        assert!(filtration_check(&y));
        // The stratum (1,123) has no second coordinate.
        let one = m.subset(&["1"]).unwrap();
        let (_, cells) =
            stratification(&y).into_iter().find(|(p, _)| p.independent == one && p.flat == m.ground()).unwrap();
        assert!(cells.iter().all(|&c| y.cells()[c].rays.iter().all(|r| r[1] == 0 && r[0] == 0)));
    }

    #[test]
    fn u22_filtration_levels() {
        let y = build_face_complex(&Matroid::uniform(2, 2).unwrap()).unwrap();
        let levels = rank_filtration(&y);
        assert_eq!(levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![27, 23, 11]);
        let single = build_face_complex(&Matroid::uniform(0, 0).unwrap()).unwrap();
        assert_eq!(rank_filtration(&single).len(), 1);
    }

    #[test]
    fn products() {
        let a = Matroid::from_labeled(&["1"], &[&["1"]]).unwrap();
        let b = Matroid::from_labeled(&["2"], &[&["2"]]).unwrap();
        let r = product_decomposition_check(&a, &b).unwrap();
        assert_eq!(r.strata, (3, 3, 9));
        assert!(r.passed());
        let pair = Matroid::from_labeled(&["1", "2"], &[&["1"], &["2"]]).unwrap();
        let coloop = Matroid::from_labeled(&["3"], &[&["3"]]).unwrap();
        let r = product_decomposition_check(&pair, &coloop).unwrap();
        assert_eq!(r.strata, (4, 3, 12));
        assert!(r.passed());
        let empty = Matroid::uniform(0, 0).unwrap();
        assert!(product_decomposition_check(&pair, &empty).unwrap().passed());
    }

    #[test]
    fn dot_output() {
        let dot = export_stratification_dot(&Matroid::uniform(1, 1).unwrap());
        assert_eq!(dot.matches("label=").count(), 3);
        assert_eq!(dot.matches("->").count(), 2);
        assert_eq!(export_stratification_dot(&Matroid::uniform(2, 2).unwrap()).matches("label=").count(), 9);
    }
}
