//! Simplicial integer fans, the orthant fan of `(TP¹)^n`, its torus orbits,
//! and the closure of a cone inside that compactification.
//!
//! A cone inside an orbit `O(J,K)` is kept as a list of primitive integer
//! vectors of `Z^n` that vanish on the coordinates `J ∪ K`.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, rat, Matrix, Rational};
use crate::matroid::ElementSet;

pub type IntVec = Vec<i64>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ray {0:?} is zero or not primitive")]
    NonPrimitiveRay(IntVec),
    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),
    #[error("cone {0:?} is missing a face")]
    NotFaceClosed(Vec<usize>),
    #[error("ray index {0} out of range")]
    RayOutOfRange(usize),
    #[error("orbit ({from}) is not below orbit ({to})")]
    NotAFaceRelation { from: String, to: String },
    #[error("vector {0:?} is not in the support of the reference fan")]
    SupportNotContained(IntVec),
}

pub fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

/// Divides by the gcd of the entries. Zero stays zero.
pub fn primitive(v: &[i64]) -> IntVec {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}

/// Rank of a list of integer vectors.
pub fn vector_rank(vectors: &[IntVec], n: usize) -> usize {
    let rows: Vec<Vec<i64>> = vectors.to_vec();
    linalg::rank(&Matrix::from_i64(&rows, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone { rays }
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }
}

/// A simplicial fan given by a ray table and a face-closed set of cones.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient_dim: usize,
    rays: Vec<IntVec>,
    cones: Vec<Cone>,
    index: HashMap<Vec<usize>, usize>,
}

impl Fan {
    /// Validates primitivity, simpliciality and face closure. Cones are
    /// stored sorted by dimension, then by ray indices.
    pub fn new(ambient_dim: usize, rays: Vec<IntVec>, cones: Vec<Cone>) -> Result<Self, FanError> {
        for r in &rays {
            if r.len() != ambient_dim {
                return Err(FanError::DimensionMismatch { expected: ambient_dim, found: r.len() });
            }
            if !is_primitive(r) {
                return Err(FanError::NonPrimitiveRay(r.clone()));
            }
        }
        let mut cones = cones;
        cones.sort_by(|a, b| (a.dim(), &a.rays).cmp(&(b.dim(), &b.rays)));
        cones.dedup();
        let index: HashMap<Vec<usize>, usize> = cones.iter().enumerate().map(|(k, c)| (c.rays.clone(), k)).collect();
        for c in &cones {
            if let Some(&bad) = c.rays.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::RayOutOfRange(bad));
            }
            let vecs: Vec<IntVec> = c.rays.iter().map(|&r| rays[r].clone()).collect();
            if vector_rank(&vecs, ambient_dim) != c.dim() {
                return Err(FanError::NotSimplicial(c.rays.clone()));
            }
            for skip in 0..c.rays.len() {
                let mut face = c.rays.clone();
                face.remove(skip);
                if !index.contains_key(&face) {
                    return Err(FanError::NotFaceClosed(c.rays.clone()));
                }
            }
        }
        if !cones.is_empty() && !index.contains_key(&Vec::new()) {
            return Err(FanError::NotFaceClosed(Vec::new()));
        }
        Ok(Fan { ambient_dim, rays, cones, index })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        self.index.get(rays).copied()
    }

    pub fn cone_vectors(&self, k: usize) -> Vec<IntVec> {
        self.cones[k].rays.iter().map(|&r| self.rays[r].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(Cone::dim).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cones().iter().all(|&k| self.cones[k].dim() == d)
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        let mut is_face = vec![false; self.cones.len()];
        for c in &self.cones {
            for skip in 0..c.rays.len() {
                let mut face = c.rays.clone();
                face.remove(skip);
                is_face[self.index[&face]] = true;
            }
        }
        (0..self.cones.len()).filter(|&k| !is_face[k]).collect()
    }

    /// Cone-count per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for c in &self.cones {
            f[c.dim()] += 1;
        }
        f
    }

    /// Whether `point` is a nonnegative combination of the rays of cone `k`.
    pub fn cone_contains_point(&self, k: usize, point: &[Rational]) -> bool {
        simplicial_cone_contains(&self.cone_vectors(k), point)
    }

    /// Checks that the intersection of any two maximal cones is the cone on
    /// their common rays, by exact feasibility.
    pub fn intersections_are_faces(&self) -> bool {
        let maxi = self.maximal_cones();
        for (x, &a) in maxi.iter().enumerate() {
            for &b in &maxi[x + 1..] {
                if !intersection_is_common_face(
                    &self.cone_vectors(a),
                    &self.cone_vectors(b),
                    &self.cones[a].rays,
                    &self.cones[b].rays,
                ) {
                    return false;
                }
            }
        }
        true
    }
}

fn intersection_is_common_face(s: &[IntVec], t: &[IntVec], s_idx: &[usize], t_idx: &[usize]) -> bool {
    // Look for a, b >= 0 with S a = T b and positive weight on a ray that the
    // two cones do not share.
    let n = s.first().or(t.first()).map_or(0, Vec::len);
    let k = s.len() + t.len();
    let mut rows: Vec<Vec<Rational>> =
        (0..n).map(|c| s.iter().map(|r| rat(r[c])).chain(t.iter().map(|r| rat(-r[c]))).collect()).collect();
    let mut norm = Vec::with_capacity(k);
    norm.extend(s_idx.iter().map(|r| rat(i64::from(!t_idx.contains(r)))));
    norm.extend(t_idx.iter().map(|r| rat(i64::from(!s_idx.contains(r)))));
    if norm.iter().all(Zero::is_zero) {
        return true;
    }
    rows.push(norm);
    let mut b = vec![Rational::zero(); n];
    b.push(rat(1));
    linalg::nonnegative_solution(k, &rows, &b).is_none()
}

/// Solves `Σ λ_i r_i = point` for linearly independent rays and checks
/// `λ ≥ 0`.
pub fn simplicial_cone_contains(rays: &[IntVec], point: &[Rational]) -> bool {
    let n = point.len();
    let k = rays.len();
    if k == 0 {
        return point.iter().all(Zero::is_zero);
    }
    // Augmented system [R | point] with one equation per coordinate.
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|c| {
            let mut row: Vec<Rational> = rays.iter().map(|r| rat(r[c])).collect();
            row.push(point[c].clone());
            row
        })
        .collect();
    let (pivots, reduced) = linalg::rref(&Matrix::from_dense(&rows, k + 1));
    if pivots.contains(&k) {
        return false;
    }
    let mut lambda = vec![Rational::zero(); k];
    for (row, &p) in reduced.iter().zip(&pivots) {
        lambda[p] = row[k].clone();
    }
    lambda.iter().all(|x| !x.is_negative())
}

/// Support membership: `point` lies in some cone of `fan`.
pub fn cone_contains(fan: &Fan, point: &[Rational]) -> Result<bool, FanError> {
    if point.len() != fan.ambient_dim {
        return Err(FanError::DimensionMismatch { expected: fan.ambient_dim, found: point.len() });
    }
    if point.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    Ok((0..fan.cones.len()).any(|k| fan.cone_contains_point(k, point)))
}

/// Exact test for `relint(eta) ∩ sigma ≠ ∅`, with `eta` simplicial.
pub fn relint_meets(sigma: &[IntVec], eta: &[IntVec]) -> bool {
    if eta.is_empty() {
        return true;
    }
    let n = eta[0].len();
    let (ks, ke) = (sigma.len(), eta.len());
    // Σ λ s - Σ μ' t = Σ t with λ, μ' ≥ 0 (μ = μ' + 1 > 0).
    let rows: Vec<Vec<Rational>> =
        (0..n).map(|c| sigma.iter().map(|r| rat(r[c])).chain(eta.iter().map(|r| rat(-r[c]))).collect()).collect();
    let b: Vec<Rational> = (0..n).map(|c| rat(eta.iter().map(|r| r[c]).sum())).collect();
    linalg::nonnegative_solution(ks + ke, &rows, &b).is_some()
}

/// Torus-orbit label of `(TP¹)^n`: coordinates at `+∞` (`J`) and `-∞` (`K`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct OrbitLabel {
    pub pos: ElementSet,
    pub neg: ElementSet,
}

impl OrbitLabel {
    pub const ZERO: OrbitLabel = OrbitLabel { pos: ElementSet::EMPTY, neg: ElementSet::EMPTY };

    pub fn new(pos: ElementSet, neg: ElementSet) -> Option<Self> {
        pos.intersection(neg).is_empty().then_some(OrbitLabel { pos, neg })
    }

    /// Coordinates sitting at infinity.
    pub fn killed(&self) -> ElementSet {
        self.pos.union(self.neg)
    }

    pub fn is_below(&self, other: &OrbitLabel) -> bool {
        self.pos.is_subset(other.pos) && self.neg.is_subset(other.neg)
    }

    pub fn join(&self, other: &OrbitLabel) -> Option<OrbitLabel> {
        OrbitLabel::new(self.pos.union(other.pos), self.neg.union(other.neg))
    }

    /// Rays `e_j (j ∈ J)` and `-e_k (k ∈ K)` of the orthant cone.
    pub fn cone_rays(&self, n: usize) -> Vec<IntVec> {
        let mut out = Vec::new();
        for j in self.pos.iter() {
            let mut v = vec![0; n];
            v[j] = 1;
            out.push(v);
        }
        for k in self.neg.iter() {
            let mut v = vec![0; n];
            v[k] = -1;
            out.push(v);
        }
        out
    }

    /// A point of the orbit: substitutes `±∞` on the killed coordinates.
    pub fn describe(&self, n: usize) -> String {
        let parts: Vec<&str> = (0..n)
            .map(|i| {
                if self.pos.contains(i) {
                    "+∞"
                } else if self.neg.contains(i) {
                    "-∞"
                } else {
                    "·"
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// A cone living in a torus orbit: generators vanish on killed coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitCone {
    pub orbit: OrbitLabel,
    pub rays: Vec<IntVec>,
}

impl OrbitCone {
    pub fn dim(&self) -> usize {
        self.rays.len()
    }
}

/// Ordering of ray vectors used for canonical cone keys and orientations:
/// rays with a positive entry first (by that coordinate), then negative rays
/// by decreasing support.
pub fn ray_order_key(v: &[i64]) -> (u8, i64, Vec<i64>) {
    if let Some(i) = v.iter().position(|&x| x > 0) {
        (0, i as i64, v.to_vec())
    } else {
        let support = v.iter().filter(|&&x| x != 0).count() as i64;
        (1, -support, v.iter().map(|x| -x).rev().collect())
    }
}

pub fn sort_rays(rays: &mut [IntVec]) {
    rays.sort_by_cached_key(|r| ray_order_key(r));
}

/// The projection `O(from) → O(to)`: kills the extra coordinates, drops
/// zero vectors, re-primitivises and removes duplicates.
pub fn project(cone: &OrbitCone, to: &OrbitLabel) -> Result<OrbitCone, FanError> {
    if !cone.orbit.is_below(to) {
        return Err(FanError::NotAFaceRelation { from: format!("{:?}", cone.orbit), to: format!("{to:?}") });
    }
    let killed = to.killed();
    let mut rays: Vec<IntVec> = Vec::new();
    for r in &cone.rays {
        let v: IntVec = r.iter().enumerate().map(|(i, &x)| if killed.contains(i) { 0 } else { x }).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let p = primitive(&v);
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    sort_rays(&mut rays);
    Ok(OrbitCone { orbit: *to, rays })
}

/// Fan of `(TP¹)^n`'s orthants; ray `2i` is `e_i`, ray `2i+1` is `-e_i`.
pub fn product_of_lines(n: usize) -> Fan {
    let mut rays = Vec::new();
    for i in 0..n {
        let mut p = vec![0; n];
        p[i] = 1;
        rays.push(p.clone());
        p[i] = -1;
        rays.push(p);
    }
    let mut cones = Vec::new();
    for choice in 0..3usize.pow(n as u32) {
        let mut c = choice;
        let mut rs = Vec::new();
        for i in 0..n {
            match c % 3 {
                1 => rs.push(2 * i),
                2 => rs.push(2 * i + 1),
                _ => {}
            }
            c /= 3;
        }
        cones.push(Cone::new(rs));
    }
    Fan::new(n, rays, cones).expect("orthant fan is valid")
}

/// Sign pattern of the smallest orthant containing the rays, if any:
/// `(positive coordinates, negative coordinates)`.
pub fn orthant_of(rays: &[IntVec]) -> Option<(ElementSet, ElementSet)> {
    let mut pos = ElementSet::EMPTY;
    let mut neg = ElementSet::EMPTY;
    for r in rays {
        for (i, &x) in r.iter().enumerate() {
            if x > 0 {
                pos = pos.with(i);
            } else if x < 0 {
                neg = neg.with(i);
            }
        }
    }
    pos.intersection(neg).is_empty().then_some((pos, neg))
}

/// `relint(η_{A,B}) ∩ σ ≠ ∅` for a cone inside one orthant. No cancellation
/// can occur between sign-coherent rays, so the intersection is nonempty iff
/// the rays supported on `A ∪ B` sum to a vector with support exactly `A ∪ B`
/// and the right signs. Falls back to the general solver otherwise.
pub fn relint_meets_orthant(sigma: &[IntVec], zeta: &OrbitLabel) -> bool {
    let n = match sigma.first() {
        Some(r) => r.len(),
        None => return zeta.killed().is_empty(),
    };
    if orthant_of(sigma).is_none() {
        return relint_meets(sigma, &zeta.cone_rays(n));
    }
    let target = zeta.killed();
    let mut sum = vec![0i64; n];
    for r in sigma {
        let supported = r.iter().enumerate().all(|(i, &x)| x == 0 || target.contains(i));
        if supported {
            for (s, x) in sum.iter_mut().zip(r) {
                *s += x;
            }
        }
    }
    (0..n).all(|i| {
        if zeta.pos.contains(i) {
            sum[i] > 0
        } else if zeta.neg.contains(i) {
            sum[i] < 0
        } else {
            sum[i] == 0
        }
    })
}

/// Closure of a cone of some orbit inside `(TP¹)^n`: one cell per orthant
/// face `ζ` whose relative interior meets the cone, namely `π^ζ(σ)`. The
/// first entry is the cone itself.
pub fn closure_cells_of_cone(sigma: &OrbitCone) -> Vec<OrbitCone> {
    let Some((pos, neg)) = orthant_of(&sigma.rays) else {
        return vec![sigma.clone()];
    };
    let mut out = Vec::new();
    for a in pos.subsets() {
        for b in neg.subsets() {
            let zeta = OrbitLabel { pos: a, neg: b };
            if !relint_meets_orthant(&sigma.rays, &zeta) {
                continue;
            }
            let target = sigma.orbit.join(&zeta).expect("disjoint from the current orbit");
            out.push(project(sigma, &target).expect("orbit is above"));
        }
    }
    out
}

/// Whether every cone of `sigma` lies in a single cone of `delta`. Errors if
/// a ray of `sigma` is outside `|delta|`.
pub fn delta_compatible(sigma: &Fan, delta: &Fan) -> Result<bool, FanError> {
    if sigma.ambient_dim != delta.ambient_dim {
        return Err(FanError::DimensionMismatch { expected: delta.ambient_dim, found: sigma.ambient_dim });
    }
    for r in &sigma.rays {
        if !cone_contains(delta, &to_rational(r))? {
            return Err(FanError::SupportNotContained(r.clone()));
        }
    }
    for k in 0..sigma.cones.len() {
        let vecs: Vec<Vec<Rational>> = sigma.cone_vectors(k).iter().map(|r| to_rational(r)).collect();
        let inside = (0..delta.cones.len()).any(|e| vecs.iter().all(|v| delta.cone_contains_point(e, v)));
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}
