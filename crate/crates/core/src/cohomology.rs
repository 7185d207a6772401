//! Tropical cellular (co)homology with multi-tangent coefficients.
//!
//! `F_p(σ)` is the sum of `Λ^p⟨δ⟩` over cofaces `δ ⪰ σ` in the same orbit,
//! kept as a subspace of `Λ^p Q^n`. Passing from a cell to a face at
//! infinity applies `Λ^p` of the coordinate projection. The coboundary from
//! `τ` to `σ` is the transpose of `F_p(σ) → F_p(τ)` times the incidence
//! sign.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bergman::{build_augmented, AugmentedBergmanFan};
use crate::fan::{Fan, IntVec};
use crate::linalg::{self, rat, wedge_all, wedge_power_basis, Matrix, Multivector, Rational, Subspace};
use crate::matroid::{ElementSet, Matroid, MatroidError};
use crate::schubert::{build_face_complex, Cover, FaceComplex, SchubertError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("coboundary does not square to zero in degree {q} (p = {p})")]
    SignConsistencyFailure { p: usize, q: usize },
    #[error("restriction from cell {upper} to cell {lower} leaves the target multi-tangent space")]
    RestrictionOutsideTarget { upper: usize, lower: usize },
    #[error("the top chain is not a cycle at cell {0}")]
    NotBalanced(usize),
    #[error(transparent)]
    Complex(#[from] SchubertError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// A finite cell structure with orbit data: enough to assemble the cellular
/// cochain complexes with `F^p` coefficients.
pub trait CellularSpace {
    fn ambient_dim(&self) -> usize;
    fn num_cells(&self) -> usize;
    /// Canonically ordered primitive generators of cell `k`.
    fn cell_rays(&self, k: usize) -> &[IntVec];
    /// Coordinates at infinity for cell `k`.
    fn cell_killed(&self, k: usize) -> ElementSet;
    fn covers(&self) -> &[Cover];

    fn cell_dim(&self, k: usize) -> usize {
        self.cell_rays(k).len()
    }

    fn dim(&self) -> usize {
        (0..self.num_cells()).map(|k| self.cell_dim(k)).max().unwrap_or(0)
    }
}

impl CellularSpace for FaceComplex {
    fn ambient_dim(&self) -> usize {
        FaceComplex::ambient_dim(self)
    }

    fn num_cells(&self) -> usize {
        self.cells().len()
    }

    fn cell_rays(&self, k: usize) -> &[IntVec] {
        &self.cells()[k].rays
    }

    fn cell_killed(&self, k: usize) -> ElementSet {
        self.cells()[k].killed()
    }

    fn covers(&self) -> &[Cover] {
        FaceComplex::covers(self)
    }
}

/// All cones of a fan as cells of a single orbit, with facet covers
/// oriented by the wedge of rays in ray-table order.
#[derive(Clone, Debug)]
pub struct FanComplex {
    ambient_dim: usize,
    cells: Vec<Vec<IntVec>>,
    covers: Vec<Cover>,
}

impl FanComplex {
    pub fn new(fan: &Fan) -> Self {
        let cells: Vec<Vec<IntVec>> = (0..fan.cones().len()).map(|k| fan.cone_vectors(k)).collect();
        let mut covers = Vec::new();
        for (u, cone) in fan.cones().iter().enumerate() {
            for drop in 0..cone.dim() {
                let mut face = cone.rays().to_vec();
                face.remove(drop);
                let l = fan.cone_index(&face).expect("fans are face closed");
                // (-r) ∧ (rays without r) = -(-1)^drop · ν.
                let sign = if drop % 2 == 0 { -1 } else { 1 };
                covers.push(Cover { lower: l, upper: u, sign, same_orbit: true });
            }
        }
        FanComplex { ambient_dim: fan.ambient_dim(), cells, covers }
    }
}

impl CellularSpace for FanComplex {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn num_cells(&self) -> usize {
        self.cells.len()
    }

    fn cell_rays(&self, k: usize) -> &[IntVec] {
        &self.cells[k]
    }

    fn cell_killed(&self, _k: usize) -> ElementSet {
        ElementSet::EMPTY
    }

    fn covers(&self) -> &[Cover] {
        &self.covers
    }
}

fn rational_rays(rays: &[IntVec]) -> Vec<Vec<Rational>> {
    rays.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

/// `F_p` of one cell.
#[derive(Clone, Debug)]
pub struct MultiTangentSpace {
    pub cell: usize,
    pub p: usize,
    pub space: Subspace,
}

impl MultiTangentSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Maximal same-orbit cofaces of every cell.
fn maximal_cofaces<S: CellularSpace + ?Sized>(space: &S) -> Vec<Vec<usize>> {
    let n = space.num_cells();
    let mut up = vec![Vec::new(); n];
    for c in space.covers() {
        if c.same_orbit {
            up[c.lower].push(c.upper);
        }
    }
    (0..n)
        .map(|k| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([k]);
            seen[k] = true;
            let mut maximal = Vec::new();
            while let Some(c) = queue.pop_front() {
                if up[c].is_empty() {
                    maximal.push(c);
                }
                for &u in &up[c] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            maximal.sort_unstable();
            maximal
        })
        .collect()
}

fn tangent_space<S: CellularSpace + ?Sized>(space: &S, cell: usize, p: usize, maximal: &[usize]) -> MultiTangentSpace {
    let n = space.ambient_dim();
    let mut gens: Vec<Vec<Rational>> = Vec::new();
    for &d in maximal {
        let rays = rational_rays(space.cell_rays(d));
        for w in wedge_power_basis(n, &rays, p).expect("rays live in the ambient space") {
            gens.push(w.into_coeffs());
        }
    }
    let ambient = Multivector::zero(n, p).coeffs().len();
    let space = Subspace::span(ambient, &gens).expect("uniform multivector length");
    MultiTangentSpace { cell, p, space }
}

/// `F_p(σ)` for a single cell.
pub fn multi_tangent<S: CellularSpace + ?Sized>(space: &S, cell: usize, p: usize) -> MultiTangentSpace {
    let maximal = maximal_cofaces(space);
    tangent_space(space, cell, p, &maximal[cell])
}

/// `F_p` of every cell.
pub fn multi_tangent_spaces<S: CellularSpace + ?Sized>(space: &S, p: usize) -> Vec<MultiTangentSpace> {
    let maximal = maximal_cofaces(space);
    (0..space.num_cells()).map(|k| tangent_space(space, k, p, &maximal[k])).collect()
}

/// Cellular cochains `C^{p,q}` with coboundaries `d^q: C^q → C^{q+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub p: usize,
    /// `dims[q] = dim C^{p,q}`.
    pub dims: Vec<usize>,
    /// Cells contributing to each degree, with their offset in the degree.
    pub blocks: Vec<Vec<(usize, usize)>>,
    /// `differentials[q]` has `dims[q+1]` rows and `dims[q]` columns.
    pub differentials: Vec<Matrix>,
}

impl CochainComplex {
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(linalg::rank).collect();
        (0..self.dims.len())
            .map(|q| {
                let out = ranks.get(q).copied().unwrap_or(0);
                let inc = if q == 0 { 0 } else { ranks[q - 1] };
                self.dims[q] - out - inc
            })
            .collect()
    }

    /// `d^{q+1} ∘ d^q = 0` for all `q`.
    pub fn check_square_zero(&self) -> Result<(), CohomologyError> {
        for q in 0..self.differentials.len().saturating_sub(1) {
            let composite = self.differentials[q + 1].mul(&self.differentials[q]).expect("shapes chain");
            if !composite.is_zero() {
                return Err(CohomologyError::SignConsistencyFailure { p: self.p, q });
            }
        }
        Ok(())
    }
}

/// Assembles the cochain complex on the cells selected by `include`, using
/// only covers between selected cells. `spaces` are the `F_p` of all cells.
pub fn cochain_complex_on<S: CellularSpace + ?Sized>(
    space: &S,
    spaces: &[MultiTangentSpace],
    include: &dyn Fn(usize) -> bool,
) -> Result<CochainComplex, CohomologyError> {
    let p = spaces.first().map_or(0, |s| s.p);
    let top = space.dim();
    let mut dims = vec![0; top + 1];
    let mut blocks = vec![Vec::new(); top + 1];
    let mut offset = vec![usize::MAX; space.num_cells()];
    for k in 0..space.num_cells() {
        if !include(k) || spaces[k].dim() == 0 {
            continue;
        }
        let q = space.cell_dim(k);
        offset[k] = dims[q];
        blocks[q].push((k, dims[q]));
        dims[q] += spaces[k].dim();
    }
    let n = space.ambient_dim();
    let mut triplets: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); top];
    for cv in space.covers() {
        let (lo, hi) = (cv.lower, cv.upper);
        if offset[lo] == usize::MAX || offset[hi] == usize::MAX {
            continue;
        }
        let q = space.cell_dim(lo);
        let sign = rat(i64::from(cv.sign));
        let killed = space.cell_killed(lo).bits();
        for (i, b) in spaces[hi].space.basis().iter().enumerate() {
            let image = Multivector::from_coeffs(n, p, b.clone()).expect("basis length").kill_coordinates(killed);
            let coords = spaces[lo]
                .space
                .coordinates(image.coeffs())
                .ok_or(CohomologyError::RestrictionOutsideTarget { upper: hi, lower: lo })?;
            for (j, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    triplets[q].push((offset[hi] + i, offset[lo] + j, &sign * c));
                }
            }
        }
    }
    let differentials =
        triplets.into_iter().enumerate().map(|(q, t)| Matrix::from_triplets(dims[q + 1], dims[q], t)).collect();
    let complex = CochainComplex { p, dims, blocks, differentials };
    complex.check_square_zero()?;
    Ok(complex)
}

/// The full cochain complex `C^{p,•}` on all cells.
pub fn cochain_complex<S: CellularSpace + ?Sized>(space: &S, p: usize) -> Result<CochainComplex, CohomologyError> {
    let spaces = multi_tangent_spaces(space, p);
    cochain_complex_on(space, &spaces, &|_| true)
}

/// `dims[p][q] = dim H^{p,q}` for `0 ≤ p, q ≤ dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub dims: Vec<Vec<usize>>,
}

impl CohomologyTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.dims.get(p).and_then(|row| row.get(q)).copied().unwrap_or(0)
    }

    pub fn diagonal(&self) -> Vec<usize> {
        (0..self.dims.len()).map(|p| self.get(p, p)).collect()
    }

    pub fn off_diagonal_vanishes(&self) -> bool {
        self.dims.iter().enumerate().all(|(p, row)| row.iter().enumerate().all(|(q, &h)| p == q || h == 0))
    }
}

/// Cohomology of every `C^{p,•}` for `p = 0..=dim`.
pub fn cohomology_table<S: CellularSpace + ?Sized>(space: &S) -> Result<CohomologyTable, CohomologyError> {
    let d = space.dim();
    let mut dims = Vec::with_capacity(d + 1);
    for p in 0..=d {
        let mut h = cochain_complex(space, p)?.cohomology_dims();
        h.resize(d + 1, 0);
        dims.push(h);
    }
    Ok(CohomologyTable { dims })
}

/// `H^{p,q}(Y_M)` for all `p, q`.
pub fn cohomology_dims(m: &Matroid) -> Result<CohomologyTable, CohomologyError> {
    cohomology_table(&build_face_complex(m)?)
}

/// Compactly supported cohomology of a fan: all cones, `q ↦ dim H_c^{p,q}`.
pub fn fan_hc_dims(fan: &Fan, p: usize) -> Result<Vec<usize>, CohomologyError> {
    let space = FanComplex::new(fan);
    let mut h = cochain_complex(&space, p)?.cohomology_dims();
    h.resize(fan.dim() + 1, 0);
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub rank: usize,
    /// `hc[p][q] = dim H_c^{p,q}` of the fan.
    pub hc: Vec<Vec<usize>>,
    pub f_vector: Vec<usize>,
    pub passed: bool,
}

/// `H_c^{p,q}(Σ⁺_M) = 0` for `q ≠ d`, and `dim H_c^{p,d} = f^{d-p}_M`.
pub fn fan_pd_check(abf: &AugmentedBergmanFan) -> Result<PdReport, CohomologyError> {
    let m = abf.matroid();
    let d = m.rank();
    let f = m.f_vector();
    let mut hc = Vec::with_capacity(d + 1);
    let mut passed = abf.fan().dim() == d;
    for p in 0..=d {
        let h = fan_hc_dims(abf.fan(), p)?;
        passed &= h.iter().enumerate().all(|(q, &x)| if q == d { x == f[d - p] } else { x == 0 });
        hc.push(h);
    }
    Ok(PdReport { rank: d, hc, f_vector: f, passed })
}

#[derive(Clone, Debug)]
pub struct FundamentalClass {
    /// Top-dimensional cells with weight.
    pub weights: Vec<(usize, Rational)>,
    /// `ν_η` for each weighted cell, same order.
    pub generators: Vec<Multivector>,
}

/// Weight one on every top cell, with the canonical orientations.
pub fn fundamental_class<S: CellularSpace + ?Sized>(space: &S) -> FundamentalClass {
    let d = space.dim();
    let n = space.ambient_dim();
    let mut weights = Vec::new();
    let mut generators = Vec::new();
    for k in 0..space.num_cells() {
        if space.cell_dim(k) == d {
            weights.push((k, rat(1)));
            generators.push(wedge_all(n, &rational_rays(space.cell_rays(k))).expect("ambient rays"));
        }
    }
    FundamentalClass { weights, generators }
}

/// Checks that `Σ ω(η) ν_η` is a cycle: at each codimension-one cell the
/// signed, projected generators cancel.
pub fn balancing_check<S: CellularSpace + ?Sized>(space: &S, class: &FundamentalClass) -> Result<(), CohomologyError> {
    let n = space.ambient_dim();
    let d = space.dim();
    let lookup: HashMap<usize, usize> = class.weights.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
    let mut acc: HashMap<usize, Multivector> = HashMap::new();
    for cv in space.covers() {
        let Some(&i) = lookup.get(&cv.upper) else {
            continue;
        };
        let weight = &class.weights[i].1 * rat(i64::from(cv.sign));
        let term = class.generators[i].kill_coordinates(space.cell_killed(cv.lower).bits()).scale(&weight);
        let slot = acc.entry(cv.lower).or_insert_with(|| Multivector::zero(n, d));
        *slot = slot.add(&term).expect("same degree");
    }
    let mut bad: Vec<usize> = acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| k).collect();
    bad.sort_unstable();
    match bad.first() {
        Some(&k) => Err(CohomologyError::NotBalanced(k)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethReport {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub sum: Vec<usize>,
    pub passed: bool,
}

fn poly_mul(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Diagonal Hilbert series of `Y_{N ⊕ O}` against the product of factors.
pub fn kunneth_check(a: &Matroid, b: &Matroid) -> Result<KunnethReport, CohomologyError> {
    let sum = a.direct_sum(b)?;
    let left = cohomology_dims(a)?.diagonal();
    let right = cohomology_dims(b)?.diagonal();
    let total = cohomology_dims(&sum)?.diagonal();
    let passed = poly_mul(&left, &right) == total;
    Ok(KunnethReport { left, right, sum: total, passed })
}

/// Convenience: the fan complex of `Σ⁺_M`.
pub fn augmented_fan_complex(m: &Matroid) -> FanComplex {
    FanComplex::new(build_augmented(m).fan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubert::build_face_complex;

    fn ex82() -> Matroid {
        Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]]).unwrap()
    }

    #[test]
    fn multi_tangent_examples() {
        let y = build_face_complex(&Matroid::uniform(2, 2).unwrap()).unwrap();
        let origin = y.cells().iter().position(|c| c.dim() == 0 && c.orbit.killed().is_empty()).unwrap();
        assert_eq!(multi_tangent(&y, origin, 1).dim(), 2);
        let top = y.cells().iter().position(|c| c.dim() == 2).unwrap();
        assert_eq!(multi_tangent(&y, top, 2).dim(), 1);
        let m = ex82();
        let y = build_face_complex(&m).unwrap();
        let corner =
            y.cells().iter().position(|c| c.dim() == 0 && c.orbit.pos == m.subset(&["1", "3"]).unwrap()).unwrap();
        assert_eq!(multi_tangent(&y, corner, 0).dim(), 1);
    }

    #[test]
    fn cohomology_small_cases() {
        let t = cohomology_dims(&Matroid::uniform(2, 2).unwrap()).unwrap();
        assert_eq!(t.diagonal(), vec![1, 2, 1]);
        assert!(t.off_diagonal_vanishes());
        let t = cohomology_dims(&Matroid::uniform(1, 1).unwrap()).unwrap();
        assert_eq!(t.dims, vec![vec![1, 0], vec![0, 1]]);
        let t = cohomology_dims(&ex82()).unwrap();
        assert_eq!(t.diagonal(), vec![1, 2, 1]);
        assert!(t.off_diagonal_vanishes());
    }

    #[test]
    fn fan_compact_support() {
        let u11 = build_augmented(&Matroid::uniform(1, 1).unwrap());
        assert_eq!(fan_hc_dims(u11.fan(), 0).unwrap(), vec![0, 1]);
        let origin = build_augmented(&Matroid::uniform(0, 0).unwrap());
        assert_eq!(fan_hc_dims(origin.fan(), 0).unwrap(), vec![1]);
        let u22 = build_augmented(&Matroid::uniform(2, 2).unwrap());
        let hc: Vec<Vec<usize>> = (0..=2).map(|p| fan_hc_dims(u22.fan(), p).unwrap()).collect();
        assert_eq!(hc, vec![vec![0, 0, 1], vec![0, 0, 2], vec![0, 0, 1]]);
        let r = fan_pd_check(&build_augmented(&ex82())).unwrap();
        assert!(r.passed);
        assert_eq!(r.hc.iter().map(|h| h[2]).collect::<Vec<_>>(), vec![2, 3, 1]);
        assert!(fan_pd_check(&origin).unwrap().passed);
    }

    #[test]
    fn balancing() {
        for m in [Matroid::uniform(2, 2).unwrap(), Matroid::uniform(1, 1).unwrap(), ex82()] {
            let y = build_face_complex(&m).unwrap();
            let class = fundamental_class(&y);
            assert!(class.weights.iter().all(|(_, w)| !w.is_zero()));
            balancing_check(&y, &class).unwrap();
            let fan = augmented_fan_complex(&m);
            balancing_check(&fan, &fundamental_class(&fan)).unwrap();
        }
    }

    #[test]
    fn unbalanced_weights_are_rejected() {
        let fan = augmented_fan_complex(&Matroid::uniform(1, 1).unwrap());
        let mut class = fundamental_class(&fan);
        class.weights[0].1 = rat(2);
        assert!(matches!(balancing_check(&fan, &class), Err(CohomologyError::NotBalanced(_))));
    }
}
