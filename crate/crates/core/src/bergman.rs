//! Augmented Bergman fans `Σ⁺_M ⊂ R^E`, Bergman fans `Σ_M`, and the
//! identification of `|Σ_{M̃}|` with `|Σ⁺_M|` through the map `γ`.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::fan::{cone_contains, to_rational, Cone, Fan, FanError, IntVec};
use crate::linalg::Rational;
use crate::matroid::{ElementSet, FlatLattice, Matroid, MatroidError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BergmanError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// An independent set together with a chain of proper flats containing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CompatiblePair {
    pub independent: ElementSet,
    /// Strictly increasing flats, each `≠ E` and `⊇ I`.
    pub flag: Vec<ElementSet>,
}

impl CompatiblePair {
    pub fn dim(&self) -> usize {
        self.independent.len() + self.flag.len()
    }
}

fn proper_flats(lattice: &FlatLattice, ground: ElementSet) -> Vec<ElementSet> {
    lattice.flats().iter().copied().filter(|f| *f != ground).collect()
}

fn chains_above(
    flats: &[ElementSet],
    lo: ElementSet,
    start: usize,
    prefix: &mut Vec<ElementSet>,
    out: &mut Vec<Vec<ElementSet>>,
) {
    out.push(prefix.clone());
    for k in start..flats.len() {
        let f = flats[k];
        let ok = match prefix.last() {
            Some(last) => last.is_subset(f) && *last != f,
            None => lo.is_subset(f),
        };
        if ok {
            prefix.push(f);
            chains_above(flats, lo, k + 1, prefix, out);
            prefix.pop();
        }
    }
}

/// All compatible pairs, by independent set and then by flag.
pub fn compatible_pairs(m: &Matroid) -> Vec<CompatiblePair> {
    let lattice = m.flat_lattice();
    let flats = proper_flats(&lattice, m.ground());
    let mut out = Vec::new();
    for i in m.independent_sets() {
        let mut chains = Vec::new();
        chains_above(&flats, i, 0, &mut Vec::new(), &mut chains);
        out.extend(chains.into_iter().map(|flag| CompatiblePair { independent: i, flag }));
    }
    out
}

#[derive(Clone, Debug)]
pub struct AugmentedBergmanFan {
    matroid: Matroid,
    fan: Fan,
    labels: HashMap<Vec<usize>, CompatiblePair>,
    positive_rays: HashMap<usize, usize>,
    flat_rays: HashMap<ElementSet, usize>,
}

impl AugmentedBergmanFan {
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Compatible pair labelling cone `k` of [`Self::fan`].
    pub fn label(&self, k: usize) -> &CompatiblePair {
        &self.labels[self.fan.cones()[k].rays()]
    }

    /// Ray index of `e_i`, absent for loops.
    pub fn element_ray(&self, i: usize) -> Option<usize> {
        self.positive_rays.get(&i).copied()
    }

    /// Ray index of `-e_{E∖F}` for a proper flat `F`.
    pub fn flat_ray(&self, f: ElementSet) -> Option<usize> {
        self.flat_rays.get(&f).copied()
    }
}

/// `Σ⁺_M`: cones `σ_{I,𝓕} = cone(e_i : i ∈ I) + cone(-e_{E∖F} : F ∈ 𝓕)`.
///
/// The ray table lists `e_i` for non-loops in ground order, then `-e_{E∖F}`
/// for proper flats by rank and bitmask, so sorted ray indices of a cone are
/// in label order (elements, then flats ascending). Loop coordinates never
/// appear in a ray.
pub fn build_augmented(m: &Matroid) -> AugmentedBergmanFan {
    let n = m.len();
    let ground = m.ground();
    let lattice = m.flat_lattice();
    let mut rays: Vec<IntVec> = Vec::new();
    let mut positive_rays = HashMap::new();
    for i in ground.difference(m.loops()).iter() {
        let mut v = vec![0; n];
        v[i] = 1;
        positive_rays.insert(i, rays.len());
        rays.push(v);
    }
    let mut flat_rays = HashMap::new();
    for f in proper_flats(&lattice, ground) {
        let v: IntVec = (0..n).map(|e| if f.contains(e) { 0 } else { -1 }).collect();
        flat_rays.insert(f, rays.len());
        rays.push(v);
    }
    let mut cones = Vec::new();
    let mut labels = HashMap::new();
    for pair in compatible_pairs(m) {
        let mut idx: Vec<usize> = pair.independent.iter().map(|i| positive_rays[&i]).collect();
        idx.extend(pair.flag.iter().map(|f| flat_rays[f]));
        let cone = Cone::new(idx);
        labels.insert(cone.rays().to_vec(), pair);
        cones.push(cone);
    }
    let fan = Fan::new(n, rays, cones).expect("augmented Bergman fan is a simplicial fan");
    AugmentedBergmanFan { matroid: m.clone(), fan, labels, positive_rays, flat_rays }
}

/// The Bergman fan `Σ_M` in `R^E / ⟨e_E⟩`, realised on the slice where the
/// last coordinate vanishes. Rays are the images of `e_F` for proper
/// nonempty flats.
pub fn build_bergman(m: &Matroid) -> Result<Fan, MatroidError> {
    if !m.loops().is_empty() {
        return Err(MatroidError::HasLoops(m.format_set(m.loops())));
    }
    let n = m.len();
    let ground = m.ground();
    let lattice = m.flat_lattice();
    let flats: Vec<ElementSet> = lattice.flats().iter().copied().filter(|f| *f != ground && !f.is_empty()).collect();
    let rays: Vec<IntVec> =
        flats.iter().map(|f| slice(&(0..n).map(|e| i64::from(f.contains(e))).collect::<Vec<_>>())).collect();
    let mut chains = Vec::new();
    chains_above(&flats, ElementSet::EMPTY, 0, &mut Vec::new(), &mut chains);
    let index: HashMap<ElementSet, usize> = flats.iter().enumerate().map(|(k, f)| (*f, k)).collect();
    let cones = chains.into_iter().map(|c| Cone::new(c.iter().map(|f| index[f]).collect())).collect();
    Ok(Fan::new(n, rays, cones).expect("Bergman fan is a simplicial fan"))
}

/// Moves a representative onto the slice `x_last = 0`.
pub fn slice(v: &[i64]) -> IntVec {
    match v.last() {
        Some(&c) => v.iter().map(|x| x - c).collect(),
        None => Vec::new(),
    }
}

fn slice_rational(v: &[Rational]) -> Vec<Rational> {
    match v.last() {
        Some(c) => {
            let c = c.clone();
            v.iter().map(|x| x - &c).collect()
        }
        None => Vec::new(),
    }
}

/// `γ[a₀, a₁, …, a_n] = (a₁ - a₀, …, a_n - a₀)`.
pub fn gamma(rep: &[Rational]) -> Vec<Rational> {
    match rep.split_first() {
        Some((a0, rest)) => rest.iter().map(|a| a - a0).collect(),
        None => Vec::new(),
    }
}

/// A right inverse of [`gamma`]: `x ↦ [0, x]`.
pub fn gamma_inverse(x: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::zero()).chain(x.iter().cloned()).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SupportReport {
    pub forward_samples: usize,
    pub backward_samples: usize,
    pub failures: Vec<String>,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Deterministic sample points of a fan: each ray, each cone barycentre,
/// and for each cone the points weighting one ray twice.
pub fn sample_points(fan: &Fan) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for r in fan.rays() {
        out.push(to_rational(r));
    }
    for k in 0..fan.cones().len() {
        let vecs = fan.cone_vectors(k);
        if vecs.len() < 2 {
            continue;
        }
        let bary: IntVec = (0..fan.ambient_dim()).map(|c| vecs.iter().map(|v| v[c]).sum()).collect();
        out.push(to_rational(&bary));
        for v in &vecs {
            let p: IntVec = bary.iter().zip(v).map(|(a, b)| a + b).collect();
            out.push(to_rational(&p));
        }
    }
    out
}

/// Samples `γ(|Σ_{M̃}|) ⊆ |Σ⁺_M|` and `γ⁻¹(|Σ⁺_M|) ⊆ |Σ_{M̃}|`.
pub fn support_identification_check(m: &Matroid) -> Result<SupportReport, BergmanError> {
    let coext = m.free_coextension()?;
    let bergman = build_bergman(&coext)?;
    let augmented = build_augmented(m);
    let mut report = SupportReport::default();
    let fmt = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    for p in sample_points(&bergman) {
        report.forward_samples += 1;
        let image = gamma(&p);
        if !cone_contains(augmented.fan(), &image)? {
            report.failures.push(format!("gamma([{}]) = ({}) is outside the augmented fan", fmt(&p), fmt(&image)));
        }
    }
    for p in sample_points(augmented.fan()) {
        report.backward_samples += 1;
        let pre = slice_rational(&gamma_inverse(&p));
        if !cone_contains(&bergman, &pre)? {
            report.failures.push(format!("({}) has no preimage in the coextension's Bergman fan", fmt(&p)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn ex82() -> Matroid {
        Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]]).unwrap()
    }

    #[test]
    fn compatible_pair_counts() {
        assert_eq!(compatible_pairs(&Matroid::uniform(2, 2).unwrap()).len(), 11);
        assert_eq!(compatible_pairs(&Matroid::uniform(0, 0).unwrap()).len(), 1);
    }

    #[test]
    fn u22_rays() {
        let abf = build_augmented(&Matroid::uniform(2, 2).unwrap());
        let mut rays = abf.fan().rays().to_vec();
        rays.sort();
        let mut expected = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![-1, -1]];
        expected.sort();
        assert_eq!(rays, expected);
        assert_eq!(abf.fan().cones().len(), 11);
    }

    #[test]
    fn u11_and_boolean() {
        let abf = build_augmented(&Matroid::uniform(1, 1).unwrap());
        assert_eq!(abf.fan().rays(), &[vec![1], vec![-1]]);
        let boolean = build_augmented(&Matroid::uniform(2, 2).unwrap());
        assert_eq!(boolean.fan().f_vector(), vec![1, 5, 5]);
    }

    #[test]
    fn ex82_membership() {
        let abf = build_augmented(&ex82());
        assert!(cone_contains(abf.fan(), &[rat(1), rat(0), rat(1)]).unwrap());
        assert!(!cone_contains(abf.fan(), &[rat(1), rat(1), rat(0)]).unwrap());
        assert!(abf.fan().is_pure());
        assert_eq!(abf.fan().dim(), 2);
    }

    #[test]
    fn bergman_fans() {
        let u33 = build_bergman(&Matroid::uniform(3, 3).unwrap()).unwrap();
        assert_eq!(u33.f_vector(), vec![1, 6, 6]);
        let u13 = build_bergman(&Matroid::uniform(1, 3).unwrap()).unwrap();
        assert_eq!(u13.f_vector(), vec![1]);
        let u23 = build_bergman(&Matroid::uniform(2, 3).unwrap()).unwrap();
        assert_eq!(u23.f_vector(), vec![1, 3]);
        assert!(matches!(build_bergman(&Matroid::uniform(0, 1).unwrap()), Err(MatroidError::HasLoops(_))));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&[rat(0), rat(1), rat(0)]), vec![rat(1), rat(0)]);
        assert_eq!(gamma(&[rat(4), rat(4), rat(4)]), vec![rat(0), rat(0)]);
        assert_eq!(gamma(&[rat(1), rat(0), rat(0)]), vec![rat(-1), rat(-1)]);
    }

    #[test]
    fn support_identification() {
        for m in [Matroid::uniform(2, 2).unwrap(), Matroid::uniform(1, 1).unwrap(), ex82()] {
            let report = support_identification_check(&m).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
            assert!(report.forward_samples > 0);
        }
    }
}
