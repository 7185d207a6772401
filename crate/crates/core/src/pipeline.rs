//! Runs every check on one matroid and collects a deterministic report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{mobius_algebra, pullback_chain_check, theorem2_verdict_with};
use crate::bergman::{build_augmented, support_identification_check};
use crate::cohomology::{
    balancing_check, cochain_complex, cohomology_table, fan_pd_check, fundamental_class, kunneth_check,
    CohomologyTable, FanComplex,
};
use crate::matroid::Matroid;
use crate::schubert::{
    build_face_complex, check_boundary_squared, filtration_check, product_decomposition_check, stratum_fan_mismatches,
    stratum_order_check, FaceComplex,
};
use crate::spectral::{acyclicity_check, cellular_e1, e1_page, euler_check};

/// Above this many elements the cell-complex checks need `force_large`.
pub const SIZE_LIMIT: usize = 6;
/// The Boolean Chow ring in the pullback chain grows fastest; it gets a
/// tighter limit.
pub const PULLBACK_CHAIN_LIMIT: usize = 5;

/// The acceptance checks, in criterion order.
pub const CHECK_NAMES: [&str; 11] = [
    "offdiagonal_vanishing",
    "diagonal_whitney",
    "whitney_identity",
    "spectral_consistency",
    "koszul_acyclicity",
    "chain_soundness",
    "coextension_identity",
    "fan_poincare_duality",
    "theorem2",
    "stratification",
    "product_behaviour",
];

/// Further checks reported alongside the acceptance ones.
pub const EXTRA_CHECKS: [&str; 3] = ["support_identification", "pullback_chain", "mobius_algebra"];

#[derive(Debug, Error)]
#[error("{context}: {message}")]
pub struct PipelineError {
    pub context: String,
    pub message: String,
}

fn ctx<T, E: std::fmt::Display>(context: &str, r: Result<T, E>) -> Result<T, PipelineError> {
    r.map_err(|e| PipelineError { context: context.to_string(), message: e.to_string() })
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Highest `p` examined; `None` means the rank.
    pub max_p: Option<usize>,
    pub force_large: bool,
    /// Records wall-clock timings; off by default so reports are byte-stable.
    pub timing: bool,
    /// Restricts the run to these checks; `None` runs everything.
    pub checks: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EPageSummary {
    pub p: usize,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub matroid: String,
    pub ground_set: Vec<String>,
    pub rank: usize,
    pub whitney_numbers: Vec<usize>,
    pub f_vector: Vec<usize>,
    pub strata: Option<usize>,
    pub cells: Option<usize>,
    pub cohomology: Option<CohomologyTable>,
    pub e_pages: Vec<EPageSummary>,
    pub checks: Vec<CheckResult>,
    /// Milliseconds per stage, present only when requested.
    pub timing: Option<BTreeMap<String, u128>>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn verdict(ok: bool, details: String) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, details)
}

struct Context<'a> {
    m: &'a Matroid,
    ps: Vec<usize>,
    complex: Option<FaceComplex>,
    table: Option<CohomologyTable>,
}

impl Context<'_> {
    fn complex(&self) -> &FaceComplex {
        self.complex.as_ref().expect("face complex built for large checks")
    }

    fn table(&self) -> &CohomologyTable {
        self.table.as_ref().expect("cohomology computed for large checks")
    }
}

fn needs_complex(name: &str) -> bool {
    !matches!(name, "whitney_identity" | "coextension_identity" | "mobius_algebra")
}

fn whitney_identity(c: &Context) -> (Status, String) {
    let w = c.m.whitney_numbers();
    let n: Vec<i64> = (0..=c.m.rank()).map(|p| c.m.big_n(p)).collect();
    let ok = n.iter().zip(&w).all(|(&a, &b)| a == b as i64);
    verdict(ok, format!("N = {n:?}, W = {w:?}"))
}

fn coextension_identity(c: &Context) -> (Status, String) {
    let loops = c.m.loops();
    let loopless = c.m.restrict(c.m.ground().difference(loops));
    let ok = loopless.coext_f_identity_check() && loopless.f_vector() == c.m.f_vector();
    let note = if loops.is_empty() { String::new() } else { format!(" (after deleting {} loops)", loops.len()) };
    verdict(ok, format!("|reduced chi of free coextension| = reversed f-vector {:?}{note}", c.m.f_vector()))
}

fn mobius_check(c: &Context) -> (Status, String) {
    let b = mobius_algebra(c.m);
    let ok = b.dims() == c.m.whitney_numbers() && b.unit_check() && b.is_commutative() && b.associativity_check();
    verdict(ok, format!("dims {:?}, unital, commutative, associative", b.dims()))
}

fn offdiagonal(c: &Context) -> (Status, String) {
    let t = c.table();
    let bad: Vec<(usize, usize)> = c
        .ps
        .iter()
        .flat_map(|&p| t.dims[p].iter().enumerate().filter(move |(q, &h)| *q != p && h != 0).map(move |(q, _)| (p, q)))
        .collect();
    verdict(
        bad.is_empty(),
        if bad.is_empty() { "all off-diagonal groups vanish".into() } else { format!("nonzero at {bad:?}") },
    )
}

fn diagonal(c: &Context) -> (Status, String) {
    let t = c.table();
    let w = c.m.whitney_numbers();
    let diag: Vec<usize> = c.ps.iter().map(|&p| t.get(p, p)).collect();
    let expected: Vec<usize> = c.ps.iter().map(|&p| w[p]).collect();
    verdict(diag == expected, format!("diagonal {diag:?}, W {expected:?}"))
}

fn spectral(c: &Context) -> Result<(Status, String), PipelineError> {
    let t = c.table();
    let mut problems = Vec::new();
    for &p in &c.ps {
        let page = ctx("E1 page", e1_page(c.m, p))?;
        let e2 = page.homology_dims();
        if e2 != t.dims[p] {
            problems.push(format!("p={p}: E2 {e2:?} vs H {:?}", t.dims[p]));
        }
        if !ctx("Euler characteristic", euler_check(c.m, p))? {
            problems.push(format!("p={p}: Euler characteristic"));
        }
        let cell = ctx("cellular E1", cellular_e1(c.complex(), p))?;
        let dims = page.dims();
        let agree = cell
            .iter()
            .enumerate()
            .all(|(a, row)| row.iter().enumerate().all(|(q, &h)| h == if q == a { dims[a] } else { 0 }));
        if !agree {
            problems.push(format!("p={p}: cellular E1 {cell:?} vs {dims:?}"));
        }
    }
    Ok(verdict(
        problems.is_empty(),
        if problems.is_empty() { "E2 = H, Euler = W, cellular E1 agrees".into() } else { problems.join("; ") },
    ))
}

fn koszul(c: &Context) -> Result<(Status, String), PipelineError> {
    let mut ok = true;
    let mut blocks = 0;
    for &p in &c.ps {
        let r = ctx("Koszul decomposition", acyclicity_check(c.m, p))?;
        ok &= r.passed;
        blocks += r.blocks;
    }
    Ok(verdict(ok, format!("{blocks} blocks; J nonempty exact, J empty total W_p")))
}

fn chain(c: &Context) -> Result<(Status, String), PipelineError> {
    let y = c.complex();
    let boundary = check_boundary_squared(y).is_ok();
    let mut cochains = true;
    let mut d1 = true;
    for &p in &c.ps {
        cochains &= cochain_complex(y, p).and_then(|k| k.check_square_zero()).is_ok();
        d1 &= e1_page(c.m, p).is_ok();
    }
    let balanced_y = balancing_check(y, &fundamental_class(y)).is_ok();
    let fan = FanComplex::new(build_augmented(c.m).fan());
    let balanced_fan = balancing_check(&fan, &fundamental_class(&fan)).is_ok();
    Ok(verdict(
        boundary && cochains && d1 && balanced_y && balanced_fan,
        format!(
            "boundary^2=0 {boundary}, d^2=0 {cochains}, d1^2=0 {d1}, balanced Y {balanced_y}, balanced fan {balanced_fan}"
        ),
    ))
}

fn poincare(c: &Context) -> Result<(Status, String), PipelineError> {
    let mut failures = Vec::new();
    let pairs = c.m.admissible_pairs();
    for pair in &pairs {
        let minor = ctx("stratum minor", c.m.minor(pair.independent, pair.flat))?;
        let r = ctx("fan Poincare duality", fan_pd_check(&build_augmented(&minor)))?;
        if !r.passed {
            failures.push(pair.label(c.m));
        }
    }
    Ok(verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} stratum fans", pairs.len())
        } else {
            format!("fails for {}", failures.join(", "))
        },
    ))
}

fn theorem2(c: &Context) -> Result<(Status, String), PipelineError> {
    let r = ctx("algebra isomorphism", theorem2_verdict_with(c.m, c.table().diagonal()))?;
    Ok(verdict(
        r.passed,
        format!(
            "subalgebra Hilbert {:?}, W {:?}, structure {}",
            r.subalgebra.hilbert,
            r.subalgebra.whitney,
            r.subalgebra.structure_ok()
        ),
    ))
}

fn stratification(c: &Context) -> (Status, String) {
    let y = c.complex();
    let expected = c.m.admissible_pairs().len();
    let mismatches = stratum_fan_mismatches(y);
    let order = stratum_order_check(y);
    let filtration = filtration_check(y);
    verdict(
        y.strata().len() == expected && mismatches.is_empty() && order && filtration,
        format!(
            "{} strata ({expected} admissible pairs), stratum fans match {}, closure order {order}, filtration {filtration}",
            y.strata().len(),
            mismatches.is_empty()
        ),
    )
}

fn product(c: &Context) -> Result<(Status, String), PipelineError> {
    let comps = c.m.connected_components();
    if comps.len() < 2 {
        return Ok((Status::Skipped, "connected matroid".into()));
    }
    let first = comps[0];
    let rest = c.m.ground().difference(first);
    let (n, o) = (c.m.restrict(first), c.m.restrict(rest));
    let k = ctx("Kunneth", kunneth_check(&n, &o))?;
    let strata = ctx("product decomposition", product_decomposition_check(&n, &o))?;
    let own = c.table().diagonal() == k.sum;
    Ok(verdict(
        k.passed && strata.passed() && own,
        format!("{:?} * {:?} = {:?}, strata factor {}", k.left, k.right, k.sum, strata.passed()),
    ))
}

fn support(c: &Context) -> Result<(Status, String), PipelineError> {
    let r = ctx("support identification", support_identification_check(c.m))?;
    Ok(verdict(r.passed(), format!("{} + {} samples", r.forward_samples, r.backward_samples)))
}

fn pullback(c: &Context, force: bool) -> Result<(Status, String), PipelineError> {
    if c.m.len() > PULLBACK_CHAIN_LIMIT && !force {
        return Ok((Status::Skipped, format!("|E| > {PULLBACK_CHAIN_LIMIT}")));
    }
    let r = ctx("pullback chain", pullback_chain_check(c.m))?;
    Ok(verdict(r.passed, format!("A dims {:?} -> {:?} -> {:?}", r.coarse_dims, r.fine_dims, r.matroid_dims)))
}

/// Runs the requested checks.
pub fn run_pipeline(name: &str, m: &Matroid, options: &PipelineOptions) -> Result<VerificationReport, PipelineError> {
    let d = m.rank();
    let top = options.max_p.map_or(d, |p| p.min(d));
    let wanted = |n: &str| options.checks.as_ref().is_none_or(|c| c.iter().any(|x| x == n));
    let names: Vec<&str> = CHECK_NAMES.iter().chain(EXTRA_CHECKS.iter()).copied().collect();
    if let Some(req) = &options.checks {
        if let Some(bad) = req.iter().find(|r| !names.contains(&r.as_str())) {
            return Err(PipelineError { context: "check selection".into(), message: format!("unknown check {bad:?}") });
        }
    }
    let large = m.len() > SIZE_LIMIT && !options.force_large;
    let mut timing = BTreeMap::new();
    let clock = Instant::now();
    let stamp = |label: &str, timing: &mut BTreeMap<String, u128>| {
        timing.insert(label.to_string(), clock.elapsed().as_millis());
    };

    let deep = !large && names.iter().any(|n| wanted(n) && needs_complex(n));
    let (complex, table) = if deep {
        let y = ctx("face complex", build_face_complex(m))?;
        stamp("face_complex", &mut timing);
        let t = ctx("cohomology", cohomology_table(&y))?;
        stamp("cohomology", &mut timing);
        (Some(y), Some(t))
    } else {
        (None, None)
    };
    let c = Context { m, ps: (0..=top).collect(), complex, table };

    let mut checks = Vec::new();
    for &n in &names {
        if !wanted(n) {
            continue;
        }
        let (status, details) = if large && needs_complex(n) {
            (Status::Skipped, format!("|E| = {} exceeds {SIZE_LIMIT}; use force_large", m.len()))
        } else {
            match n {
                "offdiagonal_vanishing" => offdiagonal(&c),
                "diagonal_whitney" => diagonal(&c),
                "whitney_identity" => whitney_identity(&c),
                "spectral_consistency" => spectral(&c)?,
                "koszul_acyclicity" => koszul(&c)?,
                "chain_soundness" => chain(&c)?,
                "coextension_identity" => coextension_identity(&c),
                "fan_poincare_duality" => poincare(&c)?,
                "theorem2" => theorem2(&c)?,
                "stratification" => stratification(&c),
                "product_behaviour" => product(&c)?,
                "support_identification" => support(&c)?,
                "pullback_chain" => pullback(&c, options.force_large)?,
                "mobius_algebra" => mobius_check(&c),
                _ => unreachable!("names are validated"),
            }
        };
        stamp(n, &mut timing);
        checks.push(CheckResult { name: n.to_string(), status, details });
    }

    let e_pages = if large {
        Vec::new()
    } else {
        c.ps.iter()
            .map(|&p| {
                let page = ctx("E1 page", e1_page(m, p))?;
                Ok(EPageSummary { p, e1: page.dims(), e2: page.homology_dims() })
            })
            .collect::<Result<_, PipelineError>>()?
    };

    Ok(VerificationReport {
        matroid: name.to_string(),
        ground_set: m.labels().to_vec(),
        rank: d,
        whitney_numbers: m.whitney_numbers(),
        f_vector: m.f_vector(),
        strata: c.complex.as_ref().map(|y| y.strata().len()),
        cells: c.complex.as_ref().map(|y| y.cells().len()),
        cohomology: c.table,
        e_pages,
        checks,
        timing: options.timing.then_some(timing),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn u22_full_run() {
        let m = catalog("U(2,2)").unwrap();
        let r = run_pipeline("U(2,2)", &m, &PipelineOptions::default()).unwrap();
        assert!(r.all_passed(), "{:#?}", r.checks);
        assert_eq!(r.cohomology.as_ref().unwrap().diagonal(), vec![1, 2, 1]);
        assert_eq!(r.check("product_behaviour").unwrap().status, Status::Pass);
        assert!(r.timing.is_none());
        for name in CHECK_NAMES {
            assert!(r.check(name).is_some());
        }
    }

    #[test]
    fn ex82_run() {
        let m = catalog("ex82").unwrap();
        let r = run_pipeline("ex82", &m, &PipelineOptions::default()).unwrap();
        assert!(r.all_passed(), "{:#?}", r.checks);
        assert_eq!(r.strata, Some(12));
    }

    #[test]
    fn vamos_is_depth_limited() {
        let m = catalog("vamos").unwrap();
        let r = run_pipeline("vamos", &m, &PipelineOptions::default()).unwrap();
        assert_eq!(r.check("whitney_identity").unwrap().status, Status::Pass);
        assert_eq!(r.check("mobius_algebra").unwrap().status, Status::Pass);
        assert_eq!(r.check("theorem2").unwrap().status, Status::Skipped);
        assert!(r.cohomology.is_none());
    }

    #[test]
    fn selection_and_determinism() {
        let m = catalog("U(1,1)").unwrap();
        let opts = PipelineOptions { checks: Some(vec!["stratification".into()]), ..Default::default() };
        let r = run_pipeline("U(1,1)", &m, &opts).unwrap();
        assert_eq!(r.checks.len(), 1);
        let bad = PipelineOptions { checks: Some(vec!["nope".into()]), ..Default::default() };
        assert!(run_pipeline("U(1,1)", &m, &bad).is_err());
        let a = serde_json::to_string(&run_pipeline("x", &m, &PipelineOptions::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_pipeline("x", &m, &PipelineOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
