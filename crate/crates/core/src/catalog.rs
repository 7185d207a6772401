//! Named matroids, the bases-list document format, and exhaustive
//! enumeration of small matroids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid, MatroidError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("could not parse matroid document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("could not read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// `{"name": .., "ground_set": [..], "bases": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidDocument {
    pub name: String,
    pub ground_set: Vec<String>,
    pub bases: Vec<Vec<String>>,
}

impl MatroidDocument {
    pub fn from_matroid(name: &str, m: &Matroid) -> Self {
        let labels = m.labels();
        MatroidDocument {
            name: name.to_string(),
            ground_set: labels.to_vec(),
            bases: m.bases().iter().map(|b| b.iter().map(|e| labels[e].clone()).collect()).collect(),
        }
    }

    pub fn to_matroid(&self) -> Result<Matroid, MatroidError> {
        let ground: Vec<&str> = self.ground_set.iter().map(String::as_str).collect();
        let bases: Vec<Vec<&str>> = self.bases.iter().map(|b| b.iter().map(String::as_str).collect()).collect();
        let refs: Vec<&[&str]> = bases.iter().map(Vec::as_slice).collect();
        Matroid::from_labeled(&ground, &refs)
    }
}

/// Parses a document; element order is file order.
pub fn parse_matroid(text: &str) -> Result<(String, Matroid), InputError> {
    let doc: MatroidDocument = serde_json::from_str(text)?;
    let m = doc.to_matroid()?;
    Ok((doc.name, m))
}

/// `catalog:NAME` or a path to a document.
pub fn load(source: &str) -> Result<(String, Matroid), InputError> {
    match source.strip_prefix("catalog:") {
        Some(name) => Ok((name.to_string(), catalog(name)?)),
        None => {
            let text =
                std::fs::read_to_string(source).map_err(|e| InputError::Io { path: source.to_string(), source: e })?;
            parse_matroid(&text)
        }
    }
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

/// All `r`-subsets of `{0..n}` not in `nonbases`, as bases.
fn all_but(n: usize, r: usize, nonbases: &[&[usize]]) -> Vec<ElementSet> {
    let excluded: Vec<ElementSet> = nonbases.iter().map(|s| ElementSet::from_indices(s.iter().copied())).collect();
    ElementSet::full(n).subsets().filter(|s| s.len() == r && !excluded.contains(s)).collect()
}

/// Cycle matroid of a graph on vertices `0..v`; edges are labelled `1..`.
pub fn graphic(v: usize, edges: &[(usize, usize)]) -> Result<Matroid, MatroidError> {
    let n = edges.len();
    let forest = |s: ElementSet| {
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        s.iter().all(|e| {
            let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
            parent[a] = b;
            a != b
        })
    };
    let forests: Vec<ElementSet> = ElementSet::full(n).subsets().filter(|&s| forest(s)).collect();
    let r = forests.iter().map(|s| s.len()).max().unwrap_or(0);
    Matroid::from_bases(labels(n), forests.into_iter().filter(|s| s.len() == r).collect())
}

fn parse_args(inner: &str) -> Option<Vec<usize>> {
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// Names understood by [`catalog`], for listings.
pub const CATALOG_NAMES: &[&str] = &[
    "U(r,n)",
    "boolean(n)",
    "parallel(k)",
    "loops(k)",
    "ex81",
    "ex82",
    "triangle",
    "c4",
    "diamond",
    "k4",
    "fano",
    "vamos",
    "A+B",
];

/// Looks up a named matroid. `A+B` is the direct sum of two entries; the
/// labels of `B` are primed where they clash with `A`.
pub fn catalog(name: &str) -> Result<Matroid, InputError> {
    let name = name.trim();
    if let Some((a, b)) = split_sum(name) {
        let left = catalog(a)?;
        let mut right = catalog(b)?;
        let mut taken: Vec<String> = left.labels().to_vec();
        let fresh: Vec<String> = right
            .labels()
            .iter()
            .map(|l| {
                let mut l = l.clone();
                while taken.contains(&l) {
                    l.push('\'');
                }
                taken.push(l.clone());
                l
            })
            .collect();
        right = right.relabeled(fresh)?;
        return Ok(left.direct_sum(&right)?);
    }
    let unknown = || InputError::UnknownCatalogEntry(name.to_string());
    let call = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')).and_then(parse_args);
    if let Some(args) = call("U(") {
        let [r, n] = args[..] else { return Err(unknown()) };
        if r > n {
            return Err(unknown());
        }
        return Ok(Matroid::uniform(r, n)?);
    }
    if let Some(args) = call("boolean(") {
        let [n] = args[..] else { return Err(unknown()) };
        return Ok(Matroid::uniform(n, n)?);
    }
    if let Some(args) = call("parallel(") {
        let [k] = args[..] else { return Err(unknown()) };
        if k == 0 {
            return Err(unknown());
        }
        return Ok(Matroid::uniform(1, k)?);
    }
    if let Some(args) = call("loops(") {
        let [k] = args[..] else { return Err(unknown()) };
        return Ok(Matroid::uniform(0, k)?);
    }
    let m = match name {
        "ex81" => Matroid::uniform(2, 2)?,
        "ex82" => Matroid::from_labeled(&["1", "2", "3"], &[&["1", "3"], &["2", "3"]])?,
        "triangle" => graphic(3, &[(0, 1), (1, 2), (0, 2)])?,
        "c4" => graphic(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])?,
        "diamond" => graphic(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])?,
        "k4" => graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?,
        "fano" => {
            let lines: &[&[usize]] =
                &[&[0, 1, 3], &[1, 2, 4], &[2, 3, 5], &[3, 4, 6], &[0, 4, 5], &[1, 5, 6], &[0, 2, 6]];
            Matroid::from_bases(labels(7), all_but(7, 3, lines))?
        }
        "vamos" => {
            // Pairs ab, cd, ef, gh; every union of two pairs except ef ∪ gh
            // is a circuit-hyperplane.
            let planes: &[&[usize]] = &[&[0, 1, 2, 3], &[0, 1, 4, 5], &[0, 1, 6, 7], &[2, 3, 4, 5], &[2, 3, 6, 7]];
            Matroid::from_bases(letters(8), all_but(8, 4, planes))?
        }
        _ => return Err(unknown()),
    };
    Ok(m)
}

/// Splits at a top-level `+` (outside parentheses).
fn split_sum(name: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in name.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return Some((&name[..i], &name[i + 1..])),
            _ => {}
        }
    }
    None
}

/// The matroids used by the acceptance suite.
pub fn acceptance_catalog() -> Vec<(String, Matroid)> {
    [
        "U(1,1)",
        "U(1,2)",
        "U(2,2)",
        "U(2,3)",
        "U(3,3)",
        "U(2,4)",
        "U(3,4)",
        "ex82",
        "U(1,1)+parallel(2)",
        "parallel(2)+U(2,2)",
        "parallel(3)+U(1,1)",
        "triangle",
    ]
    .iter()
    .map(|n| (n.to_string(), catalog(n).expect("catalog entry")))
    .collect()
}

/// Every matroid on the labelled ground set `{1..n}`, found by testing all
/// families of equicardinal subsets against the basis exchange axiom.
pub fn enumerate_matroids(n: usize) -> Vec<Matroid> {
    assert!(n <= 5, "exhaustive enumeration is limited to five elements");
    let mut out = Vec::new();
    for r in 0..=n {
        let candidates: Vec<ElementSet> = ElementSet::full(n).subsets().filter(|s| s.len() == r).collect();
        for family in 1u64..(1u64 << candidates.len()) {
            let bases: Vec<ElementSet> =
                candidates.iter().enumerate().filter(|(k, _)| family >> k & 1 == 1).map(|(_, &s)| s).collect();
            if let Ok(m) = Matroid::from_bases(labels(n), bases) {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let text = r#"{"name":"ex82","ground_set":["1","2","3"],"bases":[["1","3"],["2","3"]]}"#;
        let (name, m) = parse_matroid(text).unwrap();
        assert_eq!(name, "ex82");
        assert_eq!(m, catalog("ex82").unwrap());
        let doc = MatroidDocument::from_matroid("ex82", &m);
        assert_eq!(doc.to_matroid().unwrap(), m);
    }

    #[test]
    fn empty_bases_rejected() {
        let text = r#"{"name":"bad","ground_set":["1"],"bases":[]}"#;
        assert!(matches!(parse_matroid(text), Err(InputError::Matroid(MatroidError::EmptyBases))));
        assert!(matches!(parse_matroid("{"), Err(InputError::Parse(_))));
    }

    #[test]
    fn catalog_entries() {
        let u23 = catalog("U(2,3)").unwrap();
        assert_eq!(u23.bases().len(), 3);
        assert_eq!(catalog("triangle").unwrap().bases(), u23.bases());
        assert_eq!(catalog("k4").unwrap().bases().len(), 16);
        assert_eq!(catalog("c4").unwrap().bases(), catalog("U(3,4)").unwrap().bases());
        assert_eq!(catalog("diamond").unwrap().bases().len(), 8);
        assert_eq!(catalog("fano").unwrap().bases().len(), 28);
        let v = catalog("vamos").unwrap();
        assert_eq!((v.len(), v.rank(), v.bases().len()), (8, 4, 65));
        let s = catalog("parallel(2)+U(1,1)").unwrap();
        assert_eq!(s.labels(), &["1", "2", "1'"]);
        assert_eq!(s.whitney_numbers(), vec![1, 2, 1]);
        assert!(catalog("U(3,2)").is_err());
        assert!(catalog("nope").is_err());
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_matroids(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 68]);
    }
}
