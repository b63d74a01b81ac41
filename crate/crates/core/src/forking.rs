//! Independence oracles: over a free factor, and over a parameter group via
//! its pointed JSJ decomposition.

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::freewords::Word;
use crate::graphofgroups::{GogError, MarkedGraphOfGroups, Subgraph, VertexKind};
use crate::stallings::CoreGraph;
use crate::whitehead::{self, SplitDecision, WhiteheadError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForkingError {
    #[error("<A> is not a free factor; use the JSJ route")]
    NotFreeFactor,
    #[error(transparent)]
    Whitehead(#[from] WhiteheadError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error("decomposition fails validation: {0}")]
    Invalid(String),
    #[error("decomposition has no basepoint")]
    NoBasepoint,
    #[error("{0} is not in the basepoint group")]
    NotInBasepoint(Word),
    #[error("F_n is freely decomposable relative to A")]
    FreelyDecomposable,
    #[error("subgroup is not cyclic")]
    NotCyclic,
    #[error("subgroup is trivial")]
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Forks,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Independent => "independent",
            Verdict::Forks => "forks",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    FreeFactor,
    Jsj,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::FreeFactor => "free_factor",
            Route::Jsj => "jsj",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<u32>,
    /// Non-Z-type vertices with their kind names.
    pub non_z: Vec<(u32, &'static str)>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsjEvidence {
    pub lambda_b: Subgraph,
    pub lambda_c: Subgraph,
    pub components: Vec<ComponentReport>,
    pub decomposition_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Split(SplitDecision),
    Jsj(JsjEvidence),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub verdict: Verdict,
    pub route: Route,
    pub assumptions: Vec<String>,
    pub evidence: Evidence,
}

pub fn independent_over_free_factor(
    rank: u32,
    a: &[Word],
    b: &[Word],
    c: &[Word],
    depth: u32,
) -> Result<IndependenceVerdict, ForkingError> {
    let basis = CoreGraph::from_generators(rank, a).free_basis();
    if whitehead::is_part_of_basis(rank, &basis)?.is_none() {
        return Err(ForkingError::NotFreeFactor);
    }
    let decision = whitehead::independent_split_search(rank, a, b, c, depth)?;
    let verdict = match decision {
        SplitDecision::Independent(_) => Verdict::Independent,
        SplitDecision::Forks(_) => Verdict::Forks,
        SplitDecision::Unknown(_) => Verdict::Unknown,
    };
    Ok(IndependenceVerdict {
        verdict,
        route: Route::FreeFactor,
        assumptions: vec![format!("search depth {depth}")],
        evidence: Evidence::Split(decision),
    })
}

/// SHA-256 of the canonical JSON form of `g`.
pub fn decomposition_hash(g: &MarkedGraphOfGroups) -> String {
    let text = crate::io::graph_to_json(g).to_string();
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn components(g: &MarkedGraphOfGroups, sub: &Subgraph) -> Vec<ComponentReport> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &sub.vertices {
        if !seen.insert(start) {
            continue;
        }
        let mut vertices = BTreeSet::from([start]);
        let mut edges = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for e in g.incident(v).into_iter().filter(|e| sub.edges.contains(&e.id)) {
                edges.insert(e.id);
                let other = if e.from == v { e.to } else { e.from };
                if seen.insert(other) {
                    vertices.insert(other);
                    stack.push(other);
                }
            }
        }
        let non_z: Vec<(u32, &'static str)> = vertices
            .iter()
            .map(|&v| (v, &g.vertex(v).unwrap().kind))
            .filter(|(_, k)| **k != VertexKind::ZType)
            .map(|(v, k)| (v, k.name()))
            .collect();
        let ok = non_z.len() <= 1 && non_z.iter().all(|(_, k)| *k != "Surface");
        out.push(ComponentReport { vertices, edges, non_z, ok });
    }
    out
}

/// Independence of `b` and `c` over `A` read off the intersection of their
/// minimal subgraphs in the pointed JSJ decomposition `g`.
pub fn independent_over_jsj(
    g: &MarkedGraphOfGroups,
    a: &[Word],
    b: &[Word],
    c: &[Word],
) -> Result<IndependenceVerdict, ForkingError> {
    let report = g.validate();
    if !report.all_passed() {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        return Err(ForkingError::Invalid(names.join(", ")));
    }
    let bp = g.basepoint_id().ok_or(ForkingError::NoBasepoint)?;
    let base_group = g.vertex_group(bp);
    if let Some(w) = a.iter().find(|w| !base_group.contains(w)) {
        return Err(ForkingError::NotInBasepoint(w.clone()));
    }
    let mut assumptions = Vec::new();
    match whitehead::is_in_proper_free_factor(g.rank, a) {
        Ok(true) => return Err(ForkingError::FreelyDecomposable),
        Ok(false) => assumptions.push("freely indecomposable relative to A (checked)".to_string()),
        Err(_) => assumptions.push("freely indecomposable relative to A (asserted)".to_string()),
    }
    assumptions.push("no extended hyperbolic floor (asserted)".to_string());
    assumptions.push("decomposition is the pointed JSJ (asserted)".to_string());

    let lambda = |t: &[Word]| -> Result<Subgraph, ForkingError> {
        let h: Vec<Word> = a.iter().chain(t).cloned().collect();
        if h.iter().all(|w| w.is_identity()) {
            return Ok(Subgraph {
                vertices: BTreeSet::from([bp]),
                edges: BTreeSet::new(),
            });
        }
        Ok(g.minimal_subgraph(&h)?.subgraph)
    };
    let lambda_b = lambda(b)?;
    let lambda_c = lambda(c)?;
    let meet = Subgraph {
        vertices: lambda_b.vertices.intersection(&lambda_c.vertices).copied().collect(),
        edges: lambda_b.edges.intersection(&lambda_c.edges).copied().collect(),
    };
    let comps = components(g, &meet);
    let verdict = if comps.iter().all(|c| c.ok) {
        Verdict::Independent
    } else {
        Verdict::Forks
    };
    Ok(IndependenceVerdict {
        verdict,
        route: Route::Jsj,
        assumptions,
        evidence: Evidence::Jsj(JsjEvidence {
            lambda_b,
            lambda_c,
            components: comps,
            decomposition_hash: decomposition_hash(g),
        }),
    })
}

/// Generator of the maximal cyclic subgroup containing the cyclic `<A>`.
pub fn acl_cyclic(a: &[Word]) -> Result<Word, ForkingError> {
    let mut nontrivial = a.iter().filter(|w| !w.is_identity());
    let first = nontrivial.next().ok_or(ForkingError::Trivial)?;
    let (root, _) = first.max_root().map_err(|_| ForkingError::Trivial)?;
    for w in nontrivial {
        let (r, _) = w.max_root().map_err(|_| ForkingError::Trivial)?;
        if r != root && r != root.inverse() {
            return Err(ForkingError::NotCyclic);
        }
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freewords::parse_tuple;
    use crate::graphofgroups::tests::{f2_pointed, f4_pointed};

    fn t(rank: u32, s: &str) -> Vec<Word> {
        parse_tuple(rank, s).unwrap()
    }

    #[test]
    fn free_factor_examples() {
        let v = independent_over_free_factor(2, &[], &t(2, "a"), &t(2, "b"), 6).unwrap();
        assert_eq!(v.verdict, Verdict::Independent);
        let v = independent_over_free_factor(2, &[], &t(2, "a"), &t(2, "a"), 6).unwrap();
        assert_eq!(v.verdict, Verdict::Forks);
        let v = independent_over_free_factor(3, &t(3, "a"), &t(3, "b"), &t(3, "ba"), 6).unwrap();
        assert_eq!(v.verdict, Verdict::Forks);
        assert_eq!(
            independent_over_free_factor(2, &t(2, "abAB"), &t(2, "a"), &t(2, "b"), 6),
            Err(ForkingError::NotFreeFactor)
        );
    }

    #[test]
    fn jsj_f2_forks() {
        let g = f2_pointed();
        let v = independent_over_jsj(&g, &t(2, "abAB"), &t(2, "a"), &t(2, "b")).unwrap();
        assert_eq!(v.verdict, Verdict::Forks);
        let Evidence::Jsj(e) = &v.evidence else { panic!() };
        assert_eq!(e.decomposition_hash.len(), 64);
    }

    #[test]
    fn jsj_f4_independent() {
        let g = f4_pointed();
        let a = t(4, "abAB,cdCD");
        let v = independent_over_jsj(&g, &a, &t(4, "ab"), &t(4, "cd")).unwrap();
        assert_eq!(v.verdict, Verdict::Independent);
        let v = independent_over_jsj(&g, &a, &a, &a).unwrap();
        assert_eq!(v.verdict, Verdict::Independent);
        let v = independent_over_jsj(&g, &a, &t(4, "a"), &t(4, "b")).unwrap();
        assert_eq!(v.verdict, Verdict::Forks);
        assert!(matches!(
            independent_over_jsj(&g, &t(4, "a"), &t(4, "b"), &t(4, "c")),
            Err(ForkingError::NotInBasepoint(_))
        ));
    }

    #[test]
    fn acl_examples() {
        assert_eq!(acl_cyclic(&t(2, "aa")).unwrap(), Word::parse(2, "a").unwrap());
        assert_eq!(acl_cyclic(&t(2, "abAB")).unwrap(), Word::parse(2, "abAB").unwrap());
        assert_eq!(acl_cyclic(&t(2, "abab,ababab")).unwrap(), Word::parse(2, "ab").unwrap());
        assert_eq!(acl_cyclic(&t(2, "a,b")), Err(ForkingError::NotCyclic));
        assert_eq!(acl_cyclic(&[]), Err(ForkingError::Trivial));
    }
}
