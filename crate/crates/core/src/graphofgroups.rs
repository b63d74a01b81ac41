//! Marked cyclic graph-of-groups decompositions of `F_n`.
//!
//! Vertex groups are given as literal subgroups of `F_n`, all positioned in
//! one fundamental domain of the Bass–Serre tree: a tree edge joins the lifts
//! of its endpoints, and a non-tree edge `e` with stable letter `t` joins the
//! lift of `from` to `t` times the lift of `to`. Hence
//! `edge_generator = image_from = t * image_to * t^-1` (with `t = 1` on tree
//! edges).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::freewords::Word;
use crate::stallings::CoreGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("unknown edge {0}")]
    UnknownEdge(u32),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("edge {0} has trivial edge group")]
    TrivialEdgeGroup(u32),
    #[error("subgroup is not elliptic in the decomposition")]
    NotElliptic,
    #[error("empty subgroup")]
    EmptySubgroup,
    #[error("decomposition has no vertex in two cylinders")]
    NoCylinderVertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceData {
    pub genus: u32,
    pub orientable: bool,
    pub boundary: u32,
}

impl SurfaceData {
    pub fn euler_characteristic(&self) -> i64 {
        let g = i64::from(self.genus);
        let b = i64::from(self.boundary);
        if self.orientable {
            2 - 2 * g - b
        } else {
            2 - g - b
        }
    }

    /// Rank of the (free) fundamental group, for `boundary >= 1`.
    pub fn expected_rank(&self) -> i64 {
        1 - self.euler_characteristic()
    }

    /// Thrice-punctured sphere, once-punctured Klein bottle, twice-punctured
    /// projective plane.
    pub fn is_sporadic(&self) -> bool {
        matches!(
            (self.orientable, self.genus, self.boundary),
            (true, 0, 3) | (false, 2, 1) | (false, 1, 2)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Rigid,
    Surface(SurfaceData),
    ZType,
    Basepoint,
}

impl VertexKind {
    pub fn name(&self) -> &'static str {
        match self {
            VertexKind::Rigid => "Rigid",
            VertexKind::Surface(_) => "Surface",
            VertexKind::ZType => "ZType",
            VertexKind::Basepoint => "Basepoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: u32,
    pub kind: VertexKind,
    pub generators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: u32,
    pub from: u32,
    pub to: u32,
    pub edge_generator: Word,
    pub image_from: Word,
    pub image_to: Word,
    pub tree: bool,
    pub stable_letter: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraphOfGroups {
    pub rank: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub basepoint: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

const STRUCTURAL: [&str; 7] = [
    "structure",
    "spanning_tree",
    "stable_letters",
    "images_in_vertex_groups",
    "marking_relations",
    "cyclic_edge_groups",
    "generation",
];

impl ValidationReport {
    fn push(&mut self, name: &'static str, failures: Vec<String>) {
        self.checks.push(CheckResult {
            name,
            passed: failures.is_empty(),
            detail: failures.join("; "),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }

    /// The checks `express` and friends depend on.
    pub fn structurally_valid(&self) -> bool {
        STRUCTURAL
            .iter()
            .all(|n| self.passed(n) == Some(true))
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// A generator symbol of the graph of groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Vertex { vertex: u32, index: usize },
    Stable { edge: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub edge: u32,
    pub forward: bool,
}

/// `elements[0] * c_1 * elements[1] * ... * c_k * elements[k]`, where `c_i`
/// is the stable letter of the crossed edge (inverted when crossing
/// backwards, trivial on tree edges) and `elements[i]` lies in the group of
/// the vertex reached after `i` crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub start: u32,
    pub elements: Vec<Word>,
    pub crossings: Vec<Crossing>,
}

impl NormalForm {
    pub fn vertices(&self, g: &MarkedGraphOfGroups) -> Vec<u32> {
        let mut out = vec![self.start];
        for c in &self.crossings {
            let e = g.edge(c.edge).expect("crossing of a known edge");
            out.push(if c.forward { e.to } else { e.from });
        }
        out
    }

    pub fn edges_crossed(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for c in &self.crossings {
            *out.entry(c.edge).or_insert(0) += 1;
        }
        out
    }

    pub fn evaluate(&self, g: &MarkedGraphOfGroups) -> Word {
        let mut w = self.elements[0].clone();
        for (c, x) in self.crossings.iter().zip(&self.elements[1..]) {
            let t = g.letter(c.edge);
            w = if c.forward { &w * &t } else { &w * &t.inverse() };
            w = &w * x;
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<u32>,
}

impl Subgraph {
    pub fn contains(&self, other: &Subgraph) -> bool {
        other.vertices.is_subset(&self.vertices) && other.edges.is_subset(&self.edges)
    }
}

/// The subgraph carrying `c^-1 H c`, read from rooted loops at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSubgraph {
    pub subgraph: Subgraph,
    pub base: u32,
    pub conjugator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseMap {
    pub vertices: BTreeMap<u32, u32>,
    pub edges: BTreeMap<u32, Option<u32>>,
}

fn in_cyclic(g: &Word, x: &Word) -> bool {
    g.log_base(x).is_some()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl MarkedGraphOfGroups {
    pub fn vertex(&self, id: u32) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: u32) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    fn vindex(&self, id: u32) -> usize {
        self.vertices.iter().position(|v| v.id == id).expect("known vertex")
    }

    /// The basepoint field, or else the unique `Basepoint`-kind vertex.
    pub fn basepoint_id(&self) -> Option<u32> {
        self.basepoint.or_else(|| {
            let mut it = self.vertices.iter().filter(|v| v.kind == VertexKind::Basepoint);
            match (it.next(), it.next()) {
                (Some(v), None) => Some(v.id),
                _ => None,
            }
        })
    }

    /// Stable letter of an edge (identity on tree edges).
    pub fn letter(&self, edge: u32) -> Word {
        self.edge(edge)
            .and_then(|e| if e.tree { None } else { e.stable_letter.clone() })
            .unwrap_or_else(|| Word::identity(self.rank))
    }

    pub fn vertex_group(&self, id: u32) -> CoreGraph {
        let v = self.vertex(id).expect("known vertex");
        CoreGraph::from_generators(self.rank, &v.generators)
    }

    fn root_vertex(&self) -> u32 {
        self.basepoint_id()
            .unwrap_or_else(|| self.vertices.iter().map(|v| v.id).min().expect("nonempty graph"))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();

        let mut fails = Vec::new();
        let mut ids = BTreeSet::new();
        if self.vertices.is_empty() {
            fails.push("no vertices".to_string());
        }
        for v in &self.vertices {
            if !ids.insert(v.id) {
                fails.push(format!("duplicate vertex id {}", v.id));
            }
            if v.generators.iter().any(|w| w.rank() != self.rank) {
                fails.push(format!("vertex {} has a word of the wrong rank", v.id));
            }
        }
        let mut eids = BTreeSet::new();
        for e in &self.edges {
            if !eids.insert(e.id) {
                fails.push(format!("duplicate edge id {}", e.id));
            }
            for end in [e.from, e.to] {
                if !ids.contains(&end) {
                    fails.push(format!("edge {} refers to unknown vertex {}", e.id, end));
                }
            }
            let words = [&e.edge_generator, &e.image_from, &e.image_to]
                .into_iter()
                .chain(e.stable_letter.as_ref());
            if words.into_iter().any(|w| w.rank() != self.rank) {
                fails.push(format!("edge {} has a word of the wrong rank", e.id));
            }
        }
        if let Some(b) = self.basepoint {
            if !ids.contains(&b) {
                fails.push(format!("basepoint {b} is not a vertex"));
            }
        }
        let ok = fails.is_empty();
        r.push("structure", fails);
        if !ok {
            return r;
        }

        let mut fails = Vec::new();
        let mut uf = UnionFind::new(self.vertices.len());
        let mut count = 0;
        for e in self.edges.iter().filter(|e| e.tree) {
            count += 1;
            if !uf.union(self.vindex(e.from), self.vindex(e.to)) {
                fails.push(format!("tree edge {} closes a cycle", e.id));
            }
        }
        if count + 1 != self.vertices.len() && fails.is_empty() {
            fails.push("tree edges do not span the graph".to_string());
        }
        r.push("spanning_tree", fails);

        let mut fails = Vec::new();
        for e in &self.edges {
            match (&e.stable_letter, e.tree) {
                (Some(t), true) if !t.is_identity() => {
                    fails.push(format!("tree edge {} carries a stable letter", e.id))
                }
                (None, false) => fails.push(format!("non-tree edge {} has no stable letter", e.id)),
                _ => {}
            }
        }
        r.push("stable_letters", fails);

        let groups: BTreeMap<u32, CoreGraph> = self
            .vertices
            .iter()
            .map(|v| (v.id, CoreGraph::from_generators(self.rank, &v.generators)))
            .collect();
        let mut fails = Vec::new();
        for e in &self.edges {
            if !groups[&e.from].contains(&e.image_from) {
                fails.push(format!("edge {}: image_from not in vertex {}", e.id, e.from));
            }
            if !groups[&e.to].contains(&e.image_to) {
                fails.push(format!("edge {}: image_to not in vertex {}", e.id, e.to));
            }
        }
        r.push("images_in_vertex_groups", fails);

        let mut fails = Vec::new();
        for e in &self.edges {
            let t = self.letter(e.id);
            if e.edge_generator != e.image_from {
                fails.push(format!("edge {}: edge_generator differs from image_from", e.id));
            }
            if e.image_to.conjugate_by(&t) != e.image_from {
                fails.push(format!("edge {}: t * image_to * t^-1 != image_from", e.id));
            }
        }
        r.push("marking_relations", fails);

        let fails = self
            .edges
            .iter()
            .filter(|e| e.edge_generator.is_identity())
            .map(|e| format!("edge {} has trivial edge group", e.id))
            .collect();
        r.push("cyclic_edge_groups", fails);

        let mut all: Vec<Word> = self.vertices.iter().flat_map(|v| v.generators.iter().cloned()).collect();
        all.extend(self.edges.iter().filter(|e| !e.tree).filter_map(|e| e.stable_letter.clone()));
        let fails = if CoreGraph::from_generators(self.rank, &all).is_full() {
            vec![]
        } else {
            vec!["vertex groups and stable letters do not generate F_n".to_string()]
        };
        r.push("generation", fails);

        let bp = self.basepoint_id();
        let mut fails = Vec::new();
        for e in &self.edges {
            let (a, b) = (self.vertex(e.from).unwrap(), self.vertex(e.to).unwrap());
            let exempt = [a, b]
                .iter()
                .any(|v| v.kind == VertexKind::Basepoint && Some(v.id) == bp);
            if exempt {
                continue;
            }
            let z = |v: &Vertex| v.kind == VertexKind::ZType;
            let nz = |v: &Vertex| matches!(v.kind, VertexKind::Rigid | VertexKind::Surface(_));
            if !((z(a) && nz(b)) || (nz(a) && z(b))) {
                fails.push(format!("edge {} joins {} and {}", e.id, a.kind.name(), b.kind.name()));
            }
        }
        r.push("bipartite", fails);

        let mut sporadic = Vec::new();
        let mut rank_fails = Vec::new();
        for v in &self.vertices {
            if let VertexKind::Surface(s) = v.kind {
                if s.euler_characteristic() >= 0 || s.boundary == 0 {
                    sporadic.push(format!("vertex {}: surface is not hyperbolic with boundary", v.id));
                } else if s.is_sporadic() {
                    sporadic.push(format!("vertex {}: sporadic surface", v.id));
                }
                let rk = groups[&v.id].rank() as i64;
                if rk != s.expected_rank() {
                    rank_fails.push(format!(
                        "vertex {}: group rank {} but surface rank {}",
                        v.id,
                        rk,
                        s.expected_rank()
                    ));
                }
            }
        }
        r.push("sporadic_surfaces", sporadic);
        r.push("surface_rank", rank_fails);

        let fails = self
            .vertices
            .iter()
            .filter(|v| v.kind == VertexKind::ZType)
            .filter(|v| groups[&v.id].rank() != 1)
            .map(|v| format!("{} vertex {} is not cyclic", v.kind.name(), v.id))
            .collect();
        r.push("ztype_cyclic", fails);

        let mut fails = Vec::new();
        let kinds: Vec<u32> = self
            .vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Basepoint)
            .map(|v| v.id)
            .collect();
        if kinds.len() > 1 {
            fails.push(format!("several Basepoint vertices {kinds:?}"));
        }
        if let (Some(b), Some(&k)) = (self.basepoint, kinds.first()) {
            if b != k {
                fails.push(format!("basepoint {b} is not the Basepoint vertex {k}"));
            }
        }
        r.push("basepoint_unique", fails);
        r
    }

    fn require_structure(&self) -> Result<(), GogError> {
        let r = self.validate();
        if r.structurally_valid() {
            Ok(())
        } else {
            let msg: Vec<String> = r.failures().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            Err(GogError::InvalidMarking(msg.join("; ")))
        }
    }

    fn symbols(&self) -> (Vec<Symbol>, CoreGraph) {
        let mut syms = Vec::new();
        let mut words = Vec::new();
        for v in &self.vertices {
            for (i, w) in v.generators.iter().enumerate() {
                syms.push(Symbol::Vertex { vertex: v.id, index: i });
                words.push(w.clone());
            }
        }
        for e in self.edges.iter().filter(|e| !e.tree) {
            syms.push(Symbol::Stable { edge: e.id });
            words.push(self.letter(e.id));
        }
        (syms, CoreGraph::from_generators(self.rank, &words))
    }

    /// `w` as a product of symbol values, each with a sign (`true` = inverse).
    pub fn symbol_expression(&self, w: &Word) -> Result<Vec<(Symbol, bool)>, GogError> {
        let (syms, graph) = self.symbols();
        self.symbol_expression_with(&syms, &graph, w)
    }

    fn symbol_expression_with(&self, syms: &[Symbol], graph: &CoreGraph, w: &Word) -> Result<Vec<(Symbol, bool)>, GogError> {
        let formal = graph
            .express(w)
            .ok_or_else(|| GogError::InvalidMarking(format!("{w} is not generated by the marking")))?;
        Ok(formal
            .letters()
            .iter()
            .map(|&x| (syms[x.unsigned_abs() as usize - 1], x < 0))
            .collect())
    }

    /// Crossings along the spanning tree from `a` to `b`.
    pub fn tree_path(&self, a: u32, b: u32) -> Vec<Crossing> {
        let mut prev: BTreeMap<u32, Crossing> = BTreeMap::new();
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for e in self.edges.iter().filter(|e| e.tree) {
                for (x, y, fwd) in [(e.from, e.to, true), (e.to, e.from, false)] {
                    if x == v && seen.insert(y) {
                        prev.insert(y, Crossing { edge: e.id, forward: fwd });
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let c = prev[&v];
            path.push(c);
            let e = self.edge(c.edge).unwrap();
            v = if c.forward { e.from } else { e.to };
        }
        path.reverse();
        path
    }

    /// Vertices on the `to` side of a tree edge once it is removed.
    pub fn tree_side(&self, edge: u32) -> BTreeSet<u32> {
        let e = self.edge(edge).expect("known edge");
        let mut side = BTreeSet::from([e.to]);
        let mut queue = VecDeque::from([e.to]);
        while let Some(v) = queue.pop_front() {
            for f in self.edges.iter().filter(|f| f.tree && f.id != edge) {
                for (x, y) in [(f.from, f.to), (f.to, f.from)] {
                    if x == v && side.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        side
    }

    fn side_image(&self, c: Crossing, at_start: bool) -> &Word {
        let e = self.edge(c.edge).unwrap();
        // image on the vertex the crossing leaves (at_start) or enters
        if c.forward == at_start {
            &e.image_from
        } else {
            &e.image_to
        }
    }

    fn push_crossing(&self, nf: &mut NormalForm, c: Crossing) {
        let g = nf.elements.last().unwrap().clone();
        if let Some(&last) = nf.crossings.last() {
            if last.edge == c.edge && last.forward != c.forward && in_cyclic(&g, self.side_image(last, false)) {
                nf.crossings.pop();
                nf.elements.pop();
                let t = self.letter(c.edge);
                let moved = if last.forward {
                    g.conjugate_by(&t)
                } else {
                    g.conjugate_by(&t.inverse())
                };
                let top = nf.elements.last_mut().unwrap();
                *top = &*top * &moved;
                return;
            }
        }
        nf.crossings.push(c);
        nf.elements.push(Word::identity(self.rank));
    }

    fn walk(&self, nf: &mut NormalForm, cur: &mut u32, to: u32) {
        for c in self.tree_path(*cur, to) {
            self.push_crossing(nf, c);
        }
        *cur = to;
    }

    fn express_at_with(&self, syms: &[Symbol], graph: &CoreGraph, base: u32, w: &Word) -> Result<NormalForm, GogError> {
        let expr = self.symbol_expression_with(syms, graph, w)?;
        let mut nf = NormalForm {
            start: base,
            elements: vec![Word::identity(self.rank)],
            crossings: Vec::new(),
        };
        let mut cur = base;
        for (s, inv) in expr {
            match s {
                Symbol::Vertex { vertex, index } => {
                    self.walk(&mut nf, &mut cur, vertex);
                    let x = &self.vertex(vertex).unwrap().generators[index];
                    let x = if inv { x.inverse() } else { x.clone() };
                    let top = nf.elements.last_mut().unwrap();
                    *top = &*top * &x;
                }
                Symbol::Stable { edge } => {
                    let e = self.edge(edge).unwrap();
                    let (a, b) = if inv { (e.to, e.from) } else { (e.from, e.to) };
                    self.walk(&mut nf, &mut cur, a);
                    self.push_crossing(&mut nf, Crossing { edge, forward: !inv });
                    cur = b;
                }
            }
        }
        self.walk(&mut nf, &mut cur, base);
        Ok(nf)
    }

    /// Reduced loop at `base` representing `w`.
    pub fn express_at(&self, base: u32, w: &Word) -> Result<NormalForm, GogError> {
        self.require_structure()?;
        if self.vertex(base).is_none() {
            return Err(GogError::UnknownVertex(base));
        }
        let (syms, graph) = self.symbols();
        self.express_at_with(&syms, &graph, base, w)
    }

    /// Reduced loop at the basepoint (or the lowest vertex id).
    pub fn express_rooted(&self, w: &Word) -> Result<NormalForm, GogError> {
        self.express_at(self.root_vertex(), w)
    }

    /// Britton normal form with tree-edge excursions at the ends trimmed and
    /// single-vertex elements moved to the lowest vertex id they slide to.
    pub fn express(&self, w: &Word) -> Result<NormalForm, GogError> {
        let mut nf = self.express_rooted(w)?;
        while nf.crossings.len() >= 2 {
            let (c1, ck) = (nf.crossings[0], *nf.crossings.last().unwrap());
            let tree = self.edge(c1.edge).unwrap().tree;
            let img = self.side_image(c1, true);
            let k = nf.elements.len() - 1;
            if !(tree && c1.edge == ck.edge && c1.forward != ck.forward)
                || !in_cyclic(&nf.elements[0], img)
                || !in_cyclic(&nf.elements[k], img)
            {
                break;
            }
            let e = self.edge(c1.edge).unwrap();
            nf.start = if c1.forward { e.to } else { e.from };
            let first = nf.elements.remove(0);
            nf.elements[0] = &first * &nf.elements[0];
            let last = nf.elements.pop().unwrap();
            let top = nf.elements.last_mut().unwrap();
            *top = &*top * &last;
            nf.crossings.remove(0);
            nf.crossings.pop();
        }
        if nf.crossings.is_empty() {
            nf.start = self.slide(nf.start, &nf.elements[0]);
        }
        Ok(nf)
    }

    fn slide(&self, start: u32, g: &Word) -> u32 {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.tree && in_cyclic(g, &e.edge_generator)) {
                for (x, y) in [(e.from, e.to), (e.to, e.from)] {
                    if x == v && seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        *seen.iter().next().unwrap()
    }

    fn loops_union(&self, syms: &[Symbol], graph: &CoreGraph, base: u32, hs: &[Word]) -> Result<Subgraph, GogError> {
        let mut sub = Subgraph {
            vertices: BTreeSet::from([base]),
            edges: BTreeSet::new(),
        };
        for h in hs {
            let nf = self.express_at_with(syms, graph, base, h)?;
            sub.vertices.extend(nf.vertices(self));
            sub.edges.extend(nf.crossings.iter().map(|c| c.edge));
        }
        Ok(sub)
    }

    /// Moves the base along the axis of `h` until the loop is cyclically
    /// reduced; returns `(base, c)` with the base lift `c * v~` on the axis, or
    /// `None` if `h` is elliptic.
    fn axis_point(&self, syms: &[Symbol], graph: &CoreGraph, h: &Word) -> Result<Option<(u32, Word)>, GogError> {
        let mut base = self.root_vertex();
        let mut c = Word::identity(self.rank);
        loop {
            let hc = h.conjugate_by(&c.inverse());
            let nf = self.express_at_with(syms, graph, base, &hc)?;
            let k = nf.crossings.len();
            if k == 0 {
                return Ok(None);
            }
            let (c1, ck) = (nf.crossings[0], nf.crossings[k - 1]);
            let merged = &nf.elements[k] * &nf.elements[0];
            if k >= 2 && c1.edge == ck.edge && c1.forward != ck.forward && in_cyclic(&merged, self.side_image(c1, true)) {
                let t = self.letter(c1.edge);
                let step = if c1.forward { t } else { t.inverse() };
                c = &(&c * &nf.elements[0]) * &step;
                let e = self.edge(c1.edge).unwrap();
                base = if c1.forward { e.to } else { e.from };
            } else {
                return Ok(Some((base, c)));
            }
        }
    }

    /// Smallest connected subgraph carrying `<H>`: rooted at the basepoint
    /// when there is one, otherwise at a point of the minimal subtree.
    pub fn minimal_subgraph(&self, h: &[Word]) -> Result<MinimalSubgraph, GogError> {
        self.require_structure()?;
        let hs: Vec<Word> = h.iter().filter(|w| !w.is_identity()).cloned().collect();
        if hs.is_empty() {
            return Err(GogError::EmptySubgroup);
        }
        let (syms, graph) = self.symbols();
        if let Some(bp) = self.basepoint_id() {
            let sub = self.loops_union(&syms, &graph, bp, &hs)?;
            return Ok(MinimalSubgraph {
                subgraph: sub,
                base: bp,
                conjugator: Word::identity(self.rank),
            });
        }
        let mut candidates = hs.clone();
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                candidates.push(&hs[i] * &hs[j]);
            }
        }
        for cand in &candidates {
            if let Some((base, c)) = self.axis_point(&syms, &graph, cand)? {
                let conj: Vec<Word> = hs.iter().map(|x| x.conjugate_by(&c.inverse())).collect();
                let sub = self.loops_union(&syms, &graph, base, &conj)?;
                return Ok(MinimalSubgraph {
                    subgraph: sub,
                    base,
                    conjugator: c,
                });
            }
        }
        let hg = CoreGraph::from_generators(self.rank, &hs);
        let mut order: Vec<u32> = self.vertices.iter().map(|v| v.id).collect();
        order.sort_unstable();
        for v in order {
            if let Some(g) = hg.conjugator_into(&self.vertex_group(v)) {
                return Ok(MinimalSubgraph {
                    subgraph: Subgraph {
                        vertices: BTreeSet::from([v]),
                        edges: BTreeSet::new(),
                    },
                    base: v,
                    conjugator: g.inverse(),
                });
            }
        }
        Err(GogError::InvalidMarking("elliptic subgroup fixes no vertex".to_string()))
    }

    /// Every word `w` replaced by `x * w * x^-1`.
    pub fn conjugate_marking(&self, x: &Word) -> MarkedGraphOfGroups {
        let c = |w: &Word| w.conjugate_by(x);
        MarkedGraphOfGroups {
            rank: self.rank,
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: v.id,
                    kind: v.kind,
                    generators: v.generators.iter().map(c).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    edge_generator: c(&e.edge_generator),
                    image_from: c(&e.image_from),
                    image_to: c(&e.image_to),
                    stable_letter: e.stable_letter.as_ref().map(c),
                    ..e.clone()
                })
                .collect(),
            basepoint: self.basepoint,
        }
    }

    fn letters(&self) -> BTreeMap<u32, Word> {
        self.edges.iter().map(|e| (e.id, self.letter(e.id))).collect()
    }

    /// Spanning tree by Kruskal over edges sorted by `(priority, id)`.
    fn choose_tree(&self, priority: impl Fn(&Edge) -> u32) -> BTreeSet<u32> {
        let mut order: Vec<&Edge> = self.edges.iter().collect();
        order.sort_by_key(|e| (priority(e), e.id));
        let mut uf = UnionFind::new(self.vertices.len());
        order
            .into_iter()
            .filter(|e| uf.union(self.vindex(e.from), self.vindex(e.to)))
            .map(|e| e.id)
            .collect()
    }

    /// Re-positions vertex groups so that the edges of `tree` carry trivial
    /// letters. `letters` gives each edge's letter in the current positions.
    fn rebase(&self, letters: &BTreeMap<u32, Word>, tree: &BTreeSet<u32>) -> MarkedGraphOfGroups {
        let root = self.root_vertex();
        let mut offset: BTreeMap<u32, Word> = BTreeMap::from([(root, Word::identity(self.rank))]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| tree.contains(&e.id)) {
                let t = &letters[&e.id];
                if e.from == v && !offset.contains_key(&e.to) {
                    offset.insert(e.to, &offset[&v] * t);
                    queue.push_back(e.to);
                } else if e.to == v && !offset.contains_key(&e.from) {
                    offset.insert(e.from, &offset[&v] * &t.inverse());
                    queue.push_back(e.from);
                }
            }
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                kind: v.kind,
                generators: v.generators.iter().map(|w| w.conjugate_by(&offset[&v.id])).collect(),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (ou, ow) = (&offset[&e.from], &offset[&e.to]);
                let img_from = e.image_from.conjugate_by(ou);
                let t = &(ou * &letters[&e.id]) * &ow.inverse();
                let is_tree = tree.contains(&e.id);
                Edge {
                    id: e.id,
                    from: e.from,
                    to: e.to,
                    edge_generator: img_from.clone(),
                    image_from: img_from,
                    image_to: e.image_to.conjugate_by(ow),
                    tree: is_tree,
                    stable_letter: if is_tree { None } else { Some(t) },
                }
            })
            .collect();
        MarkedGraphOfGroups {
            rank: self.rank,
            vertices,
            edges,
            basepoint: self.basepoint,
        }
    }

    /// Collapses the given edges; merged vertices take the lowest id.
    pub fn collapse(&self, edges: &BTreeSet<u32>) -> Result<(MarkedGraphOfGroups, CollapseMap), GogError> {
        self.require_structure()?;
        if let Some(&e) = edges.iter().find(|&&e| self.edge(e).is_none()) {
            return Err(GogError::UnknownEdge(e));
        }
        let letters = self.letters();
        let tree = self.choose_tree(|e| {
            let trivial = letters[&e.id].is_identity();
            match (edges.contains(&e.id), trivial) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            }
        });
        let g = self.rebase(&letters, &tree);

        let mut uf = UnionFind::new(g.vertices.len());
        for e in g.edges.iter().filter(|e| edges.contains(&e.id)) {
            uf.union(g.vindex(e.from), g.vindex(e.to));
        }
        let mut comps: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for v in &g.vertices {
            comps.entry(uf.find(g.vindex(v.id))).or_default().push(v.id);
        }
        let mut vmap = BTreeMap::new();
        let mut vertices = Vec::new();
        for members in comps.values() {
            let id = *members.iter().min().unwrap();
            for &m in members {
                vmap.insert(m, id);
            }
            let internal: Vec<&Edge> = g
                .edges
                .iter()
                .filter(|e| edges.contains(&e.id) && members.contains(&e.from))
                .collect();
            if internal.is_empty() {
                vertices.push(g.vertex(id).unwrap().clone());
                continue;
            }
            let mut gens: Vec<Word> = members
                .iter()
                .flat_map(|&m| g.vertex(m).unwrap().generators.clone())
                .collect();
            gens.extend(internal.iter().filter(|e| !e.tree).map(|e| g.letter(e.id)));
            vertices.push(Vertex {
                id,
                kind: VertexKind::Rigid,
                generators: CoreGraph::from_generators(self.rank, &gens).free_basis(),
            });
        }
        vertices.sort_by_key(|v| v.id);
        let mut emap = BTreeMap::new();
        let mut out_edges = Vec::new();
        for e in &g.edges {
            if edges.contains(&e.id) {
                emap.insert(e.id, None);
            } else {
                emap.insert(e.id, Some(e.id));
                out_edges.push(Edge {
                    from: vmap[&e.from],
                    to: vmap[&e.to],
                    ..e.clone()
                });
            }
        }
        let out = MarkedGraphOfGroups {
            rank: self.rank,
            vertices,
            edges: out_edges,
            basepoint: self.basepoint.map(|b| vmap[&b]),
        };
        Ok((
            out,
            CollapseMap {
                vertices: vmap,
                edges: emap,
            },
        ))
    }

    /// Quotient graph of groups of the tree of cylinders.
    pub fn tree_of_cylinders(&self) -> Result<MarkedGraphOfGroups, GogError> {
        self.require_structure()?;
        if let Some(e) = self.edges.iter().find(|e| e.edge_generator.is_identity()) {
            return Err(GogError::TrivialEdgeGroup(e.id));
        }
        if self.edges.is_empty() {
            return Ok(self.clone());
        }
        let groups: BTreeMap<u32, CoreGraph> = self.vertices.iter().map(|v| (v.id, self.vertex_group(v.id))).collect();
        let cyclic: BTreeSet<u32> = groups.iter().filter(|(_, g)| g.rank() == 1).map(|(&id, _)| id).collect();

        // edge ends: (vertex, image, root)
        let mut ends = Vec::new();
        for e in &self.edges {
            for (v, img) in [(e.from, &e.image_from), (e.to, &e.image_to)] {
                let (root, _) = img.max_root().expect("nontrivial edge group");
                ends.push((v, img.clone(), root));
            }
        }
        let class_key = |r: &Word| {
            let a = r.conjugacy_representative();
            let b = r.inverse().conjugacy_representative();
            a.min(b)
        };
        let mut classes: Vec<Word> = Vec::new();
        let mut class_of_end = Vec::new();
        for (_, _, root) in &ends {
            let k = class_key(root);
            let idx = classes.iter().position(|c| *c == k).unwrap_or_else(|| {
                classes.push(k);
                classes.len() - 1
            });
            class_of_end.push(idx);
        }
        if self.vertices.iter().all(|v| cyclic.contains(&v.id)) {
            return Err(GogError::NoCylinderVertices);
        }

        // cylinder vertices
        let mut next_id = self.vertices.iter().map(|v| v.id).max().unwrap() + 1;
        let mut cyl_ids = Vec::new();
        let mut cyl_roots = Vec::new();
        for ci in 0..classes.len() {
            let absorbed = ends
                .iter()
                .zip(&class_of_end)
                .filter(|((v, _, _), &c)| c == ci && cyclic.contains(v))
                .map(|((v, _, _), _)| *v)
                .min();
            match absorbed {
                Some(v) => {
                    let gen = self.vertex(v).unwrap().generators.iter().find(|w| !w.is_identity()).unwrap();
                    cyl_ids.push(v);
                    cyl_roots.push(gen.max_root().unwrap().0);
                }
                None => {
                    let first = class_of_end.iter().position(|&c| c == ci).unwrap();
                    cyl_ids.push(next_id);
                    next_id += 1;
                    cyl_roots.push(ends[first].2.clone());
                }
            }
        }

        let mut vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .filter(|v| !cyclic.contains(&v.id))
            .map(|v| Vertex {
                id: v.id,
                kind: match v.kind {
                    VertexKind::ZType | VertexKind::Basepoint => VertexKind::Rigid,
                    k => k,
                },
                generators: v.generators.clone(),
            })
            .collect();
        for (id, root) in cyl_ids.iter().zip(&cyl_roots) {
            vertices.push(Vertex {
                id: *id,
                kind: VertexKind::ZType,
                generators: vec![root.clone()],
            });
        }
        vertices.sort_by_key(|v| v.id);

        // one edge per G_v-orbit of cylinders at each non-absorbed vertex
        let mut new_edges = Vec::new();
        let mut letters = BTreeMap::new();
        for v in self.vertices.iter().filter(|v| !cyclic.contains(&v.id)) {
            let gv = &groups[&v.id];
            let mut reps: Vec<(usize, Word)> = Vec::new();
            for (i, (w, img, root)) in ends.iter().enumerate() {
                if *w != v.id {
                    continue;
                }
                let ci = class_of_end[i];
                let same_orbit = reps.iter().any(|(cj, r1)| {
                    *cj == ci
                        && [root.clone(), root.inverse()].iter().any(|target| {
                            r1.conjugator_to(target)
                                .is_some_and(|g0| gv.coset_meets_cyclic(&g0, r1).is_some())
                        })
                });
                if same_orbit {
                    continue;
                }
                reps.push((ci, root.clone()));
                let m = img.log_base(root).expect("image is a power of its root").unsigned_abs();
                let d = (1..=m).find(|d| m % d == 0 && gv.contains(&root.pow(*d as i64))).unwrap();
                let generator = root.pow(d as i64);
                let rho = &cyl_roots[ci];
                let h = rho
                    .conjugator_to(root)
                    .or_else(|| rho.conjugator_to(&root.inverse()))
                    .expect("roots in one class are conjugate");
                let id = new_edges.len() as u32;
                letters.insert(id, h.clone());
                new_edges.push(Edge {
                    id,
                    from: v.id,
                    to: cyl_ids[ci],
                    edge_generator: generator.clone(),
                    image_from: generator.clone(),
                    image_to: generator.conjugate_by(&h.inverse()),
                    tree: false,
                    stable_letter: Some(h),
                });
            }
        }
        let basepoint = self.basepoint_id().filter(|b| vertices.iter().any(|v| v.id == *b && v.kind != VertexKind::ZType));
        let raw = MarkedGraphOfGroups {
            rank: self.rank,
            vertices,
            edges: new_edges,
            basepoint,
        };
        let tree = raw.choose_tree(|e| u32::from(!letters[&e.id].is_identity()));
        Ok(raw.rebase(&letters, &tree))
    }

    /// Marks the vertex fixed by `<A>`; for cyclic `<A>`, attaches a new
    /// `Basepoint` vertex with group the maximal cyclic subgroup `C(A)`.
    pub fn pointed_jsj(&self, a: &[Word]) -> Result<(MarkedGraphOfGroups, u32), GogError> {
        self.require_structure()?;
        let ha = CoreGraph::from_generators(self.rank, a);
        if ha.is_trivial() {
            return Err(GogError::EmptySubgroup);
        }
        let mut order: Vec<u32> = self.vertices.iter().map(|v| v.id).collect();
        order.sort_unstable();
        if ha.rank() >= 2 {
            for v in order {
                if let Some(g) = ha.conjugator_into(&self.vertex_group(v)) {
                    let mut out = self.conjugate_marking(&g.inverse());
                    out.basepoint = Some(v);
                    return Ok((out, v));
                }
            }
            return Err(GogError::NotElliptic);
        }
        let gen = &ha.free_basis()[0];
        let (root, _) = gen.max_root().expect("nontrivial");
        let c = CoreGraph::from_generators(self.rank, std::slice::from_ref(&root));
        // prefer a vertex whose group is exactly a conjugate of C(A)
        let exact = order.iter().copied().find_map(|v| {
            let gv = self.vertex_group(v);
            if gv.rank() != 1 {
                return None;
            }
            let (r, _) = gv.free_basis()[0].max_root().ok()?;
            let g = root.conjugator_to(&r).or_else(|| root.conjugator_to(&r.inverse()))?;
            gv.contains(&root.conjugate_by(&g)).then_some((v, g))
        });
        let found = exact.or_else(|| {
            order
                .iter()
                .copied()
                .find_map(|v| c.conjugator_into(&self.vertex_group(v)).map(|g| (v, g)))
        });
        let (u, g) = found.ok_or(GogError::NotElliptic)?;
        let mut out = self.conjugate_marking(&g.inverse());
        let bp = out.vertices.iter().map(|v| v.id).max().unwrap() + 1;
        let eid = out.edges.iter().map(|e| e.id).max().map_or(0, |m| m + 1);
        out.vertices.push(Vertex {
            id: bp,
            kind: VertexKind::Basepoint,
            generators: vec![root.clone()],
        });
        out.edges.push(Edge {
            id: eid,
            from: u,
            to: bp,
            edge_generator: root.clone(),
            image_from: root.clone(),
            image_to: root,
            tree: true,
            stable_letter: None,
        });
        out.basepoint = Some(bp);
        Ok((out, bp))
    }

    /// The letter of `F_n` used by symbol `s`.
    pub fn symbol_value(&self, s: Symbol) -> Word {
        match s {
            Symbol::Vertex { vertex, index } => self.vertex(vertex).unwrap().generators[index].clone(),
            Symbol::Stable { edge } => self.letter(edge),
        }
    }

    /// Ids of edges incident to `v`.
    pub fn incident(&self, v: u32) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.from == v || e.to == v).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::freewords::Letter;

    fn w(rank: u32, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    fn vertex(rank: u32, id: u32, kind: VertexKind, gens: &[&str]) -> Vertex {
        Vertex {
            id,
            kind,
            generators: gens.iter().map(|s| w(rank, s)).collect(),
        }
    }

    fn tree_edge(rank: u32, id: u32, from: u32, to: u32, g: &str) -> Edge {
        Edge {
            id,
            from,
            to,
            edge_generator: w(rank, g),
            image_from: w(rank, g),
            image_to: w(rank, g),
            tree: true,
            stable_letter: None,
        }
    }

    pub(crate) fn f2_pointed() -> MarkedGraphOfGroups {
        let s = SurfaceData {
            genus: 1,
            orientable: true,
            boundary: 1,
        };
        MarkedGraphOfGroups {
            rank: 2,
            vertices: vec![
                vertex(2, 0, VertexKind::Basepoint, &["abAB"]),
                vertex(2, 1, VertexKind::ZType, &["abAB"]),
                vertex(2, 2, VertexKind::Surface(s), &["a", "b"]),
            ],
            edges: vec![tree_edge(2, 0, 0, 1, "abAB"), tree_edge(2, 1, 1, 2, "abAB")],
            basepoint: Some(0),
        }
    }

    pub(crate) fn f4_pointed() -> MarkedGraphOfGroups {
        let torus = VertexKind::Surface(SurfaceData {
            genus: 1,
            orientable: true,
            boundary: 1,
        });
        MarkedGraphOfGroups {
            rank: 4,
            vertices: vec![
                vertex(4, 0, VertexKind::Basepoint, &["abAB", "cdCD"]),
                vertex(4, 1, VertexKind::ZType, &["abAB"]),
                vertex(4, 2, torus, &["a", "b"]),
                vertex(4, 3, VertexKind::ZType, &["cdCD"]),
                vertex(4, 4, torus, &["c", "d"]),
            ],
            edges: vec![
                tree_edge(4, 0, 0, 1, "abAB"),
                tree_edge(4, 1, 1, 2, "abAB"),
                tree_edge(4, 2, 0, 3, "cdCD"),
                tree_edge(4, 3, 3, 4, "cdCD"),
            ],
            basepoint: Some(0),
        }
    }

    pub(crate) fn amalgam() -> MarkedGraphOfGroups {
        MarkedGraphOfGroups {
            rank: 3,
            vertices: vec![
                vertex(3, 0, VertexKind::Rigid, &["a", "b"]),
                vertex(3, 1, VertexKind::Rigid, &["b", "c"]),
            ],
            edges: vec![tree_edge(3, 0, 0, 1, "b")],
            basepoint: None,
        }
    }

    pub(crate) fn chain() -> MarkedGraphOfGroups {
        MarkedGraphOfGroups {
            rank: 4,
            vertices: vec![
                vertex(4, 0, VertexKind::Rigid, &["a", "b"]),
                vertex(4, 1, VertexKind::Rigid, &["b", "c"]),
                vertex(4, 2, VertexKind::Rigid, &["c", "d"]),
            ],
            edges: vec![tree_edge(4, 0, 0, 1, "b"), tree_edge(4, 1, 1, 2, "c")],
            basepoint: None,
        }
    }

    pub(crate) fn hnn() -> MarkedGraphOfGroups {
        // vertex <a, baB>, stable letter b with b * a * B = baB
        MarkedGraphOfGroups {
            rank: 2,
            vertices: vec![vertex(2, 0, VertexKind::Rigid, &["a", "baB"])],
            edges: vec![Edge {
                id: 0,
                from: 0,
                to: 0,
                edge_generator: w(2, "baB"),
                image_from: w(2, "baB"),
                image_to: w(2, "a"),
                tree: false,
                stable_letter: Some(w(2, "b")),
            }],
            basepoint: None,
        }
    }

    #[test]
    fn validate_f2_pointed() {
        let r = f2_pointed().validate();
        assert!(r.all_passed(), "{:?}", r.failures());
        let r = f4_pointed().validate();
        assert!(r.all_passed(), "{:?}", r.failures());
    }

    #[test]
    fn validate_detects_sporadic_and_bad_letters() {
        let mut g = f2_pointed();
        g.vertices[2].kind = VertexKind::Surface(SurfaceData {
            genus: 0,
            orientable: true,
            boundary: 3,
        });
        let r = g.validate();
        assert_eq!(r.passed("sporadic_surfaces"), Some(false));

        let mut h = hnn();
        assert!(h.validate().structurally_valid());
        h.edges[0].stable_letter = Some(w(2, "bb"));
        assert_eq!(h.validate().passed("marking_relations"), Some(false));
    }

    #[test]
    fn validate_detects_non_generation() {
        let mut g = amalgam();
        g.vertices[1].generators = vec![w(3, "b"), w(3, "cc")];
        assert_eq!(g.validate().passed("generation"), Some(false));
    }

    #[test]
    fn express_examples() {
        let g = amalgam();
        let nf = g.express(&w(3, "ab")).unwrap();
        assert!(nf.crossings.is_empty());
        assert_eq!(nf.start, 0);
        let nf = g.express(&w(3, "ac")).unwrap();
        let nontrivial: Vec<&Word> = nf.elements.iter().filter(|x| !x.is_identity()).collect();
        assert_eq!(nontrivial, vec![&w(3, "a"), &w(3, "c")]);
        assert_eq!(nf.evaluate(&g), w(3, "ac"));
        let nf = g.express(&w(3, "b")).unwrap();
        assert!(nf.crossings.is_empty());
        assert_eq!(nf.start, 0);
        let nf = g.express(&w(3, "cbC")).unwrap();
        assert!(nf.crossings.is_empty());
        assert_eq!(nf.start, 1);
    }

    #[test]
    fn express_round_trips_generators() {
        for g in [amalgam(), chain(), hnn(), f2_pointed()] {
            for i in 1..=g.rank as Letter {
                let e = Word::generator(g.rank, i);
                assert_eq!(g.express(&e).unwrap().evaluate(&g), e);
                assert_eq!(g.express_rooted(&e).unwrap().evaluate(&g), e);
            }
        }
    }

    #[test]
    fn hnn_express_uses_stable_letter() {
        let g = hnn();
        assert!(g.express(&w(2, "baB")).unwrap().crossings.is_empty());
        assert_eq!(g.express(&w(2, "b")).unwrap().crossings.len(), 1);
        let nf = g.express(&w(2, "bbaBB")).unwrap();
        assert_eq!(nf.crossings.len(), 2);
        assert_eq!(nf.evaluate(&g), w(2, "bbaBB"));
        assert_eq!(g.express(&w(2, "Bab")).unwrap().crossings.len(), 2);
    }

    #[test]
    fn minimal_subgraph_examples() {
        let g = f2_pointed();
        let m = g.minimal_subgraph(&[w(2, "abAB"), w(2, "a")]).unwrap();
        assert_eq!(m.subgraph.vertices, BTreeSet::from([0, 1, 2]));
        let m = g.minimal_subgraph(&[w(2, "abAB")]).unwrap();
        assert_eq!(m.subgraph.vertices, BTreeSet::from([0]));

        let c = chain();
        let m = c.minimal_subgraph(&[w(4, "a"), w(4, "b")]).unwrap();
        assert_eq!(m.subgraph.vertices, BTreeSet::from([0]));
        let m = c.minimal_subgraph(&[w(4, "ad")]).unwrap();
        assert_eq!(m.subgraph.vertices, BTreeSet::from([0, 1, 2]));
        let m = c.minimal_subgraph(&[w(4, "dCDc")]).unwrap();
        assert_eq!(m.subgraph.vertices, BTreeSet::from([2]));
        let m = c.minimal_subgraph(&[w(4, "Aca")]).unwrap();
        assert_eq!(m.subgraph.vertices.len(), 1);
    }

    #[test]
    fn collapse_examples() {
        let c = chain();
        let (all, map) = c.collapse(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(all.vertices.len(), 1);
        assert!(all.vertex_group(0).is_full());
        assert_eq!(map.vertices.values().collect::<BTreeSet<_>>(), BTreeSet::from([&0]));

        let (same, _) = c.collapse(&BTreeSet::new()).unwrap();
        assert_eq!(same, c);

        let (two, map) = c.collapse(&BTreeSet::from([1])).unwrap();
        assert_eq!(two.vertices.len(), 2);
        assert!(two.vertex_group(1).same_subgroup(&CoreGraph::from_generators(4, &[w(4, "b"), w(4, "c"), w(4, "d")])));
        assert_eq!(map.edges[&1], None);
        assert!(two.validate().structurally_valid());
    }

    #[test]
    fn collapse_hnn_loop() {
        let (g, _) = hnn().collapse(&BTreeSet::from([0])).unwrap();
        assert!(g.vertex_group(0).is_full());
        assert!(g.edges.is_empty());
    }

    #[test]
    fn tree_of_cylinders_chain() {
        let t = chain().tree_of_cylinders().unwrap();
        assert!(t.validate().all_passed(), "{:?}", t.validate().failures());
        let z: Vec<&Vertex> = t.vertices.iter().filter(|v| v.kind == VertexKind::ZType).collect();
        assert_eq!(z.len(), 2);
        assert_eq!(z[0].generators, vec![w(4, "b")]);
        assert_eq!(z[1].generators, vec![w(4, "c")]);
        assert_eq!(t.edges.len(), 4);
    }

    #[test]
    fn tree_of_cylinders_of_bipartite_input_is_isomorphic() {
        let mut g = f2_pointed();
        g.vertices.remove(0);
        g.edges.remove(0);
        g.basepoint = None;
        let t = g.tree_of_cylinders().unwrap();
        assert_eq!(t.vertices.len(), 2);
        assert_eq!(t.edges.len(), 1);
        assert!(t.validate().all_passed());
    }

    #[test]
    fn tree_of_cylinders_merges_commensurable_edges() {
        // two edges with generators bb and b at the shared vertex <b, c>
        let g = MarkedGraphOfGroups {
            rank: 4,
            vertices: vec![
                vertex(4, 0, VertexKind::Rigid, &["a", "bb"]),
                vertex(4, 1, VertexKind::Rigid, &["b", "c"]),
                vertex(4, 2, VertexKind::Rigid, &["b", "d"]),
            ],
            edges: vec![tree_edge(4, 0, 0, 1, "bb"), tree_edge(4, 1, 1, 2, "b")],
            basepoint: None,
        };
        assert!(g.validate().structurally_valid(), "{:?}", g.validate().failures());
        let t = g.tree_of_cylinders().unwrap();
        let z = t.vertices.iter().filter(|v| v.kind == VertexKind::ZType).count();
        assert_eq!(z, 1);
        assert_eq!(t.edges.len(), 3);
    }

    #[test]
    fn pointed_jsj_examples() {
        let mut g = f2_pointed();
        g.vertices.remove(0);
        g.edges.remove(0);
        g.basepoint = None;
        let (p, bp) = g.pointed_jsj(&[w(2, "abAB")]).unwrap();
        assert_eq!(p.vertex(bp).unwrap().kind, VertexKind::Basepoint);
        assert_eq!(p.vertices.len(), 3);
        assert!(p.validate().all_passed(), "{:?}", p.validate().failures());

        let (p, bp) = g.pointed_jsj(&[w(2, "a"), w(2, "b")]).unwrap();
        assert_eq!(bp, 2);
        assert_eq!(p.basepoint, Some(2));

        assert_eq!(chain().pointed_jsj(&[w(4, "ad")]), Err(GogError::NotElliptic));
    }

    #[test]
    fn pointed_jsj_conjugates_marking() {
        let c = chain();
        let (p, bp) = c.pointed_jsj(&[w(4, "dcD"), w(4, "dCdcD")]).unwrap();
        assert_eq!(bp, 2);
        assert!(p.vertex_group(2).contains(&w(4, "dcD")));
        assert!(p.validate().structurally_valid());
    }
}
