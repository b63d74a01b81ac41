//! Folded core graphs of finitely generated subgroups of `F_n`.
//!
//! Every directed edge carries an annotation: a word in the formal generators
//! `x_1..x_k` of the subgroup (one per input generator). Folding keeps the
//! invariant that reading any closed path at the basepoint and substituting
//! the generators into the product of annotations gives back the path label,
//! so membership queries also produce an expression in the generators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::freewords::{letter_code, Letter, Word};

type Adjacency = BTreeMap<Letter, (usize, Word)>;

/// Folded, core, based Stallings graph. The basepoint is vertex 0.
#[derive(Debug, Clone)]
pub struct CoreGraph {
    rank: u32,
    out: Vec<Adjacency>,
    generators: Vec<Word>,
}

fn formal_rank(k: usize) -> u32 {
    (k as u32).max(1)
}

struct Folder {
    ann_rank: u32,
    out: Vec<Adjacency>,
    redirect: Vec<Option<(usize, Word)>>,
    queue: VecDeque<(usize, Letter, usize, Word)>,
}

impl Folder {
    fn new(ann_rank: u32) -> Self {
        Folder {
            ann_rank,
            out: vec![BTreeMap::new()],
            redirect: vec![None],
            queue: VecDeque::new(),
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.out.push(BTreeMap::new());
        self.redirect.push(None);
        self.out.len() - 1
    }

    /// Follows merges; returns the live vertex and the shift `d` such that
    /// edges leaving the old vertex with annotation `b` now carry `d * b`.
    fn resolve(&self, mut v: usize) -> (usize, Word) {
        let mut shift = Word::identity(self.ann_rank);
        while let Some((next, d)) = &self.redirect[v] {
            shift = d * &shift;
            v = *next;
        }
        (v, shift)
    }

    fn push(&mut self, u: usize, l: Letter, v: usize, a: Word) {
        self.queue.push_back((u, l, v, a));
    }

    fn run(&mut self) {
        while let Some((u, l, v, a)) = self.queue.pop_front() {
            let (u, du) = self.resolve(u);
            let (v, dv) = self.resolve(v);
            let a = &(&du * &a) * &dv.inverse();
            self.insert(u, l, v, a);
        }
    }

    fn insert(&mut self, u: usize, l: Letter, v: usize, a: Word) {
        if let Some((v2, a2)) = self.out[u].get(&l).cloned() {
            if v2 != v {
                // excursion v2 -> u -> v reads a2^-1 a
                if v > v2 {
                    self.merge(v, v2, &a2.inverse() * &a);
                } else {
                    self.merge(v2, v, &a.inverse() * &a2);
                }
            }
            return;
        }
        if let Some((u2, a3)) = self.out[v].get(&-l).cloned() {
            debug_assert_ne!(u2, u);
            // excursion u -> v -> u2 reads a * a3
            if u2 > u {
                self.merge(u2, u, &a * &a3);
            } else {
                self.merge(u, u2, &a3.inverse() * &a.inverse());
            }
            return;
        }
        self.out[u].insert(l, (v, a.clone()));
        self.out[v].insert(-l, (u, a.inverse()));
    }

    /// Merges `x` into `y`; `delta` is the annotation of a path `y -> x`.
    fn merge(&mut self, x: usize, y: usize, delta: Word) {
        let edges = std::mem::take(&mut self.out[x]);
        self.redirect[x] = Some((y, delta));
        for (l, (t, b)) in edges {
            if t != x {
                self.out[t].remove(&-l);
            }
            self.queue.push_back((x, l, t, b));
        }
    }

    fn live(&self, v: usize) -> bool {
        self.redirect[v].is_none()
    }
}

impl CoreGraph {
    /// Folded core graph of `<gens>`. The empty tuple gives the trivial subgroup.
    pub fn from_generators(rank: u32, gens: &[Word]) -> CoreGraph {
        let ann_rank = formal_rank(gens.len());
        let mut f = Folder::new(ann_rank);
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.rank(), rank, "generator rank mismatch");
            let letters = g.letters();
            if letters.is_empty() {
                continue;
            }
            let mut prev = 0usize;
            for (j, &x) in letters.iter().enumerate() {
                let last = j + 1 == letters.len();
                let next = if last { 0 } else { f.add_vertex() };
                let ann = if last {
                    Word::generator(ann_rank, i as Letter + 1)
                } else {
                    Word::identity(ann_rank)
                };
                f.push(prev, x, next, ann);
                prev = next;
            }
        }
        f.run();
        Self::finish(rank, f, gens.to_vec())
    }

    /// Graph from raw positive-labelled edges on vertices `0..n` (basepoint 0),
    /// annotated afterwards by its own spanning-tree basis.
    fn from_edges(rank: u32, n: usize, edges: &[(usize, Letter, usize)]) -> CoreGraph {
        let mut f = Folder::new(1);
        for _ in 1..n {
            f.add_vertex();
        }
        for &(u, l, v) in edges {
            f.push(u, l, v, Word::identity(1));
        }
        f.run();
        let g = Self::finish(rank, f, Vec::new());
        let basis = g.free_basis();
        CoreGraph::from_generators(rank, &basis)
    }

    fn finish(rank: u32, mut f: Folder, generators: Vec<Word>) -> CoreGraph {
        // prune hanging trees away from the basepoint
        let mut changed = true;
        while changed {
            changed = false;
            for v in 1..f.out.len() {
                if f.live(v) && f.out[v].len() <= 1 {
                    if let Some((&l, &(t, _))) = f.out[v].iter().next() {
                        f.out[t].remove(&-l);
                    }
                    f.out[v].clear();
                    f.redirect[v] = Some((0, Word::identity(f.ann_rank)));
                    changed = true;
                }
            }
        }
        // canonical renumbering by BFS in letter-code order
        let mut order = vec![usize::MAX; f.out.len()];
        let mut seq = vec![0usize];
        order[0] = 0;
        let mut head = 0;
        while head < seq.len() {
            let v = seq[head];
            head += 1;
            let mut labels: Vec<Letter> = f.out[v].keys().copied().collect();
            labels.sort_by_key(|&l| letter_code(l));
            for l in labels {
                let t = f.out[v][&l].0;
                if order[t] == usize::MAX {
                    order[t] = seq.len();
                    seq.push(t);
                }
            }
        }
        let out = seq
            .iter()
            .map(|&v| {
                f.out[v]
                    .iter()
                    .map(|(&l, (t, a))| (l, (order[*t], a.clone())))
                    .collect()
            })
            .collect();
        CoreGraph {
            rank,
            out,
            generators,
        }
    }

    pub fn rank_of_ambient(&self) -> u32 {
        self.rank
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    /// Number of (positively oriented) edges.
    pub fn num_edges(&self) -> usize {
        self.out.iter().map(|m| m.keys().filter(|&&l| l > 0).count()).sum()
    }

    /// Rank of the subgroup: first Betti number of the graph.
    pub fn rank(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_edges() == 0
    }

    /// Whether the subgroup is all of `F_n`.
    pub fn is_full(&self) -> bool {
        self.num_vertices() == 1 && self.num_edges() == self.rank as usize
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        self.out[v].get(&l).map(|(t, _)| *t)
    }

    /// Edges `(source, label, target)` with positive labels.
    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut es = Vec::new();
        for (v, m) in self.out.iter().enumerate() {
            for (&l, (t, _)) in m {
                if l > 0 {
                    es.push((v, l, *t));
                }
            }
        }
        es
    }

    fn read(&self, start: usize, w: &Word) -> Option<(usize, Word)> {
        let mut v = start;
        let mut ann = Word::identity(formal_rank(self.generators.len()));
        for &x in w.letters() {
            let (t, a) = self.out[v].get(&x)?;
            ann = &ann * a;
            v = *t;
        }
        Some((v, ann))
    }

    pub fn contains(&self, w: &Word) -> bool {
        matches!(self.read(0, w), Some((0, _)))
    }

    /// An expression of `w` as a word in the formal generators `x_i` (letter
    /// `i+1` stands for `generators()[i]`), or `None` if `w` is not in the
    /// subgroup.
    pub fn express(&self, w: &Word) -> Option<Word> {
        match self.read(0, w) {
            Some((0, ann)) => Some(ann),
            _ => None,
        }
    }

    /// Substitutes the generators into a formal word.
    pub fn evaluate(&self, formal: &Word) -> Word {
        let mut out = Word::identity(self.rank);
        for &x in formal.letters() {
            let g = &self.generators[x.unsigned_abs() as usize - 1];
            out = if x > 0 { &out * g } else { &out * &g.inverse() };
        }
        out
    }

    /// Label of the BFS-tree path from the basepoint to each vertex.
    fn tree_paths(&self) -> (Vec<Word>, BTreeSet<(usize, Letter)>) {
        let mut paths: Vec<Option<Word>> = vec![None; self.out.len()];
        let mut tree = BTreeSet::new();
        paths[0] = Some(Word::identity(self.rank));
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let mut labels: Vec<Letter> = self.out[v].keys().copied().collect();
            labels.sort_by_key(|&l| letter_code(l));
            for l in labels {
                let t = self.out[v][&l].0;
                if paths[t].is_none() {
                    let p = paths[v].as_ref().unwrap() * &Word::generator(self.rank, l);
                    paths[t] = Some(p);
                    tree.insert((v, l));
                    tree.insert((t, -l));
                    queue.push_back(t);
                }
            }
        }
        (paths.into_iter().map(Option::unwrap).collect(), tree)
    }

    /// A free basis read off a BFS spanning tree.
    pub fn free_basis(&self) -> Vec<Word> {
        let (paths, tree) = self.tree_paths();
        let mut basis = Vec::new();
        for (u, l, v) in self.edges() {
            if !tree.contains(&(u, l)) {
                let w = &(&paths[u] * &Word::generator(self.rank, l)) * &paths[v].inverse();
                basis.push(w);
            }
        }
        basis
    }

    /// Core of the fibre product at the basepoints: the intersection subgroup.
    pub fn intersect(&self, other: &CoreGraph) -> CoreGraph {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        index.insert((0, 0), 0);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let mut edges = Vec::new();
        while let Some((p, q)) = queue.pop_front() {
            let id = index[&(p, q)];
            for (&l, (t1, _)) in &self.out[p] {
                if let Some((t2, _)) = other.out[q].get(&l) {
                    let key = (*t1, *t2);
                    let n = index.len();
                    let tid = *index.entry(key).or_insert_with(|| {
                        queue.push_back(key);
                        n
                    });
                    if l > 0 {
                        edges.push((id, l, tid));
                    }
                }
            }
        }
        CoreGraph::from_edges(self.rank, index.len(), &edges)
    }

    /// Same based subgroup (graphs are canonically numbered).
    pub fn same_subgroup(&self, other: &CoreGraph) -> bool {
        self.rank == other.rank
            && self.out.len() == other.out.len()
            && self.out.iter().zip(&other.out).all(|(a, b)| {
                a.len() == b.len()
                    && a.iter().zip(b).all(|((l1, (t1, _)), (l2, (t2, _)))| l1 == l2 && t1 == t2)
            })
    }

    /// Whether `other` is a subgroup of `self`.
    pub fn contains_subgroup(&self, other: &CoreGraph) -> bool {
        other.free_basis().iter().all(|w| self.contains(w))
    }

    /// Cyclic core (basepoint stem removed) and the stem label `p`, so that
    /// the subgroup equals `p * (loops at the core vertex) * p^-1`.
    pub fn cyclic_core(&self) -> CyclicCore {
        let mut v = 0usize;
        let mut stem = Word::identity(self.rank);
        let mut prev: Option<Letter> = None;
        if !self.is_trivial() {
            loop {
                let deg = self.out[v].len();
                let next = self.out[v]
                    .iter()
                    .find(|(&l, _)| Some(-l) != prev)
                    .map(|(&l, (t, _))| (l, *t));
                let hanging = if v == 0 { deg == 1 } else { deg == 2 && prev.is_some() };
                if !hanging {
                    break;
                }
                let (l, t) = next.expect("stem continues");
                stem = &stem * &Word::generator(self.rank, l);
                prev = Some(l);
                v = t;
            }
        }
        // collect vertices of the core: everything except the stem
        let mut stem_vertices = BTreeSet::new();
        let mut u = 0usize;
        for &x in stem.letters() {
            stem_vertices.insert(u);
            u = self.out[u][&x].0;
        }
        let keep: Vec<usize> = (0..self.out.len()).filter(|x| !stem_vertices.contains(x)).collect();
        let mut idx = vec![usize::MAX; self.out.len()];
        for (i, &x) in keep.iter().enumerate() {
            idx[x] = i;
        }
        let out = keep
            .iter()
            .map(|&x| {
                self.out[x]
                    .iter()
                    .filter(|(_, (t, _))| idx[*t] != usize::MAX)
                    .map(|(&l, (t, _))| (l, idx[*t]))
                    .collect()
            })
            .collect();
        CyclicCore {
            rank: self.rank,
            out,
            base: idx[v],
            stem,
        }
    }

    /// Some `g` with `g H g^-1 <= K` where `H = self`, if one exists.
    pub fn conjugator_into(&self, k: &CoreGraph) -> Option<Word> {
        if self.is_trivial() {
            return Some(Word::identity(self.rank));
        }
        let core = self.cyclic_core();
        let (kpaths, _) = k.tree_paths();
        for y in 0..k.out.len() {
            if core.maps_into(k, y) {
                // loops at y are q^-1 K q
                return Some(&kpaths[y] * &core.stem.inverse());
            }
        }
        None
    }

    /// Some `k` (least `|k|`, positive first) with `g * r^k` in the subgroup.
    ///
    /// Reading powers of the cyclic part of `r` through the finite graph is
    /// eventually periodic, so a window of `|g| + |r| + V + 3` on each side
    /// decides the question.
    pub fn coset_meets_cyclic(&self, g: &Word, r: &Word) -> Option<i64> {
        if r.is_identity() {
            return self.contains(g).then_some(0);
        }
        let window = (g.len() + r.len() + self.num_vertices() + 3) as i64;
        let mut pos = g.clone();
        let mut neg = g.clone();
        let rinv = r.inverse();
        if self.contains(g) {
            return Some(0);
        }
        for k in 1..=window {
            pos = &pos * r;
            if self.contains(&pos) {
                return Some(k);
            }
            neg = &neg * &rinv;
            if self.contains(&neg) {
                return Some(-k);
            }
        }
        None
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph core {\n  0 [shape=doublecircle];\n");
        for (u, l, v) in self.edges() {
            let label = Word::generator(self.rank, l).to_string();
            let _ = writeln!(s, "  {u} -> {v} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// A core graph with its hanging stem removed; represents a conjugacy class of
/// subgroups.
#[derive(Debug, Clone)]
pub struct CyclicCore {
    rank: u32,
    out: Vec<BTreeMap<Letter, usize>>,
    base: usize,
    stem: Word,
}

impl CyclicCore {
    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(|m| m.keys().filter(|&&l| l > 0).count()).sum()
    }

    pub fn stem(&self) -> &Word {
        &self.stem
    }

    /// Generator indices appearing as labels.
    pub fn labels_used(&self) -> BTreeSet<u32> {
        self.out
            .iter()
            .flat_map(|m| m.keys().map(|l| l.unsigned_abs()))
            .collect()
    }

    /// Whether the labelled graph maps into `k` sending the core base vertex to `y`.
    fn maps_into(&self, k: &CoreGraph, y: usize) -> bool {
        if self.out.is_empty() {
            return true;
        }
        let mut image = vec![usize::MAX; self.out.len()];
        image[self.base] = y;
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for (&l, &t) in &self.out[v] {
                let Some(kt) = k.target(image[v], l) else {
                    return false;
                };
                if image[t] == usize::MAX {
                    image[t] = kt;
                    queue.push_back(t);
                } else if image[t] != kt {
                    return false;
                }
            }
        }
        true
    }

    /// Encoding invariant under vertex relabelling (least BFS code over all
    /// start vertices).
    pub fn canonical_code(&self) -> Vec<i64> {
        let mut best: Option<Vec<i64>> = None;
        for start in 0..self.out.len() {
            let mut order = vec![usize::MAX; self.out.len()];
            order[start] = 0;
            let mut seq = vec![start];
            let mut code = Vec::new();
            let mut head = 0;
            while head < seq.len() {
                let v = seq[head];
                head += 1;
                let mut labels: Vec<Letter> = self.out[v].keys().copied().collect();
                labels.sort_by_key(|&l| letter_code(l));
                for l in labels {
                    let t = self.out[v][&l];
                    if order[t] == usize::MAX {
                        order[t] = seq.len();
                        seq.push(t);
                    }
                    code.push(i64::from(l));
                    code.push(order[t] as i64);
                }
                code.push(i64::MIN);
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    pub fn rank_of_ambient(&self) -> u32 {
        self.rank
    }
}
