//! Whitehead automorphisms, peak reduction, free-factor tests and the bounded
//! search for free splittings separating two tuples over a common free factor.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::freewords::{code_letter, letter_code, total_cyclic_len, Letter, Word, WordTuple};

fn generators(rank: u32) -> Vec<Word> {
    (1..=rank as Letter).map(|i| Word::generator(rank, i)).collect()
}
use crate::stallings::CoreGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhiteheadError {
    #[error("identity word in tuple")]
    IdentityWord,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: u32, found: u32 },
    #[error("images do not form a basis of the free group")]
    NotInvertible,
    #[error("<A> is not a free factor")]
    NotFreeFactor,
    #[error("rank {0} too large for exhaustive Whitehead moves")]
    RankTooLarge(u32),
}

/// Largest rank for which cut-type moves are enumerated.
pub const MAX_RANK: u32 = 12;

/// An automorphism of `F_n` given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnAutomorphism {
    rank: u32,
    images: Vec<Word>,
}

impl FnAutomorphism {
    /// Checks invertibility by folding the images into a rose.
    pub fn new(rank: u32, images: Vec<Word>) -> Result<Self, WhiteheadError> {
        if images.len() != rank as usize {
            return Err(WhiteheadError::RankMismatch {
                expected: rank,
                found: images.len() as u32,
            });
        }
        if let Some(w) = images.iter().find(|w| w.rank() != rank) {
            return Err(WhiteheadError::RankMismatch {
                expected: rank,
                found: w.rank(),
            });
        }
        if !CoreGraph::from_generators(rank, &images).is_full() {
            return Err(WhiteheadError::NotInvertible);
        }
        Ok(FnAutomorphism { rank, images })
    }

    pub(crate) fn new_unchecked(rank: u32, images: Vec<Word>) -> Self {
        FnAutomorphism { rank, images }
    }

    pub fn identity(rank: u32) -> Self {
        FnAutomorphism {
            rank,
            images: generators(rank),
        }
    }

    /// `x -> g x g^-1`.
    pub fn inner(g: &Word) -> Self {
        let rank = g.rank();
        let images = generators(rank)
            .iter()
            .map(|e| e.conjugate_by(g))
            .collect();
        FnAutomorphism { rank, images }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: u32) -> &Word {
        &self.images[i as usize - 1]
    }

    pub fn apply(&self, w: &Word) -> Word {
        assert_eq!(w.rank(), self.rank, "rank mismatch");
        let mut out = Vec::new();
        for &x in w.letters() {
            let img = &self.images[x.unsigned_abs() as usize - 1];
            if x > 0 {
                out.extend_from_slice(img.letters());
            } else {
                out.extend(img.letters().iter().rev().map(|l| -l));
            }
        }
        Word::reduce_from(self.rank, out)
    }

    pub fn apply_tuple(&self, t: &[Word]) -> WordTuple {
        t.iter().map(|w| self.apply(w)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FnAutomorphism) -> FnAutomorphism {
        FnAutomorphism {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn inverse(&self) -> FnAutomorphism {
        let g = CoreGraph::from_generators(self.rank, &self.images);
        let images = generators(self.rank)
            .iter()
            .map(|e| {
                let formal = g.express(e).expect("automorphism images generate");
                formal.with_rank(self.rank).expect("formal rank equals ambient rank")
            })
            .collect();
        FnAutomorphism {
            rank: self.rank,
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images == generators(self.rank)
    }

    /// The `g` with `self = Conj(g)`, if `self` is inner.
    pub fn inner_conjugator(&self) -> Option<Word> {
        let pairs: Vec<(Word, Word)> = generators(self.rank)
            .into_iter()
            .zip(self.images.iter().cloned())
            .collect();
        solve_common_conjugator(&pairs)
    }
}

/// Some `g` with `g * x * g^-1 = y` for every pair, if one exists.
///
/// Solutions for one pair form a coset `g0 <r>` with `r` the root of `x`;
/// a second pair with non-commuting root pins the exponent exactly.
pub fn solve_common_conjugator(pairs: &[(Word, Word)]) -> Option<Word> {
    let rank = pairs.first()?.0.rank();
    let nontrivial: Vec<&(Word, Word)> = pairs.iter().filter(|(x, _)| !x.is_identity()).collect();
    if pairs.iter().any(|(x, y)| x.is_identity() != y.is_identity()) {
        return None;
    }
    let Some(&(x0, y0)) = nontrivial.first() else {
        return Some(Word::identity(rank));
    };
    let g0 = x0.conjugator_to(y0)?;
    let (r0, _) = x0.max_root().ok()?;
    let mut g = g0.clone();
    for &(x, y) in &nontrivial[1..] {
        if x.commutes_with(&r0) {
            continue;
        }
        let h = x.conjugator_to(y)?;
        let (ri, _) = x.max_root().ok()?;
        let cyc = CoreGraph::from_generators(rank, std::slice::from_ref(&ri));
        let k = cyc.coset_meets_cyclic(&(&h.inverse() * &g0), &r0)?;
        g = &g0 * &r0.pow(k);
        break;
    }
    pairs.iter().all(|(x, y)| x.conjugate_by(&g) == *y).then_some(g)
}

impl fmt::Display for FnAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}->{}", Word::generator(self.rank, i as Letter + 1), w))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Whitehead generator of `Aut(F_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadAut {
    /// `e_i -> perm[i-1]`, a signed permutation.
    Permutation { rank: u32, perm: Vec<Letter> },
    /// Multiplier `a` and subset `Z` (bitmask over letter codes) with `a ∈ Z`, `a^-1 ∉ Z`.
    Cut { rank: u32, multiplier: Letter, z: u64 },
}

fn in_mask(z: u64, l: Letter) -> bool {
    z & (1u64 << letter_code(l)) != 0
}

impl WhiteheadAut {
    pub fn cut(rank: u32, multiplier: Letter, z: &[Letter]) -> Option<Self> {
        let mut mask = 0u64;
        for &l in z {
            mask |= 1 << letter_code(l);
        }
        mask |= 1 << letter_code(multiplier);
        if in_mask(mask, -multiplier) {
            return None;
        }
        Some(WhiteheadAut::Cut {
            rank,
            multiplier,
            z: mask,
        })
    }

    pub fn to_automorphism(&self) -> FnAutomorphism {
        match self {
            WhiteheadAut::Permutation { rank, perm } => FnAutomorphism::new_unchecked(
                *rank,
                perm.iter().map(|&l| Word::generator(*rank, l)).collect(),
            ),
            WhiteheadAut::Cut { rank, multiplier, z } => {
                let a = *multiplier;
                let images = (1..=*rank as Letter)
                    .map(|x| {
                        if x == a.abs() {
                            return Word::generator(*rank, x);
                        }
                        let mut ls = Vec::new();
                        if in_mask(*z, -x) {
                            ls.push(-a);
                        }
                        ls.push(x);
                        if in_mask(*z, x) {
                            ls.push(a);
                        }
                        Word::reduce_from(*rank, ls)
                    })
                    .collect();
                FnAutomorphism::new_unchecked(*rank, images)
            }
        }
    }

    /// All nontrivial cut-type moves in tie-break order.
    pub fn all_cuts(rank: u32) -> Vec<WhiteheadAut> {
        let letters: Vec<Letter> = (1..=rank as Letter).flat_map(|i| [i, -i]).collect();
        let mut out = Vec::new();
        for &a in &letters {
            let others: Vec<Letter> = letters.iter().copied().filter(|&l| l.abs() != a.abs()).collect();
            for sub in 1u64..(1 << others.len()) {
                let mut mask = 1u64 << letter_code(a);
                for (i, &l) in others.iter().enumerate() {
                    if sub & (1 << i) != 0 {
                        mask |= 1 << letter_code(l);
                    }
                }
                out.push(WhiteheadAut::Cut {
                    rank,
                    multiplier: a,
                    z: mask,
                });
            }
        }
        out.sort_by_key(|w| match w {
            WhiteheadAut::Cut { multiplier, z, .. } => (letter_code(*multiplier), *z),
            WhiteheadAut::Permutation { .. } => (usize::MAX, 0),
        });
        out
    }

    fn fixes_letters(&self, m: u32) -> bool {
        // preserves <e_1..e_m> setwise
        match self {
            WhiteheadAut::Permutation { perm, .. } => {
                perm[..m as usize].iter().all(|l| l.unsigned_abs() <= m)
            }
            WhiteheadAut::Cut { multiplier, z, .. } => {
                multiplier.unsigned_abs() <= m
                    || (1..=m as Letter).all(|x| !in_mask(*z, x) && !in_mask(*z, -x))
            }
        }
    }
}

/// Multigraph on the `2n` letters with an edge `{x^-1, y}` per cyclic adjacency `x y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadGraph {
    rank: u32,
    edges: Vec<(Letter, Letter)>,
}

pub fn whitehead_graph(t: &[Word]) -> Result<WhiteheadGraph, WhiteheadError> {
    let rank = t.first().map_or(1, Word::rank);
    let mut edges = Vec::new();
    for w in t {
        if w.is_identity() {
            return Err(WhiteheadError::IdentityWord);
        }
        let c = w.cyclic_core();
        let ls = c.letters();
        for i in 0..ls.len() {
            let x = ls[i];
            let y = ls[(i + 1) % ls.len()];
            let (p, q) = if letter_code(-x) <= letter_code(y) { (-x, y) } else { (y, -x) };
            edges.push((p, q));
        }
    }
    edges.sort_by_key(|&(p, q)| (letter_code(p), letter_code(q)));
    Ok(WhiteheadGraph { rank, edges })
}

impl WhiteheadGraph {
    pub fn edges(&self) -> &[(Letter, Letter)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        let n = 2 * self.rank as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, letter_code(a)), find(&mut parent, letter_code(b)));
            parent[ra] = rb;
        }
        let r = find(&mut parent, 0);
        (0..n).all(|x| find(&mut parent, x) == r)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph whitehead {\n");
        for code in 0..2 * self.rank as usize {
            let l = code_letter(code);
            s.push_str(&format!("  \"{}\";\n", Word::generator(self.rank, l)));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                Word::generator(self.rank, a),
                Word::generator(self.rank, b)
            ));
        }
        s.push_str("}\n");
        s
    }
}

fn check_rank(t: &[Word]) -> Result<(), WhiteheadError> {
    if let Some(r) = t.first().map(Word::rank) {
        if r > MAX_RANK {
            return Err(WhiteheadError::RankTooLarge(r));
        }
        if let Some(w) = t.iter().find(|w| w.rank() != r) {
            return Err(WhiteheadError::RankMismatch {
                expected: r,
                found: w.rank(),
            });
        }
    }
    Ok(())
}

/// Greedy peak reduction of the total cyclic length.
///
/// Returns the minimized tuple (cyclically reduced words) and `phi` with
/// `phi(t_i)` conjugate to the `i`-th output word.
pub fn minimize(rank: u32, t: &[Word]) -> Result<(WordTuple, FnAutomorphism), WhiteheadError> {
    check_rank(t)?;
    if rank > MAX_RANK {
        return Err(WhiteheadError::RankTooLarge(rank));
    }
    let moves: Vec<FnAutomorphism> = WhiteheadAut::all_cuts(rank).iter().map(|m| m.to_automorphism()).collect();
    let mut phi = FnAutomorphism::identity(rank);
    let mut cur: WordTuple = t.iter().map(Word::cyclic_core).collect();
    let mut len = total_cyclic_len(&cur);
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (i, m) in moves.iter().enumerate() {
            let l = cur.iter().map(|w| m.apply(w).cyclic_len()).sum::<usize>();
            if l < len && best.is_none_or(|(_, bl)| l < bl) {
                best = Some((i, l));
            }
        }
        let Some((i, l)) = best else { break };
        cur = cur.iter().map(|w| moves[i].apply(w).cyclic_core()).collect();
        phi = moves[i].compose(&phi);
        len = l;
    }
    Ok((cur, phi))
}

fn volume(rank: u32, basis: &[Word]) -> usize {
    CoreGraph::from_generators(rank, basis).cyclic_core().num_edges()
}

/// Greedy descent of the cyclic-core volume of `<basis>`; returns the
/// minimizing automorphism and the image basis.
fn minimize_subgroup(rank: u32, basis: &[Word], moves: &[FnAutomorphism]) -> (FnAutomorphism, Vec<Word>) {
    let mut phi = FnAutomorphism::identity(rank);
    let mut cur = basis.to_vec();
    let mut vol = volume(rank, &cur);
    loop {
        let mut best: Option<(usize, usize, Vec<Word>)> = None;
        for (i, m) in moves.iter().enumerate() {
            let img = m.apply_tuple(&cur);
            let v = volume(rank, &img);
            if v < vol && best.as_ref().is_none_or(|(_, bv, _)| v < *bv) {
                best = Some((i, v, img));
            }
        }
        let Some((i, v, img)) = best else { break };
        phi = moves[i].compose(&phi);
        cur = img;
        vol = v;
    }
    (phi, cur)
}

/// Whether `t` extends to a basis of `F_n`; when it does, `psi` with
/// `psi(t_i) = e_{s_i}` for distinct indices `s_i`.
pub fn is_part_of_basis(rank: u32, t: &[Word]) -> Result<Option<FnAutomorphism>, WhiteheadError> {
    check_rank(t)?;
    if rank > MAX_RANK {
        return Err(WhiteheadError::RankTooLarge(rank));
    }
    if t.is_empty() {
        return Ok(Some(FnAutomorphism::identity(rank)));
    }
    let h = CoreGraph::from_generators(rank, t);
    if h.rank() != t.len() {
        return Ok(None);
    }
    let moves: Vec<FnAutomorphism> = WhiteheadAut::all_cuts(rank).iter().map(|m| m.to_automorphism()).collect();
    let (phi, img) = minimize_subgroup(rank, t, &moves);
    let g = CoreGraph::from_generators(rank, &img);
    let core = g.cyclic_core();
    if core.num_vertices() != 1 || core.num_edges() != t.len() {
        return Ok(None);
    }
    // phi(<t>) = p <e_S> p^-1
    let p = core.stem().clone();
    let psi1 = FnAutomorphism::inner(&p.inverse()).compose(&phi);
    let u: Vec<Word> = psi1.apply_tuple(t);
    let s: Vec<u32> = core.labels_used().into_iter().collect();
    let ug = CoreGraph::from_generators(rank, &u);
    let mut images = generators(rank);
    let targets: Vec<Word> = s.iter().map(|&i| Word::generator(rank, i as Letter)).collect();
    for &i in &s {
        let formal = ug
            .express(&Word::generator(rank, i as Letter))
            .expect("free factor generator lies in the subgroup");
        let mut ls = Vec::new();
        for &x in formal.letters() {
            let e = &targets[x.unsigned_abs() as usize - 1];
            if x > 0 {
                ls.extend_from_slice(e.letters());
            } else {
                ls.extend(e.letters().iter().rev().map(|l| -l));
            }
        }
        images[i as usize - 1] = Word::reduce_from(rank, ls);
    }
    let beta = FnAutomorphism::new_unchecked(rank, images);
    Ok(Some(beta.compose(&psi1)))
}

/// Plateau states explored before giving up on finding a letter-omitting graph.
pub const PLATEAU_CAP: usize = 4000;

/// Whether `<t>` lies in a proper free factor of `F_n`.
pub fn is_in_proper_free_factor(rank: u32, t: &[Word]) -> Result<bool, WhiteheadError> {
    check_rank(t)?;
    if rank > MAX_RANK {
        return Err(WhiteheadError::RankTooLarge(rank));
    }
    let h = CoreGraph::from_generators(rank, t);
    if h.is_trivial() {
        return Ok(true);
    }
    if h.is_full() {
        return Ok(false);
    }
    let moves: Vec<FnAutomorphism> = WhiteheadAut::all_cuts(rank).iter().map(|m| m.to_automorphism()).collect();
    let basis = h.free_basis();
    let (_, start) = minimize_subgroup(rank, &basis, &moves);
    let vol = volume(rank, &start);
    let omits = |b: &[Word]| {
        CoreGraph::from_generators(rank, b).cyclic_core().labels_used().len() < rank as usize
    };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(CoreGraph::from_generators(rank, &start).cyclic_core().canonical_code());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        if omits(&cur) {
            return Ok(true);
        }
        if seen.len() > PLATEAU_CAP {
            break;
        }
        for m in &moves {
            let img = m.apply_tuple(&cur);
            let g = CoreGraph::from_generators(rank, &img);
            let core = g.cyclic_core();
            if core.num_edges() != vol {
                continue;
            }
            if seen.insert(core.canonical_code()) {
                queue.push_back(img);
            }
        }
    }
    Ok(false)
}

/// Positive witness of a free splitting `F_n = <e_{I_F}> * <e_{I_A}> * <e_{I_F'}>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub phi: FnAutomorphism,
    pub i_f: Vec<u32>,
    pub i_a: Vec<u32>,
    pub i_f_prime: Vec<u32>,
}

/// Why no splitting exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForksCertificate {
    /// `<A,b> ∩ <A,c>` has an element outside `<A>`.
    Intersection { witness: Word },
    /// One side is not contained in a proper free factor while the other leaves `<A>`.
    Filling { filling_side: Side, escaping: Word },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitDecision {
    Independent(SplitWitness),
    Forks(ForksCertificate),
    Unknown(u32),
}

impl SplitDecision {
    pub fn verdict(&self) -> &'static str {
        match self {
            SplitDecision::Independent(_) => "independent",
            SplitDecision::Forks(_) => "forks",
            SplitDecision::Unknown(_) => "unknown",
        }
    }
}

/// States visited by the bounded search before it reports `Unknown`.
pub const SEARCH_CAP: usize = 20000;

fn sub_basis(rank: u32, idx: impl IntoIterator<Item = u32>) -> Vec<Word> {
    idx.into_iter().map(|i| Word::generator(rank, i as Letter)).collect()
}

fn support(ws: &[Word]) -> BTreeSet<u32> {
    ws.iter().flat_map(|w| w.support()).collect()
}

/// Bounded search for `phi` separating `b` and `c` over the free factor `<A>`.
pub fn independent_split_search(
    rank: u32,
    a: &[Word],
    b: &[Word],
    c: &[Word],
    depth: u32,
) -> Result<SplitDecision, WhiteheadError> {
    for t in [a, b, c] {
        check_rank(t)?;
        if let Some(w) = t.first() {
            if w.rank() != rank {
                return Err(WhiteheadError::RankMismatch {
                    expected: rank,
                    found: w.rank(),
                });
            }
        }
    }
    let basis_a = CoreGraph::from_generators(rank, a).free_basis();
    let m = basis_a.len() as u32;
    let psi = is_part_of_basis(rank, &basis_a)?.ok_or(WhiteheadError::NotFreeFactor)?;
    // relabel so that <A> goes to <e_1..e_m>
    let s: Vec<u32> = basis_a
        .iter()
        .map(|w| psi.apply(w).letters()[0].unsigned_abs())
        .collect();
    let mut perm = vec![0 as Letter; rank as usize];
    let mut next = m + 1;
    for i in 1..=rank {
        let target = match s.iter().position(|&x| x == i) {
            Some(p) => p as u32 + 1,
            None => {
                next += 1;
                next - 1
            }
        };
        perm[i as usize - 1] = target as Letter;
    }
    let pi = WhiteheadAut::Permutation { rank, perm }.to_automorphism();
    let phi0 = pi.compose(&psi);

    let a_idx: Vec<u32> = (1..=m).collect();
    let ga = CoreGraph::from_generators(rank, &sub_basis(rank, a_idx.clone()));
    let nb = phi0.apply_tuple(b);
    let nc = phi0.apply_tuple(c);

    // negative certificates, in normalized coordinates
    let mut gen_b = sub_basis(rank, a_idx.clone());
    gen_b.extend(nb.iter().cloned());
    let mut gen_c = sub_basis(rank, a_idx.clone());
    gen_c.extend(nc.iter().cloned());
    let hb = CoreGraph::from_generators(rank, &gen_b);
    let hc = CoreGraph::from_generators(rank, &gen_c);
    let inter = hb.intersect(&hc);
    if let Some(w) = inter.free_basis().into_iter().find(|w| !ga.contains(w)) {
        let back = phi0.inverse().apply(&w);
        return Ok(SplitDecision::Forks(ForksCertificate::Intersection { witness: back }));
    }
    for (side, mine, theirs, orig_theirs) in [(Side::B, &gen_b, &nc, c), (Side::C, &gen_c, &nb, b)] {
        if let Some(pos) = theirs.iter().position(|w| !ga.contains(w)) {
            if !is_in_proper_free_factor(rank, mine)? {
                return Ok(SplitDecision::Forks(ForksCertificate::Filling {
                    filling_side: side,
                    escaping: orig_theirs[pos].clone(),
                }));
            }
        }
    }

    // search over automorphisms preserving <e_1..e_m>
    let moves: Vec<FnAutomorphism> = WhiteheadAut::all_cuts(rank)
        .into_iter()
        .filter(|w| w.fixes_letters(m))
        .map(|w| w.to_automorphism())
        .collect();
    let split = |phi: &FnAutomorphism, bs: &[Word], cs: &[Word]| -> Option<SplitDecision> {
        let sb: BTreeSet<u32> = support(bs).into_iter().filter(|&i| i > m).collect();
        let sc: BTreeSet<u32> = support(cs).into_iter().filter(|&i| i > m).collect();
        if sb.is_disjoint(&sc) {
            let i_f: Vec<u32> = sb.into_iter().collect();
            let i_f_prime: Vec<u32> = (m + 1..=rank).filter(|i| !i_f.contains(i)).collect();
            Some(SplitDecision::Independent(SplitWitness {
                phi: phi.compose(&phi0),
                i_f,
                i_a: a_idx.clone(),
                i_f_prime,
            }))
        } else {
            None
        }
    };
    let total = |bs: &[Word], cs: &[Word]| bs.iter().chain(cs).map(Word::len).sum::<usize>();

    let mut phi = FnAutomorphism::identity(rank);
    let mut bs = nb;
    let mut cs = nc;
    let mut best = total(&bs, &cs);
    loop {
        if let Some(d) = split(&phi, &bs, &cs) {
            return Ok(d);
        }
        // strict descent
        let mut improved = false;
        for mv in &moves {
            let (b2, c2) = (mv.apply_tuple(&bs), mv.apply_tuple(&cs));
            let l = total(&b2, &c2);
            if l < best {
                phi = mv.compose(&phi);
                bs = b2;
                cs = c2;
                best = l;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        // plateau exploration up to `depth` moves
        let mut seen: HashSet<(WordTuple, WordTuple)> = HashSet::new();
        seen.insert((bs.clone(), cs.clone()));
        let mut frontier = vec![(phi.clone(), bs.clone(), cs.clone())];
        let mut lower: Option<(FnAutomorphism, WordTuple, WordTuple, usize)> = None;
        'levels: for _ in 0..depth {
            let mut next_frontier = Vec::new();
            for (p, x, y) in &frontier {
                for mv in &moves {
                    let (b2, c2) = (mv.apply_tuple(x), mv.apply_tuple(y));
                    let l = total(&b2, &c2);
                    if l > best || !seen.insert((b2.clone(), c2.clone())) {
                        continue;
                    }
                    let p2 = mv.compose(p);
                    if let Some(d) = split(&p2, &b2, &c2) {
                        return Ok(d);
                    }
                    if l < best {
                        lower = Some((p2, b2, c2, l));
                        break 'levels;
                    }
                    next_frontier.push((p2, b2, c2));
                    if seen.len() > SEARCH_CAP {
                        break 'levels;
                    }
                }
            }
            frontier = next_frontier;
            if frontier.is_empty() {
                break;
            }
        }
        match lower {
            Some((p, x, y, l)) => {
                phi = p;
                bs = x;
                cs = y;
                best = l;
            }
            None => return Ok(SplitDecision::Unknown(depth)),
        }
    }
}

/// Re-checks an `Independent` decision through subgroup membership.
pub fn verify_split_witness(rank: u32, decision: &SplitDecision, a: &[Word], b: &[Word], c: &[Word]) -> bool {
    let SplitDecision::Independent(w) = decision else {
        return false;
    };
    if w.phi.rank() != rank || FnAutomorphism::new(rank, w.phi.images().to_vec()).is_err() {
        return false;
    }
    let mut all: Vec<u32> = w.i_f.iter().chain(&w.i_a).chain(&w.i_f_prime).copied().collect();
    all.sort_unstable();
    if all != (1..=rank).collect::<Vec<_>>() {
        return false;
    }
    let ga = CoreGraph::from_generators(rank, &sub_basis(rank, w.i_a.iter().copied()));
    let img_a = CoreGraph::from_generators(rank, &w.phi.apply_tuple(a));
    if !img_a.same_subgroup(&ga) {
        return false;
    }
    let gb = CoreGraph::from_generators(rank, &sub_basis(rank, w.i_f.iter().chain(&w.i_a).copied()));
    let gc = CoreGraph::from_generators(rank, &sub_basis(rank, w.i_a.iter().chain(&w.i_f_prime).copied()));
    b.iter().all(|x| gb.contains(&w.phi.apply(x))) && c.iter().all(|x| gc.contains(&w.phi.apply(x)))
}
