//! Seeded generators of decompositions and elementary automorphisms shared
//! by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use forkcalc::elementary::{self, ElementaryAut, EndSide};
use forkcalc::freewords::{Letter, Word};
use forkcalc::graphofgroups::{Edge, MarkedGraphOfGroups, SurfaceData, Vertex, VertexKind};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn w(rank: u32, s: &str) -> Word {
    Word::parse(rank, s).unwrap()
}

pub fn gen(rank: u32, i: u32) -> Word {
    Word::generator(rank, i as Letter)
}

pub fn random_word(rank: u32, len: usize, rng: &mut impl Rng) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let x = rng.gen_range(1..=rank as Letter) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if letters.last() != Some(&-x) {
            letters.push(x);
        }
    }
    Word::from_letters(rank, letters).unwrap()
}

fn tree_edge(id: u32, from: u32, to: u32, g: Word) -> Edge {
    Edge {
        id,
        from,
        to,
        edge_generator: g.clone(),
        image_from: g.clone(),
        image_to: g,
        tree: true,
        stable_letter: None,
    }
}

/// `<x_1..x_s1> -x_s1- <x_s1..x_s2> - ... - <x_sk..x_n>` with random cut points.
pub fn chain(rank: u32, rng: &mut impl Rng) -> MarkedGraphOfGroups {
    let mut interior: Vec<u32> = (2..rank).collect();
    interior.shuffle(rng);
    let k = rng.gen_range(1..=interior.len().max(1));
    let mut cuts: Vec<u32> = interior.into_iter().take(k).collect();
    cuts.push(1);
    cuts.push(rank);
    cuts.sort();
    cuts.dedup();
    let vertices = cuts
        .windows(2)
        .enumerate()
        .map(|(i, c)| Vertex {
            id: i as u32,
            kind: VertexKind::Rigid,
            generators: (c[0]..=c[1]).map(|j| gen(rank, j)).collect(),
        })
        .collect::<Vec<_>>();
    let edges = (0..vertices.len() as u32 - 1)
        .map(|i| tree_edge(i, i, i + 1, gen(rank, cuts[i as usize + 1])))
        .collect();
    MarkedGraphOfGroups {
        rank,
        vertices,
        edges,
        basepoint: None,
    }
}

/// HNN extension of `<x_1..x_{n-1}, x_n x_j X_n>` along `x_j -> x_n x_j X_n`.
pub fn hnn_loop(rank: u32, rng: &mut impl Rng) -> MarkedGraphOfGroups {
    let j = rng.gen_range(1..rank);
    let t = gen(rank, rank);
    let image_from = gen(rank, j).conjugate_by(&t);
    let mut generators: Vec<Word> = (1..rank).map(|i| gen(rank, i)).collect();
    generators.push(image_from.clone());
    MarkedGraphOfGroups {
        rank,
        vertices: vec![Vertex {
            id: 0,
            kind: VertexKind::Rigid,
            generators,
        }],
        edges: vec![Edge {
            id: 0,
            from: 0,
            to: 0,
            edge_generator: image_from.clone(),
            image_from,
            image_to: gen(rank, j),
            tree: false,
            stable_letter: Some(t),
        }],
        basepoint: None,
    }
}

/// A chain or loop of rank 3 to 5, sometimes with a conjugated marking.
pub fn decomposition(rng: &mut impl Rng) -> MarkedGraphOfGroups {
    let rank = rng.gen_range(3..=5);
    let g = if rng.gen_bool(0.6) { chain(rank, rng) } else { hnn_loop(rank, rng) };
    if rng.gen_bool(0.3) {
        let x = random_word(rank, rng.gen_range(1..=2), rng);
        g.conjugate_marking(&x)
    } else {
        g
    }
}

/// Basepoint `<abAB>` - Z `<abAB>` - once-punctured torus `<a, b>`.
pub fn f2_pointed() -> MarkedGraphOfGroups {
    let c = w(2, "abAB");
    MarkedGraphOfGroups {
        rank: 2,
        vertices: vec![
            Vertex { id: 0, kind: VertexKind::Basepoint, generators: vec![c.clone()] },
            Vertex { id: 1, kind: VertexKind::ZType, generators: vec![c.clone()] },
            Vertex { id: 2, kind: VertexKind::Surface(torus()), generators: vec![w(2, "a"), w(2, "b")] },
        ],
        edges: vec![tree_edge(0, 0, 1, c.clone()), tree_edge(1, 1, 2, c)],
        basepoint: Some(0),
    }
}

fn torus() -> SurfaceData {
    SurfaceData {
        genus: 1,
        orientable: true,
        boundary: 1,
    }
}

/// Basepoint `<abAB, cdCD>` with a Z vertex and punctured torus hanging off
/// each commutator.
pub fn f4_pointed() -> MarkedGraphOfGroups {
    let (ab, cd) = (w(4, "abAB"), w(4, "cdCD"));
    let v = |id, kind, gens: &[&str]| Vertex {
        id,
        kind,
        generators: gens.iter().map(|s| w(4, s)).collect(),
    };
    MarkedGraphOfGroups {
        rank: 4,
        vertices: vec![
            v(0, VertexKind::Basepoint, &["abAB", "cdCD"]),
            v(1, VertexKind::ZType, &["abAB"]),
            v(2, VertexKind::Surface(torus()), &["a", "b"]),
            v(3, VertexKind::ZType, &["cdCD"]),
            v(4, VertexKind::Surface(torus()), &["c", "d"]),
        ],
        edges: vec![
            tree_edge(0, 0, 1, ab.clone()),
            tree_edge(1, 1, 2, ab),
            tree_edge(2, 0, 3, cd.clone()),
            tree_edge(3, 3, 4, cd),
        ],
        basepoint: Some(0),
    }
}

pub fn random_twist(g: &MarkedGraphOfGroups, rng: &mut impl Rng) -> ElementaryAut {
    let e = g.edges.choose(rng).unwrap();
    let (root, _) = e.image_from.max_root().unwrap();
    let k = *[-2i64, -1, 1, 2].choose(rng).unwrap();
    let fixed = if rng.gen_bool(0.5) { EndSide::From } else { EndSide::To };
    let lift = if rng.gen_bool(0.3) {
        random_word(g.rank, 1, rng)
    } else {
        Word::identity(g.rank)
    };
    let z = root.pow(k).conjugate_by(&lift);
    elementary::dehn_twist_oriented(g, e.id, &z, fixed, &lift).unwrap()
}

/// Vertex automorphism built from partial conjugations of the vertex
/// generators and transvections of generators that are not edge images.
pub fn random_vertex_aut(g: &MarkedGraphOfGroups, rng: &mut impl Rng) -> Option<ElementaryAut> {
    for _ in 0..20 {
        let v = g.vertices.choose(rng).unwrap();
        let gens = &v.generators;
        let protected: Vec<bool> = gens
            .iter()
            .map(|x| {
                g.edges.iter().any(|e| {
                    (e.from == v.id && (e.image_from == *x || e.image_from == x.inverse()))
                        || (e.to == v.id && (e.image_to == *x || e.image_to == x.inverse()))
                })
            })
            .collect();
        let mut images = gens.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..gens.len());
            let j = rng.gen_range(0..gens.len());
            let y = if rng.gen_bool(0.5) { images[j].clone() } else { images[j].inverse() };
            if i == j {
                continue;
            }
            if protected[i] || rng.gen_bool(0.5) {
                images[i] = images[i].conjugate_by(&y);
            } else if rng.gen_bool(0.5) {
                images[i] = &images[i] * &y;
            } else {
                images[i] = &y * &images[i];
            }
        }
        if let Ok(a) = elementary::vertex_aut(g, v.id, &images, &BTreeMap::new()) {
            return Some(a);
        }
    }
    None
}

pub fn random_elementary(g: &MarkedGraphOfGroups, rng: &mut impl Rng) -> ElementaryAut {
    match rng.gen_range(0..5) {
        0 | 1 => random_twist(g, rng),
        2 | 3 => random_vertex_aut(g, rng).unwrap_or_else(|| random_twist(g, rng)),
        _ => elementary::inner(&random_word(g.rank, rng.gen_range(1..=3), rng)),
    }
}

/// Every reduced word of the given length.
pub fn words_of_length(rank: u32, len: usize) -> Vec<Word> {
    let mut out: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for wd in &out {
            for x in 1..=rank as Letter {
                for s in [x, -x] {
                    if wd.last() != Some(&-s) {
                        let mut n = wd.clone();
                        n.push(s);
                        next.push(n);
                    }
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|l| Word::from_letters(rank, l).unwrap()).collect()
}
