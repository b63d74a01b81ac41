//! The Farey graph as the curve complex of the once-punctured torus.
//!
//! Slopes are reduced fractions `p/q`, with `1/0` standing for infinity.
//! Matrices act on column vectors `(p, q)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freewords::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    #[error("0/0 is not a slope")]
    ZeroSlope,
    #[error("malformed slope {0:?}")]
    Malformed(String),
    #[error("determinant must be ±1, got {0}")]
    BadDeterminant(i128),
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    p: i128,
    q: i128,
}

impl Slope {
    /// Reduces and canonicalizes the sign.
    pub fn new(p: i128, q: i128) -> Result<Slope, FareyError> {
        if p == 0 && q == 0 {
            return Err(FareyError::ZeroSlope);
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn p(&self) -> i128 {
        self.p
    }

    pub fn q(&self) -> i128 {
        self.q
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Slope, FareyError> {
        let bad = || FareyError::Malformed(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None if s.trim() == "inf" => (1, 0),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Slope::new(p, q)
    }
}

/// Integer matrix `[[a, b], [c, d]]` with determinant ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MappingClass {
    m: [[i128; 2]; 2],
}

impl MappingClass {
    pub fn new(m: [[i128; 2]; 2]) -> Result<MappingClass, FareyError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(FareyError::BadDeterminant(det));
        }
        Ok(MappingClass { m })
    }

    pub const IDENTITY: MappingClass = MappingClass { m: [[1, 0], [0, 1]] };

    /// The hyperbolic class used for ball witnesses.
    pub const ANOSOV: MappingClass = MappingClass { m: [[2, 1], [1, 1]] };

    pub fn matrix(&self) -> [[i128; 2]; 2] {
        self.m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &MappingClass) -> MappingClass {
        let (a, b) = (self.m, other.m);
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MappingClass { m }
    }

    pub fn pow(&self, k: u32) -> MappingClass {
        let mut out = MappingClass::IDENTITY;
        let mut base = *self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        out
    }
}

pub fn adjacent(s: Slope, t: Slope) -> bool {
    (s.p * t.q - s.q * t.p).abs() == 1
}

pub fn act(m: &MappingClass, s: Slope) -> Slope {
    let [[a, b], [c, d]] = m.m;
    Slope::new(a * s.p + b * s.q, c * s.p + d * s.q).expect("invertible matrix maps slopes to slopes")
}

/// Stern–Brocot ancestors of `x` in `(0, 1)`, including `x`.
fn ancestors(x: Slope) -> Vec<Slope> {
    let (mut lo, mut hi) = ((0i128, 1i128), (1i128, 1i128));
    let mut out = Vec::new();
    loop {
        let med = (lo.0 + hi.0, lo.1 + hi.1);
        out.push(Slope { p: med.0, q: med.1 });
        let ord = (x.p * med.1).cmp(&(med.0 * x.q));
        match ord {
            std::cmp::Ordering::Equal => return out,
            std::cmp::Ordering::Less => hi = med,
            std::cmp::Ordering::Greater => lo = med,
        }
    }
}

/// Exact graph distance in the Farey graph.
///
/// Moves `s` to infinity, translates `t` into `[0, 1)`, and runs a BFS over
/// the vertices of the triangles crossed by the hyperbolic geodesic, which
/// contain every Farey geodesic between the endpoints.
pub fn distance(s: Slope, t: Slope) -> u32 {
    if s == t {
        return 0;
    }
    if adjacent(s, t) {
        return 1;
    }
    let (_, a, b) = ext_gcd(s.p, s.q);
    let to_inf = MappingClass { m: [[a, b], [-s.q, s.p]] };
    let x = act(&to_inf, t);
    // x is finite since t != s; shift by the integer part
    let x = Slope::new(x.p.rem_euclid(x.q), x.q).unwrap();
    if x.q == 1 {
        return 1;
    }
    let mut verts = vec![Slope::INFINITY, Slope { p: 0, q: 1 }, Slope { p: 1, q: 1 }];
    verts.extend(ancestors(x));
    let target = verts.iter().position(|&v| v == x).unwrap();
    let mut dist = vec![u32::MAX; verts.len()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if v == target {
            return dist[v];
        }
        for w in 0..verts.len() {
            if dist[w] == u32::MAX && adjacent(verts[v], verts[w]) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    unreachable!("Farey graph is connected")
}

/// `n` powers of the fixed hyperbolic class whose translates of `x` are
/// pairwise more than `2R` apart, so the `R`-balls are disjoint.
pub fn disjoint_ball_witnesses(x: Slope, r: u32, n: u32) -> Vec<MappingClass> {
    let mut step = 1u32;
    loop {
        let classes: Vec<MappingClass> = (0..n).map(|k| MappingClass::ANOSOV.pow(k * step)).collect();
        let images: Vec<Slope> = classes.iter().map(|m| act(m, x)).collect();
        let ok = (0..images.len())
            .all(|i| (i + 1..images.len()).all(|j| distance(images[i], images[j]) > 2 * r));
        if ok {
            return classes;
        }
        step *= 2;
    }
}

/// Christoffel word of slope `p/q`: `q` copies of `a` and `|p|` copies of `b`
/// (`B` when `p < 0`).
pub fn slope_to_word(s: Slope) -> Word {
    let (p, q) = (s.p.abs(), s.q);
    let b = if s.p < 0 { -2 } else { 2 };
    let n = p + q;
    let letters: Vec<i32> = (1..=n)
        .map(|i| if (i * p) / n == ((i - 1) * p) / n { 1 } else { b })
        .collect();
    Word::from_letters(2, letters).expect("letters are in rank 2")
}

/// Neighbours of `s` with all entries bounded by `bound` in absolute value.
pub fn bounded_neighbours(s: Slope, bound: i128) -> Vec<Slope> {
    let mut out = BTreeMap::new();
    for q in 0..=bound {
        for p in -bound..=bound {
            if let Ok(t) = Slope::new(p, q) {
                if t.p.abs() <= bound && adjacent(s, t) {
                    out.insert(t, ());
                }
            }
        }
    }
    out.into_keys().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Slope {
        x.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Slope::new(-2, -4).unwrap(), s("1/2"));
        assert_eq!(Slope::new(-3, 0).unwrap(), Slope::INFINITY);
        assert_eq!(Slope::new(0, 0), Err(FareyError::ZeroSlope));
        assert_eq!(s("3").to_string(), "3/1");
    }

    #[test]
    fn adjacency_examples() {
        assert!(adjacent(s("0/1"), s("1/0")));
        assert!(adjacent(s("0/1"), s("1/1")));
        assert!(!adjacent(s("0/1"), s("2/5")));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(s("0/1"), s("0/1")), 0);
        assert_eq!(distance(s("0/1"), s("1/0")), 1);
        assert_eq!(distance(s("0/1"), s("2/5")), 2);
        assert_eq!(distance(s("1/0"), s("5/2")), 2);
        assert_eq!(distance(s("1/0"), s("7/5")), 3);
    }

    #[test]
    fn act_examples() {
        assert_eq!(act(&MappingClass::IDENTITY, s("3/7")), s("3/7"));
        let t = MappingClass::new([[1, 1], [0, 1]]).unwrap();
        assert_eq!(act(&t, s("0/1")), s("1/1"));
        assert_eq!(act(&MappingClass::ANOSOV, s("0/1")), s("1/1"));
        assert!(MappingClass::new([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn witnesses_examples() {
        for (r, n) in [(0, 2), (1, 3), (2, 4)] {
            let ws = disjoint_ball_witnesses(s("0/1"), r, n);
            assert_eq!(ws.len(), n as usize);
            let imgs: Vec<Slope> = ws.iter().map(|m| act(m, s("0/1"))).collect();
            for i in 0..imgs.len() {
                for j in i + 1..imgs.len() {
                    assert!(distance(imgs[i], imgs[j]) > 2 * r);
                }
            }
        }
    }

    #[test]
    fn slope_words() {
        assert_eq!(slope_to_word(s("0/1")).to_string(), "a");
        assert_eq!(slope_to_word(s("1/0")).to_string(), "b");
        assert_eq!(slope_to_word(s("1/1")).to_string(), "ab");
        assert_eq!(slope_to_word(s("-1/2")).to_string(), "aaB");
    }
}
