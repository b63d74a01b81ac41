//! Reduced words in a free group `F_n = <e_1, ..., e_n>`.
//!
//! Letters are nonzero signed generator indices: `+i` is `e_i`, `-i` is its
//! inverse. For ranks up to 26 words print as ASCII letters (`a` = `e_1`,
//! `A` = `e_1^-1`); larger ranks print as a bracketed signed list `[1 -2 3]`.
//! The identity prints as `1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

/// A signed generator index.
pub type Letter = i32;

/// An ordered tuple of words over one alphabet.
pub type WordTuple = Vec<Word>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u32, u32),
    #[error("letter {letter} outside alphabet of rank {rank}")]
    LetterOutOfRange { letter: Letter, rank: u32 },
    #[error("malformed word {0:?}")]
    Malformed(String),
    #[error("the identity has no root")]
    IdentityRoot,
}

/// The generating alphabet of a free group of finite rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: u32,
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Self, WordError> {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    /// All `2n` letters in the order `1, -1, 2, -2, ...`.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (1..=self.rank as Letter).flat_map(|i| [i, -i])
    }

    pub fn generators(self) -> Vec<Word> {
        (1..=self.rank as Letter)
            .map(|i| Word::generator(self.rank, i))
            .collect()
    }
}

/// Dense index of a letter in `0..2n`: `e_i -> 2(i-1)`, `e_i^-1 -> 2(i-1)+1`.
pub fn letter_code(x: Letter) -> usize {
    let i = x.unsigned_abs() as usize - 1;
    2 * i + usize::from(x < 0)
}

/// Inverse of [`letter_code`].
pub fn code_letter(code: usize) -> Letter {
    let i = (code / 2) as Letter + 1;
    if code.is_multiple_of(2) {
        i
    } else {
        -i
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: u32,
    letters: Vec<Letter>,
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order on signed indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

fn push_reduced(buf: &mut Vec<Letter>, x: Letter) {
    if buf.last() == Some(&-x) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

impl Word {
    pub fn identity(rank: u32) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The generator `e_i^{sign(x)}` for a signed index `x`.
    pub fn generator(rank: u32, x: Letter) -> Word {
        assert!(x != 0 && x.unsigned_abs() <= rank, "letter out of range");
        Word {
            rank,
            letters: vec![x],
        }
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters<I>(rank: u32, letters: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        if rank == 0 {
            return Err(WordError::ZeroRank);
        }
        let mut buf = Vec::new();
        for x in letters {
            if x == 0 || x.unsigned_abs() > rank {
                return Err(WordError::LetterOutOfRange { letter: x, rank });
            }
            push_reduced(&mut buf, x);
        }
        Ok(Word { rank, letters: buf })
    }

    /// Internal constructor for letters already known to be in range.
    pub(crate) fn reduce_from(rank: u32, letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut buf = Vec::new();
        for x in letters {
            debug_assert!(x != 0 && x.unsigned_abs() <= rank);
            push_reduced(&mut buf, x);
        }
        Word { rank, letters: buf }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters read in a different rank context (must fit).
    pub fn with_rank(&self, rank: u32) -> Result<Word, WordError> {
        Word::from_letters(rank, self.letters.iter().copied())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch(self.rank, other.rank));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Word) -> Word {
        let mut buf = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut buf, x);
        }
        Word {
            rank: self.rank,
            letters: buf,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &x in &base.letters {
                push_reduced(&mut buf, x);
            }
        }
        Word {
            rank: self.rank,
            letters: buf,
        }
    }

    /// `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        &(g * self) * &g.inverse()
    }

    /// `u = conjugator * core * conjugator^-1` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        let mut j = l.len();
        while j >= i + 2 && l[i] == -l[j - 1] {
            i += 1;
            j -= 1;
        }
        (
            Word {
                rank: self.rank,
                letters: l[i..j].to_vec(),
            },
            Word {
                rank: self.rank,
                letters: l[..i].to_vec(),
            },
        )
    }

    pub fn cyclic_core(&self) -> Word {
        self.cyclic_reduce().0
    }

    pub fn cyclic_len(&self) -> usize {
        self.cyclic_reduce().0.len()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1]
    }

    /// Rotation `letters[k..] ++ letters[..k]` (no reduction performed).
    fn rotation(&self, k: usize) -> Vec<Letter> {
        let mut v = self.letters[k..].to_vec();
        v.extend_from_slice(&self.letters[..k]);
        v
    }

    /// Least rotation (lexicographic on signed indices) of the cyclic core,
    /// together with the offset at which it starts.
    fn least_rotation(core: &Word) -> (Vec<Letter>, usize) {
        let n = core.letters.len();
        if n == 0 {
            return (Vec::new(), 0);
        }
        // Booth's algorithm.
        let s: Vec<Letter> = core.letters.iter().chain(core.letters.iter()).copied().collect();
        let mut f = vec![usize::MAX; 2 * n];
        let mut k = 0usize;
        for j in 1..2 * n {
            let sj = s[j];
            let mut i = f[j - k - 1];
            while i != usize::MAX && sj != s[k + i + 1] {
                if sj < s[k + i + 1] {
                    k = j - i - 1;
                }
                i = f[i];
            }
            if i == usize::MAX && sj != s[k] {
                if sj < s[k] {
                    k = j;
                }
                f[j - k] = usize::MAX;
            } else {
                f[j - k] = if i == usize::MAX { 0 } else { i + 1 };
            }
        }
        (core.rotation(k), k)
    }

    /// Canonical representative of the conjugacy class: least rotation of the
    /// cyclically reduced core.
    pub fn conjugacy_representative(&self) -> Word {
        let core = self.cyclic_core();
        let (letters, _) = Word::least_rotation(&core);
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn is_conjugate(&self, other: &Word) -> bool {
        self.rank == other.rank
            && self.conjugacy_representative().letters == other.conjugacy_representative().letters
    }

    /// Some `g` with `g * self * g^-1 = other`, if the two are conjugate.
    pub fn conjugator_to(&self, other: &Word) -> Option<Word> {
        if self.rank != other.rank {
            return None;
        }
        let (c1, g1) = self.cyclic_reduce();
        let (c2, g2) = other.cyclic_reduce();
        if c1.len() != c2.len() {
            return None;
        }
        if c1.is_empty() {
            return Some(Word::identity(self.rank));
        }
        let n = c1.len();
        // c2 = rotation of c1 by k: c1 = x y, c2 = y x = x^-1 c1 x.
        let k = (0..n).find(|&k| c1.rotation(k) == c2.letters)?;
        let x = Word {
            rank: self.rank,
            letters: c1.letters[..k].to_vec(),
        };
        Some(&(&g2 * &x.inverse()) * &g1.inverse())
    }

    /// `u = root^exponent` with `root` not a proper power.
    pub fn max_root(&self) -> Result<(Word, u32), WordError> {
        if self.is_identity() {
            return Err(WordError::IdentityRoot);
        }
        let (core, conj) = self.cyclic_reduce();
        let n = core.len();
        let period = (1..=n)
            .find(|&p| n % p == 0 && (p..n).all(|i| core.letters[i] == core.letters[i - p]))
            .unwrap_or(n);
        let root_core = Word {
            rank: self.rank,
            letters: core.letters[..period].to_vec(),
        };
        Ok((root_core.conjugate_by(&conj), (n / period) as u32))
    }

    /// Whether `self` and `other` commute, i.e. are powers of a common root.
    pub fn commutes_with(&self, other: &Word) -> bool {
        (self * other) == (other * self)
    }

    /// Exponent `k` with `self = base^k`, if one exists. `base` nontrivial.
    pub fn log_base(&self, base: &Word) -> Option<i64> {
        if self.is_identity() {
            return Some(0);
        }
        let (r, e) = base.max_root().ok()?;
        let (s, f) = self.max_root().ok()?;
        let sign = if s == r {
            1
        } else if s == r.inverse() {
            -1
        } else {
            return None;
        };
        if f % e != 0 {
            return None;
        }
        Some(sign * i64::from(f / e))
    }

    /// Letters used, as generator indices `1..=n` (unsigned).
    pub fn support(&self) -> std::collections::BTreeSet<u32> {
        self.letters.iter().map(|x| x.unsigned_abs()).collect()
    }

    pub fn parse(rank: u32, text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Word::from_letters(rank, std::iter::empty());
        }
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| WordError::Malformed(text.to_string()))?;
            let mut letters = Vec::new();
            for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let x: Letter = tok
                    .parse()
                    .map_err(|_| WordError::Malformed(text.to_string()))?;
                letters.push(x);
            }
            return Word::from_letters(rank, letters);
        }
        let mut letters = Vec::with_capacity(t.len());
        for c in t.chars() {
            let x = match c {
                'a'..='z' => (c as u8 - b'a' + 1) as Letter,
                'A'..='Z' => -((c as u8 - b'A' + 1) as Letter),
                _ => return Err(WordError::Malformed(text.to_string())),
            };
            letters.push(x);
        }
        Word::from_letters(rank, letters)
    }
}

/// Parses a comma-separated tuple; the empty string is the empty tuple.
pub fn parse_tuple(rank: u32, text: &str) -> Result<WordTuple, WordError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    if t.starts_with('[') && t.contains("],") {
        // List of bracketed words: "[1 2],[3]".
        return t
            .split_inclusive(']')
            .map(|s| s.trim_start_matches(',').trim())
            .filter(|s| !s.is_empty())
            .map(|s| Word::parse(rank, s))
            .collect();
    }
    t.split(',').map(|s| Word::parse(rank, s)).collect()
}

pub fn format_tuple(t: &[Word]) -> String {
    t.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}

/// Total length of the cyclic cores of a tuple.
pub fn total_cyclic_len(t: &[Word]) -> usize {
    t.iter().map(Word::cyclic_len).sum()
}

impl Mul<&Word> for &Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::multiply`] for a checked product.
    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        self.mul_unchecked(rhs)
    }
}

impl Mul<Word> for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        if self.rank <= 26 {
            for &x in &self.letters {
                let c = if x > 0 {
                    (b'a' + (x - 1) as u8) as char
                } else {
                    (b'A' + (-x - 1) as u8) as char
                };
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(" "))
        }
    }
}
