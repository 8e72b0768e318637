//! Word addresses for cells, vertices and cell edges.
//!
//! A word `w = w_1 ... w_m` over `{1, 2, 3}` names the cell `F_w(K)` with
//! `F_w = F_{w_1} o ... o F_{w_m}`. A vertex is a cell word plus one of the
//! three corners, and a cell edge is a cell word plus one of its sides.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};

/// Longest word accepted by public constructors.
pub const MAX_WORD_LEN: usize = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.len() > MAX_WORD_LEN {
            return Err(GasketError::WordTooLong {
                len: letters.len(),
                max: MAX_WORD_LEN,
            });
        }
        if let Some(&bad) = letters.iter().find(|&&l| !(1..=3).contains(&l)) {
            return Err(GasketError::InvalidLetter(bad));
        }
        Ok(Word(letters))
    }

    /// The word `i i ... i` of length `len`.
    pub fn repeat(letter: u8, len: usize) -> Result<Self> {
        Word::new(vec![letter; len])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `self` followed by `letter`.
    pub fn child(&self, letter: u8) -> Result<Self> {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word::new(letters)
    }

    pub fn concat(&self, other: &Word) -> Result<Self> {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word::new(letters)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    fn pop(&mut self) -> Option<u8> {
        self.0.pop()
    }

    fn push_unchecked(&mut self, letter: u8) {
        debug_assert!((1..=3).contains(&letter));
        self.0.push(letter);
    }

    /// Position of this word among all words of the same length in
    /// lexicographic order.
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * 3 + usize::from(l - 1))
    }

    /// Inverse of [`Word::index`].
    pub fn from_index(mut index: usize, len: usize) -> Result<Self> {
        let mut letters = vec![1u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % 3) as u8 + 1;
            index /= 3;
        }
        Word::new(letters)
    }

    /// All words of length `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        let count = 3usize.pow(len as u32);
        (0..count).map(move |i| Word::from_index(i, len).expect("length already bounded"))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// `"0"` and `""` both denote the empty word.
impl FromStr for Word {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Word::empty());
        }
        let letters = s
            .bytes()
            .map(|b| match b {
                b'1'..=b'3' => Ok(b - b'0'),
                _ => Err(GasketError::Parse {
                    what: "word",
                    input: s.to_string(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

impl TryFrom<String> for Word {
    type Error = GasketError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

/// Side of a cell triangle. With `p_1` bottom left, `p_2` bottom right and
/// `p_3` on top: left is `p_1 p_3`, right is `p_2 p_3`, bottom is `p_1 p_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    L,
    R,
    B,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::L, Side::R, Side::B];

    /// Corners joined by this side, in traversal order.
    pub fn corners(self) -> (u8, u8) {
        match self {
            Side::L => (1, 3),
            Side::R => (2, 3),
            Side::B => (1, 2),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::L => 0,
            Side::R => 1,
            Side::B => 2,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Side::L => 'l',
            Side::R => 'r',
            Side::B => 'b',
        }
    }
}

impl FromStr for Side {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" | "L" => Ok(Side::L),
            "r" | "R" => Ok(Side::R),
            "b" | "B" => Ok(Side::B),
            _ => Err(GasketError::Parse {
                what: "side",
                input: s.to_string(),
            }),
        }
    }
}

/// A vertex of `V_*`, stored under its canonical address.
///
/// The canonical address has the shortest possible word. A junction point
/// `F_{w a}(p_c) = F_{w c}(p_a)` with `a != c` has two shortest addresses;
/// the one with the smaller last letter is kept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId {
    word: Word,
    corner: u8,
}

impl VertexId {
    pub fn new(word: Word, corner: u8) -> Result<Self> {
        if !(1..=3).contains(&corner) {
            return Err(GasketError::InvalidCorner(corner));
        }
        Ok(Self::canonical(word, corner))
    }

    /// Corner `p_i` of the root cell.
    pub fn root(corner: u8) -> Result<Self> {
        VertexId::new(Word::empty(), corner)
    }

    fn canonical(mut word: Word, corner: u8) -> Self {
        // F_{w c}(p_c) = F_w(p_c)
        while word.last() == Some(corner) {
            word.pop();
        }
        match word.last() {
            Some(last) if corner < last => {
                word.pop();
                word.push_unchecked(corner);
                VertexId { word, corner: last }
            }
            _ => VertexId { word, corner },
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn corner(&self) -> u8 {
        self.corner
    }

    /// Lowest graph level containing this vertex.
    pub fn level(&self) -> usize {
        self.word.len()
    }

    /// The other shortest address of a junction vertex, if any.
    pub fn alternate_address(&self) -> Option<(Word, u8)> {
        let last = self.word.last()?;
        let mut word = self.word.clone();
        word.pop();
        word.push_unchecked(self.corner);
        Some((word, last))
    }

    /// All `(word, corner)` pairs with `|word| = level` naming this vertex.
    pub fn addresses_at_level(&self, level: usize) -> Vec<(Word, u8)> {
        if level < self.level() {
            return Vec::new();
        }
        let pad = level - self.level();
        let mut out = Vec::with_capacity(2);
        let extend = |w: &Word, c: u8| {
            let mut letters = w.letters().to_vec();
            letters.extend(std::iter::repeat(c).take(pad));
            (Word(letters), c)
        };
        out.push(extend(&self.word, self.corner));
        if let Some((w, c)) = self.alternate_address() {
            out.push(extend(&w, c));
        }
        out
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.word, self.corner)
    }
}

/// `word:corner`, e.g. `12:3`; `0:i` is the root corner `p_i`.
impl FromStr for VertexId {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || GasketError::Parse {
            what: "vertex",
            input: s.to_string(),
        };
        let (word, corner) = s.trim().split_once(':').ok_or_else(parse_err)?;
        let corner: u8 = corner.parse().map_err(|_| parse_err())?;
        VertexId::new(word.parse()?, corner)
    }
}

/// One side of one cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub cell: Word,
    pub side: Side,
}

impl EdgeId {
    pub fn new(cell: Word, side: Side) -> Self {
        EdgeId { cell, side }
    }

    pub fn level(&self) -> usize {
        self.cell.len()
    }

    /// Endpoints in traversal order of the side.
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        let (a, b) = self.side.corners();
        (
            VertexId::canonical(self.cell.clone(), a),
            VertexId::canonical(self.cell.clone(), b),
        )
    }

    /// The two halves of this edge one level down, in traversal order.
    pub fn children(&self) -> Result<[EdgeId; 2]> {
        let (a, b) = self.side.corners();
        Ok([
            EdgeId::new(self.cell.child(a)?, self.side),
            EdgeId::new(self.cell.child(b)?, self.side),
        ])
    }
}

/// Level ascending, then cell word, then side `l < r < b`.
impl Ord for EdgeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cell
            .len()
            .cmp(&other.cell.len())
            .then_with(|| self.cell.cmp(&other.cell))
            .then_with(|| self.side.cmp(&other.side))
    }
}

impl PartialOrd for EdgeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.cell, self.side.as_char())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_bad_letters_and_long_words() {
        assert!(matches!(Word::new(vec![1, 4]), Err(GasketError::InvalidLetter(4))));
        assert!(matches!(
            Word::repeat(2, 65),
            Err(GasketError::WordTooLong { len: 65, .. })
        ));
        assert!(Word::repeat(2, 64).is_ok());
        assert!("1a".parse::<Word>().is_err());
    }

    #[test]
    fn index_round_trip_is_lexicographic() {
        let words: Vec<Word> = Word::all_of_length(3).collect();
        assert_eq!(words.len(), 27);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        for (i, word) in words.iter().enumerate() {
            assert_eq!(word.index(), i);
        }
    }

    #[test]
    fn vertex_canonicalisation() {
        // fixed points collapse to the parent cell
        assert_eq!(VertexId::new(w("11"), 1).unwrap(), VertexId::root(1).unwrap());
        assert_eq!(VertexId::new(w("211"), 1).unwrap(), VertexId::new(w("2"), 1).unwrap());
        // junction F_1(p_2) = F_2(p_1)
        let a = VertexId::new(w("1"), 2).unwrap();
        let b = VertexId::new(w("2"), 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.word(), &w("1"));
        assert_eq!(a.corner(), 2);
        assert_eq!(a.alternate_address(), Some((w("2"), 1)));
        assert_eq!(VertexId::new(w("3322"), 2).unwrap(), VertexId::new(w("32"), 3).unwrap());
    }

    #[test]
    fn vertex_parse_and_display() {
        let v: VertexId = "12:3".parse().unwrap();
        assert_eq!(v.to_string(), "12:3");
        assert_eq!("0:2".parse::<VertexId>().unwrap(), VertexId::root(2).unwrap());
        assert!("12".parse::<VertexId>().is_err());
        assert!("12:4".parse::<VertexId>().is_err());
    }

    #[test]
    fn addresses_at_level_counts() {
        let root = VertexId::root(3).unwrap();
        assert_eq!(root.addresses_at_level(4).len(), 1);
        let junction = VertexId::new(w("13"), 2).unwrap();
        let addrs = junction.addresses_at_level(5);
        assert_eq!(addrs.len(), 2);
        for (word, corner) in addrs {
            assert_eq!(word.len(), 5);
            assert_eq!(VertexId::new(word, corner).unwrap(), junction);
        }
    }

    #[test]
    fn edge_order_and_children() {
        let mut edges = vec![
            EdgeId::new(w("2"), Side::L),
            EdgeId::new(w("1"), Side::B),
            EdgeId::new(Word::empty(), Side::R),
            EdgeId::new(w("1"), Side::L),
        ];
        edges.sort();
        let names: Vec<String> = edges.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["0/r", "1/l", "1/b", "2/l"]);

        let bottom = EdgeId::new(Word::empty(), Side::B);
        let [left, right] = bottom.children().unwrap();
        assert_eq!(left.endpoints().0, VertexId::root(1).unwrap());
        assert_eq!(left.endpoints().1, right.endpoints().0);
        assert_eq!(right.endpoints().1, VertexId::root(2).unwrap());
    }
}
