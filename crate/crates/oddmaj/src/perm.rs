//! Plain and signed permutations in one-line/window notation, their
//! descent sets under the three classical conventions, length functions,
//! and the small structural maps (`star`, value transpositions,
//! flattening, absolute values) the rest of the crate builds on.
//!
//! Positions are 1-based throughout; descent position 0 exists only in the
//! B/D conventions, where the window is implicitly prefixed by sigma(0).

use std::fmt;

use thiserror::Error;

/// Operations accept ranks up to this bound; enumeration modules document
/// much smaller practical ceilings.
pub const MAX_RANK: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("rank {0} outside the supported range 1..=12")]
    RankOutOfRange(usize),
    #[error("not an arrangement of 1..=n (up to sign): [{0}]")]
    NotAPermutation(String),
    #[error("negative entries are not allowed in a plain permutation: {0}")]
    UnexpectedSign(i32),
    #[error("duplicate value {0} in sequence")]
    DuplicateValue(i32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the D descent convention needs rank >= 2")]
    RankTooSmallForD,
    #[error("odd count of negative entries: not an element of D_n")]
    OddNegativeCount,
    #[error("index {0} out of range for rank {1}")]
    IndexOutOfRange(i32, usize),
}

pub type PermResult<T> = Result<T, PermError>;

fn fmt_window(window: &[i32]) -> String {
    let strs: Vec<String> = window.iter().map(|v| v.to_string()).collect();
    format!("[{}]", strs.join(","))
}

fn validate_window(window: &[i32], allow_signs: bool) -> PermResult<()> {
    let n = window.len();
    if n == 0 || n > MAX_RANK {
        return Err(PermError::RankOutOfRange(n));
    }
    let mut seen = [false; MAX_RANK + 1];
    for &v in window {
        if v < 0 && !allow_signs {
            return Err(PermError::UnexpectedSign(v));
        }
        let a = v.unsigned_abs() as usize;
        if a == 0 || a > n {
            return Err(PermError::NotAPermutation(fmt_window(window).trim_matches(['[', ']']).to_string()));
        }
        if seen[a] {
            return Err(PermError::NotAPermutation(fmt_window(window).trim_matches(['[', ']']).to_string()));
        }
        seen[a] = true;
    }
    Ok(())
}

/// A permutation of `[n]` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    window: Vec<i32>,
}

/// An element of the hyperoctahedral group `B_n` in window notation:
/// the images of `1..=n`, distinct in absolute value, covering `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPerm {
    window: Vec<i32>,
}

impl Perm {
    pub fn new(window: Vec<i32>) -> PermResult<Self> {
        validate_window(&window, false)?;
        Ok(Perm { window })
    }

    pub fn identity(n: usize) -> PermResult<Self> {
        if n == 0 || n > MAX_RANK {
            return Err(PermError::RankOutOfRange(n));
        }
        Ok(Perm {
            window: (1..=n as i32).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    /// Parse either the bracketed form `[8,1,7,2,5,6,3,4]` or, for
    /// rank <= 9, the compact digit string `81725634`.
    pub fn parse(src: &str) -> PermResult<Self> {
        let t = src.trim();
        if t.starts_with('[') {
            Perm::new(parse_bracketed(t)?)
        } else {
            let mut window = Vec::new();
            for (pos, ch) in t.char_indices() {
                match ch.to_digit(10) {
                    Some(d) if d >= 1 => window.push(d as i32),
                    _ => {
                        return Err(PermError::Parse {
                            pos,
                            msg: format!("expected a digit 1-9, found {ch:?}"),
                        })
                    }
                }
            }
            Perm::new(window)
        }
    }

    /// Embed into `B_n` with an all-positive window.
    pub fn to_signed(&self) -> SignedPerm {
        SignedPerm {
            window: self.window.clone(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_window(&self.window))
    }
}

impl SignedPerm {
    pub fn new(window: Vec<i32>) -> PermResult<Self> {
        validate_window(&window, true)?;
        Ok(SignedPerm { window })
    }

    pub fn identity(n: usize) -> PermResult<Self> {
        if n == 0 || n > MAX_RANK {
            return Err(PermError::RankOutOfRange(n));
        }
        Ok(SignedPerm {
            window: (1..=n as i32).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn neg_count(&self) -> usize {
        self.window.iter().filter(|&&v| v < 0).count()
    }

    /// Membership in `D_n`: an even number of negative window entries.
    pub fn is_even_neg(&self) -> bool {
        self.neg_count() % 2 == 0
    }

    pub fn parse(src: &str) -> PermResult<Self> {
        SignedPerm::new(parse_bracketed(src.trim())?)
    }

    /// `|sigma|_n`: the window with only the last entry made positive.
    pub fn abs_last(&self) -> SignedPerm {
        let mut w = self.window.clone();
        if let Some(last) = w.last_mut() {
            *last = last.abs();
        }
        SignedPerm { window: w }
    }

    /// `|sigma|`: all entries made positive.
    pub fn abs_all(&self) -> Perm {
        Perm {
            window: self.window.iter().map(|v| v.abs()).collect(),
        }
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_window(&self.window))
    }
}

fn parse_bracketed(t: &str) -> PermResult<Vec<i32>> {
    let inner = t
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or(PermError::Parse {
            pos: 0,
            msg: "expected [v1,v2,...]".to_string(),
        })?;
    if inner.trim().is_empty() {
        return Err(PermError::RankOutOfRange(0));
    }
    let mut window = Vec::new();
    let mut offset = 1; // byte position of the current piece within `t`
    for piece in inner.split(',') {
        let v: i32 = piece.trim().parse().map_err(|_| PermError::Parse {
            pos: offset + (piece.len() - piece.trim_start().len()),
            msg: format!("bad integer {:?}", piece.trim()),
        })?;
        window.push(v);
        offset += piece.len() + 1;
    }
    Ok(window)
}

/// A small set of non-negative indices (descent positions, signs, subset
/// parameters), stored as a bitmask. Values are bounded by `MAX_RANK`.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet {
    bits: u32,
}

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet { bits: 0 };

    pub fn from_bits(bits: u32) -> IndexSet {
        IndexSet { bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn insert(&mut self, i: u32) {
        self.bits |= 1 << i;
    }

    pub fn contains(&self, i: u32) -> bool {
        i < 32 && self.bits & (1 << i) != 0
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..32).filter(|i| self.contains(*i))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn union(&self, other: IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits & other.bits,
        }
    }

    pub fn minus(&self, other: IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits & !other.bits,
        }
    }

    pub fn is_disjoint(&self, other: IndexSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Members with odd value.
    pub fn odd_part(&self) -> IndexSet {
        IndexSet {
            bits: self.bits & 0xAAAA_AAAA,
        }
    }

    /// Members with even value (including 0 when present).
    pub fn even_part(&self) -> IndexSet {
        IndexSet {
            bits: self.bits & 0x5555_5555,
        }
    }

    /// `J + delta`, intersected with `[1, n]`.
    pub fn shift(&self, delta: i32, n: u32) -> IndexSet {
        let mut out = IndexSet::EMPTY;
        for i in self.iter() {
            let j = i as i32 + delta;
            if j >= 1 && j as u32 <= n {
                out.insert(j as u32);
            }
        }
        out
    }

    /// Divide every member by two; errors if any member is odd.
    pub fn halve(&self) -> PermResult<IndexSet> {
        let mut out = IndexSet::EMPTY;
        for i in self.iter() {
            if i % 2 != 0 {
                return Err(PermError::IndexOutOfRange(i as i32, 0));
            }
            out.insert(i / 2);
        }
        Ok(out)
    }

    /// Apply `star(., n)` to every member (members must lie in `[1, n]`).
    pub fn star_image(&self, n: usize) -> PermResult<IndexSet> {
        let mut out = IndexSet::EMPTY;
        for i in self.iter() {
            out.insert(star(i as i32, n)? as u32);
        }
        Ok(out)
    }

    /// Closed under `star`: the image equals the set itself.
    pub fn is_star_closed(&self, n: usize) -> PermResult<bool> {
        Ok(self.star_image(n)? == *self)
    }

    /// All subsets of `{0, .., n-1}` shifted to start at `lo`
    /// (so `subsets_of_interval(1, n)` ranges over subsets of `[n]`).
    pub fn subsets_of_interval(lo: u32, hi_inclusive: u32) -> impl Iterator<Item = IndexSet> {
        let width = if hi_inclusive < lo {
            0
        } else {
            hi_inclusive - lo + 1
        };
        (0u32..(1 << width)).map(move |mask| IndexSet {
            bits: mask << lo,
        })
    }
}

impl FromIterator<u32> for IndexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> IndexSet {
        let mut bits = 0;
        for i in iter {
            debug_assert!(i < 32);
            bits |= 1 << i;
        }
        IndexSet { bits }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Descents of an arbitrary integer sequence under the A convention:
/// positions `i` in `[1, n-1]` with `a(i) > a(i+1)`.
pub fn descent_set_a(seq: &[i32]) -> IndexSet {
    let mut out = IndexSet::EMPTY;
    for i in 1..seq.len() {
        if seq[i - 1] > seq[i] {
            out.insert(i as u32);
        }
    }
    out
}

/// Descents with `sigma(0) := 0`: positions in `[0, n-1]`.
pub fn descent_set_b(s: &SignedPerm) -> IndexSet {
    descent_set_b_window(s.window())
}

pub(crate) fn descent_set_b_window(w: &[i32]) -> IndexSet {
    let mut out = descent_set_a(w);
    if !w.is_empty() && w[0] < 0 {
        out.insert(0);
    }
    out
}

/// Descents with `sigma(0) := -sigma(2)`: positions in `[0, n-1]`.
pub fn descent_set_d(s: &SignedPerm) -> PermResult<IndexSet> {
    if s.rank() < 2 {
        return Err(PermError::RankTooSmallForD);
    }
    let w = s.window();
    let mut out = descent_set_a(w);
    if -w[1] > w[0] {
        out.insert(0);
    }
    Ok(out)
}

/// Positions (1-based) carrying negative window entries.
pub fn neg_set(s: &SignedPerm) -> IndexSet {
    neg_set_window(s.window())
}

pub(crate) fn neg_set_window(w: &[i32]) -> IndexSet {
    let mut out = IndexSet::EMPTY;
    for (i, &v) in w.iter().enumerate() {
        if v < 0 {
            out.insert(i as u32 + 1);
        }
    }
    out
}

/// Inversions of the window sequence (the A length for plain permutations,
/// the auxiliary `lenA` for signed ones).
pub fn length_a(window: &[i32]) -> u64 {
    let n = window.len();
    let mut inv = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if window[i] > window[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// Coxeter length in `B_n`: window inversions minus the sum of the
/// negative entries.
pub fn length_b(s: &SignedPerm) -> u64 {
    length_b_window(s.window())
}

pub(crate) fn length_b_window(w: &[i32]) -> u64 {
    let neg_sum: i64 = w.iter().filter(|&&v| v < 0).map(|&v| v as i64).sum();
    length_a(w) + (-neg_sum) as u64
}

/// Coxeter length in `D_n`: the B length minus the number of negative
/// entries. Only defined on even-negative windows.
pub fn length_d(s: &SignedPerm) -> PermResult<u64> {
    if !s.is_even_neg() {
        return Err(PermError::OddNegativeCount);
    }
    Ok(length_b(s) - s.neg_count() as u64)
}

/// The pairing map on `[-n, n] \ {0}`: even values step toward zero,
/// odd values step away when that stays inside the interval, and the
/// extremes are fixed.
pub fn star(i: i32, n: usize) -> PermResult<i32> {
    if i == 0 || i.unsigned_abs() as usize > n {
        return Err(PermError::IndexOutOfRange(i, n));
    }
    let s = i.signum();
    if i % 2 == 0 {
        Ok(i - s)
    } else if (i + s).unsigned_abs() as usize <= n {
        Ok(i + s)
    } else {
        Ok(i)
    }
}

fn star_swap_window(window: &[i32], i: usize) -> PermResult<Vec<i32>> {
    let n = window.len();
    if i == 0 || i >= n {
        return Err(PermError::IndexOutOfRange(i as i32, n));
    }
    let partner = star(i as i32, n)? as i32;
    let a = i as i32;
    Ok(window
        .iter()
        .map(|&v| {
            if v == a {
                partner
            } else if v == -a {
                -partner
            } else if v == partner {
                a
            } else if v == -partner {
                -a
            } else {
                v
            }
        })
        .collect())
}

/// Left-multiplication by the value transposition exchanging `i` and
/// `star(i)` (and their negatives in the signed case). An involution.
pub fn star_transpose_perm(i: usize, p: &Perm) -> PermResult<Perm> {
    Ok(Perm {
        window: star_swap_window(p.window(), i)?,
    })
}

/// Signed variant of [`star_transpose_perm`].
pub fn star_transpose_signed(i: usize, s: &SignedPerm) -> PermResult<SignedPerm> {
    Ok(SignedPerm {
        window: star_swap_window(s.window(), i)?,
    })
}

/// The unique plain permutation with the same relative order as the input.
pub fn flatten(values: &[i32]) -> PermResult<Perm> {
    let n = values.len();
    if n == 0 || n > MAX_RANK {
        return Err(PermError::RankOutOfRange(n));
    }
    for (i, &v) in values.iter().enumerate() {
        if values[i + 1..].contains(&v) {
            return Err(PermError::DuplicateValue(v));
        }
    }
    let mut window = Vec::with_capacity(n);
    for &v in values {
        let rank = values.iter().filter(|&&u| u < v).count() + 1;
        window.push(rank as i32);
    }
    Ok(Perm { window })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignedPerm {
        SignedPerm::parse(s).unwrap()
    }

    #[test]
    fn parse_both_forms() {
        let p = Perm::parse("81725634").unwrap();
        assert_eq!(p.window(), &[8, 1, 7, 2, 5, 6, 3, 4]);
        assert_eq!(p.to_string(), "[8,1,7,2,5,6,3,4]");
        assert_eq!(Perm::parse("[8,1,7,2,5,6,3,4]").unwrap(), p);
        let s = sp("[-2,5,3,1,-4]");
        assert_eq!(s.window(), &[-2, 5, 3, 1, -4]);
        assert_eq!(SignedPerm::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Perm::parse("[1,1]").is_err());
        assert!(Perm::parse("[1,3]").is_err());
        assert!(Perm::parse("[0,1]").is_err());
        assert!(Perm::parse("[-1,2]").is_err());
        assert!(SignedPerm::parse("[1,-1]").is_err());
        assert!(SignedPerm::parse("[2,-3]").is_err());
        assert!(SignedPerm::parse("12").is_err());
        assert!(Perm::parse("120").is_err());
    }

    #[test]
    fn descent_sets_three_conventions() {
        let p = Perm::parse("81725634").unwrap();
        assert_eq!(descent_set_a(p.window()), IndexSet::from_iter([1, 3, 6]));
        let s = sp("[-2,5,3,1,-4]");
        assert_eq!(descent_set_b(&s), IndexSet::from_iter([0, 2, 3, 4]));
        assert_eq!(
            descent_set_d(&s).unwrap(),
            IndexSet::from_iter([2, 3, 4])
        );
        assert_eq!(descent_set_b(&sp("[-2,-1]")), IndexSet::from_iter([0]));
        assert_eq!(
            descent_set_d(&sp("[-1,-2]")).unwrap(),
            IndexSet::from_iter([0, 1])
        );
        assert!(descent_set_d(&sp("[-1]")).is_err());
        assert_eq!(descent_set_b(&sp("[1,2,3]")), IndexSet::EMPTY);
    }

    #[test]
    fn neg_set_positions() {
        assert_eq!(neg_set(&sp("[-2,5,3,1,-4]")), IndexSet::from_iter([1, 5]));
        assert_eq!(neg_set(&sp("[-1,-2]")), IndexSet::from_iter([1, 2]));
        assert_eq!(neg_set(&sp("[1,2]")), IndexSet::EMPTY);
    }

    #[test]
    fn lengths() {
        let s = sp("[-2,5,3,1,-4]");
        assert_eq!(length_a(s.window()), 7);
        assert_eq!(length_b(&s), 13);
        assert_eq!(length_d(&s).unwrap(), 11);
        assert_eq!(length_b(&sp("[-1]")), 1);
        assert_eq!(length_d(&sp("[-2,-1]")).unwrap(), 1);
        assert!(length_d(&sp("[-1,2]")).is_err());
        assert_eq!(length_a(&[2, 1]), 1);
    }

    #[test]
    fn star_map() {
        assert_eq!(star(2, 5).unwrap(), 1);
        assert_eq!(star(5, 5).unwrap(), 5);
        assert_eq!(star(-3, 5).unwrap(), -4);
        assert_eq!(star(1, 5).unwrap(), 2);
        assert_eq!(star(-2, 5).unwrap(), -1);
        assert!(star(0, 5).is_err());
        assert!(star(6, 5).is_err());
        for i in 1..=5i32 {
            for s in [i, -i] {
                let t = star(s, 5).unwrap();
                assert_eq!(star(t, 5).unwrap(), s);
            }
        }
    }

    #[test]
    fn star_transposition_involution() {
        let p = Perm::parse("1234").unwrap();
        assert_eq!(
            star_transpose_perm(2, &p).unwrap(),
            Perm::parse("2134").unwrap()
        );
        let s = sp("[-2,5,3,1,-4]");
        for i in 1..5 {
            let t = star_transpose_signed(i, &s).unwrap();
            assert_eq!(star_transpose_signed(i, &t).unwrap(), s);
        }
    }

    #[test]
    fn flatten_ranks_entries() {
        assert_eq!(flatten(&[9, 2, 5]).unwrap(), Perm::parse("312").unwrap());
        assert_eq!(flatten(&[7, 3]).unwrap(), Perm::parse("21").unwrap());
        assert_eq!(flatten(&[-4, 0, 9]).unwrap(), Perm::parse("123").unwrap());
        assert!(flatten(&[1, 1]).is_err());
    }

    #[test]
    fn abs_maps() {
        let s = sp("[-2,5,3,1,-4]");
        assert_eq!(s.abs_last(), sp("[-2,5,3,1,4]"));
        assert_eq!(s.abs_all(), Perm::parse("25314").unwrap());
        assert_eq!(sp("[1,-2,3]").abs_last(), sp("[1,-2,3]"));
    }

    #[test]
    fn index_set_operators() {
        let j = IndexSet::from_iter([1, 2, 6]);
        assert_eq!(j.even_part(), IndexSet::from_iter([2, 6]));
        assert_eq!(j.odd_part(), IndexSet::from_iter([1]));
        assert_eq!(
            IndexSet::from_iter([2, 6]).halve().unwrap(),
            IndexSet::from_iter([1, 3])
        );
        assert!(IndexSet::from_iter([1]).halve().is_err());
        assert_eq!(
            IndexSet::from_iter([1, 2]).star_image(4).unwrap(),
            IndexSet::from_iter([1, 2])
        );
        assert!(IndexSet::from_iter([1, 2]).is_star_closed(4).unwrap());
        assert!(!IndexSet::from_iter([2, 3]).is_star_closed(4).unwrap());
        assert_eq!(
            IndexSet::from_iter([1, 3]).shift(1, 3),
            IndexSet::from_iter([2])
        );
        assert_eq!(j.to_vec(), vec![1, 2, 6]);
        assert_eq!(j.to_string(), "{1,2,6}");
        assert_eq!(
            IndexSet::subsets_of_interval(1, 2).count(),
            4
        );
    }
}
