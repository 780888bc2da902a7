//! Streaming enumeration of the index families: the groups themselves,
//! parabolic quotients, domino subsets, Neg-constrained classes, and
//! overpartitions, plus the domino bijections and the sign-reversing
//! involutions with guarded domains.
//!
//! Enumeration is lexicographic on the window and allocation-free: callers
//! receive each window as a borrowed slice. Sweeps can be split into
//! contiguous chunks (by first window entry) for parallel reduction.

use std::fmt;

use thiserror::Error;

use crate::perm::{
    star, star_transpose_perm, star_transpose_signed, IndexSet, Perm, PermError, SignedPerm,
    MAX_RANK,
};
use crate::poly::{MultiPoly, PolyResult};
use crate::stats::Family;

/// Full-sweep rank ceilings (overridable with `force`).
pub const CEILING_A: usize = 10;
pub const CEILING_B: usize = 8;
pub const CEILING_D: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("rank {rank} exceeds the family-{family} ceiling {ceiling}; pass force to override")]
    CeilingExceeded {
        rank: usize,
        family: Family,
        ceiling: usize,
    },
    #[error("rank {0} outside the supported range 1..=12")]
    RankOutOfRange(usize),
    #[error("parabolic quotients are only defined for family A")]
    QuotientNeedsFamilyA,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("element outside the involution's domain: {0}")]
    OutsideDomain(String),
    #[error("not a domino permutation: {0}")]
    NotDomino(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub type EnumResult<T> = Result<T, EnumError>;

/// Element-level filters a [`GroupSpec`] can carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    /// Neg(sigma) equals this set exactly (drives direct construction).
    NegSet(IndexSet),
    /// neg(sigma) is congruent to the value mod 2.
    NegParity(u8),
    /// The window entry at this 1-based position is negative (or positive).
    SignAt { pos: usize, negative: bool },
    /// The window entry at this 1-based position has this absolute value.
    AbsAt { pos: usize, value: u32 },
    /// Domino membership.
    Domino,
}

/// A set of group elements to sweep: family, rank, optional parabolic
/// quotient (type A), and filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: usize,
    pub quotient: Option<IndexSet>,
    pub filters: Vec<Filter>,
    pub force: bool,
}

impl GroupSpec {
    pub fn new(family: Family, rank: usize) -> GroupSpec {
        GroupSpec {
            family,
            rank,
            quotient: None,
            filters: Vec::new(),
            force: false,
        }
    }

    pub fn with_quotient(mut self, j: IndexSet) -> GroupSpec {
        self.quotient = Some(j);
        self
    }

    pub fn with_filter(mut self, f: Filter) -> GroupSpec {
        self.filters.push(f);
        self
    }

    pub fn with_force(mut self) -> GroupSpec {
        self.force = true;
        self
    }

    fn neg_set_filter(&self) -> Option<IndexSet> {
        self.filters.iter().find_map(|f| match f {
            Filter::NegSet(s) => Some(*s),
            _ => None,
        })
    }

    /// Group order before filtering — the guardrail estimate.
    pub fn estimated_count(&self) -> u64 {
        let n = self.rank as u64;
        let fact: u64 = (1..=n).product();
        if self.neg_set_filter().is_some() {
            return fact;
        }
        match self.family {
            Family::A => fact,
            Family::B => fact << n,
            Family::D => fact << (n - 1),
        }
    }

    pub fn validate(&self) -> EnumResult<()> {
        let n = self.rank;
        if n == 0 || n > MAX_RANK {
            return Err(EnumError::RankOutOfRange(n));
        }
        if self.quotient.is_some() && self.family != Family::A {
            return Err(EnumError::QuotientNeedsFamilyA);
        }
        if let Some(j) = self.quotient {
            if j.iter().any(|i| i == 0 || i as usize >= n) {
                return Err(EnumError::BadParams(format!(
                    "quotient {j} not inside [{}]",
                    n - 1
                )));
            }
        }
        for f in &self.filters {
            match f {
                Filter::NegSet(s) => {
                    if self.family == Family::A {
                        return Err(EnumError::BadParams(
                            "Neg filters need a signed family".to_string(),
                        ));
                    }
                    if s.iter().any(|i| i == 0 || i as usize > n) {
                        return Err(EnumError::BadParams(format!("Neg set {s} not inside [{n}]")));
                    }
                }
                Filter::NegParity(_) => {
                    if self.family == Family::A {
                        return Err(EnumError::BadParams(
                            "Neg filters need a signed family".to_string(),
                        ));
                    }
                }
                Filter::SignAt { pos, .. } | Filter::AbsAt { pos, .. } => {
                    if *pos == 0 || *pos > n {
                        return Err(EnumError::BadParams(format!(
                            "position {pos} not inside [{n}]"
                        )));
                    }
                }
                Filter::Domino => {}
            }
        }
        let ceiling = if self.neg_set_filter().is_some() {
            CEILING_A
        } else {
            match self.family {
                Family::A => CEILING_A,
                Family::B => CEILING_B,
                Family::D => CEILING_D,
            }
        };
        if n > ceiling && !self.force {
            return Err(EnumError::CeilingExceeded {
                rank: n,
                family: self.family,
                ceiling,
            });
        }
        Ok(())
    }

    /// Number of contiguous chunks a sweep splits into.
    pub fn chunk_count(&self) -> usize {
        if self.family == Family::A || self.neg_set_filter().is_some() {
            self.rank
        } else {
            2 * self.rank
        }
    }

    /// Visit every element of one chunk; returns the visited count.
    /// The caller must have validated the spec.
    pub(crate) fn for_each_in_chunk<F: FnMut(&[i32])>(&self, chunk: usize, mut f: F) -> u64 {
        let n = self.rank;
        let mut walker = Walker {
            n,
            spec: self,
            buf: [0; MAX_RANK],
            used: 0,
            negs: 0,
            count: 0,
            f: &mut f,
        };
        if self.family == Family::A || self.neg_set_filter().is_some() {
            // Chunk index = first entry - 1 of the underlying positive pattern.
            let first = (chunk + 1) as i32;
            walker.place_pattern(0, first);
        } else {
            // Chunks run over first entries -n..=-1, 1..=n in window order.
            let first = if chunk < n {
                chunk as i32 - n as i32
            } else {
                (chunk - n) as i32 + 1
            };
            walker.place_signed(0, first);
        }
        walker.count
    }

    /// Visit every element; returns the count.
    pub fn for_each<F: FnMut(&[i32])>(&self, mut f: F) -> EnumResult<u64> {
        self.validate()?;
        let mut count = 0;
        for chunk in 0..self.chunk_count() {
            count += self.for_each_in_chunk(chunk, &mut f);
        }
        Ok(count)
    }
}

struct Walker<'a, F: FnMut(&[i32])> {
    n: usize,
    spec: &'a GroupSpec,
    buf: [i32; MAX_RANK],
    used: u16,
    negs: u32,
    count: u64,
    f: &'a mut F,
}

impl<'a, F: FnMut(&[i32])> Walker<'a, F> {
    /// Early per-position filter checks (1-based position = depth + 1).
    fn position_ok(&self, depth: usize, v: i32) -> bool {
        for flt in &self.spec.filters {
            match *flt {
                Filter::SignAt { pos, negative } if pos == depth + 1 && (v < 0) != negative => {
                    return false;
                }
                Filter::AbsAt { pos, value } if pos == depth + 1 && v.unsigned_abs() != value => {
                    return false;
                }
                _ => {}
            }
        }
        true
    }

    /// Descent pruning for parabolic quotients: placing `v` at 0-based
    /// slot `depth` decides the descent at 1-based position `depth`.
    fn quotient_ok(&self, depth: usize, v: i32) -> bool {
        match self.spec.quotient {
            Some(j) => !(depth > 0 && j.contains(depth as u32) && self.buf[depth - 1] > v),
            None => true,
        }
    }

    fn leaf_ok(&self) -> bool {
        let w = &self.buf[..self.n];
        if self.spec.family == Family::D && self.negs % 2 != 0 {
            return false;
        }
        for flt in &self.spec.filters {
            match *flt {
                Filter::NegParity(eps) if self.negs % 2 != eps as u32 => return false,
                Filter::Domino if !is_domino_window(w) => return false,
                _ => {}
            }
        }
        true
    }

    fn emit(&mut self) {
        if self.leaf_ok() {
            self.count += 1;
            (self.f)(&self.buf[..self.n]);
        }
    }

    /// Plain patterns (family A, and the |sigma| patterns of Neg-constrained
    /// sweeps). `first` pins the chunk's first entry; pass 0 to range freely.
    fn place_pattern(&mut self, depth: usize, first: i32) {
        if depth == self.n {
            match self.spec.neg_set_filter() {
                None => self.emit(),
                Some(s) => {
                    // Apply the sign mask in place, emit, then restore.
                    for i in s.iter() {
                        self.buf[i as usize - 1] = -self.buf[i as usize - 1];
                    }
                    self.negs = s.len();
                    self.emit();
                    self.negs = 0;
                    for i in s.iter() {
                        self.buf[i as usize - 1] = self.buf[i as usize - 1].abs();
                    }
                }
            }
            return;
        }
        let sign_mask = self.spec.neg_set_filter().unwrap_or(IndexSet::EMPTY);
        for v in 1..=self.n as i32 {
            if depth == 0 && first != 0 && v != first {
                continue;
            }
            if self.used & (1 << (v - 1)) != 0 {
                continue;
            }
            // Filters refer to the signed window; check against the value
            // this slot will carry after the sign mask.
            let signed_v = if sign_mask.contains(depth as u32 + 1) {
                -v
            } else {
                v
            };
            if !self.position_ok(depth, signed_v) || !self.quotient_ok(depth, v) {
                continue;
            }
            self.buf[depth] = v;
            self.used |= 1 << (v - 1);
            self.place_pattern(depth + 1, first);
            self.used &= !(1 << (v - 1));
        }
    }

    /// Signed windows in lexicographic order (families B and D).
    fn place_signed(&mut self, depth: usize, first: i32) {
        if depth == self.n {
            self.emit();
            return;
        }
        let n = self.n as i32;
        let try_value = |w: &mut Self, v: i32| {
            if depth == 0 && first != 0 && v != first {
                return;
            }
            let bit = 1u16 << (v.unsigned_abs() - 1);
            if w.used & bit != 0 {
                return;
            }
            if !w.position_ok(depth, v) {
                return;
            }
            w.buf[depth] = v;
            w.used |= bit;
            if v < 0 {
                w.negs += 1;
            }
            w.place_signed(depth + 1, first);
            if v < 0 {
                w.negs -= 1;
            }
            w.used &= !bit;
        };
        for v in -n..=-1 {
            try_value(self, v);
        }
        for v in 1..=n {
            try_value(self, v);
        }
    }
}

/// The order of the full group.
pub fn group_order(family: Family, n: usize) -> u64 {
    let fact: u64 = (1..=n as u64).product();
    match family {
        Family::A => fact,
        Family::B => fact << n,
        Family::D => {
            if n == 0 {
                1
            } else {
                fact << (n - 1)
            }
        }
    }
}

/// Domino membership of a (plain or signed) window: the signed inverse
/// positions of every star pair `{i, star(i)}`, `i` in `[n-1]`, differ by
/// at most one.
pub(crate) fn is_domino_window(w: &[i32]) -> bool {
    let n = w.len();
    let mut pos = [0i32; MAX_RANK + 1];
    for (i, &v) in w.iter().enumerate() {
        let p = (i + 1) as i32;
        pos[v.unsigned_abs() as usize] = if v > 0 { p } else { -p };
    }
    for i in 1..n {
        let partner = star(i as i32, n).expect("index inside [n-1]");
        if (pos[i] - pos[partner as usize]).abs() > 1 {
            return false;
        }
    }
    true
}

pub fn is_domino_a(p: &Perm) -> bool {
    is_domino_window(p.window())
}

pub fn is_domino_b(s: &SignedPerm) -> bool {
    is_domino_window(s.window())
}

/// The pairing `(sigma, S) -> u` onto even-rank plain domino permutations:
/// the pair at positions `(2j-1, 2j)` carries the values `{2 sigma(j) - 1,
/// 2 sigma(j)}`, descending exactly when `j` lies in `S`.
pub fn domino_bij_a(sigma: &Perm, s: IndexSet) -> EnumResult<Perm> {
    let m = sigma.rank();
    if s.iter().any(|i| i == 0 || i as usize > m) {
        return Err(EnumError::BadParams(format!("S = {s} not inside [{m}]")));
    }
    let mut window = Vec::with_capacity(2 * m);
    for (j, &v) in sigma.window().iter().enumerate() {
        let hi = 2 * v;
        let lo = 2 * v - 1;
        if s.contains(j as u32 + 1) {
            window.push(hi);
            window.push(lo);
        } else {
            window.push(lo);
            window.push(hi);
        }
    }
    Ok(Perm::new(window)?)
}

/// Inverse of [`domino_bij_a`].
pub fn domino_inv_a(u: &Perm) -> EnumResult<(Perm, IndexSet)> {
    let n = u.rank();
    if n % 2 != 0 {
        return Err(EnumError::NotDomino(format!("odd rank {n}")));
    }
    let w = u.window();
    let mut sigma = Vec::with_capacity(n / 2);
    let mut s = IndexSet::EMPTY;
    for j in 1..=n / 2 {
        let a = w[2 * j - 2];
        let b = w[2 * j - 1];
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi != lo + 1 || hi % 2 != 0 {
            return Err(EnumError::NotDomino(u.to_string()));
        }
        if a > b {
            s.insert(j as u32);
        }
        sigma.push(hi / 2);
    }
    Ok((Perm::new(sigma)?, s))
}

/// The signed pairing `(sigma, S) -> u` onto even-rank signed domino
/// permutations; the absolute pair is `{2|sigma(j)| - 1, 2|sigma(j)|}`
/// carrying the sign of `sigma(j)`, descending exactly when `j` is in `S`.
pub fn domino_bij_b(sigma: &SignedPerm, s: IndexSet) -> EnumResult<SignedPerm> {
    let m = sigma.rank();
    if s.iter().any(|i| i == 0 || i as usize > m) {
        return Err(EnumError::BadParams(format!("S = {s} not inside [{m}]")));
    }
    let mut window = Vec::with_capacity(2 * m);
    for (j, &v) in sigma.window().iter().enumerate() {
        let in_s = s.contains(j as u32 + 1);
        let (first, second) = if v > 0 {
            if in_s {
                (2 * v, 2 * v - 1)
            } else {
                (2 * v - 1, 2 * v)
            }
        } else if in_s {
            (2 * v + 1, 2 * v)
        } else {
            (2 * v, 2 * v + 1)
        };
        window.push(first);
        window.push(second);
    }
    Ok(SignedPerm::new(window)?)
}

/// Inverse of [`domino_bij_b`].
pub fn domino_inv_b(u: &SignedPerm) -> EnumResult<(SignedPerm, IndexSet)> {
    let n = u.rank();
    if n % 2 != 0 {
        return Err(EnumError::NotDomino(format!("odd rank {n}")));
    }
    let w = u.window();
    let mut sigma = Vec::with_capacity(n / 2);
    let mut s = IndexSet::EMPTY;
    for j in 1..=n / 2 {
        let a = w[2 * j - 2];
        let b = w[2 * j - 1];
        if (a < 0) != (b < 0) {
            return Err(EnumError::NotDomino(u.to_string()));
        }
        let (lo, hi) = if a.abs() < b.abs() {
            (a.abs(), b.abs())
        } else {
            (b.abs(), a.abs())
        };
        if hi != lo + 1 || hi % 2 != 0 {
            return Err(EnumError::NotDomino(u.to_string()));
        }
        if a > b {
            s.insert(j as u32);
        }
        sigma.push(if a < 0 { -hi / 2 } else { hi / 2 });
    }
    Ok((SignedPerm::new(sigma)?, s))
}

/// Smallest index in `[n-1]` whose star pair sits non-adjacently; `None`
/// exactly for domino permutations.
fn min_non_domino_index(w: &[i32]) -> Option<usize> {
    let n = w.len();
    let mut pos = [0i32; MAX_RANK + 1];
    for (i, &v) in w.iter().enumerate() {
        let p = (i + 1) as i32;
        pos[v.unsigned_abs() as usize] = if v > 0 { p } else { -p };
    }
    (1..n).find(|&i| {
        let partner = star(i as i32, n).expect("index inside [n-1]") as usize;
        (pos[i] - pos[partner]).abs() > 1
    })
}

/// Sign-reversing involution on non-domino plain permutations: left-multiply
/// by the star transposition of the smallest non-domino index. Preserves the
/// descent set, flips the length parity.
pub fn iota_a(p: &Perm) -> EnumResult<Perm> {
    match min_non_domino_index(p.window()) {
        Some(r) => Ok(star_transpose_perm(r, p)?),
        None => Err(EnumError::OutsideDomain(format!(
            "{p} is a domino permutation"
        ))),
    }
}

/// Signed analogue of [`iota_a`]: preserves the B descent set and the
/// Neg set, flips the B length parity.
pub fn phi_b(s: &SignedPerm) -> EnumResult<SignedPerm> {
    match min_non_domino_index(s.window()) {
        Some(r) => Ok(star_transpose_signed(r, s)?),
        None => Err(EnumError::OutsideDomain(format!(
            "{s} is a signed domino permutation"
        ))),
    }
}

/// The canonical star-transposition index for the pair of `a` in `[n-1]`:
/// the odd member of `{a, star(a)}`.
fn pair_index(a: u32) -> usize {
    if a % 2 == 0 {
        a as usize - 1
    } else {
        a as usize
    }
}

/// Involution on odd-rank signed permutations whose last entry is not
/// `+-n`: left-multiply by the star transposition of `|sigma(n)|`.
/// Preserves Neg and the odd-position descents, flips the B length parity.
pub fn psi_b_last(s: &SignedPerm) -> EnumResult<SignedPerm> {
    let n = s.rank();
    if n % 2 == 0 {
        return Err(EnumError::OutsideDomain(format!("{s} has even rank")));
    }
    let last = s.window()[n - 1];
    if last.unsigned_abs() as usize == n {
        return Err(EnumError::OutsideDomain(format!(
            "{s} has maximal last entry"
        )));
    }
    Ok(star_transpose_signed(pair_index(last.unsigned_abs()), s)?)
}

/// Involution on even-rank signed permutations: left-multiply by the star
/// transposition of `|sigma(1)|`. Preserves Neg and the even statistics
/// `emaj`/`edes`, flips the B length parity.
pub fn psi_b_first(s: &SignedPerm) -> EnumResult<SignedPerm> {
    let n = s.rank();
    if n % 2 != 0 {
        return Err(EnumError::OutsideDomain(format!("{s} has odd rank")));
    }
    let first = s.window()[0];
    Ok(star_transpose_signed(pair_index(first.unsigned_abs()), s)?)
}

fn tilde_neg(s: &SignedPerm, odd_positions: bool) -> EnumResult<SignedPerm> {
    let w = s.window();
    let start = if odd_positions { 1 } else { 2 };
    let mut i = start;
    while i < w.len() {
        if w[i - 1].abs() > w[i].abs() {
            let mut out = w.to_vec();
            out[i] = -out[i];
            return Ok(SignedPerm::new(out)?);
        }
        i += 2;
    }
    Err(EnumError::OutsideDomain(format!(
        "{s} has no {} absolute descent",
        if odd_positions { "odd" } else { "even" }
    )))
}

/// Involution flipping the sign after the first odd-position absolute
/// descent: flips the parity of `neg`, preserves `omaj`, `odes`, `oneg`.
pub fn tilde_neg_odd(s: &SignedPerm) -> EnumResult<SignedPerm> {
    tilde_neg(s, true)
}

/// Even-position variant: preserves `emaj`, `edes`, `eneg`.
pub fn tilde_neg_even(s: &SignedPerm) -> EnumResult<SignedPerm> {
    tilde_neg(s, false)
}

/// An overpartition: weakly decreasing positive parts, where the final
/// occurrence of any distinct value may carry an overline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Overpartition {
    parts: Vec<u32>,
    overlined: Vec<bool>,
}

impl Overpartition {
    pub fn new(parts: Vec<u32>, overlined: Vec<bool>) -> EnumResult<Overpartition> {
        if parts.len() != overlined.len() {
            return Err(EnumError::BadParams("mismatched lengths".to_string()));
        }
        for k in 0..parts.len() {
            if parts[k] == 0 {
                return Err(EnumError::BadParams("zero part".to_string()));
            }
            if k + 1 < parts.len() && parts[k] < parts[k + 1] {
                return Err(EnumError::BadParams("parts must weakly decrease".to_string()));
            }
            if overlined[k] && k + 1 < parts.len() && parts[k + 1] == parts[k] {
                return Err(EnumError::BadParams(
                    "only the last occurrence of a value may be overlined".to_string(),
                ));
            }
        }
        Ok(Overpartition { parts, overlined })
    }

    pub fn empty() -> Overpartition {
        Overpartition {
            parts: Vec::new(),
            overlined: Vec::new(),
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn overlined(&self) -> &[bool] {
        &self.overlined
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "[]");
        }
        let pieces: Vec<String> = self
            .parts
            .iter()
            .zip(&self.overlined)
            .map(|(p, &o)| if o { format!("{p}'") } else { p.to_string() })
            .collect();
        write!(f, "[{}]", pieces.join(","))
    }
}

/// All overpartitions with largest part at most `max_part`, at most
/// `max_len` parts, and weight at most `max_weight` (the empty one
/// included), in a deterministic order.
pub fn overpartitions(max_part: u32, max_len: usize, max_weight: u32) -> Vec<Overpartition> {
    let mut out = Vec::new();
    let mut parts: Vec<u32> = Vec::new();
    fn expand(parts: &[u32], out: &mut Vec<Overpartition>) {
        // Positions eligible for an overline: last occurrence of each value.
        let mut last_pos = Vec::new();
        for k in 0..parts.len() {
            if k + 1 == parts.len() || parts[k + 1] != parts[k] {
                last_pos.push(k);
            }
        }
        for mask in 0u32..(1 << last_pos.len()) {
            let mut overlined = vec![false; parts.len()];
            for (bit, &k) in last_pos.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    overlined[k] = true;
                }
            }
            out.push(Overpartition {
                parts: parts.to_vec(),
                overlined,
            });
        }
    }
    fn rec(
        parts: &mut Vec<u32>,
        max_next: u32,
        len_left: usize,
        weight_left: u32,
        out: &mut Vec<Overpartition>,
    ) {
        expand(parts, out);
        if len_left == 0 {
            return;
        }
        let mut v = max_next.min(weight_left);
        while v >= 1 {
            parts.push(v);
            rec(parts, v, len_left - 1, weight_left - v, out);
            parts.pop();
            v -= 1;
        }
    }
    rec(&mut parts, max_part, max_len, max_weight, &mut out);
    out
}

/// The length-restricted overpartition polynomial: the weight generating
/// function of overpartitions with largest part at most `n` and exactly
/// `m` parts.
pub fn overpartition_poly(n: u32, m: usize, var: &str) -> PolyResult<MultiPoly> {
    let mut acc = MultiPoly::zero(&[var])?;
    for op in overpartitions(n, m, n * m as u32) {
        if op.num_parts() == m {
            acc = acc.add(&MultiPoly::monomial(&[var], 1, &[(var, op.weight())])?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> SignedPerm {
        SignedPerm::parse(s).unwrap()
    }

    fn collect(spec: &GroupSpec) -> Vec<Vec<i32>> {
        let mut v = Vec::new();
        spec.for_each(|w| v.push(w.to_vec())).unwrap();
        v
    }

    #[test]
    fn group_orders() {
        assert_eq!(collect(&GroupSpec::new(Family::A, 3)).len(), 6);
        assert_eq!(collect(&GroupSpec::new(Family::B, 2)).len(), 8);
        assert_eq!(collect(&GroupSpec::new(Family::D, 3)).len(), 24);
        assert_eq!(group_order(Family::B, 8), 10_321_920);
    }

    #[test]
    fn enumeration_is_lexicographic_and_duplicate_free() {
        let els = collect(&GroupSpec::new(Family::B, 2));
        let mut sorted = els.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(els, sorted);
        assert_eq!(els[0], vec![-2, -1]);
        assert_eq!(els.last().unwrap(), &vec![2, 1]);
    }

    #[test]
    fn quotient_size_and_correctness() {
        let spec = GroupSpec::new(Family::A, 4).with_quotient(IndexSet::from_iter([2]));
        let els = collect(&spec);
        assert_eq!(els.len(), 12);
        for w in &els {
            assert!(w[1] < w[2]);
        }
    }

    #[test]
    fn filters() {
        // sigma(2) > 0 and even neg over B_2.
        let spec = GroupSpec::new(Family::B, 2)
            .with_filter(Filter::SignAt {
                pos: 2,
                negative: false,
            })
            .with_filter(Filter::NegParity(0));
        assert_eq!(collect(&spec).len(), 2);

        let neg = GroupSpec::new(Family::B, 3)
            .with_filter(Filter::NegSet(IndexSet::from_iter([1, 3])));
        let els = collect(&neg);
        assert_eq!(els.len(), 6);
        for w in &els {
            assert!(w[0] < 0 && w[1] > 0 && w[2] < 0);
        }

        let abs = GroupSpec::new(Family::B, 3).with_filter(Filter::AbsAt { pos: 3, value: 3 });
        assert_eq!(collect(&abs).len(), 16);
    }

    #[test]
    fn chunks_partition_the_sweep() {
        let spec = GroupSpec::new(Family::B, 3);
        let all = collect(&spec);
        let mut chunked = Vec::new();
        for c in 0..spec.chunk_count() {
            spec.for_each_in_chunk(c, |w| chunked.push(w.to_vec()));
        }
        assert_eq!(all, chunked);
    }

    #[test]
    fn ceilings_guard_large_sweeps() {
        let spec = GroupSpec::new(Family::B, 9);
        assert!(matches!(
            spec.validate(),
            Err(EnumError::CeilingExceeded { .. })
        ));
        assert!(GroupSpec::new(Family::B, 9).with_force().validate().is_ok());
    }

    #[test]
    fn domino_membership() {
        assert!(is_domino_a(&Perm::parse("21534").unwrap()));
        assert!(!is_domino_a(&Perm::parse("23541").unwrap()));
        assert!(is_domino_b(&sp("[-3,-4,5,2,1]")));
        assert!(!is_domino_b(&sp("[3,-4,1,2]")));
        for n in 1..=8 {
            assert!(is_domino_a(&Perm::identity(n).unwrap()));
        }
    }

    #[test]
    fn domino_counts() {
        // |D(S_n)| = 2^(n/2 floor) * ceil(n/2)!.
        for (n, want) in [(1, 1u64), (2, 2), (3, 4), (4, 8), (5, 24), (6, 48)] {
            let spec = GroupSpec::new(Family::A, n).with_filter(Filter::Domino);
            assert_eq!(spec.for_each(|_| {}).unwrap(), want);
        }
        // |D(B_2m)| = 4^m m!.
        for (n, want) in [(2, 4u64), (4, 32), (6, 384)] {
            let spec = GroupSpec::new(Family::B, n).with_filter(Filter::Domino);
            assert_eq!(spec.for_each(|_| {}).unwrap(), want);
        }
    }

    #[test]
    fn domino_value_side_characterization_even_rank() {
        // For even rank, domino membership can be read off the values:
        // |sigma(i) - sigma(star(i))| <= 1 for all i in [n-1].
        for n in [2usize, 4, 6] {
            GroupSpec::new(Family::A, n)
                .for_each(|w| {
                    let value_side = (1..n).all(|i| {
                        let p = star(i as i32, n).unwrap() as usize;
                        (w[i - 1] - w[p - 1]).abs() <= 1
                    });
                    assert_eq!(value_side, is_domino_window(w));
                })
                .unwrap();
        }
    }

    #[test]
    fn domino_bijection_a_round_trip() {
        let sigma = Perm::parse("4213").unwrap();
        let s = IndexSet::from_iter([2, 3]);
        let u = domino_bij_a(&sigma, s).unwrap();
        assert_eq!(u, Perm::parse("78432156").unwrap());
        let (back, back_s) = domino_inv_a(&u).unwrap();
        assert_eq!(back, sigma);
        assert_eq!(back_s, s);
        assert!(domino_inv_a(&Perm::parse("2314").unwrap()).is_err());
        assert_eq!(
            domino_bij_a(&Perm::identity(2).unwrap(), IndexSet::EMPTY).unwrap(),
            Perm::identity(4).unwrap()
        );
    }

    #[test]
    fn domino_bijection_b_round_trip() {
        let sigma = sp("[3,-1,-2,5,-4]");
        let s = IndexSet::from_iter([1, 4, 5]);
        let u = domino_bij_b(&sigma, s).unwrap();
        assert_eq!(u, sp("[6,5,-2,-1,-4,-3,10,9,-7,-8]"));
        let (back, back_s) = domino_inv_b(&u).unwrap();
        assert_eq!(back, sigma);
        assert_eq!(back_s, s);
        assert!(domino_inv_b(&sp("[2,-1,3,4]")).is_err());
    }

    #[test]
    fn domino_bijection_b_is_onto() {
        // Every signed domino permutation of rank 2m arises exactly once.
        let mut images = Vec::new();
        GroupSpec::new(Family::B, 2)
            .for_each(|w| {
                let sigma = SignedPerm::new(w.to_vec()).unwrap();
                for s in IndexSet::subsets_of_interval(1, 2) {
                    images.push(domino_bij_b(&sigma, s).unwrap());
                }
            })
            .unwrap();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 32);
        for u in &images {
            assert!(is_domino_b(u));
        }
    }

    #[test]
    fn involution_domains() {
        assert!(iota_a(&Perm::parse("21534").unwrap()).is_err());
        let p = Perm::parse("23541").unwrap();
        let q = iota_a(&p).unwrap();
        assert_eq!(iota_a(&q).unwrap(), p);
        assert!(psi_b_last(&sp("[1,2,-3]")).is_err());
        assert!(psi_b_last(&sp("[1,2]")).is_err());
        assert!(psi_b_first(&sp("[1,2,3]")).is_err());
        assert!(tilde_neg_odd(&sp("[1,2,3]")).is_err());
        assert!(tilde_neg_even(&sp("[2,1,3]")).is_err());
    }

    #[test]
    fn tilde_neg_flips_the_later_sign() {
        let s = sp("[2,1,3]");
        assert_eq!(tilde_neg_odd(&s).unwrap(), sp("[2,-1,3]"));
        let t = sp("[1,3,2]");
        assert_eq!(tilde_neg_even(&t).unwrap(), sp("[1,3,-2]"));
    }

    #[test]
    fn overpartition_small_counts() {
        // Weight exactly 3, parts at most 3: eight objects.
        let of3: Vec<_> = overpartitions(3, 3, 3)
            .into_iter()
            .filter(|op| op.weight() == 3)
            .collect();
        assert_eq!(of3.len(), 8);
        // Parts at most 2 drops the two containing a 3.
        let capped: Vec<_> = overpartitions(2, 3, 3)
            .into_iter()
            .filter(|op| op.weight() == 3)
            .collect();
        assert_eq!(capped.len(), 6);
        assert_eq!(overpartitions(0, 5, 5).len(), 1);
    }

    #[test]
    fn overpartition_display_and_validation() {
        let op = Overpartition::new(vec![2, 1, 1], vec![true, false, true]).unwrap();
        assert_eq!(op.to_string(), "[2',1,1']");
        assert_eq!(op.weight(), 4);
        assert!(Overpartition::new(vec![1, 2], vec![false, false]).is_err());
        assert!(Overpartition::new(vec![2, 2], vec![true, false]).is_err());
        assert_eq!(Overpartition::empty().to_string(), "[]");
    }

    #[test]
    fn overpartition_polynomials() {
        let p32 = overpartition_poly(3, 2, "q").unwrap();
        assert_eq!(p32.to_string(), "2*q^2 + 4*q^3 + 6*q^4 + 4*q^5 + 2*q^6");
        assert!(p32.is_symmetric(8).unwrap());
        assert!(p32.is_unimodal().unwrap());
        let p22 = overpartition_poly(2, 2, "q").unwrap();
        assert!(p22.is_symmetric(6).unwrap());
    }
}
