//! Named numeric statistics of group elements, addressable by token for
//! generic generating-function plumbing.
//!
//! The descent-based statistics are polymorphic: on a plain permutation
//! they use the A convention (descents in `[1, n-1]`), on a signed one the
//! B convention (descents in `[0, n-1]` with `sigma(0) = 0`). The `*D`
//! family evaluates the B statistics of `|sigma|_n` (last entry made
//! positive), which is how the D statistics are defined.
//!
//! Odd/even split conventions: a descent at position `i` contributes
//! `(i+1)/2` to `omaj` when `i` is odd and `i/2` to `emaj` when `i` is even
//! (so a descent at 0 counts in `edes` but adds nothing to `emaj`);
//! a negative entry at an odd/even window position counts in `oneg`/`eneg`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{
    descent_set_a, descent_set_b_window, length_a, length_b_window, neg_set_window, IndexSet,
    Perm, SignedPerm, MAX_RANK,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatError {
    #[error("unknown statistic `{0}`")]
    UnknownStat(String),
    #[error("statistic `{stat}` is not defined on {carrier}")]
    CarrierMismatch { stat: StatName, carrier: String },
}

pub type StatResult<T> = Result<T, StatError>;

/// Which group family an enumeration or binding refers to.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::D => write!(f, "D"),
        }
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family `{other}` (expected A, B, or D)")),
        }
    }
}

/// A group element a statistic can be evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    A(Perm),
    B(SignedPerm),
}

impl Element {
    pub fn rank(&self) -> usize {
        match self {
            Element::A(p) => p.rank(),
            Element::B(s) => s.rank(),
        }
    }

    pub fn window(&self) -> &[i32] {
        match self {
            Element::A(p) => p.window(),
            Element::B(s) => s.window(),
        }
    }
}

macro_rules! stat_names {
    ($($variant:ident => $token:literal),+ $(,)?) => {
        /// Every statistic in the crate, by its CLI token.
        #[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum StatName {
            $($variant),+
        }

        impl StatName {
            pub const ALL: &'static [StatName] = &[$(StatName::$variant),+];

            pub fn token(&self) -> &'static str {
                match self {
                    $(StatName::$variant => $token),+
                }
            }
        }

        impl FromStr for StatName {
            type Err = StatError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($token => Ok(StatName::$variant),)+
                    other => Err(StatError::UnknownStat(other.to_string())),
                }
            }
        }
    };
}

stat_names! {
    Des => "des",
    Maj => "maj",
    Odes => "odes",
    Edes => "edes",
    Omaj => "omaj",
    Emaj => "emaj",
    Neg => "neg",
    Oneg => "oneg",
    Eneg => "eneg",
    Fmaj => "fmaj",
    Ofmaj => "ofmaj",
    Efmaj => "efmaj",
    Dmaj => "dmaj",
    Odmaj => "odmaj",
    Edmaj => "edmaj",
    OdesD => "odesD",
    EdesD => "edesD",
    OnegD => "onegD",
    EnegD => "enegD",
    LenA => "lenA",
    LenB => "lenB",
    LenD => "lenD",
    OddlenA => "oddlenA",
    OddlenB => "oddlenB",
}

impl fmt::Display for StatName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl StatName {
    /// Is this statistic meaningful for elements of the given family?
    pub fn legal_for(&self, family: Family) -> bool {
        use StatName::*;
        match family {
            Family::A => matches!(self, Des | Maj | Odes | Edes | Omaj | Emaj | LenA | OddlenA),
            Family::B => !matches!(self, LenD | OddlenA),
            Family::D => !matches!(self, OddlenA),
        }
    }
}

/// Descent-derived quantities of a descent set.
pub(crate) fn des_of(bits: IndexSet) -> u64 {
    bits.len() as u64
}

pub(crate) fn maj_of(bits: IndexSet) -> u64 {
    bits.iter().map(|i| i as u64).sum()
}

pub(crate) fn odes_of(bits: IndexSet) -> u64 {
    bits.odd_part().len() as u64
}

pub(crate) fn edes_of(bits: IndexSet) -> u64 {
    bits.even_part().len() as u64
}

pub(crate) fn omaj_of(bits: IndexSet) -> u64 {
    bits.odd_part().iter().map(|i| ((i + 1) / 2) as u64).sum()
}

pub(crate) fn emaj_of(bits: IndexSet) -> u64 {
    bits.even_part().iter().map(|i| (i / 2) as u64).sum()
}

/// Mixed-parity inversions of a plain window (1-based positions).
pub(crate) fn odd_length_a_window(w: &[i32]) -> u64 {
    let n = w.len();
    let mut count = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if w[i] > w[j] && (j - i) % 2 == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Half the mixed-parity inversions of the full signed sequence on
/// `{-n, ..., n}` with `sigma(0) := 0` and `sigma(-i) = -sigma(i)`.
pub(crate) fn odd_length_b_window(w: &[i32]) -> u64 {
    let n = w.len() as i32;
    let val = |i: i32| -> i32 {
        if i == 0 {
            0
        } else if i > 0 {
            w[(i - 1) as usize]
        } else {
            -w[(-i - 1) as usize]
        }
    };
    let mut count = 0u64;
    for i in -n..=n {
        for j in i + 1..=n {
            if (i - j) % 2 != 0 && val(i) > val(j) {
                count += 1;
            }
        }
    }
    count / 2
}

/// `L`: the odd length of a plain permutation.
pub fn odd_length_a(p: &Perm) -> u64 {
    odd_length_a_window(p.window())
}

/// `L_B`: the odd length of a signed permutation.
pub fn odd_length_b(s: &SignedPerm) -> u64 {
    odd_length_b_window(s.window())
}

/// Hot path: evaluate an A-convention statistic on a plain window.
/// The caller guarantees the window is a valid permutation.
pub(crate) fn eval_window_a(name: StatName, w: &[i32]) -> u64 {
    use StatName::*;
    match name {
        LenA => length_a(w),
        OddlenA => odd_length_a_window(w),
        _ => {
            let d = descent_set_a(w);
            match name {
                Des => des_of(d),
                Maj => maj_of(d),
                Odes => odes_of(d),
                Edes => edes_of(d),
                Omaj => omaj_of(d),
                Emaj => emaj_of(d),
                _ => unreachable!("{name} is not an A statistic"),
            }
        }
    }
}

/// Hot path: evaluate a B-convention statistic (including the `*D` family
/// and `lenD`) on a signed window. The caller guarantees validity, and for
/// `lenD` an even negative count.
pub(crate) fn eval_window_b(name: StatName, w: &[i32]) -> u64 {
    use StatName::*;
    match name {
        LenA => length_a(w),
        LenB => length_b_window(w),
        LenD => {
            let neg = w.iter().filter(|&&v| v < 0).count() as u64;
            debug_assert!(neg % 2 == 0);
            length_b_window(w) - neg
        }
        OddlenB => odd_length_b_window(w),
        Dmaj | Odmaj | Edmaj | OdesD | EdesD | OnegD | EnegD => {
            let mut buf = [0i32; MAX_RANK];
            let n = w.len();
            buf[..n].copy_from_slice(w);
            buf[n - 1] = buf[n - 1].abs();
            let aw = &buf[..n];
            match name {
                Dmaj => eval_window_b(Fmaj, aw),
                Odmaj => eval_window_b(Ofmaj, aw),
                Edmaj => eval_window_b(Efmaj, aw),
                OdesD => eval_window_b(Odes, aw),
                EdesD => eval_window_b(Edes, aw),
                OnegD => eval_window_b(Oneg, aw),
                EnegD => eval_window_b(Eneg, aw),
                _ => unreachable!(),
            }
        }
        _ => {
            let d = descent_set_b_window(w);
            match name {
                Des => des_of(d),
                Maj => maj_of(d),
                Odes => odes_of(d),
                Edes => edes_of(d),
                Omaj => omaj_of(d),
                Emaj => emaj_of(d),
                _ => {
                    let neg = neg_set_window(w);
                    match name {
                        Neg => neg.len() as u64,
                        Oneg => neg.odd_part().len() as u64,
                        Eneg => neg.even_part().len() as u64,
                        Fmaj => 2 * maj_of(d) + neg.len() as u64,
                        Ofmaj => 2 * omaj_of(d) + neg.odd_part().len() as u64,
                        Efmaj => 2 * emaj_of(d) + neg.even_part().len() as u64,
                        _ => unreachable!("{name} is not a B statistic"),
                    }
                }
            }
        }
    }
}

/// Evaluate a statistic on an element, with carrier checking: plain
/// permutations carry the A-convention statistics, signed ones the rest,
/// and `lenD` additionally demands an even negative count.
pub fn eval_stat(name: StatName, x: &Element) -> StatResult<u64> {
    use StatName::*;
    match x {
        Element::A(p) => {
            if !name.legal_for(Family::A) {
                return Err(StatError::CarrierMismatch {
                    stat: name,
                    carrier: "a plain permutation".to_string(),
                });
            }
            Ok(eval_window_a(name, p.window()))
        }
        Element::B(s) => {
            if name == OddlenA {
                return Err(StatError::CarrierMismatch {
                    stat: name,
                    carrier: "a signed permutation".to_string(),
                });
            }
            if name == LenD && !s.is_even_neg() {
                return Err(StatError::CarrierMismatch {
                    stat: name,
                    carrier: "a signed permutation with odd negative count".to_string(),
                });
            }
            Ok(eval_window_b(name, s.window()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(src: &str) -> Element {
        Element::A(Perm::parse(src).unwrap())
    }

    fn b(src: &str) -> Element {
        Element::B(SignedPerm::parse(src).unwrap())
    }

    fn ev(name: &str, x: &Element) -> u64 {
        eval_stat(name.parse().unwrap(), x).unwrap()
    }

    #[test]
    fn worked_example_type_a() {
        let p = a("81725634");
        assert_eq!(ev("odes", &p), 2);
        assert_eq!(ev("edes", &p), 1);
        assert_eq!(ev("omaj", &p), 3);
        assert_eq!(ev("emaj", &p), 3);
        assert_eq!(ev("des", &p), 3);
        assert_eq!(ev("maj", &p), 10);
    }

    #[test]
    fn worked_example_type_b() {
        let s = b("[-2,5,3,1,-4]");
        assert_eq!(ev("omaj", &s), 2);
        assert_eq!(ev("odes", &s), 1);
        assert_eq!(ev("oneg", &s), 2);
        assert_eq!(ev("emaj", &s), 3);
        assert_eq!(ev("edes", &s), 3);
        assert_eq!(ev("eneg", &s), 0);
        assert_eq!(ev("ofmaj", &s), 6);
        assert_eq!(ev("efmaj", &s), 6);
        assert_eq!(ev("neg", &s), 2);
        assert_eq!(ev("maj", &s), 9);
        assert_eq!(ev("fmaj", &s), 20);
        assert_eq!(ev("lenA", &s), 7);
        assert_eq!(ev("lenB", &s), 13);
        assert_eq!(ev("lenD", &s), 11);
    }

    #[test]
    fn worked_example_type_d() {
        let s = b("[-2,5,3,1,-4]");
        assert_eq!(ev("odesD", &s), 1);
        assert_eq!(ev("odmaj", &s), 5);
        assert_eq!(ev("edesD", &s), 2);
        assert_eq!(ev("edmaj", &s), 2);
        assert_eq!(ev("onegD", &s), 1);
        assert_eq!(ev("enegD", &s), 0);
        assert_eq!(ev("dmaj", &s), 11);
    }

    #[test]
    fn identity_is_all_zero() {
        let p = a("12345");
        let s = b("[1,2,3,4,5]");
        for name in StatName::ALL {
            if name.legal_for(Family::A) {
                assert_eq!(eval_stat(*name, &p).unwrap(), 0, "{name} on identity");
            }
            if name.legal_for(Family::D) {
                assert_eq!(eval_stat(*name, &s).unwrap(), 0, "{name} on identity");
            }
        }
    }

    #[test]
    fn odd_lengths() {
        assert_eq!(ev("oddlenA", &a("21")), 1);
        assert_eq!(ev("oddlenA", &a("12")), 0);
        assert_eq!(ev("oddlenB", &b("[-1]")), 1);
        assert_eq!(ev("oddlenB", &b("[2,1]")), 1);
        assert_eq!(ev("oddlenB", &b("[1,2]")), 0);
    }

    #[test]
    fn carrier_mismatches() {
        assert!(eval_stat("neg".parse().unwrap(), &a("12")).is_err());
        assert!(eval_stat("oddlenA".parse().unwrap(), &b("[1,2]")).is_err());
        assert!(eval_stat("lenD".parse().unwrap(), &b("[-1,2]")).is_err());
        assert!("bogus".parse::<StatName>().is_err());
    }

    #[test]
    fn tokens_round_trip() {
        assert_eq!(StatName::ALL.len(), 24);
        for name in StatName::ALL {
            assert_eq!(name.token().parse::<StatName>().unwrap(), *name);
        }
        assert_eq!("odesD".parse::<StatName>().unwrap(), StatName::OdesD);
    }
}
