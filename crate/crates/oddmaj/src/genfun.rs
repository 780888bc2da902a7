//! Twisted generating functions: exact multivariate sums of character-
//! weighted statistic monomials over any [`GroupSpec`], computed by
//! streaming enumeration with optional chunk-level parallelism.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::enumerate::{EnumError, GroupSpec};
use crate::perm::{descent_set_a, length_a, length_b_window};
use crate::poly::{MultiPoly, PolyError, PolyResult};
use crate::stats::{eval_window_a, eval_window_b, Family, StatError, StatName};

/// Exponents are packed eight bits per variable into a `u64` key.
pub const MAX_BOUND_STATS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenfunError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error("at most {MAX_BOUND_STATS} statistics can be bound at once, got {0}")]
    TooManyStats(usize),
    #[error("statistic `{0}` is not defined for family {1}")]
    IllegalStat(StatName, Family),
    #[error("character `{0}` requires family B")]
    IllegalCharacter(Character),
    #[error("jobs must be at least 1")]
    BadJobs,
}

pub type GenfunResult<T> = Result<T, GenfunError>;

/// The one-dimensional characters usable as weights: trivial, the length
/// sign (of the family's own length function), the negative-count sign,
/// and their product.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum Character {
    Trivial,
    SignLength,
    SignNeg,
    SignLengthNeg,
}

impl Character {
    pub const ALL: &'static [Character] = &[
        Character::Trivial,
        Character::SignLength,
        Character::SignNeg,
        Character::SignLengthNeg,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            Character::Trivial => "trivial",
            Character::SignLength => "sign",
            Character::SignNeg => "sign-neg",
            Character::SignLengthNeg => "sign-length-neg",
        }
    }

    /// Evaluate on a window of the given family; the length sign uses the
    /// family's own length function.
    pub(crate) fn value_on_window(&self, family: Family, w: &[i32]) -> i64 {
        let parity = match self {
            Character::Trivial => return 1,
            Character::SignLength => match family {
                Family::A => length_a(w),
                Family::B => length_b_window(w),
                Family::D => {
                    let neg = w.iter().filter(|&&v| v < 0).count() as u64;
                    length_b_window(w) - neg
                }
            },
            Character::SignNeg => w.iter().filter(|&&v| v < 0).count() as u64,
            Character::SignLengthNeg => {
                length_b_window(w) + w.iter().filter(|&&v| v < 0).count() as u64
            }
        };
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl FromStr for Character {
    type Err = GenfunError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(Character::Trivial),
            "sign" => Ok(Character::SignLength),
            "sign-neg" => Ok(Character::SignNeg),
            "sign-length-neg" => Ok(Character::SignLengthNeg),
            other => Err(GenfunError::Stat(StatError::UnknownStat(format!(
                "character `{other}` (expected trivial|sign|sign-neg|sign-length-neg)"
            )))),
        }
    }
}

fn eval_window(family: Family, name: StatName, w: &[i32]) -> u64 {
    match family {
        Family::A => eval_window_a(name, w),
        Family::B | Family::D => eval_window_b(name, w),
    }
}

/// `1 + coeff * prod var^exp` over the given variables.
pub fn one_plus_term(
    vars: &[&str],
    coeff: i64,
    powers: &[(&str, u32)],
) -> PolyResult<MultiPoly> {
    MultiPoly::one(vars)?.add(&MultiPoly::monomial(vars, coeff, powers)?)
}

pub fn factorial(n: u64) -> i64 {
    (1..=n as i64).product()
}

struct Plan {
    family: Family,
    stats: Vec<StatName>,
    /// stats[k] feeds the variable at sorted position slots[k].
    slots: Vec<usize>,
    vars: Vec<String>,
    chi: Character,
}

impl Plan {
    fn eval(&self, w: &[i32]) -> (u64, i64) {
        let mut key = 0u64;
        for (k, &stat) in self.stats.iter().enumerate() {
            let e = eval_window(self.family, stat, w);
            debug_assert!(e < 256, "exponent {e} exceeds the packed range");
            key |= e << (8 * self.slots[k]);
        }
        (key, self.chi.value_on_window(self.family, w))
    }

    fn unpack(&self, key: u64) -> Vec<u32> {
        (0..self.vars.len())
            .map(|pos| ((key >> (8 * pos)) & 0xFF) as u32)
            .collect()
    }
}

fn build_plan(
    spec: &GroupSpec,
    chi: Character,
    bindings: &[(StatName, &str)],
) -> GenfunResult<Plan> {
    if bindings.len() > MAX_BOUND_STATS {
        return Err(GenfunError::TooManyStats(bindings.len()));
    }
    if matches!(chi, Character::SignNeg | Character::SignLengthNeg) && spec.family == Family::A {
        return Err(GenfunError::IllegalCharacter(chi));
    }
    for (stat, _) in bindings {
        if !stat.legal_for(spec.family) {
            return Err(GenfunError::IllegalStat(*stat, spec.family));
        }
    }
    let var_refs: Vec<&str> = bindings.iter().map(|(_, v)| *v).collect();
    // Duplicate detection plus the canonical (sorted) variable order.
    let vars: Vec<String> = MultiPoly::zero(&var_refs)?.vars().to_vec();
    let slots = bindings
        .iter()
        .map(|(_, v)| vars.iter().position(|u| u == v).expect("var present"))
        .collect();
    Ok(Plan {
        family: spec.family,
        stats: bindings.iter().map(|(s, _)| *s).collect(),
        slots,
        vars,
        chi,
    })
}

/// The twisted generating function with its element count:
/// Σ of χ(σ) · Π var^stat(σ) over the selected group slice.
pub fn twisted_genfun_counted(
    spec: &GroupSpec,
    chi: Character,
    bindings: &[(StatName, &str)],
    jobs: usize,
) -> GenfunResult<(MultiPoly, u64)> {
    if jobs == 0 {
        return Err(GenfunError::BadJobs);
    }
    spec.validate()?;
    let plan = build_plan(spec, chi, bindings)?;
    let chunks = spec.chunk_count();
    let workers = jobs.min(chunks);

    let mut acc: HashMap<u64, i64> = HashMap::new();
    let mut count = 0u64;
    if workers <= 1 {
        for c in 0..chunks {
            count += spec.for_each_in_chunk(c, |w| {
                let (key, sign) = plan.eval(w);
                *acc.entry(key).or_insert(0) += sign;
            });
        }
    } else {
        let next = AtomicUsize::new(0);
        let parts: Vec<(HashMap<u64, i64>, u64)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    let plan = &plan;
                    let next = &next;
                    scope.spawn(move || {
                        let mut local: HashMap<u64, i64> = HashMap::new();
                        let mut seen = 0u64;
                        loop {
                            let c = next.fetch_add(1, Ordering::Relaxed);
                            if c >= chunks {
                                break;
                            }
                            seen += spec.for_each_in_chunk(c, |w| {
                                let (key, sign) = plan.eval(w);
                                *local.entry(key).or_insert(0) += sign;
                            });
                        }
                        (local, seen)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for (local, seen) in parts {
            count += seen;
            for (key, c) in local {
                *acc.entry(key).or_insert(0) += c;
            }
        }
    }

    let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for (key, c) in acc {
        if c != 0 {
            terms.insert(plan.unpack(key), c);
        }
    }
    let poly = MultiPoly::from_terms(plan.vars.clone(), terms)?;
    Ok((poly, count))
}

/// [`twisted_genfun_counted`] without the count.
pub fn twisted_genfun(
    spec: &GroupSpec,
    chi: Character,
    bindings: &[(StatName, &str)],
    jobs: usize,
) -> GenfunResult<MultiPoly> {
    Ok(twisted_genfun_counted(spec, chi, bindings, jobs)?.0)
}

/// The descent-set indicator polynomial of S_n over x_1..x_{n-1}:
/// Σ over permutations of Π over descent positions of x_i.
pub fn descent_set_genfun(n: usize) -> GenfunResult<MultiPoly> {
    if n == 0 || n > 8 {
        return Err(GenfunError::Enum(EnumError::BadParams(format!(
            "descent-set polynomial needs 1 <= n <= 8, got {n}"
        ))));
    }
    let names: Vec<String> = (1..n).map(|i| format!("x{i}")).collect();
    let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    GroupSpec::new(Family::A, n).for_each(|w| {
        let d = descent_set_a(w);
        let mut exps = vec![0u32; n - 1];
        for i in d.iter() {
            exps[i as usize - 1] = 1;
        }
        *terms.entry(exps).or_insert(0) += 1;
    })?;
    terms.retain(|_, c| *c != 0);
    Ok(MultiPoly::from_terms(names, terms)?)
}
