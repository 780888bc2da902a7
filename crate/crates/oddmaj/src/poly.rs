//! Exact sparse multivariate polynomials with `i64` coefficients.
//!
//! Everything downstream (generating functions, closed forms, identity
//! checks) compares polynomials for literal equality, so this module owns
//! the canonical form: variables sorted lexicographically, terms keyed by
//! exponent vector, no zero coefficients stored, and a deterministic text
//! rendering (ascending total degree, lexicographically descending exponent
//! vector within a degree).
//!
//! All coefficient arithmetic is checked; an overflow is an error, never a
//! silent wraparound.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVar(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division, remainder {0}")]
    InexactDivision(String),
    #[error("substitution gives a negative exponent of `{0}`")]
    NegativeExponent(String),
    #[error("shape query requires a univariate polynomial")]
    NotUnivariate,
    #[error("argument out of range: {0}")]
    BadArg(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type PolyResult<T> = Result<T, PolyError>;

/// A monomial image used by [`MultiPoly::substitute_monomials`]: a signed
/// coefficient times a product of variables raised to (possibly negative)
/// integer powers.
#[derive(Debug, Clone)]
pub struct MonomialImage {
    pub coeff: i64,
    pub powers: Vec<(String, i64)>,
}

impl MonomialImage {
    pub fn new(coeff: i64, powers: &[(&str, i64)]) -> Self {
        MonomialImage {
            coeff,
            powers: powers.iter().map(|(v, e)| (v.to_string(), *e)).collect(),
        }
    }
}

/// Sparse multivariate polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, i64>,
}

fn checked_add(a: i64, b: i64) -> PolyResult<i64> {
    a.checked_add(b).ok_or(PolyError::Overflow)
}

fn checked_mul(a: i64, b: i64) -> PolyResult<i64> {
    a.checked_mul(b).ok_or(PolyError::Overflow)
}

fn sorted_vars(vars: &[&str]) -> PolyResult<Vec<String>> {
    let mut vs: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    vs.sort();
    for w in vs.windows(2) {
        if w[0] == w[1] {
            return Err(PolyError::DuplicateVar(w[0].clone()));
        }
    }
    Ok(vs)
}

impl MultiPoly {
    /// The zero polynomial over the given variables (sorted internally).
    pub fn zero(vars: &[&str]) -> PolyResult<Self> {
        Ok(MultiPoly {
            vars: sorted_vars(vars)?,
            terms: BTreeMap::new(),
        })
    }

    /// A constant polynomial.
    pub fn constant(vars: &[&str], c: i64) -> PolyResult<Self> {
        let mut p = MultiPoly::zero(vars)?;
        if c != 0 {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        Ok(p)
    }

    pub fn one(vars: &[&str]) -> PolyResult<Self> {
        MultiPoly::constant(vars, 1)
    }

    /// The polynomial consisting of a single variable.
    pub fn var(vars: &[&str], name: &str) -> PolyResult<Self> {
        MultiPoly::monomial(vars, 1, &[(name, 1)])
    }

    /// coeff * prod var^exp as a one-term polynomial.
    pub fn monomial(vars: &[&str], coeff: i64, powers: &[(&str, u32)]) -> PolyResult<Self> {
        let mut p = MultiPoly::zero(vars)?;
        if coeff == 0 {
            return Ok(p);
        }
        let mut exps = vec![0u32; p.vars.len()];
        for (name, e) in powers {
            let idx = p.var_index(name)?;
            exps[idx] = exps[idx].checked_add(*e).ok_or(PolyError::ExponentOverflow)?;
        }
        p.terms.insert(exps, coeff);
        Ok(p)
    }

    /// Build directly from an exponent-vector map. The variable list must
    /// already be sorted and every key must have matching length; zero
    /// coefficients are dropped.
    pub(crate) fn from_terms(
        vars: Vec<String>,
        terms: BTreeMap<Vec<u32>, i64>,
    ) -> PolyResult<Self> {
        for w in vars.windows(2) {
            if w[0] >= w[1] {
                return Err(PolyError::DuplicateVar(w[1].clone()));
            }
        }
        for exps in terms.keys() {
            if exps.len() != vars.len() {
                return Err(PolyError::BadArg(
                    "exponent vector length mismatch".to_string(),
                ));
            }
        }
        Ok(MultiPoly {
            vars,
            terms: terms.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn var_index(&self, name: &str) -> PolyResult<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVar(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coeff(&self, exps: &[u32]) -> i64 {
        if exps.len() != self.vars.len() {
            return 0;
        }
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Coefficient addressed by (variable, exponent) pairs; omitted
    /// variables are taken to the power zero.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> PolyResult<i64> {
        let mut exps = vec![0u32; self.vars.len()];
        for (name, e) in powers {
            exps[self.var_index(name)?] = *e;
        }
        Ok(self.coeff(&exps))
    }

    /// Iterate terms as (exponent vector, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Maximum total degree (zero for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Maximum exponent of one variable.
    pub fn degree_in(&self, name: &str) -> PolyResult<u32> {
        let idx = self.var_index(name)?;
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    fn insert_term(&mut self, exps: Vec<u32>, coeff: i64) -> PolyResult<()> {
        if coeff == 0 {
            return Ok(());
        }
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c = checked_add(*c, coeff)?;
                if *c == 0 {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
        Ok(())
    }

    /// Rewrite both operands over the union of their variable sets.
    fn aligned(&self, other: &MultiPoly) -> PolyResult<(MultiPoly, MultiPoly)> {
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let mut union: Vec<String> = self.vars.clone();
        for v in &other.vars {
            if !union.contains(v) {
                union.push(v.clone());
            }
        }
        union.sort();
        let remap = |p: &MultiPoly| -> MultiPoly {
            let positions: Vec<usize> = p
                .vars
                .iter()
                .map(|v| union.iter().position(|u| u == v).unwrap())
                .collect();
            let mut terms = BTreeMap::new();
            for (exps, &c) in &p.terms {
                let mut out = vec![0u32; union.len()];
                for (i, &e) in exps.iter().enumerate() {
                    out[positions[i]] = e;
                }
                terms.insert(out, c);
            }
            MultiPoly {
                vars: union.clone(),
                terms,
            }
        };
        Ok((remap(self), remap(other)))
    }

    /// Equality after aligning variable sets (so `x` over vars {x} equals
    /// `x` over vars {x,y}).
    pub fn eq_aligned(&self, other: &MultiPoly) -> bool {
        match self.aligned(other) {
            Ok((a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }

    pub fn add(&self, other: &MultiPoly) -> PolyResult<MultiPoly> {
        let (mut a, b) = self.aligned(other)?;
        for (exps, c) in b.terms {
            a.insert_term(exps, c)?;
        }
        Ok(a)
    }

    pub fn sub(&self, other: &MultiPoly) -> PolyResult<MultiPoly> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, k: i64) -> PolyResult<MultiPoly> {
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        if k == 0 {
            return Ok(out);
        }
        for (exps, &c) in &self.terms {
            out.terms.insert(exps.clone(), checked_mul(c, k)?);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> PolyResult<MultiPoly> {
        let (a, b) = self.aligned(other)?;
        let mut out = MultiPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, &ca) in &a.terms {
            for (eb, &cb) in &b.terms {
                let mut exps = Vec::with_capacity(ea.len());
                for (x, y) in ea.iter().zip(eb.iter()) {
                    exps.push(x.checked_add(*y).ok_or(PolyError::ExponentOverflow)?);
                }
                out.insert_term(exps, checked_mul(ca, cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> PolyResult<MultiPoly> {
        let mut base = self.clone();
        let mut acc = MultiPoly::constant(
            &self.vars.iter().map(String::as_str).collect::<Vec<_>>(),
            1,
        )?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact multivariate division: returns the quotient when `den` divides
    /// `self` with zero remainder, otherwise reports the remainder.
    ///
    /// Standard single-divisor reduction along the lexicographic monomial
    /// order; for an exact division over the integers the leading term of
    /// the running remainder is always divisible by the leading term of the
    /// divisor, so hitting a non-divisible leading term proves inexactness.
    pub fn div_exact(&self, den: &MultiPoly) -> PolyResult<MultiPoly> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (mut rem, den) = self.aligned(den)?;
        let (lead_exp, lead_coeff) = {
            let (e, &c) = den.terms.iter().next_back().unwrap();
            (e.clone(), c)
        };
        let mut quot = MultiPoly {
            vars: rem.vars.clone(),
            terms: BTreeMap::new(),
        };
        while !rem.is_zero() {
            let (rexp, rcoeff) = {
                let (e, &c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), c)
            };
            let divisible = rexp.iter().zip(lead_exp.iter()).all(|(a, b)| a >= b)
                && rcoeff % lead_coeff == 0;
            if !divisible {
                return Err(PolyError::InexactDivision(rem.to_string()));
            }
            let texp: Vec<u32> = rexp.iter().zip(lead_exp.iter()).map(|(a, b)| a - b).collect();
            let tcoeff = rcoeff / lead_coeff;
            let mut t = MultiPoly {
                vars: rem.vars.clone(),
                terms: BTreeMap::new(),
            };
            t.terms.insert(texp.clone(), tcoeff);
            quot.insert_term(texp, tcoeff)?;
            rem = rem.sub(&t.mul(&den)?)?;
        }
        Ok(quot)
    }

    /// Substitute polynomials for variables; unbound variables persist.
    pub fn substitute(&self, bindings: &[(&str, &MultiPoly)]) -> PolyResult<MultiPoly> {
        for (name, _) in bindings {
            self.var_index(name)?;
        }
        // Result variable universe: unbound variables plus all image variables.
        let mut names: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| bindings.iter().all(|(b, _)| b != v))
            .map(String::as_str)
            .collect();
        for (_, img) in bindings {
            for v in &img.vars {
                if !names.contains(&v.as_str()) {
                    names.push(v);
                }
            }
        }
        let mut out = MultiPoly::zero(&names)?;
        for (exps, &c) in &self.terms {
            let mut term = MultiPoly::constant(&names, c)?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let vname = &self.vars[i];
                match bindings.iter().find(|(b, _)| b == vname) {
                    Some((_, img)) => {
                        let (aligned_img, _) = img.aligned(&out)?;
                        term = term.mul(&aligned_img.pow(e)?)?;
                    }
                    None => {
                        let v = MultiPoly::var(&names, vname)?;
                        term = term.mul(&v.pow(e)?)?;
                    }
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Substitute a monomial image (with possibly negative powers) for each
    /// bound variable. Every input term must map to a monomial with all
    /// exponents non-negative after combining; a surviving negative power is
    /// an error. Unbound variables persist.
    pub fn substitute_monomials(
        &self,
        bindings: &[(&str, MonomialImage)],
    ) -> PolyResult<MultiPoly> {
        for (name, _) in bindings {
            self.var_index(name)?;
        }
        let mut names: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| bindings.iter().all(|(b, _)| b != v))
            .map(String::as_str)
            .collect();
        for (_, img) in bindings {
            for (v, _) in &img.powers {
                if !names.contains(&v.as_str()) {
                    names.push(v);
                }
            }
        }
        let mut out = MultiPoly::zero(&names)?;
        for (exps, &c) in &self.terms {
            let mut coeff = c;
            let mut acc: Vec<i64> = vec![0; out.vars.len()];
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let vname = &self.vars[i];
                match bindings.iter().find(|(b, _)| b == vname) {
                    Some((_, img)) => {
                        for _ in 0..e {
                            coeff = checked_mul(coeff, img.coeff)?;
                        }
                        for (v, p) in &img.powers {
                            let idx = out.var_index(v)?;
                            let add = p.checked_mul(e as i64).ok_or(PolyError::ExponentOverflow)?;
                            acc[idx] = acc[idx].checked_add(add).ok_or(PolyError::ExponentOverflow)?;
                        }
                    }
                    None => {
                        let idx = out.var_index(vname)?;
                        acc[idx] = acc[idx]
                            .checked_add(e as i64)
                            .ok_or(PolyError::ExponentOverflow)?;
                    }
                }
            }
            let mut final_exps = Vec::with_capacity(acc.len());
            for (idx, &v) in acc.iter().enumerate() {
                if v < 0 {
                    return Err(PolyError::NegativeExponent(out.vars[idx].clone()));
                }
                if v > u32::MAX as i64 {
                    return Err(PolyError::ExponentOverflow);
                }
                final_exps.push(v as u32);
            }
            out.insert_term(final_exps, coeff)?;
        }
        Ok(out)
    }

    /// Drop every term whose exponent in a capped variable exceeds the cap.
    pub fn truncate(&self, caps: &[(&str, u32)]) -> PolyResult<MultiPoly> {
        let mut idx_caps = Vec::new();
        for (name, cap) in caps {
            idx_caps.push((self.var_index(name)?, *cap));
        }
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (exps, &c) in &self.terms {
            if idx_caps.iter().all(|&(i, cap)| exps[i] <= cap) {
                out.terms.insert(exps.clone(), c);
            }
        }
        Ok(out)
    }

    fn univariate_coeffs(&self) -> PolyResult<(u32, Vec<i64>)> {
        if self.vars.len() != 1 {
            return Err(PolyError::NotUnivariate);
        }
        if self.is_zero() {
            return Ok((0, vec![0]));
        }
        let lo = self.terms.keys().next().unwrap()[0];
        let hi = self.terms.keys().next_back().unwrap()[0];
        let mut coeffs = vec![0i64; (hi - lo + 1) as usize];
        for (exps, &c) in &self.terms {
            coeffs[(exps[0] - lo) as usize] = c;
        }
        Ok((lo, coeffs))
    }

    /// Is the coefficient sequence symmetric about `twice_center / 2`?
    /// The doubled center lets callers express half-integer centers exactly.
    pub fn is_symmetric(&self, twice_center: u32) -> PolyResult<bool> {
        if self.vars.len() != 1 {
            return Err(PolyError::NotUnivariate);
        }
        for (exps, &c) in &self.terms {
            match twice_center.checked_sub(exps[0]) {
                Some(mirror) if self.coeff(&[mirror]) == c => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Symmetry about the midpoint of the exponent support.
    pub fn is_symmetric_auto(&self) -> PolyResult<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        let (lo, coeffs) = self.univariate_coeffs()?;
        let hi = lo + coeffs.len() as u32 - 1;
        self.is_symmetric(lo + hi)
    }

    /// Weakly increasing then weakly decreasing over the contiguous
    /// exponent range of the support (interior zero coefficients count).
    pub fn is_unimodal(&self) -> PolyResult<bool> {
        let (_, coeffs) = self.univariate_coeffs()?;
        let mut i = 0;
        while i + 1 < coeffs.len() && coeffs[i] <= coeffs[i + 1] {
            i += 1;
        }
        while i + 1 < coeffs.len() && coeffs[i] >= coeffs[i + 1] {
            i += 1;
        }
        Ok(i + 1 == coeffs.len())
    }

    /// Terms in the canonical report order: ascending total degree, then
    /// lexicographically descending exponent vector.
    fn display_order(&self) -> Vec<(&Vec<u32>, i64)> {
        let mut items: Vec<(&Vec<u32>, i64)> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        items
    }

    /// JSON rendering: a list of `{"coeffs": c, "exponents": {var: e}}`
    /// objects in canonical term order.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .display_order()
            .into_iter()
            .map(|(exps, c)| {
                let mut map = serde_json::Map::new();
                for (i, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        map.insert(self.vars[i].clone(), serde_json::json!(e));
                    }
                }
                serde_json::json!({ "coeffs": c, "exponents": map })
            })
            .collect();
        serde_json::Value::Array(items)
    }

    /// Parse the canonical text format (also accepts juxtaposition like
    /// `12x^2` and parenthesized products).
    pub fn parse(src: &str) -> PolyResult<MultiPoly> {
        Parser::new(src).parse()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.display_order() {
            let mut mono = String::new();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.vars[i]);
                if e > 1 {
                    mono.push('^');
                    mono.push_str(&e.to_string());
                }
            }
            let mag = c.unsigned_abs();
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                mono
            } else {
                format!("{}*{}", mag, mono)
            };
            if first {
                if c < 0 {
                    write!(f, "-{}", body)?;
                } else {
                    write!(f, "{}", body)?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - {}", body)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    src_len: usize,
}

impl Parser {
    fn new(src: &str) -> Parser {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            match b {
                b' ' | b'\t' | b'\n' | b'\r' => i += 1,
                b'+' => {
                    toks.push((i, Tok::Plus));
                    i += 1;
                }
                b'-' => {
                    toks.push((i, Tok::Minus));
                    i += 1;
                }
                b'*' => {
                    toks.push((i, Tok::Star));
                    i += 1;
                }
                b'^' => {
                    toks.push((i, Tok::Caret));
                    i += 1;
                }
                b'(' => {
                    toks.push((i, Tok::LParen));
                    i += 1;
                }
                b')' => {
                    toks.push((i, Tok::RParen));
                    i += 1;
                }
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text = &src[start..i];
                    match text.parse::<i64>() {
                        Ok(v) => toks.push((start, Tok::Int(v))),
                        Err(_) => {
                            toks.push((start, Tok::Int(i64::MAX)));
                        }
                    }
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Ident(src[start..i].to_string())));
                }
                _ => {
                    toks.push((i, Tok::Ident(String::new())));
                    i += 1;
                }
            }
        }
        Parser {
            toks,
            pos: 0,
            src_len: src.len(),
        }
    }

    fn err<T>(&self, msg: &str) -> PolyResult<T> {
        let pos = self
            .toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.src_len);
        Err(PolyError::Parse {
            pos,
            msg: msg.to_string(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn parse(&mut self) -> PolyResult<MultiPoly> {
        // First pass: collect every identifier so the variable universe is
        // fixed before any arithmetic happens.
        let mut names: Vec<String> = Vec::new();
        for (pos, t) in &self.toks {
            if let Tok::Ident(name) = t {
                if name.is_empty() {
                    return Err(PolyError::Parse {
                        pos: *pos,
                        msg: "unexpected character".to_string(),
                    });
                }
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
        }
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = self.expr(&name_refs)?;
        if self.pos != self.toks.len() {
            return self.err("trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self, vars: &[&str]) -> PolyResult<MultiPoly> {
        let mut acc = if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            self.term(vars)?.scale(-1)?
        } else {
            self.term(vars)?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term(vars)?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term(vars)?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, vars: &[&str]) -> PolyResult<MultiPoly> {
        let mut acc = self.factor(vars)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor(vars)?)?;
                }
                // Juxtaposition: `12x`, `x y`, `2(1+q)`.
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor(vars)?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self, vars: &[&str]) -> PolyResult<MultiPoly> {
        let base = match self.bump() {
            Some(Tok::Int(v)) => {
                if v == i64::MAX {
                    return self.err("integer literal out of range");
                }
                MultiPoly::constant(vars, v)?
            }
            Some(Tok::Ident(name)) => MultiPoly::var(vars, &name)?,
            Some(Tok::LParen) => {
                let inner = self.expr(vars)?;
                match self.bump() {
                    Some(Tok::RParen) => inner,
                    _ => return self.err("expected `)`"),
                }
            }
            Some(Tok::Minus) => return self.factor(vars)?.scale(-1),
            _ => return self.err("expected a factor"),
        };
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(e)) if (0..=u32::MAX as i64).contains(&e) => base.pow(e as u32),
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }
}

/// [n]_q = 1 + q + ... + q^{n-1}.
pub fn q_int(n: u32, var: &str) -> PolyResult<MultiPoly> {
    let mut p = MultiPoly::zero(&[var])?;
    for e in 0..n {
        p = p.add(&MultiPoly::monomial(&[var], 1, &[(var, e)])?)?;
    }
    Ok(p)
}

/// [n]_q! = prod_{k=1..n} [k]_q.
pub fn q_factorial(n: u32, var: &str) -> PolyResult<MultiPoly> {
    let mut p = MultiPoly::one(&[var])?;
    for k in 1..=n {
        p = p.mul(&q_int(k, var)?)?;
    }
    Ok(p)
}

/// Gaussian binomial coefficient, computed by exact division of factorials.
pub fn q_binomial(a: u32, b: u32, var: &str) -> PolyResult<MultiPoly> {
    if b > a {
        return Err(PolyError::BadArg(format!("binomial({a},{b})")));
    }
    let num = q_factorial(a, var)?;
    let den = q_factorial(b, var)?.mul(&q_factorial(a - b, var)?)?;
    num.div_exact(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> MultiPoly {
        MultiPoly::parse(s).unwrap()
    }

    #[test]
    fn canonical_display_order() {
        let p = parse("q1*q2 + 2*q2 + 2*q1 + 1");
        assert_eq!(p.to_string(), "1 + 2*q1 + 2*q2 + q1*q2");
        let q = parse("x^3*y*z + 3*x^2*y + 3*x*z + 1");
        assert_eq!(q.to_string(), "1 + 3*x*z + 3*x^2*y + x^3*y*z");
    }

    #[test]
    fn display_negative_and_zero() {
        assert_eq!(MultiPoly::zero(&["x"]).unwrap().to_string(), "0");
        let p = parse("-1 + x - 3*x^2");
        assert_eq!(p.to_string(), "-1 + x - 3*x^2");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "1 + 2*q1 + 2*q2 + q1*q2",
            "1 + 3*x*z + 3*x^2*y + x^3*y*z",
            "-4 + x^12",
            "0",
        ] {
            assert_eq!(parse(s).to_string(), s);
        }
    }

    #[test]
    fn parse_juxtaposition() {
        let a = parse("1+12x+23x^2+48x^3+23x^4+12x^5+x^6");
        let b = parse("1 + 12*x + 23*x^2 + 48*x^3 + 23*x^4 + 12*x^5 + x^6");
        assert_eq!(a, b);
    }

    #[test]
    fn mul_telescopes() {
        let p = parse("1-q").mul(&parse("1+q+q^2")).unwrap();
        assert_eq!(p, parse("1-q^3"));
    }

    #[test]
    fn product_of_binomials() {
        let p = parse("1+y").mul(&parse("1+y*x*q")).unwrap();
        assert_eq!(p, parse("1+y+y*x*q+y^2*x*q"));
    }

    #[test]
    fn div_exact_quotients() {
        let num = parse("1-q^3");
        assert_eq!(num.div_exact(&parse("1-q")).unwrap(), parse("1+q+q^2"));
        let prod = parse("1+y").mul(&parse("1+y*x*q")).unwrap();
        assert_eq!(prod.div_exact(&parse("1+y")).unwrap(), parse("1+y*x*q"));
    }

    #[test]
    fn div_exact_rejects_inexact() {
        let err = parse("1+q^2").div_exact(&parse("1+q")).unwrap_err();
        assert!(matches!(err, PolyError::InexactDivision(_)));
    }

    #[test]
    fn q_analogues() {
        assert_eq!(q_factorial(2, "q").unwrap(), parse("1+q"));
        assert!(q_factorial(1, "q").unwrap().eq_aligned(&parse("1")));
        assert_eq!(
            q_binomial(4, 2, "q").unwrap(),
            parse("1+q+2q^2+q^3+q^4")
        );
    }

    #[test]
    fn substitution_polynomial_images() {
        let p = parse("1+x*y");
        let q2 = parse("q^2");
        let q1 = parse("q");
        let out = p.substitute(&[("x", &q2), ("y", &q1)]).unwrap();
        assert_eq!(out, parse("1+q^3"));
    }

    #[test]
    fn substitution_monomial_images_laurent() {
        // q^2 * t with q -> x^2, t -> x^-1 lands on x^3.
        let p = parse("q^2*t");
        let out = p
            .substitute_monomials(&[
                ("q", MonomialImage::new(1, &[("x", 2)])),
                ("t", MonomialImage::new(1, &[("x", -1)])),
            ])
            .unwrap();
        assert_eq!(out, parse("x^3"));
        // t alone would go negative.
        let bad = parse("t").substitute_monomials(&[(
            "t",
            MonomialImage::new(1, &[("x", -1)]),
        )]);
        assert!(matches!(bad, Err(PolyError::NegativeExponent(_))));
    }

    #[test]
    fn symmetry_and_unimodality() {
        let p = parse("1+3q+3q^2+q^3");
        assert!(p.is_symmetric(3).unwrap());
        assert!(p.is_unimodal().unwrap());
        let dip = parse("1+q^2");
        assert!(!dip.is_unimodal().unwrap());
        let shifted = parse("2q^2+4q^3+6q^4+4q^5+2q^6");
        assert!(shifted.is_symmetric(8).unwrap());
        assert!(shifted.is_symmetric_auto().unwrap());
        assert!(shifted.is_unimodal().unwrap());
    }

    #[test]
    fn truncation_caps() {
        let p = parse("1 + x*q^3 + x^2*q + x^3");
        let t = p.truncate(&[("x", 2)]).unwrap();
        assert_eq!(t, parse("1 + x*q^3 + x^2*q"));
    }

    #[test]
    fn coefficient_overflow_is_an_error() {
        let big = MultiPoly::constant(&["x"], i64::MAX).unwrap();
        assert!(matches!(big.scale(2), Err(PolyError::Overflow)));
        assert!(matches!(big.mul(&big), Err(PolyError::Overflow)));
    }

    #[test]
    fn aligned_equality() {
        let a = MultiPoly::var(&["x"], "x").unwrap();
        let b = MultiPoly::var(&["x", "y"], "x").unwrap();
        assert_ne!(a, b);
        assert!(a.eq_aligned(&b));
    }
}
