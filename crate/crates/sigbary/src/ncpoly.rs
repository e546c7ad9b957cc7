//! Noncommutative polynomials in leveled placeholder symbols.
//!
//! A polynomial lives in a fixed context (N, k): it may mention sample
//! symbols s_i^(j) for i in 1..=N and a placeholder y^(j), each carrying a
//! level j in 1..=k. Monomials are words in these symbols graded by the sum
//! of their levels, and anything above level k is truncated away eagerly, so
//! products mirror the truncated tensor algebra the symbols will be
//! evaluated in.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::format_rational;
use crate::tensor_algebra::{linear_combine, mul as tensor_mul, TensorSeq};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum SymbolKind {
    /// The i-th sample series, 1-based.
    Sample(usize),
    /// The running barycenter placeholder.
    Bary,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Symbol {
    kind: SymbolKind,
    level: usize,
}

impl Symbol {
    pub fn sample(index: usize, level: usize) -> Self {
        assert!(index >= 1, "sample indices are 1-based");
        assert!(level >= 1, "symbol levels start at 1");
        Symbol { kind: SymbolKind::Sample(index), level }
    }

    pub fn bary(level: usize) -> Self {
        assert!(level >= 1, "symbol levels start at 1");
        Symbol { kind: SymbolKind::Bary, level }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Sample(i) => write!(f, "s_{}^({})", i, self.level),
            SymbolKind::Bary => write!(f, "y^({})", self.level),
        }
    }
}

/// A word in symbols; the empty word is the constant monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcMonomial {
    symbols: Vec<Symbol>,
}

impl NcMonomial {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        NcMonomial { symbols }
    }

    pub fn one() -> Self {
        NcMonomial { symbols: Vec::new() }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn level(&self) -> usize {
        self.symbols.iter().map(Symbol::level).sum()
    }
}

impl Ord for NcMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl PartialOrd for NcMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcPoly {
    num_samples: usize,
    level: usize,
    terms: BTreeMap<NcMonomial, BigRational>,
}

fn check_ctx(a: &NcPoly, b: &NcPoly) -> Result<()> {
    if a.num_samples != b.num_samples || a.level != b.level {
        return Err(Error::ContextMismatch(a.num_samples, a.level, b.num_samples, b.level));
    }
    Ok(())
}

impl NcPoly {
    pub fn zero(num_samples: usize, level: usize) -> Self {
        assert!(num_samples >= 1, "need at least one sample symbol");
        assert!(level >= 1, "truncation level starts at 1");
        NcPoly { num_samples, level, terms: BTreeMap::new() }
    }

    pub fn one(num_samples: usize, level: usize) -> Self {
        Self::constant(num_samples, level, BigRational::one())
    }

    pub fn constant(num_samples: usize, level: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_samples, level);
        if !c.is_zero() {
            p.terms.insert(NcMonomial::one(), c);
        }
        p
    }

    fn check_symbol(&self, sym: &Symbol) -> Result<()> {
        if sym.level > self.level {
            return Err(Error::SymbolLevelOutOfRange { level: sym.level, max: self.level });
        }
        if let SymbolKind::Sample(i) = sym.kind {
            if i > self.num_samples {
                return Err(Error::SampleIndexOutOfRange { index: i, max: self.num_samples });
            }
        }
        Ok(())
    }

    pub fn symbol(num_samples: usize, level: usize, sym: Symbol) -> Result<Self> {
        let mut p = Self::zero(num_samples, level);
        p.check_symbol(&sym)?;
        p.terms.insert(NcMonomial::new(vec![sym]), BigRational::one());
        Ok(p)
    }

    pub fn from_terms(
        num_samples: usize,
        level: usize,
        terms: impl IntoIterator<Item = (NcMonomial, BigRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(num_samples, level);
        for (mono, coeff) in terms {
            for sym in mono.symbols() {
                p.check_symbol(sym)?;
            }
            if mono.level() > level {
                return Err(Error::GradeOutOfRange { component: mono.level(), level });
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = p.terms.entry(mono).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        p.prune();
        Ok(p)
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<NcMonomial, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, mono: &NcMonomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn constant_coeff(&self) -> BigRational {
        self.coeff(&NcMonomial::one())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_ctx(self, other)?;
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            let entry = out.terms.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_samples, self.level);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        NcPoly { num_samples: self.num_samples, level: self.level, terms }
    }

    /// Noncommutative product; monomials whose combined level exceeds the
    /// truncation are dropped on the spot.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_ctx(self, other)?;
        let mut out = Self::zero(self.num_samples, self.level);
        for (ma, ca) in &self.terms {
            let la = ma.level();
            for (mb, cb) in &other.terms {
                if la + mb.level() > self.level {
                    continue;
                }
                let mut symbols = ma.symbols.clone();
                symbols.extend_from_slice(&mb.symbols);
                let entry = out
                    .terms
                    .entry(NcMonomial { symbols })
                    .or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        out.prune();
        Ok(out)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mono, coeff)) in self.terms.iter().enumerate() {
            if idx == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(&coeff.abs()))?;
            for sym in mono.symbols() {
                write!(f, "*{sym}")?;
            }
        }
        Ok(())
    }
}

/// The part of f that is homogeneous of the given level.
pub fn graded_component(f: &NcPoly, component: usize) -> Result<NcPoly> {
    if component > f.level {
        return Err(Error::GradeOutOfRange { component, level: f.level });
    }
    let terms = f
        .terms
        .iter()
        .filter(|(m, _)| m.level() == component)
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    Ok(NcPoly { num_samples: f.num_samples, level: f.level, terms })
}

/// Multiplicative inverse of a polynomial with nonzero constant term, by the
/// geometric series in 1 - f/c, which terminates under truncation.
pub fn poly_inverse(f: &NcPoly) -> Result<NcPoly> {
    let c0 = f.constant_coeff();
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let one = NcPoly::one(f.num_samples, f.level);
    let u = one.sub(&f.scale(&c0.recip()))?;
    let mut acc = one.clone();
    let mut pow = one;
    for _ in 1..=f.level {
        pow = pow.mul(&u)?;
        acc = acc.add(&pow)?;
    }
    Ok(acc.scale(&c0.recip()))
}

/// exp of a polynomial with zero constant term.
pub fn poly_exp(f: &NcPoly) -> Result<NcPoly> {
    if !f.constant_coeff().is_zero() {
        return Err(Error::ConstantNotZero);
    }
    let mut acc = NcPoly::one(f.num_samples, f.level);
    let mut term = acc.clone();
    for l in 1..=f.level {
        term = term.mul(f)?;
        term = term.scale(&BigRational::new(BigInt::one(), BigInt::from(l)));
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// log of a polynomial with unit constant term.
pub fn poly_log(f: &NcPoly) -> Result<NcPoly> {
    if !f.constant_coeff().is_one() {
        return Err(Error::ConstantNotOne);
    }
    let u = f.sub(&NcPoly::one(f.num_samples, f.level))?;
    let mut acc = NcPoly::zero(f.num_samples, f.level);
    let mut pow = u.clone();
    for l in 1..=f.level {
        let sign = if l % 2 == 1 { 1 } else { -1 };
        let c = BigRational::new(BigInt::from(sign), BigInt::from(l));
        acc = acc.add(&pow.scale(&c))?;
        if l < f.level {
            pow = pow.mul(&u)?;
        }
    }
    Ok(acc)
}

fn embed(member: &TensorSeq, level: usize) -> TensorSeq {
    let mut e = TensorSeq::zero(member.dim(), member.level()).expect("member has a valid shape");
    e.set_component(level, member.component(level).to_vec())
        .expect("component shape matches");
    e
}

/// Evaluates f by the algebra morphism sending s_i^(j) to the level-j
/// component of sample[i-1], embedded back at level j. The polynomial must
/// not mention the placeholder y.
pub fn evaluate(f: &NcPoly, sample: &[TensorSeq]) -> Result<TensorSeq> {
    if sample.len() != f.num_samples {
        return Err(Error::SampleCountMismatch { expected: f.num_samples, found: sample.len() });
    }
    let first = &sample[0];
    for member in sample {
        if member.dim() != first.dim() || member.level() != first.level() {
            return Err(Error::ContextMismatch(
                first.dim(),
                first.level(),
                member.dim(),
                member.level(),
            ));
        }
    }
    if first.level() != f.level {
        return Err(Error::ContextMismatch(f.num_samples, f.level, first.dim(), first.level()));
    }
    let one = BigRational::one();
    let mut acc = TensorSeq::zero(first.dim(), first.level())?;
    for (mono, coeff) in &f.terms {
        let mut term = TensorSeq::one(first.dim(), first.level())?;
        for sym in mono.symbols() {
            let factor = match sym.kind {
                SymbolKind::Sample(i) => embed(&sample[i - 1], sym.level),
                SymbolKind::Bary => {
                    return Err(Error::UnboundBarySymbol { level: sym.level });
                }
            };
            term = tensor_mul(&term, &factor)?;
        }
        acc = linear_combine(&one, &acc, coeff, &term)?;
    }
    Ok(acc)
}

/// Replaces every placeholder symbol y^(j) by bindings[j], leaving sample
/// symbols alone. Every placeholder level that occurs must be bound.
pub fn substitute(f: &NcPoly, bindings: &BTreeMap<usize, NcPoly>) -> Result<NcPoly> {
    for binding in bindings.values() {
        check_ctx(f, binding)?;
    }
    let mut acc = NcPoly::zero(f.num_samples, f.level);
    for (mono, coeff) in &f.terms {
        let mut term = NcPoly::constant(f.num_samples, f.level, coeff.clone());
        for sym in mono.symbols() {
            let factor = match sym.kind {
                SymbolKind::Sample(_) => NcPoly::symbol(f.num_samples, f.level, *sym)?,
                SymbolKind::Bary => bindings
                    .get(&sym.level)
                    .ok_or(Error::MissingBinding { level: sym.level })?
                    .clone(),
            };
            term = term.mul(&factor)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

static BARY_POLY_CACHE: OnceLock<Mutex<BTreeMap<(usize, usize), NcPoly>>> = OnceLock::new();

/// The polynomial q with q(x_1..x_N) equal to the barycenter of any
/// group-like sample x_1..x_N at truncation level k. Built once per (N, k)
/// and cached.
///
/// Construction: with y the running barycenter placeholder and
/// g = (1/N) * sum_i log(inverse(1 + sum_j y^(j)) * (1 + sum_j s_i^(j))),
/// the level-j slice of g + y is an update polynomial f_j that only involves
/// placeholders of level below j; eliminating them level by level and
/// summing gives q.
pub fn build_bary_poly(num_samples: usize, level: usize) -> NcPoly {
    assert!(num_samples >= 1, "need at least one sample");
    assert!(level >= 1, "truncation level starts at 1");
    let cache = BARY_POLY_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(found) = cache.lock().unwrap().get(&(num_samples, level)) {
        return found.clone();
    }

    let (n, k) = (num_samples, level);
    let series = |of: &dyn Fn(usize) -> Symbol| -> NcPoly {
        let mut acc = NcPoly::one(n, k);
        for j in 1..=k {
            let sym = NcPoly::symbol(n, k, of(j)).expect("symbol fits the context");
            acc = acc.add(&sym).expect("same context");
        }
        acc
    };

    let y_series = series(&Symbol::bary);
    let y_inv = poly_inverse(&y_series).expect("constant term is 1");
    let mut g = NcPoly::zero(n, k);
    for i in 1..=n {
        let s_series = series(&|j| Symbol::sample(i, j));
        let shifted = y_inv.mul(&s_series).expect("same context");
        g = g.add(&poly_log(&shifted).expect("constant term is 1")).expect("same context");
    }
    g = g.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));

    let mut bindings: BTreeMap<usize, NcPoly> = BTreeMap::new();
    let mut q = NcPoly::one(n, k);
    for j in 1..=k {
        let f_j = graded_component(&g, j)
            .expect("level in range")
            .add(&NcPoly::symbol(n, k, Symbol::bary(j)).expect("symbol fits"))
            .expect("same context");
        let p_j = substitute(&f_j, &bindings).expect("lower levels already bound");
        q = q.add(&p_j).expect("same context");
        bindings.insert(j, p_j);
    }

    cache.lock().unwrap().insert((num_samples, level), q.clone());
    q
}
