//! Infinite label sequences with exact asymptotic metadata.
//!
//! Terms are indexed from 1. Every built-in kind has closed-form limsup,
//! liminf, infimum, supremum and exceedance counts; `Custom` sequences carry
//! declared metadata that is checked against their finite prefix.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqError {
    InvalidDeclaration(String),
    InvalidParameter(String),
    /// An `Indexed` parameter outside any family template.
    Unbound,
    /// The answer depends on terms the declaration does not determine.
    Undetermined(String),
    NonPositiveEpsilon,
}

impl fmt::Display for SeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqError::InvalidDeclaration(m) => write!(f, "invalid custom sequence: {m}"),
            SeqError::InvalidParameter(m) => write!(f, "invalid sequence parameter: {m}"),
            SeqError::Unbound => write!(f, "family-indexed parameter used outside a family template"),
            SeqError::Undetermined(m) => write!(f, "not determined by the declaration: {m}"),
            SeqError::NonPositiveEpsilon => write!(f, "epsilon must be positive"),
        }
    }
}

impl core::error::Error for SeqError {}

/// A sequence parameter: a literal, or the `k`-th term of a sequence where
/// `k` is the index of the family member being built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Lit(Rational),
    Indexed(Box<LabelSeq>),
}

impl Scalar {
    pub fn lit(v: Rational) -> Self {
        Scalar::Lit(v)
    }

    pub fn indexed(s: LabelSeq) -> Self {
        Scalar::Indexed(Box::new(s))
    }

    pub fn value(&self) -> Result<&Rational, SeqError> {
        match self {
            Scalar::Lit(v) => Ok(v),
            Scalar::Indexed(_) => Err(SeqError::Unbound),
        }
    }

    pub fn at(&self, k: u64) -> Result<Scalar, SeqError> {
        match self {
            Scalar::Lit(v) => Ok(Scalar::Lit(v.clone())),
            Scalar::Indexed(s) => Ok(Scalar::Lit(s.term(k)?)),
        }
    }

    /// The scalar viewed as a sequence in the family index.
    pub fn as_seq_in_k(&self) -> LabelSeq {
        match self {
            Scalar::Lit(v) => LabelSeq::Const(Scalar::Lit(v.clone())),
            Scalar::Indexed(s) => (**s).clone(),
        }
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self, Scalar::Lit(_))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, SeqError> {
        match (self, other) {
            (Scalar::Lit(a), Scalar::Lit(b)) => Ok(Scalar::Lit(a * b)),
            (Scalar::Lit(a), Scalar::Indexed(s)) | (Scalar::Indexed(s), Scalar::Lit(a)) => {
                Ok(Scalar::indexed(s.scaled(&Scalar::Lit(a.clone()))?))
            }
            (Scalar::Indexed(_), Scalar::Indexed(_)) => {
                Err(SeqError::InvalidParameter(String::from("product of two indexed parameters")))
            }
        }
    }

    fn validate(&self, what: &str) -> Result<(), SeqError> {
        match self {
            Scalar::Lit(v) if v.is_negative() => Err(SeqError::InvalidParameter(format!("{what} is negative"))),
            Scalar::Lit(_) => Ok(()),
            Scalar::Indexed(s) => {
                if !s.is_concrete() {
                    return Err(SeqError::InvalidParameter(format!("{what}: nested indexed parameter")));
                }
                s.validate()
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Lit(v) => write!(f, "{v}"),
            Scalar::Indexed(s) => write!(f, "[{s}]_k"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Lit(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomSeq {
    pub prefix: Vec<Rational>,
    pub limsup: Rational,
    pub liminf: Rational,
    pub inf: Rational,
    pub vanishes: bool,
    /// Declares that no term beyond the prefix is zero.
    pub zero_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSeq {
    Const(Scalar),
    /// Prefix terms, then zeros.
    FiniteSupport(Vec<Rational>),
    /// `a / n`.
    Harmonic(Scalar),
    /// `a · r^(n-1)` with `0 < r < 1`.
    Geometric { a: Scalar, r: Scalar },
    /// `a / p_n` where `p_n` is the `n`-th prime.
    PrimeHarmonic(Scalar),
    /// Term `n` is term `n` (global index) of `seqs[(n - 1) % period]`.
    Modulated { period: u64, seqs: Vec<LabelSeq> },
    /// Term `n` is term `offset + (n - 1) · step` of `seq`.
    Subsequence { seq: Box<LabelSeq>, offset: u64, step: u64 },
    Custom(CustomSeq),
}

/// Arithmetic progression `offset, offset + step, …` of term indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prog {
    pub offset: u64,
    pub step: u64,
}

impl Prog {
    pub const ALL: Prog = Prog { offset: 1, step: 1 };

    pub fn nth(&self, j: u64) -> u64 {
        self.offset + j * self.step
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.offset && (n - self.offset).is_multiple_of(self.step)
    }

    /// Position (1-based) of `n` in the progression.
    pub fn position(&self, n: u64) -> Option<u64> {
        self.contains(n).then(|| (n - self.offset) / self.step + 1)
    }

    pub fn intersect(&self, other: &Prog) -> Option<Prog> {
        let step = self.step.lcm(&other.step);
        let limit = other.offset / self.step + step / self.step + 2;
        (0..=limit).map(|j| self.nth(j)).find(|&n| other.contains(n)).map(|offset| Prog { offset, step })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl core::ops::Add for Count {
    type Output = Count;

    fn add(self, other: Count) -> Count {
        match (self, other) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Infinite,
        }
    }
}

impl Count {
    pub fn is_finite(&self) -> bool {
        matches!(self, Count::Finite(_))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(k) => write!(f, "{k}"),
            Count::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqStats {
    pub limsup: Rational,
    pub liminf: Rational,
    pub inf: Rational,
    /// `None` when the declaration does not determine it.
    pub sup: Option<Rational>,
    pub vanishes: bool,
}

/// Which terms are zero: terms `1..=pre` listed, then a cycle of `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPattern {
    pub pre: u64,
    pub period: u64,
    bits: Vec<bool>,
}

impl ZeroPattern {
    fn uniform(zero: bool) -> Self {
        ZeroPattern { pre: 0, period: 1, bits: vec![zero] }
    }

    pub fn zero_at(&self, n: u64) -> bool {
        let i = if n <= self.pre { n - 1 } else { self.pre + (n - self.pre - 1) % self.period };
        self.bits[i as usize]
    }

    pub fn all_zero(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn any_zero(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    /// Smallest index with a zero term, if any.
    pub fn first_zero(&self) -> Option<u64> {
        self.bits.iter().position(|&b| b).map(|i| i as u64 + 1)
    }

    /// Combines patterns so that the result repeats whenever all inputs do.
    pub fn span<'a, I: IntoIterator<Item = &'a ZeroPattern>>(pats: I) -> (u64, u64) {
        pats.into_iter().fold((0, 1), |(pre, per), p| (pre.max(p.pre), per.lcm(&p.period)))
    }
}

/// Sequential primes by trial division.
pub(crate) struct Primes {
    found: Vec<u64>,
}

impl Primes {
    pub(crate) fn new() -> Self {
        Primes { found: Vec::new() }
    }

    pub(crate) fn nth(&mut self, n: u64) -> u64 {
        while (self.found.len() as u64) < n {
            let mut c = self.found.last().map_or(2, |&p| p + 1);
            while self.found.iter().take_while(|&&p| p * p <= c).any(|&p| c.is_multiple_of(p)) {
                c += 1;
            }
            self.found.push(c);
        }
        self.found[n as usize - 1]
    }
}

pub fn nth_prime(n: u64) -> u64 {
    Primes::new().nth(n)
}

impl LabelSeq {
    pub fn constant(c: Rational) -> Self {
        LabelSeq::Const(Scalar::Lit(c))
    }

    pub fn harmonic(a: Rational) -> Self {
        LabelSeq::Harmonic(Scalar::Lit(a))
    }

    pub fn geometric(a: Rational, r: Rational) -> Self {
        LabelSeq::Geometric { a: Scalar::Lit(a), r: Scalar::Lit(r) }
    }

    pub fn prime_harmonic(a: Rational) -> Self {
        LabelSeq::PrimeHarmonic(Scalar::Lit(a))
    }

    pub fn subsequence(seq: LabelSeq, offset: u64, step: u64) -> Self {
        LabelSeq::Subsequence { seq: Box::new(seq), offset, step }
    }

    /// True when no parameter is family-indexed.
    pub fn is_concrete(&self) -> bool {
        match self {
            LabelSeq::Const(c) | LabelSeq::Harmonic(c) | LabelSeq::PrimeHarmonic(c) => c.is_concrete(),
            LabelSeq::Geometric { a, r } => a.is_concrete() && r.is_concrete(),
            LabelSeq::FiniteSupport(_) | LabelSeq::Custom(_) => true,
            LabelSeq::Modulated { seqs, .. } => seqs.iter().all(LabelSeq::is_concrete),
            LabelSeq::Subsequence { seq, .. } => seq.is_concrete(),
        }
    }

    /// Every family-indexed parameter sequence occurring in `self`.
    pub fn indexed_params(&self) -> Vec<&LabelSeq> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a LabelSeq>) {
        let mut push = |s: &'a Scalar| {
            if let Scalar::Indexed(p) = s {
                out.push(&**p);
            }
        };
        match self {
            LabelSeq::Const(c) | LabelSeq::Harmonic(c) | LabelSeq::PrimeHarmonic(c) => push(c),
            LabelSeq::Geometric { a, r } => {
                push(a);
                push(r);
            }
            LabelSeq::FiniteSupport(_) | LabelSeq::Custom(_) => {}
            LabelSeq::Modulated { seqs, .. } => seqs.iter().for_each(|s| s.collect_params(out)),
            LabelSeq::Subsequence { seq, .. } => seq.collect_params(out),
        }
    }

    /// Replaces every indexed parameter by its `k`-th term.
    pub fn instantiate(&self, k: u64) -> Result<LabelSeq, SeqError> {
        Ok(match self {
            LabelSeq::Const(c) => LabelSeq::Const(c.at(k)?),
            LabelSeq::Harmonic(c) => LabelSeq::Harmonic(c.at(k)?),
            LabelSeq::PrimeHarmonic(c) => LabelSeq::PrimeHarmonic(c.at(k)?),
            LabelSeq::Geometric { a, r } => LabelSeq::Geometric { a: a.at(k)?, r: r.at(k)? },
            LabelSeq::FiniteSupport(_) | LabelSeq::Custom(_) => self.clone(),
            LabelSeq::Modulated { period, seqs } => LabelSeq::Modulated {
                period: *period,
                seqs: seqs.iter().map(|s| s.instantiate(k)).collect::<Result<_, _>>()?,
            },
            LabelSeq::Subsequence { seq, offset, step } => {
                LabelSeq::Subsequence { seq: Box::new(seq.instantiate(k)?), offset: *offset, step: *step }
            }
        })
    }

    /// Termwise product with a scalar.
    pub fn scaled(&self, c: &Scalar) -> Result<LabelSeq, SeqError> {
        let lit_only = |what: &str| match c {
            Scalar::Lit(v) => Ok(v.clone()),
            Scalar::Indexed(_) => Err(SeqError::InvalidParameter(format!("{what} cannot take an indexed scale"))),
        };
        Ok(match self {
            LabelSeq::Const(a) => LabelSeq::Const(a.mul(c)?),
            LabelSeq::Harmonic(a) => LabelSeq::Harmonic(a.mul(c)?),
            LabelSeq::PrimeHarmonic(a) => LabelSeq::PrimeHarmonic(a.mul(c)?),
            LabelSeq::Geometric { a, r } => LabelSeq::Geometric { a: a.mul(c)?, r: r.clone() },
            LabelSeq::FiniteSupport(p) => {
                let v = lit_only("finite_support")?;
                LabelSeq::FiniteSupport(p.iter().map(|t| t * &v).collect())
            }
            LabelSeq::Custom(cs) => {
                let v = lit_only("custom")?;
                LabelSeq::Custom(CustomSeq {
                    prefix: cs.prefix.iter().map(|t| t * &v).collect(),
                    limsup: &cs.limsup * &v,
                    liminf: &cs.liminf * &v,
                    inf: &cs.inf * &v,
                    vanishes: cs.vanishes || v.is_zero(),
                    zero_free: cs.zero_free && !v.is_zero(),
                })
            }
            LabelSeq::Modulated { period, seqs } => LabelSeq::Modulated {
                period: *period,
                seqs: seqs.iter().map(|s| s.scaled(c)).collect::<Result<_, _>>()?,
            },
            LabelSeq::Subsequence { seq, offset, step } => {
                LabelSeq::Subsequence { seq: Box::new(seq.scaled(c)?), offset: *offset, step: *step }
            }
        })
    }

    /// Structural simplification used when comparing sequences.
    pub fn normalized(&self) -> LabelSeq {
        match self {
            LabelSeq::Subsequence { seq, offset: 1, step: 1 } => seq.normalized(),
            LabelSeq::Subsequence { seq, offset, step } => {
                LabelSeq::Subsequence { seq: Box::new(seq.normalized()), offset: *offset, step: *step }
            }
            LabelSeq::Modulated { period, seqs } => {
                LabelSeq::Modulated { period: *period, seqs: seqs.iter().map(LabelSeq::normalized).collect() }
            }
            other => other.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), SeqError> {
        match self {
            LabelSeq::Const(c) => c.validate("const value"),
            LabelSeq::Harmonic(a) => a.validate("harmonic numerator"),
            LabelSeq::PrimeHarmonic(a) => a.validate("prime_harmonic numerator"),
            LabelSeq::Geometric { a, r } => {
                a.validate("geometric factor")?;
                r.validate("geometric ratio")?;
                let bad = || SeqError::InvalidParameter(String::from("geometric ratio must lie in (0, 1)"));
                match r {
                    Scalar::Lit(r) => {
                        if !r.is_positive() || r >= &Rational::one() {
                            return Err(bad());
                        }
                    }
                    Scalar::Indexed(s) => {
                        let sup = s.stats()?.sup.ok_or_else(|| {
                            SeqError::Undetermined(String::from("supremum of an indexed geometric ratio"))
                        })?;
                        if s.zero_pattern()?.any_zero() || sup >= Rational::one() {
                            return Err(bad());
                        }
                    }
                }
                Ok(())
            }
            LabelSeq::FiniteSupport(p) => {
                if p.iter().any(Rational::is_negative) {
                    return Err(SeqError::InvalidParameter(String::from("negative finite_support term")));
                }
                Ok(())
            }
            LabelSeq::Modulated { period, seqs } => {
                if *period == 0 || seqs.len() as u64 != *period {
                    return Err(SeqError::InvalidParameter(format!(
                        "modulated period {period} needs exactly {period} sub-sequences, got {}",
                        seqs.len()
                    )));
                }
                seqs.iter().try_for_each(LabelSeq::validate)
            }
            LabelSeq::Subsequence { seq, offset, step } => {
                if *offset == 0 || *step == 0 {
                    return Err(SeqError::InvalidParameter(String::from("subsequence offset and step must be >= 1")));
                }
                seq.validate()
            }
            LabelSeq::Custom(c) => c.validate(),
        }
    }

    /// Term `n` (1-based).
    pub fn term(&self, n: u64) -> Result<Rational, SeqError> {
        assert!(n >= 1, "terms are indexed from 1");
        Ok(match self {
            LabelSeq::Const(c) => c.value()?.clone(),
            LabelSeq::FiniteSupport(p) => p.get(n as usize - 1).cloned().unwrap_or_else(Rational::zero),
            LabelSeq::Harmonic(a) => a.value()? / &Rational::from(n),
            LabelSeq::Geometric { a, r } => a.value()? * &r.value()?.pow((n - 1) as u32),
            LabelSeq::PrimeHarmonic(a) => a.value()? / &Rational::from(nth_prime(n)),
            LabelSeq::Modulated { period, seqs } => seqs[((n - 1) % period) as usize].term(n)?,
            LabelSeq::Subsequence { seq, offset, step } => seq.term(offset + (n - 1) * step)?,
            LabelSeq::Custom(c) => c
                .prefix
                .get(n as usize - 1)
                .cloned()
                .ok_or_else(|| SeqError::Undetermined(format!("custom term {n} lies beyond the declared prefix")))?,
        })
    }

    pub fn stats(&self) -> Result<SeqStats, SeqError> {
        self.stats_on(Prog::ALL)
    }

    /// Metadata of the subsequence indexed by `prog`.
    pub fn stats_on(&self, prog: Prog) -> Result<SeqStats, SeqError> {
        let zero = Rational::zero;
        let decaying = |sup: Rational| SeqStats { limsup: zero(), liminf: zero(), inf: zero(), sup: Some(sup), vanishes: true };
        Ok(match self {
            LabelSeq::Const(c) => {
                let c = c.value()?.clone();
                SeqStats { limsup: c.clone(), liminf: c.clone(), inf: c.clone(), sup: Some(c.clone()), vanishes: c.is_zero() }
            }
            LabelSeq::FiniteSupport(p) => {
                let sup = (0..)
                    .map(|j| prog.nth(j))
                    .take_while(|&n| n as usize <= p.len())
                    .map(|n| p[n as usize - 1].clone())
                    .max()
                    .unwrap_or_else(zero);
                decaying(sup)
            }
            LabelSeq::Harmonic(_) | LabelSeq::Geometric { .. } | LabelSeq::PrimeHarmonic(_) => {
                decaying(self.term(prog.offset)?)
            }
            LabelSeq::Modulated { period, seqs } => {
                let mut acc: Option<SeqStats> = None;
                for (i, s) in seqs.iter().enumerate() {
                    let class = Prog { offset: i as u64 + 1, step: *period };
                    let Some(sub) = prog.intersect(&class) else { continue };
                    let st = s.stats_on(sub)?;
                    acc = Some(match acc {
                        None => st,
                        Some(a) => SeqStats {
                            limsup: a.limsup.max(st.limsup),
                            liminf: a.liminf.min(st.liminf),
                            inf: a.inf.min(st.inf),
                            sup: match (a.sup, st.sup) {
                                (Some(x), Some(y)) => Some(x.max(y)),
                                _ => None,
                            },
                            vanishes: a.vanishes && st.vanishes,
                        },
                    });
                }
                acc.expect("a progression meets at least one residue class")
            }
            LabelSeq::Subsequence { seq, offset, step } => {
                seq.stats_on(Prog { offset: offset + (prog.offset - 1) * step, step: prog.step * step })?
            }
            LabelSeq::Custom(c) => {
                if prog != Prog::ALL {
                    return Err(SeqError::Undetermined(String::from("metadata of a custom sequence's subsequence")));
                }
                SeqStats {
                    limsup: c.limsup.clone(),
                    liminf: c.liminf.clone(),
                    inf: c.inf.clone(),
                    sup: None,
                    vanishes: c.vanishes,
                }
            }
        })
    }

    pub fn count_geq(&self, eps: &Rational) -> Result<Count, SeqError> {
        self.count_geq_on(Prog::ALL, eps)
    }

    /// Number of terms `>= eps` among those indexed by `prog`.
    pub fn count_geq_on(&self, prog: Prog, eps: &Rational) -> Result<Count, SeqError> {
        if !eps.is_positive() {
            return Err(SeqError::NonPositiveEpsilon);
        }
        Ok(match self {
            LabelSeq::Const(c) => {
                if c.value()? >= eps {
                    Count::Infinite
                } else {
                    Count::Finite(0)
                }
            }
            LabelSeq::FiniteSupport(p) => Count::Finite(
                (0..)
                    .map(|j| prog.nth(j))
                    .take_while(|&n| n as usize <= p.len())
                    .filter(|&n| &p[n as usize - 1] >= eps)
                    .count() as u64,
            ),
            LabelSeq::Harmonic(a) => {
                let bound = (a.value()? / eps)
                    .floor_u64()
                    .ok_or_else(|| SeqError::Undetermined(String::from("count exceeds u64")))?;
                if bound >= prog.offset {
                    Count::Finite((bound - prog.offset) / prog.step + 1)
                } else {
                    Count::Finite(0)
                }
            }
            LabelSeq::Geometric { .. } | LabelSeq::PrimeHarmonic(_) => {
                // Nonincreasing in n; walk until the first term below eps.
                let mut k = 0;
                while &self.term(prog.nth(k))? >= eps {
                    k += 1;
                }
                Count::Finite(k)
            }
            LabelSeq::Modulated { period, seqs } => {
                let mut total = Count::Finite(0);
                for (i, s) in seqs.iter().enumerate() {
                    let class = Prog { offset: i as u64 + 1, step: *period };
                    if let Some(sub) = prog.intersect(&class) {
                        total = total + s.count_geq_on(sub, eps)?;
                    }
                }
                total
            }
            LabelSeq::Subsequence { seq, offset, step } => {
                seq.count_geq_on(Prog { offset: offset + (prog.offset - 1) * step, step: prog.step * step }, eps)?
            }
            LabelSeq::Custom(c) => {
                if prog != Prog::ALL {
                    return Err(SeqError::Undetermined(String::from("counts on a custom sequence's subsequence")));
                }
                if eps < &c.limsup {
                    Count::Infinite
                } else {
                    return Err(SeqError::Undetermined(format!(
                        "number of custom terms >= {eps} beyond the prefix"
                    )));
                }
            }
        })
    }

    /// Indices `n` (ascending) of the terms `>= eps`; requires a finite count.
    pub fn indices_geq(&self, eps: &Rational) -> Result<Vec<u64>, SeqError> {
        let Count::Finite(c) = self.count_geq(eps)? else {
            return Err(SeqError::Undetermined(format!("infinitely many terms >= {eps}")));
        };
        let mut out = Vec::with_capacity(c as usize);
        let mut n = 1;
        while (out.len() as u64) < c {
            if &self.term(n)? >= eps {
                out.push(n);
            }
            n += 1;
        }
        Ok(out)
    }

    pub fn zero_pattern(&self) -> Result<ZeroPattern, SeqError> {
        Ok(match self {
            LabelSeq::Const(c) | LabelSeq::Harmonic(c) | LabelSeq::PrimeHarmonic(c) => {
                ZeroPattern::uniform(c.value()?.is_zero())
            }
            LabelSeq::Geometric { a, .. } => ZeroPattern::uniform(a.value()?.is_zero()),
            LabelSeq::FiniteSupport(p) => {
                let mut bits: Vec<bool> = p.iter().map(Rational::is_zero).collect();
                bits.push(true);
                ZeroPattern { pre: p.len() as u64, period: 1, bits }
            }
            LabelSeq::Modulated { period, seqs } => {
                let subs = seqs.iter().map(LabelSeq::zero_pattern).collect::<Result<Vec<_>, _>>()?;
                let (pre, per) = ZeroPattern::span(&subs);
                let per = per.lcm(period);
                let bits = (1..=pre + per).map(|n| subs[((n - 1) % period) as usize].zero_at(n)).collect();
                ZeroPattern { pre, period: per, bits }
            }
            LabelSeq::Subsequence { seq, offset, step } => {
                let inner = seq.zero_pattern()?;
                let pre = if inner.pre >= *offset { (inner.pre - offset) / step + 1 } else { 0 };
                let bits = (1..=pre + inner.period).map(|n| inner.zero_at(offset + (n - 1) * step)).collect();
                ZeroPattern { pre, period: inner.period, bits }
            }
            LabelSeq::Custom(c) => {
                if !(c.inf.is_positive() || c.zero_free) {
                    return Err(SeqError::Undetermined(String::from(
                        "zero terms of a custom sequence beyond its prefix (declare zero_free or a positive inf)",
                    )));
                }
                let mut bits: Vec<bool> = c.prefix.iter().map(Rational::is_zero).collect();
                bits.push(false);
                ZeroPattern { pre: c.prefix.len() as u64, period: 1, bits }
            }
        })
    }

    pub fn is_cauchy_ray(&self) -> Result<bool, SeqError> {
        Ok(self.stats()?.vanishes)
    }

    /// Terms `1..=n`, for display.
    pub fn prefix(&self, n: u64) -> Vec<Rational> {
        (1..=n).map_while(|i| self.term(i).ok()).collect()
    }
}

impl CustomSeq {
    pub fn validate(&self) -> Result<(), SeqError> {
        let bad = |m: &str| Err(SeqError::InvalidDeclaration(String::from(m)));
        if self.prefix.iter().any(Rational::is_negative) || self.inf.is_negative() {
            return bad("terms must be nonnegative");
        }
        if self.inf > self.liminf || self.liminf > self.limsup {
            return bad("need inf <= liminf <= limsup");
        }
        if self.vanishes != self.limsup.is_zero() {
            return bad("a nonnegative sequence vanishes exactly when its limsup is 0");
        }
        if let Some(m) = self.prefix.iter().min() {
            if &self.inf > m {
                return bad("declared inf exceeds a prefix term");
            }
        }
        if self.zero_free && self.prefix.iter().any(Rational::is_zero) {
            return bad("zero_free declared but the prefix contains 0");
        }
        Ok(())
    }
}

impl fmt::Display for LabelSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelSeq::Const(c) => write!(f, "const({c})"),
            LabelSeq::FiniteSupport(p) => {
                write!(f, "finite_support(")?;
                for (i, t) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            LabelSeq::Harmonic(a) => write!(f, "{a}/n"),
            LabelSeq::Geometric { a, r } => write!(f, "{a}·({r})^(n-1)"),
            LabelSeq::PrimeHarmonic(a) => write!(f, "{a}/p_n"),
            LabelSeq::Modulated { period, seqs } => {
                write!(f, "modulated({period}; ")?;
                for (i, s) in seqs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
            LabelSeq::Subsequence { seq, offset, step } => write!(f, "({seq})[{offset} + {step}(n-1)]"),
            LabelSeq::Custom(c) => write!(f, "custom(limsup {}, liminf {}, inf {})", c.limsup, c.liminf, c.inf),
        }
    }
}
