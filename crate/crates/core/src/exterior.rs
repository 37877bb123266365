//! Bigraded exterior algebra over the coframe `φ¹..φⁿ, φ̄¹..φ̄ⁿ`.
//!
//! A [`Monomial`] is a pair of index sets stored as bitmasks. The canonical
//! order of generators is every holomorphic generator (ascending) followed by
//! every antiholomorphic one (ascending); all signs come from that order.
//! Packing `holo | anti << 16` into one `u32` realizes it as the bit order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_RANK: usize = 16;

/// A tagged coframe generator, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Holo(usize),
    Anti(usize),
}

impl Gen {
    pub(crate) fn bit(self) -> u32 {
        match self {
            Gen::Holo(i) => 1 << (i - 1),
            Gen::Anti(i) => 1 << (i - 1 + MAX_RANK),
        }
    }

    fn index(self) -> usize {
        match self {
            Gen::Holo(i) | Gen::Anti(i) => i,
        }
    }
}

/// Parses a generator word such as `"12b3"`: each digit is a holomorphic
/// generator, a trailing `b` marks it antiholomorphic. Only ranks up to 9.
pub fn parse_word(word: &str) -> Result<Vec<Gen>> {
    let mut out: Vec<Gen> = Vec::new();
    for c in word.chars() {
        match c {
            '1'..='9' => out.push(Gen::Holo(c as usize - '0' as usize)),
            'b' => match out.pop() {
                Some(Gen::Holo(i)) => out.push(Gen::Anti(i)),
                _ => return Err(Error::Parse(format!("dangling `b` in `{word}`"))),
            },
            ' ' | '_' => {}
            other => return Err(Error::Parse(format!("bad character `{other}` in `{word}`"))),
        }
    }
    Ok(out)
}

/// Pair of index sets `(I, J)` for `φ^I ∧ φ̄^J`; bit `k` stands for index `k+1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub holo: u16,
    pub anti: u16,
}

/// Number of pairs `(x ∈ a, y ∈ b)` with `x > y`, mod 2, as a sign.
pub(crate) fn merge_sign(a: u32, b: u32) -> i8 {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if y >= 31 { 0 } else { !((2u32 << y) - 1) };
        count += (a & above).count_ones();
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial { holo: 0, anti: 0 };

    pub fn from_bits(bits: u32) -> Self {
        Monomial {
            holo: (bits & 0xffff) as u16,
            anti: (bits >> 16) as u16,
        }
    }

    pub fn bits(self) -> u32 {
        self.holo as u32 | (self.anti as u32) << 16
    }

    /// Monomial from ascending-or-not index lists, with the sign of sorting each
    /// block. `None` on a repeated index.
    pub fn from_indices(n: usize, holo: &[usize], anti: &[usize]) -> Result<Option<(Monomial, i8)>> {
        let gens: Vec<Gen> = holo
            .iter()
            .map(|&i| Gen::Holo(i))
            .chain(anti.iter().map(|&i| Gen::Anti(i)))
            .collect();
        normalize_monomial(n, &gens)
    }

    /// `φ^{1..n} ∧ φ̄^{1..n}`.
    pub fn top(n: usize) -> Self {
        let mask = ((1u32 << n) - 1) as u16;
        Monomial { holo: mask, anti: mask }
    }

    pub fn bidegree(self) -> (usize, usize) {
        (self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }

    pub fn degree(self) -> usize {
        self.bits().count_ones() as usize
    }

    /// Highest index used, 0 for the unit.
    pub fn max_index(self) -> usize {
        let m = self.holo | self.anti;
        (16 - m.leading_zeros()) as usize
    }

    pub fn holo_indices(self) -> Vec<usize> {
        bits_to_indices(self.holo)
    }

    pub fn anti_indices(self) -> Vec<usize> {
        bits_to_indices(self.anti)
    }

    /// Generators in canonical order.
    pub fn generators(self) -> Vec<Gen> {
        self.holo_indices()
            .into_iter()
            .map(Gen::Holo)
            .chain(self.anti_indices().into_iter().map(Gen::Anti))
            .collect()
    }

    /// `self ∧ other = sign · result`, or `None` when they share a generator.
    pub fn wedge(self, other: Monomial) -> Option<(Monomial, i8)> {
        let (a, b) = (self.bits(), other.bits());
        if a & b != 0 {
            return None;
        }
        Some((Monomial::from_bits(a | b), merge_sign(a, b)))
    }

    /// `conj(φ^I φ̄^J) = (−1)^{|I||J|} φ^J φ̄^I`.
    pub fn conj(self) -> (Monomial, i8) {
        let (p, q) = self.bidegree();
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        (
            Monomial {
                holo: self.anti,
                anti: self.holo,
            },
            sign,
        )
    }

    /// Every monomial of bidegree `(p, q)` in rank `n`, ordered.
    pub fn of_bidegree(n: usize, p: usize, q: usize) -> Vec<Monomial> {
        let hs = subsets_of_size(n, p);
        let as_ = subsets_of_size(n, q);
        let mut out = Vec::with_capacity(hs.len() * as_.len());
        for &h in &hs {
            for &a in &as_ {
                out.push(Monomial { holo: h, anti: a });
            }
        }
        out
    }
}

/// Bitmasks of all `k`-subsets of `{1..n}`, in lexicographic order of the
/// ascending index lists.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<u16> {
    fn rec(start: usize, n: usize, k: usize, acc: u16, out: &mut Vec<u16>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

fn bits_to_indices(mut m: u16) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

fn write_indices(f: &mut fmt::Formatter<'_>, idx: &[usize]) -> fmt::Result {
    let wide = idx.iter().any(|&i| i > 9);
    for (k, i) in idx.iter().enumerate() {
        if wide && k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{i}")?;
    }
    Ok(())
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.holo_indices();
        let a = self.anti_indices();
        if h.is_empty() && a.is_empty() {
            return f.write_str("1");
        }
        if !h.is_empty() {
            f.write_str("φ^{")?;
            write_indices(f, &h)?;
            f.write_str("}")?;
        }
        if !a.is_empty() {
            if !h.is_empty() {
                f.write_str("∧")?;
            }
            f.write_str("φ̄^{")?;
            write_indices(f, &a)?;
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorts a generator word into canonical order. The sign is the parity of the
/// sorting permutation, or 0 when a generator repeats.
pub fn normalize_monomial(n: usize, gens: &[Gen]) -> Result<Option<(Monomial, i8)>> {
    check_rank(n)?;
    let mut acc = 0u32;
    let mut sign = 1i8;
    for &g in gens {
        let i = g.index();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let b = g.bit();
        if acc & b != 0 {
            return Ok(None);
        }
        // appending b after acc: inversions are the members of acc above b
        sign *= merge_sign(acc, b);
        acc |= b;
    }
    Ok(Some((Monomial::from_bits(acc), sign)))
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RANK {
        Err(Error::RankUnsupported(n))
    } else {
        Ok(())
    }
}

/// `σ_p = i^{p²} 2^{−p}`, evaluated literally.
pub fn sigma<S: Scalar>(p: usize) -> S {
    let ip = S::i().pow((p * p) as u32);
    let mut two_p = S::one();
    for _ in 0..p {
        two_p = two_p * S::from_int(2);
    }
    ip * two_p.inv().expect("nonzero")
}

/// An invariant form of rank `n`: a sparse map from monomials to nonzero
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct InvariantForm<S: Scalar> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> InvariantForm<S> {
    pub fn zero(n: usize) -> Self {
        check_rank(n).expect("rank");
        InvariantForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::from_monomial(n, Monomial::ONE, c)
    }

    pub fn from_monomial(n: usize, m: Monomial, c: S) -> Self {
        let mut f = Self::zero(n);
        assert!(m.max_index() <= n, "monomial {m} exceeds rank {n}");
        f.add_term(m, c);
        f
    }

    /// `c · g₁ ∧ g₂ ∧ …` for an arbitrary generator word.
    pub fn from_word(n: usize, gens: &[Gen], c: S) -> Result<Self> {
        match normalize_monomial(n, gens)? {
            None => Ok(Self::zero(n)),
            Some((m, s)) => Ok(Self::from_monomial(n, m, signed(c, s))),
        }
    }

    /// `c · word` with a word in the syntax of [`parse_word`].
    pub fn word(n: usize, word: &str, c: S) -> Result<Self> {
        Self::from_word(n, &parse_word(word)?, c)
    }

    /// The 1-form `φⁱ`.
    pub fn holo(n: usize, i: usize) -> Self {
        Self::from_word(n, &[Gen::Holo(i)], S::one()).expect("index")
    }

    /// The 1-form `φ̄ⁱ`.
    pub fn anti(n: usize, i: usize) -> Self {
        Self::from_word(n, &[Gen::Anti(i)], S::one()).expect("index")
    }

    /// Builds a form from `(word, coefficient)` pairs.
    pub fn from_words<'a>(n: usize, terms: impl IntoIterator<Item = (&'a str, S)>) -> Result<Self> {
        let mut f = Self::zero(n);
        for (w, c) in terms {
            f = f + Self::word(n, w, c)?;
        }
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, S> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact zero test (no stored terms).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_negligible(&self, eps: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(eps))
    }

    /// Largest coefficient modulus, 0 for the zero form.
    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    }

    pub fn coeff(&self, m: Monomial) -> S {
        self.terms.get(&m).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of the word, accounting for its reordering sign.
    pub fn coeff_of_word(&self, word: &str) -> Result<S> {
        match normalize_monomial(self.n, &parse_word(word)?)? {
            None => Ok(S::zero()),
            Some((m, s)) => Ok(signed(self.coeff(m), s)),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Drops coefficients within `eps` of zero.
    pub fn prune(mut self, eps: f64) -> Self {
        self.terms.retain(|_, c| !c.is_negligible(eps));
        self
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        same_rank(self, other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_rank(self, other)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = ma.wedge(*mb) {
                    out.add_term(m, signed(ca.clone() * cb.clone(), s));
                }
            }
        }
        Ok(out)
    }

    /// Antilinear involution swapping holomorphic and antiholomorphic slots.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let (mc, s) = m.conj();
            out.add_term(mc, signed(c.conj(), s));
        }
        out
    }

    pub fn bidegree_project(&self, p: usize, q: usize) -> Self {
        InvariantForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == (p, q))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Bidegrees that occur, each with its component.
    pub fn components(&self) -> BTreeMap<(usize, usize), Self> {
        let mut out: BTreeMap<(usize, usize), Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bidegree())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(*m, c.clone());
        }
        out
    }

    /// The common bidegree of all terms, if there is exactly one.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|m| m.bidegree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The common total degree of all terms, if there is exactly one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// `conj(f) = f`, up to `eps` on the float backend.
    pub fn is_real(&self, eps: f64) -> bool {
        (self.conjugate() - self.clone()).is_negligible(eps)
    }

    /// `c/σ_n` where `f = c φ^{1..n}∧φ̄^{1..n}`.
    pub fn volume_ratio(&self) -> Result<S> {
        let top = Monomial::top(self.n);
        if let Some(m) = self.terms.keys().find(|m| **m != top) {
            return Err(Error::NotTopDegree(m.to_string()));
        }
        Ok(self.coeff(top) * sigma::<S>(self.n).inv().expect("nonzero"))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> InvariantForm<T> {
        let mut out = InvariantForm::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Same form over another backend.
    pub fn convert<T: Scalar>(&self) -> InvariantForm<T> {
        self.map_coeffs(crate::scalar::convert::<S, T>)
    }

    /// Distance to `other` as the largest coefficient modulus of the difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).max_abs()
    }

    /// `f^k`, with `f⁰ = 1`.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::constant(self.n, S::one());
        for _ in 0..k {
            acc = acc.wedge(self).expect("same rank");
        }
        acc
    }

    /// Relabels indices through `perm` (`perm[i-1]` is the new index of `i`).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let gens: Vec<Gen> = m
                .generators()
                .into_iter()
                .map(|g| match g {
                    Gen::Holo(i) => Gen::Holo(perm[i - 1]),
                    Gen::Anti(i) => Gen::Anti(perm[i - 1]),
                })
                .collect();
            if let Some((mm, s)) = normalize_monomial(self.n, &gens).expect("permutation") {
                out.add_term(mm, signed(c.clone(), s));
            }
        }
        out
    }
}

pub(crate) fn signed<S: Scalar>(c: S, s: i8) -> S {
    match s {
        1 => c,
        -1 => -c,
        _ => S::zero(),
    }
}

fn same_rank<S: Scalar>(a: &InvariantForm<S>, b: &InvariantForm<S>) -> Result<()> {
    if a.n == b.n {
        Ok(())
    } else {
        Err(Error::RankMismatch(a.n, b.n))
    }
}

impl<S: Scalar> Add for InvariantForm<S> {
    type Output = Self;
    /// Panics on rank mismatch; use [`InvariantForm::try_add`] otherwise.
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("rank mismatch in form addition")
    }
}

impl<S: Scalar> Sub for InvariantForm<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_add(&-rhs).expect("rank mismatch in form subtraction")
    }
}

impl<S: Scalar> Neg for InvariantForm<S> {
    type Output = Self;
    fn neg(self) -> Self {
        InvariantForm {
            n: self.n,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for InvariantForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by_key(|m| (m.degree(), std::cmp::Reverse(m.bidegree()), m.holo.reverse_bits(), m.anti.reverse_bits()));
        for (k, m) in keys.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let c = &self.terms[m];
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c}){m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for InvariantForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] {}", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, q, CFloat, GaussRat};

    type F = InvariantForm<GaussRat>;

    fn w(word: &str, c: GaussRat) -> F {
        F::word(5, word, c).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let (m, s) = normalize_monomial(3, &parse_word("21").unwrap()).unwrap().unwrap();
        assert_eq!((m, s), (Monomial { holo: 0b11, anti: 0 }, -1));
        let (m, s) = normalize_monomial(3, &parse_word("11b22b").unwrap()).unwrap().unwrap();
        assert_eq!((m, s), (Monomial { holo: 0b11, anti: 0b11 }, -1));
        assert_eq!(normalize_monomial(3, &parse_word("11").unwrap()).unwrap(), None);
        assert!(matches!(
            normalize_monomial(3, &[Gen::Holo(4)]),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn wedge_examples() {
        let one = GaussRat::one();
        assert_eq!(w("1", one.clone()).wedge(&w("2", one.clone())).unwrap(), w("12", one.clone()));
        let prod = w("11b", one.clone()).wedge(&w("22b", one.clone())).unwrap();
        assert_eq!(prod, w("121b2b", -one.clone()));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma::<GaussRat>(1), GaussRat::from_ratios(0, 1, 1, 2));
        assert_eq!(sigma::<GaussRat>(2), q(1, 4));
        assert_eq!(sigma::<GaussRat>(3), GaussRat::from_ratios(0, 1, 1, 8));
        assert_eq!(sigma::<GaussRat>(0), q(1, 1));
    }

    #[test]
    fn volume_pairing_of_top_blocks() {
        // σ₃ φ^{123}φ̄^{123} ∧ σ₂ φ^{45}φ̄^{45} against σ₅ Vol
        let a = F::word(5, "1231b2b3b", sigma(3)).unwrap();
        let b = F::word(5, "454b5b", sigma(2)).unwrap();
        let r = a.wedge(&b).unwrap().volume_ratio().unwrap();
        assert_eq!(r, q(1, 1));
    }

    #[test]
    fn conjugate_examples() {
        let f = F::word(3, "1", GaussRat::i()).unwrap();
        assert_eq!(f.conjugate(), F::word(3, "1b", gi(0, -1)).unwrap());
        let g = F::word(3, "123b", q(1, 1)).unwrap();
        // conj(φ^{12}φ̄³) = φ̄^{12}∧φ³ = φ³∧φ̄^{12}
        assert_eq!(g.conjugate(), F::word(3, "31b2b", q(1, 1)).unwrap());
    }

    #[test]
    fn projection_and_reality() {
        let f = F::word(2, "1", q(1, 1)).unwrap() + F::word(2, "1b", q(1, 1)).unwrap();
        assert_eq!(f.bidegree_project(1, 0), F::word(2, "1", q(1, 1)).unwrap());
        assert!(F::zero(2).bidegree_project(1, 1).is_zero());
        assert!(F::word(2, "11b", GaussRat::i()).unwrap().is_real(0.0));
        assert!(!F::word(2, "12b", q(1, 1)).unwrap().is_real(0.0));
    }

    #[test]
    fn volume_ratio_rejects_lower_terms() {
        let vol = F::from_monomial(2, Monomial::top(2), sigma(2));
        assert_eq!(vol.volume_ratio().unwrap(), q(1, 1));
        assert_eq!(F::zero(2).volume_ratio().unwrap(), q(0, 1));
        assert!(F::word(2, "1", q(1, 1)).unwrap().volume_ratio().is_err());
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = F::holo(2, 1);
        let b = F::holo(3, 1);
        assert_eq!(a.wedge(&b), Err(Error::RankMismatch(2, 3)));
    }

    #[test]
    fn display_is_readable() {
        let f = F::word(3, "12", q(-1, 2)).unwrap() + F::word(3, "1b", q(1, 1)).unwrap();
        assert_eq!(f.to_string(), "φ̄^{1} + (-1/2)φ^{12}");
        let g: InvariantForm<CFloat> = f.convert();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s = subsets_of_size(4, 2);
        let idx: Vec<Vec<usize>> = s.iter().map(|&m| bits_to_indices(m)).collect();
        assert_eq!(idx, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(subsets_of_size(3, 0), vec![0]);
        assert!(subsets_of_size(2, 3).is_empty());
    }
}
