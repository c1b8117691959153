//! Arrays on free products from arrays on the factors.
//!
//! Factor arrays may take irrational values (the square-root backend), so
//! vectors here store each entry as a signed square root `±sqrt(square)`.
//! Supports of the translated factor arrays are disjoint, so the squared
//! norm of the combined vector is an exact rational.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ProperArray;
use crate::error::{Error, Result};
use crate::presentation::{Letter, Word};
use crate::rational::{qu, Q};

/// The value `-sqrt(square)` if `negative`, else `sqrt(square)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub negative: bool,
    pub square: Q,
}

impl RootEntry {
    pub fn neg(&self) -> RootEntry {
        RootEntry { negative: !self.negative, square: self.square.clone() }
    }
}

pub type RootVector<K> = BTreeMap<K, RootEntry>;

pub fn norm_squared<K>(v: &RootVector<K>) -> Q {
    v.values().fold(Q::zero(), |acc, e| acc + &e.square)
}

/// A group together with an array on it, given by callbacks. Elements are
/// canonical words over the factor's own alphabet.
pub trait FactorArray {
    fn label(&self) -> String;
    fn canonical(&self, w: &Word) -> Result<Word>;
    fn mul(&self, a: &Word, b: &Word) -> Result<Word> {
        self.canonical(&a.mul(b))
    }
    /// `r(x)` as a finitely supported vector on the factor.
    fn eval(&self, x: &Word) -> Result<RootVector<Word>>;
    /// `pi_x r(x^-1) = r(x)` rather than `-r(x)`.
    fn symmetric(&self) -> bool;
    /// Canonical words of all elements of word length at most `len`.
    fn elements_within(&self, len: usize) -> Result<Vec<Word>>;
    /// A lower bound `||r(x)||^2 >= |x|` holds, so `elements_within` at
    /// length `k` contains every element with squared norm at most `k`.
    fn norm_dominates_length(&self) -> bool {
        true
    }
}

/// The infinite cyclic group `<t>` with `r(k) = 1_[0,k)` for `k > 0` and
/// `-1_[k,0)` for `k < 0`, so `||r(k)||^2 = |k|`.
pub struct CyclicWordLength;

impl CyclicWordLength {
    pub fn element(k: i64) -> Word {
        Word::letter(Letter::pos(0)).pow(k)
    }

    pub fn exponent(w: &Word) -> i64 {
        w.letters().iter().map(|l| l.sign() as i64).sum()
    }
}

impl FactorArray for CyclicWordLength {
    fn label(&self) -> String {
        "Z word length".into()
    }

    fn canonical(&self, w: &Word) -> Result<Word> {
        if w.letters().iter().any(|l| l.generator() != 0) {
            return Err(Error::NotNormalForm(format!("{w:?} is not a word in the cyclic factor")));
        }
        Ok(Word::new(w.letters().iter().copied()))
    }

    fn eval(&self, x: &Word) -> Result<RootVector<Word>> {
        let k = Self::exponent(&self.canonical(x)?);
        let range = if k >= 0 { 0..k } else { k..0 };
        Ok(range.map(|i| (Self::element(i), RootEntry { negative: k < 0, square: Q::one() })).collect())
    }

    fn symmetric(&self) -> bool {
        false
    }

    fn elements_within(&self, len: usize) -> Result<Vec<Word>> {
        let n = len as i64;
        let mut out: Vec<Word> = (-n..=n).map(Self::element).collect();
        out.sort();
        Ok(out)
    }
}

/// `c(x) = Phi~[1, x]` on a small-cancellation group.
pub struct PhiTildeFactor<'a> {
    array: ProperArray<'a>,
    cache: RefCell<HashMap<Word, RootVector<Word>>>,
}

impl<'a> PhiTildeFactor<'a> {
    pub fn new(array: ProperArray<'a>) -> PhiTildeFactor<'a> {
        PhiTildeFactor { array, cache: RefCell::new(HashMap::new()) }
    }
}

impl FactorArray for PhiTildeFactor<'_> {
    fn label(&self) -> String {
        "Phi~ small cancellation".into()
    }

    fn canonical(&self, w: &Word) -> Result<Word> {
        self.array.region().canonical(w)
    }

    fn eval(&self, x: &Word) -> Result<RootVector<Word>> {
        let x = self.canonical(x)?;
        if let Some(v) = self.cache.borrow().get(&x) {
            return Ok(v.clone());
        }
        let phi = self.array.c_squared(&x)?;
        let v: RootVector<Word> =
            phi.iter().map(|(k, s)| (k.clone(), RootEntry { negative: false, square: s.clone() })).collect();
        self.cache.borrow_mut().insert(x, v.clone());
        Ok(v)
    }

    fn symmetric(&self) -> bool {
        true
    }

    fn elements_within(&self, len: usize) -> Result<Vec<Word>> {
        self.array.region().elements_within(len)
    }
}

/// A free-product element in normal form: syllables `(factor, element)` with
/// nontrivial elements and alternating factors.
pub type NormalForm = Vec<(usize, Word)>;

/// Key of the combined vector: a free-product element and a factor index.
pub type ProductKey = (NormalForm, usize);

pub struct FreeProduct<'a> {
    factors: Vec<Box<dyn FactorArray + 'a>>,
}

impl<'a> FreeProduct<'a> {
    /// Factor `i` (0-based) is patched with constant `n = i + 1`.
    pub fn new(factors: Vec<Box<dyn FactorArray + 'a>>) -> FreeProduct<'a> {
        FreeProduct { factors }
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &dyn FactorArray {
        self.factors[i].as_ref()
    }

    fn patch_constant(i: usize) -> usize {
        i + 1
    }

    /// Canonicalizes the syllables and rejects anything not in normal form.
    pub fn normal_form(&self, g: &[(usize, Word)]) -> Result<NormalForm> {
        let mut out: NormalForm = Vec::with_capacity(g.len());
        for (i, (n, h)) in g.iter().enumerate() {
            let f = self
                .factors
                .get(*n)
                .ok_or_else(|| Error::NotNormalForm(format!("syllable {i} names factor {n}")))?;
            let h = f.canonical(h)?;
            if h.is_empty() {
                return Err(Error::NotNormalForm(format!("syllable {i} is trivial")));
            }
            if out.last().is_some_and(|(m, _)| m == n) {
                return Err(Error::NotNormalForm(format!("syllables {} and {i} share factor {n}", i - 1)));
            }
            out.push((*n, h));
        }
        Ok(out)
    }

    /// `g x` for `x` in factor `n`.
    pub fn mul_syllable(&self, g: &[(usize, Word)], n: usize, x: &Word) -> Result<NormalForm> {
        let mut out = g.to_vec();
        match out.last_mut() {
            Some((m, h)) if *m == n => {
                let y = self.factors[n].mul(h, x)?;
                if y.is_empty() {
                    out.pop();
                } else {
                    *h = y;
                }
            }
            _ => {
                let x = self.factors[n].canonical(x)?;
                if !x.is_empty() {
                    out.push((n, x));
                }
            }
        }
        Ok(out)
    }

    /// The patched array `r'_n`: on `F_n = {x != 1 : ||r_n(x)|| < n}` it is
    /// replaced by `n(1_x - 1_1)`, or `n(1_x + 1_1)` for a symmetric factor.
    pub fn patched(&self, n: usize, x: &Word) -> Result<RootVector<Word>> {
        let f = &self.factors[n];
        let x = f.canonical(x)?;
        let v = f.eval(&x)?;
        let c = qu(Self::patch_constant(n));
        let c2 = &c * &c;
        if x.is_empty() || norm_squared(&v) >= c2 {
            return Ok(v);
        }
        Ok(RootVector::from([
            (x, RootEntry { negative: false, square: c2.clone() }),
            (Word::empty(), RootEntry { negative: !f.symmetric(), square: c2 }),
        ]))
    }

    /// Whether `x` lies in the patched set `F_n`.
    pub fn is_patched(&self, n: usize, x: &Word) -> Result<bool> {
        let f = &self.factors[n];
        let x = f.canonical(x)?;
        let c = qu(Self::patch_constant(n));
        Ok(!x.is_empty() && norm_squared(&f.eval(&x)?) < &c * &c)
    }

    /// `R(g) = sum_i lambda(h_1...h_{i-1}) r'_{n_i}(h_i) (x) e_{n_i}`.
    pub fn combine(&self, g: &[(usize, Word)]) -> Result<RootVector<ProductKey>> {
        let g = self.normal_form(g)?;
        let mut out = RootVector::new();
        for (i, (n, h)) in g.iter().enumerate() {
            let prefix = &g[..i];
            for (k, e) in self.patched(*n, h)? {
                let key = (self.mul_syllable(prefix, *n, &k)?, *n);
                if out.insert(key, e).is_some() {
                    return Err(Error::InvariantViolation(format!(
                        "translated supports of syllables overlap at syllable {i}"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// `(||R(g)||^2` by direct summation, `sum_i ||r'_{n_i}(h_i)||^2)`.
    pub fn norm_identity(&self, g: &[(usize, Word)]) -> Result<(Q, Q)> {
        let direct = norm_squared(&self.combine(g)?);
        let mut sum = Q::zero();
        for (n, h) in self.normal_form(g)? {
            sum += norm_squared(&self.patched(n, &h)?);
        }
        Ok((direct, sum))
    }

    /// `pi_x r'_n(x^-1) = -r'_n(x)` (or `+` for a symmetric factor).
    pub fn axiom_holds(&self, n: usize, x: &Word) -> Result<bool> {
        let f = &self.factors[n];
        let x = f.canonical(x)?;
        let mut moved = RootVector::new();
        for (k, e) in self.patched(n, &x.inverse())? {
            moved.insert(f.mul(&x, &k)?, if f.symmetric() { e } else { e.neg() });
        }
        Ok(moved == self.patched(n, &x)?)
    }

    /// Normal forms with at most `max_syllables` syllables, each of word
    /// length at most `max_len` in its factor.
    pub fn normal_forms(&self, max_syllables: usize, max_len: usize) -> Result<Vec<NormalForm>> {
        let mut pools = Vec::new();
        for f in &self.factors {
            pools.push(f.elements_within(max_len)?.into_iter().filter(|w| !w.is_empty()).collect::<Vec<_>>());
        }
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<NormalForm> = vec![Vec::new()];
        for _ in 0..max_syllables {
            let mut next = Vec::new();
            for g in &frontier {
                for (n, pool) in pools.iter().enumerate() {
                    if g.last().is_some_and(|(m, _)| *m == n) {
                        continue;
                    }
                    for x in pool {
                        let mut h = g.clone();
                        h.push((n, x.clone()));
                        next.push(h);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    /// `(#{g : ||R(g)|| <= N}, (sum_{n<=N} #{x in G_n : ||r'_n(x)|| <= N})^(N^2))`.
    /// The count uses the norm identity, which `norm_identity` checks.
    pub fn properness_count(&self, big_n: usize) -> Result<(usize, BigUint)> {
        let budget = qu(big_n * big_n);
        let mut syllables: Vec<Vec<(Word, Q)>> = Vec::new();
        let mut base = 0usize;
        for (n, f) in self.factors.iter().enumerate() {
            if !f.norm_dominates_length() {
                return Err(Error::InvalidParams(format!("factor {} cannot enumerate a norm ball", f.label())));
            }
            let mut list = Vec::new();
            for x in f.elements_within(big_n * big_n)? {
                let s = norm_squared(&self.patched(n, &x)?);
                if s <= budget {
                    if n < big_n {
                        base += 1;
                    }
                    if !x.is_empty() {
                        list.push((x, s));
                    }
                }
            }
            syllables.push(list);
        }
        // Depth-first count over (last factor, remaining budget).
        fn count(sy: &[Vec<(Word, Q)>], last: Option<usize>, left: &Q) -> usize {
            let mut c = 1;
            for (n, list) in sy.iter().enumerate() {
                if Some(n) == last {
                    continue;
                }
                for (_, s) in list {
                    if s <= left {
                        c += count(sy, Some(n), &(left - s));
                    }
                }
            }
            c
        }
        let found = count(&syllables, None, &budget);
        Ok((found, BigUint::from(base).pow((big_n * big_n) as u32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_squared() -> FreeProduct<'static> {
        FreeProduct::new(vec![Box::new(CyclicWordLength), Box::new(CyclicWordLength)])
    }

    fn t(k: i64) -> Word {
        CyclicWordLength::element(k)
    }

    #[test]
    fn identity_maps_to_zero() {
        let fp = z_squared();
        assert!(fp.combine(&[]).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_normal_forms() {
        let fp = z_squared();
        assert!(matches!(fp.combine(&[(0, t(2)), (0, t(1))]), Err(Error::NotNormalForm(_))));
        assert!(matches!(fp.combine(&[(0, t(2)), (1, Word::empty())]), Err(Error::NotNormalForm(_))));
        assert!(matches!(fp.combine(&[(5, t(1))]), Err(Error::NotNormalForm(_))));
    }

    #[test]
    fn two_syllables_by_hand() {
        let fp = z_squared();
        // Factor 1 has patch constant 2: |k| = 1 < 4 and 3 < 4 get patched.
        assert!(fp.is_patched(1, &t(3)).unwrap());
        assert!(!fp.is_patched(1, &t(4)).unwrap());
        let g = [(0, t(3)), (1, t(-5))];
        let r = fp.combine(&g).unwrap();
        assert_eq!(r.len(), 8);
        let key = (vec![(0, t(3)), (1, t(-5))], 1);
        assert_eq!(r[&key], RootEntry { negative: true, square: Q::one() });
        let (direct, sum) = fp.norm_identity(&g).unwrap();
        assert_eq!(direct, qu(8));
        assert_eq!(direct, sum);
    }

    #[test]
    fn cyclic_array_is_antisymmetric() {
        let fp = z_squared();
        for k in -6..=6 {
            assert!(fp.axiom_holds(0, &t(k)).unwrap());
            assert!(fp.axiom_holds(1, &t(k)).unwrap());
        }
    }

    #[test]
    fn properness_count_small() {
        let fp = z_squared();
        let (found, bound) = fp.properness_count(2).unwrap();
        assert!(BigUint::from(found) <= bound);
        // ||R||^2 <= 4: factor 0 syllables t^k with |k| <= 4, factor 1 only t^{±4}
        // (patched ones have squared norm 8).
        assert!(found > 9);
    }
}
