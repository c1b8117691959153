//! Dehn's algorithm over a symmetrized relator set, backed by one suffix
//! automaton per relator class and orientation.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::presentation::{Letter, Presentation, SymRef, Word};
use crate::rational::{qu, Q};

const NONE: u32 = u32::MAX;

/// Suffix automaton with dense transitions.
#[derive(Clone, Debug)]
struct SuffixAutomaton {
    sigma: usize,
    next: Vec<u32>,
    link: Vec<u32>,
    len: Vec<u32>,
    /// End index of the first occurrence of the strings of each state.
    firstpos: Vec<u32>,
}

impl SuffixAutomaton {
    fn new(text: &[u8], sigma: usize) -> SuffixAutomaton {
        let cap = 2 * text.len() + 1;
        let mut a = SuffixAutomaton {
            sigma,
            next: Vec::with_capacity(cap * sigma),
            link: Vec::with_capacity(cap),
            len: Vec::with_capacity(cap),
            firstpos: Vec::with_capacity(cap),
        };
        a.push_state(0, NONE, 0);
        let mut last = 0u32;
        for (i, &c) in text.iter().enumerate() {
            last = a.extend(last, c as usize, i as u32);
        }
        a
    }

    fn push_state(&mut self, len: u32, link: u32, firstpos: u32) -> u32 {
        self.next.extend(std::iter::repeat_n(NONE, self.sigma));
        self.len.push(len);
        self.link.push(link);
        self.firstpos.push(firstpos);
        (self.len.len() - 1) as u32
    }

    fn go(&self, s: u32, c: usize) -> u32 {
        self.next[s as usize * self.sigma + c]
    }

    fn set(&mut self, s: u32, c: usize, t: u32) {
        self.next[s as usize * self.sigma + c] = t;
    }

    fn extend(&mut self, last: u32, c: usize, pos: u32) -> u32 {
        let cur = self.push_state(self.len[last as usize] + 1, NONE, pos);
        let mut p = last;
        while p != NONE && self.go(p, c) == NONE {
            self.set(p, c, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
            return cur;
        }
        let q = self.go(p, c);
        if self.len[p as usize] + 1 == self.len[q as usize] {
            self.link[cur as usize] = q;
            return cur;
        }
        let clone = self.push_state(self.len[p as usize] + 1, self.link[q as usize], self.firstpos[q as usize]);
        for x in 0..self.sigma {
            let t = self.go(q, x);
            self.set(clone, x, t);
        }
        while p != NONE && self.go(p, c) == q {
            self.set(p, c, clone);
            p = self.link[p as usize];
        }
        self.link[q as usize] = clone;
        self.link[cur as usize] = clone;
        cur
    }
}

/// Index over one orientation of one relator class.
#[derive(Clone, Debug)]
struct Entry {
    class: usize,
    inverse: bool,
    word: Word,
    sam: SuffixAutomaton,
}

impl Entry {
    fn n(&self) -> usize {
        self.word.len()
    }

    /// For each end position `i` of `w`: the longest suffix of `w[..=i]`
    /// that is a cyclic subword of the relator (capped at its length), and
    /// the automaton state reached (see `offset`).
    /// Rotation offset where a match of length `l` ending in state `st` starts.
    fn offset(&self, l: u32, st: u32) -> u32 {
        (self.sam.firstpos[st as usize] + 1 - l) % self.n() as u32
    }

    fn has_majority(&self, w: &[Letter]) -> bool {
        let n = self.n() as u32;
        if w.len() as u32 * 2 <= n {
            return false;
        }
        let sam = &self.sam;
        let (mut st, mut l) = (0u32, 0u32);
        for &x in w {
            let c = x.code() as usize;
            if c >= sam.sigma {
                st = 0;
                l = 0;
                continue;
            }
            while st != 0 && sam.go(st, c) == NONE {
                st = sam.link[st as usize];
                l = sam.len[st as usize];
            }
            if sam.go(st, c) != NONE {
                st = sam.go(st, c);
                l += 1;
                if 2 * l > n {
                    return true;
                }
            } else {
                l = 0;
            }
        }
        false
    }

    fn matching_stats(&self, w: &[Letter], out: &mut Vec<(u32, u32)>) {
        out.clear();
        let n = self.n() as u32;
        let sam = &self.sam;
        let (mut st, mut l) = (0u32, 0u32);
        for &x in w {
            let c = x.code() as usize;
            if c >= sam.sigma {
                st = 0;
                l = 0;
                out.push((0, 0));
                continue;
            }
            while st != 0 && sam.go(st, c) == NONE {
                st = sam.link[st as usize];
                l = sam.len[st as usize];
            }
            if sam.go(st, c) != NONE {
                st = sam.go(st, c);
                l += 1;
            } else {
                l = 0;
            }
            if l > n {
                while sam.len[sam.link[st as usize] as usize] >= n {
                    st = sam.link[st as usize];
                }
                l = n;
            }
            out.push((l, st));
        }
    }
}

/// A subword of the query that is also a prefix of a cyclic permutation of
/// a relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreendlingerHit {
    /// The cyclic permutation of the relator that starts with the subword.
    pub relator: Word,
    pub sym: SymRef,
    pub subword_start: usize,
    pub subword_length: usize,
}

/// Search index for Dehn's algorithm, built once per presentation.
#[derive(Clone, Debug)]
pub struct DehnIndex {
    entries: Vec<Entry>,
    max_len: usize,
    swap_cap: usize,
}

impl DehnIndex {
    pub fn new(p: &Presentation) -> DehnIndex {
        DehnIndex::with_max_len(p, usize::MAX)
    }

    /// Drops relators longer than `max_len` (see `relevant_relator_bound`).
    pub fn with_max_len(p: &Presentation, max_len: usize) -> DehnIndex {
        let sigma = 2 * p.rank();
        let mut entries = Vec::new();
        for (ci, c) in p.classes().iter().enumerate() {
            if c.len() > max_len {
                continue;
            }
            let orients: &[bool] = if c.self_inverse { &[false] } else { &[false, true] };
            for &inverse in orients {
                let word = if inverse { c.word.inverse() } else { c.word.clone() };
                let text = [word.codes(), word.codes()].concat();
                let sam = SuffixAutomaton::new(&text, sigma);
                entries.push(Entry { class: ci, inverse, word, sam });
            }
        }
        DehnIndex { entries, max_len, swap_cap: 4096 }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Caps the number of words visited by `canonical_form`.
    pub fn with_swap_cap(mut self, cap: usize) -> DehnIndex {
        self.swap_cap = cap;
        self
    }

    fn hit(&self, e: &Entry, end: usize, l: u32, st: u32) -> GreendlingerHit {
        let offset = e.offset(l, st);
        let l = l as usize;
        GreendlingerHit {
            relator: e.word.rotate(offset as usize),
            sym: SymRef { class: e.class, inverse: e.inverse, offset: offset as usize },
            subword_start: end + 1 - l,
            subword_length: l,
        }
    }

    /// Longest hit with `subword_length > threshold * |relator|`; ties go to
    /// the earliest start.
    pub fn find_hit(&self, w: &Word, threshold: &Q) -> Option<GreendlingerHit> {
        let mut stats = Vec::new();
        let mut best: Option<GreendlingerHit> = None;
        for e in &self.entries {
            e.matching_stats(w.letters(), &mut stats);
            let bound = threshold * qu(e.n());
            for (i, &(l, off)) in stats.iter().enumerate() {
                if l == 0 || qu(l as usize) <= bound {
                    continue;
                }
                let start = i + 1 - l as usize;
                let better = match &best {
                    None => true,
                    Some(b) => (l as usize) > b.subword_length || (l as usize == b.subword_length && start < b.subword_start),
                };
                if better {
                    best = Some(self.hit(e, i, l, off));
                }
            }
        }
        best
    }

    /// The majority subword with the largest length gain, if any.
    fn dehn_step(&self, w: &Word, stats: &mut Vec<(u32, u32)>) -> Option<Word> {
        let mut best: Option<(usize, usize, usize, u32, u32)> = None; // gain, start, entry, l, state
        for (ei, e) in self.entries.iter().enumerate() {
            if e.n() > 2 * w.len() + 1 {
                continue;
            }
            e.matching_stats(w.letters(), stats);
            let n = e.n();
            for (i, &(l, off)) in stats.iter().enumerate() {
                if 2 * l as usize > n {
                    let gain = 2 * l as usize - n;
                    let start = i + 1 - l as usize;
                    if best.is_none_or(|b| gain > b.0 || (gain == b.0 && start < b.1)) {
                        best = Some((gain, start, ei, l, off));
                    }
                }
            }
        }
        let (_, start, ei, l, st) = best?;
        let e = &self.entries[ei];
        Some(replace(w, start, l as usize, &e.word.rotate(e.offset(l, st) as usize)))
    }

    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        let mut stats = Vec::new();
        while let Some(next) = self.dehn_step(&cur, &mut stats) {
            debug_assert!(next.len() < cur.len());
            cur = next;
        }
        cur
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        // By Greendlinger a nontrivial relation contains a majority subword;
        // checking for one first avoids building any words in the common case.
        w.is_empty() || (self.entries.iter().any(|e| e.has_majority(w.letters())) && self.dehn_reduce(w).is_empty())
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_identity(&u.inverse().mul(v))
    }

    /// Words obtained from `w` by replacing one half-relator subword by the
    /// other half.
    fn half_swaps(&self, w: &Word, stats: &mut Vec<(u32, u32)>) -> Vec<Word> {
        let mut out = Vec::new();
        let ls = w.letters();
        for e in &self.entries {
            let n = e.n();
            if n % 2 == 1 || n / 2 > w.len() {
                continue;
            }
            let h = n / 2;
            e.matching_stats(ls, stats);
            let rel = e.word.letters();
            for (i, &(l, _)) in stats.iter().enumerate() {
                if (l as usize) < h {
                    continue;
                }
                let start = i + 1 - h;
                let s = &ls[start..=i];
                for off in 0..n {
                    if (0..h).all(|k| rel[(off + k) % n] == s[k]) {
                        out.push(replace(w, start, h, &e.word.rotate(off)));
                    }
                }
            }
        }
        out
    }

    /// A normal form: Dehn reduction followed by a closure over equal-length
    /// half-relator swaps, taking the shortlex least word found. Always
    /// represents the same element; it is a geodesic normal form whenever the
    /// presentation has no pieces.
    pub fn canonical_form(&self, w: &Word) -> Result<Word> {
        let mut stats = Vec::new();
        let mut cur = self.dehn_reduce(w);
        'restart: loop {
            let mut seen: BTreeSet<Word> = BTreeSet::from([cur.clone()]);
            let mut queue = VecDeque::from([cur.clone()]);
            while let Some(x) = queue.pop_front() {
                for y in self.half_swaps(&x, &mut stats) {
                    let y = self.dehn_reduce(&y);
                    if y.len() < cur.len() {
                        cur = y;
                        continue 'restart;
                    }
                    if seen.insert(y.clone()) {
                        if seen.len() > self.swap_cap {
                            return Err(Error::ResourceLimit(format!(
                                "more than {} words in the half-swap closure of {w:?}",
                                self.swap_cap
                            )));
                        }
                        queue.push_back(y);
                    }
                }
            }
            return Ok(seen.into_iter().next().expect("closure contains cur"));
        }
    }
}

/// `w` with `w[start..start+len]` (a prefix of `relator`) replaced by the
/// inverse of the rest of `relator`.
fn replace(w: &Word, start: usize, len: usize, relator: &Word) -> Word {
    let ls = w.letters();
    let rest = relator.letters()[len..].iter().rev().map(|l| l.inverse());
    Word::new(ls[..start].iter().copied().chain(rest).chain(ls[start + len..].iter().copied()))
}

pub fn find_greendlinger_subword(w: &Word, p: &Presentation, threshold: &Q) -> Option<GreendlingerHit> {
    DehnIndex::new(p).find_hit(w, threshold)
}

pub fn dehn_reduce(w: &Word, p: &Presentation) -> Word {
    DehnIndex::new(p).dehn_reduce(w)
}

pub fn is_identity(w: &Word, p: &Presentation) -> bool {
    DehnIndex::new(p).is_identity(w)
}

/// Relators longer than this never matter for words of length at most
/// `2 * radius`.
pub fn relevant_relator_bound(radius: usize) -> usize {
    4 * radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{generate_family, parse_presentation};
    use crate::rational::q;
    use rand::{Rng, SeedableRng};

    fn p8() -> Presentation {
        generate_family(7, q(1, 6))
    }

    /// Oracle: every subword of `w` against every symmetrized relator.
    fn brute_hit_len(w: &Word, p: &Presentation) -> usize {
        let ls = w.letters();
        let mut best = 0;
        for r in p.symmetrized() {
            for i in 0..ls.len() {
                let l = ls[i..].iter().zip(r.letters()).take_while(|(a, b)| a == b).count();
                best = best.max(l);
            }
        }
        best
    }

    #[test]
    fn automaton_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let gens = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=14);
            let r = Word::new((0..n).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen())));
            if r.cyclic_reduce().is_empty() {
                continue;
            }
            let p = Presentation::new(Presentation::standard_alphabet(gens), vec![r], q(1, 6)).unwrap();
            let idx = DehnIndex::new(&p);
            for _ in 0..10 {
                let m = rng.gen_range(0..20);
                let w = Word::new((0..m).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen())));
                let hit = idx.find_hit(&w, &qu(0));
                let expect = brute_hit_len(&w, &p);
                assert_eq!(hit.as_ref().map_or(0, |h| h.subword_length), expect);
                if let Some(h) = hit {
                    assert_eq!(
                        &w.letters()[h.subword_start..h.subword_start + h.subword_length],
                        &h.relator.letters()[..h.subword_length]
                    );
                    assert_eq!(p.sym_word(&h.sym), h.relator);
                }
            }
        }
    }

    #[test]
    fn family_examples() {
        let p = p8();
        let w8 = p.relators()[0].clone();
        let idx = DehnIndex::new(&p);
        let h = idx.find_hit(&w8, &q(1, 2)).unwrap();
        assert_eq!(h.subword_length, 35);
        let ab = p.word("ab").unwrap();
        assert!(idx.find_hit(&ab, &q(1, 2)).is_none());
        assert_eq!(idx.dehn_reduce(&ab), ab);
        assert!(idx.is_identity(&w8));
        assert!(idx.is_identity(&w8.mul(&w8)));
        assert!(idx.is_identity(&Word::empty()));
        for l in p.letters() {
            assert!(!idx.is_identity(&Word::letter(l)));
        }
    }

    #[test]
    fn greendlinger_threshold_on_prefix() {
        let p = p8().with_lambda(q(1, 33));
        let w8 = p.relators()[0].clone();
        let tail = p.word("A A A").unwrap();
        let w = w8.subword(0, 33).mul(&tail);
        assert_eq!(w.len(), 36);
        let h = find_greendlinger_subword(&w, &p, &q(10, 11)).unwrap();
        assert_eq!((h.subword_start, h.subword_length), (0, 33));
        let w32 = w8.subword(0, 31).mul(&tail);
        assert!(find_greendlinger_subword(&w32, &p, &q(10, 11)).is_none());
    }

    #[test]
    fn conjugates_of_relators_are_trivial() {
        let p = p8();
        let idx = DehnIndex::new(&p);
        let w8 = p.relators()[0].clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(0..=5);
            let g = Word::new((0..n).map(|_| Letter::new(rng.gen_range(0..2), rng.gen())));
            let e = rng.gen_range(-2i64..=2);
            let w = g.mul(&w8.pow(e)).mul(&g.inverse());
            assert!(idx.is_identity(&w));
            let u = Word::new((0..6).map(|_| Letter::new(rng.gen_range(0..2), rng.gen())));
            let d = idx.dehn_reduce(&u.mul(&w));
            assert!(idx.is_identity(&u.mul(&w).mul(&d.inverse())));
        }
    }

    #[test]
    fn empty_relator_set_is_free() {
        let p = parse_presentation("gens: a b\n").unwrap();
        let idx = DehnIndex::new(&p);
        assert!(!idx.is_identity(&p.word("abAB").unwrap()));
        assert!(idx.is_identity(&p.word("ab B A").unwrap()));
    }

    #[test]
    fn canonical_form_on_even_relators() {
        let p = parse_presentation("gens: a\nlambda: 1/6\na^8\n").unwrap();
        let idx = DehnIndex::new(&p);
        assert_eq!(idx.canonical_form(&p.word("A^4").unwrap()).unwrap(), p.word("a^4").unwrap());
        assert_eq!(idx.canonical_form(&p.word("a^5").unwrap()).unwrap(), p.word("A^3").unwrap());
        let p = parse_presentation("gens: a b\nlambda: 1/6\n(ab)^4\n").unwrap();
        let idx = DehnIndex::new(&p);
        let x = idx.canonical_form(&p.word("BABA").unwrap()).unwrap();
        assert_eq!(x, p.word("abab").unwrap());
        assert_eq!(idx.canonical_form(&p.word("a b a b a").unwrap()).unwrap(), p.word("BAB").unwrap());
    }

    #[test]
    fn truncation_bound() {
        assert_eq!(relevant_relator_bound(5), 20);
        assert_eq!(relevant_relator_bound(0), 0);
        let p = generate_family(140, q(1, 33));
        let idx = DehnIndex::with_max_len(&p, relevant_relator_bound(6));
        assert!(idx.entries.is_empty());
    }
}
