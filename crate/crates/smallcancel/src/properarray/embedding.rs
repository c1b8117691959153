//! Embedding a small-cancellation group with bounded letter-graph valency
//! into a finitely generated `C'(1/33)` group.
//!
//! Source letters `x` are sent to `psi(x) = (wb)^M c (wb)^-M` over
//! `a_1..a_{N+1}, b, c` and the relators are rewritten by
//! `x -> psi'(x) psi(x)^-1`, with `psi'` the primed copy. The words involved
//! are long (`|psi(x)| = 2(n+M+1)M + 1` for `x` at distance `n` from the base
//! letter), so they are kept symbolic and only relators below a length cap
//! are materialized.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::presentation::{letter_graph, piece_table_at, Letter, LetterGraph, PieceReport, Presentation, Word};
use crate::rational::{q, qu, Q};

/// `(1 - 2/M)^-1 [(1 + 1/M) lambda + 2/M] < 1/33`.
pub fn m_condition(lambda: &Q, m: usize) -> bool {
    if m <= 2 {
        return false;
    }
    let m = qu(m);
    let lhs = ((Q::one() + Q::one() / &m) * lambda + q(2, 1) / &m) / (Q::one() - q(2, 1) / &m);
    lhs < q(1, 33)
}

/// Smallest `M >= 3` satisfying [`m_condition`].
pub fn minimal_m(lambda: &Q) -> Result<usize> {
    if *lambda < Q::zero() || *lambda >= q(1, 33) {
        return Err(Error::InvalidParams(format!("need 0 <= lambda < 1/33, got {lambda}")));
    }
    let mut m = 3;
    while !m_condition(lambda, m) {
        m += 1;
        if m > 100_000_000 {
            return Err(Error::ResourceLimit(format!("no M below 10^8 for lambda = {lambda}")));
        }
    }
    Ok(m)
}

/// `(wb)^M c^(±1) (wb)^-M` over one copy of the target alphabet.
#[derive(Clone, Debug)]
struct Block {
    w: Rc<Vec<Letter>>,
    b: Letter,
    c: Letter,
    m: usize,
}

impl Block {
    fn half(&self) -> usize {
        self.m * (self.w.len() + 1)
    }

    fn len(&self) -> usize {
        2 * self.half() + 1
    }

    fn at(&self, i: usize) -> Letter {
        let h = self.half();
        let p = self.w.len() + 1;
        if i < h {
            let j = i % p;
            if j < self.w.len() {
                self.w[j]
            } else {
                self.b
            }
        } else if i == h {
            self.c
        } else {
            let j = (i - h - 1) % p;
            if j == 0 {
                self.b.inverse()
            } else {
                self.w[self.w.len() - j].inverse()
            }
        }
    }

    fn inverse(&self) -> Block {
        Block { c: self.c.inverse(), ..self.clone() }
    }
}

/// A concatenation of blocks, read lazily.
#[derive(Clone, Debug)]
pub struct LazyWord {
    blocks: Vec<Block>,
}

impl LazyWord {
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, mut i: usize) -> Letter {
        for b in &self.blocks {
            if i < b.len() {
                return b.at(i);
            }
            i -= b.len();
        }
        panic!("index out of range");
    }

    pub fn inverse(&self) -> LazyWord {
        LazyWord { blocks: self.blocks.iter().rev().map(Block::inverse).collect() }
    }

    pub fn materialize(&self) -> Word {
        Word::from_letters_unchecked((0..self.len()).map(|i| self.at(i)).collect())
    }

    /// Longest common prefix with `other`.
    pub fn lcp(&self, other: &LazyWord) -> usize {
        let n = self.len().min(other.len());
        (0..n).take_while(|&i| self.at(i) == other.at(i)).count()
    }
}

/// Generator indices in the target alphabet.
#[derive(Clone, Copy, Debug)]
struct Copy3 {
    a0: usize,
    b: usize,
    c: usize,
}

/// Per-relator length data: `m`, the set of `|psi(x)|` over its letters and
/// the rewritten length after cyclic reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthCertificate {
    pub class: usize,
    pub source_len: usize,
    pub m: usize,
    pub psi_lengths: Vec<usize>,
    pub allowed: [usize; 2],
    pub reduced_len: usize,
    /// `|r~| > (1 - 2/M)(2(m+1)M+1)|r|`.
    pub length_lower_bound: bool,
}

impl LengthCertificate {
    pub fn holds(&self) -> bool {
        self.psi_lengths.iter().all(|l| self.allowed.contains(l)) && self.length_lower_bound
    }
}

/// Linear pieces among `{psi'(x) psi(x)^-1}` and their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorScan {
    pub words: usize,
    pub max_lcp: usize,
    pub min_len: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub m: usize,
    pub cap: usize,
    pub presentation: Presentation,
    /// Source class indices whose rewritten relator was emitted.
    pub emitted: Vec<usize>,
    /// `(class, reduced length)` of relators over the cap.
    pub skipped: Vec<(usize, usize)>,
    pub certificates: Vec<LengthCertificate>,
    pub pieces: PieceReport,
}

impl Embedding {
    pub fn certified(&self) -> bool {
        self.pieces.satisfied() && self.certificates.iter().all(LengthCertificate::holds)
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    source: Presentation,
    graph: LetterGraph,
    n_bound: usize,
    m: usize,
    base: usize,
    distance: BTreeMap<usize, usize>,
    /// Rank of each letter inside its sphere `S(n, o)`.
    rank_in_sphere: BTreeMap<usize, usize>,
}

impl EmbeddingSpec {
    /// Checks the hypotheses: `lambda < 1/33`, `C'(lambda)`, letter-graph
    /// valency at most `N`, and a connected letter graph.
    pub fn new(source: &Presentation, n_bound: usize, base: usize) -> Result<EmbeddingSpec> {
        let m = minimal_m(source.lambda())?;
        Self::with_m(source, n_bound, base, m)
    }

    pub fn with_m(source: &Presentation, n_bound: usize, base: usize, m: usize) -> Result<EmbeddingSpec> {
        if !m_condition(source.lambda(), m) {
            return Err(Error::InvalidParams(format!("M = {m} violates the exponent condition")));
        }
        if n_bound == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        let pieces = piece_table_at(source, source.lambda());
        if !pieces.satisfied() {
            return Err(Error::NotSmallCancellation(format!(
                "source fails C'({}) with a piece of length {}",
                source.lambda(),
                pieces.violation.as_ref().map_or(0, |w| w.len())
            )));
        }
        let graph = letter_graph(source);
        if graph.max_valency > n_bound {
            return Err(Error::ValencyExceeded { found: graph.max_valency, bound: n_bound });
        }
        if graph.components.len() != 1 {
            return Err(Error::InvalidParams(format!(
                "letter graph has {} components; embed each component separately",
                graph.components.len()
            )));
        }
        if base >= source.rank() {
            return Err(Error::InvalidParams(format!("base letter {base} out of range")));
        }
        if 2 * (2 * n_bound + 6) > 256 {
            return Err(Error::InvalidParams(format!("N = {n_bound} exceeds the supported alphabet size")));
        }
        let distance = graph.distances_from(base);
        let mut rank_in_sphere = BTreeMap::new();
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (&x, &d) in &distance {
            let r = seen.entry(d).or_insert(0);
            rank_in_sphere.insert(x, *r);
            *r += 1;
        }
        Ok(EmbeddingSpec { source: source.clone(), graph, n_bound, m, base, distance, rank_in_sphere })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_bound(&self) -> usize {
        self.n_bound
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn graph(&self) -> &LetterGraph {
        &self.graph
    }

    pub fn distance(&self, x: usize) -> usize {
        self.distance[&x]
    }

    /// `a1..a{N+1} b c a1'..a{N+1}' b' c'`.
    pub fn target_alphabet(&self) -> Vec<String> {
        let mut out = Vec::new();
        for prime in ["", "'"] {
            for i in 1..=self.n_bound + 1 {
                out.push(format!("a{i}{prime}"));
            }
            out.push(format!("b{prime}"));
            out.push(format!("c{prime}"));
        }
        out
    }

    fn copy(&self, primed: bool) -> Copy3 {
        let a0 = if primed { self.n_bound + 3 } else { 0 };
        Copy3 { a0, b: a0 + self.n_bound + 1, c: a0 + self.n_bound + 2 }
    }

    /// The `index`-th reduced word of length `len` over `a_1..a_{N+1}` in
    /// lexicographic order of letter codes (`a1 < a1^-1 < a2 < ...`).
    fn lex_word(&self, index: usize, len: usize) -> Result<Vec<usize>> {
        let k = 2 * (self.n_bound + 1);
        let mut digits = vec![0usize; len];
        let mut i = index;
        for pos in (0..len).rev() {
            let radix = if pos == 0 { k } else { k - 1 };
            digits[pos] = i % radix;
            i /= radix;
        }
        if i != 0 || (len == 0 && index != 0) {
            return Err(Error::InvariantViolation(format!("A_{len} has fewer than {} words", index + 1)));
        }
        let mut codes = Vec::with_capacity(len);
        for (pos, &d) in digits.iter().enumerate() {
            let code = if pos == 0 {
                d
            } else {
                let forbidden = codes[pos - 1] ^ 1;
                if d >= forbidden {
                    d + 1
                } else {
                    d
                }
            };
            codes.push(code);
        }
        Ok(codes)
    }

    fn w_of(&self, x: usize) -> Result<Vec<usize>> {
        let n = *self
            .distance
            .get(&x)
            .ok_or_else(|| Error::InvalidParams(format!("letter {x} is not in the base component")))?;
        self.lex_word(self.rank_in_sphere[&x], n + self.m)
    }

    fn block(&self, x: usize, primed: bool) -> Result<Block> {
        let c3 = self.copy(primed);
        let w = self
            .w_of(x)?
            .into_iter()
            .map(|code| Letter::new(c3.a0 + code / 2, code % 2 == 1))
            .collect();
        Ok(Block { w: Rc::new(w), b: Letter::pos(c3.b), c: Letter::pos(c3.c), m: self.m })
    }

    /// `psi(x)`, or `psi'(x)` when `primed`.
    pub fn psi(&self, x: usize, primed: bool) -> Result<LazyWord> {
        Ok(LazyWord { blocks: vec![self.block(x, primed)?] })
    }

    pub fn psi_len(&self, x: usize) -> usize {
        2 * (self.distance[&x] + self.m + 1) * self.m + 1
    }

    /// `psi'(x) psi(x)^-1`; already reduced since the two halves use
    /// disjoint alphabets.
    pub fn generator_word(&self, x: usize) -> Result<LazyWord> {
        Ok(LazyWord { blocks: vec![self.block(x, true)?, self.block(x, false)?.inverse()] })
    }

    fn letter_word(&self, l: Letter) -> Result<LazyWord> {
        let g = self.generator_word(l.generator())?;
        Ok(if l.is_inverse() { g.inverse() } else { g })
    }

    /// Pieces among the linear words `{psi'(x) psi(x)^-1}^±1`, compared
    /// against `1/M` times the shorter length.
    pub fn generator_scan(&self) -> Result<GeneratorScan> {
        let mut words = Vec::new();
        for x in self.distance.keys() {
            let g = self.generator_word(*x)?;
            words.push(g.inverse());
            words.push(g);
        }
        let lambda = q(1, self.m as i64);
        let (mut max_lcp, mut satisfied) = (0, true);
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let l = words[i].lcp(&words[j]);
                max_lcp = max_lcp.max(l);
                if qu(l) >= &lambda * qu(words[i].len().min(words[j].len())) {
                    satisfied = false;
                }
            }
        }
        let min_len = words.iter().map(LazyWord::len).min().unwrap_or(0);
        Ok(GeneratorScan { words: words.len(), max_lcp, min_len, satisfied })
    }

    /// Rewritten relator as lazy segments plus the cancellation at each
    /// junction (junction `j` sits after segment `j`, cyclically).
    fn rewrite(&self, r: &Word) -> Result<(Vec<LazyWord>, Vec<usize>)> {
        let segs = r.letters().iter().map(|&l| self.letter_word(l)).collect::<Result<Vec<_>>>()?;
        let k = segs.len();
        let mut cancel = Vec::with_capacity(k);
        for j in 0..k {
            let (u, v) = (&segs[j], &segs[(j + 1) % k]);
            let (lu, lv) = (u.len(), v.len());
            let mut t = 0;
            while t < lu.min(lv) && u.at(lu - 1 - t) == v.at(t).inverse() {
                t += 1;
            }
            cancel.push(t);
        }
        for j in 0..k {
            let before = cancel[(j + k - 1) % k];
            if before + cancel[j] >= segs[j].len() {
                return Err(Error::InvariantViolation(format!(
                    "cancellation swallows segment {j} of a rewritten relator"
                )));
            }
        }
        Ok((segs, cancel))
    }

    fn certificate(&self, class: usize, r: &Word, reduced_len: usize) -> LengthCertificate {
        let n_min = r.support().iter().map(|x| self.distance[x]).min().unwrap_or(0);
        let m = n_min + self.m;
        let mut psi_lengths: Vec<usize> = r.support().iter().map(|&x| self.psi_len(x)).collect();
        psi_lengths.sort();
        psi_lengths.dedup();
        let mm = self.m;
        let bound = (Q::one() - q(2, mm as i64)) * qu(2 * (m + 1) * mm + 1) * qu(r.len());
        LengthCertificate {
            class,
            source_len: r.len(),
            m,
            psi_lengths,
            allowed: [2 * (m + 1) * mm + 1, 2 * (m + 2) * mm + 1],
            reduced_len,
            length_lower_bound: qu(reduced_len) > bound,
        }
    }

    /// Rewrites every source relator, materializes those of reduced length
    /// at most `cap`, and certifies the emitted set at `1/33`.
    pub fn emit(&self, cap: usize) -> Result<Embedding> {
        let mut relators = Vec::new();
        let (mut emitted, mut skipped, mut certificates) = (Vec::new(), Vec::new(), Vec::new());
        for (ci, class) in self.source.classes().iter().enumerate() {
            let (segs, cancel) = self.rewrite(&class.word)?;
            let total: usize = segs.iter().map(LazyWord::len).sum();
            let reduced_len = total - 2 * cancel.iter().sum::<usize>();
            certificates.push(self.certificate(ci, &class.word, reduced_len));
            if reduced_len > cap {
                skipped.push((ci, reduced_len));
                continue;
            }
            let k = segs.len();
            let mut letters = Vec::with_capacity(reduced_len);
            for (j, s) in segs.iter().enumerate() {
                let from = cancel[(j + k - 1) % k];
                letters.extend((from..s.len() - cancel[j]).map(|i| s.at(i)));
            }
            let w = Word::from_letters_unchecked(letters);
            if !w.is_cyclically_reduced() {
                return Err(Error::InvariantViolation(format!("rewritten relator {ci} is not cyclically reduced")));
            }
            relators.push(w);
            emitted.push(ci);
        }
        let presentation = Presentation::new(self.target_alphabet(), relators, q(1, 33))?;
        let pieces = piece_table_at(&presentation, &q(1, 33));
        Ok(Embedding { m: self.m, cap, presentation, emitted, skipped, certificates, pieces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn m_scan_matches_the_condition() {
        let lam = q(15, 512);
        let m = minimal_m(&lam).unwrap();
        assert!(m_condition(&lam, m));
        assert!(!m_condition(&lam, m - 1));
        assert!(minimal_m(&q(1, 33)).is_err());
    }

    #[test]
    fn lex_words_are_reduced_and_ordered() {
        let p = parse_presentation("gens: x y\nlambda: 1/1000\n(xy)^17\n").unwrap();
        let spec = EmbeddingSpec::with_m(&p, 1, 0, 71).unwrap();
        let mut prev: Option<Vec<usize>> = None;
        for i in 0..40 {
            let w = spec.lex_word(i, 4).unwrap();
            assert!(w.windows(2).all(|p| p[0] ^ 1 != p[1]));
            if let Some(p) = &prev {
                assert!(p < &w);
            }
            prev = Some(w);
        }
        assert_eq!(spec.lex_word(0, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(spec.lex_word(1, 3).unwrap(), vec![0, 0, 2]);
    }

    #[test]
    fn lazy_blocks_match_materialized_words() {
        let p = parse_presentation("gens: x y\nlambda: 1/1000\n(xy)^17\n").unwrap();
        let spec = EmbeddingSpec::with_m(&p, 1, 0, 71).unwrap();
        let g = spec.generator_word(1).unwrap();
        let w = g.materialize();
        assert_eq!(w.len(), 2 * spec.psi_len(1));
        assert!(Word::new(w.letters().iter().copied()) == w);
        assert_eq!(g.inverse().materialize(), w.inverse());
        assert_eq!(spec.psi(0, false).unwrap().len(), 2 * (71 + 1) * 71 + 1);
    }

    #[test]
    fn valency_is_enforced() {
        let p = parse_presentation("gens: x y z\nlambda: 1/1000\n(xyz)^20\n").unwrap();
        assert!(matches!(EmbeddingSpec::new(&p, 1, 0), Err(Error::ValencyExceeded { found: 2, bound: 1 })));
    }
}
