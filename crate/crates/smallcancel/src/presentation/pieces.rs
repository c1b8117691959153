//! Pieces of a symmetrized set, via sorting all cyclic permutations and
//! taking longest common prefixes of neighbours.

use num_traits::ToPrimitive;

use super::{Letter, Presentation, SymRef, Word};
use crate::rational::{qu, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceWitness {
    pub first: SymRef,
    pub second: SymRef,
    pub piece: Word,
}

impl PieceWitness {
    pub fn len(&self) -> usize {
        self.piece.len()
    }

    pub fn is_empty(&self) -> bool {
        self.piece.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PieceReport {
    pub lambda: Q,
    pub symmetrized_len: usize,
    /// Length of the longest piece (0 when there are none).
    pub max_piece: usize,
    /// A pair realizing `max_piece`.
    pub longest: Option<PieceWitness>,
    /// Some pair with a common prefix of length at least `lambda` times the
    /// shorter word, if C'(lambda) fails.
    pub violation: Option<PieceWitness>,
    /// Condition (*) at `lambda`: every relator longer than `1/lambda`, every
    /// letter used.
    pub star_verdict: bool,
}

impl PieceReport {
    pub fn satisfied(&self) -> bool {
        self.violation.is_none()
    }
}

/// Outcome of scanning a family of words for long common prefixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixScan {
    pub max_lcp: usize,
    /// Indices (into the input) of a pair realizing `max_lcp`.
    pub longest: Option<(usize, usize)>,
    /// A pair `(i, j, lcp)` with `lcp >= lambda * min(len_i, len_j)`.
    pub violation: Option<(usize, usize, usize)>,
}

fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Scans distinct words for common prefixes. The words must be pairwise
/// distinct; equal inputs would count as a piece of full length.
pub fn prefix_scan(words: &[&[u8]], lambda: &Q) -> PrefixScan {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&i, &j| words[i].cmp(words[j]));
    let adj: Vec<usize> = order.windows(2).map(|w| lcp(words[w[0]], words[w[1]])).collect();
    let (mut max_lcp, mut longest) = (0, None);
    for (k, &l) in adj.iter().enumerate() {
        if l > max_lcp || longest.is_none() {
            max_lcp = l;
            longest = Some((order[k], order[k + 1]));
        }
    }
    if max_lcp == 0 {
        longest = None;
    }
    // A violating pair has every adjacent lcp between them at least
    // lambda * (global minimum length), which bounds the forward scan.
    let lmin = words.iter().map(|w| w.len()).min().unwrap_or(0);
    let floor = lambda * qu(lmin);
    let floor = floor.ceil().to_usize().unwrap_or(usize::MAX).max(1);
    let mut violation = None;
    'outer: for a in 0..order.len() {
        let mut run = usize::MAX;
        for b in a + 1..order.len() {
            run = run.min(adj[b - 1]);
            if run < floor {
                break;
            }
            let (i, j) = (order[a], order[b]);
            let m = words[i].len().min(words[j].len());
            if qu(run) >= lambda * qu(m) {
                violation = Some((i, j, run));
                break 'outer;
            }
        }
    }
    PrefixScan { max_lcp, longest, violation }
}

/// Piece table of `p` at its own `lambda`.
pub fn piece_table(p: &Presentation) -> PieceReport {
    piece_table_at(p, p.lambda())
}

pub fn piece_table_at(p: &Presentation, lambda: &Q) -> PieceReport {
    let refs = p.sym_refs();
    // Doubled texts per (class, orientation) so that every cyclic
    // permutation is a contiguous slice.
    let texts: Vec<[Vec<u8>; 2]> = p
        .classes()
        .iter()
        .map(|c| {
            let f = c.word.codes();
            let i = c.word.inverse().codes();
            [[f.clone(), f].concat(), [i.clone(), i].concat()]
        })
        .collect();
    let slices: Vec<&[u8]> = refs
        .iter()
        .map(|s| {
            let n = p.classes()[s.class].len();
            &texts[s.class][s.inverse as usize][s.offset..s.offset + n]
        })
        .collect();
    let scan = prefix_scan(&slices, lambda);
    let witness = |i: usize, j: usize, l: usize| PieceWitness {
        first: refs[i],
        second: refs[j],
        piece: Word::from_letters_unchecked(slices[i][..l].iter().map(|&c| Letter::from_code(c as u16)).collect()),
    };
    PieceReport {
        lambda: lambda.clone(),
        symmetrized_len: refs.len(),
        max_piece: scan.max_lcp,
        longest: scan.longest.map(|(i, j)| witness(i, j, scan.max_lcp)),
        violation: scan.violation.map(|(i, j, l)| witness(i, j, l)),
        star_verdict: p.with_lambda(lambda.clone()).satisfies_star(),
    }
}

impl Presentation {
    pub fn max_piece(&self) -> usize {
        piece_table(self).max_piece
    }

    pub fn is_piece_free(&self) -> bool {
        self.max_piece() == 0
    }

    pub fn satisfies_c_prime(&self, lambda: &Q) -> bool {
        piece_table_at(self, lambda).satisfied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{generate_family, parse_presentation};
    use crate::rational::q;

    /// All-pairs oracle over the materialized symmetrized set.
    fn brute(p: &Presentation, lambda: &Q) -> (usize, bool) {
        let s = p.symmetrized();
        let (mut max, mut ok) = (0, true);
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i != j {
                    let l = s[i].common_prefix_len(&s[j]);
                    max = max.max(l);
                    if qu(l) >= lambda * qu(s[i].len().min(s[j].len())) {
                        ok = false;
                    }
                }
            }
        }
        (max, ok)
    }

    #[test]
    fn family_eight_has_long_pieces() {
        let p8 = generate_family(7, q(1, 6));
        let r = piece_table(&p8);
        assert_eq!(r.symmetrized_len, 70);
        assert_eq!(r.max_piece, 12);
        assert!(!r.satisfied());
        assert_eq!(brute(&p8, &q(1, 6)), (12, false));
        let w = r.longest.unwrap();
        assert_eq!(p8.sym_word(&w.first).letters()[..12], p8.sym_word(&w.second).letters()[..12]);
    }

    #[test]
    fn family_pieces_grow_linearly() {
        for n in 4..=12 {
            assert_eq!(generate_family(n, q(1, 6)).max_piece(), 2 * n - 2, "n = {n}");
        }
        assert!(generate_family(20, q(1, 6)).satisfies_c_prime(&q(1, 6)));
        assert!(!generate_family(19, q(1, 6)).satisfies_c_prime(&q(1, 6)));
    }

    #[test]
    fn piece_free_examples() {
        for t in ["gens: a\nlambda: 1/33\na^34\n", "gens: a b\nlambda: 1/33\n(ab)^17\n", "gens: a b\nlambda: 1/33\na^34\nb^35\n"] {
            let p = parse_presentation(t).unwrap();
            assert_eq!(p.max_piece(), 0);
            assert!(p.is_piece_free());
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let gens = rng.gen_range(1..=3);
            let nrel = rng.gen_range(1..=3);
            let rels: Vec<Word> = (0..nrel)
                .map(|_| {
                    let n = rng.gen_range(1..=12);
                    Word::new((0..n).map(|_| Letter::new(rng.gen_range(0..gens), rng.gen())))
                })
                .filter(|w| !w.cyclic_reduce().is_empty())
                .collect();
            if rels.is_empty() {
                continue;
            }
            let lambda = q(1, rng.gen_range(2..=8));
            let p = Presentation::new(Presentation::standard_alphabet(gens), rels, lambda.clone()).unwrap();
            let r = piece_table(&p);
            assert_eq!((r.max_piece, r.satisfied()), brute(&p, &lambda), "{:?}", p.relators());
        }
    }

    #[test]
    fn commutator_fails_one_sixth() {
        let p = parse_presentation("gens: a b\nlambda: 1/6\na b A B\n").unwrap();
        let r = piece_table(&p);
        assert_eq!(r.symmetrized_len, 8);
        assert_eq!(r.max_piece, 1);
        assert!(!r.satisfied());
        assert!(!r.star_verdict);
        assert_eq!(brute(&p, &q(1, 6)), (1, false));
    }

    #[test]
    fn no_relators() {
        let p = parse_presentation("gens: a\nlambda: 1/6\n").unwrap();
        let r = piece_table(&p);
        assert_eq!((r.max_piece, r.satisfied(), r.star_verdict), (0, true, false));
        let p = parse_presentation("gens: a\nlambda: 1/6\na^7\n").unwrap();
        assert!(piece_table(&p).star_verdict);
        assert!(!piece_table_at(&p, &q(1, 7)).star_verdict);
    }

    #[test]
    fn linear_prefix_scan() {
        let words: Vec<&[u8]> = vec![b"abcdef", b"abcxyz", b"q"];
        let s = prefix_scan(&words, &q(1, 2));
        assert_eq!(s.max_lcp, 3);
        assert_eq!(s.violation, Some((0, 1, 3)));
        assert!(prefix_scan(&words, &q(2, 3)).violation.is_none());
    }
}
