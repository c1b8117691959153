mod common;

use common::{reduced_words, w8};
use proptest::prelude::*;
use smallcancel::presentation::{generate_family, parse_presentation};
use smallcancel::rational::q;
use smallcancel::wordproblem::{dehn_reduce, find_greendlinger_subword, is_identity, relevant_relator_bound, DehnIndex};
use smallcancel::{Letter, Presentation, Word};

fn p8() -> Presentation {
    generate_family(7, q(1, 6))
}

#[test]
fn greendlinger_examples() {
    let p = p8();
    let w = w8(&p);
    let hit = find_greendlinger_subword(&w, &p, &q(1, 2)).unwrap();
    assert_eq!((hit.subword_start, hit.subword_length), (0, 35));
    assert_eq!(hit.relator, w);
    assert!(find_greendlinger_subword(&p.word("a b").unwrap(), &p, &q(1, 2)).is_none());

    // 33 > (10/11) 35 = 31.8..., and the tail cannot extend the match.
    let prefix = w.subword(0, 33);
    let query = prefix.mul(&p.word("A A").unwrap());
    let hit = find_greendlinger_subword(&query, &p, &q(10, 11)).unwrap();
    assert_eq!((hit.subword_start, hit.subword_length), (0, 33));
    let short = w.subword(0, 31).mul(&p.word("A A").unwrap());
    assert!(find_greendlinger_subword(&short, &p, &q(10, 11)).is_none());
}

#[test]
fn dehn_examples() {
    let p = p8();
    let w = w8(&p);
    assert!(dehn_reduce(&w, &p).is_empty());
    assert!(dehn_reduce(&w.mul(&w), &p).is_empty());
    assert_eq!(dehn_reduce(&p.word("a b").unwrap(), &p), p.word("a b").unwrap());
    assert!(is_identity(&Word::empty(), &p));
    for l in p.letters() {
        assert!(!is_identity(&Word::letter(l), &p));
    }
}

#[test]
fn relator_bound_formula() {
    assert_eq!(relevant_relator_bound(5), 20);
    assert_eq!(relevant_relator_bound(0), 0);
}

#[test]
fn long_relators_are_irrelevant_for_short_words() {
    // The only relator has length 10010, so words of length <= 12 are
    // decided identically with the relator dropped.
    let f = generate_family(140, q(1, 33));
    let full = DehnIndex::new(&f);
    let cut = DehnIndex::with_max_len(&f, relevant_relator_bound(6));
    for u in reduced_words(&f, 6).iter().step_by(7) {
        for v in reduced_words(&f, 3) {
            let w = u.mul(&v.inverse());
            assert_eq!(full.is_identity(&w), cut.is_identity(&w));
            assert_eq!(full.is_identity(&w), w.is_empty());
        }
    }
}

/// `<a, b | a^7, b^7>`: a word is trivial iff the alternating syllable
/// reduction with exponents mod 7 empties it.
fn z7_free_product_trivial(w: &Word) -> bool {
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for l in w.letters() {
        let e = if l.is_inverse() { -1 } else { 1 };
        match stack.last_mut() {
            Some((g, x)) if *g == l.generator() => {
                *x = (*x + e).rem_euclid(7);
                if *x == 0 {
                    stack.pop();
                }
            }
            _ => stack.push((l.generator(), e.rem_euclid(7))),
        }
    }
    stack.is_empty()
}

fn z7z7() -> Presentation {
    parse_presentation("gens: a b\nlambda: 1/6\na^7\nb^7\n").unwrap()
}

fn arb_word(len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u16..4, 0..len).prop_map(|c| Word::new(c.into_iter().map(Letter::from_code)))
}

#[test]
fn dehn_steps_shorten() {
    let p = z7z7();
    let idx = DehnIndex::new(&p);
    for w in reduced_words(&p, 6) {
        let r = idx.dehn_reduce(&w.mul(&w));
        assert!(r.len() <= 2 * w.len());
        assert!(idx.find_hit(&r, &q(1, 2)).is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn identity_matches_free_product_oracle(w in arb_word(40)) {
        prop_assert_eq!(is_identity(&w, &z7z7()), z7_free_product_trivial(&w));
    }

    #[test]
    fn powers_and_conjugates_are_trivial(g in arb_word(6), k in 0i64..4) {
        let p = z7z7();
        let r = p.word("a^7").unwrap().pow(k).mul(&p.word("B^7").unwrap());
        prop_assert!(is_identity(&g.mul(&r).mul(&g.inverse()), &p));
        let p8 = p8();
        let c = g.mul(&w8(&p8)).mul(&g.inverse());
        prop_assert!(is_identity(&c, &p8));
    }

    #[test]
    fn equality_is_an_equivalence(u in arb_word(12), v in arb_word(12), w in arb_word(12)) {
        let p = z7z7();
        let idx = DehnIndex::new(&p);
        let eq = |x: &Word, y: &Word| idx.is_identity(&x.mul(&y.inverse()));
        prop_assert!(eq(&u, &u));
        prop_assert_eq!(eq(&u, &v), eq(&v, &u));
        if eq(&u, &v) && eq(&v, &w) {
            prop_assert!(eq(&u, &w));
        }
        // Pad the comparison with relators so the transitive case is hit.
        let v2 = v.mul(&p.word("a^7").unwrap());
        prop_assert!(eq(&v, &v2));
    }

    #[test]
    fn reduction_is_monotone(w in arb_word(40)) {
        let p = z7z7();
        let r = dehn_reduce(&w, &p);
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.is_empty(), z7_free_product_trivial(&w));
    }
}
