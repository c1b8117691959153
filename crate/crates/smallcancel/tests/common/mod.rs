//! Brute-force oracles shared by the integration tests. They work on raw
//! letter codes and avoid the library's indexes.
#![allow(dead_code)]

use std::collections::BTreeSet;

use smallcancel::{Letter, Presentation, Word, Q};

fn reduce_codes(codes: &[u16]) -> Vec<u16> {
    let mut out: Vec<u16> = Vec::new();
    for &c in codes {
        if out.last().is_some_and(|&l| l ^ 1 == c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    while out.len() >= 2 && out[0] ^ 1 == out[out.len() - 1] {
        out.remove(0);
        out.pop();
    }
    out
}

fn inverse_codes(codes: &[u16]) -> Vec<u16> {
    codes.iter().rev().map(|c| c ^ 1).collect()
}

/// All rotations of each cyclically reduced relator and its inverse.
pub fn brute_symmetrize(p: &Presentation) -> BTreeSet<Vec<u16>> {
    let mut out = BTreeSet::new();
    for r in p.relators() {
        let codes = reduce_codes(&r.letters().iter().map(|l| l.code()).collect::<Vec<_>>());
        for w in [codes.clone(), inverse_codes(&codes)] {
            for i in 0..w.len() {
                let mut rot = w[i..].to_vec();
                rot.extend_from_slice(&w[..i]);
                out.insert(rot);
            }
        }
    }
    out
}

/// `(symmetrized size, longest piece, C'(lambda) verdict)` by all pairs.
pub fn brute_pieces(p: &Presentation, lambda: &Q) -> (usize, usize, bool) {
    let words: Vec<Vec<u16>> = brute_symmetrize(p).into_iter().collect();
    let mut max = 0;
    let mut ok = true;
    for i in 0..words.len() {
        for j in 0..words.len() {
            if i == j {
                continue;
            }
            let l = words[i].iter().zip(&words[j]).take_while(|(a, b)| a == b).count();
            max = max.max(l);
            let short = words[i].len().min(words[j].len());
            if Q::from_integer((l as i64).into()) >= lambda * Q::from_integer((short as i64).into()) {
                ok = false;
            }
        }
    }
    (words.len(), max, ok)
}

/// `a b a b^2 ... a b^7`.
pub fn w8(p: &Presentation) -> Word {
    let mut s = String::new();
    for k in 1..=7 {
        s.push_str(&format!("a b^{k} "));
    }
    p.word(&s).unwrap()
}

/// Every freely reduced word of length at most `n` over `p`'s letters.
pub fn reduced_words(p: &Presentation, n: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut layer = all.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in p.letters() {
                if w.letters().last().is_some_and(|&m: &Letter| m == l.inverse()) {
                    continue;
                }
                next.push(w.mul(&Word::letter(l)));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub fn letter_codes(w: &Word) -> Vec<u16> {
    w.letters().iter().map(|l| l.code()).collect()
}
