//! Seeded sampling of `(g, x, h)` triples.
//!
//! The offset `g^-1 h` is drawn with its requested length stratified
//! uniformly over `0..=max_dist`. Half of the draws are uniform reduced
//! words; the other half are concatenations of relator arcs, which puts
//! geodesics along long stretches of contours where uniform words rarely go.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallcancel::cayley::Region;
use smallcancel::{Letter, Presentation, Result, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub g: Word,
    pub x: Letter,
    pub h: Word,
}

pub fn rng_for(seed: u64, stream: &str) -> ChaCha8Rng {
    // FNV-1a keeps per-scenario streams independent of scenario order.
    let mut hsh: u64 = 0xcbf29ce484222325;
    for b in stream.bytes() {
        hsh ^= b as u64;
        hsh = hsh.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ hsh)
}

pub fn random_reduced(rng: &mut ChaCha8Rng, p: &Presentation, len: usize) -> Word {
    let letters = p.letters();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = *letters.choose(rng).expect("nonempty alphabet");
        if out.last().is_some_and(|&m| m == l.inverse()) {
            continue;
        }
        out.push(l);
    }
    Word::new(out)
}

/// Relator arcs of random length, occasionally separated by a free letter,
/// cut to `len` letters.
pub fn motif(rng: &mut ChaCha8Rng, p: &Presentation, len: usize) -> Word {
    let refs = p.sym_refs();
    if refs.is_empty() {
        return random_reduced(rng, p, len);
    }
    let mut letters: Vec<Letter> = Vec::new();
    while letters.len() < len {
        let s = refs[rng.gen_range(0..refs.len())];
        let w = p.sym_word(&s);
        let n = rng.gen_range(1..=w.len() / 2 + 1);
        letters.extend_from_slice(&w.letters()[..n.min(w.len())]);
        if rng.gen_bool(0.3) {
            letters.push(*p.letters().choose(rng).expect("nonempty alphabet"));
        }
    }
    letters.truncate(len);
    Word::new(letters)
}

/// `count` triples with `|g| <= g_len` and requested `d(g,h) <= max_dist`.
pub fn triples(
    region: &Region,
    rng: &mut ChaCha8Rng,
    count: usize,
    max_dist: usize,
    g_len: usize,
) -> Result<Vec<Triple>> {
    let p = region.presentation();
    let letters = p.letters();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let d = i % (max_dist + 1);
        let gl = rng.gen_range(0..=g_len);
        let g = region.canonical(&random_reduced(rng, p, gl))?;
        let k = if rng.gen_bool(0.5) { motif(rng, p, d) } else { random_reduced(rng, p, d) };
        let h = region.mul(&g, &k)?;
        let x = *letters.choose(rng).expect("nonempty alphabet");
        out.push(Triple { g, x, h });
    }
    Ok(out)
}
