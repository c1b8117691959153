use std::cmp::Ordering;
use std::fmt;

/// A signed generator letter. The code is `2*generator + (inverse as u16)`, so
/// the letter order is `a < A < b < B < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter((generator as u16) * 2 + inverse as u16)
    }
    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, false)
    }
    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, true)
    }
    pub fn from_code(code: u16) -> Letter {
        Letter(code)
    }
    pub fn code(self) -> u16 {
        self.0
    }
    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
    pub fn sign(self) -> i8 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = (b'a' + (self.generator() % 26) as u8) as char;
        if self.is_inverse() {
            write!(f, "{}", c.to_ascii_uppercase())
        } else {
            write!(f, "{c}")
        }
    }
}

/// A word in the free group. Constructors that take arbitrary letter
/// sequences reduce them; `from_letters_unchecked` is for callers that
/// already know the sequence is reduced.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Freely reduces the given letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn from_letters_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(is_freely_reduced(&letters));
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Product in the free group (reduced).
    pub fn mul(&self, other: &Word) -> Word {
        let mut k = 0;
        let a = &self.0;
        let b = &other.0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        let mut v = Vec::with_capacity(a.len() + b.len() - 2 * k);
        v.extend_from_slice(&a[..a.len() - k]);
        v.extend_from_slice(&b[k..]);
        Word(v)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) => self.0.len() == 1 || *f != l.inverse(),
            _ => true,
        }
    }

    /// Cyclic reduction; the result is a conjugate of `self`.
    pub fn cyclic_reduce(&self) -> Word {
        let v = &self.0;
        let mut i = 0;
        let mut j = v.len();
        while j >= i + 2 && v[i] == v[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(v[i..j].to_vec())
    }

    /// The cyclic permutation starting at position `k` (mod length).
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Lexicographic comparison (not shortlex).
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0.iter().zip(other.0.iter()).take_while(|(a, b)| a == b).count()
    }

    /// Letter codes as bytes (requires fewer than 128 generators).
    pub fn codes(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.code() as u8).collect()
    }

    /// Generators occurring in the word, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.0.iter().map(|l| l.generator()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

/// Shortlex order: shorter words first, then lexicographic by letter code.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

pub fn free_reduce(w: &Word) -> Word {
    Word::new(w.0.iter().copied())
}

pub fn cyclic_reduce(w: &Word) -> Word {
    free_reduce(w).cyclic_reduce()
}

/// Smallest period of `s` that divides its length (so `s = root^(len/period)`).
pub fn primitive_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation<T: Ord + Copy>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != at(k + (i + 1) as usize) {
            if sj < at(k + (i + 1) as usize) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::new(s.chars().map(|c| {
            let g = (c.to_ascii_lowercase() as u8 - b'a') as usize;
            Letter::new(g, c.is_ascii_uppercase())
        }))
    }

    #[test]
    fn free_and_cyclic_reduction() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("baB").cyclic_reduce(), w("a"));
        assert_eq!(w("abAB").cyclic_reduce(), w("abAB"));
        assert_eq!(w("ab").mul(&w("BA")), Word::empty());
        assert_eq!(w("ab").pow(-2), w("BABA"));
    }

    #[test]
    fn shortlex_order() {
        assert!(w("b") < w("aa"));
        assert!(w("a") < w("A"));
        assert!(w("A") < w("b"));
    }

    #[test]
    fn periods_and_rotations() {
        assert_eq!(primitive_period(&[1, 2, 1, 2]), 2);
        assert_eq!(primitive_period(&[1, 2, 1]), 3);
        assert_eq!(primitive_period(&[5; 7]), 1);
        for s in [vec![3, 1, 2, 1, 1], vec![2, 2, 1, 2, 1], vec![1], vec![4, 3, 2, 1]] {
            let k = least_rotation(&s);
            let rot: Vec<i32> = (0..s.len()).map(|i| s[(k + i) % s.len()]).collect();
            let brute = (0..s.len())
                .map(|r| (0..s.len()).map(|i| s[(r + i) % s.len()]).collect::<Vec<i32>>())
                .min()
                .unwrap();
            assert_eq!(rot, brute);
        }
    }
}
