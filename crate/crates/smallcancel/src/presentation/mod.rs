//! Words, presentations, pieces and the condition (*) split.

mod parse;
mod pieces;
mod word;

pub use parse::{format_word, parse_presentation, parse_word};
pub use pieces::{piece_table, piece_table_at, PieceReport, PieceWitness};
pub use word::{cyclic_reduce, free_reduce, least_rotation, primitive_period, Letter, Word};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::rational::{qu, Q};

/// One conjugacy class of relators (up to inversion). `word` is the
/// lexicographically least cyclic permutation of `r` and `r^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorClass {
    pub word: Word,
    /// Length of the primitive root, so `word = root^(len/period)`.
    pub period: usize,
    /// `word^-1` is itself a cyclic permutation of `word`.
    pub self_inverse: bool,
}

impl RelatorClass {
    fn new(r: &Word) -> RelatorClass {
        let a = least_rot_word(r);
        let b = least_rot_word(&r.inverse());
        let self_inverse = a == b;
        let word = if a.lex_cmp(&b).is_le() { a } else { b };
        let period = primitive_period(word.letters());
        RelatorClass { word, period, self_inverse }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

fn least_rot_word(w: &Word) -> Word {
    w.rotate(least_rotation(w.letters()))
}

/// An element of the symmetrized relator set, described without
/// materializing it: the rotation by `offset` of the class word or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymRef {
    pub class: usize,
    pub inverse: bool,
    pub offset: usize,
}

/// A group presentation `<X | R>` with `R` stored as relator classes; the
/// symmetrized set is available implicitly (`sym_refs`) or materialized
/// (`symmetrized`).
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Vec<String>,
    classes: Vec<RelatorClass>,
    lambda: Q,
}

impl Presentation {
    pub fn new(alphabet: Vec<String>, relators: Vec<Word>, lambda: Q) -> Result<Presentation> {
        if lambda <= qu(0) {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        let mut seen = BTreeMap::new();
        for r in &relators {
            let c = cyclic_reduce(r);
            if c.is_empty() {
                return Err(Error::EmptyRelator);
            }
            if let Some(l) = c.letters().iter().find(|l| l.generator() >= alphabet.len()) {
                return Err(Error::Parse(format!("letter {l:?} outside the alphabet")));
            }
            let class = RelatorClass::new(&c);
            seen.entry(class.word.clone()).or_insert(class);
        }
        let classes = seen.into_values().collect();
        Ok(Presentation { alphabet, classes, lambda })
    }

    /// Alphabet `a, b, c, ...` of the given size.
    pub fn standard_alphabet(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn lambda(&self) -> &Q {
        &self.lambda
    }

    pub fn with_lambda(&self, lambda: Q) -> Presentation {
        Presentation { lambda, ..self.clone() }
    }

    pub fn classes(&self) -> &[RelatorClass] {
        &self.classes
    }

    /// One representative per relator class.
    pub fn relators(&self) -> Vec<Word> {
        self.classes.iter().map(|c| c.word.clone()).collect()
    }

    pub fn max_relator_len(&self) -> usize {
        self.classes.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn min_relator_len(&self) -> usize {
        self.classes.iter().map(|c| c.len()).min().unwrap_or(0)
    }

    /// All letters `x` and `x^-1`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.rank()).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect()
    }

    /// Implicit enumeration of the symmetrized set, without duplicates.
    pub fn sym_refs(&self) -> Vec<SymRef> {
        let mut out = Vec::new();
        for (ci, c) in self.classes.iter().enumerate() {
            for offset in 0..c.period {
                out.push(SymRef { class: ci, inverse: false, offset });
            }
            if !c.self_inverse {
                for offset in 0..c.period {
                    out.push(SymRef { class: ci, inverse: true, offset });
                }
            }
        }
        out
    }

    pub fn sym_word(&self, s: &SymRef) -> Word {
        let c = &self.classes[s.class].word;
        let base = if s.inverse { c.inverse() } else { c.clone() };
        base.rotate(s.offset)
    }

    pub fn symmetrized_len(&self) -> usize {
        self.classes.iter().map(|c| if c.self_inverse { c.period } else { 2 * c.period }).sum()
    }

    /// The materialized symmetrized set, sorted lexicographically.
    pub fn symmetrized(&self) -> Vec<Word> {
        let set: BTreeSet<Vec<Letter>> =
            self.sym_refs().iter().map(|s| self.sym_word(s).into_letters()).collect();
        set.into_iter().map(Word::from_letters_unchecked).collect()
    }

    /// Generators that occur in no relator.
    pub fn free_letters(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.classes.iter().flat_map(|c| c.word.support()).collect();
        (0..self.rank()).filter(|g| !used.contains(g)).collect()
    }

    /// Condition (*): every relator is longer than 1/lambda and every letter
    /// occurs in some relator.
    pub fn satisfies_star(&self) -> bool {
        self.classes.iter().all(|c| qu(c.len()) * &self.lambda > qu(1)) && self.free_letters().is_empty()
    }

    /// Sub-presentation on the given generators (renumbered in order) with
    /// the given relator classes.
    fn restrict(&self, gens: &[usize], classes: &[usize]) -> Presentation {
        let map: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let alphabet = gens.iter().map(|&g| self.alphabet[g].clone()).collect();
        let relators = classes
            .iter()
            .map(|&ci| {
                Word::new(
                    self.classes[ci].word.letters().iter().map(|l| Letter::new(map[&l.generator()], l.is_inverse())),
                )
            })
            .collect();
        Presentation::new(alphabet, relators, self.lambda.clone()).expect("restriction of a valid presentation")
    }
}

/// The symmetric closure of a set of words, materialized and sorted.
pub fn symmetrize(relators: &[Word]) -> Result<Vec<Word>> {
    let rank = relators.iter().flat_map(|r| r.letters()).map(|l| l.generator() + 1).max().unwrap_or(0);
    let p = Presentation::new(Presentation::standard_alphabet(rank), relators.to_vec(), qu(1))?;
    Ok(p.symmetrized())
}

/// `<a, b | a b a b^2 ... a b^n>`.
pub fn generate_family(n: usize, lambda: Q) -> Presentation {
    let mut letters = Vec::new();
    for k in 1..=n {
        letters.push(Letter::pos(0));
        letters.extend(std::iter::repeat_n(Letter::pos(1), k));
    }
    Presentation::new(Presentation::standard_alphabet(2), vec![Word::new(letters)], lambda)
        .expect("family relator is nonempty")
}

/// Result of splitting a presentation along condition (*).
#[derive(Clone, Debug)]
pub struct StarSplit {
    /// `<X1 | R1>` with `R1 = {r : |r| > 1/lambda}` and `X1` the letters of `R1`.
    pub long: Presentation,
    /// `<X \ X1 | R \ R1>`; letters in no relator land here as free letters.
    pub short: Presentation,
    pub long_generators: Vec<usize>,
    pub short_generators: Vec<usize>,
}

/// Splits `p` into a factor satisfying (*) and the complementary factor, so
/// that the group is their free product.
pub fn normalize_star(p: &Presentation) -> Result<StarSplit> {
    let one = qu(1);
    let (long_c, short_c): (Vec<usize>, Vec<usize>) =
        (0..p.classes.len()).partition(|&ci| qu(p.classes[ci].len()) * &p.lambda > one);
    let x1: BTreeSet<usize> = long_c.iter().flat_map(|&ci| p.classes[ci].word.support()).collect();
    for &ci in &short_c {
        if let Some(g) = p.classes[ci].word.support().into_iter().find(|g| x1.contains(g)) {
            return Err(Error::InvariantViolation(format!(
                "letter {} occurs in both a long and a short relator",
                p.alphabet[g]
            )));
        }
    }
    let long_generators: Vec<usize> = x1.iter().copied().collect();
    let short_generators: Vec<usize> = (0..p.rank()).filter(|g| !x1.contains(g)).collect();
    Ok(StarSplit {
        long: p.restrict(&long_generators, &long_c),
        short: p.restrict(&short_generators, &short_c),
        long_generators,
        short_generators,
    })
}

/// The letter graph: generators joined when they occur in a common relator.
#[derive(Clone, Debug)]
pub struct LetterGraph {
    pub adjacency: Vec<BTreeSet<usize>>,
    pub components: Vec<Vec<usize>>,
    /// Relator classes of each component (indices into `classes()`).
    pub component_relators: Vec<Vec<usize>>,
    pub max_valency: usize,
}

impl LetterGraph {
    /// Graph distances from `o` inside its component.
    pub fn distances_from(&self, o: usize) -> BTreeMap<usize, usize> {
        let mut dist = BTreeMap::new();
        dist.insert(o, 0);
        let mut queue = std::collections::VecDeque::from([o]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for &y in &self.adjacency[x] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn component_presentation(&self, p: &Presentation, i: usize) -> Presentation {
        p.restrict(&self.components[i], &self.component_relators[i])
    }
}

pub fn letter_graph(p: &Presentation) -> LetterGraph {
    let n = p.rank();
    let mut adjacency = vec![BTreeSet::new(); n];
    for c in &p.classes {
        let s = c.word.support();
        for &x in &s {
            for &y in &s {
                if x != y {
                    adjacency[x].insert(y);
                }
            }
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        comp_of[start] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &y in &adjacency[x] {
                if comp_of[y] == usize::MAX {
                    comp_of[y] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut component_relators = vec![Vec::new(); components.len()];
    for (ci, c) in p.classes.iter().enumerate() {
        component_relators[comp_of[c.word.letters()[0].generator()]].push(ci);
    }
    let max_valency = adjacency.iter().map(|a| a.len()).max().unwrap_or(0);
    LetterGraph { adjacency, components, component_relators, max_valency }
}
