//! Finite views of the Cayley graph: canonical element words, distances,
//! complete geodesic sets, contours and their arcs along paths.
//!
//! Two backends. `Ball` folds the free-group tree of radius `R` along the
//! relators and answers exactly for elements within distance `R` of 1.
//! `PieceFree` needs a presentation with no pieces; then every contour meets
//! every other in at most a vertex, Dehn-reduced words are geodesic, and the
//! canonical form of `DehnIndex` is exact at any scale.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::presentation::{piece_table_at, Letter, Presentation, Word};
use crate::rational::q;
use crate::wordproblem::{relevant_relator_bound, DehnIndex};

const NONE: u32 = u32::MAX;

/// Undirected edge, stored in its positive orientation `tail --gen--> head`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: Word,
    pub generator: usize,
    pub head: Word,
}

impl Edge {
    /// The edge crossed by stepping from `from` to `to` along `letter`.
    pub fn of_step(from: &Word, letter: Letter, to: &Word) -> Edge {
        if letter.is_inverse() {
            Edge { tail: to.clone(), generator: letter.generator(), head: from.clone() }
        } else {
            Edge { tail: from.clone(), generator: letter.generator(), head: to.clone() }
        }
    }

    pub fn translate(&self, region: &Region, k: &Word) -> Result<Edge> {
        Ok(Edge { tail: region.mul(k, &self.tail)?, generator: self.generator, head: region.mul(k, &self.head)? })
    }
}

/// An edge path given by its vertices and the letters read along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<Word>,
    pub letters: Vec<Letter>,
}

impl Path {
    pub fn trivial(v: Word) -> Path {
        Path { vertices: vec![v], letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn start(&self) -> &Word {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Word {
        self.vertices.last().expect("paths have a vertex")
    }

    pub fn edge(&self, i: usize) -> Edge {
        Edge::of_step(&self.vertices[i], self.letters[i], &self.vertices[i + 1])
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.len()).map(|i| self.edge(i)).collect()
    }

    pub fn label(&self) -> Word {
        Word::from_letters_unchecked(self.letters.clone())
    }
}

/// A contour: a simple loop in the Cayley graph labelled by a relator,
/// identified by its edge set. It is stored starting at the tail of its least
/// edge, traversing that edge positively.
#[derive(Clone, Debug)]
pub struct Contour(Rc<ContourData>);

#[derive(Debug)]
struct ContourData {
    reading: Word,
    vertices: Vec<Word>,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl PartialEq for Contour {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Contour {}

impl std::hash::Hash for Contour {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Contour {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Contour {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Hashable identity of a contour.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContourKey {
    pub base: Word,
    pub reading: Word,
}

impl Contour {
    fn from_loop(vertices: Vec<Word>, reading: Word) -> Result<Contour> {
        let n = reading.len();
        let edges: Vec<Edge> =
            (0..n).map(|i| Edge::of_step(&vertices[i], reading.letters()[i], &vertices[(i + 1) % n])).collect();
        let m = (0..n).min_by(|&i, &j| edges[i].cmp(&edges[j])).expect("nonempty loop");
        let (vertices, reading) = if !reading.letters()[m].is_inverse() {
            ((0..n).map(|k| vertices[(m + k) % n].clone()).collect::<Vec<_>>(), reading.rotate(m))
        } else {
            ((0..n).map(|k| vertices[(m + 1 + n - k) % n].clone()).collect(), reading.rotate((m + 1) % n).inverse())
        };
        let edges: Vec<Edge> =
            (0..n).map(|i| Edge::of_step(&vertices[i], reading.letters()[i], &vertices[(i + 1) % n])).collect();
        let index: HashMap<Edge, usize> = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n {
            return Err(Error::InvariantViolation(format!("contour {reading:?} repeats an edge")));
        }
        Ok(Contour(Rc::new(ContourData { reading, vertices, edges, index })))
    }

    pub fn key(&self) -> ContourKey {
        ContourKey { base: self.0.vertices[0].clone(), reading: self.0.reading.clone() }
    }

    pub fn len(&self) -> usize {
        self.0.reading.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.reading.is_empty()
    }

    pub fn reading(&self) -> &Word {
        &self.0.reading
    }

    pub fn vertices(&self) -> &[Word] {
        &self.0.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0.edges
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.0.index.contains_key(e)
    }

    pub fn edge_position(&self, e: &Edge) -> Option<usize> {
        self.0.index.get(e).copied()
    }

    pub fn contains_vertex(&self, v: &Word) -> bool {
        self.0.vertices.contains(v)
    }

    /// Path along the contour from vertex index `i`, `steps` edges forward
    /// (or backward when `forward` is false).
    pub fn arc(&self, i: usize, steps: usize, forward: bool) -> Path {
        let n = self.len();
        let mut vertices = vec![self.0.vertices[i % n].clone()];
        let mut letters = Vec::new();
        let mut cur = i % n;
        for _ in 0..steps {
            if forward {
                letters.push(self.0.reading.letters()[cur]);
                cur = (cur + 1) % n;
            } else {
                cur = (cur + n - 1) % n;
                letters.push(self.0.reading.letters()[cur].inverse());
            }
            vertices.push(self.0.vertices[cur].clone());
        }
        Path { vertices, letters }
    }
}

/// The part of a contour lying on a path: path vertices `start..=end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcIntersection {
    pub start: usize,
    pub end: usize,
}

impl ArcIntersection {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn edge_range(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// `r ∩ p` as a single arc; `None` when they share no edge.
pub fn intersect(c: &Contour, p: &Path) -> Result<Option<ArcIntersection>> {
    let hits: Vec<usize> = (0..p.len()).filter(|&i| c.contains_edge(&p.edge(i))).collect();
    let (Some(&first), Some(&last)) = (hits.first(), hits.last()) else {
        return Ok(None);
    };
    if last - first + 1 != hits.len() {
        return Err(Error::InvariantViolation(format!(
            "contour {:?} meets path in a non-consecutive edge set {hits:?}",
            c.reading()
        )));
    }
    Ok(Some(ArcIntersection { start: first, end: last + 1 }))
}

/// Intersection of two contours, as a path along `a`. Fails unless the shared
/// edges form one arc.
pub fn contour_overlap(a: &Contour, b: &Contour) -> Result<usize> {
    let n = a.len();
    let shared: Vec<bool> = a.edges().iter().map(|e| b.contains_edge(e)).collect();
    let count = shared.iter().filter(|&&s| s).count();
    if count == 0 {
        return Ok(0);
    }
    if count == n {
        if a == b {
            return Ok(n);
        }
        return Err(Error::InvariantViolation("distinct contours share all edges".into()));
    }
    let runs = (0..n).filter(|&i| shared[i] && !shared[(i + n - 1) % n]).count();
    if runs != 1 {
        return Err(Error::InvariantViolation(format!(
            "contours {:?} and {:?} share {runs} separate arcs",
            a.reading(),
            b.reading()
        )));
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Ball,
    PieceFree,
}

#[derive(Clone, Debug)]
struct Ball {
    radius: usize,
    sigma: usize,
    /// Dense adjacency: `adj[v * sigma + code]`.
    adj: Vec<u32>,
    words: Vec<Word>,
    depth: Vec<usize>,
    lookup: HashMap<Word, u32>,
    tree_size: usize,
    completed_edges: usize,
}

/// Statistics of a ball region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallStats {
    pub radius: usize,
    pub tree_vertices: usize,
    pub vertices: usize,
    pub edges: usize,
    pub contours_inside: usize,
    pub completed_edges: usize,
}

pub struct Region {
    p: Presentation,
    index: DehnIndex,
    ball: Option<Ball>,
    cache: RefCell<HashMap<Word, Word>>,
    max_paths: usize,
}

fn tree_size(sigma: usize, radius: usize) -> usize {
    let mut total = 1usize;
    let mut layer = 1usize;
    for d in 0..radius {
        layer = layer.saturating_mul(if d == 0 { sigma } else { sigma - 1 });
        total = total.saturating_add(layer);
    }
    total
}

impl Region {
    /// Ball of the given radius; needs C'(1/6) so that Dehn's algorithm can
    /// back the lookups.
    pub fn ball(p: &Presentation, radius: usize, max_vertices: usize) -> Result<Region> {
        let r = piece_table_at(p, &q(1, 6));
        if let Some(v) = r.violation {
            return Err(Error::NotSmallCancellation(format!("piece {:?} violates C'(1/6)", v.piece)));
        }
        Region::ball_unchecked(p, radius, max_vertices)
    }

    /// Ball without the small-cancellation check. Identification still comes
    /// from folding alone; only lookups outside the ball rely on Dehn.
    pub fn ball_unchecked(p: &Presentation, radius: usize, max_vertices: usize) -> Result<Region> {
        let ball = fold_ball(p, radius, max_vertices)?;
        let mut region = Region::with_index(p);
        region.ball = Some(ball);
        region.complete_ball_edges();
        Ok(region)
    }

    pub fn piece_free(p: &Presentation) -> Result<Region> {
        if !p.is_piece_free() {
            return Err(Error::NotPieceFree);
        }
        Ok(Region::with_index(p))
    }

    /// `PieceFree` when possible, otherwise a ball.
    pub fn auto(p: &Presentation, radius: usize, max_vertices: usize) -> Result<Region> {
        if p.is_piece_free() {
            Region::piece_free(p)
        } else {
            Region::ball(p, radius, max_vertices)
        }
    }

    fn with_index(p: &Presentation) -> Region {
        Region {
            p: p.clone(),
            index: DehnIndex::new(p),
            ball: None,
            cache: RefCell::new(HashMap::new()),
            max_paths: 1 << 14,
        }
    }

    pub fn with_max_paths(mut self, cap: usize) -> Region {
        self.max_paths = cap;
        self
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn dehn(&self) -> &DehnIndex {
        &self.index
    }

    pub fn kind(&self) -> RegionKind {
        if self.ball.is_some() {
            RegionKind::Ball
        } else {
            RegionKind::PieceFree
        }
    }

    /// Certified radius (`None` for the unbounded piece-free backend).
    pub fn radius(&self) -> Option<usize> {
        self.ball.as_ref().map(|b| b.radius)
    }

    fn walk(&self, b: &Ball, w: &Word) -> Option<u32> {
        let mut v = 0u32;
        for l in w.letters() {
            v = b.adj[v as usize * b.sigma + l.code() as usize];
            if v == NONE {
                return None;
            }
        }
        Some(v)
    }

    /// The canonical word of the element represented by `w`: the shortlex
    /// least geodesic word inside a ball, otherwise the Dehn normal form.
    pub fn canonical(&self, w: &Word) -> Result<Word> {
        if let Some(c) = self.cache.borrow().get(w) {
            return Ok(c.clone());
        }
        let out = match &self.ball {
            Some(b) => match self.walk(b, w) {
                Some(v) => b.words[v as usize].clone(),
                None => {
                    let c = self.index.canonical_form(w)?;
                    match self.walk(b, &c) {
                        Some(v) => b.words[v as usize].clone(),
                        None => c,
                    }
                }
            },
            None => self.index.canonical_form(w)?,
        };
        let mut cache = self.cache.borrow_mut();
        if cache.len() > 1 << 20 {
            cache.clear();
        }
        cache.insert(w.clone(), out.clone());
        Ok(out)
    }

    /// `canonical(g h)`.
    pub fn mul(&self, g: &Word, h: &Word) -> Result<Word> {
        self.canonical(&g.mul(h))
    }

    pub fn neighbor(&self, v: &Word, l: Letter) -> Result<Word> {
        self.canonical(&v.mul(&Word::letter(l)))
    }

    /// `d(1, e)` for a canonical word `e`.
    pub fn norm(&self, e: &Word) -> Result<usize> {
        match &self.ball {
            Some(b) => match b.lookup.get(e) {
                Some(&v) => Ok(b.depth[v as usize]),
                None => Err(Error::OutOfRegion(format!("{e:?} is not within radius {}", b.radius))),
            },
            None => Ok(e.len()),
        }
    }

    pub fn distance(&self, g: &Word, h: &Word) -> Result<usize> {
        self.norm(&self.canonical(&g.inverse().mul(h))?)
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        let c = self.canonical(w)?;
        Ok(self.norm(&c).is_ok())
    }

    /// Canonical words of all elements at distance at most `r` from 1, in
    /// shortlex order.
    pub fn elements_within(&self, r: usize) -> Result<Vec<Word>> {
        if let Some(b) = &self.ball {
            if r > b.radius {
                return Err(Error::OutOfRegion(format!("radius {r} exceeds the ball radius {}", b.radius)));
            }
            let mut out: Vec<Word> =
                b.words.iter().zip(&b.depth).filter(|(_, &d)| d <= r).map(|(w, _)| w.clone()).collect();
            out.sort();
            return Ok(out);
        }
        let mut seen: BTreeSet<Word> = BTreeSet::from([Word::empty()]);
        let mut frontier = vec![Word::empty()];
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &frontier {
                for l in self.p.letters() {
                    let u = self.neighbor(v, l)?;
                    if u.len() == v.len() + 1 && seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen.into_iter().collect())
    }

    /// All geodesics from 1 to the canonical element `k`.
    fn geodesics_from_one(&self, k: &Word) -> Result<Vec<Path>> {
        let d = self.norm(k)?;
        // layers[i]: vertices at distance d - i from 1 lying on a geodesic to k,
        // with their successors toward k.
        let mut layer: BTreeMap<Word, Vec<(Letter, Word)>> = BTreeMap::from([(k.clone(), Vec::new())]);
        let mut layers = Vec::new();
        for level in (0..d).rev() {
            let mut below: BTreeMap<Word, Vec<(Letter, Word)>> = BTreeMap::new();
            for v in layer.keys() {
                for l in self.p.letters() {
                    let u = self.neighbor(v, l)?;
                    if self.norm(&u).ok() == Some(level) {
                        below.entry(u).or_default().push((l.inverse(), v.clone()));
                    }
                }
            }
            layers.push(std::mem::replace(&mut layer, below));
        }
        layers.push(layer);
        layers.reverse();
        // layers[0] = {1}; extend paths upward.
        let mut paths = vec![Path::trivial(Word::empty())];
        for lay in layers.iter().take(d) {
            let mut next = Vec::new();
            for path in &paths {
                for (l, v) in &lay[path.end()] {
                    let mut q = path.clone();
                    q.letters.push(*l);
                    q.vertices.push(v.clone());
                    next.push(q);
                }
            }
            if next.len() > self.max_paths {
                return Err(Error::ResourceLimit(format!("more than {} geodesics to {k:?}", self.max_paths)));
            }
            paths = next;
        }
        Ok(paths)
    }

    /// `d(g, h)` and the complete set of geodesics from `g` to `h`, sorted.
    pub fn geodesics(&self, g: &Word, h: &Word) -> Result<(usize, Vec<Path>)> {
        let k = self.canonical(&g.inverse().mul(h))?;
        let base = self.geodesics_from_one(&k)?;
        let mut out = Vec::with_capacity(base.len());
        for p in base {
            let vertices = p.vertices.iter().map(|v| self.mul(g, v)).collect::<Result<Vec<_>>>()?;
            out.push(Path { vertices, letters: p.letters });
        }
        out.sort();
        Ok((self.norm(&k)?, out))
    }

    /// Traces the loop reading `u` from `v`; fails unless it is a simple loop.
    pub fn trace(&self, v: &Word, u: &Word) -> Result<Contour> {
        let mut vertices = Vec::with_capacity(u.len());
        let mut cur = v.clone();
        for &l in u.letters() {
            vertices.push(cur.clone());
            cur = self.neighbor(&cur, l)?;
        }
        if &cur != v {
            return Err(Error::InvariantViolation(format!("reading {u:?} from {v:?} does not close up")));
        }
        let distinct: HashSet<&Word> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvariantViolation(format!("reading {u:?} from {v:?} is not a simple loop")));
        }
        Contour::from_loop(vertices, u.clone())
    }

    pub fn translate_contour(&self, k: &Word, c: &Contour) -> Result<Contour> {
        self.trace(&self.mul(k, &c.vertices()[0])?, c.reading())
    }

    /// All contours through the vertex `v` with at most `max_len` edges.
    pub fn contours_at(&self, v: &Word, max_len: usize) -> Result<BTreeSet<Contour>> {
        let mut out = BTreeSet::new();
        for s in self.p.sym_refs() {
            if self.p.classes()[s.class].len() <= max_len {
                out.insert(self.trace(v, &self.p.sym_word(&s))?);
            }
        }
        Ok(out)
    }

    /// All contours of length at most `max_len` sharing an edge with `p`.
    pub fn contours_along(&self, p: &Path, max_len: usize) -> Result<BTreeSet<Contour>> {
        let mut by_letter: HashMap<Letter, Vec<Word>> = HashMap::new();
        for s in self.p.sym_refs() {
            if self.p.classes()[s.class].len() <= max_len {
                let w = self.p.sym_word(&s);
                by_letter.entry(w.letters()[0]).or_default().push(w);
            }
        }
        let mut out = BTreeSet::new();
        for i in 0..p.len() {
            for w in by_letter.get(&p.letters[i]).map(|v| v.as_slice()).unwrap_or(&[]) {
                out.insert(self.trace(&p.vertices[i], w)?);
            }
        }
        Ok(out)
    }

    /// Vertex and edge counts of a ball, with the number of contours lying
    /// entirely inside it.
    pub fn ball_stats(&self) -> Option<BallStats> {
        let b = self.ball.as_ref()?;
        let edges = b.adj.iter().enumerate().filter(|(i, &t)| t != NONE && i % 2 == 0).count();
        let mut keys = BTreeSet::new();
        for v in 0..b.words.len() {
            for s in self.p.sym_refs() {
                let u = self.p.sym_word(&s);
                let mut cur = v as u32;
                let mut verts = Vec::with_capacity(u.len());
                for l in u.letters() {
                    verts.push(b.words[cur as usize].clone());
                    cur = b.adj[cur as usize * b.sigma + l.code() as usize];
                    if cur == NONE {
                        break;
                    }
                }
                if cur as usize == v {
                    if let Ok(c) = Contour::from_loop(verts, u) {
                        keys.insert(c.key());
                    }
                }
            }
        }
        Some(BallStats {
            radius: b.radius,
            tree_vertices: b.tree_size,
            vertices: b.words.len(),
            edges,
            contours_inside: keys.len(),
            completed_edges: b.completed_edges,
        })
    }

    /// The ball's vertices and positive edges in DOT format.
    pub fn dot(&self) -> Option<String> {
        let b = self.ball.as_ref()?;
        let mut s = String::from("digraph ball {\n");
        for (i, w) in b.words.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\"];", self.p.format_word(w));
        }
        for v in 0..b.words.len() {
            for g in 0..self.p.rank() {
                let t = b.adj[v * b.sigma + 2 * g];
                if t != NONE {
                    let _ = writeln!(s, "  v{v} -> v{t} [label=\"{}\"];", self.p.alphabet()[g]);
                }
            }
        }
        s.push_str("}\n");
        Some(s)
    }

    /// Index of the ball vertex reached by reading `w` from 1 along folded
    /// edges alone, without Dehn's algorithm.
    pub fn locate(&self, w: &Word) -> Option<usize> {
        let b = self.ball.as_ref()?;
        self.walk(b, w).map(|v| v as usize)
    }

    /// Ball vertex words, indexed as in the fold.
    pub fn ball_words(&self) -> Option<&[Word]> {
        self.ball.as_ref().map(|b| b.words.as_slice())
    }

    /// Fills edges between ball vertices that the fold left undetermined,
    /// using the Dehn normal form of `v x`.
    fn complete_ball_edges(&mut self) {
        let Some(mut b) = self.ball.take() else { return };
        let mut added = 0;
        for v in 0..b.words.len() {
            for c in 0..b.sigma {
                if b.adj[v * b.sigma + c] != NONE {
                    continue;
                }
                let l = Letter::from_code(c as u16);
                let Ok(w) = self.index.canonical_form(&b.words[v].mul(&Word::letter(l))) else { continue };
                if let Some(t) = self.walk(&b, &w) {
                    b.adj[v * b.sigma + c] = t;
                    b.adj[t as usize * b.sigma + l.inverse().code() as usize] = v as u32;
                    added += 1;
                }
            }
        }
        b.completed_edges = added / 2;
        self.ball = Some(b);
    }
}

/// Builds the free tree of radius `radius` and folds it along every relator
/// of length at most `4 * radius` until nothing changes.
fn fold_ball(p: &Presentation, radius: usize, max_vertices: usize) -> Result<Ball> {
    let sigma = 2 * p.rank();
    let size = if sigma == 0 { 1 } else { tree_size(sigma, radius) };
    if size > max_vertices {
        return Err(Error::ResourceLimit(format!("ball of radius {radius} has {size} tree vertices (cap {max_vertices})")));
    }
    let mut adj = vec![NONE; size.max(1) * sigma.max(1)];
    let mut last = vec![u16::MAX; size];
    let mut count = 1usize;
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for c in 0..sigma {
                if last[v] != u16::MAX && Letter::from_code(last[v]).inverse().code() as usize == c {
                    continue;
                }
                let u = count;
                count += 1;
                adj[v * sigma + c] = u as u32;
                adj[u * sigma + (c ^ 1)] = v as u32;
                last[u] = c as u16;
                next.push(u);
            }
        }
        frontier = next;
    }
    debug_assert_eq!(count, size);

    let mut parent: Vec<u32> = (0..size as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let merge = |parent: &mut Vec<u32>, adj: &mut Vec<u32>, a: u32, b: u32| {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            let (x, y) = (find(parent, x), find(parent, y));
            if x == y {
                continue;
            }
            let (x, y) = if x < y { (x, y) } else { (y, x) };
            parent[y as usize] = x;
            for c in 0..sigma {
                let ty = adj[y as usize * sigma + c];
                if ty == NONE {
                    continue;
                }
                let tx = adj[x as usize * sigma + c];
                if tx == NONE {
                    adj[x as usize * sigma + c] = ty;
                } else {
                    queue.push((tx, ty));
                }
            }
        }
    };

    let bound = relevant_relator_bound(radius);
    let rels: Vec<Vec<usize>> = p
        .sym_refs()
        .iter()
        .filter(|s| p.classes()[s.class].len() <= bound)
        .map(|s| p.sym_word(s).letters().iter().map(|l| l.code() as usize).collect())
        .collect();
    loop {
        let mut changed = false;
        for v in 0..size as u32 {
            if find(&mut parent, v) != v {
                continue;
            }
            for r in &rels {
                let n = r.len();
                let v = find(&mut parent, v);
                let mut f = v;
                let mut i = 0;
                while i < n {
                    let t = adj[f as usize * sigma + r[i]];
                    if t == NONE {
                        break;
                    }
                    f = find(&mut parent, t);
                    i += 1;
                }
                if i == n {
                    if f != v {
                        merge(&mut parent, &mut adj, f, v);
                        changed = true;
                    }
                    continue;
                }
                let mut bk = v;
                let mut j = n;
                while j > i {
                    let t = adj[bk as usize * sigma + (r[j - 1] ^ 1)];
                    if t == NONE {
                        break;
                    }
                    bk = find(&mut parent, t);
                    j -= 1;
                }
                if j == i {
                    if f != bk {
                        merge(&mut parent, &mut adj, f, bk);
                        changed = true;
                    }
                } else if j == i + 1 {
                    adj[f as usize * sigma + r[i]] = bk;
                    adj[bk as usize * sigma + (r[i] ^ 1)] = f;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Renumber live vertices in BFS order from the base, which also yields
    // shortlex-least geodesic words.
    let mut id = vec![NONE; size];
    let mut words = vec![Word::empty()];
    let mut depth = vec![0usize];
    let mut old = vec![find(&mut parent, 0)];
    id[old[0] as usize] = 0;
    let mut head = 0;
    while head < old.len() {
        let v = old[head];
        for c in 0..sigma {
            let t = adj[v as usize * sigma + c];
            if t == NONE {
                continue;
            }
            let t = find(&mut parent, t);
            if id[t as usize] == NONE {
                id[t as usize] = old.len() as u32;
                old.push(t);
                words.push(Word::from_letters_unchecked(
                    words[head].letters().iter().copied().chain([Letter::from_code(c as u16)]).collect(),
                ));
                depth.push(depth[head] + 1);
            }
        }
        head += 1;
    }
    let live = old.len();
    let mut new_adj = vec![NONE; live * sigma.max(1)];
    for (i, &v) in old.iter().enumerate() {
        for c in 0..sigma {
            let t = adj[v as usize * sigma + c];
            if t != NONE {
                new_adj[i * sigma + c] = id[find(&mut parent, t) as usize];
            }
        }
    }
    let lookup = words.iter().cloned().enumerate().map(|(i, w)| (w, i as u32)).collect();
    Ok(Ball { radius, sigma, adj: new_adj, words, depth, lookup, tree_size: size, completed_edges: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{generate_family, parse_presentation};

    fn pres(t: &str) -> Presentation {
        parse_presentation(t).unwrap()
    }

    #[test]
    fn free_ball_counts() {
        let p = pres("gens: a b\n");
        let r = Region::ball(&p, 2, 1000).unwrap();
        assert_eq!(r.ball_stats().unwrap().vertices, 17);
        assert_eq!(r.ball_stats().unwrap().edges, 16);
        let r4 = Region::ball(&p, 4, 1000).unwrap();
        let (d, gs) = r4.geodesics(&p.word("ab").unwrap(), &p.word("Ba").unwrap()).unwrap();
        assert_eq!((d, gs.len()), (4, 1));
    }

    #[test]
    fn cyclic_group_fold() {
        let p = pres("gens: a\nlambda: 1/6\na^3\n");
        let r = Region::ball_unchecked(&p, 3, 1000).unwrap();
        assert_eq!(r.ball_stats().unwrap().vertices, 3);
    }

    #[test]
    fn family_ball_is_free_at_small_radius() {
        let p8 = generate_family(7, q(1, 6));
        let r = Region::ball_unchecked(&p8, 2, 1000).unwrap();
        assert_eq!(r.ball_stats().unwrap().vertices, 17);
    }

    #[test]
    fn piece_free_geodesics_on_cycle() {
        let p = pres("gens: a\nlambda: 1/33\na^34\n");
        let r = Region::piece_free(&p).unwrap();
        let one = Word::empty();
        let (d, gs) = r.geodesics(&one, &p.word("a^17").unwrap()).unwrap();
        assert_eq!((d, gs.len()), (17, 2));
        let (d, gs) = r.geodesics(&one, &p.word("a^20").unwrap()).unwrap();
        assert_eq!((d, gs.len()), (14, 1));
        assert_eq!(gs[0].label(), p.word("A^14").unwrap());
        let c = r.trace(&one, &p.word("a^34").unwrap()).unwrap();
        assert_eq!(c.len(), 34);
        let c2 = r.trace(&p.word("a^5").unwrap(), &p.word("A^34").unwrap()).unwrap();
        assert_eq!(c, c2);
        assert_eq!(r.contours_at(&one, usize::MAX).unwrap().len(), 1);
    }

    #[test]
    fn ball_and_piece_free_agree() {
        let p = pres("gens: a b\nlambda: 1/33\n(ab)^5\n");
        let ball = Region::ball(&p, 6, 100_000).unwrap();
        let pf = Region::piece_free(&p).unwrap();
        let mut a = ball.elements_within(6).unwrap();
        let mut b = pf.elements_within(6).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for w in &a {
            assert_eq!(ball.norm(w).unwrap(), pf.norm(w).unwrap());
        }
    }

    #[test]
    fn contour_keys_are_rotation_invariant() {
        let p = pres("gens: a b c\nlambda: 1/8\ncABBcbcBaa\n");
        let r = Region::ball(&p, 3, 100_000).unwrap();
        let one = Word::empty();
        let w = p.relators()[0].clone();
        let c = r.trace(&one, &w).unwrap();
        for k in 0..w.len() {
            let v = c.vertices()[k].clone();
            let again = r.trace(&v, &w.rotate(k)).unwrap();
            assert_eq!(again, c);
            assert_eq!(r.trace(&v, &w.rotate(k).inverse()).unwrap(), c);
        }
        let arc = c.arc(0, 4, true);
        let i = intersect(&c, &arc).unwrap().unwrap();
        assert_eq!(i.len(), 4);
    }
}
