//! Contours along geodesics, chain weights and the arrays `xi` (on contours)
//! and `eta` (on edges).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::cayley::{intersect, ArcIntersection, Contour, ContourKey, Edge, Path, Region};
use crate::error::{Error, Result};
use crate::presentation::{Letter, Word};
use crate::rational::{q, qu, Q};
use crate::sparse::SparseVector;

/// The piecewise-affine step `psi`: 0 up to `nu0`, 1 from `nu1`, affine between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    nu0: Q,
    nu1: Q,
}

impl StepFunction {
    pub fn new(nu0: Q, nu1: Q) -> Result<StepFunction> {
        if nu0 >= nu1 {
            return Err(Error::InvalidParams(format!("need nu0 < nu1, got {nu0} >= {nu1}")));
        }
        Ok(StepFunction { nu0, nu1 })
    }

    pub fn nu0(&self) -> &Q {
        &self.nu0
    }

    pub fn nu1(&self) -> &Q {
        &self.nu1
    }

    pub fn width(&self) -> Q {
        &self.nu1 - &self.nu0
    }

    pub fn eval(&self, x: &Q) -> Q {
        if *x <= self.nu0 {
            Q::zero()
        } else if *x >= self.nu1 {
            Q::one()
        } else {
            (x - &self.nu0) / self.width()
        }
    }
}

pub fn psi_eval(f: &StepFunction, x: &Q) -> Q {
    f.eval(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayParams {
    pub lambda: Q,
    pub mu: Q,
    pub psi: StepFunction,
    /// Relaxed parameters skip the constraints above; bound checks that
    /// depend on them are informational only.
    pub relaxed: bool,
}

impl ArrayParams {
    /// Validates `mu + 2 lambda <= nu0 < nu1 <= 1/2 - 4 lambda` and
    /// `nu0 + lambda < nu1`.
    pub fn new(lambda: Q, mu: Q, nu0: Q, nu1: Q) -> Result<ArrayParams> {
        let p = ArrayParams { lambda, mu, psi: StepFunction::new(nu0, nu1)?, relaxed: false };
        if !p.satisfies_constraints() {
            return Err(Error::InvalidParams(format!(
                "(lambda, mu, nu0, nu1) = ({}, {}, {}, {}) violates mu+2λ ≤ ν0 < ν1 ≤ 1/2-4λ or ν0+λ < ν1",
                p.lambda,
                p.mu,
                p.psi.nu0,
                p.psi.nu1
            )));
        }
        Ok(p)
    }

    pub fn relaxed(lambda: Q, mu: Q, nu0: Q, nu1: Q) -> Result<ArrayParams> {
        if lambda <= Q::zero() || mu <= Q::zero() {
            return Err(Error::InvalidParams("lambda and mu must be positive".into()));
        }
        Ok(ArrayParams { lambda, mu, psi: StepFunction::new(nu0, nu1)?, relaxed: true })
    }

    /// Paper constants `lambda = 1/33`, `mu = 4/33` with the given step.
    pub fn paper(nu0: Q, nu1: Q) -> Result<ArrayParams> {
        ArrayParams::new(q(1, 33), q(4, 33), nu0, nu1)
    }

    /// `(nu_{1,0}, nu_{1,1}) = (6/33, 7.1/33)`.
    pub fn paper_first() -> ArrayParams {
        ArrayParams::paper(q(6, 33), q(71, 330)).expect("paper constants are valid")
    }

    /// `(nu_{2,0}, nu_{2,1}) = (11.1/33, 12.2/33)`.
    pub fn paper_second() -> ArrayParams {
        ArrayParams::paper(q(111, 330), q(122, 330)).expect("paper constants are valid")
    }

    pub fn satisfies_constraints(&self) -> bool {
        let two_l = &self.lambda * q(2, 1);
        let (n0, n1) = (&self.psi.nu0, &self.psi.nu1);
        &self.mu + &two_l <= *n0 && n0 < n1 && *n1 <= q(1, 2) - &self.lambda * q(4, 1) && n0 + &self.lambda < *n1
    }

    /// `K = lambda / (nu1 - nu0)`.
    pub fn k(&self) -> Q {
        &self.lambda / self.psi.width()
    }

    /// Bound on the drift of the `i`-th contour (1-based): `K^(i-1)/(nu1-nu0)`.
    pub fn contour_drift_bound(&self, i: usize) -> Q {
        let mut k = Q::one();
        for _ in 1..i {
            k *= self.k();
        }
        k / self.psi.width()
    }

    /// `1 / ((1 - K)(nu1 - nu0))`.
    pub fn xi_drift_bound(&self) -> Q {
        Q::one() / ((Q::one() - self.k()) * self.psi.width())
    }

    /// `1 + 1 / (K (1 - K)(nu1 - nu0))`.
    pub fn eta_drift_bound(&self) -> Q {
        Q::one() + Q::one() / (self.k() * (Q::one() - self.k()) * self.psi.width())
    }
}

/// A contour together with its arc on a fixed path.
#[derive(Clone, Debug)]
pub struct Placed {
    pub contour: Contour,
    pub arc: ArcIntersection,
}

impl Placed {
    /// `|r ∩ p| / |r|`.
    pub fn ratio(&self) -> Q {
        qu(self.arc.len()) / qu(self.contour.len())
    }
}

#[derive(Clone, Debug)]
pub struct ChainLink {
    pub contour: Contour,
    pub arc: ArcIntersection,
    pub alpha: Q,
    pub beta: Q,
    pub rho: Q,
    pub sigma: Q,
    pub tau: Q,
}

/// Contours `r_1 <_p ... <_p r_n` on a geodesic with their weights.
#[derive(Clone, Debug)]
pub struct ContourChain {
    pub links: Vec<ChainLink>,
}

impl ContourChain {
    /// `xi[p, psi, A]`: `psi(tau_i) |r_i|` on each `r_i`.
    pub fn xi(&self, f: &StepFunction) -> SparseVector<Contour> {
        self.links.iter().map(|l| (l.contour.clone(), f.eval(&l.tau) * qu(l.contour.len()))).collect()
    }
}

fn overlap(a: &ArcIntersection, b: &ArcIntersection) -> usize {
    a.end.min(b.end).saturating_sub(a.start.max(b.start))
}

/// Weights of a chain of placed contours sorted along the path.
pub fn chain_weights(placed: &[Placed], params: &ArrayParams) -> Result<ContourChain> {
    let f = &params.psi;
    let n = placed.len();
    for w in placed.windows(2) {
        if w[0].arc.start >= w[1].arc.start {
            return Err(Error::InvariantViolation("chain is not strictly ordered along the path".into()));
        }
    }
    let len = |i: usize| qu(placed[i].contour.len());
    let alpha: Vec<Q> =
        (0..n).map(|i| if i == 0 { Q::zero() } else { qu(overlap(&placed[i - 1].arc, &placed[i].arc)) / len(i) }).collect();
    let beta: Vec<Q> =
        (0..n).map(|i| if i + 1 == n { Q::zero() } else { qu(overlap(&placed[i].arc, &placed[i + 1].arc)) / len(i) }).collect();
    let ratio: Vec<Q> = placed.iter().map(|p| p.ratio()).collect();
    let mut rho: Vec<Q> = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i == 0 { Q::zero() } else { &rho[i - 1] * &alpha[i] };
        rho.push(f.eval(&(&ratio[i] - prev)));
    }
    let mut sigma = vec![Q::zero(); n];
    for i in (0..n).rev() {
        let next = if i + 1 == n { Q::zero() } else { &sigma[i + 1] * &beta[i] };
        sigma[i] = f.eval(&(&ratio[i] - next));
    }
    let mut links = Vec::with_capacity(n);
    for i in 0..n {
        let before = if i == 0 { Q::zero() } else { &rho[i - 1] * &alpha[i] };
        let after = if i + 1 == n { Q::zero() } else { &sigma[i + 1] * &beta[i] };
        let tau = &ratio[i] - before - after;
        links.push(ChainLink {
            contour: placed[i].contour.clone(),
            arc: placed[i].arc.clone(),
            alpha: alpha[i].clone(),
            beta: beta[i].clone(),
            rho: rho[i].clone(),
            sigma: sigma[i].clone(),
            tau,
        });
    }
    let chain = ContourChain { links };
    check_chain(&chain, params)?;
    Ok(chain)
}

fn check_chain(c: &ContourChain, params: &ArrayParams) -> Result<()> {
    let n = c.links.len();
    for i in 0..n {
        let l = &c.links[i];
        if i + 1 < n && &l.beta * qu(l.contour.len()) != &c.links[i + 1].alpha * qu(c.links[i + 1].contour.len()) {
            return Err(Error::InvariantViolation("beta_i |r_i| != alpha_(i+1) |r_(i+1)|".into()));
        }
        if params.relaxed {
            continue;
        }
        if l.alpha >= params.lambda || l.beta >= params.lambda {
            return Err(Error::InvariantViolation(format!("overlap weight not below lambda on {:?}", l.contour.reading())));
        }
        let ratio = qu(l.arc.len()) / qu(l.contour.len());
        if !(&ratio - &params.lambda * q(2, 1) < l.tau && l.tau <= ratio) {
            return Err(Error::InvariantViolation(format!("tau = {} out of range for ratio {ratio}", l.tau)));
        }
    }
    Ok(())
}

/// Pair-level computations over a region with caches for geodesics and
/// contour traces.
pub struct Arrays<'a> {
    region: &'a Region,
    params: ArrayParams,
    geodesics: RefCell<HashMap<(Word, Word), Rc<(usize, Vec<Path>)>>>,
    through_edge: RefCell<HashMap<(Edge, usize), Rc<Vec<Contour>>>>,
}

impl<'a> Arrays<'a> {
    pub fn new(region: &'a Region, params: ArrayParams) -> Arrays<'a> {
        Arrays { region, params, geodesics: RefCell::new(HashMap::new()), through_edge: RefCell::new(HashMap::new()) }
    }

    pub fn region(&self) -> &Region {
        self.region
    }

    pub fn params(&self) -> &ArrayParams {
        &self.params
    }

    /// Same region and caches, different step function.
    pub fn with_params(&self, params: ArrayParams) -> Arrays<'a> {
        Arrays {
            region: self.region,
            params,
            geodesics: RefCell::new(self.geodesics.borrow().clone()),
            through_edge: RefCell::new(self.through_edge.borrow().clone()),
        }
    }

    pub fn geodesics(&self, g: &Word, h: &Word) -> Result<Rc<(usize, Vec<Path>)>> {
        let key = (g.clone(), h.clone());
        if let Some(v) = self.geodesics.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.region.geodesics(g, h)?);
        self.geodesics.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// Contours with at most `max_len` edges that contain `e`.
    pub fn contours_through(&self, e: &Edge, max_len: usize) -> Result<Rc<Vec<Contour>>> {
        let key = (e.clone(), max_len);
        if let Some(v) = self.through_edge.borrow().get(&key) {
            return Ok(v.clone());
        }
        let p = self.region.presentation();
        let first = Letter::pos(e.generator);
        let mut found = BTreeSet::new();
        for s in p.sym_refs() {
            if p.classes()[s.class].len() > max_len {
                continue;
            }
            let w = p.sym_word(&s);
            if w.letters()[0] == first {
                found.insert(self.region.trace(&e.tail, &w)?);
            }
        }
        let v = Rc::new(found.into_iter().collect::<Vec<_>>());
        self.through_edge.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// Every contour sharing an edge with `p` that could reach `mu'`, with
    /// its arc, sorted along `p`.
    fn candidates(&self, p: &Path, mu_prime: &Q) -> Result<Vec<Placed>> {
        if *mu_prime <= Q::zero() {
            return Err(Error::InvalidParams("mu' must be positive".into()));
        }
        let max_len = (qu(p.len()) / mu_prime).floor().to_integer();
        let max_len: usize = max_len.try_into().unwrap_or(usize::MAX);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in p.edges() {
            for c in self.contours_through(&e, max_len)?.iter() {
                if seen.insert(c.key()) {
                    let arc = intersect(c, p)?.expect("contour contains an edge of the path");
                    out.push(Placed { contour: c.clone(), arc });
                }
            }
        }
        out.sort_by_key(|a| (a.arc.start, a.arc.end));
        Ok(out)
    }

    /// `C_{p,mu'}` sorted by `<=_p`. Distinct start points are guaranteed
    /// only for `mu' > lambda`; below that, ties keep discovery order.
    pub fn contours_on_geodesic(&self, p: &Path, mu_prime: &Q) -> Result<Vec<Placed>> {
        let out: Vec<Placed> =
            self.candidates(p, mu_prime)?.into_iter().filter(|c| qu(c.arc.len()) >= mu_prime * qu(c.contour.len())).collect();
        if *mu_prime <= self.params.lambda {
            return Ok(out);
        }
        for w in out.windows(2) {
            if w[0].arc.start == w[1].arc.start {
                return Err(Error::InvariantViolation(format!(
                    "contours {:?} and {:?} start together on a geodesic",
                    w[0].contour.reading(),
                    w[1].contour.reading()
                )));
            }
        }
        Ok(out)
    }

    /// `C_{g,h,mu'}`: contours in `C_{p,mu'}` for every geodesic `p`, in the
    /// common order.
    pub fn contours_common(&self, g: &Word, h: &Word, mu_prime: &Q) -> Result<Vec<Contour>> {
        let geo = self.geodesics(g, h)?;
        let mut per_path = Vec::new();
        for p in &geo.1 {
            per_path.push(self.contours_on_geodesic(p, mu_prime)?);
        }
        let Some(first) = per_path.first() else { return Ok(Vec::new()) };
        let mut common: BTreeSet<ContourKey> = first.iter().map(|c| c.contour.key()).collect();
        for pl in &per_path[1..] {
            let keys: BTreeSet<ContourKey> = pl.iter().map(|c| c.contour.key()).collect();
            common = common.intersection(&keys).cloned().collect();
        }
        let order = |pl: &Vec<Placed>| -> Vec<ContourKey> {
            pl.iter().map(|c| c.contour.key()).filter(|k| common.contains(k)).collect()
        };
        let reference = order(first);
        for pl in &per_path[1..] {
            if order(pl) != reference {
                return Err(Error::InvariantViolation(format!("geodesics from {g:?} to {h:?} order common contours differently")));
            }
        }
        Ok(first.iter().filter(|c| common.contains(&c.contour.key())).map(|c| c.contour.clone()).collect())
    }

    /// Places the contours of `a` on `p` (each must share an edge with it)
    /// and sorts them along `p`.
    pub fn place(&self, p: &Path, a: &[Contour]) -> Result<Vec<Placed>> {
        let mut out = Vec::with_capacity(a.len());
        for c in a {
            match intersect(c, p)? {
                Some(arc) => out.push(Placed { contour: c.clone(), arc }),
                None => {
                    return Err(Error::InvariantViolation(format!("contour {:?} misses the geodesic", c.reading())));
                }
            }
        }
        out.sort_by_key(|c| c.arc.start);
        Ok(out)
    }

    pub fn chain(&self, p: &Path, a: &[Contour]) -> Result<ContourChain> {
        chain_weights(&self.place(p, a)?, &self.params)
    }

    /// `xi[p, psi, A]`.
    pub fn xi_along(&self, p: &Path, a: &[Contour]) -> Result<SparseVector<Contour>> {
        Ok(self.chain(p, a)?.xi(&self.params.psi))
    }

    /// `xi[g,h,psi]`: the pointwise maximum over all geodesics of
    /// `xi[p, psi, C_{g,h,mu}]`.
    pub fn xi(&self, g: &Word, h: &Word) -> Result<SparseVector<Contour>> {
        let a = self.contours_common(g, h, &self.params.mu)?;
        self.xi_with(g, h, &a)
    }

    fn xi_with(&self, g: &Word, h: &Word, a: &[Contour]) -> Result<SparseVector<Contour>> {
        let mut best: BTreeMap<Contour, Q> = a.iter().map(|c| (c.clone(), Q::zero())).collect();
        if a.is_empty() {
            return Ok(SparseVector::new());
        }
        for p in &self.geodesics(g, h)?.1 {
            let v = self.xi_along(p, a)?;
            for (c, x) in v.iter() {
                let e = best.get_mut(c).expect("chain contours come from A");
                if x > e {
                    *e = x.clone();
                }
            }
        }
        Ok(best.into_iter().collect())
    }

    /// `E_{g,h}`: edges of all geodesics.
    pub fn geodesic_edges(&self, g: &Word, h: &Word) -> Result<BTreeSet<Edge>> {
        Ok(self.geodesics(g, h)?.1.iter().flat_map(|p| p.edges()).collect())
    }

    /// `eta[g,h,psi,A]`; `A = C_{g,h,mu}` when `a` is `None`.
    pub fn eta(&self, g: &Word, h: &Word, a: Option<&[Contour]>) -> Result<SparseVector<Edge>> {
        let own;
        let a = match a {
            Some(a) => a,
            None => {
                own = self.contours_common(g, h, &self.params.mu)?;
                &own
            }
        };
        let xi = self.xi(g, h)?;
        let mut out = SparseVector::new();
        for e in self.geodesic_edges(g, h)? {
            let m = a
                .iter()
                .filter(|r| r.contains_edge(&e))
                .map(|r| xi.get(r) / qu(r.len()))
                .max()
                .unwrap_or_else(Q::zero);
            out.set(e, Q::one() - m);
        }
        Ok(out)
    }

    /// Drift data for the adjacent pair `(g, h)`, `(gx, h)`.
    pub fn xi_drift(&self, g: &Word, x: Letter, h: &Word) -> Result<XiDrift> {
        let gx = self.region.neighbor(g, x)?;
        let xi1 = self.xi(g, h)?;
        let xi2 = self.xi(&gx, h)?;
        let union = self.union_order(g, &gx, h)?;
        let mut per_contour = Vec::with_capacity(union.len());
        for (i, r) in union.iter().enumerate() {
            per_contour.push(ContourDrift {
                contour: r.clone(),
                diff: (xi1.get(r) - xi2.get(r)).abs(),
                bound: self.params.contour_drift_bound(i + 1),
            });
        }
        let diff = xi1.sub(&xi2);
        if diff.keys().any(|c| !union.contains(c)) {
            return Err(Error::InvariantViolation("xi differs off C_{g,h,mu} ∪ C_{gx,h,mu}".into()));
        }
        Ok(XiDrift { l1: diff.l1(), per_contour })
    }

    /// `C_{g,h,mu} ∪ C_{gx,h,mu}` ordered along a geodesic from `g` to `h`.
    pub fn union_order(&self, g: &Word, gx: &Word, h: &Word) -> Result<Vec<Contour>> {
        let mu = &self.params.mu;
        let mut all: BTreeSet<Contour> = self.contours_common(g, h, mu)?.into_iter().collect();
        all.extend(self.contours_common(gx, h, mu)?);
        let all: Vec<Contour> = all.into_iter().collect();
        let geo = self.geodesics(g, h)?;
        let Some(p) = geo.1.first() else {
            return Ok(all);
        };
        match self.place(p, &all) {
            Ok(placed) => Ok(placed.into_iter().map(|c| c.contour).collect()),
            Err(e) if !self.params.relaxed => Err(e),
            Err(_) => {
                let q = &self.geodesics(gx, h)?.1[0];
                Ok(self.place(q, &all)?.into_iter().map(|c| c.contour).collect())
            }
        }
    }

    /// `||eta[g,h] - eta[gx,h]||_1`.
    pub fn eta_drift(&self, g: &Word, x: Letter, h: &Word) -> Result<Q> {
        let gx = self.region.neighbor(g, x)?;
        Ok(self.eta(g, h, None)?.sub(&self.eta(&gx, h, None)?).l1())
    }

    /// `xi[p, psi, C_{g,h,mu}] == xi[p, psi, C_{g,h,mu} ∪ C_{gx,h,mu}]` for
    /// every geodesic `p` from `g` to `h`.
    pub fn xi_stable(&self, g: &Word, x: Letter, h: &Word) -> Result<bool> {
        let gx = self.region.neighbor(g, x)?;
        let a = self.contours_common(g, h, &self.params.mu)?;
        let u = self.union_order(g, &gx, h)?;
        for p in &self.geodesics(g, h)?.1 {
            if self.xi_along(p, &a)? != self.xi_along(p, &u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `eta[g,h,psi] == eta[g,h,psi, C_{g,h,mu} ∪ C_{gx,h,mu}]`.
    pub fn eta_stable(&self, g: &Word, x: Letter, h: &Word) -> Result<bool> {
        let gx = self.region.neighbor(g, x)?;
        let u = self.union_order(g, &gx, h)?;
        Ok(self.eta(g, h, None)? == self.eta(g, h, Some(&u))?)
    }

    /// Contours met by some geodesic in at least `(nu1 + 2 lambda)|r|` edges
    /// get `xi = |r|`.
    pub fn heavy_contours_saturate(&self, g: &Word, h: &Word) -> Result<(usize, bool)> {
        let xi = self.xi(g, h)?;
        let thr = self.params.psi.nu1() + &self.params.lambda * q(2, 1);
        let mut heavy = BTreeSet::new();
        for p in &self.geodesics(g, h)?.1 {
            for c in self.contours_on_geodesic(p, &thr)? {
                heavy.insert(c.contour);
            }
        }
        let ok = heavy.iter().all(|r| xi.get(r) == qu(r.len()));
        Ok((heavy.len(), ok))
    }

    /// Edges of a geodesic lying on no contour of `C_{p, nu0 - 2 lambda}`
    /// have `eta = 1`.
    pub fn light_edges_are_one(&self, g: &Word, h: &Word) -> Result<(usize, bool)> {
        let eta = self.eta(g, h, None)?;
        let thr = self.params.psi.nu0() - &self.params.lambda * q(2, 1);
        let mut count = 0;
        let mut ok = true;
        for p in &self.geodesics(g, h)?.1 {
            let near = self.contours_on_geodesic(p, &thr)?;
            for e in p.edges() {
                if near.iter().all(|c| !c.contour.contains_edge(&e)) {
                    count += 1;
                    ok &= eta.get(&e) == Q::one();
                }
            }
        }
        Ok((count, ok))
    }

    /// For distinct `r, s` in `C_{p,lambda}` neither arc contains the other;
    /// for `p, q` in `G_{g,h}`, `C_{p,mu'}` lies in `C_{q,mu'-2 lambda}`.
    pub fn check_geodesic_arcs(&self, g: &Word, h: &Word, mu_prime: &Q) -> Result<()> {
        let lam = &self.params.lambda;
        let geo = self.geodesics(g, h)?;
        for p in &geo.1 {
            let cs = self.contours_on_geodesic(p, lam)?;
            for i in 0..cs.len() {
                for j in 0..cs.len() {
                    let (a, b) = (&cs[i].arc, &cs[j].arc);
                    if i != j && b.start <= a.start && a.end <= b.end {
                        return Err(Error::InvariantViolation("an arc on a geodesic contains another".into()));
                    }
                }
            }
        }
        let lower = mu_prime - lam * q(2, 1);
        if lower > Q::zero() {
            for p in &geo.1 {
                let heavy: Vec<Placed> = self.contours_on_geodesic(p, mu_prime)?;
                for q_ in &geo.1 {
                    let light: BTreeSet<ContourKey> =
                        self.contours_on_geodesic(q_, &lower)?.iter().map(|c| c.contour.key()).collect();
                    if heavy.iter().any(|c| !light.contains(&c.contour.key())) {
                        return Err(Error::InvariantViolation("C_{p,mu'} is not inside C_{q,mu'-2λ}".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ContourDrift {
    pub contour: Contour,
    pub diff: Q,
    pub bound: Q,
}

#[derive(Clone, Debug)]
pub struct XiDrift {
    pub l1: Q,
    /// In the order of `C_{g,h,mu} ∪ C_{gx,h,mu}`.
    pub per_contour: Vec<ContourDrift>,
}

impl XiDrift {
    pub fn per_contour_strict(&self) -> bool {
        self.per_contour.iter().all(|c| c.diff < c.bound)
    }

    pub fn per_contour_weak(&self) -> bool {
        self.per_contour.iter().all(|c| c.diff <= c.bound)
    }

    /// Largest `diff / bound` over the contours.
    pub fn worst_ratio(&self) -> Q {
        self.per_contour.iter().map(|c| &c.diff / &c.bound).max().unwrap_or_else(Q::zero)
    }
}

pub fn is_nonnegative_within(v: &SparseVector<Contour>) -> bool {
    v.iter().all(|(r, x)| !x.is_negative() && *x <= qu(r.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn psi_values() {
        let f = StepFunction::new(q(6, 33), q(71, 330)).unwrap();
        assert_eq!(f.eval(&q(6, 33)), Q::zero());
        assert_eq!(f.eval(&q(71, 330)), Q::one());
        assert_eq!(f.eval(&q(655, 3300)), q(1, 2));
        assert_eq!(f.eval(&q(-1, 1)), Q::zero());
    }

    #[test]
    fn paper_bounds() {
        let a = ArrayParams::paper_first();
        assert_eq!(a.k(), q(10, 11));
        assert_eq!(a.xi_drift_bound(), q(330, 1));
        assert_eq!(a.contour_drift_bound(1), q(30, 1));
        assert_eq!(a.contour_drift_bound(2), q(300, 11));
        let b = ArrayParams::paper_second();
        assert_eq!(b.eta_drift_bound(), q(364, 1));
        assert!(ArrayParams::paper(q(5, 33), q(7, 33)).is_err());
    }

    fn two_contour_chain() -> ContourChain {
        let one = Word::empty();
        // Synthetic arcs: two 35-edge contours overlapping in one edge.
        let q35 = parse_presentation("gens: a b c\nlambda: 1/6\na^35\n").unwrap();
        let r = Region::piece_free(&q35).unwrap();
        let ca = r.trace(&one, &q35.word("a^35").unwrap()).unwrap();
        let cb = r.trace(&q35.word("b").unwrap(), &q35.word("a^35").unwrap()).unwrap();
        let placed = vec![
            Placed { contour: ca, arc: ArcIntersection { start: 0, end: 18 } },
            Placed { contour: cb, arc: ArcIntersection { start: 17, end: 35 } },
        ];
        let params = ArrayParams::relaxed(q(1, 6), q(4, 33), q(12, 35), q(16, 35)).unwrap();
        chain_weights(&placed, &params).unwrap()
    }

    #[test]
    fn hand_computed_chain() {
        let c = two_contour_chain();
        let (a, b) = (&c.links[0], &c.links[1]);
        assert_eq!((a.alpha.clone(), a.beta.clone()), (Q::zero(), q(1, 35)));
        assert_eq!((b.alpha.clone(), b.beta.clone()), (q(1, 35), Q::zero()));
        assert_eq!((a.rho.clone(), b.rho.clone()), (Q::one(), Q::one()));
        assert_eq!((a.sigma.clone(), b.sigma.clone()), (Q::one(), Q::one()));
        assert_eq!((a.tau.clone(), b.tau.clone()), (q(17, 35), q(17, 35)));
        let f = StepFunction::new(q(12, 35), q(16, 35)).unwrap();
        let xi = c.xi(&f);
        assert!(xi.iter().all(|(_, v)| *v == q(35, 1)));
    }
}
