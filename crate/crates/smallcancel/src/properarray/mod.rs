//! The vertex array `Phi = P_C xi[psi_1] + P_E eta[psi_2]`, its square-root
//! form, the free-product combiner and the embedding into a finitely
//! generated group.

pub mod embedding;
pub mod freeproduct;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::Zero;

use crate::arrays::{ArrayParams, Arrays};
use crate::cayley::{Contour, Edge, Region};
use crate::error::{Error, Result};
use crate::presentation::Word;
use crate::rational::{q, qu, to_f64, Q};
use crate::sparse::{spread, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperArrayParams {
    pub lambda: Q,
    pub mu: Q,
    pub nu10: Q,
    pub nu11: Q,
    pub nu20: Q,
    pub nu21: Q,
    pub relaxed: bool,
}

impl ProperArrayParams {
    /// Validates both step functions against the array constraints and
    /// `nu11 + 2 lambda <= nu20 - 2 lambda`.
    pub fn new(lambda: Q, mu: Q, nu10: Q, nu11: Q, nu20: Q, nu21: Q) -> Result<ProperArrayParams> {
        let p = ProperArrayParams { lambda, mu, nu10, nu11, nu20, nu21, relaxed: false };
        ArrayParams::new(p.lambda.clone(), p.mu.clone(), p.nu10.clone(), p.nu11.clone())?;
        ArrayParams::new(p.lambda.clone(), p.mu.clone(), p.nu20.clone(), p.nu21.clone())?;
        let two_l = &p.lambda * q(2, 1);
        if &p.nu11 + &two_l > &p.nu20 - &two_l {
            return Err(Error::InvalidParams(format!(
                "nu11 + 2λ = {} exceeds nu20 - 2λ = {}",
                &p.nu11 + &two_l,
                &p.nu20 - &two_l
            )));
        }
        Ok(p)
    }

    /// No constraint checks; the bounds derived from `L` are then informational.
    pub fn relaxed(lambda: Q, mu: Q, nu10: Q, nu11: Q, nu20: Q, nu21: Q) -> Result<ProperArrayParams> {
        ArrayParams::relaxed(lambda.clone(), mu.clone(), nu10.clone(), nu11.clone())?;
        ArrayParams::relaxed(lambda.clone(), mu.clone(), nu20.clone(), nu21.clone())?;
        Ok(ProperArrayParams { lambda, mu, nu10, nu11, nu20, nu21, relaxed: true })
    }

    /// `lambda = 1/33`, `mu = 4/33`, `nu = 6/33, 7.1/33, 11.1/33, 12.2/33`.
    pub fn paper() -> ProperArrayParams {
        ProperArrayParams::new(q(1, 33), q(4, 33), q(6, 33), q(71, 330), q(111, 330), q(122, 330))
            .expect("paper constants are valid")
    }

    fn array_params(&self, nu0: &Q, nu1: &Q) -> ArrayParams {
        let r = if self.relaxed {
            ArrayParams::relaxed(self.lambda.clone(), self.mu.clone(), nu0.clone(), nu1.clone())
        } else {
            ArrayParams::new(self.lambda.clone(), self.mu.clone(), nu0.clone(), nu1.clone())
        };
        r.expect("validated on construction")
    }

    pub fn first(&self) -> ArrayParams {
        self.array_params(&self.nu10, &self.nu11)
    }

    pub fn second(&self) -> ArrayParams {
        self.array_params(&self.nu20, &self.nu21)
    }

    pub fn k1(&self) -> Q {
        self.first().k()
    }

    pub fn k2(&self) -> Q {
        self.second().k()
    }

    /// `1/((1-K1)(nu11-nu10)) + 1 + 1/(K2(1-K2)(nu21-nu20))`.
    pub fn lipschitz(&self) -> Q {
        self.first().xi_drift_bound() + self.second().eta_drift_bound()
    }
}

/// `P_C v`: each contour's value spread evenly over its vertices.
pub fn project_contours(v: &SparseVector<Contour>) -> SparseVector<Word> {
    spread(v, |c| Ok(c.vertices().to_vec())).expect("infallible support")
}

/// `P_E v`: each edge's value split between its endpoints.
pub fn project_edges(v: &SparseVector<Edge>) -> SparseVector<Word> {
    spread(v, |e| Ok(vec![e.tail.clone(), e.head.clone()])).expect("infallible support")
}

/// Pointwise `sqrt` for export. Approximate.
pub fn phi_tilde_approx(phi: &SparseVector<Word>) -> Vec<(Word, f64)> {
    phi.iter().map(|(k, x)| (k.clone(), to_f64(x).sqrt())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTildeStats {
    /// `||Phi~||_2^2`, which is `||Phi||_1` computed as a sum of squares.
    pub squared_norm: Q,
    pub l1: Q,
    /// Largest `||Phi[g,h] - Phi[gx,h]||_1` over the generators `x`.
    pub drift_max: Q,
    pub drift_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCheck {
    pub distance: usize,
    pub l1: Q,
    pub support: usize,
    pub nonnegative: bool,
    pub symmetric: bool,
    pub dominates_distance: bool,
}

impl PhiCheck {
    pub fn ok(&self) -> bool {
        self.nonnegative && self.symmetric && self.dominates_distance
    }
}

pub struct ProperArray<'a> {
    params: ProperArrayParams,
    first: Arrays<'a>,
    second: Arrays<'a>,
    cache: RefCell<HashMap<(Word, Word), Rc<SparseVector<Word>>>>,
}

impl<'a> ProperArray<'a> {
    pub fn new(region: &'a Region, params: ProperArrayParams) -> ProperArray<'a> {
        let first = Arrays::new(region, params.first());
        let second = first.with_params(params.second());
        ProperArray { params, first, second, cache: RefCell::new(HashMap::new()) }
    }

    pub fn params(&self) -> &ProperArrayParams {
        &self.params
    }

    pub fn region(&self) -> &Region {
        self.first.region()
    }

    pub fn xi(&self, g: &Word, h: &Word) -> Result<SparseVector<Contour>> {
        self.first.xi(g, h)
    }

    pub fn eta(&self, g: &Word, h: &Word) -> Result<SparseVector<Edge>> {
        self.second.eta(g, h, None)
    }

    pub fn phi(&self, g: &Word, h: &Word) -> Result<Rc<SparseVector<Word>>> {
        let region = self.region();
        let key = (region.canonical(g)?, region.canonical(h)?);
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let (g, h) = &key;
        let v = Rc::new(project_contours(&self.xi(g, h)?).add(&project_edges(&self.eta(g, h)?)));
        self.cache.borrow_mut().insert(key.clone(), v.clone());
        Ok(v)
    }

    /// Properties (1), (2) and (4) for the pair.
    pub fn check_pair(&self, g: &Word, h: &Word) -> Result<PhiCheck> {
        let v = self.phi(g, h)?;
        let w = self.phi(h, g)?;
        let distance = self.region().distance(g, h)?;
        let l1 = v.l1();
        Ok(PhiCheck {
            distance,
            support: v.len(),
            nonnegative: v.is_nonnegative(),
            symmetric: v == w,
            dominates_distance: qu(distance) <= l1,
            l1,
        })
    }

    /// `Phi[kg, kh] == k . Phi[g, h]`.
    pub fn equivariant(&self, g: &Word, h: &Word, k: &Word) -> Result<bool> {
        let region = self.region();
        let v = self.phi(g, h)?;
        let moved = v.map_keys(|x| region.mul(k, x))?;
        Ok(*self.phi(&region.mul(k, g)?, &region.mul(k, h)?)? == moved)
    }

    /// `(||Phi[g,h] - Phi[gk,h]||_1, L d(1,k))`.
    pub fn drift(&self, g: &Word, k: &Word, h: &Word) -> Result<(Q, Q)> {
        let region = self.region();
        let gk = region.mul(g, k)?;
        let d = self.phi(g, h)?.sub(&*self.phi(&gk, h)?).l1();
        let bound = self.params.lipschitz() * qu(region.norm(&region.canonical(k)?)?);
        Ok((d, bound))
    }

    pub fn phi_tilde_stats(&self, g: &Word, h: &Word) -> Result<PhiTildeStats> {
        let v = self.phi(g, h)?;
        // Phi~(k)^2 = Phi(k), so the squared 2-norm is the sum of entries.
        let squared_norm = v.iter().fold(Q::zero(), |acc, (_, x)| acc + x);
        let bound = self.params.lipschitz();
        let mut drift_max = Q::zero();
        for l in self.region().presentation().letters() {
            let (d, _) = self.drift(g, &Word::letter(l), h)?;
            if d > drift_max {
                drift_max = d;
            }
        }
        Ok(PhiTildeStats { squared_norm, l1: v.l1(), drift_ok: drift_max <= bound, drift_max })
    }

    /// `c(g) = Phi~[1, g]` through its squared entries.
    pub fn c_squared(&self, g: &Word) -> Result<Rc<SparseVector<Word>>> {
        self.phi(&Word::empty(), g)
    }
}

impl Default for ProperArrayParams {
    fn default() -> Self {
        ProperArrayParams::paper()
    }
}
