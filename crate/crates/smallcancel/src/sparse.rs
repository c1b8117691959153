//! Finitely supported rational functions on contours, edges or vertices.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::rational::{qu, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector<K: Ord> {
    entries: BTreeMap<K, Q>,
}

impl<K: Ord> Default for SparseVector<K> {
    fn default() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, k: &K) -> Q {
        self.entries.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, k: K, v: Q) {
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    pub fn add_at(&mut self, k: K, v: &Q) {
        let cur = self.get(&k);
        self.set(k, cur + v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1(&self) -> Q {
        self.entries.values().fold(Q::zero(), |a, v| a + v.abs())
    }

    pub fn l2_squared(&self) -> Q {
        self.entries.values().fold(Q::zero(), |a, v| a + v * v)
    }

    pub fn sum(&self) -> Q {
        self.entries.values().fold(Q::zero(), |a, v| a + v)
    }

    pub fn max_abs(&self) -> Q {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_at(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_at(k.clone(), &-v);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.entries {
            out.set(k.clone(), v * c);
        }
        out
    }

    /// Pushes the vector forward along a key map (e.g. a group translation);
    /// colliding keys are summed.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Result<J>) -> Result<SparseVector<J>> {
        let mut out = SparseVector::new();
        for (k, v) in &self.entries {
            out.add_at(f(k)?, v);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for SparseVector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        let mut out = SparseVector::new();
        for (k, v) in iter {
            out.add_at(k, &v);
        }
        out
    }
}

/// Spreads each entry evenly over a finite vertex set: `v(k) / |S(k)|` on
/// every element of `S(k)`. Both projections of the array construction have
/// this shape.
pub fn spread<K: Ord + Clone, V: Ord + Clone>(
    v: &SparseVector<K>,
    mut support: impl FnMut(&K) -> Result<Vec<V>>,
) -> Result<SparseVector<V>> {
    let mut out = SparseVector::new();
    for (k, x) in v.iter() {
        let s = support(k)?;
        let share = x / qu(s.len());
        for u in s {
            out.add_at(u, &share);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn zeros_are_not_stored() {
        let mut v: SparseVector<u32> = SparseVector::new();
        v.set(1, q(1, 2));
        v.add_at(1, &q(-1, 2));
        assert!(v.is_empty());
        v.set(2, qi(-3));
        v.set(5, qi(4));
        assert_eq!(v.l1(), qi(7));
        assert_eq!(v.l2_squared(), qi(25));
        assert!(!v.is_nonnegative());
    }

    #[test]
    fn spread_preserves_mass_for_nonnegative() {
        let v: SparseVector<u32> = [(0, qi(3)), (1, qi(2))].into_iter().collect();
        let p = spread(&v, |&k| Ok(vec![k, k + 1, k + 2])).unwrap();
        assert_eq!(p.l1(), v.l1());
        let w: SparseVector<u32> = [(0, qi(1)), (1, qi(-1))].into_iter().collect();
        let p = spread(&w, |&k| Ok(vec![k, k + 1])).unwrap();
        assert!(p.l1() < w.l1());
    }
}
