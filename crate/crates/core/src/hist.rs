//! Histograms of residue values (dense over Z_n) and of residue k-tuples
//! (sparse), shared by the dot-product and distance counting modules.

use std::collections::BTreeMap;

use crate::ring::Modulus;

/// Dense histogram over Z_n. Memory is O(n), so this is only materialized
/// for desk-scale moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl ValueHistogram {
    pub fn new(modulus: &Modulus) -> Self {
        Self {
            counts: vec![0; modulus.n() as usize],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    #[inline]
    pub fn increment(&mut self, t: u64) {
        self.counts[t as usize] += 1;
        self.total += 1;
    }

    /// Adds another histogram over the same modulus (parallel merge).
    pub fn merge(&mut self, other: &ValueHistogram) {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn count(&self, t: u64) -> u64 {
        self.counts[t as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Residues with nonzero count, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, _)| t as u64)
    }

    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Sparse histogram of k-tuples of residues, keyed by the tuple. Produced
/// by one pass over a point set against `k` fixed base points, so the
/// total always equals the set size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarHistogram {
    k: usize,
    bases: Vec<Vec<u64>>,
    counts: BTreeMap<Vec<u64>, u64>,
}

impl StarHistogram {
    pub fn new(bases: Vec<Vec<u64>>) -> Self {
        Self {
            k: bases.len(),
            bases,
            counts: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bases(&self) -> &[Vec<u64>] {
        &self.bases
    }

    #[inline]
    pub fn increment(&mut self, tuple: Vec<u64>) {
        debug_assert_eq!(tuple.len(), self.k);
        *self.counts.entry(tuple).or_insert(0) += 1;
    }

    pub fn count(&self, tuple: &[u64]) -> u64 {
        self.counts.get(tuple).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Tuples with nonzero count, in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.counts.keys().map(|k| k.as_slice())
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u64], u64)> + '_ {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }
}
