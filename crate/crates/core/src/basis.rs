//! Fock basis of a fixed (N↑, N↓) sector over 2N spin-orbitals.
//!
//! Spin-orbital ordering is spin-blocked: orbital i (0 ≤ i < N) is site i
//! with spin ↑, orbital N + i is site i with spin ↓. An occupation word sets
//! bit j when orbital j is occupied. Basis states are the canonically
//! ordered fermionic products a†_{j1} a†_{j2} ... |0⟩ with j1 < j2 < ..., and
//! the word list is strictly sorted by word value.

use crate::error::CoreError;
use crate::model::ModelSpec;
use std::sync::Arc;

#[derive(Debug)]
pub struct FockBasis {
    n_sites: usize,
    n_up: usize,
    n_down: usize,
    up_masks: Vec<u64>,
    down_masks: Vec<u64>,
    words: Vec<u64>,
}

impl FockBasis {
    /// Enumerate every occupation word of the sector in canonical
    /// (ascending word value) order.
    pub fn enumerate(spec: &ModelSpec) -> Result<Arc<Self>, CoreError> {
        spec.validate()?;
        let n = spec.n_sites;
        let dim = binomial(n as u64, spec.n_up as u64) as u128
            * binomial(n as u64, spec.n_down as u64) as u128;
        if dim > (u32::MAX as u128) {
            return Err(CoreError::CapacityExceeded(dim));
        }
        let up_masks = bit_combinations(n, spec.n_up);
        let down_masks = bit_combinations(n, spec.n_down);
        // Down orbitals occupy the high bits, so ascending (down, up)
        // enumeration is already sorted by word value.
        let mut words = Vec::with_capacity(dim as usize);
        for &dn in &down_masks {
            let high = dn << n;
            for &up in &up_masks {
                words.push(high | up);
            }
        }
        Ok(Arc::new(Self {
            n_sites: n,
            n_up: spec.n_up,
            n_down: spec.n_down,
            up_masks,
            down_masks,
            words,
        }))
    }

    pub fn dimension(&self) -> usize {
        self.words.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn n_orbitals(&self) -> usize {
        2 * self.n_sites
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn word(&self, index: usize) -> u64 {
        self.words[index]
    }

    /// Position of a word in the canonical order, if it belongs to the sector.
    pub fn index_of(&self, word: u64) -> Option<usize> {
        let up = word & self.site_mask();
        let dn = (word >> self.n_sites) & self.site_mask();
        let iu = self.up_masks.binary_search(&up).ok()?;
        let id = self.down_masks.binary_search(&dn).ok()?;
        Some(id * self.up_masks.len() + iu)
    }

    /// Same sector in the same orbital layout.
    pub fn same_sector(&self, other: &Self) -> bool {
        self.n_sites == other.n_sites && self.n_up == other.n_up && self.n_down == other.n_down
    }

    fn site_mask(&self) -> u64 {
        (1u64 << self.n_sites) - 1
    }

    /// Split a word into (up bits, down bits), both over the low N positions.
    pub fn split_word(&self, word: u64) -> (u64, u64) {
        (word & self.site_mask(), (word >> self.n_sites) & self.site_mask())
    }
}

/// Number of doubly occupied sites of an occupation word.
pub fn double_occupancy(word: u64, n_sites: usize) -> u32 {
    let mask = (1u64 << n_sites) - 1;
    let up = word & mask;
    let dn = (word >> n_sites) & mask;
    (up & dn).count_ones()
}

/// All n-bit masks with exactly k bits set, ascending (Gosper's hack).
pub(crate) fn bit_combinations(n: usize, k: usize) -> Vec<u64> {
    assert!(k <= n && n < 64);
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit = 1u64 << n;
    let mut v = (1u64 << k) - 1;
    while v < limit {
        out.push(v);
        let t = v | (v - 1);
        v = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
