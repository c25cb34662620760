//! Minimal fixed-size bitset keyed by element index.
//!
//! Closure scans over rings of order up to 2^16 live or die by membership
//! tests; a flat bit vector keeps them O(1) without hashing.

#[derive(Clone)]
pub struct BitSet {
    blocks: Vec<u64>,
    len: usize,
    count: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { blocks: vec![0; len.div_ceil(64)], len, count: 0 }
    }

    /// Insert; returns true when the element was not yet present.
    pub fn insert(&mut self, i: u64) -> bool {
        let i = i as usize;
        debug_assert!(i < self.len);
        let (b, m) = (i / 64, 1u64 << (i % 64));
        if self.blocks[b] & m == 0 {
            self.blocks[b] |= m;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, i: u64) -> bool {
        let i = i as usize;
        debug_assert!(i < self.len);
        self.blocks[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Ascending member indices.
    pub fn to_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.count);
        for (b, &blk) in self.blocks.iter().enumerate() {
            let mut blk = blk;
            while blk != 0 {
                let bit = blk.trailing_zeros() as usize;
                out.push((b * 64 + bit) as u64);
                blk &= blk - 1;
            }
        }
        out
    }
}

impl FromIterator<u64> for BitSet {
    /// Collect into a set sized by the maximum element; mostly for tests.
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let items: Vec<u64> = iter.into_iter().collect();
        let len = items.iter().max().map_or(0, |&m| m as usize + 1);
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn insert_and_list() {
        let mut s = BitSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(s.insert(64));
        assert!(!s.insert(64));
        assert_eq!(s.count(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.contains(129) && !s.contains(1));
    }
}
