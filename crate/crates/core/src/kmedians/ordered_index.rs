//! Order-statistics multiset of `(coordinate, center)` pairs.
//!
//! Entries are kept in one array sorted by coordinate and then by center
//! index, so every pair is unique and has a fixed position. A Fenwick tree
//! over the positions counts the entries still present. Removal by position
//! and rank queries are `O(log n)`; min and max are `O(1)` amortized.
//! Entries are added in bulk when the index is built.

use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub center: usize,
}

impl Entry {
    #[inline]
    fn cmp(&self, other: &Entry) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.center.cmp(&other.center))
    }
}

#[derive(Debug, Clone, Default)]
pub struct OrderedCoordinateIndex {
    entries: Vec<Entry>,
    present: Vec<bool>,
    /// 1-based Fenwick tree of `present`.
    fenwick: Vec<u32>,
    len: usize,
    /// First present position, or `entries.len()` when empty.
    lo: usize,
    /// One past the last present position, or 0 when empty.
    hi: usize,
}

impl OrderedCoordinateIndex {
    /// Builds from entries sorted strictly by `(value, center)` in `O(n)`.
    pub fn from_sorted(entries: impl IntoIterator<Item = Entry>) -> Self {
        let entries: Vec<Entry> = entries.into_iter().collect();
        assert!(
            entries
                .windows(2)
                .all(|w| w[0].cmp(&w[1]) == Ordering::Less),
            "entries must be strictly sorted"
        );
        let n = entries.len();
        let mut fenwick = vec![0u32; n + 1];
        for j in 1..=n {
            fenwick[j] += 1;
            let parent = j + (j & j.wrapping_neg());
            if parent <= n {
                fenwick[parent] += fenwick[j];
            }
        }
        Self {
            present: vec![true; n],
            fenwick,
            len: n,
            lo: 0,
            hi: n,
            entries,
        }
    }

    /// Sorts `entries` and builds the index.
    pub fn from_unsorted(mut entries: Vec<Entry>) -> Self {
        entries.sort_unstable_by(Entry::cmp);
        Self::from_sorted(entries)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Positions are fixed at construction; `entry_at(position(e)) == e`.
    pub fn entry_at(&self, position: usize) -> Entry {
        self.entries[position]
    }

    /// Position of the pair, present or removed.
    pub fn position(&self, value: f64, center: usize) -> Option<usize> {
        let key = Entry { value, center };
        self.entries.binary_search_by(|e| e.cmp(&key)).ok()
    }

    /// Removes the entry at `position`; returns false if it was already gone.
    pub fn remove_at(&mut self, position: usize) -> bool {
        if !std::mem::replace(&mut self.present[position], false) {
            return false;
        }
        self.len -= 1;
        let n = self.entries.len();
        let mut j = position + 1;
        while j <= n {
            self.fenwick[j] -= 1;
            j += j & j.wrapping_neg();
        }
        while self.lo < n && !self.present[self.lo] {
            self.lo += 1;
        }
        while self.hi > self.lo && !self.present[self.hi - 1] {
            self.hi -= 1;
        }
        if self.len == 0 {
            self.lo = n;
            self.hi = 0;
        }
        true
    }

    /// Removes the pair; returns false if it was absent.
    pub fn remove(&mut self, value: f64, center: usize) -> bool {
        match self.position(value, center) {
            Some(p) => self.remove_at(p),
            None => false,
        }
    }

    /// Present entries among the first `end` positions.
    fn present_before(&self, end: usize) -> usize {
        let mut count = 0;
        let mut j = end;
        while j > 0 {
            count += self.fenwick[j] as usize;
            j &= j - 1;
        }
        count
    }

    /// Number of entries with `value < z`.
    pub fn count_below(&self, z: f64) -> usize {
        self.present_before(self.entries.partition_point(|e| e.value < z))
    }

    /// Number of entries with `value <= z`.
    pub fn count_at_most(&self, z: f64) -> usize {
        self.present_before(self.entries.partition_point(|e| e.value <= z))
    }

    pub fn min(&self) -> Option<Entry> {
        (self.len > 0).then(|| self.entries[self.lo])
    }

    pub fn max(&self) -> Option<Entry> {
        (self.len > 0).then(|| self.entries[self.hi - 1])
    }

    /// Entry of the given zero-based rank, by descending the Fenwick tree.
    pub fn select(&self, rank: usize) -> Option<Entry> {
        if rank >= self.len {
            return None;
        }
        let n = self.entries.len();
        let mut pos = 0;
        let mut remaining = rank as u32 + 1;
        let mut step = n.checked_next_power_of_two().unwrap_or(n);
        while step > 0 {
            let next = pos + step;
            if next <= n && self.fenwick[next] < remaining {
                pos = next;
                remaining -= self.fenwick[next];
            }
            step >>= 1;
        }
        Some(self.entries[pos])
    }

    /// The `m` smallest entries in order. Scans removed positions between
    /// them, so it is cheap when those entries are removed next.
    pub fn first(&self, m: usize) -> Vec<Entry> {
        self.iter().take(m).collect()
    }

    /// The `m` largest entries, largest first.
    pub fn last(&self, m: usize) -> Vec<Entry> {
        (self.lo..self.hi)
            .rev()
            .filter(|&p| self.present[p])
            .take(m)
            .map(|p| self.entries[p])
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Entry> + '_ {
        (self.lo..self.hi)
            .filter(|&p| self.present[p])
            .map(|p| self.entries[p])
    }
}
