//! Ranking of sorted multisets through the combinatorial number system.
//!
//! A nondecreasing tuple `e_0 <= ... <= e_{k-1}` over `0..sites` maps to the
//! strictly increasing tuple `c_i = e_i + i`, whose colex rank
//! `sum C(c_i, i + 1)` is a bijection onto `0..C(sites + k - 1, k)`.

#[derive(Debug, Clone)]
pub struct MultisetIndexer {
    sites: usize,
    k: usize,
    // binom[c][j] = C(c, j) for c < sites + k, j <= k, saturating
    binom: Vec<Vec<u64>>,
    count: u64,
}

impl MultisetIndexer {
    pub fn new(sites: usize, k: usize) -> MultisetIndexer {
        let rows = sites + k;
        let mut binom = vec![vec![0u64; k + 1]; rows + 1];
        for c in 0..=rows {
            binom[c][0] = 1;
            for j in 1..=k.min(c) {
                binom[c][j] = binom[c - 1][j - 1].saturating_add(binom[c - 1][j]);
            }
        }
        let count = if sites == 0 {
            (k == 0) as u64
        } else {
            binom[sites + k - 1][k]
        };
        MultisetIndexer {
            sites,
            k,
            binom,
            count,
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of multisets, saturating at `u64::MAX`.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Rank of a nondecreasing tuple.
    pub fn rank(&self, sorted: &[usize]) -> u64 {
        debug_assert_eq!(sorted.len(), self.k);
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        sorted
            .iter()
            .enumerate()
            .map(|(i, &e)| self.binom[e + i][i + 1])
            .sum()
    }

    /// Inverse of [`rank`](Self::rank), writing into `out`.
    pub fn unrank_into(&self, mut rank: u64, out: &mut [usize]) {
        debug_assert!(rank < self.count);
        for i in (0..self.k).rev() {
            // largest c with C(c, i+1) <= rank; c >= i
            let mut lo = i;
            let mut hi = self.sites + i - 1;
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if self.binom[mid][i + 1] <= rank {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            rank -= self.binom[lo][i + 1];
            out[i] = lo - i;
        }
    }

    pub fn unrank(&self, rank: u64) -> Vec<usize> {
        let mut out = vec![0; self.k];
        self.unrank_into(rank, &mut out);
        out
    }

    /// All multisets in rank order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.count).map(|r| self.unrank(r))
    }
}
