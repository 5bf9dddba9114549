//! k-subset enumeration in lexicographic order, with ranking/unranking so
//! exhaustive passes can be split into contiguous rank ranges for parallel
//! workers while keeping a deterministic merge order.

/// Binomial coefficient as u64; panics on overflow (sizes in scope stay far below).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// Iterator over k-subsets of {0..n} as sorted index vectors, lex order.
pub struct Combinations {
    n: usize,
    k: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, k, cur: (0..k).collect(), started: false, done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        // advance to the next combination in lex order
        let k = self.k;
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                break;
            }
        }
        self.cur[i] += 1;
        for j in i + 1..k {
            self.cur[j] = self.cur[j - 1] + 1;
        }
        Some(self.cur.clone())
    }
}

/// The subset of lex rank `rank` among k-subsets of {0..n}.
pub fn unrank(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut lo = 0usize;
    let mut remaining = k;
    while remaining > 0 {
        // count combinations starting with each candidate first element
        let mut c = lo;
        loop {
            let block = binomial((n - c - 1) as u64, (remaining - 1) as u64);
            if rank < block {
                out.push(c);
                lo = c + 1;
                remaining -= 1;
                break;
            }
            rank -= block;
            c += 1;
        }
    }
    out
}

/// In-place advance to the lex successor; false when exhausted.
pub fn next_combination(cur: &mut [usize], n: usize) -> bool {
    let k = cur.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if cur[i] < n - k + i {
            break;
        }
    }
    cur[i] += 1;
    for j in i + 1..k {
        cur[j] = cur[j - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(12, 9), 220);
        assert_eq!(binomial(21, 8), 203_490);
        assert_eq!(binomial(180, 9), 446_098_010_817_800);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 7), 0);
    }

    #[test]
    fn lex_order_and_unrank_agree() {
        let (n, k) = (9, 4);
        let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
        assert_eq!(all.len() as u64, binomial(n as u64, k as u64));
        for (r, subset) in all.iter().enumerate() {
            assert_eq!(&unrank(n, k, r as u64), subset);
        }
        // strictly increasing lexicographically
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn next_combination_matches_iterator() {
        let (n, k) = (7, 3);
        let mut cur: Vec<usize> = (0..k).collect();
        let mut seen = vec![cur.clone()];
        while next_combination(&mut cur, n) {
            seen.push(cur.clone());
        }
        let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
        assert_eq!(seen, all);
    }
}
