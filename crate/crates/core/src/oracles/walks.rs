//! Brute-force lattice counts on ℤ²: closed walks, tailless non-backtracking
//! closed walks, and primitive cycle classes.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Unit steps `+x, +y, −x, −y`; the reverse of direction `d` is `(d + 2) % 4`.
pub const STEPS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn reverse(d: usize) -> usize {
    (d + 2) % 4
}

/// Counts of walks from the origin, indexed by lattice point in the box
/// `[−R, R]²`.
#[derive(Debug, Clone)]
pub struct WalkCounterState {
    radius: usize,
    steps_taken: usize,
    counts: Vec<BigUint>,
}

impl WalkCounterState {
    pub fn new(radius: usize) -> Self {
        let side = 2 * radius + 1;
        let mut counts = vec![BigUint::zero(); side * side];
        counts[radius * side + radius] = BigUint::one();
        WalkCounterState {
            radius,
            steps_taken: 0,
            counts,
        }
    }

    fn side(&self) -> usize {
        2 * self.radius + 1
    }

    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let r = self.radius as i64;
        if x.abs() > r || y.abs() > r {
            return None;
        }
        Some(((y + r) as usize) * self.side() + (x + r) as usize)
    }

    /// Number of walks of the current length ending at `(x, y)`.
    pub fn count_at(&self, x: i64, y: i64) -> BigUint {
        self.index(x, y)
            .map(|i| self.counts[i].clone())
            .unwrap_or_else(BigUint::zero)
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// Extends every walk by one unit step.
    pub fn step(&mut self) {
        assert!(
            self.steps_taken < self.radius,
            "walk length would exceed the box radius"
        );
        let side = self.side();
        let r = self.radius as i64;
        let mut next = vec![BigUint::zero(); side * side];
        for (i, c) in self.counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = (i % side) as i64 - r;
            let y = (i / side) as i64 - r;
            for (dx, dy) in STEPS {
                let j = self
                    .index(x + dx, y + dy)
                    .expect("box holds all reachable points");
                next[j] += c;
            }
        }
        self.counts = next;
        self.steps_taken += 1;
    }
}

/// Closed walks of length `2k` at the origin, by stepwise convolution.
pub fn closed_walk_count_dp(k: usize) -> BigUint {
    let length = 2 * k;
    let mut state = WalkCounterState::new(length.max(1));
    for _ in 0..length {
        state.step();
    }
    state.count_at(0, 0)
}

/// Closed non-backtracking walks of length `m` at the origin whose first
/// step is not the reverse of the last.
pub fn geodesic_count_dp(m: usize) -> BigUint {
    if m == 0 || m % 2 == 1 {
        return BigUint::zero();
    }
    let r = m as i64;
    let side = 2 * m + 1;
    let idx = |x: i64, y: i64, d: usize| (((y + r) as usize) * side + (x + r) as usize) * 4 + d;
    let mut total = BigUint::zero();
    for first in 0..4 {
        // counts[(position, last direction)]
        let mut counts = vec![BigUint::zero(); side * side * 4];
        let (fx, fy) = STEPS[first];
        counts[idx(fx, fy, first)] = BigUint::one();
        for _ in 1..m {
            let mut next = vec![BigUint::zero(); side * side * 4];
            for (i, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let last = i % 4;
                let cell = i / 4;
                let x = (cell % side) as i64 - r;
                let y = (cell / side) as i64 - r;
                for (d, (dx, dy)) in STEPS.iter().enumerate() {
                    if d == reverse(last) {
                        continue;
                    }
                    next[idx(x + dx, y + dy, d)] += c;
                }
            }
            counts = next;
        }
        for last in 0..4 {
            if last != reverse(first) {
                total += &counts[idx(0, 0, last)];
            }
        }
    }
    total
}

fn is_primitive(word: &[usize]) -> bool {
    let m = word.len();
    (1..m)
        .filter(|&p| m.is_multiple_of(p))
        .all(|p| (0..m).any(|i| word[i] != word[(i + p) % m]))
}

fn rotation(word: &[usize], shift: usize) -> impl Iterator<Item = usize> + '_ {
    let m = word.len();
    (0..m).map(move |i| word[(i + shift) % m])
}

fn is_least_rotation(word: &[usize], other: &[usize]) -> bool {
    (0..other.len()).all(|s| word.iter().copied().cmp(rotation(other, s)).is_le())
}

/// Direction words of the primitive, cyclically reduced closed walks of
/// length `m`, one canonical word per class. Classes are taken up to
/// translation and cyclic rotation, and additionally up to reversal when
/// `oriented` is false.
pub fn primitive_classes(m: usize, oriented: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut word = Vec::with_capacity(m);
    search(m, oriented, &mut word, (0, 0), &mut out);
    out
}

fn search(
    m: usize,
    oriented: bool,
    word: &mut Vec<usize>,
    pos: (i64, i64),
    out: &mut Vec<Vec<usize>>,
) {
    let remaining = m - word.len();
    if remaining == 0 {
        if pos == (0, 0)
            && word[0] != reverse(word[m - 1])
            && is_primitive(word)
            && is_least_rotation(word, word)
        {
            let keep = oriented || {
                let reversed: Vec<usize> = word.iter().rev().map(|&d| reverse(d)).collect();
                is_least_rotation(word, &reversed)
            };
            if keep {
                out.push(word.clone());
            }
        }
        return;
    }
    for (d, step) in STEPS.iter().enumerate() {
        if let Some(&last) = word.last() {
            if d == reverse(last) {
                continue;
            }
        }
        // A canonical word starts with its smallest letter.
        if let Some(&first) = word.first() {
            if d < first {
                continue;
            }
        }
        let next = (pos.0 + step.0, pos.1 + step.1);
        if (next.0.abs() + next.1.abs()) as usize > remaining - 1 {
            continue;
        }
        word.push(d);
        search(m, oriented, word, next, out);
        word.pop();
    }
}

/// Number of primitive cycle classes of length `m`.
pub fn primitive_class_count(m: usize, oriented: bool) -> u64 {
    primitive_classes(m, oriented).len() as u64
}
