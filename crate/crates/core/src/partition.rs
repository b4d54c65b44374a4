//! Young-diagram combinatorics: conjugation, arm/leg and relative hook
//! lengths, hook numbers, and border-strip recognition/enumeration.
//!
//! A partition λ is identified with its cell set {(i,j) | i ≥ 1, 1 ≤ j ≤ λ_i},
//! where i indexes parts. Cells outside the diagram are allowed wherever arm
//! and leg lengths appear; those lengths are then negative.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A partition: weakly decreasing positive parts. Trailing zeros are never
/// stored, so the empty partition is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A cell (i, j) with 1-based row (part index) i and column j. A cell may
/// lie outside a given partition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub fn new(row: u32, col: u32) -> Self {
        assert!(row >= 1 && col >= 1, "cells are 1-based");
        Cell { row, col }
    }
}

/// Outcome of testing whether μ − λ is a border strip.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StripCheck {
    /// λ ⊄ μ, so μ − λ is not even a skew shape.
    NotContained,
    /// A skew shape, but empty, disconnected, or containing a 2×2 square.
    NotStrip,
    /// A border strip; the width is the number of parts it touches minus one.
    Strip { width: u32 },
}

impl Partition {
    /// Builds a partition from its parts. Trailing/interior zeros are
    /// stripped; the nonzero parts must be weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Self {
        let mut parts = parts;
        parts.retain(|&p| p > 0);
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing: {:?}",
            parts
        );
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// λ_i for a 1-based part index; zero beyond the length.
    pub fn part(&self, i: u32) -> u32 {
        if i == 0 {
            panic!("part index is 1-based");
        }
        self.parts.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// |λ| = Σ λ_i.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// (λᵗ)_j = #{i | λ_i ≥ j}.
    pub fn conjugate_part(&self, j: u32) -> u32 {
        if j == 0 {
            panic!("part index is 1-based");
        }
        self.parts.iter().take_while(|&&p| p >= j).count() as u32
    }

    /// The transposed partition λᵗ.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(1);
        let parts = (1..=cols).map(|j| self.conjugate_part(j)).collect();
        Partition { parts }
    }

    /// λ ⊆ μ as cell sets, i.e. λ_i ≤ μ_i for all i.
    pub fn contained_in(&self, mu: &Partition) -> bool {
        (1..=self.len()).all(|i| self.part(i) <= mu.part(i))
    }

    pub fn contains_cell(&self, s: Cell) -> bool {
        s.col <= self.part(s.row)
    }

    /// Cells of the diagram, row by row.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| Cell::new(i as u32 + 1, j)))
    }

    /// Arm length a_λ(s) = λ_i − j; negative when s lies right of row i.
    pub fn arm(&self, s: Cell) -> i64 {
        self.part(s.row) as i64 - s.col as i64
    }

    /// Leg length l_λ(s) = (λᵗ)_j − i; negative when s lies below column j.
    pub fn leg(&self, s: Cell) -> i64 {
        self.conjugate_part(s.col) as i64 - s.row as i64
    }
}

/// Relative hook length h_{λ,μ}(s) = a_λ(s) + l_μ(s) + 1.
pub fn relative_hook(lambda: &Partition, mu: &Partition, s: Cell) -> i64 {
    lambda.arm(s) + mu.leg(s) + 1
}

/// Relative hook number h_{λ,μ} = Π_{s ∈ λ} h_{λ,μ}(s). Empty product is 1;
/// for λ ≠ μ inside one another the product is often 0.
pub fn hook_number(lambda: &Partition, mu: &Partition) -> i64 {
    lambda.cells().fold(1i64, |acc, s| {
        acc.checked_mul(relative_hook(lambda, mu, s))
            .expect("hook number overflow")
    })
}

/// Classifies μ − λ: a border strip is a nonempty edge-connected skew shape
/// with no 2×2 square. Width counts the parts it touches, minus one.
pub fn border_strip(lambda: &Partition, mu: &Partition) -> StripCheck {
    if !lambda.contained_in(mu) {
        return StripCheck::NotContained;
    }
    let skew: Vec<Cell> = mu
        .cells()
        .filter(|&s| !lambda.contains_cell(s))
        .collect();
    if skew.is_empty() {
        return StripCheck::NotStrip;
    }
    let in_skew =
        |i: u32, j: u32| mu.contains_cell(Cell::new(i, j)) && !lambda.contains_cell(Cell::new(i, j));
    // 2x2 square test: look for a cell whose right/down/diagonal neighbours
    // are all in the skew shape.
    for &s in &skew {
        if in_skew(s.row + 1, s.col) && in_skew(s.row, s.col + 1) && in_skew(s.row + 1, s.col + 1) {
            return StripCheck::NotStrip;
        }
    }
    // Edge connectivity by flood fill. A single cell is connected.
    let mut seen = vec![false; skew.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        let s = skew[k];
        for (idx, &t) in skew.iter().enumerate() {
            if !seen[idx]
                && ((t.row == s.row && t.col.abs_diff(s.col) == 1)
                    || (t.col == s.col && t.row.abs_diff(s.row) == 1))
            {
                seen[idx] = true;
                stack.push(idx);
            }
        }
    }
    if seen.iter().any(|&v| !v) {
        return StripCheck::NotStrip;
    }
    let touched = (1..=mu.len()).filter(|&i| mu.part(i) > lambda.part(i)).count() as u32;
    StripCheck::Strip { width: touched - 1 }
}

/// All μ ⊇ λ with |μ| = |λ| + n and μ − λ a border strip, with widths.
/// Order is lexicographic descending on part lists.
pub fn add_border_strips(lambda: &Partition, n: u32) -> Vec<(Partition, u32)> {
    assert!(n >= 1);
    partitions_of(lambda.size() + n as u64)
        .into_iter()
        .filter_map(|mu| match border_strip(lambda, &mu) {
            StripCheck::Strip { width } => Some((mu, width)),
            _ => None,
        })
        .collect()
}

/// All λ ⊆ μ with μ − λ a border strip of size n, with widths; the
/// transpose of the `add_border_strips` relation.
pub fn remove_border_strips(mu: &Partition, n: u32) -> Vec<(Partition, u32)> {
    assert!(n >= 1);
    if (n as u64) > mu.size() {
        return Vec::new();
    }
    partitions_of(mu.size() - n as u64)
        .into_iter()
        .filter_map(|lambda| match border_strip(&lambda, mu) {
            StripCheck::Strip { width } => Some((lambda, width)),
            _ => None,
        })
        .collect()
}

/// All partitions of n in lexicographic descending order on part lists,
/// e.g. (3), (2,1), (1,1,1).
pub fn partitions_of(n: u64) -> Vec<Partition> {
    fn go(remaining: u64, max_part: u64, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            prefix.push(p as u32);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Canonical order: lexicographic descending on part lists (zero-padded), so
/// (3) < (2,1) < (1,1,1). Matches the enumeration order of `partitions_of`.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let len = self.parts.len().max(other.parts.len()) as u32;
        for i in 1..=len {
            // Larger part sorts first.
            match other.part(i).cmp(&self.part(i)) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Error from parsing the `(3,1,1)` text form of a partition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionParseError {
    #[error("expected '(' at position {0}")]
    MissingOpen(usize),
    #[error("expected ')' at position {0}")]
    MissingClose(usize),
    #[error("invalid part at position {0}")]
    InvalidPart(usize),
    #[error("parts not weakly decreasing at position {0}")]
    NotDecreasing(usize),
}

impl FromStr for Partition {
    type Err = PartitionParseError;

    /// Parses "(3,1,1)"; the empty partition is "()".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if !t.starts_with('(') {
            return Err(PartitionParseError::MissingOpen(0));
        }
        if !t.ends_with(')') || t.len() < 2 {
            return Err(PartitionParseError::MissingClose(t.len()));
        }
        let inner = &t[1..t.len() - 1];
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        let mut pos = 1usize;
        for piece in inner.split(',') {
            let p: u32 = piece
                .trim()
                .parse()
                .map_err(|_| PartitionParseError::InvalidPart(pos))?;
            if p == 0 {
                return Err(PartitionParseError::InvalidPart(pos));
            }
            if let Some(&last) = parts.last() {
                if p > last {
                    return Err(PartitionParseError::NotDecreasing(pos));
                }
            }
            parts.push(p);
            pos += piece.len() + 1;
        }
        Ok(Partition { parts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(pt(&[3, 1]).conjugate(), pt(&[2, 1, 1]));
        assert_eq!(pt(&[2, 2]).conjugate(), pt(&[2, 2]));
    }

    #[test]
    fn conjugate_is_involutive() {
        for n in 0..=10u64 {
            for lam in partitions_of(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
    }

    #[test]
    fn arm_leg_examples() {
        let lam = pt(&[2, 1]);
        assert_eq!(lam.arm(Cell::new(1, 1)), 1);
        assert_eq!(lam.leg(Cell::new(1, 1)), 1);
        assert_eq!(lam.arm(Cell::new(1, 2)), 0);
        assert_eq!(lam.leg(Cell::new(1, 2)), 0);
        // Outside the (empty) diagram both are -1.
        let empty = Partition::empty();
        assert_eq!(empty.arm(Cell::new(1, 1)), -1);
        assert_eq!(empty.leg(Cell::new(1, 1)), -1);
    }

    #[test]
    fn arm_leg_duality() {
        // a_λ(i,j) = l_{λᵗ}(j,i) for all cells of partitions of size ≤ 8,
        // including a band of cells outside the diagram.
        for n in 0..=8u64 {
            for lam in partitions_of(n) {
                let conj = lam.conjugate();
                for i in 1..=(lam.len() + 2) {
                    for j in 1..=(lam.part(1) + 2) {
                        assert_eq!(
                            lam.arm(Cell::new(i, j)),
                            conj.leg(Cell::new(j, i)),
                            "λ={lam} cell=({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn relative_hook_examples() {
        assert_eq!(relative_hook(&pt(&[2, 1]), &pt(&[1, 1]), Cell::new(1, 2)), 0);
        assert_eq!(relative_hook(&pt(&[1]), &pt(&[1]), Cell::new(1, 1)), 1);
        assert_eq!(relative_hook(&pt(&[2, 1]), &pt(&[2, 1]), Cell::new(1, 1)), 3);
    }

    #[test]
    fn hook_number_examples() {
        assert_eq!(hook_number(&Partition::empty(), &pt(&[3, 2])), 1);
        assert_eq!(hook_number(&pt(&[2, 1]), &pt(&[2, 1])), 3);
        assert_eq!(hook_number(&pt(&[2, 1]), &pt(&[1, 1])), 0);
    }

    #[test]
    fn own_hooks_are_positive() {
        for n in 0..=8u64 {
            for lam in partitions_of(n) {
                for s in lam.cells() {
                    assert!(relative_hook(&lam, &lam, s) >= 1);
                }
                assert!(hook_number(&lam, &lam) >= 1);
            }
        }
    }

    #[test]
    fn first_disagreement_gives_zero_hook() {
        // λ ≠ μ, k minimal with λ_k ≠ μ_k and λ_k > μ_k forces
        // h_{λ,μ}((k, λ_k)) = 0. Exhaustive over pairs of size ≤ 7.
        let all: Vec<Partition> = (0..=7u64).flat_map(partitions_of).collect();
        for lam in &all {
            for mu in &all {
                if lam == mu {
                    continue;
                }
                let k = (1..).find(|&i| lam.part(i) != mu.part(i)).unwrap();
                if lam.part(k) > mu.part(k) {
                    assert_eq!(relative_hook(lam, mu, Cell::new(k, lam.part(k))), 0);
                }
            }
        }
    }

    #[test]
    fn border_strip_examples() {
        assert_eq!(border_strip(&pt(&[1]), &pt(&[3])), StripCheck::Strip { width: 0 });
        assert_eq!(border_strip(&pt(&[1]), &pt(&[2, 1])), StripCheck::NotStrip);
        assert_eq!(border_strip(&pt(&[2]), &pt(&[1])), StripCheck::NotContained);
        assert_eq!(border_strip(&pt(&[1]), &pt(&[1])), StripCheck::NotStrip);
        // (2,1) over the empty partition is an edge-connected hook.
        assert_eq!(
            border_strip(&Partition::empty(), &pt(&[2, 1])),
            StripCheck::Strip { width: 1 }
        );
        // A 2x2 square is not a strip.
        assert_eq!(border_strip(&Partition::empty(), &pt(&[2, 2])), StripCheck::NotStrip);
    }

    #[test]
    fn add_border_strips_examples() {
        assert_eq!(add_border_strips(&Partition::empty(), 1), vec![(pt(&[1]), 0)]);
        assert_eq!(
            add_border_strips(&pt(&[1]), 2),
            vec![(pt(&[3]), 0), (pt(&[1, 1, 1]), 1)]
        );
        assert_eq!(
            add_border_strips(&Partition::empty(), 2),
            vec![(pt(&[2]), 0), (pt(&[1, 1]), 1)]
        );
    }

    #[test]
    fn remove_border_strips_examples() {
        assert_eq!(remove_border_strips(&pt(&[1]), 1), vec![(Partition::empty(), 0)]);
        assert_eq!(remove_border_strips(&pt(&[3]), 2), vec![(pt(&[1]), 0)]);
        assert_eq!(
            remove_border_strips(&pt(&[2, 1]), 3),
            vec![(Partition::empty(), 1)]
        );
    }

    #[test]
    fn add_remove_consistency() {
        // (μ,w) ∈ add(λ,n) ⇔ (λ,w) ∈ remove(μ,n), exhaustively.
        for base in 0..=6u64 {
            for lam in partitions_of(base) {
                for n in 1..=4u32 {
                    for (mu, w) in add_border_strips(&lam, n) {
                        assert!(remove_border_strips(&mu, n).contains(&(lam.clone(), w)));
                    }
                }
            }
        }
        for size in 1..=7u64 {
            for mu in partitions_of(size) {
                for n in 1..=size.min(4) as u32 {
                    for (lam, w) in remove_border_strips(&mu, n) {
                        assert!(add_border_strips(&lam, n).contains(&(mu.clone(), w)));
                    }
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        let expected = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &cnt) in expected.iter().enumerate() {
            assert_eq!(partitions_of(n as u64).len(), cnt, "p({n})");
        }
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(
            partitions_of(3),
            vec![pt(&[3]), pt(&[2, 1]), pt(&[1, 1, 1])]
        );
    }

    #[test]
    fn enumeration_order_is_canonical() {
        for n in 0..=9u64 {
            let list = partitions_of(n);
            let mut sorted = list.clone();
            sorted.sort();
            assert_eq!(list, sorted);
        }
    }

    #[test]
    fn text_format_round_trip() {
        for n in 0..=7u64 {
            for lam in partitions_of(n) {
                let shown = lam.to_string();
                assert_eq!(shown.parse::<Partition>().unwrap(), lam);
            }
        }
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("(3,1,1)".parse::<Partition>().unwrap(), pt(&[3, 1, 1]));
        assert!("(1,3)".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
        assert!("(0)".parse::<Partition>().is_err());
    }
}
