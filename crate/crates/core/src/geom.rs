//! Fixed-point equivariant classes and the operator blocks they induce.
//!
//! The tangent Euler classes, the Euler class of the two-point bundle K, the
//! top non-vanishing Chern classes in the Clifford and Heisenberg regimes,
//! and the γˡ restrictions are all products of linear forms
//! b_β − b_α + m·ε indexed by relative hooks. Localization turns each class
//! into exact rational structure constants between finite fixed-point bases,
//! assembled here into sparse block matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fock::FixedPoint;
use crate::partition::{partitions_of, relative_hook, Cell, Partition};
use crate::poly::{exact_ratio, format_rational, rat_int, FactoredClass, LinearForm, Rat, RatioResult};

/// Which half of the tangent-space splitting to take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Half {
    Minus,
    Plus,
    Full,
}

/// Charge direction of a Clifford operator: raise is 𝐜 → 𝐜+1_l.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    Raise,
    Lower,
}

/// The finite sub-basis on which identities are asserted: an energy bound
/// plus a per-color charge box.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncationWindow {
    max_energy: u32,
    charge_lo: Vec<i64>,
    charge_hi: Vec<i64>,
}

impl TruncationWindow {
    pub fn new(max_energy: u32, charge_lo: Vec<i64>, charge_hi: Vec<i64>) -> Self {
        assert_eq!(charge_lo.len(), charge_hi.len());
        assert!(!charge_lo.is_empty());
        assert!(
            charge_lo.iter().zip(&charge_hi).all(|(lo, hi)| lo <= hi),
            "charge_lo must be componentwise <= charge_hi"
        );
        TruncationWindow {
            max_energy,
            charge_lo,
            charge_hi,
        }
    }

    /// Same bounds in every color.
    pub fn uniform(rank: usize, max_energy: u32, lo: i64, hi: i64) -> Self {
        TruncationWindow::new(max_energy, vec![lo; rank], vec![hi; rank])
    }

    pub fn rank(&self) -> usize {
        self.charge_lo.len()
    }

    pub fn max_energy(&self) -> u32 {
        self.max_energy
    }

    pub fn contains_charges(&self, charges: &[i64]) -> bool {
        charges.len() == self.rank()
            && charges
                .iter()
                .enumerate()
                .all(|(i, &c)| self.charge_lo[i] <= c && c <= self.charge_hi[i])
    }

    /// All charge vectors in the box, lexicographic order.
    pub fn charge_vectors(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for l in 0..self.rank() {
            let mut next = Vec::new();
            for prefix in &out {
                for c in self.charge_lo[l]..=self.charge_hi[l] {
                    let mut v = prefix.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// A window grown by the given energy and charge margins; used by the
    /// verification harness to cover intermediate blocks of operator words.
    pub fn enlarged(&self, extra_energy: u32, extra_charge: i64) -> TruncationWindow {
        TruncationWindow {
            max_energy: self.max_energy + extra_energy,
            charge_lo: self.charge_lo.iter().map(|c| c - extra_charge).collect(),
            charge_hi: self.charge_hi.iter().map(|c| c + extra_charge).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank(),
            "max_energy": self.max_energy,
            "charge_lo": self.charge_lo,
            "charge_hi": self.charge_hi,
        })
    }
}

/// Fixes the rank r (hence the ring ℚ[b₁..b_r, ε]) and the window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeometryContext {
    rank: usize,
    window: TruncationWindow,
}

impl GeometryContext {
    pub fn new(rank: usize, window: TruncationWindow) -> Self {
        assert!(rank >= 1);
        assert_eq!(rank, window.rank(), "window rank must match context rank");
        GeometryContext { rank, window }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn with_window(&self, window: TruncationWindow) -> GeometryContext {
        GeometryContext::new(self.rank, window)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("charge vectors {found:?} do not match the operator (expected {expected:?})")]
    ChargeMismatch { expected: Vec<i64>, found: Vec<i64> },
    #[error("target energy {found} does not match the operator shift (expected {expected})")]
    EnergyMismatch { expected: i64, found: i64 },
    #[error("source block (charges {charges:?}, energy {energy}) lies outside the window")]
    OutsideWindow { charges: Vec<i64>, energy: i64 },
    #[error("localization ratio is not a scalar; violates the structure-constant theorems")]
    NonScalarRatio,
    #[error("window insufficient: word needs energy {needed_energy} and charges {needed_charges:?}")]
    WindowInsufficient { needed_energy: i64, needed_charges: Vec<i64> },
}

/// e_T(𝒯_𝐈^∓): over colors α, β and cells s ∈ λ(I^α),
///   minus: b_β − b_α + (c^β − c^α − h_{I^α,I^β}(s))·ε,
///   plus:  b_α − b_β + (c^α − c^β + h_{I^α,I^β}(s))·ε,
/// and full = minus · plus = (−1)^{r|𝐈|} · minus².
pub fn euler_tangent(ctx: &GeometryContext, point: &FixedPoint, half: Half) -> FactoredClass {
    assert_eq!(point.rank(), ctx.rank);
    let r = ctx.rank;
    let mut factors = Vec::new();
    for alpha in 0..r {
        for beta in 0..r {
            let dc = point.charge(beta) - point.charge(alpha);
            for s in point.shape(alpha).cells() {
                let h = relative_hook(point.shape(alpha), point.shape(beta), s);
                if half != Half::Plus {
                    factors.push(LinearForm::color_pair(r, beta, alpha, dc - h));
                }
                if half != Half::Minus {
                    factors.push(LinearForm::color_pair(r, alpha, beta, -dc + h));
                }
            }
        }
    }
    FactoredClass::new(r, Rat::from_integer(1.into()), factors)
}

/// Marks the single factor omitted from the two-point Euler product in the
/// Heisenberg regime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SkipSide {
    Source,
    Target,
}

fn k_euler_with_skip(
    ctx: &GeometryContext,
    source: &FixedPoint,
    target: &FixedPoint,
    skip: Option<(SkipSide, usize, Cell)>,
) -> FactoredClass {
    assert_eq!(source.rank(), ctx.rank);
    assert_eq!(target.rank(), ctx.rank);
    let r = ctx.rank;
    // Any color with matching charges but different shapes forces a zero
    // relative hook in its diagonal subproduct, hence an all-zero factor;
    // the class normalizes to zero without building the product. The one
    // removable zero sits in the skip color, which is exempt.
    for alpha in 0..r {
        if source.charge(alpha) == target.charge(alpha)
            && source.shape(alpha) != target.shape(alpha)
            && skip.is_none_or(|(_, l0, _)| l0 != alpha)
        {
            return FactoredClass::zero(r);
        }
    }
    let mut factors = Vec::with_capacity(r * (source.energy() + target.energy()) as usize);
    for alpha in 0..r {
        for beta in 0..r {
            // Source-side cells: b_β − b_α + (d^β − c^α − h_{I^α,J^β}(s))·ε.
            let m0 = target.charge(beta) - source.charge(alpha);
            for s in source.shape(alpha).cells() {
                if skip == Some((SkipSide::Source, alpha, s)) && alpha == beta {
                    debug_assert_eq!(
                        relative_hook(source.shape(alpha), target.shape(beta), s),
                        0
                    );
                    continue;
                }
                let h = relative_hook(source.shape(alpha), target.shape(beta), s);
                factors.push(LinearForm::color_pair(r, beta, alpha, m0 - h));
            }
            // Target-side cells: b_α − b_β + (d^α − c^β + h_{J^α,I^β}(s))·ε.
            let m1 = target.charge(alpha) - source.charge(beta);
            for s in target.shape(alpha).cells() {
                if skip == Some((SkipSide::Target, alpha, s)) && alpha == beta {
                    debug_assert_eq!(
                        relative_hook(target.shape(alpha), source.shape(beta), s),
                        0
                    );
                    continue;
                }
                let h = relative_hook(target.shape(alpha), source.shape(beta), s);
                factors.push(LinearForm::color_pair(r, alpha, beta, m1 + h));
            }
        }
    }
    FactoredClass::new(r, Rat::from_integer(1.into()), factors)
}

/// Euler class of the two-point bundle restricted to (𝐈, 𝐉): a product of
/// r(|𝐈|+|𝐉|) linear forms indexed by relative hooks across the pair.
pub fn k_euler(ctx: &GeometryContext, source: &FixedPoint, target: &FixedPoint) -> FactoredClass {
    k_euler_with_skip(ctx, source, target, None)
}

/// Top non-vanishing class in the Clifford regime (charges differ by ±1_l):
/// the full Euler class of K.
pub fn c_tnv_clifford(
    ctx: &GeometryContext,
    source: &FixedPoint,
    target: &FixedPoint,
    color: usize,
    dir: Dir,
) -> Result<FactoredClass, BlockError> {
    let mut expected = source.charges();
    expected[color] += match dir {
        Dir::Raise => 1,
        Dir::Lower => -1,
    };
    if target.charges() != expected {
        return Err(BlockError::ChargeMismatch {
            expected,
            found: target.charges(),
        });
    }
    Ok(k_euler(ctx, source, target))
}

/// Top non-vanishing class in the Heisenberg regime (equal charges).
///
/// On the diagonal this is the full tangent Euler class. Off the diagonal
/// the product acquires a structurally forced zero factor at the first
/// disagreeing part of the unique differing color; that factor is removed.
/// When two or more colors differ a zero factor always remains.
pub fn c_tnv_heisenberg(
    ctx: &GeometryContext,
    source: &FixedPoint,
    target: &FixedPoint,
) -> Result<FactoredClass, BlockError> {
    if source.charges() != target.charges() {
        return Err(BlockError::ChargeMismatch {
            expected: source.charges(),
            found: target.charges(),
        });
    }
    if source == target {
        return Ok(euler_tangent(ctx, source, Half::Full));
    }
    let differing: Vec<usize> = (0..ctx.rank)
        .filter(|&l| source.shape(l) != target.shape(l))
        .collect();
    if differing.len() >= 2 {
        return Ok(FactoredClass::zero(ctx.rank));
    }
    let l0 = differing[0];
    let (lam, mu) = (source.shape(l0), target.shape(l0));
    let k = (1..).find(|&i| lam.part(i) != mu.part(i)).unwrap();
    let skip = if lam.part(k) > mu.part(k) {
        (SkipSide::Source, l0, Cell::new(k, lam.part(k)))
    } else {
        (SkipSide::Target, l0, Cell::new(k, mu.part(k)))
    };
    Ok(k_euler_with_skip(ctx, source, target, Some(skip)))
}

/// γˡ restricted to (𝐈, 𝐉): ε when l is the first color whose energy
/// changes, zero otherwise.
pub fn gamma(
    ctx: &GeometryContext,
    color: usize,
    source: &FixedPoint,
    target: &FixedPoint,
) -> FactoredClass {
    let selects = (0..color).all(|a| source.shape(a).size() == target.shape(a).size())
        && source.shape(color).size() != target.shape(color).size();
    if selects {
        FactoredClass::from_form(LinearForm::eps(ctx.rank, 1))
    } else {
        FactoredClass::zero(ctx.rank)
    }
}

/// d_{𝐈,𝐉} = e_T(𝒯_𝐈^−) · e_T(𝒯_𝐉^+), the localization denominator.
pub fn d_class(ctx: &GeometryContext, source: &FixedPoint, target: &FixedPoint) -> FactoredClass {
    euler_tangent(ctx, source, Half::Minus).multiply(&euler_tangent(ctx, target, Half::Plus))
}

fn scalar_ratio(num: &FactoredClass, den: &FactoredClass) -> Result<Rat, BlockError> {
    match exact_ratio(num, den).expect("tangent Euler classes are nonzero") {
        RatioResult::Scalar(q) => Ok(q),
        RatioResult::NonScalar => Err(BlockError::NonScalarRatio),
    }
}

/// ⟨Ψˡ(·)[𝐈], [𝐉]⟩ = f_{𝐈,𝐉} / d_{𝐈,𝐉}; always one of 0, +1, −1.
pub fn clifford_structure_constant(
    ctx: &GeometryContext,
    source: &FixedPoint,
    target: &FixedPoint,
    color: usize,
    dir: Dir,
) -> Result<Rat, BlockError> {
    let f = c_tnv_clifford(ctx, source, target, color, dir)?;
    if f.is_zero() {
        return Ok(Rat::zero());
    }
    scalar_ratio(&f, &d_class(ctx, source, target))
}

/// ⟨Pˡ(n)[𝐈], [𝐉]⟩ = ±gˡ_{𝐈,𝐉} / d_{𝐈,𝐉} (sign + for n < 0, − for n > 0),
/// and cˡ·δ_{𝐈,𝐉} for n = 0. The target energy must be |𝐈| − n.
pub fn heisenberg_structure_constant(
    ctx: &GeometryContext,
    source: &FixedPoint,
    target: &FixedPoint,
    color: usize,
    n: i64,
) -> Result<Rat, BlockError> {
    if source.charges() != target.charges() {
        return Err(BlockError::ChargeMismatch {
            expected: source.charges(),
            found: target.charges(),
        });
    }
    let expected = source.energy() as i64 - n;
    if target.energy() as i64 != expected {
        return Err(BlockError::EnergyMismatch {
            expected,
            found: target.energy() as i64,
        });
    }
    if n == 0 {
        return Ok(if source == target {
            rat_int(source.charge(color))
        } else {
            Rat::zero()
        });
    }
    let g = gamma(ctx, color, source, target);
    if g.is_zero() {
        return Ok(Rat::zero());
    }
    let class = g.multiply(&c_tnv_heisenberg(ctx, source, target)?);
    if class.is_zero() {
        return Ok(Rat::zero());
    }
    let q = scalar_ratio(&class, &d_class(ctx, source, target))?;
    Ok(if n < 0 { q } else { -q })
}

/// All fixed points with the given charge vector and total energy, in the
/// canonical order (lexicographic on (color, charge, partition)). Negative
/// energy yields the empty basis.
pub fn block_basis(rank: usize, charges: &[i64], energy: i64) -> Vec<FixedPoint> {
    assert_eq!(charges.len(), rank);
    if energy < 0 {
        return Vec::new();
    }
    fn go(charges: &[i64], remaining: u64, acc: &mut Vec<(i64, Partition)>, out: &mut Vec<FixedPoint>) {
        if acc.len() == charges.len() - 1 {
            for lam in partitions_of(remaining) {
                acc.push((charges[acc.len()], lam));
                out.push(FixedPoint::new(acc.clone()));
                acc.pop();
            }
            return;
        }
        for k in 0..=remaining {
            for lam in partitions_of(k) {
                acc.push((charges[acc.len()], lam));
                go(charges, remaining - k, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(charges, energy as u64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// An operator atom acting between graded blocks. Colors are 0-based in
/// code and 1-based in the display form `Psi[1](2)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OpAtom {
    Psi { color: usize, n: i64 },
    PsiStar { color: usize, n: i64 },
    P { color: usize, n: i64 },
}

impl OpAtom {
    pub fn color(&self) -> usize {
        match *self {
            OpAtom::Psi { color, .. } | OpAtom::PsiStar { color, .. } | OpAtom::P { color, .. } => {
                color
            }
        }
    }

    /// How the atom moves the charge vector.
    pub fn charge_shift(&self) -> i64 {
        match self {
            OpAtom::Psi { .. } => 1,
            OpAtom::PsiStar { .. } => -1,
            OpAtom::P { .. } => 0,
        }
    }

    /// Target (charges, energy) of the atom from a source block. The energy
    /// shift of Ψˡ(n) is n − cˡ − 1, of Ψˡ(n)* is cˡ − n, of Pˡ(n) is −n.
    pub fn target_of(&self, charges: &[i64], energy: i64) -> (Vec<i64>, i64) {
        let mut out = charges.to_vec();
        match *self {
            OpAtom::Psi { color, n } => {
                let e = energy + n - charges[color] - 1;
                out[color] += 1;
                (out, e)
            }
            OpAtom::PsiStar { color, n } => {
                let e = energy - n + charges[color];
                out[color] -= 1;
                (out, e)
            }
            OpAtom::P { color: _, n } => (out, energy - n),
        }
    }
}

impl fmt::Display for OpAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OpAtom::Psi { color, n } => write!(f, "Psi[{}]({})", color + 1, n),
            OpAtom::PsiStar { color, n } => write!(f, "PsiStar[{}]({})", color + 1, n),
            OpAtom::P { color, n } => write!(f, "P[{}]({})", color + 1, n),
        }
    }
}

/// Exact sparse matrix between two fixed-point bases. Entry (row, col) is
/// the structure constant ⟨Op[source[col]], [target[row]]⟩.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockMatrix {
    source: Vec<FixedPoint>,
    target: Vec<FixedPoint>,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl BlockMatrix {
    pub fn zero(source: Vec<FixedPoint>, target: Vec<FixedPoint>) -> Self {
        BlockMatrix {
            source,
            target,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(basis: Vec<FixedPoint>) -> Self {
        let entries = (0..basis.len())
            .map(|i| ((i, i), Rat::from_integer(1.into())))
            .collect();
        BlockMatrix {
            source: basis.clone(),
            target: basis,
            entries,
        }
    }

    pub fn source(&self) -> &[FixedPoint] {
        &self.source
    }

    pub fn target(&self) -> &[FixedPoint] {
        &self.target
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rat) {
        assert!(row < self.target.len() && col < self.source.len());
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Rat {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, q: &Rat) -> BlockMatrix {
        if q.is_zero() {
            return BlockMatrix::zero(self.source.clone(), self.target.clone());
        }
        BlockMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|(&k, v)| (k, v * q)).collect(),
        }
    }

    pub fn add(&self, other: &BlockMatrix) -> BlockMatrix {
        assert_eq!(self.source, other.source, "source bases differ");
        assert_eq!(self.target, other.target, "target bases differ");
        let mut out = self.clone();
        for (&(row, col), v) in &other.entries {
            let sum = out.get(row, col) + v;
            out.set(row, col, sum);
        }
        out
    }

    /// self ∘ first (apply `first`, then `self`).
    pub fn compose(&self, first: &BlockMatrix) -> BlockMatrix {
        assert_eq!(
            self.source, first.target,
            "inner bases differ in composition"
        );
        let mut out = BlockMatrix::zero(first.source.clone(), self.target.clone());
        for (&(r1, mid), v1) in &self.entries {
            for (&(r2, c2), v2) in &first.entries {
                if r2 == mid {
                    let sum = out.get(r1, c2) + v1 * v2;
                    out.set(r1, c2, sum);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BlockMatrix {
        BlockMatrix {
            source: self.target.clone(),
            target: self.source.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    /// `{"source": [...], "target": [...], "entries": [{row, col, coef}]}`
    /// with entries sorted by (row, col).
    pub fn to_json(&self) -> Value {
        let src: Vec<String> = self.source.iter().map(|p| p.to_string()).collect();
        let tgt: Vec<String> = self.target.iter().map(|p| p.to_string()).collect();
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(row, col), v)| json!({"row": row, "col": col, "coef": format_rational(v)}))
            .collect();
        json!({"source": src, "target": tgt, "entries": entries})
    }
}

/// Builds the geometric block of one operator atom from the given source
/// block. The target block is inferred from the atom; a negative target
/// energy yields the empty (zero) block.
pub fn build_block(
    ctx: &GeometryContext,
    atom: OpAtom,
    charges: &[i64],
    energy: i64,
) -> Result<BlockMatrix, BlockError> {
    if !ctx.window().contains_charges(charges)
        || energy < 0
        || energy > ctx.window().max_energy() as i64
    {
        return Err(BlockError::OutsideWindow {
            charges: charges.to_vec(),
            energy,
        });
    }
    let source = block_basis(ctx.rank, charges, energy);
    let (t_charges, t_energy) = atom.target_of(charges, energy);
    let target = block_basis(ctx.rank, &t_charges, t_energy);
    let mut out = BlockMatrix::zero(source, target);
    if let OpAtom::P { color, n: 0 } = atom {
        let c = charges[color];
        for i in 0..out.source.len() {
            out.set(i, i, rat_int(c));
        }
        return Ok(out);
    }
    for col in 0..out.source.len() {
        for row in 0..out.target.len() {
            let (source_pt, target_pt) = (&out.source[col], &out.target[row]);
            let value = match atom {
                OpAtom::Psi { color, .. } => {
                    clifford_structure_constant(ctx, source_pt, target_pt, color, Dir::Raise)?
                }
                OpAtom::PsiStar { color, .. } => {
                    clifford_structure_constant(ctx, source_pt, target_pt, color, Dir::Lower)?
                }
                OpAtom::P { color, n } => {
                    heisenberg_structure_constant(ctx, source_pt, target_pt, color, n)?
                }
            };
            out.set(row, col, value);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::hook_number;
    use num_bigint::BigInt;

    fn ctx(rank: usize) -> GeometryContext {
        GeometryContext::new(rank, TruncationWindow::uniform(rank, 4, -2, 2))
    }

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn point1(c: i64, parts: &[u32]) -> FixedPoint {
        FixedPoint::new(vec![(c, pt(parts))])
    }

    fn points_in(rank: usize, charges: &[i64], max_energy: i64) -> Vec<FixedPoint> {
        (0..=max_energy)
            .flat_map(|e| block_basis(rank, charges, e))
            .collect()
    }

    #[test]
    fn tangent_examples() {
        let c = ctx(1);
        let vac = FixedPoint::vacuum(&[0]);
        assert_eq!(euler_tangent(&c, &vac, Half::Full), FactoredClass::one(1));

        // r=1, λ=(1): minus = −ε, plus = ε.
        let p = point1(0, &[1]);
        let minus = euler_tangent(&c, &p, Half::Minus).expand();
        let plus = euler_tangent(&c, &p, Half::Plus).expand();
        assert_eq!(minus.to_string(), "-eps");
        assert_eq!(plus.to_string(), "eps");
    }

    #[test]
    fn plus_is_signed_minus() {
        // e_T(𝒯⁺) = (−1)^{r|𝐈|} e_T(𝒯⁻) for |𝐈| ≤ 4, r ≤ 2.
        for r in 1..=2usize {
            let c = ctx(r);
            let charges: Vec<i64> = (0..r as i64).map(|i| i - 1).collect();
            for p in points_in(r, &charges, 4) {
                let minus = euler_tangent(&c, &p, Half::Minus);
                let plus = euler_tangent(&c, &p, Half::Plus);
                let sign = if (r as u64 * p.energy()).is_multiple_of(2) { 1 } else { -1 };
                assert_eq!(
                    exact_ratio(&plus, &minus).unwrap(),
                    RatioResult::Scalar(rat_int(sign)),
                    "point {p}"
                );
            }
        }
    }

    #[test]
    fn rank_one_d_identity() {
        // d_{I,J} = (−1)^{|I|} h_I h_J ε^{|I|+|J|} when r = 1.
        let c = ctx(1);
        for i_pt in points_in(1, &[0], 3) {
            for j_pt in points_in(1, &[1], 3) {
                let d = d_class(&c, &i_pt, &j_pt).expand();
                let (li, lj) = (i_pt.shape(0), j_pt.shape(0));
                let sign = if li.size() % 2 == 0 { 1 } else { -1 };
                let coef = sign * hook_number(li, li) * hook_number(lj, lj);
                let expected = FactoredClass::new(
                    1,
                    rat_int(coef),
                    vec![LinearForm::eps(1, 1); (li.size() + lj.size()) as usize],
                )
                .expand();
                assert_eq!(d, expected);
            }
        }
    }

    #[test]
    fn k_euler_examples() {
        let c = ctx(1);
        let vac0 = FixedPoint::vacuum(&[0]);
        let vac1 = FixedPoint::vacuum(&[1]);
        assert_eq!(k_euler(&c, &vac0, &vac1), FactoredClass::one(1));
        assert_eq!(
            k_euler(&c, &vac0, &point1(1, &[1])).expand().to_string(),
            "eps"
        );
        // Equal charges, different energies: a zero factor is forced.
        assert!(k_euler(&c, &vac0, &point1(0, &[1])).is_zero());
        assert!(k_euler(&c, &point1(0, &[2]), &point1(0, &[1, 1, 1])).is_zero());
    }

    #[test]
    fn k_euler_factor_count() {
        // Nonzero classes carry exactly r(|𝐈|+|𝐉|) factors.
        for r in 1..=2usize {
            let c = ctx(r);
            let src_charges = vec![0i64; r];
            let mut tgt_charges = vec![0i64; r];
            tgt_charges[0] = 1;
            for i_pt in points_in(r, &src_charges, 2) {
                for j_pt in points_in(r, &tgt_charges, 2) {
                    let f = k_euler(&c, &i_pt, &j_pt);
                    if !f.is_zero() {
                        assert_eq!(
                            f.degree() as u64,
                            r as u64 * (i_pt.energy() + j_pt.energy())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn k_euler_diagonal_is_tangent() {
        for r in 1..=2usize {
            let c = ctx(r);
            let charges: Vec<i64> = (0..r as i64).collect();
            for p in points_in(r, &charges, 3) {
                assert_eq!(
                    k_euler(&c, &p, &p).expand(),
                    euler_tangent(&c, &p, Half::Full).expand(),
                    "point {p}"
                );
            }
        }
    }

    #[test]
    fn clifford_class_examples() {
        let c = ctx(1);
        let f = c_tnv_clifford(&c, &FixedPoint::vacuum(&[0]), &point1(1, &[1]), 0, Dir::Raise)
            .unwrap();
        assert_eq!(f.expand().to_string(), "eps");
        // Here f = +eps while d = -eps, so the structure constant is -1.
        let i_pt = point1(0, &[1]);
        let j_pt = FixedPoint::vacuum(&[1]);
        let f = c_tnv_clifford(&c, &i_pt, &j_pt, 0, Dir::Raise).unwrap();
        assert_eq!(f.expand().to_string(), "eps");
        assert_eq!(d_class(&c, &i_pt, &j_pt).expand().to_string(), "-eps");
        assert!(matches!(
            c_tnv_clifford(&c, &FixedPoint::vacuum(&[0]), &point1(0, &[1]), 0, Dir::Raise),
            Err(BlockError::ChargeMismatch { .. })
        ));
    }

    #[test]
    fn heisenberg_class_examples() {
        let c = ctx(1);
        let p = point1(0, &[2, 1]);
        assert_eq!(
            c_tnv_heisenberg(&c, &p, &p).unwrap().expand(),
            euler_tangent(&c, &p, Half::Full).expand()
        );
        // ∅ → (1): the single factor is the removed zero factor, so the
        // class is the empty product.
        let f = c_tnv_heisenberg(&c, &FixedPoint::vacuum(&[0]), &point1(0, &[1])).unwrap();
        assert_eq!(f, FactoredClass::one(1));

        // Two colors differing leaves a zero factor.
        let c2 = ctx(2);
        let a = FixedPoint::new(vec![(0, pt(&[1])), (0, Partition::empty())]);
        let b = FixedPoint::new(vec![(0, Partition::empty()), (0, pt(&[1]))]);
        assert!(c_tnv_heisenberg(&c2, &a, &b).unwrap().is_zero());

        assert!(matches!(
            c_tnv_heisenberg(&c, &FixedPoint::vacuum(&[0]), &point1(1, &[1])),
            Err(BlockError::ChargeMismatch { .. })
        ));
    }

    #[test]
    fn gamma_examples() {
        let c2 = ctx(2);
        let a = FixedPoint::new(vec![(0, pt(&[1])), (1, Partition::empty())]);
        let b = FixedPoint::new(vec![(0, pt(&[1])), (1, pt(&[2]))]);
        // Color 2 is the first differing color.
        assert!(gamma(&c2, 0, &a, &b).is_zero());
        assert_eq!(
            gamma(&c2, 1, &a, &b),
            FactoredClass::from_form(LinearForm::eps(2, 1))
        );
        // 𝐈 = 𝐉 kills every γˡ.
        assert!(gamma(&c2, 0, &a, &a).is_zero());
        assert!(gamma(&c2, 1, &a, &a).is_zero());
    }

    #[test]
    fn gamma_decomposes_eps() {
        // Exactly one γˡ fires whenever |𝐈| ≠ |𝐉| (equal charges).
        let c2 = ctx(2);
        let charges = [0i64, 0];
        for i_pt in points_in(2, &charges, 2) {
            for j_pt in points_in(2, &charges, 2) {
                let firing: Vec<usize> = (0..2)
                    .filter(|&l| !gamma(&c2, l, &i_pt, &j_pt).is_zero())
                    .collect();
                if i_pt.energy() != j_pt.energy() {
                    assert_eq!(firing.len(), 1, "{i_pt} vs {j_pt}");
                } else if i_pt
                    .shapes()
                    .zip(j_pt.shapes())
                    .all(|(a, b)| a.size() == b.size())
                {
                    assert!(firing.is_empty());
                }
            }
        }
    }

    #[test]
    fn structure_constant_examples() {
        let c = ctx(1);
        assert_eq!(
            clifford_structure_constant(
                &c,
                &FixedPoint::vacuum(&[0]),
                &point1(1, &[1]),
                0,
                Dir::Raise
            )
            .unwrap(),
            rat_int(1)
        );
        assert_eq!(
            clifford_structure_constant(
                &c,
                &point1(0, &[1]),
                &FixedPoint::vacuum(&[1]),
                0,
                Dir::Raise
            )
            .unwrap(),
            rat_int(-1)
        );
        assert_eq!(
            heisenberg_structure_constant(
                &c,
                &FixedPoint::vacuum(&[0]),
                &point1(0, &[1]),
                0,
                -1
            )
            .unwrap(),
            rat_int(1)
        );
        assert_eq!(
            heisenberg_structure_constant(
                &c,
                &FixedPoint::vacuum(&[0]),
                &point1(0, &[1, 1]),
                0,
                -2
            )
            .unwrap(),
            Rat::new(BigInt::from(-1), BigInt::from(2))
        );
        let p = point1(-2, &[2]);
        assert_eq!(
            heisenberg_structure_constant(&c, &p, &p, 0, 0).unwrap(),
            rat_int(-2)
        );
    }

    #[test]
    fn heisenberg_constant_preconditions() {
        let c = ctx(1);
        // Target energy must match the shift |I| − n.
        assert!(matches!(
            heisenberg_structure_constant(&c, &FixedPoint::vacuum(&[0]), &point1(0, &[1]), 0, -2),
            Err(BlockError::EnergyMismatch { .. })
        ));
        // n = 0 off the diagonal vanishes.
        assert_eq!(
            heisenberg_structure_constant(&c, &point1(0, &[2]), &point1(0, &[1, 1]), 0, 0)
                .unwrap(),
            Rat::zero()
        );
        assert!(matches!(
            heisenberg_structure_constant(&c, &FixedPoint::vacuum(&[0]), &point1(1, &[1]), 0, -1),
            Err(BlockError::ChargeMismatch { .. })
        ));
    }

    #[test]
    fn clifford_constants_are_signs() {
        // Prop-style spot check: every ratio over a small window is 0 or ±1.
        let c = ctx(1);
        for i_pt in points_in(1, &[0], 3) {
            for j_pt in points_in(1, &[1], 3) {
                let q =
                    clifford_structure_constant(&c, &i_pt, &j_pt, 0, Dir::Raise).unwrap();
                assert!(q.is_zero() || q == rat_int(1) || q == rat_int(-1));
            }
        }
    }

    #[test]
    fn antisymmetry_under_swap() {
        // Swapping the two points negates each linear factor, so the class
        // changes by (−1)^{#factors}.
        let c = ctx(1);
        for i_pt in points_in(1, &[0], 2) {
            for j_pt in points_in(1, &[1], 2) {
                let fwd = k_euler(&c, &i_pt, &j_pt);
                let back = k_euler(&c, &j_pt, &i_pt);
                if fwd.is_zero() {
                    assert!(back.is_zero());
                    continue;
                }
                let sign = if (i_pt.energy() + j_pt.energy()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    exact_ratio(&fwd, &back).unwrap(),
                    RatioResult::Scalar(rat_int(sign))
                );
            }
        }
        // Heisenberg variant: one factor was removed, so the sign flips.
        for i_pt in points_in(1, &[0], 3) {
            for j_pt in points_in(1, &[0], 3) {
                if i_pt == j_pt {
                    continue;
                }
                let fwd = c_tnv_heisenberg(&c, &i_pt, &j_pt).unwrap();
                let back = c_tnv_heisenberg(&c, &j_pt, &i_pt).unwrap();
                if fwd.is_zero() {
                    assert!(back.is_zero());
                    continue;
                }
                let sign = if (i_pt.energy() + j_pt.energy()) % 2 == 0 { -1 } else { 1 };
                assert_eq!(
                    exact_ratio(&fwd, &back).unwrap(),
                    RatioResult::Scalar(rat_int(sign))
                );
            }
        }
    }

    #[test]
    fn block_basis_order_and_size() {
        let basis = block_basis(1, &[0], 3);
        let shapes: Vec<String> = basis.iter().map(|p| p.shape(0).to_string()).collect();
        assert_eq!(shapes, vec!["(3)", "(2,1)", "(1,1,1)"]);
        // r=2, energy 2: 1·p(2) + p(1)·p(1) + p(2)·1 = 5 points.
        assert_eq!(block_basis(2, &[0, 0], 2).len(), 5);
        assert!(block_basis(1, &[0], -1).is_empty());
    }

    #[test]
    fn build_block_examples() {
        let c = ctx(1);
        // Ψ¹(c+1) on the energy-0 block: vacuum to vacuum, entry +1.
        let b = build_block(&c, OpAtom::Psi { color: 0, n: 1 }, &[0], 0).unwrap();
        assert_eq!(b.source().len(), 1);
        assert_eq!(b.target().len(), 1);
        assert_eq!(b.get(0, 0), rat_int(1));

        // P¹(0) is cˡ times the identity.
        let b = build_block(&c, OpAtom::P { color: 0, n: 0 }, &[-2], 3).unwrap();
        assert_eq!(b, BlockMatrix::identity(block_basis(1, &[-2], 3)).scale(&rat_int(-2)));

        // Negative target energy gives the empty block.
        let b = build_block(&c, OpAtom::P { color: 0, n: 5 }, &[0], 2).unwrap();
        assert!(b.target().is_empty());
        assert!(b.is_zero());
        let b = build_block(&c, OpAtom::Psi { color: 0, n: -3 }, &[0], 0).unwrap();
        assert!(b.target().is_empty());

        assert!(matches!(
            build_block(&c, OpAtom::P { color: 0, n: 1 }, &[9], 0),
            Err(BlockError::OutsideWindow { .. })
        ));
    }

    #[test]
    fn block_json_shape() {
        let c = ctx(1);
        let b = build_block(&c, OpAtom::P { color: 0, n: -1 }, &[0], 0).unwrap();
        assert_eq!(
            b.to_json(),
            serde_json::json!({
                "source": ["0:()"],
                "target": ["0:(1)"],
                "entries": [{"row": 0, "col": 0, "coef": "1"}],
            })
        );
    }

    #[test]
    fn compose_and_transpose() {
        let c = ctx(1);
        let up = build_block(&c, OpAtom::P { color: 0, n: -2 }, &[0], 0).unwrap();
        let down = build_block(&c, OpAtom::P { color: 0, n: 2 }, &[0], 2).unwrap();
        // [P(2), P(-2)] = 1/2 on the vacuum block.
        let comm = down.compose(&up);
        assert_eq!(comm.get(0, 0), Rat::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(down.transpose().source(), up.source());
    }
}
