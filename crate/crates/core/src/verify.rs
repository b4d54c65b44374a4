//! The theorem engine: compares geometric operator blocks against the
//! algebraic Fock-space actions, checks the Clifford/oscillator relations,
//! and verifies the geometric boson-fermion correspondence blockwise.
//!
//! Every check is a finite, exact statement over a truncation window. Where
//! an operator word needs intermediate blocks beyond the window, the suite
//! enlarges the window internally by the word's block-shift signature
//! rather than truncating silently.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::fock::{p_apply, psi, psi_star, BosonVector, FermionVector, FixedPoint};
use crate::geom::{
    block_basis, build_block, c_tnv_clifford, c_tnv_heisenberg, euler_tangent, k_euler,
    BlockError, BlockMatrix, Dir, GeometryContext, Half, OpAtom, TruncationWindow,
};
use crate::poly::{format_rational, rat_int, Rat};

/// One failed case: what was checked, what was expected, what came out.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    pub fn to_json(&self) -> Value {
        json!({"case": self.case, "expected": self.expected, "got": self.got})
    }
}

/// Deterministic result of one verification suite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    pub suite: String,
    pub window: TruncationWindow,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "window": self.window.to_json(),
            "cases": self.cases,
            "failures": self.failures.iter().map(Failure::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} cases, {} failures [{}]",
            self.suite,
            self.cases,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for failure in &self.failures {
            writeln!(f, "  case {}", failure.case)?;
            writeln!(f, "    expected: {}", failure.expected)?;
            writeln!(f, "    got:      {}", failure.got)?;
        }
        Ok(())
    }
}

fn report(
    suite: &str,
    ctx: &GeometryContext,
    cases: usize,
    failures: Vec<Failure>,
) -> VerificationReport {
    VerificationReport {
        suite: suite.to_string(),
        window: ctx.window().clone(),
        cases,
        failures,
    }
}

fn block_error_failure(case: String, err: BlockError) -> Failure {
    Failure {
        case,
        expected: "a well-defined block".to_string(),
        got: err.to_string(),
    }
}

/// Shared store of already-built geometric blocks; operator words reuse the
/// same atoms constantly.
type BlockKey = (OpAtom, Vec<i64>, i64);

pub struct BlockCache {
    map: Mutex<HashMap<BlockKey, Arc<BlockMatrix>>>,
}

impl BlockCache {
    pub fn new() -> Self {
        BlockCache {
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(
        &self,
        ctx: &GeometryContext,
        atom: OpAtom,
        charges: &[i64],
        energy: i64,
    ) -> Result<Arc<BlockMatrix>, BlockError> {
        let key = (atom, charges.to_vec(), energy);
        if let Some(hit) = self.map.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(build_block(ctx, atom, charges, energy)?);
        Ok(self
            .map
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(built)
            .clone())
    }
}

impl Default for BlockCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Matrix of the algebraic operator (ψ, ψ*, p acting on the Fock spaces) in
/// the fixed-point basis, with the same block conventions as the geometric
/// `build_block`.
pub fn algebraic_block(
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
    let source = block_basis(ctx.rank(), charges, energy);
    let (t_charges, t_energy) = atom.target_of(charges, energy);
    let target = block_basis(ctx.rank(), &t_charges, t_energy);
    let index: HashMap<&FixedPoint, usize> =
        target.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out = BlockMatrix::zero(source.clone(), target.clone());
    for (col, point) in source.iter().enumerate() {
        match atom {
            OpAtom::Psi { color, n } => {
                if let Some((sign, image)) = psi(color, n, point) {
                    out.set(index[&image], col, rat_int(sign));
                }
            }
            OpAtom::PsiStar { color, n } => {
                if let Some((sign, image)) = psi_star(color, n, point) {
                    out.set(index[&image], col, rat_int(sign));
                }
            }
            OpAtom::P { color, n } => {
                let image = p_apply(color, n, &BosonVector::basis(point.clone()));
                for (key, coef) in image.iter() {
                    out.set(index[key], col, coef.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Qˡ: charge cˡ ↦ cˡ+1 with shapes preserved; bijective on the basis.
pub fn q_shift(l: usize, v: &FermionVector) -> FermionVector {
    let mut out = FermionVector::zero();
    for (p, coef) in v.iter() {
        out.add_term(
            p.with_color(l, p.charge(l) + 1, p.shape(l).clone()),
            coef.clone(),
        );
    }
    out
}

fn q_block(rank: usize, l: usize, step: i64, charges: &[i64], energy: i64) -> BlockMatrix {
    let source = block_basis(rank, charges, energy);
    let mut t_charges = charges.to_vec();
    t_charges[l] += step;
    let target = block_basis(rank, &t_charges, energy);
    let index: HashMap<&FixedPoint, usize> =
        target.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out = BlockMatrix::zero(source.clone(), target.clone());
    for (col, p) in source.iter().enumerate() {
        let image = p.with_color(l, p.charge(l) + step, p.shape(l).clone());
        out.set(index[&image], col, Rat::one());
    }
    out
}

/// One atom of an operator word; Q and Q⁻¹ shift a color's charge with
/// shapes fixed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordAtom {
    Op(OpAtom),
    Q { color: usize },
    QInv { color: usize },
}

impl WordAtom {
    fn target_of(&self, charges: &[i64], energy: i64) -> (Vec<i64>, i64) {
        match *self {
            WordAtom::Op(atom) => atom.target_of(charges, energy),
            WordAtom::Q { color } => {
                let mut c = charges.to_vec();
                c[color] += 1;
                (c, energy)
            }
            WordAtom::QInv { color } => {
                let mut c = charges.to_vec();
                c[color] -= 1;
                (c, energy)
            }
        }
    }
}

impl fmt::Display for WordAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordAtom::Op(atom) => write!(f, "{}", atom),
            WordAtom::Q { color } => write!(f, "Q[{}]", color + 1),
            WordAtom::QInv { color } => write!(f, "QInv[{}]", color + 1),
        }
    }
}

/// A composable operator word with a rational prefactor. Atoms are stored
/// in writing order: the rightmost atom acts first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpWord {
    prefactor: Rat,
    atoms: Vec<WordAtom>,
}

impl OpWord {
    pub fn new(prefactor: Rat, atoms: Vec<WordAtom>) -> Self {
        OpWord { prefactor, atoms }
    }

    pub fn from_ops(atoms: Vec<OpAtom>) -> Self {
        OpWord {
            prefactor: Rat::one(),
            atoms: atoms.into_iter().map(WordAtom::Op).collect(),
        }
    }

    /// The normal-ordered fermion bilinear :Ψˡ(k)Ψˡ(j)*: with the case
    /// split on the contraction index: Ψˡ(k)Ψˡ(j)* for j > 0 and
    /// −Ψˡ(j)*Ψˡ(k) for j ≤ 0.
    pub fn normal_ordered_ff(l: usize, k: i64, j: i64) -> Self {
        if j > 0 {
            OpWord::from_ops(vec![
                OpAtom::Psi { color: l, n: k },
                OpAtom::PsiStar { color: l, n: j },
            ])
        } else {
            OpWord::new(
                -Rat::one(),
                vec![
                    WordAtom::Op(OpAtom::PsiStar { color: l, n: j }),
                    WordAtom::Op(OpAtom::Psi { color: l, n: k }),
                ],
            )
        }
    }

    /// Blocks the word visits from the given source, rightmost atom first;
    /// the last entry is the target block.
    pub fn signature(&self, charges: &[i64], energy: i64) -> Vec<(Vec<i64>, i64)> {
        let mut chain = vec![(charges.to_vec(), energy)];
        for atom in self.atoms.iter().rev() {
            let (c, e) = chain.last().map(|(c, e)| (c.clone(), *e)).unwrap();
            chain.push(atom.target_of(&c, e));
        }
        chain
    }

    /// Composes the word on one source block. Intermediate blocks with
    /// negative energy contribute zero; intermediate blocks beyond the
    /// window raise `WindowInsufficient`.
    pub fn apply(
        &self,
        ctx: &GeometryContext,
        cache: &BlockCache,
        charges: &[i64],
        energy: i64,
    ) -> Result<BlockMatrix, BlockError> {
        let chain = self.signature(charges, energy);
        for (c, e) in chain.iter().skip(1) {
            if *e > ctx.window().max_energy() as i64 || !ctx.window().contains_charges(c) {
                return Err(BlockError::WindowInsufficient {
                    needed_energy: *e,
                    needed_charges: c.clone(),
                });
            }
        }
        let (t_charges, t_energy) = chain.last().unwrap().clone();
        let source = block_basis(ctx.rank(), charges, energy);
        if chain.iter().any(|&(_, e)| e < 0) {
            let target = block_basis(ctx.rank(), &t_charges, t_energy);
            return Ok(BlockMatrix::zero(source, target));
        }
        let mut acc = BlockMatrix::identity(source);
        for (idx, atom) in self.atoms.iter().rev().enumerate() {
            let (c, e) = &chain[idx];
            acc = match *atom {
                WordAtom::Op(op) => cache.get(ctx, op, c, *e)?.compose(&acc),
                WordAtom::Q { color } => q_block(ctx.rank(), color, 1, c, *e).compose(&acc),
                WordAtom::QInv { color } => q_block(ctx.rank(), color, -1, c, *e).compose(&acc),
            };
        }
        Ok(acc.scale(&self.prefactor))
    }
}

/// Σ over the finitely many (k, j) of :Ψˡ(k)Ψˡ(j)*: between the blocks
/// (𝐜, n1) → (𝐜, n2); contraction indices whose intermediate energy would
/// be negative contribute nothing.
pub fn normal_ordered_ff_block(
    ctx: &GeometryContext,
    cache: &BlockCache,
    l: usize,
    charges: &[i64],
    n1: i64,
    n2: i64,
) -> Result<BlockMatrix, BlockError> {
    let c_l = charges[l];
    let source = block_basis(ctx.rank(), charges, n1);
    let target = block_basis(ctx.rank(), charges, n2);
    let mut acc = BlockMatrix::zero(source, target);
    // j > 0: Ψˡ(k)Ψˡ(j)* through the charge-lowered block of energy
    // n1 + cˡ − j.
    let mut j = 1;
    while n1 + c_l - j >= 0 {
        let word = OpWord::normal_ordered_ff(l, n2 - n1 + j, j);
        acc = acc.add(&word.apply(ctx, cache, charges, n1)?);
        j += 1;
    }
    // j ≤ 0: −Ψˡ(j)*Ψˡ(k) through the charge-raised block of energy
    // n2 − cˡ − 1 + j.
    let mut j = 0;
    while n2 + j - c_l > 0 {
        let word = OpWord::normal_ordered_ff(l, n2 - n1 + j, j);
        acc = acc.add(&word.apply(ctx, cache, charges, n1)?);
        j -= 1;
    }
    Ok(acc)
}

fn max_abs_charge(window: &TruncationWindow) -> i64 {
    window
        .charge_vectors()
        .iter()
        .flatten()
        .map(|c| c.abs())
        .max()
        .unwrap_or(0)
}

/// Ordered tuples of positive integers summing to m; the empty tuple for 0.
fn compositions(m: i64) -> Vec<Vec<i64>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=m {
        for rest in compositions(m - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// The words of Q_l^{±1} exp(±γˡc_tnv(ℬ₋)) exp(±γˡc_tnv(ℬ₊)) contributing
/// to the (𝐜, n1) → (𝐜±1_l, n2) block. The energy-lowering exponential
/// acts first; each exponential truncates to the compositions of its
/// energy shift.
fn fermionization_words(l: usize, n1: i64, n2: i64, inverse: bool) -> Vec<OpWord> {
    let (q_atom, raise_sign, lower_sign) = if inverse {
        (WordAtom::QInv { color: l }, -1i64, 1i64)
    } else {
        (WordAtom::Q { color: l }, 1i64, -1i64)
    };
    let mut words = Vec::new();
    for m1 in 0..=n1.max(0) {
        let mid = n1 - m1;
        let m2 = n2 - mid;
        if m2 < 0 {
            continue;
        }
        for lower in compositions(m1) {
            for upper in compositions(m2) {
                let sign = lower_sign.pow(lower.len() as u32) * raise_sign.pow(upper.len() as u32);
                let coeff = rat_int(sign) / (factorial(lower.len()) * factorial(upper.len()));
                let mut atoms = vec![q_atom];
                atoms.extend(
                    upper
                        .iter()
                        .map(|&n| WordAtom::Op(OpAtom::P { color: l, n: -n })),
                );
                atoms.extend(lower.iter().map(|&n| WordAtom::Op(OpAtom::P { color: l, n })));
                words.push(OpWord::new(coeff, atoms));
            }
        }
    }
    words
}

/// Per-suite working state: the internally enlarged window that covers
/// intermediate blocks, plus the block cache shared across cases.
struct SuiteRun {
    big: GeometryContext,
    cache: BlockCache,
}

impl SuiteRun {
    fn new(ctx: &GeometryContext, extra_energy: u32, extra_charge: i64) -> Self {
        let big = ctx.with_window(ctx.window().enlarged(extra_energy, extra_charge));
        SuiteRun {
            big,
            cache: BlockCache::new(),
        }
    }
}

/// Range of n for which Ψˡ(n) from (𝐜, k) lands at energy 0..=max.
fn psi_range(c_l: i64, k: i64, max: i64) -> std::ops::RangeInclusive<i64> {
    (c_l + 1 - k)..=(c_l + 1 - k + max)
}

/// Range of n for which Ψˡ(n)* from (𝐜, k) lands at energy 0..=max.
fn psi_star_range(c_l: i64, k: i64, max: i64) -> std::ops::RangeInclusive<i64> {
    (k + c_l - max)..=(k + c_l)
}

fn is_sign(q: &Rat) -> bool {
    q.is_zero() || *q == rat_int(1) || *q == rat_int(-1)
}

fn with_energy(charges: &[i64], energy: i64) -> Vec<i64> {
    let mut v = charges.to_vec();
    v.push(energy);
    v
}

fn split_energy(case: &[i64]) -> (&[i64], i64) {
    let (energy, charges) = case.split_last().unwrap();
    (charges, *energy)
}

fn run_block_comparisons(
    ctx: &GeometryContext,
    cases: &[(OpAtom, Vec<i64>)],
    entry_ok: impl Fn(&OpAtom, &Rat) -> bool + Sync,
    entry_rule: &str,
) -> Vec<Failure> {
    cases
        .par_iter()
        .map(|(atom, case)| {
            let (charges, energy) = split_energy(case);
            let label = format!("{} @ charges={:?} energy={}", atom, charges, energy);
            let geo = match build_block(ctx, *atom, charges, energy) {
                Ok(b) => b,
                Err(e) => return Some(block_error_failure(label, e)),
            };
            let alg = match algebraic_block(ctx, *atom, charges, energy) {
                Ok(b) => b,
                Err(e) => return Some(block_error_failure(label, e)),
            };
            if geo != alg {
                return Some(Failure {
                    case: label,
                    expected: alg.to_json().to_string(),
                    got: geo.to_json().to_string(),
                });
            }
            for (_, entry) in geo.entries() {
                if !entry_ok(atom, entry) {
                    return Some(Failure {
                        case: label,
                        expected: entry_rule.to_string(),
                        got: format_rational(entry),
                    });
                }
            }
            if let OpAtom::P { color, n: 0 } = atom {
                let expected =
                    BlockMatrix::identity(geo.source().to_vec()).scale(&rat_int(charges[*color]));
                if geo != expected {
                    return Some(Failure {
                        case: label,
                        expected: "c^l times the identity".to_string(),
                        got: geo.to_json().to_string(),
                    });
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Theorem check, Clifford side: every geometric Ψˡ(n), Ψˡ(n)* block over
/// the window equals the algebraic ψ block exactly, with entries in
/// {0, ±1}.
pub fn check_clifford_correspondence(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let mut cases: Vec<(OpAtom, Vec<i64>)> = Vec::new();
    for charges in window.charge_vectors() {
        for k in 0..=e_max {
            for l in 0..ctx.rank() {
                for n in psi_range(charges[l], k, e_max) {
                    cases.push((OpAtom::Psi { color: l, n }, with_energy(&charges, k)));
                }
                for n in psi_star_range(charges[l], k, e_max) {
                    cases.push((OpAtom::PsiStar { color: l, n }, with_energy(&charges, k)));
                }
            }
        }
    }
    let failures = run_block_comparisons(ctx, &cases, |_, entry| is_sign(entry), "entry in {0,±1}");
    report("clifford-correspondence", ctx, cases.len(), failures)
}

/// Theorem check, Heisenberg side: every geometric Pˡ(n) block equals the
/// Murnaghan–Nakayama action exactly; nonzero entries have magnitude
/// 1/|n|, and Pˡ(0) is cˡ times the identity.
pub fn check_heisenberg_correspondence(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let mut cases: Vec<(OpAtom, Vec<i64>)> = Vec::new();
    for charges in window.charge_vectors() {
        for k in 0..=e_max {
            for l in 0..ctx.rank() {
                for n in (k - e_max)..=k {
                    cases.push((OpAtom::P { color: l, n }, with_energy(&charges, k)));
                }
            }
        }
    }
    let failures = run_block_comparisons(
        ctx,
        &cases,
        |atom, entry| {
            let n = match atom {
                OpAtom::P { n, .. } => *n,
                _ => unreachable!(),
            };
            if n == 0 {
                entry.is_integer()
            } else {
                entry.is_zero() || entry.abs() == Rat::new(BigInt::one(), BigInt::from(n.abs()))
            }
        },
        "entry is 0 or ±1/|n|",
    );
    report("heisenberg-correspondence", ctx, cases.len(), failures)
}

enum RelationKind {
    /// a·b + b·a = scalar·id (scalar may be zero).
    Anti(OpAtom, OpAtom, Rat),
    /// a·b − b·a = scalar·id.
    Comm(OpAtom, OpAtom, Rat),
}

/// The algebra relations of the geometric operators: same-color Clifford
/// anticommutators, cross-color commutativity, and the oscillator
/// commutators, for |m|, |n| ≤ 3 on every block in the window.
pub fn check_relations(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let maxc = max_abs_charge(window);
    let run = SuiteRun::new(ctx, 2 * (3 + maxc as u32 + 2), 2);
    let span = 3i64;

    let mut relations: Vec<RelationKind> = Vec::new();
    for l in 0..ctx.rank() {
        for k in 0..ctx.rank() {
            for n in -span..=span {
                for m in -span..=span {
                    let psi_n = OpAtom::Psi { color: l, n };
                    let psi_m = OpAtom::Psi { color: k, n: m };
                    let star_n = OpAtom::PsiStar { color: l, n };
                    let star_m = OpAtom::PsiStar { color: k, n: m };
                    if l == k {
                        let delta = if n == m { Rat::one() } else { Rat::zero() };
                        relations.push(RelationKind::Anti(psi_n, star_m, delta));
                        relations.push(RelationKind::Anti(psi_n, psi_m, Rat::zero()));
                        relations.push(RelationKind::Anti(star_n, star_m, Rat::zero()));
                    } else {
                        relations.push(RelationKind::Comm(psi_n, star_m, Rat::zero()));
                        relations.push(RelationKind::Comm(psi_n, psi_m, Rat::zero()));
                        relations.push(RelationKind::Comm(star_n, star_m, Rat::zero()));
                    }
                    if n != 0 && m != 0 {
                        let scalar = if l == k && m == -n {
                            Rat::new(BigInt::one(), BigInt::from(n))
                        } else {
                            Rat::zero()
                        };
                        relations.push(RelationKind::Comm(
                            OpAtom::P { color: l, n },
                            OpAtom::P { color: k, n: m },
                            scalar,
                        ));
                    }
                }
                // [Pˡ(n), Pᵏ(0)] = 0.
                if n != 0 {
                    relations.push(RelationKind::Comm(
                        OpAtom::P { color: l, n },
                        OpAtom::P { color: k, n: 0 },
                        Rat::zero(),
                    ));
                }
            }
        }
    }

    let mut cases: Vec<(usize, Vec<i64>)> = Vec::new();
    for charges in window.charge_vectors() {
        for e in 0..=e_max {
            for rel_idx in 0..relations.len() {
                cases.push((rel_idx, with_energy(&charges, e)));
            }
        }
    }

    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(rel_idx, case)| {
            let (charges, energy) = split_energy(case);
            let (a, b, scalar, sign) = match &relations[*rel_idx] {
                RelationKind::Anti(a, b, s) => (a, b, s, 1i64),
                RelationKind::Comm(a, b, s) => (a, b, s, -1i64),
            };
            let bracket = if sign == 1 { "anti" } else { "comm" };
            let label = format!(
                "{}[{}, {}] @ charges={:?} energy={}",
                bracket, a, b, charges, energy
            );
            let ab = OpWord::from_ops(vec![*a, *b]).apply(&run.big, &run.cache, charges, energy);
            let ba = OpWord::from_ops(vec![*b, *a]).apply(&run.big, &run.cache, charges, energy);
            let (ab, ba) = match (ab, ba) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return Some(block_error_failure(label, e)),
            };
            let combined = ab.add(&ba.scale(&rat_int(sign)));
            if scalar.is_zero() {
                if !combined.is_zero() {
                    return Some(Failure {
                        case: label,
                        expected: "the zero block".to_string(),
                        got: combined.to_json().to_string(),
                    });
                }
            } else {
                let expected = BlockMatrix::identity(combined.source().to_vec()).scale(scalar);
                if combined != expected {
                    return Some(Failure {
                        case: label,
                        expected: format!("{} times the identity", format_rational(scalar)),
                        got: combined.to_json().to_string(),
                    });
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("algebra-relations", ctx, cases.len(), failures)
}

/// Adjointness at the matrix level: the Ψˡ(n)* block is the transpose of
/// the Ψˡ(n) block between mirrored blocks; Pˡ(n) and Pˡ(−n) likewise.
pub fn check_adjointness(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let maxc = max_abs_charge(window);
    let run = SuiteRun::new(ctx, 3 + maxc as u32 + 1, 1);
    let mut cases: Vec<(OpAtom, Vec<i64>)> = Vec::new();
    for charges in window.charge_vectors() {
        for k in 0..=e_max {
            for l in 0..ctx.rank() {
                for n in psi_range(charges[l], k, e_max) {
                    cases.push((OpAtom::Psi { color: l, n }, with_energy(&charges, k)));
                }
                for n in (k - e_max)..=k {
                    cases.push((OpAtom::P { color: l, n }, with_energy(&charges, k)));
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(atom, case)| {
            let (charges, energy) = split_energy(case);
            let label = format!(
                "adjoint of {} @ charges={:?} energy={}",
                atom, charges, energy
            );
            let (t_charges, t_energy) = atom.target_of(charges, energy);
            if t_energy < 0 {
                return None;
            }
            let mirror = match *atom {
                OpAtom::Psi { color, n } => OpAtom::PsiStar { color, n },
                OpAtom::P { color, n } => OpAtom::P { color, n: -n },
                OpAtom::PsiStar { color, n } => OpAtom::Psi { color, n },
            };
            let forward = run.cache.get(&run.big, *atom, charges, energy);
            let backward = run.cache.get(&run.big, mirror, &t_charges, t_energy);
            let (forward, backward) = match (forward, backward) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return Some(block_error_failure(label, e)),
            };
            if forward.transpose() != *backward {
                return Some(Failure {
                    case: label,
                    expected: forward.transpose().to_json().to_string(),
                    got: backward.to_json().to_string(),
                });
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("adjointness", ctx, cases.len(), failures)
}

/// Localization vanishing: for equal charge vectors the full Euler class of
/// K expands to zero whenever |𝐈| ≠ |𝐉|, and on the diagonal it equals the
/// full tangent Euler class.
pub fn check_vanishing(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let mut cases: Vec<(FixedPoint, FixedPoint)> = Vec::new();
    for charges in window.charge_vectors() {
        let by_energy: Vec<Vec<FixedPoint>> = (0..=e_max)
            .map(|e| block_basis(ctx.rank(), &charges, e))
            .collect();
        for (e1, points1) in by_energy.iter().enumerate() {
            for (e2, points2) in by_energy.iter().enumerate() {
                for p1 in points1 {
                    if e1 == e2 {
                        cases.push((p1.clone(), p1.clone()));
                        continue;
                    }
                    for p2 in points2 {
                        cases.push((p1.clone(), p2.clone()));
                    }
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(p1, p2)| {
            let expanded = k_euler(ctx, p1, p2).expand();
            if p1 == p2 {
                let tangent = euler_tangent(ctx, p1, Half::Full).expand();
                if expanded != tangent {
                    return Some(Failure {
                        case: format!("k_euler diagonal at {}", p1),
                        expected: tangent.to_json().to_string(),
                        got: expanded.to_json().to_string(),
                    });
                }
            } else if !expanded.is_zero() {
                return Some(Failure {
                    case: format!("k_euler({}, {})", p1, p2),
                    expected: "0".to_string(),
                    got: expanded.to_json().to_string(),
                });
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("localization-vanishing", ctx, cases.len(), failures)
}

/// Nonvanishing of the Clifford top classes: every admissible
/// (n₁, n₂, l, 𝐜, ±) has a fixed-point pair with nonzero restriction.
pub fn check_nonvanishing_clifford(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let bound = (window.max_energy() as i64).min(3);
    let mut cases: Vec<(Vec<i64>, usize, i64, i64, Dir)> = Vec::new();
    for charges in window.charge_vectors() {
        for l in 0..ctx.rank() {
            for n1 in 0..=bound {
                for n2 in 0..=bound {
                    cases.push((charges.clone(), l, n1, n2, Dir::Raise));
                    cases.push((charges.clone(), l, n1, n2, Dir::Lower));
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(charges, l, n1, n2, dir)| {
            let mut t_charges = charges.clone();
            t_charges[*l] += match dir {
                Dir::Raise => 1,
                Dir::Lower => -1,
            };
            let sources = block_basis(ctx.rank(), charges, *n1);
            let targets = block_basis(ctx.rank(), &t_charges, *n2);
            let found = sources.iter().any(|i_pt| {
                targets.iter().any(|j_pt| {
                    !c_tnv_clifford(ctx, i_pt, j_pt, *l, *dir)
                        .expect("charges match by construction")
                        .is_zero()
                })
            });
            if found {
                None
            } else {
                Some(Failure {
                    case: format!(
                        "clifford witness charges={:?} l={} n1={} n2={} dir={:?}",
                        charges,
                        l + 1,
                        n1,
                        n2,
                        dir
                    ),
                    expected: "some pair with nonzero top class".to_string(),
                    got: "all restrictions vanish".to_string(),
                })
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("nonvanishing-clifford", ctx, cases.len(), failures)
}

/// Nonvanishing of the Heisenberg top classes c_{r(n₁+n₂)−1} (off the
/// diagonal) and c_{2rn} (on it).
pub fn check_nonvanishing_heisenberg(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let bound = (window.max_energy() as i64).min(3);
    let mut cases: Vec<(Vec<i64>, i64, i64)> = Vec::new();
    for charges in window.charge_vectors() {
        for n1 in 0..=bound {
            for n2 in 0..=bound {
                cases.push((charges.clone(), n1, n2));
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(charges, n1, n2)| {
            let sources = block_basis(ctx.rank(), charges, *n1);
            let targets = block_basis(ctx.rank(), charges, *n2);
            let found = sources.iter().any(|i_pt| {
                targets.iter().any(|j_pt| {
                    !c_tnv_heisenberg(ctx, i_pt, j_pt)
                        .expect("charges match by construction")
                        .is_zero()
                })
            });
            if found {
                None
            } else {
                Some(Failure {
                    case: format!(
                        "heisenberg witness charges={:?} n1={} n2={}",
                        charges, n1, n2
                    ),
                    expected: "some pair with nonzero top class".to_string(),
                    got: "all restrictions vanish".to_string(),
                })
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("nonvanishing-heisenberg", ctx, cases.len(), failures)
}

/// Geometric bosonization, blockwise: Nˡ c_tnv(ℬ) = :c_tnv(𝓕ˡ)c_tnv(𝓕ˡ*):,
/// i.e. the normal-ordered fermion bilinear reproduces cˡ·id on diagonal
/// blocks and |n|·Pˡ(n) on the others.
pub fn check_bosonization(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let maxc = max_abs_charge(window);
    let run = SuiteRun::new(ctx, maxc as u32 + 1, 1);
    let mut cases: Vec<(Vec<i64>, usize, i64, i64)> = Vec::new();
    for charges in window.charge_vectors() {
        for l in 0..ctx.rank() {
            for n1 in 0..=e_max {
                for n2 in 0..=e_max {
                    cases.push((charges.clone(), l, n1, n2));
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(charges, l, n1, n2)| {
            let label = format!(
                "bosonization l={} charges={:?} {} -> {}",
                l + 1,
                charges,
                n1,
                n2
            );
            let rhs = match normal_ordered_ff_block(&run.big, &run.cache, *l, charges, *n1, *n2) {
                Ok(b) => b,
                Err(e) => return Some(block_error_failure(label, e)),
            };
            let lhs = if n1 == n2 {
                BlockMatrix::identity(block_basis(ctx.rank(), charges, *n1))
                    .scale(&rat_int(charges[*l]))
            } else {
                let p = match run.cache.get(
                    &run.big,
                    OpAtom::P {
                        color: *l,
                        n: n1 - n2,
                    },
                    charges,
                    *n1,
                ) {
                    Ok(b) => b,
                    Err(e) => return Some(block_error_failure(label, e)),
                };
                p.scale(&rat_int((n2 - n1).abs()))
            };
            if lhs != rhs {
                return Some(Failure {
                    case: label,
                    expected: lhs.to_json().to_string(),
                    got: rhs.to_json().to_string(),
                });
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("bosonization", ctx, cases.len(), failures)
}

/// Geometric fermionization, blockwise: the single Ψˡ(n) (resp. Ψˡ(n)*)
/// reaching a block equals the Q-shifted double exponential of the
/// half-boson vertex operators.
pub fn check_fermionization(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let maxc = max_abs_charge(window);
    let run = SuiteRun::new(ctx, maxc as u32 + 1, 1);
    let mut cases: Vec<(Vec<i64>, usize, i64, i64, bool)> = Vec::new();
    for charges in window.charge_vectors() {
        for l in 0..ctx.rank() {
            for n1 in 0..=e_max {
                for n2 in 0..=e_max {
                    cases.push((charges.clone(), l, n1, n2, false));
                    cases.push((charges.clone(), l, n1, n2, true));
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|(charges, l, n1, n2, inverse)| {
            let side = if *inverse { "F*" } else { "F" };
            let label = format!(
                "fermionization {} l={} charges={:?} {} -> {}",
                side,
                l + 1,
                charges,
                n1,
                n2
            );
            let c_l = charges[*l];
            let lhs_atom = if *inverse {
                OpAtom::PsiStar {
                    color: *l,
                    n: n1 - n2 + c_l,
                }
            } else {
                OpAtom::Psi {
                    color: *l,
                    n: n2 - n1 + c_l + 1,
                }
            };
            let lhs = match run.cache.get(&run.big, lhs_atom, charges, *n1) {
                Ok(b) => b,
                Err(e) => return Some(block_error_failure(label, e)),
            };
            let mut rhs: Option<BlockMatrix> = None;
            for word in fermionization_words(*l, *n1, *n2, *inverse) {
                match word.apply(&run.big, &run.cache, charges, *n1) {
                    Ok(b) => {
                        rhs = Some(match rhs {
                            None => b,
                            Some(acc) => acc.add(&b),
                        })
                    }
                    Err(e) => return Some(block_error_failure(label, e)),
                }
            }
            let rhs = rhs.unwrap_or_else(|| {
                let mut t_charges = charges.clone();
                t_charges[*l] += if *inverse { -1 } else { 1 };
                BlockMatrix::zero(
                    block_basis(ctx.rank(), charges, *n1),
                    block_basis(ctx.rank(), &t_charges, *n2),
                )
            });
            if *lhs != rhs {
                return Some(Failure {
                    case: label,
                    expected: lhs.to_json().to_string(),
                    got: rhs.to_json().to_string(),
                });
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("fermionization", ctx, cases.len(), failures)
}

/// Integral form: homogeneous components of the vertex operators have
/// integer matrices in the fixed-point basis — Clifford blocks take values
/// in {0, ±1}, |n|·Pˡ(n) and the normal-ordered bilinears in ℤ.
pub fn check_integrality(ctx: &GeometryContext) -> VerificationReport {
    let window = ctx.window();
    let e_max = window.max_energy() as i64;
    let maxc = max_abs_charge(window);
    let run = SuiteRun::new(ctx, maxc as u32 + 1, 1);

    enum Case {
        Atom(OpAtom, Vec<i64>, i64),
        NormalOrdered(usize, Vec<i64>, i64, i64),
    }
    let mut cases: Vec<Case> = Vec::new();
    for charges in window.charge_vectors() {
        for k in 0..=e_max {
            for l in 0..ctx.rank() {
                for n in psi_range(charges[l], k, e_max) {
                    cases.push(Case::Atom(OpAtom::Psi { color: l, n }, charges.clone(), k));
                }
                for n in psi_star_range(charges[l], k, e_max) {
                    cases.push(Case::Atom(
                        OpAtom::PsiStar { color: l, n },
                        charges.clone(),
                        k,
                    ));
                }
                for n in (k - e_max)..=k {
                    cases.push(Case::Atom(OpAtom::P { color: l, n }, charges.clone(), k));
                }
                for n2 in 0..=e_max {
                    cases.push(Case::NormalOrdered(l, charges.clone(), k, n2));
                }
            }
        }
    }
    let failures: Vec<Failure> = cases
        .par_iter()
        .map(|case| {
            let (label, block, must_be_sign) = match case {
                Case::Atom(atom, charges, k) => {
                    let label = format!("{} @ charges={:?} energy={}", atom, charges, k);
                    let block = match run.cache.get(&run.big, *atom, charges, *k) {
                        Ok(b) => b,
                        Err(e) => return Some(block_error_failure(label, e)),
                    };
                    // Pˡ(n) alone has entries ±1/n; its homogeneous component
                    // inside Nˡ c_tnv(ℬ) is |n|·Pˡ(n), which is integral.
                    let scaled = match atom {
                        OpAtom::P { n, .. } if *n != 0 => block.scale(&rat_int(n.abs())),
                        _ => (*block).clone(),
                    };
                    let sign_only = matches!(atom, OpAtom::Psi { .. } | OpAtom::PsiStar { .. });
                    (label, scaled, sign_only)
                }
                Case::NormalOrdered(l, charges, n1, n2) => {
                    let label = format!(
                        ":FF*: l={} charges={:?} {} -> {}",
                        l + 1,
                        charges,
                        n1,
                        n2
                    );
                    let block = match normal_ordered_ff_block(
                        &run.big, &run.cache, *l, charges, *n1, *n2,
                    ) {
                        Ok(b) => b,
                        Err(e) => return Some(block_error_failure(label, e)),
                    };
                    (label, block, false)
                }
            };
            for (_, entry) in block.entries() {
                if !entry.is_integer() {
                    return Some(Failure {
                        case: label,
                        expected: "integer entries".to_string(),
                        got: format_rational(entry),
                    });
                }
                if must_be_sign && !is_sign(entry) {
                    return Some(Failure {
                        case: label,
                        expected: "entries in {0,±1}".to_string(),
                        got: format_rational(entry),
                    });
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    report("integral-form", ctx, cases.len(), failures)
}

/// Suite selection mirroring the CLI surface.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Clifford,
    Heisenberg,
    Correspondence,
    Bfc,
    Integrality,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clifford" => Ok(Suite::Clifford),
            "heisenberg" => Ok(Suite::Heisenberg),
            "correspondence" => Ok(Suite::Correspondence),
            "bfc" => Ok(Suite::Bfc),
            "integrality" => Ok(Suite::Integrality),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

impl Suite {
    /// Runs the suite's reports against the context's window.
    pub fn run(self, ctx: &GeometryContext) -> Vec<VerificationReport> {
        match self {
            Suite::Clifford => vec![
                check_clifford_correspondence(ctx),
                check_nonvanishing_clifford(ctx),
            ],
            Suite::Heisenberg => vec![
                check_heisenberg_correspondence(ctx),
                check_vanishing(ctx),
                check_nonvanishing_heisenberg(ctx),
            ],
            Suite::Correspondence => vec![
                check_clifford_correspondence(ctx),
                check_heisenberg_correspondence(ctx),
                check_relations(ctx),
                check_adjointness(ctx),
            ],
            Suite::Bfc => vec![check_bosonization(ctx), check_fermionization(ctx)],
            Suite::Integrality => vec![check_integrality(ctx)],
            Suite::All => vec![
                check_clifford_correspondence(ctx),
                check_heisenberg_correspondence(ctx),
                check_relations(ctx),
                check_adjointness(ctx),
                check_vanishing(ctx),
                check_nonvanishing_clifford(ctx),
                check_nonvanishing_heisenberg(ctx),
                check_bosonization(ctx),
                check_fermionization(ctx),
                check_integrality(ctx),
            ],
        }
    }
}
