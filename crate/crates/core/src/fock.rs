//! The r-colored fermionic and bosonic Fock spaces.
//!
//! A torus fixed point is an r-tuple of (charge, partition) pairs; per color
//! it encodes the semi-infinite monomial with entries i_k = (c−k+1) + λ_k.
//! The wedging/contracting operators ψ(j), ψ(j)* act on these directly, and
//! the oscillator generators p(n) act on the same labels read as
//! charge-tagged Schur functions, via border strips.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::partition::{add_border_strips, remove_border_strips, Partition, PartitionParseError};
use crate::poly::{rat_int, Rat};

/// A torus fixed point of the rank-r moduli space; equivalently an
/// r-colored semi-infinite monomial. Colors carry a charge and a shape.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedPoint {
    colors: Vec<(i64, Partition)>,
}

impl FixedPoint {
    pub fn new(colors: Vec<(i64, Partition)>) -> Self {
        assert!(!colors.is_empty(), "rank must be at least 1");
        FixedPoint { colors }
    }

    /// The vacuum |𝐜⟩: every color has the empty shape.
    pub fn vacuum(charges: &[i64]) -> Self {
        FixedPoint::new(charges.iter().map(|&c| (c, Partition::empty())).collect())
    }

    pub fn rank(&self) -> usize {
        self.colors.len()
    }

    /// 0-based color access.
    pub fn charge(&self, l: usize) -> i64 {
        self.colors[l].0
    }

    pub fn shape(&self, l: usize) -> &Partition {
        &self.colors[l].1
    }

    pub fn charges(&self) -> Vec<i64> {
        self.colors.iter().map(|&(c, _)| c).collect()
    }

    pub fn shapes(&self) -> impl Iterator<Item = &Partition> {
        self.colors.iter().map(|(_, s)| s)
    }

    /// Energy |𝐈| = Σ |λ(Iˡ)|.
    pub fn energy(&self) -> u64 {
        self.colors.iter().map(|(_, s)| s.size()).sum()
    }

    pub fn with_color(&self, l: usize, charge: i64, shape: Partition) -> FixedPoint {
        let mut colors = self.colors.clone();
        colors[l] = (charge, shape);
        FixedPoint { colors }
    }

    /// First k entries i₁ > … > i_k of color l's semi-infinite monomial,
    /// i_m = (c − m + 1) + λ_m.
    pub fn monomial_entries(&self, l: usize, k: u32) -> Vec<i64> {
        let (c, shape) = &self.colors[l];
        (1..=k)
            .map(|m| c - m as i64 + 1 + shape.part(m) as i64)
            .collect()
    }
}

fn entry(c: i64, shape: &Partition, m: u32) -> i64 {
    c - m as i64 + 1 + shape.part(m) as i64
}

/// ψ(j) on one color: wedges j into the monomial. Returns the signed result
/// or None when j is already present.
fn wedge(c: i64, shape: &Partition, j: i64) -> Option<(i64, i64, Partition)> {
    // s = number of entries above j; terminates since entries strictly
    // decrease and eventually run through every integer below c - len(λ).
    let mut m = 1u32;
    loop {
        let i_m = entry(c, shape, m);
        if i_m == j {
            return None;
        }
        if i_m < j {
            break;
        }
        m += 1;
    }
    let s = m - 1;
    let sign = if s.is_multiple_of(2) { 1 } else { -1 };
    // New parts: λ_k − 1 for k ≤ s, then j − c + s − 1, then the tail of λ.
    let mut parts: Vec<u32> = Vec::with_capacity(shape.len() as usize + 1);
    for k in 1..=s {
        parts.push(shape.part(k) - 1);
    }
    let inserted = j - c + s as i64 - 1;
    debug_assert!(inserted >= 0);
    parts.push(inserted as u32);
    for k in (s + 1)..=shape.len() {
        parts.push(shape.part(k));
    }
    Some((sign, c + 1, Partition::new(parts)))
}

/// ψ(j)* on one color: contracts j out of the monomial. Returns the signed
/// result or None when j does not occur.
fn contract(c: i64, shape: &Partition, j: i64) -> Option<(i64, i64, Partition)> {
    let mut m = 1u32;
    loop {
        let i_m = entry(c, shape, m);
        if i_m == j {
            break;
        }
        if i_m < j {
            return None;
        }
        m += 1;
    }
    let s = m;
    let sign = if (s - 1).is_multiple_of(2) { 1 } else { -1 };
    let mut parts: Vec<u32> = Vec::with_capacity(shape.len() as usize);
    for k in 1..s {
        parts.push(shape.part(k) + 1);
    }
    for k in (s + 1)..=(shape.len().max(s)) {
        parts.push(shape.part(k));
    }
    Some((sign, c - 1, Partition::new(parts)))
}

/// ψˡ(j) applied to a basis point. Other colors are untouched; generators of
/// different colors commute, so no cross-color sign appears.
pub fn psi(l: usize, j: i64, p: &FixedPoint) -> Option<(i64, FixedPoint)> {
    let (c, shape) = (&p.colors[l].0, &p.colors[l].1);
    wedge(*c, shape, j).map(|(sign, c2, shape2)| (sign, p.with_color(l, c2, shape2)))
}

/// ψˡ(j)* applied to a basis point; adjoint to `psi` for the orthonormal
/// basis pairing.
pub fn psi_star(l: usize, j: i64, p: &FixedPoint) -> Option<(i64, FixedPoint)> {
    let (c, shape) = (&p.colors[l].0, &p.colors[l].1);
    contract(*c, shape, j).map(|(sign, c2, shape2)| (sign, p.with_color(l, c2, shape2)))
}

/// Finitely-supported ℚ-linear combination of basis keys.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<K: Ord + Clone> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        let mut v = Self::zero();
        v.add_term(key, Rat::from_integer(BigInt::from(1)));
        v
    }

    pub fn add_term(&mut self, key: K, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &K) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Orthonormal-basis pairing ⟨u, v⟩ = Σ u_k v_k (bilinear, not
    /// sesquilinear).
    pub fn inner_product(&self, other: &Self) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in &self.terms {
            if let Some(d) = other.terms.get(k) {
                acc += c * d;
            }
        }
        acc
    }
}

impl LinComb<FixedPoint> {
    /// `[{"basis": "0:(2,1)|1:()", "coef": "p/q"}]` in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(p, c)| {
                serde_json::json!({"basis": p.to_string(), "coef": crate::poly::format_rational(c)})
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

/// Vector in the fermionic picture: combination of fixed points read as
/// r-colored semi-infinite monomials.
pub type FermionVector = LinComb<FixedPoint>;

/// Vector in the bosonic picture: the same labels read as charge-tagged
/// Schur tuples (q^{c¹}s_{λ¹}, …, q^{cʳ}s_{λʳ}).
pub type BosonVector = LinComb<FixedPoint>;

/// ψˡ(j) extended linearly.
pub fn psi_apply(l: usize, j: i64, v: &FermionVector) -> FermionVector {
    let mut out = FermionVector::zero();
    for (p, coef) in v.iter() {
        if let Some((sign, q)) = psi(l, j, p) {
            out.add_term(q, coef * rat_int(sign));
        }
    }
    out
}

/// ψˡ(j)* extended linearly.
pub fn psi_star_apply(l: usize, j: i64, v: &FermionVector) -> FermionVector {
    let mut out = FermionVector::zero();
    for (p, coef) in v.iter() {
        if let Some((sign, q)) = psi_star(l, j, p) {
            out.add_term(q, coef * rat_int(sign));
        }
    }
    out
}

/// pˡ(n) on the bosonic picture:
///   n < 0: s_λ ↦ (1/|n|) Σ (−1)^w s_μ over border strips μ−λ of size |n|;
///   n > 0: the adjoint, via strip removal with the same coefficients;
///   n = 0: multiplication by the color-l charge (q ∂/∂q).
pub fn p_apply(l: usize, n: i64, v: &BosonVector) -> BosonVector {
    let mut out = BosonVector::zero();
    for (p, coef) in v.iter() {
        if n == 0 {
            out.add_term(p.clone(), coef * rat_int(p.charge(l)));
            continue;
        }
        let step = Rat::new(BigInt::from(1), BigInt::from(n.abs()));
        let strips = if n < 0 {
            add_border_strips(p.shape(l), (-n) as u32)
        } else {
            remove_border_strips(p.shape(l), n as u32)
        };
        for (mu, w) in strips {
            let sign = if w % 2 == 0 { 1 } else { -1 };
            out.add_term(
                p.with_color(l, p.charge(l), mu),
                coef * &step * rat_int(sign),
            );
        }
    }
    out
}

impl fmt::Display for FixedPoint {
    /// Per-color `c:(λ)` joined by `|`, e.g. `0:(2,1)|1:()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, shape)) in self.colors.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{}:{}", c, shape)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixedPointParseError {
    #[error("color {0}: missing ':' separator")]
    MissingColon(usize),
    #[error("color {0}: invalid charge")]
    InvalidCharge(usize),
    #[error("color {0}: {1}")]
    InvalidShape(usize, PartitionParseError),
    #[error("empty fixed point")]
    Empty,
}

impl FromStr for FixedPoint {
    type Err = FixedPointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut colors = Vec::new();
        for (idx, piece) in s.split('|').enumerate() {
            let (c_str, p_str) = piece
                .split_once(':')
                .ok_or(FixedPointParseError::MissingColon(idx))?;
            let c: i64 = c_str
                .trim()
                .parse()
                .map_err(|_| FixedPointParseError::InvalidCharge(idx))?;
            let shape: Partition = p_str
                .trim()
                .parse()
                .map_err(|e| FixedPointParseError::InvalidShape(idx, e))?;
            colors.push((c, shape));
        }
        if colors.is_empty() {
            return Err(FixedPointParseError::Empty);
        }
        Ok(FixedPoint::new(colors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn point1(c: i64, parts: &[u32]) -> FixedPoint {
        FixedPoint::new(vec![(c, pt(parts))])
    }

    #[test]
    fn monomial_entries_examples() {
        assert_eq!(point1(5, &[]).monomial_entries(0, 3), vec![5, 4, 3]);
        assert_eq!(point1(0, &[1]).monomial_entries(0, 2), vec![1, -1]);
        assert_eq!(point1(0, &[2, 2]).monomial_entries(0, 3), vec![2, 1, -2]);
    }

    #[test]
    fn entries_strictly_decrease_and_stabilize() {
        for n in 0..=5u64 {
            for lam in partitions_of(n) {
                let p = FixedPoint::new(vec![(-1, lam.clone())]);
                let k = lam.len() + 3;
                let e = p.monomial_entries(0, k);
                for w in e.windows(2) {
                    assert!(w[0] > w[1]);
                }
                // Beyond the length of λ the entries step down by one.
                assert_eq!(e[k as usize - 1], e[k as usize - 2] - 1);
            }
        }
    }

    #[test]
    fn psi_examples() {
        for c in [-2i64, 0, 3] {
            let vac = FixedPoint::vacuum(&[c]);
            assert_eq!(psi(0, c + 1, &vac), Some((1, FixedPoint::vacuum(&[c + 1]))));
            assert_eq!(psi(0, c, &vac), None);
            // ψ(c) on (c, (1)): insertion after i₁ = c+1, sign −1.
            assert_eq!(
                psi(0, c, &point1(c, &[1])),
                Some((-1, FixedPoint::vacuum(&[c + 1])))
            );
        }
    }

    #[test]
    fn psi_star_examples() {
        for c in [-2i64, 0, 3] {
            let vac = FixedPoint::vacuum(&[c]);
            assert_eq!(
                psi_star(0, c, &vac),
                Some((1, FixedPoint::vacuum(&[c - 1])))
            );
            assert_eq!(psi_star(0, c + 1, &vac), None);
            // Removing c−1 from entries [c+1, c−1, c−2, …] at position 2.
            assert_eq!(
                psi_star(0, c - 1, &point1(c, &[1])),
                Some((-1, point1(c - 1, &[2])))
            );
        }
    }

    #[test]
    fn charge_and_energy_bookkeeping() {
        // ψ(j) raises the charge by one and shifts energy by j − c − 1;
        // ψ(j)* lowers the charge and shifts energy by c − j.
        for c in [-2i64, 0, 3] {
            for n in 0..=5u64 {
                for lam in partitions_of(n) {
                    let p = FixedPoint::new(vec![(c, lam)]);
                    for j in (c - 7)..=(c + 7) {
                        if let Some((_, q)) = psi(0, j, &p) {
                            assert_eq!(q.charge(0), c + 1);
                            assert_eq!(q.energy() as i64, p.energy() as i64 + j - c - 1);
                        }
                        if let Some((_, q)) = psi_star(0, j, &p) {
                            assert_eq!(q.charge(0), c - 1);
                            assert_eq!(q.energy() as i64, p.energy() as i64 + c - j);
                        }
                    }
                }
            }
        }
    }

    fn basis_r1(charge: i64, max_energy: u64) -> Vec<FixedPoint> {
        (0..=max_energy)
            .flat_map(partitions_of)
            .map(|lam| FixedPoint::new(vec![(charge, lam)]))
            .collect()
    }

    #[test]
    fn clifford_relations_rank_one() {
        // {ψ(j), ψ(i)*} = δ_ij, {ψ(j), ψ(i)} = 0, ψ(j)² = 0 on every basis
        // vector of energy ≤ 5 over the charge window [−3, 3].
        for c in -3i64..=3 {
            for p in basis_r1(c, 5) {
                let v = FermionVector::basis(p.clone());
                for j in (c - 3)..=(c + 4) {
                    for i in (c - 3)..=(c + 4) {
                        let a = psi_apply(0, j, &psi_star_apply(0, i, &v))
                            .add(&psi_star_apply(0, i, &psi_apply(0, j, &v)));
                        let expected = if i == j { v.clone() } else { FermionVector::zero() };
                        assert_eq!(a, expected, "{{ψ({j}),ψ({i})*}} on {p}");

                        let b = psi_apply(0, j, &psi_apply(0, i, &v))
                            .add(&psi_apply(0, i, &psi_apply(0, j, &v)));
                        assert!(b.is_zero(), "{{ψ({j}),ψ({i})}} on {p}");

                        let bs = psi_star_apply(0, j, &psi_star_apply(0, i, &v))
                            .add(&psi_star_apply(0, i, &psi_star_apply(0, j, &v)));
                        assert!(bs.is_zero(), "{{ψ({j})*,ψ({i})*}} on {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn cross_color_operators_commute() {
        let mut basis = Vec::new();
        for n1 in 0..=2u64 {
            for l1 in partitions_of(n1) {
                for n2 in 0..=2u64 {
                    for l2 in partitions_of(n2) {
                        basis.push(FixedPoint::new(vec![(0, l1.clone()), (-1, l2.clone())]));
                    }
                }
            }
        }
        for p in &basis {
            let v = FermionVector::basis(p.clone());
            for j in -2..=2 {
                for i in -3..=1 {
                    let ab = psi_apply(0, j, &psi_apply(1, i, &v));
                    let ba = psi_apply(1, i, &psi_apply(0, j, &v));
                    assert_eq!(ab, ba);
                    let ab = psi_apply(0, j, &psi_star_apply(1, i, &v));
                    let ba = psi_star_apply(1, i, &psi_apply(0, j, &v));
                    assert_eq!(ab, ba);
                }
            }
        }
    }

    #[test]
    fn p_apply_examples() {
        let s_empty = BosonVector::basis(FixedPoint::vacuum(&[4]));
        let p1 = p_apply(0, -1, &s_empty);
        assert_eq!(p1, BosonVector::basis(point1(4, &[1])));

        // p(−2) s_(1) = ½ (s_(3) − s_(1,1,1)).
        let s1 = BosonVector::basis(point1(0, &[1]));
        let got = p_apply(0, -2, &s1);
        let mut expected = BosonVector::zero();
        expected.add_term(point1(0, &[3]), Rat::new(BigInt::from(1), BigInt::from(2)));
        expected.add_term(
            point1(0, &[1, 1, 1]),
            Rat::new(BigInt::from(-1), BigInt::from(2)),
        );
        assert_eq!(got, expected);

        // p(0) multiplies by the charge.
        let v = BosonVector::basis(point1(-3, &[2, 1]));
        assert_eq!(p_apply(0, 0, &v), v.scale(&rat_int(-3)));
    }

    #[test]
    fn oscillator_relations_rank_one() {
        // [p(m), p(n)] = (1/m) δ_{m,−n} for 0 < |m|, |n| ≤ 4; single
        // applications are exact, so no truncation is involved.
        for p in basis_r1(0, 4) {
            let v = BosonVector::basis(p.clone());
            for m in [-4i64, -3, -2, -1, 1, 2, 3, 4] {
                for n in [-4i64, -3, -2, -1, 1, 2, 3, 4] {
                    let mn = p_apply(0, m, &p_apply(0, n, &v));
                    let nm = p_apply(0, n, &p_apply(0, m, &v));
                    let comm = mn.add(&nm.scale(&rat_int(-1)));
                    let expected = if m == -n {
                        v.scale(&Rat::new(BigInt::from(1), BigInt::from(m)))
                    } else {
                        BosonVector::zero()
                    };
                    assert_eq!(comm, expected, "[p({m}),p({n})] on {p}");
                }
            }
        }
    }

    #[test]
    fn adjointness_of_actions() {
        // ⟨ψ(j)u, v⟩ = ⟨u, ψ(j)*v⟩ and ⟨p(−n)u, v⟩ = ⟨u, p(n)v⟩ over basis
        // pairs drawn from neighbouring blocks.
        let us = basis_r1(0, 4);
        let vs = basis_r1(1, 6);
        for u in &us {
            let ub = FermionVector::basis(u.clone());
            for v in &vs {
                let vb = FermionVector::basis(v.clone());
                for j in -3..=4 {
                    assert_eq!(
                        psi_apply(0, j, &ub).inner_product(&vb),
                        ub.inner_product(&psi_star_apply(0, j, &vb))
                    );
                }
            }
        }
        let all6 = basis_r1(0, 6);
        for u in &all6 {
            let ub = BosonVector::basis(u.clone());
            for w in &all6 {
                let wb = BosonVector::basis(w.clone());
                for n in 1..=4i64 {
                    assert_eq!(
                        p_apply(0, -n, &ub).inner_product(&wb),
                        ub.inner_product(&p_apply(0, n, &wb))
                    );
                }
            }
        }
    }

    #[test]
    fn inner_product_orthonormality() {
        let a = FermionVector::basis(FixedPoint::vacuum(&[0, 1]));
        let b = FermionVector::basis(FixedPoint::vacuum(&[0, 2]));
        assert_eq!(a.inner_product(&a), rat_int(1));
        assert_eq!(a.inner_product(&b), rat_int(0));
    }

    #[test]
    fn text_format_round_trip() {
        let p = FixedPoint::new(vec![(0, pt(&[2, 1])), (1, Partition::empty())]);
        assert_eq!(p.to_string(), "0:(2,1)|1:()");
        assert_eq!("0:(2,1)|1:()".parse::<FixedPoint>().unwrap(), p);
        assert_eq!("-3:(4)".parse::<FixedPoint>().unwrap(), point1(-3, &[4]));
        assert!("0(2,1)".parse::<FixedPoint>().is_err());
        assert!("x:(2,1)".parse::<FixedPoint>().is_err());
    }

    #[test]
    fn vector_json_form() {
        let mut v = BosonVector::zero();
        v.add_term(point1(0, &[1]), Rat::new(BigInt::from(1), BigInt::from(2)));
        v.add_term(point1(0, &[3]), rat_int(-2));
        assert_eq!(
            v.to_json(),
            serde_json::json!([
                {"basis": "0:(3)", "coef": "-2"},
                {"basis": "0:(1)", "coef": "1/2"},
            ])
        );
    }
}
