//! Independent symmetric-function oracle used by the acceptance suite.
//!
//! Symmetric functions of degree d are represented faithfully as honest
//! polynomials in d variables: Schur polynomials are built by enumerating
//! semistandard tableaux, power sums directly. Nothing here touches the
//! border-strip code under test.

use std::collections::HashMap;

use fockgeom::partition::Partition;

/// Sparse polynomial: exponent vector -> integer coefficient.
pub type Poly = HashMap<Vec<u16>, i64>;

pub fn power_sum(n: u32, vars: usize) -> Poly {
    let mut out = Poly::new();
    for i in 0..vars {
        let mut exp = vec![0u16; vars];
        exp[i] = n as u16;
        out.insert(exp, 1);
    }
    out
}

/// s_λ(x_1..x_vars) as a sum of monomials x^{weight(T)} over semistandard
/// tableaux T of shape λ: rows weakly increase, columns strictly increase.
pub fn schur_polynomial(shape: &Partition, vars: usize) -> Poly {
    let rows: Vec<usize> = shape.parts().iter().map(|&p| p as usize).collect();
    let mut out = Poly::new();
    if rows.is_empty() {
        out.insert(vec![0u16; vars], 1);
        return out;
    }
    let mut tableau: Vec<Vec<u16>> = rows.iter().map(|&len| vec![0u16; len]).collect();
    fill(&mut tableau, &rows, 0, 0, vars as u16, &mut out);
    out
}

fn fill(
    tableau: &mut Vec<Vec<u16>>,
    rows: &[usize],
    i: usize,
    j: usize,
    vars: u16,
    out: &mut Poly,
) {
    if i == rows.len() {
        let mut exp = vec![0u16; vars as usize];
        for row in tableau.iter() {
            for &v in row {
                exp[(v - 1) as usize] += 1;
            }
        }
        *out.entry(exp).or_insert(0) += 1;
        return;
    }
    let (next_i, next_j) = if j + 1 == rows[i] { (i + 1, 0) } else { (i, j + 1) };
    let left = if j > 0 { tableau[i][j - 1] } else { 1 };
    let above = if i > 0 { tableau[i - 1][j] + 1 } else { 1 };
    for v in left.max(above)..=vars {
        tableau[i][j] = v;
        fill(tableau, rows, next_i, next_j, vars, out);
    }
    tableau[i][j] = 0;
}

pub fn multiply(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let exp: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(exp).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn add_scaled(acc: &mut Poly, other: &Poly, scale: i64) {
    for (e, c) in other {
        let entry = acc.entry(e.clone()).or_insert(0);
        *entry += c * scale;
    }
    acc.retain(|_, c| *c != 0);
}
