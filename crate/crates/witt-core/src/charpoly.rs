//! Characteristic polynomials by two independent routes.
//!
//! [`berkowitz`] is division-free and works over any commutative ring, which
//! covers polynomial entries (the symbolic invariants) and dual numbers
//! (exact directional derivatives). [`charpoly_over_field`] runs a
//! Hessenberg reduction and only needs field entries; the two serve as
//! oracles for each other in tests.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use std::sync::Arc;

/// The minimal ring interface the division-free path needs.
pub trait CommRing {
    type El: Clone + PartialEq;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }
}

/// Field elements as a ring.
pub struct EltRing(pub Arc<Field>);

impl CommRing for EltRing {
    type El = Elt;
    fn zero(&self) -> Elt {
        self.0.zero()
    }
    fn one(&self) -> Elt {
        self.0.one()
    }
    fn add(&self, a: &Elt, b: &Elt) -> Elt {
        self.0.add(*a, *b)
    }
    fn neg(&self, a: &Elt) -> Elt {
        self.0.neg(*a)
    }
    fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        self.0.mul(*a, *b)
    }
    fn is_zero(&self, a: &Elt) -> bool {
        a.is_zero()
    }
}

/// Polynomial entries (no truncation): the symbolic route.
pub struct PolyRing {
    pub field: Arc<Field>,
    pub nvars: usize,
}

impl CommRing for PolyRing {
    type El = Polynomial;
    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field.clone(), self.nvars)
    }
    fn one(&self) -> Polynomial {
        Polynomial::one(self.field.clone(), self.nvars)
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.add(b).expect("ring elements share context")
    }
    fn neg(&self, a: &Polynomial) -> Polynomial {
        a.neg()
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(b).expect("ring elements share context")
    }
    fn is_zero(&self, a: &Polynomial) -> bool {
        a.is_zero()
    }
}

/// Dual numbers `F[eps]/(eps^2)` as `(value, slope)` pairs: the exact
/// first-order expansion that replaces finite differences in char p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Dual(pub Elt, pub Elt);

pub struct DualRing(pub Arc<Field>);

impl CommRing for DualRing {
    type El = Dual;
    fn zero(&self) -> Dual {
        Dual(self.0.zero(), self.0.zero())
    }
    fn one(&self) -> Dual {
        Dual(self.0.one(), self.0.zero())
    }
    fn add(&self, a: &Dual, b: &Dual) -> Dual {
        Dual(self.0.add(a.0, b.0), self.0.add(a.1, b.1))
    }
    fn neg(&self, a: &Dual) -> Dual {
        Dual(self.0.neg(a.0), self.0.neg(a.1))
    }
    fn mul(&self, a: &Dual, b: &Dual) -> Dual {
        Dual(
            self.0.mul(a.0, b.0),
            self.0.add(self.0.mul(a.0, b.1), self.0.mul(a.1, b.0)),
        )
    }
}

/// Coefficients of `det(t*I - M)`, constant term first, leading 1 last,
/// by the Samuelson-Berkowitz recursion (no divisions).
pub fn berkowitz<R: CommRing>(ring: &R, m: &[Vec<R::El>]) -> Vec<R::El> {
    let n = m.len();
    if n == 0 {
        return vec![ring.one()];
    }
    // Running char poly of the leading block, highest degree first:
    // start with t - m[0][0].
    let mut poly = vec![ring.one(), ring.neg(&m[0][0])];
    for k in 1..n {
        // Extend to the (k+1)x(k+1) principal block. With A the kxk block,
        // R the new row and C the new column, the Toeplitz column is
        // 1, -m[k][k], -(R C), -(R A C), -(R A^2 C), ...
        let a = |i: usize, j: usize| &m[i][j];
        let mut col = Vec::with_capacity(k + 2);
        col.push(ring.one());
        col.push(ring.neg(a(k, k)));
        let mut v: Vec<R::El> = (0..k).map(|i| a(i, k).clone()).collect();
        for step in 0..k {
            let mut dot = ring.zero();
            for j in 0..k {
                dot = ring.add(&dot, &ring.mul(a(k, j), &v[j]));
            }
            col.push(ring.neg(&dot));
            if step + 1 < k {
                let mut next = vec![ring.zero(); k];
                for (i, slot) in next.iter_mut().enumerate() {
                    let mut acc = ring.zero();
                    for j in 0..k {
                        acc = ring.add(&acc, &ring.mul(a(i, j), &v[j]));
                    }
                    *slot = acc;
                }
                v = next;
            }
        }
        // poly <- Toeplitz(col) * poly
        let mut next = vec![ring.zero(); poly.len() + 1];
        for (i, c) in col.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            for (j, p) in poly.iter().enumerate() {
                let idx = i + j;
                if idx < next.len() {
                    next[idx] = ring.add(&next[idx], &ring.mul(c, p));
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    poly
}

/// Char poly coefficients (constant first) over a field via Hessenberg
/// reduction and the last-column expansion recurrence.
pub fn charpoly_over_field(m: &Matrix) -> Result<Vec<Elt>> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("char poly of non-square".into()));
    }
    let n = m.rows();
    let f = m.field().clone();
    if n == 0 {
        return Ok(vec![f.one()]);
    }
    let mut h: Vec<Vec<Elt>> = (0..n).map(|r| m.row(r).to_vec()).collect();

    // Similarity reduction to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let mut pivot = None;
        for r in col + 1..n {
            if !h[r][col].is_zero() {
                pivot = Some(r);
                break;
            }
        }
        let Some(pr) = pivot else { continue };
        if pr != col + 1 {
            h.swap(pr, col + 1);
            for row in h.iter_mut() {
                row.swap(pr, col + 1);
            }
        }
        let inv = f.inv(h[col + 1][col])?;
        for r in col + 2..n {
            let factor = f.mul(h[r][col], inv);
            if factor.is_zero() {
                continue;
            }
            // row_r -= factor * row_{col+1};  col_{col+1} += factor * col_r
            for c in 0..n {
                let sub = f.mul(factor, h[col + 1][c]);
                h[r][c] = f.sub(h[r][c], sub);
            }
            for i in 0..n {
                let add = f.mul(factor, h[i][r]);
                h[i][col + 1] = f.add(h[i][col + 1], add);
            }
        }
    }

    // p_k = (t - H[k-1][k-1]) p_{k-1}
    //       - sum_i H[i][k-1] * (prod of subdiagonals below i) * p_i.
    let mut polys: Vec<Vec<Elt>> = vec![vec![f.one()]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut pk = vec![f.zero(); k + 1];
        for (i, &c) in prev.iter().enumerate() {
            pk[i + 1] = c;
        }
        let d = h[k - 1][k - 1];
        for (i, &c) in prev.iter().enumerate() {
            pk[i] = f.sub(pk[i], f.mul(d, c));
        }
        if k >= 2 {
            let mut prod = f.one();
            for i in (0..k - 1).rev() {
                prod = f.mul(prod, h[i + 1][i]);
                if prod.is_zero() {
                    break;
                }
                let coeff = f.mul(h[i][k - 1], prod);
                if coeff.is_zero() {
                    continue;
                }
                for (j, &c) in polys[i].iter().enumerate() {
                    pk[j] = f.sub(pk[j], f.mul(coeff, c));
                }
            }
        }
        polys.push(pk);
    }
    Ok(polys.pop().unwrap())
}
