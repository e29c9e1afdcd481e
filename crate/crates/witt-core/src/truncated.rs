//! The truncated polynomial algebra `B_n = k[x_1..x_n]/(x_1^p, ..., x_n^p)`.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::monomial::{monomials_of_degree_bounded, Monomial};
use crate::poly::Polynomial;
use std::sync::Arc;

/// Size cap: the monomial basis of `B_n` must stay within `p^n <= 81`.
pub const MAX_TRUNCATED_DIM: usize = 81;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedAlgebra {
    field: Arc<Field>,
    nvars: usize,
    basis: Vec<Monomial>,
}

impl TruncatedAlgebra {
    /// `B_n` over `field` (usually `F_p`, extensions allowed for base change).
    pub fn new(field: Arc<Field>, nvars: usize) -> Result<Self> {
        let p = field.characteristic();
        let dim = (p as usize).checked_pow(nvars as u32).unwrap_or(usize::MAX);
        if dim > MAX_TRUNCATED_DIM {
            return Err(Error::Budget(format!(
                "B_{nvars} at p = {p} has dimension {dim} > {MAX_TRUNCATED_DIM}"
            )));
        }
        let mut basis = Vec::with_capacity(dim);
        let max_total = nvars as u32 * (p - 1);
        for d in 0..=max_total {
            basis.extend(monomials_of_degree_bounded(nvars, d, p as u8));
        }
        debug_assert_eq!(basis.len(), dim);
        Ok(TruncatedAlgebra {
            field,
            nvars,
            basis,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Monomial basis in ascending graded-lex order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.basis.binary_search(m).ok()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field.clone(), self.nvars)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.field.clone(), self.nvars)
    }

    pub fn variable(&self, i: usize) -> Polynomial {
        Polynomial::variable(self.field.clone(), self.nvars, i)
    }

    /// Reduce a free polynomial: drop every monomial with an exponent >= p.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let p = self.characteristic() as u8;
        Polynomial::from_terms(
            self.field.clone(),
            self.nvars,
            f.terms()
                .filter(|(m, _)| m.bounded_by(p))
                .map(|(m, c)| (m.clone(), *c)),
        )
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul_with_truncation(b, Some(self.characteristic() as u8))
    }

    /// Coefficient vector over the monomial basis.
    pub fn to_vector(&self, f: &Polynomial) -> Result<Vec<Elt>> {
        let mut v = vec![self.field.zero(); self.dim()];
        for (m, c) in f.terms() {
            match self.basis_index(m) {
                Some(i) => v[i] = *c,
                None => {
                    return Err(Error::DimensionMismatch(
                        "polynomial is not reduced for this truncated algebra".into(),
                    ))
                }
            }
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Elt]) -> Result<Polynomial> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok(Polynomial::from_terms(
            self.field.clone(),
            self.nvars,
            self.basis
                .iter()
                .zip(v)
                .map(|(m, c)| (m.clone(), *c)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::sample::Stream;

    #[test]
    fn dimensions() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(TruncatedAlgebra::new(f2.clone(), 1).unwrap().dim(), 2);
        assert_eq!(TruncatedAlgebra::new(f2.clone(), 2).unwrap().dim(), 4);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(TruncatedAlgebra::new(f3, 2).unwrap().dim(), 9);
        // p^n budget: B_5 at p = 3 would have dimension 243.
        assert!(TruncatedAlgebra::new(f2, 7).is_err());
    }

    #[test]
    fn multiplication_is_associative_and_commutative_on_random_triples() {
        let f = Field::prime(3).unwrap();
        let alg = TruncatedAlgebra::new(f.clone(), 2).unwrap();
        let mut stream = Stream::new(5, 900);
        for _ in 0..50 {
            let rand_poly = |s: &mut Stream| {
                Polynomial::from_terms(
                    f.clone(),
                    2,
                    alg.basis().iter().map(|m| (m.clone(), s.elt(&f))),
                )
            };
            let a = rand_poly(&mut stream);
            let b = rand_poly(&mut stream);
            let c = rand_poly(&mut stream);
            let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            assert_eq!(alg.mul(&a, &b).unwrap(), alg.mul(&b, &a).unwrap());
        }
    }

    #[test]
    fn basis_vector_roundtrip() {
        let f = Field::prime(2).unwrap();
        let alg = TruncatedAlgebra::new(f.clone(), 2).unwrap();
        let x1 = alg.variable(0);
        let x2 = alg.variable(1);
        let prod = alg.mul(&x1, &x2).unwrap();
        let v = alg.to_vector(&prod).unwrap();
        assert_eq!(alg.from_vector(&v).unwrap(), prod);
        // x1 * x1 = 0 in B_2 at p = 2.
        assert!(alg.mul(&x1, &x1).unwrap().is_zero());
    }
}
