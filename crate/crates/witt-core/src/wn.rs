//! The Jacobson-Witt algebra `W_n = Der B_n`.

use crate::derivation::{Ambient, Derivation};
use crate::error::Result;
use crate::field::Field;
use crate::lie::RestrictedLieAlgebra;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::truncated::TruncatedAlgebra;

/// `W_n` with its derivation basis `x^{(a)} d_i` and computed structure
/// tables. Basis order: monomials `a` ascending in graded lex, inner index
/// `i`; so for n = 1 the basis starts `d_1, x_1 d_1, x_1^2 d_1, ...`.
#[derive(Clone, Debug)]
pub struct WnAlgebra {
    n: usize,
    p: u32,
    algebra: TruncatedAlgebra,
    lie: RestrictedLieAlgebra,
    basis: Vec<Derivation>,
}

/// Build `W_n` at characteristic `p`; the tables come from the derivation
/// realization and pass `verify_restricted`.
pub fn build_wn(n: usize, p: u32) -> Result<WnAlgebra> {
    let field = Field::prime(p)?;
    let algebra = TruncatedAlgebra::new(field.clone(), n)?;
    let ambient = Ambient::truncated(algebra.clone());
    let mut basis = Vec::with_capacity(n * algebra.dim());
    let mut labels = Vec::with_capacity(n * algebra.dim());
    for mono in algebra.basis() {
        for i in 0..n {
            basis.push(partial_scaled(&ambient, mono, i)?);
            labels.push(label_for(mono, i));
        }
    }
    let lie = RestrictedLieAlgebra::from_derivations(labels, basis.clone())?;
    Ok(WnAlgebra {
        n,
        p,
        algebra,
        lie,
        basis,
    })
}

fn partial_scaled(ambient: &Ambient, mono: &Monomial, i: usize) -> Result<Derivation> {
    let field = ambient.field().clone();
    let nvars = ambient.nvars();
    let images = (0..nvars)
        .map(|j| {
            if j == i {
                Polynomial::from_term(field.clone(), nvars, mono.clone(), field.one())
            } else {
                Polynomial::zero(field.clone(), nvars)
            }
        })
        .collect();
    Derivation::new(ambient.clone(), images)
}

fn label_for(mono: &Monomial, i: usize) -> String {
    if mono.degree() == 0 {
        return format!("d{}", i + 1);
    }
    let mut parts = Vec::new();
    for (j, &e) in mono.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", j + 1)),
            e => parts.push(format!("x{}^{}", j + 1, e)),
        }
    }
    format!("{}*d{}", parts.join("*"), i + 1)
}

impl WnAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn lie(&self) -> &RestrictedLieAlgebra {
        &self.lie
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    /// The derivation with the given coordinates (over any extension of
    /// the base field): `sum_k c_k * basis_k` acting on `B_n` over that
    /// extension.
    pub fn derivation_at(
        &self,
        field: &std::sync::Arc<Field>,
        coords: &[crate::field::Elt],
    ) -> Result<Derivation> {
        use crate::error::Error;
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for dim {}",
                coords.len(),
                self.dim()
            )));
        }
        let ext_algebra = TruncatedAlgebra::new(field.clone(), self.n)?;
        let ambient = Ambient::truncated(ext_algebra);
        let mut acc = Derivation::zero(ambient.clone());
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let images = self.basis[k]
                .images()
                .iter()
                .map(|img| Ok(img.embed_into(field.clone())?.scale(*c)))
                .collect::<Result<Vec<_>>>()?;
            acc = acc.add(&Derivation::new(ambient.clone(), images)?)?;
        }
        Ok(acc)
    }
}
