//! Derivations of polynomial rings and truncated algebras.
//!
//! A derivation is stored by its generator images and extended everywhere
//! by the Leibniz rule. For `B_n` no compatibility check is needed:
//! `D(x_i^p) = p x_i^{p-1} D(x_i) = 0` holds identically in characteristic p.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::truncated::TruncatedAlgebra;
use std::sync::Arc;

/// The algebra a derivation acts on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Ambient {
    /// Free polynomial ring in `nvars` variables.
    Free { field: Arc<Field>, nvars: usize },
    /// Truncated algebra `B_n`.
    Truncated(TruncatedAlgebra),
}

impl Ambient {
    pub fn free(field: Arc<Field>, nvars: usize) -> Self {
        Ambient::Free { field, nvars }
    }

    pub fn truncated(alg: TruncatedAlgebra) -> Self {
        Ambient::Truncated(alg)
    }

    pub fn field(&self) -> &Arc<Field> {
        match self {
            Ambient::Free { field, .. } => field,
            Ambient::Truncated(alg) => alg.field(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Ambient::Free { nvars, .. } => *nvars,
            Ambient::Truncated(alg) => alg.nvars(),
        }
    }

    /// Exponent bound enforced by multiplication (`p` for `B_n`).
    pub fn truncation(&self) -> Option<u8> {
        match self {
            Ambient::Free { .. } => None,
            Ambient::Truncated(alg) => Some(alg.characteristic() as u8),
        }
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul_with_truncation(b, self.truncation())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    ambient: Ambient,
    images: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(ambient: Ambient, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != ambient.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                ambient.nvars()
            )));
        }
        for img in &images {
            if img.nvars() != ambient.nvars() || img.field() != ambient.field() {
                return Err(Error::DimensionMismatch(
                    "image outside the ambient algebra".into(),
                ));
            }
        }
        Ok(Derivation { ambient, images })
    }

    pub fn zero(ambient: Ambient) -> Self {
        let images = (0..ambient.nvars())
            .map(|_| Polynomial::zero(ambient.field().clone(), ambient.nvars()))
            .collect();
        Derivation { ambient, images }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }

    fn check_same_ambient(&self, other: &Derivation) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(
                "derivations on different algebras".into(),
            ));
        }
        Ok(())
    }

    /// Leibniz extension: exact `D(f)`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.nvars() != self.ambient.nvars() || f.field() != self.ambient.field() {
            return Err(Error::DimensionMismatch(
                "argument outside the ambient algebra".into(),
            ));
        }
        let field = self.ambient.field();
        let trunc = self.ambient.truncation();
        let mut out = Polynomial::zero(field.clone(), f.nvars());
        for (m, c) in f.terms() {
            for i in 0..f.nvars() {
                let e = m.exp(i);
                if e == 0 || self.images[i].is_zero() {
                    continue;
                }
                let lower = m.div_var(i).expect("exponent checked nonzero");
                let coeff = field.mul(*c, field.from_int(e as i64));
                let contrib = self.images[i].mul_term(&lower, coeff, trunc);
                out = out.add(&contrib)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.check_same_ambient(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            ambient: self.ambient.clone(),
            images,
        })
    }

    pub fn scale(&self, c: Elt) -> Derivation {
        Derivation {
            ambient: self.ambient.clone(),
            images: self.images.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Module action: the derivation `f * D`.
    pub fn scale_by_poly(&self, f: &Polynomial) -> Result<Derivation> {
        let images = self
            .images
            .iter()
            .map(|img| self.ambient.mul(f, img))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            ambient: self.ambient.clone(),
            images,
        })
    }

    /// Commutator `[D, E]`, with images `D(E(x_i)) - E(D(x_i))`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check_same_ambient(other)?;
        let images = (0..self.images.len())
            .map(|i| {
                self.apply(&other.images[i])?
                    .sub(&other.apply(&self.images[i])?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            ambient: self.ambient.clone(),
            images,
        })
    }

    /// `D^p` as a derivation: the image of each generator is `D` applied
    /// p times; as an operator this is the p-fold composition.
    pub fn p_power(&self) -> Result<Derivation> {
        let p = self.ambient.field().characteristic();
        let images = (0..self.images.len())
            .map(|i| {
                let mut acc =
                    Polynomial::variable(self.ambient.field().clone(), self.ambient.nvars(), i);
                for _ in 0..p {
                    acc = self.apply(&acc)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            ambient: self.ambient.clone(),
            images,
        })
    }

    /// Matrix in the monomial basis of `B_n` (ascending graded lex);
    /// entry `(r, c)` is the coefficient of basis monomial `r` in the
    /// image of basis monomial `c`.
    pub fn matrix_on_truncated(&self) -> Result<Matrix> {
        let Ambient::Truncated(alg) = &self.ambient else {
            return Err(Error::Precondition(
                "matrix form needs a truncated ambient algebra".into(),
            ));
        };
        let dim = alg.dim();
        let mut m = Matrix::zeros(alg.field().clone(), dim, dim);
        for (c, mono) in alg.basis().iter().enumerate() {
            let image = self.apply(&Polynomial::from_term(
                alg.field().clone(),
                alg.nvars(),
                mono.clone(),
                alg.field().one(),
            ))?;
            for (im, coeff) in image.terms() {
                let r = alg
                    .basis_index(im)
                    .expect("derivation image stays in the algebra");
                m.set(r, c, *coeff);
            }
        }
        Ok(m)
    }
}

/// Right-hand side of the module bracket rule:
/// `f[D, E] - E(f) D`, which must equal `bracket(f*D, E)`.
pub fn fd_bracket(f: &Polynomial, d: &Derivation, e: &Derivation) -> Result<Derivation> {
    let comm = d.bracket(e)?;
    let scaled = comm.scale_by_poly(f)?;
    let ef = e.apply(f)?;
    let correction = d.scale_by_poly(&ef)?;
    scaled.sub(&correction)
}

/// Right-hand side of the p-th power rule:
/// `f^p D^p + ((fD)^{p-1}(f)) D`, which must equal `p_power(f*D)`.
pub fn fd_power(f: &Polynomial, d: &Derivation) -> Result<Derivation> {
    let p = d.ambient().field().characteristic();
    let trunc = d.ambient().truncation();
    let fp = f.pow(p, trunc)?;
    let dp = d.p_power()?;
    let first = dp.scale_by_poly(&fp)?;
    // (fD)^{p-1}(f)
    let fd = d.scale_by_poly(f)?;
    let mut g = f.clone();
    for _ in 0..p - 1 {
        g = fd.apply(&g)?;
    }
    let second = d.scale_by_poly(&g)?;
    first.add(&second)
}

impl Derivation {
    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.add(&other.scale(self.ambient.field().neg(self.ambient.field().one())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::VarScheme;
    use crate::truncated::TruncatedAlgebra;

    fn b1(p: u32) -> Ambient {
        let f = Field::prime(p).unwrap();
        Ambient::truncated(TruncatedAlgebra::new(f, 1).unwrap())
    }

    fn parse(ambient: &Ambient, s: &str) -> Polynomial {
        Polynomial::parse(ambient.field().clone(), ambient.nvars(), VarScheme::X1, s).unwrap()
    }

    fn deriv(ambient: &Ambient, images: &[&str]) -> Derivation {
        let images = images.iter().map(|s| parse(ambient, s)).collect();
        Derivation::new(ambient.clone(), images).unwrap()
    }

    #[test]
    fn apply_power_rule() {
        // d/dx (x^2) = 2x in B_1 at p = 3.
        let a = b1(3);
        let d = deriv(&a, &["1"]);
        let x2 = parse(&a, "x1^2");
        assert_eq!(d.apply(&x2).unwrap(), parse(&a, "2*x1"));
        // Derivations kill constants.
        assert!(d.apply(&parse(&a, "1")).unwrap().is_zero());
    }

    #[test]
    fn apply_euler_operator() {
        // (x d/dx)(x) = x in B_1 at p = 2.
        let a = b1(2);
        let xd = deriv(&a, &["x1"]);
        assert_eq!(xd.apply(&parse(&a, "x1")).unwrap(), parse(&a, "x1"));
    }

    #[test]
    fn bracket_examples() {
        let a = b1(2);
        let d = deriv(&a, &["1"]);
        let xd = deriv(&a, &["x1"]);
        // [D, D] = 0.
        assert!(d.bracket(&d).unwrap().is_zero());
        // [d/dx, x d/dx] = d/dx.
        assert_eq!(d.bracket(&xd).unwrap(), d);
        // Antisymmetry.
        let ab = d.bracket(&xd).unwrap();
        let ba = xd.bracket(&d).unwrap();
        assert_eq!(ab, ba.scale(a.field().neg(a.field().one())));
    }

    #[test]
    fn p_power_examples() {
        let a = b1(2);
        let d = deriv(&a, &["1"]);
        let xd = deriv(&a, &["x1"]);
        // (d/dx)^2 = 0 and (x d/dx)^2 = x d/dx at p = 2.
        assert!(d.p_power().unwrap().is_zero());
        assert_eq!(xd.p_power().unwrap(), xd);
        assert!(Derivation::zero(a).p_power().unwrap().is_zero());
    }

    #[test]
    fn fd_bracket_hand_case() {
        // f = x, D = E = d/dx at p = 2: RHS = -d/dx = d/dx, and the direct
        // commutator [x d/dx, d/dx] agrees.
        let a = b1(2);
        let d = deriv(&a, &["1"]);
        let f = parse(&a, "x1");
        let rhs = fd_bracket(&f, &d, &d).unwrap();
        assert_eq!(rhs, d);
        let direct = d.scale_by_poly(&f).unwrap().bracket(&d).unwrap();
        assert_eq!(rhs, direct);
        // f = 1 reduces to the plain bracket.
        let one = parse(&a, "1");
        let xd = deriv(&a, &["x1"]);
        assert_eq!(fd_bracket(&one, &d, &xd).unwrap(), d.bracket(&xd).unwrap());
        // f = 0 gives the zero derivation.
        assert!(fd_bracket(&parse(&a, "0"), &d, &xd).unwrap().is_zero());
    }

    #[test]
    fn fd_power_hand_case() {
        // f = x, D = d/dx at p = 2: (fD)^2 = x d/dx by direct composition.
        let a = b1(2);
        let d = deriv(&a, &["1"]);
        let f = parse(&a, "x1");
        let rhs = fd_power(&f, &d).unwrap();
        let direct = d.scale_by_poly(&f).unwrap().p_power().unwrap();
        assert_eq!(rhs, direct);
        assert_eq!(rhs, deriv(&a, &["x1"]));
        // f = 1 reduces to D^p; f = 0 gives zero.
        let one = parse(&a, "1");
        assert_eq!(fd_power(&one, &d).unwrap(), d.p_power().unwrap());
        assert!(fd_power(&parse(&a, "0"), &d).unwrap().is_zero());
    }

    #[test]
    fn matrix_forms() {
        let a = b1(2);
        let d = deriv(&a, &["1"]);
        let xd = deriv(&a, &["x1"]);
        let f = a.field();
        // Basis {1, x}: x d/dx has matrix [[0,0],[0,1]], d/dx has [[0,1],[0,0]].
        let mx = xd.matrix_on_truncated().unwrap();
        assert_eq!(
            (mx.get(0, 0), mx.get(0, 1), mx.get(1, 0), mx.get(1, 1)),
            (f.zero(), f.zero(), f.zero(), f.one())
        );
        let md = d.matrix_on_truncated().unwrap();
        assert_eq!(
            (md.get(0, 0), md.get(0, 1), md.get(1, 0), md.get(1, 1)),
            (f.zero(), f.one(), f.zero(), f.zero())
        );
        assert!(Derivation::zero(a)
            .matrix_on_truncated()
            .unwrap()
            .rank()
            == 0);
    }

    #[test]
    fn matrix_respects_brackets() {
        // matrix([D, E]) = [matrix(D), matrix(E)] on B_2 at p = 2.
        let f = Field::prime(2).unwrap();
        let a = Ambient::truncated(TruncatedAlgebra::new(f.clone(), 2).unwrap());
        let d = deriv(&a, &["x2", "1"]);
        let e = deriv(&a, &["x1*x2", "x1"]);
        let lhs = d.bracket(&e).unwrap().matrix_on_truncated().unwrap();
        let md = d.matrix_on_truncated().unwrap();
        let me = e.matrix_on_truncated().unwrap();
        let rhs = md.mul(&me).unwrap().sub(&me.mul(&md).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
