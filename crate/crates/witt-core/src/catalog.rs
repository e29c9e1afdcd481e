//! Built-in algebras and actions addressable by name.
//!
//! Names: `W:<n>:<p>` (Jacobson-Witt with its adjoint action),
//! `torus:1:<p>` (one-dimensional torus, p-map fixing the generator),
//! `torus:2:2` (two-dimensional torus whose p-map swaps the basis),
//! `nil:1:<p>` (one-dimensional algebra with zero p-map), and
//! `counterexample:2.remark` (the sign action on `k[x]/(x^3)` at p = 3).

use crate::constant::{Automorphism, ConstantGroupAction, Target};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lie::RestrictedLieAlgebra;
use crate::poly::Polynomial;
use crate::wn::{build_wn, WnAlgebra};

pub enum CatalogEntry {
    /// A Jacobson-Witt algebra; its adjoint action is the attached action.
    Witt(WnAlgebra),
    /// A bare tabulated algebra (no canonical action).
    Lie(RestrictedLieAlgebra),
    /// A constant finite group action.
    Constant(ConstantGroupAction),
}

/// One-dimensional torus: `e^{[p]} = e`.
pub fn torus_line(p: u32) -> Result<RestrictedLieAlgebra> {
    RestrictedLieAlgebra::new(p, vec!["e_0".into()], vec![vec![vec![0]]], vec![vec![1]])
}

/// One-dimensional algebra with zero p-map: `e^{[p]} = 0`.
pub fn nil_line(p: u32) -> Result<RestrictedLieAlgebra> {
    RestrictedLieAlgebra::new(p, vec!["e_0".into()], vec![vec![vec![0]]], vec![vec![0]])
}

/// Two-dimensional abelian algebra over F_2 with `e_0^{[2]} = e_1` and
/// `e_1^{[2]} = e_0`: a torus that is not split over the prime field.
pub fn swap_torus() -> Result<RestrictedLieAlgebra> {
    RestrictedLieAlgebra::new(
        2,
        vec!["e_0".into(), "e_1".into()],
        vec![vec![vec![0, 0]; 2]; 2],
        vec![vec![0, 1], vec![1, 0]],
    )
}

/// The sign action on `k[x]/(x^3)` at p = 3: invariants `1, x^2`, and the
/// algebra is not free over them.
pub fn counterexample_action() -> Result<ConstantGroupAction> {
    let field = Field::prime(3)?;
    let target = Target::Quotient {
        field: field.clone(),
        nvars: 1,
        bounds: vec![3],
    };
    let sigma = Automorphism::from_images(vec![Polynomial::variable(field.clone(), 1, 0)
        .scale(field.from_int(-1))]);
    ConstantGroupAction::new(target, vec![sigma])
}

/// The sign action on the polynomial line `k[x]` at p = 3: gradedly free
/// of rank 2 over the invariants.
pub fn sign_line_action() -> Result<ConstantGroupAction> {
    let field = Field::prime(3)?;
    let target = Target::Poly {
        field: field.clone(),
        nvars: 1,
    };
    let sigma = Automorphism::from_images(vec![Polynomial::variable(field.clone(), 1, 0)
        .scale(field.from_int(-1))]);
    ConstantGroupAction::new(target, vec![sigma])
}

/// Resolve a catalog name.
pub fn resolve(name: &str) -> Result<CatalogEntry> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["W", n, p] => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad n in `{name}`")))?;
            let p: u32 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad p in `{name}`")))?;
            Ok(CatalogEntry::Witt(build_wn(n, p)?))
        }
        ["torus", "1", p] => {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad p in `{name}`")))?;
            Ok(CatalogEntry::Lie(torus_line(p)?))
        }
        ["torus", "2", "2"] => Ok(CatalogEntry::Lie(swap_torus()?)),
        ["nil", "1", p] => {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad p in `{name}`")))?;
            Ok(CatalogEntry::Lie(nil_line(p)?))
        }
        ["counterexample", "2.remark"] => {
            Ok(CatalogEntry::Constant(counterexample_action()?))
        }
        _ => Err(Error::InvalidInput(format!(
            "unknown catalog name `{name}`"
        ))),
    }
}
