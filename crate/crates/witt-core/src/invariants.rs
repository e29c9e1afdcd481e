//! Bounded-degree invariant rings by exact linear solve, generation and
//! freeness checks against the Frobenius subalgebra.

use crate::action::LieAction;
use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::linalg::{graded_kernel, poly_to_vector, GradedSubspace, Matrix};
use crate::monomial::{monomials_of_degree, monomials_up_to, Monomial};
use crate::par;
use crate::poly::Polynomial;
use std::sync::Arc;

/// Refuse solves whose homogeneous component has more monomials than this.
pub const MAX_DEGREE_SPACE: usize = 20_000;

/// Per-degree invariants of an action, in canonical echelon bases.
///
/// For degree-preserving actions block `d` is exactly the space of
/// degree-`d` homogeneous invariants. Otherwise the solver runs on the
/// filtered space of degree `<= max_degree` and block `d` collects a
/// canonical set of invariants whose leading monomial has degree `d`
/// (so the counts are the jumps of the filtration).
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub max_degree: u32,
    pub graded: bool,
    pub blocks: Vec<Vec<Polynomial>>,
}

impl InvariantBasis {
    pub fn degree_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Post-hoc check that every basis element is killed by the action.
    pub fn verify(&self, action: &LieAction) -> Result<()> {
        for block in &self.blocks {
            for f in block {
                for d in action.rho() {
                    if !d.apply(f)?.is_zero() {
                        return Err(Error::Structure(
                            "claimed invariant is not killed by the action".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn budget_check(nvars: usize, degree: u32) -> Result<()> {
    let count = monomials_of_degree(nvars, degree).len();
    if count > MAX_DEGREE_SPACE {
        return Err(Error::Budget(format!(
            "degree-{degree} space in {nvars} variables has {count} monomials \
             (limit {MAX_DEGREE_SPACE})"
        )));
    }
    Ok(())
}

/// Matrix of a derivation restricted to the degree-`d` homogeneous space
/// (valid when the action is degree-preserving).
fn operator_on_degree(action: &LieAction, op: usize, degree: u32) -> Result<Matrix> {
    let field = action.field().clone();
    let monomials = monomials_of_degree(action.nvars(), degree);
    let mut out = Matrix::zeros(field.clone(), monomials.len(), monomials.len());
    for (c, m) in monomials.iter().enumerate() {
        let image = action.rho()[op].apply(&Polynomial::from_term(
            field.clone(),
            action.nvars(),
            m.clone(),
            field.one(),
        ))?;
        let v = poly_to_vector(&image, &monomials)?;
        for (r, val) in v.into_iter().enumerate() {
            if !val.is_zero() {
                out.set(r, c, val);
            }
        }
    }
    Ok(out)
}

/// Canonical basis of the degree-`d` homogeneous invariants of a
/// degree-preserving action: the joint kernel of all `rho(e_j)` on the
/// degree-`d` monomial space.
pub fn invariants_of_degree(action: &LieAction, degree: u32) -> Result<GradedSubspace> {
    if !action.is_degree_preserving() {
        return Err(Error::Precondition(
            "homogeneous solving needs a degree-preserving action".into(),
        ));
    }
    budget_check(action.nvars(), degree)?;
    let ops = (0..action.lie().dim())
        .map(|j| operator_on_degree(action, j, degree))
        .collect::<Result<Vec<_>>>()?;
    graded_kernel(action.field().clone(), action.nvars(), degree, &ops)
}

/// The joint kernel of all `rho(e_j)` on polynomials of degree `<= max`,
/// solved degree by degree when the action preserves degree, and on the
/// whole filtered space otherwise.
pub fn invariants_up_to_degree(action: &LieAction, max_degree: u32) -> Result<InvariantBasis> {
    budget_check(action.nvars(), max_degree)?;
    if action.is_degree_preserving() {
        let degrees: Vec<u32> = (0..=max_degree).collect();
        let spaces = par::map_ordered(degrees, |d| invariants_of_degree(action, d));
        let mut blocks = Vec::with_capacity(max_degree as usize + 1);
        for space in spaces {
            blocks.push(space?.basis_polynomials());
        }
        return Ok(InvariantBasis {
            max_degree,
            graded: true,
            blocks,
        });
    }
    filtered_invariants(action, max_degree)
}

/// Filtered solve: kernel over all monomials of degree `<= max`, echelonized
/// against descending graded lex so each basis row is classified by the
/// degree of its leading monomial.
fn filtered_invariants(action: &LieAction, max_degree: u32) -> Result<InvariantBasis> {
    let field = action.field().clone();
    let nvars = action.nvars();
    // Descending order: largest monomial first.
    let mut domain = monomials_up_to(nvars, max_degree);
    domain.reverse();
    // Image monomials: apply can raise degree by (max image degree - 1).
    let raise = action
        .rho()
        .iter()
        .flat_map(|d| d.images().iter().filter_map(|p| p.degree()))
        .max()
        .unwrap_or(1)
        .saturating_sub(1);
    let image_monomials = monomials_up_to(nvars, max_degree + raise);
    let mut stack = Vec::new();
    for d in action.rho() {
        let mut op = Matrix::zeros(field.clone(), image_monomials.len(), domain.len());
        for (c, m) in domain.iter().enumerate() {
            let image = d.apply(&Polynomial::from_term(
                field.clone(),
                nvars,
                m.clone(),
                field.one(),
            ))?;
            let v = poly_to_vector(&image, &image_monomials)?;
            for (r, val) in v.into_iter().enumerate() {
                if !val.is_zero() {
                    op.set(r, c, val);
                }
            }
        }
        stack.push(op);
    }
    let kernel = Matrix::vstack(&stack)?.kernel_basis();
    let mut blocks: Vec<Vec<Polynomial>> = vec![Vec::new(); max_degree as usize + 1];
    for r in 0..kernel.rows() {
        let poly = Polynomial::from_terms(
            field.clone(),
            nvars,
            domain
                .iter()
                .zip(kernel.row(r))
                .map(|(m, c)| (m.clone(), *c)),
        );
        let lead = poly.degree().unwrap_or(0) as usize;
        blocks[lead].push(poly);
    }
    Ok(InvariantBasis {
        max_degree,
        graded: false,
        blocks,
    })
}

/// One row of the graded generation comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationRow {
    pub degree: u32,
    pub dim_invariants: usize,
    pub dim_generated: usize,
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub rows: Vec<GenerationRow>,
    /// True when the two dimensions agree in every degree up to the bound.
    pub generated: bool,
}

fn require_invariant(action: &LieAction, f: &Polynomial) -> Result<()> {
    for d in action.rho() {
        if !d.apply(f)?.is_zero() {
            return Err(Error::NotInvariant(format!(
                "`{}`",
                f.format_with(action.var_scheme())
            )));
        }
    }
    Ok(())
}

/// Spanning vectors of the degree-`d` piece of the subalgebra generated by
/// all p-th powers and the homogeneous `f_i`: products
/// `(monomial)^p * prod f_i^{a_i}` of total degree `d`, exponents capped by
/// the degree only.
fn generated_spanning_vectors(
    field: &Arc<Field>,
    nvars: usize,
    p: u32,
    f_list: &[Polynomial],
    degree: u32,
    monomials: &[Monomial],
) -> Result<Vec<Vec<Elt>>> {
    let degrees: Vec<u32> = f_list.iter().map(|f| f.degree().unwrap_or(0)).collect();
    let mut vectors = Vec::new();
    let mut exps = vec![0u32; f_list.len()];
    loop {
        let used: u32 = exps.iter().zip(&degrees).map(|(&a, &dg)| a * dg).sum();
        if used <= degree {
            let rem = degree - used;
            if rem.is_multiple_of(p) {
                let mut base = Polynomial::one(field.clone(), nvars);
                for (f, &a) in f_list.iter().zip(&exps) {
                    for _ in 0..a {
                        base = base.mul(f)?;
                    }
                }
                if !base.is_zero() {
                    for m in monomials_of_degree(nvars, rem / p) {
                        let prod = base.mul_term(&m.pow(p as u8), field.one(), None);
                        vectors.push(poly_to_vector(&prod, monomials)?);
                    }
                }
            }
        }
        // Next exponent tuple; zero or constant generators never advance
        // (they add nothing to the span and would not terminate).
        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(vectors);
            }
            if degrees[i] == 0 {
                i += 1;
                continue;
            }
            exps[i] += 1;
            let used: u32 = exps.iter().zip(&degrees).map(|(&a, &dg)| a * dg).sum();
            if used <= degree {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Degreewise comparison of the invariant ring with the subalgebra
/// generated by p-th powers and the given homogeneous invariants.
pub fn check_generation(
    action: &LieAction,
    f_list: &[Polynomial],
    max_degree: u32,
) -> Result<GenerationReport> {
    if !action.is_degree_preserving() {
        return Err(Error::Precondition(
            "the graded generation comparison needs a degree-preserving action".into(),
        ));
    }
    for f in f_list {
        require_invariant(action, f)?;
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous(format!(
                "`{}`",
                f.format_with(action.var_scheme())
            )));
        }
    }
    let inv = invariants_up_to_degree(action, max_degree)?;
    let field = action.field().clone();
    let p = field.characteristic();
    let degrees: Vec<u32> = (0..=max_degree).collect();
    let gen_dims = par::map_ordered(degrees, |d| -> Result<usize> {
        let monomials = monomials_of_degree(action.nvars(), d);
        let vectors =
            generated_spanning_vectors(&field, action.nvars(), p, f_list, d, &monomials)?;
        if vectors.is_empty() {
            return Ok(0);
        }
        Ok(Matrix::from_rows(field.clone(), vectors)?.rank())
    });
    let mut rows = Vec::with_capacity(max_degree as usize + 1);
    let mut generated = true;
    for (d, gen_dim) in gen_dims.into_iter().enumerate() {
        let dim_generated = gen_dim?;
        let dim_invariants = inv.blocks[d].len();
        if dim_generated > dim_invariants {
            return Err(Error::Structure(format!(
                "generated dimension exceeds invariant dimension in degree {d}"
            )));
        }
        generated &= dim_generated == dim_invariants;
        rows.push(GenerationRow {
            degree: d as u32,
            dim_invariants,
            dim_generated,
        });
    }
    Ok(GenerationReport { rows, generated })
}

#[derive(Clone, Debug)]
pub struct MonomialFreeness {
    pub independent: bool,
    /// Degrees where a dependence (or a repeated/zero product) showed up.
    pub failing_degrees: Vec<u32>,
}

/// Checks that the `p^n` products `f^a` (all exponents below p), multiplied
/// by p-th powers of monomials, stay linearly independent in every degree
/// up to the bound: the basis property of the generators over the
/// Frobenius subalgebra.
pub fn freeness_monomial_check(
    field: &Arc<Field>,
    nvars: usize,
    f_list: &[Polynomial],
    max_degree: u32,
) -> Result<MonomialFreeness> {
    budget_check(nvars, max_degree)?;
    let p = field.characteristic();
    let degrees: Vec<u32> = f_list.iter().map(|f| f.degree().unwrap_or(0)).collect();
    for f in f_list {
        if !f.is_homogeneous() {
            return Err(Error::NotHomogeneous(format!(
                "`{}`",
                f.format_with(crate::poly::VarScheme::X1)
            )));
        }
    }
    let mut failing = Vec::new();
    for d in 0..=max_degree {
        let monomials = monomials_of_degree(nvars, d);
        let mut vectors = Vec::new();
        // All exponent tuples with a_i < p.
        let count = (p as usize).pow(f_list.len() as u32);
        for idx in 0..count {
            let mut rest = idx;
            let mut exps = vec![0u32; f_list.len()];
            for e in exps.iter_mut() {
                *e = (rest % p as usize) as u32;
                rest /= p as usize;
            }
            let used: u32 = exps.iter().zip(&degrees).map(|(&a, &dg)| a * dg).sum();
            if used > d || !(d - used).is_multiple_of(p) {
                continue;
            }
            let mut base = Polynomial::one(field.clone(), nvars);
            for (f, &a) in f_list.iter().zip(&exps) {
                for _ in 0..a {
                    base = base.mul(f)?;
                }
            }
            for m in monomials_of_degree(nvars, (d - used) / p) {
                let prod = base.mul_term(&m.pow(p as u8), field.one(), None);
                vectors.push(poly_to_vector(&prod, &monomials)?);
            }
        }
        if vectors.is_empty() {
            continue;
        }
        let countv = vectors.len();
        let rank = Matrix::from_rows(field.clone(), vectors)?.rank();
        if rank < countv {
            failing.push(d);
        }
    }
    Ok(MonomialFreeness {
        independent: failing.is_empty(),
        failing_degrees: failing,
    })
}

/// True when the matrix of `D` lies in the span of the matrices of
/// `D^p, ..., D^{p^n}`; guaranteed whenever `psi_0(D)` is nonzero.
pub fn semisimple_span_check(d: &crate::derivation::Derivation) -> Result<bool> {
    use crate::derivation::Ambient;
    let Ambient::Truncated(alg) = d.ambient() else {
        return Err(Error::Precondition(
            "span membership is checked on a truncated algebra".into(),
        ));
    };
    let n = alg.nvars();
    let field = alg.field().clone();
    let flat = |m: &Matrix| -> Vec<Elt> { (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect() };
    let target = flat(&d.matrix_on_truncated()?);
    let mut rows = Vec::with_capacity(n);
    let mut power = d.clone();
    for _ in 0..n {
        power = power.p_power()?;
        rows.push(flat(&power.matrix_on_truncated()?));
    }
    let span = Matrix::from_rows(field.clone(), rows)?;
    let with_target = Matrix::from_rows(field, vec![target])?;
    span.row_space_contains(&with_target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{adjoint_action, LieAction};
    use crate::derivation::{Ambient, Derivation};
    use crate::lie::RestrictedLieAlgebra;
    use crate::poly::VarScheme;
    use crate::psi::char_poly_invariants_symbolic;
    use crate::truncated::TruncatedAlgebra;
    use crate::wn::build_wn;

    fn adjoint(n: usize, p: u32) -> LieAction {
        adjoint_action(&build_wn(n, p).unwrap()).unwrap()
    }

    fn trivial_action(p: u32, nvars: usize) -> LieAction {
        // One-dimensional algebra acting by zero.
        let lie =
            RestrictedLieAlgebra::new(p, vec!["e_0".into()], vec![vec![vec![0]]], vec![vec![0]])
                .unwrap();
        let field = Field::prime(p).unwrap();
        let rho = vec![Derivation::zero(Ambient::free(field.clone(), nvars))];
        LieAction::new(lie, field, nvars, rho, VarScheme::X1).unwrap()
    }

    #[test]
    fn w1_p2_low_degree_invariants() {
        let a = adjoint(1, 2);
        let inv = invariants_up_to_degree(&a, 2).unwrap();
        assert_eq!(inv.degree_dims(), vec![1, 1, 2]);
        // Degree 1: span{xi_1}; degree 2: span{xi_0^2, xi_1^2}.
        assert_eq!(inv.blocks[1][0].format_with(VarScheme::Xi0), "1*xi_1");
        let deg2: Vec<String> = inv.blocks[2]
            .iter()
            .map(|f| f.format_with(VarScheme::Xi0))
            .collect();
        assert_eq!(deg2, vec!["1*xi_1^2", "1*xi_0^2"]);
        inv.verify(&a).unwrap();
    }

    #[test]
    fn trivial_action_sees_everything() {
        let a = trivial_action(3, 2);
        let inv = invariants_up_to_degree(&a, 3).unwrap();
        // Full polynomial ring: dims 1, 2, 3, 4.
        assert_eq!(inv.degree_dims(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn psi_are_invariant() {
        for (n, p) in [(1usize, 2u32), (1, 3), (2, 2)] {
            let w = build_wn(n, p).unwrap();
            let a = adjoint_action(&w).unwrap();
            let psi = char_poly_invariants_symbolic(&w, false).unwrap();
            for f in &psi.psi {
                for d in a.rho() {
                    assert!(
                        d.apply(f).unwrap().is_zero(),
                        "psi not killed for W_{n} at p = {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn generation_w1_p2() {
        let w = build_wn(1, 2).unwrap();
        let a = adjoint_action(&w).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        let report = check_generation(&a, &psi.psi, 2).unwrap();
        assert!(report.generated);
        let dims: Vec<(usize, usize)> = report
            .rows
            .iter()
            .map(|r| (r.dim_invariants, r.dim_generated))
            .collect();
        assert_eq!(dims, vec![(1, 1), (1, 1), (2, 2)]);
    }

    #[test]
    fn empty_generators_fail_against_trivial_action() {
        let a = trivial_action(3, 1);
        let report = check_generation(&a, &[], 1).unwrap();
        // Invariants are everything; p-th powers have nothing in degree 1.
        assert!(!report.generated);
        assert_eq!(report.rows[1].dim_invariants, 1);
        assert_eq!(report.rows[1].dim_generated, 0);
    }

    #[test]
    fn non_invariant_generator_rejected() {
        let a = adjoint(1, 2);
        let f = Polynomial::variable(a.field().clone(), 2, 0); // xi_0
        assert!(matches!(
            check_generation(&a, &[f], 2),
            Err(Error::NotInvariant(_))
        ));
    }

    #[test]
    fn freeness_monomial_w1_p2() {
        let a = adjoint(1, 2);
        let f = a.field().clone();
        let xi1 = Polynomial::variable(f.clone(), 2, 1);
        let verdict = freeness_monomial_check(&f, 2, std::slice::from_ref(&xi1), 3).unwrap();
        assert!(verdict.independent);
        // A zero generator breaks independence.
        let verdict =
            freeness_monomial_check(&f, 2, &[xi1.clone(), Polynomial::zero(f.clone(), 2)], 3)
                .unwrap();
        assert!(!verdict.independent);
        // So does a duplicate.
        let verdict = freeness_monomial_check(&f, 2, &[xi1.clone(), xi1], 3).unwrap();
        assert!(!verdict.independent);
    }

    #[test]
    fn span_membership_examples() {
        let f = Field::prime(2).unwrap();
        let alg = TruncatedAlgebra::new(f.clone(), 1).unwrap();
        let ambient = Ambient::truncated(alg);
        let x = Polynomial::variable(f.clone(), 1, 0);
        let one = Polynomial::one(f.clone(), 1);
        let xd = Derivation::new(ambient.clone(), vec![x]).unwrap();
        let d = Derivation::new(ambient.clone(), vec![one]).unwrap();
        assert!(semisimple_span_check(&xd).unwrap());
        assert!(!semisimple_span_check(&d).unwrap());
        assert!(semisimple_span_check(&Derivation::zero(ambient)).unwrap());
    }

    #[test]
    fn nonzero_psi0_points_pass_span_check() {
        use crate::psi::char_poly_invariants_at;
        use crate::sample::{streams, Stream};
        let w = build_wn(1, 3).unwrap();
        let f9 = Field::extension(3, 2).unwrap();
        let mut stream = Stream::new(2, streams::SPAN_CHECK);
        let mut hits = 0;
        while hits < 25 {
            let coords = stream.point(&f9, w.dim());
            let psi = char_poly_invariants_at(&w, &f9, &coords).unwrap();
            if psi[0].is_zero() {
                continue;
            }
            hits += 1;
            let d = w.derivation_at(&f9, &coords).unwrap();
            assert!(semisimple_span_check(&d).unwrap());
        }
    }

    #[test]
    fn filtered_solver_buckets_by_leading_degree() {
        // D = d/dx on F_3[x] (not degree-preserving: image degree 0).
        // Its polynomial kernel in degrees <= 3 is spanned by 1 and x^3.
        let lie =
            RestrictedLieAlgebra::new(3, vec!["e_0".into()], vec![vec![vec![0]]], vec![vec![0]])
                .unwrap();
        let field = Field::prime(3).unwrap();
        let one = Polynomial::one(field.clone(), 1);
        let rho = vec![Derivation::new(Ambient::free(field.clone(), 1), vec![one]).unwrap()];
        let a = LieAction::new(lie, field, 1, rho, VarScheme::X1).unwrap();
        assert!(!a.is_degree_preserving());
        let inv = invariants_up_to_degree(&a, 3).unwrap();
        assert!(!inv.graded);
        assert_eq!(inv.degree_dims(), vec![1, 0, 0, 1]);
        assert_eq!(inv.blocks[3][0].format_with(VarScheme::X1), "1*x1^3");
        inv.verify(&a).unwrap();
    }
}
