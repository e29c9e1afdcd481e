//! Actions of restricted Lie algebras on affine coordinate rings:
//! tangent maps, stabilizers, and sampled regular-locus data.

use crate::derivation::{Ambient, Derivation};
use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::lie::{basis_vec, RestrictedLieAlgebra};
use crate::linalg::Matrix;
use crate::par;
use crate::poly::{Polynomial, VarScheme};
use crate::sample::{streams, Stream};
use crate::wn::WnAlgebra;
use std::fmt::Write as _;
use std::sync::Arc;

/// A homomorphism of restricted Lie algebras into the derivations of a
/// polynomial ring: checked at construction on brackets and p-th powers.
#[derive(Clone, Debug)]
pub struct LieAction {
    lie: RestrictedLieAlgebra,
    field: Arc<Field>,
    nvars: usize,
    rho: Vec<Derivation>,
    var_scheme: VarScheme,
}

/// A closed point: coordinates over `F_{p^e}`.
pub type RationalPoint = Vec<Elt>;

#[derive(Clone, Debug)]
pub struct StabilizerResult {
    pub point: RationalPoint,
    /// Kernel basis in canonical echelon form, coordinates in the algebra.
    pub kernel_basis: Matrix,
    pub codim: usize,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    /// Max of the sampled codimensions.
    pub estimate: usize,
    /// First sampled point attaining the estimate.
    pub witness: RationalPoint,
    /// `(sample index, point, codim)` in sampling order.
    pub per_point: Vec<(usize, RationalPoint, usize)>,
}

impl LieAction {
    pub fn new(
        lie: RestrictedLieAlgebra,
        field: Arc<Field>,
        nvars: usize,
        rho: Vec<Derivation>,
        var_scheme: VarScheme,
    ) -> Result<Self> {
        if rho.len() != lie.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} derivations for a dimension-{} algebra",
                rho.len(),
                lie.dim()
            )));
        }
        for d in &rho {
            if d.ambient().nvars() != nvars || d.ambient().field() != &field {
                return Err(Error::DimensionMismatch(
                    "derivation outside the ambient ring".into(),
                ));
            }
            if d.ambient().truncation().is_some() {
                return Err(Error::Precondition(
                    "actions live on free coordinate rings".into(),
                ));
            }
        }
        let action = LieAction {
            lie,
            field,
            nvars,
            rho,
            var_scheme,
        };
        action.check_homomorphism()?;
        Ok(action)
    }

    /// rho respects brackets and p-th powers.
    fn check_homomorphism(&self) -> Result<()> {
        let m = self.lie.dim();
        for i in 0..m {
            for j in i + 1..m {
                let lhs = self.combine(self.lie.bracket_table(i, j))?;
                let rhs = self.rho[i].bracket(&self.rho[j])?;
                if lhs != rhs {
                    return Err(Error::Structure(format!(
                        "rho does not respect the bracket at ({i}, {j})"
                    )));
                }
            }
            let lhs = self.combine(self.lie.pmap_table(i))?;
            let rhs = self.rho[i].p_power()?;
            if lhs != rhs {
                return Err(Error::Structure(format!(
                    "rho does not respect the p-map at {i}"
                )));
            }
        }
        Ok(())
    }

    fn combine(&self, digits: &[u8]) -> Result<Derivation> {
        let ambient = Ambient::free(self.field.clone(), self.nvars);
        let mut acc = Derivation::zero(ambient);
        for (d, &c) in self.rho.iter().zip(digits) {
            if c != 0 {
                acc = acc.add(&d.scale(self.field.from_int(c as i64)))?;
            }
        }
        Ok(acc)
    }

    pub fn lie(&self) -> &RestrictedLieAlgebra {
        &self.lie
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rho(&self) -> &[Derivation] {
        &self.rho
    }

    pub fn var_scheme(&self) -> VarScheme {
        self.var_scheme
    }

    /// True when every generator image is homogeneous linear, so the
    /// derivations preserve polynomial degree.
    pub fn is_degree_preserving(&self) -> bool {
        self.rho.iter().all(|d| {
            d.images()
                .iter()
                .all(|img| img.is_zero() || (img.is_homogeneous() && img.degree() == Some(1)))
        })
    }

    fn check_point_field(&self, field: &Arc<Field>, x: &[Elt]) -> Result<()> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, ring has {} variables",
                x.len(),
                self.nvars
            )));
        }
        if field.characteristic() != self.field.characteristic() {
            return Err(Error::FieldMismatch("characteristic differs".into()));
        }
        Ok(())
    }

    /// Matrix of the evaluation map into the tangent space at `x`:
    /// entry `(j, i)` is `rho(e_j)(x_i)` evaluated at `x`.
    pub fn tangent_map(&self, field: &Arc<Field>, x: &[Elt]) -> Result<Matrix> {
        self.check_point_field(field, x)?;
        let m = self.lie.dim();
        let mut out = Matrix::zeros(field.clone(), m, self.nvars);
        for (j, d) in self.rho.iter().enumerate() {
            for i in 0..self.nvars {
                out.set(j, i, d.image(i).evaluate(field, x)?);
            }
        }
        Ok(out)
    }

    /// Stabilizer of `x`: the left kernel of the tangent map in canonical
    /// form; codim equals the tangent rank.
    pub fn stabilizer(&self, field: &Arc<Field>, x: &[Elt]) -> Result<StabilizerResult> {
        let tangent = self.tangent_map(field, x)?;
        let kernel_basis = tangent.transpose().kernel_basis();
        let codim = self.lie.dim() - kernel_basis.rows();
        Ok(StabilizerResult {
            point: x.to_vec(),
            kernel_basis,
            codim,
        })
    }

    /// True when the codimension at `x` equals a previously determined `c`.
    pub fn is_regular(&self, field: &Arc<Field>, x: &[Elt], c: usize) -> Result<bool> {
        Ok(self.stabilizer(field, x)?.codim == c)
    }

    /// Sampled estimate of the maximal stabilizer codimension over
    /// `F_{p^ext}`. Deterministic in `seed`; per-point work fans out in
    /// parallel, the fold is ordered by sample index.
    pub fn estimate_codim(
        &self,
        seed: u64,
        samples: usize,
        ext: usize,
    ) -> Result<RegularityReport> {
        if samples == 0 {
            return Err(Error::Precondition("need at least one sample".into()));
        }
        let field = Field::extension(self.field.characteristic(), ext)?;
        let mut stream = Stream::new(seed, streams::REGULARITY);
        let points: Vec<RationalPoint> = (0..samples)
            .map(|_| stream.point(&field, self.nvars))
            .collect();
        let codims = par::map_ordered(points.clone(), |x| {
            self.stabilizer(&field, &x).map(|s| s.codim)
        });
        let mut per_point = Vec::with_capacity(samples);
        let mut estimate = 0usize;
        let mut witness: Option<RationalPoint> = None;
        for (idx, (point, codim)) in points.into_iter().zip(codims).enumerate() {
            let codim = codim?;
            if codim > estimate || witness.is_none() {
                estimate = estimate.max(codim);
                if codim == estimate {
                    witness = Some(point.clone());
                }
            }
            per_point.push((idx, point, codim));
        }
        Ok(RegularityReport {
            estimate,
            witness: witness.expect("samples >= 1"),
            per_point,
        })
    }

    /// Serialize in the action file format.
    pub fn format(&self) -> String {
        let mut out = self.lie.format();
        writeln!(out, "vars {}", self.nvars).unwrap();
        for (i, d) in self.rho.iter().enumerate() {
            for j in 0..self.nvars {
                let img = d.image(j);
                if !img.is_zero() {
                    writeln!(
                        out,
                        "rho {i} : {j} -> {}",
                        img.format_with(self.var_scheme)
                    )
                    .unwrap();
                }
            }
        }
        out
    }

    /// Parse the action file format: an algebra block, a `vars N` line,
    /// then `rho i : j -> <polynomial>` lines (omitted images are zero).
    pub fn parse(input: &str) -> Result<Self> {
        let vars_pos = input
            .lines()
            .position(|l| l.trim().starts_with("vars "))
            .ok_or_else(|| Error::Parse("missing `vars` line".into()))?;
        let mut lines = input.lines();
        let algebra_block: Vec<&str> = lines.by_ref().take(vars_pos).collect();
        let lie = RestrictedLieAlgebra::parse(&algebra_block.join("\n"))?;
        let vars_line = lines.next().unwrap().trim();
        let nvars: usize = vars_line
            .strip_prefix("vars ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad vars line `{vars_line}`")))?;
        let field = Field::prime(lie.p())?;
        let ambient = Ambient::free(field.clone(), nvars);
        let mut images: Vec<Vec<Polynomial>> = (0..lie.dim())
            .map(|_| vec![Polynomial::zero(field.clone(), nvars); nvars])
            .collect();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let rest = line
                .strip_prefix("rho ")
                .ok_or_else(|| Error::Parse(format!("unrecognized line `{line}`")))?;
            let (head, poly) = rest
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
            let (i_str, j_str) = head
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing `:` in `{line}`")))?;
            let i: usize = i_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad basis index in `{line}`")))?;
            let j: usize = j_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable index in `{line}`")))?;
            if i >= lie.dim() || j >= nvars {
                return Err(Error::Parse(format!("index out of range in `{line}`")));
            }
            images[i][j] =
                Polynomial::parse(field.clone(), nvars, VarScheme::X1, poly.trim())?;
        }
        let rho = images
            .into_iter()
            .map(|imgs| Derivation::new(ambient.clone(), imgs))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lie, field, nvars, rho, VarScheme::X1)
    }
}

/// The adjoint action of `W_n` on the polynomial functions of its own
/// coordinate space: with `xi_k` the coordinate dual to basis element
/// `e_k`, the basis element `e_j` acts by
/// `rho(e_j)(xi_k) = sum_l (coordinate k of [e_l, e_j]) xi_l`,
/// the right-action sign convention. Stabilizers under this convention
/// are exactly centralizers.
pub fn adjoint_action(w: &WnAlgebra) -> Result<LieAction> {
    adjoint_of_lie(w.lie().clone())
}

/// Adjoint action of any tabulated restricted Lie algebra.
pub fn adjoint_of_lie(lie: RestrictedLieAlgebra) -> Result<LieAction> {
    let field = Field::prime(lie.p())?;
    let m = lie.dim();
    let ambient = Ambient::free(field.clone(), m);
    let mut rho = Vec::with_capacity(m);
    for j in 0..m {
        let mut images = Vec::with_capacity(m);
        for k in 0..m {
            let mut img = Polynomial::zero(field.clone(), m);
            for l in 0..m {
                let c = lie.bracket_table(l, j)[k];
                if c != 0 {
                    img = img.add(
                        &Polynomial::variable(field.clone(), m, l)
                            .scale(field.from_int(c as i64)),
                    )?;
                }
            }
            images.push(img);
        }
        rho.push(Derivation::new(ambient.clone(), images)?);
    }
    LieAction::new(lie, field, m, rho, VarScheme::Xi0)
}

/// Brute-force centralizer of the element with coordinates `coords`:
/// kernel of `v -> [v, coords]` over the given field, canonical basis.
pub fn centralizer(
    lie: &RestrictedLieAlgebra,
    field: &Arc<Field>,
    coords: &[Elt],
) -> Result<Matrix> {
    let m = lie.dim();
    let mut op = Matrix::zeros(field.clone(), m, m);
    for j in 0..m {
        let ej = basis_vec(field, m, j);
        let col = lie.bracket_vec(field, &ej, coords)?;
        for (r, v) in col.iter().enumerate() {
            op.set(r, j, *v);
        }
    }
    Ok(op.kernel_basis())
}

/// True when the differentials `d_x f_i` are linearly independent at `x`.
pub fn jacobian_independent(
    field: &Arc<Field>,
    f_list: &[Polynomial],
    x: &[Elt],
) -> Result<bool> {
    if f_list.is_empty() {
        return Ok(true);
    }
    let nvars = f_list[0].nvars();
    let mut jac = Matrix::zeros(field.clone(), f_list.len(), nvars);
    for (r, f) in f_list.iter().enumerate() {
        if f.nvars() != nvars {
            return Err(Error::DimensionMismatch("mixed variable counts".into()));
        }
        for c in 0..nvars {
            jac.set(r, c, f.partial(c).evaluate(field, x)?);
        }
    }
    Ok(jac.rank() == f_list.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wn::build_wn;

    fn adjoint_w1_p2() -> LieAction {
        adjoint_action(&build_wn(1, 2).unwrap()).unwrap()
    }

    #[test]
    fn adjoint_images_match_hand_computation() {
        // rho(d)(xi_0) = xi_1 (from [xd, d] = d in char 2), rho(d)(xi_1) = 0.
        let a = adjoint_w1_p2();
        let f = a.field().clone();
        let xi1 = Polynomial::variable(f.clone(), 2, 1);
        assert_eq!(a.rho()[0].image(0), &xi1);
        assert!(a.rho()[0].image(1).is_zero());
        // rho(xd)(xi_0) = xi_0, rho(xd)(xi_1) = 0.
        let xi0 = Polynomial::variable(f, 2, 0);
        assert_eq!(a.rho()[1].image(0), &xi0);
        assert!(a.rho()[1].image(1).is_zero());
    }

    #[test]
    fn tangent_map_values() {
        let a = adjoint_w1_p2();
        let f = a.field().clone();
        // Origin: all linear coefficients vanish.
        let zero = vec![f.zero(), f.zero()];
        let t0 = a.tangent_map(&f, &zero).unwrap();
        assert_eq!(t0.rank(), 0);
        // At D = xd (coordinates (0, 1)) the rank is 1.
        let d = vec![f.zero(), f.one()];
        assert_eq!(a.tangent_map(&f, &d).unwrap().rank(), 1);
    }

    #[test]
    fn stabilizers_are_centralizers() {
        let a = adjoint_w1_p2();
        let f = a.field().clone();
        // At D = xd: stabilizer is span{xd}, codim 1.
        let d = vec![f.zero(), f.one()];
        let st = a.stabilizer(&f, &d).unwrap();
        assert_eq!(st.codim, 1);
        assert_eq!(st.kernel_basis.rows(), 1);
        assert_eq!(st.kernel_basis.get(0, 0), f.zero());
        assert_eq!(st.kernel_basis.get(0, 1), f.one());
        // At D = d: stabilizer is span{d}, codim 1.
        let e = vec![f.one(), f.zero()];
        let st = a.stabilizer(&f, &e).unwrap();
        assert_eq!(st.codim, 1);
        assert_eq!(st.kernel_basis.get(0, 0), f.one());
        assert_eq!(st.kernel_basis.get(0, 1), f.zero());
        // Origin: full algebra, codim 0.
        let zero = vec![f.zero(), f.zero()];
        assert_eq!(a.stabilizer(&f, &zero).unwrap().codim, 0);
    }

    #[test]
    fn regularity_verdicts() {
        let a = adjoint_w1_p2();
        let f = a.field().clone();
        let d = vec![f.zero(), f.one()];
        assert!(a.is_regular(&f, &d, 1).unwrap());
        let zero = vec![f.zero(), f.zero()];
        assert!(!a.is_regular(&f, &zero, 1).unwrap());
    }

    #[test]
    fn estimate_on_w1_p2_is_one() {
        let a = adjoint_w1_p2();
        let report = a.estimate_codim(0, 50, 2).unwrap();
        assert_eq!(report.estimate, 1);
        // Exhaustive cross-check over all of F_4^2: max codim is 1.
        let f4 = Field::extension(2, 2).unwrap();
        let mut max = 0;
        for i in 0..f4.order() {
            for j in 0..f4.order() {
                let x = vec![f4.elt_at(i), f4.elt_at(j)];
                max = max.max(a.stabilizer(&f4, &x).unwrap().codim);
            }
        }
        assert_eq!(max, 1);
        // Monotone: more samples never lower the estimate.
        let bigger = a.estimate_codim(0, 120, 2).unwrap();
        assert!(bigger.estimate >= report.estimate);
    }

    #[test]
    fn trivial_action_has_codim_zero_everywhere() {
        let lie = RestrictedLieAlgebra::new(
            2,
            vec!["e_0".into()],
            vec![vec![vec![0]]],
            vec![vec![0]],
        )
        .unwrap();
        let field = Field::prime(2).unwrap();
        let rho = vec![Derivation::zero(Ambient::free(field.clone(), 2))];
        let a = LieAction::new(lie, field.clone(), 2, rho, VarScheme::X1).unwrap();
        let report = a.estimate_codim(0, 30, 2).unwrap();
        assert_eq!(report.estimate, 0);
        let x = vec![field.one(), field.one()];
        assert!(a.is_regular(&field, &x, 0).unwrap());
        // Tangent rank never exceeds min(dim g, N).
        assert!(a.tangent_map(&field, &x).unwrap().rank() <= 1);
    }

    #[test]
    fn stabilizer_matches_brute_force_centralizer() {
        let w = build_wn(1, 3).unwrap();
        let a = adjoint_action(&w).unwrap();
        let field = Field::extension(3, 2).unwrap();
        let mut stream = Stream::new(11, streams::CENTRALIZER);
        for _ in 0..50 {
            let coords = stream.point(&field, a.nvars());
            let st = a.stabilizer(&field, &coords).unwrap();
            let cz = centralizer(a.lie(), &field, &coords).unwrap();
            assert_eq!(st.kernel_basis, cz);
        }
    }

    #[test]
    fn action_file_roundtrip() {
        let a = adjoint_w1_p2();
        // Re-parse a hand-written action of the same algebra in x-scheme.
        let text = "p=2 dim=2\nbracket 0 1 -> 1,0\npmap 1 -> 0,1\nvars 2\nrho 0 : 0 -> x2\nrho 1 : 0 -> x1\n";
        let parsed = LieAction::parse(text).unwrap();
        assert_eq!(parsed.lie().dim(), 2);
        assert_eq!(parsed.rho()[0].image(0), {
            let f = parsed.field().clone();
            &Polynomial::variable(f, 2, 1)
        });
        // Same stabilizer structure as the built-in adjoint action.
        let f = parsed.field().clone();
        let d = vec![f.zero(), f.one()];
        assert_eq!(
            parsed.stabilizer(&f, &d).unwrap().codim,
            a.stabilizer(&f, &d).unwrap().codim
        );
    }

    #[test]
    fn jacobian_independence() {
        let f2 = Field::prime(2).unwrap();
        // f = xi_1 on two coordinates: constant nonzero differential.
        let f_list = vec![Polynomial::variable(f2.clone(), 2, 1)];
        let x = vec![f2.zero(), f2.zero()];
        assert!(jacobian_independent(&f2, &f_list, &x).unwrap());
        // f = xi_0^2 in char 2: differential of a p-th power vanishes.
        let sq = Polynomial::variable(f2.clone(), 2, 0)
            .mul(&Polynomial::variable(f2.clone(), 2, 0))
            .unwrap();
        assert!(!jacobian_independent(&f2, &[sq], &x).unwrap());
        // Empty list is vacuously independent.
        assert!(jacobian_independent(&f2, &[], &x).unwrap());
    }

    #[test]
    fn codim_constant_on_punctured_lines_for_adjoint() {
        // Tangent entries are linear, so scaling a point by a nonzero
        // scalar leaves the codimension unchanged.
        let a = adjoint_w1_p2();
        let field = Field::extension(2, 2).unwrap();
        let mut stream = Stream::new(3, 77);
        for _ in 0..20 {
            let x = stream.point(&field, 2);
            let c0 = a.stabilizer(&field, &x).unwrap().codim;
            for s in field.all_elements().filter(|e| !e.is_zero()) {
                let scaled: Vec<_> = x.iter().map(|&v| field.mul(v, s)).collect();
                assert_eq!(a.stabilizer(&field, &scaled).unwrap().codim, c0);
            }
        }
    }
}
