//! Constant finite groups acting by algebra automorphisms on polynomial
//! rings and finite-dimensional monomial quotients.
//!
//! Invariants are always computed by a fixed-space solve, never by
//! averaging, so modular group orders are legal inputs.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::invariants::InvariantBasis;
use crate::linalg::{poly_to_vector, Matrix};
use crate::monomial::{monomials_of_degree, monomials_up_to, Monomial};
use crate::poly::{Polynomial, VarScheme};
use crate::sample::{streams, Stream};
use std::sync::Arc;

/// Group enumeration and generator orders are capped here.
pub const MAX_GROUP_ORDER: usize = 24;

/// The algebra being acted on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Target {
    /// Free polynomial ring in `nvars` variables.
    Poly { field: Arc<Field>, nvars: usize },
    /// `k[x_1..x_N] / (x_i^{bounds[i]})`.
    Quotient {
        field: Arc<Field>,
        nvars: usize,
        bounds: Vec<u8>,
    },
}

impl Target {
    pub fn field(&self) -> &Arc<Field> {
        match self {
            Target::Poly { field, .. } | Target::Quotient { field, .. } => field,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Target::Poly { nvars, .. } | Target::Quotient { nvars, .. } => *nvars,
        }
    }

    /// Drop monomials outside the quotient basis; identity on free rings.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        match self {
            Target::Poly { .. } => f.clone(),
            Target::Quotient {
                field,
                nvars,
                bounds,
            } => Polynomial::from_terms(
                field.clone(),
                *nvars,
                f.terms()
                    .filter(|(m, _)| m.exps().iter().zip(bounds).all(|(&e, &b)| e < b))
                    .map(|(m, c)| (m.clone(), *c)),
            ),
        }
    }

    /// Monomial basis of a quotient target, ascending graded lex.
    pub fn quotient_basis(&self) -> Result<Vec<Monomial>> {
        let Target::Quotient { nvars, bounds, .. } = self else {
            return Err(Error::Precondition(
                "the whole-algebra basis needs a finite-dimensional target".into(),
            ));
        };
        let max_deg: u32 = bounds.iter().map(|&b| (b - 1) as u32).sum();
        let mut basis = Vec::new();
        for d in 0..=max_deg {
            for m in monomials_of_degree(*nvars, d) {
                if m.exps().iter().zip(bounds).all(|(&e, &b)| e < b) {
                    basis.push(m);
                }
            }
        }
        Ok(basis)
    }
}

/// A substitution endomorphism stored by its generator images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automorphism {
    images: Vec<Polynomial>,
}

impl Automorphism {
    pub fn identity(target: &Target) -> Self {
        let images = (0..target.nvars())
            .map(|i| Polynomial::variable(target.field().clone(), target.nvars(), i))
            .collect();
        Automorphism { images }
    }

    pub fn from_images(images: Vec<Polynomial>) -> Self {
        Automorphism { images }
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Substitute into `f`, reducing in the target.
    pub fn apply(&self, target: &Target, f: &Polynomial) -> Result<Polynomial> {
        let field = target.field().clone();
        let nvars = target.nvars();
        let mut out = Polynomial::zero(field.clone(), nvars);
        for (m, c) in f.terms() {
            let mut term = Polynomial::constant(field.clone(), nvars, *c);
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = target.reduce(&term.mul(&self.images[i])?);
                }
            }
            out = out.add(&term)?;
        }
        Ok(target.reduce(&out))
    }

    /// `self` after `other`: substitutes `self`'s images into `other`'s.
    pub fn compose(&self, target: &Target, other: &Automorphism) -> Result<Automorphism> {
        let images = other
            .images
            .iter()
            .map(|img| self.apply(target, img))
            .collect::<Result<Vec<_>>>()?;
        Ok(Automorphism { images })
    }

    fn is_identity(&self, target: &Target) -> bool {
        self.images.iter().enumerate().all(|(i, img)| {
            *img == Polynomial::variable(target.field().clone(), target.nvars(), i)
        })
    }

    /// Coordinates of the moved rational point.
    pub fn move_point(&self, ext: &Arc<Field>, x: &[Elt]) -> Result<Vec<Elt>> {
        self.images.iter().map(|img| img.evaluate(ext, x)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ConstantGroupAction {
    target: Target,
    generators: Vec<Automorphism>,
    elements: Vec<Automorphism>,
}

impl ConstantGroupAction {
    /// Validates each generator (well defined on the quotient, finite order
    /// within the cap) and enumerates the group by closure.
    pub fn new(target: Target, generators: Vec<Automorphism>) -> Result<Self> {
        for g in &generators {
            if g.images.len() != target.nvars() {
                return Err(Error::DimensionMismatch(
                    "generator image count differs from the variable count".into(),
                ));
            }
            if let Target::Quotient { bounds, .. } = &target {
                // sigma(x_i)^{b_i} must vanish in the quotient.
                for (img, &b) in g.images.iter().zip(bounds) {
                    if !target.reduce(&img.pow(b as u32, None)?).is_zero() {
                        return Err(Error::InvalidInput(
                            "generator does not respect the quotient relations".into(),
                        ));
                    }
                }
            }
            // Finite order within the cap implies invertibility.
            let mut power = g.clone();
            let mut order = 1;
            while !power.is_identity(&target) {
                power = power.compose(&target, g)?;
                order += 1;
                if order > MAX_GROUP_ORDER {
                    return Err(Error::Budget(format!(
                        "generator order exceeds {MAX_GROUP_ORDER}"
                    )));
                }
            }
        }
        // Closure under composition.
        let mut elements = vec![Automorphism::identity(&target)];
        let mut frontier = elements.clone();
        while let Some(current) = frontier.pop() {
            for g in &generators {
                let next = g.compose(&target, &current)?;
                if !elements.contains(&next) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::Budget(format!(
                            "group order exceeds {MAX_GROUP_ORDER}"
                        )));
                    }
                    elements.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        Ok(ConstantGroupAction {
            target,
            generators,
            elements,
        })
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn generators(&self) -> &[Automorphism] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    fn degree_preserving(&self) -> bool {
        self.generators.iter().all(|g| {
            g.images
                .iter()
                .all(|img| img.is_homogeneous() && img.degree() == Some(1))
        })
    }

    /// Fixed space on the whole algebra (finite-dimensional targets):
    /// kernel of `sigma - id` stacked over the generators.
    pub fn invariants_full(&self) -> Result<Vec<Polynomial>> {
        let basis = self.target.quotient_basis()?;
        let field = self.target.field().clone();
        if self.generators.is_empty() {
            return Ok(basis
                .iter()
                .map(|m| {
                    Polynomial::from_term(
                        field.clone(),
                        self.target.nvars(),
                        m.clone(),
                        field.one(),
                    )
                })
                .collect());
        }
        let mut stack = Vec::new();
        for g in &self.generators {
            let mut op = Matrix::zeros(field.clone(), basis.len(), basis.len());
            for (c, m) in basis.iter().enumerate() {
                let image = g.apply(
                    &self.target,
                    &Polynomial::from_term(
                        field.clone(),
                        self.target.nvars(),
                        m.clone(),
                        field.one(),
                    ),
                )?;
                let v = poly_to_vector(&image, &basis)?;
                for (r, val) in v.into_iter().enumerate() {
                    op.set(r, c, val);
                }
                let cur = op.get(c, c);
                op.set(c, c, field.sub(cur, field.one()));
            }
            stack.push(op);
        }
        let kernel = Matrix::vstack(&stack)?.kernel_basis();
        Ok((0..kernel.rows())
            .map(|r| {
                Polynomial::from_terms(
                    field.clone(),
                    self.target.nvars(),
                    basis
                        .iter()
                        .zip(kernel.row(r))
                        .map(|(m, c)| (m.clone(), *c)),
                )
            })
            .collect())
    }

    /// Degreewise fixed space on a polynomial target.
    pub fn invariants_graded(&self, max_degree: u32) -> Result<InvariantBasis> {
        if !matches!(self.target, Target::Poly { .. }) {
            return Err(Error::Precondition(
                "degreewise invariants need a polynomial target".into(),
            ));
        }
        let field = self.target.field().clone();
        let nvars = self.target.nvars();
        if self.generators.is_empty() || self.degree_preserving() {
            let mut blocks = Vec::with_capacity(max_degree as usize + 1);
            for d in 0..=max_degree {
                let monomials = monomials_of_degree(nvars, d);
                if self.generators.is_empty() {
                    blocks.push(
                        monomials
                            .iter()
                            .map(|m| {
                                Polynomial::from_term(
                                    field.clone(),
                                    nvars,
                                    m.clone(),
                                    field.one(),
                                )
                            })
                            .collect(),
                    );
                    continue;
                }
                let mut stack = Vec::new();
                for g in &self.generators {
                    let mut op = Matrix::zeros(field.clone(), monomials.len(), monomials.len());
                    for (c, m) in monomials.iter().enumerate() {
                        let image = g.apply(
                            &self.target,
                            &Polynomial::from_term(field.clone(), nvars, m.clone(), field.one()),
                        )?;
                        let v = poly_to_vector(&image, &monomials)?;
                        for (r, val) in v.into_iter().enumerate() {
                            op.set(r, c, val);
                        }
                        let cur = op.get(c, c);
                        op.set(c, c, field.sub(cur, field.one()));
                    }
                    stack.push(op);
                }
                let kernel = Matrix::vstack(&stack)?.kernel_basis();
                blocks.push(
                    (0..kernel.rows())
                        .map(|r| {
                            Polynomial::from_terms(
                                field.clone(),
                                nvars,
                                monomials
                                    .iter()
                                    .zip(kernel.row(r))
                                    .map(|(m, c)| (m.clone(), *c)),
                            )
                        })
                        .collect(),
                );
            }
            return Ok(InvariantBasis {
                max_degree,
                graded: true,
                blocks,
            });
        }
        self.invariants_filtered(max_degree)
    }

    /// Fixed space on the filtered space of degree <= max, bucketing the
    /// canonical basis by leading degree (mirrors the Lie-action solver).
    fn invariants_filtered(&self, max_degree: u32) -> Result<InvariantBasis> {
        let field = self.target.field().clone();
        let nvars = self.target.nvars();
        let mut domain = monomials_up_to(nvars, max_degree);
        domain.reverse();
        let raise = self
            .generators
            .iter()
            .flat_map(|g| g.images.iter().filter_map(|p| p.degree()))
            .max()
            .unwrap_or(1)
            .max(1);
        let image_monomials = monomials_up_to(nvars, max_degree * raise);
        let mut stack = Vec::new();
        for g in &self.generators {
            let mut op = Matrix::zeros(field.clone(), image_monomials.len(), domain.len());
            for (c, m) in domain.iter().enumerate() {
                let poly = Polynomial::from_term(field.clone(), nvars, m.clone(), field.one());
                let image = g.apply(&self.target, &poly)?.sub(&poly)?;
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

    /// Max over sampled points of the orbit size `|G| / |G_x|`.
    pub fn max_orbit_index(&self, seed: u64, samples: usize, ext: usize) -> Result<usize> {
        if !matches!(self.target, Target::Poly { .. }) {
            return Err(Error::Precondition(
                "orbit sampling needs a polynomial target".into(),
            ));
        }
        if samples == 0 {
            return Err(Error::Precondition("need at least one sample".into()));
        }
        let field = Field::extension(self.target.field().characteristic(), ext)?;
        let mut stream = Stream::new(seed, streams::ORBIT);
        let mut max = 1;
        for _ in 0..samples {
            let x = stream.point(&field, self.target.nvars());
            let stab = self
                .elements
                .iter()
                .filter(|g| g.move_point(&field, &x).map(|y| y == x).unwrap_or(false))
                .count();
            max = max.max(self.order() / stab);
        }
        Ok(max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreenessVerdict {
    Free { rank: usize },
    NotFree,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub verdict: FreenessVerdict,
    pub reason: String,
    /// `[dim A]` in the finite case; per-degree Hilbert dimensions of A in
    /// the graded case.
    pub algebra_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    /// Explicit module basis over the invariants, when one was found.
    pub basis: Option<Vec<Polynomial>>,
}

/// Finite-dimensional freeness test: dimension bookkeeping plus a greedy
/// search for an explicit basis of A over A^G. "Free" is only reported
/// with a verified basis; a failed greedy search without a divisibility
/// obstruction stays inconclusive.
pub fn freeness_check_full(action: &ConstantGroupAction) -> Result<FreenessReport> {
    let basis = action.target().quotient_basis()?;
    let field = action.target().field().clone();
    let dim_a = basis.len();
    let inv = action.invariants_full()?;
    let dim_inv = inv.len();
    if dim_a % dim_inv != 0 {
        return Ok(FreenessReport {
            verdict: FreenessVerdict::NotFree,
            reason: format!("dim A = {dim_a} is not a multiple of dim A^G = {dim_inv}"),
            algebra_dims: vec![dim_a],
            invariant_dims: vec![dim_inv],
            basis: None,
        });
    }
    let rank = dim_a / dim_inv;
    // Greedy: keep candidates whose invariant multiples enlarge the span
    // by a full dim A^G.
    let mut chosen: Vec<Polynomial> = Vec::new();
    let mut span_rows: Vec<Vec<Elt>> = Vec::new();
    let mut span_rank = 0;
    for cand in &basis {
        if chosen.len() == rank {
            break;
        }
        let cand_poly = Polynomial::from_term(
            field.clone(),
            action.target().nvars(),
            cand.clone(),
            field.one(),
        );
        let mut trial = span_rows.clone();
        for g in &inv {
            let prod = action.target().reduce(&g.mul(&cand_poly)?);
            trial.push(poly_to_vector(&prod, &basis)?);
        }
        let new_rank = Matrix::from_rows(field.clone(), trial.clone())?.rank();
        if new_rank == span_rank + dim_inv {
            span_rows = trial;
            span_rank = new_rank;
            chosen.push(cand_poly);
        }
    }
    if span_rank == dim_a && chosen.len() == rank {
        Ok(FreenessReport {
            verdict: FreenessVerdict::Free { rank },
            reason: format!("explicit basis of {rank} elements found"),
            algebra_dims: vec![dim_a],
            invariant_dims: vec![dim_inv],
            basis: Some(chosen),
        })
    } else {
        Ok(FreenessReport {
            verdict: FreenessVerdict::Inconclusive,
            reason: "no basis found by greedy selection".into(),
            algebra_dims: vec![dim_a],
            invariant_dims: vec![dim_inv],
            basis: None,
        })
    }
}

/// Graded freeness shadow on a polynomial target: compare the Hilbert
/// dimensions of A with a free module over A^G whose generator degrees are
/// read off greedily. `rank` defaults to the sampled max orbit index.
pub fn freeness_check_graded(
    action: &ConstantGroupAction,
    max_degree: u32,
    rank: Option<usize>,
    seed: u64,
    samples: usize,
    ext: usize,
) -> Result<FreenessReport> {
    let inv = action.invariants_graded(max_degree)?;
    if !inv.graded {
        return Err(Error::Precondition(
            "the graded freeness shadow needs a degree-preserving action".into(),
        ));
    }
    let inv_dims = inv.degree_dims();
    let nvars = action.target().nvars();
    let a_dims: Vec<usize> = (0..=max_degree)
        .map(|d| monomials_of_degree(nvars, d).len())
        .collect();
    let q = match rank {
        Some(q) => q,
        None => action.max_orbit_index(seed, samples, ext)?,
    };
    // Peel generator degrees: deficits of A against already-chosen
    // shifted copies of A^G.
    let mut shifts: Vec<usize> = Vec::new();
    let mut ok = true;
    for d in 0..=max_degree as usize {
        let predicted: usize = shifts.iter().map(|&s| inv_dims[d - s]).sum();
        if predicted > a_dims[d] {
            ok = false;
            break;
        }
        for _ in 0..a_dims[d] - predicted {
            shifts.push(d);
        }
    }
    let reason;
    let verdict = if !ok {
        reason = "shifted invariant dimensions overshoot the algebra".into();
        FreenessVerdict::NotFree
    } else if shifts.len() == q {
        reason = format!(
            "Hilbert dimensions match a free module of rank {q} with generator degrees {shifts:?}"
        );
        FreenessVerdict::Free { rank: q }
    } else {
        reason = format!(
            "{} generator degrees found where rank {q} was expected",
            shifts.len()
        );
        FreenessVerdict::NotFree
    };
    Ok(FreenessReport {
        verdict,
        reason,
        algebra_dims: a_dims,
        invariant_dims: inv_dims,
        basis: None,
    })
}

/// Parse the constant-group file format:
///
/// ```text
/// p=3
/// group
/// sigma_1 : x1 -> -x1
/// target quotient 1
/// rel x1^3
/// ```
///
/// Unlisted `sigma_k : x_j` images default to `x_j`. The target is either
/// `target poly N` or `target quotient N` followed by `rel x_j^d` lines.
pub fn parse_constant_action(input: &str) -> Result<ConstantGroupAction> {
    let lines: Vec<&str> = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let p: u32 = lines
        .first()
        .and_then(|l| l.strip_prefix("p="))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse("first line must be `p=<prime>`".into()))?;
    let field = Field::prime(p)?;
    let target_idx = lines
        .iter()
        .position(|l| l.starts_with("target "))
        .ok_or_else(|| Error::Parse("missing `target` line".into()))?;
    let target_parts: Vec<&str> = lines[target_idx].split_whitespace().collect();
    let (kind, nvars): (&str, usize) = match target_parts.as_slice() {
        ["target", kind, n] => (
            kind,
            n.parse()
                .map_err(|_| Error::Parse("bad variable count in target".into()))?,
        ),
        _ => {
            return Err(Error::Parse(
                "target line must be `target <poly|quotient> N`".into(),
            ))
        }
    };
    let target = match kind {
        "poly" => Target::Poly {
            field: field.clone(),
            nvars,
        },
        "quotient" => {
            let mut bounds = vec![0u8; nvars];
            for line in &lines[target_idx + 1..] {
                let rel = line
                    .strip_prefix("rel ")
                    .ok_or_else(|| Error::Parse(format!("unrecognized line `{line}`")))?;
                let (var, exp) = rel
                    .trim()
                    .split_once('^')
                    .ok_or_else(|| Error::Parse(format!("relation `{rel}` must be x_j^d")))?;
                let j = var
                    .trim()
                    .strip_prefix('x')
                    .and_then(|v| v.parse::<usize>().ok())
                    .and_then(|v| v.checked_sub(1))
                    .ok_or_else(|| Error::Parse(format!("bad variable in `{rel}`")))?;
                if j >= nvars {
                    return Err(Error::Parse(format!("variable out of range in `{rel}`")));
                }
                bounds[j] = exp
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{rel}`")))?;
            }
            if bounds.contains(&0) {
                return Err(Error::Parse(
                    "every variable of a quotient target needs a relation".into(),
                ));
            }
            Target::Quotient {
                field: field.clone(),
                nvars,
                bounds,
            }
        }
        other => return Err(Error::Parse(format!("unknown target kind `{other}`"))),
    };
    // Generator images, keyed by the sigma index.
    let mut gens: Vec<(usize, Vec<Polynomial>)> = Vec::new();
    for line in &lines[1..target_idx] {
        if *line == "group" {
            continue;
        }
        let rest = line
            .strip_prefix("sigma_")
            .ok_or_else(|| Error::Parse(format!("unrecognized line `{line}`")))?;
        let (k_str, assignment) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing `:` in `{line}`")))?;
        let k: usize = k_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator index in `{line}`")))?;
        let (var, poly) = assignment
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
        let j = var
            .trim()
            .strip_prefix('x')
            .and_then(|v| v.parse::<usize>().ok())
            .and_then(|v| v.checked_sub(1))
            .ok_or_else(|| Error::Parse(format!("bad variable in `{line}`")))?;
        if j >= nvars {
            return Err(Error::Parse(format!("variable out of range in `{line}`")));
        }
        let image = Polynomial::parse(field.clone(), nvars, VarScheme::X1, poly.trim())?;
        let slot = match gens.iter_mut().find(|(idx, _)| *idx == k) {
            Some((_, images)) => images,
            None => {
                let identity: Vec<Polynomial> = (0..nvars)
                    .map(|i| Polynomial::variable(field.clone(), nvars, i))
                    .collect();
                gens.push((k, identity));
                &mut gens.last_mut().unwrap().1
            }
        };
        slot[j] = image;
    }
    gens.sort_by_key(|(k, _)| *k);
    let generators = gens
        .into_iter()
        .map(|(_, images)| Automorphism { images })
        .collect();
    ConstantGroupAction::new(target, generators)
}
