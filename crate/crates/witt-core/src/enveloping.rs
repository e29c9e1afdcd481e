//! Restricted enveloping algebras `u(g)` with PBW straightening, subgroup
//! indices, induced-module dimensions, and torus detection.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::lie::RestrictedLieAlgebra;
use crate::linalg::Matrix;
use std::collections::HashMap;
use std::sync::Arc;

/// Full multiplication tables only up to this dimension (`p^m <= 81`).
pub const MAX_ENVELOPING_DIM: usize = 81;

/// `u(g)`: PBW basis `e_1^{a_1} ... e_m^{a_m}` with `0 <= a_i < p`,
/// dimension `p^m`, multiplication by straightening
/// `e_j e_i -> e_i e_j + [e_j, e_i]` (i < j) and `e_i^p -> e_i^{[p]}`.
#[derive(Clone, Debug)]
pub struct EnvelopingAlgebra {
    lie: RestrictedLieAlgebra,
    field: Arc<Field>,
    m: usize,
    dim: usize,
    /// `table[a][b]` = coordinates of `e^a * e^b` over the PBW basis.
    table: Vec<Vec<Vec<Elt>>>,
}

fn exps_of_index(mut idx: usize, m: usize, p: usize) -> Vec<u8> {
    let mut out = vec![0u8; m];
    for e in out.iter_mut() {
        *e = (idx % p) as u8;
        idx /= p;
    }
    out
}

fn index_of_exps(exps: &[u8], p: usize) -> usize {
    let mut idx = 0usize;
    for &e in exps.iter().rev() {
        idx = idx * p + e as usize;
    }
    idx
}

/// Build `u(g)`; verifies the canonical embedding relations and
/// associativity on all basis triples.
pub fn build_enveloping(lie: &RestrictedLieAlgebra) -> Result<EnvelopingAlgebra> {
    let p = lie.p() as usize;
    let m = lie.dim();
    let dim = p
        .checked_pow(m as u32)
        .filter(|&d| d <= MAX_ENVELOPING_DIM)
        .ok_or_else(|| {
            Error::Budget(format!(
                "u(g) for dim g = {m} at p = {p} exceeds dimension {MAX_ENVELOPING_DIM}"
            ))
        })?;
    let field = Field::prime(lie.p())?;
    let mut builder = Straightener {
        lie,
        field: field.clone(),
        m,
        p,
        dim,
        memo: HashMap::new(),
    };
    // table[a][b] by peeling the last letter of b: e^b = e^{b'} e_g.
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for (a, row) in table.iter_mut().enumerate() {
        let mut unit = vec![field.zero(); dim];
        unit[a] = field.one();
        row[0] = unit;
    }
    for b in 1..dim {
        let exps = exps_of_index(b, m, p);
        let g = exps.iter().rposition(|&e| e > 0).expect("b > 0");
        let mut prev = exps.clone();
        prev[g] -= 1;
        let bprev = index_of_exps(&prev, p);
        for a in 0..dim {
            let base = table[a][bprev].clone();
            table[a][b] = builder.mul_comb_gen(&base, g)?;
        }
    }
    let u = EnvelopingAlgebra {
        lie: lie.clone(),
        field,
        m,
        dim,
        table,
    };
    u.verify_embedding()?;
    u.verify_associativity()?;
    Ok(u)
}

/// Memoized straightening of `e^a * e_i`.
struct Straightener<'a> {
    lie: &'a RestrictedLieAlgebra,
    field: Arc<Field>,
    m: usize,
    p: usize,
    dim: usize,
    memo: HashMap<(usize, usize), Vec<Elt>>,
}

impl Straightener<'_> {
    fn mul_comb_gen(&mut self, comb: &[Elt], gen: usize) -> Result<Vec<Elt>> {
        let mut out = vec![self.field.zero(); self.dim];
        for (a, c) in comb.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = self.mul_basis_gen(a, gen)?;
            for (k, v) in part.iter().enumerate() {
                if !v.is_zero() {
                    out[k] = self.field.add(out[k], self.field.mul(*c, *v));
                }
            }
        }
        Ok(out)
    }

    /// `e^a * e_i` as a PBW combination. Terminates by induction on
    /// (word degree, inversions): bracket terms drop the degree, the
    /// p-overflow rewrite drops it by p - 1.
    fn mul_basis_gen(&mut self, a: usize, gen: usize) -> Result<Vec<Elt>> {
        if let Some(hit) = self.memo.get(&(a, gen)) {
            return Ok(hit.clone());
        }
        let f = self.field.clone();
        let exps = exps_of_index(a, self.m, self.p);
        let out = if let Some(j) = exps
            .iter()
            .enumerate()
            .rev()
            .find(|&(j, &e)| e > 0 && j > gen)
            .map(|(j, _)| j)
        {
            // e^a e_i = (e^{a - d_j} e_i) e_j + e^{a - d_j} [e_j, e_i].
            let mut prev = exps.clone();
            prev[j] -= 1;
            let aprev = index_of_exps(&prev, self.p);
            let left = self.mul_basis_gen(aprev, gen)?;
            let mut out = self.mul_comb_gen(&left, j)?;
            let bracket = self.lie.bracket_table(j, gen).to_vec();
            for (l, &c) in bracket.iter().enumerate() {
                if c != 0 {
                    let part = self.mul_basis_gen(aprev, l)?;
                    let scale = f.from_int(c as i64);
                    for (k, v) in part.iter().enumerate() {
                        if !v.is_zero() {
                            out[k] = f.add(out[k], f.mul(scale, *v));
                        }
                    }
                }
            }
            out
        } else if exps[gen] as usize + 1 < self.p {
            let mut next = exps.clone();
            next[gen] += 1;
            let mut out = vec![f.zero(); self.dim];
            out[index_of_exps(&next, self.p)] = f.one();
            out
        } else {
            // e^a e_i = e^{a - (p-1) d_i} e_i^p = e^{prefix} e_i^{[p]}.
            let mut prefix = exps.clone();
            prefix[gen] = 0;
            let aprefix = index_of_exps(&prefix, self.p);
            let mut out = vec![f.zero(); self.dim];
            for (l, &c) in self.lie.pmap_table(gen).iter().enumerate() {
                if c != 0 {
                    let part = self.mul_basis_gen(aprefix, l)?;
                    let scale = f.from_int(c as i64);
                    for (k, v) in part.iter().enumerate() {
                        if !v.is_zero() {
                            out[k] = f.add(out[k], f.mul(scale, *v));
                        }
                    }
                }
            }
            out
        };
        self.memo.insert((a, gen), out.clone());
        Ok(out)
    }
}

impl EnvelopingAlgebra {
    pub fn lie(&self) -> &RestrictedLieAlgebra {
        &self.lie
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> Vec<Elt> {
        let mut v = vec![self.field.zero(); self.dim];
        v[0] = self.field.one();
        v
    }

    /// The degree-1 PBW element for basis index `i` of `g`.
    pub fn generator(&self, i: usize) -> Vec<Elt> {
        let p = self.lie.p() as usize;
        let mut exps = vec![0u8; self.m];
        exps[i] = 1;
        let mut v = vec![self.field.zero(); self.dim];
        v[index_of_exps(&exps, p)] = self.field.one();
        v
    }

    /// Embed a coordinate vector of `g` as a degree-1 element.
    pub fn embed_lie(&self, coords: &[Elt]) -> Result<Vec<Elt>> {
        if coords.len() != self.m {
            return Err(Error::DimensionMismatch("coordinate length".into()));
        }
        let mut v = vec![self.field.zero(); self.dim];
        let p = self.lie.p() as usize;
        for (i, c) in coords.iter().enumerate() {
            let mut exps = vec![0u8; self.m];
            exps[i] = 1;
            v[index_of_exps(&exps, p)] = *c;
        }
        Ok(v)
    }

    pub fn mul(&self, a: &[Elt], b: &[Elt]) -> Result<Vec<Elt>> {
        if a.len() != self.dim || b.len() != self.dim {
            return Err(Error::DimensionMismatch("element length".into()));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let scale = f.mul(*ai, *bj);
                for (k, v) in self.table[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] = f.add(out[k], f.mul(scale, *v));
                    }
                }
            }
        }
        Ok(out)
    }

    fn verify_embedding(&self) -> Result<()> {
        let f = &self.field;
        for i in 0..self.m {
            for j in 0..self.m {
                let ei = self.generator(i);
                let ej = self.generator(j);
                let lhs: Vec<Elt> = self
                    .mul(&ei, &ej)?
                    .iter()
                    .zip(&self.mul(&ej, &ei)?)
                    .map(|(a, b)| f.sub(*a, *b))
                    .collect();
                let rhs = self.embed_lie(&self.lie.lift(f, self.lie.bracket_table(i, j)))?;
                if lhs != rhs {
                    return Err(Error::Structure(format!(
                        "e_{i} e_{j} - e_{j} e_{i} differs from the tabulated bracket"
                    )));
                }
            }
            let mut power = self.one();
            let ei = self.generator(i);
            for _ in 0..self.lie.p() {
                power = self.mul(&power, &ei)?;
            }
            let rhs = self.embed_lie(&self.lie.lift(f, self.lie.pmap_table(i)))?;
            if power != rhs {
                return Err(Error::Structure(format!(
                    "e_{i}^p differs from the tabulated p-th power"
                )));
            }
        }
        Ok(())
    }

    fn verify_associativity(&self) -> Result<()> {
        let f = &self.field;
        for a in 0..self.dim {
            for b in 0..self.dim {
                let ab = &self.table[a][b];
                for c in 0..self.dim {
                    let bc = &self.table[b][c];
                    let mut lhs = vec![f.zero(); self.dim];
                    for (d, v) in ab.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        for (k, w) in self.table[d][c].iter().enumerate() {
                            if !w.is_zero() {
                                lhs[k] = f.add(lhs[k], f.mul(*v, *w));
                            }
                        }
                    }
                    let mut rhs = vec![f.zero(); self.dim];
                    for (d, v) in bc.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        for (k, w) in self.table[a][d].iter().enumerate() {
                            if !w.is_zero() {
                                rhs[k] = f.add(rhs[k], f.mul(*v, *w));
                            }
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::Structure(format!(
                            "associativity fails on basis triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Check that the span of `h_basis` is closed under bracket and p-th
    /// power, both computed inside `u(g)`.
    pub fn check_subalgebra(&self, h_basis: &[Vec<Elt>]) -> Result<()> {
        let span = Matrix::from_rows(self.field.clone(), h_basis.to_vec())?;
        let member = |v: &[Elt]| -> Result<bool> {
            let row = Matrix::from_rows(self.field.clone(), vec![v.to_vec()])?;
            span.row_space_contains(&row)
        };
        let f = &self.field;
        for x in h_basis {
            for y in h_basis {
                let xe = self.embed_lie(x)?;
                let ye = self.embed_lie(y)?;
                let comm: Vec<Elt> = self
                    .mul(&xe, &ye)?
                    .iter()
                    .zip(&self.mul(&ye, &xe)?)
                    .map(|(a, b)| f.sub(*a, *b))
                    .collect();
                let coords = self.degree_one_coords(&comm)?;
                if !member(&coords)? {
                    return Err(Error::NotSubalgebra("bracket leaves the span".into()));
                }
            }
            let xe = self.embed_lie(x)?;
            let mut power = self.one();
            for _ in 0..self.lie.p() {
                power = self.mul(&power, &xe)?;
            }
            let coords = self.degree_one_coords(&power)?;
            if !member(&coords)? {
                return Err(Error::NotSubalgebra("p-th power leaves the span".into()));
            }
        }
        Ok(())
    }

    /// Interpret an element supported on degree <= 1 PBW monomials as a
    /// coordinate vector of `g` (constant term must vanish).
    fn degree_one_coords(&self, v: &[Elt]) -> Result<Vec<Elt>> {
        let p = self.lie.p() as usize;
        let mut coords = vec![self.field.zero(); self.m];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = exps_of_index(idx, self.m, p);
            let degree: u32 = exps.iter().map(|&e| e as u32).sum();
            if degree > 1 {
                return Err(Error::Structure(
                    "element is not of filtration degree one".into(),
                ));
            }
            if degree == 0 {
                return Err(Error::Structure("element has a constant term".into()));
            }
            let i = exps.iter().position(|&e| e == 1).unwrap();
            coords[i] = *c;
        }
        Ok(coords)
    }

    /// Dimension of `u(g) / u(g) h`: the index of the height-one subgroup
    /// scheme attached to the restricted subalgebra spanned by `h_basis`.
    /// Always a power of p, equal to `p^(dim g - dim h)`.
    pub fn subgroup_index(&self, h_basis: &[Vec<Elt>]) -> Result<usize> {
        if h_basis.is_empty() {
            return Ok(self.dim);
        }
        self.check_subalgebra(h_basis)?;
        let h_dim = Matrix::from_rows(self.field.clone(), h_basis.to_vec())?.rank();
        let mut rows = Vec::with_capacity(self.dim * h_basis.len());
        for x in h_basis {
            let xe = self.embed_lie(x)?;
            for a in 0..self.dim {
                let mut unit = vec![self.field.zero(); self.dim];
                unit[a] = self.field.one();
                rows.push(self.mul(&unit, &xe)?);
            }
        }
        let ideal_dim = Matrix::from_rows(self.field.clone(), rows)?.rank();
        let quotient = self.dim - ideal_dim;
        let expected = (self.lie.p() as usize).pow((self.m - h_dim) as u32);
        if quotient != expected {
            return Err(Error::Structure(format!(
                "quotient dimension {quotient} differs from p^(m - dim h) = {expected}"
            )));
        }
        Ok(quotient)
    }

    /// `dim ind V = (G : G') dim V` for the height-one pair; cross-checked
    /// against the solution space of the linear system defining
    /// module maps from `u(g)` into a trivial module of dimension `dim_v`
    /// whenever the full tables are small (`p^m <= 16`).
    pub fn induced_dimension(&self, h_basis: &[Vec<Elt>], dim_v: usize) -> Result<usize> {
        let index = self.subgroup_index(h_basis)?;
        let claimed = index * dim_v;
        if self.dim <= 16 {
            // Maps must kill the right ideal h u(g); each of the dim_v
            // target coordinates contributes an identical block.
            let mut rows = Vec::new();
            for x in h_basis {
                let xe = self.embed_lie(x)?;
                for b in 0..self.dim {
                    let mut unit = vec![self.field.zero(); self.dim];
                    unit[b] = self.field.one();
                    rows.push(self.mul(&xe, &unit)?);
                }
            }
            let rank = if rows.is_empty() {
                0
            } else {
                Matrix::from_rows(self.field.clone(), rows)?.rank()
            };
            let oracle = dim_v * (self.dim - rank);
            if oracle != claimed {
                return Err(Error::Structure(format!(
                    "induced dimension {claimed} disagrees with the linear-system count {oracle}"
                )));
            }
        }
        Ok(claimed)
    }

    /// Commutative `u(g)` over a perfect field is semisimple iff reduced
    /// iff the p-power map is injective; the map is F_p-linear here, so a
    /// rank computation decides. Non-abelian input returns false at once
    /// (only tori matter, and tori are abelian).
    pub fn semisimplicity_oracle(&self) -> Result<bool> {
        if !self.lie.is_abelian() {
            return Ok(false);
        }
        let mut frob = Matrix::zeros(self.field.clone(), self.dim, self.dim);
        for a in 0..self.dim {
            let mut unit = vec![self.field.zero(); self.dim];
            unit[a] = self.field.one();
            let mut power = self.one();
            for _ in 0..self.lie.p() {
                power = self.mul(&power, &unit)?;
            }
            for (r, v) in power.iter().enumerate() {
                frob.set(r, a, *v);
            }
        }
        Ok(frob.rank() == self.dim)
    }
}

/// Extract the restricted-Lie structure tables of a subalgebra from its
/// basis vectors, computing brackets and p-th powers inside `u(g)` (the
/// only route that needs no closed form for the p-map of a sum).
pub fn restricted_subalgebra(
    u: &EnvelopingAlgebra,
    h_basis: &[Vec<Elt>],
) -> Result<RestrictedLieAlgebra> {
    u.check_subalgebra(h_basis)?;
    let f = u.field().clone();
    let h_dim = h_basis.len();
    let mut coord_matrix = Matrix::zeros(f.clone(), u.m, h_dim);
    for (c, v) in h_basis.iter().enumerate() {
        for (r, e) in v.iter().enumerate() {
            coord_matrix.set(r, c, *e);
        }
    }
    let in_h_coords = |v: &[Elt]| -> Result<Vec<u8>> {
        let sol = coord_matrix
            .solve(v)?
            .ok_or_else(|| Error::NotSubalgebra("element leaves the span".into()))?;
        Ok(sol.iter().map(|e| e.0[0]).collect())
    };
    let mut bracket = vec![vec![vec![0u8; h_dim]; h_dim]; h_dim];
    let mut pmap = vec![vec![0u8; h_dim]; h_dim];
    for (i, x) in h_basis.iter().enumerate() {
        for (j, y) in h_basis.iter().enumerate() {
            let xe = u.embed_lie(x)?;
            let ye = u.embed_lie(y)?;
            let comm: Vec<Elt> = u
                .mul(&xe, &ye)?
                .iter()
                .zip(&u.mul(&ye, &xe)?)
                .map(|(a, b)| f.sub(*a, *b))
                .collect();
            bracket[i][j] = in_h_coords(&u.degree_one_coords(&comm)?)?;
        }
        let xe = u.embed_lie(x)?;
        let mut power = u.one();
        for _ in 0..u.lie.p() {
            power = u.mul(&power, &xe)?;
        }
        pmap[i] = in_h_coords(&u.degree_one_coords(&power)?)?;
    }
    let labels = (0..h_dim).map(|i| format!("h_{i}")).collect();
    RestrictedLieAlgebra::new(u.lie.p(), labels, bracket, pmap)
}

/// Torus test: abelian, and every basis element lies in the span of its
/// iterated p-th powers. In the abelian case the p-map is additive, so
/// the span of the first `dim g` iterates is the full iterate span, and
/// semisimple elements form a subalgebra, so the basis check decides.
pub fn is_torus(lie: &RestrictedLieAlgebra) -> Result<bool> {
    if !lie.is_abelian() {
        return Ok(false);
    }
    let field = Field::prime(lie.p())?;
    let m = lie.dim();
    for i in 0..m {
        let mut iterate: Vec<Elt> = lie.lift(&field, lie.pmap_table(i));
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            rows.push(iterate.clone());
            iterate = lie.pmap_vec_abelian(&field, &iterate)?;
        }
        let span = Matrix::from_rows(field.clone(), rows)?;
        let target = Matrix::from_rows(field.clone(), vec![crate::lie::basis_vec(&field, m, i)])?;
        if !span.row_space_contains(&target)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wn::build_wn;

    fn basis_vecs(field: &Arc<Field>, m: usize, indices: &[usize]) -> Vec<Vec<Elt>> {
        indices
            .iter()
            .map(|&i| crate::lie::basis_vec(field, m, i))
            .collect()
    }

    #[test]
    fn nil_line_u_is_dual_numbers() {
        // g abelian, zero p-map, m = 1, p = 2: u = k[e]/(e^2).
        let g = catalog::nil_line(2).unwrap();
        let u = build_enveloping(&g).unwrap();
        assert_eq!(u.dim(), 2);
        let e = u.generator(0);
        let sq = u.mul(&e, &e).unwrap();
        assert!(sq.iter().all(|c| c.is_zero()));
        assert!(!u.semisimplicity_oracle().unwrap());
    }

    #[test]
    fn torus_line_u_splits() {
        // g = span{xd}: u = k[e]/(e^2 - e), dim 2, semisimple.
        let g = catalog::torus_line(2).unwrap();
        let u = build_enveloping(&g).unwrap();
        assert_eq!(u.dim(), 2);
        let e = u.generator(0);
        assert_eq!(u.mul(&e, &e).unwrap(), e);
        assert!(u.semisimplicity_oracle().unwrap());
    }

    #[test]
    fn w1_p2_u_dimension_and_index() {
        let w = build_wn(1, 2).unwrap();
        let u = build_enveloping(w.lie()).unwrap();
        assert_eq!(u.dim(), 4);
        let f = u.field().clone();
        // h = span{xd}: index 2 by the 4-dimensional quotient.
        assert_eq!(u.subgroup_index(&basis_vecs(&f, 2, &[1])).unwrap(), 2);
        // h = g: index 1; h = 0: index p^m.
        assert_eq!(u.subgroup_index(&basis_vecs(&f, 2, &[0, 1])).unwrap(), 1);
        assert_eq!(u.subgroup_index(&[]).unwrap(), 4);
    }

    #[test]
    fn induced_dimensions() {
        let w = build_wn(1, 2).unwrap();
        let u = build_enveloping(w.lie()).unwrap();
        let f = u.field().clone();
        let h = basis_vecs(&f, 2, &[1]);
        assert_eq!(u.induced_dimension(&h, 0).unwrap(), 0);
        assert_eq!(u.induced_dimension(&h, 1).unwrap(), 2);
        let full = basis_vecs(&f, 2, &[0, 1]);
        assert_eq!(u.induced_dimension(&full, 5).unwrap(), 5);
    }

    #[test]
    fn non_subalgebra_rejected() {
        // span{d, x^2 d} in W_1 at p = 3: bracket gives 2 x d, outside.
        let w = build_wn(1, 3).unwrap();
        let u = build_enveloping(w.lie()).unwrap();
        let f = u.field().clone();
        let h = basis_vecs(&f, 3, &[0, 2]);
        assert!(matches!(u.subgroup_index(&h), Err(Error::NotSubalgebra(_))));
    }

    #[test]
    fn torus_detection() {
        assert!(is_torus(&catalog::torus_line(2).unwrap()).unwrap());
        assert!(!is_torus(&catalog::nil_line(2).unwrap()).unwrap());
        // Swap torus: e_0 <-> e_1 under the p-map.
        assert!(is_torus(&catalog::swap_torus().unwrap()).unwrap());
        // W_1 is not abelian.
        assert!(!is_torus(build_wn(1, 2).unwrap().lie()).unwrap());
    }

    #[test]
    fn swap_torus_oracle_agrees() {
        let g = catalog::swap_torus().unwrap();
        let u = build_enveloping(&g).unwrap();
        assert!(u.semisimplicity_oracle().unwrap());
        assert_eq!(u.dim(), 4);
    }

    #[test]
    fn index_law_on_w1_p3_chain() {
        let w = build_wn(1, 3).unwrap();
        let u = build_enveloping(w.lie()).unwrap();
        let f = u.field().clone();
        // Chain 0 < span{xd} < span{d, xd} < g: indices 27, 9, 3, 1.
        assert_eq!(u.subgroup_index(&[]).unwrap(), 27);
        assert_eq!(u.subgroup_index(&basis_vecs(&f, 3, &[1])).unwrap(), 9);
        assert_eq!(u.subgroup_index(&basis_vecs(&f, 3, &[0, 1])).unwrap(), 3);
        assert_eq!(u.subgroup_index(&basis_vecs(&f, 3, &[0, 1, 2])).unwrap(), 1);
    }
}
