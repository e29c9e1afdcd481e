//! Restricted Lie algebras presented by structure tables.
//!
//! Structure constants are stored as raw digits mod p, so the same tables
//! serve computations over `F_p` and over any extension `F_{p^e}`.

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::linalg::Matrix;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RestrictedLieAlgebra {
    p: u32,
    dim: usize,
    labels: Vec<String>,
    /// `bracket[i][j]` = coordinates of `[e_i, e_j]`.
    bracket: Vec<Vec<Vec<u8>>>,
    /// `pmap[i]` = coordinates of `e_i^{[p]}`.
    pmap: Vec<Vec<u8>>,
    /// Derivations realizing the basis, when the algebra came from one.
    realization: Option<Vec<Derivation>>,
}

impl RestrictedLieAlgebra {
    pub fn new(
        p: u32,
        labels: Vec<String>,
        bracket: Vec<Vec<Vec<u8>>>,
        pmap: Vec<Vec<u8>>,
    ) -> Result<Self> {
        let dim = labels.len();
        if bracket.len() != dim
            || bracket.iter().any(|row| row.len() != dim)
            || bracket
                .iter()
                .flatten()
                .any(|v| v.len() != dim || v.iter().any(|&c| c as u32 >= p))
        {
            return Err(Error::DimensionMismatch("bracket table shape".into()));
        }
        if pmap.len() != dim
            || pmap
                .iter()
                .any(|v| v.len() != dim || v.iter().any(|&c| c as u32 >= p))
        {
            return Err(Error::DimensionMismatch("p-map table shape".into()));
        }
        Ok(RestrictedLieAlgebra {
            p,
            dim,
            labels,
            bracket,
            pmap,
            realization: None,
        })
    }

    /// Build tables from derivations of a truncated algebra: brackets and
    /// p-th powers are computed as operators and re-expressed in the span.
    pub fn from_derivations(labels: Vec<String>, derivations: Vec<Derivation>) -> Result<Self> {
        let dim = derivations.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let field = derivations[0].ambient().field().clone();
        if field.extension_degree() != 1 {
            return Err(Error::Precondition(
                "structure tables are extracted over the prime field".into(),
            ));
        }
        let p = field.characteristic();
        // Flatten each derivation: concatenated coefficient vectors of its
        // images over the full monomial list they use.
        let span = DerivationSpan::new(&derivations)?;
        let mut bracket = vec![vec![vec![0u8; dim]; dim]; dim];
        let mut pmap = vec![vec![0u8; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                let br = derivations[i].bracket(&derivations[j])?;
                bracket[i][j] = span.coordinates_digits(&br)?;
            }
            let pw = derivations[i].p_power()?;
            pmap[i] = span.coordinates_digits(&pw)?;
        }
        let mut alg = Self::new(p, labels, bracket, pmap)?;
        alg.realization = Some(derivations);
        Ok(alg)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket_table(&self, i: usize, j: usize) -> &[u8] {
        &self.bracket[i][j]
    }

    pub fn pmap_table(&self, i: usize) -> &[u8] {
        &self.pmap[i]
    }

    pub fn realization(&self) -> Option<&[Derivation]> {
        self.realization.as_deref()
    }

    pub fn set_realization(&mut self, derivations: Vec<Derivation>) {
        self.realization = Some(derivations);
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket
            .iter()
            .flatten()
            .all(|v| v.iter().all(|&c| c == 0))
    }

    /// Lift a digit vector into `field` (any extension of `F_p`).
    pub fn lift(&self, field: &Arc<Field>, digits: &[u8]) -> Vec<Elt> {
        digits.iter().map(|&c| field.from_int(c as i64)).collect()
    }

    /// `[u, v]` for coordinate vectors over `field`.
    pub fn bracket_vec(&self, field: &Arc<Field>, u: &[Elt], v: &[Elt]) -> Result<Vec<Elt>> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch("coordinate vector length".into()));
        }
        if field.characteristic() != self.p {
            return Err(Error::FieldMismatch("characteristic differs".into()));
        }
        let mut out = vec![field.zero(); self.dim];
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v[j].is_zero() {
                    continue;
                }
                let scale = field.mul(u[i], v[j]);
                for (k, &c) in self.bracket[i][j].iter().enumerate() {
                    if c != 0 {
                        let add = field.mul(scale, field.from_int(c as i64));
                        out[k] = field.add(out[k], add);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `v^{[p]}` for an abelian algebra: `(sum c_i e_i)^{[p]} = sum c_i^p
    /// e_i^{[p]}` (no cross terms to correct).
    pub fn pmap_vec_abelian(&self, field: &Arc<Field>, v: &[Elt]) -> Result<Vec<Elt>> {
        if !self.is_abelian() {
            return Err(Error::Precondition(
                "closed-form p-map of a general vector needs an abelian algebra".into(),
            ));
        }
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch("coordinate vector length".into()));
        }
        let mut out = vec![field.zero(); self.dim];
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            let cp = field.frobenius(v[i]);
            for (k, &c) in self.pmap[i].iter().enumerate() {
                if c != 0 {
                    let add = field.mul(cp, field.from_int(c as i64));
                    out[k] = field.add(out[k], add);
                }
            }
        }
        Ok(out)
    }

    /// Validate the tables: antisymmetry, the Jacobi identity on all basis
    /// triples, and (when a realization is attached) agreement of the
    /// tabulated brackets and p-th powers with the operators. Reports the
    /// first violated identity.
    pub fn verify_restricted(&self) -> Result<()> {
        let field = Field::prime(self.p)?;
        let f = &field;
        // Antisymmetry and [e_i, e_i] = 0.
        for i in 0..self.dim {
            if self.bracket[i][i].iter().any(|&c| c != 0) {
                return Err(Error::Structure(format!("[e_{i}, e_{i}] != 0")));
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.bracket[i][j][k] as u32;
                    let rhs = (self.p - self.bracket[j][i][k] as u32) % self.p;
                    if lhs != rhs {
                        return Err(Error::Structure(format!(
                            "antisymmetry fails at [e_{i}, e_{j}]"
                        )));
                    }
                }
            }
        }
        // Jacobi on basis triples.
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let ij = self.lift(f, &self.bracket[i][j]);
                    let jk = self.lift(f, &self.bracket[j][k]);
                    let ki = self.lift(f, &self.bracket[k][i]);
                    let ek = basis_vec(f, self.dim, k);
                    let ei = basis_vec(f, self.dim, i);
                    let ej = basis_vec(f, self.dim, j);
                    let t1 = self.bracket_vec(f, &ij, &ek)?;
                    let t2 = self.bracket_vec(f, &jk, &ei)?;
                    let t3 = self.bracket_vec(f, &ki, &ej)?;
                    let sum: Vec<Elt> = t1
                        .iter()
                        .zip(&t2)
                        .zip(&t3)
                        .map(|((a, b), c)| f.add(f.add(*a, *b), *c))
                        .collect();
                    if sum.iter().any(|e| !e.is_zero()) {
                        return Err(Error::Structure(format!(
                            "Jacobi fails on (e_{i}, e_{j}, e_{k})"
                        )));
                    }
                }
            }
        }
        // Realization consistency.
        if let Some(derivs) = &self.realization {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let op = derivs[i].bracket(&derivs[j])?;
                    let tab = self.combine_derivations(f, derivs, &self.bracket[i][j])?;
                    if op != tab {
                        return Err(Error::Structure(format!(
                            "bracket table disagrees with operators at ({i}, {j})"
                        )));
                    }
                }
                let op = derivs[i].p_power()?;
                let tab = self.combine_derivations(f, derivs, &self.pmap[i])?;
                if op != tab {
                    return Err(Error::Structure(format!(
                        "p-map table disagrees with the operator p-th power at {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn combine_derivations(
        &self,
        field: &Arc<Field>,
        derivs: &[Derivation],
        digits: &[u8],
    ) -> Result<Derivation> {
        let mut acc = Derivation::zero(derivs[0].ambient().clone());
        for (d, &c) in derivs.iter().zip(digits) {
            if c != 0 {
                acc = acc.add(&d.scale(field.from_int(c as i64)))?;
            }
        }
        Ok(acc)
    }

    /// Text form: `p=<p> dim=<m>` header, `bracket i j -> c_0,...` lines for
    /// i < j with nonzero bracket, then nonzero `pmap i -> c_0,...` lines.
    /// Indices and coordinates are 0-based.
    pub fn format(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p={} dim={}", self.p, self.dim).unwrap();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self.bracket[i][j].iter().any(|&c| c != 0) {
                    writeln!(out, "bracket {i} {j} -> {}", join_digits(&self.bracket[i][j]))
                        .unwrap();
                }
            }
        }
        for i in 0..self.dim {
            if self.pmap[i].iter().any(|&c| c != 0) {
                writeln!(out, "pmap {i} -> {}", join_digits(&self.pmap[i])).unwrap();
            }
        }
        out
    }

    pub fn parse(input: &str) -> Result<Self> {
        let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty algebra description".into()))?;
        let (p, dim) = parse_header(header)?;
        let labels = (0..dim).map(|i| format!("e_{i}")).collect();
        let mut bracket = vec![vec![vec![0u8; dim]; dim]; dim];
        let mut pmap = vec![vec![0u8; dim]; dim];
        for line in lines {
            if let Some(rest) = line.strip_prefix("bracket ") {
                let (idx, coords) = split_arrow(rest)?;
                let parts: Vec<&str> = idx.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("bad bracket line `{line}`")));
                }
                let i: usize = parse_index(parts[0], dim)?;
                let j: usize = parse_index(parts[1], dim)?;
                if i >= j {
                    return Err(Error::Parse("bracket lines need i < j".into()));
                }
                let v = parse_digits(coords, dim, p)?;
                bracket[i][j] = v.clone();
                bracket[j][i] = v.iter().map(|&c| ((p - c as u32) % p) as u8).collect();
            } else if let Some(rest) = line.strip_prefix("pmap ") {
                let (idx, coords) = split_arrow(rest)?;
                let i = parse_index(idx.trim(), dim)?;
                pmap[i] = parse_digits(coords, dim, p)?;
            } else {
                return Err(Error::Parse(format!("unrecognized line `{line}`")));
            }
        }
        Self::new(p, labels, bracket, pmap)
    }
}

pub fn basis_vec(field: &Arc<Field>, dim: usize, i: usize) -> Vec<Elt> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

fn join_digits(v: &[u8]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_header(line: &str) -> Result<(u32, usize)> {
    let mut p = None;
    let mut dim = None;
    for part in line.split_whitespace() {
        if let Some(v) = part.strip_prefix("p=") {
            p = v.parse().ok();
        } else if let Some(v) = part.strip_prefix("dim=") {
            dim = v.parse().ok();
        }
    }
    match (p, dim) {
        (Some(p), Some(dim)) => Ok((p, dim)),
        _ => Err(Error::Parse(format!("bad header `{line}`"))),
    }
}

fn split_arrow(s: &str) -> Result<(&str, &str)> {
    s.split_once("->")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::Parse(format!("missing `->` in `{s}`")))
}

fn parse_index(s: &str, dim: usize) -> Result<usize> {
    let i: usize = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad index `{s}`")))?;
    if i >= dim {
        return Err(Error::Parse(format!("index {i} out of range (dim {dim})")));
    }
    Ok(i)
}

fn parse_digits(s: &str, dim: usize, p: u32) -> Result<Vec<u8>> {
    let v: Vec<u8> = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map(|n| n.rem_euclid(p as i64) as u8)
                .map_err(|_| Error::Parse(format!("bad coordinate `{c}`")))
        })
        .collect::<Result<_>>()?;
    if v.len() != dim {
        return Err(Error::Parse(format!(
            "{} coordinates for dimension {dim}",
            v.len()
        )));
    }
    Ok(v)
}

/// Helper for expressing operators in the span of a derivation basis.
struct DerivationSpan {
    matrix: Matrix,
    flat_len: usize,
}

impl DerivationSpan {
    fn new(derivations: &[Derivation]) -> Result<Self> {
        let columns: Vec<Vec<Elt>> = derivations
            .iter()
            .map(flatten_derivation)
            .collect::<Result<_>>()?;
        let flat_len = columns[0].len();
        if columns.iter().any(|c| c.len() != flat_len) {
            return Err(Error::DimensionMismatch("derivation span shapes".into()));
        }
        let field = derivations[0].ambient().field().clone();
        let mut matrix = Matrix::zeros(field, flat_len, derivations.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                matrix.set(r, c, *v);
            }
        }
        Ok(DerivationSpan { matrix, flat_len })
    }

    fn coordinates_digits(&self, d: &Derivation) -> Result<Vec<u8>> {
        let target = flatten_derivation(d)?;
        if target.len() != self.flat_len {
            return Err(Error::DimensionMismatch("derivation span target".into()));
        }
        let sol = self.matrix.solve(&target)?.ok_or_else(|| {
            Error::Structure("operator lies outside the span of the basis".into())
        })?;
        Ok(sol.iter().map(|e| e.0[0]).collect())
    }
}

fn flatten_derivation(d: &Derivation) -> Result<Vec<Elt>> {
    use crate::derivation::Ambient;
    let Ambient::Truncated(alg) = d.ambient() else {
        return Err(Error::Precondition(
            "span extraction needs a truncated ambient algebra".into(),
        ));
    };
    let mut out = Vec::with_capacity(alg.dim() * alg.nvars());
    for img in d.images() {
        out.extend(alg.to_vector(img)?);
    }
    Ok(out)
}
