//! Sparse multivariate polynomials over `F_{p^e}`.
//!
//! Terms live in a `BTreeMap` keyed by graded-lex monomials, so iteration
//! order (and therefore the text form) is canonical. Zero coefficients are
//! never stored.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::monomial::Monomial;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Names used when printing and parsing variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum VarScheme {
    /// `x1, x2, ...` (1-based), the default polynomial format.
    #[default]
    X1,
    /// `xi_0, xi_1, ...` (0-based), used for coordinates on a Lie algebra.
    Xi0,
}

impl VarScheme {
    pub fn name(&self, i: usize) -> String {
        match self {
            VarScheme::X1 => format!("x{}", i + 1),
            VarScheme::Xi0 => format!("xi_{i}"),
        }
    }

    fn parse_var(&self, token: &str) -> Option<usize> {
        match self {
            VarScheme::X1 => token
                .strip_prefix('x')
                .and_then(|t| t.parse::<usize>().ok())
                .and_then(|i| i.checked_sub(1)),
            VarScheme::Xi0 => token
                .strip_prefix("xi_")
                .and_then(|t| t.parse::<usize>().ok()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    field: Arc<Field>,
    nvars: usize,
    terms: BTreeMap<Monomial, Elt>,
}

impl Polynomial {
    pub fn zero(field: Arc<Field>, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Arc<Field>, nvars: usize) -> Self {
        let one = field.one();
        Self::constant(field, nvars, one)
    }

    pub fn constant(field: Arc<Field>, nvars: usize, c: Elt) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn variable(field: Arc<Field>, nvars: usize, i: usize) -> Self {
        let one = field.one();
        Self::from_term(field, nvars, Monomial::var(nvars, i), one)
    }

    pub fn from_term(field: Arc<Field>, nvars: usize, m: Monomial, c: Elt) -> Self {
        debug_assert_eq!(m.nvars(), nvars);
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Elt)>>(
        field: Arc<Field>,
        nvars: usize,
        terms: I,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term_in_place(&m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Elt {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d != m.degree() => return false,
                _ => {}
            }
        }
        true
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), *c));
        Self::from_terms(self.field.clone(), self.nvars, terms)
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                "polynomials over different fields".into(),
            ));
        }
        Ok(())
    }

    pub fn add_term_in_place(&mut self, m: &Monomial, c: Elt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(|| self.field.zero());
        *entry = self.field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(m);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term_in_place(m, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term_in_place(m, self.field.neg(*c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(*c)));
        Self::from_terms(self.field.clone(), self.nvars, terms)
    }

    pub fn scale(&self, c: Elt) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.field.mul(*a, c)));
        Self::from_terms(self.field.clone(), self.nvars, terms)
    }

    /// Product, optionally truncated: with `trunc = Some(p)` every result
    /// monomial with an exponent `>= p` is dropped (the relation `x_i^p = 0`).
    pub fn mul_with_truncation(&self, other: &Polynomial, trunc: Option<u8>) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if let Some(bound) = trunc {
                    if !m.bounded_by(bound) {
                        continue;
                    }
                }
                out.add_term_in_place(&m, self.field.mul(*ca, *cb));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_with_truncation(other, None)
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: Elt, trunc: Option<u8>) -> Polynomial {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        if c.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            let prod = ma.mul(m);
            if let Some(bound) = trunc {
                if !prod.bounded_by(bound) {
                    continue;
                }
            }
            out.add_term_in_place(&prod, self.field.mul(*ca, c));
        }
        out
    }

    pub fn pow(&self, k: u32, trunc: Option<u8>) -> Result<Polynomial> {
        let mut acc = Self::one(self.field.clone(), self.nvars);
        for _ in 0..k {
            acc = acc.mul_with_truncation(self, trunc)?;
        }
        Ok(acc)
    }

    /// `f -> f^p` over the prime field: exponents multiply by p, coefficients
    /// are fixed (`a^p = a` in `F_p`).
    pub fn frobenius_power(&self) -> Result<Polynomial> {
        if self.field.extension_degree() != 1 {
            return Err(Error::Precondition(
                "frobenius power is defined over the prime field".into(),
            ));
        }
        let p = self.field.characteristic() as u8;
        let terms = self.terms.iter().map(|(m, c)| (m.pow(p), *c));
        Ok(Self::from_terms(self.field.clone(), self.nvars, terms))
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            if let Some(lower) = m.div_var(i) {
                let k = self.field.from_int(m.exp(i) as i64);
                out.add_term_in_place(&lower, self.field.mul(*c, k));
            }
        }
        out
    }

    /// Evaluate at a point over `target`, a field of the same characteristic;
    /// own coefficients must lie in the prime field or in `target` itself.
    pub fn evaluate(&self, target: &Arc<Field>, point: &[Elt]) -> Result<Elt> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if self.field.characteristic() != target.characteristic() {
            return Err(Error::FieldMismatch("characteristic differs".into()));
        }
        if *self.field != **target && self.field.extension_degree() != 1 {
            return Err(Error::FieldMismatch(
                "can only embed prime-field coefficients into an extension".into(),
            ));
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.embed(*c);
            for (i, &x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    term = target.mul(term, x);
                }
            }
            acc = target.add(acc, term);
        }
        Ok(acc)
    }

    /// Re-coefficient a prime-field polynomial into an extension field.
    pub fn embed_into(&self, target: Arc<Field>) -> Result<Polynomial> {
        if self.field.characteristic() != target.characteristic()
            || self.field.extension_degree() != 1
        {
            return Err(Error::FieldMismatch(
                "embedding needs prime-field coefficients of equal characteristic".into(),
            ));
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), target.embed(*c)))
            .collect();
        Ok(Self::from_terms(target, self.nvars, terms))
    }

    /// Canonical text form: terms in descending graded lex joined by " + ",
    /// each as `c*x1^e1*...`; exponent 1 prints bare, zero exponents are
    /// omitted, the coefficient is always printed.
    pub fn format_with(&self, scheme: VarScheme) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter().rev() {
            let coeff = self.field.format_elt(*c);
            let coeff = if coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            let mut factors = vec![coeff];
            for i in 0..self.nvars {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(scheme.name(i)),
                    e => factors.push(format!("{}^{}", scheme.name(i), e)),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// Parse the canonical form; whitespace is flexible, `-` separators and
    /// bare monomials (implicit coefficient 1) are accepted.
    pub fn parse(field: Arc<Field>, nvars: usize, scheme: VarScheme, input: &str) -> Result<Self> {
        let mut out = Self::zero(field.clone(), nvars);
        let input = input.trim();
        if input.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if input == "0" {
            return Ok(out);
        }
        for (sign, term) in split_signed_terms(input)? {
            let (m, c) = parse_term(&field, nvars, scheme, &term)?;
            let c = if sign { field.neg(c) } else { c };
            out.add_term_in_place(&m, c);
        }
        Ok(out)
    }
}

/// Split on top-level `+`/`-`; returns (is_negative, term) pairs.
fn split_signed_terms(input: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0u32;
    for ch in input.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() {
                    // Leading sign or stacked separators like "+ -".
                    if ch == '-' {
                        negative = !negative;
                    }
                } else {
                    out.push((negative, current.trim().to_string()));
                    current.clear();
                    negative = ch == '-';
                }
            }
            _ => current.push(ch),
        }
    }
    if current.trim().is_empty() {
        return Err(Error::Parse("dangling separator".into()));
    }
    out.push((negative, current.trim().to_string()));
    Ok(out)
}

fn parse_term(
    field: &Arc<Field>,
    nvars: usize,
    scheme: VarScheme,
    term: &str,
) -> Result<(Monomial, Elt)> {
    let mut coeff = field.one();
    let mut exps = vec![0u8; nvars];
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        let (base, exp): (&str, u32) = match factor.rsplit_once('^') {
            Some((b, e)) if scheme.parse_var(b.trim()).is_some() => (
                b.trim(),
                e.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
            ),
            _ => (factor, 1),
        };
        if let Some(i) = scheme.parse_var(base) {
            if i >= nvars {
                return Err(Error::Parse(format!(
                    "variable `{base}` out of range for {nvars} variables"
                )));
            }
            exps[i] = exps[i]
                .checked_add(exp as u8)
                .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
        } else {
            let body = base
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(base);
            let c = field.parse_elt(body)?;
            coeff = field.mul(coeff, c);
        }
    }
    Ok((Monomial::new(&exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn fp(p: u32) -> Arc<Field> {
        Field::prime(p).unwrap()
    }

    #[test]
    fn freshman_dream_in_char_2() {
        let f = fp(2);
        let x = Polynomial::variable(f.clone(), 2, 0);
        let y = Polynomial::variable(f.clone(), 2, 1);
        let s = x.add(&y).unwrap();
        let sq = s.mul(&s).unwrap();
        let expected = Polynomial::parse(f, 2, VarScheme::X1, "x1^2 + x2^2").unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn truncation_kills_top_power() {
        let f = fp(2);
        let x = Polynomial::variable(f, 1, 0);
        // x^{p-1} * x = x^p = 0 in B_1.
        let prod = x.mul_with_truncation(&x, Some(2)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn truncated_product_in_b1_p3() {
        // (1+x)(1+x+x^2) = 1 + 2x + 2x^2 + x^3 -> 1 + 2x + 2x^2 once x^3 = 0.
        let f = fp(3);
        let a = Polynomial::parse(f.clone(), 1, VarScheme::X1, "1 + x1").unwrap();
        let b = Polynomial::parse(f.clone(), 1, VarScheme::X1, "1 + x1 + x1^2").unwrap();
        let prod = a.mul_with_truncation(&b, Some(3)).unwrap();
        let expected =
            Polynomial::parse(f, 1, VarScheme::X1, "2*x1^2 + 2*x1 + 1").unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn frobenius_examples() {
        let f2 = fp(2);
        let xy = Polynomial::parse(f2.clone(), 2, VarScheme::X1, "x1 + x2").unwrap();
        assert_eq!(
            xy.frobenius_power().unwrap(),
            Polynomial::parse(f2.clone(), 2, VarScheme::X1, "x1^2 + x2^2").unwrap()
        );
        let one = Polynomial::one(f2, 2);
        assert_eq!(one.frobenius_power().unwrap(), one);

        // f = x + 2y at p = 3: cross terms carry multinomials divisible by 3.
        let f3 = fp(3);
        let g = Polynomial::parse(f3.clone(), 2, VarScheme::X1, "x1 + 2*x2").unwrap();
        let direct = g.pow(3, None).unwrap();
        let fast = g.frobenius_power().unwrap();
        assert_eq!(direct, fast);
        assert_eq!(
            fast,
            Polynomial::parse(f3, 2, VarScheme::X1, "x1^3 + 2*x2^3").unwrap()
        );
    }

    #[test]
    fn canonical_printing() {
        let f = fp(3);
        let p = Polynomial::parse(
            f.clone(),
            2,
            VarScheme::X1,
            "1 + 2 * x1^3 * x2 + x2 ^ 2",
        )
        .unwrap();
        assert_eq!(p.format_with(VarScheme::X1), "2*x1^3*x2 + 1*x2^2 + 1");
        // Reparse of the canonical form is the identity.
        let again = Polynomial::parse(f, 2, VarScheme::X1, &p.format_with(VarScheme::X1)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn xi_scheme_roundtrip() {
        let f = fp(2);
        let p = Polynomial::parse(f, 3, VarScheme::Xi0, "1*xi_1 + 1*xi_0^2").unwrap();
        assert_eq!(p.format_with(VarScheme::Xi0), "1*xi_0^2 + 1*xi_1");
    }

    #[test]
    fn negative_coefficients_parse() {
        let f = fp(3);
        let p = Polynomial::parse(f.clone(), 1, VarScheme::X1, "-x1 + 1").unwrap();
        let q = Polynomial::parse(f, 1, VarScheme::X1, "2*x1 + 1").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn evaluation_over_extension() {
        let f2 = fp(2);
        let f16 = Field::extension(2, 4).unwrap();
        let p = Polynomial::parse(f2, 2, VarScheme::X1, "x1*x2 + 1").unwrap();
        let t = f16.from_digits(&[0, 1]).unwrap();
        let v = p.evaluate(&f16, &[t, t]).unwrap();
        // t * t + 1 = t^2 + 1.
        assert_eq!(v, f16.from_digits(&[1, 0, 1]).unwrap());
    }

    #[test]
    fn partial_derivative() {
        let f = fp(3);
        let p = Polynomial::parse(f.clone(), 2, VarScheme::X1, "x1^2*x2 + 2*x2").unwrap();
        assert_eq!(
            p.partial(0),
            Polynomial::parse(f.clone(), 2, VarScheme::X1, "2*x1*x2").unwrap()
        );
        assert_eq!(
            p.partial(1),
            Polynomial::parse(f, 2, VarScheme::X1, "x1^2 + 2").unwrap()
        );
    }
}
