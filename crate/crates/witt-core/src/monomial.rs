//! Exponent vectors with the graded lexicographic order.

use smallvec::SmallVec;
use std::cmp::Ordering;

/// A monomial `x_1^{a_1} ... x_N^{a_N}` stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u8; 8]>,
}

impl Monomial {
    pub fn new(exps: &[u8]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    /// The variable `x_{i}` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// Divide by `x_i`; `None` when the exponent is zero.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        Some(m)
    }

    pub fn pow(&self, k: u8) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&a| a * k).collect(),
        }
    }

    /// True when every exponent is below `bound` (truncated-algebra basis test).
    pub fn bounded_by(&self, bound: u8) -> bool {
        self.exps.iter().all(|&e| e < bound)
    }
}

/// Graded lex: degree first, then lexicographic with `x_1` strongest.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of exact degree `d`, ascending.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    monomials_of_degree_bounded(nvars, d, u8::MAX)
}

/// Degree-`d` monomials with every exponent `< bound`, ascending.
pub fn monomials_of_degree_bounded(nvars: usize, d: u32, bound: u8) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut exps = vec![0u8; nvars];
    fill(&mut out, &mut exps, 0, d, bound);
    out.sort();
    out
}

/// All monomials of degree `<= max_degree`, ascending in graded lex.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        out.extend(monomials_of_degree(nvars, d));
    }
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut Vec<u8>, var: usize, remaining: u32, bound: u8) {
    // A single exponent may reach bound - 1 (or 255 when unbounded).
    let limit = if bound == u8::MAX {
        u8::MAX as u32
    } else {
        bound as u32 - 1
    };
    if var + 1 == exps.len() {
        if remaining <= limit {
            exps[var] = remaining as u8;
            out.push(Monomial::new(exps));
        }
        return;
    }
    for e in 0..=remaining.min(limit) {
        exps[var] = e as u8;
        fill(out, exps, var + 1, remaining - e, bound);
    }
    exps[var] = 0;
}
