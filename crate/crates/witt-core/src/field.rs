//! Exact arithmetic in `F_p` and `F_{p^e}` for small primes.
//!
//! A [`Field`] owns the descriptor data (characteristic, extension degree,
//! modulus) together with a precomputed inverse table. Elements are plain
//! `Copy` digit vectors; all arithmetic goes through the field object, so
//! containers store one `Arc<Field>` and millions of cheap elements.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Hard cap on the extension degree; digits of an element fit in [`Elt`].
pub const MAX_EXT_DEGREE: usize = 8;

/// Primes supported by the library.
pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// An element of `F_{p^e}`: coefficients of `1, t, ..., t^{e-1}`,
/// each in `[0, p)`. Digits beyond `e` are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elt(pub [u8; MAX_EXT_DEGREE]);

impl Elt {
    pub fn is_zero(&self) -> bool {
        self.0 == [0; MAX_EXT_DEGREE]
    }

    fn from_digits(digits: &[u8]) -> Self {
        let mut d = [0u8; MAX_EXT_DEGREE];
        d[..digits.len()].copy_from_slice(digits);
        Elt(d)
    }
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elt{:?}", self.0)
    }
}

/// `F_p` (e = 1) or `F_{p^e}` presented as `F_p[t]/(modulus)`.
#[derive(Debug)]
pub struct Field {
    p: u32,
    e: usize,
    q: usize,
    /// Monic modulus coefficients `c_0 + c_1 t + ... + t^e`; only for e > 1.
    modulus: Option<Vec<u8>>,
    inv_table: Vec<Elt>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    SUPPORTED_PRIMES.contains(&p)
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "unsupported characteristic {p}: need a prime in 2..=7"
            )));
        }
        let mut field = Field {
            p,
            e: 1,
            q: p as usize,
            modulus: None,
            inv_table: Vec::new(),
        };
        field.build_inverse_table();
        Ok(Arc::new(field))
    }

    /// `F_{p^e}` with the canonical modulus: the first irreducible monic of
    /// degree `e` in the enumeration ordered by `sum c_i p^i` over the
    /// non-leading coefficients. Deterministic, needs no external tables.
    pub fn extension(p: u32, e: usize) -> Result<Arc<Field>> {
        if e == 1 {
            return Self::prime(p);
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "unsupported characteristic {p}"
            )));
        }
        if e == 0 || e > MAX_EXT_DEGREE {
            return Err(Error::InvalidInput(format!(
                "extension degree {e} out of range 1..={MAX_EXT_DEGREE}"
            )));
        }
        let modulus = smallest_irreducible(p, e);
        Self::with_modulus(p, e, modulus)
    }

    /// `F_{p^e}` with an explicit monic modulus (length e + 1, leading 1).
    pub fn with_modulus(p: u32, e: usize, modulus: Vec<u8>) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "unsupported characteristic {p}"
            )));
        }
        if !(2..=MAX_EXT_DEGREE).contains(&e) {
            return Err(Error::InvalidInput(format!(
                "extension degree {e} out of range 2..={MAX_EXT_DEGREE} for explicit modulus"
            )));
        }
        if modulus.len() != e + 1 || modulus[e] != 1 {
            return Err(Error::InvalidInput(
                "modulus must be monic of degree e".into(),
            ));
        }
        if modulus.iter().any(|&c| c as u32 >= p) {
            return Err(Error::InvalidInput("modulus coefficient out of range".into()));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::InvalidInput(
                "modulus is reducible over the prime field".into(),
            ));
        }
        let q = (p as usize).pow(e as u32);
        let mut field = Field {
            p,
            e,
            q,
            modulus: Some(modulus),
            inv_table: Vec::new(),
        };
        field.build_inverse_table();
        Ok(Arc::new(field))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn extension_degree(&self) -> usize {
        self.e
    }

    /// Number of elements, `p^e`.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u8]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> Elt {
        Elt::default()
    }

    pub fn one(&self) -> Elt {
        let mut d = [0u8; MAX_EXT_DEGREE];
        d[0] = 1;
        Elt(d)
    }

    /// The residue of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elt {
        let p = self.p as i64;
        let r = n.rem_euclid(p) as u8;
        let mut d = [0u8; MAX_EXT_DEGREE];
        d[0] = r;
        Elt(d)
    }

    /// Element from explicit digits (length <= e, each < p).
    pub fn from_digits(&self, digits: &[u8]) -> Result<Elt> {
        if digits.len() > self.e {
            return Err(Error::InvalidInput(format!(
                "{} digits for extension degree {}",
                digits.len(),
                self.e
            )));
        }
        if digits.iter().any(|&c| c as u32 >= self.p) {
            return Err(Error::InvalidInput("digit out of range".into()));
        }
        Ok(Elt::from_digits(digits))
    }

    /// Indexes elements as base-p numbers; inverse of [`Field::elt_at`].
    pub fn index_of(&self, a: Elt) -> usize {
        let mut idx = 0usize;
        for i in (0..self.e).rev() {
            idx = idx * self.p as usize + a.0[i] as usize;
        }
        idx
    }

    pub fn elt_at(&self, mut idx: usize) -> Elt {
        let mut d = [0u8; MAX_EXT_DEGREE];
        for slot in d.iter_mut().take(self.e) {
            *slot = (idx % self.p as usize) as u8;
            idx /= self.p as usize;
        }
        Elt(d)
    }

    /// Embed a prime-field element into this field (same characteristic).
    pub fn embed(&self, a: Elt) -> Elt {
        debug_assert!(a.0[1..].iter().all(|&c| c == 0));
        a
    }

    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        let p = self.p as u16;
        let mut out = [0u8; MAX_EXT_DEGREE];
        for i in 0..self.e {
            let s = a.0[i] as u16 + b.0[i] as u16;
            out[i] = if s >= p { (s - p) as u8 } else { s as u8 };
        }
        Elt(out)
    }

    pub fn neg(&self, a: Elt) -> Elt {
        let p = self.p as u8;
        let mut out = [0u8; MAX_EXT_DEGREE];
        for i in 0..self.e {
            out[i] = if a.0[i] == 0 { 0 } else { p - a.0[i] };
        }
        Elt(out)
    }

    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if self.e == 1 {
            let r = (a.0[0] as u32 * b.0[0] as u32) % self.p;
            let mut out = [0u8; MAX_EXT_DEGREE];
            out[0] = r as u8;
            return Elt(out);
        }
        // Schoolbook product, then reduce by the monic modulus.
        let e = self.e;
        let p = self.p;
        let mut prod = [0u32; 2 * MAX_EXT_DEGREE];
        for i in 0..e {
            if a.0[i] == 0 {
                continue;
            }
            let ai = a.0[i] as u32;
            for j in 0..e {
                prod[i + j] += ai * b.0[j] as u32;
            }
        }
        let modulus = self.modulus.as_ref().unwrap();
        for i in (e..2 * e - 1).rev() {
            let c = prod[i] % p;
            if c != 0 {
                // t^i = -(c_0 t^{i-e} + ... + c_{e-1} t^{i-1})
                for (k, &mc) in modulus.iter().enumerate().take(e) {
                    if mc != 0 {
                        prod[i - e + k] += (p - mc as u32) * c;
                    }
                }
            }
            prod[i] = 0;
        }
        let mut out = [0u8; MAX_EXT_DEGREE];
        for i in 0..e {
            out[i] = (prod[i] % p) as u8;
        }
        Elt(out)
    }

    pub fn inv(&self, a: Elt) -> Result<Elt> {
        if a.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        if !self.inv_table.is_empty() {
            return Ok(self.inv_table[self.index_of(a)]);
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    pub fn div(&self, a: Elt, b: Elt) -> Result<Elt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut base: Elt, mut exp: u64) -> Elt {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elt) -> Elt {
        self.pow(a, self.p as u64)
    }

    pub fn all_elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.q).map(|i| self.elt_at(i))
    }

    fn build_inverse_table(&mut self) {
        if self.q > 4096 {
            return;
        }
        let mut table = vec![Elt::default(); self.q];
        for i in 1..self.q {
            let a = self.elt_at(i);
            table[i] = self.pow(a, (self.q - 2) as u64);
        }
        self.inv_table = table;
    }

    /// Canonical text form: `e = 1` prints the digit, extensions print a
    /// polynomial in `t` with descending powers, e.g. `t^3+t+1`.
    pub fn format_elt(&self, a: Elt) -> String {
        if self.e == 1 {
            return a.0[0].to_string();
        }
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for i in (0..self.e).rev() {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    /// Parses the output of [`Field::format_elt`] plus plain integers.
    pub fn parse_elt(&self, s: &str) -> Result<Elt> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        let mut digits = [0u8; MAX_EXT_DEGREE];
        for part in s.split('+') {
            let part = part.trim();
            let (coeff, power): (i64, usize) = if let Some(rest) = part.strip_prefix("t^") {
                (1, rest.trim().parse().map_err(|_| bad_elt(s))?)
            } else if part == "t" {
                (1, 1)
            } else if let Some((c, tpow)) = part.split_once('*') {
                let c: i64 = c.trim().parse().map_err(|_| bad_elt(s))?;
                let tpow = tpow.trim();
                if tpow == "t" {
                    (c, 1)
                } else if let Some(rest) = tpow.strip_prefix("t^") {
                    (c, rest.trim().parse().map_err(|_| bad_elt(s))?)
                } else {
                    return Err(bad_elt(s));
                }
            } else {
                (part.parse().map_err(|_| bad_elt(s))?, 0)
            };
            if power >= self.e {
                return Err(bad_elt(s));
            }
            let c = (coeff.rem_euclid(self.p as i64)) as u8;
            digits[power] = ((digits[power] as u32 + c as u32) % self.p) as u8;
        }
        Ok(Elt(digits))
    }
}

fn bad_elt(s: &str) -> Error {
    Error::Parse(format!("cannot parse field element `{s}`"))
}

/// Remainder of `a` mod the monic `m` in F_p[t].
fn fp_poly_rem(p: u32, a: &[u8], m: &[u8]) -> Vec<u8> {
    let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &mc) in m.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + (p - mc as u32) * lead) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u8).collect()
}

/// Trial division by every lower-degree monic.
fn poly_is_irreducible(p: u32, m: &[u8]) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..deg {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut divisor = vec![0u8; d + 1];
            divisor[d] = 1;
            let mut k = idx;
            for c in divisor.iter_mut().take(d) {
                *c = (k % p as usize) as u8;
                k /= p as usize;
            }
            if fp_poly_rem(p, m, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First irreducible monic of degree e, non-leading coefficients enumerated
/// by ascending `sum c_i p^i`.
fn smallest_irreducible(p: u32, e: usize) -> Vec<u8> {
    let count = (p as usize).pow(e as u32);
    for idx in 0..count {
        let mut m = vec![0u8; e + 1];
        m[e] = 1;
        let mut k = idx;
        for c in m.iter_mut().take(e) {
            *c = (k % p as usize) as u8;
            k /= p as usize;
        }
        if poly_is_irreducible(p, &m) {
            return m;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}
