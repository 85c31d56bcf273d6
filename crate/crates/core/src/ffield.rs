//! Exact arithmetic in GF(p^d) with a distinguished generator.
//!
//! Elements are packed base-p digit strings: the element with power-basis
//! coefficients (c_0, ..., c_{d-1}) has id Σ c_j p^j, so ids run densely
//! over [0, p^d).  Fields up to [`TABLE_LIMIT`] carry exp/log tables and
//! multiplication is two lookups; larger fields fall back to polynomial
//! arithmetic modulo the field modulus.

use crate::{Error, Result};
use std::sync::OnceLock;

/// Cards at or below this get discrete-log tables at construction.
pub const TABLE_LIMIT: u64 = 1 << 20;

const MAX_DEGREE: usize = 32;

/// A field element, valid only with the [`FieldCtx`] that produced it.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Elem(pub(crate) u64);

impl Elem {
    /// Packed id: Σ c_j p^j over the power basis.
    pub fn id(self) -> u64 {
        self.0
    }
}

/// A concrete finite field GF(p^d).
pub struct FieldCtx {
    p: u64,
    d: u32,
    card: u64,
    /// Monic irreducible of degree d over GF(p), constant term first.
    modulus: Vec<u64>,
    gen: Elem,
    /// exp[k] = id of gen^k, length card-1 (empty when card > TABLE_LIMIT).
    exp: Vec<u64>,
    /// log[id] = k with gen^k = id, log[0] unused.
    log: Vec<u32>,
    trace_p: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("d", &self.d)
            .field("card", &self.card)
            .field("modulus", &self.modulus)
            .field("gen", &self.gen)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All odd prime powers p^n ≤ max, as (p, n, p^n), ascending in p then n.
pub fn odd_prime_powers(max: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in (3..=max).step_by(2) {
        if !is_prime(p) {
            continue;
        }
        let mut card = p;
        let mut n = 1u32;
        while card <= max {
            out.push((p, n, card));
            match card.checked_mul(p) {
                Some(c) => card = c,
                None => break,
            }
            n += 1;
        }
    }
    out
}

// Polynomials over GF(p): little-endian coefficient vectors.

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}


/// Remainder of `num` by monic `den`.
fn poly_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = rem[rem.len() - 1];
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for (j, &c) in den.iter().enumerate() {
                let t = (c * lead) % p;
                let idx = shift + j;
                rem[idx] = (rem[idx] + p - t) % p;
            }
        }
        rem.pop();
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    rem
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = p.pow(k as u32);
        for packed in 0..count {
            let mut g = unpack_digits(packed, p, k + 1);
            g[k] = 1;
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn unpack_digits(mut id: u64, p: u64, len: usize) -> Vec<u64> {
    let mut v = vec![0u64; len];
    for c in v.iter_mut() {
        *c = id % p;
        id /= p;
    }
    v
}

/// Construct GF(p^d).  With no modulus, picks the lexicographically
/// smallest monic irreducible (coefficient vectors scanned in ascending
/// numeric order); the generator is the smallest element of full order.
pub fn make_field(p: u64, d: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    FieldCtx::build(p, d, modulus, None)
}

/// Same as [`make_field`] but with a caller-supplied generator, so a
/// third-party system's field can be mirrored exactly.
pub fn make_field_with_generator(
    p: u64,
    d: u32,
    modulus: Option<&[u64]>,
    gen_coeffs: &[u64],
) -> Result<FieldCtx> {
    FieldCtx::build(p, d, modulus, Some(gen_coeffs))
}

impl FieldCtx {
    fn build(p: u64, d: u32, modulus: Option<&[u64]>, gen_coeffs: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        if (d as usize) > MAX_DEGREE {
            return Err(Error::InvalidParams(format!("degree {d} too large")));
        }
        let card = p
            .checked_pow(d)
            .filter(|&c| c <= 1 << 48)
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{d} out of range")))?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != d as usize + 1
                    || m[d as usize] != 1
                    || m.iter().any(|&c| c >= p)
                {
                    return Err(Error::BadModulus { expected: d });
                }
                if !poly_is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m.to_vec()
            }
            None => {
                let mut found = None;
                for packed in 0..card {
                    let mut f = unpack_digits(packed, p, d as usize + 1);
                    f[d as usize] = 1;
                    if poly_is_irreducible(&f, p) {
                        found = Some(f);
                        break;
                    }
                }
                found.ok_or(Error::ReducibleModulus)?
            }
        };
        let mut ctx = FieldCtx {
            p,
            d,
            card,
            modulus,
            gen: Elem(0),
            exp: Vec::new(),
            log: Vec::new(),
            trace_p: OnceLock::new(),
        };
        let factors = prime_factors(card - 1);
        let gen = match gen_coeffs {
            Some(coeffs) => {
                let g = ctx.elem_from_coeffs(coeffs)?;
                if !ctx.has_full_order(g, &factors) {
                    return Err(Error::NotAGenerator);
                }
                g
            }
            None => {
                let mut found = None;
                for id in 1..card {
                    if ctx.has_full_order(Elem(id), &factors) {
                        found = Some(Elem(id));
                        break;
                    }
                }
                found.ok_or(Error::NotAGenerator)?
            }
        };
        ctx.gen = gen;
        if card <= TABLE_LIMIT {
            let mut exp = vec![0u64; (card - 1) as usize];
            let mut log = vec![0u32; card as usize];
            let mut cur = Elem(1);
            for (k, slot) in exp.iter_mut().enumerate() {
                *slot = cur.0;
                log[cur.0 as usize] = k as u32;
                cur = ctx.mul_poly(cur, gen);
            }
            ctx.exp = exp;
            ctx.log = log;
        }
        Ok(ctx)
    }

    fn has_full_order(&self, x: Elem, factors: &[u64]) -> bool {
        if x == self.zero() {
            return false;
        }
        let ord = self.card - 1;
        factors
            .iter()
            .all(|&f| self.pow(x, (ord / f) as u128) != self.one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn card(&self) -> u64 {
        self.card
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.gen
    }

    pub fn has_tables(&self) -> bool {
        !self.exp.is_empty()
    }

    pub(crate) fn exp_table(&self) -> &[u64] {
        &self.exp
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.card).map(Elem)
    }

    pub fn elem_from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.d as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::BadModulus { expected: self.d });
        }
        let mut id = 0u64;
        for &c in coeffs.iter().rev() {
            id = id * self.p + c;
        }
        Ok(Elem(id))
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        unpack_digits(x.0, self.p, self.d as usize)
    }

    /// Scalar embedding GF(p) → GF(p^d).
    pub fn from_scalar(&self, c: u64) -> Elem {
        Elem(c % self.p)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        let mut x = a.0;
        let mut y = b.0;
        let mut out = 0u64;
        let mut base = 1u64;
        for _ in 0..self.d {
            let s = (x % p + y % p) % p;
            out += s * base;
            base *= p;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p;
        let mut x = a.0;
        let mut out = 0u64;
        let mut base = 1u64;
        for _ in 0..self.d {
            let c = x % p;
            out += if c == 0 { 0 } else { p - c } * base;
            base *= p;
            x /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        let d = self.d as usize;
        let mut av = [0u64; MAX_DEGREE];
        let mut bv = [0u64; MAX_DEGREE];
        let (mut x, mut y) = (a.0, b.0);
        for i in 0..d {
            av[i] = x % p;
            bv[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..d {
            if av[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + av[i] * bv[j]) % p;
            }
        }
        // reduce modulo the monic modulus
        for k in (d..2 * d - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..d {
                let t = (self.modulus[j] * lead) % p;
                prod[k - d + j] = (prod[k - d + j] + p - t) % p;
            }
        }
        let mut id = 0u64;
        for i in (0..d).rev() {
            id = id * p + prod[i];
        }
        Elem(id)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        if !self.exp.is_empty() {
            let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64)
                % (self.card - 1);
            Elem(self.exp[k as usize])
        } else {
            self.mul_poly(a, b)
        }
    }

    pub fn pow(&self, a: Elem, mut e: u128) -> Elem {
        if a.0 == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        if !self.exp.is_empty() {
            let ord = (self.card - 1) as u128;
            let k = (self.log[a.0 as usize] as u128 * (e % ord)) % ord;
            return Elem(self.exp[k as usize]);
        }
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let ord = self.card - 1;
            let k = (ord - self.log[a.0 as usize] as u64) % ord;
            return Ok(Elem(self.exp[k as usize]));
        }
        Ok(self.pow(a, (self.card - 2) as u128))
    }

    /// Discrete log w.r.t. the context generator (table-backed fields only).
    pub fn dlog(&self, a: Elem) -> Option<u64> {
        if a.0 == 0 || self.log.is_empty() {
            None
        } else {
            Some(self.log[a.0 as usize] as u64)
        }
    }

    pub fn elem_from_dlog(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.card - 1)) as usize])
    }

    /// Tr from GF(p^d) down to GF(p^sub_degree):
    /// Σ_{i=0}^{d/t - 1} x^{(p^t)^i}.
    pub fn trace_to_subfield(&self, sub_degree: u32, x: Elem) -> Result<Elem> {
        if sub_degree == 0 || self.d % sub_degree != 0 {
            return Err(Error::SubdegreeMismatch {
                sub: sub_degree,
                degree: self.d,
            });
        }
        let q = (self.p as u128).pow(sub_degree);
        let mut acc = self.zero();
        let mut cur = x;
        for _ in 0..self.d / sub_degree {
            acc = self.add(acc, cur);
            cur = self.pow(cur, q);
        }
        Ok(acc)
    }

    /// Absolute trace down to GF(p), as an integer in [0, p).
    pub fn trace_p(&self, x: Elem) -> u64 {
        self.trace_p_table()[x.0 as usize] as u64
    }

    /// Table of absolute traces, built once by linearity over the basis.
    pub(crate) fn trace_p_table(&self) -> &[u32] {
        self.trace_p.get_or_init(|| {
            let d = self.d as usize;
            let p = self.p;
            let mut basis_tr = vec![0u64; d];
            let mut b = self.one();
            let root = self.elem_from_coeffs(&if d == 1 { vec![0] } else { vec![0, 1] }).unwrap();
            for t in basis_tr.iter_mut() {
                let tr = self.trace_to_subfield(1, b).unwrap();
                *t = tr.0; // element of GF(p): packed id < p
                b = if d == 1 { b } else { self.mul(b, root) };
            }
            let mut table = vec![0u32; self.card as usize];
            for (id, slot) in table.iter_mut().enumerate() {
                let digits = unpack_digits(id as u64, p, d);
                let mut s = 0u64;
                for j in 0..d {
                    s += digits[j] * basis_tr[j];
                }
                *slot = (s % p) as u32;
            }
            table
        })
    }

    /// True iff x is a nonzero square: x^{(card-1)/2} = 1.
    pub fn is_square(&self, x: Elem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if x.0 == 0 {
            return Err(Error::ZeroElement);
        }
        if let Some(k) = self.dlog(x) {
            return Ok(k % 2 == 0);
        }
        Ok(self.pow(x, ((self.card - 1) / 2) as u128) == self.one())
    }

    /// Parse "c0,c1,..." (constant term first) into an element.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let coeffs = parse_coeffs(s)?;
        self.elem_from_coeffs(&coeffs)
    }

    pub fn format_elem(&self, x: Elem) -> String {
        self.coeffs(x)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Parse a comma-separated coefficient list, constant term first.
pub fn parse_coeffs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        assert_eq!(make_field(17, 2, None).unwrap().card(), 289);
        assert_eq!(make_field(3, 4, None).unwrap().card(), 81);
        assert!(matches!(make_field(4, 2, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(5, 0, None), Err(Error::ZeroDegree)));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1 = (x-1)(x+1) over GF(5)
        assert!(matches!(
            make_field(5, 2, Some(&[4, 0, 1])),
            Err(Error::ReducibleModulus)
        ));
    }

    #[test]
    fn prime_field_generators() {
        assert_eq!(make_field(5, 1, None).unwrap().generator().id(), 2);
        assert_eq!(make_field(7, 1, None).unwrap().generator().id(), 3);
    }

    #[test]
    fn gf9_generator_has_order_8() {
        let f = make_field(3, 2, None).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut cur = f.one();
        for _ in 0..8 {
            cur = f.mul(cur, g);
            seen.insert(cur);
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(cur, f.one());
    }

    #[test]
    fn generator_determinism() {
        let a = make_field(13, 2, None).unwrap();
        let b = make_field(13, 2, None).unwrap();
        assert_eq!(a.generator(), b.generator());
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn field_axioms_sampled() {
        let f = make_field(3, 4, None).unwrap();
        let xs: Vec<Elem> = f.elements().step_by(7).collect();
        for &x in &xs {
            for &y in &xs {
                assert_eq!(f.mul(x, y), f.mul(y, x));
                for &z in &xs {
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                }
            }
            if x != f.zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn trace_of_subfield_element_is_multiple() {
        // Tr: GF(81) -> GF(3) of 1 is 4*1 = 1 in GF(3).
        let f = make_field(3, 4, None).unwrap();
        assert_eq!(f.trace_to_subfield(1, f.one()).unwrap(), f.one());
        // c in GF(9) c GF(81): Tr_{81/9}(c) = 2c.
        let sub_gen = f.pow(f.generator(), 10); // order 8 element spans GF(9)
        let c = sub_gen;
        let tr = f.trace_to_subfield(2, c).unwrap();
        assert_eq!(tr, f.add(c, c));
    }

    #[test]
    fn trace_additivity_and_frobenius_invariance() {
        let f = make_field(5, 2, None).unwrap();
        for x in f.elements() {
            for y in f.elements().step_by(3) {
                assert_eq!(
                    f.trace_to_subfield(1, f.add(x, y)).unwrap(),
                    f.add(
                        f.trace_to_subfield(1, x).unwrap(),
                        f.trace_to_subfield(1, y).unwrap()
                    )
                );
            }
            let frob = f.pow(x, 5);
            assert_eq!(
                f.trace_to_subfield(1, x).unwrap(),
                f.trace_to_subfield(1, frob).unwrap()
            );
        }
    }

    #[test]
    fn trace_kernel_size() {
        // #{x : Tr_{r/q}(x) = 0} = r/q for GF(81) over GF(9).
        let f = make_field(3, 4, None).unwrap();
        let k = f
            .elements()
            .filter(|&x| f.trace_to_subfield(2, x).unwrap() == f.zero())
            .count();
        assert_eq!(k as u64, 81 / 9);
    }

    #[test]
    fn square_counts_and_multiplicativity() {
        for (p, d) in [(3u64, 2u32), (5, 2), (7, 1), (13, 1), (3, 4)] {
            let f = make_field(p, d, None).unwrap();
            let squares = f
                .elements()
                .skip(1)
                .filter(|&x| f.is_square(x).unwrap())
                .count() as u64;
            assert_eq!(squares, (f.card() - 1) / 2);
            let g = f.generator();
            assert!(f.is_square(f.mul(g, g)).unwrap());
            assert!(!f.is_square(g).unwrap());
            for x in f.elements().skip(1) {
                for y in f.elements().skip(1).step_by(5) {
                    let lhs = f.is_square(f.mul(x, y)).unwrap();
                    let rhs = f.is_square(x).unwrap() == f.is_square(y).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn subfield_units_are_squares_when_m_even() {
        // 2 in GF(q) seen inside GF(r), r = q^2, is a square in GF(r).
        let f = make_field(17, 2, None).unwrap();
        let two = f.from_scalar(2);
        assert!(f.is_square(two).unwrap());
    }

    #[test]
    fn tables_match_poly_arithmetic() {
        let f = make_field(3, 4, None).unwrap();
        for x in f.elements() {
            for y in f.elements().step_by(11) {
                assert_eq!(f.mul(x, y), f.mul_poly(x, y));
            }
        }
    }

    #[test]
    fn coeff_roundtrip() {
        let f = make_field(5, 3, None).unwrap();
        let x = f.elem_from_coeffs(&[2, 1, 1]).unwrap();
        assert_eq!(f.coeffs(x), vec![2, 1, 1]);
        assert_eq!(f.parse_elem("2,1,1").unwrap(), x);
        assert_eq!(f.format_elem(x), "2,1,1");
    }

    #[test]
    fn odd_prime_power_list() {
        let pp = odd_prime_powers(30);
        assert!(pp.contains(&(3, 1, 3)));
        assert!(pp.contains(&(3, 3, 27)));
        assert!(pp.contains(&(5, 2, 25)));
        assert!(!pp.iter().any(|&(p, _, _)| p == 2));
        assert!(pp.iter().all(|&(_, _, c)| c <= 30));
    }
}
