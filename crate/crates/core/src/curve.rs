//! Point counting for E: y² = x³ + 4x over GF(p^n).
//!
//! N_n = 1 + p^n - π^n - π̄^n where π is the primary Gaussian prime above
//! p for p ≡ 1 (mod 4), and π = i√p in the supersingular case
//! p ≡ 3 (mod 4).  π^n + π̄^n is computed by the integer Lucas recurrence
//! t_k = (π+π̄)t_{k-1} - p·t_{k-2}.

use crate::ffield::{is_prime, Elem, FieldCtx};
use crate::{Error, Result};

/// A Gaussian integer a + bi.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn norm(self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        GaussInt {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        GaussInt {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        GaussInt {
            re: self.re - other.re,
            im: self.im - other.im,
        }
    }

    /// True iff `self` is divisible by 2 + 2i in Z[i]:
    /// self · (2 - 2i) ≡ 0 (mod 8) componentwise.
    pub fn divisible_by_2_plus_2i(self) -> bool {
        let t = self.mul(GaussInt::new(2, -2));
        t.re % 8 == 0 && t.im % 8 == 0
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    base = acc as u64;
    base
}

/// The primary Gaussian prime over p ≡ 1 (mod 4): norm p and
/// π ≡ 1 (mod 2+2i), preferring nonnegative imaginary part.
pub fn primary_pi(p: u64) -> Result<GaussInt> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::InvalidParams(format!("{p} is not 1 mod 4")));
    }
    // square root of -1 mod p from the first quadratic non-residue
    let mut x = 0u64;
    for c in 2..p {
        if mod_pow(c, (p - 1) / 2, p) == p - 1 {
            x = mod_pow(c, (p - 1) / 4, p);
            break;
        }
    }
    // Cornacchia descent on (p, x) down to a remainder below √p
    let (mut a, mut b) = (p as i128, x as i128);
    let bound = isqrt(p as i128);
    while b > bound {
        let t = a % b;
        a = b;
        b = t;
    }
    let c2 = p as i128 - b * b;
    let c = isqrt(c2);
    debug_assert_eq!(b * b + c * c, p as i128);
    // scan the eight associates/conjugates for the primary one
    let mut candidates = Vec::new();
    for &(re, im) in &[(b, c), (c, b)] {
        for &sr in &[1i128, -1] {
            for &si in &[1i128, -1] {
                candidates.push(GaussInt::new(sr * re, si * im));
            }
        }
    }
    let mut primary: Vec<GaussInt> = candidates
        .into_iter()
        .filter(|z| z.sub(GaussInt::new(1, 0)).divisible_by_2_plus_2i())
        .collect();
    primary.sort_by_key(|z| (-z.im.signum(), z.re));
    primary
        .first()
        .copied()
        .ok_or_else(|| Error::ExtractionFailed(format!("no primary associate for p={p}")))
}

/// π^n + π̄^n as an exact integer.
pub fn trace_power(p: u64, n: u32) -> Result<i128> {
    if p % 2 == 0 {
        return Err(Error::EvenCharacteristic);
    }
    if p % 4 == 3 {
        // π = i√p: odd powers cancel, even powers give 2(-p)^{n/2}
        return Ok(if n % 2 == 1 {
            0
        } else {
            2 * (-(p as i128)).pow(n / 2)
        });
    }
    let pi = primary_pi(p)?;
    let t1 = 2 * pi.re;
    let mut prev: i128 = 2;
    let mut cur = t1;
    if n == 0 {
        return Ok(2);
    }
    for _ in 1..n {
        let next = t1 * cur - (p as i128) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// N_n = 1 + p^n - (π^n + π̄^n), the point count of E over GF(p^n)
/// including the point at infinity.
pub fn count_points_closed(p: u64, n: u32) -> Result<i128> {
    let t = trace_power(p, n)?;
    Ok(1 + (p as i128).pow(n) - t)
}

/// The cubic on the right-hand side of the curve equation.
pub enum Cubic {
    /// y² = x³ + 4x
    FourX,
    /// y² = (x + g₁)(x + g₂)(x + g₃)
    Shifted([Elem; 3]),
}

/// Count points of y² = cubic(x) over the field by looping x and testing
/// squareness; optionally adds the point at infinity.
pub fn count_points_brute(ctx: &FieldCtx, cubic: &Cubic, include_infinity: bool) -> Result<u128> {
    if ctx.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let four = ctx.from_scalar(4 % ctx.p());
    let mut count: u128 = if include_infinity { 1 } else { 0 };
    for x in ctx.elements() {
        let rhs = match cubic {
            Cubic::FourX => {
                let x2 = ctx.mul(x, x);
                ctx.mul(x, ctx.add(x2, four))
            }
            Cubic::Shifted(roots) => {
                let mut v = ctx.one();
                for &g in roots {
                    v = ctx.mul(v, ctx.add(x, g));
                }
                v
            }
        };
        if rhs == ctx.zero() {
            count += 1;
        } else if ctx.is_square(rhs)? {
            count += 2;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    #[test]
    fn primary_pis_match_paper() {
        assert_eq!(primary_pi(17).unwrap(), GaussInt::new(1, 4));
        assert_eq!(primary_pi(13).unwrap(), GaussInt::new(3, 2));
        assert_eq!(primary_pi(5).unwrap(), GaussInt::new(-1, 2));
        assert!(primary_pi(7).is_err());
        assert!(primary_pi(15).is_err());
    }

    #[test]
    fn primary_condition_holds() {
        for p in [5u64, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101] {
            let pi = primary_pi(p).unwrap();
            assert_eq!(pi.norm(), p as i128);
            assert!(pi.sub(GaussInt::new(1, 0)).divisible_by_2_plus_2i());
            assert!(pi.im >= 0);
        }
    }

    #[test]
    fn trace_powers() {
        // (1+4i)² + (1-4i)² = -30
        assert_eq!(trace_power(17, 2).unwrap(), -30);
        assert_eq!(trace_power(3, 1).unwrap(), 0);
        assert_eq!(trace_power(3, 4).unwrap(), 18);
        assert_eq!(trace_power(7, 3).unwrap(), 0);
    }

    #[test]
    fn trace_power_is_conjugate_invariant() {
        // the recurrence only uses π + π̄ = 2 Re π, so computing with the
        // conjugate explicitly must agree
        for p in [5u64, 13, 17, 29] {
            let pi = primary_pi(p).unwrap();
            let mut z = GaussInt::new(1, 0);
            let mut zb = GaussInt::new(1, 0);
            for n in 1..=6u32 {
                z = z.mul(pi);
                zb = zb.mul(pi.conj());
                assert_eq!(z.re + zb.re, trace_power(p, n).unwrap());
                assert_eq!(z.im + zb.im, 0);
            }
        }
    }

    #[test]
    fn closed_counts_small() {
        assert_eq!(count_points_closed(17, 1).unwrap(), 16);
        assert_eq!(count_points_closed(5, 1).unwrap(), 8);
        assert_eq!(count_points_closed(3, 1).unwrap(), 4);
    }

    #[test]
    fn brute_counts_small() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(count_points_brute(&f5, &Cubic::FourX, true).unwrap(), 8);
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(count_points_brute(&f3, &Cubic::FourX, true).unwrap(), 4);
    }

    #[test]
    fn closed_equals_brute_sample() {
        for (p, n) in [(3u64, 2u32), (5, 2), (7, 2), (11, 1), (13, 1), (3, 4), (17, 2)] {
            let f = make_field(p, n, None).unwrap();
            let brute = count_points_brute(&f, &Cubic::FourX, true).unwrap();
            let closed = count_points_closed(p, n).unwrap();
            assert_eq!(brute as i128, closed, "p={p} n={n}");
        }
    }

    #[test]
    fn hasse_bound() {
        for (p, n, card) in crate::ffield::odd_prime_powers(2000) {
            let t = trace_power(p, n).unwrap();
            assert!(t * t <= 4 * card as i128);
        }
    }
}
