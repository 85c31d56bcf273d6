//! Exact arithmetic in Z[ζ_M], the value space of characters and
//! character sums.
//!
//! A value is stored lazily on the basis ζ^0..ζ^{M-1} (so multiplication
//! is cyclic convolution); equality and rational extraction go through a
//! normal form reduced modulo the M-th cyclotomic polynomial Φ_M.

use std::fmt;

/// An element of Z[ζ_M].
#[derive(Clone, Debug)]
pub struct CycInt {
    order: usize,
    /// Coefficient of ζ^j at index j, 0 ≤ j < order.
    coeffs: Vec<i128>,
}

/// Φ_M as an integer polynomial, little-endian, monic.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i128> {
    assert!(m >= 1);
    // x^m - 1 divided by the product of Φ_d over proper divisors d | m.
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi);
        }
    }
    num
}

/// Exact division of integer polynomials, `den` monic.
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        quot[k - dd] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[k - dd + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

impl CycInt {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        CycInt {
            order,
            coeffs: vec![0; order],
        }
    }

    pub fn from_int(order: usize, k: i128) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = k;
        z
    }

    /// ζ_M^{j mod M}.
    pub fn zeta_pow(order: usize, j: i64) -> Self {
        let mut z = Self::zero(order);
        let idx = (j.rem_euclid(order as i64)) as usize;
        z.coeffs[idx] = 1;
        z
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.order, other.order, "mismatched root-of-unity orders");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycInt {
            order: self.order,
            coeffs,
        }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        assert_eq!(self.order, other.order, "mismatched root-of-unity orders");
        let m = self.order;
        let mut coeffs = vec![0i128; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    coeffs[(i + j) % m] += a * b;
                }
            }
        }
        CycInt {
            order: m,
            coeffs,
        }
    }

    pub fn scale(&self, k: i128) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Add k·ζ^j in place; the workhorse for accumulating character sums.
    pub fn add_zeta_multiple(&mut self, j: u64, k: i128) {
        let idx = (j % self.order as u64) as usize;
        self.coeffs[idx] += k;
    }

    /// Coefficients reduced modulo Φ_M, padded with zeros to length φ(M).
    pub fn normal_form(&self) -> Vec<i128> {
        let m = self.order;
        if m == 1 {
            return self.coeffs.clone();
        }
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for k in (deg..rem.len()).rev() {
            let c = rem[k];
            if c != 0 {
                rem[k] = 0;
                for j in 0..deg {
                    rem[k - deg + j] -= c * phi[j];
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// Some(k) iff the value reduces to the rational integer k.
    pub fn as_rational_integer(&self) -> Option<i128> {
        let nf = self.normal_form();
        if nf[1..].iter().all(|&c| c == 0) {
            Some(nf[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().iter().all(|&c| c == 0)
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.normal_form() == other.normal_form()
    }
}

impl Eq for CycInt {}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 {
                    c.to_string()
                } else if j == 1 {
                    format!("{c}*z")
                } else {
                    format!("{c}*z^{j}")
                }
            })
            .collect();
        write!(f, "{} (order {})", terms.join(" + "), self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zeta_wraps() {
        assert_eq!(CycInt::zeta_pow(5, 5), CycInt::from_int(5, 1));
        for p in [3usize, 5, 7] {
            for j in 1..p as i64 {
                let prod = CycInt::zeta_pow(p, j).mul(&CycInt::zeta_pow(p, p as i64 - j));
                assert_eq!(prod.as_rational_integer(), Some(1));
            }
        }
    }

    #[test]
    fn full_root_sum_vanishes() {
        for p in [2usize, 3, 5, 11, 13] {
            let mut s = CycInt::zero(p);
            for j in 0..p as i64 {
                s = s.add(&CycInt::zeta_pow(p, j));
            }
            assert_eq!(s.as_rational_integer(), Some(0));
        }
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        // (1 + ζ_4)(1 - ζ_4) = 2
        let one = CycInt::from_int(4, 1);
        let z = CycInt::zeta_pow(4, 1);
        let prod = one.add(&z).mul(&one.sub(&z));
        assert_eq!(prod.as_rational_integer(), Some(2));
    }

    #[test]
    fn rational_extraction() {
        assert_eq!(CycInt::from_int(7, 7).as_rational_integer(), Some(7));
        assert_eq!(CycInt::zeta_pow(5, 1).as_rational_integer(), None);
        // ζ_3 + ζ_3² + 4 = 3 after reduction (ζ + ζ² = -1)
        let mut x = CycInt::from_int(3, 4);
        for j in 1..3 {
            x = x.add(&CycInt::zeta_pow(3, j));
        }
        assert_eq!(x.as_rational_integer(), Some(3));
        // and the full sum 1 + ζ + ζ² collapses to zero
        assert_eq!(
            x.add(&CycInt::from_int(3, 1)).as_rational_integer(),
            Some(4)
        );
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    fn arb_cyc(order: usize) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-50i128..50, order).prop_map(move |coeffs| CycInt {
            order,
            coeffs,
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_cyc(12), b in arb_cyc(12), c in arb_cyc(12)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.add(&a.neg()).is_zero());
        }

        #[test]
        fn constant_embedding_roundtrip(k in -1000i128..1000) {
            prop_assert_eq!(CycInt::from_int(9, k).as_rational_integer(), Some(k));
        }
    }
}
