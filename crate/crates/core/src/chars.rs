//! Additive and multiplicative characters of GF(r) and Gaussian periods.
//!
//! ψ(x) = ζ_p^{Tr_p(x)} is the canonical additive character; χ_j is the
//! multiplicative character of order dividing N with χ_j(α^k) = ζ_N^{jk}.
//! The Gaussian period η_u = Σ_{z ∈ C^(N,r)} ψ(zu) sums ψ over the
//! N-th-power class, and for N = 2 closes to (-1 - σ√r)/2.

use crate::cyclo::CycInt;
use crate::ffield::{Elem, FieldCtx};
use crate::{Error, Result};

/// ζ_p^{Tr_p(x)} as an exact element of Z[ζ_p].
pub fn psi(ctx: &FieldCtx, x: Elem) -> CycInt {
    CycInt::zeta_pow(ctx.p() as usize, ctx.trace_p(x) as i64)
}

/// A multiplicative character of order dividing `order_divisor`,
/// identified by χ(α^k) = ζ_N^{index·k}.
#[derive(Copy, Clone, Debug)]
pub struct MultChar<'a> {
    pub ctx: &'a FieldCtx,
    pub order_divisor: u64,
    pub index: u64,
}

impl<'a> MultChar<'a> {
    pub fn new(ctx: &'a FieldCtx, order_divisor: u64, index: u64) -> Result<Self> {
        if order_divisor == 0 || (ctx.card() - 1) % order_divisor != 0 {
            return Err(Error::BadClassOrder {
                n: order_divisor,
                order: ctx.card() - 1,
            });
        }
        Ok(MultChar {
            ctx,
            order_divisor,
            index: index % order_divisor,
        })
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// χ(x), with the convention χ(0) = 0.
    pub fn value(&self, x: Elem) -> CycInt {
        let n = self.order_divisor as usize;
        match self.ctx.dlog(x) {
            None => CycInt::zero(n),
            Some(k) => CycInt::zeta_pow(n, (self.index * (k % self.order_divisor)) as i64),
        }
    }

    /// Exponent j with χ(x) = ζ_N^j, or None at x = 0.
    pub fn exponent(&self, x: Elem) -> Option<u64> {
        self.ctx
            .dlog(x)
            .map(|k| (self.index * (k % self.order_divisor)) % self.order_divisor)
    }
}

/// A Gaussian period: a rational integer when the character sum
/// collapses, the raw cyclotomic value otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum PeriodValue {
    Integer(i128),
    Cyclotomic(CycInt),
}

impl PeriodValue {
    pub fn as_integer(&self) -> Option<i128> {
        match self {
            PeriodValue::Integer(k) => Some(*k),
            PeriodValue::Cyclotomic(_) => None,
        }
    }
}

/// η_u^(N,r) = Σ_{z ∈ C^(N,r)} ψ(zu) by direct summation over the class.
pub fn gaussian_period_direct(ctx: &FieldCtx, n: u64, u: Elem) -> Result<PeriodValue> {
    let order = ctx.card() - 1;
    if n == 0 || order % n != 0 {
        return Err(Error::BadClassOrder { n, order });
    }
    let p = ctx.p() as usize;
    let tr = ctx.trace_p_table();
    let mut counts = vec![0i128; p];
    if ctx.has_tables() {
        let exp = ctx.exp_table();
        match ctx.dlog(u) {
            Some(lu) => {
                let mut k = lu;
                for _ in 0..order / n {
                    counts[tr[exp[k as usize] as usize] as usize] += 1;
                    k = (k + n) % order;
                }
            }
            None => counts[0] = (order / n) as i128,
        }
    } else {
        let step = ctx.pow(ctx.generator(), n as u128);
        let mut z = ctx.one();
        for _ in 0..order / n {
            counts[tr[ctx.mul(z, u).id() as usize] as usize] += 1;
            z = ctx.mul(z, step);
        }
    }
    let mut acc = CycInt::zero(p);
    for (j, &c) in counts.iter().enumerate() {
        if c != 0 {
            acc.add_zeta_multiple(j as u64, c);
        }
    }
    match acc.as_rational_integer() {
        Some(k) => Ok(PeriodValue::Integer(k)),
        None => Ok(PeriodValue::Cyclotomic(acc)),
    }
}

/// Closed Gaussian periods for N = 2 over GF(p^{sm}):
/// η_1 = (-1 - σ·p^{sm/2})/2 with σ = (-1)^{sm} for p ≡ 1 (mod 4) and
/// σ = (-i)^{sm} = (-1)^{sm/2} for p ≡ 3 (mod 4); η_α = -1 - η_1.
pub fn periods_closed_n2(p: u64, s: u32, m: u32) -> Result<(i128, i128)> {
    if p % 2 == 0 {
        return Err(Error::EvenCharacteristic);
    }
    let sm = s * m;
    if sm % 2 != 0 {
        return Err(Error::InvalidParams(
            "closed N=2 periods require sm even".into(),
        ));
    }
    let sqrt_r = (p as i128).pow(sm / 2);
    let sigma: i128 = if p % 4 == 1 {
        1 // (-1)^{sm}, sm even
    } else if (sm / 2) % 2 == 0 {
        1
    } else {
        -1
    };
    let eta1 = (-1 - sigma * sqrt_r) / 2;
    Ok((eta1, -1 - eta1))
}
