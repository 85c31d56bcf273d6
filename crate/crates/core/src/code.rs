//! The code C_(q,m,h,e): parameter derivation, codeword synthesis, the
//! exhaustive weight distribution, and the character-sum weight
//! identities Z(a,b) and λ(a,b).
//!
//! A codeword is c_(a,b) = (Tr(a g^i + b (βg)^i))_{i=0..n-1} with
//! g = α^{(q-1)/h}, β = α^{(r-1)/e}, Tr the trace from GF(r) to GF(q).
//! Its Hamming weight is n - Z(a,b) with
//! Z(a,b) = h(r-1)/(q(q-1)) + (hN/eq) Σ_{i=1}^{e} η_{(a+β^i b)g^i}.

use crate::chars::{gaussian_period_direct, PeriodValue};
use crate::cyclo::CycInt;
use crate::ffield::{make_field, make_field_with_generator, Elem, FieldCtx};
use crate::{Error, Result};
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Default cap on r² enumeration pairs unless forced.
pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 32;

/// The tuple (q, m, h, e) with all derived quantities and the field
/// GF(r) it lives in.
pub struct CodeParams {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub h: u64,
    pub e: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    /// N = gcd(m, e(q-1)/h).
    pub big_n: u64,
    ctx: FieldCtx,
    g: Elem,
    beta: Elem,
    periods: OnceLock<PeriodTable>,
}

struct PeriodTable {
    /// η for each coset gen^c · C^(N,r), c = 0..N-1, in Z[ζ_p].
    by_coset: Vec<CycInt>,
    /// η_0 = (r-1)/N.
    eta0: i128,
}

/// Derive all code parameters over the default field construction.
pub fn derive_params(p: u64, s: u32, m: u32, h: u64, e: u64) -> Result<CodeParams> {
    derive_params_with(p, s, m, h, e, None, None)
}

/// Same, but mirroring an externally chosen modulus and/or generator.
pub fn derive_params_with(
    p: u64,
    s: u32,
    m: u32,
    h: u64,
    e: u64,
    modulus: Option<&[u64]>,
    generator: Option<&[u64]>,
) -> Result<CodeParams> {
    if s == 0 || m == 0 {
        return Err(Error::InvalidParams("s and m must be positive".into()));
    }
    let q = p
        .checked_pow(s)
        .ok_or_else(|| Error::InvalidParams("q out of range".into()))?;
    if e == 0 || h == 0 || h % e != 0 {
        return Err(Error::InvalidParams(format!("{e} does not divide h={h}")));
    }
    if (q - 1) % h != 0 {
        return Err(Error::InvalidParams(format!(
            "{h} does not divide q-1={}",
            q - 1
        )));
    }
    let ctx = match generator {
        Some(g) => make_field_with_generator(p, s * m, modulus, g)?,
        None => make_field(p, s * m, modulus)?,
    };
    let r = ctx.card();
    let n = h * ((r - 1) / (q - 1));
    let big_n = gcd(m as u64, e * (q - 1) / h);
    let alpha = ctx.generator();
    let g = ctx.pow(alpha, ((q - 1) / h) as u128);
    let beta = ctx.pow(alpha, ((r - 1) / e) as u128);
    let params = CodeParams {
        p,
        s,
        m,
        h,
        e,
        q,
        r,
        n,
        big_n,
        ctx,
        g,
        beta,
        periods: OnceLock::new(),
    };
    params.check_orders()?;
    Ok(params)
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

impl CodeParams {
    /// Verify ord(g) = n, (gβ)^n = 1 and β^e = 1.
    fn check_orders(&self) -> Result<()> {
        let ctx = &self.ctx;
        if ctx.pow(self.g, self.n as u128) != ctx.one() {
            return Err(Error::InvalidParams("g^n != 1".into()));
        }
        let mut nn = self.n;
        let mut f = 2u64;
        while f * f <= nn {
            if nn % f == 0 {
                if ctx.pow(self.g, (self.n / f) as u128) == ctx.one() {
                    return Err(Error::InvalidParams("order of g is below n".into()));
                }
                while nn % f == 0 {
                    nn /= f;
                }
            }
            f += 1;
        }
        if nn > 1 && ctx.pow(self.g, (self.n / nn) as u128) == ctx.one() {
            return Err(Error::InvalidParams("order of g is below n".into()));
        }
        if ctx.pow(self.beta, self.e as u128) != ctx.one() {
            return Err(Error::InvalidParams("beta^e != 1".into()));
        }
        let gb = ctx.mul(self.g, self.beta);
        if ctx.pow(gb, self.n as u128) != ctx.one() {
            return Err(Error::InvalidParams("(g*beta)^n != 1".into()));
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn g(&self) -> Elem {
        self.g
    }

    pub fn beta(&self) -> Elem {
        self.beta
    }

    /// The codeword c_(a,b), component i = Tr_{r/q}(a g^i + b (βg)^i).
    pub fn codeword(&self, a: Elem, b: Elem) -> Vec<Elem> {
        let ctx = &self.ctx;
        let gb = ctx.mul(self.g, self.beta);
        let mut gi = ctx.one();
        let mut bgi = ctx.one();
        let mut out = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            let t = ctx.add(ctx.mul(a, gi), ctx.mul(b, bgi));
            out.push(ctx.trace_to_subfield(self.s, t).unwrap());
            gi = ctx.mul(gi, self.g);
            bgi = ctx.mul(bgi, gb);
        }
        out
    }

    pub fn hamming_weight(&self, word: &[Elem]) -> u64 {
        word.iter().filter(|&&c| c != self.ctx.zero()).count() as u64
    }

    fn period_table(&self) -> Result<&PeriodTable> {
        if self.periods.get().is_none() {
            let mut by_coset = Vec::with_capacity(self.big_n as usize);
            for c in 0..self.big_n {
                let u = self.ctx.pow(self.ctx.generator(), c as u128);
                match gaussian_period_direct(&self.ctx, self.big_n, u)? {
                    PeriodValue::Integer(k) => {
                        by_coset.push(CycInt::from_int(self.p as usize, k))
                    }
                    PeriodValue::Cyclotomic(cy) => by_coset.push(cy),
                }
            }
            let table = PeriodTable {
                by_coset,
                eta0: ((self.r - 1) / self.big_n) as i128,
            };
            let _ = self.periods.set(table);
        }
        Ok(self.periods.get().unwrap())
    }

    /// Z(a,b): the number of zero components of c_(a,b), as an exact
    /// rational (denominator divides eq).
    pub fn z_value(&self, a: Elem, b: Elem) -> Result<Ratio<i128>> {
        let lam = self.lambda_value(a, b)?;
        Ok(self.base_term() + lam)
    }

    /// h(r-1)/(q(q-1)), the constant part of Z.
    pub fn base_term(&self) -> Ratio<i128> {
        Ratio::new(
            self.h as i128 * (self.r - 1) as i128,
            self.q as i128 * (self.q - 1) as i128,
        )
    }

    /// λ(a,b) = (hN/eq) Σ_{i=1}^{e} η_{(a+β^i b)g^i}.
    pub fn lambda_value(&self, a: Elem, b: Elem) -> Result<Ratio<i128>> {
        let table = self.period_table()?;
        let ctx = &self.ctx;
        let mut sum = CycInt::zero(self.p as usize);
        let mut int_part: i128 = 0;
        for i in 1..=self.e {
            let bi = ctx.pow(self.beta, i as u128);
            let u = ctx.mul(ctx.add(a, ctx.mul(bi, b)), ctx.pow(self.g, i as u128));
            if u == ctx.zero() {
                int_part += table.eta0;
            } else {
                let coset = ctx
                    .dlog(u)
                    .map(|k| k % self.big_n)
                    .ok_or(Error::PeriodsUnavailable)?;
                sum = sum.add(&table.by_coset[coset as usize]);
            }
        }
        let k = sum
            .as_rational_integer()
            .ok_or_else(|| Error::ExtractionFailed("period sum is irrational".into()))?;
        let scale = Ratio::new(
            (self.h * self.big_n) as i128,
            (self.e * self.q) as i128,
        );
        Ok(scale * Ratio::from_integer(k + int_part))
    }
}

/// A weight → count map with code metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub entries: BTreeMap<u64, u128>,
    pub n: u64,
    pub q: u64,
    pub total: u128,
}

impl WeightDistribution {
    pub fn from_counts(entries: BTreeMap<u64, u128>, n: u64, q: u64) -> Self {
        let total = entries.values().sum();
        WeightDistribution {
            entries,
            n,
            q,
            total,
        }
    }
}

/// How to drive the enumeration loop.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl ExecMode {
    /// Parallel when the feature is compiled in, sequential otherwise.
    pub fn auto() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecMode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecMode::Sequential
        }
    }
}

pub struct BruteOptions {
    pub mode: ExecMode,
    pub force: bool,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions {
            mode: ExecMode::auto(),
            force: false,
        }
    }
}

/// Exhaustive weight distribution over all (a,b) ∈ GF(r)².
pub fn brute_weight_distribution(params: &CodeParams) -> Result<WeightDistribution> {
    brute_weight_distribution_with(params, &BruteOptions::default())
}

pub fn brute_weight_distribution_with(
    params: &CodeParams,
    opts: &BruteOptions,
) -> Result<WeightDistribution> {
    let r = params.r;
    let pairs = (r as u128) * (r as u128);
    if !opts.force && pairs > DEFAULT_PAIR_BUDGET {
        return Err(Error::BudgetExceeded {
            pairs,
            limit: DEFAULT_PAIR_BUDGET,
        });
    }
    let kernel = Kernel::build(params);
    let hist = match opts.mode {
        ExecMode::Sequential => {
            let mut hist = vec![0u128; params.n as usize + 1];
            for a in 0..r {
                kernel.row(Elem(a), &mut hist);
            }
            hist
        }
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            (0..r)
                .into_par_iter()
                .fold(
                    || vec![0u128; params.n as usize + 1],
                    |mut hist, a| {
                        kernel.row(Elem(a), &mut hist);
                        hist
                    },
                )
                .reduce(
                    || vec![0u128; params.n as usize + 1],
                    |mut acc, part| {
                        for (a, b) in acc.iter_mut().zip(part) {
                            *a += b;
                        }
                        acc
                    },
                )
        }
    };
    let mut entries = BTreeMap::new();
    for (w, &c) in hist.iter().enumerate() {
        if c != 0 {
            entries.insert(w as u64, c);
        }
    }
    Ok(WeightDistribution::from_counts(entries, params.n, params.q))
}

/// Precomputed enumeration state.  The component test
/// Tr(g^i (a + β^i b)) = 0 becomes one add, one index shift and one
/// bitmap probe: with s = a + β^{i mod e} b nonzero,
/// ker[(log s + i·log g) mod (r-1)] decides the coordinate.
struct Kernel<'a> {
    params: &'a CodeParams,
    beta_pows: Vec<Elem>,
    /// i·log(g) mod (r-1) for i = 0..n.
    offsets: Vec<u64>,
    /// ker[k] = true iff Tr_{r/q}(gen^k) = 0.
    ker: Vec<bool>,
    zero_tr_count_per_cycle: u64,
}

impl<'a> Kernel<'a> {
    fn build(params: &'a CodeParams) -> Self {
        let ctx = params.field();
        let r = params.r;
        let lg = ctx.dlog(params.g).expect("enumeration needs dlog tables");
        let ord = r - 1;
        let beta_pows: Vec<Elem> = (0..params.e)
            .map(|t| ctx.pow(params.beta, t as u128))
            .collect();
        let offsets: Vec<u64> = (0..params.n).map(|i| (i * lg) % ord).collect();
        let mut ker = vec![false; ord as usize];
        let exp = ctx.exp_table();
        for k in 0..ord as usize {
            ker[k] = ctx.trace_to_subfield(params.s, Elem(exp[k])).unwrap() == ctx.zero();
        }
        // when a + β^i b = 0 every coordinate in that residue class is 0
        let zero_tr_count_per_cycle = params.n / params.e;
        Kernel {
            params,
            beta_pows,
            offsets,
            ker,
            zero_tr_count_per_cycle,
        }
    }

    /// Accumulate weights for the full b-row of a fixed a.
    fn row(&self, a: Elem, hist: &mut [u128]) {
        let params = self.params;
        let ctx = params.field();
        let ord = params.r - 1;
        let e = params.e as usize;
        let mut logs = vec![0u64; e];
        let mut zero_slot = vec![false; e];
        for b in 0..params.r {
            let b = Elem(b);
            let mut zeros = 0u64;
            for t in 0..e {
                let s = ctx.add(a, ctx.mul(self.beta_pows[t], b));
                match ctx.dlog(s) {
                    Some(k) => {
                        logs[t] = k;
                        zero_slot[t] = false;
                    }
                    None => {
                        zero_slot[t] = true;
                        zeros += self.zero_tr_count_per_cycle;
                    }
                }
            }
            for (i, &off) in self.offsets.iter().enumerate() {
                let t = i % e;
                if !zero_slot[t] {
                    let k = logs[t] + off;
                    let k = if k >= ord { k - ord } else { k };
                    if self.ker[k as usize] {
                        zeros += 1;
                    }
                }
            }
            hist[(params.n - zeros) as usize] += 1;
        }
    }
}
