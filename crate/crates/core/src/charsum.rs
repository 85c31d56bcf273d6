//! The counting machinery behind the weight frequencies: brute-force
//! |F(c⃗)|, the general character formula, and the e=4, N=2 closed form.
//!
//! F(c⃗) = {(a,b) ∈ GF(r)² : (a + β^i b) g^i c_i ∈ C^(N,r) for all i},
//! and f(c⃗) = #F(c⃗).  The general formula is
//!
//!   f(c⃗) = (r-1)/N^e · Σ_{χ_1..χ_{e-1}} Π χ_i(g^i (1-β^i) c_i c_e^{-1})
//!                                   · Σ_b Π χ_i(b + γ_i),
//!
//! with γ_i = β^i/(1-β^i), and for e=4, N=2 it closes to an expression
//! in the quadratic character and the Frobenius trace π^{ms} + π̄^{ms}.

use crate::code::CodeParams;
use crate::cyclo::CycInt;
use crate::ffield::{Elem, FieldCtx};
use crate::{Error, Result};
use num_rational::Ratio;

/// The class of each c_i modulo N-th powers: residue in [0, N).
/// For N = 2, residue 0 means square, 1 means non-square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPattern(pub Vec<u64>);

impl ClassPattern {
    /// All N^e patterns, in lexicographic order.
    pub fn all(e: u64, n: u64) -> Vec<ClassPattern> {
        let total = n.pow(e as u32);
        (0..total)
            .map(|mut code| {
                let mut v = vec![0u64; e as usize];
                for slot in v.iter_mut() {
                    *slot = code % n;
                    code /= n;
                }
                ClassPattern(v)
            })
            .collect()
    }

    /// Materialize representatives c_i = gen^{residue_i}.
    pub fn representatives(&self, ctx: &FieldCtx) -> Vec<Elem> {
        self.0
            .iter()
            .map(|&res| ctx.pow(ctx.generator(), res as u128))
            .collect()
    }
}

/// Σ_{x ∈ GF(r)} χ((x+a)(x+b)) with χ the quadratic character, by direct
/// summation.  Equals -1 for a ≠ b and r-1 for a = b.
pub fn quad_pair_sum(ctx: &FieldCtx, a: Elem, b: Elem) -> Result<i128> {
    if ctx.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut sum: i128 = 0;
    for x in ctx.elements() {
        let v = ctx.mul(ctx.add(x, a), ctx.add(x, b));
        if v != ctx.zero() {
            sum += if ctx.is_square(v)? { 1 } else { -1 };
        }
    }
    Ok(sum)
}

/// γ_i = β^i/(1-β^i) for i = 1..e-1.
pub fn gamma_constants(params: &CodeParams) -> Result<Vec<Elem>> {
    let ctx = params.field();
    let beta = params.beta();
    (1..params.e)
        .map(|i| {
            let bi = ctx.pow(beta, i as u128);
            let denom = ctx.sub(ctx.one(), bi);
            Ok(ctx.mul(bi, ctx.inv(denom)?))
        })
        .collect()
}

/// f(c⃗) by looping over all (a,b) and testing the class conditions.
pub fn count_f_brute(params: &CodeParams, pattern: &ClassPattern) -> Result<i128> {
    let ctx = params.field();
    let n = params.big_n;
    let e = params.e as usize;
    assert_eq!(pattern.0.len(), e);
    let reps = pattern.representatives(ctx);
    // class offset of g^i c_i, folded once
    let offsets: Vec<u64> = (0..e)
        .map(|i| {
            let gi = ctx.pow(params.g(), (i + 1) as u128);
            let v = ctx.mul(gi, reps[i]);
            ctx.dlog(v).expect("nonzero") % n
        })
        .collect();
    let beta_pows: Vec<Elem> = (1..=params.e)
        .map(|i| ctx.pow(params.beta(), i as u128))
        .collect();
    let mut count: i128 = 0;
    for a in ctx.elements() {
        'pair: for b in ctx.elements() {
            for i in 0..e {
                let s = ctx.add(a, ctx.mul(beta_pows[i], b));
                match ctx.dlog(s) {
                    None => continue 'pair,
                    Some(k) => {
                        if (k + offsets[i]) % n != 0 {
                            continue 'pair;
                        }
                    }
                }
            }
            count += 1;
        }
    }
    Ok(count)
}

/// f(c⃗) via the character formula, exact in Z[ζ_N].
pub fn f_character_formula(params: &CodeParams, pattern: &ClassPattern) -> Result<i128> {
    let ctx = params.field();
    let n = params.big_n;
    let e = params.e as usize;
    assert_eq!(pattern.0.len(), e);
    let nz = n as usize;
    let reps = pattern.representatives(ctx);
    let ce_inv = ctx.inv(reps[e - 1])?;
    let gammas = gamma_constants(params)?;
    // dlog mod N of the fixed arguments g^i (1-β^i) c_i c_e^{-1}
    let arg_logs: Vec<u64> = (1..e)
        .map(|i| {
            let bi = ctx.pow(params.beta(), i as u128);
            let v = ctx.mul(
                ctx.mul(ctx.pow(params.g(), i as u128), ctx.sub(ctx.one(), bi)),
                ctx.mul(reps[i - 1], ce_inv),
            );
            ctx.dlog(v).expect("nonzero argument") % n
        })
        .collect();
    // dlog mod N of b + γ_i for every b, None at the pole
    let shifted_logs: Vec<Vec<Option<u64>>> = gammas
        .iter()
        .map(|&gi| {
            ctx.elements()
                .map(|b| ctx.dlog(ctx.add(b, gi)).map(|k| k % n))
                .collect()
        })
        .collect();
    let mut total = CycInt::zero(nz);
    let tuples = n.pow(e as u32 - 1);
    for mut code in 0..tuples {
        let mut ts = vec![0u64; e - 1];
        for slot in ts.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        // prefactor Π χ_i(arg_i) = ζ_N^{Σ t_i · log(arg_i)}
        let pre: u64 = ts
            .iter()
            .zip(&arg_logs)
            .map(|(&t, &l)| t * l % n)
            .sum::<u64>()
            % n;
        // inner sum over b
        let mut inner = CycInt::zero(nz);
        'b: for b_idx in 0..ctx.card() as usize {
            let mut expo = 0u64;
            for (i, &t) in ts.iter().enumerate() {
                if t == 0 {
                    // principal character: contributes 1 unless at the pole
                    if shifted_logs[i][b_idx].is_none() {
                        continue 'b;
                    }
                    continue;
                }
                match shifted_logs[i][b_idx] {
                    None => continue 'b,
                    Some(l) => expo = (expo + t * l) % n,
                }
            }
            inner.add_zeta_multiple(expo, 1);
        }
        total = total.add(&CycInt::zeta_pow(nz, pre as i64).mul(&inner));
    }
    let k = total
        .as_rational_integer()
        .ok_or_else(|| Error::ExtractionFailed("f(c) character sum is irrational".into()))?;
    let num = (params.r - 1) as i128 * k;
    let den = (n as i128).pow(e as u32);
    if num % den != 0 {
        return Err(Error::ExtractionFailed(format!(
            "f(c) = {num}/{den} is not an integer"
        )));
    }
    Ok(num / den)
}

/// The e=4, N=2 closed form of f(c⃗), given π^{ms} + π̄^{ms}.
pub fn f_closed_e4n2(params: &CodeParams, pattern: &ClassPattern, pi_trace: i128) -> Result<i128> {
    if params.e != 4 || params.big_n != 2 {
        return Err(Error::ClosedFormUnsupported(format!(
            "e={}, N={}",
            params.e, params.big_n
        )));
    }
    assert_eq!(pattern.0.len(), 4);
    let chi = |i: usize, j: usize| -> i128 {
        if (pattern.0[i - 1] + pattern.0[j - 1]) % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let chi_all: i128 = if pattern.0.iter().sum::<u64>() % 2 == 0 {
        1
    } else {
        -1
    };
    let ctx = params.field();
    let gb1 = ctx.mul(params.g(), ctx.add(params.beta(), ctx.one()));
    let chi_g: i128 = if ctx.is_square(gb1)? { 1 } else { -1 };
    let r = params.r as i128;
    let bracket = r - 3 - 2 * chi(2, 4) - 2 * chi(1, 3) - chi_all * pi_trace
        - 2 * chi_g * (chi(3, 4) + chi(1, 4) + chi(2, 3) + chi(1, 2));
    let num = (r - 1) * bracket;
    if num % 16 != 0 {
        return Err(Error::ExtractionFailed(format!(
            "closed f(c) = {num}/16 is not an integer"
        )));
    }
    Ok(num / 16)
}

/// The Weil-bound audit for one pattern:
/// |f(c⃗) - (r-1)(r-e+1)/N^e| ≤ (e-2)(r-1)√r / N, compared in squares.
pub struct WeilAudit {
    pub f: i128,
    pub gap: Ratio<i128>,
    pub bound_sq: Ratio<i128>,
    pub holds: bool,
}

pub fn weil_gap(params: &CodeParams, pattern: &ClassPattern) -> Result<WeilAudit> {
    let f = f_character_formula(params, pattern)?;
    let r = params.r as i128;
    let e = params.e as i128;
    let n = params.big_n as i128;
    let center = Ratio::new((r - 1) * (r - e + 1), n.pow(params.e as u32));
    let gap_signed = Ratio::from_integer(f) - center;
    let gap = if gap_signed < Ratio::from_integer(0) {
        -gap_signed
    } else {
        gap_signed
    };
    let bound_sq = Ratio::new((e - 2) * (e - 2) * (r - 1) * (r - 1) * r, n * n);
    let holds = gap * gap <= bound_sq;
    Ok(WeilAudit {
        f,
        gap,
        bound_sq,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::derive_params;
    use crate::curve::trace_power;
    use crate::ffield::make_field;

    #[test]
    fn lemma31_small_fields() {
        for (p, d) in [(3u64, 2u32), (5, 2)] {
            let f = make_field(p, d, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let s = quad_pair_sum(&f, a, b).unwrap();
                    if a == b {
                        assert_eq!(s, f.card() as i128 - 1);
                    } else {
                        assert_eq!(s, -1);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_identities_e4() {
        // γ_1 - γ_3 = β and γ_2 - γ_3 = γ_1 - γ_2 = β/2
        let p = derive_params(5, 1, 2, 4, 4).unwrap();
        let ctx = p.field();
        let g = gamma_constants(&p).unwrap();
        let beta = p.beta();
        assert_eq!(ctx.sub(g[0], g[2]), beta);
        let half_beta = ctx.mul(beta, ctx.inv(ctx.from_scalar(2)).unwrap());
        assert_eq!(ctx.sub(g[1], g[2]), half_beta);
        assert_eq!(ctx.sub(g[0], g[1]), half_beta);
    }

    #[test]
    fn pattern_partition_gf25() {
        // Σ over all 2^e patterns = (r-1)(r-3) for e = 4
        let p = derive_params(5, 1, 2, 4, 4).unwrap();
        let total: i128 = ClassPattern::all(4, 2)
            .iter()
            .map(|pat| count_f_brute(&p, pat).unwrap())
            .sum();
        assert_eq!(total, 24 * 22);
    }

    #[test]
    fn pattern_invariance_of_brute_count() {
        let p = derive_params(5, 1, 2, 4, 4).unwrap();
        let ctx = p.field();
        let pat = ClassPattern(vec![1, 0, 1, 0]);
        let base = count_f_brute(&p, &pat).unwrap();
        // replace each representative by gen^{res+2k}: same class
        for shift in [2u64, 4, 6] {
            let alt = ClassPattern(pat.0.iter().map(|&r| r + shift).collect());
            // alt residues are taken mod nothing here: representatives are
            // gen^{res}, and res+2k lands in the same square class
            let alt_reps = alt.representatives(ctx);
            let pat_reps = pat.representatives(ctx);
            for (x, y) in alt_reps.iter().zip(&pat_reps) {
                assert_eq!(ctx.is_square(*x).unwrap(), ctx.is_square(*y).unwrap());
            }
            assert_eq!(count_f_brute(&p, &alt).unwrap(), base);
        }
    }

    #[test]
    fn triple_agreement_gf25() {
        let p = derive_params(5, 1, 2, 4, 4).unwrap();
        let t = trace_power(5, 2).unwrap();
        for pat in ClassPattern::all(4, 2) {
            let brute = count_f_brute(&p, &pat).unwrap();
            let formula = f_character_formula(&p, &pat).unwrap();
            let closed = f_closed_e4n2(&p, &pat, t).unwrap();
            assert_eq!(brute, formula, "pattern {:?}", pat.0);
            assert_eq!(brute, closed, "pattern {:?}", pat.0);
        }
    }

    #[test]
    fn closed_form_paper_value() {
        // (17,1,2,4,4), all-squares pattern, g(β+1) square:
        // f = (r-1)(r-15-π^{ms}-π̄^{ms})/16 = 288·304/16 = 5472
        let p = derive_params(17, 1, 2, 4, 4).unwrap();
        let t = trace_power(17, 2).unwrap();
        assert_eq!(t, -30);
        let pat = ClassPattern(vec![0, 0, 0, 0]);
        assert_eq!(f_closed_e4n2(&p, &pat, t).unwrap(), 5472);
    }

    #[test]
    fn weil_bound_gf25() {
        let p = derive_params(5, 1, 2, 4, 4).unwrap();
        for pat in ClassPattern::all(4, 2) {
            assert!(weil_gap(&p, &pat).unwrap().holds);
        }
    }

    #[test]
    fn n1_instance_is_uniform() {
        // e=2, N=1 instance: every pattern has f = (r-1)(r-e+1)
        let p = derive_params(5, 1, 3, 2, 2).unwrap();
        assert_eq!(p.big_n, 1);
        let pat = ClassPattern(vec![0, 0]);
        let f = f_character_formula(&p, &pat).unwrap();
        let r = p.r as i128;
        assert_eq!(f, (r - 1) * (r - 1));
        assert_eq!(count_f_brute(&p, &pat).unwrap(), f);
        // e=2 gives a vanishing Weil gap
        let audit = weil_gap(&p, &pat).unwrap();
        assert_eq!(audit.gap, Ratio::from_integer(0));
        assert!(audit.holds);
    }
}
