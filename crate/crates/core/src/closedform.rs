//! Assembles the full weight distribution for e=4, N=2 without
//! enumeration: the sixteen non-degenerate class patterns weighted by the
//! closed f(c⃗), the degenerate pairs a = -β^t b, and the zero codeword.
//!
//! Each modified weight λ converts to a Hamming weight by
//! w = n - h(r-1)/(q(q-1)) - λ; every conversion must land on a
//! nonnegative integer or the parameters are invalid.

use crate::chars::periods_closed_n2;
use crate::charsum::{f_closed_e4n2, ClassPattern};
use crate::code::{CodeParams, WeightDistribution};
use crate::curve::trace_power;
use crate::{Error, Result};
use num_rational::Ratio;
use std::collections::BTreeMap;

/// Which branch of the closed form applies: the square class of g(β+1).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CaseSelector {
    pub gb1_square: bool,
}

/// Square test of g(β+1).  This is independent of the choice of
/// generator (GF(q)* consists of squares in GF(r) and two generators
/// differ by an odd exponent), which the tests exercise directly.
pub fn select_case(params: &CodeParams) -> Result<CaseSelector> {
    let ctx = params.field();
    let gb1 = ctx.mul(params.g(), ctx.add(params.beta(), ctx.one()));
    Ok(CaseSelector {
        gb1_square: ctx.is_square(gb1)?,
    })
}

fn require_e4n2(params: &CodeParams) -> Result<()> {
    if params.e != 4 || params.big_n != 2 {
        return Err(Error::ClosedFormUnsupported(format!(
            "e={}, N={}",
            params.e, params.big_n
        )));
    }
    if params.p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ok(())
}

/// The (λ, frequency) pairs of the degenerate case a = -β^t b, b ≠ 0,
/// computed from the general Case-2 expression
/// λ(-β^t b, b) = (hN/eq)·{(r-1)/N + Σ_{i≠t} η_{b g^i (β^i - β^t)}}
/// rather than transcribed from the tabulated rows.
pub fn degenerate_lambdas(params: &CodeParams) -> Result<Vec<(Ratio<i128>, u128)>> {
    require_e4n2(params)?;
    let ctx = params.field();
    let (eta1, eta_a) = periods_closed_n2(params.p, params.s, params.m)?;
    let r = params.r as i128;
    let scale = Ratio::new(
        (params.h * params.big_n) as i128,
        (params.e * params.q) as i128,
    );
    let mut rows: BTreeMap<Ratio<i128>, u128> = BTreeMap::new();
    for t in 1..=params.e {
        let beta_t = ctx.pow(params.beta(), t as u128);
        // square class of the fixed factors g^i(β^i - β^t), i ≠ t
        let classes: Vec<bool> = (1..=params.e)
            .filter(|&i| i != t)
            .map(|i| {
                let gi = ctx.pow(params.g(), i as u128);
                let diff = ctx.sub(ctx.pow(params.beta(), i as u128), beta_t);
                ctx.is_square(ctx.mul(gi, diff))
            })
            .collect::<Result<_>>()?;
        for b_square in [true, false] {
            let eta_sum: i128 = classes
                .iter()
                .map(|&c| if c == b_square { eta1 } else { eta_a })
                .sum();
            let lam = scale * Ratio::from_integer((r - 1) / 2 + eta_sum);
            *rows.entry(lam).or_insert(0) += ((params.r - 1) / 2) as u128;
        }
    }
    Ok(rows.into_iter().collect())
}

fn weight_from_lambda(params: &CodeParams, lam: Ratio<i128>) -> Result<u64> {
    let w = Ratio::from_integer(params.n as i128) - params.base_term() - lam;
    if !w.is_integer() {
        return Err(Error::NonIntegralWeight(format!("λ={lam} gives w={w}")));
    }
    let w = w.to_integer();
    if w < 0 || w > params.n as i128 {
        return Err(Error::NonIntegralWeight(format!("λ={lam} gives w={w}")));
    }
    Ok(w as u64)
}

/// The complete closed-form weight distribution for e=4, N=2.
pub fn closed_weight_distribution(params: &CodeParams) -> Result<WeightDistribution> {
    require_e4n2(params)?;
    let (eta1, eta_a) = periods_closed_n2(params.p, params.s, params.m)?;
    let pi_trace = trace_power(params.p, params.s * params.m)?;
    let scale = Ratio::new(
        (params.h * params.big_n) as i128,
        (params.e * params.q) as i128,
    );
    let mut entries: BTreeMap<u64, u128> = BTreeMap::new();
    // Part 1: the sixteen non-degenerate class patterns
    for pattern in ClassPattern::all(params.e, params.big_n) {
        let freq = f_closed_e4n2(params, &pattern, pi_trace)?;
        if freq < 0 {
            return Err(Error::ExtractionFailed(format!(
                "negative pattern frequency {freq}"
            )));
        }
        if freq == 0 {
            continue;
        }
        // λ = (hN/eq) Σ η_{c_i^{-1}}; inversion preserves the class
        let squares = pattern.0.iter().filter(|&&c| c == 0).count() as i128;
        let lam = scale
            * Ratio::from_integer(squares * eta1 + (params.e as i128 - squares) * eta_a);
        let w = weight_from_lambda(params, lam)?;
        *entries.entry(w).or_insert(0) += freq as u128;
    }
    // Part 2: degenerate pairs a = -β^t b
    for (lam, freq) in degenerate_lambdas(params)? {
        let w = weight_from_lambda(params, lam)?;
        *entries.entry(w).or_insert(0) += freq;
    }
    // the zero codeword
    *entries.entry(0).or_insert(0) += 1;
    let dist = WeightDistribution::from_counts(entries, params.n, params.q);
    let expect = (params.r as u128) * (params.r as u128);
    if dist.total != expect {
        return Err(Error::ExtractionFailed(format!(
            "frequencies sum to {} instead of r² = {expect}",
            dist.total
        )));
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{brute_weight_distribution, derive_params, derive_params_with};

    fn dist_map(pairs: &[(u64, u128)]) -> BTreeMap<u64, u128> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn case_selection_matches_paper() {
        assert!(select_case(&derive_params(17, 1, 2, 4, 4).unwrap())
            .unwrap()
            .gb1_square);
        assert!(!select_case(&derive_params(13, 1, 2, 4, 4).unwrap())
            .unwrap()
            .gb1_square);
        assert!(select_case(&derive_params(3, 2, 2, 4, 4).unwrap())
            .unwrap()
            .gb1_square);
        assert!(!select_case(&derive_params(3, 2, 2, 8, 4).unwrap())
            .unwrap()
            .gb1_square);
    }

    #[test]
    fn example1_distribution() {
        let p = derive_params(17, 1, 2, 4, 4).unwrap();
        let d = closed_weight_distribution(&p).unwrap();
        assert_eq!(
            d.entries,
            dist_map(&[
                (0, 1),
                (48, 576),
                (54, 576),
                (64, 5472),
                (66, 18432),
                (68, 34560),
                (70, 18432),
                (72, 5472),
            ])
        );
        assert_eq!(d.total, 289 * 289);
    }

    #[test]
    fn example2_distribution() {
        let p = derive_params(13, 1, 2, 4, 4).unwrap();
        let d = closed_weight_distribution(&p).unwrap();
        assert_eq!(
            d.entries,
            dist_map(&[
                (0, 1),
                (38, 336),
                (40, 336),
                (48, 1680),
                (50, 7392),
                (52, 9744),
                (54, 7392),
                (56, 1680),
            ])
        );
    }

    #[test]
    fn example4_distribution() {
        let p = derive_params(3, 2, 2, 8, 4).unwrap();
        let d = closed_weight_distribution(&p).unwrap();
        assert_eq!(
            d.entries,
            dist_map(&[
                (0, 1),
                (52, 160),
                (56, 160),
                (64, 320),
                (68, 1920),
                (72, 1760),
                (76, 1920),
                (80, 320),
            ])
        );
    }

    #[test]
    fn degenerate_rows_match_tables() {
        // Example 1 (square case): weights 54 and 48, frequency 576 each.
        let p = derive_params(17, 1, 2, 4, 4).unwrap();
        let rows = degenerate_lambdas(&p).unwrap();
        assert_eq!(rows.len(), 2);
        let freq_total: u128 = rows.iter().map(|&(_, f)| f).sum();
        assert_eq!(freq_total, 4 * (p.r as u128 - 1));
        let weights: Vec<u64> = rows
            .iter()
            .map(|&(lam, _)| weight_from_lambda(&p, lam).unwrap())
            .collect();
        assert_eq!(weights, vec![54, 48]);
        assert!(rows.iter().all(|&(_, f)| f == 576));
        // Example 2 (non-square case): weights 40 and 38, frequency 336.
        let p = derive_params(13, 1, 2, 4, 4).unwrap();
        let rows = degenerate_lambdas(&p).unwrap();
        let mut weights: Vec<u64> = rows
            .iter()
            .map(|&(lam, _)| weight_from_lambda(&p, lam).unwrap())
            .collect();
        weights.sort();
        assert_eq!(weights, vec![38, 40]);
        assert!(rows.iter().all(|&(_, f)| f == 336));
    }

    #[test]
    fn closed_matches_brute_small() {
        for (p, s, m, h, e) in [(5u64, 1u32, 2u32, 4u64, 4u64), (3, 2, 2, 4, 4), (3, 2, 2, 8, 4)] {
            let params = derive_params(p, s, m, h, e).unwrap();
            let closed = closed_weight_distribution(&params).unwrap();
            let brute = brute_weight_distribution(&params).unwrap();
            assert_eq!(closed, brute, "({p},{s},{m},{h},{e})");
        }
    }

    #[test]
    fn eight_distinct_weights_in_examples() {
        for (p, s, m, h, e) in [
            (17u64, 1u32, 2u32, 4u64, 4u64),
            (13, 1, 2, 4, 4),
            (3, 2, 2, 4, 4),
            (3, 2, 2, 8, 4),
        ] {
            let d = closed_weight_distribution(&derive_params(p, s, m, h, e).unwrap()).unwrap();
            assert_eq!(d.entries.len(), 8);
        }
    }

    #[test]
    fn generator_invariance() {
        let base = derive_params(5, 1, 2, 4, 4).unwrap();
        let d0 = closed_weight_distribution(&base).unwrap();
        let c0 = select_case(&base).unwrap();
        let ctx = base.field();
        let mut tried = 0;
        for x in ctx.elements().skip(1) {
            if ctx.pow(x, 12) == ctx.one() || ctx.pow(x, 8) == ctx.one() {
                continue; // not a generator of the order-24 group
            }
            if x == ctx.generator() {
                continue;
            }
            let coeffs = ctx.coeffs(x);
            let p = derive_params_with(5, 1, 2, 4, 4, None, Some(&coeffs)).unwrap();
            assert_eq!(closed_weight_distribution(&p).unwrap(), d0);
            assert_eq!(select_case(&p).unwrap(), c0);
            tried += 1;
            if tried == 3 {
                break;
            }
        }
        assert_eq!(tried, 3);
    }

    #[test]
    fn rejects_wrong_shape() {
        let p = derive_params(5, 1, 3, 2, 2).unwrap(); // N = 1
        assert!(matches!(
            closed_weight_distribution(&p),
            Err(Error::ClosedFormUnsupported(_))
        ));
    }
}
