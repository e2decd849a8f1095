use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric rate `r` and constant `C` in `‖T^∞ − T^i‖ ≤ C r^{i−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConstants {
    pub rate: f64,
    pub constant: f64,
}

/// Largest γ admitted for `n` projections: `1/(8n − 11)`.
pub fn gamma_limit(n: usize) -> f64 {
    1.0 / (8.0 * n as f64 - 11.0)
}

/// Largest β admitted for `n` projections at angle bound `gamma`.
pub fn beta_limit(n: usize, gamma: f64) -> f64 {
    let n = n as f64;
    1.0 + (1.0 - (8.0 * n - 11.0) * gamma) / (n - 2.0 + (3.0 * n - 4.0) * gamma)
}

/// Rate and constant of the uniform convergence criterion for `n`
/// projections with norms at most `beta` and pairwise angles at most `gamma`.
pub fn theorem_constants(n: usize, beta: f64, gamma: f64) -> Result<RateConstants> {
    if n < 2 {
        return Err(Error::domain(format!("need at least two projections, got {n}")));
    }
    if !(beta.is_finite() && gamma.is_finite()) || gamma < 0.0 || beta < 1.0 {
        return Err(Error::domain(format!("need beta >= 1 and gamma >= 0, got beta={beta}, gamma={gamma}")));
    }
    let out = |reason: String| Error::OutOfRegime { n, beta, gamma, reason };
    if gamma >= gamma_limit(n) {
        return Err(out(format!("gamma must be below 1/(8N-11) = {}", gamma_limit(n))));
    }
    if beta >= beta_limit(n, gamma) {
        return Err(out(format!("beta must be below {}", beta_limit(n, gamma))));
    }
    let nf = n as f64;
    let rate = (1.0 + (nf - 2.0) * beta) / nf + (4.0 - 6.0 / nf) * ((1.0 + beta) / (1.0 - gamma)) * gamma;
    if rate >= 1.0 {
        return Err(out(format!("rate {rate} is not below 1")));
    }
    let constant = (2.0 * nf - 2.0) * beta * beta / (nf * (1.0 - rate));
    Ok(RateConstants { rate, constant })
}

/// Constants of the uniform corollary: any family of `n` projections with
/// norms at most `beta0` and pairwise angles at most `gamma0` converges with
/// rate `(2n−1)/(2n)` and constant `4n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstants {
    pub beta0: f64,
    pub gamma0: f64,
}

/// Grid search: β runs down from 1.1 in steps of 1e-3 (staying above 1),
/// γ runs up in steps of 1e-4. Returns the largest feasible γ; ties go to
/// the larger β.
pub fn find_beta0_gamma0(n: usize) -> Result<CorollaryConstants> {
    if n < 2 {
        return Err(Error::domain(format!("need at least two projections, got {n}")));
    }
    let target_rate = corollary_rate(n);
    let target_constant = 4.0 * n as f64;
    let feasible = |beta: f64, gamma: f64| {
        theorem_constants(n, beta, gamma)
            .map(|c| c.rate <= target_rate && c.constant <= target_constant)
            .unwrap_or(false)
    };
    let mut best: Option<(u32, u32)> = None;
    for k in 0..100u32 {
        let beta = f64::from(1100 - k) / 1000.0;
        let mut j = 0u32;
        while feasible(beta, f64::from(j + 1) / 1e4) {
            j += 1;
        }
        if j > 0 && best.is_none_or(|(_, bj)| j > bj) {
            best = Some((k, j));
        }
    }
    let (k, j) = best.ok_or_else(|| Error::domain(format!("no feasible grid point for N={n}")))?;
    Ok(CorollaryConstants { beta0: f64::from(1100 - k) / 1000.0, gamma0: f64::from(j) / 1e4 })
}

/// `(2n − 1)/(2n)`.
pub fn corollary_rate(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n - 1.0) / (2.0 * n)
}

/// `4n · ((2n − 1)/(2n))^{i−1}`.
pub fn corollary_bound(n: usize, i: usize) -> f64 {
    4.0 * n as f64 * corollary_rate(n).powi(i as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn two_projections_at_gamma_one_tenth() {
        // r = 1/2 + 1·(2/0.9)·0.1, C = 2/(2(1 − r))
        let c = theorem_constants(2, 1.0, 0.1).unwrap();
        assert!(close(c.rate, 0.5 + 2.0 / 9.0), "{}", c.rate);
        assert!(close(c.constant, 3.6), "{}", c.constant);
    }

    #[test]
    fn gamma_zero_cases() {
        let c = theorem_constants(2, 1.0, 0.0).unwrap();
        assert!(close(c.rate, 0.5) && close(c.constant, 2.0));
        let c = theorem_constants(3, 1.0, 0.0).unwrap();
        assert!(close(c.rate, 2.0 / 3.0) && close(c.constant, 4.0));
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(matches!(theorem_constants(2, 1.0, 0.2), Err(Error::OutOfRegime { .. })));
        assert!(matches!(theorem_constants(2, 1.0, 0.5), Err(Error::OutOfRegime { .. })));
        assert!(matches!(theorem_constants(1, 1.0, 0.0), Err(Error::Domain(_))));
        // for N = 2 and gamma = 0 the beta constraint is vacuous
        assert!(close(theorem_constants(2, 5.0, 0.0).unwrap().rate, 0.5));
        let b = beta_limit(3, 0.01);
        assert!(theorem_constants(3, b + 1e-9, 0.01).is_err());
    }

    #[test]
    fn rate_below_one_inside_regime() {
        for n in 2..8 {
            for gi in 0..20 {
                let gamma = gamma_limit(n) * gi as f64 / 20.0;
                let bmax = beta_limit(n, gamma).min(3.0);
                for bi in 0..20 {
                    let beta = 1.0 + (bmax - 1.0) * bi as f64 / 20.0;
                    let c = theorem_constants(n, beta, gamma).unwrap();
                    assert!(c.rate < 1.0 && c.constant > 0.0);
                }
            }
        }
    }

    #[test]
    fn corollary_constants_are_feasible() {
        for n in 2..9 {
            let k = find_beta0_gamma0(n).unwrap();
            assert!(k.beta0 > 1.0 && k.gamma0 > 0.0);
            let c = theorem_constants(n, k.beta0, k.gamma0).unwrap();
            assert!(c.rate <= corollary_rate(n) && c.constant <= 4.0 * n as f64);
        }
        let c = theorem_constants(2, 1.0, 0.0).unwrap();
        assert!(c.rate <= 0.75 && c.constant <= 8.0);
    }
}
