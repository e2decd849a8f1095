use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::field::SUPPORTED_ORDERS;
use crate::spectra::generators::{projective_plane_graph, symplectic_quadrangle_graph};
use crate::spectra::graph::BipartiteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgonParams {
    pub m: usize,
    pub s: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub kappa: f64,
    pub v_min: usize,
    pub r: f64,
    /// `(1 − κ)·V_min^{1/r}`.
    pub b_value: f64,
    pub mgon_params: Option<MgonParams>,
}

impl SpectralReport {
    pub fn recompute(&self) -> f64 {
        b_value(self.kappa, self.v_min, self.r)
    }
}

pub fn b_value(kappa: f64, v_min: usize, r: f64) -> f64 {
    (1.0 - kappa) * (v_min as f64).powf(1.0 / r)
}

pub fn b_delta_r(g: &BipartiteGraph, r: f64) -> Result<SpectralReport> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::domain(format!("r must be a finite real >= 1, got {r}")));
    }
    let kappa = g.kappa()?;
    let v_min = g.v_min();
    Ok(SpectralReport { kappa, v_min, r, b_value: b_value(kappa, v_min, r), mgon_params: None })
}

/// `V_min` of a generalized `m`-gon of order `(s, t)` with `s ≥ t`.
/// Returns the count and, when `s < t`, a notice that the two were swapped.
pub fn mgon_vmin(m: usize, s: usize, t: usize) -> Result<(u64, Option<String>)> {
    if s == 0 || t == 0 {
        return Err(Error::domain("orders s and t must be at least 1"));
    }
    let (s, t, notice) = if s < t {
        (t, s, Some(format!("s={s} < t={t}; using (s, t) = ({t}, {s})")))
    } else {
        (s, t, None)
    };
    let (s, t) = (s as u64, t as u64);
    let st = s * t;
    let v = match m {
        3 => t * t + t + 1,
        4 => (st + 1) * (t + 1),
        6 => (st * st + st + 1) * (t + 1),
        8 => (st * st + 1) * (st + 1) * (t + 1),
        _ => return Err(Error::domain(format!("m must be one of 3, 4, 6, 8, got {m}"))),
    };
    Ok((v, notice))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: usize,
    pub kappa: f64,
    pub v_min: usize,
    pub b_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub m_prime: usize,
    pub r: f64,
    pub delta: f64,
    /// Smallest swept `q` with `b_value ≤ delta`.
    pub found: Option<usize>,
    pub table: Vec<SweepRow>,
    pub regime_warning: Option<String>,
}

/// Orders swept for each `m'`: projective planes for 3, symplectic
/// quadrangles for 4.
pub fn sweep_orders(m_prime: usize) -> Result<&'static [usize]> {
    match m_prime {
        3 => Ok(&SUPPORTED_ORDERS),
        4 => Ok(&SUPPORTED_ORDERS[..4]),
        _ => Err(Error::domain(format!("m' must be 3 or 4, got {m_prime}"))),
    }
}

/// Link graph for `m'` over `GF(q)`.
pub fn mgon_graph(m_prime: usize, q: usize) -> Result<BipartiteGraph> {
    match m_prime {
        3 => projective_plane_graph(q),
        4 => symplectic_quadrangle_graph(q),
        _ => Err(Error::domain(format!("m' must be 3 or 4, got {m_prime}"))),
    }
}

/// Sweeps the supported orders in ascending `q` and reports the first
/// whose link satisfies `(1 − κ)V_min^{1/r} ≤ δ`.
pub fn thickness_threshold(m_prime: usize, r: f64, delta: f64) -> Result<ThresholdReport> {
    let orders = sweep_orders(m_prime)?;
    if !(delta > 0.0) {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let limit = if m_prime == 3 { 4.0 } else { 8.0 };
    let regime_warning = (r <= limit).then(|| {
        format!("r = {r} is not above {limit}; for m' = {m_prime} the sweep values need not tend to 0")
    });
    let rows: Vec<Result<SweepRow>> = orders
        .par_iter()
        .map(|&q| {
            let g = mgon_graph(m_prime, q)?;
            let rep = b_delta_r(&g, r)?;
            Ok(SweepRow { q, kappa: rep.kappa, v_min: rep.v_min, b_value: rep.b_value })
        })
        .collect();
    let table: Vec<SweepRow> = rows.into_iter().collect::<Result<_>>()?;
    let found = table.iter().find(|row| row.b_value <= delta).map(|row| row.q);
    Ok(ThresholdReport { m_prime, r, delta, found, table, regime_warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::generators::gq2_graph;
    use crate::spectra::graph::{complete_bipartite, even_cycle};

    // Heawood adjacency spectrum is {±3, ±√2}, so 1 − κ = √2/3.
    #[test]
    fn heawood_values() {
        let g = projective_plane_graph(2).unwrap();
        let k = g.kappa().unwrap();
        assert!((k - (1.0 - 2f64.sqrt() / 3.0)).abs() <= 1e-9);
        let rep = b_delta_r(&g, 5.0).unwrap();
        let exact = 2f64.sqrt() / 3.0 * 7f64.powf(0.2);
        assert!((rep.b_value - exact).abs() < 1e-9);
        assert!((rep.b_value - 0.69573).abs() < 1e-4);
        assert!((rep.recompute() - rep.b_value).abs() <= 1e-12);
    }

    #[test]
    fn complete_and_cycle_values() {
        assert_eq!(b_delta_r(&complete_bipartite(3, 4), 7.0).unwrap().b_value.abs(), 0.0);
        let rep = b_delta_r(&even_cycle(3), 4.0).unwrap();
        assert!((rep.b_value - 0.5 * 3f64.powf(0.25)).abs() < 1e-12);
        assert!((rep.b_value - 0.65804).abs() < 1e-5);
    }

    #[test]
    fn quadrangle_values() {
        let g = gq2_graph();
        assert_eq!(g.part_sizes(), (15, 15));
        assert_eq!(mgon_vmin(4, 2, 2).unwrap().0, 15);
        let rep = b_delta_r(&g, 9.0).unwrap();
        assert!((rep.kappa - 1.0 / 3.0).abs() < 1e-9);
        assert!((rep.b_value - 2.0 / 3.0 * 15f64.powf(1.0 / 9.0)).abs() < 1e-9);
    }

    #[test]
    fn vmin_table() {
        assert_eq!(mgon_vmin(3, 2, 2).unwrap(), (7, None));
        assert_eq!(mgon_vmin(4, 2, 2).unwrap().0, 15);
        assert_eq!(mgon_vmin(3, 1, 1).unwrap().0, 3);
        assert_eq!(mgon_vmin(6, 2, 1).unwrap().0, (4 + 2 + 1) * 2);
        assert_eq!(mgon_vmin(8, 2, 1).unwrap().0, (4 + 1) * 3 * 2);
        let (v, notice) = mgon_vmin(4, 1, 3).unwrap();
        assert_eq!(v, (3 + 1) * 2);
        assert!(notice.is_some());
        assert!(mgon_vmin(5, 2, 2).is_err());
    }

    // Every generated link has part sizes matching the V_min formula.
    #[test]
    fn generated_links_match_formulas() {
        for &q in sweep_orders(3).unwrap() {
            let g = projective_plane_graph(q).unwrap();
            assert_eq!(g.v_min() as u64, mgon_vmin(3, q, q).unwrap().0);
            // 1 − κ = √q/(q+1)
            let k = g.kappa().unwrap();
            assert!((1.0 - k - (q as f64).sqrt() / (q as f64 + 1.0)).abs() < 1e-9, "q={q}");
        }
        for &q in sweep_orders(4).unwrap() {
            let g = symplectic_quadrangle_graph(q).unwrap();
            assert_eq!(g.v_min() as u64, mgon_vmin(4, q, q).unwrap().0);
            let k = g.kappa().unwrap();
            assert!((1.0 - k - (2.0 * q as f64).sqrt() / (q as f64 + 1.0)).abs() < 1e-9, "q={q}");
        }
    }

    #[test]
    fn threshold_search() {
        let rep = thickness_threshold(3, 5.0, 0.7).unwrap();
        assert_eq!(rep.found, Some(2));
        assert_eq!(rep.table.len(), 7);
        assert!(rep.regime_warning.is_none());
        assert!(thickness_threshold(3, 4.0, 0.7).unwrap().regime_warning.is_some());
        // the sweep is merged in ascending q
        assert!(rep.table.windows(2).all(|w| w[0].q < w[1].q));
    }

    // Asymptotic bound: (√q/(q+1))(q²+q+1)^{1/r} ≤ 3^{1/r} q^{2/r} / √q.
    #[test]
    fn sweep_respects_asymptotic_bound() {
        for r in [4.5, 5.0, 6.0, 9.0] {
            let rep = thickness_threshold(3, r, 0.5).unwrap();
            for row in &rep.table {
                let q = row.q as f64;
                assert!(row.b_value <= 3f64.powf(1.0 / r) * q.powf(2.0 / r) / q.sqrt() + 1e-12);
            }
        }
    }
}
