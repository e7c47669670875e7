//! Wall-clock scaling of homomorphism counts over growing degenerate hosts.

use std::time::Instant;

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::Graph;
use crate::hom::{count_hom_oriented, orient_host, HomOptions};
use crate::host::gen_degenerate;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    /// Best wall time of the repeated runs, in seconds.
    pub seconds: f64,
    pub runs: usize,
    pub count: BigUint,
    pub aux_bytes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of log time against log n.
    pub slope: f64,
    pub aux_constant: bool,
}

/// Repeats each count at least three times and until 0.3 s have been spent (at most
/// 50 runs) and keeps the fastest run.
pub fn bench_pattern(pattern: &Graph, sizes: &[usize], d: usize, seed: u64, opts: &HomOptions) -> Result<BenchReport> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let host = orient_host(&gen_degenerate(n, d, seed))?;
        let mut best = f64::INFINITY;
        let mut spent = 0.0;
        let mut runs = 0;
        let mut last = None;
        while runs < 3 || (spent < 0.3 && runs < 50) {
            let t = Instant::now();
            let r = count_hom_oriented(pattern, &host, opts)?;
            let s = t.elapsed().as_secs_f64();
            best = best.min(s);
            spent += s;
            runs += 1;
            last = Some(r);
        }
        let r = last.expect("at least one run");
        rows.push(BenchRow {
            n,
            seconds: best,
            runs,
            count: r.count,
            aux_bytes: r.aux_bytes,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.seconds)).collect();
    Ok(BenchReport {
        slope: loglog_slope(&points),
        aux_constant: rows.windows(2).all(|w| w[0].aux_bytes == w[1].aux_bytes),
        rows,
    })
}

/// Least-squares slope of `ln y` against `ln x`; NaN with fewer than two distinct `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-12).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::star;

    #[test]
    fn slope_of_power_laws() {
        let cubic: Vec<(f64, f64)> = [10.0, 20.0, 40.0].iter().map(|&x: &f64| (x, 0.5 * x.powi(3))).collect();
        assert!((loglog_slope(&cubic) - 3.0).abs() < 1e-9);
        assert!(loglog_slope(&[(5.0, 1.0)]).is_nan());
    }

    #[test]
    fn bench_reports_each_size() {
        let r = bench_pattern(&star(2), &[50, 100], 2, 1, &HomOptions::default()).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows.iter().all(|row| row.runs >= 3));
        assert!(r.aux_constant);
    }
}
