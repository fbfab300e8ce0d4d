//! Shared fixtures for the benchmarks.

use wfusion_core::rootdata::dominant_weights;
use wfusion_core::AffineWeight;

/// All unordered pairs of integrable weights of `sl_r` at level `n`.
pub fn weight_pairs(r: usize, n: i64) -> Vec<(AffineWeight, AffineWeight)> {
    let ws = dominant_weights(r, n);
    let mut out = Vec::new();
    for (i, x) in ws.iter().enumerate() {
        for y in &ws[i..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}
