//! Metric evaluation of a selected subset.

use subsel_core::hypervolume::hv_exact;
use subsel_core::indicators::{eps_plus, igd, igd_plus, uniformity};
use subsel_core::{PointSet, Result};

use crate::record::Metrics;

/// Hypervolume reference point plus an optional reference set for IGD,
/// IGD+ and the additive epsilon indicator.
#[derive(Debug, Clone, Copy)]
pub struct EvalConfig<'a> {
    pub hv_reference: &'a [f64],
    pub reference_set: Option<&'a PointSet>,
}

/// Indicators not computable for the input (no reference set, fewer than
/// two points for uniformity) are reported as missing.
pub fn evaluate(subset: &PointSet, cfg: EvalConfig<'_>) -> Result<Metrics> {
    if subset.is_empty() {
        return Ok(Metrics::default());
    }
    let mut m = Metrics {
        hv: Some(hv_exact(subset, cfg.hv_reference)?),
        uniformity: if subset.len() >= 2 { Some(uniformity(subset)?) } else { None },
        ..Metrics::default()
    };
    if let Some(r) = cfg.reference_set {
        m.igd = Some(igd(subset, r)?);
        m.igd_plus = Some(igd_plus(subset, r)?);
        m.eps_plus = Some(eps_plus(subset, r)?);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_box() {
        let s = PointSet::from_rows(&[[0.5, 0.5]]).unwrap();
        let m = evaluate(&s, EvalConfig { hv_reference: &[1.2, 1.2], reference_set: None }).unwrap();
        assert!((m.hv.unwrap() - 0.49).abs() < 1e-15);
        assert_eq!((m.igd, m.uniformity), (None, None));
    }

    #[test]
    fn subset_equal_to_reference() {
        let s = PointSet::from_rows(&[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]).unwrap();
        let m = evaluate(&s, EvalConfig { hv_reference: &[1.2, 1.2], reference_set: Some(&s) }).unwrap();
        assert_eq!((m.igd, m.igd_plus, m.eps_plus), (Some(0.0), Some(0.0), Some(0.0)));
    }
}
