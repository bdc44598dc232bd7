//! Convention ledger written next to every output file.

use serde::{Deserialize, Serialize};

use crate::green::{EvalContext, DEFAULT_ANGLE, LONGITUDINAL_GAUSSIAN, NORMALIZATION};
use crate::minkowski::{LorentzVector, METRIC};

pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const CONTOUR: &str = "e0 = s*exp(+i*theta)";
pub const POLARIZATION: &str = "(1, i, 0, 0)/sqrt(2)";
pub const MOMENTUM_MEASURE: &str = "(2pi)^-2 excluded";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionLedger {
    pub metric: [f64; 4],
    pub wave_vector: [f64; 4],
    pub polarization: String,
    pub contour: String,
    pub contour_angle: f64,
    pub phi0: Option<f64>,
    /// `"config"` or `"phi_a"`.
    pub phi0_source: String,
    pub normalization: [f64; 2],
    pub longitudinal_gaussian: f64,
    pub momentum_measure: String,
    /// `+1`, or `-1` with the dressing prefactor toggled.
    pub k_prefactor_sign: i32,
    pub csv_schema_version: u32,
}

impl ConventionLedger {
    pub fn for_context(ctx: &EvalContext) -> Self {
        ConventionLedger {
            contour_angle: ctx.angle,
            phi0: Some(ctx.phi0()),
            phi0_source: if ctx.field.phi0.is_some() {
                "config"
            } else {
                "phi_a"
            }
            .into(),
            k_prefactor_sign: if ctx.field.flip_k_prefactor { -1 } else { 1 },
            ..ConventionLedger::compiled()
        }
    }

    /// Conventions with no run-specific values.
    pub fn compiled() -> Self {
        ConventionLedger {
            metric: METRIC,
            wave_vector: LorentzVector::wave_vector().re(),
            polarization: POLARIZATION.into(),
            contour: CONTOUR.into(),
            contour_angle: DEFAULT_ANGLE,
            phi0: None,
            phi0_source: "phi_a".into(),
            normalization: [NORMALIZATION.re, NORMALIZATION.im],
            longitudinal_gaussian: LONGITUDINAL_GAUSSIAN,
            momentum_measure: MOMENTUM_MEASURE.into(),
            k_prefactor_sign: 1,
            csv_schema_version: CSV_SCHEMA_VERSION,
        }
    }

    /// Fixed conventions that differ from the compiled constants.
    pub fn mismatches(&self) -> Vec<String> {
        let c = ConventionLedger::compiled();
        let mut out = Vec::new();
        let mut check = |name: &str, same: bool| {
            if !same {
                out.push(name.to_string());
            }
        };
        check("metric", self.metric == c.metric);
        check("wave_vector", self.wave_vector == c.wave_vector);
        check("polarization", self.polarization == c.polarization);
        check("contour", self.contour == c.contour);
        check("normalization", self.normalization == c.normalization);
        check(
            "longitudinal_gaussian",
            self.longitudinal_gaussian == c.longitudinal_gaussian,
        );
        check(
            "momentum_measure",
            self.momentum_measure == c.momentum_measure,
        );
        check(
            "csv_schema_version",
            self.csv_schema_version == c.csv_schema_version,
        );
        check("k_prefactor_sign", self.k_prefactor_sign.abs() == 1);
        check(
            "phi0_source",
            self.phi0_source == "config" || self.phi0_source == "phi_a",
        );
        check(
            "contour_angle",
            self.contour_angle > 0.0 && self.contour_angle < std::f64::consts::FRAC_PI_2,
        );
        let eps = LorentzVector::epsilon();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        check(
            "polarization vector",
            eps[0].re == h
                && eps[0].im == 0.0
                && eps[1].re == 0.0
                && eps[1].im == h
                && eps[2].norm() == 0.0
                && eps[3].norm() == 0.0,
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compiled_ledger_is_consistent() {
        assert!(ConventionLedger::compiled().mismatches().is_empty());
    }

    #[test]
    fn round_trip_and_tamper() {
        let ledger = ConventionLedger::compiled();
        let text = serde_json::to_string(&ledger).unwrap();
        let back: ConventionLedger = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ledger);
        let mut bad = back.clone();
        bad.metric = [1.0, 1.0, 1.0, -1.0];
        bad.contour = "e0 = s*exp(-i*theta)".into();
        assert_eq!(
            bad.mismatches(),
            vec!["metric".to_string(), "contour".to_string()]
        );
    }
}
