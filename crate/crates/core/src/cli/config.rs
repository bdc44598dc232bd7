//! JSON run configuration with path-qualified validation errors.
//!
//! ```json
//! {
//!   "field": {"g": 1, "B": 1, "profile": "zero", "phi0": 0.0, "flip_k_prefactor": false},
//!   "eval": {"m": 1, "x_a": [0,0,0,0], "x_b": [1,0,0,0], "pL": [0.3, 1.5],
//!            "theta": 0.785, "e0_max": 60, "tolerance": {"abs": 1e-10, "rel": 1e-8, "max_nodes": 100000},
//!            "y0": [0, 0], "e0": 1.0, "phi": 0.5},
//!   "command": {"grid": {"param": "e0", "start": 0.1, "stop": 3, "count": 30},
//!               "fd_step": 0.02, "limit_tolerance": 1e-5}
//! }
//! ```
//! A profile is either `"zero"` or an object with `kind` and the parameters
//! of that kind (`amplitude`, `frequency`, `width`, `phi`, `a1`, `a2`).

use serde_json::{Map, Value};

use crate::field::{make_profile, FieldConfig, PlaneWaveProfile, ProfileKind, ProfileParams};
use crate::green::{EvalContext, DEFAULT_ANGLE, DEFAULT_FD_STEP};
use crate::minkowski::{LorentzVector, C64};
use crate::quadrature::Tolerance;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridParam {
    E0,
    Phi,
    B,
    G,
    M,
    Theta,
    Xb(usize),
    P2,
    P3,
}

impl GridParam {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "e0" => GridParam::E0,
            "phi" => GridParam::Phi,
            "B" => GridParam::B,
            "g" => GridParam::G,
            "m" => GridParam::M,
            "theta" => GridParam::Theta,
            "x_b0" => GridParam::Xb(0),
            "x_b1" => GridParam::Xb(1),
            "x_b2" => GridParam::Xb(2),
            "x_b3" => GridParam::Xb(3),
            "p2" => GridParam::P2,
            "p3" => GridParam::P3,
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        match self {
            GridParam::E0 => "e0".into(),
            GridParam::Phi => "phi".into(),
            GridParam::B => "B".into(),
            GridParam::G => "g".into(),
            GridParam::M => "m".into(),
            GridParam::Theta => "theta".into(),
            GridParam::Xb(i) => format!("x_b{i}"),
            GridParam::P2 => "p2".into(),
            GridParam::P3 => "p3".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub param: GridParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Context with all defaults applied (`field` lives inside).
    pub eval: EvalContext,
    /// Point proper time for pointwise commands.
    pub e0: Option<C64>,
    /// Point phase for the dressing command.
    pub phi: Option<f64>,
    pub grid: Option<Grid>,
    pub fd_step: f64,
    pub limit_tolerance: f64,
}

impl RunConfig {
    /// Copy with one grid parameter replaced.
    pub fn with(&self, param: GridParam, value: f64) -> RunConfig {
        let mut c = self.clone();
        match param {
            GridParam::E0 => c.e0 = Some(C64::from(value)),
            GridParam::Phi => c.phi = Some(value),
            GridParam::B => c.eval.field.b = value,
            GridParam::G => c.eval.field.charge = value,
            GridParam::M => c.eval.m = value,
            GridParam::Theta => c.eval.angle = value,
            GridParam::Xb(i) => c.eval.x_b.0[i] = C64::from(value),
            GridParam::P2 => c.eval.p_l.0[2] = C64::from(value),
            GridParam::P3 => c.eval.p_l.0[3] = C64::from(value),
        }
        c
    }
}

fn schema(path: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn range(path: &str, message: impl Into<String>) -> CliError {
    CliError::Range {
        path: path.to_string(),
        message: message.into(),
    }
}

/// A JSON object whose keys are consumed one by one; leftovers are errors.
struct Obj<'a> {
    path: String,
    map: &'a Map<String, Value>,
    seen: Vec<&'static str>,
}

impl<'a> Obj<'a> {
    fn new(path: &str, value: &'a Value) -> Result<Self, CliError> {
        match value.as_object() {
            Some(map) => Ok(Obj {
                path: path.to_string(),
                map,
                seen: Vec::new(),
            }),
            None => Err(schema(path, "expected an object")),
        }
    }

    fn key(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.push(key);
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn require(&mut self, key: &'static str) -> Result<&'a Value, CliError> {
        let path = self.key(key);
        self.get(key)
            .ok_or_else(|| schema(&path, "required field is missing"))
    }

    fn number(&mut self, key: &'static str) -> Result<f64, CliError> {
        let path = self.key(key);
        as_number(&path, self.require(key)?)
    }

    fn opt_number(&mut self, key: &'static str) -> Result<Option<f64>, CliError> {
        let path = self.key(key);
        self.get(key).map(|v| as_number(&path, v)).transpose()
    }

    fn opt_numbers(&mut self, key: &'static str) -> Result<Option<Vec<f64>>, CliError> {
        let path = self.key(key);
        self.get(key).map(|v| as_numbers(&path, v)).transpose()
    }

    fn finish(self) -> Result<(), CliError> {
        for key in self.map.keys() {
            if !self.seen.contains(&key.as_str()) {
                return Err(schema(&self.key(key), "unknown field"));
            }
        }
        Ok(())
    }
}

fn as_number(path: &str, v: &Value) -> Result<f64, CliError> {
    let x = v
        .as_f64()
        .ok_or_else(|| schema(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(range(path, "must be finite"));
    }
    Ok(x)
}

fn as_numbers(path: &str, v: &Value) -> Result<Vec<f64>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of numbers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| as_number(&format!("{path}[{i}]"), x))
        .collect()
}

fn four_vector(path: &str, v: &Value) -> Result<LorentzVector, CliError> {
    let x = as_numbers(path, v)?;
    match x.as_slice() {
        [a, b, c, d] => Ok(LorentzVector::real(*a, *b, *c, *d)),
        _ => Err(schema(
            path,
            format!("expected 4 components, got {}", x.len()),
        )),
    }
}

/// `[p2, p3]` or a four-vector with vanishing transverse slots.
fn longitudinal(path: &str, v: &Value) -> Result<LorentzVector, CliError> {
    let x = as_numbers(path, v)?;
    match x.as_slice() {
        [p2, p3] => Ok(LorentzVector::longitudinal_from(*p2, *p3)),
        [t1, t2, p2, p3] => {
            if *t1 != 0.0 || *t2 != 0.0 {
                return Err(range(
                    path,
                    "transverse slots of the longitudinal momentum must be 0",
                ));
            }
            Ok(LorentzVector::longitudinal_from(*p2, *p3))
        }
        _ => Err(schema(
            path,
            format!("expected 2 or 4 components, got {}", x.len()),
        )),
    }
}

fn transverse(path: &str, v: &Value) -> Result<LorentzVector, CliError> {
    let x = as_numbers(path, v)?;
    match x.as_slice() {
        [a, b] => Ok(LorentzVector::real(*a, *b, 0.0, 0.0)),
        [a, b, c, d] => {
            if *c != 0.0 || *d != 0.0 {
                return Err(range(path, "longitudinal slots must be 0"));
            }
            Ok(LorentzVector::real(*a, *b, 0.0, 0.0))
        }
        _ => Err(schema(
            path,
            format!("expected 2 or 4 components, got {}", x.len()),
        )),
    }
}

fn complex(path: &str, v: &Value) -> Result<C64, CliError> {
    if v.is_number() {
        return Ok(C64::from(as_number(path, v)?));
    }
    let x = as_numbers(path, v)?;
    match x.as_slice() {
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(schema(path, "expected a number or [re, im]")),
    }
}

fn profile(path: &str, v: &Value) -> Result<PlaneWaveProfile, CliError> {
    if let Some(name) = v.as_str() {
        return match name {
            "zero" => Ok(PlaneWaveProfile::Zero),
            _ => Err(schema(
                path,
                format!("unknown profile '{name}'; use \"zero\" or an object with \"kind\""),
            )),
        };
    }
    let mut obj = Obj::new(path, v)?;
    let kind_path = obj.key("kind");
    let kind = match obj.require("kind")?.as_str() {
        Some("zero") => ProfileKind::Zero,
        Some("linear") => ProfileKind::Linear,
        Some("circular") => ProfileKind::Circular,
        Some("pulse") => ProfileKind::Pulse,
        Some("tabulated") => ProfileKind::Tabulated,
        Some(other) => {
            return Err(schema(
                &kind_path,
                format!("unknown profile kind '{other}'"),
            ))
        }
        None => return Err(schema(&kind_path, "expected a string")),
    };
    let mut params = ProfileParams::default();
    let needs: &[&'static str] = match kind {
        ProfileKind::Zero => &[],
        ProfileKind::Linear | ProfileKind::Circular => &["amplitude", "frequency"],
        ProfileKind::Pulse => &["amplitude", "frequency", "width"],
        ProfileKind::Tabulated => &["phi", "a1", "a2"],
    };
    for &key in needs {
        match key {
            "amplitude" => params.amplitude = obj.number(key)?,
            "frequency" => params.frequency = obj.number(key)?,
            "width" => params.width = obj.number(key)?,
            _ => {
                let p = obj.key(key);
                let values = as_numbers(&p, obj.require(key)?)?;
                match key {
                    "phi" => params.phi = values,
                    "a1" => params.a1 = values,
                    _ => params.a2 = values,
                }
            }
        }
    }
    obj.finish()?;
    make_profile(kind, &params).map_err(|e| range(path, e.to_string()))
}

fn grid(path: &str, v: &Value) -> Result<Grid, CliError> {
    let mut obj = Obj::new(path, v)?;
    let param_path = obj.key("param");
    let name = obj
        .require("param")?
        .as_str()
        .ok_or_else(|| schema(&param_path, "expected a string"))?;
    let param = GridParam::parse(name)
        .ok_or_else(|| schema(&param_path, format!("unknown grid parameter '{name}'")))?;
    let values_path = obj.key("values");
    let values = match obj.opt_numbers("values")? {
        Some(values) => {
            if obj.get("start").is_some() || obj.get("stop").is_some() || obj.get("count").is_some()
            {
                return Err(schema(path, "give either values or start/stop/count"));
            }
            values
        }
        None => {
            let start = obj.number("start")?;
            let stop = obj.number("stop")?;
            let count_path = obj.key("count");
            let count = obj.number("count")?;
            if count < 1.0 || count.fract() != 0.0 {
                return Err(range(&count_path, "must be a positive integer"));
            }
            let count = count as usize;
            if count == 1 {
                vec![start]
            } else {
                (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect()
            }
        }
    };
    obj.finish()?;
    if values.is_empty() {
        return Err(range(&values_path, "grid must not be empty"));
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(range(&values_path, "grid must be strictly monotone"));
    }
    Ok(Grid { param, values })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let mut root = Obj::new("", &doc)?;

    let mut field = Obj::new("field", root.require("field")?)?;
    let charge = field.number("g")?;
    let b = field.number("B")?;
    let wave = match field.get("profile") {
        Some(v) => profile("field.profile", v)?,
        None => PlaneWaveProfile::Zero,
    };
    let phi0 = field.opt_number("phi0")?;
    let flip = match field.get("flip_k_prefactor") {
        Some(v) => v
            .as_bool()
            .ok_or_else(|| schema("field.flip_k_prefactor", "expected a boolean"))?,
        None => false,
    };
    field.finish()?;
    let mut cfg = FieldConfig::new(charge, b, wave);
    cfg.phi0 = phi0;
    cfg.flip_k_prefactor = flip;

    let mut ev = Obj::new("eval", root.require("eval")?)?;
    let m = ev.number("m")?;
    if m < 0.0 {
        return Err(range("eval.m", "mass must be non-negative"));
    }
    let x_a = four_vector("eval.x_a", ev.require("x_a")?)?;
    let x_b = four_vector("eval.x_b", ev.require("x_b")?)?;
    let p_l = longitudinal("eval.pL", ev.require("pL")?)?;
    let mut ctx = EvalContext::new(m, x_a, x_b, p_l, cfg);
    ctx.angle = ev.opt_number("theta")?.unwrap_or(DEFAULT_ANGLE);
    if !(ctx.angle > 0.0 && ctx.angle < std::f64::consts::FRAC_PI_2) {
        return Err(range("eval.theta", "contour angle must lie in (0, pi/2)"));
    }
    ctx.e0_max = ev.opt_number("e0_max")?;
    if let Some(s) = ctx.e0_max {
        if s <= 0.0 {
            return Err(range("eval.e0_max", "must be positive"));
        }
    }
    if let Some(v) = ev.get("tolerance") {
        let mut t = Obj::new("eval.tolerance", v)?;
        let defaults = Tolerance::default();
        let abs = t.opt_number("abs")?.unwrap_or(defaults.abs);
        let rel = t.opt_number("rel")?.unwrap_or(defaults.rel);
        let nodes = t
            .opt_number("max_nodes")?
            .unwrap_or(defaults.max_nodes as f64);
        t.finish()?;
        if !(abs > 0.0) && !(rel > 0.0) {
            return Err(range("eval.tolerance", "abs or rel must be positive"));
        }
        if abs < 0.0 || rel < 0.0 {
            return Err(range("eval.tolerance", "tolerances must be non-negative"));
        }
        if nodes < 21.0 || nodes.fract() != 0.0 {
            return Err(range(
                "eval.tolerance.max_nodes",
                "must be an integer >= 21",
            ));
        }
        ctx.tol = Tolerance {
            abs,
            rel,
            max_nodes: nodes as usize,
        };
    }
    if let Some(v) = ev.get("y0") {
        ctx.y0 = transverse("eval.y0", v)?;
    }
    let e0 = ev.get("e0").map(|v| complex("eval.e0", v)).transpose()?;
    let phi = ev.opt_number("phi")?;
    ev.finish()?;

    let (mut grid_spec, mut fd_step, mut limit_tolerance) = (None, DEFAULT_FD_STEP, 1e-5);
    if let Some(v) = root.get("command") {
        let mut cmd = Obj::new("command", v)?;
        if let Some(g) = cmd.get("grid") {
            grid_spec = Some(grid("command.grid", g)?);
        }
        if let Some(h) = cmd.opt_number("fd_step")? {
            if h <= 0.0 {
                return Err(range("command.fd_step", "must be positive"));
            }
            fd_step = h;
        }
        if let Some(t) = cmd.opt_number("limit_tolerance")? {
            if t <= 0.0 {
                return Err(range("command.limit_tolerance", "must be positive"));
            }
            limit_tolerance = t;
        }
        cmd.finish()?;
    }
    root.finish()?;

    Ok(RunConfig {
        eval: ctx,
        e0,
        phi,
        grid: grid_spec,
        fd_step,
        limit_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"field": {"g": 1, "B": 1, "profile": "zero"},
        "eval": {"m": 1, "x_a": [0, 0, 0, 0], "x_b": [1, 0, 0, 0], "pL": [0.3, 1.5]}}"#;

    fn path_of(r: Result<RunConfig, CliError>) -> String {
        match r {
            Err(CliError::Schema { path, .. }) | Err(CliError::Range { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.eval.angle, DEFAULT_ANGLE);
        assert_eq!(c.eval.field.phi0, None);
        assert_eq!(c.eval.phi0(), c.eval.phi_a());
        assert_eq!(c.eval.y0, LorentzVector::zero());
        assert_eq!(c.eval.tol, Tolerance::default());
        assert_eq!(c.fd_step, DEFAULT_FD_STEP);
        assert!(c.grid.is_none());
    }

    #[test]
    fn missing_field_strength_is_named() {
        let text = MINIMAL.replace("\"B\": 1, ", "");
        let r = parse_config(&text);
        assert!(matches!(r, Err(CliError::Schema { .. })));
        assert_eq!(path_of(r), "field.B");
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            path_of(parse_config(&MINIMAL.replace("[1, 0, 0, 0]", "[1, 0, 0]"))),
            "eval.x_b"
        );
        assert_eq!(
            path_of(parse_config(&MINIMAL.replace("\"m\": 1", "\"m\": -1"))),
            "eval.m"
        );
        assert_eq!(
            path_of(parse_config(
                &MINIMAL.replace("\"m\": 1", "\"m\": 1, \"mass\": 2")
            )),
            "eval.mass"
        );
        assert_eq!(
            path_of(parse_config(&MINIMAL.replace("\"zero\"", "\"square\""))),
            "field.profile"
        );
        assert_eq!(
            path_of(parse_config(
                &MINIMAL.replace("\"zero\"", r#"{"kind": "circular", "amplitude": 1}"#)
            )),
            "field.profile.frequency"
        );
        assert_eq!(
            path_of(parse_config(&MINIMAL.replace(
                "\"zero\"",
                r#"{"kind": "circular", "amplitude": 1, "frequency": -2}"#
            ))),
            "field.profile"
        );
        assert_eq!(
            path_of(parse_config(
                &MINIMAL.replace("\"m\": 1", "\"m\": 1, \"theta\": 2")
            )),
            "eval.theta"
        );
        assert_eq!(path_of(parse_config("{")), "");
    }

    #[test]
    fn grid_forms() {
        let with_grid =
            |g: &str| MINIMAL.replace("}}", &format!("}}, \"command\": {{\"grid\": {g}}}}}"));
        let c = parse_config(&with_grid(
            r#"{"param": "e0", "values": [0.5, 1, 1.5, 2, 2.5]}"#,
        ))
        .unwrap();
        assert_eq!(c.grid.as_ref().unwrap().values.len(), 5);
        let c = parse_config(&with_grid(
            r#"{"param": "B", "start": 0, "stop": 1, "count": 5}"#,
        ))
        .unwrap();
        assert_eq!(c.grid.unwrap().values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(
            path_of(parse_config(&with_grid(
                r#"{"param": "e0", "values": [1, 0.5, 2]}"#
            ))),
            "command.grid.values"
        );
        assert_eq!(
            path_of(parse_config(&with_grid(r#"{"param": "e0", "values": []}"#))),
            "command.grid.values"
        );
        assert_eq!(
            path_of(parse_config(&with_grid(r#"{"param": "q", "values": [1]}"#))),
            "command.grid.param"
        );
    }

    #[test]
    fn profile_objects_and_overrides() {
        let text = MINIMAL.replace(
            "\"profile\": \"zero\"",
            r#""profile": {"kind": "pulse", "amplitude": 1, "frequency": 2, "width": 0.5}, "phi0": 0.3, "flip_k_prefactor": true"#,
        );
        let c = parse_config(&text).unwrap();
        assert_eq!(c.eval.field.profile.kind(), ProfileKind::Pulse);
        assert_eq!(c.eval.field.phi0, Some(0.3));
        assert!(c.eval.field.flip_k_prefactor);
        let with = c.with(GridParam::Xb(2), 0.7);
        assert_eq!(with.eval.x_b[2], C64::from(0.7));
    }

    #[test]
    fn point_values() {
        let text = MINIMAL.replace("\"m\": 1", "\"m\": 1, \"e0\": [1.0, 0.5], \"phi\": 0.2");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.e0, Some(C64::new(1.0, 0.5)));
        assert_eq!(c.phi, Some(0.2));
    }
}
