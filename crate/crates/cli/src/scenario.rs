//! Scenario file loading.
//!
//! A scenario is a TOML document with the sections `[plant]`,
//! `[reference]`, `[l1]`, and the optional `[init]` and `[integrator]`.
//! Every value is re-validated by the library constructors; failures are
//! reported against the line of the offending key.

use std::path::Path;

use l1equiv::models::{L1Config, PlantParams, ReferenceModel};
use l1equiv::poly_linalg::SquareMatrix;
use l1equiv::simulator::{InitialConditions, IntegratorConfig};
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    plant: RawPlant,
    reference: RawReference,
    l1: RawL1,
    init: Option<RawInit>,
    integrator: Option<RawIntegrator>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlant {
    n: usize,
    a: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReference {
    a_m: Vec<f64>,
    q: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawL1 {
    k: f64,
    gamma: f64,
    projection_radius: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInit {
    x0: Option<Vec<f64>>,
    u0: Option<f64>,
    xhat0: Option<Vec<f64>>,
    thetahat0: Option<Vec<f64>>,
    v0: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawIntegrator {
    dt: Option<f64>,
    t_end: Option<f64>,
    sample_every: Option<usize>,
    blowup_threshold: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub plant: PlantParams,
    pub reference: ReferenceModel,
    pub l1: L1Config,
    pub init: InitialConditions,
    pub integrator: IntegratorConfig,
}

/// 1-based line of `key = ...` inside `[section]`, or of the section header
/// when the key is absent.
fn key_line(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    let mut header = None;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.trim().to_string();
            if current == section {
                header = Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

struct Locator<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Locator<'_> {
    fn fail(&self, section: &str, key: &str, msg: impl std::fmt::Display) -> Failure {
        match key_line(self.text, section, key) {
            Some(line) => Failure::invalid(format!("{}:{line}: [{section}] {key}: {msg}", self.path.display())),
            None => Failure::invalid(format!("{}: [{section}] {key}: {msg}", self.path.display())),
        }
    }
}

fn integrator_from(raw: RawIntegrator) -> Result<IntegratorConfig, l1equiv::Error> {
    let d = IntegratorConfig::default();
    IntegratorConfig::new(
        raw.dt.unwrap_or(d.dt),
        raw.t_end.unwrap_or(d.t_end),
        raw.sample_every.unwrap_or(d.sample_every),
        raw.blowup_threshold.unwrap_or(d.blowup_threshold),
    )
}

/// Parses an integrator-only document (used by commands that need no
/// plant).
pub fn parse_integrator(path: &Path, text: &str) -> Result<IntegratorConfig, Failure> {
    #[derive(Deserialize)]
    struct Doc {
        integrator: Option<RawIntegrator>,
    }
    let doc: Doc = toml::from_str(text).map_err(|e| parse_failure(path, text, &e))?;
    let loc = Locator { path, text };
    integrator_from(doc.integrator.unwrap_or_default()).map_err(|e| loc.fail("integrator", "dt", e))
}

fn parse_failure(path: &Path, text: &str, e: &toml::de::Error) -> Failure {
    let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1));
    let msg = e.message();
    match line {
        Some(l) => Failure::invalid(format!("{}:{l}: {msg}", path.display())),
        None => Failure::invalid(format!("{}: {msg}", path.display())),
    }
}

pub fn parse(path: &Path, text: &str) -> Result<Scenario, Failure> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| parse_failure(path, text, &e))?;
    let loc = Locator { path, text };

    if raw.plant.a.len() != raw.plant.n {
        return Err(loc.fail(
            "plant",
            "a",
            format!("{} coefficients given but n = {}", raw.plant.a.len(), raw.plant.n),
        ));
    }
    if raw.plant.n == 0 {
        return Err(loc.fail("plant", "n", "order must be at least 1"));
    }
    let plant = PlantParams::new(raw.plant.a).map_err(|e| loc.fail("plant", "a", e))?;
    let n = plant.n();

    if raw.reference.a_m.len() != n {
        return Err(loc.fail(
            "reference",
            "a_m",
            format!("{} coefficients given but n = {n}", raw.reference.a_m.len()),
        ));
    }
    let q = match raw.reference.q {
        None => SquareMatrix::identity(n),
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(loc.fail("reference", "q", format!("must be {n}x{n}")));
            }
            SquareMatrix::from_rows(&rows).map_err(|e| loc.fail("reference", "q", e))?
        }
    };
    let reference = ReferenceModel::new(raw.reference.a_m, q).map_err(|e| {
        let key = if e.to_string().contains("Q") || e.to_string().contains("symmetric") { "q" } else { "a_m" };
        loc.fail("reference", key, e)
    })?;

    let l1 = L1Config::new(raw.l1.k, raw.l1.gamma, raw.l1.projection_radius).map_err(|e| {
        let msg = e.to_string();
        let key = if msg.contains("gamma") {
            "gamma"
        } else if msg.contains("projection") {
            "projection_radius"
        } else {
            "k"
        };
        loc.fail("l1", key, e)
    })?;

    let ri = raw.init.unwrap_or_default();
    let d = InitialConditions::default_for(n);
    let init = InitialConditions {
        x0: ri.x0.unwrap_or(d.x0),
        u0: ri.u0.unwrap_or(d.u0),
        x_hat0: ri.xhat0.unwrap_or(d.x_hat0),
        theta_hat0: ri.thetahat0.unwrap_or(d.theta_hat0),
        v0: ri.v0,
    };
    for (key, v) in [("x0", &init.x0), ("xhat0", &init.x_hat0), ("thetahat0", &init.theta_hat0)] {
        if v.len() != n {
            return Err(loc.fail("init", key, format!("{} entries given but n = {n}", v.len())));
        }
    }
    init.validate(n).map_err(|e| loc.fail("init", "x0", e))?;

    let integrator = integrator_from(raw.integrator.unwrap_or_default()).map_err(|e| {
        let msg = e.to_string();
        let key = ["dt", "t_end", "sample_every", "blowup"]
            .into_iter()
            .find(|k| msg.contains(k))
            .map(|k| if k == "blowup" { "blowup_threshold" } else { k })
            .unwrap_or("dt");
        loc.fail("integrator", key, e)
    })?;

    Ok(Scenario { plant, reference, l1, init, integrator })
}

pub fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: cannot read scenario: {e}", path.display())))?;
    parse(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
[plant]
n = 2
a = [-1.0, 0.5]

[reference]
a_m = [2.0, 3.0]

[l1]
k = 5.0
gamma = 10.0

[init]
x0 = [1.0, 0.0]

[integrator]
dt = 1e-3
t_end = 5.0
";

    fn p() -> &'static Path {
        Path::new("s.toml")
    }

    #[test]
    fn parses_with_defaults() {
        let s = parse(p(), GOOD).unwrap();
        assert_eq!(s.plant.a(), &[-1.0, 0.5]);
        assert_eq!(s.init.x_hat0, vec![0.0, 0.0]);
        assert_eq!(s.init.v0_for(s.l1.k), 0.0);
        assert_eq!(s.integrator.sample_every, 10);
        assert_eq!(s.reference.q(), &SquareMatrix::identity(2));
    }

    #[test]
    fn negative_reference_coefficient_cites_line_and_constraint() {
        let text = GOOD.replace("a_m = [2.0, 3.0]", "a_m = [2.0, -3.0]");
        let e = parse(p(), &text).unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.starts_with("s.toml:6:"), "{}", e.message);
        assert!(e.message.contains("a^m_i > 0"), "{}", e.message);
    }

    #[test]
    fn length_mismatch_and_syntax_errors() {
        let e = parse(p(), &GOOD.replace("n = 2", "n = 3")).unwrap_err();
        assert!(e.message.starts_with("s.toml:3:"), "{}", e.message);
        let e = parse(p(), &GOOD.replace("k = 5.0", "k = ")).unwrap_err();
        assert!(e.message.starts_with("s.toml:9:"), "{}", e.message);
        let e = parse(p(), &GOOD.replace("gamma", "gama")).unwrap_err();
        assert_eq!(e.code, 2);
        let e = parse(p(), &GOOD.replace("x0 = [1.0, 0.0]", "x0 = [1.0]")).unwrap_err();
        assert!(e.message.starts_with("s.toml:13:"), "{}", e.message);
        let e = parse(p(), &GOOD.replace("dt = 1e-3", "dt = -1.0")).unwrap_err();
        assert!(e.message.starts_with("s.toml:16:"), "{}", e.message);
    }

    #[test]
    fn custom_weight_matrix() {
        let text = GOOD.replace("a_m = [2.0, 3.0]", "a_m = [2.0, 3.0]\nq = [[2.0, 0.0], [0.0, 1.0]]");
        let s = parse(p(), &text).unwrap();
        assert_eq!(s.reference.q()[(0, 0)], 2.0);
        let bad = GOOD.replace("a_m = [2.0, 3.0]", "a_m = [2.0, 3.0]\nq = [[1.0, 2.0], [0.0, 1.0]]");
        let e = parse(p(), &bad).unwrap_err();
        assert!(e.message.starts_with("s.toml:7:"), "{}", e.message);
    }
}
