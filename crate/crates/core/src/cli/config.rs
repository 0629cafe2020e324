//! Scenario files: JSON with `lattice`, `input`, `time`, `output` and an
//! optional `sweep` section. Any scalar can be overridden from the command
//! line with `--set dotted.path=value`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::observables::uniform_time_grid;
use crate::state::{theta_for_concurrence, Branch, NoonInput};

/// Prefix of the header line that carries the full scenario in every
/// output file.
pub const CONFIG_HEADER_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub lattice: LatticeConfig,
    pub input: InputConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub num_cavities: usize,
    pub omega: f64,
    pub hopping: f64,
}

/// Exactly one of `theta` and `concurrence` must be present; `branch`
/// only applies to `concurrence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub site_r: usize,
    pub site_s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    /// End of the grid, in units of `1/ω` or `1/J` depending on `scale`.
    pub t_max: f64,
    pub steps: usize,
    pub scale: TimeScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeScale {
    Omega,
    Hopping,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Angles for the `sweep` command, given directly or as concurrences.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrences: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

impl Default for ScenarioConfig {
    /// 29 cavities with ω = J = 1, maximally entangled input in cavities
    /// 15 and 16, evolved to ωt = 83.57.
    fn default() -> Self {
        Self {
            lattice: LatticeConfig {
                num_cavities: 29,
                omega: 1.0,
                hopping: 1.0,
            },
            input: InputConfig {
                site_r: 15,
                site_s: 16,
                theta: None,
                concurrence: Some(1.0),
                branch: Some(Branch::Low),
            },
            time: TimeConfig {
                t_max: 83.57,
                steps: 1000,
                scale: TimeScale::Omega,
            },
            output: OutputConfig::default(),
            sweep: Some(SweepConfig {
                thetas: None,
                concurrences: Some(vec![0.0, 0.5, 1.0]),
                branch: Some(Branch::Low),
            }),
        }
    }
}

/// A validated scenario with everything resolved to absolute units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub lattice: LatticeSpec,
    pub input: NoonInput,
    /// Grid end in absolute time.
    pub t_max: f64,
    pub steps: usize,
}

impl Scenario {
    /// `steps + 1` absolute times covering `[0, t_max]`.
    pub fn time_grid(&self) -> Result<Vec<f64>> {
        uniform_time_grid(self.t_max, self.steps)
    }
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_json_compact(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Loads a scenario (or the default one), applies `--set` overrides and
    /// validates the result.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut value = match path {
            Some(path) => parse_config_source(&fs::read_to_string(path)?)?,
            None => serde_json::to_value(Self::default())?,
        };
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        let config: Self = serde_json::from_value(value)?;
        config.resolve()?;
        Ok(config)
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let lattice = LatticeSpec::new(
            self.lattice.num_cavities,
            self.lattice.omega,
            self.lattice.hopping,
        )?;
        let theta = self.input.resolve_theta()?;
        let input = NoonInput::new(theta, self.input.site_r, self.input.site_s)?;
        lattice.check_site(input.site_r())?;
        lattice.check_site(input.site_s())?;

        let unit = match self.time.scale {
            TimeScale::Omega => lattice.omega(),
            TimeScale::Hopping if lattice.hopping() > 0.0 => lattice.hopping(),
            TimeScale::Hopping => {
                return Err(Error::Config(
                    "time.scale = \"hopping\" needs a non-zero hopping".into(),
                ))
            }
        };
        let t_max = self.time.t_max / unit;
        // validates steps and t_max
        uniform_time_grid(t_max, self.time.steps)?;

        if let Some(sweep) = &self.sweep {
            sweep.resolve_thetas()?;
        }

        Ok(Scenario {
            lattice,
            input,
            t_max,
            steps: self.time.steps,
        })
    }
}

impl InputConfig {
    pub fn resolve_theta(&self) -> Result<f64> {
        match (self.theta, self.concurrence) {
            (Some(theta), None) => {
                if self.branch.is_some() {
                    return Err(Error::Config(
                        "input.branch only applies together with input.concurrence".into(),
                    ));
                }
                Ok(theta)
            }
            (None, Some(c)) => theta_for_concurrence(c, self.branch.unwrap_or_default()),
            (Some(_), Some(_)) => Err(Error::Config(
                "input.theta and input.concurrence are mutually exclusive".into(),
            )),
            (None, None) => Err(Error::Config(
                "input needs one of theta or concurrence".into(),
            )),
        }
    }
}

impl SweepConfig {
    /// Angles in the order given; duplicates are rejected.
    pub fn resolve_thetas(&self) -> Result<Vec<f64>> {
        let thetas = match (&self.thetas, &self.concurrences) {
            (Some(thetas), None) => {
                if self.branch.is_some() {
                    return Err(Error::Config(
                        "sweep.branch only applies together with sweep.concurrences".into(),
                    ));
                }
                thetas.clone()
            }
            (None, Some(cs)) => cs
                .iter()
                .map(|&c| theta_for_concurrence(c, self.branch.unwrap_or_default()))
                .collect::<Result<_>>()?,
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "sweep.thetas and sweep.concurrences are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "sweep needs a list of thetas or concurrences".into(),
                ))
            }
        };
        if thetas.is_empty() {
            return Err(Error::Config("sweep list is empty".into()));
        }
        for (i, a) in thetas.iter().enumerate() {
            if thetas[..i].contains(a) {
                return Err(Error::Config(format!("duplicate sweep angle {a}")));
            }
        }
        Ok(thetas)
    }
}

/// Accepts either a JSON scenario or a previously written CSV output whose
/// header carries a `# config: ` line.
fn parse_config_source(text: &str) -> Result<Value> {
    if text.trim_start().starts_with('#') {
        let line = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .find_map(|l| l.strip_prefix(CONFIG_HEADER_PREFIX))
            .ok_or_else(|| Error::Config("no `# config:` header line found".into()))?;
        return Ok(serde_json::from_str(line)?);
    }
    Ok(serde_json::from_str(text)?)
}

/// Applies one `dotted.path=value` override. The value is read as JSON when
/// it parses (numbers, booleans, `null`), otherwise as a string.
pub fn apply_override(root: &mut Value, item: &str) -> Result<()> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Config(format!("bad override path {path:?}")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));

    let mut node = root;
    for key in &keys[..keys.len() - 1] {
        let map = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override path {path:?} crosses a scalar")))?;
        node = map
            .entry(key.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let map = node
        .as_object_mut()
        .ok_or_else(|| Error::Config(format!("override path {path:?} crosses a scalar")))?;
    map.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn default_resolves_to_the_maximally_entangled_scenario() {
        let s = ScenarioConfig::default().resolve().unwrap();
        assert_eq!(s.lattice.num_cavities(), 29);
        assert!((s.input.theta() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(s.t_max, 83.57);
        assert_eq!(s.time_grid().unwrap().len(), 1001);
    }

    #[test]
    fn hopping_scale_divides_by_j() {
        let mut c = ScenarioConfig::default();
        c.lattice.hopping = 0.1;
        c.time.scale = TimeScale::Hopping;
        c.time.t_max = 100.0;
        assert!((c.resolve().unwrap().t_max - 1000.0).abs() < 1e-9);
        c.lattice.hopping = 0.0;
        assert!(matches!(c.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn theta_and_concurrence_are_exclusive() {
        let mut c = ScenarioConfig::default();
        c.input.theta = Some(0.3);
        assert!(c.resolve().is_err());
        c.input.concurrence = None;
        assert!(c.resolve().is_err(), "branch without concurrence");
        c.input.branch = None;
        assert!((c.resolve().unwrap().input.theta() - 0.3).abs() < 1e-15);
        c.input.theta = None;
        assert!(c.resolve().is_err());
    }

    #[test]
    fn nested_invariants_are_checked() {
        let mut c = ScenarioConfig::default();
        c.input.site_s = 30;
        assert!(matches!(
            c.resolve(),
            Err(Error::SiteOutOfRange { site: 30, .. })
        ));
        let mut c = ScenarioConfig::default();
        c.input.site_s = 15;
        assert!(c.resolve().is_err());
        let mut c = ScenarioConfig::default();
        c.time.steps = 0;
        assert!(c.resolve().is_err());
        let mut c = ScenarioConfig::default();
        c.lattice.num_cavities = 1;
        assert!(c.resolve().is_err());
    }

    #[test]
    fn sweep_resolution() {
        let sweep = SweepConfig {
            thetas: None,
            concurrences: Some(vec![0.0, 0.5, 1.0]),
            branch: None,
        };
        let t = sweep.resolve_thetas().unwrap();
        assert_eq!(t[0], 0.0);
        assert!((t[1] - PI / 12.0).abs() < 1e-15);
        assert!((t[2] - FRAC_PI_4).abs() < 1e-15);

        let high = SweepConfig {
            branch: Some(Branch::High),
            ..sweep.clone()
        };
        assert_eq!(high.resolve_thetas().unwrap()[0], FRAC_PI_2);

        let dup = SweepConfig {
            thetas: Some(vec![0.1, 0.2, 0.1]),
            concurrences: None,
            branch: None,
        };
        assert!(matches!(dup.resolve_thetas(), Err(Error::Config(_))));
        assert!(SweepConfig::default().resolve_thetas().is_err());
    }

    #[test]
    fn overrides_follow_dotted_paths() {
        let mut v = serde_json::to_value(ScenarioConfig::default()).unwrap();
        apply_override(&mut v, "lattice.hopping=0.01").unwrap();
        apply_override(&mut v, "input.concurrence=null").unwrap();
        apply_override(&mut v, "input.branch=null").unwrap();
        apply_override(&mut v, "input.theta=0.25").unwrap();
        apply_override(&mut v, "time.scale=hopping").unwrap();
        apply_override(&mut v, "output.format=json").unwrap();
        let c: ScenarioConfig = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(c.lattice.hopping, 0.01);
        assert_eq!(c.input.theta, Some(0.25));
        assert_eq!(c.input.concurrence, None);
        assert_eq!(c.time.scale, TimeScale::Hopping);
        assert_eq!(c.output.format, OutputFormat::Json);
        c.resolve().unwrap();

        assert!(apply_override(&mut v, "lattice.hopping").is_err());
        assert!(apply_override(&mut v, "lattice.omega.x=1").is_err());
        assert!(apply_override(&mut v, "lattice..omega=1").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v = serde_json::to_value(ScenarioConfig::default()).unwrap();
        apply_override(&mut v, "lattice.hoping=0.1").unwrap();
        assert!(serde_json::from_value::<ScenarioConfig>(v).is_err());
    }

    #[test]
    fn config_text_round_trips() {
        let c = ScenarioConfig::default();
        let back = ScenarioConfig::from_json_str(&c.to_json_pretty()).unwrap();
        assert_eq!(back, c);
        let back = ScenarioConfig::from_json_str(&c.to_json_compact()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn config_can_be_recovered_from_an_output_header() {
        let c = ScenarioConfig::default();
        let text = format!(
            "# cca-core test\n{CONFIG_HEADER_PREFIX}{}\nk,frequency\n1,2.0\n",
            c.to_json_compact()
        );
        let v = parse_config_source(&text).unwrap();
        assert_eq!(serde_json::from_value::<ScenarioConfig>(v).unwrap(), c);
        assert!(parse_config_source("# nothing here\nk\n").is_err());
    }
}
