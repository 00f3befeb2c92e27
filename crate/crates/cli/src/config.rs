//! Run configuration, read from a single TOML file.

use std::path::PathBuf;

use lightlike_core::curvature::Tolerances;
use lightlike_core::special::SliceKind;
use lightlike_core::surface::Domain;
use lightlike_core::variation::{Direction, Profile};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Invariants,
    Classify,
    VerifyEgregium,
    VerifyWeingarten,
    VerifyGaussEq,
    #[serde(rename = "variation-1")]
    Variation1,
    #[serde(rename = "variation-2")]
    Variation2,
    CayleyHamilton,
    GraphClassify,
    SliceChecks,
    Convergence,
}

impl Analysis {
    pub const ALL: [Analysis; 11] = [
        Analysis::Invariants,
        Analysis::Classify,
        Analysis::VerifyEgregium,
        Analysis::VerifyWeingarten,
        Analysis::VerifyGaussEq,
        Analysis::Variation1,
        Analysis::Variation2,
        Analysis::CayleyHamilton,
        Analysis::GraphClassify,
        Analysis::SliceChecks,
        Analysis::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Invariants => "invariants",
            Analysis::Classify => "classify",
            Analysis::VerifyEgregium => "verify-egregium",
            Analysis::VerifyWeingarten => "verify-weingarten",
            Analysis::VerifyGaussEq => "verify-gauss-eq",
            Analysis::Variation1 => "variation-1",
            Analysis::Variation2 => "variation-2",
            Analysis::CayleyHamilton => "cayley-hamilton",
            Analysis::GraphClassify => "graph-classify",
            Analysis::SliceChecks => "slice-checks",
            Analysis::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slice {
    Euclidean3,
    Minkowski3,
    Hyperbolic3,
    Desitter3,
    Lightcone,
}

impl Slice {
    pub fn kind(self) -> SliceKind {
        match self {
            Slice::Euclidean3 => SliceKind::Euclidean3,
            Slice::Minkowski3 => SliceKind::Minkowski3,
            Slice::Hyperbolic3 => SliceKind::Hyperbolic3,
            Slice::Desitter3 => SliceKind::DeSitter3,
            Slice::Lightcone => SliceKind::Lightcone,
        }
    }
}

/// The surface record. `kind` is a catalog name, `expr` (four coordinate
/// expressions) or `graph` (the pair `f`, `g`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    /// `[u1_min, u1_max, u2_min, u2_max]`; required for `expr` and `graph`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<Slice>,
}

impl SurfaceConfig {
    pub fn domain(&self) -> Option<Domain> {
        self.domain.map(|d| Domain::new(d[0], d[1], d[2], d[3]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n1: usize,
    pub n2: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n1: 51, n2: 51 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationConfig {
    pub direction: DirectionName,
    /// Expression in `u1`, `u2`; ignored when `bump` is set.
    pub alpha: String,
    pub bump: Option<BumpConfig>,
    pub epsilons: Vec<f64>,
    /// Quadrature grid of the area integrals.
    pub grid: [usize; 2],
    pub profile: ProfileName,
}

impl Default for VariationConfig {
    fn default() -> Self {
        VariationConfig {
            direction: DirectionName::Minus,
            alpha: "1".into(),
            bump: None,
            epsilons: lightlike_core::variation::DEFAULT_EPSILONS.to_vec(),
            grid: [101, 101],
            profile: ProfileName::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionName {
    Plus,
    Minus,
}

impl From<DirectionName> for Direction {
    fn from(d: DirectionName) -> Direction {
        match d {
            DirectionName::Plus => Direction::Plus,
            DirectionName::Minus => Direction::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Linear,
    Sine,
}

impl From<ProfileName> for Profile {
    fn from(p: ProfileName) -> Profile {
        match p {
            ProfileName::Linear => Profile::Linear,
            ProfileName::Sine => Profile::Sine,
        }
    }
}

/// Classification factors and the acceptance thresholds of every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSet {
    pub mt: f64,
    pub umbilic: f64,
    pub parabolic: f64,
    pub metric_det: f64,
    pub spectrum: f64,
    pub egregium: f64,
    pub gauss_eq: f64,
    pub weingarten: f64,
    /// Finite-difference step of frame derivatives.
    pub fd_step: f64,
    pub variation_rel: f64,
    pub variation_abs: f64,
    pub cayley_hamilton_operator: f64,
    pub cayley_hamilton_derivative: f64,
    pub graph: f64,
    pub slice: f64,
    pub horosphere: f64,
    /// Shared threshold of the lightcone marginally trapped predicates.
    pub predicate: f64,
    pub quadrature_order: f64,
    pub stencil_order: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceSet {
            mt: t.mt,
            umbilic: t.umbilic,
            parabolic: t.parabolic,
            metric_det: t.metric_det,
            spectrum: t.spectrum,
            egregium: 1e-8,
            gauss_eq: 1e-7,
            weingarten: 1e-6,
            fd_step: 1e-5,
            variation_rel: 1e-3,
            variation_abs: 1e-6,
            cayley_hamilton_operator: 1e-12,
            cayley_hamilton_derivative: 1e-6,
            graph: 1e-8,
            slice: 1e-7,
            horosphere: 1e-9,
            predicate: 1e-7,
            quadrature_order: 3.5,
            stencil_order: 1.8,
        }
    }
}

impl ToleranceSet {
    pub const KEYS: [&'static str; 19] = [
        "mt",
        "umbilic",
        "parabolic",
        "metric_det",
        "spectrum",
        "egregium",
        "gauss_eq",
        "weingarten",
        "fd_step",
        "variation_rel",
        "variation_abs",
        "cayley_hamilton_operator",
        "cayley_hamilton_derivative",
        "graph",
        "slice",
        "horosphere",
        "predicate",
        "quadrature_order",
        "stencil_order",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "mt" => &mut self.mt,
            "umbilic" => &mut self.umbilic,
            "parabolic" => &mut self.parabolic,
            "metric_det" => &mut self.metric_det,
            "spectrum" => &mut self.spectrum,
            "egregium" => &mut self.egregium,
            "gauss_eq" => &mut self.gauss_eq,
            "weingarten" => &mut self.weingarten,
            "fd_step" => &mut self.fd_step,
            "variation_rel" => &mut self.variation_rel,
            "variation_abs" => &mut self.variation_abs,
            "cayley_hamilton_operator" => &mut self.cayley_hamilton_operator,
            "cayley_hamilton_derivative" => &mut self.cayley_hamilton_derivative,
            "graph" => &mut self.graph,
            "slice" => &mut self.slice,
            "horosphere" => &mut self.horosphere,
            "predicate" => &mut self.predicate,
            "quadrature_order" => &mut self.quadrature_order,
            "stencil_order" => &mut self.stencil_order,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CliError> {
        if !value.is_finite() || value < 0.0 {
            return Err(CliError::Config(format!("tolerance {key} must be a finite non-negative number")));
        }
        *self.slot(key).ok_or_else(|| CliError::Config(format!("unknown tolerance key `{key}`")))? = value;
        Ok(())
    }

    pub fn classification(&self) -> Tolerances {
        Tolerances {
            mt: self.mt,
            umbilic: self.umbilic,
            parabolic: self.parabolic,
            metric_det: self.metric_det,
            spectrum: self.spectrum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub report: String,
    /// File name of the field dump; no dump is written when `fields` is
    /// empty.
    pub dump: String,
    pub fields: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("."),
            report: "report.json".into(),
            dump: "fields.csv".into(),
            fields: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub analyses: Vec<Analysis>,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub threads: usize,
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: ToleranceSet,
    #[serde(default)]
    pub variation: VariationConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn parse(src: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = toml::from_str(src).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.analyses.is_empty() {
            return bad("at least one analysis must be requested".into());
        }
        if self.grid.n1 < 3 || self.grid.n2 < 3 {
            return bad(format!("grid {}x{} is below 3 nodes per axis", self.grid.n1, self.grid.n2));
        }
        if self.variation.grid.iter().any(|&n| n < 3) {
            return bad("variation grid is below 3 nodes per axis".into());
        }
        let s = &self.surface;
        match s.kind.as_str() {
            "expr" if s.coords.is_none() || s.domain.is_none() => {
                return bad("surface kind `expr` needs `coords` and `domain`".into())
            }
            "graph" if s.f.is_none() || s.g.is_none() || s.domain.is_none() => {
                return bad("surface kind `graph` needs `f`, `g` and `domain`".into())
            }
            "expr" | "graph" => {}
            name if lightlike_core::catalog::names().all(|n| n != name) => {
                return bad(format!("unknown catalog surface `{name}`"))
            }
            _ => {}
        }
        if let Some(d) = s.domain {
            if !(d[0] < d[1] && d[2] < d[3]) || d.iter().any(|v| !v.is_finite()) {
                return bad(format!("domain {d:?} is empty or not finite"));
            }
        }
        if self.analyses.contains(&Analysis::GraphClassify) && s.kind != "graph" {
            return bad("graph-classify needs a surface of kind `graph`".into());
        }
        if self.analyses.contains(&Analysis::SliceChecks) && s.slice.is_none() {
            return bad("slice-checks needs `surface.slice`".into());
        }
        Ok(())
    }

    /// Applies a `NxM` grid override.
    pub fn set_grid(&mut self, spec: &str) -> Result<(), CliError> {
        let parsed =
            spec.split_once(['x', 'X']).and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
        let (n1, n2) = parsed.ok_or_else(|| CliError::Config(format!("grid `{spec}` is not of the form NxM")))?;
        self.grid = GridConfig { n1, n2 };
        self.validate()
    }

    /// Applies a `key=value` tolerance override.
    pub fn set_tolerance(&mut self, spec: &str) -> Result<(), CliError> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("tolerance override `{spec}` is not of the form key=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| CliError::Config(format!("`{v}` is not a number")))?;
        self.tolerances.set(k.trim(), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
analyses = ["classify"]
[surface]
kind = "plane"
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.analyses, vec![Analysis::Classify]);
        assert_eq!(c.grid, GridConfig::default());
        assert_eq!(c.tolerances, ToleranceSet::default());
        assert_eq!(c.threads, 0);
    }

    #[test]
    fn analysis_names_round_trip() {
        for a in Analysis::ALL {
            let s = toml::Value::try_from(a).unwrap();
            assert_eq!(s.as_str(), Some(a.name()));
        }
    }

    #[test]
    fn rejects_empty_analyses_and_small_grids() {
        let e = RunConfig::parse("analyses = []\n[surface]\nkind = \"plane\"\n").unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
        let e = RunConfig::parse(&format!("{MINIMAL}[grid]\nn1 = 2\nn2 = 5\n")).unwrap_err();
        assert!(e.to_string().contains("below 3"));
    }

    #[test]
    fn rejects_unknown_surface_and_missing_fields() {
        assert!(RunConfig::parse("analyses = [\"classify\"]\n[surface]\nkind = \"nope\"\n").is_err());
        assert!(RunConfig::parse("analyses = [\"classify\"]\n[surface]\nkind = \"graph\"\nf = \"u1\"\n").is_err());
        let slice = "analyses = [\"slice-checks\"]\n[surface]\nkind = \"plane\"\n";
        assert!(RunConfig::parse(slice).is_err());
    }

    #[test]
    fn overrides() {
        let mut c = RunConfig::parse(MINIMAL).unwrap();
        c.set_grid("7x9").unwrap();
        assert_eq!(c.grid, GridConfig { n1: 7, n2: 9 });
        assert!(c.set_grid("2x9").is_err());
        assert!(c.set_grid("seven").is_err());
        c.set_tolerance("egregium=1e-15").unwrap();
        assert_eq!(c.tolerances.egregium, 1e-15);
        assert!(c.set_tolerance("bogus=1").is_err());
        assert!(c.set_tolerance("mt=-1").is_err());
        for k in ToleranceSet::KEYS {
            c.set_tolerance(&format!("{k}=0.5")).unwrap();
        }
    }
}
