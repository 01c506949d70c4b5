use crate::error::{BowtieError, Result};
use crate::fields::RegimeThresholds;
use crate::geometry::{BowtieConfig, Layout};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Horizontal dipole, `a = (1, 0)`.
    Case1,
    /// Vertical dipole at the origin.
    Case2,
    /// Vertical dipole at height `p`.
    Case3,
    /// Horizontal dipole at the origin next to the left inclusion only.
    SingleInclusion,
    /// Uniform horizontal background field, no emitter.
    Background,
}

impl Case {
    pub fn parse(s: &str) -> Result<Case> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "case1" => Ok(Case::Case1),
            "2" | "case2" => Ok(Case::Case2),
            "3" | "case3" => Ok(Case::Case3),
            "single" | "single_inclusion" | "4" => Ok(Case::SingleInclusion),
            "background" | "background_linear" | "5" => Ok(Case::Background),
            other => Err(BowtieError::InvalidConfig(format!("unknown case '{other}'"))),
        }
    }

    pub fn default_p(&self) -> f64 {
        match self {
            Case::Case1 | Case::Case3 => 0.5,
            _ => 0.0,
        }
    }

    /// Vertex whose neighbourhood is profiled.
    pub fn vertex(&self) -> usize {
        if *self == Case::SingleInclusion {
            1
        } else {
            2
        }
    }
}

fn d_panels() -> usize {
    32
}
fn d_order() -> usize {
    8
}
fn d_hmax() -> f64 {
    0.1
}
fn d_growth() -> f64 {
    0.25
}
fn d_mu() -> f64 {
    1.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshParams {
    #[serde(default = "d_panels")]
    pub panels_per_side: usize,
    #[serde(default)]
    pub grading: Option<f64>,
    #[serde(default = "d_order")]
    pub nodes_per_panel: usize,
    #[serde(default = "d_hmax")]
    pub max_panel_length: f64,
    #[serde(default = "d_growth")]
    pub growth: f64,
    #[serde(default = "d_mu")]
    pub mu: f64,
    #[serde(default)]
    pub cap_fillet: Option<f64>,
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams {
            panels_per_side: d_panels(),
            grading: None,
            nodes_per_panel: d_order(),
            max_panel_length: d_hmax(),
            growth: d_growth(),
            mu: d_mu(),
            cap_fillet: None,
        }
    }
}

fn d_rmin() -> f64 {
    1e-3
}
fn d_rmax() -> f64 {
    1e-1
}
fn d_count() -> usize {
    25
}

/// Radii `r/eps` log-spaced in `[r_min, r_max]` along `direction` from the vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    /// Defaults to the exterior bisector.
    #[serde(default)]
    pub direction: Option<[f64; 2]>,
    #[serde(default = "d_rmin")]
    pub r_min: f64,
    #[serde(default = "d_rmax")]
    pub r_max: f64,
    #[serde(default = "d_count")]
    pub count: usize,
}

impl Default for RaySpec {
    fn default() -> Self {
        RaySpec { direction: None, r_min: d_rmin(), r_max: d_rmax(), count: d_count() }
    }
}

impl RaySpec {
    pub fn radii(&self) -> Vec<f64> {
        let n = self.count.max(2);
        let (a, b) = (self.r_min.ln(), self.r_max.ln());
        (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
    }
}

macro_rules! defaults {
    ($($f:ident = $v:expr),* $(,)?) => {
        $(fn $f() -> f64 { $v })*
    };
}
defaults!(
    t_spatial = 0.02,
    t_eps = 0.1,
    t_mid = 3.0,
    t_gap = 2.0,
    t_bound = 3.0,
    t_flux = 3.0,
    t_case2 = 3.0,
    t_case2_slope = 0.1,
    t_extremal = 1e-2,
    t_extremal_band = 2.0,
    t_corner = 0.05,
    t_zero = 1e-10,
    t_a1_band = 3.0,
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "t_spatial")]
    pub spatial_slope: f64,
    #[serde(default = "t_eps")]
    pub epsilon_slope: f64,
    #[serde(default = "t_mid")]
    pub mid_band: f64,
    #[serde(default = "t_gap")]
    pub gap_band: f64,
    #[serde(default = "t_bound")]
    pub bound_band: f64,
    #[serde(default = "t_flux")]
    pub flux_band: f64,
    #[serde(default = "t_case2")]
    pub case2_band: f64,
    #[serde(default = "t_case2_slope")]
    pub case2_slope: f64,
    #[serde(default = "t_extremal")]
    pub extremal_rel: f64,
    #[serde(default = "t_extremal_band")]
    pub extremal_band: f64,
    #[serde(default = "t_corner")]
    pub corner_stability: f64,
    #[serde(default = "t_zero")]
    pub zero_gap: f64,
    #[serde(default = "t_a1_band")]
    pub a1_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

pub const DEFAULT_EPSILONS: [f64; 7] = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001];

fn d_eps() -> Vec<f64> {
    DEFAULT_EPSILONS.to_vec()
}
fn d_window() -> [f64; 2] {
    [1e-3, 1e-2]
}
fn d_tau() -> f64 {
    0.1
}
fn d_c0() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub case: Case,
    pub alpha: f64,
    /// Emitter height in units of `eps`; defaults by case.
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "d_eps")]
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub mesh: MeshParams,
    #[serde(default)]
    pub ray: RaySpec,
    /// Window of `r/eps` used by the near-vertex fit.
    #[serde(default = "d_window")]
    pub fit_window: [f64; 2],
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub regimes: RegimeThresholds,
    /// Nodes within `flux_window * eps` of a vertex enter the flux band.
    #[serde(default = "d_tau")]
    pub flux_window: f64,
    /// Samples closer than `vertex_exclusion * eps` to a vertex are left out of the
    /// upper-bound check.
    #[serde(default = "d_c0")]
    pub vertex_exclusion: f64,
}

impl SweepConfig {
    pub fn new(case: Case, alpha: f64) -> Self {
        let mut c: SweepConfig = toml::from_str(&format!("case = \"{}\"\nalpha = {alpha:?}\n", case_name(case)))
            .expect("default sweep config");
        c.case = case;
        c
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: SweepConfig = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or_else(|| self.case.default_p())
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(BowtieError::InvalidConfig("empty epsilon list".into()));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(BowtieError::InvalidConfig("epsilons must be strictly descending".into()));
        }
        if !(self.fit_window[0] > 0.0 && self.fit_window[1] > self.fit_window[0]) {
            return Err(BowtieError::InvalidConfig("fit window must be an increasing positive pair".into()));
        }
        if !(self.ray.r_min > 0.0 && self.ray.r_max > self.ray.r_min && self.ray.r_max <= 0.5) {
            return Err(BowtieError::InvalidConfig("ray radii must satisfy 0 < r_min < r_max <= 1/2".into()));
        }
        for &e in &self.epsilons {
            self.geometry(e).validate()?;
        }
        Ok(())
    }

    pub fn geometry(&self, epsilon: f64) -> BowtieConfig {
        BowtieConfig {
            alpha: self.alpha,
            epsilon,
            mu: self.mesh.mu,
            panels_per_side: self.mesh.panels_per_side,
            grading: self.mesh.grading,
            cap_fillet: self.mesh.cap_fillet,
            nodes_per_panel: self.mesh.nodes_per_panel,
            max_panel_length: self.mesh.max_panel_length,
            growth: self.mesh.growth,
            layout: if self.case == Case::SingleInclusion { Layout::Single } else { Layout::Pair },
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("serialisable config");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn case_name(case: Case) -> &'static str {
    match case {
        Case::Case1 => "case1",
        Case::Case2 => "case2",
        Case::Case3 => "case3",
        Case::SingleInclusion => "single_inclusion",
        Case::Background => "background",
    }
}
