use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    Exact,
    Kubota,
    SteinerFit,
}

impl From<Method> for polyapprox::deviations::VolumeMethod {
    fn from(m: Method) -> Self {
        use polyapprox::deviations::VolumeMethod as V;
        match m {
            Method::Auto => V::Auto,
            Method::Exact => V::Exact,
            Method::Kubota => V::Kubota,
            Method::SteinerFit => V::SteinerFit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationKind {
    /// Δ_j (needs --j)
    Delta,
    /// Δ_Σ = Σ_j Δ_j
    Sigma,
    /// Δ_Λ with --moments
    Lambda,
    /// Δ_1 next to V_1(D_n) δ_1
    Delta1,
    /// dual deviation Δ̃_q (needs --q; q = 0 gives the log deviation)
    Dual,
    /// Σ_j Δ̃_j
    DualSigma,
    /// dual Δ_Λ with --moments
    DualLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Inscribed,
    Circumscribed,
}

impl From<Side> for polyapprox::optimize::Mode {
    fn from(s: Side) -> Self {
        match s {
            Side::Inscribed => polyapprox::optimize::Mode::Inscribed,
            Side::Circumscribed => polyapprox::optimize::Mode::Circumscribed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Density {
    Uniform,
    /// curvature density optimal for Δ_j
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    /// Δ_j (needs --j)
    Intrinsic,
    /// Δ_Σ
    Wills,
    /// Δ̃_q (needs --q)
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// One command with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    /// Ball constants, random-polytope constants and tiling numbers in dimension n
    Constants {
        #[arg(long)]
        dim: usize,
        /// Only this index (default: all j = 1..=n)
        #[arg(long)]
        j: Option<usize>,
    },
    /// Intrinsic volumes (or the dual volume with --q) of one body
    Estimate {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        body: String,
        /// Only V_j (default: the whole vector)
        #[arg(long, conflicts_with = "q")]
        j: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// A deviation between two bodies
    Deviation {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_enum)]
        kind: DeviationKind,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long)]
        body: String,
        #[arg(long)]
        other: String,
        /// Moments of Λ: `weibull`, `constant:R` or `m0,m1,..,mn`
        #[arg(long, default_value = "weibull")]
        moments: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Scaled mean deviation of random polytopes over budgets N, extrapolated to N → ∞
    RandomLimit {
        #[arg(long)]
        dim: usize,
        /// Index j of Δ_j (default n)
        #[arg(long)]
        j: Option<usize>,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        budgets: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "ball")]
        body: String,
        #[arg(long, value_enum, default_value_t = Density::Uniform)]
        density: Density,
        #[arg(long, value_enum, default_value_t = Side::Inscribed)]
        mode: Side,
    },
    /// Best approximating polytope with budget N
    Optimize {
        #[arg(long)]
        dim: usize,
        #[arg(long = "N")]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveKind::Intrinsic)]
        kind: ObjectiveKind,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long, default_value = "ball")]
        body: String,
        #[arg(long, value_enum, default_value_t = Side::Inscribed)]
        mode: Side,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 3000)]
        steps: usize,
    },
    /// Triangle-inequality failure of Δ_j on two opposite caps of the ball
    Counterexample {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// π δ_1 and Δ_1 between the unit disc and triangles of circumradius 1 + h, h ∈ [-0.9, 3]
    #[command(alias = "figure1")]
    DiscTriangle,
    /// Inequality suite for the constants plus the invariant corpus
    Verify {
        /// Largest dimension of the inequality suite
        #[arg(long, default_value_t = 1000)]
        dim: usize,
        /// Number of bodies in the invariant corpus
        #[arg(long, default_value_t = 50)]
        count: u64,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Constants { .. } => "constants",
            Task::Estimate { .. } => "estimate",
            Task::Deviation { .. } => "deviation",
            Task::RandomLimit { .. } => "random-limit",
            Task::Optimize { .. } => "optimize",
            Task::Counterexample { .. } => "counterexample",
            Task::DiscTriangle => "disc-triangle",
            Task::Verify { .. } => "verify",
        }
    }

    /// Whether the command has a CSV form.
    pub fn has_csv(&self) -> bool {
        matches!(self, Task::RandomLimit { .. } | Task::DiscTriangle)
    }
}

/// Everything a run depends on. Replaying it reproduces the emitted records exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub task: Task,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}
