//! Declarative network descriptions and their flat key-value document form.
//!
//! The document grammar (one `key = value` pair per line, `#` comments):
//!
//! ```text
//! tin-spec v1
//! kind = macd                     # ma|ema|macd|rsi|roc|stoch|cci|qnet
//! feature_dim = 1
//! eps = 9.99999999999999980e-13
//! init = replicate_ema            # replicate_sma | replicate_ema |
//!                                 # perturbed_replicate:<sigma> |
//!                                 # random_uniform:<lo>:<hi>
//! activation = identity           # identity | relu (qnet hidden layer)
//! conventional_sign = false       # macd only: fast-slow instead of slow-fast
//! window.fast = 12
//! window.slow = 26
//! window.signal = 9
//! ```
//!
//! Window names per kind: `n` (ma/ema/rsi/roc/cci), `fast/slow/signal`
//! (macd), `n/m` (stoch), `input/hidden` (qnet). Field names are stable and
//! part of the public contract.

use std::collections::BTreeMap;
use std::fmt;

use tinlab_graph::Activation;
use tinlab_oracles::ORACLE_EPS;

use crate::error::{NetError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndicatorKind {
    Ma,
    Ema,
    Macd,
    Rsi,
    Roc,
    Stoch,
    Cci,
    Qnet,
}

impl IndicatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndicatorKind::Ma => "ma",
            IndicatorKind::Ema => "ema",
            IndicatorKind::Macd => "macd",
            IndicatorKind::Rsi => "rsi",
            IndicatorKind::Roc => "roc",
            IndicatorKind::Stoch => "stoch",
            IndicatorKind::Cci => "cci",
            IndicatorKind::Qnet => "qnet",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ma" => IndicatorKind::Ma,
            "ema" => IndicatorKind::Ema,
            "macd" => IndicatorKind::Macd,
            "rsi" => IndicatorKind::Rsi,
            "roc" => IndicatorKind::Roc,
            "stoch" => IndicatorKind::Stoch,
            "cci" => IndicatorKind::Cci,
            "qnet" => IndicatorKind::Qnet,
            other => return Err(NetError::Config(format!("unknown indicator kind '{other}'"))),
        })
    }
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How trainable parameters are seeded at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitScheme {
    ReplicateSma,
    ReplicateEma,
    /// Exact replication plus N(0, sigma^2) noise on every trainable weight.
    PerturbedReplicate { sigma: f64 },
    RandomUniform { lo: f64, hi: f64 },
}

impl InitScheme {
    pub fn is_replicate(&self) -> bool {
        matches!(self, InitScheme::ReplicateSma | InitScheme::ReplicateEma)
    }

    fn to_doc(self) -> String {
        match self {
            InitScheme::ReplicateSma => "replicate_sma".into(),
            InitScheme::ReplicateEma => "replicate_ema".into(),
            InitScheme::PerturbedReplicate { sigma } => {
                format!("perturbed_replicate:{sigma:.17e}")
            }
            InitScheme::RandomUniform { lo, hi } => format!("random_uniform:{lo:.17e}:{hi:.17e}"),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let mut float = |what: &str| -> Result<f64> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| NetError::Config(format!("init '{s}' is missing {what}")))
        };
        let scheme = match head {
            "replicate_sma" => InitScheme::ReplicateSma,
            "replicate_ema" => InitScheme::ReplicateEma,
            "perturbed_replicate" => InitScheme::PerturbedReplicate { sigma: float("sigma")? },
            "random_uniform" => {
                let lo = float("lo")?;
                let hi = float("hi")?;
                InitScheme::RandomUniform { lo, hi }
            }
            other => return Err(NetError::Config(format!("unknown init scheme '{other}'"))),
        };
        if parts.next().is_some() {
            return Err(NetError::Config(format!("trailing fields in init '{s}'")));
        }
        Ok(scheme)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorNetworkSpec {
    pub kind: IndicatorKind,
    /// Named window lengths; see the module docs for the per-kind names.
    pub windows: BTreeMap<String, usize>,
    /// Number of input channels; univariate indicators use 1.
    pub feature_dim: usize,
    pub init: InitScheme,
    /// Regularizer for every bias-regularized division in the topology.
    pub eps: f64,
    /// Hidden-layer activation (qnet only; replication layers are linear).
    pub activation: Activation,
    /// MACD sign convention: false keeps `slow - fast`.
    pub conventional_sign: bool,
}

impl IndicatorNetworkSpec {
    fn base(kind: IndicatorKind, init: InitScheme) -> Self {
        Self {
            kind,
            windows: BTreeMap::new(),
            feature_dim: 1,
            init,
            eps: ORACLE_EPS,
            activation: Activation::Identity,
            conventional_sign: false,
        }
    }

    pub fn ma(n: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Ma, InitScheme::ReplicateSma);
        spec.windows.insert("n".into(), n);
        spec
    }

    pub fn ema(n: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Ema, InitScheme::ReplicateEma);
        spec.windows.insert("n".into(), n);
        spec
    }

    pub fn macd(fast: usize, slow: usize, signal: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Macd, InitScheme::ReplicateEma);
        spec.windows.insert("fast".into(), fast);
        spec.windows.insert("slow".into(), slow);
        spec.windows.insert("signal".into(), signal);
        spec
    }

    pub fn rsi(n: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Rsi, InitScheme::ReplicateSma);
        spec.windows.insert("n".into(), n);
        spec
    }

    pub fn roc(n: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Roc, InitScheme::ReplicateSma);
        spec.windows.insert("n".into(), n);
        spec
    }

    pub fn stoch(n: usize, m: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Stoch, InitScheme::ReplicateSma);
        spec.windows.insert("n".into(), n);
        spec.windows.insert("m".into(), m);
        spec
    }

    pub fn cci(n: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Cci, InitScheme::ReplicateSma);
        spec.windows.insert("n".into(), n);
        spec
    }

    pub fn qnet(input_len: usize, hidden: usize, feature_dim: usize) -> Self {
        let mut spec = Self::base(IndicatorKind::Qnet, InitScheme::ReplicateEma);
        spec.windows.insert("input".into(), input_len);
        spec.windows.insert("hidden".into(), hidden);
        spec.feature_dim = feature_dim;
        spec
    }

    pub fn with_init(mut self, init: InitScheme) -> Self {
        self.init = init;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_activation(mut self, activation: Activation) -> Self {
        self.activation = activation;
        self
    }

    pub fn window(&self, name: &str) -> Result<usize> {
        self.windows
            .get(name)
            .copied()
            .ok_or_else(|| NetError::Config(format!("{} spec is missing window '{name}'", self.kind)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.feature_dim == 0 {
            return Err(NetError::Config("feature_dim must be >= 1".into()));
        }
        if !(self.eps > 0.0) {
            return Err(NetError::Config("eps must be positive".into()));
        }
        if let InitScheme::PerturbedReplicate { sigma } = self.init {
            if sigma < 0.0 || !sigma.is_finite() {
                return Err(NetError::Config("perturbation sigma must be >= 0".into()));
            }
        }
        if let InitScheme::RandomUniform { lo, hi } = self.init {
            if !(lo < hi) {
                return Err(NetError::Config("random_uniform needs lo < hi".into()));
            }
        }
        for (name, &w) in &self.windows {
            if w == 0 {
                return Err(NetError::Config(format!("window '{name}' must be >= 1")));
            }
        }
        let expect = |names: &[&str]| -> Result<()> {
            for name in names {
                self.window(name)?;
            }
            let extra: Vec<&str> = self
                .windows
                .keys()
                .map(String::as_str)
                .filter(|k| !names.contains(k))
                .collect();
            if !extra.is_empty() {
                return Err(NetError::Config(format!(
                    "{} spec has unexpected windows: {}",
                    self.kind,
                    extra.join(", ")
                )));
            }
            Ok(())
        };
        match self.kind {
            IndicatorKind::Ma | IndicatorKind::Ema | IndicatorKind::Rsi | IndicatorKind::Roc
            | IndicatorKind::Cci => expect(&["n"])?,
            IndicatorKind::Stoch => expect(&["n", "m"])?,
            IndicatorKind::Macd => {
                expect(&["fast", "slow", "signal"])?;
                if self.window("fast")? >= self.window("slow")? {
                    return Err(NetError::Config(
                        "macd fast window must be smaller than slow window".into(),
                    ));
                }
            }
            IndicatorKind::Qnet => expect(&["input", "hidden"])?,
        }
        if self.kind != IndicatorKind::Qnet && self.feature_dim != 1 {
            return Err(NetError::Config(format!(
                "{} networks are univariate; feature_dim must be 1",
                self.kind
            )));
        }
        Ok(())
    }

    /// Flat key-value document form. `parse` inverts this exactly.
    pub fn to_doc(&self) -> String {
        let mut out = String::from("tin-spec v1\n");
        out.push_str(&format!("kind = {}\n", self.kind));
        out.push_str(&format!("feature_dim = {}\n", self.feature_dim));
        out.push_str(&format!("eps = {:.17e}\n", self.eps));
        out.push_str(&format!("init = {}\n", self.init.to_doc()));
        let act = match self.activation {
            Activation::Identity => "identity",
            Activation::Relu => "relu",
        };
        out.push_str(&format!("activation = {act}\n"));
        out.push_str(&format!("conventional_sign = {}\n", self.conventional_sign));
        for (name, w) in &self.windows {
            out.push_str(&format!("window.{name} = {w}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, head)) if head.trim() == "tin-spec v1" => {}
            _ => {
                return Err(NetError::Parse { line: 1, msg: "expected header 'tin-spec v1'".into() })
            }
        }
        let mut kind = None;
        let mut spec = Self::base(IndicatorKind::Ma, InitScheme::ReplicateSma);
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| NetError::Parse {
                line: line_no,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| NetError::Parse { line: line_no, msg };
            match key {
                "kind" => kind = Some(IndicatorKind::parse(value)?),
                "feature_dim" => {
                    spec.feature_dim =
                        value.parse().map_err(|_| bad(format!("bad feature_dim '{value}'")))?
                }
                "eps" => {
                    spec.eps = value.parse().map_err(|_| bad(format!("bad eps '{value}'")))?
                }
                "init" => spec.init = InitScheme::parse(value)?,
                "activation" => {
                    spec.activation = match value {
                        "identity" => Activation::Identity,
                        "relu" => Activation::Relu,
                        other => return Err(bad(format!("unknown activation '{other}'"))),
                    }
                }
                "conventional_sign" => {
                    spec.conventional_sign =
                        value.parse().map_err(|_| bad(format!("bad bool '{value}'")))?
                }
                _ => {
                    if let Some(name) = key.strip_prefix("window.") {
                        let w: usize =
                            value.parse().map_err(|_| bad(format!("bad window '{value}'")))?;
                        spec.windows.insert(name.to_string(), w);
                    } else {
                        return Err(bad(format!("unknown key '{key}'")));
                    }
                }
            }
        }
        spec.kind = kind.ok_or_else(|| NetError::Parse { line: 0, msg: "missing 'kind'".into() })?;
        spec.validate()?;
        Ok(spec)
    }
}
