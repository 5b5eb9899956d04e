//! Deterministic single-asset daily trading simulation.
//!
//! Actions execute at the adjusted close of the current day; the reward is
//! the next day's mark-to-market fractional return of the position held after
//! the trade, minus a proportional transaction cost when the position
//! changed. Equity compounds multiplicatively from 1.0.
//!
//! The default account is long-only with unit position: `Buy` while long and
//! `Sell` while flat are no-ops, not errors.

use chrono::NaiveDate;
use thiserror::Error;

use tinlab_data::{window, DataError, FeatureMatrix, WindowMode};

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("range error: {0}")]
    Range(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

pub type Result<T> = std::result::Result<T, EnvError>;

/// Discrete trading decision with stable codes 0/1/2 used to index Q-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Buy = 0,
    Sell = 1,
    Hold = 2,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Buy, Action::Sell, Action::Hold];

    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Result<Self> {
        Action::ALL
            .get(code)
            .copied()
            .ok_or_else(|| EnvError::Usage(format!("action code {code} out of range")))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Buy => "buy",
            Action::Sell => "sell",
            Action::Hold => "hold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvConfig {
    pub window_len: usize,
    /// Fraction of equity charged whenever the position changes.
    pub cost_rate: f64,
    pub allow_short: bool,
    /// Absolute row range `[start, end)` of the feature matrix to simulate;
    /// `None` means the full extent.
    pub start: Option<usize>,
    pub end: Option<usize>,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self { window_len: 52, cost_rate: 0.0, allow_short: false, start: None, end: None }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len == 0 {
            return Err(EnvError::Config("window_len must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.cost_rate) {
            return Err(EnvError::Config("cost_rate must lie in [0, 1)".into()));
        }
        if let (Some(s), Some(e)) = (self.start, self.end) {
            if s >= e {
                return Err(EnvError::Config(format!("empty range [{s}, {e})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Flat,
    Long,
    Short,
}

impl Position {
    fn exposure(self) -> f64 {
        match self {
            Position::Flat => 0.0,
            Position::Long => 1.0,
            Position::Short => -1.0,
        }
    }
}

/// One experience tuple.
#[derive(Debug, Clone)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub action: Action,
    pub reward: f64,
    pub next_obs: Vec<f64>,
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub next_obs: Vec<f64>,
    pub reward: f64,
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct EpisodeResult {
    /// `steps + 1` entries, starting at 1.0.
    pub equity_curve: Vec<f64>,
    pub actions: Vec<Action>,
    pub rewards: Vec<f64>,
    /// Decision date for each step.
    pub dates: Vec<NaiveDate>,
    pub trade_count: usize,
}

impl EpisodeResult {
    pub fn steps(&self) -> usize {
        self.actions.len()
    }

    pub fn final_equity(&self) -> f64 {
        *self.equity_curve.last().unwrap_or(&1.0)
    }

    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().sum()
    }

    /// `date,action,reward,equity` rows, one per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,action,reward,equity\n");
        for i in 0..self.actions.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.dates[i],
                self.actions[i].as_str(),
                self.rewards[i],
                self.equity_curve[i + 1]
            ));
        }
        out
    }
}

#[derive(Debug)]
pub struct TradingEnv<'a> {
    fm: &'a FeatureMatrix,
    cfg: EnvConfig,
    range_end: usize,
    t: usize,
    position: Position,
    equity: f64,
    trade_count: usize,
    done: bool,
}

impl<'a> TradingEnv<'a> {
    pub fn new(fm: &'a FeatureMatrix, cfg: EnvConfig) -> Result<Self> {
        cfg.validate()?;
        let start = cfg.start.unwrap_or(0);
        let end = cfg.end.unwrap_or(fm.len()).min(fm.len());
        if start >= end {
            return Err(EnvError::Range(format!(
                "range [{start}, {end}) is empty for {} rows",
                fm.len()
            )));
        }
        let first = start + cfg.window_len - 1;
        if first >= end {
            return Err(EnvError::Range(format!(
                "window of {} does not fit in range [{start}, {end})",
                cfg.window_len
            )));
        }
        let mut env = Self {
            fm,
            cfg,
            range_end: end,
            t: first,
            position: Position::Flat,
            equity: 1.0,
            trade_count: 0,
            done: false,
        };
        env.reset()?;
        Ok(env)
    }

    /// Back to a flat position and unit equity at the first full window.
    pub fn reset(&mut self) -> Result<Vec<f64>> {
        self.t = self.cfg.start.unwrap_or(0) + self.cfg.window_len - 1;
        self.position = Position::Flat;
        self.equity = 1.0;
        self.trade_count = 0;
        self.done = self.t + 1 >= self.range_end;
        self.observation()
    }

    pub fn observation(&self) -> Result<Vec<f64>> {
        Ok(window(self.fm, self.t, self.cfg.window_len, WindowMode::LastPriceRelative)?)
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn equity(&self) -> f64 {
        self.equity
    }

    pub fn trade_count(&self) -> usize {
        self.trade_count
    }

    /// Date of the pending decision.
    pub fn current_date(&self) -> NaiveDate {
        self.fm.dates[self.t]
    }

    fn apply_action(&mut self, action: Action) -> bool {
        let next = match (self.position, action, self.cfg.allow_short) {
            (Position::Flat, Action::Buy, _) => Position::Long,
            (Position::Long, Action::Sell, _) => Position::Flat,
            (Position::Flat, Action::Sell, true) => Position::Short,
            (Position::Short, Action::Buy, _) => Position::Flat,
            (p, _, _) => p,
        };
        let traded = next != self.position;
        if traded {
            self.trade_count += 1;
        }
        self.position = next;
        traded
    }

    pub fn step(&mut self, action: Action) -> Result<StepOutcome> {
        if self.done {
            return Err(EnvError::Usage("step after episode end".into()));
        }
        let traded = self.apply_action(action);
        let p_now = self.fm.price(self.t)?;
        let p_next = self.fm.price(self.t + 1)?;
        let exposure = self.position.exposure();
        let reward = exposure * (p_next - p_now) / p_now
            - if traded { self.cfg.cost_rate } else { 0.0 };
        self.equity *= 1.0 + reward;
        self.t += 1;
        self.done = self.t + 1 >= self.range_end;
        Ok(StepOutcome { next_obs: self.observation()?, reward, done: self.done })
    }
}

/// Run a policy to episode end. Deterministic given the policy and data.
pub fn run_policy<F>(fm: &FeatureMatrix, cfg: EnvConfig, mut policy: F) -> Result<EpisodeResult>
where
    F: FnMut(&[f64]) -> Action,
{
    let mut env = TradingEnv::new(fm, cfg)?;
    let mut obs = env.reset()?;
    let mut result = EpisodeResult {
        equity_curve: vec![1.0],
        actions: Vec::new(),
        rewards: Vec::new(),
        dates: Vec::new(),
        trade_count: 0,
    };
    while !env.is_done() {
        let action = policy(&obs);
        result.dates.push(env.current_date());
        let outcome = env.step(action)?;
        result.actions.push(action);
        result.rewards.push(outcome.reward);
        result.equity_curve.push(env.equity());
        obs = outcome.next_obs;
    }
    result.trade_count = env.trade_count();
    Ok(result)
}
