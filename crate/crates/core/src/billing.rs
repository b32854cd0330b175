//! Cloud billing models, exact money, and the savings metrics of the
//! splicing attack.
//!
//! Money is an integer count of micro-units. Per-shot costs and percentages
//! are exact rationals; rounding only happens when a value is formatted.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::circuit::GateCensus;

pub type Exact = Ratio<i128>;

const MICRO: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BillingError {
    #[error("currency mismatch: {0} vs {1}")]
    CurrencyMismatch(Currency, Currency),
    #[error("invalid amount '{0}'")]
    BadAmount(String),
    #[error("unknown currency '{0}'")]
    BadCurrency(String),
    #[error("negative price {0}")]
    NegativePrice(Money),
    #[error("granularity must be at least 1 second")]
    ZeroGranularity,
    #[error("receipt needs at least 1 shot and 1 part")]
    EmptyReceipt,
    #[error("time model needs at least 2 calibration points")]
    TooFewPoints,
    #[error("calibration parts must be strictly increasing")]
    UnsortedCalibration,
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
    #[error("amount overflow")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Currency {
    Usd,
    Credits,
}

impl fmt::Display for Currency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Currency::Usd => "USD",
            Currency::Credits => "credits",
        })
    }
}

impl FromStr for Currency {
    type Err = BillingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "usd" => Ok(Currency::Usd),
            "credits" | "credit" => Ok(Currency::Credits),
            _ => Err(BillingError::BadCurrency(s.to_string())),
        }
    }
}

/// Amount in micro-units (1e-6) of a currency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Money {
    micros: i64,
    currency: Currency,
}

impl Money {
    pub const fn from_micros(micros: i64, currency: Currency) -> Self {
        Money { micros, currency }
    }

    pub const fn zero(currency: Currency) -> Self {
        Money::from_micros(0, currency)
    }

    /// Parses a plain decimal with at most 6 fractional digits.
    pub fn parse(amount: &str, currency: Currency) -> Result<Self, BillingError> {
        let bad = || BillingError::BadAmount(amount.to_string());
        let (neg, digits) = match amount.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, amount.strip_prefix('+').unwrap_or(amount)),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() && frac.is_empty()
            || frac.len() > 6
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: i64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_micros: i64 = if frac.is_empty() {
            0
        } else {
            format!("{frac:0<6}").parse().map_err(|_| bad())?
        };
        let micros = whole
            .checked_mul(MICRO)
            .and_then(|w| w.checked_add(frac_micros))
            .ok_or_else(bad)?;
        Ok(Money::from_micros(
            if neg { -micros } else { micros },
            currency,
        ))
    }

    pub fn micros(&self) -> i64 {
        self.micros
    }

    pub fn currency(&self) -> Currency {
        self.currency
    }

    pub fn checked_add(self, rhs: Money) -> Result<Money, BillingError> {
        if self.currency != rhs.currency {
            return Err(BillingError::CurrencyMismatch(self.currency, rhs.currency));
        }
        let micros = self
            .micros
            .checked_add(rhs.micros)
            .ok_or(BillingError::Overflow)?;
        Ok(Money::from_micros(micros, self.currency))
    }

    pub fn checked_sub(self, rhs: Money) -> Result<Money, BillingError> {
        self.checked_add(Money::from_micros(-rhs.micros, rhs.currency))
    }

    pub fn times(self, n: u64) -> Result<Money, BillingError> {
        let micros = i64::try_from(n)
            .ok()
            .and_then(|n| self.micros.checked_mul(n))
            .ok_or(BillingError::Overflow)?;
        Ok(Money::from_micros(micros, self.currency))
    }

    pub fn as_exact(&self) -> Exact {
        Exact::from_integer(self.micros as i128) / Exact::from_integer(MICRO as i128)
    }

    /// Fixed-point rendering with `decimals` places, rounding half away
    /// from zero.
    pub fn format(&self, decimals: u32) -> String {
        format_exact(&self.as_exact(), decimals)
    }

    /// Shortest exact decimal, at least `min_decimals` places.
    pub fn format_trimmed(&self, min_decimals: usize) -> String {
        let s = self.format(6);
        let (int, frac) = s.split_once('.').unwrap();
        let mut frac = frac.trim_end_matches('0').to_string();
        while frac.len() < min_decimals {
            frac.push('0');
        }
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.format_trimmed(2), self.currency)
    }
}

/// Rounds an exact value to `decimals` places, half away from zero.
pub fn format_exact(value: &Exact, decimals: u32) -> String {
    let scale = 10i128.pow(decimals);
    let scaled = value * Exact::from_integer(scale);
    let neg = scaled < Exact::from_integer(0);
    let abs = if neg { -scaled } else { scaled };
    let mut units = abs.floor().to_integer();
    if abs.fract() * Exact::from_integer(2) >= Exact::from_integer(1) {
        units += 1;
    }
    let int = units / scale;
    let frac = units % scale;
    let sign = if neg && units != 0 { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = decimals as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PricingModel {
    PerTaskPerShot {
        per_task: Money,
        per_shot: Money,
    },
    /// Charged per started `granularity_seconds` of wall time.
    TimeBased {
        per_second: Money,
        granularity_seconds: u64,
    },
    PerGate {
        per_task: Money,
        per_1q: Money,
        per_2q: Money,
        per_meas: Money,
        per_reset: Money,
    },
}

impl PricingModel {
    fn prices(&self) -> Vec<Money> {
        match self {
            PricingModel::PerTaskPerShot { per_task, per_shot } => vec![*per_task, *per_shot],
            PricingModel::TimeBased { per_second, .. } => vec![*per_second],
            PricingModel::PerGate {
                per_task,
                per_1q,
                per_2q,
                per_meas,
                per_reset,
            } => vec![*per_task, *per_1q, *per_2q, *per_meas, *per_reset],
        }
    }

    pub fn currency(&self) -> Currency {
        self.prices()[0].currency()
    }

    /// Rejects negative prices, mixed currencies, and zero granularity.
    pub fn validate(&self) -> Result<(), BillingError> {
        let prices = self.prices();
        let ccy = prices[0].currency();
        for p in &prices {
            if p.micros() < 0 {
                return Err(BillingError::NegativePrice(*p));
            }
            if p.currency() != ccy {
                return Err(BillingError::CurrencyMismatch(ccy, p.currency()));
            }
        }
        if let PricingModel::TimeBased {
            granularity_seconds: 0,
            ..
        } = self
        {
            return Err(BillingError::ZeroGranularity);
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PricingModel::PerTaskPerShot { .. } => "per_task_per_shot",
            PricingModel::TimeBased { .. } => "time_based",
            PricingModel::PerGate { .. } => "per_gate",
        }
    }

    /// Same model with the per-task fee set to zero.
    pub fn without_task_fee(&self) -> PricingModel {
        let mut m = self.clone();
        match &mut m {
            PricingModel::PerTaskPerShot { per_task, .. }
            | PricingModel::PerGate { per_task, .. } => {
                *per_task = Money::zero(per_task.currency())
            }
            PricingModel::TimeBased { .. } => {}
        }
        m
    }
}

/// What the provider saw of one submitted task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskReceipt {
    pub shots: u64,
    pub wall_time_seconds: u64,
    pub census: GateCensus,
    /// Subcircuits spliced into the task.
    pub parts: u64,
}

impl TaskReceipt {
    pub fn new(shots: u64, wall_time_seconds: u64, census: GateCensus, parts: u64) -> Self {
        TaskReceipt {
            shots,
            wall_time_seconds,
            census,
            parts,
        }
    }

    pub fn effective_shots(&self) -> u64 {
        self.shots * self.parts
    }
}

pub fn price(model: &PricingModel, receipt: &TaskReceipt) -> Result<Money, BillingError> {
    model.validate()?;
    if receipt.shots == 0 || receipt.parts == 0 {
        return Err(BillingError::EmptyReceipt);
    }
    match model {
        PricingModel::PerTaskPerShot { per_task, per_shot } => {
            per_task.checked_add(per_shot.times(receipt.shots)?)
        }
        PricingModel::TimeBased {
            per_second,
            granularity_seconds,
        } => {
            let g = *granularity_seconds;
            let billed = receipt.wall_time_seconds.div_ceil(g) * g;
            per_second.times(billed)
        }
        PricingModel::PerGate {
            per_task,
            per_1q,
            per_2q,
            per_meas,
            per_reset,
        } => {
            let c = &receipt.census;
            per_task
                .checked_add(per_1q.times(c.n_1q)?)?
                .checked_add(per_2q.times(c.n_2q)?)?
                .checked_add(per_meas.times(c.n_meas)?)?
                .checked_add(per_reset.times(c.n_reset)?)
        }
    }
}

/// Price in a required currency; fails when the model bills in another.
pub fn price_in(
    model: &PricingModel,
    receipt: &TaskReceipt,
    currency: Currency,
) -> Result<Money, BillingError> {
    let m = price(model, receipt)?;
    if m.currency() != currency {
        return Err(BillingError::CurrencyMismatch(m.currency(), currency));
    }
    Ok(m)
}

/// `(parts − 1) × shots × per_shot`: the per-shot charges a spliced task
/// skips compared with running every part as its own task.
pub fn avoided_cost(parts: u64, shots: u64, per_shot: Money) -> Result<Money, BillingError> {
    if parts == 0 {
        return Err(BillingError::EmptyReceipt);
    }
    per_shot.times(shots)?.times(parts - 1)
}

/// Per-shot baseline of the evaluated machine: 1.5 credits per 1000 shots.
pub const BASELINE_PER_SHOT: Money = Money::from_micros(1_500, Currency::Credits);

/// Savings of a spliced task against running each part alone. All three
/// percentage conventions are kept because published tables mix them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavingsReport {
    pub cost: Money,
    pub baseline_cost: Money,
    pub effective_shots: u64,
    pub cost_per_shot: Exact,
    pub baseline_cost_per_shot: Exact,
    /// `baseline_cost − cost`
    pub free_computation: Money,
    /// `(baseline per shot / attack per shot − 1) · 100`
    pub excess_pct: Option<Exact>,
    /// `baseline per shot / attack per shot · 100`
    pub ratio_pct: Option<Exact>,
    /// `(free − cost) / free · 100`
    pub free_fraction_pct: Option<Exact>,
}

pub fn savings(
    cost: Money,
    shots: u64,
    parts: u64,
    baseline_per_shot: Money,
) -> Result<SavingsReport, BillingError> {
    if shots == 0 || parts == 0 {
        return Err(BillingError::EmptyReceipt);
    }
    let effective_shots = shots * parts;
    let baseline_cost = baseline_per_shot.times(effective_shots)?;
    let free = baseline_cost.checked_sub(cost)?;
    let eff = Exact::from_integer(effective_shots as i128);
    let cost_per_shot = cost.as_exact() / eff;
    let baseline_cost_per_shot = baseline_per_shot.as_exact();
    let hundred = Exact::from_integer(100);
    let ratio_pct = (cost.micros() != 0).then(|| baseline_cost_per_shot / cost_per_shot * hundred);
    let excess_pct = ratio_pct.map(|r| r - hundred);
    let free_fraction_pct = (free.micros() != 0)
        .then(|| (free.as_exact() - cost.as_exact()) / free.as_exact() * hundred);
    Ok(SavingsReport {
        cost,
        baseline_cost,
        effective_shots,
        cost_per_shot,
        baseline_cost_per_shot,
        free_computation: free,
        excess_pct,
        ratio_pct,
        free_fraction_pct,
    })
}

impl SavingsReport {
    /// Cost per shot with 6 decimals, as the tables print it.
    pub fn cost_per_shot_display(&self) -> String {
        format_exact(&self.cost_per_shot, 6)
    }

    pub fn pct_display(value: &Option<Exact>) -> String {
        value
            .as_ref()
            .map_or_else(|| "undefined".to_string(), |v| format_exact(v, 2))
    }
}

/// Piecewise-linear wall-time estimate as a function of spliced part count,
/// clamped to the end values outside the calibrated range.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeModel {
    points: Vec<(u64, f64)>,
}

pub fn fit_time_model(calibration: &[(u64, f64)]) -> Result<TimeModel, BillingError> {
    if calibration.len() < 2 {
        return Err(BillingError::TooFewPoints);
    }
    if calibration.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(BillingError::UnsortedCalibration);
    }
    Ok(TimeModel {
        points: calibration.to_vec(),
    })
}

impl TimeModel {
    pub fn estimate(&self, parts: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if parts <= first.0 as f64 {
            return first.1;
        }
        if parts >= last.0 as f64 {
            return last.1;
        }
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let (x0, x1) = (x0 as f64, x1 as f64);
            if parts <= x1 {
                return y0 + (y1 - y0) * (parts - x0) / (x1 - x0);
            }
        }
        last.1
    }

    /// Whole seconds, rounded up.
    pub fn estimate_seconds(&self, parts: u64) -> u64 {
        self.estimate(parts as f64).ceil() as u64
    }
}

/// Wall times of spliced Bell runs (1000 shots, 4 resets) on the evaluated
/// machine, by number of copies.
pub const BELL_TIME_CALIBRATION: [(u64, f64); 7] = [
    (1, 2.0),
    (2, 2.0),
    (4, 3.0),
    (8, 3.0),
    (16, 4.0),
    (32, 6.0),
    (64, 14.0),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub model: PricingModel,
}

/// Named pricing models, one per line:
///
/// ```text
/// NAME per_task_per_shot TASK SHOT CCY
/// NAME time_based PER_SECOND GRANULARITY CCY
/// NAME per_gate TASK P1Q P2Q PMEAS PRESET CCY
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

pub const BUILTIN_CATALOG: &str = "\
# per-task + per-shot (AWS Braket)
ionq_forte per_task_per_shot 0.30 0.08 USD
ionq_aria per_task_per_shot 0.30 0.03 USD
iqm_garnet per_task_per_shot 0.30 0.00145 USD
quera_aquila per_task_per_shot 0.30 0.01 USD
rigetti_ankaa3 per_task_per_shot 0.30 0.0009 USD
# time-based
azure_pasqal_fresnel time_based 0.08333 1 USD
azure_rigetti_ankaa3 time_based 1.30 1 USD
ibm time_based 1.60 1 USD
iqm time_based 0.30 1 USD
target time_based 0.75 1 credits
# per-gate, scaled so one 1000-shot Bell task costs the same 1.5 credits
target_per_gate per_gate 0.30 0.30 0.60 0.15 0.15 credits
";

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    pub fn get(&self, name: &str) -> Option<&PricingModel> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.model)
    }

    pub fn parse(text: &str) -> Result<Catalog, BillingError> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| BillingError::Catalog {
                line: i + 1,
                message,
            };
            let f: Vec<&str> = line.split_whitespace().collect();
            let want = match f.get(1).copied() {
                Some("per_task_per_shot") | Some("time_based") => 5,
                Some("per_gate") => 8,
                Some(other) => return Err(err(format!("unknown model kind '{other}'"))),
                None => return Err(err("missing model kind".into())),
            };
            if f.len() != want {
                return Err(err(format!("expected {want} fields, found {}", f.len())));
            }
            let ccy: Currency = f[want - 1]
                .parse()
                .map_err(|e: BillingError| err(e.to_string()))?;
            let money = |s: &str| Money::parse(s, ccy).map_err(|e| err(e.to_string()));
            let model = match f[1] {
                "per_task_per_shot" => PricingModel::PerTaskPerShot {
                    per_task: money(f[2])?,
                    per_shot: money(f[3])?,
                },
                "time_based" => PricingModel::TimeBased {
                    per_second: money(f[2])?,
                    granularity_seconds: f[3]
                        .parse()
                        .map_err(|_| err(format!("bad granularity '{}'", f[3])))?,
                },
                _ => PricingModel::PerGate {
                    per_task: money(f[2])?,
                    per_1q: money(f[3])?,
                    per_2q: money(f[4])?,
                    per_meas: money(f[5])?,
                    per_reset: money(f[6])?,
                },
            };
            model.validate().map_err(|e| err(e.to_string()))?;
            if entries.iter().any(|e| e.name == f[0]) {
                return Err(err(format!("duplicate model name '{}'", f[0])));
            }
            entries.push(CatalogEntry {
                name: f[0].to_string(),
                model,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let m = |v: &Money| v.format_trimmed(2);
            let line = match &e.model {
                PricingModel::PerTaskPerShot { per_task, per_shot } => {
                    format!(
                        "{} per_task_per_shot {} {} {}",
                        e.name,
                        m(per_task),
                        m(per_shot),
                        e.model.currency()
                    )
                }
                PricingModel::TimeBased {
                    per_second,
                    granularity_seconds,
                } => format!(
                    "{} time_based {} {} {}",
                    e.name,
                    m(per_second),
                    granularity_seconds,
                    e.model.currency()
                ),
                PricingModel::PerGate {
                    per_task,
                    per_1q,
                    per_2q,
                    per_meas,
                    per_reset,
                } => format!(
                    "{} per_gate {} {} {} {} {} {}",
                    e.name,
                    m(per_task),
                    m(per_1q),
                    m(per_2q),
                    m(per_meas),
                    m(per_reset),
                    e.model.currency()
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// One submitted task as reported by the provider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiptRow {
    pub label: String,
    pub parts: u64,
    pub resets: u64,
    pub shots: u64,
    pub wall_time_s: u64,
}

/// Column names of [`ReportRow::fields`].
pub const REPORT_COLUMNS: [&str; 13] = [
    "label",
    "parts",
    "resets",
    "shots",
    "eff_shots",
    "time_s",
    "cost",
    "cost_per_shot",
    "baseline_cost",
    "free_computation",
    "excess_pct",
    "ratio_pct",
    "free_fraction_pct",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub receipt: ReceiptRow,
    pub savings: SavingsReport,
}

impl ReportRow {
    /// Cells in [`REPORT_COLUMNS`] order. Money keeps at least 2 decimals,
    /// per-shot cost 6, percentages 2.
    pub fn fields(&self) -> Vec<String> {
        let r = &self.receipt;
        let s = &self.savings;
        vec![
            r.label.clone(),
            r.parts.to_string(),
            r.resets.to_string(),
            r.shots.to_string(),
            s.effective_shots.to_string(),
            r.wall_time_s.to_string(),
            s.cost.format_trimmed(2),
            s.cost_per_shot_display(),
            s.baseline_cost.format_trimmed(2),
            s.free_computation.format_trimmed(2),
            SavingsReport::pct_display(&s.excess_pct),
            SavingsReport::pct_display(&s.ratio_pct),
            SavingsReport::pct_display(&s.free_fraction_pct),
        ]
    }
}

/// Prices each receipt and compares it with `baseline_per_shot` for every
/// effective shot. Receipts carry no gate census, so per-gate models only
/// charge their task fee here.
pub fn report(
    rows: &[ReceiptRow],
    model: &PricingModel,
    baseline_per_shot: Money,
) -> Result<Vec<ReportRow>, BillingError> {
    rows.iter()
        .map(|r| {
            let receipt = TaskReceipt::new(r.shots, r.wall_time_s, GateCensus::default(), r.parts);
            let cost = price(model, &receipt)?;
            if cost.currency() != baseline_per_shot.currency() {
                return Err(BillingError::CurrencyMismatch(
                    cost.currency(),
                    baseline_per_shot.currency(),
                ));
            }
            Ok(ReportRow {
                receipt: r.clone(),
                savings: savings(cost, r.shots, r.parts, baseline_per_shot)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn credits(s: &str) -> Money {
        Money::parse(s, Currency::Credits).unwrap()
    }

    fn usd(s: &str) -> Money {
        Money::parse(s, Currency::Usd).unwrap()
    }

    fn target() -> PricingModel {
        PricingModel::TimeBased {
            per_second: credits("0.75"),
            granularity_seconds: 1,
        }
    }

    fn receipt(shots: u64, secs: u64) -> TaskReceipt {
        TaskReceipt::new(shots, secs, GateCensus::default(), 1)
    }

    #[test]
    fn money_parsing() {
        assert_eq!(usd("0.30").micros(), 300_000);
        assert_eq!(usd("0.00145").micros(), 1_450);
        assert_eq!(usd("12").micros(), 12_000_000);
        assert_eq!(usd(".5").micros(), 500_000);
        assert_eq!(usd("-1.25").micros(), -1_250_000);
        for bad in ["", ".", "1.2345678", "1e3", "abc", "1.2.3", "--1"] {
            assert!(Money::parse(bad, Currency::Usd).is_err(), "{bad}");
        }
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        let r = |n: i128, d: i128| format_exact(&Exact::new(n, d), 6);
        assert_eq!(r(13125, 10_000_000), "0.001313");
        assert_eq!(r(140625, 1_000_000_000), "0.000141");
        assert_eq!(r(-5, 10_000_000), "-0.000001");
        assert_eq!(r(-4, 10_000_000), "0.000000");
        assert_eq!(format_exact(&Exact::new(2, 3), 0), "1");
    }

    #[test]
    fn per_task_per_shot_ionq_aria() {
        let m = PricingModel::PerTaskPerShot {
            per_task: usd("0.30"),
            per_shot: usd("0.03"),
        };
        assert_eq!(price(&m, &receipt(1000, 0)).unwrap(), usd("30.30"));
    }

    #[test]
    fn time_based_target_machine() {
        assert_eq!(price(&target(), &receipt(1000, 2)).unwrap(), credits("1.5"));
        assert_eq!(
            price(&target(), &receipt(1000, 14)).unwrap(),
            credits("10.5")
        );
    }

    #[test]
    fn time_granularity_rounds_up() {
        let m = PricingModel::TimeBased {
            per_second: credits("1"),
            granularity_seconds: 5,
        };
        assert_eq!(price(&m, &receipt(1, 11)).unwrap(), credits("15"));
        assert_eq!(price(&m, &receipt(1, 10)).unwrap(), credits("10"));
        assert_eq!(price(&m, &receipt(1, 0)).unwrap(), credits("0"));
    }

    #[test]
    fn per_gate_sums_census() {
        let m = PricingModel::PerGate {
            per_task: credits("0.3"),
            per_1q: credits("0.01"),
            per_2q: credits("0.02"),
            per_meas: credits("0.005"),
            per_reset: credits("0.015"),
        };
        let census = GateCensus {
            n_1q: 1,
            n_2q: 1,
            n_meas: 2,
            n_reset: 3,
            depth: 2,
        };
        let r = TaskReceipt::new(1000, 0, census, 1);
        assert_eq!(price(&m, &r).unwrap(), credits("0.385"));
    }

    #[test]
    fn currency_checks() {
        let mixed = PricingModel::PerTaskPerShot {
            per_task: usd("0.3"),
            per_shot: credits("0.1"),
        };
        assert!(matches!(
            price(&mixed, &receipt(1, 0)),
            Err(BillingError::CurrencyMismatch(..))
        ));
        assert!(matches!(
            price_in(&target(), &receipt(1, 2), Currency::Usd),
            Err(BillingError::CurrencyMismatch(..))
        ));
        assert!(usd("1").checked_add(credits("1")).is_err());
    }

    #[test]
    fn invalid_models_and_receipts() {
        let neg = PricingModel::TimeBased {
            per_second: credits("-1"),
            granularity_seconds: 1,
        };
        assert!(matches!(
            neg.validate(),
            Err(BillingError::NegativePrice(_))
        ));
        let zero = PricingModel::TimeBased {
            per_second: credits("1"),
            granularity_seconds: 0,
        };
        assert_eq!(zero.validate(), Err(BillingError::ZeroGranularity));
        assert_eq!(
            price(&target(), &receipt(0, 2)),
            Err(BillingError::EmptyReceipt)
        );
    }

    #[test]
    fn avoided_cost_examples() {
        assert_eq!(
            avoided_cost(32, 1000, credits("0.0015")).unwrap(),
            credits("46.5")
        );
        assert_eq!(
            avoided_cost(1, 1000, credits("0.0015")).unwrap(),
            credits("0")
        );
        assert_eq!(avoided_cost(2, 1, credits("1")).unwrap(), credits("1"));
        assert!(avoided_cost(0, 1, credits("1")).is_err());
    }

    #[test]
    fn savings_bell_32() {
        let s = savings(credits("4.5"), 1000, 32, BASELINE_PER_SHOT).unwrap();
        assert_eq!(s.cost_per_shot_display(), "0.000141");
        assert_eq!(SavingsReport::pct_display(&s.excess_pct), "966.67");
        assert_eq!(s.effective_shots, 32_000);
    }

    #[test]
    fn savings_mix_16_and_32() {
        let s = savings(credits("3.00"), 1000, 16, BASELINE_PER_SHOT).unwrap();
        assert_eq!(s.cost_per_shot_display(), "0.000188");
        assert_eq!(SavingsReport::pct_display(&s.ratio_pct), "800.00");
        let s = savings(credits("5.25"), 1000, 32, BASELINE_PER_SHOT).unwrap();
        assert_eq!(s.baseline_cost, credits("48"));
        assert_eq!(s.free_computation, credits("42.75"));
        assert_eq!(SavingsReport::pct_display(&s.free_fraction_pct), "87.72");
    }

    #[test]
    fn excess_is_ratio_minus_hundred() {
        for (cost, parts) in [("1.5", 1), ("2.25", 4), ("10.5", 64), ("0.01", 3)] {
            let s = savings(credits(cost), 1000, parts, BASELINE_PER_SHOT).unwrap();
            assert_eq!(
                s.excess_pct.unwrap(),
                s.ratio_pct.unwrap() - Exact::from_integer(100)
            );
        }
    }

    #[test]
    fn zero_cost_savings_are_undefined() {
        let s = savings(credits("0"), 1000, 2, BASELINE_PER_SHOT).unwrap();
        assert_eq!(s.ratio_pct, None);
        assert_eq!(SavingsReport::pct_display(&s.excess_pct), "undefined");
        assert!(s.free_fraction_pct.is_some());
        // free computation is zero when the attack costs exactly the baseline
        let s = savings(credits("3"), 1000, 2, BASELINE_PER_SHOT).unwrap();
        assert_eq!(s.free_fraction_pct, None);
    }

    #[test]
    fn time_model_interpolates() {
        let tm = fit_time_model(&BELL_TIME_CALIBRATION).unwrap();
        assert_eq!(tm.estimate(32.0), 6.0);
        assert_eq!(tm.estimate(1.0), 2.0);
        assert_eq!(tm.estimate(48.0), 10.0);
        assert_eq!(tm.estimate(0.0), 2.0);
        assert_eq!(tm.estimate(500.0), 14.0);
        for &(p, t) in &BELL_TIME_CALIBRATION {
            assert_eq!(tm.estimate(p as f64), t);
        }
        assert_eq!(tm.estimate_seconds(12), 4);
    }

    #[test]
    fn time_model_rejects_bad_calibration() {
        assert_eq!(fit_time_model(&[(1, 2.0)]), Err(BillingError::TooFewPoints));
        assert_eq!(
            fit_time_model(&[(2, 2.0), (1, 3.0)]),
            Err(BillingError::UnsortedCalibration)
        );
        assert_eq!(
            fit_time_model(&[(1, 2.0), (1, 3.0)]),
            Err(BillingError::UnsortedCalibration)
        );
    }

    #[test]
    fn builtin_catalog() {
        let cat = Catalog::builtin();
        assert_eq!(cat.entries.len(), 11);
        assert_eq!(
            cat.get("iqm_garnet"),
            Some(&PricingModel::PerTaskPerShot {
                per_task: usd("0.3"),
                per_shot: usd("0.00145"),
            })
        );
        assert_eq!(cat.get("target"), Some(&target()));
        assert_eq!(Catalog::parse(&cat.to_text()).unwrap(), cat);
    }

    #[test]
    fn catalog_errors() {
        for bad in [
            "x per_shot 1 2 USD",
            "x per_task_per_shot 1 USD",
            "x time_based 1 0 USD",
            "x time_based 1 1 EUR",
            "x per_gate 1 1 1 1 -1 USD",
            "x time_based 1 1 USD\nx time_based 2 1 USD",
        ] {
            assert!(Catalog::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn report_single_part_row() {
        let target = Catalog::builtin().get("target").unwrap().clone();
        let row = ReceiptRow {
            label: "bell".into(),
            parts: 1,
            resets: 4,
            shots: 1000,
            wall_time_s: 2,
        };
        let out = report(&[row], &target, BASELINE_PER_SHOT).unwrap();
        assert_eq!(
            out[0].fields(),
            [
                "bell",
                "1",
                "4",
                "1000",
                "1000",
                "2",
                "1.50",
                "0.001500",
                "1.50",
                "0.00",
                "0.00",
                "100.00",
                "undefined"
            ]
        );
        let usd = Catalog::builtin().get("ibm").unwrap().clone();
        assert!(report(
            &out.iter().map(|r| r.receipt.clone()).collect::<Vec<_>>(),
            &usd,
            BASELINE_PER_SHOT
        )
        .is_err());
    }
}
