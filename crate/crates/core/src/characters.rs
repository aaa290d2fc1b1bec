//! Partition counting, reduced L₀ characters, the Dedekind eta function and
//! the small-β probe of `p(e^{-β}) exp(-(β₀/β)^k)`.

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hp::HpContext;

/// Below this β the partition function is evaluated through the modular
/// transform.
pub const MODULAR_SWITCH_BETA: f64 = 0.5;

fn decimal_strings<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// `p(0), …, p(max)` by Euler's pentagonal-number recurrence.
pub fn partition_series(max: usize) -> Vec<BigUint> {
    let mut p: Vec<BigInt> = vec![BigInt::zero(); max + 1];
    p[0] = BigInt::from(1);
    for i in 1..=max {
        let mut sum = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[i - g1].clone();
            if g2 <= i {
                term += &p[i - g2];
            }
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        p[i] = sum;
    }
    p.into_iter()
        .map(|v| v.to_biguint().expect("partition numbers are non-negative"))
        .collect()
}

/// `d_0, …, d_{N_max}` of the reduced character `∏_{m ≥ n+1} (1 - x^m)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSeries {
    pub degree: u32,
    pub cutoff: usize,
    #[serde(serialize_with = "decimal_strings")]
    pub coefficients: Vec<BigUint>,
}

/// Counts partitions of each `N ≤ cutoff` into parts `≥ n + 1`.
pub fn reduced_character(degree: u32, cutoff: usize) -> CharacterSeries {
    let mut d = vec![BigUint::zero(); cutoff + 1];
    d[0] = BigUint::from(1u32);
    for part in (degree as usize + 1)..=cutoff {
        for total in part..=cutoff {
            let prev = d[total - part].clone();
            d[total] += prev;
        }
    }
    CharacterSeries {
        degree,
        cutoff,
        coefficients: d,
    }
}

/// `Σ d_N x^N · ∏_{m ≥ n+1} (1 - x^m) ≡ 1 mod x^{cutoff+1}`, in exact
/// integers.
pub fn generating_function_identity(series: &CharacterSeries) -> bool {
    let mut acc: Vec<BigInt> = series
        .coefficients
        .iter()
        .map(|c| BigInt::from(c.clone()))
        .collect();
    let cutoff = series.cutoff;
    for part in (series.degree as usize + 1)..=cutoff {
        for total in (part..=cutoff).rev() {
            let lower = acc[total - part].clone();
            acc[total] -= lower;
        }
    }
    acc.first().is_some_and(|c| *c == BigInt::from(1)) && acc.iter().skip(1).all(Zero::is_zero)
}

/// `∏_{m=1}^{M} (1 - e^{-βm})` with `M` chosen so the dropped tail changes
/// the product by a relative amount below `10^{-(digits+5)}`.
struct TruncatedProduct {
    value: BigFloat,
    terms: usize,
    /// Relative size of the dropped tail, `e^{-β(M+1)} / (1 - e^{-β})`.
    tail: f64,
}

fn euler_product(ctx: &mut HpContext, beta: &BigFloat) -> Result<TruncatedProduct> {
    let beta_f = ctx.to_f64(beta);
    let target = (f64::from(ctx.digits()) + 5.0) * std::f64::consts::LN_10;
    // e^{-β(M+1)} / (1 - e^{-β}) ≤ 10^{-(digits+5)}
    let denom_log = (-(-beta_f).exp_m1()).ln();
    let terms = (((target - denom_log) / beta_f).ceil().max(1.0)) as usize;
    let tail = (-(beta_f) * (terms as f64 + 1.0) - denom_log).exp();

    let neg_beta = beta.neg();
    let x = ctx.exp(&neg_beta);
    let one = ctx.from_u64(1);
    let mut power = x.clone();
    let mut product = one.clone();
    for _ in 0..terms {
        product = ctx.mul(&product, &ctx.sub(&one, &power));
        power = ctx.mul(&power, &x);
    }
    Ok(TruncatedProduct {
        value: ctx.check(product)?,
        terms,
        tail,
    })
}

/// `η(iβ/2π)` at the working precision of `ctx`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaValue {
    pub beta: f64,
    pub digits: u32,
    /// Decimal value with `digits` significant digits.
    pub value: String,
    pub approx: f64,
    /// Number of product factors kept.
    pub terms: usize,
    /// Absolute bound on truncation plus accumulated rounding error.
    pub error_bound: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidBeta(beta))
    }
}

/// `η(iβ/2π) = e^{-β/24} ∏_{m≥1} (1 - e^{-βm})` for a high-precision β.
fn eta_hp(ctx: &mut HpContext, beta: &BigFloat) -> Result<(BigFloat, usize, f64)> {
    let product = euler_product(ctx, beta)?;
    let exponent = ctx.div(&beta.neg(), &ctx.from_u64(24));
    let prefactor = ctx.exp(&exponent);
    let value = ctx.check(ctx.mul(&prefactor, &product.value))?;
    let rounding = (3.0 * product.terms as f64 + 10.0) * ctx.epsilon();
    let v = ctx.to_f64(&value);
    Ok((value, product.terms, v * (product.tail + rounding)))
}

pub fn eta(beta: f64, digits: u32) -> Result<EtaValue> {
    check_beta(beta)?;
    let mut ctx = HpContext::new(digits)?;
    let b = ctx.from_f64(beta);
    let (value, terms, error_bound) = eta_hp(&mut ctx, &b)?;
    Ok(EtaValue {
        beta,
        digits,
        value: ctx.to_decimal(&value),
        approx: ctx.to_f64(&value),
        terms,
        error_bound,
    })
}

/// Both sides of `√(β/2π) η(iβ/2π) = η(i2π/β)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularCheck {
    pub beta: f64,
    pub digits: u32,
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
    pub error_bound: f64,
}

fn modular_check_hp(ctx: &mut HpContext, beta: &BigFloat) -> Result<ModularCheck> {
    let pi = ctx.pi();
    let two_pi = ctx.mul(&ctx.from_u64(2), &pi);
    let dual = ctx.div(&ctx.mul(&two_pi, &two_pi), beta);
    let (eta_direct, _, err_direct) = eta_hp(ctx, beta)?;
    let (eta_dual, _, err_dual) = eta_hp(ctx, &dual)?;
    let scale = ctx.sqrt(&ctx.div(beta, &two_pi));
    let lhs = ctx.mul(&scale, &eta_direct);
    let diff = ctx.sub(&lhs, &eta_dual).abs();
    let scale_f = ctx.to_f64(&scale);
    Ok(ModularCheck {
        beta: ctx.to_f64(beta),
        digits: ctx.digits(),
        lhs: ctx.to_decimal(&lhs),
        rhs: ctx.to_decimal(&eta_dual),
        residual: ctx.to_f64(&diff),
        error_bound: scale_f * err_direct + err_dual,
    })
}

/// Residual `|√(β/2π) η(iβ/2π) - η(i2π/β)|`.
pub fn modular_check(beta: f64, digits: u32) -> Result<ModularCheck> {
    check_beta(beta)?;
    let mut ctx = HpContext::new(digits)?;
    let b = ctx.from_f64(beta);
    modular_check_hp(&mut ctx, &b)
}

/// Modular check at the self-dual point `β = 2π`, with β carried at full
/// working precision.
pub fn modular_check_self_dual(digits: u32) -> Result<ModularCheck> {
    let mut ctx = HpContext::new(digits)?;
    let pi = ctx.pi();
    let two_pi = ctx.mul(&ctx.from_u64(2), &pi);
    modular_check_hp(&mut ctx, &two_pi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionRoute {
    Direct,
    Modular,
}

/// `ln p(e^{-β})`, i.e. `-ln ∏(1 - e^{-βm})`.
///
/// For `β < 0.5` the slowly converging product is replaced through the
/// modular transform by
/// `-β/24 + ½ ln(β/2π) + β'/24 - ln ∏(1 - e^{-β'm})`, `β' = 4π²/β`.
pub fn log_partition_function(
    ctx: &mut HpContext,
    beta: f64,
) -> Result<(BigFloat, PartitionRoute)> {
    check_beta(beta)?;
    let b = ctx.from_f64(beta);
    if beta >= MODULAR_SWITCH_BETA {
        let product = euler_product(ctx, &b)?;
        let log = ctx.ln(&product.value).neg();
        return Ok((ctx.check(log)?, PartitionRoute::Direct));
    }
    let pi = ctx.pi();
    let two_pi = ctx.mul(&ctx.from_u64(2), &pi);
    let dual = ctx.div(&ctx.mul(&two_pi, &two_pi), &b);
    let product = euler_product(ctx, &dual)?;
    let twenty_four = ctx.from_u64(24);
    let half = ctx.div(&ctx.from_u64(1), &ctx.from_u64(2));
    let mut log = ctx.div(&ctx.sub(&dual, &b), &twenty_four);
    let ratio = ctx.div(&b, &two_pi);
    let ratio = ctx.ln(&ratio);
    log = ctx.add(&log, &ctx.mul(&half, &ratio));
    let ln_product = ctx.ln(&product.value);
    log = ctx.sub(&log, &ln_product);
    Ok((ctx.check(log)?, PartitionRoute::Modular))
}

/// Strictly decreasing positive β values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BetaGrid(Vec<f64>);

impl BetaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidGrid(
                "at least three points are required".into(),
            ));
        }
        if values.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidGrid(
                "β values must be positive and finite".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidGrid(
                "β values must be strictly decreasing".into(),
            ));
        }
        Ok(Self(values))
    }

    /// `count` points from `start` down to `end`, equally spaced in `ln β`.
    pub fn geometric(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 3 || !(start > end && end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "need start > end > 0 and count ≥ 3, got {start}:{end}:{count}"
            )));
        }
        let ratio = (end / start).ln() / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count)
            .map(|i| start * (ratio * i as f64).exp())
            .collect();
        values[count - 1] = end;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl std::str::FromStr for BetaGrid {
    type Err = Error;

    /// `start:end:count` (geometric) or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("cannot parse grid {s:?}"));
        if let [start, end, count] = s.split(':').collect::<Vec<_>>()[..] {
            return Self::geometric(
                start.trim().parse().map_err(|_| bad())?,
                end.trim().parse().map_err(|_| bad())?,
                count.trim().parse().map_err(|_| bad())?,
            );
        }
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    /// `f` strictly decreases along the tail of the grid.
    Decreasing,
    /// `f` strictly increases along the tail of the grid.
    Increasing,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub beta: f64,
    pub route: PartitionRoute,
    pub log_p: f64,
    /// `p(e^{-β})` in scientific notation.
    pub p: String,
    pub log_f: f64,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuclearityReport {
    pub beta0: f64,
    pub exponent: u32,
    pub digits: u32,
    pub rows: Vec<ProbeRow>,
    /// Number of trailing grid points the verdict is based on.
    pub tail_points: usize,
    pub tail_verdict: TailVerdict,
    pub tends_to_zero: bool,
    pub diverges: bool,
    /// Slope of `ln p` against `1/β` over the last two grid points.
    pub empirical_growth: f64,
    /// `π²/6`, the leading growth constant of `ln p(e^{-β}) · β`.
    pub leading_threshold: f64,
    /// `π²/6 - 1`, the nominal threshold for exponent 1.
    pub nominal_threshold: f64,
    /// Set when exponent is 1 and `π²/6 - 1 < β₀ ≤ π²/6`: the nominal
    /// threshold is met but the leading asymptotics predict growth.
    pub nominal_threshold_conflict: bool,
    pub note: String,
}

fn scientific(log: f64) -> String {
    if !log.is_finite() {
        return if log > 0.0 { "inf".into() } else { "0".into() };
    }
    let log10 = log / std::f64::consts::LN_10;
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    if mantissa >= 9.9999995 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    format!("{mantissa:.6}e{exponent}")
}

/// Samples `f(β) = p(e^{-β}) exp(-(β₀/β)^k)` on a decreasing grid and
/// reports the trend on its tail (the last third, at least three points).
pub fn nuclearity_probe(
    beta0: f64,
    exponent: u32,
    grid: &BetaGrid,
    digits: u32,
) -> Result<NuclearityReport> {
    if !(beta0.is_finite() && beta0 > 0.0) {
        return Err(Error::InvalidBeta(beta0));
    }
    if exponent == 0 {
        return Err(Error::InvalidGrid("exponent must be positive".into()));
    }
    let mut ctx = HpContext::new(digits)?;
    let mut rows = Vec::with_capacity(grid.values().len());
    for &beta in grid.values() {
        let (log_p_hp, route) = log_partition_function(&mut ctx, beta)?;
        let damping = ctx.from_f64(beta0 / beta);
        let damping = damping.powi(
            exponent as usize,
            ctx.bits(),
            astro_float::RoundingMode::ToEven,
        );
        let log_f_hp = ctx.sub(&log_p_hp, &damping);
        let log_p = ctx.to_f64(&log_p_hp);
        let log_f = ctx.to_f64(&log_f_hp);
        rows.push(ProbeRow {
            beta,
            route,
            log_p,
            p: scientific(log_p),
            log_f,
            f: scientific(log_f),
        });
    }

    let n = rows.len();
    let tail_points = n.div_ceil(3).max(3).min(n);
    let tail = &rows[n - tail_points..];
    let steps: Vec<f64> = tail.windows(2).map(|w| w[1].log_f - w[0].log_f).collect();
    let tail_verdict = if steps.iter().all(|&s| s < 0.0) {
        TailVerdict::Decreasing
    } else if steps.iter().all(|&s| s > 0.0) {
        TailVerdict::Increasing
    } else {
        TailVerdict::Mixed
    };

    let (a, b) = (&rows[n - 2], &rows[n - 1]);
    let empirical_growth = (b.log_p - a.log_p) / (1.0 / b.beta - 1.0 / a.beta);
    let leading = std::f64::consts::PI.powi(2) / 6.0;
    let nominal = leading - 1.0;
    let conflict = exponent == 1 && beta0 > nominal && beta0 <= leading;
    let note = if exponent != 1 {
        format!("exponent {exponent} > 1 dominates the 1/β growth of ln p for every β₀ > 0")
    } else if conflict {
        format!(
            "open question: β₀ = {beta0} exceeds the nominal threshold π²/6 - 1 ≈ {nominal:.4}, \
             but ln p(e^(-β)) ~ π²/(6β) requires β₀ > π²/6 ≈ {leading:.4} for f → 0"
        )
    } else {
        format!(
            "leading asymptotics ln p(e^(-β)) ~ π²/(6β): f → 0 iff β₀ > π²/6 ≈ {leading:.4}; \
             nominal threshold π²/6 - 1 ≈ {nominal:.4} is an open question"
        )
    };

    Ok(NuclearityReport {
        beta0,
        exponent,
        digits,
        tail_points,
        tends_to_zero: tail_verdict == TailVerdict::Decreasing
            && tail.last().map(|r| r.log_f) < tail.first().map(|r| r.log_f),
        diverges: tail_verdict == TailVerdict::Increasing,
        tail_verdict,
        rows,
        empirical_growth,
        leading_threshold: leading,
        nominal_threshold: nominal,
        nominal_threshold_conflict: conflict,
        note,
    })
}

/// `Σ_{N ≤ cutoff} p(N) e^{-βN}` together with a bound on the dropped tail.
///
/// Uses `p(N) ≤ e^{π√(2N/3)}`, so the tail beyond the cutoff is bounded by a
/// geometric series once `π/√(6N) < β`.
pub fn partition_sum(beta: f64, cutoff: usize) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let p = partition_series(cutoff);
    let sum: f64 = p
        .iter()
        .enumerate()
        .map(|(n, c)| c.to_f64().unwrap_or(f64::INFINITY) * (-beta * n as f64).exp())
        .sum();
    let n0 = (cutoff + 1) as f64;
    let rate = std::f64::consts::PI / (6.0 * n0).sqrt() - beta;
    let tail = if rate < 0.0 {
        let first = (std::f64::consts::PI * (2.0 * n0 / 3.0).sqrt() - beta * n0).exp();
        first / (1.0 - rate.exp())
    } else {
        f64::INFINITY
    };
    Ok((sum, tail))
}
