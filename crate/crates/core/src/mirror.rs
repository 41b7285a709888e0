//! Per-model series: the period `g₀`, the logarithmic partner `h`, the local
//! mirror map `Q = z·exp(f)`, the mirror map `q = z·exp(h/g₀)`, their
//! reversions, the Picard-Fuchs operators annihilating them, and the numeric
//! Mahler measure of the family.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, from_bigint, int, Rational};
use crate::series::{LogSeries, Series};
use crate::weights::{KVector, Model};

fn ratio(p: u64, q: u64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `α_m = (km)! / Π_i (w_i m)!`
pub fn alpha(m: u64, model: &Model) -> Rational {
    let denom = model
        .weights()
        .iter()
        .fold(BigInt::one(), |acc, &w| acc * factorial(w * m));
    Rational::new(factorial(model.degree() * m), denom)
}

/// `α_0 ..= α_order`, built from the term ratio `α_m/α_{m−1}` instead of
/// fresh factorials.
pub fn alpha_sequence(model: &Model, order: usize) -> Vec<BigInt> {
    let k = model.degree();
    let mut out = Vec::with_capacity(order + 1);
    let mut current = BigInt::one();
    out.push(current.clone());
    for m in 1..=order as u64 {
        let num = ((k * (m - 1) + 1)..=(k * m)).fold(BigInt::one(), |acc, j| acc * j);
        let den = model.weights().iter().fold(BigInt::one(), |acc, &w| {
            ((w * (m - 1) + 1)..=(w * m)).fold(acc, |acc, j| acc * j)
        });
        current = current * num / den;
        out.push(current.clone());
    }
    out
}

/// Coefficient of `x_1^m ⋯ x_{n−1}^m` in `(x_1^{k_1} + … + x_{n−1}^{k_{n−1}} + 1)^m`:
/// `m! / Π_i (m/k_i)!` when every `k_i` divides `m`, else zero.
pub fn multinomial_diag(m: u64, kv: &KVector) -> Rational {
    if kv.parts().iter().any(|&k| m % k != 0) {
        return Rational::zero();
    }
    let denom = kv
        .parts()
        .iter()
        .fold(BigInt::one(), |acc, &k| acc * factorial(m / k));
    Rational::new(factorial(m), denom)
}

/// `g₀ = θ log Q = Σ_{m≥0} α_m z^m`
pub fn g0_series(model: &Model, order: usize) -> Series {
    Series::new(alpha_sequence(model, order).into_iter().map(from_bigint).collect())
}

/// `f = Σ_{m≥1} α_m z^m / m`
pub fn f_series(model: &Model, order: usize) -> Series {
    let alphas = alpha_sequence(model, order);
    Series::from_fn(order, |m| {
        if m == 0 {
            Rational::zero()
        } else {
            Rational::new(alphas[m].clone(), BigInt::from(m))
        }
    })
}

/// The local mirror map `Q = z·exp(f)` modulo `z^(order+1)`.
pub fn local_map_series(model: &Model, order: usize) -> Series {
    let unit = f_series(model, order.saturating_sub(1))
        .exp()
        .expect("f has zero constant term");
    unit.mul_z().truncate(order)
}

/// Harmonic bracket `Σ_{a<k} 1/(j − a/k) − Σ_i Σ_{a<w_i} 1/(j − a/w_i)`.
fn harmonic_bracket(j: u64, model: &Model) -> Rational {
    let k = model.degree();
    let mut acc: Rational = (0..k).map(|a| ratio(k, j * k - a)).sum();
    for &w in model.weights() {
        acc -= (0..w).map(|a| ratio(w, j * w - a)).sum::<Rational>();
    }
    acc
}

/// `γ_m = α_m · Σ_{j=1}^m bracket(j)`, the coefficients of `h`.
pub fn gamma(m: u64, model: &Model) -> Rational {
    let partial: Rational = (1..=m).map(|j| harmonic_bracket(j, model)).sum();
    alpha(m, model) * partial
}

/// `h = Σ_{m≥1} γ_m z^m`, the regular part of `g₁ = g₀ log z + h`.
pub fn h_series(model: &Model, order: usize) -> Series {
    let alphas = alpha_sequence(model, order);
    let mut partial = Rational::zero();
    let mut coeffs = vec![Rational::zero()];
    for m in 1..=order {
        partial += harmonic_bracket(m as u64, model);
        coeffs.push(from_bigint(alphas[m].clone()) * &partial);
    }
    Series::new(coeffs)
}

fn mirror_map_unit(g0: &Series, h: &Series) -> Result<Series> {
    h.div(g0)?.exp()
}

/// The mirror map `q = z·exp(h/g₀)` modulo `z^(order+1)`.
pub fn mirror_map_series(model: &Model, order: usize) -> Series {
    let n = order.saturating_sub(1);
    mirror_map_unit(&g0_series(model, n), &h_series(model, n))
        .expect("g0 is a unit and h/g0 has zero constant term")
        .mul_z()
        .truncate(order)
}

/// Everything the inversion stage needs for one model at truncation order `N`.
///
/// `g0`, `h` and `f` have order `N`. The maps that start at `z` (`Q`, `q`
/// and their reversions) are exact through `z^(N+1)` because they are
/// `z` times a unit series of order `N`.
#[derive(Clone, Debug, Serialize)]
pub struct MirrorData {
    pub model: Model,
    pub order: usize,
    pub g0: Series,
    pub h: Series,
    pub f: Series,
    #[serde(rename = "Q")]
    pub local_map: Series,
    pub q: Series,
    /// `z` as a series in `q`.
    #[serde(rename = "zq")]
    pub z_of_q: Series,
    /// `z` as a series in `Q`.
    #[serde(rename = "zQ")]
    pub z_of_local: Series,
}

impl MirrorData {
    pub fn new(model: &Model, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        let g0 = g0_series(model, order);
        let h = h_series(model, order);
        let f = f_series(model, order);
        let local_map = f.exp()?.mul_z();
        let q = mirror_map_unit(&g0, &h)?.mul_z();
        let z_of_q = q.revert()?;
        let z_of_local = local_map.revert()?;
        Ok(Self {
            model: model.clone(),
            order,
            g0,
            h,
            f,
            local_map,
            q,
            z_of_q,
            z_of_local,
        })
    }

    /// `h/g₀ = log(q/z)`, the exponent of the mirror map.
    pub fn mirror_exponent(&self) -> Result<Series> {
        self.h.div(&self.g0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorForm {
    /// Common factors cancelled; annihilates `g₀` and `g₁`.
    Reduced,
    /// `Π_i Π_{j<w_i} (θ − j/w_i) − C z Π_{j<k} (θ + j/k)`; annihilates `1` and `log z + f`.
    Local,
    /// `Π_i Π_{j<w_i} (θ − j/w_i) − C z Π_{j<k} (θ + 1 − j/k)` before cancellation.
    Unreduced,
}

/// `Π_j (θ − b_j) − C·z·Π_j (θ + a_j)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PFOperator {
    /// `C = k^k / Π_i w_i^{w_i}`
    #[serde(with = "crate::rational::as_string")]
    pub constant: Rational,
    #[serde(with = "crate::rational::vec_as_string")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::rational::vec_as_string")]
    pub b: Vec<Rational>,
    pub form: OperatorForm,
}

pub fn pf_constant(model: &Model) -> Rational {
    let k = model.degree();
    let num = BigInt::from(k).pow(k as u32);
    let den = model
        .weights()
        .iter()
        .fold(BigInt::one(), |acc, &w| acc * BigInt::from(w).pow(w as u32));
    Rational::new(num, den)
}

fn multiset<I: IntoIterator<Item = Rational>>(items: I) -> BTreeMap<Rational, usize> {
    let mut out = BTreeMap::new();
    for r in items {
        *out.entry(r).or_insert(0) += 1;
    }
    out
}

fn expand(set: BTreeMap<Rational, usize>) -> Vec<Rational> {
    set.into_iter()
        .flat_map(|(r, count)| std::iter::repeat_n(r, count))
        .collect()
}

/// Derives the operator from the weights.
///
/// The reduced form cancels `{j/k : j < k}` against `⋃_i {j/w_i : j < w_i}`
/// as multisets; survivors `r` of the first set give `a = 1 − r`, survivors of
/// the second give `b = r`.
pub fn pf_operator(model: &Model, form: OperatorForm) -> PFOperator {
    let k = model.degree();
    let top: Vec<Rational> = (0..k).map(|j| ratio(j, k)).collect();
    let bottom: Vec<Rational> = model
        .weights()
        .iter()
        .flat_map(|&w| (0..w).map(move |j| ratio(j, w)))
        .collect();
    let constant = pf_constant(model);
    let (mut a, mut b) = match form {
        OperatorForm::Local => (top, bottom),
        OperatorForm::Unreduced => (top.iter().map(|r| Rational::one() - r).collect(), bottom),
        OperatorForm::Reduced => {
            let mut num = multiset(top);
            let mut den = multiset(bottom);
            for (r, count) in num.iter_mut() {
                if let Some(other) = den.get_mut(r) {
                    let common = (*count).min(*other);
                    *count -= common;
                    *other -= common;
                }
            }
            num.retain(|_, c| *c > 0);
            den.retain(|_, c| *c > 0);
            let a = expand(num).into_iter().map(|r| Rational::one() - r).collect();
            (a, expand(den))
        }
    };
    a.sort();
    b.sort();
    PFOperator { constant, a, b, form }
}

impl PFOperator {
    /// `Π_j (θ − b_j)Φ − C·z·Π_j (θ + a_j)Φ`; zero certifies `Φ` is a solution
    /// modulo `z^(N+1)`.
    pub fn apply(&self, phi: &LogSeries) -> LogSeries {
        let left = self.b.iter().fold(phi.clone(), |acc, b| acc.theta_plus(&-b));
        let right = self.a.iter().fold(phi.clone(), |acc, a| acc.theta_plus(a));
        &left - &right.shift_truncated().scale(&self.constant)
    }

    /// The operator written in `z̃ = C·z`, the way it is usually displayed.
    pub fn rescaled(&self) -> String {
        format!("{} - z̃{}", theta_factors(&self.b, '-'), theta_factors(&self.a, '+'))
    }
}

/// Residual of `op` on `Φ`. See [`PFOperator::apply`].
pub fn pf_apply(op: &PFOperator, phi: &LogSeries) -> LogSeries {
    op.apply(phi)
}

fn theta_factors(params: &[Rational], sign: char) -> String {
    let zeros = params.iter().filter(|p| p.is_zero()).count();
    let mut out = String::new();
    match zeros {
        0 => {}
        1 => out.push('θ'),
        z => out.push_str(&format!("θ^{z}")),
    }
    for p in params.iter().filter(|p| !p.is_zero()) {
        out.push_str(&format!("(θ{sign}{p})"));
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

impl fmt::Display for PFOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} - {}z{}",
            theta_factors(&self.b, '-'),
            self.constant,
            theta_factors(&self.a, '+')
        )
    }
}

/// Weights pairwise coprime, i.e. the reduced operator is `θ^{n−1} − C z Π (θ + a_j)`.
pub fn pf2_applicable(model: &Model) -> bool {
    let w = model.weights();
    (0..w.len()).all(|i| (i + 1..w.len()).all(|j| w[i].gcd(&w[j]) == 1))
}

/// Numeric logarithmic Mahler measure of `F_ψ = ψ − P(x_1,…,x_{n−1},1)/(k x_1⋯x_{n−1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MahlerMeasure {
    pub psi: f64,
    /// `z = (kψ)^{−k}`
    pub z: f64,
    /// `m(F_ψ) = log ψ − f(z)/k`
    pub log_measure: f64,
    /// `M(F_ψ) = exp m(F_ψ)`
    pub measure: f64,
    /// Upper bound on `|m(F_ψ) − log_measure|` from the dropped terms `m > N`.
    pub tail_bound: f64,
}

/// Evaluates `m(F_ψ) = −log|M̃| = log ψ − f(z)/k` from the exact partial sum
/// of `f` through `z^N`, for real `ψ > 0` with `C·z < 1`.
pub fn mahler_measure(model: &Model, psi: f64, order: usize) -> Result<MahlerMeasure> {
    if !psi.is_finite() || psi <= 0.0 {
        return Err(Error::Domain(format!("psi must be a positive real, got {psi}")));
    }
    let k = model.degree();
    let psi_exact = Rational::from_float(psi).expect("finite float");
    let base = psi_exact * int(k as i64);
    let z = base.pow(k as i32).recip();
    let constant = pf_constant(model);
    let rho_limit = &constant * &z;
    if rho_limit >= Rational::one() {
        return Err(Error::Convergence(format!(
            "psi = {psi}: C·z = {:.6} is not below 1",
            rho_limit.to_f64().unwrap_or(f64::INFINITY)
        )));
    }

    let alphas = alpha_sequence(model, order);
    let mut sum = Rational::zero();
    let mut power = Rational::one();
    let mut last_term = Rational::zero();
    for (m, a) in alphas.iter().enumerate().skip(1) {
        power *= &z;
        last_term = from_bigint(a.clone()) * &power / int(m as i64);
        sum += &last_term;
    }

    // Every term ratio beyond N is at most C·z·Π_j max(1, (N + a_j)/(N + 1 − b_j)).
    let op = pf_operator(model, OperatorForm::Reduced);
    let n = int(order as i64);
    let growth = op.a.iter().zip(&op.b).fold(Rational::one(), |acc, (a, b)| {
        let factor = (&n + a) / (&n + Rational::one() - b);
        acc * factor.max(Rational::one())
    });
    let rho = (rho_limit * growth).to_f64().unwrap_or(f64::INFINITY);
    let last = last_term.abs().to_f64().unwrap_or(f64::INFINITY);
    let tail_f = if rho < 1.0 { last * rho / (1.0 - rho) } else { f64::INFINITY };

    let kf = k as f64;
    let log_measure = psi.ln() - sum.to_f64().unwrap_or(f64::NAN) / kf;
    Ok(MahlerMeasure {
        psi,
        z: z.to_f64().unwrap_or(0.0),
        log_measure,
        measure: log_measure.exp(),
        tail_bound: tail_f / kf,
    })
}
