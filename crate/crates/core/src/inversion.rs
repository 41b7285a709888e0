//! Changes of variable between `z`, `q` and `Q`, the logarithmic derivatives
//! `u` and `v`, their Möbius/Lambert inversions `b, b̂, c, ĉ`, and the
//! integrality report built on top of them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mirror::MirrorData;
use crate::rational::{divisible_by, int, Rational};
use crate::reference::{published, Erratum};
use crate::series::{lagrange_coeffs, Series};
use crate::weights::Model;

/// Möbius function by trial division.
pub fn mobius(m: u64) -> Result<i8> {
    if m == 0 {
        return Err(Error::Domain("mobius(0) is undefined".into()));
    }
    let mut n = m;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `Π (1 − t^m)^{m b_m}`
    Plain,
    /// `Π (1 − (−t)^m)^{m b̂_m}`
    Alternating,
}

fn sign_of_power(variant: Variant, d: usize) -> Rational {
    match variant {
        Variant::Alternating if d % 2 == 1 => -Rational::one(),
        _ => Rational::one(),
    }
}

/// Coefficients `1..=M` of `θ log(F/t)` for `F = t + O(t²)`.
fn log_derivative_tail(f: &Series, count: usize) -> Result<Vec<Rational>> {
    let unit = f.div_z()?.truncate(count);
    let d = unit.log()?.theta();
    Ok(d.coeffs()[1..].to_vec())
}

fn check_routes(name: &str, a: &[Rational], b: &[Rational]) -> Result<()> {
    match a.iter().zip(b).position(|(x, y)| x != y) {
        None => Ok(()),
        Some(i) => Err(Error::Consistency(format!(
            "{name}_{} differs between routes: {} by composition, {} by the rational form",
            i + 1,
            a[i],
            b[i]
        ))),
    }
}

/// `g₀ / (1 + θ(h/g₀)) = g₀³ / (g₀² + g₀·θh − h·θg₀)`, the value of
/// `q d/dq log Q` as a series in `z`.
pub fn u_rational_form(md: &MirrorData) -> Result<Series> {
    let (g0, h) = (&md.g0, &md.h);
    let cube = g0.mul(g0).mul(g0);
    let denom = &(&g0.mul(g0) + &g0.mul(&h.theta())) - &h.mul(&g0.theta());
    cube.div(&denom)
}

fn require(md: &MirrorData, count: usize) -> Result<()> {
    if md.order < count {
        return Err(Error::InsufficientOrder { need: count, have: md.order });
    }
    Ok(())
}

/// `u_1..u_M` with `q d/dq log Q = 1 + Σ u_m q^m`, computed by composition
/// and by the rational form; the two must agree exactly.
pub fn u_series(md: &MirrorData, count: usize) -> Result<Vec<Rational>> {
    require(md, count)?;
    let local_in_q = md.local_map.compose(&md.z_of_q)?;
    let route_a = log_derivative_tail(&local_in_q, count)?;
    let route_b = u_rational_form(md)?
        .truncate(count)
        .compose(&md.z_of_q.truncate(count))?;
    let route_b = route_b.coeffs()[1..].to_vec();
    check_routes("u", &route_a, &route_b)?;
    Ok(route_a)
}

/// `v_1..v_M` with `Q d/dQ log q = 1 + Σ v_m Q^m`, by composition with `z(Q)`
/// and by the reciprocal rational form.
pub fn v_series(md: &MirrorData, count: usize) -> Result<Vec<Rational>> {
    require(md, count)?;
    let mirror_in_local = md.q.compose(&md.z_of_local)?;
    let route_a = log_derivative_tail(&mirror_in_local, count)?;
    let route_b = u_rational_form(md)?
        .invert()?
        .truncate(count)
        .compose(&md.z_of_local.truncate(count))?;
    let route_b = route_b.coeffs()[1..].to_vec();
    check_routes("v", &route_a, &route_b)?;
    Ok(route_a)
}

/// `b_m = −(1/m²) Σ_{d|m} μ(m/d) s_d u_d` with `s_d = 1` (plain) or `(−1)^d`
/// (alternating). `u[0]` is `u_1`.
pub fn lambert_invert(u: &[Rational], variant: Variant) -> Vec<Rational> {
    (1..=u.len())
        .map(|m| {
            let mut acc = Rational::zero();
            for d in (1..=m).filter(|d| m % d == 0) {
                let mu = mobius((m / d) as u64).expect("positive");
                if mu != 0 && !u[d - 1].is_zero() {
                    acc += &u[d - 1] * sign_of_power(variant, d) * int(mu as i64);
                }
            }
            -acc / int((m * m) as i64)
        })
        .collect()
}

/// Coefficients `1..=M` of `−Σ_m b_m m² s^m t^m/(1 − s^m t^m)` with `s = 1` or `−1`,
/// i.e. the `u` that `b` was inverted from.
pub fn lambert_expand(b: &[Rational], variant: Variant) -> Vec<Rational> {
    let len = b.len();
    let mut u = vec![Rational::zero(); len];
    for (i, bm) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        let m = i + 1;
        let weight = bm * int((m * m) as i64);
        for n in (m..=len).step_by(m) {
            u[n - 1] -= &weight * sign_of_power(variant, n);
        }
    }
    u
}

/// `t·Π_{m≤M} (1 − s^m t^m)^{m e_m}` modulo `t^(M+1)`.
pub fn lambert_product(exps: &[Rational], variant: Variant, count: usize) -> Result<Series> {
    let top = count.saturating_sub(1);
    let mut acc = Series::one(top);
    for (i, e) in exps.iter().enumerate().take(count).filter(|(_, e)| !e.is_zero()) {
        let m = i + 1;
        if m > top {
            break;
        }
        let factor = &Series::one(top) - &Series::monomial(sign_of_power(variant, m), m, top);
        acc = acc.mul(&factor.pow_rational(&(e * int(m as i64)))?);
    }
    Ok(acc.mul_z())
}

/// Outcome of [`product_check`]: the product formula and the equivalent
/// Lambert-series identity, checked independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub product: bool,
    pub lambert: bool,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.product && self.lambert
    }
}

/// Compares `target = t + O(t²)` with `t·Π (1 − s^m t^m)^{m e_m}` modulo
/// `t^(M+1)`, and `θ log(target/t)` with `−Σ e_m m² s^m t^m/(1 − s^m t^m)`.
pub fn product_check_detail(
    target: &Series,
    exps: &[Rational],
    variant: Variant,
    count: usize,
) -> Result<ProductCheck> {
    if target.order() < count || exps.len() < count {
        return Err(Error::InsufficientOrder {
            need: count,
            have: target.order().min(exps.len()),
        });
    }
    let product = lambert_product(exps, variant, count)? == target.truncate(count);
    let lambert = lambert_expand(&exps[..count], variant) == log_derivative_tail(target, count)?;
    Ok(ProductCheck { product, lambert })
}

pub fn product_check(target: &Series, exps: &[Rational], variant: Variant, count: usize) -> bool {
    product_check_detail(target, exps, variant, count).is_ok_and(|c| c.holds())
}

/// Tail coefficients `1..=M` of `g₀` written in `q` and in `Q`.
pub fn g0_expansions(md: &MirrorData, count: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    require(md, count)?;
    let g0 = md.g0.truncate(count);
    let in_q = g0.compose(&md.z_of_q.truncate(count))?;
    let in_local = g0.compose(&md.z_of_local.truncate(count))?;
    Ok((in_q.coeffs()[1..].to_vec(), in_local.coeffs()[1..].to_vec()))
}

/// `Q` as a series in `q` and `q` as a series in `Q`, modulo order `N + 1`.
pub fn cross_maps(md: &MirrorData) -> Result<(Series, Series)> {
    Ok((md.local_map.compose(&md.z_of_q)?, md.q.compose(&md.z_of_local)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambertTable {
    pub order: usize,
    pub u: Vec<Rational>,
    pub b: Vec<Rational>,
    pub bhat: Vec<Rational>,
    pub v: Vec<Rational>,
    pub c: Vec<Rational>,
    pub chat: Vec<Rational>,
}

impl LambertTable {
    pub fn from_uv(u: Vec<Rational>, v: Vec<Rational>) -> Self {
        Self {
            order: u.len(),
            b: lambert_invert(&u, Variant::Plain),
            bhat: lambert_invert(&u, Variant::Alternating),
            c: lambert_invert(&v, Variant::Plain),
            chat: lambert_invert(&v, Variant::Alternating),
            u,
            v,
        }
    }

    /// The value in a named column (`b`, `bhat_over_m`, …) at `m`.
    pub fn value(&self, column: &str, m: u64) -> Option<Rational> {
        let (base, over_m) = match column.strip_suffix("_over_m") {
            Some(base) => (base, true),
            None => (column, false),
        };
        let values = match base {
            "u" => &self.u,
            "v" => &self.v,
            "b" => &self.b,
            "bhat" => &self.bhat,
            "c" => &self.c,
            "chat" => &self.chat,
            _ => return None,
        };
        let x = values.get((m as usize).checked_sub(1)?)?.clone();
        Some(if over_m { x / int(m as i64) } else { x })
    }
}

pub const COLUMNS: [&str; 4] = ["b", "bhat", "c", "chat"];

/// Full pipeline output for one model. Every verdict is derived from the
/// stored values on demand.
#[derive(Clone, Debug)]
pub struct IntegralityReport {
    pub model: Model,
    pub order: usize,
    pub table: LambertTable,
    /// Lagrange coefficients of `z(q)`, `m = 1..=N+1`.
    pub lagrange_q: Vec<Rational>,
    /// Lagrange coefficients of `z(Q)`, `m = 1..=N+1`.
    pub lagrange_local: Vec<Rational>,
    pub g0_in_q: Vec<Rational>,
    pub g0_in_local: Vec<Rational>,
    pub mirror_map: Series,
    pub local_map: Series,
    /// `(q/z)^{1/k}` and `(Q/z)^{1/k}`.
    pub mirror_root: Series,
    pub local_root: Series,
    pub local_in_q: Series,
    pub mirror_in_local: Series,
    pub products: Products,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Products {
    pub b: ProductCheck,
    pub bhat: ProductCheck,
    pub c: ProductCheck,
    pub chat: ProductCheck,
}

/// Verdicts for one `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub m: u64,
    pub values: [Rational; 4],
    /// Divisibility of all four values by the dimension, only for diagonal models.
    pub divisible_by_n: Option<bool>,
}

impl Row {
    pub fn is_integer(&self, i: usize) -> bool {
        self.values[i].is_integer()
    }

    pub fn divisible_by_m(&self, i: usize) -> bool {
        divisible_by(&self.values[i], self.m)
    }

    pub fn over_m(&self, i: usize) -> Rational {
        &self.values[i] / int(self.m as i64)
    }

    /// `integer`, `m|`, `n|` markers for the four columns, e.g. `b:m| chat:frac`.
    pub fn flags(&self) -> String {
        let mut out = Vec::new();
        for (i, name) in COLUMNS.iter().enumerate() {
            if !self.is_integer(i) {
                out.push(format!("{name}:frac"));
            } else if !self.divisible_by_m(i) {
                out.push(format!("{name}/m:frac"));
            }
        }
        match self.divisible_by_n {
            Some(true) => out.push("n|all".into()),
            Some(false) => out.push("n|fails".into()),
            None => {}
        }
        out.join(" ")
    }
}

fn all_integer(values: &[Rational]) -> bool {
    values.iter().all(Rational::is_integer)
}

impl IntegralityReport {
    pub fn rows(&self) -> Vec<Row> {
        let t = &self.table;
        let n = self.model.dimension() as u64;
        (0..t.order)
            .map(|i| {
                let values = [t.b[i].clone(), t.bhat[i].clone(), t.c[i].clone(), t.chat[i].clone()];
                let divisible_by_n = self
                    .model
                    .is_diagonal()
                    .then(|| values.iter().all(|x| divisible_by(x, n)));
                Row { m: i as u64 + 1, values, divisible_by_n }
            })
            .collect()
    }

    pub fn lagrange_integral(&self) -> bool {
        all_integer(&self.lagrange_q) && all_integer(&self.lagrange_local)
    }

    pub fn g0_in_q_integral(&self) -> bool {
        all_integer(&self.g0_in_q)
    }

    pub fn g0_in_local_integral(&self) -> bool {
        all_integer(&self.g0_in_local)
    }

    /// `q, Q ∈ z + zℤ[[z]]`
    pub fn proposition_integral(&self) -> bool {
        self.mirror_map.has_integer_coeffs() && self.local_map.has_integer_coeffs()
    }

    pub fn mirror_root_integral(&self) -> bool {
        self.mirror_root.has_integer_coeffs()
    }

    pub fn local_root_integral(&self) -> bool {
        self.local_root.has_integer_coeffs()
    }

    /// `Q ∈ qℤ[[q]]` and `q ∈ Qℤ[[Q]]`
    pub fn cross_integral(&self) -> bool {
        self.local_in_q.has_integer_coeffs() && self.mirror_in_local.has_integer_coeffs()
    }

    pub fn product_plain(&self) -> bool {
        self.products.b.holds() && self.products.c.holds()
    }

    pub fn product_alt(&self) -> bool {
        self.products.bhat.holds() && self.products.chat.holds()
    }

    /// Printed values for this model that disagree with the recomputed ones.
    pub fn errata(&self) -> Vec<Erratum> {
        let Some(table) = published(&self.model) else {
            return Vec::new();
        };
        table
            .entries()
            .filter_map(|(column, m, printed)| {
                let computed = self.table.value(column, m)?;
                (computed != printed).then(|| Erratum {
                    column: column.to_string(),
                    m,
                    printed: printed.to_string(),
                    computed: computed.to_string(),
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct JsonRow<'a>(&'a Row);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let row = self.0;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("m", &row.m)?;
        for (i, name) in COLUMNS.iter().enumerate() {
            map.serialize_entry(name, &row.values[i].to_string())?;
        }
        for (i, name) in COLUMNS.iter().enumerate() {
            map.serialize_entry(&format!("{name}_over_m"), &row.over_m(i).to_string())?;
        }
        for (i, name) in COLUMNS.iter().enumerate() {
            map.serialize_entry(&format!("{name}_integer"), &row.is_integer(i))?;
        }
        for (i, name) in COLUMNS.iter().enumerate() {
            map.serialize_entry(&format!("{name}_divisible_by_m"), &row.divisible_by_m(i))?;
        }
        if let Some(flag) = row.divisible_by_n {
            map.serialize_entry("divisible_by_n", &flag)?;
        }
        map.end()
    }
}

impl Serialize for IntegralityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings = |v: &[Rational]| v.iter().map(Rational::to_string).collect::<Vec<_>>();
        let rows = self.rows();
        let json_rows: Vec<JsonRow> = rows.iter().map(JsonRow).collect();
        let mut checks = serde_json::Map::new();
        let mut put = |k: &str, v: bool| {
            checks.insert(k.to_string(), serde_json::Value::Bool(v));
        };
        put("product_plain", self.product_plain());
        put("product_alt", self.product_alt());
        put("lagrange_integral", self.lagrange_integral());
        put("g0_in_q_integral", self.g0_in_q_integral());
        put("g0_in_Q_integral", self.g0_in_local_integral());
        put("proposition_qQ_integral", self.proposition_integral());
        put("conjecture1_root_integral", self.mirror_root_integral());
        put("local_root_integral", self.local_root_integral());
        put("cross_integral", self.cross_integral());

        let mut map = s.serialize_map(None)?;
        map.serialize_entry("model", &self.model)?;
        map.serialize_entry("order", &self.order)?;
        map.serialize_entry("rows", &json_rows)?;
        map.serialize_entry("checks", &checks)?;
        map.serialize_entry("u", &strings(&self.table.u))?;
        map.serialize_entry("v", &strings(&self.table.v))?;
        map.serialize_entry("g0_in_q", &strings(&self.g0_in_q))?;
        map.serialize_entry("g0_in_Q", &strings(&self.g0_in_local))?;
        map.serialize_entry("errata", &self.errata())?;
        map.end()
    }
}

/// `(F/z)^{1/k}` for `F = z + O(z²)`.
fn unit_root(f: &Series, k: u64) -> Result<Series> {
    f.div_z()?.pow_rational(&Rational::new(BigInt::one(), BigInt::from(k)))
}

/// Runs the whole pipeline at order `N`: mirror data, dual-route `u`/`v`,
/// the four Lambert columns, product and Lagrange checks.
pub fn integrality_report(model: &Model, order: usize) -> Result<IntegralityReport> {
    let md = MirrorData::new(model, order)?;
    report_from_mirror(&md)
}

pub fn report_from_mirror(md: &MirrorData) -> Result<IntegralityReport> {
    let order = md.order;
    let u = u_series(md, order)?;
    let v = v_series(md, order)?;
    let table = LambertTable::from_uv(u, v);

    let lagrange_q = lagrange_coeffs(&md.mirror_exponent()?, order + 1)?;
    let lagrange_local = lagrange_coeffs(&md.f, order + 1)?;
    check_routes("a", &lagrange_q, &md.z_of_q.coeffs()[1..])?;
    check_routes("A", &lagrange_local, &md.z_of_local.coeffs()[1..])?;

    let (g0_in_q, g0_in_local) = g0_expansions(md, order)?;
    let (local_in_q, mirror_in_local) = cross_maps(md)?;
    let k = md.model.degree();
    let products = Products {
        b: product_check_detail(&local_in_q, &table.b, Variant::Plain, order)?,
        bhat: product_check_detail(&local_in_q, &table.bhat, Variant::Alternating, order)?,
        c: product_check_detail(&mirror_in_local, &table.c, Variant::Plain, order)?,
        chat: product_check_detail(&mirror_in_local, &table.chat, Variant::Alternating, order)?,
    };
    Ok(IntegralityReport {
        model: md.model.clone(),
        order,
        table,
        lagrange_q,
        lagrange_local,
        g0_in_q,
        g0_in_local,
        mirror_root: unit_root(&md.q, k)?,
        local_root: unit_root(&md.local_map, k)?,
        mirror_map: md.q.clone(),
        local_map: md.local_map.clone(),
        local_in_q,
        mirror_in_local,
        products,
    })
}
