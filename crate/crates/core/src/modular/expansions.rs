//! Exact q-expansions of θ, θ₂, λ, J, the forms g_n and their cusp-1 data.

use rug::Integer;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::series::HalfIntSeries;
use crate::error::{Error, Result};

pub type IntSeries = HalfIntSeries<Integer>;

/// Truncated expansions of the basic modular functions at the cusp ∞.
#[derive(Clone, Debug)]
pub struct QExpansions {
    pub theta: IntSeries,
    pub theta2: IntSeries,
    pub lambda: IntSeries,
    pub j: IntSeries,
}

/// `θ = Σ q^{n²/2}` below exponent `order/8`.
pub fn theta_series(order: i64) -> IntSeries {
    let mut terms = vec![(0, Integer::from(1))];
    let mut n = 1i64;
    while 4 * n * n < order {
        terms.push((4 * n * n, Integer::from(2)));
        n += 1;
    }
    HalfIntSeries::from_terms(terms, order)
}

/// `θ₂ = Σ_{k∈ℤ} q^{(2k+1)²/8}` below exponent `order/8`.
pub fn theta2_series(order: i64) -> IntSeries {
    let mut terms = Vec::new();
    let mut k = 0i64;
    while (2 * k + 1) * (2 * k + 1) < order {
        terms.push(((2 * k + 1) * (2 * k + 1), Integer::from(2)));
        k += 1;
    }
    HalfIntSeries::from_terms(terms, order)
}

/// λ = θ₂⁴/θ⁴, known to the order of its inputs.
fn lambda_from(theta: &IntSeries, theta2: &IntSeries) -> Result<IntSeries> {
    Ok(theta2.pow(4).mul(&theta.pow(4).reciprocal()?))
}

/// Expansions of θ, θ₂, λ and J, all exact below `q^{order/8}`.
pub fn q_expansions(order: i64) -> Result<QExpansions> {
    if order < 16 {
        return Err(Error::invalid(format!(
            "order {order} too small: need at least 16 (exponent 2)"
        )));
    }
    let inner = order + 8;
    let theta = theta_series(inner);
    let theta2 = theta2_series(inner);
    let lambda = lambda_from(&theta, &theta2)?;
    let one = HalfIntSeries::constant(Integer::from(1), inner);
    // J = 16/(λ(1−λ)); λ(1−λ)/16 = q^{1/2} + … has a unit leading coefficient
    let p = lambda.mul(&one.sub(&lambda)).div_scalar_exact(&Integer::from(16))?;
    let j = p.reciprocal()?;
    Ok(QExpansions {
        theta: theta.truncate(order),
        theta2: theta2.truncate(order),
        lambda: lambda.truncate(order),
        j: j.truncate(order),
    })
}

/// `J₁ = J(1 − 1/τ) = −16λ²/(1−λ)` at the cusp 1, exact below `q^{order/8}`.
pub fn j_cusp1_series(order: i64) -> Result<IntSeries> {
    let inner = order + 8;
    let theta = theta_series(inner);
    let theta2 = theta2_series(inner);
    let lambda = lambda_from(&theta, &theta2)?;
    let one = HalfIntSeries::constant(Integer::from(1), inner);
    let inv = one.sub(&lambda).reciprocal()?;
    Ok(lambda.mul(&lambda).mul(&inv).scale(&Integer::from(-16)).truncate(order))
}

/// Cached data for the triangular solve determining `Q_n`.
#[derive(Default)]
struct QStore {
    /// `θ³J^k` truncated to exponents `≤ 0`, for `k ≤ kmax`.
    basis: Vec<IntSeries>,
    polys: HashMap<usize, Arc<Vec<Integer>>>,
}

fn store() -> &'static RwLock<QStore> {
    static STORE: OnceLock<RwLock<QStore>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(QStore::default()))
}

/// `θ³J^k` for `k = 0..=kmax`, each truncated below `q^{1/2}`.
fn theta3_jpowers(kmax: usize) -> Result<Vec<IntSeries>> {
    let km = kmax as i64;
    // J^k is carried to order 4 + 4(kmax − k) so that every later product stays exact
    let top = 4 + 4 * km + 4;
    let qe = q_expansions(top.max(16))?;
    let theta3 = qe.theta.pow(3);
    let mut out = Vec::with_capacity(kmax + 1);
    let mut jp = HalfIntSeries::constant(Integer::from(1), top);
    for k in 0..=km {
        out.push(theta3.mul(&jp).truncate(4));
        if k < km {
            jp = jp.mul(&qe.j).truncate(4 + 4 * (km - k - 1) + 4);
        }
    }
    Ok(out)
}

/// Coefficients `c_0, …, c_n` of `Q_n` (with `c_n = 1`), memoized.
pub fn q_poly(n: usize) -> Result<Arc<Vec<Integer>>> {
    if let Some(p) = store().read().expect("q store poisoned").polys.get(&n) {
        return Ok(p.clone());
    }
    let mut st = store().write().expect("q store poisoned");
    if let Some(p) = st.polys.get(&n) {
        return Ok(p.clone());
    }
    if st.basis.len() <= n {
        let kmax = (n + 1).next_power_of_two().max(16);
        st.basis = theta3_jpowers(kmax)?;
    }
    let basis = &st.basis;
    let mut c = vec![Integer::new(); n + 1];
    c[n] = Integer::from(1);
    // residual = θ³ Σ_{k>i} c_k J^k, restricted to exponents −n/2..0
    let mut resid: Vec<Integer> = vec![Integer::new(); n + 1];
    let add_scaled = |resid: &mut Vec<Integer>, k: usize, ck: &Integer| {
        for (e, coeff) in basis[k].terms() {
            // e = −4i for i = 0..=k
            let idx = (-e / 4) as usize;
            resid[idx] += ck * coeff;
        }
    };
    add_scaled(&mut resid, n, &c[n]);
    for i in (0..n).rev() {
        let ci = Integer::from(-&resid[i]);
        add_scaled(&mut resid, i, &ci);
        c[i] = ci;
    }
    let p = Arc::new(c);
    st.polys.insert(n, p.clone());
    Ok(p)
}

/// `g_n = θ³·Q_n(J)` exact below `q^{order/8}`.
pub fn g_expansion(n: usize, order: i64) -> Result<IntSeries> {
    if order < 4 {
        return Err(Error::invalid(format!(
            "order {order} cannot hold the conditions up to q^0 (need ≥ 4)"
        )));
    }
    let c = q_poly(n)?;
    let nn = n as i64;
    let inner = order + 4 * nn;
    let qe = q_expansions(inner.max(16))?;
    let theta3 = qe.theta.pow(3);
    let one_order = inner + 4 * nn + 8;
    let mut p = HalfIntSeries::constant(c[n].clone(), one_order);
    for k in (0..n).rev() {
        p = p.mul(&qe.j).add(&HalfIntSeries::constant(c[k].clone(), one_order));
    }
    Ok(theta3.mul(&p).truncate(order))
}

/// `a_{n,ν}` for `ν = 1..=count`: coefficients of `q^{ν/2}` in `g_n`.
pub fn g_coefficients(n: usize, count: usize) -> Result<Vec<Integer>> {
    let order = 4 * count as i64 + 4;
    let g = g_expansion(n, order)?;
    Ok((1..=count as i64).map(|nu| g.coeff(4 * nu).expect("within order")).collect())
}

/// `θ₂³·Q_m(J₁)`: the expansion of `(τ/i)^{−3/2} g_m(1 − 1/τ)`, below `q^{order/8}`.
pub fn g_cusp1_expansion(m: usize, order: i64) -> Result<IntSeries> {
    let c = q_poly(m)?;
    let inner = order + 8;
    let j1 = j_cusp1_series(inner)?;
    let theta2_3 = theta2_series(inner).pow(3);
    // J₁ has valuation 1, so J₁^k only matters for 8k < order
    let kmax = m.min(((order + 7) / 8) as usize);
    let mut p = HalfIntSeries::constant(c[kmax].clone(), inner);
    for k in (0..kmax).rev() {
        p = p.mul(&j1).add(&HalfIntSeries::constant(c[k].clone(), inner));
    }
    Ok(theta2_3.mul(&p).truncate(order))
}

/// `ã_{m,ν}` for `ν = 0..count−1`: coefficients of `q^{ν+3/8}`.
pub fn g_cusp1_coefficients(m: usize, count: usize) -> Result<Vec<Integer>> {
    let order = 8 * count as i64 + 3;
    let s = g_cusp1_expansion(m, order.max(8))?;
    Ok((0..count as i64).map(|nu| s.coeff(8 * nu + 3).expect("within order")).collect())
}
