//! Analytic predictions from the degree distribution: generating functions,
//! percolated degree distributions, the critical threshold, and the giant
//! strongly connected component fractions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::degrees::{ln_factorial, DegreeDistribution};
use crate::error::{Error, Result};
use crate::percolation::{check_pi, Mode};

pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITERS: usize = 1_000_000;

/// `|π·μ₁₁/μ − 1|` at or below which π is treated as exactly critical.
pub const CRITICAL_TOL: f64 = 1e-12;

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ArgumentOutOfRange { name, value })
    }
}

/// `U(x, y) = Σ p_{j,k} xʲ yᵏ`.
pub fn pgf_eval(dist: &DegreeDistribution, x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    Ok(dist.iter().map(|((j, k), p)| p * x.powi(j as i32) * y.powi(k as i32)).sum())
}

fn nonzero_mean(dist: &DegreeDistribution) -> Result<f64> {
    let mu = dist.mean();
    if mu > 0.0 {
        Ok(mu)
    } else {
        Err(Error::ZeroMeanDegree)
    }
}

/// `U⁻(x) = μ⁻¹ Σ k p_{j,k} xʲ`.
pub fn u_minus(dist: &DegreeDistribution, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    let mu = nonzero_mean(dist)?;
    Ok(dist.iter().map(|((j, k), p)| k as f64 * p * x.powi(j as i32)).sum::<f64>() / mu)
}

/// `U⁺(y) = μ⁻¹ Σ j p_{j,k} yᵏ`.
pub fn u_plus(dist: &DegreeDistribution, y: f64) -> Result<f64> {
    check_unit("y", y)?;
    let mu = nonzero_mean(dist)?;
    Ok(dist.iter().map(|((j, k), p)| j as f64 * p * y.powi(k as i32)).sum::<f64>() / mu)
}

/// `rows[d][j] = C(d, j) πʲ (1 − π)^{d−j}` for `d ≤ max_degree`.
fn binomial_rows(max_degree: usize, pi: f64) -> Vec<Vec<f64>> {
    let ln_fact: Vec<f64> = (0..=max_degree).map(ln_factorial).collect();
    (0..=max_degree)
        .map(|d| {
            (0..=d)
                .map(|j| {
                    let ln_choose = ln_fact[d] - ln_fact[j] - ln_fact[d - j];
                    ln_choose.exp() * pi.powi(j as i32) * (1.0 - pi).powi((d - j) as i32)
                })
                .collect()
        })
        .collect()
}

/// Degree distribution after bond percolation: independent binomial
/// thinning of in- and out-degrees, summed exactly over the stored support.
pub fn bond_distribution(dist: &DegreeDistribution, pi: f64) -> Result<DegreeDistribution> {
    check_pi(pi)?;
    if pi == 1.0 {
        return Ok(dist.clone());
    }
    let rows = binomial_rows(dist.max_degree(), pi);
    let mut table = std::collections::BTreeMap::<(usize, usize), f64>::new();
    for ((d_in, d_out), p) in dist.iter() {
        for (j, &bj) in rows[d_in].iter().enumerate() {
            for (k, &bk) in rows[d_out].iter().enumerate() {
                *table.entry((j, k)).or_insert(0.0) += p * bj * bk;
            }
        }
    }
    Ok(DegreeDistribution::from_weights(table)?.with_truncation_loss(dist.truncation_loss()))
}

/// Degree distribution after site percolation: `π·p̂^bond` off the origin,
/// with the deleted mass `1 − π` added at `(0, 0)`.
pub fn site_distribution(dist: &DegreeDistribution, pi: f64) -> Result<DegreeDistribution> {
    let bond = bond_distribution(dist, pi)?;
    if pi == 1.0 {
        return Ok(bond);
    }
    let weights = bond.iter().map(|(jk, p)| (jk, pi * p)).chain(std::iter::once(((0, 0), 1.0 - pi)));
    Ok(DegreeDistribution::from_weights(weights)?.with_truncation_loss(dist.truncation_loss()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// `μ / μ₁₁`; may exceed 1.
    pub pi_c: f64,
    /// `μ₁₁ > μ`, i.e. `pi_c < 1`.
    pub supercritical_possible: bool,
}

pub fn critical_threshold(dist: &DegreeDistribution) -> Result<Threshold> {
    let mu11 = dist.mu11();
    if mu11 <= 0.0 {
        return Err(Error::ZeroMu11);
    }
    let mu = dist.mean();
    Ok(Threshold { pi_c: mu / mu11, supercritical_possible: mu11 > mu })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub x: f64,
    pub iters: usize,
    /// `|map(x) − x|` at the returned point.
    pub residual: f64,
}

/// Smallest fixed point of a nondecreasing map on `[0, 1]` with `map(1) = 1`,
/// by monotone iteration from 0 until successive iterates differ by less
/// than `tol`.
pub fn solve_fixed_point<F>(map: F, tol: f64, max_iters: usize) -> Result<FixedPoint>
where
    F: Fn(f64) -> f64,
{
    let mut x = 0.0;
    for iters in 1..=max_iters {
        let next = map(x);
        let step = (next - x).abs();
        x = next;
        if step < tol {
            return Ok(FixedPoint { x, iters, residual: (map(x) - x).abs() });
        }
    }
    Err(Error::MaxItersExceeded { best: x, iters: max_iters, residual: (map(x) - x).abs() })
}

/// Which prediction [`gscc_fraction`] is asked for. `None` ignores π and
/// evaluates the unpercolated graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryMode {
    Bond,
    Site,
    None,
}

impl From<Mode> for TheoryMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Bond => TheoryMode::Bond,
            Mode::Site => TheoryMode::Site,
        }
    }
}

impl fmt::Display for TheoryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoryMode::Bond => "bond",
            TheoryMode::Site => "site",
            TheoryMode::None => "none",
        })
    }
}

impl FromStr for TheoryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TheoryMode::None),
            other => other.parse::<Mode>().map(TheoryMode::from),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    /// `π = π_c` up to [`CRITICAL_TOL`]; reported with zero GSCC fraction.
    Critical,
    Supercritical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoryPrediction {
    pub pi: f64,
    pub pi_c: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub c_bond: f64,
    pub c_site: f64,
    /// GSCC fraction of the unpercolated graph.
    pub zeta: f64,
    pub solver_iters: usize,
    pub solver_residual: f64,
    pub mode: TheoryMode,
    pub regime: Regime,
    /// `U⁻_π(0) > 0` and `U⁺_π(0) > 0`.
    pub positivity_holds: bool,
}

impl TheoryPrediction {
    /// The fraction matching the requested mode.
    pub fn fraction(&self) -> f64 {
        match self.mode {
            TheoryMode::Bond => self.c_bond,
            TheoryMode::Site => self.c_site,
            TheoryMode::None => self.zeta,
        }
    }
}

/// Polynomial coefficients for U⁻ (indexed by in-degree) and U⁺ (indexed by
/// out-degree), plus the joint table for the GSCC sum.
struct Gfs<'a> {
    dist: &'a DegreeDistribution,
    minus: Vec<f64>,
    plus: Vec<f64>,
}

impl<'a> Gfs<'a> {
    fn new(dist: &'a DegreeDistribution, mu: f64) -> Self {
        let d = dist.max_degree();
        let mut minus = vec![0.0; d + 1];
        let mut plus = vec![0.0; d + 1];
        for ((j, k), p) in dist.iter() {
            minus[j] += k as f64 * p / mu;
            plus[k] += j as f64 * p / mu;
        }
        Gfs { dist, minus, plus }
    }

    fn horner(coeffs: &[f64], s: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// `Σ p (1 − sʲ)(1 − tᵏ) = 1 − U(s,1) − U(1,t) + U(s,t)`, evaluated in
    /// the product form so it stays nonnegative.
    fn giant(&self, s: f64, t: f64) -> f64 {
        self.dist.iter().map(|((j, k), p)| p * (1.0 - s.powi(j as i32)) * (1.0 - t.powi(k as i32))).sum()
    }

    /// `(x*, y*, c_bond, iters, residual)` at percolation probability `pi`.
    fn solve(&self, pi: f64, supercritical: bool) -> Result<(f64, f64, f64, usize, f64)> {
        if !supercritical {
            return Ok((1.0, 1.0, 0.0, 0, 0.0));
        }
        let thin = |x: f64| 1.0 - pi + pi * x;
        let fx = solve_fixed_point(
            |x| Self::horner(&self.minus, thin(x)),
            FIXED_POINT_TOL,
            FIXED_POINT_MAX_ITERS,
        )?;
        let fy =
            solve_fixed_point(|y| Self::horner(&self.plus, thin(y)), FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS)?;
        let c = self.giant(thin(fx.x), thin(fy.x));
        Ok((fx.x, fy.x, c, fx.iters + fy.iters, fx.residual.max(fy.residual)))
    }
}

/// GSCC fractions `c^bond(π)`, `c^site(π) = π·c^bond(π)` and ζ.
///
/// The fixed points are the smallest solutions of `x = U⁻(1−π+πx)` and
/// `y = U⁺(1−π+πy)`. When `π·μ₁₁/μ ≤ 1` (including `π = π_c`) the fixed
/// points are 1 and both fractions are 0.
pub fn gscc_fraction(dist: &DegreeDistribution, pi: f64, mode: TheoryMode) -> Result<TheoryPrediction> {
    let mu = nonzero_mean(dist)?;
    let threshold = critical_threshold(dist)?;
    let pi = match mode {
        TheoryMode::None => 1.0,
        _ => {
            check_pi(pi)?;
            pi
        }
    };
    let gfs = Gfs::new(dist, mu);
    let ratio = dist.mu11() / mu;

    let regime_of = |growth: f64| {
        if (growth - 1.0).abs() <= CRITICAL_TOL {
            Regime::Critical
        } else if growth > 1.0 {
            Regime::Supercritical
        } else {
            Regime::Subcritical
        }
    };
    let (_, _, zeta, _, _) = gfs.solve(1.0, regime_of(ratio) == Regime::Supercritical)?;
    let regime = regime_of(pi * ratio);
    let (x_star, y_star, c_bond, iters, residual) = gfs.solve(pi, regime == Regime::Supercritical)?;

    let s0 = 1.0 - pi;
    let positivity_holds = Gfs::horner(&gfs.minus, s0) > 0.0 && Gfs::horner(&gfs.plus, s0) > 0.0;

    Ok(TheoryPrediction {
        pi,
        pi_c: threshold.pi_c,
        x_star,
        y_star,
        c_bond,
        c_site: pi * c_bond,
        zeta,
        solver_iters: iters,
        solver_residual: residual,
        mode,
        regime,
        positivity_holds,
    })
}
