//! Threshold extraction, parameter sweeps and the coefficient-bound
//! Monte-Carlo experiment.
//!
//! Parallel work is collected in index order, so every output is identical
//! regardless of thread count or schedule.

use rayon::prelude::*;

use crate::criteria::{self, scenario_terms, trusted_dim, Bound, GapReport, GapTerms, Scenario};
use crate::error::{Error, Result};
use crate::io::{csv_line, fmt17, JsonObject};
use crate::linalg::DimensionFactorization;
use crate::observables::{gell_mann_loo, perturb_basis, tomography_coeffs, ErrorModel, EtaScaling, Weights};
use crate::random::{self, derive_seed, rng_from_seed};
use crate::scalar::Real;
use crate::states::{DensityMatrix, StateFamilySpec};

/// A sign change of a gap located to within `width`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdResult<T> {
    pub parameter: String,
    /// Midpoint of the final bracket.
    pub critical: T,
    pub bracket: (T, T),
    pub width: T,
    pub evaluations: usize,
}

impl<T: Real> ThresholdResult<T> {
    pub fn to_json(&self) -> String {
        JsonObject::new()
            .string("parameter", &self.parameter)
            .number("critical", self.critical.as_f64())
            .numbers("bracket", &[self.bracket.0.as_f64(), self.bracket.1.as_f64()])
            .number("width", self.width.as_f64())
            .integer("evaluations", self.evaluations as u64)
            .finish()
    }
}

/// Bisects on the steerable/unsteerable classification (`gap > 0`).
///
/// Uses at most `ceil(log2((hi - lo) / tol)) + 2` evaluations, all inside
/// `[lo, hi]`. On a non-monotone gap the result is one of the sign changes.
pub fn bisect_threshold<T: Real, F>(parameter: &str, mut gap: F, lo: T, hi: T, tol: T) -> Result<ThresholdResult<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if !(tol > T::zero()) || !tol.is_finite() {
        return Err(Error::Parameter {
            name: "tol",
            value: tol.as_f64(),
            reason: "must be positive and finite",
        });
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Parameter {
            name: "bracket",
            value: lo.as_f64(),
            reason: "lower end must be finite and below the upper end",
        });
    }
    let gap_lo = gap(lo)?;
    let gap_hi = gap(hi)?;
    let mut evaluations = 2;
    let side_lo = gap_lo > T::zero();
    if side_lo == (gap_hi > T::zero()) {
        return Err(Error::Bracketing {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            gap_lo: gap_lo.as_f64(),
            gap_hi: gap_hi.as_f64(),
        });
    }
    let (mut a, mut b) = (lo, hi);
    let two = T::lit(2.0);
    while b - a > tol {
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        evaluations += 1;
        if (gap(mid)? > T::zero()) == side_lo {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(ThresholdResult {
        parameter: parameter.to_owned(),
        critical: a + (b - a) / two,
        bracket: (a, b),
        width: b - a,
        evaluations,
    })
}

/// Lower end of the `p` bracket for the asymmetric family.
pub const ASYMMETRIC_P_MIN: f64 = 0.3;

/// Critical mixing `p` of the asymmetric family in direction `scenario`.
pub fn asymmetric_threshold<T: Real>(
    scenario: Scenario,
    bound: Bound,
    xi: T,
    scaling: EtaScaling,
    tol: T,
) -> Result<ThresholdResult<T>> {
    if scenario.parties() != 2 {
        return Err(Error::Unsupported(format!("asymmetric family has no {scenario} direction")));
    }
    let model = ErrorModel::new(xi, 2)?.with_scaling(scaling);
    bisect_threshold(
        "p",
        |p| {
            let rho = crate::states::asymmetric(p)?;
            Ok(scenario_terms(&rho, scenario, bound, None)?.at(&model).gap)
        },
        T::lit(ASYMMETRIC_P_MIN),
        T::one(),
        tol,
    )
}

/// Evenly spaced points `start..=stop`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(name: impl Into<String>, start: f64, stop: f64, count: usize) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Grid("axis name is empty".into()));
        }
        if count < 2 {
            return Err(Error::Grid(format!("axis `{name}` needs at least 2 points, got {count}")));
        }
        if !(start < stop) || !start.is_finite() || !stop.is_finite() {
            return Err(Error::Grid(format!("axis `{name}` needs finite start < stop, got {start}..{stop}")));
        }
        Ok(Self { name, start, stop, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl std::str::FromStr for AxisSpec {
    type Err = Error;

    /// `name:start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(Error::Grid(format!("`{s}` is not name:start:stop:count")));
        };
        let num = |field: &str, what: &str| {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Grid(format!("axis `{name}`: {what} `{field}` is not a number")))
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Grid(format!("axis `{name}`: count `{count}` is not an integer")))?;
        Self::new(name.trim(), num(start, "start")?, num(stop, "stop")?, count)
    }
}

/// Comma-separated axis list, at most two axes.
pub fn parse_axes(spec: &str) -> Result<Vec<AxisSpec>> {
    let axes = spec.split(',').map(str::parse).collect::<Result<Vec<AxisSpec>>>()?;
    if axes.len() > 2 {
        return Err(Error::Grid(format!("at most two axes, got {}", axes.len())));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(Error::Grid(format!("axis `{}` given twice", axes[0].name)));
    }
    Ok(axes)
}

/// Where the state at a grid point comes from.
#[derive(Clone, Debug)]
pub enum StateSource<T> {
    Family(StateFamilySpec),
    Fixed(DensityMatrix<T>),
}

/// Everything needed to evaluate a gap except the swept parameters.
#[derive(Clone, Debug)]
pub struct SweepScenario<T> {
    pub scenario: Scenario,
    pub state: StateSource<T>,
    pub xi: T,
    pub bound: Bound,
    pub scaling: EtaScaling,
    pub weights: Option<Weights<T>>,
}

impl<T: Real> SweepScenario<T> {
    pub fn new(scenario: Scenario, state: StateSource<T>) -> Self {
        Self {
            scenario,
            state,
            xi: T::zero(),
            bound: Bound::default(),
            scaling: EtaScaling::default(),
            weights: None,
        }
    }

    /// State with the named parameters overridden.
    fn state_with(&self, overrides: &[(&str, f64)]) -> Result<DensityMatrix<T>> {
        match &self.state {
            StateSource::Fixed(rho) => match overrides.first() {
                None => Ok(rho.clone()),
                Some((name, _)) => Err(Error::Grid(format!(
                    "axis `{name}` cannot vary an explicit density matrix"
                ))),
            },
            StateSource::Family(spec) => {
                let mut spec = spec.clone();
                for &(name, value) in overrides {
                    spec = override_parameter(&spec, name, value)?;
                }
                spec.build()
            }
        }
    }

    pub fn terms(&self, overrides: &[(&str, f64)]) -> Result<(GapTerms<T>, usize)> {
        let rho = self.state_with(overrides)?;
        let terms = scenario_terms(&rho, self.scenario, self.bound, self.weights.as_ref())?;
        Ok((terms, trusted_dim(&rho, self.scenario)?))
    }

    pub fn model(&self, xi: T, dim: usize) -> Result<ErrorModel<T>> {
        Ok(ErrorModel::new(xi, dim)?.with_scaling(self.scaling))
    }

    pub fn report(&self) -> Result<GapReport<T>> {
        let (terms, dim) = self.terms(&[])?;
        Ok(terms.at(&self.model(self.xi, dim)?))
    }
}

fn override_parameter(spec: &StateFamilySpec, name: &str, value: f64) -> Result<StateFamilySpec> {
    let integer = |v: f64| -> Result<usize> {
        if v.fract() == 0.0 && v >= 2.0 {
            Ok(v as usize)
        } else {
            Err(Error::Grid(format!("axis `{name}` value {v} is not an integer dimension >= 2")))
        }
    };
    Ok(match (spec, name) {
        (StateFamilySpec::Asymmetric { .. }, "p") => StateFamilySpec::Asymmetric { p: value },
        (StateFamilySpec::Ghz { .. }, "theta") => StateFamilySpec::Ghz { theta: value },
        (StateFamilySpec::GhzD { .. }, "d") => StateFamilySpec::GhzD { d: integer(value)? },
        (StateFamilySpec::MaxEntangled { .. }, "d") => StateFamilySpec::MaxEntangled { d: integer(value)? },
        _ => {
            return Err(Error::Grid(format!(
                "axis `{name}` is not a parameter of the {} family",
                spec.tag()
            )))
        }
    })
}

/// Gap reports on a one- or two-axis grid, row-major with axis 1 outermost.
#[derive(Clone, Debug)]
pub struct SweepGrid<T> {
    pub scenario: Scenario,
    pub axes: Vec<AxisSpec>,
    pub reports: Vec<GapReport<T>>,
}

impl<T: Real> SweepGrid<T> {
    pub const CSV_HEADER: &'static str = "axis1,axis2,lhs,penalty,rhs,gap,steerable";

    /// Axis values of point `index`; the second is absent on 1-D grids.
    pub fn coordinates(&self, index: usize) -> (f64, Option<f64>) {
        match self.axes.as_slice() {
            [a] => (a.value(index), None),
            [a, b] => (a.value(index / b.count), Some(b.value(index % b.count))),
            _ => unreachable!("grids have one or two axes"),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (i, r) in self.reports.iter().enumerate() {
            let (x, y) = self.coordinates(i);
            let line = csv_line(&[
                fmt17(x),
                y.map(fmt17).unwrap_or_default(),
                fmt17(r.lhs.as_f64()),
                fmt17(r.penalty.as_f64()),
                fmt17(r.rhs.as_f64()),
                fmt17(r.gap.as_f64()),
                r.steerable.to_string(),
            ]);
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Evaluates the scenario at every grid point.
///
/// An axis named `xi` sweeps the imprecision budget; any other name
/// overrides the matching state-family parameter (`p`, `theta` or `d`).
/// Gap terms are computed once per distinct state.
pub fn sweep<T: Real>(scenario: &SweepScenario<T>, axes: &[AxisSpec]) -> Result<SweepGrid<T>> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Grid(format!("expected one or two axes, got {}", axes.len())));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(Error::Grid(format!("axis `{}` given twice", axes[0].name)));
    }
    let state_axes: Vec<&AxisSpec> = axes.iter().filter(|a| a.name != "xi").collect();
    let xi_axis = axes.iter().position(|a| a.name == "xi");
    let state_count: usize = state_axes.iter().map(|a| a.count).product();

    // state index s is row-major over the non-xi axes
    let terms: Vec<(GapTerms<T>, usize)> = (0..state_count)
        .into_par_iter()
        .map(|s| {
            let mut rem = s;
            let mut overrides: Vec<(&str, f64)> = Vec::with_capacity(state_axes.len());
            for axis in state_axes.iter().rev() {
                overrides.push((axis.name.as_str(), axis.value(rem % axis.count)));
                rem /= axis.count;
            }
            overrides.reverse();
            scenario.terms(&overrides)
        })
        .collect::<Result<_>>()?;

    let total: usize = axes.iter().map(|a| a.count).product();
    let counts: Vec<usize> = axes.iter().map(|a| a.count).collect();
    let reports = (0..total)
        .into_par_iter()
        .map(|point| {
            let idx = match counts.as_slice() {
                [_] => vec![point],
                [_, c2] => vec![point / c2, point % c2],
                _ => unreachable!(),
            };
            let xi = xi_axis.map_or(scenario.xi, |k| T::lit(axes[k].value(idx[k])));
            let s = axes
                .iter()
                .zip(&idx)
                .filter(|(a, _)| a.name != "xi")
                .fold(0, |acc, (a, &i)| acc * a.count + i);
            let (t, dim) = &terms[s];
            Ok(t.at(&scenario.model(xi, *dim)?))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepGrid {
        scenario: scenario.scenario,
        axes: axes.to_vec(),
        reports,
    })
}

/// Minimum number of points in the maximization grid of [`critical_xi`].
pub const MIN_THETA_POINTS: usize = 200;

/// Budget `xi` at which `max_theta gap(theta, xi)` changes sign.
///
/// `terms_at` gives the gap terms of the family member at `theta`; they are
/// evaluated once per grid point and reused for every bisection step.
pub fn critical_xi<T: Real, F>(
    terms_at: F,
    theta: &AxisSpec,
    xi_bracket: (T, T),
    tol: T,
    dim: usize,
    scaling: EtaScaling,
) -> Result<ThresholdResult<T>>
where
    F: Fn(T) -> Result<GapTerms<T>> + Sync,
{
    if theta.count < MIN_THETA_POINTS {
        return Err(Error::Grid(format!(
            "theta grid needs at least {MIN_THETA_POINTS} points, got {}",
            theta.count
        )));
    }
    let terms: Vec<GapTerms<T>> = (0..theta.count)
        .into_par_iter()
        .map(|i| terms_at(T::lit(theta.value(i))))
        .collect::<Result<_>>()?;
    bisect_threshold(
        "xi",
        |xi| {
            let model = ErrorModel::new(xi, dim)?.with_scaling(scaling);
            Ok(terms
                .iter()
                .map(|t| t.at(&model).gap)
                .fold(T::neg_infinity(), T::max))
        },
        xi_bracket.0,
        xi_bracket.1,
        tol,
    )
}

/// [`critical_xi`] for the three-qubit GHZ family in a tripartite direction.
pub fn ghz_critical_xi<T: Real>(
    scenario: Scenario,
    theta_points: usize,
    xi_bracket: (T, T),
    tol: T,
    scaling: EtaScaling,
) -> Result<ThresholdResult<T>> {
    let theta = AxisSpec::new("theta", 0.0, std::f64::consts::FRAC_PI_2, theta_points)?;
    let terms_at = |t: T| -> Result<GapTerms<T>> {
        let rho = crate::states::ghz(t.min(T::FRAC_PI_2()))?;
        match scenario {
            Scenario::AToBC => criteria::tripartite_terms_a_to_bc(&rho),
            Scenario::BCToA => criteria::tripartite_terms_bc_to_a(&rho),
            other => Err(Error::Unsupported(format!("GHZ family has no {other} direction"))),
        }
    };
    critical_xi(terms_at, &theta, xi_bracket, tol, 2, scaling)
}

/// Largest tomography-coefficient error seen in one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffSample<T> {
    pub index: usize,
    pub max_deviation: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoeffBoundSummary<T> {
    pub d: usize,
    pub xi: T,
    pub bound: T,
    pub samples: Vec<CoeffSample<T>>,
    pub violations: usize,
    pub max_deviation: T,
}

impl<T: Real> CoeffBoundSummary<T> {
    pub const CSV_HEADER: &'static str = "d,xi,sample,max_coeff_dev,bound";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            out.push_str(&csv_line(&[
                self.d.to_string(),
                fmt17(self.xi.as_f64()),
                s.index.to_string(),
                fmt17(s.max_deviation.as_f64()),
                fmt17(self.bound.as_f64()),
            ]));
            out.push('\n');
        }
        out
    }
}

/// Draws `samples` random states and perturbed Gell-Mann bases and compares
/// the tomography coefficients of the intended and implemented observables
/// against the analytic bound.
pub fn verify_coeff_bound<T: Real>(d: usize, xi: T, samples: usize, seed: u64) -> Result<CoeffBoundSummary<T>> {
    let model = ErrorModel::new(xi, d)?;
    let basis = gell_mann_loo::<T>(d)?;
    let dims = DimensionFactorization::new(vec![d])?;
    let bound = model.coeff_bound();
    let results: Vec<CoeffSample<T>> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let sample_seed = derive_seed(seed, index as u64);
            let rho = random::density::<T, _>(&dims, &mut rng_from_seed(sample_seed))?;
            let perturbed = perturb_basis(&basis, &model, derive_seed(sample_seed, 1))?;
            let intended = tomography_coeffs(&rho, basis.operators())?;
            let implemented = tomography_coeffs(&rho, &perturbed.implemented)?;
            let max_deviation = intended
                .iter()
                .zip(&implemented)
                .map(|(r, q)| (*r - *q).abs())
                .fold(T::zero(), T::max);
            Ok(CoeffSample { index, max_deviation })
        })
        .collect::<Result<_>>()?;
    let violations = results.iter().filter(|s| s.max_deviation > bound).count();
    let max_deviation = results.iter().map(|s| s.max_deviation).fold(T::zero(), T::max);
    Ok(CoeffBoundSummary {
        d,
        xi,
        bound,
        samples: results,
        violations,
        max_deviation,
    })
}

/// Critical `p` for both directions and both bipartite bounds, per `xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdCurve {
    pub xi: Vec<f64>,
    pub weighted_a_to_b: Vec<Option<f64>>,
    pub weighted_b_to_a: Vec<Option<f64>>,
    pub trace_norm_a_to_b: Vec<Option<f64>>,
    pub trace_norm_b_to_a: Vec<Option<f64>>,
}

impl ThresholdCurve {
    pub const CSV_HEADER: &'static str = "xi,weighted_a_to_b,weighted_b_to_a,trace_norm_a_to_b,trace_norm_b_to_a";

    /// Cells with no threshold in the bracket (never steerable) are `NaN`.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| fmt17(v.unwrap_or(f64::NAN));
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for i in 0..self.xi.len() {
            out.push_str(&csv_line(&[
                fmt17(self.xi[i]),
                cell(self.weighted_a_to_b[i]),
                cell(self.weighted_b_to_a[i]),
                cell(self.trace_norm_a_to_b[i]),
                cell(self.trace_norm_b_to_a[i]),
            ]));
            out.push('\n');
        }
        out
    }
}

/// Threshold tolerance used for figure data.
pub const FIGURE_TOL: f64 = 1e-6;

/// `p*(xi)` of the asymmetric family on `xi_axis`.
pub fn threshold_curve(xi_axis: &AxisSpec, scaling: EtaScaling) -> Result<ThresholdCurve> {
    let one = |xi: f64, scenario: Scenario, bound: Bound| -> Result<Option<f64>> {
        match asymmetric_threshold::<f64>(scenario, bound, xi, scaling, FIGURE_TOL) {
            Ok(t) => Ok(Some(t.critical)),
            Err(Error::Bracketing { gap_hi, .. }) if gap_hi <= 0.0 => Ok(None),
            Err(e) => Err(e),
        }
    };
    let rows: Vec<[Option<f64>; 4]> = xi_axis
        .values()
        .into_par_iter()
        .map(|xi| {
            Ok([
                one(xi, Scenario::AToB, Bound::Weighted)?,
                one(xi, Scenario::BToA, Bound::Weighted)?,
                one(xi, Scenario::AToB, Bound::TraceNorm)?,
                one(xi, Scenario::BToA, Bound::TraceNorm)?,
            ])
        })
        .collect::<Result<_>>()?;
    Ok(ThresholdCurve {
        xi: xi_axis.values(),
        weighted_a_to_b: rows.iter().map(|r| r[0]).collect(),
        weighted_b_to_a: rows.iter().map(|r| r[1]).collect(),
        trace_norm_a_to_b: rows.iter().map(|r| r[2]).collect(),
        trace_norm_b_to_a: rows.iter().map(|r| r[3]).collect(),
    })
}

/// Upper end of every figure's `xi` axis.
pub const FIGURE_XI_MAX: f64 = 1e-4;

pub fn figure1(scaling: EtaScaling) -> Result<ThresholdCurve> {
    threshold_curve(&AxisSpec::new("xi", 0.0, FIGURE_XI_MAX, 101)?, scaling)
}

/// GHZ `A->BC` gap on a 200 x 200 `(theta, xi)` grid.
pub fn figure2(scaling: EtaScaling) -> Result<SweepGrid<f64>> {
    let mut s = SweepScenario::new(Scenario::AToBC, StateSource::Family(StateFamilySpec::Ghz { theta: 0.0 }));
    s.scaling = scaling;
    let axes = [
        AxisSpec::new("theta", 0.0, std::f64::consts::FRAC_PI_2, 200)?,
        AxisSpec::new("xi", 0.0, FIGURE_XI_MAX, 200)?,
    ];
    sweep(&s, &axes)
}

/// Local dimensions covered by the dimension-comparison figure.
pub const FIGURE3_DIMS: (usize, usize) = (2, 4);

/// `(d, xi)` sweeps: `A->B` on maximally entangled pairs, then `A->BC` and
/// `BC->A` on `d`-level GHZ states.
pub fn figure3(scaling: EtaScaling) -> Result<[SweepGrid<f64>; 3]> {
    let (lo, hi) = FIGURE3_DIMS;
    let axes = [
        AxisSpec::new("d", lo as f64, hi as f64, hi - lo + 1)?,
        AxisSpec::new("xi", 0.0, FIGURE_XI_MAX, 101)?,
    ];
    let run = |scenario: Scenario, family: StateFamilySpec| {
        let mut s = SweepScenario::new(scenario, StateSource::Family(family));
        s.scaling = scaling;
        sweep(&s, &axes)
    };
    Ok([
        run(Scenario::AToB, StateFamilySpec::MaxEntangled { d: 2 })?,
        run(Scenario::AToBC, StateFamilySpec::GhzD { d: 2 })?,
        run(Scenario::BCToA, StateFamilySpec::GhzD { d: 2 })?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_linear() {
        let r = bisect_threshold("p", |p: f64| Ok(p - 0.5), 0.0, 1.0, 1e-6).unwrap();
        assert!((r.critical - 0.5).abs() <= 1e-6);
        assert!(r.width <= 1e-6);
        assert!(r.bracket.0 <= 0.5 && 0.5 <= r.bracket.1);
        assert!(r.evaluations <= (1e6f64).log2().ceil() as usize + 2);
    }

    #[test]
    fn bisect_stays_in_bracket() {
        let mut seen = Vec::new();
        let r = bisect_threshold(
            "x",
            |x: f64| {
                seen.push(x);
                Ok(0.3 - x)
            },
            0.1,
            0.9,
            1e-9,
        )
        .unwrap();
        assert!(seen.iter().all(|x| (0.1..=0.9).contains(x)));
        assert_eq!(seen.len(), r.evaluations);
        assert!((r.critical - 0.3).abs() < 1e-9);
    }

    #[test]
    fn bisect_errors() {
        assert!(matches!(
            bisect_threshold("x", |x: f64| Ok(x + 1.0), 0.0, 1.0, 1e-3),
            Err(Error::Bracketing { .. })
        ));
        // a zero gap counts as not steerable
        assert!(matches!(
            bisect_threshold("x", |_x: f64| Ok(0.0), 0.0, 1.0, 1e-3),
            Err(Error::Bracketing { .. })
        ));
        assert!(bisect_threshold("x", |x: f64| Ok(x - 0.5), 0.0, 1.0, 0.0).is_err());
        assert!(bisect_threshold("x", |x: f64| Ok(x - 0.5), 1.0, 0.0, 1e-3).is_err());
    }

    #[test]
    fn ideal_asymmetric_thresholds() {
        let ab = asymmetric_threshold(Scenario::AToB, Bound::TraceNorm, 0.0f64, EtaScaling::Propagated, 1e-6).unwrap();
        let ba = asymmetric_threshold(Scenario::BToA, Bound::TraceNorm, 0.0f64, EtaScaling::Propagated, 1e-6).unwrap();
        assert!((ab.critical - 0.577).abs() < 5e-3, "{}", ab.critical);
        assert!((ba.critical - 0.565).abs() < 5e-3, "{}", ba.critical);
    }

    #[test]
    fn axis_parsing() {
        let a: AxisSpec = "xi:0:1e-4:11".parse().unwrap();
        assert_eq!(a.values().len(), 11);
        assert_eq!(a.value(10), 1e-4);
        assert!("xi:0:1".parse::<AxisSpec>().is_err());
        assert!("xi:1:0:5".parse::<AxisSpec>().is_err());
        assert!("xi:0:1:1".parse::<AxisSpec>().is_err());
        assert!("xi:0:one:3".parse::<AxisSpec>().is_err());
        assert_eq!(parse_axes("theta:0:1:3,xi:0:1e-4:4").unwrap().len(), 2);
        assert!(parse_axes("xi:0:1:3,xi:0:1:3").is_err());
        assert!(parse_axes("a:0:1:3,b:0:1:3,c:0:1:3").is_err());
    }

    #[test]
    fn sweep_layout_and_values() {
        let mut s = SweepScenario::new(Scenario::AToBC, StateSource::Family(StateFamilySpec::Ghz { theta: 0.0 }));
        s.scaling = EtaScaling::Unscaled;
        let axes = parse_axes("theta:0.1:1.4:4,xi:0:1e-4:3").unwrap();
        let grid = sweep(&s, &axes).unwrap();
        assert_eq!(grid.reports.len(), 12);
        for (i, r) in grid.reports.iter().enumerate() {
            let (theta, xi) = grid.coordinates(i);
            let rho = crate::states::ghz(theta).unwrap();
            let model = ErrorModel::new(xi.unwrap(), 2).unwrap().with_scaling(EtaScaling::Unscaled);
            let direct = criteria::tripartite_gap_a_to_bc(&rho, &model).unwrap();
            assert_eq!(*r, direct);
        }
        let csv = grid.to_csv();
        assert!(csv.starts_with("axis1,axis2,lhs,penalty,rhs,gap,steerable\n"));
        assert_eq!(csv.lines().count(), 13);
    }

    #[test]
    fn sweep_rejects_unknown_axes() {
        let s = SweepScenario::<f64>::new(Scenario::AToB, StateSource::Family(StateFamilySpec::Singlet));
        assert!(matches!(sweep(&s, &parse_axes("p:0.3:1:3").unwrap()), Err(Error::Grid(_))));
        let one_d = sweep(&s, &parse_axes("xi:0:1e-4:5").unwrap()).unwrap();
        assert!(one_d.to_csv().lines().nth(1).unwrap().split(',').nth(1).unwrap().is_empty());
    }

    #[test]
    fn critical_xi_contract() {
        let r = ghz_critical_xi(Scenario::AToBC, 200, (0.0, 1e-3), 1e-7, EtaScaling::Unscaled).unwrap();
        assert!(r.width <= 1e-7);
        let never = |_t: f64| {
            Ok(GapTerms {
                scenario: Scenario::AToBC,
                lhs: 0.0,
                left: 1.0,
                right: 1.0,
                penalty_coeff: 1.0,
                inflation_coeff: 1.0,
            })
        };
        let theta = AxisSpec::new("theta", 0.0, 1.0, 200).unwrap();
        assert!(matches!(
            critical_xi(never, &theta, (0.0, 1e-3), 1e-7, 2, EtaScaling::Propagated),
            Err(Error::Bracketing { .. })
        ));
        let coarse = AxisSpec::new("theta", 0.0, 1.0, 50).unwrap();
        assert!(matches!(
            critical_xi(never, &coarse, (0.0, 1e-3), 1e-7, 2, EtaScaling::Propagated),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn coeff_bound_small_run() {
        let s = verify_coeff_bound::<f64>(2, 1e-5, 200, 1).unwrap();
        assert_eq!(s.violations, 0);
        assert!((s.bound - 0.0126592).abs() < 1e-7);
        assert_eq!(s.samples.len(), 200);
        let zero = verify_coeff_bound::<f64>(3, 0.0, 20, 1).unwrap();
        assert_eq!(zero.max_deviation, 0.0);
        let empty = verify_coeff_bound::<f64>(2, 1e-5, 0, 1).unwrap();
        assert_eq!(empty.to_csv(), "d,xi,sample,max_coeff_dev,bound\n");
        assert_eq!(empty.violations, 0);
    }

    #[test]
    fn threshold_json() {
        let r = bisect_threshold("p", |p: f64| Ok(p - 0.5), 0.0, 1.0, 1e-3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["parameter"], "p");
        assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
    }
}
