//! Growth series and their polynomial degrees.
//!
//! Everything here is exact except the final least-squares fit: balls are
//! enumerated breadth-first with exact arithmetic, the counting series are
//! integer sequences, and only `slope_fit` moves to floating point — fitting
//! `log(count)` against `log(r)` over a tail window and comparing the slope
//! with the degree predicted from the coset ranks.

use crate::group::{GroupElement, VAGroupData};
use crate::tc::{ClassCanonicalForm, TcError, TwistedConjugacy};
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

/// Default cap on the number of distinct elements a breadth-first
/// enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrowthError {
    #[error("generating set is empty")]
    EmptyGeneratingSet,
    #[error("ball enumeration exceeded the budget of {budget} elements")]
    ResourceGuard { budget: u64 },
    #[error("slope window [{lo}, {hi}] selects {points} points, need at least 3")]
    WindowTooSmall { lo: u64, hi: u64, points: usize },
    #[error("slope window must start at r >= 1")]
    WindowAtZero,
    #[error("count at r = {r} is zero, log-log fit undefined")]
    ZeroCount { r: u64 },
    #[error(transparent)]
    Quotient(#[from] TcError),
}

/// A symmetrized generating set: inverses added, duplicates and the identity
/// removed, elements sorted. Word length with respect to `S` equals word
/// length with respect to the symmetrization.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    elements: Vec<GroupElement>,
}

impl GeneratingSet {
    pub fn new(group: &VAGroupData, elements: &[GroupElement]) -> Result<Self, GrowthError> {
        let identity = group.identity();
        let mut sym: Vec<GroupElement> = Vec::new();
        for g in elements {
            for h in [g.clone(), group.inverse(g)] {
                if h != identity && !sym.contains(&h) {
                    sym.push(h);
                }
            }
        }
        if sym.is_empty() {
            return Err(GrowthError::EmptyGeneratingSet);
        }
        sym.sort_by_key(|g| g.sort_key());
        Ok(GeneratingSet { elements: sym })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }
}

/// The ball of a given radius, stratified into spheres: `layers[r]` holds
/// the elements of word length exactly `r`, each layer sorted.
#[derive(Debug, Clone)]
pub struct BallEnumeration {
    radius: u64,
    layers: Vec<Vec<GroupElement>>,
}

impl BallEnumeration {
    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn layers(&self) -> &[Vec<GroupElement>] {
        &self.layers
    }

    /// Elements of word length exactly `r` (empty once the group is
    /// exhausted).
    pub fn sphere(&self, r: u64) -> &[GroupElement] {
        self.layers.get(r as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total(&self) -> u64 {
        self.layers.iter().map(|l| l.len() as u64).sum()
    }
}

/// Breadth-first enumeration of the ball of radius `r_max`, refusing to
/// visit more than `budget` distinct elements.
pub fn bfs_ball(
    group: &VAGroupData,
    gens: &GeneratingSet,
    r_max: u64,
    budget: u64,
) -> Result<BallEnumeration, GrowthError> {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(group.identity());
    let mut layers = vec![vec![group.identity()]];
    for r in 1..=r_max {
        let mut next: Vec<GroupElement> = Vec::new();
        for g in &layers[(r - 1) as usize] {
            for s in gens.elements() {
                let h = group.multiply(g, s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        if seen.len() as u64 > budget {
            return Err(GrowthError::ResourceGuard { budget });
        }
        if next.is_empty() {
            break;
        }
        next.sort_by_key(|g| g.sort_key());
        layers.push(next);
    }
    Ok(BallEnumeration { radius: r_max, layers })
}

/// Which integer sequence a [`GrowthSeries`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `beta(r)`: elements of word length at most `r`.
    Ball,
    /// `f_R(r)`: twisted classes meeting the ball of radius `r`.
    TwistedClasses,
    /// class series: elements of one fixed class in the ball of radius `r`.
    Class,
    /// `f_Q(k)`: Reidemeister number of the quotient `G / (kZ)^n`.
    Quotient,
}

/// An integer counting sequence, as `(argument, count)` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub kind: SeriesKind,
    pub points: Vec<(u64, u64)>,
}

/// `beta(r)` for `r = 0..=radius`: cumulative layer sizes.
pub fn beta_series(ball: &BallEnumeration) -> GrowthSeries {
    let mut points = Vec::new();
    let mut acc = 0u64;
    for r in 0..=ball.radius() {
        acc += ball.sphere(r).len() as u64;
        points.push((r, acc));
    }
    GrowthSeries { kind: SeriesKind::Ball, points }
}

/// `f_R(r)`: the number of distinct twisted classes meeting the ball of
/// radius `r`, counted by canonicalizing every ball element.
pub fn fr_series(tc: &TwistedConjugacy, ball: &BallEnumeration) -> GrowthSeries {
    let mut forms: HashSet<ClassCanonicalForm> = HashSet::new();
    let mut points = Vec::new();
    for r in 0..=ball.radius() {
        for g in ball.sphere(r) {
            forms.insert(tc.canonical_form(g));
        }
        points.push((r, forms.len() as u64));
    }
    GrowthSeries { kind: SeriesKind::TwistedClasses, points }
}

/// The class series of `g0`: how many elements of the class of `g0` lie in
/// the ball of radius `r`.
pub fn class_series(
    tc: &TwistedConjugacy,
    ball: &BallEnumeration,
    g0: &GroupElement,
) -> GrowthSeries {
    let target = tc.canonical_form(g0);
    let mut points = Vec::new();
    let mut acc = 0u64;
    for r in 0..=ball.radius() {
        acc += ball.sphere(r).iter().filter(|g| tc.canonical_form(g) == target).count() as u64;
        points.push((r, acc));
    }
    GrowthSeries { kind: SeriesKind::Class, points }
}

/// `f_Q(k)` for `k = 1..=k_max`. The resource guard is checked for `k_max`
/// up front, so an oversized sweep is refused before any work happens.
pub fn quotient_series(tc: &TwistedConjugacy, k_max: u64) -> Result<GrowthSeries, GrowthError> {
    if k_max >= 1 {
        tc.quotient_guard(k_max)?;
    }
    let mut points = Vec::new();
    for k in 1..=k_max {
        points.push((k, tc.quotient_reidemeister(k)?));
    }
    Ok(GrowthSeries { kind: SeriesKind::Quotient, points })
}

/// Result of comparing a counting series against a predicted polynomial
/// degree over a window of arguments.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeReport {
    pub fitted_slope: f64,
    pub predicted_degree: usize,
    pub window: (u64, u64),
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

/// Least-squares fit of `log(count)` against `log(r)` over the window
/// `lo ..= hi`. For predicted degree zero the verdict instead checks that
/// the last three window counts are equal (eventual constancy); otherwise
/// the verdict is `|slope - predicted| <= tolerance`.
pub fn slope_fit(
    series: &GrowthSeries,
    window: (u64, u64),
    predicted_degree: usize,
    tolerance: f64,
) -> Result<SlopeReport, GrowthError> {
    let (lo, hi) = window;
    if lo < 1 {
        return Err(GrowthError::WindowAtZero);
    }
    let points: Vec<(u64, u64)> =
        series.points.iter().copied().filter(|&(r, _)| lo <= r && r <= hi).collect();
    if points.len() < 3 {
        return Err(GrowthError::WindowTooSmall { lo, hi, points: points.len() });
    }
    if let Some(&(r, _)) = points.iter().find(|&&(_, c)| c == 0) {
        return Err(GrowthError::ZeroCount { r });
    }
    let logs: Vec<(f64, f64)> =
        points.iter().map(|&(r, c)| ((r as f64).ln(), (c as f64).ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = (logs
        .iter()
        .map(|&(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let verdict = if predicted_degree == 0 {
        let tail: Vec<u64> = points.iter().rev().take(3).map(|&(_, c)| c).collect();
        tail.windows(2).all(|w| w[0] == w[1])
    } else {
        (slope - predicted_degree as f64).abs() <= tolerance
    };
    Ok(SlopeReport { fitted_slope: slope, predicted_degree, window, residual, tolerance, verdict })
}

/// Outcome of the generation semi-decision: `Verified` means every standard
/// generator was reached from `S` within the budget, so `<S> = G`; `Unknown`
/// means the search was exhausted or the budget ran out first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationCheck {
    Verified,
    Unknown,
}

/// Semi-decides whether `S` generates the group: breadth-first search from
/// the identity until all standard generators appear. Failure to find them
/// within the budget proves nothing, hence `Unknown`.
pub fn check_generates(
    group: &VAGroupData,
    gens: &GeneratingSet,
    budget: u64,
) -> Result<GenerationCheck, GrowthError> {
    let mut targets: HashSet<GroupElement> = group.standard_generators().into_iter().collect();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut frontier = vec![group.identity()];
    seen.insert(group.identity());
    targets.remove(&group.identity());
    while !frontier.is_empty() && !targets.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens.elements() {
                let h = group.multiply(g, s);
                if seen.insert(h.clone()) {
                    targets.remove(&h);
                    next.push(h);
                }
            }
        }
        if seen.len() as u64 > budget {
            return Ok(GenerationCheck::Unknown);
        }
        frontier = next;
    }
    Ok(if targets.is_empty() { GenerationCheck::Verified } else { GenerationCheck::Unknown })
}
