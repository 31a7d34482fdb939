//! Følner pairs, nets of functions on `X × G`, and the a.i.c.m. defect functional.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::action::{Point, TransformationGroup, Window};
use crate::error::{domain, Error, Result};
use crate::group::{Element, Group};
use crate::measure::{haar_integral, haar_l1_distance, translate_left, FinFn};
use crate::rational::{max_of, one, zero, Rational};

/// A finite region of `X × G` with positive `μ × λ_G` mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoelnerPair {
    region: BTreeSet<(Point, Element)>,
    mass: Rational,
}

impl FoelnerPair {
    pub fn new(t: &TransformationGroup, region: impl IntoIterator<Item = (Point, Element)>) -> Result<Self> {
        let region: BTreeSet<_> = region.into_iter().collect();
        let mut mass = zero();
        for (x, g) in &region {
            if !t.space().contains(t.group(), x) {
                return domain(format!("{x} is outside {}", t.space().name()));
            }
            if !t.group().contains(g) {
                return domain(format!("{g} is not an element of {}", t.group().name()));
            }
            mass += t.measure(x) * t.group().haar_weight(g);
        }
        if !mass.is_positive() {
            return domain("Følner pair must have positive mass");
        }
        Ok(FoelnerPair { region, mass })
    }

    /// The product region `A × B`.
    pub fn product(
        t: &TransformationGroup,
        a: impl IntoIterator<Item = Point>,
        b: impl IntoIterator<Item = Element>,
    ) -> Result<Self> {
        let b: Vec<Element> = b.into_iter().collect();
        FoelnerPair::new(t, a.into_iter().flat_map(|x| b.iter().map(move |g| (x.clone(), g.clone()))))
    }

    pub fn region(&self) -> &BTreeSet<(Point, Element)> {
        &self.region
    }

    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    /// `W_x = {t : (x, t) ∈ W}`.
    pub fn section(&self, x: &Point) -> BTreeSet<Element> {
        self.region.iter().filter(|(y, _)| y == x).map(|(_, g)| g.clone()).collect()
    }

    /// The points among `points` whose section is empty.
    pub fn empty_sections<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> Vec<Point> {
        let occupied: BTreeSet<&Point> = self.region.iter().map(|(x, _)| x).collect();
        points.into_iter().filter(|x| !occupied.contains(x)).cloned().collect()
    }
}

/// `μ × λ_G(s·W △ W) / μ × λ_G(W)` under `s·(x, t) = (s·x, st)`.
pub fn foelner_deficit(w: &FoelnerPair, s: &Element, t: &TransformationGroup) -> Result<Rational> {
    let moved: BTreeSet<(Point, Element)> = w
        .region
        .iter()
        .map(|(x, g)| Ok((t.act_left(s, x)?, t.group().multiply(s, g)?)))
        .collect::<Result<_>>()?;
    Ok(symmetric_difference_mass(t, &moved, &w.region) / &w.mass)
}

pub(crate) fn symmetric_difference_mass(
    t: &TransformationGroup,
    a: &BTreeSet<(Point, Element)>,
    b: &BTreeSet<(Point, Element)>,
) -> Rational {
    a.symmetric_difference(b).fold(zero(), |acc, (x, g)| acc + t.measure(x) * t.group().haar_weight(g))
}

pub type SectionRule = Arc<dyn Fn(&Point) -> FinFn<Element> + Send + Sync>;

/// How a net stage assigns `f^x` to points without an explicit section.
#[derive(Clone)]
pub enum Fallback {
    Zero,
    Constant(FinFn<Element>),
    /// Computed on demand; the rule must return nonnegative functions.
    Rule(SectionRule),
}

impl fmt::Debug for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fallback::Zero => write!(f, "Zero"),
            Fallback::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Fallback::Rule(_) => write!(f, "Rule(..)"),
        }
    }
}

/// One stage of a net: a finitely supported nonnegative function on `X × G`,
/// addressed as `f^x(t)`.
#[derive(Clone, Debug)]
pub struct NetFunction {
    stage: usize,
    sections: BTreeMap<Point, FinFn<Element>>,
    fallback: Fallback,
}

impl NetFunction {
    pub fn new(stage: usize, sections: BTreeMap<Point, FinFn<Element>>) -> Result<Self> {
        if sections.values().any(|f| !f.is_nonnegative()) {
            return domain("net functions must be nonnegative");
        }
        Ok(NetFunction { stage, sections, fallback: Fallback::Zero })
    }

    /// The x-independent stage `f^x = f`.
    pub fn constant(stage: usize, f: FinFn<Element>) -> Result<Self> {
        if !f.is_nonnegative() {
            return domain("net functions must be nonnegative");
        }
        Ok(NetFunction { stage, sections: BTreeMap::new(), fallback: Fallback::Constant(f) })
    }

    pub fn from_rule(stage: usize, rule: impl Fn(&Point) -> FinFn<Element> + Send + Sync + 'static) -> Self {
        NetFunction { stage, sections: BTreeMap::new(), fallback: Fallback::Rule(Arc::new(rule)) }
    }

    pub fn with_fallback(mut self, fallback: Fallback) -> Result<Self> {
        if let Fallback::Constant(f) = &fallback {
            if !f.is_nonnegative() {
                return domain("net functions must be nonnegative");
            }
        }
        self.fallback = fallback;
        Ok(self)
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn explicit_sections(&self) -> &BTreeMap<Point, FinFn<Element>> {
        &self.sections
    }

    pub fn fallback(&self) -> &Fallback {
        &self.fallback
    }

    /// `f^x` as a function on `G`.
    pub fn section(&self, x: &Point) -> Cow<'_, FinFn<Element>> {
        if let Some(f) = self.sections.get(x) {
            return Cow::Borrowed(f);
        }
        match &self.fallback {
            Fallback::Zero => Cow::Owned(FinFn::new()),
            Fallback::Constant(f) => Cow::Borrowed(f),
            Fallback::Rule(rule) => Cow::Owned(rule(x)),
        }
    }

    /// `f^x(t)`.
    pub fn value(&self, x: &Point, t: &Element) -> Rational {
        self.section(x).get(t)
    }

    /// Applies `op` to every section, explicit or computed.
    pub fn map_sections(
        &self,
        stage: usize,
        op: impl Fn(&Point, &FinFn<Element>) -> FinFn<Element> + Send + Sync + 'static,
    ) -> Result<NetFunction> {
        let op = Arc::new(op);
        let sections = self.sections.iter().map(|(x, f)| (x.clone(), op(x, f))).collect();
        let fallback = match &self.fallback {
            Fallback::Zero => {
                let op = op.clone();
                Fallback::Rule(Arc::new(move |x: &Point| op(x, &FinFn::new())))
            }
            Fallback::Constant(f) => {
                let f = f.clone();
                let op = op.clone();
                Fallback::Rule(Arc::new(move |x: &Point| op(x, &f)))
            }
            Fallback::Rule(rule) => {
                let rule = rule.clone();
                let op = op.clone();
                Fallback::Rule(Arc::new(move |x: &Point| op(x, &rule(x))))
            }
        };
        NetFunction::new(stage, sections)?.with_fallback(fallback)
    }
}

/// The net stage of a Følner pair: `f^x(t) = μ(W^t) / μ × λ_G(W)` for every `x`,
/// where `W^t = {x : (x, t) ∈ W}`.
///
/// For a product region `A × B` this is `χ_B / λ_G(B)`. The profile does not
/// depend on `x`, so every section integrates to 1.
pub fn indicator_net(w: &FoelnerPair, t: &TransformationGroup, stage: usize) -> Result<NetFunction> {
    let mut profile = FinFn::new();
    for (x, g) in &w.region {
        profile.add_at(g.clone(), &(t.measure(x) / &w.mass));
    }
    NetFunction::constant(stage, profile)
}

/// `f = χ_B / λ_G(B)`.
pub fn uniform_density(group: &Group, set: impl IntoIterator<Item = Element>) -> Result<FinFn<Element>> {
    let chi = FinFn::indicator(set);
    let mass = haar_integral(group, &chi);
    if mass.is_zero() {
        return domain("uniform density needs a nonempty set");
    }
    Ok(chi.scaled(&mass.recip()))
}

/// `|∫_G f^x dλ_G − 1|`.
pub fn normalization_defect_at(f: &NetFunction, t: &TransformationGroup, x: &Point) -> Rational {
    (haar_integral(t.group(), &f.section(x)) - one()).abs()
}

/// `∫_G |f^{s·x}(st) − f^x(t)| dλ_G(t)`.
pub fn aicm_defect_at(f: &NetFunction, t: &TransformationGroup, x: &Point, s: &Element) -> Result<Rational> {
    let g = t.group();
    let sx = t.act_left(s, x)?;
    let pulled = translate_left(g, &g.inverse(s)?, &f.section(&sx))?;
    Ok(haar_l1_distance(g, &pulled, &f.section(x)))
}

/// `(max_x |∫f^x − 1|, max_{(x,s)} ∫|f^{sx}(st) − f^x(t)|)` over the window.
pub fn aicm_defect(f: &NetFunction, k: &Window, t: &TransformationGroup) -> Result<(Rational, Rational)> {
    let rows = aicm_rows(f, k, t)?;
    Ok(row_maxima(&rows))
}

fn aicm_rows(f: &NetFunction, k: &Window, t: &TransformationGroup) -> Result<Vec<DefectRow>> {
    let mut rows = Vec::new();
    for x in k.space_part() {
        let norm = normalization_defect_at(f, t, x);
        for s in k.group_part() {
            rows.push(DefectRow {
                stage: f.stage(),
                point: x.clone(),
                element: Some(s.clone()),
                norm: Some(norm.clone()),
                inv: aicm_defect_at(f, t, x, s)?,
            });
        }
    }
    Ok(rows)
}

/// One defect evaluation at a window element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRow {
    pub stage: usize,
    pub point: Point,
    pub element: Option<Element>,
    pub norm: Option<Rational>,
    pub inv: Rational,
}

/// Per-stage maxima over the window against the stage's ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSummary {
    pub stage: usize,
    pub norm: Option<Rational>,
    pub inv: Rational,
    pub epsilon: Rational,
    pub below_epsilon: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    NonIncreasing,
    NotMonotone,
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Decreasing => "decreasing",
            Trend::NonIncreasing => "nonincreasing",
            Trend::NotMonotone => "not-monotone",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Certified => "epsilon-certified",
            Verdict::NotCertified => "not-certified",
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Certified
    }
}

/// Per-stage, per-window defects with a trend summary and a schedule verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficitReport {
    pub rows: Vec<DefectRow>,
    pub stages: Vec<StageSummary>,
    pub trend: Trend,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl DeficitReport {
    /// Summarizes stage rows; the verdict is decided by the final stage against the final ε.
    pub fn assemble(stage_rows: Vec<(usize, Vec<DefectRow>)>, epsilon: &[Rational]) -> Result<Self> {
        check_schedule(epsilon)?;
        if stage_rows.is_empty() {
            return domain("net must have at least one stage");
        }
        let mut stages = Vec::new();
        let mut rows = Vec::new();
        for (i, (stage, stage_rows)) in stage_rows.into_iter().enumerate() {
            let eps = epsilon[i.min(epsilon.len() - 1)].clone();
            let (norm, inv) = row_maxima(&stage_rows);
            let has_norm = stage_rows.iter().any(|r| r.norm.is_some());
            let below = inv < eps && (!has_norm || norm < eps);
            stages.push(StageSummary { stage, norm: has_norm.then_some(norm), inv, epsilon: eps, below_epsilon: below });
            rows.extend(stage_rows);
        }
        let final_stage = stages.last().expect("nonempty");
        let final_eps = epsilon.last().expect("nonempty");
        let certified = final_stage.inv < *final_eps && final_stage.norm.as_ref().is_none_or(|n| n < final_eps);
        let verdict = if certified { Verdict::Certified } else { Verdict::NotCertified };
        let trend = trend_of(stages.iter().map(|s| &s.inv));
        Ok(DeficitReport { rows, stages, trend, verdict, notes: Vec::new() })
    }

    pub fn final_inv(&self) -> &Rational {
        &self.stages.last().expect("nonempty").inv
    }
}

/// Checks that an ε schedule is nonempty, positive and nonincreasing.
pub fn check_schedule(epsilon: &[Rational]) -> Result<()> {
    if epsilon.is_empty() {
        return Err(Error::Configuration("epsilon schedule must be nonempty".into()));
    }
    if epsilon.iter().any(|e| !e.is_positive()) {
        return Err(Error::Configuration("epsilon schedule entries must be positive".into()));
    }
    if epsilon.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Configuration("epsilon schedule must be nonincreasing".into()));
    }
    Ok(())
}

pub(crate) fn row_maxima(rows: &[DefectRow]) -> (Rational, Rational) {
    (max_of(rows.iter().filter_map(|r| r.norm.as_ref())), max_of(rows.iter().map(|r| &r.inv)))
}

fn trend_of<'a>(values: impl Iterator<Item = &'a Rational>) -> Trend {
    let v: Vec<_> = values.collect();
    if v.windows(2).all(|w| w[1] < w[0]) {
        Trend::Decreasing
    } else if v.windows(2).all(|w| w[1] <= w[0]) {
        Trend::NonIncreasing
    } else {
        Trend::NotMonotone
    }
}

/// Evaluates `stage` on every net stage in parallel, keeping stage order.
pub(crate) fn per_stage<T: Sync>(
    net: &[T],
    stage: impl Fn(&T) -> Result<(usize, Vec<DefectRow>)> + Sync + Send,
) -> Result<Vec<(usize, Vec<DefectRow>)>> {
    net.par_iter().map(stage).collect()
}

/// a.i.c.m. defects for every stage of the net, certified against the ε schedule.
pub fn verify_aicm(
    net: &[NetFunction],
    k: &Window,
    epsilon: &[Rational],
    t: &TransformationGroup,
) -> Result<DeficitReport> {
    check_schedule(epsilon)?;
    if net.is_empty() {
        return domain("net must have at least one stage");
    }
    let stages = per_stage(net, |f| Ok((f.stage(), aicm_rows(f, k, t)?)))?;
    DeficitReport::assemble(stages, epsilon)
}

/// `f_n^x = (f^x + bump/n) / (∫f^x + 1/n)`.
pub fn regularize(f: &NetFunction, group: &Group, bump: &FinFn<Element>, n: u64) -> Result<NetFunction> {
    if n == 0 {
        return domain("regularization index must be positive");
    }
    if !bump.is_nonnegative() || haar_integral(group, bump) != Rational::one() {
        return domain("bump must be a nonnegative function of mass 1");
    }
    let inv_n = Rational::new(1.into(), n.into());
    let scaled_bump = bump.scaled(&inv_n);
    let group = group.clone();
    f.map_sections(f.stage(), move |_, fx| {
        let denom = haar_integral(&group, fx) + &inv_n;
        fx.plus(&scaled_bump).scaled(&denom.recip())
    })
}

/// Constant-in-`x` stages `χ_{B_r} / λ(B_r)` for the given radii of the standard ball.
pub fn ball_net(group: &Group, radii: impl IntoIterator<Item = usize>) -> Result<Vec<NetFunction>> {
    radii
        .into_iter()
        .enumerate()
        .map(|(i, r)| NetFunction::constant(i + 1, uniform_density(group, crate::group::standard_ball(group, r))?))
        .collect()
}
