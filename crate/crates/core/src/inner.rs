//! Inner amenability of a transformation group carrying both a left and a
//! right action: mean and function defects, smoothing, boundary means, the
//! square-root net, rank-one kernels and inner Følner pairs.
//!
//! Pushforward conventions: `(s·μ)(E) = μ(s⁻¹E)` and `(μ·s)(E) = μ(Es⁻¹)`.
//! Floating point appears only in [`SqrtNetFunction`] and the functions that
//! consume it; the tolerance used by callers is [`TOLERANCE`].

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_traits::One;

use crate::action::{Point, SpaceKind, TransformationGroup, Window};
use crate::error::{domain, Error, Result};
use crate::foelner::{
    normalization_defect_at, per_stage, symmetric_difference_mass, DefectRow, DeficitReport, FoelnerPair,
    NetFunction,
};
use crate::group::{Element, Group};
use crate::measure::{
    convolve, haar_integral, haar_l1_distance, l1_distance, push_left, push_right, translate_left, translate_right,
    FinFn, ProbMeasure,
};
use crate::rational::{max_of, to_f64, Rational};

/// Absolute tolerance for floating-point comparisons.
pub const TOLERANCE: f64 = 1e-9;

fn require_right(t: &TransformationGroup) -> Result<()> {
    if t.has_right_action() {
        Ok(())
    } else {
        Err(Error::Configuration("inner amenability needs a right action".into()))
    }
}

/// One stage of `x ↦ m^x ∈ Prob(G)`.
#[derive(Clone, Debug)]
pub struct MeanNet {
    weights: NetFunction,
}

impl MeanNet {
    /// Explicit or constant sections are checked to have mass one; rule-based
    /// sections are checked when evaluated.
    pub fn new(weights: NetFunction) -> Result<Self> {
        let bad = weights.explicit_sections().values().any(|m| !m.total().is_one())
            || matches!(weights.fallback(), crate::foelner::Fallback::Constant(m) if !m.total().is_one());
        if bad {
            return domain("every mean must have mass exactly 1");
        }
        Ok(MeanNet { weights })
    }

    pub fn constant(stage: usize, m: ProbMeasure<Element>) -> Self {
        MeanNet { weights: NetFunction::constant(stage, m.into_weights()).expect("measures are nonnegative") }
    }

    pub fn stage(&self) -> usize {
        self.weights.stage()
    }

    /// `m^x`.
    pub fn mean(&self, x: &Point) -> Result<Cow<'_, FinFn<Element>>> {
        let m = self.weights.section(x);
        if !m.total().is_one() {
            return domain(format!("mean at {x} has mass {}", m.total()));
        }
        Ok(m)
    }

    pub fn weights(&self) -> &NetFunction {
        &self.weights
    }
}

/// `‖m^{s·x}·s⁻¹ − s⁻¹·m^{x·s}‖₁`.
pub fn inner_mean_defect_at(m: &MeanNet, t: &TransformationGroup, x: &Point, s: &Element) -> Result<Rational> {
    require_right(t)?;
    let g = t.group();
    let s_inv = g.inverse(s)?;
    let left = push_right(g, &*m.mean(&t.act_left(s, x)?)?, &s_inv)?;
    let right = push_left(g, &s_inv, &*m.mean(&t.act_right(x, s)?)?)?;
    Ok(l1_distance(left, right))
}

/// Maximum of [`inner_mean_defect_at`] over the window.
pub fn inner_mean_defect(m: &MeanNet, k: &Window, t: &TransformationGroup) -> Result<Rational> {
    require_right(t)?;
    let values: Vec<Rational> =
        k.pairs().map(|(x, s)| inner_mean_defect_at(m, t, x, s)).collect::<Result<_>>()?;
    Ok(max_of(&values))
}

/// `∫_G |f^{s·x}(s⁻¹t) − f^{x·s}(ts⁻¹)| dλ_G(t)`.
pub fn inner_fn_defect_at(f: &NetFunction, t: &TransformationGroup, x: &Point, s: &Element) -> Result<Rational> {
    require_right(t)?;
    let g = t.group();
    let left = translate_left(g, s, &f.section(&t.act_left(s, x)?))?;
    let right = translate_right(g, &f.section(&t.act_right(x, s)?), &g.inverse(s)?)?;
    Ok(haar_l1_distance(g, &left, &right))
}

fn inner_rows(f: &NetFunction, k: &Window, t: &TransformationGroup) -> Result<Vec<DefectRow>> {
    let mut rows = Vec::new();
    for x in k.space_part() {
        let norm = normalization_defect_at(f, t, x);
        for s in k.group_part() {
            rows.push(DefectRow {
                stage: f.stage(),
                point: x.clone(),
                element: Some(s.clone()),
                norm: Some(norm.clone()),
                inv: inner_fn_defect_at(f, t, x, s)?,
            });
        }
    }
    Ok(rows)
}

/// `(max_x |∫f^x − 1|, max_{(x,s)} ∫|f^{sx}(s⁻¹t) − f^{xs}(ts⁻¹)|)` over the window.
pub fn inner_fn_defect(f: &NetFunction, k: &Window, t: &TransformationGroup) -> Result<(Rational, Rational)> {
    require_right(t)?;
    Ok(crate::foelner::row_maxima(&inner_rows(f, k, t)?))
}

/// Inner function defects for every stage, certified against the ε schedule.
pub fn verify_inner(
    net: &[NetFunction],
    k: &Window,
    epsilon: &[Rational],
    t: &TransformationGroup,
) -> Result<DeficitReport> {
    require_right(t)?;
    crate::foelner::check_schedule(epsilon)?;
    let stages = per_stage(net, |f| Ok((f.stage(), inner_rows(f, k, t)?)))?;
    DeficitReport::assemble(stages, epsilon)
}

fn check_bump(bump: &FinFn<Element>) -> Result<()> {
    if !bump.is_nonnegative() || !bump.total().is_one() {
        return domain("bump must be a nonnegative function of mass 1");
    }
    Ok(())
}

/// `f^x(s) = ∫_G bump(t⁻¹s) dm^x(t)`, i.e. `f^x = m^x * bump`.
pub fn smooth_mean(m: &MeanNet, bump: &FinFn<Element>, group: &Group) -> Result<NetFunction> {
    check_bump(bump)?;
    let group = group.clone();
    let bump = bump.clone();
    m.weights.map_sections(m.stage(), move |_, mx| convolve(&group, mx, &bump).expect("points of one group"))
}

/// `‖δ_s * f − f * δ_s‖₁`.
pub fn group_inner_defect(f: &FinFn<Element>, s: &Element, group: &Group) -> Result<Rational> {
    let delta = FinFn::point_mass(s.clone());
    Ok(l1_distance(convolve(group, &delta, f)?, convolve(group, f, &delta)?))
}

/// The smoothing estimate at `(x, s)`: returns the inner function defect of
/// `m * bump`, the inner mean defect of `m`, and the latter plus the bump's own
/// commutator `‖δ_s * bump − bump * δ_s‖₁`.
///
/// The first value is always at most the third. It can exceed the second when
/// the bump does not commute with `δ_s`.
pub fn smoothing_bound(
    m: &MeanNet,
    bump: &FinFn<Element>,
    t: &TransformationGroup,
    x: &Point,
    s: &Element,
) -> Result<(Rational, Rational, Rational)> {
    let f = smooth_mean(m, bump, t.group())?;
    let lhs = inner_fn_defect_at(&f, t, x, s)?;
    let mean = inner_mean_defect_at(m, t, x, s)?;
    let corrected = &mean + group_inner_defect(bump, s, t.group())?;
    Ok((lhs, mean, corrected))
}

/// `m^x = f^x·λ_G`, the mean with density `f^x`.
pub fn mean_from_density(f: &NetFunction, group: &Group) -> Result<MeanNet> {
    let group = group.clone();
    let weights = if group.has_counting_weight() {
        f.clone()
    } else {
        f.map_sections(f.stage(), move |_, fx| fx.map_values(|t, v| v * group.haar_weight(t)))?
    };
    MeanNet::new(weights)
}

/// The x-constant mean `m^x = f·λ_G` built from a group-level density of mass 1.
pub fn lift_group_inner_mean(stage: usize, f: &FinFn<Element>, group: &Group) -> Result<MeanNet> {
    if !f.is_nonnegative() || !haar_integral(group, f).is_one() {
        return domain("group density must be nonnegative with mass 1");
    }
    mean_from_density(&NetFunction::constant(stage, f.clone())?, group)
}

/// `m_n^ω = (1/n) Σ_{k=1..n} δ_{ω_1⋯ω_k}`.
pub fn boundary_mean(omega: &Point, n: usize, depth: usize) -> Result<ProbMeasure<Element>> {
    let Point::Ray(ray) = omega else { return domain(format!("{omega} is not a boundary point")) };
    if n == 0 {
        return domain("boundary mean needs n >= 1");
    }
    if n > depth {
        return domain(format!("boundary depth {depth} is smaller than n = {n}"));
    }
    ProbMeasure::uniform((1..=n).map(|k| Element::Word(ray.prefix(k))))
}

/// The net stage `ω ↦ m_n^ω` on a boundary space.
pub fn boundary_mean_net(t: &TransformationGroup, n: usize) -> Result<NetFunction> {
    let SpaceKind::Boundary { depth, .. } = *t.space().kind() else {
        return Err(Error::Configuration("boundary means need a boundary space".into()));
    };
    if n == 0 || n > depth {
        return domain(format!("boundary mean index {n} must lie in 1..={depth}"));
    }
    Ok(NetFunction::from_rule(n, move |x| {
        boundary_mean(x, n, depth).map(ProbMeasure::into_weights).unwrap_or_default()
    }))
}

/// `‖s·m_n^ω − m_n^{s·ω}‖₁`.
pub fn boundary_mean_defect(t: &TransformationGroup, omega: &Point, s: &Element, n: usize) -> Result<Rational> {
    let depth = t.space().depth().ok_or_else(|| Error::Configuration("boundary means need a boundary space".into()))?;
    let m = boundary_mean(omega, n, depth)?;
    let moved = boundary_mean(&t.act_left(s, omega)?, n, depth)?;
    Ok(l1_distance(push_left(t.group(), s, m.weights())?, moved))
}

#[derive(Clone, Debug)]
enum SqrtRepr {
    Derived(NetFunction),
    Explicit(BTreeMap<Point, BTreeMap<Element, f64>>),
}

/// A stage `ξ^x(t) ≥ 0` of floating-point values.
#[derive(Clone, Debug)]
pub struct SqrtNetFunction {
    stage: usize,
    repr: SqrtRepr,
}

impl SqrtNetFunction {
    pub fn explicit(stage: usize, values: BTreeMap<Point, BTreeMap<Element, f64>>) -> Result<Self> {
        if values.values().flat_map(|m| m.values()).any(|v| !v.is_finite() || *v < 0.0) {
            return domain("square-root net values must be finite and nonnegative");
        }
        Ok(SqrtNetFunction { stage, repr: SqrtRepr::Explicit(values) })
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// `ξ^x` with zero entries dropped.
    pub fn section(&self, x: &Point) -> BTreeMap<Element, f64> {
        match &self.repr {
            SqrtRepr::Derived(f) => f.section(x).iter().map(|(t, v)| (t.clone(), to_f64(v).sqrt())).collect(),
            SqrtRepr::Explicit(m) => {
                m.get(x).map(|s| s.iter().filter(|(_, v)| **v != 0.0).map(|(t, v)| (t.clone(), *v)).collect())
            }
            .unwrap_or_default(),
        }
    }

    pub fn value(&self, x: &Point, t: &Element) -> f64 {
        self.section(x).get(t).copied().unwrap_or(0.0)
    }
}

/// `ξ = √f` pointwise.
pub fn sqrt_net(f: &NetFunction) -> SqrtNetFunction {
    SqrtNetFunction { stage: f.stage(), repr: SqrtRepr::Derived(f.clone()) }
}

/// `t ↦ (ξ(s·x, s⁻¹t), ξ(x·s, ts⁻¹), λ(t))` over the union of supports, in element order.
fn paired_values(
    xi: &SqrtNetFunction,
    t: &TransformationGroup,
    x: &Point,
    s: &Element,
) -> Result<Vec<(f64, f64, f64)>> {
    require_right(t)?;
    let g = t.group();
    let mut merged: BTreeMap<Element, (f64, f64)> = BTreeMap::new();
    // ξ(s·x, s⁻¹t) is read at t = su, and ξ(x·s, ts⁻¹) at t = us.
    for (u, v) in xi.section(&t.act_left(s, x)?) {
        merged.entry(g.multiply(s, &u)?).or_default().0 = v;
    }
    for (u, v) in xi.section(&t.act_right(x, s)?) {
        merged.entry(g.multiply(&u, s)?).or_default().1 = v;
    }
    Ok(merged.into_iter().map(|(e, (a, b))| (a, b, to_f64(&g.haar_weight(&e)))).collect())
}

/// `∫_G (ξ(s·x, s⁻¹t) − ξ(x·s, ts⁻¹))² dλ_G(t)`.
pub fn l2_defect_at(xi: &SqrtNetFunction, t: &TransformationGroup, x: &Point, s: &Element) -> Result<f64> {
    Ok(paired_values(xi, t, x, s)?.into_iter().map(|(a, b, w)| w * (a - b) * (a - b)).sum())
}

/// `∫_G (ξ(s·x, s⁻¹t) + ξ(x·s, ts⁻¹))² dλ_G(t)`, the Cauchy–Schwarz factor.
pub fn l2_sum_at(xi: &SqrtNetFunction, t: &TransformationGroup, x: &Point, s: &Element) -> Result<f64> {
    Ok(paired_values(xi, t, x, s)?.into_iter().map(|(a, b, w)| w * (a + b) * (a + b)).sum())
}

/// `|∫_G ξ(x, t)² dλ_G(t) − 1|`.
pub fn l2_norm_defect_at(xi: &SqrtNetFunction, group: &Group, x: &Point) -> f64 {
    let mass: f64 = xi.section(x).iter().map(|(t, v)| to_f64(&group.haar_weight(t)) * v * v).sum();
    (mass - 1.0).abs()
}

/// `(max_x |∫ξ² − 1|, max_{(x,s)} ∫(ξ(sx, s⁻¹t) − ξ(xs, ts⁻¹))²)` over the window.
pub fn l2_inner_defect(xi: &SqrtNetFunction, k: &Window, t: &TransformationGroup) -> Result<(f64, f64)> {
    require_right(t)?;
    let norm = k.space_part().iter().map(|x| l2_norm_defect_at(xi, t.group(), x)).fold(0.0, f64::max);
    let mut inv: f64 = 0.0;
    for (x, s) in k.pairs() {
        inv = inv.max(l2_defect_at(xi, t, x, s)?);
    }
    Ok((norm, inv))
}

/// The rank-one kernel `h(x, s, y, t) = ξ(x, s)·ξ(y, t)`.
#[derive(Clone, Debug)]
pub struct Kernel {
    xi: SqrtNetFunction,
}

impl Kernel {
    pub fn new(xi: SqrtNetFunction) -> Self {
        Kernel { xi }
    }

    pub fn eval(&self, x: &Point, s: &Element, y: &Point, t: &Element) -> f64 {
        self.xi.value(x, s) * self.xi.value(y, t)
    }

    /// Row-major Gram matrix over the sample.
    pub fn gram(&self, sample: &[(Point, Element)]) -> DMatrix<f64> {
        let v: Vec<f64> = sample.iter().map(|(x, t)| self.xi.value(x, t)).collect();
        DMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j])
    }
}

/// Outcome of the kernel diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelVerdict {
    /// `max_{(x,t) ∈ K} |ξ(x,t)² − 1|`.
    pub diagonal_defect: f64,
    pub diagonal_ok: bool,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub symmetric: bool,
    /// All supports are finite, so every kernel here is properly supported.
    pub finite_support: bool,
    pub sample: Vec<(Point, Element)>,
}

impl KernelVerdict {
    pub fn passed(&self) -> bool {
        self.diagonal_ok && self.psd && self.symmetric
    }
}

/// Smallest eigenvalue of a symmetric matrix; 0 for the empty matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Diagonal proximity over `K` and positive semidefiniteness over the sample.
pub fn kernel_check(xi: &SqrtNetFunction, k: &Window, epsilon: f64, sample: &[(Point, Element)]) -> KernelVerdict {
    let diagonal_defect = k
        .pairs()
        .map(|(x, t)| {
            let v = xi.value(x, t);
            (v * v - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let kernel = Kernel::new(xi.clone());
    let gram = kernel.gram(sample);
    let symmetric = (0..gram.nrows()).all(|i| (0..i).all(|j| gram[(i, j)] == gram[(j, i)]));
    let min_eig = min_eigenvalue(&gram);
    KernelVerdict {
        diagonal_defect,
        diagonal_ok: diagonal_defect <= epsilon,
        min_eigenvalue: min_eig,
        psd: min_eig >= -TOLERANCE,
        symmetric,
        finite_support: true,
        sample: sample.to_vec(),
    }
}

/// `max_{(x,t) ∈ K} |ξ(x,t)² − f(x,t)|`, the agreement of `ξ²` with its source.
pub fn square_consistency(xi: &SqrtNetFunction, f: &NetFunction, k: &Window) -> f64 {
    k.pairs().map(|(x, t)| (xi.value(x, t).powi(2) - to_f64(&f.value(x, t))).abs()).fold(0.0, f64::max)
}

/// `μ × λ_G(s·W △ W·s) / μ × λ_G(W)` with `s·(x,t) = (s·x, st)` and `(x,t)·s = (x·s, ts)`.
pub fn inner_foelner_deficit(w: &FoelnerPair, s: &Element, t: &TransformationGroup) -> Result<Rational> {
    require_right(t)?;
    let g = t.group();
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for (x, u) in w.region() {
        left.insert((t.act_left(s, x)?, g.multiply(s, u)?));
        right.insert((t.act_right(x, s)?, g.multiply(u, s)?));
    }
    Ok(symmetric_difference_mass(t, &left, &right) / w.mass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{LeftAction, Ray, RightAction, Space};
    use crate::foelner::indicator_net;
    use crate::group::{standard_ball, Letter};
    use crate::rational::{rat, zero};

    fn f2_point() -> (Group, TransformationGroup) {
        let f2 = Group::free(2);
        (f2.clone(), TransformationGroup::on_point(f2))
    }

    fn w(s: &str) -> Element {
        Element::word(s)
    }

    #[test]
    fn free_group_commutator() {
        let (f2, t) = f2_point();
        let b1 = FinFn::uniform(standard_ball(&f2, 1));
        assert_eq!(group_inner_defect(&b1, &w("a"), &f2).unwrap(), rat(4, 5));
        assert_eq!(group_inner_defect(&FinFn::point_mass(f2.identity()), &w("ab"), &f2).unwrap(), zero());
        let f = NetFunction::constant(1, b1.clone()).unwrap();
        let k = Window::new(vec![Point::Unit], vec![w("a")]).unwrap();
        assert_eq!(inner_fn_defect(&f, &k, &t).unwrap(), (zero(), rat(4, 5)));
        let m = mean_from_density(&f, &f2).unwrap();
        assert_eq!(inner_mean_defect(&m, &k, &t).unwrap(), rat(4, 5));
        let wp = FoelnerPair::product(&t, [Point::Unit], standard_ball(&f2, 1)).unwrap();
        assert_eq!(inner_foelner_deficit(&wp, &w("a"), &t).unwrap(), rat(4, 5));
        let delta = NetFunction::constant(1, FinFn::point_mass(f2.identity())).unwrap();
        assert_eq!(inner_fn_defect(&delta, &k, &t).unwrap().1, zero());
    }

    #[test]
    fn carrier_mean_defect() {
        let f2 = Group::free(2);
        let t = TransformationGroup::carrier(f2.clone());
        let m = MeanNet::constant(1, ProbMeasure::uniform(standard_ball(&f2, 1)).unwrap());
        let k = Window::new(vec![Point::Elem(w("b"))], vec![w("a")]).unwrap();
        assert_eq!(inner_mean_defect(&m, &k, &t).unwrap(), rat(4, 5));
    }

    #[test]
    fn missing_right_action() {
        let t = TransformationGroup::new(Space::finite_set(2).unwrap(), Group::integers(), LeftAction::Rotation, None)
            .unwrap();
        let m = MeanNet::constant(1, ProbMeasure::dirac(Element::int(0)));
        let k = Window::new(vec![Point::Label(0)], vec![Element::int(1)]).unwrap();
        assert!(matches!(inner_mean_defect(&m, &k, &t), Err(Error::Configuration(_))));
        let t = t.with_right(Some(RightAction::InverseLeft)).unwrap();
        assert_eq!(inner_mean_defect(&m, &k, &t).unwrap(), zero());
    }

    #[test]
    fn smoothing_examples() {
        let (f2, t) = f2_point();
        let m = MeanNet::constant(1, ProbMeasure::uniform([w("a"), w("ab")]).unwrap());
        let f = smooth_mean(&m, &FinFn::point_mass(f2.identity()), &f2).unwrap();
        assert_eq!(f.section(&Point::Unit).into_owned(), m.mean(&Point::Unit).unwrap().into_owned());
        let bump = FinFn::uniform(standard_ball(&f2, 1));
        let m = MeanNet::constant(1, ProbMeasure::dirac(w("b")));
        let f = smooth_mean(&m, &bump, &f2).unwrap();
        assert_eq!(f.section(&Point::Unit).into_owned(), translate_left(&f2, &w("b"), &bump).unwrap());
        let m = MeanNet::constant(1, ProbMeasure::dirac(f2.identity()));
        let (lhs, mean, corrected) = smoothing_bound(&m, &bump, &t, &Point::Unit, &w("a")).unwrap();
        assert_eq!((lhs.clone(), mean), (rat(4, 5), zero()));
        assert!(lhs <= corrected);
    }

    #[test]
    fn boundary_means() {
        let f2 = Group::free(2);
        let t = TransformationGroup::new(Space::boundary(2, 64).unwrap(), f2, LeftAction::Boundary, None).unwrap();
        let a_inf = Point::Ray(Ray::constant(Letter::new(0, false)));
        let m = boundary_mean(&a_inf, 2, 64).unwrap();
        assert_eq!(m.weights(), &FinFn::uniform([w("a"), w("aa")]));
        assert_eq!(boundary_mean_defect(&t, &a_inf, &w("a"), 2).unwrap(), rat(1, 1));
        assert_eq!(boundary_mean_defect(&t, &a_inf, &w("b"), 4).unwrap(), rat(1, 2));
        assert!(boundary_mean(&a_inf, 65, 64).is_err());
    }

    #[test]
    fn sqrt_and_kernel() {
        let f = NetFunction::constant(1, FinFn::from_pairs([(Element::int(0), rat(1, 4)), (Element::int(1), rat(3, 4))]))
            .unwrap();
        let xi = sqrt_net(&f);
        assert!((xi.value(&Point::Unit, &Element::int(0)) - 0.5).abs() < 1e-15);
        assert!((xi.value(&Point::Unit, &Element::int(1)) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(l2_norm_defect_at(&xi, &Group::integers(), &Point::Unit) < 1e-12);
        let one = NetFunction::constant(1, FinFn::indicator((-2..=2).map(Element::int))).unwrap();
        let k = Window::new(vec![Point::Unit], (-2..=2).map(Element::int).collect()).unwrap();
        let sample: Vec<_> = (-3..=3).map(|i| (Point::Unit, Element::int(i))).collect();
        let v = kernel_check(&sqrt_net(&one), &k, 1e-9, &sample);
        assert_eq!(v.diagonal_defect, 0.0);
        assert!(v.passed());
        assert!(v.min_eigenvalue >= -TOLERANCE);
    }

    #[test]
    fn l2_defect_on_free_group() {
        let (f2, t) = f2_point();
        let f = NetFunction::constant(1, FinFn::uniform(standard_ball(&f2, 1))).unwrap();
        let k = Window::new(vec![Point::Unit], vec![w("a")]).unwrap();
        let (norm, inv) = l2_inner_defect(&sqrt_net(&f), &k, &t).unwrap();
        assert!(norm < 1e-12);
        assert!((inv - 0.8).abs() < 1e-12);
    }

    #[test]
    fn inner_indicator_bridge() {
        let (f2, t) = f2_point();
        let wp = FoelnerPair::product(&t, [Point::Unit], standard_ball(&f2, 2)).unwrap();
        let f = indicator_net(&wp, &t, 1).unwrap();
        for s in standard_ball(&f2, 2) {
            let k = Window::new(vec![Point::Unit], vec![s.clone()]).unwrap();
            assert!(inner_fn_defect(&f, &k, &t).unwrap().1 <= inner_foelner_deficit(&wp, &s, &t).unwrap());
        }
    }

}
