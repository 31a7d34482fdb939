//! Nets for a semidirect product `G = N ⋊_τ H` acting on `X × X`: the product
//! net `e_{i,j}`, the twist `T_t`, marginalization, and the inequalities linking
//! their defects.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::action::{Point, Space, TransformationGroup, Window};
use crate::error::{domain, Error, Result};
use crate::foelner::{per_stage, verify_aicm, DefectRow, DeficitReport, NetFunction};
use crate::group::{Element, Group, SemidirectData};
use crate::measure::{haar_l1_distance, l1_distance, translate_left, FinFn};
use crate::rational::{zero, Rational};

fn data(group: &Group) -> Result<&SemidirectData> {
    group
        .semidirect_data()
        .ok_or_else(|| Error::Domain(format!("{} is not a semidirect product", group.name())))
}

#[derive(Clone, Debug)]
enum Repr {
    Factored { f: NetFunction, g: NetFunction },
    Explicit(NetFunction),
}

/// A stage `E^{(x,y)}(n, h)` of a net for `(X × X, N ⋊ H)`.
#[derive(Clone, Debug)]
pub struct ProductNetFunction {
    stage: (usize, usize),
    group: Group,
    repr: Repr,
}

impl ProductNetFunction {
    /// Wraps a net on `X × X` (points `Point::Pair(x, y)`) over `G`.
    pub fn explicit(group: &Group, stage: (usize, usize), e: NetFunction) -> Result<Self> {
        data(group)?;
        Ok(ProductNetFunction { stage, group: group.clone(), repr: Repr::Explicit(e) })
    }

    pub fn stage(&self) -> (usize, usize) {
        self.stage
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_factored(&self) -> bool {
        matches!(self.repr, Repr::Factored { .. })
    }

    /// `E^{(x,y)}` as a function on `G`.
    pub fn slice(&self, x: &Point, y: &Point) -> FinFn<Element> {
        match &self.repr {
            Repr::Factored { f, g } => {
                let sigma = &data(&self.group).expect("checked at construction").sigma;
                let fx = f.section(x);
                let gy = g.section(y);
                let mut out = FinFn::new();
                for (h, gv) in gy.iter() {
                    let w = gv / sigma.value(h);
                    for (n, fv) in fx.iter() {
                        out.add_at(Element::pair(n.clone(), h.clone()), &(fv * &w));
                    }
                }
                out
            }
            Repr::Explicit(e) => e.section(&Point::pair(x.clone(), y.clone())).into_owned(),
        }
    }

    /// The same stage as a net on `X × X`.
    pub fn to_net(&self) -> NetFunction {
        let me = Arc::new(self.clone());
        NetFunction::from_rule(self.stage.0, move |p| match p.as_pair() {
            Some((x, y)) => me.slice(x, y),
            None => FinFn::new(),
        })
    }
}

/// `e(x, y, n, h) = f(x, n)·g(y, h)·σ(h)⁻¹`.
pub fn product_net(f: &NetFunction, g: &NetFunction, group: &Group) -> Result<ProductNetFunction> {
    data(group)?;
    Ok(ProductNetFunction {
        stage: (f.stage(), g.stage()),
        group: group.clone(),
        repr: Repr::Factored { f: f.clone(), g: g.clone() },
    })
}

/// Every pair `(f_i, g_j)` of the two nets, row-major.
pub fn product_grid(fs: &[NetFunction], gs: &[NetFunction], group: &Group) -> Result<Vec<ProductNetFunction>> {
    fs.iter().flat_map(|f| gs.iter().map(move |g| product_net(f, g, group))).collect()
}

/// `T_t f(n) = f(τ_{t⁻¹}(n))·σ(t)`.
pub fn twist(f: &FinFn<Element>, t: &Element, group: &Group) -> Result<FinFn<Element>> {
    let d = data(group)?;
    if !d.acting.contains(t) {
        return domain(format!("{t} is not an element of {}", d.acting.name()));
    }
    let moved = f.map_points(|n| d.tau.apply(&d.normal, t, n))?;
    Ok(moved.scaled(&d.sigma.value(t)))
}

/// `‖T_t f − f‖₁` on `N`.
pub fn twist_defect_at(f: &FinFn<Element>, t: &Element, group: &Group) -> Result<Rational> {
    Ok(l1_distance(twist(f, t, group)?, f))
}

/// Per-stage `max_{(x,t)} ‖T_t f^x − f^x‖₁` over `K_X × K_H`.
pub fn twist_defect(
    net: &[NetFunction],
    k_h: &[Element],
    k_x: &[Point],
    group: &Group,
    epsilon: &[Rational],
) -> Result<DeficitReport> {
    data(group)?;
    if k_h.is_empty() || k_x.is_empty() {
        return domain("twist window parts must be nonempty");
    }
    let stages = per_stage(net, |f| {
        let mut rows = Vec::new();
        for x in k_x {
            for t in k_h {
                rows.push(DefectRow {
                    stage: f.stage(),
                    point: x.clone(),
                    element: Some(t.clone()),
                    norm: None,
                    inv: twist_defect_at(&f.section(x), t, group)?,
                });
            }
        }
        Ok((f.stage(), rows))
    })?;
    DeficitReport::assemble(stages, epsilon)
}

/// `∫_G |E^{r·(x,y)}(r·a) − E^{(x,y)}(a)| dλ_G(a)` for `r = (s, t)` acting by
/// `(s, t)·(x, y) = (x, t·y)`.
pub fn full_defect(
    e: &ProductNetFunction,
    r: &Element,
    x: &Point,
    y: &Point,
    on_acting: &TransformationGroup,
) -> Result<Rational> {
    let g = &e.group;
    let (_, t) = r.as_pair().ok_or_else(|| Error::Domain(format!("{r} is not a pair")))?;
    let ty = on_acting.act_left(t, y)?;
    let pulled = translate_left(g, &g.inverse(r)?, &e.slice(x, &ty))?;
    Ok(haar_l1_distance(g, &pulled, &e.slice(x, y)))
}

fn factors(e: &ProductNetFunction) -> Result<(&NetFunction, &NetFunction)> {
    match &e.repr {
        Repr::Factored { f, g } => Ok((f, g)),
        Repr::Explicit(_) => domain("net stage was not built by product_net"),
    }
}

/// The three-term estimate for a product stage at `(s, t)` and `(x, y)`:
/// `lhs` is the full `G`-defect and
/// `rhs = ‖T_{t⁻¹}f^x − f^x‖‖g^{ty}‖ + ‖l_{s'⁻¹}f^x − f^x‖‖g^{ty}‖ + ‖f^x‖ Σ_h |g^{ty}(th) − g^y(h)|`
/// with `s' = τ_{t⁻¹}(s)`.
pub fn three_term_bound(
    e: &ProductNetFunction,
    f: &NetFunction,
    g: &NetFunction,
    r: &Element,
    x: &Point,
    y: &Point,
    on_acting: &TransformationGroup,
) -> Result<(Rational, Rational)> {
    let (ef, eg) = factors(e)?;
    if ef.stage() != f.stage() || eg.stage() != g.stage() {
        return domain("net stage was not built from the supplied factors");
    }
    let d = data(&e.group)?;
    let (s, t) = r.as_pair().ok_or_else(|| Error::Domain(format!("{r} is not a pair")))?;
    let lhs = full_defect(e, r, x, y, on_acting)?;
    let t_inv = d.acting.inverse(t)?;
    let s_prime = d.tau.apply(&d.normal, &t_inv, s)?;
    let fx = f.section(x);
    let ty = on_acting.act_left(t, y)?;
    let g_ty = g.section(&ty);
    let g_y = g.section(y);
    let twisted = twist_defect_at(&fx, &t_inv, &e.group)?;
    let shifted = l1_distance(translate_left(&d.normal, &d.normal.inverse(&s_prime)?, &fx)?, fx.as_ref());
    let g_moved = l1_distance(translate_left(&d.acting, &t_inv, &g_ty)?, g_y.as_ref());
    let g_norm = g_ty.l1_norm();
    let rhs = twisted * &g_norm + shifted * &g_norm + fx.l1_norm() * g_moved;
    Ok((lhs, rhs))
}

/// The two-term estimate recovering the twist condition from a product stage:
/// `lhs = ‖T_t f^x − f^x‖‖g^y‖` and
/// `rhs = ‖T_t f^x‖ Σ_h |g^y(h) − g^{t⁻¹y}(t⁻¹h)| + full defect at (e_N, t⁻¹)`.
pub fn two_term_bound(
    e: &ProductNetFunction,
    t: &Element,
    x: &Point,
    y: &Point,
    on_acting: &TransformationGroup,
) -> Result<(Rational, Rational)> {
    let (f, g) = factors(e)?;
    let d = data(&e.group)?;
    let fx = f.section(x);
    let gy = g.section(y);
    let tf = twist(&fx, t, &e.group)?;
    let lhs = l1_distance(&tf, fx.as_ref()) * gy.l1_norm();
    let t_inv = d.acting.inverse(t)?;
    let g_back = g.section(&on_acting.act_left(&t_inv, y)?);
    let g_moved = l1_distance(gy.as_ref(), translate_left(&d.acting, t, &g_back)?);
    let r = Element::pair(d.normal.identity(), t_inv);
    let rhs = tf.l1_norm() * g_moved + full_defect(e, &r, x, y, on_acting)?;
    Ok((lhs, rhs))
}

/// `∫_H E^{(x,y)}(n, h)·σ(h) dλ_H(h)` on the designated slice `y`.
pub fn marginal_at(e: &ProductNetFunction, x: &Point, y: &Point) -> FinFn<Element> {
    let sigma = &data(&e.group).expect("checked at construction").sigma;
    let mut out = FinFn::new();
    for (a, v) in e.slice(x, y).iter() {
        let (n, h) = a.as_pair().expect("elements of a semidirect product are pairs");
        out.add_at(n.clone(), &(v * sigma.value(h)));
    }
    out
}

/// The net `f(x, n) = ∫_H E^{(x,y)}(n, h)σ(h) dλ_H(h)` for a designated `y`.
pub fn marginalize(e: &ProductNetFunction, y: &Point) -> NetFunction {
    let me = Arc::new(e.clone());
    let y = y.clone();
    NetFunction::from_rule(e.stage.0, move |x| marginal_at(&me, x, &y))
}

/// `lhs = Σ_n |f^{s·x}(sn) − f^x(n)|` for the marginal `f`, `rhs` the full
/// defect at `(s, e_H)`; `N` fixes `x`.
pub fn marginal_defect_bound(
    e: &ProductNetFunction,
    s: &Element,
    x: &Point,
    y: &Point,
    on_acting: &TransformationGroup,
) -> Result<(Rational, Rational)> {
    let d = data(&e.group)?;
    let fx = marginal_at(e, x, y);
    let lhs = l1_distance(translate_left(&d.normal, &d.normal.inverse(s)?, &fx)?, &fx);
    let r = Element::pair(s.clone(), d.acting.identity());
    Ok((lhs, full_defect(e, &r, x, y, on_acting)?))
}

/// `lhs = ‖T_t f^x − f^x‖₁` for the marginal `f` and
/// `rhs = ∫_G |E^{(x,y)}((e_N, t⁻¹)·a) − E^{(x,y)}(a)| dλ_G(a)` on the same slice.
pub fn twist_from_full_defect(
    e: &ProductNetFunction,
    t: &Element,
    x: &Point,
    y: &Point,
) -> Result<(Rational, Rational)> {
    let g = &e.group;
    let d = data(g)?;
    let fx = marginal_at(e, x, y);
    let lhs = twist_defect_at(&fx, t, g)?;
    let slice = e.slice(x, y);
    // a ↦ E((e_N, t⁻¹)·a) is the left translate by (e_N, t).
    let moved = translate_left(g, &Element::pair(d.normal.identity(), t.clone()), &slice)?;
    Ok((lhs, haar_l1_distance(g, &moved, &slice)))
}

/// `μ × λ_N((A, τ_{t⁻¹}B) △ (A, B)) / μ × λ_N(A, B)`.
pub fn tau_compat_deficit(
    space: &Space,
    a: &[Point],
    b: &[Element],
    t: &Element,
    group: &Group,
) -> Result<Rational> {
    let d = data(group)?;
    let mu_a = a.iter().fold(zero(), |acc, x| acc + space.measure(x));
    let b_set = FinFn::indicator(b.iter().cloned());
    let lambda_b = Rational::from_integer(b_set.len().into());
    if mu_a.is_zero() || lambda_b.is_zero() {
        return domain("tau-compatibility needs nonempty A and B");
    }
    let t_inv = d.acting.inverse(t)?;
    let moved = b_set.map_points(|n| d.tau.apply(&d.normal, &t_inv, n))?;
    let sym = l1_distance(&moved, &b_set);
    Ok(&mu_a * sym / (mu_a * lambda_b))
}

/// a.i.c.m. defects of the diagonal stages `(i, i)` of the product grid on `X × X`,
/// with the full grid's final-window maxima appended as notes.
pub fn verify_product_net(
    fs: &[NetFunction],
    gs: &[NetFunction],
    k: &Window,
    epsilon: &[Rational],
    on_pairs: &TransformationGroup,
) -> Result<DeficitReport> {
    let group = on_pairs.group();
    let diagonal: Vec<NetFunction> =
        fs.iter().zip(gs).map(|(f, g)| product_net(f, g, group).map(|e| e.to_net())).collect::<Result<_>>()?;
    let mut report = verify_aicm(&diagonal, k, epsilon, on_pairs)?;
    report.notes.push(format!("product grid {}x{}; diagonal stages reported", fs.len(), gs.len()));
    Ok(report)
}

/// `∫_G f dλ_G = 1`.
pub fn mass_is_one(group: &Group, f: &FinFn<Element>) -> bool {
    crate::measure::haar_integral(group, f).is_one()
}
