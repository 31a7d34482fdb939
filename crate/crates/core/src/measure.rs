//! Finitely supported functions and probability measures with exact weights,
//! together with the translations and convolution of the group algebra `ℓ¹(G)`.
//!
//! Conventions used throughout the crate:
//! `translate_left(s, f)(t) = f(s⁻¹t)` pushes mass along `t ↦ st`, and
//! `translate_right(f, s)(t) = f(ts)` pushes mass along `t ↦ ts⁻¹`. For
//! measures, `s·μ` is [`push_left`] and `μ·s` is [`push_right`].

use std::collections::btree_map::{self, BTreeMap};

use num_traits::{Signed, Zero};

use crate::error::{domain, Result};
use crate::group::{Element, Group};
use crate::rational::{int, one, zero, Rational};

/// A finitely supported rational-valued function. Zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFn<P: Ord> {
    values: BTreeMap<P, Rational>,
}

impl<P: Ord> Default for FinFn<P> {
    fn default() -> Self {
        FinFn { values: BTreeMap::new() }
    }
}

impl<P: Ord + Clone> FinFn<P> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums repeated points.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (P, Rational)>) -> Self {
        let mut f = Self::new();
        for (p, v) in pairs {
            f.add_at(p, &v);
        }
        f
    }

    pub fn point_mass(p: P) -> Self {
        Self::from_pairs([(p, one())])
    }

    pub fn indicator(points: impl IntoIterator<Item = P>) -> Self {
        let mut f = Self::new();
        for p in points {
            f.values.insert(p, one());
        }
        f
    }

    /// Uniform weight `1/|S|` on the distinct points of `S`.
    pub fn uniform(points: impl IntoIterator<Item = P>) -> Self {
        let ind = Self::indicator(points);
        if ind.is_empty() {
            return ind;
        }
        let w = int(ind.len() as i64).recip();
        ind.scaled(&w)
    }

    pub fn get(&self, p: &P) -> Rational {
        self.values.get(p).cloned().unwrap_or_else(zero)
    }

    pub fn add_at(&mut self, p: P, v: &Rational) {
        if v.is_zero() {
            return;
        }
        match self.values.entry(p) {
            btree_map::Entry::Vacant(e) => {
                e.insert(v.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> btree_map::Iter<'_, P, Rational> {
        self.values.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.values.values().fold(zero(), |acc, v| acc + v)
    }

    pub fn l1_norm(&self) -> Rational {
        self.values.values().fold(zero(), |acc, v| acc + v.abs())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.values().all(|v| v.is_positive())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        FinFn { values: self.values.iter().map(|(p, v)| (p.clone(), v * c)).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, v) in other.iter() {
            out.add_at(p.clone(), v);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, v) in other.iter() {
            out.add_at(p.clone(), &-v);
        }
        out
    }

    /// Pushes values along `map`; colliding images are summed.
    pub fn map_points<Q: Ord + Clone>(&self, mut map: impl FnMut(&P) -> Result<Q>) -> Result<FinFn<Q>> {
        let mut out = FinFn::new();
        for (p, v) in self.iter() {
            out.add_at(map(p)?, v);
        }
        Ok(out)
    }

    /// Applies `op` to every value, dropping results equal to zero.
    pub fn map_values(&self, mut op: impl FnMut(&P, &Rational) -> Rational) -> Self {
        FinFn::from_pairs(self.iter().map(|(p, v)| (p.clone(), op(p, v))))
    }
}

impl<P: Ord + Clone> FromIterator<(P, Rational)> for FinFn<P> {
    fn from_iter<I: IntoIterator<Item = (P, Rational)>>(iter: I) -> Self {
        FinFn::from_pairs(iter)
    }
}

/// A finitely supported probability measure: nonnegative weights summing to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProbMeasure<P: Ord>(FinFn<P>);

impl<P: Ord + Clone> ProbMeasure<P> {
    pub fn new(weights: FinFn<P>) -> Result<Self> {
        if !weights.is_nonnegative() {
            return domain("probability weights must be nonnegative");
        }
        let total = weights.total();
        if total != one() {
            return domain(format!("probability weights sum to {total}, not 1"));
        }
        Ok(ProbMeasure(weights))
    }

    pub fn dirac(p: P) -> Self {
        ProbMeasure(FinFn::point_mass(p))
    }

    pub fn uniform(points: impl IntoIterator<Item = P>) -> Result<Self> {
        let f = FinFn::uniform(points);
        if f.is_empty() {
            return domain("uniform measure on an empty set");
        }
        Ok(ProbMeasure(f))
    }

    pub fn weights(&self) -> &FinFn<P> {
        &self.0
    }

    pub fn into_weights(self) -> FinFn<P> {
        self.0
    }

    /// Serialization rows: `(point, numerator, denominator)`.
    pub fn to_rows(&self) -> Vec<(P, String, String)> {
        self.0.iter().map(|(p, w)| (p.clone(), w.numer().to_string(), w.denom().to_string())).collect()
    }
}

impl<P: Ord> AsRef<FinFn<P>> for FinFn<P> {
    fn as_ref(&self) -> &FinFn<P> {
        self
    }
}

impl<P: Ord> AsRef<FinFn<P>> for ProbMeasure<P> {
    fn as_ref(&self) -> &FinFn<P> {
        &self.0
    }
}

/// `Σ_p |μ(p) − ν(p)|` over the union of supports.
pub fn l1_distance<P: Ord + Clone>(mu: impl AsRef<FinFn<P>>, nu: impl AsRef<FinFn<P>>) -> Rational {
    weighted_l1_distance(mu.as_ref(), nu.as_ref(), |_| one())
}

pub(crate) fn weighted_l1_distance<P: Ord + Clone>(
    mu: &FinFn<P>,
    nu: &FinFn<P>,
    weight: impl Fn(&P) -> Rational,
) -> Rational {
    let mut total = zero();
    let mut a = mu.iter().peekable();
    let mut b = nu.iter().peekable();
    loop {
        let (p, diff) = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some((pa, va)), None) => {
                let r = ((*pa).clone(), (*va).clone());
                a.next();
                r
            }
            (None, Some((pb, vb))) => {
                let r = ((*pb).clone(), -(*vb).clone());
                b.next();
                r
            }
            (Some((pa, va)), Some((pb, vb))) => match pa.cmp(pb) {
                std::cmp::Ordering::Less => {
                    let r = ((*pa).clone(), (*va).clone());
                    a.next();
                    r
                }
                std::cmp::Ordering::Greater => {
                    let r = ((*pb).clone(), -(*vb).clone());
                    b.next();
                    r
                }
                std::cmp::Ordering::Equal => {
                    let r = ((*pa).clone(), *va - *vb);
                    a.next();
                    b.next();
                    r
                }
            },
        };
        if !diff.is_zero() {
            total += diff.abs() * weight(&p);
        }
    }
    total
}

/// `∫_G |f − g| dλ_G` with the group's Haar weight.
pub fn haar_l1_distance(group: &Group, f: &FinFn<Element>, g: &FinFn<Element>) -> Rational {
    if group.has_counting_weight() {
        weighted_l1_distance(f, g, |_| one())
    } else {
        weighted_l1_distance(f, g, |t| group.haar_weight(t))
    }
}

/// `∫_G f dλ_G`.
pub fn haar_integral(group: &Group, f: &FinFn<Element>) -> Rational {
    if group.has_counting_weight() {
        f.total()
    } else {
        f.iter().fold(zero(), |acc, (t, v)| acc + v * group.haar_weight(t))
    }
}

/// `(l_s f)(t) = f(s⁻¹t)`.
pub fn translate_left(group: &Group, s: &Element, f: &FinFn<Element>) -> Result<FinFn<Element>> {
    f.map_points(|t| group.multiply(s, t))
}

/// `(r_s f)(t) = f(ts)`.
pub fn translate_right(group: &Group, f: &FinFn<Element>, s: &Element) -> Result<FinFn<Element>> {
    let s_inv = group.inverse(s)?;
    f.map_points(|t| group.multiply(t, &s_inv))
}

/// `s·μ`, the pushforward of `μ` along `t ↦ st`; `(s·μ)(E) = μ(s⁻¹E)`.
pub fn push_left(group: &Group, s: &Element, mu: &FinFn<Element>) -> Result<FinFn<Element>> {
    translate_left(group, s, mu)
}

/// `μ·s`, the pushforward of `μ` along `t ↦ ts`; `(μ·s)(E) = μ(Es⁻¹)`.
pub fn push_right(group: &Group, mu: &FinFn<Element>, s: &Element) -> Result<FinFn<Element>> {
    mu.map_points(|t| group.multiply(t, s))
}

/// `(μ*ν)(t) = Σ_{uv=t} μ(u)ν(v)`.
pub fn convolve(group: &Group, mu: &FinFn<Element>, nu: &FinFn<Element>) -> Result<FinFn<Element>> {
    let mut out = FinFn::new();
    for (u, a) in mu.iter() {
        for (v, b) in nu.iter() {
            out.add_at(group.multiply(u, v)?, &(a * b));
        }
    }
    Ok(out)
}

pub fn convolve_measures(
    group: &Group,
    mu: &ProbMeasure<Element>,
    nu: &ProbMeasure<Element>,
) -> Result<ProbMeasure<Element>> {
    ProbMeasure::new(convolve(group, mu.weights(), nu.weights())?)
}

/// Divides a nonnegative, nonzero function by its total mass.
pub fn normalize<P: Ord + Clone>(f: &FinFn<P>) -> Result<ProbMeasure<P>> {
    if f.is_empty() {
        return domain("cannot normalize the zero function");
    }
    if !f.is_nonnegative() {
        return domain("cannot normalize a signed function");
    }
    let total = f.total();
    ProbMeasure::new(f.scaled(&total.recip()))
}
