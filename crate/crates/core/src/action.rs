//! Transformation groups `(X, G)`: spaces, left and right actions, the
//! product action of a semidirect product on `X × X`, and finite windows
//! standing in for compact subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{domain, Error, Result};
use crate::group::{format_word, parse_word, reduce_into, standard_ball, Element, Group, Letter};
use crate::rational::{one, Rational};

/// An eventually periodic reduced infinite word `head · period^∞` over a free alphabet.
///
/// Boundary points of `F_k` are kept as exact rays so that the action of `F_k`
/// is a genuine group action. A stored depth-`D` word `w` is read with the
/// periodic-tail convention, i.e. as the ray `w · (last letter of w)^∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ray {
    head: Vec<Letter>,
    period: Vec<Letter>,
}

impl Ray {
    pub fn new(head: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return domain("ray period must be nonempty");
        }
        let reduced = |w: &[Letter]| w.windows(2).all(|p| p[0] != p[1].inverse());
        if !reduced(&head) || !reduced(&period) {
            return domain("ray head and period must be freely reduced");
        }
        if period.len() > 1 && period[0] == period[period.len() - 1].inverse() {
            return domain("ray period must be cyclically reduced");
        }
        if head.last().is_some_and(|l| *l == period[0].inverse()) {
            return domain("ray head and period do not join reducedly");
        }
        let mut ray = Ray { head, period };
        ray.canonicalize();
        Ok(ray)
    }

    /// `w · w_D^∞` for a nonempty reduced word `w`.
    pub fn from_prefix(word: Vec<Letter>) -> Result<Self> {
        let last = *word.last().ok_or_else(|| Error::Domain("boundary prefix must be nonempty".into()))?;
        Ray::new(word, vec![last])
    }

    /// `x^∞` for a single letter.
    pub fn constant(letter: Letter) -> Self {
        Ray { head: Vec::new(), period: vec![letter] }
    }

    fn canonicalize(&mut self) {
        let p = self.period.len();
        if let Some(d) = (1..=p).find(|&d| p.is_multiple_of(d) && (d..p).all(|i| self.period[i] == self.period[i - d])) {
            self.period.truncate(d);
        }
        while self.head.last().is_some_and(|l| Some(l) == self.period.last()) {
            self.head.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn head(&self) -> &[Letter] {
        &self.head
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.period[(i - self.head.len()) % self.period.len()]
        }
    }

    /// The first `depth` letters.
    pub fn prefix(&self, depth: usize) -> Vec<Letter> {
        (0..depth).map(|i| self.letter(i)).collect()
    }

    pub fn max_generator(&self) -> usize {
        self.head.iter().chain(&self.period).map(|l| l.generator()).max().unwrap_or(0)
    }

    /// `s · ω`: concatenate, freely reduce, re-canonicalize.
    pub fn act(&self, s: &[Letter]) -> Ray {
        let copies = s.len() / self.period.len() + 2;
        let mut word = s.to_vec();
        reduce_into(&mut word, self.head.iter().copied());
        for _ in 0..copies {
            reduce_into(&mut word, self.period.iter().copied());
        }
        let mut ray = Ray { head: word, period: self.period.clone() };
        ray.canonicalize();
        ray
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: String = self.head.iter().map(|l| l.name()).collect();
        let period: String = self.period.iter().map(|l| l.name()).collect();
        write!(f, "{head}[{period}]")
    }
}

/// A point of a space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    /// The single point of the one-point space.
    Unit,
    Label(usize),
    Elem(Element),
    Ray(Ray),
    Pair(Box<Point>, Box<Point>),
}

impl Point {
    pub fn pair(x: Point, y: Point) -> Self {
        Point::Pair(Box::new(x), Box::new(y))
    }

    pub fn as_pair(&self) -> Option<(&Point, &Point)> {
        match self {
            Point::Pair(x, y) => Some((x, y)),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Unit => write!(f, "*"),
            Point::Label(i) => write!(f, "#{i}"),
            Point::Elem(g) => write!(f, "{g}"),
            Point::Ray(r) => write!(f, "{r}"),
            Point::Pair(x, y) => write!(f, "({x};{y})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Point,
    FiniteSet { size: usize },
    /// The underlying set of the acting group.
    GroupCarrier,
    /// Boundary rays of `F_rank`, enumerated and rendered at `depth`.
    Boundary { rank: usize, depth: usize },
    Product(Box<Space>, Box<Space>),
}

/// A discrete space with a measure `μ`, counting unless weights are supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    kind: SpaceKind,
    weights: Option<BTreeMap<Point, Rational>>,
}

impl Space {
    pub fn point() -> Self {
        Space { kind: SpaceKind::Point, weights: None }
    }

    pub fn finite_set(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Construction("finite space must be nonempty".into()));
        }
        Ok(Space { kind: SpaceKind::FiniteSet { size }, weights: None })
    }

    pub fn carrier() -> Self {
        Space { kind: SpaceKind::GroupCarrier, weights: None }
    }

    pub fn boundary(rank: usize, depth: usize) -> Result<Self> {
        if rank == 0 || depth == 0 {
            return Err(Error::Construction("boundary needs rank >= 1 and depth >= 1".into()));
        }
        Ok(Space { kind: SpaceKind::Boundary { rank, depth }, weights: None })
    }

    pub fn product(a: Space, b: Space) -> Self {
        Space { kind: SpaceKind::Product(Box::new(a), Box::new(b)), weights: None }
    }

    /// Replaces counting measure on a finite set by explicit positive weights.
    pub fn with_weights(mut self, weights: BTreeMap<Point, Rational>) -> Result<Self> {
        let SpaceKind::FiniteSet { size } = self.kind else {
            return Err(Error::Construction("explicit weights are supported on finite sets only".into()));
        };
        if weights.len() != size || (0..size).any(|i| !weights.get(&Point::Label(i)).is_some_and(|w| w.is_positive())) {
            return Err(Error::Construction("every point of the finite set needs a positive weight".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn is_counting(&self) -> bool {
        self.weights.is_none()
    }

    pub fn measure(&self, x: &Point) -> Rational {
        self.weights.as_ref().and_then(|w| w.get(x).cloned()).unwrap_or_else(one)
    }

    pub fn depth(&self) -> Option<usize> {
        match &self.kind {
            SpaceKind::Boundary { depth, .. } => Some(*depth),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SpaceKind::Point => "point".into(),
            SpaceKind::FiniteSet { size } => format!("finite-set({size})"),
            SpaceKind::GroupCarrier => "group-carrier".into(),
            SpaceKind::Boundary { rank, depth } => format!("boundary-prefix({rank},{depth})"),
            SpaceKind::Product(a, b) => format!("product({},{})", a.name(), b.name()),
        }
    }

    pub fn contains(&self, group: &Group, x: &Point) -> bool {
        match (&self.kind, x) {
            (SpaceKind::Point, Point::Unit) => true,
            (SpaceKind::FiniteSet { size }, Point::Label(i)) => i < size,
            (SpaceKind::GroupCarrier, Point::Elem(g)) => group.contains(g),
            (SpaceKind::Boundary { rank, .. }, Point::Ray(r)) => r.max_generator() < *rank,
            (SpaceKind::Product(a, b), Point::Pair(x, y)) => {
                // Carrier factors of a product space carry the acting group H.
                let h = group.semidirect_data().map(|d| &d.acting).unwrap_or(group);
                a.contains(h, x) && b.contains(h, y)
            }
            _ => false,
        }
    }

    /// A deterministic sample of up to `radius` points (a ball for group carriers).
    pub fn sample(&self, group: &Group, radius: usize) -> Vec<Point> {
        match &self.kind {
            SpaceKind::Point => vec![Point::Unit],
            SpaceKind::FiniteSet { size } => (0..radius.clamp(1, *size)).map(Point::Label).collect(),
            SpaceKind::GroupCarrier => standard_ball(group, radius).into_iter().map(Point::Elem).collect(),
            SpaceKind::Boundary { rank, depth } => boundary_words(*rank, *depth, radius.max(1))
                .into_iter()
                .map(|w| Point::Ray(Ray::from_prefix(w).expect("nonempty reduced word")))
                .collect(),
            SpaceKind::Product(a, b) => {
                let h = group.semidirect_data().map(|d| &d.acting).unwrap_or(group);
                let xs = a.sample(h, radius);
                let ys = b.sample(h, radius);
                xs.iter().flat_map(|x| ys.iter().map(move |y| Point::pair(x.clone(), y.clone()))).collect()
            }
        }
    }

    pub fn parse_point(&self, group: &Group, text: &str) -> Result<Point> {
        let text = text.trim();
        let bad = |why: &str| Error::Parse(format!("{text:?} is not a point of {}: {why}", self.name()));
        let p = match &self.kind {
            SpaceKind::Point => match text {
                "*" | "pt" => Point::Unit,
                _ => return Err(bad("the point is written *")),
            },
            SpaceKind::FiniteSet { .. } => {
                let digits = text.strip_prefix('#').unwrap_or(text);
                Point::Label(digits.parse().map_err(|_| bad("expected #i"))?)
            }
            SpaceKind::GroupCarrier => Point::Elem(group.parse_element(text)?),
            SpaceKind::Boundary { .. } => {
                if let Some((head, rest)) = text.split_once('[') {
                    let period = rest.strip_suffix(']').ok_or_else(|| bad("expected head[period]"))?;
                    let head = if head.is_empty() { Vec::new() } else { parse_word(head)? };
                    Point::Ray(Ray::new(head, parse_word(period)?)?)
                } else {
                    Point::Ray(Ray::from_prefix(parse_word(text)?)?)
                }
            }
            SpaceKind::Product(a, b) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("expected (x;y)"))?;
                let mut depth = 0i32;
                let split = inner
                    .char_indices()
                    .find(|&(_, c)| {
                        match c {
                            '(' | '[' | '{' => depth += 1,
                            ')' | ']' | '}' => depth -= 1,
                            _ => {}
                        }
                        c == ';' && depth == 0
                    })
                    .map(|(i, _)| i)
                    .ok_or_else(|| bad("expected (x;y)"))?;
                let h = group.semidirect_data().map(|d| &d.acting).unwrap_or(group);
                Point::pair(a.parse_point(h, &inner[..split])?, b.parse_point(h, &inner[split + 1..])?)
            }
        };
        if !self.contains(group, &p) {
            return Err(bad("outside the space"));
        }
        Ok(p)
    }
}

/// The first `count` reduced words of length `depth` in lexicographic order (`a < A < b < B …`).
pub fn boundary_words(rank: usize, depth: usize, count: usize) -> Vec<Vec<Letter>> {
    let alphabet: Vec<Letter> = (0..rank).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(depth);
    fn dfs(alphabet: &[Letter], depth: usize, count: usize, word: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if out.len() >= count {
            return;
        }
        if word.len() == depth {
            out.push(word.clone());
            return;
        }
        for &l in alphabet {
            if word.last() == Some(&l.inverse()) {
                continue;
            }
            word.push(l);
            dfs(alphabet, depth, count, word, out);
            word.pop();
            if out.len() >= count {
                return;
            }
        }
    }
    dfs(&alphabet, depth, count, &mut word, &mut out);
    out
}

/// How the acting group moves points from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeftAction {
    Trivial,
    /// Left multiplication on the group carrier.
    Carrier,
    /// ℤ^d (or a cyclic group whose order the modulus divides) rotating `ℤ/m`.
    Rotation,
    /// `F_k` acting on a finite set, generator `i` by `perms[i]`.
    Permutation(Arc<Vec<Vec<usize>>>),
    /// `F_k` acting on boundary rays by concatenation and reduction.
    Boundary,
    /// `(n, h)·(x, y) = (x, h·y)` for `N ⋊ H`, `h` acting through the inner action.
    Product(Box<LeftAction>),
}

/// How the acting group moves points from the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RightAction {
    Trivial,
    /// `x·s := s⁻¹·x`; must be opted into explicitly.
    InverseLeft,
    /// Right multiplication on the group carrier.
    Carrier,
}

/// A transformation group: a space, a group, and the actions between them.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationGroup {
    space: Space,
    group: Group,
    left: LeftAction,
    right: Option<RightAction>,
}

impl TransformationGroup {
    pub fn new(space: Space, group: Group, left: LeftAction, right: Option<RightAction>) -> Result<Self> {
        check_left(&space, &group, &left)?;
        if let Some(RightAction::Carrier) = right {
            if space.kind != SpaceKind::GroupCarrier {
                return Err(Error::Construction("right carrier action needs the group-carrier space".into()));
            }
        }
        let t = TransformationGroup { space, group, left, right };
        for x in t.space.sample(&t.group, 2) {
            let e = t.group.identity();
            if t.act_left(&e, &x)? != x || t.right.is_some() && t.act_right(&x, &e)? != x {
                return Err(Error::Construction(format!("identity moves {x}")));
            }
        }
        Ok(t)
    }

    /// `G` acting on a single point.
    pub fn on_point(group: Group) -> Self {
        TransformationGroup { space: Space::point(), group, left: LeftAction::Trivial, right: Some(RightAction::Trivial) }
    }

    /// `G` acting on itself by left and right multiplication.
    pub fn carrier(group: Group) -> Self {
        TransformationGroup {
            space: Space::carrier(),
            group,
            left: LeftAction::Carrier,
            right: Some(RightAction::Carrier),
        }
    }

    pub fn with_right(mut self, right: Option<RightAction>) -> Result<Self> {
        self.right = right;
        TransformationGroup::new(self.space, self.group, self.left, self.right)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn left_action(&self) -> &LeftAction {
        &self.left
    }

    pub fn right_action(&self) -> Option<&RightAction> {
        self.right.as_ref()
    }

    pub fn has_right_action(&self) -> bool {
        self.right.is_some()
    }

    /// `s·x`.
    pub fn act_left(&self, s: &Element, x: &Point) -> Result<Point> {
        if !self.group.contains(s) {
            return domain(format!("{s} is not an element of {}", self.group.name()));
        }
        if !self.space.contains(&self.group, x) {
            return domain(format!("{x} is outside {}", self.space.name()));
        }
        apply_left(&self.left, &self.space, &self.group, s, x)
    }

    /// `x·s`.
    pub fn act_right(&self, x: &Point, s: &Element) -> Result<Point> {
        let right = self
            .right
            .as_ref()
            .ok_or_else(|| Error::Configuration("transformation group has no right action".into()))?;
        if !self.group.contains(s) {
            return domain(format!("{s} is not an element of {}", self.group.name()));
        }
        if !self.space.contains(&self.group, x) {
            return domain(format!("{x} is outside {}", self.space.name()));
        }
        match right {
            RightAction::Trivial => Ok(x.clone()),
            RightAction::InverseLeft => {
                let s_inv = self.group.inverse(s)?;
                apply_left(&self.left, &self.space, &self.group, &s_inv, x)
            }
            RightAction::Carrier => match x {
                Point::Elem(g) => Ok(Point::Elem(self.group.multiply(g, s)?)),
                _ => domain(format!("{x} is not a group element")),
            },
        }
    }

    pub fn measure(&self, x: &Point) -> Rational {
        self.space.measure(x)
    }
}

fn check_left(space: &Space, group: &Group, left: &LeftAction) -> Result<()> {
    let bad = |why: String| Err(Error::Construction(why));
    match (left, &space.kind, group) {
        (LeftAction::Trivial, _, _) => Ok(()),
        (LeftAction::Carrier, SpaceKind::GroupCarrier, _) => Ok(()),
        (LeftAction::Rotation, SpaceKind::FiniteSet { .. }, Group::FreeAbelian { .. }) => Ok(()),
        (LeftAction::Rotation, SpaceKind::FiniteSet { size }, Group::Cyclic { order }) => {
            if (*order as usize).is_multiple_of(*size) {
                Ok(())
            } else {
                bad(format!("rotation of Z/{size} by Z/{order} is not an action"))
            }
        }
        (LeftAction::Permutation(perms), SpaceKind::FiniteSet { size }, Group::Free { rank }) => {
            if perms.len() != *rank {
                return bad(format!("need {rank} permutations, got {}", perms.len()));
            }
            for p in perms.iter() {
                let image: BTreeSet<usize> = p.iter().copied().collect();
                if p.len() != *size || image.len() != *size || image.iter().any(|&v| v >= *size) {
                    return bad("generator image is not a permutation of the finite set".into());
                }
            }
            Ok(())
        }
        (LeftAction::Boundary, SpaceKind::Boundary { rank, .. }, Group::Free { rank: g }) if rank == g => Ok(()),
        (LeftAction::Product(inner), SpaceKind::Product(a, b), Group::Semidirect(d)) => {
            if a != b {
                return bad("product action needs X × X".into());
            }
            check_left(b, &d.acting, inner)
        }
        _ => bad(format!(
            "left action {left:?} is not defined for {} on {}",
            group.name(),
            space.name()
        )),
    }
}

fn apply_left(left: &LeftAction, space: &Space, group: &Group, s: &Element, x: &Point) -> Result<Point> {
    match (left, x) {
        (LeftAction::Trivial, _) => Ok(x.clone()),
        (LeftAction::Carrier, Point::Elem(g)) => Ok(Point::Elem(group.multiply(s, g)?)),
        (LeftAction::Rotation, Point::Label(i)) => {
            let SpaceKind::FiniteSet { size } = space.kind else { unreachable!("checked at construction") };
            let shift: i64 = match s {
                Element::Vector(v) => v.iter().sum(),
                Element::Residue(r) => *r as i64,
                _ => return domain(format!("{s} cannot rotate")),
            };
            Ok(Point::Label((*i as i64 + shift).rem_euclid(size as i64) as usize))
        }
        (LeftAction::Permutation(perms), Point::Label(i)) => {
            let Element::Word(w) = s else { return domain(format!("{s} is not a word")) };
            let mut cur = *i;
            // s = l_1 … l_k acts as l_1 ∘ … ∘ l_k, so apply the last letter first.
            for l in w.iter().rev() {
                let p = &perms[l.generator()];
                cur = if l.is_inverse() {
                    p.iter().position(|&v| v == cur).expect("permutation")
                } else {
                    p[cur]
                };
            }
            Ok(Point::Label(cur))
        }
        (LeftAction::Boundary, Point::Ray(r)) => {
            let Element::Word(w) = s else { return domain(format!("{s} is not a word")) };
            Ok(Point::Ray(r.act(w)))
        }
        (LeftAction::Product(inner), Point::Pair(px, py)) => {
            let d = group.semidirect_data().expect("checked at construction");
            let SpaceKind::Product(_, factor) = &space.kind else { unreachable!("checked at construction") };
            let (_, h) = s.as_pair().ok_or_else(|| Error::Domain(format!("{s} is not a pair")))?;
            let y = apply_left(inner, factor, &d.acting, h, py)?;
            Ok(Point::pair((**px).clone(), y))
        }
        _ => domain(format!("{x} is not moved by {left:?}")),
    }
}

fn spot_points(t: &TransformationGroup) -> Vec<Point> {
    t.space.sample(&t.group, 3)
}

/// The action of `N ⋊ H` on `X × X` by `(n, h)·(x, y) = (x, h·y)`.
pub fn product_action(
    on_normal: &TransformationGroup,
    on_acting: &TransformationGroup,
    group: &Group,
) -> Result<TransformationGroup> {
    let d = group
        .semidirect_data()
        .ok_or_else(|| Error::Construction(format!("{} is not a semidirect product", group.name())))?;
    if on_normal.group != d.normal || on_acting.group != d.acting {
        return Err(Error::Construction("actions do not match the factors of the semidirect product".into()));
    }
    if on_normal.space != on_acting.space {
        return Err(Error::Construction("N and H must act on the same space".into()));
    }
    for n in standard_ball(&d.normal, 2) {
        for x in spot_points(on_normal) {
            if on_normal.act_left(&n, &x)? != x {
                return Err(Error::Construction(format!("X is not a trivial N-space: {n}·{x} != {x}")));
            }
        }
    }
    let x = on_acting.space.clone();
    TransformationGroup::new(
        Space::product(x.clone(), x),
        group.clone(),
        LeftAction::Product(Box::new(on_acting.left.clone())),
        None,
    )
}

/// A finite stand-in for a compact subset of `X × G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    space_part: Vec<Point>,
    group_part: Vec<Element>,
}

impl Window {
    /// Deduplicates while keeping first occurrences in order.
    pub fn new(space_part: Vec<Point>, group_part: Vec<Element>) -> Result<Self> {
        fn dedup<T: Ord + Clone>(v: Vec<T>) -> Vec<T> {
            let mut seen = BTreeSet::new();
            v.into_iter().filter(|p| seen.insert(p.clone())).collect()
        }
        let space_part = dedup(space_part);
        let group_part = dedup(group_part);
        if space_part.is_empty() || group_part.is_empty() {
            return domain("window parts must be nonempty");
        }
        Ok(Window { space_part, group_part })
    }

    pub fn space_part(&self) -> &[Point] {
        &self.space_part
    }

    pub fn group_part(&self) -> &[Element] {
        &self.group_part
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Point, &Element)> {
        self.space_part.iter().flat_map(move |x| self.group_part.iter().map(move |s| (x, s)))
    }
}

/// Window with `space.sample(r_x)` and `ball(G, S, r_g)`.
pub fn diag_conjugation_window(t: &TransformationGroup, space_radius: usize, group_radius: usize) -> Window {
    Window::new(
        t.space.sample(&t.group, space_radius),
        standard_ball(&t.group, group_radius).into_iter().collect(),
    )
    .expect("samples and balls are nonempty")
}

/// Depth-`D` rendering of a boundary point.
pub fn render_prefix(x: &Point, depth: usize) -> String {
    match x {
        Point::Ray(r) => format_word(&r.prefix(depth)),
        other => other.to_string(),
    }
}
