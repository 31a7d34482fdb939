//! Declarative scenario files (TOML) and their translation into core objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use amen_core::action::{LeftAction, RightAction, Space, SpaceKind};
use amen_core::foelner::{check_schedule, indicator_net, uniform_density, Fallback, FoelnerPair, NetFunction};
use amen_core::group::{lamp_window, semidirect, standard_ball, ModularWeight, TauAction};
use amen_core::inner::boundary_mean_net;
use amen_core::measure::FinFn;
use amen_core::rational::{parse_rational, Rational};
use amen_core::{action, Element, Error, Group, Point, Result, TransformationGroup, Window};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Aicm,
    Foelner,
    Theorem23,
    Inner,
    Sqrt,
    Kernel,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Aicm, Suite::Foelner, Suite::Theorem23, Suite::Inner, Suite::Sqrt, Suite::Kernel];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Aicm => "aicm",
            Suite::Foelner => "foelner",
            Suite::Theorem23 => "theorem23",
            Suite::Inner => "inner",
            Suite::Sqrt => "sqrt",
            Suite::Kernel => "kernel",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
    },
    Cyclic {
        order: u64,
    },
    Finite {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<usize>>,
    },
    LampConfigs,
    Lamplighter,
    Semidirect {
        normal: Box<GroupSpec>,
        acting: Box<GroupSpec>,
        tau: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau_table: Option<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<String>,
    },
}

pub const GROUP_FAMILIES: [&str; 8] =
    ["trivial", "free-abelian", "free", "cyclic", "finite", "lamp-configs", "lamplighter", "semidirect"];
pub const TAU_ACTIONS: [&str; 4] = ["identity", "sign-flip", "shift", "table"];

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        Ok(match self {
            GroupSpec::Trivial => Group::trivial(),
            GroupSpec::FreeAbelian { rank } => Group::free_abelian(*rank),
            GroupSpec::Free { rank } => Group::free(*rank),
            GroupSpec::Cyclic { order } => Group::cyclic(*order)?,
            GroupSpec::Finite { table, generators } => {
                Group::Finite(Arc::new(amen_core::group::FiniteTable::new(table.clone(), generators.clone())?))
            }
            GroupSpec::LampConfigs => Group::LampConfigs,
            GroupSpec::Lamplighter => Group::lamplighter(),
            GroupSpec::Semidirect { normal, acting, tau, tau_table, sigma } => {
                let tau = match (tau.as_str(), tau_table) {
                    ("identity", None) => TauAction::Identity,
                    ("sign-flip", None) => TauAction::SignFlip,
                    ("shift", None) => TauAction::Shift,
                    ("table", Some(t)) => TauAction::Table(Arc::new(t.clone())),
                    ("table", None) => return Err(config("tau = \"table\" needs tau_table")),
                    (_, Some(_)) => return Err(config("tau_table is only used with tau = \"table\"")),
                    (other, None) => {
                        return Err(config(format!("unknown tau {other:?}; expected one of {TAU_ACTIONS:?}")))
                    }
                };
                let sigma = match sigma.as_deref() {
                    None | Some("1") | Some("unit") | Some("constant-1") => ModularWeight::Unit,
                    Some(text) => match text.strip_prefix("power:") {
                        Some(base) => ModularWeight::Power(parse_rational(base)?),
                        None => return Err(config(format!("unknown sigma {text:?}"))),
                    },
                };
                semidirect(normal.build()?, acting.build()?, tau, sigma)?
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceSpec {
    #[default]
    Point,
    FiniteSet,
    Carrier,
    Boundary,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default)]
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
}

pub const SPACES: [&str; 4] = ["point", "finite-set", "carrier", "boundary"];
pub const LEFT_ACTIONS: [&str; 5] = ["trivial", "carrier", "rotation", "permutation", "boundary"];
pub const RIGHT_ACTIONS: [&str; 3] = ["trivial", "inverse-left", "carrier"];

impl ActionSpec {
    /// The transformation group of `group` on the described space.
    pub fn build(&self, group: &Group) -> Result<TransformationGroup> {
        let space = match self.space {
            SpaceSpec::Point => Space::point(),
            SpaceSpec::FiniteSet => Space::finite_set(self.size.ok_or_else(|| config("finite-set needs size"))?)?,
            SpaceSpec::Carrier => Space::carrier(),
            SpaceSpec::Boundary => {
                let Group::Free { rank } = group else {
                    return Err(config("boundary spaces need a free group"));
                };
                Space::boundary(*rank, self.depth.ok_or_else(|| config("boundary needs depth"))?)?
            }
        };
        let default_left = match self.space {
            SpaceSpec::Point => "trivial",
            SpaceSpec::Carrier => "carrier",
            SpaceSpec::Boundary => "boundary",
            SpaceSpec::FiniteSet => {
                if self.permutations.is_some() {
                    "permutation"
                } else {
                    "rotation"
                }
            }
        };
        let left = match self.left.as_deref().unwrap_or(default_left) {
            "trivial" => LeftAction::Trivial,
            "carrier" => LeftAction::Carrier,
            "rotation" => LeftAction::Rotation,
            "boundary" => LeftAction::Boundary,
            "permutation" => LeftAction::Permutation(Arc::new(
                self.permutations.clone().ok_or_else(|| config("permutation action needs permutations"))?,
            )),
            other => return Err(config(format!("unknown left action {other:?}; expected one of {LEFT_ACTIONS:?}"))),
        };
        let right = match self.right.as_deref() {
            None => None,
            Some("trivial") => Some(RightAction::Trivial),
            Some("inverse-left") => Some(RightAction::InverseLeft),
            Some("carrier") => Some(RightAction::Carrier),
            Some(other) => {
                return Err(config(format!("unknown right action {other:?}; expected one of {RIGHT_ACTIONS:?}")))
            }
        };
        TransformationGroup::new(space, group.clone(), left, right)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetFamily {
    #[default]
    Balls,
    IndicatorPairs,
    BoundaryMeans,
    ProductNet,
    Explicit,
}

pub const NET_FAMILIES: [&str; 5] = ["balls", "indicator-pairs", "boundary-means", "product-net", "explicit"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub point: String,
    pub values: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    #[serde(default)]
    pub sections: Vec<SectionSpec>,
    /// Used for points without an explicit section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Vec<(String, String)>>,
}

fn default_stages() -> usize {
    5
}

fn one_usize() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetSpec {
    #[serde(default)]
    pub family: NetFamily,
    #[serde(default = "default_stages")]
    pub stages: usize,
    #[serde(default = "one_usize")]
    pub first_radius: usize,
    /// Radius of the space sample `A` in Følner pairs `A × B_r`.
    #[serde(default = "one_usize")]
    pub space_radius: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stage: Vec<StageSpec>,
}

impl Default for NetSpec {
    fn default() -> Self {
        NetSpec { family: NetFamily::Balls, stages: 5, first_radius: 1, space_radius: 1, stage: Vec::new() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub epsilon: Vec<String>,
    pub group: GroupSpec,
    #[serde(default)]
    pub action: ActionSpec,
    #[serde(default)]
    pub net: NetSpec,
    #[serde(default)]
    pub window: Vec<WindowSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump: Option<Vec<(String, String)>>,
    /// Designated `y` for marginalization; defaults to the first window point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_slice: Option<String>,
}

fn config(msg: impl Into<String>) -> Error {
    Error::Configuration(msg.into())
}

impl Scenario {
    /// Parses TOML; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
    }

    pub fn epsilon_schedule(&self) -> Result<Vec<Rational>> {
        self.epsilon.iter().map(|e| parse_rational(e)).collect()
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenarios serialize")
    }
}

/// Everything a run needs, built and validated from a scenario.
pub struct Built {
    pub group: Group,
    /// `G` on `X`, or `H` on `X` for the semidirect suite.
    pub action: TransformationGroup,
    pub windows: Vec<Window>,
    pub epsilon: Vec<Rational>,
    pub net: Vec<NetFunction>,
    pub pairs: Vec<FoelnerPair>,
    pub product: Option<ProductParts>,
    pub bump: Option<FinFn<Element>>,
}

/// The factors used by the semidirect suite.
pub struct ProductParts {
    pub on_normal: TransformationGroup,
    pub on_pairs: TransformationGroup,
    pub f_net: Vec<NetFunction>,
    pub g_net: Vec<NetFunction>,
    /// Windows on `X × X` and `G`.
    pub pair_windows: Vec<Window>,
    pub y_slice: Point,
}

fn ball_set(group: &Group, radius: usize) -> Vec<Element> {
    match group {
        Group::LampConfigs => lamp_window(0, radius as i64).into_iter().collect(),
        _ => standard_ball(group, radius).into_iter().collect(),
    }
}

fn parse_fn(group: &Group, values: &[(String, String)]) -> Result<FinFn<Element>> {
    let mut f = FinFn::new();
    for (g, v) in values {
        f.add_at(group.parse_element(g)?, &parse_rational(v)?);
    }
    Ok(f)
}

fn build_window(spec: &WindowSpec, t: &TransformationGroup) -> Result<Window> {
    let points = match (&spec.points, spec.space_radius) {
        (Some(_), Some(_)) => return Err(config("window gives both points and space_radius")),
        (Some(p), None) => p.iter().map(|p| t.space().parse_point(t.group(), p)).collect::<Result<_>>()?,
        (None, r) => t.space().sample(t.group(), r.unwrap_or(1)),
    };
    let elements = match (&spec.elements, spec.group_radius) {
        (Some(_), Some(_)) => return Err(config("window gives both elements and group_radius")),
        (Some(e), None) => e.iter().map(|e| t.group().parse_element(e)).collect::<Result<_>>()?,
        (None, r) => standard_ball(t.group(), r.unwrap_or(1)).into_iter().collect(),
    };
    Window::new(points, elements)
}

fn radii(net: &NetSpec) -> std::ops::Range<usize> {
    net.first_radius..net.first_radius + net.stages
}

fn ball_net(group: &Group, net: &NetSpec) -> Result<Vec<NetFunction>> {
    radii(net)
        .enumerate()
        .map(|(i, r)| NetFunction::constant(i + 1, uniform_density(group, ball_set(group, r))?))
        .collect()
}

impl Scenario {
    /// Builds the group, action, windows, net and pairs, validating everything.
    pub fn build(&self) -> Result<Built> {
        let group = self.group.build()?;
        let needs_run = !self.suites.is_empty();
        let epsilon = self.epsilon_schedule()?;
        if needs_run {
            check_schedule(&epsilon)?;
            if self.window.is_empty() {
                return Err(config("window schedule must be nonempty"));
            }
            if self.net.stages == 0 && self.net.family != NetFamily::Explicit {
                return Err(config("net needs at least one stage"));
            }
        }
        let theorem = self.suites.contains(&Suite::Theorem23);
        if theorem && self.suites.len() > 1 {
            return Err(config("theorem23 runs on its own: the action describes H on X"));
        }
        if theorem != (self.net.family == NetFamily::ProductNet) && needs_run {
            return Err(config("the product-net family goes with the theorem23 suite and only with it"));
        }
        let bump = self.bump.as_ref().map(|b| parse_fn(&group, b)).transpose()?;

        if theorem {
            return self.build_product(group, epsilon, bump);
        }
        let action = self.action.build(&group)?;
        let windows = self.window.iter().map(|w| build_window(w, &action)).collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::new();
        let net = match self.net.family {
            NetFamily::Balls => ball_net(&group, &self.net)?,
            NetFamily::IndicatorPairs => {
                let a = action.space().sample(&group, self.net.space_radius);
                pairs = radii(&self.net)
                    .map(|r| FoelnerPair::product(&action, a.clone(), ball_set(&group, r)))
                    .collect::<Result<_>>()?;
                pairs.iter().enumerate().map(|(i, w)| indicator_net(w, &action, i + 1)).collect::<Result<_>>()?
            }
            NetFamily::BoundaryMeans => {
                if !matches!(action.space().kind(), SpaceKind::Boundary { .. }) {
                    return Err(config("boundary-means needs a boundary space"));
                }
                radii(&self.net).map(|n| boundary_mean_net(&action, n)).collect::<Result<_>>()?
            }
            NetFamily::Explicit => self.explicit_net(&action)?,
            NetFamily::ProductNet => Vec::new(),
        };
        if self.suites.contains(&Suite::Foelner) && pairs.is_empty() {
            if self.net.family != NetFamily::Balls {
                return Err(config("the foelner suite needs the balls or indicator-pairs family"));
            }
            let a = windows.first().map(|w| w.space_part().to_vec()).unwrap_or_default();
            pairs = radii(&self.net)
                .map(|r| FoelnerPair::product(&action, a.clone(), ball_set(&group, r)))
                .collect::<Result<_>>()?;
        }
        Ok(Built { group, action, windows, epsilon, net, pairs, product: None, bump })
    }

    fn explicit_net(&self, t: &TransformationGroup) -> Result<Vec<NetFunction>> {
        if self.net.stage.is_empty() && !self.suites.is_empty() {
            return Err(config("explicit nets need at least one [[net.stage]]"));
        }
        self.net
            .stage
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let mut sections = BTreeMap::new();
                for s in &st.sections {
                    sections.insert(t.space().parse_point(t.group(), &s.point)?, parse_fn(t.group(), &s.values)?);
                }
                let f = NetFunction::new(i + 1, sections)?;
                match &st.default {
                    Some(d) => f.with_fallback(Fallback::Constant(parse_fn(t.group(), d)?)),
                    None => Ok(f),
                }
            })
            .collect()
    }

    fn build_product(&self, group: Group, epsilon: Vec<Rational>, bump: Option<FinFn<Element>>) -> Result<Built> {
        let d = group
            .semidirect_data()
            .ok_or_else(|| config("theorem23 needs a semidirect group"))?;
        let on_acting = self.action.build(&d.acting)?;
        let on_normal =
            TransformationGroup::new(on_acting.space().clone(), d.normal.clone(), LeftAction::Trivial, None)?;
        let on_pairs = action::product_action(&on_normal, &on_acting, &group)?;
        let windows = self.window.iter().map(|w| build_window(w, &on_acting)).collect::<Result<Vec<_>>>()?;
        let mut pair_windows = Vec::new();
        for spec in &self.window {
            let base = build_window(spec, &on_acting)?;
            let points: Vec<Point> = base
                .space_part()
                .iter()
                .flat_map(|x| base.space_part().iter().map(move |y| Point::pair(x.clone(), y.clone())))
                .collect();
            let elements = match (&spec.elements, spec.group_radius) {
                (Some(e), _) => e.iter().map(|e| group.parse_element(e)).collect::<Result<_>>()?,
                (None, r) => standard_ball(&group, r.unwrap_or(1)).into_iter().collect(),
            };
            pair_windows.push(Window::new(points, elements)?);
        }
        let y_slice = match &self.y_slice {
            Some(y) => on_acting.space().parse_point(&d.acting, y)?,
            None => windows
                .first()
                .map(|w| w.space_part()[0].clone())
                .unwrap_or_else(|| on_acting.space().sample(&d.acting, 1)[0].clone()),
        };
        let f_net = ball_net(&d.normal, &self.net)?;
        let g_net = ball_net(&d.acting, &self.net)?;
        Ok(Built {
            group: group.clone(),
            action: on_acting,
            windows,
            epsilon,
            net: Vec::new(),
            pairs: Vec::new(),
            product: Some(ProductParts { on_normal, on_pairs, f_net, g_net, pair_windows, y_slice }),
            bump,
        })
    }
}
