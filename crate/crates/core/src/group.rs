//! Discrete group families with canonical normal forms.
//!
//! Every element is stored in its canonical form, so structural equality of
//! [`Element`] values is group equality. The families shipped here are
//! free-abelian groups, free groups, cyclic groups, groups given by a
//! multiplication table, the finitely supported lamp configurations
//! `⊕_{i∈ℤ} ℤ/2`, and semidirect products `N ⋊_τ H` of any of these.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{domain, Error, Result};
use crate::rational::{one, Rational};

const LETTER_NAMES: &[u8] = b"abcdfghijklmnopqrstuvwxyz";

/// A free generator or its inverse, stored as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        let v = generator as i32 + 1;
        Letter(if inverted { -v } else { v })
    }

    /// Zero-based generator index.
    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn name(self) -> char {
        let c = LETTER_NAMES.get(self.generator()).copied().unwrap_or(b'?') as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        let lower = c.to_ascii_lowercase() as u8;
        let idx = LETTER_NAMES.iter().position(|&b| b == lower)?;
        Some(Letter::new(idx, c.is_ascii_uppercase()))
    }
}

// a < A < b < B < ...: the order used for lexicographic enumeration.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.generator(), self.is_inverse()).cmp(&(other.generator(), other.is_inverse()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Appends `letters` to an already reduced word, cancelling adjacent inverse pairs.
pub fn reduce_into(word: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if word.last() == Some(&l.inverse()) {
            word.pop();
        } else {
            word.push(l);
        }
    }
}

pub fn reduce_word(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut w = Vec::new();
    reduce_into(&mut w, letters);
    w
}

pub fn word_inverse(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

pub fn format_word(word: &[Letter]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|l| l.name()).collect()
    }
}

pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    if text.is_empty() || text == "e" || text == "1" {
        return Ok(Vec::new());
    }
    let letters = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            if c == 'e' || c == 'E' {
                return Err(Error::Parse(format!("'e' is the identity, not a letter: {text:?}")));
            }
            Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {text:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_word(letters))
}

/// A group element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Coordinates in ℤ^d.
    Vector(Vec<i64>),
    /// Freely reduced word.
    Word(Vec<Letter>),
    /// Residue in `0..m`.
    Residue(u64),
    /// Row index into a multiplication table.
    Index(usize),
    /// Support of a finitely supported ℤ/2 configuration over ℤ.
    Lamps(BTreeSet<i64>),
    /// `(n, h)` in a semidirect product.
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    pub fn int(v: i64) -> Self {
        Element::Vector(vec![v])
    }

    pub fn word(text: &str) -> Self {
        Element::Word(parse_word(text).expect("valid word literal"))
    }

    pub fn lamps(indices: impl IntoIterator<Item = i64>) -> Self {
        Element::Lamps(indices.into_iter().collect())
    }

    pub fn pair(n: Element, h: Element) -> Self {
        Element::Pair(Box::new(n), Box::new(h))
    }

    pub fn as_pair(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Pair(n, h) => Some((n, h)),
            _ => None,
        }
    }

    /// Word length for free-group elements.
    pub fn word_len(&self) -> Option<usize> {
        match self {
            Element::Word(w) => Some(w.len()),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Element::Word(w) => write!(f, "{}", format_word(w)),
            Element::Residue(r) => write!(f, "{r}"),
            Element::Index(i) => write!(f, "{i}"),
            Element::Lamps(s) => {
                write!(f, "{{")?;
                for (i, c) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
            Element::Pair(n, h) => write!(f, "({n}|{h})"),
        }
    }
}

/// A finite group given by its Cayley table.
#[derive(Debug, PartialEq, Eq)]
pub struct FiniteTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteTable {
    pub fn new(table: Vec<Vec<usize>>, generators: Option<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Construction("empty multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::Construction("multiplication table is not a closed square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Construction("multiplication table has no identity".into()))?;
        let mut inverses = Vec::with_capacity(n);
        #[allow(clippy::needless_range_loop)]
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::Construction(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Construction(format!(
                            "multiplication table is not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let generators = match generators {
            Some(gens) => {
                if gens.iter().any(|&g| g >= n) {
                    return Err(Error::Construction("generator index out of range".into()));
                }
                let mut sym: BTreeSet<usize> = gens.iter().copied().collect();
                sym.extend(gens.iter().map(|&g| inverses[g]));
                sym.into_iter().collect()
            }
            None => (0..n).filter(|&g| g != identity).collect(),
        };
        Ok(FiniteTable { table, identity, inverses, generators })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// How `H` acts on `N` in a semidirect product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauAction {
    Identity,
    /// `τ_h(n) = n^{(-1)^h}`, with parity read from the first coordinate of `h`.
    SignFlip,
    /// Index shift on lamp configurations, or cyclic coordinate rotation on ℤ^d.
    Shift,
    /// `images[h][n]` for finite `H` (indices or residues) acting on finite `N`.
    Table(Arc<Vec<Vec<usize>>>),
}

impl TauAction {
    pub fn name(&self) -> &'static str {
        match self {
            TauAction::Identity => "identity",
            TauAction::SignFlip => "sign-flip",
            TauAction::Shift => "shift",
            TauAction::Table(_) => "table",
        }
    }

    /// `τ_h(n)`.
    pub fn apply(&self, normal: &Group, h: &Element, n: &Element) -> Result<Element> {
        match self {
            TauAction::Identity => Ok(n.clone()),
            TauAction::SignFlip => {
                if parity_of(h)? {
                    normal.inverse(n)
                } else {
                    Ok(n.clone())
                }
            }
            TauAction::Shift => {
                let k = shift_amount(h)?;
                match (normal, n) {
                    (Group::LampConfigs, Element::Lamps(s)) => {
                        Ok(Element::Lamps(s.iter().map(|i| i + k).collect()))
                    }
                    (Group::FreeAbelian { rank }, Element::Vector(v)) if *rank > 0 => {
                        let d = *rank as i64;
                        let mut out = vec![0; v.len()];
                        for (i, c) in v.iter().enumerate() {
                            out[((i as i64 + k).rem_euclid(d)) as usize] = *c;
                        }
                        Ok(Element::Vector(out))
                    }
                    _ => domain(format!("shift action undefined on {n} in {}", normal.name())),
                }
            }
            TauAction::Table(images) => {
                let hi = match h {
                    Element::Index(i) => *i,
                    Element::Residue(r) => *r as usize,
                    _ => return domain(format!("table action needs a finite acting element, got {h}")),
                };
                let row = images
                    .get(hi)
                    .ok_or_else(|| Error::Domain(format!("no table row for {h}")))?;
                match n {
                    Element::Index(i) => row
                        .get(*i)
                        .map(|&v| Element::Index(v))
                        .ok_or_else(|| Error::Domain(format!("no table entry for {n}"))),
                    Element::Residue(r) => row
                        .get(*r as usize)
                        .map(|&v| Element::Residue(v as u64))
                        .ok_or_else(|| Error::Domain(format!("no table entry for {n}"))),
                    _ => domain(format!("table action needs a finite normal element, got {n}")),
                }
            }
        }
    }
}

fn parity_of(h: &Element) -> Result<bool> {
    match h {
        Element::Vector(v) if !v.is_empty() => Ok(v[0].rem_euclid(2) == 1),
        Element::Residue(r) => Ok(r % 2 == 1),
        _ => domain(format!("sign-flip needs an integer-valued acting element, got {h}")),
    }
}

fn shift_amount(h: &Element) -> Result<i64> {
    match h {
        Element::Vector(v) if !v.is_empty() => Ok(v[0]),
        Element::Residue(r) => Ok(*r as i64),
        _ => domain(format!("shift needs an integer-valued acting element, got {h}")),
    }
}

/// The modular function `σ: H → (0, ∞)` of a semidirect product.
#[derive(Clone)]
pub enum ModularWeight {
    /// `σ ≡ 1`, the only value compatible with counting measure.
    Unit,
    /// `σ(h) = base^{h₁}` on a free-abelian `H`.
    Power(Rational),
    Custom(Arc<dyn Fn(&Element) -> Rational + Send + Sync>),
}

impl ModularWeight {
    pub fn value(&self, h: &Element) -> Rational {
        match self {
            ModularWeight::Unit => one(),
            ModularWeight::Power(base) => match h {
                Element::Vector(v) if !v.is_empty() => pow_rational(base, v[0]),
                _ => one(),
            },
            ModularWeight::Custom(f) => f(h),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            ModularWeight::Unit => true,
            ModularWeight::Power(b) => b.is_one(),
            ModularWeight::Custom(_) => false,
        }
    }
}

impl fmt::Debug for ModularWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModularWeight::Unit => write!(f, "Unit"),
            ModularWeight::Power(b) => write!(f, "Power({b})"),
            ModularWeight::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PartialEq for ModularWeight {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ModularWeight::Custom(a), ModularWeight::Custom(b)) => Arc::ptr_eq(a, b),
            (a, b) if a.is_unit() && b.is_unit() => true,
            (ModularWeight::Power(a), ModularWeight::Power(b)) => a == b,
            _ => false,
        }
    }
}

fn pow_rational(base: &Rational, exp: i64) -> Rational {
    let mut acc = one();
    let b = if exp < 0 { base.recip() } else { base.clone() };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

#[derive(Debug, PartialEq)]
pub struct SemidirectData {
    pub normal: Group,
    pub acting: Group,
    pub tau: TauAction,
    pub sigma: ModularWeight,
}

/// An immutable group descriptor.
#[derive(Clone, Debug, PartialEq)]
pub enum Group {
    /// ℤ^rank; rank 0 is the trivial group.
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Cyclic { order: u64 },
    Finite(Arc<FiniteTable>),
    /// `⊕_{i∈ℤ} ℤ/2`, written multiplicatively as symmetric difference of supports.
    LampConfigs,
    Semidirect(Arc<SemidirectData>),
}

impl Group {
    pub fn trivial() -> Self {
        Group::FreeAbelian { rank: 0 }
    }

    pub fn integers() -> Self {
        Group::FreeAbelian { rank: 1 }
    }

    pub fn free_abelian(rank: usize) -> Self {
        Group::FreeAbelian { rank }
    }

    pub fn free(rank: usize) -> Self {
        Group::Free { rank }
    }

    pub fn cyclic(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Construction("cyclic group of order 0".into()));
        }
        Ok(Group::Cyclic { order })
    }

    pub fn finite(table: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Group::Finite(Arc::new(FiniteTable::new(table, None)?)))
    }

    /// ℤ ⋊ ℤ with `τ_h(n) = (−1)^h n`.
    pub fn infinite_dihedral_type() -> Self {
        semidirect(Group::integers(), Group::integers(), TauAction::SignFlip, ModularWeight::Unit)
            .expect("sign action on Z is a homomorphism")
    }

    /// `(⊕_ℤ ℤ/2) ⋊ ℤ` with the index shift.
    pub fn lamplighter() -> Self {
        semidirect(Group::LampConfigs, Group::integers(), TauAction::Shift, ModularWeight::Unit)
            .expect("shift on lamp configurations is a homomorphism")
    }

    pub fn name(&self) -> String {
        match self {
            Group::FreeAbelian { rank: 0 } => "trivial".into(),
            Group::FreeAbelian { rank: 1 } => "Z".into(),
            Group::FreeAbelian { rank } => format!("Z^{rank}"),
            Group::Free { rank } => format!("F_{rank}"),
            Group::Cyclic { order } => format!("Z/{order}"),
            Group::Finite(t) => format!("finite({})", t.order()),
            Group::LampConfigs => "lamps".into(),
            Group::Semidirect(d) => {
                format!("({} x| {}, {})", d.normal.name(), d.acting.name(), d.tau.name())
            }
        }
    }

    pub fn semidirect_data(&self) -> Option<&SemidirectData> {
        match self {
            Group::Semidirect(d) => Some(d),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::FreeAbelian { rank } => Element::Vector(vec![0; *rank]),
            Group::Free { .. } => Element::Word(Vec::new()),
            Group::Cyclic { .. } => Element::Residue(0),
            Group::Finite(t) => Element::Index(t.identity),
            Group::LampConfigs => Element::Lamps(BTreeSet::new()),
            Group::Semidirect(d) => Element::pair(d.normal.identity(), d.acting.identity()),
        }
    }

    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (Group::FreeAbelian { rank }, Element::Vector(v)) => v.len() == *rank,
            (Group::Free { rank }, Element::Word(w)) => {
                w.iter().all(|l| l.generator() < *rank) && w.windows(2).all(|p| p[0] != p[1].inverse())
            }
            (Group::Cyclic { order }, Element::Residue(r)) => r < order,
            (Group::Finite(t), Element::Index(i)) => *i < t.order(),
            (Group::LampConfigs, Element::Lamps(_)) => true,
            (Group::Semidirect(d), Element::Pair(n, h)) => d.normal.contains(n) && d.acting.contains(h),
            _ => false,
        }
    }

    fn check(&self, g: &Element) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            domain(format!("{g} is not an element of {}", self.name()))
        }
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.multiply_unchecked(g, h))
    }

    // Operands are known members; used on hot paths after validation.
    fn multiply_unchecked(&self, g: &Element, h: &Element) -> Element {
        match (self, g, h) {
            (Group::FreeAbelian { .. }, Element::Vector(a), Element::Vector(b)) => {
                Element::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Group::Free { .. }, Element::Word(a), Element::Word(b)) => {
                let mut w = a.clone();
                reduce_into(&mut w, b.iter().copied());
                Element::Word(w)
            }
            (Group::Cyclic { order }, Element::Residue(a), Element::Residue(b)) => {
                Element::Residue((a + b) % order)
            }
            (Group::Finite(t), Element::Index(a), Element::Index(b)) => Element::Index(t.table[*a][*b]),
            (Group::LampConfigs, Element::Lamps(a), Element::Lamps(b)) => {
                Element::Lamps(a.symmetric_difference(b).copied().collect())
            }
            (Group::Semidirect(d), Element::Pair(n1, h1), Element::Pair(n2, h2)) => {
                let twisted = d
                    .tau
                    .apply(&d.normal, h1, n2)
                    .expect("automorphism action validated at construction");
                Element::pair(
                    d.normal.multiply_unchecked(n1, &twisted),
                    d.acting.multiply_unchecked(h1, h2),
                )
            }
            _ => unreachable!("operands validated by caller"),
        }
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.inverse_unchecked(g))
    }

    fn inverse_unchecked(&self, g: &Element) -> Element {
        match (self, g) {
            (Group::FreeAbelian { .. }, Element::Vector(v)) => Element::Vector(v.iter().map(|x| -x).collect()),
            (Group::Free { .. }, Element::Word(w)) => Element::Word(word_inverse(w)),
            (Group::Cyclic { order }, Element::Residue(r)) => Element::Residue((order - r) % order),
            (Group::Finite(t), Element::Index(i)) => Element::Index(t.inverses[*i]),
            (Group::LampConfigs, Element::Lamps(_)) => g.clone(),
            (Group::Semidirect(d), Element::Pair(n, h)) => {
                let h_inv = d.acting.inverse_unchecked(h);
                let n_inv = d.normal.inverse_unchecked(n);
                let n_part = d
                    .tau
                    .apply(&d.normal, &h_inv, &n_inv)
                    .expect("automorphism action validated at construction");
                Element::pair(n_part, h_inv)
            }
            _ => unreachable!("operand validated by caller"),
        }
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: &Element, h: &Element) -> Result<Element> {
        let gh = self.multiply(g, h)?;
        self.multiply(&gh, &self.inverse(g)?)
    }

    /// Symmetric generating set used for balls and word length.
    ///
    /// Lamp configurations are not finitely generated; the single lamp `{0}`
    /// is returned so that, together with the shift, it generates the lamplighter.
    pub fn generators(&self) -> Vec<Element> {
        let mut gens = BTreeSet::new();
        match self {
            Group::FreeAbelian { rank } => {
                for i in 0..*rank {
                    for s in [1, -1] {
                        let mut v = vec![0; *rank];
                        v[i] = s;
                        gens.insert(Element::Vector(v));
                    }
                }
            }
            Group::Free { rank } => {
                for i in 0..*rank {
                    gens.insert(Element::Word(vec![Letter::new(i, false)]));
                    gens.insert(Element::Word(vec![Letter::new(i, true)]));
                }
            }
            Group::Cyclic { order } => {
                if *order > 1 {
                    gens.insert(Element::Residue(1));
                    gens.insert(Element::Residue(order - 1));
                }
            }
            Group::Finite(t) => gens.extend(t.generators.iter().map(|&i| Element::Index(i))),
            Group::LampConfigs => {
                gens.insert(Element::lamps([0]));
            }
            Group::Semidirect(d) => {
                let e_n = d.normal.identity();
                let e_h = d.acting.identity();
                gens.extend(d.normal.generators().into_iter().map(|n| Element::pair(n, e_h.clone())));
                gens.extend(d.acting.generators().into_iter().map(|h| Element::pair(e_n.clone(), h)));
            }
        }
        gens.into_iter().collect()
    }

    /// Counting Haar weight, twisted by `σ(h)` on semidirect products.
    pub fn haar_weight(&self, g: &Element) -> Rational {
        match (self, g) {
            (Group::Semidirect(d), Element::Pair(n, h)) => {
                d.sigma.value(h) * d.normal.haar_weight(n) * d.acting.haar_weight(h)
            }
            _ => one(),
        }
    }

    /// True when every Haar weight is 1, i.e. all `σ` factors are trivial.
    pub fn has_counting_weight(&self) -> bool {
        match self {
            Group::Semidirect(d) => {
                d.sigma.is_unit() && d.normal.has_counting_weight() && d.acting.has_counting_weight()
            }
            _ => true,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::FreeAbelian { .. } | Group::Cyclic { .. } | Group::LampConfigs => true,
            Group::Free { rank } => *rank <= 1,
            Group::Finite(t) => {
                let n = t.order();
                (0..n).all(|a| (0..n).all(|b| t.table[a][b] == t.table[b][a]))
            }
            Group::Semidirect(d) => {
                d.normal.is_abelian() && d.acting.is_abelian() && d.tau == TauAction::Identity
            }
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        let bad = |why: &str| Error::Parse(format!("{text:?} is not an element of {}: {why}", self.name()));
        let g = match self {
            Group::FreeAbelian { rank } => {
                if *rank == 0 && matches!(text, "e" | "()" | "0") {
                    Element::Vector(Vec::new())
                } else if text == "e" {
                    self.identity()
                } else if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                    let coords = inner
                        .split(',')
                        .map(|c| c.trim().parse::<i64>().map_err(|_| bad("coordinate")))
                        .collect::<Result<Vec<_>>>()?;
                    Element::Vector(coords)
                } else {
                    Element::Vector(vec![text.parse::<i64>().map_err(|_| bad("integer"))?])
                }
            }
            Group::Free { .. } => Element::Word(parse_word(text)?),
            Group::Cyclic { order } => {
                let v = if text == "e" { 0 } else { text.parse::<i64>().map_err(|_| bad("integer"))? };
                Element::Residue(v.rem_euclid(*order as i64) as u64)
            }
            Group::Finite(t) => {
                if text == "e" {
                    Element::Index(t.identity)
                } else {
                    Element::Index(text.parse::<usize>().map_err(|_| bad("table index"))?)
                }
            }
            Group::LampConfigs => {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| bad("expected {i,j,..}"))?;
                let mut set = BTreeSet::new();
                for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let i = part.parse::<i64>().map_err(|_| bad("lamp index"))?;
                    // Repeated indices cancel in ℤ/2.
                    if !set.insert(i) {
                        set.remove(&i);
                    }
                }
                Element::Lamps(set)
            }
            Group::Semidirect(d) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("expected (n|h)"))?;
                let split = top_level_bar(inner).ok_or_else(|| bad("expected (n|h)"))?;
                let n = d.normal.parse_element(&inner[..split])?;
                let h = d.acting.parse_element(&inner[split + 1..])?;
                Element::pair(n, h)
            }
        };
        if !self.contains(&g) {
            return Err(bad("out of range"));
        }
        Ok(g)
    }
}

fn top_level_bar(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// The automorphism `τ_h` of `N`, with `τ_{h⁻¹}` as its inverse.
#[derive(Clone, Debug)]
pub struct Automorphism {
    normal: Group,
    acting: Group,
    tau: TauAction,
    h: Element,
    h_inv: Element,
}

impl Automorphism {
    pub fn new(normal: &Group, acting: &Group, tau: &TauAction, h: &Element) -> Result<Self> {
        let h_inv = acting.inverse(h)?;
        Ok(Automorphism {
            normal: normal.clone(),
            acting: acting.clone(),
            tau: tau.clone(),
            h: h.clone(),
            h_inv,
        })
    }

    pub fn of_semidirect(g: &Group, h: &Element) -> Result<Self> {
        let d = g
            .semidirect_data()
            .ok_or_else(|| Error::Domain(format!("{} is not a semidirect product", g.name())))?;
        Automorphism::new(&d.normal, &d.acting, &d.tau, h)
    }

    pub fn forward(&self, n: &Element) -> Result<Element> {
        self.normal.check(n)?;
        self.tau.apply(&self.normal, &self.h, n)
    }

    pub fn backward(&self, n: &Element) -> Result<Element> {
        self.normal.check(n)?;
        self.tau.apply(&self.normal, &self.h_inv, n)
    }

    pub fn acting_element(&self) -> &Element {
        &self.h
    }

    pub fn acting_group(&self) -> &Group {
        &self.acting
    }
}

const SPOT_CHECK_SAMPLE: usize = 13;

fn spot_sample(g: &Group) -> Vec<Element> {
    let mut sample: Vec<Element> = ball(g, &g.generators(), 2)
        .map(|b| b.into_iter().collect())
        .unwrap_or_else(|_| vec![g.identity()]);
    if let Group::LampConfigs = g {
        sample.extend([Element::lamps([-1, 2]), Element::lamps([3]), Element::lamps([-2, 0, 1])]);
    }
    if sample.len() > SPOT_CHECK_SAMPLE {
        let step = sample.len() / SPOT_CHECK_SAMPLE + 1;
        sample = sample.into_iter().step_by(step).collect();
    }
    sample
}

/// Builds `N ⋊_τ H`, spot-checking that `τ` is a homomorphism into `Aut(N)`
/// and `σ` a positive multiplicative weight.
pub fn semidirect(normal: Group, acting: Group, tau: TauAction, sigma: ModularWeight) -> Result<Group> {
    if let ModularWeight::Power(base) = &sigma {
        if !base.is_positive() {
            return Err(Error::Construction("modular weight base must be positive".into()));
        }
        if !matches!(acting, Group::FreeAbelian { rank } if rank > 0) && !base.is_one() {
            return Err(Error::Construction("power modular weight needs a free-abelian acting group".into()));
        }
    }
    let ns = spot_sample(&normal);
    let hs = spot_sample(&acting);
    let fail = |what: String| Err(Error::Construction(format!("tau is not a homomorphism H -> Aut(N): {what}")));
    for h in &hs {
        let sig = sigma.value(h);
        if !sig.is_positive() {
            return Err(Error::Construction(format!("sigma({h}) = {sig} is not positive")));
        }
        for n in &ns {
            let img = tau.apply(&normal, h, n).map_err(|e| Error::Construction(e.to_string()))?;
            if !normal.contains(&img) {
                return fail(format!("tau_{h}({n}) = {img} leaves N"));
            }
        }
        for n1 in &ns {
            for n2 in &ns {
                let lhs = tau.apply(&normal, h, &normal.multiply_unchecked(n1, n2))?;
                let rhs = normal.multiply_unchecked(&tau.apply(&normal, h, n1)?, &tau.apply(&normal, h, n2)?);
                if lhs != rhs {
                    return fail(format!("tau_{h} does not preserve the product {n1}*{n2}"));
                }
            }
        }
        for h2 in &hs {
            let h12 = acting.multiply_unchecked(h, h2);
            if sigma.value(&h12) != sig.clone() * sigma.value(h2) {
                return Err(Error::Construction(format!("sigma is not multiplicative at ({h},{h2})")));
            }
            for n in &ns {
                let lhs = tau.apply(&normal, &h12, n)?;
                let rhs = tau.apply(&normal, h, &tau.apply(&normal, h2, n)?)?;
                if lhs != rhs {
                    return fail(format!("tau_({h}{h2}) != tau_{h} o tau_{h2} at {n}"));
                }
            }
        }
    }
    let e_h = acting.identity();
    for n in &ns {
        if tau.apply(&normal, &e_h, n)? != *n {
            return fail(format!("tau_e moves {n}"));
        }
    }
    Ok(Group::Semidirect(Arc::new(SemidirectData { normal, acting, tau, sigma })))
}

/// All elements of word length at most `radius` over `gens`.
pub fn ball(group: &Group, gens: &[Element], radius: usize) -> Result<BTreeSet<Element>> {
    for s in gens {
        group.check(s)?;
    }
    let mut seen = BTreeSet::new();
    let start = group.identity();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((g, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for s in gens {
            let next = group.multiply_unchecked(&g, s);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(seen)
}

/// Ball over the group's default generating set.
pub fn standard_ball(group: &Group, radius: usize) -> BTreeSet<Element> {
    ball(group, &group.generators(), radius).expect("default generators belong to the group")
}

/// All configurations supported in `lo..=hi`.
pub fn lamp_window(lo: i64, hi: i64) -> BTreeSet<Element> {
    let sites: Vec<i64> = (lo..=hi).collect();
    assert!(sites.len() < 20, "lamp window too wide to enumerate");
    (0u32..(1u32 << sites.len()))
        .map(|mask| {
            Element::Lamps(
                sites
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, s)| *s)
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn z() -> Group {
        Group::integers()
    }

    #[test]
    fn integer_addition() {
        assert_eq!(z().multiply(&Element::int(2), &Element::int(3)).unwrap(), Element::int(5));
        assert_eq!(z().inverse(&Element::int(4)).unwrap(), Element::int(-4));
    }

    #[test]
    fn free_reduction_and_reversal() {
        let f2 = Group::free(2);
        assert_eq!(f2.multiply(&Element::word("a"), &Element::word("A")).unwrap(), f2.identity());
        assert_eq!(f2.inverse(&Element::word("ab")).unwrap(), Element::word("BA"));
    }

    #[test]
    fn twisted_law_on_sign_action() {
        let g = Group::infinite_dihedral_type();
        let p = |n, h| Element::pair(Element::int(n), Element::int(h));
        assert_eq!(g.multiply(&p(1, 1), &p(1, 1)).unwrap(), p(0, 2));
        assert_eq!(g.inverse(&p(3, 1)).unwrap(), p(3, -1));
        let conj = g.multiply(&g.multiply(&p(0, 1), &p(7, 0)).unwrap(), &p(0, -1)).unwrap();
        assert_eq!(conj, p(-7, 0));
    }

    #[test]
    fn mixed_operands_rejected() {
        let err = z().multiply(&Element::int(1), &Element::word("a")).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(Group::free(2).multiply(&Element::word("c"), &Element::word("a")).is_err());
    }

    #[test]
    fn ball_sizes() {
        let f2 = Group::free(2);
        let b1 = standard_ball(&f2, 1);
        let expect: BTreeSet<_> = ["e", "a", "A", "b", "B"].iter().map(|w| Element::word(w)).collect();
        assert_eq!(b1, expect);
        assert_eq!(standard_ball(&z(), 3).len(), 7);
        // |B_r| = 2·3^r − 1 by breadth-first enumeration of reduced words
        for r in 0..5 {
            assert_eq!(standard_ball(&f2, r).len(), 2 * 3usize.pow(r as u32) - 1);
        }
    }

    #[test]
    fn lamplighter_weights_and_law() {
        let g = Group::lamplighter();
        let x = Element::pair(Element::lamps([0, 2]), Element::int(1));
        let y = Element::pair(Element::lamps([1]), Element::int(-3));
        let xy = g.multiply(&x, &y).unwrap();
        assert_eq!(xy, Element::pair(Element::lamps([0]), Element::int(-2)));
        assert_eq!(g.haar_weight(&xy), one());
        assert_eq!(g.multiply(&x, &g.inverse(&x).unwrap()).unwrap(), g.identity());
    }

    #[test]
    fn rejects_non_homomorphic_tau() {
        // sign flip on Z/3 acting: parity is not a homomorphism from an odd cyclic group
        let err = semidirect(Group::integers(), Group::cyclic(3).unwrap(), TauAction::SignFlip, ModularWeight::Unit);
        assert!(matches!(err, Err(Error::Construction(_))));
        // inversion is not an automorphism of F_2
        let err = semidirect(Group::free(2), Group::integers(), TauAction::SignFlip, ModularWeight::Unit);
        assert!(matches!(err, Err(Error::Construction(_))));
    }

    #[test]
    fn power_sigma_is_multiplicative_and_weights() {
        let g = semidirect(Group::integers(), Group::integers(), TauAction::Identity, ModularWeight::Power(int(2)))
            .unwrap();
        assert_eq!(g.haar_weight(&Element::pair(Element::int(5), Element::int(3))), int(8));
        assert!(!g.has_counting_weight());
        let bad = semidirect(Group::integers(), Group::integers(), TauAction::Identity, ModularWeight::Power(int(-2)));
        assert!(bad.is_err());
    }

    #[test]
    fn finite_table_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = Group::finite(z3).unwrap();
        assert_eq!(g.inverse(&Element::Index(1)).unwrap(), Element::Index(2));
        assert!(Group::finite(vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn automorphism_round_trip() {
        let g = Group::lamplighter();
        let tau = Automorphism::of_semidirect(&g, &Element::int(3)).unwrap();
        let n = Element::lamps([0, 5]);
        assert_eq!(tau.forward(&n).unwrap(), Element::lamps([3, 8]));
        assert_eq!(tau.backward(&tau.forward(&n).unwrap()).unwrap(), n);
    }

    #[test]
    fn parse_and_display_agree() {
        let groups = [
            Group::integers(),
            Group::free_abelian(2),
            Group::free(2),
            Group::cyclic(5).unwrap(),
            Group::lamplighter(),
            Group::trivial(),
        ];
        for g in &groups {
            for el in standard_ball(g, 2) {
                assert_eq!(g.parse_element(&el.to_string()).unwrap(), el, "{}", g.name());
            }
        }
        assert!(Group::free(2).parse_element("aXb").is_err());
    }

    #[test]
    fn shift_rotates_coordinates() {
        let g = semidirect(Group::free_abelian(2), Group::integers(), TauAction::Shift, ModularWeight::Unit).unwrap();
        let t = Automorphism::of_semidirect(&g, &Element::int(1)).unwrap();
        assert_eq!(t.forward(&Element::Vector(vec![3, 7])).unwrap(), Element::Vector(vec![7, 3]));
    }
}
