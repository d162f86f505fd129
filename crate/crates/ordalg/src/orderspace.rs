//! Presentations of compact ordered spaces.
//!
//! Three kinds of space are presentable: the full double arrow (every
//! coordinate of `(0,1)` split into a left point `x⁻` and a right point
//! `x⁺`), the double arrow minus a finite set of coordinates that stay
//! undoubled, and finite chains. Closed subsets are finite lists of
//! interval, point and solid-segment components in a canonical form where
//! set equality is structural equality.
//!
//! The Cantor–Bendixson derivative and kernel operate on these canonical
//! presentations. At this finite scale every single-point component is
//! isolated (a separate point always sits at a positive distance from the
//! other components), every canonical nondegenerate interval is perfect,
//! and every solid segment is perfect, so the derivative stabilizes after
//! one step.
//!
//! Solid segments are the only presentable carriers of Cantor subsets:
//! a double arrow over a co-finite coordinate set is totally
//! disconnected, and subsets of the line whose complement hides a Cantor
//! set in some other fashion have no finite description in this
//! language.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Side tag of a (possibly doubled) coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Minus,
    Plus,
}

impl Serialize for Side {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Side::Minus => "-",
            Side::Plus => "+",
        })
    }
}

impl<'de> Deserialize<'de> for Side {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "-" => Ok(Side::Minus),
            "+" => Ok(Side::Plus),
            other => Err(serde::de::Error::custom(format!(
                "side must be \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

/// A point of a double-arrow-type presentation: an exact coordinate plus a
/// side tag, ordered lexicographically with `minus < plus`.
///
/// For finite chains the coordinate is the integer index and the tag is
/// always `+`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Rat,
    pub side: Side,
}

impl Point {
    pub fn new(x: Rat, side: Side) -> Self {
        Point { x, side }
    }

    pub fn minus(x: Rat) -> Self {
        Point::new(x, Side::Minus)
    }

    pub fn plus(x: Rat) -> Self {
        Point::new(x, Side::Plus)
    }

    /// The first element `0_X` (never doubled).
    pub fn first() -> Self {
        Point::plus(Rat::zero())
    }

    /// The last element `1_X` (never doubled).
    pub fn last() -> Self {
        Point::minus(Rat::one())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Minus => "⁻",
            Side::Plus => "⁺",
        };
        write!(f, "({}){}", self.x, tag)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Total order on points; the realization of the lexicographic order.
pub fn compare_points(p: &Point, q: &Point) -> std::cmp::Ordering {
    p.cmp(q)
}

/// A presentable compact ordered space.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum SpacePresentation {
    /// The full double arrow `D((0,1))`.
    #[serde(rename = "full")]
    DoubleArrowFull,
    /// `D((0,1) \ F)` for a finite `F`: coordinates in `F` stay undoubled.
    #[serde(rename = "minus")]
    DoubleArrowMinus { coords: BTreeSet<Rat> },
    /// A finite chain of `n` points with the integer order.
    #[serde(rename = "chain")]
    FiniteChain { n: u32 },
}

impl<'de> Deserialize<'de> for SpacePresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(tag = "kind")]
        enum Raw {
            #[serde(rename = "full")]
            Full,
            #[serde(rename = "minus")]
            Minus { coords: BTreeSet<Rat> },
            #[serde(rename = "chain")]
            Chain { n: u32 },
        }
        match Raw::deserialize(d)? {
            Raw::Full => Ok(SpacePresentation::full()),
            Raw::Minus { coords } => {
                SpacePresentation::minus(coords).map_err(serde::de::Error::custom)
            }
            Raw::Chain { n } => SpacePresentation::chain(n).map_err(serde::de::Error::custom),
        }
    }
}

/// Chains larger than this are rejected: whole-space presentations
/// materialize one component per point.
pub const MAX_CHAIN: u32 = 100_000;

impl SpacePresentation {
    pub fn full() -> Self {
        SpacePresentation::DoubleArrowFull
    }

    pub fn minus<I: IntoIterator<Item = Rat>>(coords: I) -> Result<Self> {
        let coords: BTreeSet<Rat> = coords.into_iter().collect();
        for c in &coords {
            if !c.in_open_unit() {
                return Err(Error::InvalidPresentation(format!(
                    "undoubled coordinate {c} outside (0,1)"
                )));
            }
        }
        Ok(SpacePresentation::DoubleArrowMinus { coords })
    }

    pub fn chain(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPresentation("chain needs n ≥ 1".into()));
        }
        if n > MAX_CHAIN {
            return Err(Error::InvalidPresentation(format!(
                "chain length {n} exceeds the {MAX_CHAIN}-point cap"
            )));
        }
        Ok(SpacePresentation::FiniteChain { n })
    }

    pub fn is_chain(&self) -> bool {
        matches!(self, SpacePresentation::FiniteChain { .. })
    }

    /// Whether the coordinate `x` carries both side tags.
    pub fn is_doubled(&self, x: &Rat) -> bool {
        match self {
            SpacePresentation::DoubleArrowFull => x.in_open_unit(),
            SpacePresentation::DoubleArrowMinus { coords } => {
                x.in_open_unit() && !coords.contains(x)
            }
            SpacePresentation::FiniteChain { .. } => false,
        }
    }

    /// Checks that `p` denotes a point of this space. Undoubled interior
    /// coordinates, chain indices and `0_X` carry the `+` tag; `1_X`
    /// carries `-`.
    pub fn validate_point(&self, p: &Point) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidPoint {
                point: p.to_string(),
                reason: reason.into(),
            })
        };
        match self {
            SpacePresentation::FiniteChain { n } => {
                if !p.x.is_integer() || p.x.is_negative() || p.x >= Rat::from_int(*n as i64) {
                    return bad("chain index out of range");
                }
                if p.side != Side::Plus {
                    return bad("chain points carry the + tag");
                }
                Ok(())
            }
            _ => {
                if !p.x.in_closed_unit() {
                    return bad("coordinate outside [0,1]");
                }
                if p.x.is_zero() && p.side != Side::Plus {
                    return bad("0_X is never doubled");
                }
                if p.x == Rat::one() && p.side != Side::Minus {
                    return bad("1_X is never doubled");
                }
                if p.x.in_open_unit() && !self.is_doubled(&p.x) && p.side != Side::Plus {
                    return bad("undoubled coordinates carry the + tag");
                }
                Ok(())
            }
        }
    }

    /// The whole space as a canonical closed set.
    pub fn whole_space(&self) -> ClosedSet {
        match self {
            SpacePresentation::FiniteChain { n } => {
                let components = (0..*n)
                    .map(|i| Component::Point(Point::plus(Rat::from_int(i as i64))))
                    .collect();
                ClosedSet { components }
            }
            _ => ClosedSet {
                components: vec![Component::Interval(Point::first(), Point::last())],
            },
        }
    }
}

/// `true` iff `p ⋖ q`: nothing lies strictly between.
pub fn is_neighbor_pair(space: &SpacePresentation, p: &Point, q: &Point) -> Result<bool> {
    space.validate_point(p)?;
    space.validate_point(q)?;
    if p >= q {
        return Err(Error::NotOrdered);
    }
    match space {
        SpacePresentation::FiniteChain { .. } => Ok(&p.x + &Rat::one() == q.x),
        _ => Ok(p.x == q.x && p.side == Side::Minus && q.side == Side::Plus),
    }
}

/// One component of a closed-set presentation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Component {
    /// A closed interval of the presented space, endpoints included.
    Interval(Point, Point),
    /// A single point.
    Point(Point),
    /// A connected real block over the coordinate range `[l, r]`; the only
    /// presentation-level carrier of Cantor subsets.
    Solid(Rat, Rat),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum ComponentRepr {
    #[serde(rename = "interval")]
    Interval { a: Point, b: Point },
    #[serde(rename = "point")]
    Point { p: Point },
    #[serde(rename = "solid")]
    Solid { l: Rat, r: Rat },
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Component::Interval(a, b) => ComponentRepr::Interval {
                a: a.clone(),
                b: b.clone(),
            },
            Component::Point(p) => ComponentRepr::Point { p: p.clone() },
            Component::Solid(l, r) => ComponentRepr::Solid {
                l: l.clone(),
                r: r.clone(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match ComponentRepr::deserialize(d)? {
            ComponentRepr::Interval { a, b } => Component::Interval(a, b),
            ComponentRepr::Point { p } => Component::Point(p),
            ComponentRepr::Solid { l, r } => Component::Solid(l, r),
        })
    }
}

impl Component {
    fn sort_key(&self) -> (Rat, Side) {
        match self {
            Component::Interval(a, _) => (a.x.clone(), a.side),
            Component::Point(p) => (p.x.clone(), p.side),
            // A solid claims both tags at its left coordinate.
            Component::Solid(l, _) => (l.clone(), Side::Minus),
        }
    }
}

/// A closed subset in canonical form: components pairwise disjoint, listed
/// in increasing order, touching interval components merged, intervals
/// inward-facing (`[x⁺, y⁻]` up to undoubled endpoints), degenerate
/// intervals stored as points.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct ClosedSet {
    pub components: Vec<Component>,
}

impl ClosedSet {
    pub fn empty() -> Self {
        ClosedSet { components: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn single(p: Point) -> Self {
        ClosedSet {
            components: vec![Component::Point(p)],
        }
    }

    /// Builds the canonical form from arbitrary components.
    ///
    /// Outward-facing interval endpoints (a minus-side left endpoint or a
    /// plus-side right endpoint at a doubled coordinate) are split off as
    /// single points, overlapping same-kind components are merged, and
    /// points contained in larger components are absorbed. An interval or
    /// point sharing coordinates with a solid block is rejected: such a
    /// hybrid is not representable.
    pub fn from_components(space: &SpacePresentation, raw: Vec<Component>) -> Result<ClosedSet> {
        // Stage 1: validate and split into atoms.
        let mut intervals: Vec<(Point, Point)> = Vec::new();
        let mut points: Vec<Point> = Vec::new();
        let mut solids: Vec<(Rat, Rat)> = Vec::new();
        for comp in raw {
            match comp {
                Component::Point(p) => {
                    space.validate_point(&p)?;
                    points.push(p);
                }
                Component::Solid(l, r) => {
                    if space.is_chain() {
                        return Err(Error::InvalidPresentation(
                            "solid segments do not live in finite chains".into(),
                        ));
                    }
                    if !(l.in_closed_unit() && r.in_closed_unit() && l < r) {
                        return Err(Error::InvalidPresentation(format!(
                            "bad solid segment [{l}, {r}]"
                        )));
                    }
                    solids.push((l, r));
                }
                Component::Interval(a, b) => {
                    space.validate_point(&a)?;
                    space.validate_point(&b)?;
                    if a > b {
                        return Err(Error::InvalidPresentation(format!(
                            "interval endpoints out of order: {a} > {b}"
                        )));
                    }
                    if a == b {
                        points.push(a);
                        continue;
                    }
                    if space.is_chain() {
                        // A chain interval is a finite set of points.
                        let mut i = a.x.clone();
                        while i <= b.x {
                            points.push(Point::plus(i.clone()));
                            i = &i + &Rat::one();
                        }
                        continue;
                    }
                    let (mut a, mut b) = (a, b);
                    if a.side == Side::Minus && space.is_doubled(&a.x) {
                        // x⁻ is isolated from below inside [x⁻, b]; split.
                        points.push(a.clone());
                        a = Point::plus(a.x);
                    }
                    if b.side == Side::Plus && space.is_doubled(&b.x) {
                        points.push(b.clone());
                        b = Point::minus(b.x);
                    }
                    if a == b {
                        points.push(a);
                    } else if a > b {
                        // [x⁻, x⁺] reduced to nothing after both splits.
                    } else {
                        intervals.push((a, b));
                    }
                }
            }
        }

        // Stage 2: merge solids.
        solids.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut merged_solids: Vec<(Rat, Rat)> = Vec::new();
        for (l, r) in solids {
            match merged_solids.last_mut() {
                Some(last) if l <= last.1 => {
                    if r > last.1 {
                        last.1 = r;
                    }
                }
                _ => merged_solids.push((l, r)),
            }
        }

        // Stage 3: merge intervals. Two inward intervals merge when they
        // overlap or touch across a neighboring pair.
        intervals.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut merged_intervals: Vec<(Point, Point)> = Vec::new();
        for (a, b) in intervals {
            match merged_intervals.last_mut() {
                Some(last) => {
                    let touches = a <= last.1
                        || (a.x == last.1.x && last.1.side == Side::Minus && a.side == Side::Plus);
                    if touches {
                        if b > last.1 {
                            last.1 = b;
                        }
                    } else {
                        merged_intervals.push((a, b));
                    }
                }
                None => merged_intervals.push((a, b)),
            }
        }

        // Stage 4: check solid/interval separation.
        for (l, r) in &merged_solids {
            for (a, b) in &merged_intervals {
                if !(&b.x < l || &a.x > r) {
                    return Err(Error::InvalidPresentation(format!(
                        "interval [{a}, {b}] meets solid block [{l}, {r}]"
                    )));
                }
            }
        }

        // Stage 5: absorb points into intervals and solids, dedupe.
        points.sort();
        points.dedup();
        let mut kept_points: Vec<Point> = Vec::new();
        'point: for p in points {
            for (a, b) in &merged_intervals {
                if *a <= p && p <= *b {
                    continue 'point;
                }
            }
            for (l, r) in &merged_solids {
                if *l <= p.x && p.x <= *r {
                    return Err(Error::InvalidPresentation(format!(
                        "point {p} meets solid block [{l}, {r}]"
                    )));
                }
            }
            kept_points.push(p);
        }

        // Stage 6: interleave in increasing order.
        let mut components: Vec<Component> = merged_intervals
            .into_iter()
            .map(|(a, b)| Component::Interval(a, b))
            .chain(kept_points.into_iter().map(Component::Point))
            .chain(
                merged_solids
                    .into_iter()
                    .map(|(l, r)| Component::Solid(l, r)),
            )
            .collect();
        components.sort_by_key(|x| x.sort_key());
        Ok(ClosedSet { components })
    }

    /// Re-canonicalizes an already-valid presentation (used after set
    /// surgery such as intersections).
    pub fn canonicalize(&self, space: &SpacePresentation) -> Result<ClosedSet> {
        ClosedSet::from_components(space, self.components.clone())
    }

    /// Membership test for a point.
    pub fn contains_point(&self, p: &Point) -> bool {
        self.components.iter().any(|c| component_contains(c, p))
    }

    /// Whether some component is a solid segment.
    pub fn has_solid(&self) -> bool {
        self.components
            .iter()
            .any(|c| matches!(c, Component::Solid(..)))
    }

    /// The Cantor–Bendixson derivative: the set minus its isolated points.
    ///
    /// In a finite chain every point is isolated. In a double-arrow
    /// presentation a canonical single-point component is always isolated
    /// (no finite family of components accumulates at a separate point),
    /// while canonical nondegenerate intervals and solid segments are
    /// perfect, so they survive unchanged.
    pub fn cb_derivative(&self, space: &SpacePresentation) -> ClosedSet {
        if space.is_chain() {
            return ClosedSet::empty();
        }
        ClosedSet {
            components: self
                .components
                .iter()
                .filter(|c| !matches!(c, Component::Point(_)))
                .cloned()
                .collect(),
        }
    }

    /// The largest perfect subset: the fixed point of the derivative.
    /// Empty iff the presented set is scattered.
    pub fn kernel(&self, space: &SpacePresentation) -> ClosedSet {
        let mut current = self.clone();
        loop {
            let next = current.cb_derivative(space);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// Whether the presented set contains a copy of the Cantor set. At
    /// presentation level the only carriers are solid segments: double
    /// arrows over co-finite coordinate sets are totally disconnected and
    /// finite chains are finite.
    pub fn contains_cantor(&self, _space: &SpacePresentation) -> bool {
        self.has_solid()
    }

    /// Intersection with another canonical set of the same space.
    pub fn intersect(&self, space: &SpacePresentation, other: &ClosedSet) -> Result<ClosedSet> {
        let mut out: Vec<Component> = Vec::new();
        for c in &self.components {
            for d in &other.components {
                if let Some(e) = intersect_components(c, d) {
                    out.push(e);
                }
            }
        }
        ClosedSet::from_components(space, out)
    }

    /// Union with another canonical set of the same space.
    pub fn union(&self, space: &SpacePresentation, other: &ClosedSet) -> Result<ClosedSet> {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        ClosedSet::from_components(space, comps)
    }
}

fn component_contains(c: &Component, p: &Point) -> bool {
    match c {
        Component::Interval(a, b) => a <= p && p <= b,
        Component::Point(q) => q == p,
        Component::Solid(l, r) => *l <= p.x && p.x <= *r,
    }
}

fn intersect_components(c: &Component, d: &Component) -> Option<Component> {
    use Component::*;
    match (c, d) {
        (Point(p), _) => {
            if component_contains(d, p) {
                Some(Point(p.clone()))
            } else {
                None
            }
        }
        (_, Point(_)) => intersect_components(d, c),
        (Interval(a, b), Interval(c2, d2)) => {
            let lo = if a >= c2 { a.clone() } else { c2.clone() };
            let hi = if b <= d2 { b.clone() } else { d2.clone() };
            if lo < hi {
                Some(Interval(lo, hi))
            } else if lo == hi {
                Some(Point(lo))
            } else {
                None
            }
        }
        (Solid(l, r), Solid(l2, r2)) => {
            let lo = if l >= l2 { l.clone() } else { l2.clone() };
            let hi = if r <= r2 { r.clone() } else { r2.clone() };
            if lo < hi {
                Some(Solid(lo, hi))
            } else {
                // A degenerate solid carries no Cantor set; drop it. Mixed
                // solid/interval intersections never arise on canonical
                // disjoint data.
                None
            }
        }
        (Interval(..), Solid(..)) | (Solid(..), Interval(..)) => None,
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| match c {
                Component::Interval(a, b) => format!("[{a}, {b}]"),
                Component::Point(p) => format!("{{{p}}}"),
                Component::Solid(l, r) => format!("solid[{l}, {r}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn full() -> SpacePresentation {
        SpacePresentation::full()
    }

    fn interval(a: Point, b: Point) -> Component {
        Component::Interval(a, b)
    }

    #[test]
    fn point_order_is_lexicographic() {
        use std::cmp::Ordering::*;
        let p = Point::minus(rat("1/3"));
        let q = Point::plus(rat("1/3"));
        assert_eq!(compare_points(&p, &q), Less);
        assert_eq!(compare_points(&Point::first(), &Point::last()), Less);
        assert_eq!(
            compare_points(&Point::plus(rat("1/2")), &Point::minus(rat("2/3"))),
            Less
        );
        assert_eq!(compare_points(&q, &q.clone()), Equal);
    }

    #[test]
    fn neighbor_pairs() {
        let sp = full();
        let p = Point::minus(rat("1/3"));
        let q = Point::plus(rat("1/3"));
        assert!(is_neighbor_pair(&sp, &p, &q).unwrap());
        // (5/12)⁻ lies between (1/3)⁺ and (1/2)⁻.
        assert!(!is_neighbor_pair(&sp, &q, &Point::minus(rat("1/2"))).unwrap());
        assert_eq!(is_neighbor_pair(&sp, &q, &p), Err(Error::NotOrdered));
        // In D((0,1) \ {1/3}) the coordinate 1/3 is not doubled.
        let minus = SpacePresentation::minus([rat("1/3")]).unwrap();
        assert!(is_neighbor_pair(&minus, &p, &q).is_err());
    }

    #[test]
    fn chain_neighbors() {
        let sp = SpacePresentation::chain(5).unwrap();
        let p0 = Point::plus(rat("0"));
        let p1 = Point::plus(rat("1"));
        let p3 = Point::plus(rat("3"));
        assert!(is_neighbor_pair(&sp, &p0, &p1).unwrap());
        assert!(!is_neighbor_pair(&sp, &p1, &p3).unwrap());
    }

    #[test]
    fn canonicalization_splits_outward_endpoints() {
        let sp = full();
        // [ (1/4)⁻, (1/2)⁻ ] splits into the isolated left tip plus an
        // inward interval.
        let s = ClosedSet::from_components(
            &sp,
            vec![interval(Point::minus(rat("1/4")), Point::minus(rat("1/2")))],
        )
        .unwrap();
        assert_eq!(
            s.components,
            vec![
                Component::Point(Point::minus(rat("1/4"))),
                interval(Point::plus(rat("1/4")), Point::minus(rat("1/2"))),
            ]
        );
        // A neighboring-pair interval is two isolated points.
        let pair = ClosedSet::from_components(
            &sp,
            vec![interval(Point::minus(rat("1/3")), Point::plus(rat("1/3")))],
        )
        .unwrap();
        assert_eq!(pair.components.len(), 2);
        assert!(pair
            .components
            .iter()
            .all(|c| matches!(c, Component::Point(_))));
    }

    #[test]
    fn canonicalization_merges_touching_intervals() {
        let sp = full();
        let s = ClosedSet::from_components(
            &sp,
            vec![
                interval(Point::first(), Point::minus(rat("1/2"))),
                interval(Point::plus(rat("1/2")), Point::last()),
            ],
        )
        .unwrap();
        assert_eq!(s.components, vec![interval(Point::first(), Point::last())]);
    }

    #[test]
    fn undoubled_endpoints_are_inward() {
        // In D((0,1) \ {1/2}) an interval may end at the undoubled 1/2
        // (a two-sided limit point), and it stays perfect.
        let minus = SpacePresentation::minus([rat("1/2")]).unwrap();
        let s = ClosedSet::from_components(
            &minus,
            vec![interval(Point::first(), Point::plus(rat("1/2")))],
        )
        .unwrap();
        assert_eq!(
            s.components,
            vec![interval(Point::first(), Point::plus(rat("1/2")))]
        );
        assert_eq!(s.cb_derivative(&minus), s);
        // The same endpoint splits off in the full space, where (1/2)⁺
        // has an immediate predecessor.
        let sp = full();
        let split = ClosedSet::from_components(
            &sp,
            vec![interval(Point::first(), Point::plus(rat("1/2")))],
        )
        .unwrap();
        assert_eq!(
            split.components,
            vec![
                interval(Point::first(), Point::minus(rat("1/2"))),
                Component::Point(Point::plus(rat("1/2"))),
            ]
        );
    }

    #[test]
    fn chain_intervals_enumerate_points() {
        let sp = SpacePresentation::chain(5).unwrap();
        let s = ClosedSet::from_components(
            &sp,
            vec![interval(Point::plus(rat("1")), Point::plus(rat("3")))],
        )
        .unwrap();
        assert_eq!(s.components.len(), 3);
        assert!(s.contains_point(&Point::plus(rat("2"))));
        assert!(!s.contains_point(&Point::plus(rat("4"))));
    }

    #[test]
    fn derivative_drops_isolated_points() {
        let sp = full();
        let s = ClosedSet::from_components(
            &sp,
            vec![
                interval(Point::first(), Point::minus(rat("1/2"))),
                Component::Point(Point::minus(rat("3/4"))),
            ],
        )
        .unwrap();
        let d = s.cb_derivative(&sp);
        assert_eq!(
            d.components,
            vec![interval(Point::first(), Point::minus(rat("1/2")))]
        );
        // Whole space is a fixed point.
        let whole = sp.whole_space();
        assert_eq!(whole.cb_derivative(&sp), whole);
    }

    #[test]
    fn chain_spaces_are_scattered() {
        let sp = SpacePresentation::chain(5).unwrap();
        let whole = sp.whole_space();
        assert_eq!(whole.components.len(), 5);
        assert_eq!(whole.cb_derivative(&sp), ClosedSet::empty());
        assert_eq!(whole.kernel(&sp), ClosedSet::empty());
    }

    #[test]
    fn kernel_is_idempotent() {
        let sp = full();
        let s = ClosedSet::from_components(
            &sp,
            vec![
                interval(Point::first(), Point::minus(rat("1/2"))),
                Component::Point(Point::minus(rat("3/4"))),
            ],
        )
        .unwrap();
        let k = s.kernel(&sp);
        assert_eq!(
            k.components,
            vec![interval(Point::first(), Point::minus(rat("1/2")))]
        );
        assert_eq!(k.kernel(&sp), k);
    }

    #[test]
    fn cantor_detection() {
        let sp = full();
        assert!(!sp.whole_space().contains_cantor(&sp));
        let s = ClosedSet::from_components(&sp, vec![Component::Solid(rat("1/4"), rat("1/2"))])
            .unwrap();
        assert!(s.contains_cantor(&sp));
        let chain = SpacePresentation::chain(7).unwrap();
        assert!(!chain.whole_space().contains_cantor(&chain));
    }

    #[test]
    fn solid_collisions_rejected() {
        let sp = full();
        let r = ClosedSet::from_components(
            &sp,
            vec![
                Component::Solid(rat("1/4"), rat("1/2")),
                Component::Point(Point::plus(rat("1/3"))),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn json_shape_matches_contract() {
        let sp = full();
        let s = ClosedSet::from_components(
            &sp,
            vec![
                interval(Point::plus(rat("21/64")), Point::minus(rat("1/3"))),
                Component::Solid(rat("1/2"), rat("3/4")),
            ],
        )
        .unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json["components"][0],
            serde_json::json!({
                "type": "interval",
                "a": {"x": "21/64", "side": "+"},
                "b": {"x": "1/3", "side": "-"}
            })
        );
        assert_eq!(
            json["components"][1],
            serde_json::json!({"type": "solid", "l": "1/2", "r": "3/4"})
        );
        let back: ClosedSet = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
    }
}
