//! Exact step-function calculus over double-arrow presentations.
//!
//! A step function is a strictly increasing list of breakpoints
//! `a_1 < … < a_n` in `(0,1)` together with Gaussian-rational values
//! `z_0, …, z_n`; the value `z_i` is taken on the clopen interval
//! `[a_i⁺, a_{i+1}⁻]` (with `a_0⁺ = 0_X` and `a_{n+1}⁻ = 1_X`). Canonical
//! form keeps adjacent values distinct. All arithmetic is pointwise on the
//! common refinement of breakpoints and stays exact.

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::orderspace::{ClosedSet, Component, Point, Side, SpacePresentation};
use crate::rational::Rat;

/// A step function in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct StepFunction {
    pub breaks: Vec<Rat>,
    pub values: Vec<Gaussian>,
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            breaks: Vec<Rat>,
            values: Vec<Gaussian>,
        }
        let raw = Raw::deserialize(d)?;
        StepFunction::new(raw.breaks, raw.values).map_err(serde::de::Error::custom)
    }
}

impl StepFunction {
    /// Builds a step function, merging adjacent equal values into canonical
    /// form. Breakpoints must be strictly increasing inside `(0,1)` and
    /// `values.len() == breaks.len() + 1`.
    pub fn new(breaks: Vec<Rat>, values: Vec<Gaussian>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidPresentation(format!(
                "step function needs {} values for {} breaks, got {}",
                breaks.len() + 1,
                breaks.len(),
                values.len()
            )));
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPresentation(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        if let (Some(first), Some(last)) = (breaks.first(), breaks.last()) {
            if !first.in_open_unit() || !last.in_open_unit() {
                return Err(Error::InvalidPresentation(
                    "breakpoints must lie in (0,1)".into(),
                ));
            }
        }
        let mut canon_breaks = Vec::with_capacity(breaks.len());
        let mut canon_values = vec![values[0].clone()];
        for (b, v) in breaks.into_iter().zip(values.into_iter().skip(1)) {
            if v != *canon_values.last().unwrap() {
                canon_breaks.push(b);
                canon_values.push(v);
            }
        }
        Ok(StepFunction {
            breaks: canon_breaks,
            values: canon_values,
        })
    }

    pub fn constant(z: Gaussian) -> Self {
        StepFunction {
            breaks: vec![],
            values: vec![z],
        }
    }

    /// The indicator of the clopen interval `[a⁺, b⁻]`, or of `[0_X, b⁻]` /
    /// `[a⁺, 1_X]` when an endpoint is omitted.
    pub fn indicator(a: Option<Rat>, b: Option<Rat>) -> Result<Self> {
        let mut breaks = vec![];
        let mut values = vec![];
        match (&a, &b) {
            (Some(a), Some(b)) if a >= b => {
                return Err(Error::InvalidPresentation(format!(
                    "indicator needs a < b, got [{a}, {b}]"
                )))
            }
            _ => {}
        }
        if let Some(a) = a {
            breaks.push(a);
            values.push(Gaussian::zero());
        }
        values.push(Gaussian::one());
        if let Some(b) = b {
            breaks.push(b);
            values.push(Gaussian::zero());
        }
        StepFunction::new(breaks, values)
    }

    pub fn is_constant(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Number of jumps.
    pub fn jump_count(&self) -> usize {
        self.breaks.len()
    }

    /// Value on the region with index `i` (regions are numbered `0..=n`).
    pub fn region_value(&self, i: usize) -> &Gaussian {
        &self.values[i]
    }

    /// Evaluates the function at a point of the double arrow.
    pub fn eval(&self, p: &Point) -> Gaussian {
        // Region i covers [breaks[i-1]⁺, breaks[i]⁻].
        let mut idx = self.breaks.partition_point(|b| *b < p.x);
        if idx < self.breaks.len() && self.breaks[idx] == p.x && p.side == Side::Plus {
            idx += 1;
        }
        self.values[idx].clone()
    }

    fn eval_at_region_of(&self, refined: &[Rat], region: usize) -> Gaussian {
        // Value on the `region`-th region of a refinement of self.breaks.
        if region == 0 {
            return self.values[0].clone();
        }
        let coord = &refined[region - 1];
        let idx = self.breaks.partition_point(|b| b <= coord);
        self.values[idx].clone()
    }

    /// Common breakpoint refinement of two step functions.
    pub fn refine(f: &StepFunction, g: &StepFunction) -> Vec<Rat> {
        let mut set: BTreeSet<Rat> = f.breaks.iter().cloned().collect();
        set.extend(g.breaks.iter().cloned());
        set.into_iter().collect()
    }

    fn zip_with(
        f: &StepFunction,
        g: &StepFunction,
        op: impl Fn(&Gaussian, &Gaussian) -> Gaussian,
    ) -> StepFunction {
        let refined = StepFunction::refine(f, g);
        let values: Vec<Gaussian> = (0..=refined.len())
            .map(|i| {
                op(
                    &f.eval_at_region_of(&refined, i),
                    &g.eval_at_region_of(&refined, i),
                )
            })
            .collect();
        StepFunction::new(refined, values).expect("refinement is valid")
    }

    fn map(&self, op: impl Fn(&Gaussian) -> Gaussian) -> StepFunction {
        let values = self.values.iter().map(op).collect();
        StepFunction::new(self.breaks.clone(), values).expect("map preserves validity")
    }

    pub fn scale(&self, c: &Gaussian) -> StepFunction {
        self.map(|z| z * c)
    }

    pub fn conj(&self) -> StepFunction {
        self.map(Gaussian::conj)
    }

    pub fn neg(&self) -> StepFunction {
        self.map(|z| -z)
    }

    /// Squared sup norm over the whole space, with the index of a region
    /// attaining it.
    pub fn sup_norm_sq(&self) -> (Rat, usize) {
        let mut best = self.values[0].norm_sq();
        let mut witness = 0;
        for (i, z) in self.values.iter().enumerate().skip(1) {
            let n = z.norm_sq();
            if n > best {
                best = n;
                witness = i;
            }
        }
        (best, witness)
    }

    /// Squared sup norm over a closed set `H` (no solid components), with a
    /// witnessing region index.
    pub fn sup_norm_sq_on(&self, h: &ClosedSet) -> Result<(Rat, usize)> {
        if h.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        if h.has_solid() {
            return Err(Error::SolidUnsupported);
        }
        let mut best: Option<(Rat, usize)> = None;
        for i in 0..self.values.len() {
            if !self.region_meets(i, h) {
                continue;
            }
            let n = self.values[i].norm_sq();
            match &best {
                Some((b, _)) if *b >= n => {}
                _ => best = Some((n, i)),
            }
        }
        best.ok_or(Error::EmptyRestriction)
    }

    /// Lower and upper endpoints of region `i` as points.
    pub fn region_bounds(&self, i: usize) -> (Point, Point) {
        let lo = if i == 0 {
            Point::first()
        } else {
            Point::plus(self.breaks[i - 1].clone())
        };
        let hi = if i == self.breaks.len() {
            Point::last()
        } else {
            Point::minus(self.breaks[i].clone())
        };
        (lo, hi)
    }

    /// The region `[l⁺, r⁻]` as a closed-set component.
    pub fn region_component(&self, i: usize) -> Component {
        let (lo, hi) = self.region_bounds(i);
        Component::Interval(lo, hi)
    }

    fn region_meets(&self, i: usize, h: &ClosedSet) -> bool {
        let (lo, hi) = self.region_bounds(i);
        h.components.iter().any(|c| match c {
            Component::Interval(a, b) => *a <= hi && *b >= lo,
            Component::Point(p) => lo <= *p && *p <= hi,
            Component::Solid(..) => false,
        })
    }

    /// Restriction to a closed `H`: breakpoints are pruned to those
    /// separating `H` and the result agrees with `self` on `H`. Regions of
    /// the pruned partition that miss `H` entirely inherit the value to
    /// their left, and the result is re-canonicalized.
    pub fn restrict(&self, h: &ClosedSet) -> Result<StepFunction> {
        if h.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        if h.has_solid() {
            return Err(Error::SolidUnsupported);
        }
        // A break b separates H when H has points on both sides of the
        // pair b⁻ ⋖ b⁺.
        let mut kept: Vec<Rat> = Vec::new();
        for b in &self.breaks {
            let below = h.components.iter().any(|c| match c {
                Component::Interval(a, _) => a.x < *b || (a.x == *b && a.side == Side::Minus),
                Component::Point(p) => p.x < *b || (p.x == *b && p.side == Side::Minus),
                Component::Solid(..) => false,
            });
            let above = h.components.iter().any(|c| match c {
                Component::Interval(_, hi) => hi.x > *b || (hi.x == *b && hi.side == Side::Plus),
                Component::Point(p) => p.x > *b || (p.x == *b && p.side == Side::Plus),
                Component::Solid(..) => false,
            });
            if below && above {
                kept.push(b.clone());
            }
        }
        // Value per run of original regions between kept breaks: the first
        // H-meeting region in the run, else inherit from the left.
        let mut values: Vec<Gaussian> = Vec::with_capacity(kept.len() + 1);
        let mut region = 0usize;
        for run in 0..=kept.len() {
            let run_end = if run < kept.len() {
                // Regions up to the one whose right edge is kept[run].
                self.breaks.partition_point(|b| *b <= kept[run])
            } else {
                self.values.len()
            };
            let mut chosen: Option<Gaussian> = None;
            for i in region..run_end.max(region) {
                if self.region_meets(i, h) {
                    chosen = Some(self.values[i].clone());
                    break;
                }
            }
            let v = chosen.unwrap_or_else(|| {
                values
                    .last()
                    .cloned()
                    .unwrap_or_else(|| self.values[region].clone())
            });
            values.push(v);
            region = run_end;
        }
        StepFunction::new(kept, values)
    }

    /// `JMP_ε(f)`: the endpoints plus every neighboring pair where the jump
    /// has squared magnitude at least `eps²`. Always finite.
    ///
    /// The union of the jump sets over all thresholds needs no operation
    /// of its own: a step function has finitely many jumps, so it equals
    /// `jmp(f, m)` for the smallest jump magnitude `m` of `f`.
    pub fn jmp(&self, eps: &Rat) -> NiceSet {
        assert!(*eps > Rat::zero(), "jmp needs eps > 0");
        let eps_sq = eps.square();
        let coords = self
            .breaks
            .iter()
            .enumerate()
            .filter(|(i, _)| (&self.values[*i + 1] - &self.values[*i]).norm_sq() >= eps_sq)
            .map(|(_, b)| b.clone())
            .collect();
        NiceSet { coords }
    }

    /// The sublevel set `{x : Re f(x) < b}` as a canonical closed set.
    /// Errors when some value has real part exactly `b`.
    pub fn sublevel_re(&self, b: &Rat) -> Result<ClosedSet> {
        if self.values.iter().any(|z| z.re == *b) {
            return Err(Error::BHitsRange { b: b.to_string() });
        }
        let comps: Vec<Component> = (0..self.values.len())
            .filter(|i| self.values[*i].re < *b)
            .map(|i| self.region_component(i))
            .collect();
        ClosedSet::from_components(&SpacePresentation::full(), comps)
    }

    /// The indicator step function of a union of regions given by a
    /// canonical closed set made of inward intervals aligned with breaks of
    /// this function's refinement. Used by idempotent extraction.
    pub fn indicator_of_sublevel(&self, b: &Rat) -> Result<StepFunction> {
        if self.values.iter().any(|z| z.re == *b) {
            return Err(Error::BHitsRange { b: b.to_string() });
        }
        let values = self
            .values
            .iter()
            .map(|z| {
                if z.re < *b {
                    Gaussian::one()
                } else {
                    Gaussian::zero()
                }
            })
            .collect();
        StepFunction::new(self.breaks.clone(), values)
    }
}

impl Add for &StepFunction {
    type Output = StepFunction;
    fn add(self, rhs: &StepFunction) -> StepFunction {
        StepFunction::zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &StepFunction {
    type Output = StepFunction;
    fn sub(self, rhs: &StepFunction) -> StepFunction {
        StepFunction::zip_with(self, rhs, |a, b| a - b)
    }
}

impl Mul for &StepFunction {
    type Output = StepFunction;
    fn mul(self, rhs: &StepFunction) -> StepFunction {
        StepFunction::zip_with(self, rhs, |a, b| a * b)
    }
}

/// A nice set: `{0_X, 1_X}` together with the neighboring pairs `x⁻ ⋖ x⁺`
/// over a finite set of coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct NiceSet {
    pub coords: BTreeSet<Rat>,
}

impl<'de> Deserialize<'de> for NiceSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coords: BTreeSet<Rat>,
        }
        let raw = Raw::deserialize(d)?;
        NiceSet::new(raw.coords).map_err(serde::de::Error::custom)
    }
}

impl NiceSet {
    pub fn new<I: IntoIterator<Item = Rat>>(coords: I) -> Result<Self> {
        let coords: BTreeSet<Rat> = coords.into_iter().collect();
        for c in &coords {
            if !c.in_open_unit() {
                return Err(Error::InvalidPresentation(format!(
                    "nice-set coordinate {c} outside (0,1)"
                )));
            }
        }
        Ok(NiceSet { coords })
    }

    /// All dyadic rationals in `(0,1)` with denominator dividing
    /// `max_denominator` (a power of two).
    pub fn dyadics(max_denominator: u32) -> Self {
        assert!(
            max_denominator.is_power_of_two() && max_denominator >= 2,
            "dyadic bound must be a power of two ≥ 2"
        );
        let coords = (1..max_denominator)
            .map(|j| Rat::new(j as i64, max_denominator as i64))
            .collect();
        NiceSet { coords }
    }

    pub fn contains_pair(&self, x: &Rat) -> bool {
        self.coords.contains(x)
    }

    /// Cardinality counting both tags plus the endpoints `0_X, 1_X`.
    pub fn size(&self) -> usize {
        2 + 2 * self.coords.len()
    }

    /// Number of neighboring pairs.
    pub fn pair_count(&self) -> usize {
        self.coords.len()
    }

    pub fn union(&self, other: &NiceSet) -> NiceSet {
        NiceSet {
            coords: self.coords.union(&other.coords).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &NiceSet) -> bool {
        self.coords.is_subset(&other.coords)
    }

    pub fn insert(&mut self, x: Rat) {
        self.coords.insert(x);
    }

    pub fn without(&self, x: &Rat) -> NiceSet {
        let mut coords = self.coords.clone();
        coords.remove(x);
        NiceSet { coords }
    }

    /// Coordinates in the open interval `(lo, hi)`.
    pub fn coords_in(&self, lo: &Rat, hi: &Rat) -> impl DoubleEndedIterator<Item = &Rat> {
        self.coords.range((
            std::ops::Bound::Excluded(lo.clone()),
            std::ops::Bound::Excluded(hi.clone()),
        ))
    }
}

/// One piece of a piecewise-constant density on `[0,1]`, pulled back
/// through the projection `π(x, side) = x`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DensityPiece {
    pub l: Rat,
    pub r: Rat,
    pub d: Rat,
}

/// An atom of a measure.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Atom {
    pub p: Point,
    pub w: Gaussian,
}

/// A complex measure: finitely many atoms plus a piecewise-constant
/// density. Integration against step functions is exact.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Measure {
    pub atoms: Vec<Atom>,
    pub density: Vec<DensityPiece>,
}

impl Measure {
    pub fn from_atoms(atoms: Vec<(Point, Gaussian)>) -> Self {
        Measure {
            atoms: atoms.into_iter().map(|(p, w)| Atom { p, w }).collect(),
            density: vec![],
        }
    }

    pub fn with_density(mut self, l: Rat, r: Rat, d: Rat) -> Self {
        self.density.push(DensityPiece { l, r, d });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let sp = SpacePresentation::full();
        for a in &self.atoms {
            sp.validate_point(&a.p)?;
        }
        for piece in &self.density {
            if !(piece.l.in_closed_unit() && piece.r.in_closed_unit() && piece.l < piece.r) {
                return Err(Error::InvalidPresentation(format!(
                    "bad density piece [{}, {}]",
                    piece.l, piece.r
                )));
            }
        }
        for w in self.sorted_density_pieces().windows(2) {
            if w[0].r > w[1].l {
                return Err(Error::InvalidPresentation("density pieces overlap".into()));
            }
        }
        Ok(())
    }

    fn sorted_density_pieces(&self) -> Vec<DensityPiece> {
        let mut v = self.density.clone();
        v.sort_by(|a, b| a.l.cmp(&b.l));
        v
    }

    /// Exact integral `Σ w·f(p) + Σ z_i · (density mass of the region)`.
    pub fn integrate(&self, f: &StepFunction) -> Gaussian {
        let mut total = Gaussian::zero();
        for atom in &self.atoms {
            total = &total + &(&f.eval(&atom.p) * &atom.w);
        }
        for piece in &self.density {
            if piece.d.is_zero() {
                continue;
            }
            // Walk f's regions overlapping (piece.l, piece.r).
            for i in 0..f.values.len() {
                let lo = if i == 0 {
                    Rat::zero()
                } else {
                    f.breaks[i - 1].clone()
                };
                let hi = if i == f.breaks.len() {
                    Rat::one()
                } else {
                    f.breaks[i].clone()
                };
                let a = lo.max(piece.l.clone());
                let b = hi.min(piece.r.clone());
                if a < b {
                    let mass = (&b - &a) * piece.d.clone();
                    total = &total + &f.values[i].scale(&mass);
                }
            }
        }
        total
    }

    /// Exact integral of `|density|` (the atomless part of the total
    /// variation).
    pub fn density_variation(&self) -> Rat {
        self.density
            .iter()
            .fold(Rat::zero(), |acc, p| acc + (&p.r - &p.l) * p.d.abs())
    }

    /// Atoms combined by location, zero totals dropped.
    fn combined_atoms(&self) -> Vec<(Point, Gaussian)> {
        let mut out: Vec<(Point, Gaussian)> = Vec::new();
        for a in &self.atoms {
            match out.iter_mut().find(|(p, _)| *p == a.p) {
                Some((_, w)) => *w = &*w + &a.w,
                None => out.push((a.p.clone(), a.w.clone())),
            }
        }
        out.retain(|(_, w)| !w.is_zero());
        out
    }

    /// A rational upper bound on `|μ|(X)`; exact when all atom weights have
    /// rational modulus.
    pub fn total_variation_upper(&self) -> Rat {
        let atoms = self
            .combined_atoms()
            .iter()
            .fold(Rat::zero(), |acc, (_, w)| acc + w.norm_sq().sqrt_upper());
        atoms + self.density_variation()
    }

    /// The closed support: atoms with nonzero combined weight plus the
    /// double-arrow closure `[l⁺, r⁻]` of each positive-density coordinate
    /// interval.
    pub fn support(&self) -> Result<ClosedSet> {
        let sp = SpacePresentation::full();
        let mut comps: Vec<Component> = Vec::new();
        for (p, _) in self.combined_atoms() {
            comps.push(Component::Point(p));
        }
        for piece in &self.density {
            if piece.d.is_zero() {
                continue;
            }
            let lo = if piece.l.is_zero() {
                Point::first()
            } else {
                Point::plus(piece.l.clone())
            };
            let hi = if piece.r == Rat::one() {
                Point::last()
            } else {
                Point::minus(piece.r.clone())
            };
            comps.push(Component::Interval(lo, hi));
        }
        ClosedSet::from_components(&sp, comps)
    }
}
