//! Exact engine for finitely generated closed subalgebras of step
//! functions.
//!
//! A finitely generated closed subalgebra is represented by the common
//! breakpoint refinement of its generators plus the partition of the
//! resulting intervals into classes on which every generator is constant.
//! The represented algebra is exactly the step functions constant on each
//! class: a unital separating subalgebra of functions on finitely many
//! points is everything (interpolation through idempotents, no conjugation
//! needed), so the class partition captures the closure of the generated
//! algebra. Tests validate this identification against brute-force product
//! closure.
//!
//! No smallest-boundary or essential-set operations are offered here: a
//! finitely generated step algebra never separates the points of an
//! infinite space, and without separation the smallest closed boundary
//! need not be unique, so those notions have no canonical finite
//! presentation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::orderspace::{ClosedSet, Point, Side, SpacePresentation};
use crate::rational::Rat;
use crate::stepcalc::{Measure, StepFunction};

/// A finitely generated closed subalgebra of step functions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FinStepAlgebra {
    /// Breakpoints of the common refinement; `partition.len() + 1` clopen
    /// intervals.
    pub partition: Vec<Rat>,
    /// Partition of the interval indices into classes, each sorted, blocks
    /// ordered by first element. Linear dimension = number of classes.
    pub classes: Vec<Vec<usize>>,
}

impl FinStepAlgebra {
    /// The algebra of constants.
    pub fn constants() -> Self {
        FinStepAlgebra {
            partition: vec![],
            classes: vec![vec![0]],
        }
    }

    /// Number of partition intervals.
    pub fn interval_count(&self) -> usize {
        self.partition.len() + 1
    }

    /// Linear dimension.
    pub fn dimension(&self) -> usize {
        self.classes.len()
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.partition.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPresentation(
                    "partition must be strictly increasing".into(),
                ));
            }
        }
        for b in &self.partition {
            if !b.in_open_unit() {
                return Err(Error::InvalidPresentation(
                    "partition breakpoints must lie in (0,1)".into(),
                ));
            }
        }
        let m = self.interval_count();
        let mut seen = vec![false; m];
        for class in &self.classes {
            for &i in class {
                if i >= m || seen[i] {
                    return Err(Error::InvalidPresentation(
                        "classes must partition the intervals".into(),
                    ));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidPresentation(
                "classes must cover every interval".into(),
            ));
        }
        Ok(())
    }

    /// The closed algebra generated by finitely many step functions:
    /// partition = common refinement with redundant breaks dropped, classes
    /// = intervals on which all generators agree.
    pub fn saturate(gens: &[StepFunction]) -> Self {
        let mut breaks: Vec<Rat> = gens
            .iter()
            .flat_map(|g| g.breaks.iter().cloned())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();

        // Column of generator values per refined interval.
        let column = |breaks: &[Rat], i: usize| -> Vec<Gaussian> {
            let probe = if i == 0 {
                Point::first()
            } else {
                Point::plus(breaks[i - 1].clone())
            };
            gens.iter().map(|g| g.eval(&probe)).collect()
        };

        // Drop breaks across which no generator jumps.
        let mut i = 0;
        while i < breaks.len() {
            let left: Vec<Gaussian> = {
                let probe = if i == 0 {
                    Point::first()
                } else {
                    Point::plus(breaks[i - 1].clone())
                };
                gens.iter().map(|g| g.eval(&probe)).collect()
            };
            let right: Vec<Gaussian> = {
                let probe = Point::plus(breaks[i].clone());
                gens.iter().map(|g| g.eval(&probe)).collect()
            };
            if left == right {
                breaks.remove(i);
            } else {
                i += 1;
            }
        }

        let m = breaks.len() + 1;
        let mut groups: BTreeMap<Vec<(String, String)>, Vec<usize>> = BTreeMap::new();
        for i in 0..m {
            let key: Vec<(String, String)> = column(&breaks, i)
                .iter()
                .map(|z| (z.re.to_string(), z.im.to_string()))
                .collect();
            groups.entry(key).or_default().push(i);
        }
        let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
        classes.sort_by_key(|c| c[0]);

        FinStepAlgebra {
            partition: breaks,
            classes,
        }
    }

    /// Value of `f` on partition interval `i`, provided `f` is constant
    /// there; `None` when `f` jumps inside the interval.
    fn value_on_interval(&self, f: &StepFunction, i: usize) -> Option<Gaussian> {
        let lo = if i == 0 {
            Rat::zero()
        } else {
            self.partition[i - 1].clone()
        };
        let hi = if i == self.partition.len() {
            Rat::one()
        } else {
            self.partition[i].clone()
        };
        if f.breaks.iter().any(|b| *b > lo && *b < hi) {
            return None;
        }
        let probe = if i == 0 {
            Point::first()
        } else {
            Point::plus(lo)
        };
        Some(f.eval(&probe))
    }

    /// Exact membership: `f` belongs iff it is constant on every class.
    pub fn contains(&self, f: &StepFunction) -> bool {
        for class in &self.classes {
            let mut value: Option<Gaussian> = None;
            for &i in class {
                match self.value_on_interval(f, i) {
                    None => return false,
                    Some(v) => match &value {
                        None => value = Some(v),
                        Some(prev) if *prev != v => return false,
                        _ => {}
                    },
                }
            }
        }
        true
    }

    /// The indicator step function of one class.
    pub fn class_indicator(&self, class_idx: usize) -> StepFunction {
        let m = self.interval_count();
        let mut values = vec![Gaussian::zero(); m];
        for &i in &self.classes[class_idx] {
            values[i] = Gaussian::one();
        }
        StepFunction::new(self.partition.clone(), values).expect("valid indicator")
    }

    /// The step function with prescribed value per class.
    pub fn from_class_values(&self, class_values: &[Gaussian]) -> StepFunction {
        assert_eq!(class_values.len(), self.dimension());
        let m = self.interval_count();
        let mut values = vec![Gaussian::zero(); m];
        for (c, class) in self.classes.iter().enumerate() {
            for &i in class {
                values[i] = class_values[c].clone();
            }
        }
        StepFunction::new(self.partition.clone(), values).expect("valid step function")
    }

    /// The `∼`-equivalence classes as canonical closed presentations.
    pub fn class_presentations(&self) -> Vec<ClosedSet> {
        let sp = SpacePresentation::full();
        self.classes
            .iter()
            .map(|class| {
                let comps = class.iter().map(|&i| self.interval_component(i)).collect();
                ClosedSet::from_components(&sp, comps).expect("classes are canonical")
            })
            .collect()
    }

    fn interval_component(&self, i: usize) -> crate::orderspace::Component {
        let lo = if i == 0 {
            Point::first()
        } else {
            Point::plus(self.partition[i - 1].clone())
        };
        let hi = if i == self.partition.len() {
            Point::last()
        } else {
            Point::minus(self.partition[i].clone())
        };
        crate::orderspace::Component::Interval(lo, hi)
    }

    /// The union of classes with the given indices as a canonical set.
    pub fn class_union(&self, class_indices: &[usize]) -> ClosedSet {
        let sp = SpacePresentation::full();
        let comps = class_indices
            .iter()
            .flat_map(|&c| self.classes[c].iter().map(|&i| self.interval_component(i)))
            .collect();
        ClosedSet::from_components(&sp, comps).expect("class unions are canonical")
    }

    /// `B_A` as presentations: every union of classes (2^k sets). Callers
    /// with large `k` should enumerate lazily instead.
    pub fn boolean_algebra(&self) -> Vec<ClosedSet> {
        let k = self.dimension();
        assert!(k <= 16, "B_A enumeration capped at 2^16 sets");
        (0..(1u32 << k))
            .map(|mask| {
                let idx: Vec<usize> = (0..k).filter(|c| mask & (1 << c) != 0).collect();
                self.class_union(&idx)
            })
            .collect()
    }

    /// Which classes a canonical closed set covers, provided it is exactly
    /// a union of classes; `Err(DoesNotFactor)` otherwise.
    pub fn factor_through(&self, p: &ClosedSet) -> Result<Vec<usize>> {
        // A class is "touched" when p meets it; p factors iff p equals the
        // union of the touched classes.
        let presentations = self.class_presentations();
        let sp = SpacePresentation::full();
        let mut touched: Vec<usize> = Vec::new();
        for (c, class_set) in presentations.iter().enumerate() {
            let meet = class_set
                .intersect(&sp, p)
                .map_err(|_| Error::DoesNotFactor)?;
            if !meet.is_empty() {
                touched.push(c);
            }
        }
        let union = self.class_union(&touched);
        if union == *p {
            Ok(touched)
        } else {
            Err(Error::DoesNotFactor)
        }
    }

    /// Restriction to a closed `P` that factors through `∼`.
    pub fn restrict(&self, p: &ClosedSet) -> Result<RestrictedAlgebra> {
        let touched = self.factor_through(p)?;
        Ok(RestrictedAlgebra {
            ambient: self.clone(),
            carrier: p.clone(),
            classes: touched,
        })
    }

    /// An atomic measure annihilating the algebra but not `g`, or `None`
    /// when `g` belongs. Atoms sit at the left endpoint `(x, +)` of
    /// intervals of the refinement of the partition by `g`'s breaks.
    pub fn annihilator_measure(&self, g: &StepFunction) -> Option<Measure> {
        if self.contains(g) {
            return None;
        }
        // Refine so g is constant per interval, keeping class structure.
        let refined: Vec<Rat> = {
            let mut set: std::collections::BTreeSet<Rat> = self.partition.iter().cloned().collect();
            set.extend(g.breaks.iter().cloned());
            set.into_iter().collect()
        };
        let m = refined.len() + 1;
        let rep = |i: usize| -> Point {
            if i == 0 {
                Point::first()
            } else {
                Point::plus(refined[i - 1].clone())
            }
        };
        // Class index of each refined interval.
        let class_of = |i: usize| -> usize {
            let probe = rep(i);
            let coarse = self.partition.partition_point(|b| *b <= probe.x);
            self.classes
                .iter()
                .position(|c| c.contains(&coarse))
                .expect("classes cover")
        };
        // First class (by class index) holding two intervals where g
        // disagrees: the difference of point masses there annihilates all
        // class-constant functions and sees g.
        for c in 0..self.dimension() {
            let members: Vec<usize> = (0..m).filter(|&i| class_of(i) == c).collect();
            for pair in members.windows(2) {
                let (i, j) = (pair[0], pair[1]);
                let gi = g.eval(&rep(i));
                let gj = g.eval(&rep(j));
                if gi != gj {
                    return Some(Measure::from_atoms(vec![
                        (rep(i), Gaussian::one()),
                        (rep(j), -&Gaussian::one()),
                    ]));
                }
            }
            // Disagreement can skip adjacent members.
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    let (i, j) = (members[a], members[b]);
                    let gi = g.eval(&rep(i));
                    let gj = g.eval(&rep(j));
                    if gi != gj {
                        return Some(Measure::from_atoms(vec![
                            (rep(i), Gaussian::one()),
                            (rep(j), -&Gaussian::one()),
                        ]));
                    }
                }
            }
        }
        unreachable!("g ∉ A implies some class sees two values of g")
    }

    /// Membership of `g` in the restriction of the algebra to `h`:
    /// `g↾h ∈ A↾h` iff `g` is constant on `h ∩ class` for every class.
    pub fn restricted_contains(&self, g: &StepFunction, h: &ClosedSet) -> Result<bool> {
        let sp = SpacePresentation::full();
        for class_set in self.class_presentations() {
            let meet = class_set.intersect(&sp, h)?;
            if meet.is_empty() {
                continue;
            }
            let restricted = g.restrict(&meet)?;
            // Constant on the meet?
            let (lo, _) = bounds_of(&meet);
            let base = restricted.eval(&lo);
            if !value_constant_on(&restricted, &meet, &base) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn bounds_of(s: &ClosedSet) -> (Point, Point) {
    use crate::orderspace::Component::*;
    let lo = match s.components.first().expect("nonempty") {
        Interval(a, _) => a.clone(),
        Point(p) => p.clone(),
        Solid(l, _) => crate::orderspace::Point::plus(l.clone()),
    };
    let hi = match s.components.last().expect("nonempty") {
        Interval(_, b) => b.clone(),
        Point(p) => p.clone(),
        Solid(_, r) => crate::orderspace::Point::minus(r.clone()),
    };
    (lo, hi)
}

fn value_constant_on(f: &StepFunction, s: &ClosedSet, expected: &Gaussian) -> bool {
    use crate::orderspace::Component::*;
    s.components.iter().all(|c| match c {
        Point(p) => f.eval(p) == *expected,
        Interval(a, b) => {
            // Check a, b and every region of f meeting (a, b).
            if f.eval(a) != *expected || f.eval(b) != *expected {
                return false;
            }
            f.breaks.iter().enumerate().all(|(i, brk)| {
                let inside = *brk > a.x && *brk < b.x
                    || (*brk == a.x && a.side == Side::Minus)
                    || (*brk == b.x && b.side == Side::Plus);
                if inside {
                    f.values[i] == *expected && f.values[i + 1] == *expected
                } else {
                    true
                }
            })
        }
        Solid(..) => false,
    })
}

/// The restriction `A↾P` of a finite step algebra to a class union.
#[derive(Clone, Debug)]
pub struct RestrictedAlgebra {
    pub ambient: FinStepAlgebra,
    pub carrier: ClosedSet,
    /// Ambient class indices surviving on the carrier.
    pub classes: Vec<usize>,
}

impl RestrictedAlgebra {
    pub fn dimension(&self) -> usize {
        self.classes.len()
    }

    /// `B_{A↾P}`: unions of surviving classes, intersected with the
    /// carrier (which, for class unions, is just the class unions inside).
    pub fn boolean_algebra(&self) -> Vec<ClosedSet> {
        let k = self.classes.len();
        assert!(k <= 16, "B enumeration capped");
        (0..(1u32 << k))
            .map(|mask| {
                let idx: Vec<usize> = (0..k)
                    .filter(|c| mask & (1 << c) != 0)
                    .map(|c| self.classes[c])
                    .collect();
                self.ambient.class_union(&idx)
            })
            .collect()
    }

    /// Membership of `g↾P`.
    pub fn contains(&self, g: &StepFunction) -> Result<bool> {
        self.ambient.restricted_contains(g, &self.carrier)
    }
}

/// Brute-force closure of the unital algebra generated by `gens`,
/// represented as a basis of value-vectors over the refinement intervals.
/// Used as the independent oracle for `saturate`.
pub fn brute_force_closure(gens: &[StepFunction]) -> BruteForceAlgebra {
    let breaks: Vec<Rat> = gens
        .iter()
        .flat_map(|g| g.breaks.iter().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let m = breaks.len() + 1;
    let vector_of = |f: &StepFunction| -> Vec<Gaussian> {
        (0..m)
            .map(|i| {
                let probe = if i == 0 {
                    Point::first()
                } else {
                    Point::plus(breaks[i - 1].clone())
                };
                f.eval(&probe)
            })
            .collect()
    };

    let mut basis: Vec<Vec<Gaussian>> = Vec::new();
    let insert = |v: Vec<Gaussian>, basis: &mut Vec<Vec<Gaussian>>| -> bool {
        // Gaussian elimination step: reduce v against basis (kept in
        // echelon form by leading index).
        let mut v = v;
        for b in basis.iter() {
            let lead = b.iter().position(|z| !z.is_zero()).expect("nonzero basis");
            if !v[lead].is_zero() {
                // v -= (v[lead]/b[lead]) * b
                let pivot = &b[lead];
                let ratio_re = div_gaussian(&v[lead], pivot);
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi = &*vi - &(&ratio_re * bi);
                }
            }
        }
        if v.iter().all(|z| z.is_zero()) {
            return false;
        }
        // Normalize so leading entry is 1; keep echelon order.
        let lead = v.iter().position(|z| !z.is_zero()).unwrap();
        let pivot = v[lead].clone();
        for z in v.iter_mut() {
            *z = div_gaussian(z, &pivot);
        }
        // Back-substitute to keep reduced form.
        let v_clone = v.clone();
        for b in basis.iter_mut() {
            if !b[lead].is_zero() {
                let factor = b[lead].clone();
                for (bi, vi) in b.iter_mut().zip(v_clone.iter()) {
                    *bi = &*bi - &(&factor * vi);
                }
            }
        }
        basis.push(v);
        basis.sort_by_key(|b| b.iter().position(|z| !z.is_zero()).unwrap());
        true
    };

    insert(vec![Gaussian::one(); m], &mut basis);
    for g in gens {
        insert(vector_of(g), &mut basis);
    }
    // Multiply basis pairs until the dimension stabilizes.
    loop {
        let snapshot = basis.clone();
        let mut grew = false;
        for a in &snapshot {
            for b in &snapshot {
                let prod: Vec<Gaussian> = a.iter().zip(b.iter()).map(|(x, y)| x * y).collect();
                if insert(prod, &mut basis) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    BruteForceAlgebra { breaks, basis }
}

fn div_gaussian(a: &Gaussian, b: &Gaussian) -> Gaussian {
    let denom = b.norm_sq();
    assert!(!denom.is_zero(), "division by zero Gaussian");
    let num = a * &b.conj();
    Gaussian::new(num.re / denom.clone(), num.im / denom)
}

/// Product-closure oracle: a reduced basis of value vectors.
pub struct BruteForceAlgebra {
    pub breaks: Vec<Rat>,
    pub basis: Vec<Vec<Gaussian>>,
}

impl BruteForceAlgebra {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Membership by reduction against the basis.
    pub fn contains(&self, f: &StepFunction) -> bool {
        // f must not jump off the refinement.
        let lo_ok = f.breaks.iter().all(|b| self.breaks.contains(b));
        if !lo_ok {
            return false;
        }
        let m = self.breaks.len() + 1;
        let mut v: Vec<Gaussian> = (0..m)
            .map(|i| {
                let probe = if i == 0 {
                    Point::first()
                } else {
                    Point::plus(self.breaks[i - 1].clone())
                };
                f.eval(&probe)
            })
            .collect();
        for b in &self.basis {
            let lead = b.iter().position(|z| !z.is_zero()).expect("nonzero basis");
            if !v[lead].is_zero() {
                let ratio = div_gaussian(&v[lead], &b[lead]);
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi = &*vi - &(&ratio * bi);
                }
            }
        }
        v.iter().all(|z| z.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sign_step(break_at: &str) -> StepFunction {
        StepFunction::new(
            vec![rat(break_at)],
            vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
        )
        .unwrap()
    }

    #[test]
    fn saturate_single_generator() {
        let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.partition, vec![rat("1/3")]);
        let bf = brute_force_closure(&[sign_step("1/3")]);
        assert_eq!(bf.dimension(), 2);
    }

    #[test]
    fn saturate_three_values() {
        let g = StepFunction::new(
            vec![rat("1/3"), rat("2/3")],
            vec![
                Gaussian::from_int(0),
                Gaussian::from_int(1),
                Gaussian::from_int(2),
            ],
        )
        .unwrap();
        let a = FinStepAlgebra::saturate(std::slice::from_ref(&g));
        assert_eq!(a.dimension(), 3);
        assert!(a.classes.iter().all(|c| c.len() == 1));
        let bf = brute_force_closure(&[g]);
        assert_eq!(bf.dimension(), 3);
    }

    #[test]
    fn saturate_empty_is_constants() {
        let a = FinStepAlgebra::saturate(&[]);
        assert_eq!(a.dimension(), 1);
        assert_eq!(a, FinStepAlgebra::constants());
    }

    #[test]
    fn membership() {
        let gen = sign_step("1/3");
        let a = FinStepAlgebra::saturate(std::slice::from_ref(&gen));
        // 3 - 2·gen
        let f = &StepFunction::constant(Gaussian::from_int(3)) - &gen.scale(&Gaussian::from_int(2));
        assert!(a.contains(&f));
        let chi = StepFunction::indicator(None, Some(rat("1/4"))).unwrap();
        assert!(!a.contains(&chi));
        assert!(a.contains(&StepFunction::constant(Gaussian::from_int(9))));
    }

    #[test]
    fn class_presentations_merge_values() {
        let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
        let classes = a.class_presentations();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].to_string(), "[(0)⁺, (1/3)⁻]");
        assert_eq!(classes[1].to_string(), "[(1/3)⁺, (1)⁻]");
        let constants = FinStepAlgebra::constants();
        assert_eq!(
            constants.class_presentations(),
            vec![SpacePresentation::full().whole_space()]
        );
    }

    #[test]
    fn restriction_to_single_class() {
        let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
        let p = a.class_union(&[0]);
        let restricted = a.restrict(&p).unwrap();
        assert_eq!(restricted.dimension(), 1);
        let b = restricted.boolean_algebra();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&ClosedSet::empty()));
        assert!(b.contains(&p));
        // Whole space restricts to A itself.
        let whole = a.class_union(&[0, 1]);
        assert_eq!(a.restrict(&whole).unwrap().dimension(), 2);
        // A half-open sub-union that is not a class union errors.
        let bad = ClosedSet::from_components(
            &SpacePresentation::full(),
            vec![crate::orderspace::Component::Interval(
                Point::first(),
                Point::minus(rat("1/4")),
            )],
        )
        .unwrap();
        assert_eq!(a.restrict(&bad).err(), Some(Error::DoesNotFactor));
    }

    #[test]
    fn annihilator_measures() {
        // A: constants on {I0}, {I1, I2} over partition {1/3, 2/3}.
        let a = FinStepAlgebra {
            partition: vec![rat("1/3"), rat("2/3")],
            classes: vec![vec![0], vec![1, 2]],
        };
        a.validate().unwrap();
        let g = StepFunction::new(
            vec![rat("1/3"), rat("2/3")],
            vec![Gaussian::zero(), Gaussian::one(), Gaussian::zero()],
        )
        .unwrap();
        let mu = a.annihilator_measure(&g).expect("g ∉ A");
        for c in 0..a.dimension() {
            assert!(mu.integrate(&a.class_indicator(c)).is_zero());
        }
        assert!(!mu.integrate(&g).is_zero());

        // g ∈ A → none.
        let inside = a.class_indicator(1);
        assert!(a.annihilator_measure(&inside).is_none());

        // Full algebra on a partition annihilates nothing defined on it.
        let full = FinStepAlgebra {
            partition: vec![rat("1/2")],
            classes: vec![vec![0], vec![1]],
        };
        let on_it = StepFunction::new(
            vec![rat("1/2")],
            vec![Gaussian::from_int(5), Gaussian::from_int(-3)],
        )
        .unwrap();
        assert!(full.annihilator_measure(&on_it).is_none());
    }

    #[test]
    fn annihilator_support_breaks_density() {
        let a = FinStepAlgebra {
            partition: vec![rat("1/3"), rat("2/3")],
            classes: vec![vec![0], vec![1, 2]],
        };
        let g = StepFunction::new(
            vec![rat("1/3"), rat("2/3")],
            vec![Gaussian::zero(), Gaussian::one(), Gaussian::zero()],
        )
        .unwrap();
        let mu = a.annihilator_measure(&g).unwrap();
        let h = mu.support().unwrap();
        assert!(a.restricted_contains(&a.class_indicator(0), &h).unwrap());
        assert!(!a.restricted_contains(&g, &h).unwrap());
    }
}
