//! Piecewise-constant functions on the circle with the average-of-limits
//! normalization, and the isometric isomorphism with step functions on
//! the double arrow.
//!
//! Angles are rational fractions of a full turn. A function is cut at
//! finitely many interior angles plus, structurally, at angle 0; its
//! value at every cut (and at angle 0) is forced to the average of its
//! one-sided limits. The map `psi` sends a step function `f` on the
//! double arrow to the circle function with the same arcs, point values
//! `(f(x⁺) + f(x⁻))/2` at each cut and `(f(0) + f(1))/2` at angle 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::ntip::{ntip_run, AlgebraOracle, NtipTrace};
use crate::rational::Rat;
use crate::stepcalc::{NiceSet, StepFunction};

/// A piecewise-constant circle function in normalized, canonical form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PiecewiseFn {
    /// Interior cut angles, strictly increasing in `(0,1)`.
    pub cuts: Vec<Rat>,
    /// Arc values: `arcs[0]` on `(0, cuts[0])` through `arcs[n]` on
    /// `(cuts[n-1], 1)`, wrapping at angle 0.
    pub arcs: Vec<Gaussian>,
    /// Forced point values: entry 0 at angle 0, then one per cut.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point_values: Option<Vec<Gaussian>>,
}

impl PiecewiseFn {
    /// Builds and normalizes: point values are overwritten by the forced
    /// averages and equal adjacent arcs are merged. Idempotent.
    pub fn normalize(cuts: Vec<Rat>, arcs: Vec<Gaussian>) -> Result<Self> {
        if arcs.len() != cuts.len() + 1 {
            return Err(Error::InvalidPresentation(format!(
                "piecewise function needs {} arcs for {} cuts, got {}",
                cuts.len() + 1,
                cuts.len(),
                arcs.len()
            )));
        }
        for c in &cuts {
            if !c.in_open_unit() {
                return Err(Error::InvalidPresentation(format!(
                    "cut angle {c} outside (0,1)"
                )));
            }
        }
        for w in cuts.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPresentation(
                    "cut angles must be strictly increasing".into(),
                ));
            }
        }
        let mut canon_cuts = Vec::with_capacity(cuts.len());
        let mut canon_arcs = vec![arcs[0].clone()];
        for (c, v) in cuts.into_iter().zip(arcs.into_iter().skip(1)) {
            if v != *canon_arcs.last().unwrap() {
                canon_cuts.push(c);
                canon_arcs.push(v);
            }
        }
        let mut out = PiecewiseFn {
            cuts: canon_cuts,
            arcs: canon_arcs,
            point_values: None,
        };
        out.point_values = Some(out.forced_point_values());
        Ok(out)
    }

    pub fn constant(z: Gaussian) -> Self {
        PiecewiseFn::normalize(vec![], vec![z]).expect("constant is valid")
    }

    /// The forced averages: at angle 0 the wrap-around average, at each
    /// cut the average of the two adjacent arcs.
    pub fn forced_point_values(&self) -> Vec<Gaussian> {
        let half = Rat::new(1, 2);
        let n = self.arcs.len();
        let mut out = Vec::with_capacity(n);
        let wrap = &self.arcs[n - 1].scale(&half) + &self.arcs[0].scale(&half);
        out.push(wrap);
        for i in 0..self.cuts.len() {
            out.push(&self.arcs[i].scale(&half) + &self.arcs[i + 1].scale(&half));
        }
        out
    }

    /// Essential sup norm squared: the max over arcs (point values are
    /// averages and never exceed it).
    pub fn sup_norm_sq(&self) -> Rat {
        self.arcs
            .iter()
            .map(Gaussian::norm_sq)
            .fold(Rat::zero(), Rat::max)
    }

    pub fn mul(&self, other: &PiecewiseFn) -> PiecewiseFn {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &PiecewiseFn) -> PiecewiseFn {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(
        &self,
        other: &PiecewiseFn,
        op: impl Fn(&Gaussian, &Gaussian) -> Gaussian,
    ) -> PiecewiseFn {
        let f = psi_inv(self);
        let g = psi_inv(other);
        let refined = StepFunction::refine(&f, &g);
        let values: Vec<Gaussian> = {
            let probe = |i: usize| {
                if i == 0 {
                    crate::orderspace::Point::first()
                } else {
                    crate::orderspace::Point::plus(refined[i - 1].clone())
                }
            };
            (0..=refined.len())
                .map(|i| op(&f.eval(&probe(i)), &g.eval(&probe(i))))
                .collect()
        };
        let step = StepFunction::new(refined, values).expect("refinement is valid");
        psi(&step)
    }
}

/// The isometry: breaks become cuts, interval values become arc values,
/// point values are the forced averages.
pub fn psi(f: &StepFunction) -> PiecewiseFn {
    PiecewiseFn::normalize(f.breaks.clone(), f.values.clone())
        .expect("step functions transcribe directly")
}

/// Exact inverse of `psi` on piecewise-constant data.
pub fn psi_inv(g: &PiecewiseFn) -> StepFunction {
    StepFunction::new(g.cuts.clone(), g.arcs.clone()).expect("canonical arcs are a step function")
}

/// One entry of the density demo report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DemoEntry {
    pub q: Rat,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Box<NtipTrace>>,
}

/// Report of the desk-scale density illustration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DemoReport {
    pub cut_coordinates: Vec<Rat>,
    pub note: Option<String>,
    pub entries: Vec<DemoEntry>,
}

/// Maps generators through `psi⁻¹`, builds the breakpoint oracle of their
/// cut set, and reports whether the pipeline extracts an idempotent at
/// each sampled target pair. An illustration of the density corollary's
/// mechanism, not a proof.
pub fn density_demo(gens: &[PiecewiseFn], targets: &[Rat]) -> DemoReport {
    let mut coords = NiceSet::new([]).expect("empty set is nice");
    for g in gens {
        for c in &g.cuts {
            coords.insert(c.clone());
        }
    }
    let cut_coordinates: Vec<Rat> = coords.coords.iter().cloned().collect();
    if cut_coordinates.is_empty() {
        return DemoReport {
            cut_coordinates,
            note: Some("no discontinuities; hypothesis of the corollary unmet".into()),
            entries: vec![],
        };
    }
    // The oracle jumps at the generators' cuts and at every dyadic, so
    // the sampled targets can be described over the plain dyadic S.
    let mut oracle_coords = NiceSet::dyadics(64);
    for c in &cut_coordinates {
        oracle_coords.insert(c.clone());
    }
    let oracle = AlgebraOracle::breakpoints(oracle_coords);
    let s = {
        let mut s = NiceSet::dyadics(64);
        for q in targets {
            s = s.without(q);
        }
        s
    };
    let entries = targets
        .iter()
        .map(|q| match ntip_run(&oracle, &s, q) {
            Ok(trace) => DemoEntry {
                q: q.clone(),
                outcome: format!("idempotent on {}", trace.result.h),
                trace: Some(Box::new(trace)),
            },
            Err(e) => DemoEntry {
                q: q.clone(),
                outcome: format!("no extraction: {e}"),
                trace: None,
            },
        })
        .collect();
    DemoReport {
        cut_coordinates,
        note: None,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn step(breaks: &[&str], values: &[i64]) -> StepFunction {
        StepFunction::new(
            breaks.iter().map(|s| rat(s)).collect(),
            values.iter().map(|v| Gaussian::from_int(*v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn psi_transcribes_with_forced_averages() {
        let f = step(&["1/3"], &[0, 4]);
        let g = psi(&f);
        assert_eq!(g.cuts, vec![rat("1/3")]);
        assert_eq!(g.arcs, vec![Gaussian::from_int(0), Gaussian::from_int(4)]);
        let pv = g.forced_point_values();
        assert_eq!(pv[0], Gaussian::from_int(2)); // (4 + 0)/2 at angle 0
        assert_eq!(pv[1], Gaussian::from_int(2)); // (0 + 4)/2 at the cut
        assert_eq!(psi_inv(&g), f);
    }

    #[test]
    fn constants_map_to_constants() {
        let c = StepFunction::constant(Gaussian::from_int(7));
        let g = psi(&c);
        assert!(g.cuts.is_empty());
        assert_eq!(g.forced_point_values(), vec![Gaussian::from_int(7)]);
    }

    #[test]
    fn normalization_is_forced_and_idempotent() {
        // Arcs (0, 4) with an arbitrary claimed cut value normalize to 2.
        let g = PiecewiseFn::normalize(
            vec![rat("1/3")],
            vec![Gaussian::from_int(0), Gaussian::from_int(4)],
        )
        .unwrap();
        assert_eq!(g.point_values.as_ref().unwrap()[1], Gaussian::from_int(2));
        let again = PiecewiseFn::normalize(g.cuts.clone(), g.arcs.clone()).unwrap();
        assert_eq!(again, g);
        // Equal adjacent arcs merge: continuous input loses its cut.
        let merged = PiecewiseFn::normalize(
            vec![rat("1/2")],
            vec![Gaussian::from_int(3), Gaussian::from_int(3)],
        )
        .unwrap();
        assert!(merged.cuts.is_empty());
    }

    #[test]
    fn ring_isomorphism_and_isometry() {
        let f = step(&["1/4", "1/2"], &[1, -2, 3]);
        let f2 = step(&["1/3"], &[0, 5]);
        assert_eq!(psi(&(&f * &f2)), psi(&f).mul(&psi(&f2)));
        assert_eq!(
            psi(&StepFunction::constant(Gaussian::one())),
            PiecewiseFn::constant(Gaussian::one())
        );
        assert_eq!(psi(&f).sup_norm_sq(), f.sup_norm_sq().0);
    }

    #[test]
    fn demo_without_discontinuities() {
        let report = density_demo(&[PiecewiseFn::constant(Gaussian::one())], &[rat("1/3")]);
        assert!(report.note.unwrap().contains("no discontinuities"));
    }

    #[test]
    fn demo_extracts_at_the_pipeline_target() {
        let gen = psi(&step(&["1/3"], &[-1, 1]));
        let report = density_demo(&[gen], &[rat("1/3")]);
        assert_eq!(report.entries.len(), 1);
        assert!(
            report.entries[0].outcome.contains("idempotent"),
            "got {}",
            report.entries[0].outcome
        );
    }
}
