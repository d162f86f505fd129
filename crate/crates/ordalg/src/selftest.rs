//! Self-test orchestration: the quick fixture suite and the acceptance
//! criteria, shared between the `acceptance` test target and the CLI's
//! `selftest` command.
//!
//! Each acceptance criterion runs at its stated tolerance and reports one
//! pass/fail line. Fuzz suites are deterministic; `ORDALG_SEED` overrides
//! the seed.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::circle::{density_demo, psi, psi_inv, PiecewiseFn};
use crate::descriptors::{
    build_descriptor, re_gap, Ball, BallCover, Descriptor, GapHypothesis, GapInput,
};
use crate::error::Error;
use crate::finalg::{brute_force_closure, FinStepAlgebra};
use crate::gaussian::Gaussian;
use crate::idempotents::{extract_idempotent, indicator_poly, Disc, DiscUnion};
use crate::ntip::{ntip_run, verify_trace, AlgebraOracle};
use crate::orderspace::{
    compare_points, is_neighbor_pair, ClosedSet, Component, Point, SpacePresentation,
};
use crate::rational::{rat, Rat};
use crate::stepcalc::{Measure, NiceSet, StepFunction};

pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{}: criterion {} — {} ({} ms) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.millis,
            self.detail,
        )
    }
}

pub fn fuzz_seed() -> u64 {
    std::env::var("ORDALG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xCA57_0FF1)
}

fn check(name: &str, f: impl FnOnce() -> Result<(), String>) -> CheckReport {
    match f() {
        Ok(()) => CheckReport {
            name: name.to_string(),
            pass: true,
            detail: String::new(),
        },
        Err(detail) => CheckReport {
            name: name.to_string(),
            pass: false,
            detail,
        },
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}, want {want:?}"))
    }
}

fn expect_true(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("expected {what}"))
    }
}

fn sign_step(break_at: &str) -> StepFunction {
    StepFunction::new(
        vec![rat(break_at)],
        vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
    )
    .unwrap()
}

fn int_step(breaks: &[&str], values: &[i64]) -> StepFunction {
    StepFunction::new(
        breaks.iter().map(|s| rat(s)).collect(),
        values.iter().map(|v| Gaussian::from_int(*v)).collect(),
    )
    .unwrap()
}

fn pipeline_oracle() -> AlgebraOracle {
    let mut coords = NiceSet::dyadics(64);
    coords.insert(rat("1/3"));
    AlgebraOracle::breakpoints(coords)
}

/// The fixture suite: the worked examples of every operation, asserted
/// exactly.
pub fn quick_fixtures() -> Vec<CheckReport> {
    use std::cmp::Ordering::*;
    let full = SpacePresentation::full();
    let mut out = Vec::new();
    let mut run = |name: &str, f: Box<dyn FnOnce() -> Result<(), String>>| {
        out.push(check(name, f));
    };

    run(
        "compare pair order",
        Box::new(|| {
            expect(
                compare_points(&Point::minus(rat("1/3")), &Point::plus(rat("1/3"))),
                Less,
            )
        }),
    );
    run(
        "compare endpoints",
        Box::new(|| expect(compare_points(&Point::first(), &Point::last()), Less)),
    );
    run(
        "compare coordinates",
        Box::new(|| {
            expect(
                compare_points(&Point::plus(rat("1/2")), &Point::minus(rat("2/3"))),
                Less,
            )
        }),
    );
    run(
        "neighbor pair at a doubled coordinate",
        Box::new({
            let full = full.clone();
            move || {
                expect(
                    is_neighbor_pair(&full, &Point::minus(rat("1/3")), &Point::plus(rat("1/3")))
                        .map_err(|e| e.to_string())?,
                    true,
                )
            }
        }),
    );
    run(
        "no neighbor across coordinates",
        Box::new({
            let full = full.clone();
            move || {
                expect(
                    is_neighbor_pair(&full, &Point::plus(rat("1/3")), &Point::minus(rat("1/2")))
                        .map_err(|e| e.to_string())?,
                    false,
                )
            }
        }),
    );
    run(
        "undoubled coordinate rejects the pair",
        Box::new(|| {
            let minus = SpacePresentation::minus([rat("1/3")]).map_err(|e| e.to_string())?;
            expect_true(
                is_neighbor_pair(&minus, &Point::minus(rat("1/3")), &Point::plus(rat("1/3")))
                    .is_err(),
                "error for the undoubled pair",
            )
        }),
    );

    let interval_and_point = ClosedSet::from_components(
        &full,
        vec![
            Component::Interval(Point::first(), Point::minus(rat("1/2"))),
            Component::Point(Point::minus(rat("3/4"))),
        ],
    )
    .unwrap();
    let interval_only = ClosedSet::from_components(
        &full,
        vec![Component::Interval(
            Point::first(),
            Point::minus(rat("1/2")),
        )],
    )
    .unwrap();
    run(
        "derivative drops the isolated point",
        Box::new({
            let (s, want, full) = (
                interval_and_point.clone(),
                interval_only.clone(),
                full.clone(),
            );
            move || expect(s.cb_derivative(&full), want)
        }),
    );
    run(
        "finite chain derivative is empty",
        Box::new(|| {
            let chain = SpacePresentation::chain(5).map_err(|e| e.to_string())?;
            expect(
                chain.whole_space().cb_derivative(&chain),
                ClosedSet::empty(),
            )
        }),
    );
    run(
        "whole double arrow is a derivative fixed point",
        Box::new({
            let full = full.clone();
            move || {
                let whole = full.whole_space();
                expect(whole.cb_derivative(&full), whole)
            }
        }),
    );
    run(
        "finite chain kernel is empty",
        Box::new(|| {
            let chain = SpacePresentation::chain(5).map_err(|e| e.to_string())?;
            expect(chain.whole_space().kernel(&chain), ClosedSet::empty())
        }),
    );
    run(
        "kernel stabilizes in one derivative step",
        Box::new({
            let (s, want, full) = (
                interval_and_point.clone(),
                interval_only.clone(),
                full.clone(),
            );
            move || expect(s.kernel(&full), want)
        }),
    );
    run(
        "kernel is idempotent on the fixture",
        Box::new({
            let (s, full) = (interval_and_point.clone(), full.clone());
            move || {
                let k = s.kernel(&full);
                expect(k.kernel(&full), k)
            }
        }),
    );
    run(
        "full double arrow carries no Cantor set",
        Box::new({
            let full = full.clone();
            move || expect(full.whole_space().contains_cantor(&full), false)
        }),
    );
    run(
        "solid segments carry Cantor sets",
        Box::new({
            let full = full.clone();
            move || {
                let s = ClosedSet::from_components(
                    &full,
                    vec![Component::Solid(rat("1/4"), rat("1/2"))],
                )
                .map_err(|e| e.to_string())?;
                expect(s.contains_cantor(&full), true)
            }
        }),
    );
    run(
        "finite chains carry no Cantor set",
        Box::new(|| {
            let chain = SpacePresentation::chain(7).map_err(|e| e.to_string())?;
            expect(chain.whole_space().contains_cantor(&chain), false)
        }),
    );

    run(
        "complementary indicators sum to 1",
        Box::new(|| {
            let lo = StepFunction::indicator(None, Some(rat("1/2"))).map_err(|e| e.to_string())?;
            let hi = StepFunction::indicator(Some(rat("1/2")), None).map_err(|e| e.to_string())?;
            expect(&lo + &hi, StepFunction::constant(Gaussian::one()))
        }),
    );
    run(
        "±1 squares to 1",
        Box::new(|| {
            let f = sign_step("1/3");
            expect(&f * &f, StepFunction::constant(Gaussian::one()))
        }),
    );
    run(
        "pipeline difference 0 | -2 | 0",
        Box::new(|| {
            let h = &sign_step("1/3") - &sign_step("21/64");
            expect(h, int_step(&["21/64", "1/3"], &[0, -2, 0]))
        }),
    );
    run(
        "|3+4i|² = 25",
        Box::new(|| {
            expect(
                StepFunction::constant(Gaussian::new(rat("3"), rat("4")))
                    .sup_norm_sq()
                    .0,
                rat("25"),
            )
        }),
    );
    run(
        "sup norm of the pipeline difference",
        Box::new(|| {
            expect(
                int_step(&["21/64", "1/3"], &[0, -2, 0]).sup_norm_sq().0,
                rat("4"),
            )
        }),
    );
    run(
        "sup norm over a left block",
        Box::new({
            let full = full.clone();
            move || {
                let h = ClosedSet::from_components(
                    &full,
                    vec![Component::Interval(
                        Point::first(),
                        Point::minus(rat("21/64")),
                    )],
                )
                .map_err(|e| e.to_string())?;
                expect(
                    sign_step("1/3")
                        .sup_norm_sq_on(&h)
                        .map_err(|e| e.to_string())?
                        .0,
                    rat("1"),
                )
            }
        }),
    );
    run(
        "restriction to the whole space is the identity",
        Box::new({
            let full = full.clone();
            move || {
                let f = sign_step("1/3");
                expect(
                    f.restrict(&full.whole_space()).map_err(|e| e.to_string())?,
                    f,
                )
            }
        }),
    );
    run(
        "jump outside the restriction disappears",
        Box::new({
            let full = full.clone();
            move || {
                let f = sign_step("1/3");
                let h = ClosedSet::from_components(
                    &full,
                    vec![Component::Interval(Point::plus(rat("1/2")), Point::last())],
                )
                .map_err(|e| e.to_string())?;
                expect(
                    f.restrict(&h).map_err(|e| e.to_string())?,
                    StepFunction::constant(Gaussian::one()),
                )
            }
        }),
    );
    run(
        "restriction to two points keeps the separating break",
        Box::new({
            let full = full.clone();
            move || {
                let chi =
                    StepFunction::indicator(None, Some(rat("1/3"))).map_err(|e| e.to_string())?;
                let h = ClosedSet::from_components(
                    &full,
                    vec![
                        Component::Point(Point::plus(rat("1/4"))),
                        Component::Point(Point::plus(rat("1/2"))),
                    ],
                )
                .map_err(|e| e.to_string())?;
                let r = chi.restrict(&h).map_err(|e| e.to_string())?;
                expect(
                    (
                        r.eval(&Point::plus(rat("1/4"))),
                        r.eval(&Point::plus(rat("1/2"))),
                    ),
                    (Gaussian::one(), Gaussian::zero()),
                )
            }
        }),
    );
    run(
        "JMP of the pipeline witness has |R| = 4",
        Box::new(|| expect(sign_step("1/3").jmp(&rat("1/3")).size(), 4)),
    );
    run(
        "JMP of a constant is the endpoints",
        Box::new(|| {
            expect(
                StepFunction::constant(Gaussian::from_int(9))
                    .jmp(&rat("1/7"))
                    .size(),
                2,
            )
        }),
    );
    run(
        "small jumps fall below the threshold",
        Box::new(|| {
            let g = StepFunction::new(
                vec![rat("1/3"), rat("2/3")],
                vec![
                    Gaussian::zero(),
                    Gaussian::from_int(2),
                    Gaussian::real(rat("11/5")),
                ],
            )
            .map_err(|e| e.to_string())?;
            let j = g.jmp(&rat("1/3"));
            expect_true(
                j.contains_pair(&rat("1/3")) && !j.contains_pair(&rat("2/3")),
                "only the large jump included",
            )
        }),
    );
    run(
        "point evaluation integral",
        Box::new(|| {
            let mu = Measure::from_atoms(vec![(Point::plus(rat("1/3")), Gaussian::one())]);
            expect(mu.integrate(&sign_step("1/3")), Gaussian::one())
        }),
    );
    run(
        "exact Riemann sum 4·(2/3)",
        Box::new(|| {
            let mu = Measure::default().with_density(rat("0"), rat("1"), rat("1"));
            expect(
                mu.integrate(&int_step(&["1/3"], &[0, 4])),
                Gaussian::real(rat("8/3")),
            )
        }),
    );
    run(
        "balanced atoms kill constants",
        Box::new(|| {
            let mu = Measure::from_atoms(vec![
                (Point::plus(rat("1/4")), Gaussian::one()),
                (Point::plus(rat("1/2")), -&Gaussian::one()),
            ]);
            expect(
                mu.integrate(&StepFunction::constant(Gaussian::from_int(3))),
                Gaussian::zero(),
            )
        }),
    );
    run(
        "support of two atoms",
        Box::new(|| {
            let mu = Measure::from_atoms(vec![
                (Point::plus(rat("1/4")), Gaussian::one()),
                (Point::minus(rat("1/2")), Gaussian::from_int(2)),
            ]);
            expect(mu.support().map_err(|e| e.to_string())?.components.len(), 2)
        }),
    );
    run(
        "support of a density is the order-closure",
        Box::new(|| {
            let mu = Measure::default().with_density(rat("1/4"), rat("1/2"), rat("1"));
            expect(
                mu.support().map_err(|e| e.to_string())?.components,
                vec![Component::Interval(
                    Point::plus(rat("1/4")),
                    Point::minus(rat("1/2")),
                )],
            )
        }),
    );
    run(
        "zero measure has empty support",
        Box::new(|| {
            expect(
                Measure::default().support().map_err(|e| e.to_string())?,
                ClosedSet::empty(),
            )
        }),
    );

    run(
        "saturation of the sign generator has dimension 2",
        Box::new(|| expect(FinStepAlgebra::saturate(&[sign_step("1/3")]).dimension(), 2)),
    );
    run(
        "three distinct values saturate to dimension 3",
        Box::new(|| {
            expect(
                FinStepAlgebra::saturate(&[int_step(&["1/3", "2/3"], &[0, 1, 2])]).dimension(),
                3,
            )
        }),
    );
    run(
        "no generators saturate to the constants",
        Box::new(|| expect(FinStepAlgebra::saturate(&[]), FinStepAlgebra::constants())),
    );
    run(
        "membership of an algebra combination",
        Box::new(|| {
            let gen = sign_step("1/3");
            let a = FinStepAlgebra::saturate(std::slice::from_ref(&gen));
            let f =
                &StepFunction::constant(Gaussian::from_int(3)) - &gen.scale(&Gaussian::from_int(2));
            expect(a.contains(&f), true)
        }),
    );
    run(
        "a finer indicator is not a member",
        Box::new(|| {
            let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
            let chi = StepFunction::indicator(None, Some(rat("1/4"))).map_err(|e| e.to_string())?;
            expect(a.contains(&chi), false)
        }),
    );
    run(
        "constants belong to every algebra",
        Box::new(|| {
            let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
            expect(
                a.contains(&StepFunction::constant(Gaussian::from_int(5))),
                true,
            )
        }),
    );
    run(
        "classes of the sign algebra",
        Box::new(|| {
            let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
            expect(
                a.class_presentations()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>(),
                vec!["[(0)⁺, (1/3)⁻]".to_string(), "[(1/3)⁺, (1)⁻]".to_string()],
            )
        }),
    );
    run(
        "the constants have one class, the whole space",
        Box::new({
            let full = full.clone();
            move || {
                expect(
                    FinStepAlgebra::constants().class_presentations(),
                    vec![full.whole_space()],
                )
            }
        }),
    );
    run(
        "restriction to a single class has B = {∅, P}",
        Box::new(|| {
            let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
            let p = a.class_union(&[0]);
            let b = a.restrict(&p).map_err(|e| e.to_string())?.boolean_algebra();
            expect_true(
                b.len() == 2 && b.contains(&ClosedSet::empty()) && b.contains(&p),
                "B = {∅, P}",
            )
        }),
    );
    run(
        "restriction to the whole space is the algebra",
        Box::new(|| {
            let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
            let whole = a.class_union(&[0, 1]);
            expect(
                a.restrict(&whole).map_err(|e| e.to_string())?.dimension(),
                2,
            )
        }),
    );
    run(
        "non-class unions do not factor",
        Box::new({
            let full = full.clone();
            move || {
                let a = FinStepAlgebra::saturate(&[sign_step("1/3")]);
                let bad = ClosedSet::from_components(
                    &full,
                    vec![Component::Interval(
                        Point::first(),
                        Point::minus(rat("1/4")),
                    )],
                )
                .map_err(|e| e.to_string())?;
                expect(a.restrict(&bad).err(), Some(Error::DoesNotFactor))
            }
        }),
    );
    run(
        "annihilating measure for χ off the algebra",
        Box::new(|| {
            let a = FinStepAlgebra {
                partition: vec![rat("1/3"), rat("2/3")],
                classes: vec![vec![0], vec![1, 2]],
            };
            let g = int_step(&["1/3", "2/3"], &[0, 1, 0]);
            let mu = a.annihilator_measure(&g).ok_or("expected a measure")?;
            for c in 0..a.dimension() {
                if !mu.integrate(&a.class_indicator(c)).is_zero() {
                    return Err("measure does not annihilate the algebra".into());
                }
            }
            expect_true(!mu.integrate(&g).is_zero(), "∫g dμ ≠ 0")
        }),
    );
    run(
        "members have no annihilating measure",
        Box::new(|| {
            let a = FinStepAlgebra {
                partition: vec![rat("1/3"), rat("2/3")],
                classes: vec![vec![0], vec![1, 2]],
            };
            expect_true(
                a.annihilator_measure(&a.class_indicator(1)).is_none(),
                "none for members",
            )
        }),
    );
    run(
        "the full algebra annihilates nothing on its partition",
        Box::new(|| {
            let full_alg = FinStepAlgebra {
                partition: vec![rat("1/2")],
                classes: vec![vec![0], vec![1]],
            };
            expect_true(
                full_alg
                    .annihilator_measure(&int_step(&["1/2"], &[5, -3]))
                    .is_none(),
                "none for the full algebra",
            )
        }),
    );

    run(
        "descriptor choice rule brackets 1/3 by (5/16, 3/8)",
        Box::new(|| {
            let delta = build_descriptor(&sign_step("1/3"), &NiceSet::dyadics(64))
                .map_err(|e| e.to_string())?;
            expect(delta.pairs, vec![rat("5/16"), rat("3/8")])
        }),
    );
    run(
        "constant descriptors carry no pairs",
        Box::new(|| {
            let delta = build_descriptor(
                &StepFunction::constant(Gaussian::from_int(2)),
                &NiceSet::dyadics(8),
            )
            .map_err(|e| e.to_string())?;
            expect(delta.pairs.len(), 0)
        }),
    );
    run(
        "sparse nice sets are rejected by name",
        Box::new(|| {
            let sparse = NiceSet::new([]).map_err(|e| e.to_string())?;
            match build_descriptor(&sign_step("1/2"), &sparse) {
                Err(Error::STooSparse { .. }) => Ok(()),
                other => Err(format!("expected S-too-sparse, got {other:?}")),
            }
        }),
    );
    let reference_delta = Descriptor::new(
        vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
        vec![rat("5/16"), rat("3/8")],
    )
    .unwrap();
    run(
        "τ at 11/32 matches the descriptor",
        Box::new({
            let d = reference_delta.clone();
            move || expect(d.matches(&sign_step("11/32")), true)
        }),
    );
    run(
        "a jump left of the window fails the match",
        Box::new({
            let d = reference_delta.clone();
            move || expect(d.matches(&sign_step("1/4")), false)
        }),
    );
    run(
        "a flipped value sequence fails the match",
        Box::new({
            let d = reference_delta.clone();
            move || {
                let flipped = StepFunction::new(
                    vec![rat("11/32")],
                    vec![Gaussian::from_int(1), Gaussian::from_int(-1)],
                )
                .map_err(|e| e.to_string())?;
                expect(d.matches(&flipped), false)
            }
        }),
    );
    run(
        "difference cover has radius 1/3 and centers 0, ±2",
        Box::new({
            let d = reference_delta.clone();
            move || {
                let cover = d.difference_cover(&rat("1/6"));
                expect_true(
                    cover.balls.iter().all(|b| b.radius_sq == rat("1/9")) && cover.balls.len() == 3,
                    "three balls of squared radius 1/9",
                )
            }
        }),
    );
    run(
        "constant descriptors cover with a single ball",
        Box::new(|| {
            let d =
                Descriptor::new(vec![Gaussian::from_int(3)], vec![]).map_err(|e| e.to_string())?;
            expect(d.difference_cover(&rat("1/6")).balls.len(), 1)
        }),
    );
    run(
        "gap of {0, -2} is -1",
        Box::new(|| {
            let input = GapInput::Values(vec![Gaussian::zero(), Gaussian::from_int(-2)]);
            let hyp = GapHypothesis {
                r: 1,
                w0: Gaussian::from_int(-2),
            };
            expect(
                re_gap(&input, Some(&hyp)).map_err(|e| e.to_string())?,
                Some(rat("-1")),
            )
        }),
    );
    run(
        "cover-input gap lands in (1, 5/3)",
        Box::new(|| {
            let cover = BallCover {
                balls: vec![
                    Ball {
                        center: Gaussian::zero(),
                        radius_sq: rat("1"),
                    },
                    Ball {
                        center: Gaussian::from_int(2),
                        radius_sq: rat("1/9"),
                    },
                ],
            };
            let b = re_gap(&GapInput::Cover(cover), None)
                .map_err(|e| e.to_string())?
                .ok_or("expected a gap")?;
            expect_true(b > rat("1") && b < rat("5/3"), "midpoint inside (1, 5/3)")
        }),
    );
    run(
        "a single value has no two-sided gap",
        Box::new(|| {
            expect(
                re_gap(&GapInput::Values(vec![Gaussian::zero()]), None)
                    .map_err(|e| e.to_string())?,
                None,
            )
        }),
    );

    run(
        "extraction on the pipeline difference",
        Box::new(|| {
            let h = int_step(&["21/64", "1/3"], &[0, -2, 0]);
            let cert = extract_idempotent(&h, &rat("-1")).map_err(|e| e.to_string())?;
            expect_true(
                cert.nontrivial && cert.h.to_string() == "[(21/64)⁺, (1/3)⁻]",
                "the middle block",
            )
        }),
    );
    run(
        "extraction below a constant is trivial",
        Box::new(|| {
            let cert =
                extract_idempotent(&StepFunction::constant(Gaussian::from_int(5)), &rat("0"))
                    .map_err(|e| e.to_string())?;
            expect_true(!cert.nontrivial && cert.h.is_empty(), "empty sublevel set")
        }),
    );
    run(
        "b on the range is rejected by name",
        Box::new(|| {
            let h = int_step(&["21/64", "1/3"], &[0, -2, 0]);
            match extract_idempotent(&h, &rat("-2")) {
                Err(Error::BHitsRange { .. }) => Ok(()),
                other => Err(format!("expected b-hits-range, got {other:?}")),
            }
        }),
    );
    run(
        "degenerate disc pair yields the exact line",
        Box::new(|| {
            let k0 = DiscUnion::new(vec![Disc::point(Gaussian::zero())]);
            let k1 = DiscUnion::new(vec![Disc::point(Gaussian::from_int(3))]);
            let w = indicator_poly(&k0, &k1, &rat("1/1000000"), 10).map_err(|e| e.to_string())?;
            expect_true(
                w.certified_err_sq.is_zero()
                    && w.coefficients == vec![Gaussian::one(), Gaussian::real(rat("-1/3"))],
                "p(z) = 1 - z/3 with error 0",
            )
        }),
    );
    run(
        "empty far side yields the constant 1",
        Box::new(|| {
            let k0 = DiscUnion::new(vec![Disc::point(Gaussian::zero())]);
            let w = indicator_poly(&k0, &DiscUnion::default(), &rat("1/100"), 10)
                .map_err(|e| e.to_string())?;
            expect(w.coefficients, vec![Gaussian::one()])
        }),
    );

    run(
        "psi transcribes and averages",
        Box::new(|| {
            let g = psi(&int_step(&["1/3"], &[0, 4]));
            let pv = g.forced_point_values();
            expect_true(
                g.cuts == vec![rat("1/3")]
                    && pv == vec![Gaussian::from_int(2), Gaussian::from_int(2)],
                "cut at 1/3, point values 2",
            )
        }),
    );
    run(
        "psi of a constant is constant",
        Box::new(|| {
            expect(
                psi(&StepFunction::constant(Gaussian::from_int(6))),
                PiecewiseFn::constant(Gaussian::from_int(6)),
            )
        }),
    );
    run(
        "forced averages overwrite claimed point values",
        Box::new(|| {
            let g = PiecewiseFn::normalize(
                vec![rat("1/3")],
                vec![Gaussian::zero(), Gaussian::from_int(4)],
            )
            .map_err(|e| e.to_string())?;
            expect(
                g.point_values.ok_or("normalized values missing")?[1].clone(),
                Gaussian::from_int(2),
            )
        }),
    );
    run(
        "normalization is idempotent",
        Box::new(|| {
            let g = PiecewiseFn::normalize(
                vec![rat("1/4")],
                vec![Gaussian::from_int(1), Gaussian::from_int(2)],
            )
            .map_err(|e| e.to_string())?;
            expect(
                PiecewiseFn::normalize(g.cuts.clone(), g.arcs.clone())
                    .map_err(|e| e.to_string())?,
                g,
            )
        }),
    );
    run(
        "continuous input loses its cut",
        Box::new(|| {
            let g = PiecewiseFn::normalize(
                vec![rat("1/2")],
                vec![Gaussian::from_int(3), Gaussian::from_int(3)],
            )
            .map_err(|e| e.to_string())?;
            expect(g.cuts.len(), 0)
        }),
    );
    run(
        "demo of constants reports the unmet hypothesis",
        Box::new(|| {
            let report = density_demo(&[PiecewiseFn::constant(Gaussian::one())], &[rat("1/3")]);
            expect_true(
                report
                    .note
                    .unwrap_or_default()
                    .contains("no discontinuities"),
                "hypothesis note",
            )
        }),
    );

    run(
        "reference pipeline run and verification",
        Box::new(|| {
            let oracle = pipeline_oracle();
            let s = NiceSet::dyadics(64);
            let t = ntip_run(&oracle, &s, &rat("1/3")).map_err(|e| e.to_string())?;
            verify_trace(&t, &oracle)?;
            expect_true(
                t.r == 1
                    && t.eps == rat("1/6")
                    && t.w0 == Gaussian::from_int(-2)
                    && t.result.h.to_string() == "[(21/64)⁺, (1/3)⁻]",
                "the reference trace",
            )
        }),
    );
    run(
        "targets inside S are rejected",
        Box::new(|| {
            let oracle = pipeline_oracle();
            expect(
                ntip_run(&oracle, &NiceSet::dyadics(64), &rat("1/2")).err(),
                Some(Error::TargetInNiceSet),
            )
        }),
    );
    run(
        "tampered b fails verification",
        Box::new(|| {
            let oracle = pipeline_oracle();
            let mut t =
                ntip_run(&oracle, &NiceSet::dyadics(64), &rat("1/3")).map_err(|e| e.to_string())?;
            t.b = rat("-3");
            expect(
                verify_trace(&t, &oracle).err(),
                Some("b hits/escapes gap".into()),
            )
        }),
    );
    run(
        "tampered τ endpoints fail verification",
        Box::new(|| {
            let oracle = pipeline_oracle();
            let mut t =
                ntip_run(&oracle, &NiceSet::dyadics(64), &rat("1/3")).map_err(|e| e.to_string())?;
            t.tau = sign_step("1/3");
            expect(
                verify_trace(&t, &oracle).err(),
                Some("endpoints not in S".into()),
            )
        }),
    );

    out
}

// Random generation helpers for the fuzz criteria.

fn random_rat_in_unit(rng: &mut StdRng) -> Rat {
    let denom = rng.random_range(2..=64i64);
    let numer = rng.random_range(1..denom);
    Rat::new(numer, denom)
}

fn random_small_gaussian(rng: &mut StdRng) -> Gaussian {
    let part = |rng: &mut StdRng| {
        let denom = rng.random_range(1..=4i64);
        let numer = rng.random_range(-6..=6i64);
        Rat::new(numer, denom)
    };
    Gaussian::new(part(rng), part(rng))
}

/// A Gaussian strictly inside the open ball, sampled on a rational grid.
fn random_in_ball(rng: &mut StdRng, center: &Gaussian, radius: &Rat) -> Gaussian {
    // Components within radius/2 keep the squared modulus under radius².
    let half = radius * &Rat::new(1, 2);
    let coord = |rng: &mut StdRng| {
        let steps = rng.random_range(-8..=8i64);
        &half * &Rat::new(steps, 8)
    };
    Gaussian::new(&center.re + &coord(rng), &center.im + &coord(rng))
}

fn random_descriptor(rng: &mut StdRng) -> Descriptor {
    let n = rng.random_range(1..=3usize);
    let mut values = vec![random_small_gaussian(rng)];
    while values.len() < n + 1 {
        let v = random_small_gaussian(rng);
        if v != *values.last().unwrap() {
            values.push(v);
        }
    }
    let mut pairs: std::collections::BTreeSet<Rat> = Default::default();
    while pairs.len() < n + 1 {
        pairs.insert(random_rat_in_unit(rng));
    }
    Descriptor::new(values, pairs.into_iter().collect()).expect("valid random descriptor")
}

fn random_matching_step(rng: &mut StdRng, delta: &Descriptor) -> StepFunction {
    let breaks: Vec<Rat> = (0..delta.jump_count())
        .map(|i| {
            let (lo, hi) = delta.window(i);
            // Strictly inside the window on a rational grid.
            let t = Rat::new(rng.random_range(1..=15i64), 16);
            lo + &((hi - lo) * t)
        })
        .collect();
    StepFunction::new(breaks, delta.z.clone()).expect("matching step function")
}

/// A perturbation with sup norm strictly below `eps`.
fn random_perturbation(rng: &mut StdRng, eps: &Rat) -> StepFunction {
    let break_count = rng.random_range(0..=3usize);
    let mut breaks: std::collections::BTreeSet<Rat> = Default::default();
    for _ in 0..break_count {
        breaks.insert(random_rat_in_unit(rng));
    }
    let breaks: Vec<Rat> = breaks.into_iter().collect();
    let coord = |rng: &mut StdRng| {
        let steps = rng.random_range(-8..=8i64);
        eps * &Rat::new(steps, 17)
    };
    let values = (0..=breaks.len())
        .map(|_| Gaussian::new(coord(rng), coord(rng)))
        .collect();
    StepFunction::new(breaks, values).expect("valid perturbation")
}

fn criterion_frame(
    id: usize,
    name: &'static str,
    body: impl FnOnce() -> Result<String, String>,
    budget_ms: u128,
) -> CriterionReport {
    let start = Instant::now();
    let result = body();
    let millis = start.elapsed().as_millis();
    match result {
        Ok(detail) if millis <= budget_ms => CriterionReport {
            id,
            name,
            pass: true,
            detail,
            millis,
        },
        Ok(detail) => CriterionReport {
            id,
            name,
            pass: false,
            detail: format!("{detail}; exceeded {budget_ms} ms budget"),
            millis,
        },
        Err(detail) => CriterionReport {
            id,
            name,
            pass: false,
            detail,
            millis,
        },
    }
}

/// Criterion 1: the end-to-end extraction with the exact constants.
pub fn criterion_1() -> CriterionReport {
    criterion_frame(
        1,
        "end-to-end extraction",
        || {
            let oracle = pipeline_oracle();
            let s = NiceSet::dyadics(64);
            let q = rat("1/3");
            let t = ntip_run(&oracle, &s, &q).map_err(|e| e.to_string())?;
            verify_trace(&t, &oracle).map_err(|e| format!("verify failed: {e}"))?;
            if t.r != 1 {
                return Err(format!("r = {}, want 1", t.r));
            }
            if t.eps != rat("1/6") {
                return Err(format!("eps = {}, want 1/6", t.eps));
            }
            if !t.cover.balls.iter().all(|b| b.radius_sq == rat("1/9")) {
                return Err("cover radius ≠ 1/3".into());
            }
            if t.w0 != Gaussian::from_int(-2) {
                return Err(format!("w0 = {}, want -2", t.w0));
            }
            if t.result.h.to_string() != "[(21/64)⁺, (1/3)⁻]" {
                return Err(format!("H = {}", t.result.h));
            }
            if !t.result.nontrivial {
                return Err("result trivial".into());
            }
            if !oracle.contains(&t.result.indicator) {
                return Err("χ_H escapes the oracle algebra".into());
            }
            Ok(format!("χ on {}, r=1, ε=1/6, w0=-2", t.result.h))
        },
        1_000,
    )
}

/// Criterion 2: the cover lemma, fuzzed exactly.
pub fn criterion_2() -> CriterionReport {
    criterion_frame(
        2,
        "cover-lemma fuzz",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed());
            let cases = 1000;
            for case in 0..cases {
                let delta = random_descriptor(&mut rng);
                let eps = Rat::new(1, rng.random_range(2..=12i64));
                let sigma = random_matching_step(&mut rng, &delta);
                let tau = random_matching_step(&mut rng, &delta);
                let f = &sigma + &random_perturbation(&mut rng, &eps);
                let g = &tau + &random_perturbation(&mut rng, &eps);
                debug_assert!((&f - &sigma).sup_norm_sq().0 < eps.square());
                let h = &f - &g;
                let cover = delta.difference_cover(&eps);
                for v in &h.values {
                    if !cover.contains(v) {
                        return Err(format!("case {case}: value {v} escapes the cover"));
                    }
                }
            }
            Ok(format!("{cases} exact instances, zero violations"))
        },
        30_000,
    )
}

/// Criterion 3: the gap lemma, fuzzed over hypothesis-satisfying inputs.
pub fn criterion_3() -> CriterionReport {
    criterion_frame(
        3,
        "gap-lemma fuzz",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed() ^ 0x9e3779b9);
            let cases = 1000;
            for case in 0..cases {
                let r = rng.random_range(1..=5u32);
                let w0 = if rng.random_bool(0.5) {
                    Gaussian::from_int(2)
                } else {
                    Gaussian::from_int(-2)
                };
                let small = Rat::new(1, 3 * r as i64);
                let mut centers = vec![w0.clone()];
                for _ in 1..r {
                    centers.push(random_small_gaussian(&mut rng));
                }
                let mut values = vec![
                    random_in_ball(&mut rng, &Gaussian::zero(), &Rat::one()),
                    random_in_ball(&mut rng, &w0, &small),
                ];
                for _ in 0..rng.random_range(0..=10usize) {
                    let pick = rng.random_range(0..=centers.len());
                    if pick == centers.len() {
                        values.push(random_in_ball(&mut rng, &Gaussian::zero(), &Rat::one()));
                    } else {
                        values.push(random_in_ball(&mut rng, &centers[pick], &small));
                    }
                }
                let hyp = GapHypothesis { r, w0 };
                let input = GapInput::Values(values.clone());
                let b = re_gap(&input, Some(&hyp))
                    .map_err(|e| format!("case {case}: {e}"))?
                    .ok_or_else(|| format!("case {case}: no gap returned"))?;
                let below = values.iter().any(|z| z.re < b);
                let above = values.iter().any(|z| z.re > b);
                let on = values.iter().any(|z| z.re == b);
                if !(below && above && !on) {
                    return Err(format!("case {case}: b = {b} is not a valid separator"));
                }
            }
            Ok(format!(
                "{cases} hypothesis-satisfying instances, all separated"
            ))
        },
        30_000,
    )
}

fn random_algebra(rng: &mut StdRng) -> (Vec<StepFunction>, FinStepAlgebra) {
    let gen_count = rng.random_range(1..=2usize);
    let value_pool = [0i64, 0, 1, 1, 2, -1];
    let gens: Vec<StepFunction> = (0..gen_count)
        .map(|_| {
            let break_count = rng.random_range(1..=3usize);
            let mut breaks: std::collections::BTreeSet<Rat> = Default::default();
            while breaks.len() < break_count {
                let denom = rng.random_range(2..=12i64);
                let numer = rng.random_range(1..denom);
                breaks.insert(Rat::new(numer, denom));
            }
            let breaks: Vec<Rat> = breaks.into_iter().collect();
            let values: Vec<Gaussian> = (0..=breaks.len())
                .map(|_| Gaussian::from_int(value_pool[rng.random_range(0..value_pool.len())]))
                .collect();
            StepFunction::new(breaks, values).expect("valid generator")
        })
        .collect();
    let a = FinStepAlgebra::saturate(&gens);
    (gens, a)
}

fn canonical_set_key(s: &ClosedSet) -> String {
    serde_json::to_string(s).expect("sets serialize")
}

/// Criterion 4: restriction identities and the extension witness.
pub fn criterion_4() -> CriterionReport {
    criterion_frame(
        4,
        "restriction identities",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed() ^ 0x5ca1ab1e);
            let full = SpacePresentation::full();
            let cases = 200;
            for case in 0..cases {
                let (gens, a) = random_algebra(&mut rng);
                // Saturation agrees with brute-force product closure.
                let brute = brute_force_closure(&gens);
                if a.dimension() != brute.dimension() {
                    return Err(format!(
                        "case {case}: saturate dim {} ≠ brute-force dim {}",
                        a.dimension(),
                        brute.dimension()
                    ));
                }
                let probe = random_matching_probe(&mut rng, &a);
                if a.contains(&probe) != brute.contains(&probe) {
                    return Err(format!("case {case}: membership predicates disagree"));
                }

                // Random nonempty class union P.
                let k = a.dimension();
                let mask = rng.random_range(1..(1u32 << k.min(10)));
                let chosen: Vec<usize> = (0..k).filter(|c| mask & (1 << c) != 0).collect();
                let p = a.class_union(&chosen);
                let restricted = a.restrict(&p).map_err(|e| format!("case {case}: {e}"))?;

                // Identity: B_{A↾P} = {H ∩ P : H ∈ B_A}, exactly.
                let lhs: std::collections::BTreeSet<String> = restricted
                    .boolean_algebra()
                    .iter()
                    .map(canonical_set_key)
                    .collect();
                let rhs: std::collections::BTreeSet<String> = a
                    .boolean_algebra()
                    .iter()
                    .map(|h2| {
                        h2.intersect(&full, &p)
                            .expect("intersection of class unions")
                    })
                    .map(|s| canonical_set_key(&s))
                    .collect();
                if lhs != rhs {
                    return Err(format!("case {case}: B_(A↾P) ≠ {{H ∩ P}}"));
                }
                if chosen.len() == 1 && lhs.len() != 2 {
                    return Err(format!(
                        "case {case}: single class should give B = {{∅, P}}"
                    ));
                }

                // Kernel form of the identity (K = ker(P) = P for class
                // unions; the computation still goes through the kernel).
                let kernel = p.kernel(&full);
                let r2 = a
                    .restrict(&kernel)
                    .map_err(|e| format!("case {case}: {e}"))?;
                let lhs2: std::collections::BTreeSet<String> =
                    r2.boolean_algebra().iter().map(canonical_set_key).collect();
                let rhs2: std::collections::BTreeSet<String> = a
                    .boolean_algebra()
                    .iter()
                    .map(|h2| h2.intersect(&full, &kernel).expect("intersection"))
                    .map(|s| canonical_set_key(&s))
                    .collect();
                if lhs2 != rhs2 {
                    return Err(format!("case {case}: kernel-restriction identity fails"));
                }

                // Extension witness f* = f·χ_P with ‖f*‖² ≤ 4‖f‖_P².
                let chi_p = {
                    let mut values = vec![Gaussian::zero(); a.dimension()];
                    for &c in &chosen {
                        values[c] = Gaussian::one();
                    }
                    a.from_class_values(&values)
                };
                for c in 0..a.dimension() {
                    let f = a.class_indicator(c);
                    let f_star = &f * &chi_p;
                    if f.restrict(&p) != f_star.restrict(&p) {
                        return Err(format!("case {case}: f* disagrees with f on P"));
                    }
                    let norm_p = f
                        .sup_norm_sq_on(&p)
                        .map_err(|e| format!("case {case}: {e}"))?
                        .0;
                    if f_star.sup_norm_sq().0 > Rat::from_int(4) * norm_p {
                        return Err(format!("case {case}: extension constant exceeded"));
                    }
                }
            }
            Ok(format!("{cases} random algebras, identities exact"))
        },
        60_000,
    )
}

fn random_matching_probe(rng: &mut StdRng, a: &FinStepAlgebra) -> StepFunction {
    // Half the probes are genuine members, half are tweaked.
    let values: Vec<Gaussian> = (0..a.dimension())
        .map(|_| random_small_gaussian(rng))
        .collect();
    let member = a.from_class_values(&values);
    if rng.random_bool(0.5) {
        member
    } else {
        let tweak =
            StepFunction::indicator(None, Some(random_rat_in_unit(rng))).expect("indicator");
        &member + &tweak
    }
}

fn random_presentation(rng: &mut StdRng, space: &SpacePresentation) -> ClosedSet {
    loop {
        let count = rng.random_range(0..=4usize);
        let mut comps = Vec::new();
        for _ in 0..count {
            match rng.random_range(0..3u8) {
                0 => {
                    let x = random_rat_in_unit(rng);
                    let side = if space.is_doubled(&x) && rng.random_bool(0.5) {
                        crate::orderspace::Side::Minus
                    } else {
                        crate::orderspace::Side::Plus
                    };
                    comps.push(Component::Point(Point::new(x, side)));
                }
                1 => {
                    let a = random_rat_in_unit(rng);
                    let b = random_rat_in_unit(rng);
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    comps.push(Component::Interval(Point::plus(a), Point::minus(b)));
                }
                _ => {
                    if space.is_chain() {
                        continue;
                    }
                    let l = random_rat_in_unit(rng);
                    let r = random_rat_in_unit(rng);
                    let (l, r) = if l < r { (l, r) } else { (r, l) };
                    if l < r {
                        comps.push(Component::Solid(l, r));
                    }
                }
            }
        }
        if let Ok(s) = ClosedSet::from_components(space, comps) {
            return s;
        }
    }
}

/// Criterion 5: kernel calculus on random presentations.
pub fn criterion_5() -> CriterionReport {
    criterion_frame(
        5,
        "kernel calculus",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed() ^ 0xfeed_face);
            let full = SpacePresentation::full();
            let cases = 500;
            for case in 0..cases {
                let space = match rng.random_range(0..3u8) {
                    0 => SpacePresentation::full(),
                    1 => SpacePresentation::minus([random_rat_in_unit(&mut rng)])
                        .expect("valid minus presentation"),
                    _ => SpacePresentation::chain(rng.random_range(1..=9u32)).expect("valid chain"),
                };
                let s = random_presentation(&mut rng, &space);
                let k = s.kernel(&space);
                // Fixed point and idempotence.
                if k.cb_derivative(&space) != k {
                    return Err(format!("case {case}: kernel is not perfect-or-empty"));
                }
                if k.kernel(&space) != k {
                    return Err(format!("case {case}: kernel not idempotent"));
                }
                // Kernel ⊆ S.
                if k.intersect(&space, &s)
                    .map_err(|e| format!("case {case}: {e}"))?
                    != k
                {
                    return Err(format!("case {case}: kernel escapes the set"));
                }
                // Scattered iff iterated derivatives reach ∅.
                let mut cur = s.clone();
                let mut reached_empty = false;
                for _ in 0..8 {
                    cur = cur.cb_derivative(&space);
                    if cur.is_empty() {
                        reached_empty = true;
                        break;
                    }
                }
                if reached_empty != k.is_empty() {
                    return Err(format!("case {case}: scattered ⇔ empty kernel fails"));
                }
                // Cantor detection at presentation level.
                if s.contains_cantor(&space) != s.has_solid() {
                    return Err(format!("case {case}: Cantor detection mismatch"));
                }
            }
            // The presentable instances of the Cantor criterion.
            if full.whole_space().contains_cantor(&full) {
                return Err("full double arrow must not carry a Cantor set".into());
            }
            let solid =
                ClosedSet::from_components(&full, vec![Component::Solid(rat("1/4"), rat("1/2"))])
                    .map_err(|e| e.to_string())?;
            if !solid.contains_cantor(&full) {
                return Err("solid segments must carry Cantor sets".into());
            }
            Ok(format!("{cases} random presentations, calculus exact"))
        },
        10_000,
    )
}

fn random_piecewise(rng: &mut StdRng) -> PiecewiseFn {
    let cut_count = rng.random_range(0..=4usize);
    let mut cuts: std::collections::BTreeSet<Rat> = Default::default();
    for _ in 0..cut_count {
        cuts.insert(random_rat_in_unit(rng));
    }
    let cuts: Vec<Rat> = cuts.into_iter().collect();
    let arcs: Vec<Gaussian> = (0..=cuts.len())
        .map(|_| random_small_gaussian(rng))
        .collect();
    PiecewiseFn::normalize(cuts, arcs).expect("valid piecewise function")
}

/// Criterion 6: the isometric isomorphism with the circle model.
pub fn criterion_6() -> CriterionReport {
    criterion_frame(
        6,
        "Ψ isometry",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed() ^ 0x0dd_ba11);
            let cases = 500;
            for case in 0..cases {
                let g = random_piecewise(&mut rng);
                let f = psi_inv(&g);
                if psi(&f) != g {
                    return Err(format!("case {case}: psi ∘ psiInv ≠ id"));
                }
                if psi_inv(&psi(&f)) != f {
                    return Err(format!("case {case}: psiInv ∘ psi ≠ id"));
                }
                // Isometry at the essential-sup level.
                if g.sup_norm_sq() != f.sup_norm_sq().0 {
                    return Err(format!("case {case}: norms disagree"));
                }
                // Point values never exceed the arc max.
                let max = g.sup_norm_sq();
                for pv in g.forced_point_values() {
                    if pv.norm_sq() > max {
                        return Err(format!("case {case}: point value exceeds the arc max"));
                    }
                }
                // Ring isomorphism on random pairs.
                let g2 = random_piecewise(&mut rng);
                let f2 = psi_inv(&g2);
                if psi(&(&f * &f2)) != g.mul(&g2) {
                    return Err(format!("case {case}: Ψ(f·f') ≠ Ψ(f)·Ψ(f')"));
                }
                if psi(&(&f + &f2)) != g.add(&g2) {
                    return Err(format!("case {case}: Ψ(f+f') ≠ Ψ(f)+Ψ(f')"));
                }
            }
            // Unitality.
            if psi(&StepFunction::constant(Gaussian::one()))
                != PiecewiseFn::constant(Gaussian::one())
            {
                return Err("Ψ(1) ≠ 1".into());
            }
            Ok(format!("{cases} random functions, isometry exact"))
        },
        10_000,
    )
}

/// Criterion 7: the certified polynomial witness.
pub fn criterion_7() -> CriterionReport {
    criterion_frame(
        7,
        "Runge witness",
        || {
            let k0 = DiscUnion::new(vec![Disc {
                c: Gaussian::zero(),
                r: rat("1/2"),
            }]);
            let k1 = DiscUnion::new(vec![Disc {
                c: Gaussian::from_int(3),
                r: rat("1/2"),
            }]);
            let tol = rat("1/100000000");
            let w = indicator_poly(&k0, &k1, &tol, 200).map_err(|e| e.to_string())?;
            if w.certified_err_sq > tol {
                return Err(format!("certified error {} above 1e-8", w.certified_err_sq));
            }
            if w.degree > 200 {
                return Err(format!("degree {} above 200", w.degree));
            }
            // Regression guard: dense boundary samples never exceed the
            // certified bound.
            for (discs, target) in [(&k0, Gaussian::one()), (&k1, Gaussian::zero())] {
                for d in &discs.discs {
                    for z in rational_circle_points(&d.c, &d.r, 100) {
                        let err = (&w.eval(&z) - &target).norm_sq();
                        if err > w.certified_err_sq {
                            return Err(format!(
                                "sample error {err} exceeds certificate {}",
                                w.certified_err_sq
                            ));
                        }
                    }
                }
            }
            // Degenerate point pair: the exact line.
            let p0 = DiscUnion::new(vec![Disc::point(Gaussian::zero())]);
            let p1 = DiscUnion::new(vec![Disc::point(Gaussian::from_int(3))]);
            let line = indicator_poly(&p0, &p1, &tol, 200).map_err(|e| e.to_string())?;
            if !line.certified_err_sq.is_zero() || line.degree != 1 {
                return Err("degenerate pair did not give the exact line".into());
            }
            Ok(format!(
                "degree {}, certified err² = {}",
                w.degree, w.certified_err_sq
            ))
        },
        5_000,
    )
}

/// Exact rational points on a circle via the tangent half-angle
/// parametrization, both half-circles.
pub fn rational_circle_points(center: &Gaussian, radius: &Rat, count: usize) -> Vec<Gaussian> {
    let mut out = Vec::with_capacity(2 * count);
    for k in 0..count {
        let t = Rat::new(2 * k as i64 - count as i64, count as i64); // in [-1, 1)
        let t2 = t.square();
        let denom = Rat::one() + t2.clone();
        let cos = (Rat::one() - t2) / denom.clone();
        let sin = (&t + &t) / denom;
        for flip in [false, true] {
            let (c, s) = if flip {
                (-&cos, sin.clone())
            } else {
                (cos.clone(), sin.clone())
            };
            out.push(Gaussian::new(
                &center.re + &(radius * &c),
                &center.im + &(radius * &s),
            ));
        }
    }
    out
}

/// Criterion 8: annihilating-measure mechanics.
pub fn criterion_8() -> CriterionReport {
    criterion_frame(
        8,
        "annihilating measures",
        || {
            let mut rng = StdRng::seed_from_u64(fuzz_seed() ^ 0xdead_10cc);
            let cases = 100;
            for case in 0..cases {
                let (_, a) = random_algebra(&mut rng);
                // Build a g outside A: split a multi-interval class when
                // one exists, else add an interior break.
                let g = match a.classes.iter().position(|c| c.len() >= 2) {
                    Some(ci) => {
                        let interval = a.classes[ci][0];
                        let lo = if interval == 0 {
                            None
                        } else {
                            Some(a.partition[interval - 1].clone())
                        };
                        let hi = if interval == a.partition.len() {
                            None
                        } else {
                            Some(a.partition[interval].clone())
                        };
                        StepFunction::indicator(lo, hi).expect("interval indicator")
                    }
                    None => {
                        // Full algebra: a break strictly inside interval 0.
                        let hi = if a.partition.is_empty() {
                            Rat::new(1, 2)
                        } else {
                            &a.partition[0] * &Rat::new(1, 2)
                        };
                        StepFunction::indicator(None, Some(hi)).expect("indicator")
                    }
                };
                if a.contains(&g) {
                    return Err(format!("case {case}: probe unexpectedly in A"));
                }
                let mu = a
                    .annihilator_measure(&g)
                    .ok_or_else(|| format!("case {case}: no measure returned"))?;
                for c in 0..a.dimension() {
                    if !mu.integrate(&a.class_indicator(c)).is_zero() {
                        return Err(format!("case {case}: ∫ basis dμ ≠ 0"));
                    }
                }
                if mu.integrate(&g).is_zero() {
                    return Err(format!("case {case}: ∫ g dμ = 0"));
                }
                let support = mu.support().map_err(|e| format!("case {case}: {e}"))?;
                if a.restricted_contains(&g, &support)
                    .map_err(|e| format!("case {case}: {e}"))?
                {
                    return Err(format!("case {case}: A↾supt(μ) still contains g↾supt(μ)"));
                }
                // Members restrict inside, as a sanity cross-check.
                let member = a.class_indicator(0);
                if !a
                    .restricted_contains(&member, &support)
                    .map_err(|e| format!("case {case}: {e}"))?
                {
                    return Err(format!("case {case}: member escaped its own algebra"));
                }
            }
            Ok(format!("{cases} random (A, g ∉ A) pairs, mechanics exact"))
        },
        30_000,
    )
}

/// All acceptance criteria in order.
pub fn run_acceptance() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}
