//! The main engine: algebra oracles, the finite-stage nice-chain
//! construction, and the end-to-end idempotent-extraction pipeline.
//!
//! A pipeline run at a target pair `q⁻ ⋖ q⁺` avoiding the nice set `S`
//! obtains `f` in the oracle's algebra with `f(q⁺) = 1`, `f(q⁻) = −1`,
//! counts the `1/3`-jumps of `f` (`|R| = 2r + 2`), works at tolerance
//! `ε = 1/(6r)`, describes a `σ` near `f` by a descriptor over `S`, asks
//! the oracle for a matching `τ` with endpoints in `S` and a `g` nearby,
//! and extracts an idempotent from a real-part gap of `h = f − g`. Every
//! recorded trace re-verifies from scratch.

use serde::{Deserialize, Serialize};

use crate::descriptors::{build_descriptor, BallCover, Descriptor, GapHypothesis, GapInput};
use crate::error::{Error, Result};
use crate::finalg::FinStepAlgebra;
use crate::gaussian::Gaussian;
use crate::idempotents::{extract_idempotent, IdempotentCertificate};
use crate::orderspace::{Point, Side};
use crate::rational::Rat;
use crate::stepcalc::{NiceSet, StepFunction};

/// An abstract closed subalgebra answering approximation and membership
/// queries for step-function targets.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AlgebraOracle {
    /// A finitely generated closed step algebra, queried exactly.
    #[serde(rename = "finalg")]
    FinAlg(FinStepAlgebra),
    /// Step functions whose breaks lie in a fixed nice set of coordinates.
    #[serde(rename = "breakpoints")]
    Breakpoints {
        #[serde(flatten)]
        coords: NiceSet,
    },
    /// Functions pulled back through a monotone step map onto a coarser
    /// presentation; equivalent to the finite algebra of the map's fibers.
    #[serde(rename = "pullback")]
    Pullback { pi: MonotoneMap },
    /// A testing wrapper returning witnesses perturbed by a small rational
    /// amount (staying inside the inner algebra and inside tolerance), so
    /// the nonzero-ε inequalities get exercised.
    #[serde(rename = "perturbed")]
    Perturbed {
        inner: Box<AlgebraOracle>,
        noise: Rat,
    },
}

/// A monotone step map, positions in `(0,1)` and weakly increasing
/// rational values per fiber interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneMap {
    pub breaks: Vec<Rat>,
    pub values: Vec<Rat>,
}

impl MonotoneMap {
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.breaks.len() + 1 {
            return Err(Error::InvalidPresentation(
                "monotone map needs breaks.len()+1 values".into(),
            ));
        }
        for w in self.breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPresentation(
                    "monotone map breaks must increase".into(),
                ));
            }
        }
        for w in self.values.windows(2) {
            if w[0] > w[1] {
                return Err(Error::InvalidPresentation(
                    "monotone map values must be weakly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// The pullback algebra: functions constant on each fiber.
    pub fn fiber_algebra(&self) -> FinStepAlgebra {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<(Rat, usize)> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            match seen.iter().find(|(val, _)| val == v) {
                Some((_, c)) => classes[*c].push(i),
                None => {
                    seen.push((v.clone(), classes.len()));
                    classes.push(vec![i]);
                }
            }
        }
        let algebra = FinStepAlgebra {
            partition: self.breaks.clone(),
            classes,
        };
        // Drop breaks no class structure distinguishes (equal adjacent
        // values) by re-saturating through indicators.
        let gens: Vec<StepFunction> = (0..algebra.dimension())
            .map(|c| algebra.class_indicator(c))
            .collect();
        FinStepAlgebra::saturate(&gens)
    }
}

impl AlgebraOracle {
    pub fn breakpoints(coords: NiceSet) -> Self {
        AlgebraOracle::Breakpoints { coords }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgebraOracle::FinAlg(a) => a.validate(),
            AlgebraOracle::Breakpoints { .. } => Ok(()),
            AlgebraOracle::Pullback { pi } => pi.validate(),
            AlgebraOracle::Perturbed { inner, noise } => {
                if noise.is_negative() {
                    return Err(Error::InvalidPresentation(
                        "perturbation noise must be ≥ 0".into(),
                    ));
                }
                inner.validate()
            }
        }
    }

    /// Exact membership of a step function.
    pub fn contains(&self, f: &StepFunction) -> bool {
        match self {
            AlgebraOracle::FinAlg(a) => a.contains(f),
            AlgebraOracle::Breakpoints { coords } => {
                f.breaks.iter().all(|b| coords.contains_pair(b))
            }
            AlgebraOracle::Pullback { pi } => pi.fiber_algebra().contains(f),
            AlgebraOracle::Perturbed { inner, .. } => inner.contains(f),
        }
    }

    /// An element of the algebra with value `−1` at `q⁻` and `+1` at `q⁺`,
    /// when the algebra can jump at `q`.
    pub fn jump_witness(&self, q: &Rat) -> Result<StepFunction> {
        let cannot = || Error::OracleCannotJump { q: q.to_string() };
        match self {
            AlgebraOracle::Breakpoints { coords } => {
                if !coords.contains_pair(q) {
                    return Err(cannot());
                }
                StepFunction::new(
                    vec![q.clone()],
                    vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
                )
            }
            AlgebraOracle::FinAlg(a) => finalg_jump_witness(a, q).ok_or_else(cannot),
            AlgebraOracle::Pullback { pi } => {
                finalg_jump_witness(&pi.fiber_algebra(), q).ok_or_else(cannot)
            }
            AlgebraOracle::Perturbed { inner, .. } => inner.jump_witness(q),
        }
    }

    /// The descriptor query: a `τ ∈ STEP(Δ)` with endpoints in `s` and a
    /// `g` in the algebra with `‖g − τ‖ < eps`. Per window the choice is
    /// deterministic: the largest admissible coordinate strictly below
    /// the window midpoint, else the smallest at or above it.
    pub fn meet_descriptor(
        &self,
        delta: &Descriptor,
        s: &NiceSet,
        eps: &Rat,
    ) -> Result<(StepFunction, StepFunction)> {
        match self {
            AlgebraOracle::Breakpoints { coords } => {
                let mut breaks = Vec::with_capacity(delta.jump_count());
                for i in 0..delta.jump_count() {
                    let (lo, hi) = delta.window(i);
                    let cand = window_pick(
                        coords.coords_in(lo, hi).filter(|c| s.contains_pair(c)),
                        lo,
                        hi,
                    )
                    .ok_or(Error::NoMatchingTau)?;
                    breaks.push(cand);
                }
                let tau = StepFunction::new(breaks, delta.z.clone())?;
                Ok((tau.clone(), tau))
            }
            AlgebraOracle::FinAlg(a) => finalg_meet_descriptor(a, delta, s, eps),
            AlgebraOracle::Pullback { pi } => {
                finalg_meet_descriptor(&pi.fiber_algebra(), delta, s, eps)
            }
            AlgebraOracle::Perturbed { inner, noise } => {
                let (tau, g) = inner.meet_descriptor(delta, s, eps)?;
                let eps_sq = eps.square();
                let mut delta_amt = noise.clone().min(eps * &Rat::new(1, 2));
                loop {
                    let g2 = &g + &StepFunction::constant(Gaussian::real(delta_amt.clone()));
                    if (&g2 - &tau).sup_norm_sq().0 < eps_sq {
                        return Ok((tau, g2));
                    }
                    if delta_amt.is_zero() {
                        return Ok((tau, g));
                    }
                    delta_amt = delta_amt * Rat::new(1, 2);
                }
            }
        }
    }

    /// The chain-building query: some `σ ∈ STEP(Δ)` that the algebra can
    /// `ε`-approximate, preferring jump coordinates whose pairs already
    /// lie in `s_so_far` so the chain adds as few points as possible.
    /// `None` when no matching step function is approximable.
    pub fn lst_query(
        &self,
        delta: &Descriptor,
        eps: &Rat,
        s_so_far: &NiceSet,
    ) -> Option<StepFunction> {
        let eps4_sq = (eps + eps).square();
        match self {
            AlgebraOracle::Breakpoints { coords } => {
                let mut breaks = Vec::with_capacity(delta.jump_count());
                for i in 0..delta.jump_count() {
                    let (lo, hi) = delta.window(i);
                    // Prefer a jump coordinate already in the chain.
                    let known = window_pick(
                        coords
                            .coords_in(lo, hi)
                            .filter(|c| s_so_far.contains_pair(c)),
                        lo,
                        hi,
                    );
                    let cand = known.or_else(|| window_pick(coords.coords_in(lo, hi), lo, hi));
                    match cand {
                        Some(c) => breaks.push(c),
                        None => {
                            // No oracle breakpoint in the window: the jump
                            // must be small enough to bridge.
                            let jump = (&delta.z[i + 1] - &delta.z[i]).norm_sq();
                            if jump >= eps4_sq {
                                return None;
                            }
                            let c = window_pick(s_so_far.coords_in(lo, hi), lo, hi)
                                .unwrap_or_else(|| lo.midpoint(hi));
                            breaks.push(c);
                        }
                    }
                }
                StepFunction::new(breaks, delta.z.clone()).ok()
            }
            AlgebraOracle::FinAlg(a) => finalg_lst_query(a, delta, eps, s_so_far),
            AlgebraOracle::Pullback { pi } => {
                finalg_lst_query(&pi.fiber_algebra(), delta, eps, s_so_far)
            }
            AlgebraOracle::Perturbed { inner, .. } => inner.lst_query(delta, eps, s_so_far),
        }
    }

    /// The plain approximation query: a `g` in the algebra with
    /// `‖g − target‖² < eps_sq`, or the best-approximation distance
    /// squared.
    pub fn approx(
        &self,
        target: &StepFunction,
        eps_sq: &Rat,
    ) -> std::result::Result<StepFunction, Rat> {
        match self {
            AlgebraOracle::Breakpoints { coords } => {
                // Best distance: max over off-T jumps of |jump|²/4.
                let best_sq = target
                    .breaks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !coords.contains_pair(b))
                    .map(|(i, _)| {
                        (&target.values[i + 1] - &target.values[i]).norm_sq() * Rat::new(1, 4)
                    })
                    .fold(Rat::zero(), Rat::max);
                if best_sq >= *eps_sq {
                    return Err(best_sq);
                }
                let g = bridge_off_breaks(target, coords);
                let achieved = (&g - target).sup_norm_sq().0;
                if achieved < *eps_sq {
                    Ok(g)
                } else {
                    Err(best_sq)
                }
            }
            AlgebraOracle::FinAlg(a) => {
                let (g, dist_sq) = finalg_best_fit(a, target);
                if dist_sq < *eps_sq {
                    Ok(g)
                } else {
                    Err(dist_sq)
                }
            }
            AlgebraOracle::Pullback { pi } => {
                let a = pi.fiber_algebra();
                let (g, dist_sq) = finalg_best_fit(&a, target);
                if dist_sq < *eps_sq {
                    Ok(g)
                } else {
                    Err(dist_sq)
                }
            }
            AlgebraOracle::Perturbed { inner, .. } => inner.approx(target, eps_sq),
        }
    }
}

/// The deterministic window choice: the largest candidate strictly below
/// the midpoint of `(lo, hi)`, else the smallest at or above it.
fn window_pick<'a>(candidates: impl Iterator<Item = &'a Rat>, lo: &Rat, hi: &Rat) -> Option<Rat> {
    let mid = lo.midpoint(hi);
    let mut best_below: Option<&Rat> = None;
    let mut best_above: Option<&Rat> = None;
    for c in candidates {
        if *c < mid {
            if best_below.is_none_or(|b| c > b) {
                best_below = Some(c);
            }
        } else if best_above.is_none_or(|b| c < b) {
            best_above = Some(c);
        }
    }
    best_below.or(best_above).cloned()
}

fn finalg_jump_witness(a: &FinStepAlgebra, q: &Rat) -> Option<StepFunction> {
    let j = a.partition.iter().position(|b| b == q)?;
    let class_of = |i: usize| a.classes.iter().position(|c| c.contains(&i)).unwrap();
    let (cl, cr) = (class_of(j), class_of(j + 1));
    if cl == cr {
        return None;
    }
    // −1 on the class left of q, +1 everywhere else.
    let values: Vec<Gaussian> = (0..a.dimension())
        .map(|c| {
            if c == cl {
                Gaussian::from_int(-1)
            } else {
                Gaussian::from_int(1)
            }
        })
        .collect();
    Some(a.from_class_values(&values))
}

/// Best sup-norm fit of a step target from a finite class algebra: per
/// class, the smallest enclosing circle of the target's values over the
/// class; the fit takes the centers, the distance is the largest radius.
fn finalg_best_fit(a: &FinStepAlgebra, target: &StepFunction) -> (StepFunction, Rat) {
    let mut centers = Vec::with_capacity(a.dimension());
    let mut worst = Rat::zero();
    for class in &a.classes {
        let mut pts: Vec<Gaussian> = Vec::new();
        for &i in class {
            let lo = if i == 0 {
                Rat::zero()
            } else {
                a.partition[i - 1].clone()
            };
            let hi = if i == a.partition.len() {
                Rat::one()
            } else {
                a.partition[i].clone()
            };
            // All target values on the refinement inside interval i.
            pts.push(target.eval(&Point::plus(lo.clone())));
            for b in &target.breaks {
                if *b > lo && *b < hi {
                    pts.push(target.eval(&Point::plus(b.clone())));
                }
            }
        }
        let (center, radius_sq) = min_enclosing_circle(&pts);
        centers.push(center);
        worst = worst.max(radius_sq);
    }
    (a.from_class_values(&centers), worst)
}

/// Smallest circle enclosing finitely many Gaussian points, exact. The
/// optimum is determined by one, two, or three of the points, so the
/// candidates are enumerable with rational centers.
pub fn min_enclosing_circle(pts: &[Gaussian]) -> (Gaussian, Rat) {
    assert!(!pts.is_empty());
    let mut uniq: Vec<Gaussian> = Vec::new();
    for p in pts {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    if uniq.len() == 1 {
        return (uniq[0].clone(), Rat::zero());
    }
    let radius_needed = |c: &Gaussian| -> Rat {
        uniq.iter()
            .map(|p| (p - c).norm_sq())
            .fold(Rat::zero(), Rat::max)
    };
    let mut best: Option<(Gaussian, Rat)> = None;
    let mut consider = |c: Gaussian| {
        let r = radius_needed(&c);
        match &best {
            Some((_, br)) if *br <= r => {}
            _ => best = Some((c, r)),
        }
    };
    for i in 0..uniq.len() {
        for j in i + 1..uniq.len() {
            let mid = Gaussian::new(
                uniq[i].re.midpoint(&uniq[j].re),
                uniq[i].im.midpoint(&uniq[j].im),
            );
            consider(mid);
            for k in j + 1..uniq.len() {
                if let Some(cc) = circumcenter(&uniq[i], &uniq[j], &uniq[k]) {
                    consider(cc);
                }
            }
        }
    }
    best.expect("candidates exist")
}

fn circumcenter(a: &Gaussian, b: &Gaussian, c: &Gaussian) -> Option<Gaussian> {
    // Solve |z-a|² = |z-b|² = |z-c|² as a 2×2 rational linear system.
    let (ax, ay) = (&a.re, &a.im);
    let (bx, by) = (&b.re, &b.im);
    let (cx, cy) = (&c.re, &c.im);
    let d = ((ax - cx) * (by - cy) - (bx - cx) * (ay - cy)) * Rat::from_int(2);
    if d.is_zero() {
        return None; // collinear
    }
    let a2 = ax.square() + ay.square();
    let b2 = bx.square() + by.square();
    let c2 = cx.square() + cy.square();
    let ux = &(&(&a2 - &c2) * &(by - cy)) - &(&(&b2 - &c2) * &(ay - cy));
    let uy = &(&(&b2 - &c2) * &(ax - cx)) - &(&(&a2 - &c2) * &(bx - cx));
    Some(Gaussian::new(ux / d.clone(), uy / d))
}

/// Replaces off-oracle jumps by hugging the nearest oracle breakpoints and
/// bridging with the midpoint value. The result always has breaks in the
/// oracle set; when hug points collide the jump is skipped instead.
fn bridge_off_breaks(target: &StepFunction, coords: &NiceSet) -> StepFunction {
    let mut breaks: Vec<Rat> = Vec::new();
    let mut values: Vec<Gaussian> = vec![target.values[0].clone()];
    for (i, b) in target.breaks.iter().enumerate() {
        let prev = breaks.last().cloned().unwrap_or_else(Rat::zero);
        let next = if i + 1 < target.breaks.len() {
            target.breaks[i + 1].clone()
        } else {
            Rat::one()
        };
        if coords.contains_pair(b) {
            breaks.push(b.clone());
            values.push(target.values[i + 1].clone());
            continue;
        }
        let lo = coords.coords_in(&prev, b).next_back().cloned();
        let hi = coords.coords_in(b, &next).next().cloned();
        let mid =
            &target.values[i].scale(&Rat::new(1, 2)) + &target.values[i + 1].scale(&Rat::new(1, 2));
        match (lo, hi) {
            (Some(lo), Some(hi)) => {
                breaks.push(lo);
                values.push(mid);
                breaks.push(hi);
                values.push(target.values[i + 1].clone());
            }
            _ => {
                // Nothing to hug with: skip the jump, taking the midpoint
                // value across the merged stretch.
                *values.last_mut().unwrap() = mid;
            }
        }
    }
    StepFunction::new(breaks, values).unwrap_or_else(|_| {
        // Collisions left the break list unusable: the constant center
        // fit keeps the witness inside the algebra.
        let (center, _) = min_enclosing_circle(&target.values);
        StepFunction::constant(center)
    })
}

fn finalg_candidates(
    a: &FinStepAlgebra,
    delta: &Descriptor,
    i: usize,
    source: &NiceSet,
    eps: &Rat,
) -> Option<Rat> {
    let (lo, hi) = delta.window(i);
    // Big jumps must land on a partition break; small jumps may bridge.
    let on_partition = window_pick(
        a.partition
            .iter()
            .filter(|c| *c > lo && *c < hi && source.contains_pair(c)),
        lo,
        hi,
    );
    if on_partition.is_some() {
        return on_partition;
    }
    let jump = (&delta.z[i + 1] - &delta.z[i]).norm_sq();
    if jump < (eps + eps).square() {
        window_pick(source.coords_in(lo, hi), lo, hi)
    } else {
        None
    }
}

fn finalg_meet_descriptor(
    a: &FinStepAlgebra,
    delta: &Descriptor,
    s: &NiceSet,
    eps: &Rat,
) -> Result<(StepFunction, StepFunction)> {
    let mut breaks = Vec::with_capacity(delta.jump_count());
    for i in 0..delta.jump_count() {
        breaks.push(finalg_candidates(a, delta, i, s, eps).ok_or(Error::NoMatchingTau)?);
    }
    let tau = StepFunction::new(breaks, delta.z.clone())?;
    let (g, dist_sq) = finalg_best_fit(a, &tau);
    if dist_sq < eps.square() {
        Ok((tau, g))
    } else {
        Err(Error::NoMatchingTau)
    }
}

fn finalg_lst_query(
    a: &FinStepAlgebra,
    delta: &Descriptor,
    eps: &Rat,
    s_so_far: &NiceSet,
) -> Option<StepFunction> {
    let mut breaks = Vec::with_capacity(delta.jump_count());
    for i in 0..delta.jump_count() {
        let (lo, hi) = delta.window(i);
        // σ is free: prefer partition coords (where the algebra jumps),
        // then chain coords for bridgeable jumps.
        let cand = window_pick(a.partition.iter().filter(|c| *c > lo && *c < hi), lo, hi).or_else(
            || {
                let jump = (&delta.z[i + 1] - &delta.z[i]).norm_sq();
                if jump < (eps + eps).square() {
                    Some(
                        window_pick(s_so_far.coords_in(lo, hi), lo, hi)
                            .unwrap_or_else(|| lo.midpoint(hi)),
                    )
                } else {
                    None
                }
            },
        )?;
        breaks.push(cand);
    }
    let sigma = StepFunction::new(breaks, delta.z.clone()).ok()?;
    let (_, dist_sq) = finalg_best_fit(a, &sigma);
    if dist_sq < eps.square() {
        Some(sigma)
    } else {
        None
    }
}

/// Bounds for the finite-stage chain construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainBounds {
    /// Seed: dyadic pairs with denominator dividing this power of two.
    pub max_denominator: u32,
    /// Largest descriptor jump count enumerated.
    pub max_jumps: usize,
    /// Height bound (numerator and denominator) for descriptor values.
    pub max_value_height: u32,
    /// Number of closure stages.
    pub stages: usize,
}

/// Gaussian rationals of bounded height, in deterministic enumeration
/// order.
fn bounded_values(height: u32) -> Vec<Gaussian> {
    let mut rats: Vec<Rat> = Vec::new();
    for q in 1..=height as i64 {
        for p in -(height as i64)..=height as i64 {
            let r = Rat::new(p, q);
            if !rats.contains(&r) {
                rats.push(r);
            }
        }
    }
    rats.sort_by_key(|r| r.complexity_key());
    let mut out = Vec::new();
    for re in &rats {
        for im in &rats {
            out.push(Gaussian::new(re.clone(), im.clone()));
        }
    }
    out.sort_by_key(|g| g.enum_key());
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Rightmost index with room to advance.
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn value_tuples(values: &[Gaussian], len: usize) -> Vec<Vec<Gaussian>> {
    let mut out: Vec<Vec<Gaussian>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for tuple in &out {
            for v in values {
                if tuple.last() == Some(v) {
                    continue; // adjacent values must differ
                }
                let mut t = tuple.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The finite-stage chain construction: starting from the dyadic pairs,
/// each stage enumerates the rational descriptors and tolerances within
/// bounds in a fixed order (jump count, then pair tuples, then value
/// tuples, then ε = 1/k for 2 ≤ k ≤ maxDenominator), queries the oracle,
/// and absorbs the witnesses' endpoints.
pub fn build_nice_chain(oracle: &AlgebraOracle, bounds: &ChainBounds) -> NiceSet {
    let mut s = NiceSet::dyadics(bounds.max_denominator.max(2));
    let values = bounded_values(bounds.max_value_height.max(1));
    for _stage in 0..bounds.stages {
        let coords: Vec<Rat> = s.coords.iter().cloned().collect();
        let mut added: Vec<Rat> = Vec::new();
        for n in 1..=bounds.max_jumps {
            for pair_idx in combinations(coords.len(), n + 1) {
                let pairs: Vec<Rat> = pair_idx.iter().map(|&i| coords[i].clone()).collect();
                for z in value_tuples(&values, n + 1) {
                    let delta = match Descriptor::new(z, pairs.clone()) {
                        Ok(d) => d,
                        Err(_) => continue,
                    };
                    for k in 2..=bounds.max_denominator.max(2) {
                        let eps = Rat::new(1, k as i64);
                        if let Some(sigma) = oracle.lst_query(&delta, &eps, &s) {
                            added.extend(sigma.breaks.iter().cloned());
                        }
                    }
                }
            }
        }
        for a in added {
            s.insert(a);
        }
    }
    s
}

/// A full, replayable record of one pipeline run.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NtipTrace {
    pub q: Rat,
    pub f: StepFunction,
    pub sigma: StepFunction,
    pub tau: StepFunction,
    pub g: StepFunction,
    pub h: StepFunction,
    pub delta: Descriptor,
    pub r: u32,
    pub eps: Rat,
    pub cover: BallCover,
    pub w0: Gaussian,
    pub b: Rat,
    pub nice_set: NiceSet,
    pub result: IdempotentCertificate,
}

/// Runs the pipeline with the oracle's own jump witness at `q`.
pub fn ntip_run(oracle: &AlgebraOracle, s: &NiceSet, q: &Rat) -> Result<NtipTrace> {
    if s.contains_pair(q) {
        return Err(Error::TargetInNiceSet);
    }
    let f = oracle.jump_witness(q)?;
    ntip_run_with_witness(oracle, s, q, f)
}

/// Runs the pipeline with an explicit `f` (any algebra element with
/// `f(q⁺) = 1` and `f(q⁻) = −1`); exercises runs with `r > 1`.
pub fn ntip_run_with_witness(
    oracle: &AlgebraOracle,
    s: &NiceSet,
    q: &Rat,
    f: StepFunction,
) -> Result<NtipTrace> {
    if s.contains_pair(q) {
        return Err(Error::TargetInNiceSet);
    }
    if !oracle.contains(&f) {
        return Err(Error::InvalidPresentation(
            "witness is not in the oracle algebra".into(),
        ));
    }
    if f.eval(&Point::new(q.clone(), Side::Minus)) != Gaussian::from_int(-1)
        || f.eval(&Point::new(q.clone(), Side::Plus)) != Gaussian::from_int(1)
    {
        return Err(Error::InvalidPresentation(
            "witness must satisfy f(q⁻) = −1, f(q⁺) = 1".into(),
        ));
    }

    let third = Rat::new(1, 3);
    let big_jumps = f.jmp(&third);
    let r = big_jumps.pair_count() as u32;
    debug_assert!(big_jumps.contains_pair(q), "the q-jump has magnitude 2");
    debug_assert!(r >= 1);
    let eps = Rat::new(1, 6 * r as i64);

    // Step oracles afford σ = f exactly.
    let sigma = f.clone();
    let delta = build_descriptor(&sigma, s)?;
    let (tau, g) = oracle.meet_descriptor(&delta, s, &eps)?;
    let h = &f - &g;
    let cover = delta.difference_cover(&eps);

    // The q-jump's cover center: the side τ jumps on decides the sign.
    let j = sigma
        .breaks
        .iter()
        .position(|b| b == q)
        .expect("q is a jump of σ");
    let w0 = if tau.breaks[j] < *q {
        &sigma.values[j] - &sigma.values[j + 1]
    } else {
        &sigma.values[j + 1] - &sigma.values[j]
    };

    let hyp = GapHypothesis { r, w0: w0.clone() };
    let b = re_gap_for_run(&h, &hyp)?;
    let result = extract_idempotent(&h, &b)?;

    Ok(NtipTrace {
        q: q.clone(),
        f,
        sigma,
        tau,
        g,
        h,
        delta,
        r,
        eps,
        cover,
        w0,
        b,
        nice_set: s.clone(),
        result,
    })
}

fn re_gap_for_run(h: &StepFunction, hyp: &GapHypothesis) -> Result<Rat> {
    let input = GapInput::Values(h.values.clone());
    match crate::descriptors::re_gap(&input, Some(hyp)) {
        Ok(Some(b)) => Ok(b),
        Ok(None) | Err(_) => Err(Error::GapNotFound),
    }
}

/// Replays every invariant of a trace; `Err` names the failing clause.
pub fn verify_trace(t: &NtipTrace, oracle: &AlgebraOracle) -> std::result::Result<(), String> {
    let fail = |clause: &str| Err(clause.to_string());

    if t.nice_set.contains_pair(&t.q) {
        return fail("q in S");
    }
    if !oracle.contains(&t.f) {
        return fail("f not in oracle algebra");
    }
    if t.f.eval(&Point::new(t.q.clone(), Side::Minus)) != Gaussian::from_int(-1)
        || t.f.eval(&Point::new(t.q.clone(), Side::Plus)) != Gaussian::from_int(1)
    {
        return fail("f(q±) wrong");
    }
    let third = Rat::new(1, 3);
    let jumps = t.f.jmp(&third);
    if jumps.pair_count() as u32 != t.r || t.r < 1 {
        return fail("r mismatch with JMP_1/3(f)");
    }
    if t.eps != Rat::new(1, 6 * t.r as i64) {
        return fail("eps ≠ 1/(6r)");
    }
    if (&t.f - &t.sigma).sup_norm_sq().0 >= t.eps.square() {
        return fail("‖f − σ‖ ≥ ε");
    }
    if !t.delta.matches(&t.sigma) {
        return fail("σ escapes Δ");
    }
    if !t.delta.matches(&t.tau) {
        return fail("τ escapes Δ");
    }
    if !t.tau.breaks.iter().all(|b| t.nice_set.contains_pair(b)) {
        return fail("endpoints not in S");
    }
    if !oracle.contains(&t.g) {
        return fail("g not in oracle algebra");
    }
    if (&t.g - &t.tau).sup_norm_sq().0 >= t.eps.square() {
        return fail("‖g − τ‖ ≥ ε");
    }
    if t.h != &t.f - &t.g {
        return fail("h ≠ f − g");
    }
    if t.cover != t.delta.difference_cover(&t.eps) {
        return fail("cover mismatch");
    }
    // All but at most r of the jump differences are small (≤ 2/3).
    let big = t
        .delta
        .z
        .windows(2)
        .filter(|w| (&w[0] - &w[1]).norm_sq() > Rat::new(4, 9))
        .count();
    if big > t.r as usize {
        return fail("more than r large cover centers");
    }
    if t.h.eval(&Point::first()).norm_sq() >= Rat::one() {
        return fail("h(0) escapes B(0;1)");
    }
    let two = Gaussian::from_int(2);
    if t.w0 != two && t.w0 != -&two {
        return fail("w0 ≠ ±2");
    }
    let near_w0_sq = Rat::new(1, 3 * t.r as i64).square();
    if !t
        .h
        .values
        .iter()
        .any(|z| (z - &t.w0).norm_sq() < near_w0_sq)
    {
        return fail("F misses B(w0; 1/(3r))");
    }
    // b reproduces and separates.
    let hyp = GapHypothesis {
        r: t.r,
        w0: t.w0.clone(),
    };
    match crate::descriptors::re_gap(&GapInput::Values(t.h.values.clone()), Some(&hyp)) {
        Ok(Some(b)) if b == t.b => {}
        _ => return fail("b hits/escapes gap"),
    }
    if t.h.values.iter().any(|z| z.re == t.b) {
        return fail("b hits the range");
    }
    let below = t.h.values.iter().any(|z| z.re < t.b);
    let above = t.h.values.iter().any(|z| z.re > t.b);
    if !(below && above) {
        return fail("b does not straddle the range");
    }
    match extract_idempotent(&t.h, &t.b) {
        Ok(cert)
            if cert.h == t.result.h
                && cert.indicator == t.result.indicator
                && cert.nontrivial == t.result.nontrivial => {}
        _ => return fail("result mismatch"),
    }
    if !t.result.nontrivial {
        return fail("result trivial");
    }
    let chi = &t.result.indicator;
    if (chi * chi) != *chi {
        return fail("indicator not idempotent");
    }
    if !oracle.contains(chi) {
        return fail("indicator not in oracle algebra");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pipeline_oracle() -> AlgebraOracle {
        let mut coords = NiceSet::dyadics(64);
        coords.insert(rat("1/3"));
        AlgebraOracle::breakpoints(coords)
    }

    #[test]
    fn reference_pipeline_run() {
        let oracle = pipeline_oracle();
        let s = NiceSet::dyadics(64);
        let t = ntip_run(&oracle, &s, &rat("1/3")).unwrap();

        assert_eq!(t.r, 1);
        assert_eq!(t.eps, rat("1/6"));
        assert_eq!(t.delta.pairs, vec![rat("5/16"), rat("3/8")]);
        assert_eq!(t.tau.breaks, vec![rat("21/64")]);
        assert_eq!(t.h.breaks, vec![rat("21/64"), rat("1/3")]);
        assert_eq!(t.w0, Gaussian::from_int(-2));
        assert_eq!(t.b, rat("-1"));
        assert_eq!(t.result.h.to_string(), "[(21/64)⁺, (1/3)⁻]");
        assert!(t.result.nontrivial);
        assert!(t.cover.balls.iter().all(|b| b.radius_sq == rat("1/9")));
        verify_trace(&t, &oracle).unwrap();
        // The extracted indicator lives in the oracle algebra.
        assert!(oracle.contains(&t.result.indicator));
    }

    #[test]
    fn q_in_s_is_rejected() {
        let oracle = pipeline_oracle();
        let s = NiceSet::dyadics(64);
        assert_eq!(
            ntip_run(&oracle, &s, &rat("1/2")),
            Err(Error::TargetInNiceSet)
        );
    }

    #[test]
    fn oracle_without_the_jump_errors() {
        let oracle = AlgebraOracle::breakpoints(NiceSet::dyadics(64));
        let s = NiceSet::dyadics(64).without(&rat("1/4"));
        // 1/5 is not an oracle breakpoint.
        assert!(matches!(
            ntip_run(&oracle, &s, &rat("1/5")),
            Err(Error::OracleCannotJump { .. })
        ));
    }

    #[test]
    fn finalg_track_reports_honestly() {
        // A finite algebra on partition {1/3}: its only jump is at 1/3,
        // whose pair the dyadic S omits, so no τ with endpoints in S can
        // be approximated within ε and the pipeline reports that.
        let a = FinStepAlgebra {
            partition: vec![rat("1/3")],
            classes: vec![vec![0], vec![1]],
        };
        let oracle = AlgebraOracle::FinAlg(a);
        let s = NiceSet::dyadics(64);
        assert_eq!(
            ntip_run(&oracle, &s, &rat("1/3")),
            Err(Error::NoMatchingTau)
        );
    }

    #[test]
    fn pullback_runs_when_its_breaks_avoid_s() {
        // π with fibers split at 1/3 only; S = dyadics misses 1/3, and
        // the run correctly reports no matching τ (the honest outcome for
        // finite-dimensional oracles).
        let pi = MonotoneMap {
            breaks: vec![rat("1/3")],
            values: vec![rat("0"), rat("1")],
        };
        let oracle = AlgebraOracle::Pullback { pi };
        let s = NiceSet::dyadics(64);
        assert_eq!(
            ntip_run(&oracle, &s, &rat("1/3")),
            Err(Error::NoMatchingTau)
        );
    }

    #[test]
    fn multi_jump_witness_runs_with_r_2() {
        let oracle = pipeline_oracle();
        let s = NiceSet::dyadics(64);
        // f jumps by 2 at 1/3 (the target) and by 2 again at 1/2.
        let f = StepFunction::new(
            vec![rat("1/3"), rat("1/2")],
            vec![
                Gaussian::from_int(-1),
                Gaussian::from_int(1),
                Gaussian::from_int(3),
            ],
        )
        .unwrap();
        let t = ntip_run_with_witness(&oracle, &s, &rat("1/3"), f).unwrap();
        assert_eq!(t.r, 2);
        assert_eq!(t.eps, rat("1/12"));
        assert!(t.result.nontrivial);
        verify_trace(&t, &oracle).unwrap();
    }

    #[test]
    fn perturbed_oracle_exercises_nonzero_eps() {
        let oracle = AlgebraOracle::Perturbed {
            inner: Box::new(pipeline_oracle()),
            noise: rat("1/100"),
        };
        let s = NiceSet::dyadics(64);
        let t = ntip_run(&oracle, &s, &rat("1/3")).unwrap();
        assert_ne!(t.g, t.tau, "perturbation makes g ≠ τ");
        assert!((&t.g - &t.tau).sup_norm_sq().0 < t.eps.square());
        assert!(t.result.nontrivial);
        verify_trace(&t, &oracle).unwrap();
    }

    #[test]
    fn tampered_traces_fail_verification() {
        let oracle = pipeline_oracle();
        let s = NiceSet::dyadics(64);
        let t = ntip_run(&oracle, &s, &rat("1/3")).unwrap();

        let mut bad_b = t.clone();
        bad_b.b = rat("-3");
        assert_eq!(
            verify_trace(&bad_b, &oracle),
            Err("b hits/escapes gap".to_string())
        );

        let mut bad_tau = t.clone();
        bad_tau.tau = StepFunction::new(
            vec![rat("1/3")],
            vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
        )
        .unwrap();
        assert_eq!(
            verify_trace(&bad_tau, &oracle),
            Err("endpoints not in S".to_string())
        );
    }

    #[test]
    fn chain_stays_inside_the_dyadics() {
        let mut coords = NiceSet::dyadics(64);
        coords.insert(rat("1/3"));
        let oracle = AlgebraOracle::breakpoints(coords);
        let bounds = ChainBounds {
            max_denominator: 8,
            max_jumps: 1,
            max_value_height: 1,
            stages: 1,
        };
        let s = build_nice_chain(&oracle, &bounds);
        assert!(NiceSet::dyadics(8).is_subset(&s));
        assert!(!s.contains_pair(&rat("1/3")));
        // Every added coordinate is dyadic.
        for c in &s.coords {
            let denom = c.denom();
            let mut d = denom.clone();
            while (&d % 2) == 0u8.into() {
                d /= 2;
            }
            assert_eq!(d, 1u8.into(), "non-dyadic coordinate {c} in chain");
        }
    }

    #[test]
    fn chain_replays_the_witness_guarantee() {
        // For every descriptor over the seed with an approximable match,
        // the finished chain holds endpoints for a matching τ that the
        // oracle approximates at the same tolerance.
        let mut coords = NiceSet::dyadics(64);
        coords.insert(rat("1/3"));
        let oracle = AlgebraOracle::breakpoints(coords);
        let bounds = ChainBounds {
            max_denominator: 4,
            max_jumps: 1,
            max_value_height: 1,
            stages: 1,
        };
        let s = build_nice_chain(&oracle, &bounds);
        let seed: Vec<Rat> = NiceSet::dyadics(4).coords.into_iter().collect();
        let values = bounded_values(1);
        let mut checked = 0;
        for pair_idx in combinations(seed.len(), 2) {
            let pairs: Vec<Rat> = pair_idx.iter().map(|&i| seed[i].clone()).collect();
            for z in value_tuples(&values, 2) {
                let delta = Descriptor::new(z, pairs.clone()).unwrap();
                for k in 2..=4 {
                    let eps = Rat::new(1, k);
                    if oracle.lst_query(&delta, &eps, &s).is_some() {
                        let (tau, g) = oracle
                            .meet_descriptor(&delta, &s, &eps)
                            .expect("chain is rich enough for its own witnesses");
                        assert!(delta.matches(&tau));
                        assert!(tau.breaks.iter().all(|b| s.contains_pair(b)));
                        assert!((&g - &tau).sup_norm_sq().0 < eps.square());
                        assert!(oracle.contains(&g));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0, "the enumeration found witnesses");
    }

    #[test]
    fn constants_oracle_adds_nothing() {
        let oracle = AlgebraOracle::FinAlg(FinStepAlgebra::constants());
        let bounds = ChainBounds {
            max_denominator: 4,
            max_jumps: 1,
            max_value_height: 1,
            stages: 2,
        };
        let s = build_nice_chain(&oracle, &bounds);
        assert_eq!(s, NiceSet::dyadics(4));
    }

    #[test]
    fn zero_stages_returns_the_seed() {
        let oracle = pipeline_oracle();
        let bounds = ChainBounds {
            max_denominator: 16,
            max_jumps: 1,
            max_value_height: 1,
            stages: 0,
        };
        assert_eq!(build_nice_chain(&oracle, &bounds), NiceSet::dyadics(16));
    }

    #[test]
    fn approx_contract_for_breakpoints() {
        let oracle = AlgebraOracle::breakpoints(NiceSet::dyadics(64));
        // Target jumps at 1/3 (off-oracle) by 2: best distance² = 1.
        let target = StepFunction::new(
            vec![rat("1/3")],
            vec![Gaussian::from_int(-1), Gaussian::from_int(1)],
        )
        .unwrap();
        assert_eq!(oracle.approx(&target, &rat("1/4")), Err(rat("1")));
        // Generous tolerance: a bridged witness with breaks in T.
        let g = oracle.approx(&target, &rat("2")).unwrap();
        assert!(oracle.contains(&g));
        assert!((&g - &target).sup_norm_sq().0 < rat("2"));
        // On-oracle targets are returned exactly.
        let easy = StepFunction::new(
            vec![rat("1/2")],
            vec![Gaussian::from_int(0), Gaussian::from_int(1)],
        )
        .unwrap();
        assert_eq!(oracle.approx(&easy, &rat("1/100")), Ok(easy));
    }

    #[test]
    fn approx_witness_stays_in_sparse_oracles() {
        // T has no coordinates near the target's jumps; whatever the
        // construction does, the witness must stay in the algebra.
        let oracle = AlgebraOracle::breakpoints(NiceSet::new([rat("1/2")]).unwrap());
        let target = StepFunction::new(
            vec![rat("1/5"), rat("1/4")],
            vec![
                Gaussian::from_int(0),
                Gaussian::from_int(1),
                Gaussian::from_int(0),
            ],
        )
        .unwrap();
        match oracle.approx(&target, &rat("10")) {
            Ok(g) => assert!(oracle.contains(&g)),
            Err(best_sq) => assert_eq!(best_sq, rat("1/4")),
        }
    }

    #[test]
    fn min_enclosing_circle_cases() {
        let pts = vec![Gaussian::from_int(0), Gaussian::from_int(2)];
        let (c, r_sq) = min_enclosing_circle(&pts);
        assert_eq!(c, Gaussian::from_int(1));
        assert_eq!(r_sq, rat("1"));

        let tri = vec![
            Gaussian::new(rat("0"), rat("0")),
            Gaussian::new(rat("2"), rat("0")),
            Gaussian::new(rat("1"), rat("1")),
        ];
        let (c, r_sq) = min_enclosing_circle(&tri);
        assert_eq!(c, Gaussian::new(rat("1"), rat("0")));
        assert_eq!(r_sq, rat("1"));
    }
}
