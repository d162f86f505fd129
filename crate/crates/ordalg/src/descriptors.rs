//! Step-function descriptors and the disconnectedness machinery.
//!
//! A descriptor `Δ` is a value sequence `z_0, …, z_n` together with
//! bracketing pair coordinates `b_0 < … < b_n`; a step function matches
//! `Δ` when its values are exactly the `z_i` and its `i`-th jump falls
//! strictly inside `(b_{i-1}, b_i)`. Two matching step functions differ,
//! after an `ε`-perturbation of each, only by values inside the ball cover
//! `B(0; 2ε) ∪ ⋃ B(±(z_i − z_{i+1}); 2ε)`, and when one of those centers is
//! `±2` the real parts of the difference must have a gap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::rational::Rat;
use crate::stepcalc::{NiceSet, StepFunction};

/// A step-function descriptor from a nice set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Descriptor {
    pub z: Vec<Gaussian>,
    pub pairs: Vec<Rat>,
}

impl<'de> Deserialize<'de> for Descriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            z: Vec<Gaussian>,
            pairs: Vec<Rat>,
        }
        let raw = Raw::deserialize(d)?;
        Descriptor::new(raw.z, raw.pairs).map_err(serde::de::Error::custom)
    }
}

impl Descriptor {
    pub fn new(z: Vec<Gaussian>, pairs: Vec<Rat>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidPresentation(
                "descriptor needs at least one value".into(),
            ));
        }
        if z.len() >= 2 && pairs.len() != z.len() {
            return Err(Error::InvalidPresentation(format!(
                "descriptor with {} values needs {} pairs, got {}",
                z.len(),
                z.len(),
                pairs.len()
            )));
        }
        if z.len() == 1 && !pairs.is_empty() {
            return Err(Error::InvalidPresentation(
                "constant descriptor carries no pairs".into(),
            ));
        }
        for w in z.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidPresentation(
                    "adjacent descriptor values must differ".into(),
                ));
            }
        }
        for p in &pairs {
            if !p.in_open_unit() {
                return Err(Error::InvalidPresentation(format!(
                    "descriptor pair {p} outside (0,1)"
                )));
            }
        }
        for w in pairs.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidPresentation(
                    "descriptor pairs must be strictly increasing".into(),
                ));
            }
        }
        Ok(Descriptor { z, pairs })
    }

    /// Number of jumps a matching step function must have.
    pub fn jump_count(&self) -> usize {
        self.z.len() - 1
    }

    /// The open window `(b_{i}, b_{i+1})` that the `i`-th jump (0-based)
    /// of a matching function must fall into.
    pub fn window(&self, i: usize) -> (&Rat, &Rat) {
        (&self.pairs[i], &self.pairs[i + 1])
    }

    /// Whether `tau` meets this description.
    pub fn matches(&self, tau: &StepFunction) -> bool {
        if tau.values != self.z {
            return false;
        }
        debug_assert_eq!(tau.breaks.len(), self.jump_count());
        tau.breaks.iter().enumerate().all(|(i, a)| {
            let (lo, hi) = self.window(i);
            lo < a && a < hi
        })
    }

    /// Ball cover for differences of `ε`-approximants of matching pairs:
    /// `B(0; 2ε)` plus `B(±(z_i − z_{i+1}); 2ε)`. Radii are stored squared.
    pub fn difference_cover(&self, eps: &Rat) -> BallCover {
        assert!(*eps > Rat::zero(), "cover needs eps > 0");
        let radius_sq = (eps + eps).square();
        let mut balls = vec![Ball {
            center: Gaussian::zero(),
            radius_sq: radius_sq.clone(),
        }];
        for w in self.z.windows(2) {
            let d = &w[0] - &w[1];
            balls.push(Ball {
                center: d.clone(),
                radius_sq: radius_sq.clone(),
            });
            balls.push(Ball {
                center: -&d,
                radius_sq: radius_sq.clone(),
            });
        }
        BallCover { balls }
    }
}

/// One open ball with rational center and squared radius.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Ball {
    pub center: Gaussian,
    #[serde(rename = "radiusSq")]
    pub radius_sq: Rat,
}

impl Ball {
    /// Strict membership, `|z − c|² < r²`.
    pub fn contains(&self, z: &Gaussian) -> bool {
        (z - &self.center).norm_sq() < self.radius_sq
    }
}

/// A finite union of open balls.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BallCover {
    pub balls: Vec<Ball>,
}

impl BallCover {
    pub fn contains(&self, z: &Gaussian) -> bool {
        self.balls.iter().any(|b| b.contains(z))
    }
}

/// Builds a descriptor for `sigma` with one pair of `S` chosen in each gap
/// around its jumps, so that `sigma` meets its own description.
///
/// Choice rule, fixed and deterministic: each jump `a` is bracketed by the
/// dyadic pair `(below, above)` at the smallest denominator `2^k` whose
/// spacing is at most a quarter of the smaller adjacent gap; `k` is then
/// raised (up to 16 extra doublings) until both bracket coordinates are
/// pairs of `S`. The descriptor takes the first jump's lower bracket as
/// `b_0` and each jump's upper bracket as its following pair. When the
/// bracket search fails, the rule falls back to the complexity-least
/// element of `S` in the open gap, and errors naming the gap when `S` has
/// none.
pub fn build_descriptor(sigma: &StepFunction, s: &NiceSet) -> Result<Descriptor> {
    let n = sigma.jump_count();
    if n == 0 {
        return Descriptor::new(sigma.values.clone(), vec![]);
    }
    let mut gap_edges: Vec<Rat> = Vec::with_capacity(n + 2);
    gap_edges.push(Rat::zero());
    gap_edges.extend(sigma.breaks.iter().cloned());
    gap_edges.push(Rat::one());

    let bracket = |jump_idx: usize| -> Option<(Rat, Rat)> {
        let a = &gap_edges[jump_idx + 1];
        let left_gap = a - &gap_edges[jump_idx];
        let right_gap = &gap_edges[jump_idx + 2] - a;
        let quarter = left_gap.min(right_gap) * Rat::new(1, 4);
        let mut k = 0u32;
        while Rat::new(1, 1) / Rat::from_int(1i64 << k.min(62)) > quarter && k < 62 {
            k += 1;
        }
        for kk in k..k + 17 {
            let lo = Rat::dyadic_below(a, kk);
            let hi = Rat::dyadic_above(a, kk);
            if lo > gap_edges[jump_idx]
                && hi < gap_edges[jump_idx + 2]
                && s.contains_pair(&lo)
                && s.contains_pair(&hi)
            {
                return Some((lo, hi));
            }
        }
        None
    };

    let fallback = |gap_idx: usize| -> Result<Rat> {
        let lo = &gap_edges[gap_idx];
        let hi = &gap_edges[gap_idx + 1];
        s.coords_in(lo, hi)
            .min_by_key(|c| c.complexity_key())
            .cloned()
            .ok_or_else(|| Error::STooSparse {
                lo: lo.to_string(),
                hi: hi.to_string(),
            })
    };

    // pairs[i] lives in gap i = (jump_i, jump_{i+1}); brackets of jump j
    // contribute its lower end to gap j-1... indices: gap 0 gets jump 0's
    // lower bracket, gap i ≥ 1 gets jump i-1's upper bracket.
    let brackets: Vec<Option<(Rat, Rat)>> = (0..n).map(bracket).collect();
    let mut pairs: Vec<Rat> = Vec::with_capacity(n + 1);
    match &brackets[0] {
        Some((lo, _)) => pairs.push(lo.clone()),
        None => pairs.push(fallback(0)?),
    }
    for (i, br) in brackets.iter().enumerate() {
        match br {
            Some((_, hi)) if *hi > pairs[i] => pairs.push(hi.clone()),
            _ => {
                let cand = fallback(i + 1)?;
                if cand <= pairs[i] {
                    return Err(Error::STooSparse {
                        lo: gap_edges[i + 1].to_string(),
                        hi: gap_edges[i + 2].to_string(),
                    });
                }
                pairs.push(cand);
            }
        }
    }

    let delta = Descriptor::new(sigma.values.clone(), pairs)?;
    debug_assert!(delta.matches(sigma));
    Ok(delta)
}

/// Input to the real-part gap finder.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", untagged)]
pub enum GapInput {
    Values(Vec<Gaussian>),
    Cover(BallCover),
}

/// Hypotheses of the disconnectedness lemma, checked when provided:
/// `F ⊆ B(0;1) ∪ ⋃_{k<r} B(w_k; 1/(3r))` with `w_0 = ±2` and both `B(0;1)`
/// and `B(w_0; 1/(3r))` meeting `F`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapHypothesis {
    pub r: u32,
    pub w0: Gaussian,
}

/// Finds a rational `b` with no element of `F` on the line `Re = b` and
/// elements of `F` strictly on both sides: the midpoint of the widest empty
/// real-part gap. Returns `None` when the projected set has no two-sided
/// gap. Under a valid hypothesis a gap is guaranteed.
pub fn re_gap(input: &GapInput, hyp: Option<&GapHypothesis>) -> Result<Option<Rat>> {
    if let Some(h) = hyp {
        validate_hypothesis(input, h)?;
    }
    let intervals = real_part_intervals(input);
    let b = widest_gap_midpoint(&intervals);
    if hyp.is_some() && b.is_none() {
        return Err(Error::HypothesisViolated {
            clause: "no real-part gap despite hypothesis".into(),
        });
    }
    Ok(b)
}

fn validate_hypothesis(input: &GapInput, h: &GapHypothesis) -> Result<()> {
    let fail = |clause: &str| -> Result<()> {
        Err(Error::HypothesisViolated {
            clause: clause.into(),
        })
    };
    if h.r < 1 {
        return fail("r ≥ 1");
    }
    let two = Gaussian::from_int(2);
    if h.w0 != two && h.w0 != -&two {
        return fail("w_0 = ±2");
    }
    let small_radius_sq = Rat::new(1, 3 * h.r as i64).square();
    match input {
        GapInput::Values(values) => {
            if values.is_empty() {
                return fail("F nonempty");
            }
            let unit = Ball {
                center: Gaussian::zero(),
                radius_sq: Rat::one(),
            };
            if !values.iter().any(|z| unit.contains(z)) {
                return fail("F ∩ B(0;1) ≠ ∅");
            }
            let near_w0 = Ball {
                center: h.w0.clone(),
                radius_sq: small_radius_sq,
            };
            if !values.iter().any(|z| near_w0.contains(z)) {
                return fail("F ∩ B(w_0; 1/(3r)) ≠ ∅");
            }
        }
        GapInput::Cover(cover) => {
            if cover.balls.is_empty() {
                return fail("F nonempty");
            }
        }
    }
    Ok(())
}

/// Closed real intervals conservatively containing `Re(F)`.
fn real_part_intervals(input: &GapInput) -> Vec<(Rat, Rat)> {
    match input {
        GapInput::Values(values) => values
            .iter()
            .map(|z| (z.re.clone(), z.re.clone()))
            .collect(),
        GapInput::Cover(cover) => cover
            .balls
            .iter()
            .map(|b| {
                let radius = b.radius_sq.sqrt_upper();
                (&b.center.re - &radius, &b.center.re + &radius)
            })
            .collect(),
    }
}

fn widest_gap_midpoint(intervals: &[(Rat, Rat)]) -> Option<Rat> {
    if intervals.is_empty() {
        return None;
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    // Merge overlapping/touching intervals.
    let mut merged: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in sorted {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let mut best: Option<(Rat, Rat)> = None; // (width, midpoint)
    for w in merged.windows(2) {
        let width = &w[1].0 - &w[0].1;
        debug_assert!(width > Rat::zero());
        let mid = w[0].1.midpoint(&w[1].0);
        match &best {
            Some((bw, _)) if *bw >= width => {}
            _ => best = Some((width, mid)),
        }
    }
    best.map(|(_, mid)| mid)
}
