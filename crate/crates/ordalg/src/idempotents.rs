//! Idempotent extraction.
//!
//! Exact track: for a step function `h` and a rational `b` missing the
//! real parts of its range, the sublevel set `{x : Re h(x) < b}` is clopen
//! and its indicator is an exact idempotent.
//!
//! Numeric track: a polynomial witness certified to be near 1 on one
//! disc union and near 0 on another, documenting why such indicators live
//! in closed algebras. The witness is seeded with the Lagrange interpolant
//! through the disc centers and sharpened by the cubic iteration
//! `q ↦ q²(3 − 2q)`; certification is by exact coefficient bounds on each
//! disc (the maximum principle reduces the sup over a disc to its
//! boundary, and the shifted-coefficient triangle bound dominates the
//! boundary maximum) propagated through the exact scalar error recursion
//! `e ↦ e²(3 + 2e)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::orderspace::ClosedSet;
use crate::rational::Rat;
use crate::stepcalc::StepFunction;

/// Certificate for an extracted idempotent.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdempotentCertificate {
    /// The clopen sublevel set `H = {x : Re source(x) < b}`.
    pub h: ClosedSet,
    /// Its indicator, `χ_H`.
    pub indicator: StepFunction,
    pub b: Rat,
    pub source_norm_sq: Rat,
    pub nontrivial: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub poly_witness: Option<PolyWitness>,
}

/// Extracts `χ_H` for `H = {x : Re h(x) < b}`. Errors when `b` hits the
/// real part of a value of `h`.
pub fn extract_idempotent(h: &StepFunction, b: &Rat) -> Result<IdempotentCertificate> {
    let sublevel = h.sublevel_re(b)?;
    let indicator = h.indicator_of_sublevel(b)?;
    let below = h.values.iter().any(|z| z.re < *b);
    let above = h.values.iter().any(|z| z.re > *b);
    Ok(IdempotentCertificate {
        h: sublevel,
        indicator,
        b: b.clone(),
        source_norm_sq: h.sup_norm_sq().0,
        nontrivial: below && above,
        poly_witness: None,
    })
}

/// Extraction plus an attached polynomial witness: a certified `p` with
/// `p ≈ 1` on discs of the given radius around the values below the
/// level and `p ≈ 0` around the rest, so `p ∘ h` tracks the indicator.
/// With radius 0 the witness interpolates the values exactly.
pub fn extract_idempotent_certified(
    h: &StepFunction,
    b: &Rat,
    disc_radius: &Rat,
    tol_sq: &Rat,
    max_degree: usize,
) -> Result<IdempotentCertificate> {
    let mut cert = extract_idempotent(h, b)?;
    let mut k0 = DiscUnion::default();
    let mut k1 = DiscUnion::default();
    let mut seen: Vec<&Gaussian> = Vec::new();
    for z in &h.values {
        if seen.contains(&z) {
            continue;
        }
        seen.push(z);
        let disc = Disc {
            c: z.clone(),
            r: disc_radius.clone(),
        };
        if z.re < *b {
            k0.discs.push(disc);
        } else {
            k1.discs.push(disc);
        }
    }
    cert.poly_witness = Some(indicator_poly(&k0, &k1, tol_sq, max_degree)?);
    Ok(cert)
}

/// A closed disc with Gaussian-rational center and rational radius.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Disc {
    pub c: Gaussian,
    pub r: Rat,
}

impl Disc {
    pub fn point(c: Gaussian) -> Self {
        Disc { c, r: Rat::zero() }
    }
}

/// A finite union of closed discs.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct DiscUnion {
    pub discs: Vec<Disc>,
}

impl DiscUnion {
    pub fn new(discs: Vec<Disc>) -> Self {
        DiscUnion { discs }
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    fn re_range(&self) -> Option<(Rat, Rat)> {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for d in &self.discs {
            let l = &d.c.re - &d.r;
            let h = &d.c.re + &d.r;
            lo = Some(match lo {
                Some(cur) => cur.min(l),
                None => l,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(h),
                None => h,
            });
        }
        lo.zip(hi)
    }
}

/// A certified polynomial, coefficients ascending in degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PolyWitness {
    pub coefficients: Vec<Gaussian>,
    pub degree: usize,
    pub certified_err_sq: Rat,
}

impl PolyWitness {
    /// Exact evaluation. Denominators are cleared once and the Horner
    /// pass runs over Gaussian integers (rational Horner would reduce a
    /// growing gcd at every step).
    pub fn eval(&self, z: &Gaussian) -> Gaussian {
        use num_bigint::BigInt;
        use num_integer::Integer;

        let n = self.coefficients.len();
        if n == 0 {
            return Gaussian::zero();
        }
        let mut d = BigInt::from(1);
        for c in &self.coefficients {
            d = d.lcm(c.re.denom());
            d = d.lcm(c.im.denom());
        }
        let ints: Vec<(BigInt, BigInt)> = self
            .coefficients
            .iter()
            .map(|c| {
                (
                    c.re.numer() * (&d / c.re.denom()),
                    c.im.numer() * (&d / c.im.denom()),
                )
            })
            .collect();
        let qz = z.re.denom().lcm(z.im.denom());
        let az = z.re.numer() * (&qz / z.re.denom());
        let bz = z.im.numer() * (&qz / z.im.denom());

        // acc accumulates Σ ints[k]·(az + bz·i)^k·qz^{n-1-k}.
        let mut acc_re = ints[n - 1].0.clone();
        let mut acc_im = ints[n - 1].1.clone();
        let mut qpow = BigInt::from(1);
        for k in (0..n - 1).rev() {
            let new_re = &acc_re * &az - &acc_im * &bz;
            let new_im = &acc_re * &bz + &acc_im * &az;
            qpow *= &qz;
            acc_re = new_re + &ints[k].0 * &qpow;
            acc_im = new_im + &ints[k].1 * &qpow;
        }
        let denom = d * qpow;
        Gaussian::new(
            Rat::from_big(acc_re, denom.clone()),
            Rat::from_big(acc_im, denom),
        )
    }

    /// The step function `p ∘ h`, computed value-wise.
    pub fn compose_step(&self, h: &StepFunction) -> StepFunction {
        let values = h.values.iter().map(|z| self.eval(z)).collect();
        StepFunction::new(h.breaks.clone(), values).expect("composition is valid")
    }
}

// Dense polynomial helpers over Gaussian rationals.

fn poly_mul(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let mut out = vec![Gaussian::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn poly_scale(a: &[Gaussian], c: &Gaussian) -> Vec<Gaussian> {
    a.iter().map(|x| x * c).collect()
}

fn poly_add(a: &[Gaussian], b: &[Gaussian]) -> Vec<Gaussian> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Gaussian::zero);
            let y = b.get(i).cloned().unwrap_or_else(Gaussian::zero);
            &x + &y
        })
        .collect()
}

fn poly_trim(mut a: Vec<Gaussian>) -> Vec<Gaussian> {
    while a.len() > 1 && a.last().map(|z| z.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

/// One cubic sharpening step, `q ↦ q²(3 − 2q) = 3q² − 2q³`.
fn cubic_step(q: &[Gaussian]) -> Vec<Gaussian> {
    let q2 = poly_mul(q, q);
    let q3 = poly_mul(&q2, q);
    let three_q2 = poly_scale(&q2, &Gaussian::from_int(3));
    let neg_two_q3 = poly_scale(&q3, &Gaussian::from_int(-2));
    poly_trim(poly_add(&three_q2, &neg_two_q3))
}

/// Shifted-coefficient triangle bound: an exact rational upper bound for
/// `sup_{|w| ≤ r} |p(c + w) − target|`, via the expansion of `p` around `c`
/// and rational upper bounds on coefficient magnitudes.
fn disc_error_bound(p: &[Gaussian], disc: &Disc, target: &Gaussian) -> Rat {
    // Shift: coefficients of p(c + w) in w, by repeated Horner at c.
    let mut work: Vec<Gaussian> = p.to_vec();
    let n = work.len();
    let mut shifted: Vec<Gaussian> = Vec::with_capacity(n);
    for _ in 0..n {
        // Divide work by (w) after evaluating the constant term at c:
        // classic synthetic division producing Taylor coefficients.
        let mut rem = Gaussian::zero();
        for k in (0..work.len()).rev() {
            let new = &(&rem * &disc.c) + &work[k];
            rem = new.clone();
            work[k] = new;
        }
        shifted.push(work.remove(0));
    }
    shifted[0] = &shifted[0] - target;
    let mut bound = Rat::zero();
    let mut r_pow = Rat::one();
    for coeff in &shifted {
        bound = bound + coeff.norm_sq().sqrt_upper() * r_pow.clone();
        r_pow = r_pow * disc.r.clone();
    }
    bound
}

/// Builds a polynomial `p` with certified `sup |p − 1|² ≤ tolSq` on `k0`
/// and `sup |p|² ≤ tolSq` on `k1`.
///
/// Requires the disc unions to be pairwise disjoint and separated by a
/// vertical line in the plane (so the Lagrange seed through the centers
/// lands inside the contraction basin of the cubic iteration for the
/// geometries this crate certifies).
pub fn indicator_poly(
    k0: &DiscUnion,
    k1: &DiscUnion,
    tol_sq: &Rat,
    max_degree: usize,
) -> Result<PolyWitness> {
    assert!(*tol_sq > Rat::zero(), "tolerance must be positive");
    if k0.is_empty() {
        // Nothing required to be 1; the zero polynomial is exact on k1.
        let p = if k1.is_empty() {
            vec![Gaussian::one()]
        } else {
            vec![Gaussian::zero()]
        };
        return Ok(PolyWitness {
            coefficients: p,
            degree: 0,
            certified_err_sq: Rat::zero(),
        });
    }
    if k1.is_empty() {
        return Ok(PolyWitness {
            coefficients: vec![Gaussian::one()],
            degree: 0,
            certified_err_sq: Rat::zero(),
        });
    }
    check_disjoint(k0, k1)?;
    check_re_separated(k0, k1)?;

    // Lagrange interpolant: 1 at the k0 centers, 0 at the k1 centers.
    let nodes: Vec<(Gaussian, Gaussian)> = k0
        .discs
        .iter()
        .map(|d| (d.c.clone(), Gaussian::one()))
        .chain(k1.discs.iter().map(|d| (d.c.clone(), Gaussian::zero())))
        .collect();
    let mut p: Vec<Gaussian> = vec![Gaussian::zero()];
    for (i, (xi, yi)) in nodes.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = vec![yi.clone()];
        for (j, (xj, _)) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = xi - xj;
            let inv = gaussian_recip(&diff);
            // term *= (z - xj) / (xi - xj)
            term = poly_mul(&term, &[&(-xj) * &inv, inv.clone()]);
        }
        p = poly_add(&p, &term);
    }
    p = poly_trim(p);

    let bounds = |p: &[Gaussian]| -> Rat {
        let mut worst = Rat::zero();
        for d in &k0.discs {
            worst = worst.max(disc_error_bound(p, d, &Gaussian::one()));
        }
        for d in &k1.discs {
            worst = worst.max(disc_error_bound(p, d, &Gaussian::zero()));
        }
        worst
    };

    let mut err = bounds(&p);
    // Contraction requires e·(3 + 2e) < 1.
    let basin = |e: &Rat| (e * &(Rat::from_int(3) + e + e)) < Rat::one();
    if err.square() > *tol_sq && !basin(&err) {
        return Err(Error::DegreeExhausted(format!(
            "seed error bound {err} is outside the sharpening basin"
        )));
    }
    while err.square() > *tol_sq {
        let next_degree = (p.len() - 1) * 3;
        if next_degree > max_degree {
            return Err(Error::DegreeExhausted(format!(
                "certified error {} at degree {}, next step needs degree {}",
                err.square(),
                p.len() - 1,
                next_degree
            )));
        }
        p = cubic_step(&p);
        // Exact scalar recursion dominates the pointwise error.
        err = err.square() * (Rat::from_int(3) + &err + &err);
    }

    Ok(PolyWitness {
        degree: p.len() - 1,
        coefficients: p,
        certified_err_sq: err.square(),
    })
}

fn gaussian_recip(z: &Gaussian) -> Gaussian {
    let n = z.norm_sq();
    assert!(!n.is_zero(), "reciprocal of zero");
    Gaussian::new(&z.re / &n, -&z.im / n)
}

fn check_disjoint(k0: &DiscUnion, k1: &DiscUnion) -> Result<()> {
    let all: Vec<&Disc> = k0.discs.iter().chain(k1.discs.iter()).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let dist_sq = (&all[i].c - &all[j].c).norm_sq();
            let radii = &all[i].r + &all[j].r;
            if dist_sq <= radii.square() {
                return Err(Error::DiscsOverlap(format!(
                    "discs at {} and {}",
                    all[i].c, all[j].c
                )));
            }
        }
    }
    Ok(())
}

fn check_re_separated(k0: &DiscUnion, k1: &DiscUnion) -> Result<()> {
    let (lo0, hi0) = k0.re_range().ok_or(Error::NotReSeparated)?;
    let (lo1, hi1) = k1.re_range().ok_or(Error::NotReSeparated)?;
    if hi0 < lo1 || hi1 < lo0 {
        Ok(())
    } else {
        Err(Error::NotReSeparated)
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
    fn extraction_on_the_pipeline_difference() {
        let h = step(&["21/64", "1/3"], &[0, -2, 0]);
        let cert = extract_idempotent(&h, &rat("-1")).unwrap();
        assert!(cert.nontrivial);
        assert_eq!(cert.h.to_string(), "[(21/64)⁺, (1/3)⁻]");
        // χ² = χ, exactly.
        assert_eq!(&cert.indicator * &cert.indicator, cert.indicator);
        assert_eq!(cert.source_norm_sq, rat("4"));
    }

    #[test]
    fn extraction_trivial_and_error_cases() {
        let five = StepFunction::constant(Gaussian::from_int(5));
        let cert = extract_idempotent(&five, &rat("0")).unwrap();
        assert!(!cert.nontrivial);
        assert!(cert.h.is_empty());

        let h = step(&["21/64", "1/3"], &[0, -2, 0]);
        assert_eq!(
            extract_idempotent(&h, &rat("-2")),
            Err(Error::BHitsRange { b: "-2".into() })
        );
    }

    #[test]
    fn monotone_in_b() {
        let h = step(&["1/4", "1/2", "3/4"], &[0, 3, 1, 2]);
        let c1 = extract_idempotent(&h, &rat("1/2")).unwrap();
        let c2 = extract_idempotent(&h, &rat("5/2")).unwrap();
        // H(b) ⊆ H(b').
        for comp in &c1.h.components {
            let inside = match comp {
                crate::orderspace::Component::Interval(a, _) => c2.h.contains_point(a),
                crate::orderspace::Component::Point(p) => c2.h.contains_point(p),
                _ => false,
            };
            assert!(inside);
        }
    }

    #[test]
    fn degenerate_point_pair_is_linear() {
        let k0 = DiscUnion::new(vec![Disc::point(Gaussian::zero())]);
        let k1 = DiscUnion::new(vec![Disc::point(Gaussian::from_int(3))]);
        let w = indicator_poly(&k0, &k1, &rat("1/1000000"), 10).unwrap();
        assert_eq!(w.certified_err_sq, Rat::zero());
        assert_eq!(w.degree, 1);
        // p(z) = 1 - z/3.
        assert_eq!(
            w.coefficients,
            vec![Gaussian::one(), Gaussian::real(rat("-1/3"))]
        );
    }

    #[test]
    fn empty_side_is_constant() {
        let k0 = DiscUnion::new(vec![Disc::point(Gaussian::zero())]);
        let w = indicator_poly(&k0, &DiscUnion::default(), &rat("1/100"), 10).unwrap();
        assert_eq!(w.coefficients, vec![Gaussian::one()]);
    }

    #[test]
    fn separated_discs_certify() {
        let k0 = DiscUnion::new(vec![Disc {
            c: Gaussian::zero(),
            r: rat("1/2"),
        }]);
        let k1 = DiscUnion::new(vec![Disc {
            c: Gaussian::from_int(3),
            r: rat("1/2"),
        }]);
        let w = indicator_poly(&k0, &k1, &rat("1/10000"), 200).unwrap();
        assert!(w.certified_err_sq <= rat("1/10000"));
        assert!(w.degree <= 40);
        // Spot-check at the centers.
        assert!((&w.eval(&Gaussian::zero()) - &Gaussian::one()).norm_sq() <= w.certified_err_sq);
        assert!(w.eval(&Gaussian::from_int(3)).norm_sq() <= w.certified_err_sq);
    }

    #[test]
    fn bad_geometry_is_rejected() {
        let k0 = DiscUnion::new(vec![Disc {
            c: Gaussian::zero(),
            r: rat("2"),
        }]);
        let k1 = DiscUnion::new(vec![Disc {
            c: Gaussian::from_int(3),
            r: rat("2"),
        }]);
        assert!(matches!(
            indicator_poly(&k0, &k1, &rat("1/100"), 50),
            Err(Error::DiscsOverlap(_))
        ));

        let k0 = DiscUnion::new(vec![Disc {
            c: Gaussian::new(rat("0"), rat("0")),
            r: rat("1/2"),
        }]);
        let k1 = DiscUnion::new(vec![Disc {
            c: Gaussian::new(rat("0"), rat("3")),
            r: rat("1/2"),
        }]);
        assert_eq!(
            indicator_poly(&k0, &k1, &rat("1/100"), 50),
            Err(Error::NotReSeparated)
        );
    }

    #[test]
    fn certified_extraction_attaches_a_witness() {
        let h = step(&["21/64", "1/3"], &[0, -2, 0]);
        // Zero-radius discs: the witness interpolates the two values
        // exactly, so the composition is the indicator on the nose.
        let cert = extract_idempotent_certified(&h, &rat("-1"), &Rat::zero(), &rat("1/10000"), 50)
            .unwrap();
        let w = cert.poly_witness.expect("witness attached");
        assert_eq!(w.certified_err_sq, Rat::zero());
        assert_eq!(w.compose_step(&h), cert.indicator);

        // Fat discs go through the sharpening loop instead.
        let cert = extract_idempotent_certified(&h, &rat("-1"), &rat("1/4"), &rat("1/10000"), 200)
            .unwrap();
        let w = cert.poly_witness.expect("witness attached");
        assert!(w.certified_err_sq <= rat("1/10000"));
        let dist = (&w.compose_step(&h) - &cert.indicator).sup_norm_sq().0;
        assert!(dist <= rat("1/10000"));
    }

    #[test]
    fn composition_tracks_the_indicator() {
        let h = step(&["21/64", "1/3"], &[0, -2, 0]);
        // Discs around the two value clusters split by b = -1; χ_H = 1
        // where Re < -1 means k0 = {-2}, k1 = {0}.
        let k0 = DiscUnion::new(vec![Disc {
            c: Gaussian::from_int(-2),
            r: rat("1/4"),
        }]);
        let k1 = DiscUnion::new(vec![Disc {
            c: Gaussian::zero(),
            r: rat("1/4"),
        }]);
        let tol = rat("1/10000");
        let w = indicator_poly(&k0, &k1, &tol, 200).unwrap();
        let composed = w.compose_step(&h);
        let chi = h.indicator_of_sublevel(&rat("-1")).unwrap();
        let (dist_sq, _) = (&composed - &chi).sup_norm_sq();
        assert!(dist_sq <= tol);
    }
}
