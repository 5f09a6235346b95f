//! Certified isolation of the complex roots of integer polynomials.
//!
//! Approximations come from Aberth–Ehrlich iteration in multiprecision
//! dyadic arithmetic. Each approximation `z_k` is then certified with the
//! Gerschgorin-type inclusion for polynomial roots: every root lies in the
//! union of the disks `|z - z_k| <= n |p(z_k)| / (|a_n| prod_{j != k} |z_k - z_j|)`,
//! and a connected component made of `c` disks holds exactly `c` roots. When
//! the disks are pairwise disjoint each holds exactly one root. A disk that
//! meets the real axis is re-centred on it; if the enlarged disk is still
//! isolated, complex-conjugate symmetry forces its root to be real.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use super::interval::{CertifiedValue, Interval};
use crate::exact::IntPolynomial;

#[derive(Clone, Debug)]
struct Approx {
    re: Dyadic,
    im: Dyadic,
}

impl Approx {
    fn zero() -> Self {
        Self {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    fn add(&self, o: &Self, p: u32) -> Self {
        Self {
            re: self.re.add(&o.re).round(p, Round::Down),
            im: self.im.add(&o.im).round(p, Round::Down),
        }
    }

    fn sub(&self, o: &Self, p: u32) -> Self {
        Self {
            re: self.re.sub(&o.re).round(p, Round::Down),
            im: self.im.sub(&o.im).round(p, Round::Down),
        }
    }

    fn mul(&self, o: &Self, p: u32) -> Self {
        Self {
            re: self
                .re
                .mul(&o.re)
                .sub(&self.im.mul(&o.im))
                .round(p, Round::Down),
            im: self
                .re
                .mul(&o.im)
                .add(&self.im.mul(&o.re))
                .round(p, Round::Down),
        }
    }

    fn norm_sqr(&self) -> Dyadic {
        self.re.square().add(&self.im.square())
    }

    fn div(&self, o: &Self, p: u32) -> Option<Self> {
        let n = o.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let num = Self {
            re: self.re.mul(&o.re).add(&self.im.mul(&o.im)),
            im: self.im.mul(&o.re).sub(&self.re.mul(&o.im)),
        };
        Some(Self {
            re: num.re.div(&n, p, Round::Down),
            im: num.im.div(&n, p, Round::Down),
        })
    }

    fn log2_mag(&self) -> i64 {
        self.re.log2_estimate().max(self.im.log2_estimate())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn point(&self, prec: u32) -> CertifiedValue {
        CertifiedValue::new(
            Interval::point(self.re.clone()),
            Interval::point(self.im.clone()),
            prec,
        )
    }
}

/// One isolated root: the disk `|z - center| <= radius` holds exactly one
/// root of the squarefree polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub center_re: Dyadic,
    pub center_im: Dyadic,
    pub radius: Dyadic,
    /// Certified real root (centre on the axis, isolation preserved).
    pub real: bool,
}

impl RootEnclosure {
    /// Axis-aligned box around the disk; real roots get a zero-width
    /// imaginary part.
    pub fn enclosure(&self, prec: u32) -> CertifiedValue {
        let re = Interval::ball(&self.center_re, &self.radius);
        let im = if self.real {
            Interval::zero()
        } else {
            Interval::ball(&self.center_im, &self.radius)
        };
        CertifiedValue::new(re, im, prec)
    }

    /// Disks are disjoint: `|c_i - c_j| > r_i + r_j`.
    pub fn disjoint_from(&self, o: &Self) -> bool {
        let dr = self.center_re.sub(&o.center_re);
        let di = self.center_im.sub(&o.center_im);
        let dist2 = dr.square().add(&di.square());
        let rs = self.radius.add(&o.radius);
        dist2 > rs.square()
    }

    fn contains_disk(&self, o: &Self) -> bool {
        // |c_o - c_s| + r_o <= r_s  <=>  |c_o - c_s|^2 <= (r_s - r_o)^2 with r_s >= r_o
        if o.radius > self.radius {
            return false;
        }
        let dr = self.center_re.sub(&o.center_re);
        let di = self.center_im.sub(&o.center_im);
        let dist2 = dr.square().add(&di.square());
        dist2 <= self.radius.sub(&o.radius).square()
    }

    fn intersects(&self, o: &Self) -> bool {
        !self.disjoint_from(o)
    }

    pub fn center_f64(&self) -> (f64, f64) {
        (self.center_re.to_f64(), self.center_im.to_f64())
    }
}

/// Certified isolation of every complex root of the squarefree part of a
/// polynomial, ordered by real part and then imaginary part of the centres.
#[derive(Clone, Debug)]
pub struct RootSystem {
    poly: IntPolynomial,
    roots: Vec<RootEnclosure>,
    bits: u32,
}

impl RootSystem {
    /// Squarefree part whose roots are isolated.
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn roots(&self) -> &[RootEnclosure] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Requested radius bound is `2^-bits`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn enclosure(&self, k: usize) -> CertifiedValue {
        self.roots[k].enclosure(self.bits + 32)
    }

    pub fn real_count(&self) -> usize {
        self.roots.iter().filter(|r| r.real).count()
    }
}

/// Isolates all complex roots of `poly`'s squarefree part to radius at most
/// `2^-bits`.
pub fn isolate_roots(poly: &IntPolynomial, bits: u32) -> RootSystem {
    isolate_seeded(poly, bits, None)
}

fn isolate_seeded(poly: &IntPolynomial, bits: u32, seeds: Option<&[RootEnclosure]>) -> RootSystem {
    assert!(!poly.is_zero(), "cannot isolate roots of the zero polynomial");
    let sqf = poly.squarefree_part();
    let n = sqf.degree();
    let roots = match n {
        0 => Vec::new(),
        1 => vec![linear_root(&sqf, bits)],
        _ => {
            let init: Vec<Approx> = match seeds {
                Some(s) if s.len() == n => s
                    .iter()
                    .map(|r| Approx {
                        re: r.center_re.clone(),
                        im: r.center_im.clone(),
                    })
                    .collect(),
                _ => initial_points(&sqf),
            };
            let mut r = aberth_certified(&sqf, bits, init);
            symmetrize(&mut r);
            r.sort_by(|a, b| {
                a.center_re
                    .cmp(&b.center_re)
                    .then(a.center_im.cmp(&b.center_im))
            });
            r
        }
    };
    RootSystem {
        poly: sqf,
        roots,
        bits,
    }
}

/// Replaces the lower member of each conjugate pair by the exact mirror
/// image of the upper one. Sound for real polynomials (conjugation permutes
/// the roots and preserves isolation) and makes the ordering of pairs
/// independent of rounding noise in the real parts.
fn symmetrize(r: &mut [RootEnclosure]) {
    for i in 0..r.len() {
        if r[i].real || r[i].center_im <= r[i].radius {
            continue;
        }
        let mirror = RootEnclosure {
            center_re: r[i].center_re.clone(),
            center_im: r[i].center_im.neg(),
            radius: r[i].radius.clone(),
            real: false,
        };
        let hits: Vec<usize> = (0..r.len())
            .filter(|&j| j != i && r[j].intersects(&mirror))
            .collect();
        if let [j] = hits[..] {
            r[j] = mirror;
        }
    }
}

fn linear_root(f: &IntPolynomial, bits: u32) -> RootEnclosure {
    let r = num_rational::BigRational::new(-f.coeff(0), f.coeff(1));
    let mag = (r.numer().bits() as i64 - r.denom().bits() as i64).max(0) as u32;
    let lo = Dyadic::from_rational(&r, bits + 8 + mag, Round::Down);
    let hi = Dyadic::from_rational(&r, bits + 8 + mag, Round::Up);
    let center = lo.add(&hi).mul_pow2(-1);
    let radius = hi.sub(&lo).mul_pow2(-1);
    RootEnclosure {
        center_re: center,
        center_im: Dyadic::zero(),
        radius,
        real: true,
    }
}

fn initial_points(f: &IntPolynomial) -> Vec<Approx> {
    let n = f.degree();
    // Fujiwara-style bound on root moduli, in log2
    let lead = f.leading().bits() as f64;
    let mut lb = f64::NEG_INFINITY;
    for k in 0..n {
        let c = f.coeff(k);
        if c.is_zero() {
            continue;
        }
        let l = (c.bits() as f64 - lead + 1.0) / (n - k) as f64;
        lb = lb.max(l);
    }
    let radius = 2f64.powf(lb.clamp(-60.0, 900.0) + 1.0);
    (0..n)
        .map(|k| {
            let ang = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Approx {
                re: Dyadic::from_f64(radius * ang.cos()),
                im: Dyadic::from_f64(radius * ang.sin()),
            }
        })
        .collect()
}

fn eval_approx(coeffs: &[Approx], z: &Approx, p: u32) -> Approx {
    coeffs
        .iter()
        .rev()
        .fold(Approx::zero(), |acc, c| acc.mul(z, p).add(c, p))
}

fn aberth_certified(f: &IntPolynomial, bits: u32, mut z: Vec<Approx>) -> Vec<RootEnclosure> {
    let n = f.degree();
    let coeffs: Vec<Approx> = f
        .coeffs()
        .iter()
        .map(|c| Approx {
            re: Dyadic::from_int(c.clone()),
            im: Dyadic::zero(),
        })
        .collect();
    let dcoeffs: Vec<Approx> = f
        .derivative()
        .coeffs()
        .iter()
        .map(|c| Approx {
            re: Dyadic::from_int(c.clone()),
            im: Dyadic::zero(),
        })
        .collect();
    // magnitude headroom: large roots need extra absolute precision
    let spread = z.iter().map(|a| a.log2_mag()).max().unwrap_or(0).max(0) as u32;
    let mut prec: u32 = 64.max(spread + 32);
    let target = bits + 8 + spread;
    let mut first = true;
    loop {
        let cap = if first { 2000 } else { 60 };
        first = false;
        aberth_iterate(&coeffs, &dcoeffs, &mut z, prec, cap, n);
        if let Some(roots) = certify(f, &z, prec, bits) {
            return roots;
        }
        prec = if prec < target { (prec * 2).min(target) } else { prec * 2 };
        assert!(prec < 1 << 20, "root isolation failed to converge for {f}");
    }
}

fn aberth_iterate(
    coeffs: &[Approx],
    dcoeffs: &[Approx],
    z: &mut [Approx],
    p: u32,
    cap: usize,
    n: usize,
) {
    let tol = -(p as i64) + 12;
    let mut nudge = 1u32;
    for _ in 0..cap {
        let mut converged = true;
        for k in 0..n {
            let pk = eval_approx(coeffs, &z[k], p);
            if pk.is_zero() {
                continue;
            }
            let dk = eval_approx(dcoeffs, &z[k], p);
            let mut sum = Approx::zero();
            let mut collided = false;
            for j in 0..n {
                if j == k {
                    continue;
                }
                let diff = z[k].sub(&z[j], p);
                match Approx::zero().add(&one(), p).div(&diff, p) {
                    Some(inv) => sum = sum.add(&inv, p),
                    None => collided = true,
                }
            }
            let step = match (collided, pk.div(&dk, p)) {
                (false, Some(ratio)) => {
                    let denom = one().sub(&ratio.mul(&sum, p), p);
                    ratio.div(&denom, p).unwrap_or(ratio)
                }
                _ => {
                    // coincident iterates or a critical point: perturb
                    nudge += 1;
                    let eps = Dyadic::one().mul_pow2(-(nudge as i64) * 3);
                    Approx {
                        re: eps.clone(),
                        im: eps.mul_pow2(-1),
                    }
                }
            };
            let scale = z[k].log2_mag().max(0);
            if step.log2_mag() > tol + scale {
                converged = false;
            }
            z[k] = z[k].sub(&step, p);
        }
        if converged {
            break;
        }
    }
}

fn one() -> Approx {
    Approx {
        re: Dyadic::one(),
        im: Dyadic::zero(),
    }
}

fn certify(f: &IntPolynomial, z: &[Approx], prec: u32, bits: u32) -> Option<Vec<RootEnclosure>> {
    let n = z.len();
    let w = prec + 32;
    let lead = Interval::from_int(&f.leading()).abs();
    let coeffs: Vec<CertifiedValue> = f
        .coeffs()
        .iter()
        .map(|c| CertifiedValue::from_int(c, w))
        .collect();
    let nn = Dyadic::from_i64(n as i64);
    let mut disks = Vec::with_capacity(n);
    for k in 0..n {
        let zk = z[k].point(w);
        let pz = coeffs
            .iter()
            .rev()
            .fold(CertifiedValue::from_int(&BigInt::zero(), w), |acc, c| {
                acc.mul(&zk).add(c)
            });
        let mut prod = CertifiedValue::from_int(&BigInt::from(1), w);
        for j in 0..n {
            if j != k {
                prod = prod.mul(&zk.sub(&z[j].point(w)));
            }
        }
        let denom = prod.abs().re().mul(&lead, w);
        if !denom.lo().is_positive() {
            return None;
        }
        let num = pz.abs().re().hi().clone();
        let r = nn.mul(&num).div(denom.lo(), 40, Round::Up);
        disks.push(RootEnclosure {
            center_re: z[k].re.clone(),
            center_im: z[k].im.clone(),
            radius: r,
            real: false,
        });
    }
    if !pairwise_disjoint(&disks) {
        return None;
    }
    let limit = Dyadic::one().mul_pow2(-(bits as i64) - 1);
    if disks.iter().any(|d| d.radius > limit) {
        return None;
    }
    let mut out = disks.clone();
    for (k, d) in disks.iter().enumerate() {
        let im_abs = d.center_im.abs();
        if im_abs > d.radius {
            continue;
        }
        let snapped = RootEnclosure {
            center_re: d.center_re.clone(),
            center_im: Dyadic::zero(),
            radius: d.radius.add(&im_abs),
            real: true,
        };
        if disks
            .iter()
            .enumerate()
            .all(|(j, o)| j == k || snapped.disjoint_from(o))
        {
            out[k] = snapped;
        } else {
            return None;
        }
    }
    pairwise_disjoint(&out).then_some(out)
}

fn pairwise_disjoint(d: &[RootEnclosure]) -> bool {
    (0..d.len()).all(|i| (i + 1..d.len()).all(|j| d[i].disjoint_from(&d[j])))
}

const LADDER_LEVELS: usize = 14;

/// Root systems of one polynomial at precisions `64 * 2^k`, computed on
/// demand. Level 0 fixes the root labelling; higher levels keep it.
#[derive(Debug)]
pub struct RootLadder {
    poly: IntPolynomial,
    levels: [OnceLock<RootSystem>; LADDER_LEVELS],
}

impl Clone for RootLadder {
    fn clone(&self) -> Self {
        Self::new(self.poly.clone())
    }
}

impl RootLadder {
    pub fn new(poly: IntPolynomial) -> Self {
        Self {
            poly,
            levels: Default::default(),
        }
    }

    pub fn level_bits(level: usize) -> u32 {
        64u32 << level
    }

    /// A root system whose radii are at most `2^-bits`.
    pub fn at(&self, bits: u32) -> &RootSystem {
        let level = (0..LADDER_LEVELS)
            .find(|&l| Self::level_bits(l) >= bits)
            .unwrap_or(LADDER_LEVELS - 1);
        self.level(level)
    }

    fn level(&self, level: usize) -> &RootSystem {
        if let Some(r) = self.levels[level].get() {
            return r;
        }
        let sys = if level == 0 {
            isolate_roots(&self.poly, Self::level_bits(0))
        } else {
            let prev = self.level(level - 1);
            relabel(prev, isolate_seeded(&self.poly, Self::level_bits(level), Some(prev.roots())))
        };
        let _ = self.levels[level].set(sys);
        self.levels[level].get().unwrap()
    }
}

/// Reorders a finer root system to follow the labelling of a coarser one.
fn relabel(prev: &RootSystem, mut next: RootSystem) -> RootSystem {
    let mut order = vec![usize::MAX; prev.roots.len()];
    let mut ok = true;
    for (i, r) in next.roots.iter().enumerate() {
        let hits: Vec<usize> = prev
            .roots
            .iter()
            .enumerate()
            .filter(|(_, o)| o.intersects(r))
            .map(|(j, _)| j)
            .collect();
        if hits.len() == 1 && order[hits[0]] == usize::MAX {
            order[hits[0]] = i;
        } else {
            ok = false;
            break;
        }
    }
    if !ok {
        // one more doubling always separates: radii shrink, old disks are disjoint
        let finer = isolate_seeded(&next.poly, next.bits * 2, Some(&next.roots));
        let mut relabelled = relabel(prev, finer);
        relabelled.bits = next.bits;
        return relabelled;
    }
    let roots = order.iter().map(|&i| next.roots[i].clone()).collect();
    next.roots = roots;
    next
}

impl RootSystem {
    /// The level-0 disk of root `k` contains the refined disk (sanity check
    /// used by tests).
    pub fn refines(&self, coarse: &RootSystem) -> bool {
        self.roots.len() == coarse.roots.len()
            && self
                .roots
                .iter()
                .zip(&coarse.roots)
                .all(|(f, c)| c.intersects(f) || c.contains_disk(f))
    }
}
