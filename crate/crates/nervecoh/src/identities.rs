//! Randomized and exhaustive structural checks of the simplicial machinery.
//!
//! Each family of identities gets its own report: the simplicial identities
//! on both nerve models, simpliciality of the quotient comparison, the
//! commutation and twisted-face identities of the bisimplicial product, and
//! the invariance/freeness/compatibility laws of the right action on bar
//! tuples.
//!
//! Every family runs over a mixed-radix check space (tuple entries plus face
//! or element choices).  When the whole space fits inside the per-level
//! budget it is enumerated exhaustively, and the remaining budget is spent on
//! uniform re-draws; otherwise the budget is filled with seeded uniform
//! samples.  Either way each family performs exactly `samples` checks per
//! level, deterministically for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{Group, SemidirectProduct};
use crate::nerve::{
    face_bis_horizontal, face_bis_vertical, face_ng, face_ngbar, gamma, gamma_semidirect,
    right_action, BiTuple,
};

/// Witnesses kept per failing family; further failures are only counted.
const MAX_WITNESSES: usize = 3;

/// Outcome of one family of checks.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// The first few counterexample descriptions, if any.
    pub witnesses: Vec<String>,
}

impl IdentityReport {
    fn new(name: &'static str) -> IdentityReport {
        IdentityReport {
            name,
            checks: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// All reports from one run, in a fixed family order.
#[derive(Clone, Debug)]
pub struct IdentitySuite {
    pub reports: Vec<IdentityReport>,
}

impl IdentitySuite {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(IdentityReport::passed)
    }

    pub fn total_checks(&self) -> usize {
        self.reports.iter().map(|r| r.checks).sum()
    }
}

fn decode_mixed(radices: &[usize], mut index: usize, out: &mut [usize]) {
    for (slot, &radix) in radices.iter().enumerate().rev() {
        out[slot] = index % radix;
        index /= radix;
    }
}

fn random_point(rng: &mut ChaCha8Rng, radices: &[usize], out: &mut [usize]) {
    for (slot, &radix) in radices.iter().enumerate() {
        out[slot] = rng.gen_range(0..radix);
    }
}

/// Runs one family level over the mixed-radix space: exhaustively when it
/// fits in `budget` (re-drawing randomly to fill the budget), sampled
/// otherwise.  `eval` returns a witness string on failure.
fn run_level(
    report: &mut IdentityReport,
    rng: &mut ChaCha8Rng,
    radices: &[usize],
    budget: usize,
    mut eval: impl FnMut(&[usize]) -> Option<String>,
) {
    let total: u128 = radices.iter().map(|&r| r as u128).product();
    if total == 0 {
        return;
    }
    let mut point = vec![0usize; radices.len()];
    let record = |report: &mut IdentityReport, point: &[usize], eval: &mut dyn FnMut(&[usize]) -> Option<String>| {
        report.checks += 1;
        if let Some(witness) = eval(point) {
            report.failures += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(witness);
            }
        }
    };
    if total <= budget as u128 {
        for index in 0..total as usize {
            decode_mixed(radices, index, &mut point);
            record(report, &point, &mut eval);
        }
        for _ in total as usize..budget {
            random_point(rng, radices, &mut point);
            record(report, &point, &mut eval);
        }
    } else {
        for _ in 0..budget {
            random_point(rng, radices, &mut point);
            record(report, &point, &mut eval);
        }
    }
}

/// All pairs `i < j` with both at most `top`, in lexicographic order.
fn index_pairs(top: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..top {
        for j in i + 1..=top {
            out.push((i, j));
        }
    }
    out
}

fn radices_for(order: usize, len: usize, extra: &[usize]) -> Vec<usize> {
    let mut r = vec![order; len];
    r.extend_from_slice(extra);
    r
}

fn nerve_face_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, group: &Group, max_level: usize, budget: usize) {
    for level in 2..=max_level {
        let pairs = index_pairs(level);
        let radices = radices_for(group.order(), level, &[pairs.len()]);
        run_level(report, rng, &radices, budget, |point| {
            let t = &point[..level];
            let (i, j) = pairs[point[level]];
            let a = face_ng(group, i, &face_ng(group, j, t).unwrap()).unwrap();
            let b = face_ng(group, j - 1, &face_ng(group, i, t).unwrap()).unwrap();
            (a != b).then(|| format!("level {level}, t={t:?}, i={i}, j={j}: {a:?} != {b:?}"))
        });
    }
}

fn bar_face_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, group: &Group, max_level: usize, budget: usize) {
    for level in 2..=max_level {
        let pairs = index_pairs(level);
        let radices = radices_for(group.order(), level + 1, &[pairs.len()]);
        run_level(report, rng, &radices, budget, |point| {
            let t = &point[..level + 1];
            let (i, j) = pairs[point[level + 1]];
            let a = face_ngbar(group, i, &face_ngbar(group, j, t).unwrap()).unwrap();
            let b = face_ngbar(group, j - 1, &face_ngbar(group, i, t).unwrap()).unwrap();
            (a != b).then(|| format!("level {level}, t={t:?}, i={i}, j={j}: {a:?} != {b:?}"))
        });
    }
}

fn gamma_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, group: &Group, max_level: usize, budget: usize) {
    for level in 1..=max_level {
        let radices = radices_for(group.order(), level + 1, &[level + 1]);
        run_level(report, rng, &radices, budget, |point| {
            let t = &point[..level + 1];
            let i = point[level + 1];
            let via_bar = gamma(group, &face_ngbar(group, i, t).unwrap()).unwrap();
            let via_ng = face_ng(group, i, &gamma(group, t).unwrap()).unwrap();
            (via_bar != via_ng)
                .then(|| format!("level {level}, t={t:?}, i={i}: {via_bar:?} != {via_ng:?}"))
        });
    }
}

/// Bidegrees `(p, q)` with `p >= min_p`, `q >= min_q`, `p + q <= max_level`.
fn bidegrees(min_p: usize, min_q: usize, max_level: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in min_p..=max_level {
        for q in min_q..=max_level.saturating_sub(p) {
            out.push((p, q));
        }
    }
    out
}

fn split_bituple(point: &[usize], p: usize, q: usize) -> BiTuple {
    BiTuple {
        gpart: point[..p].to_vec(),
        hpart: point[p..p + q].to_vec(),
    }
}

fn commutation_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    for (p, q) in bidegrees(1, 1, max_level) {
        let mut radices = vec![sd.g().order(); p];
        radices.extend(vec![sd.h().order(); q]);
        radices.push(p + 1);
        radices.push(q + 1);
        run_level(report, rng, &radices, budget, |point| {
            let t = split_bituple(point, p, q);
            let i = point[p + q];
            let j = point[p + q + 1];
            let hv = face_bis_horizontal(action, i, &face_bis_vertical(action, j, &t).unwrap())
                .unwrap();
            let vh = face_bis_vertical(action, j, &face_bis_horizontal(action, i, &t).unwrap())
                .unwrap();
            (hv != vh).then(|| format!("bidegree ({p}, {q}), t={t:?}, i={i}, j={j}"))
        });
    }
}

fn twisted_vertical_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    for (p, q) in bidegrees(0, 2, max_level) {
        let pairs = index_pairs(q);
        let mut radices = vec![sd.g().order(); p];
        radices.extend(vec![sd.h().order(); q]);
        radices.push(pairs.len());
        run_level(report, rng, &radices, budget, |point| {
            let t = split_bituple(point, p, q);
            let (i, j) = pairs[point[p + q]];
            let a = face_bis_vertical(action, i, &face_bis_vertical(action, j, &t).unwrap())
                .unwrap();
            let b = face_bis_vertical(action, j - 1, &face_bis_vertical(action, i, &t).unwrap())
                .unwrap();
            (a != b).then(|| format!("bidegree ({p}, {q}), t={t:?}, i={i}, j={j}: {a:?} != {b:?}"))
        });
    }
}

fn split_bar_pair<'a>(point: &'a [usize], p: usize, q: usize) -> (&'a [usize], &'a [usize]) {
    (&point[..p + 1], &point[p + 1..p + q + 2])
}

fn comparison_bisimplicial_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    for (p, q) in bidegrees(1, 1, max_level) {
        let mut radices = vec![sd.g().order(); p + 1];
        radices.extend(vec![sd.h().order(); q + 1]);
        radices.push(p + q + 2);
        run_level(report, rng, &radices, budget, |point| {
            let (gbar, hbar) = split_bar_pair(point, p, q);
            let face = point[p + q + 2];
            let base = gamma_semidirect(action, gbar, hbar).unwrap();
            let (via_bar, via_faces, direction, index) = if face <= p {
                let i = face;
                (
                    gamma_semidirect(action, &face_ngbar(sd.g(), i, gbar).unwrap(), hbar).unwrap(),
                    face_bis_horizontal(action, i, &base).unwrap(),
                    "horizontal",
                    i,
                )
            } else {
                let j = face - p - 1;
                (
                    gamma_semidirect(action, gbar, &face_ngbar(sd.h(), j, hbar).unwrap()).unwrap(),
                    face_bis_vertical(action, j, &base).unwrap(),
                    "vertical",
                    j,
                )
            };
            (via_bar != via_faces).then(|| {
                format!(
                    "bidegree ({p}, {q}), gbar={gbar:?}, hbar={hbar:?}, {direction} face \
                     {index}: {via_bar:?} != {via_faces:?}"
                )
            })
        });
    }
}

fn comparison_invariance_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    for (p, q) in bidegrees(0, 0, max_level) {
        let mut radices = vec![sd.g().order(); p + 1];
        radices.extend(vec![sd.h().order(); q + 1]);
        radices.push(sd.product().order());
        run_level(report, rng, &radices, budget, |point| {
            let (gbar, hbar) = split_bar_pair(point, p, q);
            let k = point[p + q + 2];
            let (g, h) = sd.decompose(k);
            let base = gamma_semidirect(action, gbar, hbar).unwrap();
            let (gbar2, hbar2) = right_action(action, gbar, hbar, g, h).unwrap();
            let moved = gamma_semidirect(action, &gbar2, &hbar2).unwrap();
            (moved != base).then(|| {
                format!("bidegree ({p}, {q}), gbar={gbar:?}, hbar={hbar:?}, element {k}")
            })
        });
    }
}

fn freeness_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    for (p, q) in bidegrees(0, 0, max_level) {
        let mut radices = vec![sd.g().order(); p + 1];
        radices.extend(vec![sd.h().order(); q + 1]);
        radices.push(sd.product().order());
        run_level(report, rng, &radices, budget, |point| {
            let (gbar, hbar) = split_bar_pair(point, p, q);
            let k = point[p + q + 2];
            let (g, h) = sd.decompose(k);
            let moved = right_action(action, gbar, hbar, g, h).unwrap();
            let fixed = moved.0 == gbar && moved.1 == hbar;
            (fixed && k != sd.product().identity()).then(|| {
                format!(
                    "bidegree ({p}, {q}), gbar={gbar:?}, hbar={hbar:?}: nonidentity element \
                     {k} fixes the point"
                )
            })
        });
    }
}

fn compatibility_family(report: &mut IdentityReport, rng: &mut ChaCha8Rng, sd: &SemidirectProduct, max_level: usize, budget: usize) {
    let action = sd.action();
    let product = sd.product();
    for (p, q) in bidegrees(0, 0, max_level) {
        let mut radices = vec![sd.g().order(); p + 1];
        radices.extend(vec![sd.h().order(); q + 1]);
        radices.push(product.order());
        radices.push(product.order());
        run_level(report, rng, &radices, budget, |point| {
            let (gbar, hbar) = split_bar_pair(point, p, q);
            let x = point[p + q + 2];
            let y = point[p + q + 3];
            let (gx, hx) = sd.decompose(x);
            let (gy, hy) = sd.decompose(y);
            let stepwise = {
                let first = right_action(action, gbar, hbar, gx, hx).unwrap();
                right_action(action, &first.0, &first.1, gy, hy).unwrap()
            };
            let (gxy, hxy) = sd.decompose(product.mul(x, y));
            let combined = right_action(action, gbar, hbar, gxy, hxy).unwrap();
            (stepwise != combined).then(|| {
                format!("bidegree ({p}, {q}), gbar={gbar:?}, hbar={hbar:?}, x={x}, y={y}")
            })
        });
    }
}

/// Runs every applicable family: the three nerve-level families on `group`,
/// and the six bisimplicial/action families when a semidirect decomposition
/// is supplied.  `samples` is the per-family, per-level check budget; `seed`
/// fixes the sampling.
pub fn run_identity_suite(
    group: &Group,
    sd: Option<&SemidirectProduct>,
    max_level: usize,
    samples: usize,
    seed: u64,
) -> IdentitySuite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();

    let mut report = IdentityReport::new("nerve-face-identities");
    nerve_face_family(&mut report, &mut rng, group, max_level, samples);
    reports.push(report);

    let mut report = IdentityReport::new("bar-face-identities");
    bar_face_family(&mut report, &mut rng, group, max_level, samples);
    reports.push(report);

    let mut report = IdentityReport::new("quotient-comparison-is-simplicial");
    gamma_family(&mut report, &mut rng, group, max_level, samples);
    reports.push(report);

    if let Some(sd) = sd {
        let mut report = IdentityReport::new("horizontal-vertical-commutation");
        commutation_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);

        let mut report = IdentityReport::new("twisted-vertical-face-identities");
        twisted_vertical_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);

        let mut report = IdentityReport::new("twisted-comparison-is-bisimplicial");
        comparison_bisimplicial_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);

        let mut report = IdentityReport::new("twisted-comparison-action-invariance");
        comparison_invariance_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);

        let mut report = IdentityReport::new("right-action-freeness");
        freeness_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);

        let mut report = IdentityReport::new("right-action-compatibility");
        compatibility_family(&mut report, &mut rng, sd, max_level, samples);
        reports.push(report);
    }

    IdentitySuite { reports }
}
