//! Acceptance gate: one test per verified headline result, exact integer
//! equality throughout.  Each test prints a single pass line; any failure
//! panics with context.  The long (q,t) = (5,5) census is opt-in via
//! `cargo test -- --ignored`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use pseudoregulus::curves::{
    classify_subline, nrc_count_identities, preimage_curve, subline_census, sublines_triple_closure,
    sublines_via_families, verify_carrier_curves, verify_inverse_power, verify_maintheta,
    FamilyClassifier,
};
use pseudoregulus::gf::{theta, theta_inverse, FieldTower, TowerConfig};
use pseudoregulus::hypersurface::{
    all_lines_scan, counts_row, family_member_through, lines_through, lines_through_scan, n1, n2,
    points as hyper_points, subline_count,
};
use pseudoregulus::linset::{
    is_imaginary, verify_main_theorem, verify_splash, CanonicalSubgeometry, ProjectionConfig,
};
use pseudoregulus::projspace::{
    enumerate_hyperplanes, enumerate_space_points, meet, sigma_hat, span, Fld, ProjPoint, Subspace,
};

fn tower(p: u64, e: u32, t: u32) -> FieldTower {
    FieldTower::build_with(p, e, t, None, None, TowerConfig::default()).expect("tower builds")
}

fn theta_u(s: i64, q: u64) -> u64 {
    use num_traits::ToPrimitive;
    theta(s, q).to_u64().expect("fits")
}

/// Criterion 1: enumerated subline counts of the reference set and agreement
/// of the two enumeration algorithms.
#[test]
fn criterion_1_subline_census() {
    for (p, e, t, expected) in [(3u64, 1u32, 3u32, 26usize), (2, 2, 3, 42), (2, 2, 4, 1037)] {
        let tw = tower(p, e, t);
        let a = sublines_triple_closure(&tw);
        let b = sublines_via_families(&tw);
        assert_eq!(a, b, "algorithms disagree at q={} t={}", tw.q(), t);
        assert_eq!(a.len(), expected, "census size at q={} t={}", tw.q(), t);
    }
    println!("criterion 1: PASS (sublines 26 / 42 / 1037, algorithms agree)");
}

/// The canonical projection configuration with the given point as center
/// generator: center = span of its t-2 consecutive conjugates, axis = first
/// coordinate line disjoint from the center.
fn config_for_center(
    tw: &FieldTower,
    sigma: &CanonicalSubgeometry,
    p: &ProjPoint,
) -> ProjectionConfig {
    let fe = Fld::ext(tw);
    let t = tw.t() as usize;
    let s = sigma.fixing_generator(tw, 1).unwrap();
    let mut pts = vec![p.clone()];
    let mut conj = p.clone();
    for _ in 1..=t - 3 {
        conj = s.apply(fe, &conj);
        pts.push(conj.clone());
    }
    let gamma = span(fe, &pts);
    for i in 0..t {
        for j in i + 1..t {
            let mut r1 = vec![0; t];
            let mut r2 = vec![0; t];
            r1[i] = 1;
            r2[j] = 1;
            let lambda = Subspace::from_vectors(fe, t, &[r1, r2]);
            if meet(fe, &gamma, &lambda).is_empty() {
                return ProjectionConfig { sigma: sigma.clone(), gamma, lambda };
            }
        }
    }
    panic!("no coordinate line avoids the center");
}

/// Criterion 2: the three characterizations agree for every imaginary center
/// of PG(2, 27) and fail together for non-imaginary centers off the
/// subgeometry.
#[test]
fn criterion_2_main_theorem_exhaustive() {
    let tw = tower(3, 1, 3);
    let fe = Fld::ext(&tw);
    let sigma = CanonicalSubgeometry::standard(3);
    let fixing = sigma_hat(&tw, 1, 3).unwrap();
    let all: Vec<ProjPoint> = enumerate_space_points(fe, 3).collect();
    let imaginary: Vec<&ProjPoint> =
        all.iter().filter(|p| is_imaginary(&tw, p, &fixing)).collect();
    assert_eq!(imaginary.len(), 432, "imaginary point count");
    imaginary.par_iter().for_each(|p| {
        let cfg = config_for_center(&tw, &sigma, p);
        let r = verify_main_theorem(&tw, &cfg).expect("verification runs");
        assert!(
            r.cond_i && r.cond_ii && r.cond_iii && r.agree,
            "conditions fail for imaginary center {:?}",
            p
        );
        assert_eq!(r.transversals_match, Some(true), "transversals for {:?}", p);
    });
    let negatives: Vec<&ProjPoint> = all
        .iter()
        .filter(|p| {
            !is_imaginary(&tw, p, &fixing) && !p.coords.iter().all(|&c| tw.is_in_base(c))
        })
        .take(100)
        .collect();
    assert_eq!(negatives.len(), 100);
    negatives.par_iter().for_each(|p| {
        let cfg = config_for_center(&tw, &sigma, p);
        if cfg.validate(&tw).is_err() {
            return; // degenerate configuration: not a counterexample candidate
        }
        let r = verify_main_theorem(&tw, &cfg).expect("verification runs");
        assert!(
            !r.cond_i && !r.cond_ii && !r.cond_iii,
            "some condition holds for non-imaginary center {:?}",
            p
        );
    });
    println!("criterion 2: PASS (432 imaginary centers true, 100 others false)");
}

/// Criterion 3: norm hypersurface size, partition into families, line cover,
/// and the two line-count formulas against exhaustive scans.
#[test]
fn criterion_3_hypersurface_structure() {
    for (p, e) in [(3u64, 1u32), (2, 2)] {
        let tw = tower(p, e, 3);
        let q = tw.q();
        let pts = hyper_points(&tw);
        let th = theta_u(2, q);
        assert_eq!(pts.len() as u64, th * th, "hypersurface size at q={q}");
        for h in 0..3 {
            let mut counts: std::collections::BTreeMap<u64, u64> = Default::default();
            for x in &pts {
                *counts.entry(family_member_through(&tw, h, x).k).or_insert(0) += 1;
            }
            assert_eq!(counts.len() as u64, th, "member count, family {h}, q={q}");
            assert!(
                counts.values().all(|&c| c == th),
                "member sizes, family {h}, q={q}"
            );
        }
        let fb = Fld::base(&tw);
        let all = all_lines_scan(&tw);
        assert!(
            all.par_iter().all(|line| {
                let lpts = line.points(fb);
                (0..3).any(|h| {
                    let member = family_member_through(&tw, h, &lpts[0]);
                    lpts.iter().all(|x| member.contains_point(&tw, x))
                })
            }),
            "a hypersurface line escapes every family at q={q}"
        );
        if q == 3 {
            assert_eq!(pts.len(), 169);
            let base_point = ProjPoint { coords: vec![1, 0, 0, 1, 0, 0] };
            let structured = lines_through(&tw, &base_point).unwrap();
            let scanned = lines_through_scan(&tw, &base_point);
            assert_eq!(structured, scanned, "lines through a point, q=3");
            assert_eq!(n1(q, 3).unwrap(), BigInt::from(structured.len()));
            assert_eq!(structured.len(), 12);
            assert_eq!(n2(q, 3).unwrap(), BigInt::from(all.len()));
            assert_eq!(all.len(), 507);
        }
    }
    println!("criterion 3: PASS (|Q|=169, partitions, line cover, N1=12, N2=507)");
}

/// Canonical GF(q)-lines of PG_q(F_{q^t}), one basis pair per point set.
fn canonical_lines(tw: &FieldTower) -> Vec<(u64, u64)> {
    let reps: Vec<u64> = (1..tw.qt()).filter(|&x| tw.fq_span_rep(x) == x).collect();
    let mut seen = BTreeSet::new();
    let mut lines = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if tw.is_in_base(tw.mul(reps[j], tw.inv(reps[i]))) {
                continue;
            }
            let key: BTreeSet<u64> = pseudoregulus::curves::line_points(&tw, reps[i], reps[j])
                .unwrap()
                .into_iter()
                .collect();
            if seen.insert(key) {
                lines.push((reps[i], reps[j]));
            }
        }
    }
    lines
}

/// Criterion 4: every power of every order-3 line of PG_2(F_64) is a normal
/// rational curve of the predicted order, and every inverse line spans an
/// (m-1)-space carrying a normal rational curve.
#[test]
fn criterion_4_line_powers() {
    let tw = tower(2, 2, 3);
    let lines = canonical_lines(&tw);
    assert_eq!(lines.len() as u64, theta_u(2, 4), "line count of PG(2,4)");
    lines.par_iter().for_each(|&(z, w)| {
        let m = pseudoregulus::curves::line_order(&tw, z, w);
        assert_eq!(m, 3, "every non-base direction ratio has order t here");
        for nu in [1u32, 2] {
            for h in [1u32, 2] {
                let r = verify_maintheta(&tw, z, w, nu, h).expect("in hypothesis");
                assert!(
                    r.size_ok && r.is_nrc && r.general_position && r.equivalent_to_reduced,
                    "power failure z={z} w={w} nu={nu} h={h}: {r:?}"
                );
                assert_eq!(r.curve_order as u32, r.n, "order z={z} w={w} nu={nu} h={h}");
            }
        }
        let inv = verify_inverse_power(&tw, z, w).expect("in hypothesis");
        assert!(inv.pointwise_equal, "inverse identity z={z} w={w}");
        assert_eq!(inv.curve_order as u32, inv.m - 1, "inverse order z={z} w={w}");
    });
    println!("criterion 4: PASS (21 lines x 4 exponent classes + inverses)");
}

/// Criterion 5: the subgeometry preimage of every subline is a normal
/// rational curve of order h nu^{-1} mod m, and for t prime the census splits
/// into t-1 equal families.
#[test]
fn criterion_5_preimage_structure() {
    for (p, e, t, nus) in [(3u64, 1u32, 3u32, vec![1u32, 2]), (2, 2, 3, vec![1])] {
        let tw = tower(p, e, t);
        let fc = FamilyClassifier::new(&tw);
        let subs: Vec<_> = sublines_via_families(&tw).into_iter().collect();
        for &nu in &nus {
            subs.par_iter().for_each(|r| {
                let class = classify_subline(&tw, &fc, r, nu).expect("classifies");
                let nu_inv = (1..class.m).find(|x| (x * nu) % class.m == 1).unwrap();
                assert_eq!(
                    class.preimage_order,
                    (class.h * nu_inv) % class.m,
                    "predicted order"
                );
                let rep = preimage_curve(&tw, &fc, r, nu).expect("preimage fits");
                assert!(rep.order_matches, "curve order for {:?}", class);
                assert!(rep.power_model_matches, "power model for {:?}", class);
            });
            // t prime: t-1 families of theta_{t-1} theta_{t-2} / theta_1 each
            let census = subline_census(&tw, nu, false).unwrap();
            let q = tw.q();
            let fam_size = theta_u(t as i64 - 1, q) * theta_u(t as i64 - 2, q) / theta_u(1, q);
            assert_eq!(census.by_family.len() as u32, t - 1, "family count");
            assert!(
                census.by_family.values().all(|s| s.count == fam_size),
                "family sizes at q={q}"
            );
        }
    }
    println!("criterion 5: PASS (all preimages are predicted-order curves, equal families)");
}

/// Criterion 6: pure integer identities, no enumeration.
#[test]
fn criterion_6_counting_identities() {
    for t in [3u32, 5, 7] {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let c = nrc_count_identities(q, t).unwrap();
            assert!(c.identity_holds, "K1 = K2*K3 at q={q} t={t}");
            assert!(c.nu_t1 > BigInt::zero(), "integral positive count at q={q} t={t}");
        }
    }
    // exponent congruence: theta_{nu-1}^{-1} theta_{h-1} is congruent to
    // theta-like sum (q^{nu n}-1)/(q^nu-1) mod theta_{m-1} when
    // n = h nu^{-1} mod m
    for q in 2u64..=9 {
        for t in 2u64..=8 {
            for nu in (1..t).filter(|nu| nu.gcd(&t) == 1) {
                let dinv = theta_inverse(nu, t, q).unwrap();
                for m in (1..=t).filter(|m| t % m == 0) {
                    let nu_inv_m = (1..=m).find(|x| (x * nu) % m == 1 % m).unwrap();
                    let modulus = theta(m as i64 - 1, q);
                    if modulus.is_zero() || modulus.is_one() {
                        continue;
                    }
                    for h in 0..t {
                        let n = (h * nu_inv_m) % m;
                        let qn = BigInt::from(q).pow((nu * n) as u32);
                        let d = BigInt::from(q).pow(nu as u32);
                        let rhs: BigInt = (qn - 1) / (d - 1);
                        let lhs = &dinv * theta(h as i64 - 1, q);
                        assert_eq!(
                            lhs.mod_floor(&modulus),
                            rhs.mod_floor(&modulus),
                            "congruence q={q} t={t} nu={nu} m={m} h={h}"
                        );
                    }
                }
            }
        }
    }
    println!("criterion 6: PASS (K-identities and exponent congruence grid)");
}

/// Criterion 7: carrier curves through the conjugate triple of the center
/// generator project onto exactly the sublines of a single family.
#[test]
fn criterion_7_carrier_curves() {
    let tw = tower(5, 1, 3);
    for nu in [1u32, 2] {
        let r = verify_carrier_curves(&tw, nu).unwrap();
        assert_eq!(r.subline_count, 31, "subline count at nu={nu}");
        assert!(r.counts_match, "curve/subline counts at nu={nu}");
        assert!(r.all_sublines_in_reference, "containment at nu={nu}");
        assert!(r.single_family, "single family at nu={nu}");
        assert_eq!(r.family_h, (3 - nu % 3) % 3, "family index at nu={nu}");
    }
    println!("criterion 7: PASS (31 carrier sublines, family h = -nu mod 3)");
}

/// Criterion 8: exhaustive splash scan of PG(2, 27); pseudoregulus type is
/// equivalent to the line meeting a conjugate, with the two intersections as
/// transversal points.
#[test]
fn criterion_8_splash_exhaustive() {
    let tw = tower(3, 1, 3);
    let fe = Fld::ext(&tw);
    let sigma = CanonicalSubgeometry::standard(3);
    let spoints = sigma.points(&tw);
    let spans = sigma.hyperplane_spans(&tw);
    let admissible: Vec<Subspace> = enumerate_hyperplanes(fe, 3)
        .filter(|l| {
            spoints.iter().all(|p| !l.contains(fe, p))
                && spans.iter().all(|h| !h.contains_sub(fe, l))
        })
        .collect();
    assert!(!admissible.is_empty());
    admissible.par_iter().for_each(|l| {
        let r = verify_splash(&tw, &sigma, l).expect("splash runs");
        assert_eq!(
            r.pseudoregulus,
            r.meeting_nu.is_some(),
            "criterion mismatch for line {:?}",
            l.rows
        );
        if r.pseudoregulus {
            assert_eq!(r.transversals_match, Some(true), "transversals for {:?}", l.rows);
        }
    });
    println!(
        "criterion 8: PASS ({} exterior lines, pseudoregulus iff meets conjugate)",
        admissible.len()
    );
}

/// Criterion 9, fast half: closed-form counts at (q,t) = (5,5).
#[test]
fn criterion_9_formula_counts() {
    let row = counts_row(5, 5, None).unwrap();
    assert_eq!(row.subline_count_formula, BigInt::from(81224u32));
    assert_eq!(subline_count(5, 5).unwrap(), BigInt::from(81224u32));
    let c = nrc_count_identities(5, 5).unwrap();
    assert!(c.identity_holds);
    assert!(c.nu_t1 > BigInt::one());
    println!("criterion 9: PASS (81224 sublines and K-identities by formula)");
}

/// Criterion 9, slow half: the structured enumeration reproduces the formula
/// at (q,t) = (5,5).  Run with `cargo test -- --ignored`.
#[test]
#[ignore = "long-running census; enable explicitly"]
fn criterion_9_census_5_5() {
    let tw = tower(5, 1, 5);
    let subs = sublines_via_families(&tw);
    assert_eq!(subs.len(), 81224);
    println!("criterion 9 (census): PASS (81224 enumerated sublines at q=t=5)");
}
