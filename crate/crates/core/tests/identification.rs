mod support;

use gbmr_core::identification::{
    identify_layer, identify_tube, validate_catalog, Catalog, GroundPlane, IdentificationError,
    LayerTemplate, MatchedEntry, TemplateCatalog, TubeAssignments, TubeCatalog, TubeEntry,
};
use gbmr_core::linalg::{RigidTransform, Vec3};
use gbmr_core::scalar::inches;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::oracles::{lower_boundary, scan_tubes as scan, upper_boundary, Scan};

const LENGTHS_IN: [f64; 9] = [30.0, 33.0, 36.0, 40.0, 44.0, 48.0, 53.0, 58.0, 64.0];

fn tower_catalog() -> TubeCatalog<f64> {
    let mut entries = Vec::new();
    for (k, &len) in LENGTHS_IN.iter().enumerate() {
        for j in 0..6 {
            entries.push(TubeEntry {
                id: (k * 6 + j + 1) as u32,
                length: inches(len),
                frame: (j % 3 + 1) as u8,
                frame_pose: RigidTransform::identity(),
                model_pose: RigidTransform::identity(),
            });
        }
    }
    TubeCatalog {
        entries,
        tolerance: 0.0127,
        expected_entries: Some(54),
        expected_unique_lengths: Some(9),
    }
}

fn classify(catalog: &TubeCatalog<f64>, measured: f64, a: &mut TubeAssignments) -> Scan {
    match identify_tube(Vec3::zero(), Vec3::new(measured, 0.0, 0.0), catalog, a) {
        Ok(r) => match r.entry {
            MatchedEntry::Tube { tube_id, .. } => Scan::Tube(tube_id),
            _ => unreachable!(),
        },
        Err(IdentificationError::NoMatch { .. }) => Scan::NoMatch,
        Err(IdentificationError::Ambiguous { .. }) => Scan::Ambiguous,
        Err(IdentificationError::AllAssigned { .. }) => Scan::AllAssigned,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn tower_catalog_is_valid() {
    assert!(validate_catalog(&Catalog::Tubes(tower_catalog())).is_empty());
}

#[test]
fn random_lengths_match_linear_scan() {
    let catalog = tower_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut a = TubeAssignments::default();
    let mut taken = Vec::new();
    for i in 0..10_000 {
        let nominal = inches::<f64>(LENGTHS_IN[rng.gen_range(0..9)]);
        let measured = nominal + rng.gen_range(-0.03..0.03);
        let expected = scan(&catalog, measured, &taken);
        let got = classify(&catalog, measured, &mut a);
        assert_eq!(got, expected, "measured {measured}");
        if let Scan::Tube(id) = got {
            taken.push(id);
        }
        // keep assignments cycling so all outcomes stay reachable
        if i % 97 == 0 {
            for id in taken.drain(..) {
                a.unassign(id);
            }
        }
    }
}

#[test]
fn boundary_deviation_is_accepted() {
    let catalog = tower_catalog();
    for &len in &LENGTHS_IN {
        let nominal = inches::<f64>(len);
        let m = upper_boundary(nominal, 0.0127);
        let mut a = TubeAssignments::default();
        let r = identify_tube(Vec3::zero(), Vec3::new(m, 0.0, 0.0), &catalog, &mut a).unwrap();
        assert_eq!(r.deviation, m - nominal);
        let beyond = f64::from_bits(m.to_bits() + 1);
        assert_eq!(classify(&catalog, beyond, &mut a), Scan::NoMatch);

        let low = lower_boundary(nominal, 0.0127);
        let r = identify_tube(Vec3::zero(), Vec3::new(low, 0.0, 0.0), &catalog, &mut a).unwrap();
        assert_eq!(r.deviation.abs(), nominal - low);
        assert_eq!(
            classify(&catalog, f64::from_bits(low.to_bits() - 1), &mut a),
            Scan::NoMatch
        );
    }
}

#[test]
fn assignment_bookkeeping() {
    let catalog = tower_catalog();
    let mut a = TubeAssignments::default();
    let len = inches::<f64>(44.0);
    let ids: Vec<Scan> = (0..7).map(|_| classify(&catalog, len, &mut a)).collect();
    let expected: Vec<Scan> = (25..31)
        .map(Scan::Tube)
        .chain([Scan::AllAssigned])
        .collect();
    assert_eq!(ids, expected);
}

fn layers() -> TemplateCatalog<f64> {
    TemplateCatalog {
        templates: (0..8)
            .map(|i| LayerTemplate {
                layer: i + 1,
                height: 0.3 + 0.05 * i as f64,
                outline: vec![[0.0, 0.0], [0.3, 0.0], [0.3, 0.1], [0.0, 0.0]],
                rod_holes: vec![[0.05, 0.05], [0.25, 0.05]],
                label: format!("Layer {}", i + 1),
            })
            .collect(),
        tolerance: 0.00635,
    }
}

proptest! {
    #[test]
    fn tube_matching_is_symmetric(
        p in prop::array::uniform3(-2.0..2.0f64),
        dir in prop::array::uniform3(-1.0..1.0f64),
        k in 0usize..9,
        noise in -0.02..0.02f64,
    ) {
        let dir = Vec3::new(dir[0], dir[1], dir[2]);
        prop_assume!(dir.norm() > 0.1);
        let p1 = Vec3::new(p[0], p[1], p[2]);
        let p2 = p1 + dir.normalized().unwrap() * (inches::<f64>(LENGTHS_IN[k]) + noise);
        let catalog = tower_catalog();
        let forward = identify_tube(p1, p2, &catalog, &mut TubeAssignments::default());
        let backward = identify_tube(p2, p1, &catalog, &mut TubeAssignments::default());
        prop_assert_eq!(forward.map(|r| r.entry), backward.map(|r| r.entry));
    }

    #[test]
    fn layer_match_is_monotone_within_band(i in 0usize..8, a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let catalog = layers();
        let nominal = catalog.templates[i].height;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let ground = GroundPlane::default();
        let at = |f: f64| identify_layer(Vec3::new(0.1, 0.2, nominal + f * 0.0063), &ground, &catalog).unwrap();
        prop_assert_eq!(at(lo).entry, at(hi).entry);
    }

    #[test]
    fn layer_matches_scan(h in 0.0..0.8f64) {
        let catalog = layers();
        let hits: Vec<u32> = catalog
            .templates
            .iter()
            .filter(|t| (h - t.height).abs() <= catalog.tolerance)
            .map(|t| t.layer)
            .collect();
        let got = identify_layer(Vec3::new(-0.4, 0.0, h), &GroundPlane::default(), &catalog);
        match (hits.as_slice(), got) {
            ([layer], Ok(r)) => {
                let matched = matches!(r.entry, MatchedEntry::Layer { layer: l, .. } if l == *layer);
                prop_assert!(matched);
            }
            ([], Err(IdentificationError::NoMatch { .. })) => {}
            (h, g) => prop_assert!(false, "scan {:?} vs {:?}", h, g),
        }
    }
}
