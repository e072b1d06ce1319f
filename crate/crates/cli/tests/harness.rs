use gramdist::{distance_sq_orthonormal, ToleranceConfig, Vector, VectorSystem};
use gramdist_cli::{
    coordinate_conditioning, emit_report, generate_system, load_instance, parse_instance, replay, run_campaign,
    save_instance, CampaignConfig, CheckId, Conditioning, FieldChoice, Format, GeneratorConfig, Instance, SizeRange,
};

#[test]
fn save_then_load_reproduces_sheared_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let inst = Instance {
        system: VectorSystem::from_real_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]).unwrap(),
        x: Vector::real([1.0, 1.0, 1.0]).unwrap(),
        intervals: None,
    };
    save_instance(&inst, &path).unwrap();
    assert_eq!(load_instance(&path, ToleranceConfig::default()).unwrap(), inst);
}

#[test]
fn generated_instances_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = GeneratorConfig {
        seed: 99,
        field: FieldChoice::Mixed,
        intervals: true,
        ..GeneratorConfig::default()
    };
    for t in 0..50 {
        let g = generate_system(&cfg, t).unwrap();
        let inst = Instance {
            system: g.system,
            x: g.x,
            intervals: g.intervals,
        };
        let path = dir.path().join(format!("{t}.json"));
        save_instance(&inst, &path).unwrap();
        assert_eq!(load_instance(&path, cfg.tolerance).unwrap(), inst);
    }
}

#[test]
fn complex_pairs_under_real_field_are_rejected() {
    let err = parse_instance(
        r#"{"field":"real","vectors":[[[1,0],[0,0]]],"x":[1,0]}"#,
        "inline",
        ToleranceConfig::default(),
    )
    .unwrap_err();
    assert!(err.to_string().contains("real instance"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn orthonormal_generation_never_rejects() {
    let cfg = GeneratorConfig {
        seed: 2,
        orthonormal: true,
        dim: SizeRange::new(2, 12),
        n: SizeRange::new(1, 11),
        ..GeneratorConfig::default()
    };
    for t in 0..2000 {
        let g = generate_system(&cfg, t).unwrap();
        distance_sq_orthonormal(&g.system, &g.x).unwrap();
    }
}

#[test]
fn conditioning_example() {
    let cfg = GeneratorConfig {
        seed: 4,
        conditioning: Conditioning::exact(1e4),
        dim: SizeRange::new(3, 10),
        n: SizeRange::new(2, 9),
        ..GeneratorConfig::default()
    };
    for t in 0..200 {
        let k = coordinate_conditioning(&generate_system(&cfg, t).unwrap().system);
        assert!((5e3..=2e4).contains(&k), "trial {t}: {k}");
    }
}

#[test]
fn campaign_reports_are_byte_identical() {
    let cfg = CampaignConfig::new(GeneratorConfig {
        seed: 21,
        trials: 300,
        ..GeneratorConfig::default()
    });
    let a = run_campaign(&cfg).unwrap();
    let b = run_campaign(&CampaignConfig {
        threads: Some(1),
        ..cfg.clone()
    })
    .unwrap();
    assert!(a.passed(), "{:?}", a.failures);
    for f in [Format::Csv, Format::Json] {
        assert_eq!(emit_report(&a, f), emit_report(&b, f));
    }
}

#[test]
fn every_injected_failure_replays() {
    let cfg = CampaignConfig {
        mutation: 0.95,
        checks: vec![CheckId::Dominance, CheckId::Combinations, CheckId::Hadamard],
        ..CampaignConfig::new(GeneratorConfig {
            seed: 8,
            trials: 40,
            ..GeneratorConfig::default()
        })
    };
    let r = run_campaign(&cfg).unwrap();
    assert!(!r.passed());
    for f in &r.failures {
        assert!(replay(&cfg, f).unwrap().contains(f), "{f:?}");
    }
}
