use super::*;

fn still(bathymetry: Bathymetry, k: usize, positivity: bool) -> Problem {
    Problem {
        domain: Domain::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
        nx: 20,
        ny: 20,
        bc: BoundarySet::uniform(Boundary::Outgoing),
        phys: PhysParams::default(),
        bathymetry,
        initial: InitialCondition::StillWater { eta: 0.50001 },
        inflow: None,
        options: SchemeOptions { k, positivity, ..Default::default() },
    }
}

fn solitary(nx: usize, ny: usize, bc: BoundarySet, k: usize) -> (Problem, SolitaryWave) {
    let w = SolitaryWave::new(1.0, 1.2, 9.81, 0.0).unwrap();
    let p = Problem {
        domain: Domain::new(-20.0, 20.0, -1.0, 1.0).unwrap(),
        nx,
        ny,
        bc,
        phys: PhysParams::default(),
        bathymetry: Bathymetry::Flat { level: -1.0 },
        initial: InitialCondition::Solitary(w),
        inflow: None,
        options: SchemeOptions { k, ..Default::default() },
    };
    (p, w)
}

#[test]
fn smooth_bump_stays_at_rest() {
    for k in [1, 2] {
        let mut s = Simulation::new(&still(Bathymetry::CaseABump, k, true)).unwrap();
        for _ in 0..15 {
            let r = s.step(10.0).unwrap();
            assert_eq!(r.retries, 0);
            assert_eq!(r.stats.positivity_limited, 0);
        }
        let (e, u, v) = s.still_water_error(0.50001);
        assert!(e < 1e-15 && u < 1e-15 && v < 1e-15, "k={k}: {e:e} {u:e} {v:e}");
    }
}

#[test]
fn block_stays_at_rest_without_positivity_limiting() {
    let mut s = Simulation::new(&still(Bathymetry::CaseBBlock, 1, false)).unwrap();
    for _ in 0..15 {
        s.step(10.0).unwrap();
    }
    let (e, u, v) = s.still_water_error(0.50001);
    assert!(e < 1e-15 && u < 1e-15 && v < 1e-15, "{e:e} {u:e} {v:e}");
}

#[test]
fn modified_block_bottom_starts_with_nonnegative_means() {
    let s = Simulation::new(&still(Bathymetry::CaseBBlock, 2, true)).unwrap();
    for (m, kind) in [MeshKind::Primal, MeshKind::Dual].into_iter().enumerate() {
        let g = s.grid(kind);
        for (i, j) in g.interior() {
            assert!(s.state.u[m].comp(g.idx(i, j), 0)[0] >= 0.0);
        }
    }
}

#[test]
fn periodic_mass_is_conserved() {
    let (p, _) = solitary(40, 2, BoundarySet::periodic(), 1);
    let mut s = Simulation::new(&p).unwrap();
    let m0 = s.mass();
    for _ in 0..10 {
        s.step(100.0).unwrap();
        assert!(((s.mass() - m0) / m0).abs() < 1e-12, "{:e}", (s.mass() - m0) / m0);
    }
}

#[test]
fn plane_wave_stays_independent_of_y() {
    let bc = BoundarySet { left: Boundary::Outgoing, right: Boundary::Outgoing, ..BoundarySet::periodic() };
    let (p, _) = solitary(40, 4, bc, 2);
    let mut s = Simulation::new(&p).unwrap();
    for _ in 0..5 {
        s.step(100.0).unwrap();
    }
    let g = s.grid(MeshKind::Primal).clone();
    // y-dependent modes (0,1), (1,1), (0,2)
    for (i, j) in g.interior() {
        let c = s.state.u[0].cell(g.idx(i, j));
        for comp in 0..3 {
            for a in [2, 4, 5] {
                assert!(c[comp * 6 + a].abs() < 1e-11, "cell ({i},{j}) comp {comp} mode {a}: {}", c[comp * 6 + a]);
            }
        }
    }
    let (_, v) = s.velocity_at(3.0, 0.3).unwrap();
    assert!(v.abs() < 1e-11);
}

#[test]
fn solitary_wave_moves_at_its_speed() {
    let bc = BoundarySet { left: Boundary::Outgoing, right: Boundary::Outgoing, ..BoundarySet::periodic() };
    let (p, w) = solitary(160, 2, bc, 2);
    let mut s = Simulation::new(&p).unwrap();
    let e0 = s.l2_errors(|x, _| (w.eval(x, 0.0).0, w.eval(x, 0.0).1)).unwrap();
    s.run_until(1.0, |_, _| {}).unwrap();
    assert_eq!(s.t, 1.0);
    let e1 = s.l2_errors(|x, _| (w.eval(x, 1.0).0, w.eval(x, 1.0).1)).unwrap();
    assert!(e1.0 < 0.05 && e1.1 < 0.1, "{e0:?} {e1:?}");
    // the crest is near x = c t
    let crest = (0..200).map(|n| -1.0 + 0.05 * n as f64).fold((0.0, f64::MIN), |best, x| {
        let h = s.depth_at(x, 0.0).unwrap();
        if h > best.1 { (x, h) } else { best }
    });
    assert!((crest.0 - w.speed()).abs() < 0.3, "crest at {}", crest.0);
}

#[test]
fn final_step_lands_on_the_end_time() {
    let (mut p, _) = solitary(20, 2, BoundarySet::periodic(), 1);
    p.options.fixed_dt = Some(0.03);
    let mut s = Simulation::new(&p).unwrap();
    let mut last = None;
    s.run_until(0.1, |_, r| last = Some(*r)).unwrap();
    let r = last.unwrap();
    assert_eq!((s.steps, s.t), (4, 0.1));
    assert!((r.dt - 0.01).abs() < 1e-12);
}

#[test]
fn rejects_bad_setups() {
    let (mut p, _) = solitary(20, 2, BoundarySet::periodic(), 1);
    p.options.k = 3;
    assert!(matches!(Simulation::new(&p), Err(Error::InvalidInput(_))));
    p.options.k = 1;
    p.options.cfl = 0.0;
    assert!(matches!(Simulation::new(&p), Err(Error::InvalidInput(_))));
    p.options.cfl = 0.3;
    p.bc.left = Boundary::Inflow;
    p.bc.right = Boundary::Outgoing;
    assert!(matches!(Simulation::new(&p), Err(Error::InvalidInput(_))));
}
