use cuspgamma::characters::{enumerate_regular_orbits, AddChar, MultChar};
use cuspgamma::cuspidal::{BesselFunction, CuspidalSpec};
use cuspgamma::gamma_finite::{gamma_bessel, gamma_bessel_cached, gamma_closed, TauParam};
use cuspgamma::gamma_local::{bridge_from_finite, gamma_local_bridge, gamma_local_closed, verify_chain};
use cuspgamma::gln::{MatFq, DEFAULT_ENUM_LIMIT};
use cuspgamma::level_zero::{pair_to_rep, TamePair};
use cuspgamma::{FieldTower, TowerOptions};
use num_complex::Complex64;

#[test]
fn cached_tower_matches_fresh_build() {
    let dir = tempfile::tempdir().unwrap();
    let opts = TowerOptions::default();
    let fresh = FieldTower::build(3, 1, 4, &opts).unwrap();
    let first = FieldTower::build_cached(3, 1, 4, &opts, Some(dir.path())).unwrap();
    let second = FieldTower::build_cached(3, 1, 4, &opts, Some(dir.path())).unwrap();
    assert!(dir.path().join(FieldTower::cache_file_name(3, 1, 4)).exists());
    for t in [&first, &second] {
        assert_eq!(t.modulus(), fresh.modulus());
        assert_eq!(t.zech_table(), fresh.zech_table());
    }
}

#[test]
fn cached_bessel_sums_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let tower = FieldTower::for_q(2, 12, &TowerOptions::default()).unwrap();
    let psi = AddChar::standard(&tower);
    for orbit in enumerate_regular_orbits(2, 4) {
        let pi = CuspidalSpec::new(orbit).unwrap();
        let tau = TauParam::Cusp(CuspidalSpec::from_exponent(2, 3, 1).unwrap());
        let plain = gamma_bessel(&tower, &pi, &tau, &psi, DEFAULT_ENUM_LIMIT).unwrap();
        let cold = gamma_bessel_cached(&tower, &pi, &tau, &psi, DEFAULT_ENUM_LIMIT, Some(dir.path())).unwrap();
        let warm = gamma_bessel_cached(&tower, &pi, &tau, &psi, DEFAULT_ENUM_LIMIT, Some(dir.path())).unwrap();
        assert_eq!(plain.value.re.to_bits(), warm.value.re.to_bits());
        assert_eq!(plain.value.im.to_bits(), warm.value.im.to_bits());
        assert_eq!(cold, warm);
        let closed = gamma_closed(&tower, &pi, &tau, &psi).unwrap();
        assert!((closed.value - warm.value).norm() < 1e-9);
    }
}

#[test]
fn loaded_bessel_function_answers_from_memo() {
    let dir = tempfile::tempdir().unwrap();
    let tower = FieldTower::for_q(3, 3, &TowerOptions::default()).unwrap();
    let psi = AddChar::standard(&tower);
    let spec = CuspidalSpec::from_exponent(3, 3, 1).unwrap();
    let j = BesselFunction::new(&tower, spec.clone(), psi, DEFAULT_ENUM_LIMIT).unwrap();
    let g = MatFq::from_ints(&tower, 3, &[0, 0, 1, 0, 1, 0, 2, 0, 0]).unwrap();
    let v = j.value(&g).unwrap();
    j.save_to_dir(dir.path()).unwrap();

    let k = BesselFunction::new(&tower, spec, psi, DEFAULT_ENUM_LIMIT).unwrap();
    assert!(k.load_from_dir(dir.path()).unwrap());
    assert_eq!(k.memo_len(), j.memo_len());
    assert_eq!(k.value(&g).unwrap(), v);

    let other = BesselFunction::new(
        &tower,
        CuspidalSpec::from_exponent(3, 3, 2).unwrap(),
        psi,
        DEFAULT_ENUM_LIMIT,
    )
    .unwrap();
    assert!(!other.load_from_dir(dir.path()).unwrap());
}

#[test]
fn local_gamma_by_every_route() {
    let tower = FieldTower::for_q(3, 2, &TowerOptions::default()).unwrap();
    let psi = AddChar::standard(&tower);
    let scalar = Complex64::from_polar(1.0, 1.1);
    for orbit in enumerate_regular_orbits(3, 2) {
        let t_pi = TamePair::new(scalar, orbit).unwrap();
        for k in 0..2 {
            let t_tau = TamePair::new(Complex64::new(-1.0, 0.0), MultChar::new(3, 1, k).orbit()).unwrap();
            let (pi, tau) = (pair_to_rep(&t_pi).unwrap(), pair_to_rep(&t_tau).unwrap());
            let closed = gamma_local_closed(&tower, &pi, &tau, &psi).unwrap();
            let bridge = gamma_local_bridge(
                &tower,
                &pi,
                &tau,
                &psi,
                cuspgamma::gamma_finite::FiniteMethod::BesselSum,
                DEFAULT_ENUM_LIMIT,
            )
            .unwrap();
            let fin = gamma_closed(&tower, pi.cusp(), &TauParam::Char(tau.cusp().parameter()), &psi).unwrap();
            let manual = bridge_from_finite(&tower, &pi, &tau, &psi, &fin).unwrap();
            let chain = verify_chain(&tower, &t_pi, &t_tau, &psi, 1 << 20, 1e-9).unwrap();
            assert!(chain.passed);
            for v in [bridge.value, manual.value, chain.chain_value] {
                assert!((v - closed.value).norm() < 1e-9);
            }
            assert!(closed.modulus_error() < 1e-12);
        }
    }
}
