use linkage_core::geom::{
    angles, config_cross_ratio, cross_ratio, signed_area, uniformizer, ConfigKind,
};
use linkage_core::{Complex64, ExtendedComplex, LinkageError, PlanarConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Exact complex arithmetic over the rationals.
#[derive(Clone, Debug, PartialEq)]
struct QC(BigRational, BigRational);

impl QC {
    fn int(re: i64, im: i64) -> Self {
        QC(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }
    fn sub(&self, o: &QC) -> QC {
        QC(&self.0 - &o.0, &self.1 - &o.1)
    }
    fn mul(&self, o: &QC) -> QC {
        QC(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn div(&self, o: &QC) -> QC {
        let n = &o.0 * &o.0 + &o.1 * &o.1;
        let num = self.mul(&QC(o.0.clone(), -o.1.clone()));
        QC(num.0 / &n, num.1 / n)
    }
    fn to_f64(&self) -> Complex64 {
        use num_traits::ToPrimitive;
        Complex64::new(self.0.to_f64().unwrap(), self.1.to_f64().unwrap())
    }
}

fn exact_cross_ratio(p: &QC, q: &QC, z: &QC, w: &QC) -> QC {
    z.sub(p).mul(&w.sub(q)).div(&z.sub(q).mul(&w.sub(p)))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn unit_square_against_rational_oracle() {
    let pts = [QC::int(0, 0), QC::int(1, 0), QC::int(1, 1), QC::int(0, 1)];
    let exact = exact_cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]);
    assert_eq!(exact, QC::int(2, 0));
    let got = cross_ratio(c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)).unwrap();
    assert_eq!(got, ExtendedComplex::Finite(c(2.0, 0.0)));
}

#[test]
fn special_values() {
    let z = |re| c(re, 0.0);
    assert_eq!(
        cross_ratio(z(0.), z(1.), z(0.), z(5.)).unwrap(),
        ExtendedComplex::Finite(c(0.0, 0.0))
    );
    assert_eq!(
        cross_ratio(z(0.), z(1.), z(1.), z(5.)).unwrap(),
        ExtendedComplex::Infinity
    );
    assert_eq!(
        cross_ratio(z(0.), z(1.), z(3.), z(3.)).unwrap(),
        ExtendedComplex::Finite(c(1.0, 0.0))
    );
    assert_eq!(
        cross_ratio(z(2.), z(2.), z(2.), z(5.)),
        Err(LinkageError::ThreePointsCoincide)
    );
}

#[test]
fn angles_and_area_of_squares() {
    let ccw = PlanarConfig::new([c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)], ConfigKind::Closed)
        .unwrap();
    assert!((signed_area(&ccw) - 1.0).abs() < 1e-15);
    let a = angles(&ccw).unwrap();
    assert!((a.alpha - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    let cw = ccw.conjugate();
    assert!((signed_area(&cw) + 1.0).abs() < 1e-15);
    let a = angles(&cw).unwrap();
    assert!((a.alpha - 0.5 * std::f64::consts::PI).abs() < 1e-15);
}

fn gaussian() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, -20i64..=20)
}

fn point() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| c(x, y))
}

fn well_separated(pts: &[Complex64]) -> bool {
    (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| (pts[i] - pts[j]).norm() > 0.5))
}

proptest! {
    #[test]
    fn matches_rational_oracle(ps in prop::array::uniform4(gaussian())) {
        let q: Vec<QC> = ps.iter().map(|&(x, y)| QC::int(x, y)).collect();
        prop_assume!((0..4).all(|i| (i + 1..4).all(|j| q[i] != q[j])));
        let exact = exact_cross_ratio(&q[0], &q[1], &q[2], &q[3]).to_f64();
        let f: Vec<Complex64> = ps.iter().map(|&(x, y)| c(x as f64, y as f64)).collect();
        let got = cross_ratio(f[0], f[1], f[2], f[3]).unwrap().finite().unwrap();
        prop_assert!((got - exact).norm() <= 1e-12 * exact.norm().max(1.0));
    }

    #[test]
    fn affine_invariance(
        pts in prop::array::uniform4(point()),
        a in point(),
        b in point(),
    ) {
        prop_assume!(well_separated(&pts) && a.norm() > 0.1);
        let v = PlanarConfig::new(pts, ConfigKind::Closed).unwrap();
        let w = v.affine(a, b).unwrap();
        let r1 = config_cross_ratio(&v).unwrap().finite().unwrap();
        let r2 = config_cross_ratio(&w).unwrap().finite().unwrap();
        prop_assert!((r1 - r2).norm() <= 1e-10 * r1.norm().max(1.0));
    }

    #[test]
    fn cross_ratio_plus_uniformizer_is_one(pts in prop::array::uniform4(point())) {
        prop_assume!(well_separated(&pts));
        let v = PlanarConfig::new(pts, ConfigKind::Closed).unwrap();
        let cr = config_cross_ratio(&v).unwrap().finite().unwrap();
        let r = uniformizer(&v).unwrap().finite().unwrap();
        prop_assert!((cr + r - 1.0).norm() <= 1e-12 * (cr.norm() + r.norm()).max(1.0));
    }

    #[test]
    fn concyclic_points_have_real_cross_ratio(
        center in point(),
        radius in 0.5f64..5.0,
        mut thetas in prop::array::uniform4(0.0f64..std::f64::consts::TAU),
    ) {
        thetas.sort_by(f64::total_cmp);
        prop_assume!(thetas.windows(2).all(|w| w[1] - w[0] > 0.1));
        let pts = thetas.map(|t| center + Complex64::from_polar(radius, t));
        let cr = cross_ratio(pts[0], pts[1], pts[2], pts[3]).unwrap().finite().unwrap();
        prop_assert!(cr.im.abs() <= 1e-9 * cr.norm().max(1.0));
    }

    #[test]
    fn conjugation_conjugates(pts in prop::array::uniform4(point())) {
        prop_assume!(well_separated(&pts));
        let v = PlanarConfig::new(pts, ConfigKind::Closed).unwrap();
        let r = uniformizer(&v).unwrap().finite().unwrap();
        let rc = uniformizer(&v.conjugate()).unwrap().finite().unwrap();
        prop_assert!((r.conj() - rc).norm() <= 1e-12 * r.norm().max(1.0));
        prop_assert!((signed_area(&v) + signed_area(&v.conjugate())).abs() < 1e-9);
    }
}

#[test]
fn big_integer_oracle_sanity() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let z = QC(half.clone(), half);
    assert_eq!(z.mul(&QC::int(2, 0)), QC::int(1, 1));
}
