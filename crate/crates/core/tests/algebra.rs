mod common;

use common::q;
use conic_core::liealg::{
    abelian_ideal_2d, classify_algebra, classify_with_complement, known, AlgebraTag, StructureConstants,
};
use conic_core::linalg::det3;
use conic_core::Rational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};

fn random_invertible(rng: &mut impl Rng) -> [[Rational; 3]; 3] {
    loop {
        let m: [[Rational; 3]; 3] =
            core::array::from_fn(|_| core::array::from_fn(|_| q(rng.gen_range(-3..=3))));
        if !det3(&m).is_zero() {
            return m;
        }
    }
}

#[test]
fn eigenvalue_data_of_the_three_algebras() {
    let e = classify_algebra(&known::elliptic());
    let data = e.eigen.as_ref().unwrap();
    assert_eq!(e.tag, AlgebraTag::EllipticE2);
    assert!(data.trace.is_zero() && data.det > q(0));

    let h = classify_algebra(&known::hyperbolic());
    let data = h.eigen.as_ref().unwrap();
    assert_eq!(h.tag, AlgebraTag::HyperbolicP11);
    assert!(data.trace.is_zero() && data.det < q(0));

    let p = classify_algebra(&known::parabolic());
    let data = p.eigen.as_ref().unwrap();
    assert_eq!(p.tag, AlgebraTag::ParabolicL322);
    assert_eq!(&data.trace * &data.trace * q(2), &data.det * q(9));

    assert_eq!(classify_algebra(&known::heisenberg()).tag, AlgebraTag::Other);
    assert_eq!(classify_algebra(&StructureConstants::abelian()).tag, AlgebraTag::Other);
}

#[test]
fn classification_ignores_basis_and_complement() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let cases = [
        (known::elliptic(), AlgebraTag::EllipticE2),
        (known::hyperbolic(), AlgebraTag::HyperbolicP11),
        (known::parabolic(), AlgebraTag::ParabolicL322),
    ];
    for (sc, tag) in cases {
        for _ in 0..100 {
            let m = random_invertible(&mut rng);
            let moved = sc.change_basis(&m).unwrap();
            assert!(moved.satisfies_jacobi());
            assert_eq!(classify_algebra(&moved).tag, tag);
            // Any element outside the ideal works as the complement.
            let ideal = abelian_ideal_2d(&moved).unwrap();
            let ell: [Rational; 3] = loop {
                let v = core::array::from_fn(|_| q(rng.gen_range(-3..=3)));
                let stacked = [ideal[0].clone(), ideal[1].clone(), v.clone()];
                if !det3(&stacked).is_zero() {
                    break v;
                }
            };
            assert_eq!(classify_with_complement(&moved, &ideal, &ell).tag, tag);
        }
    }
}
