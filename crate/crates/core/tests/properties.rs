use lppiep::generate::{self, GeneratedProblem, RandomParams};
use lppiep::linalg::powers;
use lppiep::{
    analyze, assemble, decode, encode, residual, EigenpairInput, MonicPolynomial, StructureBasis, StructureKind,
    ToleranceConfig,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = StructureKind> {
    proptest::sample::select(StructureKind::BUILT_IN.to_vec())
}

fn order_for(kind: StructureKind, n: usize) -> usize {
    n.max(kind.min_order())
}

/// Random problem with `m` columns, or the nearest fillable budget: `m + 1`
/// covers an odd count over a spectrum without real eigenvalues, smaller
/// budgets cover excluded multiple roots.
fn random_problem(structure: StructureKind, n: usize, degree: usize, m: usize, seed: u64) -> GeneratedProblem {
    std::iter::once(m)
        .chain((m < degree * n).then_some(m + 1))
        .chain((1..m).rev())
        .find_map(|m| generate::random(RandomParams { structure, n, degree, m, seed }).ok())
        .expect("some budget is fillable")
}

/// `U` written out with explicit Kronecker products.
fn dense_u(x: &DMatrix<f64>, e: &DMatrix<f64>, p: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = x.nrows();
    let r = p.ncols();
    let pows = powers(e, k);
    let mut u = DMatrix::zeros(n * x.ncols(), k * r);
    for block in 0..k {
        let xe = x * &pows[k - 1 - block];
        let kron = xe.transpose().kronecker(&DMatrix::<f64>::identity(n, n));
        u.view_mut((0, block * r), (n * x.ncols(), r)).copy_from(&(kron * p));
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coords_round_trip(kind in kind(), n in 1usize..7, seed in any::<u64>()) {
        let n = order_for(kind, n);
        let basis = StructureBasis::build(kind, n).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let c = DVector::from_fn(basis.r(), |_, _| rand::Rng::gen_range(&mut rng, -5.0..5.0));
        let a = basis.realize(&c).unwrap();
        let back = basis.coords_of(a.dense()).unwrap();
        prop_assert!((&back - &c).amax() <= 1e-12 * c.amax().max(1.0));
        let v = lppiep::vec(a.dense());
        prop_assert!((basis.p() * &c - v).amax() <= 1e-14 * c.amax().max(1.0));
        prop_assert_eq!(basis.r(), kind.dimension(n).unwrap());
    }

    #[test]
    fn assembly_matches_kronecker_form(kind in kind(), n in 1usize..5, k in 1usize..4, seed in any::<u64>()) {
        let n = order_for(kind, n);
        let problem = random_problem(kind, n, k, n, seed);
        let ep = encode(&problem.eigenpairs, n).unwrap();
        let basis = StructureBasis::build(kind, n).unwrap();
        let sys = assemble(&ep, &basis, k).unwrap();
        let oracle = dense_u(ep.x(), ep.e(), basis.p(), k);
        let scale = oracle.amax().max(1.0);
        prop_assert!((sys.u() - &oracle).amax() <= 1e-12 * scale);
        let xek = ep.x() * &powers(ep.e(), k)[k];
        prop_assert!((sys.b() + lppiep::vec(&xek)).amax() <= 1e-12 * scale);
    }

    #[test]
    fn real_form_residual_equals_complex_residual(
        n in 1usize..5, k in 1usize..4, seed in any::<u64>(),
        re in -3.0f64..3.0, im in 0.1f64..3.0,
        zr in proptest::collection::vec(-1.0f64..1.0, 4), zi in proptest::collection::vec(-1.0f64..1.0, 4),
    ) {
        let basis = StructureBasis::build(StructureKind::Full, n).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let poly = generate::random_polynomial(&basis, k, &mut rng).unwrap();
        prop_assume!(zr[..n].iter().chain(&zi[..n]).any(|v| v.abs() > 1e-3));
        let pair = EigenpairInput::complex(re, im, &zr[..n], &zi[..n]);
        let ep = encode(std::slice::from_ref(&pair), n).unwrap();
        let rep = residual(&poly, &ep).unwrap();
        let lambda = Complex64::new(re, im);
        let direct = (poly.eval(lambda) * &pair.vector).norm();
        prop_assert!((rep.per_pair[0] - direct).abs() <= 1e-10 * direct.max(1.0));
    }

    #[test]
    fn encode_decode_round_trip(n in 1usize..6, k in 1usize..4, seed in any::<u64>()) {
        let problem = random_problem(StructureKind::Full, n, k, n, seed);
        let ep = encode(&problem.eigenpairs, n).unwrap();
        let back = decode(&ep).unwrap();
        prop_assert_eq!(back.len(), problem.eigenpairs.len());
        for pair in &back {
            let original = problem.eigenpairs.iter().find(|p| p.lambda == pair.lambda).unwrap();
            prop_assert!((&original.vector - &pair.vector).norm() <= 1e-15);
        }
        prop_assert_eq!(encode(&back, n).unwrap(), ep);
    }

    #[test]
    fn companion_pairs_satisfy_the_polynomial(kind in kind(), n in 1usize..6, k in 1usize..4, seed in any::<u64>()) {
        let n = order_for(kind, n);
        let basis = StructureBasis::build(kind, n).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let poly = generate::random_polynomial(&basis, k, &mut rng).unwrap();
        let values = lppiep::verify::companion_eigenvalues(&poly).unwrap();
        prop_assert_eq!(values.len(), k * n);
        let pairs = lppiep::companion_eigs(&poly).unwrap();
        for p in &pairs {
            // multiple roots are only accurate to about sqrt(eps)
            let near = values.iter().filter(|v| (*v - p.lambda).norm() < 1e-4 * (1.0 + p.lambda.norm())).count();
            if near > 1 {
                continue;
            }
            let r = (poly.eval(p.lambda) * &p.vector).norm();
            prop_assert!(r <= 1e-8 * (1.0 + p.lambda.norm()).powi(k as i32), "{} at {}", r, p.lambda);
            prop_assert!((p.vector.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn family_members_are_structured_solutions(kind in kind(), n in 2usize..5, k in 1usize..3, seed in any::<u64>()) {
        let n = order_for(kind, n);
        let problem = random_problem(kind, n, k, 2, seed);
        let ep = encode(&problem.eigenpairs, n).unwrap();
        let basis = StructureBasis::build(kind, n).unwrap();
        let sys = assemble(&ep, &basis, k).unwrap();
        let fam = analyze(&sys, &ToleranceConfig::default()).unwrap();
        prop_assert!(fam.consistent());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed ^ 0x5a5a);
        let y = DVector::from_fn(sys.unknowns(), |_, _| rand::Rng::gen_range(&mut rng, -1.0..1.0));
        let x = fam.member(&y).unwrap();
        prop_assert!(fam.x0().norm() <= x.norm() + 1e-12);
        let r = basis.r();
        let coeffs = (0..k)
            .map(|i| basis.realize(&lppiep::extract_coefficient(&x, i, k, r).unwrap()).unwrap())
            .collect::<Vec<_>>();
        for a in &coeffs {
            prop_assert!(basis.contains(a.dense(), 1e-10 * a.dense().norm().max(1.0)));
        }
        let poly = MonicPolynomial::from_structured(coeffs).unwrap();
        prop_assert!(residual(&poly, &ep).unwrap().relative <= 1e-8);
    }
}
