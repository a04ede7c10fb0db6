use std::sync::Arc;

use ncrg::renorm::{EpsFunction, Var};
use ncrg::scalar::{matmul, rat, Rational, Scalar};
use ncrg::tensor_algebra::random::{random_interaction, rng, small_rational};
use ncrg::tensor_algebra::{
    cyclic_canonicalize, dual_word, full_symmetrize, heat_kernel, identity_matrix, star_matrix,
    Cell, CommInteraction, CyclicWord, GradedSpace, NcInteraction, Pairing, Tensor, Theory,
    Truncation,
};
use rand::seq::SliceRandom;
use rand::Rng;

fn mixed_space() -> GradedSpace {
    GradedSpace::with_degrees(&[0, 1, -1])
}

fn random_tensor(g: &mut impl Rng, dim: u8, order: usize, terms: usize) -> Tensor<Rational> {
    let mut t = Tensor::zero(order);
    for _ in 0..terms {
        let key: Vec<u8> = (0..order).map(|_| g.gen_range(0..dim)).collect();
        t.add_entry(key, small_rational(g));
    }
    t
}

fn random_permutation(g: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).collect();
    s.shuffle(g);
    s
}

#[test]
fn swapping_even_factors_has_no_sign() {
    let space = mixed_space();
    let t = Tensor::from_entries(2, [(vec![0, 0], rat(2, 1))]);
    assert_eq!(t.permute(&space, &[1, 0]).unwrap(), t);
    let t = Tensor::from_entries(2, [(vec![0, 1], rat(2, 1))]);
    assert_eq!(
        t.permute(&space, &[1, 0]).unwrap(),
        Tensor::from_entries(2, [(vec![1, 0], rat(2, 1))])
    );
}

#[test]
fn swapping_odd_factors_has_a_sign() {
    let space = mixed_space();
    let t = Tensor::from_entries(2, [(vec![1, 2], rat(1, 1))]);
    assert_eq!(
        t.permute(&space, &[1, 0]).unwrap(),
        Tensor::from_entries(2, [(vec![2, 1], rat(-1, 1))])
    );
}

#[test]
fn permute_rejects_wrong_arity() {
    let t = Tensor::from_entries(2, [(vec![0, 0], rat(1, 1))]);
    assert!(t.permute(&mixed_space(), &[0, 1, 2]).is_err());
}

#[test]
fn permutations_compose() {
    let space = mixed_space();
    let mut g = rng(3);
    for order in 1..6 {
        for _ in 0..20 {
            let t = random_tensor(&mut g, 3, order, 6);
            let s1 = random_permutation(&mut g, order);
            let s2 = random_permutation(&mut g, order);
            let composed: Vec<usize> = (0..order).map(|i| s2[s1[i]]).collect();
            let lhs = t
                .permute(&space, &s1)
                .unwrap()
                .permute(&space, &s2)
                .unwrap();
            assert_eq!(lhs, t.permute(&space, &composed).unwrap());
        }
    }
}

#[test]
fn permutation_signs_match_transposition_counts() {
    let space = mixed_space();
    let mut g = rng(4);
    for _ in 0..50 {
        let key: Vec<u8> = (0..4).map(|_| g.gen_range(0..3)).collect();
        let s = random_permutation(&mut g, 4);
        let t = Tensor::from_entries(4, [(key.clone(), rat(1, 1))]);
        let mut crossings = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if s[i] > s[j] && space.parity(key[i]) && space.parity(key[j]) {
                    crossings += 1;
                }
            }
        }
        let mut moved = vec![0u8; 4];
        for i in 0..4 {
            moved[s[i]] = key[i];
        }
        let expected = rat(if crossings % 2 == 0 { 1 } else { -1 }, 1);
        assert_eq!(t.permute(&space, &s).unwrap().get(&moved), expected);
    }
}

#[test]
fn canonical_rotations() {
    let space = mixed_space();
    assert_eq!(cyclic_canonicalize(&space, &[2]), Some((vec![2], false)));
    let (a, sa) = cyclic_canonicalize(&space, &[0, 0, 1, 0]).unwrap();
    let (b, sb) = cyclic_canonicalize(&space, &[1, 0, 0, 0]).unwrap();
    assert_eq!((a, sa), (b, sb));
    let (a, sa) = cyclic_canonicalize(&space, &[1, 2]).unwrap();
    let (b, sb) = cyclic_canonicalize(&space, &[2, 1]).unwrap();
    assert_eq!(a, b);
    assert_ne!(sa, sb);
    assert_eq!(cyclic_canonicalize(&space, &[1, 1]), None);
}

#[test]
fn cyclic_words_compare_modulo_rotation() {
    let space = mixed_space();
    let x = CyclicWord::new(Tensor::from_entries(3, [(vec![0, 1, 2], rat(1, 1))]));
    let y = CyclicWord::new(Tensor::from_entries(3, [(vec![2, 0, 1], rat(-1, 1))]));
    let z = CyclicWord::new(Tensor::from_entries(3, [(vec![2, 0, 1], rat(1, 1))]));
    assert!(x.equivalent(&y, &space));
    assert!(!x.equivalent(&z, &space));
}

#[test]
fn pairing_inverse_composes_to_identity() {
    let space = GradedSpace::with_degrees(&[0, 1, -1, 0]);
    let matrix = vec![
        vec![rat(2, 1), rat(0, 1), rat(0, 1), rat(1, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(-1, 1), rat(0, 1), rat(0, 1)],
        vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(3, 1)],
    ];
    let pairing = Pairing {
        degree: 0,
        matrix: matrix.clone(),
    };
    pairing.validate(&space).unwrap();
    assert_eq!(
        matmul(&pairing.inverse_matrix().unwrap(), &matrix),
        identity_matrix(4)
    );
    let theory = Theory::with_pairing(space, pairing).unwrap();
    let k = theory.inverse_pairing_tensor().unwrap();
    assert!(k.is_symmetric(&theory.space));
    assert_eq!(star_matrix(&theory, &k), identity_matrix(4));
}

#[test]
fn pairing_validation_errors() {
    let space = GradedSpace::with_degrees(&[0, 0]);
    let degenerate = Pairing {
        degree: 0,
        matrix: vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]],
    };
    assert!(degenerate.validate(&space).is_err());
    let skew = Pairing {
        degree: 0,
        matrix: vec![vec![rat(0, 1), rat(1, 1)], vec![rat(-1, 1), rat(0, 1)]],
    };
    assert!(skew.validate(&space).is_err());
    let wrong_degree = Pairing {
        degree: 1,
        matrix: identity_matrix(2),
    };
    assert!(wrong_degree.validate(&space).is_err());
}

#[test]
fn heat_kernel_without_hamiltonian_is_the_inverse_pairing() {
    let space = GradedSpace::with_degrees(&[0, 1, -1]);
    let matrix = vec![
        vec![rat(1, 1), rat(0, 1), rat(0, 1)],
        vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        vec![rat(0, 1), rat(-1, 1), rat(0, 1)],
    ];
    let theory = Theory::with_pairing(space, Pairing { degree: 0, matrix }).unwrap();
    let k = heat_kernel(&theory).unwrap();
    let inv = theory
        .inverse_pairing_tensor()
        .unwrap()
        .convert(EpsFunction::from_rational);
    assert_eq!(k, inv);
    assert_eq!(
        star_matrix(&theory, &k),
        identity_matrix(3)
            .iter()
            .map(|r| r.iter().map(EpsFunction::from_rational).collect())
            .collect::<Vec<Vec<_>>>()
    );
}

#[test]
fn heat_kernel_of_a_diagonal_hamiltonian() {
    let space = GradedSpace::with_degrees(&[0, 0]);
    let h = vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]];
    let theory = Theory::new(
        space,
        Pairing {
            degree: 0,
            matrix: identity_matrix(2),
        },
        h,
        None,
    )
    .unwrap();
    let k = heat_kernel(&theory).unwrap();
    assert_eq!(k.get(&[0, 0]), EpsFunction::parse("exp(-2*t)").unwrap());
    assert_eq!(k.get(&[1, 1]), EpsFunction::parse("exp(-1/2*t)").unwrap());
    assert!(k.get(&[0, 1]).is_zero());
    let at_zero: Vec<Vec<Rational>> = star_matrix(&theory, &k)
        .iter()
        .map(|r| {
            r.iter()
                .map(|f| {
                    f.substitute(Var::T, &rat(0, 1))
                        .unwrap()
                        .as_constant()
                        .unwrap()
                })
                .collect()
        })
        .collect();
    assert_eq!(at_zero, identity_matrix(2));
}

#[test]
fn non_self_adjoint_hamiltonians_are_rejected() {
    let space = GradedSpace::with_degrees(&[0, 0]);
    let h = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)]];
    assert!(Theory::new(
        space,
        Pairing {
            degree: 0,
            matrix: identity_matrix(2)
        },
        h,
        None
    )
    .is_err());
}

#[test]
fn heat_kernel_for_an_odd_pairing() {
    let space = GradedSpace::with_degrees(&[0, 1]);
    let pairing = Pairing {
        degree: -1,
        matrix: vec![vec![rat(0, 1), rat(1, 1)], vec![rat(-1, 1), rat(0, 1)]],
    };
    let h = vec![vec![rat(3, 1), rat(0, 1)], vec![rat(0, 1), rat(3, 1)]];
    let theory = Theory::new(space, pairing, h, None).unwrap();
    let k = heat_kernel(&theory).unwrap();
    let at = |q: Rational| -> Vec<Vec<Rational>> {
        star_matrix(&theory, &k)
            .iter()
            .map(|r| {
                r.iter()
                    .map(|f| f.substitute(Var::T, &q).unwrap().as_constant().unwrap())
                    .collect()
            })
            .collect()
    };
    assert_eq!(at(rat(0, 1)), identity_matrix(2));
    let m = star_matrix(&theory, &k);
    assert!(m[0][1].is_zero() && m[1][0].is_zero());
    assert_eq!(m[0][0], EpsFunction::parse("exp(-3*t)").unwrap());
}

#[test]
fn interaction_equality_is_independent_of_representatives() {
    let space = Arc::new(mixed_space());
    let trunc = Truncation::new(1, 3);
    let cell = Cell::new(0, 0, 1, 3);
    let x = dual_word(&space, &[0, 1, 2], rat(1, 1));
    let mut a = NcInteraction::new(space.clone(), trunc);
    a.add_representative(cell, &[3], &x);
    let mut b = NcInteraction::new(space.clone(), trunc);
    b.add_representative(cell, &[3], &x.permute(&space, &[1, 2, 0]).unwrap());
    assert_eq!(a, b);
    let mut c = NcInteraction::new(space.clone(), trunc);
    c.add_representative(cell, &[3], &x.scale(&rat(1, 2)));
    c.add_representative(
        cell,
        &[3],
        &x.permute(&space, &[2, 0, 1]).unwrap().scale(&rat(1, 2)),
    );
    assert_eq!(a, c);
    let mut d = NcInteraction::new(space, trunc);
    d.add_word(cell, &[3], rat(1, 1), &[0, 1, 2]);
    assert_eq!(a, d);
}

#[test]
fn interactions_validate_degree_and_admissibility() {
    let space = Arc::new(mixed_space());
    let trunc = Truncation::new(1, 3);
    let mut i = NcInteraction::new(space.clone(), trunc);
    i.add_word(Cell::new(0, 0, 1, 3), &[3], rat(1, 1), &[0, 0, 0]);
    i.validate().unwrap();
    i.add_word(Cell::new(0, 0, 1, 3), &[3], rat(1, 1), &[0, 0, 1]);
    assert!(i.validate().is_err());
    assert!(!Cell::new(0, 0, 1, 2).is_admissible());
    assert!(!Cell::new(1, 0, 0, 0).is_admissible());
    assert!(!Cell::new(0, 2, 0, 0).is_admissible());
    assert!(Cell::new(0, 3, 0, 0).is_admissible());
    assert!(!trunc.contains(&Cell::new(0, 0, 1, 2)));
}

#[test]
fn random_interactions_are_valid() {
    let space = Arc::new(mixed_space());
    let mut g = rng(8);
    for _ in 0..10 {
        random_interaction(&mut g, &space, Truncation::new(2, 4), 8, |_| true)
            .validate()
            .unwrap();
    }
}

#[test]
fn commutative_interactions_symmetrize() {
    let space = Arc::new(mixed_space());
    let mut i = CommInteraction::new(space.clone(), Truncation::new(1, 3));
    i.add_representative(0, 3, &Tensor::from_entries(3, [(vec![0, 1, 2], rat(1, 1))]));
    let t = i.get(0, 3).unwrap();
    assert_eq!(t.get(&[0, 1, 2]), rat(1, 1));
    assert_eq!(t.get(&[0, 2, 1]), rat(-1, 1));
    assert_eq!(t.get(&[2, 1, 0]), rat(-1, 1));
    assert_eq!(t.nnz(), 6);
    assert_eq!(&full_symmetrize(&space, t), &t.scale(&rat(6, 1)));
    i.validate().unwrap();
}

#[test]
fn odd_words_vanish_in_symmetric_powers() {
    let space = mixed_space();
    let t = Tensor::from_entries(2, [(vec![1, 1], rat(1, 1))]);
    assert!(full_symmetrize(&space, &t).is_zero());
}
