use std::sync::Arc;

use ncrg::feynman::graph_cell;
use ncrg::graph_enum::enumerate_profile_capped;
use ncrg::rgflow::{check_propagator, flow_comm, flow_nc};
use ncrg::scalar::{rat, Rational, Scalar};
use ncrg::tensor_algebra::random::{random_interaction, random_propagator, rng};
use ncrg::tensor_algebra::{
    aut_group, cyclic_symmetrize, heat_kernel, identity_matrix, partitions, Cell, GradedSpace,
    NcInteraction, Pairing, Tensor, Theory, Truncation,
};
use ncrg::transforms::{
    cell_space_basis, cs_interaction, cs_theory, demo_cs, glued_map, joint_image_rank, lqt_images,
    lqt_vanishing_check, morita, morita_component, otft_map, sigma, tensor_propagator,
    tensor_space, tensor_theory, xi_elements, FrobeniusAlgebra,
};
use rand::Rng;

fn scalar_multiple(alg: &FrobeniusAlgebra, q: Rational) -> Vec<Rational> {
    alg.unit().iter().map(|u| u * &q).collect()
}

/// `N^b` times the product of traces over consecutive blocks, by enumerating closed index walks.
fn trace_products(n: usize, b: u32, r: &[u32]) -> Tensor<Rational> {
    let mut out = Tensor::zero(r.iter().sum::<u32>() as usize);
    let mut walks: Vec<Vec<u8>> = vec![Vec::new()];
    for &len in r {
        let len = len as usize;
        let mut next = Vec::new();
        for prefix in &walks {
            let mut idx = vec![0usize; len];
            loop {
                let mut key = prefix.clone();
                for t in 0..len {
                    key.push((idx[t] * n + idx[(t + 1) % len]) as u8);
                }
                next.push(key);
                let mut p = 0;
                while p < len {
                    idx[p] += 1;
                    if idx[p] < n {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == len {
                    break;
                }
            }
        }
        walks = next;
    }
    let coefficient = Rational::from_integer((n as i64).pow(b).into());
    for w in walks {
        out.add_entry(w, coefficient.clone());
    }
    out
}

fn all_profiles(max_letters: u32) -> Vec<Vec<u32>> {
    (1..=max_letters)
        .flat_map(|l| (1..=l).flat_map(move |k| partitions(l, k)))
        .collect()
}

#[test]
fn xi_elements_of_matrix_algebras() {
    let m2 = FrobeniusAlgebra::matrix(2);
    let (xb, xg) = xi_elements(&m2).unwrap();
    assert_eq!(xb, scalar_multiple(&m2, rat(2, 1)));
    assert_eq!(xg, m2.unit().clone());
    for n in 1..=3 {
        let m = FrobeniusAlgebra::matrix(n);
        let (xb, xg) = xi_elements(&m).unwrap();
        assert_eq!(xb, scalar_multiple(&m, rat(n as i64, 1)));
        assert_eq!(xg, m.unit().clone());
    }
}

#[test]
fn xi_elements_of_small_algebras() {
    let k = FrobeniusAlgebra::trivial();
    assert_eq!(xi_elements(&k).unwrap(), (vec![rat(1, 1)], vec![rat(1, 1)]));
    // On K[x]/x^2 with Tr(x) = 1 the dual basis of (1, x) is (x, 1).
    let d = FrobeniusAlgebra::dual_numbers();
    assert_eq!(
        xi_elements(&d).unwrap(),
        (vec![rat(0, 1), rat(2, 1)], vec![rat(0, 1), rat(0, 1)])
    );
}

#[test]
fn invalid_algebras_are_rejected() {
    let space = GradedSpace::new(vec!["1".into(), "x".into()], vec![0, 0]);
    let z = rat(0, 1);
    let o = rat(1, 1);
    let mult = vec![
        vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
    ];
    let degenerate = FrobeniusAlgebra::new(
        "bad",
        space.clone(),
        mult.clone(),
        vec![o.clone(), z.clone()],
        vec![o.clone(), z.clone()],
    );
    assert!(degenerate.is_err());
    let no_unit = FrobeniusAlgebra::new("bad", space, mult, vec![z.clone(), o.clone()], vec![z, o]);
    assert!(no_unit.is_err());
    assert!(FrobeniusAlgebra::by_name("mat0").is_err());
    assert_eq!(
        FrobeniusAlgebra::by_name("mat2").unwrap(),
        FrobeniusAlgebra::matrix(2)
    );
}

#[test]
fn inverse_pairing_reproduces_elements() {
    for alg in [
        FrobeniusAlgebra::matrix(2),
        FrobeniusAlgebra::dual_numbers(),
    ] {
        let inv = alg.inverse_pairing();
        assert!(inv.is_symmetric(alg.space()));
        for a in 0..alg.dim() {
            let ea = alg.basis(a);
            let mut sum = vec![rat(0, 1); alg.dim()];
            for i in 0..alg.dim() {
                let c = alg.tr(&alg.mul(&ea, &alg.basis(i)));
                for (s, y) in sum.iter_mut().zip(alg.dual_element(i)) {
                    *s += &c * y;
                }
            }
            assert_eq!(sum, ea);
        }
    }
}

#[test]
fn two_point_map_on_m2_is_a_product_of_traces() {
    let m2 = FrobeniusAlgebra::matrix(2);
    let t = otft_map(&m2, 0, 0, &[1, 1]);
    let diag = [0u8, 3];
    let expected = Tensor::from_entries(
        2,
        diag.iter()
            .flat_map(|&a| diag.iter().map(move |&b| (vec![a, b], rat(1, 1)))),
    );
    assert_eq!(t, expected);
}

#[test]
fn matrix_formula_for_small_surfaces() {
    for n in [2usize, 3] {
        let alg = FrobeniusAlgebra::matrix(n);
        for r in all_profiles(6) {
            for g in 0..=2 {
                for b in 0..=2 {
                    assert_eq!(
                        otft_map(&alg, g, b, &r),
                        trace_products(n, b, &r),
                        "N={n} g={g} b={b} r={r:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn vacuum_maps_on_matrix_algebras() {
    let m3 = FrobeniusAlgebra::matrix(3);
    for b in 1..=3u32 {
        assert_eq!(
            otft_map(&m3, 1, b, &[]),
            Tensor::scalar(rat(3i64.pow(b), 1))
        );
    }
    assert!(otft_map(&m3, 0, 0, &[]).is_zero());
}

#[test]
fn symmetry_relations() {
    let algebras = [
        FrobeniusAlgebra::matrix(2),
        FrobeniusAlgebra::matrix(3),
        FrobeniusAlgebra::dual_numbers(),
    ];
    for alg in &algebras {
        let max = if alg.dim() > 4 { 4 } else { 5 };
        for r in all_profiles(max) {
            for (g, b) in [(0, 0), (1, 0), (0, 1), (1, 2)] {
                let t = otft_map(alg, g, b, &r);
                for s in aut_group(&r) {
                    assert_eq!(
                        t.permute(alg.space(), &s).unwrap(),
                        t,
                        "{} r={r:?}",
                        alg.name()
                    );
                }
                // Reversing the order of the blocks carries C_r to C_r'.
                let rev: Vec<u32> = r.iter().rev().copied().collect();
                let mut starts = vec![0usize];
                for &x in &r {
                    starts.push(starts.last().unwrap() + x as usize);
                }
                let l = *starts.last().unwrap();
                let mut s = vec![0usize; l];
                for (blk, &len) in r.iter().enumerate() {
                    let new_start: usize = r[blk + 1..].iter().map(|&x| x as usize).sum();
                    for t in 0..len as usize {
                        s[starts[blk] + t] = new_start + t;
                    }
                }
                assert_eq!(
                    t.permute(alg.space(), &s).unwrap(),
                    otft_map(alg, g, b, &rev)
                );
            }
        }
    }
}

#[test]
fn gluing_axiom_on_small_graphs() {
    for alg in [
        FrobeniusAlgebra::matrix(2),
        FrobeniusAlgebra::dual_numbers(),
    ] {
        let mut checked = 0;
        for l in 0..=4u32 {
            for g in 0..=1u32 {
                for b in 0..=3u32 {
                    for k in 0..=l {
                        let n = 2 * g + b + k;
                        if n == 0 || n > 3 || !Cell::new(g, b, k, l).is_admissible() {
                            continue;
                        }
                        for r in partitions(l, k) {
                            for c in enumerate_profile_capped(g, b, &r, l as usize + 6) {
                                if c.graph.num_edges() > 3 {
                                    continue;
                                }
                                let (cell, r2, f) = glued_map(&c.graph, &alg).unwrap();
                                assert_eq!((cell, &r2), (Cell::new(g, b, k, l), &r));
                                assert_eq!(
                                    f,
                                    otft_map(&alg, g, b, &r),
                                    "{} graph {:?}",
                                    alg.name(),
                                    c.graph
                                );
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 200, "only {checked} graphs checked");
    }
}

#[test]
fn sigma_places_words_by_loop_number() {
    let space = Arc::new(GradedSpace::with_degrees(&[0]));
    let mut i = NcInteraction::new(space.clone(), Truncation::new(2, 4));
    i.add_word(Cell::new(0, 0, 1, 3), &[3], rat(1, 1), &[0, 0, 0]);
    i.add_word(Cell::new(0, 0, 2, 3), &[1, 2], rat(1, 1), &[0, 0, 0]);
    i.add_word(Cell::new(1, 0, 1, 1), &[1], rat(1, 1), &[0]);
    let s = sigma(&i);
    let cells: Vec<(u32, u32)> = s.cells().map(|(c, _)| *c).collect();
    assert_eq!(cells, vec![(0, 3), (1, 3), (2, 1)]);
    for (&(_, j), t) in s.cells() {
        assert_eq!(t.order(), j as usize);
    }
}

#[test]
fn sigma_intertwines_the_flows() {
    for (seed, degrees) in [(3u64, vec![0, 0]), (4, vec![0, 1, -1])] {
        let space = Arc::new(GradedSpace::with_degrees(&degrees));
        let mut r = rng(seed);
        let trunc = Truncation::new(1, 4);
        let i = random_interaction(&mut r, &space, trunc, 8, |_| true);
        let p = random_propagator(&mut r, &space, 0.8);
        let lhs = sigma(&flow_nc(&i, &p).unwrap());
        let rhs = flow_comm(&sigma(&i), &p).unwrap();
        assert_eq!(lhs, rhs, "seed {seed}");
    }
}

fn two_dim_theory() -> Theory {
    let space = GradedSpace::with_degrees(&[0, 0]);
    let pairing = Pairing {
        degree: 0,
        matrix: identity_matrix(2),
    };
    let h = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(3, 1)]];
    Theory::new(space, pairing, h, None).unwrap()
}

#[test]
fn trivial_algebra_leaves_theories_unchanged() {
    let e = two_dim_theory();
    let t = tensor_theory(&e, &FrobeniusAlgebra::trivial()).unwrap();
    assert_eq!(t.space.degrees(), e.space.degrees());
    assert_eq!(t.pairing, e.pairing);
    assert_eq!(t.h, e.h);
    let cs = cs_theory().unwrap();
    let t = tensor_theory(&cs, &FrobeniusAlgebra::trivial()).unwrap();
    assert_eq!(t.pairing, cs.pairing);
}

#[test]
fn tensor_theories_are_valid_and_heat_kernels_factor() {
    for e in [two_dim_theory(), cs_theory().unwrap()] {
        for alg in [
            FrobeniusAlgebra::matrix(2),
            FrobeniusAlgebra::dual_numbers(),
        ] {
            let ea = tensor_theory(&e, &alg).unwrap();
            ea.check_self_adjoint(&ea.h, 0, "H").unwrap();
            let lhs = heat_kernel(&ea).unwrap();
            let rhs = tensor_propagator(&e.space, &heat_kernel(&e).unwrap(), &alg);
            assert_eq!(lhs, rhs, "{}", alg.name());
        }
    }
}

#[test]
fn extended_propagators_are_symmetric_of_degree_zero() {
    let space = GradedSpace::with_degrees(&[0, 1, -1]);
    let mut r = rng(11);
    for alg in [
        FrobeniusAlgebra::matrix(2),
        FrobeniusAlgebra::dual_numbers(),
    ] {
        for _ in 0..5 {
            let p = random_propagator(&mut r, &space, 0.9);
            let pa = tensor_propagator(&space, &p, &alg);
            check_propagator(&tensor_space(&space, &alg), &pa).unwrap();
        }
    }
}

#[test]
fn morita_component_depends_only_on_the_symmetrization() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let alg = FrobeniusAlgebra::matrix(2);
    let ea = tensor_space(&space, &alg);
    let mut r = rng(5);
    for (cell, profile) in [
        (Cell::new(0, 0, 1, 3), vec![3u32]),
        (Cell::new(0, 1, 2, 3), vec![1, 2]),
        (Cell::new(0, 0, 2, 4), vec![2, 2]),
    ] {
        let l = cell.l as usize;
        let group = aut_group(&profile);
        for _ in 0..3 {
            let mut x = Tensor::zero(l);
            for _ in 0..4 {
                let w: Vec<u8> = (0..l).map(|_| r.gen_range(0..3u8)).collect();
                x.add_entry(w, rat(r.gen_range(1..4), 1));
            }
            // A second representative: x plus (y - s.y) for a random y and automorphism s.
            let mut y = Tensor::zero(l);
            let w: Vec<u8> = (0..l).map(|_| r.gen_range(0..3u8)).collect();
            y.add_entry(w, rat(2, 1));
            let s = &group[r.gen_range(0..group.len())];
            let x2 = x.add(&y).sub(&y.permute(&space, s).unwrap());
            assert_eq!(
                cyclic_symmetrize(&space, &profile, &x),
                cyclic_symmetrize(&space, &profile, &x2)
            );
            assert_eq!(
                morita_component(&space, &alg, &ea, cell, &profile, &x),
                morita_component(&space, &alg, &ea, cell, &profile, &x2)
            );
        }
    }
}

#[test]
fn morita_by_the_trivial_algebra_is_the_identity() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let mut r = rng(8);
    let i = random_interaction(&mut r, &space, Truncation::new(2, 4), 12, |_| true);
    let m = morita(&i, &FrobeniusAlgebra::trivial());
    let a: Vec<_> = i.cells().collect();
    let b: Vec<_> = m.cells().collect();
    assert_eq!(a, b);
}

#[test]
fn morita_is_compatible_with_the_flow() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 0]));
    let alg = FrobeniusAlgebra::matrix(2);
    let mut r = rng(21);
    let i = random_interaction(&mut r, &space, Truncation::new(1, 3), 5, |_| true);
    let p = random_propagator(&mut r, &space, 0.8);
    let lhs = morita(&flow_nc(&i, &p).unwrap(), &alg);
    let rhs = flow_nc(&morita(&i, &alg), &tensor_propagator(&space, &p, &alg)).unwrap();
    assert!(!lhs.is_zero());
    assert_eq!(lhs.differing_cells(&rhs), Vec::<Cell>::new());
}

#[test]
fn morita_is_compatible_with_the_flow_on_dual_numbers() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let alg = FrobeniusAlgebra::dual_numbers();
    let mut r = rng(22);
    let i = random_interaction(&mut r, &space, Truncation::new(1, 3), 6, |_| true);
    let p = random_propagator(&mut r, &space, 0.9);
    let lhs = morita(&flow_nc(&i, &p).unwrap(), &alg);
    let rhs = flow_nc(&morita(&i, &alg), &tensor_propagator(&space, &p, &alg)).unwrap();
    assert_eq!(lhs.differing_cells(&rhs), Vec::<Cell>::new());
}

#[test]
fn large_n_bookkeeping() {
    let space = Arc::new(GradedSpace::with_degrees(&[0]));
    let trunc = Truncation::new(2, 3);
    for (j, cell) in [(1u32, Cell::new(0, 1, 1, 3)), (2, Cell::new(0, 2, 1, 3))] {
        let mut with = NcInteraction::new(space.clone(), trunc);
        let w: Vec<u8> = vec![0; cell.l as usize];
        with.add_word(cell, &[cell.l], rat(1, 1), &w);
        let mut without = NcInteraction::new(space.clone(), trunc);
        let base = Cell::new(0, 0, 1, cell.l);
        without.add_word(base, &[cell.l], rat(1, 1), &w);
        for n in 1..=3usize {
            let alg = FrobeniusAlgebra::matrix(n);
            let a = sigma(&morita(&with, &alg));
            let b = sigma(&morita(&without, &alg));
            let (&(ia, ja), ta) = a.cells().next().unwrap();
            let (&(ib, jb), tb) = b.cells().next().unwrap();
            assert_eq!((ia, ja), (cell.loop_number() as u32, cell.l));
            assert_eq!((ib, jb), (0, cell.l));
            assert_eq!(*ta, tb.scale(&rat((n as i64).pow(j), 1)));
        }
    }
}

#[test]
fn images_of_zero_vanish() {
    let space = Arc::new(GradedSpace::with_degrees(&[0]));
    let zero = NcInteraction::<Rational>::new(space, Truncation::new(1, 4));
    assert!(lqt_images(&zero, 3).iter().all(|x| x.is_zero()));
    assert!(lqt_vanishing_check(&zero, 2).all_vanish());
}

#[test]
fn images_separate_a_combination_vanishing_at_rank_one() {
    let space = Arc::new(GradedSpace::with_degrees(&[0]));
    let trunc = Truncation::new(1, 3);
    let mut a = NcInteraction::new(space.clone(), trunc);
    a.add_word(Cell::new(0, 1, 1, 3), &[3], rat(1, 1), &[0, 0, 0]);
    let mut b = NcInteraction::new(space.clone(), trunc);
    b.add_word(Cell::new(0, 0, 2, 3), &[1, 2], rat(1, 1), &[0, 0, 0]);
    let ia = &lqt_images(&a, 1)[0];
    let ib = &lqt_images(&b, 1)[0];
    let va = ia.get(1, 3).unwrap().get(&[0, 0, 0]);
    let vb = ib.get(1, 3).unwrap().get(&[0, 0, 0]);
    let combo = a.sub(&b.scale(&(va / vb)));
    assert!(!combo.is_zero());
    let images = lqt_images(&combo, 2);
    assert!(images[0].is_zero());
    assert!(!images[1].is_zero());
}

#[test]
fn joint_images_have_zero_kernel_on_the_small_box() {
    let space = Arc::new(GradedSpace::with_degrees(&[0]));
    let zero = NcInteraction::<Rational>::new(space, Truncation::new(1, 4));
    let report = lqt_vanishing_check(&zero, 2);
    assert_eq!(report.max_words, 2);
    assert_eq!(report.basis_size, 10);
    assert_eq!(report.kernel_dimension(), 0);
    assert!(report.converse_holds());
    // Rank one alone does not separate the box.
    let basis = cell_space_basis(&zero, &Truncation::new(1, 4).box_cells());
    assert!(joint_image_rank(&basis, 1) < basis.len());
}

#[test]
fn cubic_demo_matches_the_trace_cubic_interaction() {
    let theory = cs_theory().unwrap();
    assert_eq!(theory.pairing.degree, -1);
    let i = cs_interaction().unwrap();
    i.validate().unwrap();
    assert!(!i.is_zero());
    for report in demo_cs(3).unwrap() {
        assert!(
            report.matches(),
            "N={} mismatched {:?}",
            report.n,
            report.mismatched
        );
        // At N = 1 both odd letters coincide and a graded symmetric cubic vanishes.
        assert_eq!(report.nonzero, report.n >= 2);
    }
}

#[test]
fn glued_maps_report_the_graph_cell() {
    let alg = FrobeniusAlgebra::matrix(2);
    for c in enumerate_profile_capped(0, 1, &[1, 1], 6) {
        let (cell, r, _) = glued_map(&c.graph, &alg).unwrap();
        assert_eq!((cell, r), graph_cell(&c.graph).unwrap());
    }
}

#[test]
fn scalar_arithmetic_in_algebras() {
    let m2 = FrobeniusAlgebra::matrix(2);
    let e12 = m2.basis(1);
    let e21 = m2.basis(2);
    assert_eq!(m2.tr(&m2.mul(&e12, &e21)), rat(1, 1));
    assert!(Scalar::is_zero(&m2.tr(&m2.mul(&e12, &e12))));
}
