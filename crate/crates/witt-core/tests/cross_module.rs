//! Facts whose verification spans several layers: stabilizers feeding
//! torus detection, invariant differentials feeding the regular locus,
//! and the power/bracket formulas at every supported size.

use witt_core::action::{adjoint_action, jacobian_independent};
use witt_core::derivation::{fd_bracket, fd_power, Ambient, Derivation};
use witt_core::enveloping::{build_enveloping, is_torus, restricted_subalgebra};
use witt_core::field::Field;
use witt_core::poly::Polynomial;
use witt_core::psi::{char_poly_invariants_at, char_poly_invariants_symbolic};
use witt_core::sample::Stream;
use witt_core::truncated::TruncatedAlgebra;
use witt_core::wn::build_wn;

#[test]
fn stabilizer_at_the_regular_point_is_a_torus() {
    // Adjoint W_1 at p = 2, D = xd: the stabilizer is span{xd}; its
    // extracted structure tables pass the torus test, so the semisimple
    // oracle agrees on its enveloping algebra.
    let w = build_wn(1, 2).unwrap();
    let action = adjoint_action(&w).unwrap();
    let f = Field::prime(2).unwrap();
    let point = vec![f.zero(), f.one()];
    let stab = action.stabilizer(&f, &point).unwrap();
    assert_eq!(stab.codim, 1);
    let h_basis: Vec<Vec<witt_core::Elt>> = (0..stab.kernel_basis.rows())
        .map(|r| stab.kernel_basis.row(r).to_vec())
        .collect();
    let u = build_enveloping(w.lie()).unwrap();
    let sub = restricted_subalgebra(&u, &h_basis).unwrap();
    assert!(is_torus(&sub).unwrap());
    assert!(build_enveloping(&sub)
        .unwrap()
        .semisimplicity_oracle()
        .unwrap());
    // The nilpotent point D = d gives a stabilizer that is not a torus.
    let point = vec![f.one(), f.zero()];
    let stab = action.stabilizer(&f, &point).unwrap();
    let h_basis: Vec<Vec<witt_core::Elt>> = (0..stab.kernel_basis.rows())
        .map(|r| stab.kernel_basis.row(r).to_vec())
        .collect();
    let sub = restricted_subalgebra(&u, &h_basis).unwrap();
    assert!(!is_torus(&sub).unwrap());
}

#[test]
fn stabilizer_dimension_is_n_where_psi0_is_nonzero() {
    for (n, p, e) in [(1usize, 2u32, 4usize), (1, 3, 2), (2, 2, 2)] {
        let w = build_wn(n, p).unwrap();
        let action = adjoint_action(&w).unwrap();
        let field = Field::extension(p, e).unwrap();
        let mut stream = Stream::new(17, 50 + n as u64);
        let mut hits = 0;
        while hits < 25 {
            let coords = stream.point(&field, w.dim());
            let psi = char_poly_invariants_at(&w, &field, &coords).unwrap();
            if psi[0].is_zero() {
                continue;
            }
            hits += 1;
            let stab = action.stabilizer(&field, &coords).unwrap();
            assert_eq!(
                stab.kernel_basis.rows(),
                n,
                "stabilizer dimension at a psi_0 != 0 point of W_{n}, p = {p}"
            );
        }
    }
}

#[test]
fn psi_differentials_are_independent_where_psi0_is_nonzero() {
    // Nonvanishing of psi_0 puts the point inside the open set where the
    // invariant differentials are independent.
    for (n, p) in [(1usize, 2u32), (1, 3), (2, 2)] {
        let w = build_wn(n, p).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        let field = Field::extension(p, 2).unwrap();
        let mut stream = Stream::new(23, 60 + n as u64);
        let mut hits = 0;
        while hits < 20 {
            let coords = stream.point(&field, w.dim());
            if psi.evaluate(&field, &coords).unwrap()[0].is_zero() {
                continue;
            }
            hits += 1;
            assert!(jacobian_independent(&field, &psi.psi, &coords).unwrap());
        }
    }
}

#[test]
fn power_and_bracket_formulas_at_more_sizes() {
    // Beyond the headline configurations: every truncated algebra within
    // budget that adds a new shape.
    for (n, p, trials) in [(3usize, 2u32, 25), (2, 3, 25), (1, 7, 25)] {
        let field = Field::prime(p).unwrap();
        let alg = TruncatedAlgebra::new(field.clone(), n).unwrap();
        let ambient = Ambient::truncated(alg.clone());
        let mut stream = Stream::new(29, 70 + n as u64 * 10 + p as u64);
        let rand_poly = |s: &mut Stream| {
            Polynomial::from_terms(
                field.clone(),
                n,
                alg.basis().iter().map(|m| (m.clone(), s.elt(&field))),
            )
        };
        let rand_deriv = |s: &mut Stream| {
            let images = (0..n).map(|_| rand_poly(s)).collect();
            Derivation::new(ambient.clone(), images).unwrap()
        };
        for _ in 0..trials {
            let f = rand_poly(&mut stream);
            let d = rand_deriv(&mut stream);
            let e = rand_deriv(&mut stream);
            assert_eq!(
                fd_power(&f, &d).unwrap(),
                d.scale_by_poly(&f).unwrap().p_power().unwrap(),
                "power formula at n = {n}, p = {p}"
            );
            assert_eq!(
                fd_bracket(&f, &d, &e).unwrap(),
                d.scale_by_poly(&f).unwrap().bracket(&e).unwrap(),
                "bracket formula at n = {n}, p = {p}"
            );
        }
    }
}

#[test]
fn generation_dimensions_match_an_independent_invariant_solve() {
    use witt_core::invariants::{check_generation, invariants_up_to_degree};
    let w = build_wn(1, 3).unwrap();
    let action = adjoint_action(&w).unwrap();
    let psi = char_poly_invariants_symbolic(&w, false).unwrap();
    let report = check_generation(&action, &psi.psi, 6).unwrap();
    let independent = invariants_up_to_degree(&action, 6).unwrap();
    for (row, dim) in report.rows.iter().zip(independent.degree_dims()) {
        assert_eq!(row.dim_invariants, dim);
    }
}
