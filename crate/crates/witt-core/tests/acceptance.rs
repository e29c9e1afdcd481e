//! Acceptance suite: each test re-verifies one headline property at its
//! stated scale and time budget and prints a pass/fail line.
//!
//! Run with `cargo test -p witt-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::time::{Duration, Instant};
use witt_core::action::adjoint_action;
use witt_core::catalog;
use witt_core::constant::{freeness_check_full, freeness_check_graded, FreenessVerdict};
use witt_core::derivation::{fd_bracket, fd_power, Ambient, Derivation};
use witt_core::enveloping::{build_enveloping, is_torus};
use witt_core::field::Field;
use witt_core::invariants::{check_generation, freeness_monomial_check};
use witt_core::lie::basis_vec;
use witt_core::poly::{Polynomial, VarScheme};
use witt_core::psi::{
    char_poly_invariants_at, char_poly_invariants_symbolic, premet_identity_check,
};
use witt_core::sample::{streams, Stream};
use witt_core::truncated::TruncatedAlgebra;
use witt_core::verify::{render_tsv, run_suite, Suite};
use witt_core::wn::build_wn;

fn report(criterion: &str, ok: bool, elapsed: Duration, budget: Duration) {
    let status = if ok && elapsed <= budget { "PASS" } else { "FAIL" };
    println!(
        "[{status}] {criterion} ({:.2?} of {:.0?} budget)",
        elapsed, budget
    );
    assert!(ok, "{criterion} failed");
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

fn random_poly(stream: &mut Stream, alg: &TruncatedAlgebra) -> Polynomial {
    let field = alg.field().clone();
    Polynomial::from_terms(
        field.clone(),
        alg.nvars(),
        alg.basis().iter().map(|m| (m.clone(), stream.elt(&field))),
    )
}

fn random_derivation(stream: &mut Stream, ambient: &Ambient) -> Derivation {
    let Ambient::Truncated(alg) = ambient else {
        unreachable!()
    };
    let images = (0..alg.nvars())
        .map(|_| random_poly(stream, alg))
        .collect();
    Derivation::new(ambient.clone(), images).unwrap()
}

const CONFIGS_HOCHSCHILD: [(usize, u32); 4] = [(1, 2), (1, 3), (2, 2), (1, 5)];
const CONFIGS_SYMBOLIC: [(usize, u32); 3] = [(1, 2), (1, 3), (2, 2)];

#[test]
fn criterion_01_hochschild_p_power_formula() {
    let start = Instant::now();
    let mut ok = true;
    for (k, (n, p)) in CONFIGS_HOCHSCHILD.into_iter().enumerate() {
        let field = Field::prime(p).unwrap();
        let alg = TruncatedAlgebra::new(field, n).unwrap();
        let ambient = Ambient::truncated(alg.clone());
        let mut stream = Stream::new(0, streams::HOCHSCHILD + k as u64);
        for _ in 0..100 {
            let f = random_poly(&mut stream, &alg);
            let d = random_derivation(&mut stream, &ambient);
            let rhs = fd_power(&f, &d).unwrap();
            let direct = d.scale_by_poly(&f).unwrap().p_power().unwrap();
            ok &= rhs == direct;
        }
    }
    report(
        "criterion 1: p-th power formula on 4 configurations x 100 pairs",
        ok,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_02_bracket_formula() {
    let start = Instant::now();
    let mut ok = true;
    for (k, (n, p)) in CONFIGS_HOCHSCHILD.into_iter().enumerate() {
        let field = Field::prime(p).unwrap();
        let alg = TruncatedAlgebra::new(field, n).unwrap();
        let ambient = Ambient::truncated(alg.clone());
        let mut stream = Stream::new(0, streams::BRACKET + k as u64);
        for _ in 0..100 {
            let f = random_poly(&mut stream, &alg);
            let d = random_derivation(&mut stream, &ambient);
            let e = random_derivation(&mut stream, &ambient);
            let rhs = fd_bracket(&f, &d, &e).unwrap();
            let direct = d.scale_by_poly(&f).unwrap().bracket(&e).unwrap();
            ok &= rhs == direct;
        }
    }
    report(
        "criterion 2: module bracket formula on 4 configurations x 100 triples",
        ok,
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_03_characteristic_polynomial_shape() {
    let start = Instant::now();
    let mut ok = true;
    for (n, p) in CONFIGS_SYMBOLIC {
        // The constructor asserts the vanishing pattern, the coefficient
        // count, and homogeneity; failure surfaces as an error.
        let w = build_wn(n, p).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        ok &= psi.psi.len() == n;
    }
    let w = build_wn(2, 2).unwrap();
    let psi = char_poly_invariants_symbolic(&w, false).unwrap();
    let f16 = Field::extension(2, 4).unwrap();
    let mut stream = Stream::new(0, streams::CHARPOLY_POINTS);
    for _ in 0..100 {
        let coords = stream.point(&f16, w.dim());
        let pointwise = char_poly_invariants_at(&w, &f16, &coords).unwrap();
        let symbolic = psi.evaluate(&f16, &coords).unwrap();
        ok &= pointwise == symbolic;
    }
    report(
        "criterion 3: characteristic polynomial p-power pattern, symbolic + 100 points over F_16",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_04_psi_invariance() {
    let start = Instant::now();
    let mut ok = true;
    for (n, p) in CONFIGS_SYMBOLIC {
        let w = build_wn(n, p).unwrap();
        let action = adjoint_action(&w).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        for f in &psi.psi {
            for d in action.rho() {
                ok &= d.apply(f).unwrap().is_zero();
            }
        }
    }
    report(
        "criterion 4: psi_i killed by every basis derivation, symbolically",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_05_generation_and_monomial_freeness() {
    let start = Instant::now();
    let mut ok = true;
    for (n, p, max_degree) in [(1usize, 2u32, 6u32), (1, 3, 6), (2, 2, 4)] {
        let w = build_wn(n, p).unwrap();
        let action = adjoint_action(&w).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        let generation = check_generation(&action, &psi.psi, max_degree).unwrap();
        ok &= generation.generated;
        let field = Field::prime(p).unwrap();
        let freeness = freeness_monomial_check(&field, w.dim(), &psi.psi, max_degree).unwrap();
        ok &= freeness.independent;
    }
    report(
        "criterion 5: invariants generated over p-th powers by psi, with independent monomials",
        ok,
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_06_regular_codimension() {
    let start = Instant::now();
    let mut ok = true;
    for (n, p, expected) in [(1usize, 2u32, 1usize), (1, 3, 2), (2, 2, 6)] {
        let w = build_wn(n, p).unwrap();
        let action = adjoint_action(&w).unwrap();
        let reportal = action.estimate_codim(0, 200, 4).unwrap();
        ok &= reportal.estimate == expected;
        ok &= reportal.estimate == w.dim() - n;
    }
    report(
        "criterion 6: sampled maximal stabilizer codimension equals dim g - n",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_07_index_law() {
    let start = Instant::now();
    // At least ten (g, h) pairs across p = 2 and p = 3.
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let w12 = build_wn(1, 2).unwrap().lie().clone();
    let w13 = build_wn(1, 3).unwrap().lie().clone();
    let swap = catalog::swap_torus().unwrap();
    let one2 = f2.one();
    let pairs: Vec<(witt_core::lie::RestrictedLieAlgebra, Vec<Vec<witt_core::Elt>>)> = vec![
        (w12.clone(), vec![]),
        (w12.clone(), vec![basis_vec(&f2, 2, 0)]),
        (w12.clone(), vec![basis_vec(&f2, 2, 1)]),
        (w12, vec![basis_vec(&f2, 2, 0), basis_vec(&f2, 2, 1)]),
        (w13.clone(), vec![]),
        (w13.clone(), vec![basis_vec(&f3, 3, 1)]),
        (w13.clone(), vec![basis_vec(&f3, 3, 0), basis_vec(&f3, 3, 1)]),
        (
            w13,
            vec![
                basis_vec(&f3, 3, 0),
                basis_vec(&f3, 3, 1),
                basis_vec(&f3, 3, 2),
            ],
        ),
        (swap.clone(), vec![]),
        (swap.clone(), vec![vec![one2, one2]]),
        (swap, vec![basis_vec(&f2, 2, 0), basis_vec(&f2, 2, 1)]),
        (catalog::nil_line(2).unwrap(), vec![]),
        (
            catalog::torus_line(3).unwrap(),
            vec![basis_vec(&f3, 1, 0)],
        ),
    ];
    assert!(pairs.len() >= 10);
    let mut ok = true;
    for (lie, h) in pairs {
        let u = build_enveloping(&lie).unwrap();
        let index = u.subgroup_index(&h).unwrap();
        let order_h = (lie.p() as usize).pow(h.len() as u32);
        ok &= index * order_h == u.dim();
    }
    report(
        "criterion 7: index times subgroup order recovers the group order on 13 pairs",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_08_torus_equivalence() {
    let start = Instant::now();
    let catalog_entries = vec![
        (catalog::torus_line(2).unwrap(), true),
        (catalog::torus_line(3).unwrap(), true),
        (catalog::swap_torus().unwrap(), true),
        (catalog::nil_line(2).unwrap(), false),
        (catalog::nil_line(3).unwrap(), false),
        (
            witt_core::lie::RestrictedLieAlgebra::new(
                2,
                vec!["e_0".into(), "e_1".into()],
                vec![vec![vec![0, 0]; 2]; 2],
                vec![vec![0, 0], vec![0, 0]],
            )
            .unwrap(),
            false,
        ),
        (build_wn(1, 2).unwrap().lie().clone(), false),
        (build_wn(1, 3).unwrap().lie().clone(), false),
    ];
    let mut ok = true;
    for (lie, expected) in catalog_entries {
        let torus = is_torus(&lie).unwrap();
        let semisimple = build_enveloping(&lie)
            .unwrap()
            .semisimplicity_oracle()
            .unwrap();
        ok &= torus == semisimple && torus == expected;
    }
    report(
        "criterion 8: torus detection agrees with the semisimplicity oracle on 8 algebras",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_09_sign_action_counterexample() {
    let start = Instant::now();
    let action = catalog::counterexample_action().unwrap();
    let inv = action.invariants_full().unwrap();
    let printed: Vec<String> = inv.iter().map(|f| f.format_with(VarScheme::X1)).collect();
    let mut ok = printed == ["1", "1*x1^2"];
    let freeness = freeness_check_full(&action).unwrap();
    ok &= freeness.verdict == FreenessVerdict::NotFree;
    report(
        "criterion 9: sign action on the truncated cubic has invariants 1, x^2 and is not free",
        ok,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_10_derivative_identity() {
    let start = Instant::now();
    let mut ok = true;
    for (k, (n, p)) in CONFIGS_SYMBOLIC.into_iter().enumerate() {
        let w = build_wn(n, p).unwrap();
        let action = adjoint_action(&w).unwrap();
        let psi = char_poly_invariants_symbolic(&w, false).unwrap();
        let field = Field::extension(p, 2).unwrap();
        let mut stream = Stream::new(0, streams::PREMET + k as u64);
        let mut done = 0;
        while done < 50 {
            let d_coords = stream.point(&field, w.dim());
            if char_poly_invariants_at(&w, &field, &d_coords).unwrap()[0].is_zero() {
                continue;
            }
            let stab = action.stabilizer(&field, &d_coords).unwrap();
            let mut dprime = vec![field.zero(); w.dim()];
            for r in 0..stab.kernel_basis.rows() {
                let c = stream.elt(&field);
                for (j, v) in stab.kernel_basis.row(r).iter().enumerate() {
                    dprime[j] = field.add(dprime[j], field.mul(c, *v));
                }
            }
            ok &= premet_identity_check(&w, &field, &d_coords, &dprime, Some(&psi)).is_ok();
            done += 1;
        }
    }
    report(
        "criterion 10: derivative identity on 50 centralizer pairs per configuration",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_11_graded_freeness_shadow() {
    let start = Instant::now();
    let action = catalog::sign_line_action().unwrap();
    let q = action.max_orbit_index(0, 50, 1).unwrap();
    let freeness = freeness_check_graded(&action, 5, None, 0, 50, 1).unwrap();
    let ok = q == 2 && freeness.verdict == (FreenessVerdict::Free { rank: 2 });
    report(
        "criterion 11: sign action on the line is gradedly free of rank 2 = max orbit index",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_12_deterministic_reports() {
    let start = Instant::now();
    let first = render_tsv(&run_suite(Suite::All, 0));
    let second = render_tsv(&run_suite(Suite::All, 0));
    let ok = first == second && first.contains("pass") && !first.contains("FAIL");
    report(
        "criterion 12: the full verification report is byte-identical across runs",
        ok,
        start.elapsed(),
        Duration::from_secs(600),
    );
}
