//! The action checked against a dense-tensor evaluator that shares no code
//! with the library's index bookkeeping.

use num_traits::Zero;
use rand::Rng;
use symplinv::action::{
    exterior_derivative_jet, group_act, infinitesimal_act, pullback_jet_linear, rep_matrix,
    InfinitesimalMethod,
};
use symplinv::linalg::{rat, MatQ, Rational};
use symplinv::rng::{seeded, DetRng};
use symplinv::symplectic::{
    commutator, exp_nilpotent, nilpotent_basis_generators, random_nilpotent_generator,
    random_sp_element, sp_basis,
};
use symplinv::trivector::{Jet1TwoForm, Trivector};

/// Fully antisymmetric `m × m × m` array of θ(e_p, e_q, e_r), 0-based.
struct Dense {
    m: usize,
    t: Vec<Rational>,
}

impl Dense {
    fn at(&self, p: usize, q: usize, r: usize) -> &Rational {
        &self.t[(p * self.m + q) * self.m + r]
    }

    fn from_trivector(theta: &Trivector) -> Dense {
        let m = theta.two_n();
        let mut t = vec![Rational::zero(); m * m * m];
        let mut k = 0;
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let y = &theta.coords()[k];
                    k += 1;
                    for (p, q, r, s) in [
                        (a, b, c, 1),
                        (b, c, a, 1),
                        (c, a, b, 1),
                        (b, a, c, -1),
                        (a, c, b, -1),
                        (c, b, a, -1),
                    ] {
                        t[(p * m + q) * m + r] = y * rat(s);
                    }
                }
            }
        }
        Dense { m, t }
    }

    fn to_coords(&self) -> Vec<Rational> {
        let m = self.m;
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    out.push(self.at(a, b, c).clone());
                }
            }
        }
        out
    }
}

/// θ(L e_h, L e_i, L e_j) with `L = A⁻¹`.
fn oracle_group(a: &MatQ, theta: &Trivector) -> Vec<Rational> {
    let l = a.inverse().unwrap();
    let d = Dense::from_trivector(theta);
    let m = d.m;
    let mut out = Dense { m, t: vec![Rational::zero(); m * m * m] };
    for h in 0..m {
        for i in 0..m {
            for j in 0..m {
                let mut acc = Rational::zero();
                for p in 0..m {
                    for q in 0..m {
                        for r in 0..m {
                            let v = d.at(p, q, r);
                            if !v.is_zero() {
                                acc += v * &l[(p, h)] * &l[(q, i)] * &l[(r, j)];
                            }
                        }
                    }
                }
                out.t[(h * m + i) * m + j] = acc;
            }
        }
    }
    out.to_coords()
}

/// -θ(U e_h, e_i, e_j) - θ(e_h, U e_i, e_j) - θ(e_h, e_i, U e_j).
fn oracle_infinitesimal(u: &MatQ, theta: &Trivector) -> Vec<Rational> {
    let d = Dense::from_trivector(theta);
    let m = d.m;
    let mut out = Dense { m, t: vec![Rational::zero(); m * m * m] };
    for h in 0..m {
        for i in 0..m {
            for j in 0..m {
                let mut acc = Rational::zero();
                for p in 0..m {
                    acc -= &u[(p, h)] * d.at(p, i, j);
                    acc -= &u[(p, i)] * d.at(h, p, j);
                    acc -= &u[(p, j)] * d.at(h, i, p);
                }
                out.t[(h * m + i) * m + j] = acc;
            }
        }
    }
    out.to_coords()
}

fn random_trivector(two_n: usize, bound: i64, rng: &mut DetRng) -> Trivector {
    let len = two_n * (two_n - 1) * (two_n - 2) / 6;
    Trivector::from_coords(two_n, (0..len).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
        .unwrap()
}

fn random_invertible(m: usize, rng: &mut DetRng) -> MatQ {
    loop {
        let rows: Vec<Vec<i64>> =
            (0..m).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let a = MatQ::from_i64_rows(&rows);
        if a.inverse().is_ok() {
            return a;
        }
    }
}

fn random_matrix(m: usize, rng: &mut DetRng) -> MatQ {
    let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-4..=4)).collect()).collect();
    MatQ::from_i64_rows(&rows)
}

#[test]
fn group_act_matches_tensor_oracle() {
    let mut rng = seeded(11);
    for n in 2..=3 {
        for _ in 0..10 {
            let a = random_invertible(2 * n, &mut rng);
            let theta = random_trivector(2 * n, 5, &mut rng);
            assert_eq!(group_act(&a, &theta).unwrap().coords(), &oracle_group(&a, &theta)[..]);
        }
    }
}

#[test]
fn group_act_is_a_left_action() {
    let mut rng = seeded(12);
    for i in 0..100 {
        let n = 2 + i % 2;
        let a = random_invertible(2 * n, &mut rng);
        let b = random_invertible(2 * n, &mut rng);
        let theta = random_trivector(2 * n, 9, &mut rng);
        let lhs = group_act(&(&a * &b), &theta).unwrap();
        let rhs = group_act(&a, &group_act(&b, &theta).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn general_matrix_methods_match_oracle() {
    let mut rng = seeded(13);
    for n in 2..=3 {
        for _ in 0..10 {
            let u = random_matrix(2 * n, &mut rng);
            let theta = random_trivector(2 * n, 5, &mut rng);
            let expected = oracle_infinitesimal(&u, &theta);
            for m in [InfinitesimalMethod::Multilinear, InfinitesimalMethod::LemmaDeterminant] {
                assert_eq!(infinitesimal_act(&u, &theta, m).unwrap().coords(), &expected[..], "{m:?}");
            }
        }
    }
}

#[test]
fn all_methods_agree_on_sp() {
    let mut rng = seeded(14);
    for n in 2..=5 {
        for _ in 0..20 {
            let u = random_sp_element(n, 6, &mut rng);
            let theta = random_trivector(2 * n, 20, &mut rng);
            let expected = oracle_infinitesimal(u.matrix(), &theta);
            for m in InfinitesimalMethod::ALL {
                assert_eq!(
                    infinitesimal_act(u.matrix(), &theta, m).unwrap().coords(),
                    &expected[..],
                    "n={n} {m:?}"
                );
            }
        }
    }
}

#[test]
fn basis_elements_match_oracle_for_every_method() {
    let mut rng = seeded(15);
    for n in 2..=4 {
        let theta = random_trivector(2 * n, 30, &mut rng);
        for b in sp_basis(n).unwrap() {
            let expected = oracle_infinitesimal(b.matrix(), &theta);
            for m in InfinitesimalMethod::ALL {
                assert_eq!(infinitesimal_act(b.matrix(), &theta, m).unwrap().coords(), &expected[..]);
            }
        }
    }
}

#[test]
fn rep_matrix_reproduces_action_and_bracket() {
    for n in 2..=3 {
        let basis = sp_basis(n).unwrap();
        let reps: Vec<MatQ> = basis.iter().map(|b| rep_matrix(b.matrix(), 2 * n).unwrap().to_dense()).collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let br = commutator(&basis[i], &basis[j]).unwrap();
                let lhs = rep_matrix(br.matrix(), 2 * n).unwrap().to_dense();
                let rhs = &(&reps[i] * &reps[j]) - &(&reps[j] * &reps[i]);
                assert_eq!(lhs, rhs);
            }
        }
    }
    let mut rng = seeded(16);
    let u = random_sp_element(3, 4, &mut rng);
    let theta = random_trivector(6, 10, &mut rng);
    let r = rep_matrix(u.matrix(), 6).unwrap();
    assert_eq!(r.mul_vec(theta.coords()).unwrap(), oracle_infinitesimal(u.matrix(), &theta));
}

/// Degree-1 coefficient of a cubic from its values at t = 0, 1, 2, 3.
fn linear_coefficient(v: &[Vec<Rational>; 4]) -> Vec<Rational> {
    // d/dt of the Lagrange interpolant at t = 0: (-11 v0 + 18 v1 - 9 v2 + 2 v3) / 6
    (0..v[0].len())
        .map(|k| (rat(-11) * &v[0][k] + rat(18) * &v[1][k] - rat(9) * &v[2][k] + rat(2) * &v[3][k]) / rat(6))
        .collect()
}

#[test]
fn exponential_derivative_is_infinitesimal_action() {
    let mut rng = seeded(17);
    for n in 2..=3 {
        let mut gens = nilpotent_basis_generators(n).unwrap();
        gens.extend((0..5).map(|_| random_nilpotent_generator(n, &mut rng)));
        for g in &gens {
            let theta = random_trivector(2 * n, 7, &mut rng);
            let values = [0, 1, 2, 3].map(|t| {
                let a = exp_nilpotent(&g.matrix().scale(&rat(t))).unwrap();
                group_act(&a, &theta).unwrap().into_coords()
            });
            let expected = infinitesimal_act(g.matrix(), &theta, InfinitesimalMethod::Multilinear).unwrap();
            assert_eq!(linear_coefficient(&values), expected.coords());
        }
    }
}

fn random_jet(two_n: usize, rng: &mut DetRng) -> Jet1TwoForm {
    let mut j = Jet1TwoForm::zero(two_n).unwrap();
    for h in 1..=two_n {
        for i in h + 1..=two_n {
            j.set_f(h, i, rat(rng.gen_range(-5..=5))).unwrap();
            for l in 1..=two_n {
                j.set_df(h, i, l, rat(rng.gen_range(-5..=5))).unwrap();
            }
        }
    }
    j
}

#[test]
fn exterior_derivative_commutes_with_linear_pullback() {
    let mut rng = seeded(18);
    for k in 0..50 {
        let two_n = if k % 2 == 0 { 4 } else { 6 };
        let a = random_invertible(two_n, &mut rng);
        let jet = random_jet(two_n, &mut rng);
        let lhs = exterior_derivative_jet(&pullback_jet_linear(&a, &jet).unwrap());
        // φ* = (A⁻¹)·
        let rhs = group_act(&a.inverse().unwrap(), &exterior_derivative_jet(&jet)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn exterior_derivative_is_linear() {
    let mut rng = seeded(19);
    for _ in 0..20 {
        let a = random_jet(6, &mut rng);
        let b = random_jet(6, &mut rng);
        let c = rat(rng.gen_range(-9..=9));
        let lhs = exterior_derivative_jet(&a.add(&b.scale(&c)).unwrap());
        let rhs = exterior_derivative_jet(&a).add(&exterior_derivative_jet(&b).scale(&c)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn unsorted_assembly_does_not_change_results() {
    let u = sp_basis(2).unwrap()[5].matrix().clone();
    let a = Trivector::from_entries(4, [([2, 1, 4], rat(3)), ([3, 4, 1], rat(-2))]).unwrap();
    let b = Trivector::from_entries(4, [([1, 2, 4], rat(-3)), ([1, 3, 4], rat(-2))]).unwrap();
    assert_eq!(a, b);
    for m in InfinitesimalMethod::ALL {
        assert_eq!(infinitesimal_act(&u, &a, m).unwrap(), infinitesimal_act(&u, &b, m).unwrap());
    }
}
