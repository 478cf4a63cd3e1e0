//! Property tests for the lattice/character calculus and the propagation
//! engine: completion independence, functoriality of restriction, descent
//! as a section of pullback, and soundness of the pushforward rule.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use std::sync::Arc;
use twistoric::charsys::{Character, QmodZ};
use twistoric::fan::Fan;
use twistoric::icengine::{deligne_ic, initial_complex, Perversity};
use twistoric::lattice::{int_vec, smith_normal_form, IntMatrix, QuotientLattice, Sublattice};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(
        proptest::collection::vec(-9i64..=9, cols..=cols),
        rows..=rows,
    )
    .prop_map(|rows| IntMatrix::from_rows(rows.into_iter().map(|r| int_vec(&r)).collect()))
}

fn small_character(rank: usize) -> impl Strategy<Value = Character> {
    proptest::collection::vec((0i64..12, 1i64..=12), rank..=rank).prop_map(|vals| {
        Character::new(
            vals.into_iter()
                .map(|(n, d)| QmodZ::from_pair(n, d))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_factorization_holds(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| small_matrix(r, c))) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        prop_assert_eq!(snf.u.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(snf.v.determinant().abs(), BigInt::from(1));
        let diag = snf.diagonal();
        for i in 0..diag.len().saturating_sub(1) {
            if !diag[i + 1].is_zero() {
                prop_assert!(!diag[i].is_zero());
                prop_assert!((&diag[i + 1] % &diag[i]).is_zero());
            }
        }
    }

    #[test]
    fn saturation_is_idempotent_and_saturated(m in small_matrix(2, 3)) {
        let gens = m.row_vecs();
        let s = Sublattice::from_generators(3, gens).unwrap();
        let once = s.saturate();
        prop_assert!(once.is_saturated());
        prop_assert!(once.saturate().same_lattice(&once));
        // the saturation contains the original lattice
        for b in s.basis() {
            prop_assert!(once.contains(b).unwrap());
        }
    }

    #[test]
    fn completion_gives_unimodular_square(m in small_matrix(2, 3)) {
        let s = Sublattice::from_generators(3, m.row_vecs()).unwrap().saturate();
        let q = s.complete_basis().unwrap();
        let mut rows = s.basis().to_vec();
        rows.extend(q.complement_basis().iter().cloned());
        prop_assert_eq!(
            IntMatrix::from_rows(rows).determinant().abs(),
            BigInt::from(1)
        );
    }

    /// Any two valid completions of the same saturated sublattice induce
    /// the same character on the quotient: the descended characters agree
    /// as homomorphisms, i.e. after projection they evaluate identically.
    #[test]
    fn completion_independence_of_descent(
        m in small_matrix(2, 3),
        quot_chi in small_character(3),
        mix in proptest::collection::vec(-2i64..=2, 4),
        probe in proptest::collection::vec(-5i64..=5, 3),
    ) {
        let s = Sublattice::from_generators(3, m.row_vecs()).unwrap().saturate();
        prop_assume!(s.rank() >= 1 && s.rank() <= 2);
        let q1 = s.complete_basis().unwrap();

        // second completion: shear the complement by sublattice vectors and,
        // when the quotient has rank 2, by a unimodular mix
        let mut comp2: Vec<Vec<BigInt>> = q1.complement_basis().to_vec();
        for (i, c) in comp2.iter_mut().enumerate() {
            for (j, b) in s.basis().iter().enumerate() {
                let coef = BigInt::from(mix[(i + 2 * j) % mix.len()]);
                for (x, y) in c.iter_mut().zip(b) {
                    *x += &coef * y;
                }
            }
        }
        if comp2.len() == 2 {
            // elementary transvection keeps the completion unimodular
            let add: Vec<BigInt> = comp2[1].iter().map(|x| x * BigInt::from(mix[0])).collect();
            for (x, y) in comp2[0].iter_mut().zip(&add) {
                *x += y;
            }
        }
        let q2 = QuotientLattice::new(s.clone(), comp2).unwrap();

        // a character trivial on the sublattice: pull back a random
        // character from the quotient
        let bar = Character::new(quot_chi.values()[..q1.rank()].to_vec());
        let lifted = bar.pullback(&q1).unwrap();

        let d1 = lifted.descend(&q1).unwrap();
        let d2 = lifted.descend(&q2).unwrap();
        // as homomorphisms on the quotient: evaluate both on the class of a
        // random probe vector, each in its own coordinates
        let v = int_vec(&probe);
        let c1 = q1.project(&v).unwrap();
        let c2 = q2.project(&v).unwrap();
        prop_assert_eq!(d1.evaluate(&c1).unwrap(), d2.evaluate(&c2).unwrap());
        // and both pull back to the same character on the ambient lattice
        prop_assert_eq!(d1.pullback(&q1).unwrap(), d2.pullback(&q2).unwrap());
    }

    /// Restricting to a sublattice and then to a deeper sublattice agrees
    /// with restricting directly, in compatible coordinates.
    #[test]
    fn restriction_is_functorial(
        chi in small_character(3),
        coeffs in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let s = Sublattice::from_basis(
            3,
            vec![int_vec(&[1, 0, 2]), int_vec(&[0, 1, -1])],
        )
        .unwrap();
        // sub-sublattice spanned by one combination of the basis
        let combo: Vec<BigInt> = (0..3)
            .map(|j| {
                BigInt::from(coeffs[0]) * &s.basis()[0][j]
                    + BigInt::from(coeffs[1]) * &s.basis()[1][j]
            })
            .collect();
        prop_assume!(combo.iter().any(|x| !x.is_zero()));
        let deep = Sublattice::from_basis(3, vec![combo.clone()]).unwrap();
        // coordinates of the deep generator inside s
        let inner = Sublattice::from_basis(2, vec![int_vec(&coeffs)]).unwrap();

        let direct = chi.restrict(&deep).unwrap();
        let via = chi.restrict(&s).unwrap().restrict(&inner).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn restriction_is_additive(
        a in small_character(3),
        b in small_character(3),
        m in small_matrix(2, 3),
    ) {
        let s = Sublattice::from_generators(3, m.row_vecs()).unwrap();
        let sum = Character::new(
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| x.add(y))
                .collect(),
        );
        let lhs = sum.restrict(&s).unwrap();
        let rhs = Character::new(
            a.restrict(&s)
                .unwrap()
                .values()
                .iter()
                .zip(b.restrict(&s).unwrap().values())
                .map(|(x, y)| x.add(y))
                .collect(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    /// descend ∘ pullback is the identity on quotient characters.
    #[test]
    fn descent_inverts_pullback(
        m in small_matrix(1, 3),
        bar in small_character(2),
    ) {
        let s = Sublattice::from_generators(3, m.row_vecs()).unwrap().saturate();
        prop_assume!(s.rank() == 1);
        let q = s.complete_basis().unwrap();
        let lifted = bar.pullback(&q).unwrap();
        prop_assert!(lifted.restrict(&s).unwrap().is_trivial());
        prop_assert_eq!(lifted.descend(&q).unwrap(), bar);
    }

    #[test]
    fn dual_is_an_involution_preserving_order(chi in small_character(4)) {
        prop_assert_eq!(chi.dual().dual(), chi.clone());
        prop_assert_eq!(chi.dual().order(), chi.order());
        prop_assert_eq!(chi.dual().is_trivial(), chi.is_trivial());
    }
}

fn fan_pool() -> Vec<Arc<Fan>> {
    vec![
        Arc::new(Fan::new(2, vec![vec![int_vec(&[1, 0]), int_vec(&[0, 1])]]).unwrap()),
        Arc::new(Fan::new(2, vec![vec![int_vec(&[1, 0]), int_vec(&[1, 2])]]).unwrap()),
        Arc::new(
            Fan::new(
                2,
                vec![
                    vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
                    vec![int_vec(&[0, 1]), int_vec(&[-1, -2])],
                    vec![int_vec(&[-1, -2]), int_vec(&[1, 0])],
                ],
            )
            .unwrap(),
        ),
        Arc::new(
            Fan::new(
                3,
                vec![vec![
                    int_vec(&[1, 0, 1]),
                    int_vec(&[0, 1, 1]),
                    int_vec(&[-1, 0, 1]),
                    int_vec(&[0, -1, 1]),
                ]],
            )
            .unwrap(),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The exact one-step stalk character at each cone appears among the
    /// characters propagated by the full (untruncated) pushforward chain:
    /// the split model over-approximates but never loses the true factor.
    #[test]
    fn propagation_is_sound_for_one_step_stalks(
        fan_idx in 0usize..4,
        chi_vals in proptest::collection::vec((0i64..12, 1i64..=12), 3),
    ) {
        let fan = fan_pool()[fan_idx].clone();
        let n = fan.ambient_rank();
        let chi = Character::new(
            chi_vals[..n]
                .iter()
                .map(|&(a, b)| QmodZ::from_pair(a, b))
                .collect(),
        );
        // full pushforward chain without truncation
        let mut full = initial_complex(fan.clone(), &chi).unwrap();
        for k in 1..=n {
            if !fan.cones_of_dim(k).is_empty() {
                full = full.pushforward_step(k).unwrap();
            }
        }
        for tau in fan.cones() {
            if tau.dim() == 0 {
                continue;
            }
            let od = fan.orbit_data(tau.id()).unwrap();
            if !chi.restrict(&od.stab_lattice).unwrap().is_trivial() {
                continue;
            }
            let expected = chi.descend(&od.quotient).unwrap();
            let present = full
                .entries_on(tau.id())
                .iter()
                .flat_map(|e| e.factors.characters())
                .any(|c| *c == expected);
            prop_assert!(present, "one-step character lost at cone {}", tau.id());
        }
    }

    /// Propagation never turns a nontrivial character into a trivial one:
    /// with a twisted input every entry of the construction is twisted.
    #[test]
    fn twisted_input_stays_twisted(
        fan_idx in 0usize..4,
        chi_vals in proptest::collection::vec((0i64..12, 1i64..=12), 3),
        preset in 0u8..3,
    ) {
        let fan = fan_pool()[fan_idx].clone();
        let n = fan.ambient_rank();
        let chi = Character::new(
            chi_vals[..n]
                .iter()
                .map(|&(a, b)| QmodZ::from_pair(a, b))
                .collect(),
        );
        prop_assume!(!chi.is_trivial());
        let p = match preset {
            0 => Perversity::middle(n as u32),
            1 => Perversity::zero(n as u32),
            _ => Perversity::top(n as u32),
        };
        let complex = deligne_ic(fan, &chi, &p).unwrap();
        for e in complex.entries() {
            prop_assert!(e.factors.is_twisted(), "trivial factor on cone {}", e.cone);
        }
    }
}
