use invform::arith::{smith_normal_form, Domain, Matrix, RingMap};
use invform::descent::{base_change_form, pullback_form};
use invform::ibf::{ibf_module, BilinearForm};
use invform::module::{mat, sl, PresentedModule};
use proptest::prelude::*;

fn int_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn to_matrix(d: &Domain, rows: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(d, &refs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_round_trip(rows in int_matrix(5)) {
        let d = Domain::Integers;
        let m = to_matrix(&d, &rows);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(d.divides(&w[0], &w[1]));
        }
        prop_assert!(d.is_unit(&s.u.det().unwrap()));
    }

    #[test]
    fn smith_rank_matches_field_rank(rows in int_matrix(5)) {
        let s = smith_normal_form(&to_matrix(&Domain::Integers, &rows)).unwrap();
        let over_q = invform::arith::rank(&to_matrix(&Domain::Rationals, &rows)).unwrap();
        prop_assert_eq!(s.rank, over_q);
    }

    #[test]
    fn cokernel_order_is_determinant(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let d = Domain::Integers;
        let m = to_matrix(&d, &rows);
        let det = m.det().unwrap();
        let inv = PresentedModule::new(m).invariants().unwrap();
        if d.is_zero(&det) {
            prop_assert!(inv.free_rank > 0);
        } else {
            let order = inv.torsion.iter().fold(d.one(), |acc, t| d.mul(&acc, t));
            prop_assert_eq!(order, d.normalize(&det).0);
        }
    }

    #[test]
    fn pullback_composes(f in prop::collection::vec(-3i64..=3, 9), g in prop::collection::vec(-3i64..=3, 9)) {
        let d = Domain::Rationals;
        let b = sl(2, &d).unwrap();
        let beta = BilinearForm::new(&b, Matrix::from_i64(&d, &[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]])).unwrap();
        let fm = to_matrix(&d, &f.chunks(3).map(<[i64]>::to_vec).collect::<Vec<_>>());
        let gm = to_matrix(&d, &g.chunks(3).map(<[i64]>::to_vec).collect::<Vec<_>>());
        let once = pullback_form(&beta, &gm.mul(&fm).unwrap()).unwrap();
        let twice = pullback_form(&pullback_form(&beta, &gm).unwrap(), &fm).unwrap();
        prop_assert_eq!(once.gram(), twice.gram());
    }

    #[test]
    fn base_change_of_invariant_forms_stays_invariant(k in -20i64..=20, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let z = Domain::Integers;
        let a = mat(2, &z).unwrap();
        let forms = ibf_module(&a).invariant_forms().unwrap();
        let beta = BilinearForm::new(&a, forms[0].scale(&z.from_i64(k))).unwrap();
        let alpha = RingMap::canonical(&z, &Domain::prime_field(p).unwrap()).unwrap();
        prop_assert!(base_change_form(&beta, &alpha).unwrap().is_invariant());
    }
}
