use hnfkit::apps::{hnf, lattice_intersection, product_hnf};
use hnfkit::format::{parse_matrices, parse_matrix, write_matrices, write_matrix};
use hnfkit::hermite_basis::relations_hermite_basis;
use hnfkit::intmat::determinant;
use hnfkit::massager::{smith_massager, verify_massager};
use hnfkit::oracle::{naive_hnf, relations_basis_oracle};
use hnfkit::{matmul, BigInt, IntMat, Options};
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMat> {
    prop::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |v| IntMat::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap())
}

fn sized(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMat> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| matrix(r, c, lo, hi))
}

fn nonsingular(max: usize, bound: i64) -> impl Strategy<Value = IntMat> {
    (1..=max)
        .prop_flat_map(move |n| matrix(n, n, -bound, bound))
        .prop_filter("singular", |m| !determinant(m).unwrap().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn format_round_trip(a in sized(5, -1_000_000_000, 1_000_000_000)) {
        prop_assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a);
    }

    #[test]
    fn multi_matrix_round_trip(a in sized(4, -99, 99), b in sized(4, -99, 99)) {
        let text = write_matrices(&[&a, &b]);
        prop_assert_eq!(parse_matrices(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn hnf_matches_oracle(a in nonsingular(5, 30)) {
        prop_assert_eq!(hnf(&a, &Options::checked()).unwrap(), naive_hnf(&a).unwrap());
    }

    #[test]
    fn relations_match_oracle(m in nonsingular(3, 12), rows in 1usize..4, seed in any::<u64>()) {
        let c = m.cols();
        let g = IntMat::from_fn(rows, c, |i, j| BigInt::from((seed >> ((i * c + j) % 60)) as i64 % 17 - 8));
        let got = relations_hermite_basis(&m, &g, &Options::checked()).unwrap();
        prop_assert_eq!(got, relations_basis_oracle(&m, &g).unwrap());
    }

    #[test]
    fn massager_verifies(m in nonsingular(5, 40)) {
        let mas = smith_massager(&m, &Options::default()).unwrap();
        prop_assert!(verify_massager(&m, &mas).unwrap());
    }

    #[test]
    fn product_and_intersection(a in nonsingular(3, 9), b in nonsingular(3, 9)) {
        prop_assume!(a.cols() == b.cols());
        let opts = Options::default();
        prop_assert_eq!(product_hnf(&a, &b, &opts).unwrap(), naive_hnf(&matmul(&a, &b).unwrap()).unwrap());
        let meet = lattice_intersection(&a, &b, &opts).unwrap();
        // both lattices contain the intersection
        for lat in [&a, &b] {
            for i in 0..meet.dim() {
                prop_assert!(hnfkit::oracle::in_row_lattice(&naive_hnf(lat).unwrap().into_mat(), meet.mat().row(i)));
            }
        }
    }
}
