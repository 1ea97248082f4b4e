use gsmm_core::data::{parse_libsvm_str, to_libsvm, BENCHMARKS};
use gsmm_core::Error;
use proptest::prelude::*;

#[test]
fn parse_errors_carry_line_and_column() {
    match parse_libsvm_str("+1 1:0.5\n-1 2:abc\n", "t") {
        Err(Error::Parse { line, column, .. }) => {
            assert_eq!(line, 2);
            assert!(column > 1);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_libsvm_str("+1 3:1 2:1\n", "t"),
        Err(Error::Parse { line: 1, .. })
    ));
}

#[test]
fn benchmark_table_has_nine_distinct_entries() {
    let mut names: Vec<&str> = BENCHMARKS.iter().map(|b| b.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 9);
}

proptest! {
    #[test]
    fn libsvm_round_trip_is_bit_exact(
        rows in prop::collection::vec(prop::collection::btree_map(1usize..40, any::<f64>().prop_filter("finite", |v| v.is_finite()), 0..8), 1..20),
        signs in prop::collection::vec(any::<bool>(), 20),
    ) {
        let mut text = String::new();
        for (i, r) in rows.iter().enumerate() {
            text.push_str(if signs[i] { "+1" } else { "-1" });
            for (k, v) in r {
                text.push_str(&format!(" {k}:{v:e}"));
            }
            text.push('\n');
        }
        let d = parse_libsvm_str(&text, "p").unwrap();
        let back = parse_libsvm_str(&to_libsvm(&d), "p").unwrap();
        prop_assert_eq!(d.labels.len(), rows.len());
        prop_assert_eq!(&d.samples, &back.samples);
        prop_assert_eq!(&d.labels, &back.labels);
        for (parsed, orig) in d.samples.iter().zip(&rows) {
            let o: Vec<(usize, f64)> = orig.iter().map(|(k, v)| (*k, *v)).collect();
            prop_assert_eq!(parsed, &o);
        }
    }
}
