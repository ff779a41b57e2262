use proptest::prelude::*;

use cuspforge::complex::SimplicialComplex;
use cuspforge::io::{parse_document, read_binary_from, write_binary_to, Document};
use cuspforge::moment_angle::real_moment_angle;

/// Random complexes on up to seven vertices, given by their facets.
fn complexes() -> impl Strategy<Value = SimplicialComplex> {
    (2usize..=7)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(1u32..(1 << n), 1..6)))
        .prop_filter_map("needs every vertex", |(n, masks)| {
            let facets = masks
                .iter()
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
                .collect();
            SimplicialComplex::new(n, facets).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplicial_json_round_trip(k in complexes()) {
        let doc = Document::from(&k);
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.into_simplicial().unwrap(), k);
    }

    #[test]
    fn cubical_json_and_binary_round_trip(k in complexes()) {
        let z = real_moment_angle(&k).unwrap();
        let text = serde_json::to_string(&Document::from(&z)).unwrap();
        prop_assert_eq!(parse_document(&text).unwrap().into_cubical().unwrap(), z.clone());

        let mut bytes = Vec::new();
        write_binary_to(&mut bytes, &z).unwrap();
        let back = read_binary_from(&mut bytes.as_slice()).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn truncated_binary_is_rejected(k in complexes(), cut in 1usize..16) {
        let z = real_moment_angle(&k).unwrap();
        let mut bytes = Vec::new();
        write_binary_to(&mut bytes, &z).unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(read_binary_from(&mut &bytes[..keep]).is_err());
    }
}
