use gft_cli::fieldfile::{parse_grid, Encoding, FieldFile, Kind};
use gft_core::{Grid, Multivector, SampledField, Signature};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, Just(0.0), Just(-0.0), Just(f64::MIN_POSITIVE), Just(1e300), Just(-5e-324)]
}

fn field() -> impl Strategy<Value = SampledField> {
    (0usize..=2, 0usize..=2, prop::collection::vec(1usize..=3, 1..=3)).prop_flat_map(|(p, q, dims)| {
        let sig = Signature::new(p, q).unwrap();
        let m = dims.len();
        let nodes: usize = dims.iter().product();
        (
            prop::collection::vec(-10.0..10.0f64, m),
            prop::collection::vec(1e-3..10.0f64, m),
            prop::collection::vec(finite(), nodes * sig.blade_count()),
        )
            .prop_map(move |(origin, spacing, coeffs)| {
                let grid = Grid::new(dims.clone(), origin, spacing).unwrap();
                let data = coeffs
                    .chunks(sig.blade_count())
                    .map(|c| Multivector::from_coeffs(sig, c.to_vec()).unwrap())
                    .collect();
                SampledField::new(sig, grid, data).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn round_trip_is_exact(field in field(), spectrum in any::<bool>(), binary in any::<bool>()) {
        let kind = if spectrum { Kind::Spectrum } else { Kind::Field };
        let enc = if binary { Encoding::Binary } else { Encoding::Text };
        let file = FieldFile::new(kind, field);
        let bytes = file.to_bytes(enc);
        let back = FieldFile::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_bytes(enc), bytes.clone());
        prop_assert_eq!(&parse_grid(&bytes).unwrap(), file.field.grid());
    }
}
