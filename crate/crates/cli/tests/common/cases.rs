//! Golden cases: report name and command line, the last word naming a fixture.

pub const CASES: &[(&str, &str)] = &[
    ("homology_times_two", "homology --complex M times_two.json"),
    ("homology_degree", "homology --complex M --degree -1 zmod12_basic.json"),
    ("homology_empty_workspace", "homology --complex M empty.json"),
    ("cone_projection", "cone --map proj z_torsion.json"),
    ("cone_quotient", "cone --map quotient qis_maps.json"),
    ("truncate_leq", "truncate --complex M --degree 0 zmod12_basic.json"),
    ("truncate_geq", "truncate --complex V --degree 1 --kind geq zmod8_window.json"),
    ("purity_contractible", "purity --complex K contractible.json"),
    ("purity_contractible_json", "purity --complex K --json contractible.json"),
    ("purity_exact_not_pure", "purity --complex E exact_not_pure.json"),
    ("purity_z_torsion", "purity --complex E z_torsion.json"),
    ("purity_mono_split", "purity --map split zmod12_basic.json"),
    ("purity_mono_not_pure", "purity --map double exact_not_pure.json"),
    ("qis_split_inclusion", "qis --map split_in qis_maps.json"),
    ("qis_quotient", "qis --map quotient qis_maps.json"),
    ("qis_not_quasi", "qis --map fromE exact_not_pure.json"),
    ("resolve_injective", "resolve --complex M --side injective zmod12_basic.json"),
    ("resolve_projective_json", "resolve --complex M --side projective --json zmod12_basic.json"),
    ("resolve_z_torsion", "resolve --complex M --side injective z_torsion.json"),
    ("resolve_free_projective", "resolve --complex F --side projective free_over_z.json"),
    ("resolve_free_injective", "resolve --complex F --side injective free_over_z.json"),
    ("resolve_depth_insufficient", "resolve --complex W --side injective --depth 1 zmod8_window.json"),
    ("towers_injective", "towers --complex W --side injective zmod8_window.json"),
    ("towers_projective", "towers --complex V --side projective zmod8_window.json"),
    ("phom_zmod12", "phom --m M --n N zmod12_basic.json"),
    ("phom_z_torsion", "phom --m S --n M z_torsion.json"),
    ("adjunction_triple", "adjunction --a A --b B --c C adjunction_triple.json"),
    ("adjunction_json", "adjunction --a N --b N --c N --json zmod12_basic.json"),
    ("batch", "batch --jobs 4 batch.json"),
    ("batch_json", "batch --jobs 2 --json batch.json"),
    ("validate_resolution", "validate-cert cert_resolution.json"),
    ("validate_tampered", "validate-cert cert_tampered.json"),
    ("error_dd", "homology --complex M bad_dd.json"),
    ("error_unresolved", "homology --complex M unresolved.json"),
    ("error_malformed", "homology --complex M malformed.json"),
];
