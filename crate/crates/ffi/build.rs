fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("HIERCTL_H".to_string()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .include_item("HcProperty")
        .include_item("HcGadget")
        .generate()
        .expect("Unable to generate bindings")
        .write_to_file(format!("{crate_dir}/include/hierctl.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
}
