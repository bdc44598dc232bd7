macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run_example().expect("example should run");
        }
    };
}

example!(dirac_algebra);
example!(field_profiles);
example!(classical_paths);
example!(transverse_kernel);
example!(plane_wave_dressing);
example!(propagator);
example!(magnetic_limit);
example!(dirac_lift);
example!(config_run);
