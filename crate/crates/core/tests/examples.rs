mod witness_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/witness_table.rs"));
}

mod tradeoff_curves {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tradeoff_curves.rs"));
}

mod mub_construction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mub_construction.rs"));
}

mod d39_two_maxima {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/d39_two_maxima.rs"));
}

mod photonic_experiment {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/photonic_experiment.rs"));
}

mod certify_pipeline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/certify_pipeline.rs"));
}

mod classical_rac {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classical_rac.rs"));
}

#[test]
fn witness_table_runs() {
    witness_table::run_example(64).expect("witness table example should run");
}

#[test]
fn tradeoff_curves_runs() {
    tradeoff_curves::run_example(16, 8).expect("trade-off example should run");
}

#[test]
fn mub_construction_runs() {
    mub_construction::run_example(1).expect("k=1 MUB example should run");
    mub_construction::run_example(4).expect("k=4 MUB example should run");
}

#[test]
fn d39_two_maxima_runs() {
    d39_two_maxima::run_example().expect("d=39 example should run");
}

#[test]
fn photonic_experiment_runs() {
    photonic_experiment::run_example(20_000).expect("photonic example should run");
}

#[test]
fn certify_pipeline_runs() {
    certify_pipeline::run_example(200_000).expect("certification example should run");
}

#[test]
fn classical_rac_runs() {
    classical_rac::run_example(1000).expect("oracle example should run");
}
