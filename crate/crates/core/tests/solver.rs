use gdw::oracles::two_factor_grid_bound;
use gdw::solver::{bound_table, objective, solve_bound, SolveStatus, SolverConfig};
use gdw::structure::{enumerate_structures, Factor, Filter, Kind, ProductStructure};
use gdw::tradeoff::optimal_asp_single;

fn s(text: &str) -> ProductStructure {
    text.parse().unwrap()
}

#[test]
fn matches_lattice_maximum_on_two_factor_structures() {
    let config = SolverConfig::default();
    for name in ["Q13*Q3", "Q512*Q2", "Q32*Q32", "Q2*C2"] {
        let structure = s(name);
        let lattice = two_factor_grid_bound(&structure, 10_000).unwrap();
        let solved = solve_bound(&structure, &config).unwrap();
        assert!(
            (solved.asp - lattice).abs() <= 2e-7,
            "{name}: solver {} lattice {lattice}",
            solved.asp
        );
        assert!(solved.asp >= lattice - 1e-12, "{name}: lattice beats the solver");
        assert_eq!(solved.status, SolveStatus::Converged);
    }
}

#[test]
fn argmax_reproduces_reported_value() {
    let config = SolverConfig::default();
    for row in bound_table(36, Filter::All, &config).unwrap() {
        let value = objective(&row.structure, &row.argmax).unwrap();
        assert!((value - row.asp).abs() <= 1e-15, "{}", row.structure);
    }
}

#[test]
fn known_small_values() {
    let config = SolverConfig::default();
    let cases = [
        ("Q2*Q2", 0.7285533906, 1e-9),
        ("Q2*C2", 0.6545084972, 1e-9),
        ("C2*C2", 0.625, 1e-12),
        ("Q32*Q32", 0.500520833, 1e-9),
    ];
    for (name, want, tol) in cases {
        let got = solve_bound(&s(name), &config).unwrap().asp;
        assert!((got - want).abs() <= tol, "{name}: {got} vs {want}");
    }
}

#[test]
fn quantum_factors_dominate_classical_ones() {
    let config = SolverConfig::default();
    let table = bound_table(64, Filter::All, &config).unwrap();
    let value = |st: &ProductStructure| table.iter().find(|r| &r.structure == st).unwrap().asp;
    let top = optimal_asp_single(64, Kind::Quantum).unwrap();
    let bottom = optimal_asp_single(64, Kind::Classical).unwrap();
    for row in &table {
        assert!(row.asp <= top + 1e-12 && row.asp >= bottom - 1e-12, "{}", row.structure);
        if row.structure.factors().iter().all(|f| !f.is_quantum()) {
            assert!((row.asp - bottom).abs() <= 1e-12, "{} should equal C64", row.structure);
        }
        // upgrading any single classical factor never lowers the bound
        for (i, f) in row.structure.factors().iter().enumerate() {
            if f.is_quantum() {
                continue;
            }
            let mut upgraded: Vec<Factor> = row.structure.factors().to_vec();
            upgraded[i] = Factor::quantum(f.dim()).unwrap();
            let up = ProductStructure::new(upgraded).unwrap();
            assert!(value(&up) >= row.asp - 1e-12, "{} -> {}", row.structure, up);
        }
    }
}

#[test]
fn d4_cases_are_ordered() {
    let config = SolverConfig::default();
    let table = bound_table(4, Filter::All, &config).unwrap();
    let names: Vec<String> = table.iter().map(|r| r.structure.to_string()).collect();
    assert_eq!(names, ["Q4", "Q2*Q2", "Q2*C2", "C4", "C2*C2"]);
    assert!(table[0].asp > table[1].asp && table[1].asp > table[2].asp && table[2].asp > table[3].asp);
    assert!((table[3].asp - table[4].asp).abs() <= 1e-12);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let config = SolverConfig::default();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| bound_table(96, Filter::All, &config).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
}

#[test]
fn seed_changes_only_random_starts() {
    let base = SolverConfig::default();
    let other = SolverConfig { seed: 99, ..base };
    for name in ["Q13*Q3", "Q8*Q4*Q2", "Q6*C3*Q2"] {
        let a = solve_bound(&s(name), &base).unwrap();
        let b = solve_bound(&s(name), &other).unwrap();
        assert!((a.asp - b.asp).abs() <= 1e-12, "{name}");
    }
}

#[test]
fn enumeration_and_table_agree() {
    let config = SolverConfig::default();
    for d in [12u64, 30, 64] {
        for filter in [Filter::All, Filter::QuantumOnly] {
            let structures = enumerate_structures(d, filter).unwrap();
            let table = bound_table(d, filter, &config).unwrap();
            assert_eq!(structures.len(), table.len());
            assert!(table.windows(2).all(|w| w[0].asp >= w[1].asp));
        }
    }
}

#[test]
fn rejects_bad_inputs() {
    let config = SolverConfig::default();
    assert!(bound_table(1, Filter::All, &config).is_err());
    assert!(objective(&s("Q4*Q2"), &[0.5]).is_err());
    assert!(objective(&s("Q4*Q2"), &[0.1, 0.6]).is_err());
    let bad = SolverConfig {
        box_tolerance: -1.0,
        ..config
    };
    assert!(solve_bound(&s("Q4*Q2"), &bad).is_err());
}
