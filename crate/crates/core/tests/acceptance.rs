//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use lattice_hankel::exactalg::Scalar;
use lattice_hankel::pathcount::{f_series, PathParams};
use lattice_hankel::verify::{criteria, Suite};

fn corrupted(p: &PathParams, n_max: usize) -> Vec<Scalar> {
    let mut f = f_series(p, n_max);
    if p.ell() == 3 && n_max >= 7 {
        f[7] += &Scalar::one();
    }
    f
}

fn main() -> ExitCode {
    let reports = Suite::default().run(None).expect("no filter");
    assert_eq!(reports.len(), criteria().len());
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();

    // the suite must notice a single wrong term
    let mutated = Suite::with_series(corrupted);
    let prop3 = &mutated.run(Some("prop3")).expect("known")[0];
    let prop2 = &mutated.run(Some("prop2")).expect("known")[0];
    let caught = !prop3.passed && prop2.passed;
    println!("mutation f(7)+1 for l = 3: prop3 {}, prop2 {} ({})", verdict(prop3.passed), verdict(prop2.passed), prop3.detail);

    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    if failed.is_empty() && caught {
        ExitCode::SUCCESS
    } else {
        if !failed.is_empty() {
            eprintln!("failed criteria: {failed:?}");
        }
        if !caught {
            eprintln!("the corrupted sequence went unnoticed");
        }
        ExitCode::FAILURE
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "passes"
    } else {
        "fails"
    }
}
