//! Regenerates `tests/golden/oracle_q*.txt` and the convergence log.
//!
//! ```text
//! cargo run --release -p rosen-morse --example oracle_golden
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rosen_morse::oracle::{fd_eigen, raw_eigenvalues, GridSpec};
use rosen_morse::PotentialParams;

fn main() -> rosen_morse::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut log = String::from("# fd_eigen convergence study, r_max = 40, M = hbar = a = 1, V1 = 10, V2 = 2.5\n");
    for (tag, q) in [("0.5", 0.5), ("1", 1.0), ("1.5", 1.5)] {
        let p = PotentialParams::new(10.0, 2.5, q)?;
        let grid = GridSpec::standard(&p);
        let result = fd_eigen(&p, &grid, -2.5)?;
        let below_v2 = fd_eigen(&p, &grid, 2.5)?;
        let count = below_v2.eigenvalues.len();
        writeln!(
            log,
            "\n## q = {tag}: {} eigenvalues below -V2, {count} below V2",
            result.eigenvalues.len()
        )
        .unwrap();
        writeln!(log, "# n_r  h  E(h)  E(h/2)  E(h/4)  d1=E(h)-E(h/2)  d2=E(h/2)-E(h/4)  d1/d2  R(h)  R(h/2)").unwrap();
        let e: Vec<Vec<f64>> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&h| raw_eigenvalues(&p, &GridSpec::new(40.0, h).unwrap(), count))
            .collect::<Result<_, _>>()?;
        for (k, ((&a, &b), &c)) in e[0].iter().zip(&e[1]).zip(&e[2]).enumerate() {
            let (r1, r2) = ((4.0 * b - a) / 3.0, (4.0 * c - b) / 3.0);
            writeln!(
                log,
                "{k} 1e-3 {a:.15e} {b:.15e} {c:.15e} {:.3e} {:.3e} {:.4} {r1:.15e} {r2:.15e}",
                a - b,
                b - c,
                (a - b) / (b - c)
            )
            .unwrap();
        }
        let mut golden = format!("# n_r E   fd_eigen, r_max = 40, h = 1e-3 with h/2 extrapolation, q = {tag}\n");
        for (k, e) in result.eigenvalues.iter().enumerate() {
            writeln!(golden, "{k} {e:.14e}").unwrap();
        }
        fs::write(dir.join(format!("oracle_q{tag}.txt")), golden)?;
        let mut golden = format!("# n_r E   fd_eigen below V2, r_max = 40, h = 1e-3 with h/2 extrapolation, q = {tag}\n");
        for (k, e) in below_v2.eigenvalues.iter().enumerate() {
            writeln!(golden, "{k} {e:.14e}").unwrap();
        }
        fs::write(dir.join(format!("oracle_q{tag}_below_v2.txt")), golden)?;
    }
    fs::write(dir.join("oracle_convergence.log"), log)?;
    Ok(())
}
