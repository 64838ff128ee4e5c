//! Run the corner-generization check for a degree-matrix shape and print the
//! comparison, followed by the full JSON report.
//!
//! Usage: ghost_report [n] [b,b,...] [a,a,...] [row] [col]
//! Defaults to the twisted-cubic-style corner: n = 1, b = -2,-1,-1,
//! a = -1,0,0,0, corner (row 3, col 0).

use detstrata::{verify_generization, DegreeMatrixSpec};

fn parse_list(s: &str) -> Vec<i64> {
    s.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| p.trim().parse().expect("twist lists are comma-separated integers"))
        .collect()
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(1, |s| s.parse().expect("n"));
    let b = args.get(1).map_or(vec![-2, -1, -1], |s| parse_list(s));
    let a = args.get(2).map_or(vec![-1, 0, 0, 0], |s| parse_list(s));
    let row: usize = args.get(3).map_or(3, |s| s.parse().expect("row"));
    let col: usize = args.get(4).map_or(0, |s| s.parse().expect("col"));

    let spec = match DegreeMatrixSpec::new(n, b, a) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("invalid shape: {e}");
            std::process::exit(2);
        }
    };
    match verify_generization(&spec, row, col, &[]) {
        Ok(report) => {
            print!("{}", report.render_comparison());
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        Err(e) => {
            eprintln!("generization check failed: {e}");
            std::process::exit(2);
        }
    }
}
