//! Evaluate one stratum end to end and print the full report as JSON.
//!
//! Usage: cargo run -p detstrata --example stratum_report -- [n] [b,b,...] [a,a,...]
//! Defaults to n = 2, b = 0,0, a = 1,1,2.

use detstrata::{evaluate_stratum, DegreeMatrixSpec};

fn parse_list(s: &str) -> Vec<i64> {
    s.split(',').map(|x| x.trim().parse().unwrap()).collect()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map_or(2, |s| s.parse().unwrap());
    let b = args.get(2).map_or(vec![0, 0], |s| parse_list(s));
    let a = args.get(3).map_or(vec![1, 1, 2], |s| parse_list(s));

    let spec = DegreeMatrixSpec::new(n, b, a).expect("invalid degree matrix shape");
    match evaluate_stratum(&spec) {
        Ok(report) => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
