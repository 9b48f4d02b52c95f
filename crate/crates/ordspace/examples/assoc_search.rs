//! Exhaustive search over small sign-matrix candidates for failures of the
//! value-set associativity law.

use ordspace::space::{verify_axioms, AxiomVerdict, FiniteSpace};

fn main() {
    for rank in 3..=5usize {
        let candidates: Vec<u64> = (0..1u64 << rank).filter(|r| r & 1 == 1).collect();
        let n_cand = candidates.len();
        let mut found = 0u32;
        let mut valid = 0u64;
        for mask in 1u64..1 << n_cand {
            let rows: Vec<u64> = (0..n_cand)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| candidates[i])
                .collect();
            if rows.len() < 3 {
                continue;
            }
            let names = (0..rank).map(|i| format!("g{}", i)).collect();
            let pts = rows.iter().enumerate().map(|(i, &r)| (format!("p{}", i), r)).collect();
            let Ok(space) = FiniteSpace::new(names, 1, pts) else { continue };
            valid += 1;
            if let AxiomVerdict::Fail(f) = verify_axioms(&space).unwrap() {
                found += 1;
                if found <= 3 {
                    println!("rank {} rows {:?} FAILS: {:?}", rank, rows, f);
                }
            }
        }
        println!("rank {}: {} structurally valid candidates, {} fail associativity", rank, valid, found);
    }
}
