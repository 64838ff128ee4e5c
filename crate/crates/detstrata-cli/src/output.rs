//! Tagged JSON values: every number the CLI prints carries a `method` tag
//! naming how it was obtained, so downstream consumers can tell closed-form
//! evaluations from linear algebra, Gröbner computations, and
//! bound-truncated ones.

use serde_json::{json, Value};

pub const CLOSED_FORM: &str = "closed-form";
pub const LINEAR_ALGEBRA: &str = "linear-algebra";
pub const GROEBNER: &str = "groebner";
pub const TRUNCATED: &str = "truncated";

/// Wrap a value with its computation method.
pub fn tagged(value: impl Into<Value>, method: &str) -> Value {
    json!({ "value": value.into(), "method": method })
}

/// A Betti table as sorted (homological, internal, count) triples.
pub fn table_triples(table: &detstrata::BettiTable) -> Value {
    Value::Array(
        table
            .entries()
            .map(|(i, j, c)| json!([i, j, c]))
            .collect(),
    )
}
