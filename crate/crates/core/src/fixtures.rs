//! Bundled example transducers.

use crate::sst::{parse_sst, Sst};

/// Deterministic appender over `{a}`.
pub const ID_SRC: &str = include_str!("../fixtures/id.sst");
/// Two-sided count over `{0,1}`; 2-valued.
pub const TSC_SRC: &str = include_str!("../fixtures/tsc.sst");
/// Two-sided count with `X0` seeded by `1`; not finite-valued.
pub const TSC1_SRC: &str = include_str!("../fixtures/tsc1.sst");
/// Selects one 2-bit block of the input; 4-valued, not finite-ambiguous.
pub const R2_SRC: &str = include_str!("../fixtures/r2.sst");
/// Copies or drops every `a`; exponentially ambiguous and not finite-valued.
pub const AMB_SRC: &str = include_str!("../fixtures/amb.sst");

pub const ALL: [(&str, &str); 5] = [
    ("id", ID_SRC),
    ("tsc", TSC_SRC),
    ("tsc1", TSC1_SRC),
    ("r2", R2_SRC),
    ("amb", AMB_SRC),
];

pub fn id() -> Sst {
    parse_sst(ID_SRC).expect("bundled fixture parses")
}

pub fn tsc() -> Sst {
    parse_sst(TSC_SRC).expect("bundled fixture parses")
}

pub fn tsc1() -> Sst {
    parse_sst(TSC1_SRC).expect("bundled fixture parses")
}

pub fn r2() -> Sst {
    parse_sst(R2_SRC).expect("bundled fixture parses")
}

pub fn amb() -> Sst {
    parse_sst(AMB_SRC).expect("bundled fixture parses")
}

pub fn by_name(name: &str) -> Option<Sst> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| parse_sst(src).expect("bundled fixture parses"))
}
