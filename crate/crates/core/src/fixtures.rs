//! The shipped example graphs.

use crate::format::parse_graph;
use crate::gog::GraphOfGroups;

pub const SOURCES: [(&str, &str); 10] = [
    ("C2C2", include_str!("../fixtures/c2c2.gog")),
    ("C2C2C2", include_str!("../fixtures/c2c2c2.gog")),
    ("S3S3", include_str!("../fixtures/s3s3.gog")),
    ("ROSE2", include_str!("../fixtures/rose2.gog")),
    ("ZLOOP", include_str!("../fixtures/zloop.gog")),
    ("C2Z", include_str!("../fixtures/c2z.gog")),
    ("C2XZ", include_str!("../fixtures/c2xz.gog")),
    ("Q", include_str!("../fixtures/q.gog")),
    ("V4V4", include_str!("../fixtures/v4v4.gog")),
    ("BIG", include_str!("../fixtures/big.gog")),
];

/// Parses a shipped fixture by name (case-insensitive).
pub fn by_name(name: &str) -> Option<GraphOfGroups> {
    SOURCES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| parse_graph(text).expect("shipped fixture parses"))
}

pub fn all() -> Vec<(&'static str, GraphOfGroups)> {
    SOURCES.iter().map(|(n, t)| (*n, parse_graph(t).expect("shipped fixture parses"))).collect()
}

macro_rules! fixture_fns {
    ($($f:ident => $n:literal),*) => {
        $(pub fn $f() -> GraphOfGroups { by_name($n).expect("known fixture") })*
    };
}

fixture_fns!(c2c2 => "C2C2", c2c2c2 => "C2C2C2", s3s3 => "S3S3", rose2 => "ROSE2", zloop => "ZLOOP",
    c2z => "C2Z", c2xz => "C2XZ", q => "Q", v4v4 => "V4V4", big => "BIG");
