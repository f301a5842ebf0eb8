//! Built-in example algebras, shipped as JSON data files.

pub const SEMISIMPLE1: &str = include_str!("../fixtures/semisimple1.json");
pub const A2_DOMINANT: &str = include_str!("../fixtures/a2-dominant.json");
pub const SL2_REGULAR: &str = include_str!("../fixtures/sl2-regular.json");
pub const SL2_REGULAR_BADHT: &str = include_str!("../fixtures/sl2-regular-badht.json");
pub const DIGON_S1: &str = include_str!("../fixtures/digon-s1.json");
pub const A3_ZERO_DESC: &str = include_str!("../fixtures/a3-zero-desc.json");
pub const A3_ZERO_ASC: &str = include_str!("../fixtures/a3-zero-asc.json");
pub const A3_ZERO_GAP: &str = include_str!("../fixtures/a3-zero-gap.json");

/// The six example names, in listing order.
pub const NAMES: [&str; 6] =
    ["semisimple1", "a2-dominant", "sl2-regular", "sl2-regular-badht", "digon-s1", "a3-zero"];

/// Height assignments shipped for `a3-zero`; the first is the default.
pub const A3_VARIANTS: [&str; 3] = ["desc", "asc", "gap"];

/// Every shipped file, keyed by its document name.
pub const ALL: [(&str, &str); 8] = [
    ("semisimple1", SEMISIMPLE1),
    ("a2-dominant", A2_DOMINANT),
    ("sl2-regular", SL2_REGULAR),
    ("sl2-regular-badht", SL2_REGULAR_BADHT),
    ("digon-s1", DIGON_S1),
    ("a3-zero-desc", A3_ZERO_DESC),
    ("a3-zero-asc", A3_ZERO_ASC),
    ("a3-zero-gap", A3_ZERO_GAP),
];

pub fn lookup(name: &str, variant: Option<&str>) -> Option<&'static str> {
    match (name, variant) {
        ("a3-zero", None | Some("desc")) => Some(A3_ZERO_DESC),
        ("a3-zero", Some("asc")) => Some(A3_ZERO_ASC),
        ("a3-zero", Some("gap")) => Some(A3_ZERO_GAP),
        (_, None) => ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t),
        _ => None,
    }
}
