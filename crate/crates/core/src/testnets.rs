//! Hand-built nets shared by the unit tests.

use crate::model::{CpNet, NetBuilder};

/// A, B, C, D with `Pa(A)={D}, Pa(B)={A}, Pa(C)={B}, Pa(D)={C}`.
pub fn cyclic4() -> CpNet {
    NetBuilder::new()
        .variable("A", &["a", "abar"])
        .variable("B", &["b", "bbar"])
        .variable("C", &["c", "cbar"])
        .variable("D", &["d", "dbar"])
        .parents("A", &["D"])
        .parents("B", &["A"])
        .parents("C", &["B"])
        .parents("D", &["C"])
        .row("A", &["d"], &["a", "abar"])
        .row("A", &["dbar"], &["a", "abar"])
        .row("B", &["a"], &["b", "bbar"])
        .row("B", &["abar"], &["bbar", "b"])
        .row("C", &["b"], &["c", "cbar"])
        .row("C", &["bbar"], &["cbar", "c"])
        .row("D", &["c"], &["d", "dbar"])
        .row("D", &["cbar"], &["dbar", "d"])
        .build()
        .unwrap()
}

/// A and B independent, `Pa(C)={A,B}` (c preferred iff A and B agree),
/// `Pa(D)={C}`.
pub fn acyclic4() -> CpNet {
    NetBuilder::new()
        .variable("A", &["a", "abar"])
        .variable("B", &["b", "bbar"])
        .variable("C", &["c", "cbar"])
        .variable("D", &["d", "dbar"])
        .parents("C", &["A", "B"])
        .parents("D", &["C"])
        .row("A", &[], &["a", "abar"])
        .row("B", &[], &["b", "bbar"])
        .row("C", &["a", "b"], &["c", "cbar"])
        .row("C", &["a", "bbar"], &["cbar", "c"])
        .row("C", &["abar", "b"], &["cbar", "c"])
        .row("C", &["abar", "bbar"], &["c", "cbar"])
        .row("D", &["c"], &["d", "dbar"])
        .row("D", &["cbar"], &["dbar", "d"])
        .build()
        .unwrap()
}

/// Two variables whose flips form the cycle `ab ≻ ab̄ ≻ āb̄ ≻ āb ≻ ab`.
pub fn two_cycle() -> CpNet {
    NetBuilder::new()
        .variable("A", &["a", "abar"])
        .variable("B", &["b", "bbar"])
        .parents("A", &["B"])
        .parents("B", &["A"])
        .row("A", &["b"], &["abar", "a"])
        .row("A", &["bbar"], &["a", "abar"])
        .row("B", &["a"], &["b", "bbar"])
        .row("B", &["abar"], &["bbar", "b"])
        .build()
        .unwrap()
}

/// X, Y independent; Z has parents X and Y but the same order in every row.
pub fn redundant3() -> CpNet {
    NetBuilder::new()
        .variable("X", &["a1", "a2"])
        .variable("Y", &["b1", "b2"])
        .variable("Z", &["c1", "c2"])
        .parents("Z", &["X", "Y"])
        .row("X", &[], &["a1", "a2"])
        .row("Y", &[], &["b2", "b1"])
        .row("Z", &["a1", "b1"], &["c2", "c1"])
        .row("Z", &["a1", "b2"], &["c2", "c1"])
        .row("Z", &["a2", "b1"], &["c2", "c1"])
        .row("Z", &["a2", "b2"], &["c2", "c1"])
        .build()
        .unwrap()
}

/// Named outcome in variable order, e.g. `outcome(&net, &["a", "b"])`.
pub fn outcome(net: &CpNet, names: &[&str]) -> crate::model::Outcome {
    net.outcome_from_names(names).unwrap()
}
