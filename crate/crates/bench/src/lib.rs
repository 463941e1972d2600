//! Benchmark inputs shared by the bench targets.

use mpcomm_core::scenario::{parse_inequality, Kind, ParsedInequality, ScenarioSpec};

pub fn i6() -> (ScenarioSpec, ParsedInequality) {
    let spec = ScenarioSpec::two_sender(2, 2, 4, Kind::AntiDistinguishability);
    let ineq = parse_inequality(
        &spec,
        "p(1|1,2)-p(1|2,2)-p(2|1,1)+p(2|2,1)+p(2|1,2)-p(2|2,2)+p(3|2,1)-p(3|2,2) <= 2A1+2A2-2",
    )
    .unwrap();
    (spec, ineq)
}

pub fn i1() -> (ScenarioSpec, ParsedInequality) {
    let spec = ScenarioSpec::two_sender(3, 2, 2, Kind::Distinguishability);
    let ineq = parse_inequality(&spec, "p(2|1,1)-3p(2|2,1)+p(2|3,1)-p(2|1,2)+p(2|2,2)+p(2|3,2) <= 6D1+2D2-3").unwrap();
    (spec, ineq)
}
