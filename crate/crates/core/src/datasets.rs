//! Cases shipped with the crate. Each system comes in a DC and an AC
//! variant; see `data/PROVENANCE.md` for where every number comes from.

use crate::caseio::{parse_case, CaseError};
use crate::network::NetworkCase;
use crate::powerflow::Model;

pub const GARVER6_DC: &str = include_str!("../data/garver6-dc.case");
pub const GARVER6_AC: &str = include_str!("../data/garver6-ac.case");
pub const IEEE24_DC: &str = include_str!("../data/ieee24-dc.case");
pub const IEEE24_AC: &str = include_str!("../data/ieee24-ac.case");

/// Every bundled file as `(name, text)`.
pub const ALL: [(&str, &str); 4] = [
    ("garver6-dc", GARVER6_DC),
    ("garver6-ac", GARVER6_AC),
    ("ieee24-dc", IEEE24_DC),
    ("ieee24-ac", IEEE24_AC),
];

/// Text of a bundled case. `name` is either a full file name such as
/// `garver6-ac` or a system name (`garver6`, `ieee24`), in which case the
/// variant matching `model` is returned.
pub fn bundled_text(name: &str, model: Model) -> Option<&'static str> {
    let full = match name {
        "garver6" | "ieee24" => format!("{name}-{model}"),
        other => other.to_string(),
    };
    ALL.iter().find(|(n, _)| *n == full).map(|(_, t)| *t)
}

pub fn bundled(name: &str, model: Model) -> Option<Result<NetworkCase, CaseError>> {
    bundled_text(name, model).map(parse_case)
}

pub fn garver6(model: Model) -> NetworkCase {
    bundled("garver6", model)
        .expect("bundled")
        .expect("bundled case parses")
}

pub fn ieee24(model: Model) -> NetworkCase {
    bundled("ieee24", model)
        .expect("bundled")
        .expect("bundled case parses")
}

/// Published reference plans for the bundled studies, as
/// `(from, to, new circuits)`.
pub mod plans {
    pub type Pairs = &'static [(u32, u32, u32)];

    /// Garver DC with circuit outage rates.
    pub const GARVER6_DC_FOR: Pairs = &[(2, 6, 3), (3, 5, 2), (4, 6, 3)];
    /// Garver AC N-1 at mean conditions.
    pub const GARVER6_AC_N1_CRISP: Pairs = &[(2, 6, 2), (3, 5, 2), (4, 6, 2)];
    /// Garver AC N-1 under uncertainty.
    pub const GARVER6_AC_N1: Pairs = &[(2, 3, 2), (2, 6, 3), (3, 5, 2), (4, 6, 3)];
    /// IEEE 24 DC with circuit outage rates. The published list names
    /// 10-11 and 10-12 twice; counted once each it gives the stated 22 lines.
    pub const IEEE24_DC_FOR: Pairs = &[
        (1, 5, 1),
        (2, 4, 1),
        (3, 9, 1),
        (3, 24, 1),
        (6, 10, 2),
        (7, 8, 2),
        (8, 9, 2),
        (9, 11, 1),
        (10, 11, 1),
        (10, 12, 1),
        (11, 13, 1),
        (12, 13, 1),
        (14, 16, 2),
        (15, 21, 1),
        (15, 24, 1),
        (16, 17, 1),
        (17, 18, 1),
        (20, 23, 1),
    ];
    /// IEEE 24 AC at mean conditions.
    pub const IEEE24_AC_CRISP: Pairs = &[
        (1, 5, 1),
        (3, 9, 1),
        (4, 9, 1),
        (6, 10, 2),
        (7, 8, 3),
        (10, 11, 1),
        (11, 13, 1),
        (14, 16, 1),
        (14, 23, 1),
        (20, 23, 1),
    ];
    /// IEEE 24 AC with circuit outage rates.
    pub const IEEE24_AC_FOR: Pairs = &[
        (1, 5, 1),
        (3, 24, 1),
        (6, 10, 2),
        (7, 8, 2),
        (8, 10, 1),
        (9, 12, 1),
        (10, 11, 2),
        (11, 13, 1),
        (14, 16, 1),
        (15, 24, 1),
        (16, 17, 1),
        (20, 23, 1),
    ];
    /// IEEE 24 AC N-1.
    pub const IEEE24_AC_N1: Pairs = &[
        (1, 5, 1),
        (2, 4, 1),
        (3, 24, 1),
        (6, 10, 2),
        (7, 8, 2),
        (8, 9, 2),
        (10, 12, 1),
        (12, 23, 1),
        (14, 16, 2),
        (15, 24, 1),
        (16, 17, 2),
        (17, 18, 1),
        (20, 23, 1),
        (21, 22, 1),
    ];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Severity;

    #[test]
    fn every_bundled_case_is_clean() {
        for (name, text) in ALL {
            let case = parse_case(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(case.name, name);
            let errors: Vec<_> = case
                .validate()
                .into_iter()
                .filter(|d| d.severity == Severity::Error)
                .collect();
            assert!(errors.is_empty(), "{name}: {errors:?}");
            assert!(case.uncertainty.is_some());
        }
    }

    #[test]
    fn system_names_pick_the_model_variant() {
        assert_eq!(bundled_text("garver6", Model::Ac), Some(GARVER6_AC));
        assert_eq!(bundled_text("ieee24", Model::Dc), Some(IEEE24_DC));
        assert_eq!(bundled_text("ieee24-ac", Model::Dc), Some(IEEE24_AC));
        assert!(bundled_text("ieee118", Model::Dc).is_none());
    }

    #[test]
    fn reference_plans_fit_their_cases() {
        use crate::network::{plan_cost, ExpansionPlan};
        let dc = garver6(Model::Dc);
        let cost = |case: &NetworkCase, p: plans::Pairs| {
            plan_cost(
                &ExpansionPlan::from_pairs(case, p).expect("corridors exist"),
                case,
            )
            .unwrap()
        };
        assert_eq!(cost(&dc, plans::GARVER6_DC_FOR), 220.0);
        let ac = garver6(Model::Ac);
        assert_eq!(cost(&ac, plans::GARVER6_AC_N1_CRISP), 160.0);
        assert_eq!(cost(&ac, plans::GARVER6_AC_N1), 260.0);
        let dc24 = ieee24(Model::Dc);
        let p = ExpansionPlan::from_pairs(&dc24, plans::IEEE24_DC_FOR).unwrap();
        assert_eq!(p.total_lines(), 22);
        let ac24 = ieee24(Model::Ac);
        for p in [
            plans::IEEE24_AC_CRISP,
            plans::IEEE24_AC_FOR,
            plans::IEEE24_AC_N1,
        ] {
            assert!(ExpansionPlan::from_pairs(&ac24, p).is_some());
        }
    }
}
