//! Algebraic side conditions on the peripheral data of a non-orientable
//! surface-knot, checked by tracing words through coset tables.

use serde::Serialize;

use crate::enumeration::{enumerate, CosetTable, EnumerationError, EnumerationLimits, TableId};
use crate::input::SurfaceKnotInput;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check needed a coset table whose enumeration ran out of budget.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

/// Names of the individual checks, in report order.
pub mod checks {
    pub const P_PLUS_IN_P: &str = "p_plus_in_p";
    pub const N_IN_P: &str = "n_in_p";
    pub const N_IN_P_PLUS: &str = "n_in_p_plus";
    pub const N_NORMALIZES_P_PLUS: &str = "n_normalizes_p_plus";
    pub const N_SQUARED_IN_P_PLUS: &str = "n_squared_in_p_plus";
    pub const P_IS_P_PLUS_UNION_N_P_PLUS: &str = "p_is_p_plus_union_n_p_plus";
}

/// Proof that `n` normalizes `P+` and squares into it, for one `P+` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCertificate {
    pub table: TableId,
    pub n: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub twist: Option<TwistCertificate>,
}

impl ValidationReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    /// Every check passed; no failures and no unknowns.
    pub fn is_passing(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Whether a twist by `n` on double cosets of `table` was certified.
    pub fn certifies_twist(&self, table: TableId, n: &Word) -> bool {
        n.is_empty()
            || self
                .twist
                .as_ref()
                .is_some_and(|t| t.table == table && &t.n == n)
    }

    /// Non-passing checks as `name: detail` lines.
    pub fn problems(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status != CheckStatus::Pass)
            .map(|c| format!("{} ({:?}): {}", c.name, c.status, c.detail))
            .collect()
    }
}

/// Enumerates the `P` and `P+` tables and validates against them.
pub fn validate(input: &SurfaceKnotInput, limits: EnumerationLimits) -> ValidationReport {
    if input.surface_orientable {
        return validate_tables(input, Err(&unneeded()), None);
    }
    let pres = &input.presentation;
    let p = enumerate(pres, &input.p_generators, limits);
    let pp = input
        .p_plus_generators
        .as_ref()
        .map(|g| enumerate(pres, g, limits));
    validate_tables(input, p.as_ref(), pp.as_ref().map(|r| r.as_ref()))
}

fn unneeded() -> EnumerationError {
    EnumerationError::InvalidLimits {
        max_live_cosets: 0,
        max_total_defined: 0,
    }
}

/// Validates against tables that have already been enumerated (or failed).
pub fn validate_tables(
    input: &SurfaceKnotInput,
    p_table: Result<&CosetTable, &EnumerationError>,
    p_plus_table: Option<Result<&CosetTable, &EnumerationError>>,
) -> ValidationReport {
    use checks::*;
    let all = [
        P_PLUS_IN_P,
        N_IN_P,
        N_IN_P_PLUS,
        N_NORMALIZES_P_PLUS,
        N_SQUARED_IN_P_PLUS,
        P_IS_P_PLUS_UNION_N_P_PLUS,
    ];
    if input.surface_orientable {
        return ValidationReport {
            checks: all
                .iter()
                .map(|&name| Check {
                    name,
                    status: CheckStatus::Pass,
                    detail: "vacuous: orientable surface".into(),
                })
                .collect(),
            twist: None,
        };
    }

    let pres = &input.presentation;
    let show = |w: &Word| pres.render(w);
    let empty = Vec::new();
    let p_plus_gens = input.p_plus_generators.as_ref().unwrap_or(&empty);
    let n = input.n_word.clone().unwrap_or_default();
    let n_inv = n.invert();
    let unknown = |name: &'static str, which: &str, e: &EnumerationError| Check {
        name,
        status: CheckStatus::Unknown,
        detail: format!("{which} table unavailable: {e}"),
    };
    let pp_table: Result<&CosetTable, EnumerationError> = match p_plus_table {
        Some(Ok(t)) => Ok(t),
        Some(Err(e)) => Err(e.clone()),
        None => Err(unneeded()),
    };

    // Membership of every word in `words` in the subgroup of `table`;
    // returns the offending words.
    let outside = |table: &CosetTable, words: &[Word]| -> Vec<String> {
        words
            .iter()
            .filter(|w| !table.contains(w).unwrap_or(false))
            .map(show)
            .collect()
    };
    let verdict = |name: &'static str, bad: Vec<String>, ok: String, what: &str| {
        if bad.is_empty() {
            Check {
                name,
                status: CheckStatus::Pass,
                detail: ok,
            }
        } else {
            Check {
                name,
                status: CheckStatus::Fail,
                detail: format!("{what}: {}", bad.join(" ; ")),
            }
        }
    };

    let mut out = Vec::new();
    match p_table {
        Ok(t) => {
            out.push(verdict(
                P_PLUS_IN_P,
                outside(t, p_plus_gens),
                "every P+ generator lies in P".into(),
                "P+ generators outside P",
            ));
            out.push(verdict(
                N_IN_P,
                outside(t, std::slice::from_ref(&n)),
                format!("n = {} lies in P", show(&n)),
                "n outside P",
            ));
        }
        Err(e) => {
            out.push(unknown(P_PLUS_IN_P, "P", e));
            out.push(unknown(N_IN_P, "P", e));
        }
    }

    let mut twist = None;
    match &pp_table {
        Ok(t) => {
            let n_in = t.contains(&n).unwrap_or(false);
            out.push(Check {
                name: N_IN_P_PLUS,
                status: CheckStatus::Pass,
                detail: if n_in {
                    format!("observed: n = {} lies in P+", show(&n))
                } else {
                    format!("observed: n = {} lies outside P+", show(&n))
                },
            });
            let conjugates: Vec<Word> = p_plus_gens
                .iter()
                .flat_map(|w| [n.concat(w).concat(&n_inv), n_inv.concat(w).concat(&n)])
                .collect();
            let normal = verdict(
                N_NORMALIZES_P_PLUS,
                outside(t, &conjugates),
                "n w n^-1 and n^-1 w n lie in P+ for every P+ generator w".into(),
                "conjugates outside P+",
            );
            let square = verdict(
                N_SQUARED_IN_P_PLUS,
                outside(t, &[n.concat(&n)]),
                "n^2 lies in P+".into(),
                "n^2 outside P+",
            );
            if normal.status == CheckStatus::Pass && square.status == CheckStatus::Pass {
                twist = Some(TwistCertificate {
                    table: t.id(),
                    n: n.clone(),
                });
            }
            out.push(normal);
            out.push(square);
            let uncovered: Vec<String> = input
                .p_generators
                .iter()
                .filter(|p| {
                    !t.contains(p).unwrap_or(false)
                        && !t.contains(&n_inv.concat(p)).unwrap_or(false)
                })
                .map(show)
                .collect();
            out.push(verdict(
                P_IS_P_PLUS_UNION_N_P_PLUS,
                uncovered,
                "every P generator lies in P+ or n P+".into(),
                "P generators outside P+ and n P+",
            ));
        }
        Err(e) => {
            for name in [
                N_IN_P_PLUS,
                N_NORMALIZES_P_PLUS,
                N_SQUARED_IN_P_PLUS,
                P_IS_P_PLUS_UNION_N_P_PLUS,
            ] {
                out.push(unknown(name, "P+", e));
            }
        }
    }
    ValidationReport { checks: out, twist }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    const D8: &str = "group: r s\nrel: r^4\nrel: s^2\nrel: r s r s\nP: r^2 , s\nP+: r^2\nn: s\norientable: false";

    #[test]
    fn dihedral_case3_passes() {
        let k = parse_input(D8).unwrap();
        let report = validate(&k, EnumerationLimits::default());
        assert!(report.is_passing(), "{:?}", report.problems());
        assert!(report
            .get(checks::N_IN_P_PLUS)
            .unwrap()
            .detail
            .contains("outside"));
        assert!(report.twist.is_some());
    }

    #[test]
    fn orientable_is_vacuous() {
        let k = parse_input("group: t\nP: t\norientable: true").unwrap();
        let report = validate(&k, EnumerationLimits::default());
        assert!(report.is_passing());
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn p_plus_outside_p_is_reported() {
        let text = D8
            .replace("P: r^2 , s", "P: r^2")
            .replace("P+: r^2", "P+: s");
        let k = parse_input(&text).unwrap();
        let report = validate(&k, EnumerationLimits::default());
        let a = report.get(checks::P_PLUS_IN_P).unwrap();
        assert_eq!(a.status, CheckStatus::Fail);
        assert!(a.detail.contains('s'));
        assert!(report.has_failures());
    }

    #[test]
    fn non_normalizing_n_fails() {
        // In S3 = <a, b>, P+ = <b> is normal but take P+ = <a> with n = b:
        // b a b^-1 is not in <a>.
        let k = parse_input(
            "group: a b\nrel: a^2\nrel: b^3\nrel: a b a b\nP: a , b\nP+: a\nn: b\norientable: false",
        )
        .unwrap();
        let report = validate(&k, EnumerationLimits::default());
        assert_eq!(
            report.get(checks::N_NORMALIZES_P_PLUS).unwrap().status,
            CheckStatus::Fail
        );
        assert_eq!(
            report.get(checks::N_SQUARED_IN_P_PLUS).unwrap().status,
            CheckStatus::Fail
        );
        assert!(report.twist.is_none());
    }

    #[test]
    fn exhausted_tables_are_unknown() {
        let k =
            parse_input("group: a b\nrel: a b a^-1 b^-1\nP: a\nP+: a^2\nn: a\norientable: false")
                .unwrap();
        let report = validate(&k, EnumerationLimits::new(64, 640).unwrap());
        assert!(!report.has_failures());
        assert!(!report.is_passing());
        assert!(report
            .checks
            .iter()
            .all(|c| c.status == CheckStatus::Unknown));
    }
}
