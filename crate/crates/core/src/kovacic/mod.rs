//! Kovacic's algorithm for Fuchsian `w'' = r w`: necessary conditions for
//! the reducible and finite cases, the exhaustive dihedral search, and the
//! remaining case by elimination.

mod assign;
mod case1;
mod pexists;

pub use assign::{build_esets, count_by_degree, enumerate_assignments, Assignment, ESets, FactorESet};
pub use case1::{case1_necessary, case3_necessary, irrationality_check, Case1Witness, ModifiedExponent};
pub use pexists::{apply_operator, p_exists, FoundP, Method, PContext, PSearch, SearchOptions};

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::exact::RatFun;
use crate::nve::{singularity_profile, NormalFormODE, ProfileStatus, SingularityProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every case I, II and III condition failed.
    NonIntegrable,
    CaseII { p: FoundP, assignment: Assignment },
    PossiblyCaseI { witnesses: Vec<Case1Witness> },
    PossiblyCaseIII,
    NotFuchsian(String),
    Unsupported(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NonIntegrable => "NonIntegrable",
            Verdict::CaseII { .. } => "CaseII",
            Verdict::PossiblyCaseI { .. } => "PossiblyCaseI",
            Verdict::PossiblyCaseIII => "PossiblyCaseIII",
            Verdict::NotFuchsian(_) => "NotFuchsian",
            Verdict::Unsupported(_) => "Unsupported",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub assignment: Assignment,
    pub outcome: PSearch,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub profile: SingularityProfile,
    pub esets: Option<ESets>,
    pub case1: Vec<Case1Witness>,
    pub case3_possible: bool,
    /// Ordered by `(d, e, e_∞)`.
    pub ledger: Vec<LedgerEntry>,
    /// Ordered and multiset-type assignment counts per `d`.
    pub counts: BTreeMap<u64, (usize, usize)>,
    pub verdict: Verdict,
}

/// Full classification of `w'' = r w`. Assignments are searched on the
/// current rayon pool; the ledger order does not depend on scheduling.
pub fn classify(r: &RatFun, options: SearchOptions) -> Classification {
    classify_profile(
        singularity_profile(&NormalFormODE {
            r: r.clone(),
            half_a: RatFun::zero(),
        }),
        options,
    )
}

pub fn classify_profile(profile: SingularityProfile, options: SearchOptions) -> Classification {
    let early = match &profile.status {
        ProfileStatus::Fuchsian => None,
        ProfileStatus::NotFuchsian(why) => Some(Verdict::NotFuchsian(why.clone())),
        ProfileStatus::Unsupported(why) => Some(Verdict::Unsupported(why.clone())),
    };
    if let Some(verdict) = early {
        return Classification {
            profile,
            esets: None,
            case1: Vec::new(),
            case3_possible: false,
            ledger: Vec::new(),
            counts: BTreeMap::new(),
            verdict,
        };
    }
    let case1 = case1_necessary(&profile);
    let case3_possible = case3_necessary(&profile);
    let esets = build_esets(&profile);
    let assignments = enumerate_assignments(&esets);
    let counts = count_by_degree(&assignments);
    let cx = PContext::new(&profile, options);
    let ledger: Vec<LedgerEntry> = assignments
        .into_par_iter()
        .map(|a| LedgerEntry {
            outcome: p_exists(&a, &cx),
            assignment: a,
        })
        .collect();
    let found = ledger.iter().find_map(|l| match &l.outcome {
        PSearch::Found { p, .. } => Some((p.clone(), l.assignment.clone())),
        _ => None,
    });
    let undecided = ledger
        .iter()
        .filter(|l| matches!(l.outcome, PSearch::Undecided { .. }))
        .count();
    let verdict = if let Some((p, assignment)) = found {
        Verdict::CaseII { p, assignment }
    } else if !case1.is_empty() {
        Verdict::PossiblyCaseI {
            witnesses: case1.clone(),
        }
    } else if case3_possible {
        Verdict::PossiblyCaseIII
    } else if undecided > 0 {
        Verdict::Unsupported(format!("{undecided} case II assignments could not be decided"))
    } else {
        Verdict::NonIntegrable
    };
    Classification {
        profile,
        esets: Some(esets),
        case1,
        case3_possible,
        ledger,
        counts,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QPoly;
    use crate::nve::normal_form_of;

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(QPoly::from_i64s(num), QPoly::from_i64s(den))
    }

    #[test]
    fn verdicts() {
        let v = |r: RatFun| classify(&r, SearchOptions::default()).verdict;
        assert!(matches!(v(RatFun::zero()), Verdict::PossiblyCaseI { .. }));
        assert!(matches!(v(rf(&[1], &[0, 0, 0, 1])), Verdict::NotFuchsian(_)));
        assert!(matches!(v(rf(&[-3, 4, -4], &[0, 0, 16, -32, 16])), Verdict::CaseII { .. }));
    }

    #[test]
    fn xyz_is_non_integrable() {
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let c = classify(&o.r, SearchOptions::default());
        assert_eq!(c.verdict, Verdict::NonIntegrable);
        assert_eq!(c.ledger.len(), 45);
        assert!(c.ledger.iter().all(|l| matches!(l.outcome, PSearch::Inconsistent { .. })));
    }
}
