//! One entry point per design strategy, shared by the CLI and figure generation.

use std::fmt;
use std::str::FromStr;

use crate::bounds::closed_form;
use crate::coding::{select_pairs_fixed, select_pairs_osh, CodingAssignment, Combo};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::oracle::optimal_joint;
use crate::power::{eval_with_coding, PowerReport};
use crate::routing::{route_all, PathPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Coding over all path combinations with equal-cost re-routing.
    Osh,
    Fixed(Combo),
    /// Exhaustive joint routing and coding search.
    Oracle,
    /// 1+1 protection without coding.
    Conventional,
    /// Closed form for full meshes and rings.
    Analytic,
}

impl Heuristic {
    pub const ALL: [Heuristic; 8] = [
        Heuristic::Osh,
        Heuristic::Fixed(Combo::WW),
        Heuristic::Fixed(Combo::PP),
        Heuristic::Fixed(Combo::WP),
        Heuristic::Fixed(Combo::PW),
        Heuristic::Oracle,
        Heuristic::Conventional,
        Heuristic::Analytic,
    ];

    pub fn name(self) -> String {
        match self {
            Heuristic::Osh => "osh".into(),
            Heuristic::Fixed(c) => format!("{}{}", c.first.letter(), c.second.letter()),
            Heuristic::Oracle => "oracle".into(),
            Heuristic::Conventional => "conventional".into(),
            Heuristic::Analytic => "analytic".into(),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "osh" => Ok(Heuristic::Osh),
            "oracle" => Ok(Heuristic::Oracle),
            "conventional" => Ok(Heuristic::Conventional),
            "analytic" => Ok(Heuristic::Analytic),
            other => other.parse::<Combo>().map(Heuristic::Fixed).map_err(|_| {
                Error::Usage(format!(
                    "unknown heuristic `{s}` (expected osh, ww, pp, wp, pw, oracle, conventional or analytic)"
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub heuristic: Heuristic,
    /// Empty for the analytic strategy.
    pub routing: Vec<PathPair>,
    pub assignment: CodingAssignment,
    pub report: PowerReport,
    /// Oracle statistics: configurations explored and exactness.
    pub oracle: Option<(u64, bool)>,
}

pub fn evaluate(instance: &Instance, heuristic: Heuristic, budget: usize) -> Result<Evaluation> {
    let done = |routing: Vec<PathPair>, assignment: CodingAssignment, oracle| {
        let report = eval_with_coding(instance, &routing, &assignment)?;
        Ok(Evaluation {
            heuristic,
            routing,
            assignment,
            report,
            oracle,
        })
    };
    match heuristic {
        Heuristic::Analytic => {
            let (_, form) = closed_form(instance)?;
            Ok(Evaluation {
                heuristic,
                routing: Vec::new(),
                assignment: CodingAssignment::default(),
                report: PowerReport::from_parts(form.p_conventional, form.p_conventional - form.p_coded),
                oracle: None,
            })
        }
        Heuristic::Conventional => done(route_all(instance)?, CodingAssignment::default(), None),
        Heuristic::Fixed(combo) => {
            let routing = route_all(instance)?;
            let assignment = select_pairs_fixed(instance, &routing, combo)?;
            done(routing, assignment, None)
        }
        Heuristic::Osh => {
            let routing = route_all(instance)?;
            let osh = select_pairs_osh(instance, &routing, budget)?;
            done(osh.routing, osh.assignment, None)
        }
        Heuristic::Oracle => {
            let r = optimal_joint(instance, budget)?;
            done(r.best_routing, r.best_assignment, Some((r.explored, r.exact)))
        }
    }
}
