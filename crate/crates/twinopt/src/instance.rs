//! Objective and constraint construction from command-line descriptions.

use std::path::{Path, PathBuf};

use twinopt_core::constraints::{
    Constraint, IntersectionSystem, PartitionMatroid, SeedMatroid, UniformMatroid,
};
use twinopt_core::objectives::{CutObjective, MarketingObjective, ModularObjective};
use twinopt_core::{ElementSet, SetFunction};

use crate::error::{CliError, CliResult};
use crate::formats::{parse_costs, parse_graph, parse_partition, parse_rrsets, InputFiles};

/// The objectives the command line can build.
#[derive(Clone, Debug)]
pub enum Objective {
    Cut(CutObjective),
    Marketing(MarketingObjective),
    Modular(ModularObjective),
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Cut(_) => "cut",
            Objective::Marketing(_) => "marketing",
            Objective::Modular(_) => "modular",
        }
    }

    fn inner(&self) -> &dyn SetFunction {
        match self {
            Objective::Cut(f) => f,
            Objective::Marketing(f) => f,
            Objective::Modular(f) => f,
        }
    }
}

impl SetFunction for Objective {
    fn ground_size(&self) -> usize {
        self.inner().ground_size()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        self.inner().value(s)
    }
    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        self.inner().gain(base, base_value, e)
    }
}

/// Inputs for [`load_objective`].
#[derive(Clone, Debug, Default)]
pub struct ObjectiveSource {
    pub kind: String,
    pub graph: Option<PathBuf>,
    pub rrsets: Vec<PathBuf>,
    pub costs: Option<PathBuf>,
    pub budget: Option<f64>,
    pub modular_weights: Option<Vec<f64>>,
}

pub fn load_objective(src: &ObjectiveSource, inputs: &mut InputFiles) -> CliResult<Objective> {
    match src.kind.as_str() {
        "cut" => {
            let path = src
                .graph
                .as_deref()
                .ok_or_else(|| CliError::usage("--objective cut needs --graph"))?;
            let g = parse_graph(&inputs.read(path)?, path)?;
            Ok(Objective::Cut(CutObjective::new(&g)))
        }
        "marketing" => {
            if src.rrsets.is_empty() {
                return Err(CliError::usage(
                    "--objective marketing needs one --rrsets file per product",
                ));
            }
            let costs_path = src
                .costs
                .as_deref()
                .ok_or_else(|| CliError::usage("--objective marketing needs --costs"))?;
            let mut collections = Vec::with_capacity(src.rrsets.len());
            for path in &src.rrsets {
                collections.push(parse_rrsets(&inputs.read(path)?, path)?);
            }
            let costs = parse_costs(&inputs.read(costs_path)?, costs_path)?;
            Ok(Objective::Marketing(MarketingObjective::new(
                collections,
                costs,
                src.budget,
            )?))
        }
        "modular" => {
            let weights = src
                .modular_weights
                .clone()
                .ok_or_else(|| CliError::usage("--objective modular needs --modular-weights"))?;
            Ok(Objective::Modular(ModularObjective::new(weights)))
        }
        other => Err(CliError::usage(format!(
            "unknown objective {other:?} (cut|marketing|modular)"
        ))),
    }
}

/// Builds a constraint from a spec string.
///
/// Grammar (terms joined by `+` are intersected):
///
/// * `uniform:K`
/// * `partition:PATH:K` (per-part cap `K`, parts read from `PATH`)
/// * `seed:K` (marketing objective: at most `K` seeds, one product per node)
/// * `seed:V,M,K` (explicit nodes and products)
pub fn parse_constraint(
    spec: &str,
    objective: &Objective,
    inputs: &mut InputFiles,
) -> CliResult<Constraint> {
    let n = objective.ground_size();
    let terms: Vec<&str> = spec.split('+').collect();
    let mut parsed = Vec::with_capacity(terms.len());
    for term in &terms {
        parsed.push(parse_term(term, objective, inputs)?);
    }
    let constraint = if parsed.len() == 1 {
        parsed.pop().expect("one term")
    } else {
        Constraint::Intersection(IntersectionSystem::new(parsed)?)
    };
    use twinopt_core::IndependenceSystem;
    if constraint.ground_size() != n {
        return Err(CliError::usage(format!(
            "constraint {spec:?} is over {} elements but the objective has {n}",
            constraint.ground_size()
        )));
    }
    Ok(constraint)
}

fn parse_cap(term: &str, word: &str) -> CliResult<usize> {
    word.parse()
        .map_err(|_| CliError::usage(format!("constraint {term:?}: invalid cap {word:?}")))
}

fn parse_term(term: &str, objective: &Objective, inputs: &mut InputFiles) -> CliResult<Constraint> {
    let n = objective.ground_size();
    let (kind, rest) = term.split_once(':').ok_or_else(|| {
        CliError::usage(format!("constraint term {term:?} has no `kind:` prefix"))
    })?;
    match kind {
        "uniform" => Ok(Constraint::Uniform(UniformMatroid::new(
            n,
            parse_cap(term, rest)?,
        ))),
        "partition" => {
            let (path, cap) = rest.rsplit_once(':').ok_or_else(|| {
                CliError::usage(format!("constraint {term:?}: expected partition:PATH:K"))
            })?;
            let path = Path::new(path);
            let (part_of, parts) = parse_partition(&inputs.read(path)?, path)?;
            Ok(Constraint::Partition(PartitionMatroid::new(
                part_of,
                parts,
                parse_cap(term, cap)?,
            )?))
        }
        "seed" => {
            let words: Vec<&str> = rest.split(',').collect();
            let (nodes, products, cap) = match (words.as_slice(), objective) {
                ([k], Objective::Marketing(m)) => (m.nodes(), m.products(), parse_cap(term, k)?),
                ([_], _) => {
                    return Err(CliError::usage(
                        "seed:K needs the marketing objective; use seed:V,M,K otherwise",
                    ))
                }
                ([v, m, k], _) => (
                    parse_cap(term, v)?,
                    parse_cap(term, m)?,
                    parse_cap(term, k)?,
                ),
                _ => {
                    return Err(CliError::usage(format!(
                        "constraint {term:?}: expected seed:K or seed:V,M,K"
                    )))
                }
            };
            Ok(Constraint::Seed(SeedMatroid::new(nodes, products, cap)?))
        }
        other => Err(CliError::usage(format!(
            "unknown constraint kind {other:?} (uniform|partition|seed)"
        ))),
    }
}
