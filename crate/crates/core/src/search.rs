//! Greedy hill climbing over essential graphs.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{DataError, SearchError};
use crate::essential::EssentialGraph;
use crate::neighbourhood::{all_candidates, Candidate, Characterization, EnumerationLimits};
use crate::scoring::{Dataset, Metric, Scorer};

#[derive(Debug, Clone, Default)]
pub enum Start {
    #[default]
    Empty,
    /// Every pair adjacent. Supported, but the boundary neighbourhood is a
    /// poor fit for searches that mostly prune.
    Complete,
    Graph(EssentialGraph),
}

/// How equally scored moves are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest `(pair, kind, created v-structures)` wins.
    #[default]
    Lexicographic,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub start: Start,
    pub metric: Metric,
    pub max_iterations: usize,
    pub limits: EnumerationLimits,
    pub tie_break: TieBreak,
    /// Seed for the perturbations of random restarts; unused otherwise.
    pub seed: u64,
    pub random_restarts: usize,
    /// A move must raise the score by more than this to be taken.
    pub tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            start: Start::Empty,
            metric: Metric::default(),
            max_iterations: 1000,
            limits: EnumerationLimits::default(),
            tie_break: TieBreak::Lexicographic,
            seed: 0,
            random_restarts: 0,
            tolerance: 1e-9,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_iterations == 0 {
            return Err(SearchError::Config("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(SearchError::Config(format!(
                "tolerance {} is not a non-negative number",
                self.tolerance
            )));
        }
        if let Metric::Bdeu { ess } = self.metric {
            Metric::bdeu(ess)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchStep {
    pub iteration: usize,
    pub characterization: Characterization,
    pub delta: f64,
    pub score: f64,
    /// Size of the neighbourhood the move was chosen from.
    pub neighbourhood_size: usize,
    pub partial: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    NoImprovement,
    IterationLimit,
}

/// What can be said about the returned state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// The full neighbourhood was scanned and nothing improves.
    LocalOptimum,
    /// The last scan was truncated or the iteration limit stopped the climb.
    BestFound,
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub score: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub initial_score: f64,
    pub steps: Vec<SearchStep>,
    pub termination: Termination,
    pub certificate: Certificate,
    /// One entry per random restart, in order. The steps above belong to
    /// the first climb only.
    pub restarts: Vec<RestartOutcome>,
}

impl SearchTrace {
    /// Writes one CSV row per accepted move.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "iteration",
            "a",
            "b",
            "kind",
            "created",
            "delta",
            "score",
            "neighbours",
            "partial",
            "elapsed_ms",
        ])?;
        for s in &self.steps {
            let op = s.characterization.op;
            let created: Vec<String> = s
                .characterization
                .created
                .iter()
                .map(|v| format!("{}<{}+{}", v.head, v.tails.0, v.tails.1))
                .collect();
            out.write_record([
                s.iteration.to_string(),
                op.a.to_string(),
                op.b.to_string(),
                op.kind.to_string(),
                created.join(" "),
                format!("{:.12}", s.delta),
                format!("{:.12}", s.score),
                s.neighbourhood_size.to_string(),
                s.partial.to_string(),
                format!("{:.3}", s.elapsed.as_secs_f64() * 1000.0),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

struct Climb {
    state: EssentialGraph,
    score: f64,
    steps: Vec<SearchStep>,
    termination: Termination,
    partial: bool,
}

fn climb(scorer: &Scorer, cfg: &SearchConfig, start: EssentialGraph) -> Result<Climb, SearchError> {
    let clock = Instant::now();
    let mut state = start;
    let mut score = scorer.score_graph(&state)?;
    let mut steps = Vec::new();
    let mut partial = false;
    for iteration in 1..=cfg.max_iterations {
        let set = all_candidates(&state, cfg.limits)?;
        partial = set.partial;
        let size = set.candidates.len();
        let deltas: Vec<f64> = set
            .candidates
            .par_iter()
            .map(|c| scorer.delta(&c.delta))
            .collect::<Result<_, DataError>>()?;
        let Some((best, delta)) = select(&set.candidates, &deltas, cfg) else {
            return Ok(Climb {
                state,
                score,
                steps,
                termination: Termination::NoImprovement,
                partial,
            });
        };
        state = best.build(&state)?;
        score += delta;
        steps.push(SearchStep {
            iteration,
            characterization: best.characterization.clone(),
            delta,
            score,
            neighbourhood_size: size,
            partial,
            elapsed: clock.elapsed(),
        });
    }
    Ok(Climb {
        state,
        score,
        steps,
        termination: Termination::IterationLimit,
        partial,
    })
}

/// The best strictly improving candidate, ties going to the smallest order key.
fn select<'c>(candidates: &'c [Candidate], deltas: &[f64], cfg: &SearchConfig) -> Option<(&'c Candidate, f64)> {
    let TieBreak::Lexicographic = cfg.tie_break;
    let mut best: Option<(&Candidate, f64)> = None;
    for (c, &d) in candidates.iter().zip(deltas) {
        if d <= cfg.tolerance {
            continue;
        }
        best = match best {
            Some((b, bd)) if bd > d => Some((b, bd)),
            Some((b, bd)) if bd == d && b.characterization.order_key() <= c.characterization.order_key() => {
                Some((b, bd))
            }
            _ => Some((c, d)),
        };
    }
    best
}

/// Applies `moves` uniformly chosen neighbour moves to `e`.
fn perturb(
    e: &EssentialGraph,
    moves: usize,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> Result<EssentialGraph, SearchError> {
    let mut e = e.clone();
    for _ in 0..moves {
        let set = all_candidates(&e, cfg.limits)?;
        match set.candidates.choose(rng) {
            Some(c) => e = c.build(&e)?,
            None => break,
        }
    }
    Ok(e)
}

/// Climbs from `cfg.start`, each time moving to the best strictly improving
/// neighbour, until no neighbour improves or `max_iterations` moves have been
/// made. With `random_restarts > 0` the best state found so far is perturbed
/// by a few random moves and climbed again, keeping the best result.
pub fn hill_climb(data: &Dataset, cfg: &SearchConfig) -> Result<(EssentialGraph, f64, SearchTrace), SearchError> {
    cfg.validate()?;
    let n = data.n_vars();
    let start = match &cfg.start {
        Start::Empty => EssentialGraph::empty(n),
        Start::Complete => EssentialGraph::complete(n),
        Start::Graph(g) if g.n() == n => g.clone(),
        Start::Graph(g) => return Err(DataError::VariableCount { graph: g.n(), data: n }.into()),
    };
    let scorer = Scorer::new(data, cfg.metric);
    let initial_score = scorer.score_graph(&start)?;
    let first = climb(&scorer, cfg, start)?;
    let certificate = match (first.termination, first.partial) {
        (Termination::NoImprovement, false) => Certificate::LocalOptimum,
        _ => Certificate::BestFound,
    };

    let mut best = (first.state, first.score);
    let mut restarts = Vec::new();
    if cfg.random_restarts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let moves = n.max(1);
        for _ in 0..cfg.random_restarts {
            let from = perturb(&best.0, moves, cfg, &mut rng)?;
            let run = climb(&scorer, cfg, from)?;
            restarts.push(RestartOutcome {
                score: run.score,
                iterations: run.steps.len(),
            });
            if run.score > best.1 + cfg.tolerance {
                best = (run.state, run.score);
            }
        }
    }

    let trace = SearchTrace {
        initial_score,
        steps: first.steps,
        termination: first.termination,
        certificate,
        restarts,
    };
    Ok((best.0, best.1, trace))
}
