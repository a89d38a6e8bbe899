use std::collections::BTreeSet;

use clap::{Args, Subcommand};
use ecsearch::neighbourhood::{inclusion_boundary, EnumerationLimits, Side};
use ecsearch::oracle::{boundary_by_arrow_changes, labeled_dag_count, ClassCatalogue, MAX_N};
use ecsearch::{essentialize, validate_essential, EssentialGraph, MixedGraph};
use rayon::prelude::*;

use crate::CliResult;

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Count DAGs and equivalence classes.
    Enumerate(SizeArg),
    /// Compare the computed neighbourhood of every class with the
    /// brute-force boundaries.
    CheckBoundary(SizeArg),
    /// Compare essential graph construction and validation with the
    /// brute-force classes.
    CheckEssentialize(SizeArg),
}

#[derive(Args)]
pub struct SizeArg {
    /// Number of vertices.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_N as i64))]
    n: u8,
}

/// Returns whether every check passed.
pub fn run(cmd: OracleCommand) -> CliResult<bool> {
    match cmd {
        OracleCommand::Enumerate(SizeArg { n }) => enumerate(n as usize),
        OracleCommand::CheckBoundary(SizeArg { n }) => check_boundary(n as usize),
        OracleCommand::CheckEssentialize(SizeArg { n }) => check_essentialize(n as usize),
    }
}

fn enumerate(n: usize) -> CliResult<bool> {
    let cat = ClassCatalogue::build(n)?;
    let want = labeled_dag_count(n);
    println!("vertices: {n}");
    println!("dags: {}", cat.dags().len());
    println!("dags by recurrence: {want}");
    println!("classes: {}", cat.len());
    Ok(cat.dags().len() as u128 == want)
}

fn check_boundary(n: usize) -> CliResult<bool> {
    let cat = ClassCatalogue::build(n)?;
    let outcomes: Vec<(usize, bool)> = (0..cat.len())
        .into_par_iter()
        .map(|c| -> Result<(usize, bool), String> {
            let e = EssentialGraph::new(cat.classes()[c].clone()).map_err(|v| v.to_string())?;
            let nb = inclusion_boundary(&e, EnumerationLimits::unlimited()).map_err(|e| e.to_string())?;
            let side = |s: Side| -> BTreeSet<MixedGraph> { nb.side(s).map(|x| x.result.graph().clone()).collect() };
            let def = cat.boundary(c);
            let by_arrows = boundary_by_arrow_changes(&e).map_err(|e| e.to_string())?;
            let ok = side(Side::Plus) == def.plus
                && side(Side::Minus) == def.minus
                && by_arrows == def
                && nb.neighbours.len() == def.len();
            Ok((nb.neighbours.len(), ok))
        })
        .collect::<Result<_, String>>()?;
    let total: usize = outcomes.iter().map(|o| o.0).sum();
    let bad: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.1)
        .map(|(c, _)| c)
        .collect();
    println!("classes: {}", cat.len());
    println!("neighbours: {total}");
    println!("mismatches: {}", bad.len());
    for &c in bad.iter().take(10) {
        eprintln!("mismatch at class {c}: {:?}", cat.classes()[c]);
    }
    Ok(bad.is_empty())
}

fn check_essentialize(n: usize) -> CliResult<bool> {
    let cat = ClassCatalogue::build(n)?;
    let wrong = (0..cat.dags().len())
        .into_par_iter()
        .filter(|&i| {
            essentialize(cat.dags()[i].clone()).map_or(true, |e| e.graph() != &cat.classes()[cat.class_of_dag(i)])
        })
        .count();

    // every mixed graph: validation accepts exactly the class graphs
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 4usize.pow(pairs.len() as u32);
    let misjudged = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let mut g = MixedGraph::new(n);
            let mut c = code;
            for &(a, b) in &pairs {
                match c % 4 {
                    1 => g.add_arrow(a, b).expect("fresh pair"),
                    2 => g.add_arrow(b, a).expect("fresh pair"),
                    3 => g.add_line(a, b).expect("fresh pair"),
                    _ => {}
                }
                c /= 4;
            }
            validate_essential(&g).is_ok() != cat.class_of(&g).is_some()
        })
        .count();
    println!("dags: {}", cat.dags().len());
    println!("classes: {}", cat.len());
    println!("essentialize mismatches: {wrong}");
    println!("mixed graphs checked: {total}");
    println!("validation mismatches: {misjudged}");
    Ok(wrong == 0 && misjudged == 0)
}
