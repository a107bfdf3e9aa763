//! Command-line front end. Exit status: 0 when every checked bound holds,
//! 1 on a bound violation, 2 on malformed input or usage errors.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use crate::boundcheck::{
    check_corollary, check_theorem, claim2_experiment, orbit_closure, BoundError, TheoremOptions, DEFAULT_MAX_ENUM,
    DEFAULT_RETRIES,
};
use crate::cohomology::{betti_numbers, cohomology_basis, nonzero_product_search, Cochain, CochainFile};
use crate::coverings::{fiberwise_product, verify_covering};
use crate::f2linalg::F2Vector;
use crate::ggspaces::{
    antipodal_action, bg_space, crosspolytope_boundary, cycle_complex, eg_space, rp_deltaset, torus7, torus_product,
};
use crate::io::{load_cochain, load_space, parse_group, parse_rep, write_json, ActionFile, ComplexFile, DeltaFile};
use crate::signflip::{min_support_search, random_configuration, SearchMode, DEFAULT_COORDINATE_BOUND};

#[derive(Parser, Debug)]
#[command(name = "facebound", version, about = "Lower bounds on face counts from mod-2 cohomology and group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Shape {
    Crosspolytope,
    Rp,
    Torus7,
    TorusProduct,
    Eg,
    Bg,
    Cycle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a model space as JSON.
    Construct {
        #[arg(long, value_enum)]
        shape: Shape,
        /// Dimension parameter: d for crosspolytope, n for rp, k for
        /// torus-product, N for eg/bg, vertex count for cycle.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Group for eg/bg: z2^k, z<m>, or a group file.
        #[arg(long, default_value = "z2^1")]
        group: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mod-2 Betti numbers, an H^1 basis, and optionally a nonzero cup product.
    Cohomology {
        #[arg(long)]
        input: PathBuf,
        /// Search for a nonzero product of this many degree-1 classes.
        #[arg(long)]
        cup: Option<usize>,
    },
    /// Fibre product of the double covers given by degree-1 cocycles.
    Cover {
        #[arg(long)]
        input: PathBuf,
        /// Cocycle files; repeat for several.
        #[arg(long)]
        cocycle: Vec<PathBuf>,
        /// Use the whole computed H^1 basis instead of cocycle files.
        #[arg(long)]
        basis: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cup-length bound on the number of top faces.
    CheckBound {
        #[arg(long)]
        input: PathBuf,
    },
    /// Orbit bound for a free group action.
    CheckTheorem {
        #[arg(long)]
        input: PathBuf,
        /// Action file; defaults to the action stored with the input.
        #[arg(long)]
        action: Option<PathBuf>,
        /// sign, neg:<d>, or a representation file.
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: u64,
        /// Skip the Euler witness and assume the hypothesis.
        #[arg(long)]
        no_euler: bool,
    },
    /// Sign-vector search for an equivariant map into a representation.
    Signflip {
        #[arg(long)]
        group: String,
        #[arg(long)]
        rep: String,
        #[arg(long = "N")]
        n_join: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 4096)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_COORDINATE_BOUND)]
        bound: i64,
    },
    /// Search H_N for a translate of supp(C) disjoint from Z.
    Claim2 {
        #[arg(long)]
        group: String,
        #[arg(long = "N")]
        n_join: usize,
        #[arg(long)]
        degree: usize,
        /// Indices of degree-n faces of EG_N whose orbits (with faces) form Z.
        #[arg(long, value_delimiter = ',')]
        z: Vec<usize>,
        /// Indices of degree-n faces of EG_N whose orbits form supp C.
        #[arg(long, value_delimiter = ',')]
        c: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_ENUM)]
        max_enum: usize,
    },
}

enum Outcome {
    Pass,
    Violation,
}

fn ratio(r: &Ratio<u128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Runs the CLI on the given arguments and returns the exit status.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Violation) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<BoundError>() {
                Some(BoundError::Contradiction(_)) => 1,
                _ => 2,
            }
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct { shape, dim, group, output } => construct(shape, dim, &group, output),
        Command::Cohomology { input, cup } => {
            let ds = load_space(&input)?.delta;
            let betti = betti_numbers(&ds);
            let basis: Vec<CochainFile> = if ds.dim().is_some_and(|d| d >= 1) {
                cohomology_basis(&ds, 1)?.representatives.iter().map(CochainFile::from).collect()
            } else {
                Vec::new()
            };
            let product = cup.and_then(|n| nonzero_product_search(&ds, n)).map(|w| {
                json!({
                    "basis_indices": w.basis_indices,
                    "product": CochainFile::from(&w.product),
                    "coboundary_rank": w.coboundary_rank,
                    "augmented_rank": w.augmented_rank,
                })
            });
            write_json(None, &json!({ "f_vector": ds.f_vector(), "betti": betti, "h1_basis": basis, "cup": cup, "product": product }))?;
            Ok(Outcome::Pass)
        }
        Command::Cover { input, cocycle, basis, output } => {
            let ds = load_space(&input)?.delta;
            let zs: Vec<Cochain> = if basis {
                if !cocycle.is_empty() {
                    bail!("pass either --basis or --cocycle, not both");
                }
                cohomology_basis(&ds, 1)?.representatives
            } else {
                cocycle.iter().map(|p| load_cochain(p)).collect::<Result<_>>()?
            };
            let cover = fiberwise_product(&ds, &zs)?;
            verify_covering(&cover)?;
            let mut file = DeltaFile::from_delta(&cover.total);
            file.action = Some(ActionFile::from(&cover.deck));
            file.projection = Some(cover.projection.clone());
            if output.is_some() {
                write_json(output.as_deref(), &file)?;
                write_json(
                    None,
                    &json!({
                        "sheets": cover.sheets(),
                        "counts": cover.total.counts(),
                        "euler_characteristic": cover.total.euler_characteristic(),
                        "components": cover.total.component_count(),
                    }),
                )?;
            } else {
                write_json(None, &file)?;
            }
            Ok(Outcome::Pass)
        }
        Command::CheckBound { input } => {
            let ds = load_space(&input)?.delta;
            let report = check_corollary(&ds, &input.display().to_string())?;
            write_json(None, &report)?;
            Ok(if report.pass { Outcome::Pass } else { Outcome::Violation })
        }
        Command::CheckTheorem { input, action, rep, seed, retries, no_euler } => {
            let loaded = load_space(&input)?;
            let act = match action {
                Some(p) => crate::io::read_json::<ActionFile>(&p)?.to_action(&loaded.delta)?,
                None => loaded.action.context("input carries no action; pass --action")?,
            };
            let rep = parse_rep(&rep, act.group())?;
            let opts = TheoremOptions { verify_euler: !no_euler, retries, first_seed: seed, ..TheoremOptions::default() };
            let report = check_theorem(&loaded.delta, &act, &rep, &input.display().to_string(), opts)?;
            write_json(None, &report)?;
            Ok(if report.pass { Outcome::Pass } else { Outcome::Violation })
        }
        Command::Signflip { group, rep, n_join, seed, mode, budget, bound } => {
            let g = parse_group(&group)?;
            let rep = parse_rep(&rep, &g)?;
            let factors = n_join + 1;
            if matches!(mode, Mode::Exhaustive) && factors > crate::signflip::MAX_EXHAUSTIVE_FACTORS {
                bail!(crate::signflip::SignflipError::BudgetTooLarge(factors));
            }
            let eg = eg_space(&g, n_join);
            let cfg = random_configuration(&rep, n_join, seed, bound, &eg)?;
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Sampled => SearchMode::Sampled { budget, seed },
            };
            let r = min_support_search(&cfg, &eg, mode)?;
            let within = Ratio::from_integer(r.orbit_count as u128) <= r.orbit_bound;
            write_json(
                None,
                &json!({
                    "bound": ratio(&r.orbit_bound),
                    "orbit_count": r.orbit_count,
                    "face_count": r.face_count,
                    "e": r.e,
                    "average": r.average_face_count.as_ref().map(ratio),
                    "per_face_average": ratio(&r.per_face_average),
                    "closed_form_average": ratio(&r.closed_form_average),
                    "certified": r.certified,
                    "evaluated": r.evaluated,
                    "base_points": cfg.base_points(),
                    "within_bound": within,
                }),
            )?;
            Ok(if within || !r.certified { Outcome::Pass } else { Outcome::Violation })
        }
        Command::Claim2 { group, n_join, degree, z, c, max_enum } => {
            let g = parse_group(&group)?;
            if degree > n_join {
                bail!("degree {degree} exceeds N = {n_join}");
            }
            let eg = eg_space(&g, n_join);
            let count = eg.delta().count(degree);
            if let Some(bad) = z.iter().chain(&c).find(|&&s| s >= count) {
                bail!("EG_{n_join} has {count} faces of dimension {degree}; index {bad} is out of range");
            }
            let zsub = orbit_closure(&eg, degree, &z)?;
            let act = eg.left_action();
            let support = c.iter().flat_map(|&s| g.elements().map(move |x| act.apply(x, degree, s)));
            let cochain = Cochain::new(degree, F2Vector::from_support(count, support));
            let r = claim2_experiment(&eg, &zsub, &cochain, max_enum)?;
            let holds = (r.z_n * r.c_n) as u128 >= r.threshold || r.found_h.is_some();
            write_json(
                None,
                &json!({
                    "degree": r.degree,
                    "z_n": r.z_n,
                    "c_n": r.c_n,
                    "threshold": r.threshold,
                    "found_h": r.found_h,
                    "incidence_average": ratio(&r.incidence_average),
                    "enumerated_average": ratio(&r.enumerated_average),
                    "hn_order": r.hn_order,
                }),
            )?;
            Ok(if holds { Outcome::Pass } else { Outcome::Violation })
        }
    }
}

fn construct(shape: Shape, dim: usize, group: &str, output: Option<PathBuf>) -> Result<Outcome> {
    let out = output.as_deref();
    match shape {
        Shape::Crosspolytope => {
            if dim == 0 {
                bail!("crosspolytope needs --dim >= 1");
            }
            let mut file = DeltaFile::from_delta(&crosspolytope_boundary(dim).to_delta()?);
            file.action = Some(ActionFile::from(&antipodal_action(dim)));
            write_json(out, &file)?;
        }
        Shape::Rp => {
            if dim == 0 {
                bail!("rp needs --dim >= 1");
            }
            write_json(out, &DeltaFile::from_delta(&rp_deltaset(dim)))?;
        }
        Shape::Torus7 => write_json(out, &ComplexFile::from(&torus7()))?,
        Shape::TorusProduct => {
            if dim == 0 {
                bail!("torus-product needs --dim >= 1");
            }
            write_json(out, &ComplexFile::from(&torus_product(dim)))?;
        }
        Shape::Cycle => {
            if dim < 3 {
                bail!("cycle needs --dim >= 3 vertices");
            }
            write_json(out, &ComplexFile::from(&cycle_complex(dim)))?;
        }
        Shape::Eg => {
            let eg = eg_space(&parse_group(group)?, dim);
            let mut file = DeltaFile::from_delta(eg.delta());
            file.action = Some(ActionFile::from(eg.left_action()));
            write_json(out, &file)?;
        }
        Shape::Bg => {
            let (_, bg) = bg_space(&parse_group(group)?, dim);
            let mut file = DeltaFile::from_delta(&bg.space);
            file.projection = Some(bg.projection);
            write_json(out, &file)?;
        }
    }
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli_main(["facebound", "no-such-command"]), 2);
        assert_eq!(cli_main(["facebound", "check-bound", "--input", "/nonexistent/missing.json"]), 2);
        assert_eq!(cli_main(["facebound", "--help"]), 0);
    }
}
