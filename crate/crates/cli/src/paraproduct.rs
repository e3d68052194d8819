//! `mhdlab paraproduct-check`: `T + T̄ + R = fg` on random pairs, plus the
//! largest product-law quotients seen on the same grid.

use clap::Args;
use mhdlab::lp::{bony_reconstruction_error, LpError, ProductLaw, ProductLawHarness};
use mhdlab::spectral::random::{gaussian, white};

use crate::{CliError, GridArgs, Outcome};

pub const BONY_TOLERANCE: f64 = 1e-11;

#[derive(Args, Debug)]
pub struct ParaproductArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Number of random pairs.
    #[arg(long, default_value_t = 20)]
    pub pairs: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Width of the Gaussian envelope of the product-law test fields.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
}

fn lp_err(e: LpError) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn run(args: &ParaproductArgs) -> Result<Outcome, CliError> {
    let grid = args.grid.grid()?;
    if args.pairs == 0 {
        return Err(CliError::Usage("--pairs must be at least 1".into()));
    }
    let harness = ProductLawHarness::new(grid);
    let mut bony: f64 = 0.0;
    let mut hat: f64 = 0.0;
    let mut hybrid: f64 = 0.0;
    for i in 0..args.pairs {
        let s = args.seed.wrapping_mul(1_000_003).wrapping_add(4 * i);
        bony = bony
            .max(bony_reconstruction_error(&white(grid, s), &white(grid, s + 1)).map_err(lp_err)?);
        let f = gaussian(grid, s + 2, args.sigma, true);
        let g = gaussian(grid, s + 3, args.sigma, true);
        hat = hat.max(
            harness
                .ratio(ProductLaw::Hat { s: 1.0, t: 1.0 }, &f, &g)
                .map_err(lp_err)?,
        );
        hybrid = hybrid.max(harness.ratio(ProductLaw::Hybrid, &f, &g).map_err(lp_err)?);
    }
    let ok = bony <= BONY_TOLERANCE;
    println!("pairs: {}  grid: {}x{}", args.pairs, grid.n1(), grid.n2());
    println!(
        "{:<4} {:<44} {bony:.3e} (<= {BONY_TOLERANCE:e})",
        if ok { "PASS" } else { "FAIL" },
        "max |T + Tbar + R - fg| / |fg|"
    );
    println!(
        "info {:<44} {hat:.6e}",
        "max |fg|_hatB1 / (|f|_hatB1 |g|_hatB1)"
    );
    println!(
        "info {:<44} {hybrid:.6e}",
        "max |fg|_hyb01 / (|f|_hyb01 |g|_hatB1)"
    );
    Ok(if ok {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}
