use fraclab::grid::GridEnergy;
use fraclab::params::ProblemParams;
use fraclab::solver::*;
use std::time::Instant;

fn main() {
    let params = ProblemParams::reference();
    let op = GridEnergy::assemble(128, 1.0 / 16.0, 4.0, &params).unwrap();
    let opts = SolveOptions::default();
    let t0 = Instant::now();
    let radial = solve_radial(&op, &opts).unwrap();
    println!("radial: conv {} iters {} level {:.9} [{:.0}s]", radial.converged, radial.iters, radial.level, t0.elapsed().as_secs_f64());
    let t0 = Instant::now();
    let full = solve_full(&op, radial.minimizer.as_grid(), &opts).unwrap();
    println!("full: conv {} iters {} level {:.9} [{:.0}s]", full.converged, full.iters, full.level, t0.elapsed().as_secs_f64());
}
