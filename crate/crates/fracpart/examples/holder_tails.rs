//! Summability behind uniform regularity: the weighted Hoelder seminorms
//! [p_i]_{C^{0,s-1/2}} on a compact subinterval, damped by (1 + i^2)^{-s},
//! form a convergent series. The partial sums flatten out; the tail fraction
//! quantifies how little the high modes contribute.
//!
//! Run with: cargo run --release --example holder_tails [imax] [grid] [m] [n]

use fracpart::special::JacobiParams;
use fracpart::spectral::holder_partial_sums;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let imax: usize = args.next().map_or(Ok(512), |a| a.parse())?;
    let grid: usize = args.next().map_or(Ok(600), |a| a.parse())?;
    let m: usize = args.next().map_or(Ok(2), |a| a.parse())?;
    let n: usize = args.next().map_or(Ok(2), |a| a.parse())?;
    let params = JacobiParams::from_block_dims(m, n)?;
    let (s, eps) = (0.75, 0.1);
    let sums = holder_partial_sums(params, s, eps, imax, grid)?;

    println!("s = {s}, interval [-1+{eps}, 1-{eps}], grid-estimated seminorms\n");
    println!("{:>6} {:>16} {:>12}", "I", "S_I", "S_I/S_max");
    let mut i = 1;
    while i <= imax {
        println!("{:>6} {:>16.8} {:>12.6}", i, sums[i], sums[i] / sums[imax]);
        i *= 2;
    }

    let tail = (sums[imax] - sums[imax / 2]) / sums[imax];
    println!("\ntail fraction (I in ({},{}]) = {:.4e}", imax / 2, imax, tail);
    Ok(())
}
