//! TV, discrete W1 and the transport solver agree, and TV sits below Φ(KL).

use cgtheory::bounds::{kl, phi, tv, w1_discrete, w1_emd, MetricTable};
use cgtheory::rng::stream;
use rand::Rng;

fn random_dist(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

fn main() -> cgtheory::Result<()> {
    let mut rng = stream(1, "metric-identities");
    let mut worst = 0.0f64;
    let mut slack = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(2..12);
        let (p, q) = (random_dist(&mut rng, n), random_dist(&mut rng, n));
        let t = tv(&p, &q)?;
        worst = worst.max((t - w1_discrete(&p, &q)?).abs()).max((t - w1_emd(&p, &q, &MetricTable::discrete(n))?).abs());
        slack = slack.min(phi(kl(&p, &q)?)? - t);
    }
    println!("max |tv - w1| over 1000 pairs: {worst:.2e}");
    println!("min phi(kl) - tv: {slack:.4}");

    // Transport on a line: moving mass 1/2 a distance of 2.
    let line = MetricTable::from_fn(3, |i, j| (i as f64 - j as f64).abs())?;
    println!("W1 on a line: {}", w1_emd(&[0.5, 0.5, 0.0], &[0.0, 0.5, 0.5], &line)?);
    match kl(&[0.5, 0.5], &[1.0, 0.0]) {
        Ok(v) => println!("kl = {v}"),
        Err(e) => println!("kl: {e}"),
    }
    Ok(())
}
