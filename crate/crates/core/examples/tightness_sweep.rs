//! Both toy sweeps with a reduced seed count; writes CSV and SVG to a temp dir.

use cgtheory::experiments::{emit_plot, means_by_size, run_sweep, spearman, Example, Panel, SweepConfig};

fn main() -> cgtheory::Result<()> {
    let dir = std::env::temp_dir().join("cgtheory-sweep");
    std::fs::create_dir_all(&dir)?;
    for (example, stem) in [(Example::One, "ex1"), (Example::Two, "ex2")] {
        let mut config = SweepConfig::new(example);
        config.seeds = 10;
        let rows = run_sweep(&config)?;
        println!("{stem}: |S|  measured  ours  ben-david");
        for (s, m, o, b) in means_by_size(&rows) {
            println!("  {s:>3}  {m:.4}  {o:.4}  {b:.4}");
        }
        let measured: Vec<f64> = rows.iter().map(|r| r.measured).collect();
        let ours: Vec<f64> = rows.iter().map(|r| r.our_bound).collect();
        let bd: Vec<f64> = rows.iter().map(|r| r.bendavid_bound).collect();
        println!(
            "  rank correlation with measured: ours {:.3}, ben-david {:.3}",
            spearman(&ours, &measured),
            spearman(&bd, &measured)
        );
        let svg = dir.join(format!("{stem}.svg"));
        emit_plot(&[Panel { title: stem, rows: &rows }], &svg)?;
        println!("  wrote {}", svg.display());
    }
    Ok(())
}
