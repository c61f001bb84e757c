use envyfree::exact::{allocation_existence, SearchOptions};
use envyfree::gen::{derived_seed, gen_instance, Culture, GenConfig};
use std::time::Instant;

fn main() {
    let opts = SearchOptions::default();
    for culture in [Culture::Ic, Culture::Spup] {
        for wr in [(1u64, 100u64), (101, 200)] {
            for n in [5usize, 6, 7, 8] {
                let trials = 60;
                let start = Instant::now();
                let mut counts = (0usize, 0usize, 0usize);
                let mut worst_ms = 0.0f64;
                for t in 0..trials {
                    let mut config = GenConfig::new(n, 8, culture, derived_seed(42, t));
                    config.weight_range = wr;
                    let inst = gen_instance(&config).unwrap();
                    let t0 = Instant::now();
                    let per = allocation_existence(&inst, &opts).unwrap();
                    let dt = t0.elapsed().as_secs_f64() * 1000.0;
                    worst_ms = worst_ms.max(dt);
                    counts.0 += per.sef.exists as usize;
                    counts.1 += per.aef.exists as usize;
                    counts.2 += per.saef.exists as usize;
                }
                let total = start.elapsed().as_secs_f64();
                println!(
                    "{culture:?} w{wr:?} n={n}: {:.1} ms/inst (worst {:.1} ms), sef={} aef={} saef={} / {trials}",
                    total * 1000.0 / trials as f64,
                    worst_ms,
                    counts.0,
                    counts.1,
                    counts.2
                );
            }
        }
    }
}
