use latticeforge_core::eval::{
    compute_h, h_upper_bound, t_bound_theorem, t_gamma, t_gamma_bruteforce, truncation_bound, worst_case_error,
};
use latticeforge_core::{ConstructorRegistry, GeneratingVector, LatticeConfig, Problem, ReductionIndices, WeightSequence};

fn constructed(m: u32, d: usize, g: &WeightSequence, r: &ReductionIndices) -> (GeneratingVector, Vec<f64>) {
    let cfg = LatticeConfig::new(m, d).unwrap();
    let p = Problem::new(cfg, r, g).unwrap();
    let res = ConstructorRegistry::standard().get("reduced-fast").unwrap().construct(&p).unwrap();
    (res.vector, p.gamma().to_vec())
}

#[test]
fn bound_chain_on_small_vectors() {
    let log4 = 4f64.ln();
    let weights = [WeightSequence::polynomial(2.0).unwrap(), WeightSequence::geometric(0.5).unwrap()];
    let reductions = [ReductionIndices::Zero, ReductionIndices::logarithmic(1.0).unwrap()];
    for m in 4..=6 {
        for d in 1..=3 {
            for g in &weights {
                for r in &reductions {
                    let (z, gamma) = constructed(m, d, g, r);
                    let cfg = z.config();
                    let w = z.reduction_indices().to_vec();
                    let t = t_gamma_bruteforce(&z, &gamma, 1.0).unwrap();
                    assert!(t <= t_bound_theorem(cfg, &w, &gamma), "T bound, m={m} d={d}");

                    let d_star = w.iter().take_while(|&&x| x < m).count();
                    let mut prev = 0.0;
                    for s in 1..=d_star {
                        let h = compute_h(&z.reduced()[..s], m, &w, &gamma).unwrap();
                        assert!(h <= h_upper_bound(cfg, &gamma, s) * (1.0 + 1e-12));
                        let rec = (1.0 + gamma[s - 1] * log4) * prev
                            + gamma[s - 1] * log4 * ((1u64 << m) - (1u64 << w[s - 1])) as f64;
                        assert!(h <= rec * (1.0 + 1e-12), "recursion m={m} s={s}: {h} > {rec}");
                        prev = h;
                    }

                    let g2: Vec<f64> = gamma.iter().map(|x| x * x).collect();
                    let e = worst_case_error(&z, 2.0, &g2).unwrap().value;
                    let rhs = truncation_bound(cfg, &w, &g2, 2.0).unwrap() + t * t;
                    assert!(e <= rhs, "corollary m={m} d={d}: {e} > {rhs}");
                }
            }
        }
    }
}

#[test]
fn character_sum_t_gamma_matches_enumeration_on_constructed_vectors() {
    for m in 3..=6 {
        let (z, gamma) = constructed(m, 3, &WeightSequence::polynomial(1.5).unwrap(), &ReductionIndices::logarithmic(1.0).unwrap());
        let a = t_gamma_bruteforce(&z, &gamma, 1.0).unwrap();
        let b = t_gamma(&z, &gamma, 1.0).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(1.0), "m={m}: {a} vs {b}");
    }
}
