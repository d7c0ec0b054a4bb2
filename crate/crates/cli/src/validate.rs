//! Built-in validation suites. Each check measures a nonnegative deviation
//! and passes when it stays within its tolerance.

use bdht::binmath::{binary_convolution, binary_divergence, binary_entropy, gv_distance, inverse_binary_entropy};
use bdht::exponents::{e_bb, e_best, e_bt};
use bdht::gf2::{improve_covering, sample_random_linear_code};
use bdht::oracle::{enumerate_mixed_noise_law, exact_mixed_noise_pmf, ln_exact_ball_prob, ExactPmfQuery};
use bdht::regions::{theorem1_pair, theorem2_pair, HypothesisPair, SchemeParams};
use bdht::simkit::{
    decoded_weight_histogram, max_cdf_gap, nested_for_params, run_korner_marton, run_one_sided, SimConfig, SimScheme,
};

use crate::{CliError, CliResult, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    /// Closed-form identities and exponent sanity checks.
    Fast,
    /// Adds exhaustive enumeration, large-n convergence, code construction
    /// and simulation suites.
    Full,
}

pub const FAST_SUITES: [&str; 3] = ["binmath", "exponents", "regions"];
pub const FULL_SUITES: [&str; 4] = ["oracle", "convergence", "covering", "simulation"];

/// Added to every measured deviation of the injected suite.
const INJECTED_ERROR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| format!("{}/{}", c.suite, c.name))
            .collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("validate", &["suite", "check", "deviation", "tolerance", "passed"]);
        for c in &self.checks {
            t.push(vec![
                c.suite.into(),
                c.name.into(),
                c.deviation.into(),
                c.tolerance.into(),
                c.passed().into(),
            ]);
        }
        t
    }
}

fn grid(k: usize) -> impl Iterator<Item = f64> {
    (0..=k).map(move |i| i as f64 / k as f64)
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn binmath_suite(out: &mut Vec<Check>) {
    let s = "binmath";
    out.push(Check {
        suite: s,
        name: "entropy_round_trip",
        deviation: max_of(grid(1000).map(|y| (binary_entropy(inverse_binary_entropy(y)) - y).abs())),
        tolerance: 1e-10,
    });
    out.push(Check {
        suite: s,
        name: "divergence_to_half",
        deviation: max_of(grid(1000).map(|w| (binary_divergence(w, 0.5) - 1.0 + binary_entropy(w)).abs())),
        tolerance: 1e-12,
    });
    let rates: Vec<f64> = grid(1000).collect();
    out.push(Check {
        suite: s,
        name: "gv_decreasing",
        deviation: flag(rates[1..1000].windows(2).all(|w| gv_distance(w[1]) < gv_distance(w[0]))),
        tolerance: 0.0,
    });
    out.push(Check {
        suite: s,
        name: "convolution_identities",
        deviation: max_of(grid(100).flat_map(|p| {
            grid(100).map(move |q| {
                (binary_convolution(p, q) - binary_convolution(q, p))
                    .abs()
                    .max((binary_convolution(p, 0.5) - 0.5).abs())
                    .max((binary_convolution(p, 0.0) - p).abs())
            })
        })),
        tolerance: 1e-15,
    });
}

fn exponents_suite(out: &mut Vec<Check>) {
    let s = "exponents";
    out.push(Check {
        suite: s,
        name: "zero_at_capacity",
        deviation: max_of([0.05, 0.11, 0.25, 0.4].into_iter().map(|p| e_best(p, 1.0 - binary_entropy(p)).abs())),
        tolerance: 1e-6,
    });
    out.push(Check {
        suite: s,
        name: "typical_ball",
        deviation: max_of(
            [(0.1, 0.1), (0.25, 0.2), (0.4, 0.0)]
                .into_iter()
                .map(|(p, a)| e_bt(p, a, 0.0, binary_convolution(a, p))),
        ),
        tolerance: 0.0,
    });
    let mut excess = 0.0f64;
    for p in [0.05, 0.2, 0.4] {
        for a in [0.0, 0.1, 0.3] {
            for w in [0.0, 0.2, 0.5] {
                for theta in [0.05, 0.2, 0.4] {
                    excess = excess.max(e_bb(p, a, w, theta) - e_bt(p, a, w, theta));
                }
            }
        }
    }
    out.push(Check {
        suite: s,
        name: "ball_below_sphere",
        deviation: excess.max(0.0),
        tolerance: 1e-9,
    });
}

fn regions_suite(out: &mut Vec<Check>) -> CliResult<()> {
    let h = HypothesisPair::new(0.01, 0.25)?;
    let mut mismatches = 0usize;
    for i in 0..100 {
        let theta = 0.01 + 0.24 * i as f64 / 99.0;
        let a = theorem2_pair(&h, 0.3, theta)?;
        let b = theorem1_pair(&h, &SchemeParams::new(0.0, theta, 0.3))?;
        mismatches += usize::from(a != b);
    }
    out.push(Check {
        suite: "regions",
        name: "symmetric_equals_unquantized",
        deviation: mismatches as f64,
        tolerance: 0.0,
    });
    Ok(())
}

fn oracle_suite(out: &mut Vec<Check>) -> CliResult<()> {
    let mut worst = 0.0f64;
    for n in 1..=12 {
        for a in 0..=n {
            for w in 0..=n {
                for p in [0.1, 0.25, 0.4] {
                    for (t, &e) in enumerate_mixed_noise_law(n, a, w, p)?.iter().enumerate() {
                        let g = exact_mixed_noise_pmf(&ExactPmfQuery::new(n, a, w, t, p)?);
                        worst = worst.max(if e == 0.0 { g.abs() } else { (g - e).abs() / e });
                    }
                }
            }
        }
    }
    out.push(Check {
        suite: "oracle",
        name: "enumeration_equality",
        deviation: worst,
        tolerance: 1e-12,
    });
    Ok(())
}

fn convergence_suite(out: &mut Vec<Check>) -> CliResult<()> {
    let tuples = [
        (0.1, 0.2, 0.3, 0.25),
        (0.25, 0.1, 0.0, 0.12),
        (0.25, 0.05, 0.4, 0.2),
        (0.4, 0.1, 0.0, 0.3),
        (0.1, 0.3, 0.1, 0.2),
        (0.4, 0.2, 0.3, 0.35),
    ];
    let mut worst = 0.0f64;
    let mut monotone = true;
    for (p, a, w, theta) in tuples {
        let target = e_bt(p, a, w, theta);
        let mut gaps = Vec::new();
        for n in [200usize, 500, 1000, 2000] {
            let c = |x: f64| (x * n as f64).round() as usize;
            let q = ExactPmfQuery::new(n, c(a), c(w), c(theta), p)?;
            gaps.push((-ln_exact_ball_prob(&q) / std::f64::consts::LN_2 / n as f64 - target).abs());
        }
        monotone &= gaps.windows(2).all(|g| g[1] <= g[0]);
        worst = worst.max(gaps[3]);
    }
    out.push(Check {
        suite: "convergence",
        name: "ball_exponent_at_2000",
        deviation: worst,
        tolerance: 0.01,
    });
    out.push(Check {
        suite: "convergence",
        name: "gap_shrinks",
        deviation: flag(monotone),
        tolerance: 0.0,
    });
    Ok(())
}

fn covering_suite(out: &mut Vec<Check>) -> CliResult<()> {
    let limit = gv_distance(0.5) + 0.15;
    let mut misses = 0usize;
    for seed in 0..20u64 {
        let code = improve_covering(&sample_random_linear_code(24, 7, seed)?, seed)?;
        misses += usize::from(code.diagnostics()?.covering_radius_norm() > limit);
    }
    out.push(Check {
        suite: "covering",
        name: "miss_fraction_n24",
        deviation: misses as f64 / 20.0,
        tolerance: 0.1,
    });
    Ok(())
}

fn simulation_suite(out: &mut Vec<Check>) -> CliResult<()> {
    let n = 15;
    let params = SchemeParams::new(0.0, 0.1, 0.3);
    let cfg = SimConfig {
        n,
        trials: 20_000,
        seed: 1,
        h: HypothesisPair::new(0.01, 0.25)?,
        params,
        scheme: SimScheme::OneSided,
    };
    let nested = nested_for_params(n, &params, 1)?;
    let one = run_one_sided(&cfg, &nested)?;
    let km = run_korner_marton(
        &SimConfig {
            seed: 2,
            scheme: SimScheme::KornerMarton,
            ..cfg
        },
        &nested.coarse,
    )?;
    let gap = (0..2)
        .map(|h| max_cdf_gap(&decoded_weight_histogram(&one, h, n), &decoded_weight_histogram(&km, h, n)))
        .fold(0.0, f64::max);
    out.push(Check {
        suite: "simulation",
        name: "symmetric_matches_one_sided",
        deviation: gap,
        tolerance: 0.02,
    });
    Ok(())
}

/// Run the suites of `level`. `inject` names a suite whose measurements are
/// perturbed, which must then fail.
pub fn cmd_validate(level: Level, inject: Option<&str>) -> CliResult<ValidationReport> {
    if let Some(name) = inject {
        let known = FAST_SUITES.iter().chain(&FULL_SUITES).any(|s| *s == name);
        if !known {
            return Err(CliError::Usage(format!("unknown suite `{name}`")));
        }
    }
    let mut checks = Vec::new();
    binmath_suite(&mut checks);
    exponents_suite(&mut checks);
    regions_suite(&mut checks)?;
    if level == Level::Full {
        oracle_suite(&mut checks)?;
        convergence_suite(&mut checks)?;
        covering_suite(&mut checks)?;
        simulation_suite(&mut checks)?;
    }
    if let Some(name) = inject {
        for c in checks.iter_mut().filter(|c| c.suite == name) {
            c.deviation += INJECTED_ERROR;
        }
    }
    Ok(ValidationReport { checks })
}
