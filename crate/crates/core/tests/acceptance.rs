//! End-to-end acceptance run: one PASS/FAIL line per criterion, each with
//! its wall-clock budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use phin_core::bounds::{ladder_identity_holds, DEFAULT_TOLERANCE};
use phin_core::certify::{Variant, GAMMA_RELATION};
use phin_core::characters::TailVerdict;
use phin_core::kernels::mode_commutator_via_kernel;
use phin_core::{
    annihilator_bound_check, certify, creator_bound_check, effective_multiplicity, gram_matrix,
    kernel_identity_check, modular_check, nuclearity_probe, reduced_character, smeared_bound_check,
    structure_pi, verify_certificate, BetaGrid, Evidence, FockVector, RatMatrix, Scalar,
    SmearedFunction, StructureConstants,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mode_relations() -> Outcome {
    let mut count = 0;
    for n in 0..=4u32 {
        for m in -10..=10i64 {
            for mp in -10..=10i64 {
                let expected = if m + mp == 0 {
                    structure_pi(n, m)
                } else {
                    Scalar::zero()
                };
                let got = mode_commutator_via_kernel(n, m, mp);
                ensure(got == expected, || {
                    format!("n={n} ({m},{mp}): {got} ≠ {expected}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} mode pairs"))
}

fn kernel_identities() -> Outcome {
    for n in 1..=10 {
        let check = kernel_identity_check(n);
        ensure(check.holds(), || format!("n={n}: {check:?}"))?;
    }
    Ok("n = 1..10".into())
}

fn null_levels() -> Outcome {
    for n in 1..=4u32 {
        let c = StructureConstants::new(n);
        for level in 1..=n {
            let rank = gram_matrix(&c, level).rank();
            ensure(rank == 0, || format!("n={n}, N={level}: rank {rank}"))?;
        }
    }
    let g = gram_matrix(&StructureConstants::new(1), 2).entries;
    ensure(g == RatMatrix::from_i64(&[&[6, 0], &[0, 0]]), || {
        format!("n=1, N=2 Gram {g}")
    })?;
    ensure(g.rank() == 1, || "n=1, N=2 rank ≠ 1".into())?;
    Ok("levels 1..n null for n ≤ 4; Gram(1, 2) = [[6,0],[0,0]], rank 1".into())
}

fn multiplicity_law() -> Outcome {
    for n in 0..=3u32 {
        let expected = reduced_character(n, 12);
        let c = StructureConstants::new(n);
        for level in 0..=12u32 {
            let d = effective_multiplicity(&c, level);
            let e = expected.coefficients[level as usize].to_string();
            ensure(d.to_string() == e, || {
                format!("n={n}, N={level}: {d} ≠ {e}")
            })?;
        }
    }
    Ok("n ≤ 3, N ≤ 12".into())
}

fn certificates() -> Outcome {
    for n in 2..=6 {
        let cert = certify(n);
        ensure(cert.variant() == Variant::NullLevelTwo, || {
            format!("n={n}: {}", cert.variant())
        })?;
        verify_certificate(&cert).map_err(|e| format!("n={n}: {e}"))?;
    }
    let one = certify(1);
    let Evidence::UniqueCandidateContradiction {
        mismatch,
        required,
        actual,
        relation,
        ..
    } = &one.evidence
    else {
        return Err(format!("n=1: {}", one.variant()));
    };
    ensure(*mismatch == Scalar::from(48), || {
        format!("n=1 gap {mismatch}")
    })?;
    ensure(required.sub(actual).is_constant(), || {
        "n=1 gap depends on γ".into()
    })?;
    ensure(relation == GAMMA_RELATION, || {
        format!("relation {relation}")
    })?;
    let json = serde_json::to_string(&one).map_err(|e| e.to_string())?;
    ensure(json.contains("c|γ|² = 12"), || {
        "relation missing from JSON".into()
    })?;
    verify_certificate(&one).map_err(|e| format!("n=1: {e}"))?;
    let zero = certify(0);
    ensure(
        zero.variant() == Variant::NoObstruction && zero.effective_dimension == 2,
        || {
            format!(
                "n=0: {} with d₂ = {}",
                zero.variant(),
                zero.effective_dimension
            )
        },
    )?;
    verify_certificate(&zero).map_err(|e| format!("n=0: {e}"))?;
    Ok("n=0 NoObstruction (d₂=2), n=1 gap 48, n=2..6 NullLevelTwo; all replayed".into())
}

fn energy_ladder() -> Outcome {
    let mut checks = 0;
    for n in 0..=3u32 {
        let c = StructureConstants::new(n);
        for m in 1..=8i64 {
            for level in 0..=8u32 {
                ensure(ladder_identity_holds(&c, m, level), || {
                    format!("ladder n={n} m={m} N={level}")
                })?;
                let a = annihilator_bound_check(&c, m, level, DEFAULT_TOLERANCE)
                    .map_err(|e| e.to_string())?;
                ensure(a.pass, || {
                    format!("annihilator n={n} m={m} N={level}: {a:?}")
                })?;
                let b = creator_bound_check(&c, m, level, DEFAULT_TOLERANCE)
                    .map_err(|e| e.to_string())?;
                ensure(b.pass, || format!("creator n={n} m={m} N={level}: {b:?}"))?;
                checks += 2;
            }
        }
    }
    Ok(format!("{checks} bound checks, ladder exact"))
}

fn smeared_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = rng.gen_range(0..=3u32);
        let c = StructureConstants::new(n);
        let top = rng.gen_range(0..=8u32);
        let basis = phin_core::level_basis(top);
        let mut psi = FockVector::zero();
        for level in 0..=top {
            for s in phin_core::level_basis(level) {
                if rng.gen_bool(0.3) || (level == top && s == basis[0]) {
                    psi.add_term(
                        s,
                        &Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)),
                    );
                }
            }
        }
        let modes = rng.gen_range(1..=4);
        let f = SmearedFunction::real(
            rng.gen_range(-1.0..1.0),
            (0..modes).map(|_| {
                (
                    rng.gen_range(1..=5i64),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            }),
        );
        let r =
            smeared_bound_check(&c, &f, &psi, 13, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("trial {trial}: {r:?}"))?;
        if r.bound_value > 0.0 {
            worst = worst.max(r.observed / r.bound_value);
        }
    }
    Ok(format!("100 random (f, Ψ), max lhs/rhs = {worst:.3}"))
}

fn eta_modular() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in [0.5, 1.0, 2.0, std::f64::consts::PI, 4.0, 5.0] {
        let r = modular_check(beta, 30).map_err(|e| e.to_string())?;
        ensure(r.residual < 1e-10, || {
            format!("β={beta}: residual {:e}", r.residual)
        })?;
        worst = worst.max(r.residual);
    }
    Ok(format!("30 digits, max residual {worst:.1e}"))
}

fn nuclearity() -> Outcome {
    let grid = BetaGrid::geometric(0.5, 0.02, 25).map_err(|e| e.to_string())?;
    let good = nuclearity_probe(1.70, 1, &grid, 30).map_err(|e| e.to_string())?;
    ensure(
        good.tail_verdict == TailVerdict::Decreasing && good.tends_to_zero,
        || format!("β₀=1.70: {:?}", good.tail_verdict),
    )?;
    let bad = nuclearity_probe(1.60, 1, &grid, 30).map_err(|e| e.to_string())?;
    ensure(
        bad.tail_verdict == TailVerdict::Increasing && bad.diverges,
        || format!("β₀=1.60: {:?}", bad.tail_verdict),
    )?;
    ensure(bad.nominal_threshold_conflict, || {
        "β₀=1.60 conflict not flagged".into()
    })?;
    Ok(format!(
        "β₀=1.70 → 0, β₀=1.60 diverges; flagged open question (growth ≈ {:.3})",
        bad.empirical_growth
    ))
}

fn sl2_structure() -> Outcome {
    for n in 0..=3 {
        if let Some((phi, psi)) = common::sl2_commutator_violation(n, 8) {
            return Err(format!("[L₁,L₋₁] ≠ 2L₀: n={n}, ⟨{phi}|·|{psi}⟩"));
        }
        if let Some((phi, psi)) = common::sl2_adjointness_violation(n, 8) {
            return Err(format!("adjointness: n={n}, ⟨{phi}|L₋₁|{psi}⟩"));
        }
    }
    Ok("n ≤ 3, levels ≤ 8".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "mode-relation equivalence",
            Duration::from_secs(1),
            mode_relations,
        ),
        (
            "kernel identities",
            Duration::from_secs(1),
            kernel_identities,
        ),
        ("null levels", Duration::from_secs(5), null_levels),
        (
            "multiplicity law",
            Duration::from_secs(60),
            multiplicity_law,
        ),
        (
            "no-stress-tensor certificates",
            Duration::from_secs(5),
            certificates,
        ),
        (
            "energy-bound ladder",
            Duration::from_secs(120),
            energy_ladder,
        ),
        (
            "smeared linear energy bound",
            Duration::from_secs(60),
            smeared_bound,
        ),
        ("eta modular law", Duration::from_secs(5), eta_modular),
        ("nuclearity probe", Duration::from_secs(5), nuclearity),
        ("sl(2) structure", Duration::from_secs(30), sl2_structure),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if elapsed <= budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if verdict.0 == "FAIL" {
            failures += 1;
        }
        println!(
            "{} {:>2}. {name} [{:.3}s / {:?}]: {}",
            verdict.0,
            i + 1,
            elapsed.as_secs_f64(),
            budget,
            verdict.1
        );
    }
    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
