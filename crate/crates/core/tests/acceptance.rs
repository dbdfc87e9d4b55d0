//! Acceptance criteria, one pass/fail line each. Exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hpl::combinatorics::{eq4_identity_check, forms_dim, n3lu1_check, split_bc, split_uv, SplitBC};
use hpl::engine::{
    general_hilbert, hilbert_report, maximal_rank_sweep, sample_configuration, FamilySpec, Placement, SweepVerdict,
    Template, TrialPlan, Verdict,
};
use hpl::geometry::SeededRng;
use hpl::horace::{check_assertion, exceptional_certificate, horace_bounds, Assertion, ExceptionalCase};
use hpl::linalg::PrimeField;
use hpl::schemes::ComponentKind;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);
type SweepResult = Result<(Vec<(usize, usize)>, Vec<usize>), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn plan() -> TrialPlan {
    TrialPlan::default()
}

fn criterion_1() -> Outcome {
    let cases = [
        (ExceptionalCase::X22_d4, (2, 2, 4), (1, 2)),
        (ExceptionalCase::X30_d4, (3, 0, 4), (1, 5)),
        (ExceptionalCase::X31_d5, (3, 1, 5), (4, 2)),
        (ExceptionalCase::X40_d6, (4, 0, 6), (10, 2)),
    ];
    for (case, (a, b, d), (h0, h1)) in cases {
        let c = general_hilbert(&FamilySpec::Z { a, b }, d, &plan()).map_err(|e| e.to_string())?;
        ensure!(
            c.verdict == Verdict::DefectObserved { h0, h1 },
            "Z({a},{b}) at d={d}: {:?}, expected ({h0},{h1})",
            c.verdict
        );
        let cert = exceptional_certificate(case, &plan()).map_err(|e| e.to_string())?;
        ensure!(
            (cert.h0, cert.h1) == (h0, h1),
            "{case}: certified ({}, {})",
            cert.h0,
            cert.h1
        );
        ensure!(
            cert.bounds.best_lower() == h0,
            "{case}: lower bound {}",
            cert.bounds.best_lower()
        );
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let c = general_hilbert(&FamilySpec::Z { a: 4, b: 1 }, 6, &plan()).map_err(|e| e.to_string())?;
    ensure!(c.trials.len() == 6, "expected 6 trials, ran {}", c.trials.len());
    for t in &c.trials {
        ensure!(t.h0 > 0 && t.h1 > 0, "trial {:?} has a vanishing group", t);
    }
    let cert = exceptional_certificate(ExceptionalCase::X41_d6, &plan()).map_err(|e| e.to_string())?;
    ensure!(cert.h0 > 0 && cert.h1 > 0, "certificate ({}, {})", cert.h0, cert.h1);
    Ok(())
}

/// Sweeps `Z(a, b)` for every `b` in `bs` up to the critical value plus one
/// and returns the uncertified `(b, d)` cells and the pairs whose two-point
/// criterion failed.
fn sweep(a: usize, bs: std::ops::RangeInclusive<usize>) -> SweepResult {
    let mut cells = Vec::new();
    let mut failed = Vec::new();
    for b in bs {
        let crit = hpl::combinatorics::critical_value(a as u64, b as u64).map_err(|e| e.to_string())? as usize;
        let r = maximal_rank_sweep(a, b, crit + 1, &plan()).map_err(|e| e.to_string())?;
        cells.extend(r.flagged_cells().into_iter().map(|d| (b, d)));
        if r.verdict != SweepVerdict::MaximalRank {
            failed.push(b);
        }
    }
    Ok((cells, failed))
}

fn criterion_3() -> Outcome {
    let (cells, failed) = sweep(2, 0..=20)?;
    ensure!(cells == vec![(2, 4)], "flagged cells {cells:?}");
    ensure!(failed == vec![2], "two-point criterion failed for b in {failed:?}");
    Ok(())
}

fn criterion_4() -> Outcome {
    let (cells, _) = sweep(3, 0..=12)?;
    ensure!(cells == vec![(0, 4), (1, 5)], "flagged cells {cells:?}");
    let c = general_hilbert(&FamilySpec::Z { a: 3, b: 2 }, 5, &plan()).map_err(|e| e.to_string())?;
    ensure!(
        c.verdict.is_certified() && c.min_h0 == 0,
        "Z(3,2) at 5: {:?}",
        c.verdict
    );
    Ok(())
}

fn criterion_5() -> Outcome {
    for (a, d) in [(4usize, 14usize), (5, 17)] {
        let s = split_bc(a as u64, d as u64).map_err(|e| e.to_string())?;
        for b in [0, s.b as usize, s.b as usize + 1] {
            let start = Instant::now();
            let c = general_hilbert(&FamilySpec::Z { a, b }, d, &plan()).map_err(|e| e.to_string())?;
            ensure!(c.verdict.is_certified(), "Z({a},{b}) at {d}: {:?}", c.verdict);
            ensure!(
                start.elapsed().as_secs() < 60,
                "Z({a},{b}) at {d} took {:?}",
                start.elapsed()
            );
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let quoted = [
        ((2, 4), (1, 4)),
        ((2, 6), (6, 4)),
        ((2, 8), (12, 7)),
        ((2, 10), (20, 4)),
        ((0, 8), (18, 3)),
        ((3, 6), (3, 6)),
        ((3, 7), (6, 6)),
        ((3, 8), (10, 0)),
        ((3, 9), (13, 6)),
        ((3, 10), (17, 6)),
        ((3, 11), (21, 10)),
        ((3, 13), (31, 6)),
        ((1, 5), (6, 4)),
        ((1, 8), (15, 5)),
    ];
    for ((a, d), (b, c)) in quoted {
        ensure!(
            split_bc(a, d) == Ok(SplitBC { b, c }),
            "split_bc({a},{d}) = {:?}",
            split_bc(a, d)
        );
    }
    for k in 1..=13u64 {
        let uv = |d| split_uv(0, d).unwrap();
        ensure!(uv(3 * k + 1).v == 0 && uv(3 * k).v == 0, "v closed form at k={k}");
        ensure!(uv(3 * k - 1).v == 2 * k, "v_(3k-1) at k={k}");
        ensure!(uv(3 * k - 1).u == (3 * k * k + 3 * k + 2) / 2, "u_(3k-1) at k={k}");
        ensure!(uv(3 * k + 1).u == (3 * k + 4) * (k + 1) / 2, "u_(3k+1) at k={k}");
        ensure!(uv(3 * k).u == (k + 1) * (3 * k + 2) / 2, "u_(3k) at k={k}");
    }
    for a in 0..=10u64 {
        for d in 2..=30u64 {
            if a * (3 * d + 1) <= forms_dim(d).unwrap() {
                ensure!(eq4_identity_check(a, d), "identity fails at ({a},{d})");
            }
        }
    }
    for a in 1..=30u64 {
        ensure!(
            n3lu1_check(a, 3 * a + 1) && n3lu1_check(a, 3 * a + 2),
            "inequality fails at a={a}"
        );
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut checks: Vec<(Assertion, bool)> = Vec::new();
    checks.extend((5..=10).map(|d| (Assertion::C { a: 0, d, e: 0 }, true)));
    for d in [6, 7] {
        checks.extend((0..=5).map(|e| (Assertion::C { a: 0, d, e }, true)));
    }
    for d in 5..=9 {
        checks.push((Assertion::E { a: 2, d }, true));
        checks.push((Assertion::F { a: 2, d }, d != 5));
    }
    for (kind, want) in checks {
        let o = check_assertion(kind, &plan()).map_err(|e| format!("{kind}: {e}"))?;
        ensure!(o.holds == want, "{kind} came out {}", o.holds);
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let f = PrimeField::default_field();
    let mut rng = SeededRng::new(0x5EED_0008);

    // Single components impose independent conditions.
    for kind in ComponentKind::ALL {
        let spec = FamilySpec::Custom {
            components: vec![Template::new(kind, Placement::Free)],
        };
        let cfg = sample_configuration(f, &spec, &mut rng).map_err(|e| e.to_string())?;
        for d in 1..=10 {
            let r = hilbert_report(&cfg, d).map_err(|e| e.to_string())?;
            ensure!(
                r.h0 as i64 - r.h1 as i64 == r.n as i64 - r.sheaf_dim as i64,
                "Euler identity"
            );
            ensure!(
                r.rank == r.sheaf_dim,
                "{kind:?} at d={d}: rank {} vs {}",
                r.rank,
                r.sheaf_dim
            );
        }
    }

    // Arrows impose two conditions each until the forms run out.
    for prime in [32003, 65521] {
        let p = plan().with_primes(vec![PrimeField::new(prime).unwrap()]);
        for e in 1..=20 {
            for d in 1..=8 {
                let c = general_hilbert(&FamilySpec::Arrows { e }, d, &p).map_err(|e| e.to_string())?;
                let law = c.n.saturating_sub(2 * e);
                ensure!(
                    c.min_h0 == law,
                    "{e} arrows at d={d} over GF({prime}): h0 {} vs {law}",
                    c.min_h0
                );
            }
        }
    }

    // Residual sandwich on every adapted and mixed configuration.
    let mut configs: Vec<FamilySpec> = ExceptionalCase::ALL
        .iter()
        .map(|c| FamilySpec::Custom {
            components: c.construction(),
        })
        .collect();
    configs.push(FamilySpec::W { a: 1, u: 4, v: 2, e: 2 });
    configs.push(FamilySpec::W {
        a: 0,
        u: 12,
        v: 0,
        e: 5,
    });
    configs.push(FamilySpec::Custom {
        components: vec![
            Template::new(ComponentKind::DoubleLine, Placement::OnQuadric),
            Template::new(ComponentKind::SpaceDoublePoint, Placement::OnQuadric),
            Template::new(ComponentKind::Sundial, Placement::OnQuadric),
            Template::new(ComponentKind::NodalConic, Placement::OffQuadric),
            Template::new(ComponentKind::Point, Placement::OffQuadric),
            Template::new(ComponentKind::Line, Placement::OffQuadric),
        ],
    });
    for spec in &configs {
        let cfg = sample_configuration(f, spec, &mut rng).map_err(|e| e.to_string())?;
        for d in 2..=10 {
            let b = horace_bounds(&cfg, d).map_err(|e| e.to_string())?;
            let h0 = hilbert_report(&cfg, d).map_err(|e| e.to_string())?.h0;
            ensure!(
                b.lower <= h0 && b.best_lower() <= h0 && h0 <= b.upper,
                "sandwich fails for {spec:?} at d={d}: {} <= {h0} <= {}",
                b.best_lower(),
                b.upper
            );
        }
    }

    // Lines alone have maximal rank.
    for b in 1..=12 {
        for d in 1..=8 {
            let c = general_hilbert(&FamilySpec::Z { a: 0, b }, d, &plan()).map_err(|e| e.to_string())?;
            ensure!(c.verdict.is_certified(), "{b} lines at d={d}: {:?}", c.verdict);
        }
    }

    // Two or more double lines lie on no quadric.
    for a in 2..=5 {
        for b in 0..=4 {
            for t in 0..3 {
                let cfg = sample_configuration(f, &FamilySpec::Z { a, b }, &mut SeededRng::new(t))
                    .map_err(|e| e.to_string())?;
                let h0 = hilbert_report(&cfg, 2).map_err(|e| e.to_string())?.h0;
                ensure!(h0 == 0, "Z({a},{b}) sample {t}: h0(2) = {h0}");
            }
        }
    }
    Ok(())
}

fn suite_output(seed: &str) -> Vec<u8> {
    let runs: [&[&str]; 6] = [
        &["hilbert", "--a", "0..3", "--b", "0..3", "--d", "2..5"],
        &[
            "hilbert", "--family", "w", "--a", "1", "--u", "3", "--v", "1", "--e", "0..1", "--d", "3..5",
        ],
        &["table", "--a", "2", "--b", "0..4", "--dmax", "6"],
        &["assert", "--kind", "F", "--a", "2", "--d", "5..7"],
        &["horace"],
        &["split", "--a", "0..3", "--d", "2..10"],
    ];
    let mut out = Vec::new();
    for args in runs {
        let mut sink = Vec::new();
        let mut argv = vec!["hpl"];
        argv.extend_from_slice(args);
        argv.extend_from_slice(&["--seed", seed]);
        hpl::cli::run_with(argv, &mut out, &mut sink);
    }
    out
}

fn criterion_9() -> Outcome {
    let first = suite_output("0xB10C5EED");
    let second = suite_output("0xB10C5EED");
    ensure!(!first.is_empty(), "no output");
    ensure!(first == second, "outputs differ between identical runs");
    for line in first.split(|&b| b == b'\n').filter(|l| !l.is_empty()) {
        serde_json::from_slice::<serde_json::Value>(line).map_err(|e| format!("not JSON: {e}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exceptional quadruple with matching residual bounds", criterion_1),
        ("Z(4,1) at d=6 has h0 > 0 and h1 > 0", criterion_2),
        ("a = 2 sweep, only (2,4) flagged", criterion_3),
        ("a = 3 sweep, only (0,4) and (1,5) flagged", criterion_4),
        ("large-degree spot checks certified", criterion_5),
        ("combinatorics regression", criterion_6),
        ("assertion suite", criterion_7),
        ("property suites", criterion_8),
        ("byte-identical output for identical seeds", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] criterion {}: {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
