//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ence::linalg;
use ence::maps::{p_x, partial_transpose, EnceMapSpec, MapKind, Side};
use ence::measures::{
    measure_d, measure_q, measure_q_tilde, weighted_measure, WeightedMeasureSpec,
    DETECTION_THRESHOLD,
};
use ence::multipartite::{enumerate_bipartitions, pe_oracle_bipartite, splitting_table, PeStatus};
use ence::states::{
    apply_local_unitary, make_1wcc, make_named_state, random_density, random_fully_product_state,
    random_pe_state, random_unitary_seeded, tensor, validate, DensityMatrix, NamedStateSpec, Party,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const POWERS: [f64; 4] = [2.0, 3.0, 0.5, -1.0];

fn named(name: &str) -> DensityMatrix {
    make_named_state(&NamedStateSpec::new(name)).unwrap()
}

fn ps(p: f64) -> DensityMatrix {
    make_named_state(&NamedStateSpec::new("pseudo_entangled").with_param("p", p)).unwrap()
}

fn spec(kind: MapKind, side: Side) -> EnceMapSpec {
    EnceMapSpec::new(kind, side).unwrap()
}

fn d(rho: &DensityMatrix, kind: MapKind, side: Side) -> f64 {
    measure_d(rho, &spec(kind, side)).unwrap().value
}

fn q(rho: &DensityMatrix, kind: MapKind, side: Side) -> f64 {
    measure_q(rho, &spec(kind, side)).unwrap().value
}

fn qt(rho: &DensityMatrix, kind: MapKind) -> f64 {
    measure_q_tilde(rho, kind).unwrap().value
}

fn spectrum(m: &linalg::ComplexMatrix) -> Vec<f64> {
    linalg::eig_hermitian(m, false).unwrap().into_values()
}

fn all_kinds() -> Vec<MapKind> {
    std::iter::once(MapKind::Transpose)
        .chain(POWERS.iter().map(|&x| MapKind::PowerMap(x)))
        .collect()
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(
        elapsed < limit,
        format!("took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn two_copies(rho: &DensityMatrix, sigma: &DensityMatrix) -> DensityMatrix {
    tensor(rho, sigma).bipartition(&[0, 2]).unwrap()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let p = k as f64 / 10.0;
        let mut want = vec![
            (1.0 - 3.0 * p) / 4.0,
            (1.0 + p) / 4.0,
            (1.0 + p) / 4.0,
            (1.0 + p) / 4.0,
        ];
        want.sort_by(|a, b| b.total_cmp(a));
        let got = spectrum(&partial_transpose(&ps(p), Side::Right).unwrap().matrix);
        worst = got
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(worst, f64::max);
    }
    check(worst <= 1e-9, format!("max error {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("max error {worst:.1e} in {:.2?}", start.elapsed()))
}

fn ac2() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let p = k as f64 / 10.0;
        worst = worst.max((d(&ps(p), MapKind::Transpose, Side::Right) - 2.0 * p).abs());
    }
    check(worst <= 1e-9, format!("max |D_R - 2p| = {worst:e}"))?;
    Ok(format!("max |D_R - 2p| = {worst:.1e}"))
}

fn ac3() -> Outcome {
    let bell = named("bell");
    let one = d(&bell, MapKind::Transpose, Side::Right);
    let two = d(&two_copies(&bell, &bell), MapKind::Transpose, Side::Right);
    check((one - 2.0).abs() <= 1e-9, format!("D_R(Bell) = {one}"))?;
    check(
        (two - 4.5).abs() <= 1e-9,
        format!("D_R(Bell x Bell) = {two}"),
    )?;
    check(two > 4.0, "no subadditivity violation")?;
    Ok(format!(
        "D_R(Bell) = {one:.12}, D_R(Bell x Bell) = {two:.12} > 4"
    ))
}

fn ac4() -> Outcome {
    let rho = named("zero_plus");
    let s = spectrum(&p_x(&rho, Side::Right, 2.0).unwrap().matrix);
    check(
        (s[0] - 0.826).abs() <= 5e-4 && (s[1] - 0.375).abs() <= 5e-4,
        format!("nonzero spectrum {:?}", &s[..2]),
    )?;
    check(
        s[2].abs() <= 1e-9 && s[3].abs() <= 1e-9,
        format!("zero eigenvalues {:?}", &s[2..]),
    )?;
    let dr = d(&rho, MapKind::PowerMap(2.0), Side::Right);
    check((dr - 0.201).abs() <= 5e-4, format!("D_R = {dr}"))?;
    Ok(format!(
        "spectrum [{:.6}, {:.6}, {:.1e}, {:.1e}], D_R = {dr:.6}",
        s[0], s[1], s[2], s[3]
    ))
}

fn ac5() -> Outcome {
    let third = ps(1.0 / 3.0);
    let one = q(&third, MapKind::Transpose, Side::Right);
    let want_one = -((6f64).sqrt() / 6.0 + (2f64).sqrt() / 3.0).log2();
    let two = q(&two_copies(&third, &third), MapKind::Transpose, Side::Right);
    let want_two = -(5.0 / 18.0 + (3f64).sqrt() / 3.0).log2();
    check(
        (one - want_one).abs() <= 1e-9,
        format!("Q_R = {one}, closed form {want_one}"),
    )?;
    check(
        (two - want_two).abs() <= 1e-9,
        format!("two-copy Q_R = {two}, closed form {want_two}"),
    )?;
    check(
        two < 2.0 * one,
        "two-copy value not below twice the single-copy value",
    )?;
    Ok(format!(
        "Q_R = {one:.9}, two-copy Q_R = {two:.9} < {:.9}",
        2.0 * one
    ))
}

fn ac6() -> Outcome {
    let bell = named("bell");
    let zp = named("zero_plus");
    let values = [
        ("Q~(T, Bell)", qt(&bell, MapKind::Transpose), 1.0, 1e-9),
        ("Q~(P2, Bell)", qt(&bell, MapKind::PowerMap(2.0)), 0.0, 1e-9),
        ("Q~(T, rho_0+)", qt(&zp, MapKind::Transpose), 0.0, 1e-9),
        (
            "Q~(P2, rho_0+)",
            qt(&zp, MapKind::PowerMap(2.0)),
            7.00e-3,
            5e-4,
        ),
    ];
    let report: Vec<String> = values
        .iter()
        .map(|(n, v, _, _)| format!("{n} = {v:.6e}"))
        .collect();
    let failed: Vec<String> = values
        .iter()
        .filter(|(_, v, want, tol)| (v - want).abs() > *tol)
        .map(|(n, v, want, tol)| format!("{n} = {v:.6e}, expected {want:e} +/- {tol:e}"))
        .collect();
    if failed.is_empty() {
        Ok(report.join(", "))
    } else {
        Err(format!("{} [{}]", failed.join("; "), report.join(", ")))
    }
}

fn ac7() -> Outcome {
    let w = WeightedMeasureSpec::transpose_and_powers(1.0, &[(2.0, 1.0)]);
    let zp = weighted_measure(&named("zero_plus"), &w).unwrap().value;
    let bell = weighted_measure(&named("bell"), &w).unwrap().value;
    check(zp > DETECTION_THRESHOLD, format!("rho_0+ value {zp:e}"))?;
    check(bell > DETECTION_THRESHOLD, format!("Bell value {bell:e}"))?;
    Ok(format!("rho_0+: {zp:.4e}, Bell: {bell:.4e}"))
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_measure: f64 = 0.0;
    let mut worst_fixed: f64 = 0.0;
    for i in 0..200 {
        let (da, db) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let rho = random_pe_state(da, db, 8_000 + i, i % 2 == 0);
        for kind in all_kinds() {
            for side in [Side::Right, Side::Left] {
                worst_measure = worst_measure
                    .max(d(&rho, kind, side))
                    .max(q(&rho, kind, side));
            }
            worst_measure = worst_measure.max(qt(&rho, kind));
            if let MapKind::PowerMap(x) = kind {
                for side in [Side::Right, Side::Left] {
                    let image = p_x(&rho, side, x).unwrap();
                    worst_fixed = worst_fixed.max(image.matrix.max_abs_diff(rho.matrix()));
                }
            }
        }
    }
    check(
        worst_measure <= 1e-9,
        format!("largest measure {worst_measure:e}"),
    )?;
    check(
        worst_fixed <= 1e-9,
        format!("largest |P_x(rho) - rho| {worst_fixed:e}"),
    )?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "largest measure {worst_measure:.1e}, largest |P_x(rho) - rho| {worst_fixed:.1e}, {:.2?}",
        start.elapsed()
    ))
}

fn ac9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..200 {
        let da = [2, 3][rng.random_range(0..2)];
        let db = [2, 3][rng.random_range(0..2)];
        let rho = random_density(&[2, da], 9_000 + 2 * i, None).unwrap();
        let sigma = random_density(&[2, db], 9_001 + 2 * i, None).unwrap();
        let joint = two_copies(&rho, &sigma);
        for kind in all_kinds() {
            for side in [Side::Right, Side::Left] {
                worst =
                    worst.max(q(&joint, kind, side) - q(&rho, kind, side) - q(&sigma, kind, side));
            }
            worst = worst.max(qt(&joint, kind) - qt(&rho, kind) - qt(&sigma, kind));
        }
    }
    check(
        worst <= 1e-9,
        format!("largest Q(rho x sigma) - Q(rho) - Q(sigma) = {worst:e}"),
    )?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "largest excess {worst:.3e}, {:.2?}",
        start.elapsed()
    ))
}

fn ac10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (da, db) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let rho = random_density(&[da, db], 10_000 + i, None).unwrap();
        let ua = random_unitary_seeded(da, 20_000 + i);
        let ub = random_unitary_seeded(db, 30_000 + i);
        let moved =
            apply_local_unitary(&apply_local_unitary(&rho, &ua, 0).unwrap(), &ub, 1).unwrap();
        for kind in [MapKind::Transpose, MapKind::PowerMap(2.0)] {
            worst = worst.max((qt(&rho, kind) - qt(&moved, kind)).abs());
        }
    }
    check(worst <= 1e-9, format!("largest change {worst:e}"))?;
    Ok(format!("largest change {worst:.1e}"))
}

fn random_1wcc(rng: &mut ChaCha8Rng, seed: u64) -> DensityMatrix {
    let d_basis = rng.random_range(2..=3);
    let d_other = rng.random_range(2..=3);
    let side = if rng.random::<bool>() {
        Party::A
    } else {
        Party::B
    };
    let weights: Vec<f64> = (0..d_basis).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let blocks: Vec<_> = weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            random_density(&[d_other], seed * 10 + k as u64, None)
                .unwrap()
                .matrix()
                .scale(w / total)
        })
        .collect();
    make_1wcc(side, &blocks).unwrap()
}

fn ac11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let rho = random_1wcc(&mut rng, 11_000 + i);
        for side in [Side::Right, Side::Left] {
            worst = worst.max(d(&rho, MapKind::Transpose, side));
        }
    }
    check(worst <= 1e-9, format!("largest D(T) {worst:e}"))?;
    let example = named("one_way_cc");
    let verdict = pe_oracle_bipartite(&example, &enumerate_bipartitions(2).unwrap()[0]).unwrap();
    check(
        verdict.status == PeStatus::NoPE,
        format!("oracle on the example: {:?}", verdict.status),
    )?;
    Ok(format!("largest D(T) {worst:.1e}; example flagged NoPE"))
}

fn ac12() -> Outcome {
    let split = enumerate_bipartitions(2).unwrap().remove(0);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut detected, mut pe_total) = (0, 0);
    for i in 0..300 {
        let (da, db) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let seed = 12_000 + i;
        let rho = match i % 3 {
            0 => random_density(&[da, db], seed, None).unwrap(),
            1 => random_pe_state(da, db, seed, true),
            _ => {
                let pe = random_pe_state(da, db, seed, true);
                let generic = random_density(&[da, db], seed, None).unwrap();
                validate(
                    &[da, db],
                    &pe.matrix().scale(1.0 - 1e-4) + &generic.matrix().scale(1e-4),
                )
                .unwrap()
            }
        };
        let verdict = pe_oracle_bipartite(&rho, &split).unwrap().status;
        let mut largest: f64 = 0.0;
        for kind in [MapKind::Transpose, MapKind::PowerMap(2.0)] {
            for side in [Side::Right, Side::Left] {
                largest = largest.max(d(&rho, kind, side)).max(q(&rho, kind, side));
            }
        }
        if largest > DETECTION_THRESHOLD {
            detected += 1;
            check(
                verdict != PeStatus::HasPE,
                format!("sample {i}: measure {largest:e} but oracle HasPE"),
            )?;
        }
        if i % 3 == 1 {
            pe_total += 1;
            check(
                verdict == PeStatus::HasPE,
                format!("PE sample {i}: oracle {verdict:?}"),
            )?;
        }
    }
    Ok(format!(
        "{detected} detections, none with HasPE; {pe_total}/{pe_total} PE states HasPE"
    ))
}

fn ac13() -> Outcome {
    for m in 2..=6 {
        let n = enumerate_bipartitions(m).unwrap().len();
        check(n == (1 << (m - 1)) - 1, format!("m = {m}: {n} splittings"))?;
    }
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let parts: Vec<_> = (0..3)
            .map(|k| random_density(&[2 + (i + k) as usize % 2], 13_000 + 3 * i + k, None).unwrap())
            .collect();
        let rho = tensor(&tensor(&parts[0], &parts[1]), &parts[2]);
        for kind in [MapKind::Transpose, MapKind::PowerMap(2.0)] {
            worst = worst.max(splitting_table(&rho, kind).unwrap().max);
        }
    }
    check(
        worst <= 1e-9,
        format!("product-state table entry {worst:e}"),
    )?;
    for i in 0..20 {
        let rho = random_fully_product_state(&[2, 2, 2], 13_100 + i, true).unwrap();
        for s in enumerate_bipartitions(3).unwrap() {
            let v = pe_oracle_bipartite(&rho, &s).unwrap().status;
            check(
                v == PeStatus::HasPE,
                format!("fully product sample {i}, splitting {s}: {v:?}"),
            )?;
        }
    }
    Ok(format!(
        "counts 1, 3, 7, 15, 31; product tables <= {worst:.1e}; 20/20 fully product states HasPE"
    ))
}

fn ac14() -> Outcome {
    let mut report = Vec::new();
    for (dims, limit) in [
        ([6usize, 6usize], Duration::from_secs(1)),
        ([8, 8], Duration::from_secs(5)),
    ] {
        let rho = random_density(&dims, 14, None).unwrap();
        let start = Instant::now();
        let value = qt(&rho, MapKind::PowerMap(2.0));
        let elapsed = start.elapsed();
        check(value.is_finite(), "non-finite value")?;
        within(elapsed, limit).map_err(|e| format!("dimension {}: {e}", dims[0] * dims[1]))?;
        report.push(format!("dim {}: {elapsed:.2?}", dims[0] * dims[1]));
    }
    Ok(report.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        (
            "partial transpose spectra of the pseudo-entangled family",
            ac1,
        ),
        ("D_R(transpose) = 2p on the pseudo-entangled family", ac2),
        ("D_R Bell values and non-subadditivity", ac3),
        ("power map P_2 on rho_0+: spectrum and D_R", ac4),
        ("Q_R closed forms and non-additivity", ac5),
        ("Q_tilde reference values", ac6),
        ("weighted measure detects rho_0+ and Bell", ac7),
        (
            "measures vanish and P_x fixes product-eigenbasis states",
            ac8,
        ),
        ("subadditivity of Q", ac9),
        ("local-unitary invariance of Q_tilde", ac10),
        ("transpose blind to one-way states; example flagged", ac11),
        ("oracle soundness and completeness", ac12),
        ("multipartite splittings", ac13),
        ("runtime scaling of Q_tilde(P_2)", ac14),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("AC{:02} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("AC{:02} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
