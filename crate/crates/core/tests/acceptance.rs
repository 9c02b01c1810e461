//! Acceptance suite. Each test prints one `acceptance: ... PASS/FAIL` line for
//! its criterion; expected values are frozen independently of the library
//! internals (hand-computed or re-derived in-test from first principles).

use evoalg::algebra::EvolutionAlgebra;
use evoalg::classify3::{classify, template_check, Assignment, TypeMatch};
use evoalg::graph::associated_graph;
use evoalg::rational::{rat, Rational};
use evoalg::report::{analyze, consistency, emit_report};
use evoalg::solver::{
    assemble_constraints, generate_random_algebra, in_span, is_derivation, lie_bracket,
    matrix_rank, nullspace, GenerateRequire,
};
use evoalg::structural::{infer_zero_pattern, Rule};
use evoalg::twin::twin_partition;
use num::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn criterion(name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("acceptance: {name} PASS"),
        Err(why) => {
            println!("acceptance: {name} FAIL: {why}");
            panic!("acceptance criterion failed: {name}: {why}");
        }
    }
}

fn ensure(cond: bool, why: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why.into())
    }
}

fn q(tok: &str) -> Rational {
    evoalg::rational::parse_rational_token(tok).expect("test literal")
}

fn algebra(rows: &[&[&str]]) -> EvolutionAlgebra {
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|t| q(t)).collect())
        .collect();
    EvolutionAlgebra::new(rows).expect("test matrix")
}

fn derivation_dimension(a: &EvolutionAlgebra) -> usize {
    nullspace(&assemble_constraints(a)).dimension
}

fn members_1based(a: &EvolutionAlgebra) -> Vec<Vec<usize>> {
    twin_partition(&associated_graph(a))
        .classes
        .iter()
        .map(|c| c.members.iter().map(|&v| v + 1).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Criterion 1: worked-example reproductions with exact expected values.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1a_twin_free_three_dim() {
    criterion("1a twin-free 3-dim algebra has zero derivation space", || {
        let a = algebra(&[&["2", "1", "0"], &["-1", "0", "3"], &["0", "0", "3"]]);
        let p = twin_partition(&associated_graph(&a));
        ensure(p.is_twin_free(), "expected twin-free partition")?;
        ensure(
            derivation_dimension(&a) == 0,
            format!("expected dimension 0, got {}", derivation_dimension(&a)),
        )
    });
}

#[test]
fn criterion_1b_twin_partition_depends_on_basis() {
    criterion("1b twin partition differs across natural bases", || {
        let a = algebra(&[&["0", "1", "0"], &["0", "0", "1"], &["0", "0", "1"]]);
        ensure(
            members_1based(&a) == vec![vec![1], vec![2, 3]],
            format!("partition for first basis was {:?}", members_1based(&a)),
        )?;
        let b = algebra(&[
            &["0", "1/2", "1/2"],
            &["0", "-1", "1"],
            &["0", "-1", "1"],
        ]);
        ensure(
            members_1based(&b) == vec![vec![1, 2, 3]],
            format!("partition for second basis was {:?}", members_1based(&b)),
        )
    });
}

#[test]
fn criterion_1c_wheel_five_dim() {
    criterion("1c 5-dim wheel: twin-free, dimension 0", || {
        let a = algebra(&[
            &["1", "2", "0", "1", "-1"],
            &["-3", "0", "3", "0", "2"],
            &["0", "1", "0", "1", "-3"],
            &["1", "0", "-2", "1", "1"],
            &["-1", "1", "2", "-5", "0"],
        ]);
        let g = associated_graph(&a);
        ensure(twin_partition(&g).is_twin_free(), "expected twin-free")?;
        ensure(
            evoalg::graph::descendants(&g, &[0]).unwrap() == vec![0, 1, 3, 4],
            "first-generation descendants of vertex 1 should be {1,2,4,5}",
        )?;
        ensure(derivation_dimension(&a) == 0, "expected dimension 0")
    });
}

#[test]
fn criterion_1d_four_dim_full_certificate_coverage() {
    criterion("1d 4-dim twin-free: 16 certificates cover every cell", || {
        let a = algebra(&[
            &["1", "1", "0", "0"],
            &["0", "1", "0", "1"],
            &["1", "2", "0", "1"],
            &["1", "0", "0", "-1"],
        ]);
        let pat = infer_zero_pattern(&a);
        let count = pat.certificates().count();
        ensure(count == 16, format!("expected 16 certificates, got {count}"))?;
        for i in 0..4 {
            for j in 0..4 {
                ensure(
                    pat.is_proven_zero(i, j),
                    format!("cell ({},{}) not proven", i + 1, j + 1),
                )?;
            }
        }
        ensure(derivation_dimension(&a) == 0, "expected dimension 0")
    });
}

#[test]
fn criterion_1e_three_dim_dimension_one_exact_basis() {
    criterion("1e 3-dim algebra with dimension 1 and exact basis", || {
        let a = algebra(&[&["0", "0", "1"], &["0", "0", "-1"], &["1", "1", "0"]]);
        let space = nullspace(&assemble_constraints(&a));
        ensure(space.dimension == 1, format!("dimension {}", space.dimension))?;
        let want = vec![
            vec![q("1"), q("3"), q("0")],
            vec![q("3"), q("1"), q("0")],
            vec![q("0"), q("0"), q("2")],
        ];
        ensure(
            space.basis[0].rows() == want.as_slice(),
            format!("basis was {:?}", space.basis[0]),
        )
    });
}

#[test]
fn criterion_1f_three_dim_dimension_one_with_twin_class() {
    criterion("1f 3-dim one-class algebra: dimension 1, exact basis", || {
        let a = algebra(&[
            &["1/2", "-1/4", "0"],
            &["-2", "1", "0"],
            &["2", "1", "0"],
        ]);
        let space = nullspace(&assemble_constraints(&a));
        ensure(space.dimension == 1, format!("dimension {}", space.dimension))?;
        let want = vec![
            vec![q("1"), q("-1/2"), q("0")],
            vec![q("-2"), q("1"), q("0")],
            vec![q("0"), q("0"), q("0")],
        ];
        ensure(
            space.basis[0].rows() == want.as_slice(),
            format!("basis was {:?}", space.basis[0]),
        )
    });
}

#[test]
fn criterion_1g_four_dim_loop_split_dimension_one() {
    criterion("1g 4-dim loop-split: dimension 1, ones off the block", || {
        let a = algebra(&[
            &["1", "-1", "1", "0"],
            &["1", "1", "-1", "0"],
            &["1", "1", "-1", "0"],
            &["-1", "-1", "1", "0"],
        ]);
        let space = nullspace(&assemble_constraints(&a));
        ensure(space.dimension == 1, format!("dimension {}", space.dimension))?;
        let b = &space.basis[0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if matches!((i, j), (1, 3) | (2, 3) | (3, 1) | (3, 2)) {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                ensure(
                    b.entry(i, j) == &want,
                    format!("entry ({},{}) was {}", i + 1, j + 1, b.entry(i, j)),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_1h_five_dim_loop_split_nonsingular() {
    criterion("1h 5-dim loop-split: dimension 0 with nonsingular-split certificate", || {
        let a = algebra(&[
            &["1", "2", "3", "0", "0"],
            &["1", "1", "3", "0", "0"],
            &["2", "1", "1", "0", "0"],
            &["-2", "1", "-1", "0", "0"],
            &["1", "1", "1", "0", "0"],
        ]);
        ensure(derivation_dimension(&a) == 0, "expected dimension 0")?;
        let pat = infer_zero_pattern(&a);
        for i in 0..5 {
            for j in 0..5 {
                ensure(
                    pat.is_proven_zero(i, j),
                    format!("cell ({},{}) not proven", i + 1, j + 1),
                )?;
            }
        }
        let has_split = pat.certificates().any(|c| c.rule == Rule::LoopSplitNonsingular);
        ensure(has_split, "no LoopSplitNonsingular certificate present")
    });
}

// ---------------------------------------------------------------------------
// Criterion 2: the 23-type classification of 3-dim algebras.
//
// The arrow sets below are an independent transcription (template vertices
// i,j,k numbered 0,1,2); the classifier's own data file is not consulted.
// ---------------------------------------------------------------------------

const TYPE_ARROWS: [&[(usize, usize)]; 23] = [
    &[(0, 0), (1, 0), (2, 0)],                                                 // 1
    &[(0, 0), (1, 0), (2, 1)],                                                 // 2
    &[(0, 2), (1, 2), (2, 1)],                                                 // 3
    &[(0, 0), (1, 0), (2, 0), (2, 1)],                                         // 4
    &[(0, 0), (1, 0), (2, 0), (2, 2)],                                         // 5
    &[(0, 0), (1, 0), (2, 1), (2, 2)],                                         // 6
    &[(0, 2), (1, 2), (2, 0), (2, 1)],                                         // 7
    &[(0, 2), (1, 2), (2, 0), (2, 2)],                                         // 8
    &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)],                                 // 9
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 0)],                                 // 10
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 1)],                                 // 11
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 2)],                                 // 12
    &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)],                         // 13
    &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (2, 2)],                         // 14
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)],                         // 15
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 1), (2, 2)],                         // 16
    &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 2)],                 // 17
    &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0)],                 // 18
    &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)],                 // 19
    &[(0, 0), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2)],                 // 20
    &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)],         // 21
    &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 2)],         // 22
    &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)], // 23
];

const ZERO_TYPES: [u8; 18] = [2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 14, 15, 16, 17, 18, 20, 21, 22];

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v: i64 = rng.random_range(-9..=9);
        if v != 0 {
            break v;
        }
    };
    let den: i64 = rng.random_range(1..=4);
    rat(num, den)
}

/// Builds a random instance of the given type: template vertices are carried
/// to actual vertices by a seeded permutation and each arrow gets a random
/// nonzero weight.
fn random_instance(type_id: u8, seed: u64) -> (EvolutionAlgebra, [usize; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perm = PERMS[rng.random_range(0..6usize)];
    let mut rows = vec![vec![Rational::zero(); 3]; 3];
    for &(x, y) in TYPE_ARROWS[(type_id - 1) as usize] {
        rows[perm[x]][perm[y]] = random_nonzero(&mut rng);
    }
    (EvolutionAlgebra::new(rows).unwrap(), perm)
}

#[test]
fn criterion_2a_all_types_classify_and_check() {
    criterion("2a 23 types x 3 random instances classify and pass template check", || {
        for t in 1..=23u8 {
            for r in 0..3u64 {
                let (a, _) = random_instance(t, 2000 + 10 * (t as u64) + r);
                let m = classify(&a);
                let (id, assignment) = match &m {
                    TypeMatch::Type { id, assignment } => (*id, *assignment),
                    other => {
                        return Err(format!("type {t} instance {r} classified as {other:?}"))
                    }
                };
                ensure(id == t, format!("type {t} instance {r} matched type {id}"))?;
                let space = nullspace(&assemble_constraints(&a));
                let check = template_check(&a, id, &assignment, &space);
                ensure(
                    check.verdict,
                    format!("type {t} instance {r} violates template: {:?}", check.violation),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_2b_zero_matrix_types_have_dimension_zero() {
    criterion("2b zero-template types force dimension 0", || {
        for &t in &ZERO_TYPES {
            for r in 0..3u64 {
                let (a, _) = random_instance(t, 2000 + 10 * (t as u64) + r);
                let d = derivation_dimension(&a);
                ensure(d == 0, format!("type {t} instance {r} has dimension {d}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_2c_type7_compatible_instances_have_dimension_one() {
    criterion("2c type-7 compatibility condition gives dimension exactly 1", || {
        // Template arrows: i->k, j->k, k->i, k->j. The off-block weights must
        // satisfy w_jk w_kj^2 + w_ik w_ki^2 = 0 for a nonzero derivation.
        for (seed, perm) in [(71u64, [0usize, 1, 2]), (72, [2, 0, 1]), (73, [1, 2, 0])] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (vi, vj, vk) = (perm[0], perm[1], perm[2]);
            let w_ik = random_nonzero(&mut rng);
            let w_ki = random_nonzero(&mut rng);
            let w_kj = random_nonzero(&mut rng);
            let w_jk = -&w_ik * &w_ki * &w_ki / (&w_kj * &w_kj);
            let mut rows = vec![vec![Rational::zero(); 3]; 3];
            rows[vi][vk] = w_ik.clone();
            rows[vj][vk] = w_jk.clone();
            rows[vk][vi] = w_ki.clone();
            rows[vk][vj] = w_kj.clone();
            let a = EvolutionAlgebra::new(rows).unwrap();

            match classify(&a) {
                TypeMatch::Type { id: 7, .. } => {}
                other => return Err(format!("seed {seed}: classified as {other:?}")),
            }
            let space = nullspace(&assemble_constraints(&a));
            ensure(
                space.dimension == 1,
                format!("seed {seed}: dimension {}", space.dimension),
            )?;
            let b = &space.basis[0];
            let d_ii = b.entry(vi, vi).clone();
            let three = rat(3, 1);
            let expect = |r: usize, c: usize| -> Rational {
                if (r, c) == (vi, vi) || (r, c) == (vj, vj) {
                    d_ii.clone()
                } else if (r, c) == (vi, vj) {
                    &three * &w_kj / &w_ki * &d_ii
                } else if (r, c) == (vj, vi) {
                    &three * &w_ki / &w_kj * &d_ii
                } else if (r, c) == (vk, vk) {
                    rat(2, 1) * &d_ii
                } else {
                    Rational::zero()
                }
            };
            for r in 0..3 {
                for c in 0..3 {
                    ensure(
                        b.entry(r, c) == &expect(r, c),
                        format!(
                            "seed {seed}: entry ({},{}) was {}, want {}",
                            r + 1,
                            c + 1,
                            b.entry(r, c),
                            expect(r, c)
                        ),
                    )?;
                }
            }
            let assignment = Assignment { i: vi, j: vj, k: vk };
            let check = template_check(&a, 7, &assignment, &space);
            ensure(check.verdict, format!("seed {seed}: template check failed"))?;
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// Criterion 3: randomized cross-validation of the structural rules against
// the exact solver, on a fixed-seed corpus.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_randomized_cross_validation() {
    criterion("3 randomized corpus: rules vs solver, Leibniz, blocks, closure, rank", || {
        let probabilities = [(1u32, 4u32), (1, 2), (2, 3), (3, 4)];
        let mut corpus = Vec::new();
        for s in 0..200u64 {
            let n = 2 + (s % 5) as usize;
            let (pn, pd) = probabilities[((s / 5) % 4) as usize];
            let a = generate_random_algebra(
                n,
                (pn, pd),
                1000 + s,
                GenerateRequire { non_degenerate: true, connected: false, twin_free: false },
            )
            .map_err(|e| format!("seed {}: {e}", 1000 + s))?;
            corpus.push(a);
        }
        for s in 0..50u64 {
            let n = 2 + (s % 5) as usize;
            let a = generate_random_algebra(
                n,
                (1, 2),
                5000 + s,
                GenerateRequire { non_degenerate: true, connected: false, twin_free: true },
            )
            .map_err(|e| format!("seed {}: {e}", 5000 + s))?;
            corpus.push(a);
        }

        for (idx, a) in corpus.iter().enumerate() {
            let n = a.dimension();
            let g = associated_graph(a);
            let p = twin_partition(&g);
            let pat = infer_zero_pattern(a);
            let cs = assemble_constraints(a);
            let space = nullspace(&cs);

            // (a) structural soundness: every proven-zero cell vanishes on the
            // whole solver basis.
            for c in pat.certificates() {
                for b in &space.basis {
                    ensure(
                        b.entry(c.row, c.col).is_zero(),
                        format!(
                            "instance {idx}: cell ({},{}) proven by {:?} but basis nonzero",
                            c.row + 1,
                            c.col + 1,
                            c.rule
                        ),
                    )?;
                }
            }

            // (b) every basis element satisfies the Leibniz identity.
            for b in &space.basis {
                let check = is_derivation(a, b).map_err(|e| format!("instance {idx}: {e}"))?;
                ensure(
                    check.holds,
                    format!("instance {idx}: basis element fails Leibniz: {:?}", check.first_residual),
                )?;
            }

            // (c) block structure: derivations vanish across twin classes.
            for b in &space.basis {
                for i in 0..n {
                    for j in 0..n {
                        if p.class_of(i) != p.class_of(j) {
                            ensure(
                                b.entry(i, j).is_zero(),
                                format!("instance {idx}: cross-class cell ({},{}) nonzero", i + 1, j + 1),
                            )?;
                        }
                    }
                }
            }

            // (d) twin-free forces a trivial derivation space.
            if p.is_twin_free() {
                ensure(
                    space.dimension == 0,
                    format!("instance {idx}: twin-free but dimension {}", space.dimension),
                )?;
            }

            // (e) Lie closure: brackets of basis pairs stay in the span.
            for x in &space.basis {
                for y in &space.basis {
                    let br = lie_bracket(x, y).map_err(|e| format!("instance {idx}: {e}"))?;
                    ensure(
                        in_span(&space.basis, &br),
                        format!("instance {idx}: bracket escapes the span"),
                    )?;
                }
            }

            // (f) rank-nullity against an independent forward-elimination rank.
            let coeff_rows: Vec<Vec<Rational>> =
                cs.rows.iter().map(|r| r.coefficients.clone()).collect();
            let rank = matrix_rank(&coeff_rows);
            ensure(
                space.dimension == n * n - rank,
                format!(
                    "instance {idx}: dimension {} but n^2 - rank = {}",
                    space.dimension,
                    n * n - rank
                ),
            )?;
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// Criterion 4: byte-identical reports for identical inputs.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_deterministic_reports() {
    criterion("4 repeated analysis emits byte-identical reports", || {
        let mut algebras = vec![
            algebra(&[&["2", "1", "0"], &["-1", "0", "3"], &["0", "0", "3"]]),
            algebra(&[&["0", "0", "1"], &["0", "0", "-1"], &["1", "1", "0"]]),
            algebra(&[
                &["1", "-1", "1", "0"],
                &["1", "1", "-1", "0"],
                &["1", "1", "-1", "0"],
                &["-1", "-1", "1", "0"],
            ]),
        ];
        for s in 0..5u64 {
            algebras.push(
                generate_random_algebra(
                    4,
                    (1, 2),
                    9000 + s,
                    GenerateRequire { non_degenerate: true, connected: false, twin_free: false },
                )
                .map_err(|e| e.to_string())?,
            );
        }
        for (idx, a) in algebras.iter().enumerate() {
            let first = emit_report(&analyze(a), true);
            let second = emit_report(&analyze(a), true);
            ensure(
                first == second,
                format!("algebra {idx}: repeated reports differ"),
            )?;
            ensure(
                consistency(&analyze(a)),
                format!("algebra {idx}: structural zeros contradict the solver"),
            )?;
        }
        Ok(())
    });
}
