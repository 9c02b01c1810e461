//! Structural zero-certificates.
//!
//! Given only the zero pattern and values of the structure matrix, a family
//! of twelve rules proves that certain cells of every derivation matrix must
//! vanish. Each proven cell carries a replayable certificate naming the rule
//! and the vertices, cells, and scalars it consumed, so a verdict can be
//! audited without rerunning the whole engine.
//!
//! The engine is a monotone fixpoint: a cell moves from `Unknown` to
//! `ProvenZero` at most once and keeps the certificate of the first rule that
//! fired. Set-based rules run first, then the two determinant rules, then
//! the propagation rules loop until nothing changes:
//!
//! 1. TwinSeparation, SoleTarget, RestrictedIntersection, SingletonLoop
//! 2. GramDeterminant, Determinant2x2
//! 3. LoopSplitNonsingular, LoopSplitDiagonal, ContainedDescendants,
//!    LoopFreeClassPropagation, TwinSymmetry, DiagonalFromOffdiagonal
//!
//! Rules whose justification needs every generator non-nilpotent are skipped
//! entirely for degenerate algebras; the remaining rules are sound without
//! that hypothesis.

use crate::algebra::EvolutionAlgebra;
use crate::graph::{associated_graph, forward_walk, DirectedGraph};
use crate::linalg::determinant;
use crate::rational::Rational;
use crate::twin::{twin_partition, TwinPartition};
use num::Zero;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    TwinSeparation,
    Determinant2x2,
    GramDeterminant,
    SingletonLoop,
    LoopSplitDiagonal,
    LoopSplitNonsingular,
    SoleTarget,
    RestrictedIntersection,
    ContainedDescendants,
    LoopFreeClassPropagation,
    TwinSymmetry,
    DiagonalFromOffdiagonal,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::TwinSeparation => "TwinSeparation",
            Rule::Determinant2x2 => "Determinant2x2",
            Rule::GramDeterminant => "GramDeterminant",
            Rule::SingletonLoop => "SingletonLoop",
            Rule::LoopSplitDiagonal => "LoopSplitDiagonal",
            Rule::LoopSplitNonsingular => "LoopSplitNonsingular",
            Rule::SoleTarget => "SoleTarget",
            Rule::RestrictedIntersection => "RestrictedIntersection",
            Rule::ContainedDescendants => "ContainedDescendants",
            Rule::LoopFreeClassPropagation => "LoopFreeClassPropagation",
            Rule::TwinSymmetry => "TwinSymmetry",
            Rule::DiagonalFromOffdiagonal => "DiagonalFromOffdiagonal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Unknown,
    ProvenZero,
}

/// One named ingredient of a certificate. Indices are zero-based here and
/// shifted to one-based only at the reporting boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub label: &'static str,
    pub value: WitnessValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessValue {
    Index(usize),
    Indices(Vec<usize>),
    Cell(usize, usize),
    Scalar(Rational),
}

impl Witness {
    fn index(label: &'static str, v: usize) -> Self {
        Witness { label, value: WitnessValue::Index(v) }
    }
    fn indices(label: &'static str, v: Vec<usize>) -> Self {
        Witness { label, value: WitnessValue::Indices(v) }
    }
    fn cell(label: &'static str, r: usize, c: usize) -> Self {
        Witness { label, value: WitnessValue::Cell(r, c) }
    }
    fn scalar(label: &'static str, v: Rational) -> Self {
        Witness { label, value: WitnessValue::Scalar(v) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCertificate {
    pub row: usize,
    pub col: usize,
    pub rule: Rule,
    pub witnesses: Vec<Witness>,
}

/// The per-cell verdicts for one algebra, with certificates in the order the
/// engine proved them.
#[derive(Debug, Clone)]
pub struct ZeroPattern {
    n: usize,
    cells: Vec<Option<ZeroCertificate>>,
    order: Vec<(usize, usize)>,
}

impl ZeroPattern {
    fn new(n: usize) -> Self {
        Self { n, cells: vec![None; n * n], order: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn status(&self, row: usize, col: usize) -> CellStatus {
        if self.cells[row * self.n + col].is_some() {
            CellStatus::ProvenZero
        } else {
            CellStatus::Unknown
        }
    }

    pub fn is_proven_zero(&self, row: usize, col: usize) -> bool {
        self.status(row, col) == CellStatus::ProvenZero
    }

    pub fn certificate(&self, row: usize, col: usize) -> Option<&ZeroCertificate> {
        self.cells[row * self.n + col].as_ref()
    }

    /// Certificates in row-major cell order.
    pub fn certificates(&self) -> impl Iterator<Item = &ZeroCertificate> {
        self.cells.iter().flatten()
    }

    /// Certificates in the order the engine proved them.
    pub fn firing_order(&self) -> impl Iterator<Item = &ZeroCertificate> + '_ {
        self.order.iter().map(|&(r, c)| self.certificate(r, c).unwrap())
    }

    pub fn proven_count(&self) -> usize {
        self.order.len()
    }

    fn prove(&mut self, row: usize, col: usize, rule: Rule, witnesses: Vec<Witness>) -> bool {
        let slot = &mut self.cells[row * self.n + col];
        if slot.is_some() {
            return false;
        }
        *slot = Some(ZeroCertificate { row, col, rule, witnesses });
        self.order.push((row, col));
        true
    }
}

struct Ctx<'a> {
    a: &'a EvolutionAlgebra,
    g: DirectedGraph,
    p: TwinPartition,
    non_degenerate: bool,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.a.dimension()
    }

    fn omega(&self, i: usize, j: usize) -> &Rational {
        self.a.entry(i, j)
    }

    fn same_class(&self, i: usize, j: usize) -> bool {
        self.p.class_of(i) == self.p.class_of(j)
    }
}

/// Runs the rule engine to its least fixpoint.
pub fn infer_zero_pattern(a: &EvolutionAlgebra) -> ZeroPattern {
    let g = associated_graph(a);
    let p = twin_partition(&g);
    let non_degenerate = (0..g.order()).all(|v| !g.is_sink(v));
    let ctx = Ctx { a, g, p, non_degenerate };
    let mut pat = ZeroPattern::new(a.dimension());

    twin_separation(&ctx, &mut pat);
    sole_target(&ctx, &mut pat);
    restricted_intersection(&ctx, &mut pat);
    singleton_loop(&ctx, &mut pat);

    gram_determinant(&ctx, &mut pat);
    determinant_2x2(&ctx, &mut pat);

    loop {
        let mut changed = 0;
        changed += loop_split_nonsingular(&ctx, &mut pat);
        changed += loop_split_diagonal(&ctx, &mut pat);
        changed += contained_descendants(&ctx, &mut pat);
        changed += loop_free_class_propagation(&ctx, &mut pat);
        changed += twin_symmetry(&ctx, &mut pat);
        changed += diagonal_from_offdiagonal(&ctx, &mut pat);
        if changed == 0 {
            return pat;
        }
    }
}

// --- set rules -------------------------------------------------------------

/// Cross-class cells. For d_ij: a component k with w_jk != 0 = w_ik makes the
/// (i,j) product condition read w_jk d_ij = 0. If instead the column's
/// neighborhood is contained in the row's, a reverse separator first kills
/// d_ji and any shared component transfers the zero to d_ij.
fn twin_separation(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    let n = ctx.n();
    let mut proven = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j || ctx.same_class(i, j) {
                continue;
            }
            let direct = (0..n).find(|&k| ctx.g.has_arrow(j, k) && !ctx.g.has_arrow(i, k));
            if let Some(k) = direct {
                proven += pat.prove(i, j, Rule::TwinSeparation, vec![
                    Witness::index("separator", k),
                ]) as usize;
                continue;
            }
            // No direct separator: the column's neighborhood sits inside the
            // row's. A reverse separator exists because the classes differ.
            let shared = match ctx.g.out_neighbors(j).first() {
                Some(&m) => m,
                None => continue, // column vertex is a sink; d_ij is unconstrained here
            };
            let reverse = (0..n)
                .find(|&k| ctx.g.has_arrow(i, k) && !ctx.g.has_arrow(j, k))
                .expect("distinct classes with contained neighborhood");
            proven += pat.prove(i, j, Rule::TwinSeparation, vec![
                Witness::index("separator", reverse),
                Witness::index("shared", shared),
            ]) as usize;
        }
    }
    proven
}

/// A class whose members all point at a single common target inside the
/// class: the target's row, column and every member diagonal vanish.
fn sole_target(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    let mut proven = 0;
    for class in &ctx.p.classes {
        let [t] = class.shared_descendants[..] else { continue };
        if !class.members.contains(&t) {
            continue;
        }
        let w = vec![
            Witness::indices("class", class.members.clone()),
            Witness::index("target", t),
        ];
        proven += pat.prove(t, t, Rule::SoleTarget, w.clone()) as usize;
        for &j in &class.members {
            if j == t {
                continue;
            }
            proven += pat.prove(t, j, Rule::SoleTarget, w.clone()) as usize;
            proven += pat.prove(j, t, Rule::SoleTarget, w.clone()) as usize;
            proven += pat.prove(j, j, Rule::SoleTarget, w.clone()) as usize;
        }
    }
    proven
}

/// Some vertex sees exactly one member of the class: that member separates
/// from every other member in both directions.
fn restricted_intersection(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let n = ctx.n();
    let mut proven = 0;
    for class in &ctx.p.classes {
        if class.members.len() < 2 {
            continue;
        }
        for k in 0..n {
            let inside: Vec<usize> = class
                .members
                .iter()
                .copied()
                .filter(|&m| ctx.g.has_arrow(k, m))
                .collect();
            let [j] = inside[..] else { continue };
            let w = vec![
                Witness::indices("class", class.members.clone()),
                Witness::index("via", k),
                Witness::index("target", j),
            ];
            for &l in &class.members {
                if l == j {
                    continue;
                }
                proven += pat.prove(j, l, Rule::RestrictedIntersection, w.clone()) as usize;
                proven += pat.prove(l, j, Rule::RestrictedIntersection, w.clone()) as usize;
            }
        }
    }
    proven
}

/// A looped vertex alone in its class: once every incoming off-diagonal cell
/// of its column is proven, the loop weight forces the diagonal.
fn singleton_loop(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let mut proven = 0;
    for class in &ctx.p.classes {
        let [v] = class.members[..] else { continue };
        if !ctx.g.has_loop(v) {
            continue;
        }
        let premise_ok = ctx
            .g
            .out_neighbors(v)
            .iter()
            .all(|&k| k == v || pat.is_proven_zero(k, v));
        if !premise_ok {
            continue;
        }
        proven += pat.prove(v, v, Rule::SingletonLoop, vec![
            Witness::index("vertex", v),
            Witness::scalar("loop_weight", ctx.omega(v, v).clone()),
        ]) as usize;
    }
    proven
}

// --- determinant rules -----------------------------------------------------

fn gram_pair_determinant(ctx: &Ctx, i: usize, j: usize) -> Rational {
    let n = ctx.n();
    let dot = |x: usize, y: usize| -> Rational {
        (0..n).map(|k| ctx.omega(x, k) * ctx.omega(y, k)).sum()
    };
    &dot(i, i) * &dot(j, j) - &dot(i, j) * &dot(i, j)
}

/// Independent structure rows make the pair of off-diagonal cells vanish;
/// independence is detected by the 2x2 Gram determinant of the rows.
fn gram_determinant(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    let n = ctx.n();
    if n < 3 {
        return 0;
    }
    let mut proven = 0;
    for i in 0..n {
        for j in i + 1..n {
            if pat.is_proven_zero(i, j) && pat.is_proven_zero(j, i) {
                continue;
            }
            let det = gram_pair_determinant(ctx, i, j);
            if det.is_zero() {
                continue;
            }
            let w = vec![
                Witness::indices("rows", vec![i, j]),
                Witness::scalar("gram_determinant", det),
            ];
            proven += pat.prove(i, j, Rule::GramDeterminant, w.clone()) as usize;
            proven += pat.prove(j, i, Rule::GramDeterminant, w) as usize;
        }
    }
    proven
}

fn pair_minor(ctx: &Ctx, i: usize, j: usize, k: usize, l: usize) -> Rational {
    ctx.omega(i, k) * ctx.omega(j, l) - ctx.omega(j, k) * ctx.omega(i, l)
}

/// Two product-condition components taken inside one row's neighborhood form
/// an invertible 2x2 system in (d_ij, d_ji).
fn determinant_2x2(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    let mut proven = 0;
    let n = ctx.n();
    for i in 0..n {
        'pair: for j in i + 1..n {
            if pat.is_proven_zero(i, j) && pat.is_proven_zero(j, i) {
                continue;
            }
            for base in [i, j] {
                let nb = ctx.g.out_neighbors(base);
                for (a, &k) in nb.iter().enumerate() {
                    for &l in &nb[a + 1..] {
                        let det = pair_minor(ctx, i, j, k, l);
                        if det.is_zero() {
                            continue;
                        }
                        let w = vec![
                            Witness::index("base", base),
                            Witness::indices("components", vec![k, l]),
                            Witness::scalar("determinant", det),
                        ];
                        proven += pat.prove(i, j, Rule::Determinant2x2, w.clone()) as usize;
                        proven += pat.prove(j, i, Rule::Determinant2x2, w) as usize;
                        continue 'pair;
                    }
                }
            }
        }
    }
    proven
}

// --- propagation rules ------------------------------------------------------

fn loop_split_premise(pat: &ZeroPattern, with_loop: &[usize]) -> bool {
    with_loop.iter().all(|&x| {
        with_loop.iter().all(|&y| x == y || pat.is_proven_zero(x, y))
    })
}

fn loop_submatrix(ctx: &Ctx, with_loop: &[usize]) -> Vec<Vec<Rational>> {
    with_loop
        .iter()
        .map(|&x| with_loop.iter().map(|&y| ctx.omega(x, y).clone()).collect())
        .collect()
}

/// Once the looped part of a class separates internally and its weight block
/// is nonsingular, every cell of the class touching a looped member vanishes.
fn loop_split_nonsingular(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let mut proven = 0;
    for class in &ctx.p.classes {
        if class.with_loop.is_empty() || !loop_split_premise(pat, &class.with_loop) {
            continue;
        }
        let det = determinant(&loop_submatrix(ctx, &class.with_loop));
        if det.is_zero() {
            continue;
        }
        let w = vec![
            Witness::indices("class", class.members.clone()),
            Witness::indices("with_loop", class.with_loop.clone()),
            Witness::scalar("determinant", det),
        ];
        for &x in &class.members {
            for &y in &class.members {
                if class.with_loop.contains(&x) || class.with_loop.contains(&y) {
                    proven += pat.prove(x, y, Rule::LoopSplitNonsingular, w.clone()) as usize;
                }
            }
        }
    }
    proven
}

/// Same premise without the determinant: the diagonal of the whole class
/// vanishes.
fn loop_split_diagonal(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let mut proven = 0;
    for class in &ctx.p.classes {
        if class.with_loop.is_empty() || !loop_split_premise(pat, &class.with_loop) {
            continue;
        }
        let w = vec![
            Witness::indices("class", class.members.clone()),
            Witness::indices("with_loop", class.with_loop.clone()),
        ];
        for &x in &class.members {
            proven += pat.prove(x, x, Rule::LoopSplitDiagonal, w.clone()) as usize;
        }
    }
    proven
}

/// A vertex outside the class whose descendants stay inside the class (plus
/// itself) pins down the two class members that are shared descendants.
fn contained_descendants(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let mut proven = 0;
    for class in &ctx.p.classes {
        let d = &class.shared_descendants;
        let inside: Vec<usize> =
            d.iter().copied().filter(|v| class.members.contains(v)).collect();
        let [i, j] = inside[..] else { continue };
        for &k in d {
            if class.members.contains(&k) {
                continue;
            }
            let contained = ctx
                .g
                .out_neighbors(k)
                .iter()
                .all(|&h| h == k || class.members.contains(&h));
            if !contained {
                continue;
            }
            let incoming_ok = ctx
                .g
                .out_neighbors(k)
                .iter()
                .chain(d.iter())
                .all(|&h| h == k || pat.is_proven_zero(h, k));
            let outgoing_ok = d.iter().all(|&s| s == k || pat.is_proven_zero(k, s));
            let kk_ok = ctx.g.has_loop(k) || pat.is_proven_zero(k, k);
            let cross_ok = d
                .iter()
                .filter(|&&h| !class.members.contains(&h))
                .all(|&h| pat.is_proven_zero(h, i) && pat.is_proven_zero(h, j));
            if !incoming_ok || !outgoing_ok || !kk_ok || !cross_ok {
                continue;
            }
            let w = vec![
                Witness::indices("class", class.members.clone()),
                Witness::indices("inside", vec![i, j]),
                Witness::index("via", k),
            ];
            if ctx.g.has_loop(k) {
                proven += pat.prove(k, k, Rule::ContainedDescendants, w.clone()) as usize;
            }
            proven += pat.prove(i, i, Rule::ContainedDescendants, w.clone()) as usize;
            proven += pat.prove(j, j, Rule::ContainedDescendants, w.clone()) as usize;
            proven += pat.prove(j, i, Rule::ContainedDescendants, w.clone()) as usize;
            proven += pat.prove(i, j, Rule::ContainedDescendants, w.clone()) as usize;
        }
    }
    proven
}

/// A loop-free class whose shared descendants lie in pairwise distinct
/// classes inherits one proven descendant diagonal onto its own diagonal.
fn loop_free_class_propagation(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let mut proven = 0;
    for class in &ctx.p.classes {
        if !class.with_loop.is_empty() {
            continue;
        }
        let d = &class.shared_descendants;
        let pairwise_separated = d
            .iter()
            .all(|&x| d.iter().all(|&y| x == y || !ctx.same_class(x, y)));
        if d.is_empty() || !pairwise_separated {
            continue;
        }
        let cross_ok = d
            .iter()
            .all(|&x| d.iter().all(|&y| x == y || pat.is_proven_zero(x, y)));
        if !cross_ok {
            continue;
        }
        let Some(&j) = d.iter().find(|&&j| pat.is_proven_zero(j, j)) else { continue };
        let w = vec![
            Witness::indices("class", class.members.clone()),
            Witness::index("descendant", j),
        ];
        for &x in &class.members {
            proven += pat.prove(x, x, Rule::LoopFreeClassPropagation, w.clone()) as usize;
        }
    }
    proven
}

/// A proven cell between twins with a nonempty shared neighborhood reflects
/// to the transposed cell.
fn twin_symmetry(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    let n = ctx.n();
    let mut proven = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j
                || !pat.is_proven_zero(i, j)
                || pat.is_proven_zero(j, i)
                || !ctx.same_class(i, j)
            {
                continue;
            }
            let Some(&k) = ctx.g.out_neighbors(i).first() else { continue };
            proven += pat.prove(j, i, Rule::TwinSymmetry, vec![
                Witness::cell("source", i, j),
                Witness::index("shared", k),
            ]) as usize;
        }
    }
    proven
}

/// With every off-diagonal cell proven, the diagonal doubles along arrows, so
/// the forward walk from a vertex into its inevitable cycle forces zero.
fn diagonal_from_offdiagonal(ctx: &Ctx, pat: &mut ZeroPattern) -> usize {
    if !ctx.non_degenerate {
        return 0;
    }
    let n = ctx.n();
    let all_off = (0..n)
        .all(|i| (0..n).all(|j| i == j || pat.is_proven_zero(i, j)));
    if !all_off {
        return 0;
    }
    let mut proven = 0;
    for i in 0..n {
        if pat.is_proven_zero(i, i) {
            continue;
        }
        let (walk, _) = forward_walk(&ctx.g, i);
        proven += pat.prove(i, i, Rule::DiagonalFromOffdiagonal, vec![
            Witness::indices("walk", walk),
        ]) as usize;
    }
    proven
}

// --- certificate replay ------------------------------------------------------

fn witness_index(cert: &ZeroCertificate, label: &str) -> Option<usize> {
    cert.witnesses.iter().find_map(|w| match (&w.value, w.label == label) {
        (WitnessValue::Index(v), true) => Some(*v),
        _ => None,
    })
}

fn witness_indices<'a>(cert: &'a ZeroCertificate, label: &str) -> Option<&'a [usize]> {
    cert.witnesses.iter().find_map(|w| match (&w.value, w.label == label) {
        (WitnessValue::Indices(v), true) => Some(v.as_slice()),
        _ => None,
    })
}

fn witness_index_pair(cert: &ZeroCertificate, label: &str) -> Option<[usize; 2]> {
    witness_indices(cert, label).and_then(|s| <[usize; 2]>::try_from(s).ok())
}

fn witness_cell(cert: &ZeroCertificate, label: &str) -> Option<(usize, usize)> {
    cert.witnesses.iter().find_map(|w| match (&w.value, w.label == label) {
        (WitnessValue::Cell(r, c), true) => Some((*r, *c)),
        _ => None,
    })
}

fn witness_scalar<'a>(cert: &'a ZeroCertificate, label: &str) -> Option<&'a Rational> {
    cert.witnesses.iter().find_map(|w| match (&w.value, w.label == label) {
        (WitnessValue::Scalar(v), true) => Some(v),
        _ => None,
    })
}

/// Checks one certificate against the algebra and the set of cells already
/// proven before it fired. Used to audit an engine run cell by cell.
pub fn replay_certificate(
    cert: &ZeroCertificate,
    a: &EvolutionAlgebra,
    proven_before: &HashSet<(usize, usize)>,
) -> bool {
    let g = associated_graph(a);
    let p = twin_partition(&g);
    let non_degenerate = (0..g.order()).all(|v| !g.is_sink(v));
    let ctx = Ctx { a, g, p, non_degenerate };
    let n = ctx.n();
    let (row, col) = (cert.row, cert.col);
    if row >= n || col >= n {
        return false;
    }
    let proven = |r: usize, c: usize| proven_before.contains(&(r, c));
    let class_is = |members: &[usize]| -> bool {
        members
            .first()
            .map(|&m| ctx.p.classes[ctx.p.class_of(m)].members == members)
            .unwrap_or(false)
    };

    match cert.rule {
        Rule::TwinSeparation => {
            if row == col || ctx.same_class(row, col) {
                return false;
            }
            let Some(sep) = witness_index(cert, "separator") else { return false };
            match witness_index(cert, "shared") {
                None => ctx.g.has_arrow(col, sep) && !ctx.g.has_arrow(row, sep),
                Some(shared) => {
                    ctx.g.has_arrow(row, sep)
                        && !ctx.g.has_arrow(col, sep)
                        && ctx.g.has_arrow(row, shared)
                        && ctx.g.has_arrow(col, shared)
                }
            }
        }
        Rule::Determinant2x2 => {
            let Some(base) = witness_index(cert, "base") else { return false };
            let Some([k, l]) = witness_index_pair(cert, "components") else { return false };
            let Some(det) = witness_scalar(cert, "determinant") else { return false };
            let (i, j) = (row.min(col), row.max(col));
            i != j
                && (base == i || base == j)
                && ctx.g.has_arrow(base, k)
                && ctx.g.has_arrow(base, l)
                && k < l
                && !det.is_zero()
                && &pair_minor(&ctx, i, j, k, l) == det
        }
        Rule::GramDeterminant => {
            let Some([i, j]) = witness_index_pair(cert, "rows") else { return false };
            let Some(det) = witness_scalar(cert, "gram_determinant") else { return false };
            n >= 3
                && i < j
                && ((row, col) == (i, j) || (row, col) == (j, i))
                && !det.is_zero()
                && &gram_pair_determinant(&ctx, i, j) == det
        }
        Rule::SingletonLoop => {
            let Some(v) = witness_index(cert, "vertex") else { return false };
            let Some(weight) = witness_scalar(cert, "loop_weight") else { return false };
            non_degenerate
                && (row, col) == (v, v)
                && ctx.p.classes[ctx.p.class_of(v)].members == [v]
                && ctx.g.has_loop(v)
                && ctx.omega(v, v) == weight
                && ctx.g.out_neighbors(v).iter().all(|&k| k == v || proven(k, v))
        }
        Rule::LoopSplitNonsingular | Rule::LoopSplitDiagonal => {
            let Some(members) = witness_indices(cert, "class") else { return false };
            let Some(wl) = witness_indices(cert, "with_loop") else { return false };
            if !non_degenerate || !class_is(members) {
                return false;
            }
            let class = &ctx.p.classes[ctx.p.class_of(members[0])];
            if class.with_loop != wl || wl.is_empty() {
                return false;
            }
            let premise =
                wl.iter().all(|&x| wl.iter().all(|&y| x == y || proven(x, y)));
            if !premise {
                return false;
            }
            if cert.rule == Rule::LoopSplitDiagonal {
                return row == col && members.contains(&row);
            }
            let Some(det) = witness_scalar(cert, "determinant") else { return false };
            !det.is_zero()
                && &determinant(&loop_submatrix(&ctx, wl)) == det
                && members.contains(&row)
                && members.contains(&col)
                && (wl.contains(&row) || wl.contains(&col))
        }
        Rule::SoleTarget => {
            let Some(members) = witness_indices(cert, "class") else { return false };
            let Some(t) = witness_index(cert, "target") else { return false };
            if !class_is(members) || !members.contains(&t) {
                return false;
            }
            let class = &ctx.p.classes[ctx.p.class_of(t)];
            class.shared_descendants == [t]
                && ((row, col) == (t, t)
                    || (row == t && members.contains(&col))
                    || (col == t && members.contains(&row))
                    || (row == col && members.contains(&row)))
        }
        Rule::RestrictedIntersection => {
            let Some(members) = witness_indices(cert, "class") else { return false };
            let Some(k) = witness_index(cert, "via") else { return false };
            let Some(j) = witness_index(cert, "target") else { return false };
            if !non_degenerate || !class_is(members) || k >= n {
                return false;
            }
            let inside: Vec<usize> =
                members.iter().copied().filter(|&m| ctx.g.has_arrow(k, m)).collect();
            inside == [j]
                && ((row == j && col != j && members.contains(&col))
                    || (col == j && row != j && members.contains(&row)))
        }
        Rule::ContainedDescendants => {
            let Some(members) = witness_indices(cert, "class") else { return false };
            let Some([i, j]) = witness_index_pair(cert, "inside") else { return false };
            let Some(k) = witness_index(cert, "via") else { return false };
            if !non_degenerate || !class_is(members) {
                return false;
            }
            let class = &ctx.p.classes[ctx.p.class_of(members[0])];
            let d = &class.shared_descendants;
            let inside: Vec<usize> =
                d.iter().copied().filter(|v| members.contains(v)).collect();
            if inside != [i, j] || !d.contains(&k) || members.contains(&k) {
                return false;
            }
            let contained =
                ctx.g.out_neighbors(k).iter().all(|&h| h == k || members.contains(&h));
            let premises = contained
                && ctx
                    .g
                    .out_neighbors(k)
                    .iter()
                    .chain(d.iter())
                    .all(|&h| h == k || proven(h, k))
                && d.iter().all(|&s| s == k || proven(k, s))
                && (ctx.g.has_loop(k) || proven(k, k))
                && d.iter()
                    .filter(|&&h| !members.contains(&h))
                    .all(|&h| proven(h, i) && proven(h, j));
            premises
                && [(k, k), (i, i), (j, j), (j, i), (i, j)].contains(&(row, col))
                && ((row, col) != (k, k) || ctx.g.has_loop(k))
        }
        Rule::LoopFreeClassPropagation => {
            let Some(members) = witness_indices(cert, "class") else { return false };
            let Some(j) = witness_index(cert, "descendant") else { return false };
            if !non_degenerate || !class_is(members) {
                return false;
            }
            let class = &ctx.p.classes[ctx.p.class_of(members[0])];
            let d = &class.shared_descendants;
            class.with_loop.is_empty()
                && d.contains(&j)
                && proven(j, j)
                && d.iter().all(|&x| d.iter().all(|&y| x == y || !ctx.same_class(x, y)))
                && d.iter().all(|&x| d.iter().all(|&y| x == y || proven(x, y)))
                && row == col
                && members.contains(&row)
        }
        Rule::TwinSymmetry => {
            let Some((i, j)) = witness_cell(cert, "source") else { return false };
            let Some(k) = witness_index(cert, "shared") else { return false };
            (row, col) == (j, i)
                && i != j
                && ctx.same_class(i, j)
                && proven(i, j)
                && ctx.g.has_arrow(i, k)
                && ctx.g.has_arrow(j, k)
        }
        Rule::DiagonalFromOffdiagonal => {
            let Some(walk) = witness_indices(cert, "walk") else { return false };
            if !non_degenerate
                || row != col
                || walk.first() != Some(&row)
                || walk.len() < 2
                || walk.iter().any(|&v| v >= n)
            {
                return false;
            }
            let all_off =
                (0..n).all(|i| (0..n).all(|j| i == j || proven(i, j)));
            let arrows_ok =
                walk.windows(2).all(|w| ctx.g.has_arrow(w[0], w[1]));
            let last = *walk.last().unwrap();
            all_off && arrows_ok && walk[..walk.len() - 1].contains(&last)
        }
    }
}
