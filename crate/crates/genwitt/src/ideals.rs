//! Finite-window engines: ideal closure, simplicity witnesses, and the
//! ad-diagonalizability scan.
//!
//! Everything here works inside explicit index windows. Closure runs
//! never truncate vectors: a bracket product is inserted only when its
//! whole support fits the result window, otherwise it is discarded, so
//! every row of a closure's row space is a genuine ideal member.

use std::fmt;


use crate::algebra::{AlgebraConfig, BasisElement, Element};
use crate::coeff::Coeff;
use crate::rational::Rational;
use crate::error::Error;
use crate::structure::lp;

/// Symmetric index window: a basis element is inside iff every upper
/// index satisfies `|a_r| ≤ upper` and every lower index `|i_r| ≤ lower`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IndexBox {
    pub upper: i64,
    pub lower: i64,
}

impl IndexBox {
    pub fn new(upper: i64, lower: i64) -> Self {
        assert!(upper >= 0 && lower >= 0, "box bounds must be non-negative");
        Self { upper, lower }
    }

    pub fn contains(&self, b: &BasisElement) -> bool {
        b.upper.iter().all(|a| a.abs() <= self.upper)
            && b.lower.iter().all(|i| i.abs() <= self.lower)
    }

    pub fn contains_support(&self, x: &Element) -> bool {
        x.support().all(|b| self.contains(b))
    }

    /// All basis elements inside the box, lex-descending.
    pub fn basis_desc(&self, n: usize) -> Vec<BasisElement> {
        let mut out = Vec::new();
        let uppers = tuples_desc(self.upper, n);
        let lowers = tuples_desc(self.lower, n);
        for a in &uppers {
            for i in &lowers {
                for k in (1..=n).rev() {
                    out.push(BasisElement::new(a.clone(), i.clone(), k));
                }
            }
        }
        out
    }
}

impl fmt::Display for IndexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Box({},{})", self.upper, self.lower)
    }
}

/// All length-`n` integer tuples with entries in `[-bound, bound]`,
/// lex-descending.
fn tuples_desc(bound: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for prefix in &out {
            for v in (-bound..=bound).rev() {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Finds `M = (0|j)_t` with strictly separated positive lower indices
/// `j_1 > … > j_n` such that `[M, l]` is nonzero and every lower index of
/// every term is positive.
///
/// The direction `t` is the first coordinate at which the lex-greatest
/// term of `l` has a nonzero upper or lower index (falling back to any
/// term, then to 1); the lower indices run through `j_r = c·K^{n−r+1}`
/// with `K = max(2, lp(l)+2)` and `c = 1, 2, …, 16`, checking the
/// required shape at each step.
pub fn lemma1_multiplier(
    cfg: &AlgebraConfig,
    l: &Element,
) -> Result<(BasisElement, Element), Error> {
    cfg.check_element(l)?;
    let (lead, _) = l.leading().ok_or(Error::ZeroElement)?;
    let n = cfg.n();

    let witness = |b: &BasisElement| (0..n).find(|&r| b.upper[r] != 0 || b.lower[r] != 0);
    let t = witness(lead)
        .or_else(|| l.support().find_map(|b| witness(b)))
        .unwrap_or(0)
        + 1;

    let k_base = 2.max(lp(l)? + 2);
    const MAX_SCALE: i64 = 16;
    for c in 1..=MAX_SCALE {
        let mut j = Vec::with_capacity(n);
        for r in 1..=n {
            let exp = (n - r + 1) as u32;
            let step = k_base
                .checked_pow(exp)
                .and_then(|p| p.checked_mul(c))
                .ok_or(Error::SearchExhausted { tried: c as usize })?;
            j.push(step);
        }
        let m = BasisElement::new(vec![0; n], j, t);
        let product = cfg.bracket(&Element::unit(m.clone()), l)?;
        if !product.is_zero()
            && product.support().all(|b| b.lower.iter().all(|&i| i >= 1))
        {
            return Ok((m, product));
        }
    }
    Err(Error::SearchExhausted { tried: MAX_SCALE as usize })
}

/// Dense index of the basis elements inside a box, order-isomorphic to
/// the lex order: digits `(a_1+A, …, a_n+A, i_1+I, …, i_n+I, k−1)` in a
/// mixed radix, most significant first.
#[derive(Clone, Debug)]
struct BoxIndexer {
    n: usize,
    bx: IndexBox,
    dim: usize,
}

impl BoxIndexer {
    fn new(bx: IndexBox, n: usize) -> Self {
        let u = (2 * bx.upper + 1) as usize;
        let l = (2 * bx.lower + 1) as usize;
        let dim = u.pow(n as u32) * l.pow(n as u32) * n;
        Self { n, bx, dim }
    }

    fn encode_parts(&self, upper: &[i64], lower: &[i64], dir: usize) -> Option<u32> {
        let u = 2 * self.bx.upper + 1;
        let l = 2 * self.bx.lower + 1;
        let mut idx: i64 = 0;
        for &a in upper {
            if a.abs() > self.bx.upper {
                return None;
            }
            idx = idx * u + (a + self.bx.upper);
        }
        for &i in lower {
            if i.abs() > self.bx.lower {
                return None;
            }
            idx = idx * l + (i + self.bx.lower);
        }
        idx = idx * self.n as i64 + (dir as i64 - 1);
        Some(idx as u32)
    }

    fn decode(&self, idx: u32) -> BasisElement {
        let mut rest = idx as i64;
        let dir = (rest % self.n as i64) as usize + 1;
        rest /= self.n as i64;
        let l = 2 * self.bx.lower + 1;
        let mut lower = vec![0i64; self.n];
        for slot in lower.iter_mut().rev() {
            *slot = rest % l - self.bx.lower;
            rest /= l;
        }
        let u = 2 * self.bx.upper + 1;
        let mut upper = vec![0i64; self.n];
        for slot in upper.iter_mut().rev() {
            *slot = rest % u - self.bx.upper;
            rest /= u;
        }
        BasisElement::new(upper, lower, dir)
    }
}

/// Sparse vector over box indices, sorted descending so the leading term
/// comes first.
type IdxVec = Vec<(u32, Coeff)>;

pub static STAT_REDUCES: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub static STAT_HITS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub static STAT_DELTAS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub static STAT_BACKSUB: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Reusable dense accumulator for eliminations: coefficients in a flat
/// slot array plus an ordered set of occupied slots.
struct Scratch {
    acc: Vec<Option<Coeff>>,
    occupied: std::collections::BTreeSet<u32>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Self { acc: vec![None; dim], occupied: std::collections::BTreeSet::new() }
    }
}

/// Puts a reduced row into primitive integer form: coefficients are
/// scaled by the common denominator and divided by their content, which
/// keeps entry growth under control across long elimination chains.
fn normalize_primitive(row: &mut IdxVec) {
    fn gcd(mut a: i128, mut b: i128) -> i128 {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    }

    let mut lcm: i128 = 1;
    let mut small = true;
    for (_, c) in row.iter() {
        match c.as_small() {
            Some((_, d)) => {
                let g = gcd(lcm, d as i128);
                match (lcm / g).checked_mul(d as i128) {
                    Some(next) if next.unsigned_abs() <= i64::MAX as u128 => lcm = next,
                    _ => {
                        small = false;
                        break;
                    }
                }
            }
            None => {
                small = false;
                break;
            }
        }
    }

    if small {
        let scaled: Vec<i128> = row
            .iter()
            .map(|(_, c)| {
                let (n, d) = c.as_small().expect("checked small");
                n as i128 * (lcm / d as i128)
            })
            .collect();
        let mut content: i128 = 0;
        for v in &scaled {
            content = gcd(content, *v);
        }
        debug_assert!(content > 0, "rows are nonzero");
        for ((_, c), v) in row.iter_mut().zip(scaled) {
            *c = Coeff::from_int(v / content);
        }
    } else {
        use num_integer::Integer;
        let rationals: Vec<Rational> = row.iter().map(|(_, c)| c.to_rational()).collect();
        let mut lcm = num_bigint::BigInt::from(1);
        for r in &rationals {
            lcm = lcm.lcm(r.denom());
        }
        let mut content = num_bigint::BigInt::from(0);
        let scaled: Vec<num_bigint::BigInt> = rationals
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()))
            .collect();
        for v in &scaled {
            content = content.gcd(v);
        }
        for ((_, c), v) in row.iter_mut().zip(scaled) {
            *c = Coeff::from_rational(&Rational::from_integer(v / &content));
        }
    }
}

/// `s·v − t·row` over integers, both inputs sorted descending, with the
/// content gcd stripped from the result so entries stay primitive.
fn merge_ff(s: &Coeff, v: &IdxVec, t: &Coeff, row: &IdxVec) -> IdxVec {
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() && j < row.len() {
        match row[j].0.cmp(&v[i].0) {
            std::cmp::Ordering::Less => {
                out.push((v[i].0, s.mul(&v[i].1)));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((row[j].0, t.mul(&row[j].1).neg()));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let coeff = s.mul(&v[i].1).sub(&t.mul(&row[j].1));
                if !coeff.is_zero() {
                    out.push((v[i].0, coeff));
                }
                i += 1;
                j += 1;
            }
        }
    }
    for (idx, c) in &v[i..] {
        out.push((*idx, s.mul(c)));
    }
    for (idx, c) in &row[j..] {
        out.push((*idx, t.mul(c).neg()));
    }
    normalize_primitive(&mut out);
    out
}

/// Fully reduced echelon space over box indices: no row contains another
/// row's pivot, matching the [`RowSpace`] invariants up to row scaling —
/// rows are kept as primitive integer vectors rather than leading-one,
/// and back-substitution uses fraction-free merges, which keeps the
/// entry growth and per-operation gcd cost down at closure scale.
#[derive(Debug)]
struct StairSpace {
    rows: Vec<IdxVec>,
    /// Reciprocal of each row's leading coefficient.
    lead_inv: Vec<Coeff>,
    pivot_slot: Vec<Option<u32>>,
    /// Rows whose support may contain the slot; entries can be stale and
    /// are rechecked on use.
    occurs: Vec<Vec<u32>>,
}

impl StairSpace {
    fn new(dim: usize) -> Self {
        Self {
            rows: Vec::new(),
            lead_inv: Vec::new(),
            pivot_slot: vec![None; dim],
            occurs: vec![Vec::new(); dim],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its projection onto the span; zero (empty) iff `v` is
    /// in the span. Rows are fully reduced, so only the original support
    /// can hit pivots and one pass suffices.
    fn reduce_with(&self, scratch: &mut Scratch, v: &IdxVec) -> IdxVec {
        debug_assert!(scratch.occupied.is_empty());
        for (idx, c) in v {
            scratch.acc[*idx as usize] = Some(c.clone());
            scratch.occupied.insert(*idx);
        }
        for (idx, coeff) in v {
            let Some(row_idx) = self.pivot_slot[*idx as usize] else {
                continue;
            };
            // eliminations for other pivots never touch this slot, so
            // the original coefficient is still current
            let lambda = coeff.mul(&self.lead_inv[row_idx as usize]);
            for (ri, rc) in &self.rows[row_idx as usize] {
                let slot = *ri as usize;
                let delta = lambda.mul(rc);
                match scratch.acc[slot].take() {
                    None => {
                        scratch.acc[slot] = Some(delta.neg());
                        scratch.occupied.insert(*ri);
                    }
                    Some(old) => {
                        let next = old.sub(&delta);
                        if next.is_zero() {
                            scratch.occupied.remove(ri);
                        } else {
                            scratch.acc[slot] = Some(next);
                        }
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(scratch.occupied.len());
        for &i in scratch.occupied.iter().rev() {
            out.push((i, scratch.acc[i as usize].take().expect("occupied slot is set")));
        }
        scratch.occupied.clear();
        out
    }

    /// Normalizes an already-reduced nonzero vector to primitive integer
    /// form, appends it, and back-substitutes it into the rows holding
    /// its pivot.
    fn push_reduced(&mut self, mut reduced: IdxVec) -> &IdxVec {
        normalize_primitive(&mut reduced);
        let row = reduced;
        let (lead_idx, lead) = row.first().expect("row must be nonzero").clone();
        let row_pos = self.rows.len() as u32;

        let holders = std::mem::take(&mut self.occurs[lead_idx as usize]);
        for holder in holders {
            let holder_row = &self.rows[holder as usize];
            // rows are sorted descending, so compare reversed
            let Ok(pos) = holder_row.binary_search_by(|(i, _)| lead_idx.cmp(i)) else {
                continue; // stale entry
            };
            // cancel the pivot exactly: scale by lead/g and coeff/g
            let hp = holder_row[pos].1.clone();
            let merged = merge_ff(&lead, holder_row, &hp, &row);
            for (ri, _) in &row[1..] {
                self.occurs[*ri as usize].push(holder);
            }
            self.lead_inv[holder as usize] =
                merged.first().expect("pivot survives scaling").1.recip();
            self.rows[holder as usize] = merged;
        }

        for (ri, _) in &row {
            self.occurs[*ri as usize].push(row_pos);
        }
        self.pivot_slot[lead_idx as usize] = Some(row_pos);
        self.lead_inv.push(lead.recip());
        self.rows.push(row);
        self.rows.last().expect("just pushed")
    }

    fn contains_with(&self, scratch: &mut Scratch, v: &IdxVec) -> bool {
        self.reduce_with(scratch, v).is_empty()
    }
}

/// One successful insertion during a closure run: `product = [multiplier,
/// source]` where `source` was a spanning row at the time.
#[derive(Clone, Debug)]
pub struct ClosureStep {
    pub multiplier: BasisElement,
    pub source: Element,
    pub product: Element,
}

/// Outcome of an [`ideal_closure`] run.
///
/// `saturated` records that the run stopped on its own — either the rank
/// reached a fixpoint or every target was already a member — rather than
/// by exhausting the iteration budget.
#[derive(Debug)]
pub struct ClosureReport {
    generator: Element,
    n: usize,
    reached_targets: Vec<usize>,
    iterations: usize,
    saturated: bool,
    indexer: BoxIndexer,
    space: StairSpace,
    trace: Vec<ClosureStep>,
}

impl ClosureReport {
    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    /// Directions `k` for which `(0,…,0|0,…,0)_k` is in the span,
    /// ascending.
    pub fn reached_targets(&self) -> &[usize] {
        &self.reached_targets
    }

    pub fn all_targets_reached(&self) -> bool {
        self.reached_targets.len() == self.n
    }

    /// Breadth-first sweeps begun.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// Insertion trace, one step per rank growth after the generator.
    pub fn trace(&self) -> &[ClosureStep] {
        &self.trace
    }

    /// The spanning rows, decoded.
    pub fn rows(&self) -> Vec<Element> {
        self.space
            .rows
            .iter()
            .map(|row| {
                let mut e = Element::zero();
                for (idx, c) in row {
                    e.add_term(self.indexer.decode(*idx), c.to_rational());
                }
                e
            })
            .collect()
    }

    /// Membership of `x` in the computed span of the ideal: `x` reduces
    /// to zero against the closure's rows. Anything supported outside
    /// the result box cannot be in the span.
    pub fn is_member(&self, x: &Element) -> bool {
        if x.is_zero() {
            return true;
        }
        let Some(v) = encode_element(&self.indexer, x) else {
            return false;
        };
        let mut scratch = Scratch::new(self.indexer.dim);
        self.space.contains_with(&mut scratch, &v)
    }
}

fn encode_element(indexer: &BoxIndexer, x: &Element) -> Option<IdxVec> {
    let mut out = Vec::with_capacity(x.num_terms());
    for (b, c) in x.iter_desc() {
        if b.n() != indexer.n {
            return None;
        }
        out.push((indexer.encode_parts(&b.upper, &b.lower, b.dir)?, Coeff::from_rational(c)));
    }
    Some(out)
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let targets = self
            .reached_targets
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "rank {} after {} sweeps; reached targets {{{}}} of {}; saturated: {}",
            self.rank(),
            self.iterations,
            targets,
            self.n,
            self.saturated
        )
    }
}

/// Breadth-first ideal closure of `l` inside finite windows.
///
/// Every spanning row is bracketed with every basis element inside
/// `mbox` (lex-descending); a product is inserted only if its entire
/// support lies inside `rbox`, otherwise it is discarded whole. The run
/// stops at a rank fixpoint, when the iteration budget is spent, or as
/// soon as every target `(0,…,0|0,…,0)_k` is a member — by the ideal
/// criterion, reaching all targets certifies the witness.
pub fn ideal_closure(
    cfg: &AlgebraConfig,
    l: &Element,
    mbox: IndexBox,
    rbox: IndexBox,
    max_iter: usize,
) -> Result<ClosureReport, Error> {
    cfg.check_element(l)?;
    if l.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !rbox.contains_support(l) {
        return Err(Error::SupportOutsideBox { bound: rbox.to_string() });
    }

    let n = cfg.n();
    let indexer = BoxIndexer::new(rbox, n);
    // products of an mbox element with anything inside rbox stay inside
    // this widened box, which tracks out-of-box terms without allocating
    let wide = BoxIndexer::new(
        IndexBox::new(rbox.upper + mbox.upper, rbox.lower + mbox.lower + 1),
        n,
    );
    let targets: Vec<u32> = (1..=n)
        .map(|k| {
            indexer
                .encode_parts(&vec![0; n], &vec![0; n], k)
                .expect("zero indices are inside every box")
        })
        .collect();
    let multipliers = mbox.basis_desc(n);

    let mut space = StairSpace::new(indexer.dim);
    let mut scratch = Scratch::new(indexer.dim);
    let encoded = encode_element(&indexer, l).expect("support checked against rbox");
    let reduced = space.reduce_with(&mut scratch, &encoded);
    let first = space.push_reduced(reduced).clone();
    let mut trace = Vec::new();

    let reached =
        |space: &StairSpace, scratch: &mut Scratch, already: &[usize]| -> Vec<usize> {
            targets
                .iter()
                .enumerate()
                .filter(|(idx, &t)| {
                    already.contains(&(idx + 1))
                        || space.contains_with(scratch, &vec![(t, Coeff::one())])
                })
                .map(|(idx, _)| idx + 1)
                .collect()
        };

    let mut reached_targets = reached(&space, &mut scratch, &[]);
    let mut iterations = 0;
    let mut saturated = reached_targets.len() == n;
    // Each frontier entry is a spanning row as it stood when it grew the
    // rank; rows are never mutated, so sources stay sparse.
    let mut frontier: Vec<IdxVec> = vec![first];
    let slopes: Vec<Coeff> = cfg.slopes().iter().map(Coeff::from_rational).collect();
    let mut work = BracketWork::new(n);

    'runs: while !saturated && iterations < max_iter && !frontier.is_empty() {
        iterations += 1;
        let mut next_frontier: Vec<IdxVec> = Vec::new();
        for source in &frontier {
            let decoded: Vec<DecodedTerm> = source
                .iter()
                .map(|(idx, c)| {
                    let b = indexer.decode(*idx);
                    DecodedTerm { upper: b.upper, lower: b.lower, dir: b.dir, coeff: c.clone() }
                })
                .collect();
            for m in &multipliers {
                if !bracket_indexed(&slopes, m, &decoded, &indexer, &wide, &mut work) {
                    continue;
                }
                if work.inside.is_empty() {
                    continue;
                }
                let reduced = space.reduce_with(&mut scratch, &work.inside);
                if reduced.is_empty() {
                    continue;
                }
                next_frontier.push(space.push_reduced(reduced).clone());
                let mut source_el = Element::zero();
                let mut product_el = Element::zero();
                for t in &decoded {
                    source_el.add_term(
                        BasisElement::new(t.upper.clone(), t.lower.clone(), t.dir),
                        t.coeff.to_rational(),
                    );
                }
                for (idx, c) in &work.inside {
                    product_el.add_term(indexer.decode(*idx), c.to_rational());
                }
                trace.push(ClosureStep {
                    multiplier: m.clone(),
                    source: source_el,
                    product: product_el,
                });
                reached_targets = reached(&space, &mut scratch, &reached_targets);
                if reached_targets.len() == n {
                    saturated = true;
                    break 'runs;
                }
            }
        }
        if next_frontier.is_empty() {
            saturated = true; // fixpoint
            break;
        }
        frontier = next_frontier;
    }

    Ok(ClosureReport {
        generator: l.clone(),
        n,
        reached_targets,
        iterations,
        saturated,
        indexer,
        space,
        trace,
    })
}

/// Reusable buffers for indexed bracket products.
struct BracketWork {
    upper: Vec<i64>,
    lower: Vec<i64>,
    inside: Vec<(u32, Coeff)>,
    outside: Vec<(u32, Coeff)>,
}

impl BracketWork {
    fn new(n: usize) -> Self {
        Self {
            upper: vec![0; n],
            lower: vec![0; n],
            inside: Vec::new(),
            outside: Vec::new(),
        }
    }
}

/// A frontier term decoded once so products cost only index arithmetic.
struct DecodedTerm {
    upper: Vec<i64>,
    lower: Vec<i64>,
    dir: usize,
    coeff: Coeff,
}

/// Sorts ascending by index and combines duplicates, dropping zeros.
fn combine(buf: &mut Vec<(u32, Coeff)>) {
    buf.sort_unstable_by_key(|(idx, _)| *idx);
    let mut write = 0;
    let mut read = 0;
    while read < buf.len() {
        let mut acc = buf[read].1.clone();
        let idx = buf[read].0;
        read += 1;
        while read < buf.len() && buf[read].0 == idx {
            acc = acc.add(&buf[read].1);
            read += 1;
        }
        if !acc.is_zero() {
            buf[write] = (idx, acc);
            write += 1;
        }
    }
    buf.truncate(write);
}

/// `[m, source]` in indexed form, canonically combined and sorted
/// descending into `work.inside`; `false` when the product has support
/// outside the result box (after cancellation) and must be discarded
/// whole.
fn bracket_indexed(
    slopes: &[Coeff],
    m: &BasisElement,
    source: &[DecodedTerm],
    indexer: &BoxIndexer,
    wide: &BoxIndexer,
    work: &mut BracketWork,
) -> bool {
    work.inside.clear();
    work.outside.clear();
    let k = m.dir;

    for y in source {
        let l = y.dir;
        for r in 0..indexer.n {
            work.upper[r] = m.upper[r] + y.upper[r];
            work.lower[r] = m.lower[r] + y.lower[r];
        }
        let emit = |work_upper: &[i64],
                        work_lower: &[i64],
                        dir: usize,
                        coeff: Coeff,
                        inside: &mut Vec<(u32, Coeff)>,
                        outside: &mut Vec<(u32, Coeff)>| {
            let coeff = coeff.mul(&y.coeff);
            match indexer.encode_parts(work_upper, work_lower, dir) {
                Some(idx) => inside.push((idx, coeff)),
                None => {
                    let idx = wide
                        .encode_parts(work_upper, work_lower, dir)
                        .expect("bracket products fit the widened box");
                    outside.push((idx, coeff));
                }
            }
        };

        let b_k = y.upper[k - 1];
        if b_k != 0 {
            emit(
                &work.upper,
                &work.lower,
                l,
                slopes[k - 1].mul_int(b_k),
                &mut work.inside,
                &mut work.outside,
            );
        }
        let j_k = y.lower[k - 1];
        if j_k != 0 {
            work.lower[k - 1] -= 1;
            emit(
                &work.upper,
                &work.lower,
                l,
                Coeff::Small(j_k, 1),
                &mut work.inside,
                &mut work.outside,
            );
            work.lower[k - 1] += 1;
        }
        let a_l = m.upper[l - 1];
        if a_l != 0 {
            emit(
                &work.upper,
                &work.lower,
                k,
                slopes[l - 1].mul_int(-a_l),
                &mut work.inside,
                &mut work.outside,
            );
        }
        let i_l = m.lower[l - 1];
        if i_l != 0 {
            work.lower[l - 1] -= 1;
            emit(
                &work.upper,
                &work.lower,
                k,
                Coeff::Small(-i_l, 1),
                &mut work.inside,
                &mut work.outside,
            );
            work.lower[l - 1] += 1;
        }
    }

    if !work.outside.is_empty() {
        combine(&mut work.outside);
        if !work.outside.is_empty() {
            return false;
        }
    }
    combine(&mut work.inside);
    work.inside.reverse();
    true
}

/// Membership of `x` in a closure's span (the free-function spelling of
/// [`ClosureReport::is_member`]).
pub fn is_member(report: &ClosureReport, x: &Element) -> bool {
    report.is_member(x)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AdDiagOutcome {
    /// A basis element `m` with `[l, m]` not proportional to `m`.
    Counterexample(BasisElement),
    /// Every basis element in the box is an eigenvector of `ad l`.
    PassesBox,
}

/// Scans the box for a basis element that `ad l` fails to scale.
///
/// The scan walks the box in layers of increasing maximum `|lower
/// index|`, lex-descending within each layer, and returns the first
/// failure; the lower-free layer comes first because eigenvector
/// candidates concentrate there.
pub fn ad_diag_check(
    cfg: &AlgebraConfig,
    l: &Element,
    bbox: IndexBox,
) -> Result<AdDiagOutcome, Error> {
    cfg.check_element(l)?;
    if l.is_zero() {
        return Err(Error::ZeroElement);
    }

    let n = cfg.n();
    let mut scan = bbox.basis_desc(n);
    let layer = |b: &BasisElement| b.lower.iter().map(|i| i.abs()).max().unwrap_or(0);
    scan.sort_by(|x, y| layer(x).cmp(&layer(y)).then_with(|| y.cmp(x)));

    for m in scan {
        let candidate = Element::unit(m.clone());
        let image = cfg.bracket(l, &candidate)?;
        if !is_multiple_of(&image, &m) {
            return Ok(AdDiagOutcome::Counterexample(m));
        }
    }
    Ok(AdDiagOutcome::PassesBox)
}

/// Whether `x` equals `α·b` for some scalar `α` (including zero).
fn is_multiple_of(x: &Element, b: &BasisElement) -> bool {
    x.is_zero() || (x.num_terms() == 1 && x.contains(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    fn cfg1() -> AlgebraConfig {
        AlgebraConfig::with_unit_slopes(1)
    }

    fn unit1(a: i64, i: i64) -> Element {
        Element::unit(BasisElement::rank1(a, i))
    }

    #[test]
    fn box_membership() {
        let bx = IndexBox::new(2, 1);
        assert!(bx.contains(&BasisElement::rank1(-2, 1)));
        assert!(!bx.contains(&BasisElement::rank1(3, 0)));
        assert!(!bx.contains(&BasisElement::rank1(0, -2)));
        assert_eq!(IndexBox::new(1, 0).basis_desc(1).len(), 3);
        assert_eq!(IndexBox::new(2, 2).basis_desc(2).len(), 25 * 25 * 2);
    }

    #[test]
    fn basis_desc_is_lex_descending() {
        let elems = IndexBox::new(1, 1).basis_desc(2);
        for pair in elems.windows(2) {
            assert!(pair[0] > pair[1]);
        }
    }

    #[test]
    fn lemma1_exponential_generator() {
        // l = (1|0)_1 with m = 1: the schedule takes t = 1, K = 2, c = 1,
        // so M = (0|2)_1 and [M, l] = (1|2)_1 − 2(1|1)_1.
        let cfg = cfg1();
        let l = unit1(1, 0);
        let (m, result) = lemma1_multiplier(&cfg, &l).unwrap();
        assert_eq!(m, BasisElement::rank1(0, 2));
        let mut expected = unit1(1, 2);
        expected.add_term(BasisElement::rank1(1, 1), from_i64(-2));
        assert_eq!(result, expected);
    }

    #[test]
    fn lemma1_negative_lower_generator() {
        // l = (0|−3)_1: K = 2, and the first c whose product has positive
        // lower indices is c = 3 (j = 6), giving −9·(0|2)_1.
        let cfg = cfg1();
        let l = unit1(0, -3);
        let (m, result) = lemma1_multiplier(&cfg, &l).unwrap();
        assert_eq!(m, BasisElement::rank1(0, 6));
        assert_eq!(result, unit1(0, 2).scaled(&from_i64(-9)));
        assert!(result.support().all(|b| b.lower.iter().all(|&i| i >= 1)));
    }

    #[test]
    fn lemma1_rejects_zero() {
        assert!(matches!(
            lemma1_multiplier(&cfg1(), &Element::zero()),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn closure_of_target_is_immediate() {
        let cfg = cfg1();
        let l = unit1(0, 0);
        let report =
            ideal_closure(&cfg, &l, IndexBox::new(1, 1), IndexBox::new(2, 2), 5).unwrap();
        assert_eq!(report.reached_targets(), &[1]);
        assert!(report.saturated());
        assert_eq!(report.iterations(), 0);
        assert!(report.is_member(&l));
        assert!(is_member(&report, &Element::zero()));
    }

    #[test]
    fn closure_reaches_target_from_exponential() {
        let cfg = cfg1();
        let l = unit1(1, 0);
        let report =
            ideal_closure(&cfg, &l, IndexBox::new(2, 2), IndexBox::new(3, 3), 10).unwrap();
        assert_eq!(report.reached_targets(), &[1]);
        assert!(report.is_member(&unit1(0, 0)));
        assert!(report.is_member(&l));
    }

    #[test]
    fn closure_preconditions() {
        let cfg = cfg1();
        assert!(matches!(
            ideal_closure(&cfg, &Element::zero(), IndexBox::new(1, 1), IndexBox::new(1, 1), 1),
            Err(Error::ZeroElement)
        ));
        assert!(matches!(
            ideal_closure(&cfg, &unit1(5, 0), IndexBox::new(1, 1), IndexBox::new(1, 1), 1),
            Err(Error::SupportOutsideBox { .. })
        ));
    }

    #[test]
    fn ad_diag_finds_documented_counterexample() {
        // l = (0|1)_1, box(1,1): the lower-free layer is scanned first and
        // (1|0)_1 fails, since [l, (1|0)_1] = (1|1)_1 − (1|0)_1.
        let cfg = cfg1();
        let l = unit1(0, 1);
        let outcome = ad_diag_check(&cfg, &l, IndexBox::new(1, 1)).unwrap();
        assert_eq!(outcome, AdDiagOutcome::Counterexample(BasisElement::rank1(1, 0)));
    }

    #[test]
    fn ad_diag_del_needs_lower_layer() {
        // l = ∂: every (a|0)_1 is an eigenvector, so box(1,0) passes; with
        // lower bound 1 the layer-1 scan finds (1|1)_1.
        let cfg = cfg1();
        let l = unit1(0, 0);
        assert_eq!(
            ad_diag_check(&cfg, &l, IndexBox::new(1, 0)).unwrap(),
            AdDiagOutcome::PassesBox
        );
        assert_eq!(
            ad_diag_check(&cfg, &l, IndexBox::new(1, 1)).unwrap(),
            AdDiagOutcome::Counterexample(BasisElement::rank1(1, 1))
        );
    }

    #[test]
    fn ad_diag_two_degrees_immediate() {
        let cfg = cfg1();
        let l = &unit1(1, 0) + &unit1(0, 1);
        let outcome = ad_diag_check(&cfg, &l, IndexBox::new(1, 1)).unwrap();
        assert!(matches!(outcome, AdDiagOutcome::Counterexample(_)));
    }
}
