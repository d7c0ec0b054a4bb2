use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bits::{low_mask, BitMatrix, BitVec};
use crate::error::{Error, Result};

/// Largest blocklength with a coset-leader table.
pub const MAX_TABLE_LEN: usize = 64;
/// Largest redundancy `n - k` with a coset-leader table.
pub const MAX_TABLE_REDUNDANCY: usize = 24;
/// Largest dimension for which the weight spectrum is enumerated.
pub const MAX_SPECTRUM_DIM: usize = 26;

const MAX_SAMPLING_ATTEMPTS: usize = 1000;
const COVERING_CANDIDATES: usize = 64;

/// Minimum-weight coset representatives, indexed by syndrome.
///
/// Vectors are single words: position `i` is bit `i`.
#[derive(Debug)]
pub struct CosetTable {
    n: usize,
    leaders: Vec<u64>,
}

impl CosetTable {
    /// Fill the table by enumerating vectors in order of weight and, within a
    /// weight, lexicographically (position 0 most significant). The first
    /// vector reaching a syndrome is its leader.
    fn build(n: usize, column_syndromes: &[u64], redundancy: usize) -> Self {
        let size = 1usize << redundancy;
        let mut leaders = vec![u64::MAX; size];
        let mut filled = vec![false; size];
        leaders[0] = 0;
        filled[0] = true;
        let mut remaining = size - 1;
        let mut weight = 1;
        while remaining > 0 && weight <= n {
            for_each_of_weight(n, weight, |x| {
                let mut s = 0u64;
                let mut rest = x;
                while rest != 0 {
                    s ^= column_syndromes[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                let s = s as usize;
                if !filled[s] {
                    filled[s] = true;
                    leaders[s] = x;
                    remaining -= 1;
                }
                remaining > 0
            });
            weight += 1;
        }
        CosetTable { n, leaders }
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    pub fn leader(&self, syndrome: u64) -> u64 {
        self.leaders[syndrome as usize]
    }

    pub fn leader_weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.leaders.iter().map(|l| l.count_ones())
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }
}

/// Visit every `n`-bit word of the given weight, in increasing lexicographic
/// order of the bit string read from position 0. Stops early when `visit`
/// returns `false`.
fn for_each_of_weight<F: FnMut(u64) -> bool>(n: usize, weight: usize, mut visit: F) {
    if weight > n {
        return;
    }
    if weight == 0 {
        visit(0);
        return;
    }
    // Gosper's hack over integers whose most significant bit is position 0;
    // increasing integers are then increasing strings.
    let limit: u128 = 1u128 << n;
    let mut v: u128 = (1u128 << weight) - 1;
    while v < limit {
        let word = (v as u64).reverse_bits() >> (64 - n);
        if !visit(word) {
            return;
        }
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
}

/// A binary linear code with generator `G` (k x n) and parity-check `H`
/// ((n - k) x n).
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    g: BitMatrix,
    h: BitMatrix,
    table: OnceLock<std::result::Result<Arc<CosetTable>, Error>>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.g == other.g && self.h == other.h
    }
}

impl LinearCode {
    /// Code generated by the rows of `g`, which must be linearly independent.
    pub fn from_generator(g: BitMatrix) -> Result<Self> {
        let n = g.ncols();
        if n == 0 {
            return Err(Error::InvalidParams("blocklength must be positive".into()));
        }
        let rank = g.rank();
        if rank != g.nrows() {
            return Err(Error::InvalidParams(format!(
                "generator rows are dependent (rank {rank} of {})",
                g.nrows()
            )));
        }
        let h = g.null_space();
        Ok(LinearCode {
            n,
            g,
            h,
            table: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.g.nrows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    fn check_len(&self, x: &BitVec) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn encode(&self, u: &BitVec) -> Result<BitVec> {
        self.g.combine(u)
    }

    /// `x H^T`; zero exactly for codewords.
    pub fn syndrome(&self, x: &BitVec) -> Result<BitVec> {
        self.check_len(x)?;
        self.h.mul_transpose(x)
    }

    pub fn contains(&self, x: &BitVec) -> Result<bool> {
        Ok(self.syndrome(x)?.is_zero())
    }

    /// The coset-leader table, built on first use.
    pub fn coset_table(&self) -> Result<Arc<CosetTable>> {
        self.table
            .get_or_init(|| {
                let r = self.n - self.k();
                if self.n > MAX_TABLE_LEN || r > MAX_TABLE_REDUNDANCY {
                    return Err(Error::ResourceLimit(format!(
                        "coset table needs n <= {MAX_TABLE_LEN} and n - k <= \
                         {MAX_TABLE_REDUNDANCY}, got n = {}, n - k = {r}",
                        self.n
                    )));
                }
                Ok(Arc::new(CosetTable::build(
                    self.n,
                    &self.column_syndromes(),
                    r,
                )))
            })
            .clone()
    }

    /// Syndrome of each unit vector, packed into words.
    fn column_syndromes(&self) -> Vec<u64> {
        let mut cols = vec![0u64; self.n];
        for (j, row) in self.h.rows().iter().enumerate() {
            for i in row.ones() {
                cols[i] |= 1 << j;
            }
        }
        cols
    }

    /// Minimum-weight member of the coset with syndrome `s`, ties broken by
    /// the lexicographically smallest bit string.
    pub fn coset_leader(&self, s: &BitVec) -> Result<BitVec> {
        let r = self.n - self.k();
        if s.len() != r {
            return Err(Error::LengthMismatch {
                expected: r,
                got: s.len(),
            });
        }
        let table = self.coset_table()?;
        Ok(BitVec::from_word(self.n, table.leader(s.to_word())))
    }

    /// Nearest codeword to `x` (syndrome decoding).
    pub fn quantize(&self, x: &BitVec) -> Result<BitVec> {
        let leader = self.coset_leader(&self.syndrome(x)?)?;
        x.xor(&leader)
    }

    /// Word-level kernels for blocklengths up to 64.
    pub fn word_ops(&self) -> Result<WordOps> {
        let table = self.coset_table()?;
        Ok(WordOps {
            n: self.n,
            parity_rows: self.h.rows().iter().map(|r| r.to_word()).collect(),
            table,
        })
    }

    /// Weight spectrum, minimum distance and covering radius by exhaustive
    /// enumeration.
    pub fn diagnostics(&self) -> Result<CodeDiagnostics> {
        let k = self.k();
        if k > MAX_SPECTRUM_DIM {
            return Err(Error::ResourceLimit(format!(
                "spectrum enumeration needs k <= {MAX_SPECTRUM_DIM}, got {k}"
            )));
        }
        let table = self.coset_table()?;
        let rows: Vec<u64> = self.g.rows().iter().map(|r| r.to_word()).collect();
        let mut spectrum = vec![0u64; self.n + 1];
        // Gray-code walk over all messages
        let mut c = 0u64;
        spectrum[0] = 1;
        for i in 1u64..(1u64 << k) {
            c ^= rows[i.trailing_zeros() as usize];
            spectrum[c.count_ones() as usize] += 1;
        }
        let mut coset_weights = vec![0u64; self.n + 1];
        for w in table.leader_weights() {
            coset_weights[w as usize] += 1;
        }
        let min_distance = spectrum
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &count)| count > 0)
            .map(|(w, _)| w);
        let covering_radius = coset_weights.iter().rposition(|&c| c > 0).unwrap_or(0);
        Ok(CodeDiagnostics {
            n: self.n,
            k,
            min_distance,
            covering_radius,
            spectrum: spectrum
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .collect(),
            coset_leader_weights: coset_weights
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .collect(),
        })
    }

    /// Text form: first line `n k`, then the generator rows as 0/1 strings.
    pub fn to_text(&self) -> String {
        format!("{} {}\n{}", self.n, self.k(), self.g)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code description".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [n, k] = dims[..] else {
            return Err(Error::Parse(format!("header must be `n k`, got `{header}`")));
        };
        let rows: Vec<BitVec> = lines.map(str::parse).collect::<Result<_>>()?;
        if rows.len() != k {
            return Err(Error::Parse(format!(
                "expected {k} generator rows, got {}",
                rows.len()
            )));
        }
        LinearCode::from_generator(BitMatrix::from_rows(n, rows)?)
    }
}

/// Syndrome and coset-leader kernels on single-word vectors.
#[derive(Clone, Debug)]
pub struct WordOps {
    n: usize,
    parity_rows: Vec<u64>,
    table: Arc<CosetTable>,
}

impl WordOps {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn syndrome(&self, x: u64) -> u64 {
        self.parity_rows
            .iter()
            .enumerate()
            .fold(0, |s, (j, &row)| s | (((row & x).count_ones() as u64) & 1) << j)
    }

    pub fn leader(&self, syndrome: u64) -> u64 {
        self.table.leader(syndrome)
    }

    pub fn quantize(&self, x: u64) -> u64 {
        x ^ self.leader(self.syndrome(x))
    }
}

/// Exhaustive distance diagnostics of a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDiagnostics {
    pub n: usize,
    pub k: usize,
    /// `None` for the zero-dimensional code.
    pub min_distance: Option<usize>,
    pub covering_radius: usize,
    /// Codeword count by weight.
    pub spectrum: BTreeMap<usize, u64>,
    /// Coset count by leader weight.
    pub coset_leader_weights: BTreeMap<usize, u64>,
}

impl CodeDiagnostics {
    pub fn min_distance_norm(&self) -> Option<f64> {
        self.min_distance.map(|d| d as f64 / self.n as f64)
    }

    pub fn covering_radius_norm(&self) -> f64 {
        self.covering_radius as f64 / self.n as f64
    }

    /// Half the normalized minimum distance.
    pub fn packing_radius_norm(&self) -> Option<f64> {
        self.min_distance_norm().map(|d| d / 2.0)
    }
}

fn random_row<R: Rng>(rng: &mut R, n: usize) -> BitVec {
    let mut v = BitVec::zeros(n);
    for i in 0..n {
        if rng.random::<bool>() {
            v.set(i, true);
        }
    }
    v
}

/// Append `count` random rows independent of `rows` (and of each other).
fn extend_random<R: Rng>(rng: &mut R, n: usize, rows: &mut Vec<BitVec>, count: usize) -> Result<()> {
    let mut basis = BitMatrix::from_rows(n, rows.clone())?;
    let target = rows.len() + count;
    let mut attempts = 0;
    while rows.len() < target {
        attempts += 1;
        if attempts > MAX_SAMPLING_ATTEMPTS * target.max(1) {
            return Err(Error::SamplingFailure(attempts));
        }
        let v = random_row(rng, n);
        if !basis.spans(&v) {
            basis.push_row(v.clone())?;
            rows.push(v);
        }
    }
    Ok(())
}

/// Random `[n, k]` code: i.i.d. uniform `k x n` generator, redrawn until it
/// has full rank.
pub fn sample_random_linear_code(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    if n == 0 || k > n {
        return Err(Error::InvalidParams(format!("need 0 <= k <= n, n >= 1; got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let rows: Vec<BitVec> = (0..k).map(|_| random_row(&mut rng, n)).collect();
        let g = BitMatrix::from_rows(n, rows)?;
        if g.rank() == k {
            return LinearCode::from_generator(g);
        }
    }
    Err(Error::SamplingFailure(MAX_SAMPLING_ATTEMPTS))
}

/// Number of rows [`improve_covering`] appends: `ceil(log2 n)`.
pub fn covering_rows(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
}

/// Covering radius and the number of cosets attaining it, after adding `t`
/// (a syndrome) to the code: cosets `s` and `s ^ t` merge.
fn merged_covering(weights: &[u8], t: usize) -> (u8, usize) {
    let mut radius = 0u8;
    let mut count = 0usize;
    for (s, &w) in weights.iter().enumerate() {
        let m = w.min(weights[s ^ t]);
        if m > radius {
            radius = m;
            count = 1;
        } else if m == radius {
            count += 1;
        }
    }
    (radius, count)
}

/// Greedily append up to `ceil(log2 n)` generator rows, each the best of
/// random candidates at lowering (covering radius, number of cosets at the
/// covering radius). A row is only appended if it lowers that pair.
pub fn improve_covering(code: &LinearCode, seed: u64) -> Result<LinearCode> {
    improve_covering_rows(code, covering_rows(code.n()), seed)
}

/// [`improve_covering`] with an explicit row budget.
pub fn improve_covering_rows(code: &LinearCode, max_rows: usize, seed: u64) -> Result<LinearCode> {
    let n = code.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = code.clone();
    for _ in 0..max_rows {
        if current.k() >= n {
            break;
        }
        let table = current.coset_table()?;
        let weights: Vec<u8> = table.leader_weights().map(|w| w as u8).collect();
        let ops = current.word_ops()?;
        let before = merged_covering(&weights, 0);
        let mut best: Option<((u8, usize), u64)> = None;
        for _ in 0..COVERING_CANDIDATES {
            let cand = rng.random::<u64>() & low_mask(n);
            let t = ops.syndrome(cand) as usize;
            if t == 0 {
                // already a codeword
                continue;
            }
            let score = merged_covering(&weights, t);
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, cand));
            }
        }
        let Some((score, row)) = best else { break };
        if score >= before {
            break;
        }
        let mut rows = vec![BitVec::from_word(n, row)];
        rows.extend(current.generator().rows().iter().cloned());
        current = LinearCode::from_generator(BitMatrix::from_rows(n, rows)?)?;
    }
    Ok(current)
}

/// A pair of codes `C2 ⊆ C1`. The fine code `C1` quantizes, the coarse code
/// `C2` bins. The parity checks satisfy `H2 = [H1; ΔH]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedCode {
    pub fine: LinearCode,
    pub coarse: LinearCode,
    delta_h: BitMatrix,
    coarse_h: BitMatrix,
}

impl NestedCode {
    /// Nested pair from a fine generator whose last `k2` rows generate the
    /// coarse code.
    pub fn from_fine_generator(g1: BitMatrix, k2: usize) -> Result<Self> {
        let n = g1.ncols();
        let k1 = g1.nrows();
        if k2 > k1 {
            return Err(Error::InvalidParams(format!("coarse dimension {k2} exceeds {k1}")));
        }
        let fine = LinearCode::from_generator(g1.clone())?;
        let g2 = BitMatrix::from_rows(n, g1.rows()[k1 - k2..].to_vec())?;
        let coarse = LinearCode::from_generator(g2)?;
        // extend the basis of C1^⊥ to one of C2^⊥
        let h1 = fine.parity_check().clone();
        let mut span = h1.clone();
        let mut delta = BitMatrix::zeros(0, n);
        for row in coarse.parity_check().rows() {
            if delta.nrows() == k1 - k2 {
                break;
            }
            if !span.spans(row) {
                span.push_row(row.clone())?;
                delta.push_row(row.clone())?;
            }
        }
        debug_assert_eq!(delta.nrows(), k1 - k2);
        // use H2 = [H1; ΔH] as the coarse parity check, so that fine codewords
        // have coarse syndromes [0, Δs]
        let coarse_h = h1.stack(&delta)?;
        let coarse = LinearCode {
            n,
            g: coarse.g,
            h: coarse_h.clone(),
            table: OnceLock::new(),
        };
        Ok(NestedCode {
            fine,
            coarse,
            delta_h: delta,
            coarse_h,
        })
    }

    pub fn n(&self) -> usize {
        self.fine.n()
    }

    pub fn delta_h(&self) -> &BitMatrix {
        &self.delta_h
    }

    /// Fine rate minus coarse rate: the rate of the transmitted increment.
    pub fn increment_rate(&self) -> f64 {
        self.delta_h.nrows() as f64 / self.n() as f64
    }

    /// `Δs = x ΔH^T`.
    pub fn syndrome_increment(&self, x: &BitVec) -> Result<BitVec> {
        self.delta_h.mul_transpose(x)
    }

    /// The full coarse syndrome `[0, Δs]` of a fine codeword with increment
    /// `Δs`.
    pub fn coarse_syndrome_from_increment(&self, ds: &BitVec) -> BitVec {
        BitVec::zeros(self.coarse_h.nrows() - self.delta_h.nrows()).concat(ds)
    }
}

/// Nested code with `k1 = round(n R1)`, `k2 = round(n R2)`.
///
/// The coarse generator `G_bin` is random. The fine generator is
/// `[G_I; G'; G_bin]`, where `G'` is random and `G_I` holds up to
/// `ceil(log2 n)` covering-improvement rows, counted within `k1`.
pub fn build_nested(n: usize, r1: f64, r2: f64, seed: u64) -> Result<NestedCode> {
    if !(0.0..=1.0).contains(&r2) || !(r2..=1.0).contains(&r1) {
        return Err(Error::InvalidParams(format!(
            "need 0 <= R2 <= R1 <= 1, got R1 = {r1}, R2 = {r2}"
        )));
    }
    let k1 = (n as f64 * r1).round() as usize;
    let k2 = ((n as f64 * r2).round() as usize).min(k1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let improve = covering_rows(n).min(k1 - k2);
    let table_ok = n <= MAX_TABLE_LEN && n - (k1 - improve) <= MAX_TABLE_REDUNDANCY;
    let improve = if table_ok { improve } else { 0 };
    // sample G_bin first, then G' independent of it
    let mut rows = Vec::new();
    extend_random(&mut rng, n, &mut rows, k2)?;
    extend_random(&mut rng, n, &mut rows, k1 - k2 - improve)?;
    let (bin, extra) = rows.split_at(k2);
    let mut ordered = extra.to_vec();
    ordered.extend_from_slice(bin);
    let mut g = BitMatrix::from_rows(n, ordered)?;
    if improve > 0 {
        let partial = LinearCode::from_generator(g)?;
        // improvement rows are prepended, keeping G_bin at the bottom
        let improved = improve_covering_rows(&partial, improve, rng.random())?;
        let mut all: Vec<BitVec> = improved.generator().rows().to_vec();
        let missing = k1 - all.len();
        if missing > 0 {
            // improvement stopped early: top up with random rows
            let mut fresh = all.clone();
            extend_random(&mut rng, n, &mut fresh, missing)?;
            let mut top = fresh.split_off(all.len());
            top.append(&mut all);
            all = top;
        }
        g = BitMatrix::from_rows(n, all)?;
    }
    NestedCode::from_fine_generator(g, k2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repetition3() -> LinearCode {
        LinearCode::from_text("3 1\n111\n").unwrap()
    }

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn weight_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_of_weight(4, 2, |w| {
            seen.push(BitVec::from_word(4, w).to_string());
            true
        });
        assert_eq!(seen, ["0011", "0101", "0110", "1001", "1010", "1100"]);
        let mut count = 0;
        for_each_of_weight(64, 1, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 64);
    }

    #[test]
    fn repetition_code() {
        let code = repetition3();
        assert_eq!(code.parity_check().nrows(), 2);
        assert!(code.contains(&bv("111")).unwrap());
        assert!(!code.contains(&bv("110")).unwrap());
        for s in 1..4u64 {
            let leader = code.coset_leader(&BitVec::from_word(2, s)).unwrap();
            assert_eq!(leader.weight(), 1);
        }
        assert_eq!(code.quantize(&bv("110")).unwrap(), bv("111"));
        assert_eq!(code.quantize(&bv("100")).unwrap(), bv("000"));
        let d = code.diagnostics().unwrap();
        assert_eq!(d.min_distance, Some(3));
        assert_eq!(d.covering_radius, 1);
        assert_eq!(d.spectrum, BTreeMap::from([(0, 1), (3, 1)]));
        assert!((d.covering_radius_norm() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.packing_radius_norm(), Some(0.5));
    }

    #[test]
    fn text_round_trip() {
        let code = sample_random_linear_code(20, 9, 5).unwrap();
        let text = code.to_text();
        assert!(text.starts_with("20 9\n"));
        let back = LinearCode::from_text(&text).unwrap();
        assert_eq!(back, code);
        assert_eq!(back.to_text(), text);
        assert!(LinearCode::from_text("3 2\n111\n").is_err());
        assert!(LinearCode::from_text("3 2\n111\n111\n").is_err());
        assert!(LinearCode::from_text("").is_err());
    }

    #[test]
    fn table_bounds() {
        let code = sample_random_linear_code(40, 5, 1).unwrap();
        assert!(matches!(
            code.coset_leader(&BitVec::zeros(35)),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            code.syndrome(&BitVec::zeros(39)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn covering_row_budget() {
        assert_eq!(covering_rows(24), 5);
        assert_eq!(covering_rows(32), 5);
        assert_eq!(covering_rows(33), 6);
        assert_eq!(covering_rows(2), 1);
    }

    #[test]
    fn merged_covering_counts() {
        // weights of 4 cosets; merging 0<->1 and 2<->3
        let w = [0u8, 2, 1, 3];
        assert_eq!(merged_covering(&w, 0), (3, 1));
        assert_eq!(merged_covering(&w, 1), (1, 2));
    }

    #[test]
    fn nested_rates_and_block_structure() {
        let nested = build_nested(16, 0.75, 0.25, 9).unwrap();
        assert_eq!(nested.fine.k(), 12);
        assert_eq!(nested.coarse.k(), 4);
        assert_eq!(nested.delta_h().nrows(), 8);
        let h2 = nested.coarse.parity_check();
        let h1 = nested.fine.parity_check();
        for i in 0..h1.nrows() {
            assert_eq!(h2.row(i), h1.row(i));
        }
        for i in 0..nested.delta_h().nrows() {
            assert_eq!(h2.row(h1.nrows() + i), nested.delta_h().row(i));
        }
    }
}
