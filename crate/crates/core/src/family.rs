//! The doubled Baumslag-Gersten family: the exponent-tower words `w_n`, the
//! presentations built around a block word `v`, their enumeration by length,
//! the tower-driven choice of depth, and the pinching hypothesis checkers.
//!
//! The word `w_n` compresses the tower exponent E_n = exp_n(1): the depth-0
//! word is a product of three commutators `[y^-E_n x y^E_n, x^k]` for
//! k = 3, 5, 7, and each substitution round rewrites the y-power
//! conjugators one tower level down using the stable letter t, so the fully
//! substituted word has 48 * 2^n letters yet still evaluates to the
//! identity. Around it, `H_v` adjoins a stable letter s conjugating
//! `[v, w_n^-1]` to t, `mu_v` doubles `H_v` across the amalgamations
//! `s = x-hat` and `x = s-hat`, and `mu0_v` is the four-generator form of
//! `mu_v` after eliminating s, s-hat, y, and y-hat.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::edit::{substitute_letters, ScriptBuilder};
use crate::kgroup::{k_eval, v_encode};
use crate::presentation::Presentation;
use crate::tietze::{TietzeMove, TietzeScript};
use crate::tower::{tower_cmp, tower_cmp_times_pow2, tower_cmp_with_pow, tower_e, TowerInt};
use crate::words::{GenId, Letter, Word};
use crate::{Budget, Error, Result};

/// Generator ids shared by every unhatted copy: x, y, t, s in that order.
const X: GenId = 0;
const Y: GenId = 1;
const T: GenId = 2;
const S: GenId = 3;

/// Default names for the mirror copy's generators.
pub const DEFAULT_HAT_NAMES: [&str; 4] = ["xh", "yh", "th", "sh"];

/// A family member: the block word `v`, the depth `n`, and the names used
/// for the mirror copy.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    /// Block word over {y, yx}: positive letters, starting with y, never
    /// two x in a row, at least one block.
    pub v: Word,
    /// Substitution depth of `w_n`. Construction stays practical up to
    /// n of about 20 (the words double per level); identity checks in the
    /// ambient group are feasible for n up to 3.
    pub n: u32,
    /// Names for the mirror generators x-hat, y-hat, t-hat, s-hat.
    pub hat_names: [String; 4],
}

impl FamilyParams {
    pub fn new(v: Word, n: u32) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Invalid("v must have at least one block".to_string()));
        }
        // Rejects anything that is not a block word over {y, yx}.
        v_encode(&v, X, Y)?;
        Ok(FamilyParams { v, n, hat_names: DEFAULT_HAT_NAMES.map(String::from) })
    }

    /// The one-sided group: generators x, y, t, s and relators
    /// `x^y x^-2`, `x^t y^-1`, `s^-1 v w_n^-1 v^-1 w_n s t^-1`.
    pub fn h(&self) -> Presentation {
        let w = build_w(self.n);
        let gens = alloc::vec!["x".into(), "y".into(), "t".into(), "s".into()];
        let relators =
            alloc::vec![relator_xy(0), relator_xt(0), relator_commutator(0, &self.v, &w)];
        Presentation::new(gens, relators).expect("well-formed by construction")
    }

    /// The double of [`FamilyParams::h`] across `s = x-hat`, `x = s-hat`:
    /// eight generators, eight relators, balanced.
    pub fn mu(&self) -> Presentation {
        let w = build_w(self.n);
        let mut gens: Vec<String> =
            alloc::vec!["x".into(), "y".into(), "t".into(), "s".into()];
        gens.extend(self.hat_names.iter().cloned());
        let a1 = Word::from_letters(alloc::vec![Letter::pos(S), Letter::neg(4 + X)]);
        let a2 = Word::from_letters(alloc::vec![Letter::pos(X), Letter::neg(4 + S)]);
        let relators = alloc::vec![
            relator_xy(0),
            relator_xt(0),
            relator_commutator(0, &self.v, &w),
            relator_xy(4),
            relator_xt(4),
            relator_commutator(4, &self.v, &w),
            a1,
            a2,
        ];
        Presentation::new(gens, relators).expect("well-formed by construction")
    }

    /// The four-generator form over x, t, x-hat, t-hat: both copies keep
    /// their first two relators with y rewritten as `x^t` (letterwise
    /// y -> t^-1 x t, then freely reduced), the conjugated-commutator
    /// relators use the amalgamated letters directly, and the order is
    /// short relator, mirrored short relator, long relator, mirrored long
    /// relator.
    pub fn mu0(&self) -> Presentation {
        let w = build_w(self.n);
        // Substitute y -> x^t while still in x, y, t ids, then retire y so
        // the surviving ids are x = 0, t = 1, with the mirror copy at 2, 3.
        let xt = Word::from_letters(alloc::vec![Letter::neg(T), Letter::pos(X), Letter::pos(T)]);
        let v2 = retire_gen(&substitute_letters(&self.v, Y, &xt), Y);
        let w2 = retire_gen(&substitute_letters(&w, Y, &xt), Y);
        let q1 = retire_gen(&substitute_letters(&relator_xy(0), Y, &xt), Y).free_reduce();
        let mut q3 = Word::gen_run(2, -1); // x-hat^-1
        q3.extend(&v2);
        q3.extend(&w2.inverse());
        q3.extend(&v2.inverse());
        q3.extend(&w2);
        q3.push(Letter::pos(2)); // x-hat
        q3.push(Letter::neg(1)); // t^-1
        let q3 = q3.free_reduce();
        let q2 = swap_copies(&q1);
        let q4 = swap_copies(&q3);
        let gens = alloc::vec![
            "x".into(),
            "t".into(),
            self.hat_names[0].clone(),
            self.hat_names[2].clone(),
        ];
        Presentation::new(gens, alloc::vec![q1, q2, q3, q4])
            .expect("well-formed by construction")
    }

    /// An elementary-move script from [`FamilyParams::mu`] to
    /// [`FamilyParams::mu0`], eliminating s, s-hat, y, y-hat in that order
    /// with defining words of at most three letters (so d = 4 throughout)
    /// and finishing with a relator swap into the printed order.
    pub fn reduction_script(&self, budget: &Budget) -> Result<TietzeScript> {
        let start = self.mu();
        let target = self.mu0();
        let mut b = ScriptBuilder::new(&start, budget);
        // s = x-hat via the first amalgamation relator (s x-hat^-1).
        eliminate(&mut b, 6, &[2])?;
        // x s-hat^-1 inverts to s-hat x^-1, defining s-hat = x.
        b.invert(6)?;
        eliminate(&mut b, 6, &[5])?;
        // x^t y^-1 inverts to y t^-1 x^-1 t, defining y = x^t.
        b.invert(1)?;
        eliminate(&mut b, 1, &[0, 2])?;
        // The mirrored relator does the same for y-hat.
        b.invert(3)?;
        eliminate(&mut b, 3, &[2, 4])?;
        // The eliminations leave the relators as short, long, mirrored
        // short, mirrored long; the printed order pairs the short ones.
        b.swap_relators(1, 2)?;
        if b.current() != &target {
            return Err(Error::Invalid(
                "four-generator reduction missed its target".to_string(),
            ));
        }
        Ok(b.finish(4))
    }
}

/// Substitutes every occurrence of the leading generator of relator `def`
/// inside each of `targets` (aligning each onto its freely reduced
/// letterwise substitution), then removes the generator.
fn eliminate(b: &mut ScriptBuilder, def: usize, targets: &[usize]) -> Result<()> {
    let defw = b.current().relators[def].clone();
    let gen = defw.letters()[0].gen;
    let value = Word::from_letters(defw.letters()[1..].to_vec()).inverse();
    for &rel in targets {
        let stage = substitute_letters(&b.current().relators[rel], gen, &value).free_reduce();
        b.substitute_generator(rel, def)?;
        b.cyclically_align(rel, &stage)?;
    }
    let name = b.current().gens[gen as usize].clone();
    b.push(TietzeMove::RemoveGen { d: 4, name })
}

/// `x^y x^-2` with the copy's generators offset by `off`.
fn relator_xy(off: GenId) -> Word {
    Word::from_letters(alloc::vec![
        Letter::neg(off + Y),
        Letter::pos(off + X),
        Letter::pos(off + Y),
        Letter::neg(off + X),
        Letter::neg(off + X),
    ])
}

/// `x^t y^-1` with the copy's generators offset by `off`.
fn relator_xt(off: GenId) -> Word {
    Word::from_letters(alloc::vec![
        Letter::neg(off + T),
        Letter::pos(off + X),
        Letter::pos(off + T),
        Letter::neg(off + Y),
    ])
}

/// `s^-1 v w^-1 v^-1 w s t^-1`, kept literal (no reduction), with the
/// copy's generators offset by `off`.
fn relator_commutator(off: GenId, v: &Word, w: &Word) -> Word {
    let v = shift_gens(v, off);
    let w = shift_gens(w, off);
    let mut r = Word::gen_run(off + S, -1);
    r.extend(&v);
    r.extend(&w.inverse());
    r.extend(&v.inverse());
    r.extend(&w);
    r.push(Letter::pos(off + S));
    r.push(Letter::neg(off + T));
    r
}

fn shift_gens(w: &Word, off: GenId) -> Word {
    Word::from_letters(w.letters().iter().map(|l| Letter::new(l.gen + off, l.inverse)).collect())
}

/// Removes a generator id from the alphabet of a word that no longer
/// mentions it, sliding higher ids down.
fn retire_gen(w: &Word, gen: GenId) -> Word {
    debug_assert!(w.letters().iter().all(|l| l.gen != gen));
    Word::from_letters(
        w.letters()
            .iter()
            .map(|l| Letter::new(if l.gen > gen { l.gen - 1 } else { l.gen }, l.inverse))
            .collect(),
    )
}

/// Exchanges the two copies in the four-generator alphabet
/// (x, t, x-hat, t-hat): ids 0 and 2 swap, ids 1 and 3 swap.
fn swap_copies(w: &Word) -> Word {
    Word::from_letters(w.letters().iter().map(|l| Letter::new(l.gen ^ 2, l.inverse)).collect())
}

/// One substitution round: given the words standing for `y^-E` and `y^E`,
/// produces the words for `y^-2^E` and `y^2^E` one tower level up.
fn substitution_rounds(mut neg: Word, mut pos: Word, rounds: u32) -> (Word, Word) {
    for _ in 0..rounds {
        let mut next_neg = Word::gen_run(T, -1);
        next_neg.extend(&neg);
        next_neg.extend(&Word::gen_run(X, -1));
        next_neg.extend(&pos);
        next_neg.extend(&Word::gen_run(T, 1));
        let mut next_pos = Word::gen_run(T, -1);
        next_pos.extend(&neg);
        next_pos.extend(&Word::gen_run(X, 1));
        next_pos.extend(&pos);
        next_pos.extend(&Word::gen_run(T, 1));
        neg = next_neg;
        pos = next_pos;
    }
    (neg, pos)
}

/// `A x^3 A^-1 x^-3 A x^5 A^-1 x^-5 A x^7 A^-1 x^-7` for the conjugated
/// letter `A = neg x pos`.
fn commutator_triple(neg: &Word, pos: &Word) -> Word {
    let mut a = neg.clone();
    a.push(Letter::pos(X));
    a.extend(pos);
    let a_inv = a.inverse();
    let mut w = Word::new();
    for e in [3i64, 5, 7] {
        w.extend(&a);
        w.extend(&Word::gen_run(X, e));
        w.extend(&a_inv);
        w.extend(&Word::gen_run(X, -e));
    }
    w
}

/// The fully substituted word `w_n` over x, y, t: exactly 48 * 2^n letters,
/// trivial in the Baumslag-Gersten group.
pub fn build_w(n: u32) -> Word {
    let (neg, pos) = substitution_rounds(Word::gen_run(Y, -1), Word::gen_run(Y, 1), n);
    commutator_triple(&neg, &pos)
}

/// The intermediate word `w_{n,m}`: m substitution rounds applied, with the
/// powers `y^{+-E_{n-m}}` still literal. `build_w_nm(n, n)` is letter-equal
/// to [`build_w`]; smaller m needs E_{n-m} to fit the letter budget.
pub fn build_w_nm(n: u32, m: u32, budget: &Budget) -> Result<Word> {
    if m > n {
        return Err(Error::Invalid(
            "more substitution rounds than the depth allows".to_string(),
        ));
    }
    let e = tower_e((n - m) as u64).materialize(budget)?;
    if e > BigUint::from(budget.max_letters as u64) {
        return Err(Error::ResourceBudget("materialized y-power exceeds the letter budget"));
    }
    let k = e.to_i64().ok_or(Error::ResourceBudget("materialized y-power out of range"))?;
    let (neg, pos) = substitution_rounds(Word::gen_run(Y, -k), Word::gen_run(Y, k), m);
    Ok(commutator_triple(&neg, &pos))
}

/// `H_v` for the depth-n word; see [`FamilyParams::h`].
pub fn build_h(v: &Word, n: u32) -> Result<Presentation> {
    Ok(FamilyParams::new(v.clone(), n)?.h())
}

/// The doubled presentation; see [`FamilyParams::mu`].
pub fn build_mu(v: &Word, n: u32) -> Result<Presentation> {
    Ok(FamilyParams::new(v.clone(), n)?.mu())
}

/// The four-generator form; see [`FamilyParams::mu0`].
pub fn build_mu0(v: &Word, n: u32) -> Result<Presentation> {
    Ok(FamilyParams::new(v.clone(), n)?.mu0())
}

/// Elementary-move witness for the reduction from [`build_mu`] to
/// [`build_mu0`]; see [`FamilyParams::reduction_script`].
pub fn mu_to_mu0(v: &Word, n: u32, budget: &Budget) -> Result<TietzeScript> {
    FamilyParams::new(v.clone(), n)?.reduction_script(budget)
}

/// The block word for a bit pattern: one block per bit, high bit first,
/// 0 = `y` and 1 = `yx`.
pub fn block_word(blocks: u32, pattern: u64) -> Word {
    debug_assert!(blocks <= 63);
    let mut w = Word::new();
    for i in 0..blocks {
        w.push(Letter::pos(Y));
        if blocks < 64 && (pattern >> (blocks - 1 - i)) & 1 == 1 {
            w.push(Letter::pos(X));
        }
    }
    w
}

/// All 2^blocks block words with exactly `blocks` blocks, in pattern order
/// (equivalently lexicographic with `y` before `yx`).
pub fn enumerate_blocks(blocks: u32) -> Vec<Word> {
    assert!(blocks <= 24, "block enumeration is limited to 24 blocks");
    (0..(1u64 << blocks)).map(|pattern| block_word(blocks, pattern)).collect()
}

/// Every pair `(v, mu_v)` with total length `l(mu_v) <= l` at depth n, in
/// deterministic order: block count ascending, then pattern order. The
/// budget's letter allowance caps the combined size of the output.
///
/// `l(mu_v) = 36 + 4 l(v) + 192 * 2^n` exactly: eight generators, the two
/// five- and four-letter relators and the `3 + 2 l(v) + 2 * 48 * 2^n`
/// letter commutator relator in each copy, and two two-letter
/// amalgamation relators.
pub fn enumerate_family(
    l: u64,
    n: u32,
    budget: &Budget,
) -> Result<Vec<(Word, Presentation)>> {
    let scale = 1u64
        .checked_shl(n)
        .and_then(|p| p.checked_mul(192))
        .ok_or(Error::ResourceBudget("depth too large to enumerate"))?;
    let overhead = 36 + scale;
    let mut out = Vec::new();
    if l < overhead + 4 {
        return Ok(out);
    }
    let vmax = (l - overhead) / 4;
    let mut letters_total: u64 = 0;
    let mut blocks = 1u64;
    while blocks <= vmax {
        if blocks > 24 {
            return Err(Error::ResourceBudget("family enumeration too large"));
        }
        for pattern in 0..(1u64 << blocks) {
            if blocks + u64::from(pattern.count_ones()) > vmax {
                continue;
            }
            let v = block_word(blocks as u32, pattern);
            let p = FamilyParams::new(v.clone(), n)?.mu();
            letters_total += p.length() as u64;
            if letters_total > budget.max_letters as u64 {
                return Err(Error::ResourceBudget(
                    "family enumeration exceeds the letter budget",
                ));
            }
            out.push((v, p));
        }
        blocks += 1;
    }
    Ok(out)
}

/// The two candidate depths for a target length l, iteration count m, and
/// base d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthChoice {
    /// Smallest n with `E_{n-1} > d^(exp_m(22 l))`, decided exactly by
    /// tower comparison without materializing either side.
    pub exact: u32,
    /// Smallest n with `E_{n-2} > 484 * exp_m(l)^2`, the integer-exact
    /// form of the logarithmic shortcut `E_{n-3} > 2 log2(22 exp_m(l))`.
    /// A shortcut, not a bound: for m >= 1 it can undershoot `exact`.
    pub sufficient: u32,
}

/// Chooses the depth n for prescribed (l, m, d); both fields of the result
/// are computed independently so callers can cross-check them.
pub fn choose_n(l: u64, m: u32, d: u64, budget: &Budget) -> Result<DepthChoice> {
    if l == 0 || d == 0 {
        return Err(Error::Invalid("l and d must be positive".to_string()));
    }
    let dd = BigUint::from(d);
    let e = TowerInt::tower(m as u64, BigUint::from(l) * 22u32);
    let mut exact = None;
    // d^(exp_m(22 l)) < E_{m+7} for 64-bit d and l, so the scan is bounded.
    for n in 1..=(m as u64 + 10) {
        if tower_cmp_with_pow(&tower_e(n - 1), &dd, &e, budget)? == Ordering::Greater {
            exact = Some(n as u32);
            break;
        }
    }
    let exact = exact.ok_or(Error::Invalid("depth scan passed its bound".to_string()))?;

    let mut sufficient = None;
    for n in 3..=(m as u64 + 12) {
        let holds = if m == 0 {
            let rhs = TowerInt::exact(BigUint::from(l) * BigUint::from(l) * 484u32);
            tower_cmp(&tower_e(n - 2), &rhs) == Ordering::Greater
        } else {
            // 484 * exp_m(l)^2 = 484 * 2^(2 exp_{m-1}(l)).
            let inner = TowerInt::tower(m as u64 - 1, l).materialize(budget)?;
            tower_cmp_times_pow2(
                &tower_e(n - 2),
                &BigUint::from(484u32),
                &TowerInt::exact(inner * 2u32),
            )? == Ordering::Greater
        };
        if holds {
            sufficient = Some(n as u32);
            break;
        }
    }
    let sufficient =
        sufficient.ok_or(Error::Invalid("depth scan passed its bound".to_string()))?;
    Ok(DepthChoice { exact, sufficient })
}

/// Where a candidate subword sits relative to its neighboring stable
/// letters, which determines the exact element that must not be a y-power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BContext {
    /// Between two positive stable letters: `x^-7 B` is tested.
    PosPos,
    /// Positive before, inverse after: `x^-7 B x^7` is tested.
    PosNeg,
    /// Inverse before, positive after: `B` itself is tested.
    NegPos,
    /// Between two inverse stable letters: `B x^7` is tested.
    NegNeg,
}

impl FromStr for BContext {
    type Err = Error;

    /// Accepts the two-letter neighbor notation: a = positive stable
    /// letter, A = its inverse.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aa" => Ok(BContext::PosPos),
            "aA" => Ok(BContext::PosNeg),
            "Aa" => Ok(BContext::NegPos),
            "AA" => Ok(BContext::NegNeg),
            _ => Err(Error::Invalid("context must be one of aa, aA, Aa, AA".to_string())),
        }
    }
}

/// Whether the element determined by `b` (over x, y) and its context is
/// not a y-power, evaluated exactly in the dyadic affine group.
pub fn check_b_condition(b: &Word, context: BContext, budget: &Budget) -> Result<bool> {
    let mut word = Word::new();
    if matches!(context, BContext::PosPos | BContext::PosNeg) {
        word.extend(&Word::gen_run(X, -7));
    }
    word.extend(b);
    if matches!(context, BContext::PosNeg | BContext::NegNeg) {
        word.extend(&Word::gen_run(X, 7));
    }
    Ok(k_eval(&word, X, Y, budget)?.as_y_power().is_none())
}

/// One conjugation-shape check from the hypothesis list.
#[derive(Clone, Debug)]
pub struct CaseCheck {
    /// The checked shape, with `i` ranging over nonzero integers.
    pub label: &'static str,
    pub passes: bool,
    /// A nonzero integer exponent witnessing failure, when one exists.
    pub failing_exponent: Option<BigInt>,
}

/// Everything the hypothesis checks report about a block word `v`.
#[derive(Clone, Debug)]
pub struct VReport {
    /// Number of blocks (the first encoded index).
    pub y_count: BigUint,
    /// Bit code of the x positions (the second encoded index).
    pub x_code: BigUint,
    /// The block count is positive.
    pub y_count_positive: bool,
    /// The bit code is even, i.e. the final block is a bare y.
    pub x_code_even: bool,
    /// `v^-1` in the inverse-positive context is not a y-power; fails
    /// exactly when v is a pure power of y.
    pub inverse_not_y_power: bool,
    /// The five positive-inverse context checks: v, x^i, x^i v, v^-1 x^i,
    /// v^-1 x^i v, the latter four over every nonzero integer i at once.
    pub cases: Vec<CaseCheck>,
}

impl VReport {
    pub fn all_pass(&self) -> bool {
        self.y_count_positive
            && self.x_code_even
            && self.inverse_not_y_power
            && self.cases.iter().all(|c| c.passes)
    }
}

/// `n1 * 2^e1 + n2 * 2^e2` as an exact dyadic pair.
fn dyadic_sum(n1: &BigInt, e1: i64, n2: &BigInt, e2: i64) -> (BigInt, i64) {
    if n1.is_zero() {
        return (n2.clone(), e2);
    }
    if n2.is_zero() {
        return (n1.clone(), e1);
    }
    let e = e1.min(e2);
    ((n1 << ((e1 - e) as usize)) + (n2 << ((e2 - e) as usize)), e)
}

/// Checks `x^-7 u x^i v x^7` against y-powers for every nonzero integer i
/// at once: writing the affine images of the left and right parts as
/// z -> 2^a z + b, the translation component is affine in i with
/// coefficient 2^(a_right) != 0, so there is exactly one rational root
/// i0 = -b_left - b_right / 2^(a_right), and the check fails precisely
/// when i0 is a nonzero integer.
fn parametric_case(
    label: &'static str,
    u: &Word,
    v: &Word,
    budget: &Budget,
) -> Result<CaseCheck> {
    let mut left = Word::gen_run(X, -7);
    left.extend(u);
    let mut right = v.clone();
    right.extend(&Word::gen_run(X, 7));
    let lm = k_eval(&left, X, Y, budget)?;
    let rm = k_eval(&right, X, Y, budget)?;
    let a_right = rm.a().to_i64().ok_or(Error::ResourceBudget("conjugation exponent range"))?;
    // The affine maps store their translation as num / 2^exp; switch to
    // num * 2^exp for the root arithmetic below.
    let shifted = rm
        .b_exp()
        .checked_add(a_right)
        .and_then(i64::checked_neg)
        .ok_or(Error::ResourceBudget("conjugation exponent range"))?;
    let (num, exp) = dyadic_sum(lm.b_num(), -lm.b_exp(), rm.b_num(), shifted);
    let num = -num;
    // Root i0 = num * 2^exp; integral and nonzero means a violation.
    let failing = if num.is_zero() {
        None
    } else if exp >= 0 {
        Some(num << (exp as usize))
    } else {
        let down = (-exp) as u64;
        (num.trailing_zeros().unwrap_or(0) >= down).then(|| num >> (down as usize))
    };
    Ok(CaseCheck { label, passes: failing.is_none(), failing_exponent: failing })
}

/// Evaluates every hypothesis check for a block word `v`: the encoded
/// indices and their sign and parity, the inverse-context check, and the
/// five conjugation shapes.
pub fn check_v_conditions(v: &Word, budget: &Budget) -> Result<VReport> {
    let (y_count, x_code) = v_encode(v, X, Y)?;
    let y_count_positive = !y_count.is_zero();
    let x_code_even = !x_code.bit(0);
    let inverse_not_y_power = check_b_condition(&v.inverse(), BContext::NegPos, budget)?;
    let vi = v.inverse();
    let empty = Word::new();
    let mut cases = Vec::with_capacity(5);
    cases.push(CaseCheck {
        label: "v",
        passes: check_b_condition(v, BContext::PosNeg, budget)?,
        failing_exponent: None,
    });
    for (label, u, tail) in [
        ("x^i", &empty, &empty),
        ("x^i v", &empty, v),
        ("v^-1 x^i", &vi, &empty),
        ("v^-1 x^i v", &vi, v),
    ] {
        cases.push(parametric_case(label, u, tail, budget)?);
    }
    Ok(VReport { y_count, x_code, y_count_positive, x_code_even, inverse_not_y_power, cases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bg::{g_is_trivial, BgAlphabet};
    use crate::canon::canonical_form;
    use crate::tietze::replay;
    use crate::words::parse_word;
    use alloc::collections::BTreeSet;
    use num_traits::One;

    fn xyt_names() -> Vec<String> {
        alloc::vec!["x".into(), "y".into(), "t".into()]
    }

    fn xy_word(text: &str) -> Word {
        parse_word(text, &xyt_names(), 1 << 20).unwrap()
    }

    /// Independent oracle: the commutator product [a, x^3][a, x^5][a, x^7]
    /// built from parsed pieces.
    fn commutator_oracle(a_text: &str) -> Word {
        let a = xy_word(a_text);
        let mut w = Word::new();
        for e in [3, 5, 7] {
            let xe = Word::gen_run(0, e);
            w.extend(&a);
            w.extend(&xe);
            w.extend(&a.inverse());
            w.extend(&xe.inverse());
        }
        w
    }

    #[test]
    fn w0_matches_its_literal_expansion() {
        let oracle = commutator_oracle("y^-1 x y");
        assert_eq!(oracle.len(), 48);
        assert_eq!(build_w(0), oracle);
    }

    #[test]
    fn w_lengths_follow_the_doubling_formula() {
        for n in 0..=10 {
            assert_eq!(build_w(n).len(), 48 << n, "depth {n}");
        }
    }

    #[test]
    fn w_nm_materializes_the_intermediate_powers() {
        let budget = Budget::default();
        // One round short of full substitution at depth 1: E_1 = 2.
        let oracle = commutator_oracle("y^-2 x y^2");
        assert_eq!(build_w_nm(1, 0, &budget).unwrap(), oracle);
        // Full substitution equals the direct construction.
        assert_eq!(build_w_nm(1, 1, &budget).unwrap(), build_w(1));
        assert_eq!(build_w_nm(3, 3, &budget).unwrap(), build_w(3));
        // Depth 2 after one round holds y^{+-2} only, never y^{+-4}.
        let w21 = build_w_nm(2, 1, &budget).unwrap();
        for (gen, run) in w21.runs() {
            if gen == 1 {
                assert!(run.unsigned_abs() <= 2, "unexpected y-run of {run}");
            }
        }
        assert!(build_w_nm(1, 2, &budget).is_err());
    }

    #[test]
    fn w_is_trivial_in_the_ambient_group() {
        let budget = Budget::default();
        for n in 0..=3 {
            let w = build_w(n);
            assert!(g_is_trivial(&w, BgAlphabet::standard(), &budget).unwrap(), "depth {n}");
        }
    }

    #[test]
    fn substitution_stages_agree_in_the_ambient_group() {
        let budget = Budget::default();
        for n in 0..=3u32 {
            let stages: Vec<Word> =
                (0..=n).map(|m| build_w_nm(n, m, &budget).unwrap()).collect();
            for a in &stages {
                assert!(g_is_trivial(a, BgAlphabet::standard(), &budget).unwrap());
                for b in &stages {
                    let mut diff = a.clone();
                    diff.extend(&b.inverse());
                    assert!(g_is_trivial(&diff, BgAlphabet::standard(), &budget).unwrap());
                }
            }
        }
    }

    #[test]
    fn h_has_the_documented_shape() {
        let v = xy_word("y");
        let p = build_h(&v, 0).unwrap();
        assert_eq!(p.gens, alloc::vec!["x", "y", "t", "s"]);
        assert_eq!(p.num_relators(), 3);
        assert_eq!(p.relators[0].len(), 5);
        assert_eq!(p.relators[1].len(), 4);
        // s^-1 v w^-1 v^-1 w s t^-1 with l(v) = 1 and l(w_0) = 48.
        assert_eq!(p.relators[2].len(), 3 + 2 * 1 + 2 * 48);
        assert_eq!(p.length(), 4 + 5 + 4 + 101);
        // The commutator relator is bounded by its stable letters.
        let r = &p.relators[2];
        assert_eq!(r.letters()[0], Letter::neg(3));
        assert_eq!(*r.letters().last().unwrap(), Letter::neg(2));

        let v2 = xy_word("y x");
        let p2 = build_h(&v2, 1).unwrap();
        assert_eq!(p2.length(), 4 + 5 + 4 + 3 + 2 * 2 + 2 * 96);
    }

    #[test]
    fn mu_is_balanced_with_trivial_homology() {
        let budget = Budget::default();
        for (v_text, n) in
            [("y", 0u32), ("y", 1), ("y x", 0), ("y x", 1), ("y y x", 0), ("y x y x", 1)]
        {
            let v = xy_word(v_text);
            let p = build_mu(&v, n).unwrap();
            assert_eq!(p.num_gens(), 8);
            assert_eq!(p.num_relators(), 8);
            assert!(p.is_balanced());
            assert_eq!(
                p.length() as u64,
                36 + 4 * v.len() as u64 + 192 * (1 << n),
                "length formula for v={v_text} n={n}"
            );
            assert!(p.h1_trivial(), "homology for v={v_text} n={n}");
        }
    }

    #[test]
    fn mu0_is_the_four_generator_form() {
        let budget = Budget::default();
        let v = xy_word("y");
        let p = build_mu0(&v, 0).unwrap();
        assert_eq!(p.gens, alloc::vec!["x", "t", "xh", "th"]);
        assert!(p.is_balanced());
        // Both short relators say the conjugate of x by x^t is x^2.
        let names = p.gens.clone();
        let q1 = parse_word("t^-1 x^-1 t x t^-1 x t x^-2", &names, 1 << 10).unwrap();
        let q2 = parse_word("th^-1 xh^-1 th xh th^-1 xh th xh^-2", &names, 1 << 10).unwrap();
        assert_eq!(p.relators[0], q1);
        assert_eq!(p.relators[1], q2);
        // The long relators are conjugated by the opposite copy's x and
        // end with the other stable letter.
        assert_eq!(p.relators[2].letters()[0], Letter::neg(2));
        assert_eq!(*p.relators[2].letters().last().unwrap(), Letter::neg(1));
        assert_eq!(p.relators[3].letters()[0], Letter::neg(0));
        assert_eq!(*p.relators[3].letters().last().unwrap(), Letter::neg(3));
        // The mirror of the mirror is the original.
        assert_eq!(swap_copies(&swap_copies(&p.relators[2])), p.relators[2]);
        assert_eq!(p.relators[3], swap_copies(&p.relators[2]));
        for r in &p.relators {
            assert!(r.is_freely_reduced());
        }
        assert!(p.h1_trivial());
        assert!(build_mu0(&v, 1).unwrap().h1_trivial());
    }

    #[test]
    fn the_reduction_script_replays_onto_the_four_generator_form() {
        let budget = Budget::default();
        let v = xy_word("y");
        let start = build_mu(&v, 0).unwrap();
        let target = build_mu0(&v, 0).unwrap();
        let script = mu_to_mu0(&v, 0, &budget).unwrap();
        assert_eq!(script.d, 4);
        assert_eq!(script.start, Some(start.fingerprint()));
        assert_eq!(replay(&start, &script, &budget).unwrap(), target);
    }

    #[test]
    fn reduction_scripts_replay_across_small_members() {
        let budget = Budget::default();
        for blocks in 1..=2 {
            for v in enumerate_blocks(blocks) {
                for n in 0..=1 {
                    let script = mu_to_mu0(&v, n, &budget).unwrap();
                    let start = build_mu(&v, n).unwrap();
                    let target = build_mu0(&v, n).unwrap();
                    assert_eq!(replay(&start, &script, &budget).unwrap(), target);
                }
            }
        }
        // One deeper spot check.
        let v = xy_word("y x y y x");
        let script = mu_to_mu0(&v, 2, &budget).unwrap();
        let start = build_mu(&v, 2).unwrap();
        assert_eq!(replay(&start, &script, &budget).unwrap(), build_mu0(&v, 2).unwrap());
    }

    #[test]
    fn reduction_scripts_survive_the_text_format() {
        let budget = Budget::default();
        let v = xy_word("y x");
        let start = build_mu(&v, 0).unwrap();
        let script = mu_to_mu0(&v, 0, &budget).unwrap();
        let text = crate::tietze::script_to_text(&script, &start);
        let back = crate::tietze::parse_script(&text, &start, &budget).unwrap();
        assert_eq!(back, script);
    }

    #[test]
    fn family_enumeration_is_deterministic_and_complete() {
        let budget = Budget::default();
        // l(mu_y) at depth 0 is exactly 36 + 4 + 192 = 232.
        let at_threshold = enumerate_family(232, 0, &budget).unwrap();
        assert_eq!(at_threshold.len(), 1);
        assert_eq!(at_threshold[0].0, xy_word("y"));
        assert_eq!(at_threshold[0].1, build_mu(&xy_word("y"), 0).unwrap());
        assert!(enumerate_family(231, 0, &budget).unwrap().is_empty());

        // Four letters of v headroom: block words up to length 4.
        let family = enumerate_family(244, 0, &budget).unwrap();
        let vs: Vec<Word> = family.iter().map(|(v, _)| v.clone()).collect();
        let expected: Vec<Word> = [
            "y",
            "y x",
            "y y",
            "y y x",
            "y x y",
            "y x y x",
            "y y y",
            "y y y x",
            "y y x y",
            "y x y y",
            "y y y y",
        ]
        .iter()
        .map(|t| xy_word(t))
        .collect();
        assert_eq!(vs, expected);
        let mut forms = BTreeSet::new();
        for (_, p) in &family {
            assert!(p.is_balanced());
            assert!(p.h1_trivial());
            assert!(p.length() as u64 <= 244);
            forms.insert(canonical_form(p).form);
        }
        assert_eq!(forms.len(), family.len(), "canonical forms must be pairwise distinct");
    }

    #[test]
    fn block_enumeration_counts_patterns() {
        for b in 0..=6u32 {
            let words = enumerate_blocks(b);
            assert_eq!(words.len(), 1 << b);
            let distinct: BTreeSet<Word> = words.iter().cloned().collect();
            assert_eq!(distinct.len(), words.len());
            for w in &words {
                if b > 0 {
                    v_encode(w, 0, 1).unwrap();
                }
            }
        }
        // Pattern order doubles as lexicographic order on block strings.
        let two = enumerate_blocks(2);
        assert_eq!(two[0], xy_word("y y"));
        assert_eq!(two[1], xy_word("y y x"));
        assert_eq!(two[2], xy_word("y x y"));
        assert_eq!(two[3], xy_word("y x y x"));
    }

    #[test]
    fn depth_choice_matches_the_anchor_cases() {
        let budget = Budget::default();
        // E_4 = 65536 < 10^220 < 2^65536 = E_5, so the exact depth is 6;
        // the shortcut needs E_{n-2} > 484 * 100, first true at E_4.
        assert_eq!(
            choose_n(10, 0, 10, &budget).unwrap(),
            DepthChoice { exact: 6, sufficient: 6 }
        );
        // E_4 < 2^22 <= E_5 gives 6 again; the shortcut needs
        // E_{n-2} > 484.
        assert_eq!(
            choose_n(1, 0, 2, &budget).unwrap(),
            DepthChoice { exact: 6, sufficient: 6 }
        );
        // d = 1 makes the power side 1, and E_1 = 2 is the first tower
        // value above it.
        assert_eq!(choose_n(5, 0, 1, &budget).unwrap().exact, 2);
        assert!(choose_n(0, 0, 2, &budget).is_err());
        assert!(choose_n(2, 0, 0, &budget).is_err());
    }

    #[test]
    fn depth_choice_is_monotone_and_cross_checked_without_iteration() {
        let budget = Budget::default();
        // With no iteration the shortcut really is sufficient whenever
        // d <= 2^(22 l), which holds across this grid.
        let mut last = 0;
        for l in [1u64, 2, 5, 10, 100, 1000] {
            let choice = choose_n(l, 0, 10, &budget).unwrap();
            assert!(choice.exact <= choice.sufficient, "l={l}");
            assert!(choice.exact >= last, "non-decreasing in l");
            last = choice.exact;
            for d in [2u64, 10, 1000, 1_000_000] {
                let c = choose_n(l, 0, d, &budget).unwrap();
                assert!(c.exact <= c.sufficient, "l={l} d={d}");
            }
        }
        // Non-decreasing in the iteration count.
        let mut last = 0;
        for m in 0..=2 {
            let c = choose_n(10, m, 10, &budget).unwrap();
            assert!(c.exact >= last, "non-decreasing in m");
            last = c.exact;
        }
    }

    #[test]
    fn iterated_depth_shortcut_can_undershoot() {
        // At m = 1, l = 1, d = 2 the exact requirement is
        // E_{n-1} > 2^(2^22), first met at n = 7, while the shortcut
        // E_{n-2} > 484 * exp_1(1)^2 = 1936 is already met at n = 6. The
        // shortcut is reported as computed, not clamped.
        let budget = Budget::default();
        let c = choose_n(1, 1, 2, &budget).unwrap();
        assert_eq!(c, DepthChoice { exact: 7, sufficient: 6 });
        assert!(c.exact > c.sufficient);
    }

    #[test]
    fn b_condition_checks_the_four_contexts() {
        let budget = Budget::default();
        let y3 = xy_word("y^3");
        let x7y3 = xy_word("x^7 y^3");
        // A pure y-power between an inverse and a positive stable letter
        // violates the condition outright.
        assert!(!check_b_condition(&y3, BContext::NegPos, &budget).unwrap());
        // x^-7 x^7 y^3 = y^3 is again a y-power.
        assert!(!check_b_condition(&x7y3, BContext::PosPos, &budget).unwrap());
        // x^-7 y^3 translates by -7 at the dyadic level, so it passes.
        assert!(check_b_condition(&y3, BContext::PosPos, &budget).unwrap());
        assert!(check_b_condition(&xy_word("x"), BContext::NegPos, &budget).unwrap());
        // x^-7 x^7 is the identity, a trivial y-power.
        assert!(!check_b_condition(&xy_word("x^-7"), BContext::NegNeg, &budget).unwrap());
        assert!(check_b_condition(&xy_word("y"), BContext::NegNeg, &budget).unwrap());
        assert_eq!("aA".parse::<BContext>().unwrap(), BContext::PosNeg);
        assert!("ab".parse::<BContext>().is_err());
    }

    #[test]
    fn v_conditions_report_for_the_anchor_word() {
        let budget = Budget::default();
        let v = xy_word("y x y y x y x y");
        let report = check_v_conditions(&v, &budget).unwrap();
        assert_eq!(report.y_count, BigUint::from(5u32));
        assert_eq!(report.x_code, BigUint::from(22u32));
        assert!(report.y_count_positive);
        assert!(report.x_code_even);
        assert!(report.inverse_not_y_power);
        assert_eq!(report.cases.len(), 5);
        for case in &report.cases {
            assert!(case.passes, "case {} must pass", case.label);
            assert!(case.failing_exponent.is_none());
        }
        assert!(report.all_pass());
    }

    #[test]
    fn v_conditions_report_failures_honestly() {
        let budget = Budget::default();
        // A pure power of y fails only the inverse check: y^-1 is itself
        // a y-power.
        let pure = check_v_conditions(&xy_word("y"), &budget).unwrap();
        assert!(!pure.inverse_not_y_power);
        assert!(pure.cases.iter().all(|c| c.passes));
        assert!(!pure.all_pass());
        // v = yx fails the v^-1 x^i shape at i = -3:
        // x^-7 (yx)^-1 x^-3 x^7 maps z to (z - 8)/2 + 4 = z/2, a y-power.
        let report = check_v_conditions(&xy_word("y x"), &budget).unwrap();
        assert!(!report.x_code_even, "yx ends in x, so the code is odd");
        let case = report.cases.iter().find(|c| c.label == "v^-1 x^i").unwrap();
        assert!(!case.passes);
        assert_eq!(case.failing_exponent, Some(BigInt::from(-3)));
        assert!(!report.all_pass());
        // The anchor's encoded indices are recovered by v_encode directly.
        let (i, j) = v_encode(&xy_word("y x"), 0, 1).unwrap();
        assert_eq!((i, j), (BigUint::one(), BigUint::one()));
    }
}
