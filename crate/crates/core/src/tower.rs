//! Integers of tower-exponential size with exact comparison.
//!
//! `exp_0(c) = c` and `exp_(m+1)(c) = 2^exp_m(c)`; the distinguished values
//! `E_n = exp_n(1)` grow as `1, 2, 4, 16, 65536, 2^65536, ...` and appear
//! throughout this crate as area bounds and family parameters. A
//! [`TowerInt`] stores either a materialized integer or the pair
//! `(height, base)`, and comparisons work symbolically: both sides are
//! materialized when cheap, and otherwise compared by iterated-logarithm
//! descent, peeling one exponential off both sides at a time. Because a
//! non-materializable tower is a power of two exceeding `2^131072`, small
//! additive offsets and scalings by small factors can be absorbed exactly,
//! which is what [`tower_cmp_shifted`] and [`tower_cmp_with_pow`] exploit.
//!
//! Every plain comparison is decidable; only [`tower_cmp_with_pow`] has an
//! ambiguous band (a tower falling strictly between `2^((b-1)e)` and
//! `2^(be)` for a base with `b` bits), reported as a resource error rather
//! than resolved by materialization.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::{Budget, Error, Result};

/// Bit-size threshold under which a tower is simply evaluated.
const SMALL_CAP_BITS: u64 = 1 << 17;

/// An exact non-negative integer, possibly of tower-exponential size.
#[derive(Clone, Debug)]
pub enum TowerInt {
    Exact(BigUint),
    /// `exp_height(base)` with `height >= 1`.
    Tower { height: u64, base: BigUint },
}

impl TowerInt {
    pub fn exact(value: impl Into<BigUint>) -> Self {
        TowerInt::Exact(value.into())
    }

    /// `exp_height(base)`.
    pub fn tower(height: u64, base: impl Into<BigUint>) -> Self {
        let base = base.into();
        if height == 0 {
            TowerInt::Exact(base)
        } else {
            TowerInt::Tower { height, base }
        }
    }

    /// Evaluates the tower if the result stays at or under `cap_bits` bits.
    pub fn materialize_under(&self, cap_bits: u64) -> Option<BigUint> {
        match self {
            TowerInt::Exact(v) => (v.bits() <= cap_bits).then(|| v.clone()),
            TowerInt::Tower { height, base } => {
                let mut v = base.clone();
                for _ in 0..*height {
                    let shift = v.to_u64()?;
                    if shift.checked_add(1)? > cap_bits {
                        return None;
                    }
                    v = BigUint::one() << shift;
                }
                Some(v)
            }
        }
    }

    /// Evaluates the tower within the budget's bit allowance.
    pub fn materialize(&self, budget: &Budget) -> Result<BigUint> {
        self.materialize_under(budget.max_bits)
            .ok_or(Error::ResourceBudget("tower materialization"))
    }

    /// For a tower `2^S` of height at least 1, the exponent `S` as a tower.
    fn log2(&self) -> Option<TowerInt> {
        match self {
            TowerInt::Exact(_) => None,
            TowerInt::Tower { height, base } => Some(TowerInt::tower(height - 1, base.clone())),
        }
    }
}

/// `E_n = exp_n(1)`.
pub fn tower_e(n: u64) -> TowerInt {
    TowerInt::tower(n, 1u32)
}

/// Compares two tower integers exactly.
pub fn tower_cmp(a: &TowerInt, b: &TowerInt) -> Ordering {
    tower_cmp_shifted(a, 0, b)
}

/// Compares `value(a) + offset` against `value(b)` exactly.
///
/// The offset must be small relative to the materialization threshold
/// (`|offset| < 2^62` is fine); it matters only when the compared values
/// are close, and values that close are materialized anyway.
pub fn tower_cmp_shifted(a: &TowerInt, offset: i64, b: &TowerInt) -> Ordering {
    // Fast exact path whenever both sides are small.
    let small_a = a.materialize_under(SMALL_CAP_BITS);
    let small_b = b.materialize_under(SMALL_CAP_BITS);
    match (small_a, small_b) {
        (Some(av), Some(bv)) => {
            let lhs = BigInt::from(av) + BigInt::from(offset);
            return lhs.cmp(&BigInt::from(bv));
        }
        (Some(av), None) => {
            // b is a power of two past 2^131072; compare by bit length.
            let lhs = BigInt::from(av) + BigInt::from(offset);
            return cmp_exact_vs_huge_tower(&lhs, b);
        }
        (None, Some(bv)) => {
            let rhs = BigInt::from(bv) - BigInt::from(offset);
            return cmp_exact_vs_huge_tower(&rhs, a).reverse();
        }
        (None, None) => {}
    }
    match (a, b) {
        (TowerInt::Exact(av), _) => {
            let lhs = BigInt::from(av.clone()) + BigInt::from(offset);
            cmp_exact_vs_huge_tower(&lhs, b)
        }
        (_, TowerInt::Exact(bv)) => {
            let rhs = BigInt::from(bv.clone()) - BigInt::from(offset);
            cmp_exact_vs_huge_tower(&rhs, a).reverse()
        }
        _ => {
            // Both are towers past the threshold: 2^A + offset vs 2^B with
            // A, B >= 131071, so the offset only matters on exact ties.
            let log_a = a.log2().expect("non-exact");
            let log_b = b.log2().expect("non-exact");
            match tower_cmp_shifted(&log_a, 0, &log_b) {
                Ordering::Equal => offset.cmp(&0),
                unequal => unequal,
            }
        }
    }
}

/// Compares an exact integer against a tower too large to materialize.
fn cmp_exact_vs_huge_tower(lhs: &BigInt, tower: &TowerInt) -> Ordering {
    if lhs.sign() == num_bigint::Sign::Minus || lhs.is_zero() {
        return Ordering::Less;
    }
    let lhs = lhs.magnitude();
    // tower = 2^S; lhs sits in [2^L, 2^(L+1)).
    let level = lhs.bits() - 1;
    let s = tower.log2().expect("caller passes a genuine tower");
    match tower_cmp_shifted(&TowerInt::Exact(BigUint::from(level)), 0, &s) {
        Ordering::Less => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
        Ordering::Equal => {
            // lhs vs 2^level: equal exactly when lhs is that power of two.
            if lhs.count_ones() == 1 {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }
    }
}

/// Compares `t` against `2^(value(yexp) + shift)` exactly.
fn cmp_vs_pow2_shifted(t: &TowerInt, yexp: &TowerInt, shift: i64) -> Ordering {
    match t {
        TowerInt::Exact(a) => {
            if a.is_zero() {
                return Ordering::Less;
            }
            let level = a.bits() - 1;
            match tower_cmp_shifted(&TowerInt::Exact(BigUint::from(level)), -shift, yexp) {
                Ordering::Less => Ordering::Less,
                Ordering::Greater => Ordering::Greater,
                Ordering::Equal => {
                    if a.count_ones() == 1 {
                        Ordering::Equal
                    } else {
                        Ordering::Greater
                    }
                }
            }
        }
        TowerInt::Tower { .. } => {
            let log_t = t.log2().expect("tower");
            tower_cmp_shifted(&log_t, -shift, yexp)
        }
    }
}

/// Compares `t` against `k * 2^value(yexp)` exactly, for `k >= 1`.
pub fn tower_cmp_times_pow2(t: &TowerInt, k: &BigUint, yexp: &TowerInt) -> Result<Ordering> {
    debug_assert!(!k.is_zero());
    // Cheap exact path when the right-hand side is small.
    if let Some(yv) = yexp.materialize_under(24) {
        let shift = yv.to_u64().expect("under 2^24");
        if k.bits() + shift <= SMALL_CAP_BITS {
            let rhs = k << shift;
            return Ok(cmp_against_exact(t, &rhs));
        }
    }
    let kappa = k.bits() - 1;
    if k.count_ones() == 1 {
        // k = 2^kappa, so the right side is the pure power 2^(Y + kappa).
        return Ok(cmp_vs_pow2_shifted(t, yexp, kappa as i64));
    }
    // 2^(Y + kappa) < k * 2^Y < 2^(Y + kappa + 1).
    if cmp_vs_pow2_shifted(t, yexp, kappa as i64) != Ordering::Greater {
        return Ok(Ordering::Less);
    }
    if cmp_vs_pow2_shifted(t, yexp, kappa as i64 + 1) != Ordering::Less {
        return Ok(Ordering::Greater);
    }
    // t lies strictly between two consecutive powers of two, so it is not
    // itself a power of two: it must be exact, and Y fits in its bits.
    match t {
        TowerInt::Exact(a) => {
            let yv = yexp
                .materialize_under(64)
                .and_then(|v| v.to_u64())
                .filter(|&v| v < a.bits())
                .ok_or(Error::ResourceBudget("scaled power-of-two comparison"))?;
            Ok(a.cmp(&(k << yv)))
        }
        TowerInt::Tower { .. } => unreachable!("towers of height >= 1 are powers of two"),
    }
}

/// Compares a tower against an exact integer, materializing the tower only
/// up to the bit length needed to decide.
fn cmp_against_exact(t: &TowerInt, rhs: &BigUint) -> Ordering {
    match t.materialize_under(rhs.bits() + 1) {
        Some(tv) => tv.cmp(rhs),
        None => Ordering::Greater,
    }
}

/// Compares `t` against `k * value(e)` exactly, for `k >= 1`.
fn cmp_vs_scaled(t: &TowerInt, k: &BigUint, e: &TowerInt) -> Result<Ordering> {
    if let Some(ev) = e.materialize_under(SMALL_CAP_BITS) {
        return Ok(cmp_against_exact(t, &(k * ev)));
    }
    let yexp = e.log2().expect("non-materializable towers have height >= 1");
    tower_cmp_times_pow2(t, k, &yexp)
}

/// Compares `t` against `d^value(e)` exactly where possible.
///
/// The power is materialized when it fits the budget; otherwise `d^e` is
/// bracketed between `2^((bits(d)-1) * e)` and `2^(bits(d) * e)`, which
/// decides every comparison except a tower landing strictly inside that
/// band (then a resource error is returned; no such input arises at desk
/// scale, and powers of two have an empty band).
pub fn tower_cmp_with_pow(
    t: &TowerInt,
    d: &BigUint,
    e: &TowerInt,
    budget: &Budget,
) -> Result<Ordering> {
    if d.is_zero() {
        let rhs = match e.materialize_under(64) {
            Some(ev) if ev.is_zero() => BigUint::one(),
            _ => BigUint::zero(),
        };
        return Ok(cmp_against_exact(t, &rhs));
    }
    if d.is_one() {
        return Ok(cmp_against_exact(t, &BigUint::one()));
    }
    // Exact path: d^e fits in the budget.
    if let Some(ev) = e.materialize_under(64).and_then(|v| v.to_u64()) {
        if ev.saturating_mul(d.bits()) <= budget.max_bits && ev <= u32::MAX as u64 {
            let rhs = d.pow(ev as u32);
            return Ok(cmp_against_exact(t, &rhs));
        }
    }
    let beta = d.bits();
    if d.count_ones() == 1 {
        // d = 2^(beta - 1): d^e = 2^((beta - 1) * e).
        let scale = BigUint::from(beta - 1);
        return match t {
            TowerInt::Exact(a) => {
                if a.is_zero() {
                    return Ok(Ordering::Less);
                }
                let level = a.bits() - 1;
                match cmp_vs_scaled(&TowerInt::Exact(BigUint::from(level)), &scale, e)? {
                    Ordering::Less => Ok(Ordering::Less),
                    Ordering::Greater => Ok(Ordering::Greater),
                    Ordering::Equal => {
                        Ok(if a.count_ones() == 1 { Ordering::Equal } else { Ordering::Greater })
                    }
                }
            }
            TowerInt::Tower { .. } => {
                cmp_vs_scaled(&t.log2().expect("tower"), &scale, e)
            }
        };
    }
    // 2^((beta - 1) e) < d^e < 2^(beta e), strictly on both sides.
    let log_t = match t {
        TowerInt::Exact(_) => {
            // e did not materialize under 64 bits, so e >= 2^63 and d^e has
            // more than 2^63 bits; any exact value is smaller.
            return Ok(Ordering::Less);
        }
        TowerInt::Tower { .. } => t.log2().expect("tower"),
    };
    if cmp_vs_scaled(&log_t, &BigUint::from(beta - 1), e)? != Ordering::Greater {
        return Ok(Ordering::Less);
    }
    if cmp_vs_scaled(&log_t, &BigUint::from(beta), e)? != Ordering::Less {
        return Ok(Ordering::Greater);
    }
    Err(Error::ResourceBudget("tower-versus-power comparison in the ambiguous band"))
}
