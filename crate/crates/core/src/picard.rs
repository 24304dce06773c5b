//! Exact rational divisor-class bookkeeping over the formal basis
//! (lambda, alpha_0..alpha_[g/2], beta_0..beta_[g/2]) of the rational Picard
//! group of the spin moduli spaces.

use num_rational::Ratio;
use std::collections::BTreeMap;
use thiserror::Error;

pub type Rat = Ratio<i64>;

#[derive(Debug, Error)]
pub enum PicardError {
    #[error("exponent table inconsistent: {0}")]
    InconsistentExponentTable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SpinParity {
    Odd,
    Even,
}

/// Exact rational divisor class over the formal basis. Basis order:
/// lambda, alpha_0..alpha_m, beta_0..beta_m with m = floor(g/2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub genus: usize,
    pub parity: SpinParity,
    pub lambda: Rat,
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
}

impl DivisorClass {
    pub fn zero(genus: usize, parity: SpinParity) -> Self {
        let m = genus / 2 + 1;
        Self {
            genus,
            parity,
            lambda: Rat::new(0, 1),
            alpha: vec![Rat::new(0, 1); m],
            beta: vec![Rat::new(0, 1); m],
        }
    }

    pub fn basis_len(&self) -> usize {
        1 + self.alpha.len() + self.beta.len()
    }

    /// Coefficients in basis order as exact rational strings.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("lambda".to_string(), self.lambda.to_string());
        for (j, a) in self.alpha.iter().enumerate() {
            m.insert(format!("alpha{j}"), a.to_string());
        }
        for (j, b) in self.beta.iter().enumerate() {
            m.insert(format!("beta{j}"), b.to_string());
        }
        m
    }

    /// LaTeX-like rendering of the class.
    pub fn to_latex(&self) -> String {
        let sup = match self.parity {
            SpinParity::Odd => "",
            SpinParity::Even => "^+",
        };
        let mut parts: Vec<String> = Vec::new();
        let fmt = |r: &Rat| -> String {
            if *r.denom() == 1 {
                format!("{}", r.numer())
            } else {
                format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
            }
        };
        if self.lambda != Rat::new(0, 1) {
            parts.push(format!("{} \\lambda", fmt(&self.lambda)));
        }
        for (j, a) in self.alpha.iter().enumerate() {
            if *a != Rat::new(0, 1) {
                parts.push(format!("{} \\alpha{sup}_{{{j}}}", fmt(a)));
            }
        }
        for (j, b) in self.beta.iter().enumerate() {
            if *b != Rat::new(0, 1) {
                parts.push(format!("{} \\beta{sup}_{{{j}}}", fmt(b)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

/// Verified boundary-exponent table feeding the divisor-class identity.
///
/// Entries: the order of tau at each boundary divisor (with the B_0 order in
/// the double-cover parameter), the order at the multiple-zero divisor, and
/// the spinor renormalization power t^{1/8} pulled out at A_0.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExponentTable {
    pub zg: i64,
    pub a0: i64,
    pub b0: i64,
    /// 16(g-j) for j = 1..floor(g/2)
    pub aj: Vec<i64>,
    /// 16j for j = 1..floor(g/2)
    pub bj: Vec<i64>,
    /// numerator of the spinor scaling exponent at A_0 (denominator 8)
    pub a0_spinor_eighths: i64,
}

impl ExponentTable {
    /// The verified exponents for genus g.
    pub fn standard(g: usize) -> Self {
        let m = g / 2;
        Self {
            zg: 8,
            a0: 6,
            b0: 16,
            aj: (1..=m).map(|j| 16 * (g as i64 - j as i64)).collect(),
            bj: (1..=m).map(|j| 16 * j as i64).collect(),
            a0_spinor_eighths: 1,
        }
    }
}

/// Degrees of the section bundles entering the identity: the tau modular
/// weight, the homogeneity degree 16(g-1) and the spinor-power bundle degree.
const TAU_MODULAR_WEIGHT: i64 = 72;

fn tau_homogeneity(g: usize) -> i64 {
    16 * (g as i64 - 1)
}

/// Section degree on the lambda side: hom(L^{16(g-1)}, Lambda^72) applied to
/// the 16(g-1)-th spinor power (a section of L^{16(g-1)} (x) Lambda^{8(g-1)}).
fn lambda_degree(g: usize) -> i64 {
    TAU_MODULAR_WEIGHT + tau_homogeneity(g) / 2
}

/// Solve the boundary-order identity for the class of the multiple-zero
/// divisor on the odd spin moduli space:
/// (8g+64) lambda = 16 beta_0 + (4+2g) alpha_0 + 16 sum (g-j) alpha_j
///                  + 16 sum j beta_j + 8 [Z_g].
pub fn solve_farkas(g: usize, table: &ExponentTable) -> Result<DivisorClass, PicardError> {
    let m = g / 2;
    if table.aj.len() != m || table.bj.len() != m {
        return Err(PicardError::InconsistentExponentTable(format!(
            "expected {m} interior boundary exponents"
        )));
    }
    if table.zg <= 0 {
        return Err(PicardError::InconsistentExponentTable(
            "multiple-zero order must be positive".into(),
        ));
    }
    let lam = Rat::new(lambda_degree(g), 1);
    // A_0 order of the assembled section: the tau order plus the spinor
    // renormalization times the homogeneity degree
    let alpha0_coeff = Rat::new(table.a0, 1)
        + Rat::new(table.a0_spinor_eighths, 8) * Rat::new(tau_homogeneity(g), 1);
    let beta0_coeff = Rat::new(table.b0, 1);
    let zg_coeff = Rat::new(table.zg, 1);
    let mut out = DivisorClass::zero(g, SpinParity::Odd);
    // [Z_g] = (lam - beta0 b0 - alpha0 a0 - sum aj alpha_j - sum bj beta_j)/zg
    out.lambda = lam / zg_coeff;
    out.alpha[0] = -alpha0_coeff / zg_coeff;
    out.beta[0] = -beta0_coeff / zg_coeff;
    for j in 1..=m {
        out.alpha[j] = -Rat::new(table.aj[j - 1], 1) / zg_coeff;
        out.beta[j] = -Rat::new(table.bj[j - 1], 1) / zg_coeff;
    }
    Ok(out)
}

/// The closed-form class (g+8) lambda - (g+2)/4 alpha_0 - 2 beta_0
/// - sum 2(g-j) alpha_j - sum 2j beta_j.
pub fn farkas_closed_form(g: usize) -> DivisorClass {
    let m = g / 2;
    let mut out = DivisorClass::zero(g, SpinParity::Odd);
    out.lambda = Rat::new(g as i64 + 8, 1);
    out.alpha[0] = -Rat::new(g as i64 + 2, 4);
    out.beta[0] = Rat::new(-2, 1);
    for j in 1..=m {
        out.alpha[j] = Rat::new(-2 * (g as i64 - j as i64), 1);
        out.beta[j] = Rat::new(-2 * j as i64, 1);
    }
    out
}

/// Whether the solved class matches the closed form (sensitivity flag).
pub fn matches_closed_form(class: &DivisorClass) -> bool {
    *class == farkas_closed_form(class.genus)
}

/// Vanishing order of the eighth theta-power along the theta-null divisor
/// on the even spin moduli space (classical constant).
pub const THETA_NULL_ORDER: i64 = 16;

/// Solve 4 lambda = 16 [Theta_null] + alpha_0^+ + 8 sum_{j>=1} beta_j^+ for
/// the theta-null class.
pub fn solve_theta_null(g: usize) -> DivisorClass {
    let m = g / 2;
    let mut out = DivisorClass::zero(g, SpinParity::Even);
    let n = Rat::new(THETA_NULL_ORDER, 1);
    out.lambda = Rat::new(4, 1) / n;
    out.alpha[0] = -Rat::new(1, 1) / n;
    for j in 1..=m {
        out.beta[j] = -Rat::new(8, 1) / n;
    }
    out
}

/// Reassemble the divisor identity from a theta-null class; returns the
/// coefficients of (lambda, [Theta_null], alpha_0^+, beta_j^+) sides for the
/// round-trip check.
pub fn theta_null_identity_roundtrip(class: &DivisorClass) -> (Rat, Vec<Rat>) {
    // multiply by 16: 4 lambda - 16*class = alpha_0^+ + 8 sum beta_j^+
    let n = Rat::new(THETA_NULL_ORDER, 1);
    let lam = Rat::new(4, 1) - n * class.lambda;
    let mut rest = vec![-n * class.alpha[0]];
    for b in class.beta.iter().skip(1) {
        rest.push(-n * *b);
    }
    (lam, rest)
}
