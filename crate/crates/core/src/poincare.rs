//! Integer polynomials in `t` and the generating functions of the
//! hyperoctahedral group, the symmetric group and the abelian ideals.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ce::{betti_numbers, DEFAULT_COHOMOLOGY_CAP};
use crate::error::{Error, Result};
use crate::ideals::dimension_histogram;
use crate::report::VerificationReport;
use crate::roots::check_rank;
use crate::weyl::{Perm, WeylGroup, DEFAULT_GROUP_CAP};

/// Dense coefficient vector; index = exponent. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    /// `c · t^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `1 + t + ... + t^{len-1}`
    pub fn geometric(len: usize) -> Self {
        Self::new(vec![1; len])
    }

    /// `Σ_d t^d` over the given degrees.
    pub fn from_histogram<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut coeffs = Vec::new();
        for d in degrees {
            if coeffs.len() <= d {
                coeffs.resize(d + 1, 0);
            }
            coeffs[d] += 1;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Quotient and remainder by a divisor whose leading coefficient is `±1`.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> Result<(IntPolynomial, IntPolynomial)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Internal("division by the zero polynomial".into()))?;
        let lead = divisor.coeffs[dd];
        if lead.abs() != 1 {
            return Err(Error::Internal(
                "divisor must have unit leading coefficient".into(),
            ));
        }
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((Self::zero(), self.clone()));
        };
        let mut quot = vec![0i64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] * lead;
            quot[k] = c;
            if c != 0 {
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= c * dc;
                }
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a == 1 => {}
                _ => write!(f, "{a}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

fn one_minus_t_pow(k: usize) -> IntPolynomial {
    &IntPolynomial::one() - &IntPolynomial::monomial(1, k)
}

fn one_minus_t() -> IntPolynomial {
    one_minus_t_pow(1)
}

/// `Π_{i=1}^n (1 - t^{2i}) / (1 - t)^n`, the length generating function of
/// the hyperoctahedral group. Each factor is divided out exactly.
pub fn weyl_poincare(n: usize) -> Result<IntPolynomial> {
    check_rank(n)?;
    (1..=n).try_fold(IntPolynomial::one(), |acc, i| {
        Ok(&acc * &one_minus_t_pow(2 * i).div_exact(&one_minus_t())?)
    })
}

/// `Π_{i=1}^n (1 - t^i) / (1 - t)^n`, the length generating function of `S_n`.
pub fn sym_poincare(n: usize) -> Result<IntPolynomial> {
    check_rank(n)?;
    (1..=n).try_fold(IntPolynomial::one(), |acc, i| {
        Ok(&acc * &one_minus_t_pow(i).div_exact(&one_minus_t())?)
    })
}

/// `Π_{i=1}^n (1 + t^i)` expanded directly.
pub fn ideal_generating(n: usize) -> Result<IntPolynomial> {
    check_rank(n)?;
    Ok((1..=n).fold(IntPolynomial::one(), |acc, i| {
        &acc * &(&IntPolynomial::one() + &IntPolynomial::monomial(1, i))
    }))
}

/// The same generating function obtained as the exact quotient
/// `weyl_poincare(n) / sym_poincare(n)`.
pub fn ideal_generating_by_division(n: usize) -> Result<IntPolynomial> {
    weyl_poincare(n)?.div_exact(&sym_poincare(n)?)
}

/// Length histogram of the hyperoctahedral group by enumeration.
pub fn enumerated_weyl_lengths(n: usize, cap: usize) -> Result<IntPolynomial> {
    let group = WeylGroup::with_cap(n, cap)?;
    let top = n * n;
    let counts = (0..group.order())
        .into_par_iter()
        .fold(
            || vec![0i64; top + 1],
            |mut acc, i| {
                acc[group.element(i).length()] += 1;
                acc
            },
        )
        .reduce(
            || vec![0i64; top + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(IntPolynomial::new(counts))
}

/// Inversion-count histogram of `S_n` by enumeration.
pub fn enumerated_sym_lengths(n: usize) -> Result<IntPolynomial> {
    check_rank(n)?;
    Ok(IntPolynomial::from_histogram(
        Perm::all(n).iter().map(Perm::length),
    ))
}

/// Enumerated histograms against the closed formulas, the exact quotient,
/// the product identity and, within the cohomology cap, the Betti numbers.
pub fn verify_identities(n: usize) -> Result<VerificationReport> {
    let betti = if n <= DEFAULT_COHOMOLOGY_CAP {
        Some(betti_numbers(n)?)
    } else {
        None
    };
    verify_identities_with(n, DEFAULT_GROUP_CAP, betti.as_deref())
}

pub fn verify_identities_with(
    n: usize,
    group_cap: usize,
    betti: Option<&[u64]>,
) -> Result<VerificationReport> {
    let weyl = weyl_poincare(n)?;
    let sym = sym_poincare(n)?;
    let ideal = ideal_generating(n)?;
    let mut report = VerificationReport::new(n);

    let lengths = enumerated_weyl_lengths(n, group_cap)?;
    report.push(
        "poincare.weyl_lengths",
        "Σ_w t^{|Φ_w|} = Π(1 - t^{2i}) / (1 - t)^n",
        lengths == weyl,
        json!({ "enumerated": lengths, "formula": weyl }),
    );
    let sym_lengths = enumerated_sym_lengths(n)?;
    report.push(
        "poincare.sym_lengths",
        "Σ_σ t^{|Φ_σ|} = Π(1 - t^i) / (1 - t)^n",
        sym_lengths == sym,
        json!({ "enumerated": sym_lengths, "formula": sym }),
    );
    let dims = dimension_histogram(n)?;
    report.push(
        "poincare.ideal_dimensions",
        "#{abelian ideals of dim i} = [t^i] Π(1 + t^i)",
        dims == ideal,
        json!({ "enumerated": dims, "formula": ideal }),
    );
    let quotient = ideal_generating_by_division(n);
    report.push(
        "poincare.exact_division",
        "Π(1 + t^i) = weyl / sym with zero remainder",
        quotient.as_ref() == Ok(&ideal),
        match &quotient {
            Ok(q) => json!({ "quotient": q }),
            Err(e) => json!({ "error": e.to_string() }),
        },
    );
    let product = &sym * &ideal;
    report.push(
        "poincare.convolution",
        "dim H^i = Σ_{j+k=i} |S_n^(j)| · |I^(k)|",
        product == weyl,
        json!({ "product": product }),
    );
    if let Some(b) = betti {
        let as_poly = IntPolynomial::new(b.iter().map(|&v| v as i64).collect());
        report.push(
            "poincare.betti",
            "dim H^i(n) = #{w : |Φ_w| = i}",
            as_poly == weyl,
            json!({ "betti": b, "formula": weyl }),
        );
    }
    Ok(report)
}
