//! Symbolic audits of identities on `(H, ⋆)`.
//!
//! An audit instantiates each law variable as a generic element
//! `[2·h+ε, s, t]` for every parity pattern, evaluates both sides
//! symbolically and records the residual polynomials. Failing cases get a
//! numeric witness found by scanning small integer assignments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HuthnanceError, NumElement, Numeric, Result, SymElement, Symbolic};
use crate::carrier::InverseConvention;
use crate::identity::{builtin, eval_law, Env, EvalError, Law};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Witness scan box: every half and payload ranges over `-WITNESS_BOUND..=WITNESS_BOUND`.
pub const WITNESS_BOUND: i32 = 3;

/// Variable names per law variable, in law-variable order:
/// `(half, second, third)`.
const NAMES: [(&str, &str, &str); 4] = [("i", "k", "m"), ("j", "p", "q"), ("h", "r", "s"), ("g", "u", "w")];

/// Reference component strings for the odd case of the universality probe
/// `v·vv = v^λ\v·v` with `v = [2i+1, k, m]`.
const REFERENCE_LHS: [&str; 3] = ["6i+3", "m+2k-10i^3-12i^2-2i", "2m+k-10i^3-12i^2-i-1"];
const REFERENCE_RHS: [&str; 3] = ["6i+3", "m+2k-14i^3-18i^2-7i-1", "2m+k-14i^3-16i^2-6i-1"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Catalog name, or the law text for ad-hoc laws.
    pub identity: String,
    /// Fully parenthesized law.
    pub law: String,
    pub convention: InverseConvention,
    /// Law variables and the polynomial variables `[half, second, third]`
    /// standing for their components.
    pub variables: Vec<(char, [String; 3])>,
    pub cases: Vec<AuditCase>,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(|c| c.holds)
    }

    pub fn case(&self, parities: &[u8]) -> Option<&AuditCase> {
        self.cases.iter().find(|c| c.parities == parities)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCase {
    /// Parity of each law variable, in law-variable order.
    pub parities: Vec<u8>,
    pub lhs: [String; 3],
    pub rhs: [String; 3],
    pub residuals: [String; 3],
    pub holds: bool,
    /// First violating assignment (one `[a, k, m]` per law variable) in the
    /// lexicographic scan, when the case fails.
    pub witness: Option<Vec<[i64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_values: Option<WitnessValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessValues {
    pub lhs: [i64; 3],
    pub rhs: [i64; 3],
}

/// Comparison of computed components against independently known strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub lhs: [String; 3],
    pub rhs: [String; 3],
    pub lhs_matches: [bool; 3],
    pub rhs_matches: [bool; 3],
}

impl ReferenceCheck {
    pub fn all_match(&self) -> bool {
        self.lhs_matches.iter().chain(&self.rhs_matches).all(|&m| m)
    }

    /// Human-readable list of mismatching components.
    pub fn mismatches(&self) -> Vec<String> {
        let labels = ["first", "second", "third"];
        let mut out = Vec::new();
        for (side, refs, matches) in [("lhs", &self.lhs, &self.lhs_matches), ("rhs", &self.rhs, &self.rhs_matches)] {
            for idx in 0..3 {
                if !matches[idx] {
                    out.push(format!("{side} {} component differs from reference `{}`", labels[idx], refs[idx]));
                }
            }
        }
        out
    }
}

fn show<C: Scalar>(ps: &[Polynomial<C>; 3]) -> [String; 3] {
    [ps[0].to_string(), ps[1].to_string(), ps[2].to_string()]
}

fn eval_err<E: std::fmt::Display>(e: EvalError<E>) -> HuthnanceError {
    HuthnanceError::Eval(e.to_string())
}

fn lift<T>(r: std::result::Result<T, EvalError<HuthnanceError>>) -> Result<T> {
    match r {
        Ok(v) => Ok(v),
        Err(EvalError::Carrier(e)) => Err(e),
        Err(e) => Err(eval_err(e)),
    }
}

/// Audits an arbitrary law (at most four variables) on `(H, ⋆)` under `conv`.
pub fn audit_identity<C: Scalar>(name: &str, law: &Law, conv: InverseConvention) -> Result<AuditReport> {
    let vars = law.vars();
    if vars.len() > NAMES.len() {
        return Err(HuthnanceError::TooManyVariables { max: NAMES.len(), found: vars.len() });
    }
    let nv = vars.len();
    let cases = (0..1usize << nv)
        .into_par_iter()
        .map(|pattern| {
            // First law variable is the most significant bit.
            let parities: Vec<u8> = (0..nv).map(|idx| ((pattern >> (nv - 1 - idx)) & 1) as u8).collect();
            audit_case::<C>(law, &parities, conv)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport {
        identity: name.to_string(),
        law: law.to_string(),
        convention: conv,
        variables: vars
            .iter()
            .zip(NAMES)
            .map(|(&v, (h, s, t))| (v, [h.to_string(), s.to_string(), t.to_string()]))
            .collect(),
        cases,
    })
}

fn audit_case<C: Scalar>(law: &Law, parities: &[u8], conv: InverseConvention) -> Result<AuditCase> {
    let mut env = Env::new();
    for ((&v, &parity), (h, s, t)) in law.vars().iter().zip(parities).zip(NAMES) {
        env.bind(v, SymElement::<C>::generic(parity, h, s, t)?);
    }
    let (lhs, rhs) = lift(eval_law(law, &env, &Symbolic::<C>::new(), conv))?;
    let residuals = lhs.residual(&rhs)?;
    let holds = residuals.iter().all(Polynomial::is_zero);
    let (witness, witness_values) = if holds {
        (None, None)
    } else {
        match find_witness::<C>(law, parities, conv)? {
            Some((w, values)) => (Some(w), Some(values)),
            None => (None, None),
        }
    };
    Ok(AuditCase {
        parities: parities.to_vec(),
        lhs: show(&lhs.components()?),
        rhs: show(&rhs.components()?),
        residuals: show(&residuals),
        holds,
        witness,
        witness_values,
        reference: None,
    })
}

/// Scans `(half, second, third)` of each variable, in variable order, over the
/// witness box lexicographically and returns the first numeric violation.
fn find_witness<C: Scalar>(
    law: &Law,
    parities: &[u8],
    conv: InverseConvention,
) -> Result<Option<(Vec<[i64; 3]>, WitnessValues)>> {
    let carrier = Numeric::<C>::new();
    let slots = 3 * parities.len();
    let lo = -WITNESS_BOUND;
    let mut values = vec![lo; slots];
    let to_i64 = |x: &NumElement<C>| x.to_i64().ok_or(HuthnanceError::Overflow);
    loop {
        let mut env = Env::new();
        let mut elements = Vec::with_capacity(parities.len());
        for (idx, (&v, &parity)) in law.vars().iter().zip(parities).enumerate() {
            let [h, s, t] = [values[3 * idx], values[3 * idx + 1], values[3 * idx + 2]].map(C::from_small);
            let x = NumElement::from_parts(parity, &h, s, t)?;
            elements.push(to_i64(&x)?);
            env.bind(v, x);
        }
        let (l, r) = lift(eval_law(law, &env, &carrier, conv))?;
        if l != r {
            return Ok(Some((elements, WitnessValues { lhs: to_i64(&l)?, rhs: to_i64(&r)? })));
        }
        let mut idx = slots;
        loop {
            if idx == 0 {
                return Ok(None);
            }
            idx -= 1;
            values[idx] += 1;
            if values[idx] <= WITNESS_BOUND {
                break;
            }
            values[idx] = lo;
        }
    }
}

/// The known component strings for the odd probe case.
pub fn reference_lemma312() -> ([&'static str; 3], [&'static str; 3]) {
    (REFERENCE_LHS, REFERENCE_RHS)
}

/// Audits `v·(vv) = (v^λ\v)·v` with `v = [2i+ε, k, m]` for both parities. The
/// odd case additionally carries a comparison against the reference
/// components; mismatches are reported, not corrected.
pub fn audit_lemma312<C: Scalar>(conv: InverseConvention) -> Result<AuditReport> {
    let law = builtin("lemma312").expect("catalog entry");
    let mut report = audit_identity::<C>("lemma312", &law, conv)?;
    for case in &mut report.cases {
        if case.parities == [1] {
            let compare = |computed: &[String; 3], reference: [&str; 3]| -> Result<[bool; 3]> {
                let mut out = [false; 3];
                for idx in 0..3 {
                    let want: Polynomial<C> = reference[idx].parse()?;
                    let got: Polynomial<C> = computed[idx].parse()?;
                    out[idx] = want == got;
                }
                Ok(out)
            };
            case.reference = Some(ReferenceCheck {
                lhs: REFERENCE_LHS.map(String::from),
                rhs: REFERENCE_RHS.map(String::from),
                lhs_matches: compare(&case.lhs, REFERENCE_LHS)?,
                rhs_matches: compare(&case.rhs, REFERENCE_RHS)?,
            });
        }
    }
    Ok(report)
}

/// Audits Osborn's identity `x((yz)x) = (x((y·x^λ)x))(zx)` over all eight
/// parity patterns of `x, y, z`.
pub fn audit_osborn<C: Scalar>(conv: InverseConvention) -> Result<AuditReport> {
    let law = builtin("osborn").expect("catalog entry");
    audit_identity::<C>("osborn", &law, conv)
}
