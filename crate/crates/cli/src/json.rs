//! JSON encodings of the library's report types.
//!
//! Every encoder returns a [`serde_json::Value`] whose objects use
//! sorted keys, so a serialized report is byte-stable for a fixed input.
//! Polynomials are embedded in canonical text form (the same text the
//! CLI accepts back as input whenever the coefficients are single
//! terms), cycle types as arrays of descending part sizes, and enum-like
//! data as objects with a discriminating `type`/`status`/`kind` field.

use std::collections::BTreeMap;

use odoni_core::bipoly::{bp_render, BiPoly, IrreducibilityWitness, OneSided};
use odoni_core::certify::{
    Certificate, CertificateKind, ChainMinpoly, ChainState, LevelWitness, NormWitness,
};
use odoni_core::chebotarev::{
    ComparisonReport, ComparisonVerdict, ExtensionSlice, ReferenceKind, SampleReport,
};
use odoni_core::checks::{
    BasicReport, Collision, Conclusion, CriticalPoint, MorseReport, OrbitPrimeTable,
    OrbitRecord, PrimeDivisorRecord, SeparationReport, Verdict,
};
use odoni_core::factor::Factorization;
use odoni_core::ff::{Fe, FieldSpec};
use odoni_core::poly::{render_fe_poly, Poly};
use serde_json::{json, Value};

/// Canonical text of a univariate polynomial in `t`.
pub fn poly_text(field: &FieldSpec, a: &Poly<Fe>) -> String {
    render_fe_poly(field, a, 't')
}

/// Canonical text of a bivariate polynomial (inner `t`, outer `x`).
pub fn bipoly_text(field: &FieldSpec, f: &BiPoly) -> String {
    bp_render(field, f)
}

/// Canonical text with the outer variable renamed (`y`, `s`, `z`, ...).
/// The canonical form only ever uses `t` inside coefficients, so a
/// plain character substitution is unambiguous.
pub fn outer_var_text(field: &FieldSpec, f: &BiPoly, var: char) -> String {
    bp_render(field, f).replace('x', &var.to_string())
}

/// `[3, 1]` as the compact `3+1` used in CSV tables.
pub fn cycle_type_text(parts: &[u64]) -> String {
    parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+")
}

/// The CLI restricts coefficient fields to prime `F_p`, where an
/// element is a plain residue.
fn scalar_u64(e: &Fe) -> u64 {
    e.coeffs().first().copied().unwrap_or(0)
}

pub fn factorization_value(field: &FieldSpec, fac: &Factorization) -> Value {
    json!({
        "unit": scalar_u64(&fac.unit),
        "factors": fac
            .factors
            .iter()
            .map(|(g, e)| json!({ "factor": poly_text(field, g), "multiplicity": e }))
            .collect::<Vec<_>>(),
    })
}

pub fn witness_value(field: &FieldSpec, w: &IrreducibilityWitness) -> Value {
    match w {
        IrreducibilityWitness::LinearInX => json!({ "type": "linear-in-x" }),
        IrreducibilityWitness::Eisenstein { prime } => json!({
            "type": "eisenstein",
            "prime": poly_text(field, prime),
        }),
        IrreducibilityWitness::Specialization { m, modulus, point } => json!({
            "type": "specialization",
            "m": m,
            "modulus": modulus,
            "point": point,
        }),
    }
}

pub fn oneside_value(field: &FieldSpec, o: &OneSided) -> Value {
    match o {
        OneSided::Irreducible(w) => json!({
            "status": "irreducible",
            "witness": witness_value(field, w),
        }),
        OneSided::Unknown => json!({ "status": "unknown" }),
    }
}

fn norm_witness_value(field: &FieldSpec, w: &NormWitness) -> Value {
    match w {
        NormWitness::Irreducible(inner) => witness_value(field, inner),
        NormWitness::DegreeObstruction { m, modulus, point, block } => json!({
            "type": "degree-obstruction",
            "m": m,
            "modulus": modulus,
            "point": point,
            "block": block,
        }),
    }
}

fn level_witness_value(field: &FieldSpec, w: &LevelWitness) -> Value {
    json!({
        "level": w.level,
        "quotient_degree": w.quotient_degree,
        "shift": w.shift,
        "norm_degree": w.norm_degree,
        "witness": norm_witness_value(field, &w.witness),
    })
}

fn chain_minpoly_value(field: &FieldSpec, m: &ChainMinpoly) -> Value {
    json!({
        "numerators": m
            .numerators
            .iter()
            .map(|g| outer_var_text(field, g, 'z'))
            .collect::<Vec<_>>(),
        "denominator": poly_text(field, &m.denominator),
        "degree": m.degree(),
    })
}

fn chain_value(field: &FieldSpec, c: &ChainState) -> Value {
    json!({
        "level": c.level,
        "minpolys": c.minpolys.iter().map(|m| chain_minpoly_value(field, m)).collect::<Vec<_>>(),
        "current": chain_minpoly_value(field, &c.current),
    })
}

pub fn certificate_value(field: &FieldSpec, c: &Certificate) -> Value {
    let kind = match &c.kind {
        CertificateKind::FullSymmetric { order } => json!({
            "type": "full-symmetric",
            "order": order,
        }),
        CertificateKind::IterateIrreducible { n } => json!({
            "type": "iterate-irreducible",
            "n": n,
        }),
        CertificateKind::Inconclusive { level, reason } => json!({
            "type": "inconclusive",
            "level": level,
            "reason": reason,
        }),
    };
    json!({
        "kind": kind,
        "witnesses": c.witnesses.iter().map(|w| level_witness_value(field, w)).collect::<Vec<_>>(),
        "chain": c.chain.as_ref().map(|ch| chain_value(field, ch)),
    })
}

fn basic_value(field: &FieldSpec, b: &BasicReport) -> Value {
    json!({
        "monic_in_x": b.monic_in_x,
        "degree_x": b.degree_x,
        "degree_above_two": b.degree_above_two,
        "characteristic_odd": b.characteristic_odd,
        "tame_degree": b.tame_degree,
        "discriminant": poly_text(field, &b.discriminant),
        "discriminant_factored": b
            .discriminant_factored
            .as_ref()
            .map(|f| factorization_value(field, f)),
        "separable": b.separable,
        "irreducibility": oneside_value(field, &b.irreducibility),
        "failures": b.failures,
    })
}

pub fn critical_point_value(field: &FieldSpec, cp: &CriticalPoint) -> Value {
    json!({
        "minpoly": bipoly_text(field, &cp.minpoly),
        "multiplicity": cp.multiplicity,
        "rational_root": cp.rational_root.as_ref().map(|r| poly_text(field, r)),
    })
}

fn morse_value(field: &FieldSpec, m: &MorseReport) -> Value {
    json!({
        "morse": m.morse,
        "nondegenerate": m.nondegenerate,
        "distinct_critical_values": m.distinct_critical_values,
        "critical_value_resultant": outer_var_text(field, &m.critical_value_resultant, 's'),
    })
}

fn collision_value(field: &FieldSpec, c: &Collision) -> Value {
    json!({
        "a_index": c.a_index,
        "l": c.l,
        "b_index": c.b_index,
        "m": c.m,
        "value_a": c.value_a.as_ref().map(|v| poly_text(field, v)),
        "value_b": c.value_b.as_ref().map(|v| poly_text(field, v)),
    })
}

fn orbit_record_value(field: &FieldSpec, r: &OrbitRecord) -> Value {
    json!({
        "source_minpoly": bipoly_text(field, &r.source.minpoly),
        "level": r.level,
        "rl": outer_var_text(field, &r.rl, 'y'),
    })
}

fn separation_value(field: &FieldSpec, s: &SeparationReport) -> Value {
    json!({
        "separated": s.separated,
        "first_collision": s.first_collision.as_ref().map(|c| collision_value(field, c)),
        "records": s.records.iter().map(|r| orbit_record_value(field, r)).collect::<Vec<_>>(),
        "conjugate_reading_fails": s.conjugate_reading_fails,
    })
}

fn prime_record_value(field: &FieldSpec, r: &PrimeDivisorRecord) -> Value {
    json!({
        "prime": poly_text(field, &r.prime),
        "level": r.level,
        "valuation": r.valuation,
        "primitive": r.primitive,
        "squarefree_primitive": r.squarefree_primitive,
        "coprime_to_shape_b": r.coprime_to_shape_b,
    })
}

pub fn orbit_table_value(field: &FieldSpec, t: &OrbitPrimeTable) -> Value {
    json!({
        "critical_point_index": t.critical_point_index,
        "gamma": poly_text(field, &t.gamma),
        "level_values": t.level_values.iter().map(|v| poly_text(field, v)).collect::<Vec<_>>(),
        "records": t.records.iter().map(|r| prime_record_value(field, r)).collect::<Vec<_>>(),
        "note": t.note,
    })
}

pub fn conclusion_value(c: &Conclusion) -> Value {
    match c {
        Conclusion::HypothesesHold(n) => json!({ "status": "hypotheses-hold", "level": n }),
        Conclusion::Fails(reasons) => json!({ "status": "fails", "reasons": reasons }),
        Conclusion::Inconclusive(reasons) => json!({
            "status": "inconclusive",
            "reasons": reasons,
        }),
    }
}

pub fn verdict_value(field: &FieldSpec, v: &Verdict) -> Value {
    json!({
        "basic": basic_value(field, &v.basic),
        "morse": v.morse.as_ref().map(|m| morse_value(field, m)),
        "critical_points": v
            .critical_points
            .iter()
            .map(|cp| critical_point_value(field, cp))
            .collect::<Vec<_>>(),
        "multiplicity_one_exists": v.multiplicity_one_exists,
        "separation": v.separation.as_ref().map(|s| separation_value(field, s)),
        "orbit_primes": v.orbit_primes.iter().map(|t| orbit_table_value(field, t)).collect::<Vec<_>>(),
        "iterate_certificates": v
            .iterate_certificates
            .iter()
            .map(|c| certificate_value(field, c))
            .collect::<Vec<_>>(),
        "predicted_order": v.predicted_order.as_ref().map(|o| o.to_string()),
        "conclusion": conclusion_value(&v.conclusion),
    })
}

/// Cycle-type counts as a deterministic array (keys ascend
/// lexicographically, the map's native order).
pub fn counts_value(counts: &BTreeMap<Vec<u64>, u64>) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|(ty, c)| json!({ "cycle_type": ty, "count": c }))
            .collect(),
    )
}

fn slice_value(s: &ExtensionSlice) -> Value {
    json!({
        "m": s.m,
        "modulus": s.modulus,
        "attempted": s.attempted,
        "excluded": s.excluded,
        "counts": counts_value(&s.counts),
    })
}

pub fn sample_report_value(field: &FieldSpec, r: &SampleReport) -> Value {
    json!({
        "polynomial": bipoly_text(field, &r.spec.f),
        "n": r.spec.n,
        "samples": r.spec.samples,
        "m_lo": r.spec.m_lo,
        "m_hi": r.spec.m_hi,
        "seed": r.spec.seed,
        "counts": counts_value(&r.counts),
        "attempted": r.attempted,
        "excluded": r.excluded,
        "usable": r.usable(),
        "per_m": r.per_m.iter().map(slice_value).collect::<Vec<_>>(),
        "escalated": r.escalated,
    })
}

pub fn comparison_value(r: &ComparisonReport) -> Value {
    let verdict = match r.verdict {
        ComparisonVerdict::ConsistentWithFullWreath { tolerance } => json!({
            "status": "consistent-with-full-wreath",
            "tolerance": tolerance,
        }),
        ComparisonVerdict::Inconsistent => json!({ "status": "inconsistent" }),
        ComparisonVerdict::InsufficientData => json!({ "status": "insufficient-data" }),
    };
    let reference = match &r.reference {
        ReferenceKind::Exact => json!({ "kind": "exact" }),
        ReferenceKind::MonteCarlo { samples, seed } => json!({
            "kind": "monte-carlo",
            "samples": samples,
            "seed": seed,
        }),
    };
    json!({
        "usable_samples": r.usable_samples,
        "reference": reference,
        "reference_distribution": r
            .reference_distribution
            .iter()
            .map(|(ty, p)| json!({ "cycle_type": ty, "probability": p }))
            .collect::<Vec<_>>(),
        "tv_distance": r.tv_distance,
        "chi_square": r.chi_square,
        "degrees_of_freedom": r.degrees_of_freedom,
        "irreducible_observed": r.irreducible_observed,
        "irreducible_expected": r.irreducible_expected,
        "verdict": verdict,
    })
}

/// Exact cycle-type distribution (reduced fractions) as a table.
pub fn exact_distribution_value(dist: &BTreeMap<Vec<u64>, (u64, u64)>) -> Value {
    Value::Array(
        dist.iter()
            .map(|(ty, (num, den))| json!({
                "cycle_type": ty,
                "numerator": num,
                "denominator": den,
            }))
            .collect(),
    )
}

/// Sampled cycle-type counts with empirical frequencies.
pub fn sampled_distribution_value(dist: &BTreeMap<Vec<u64>, u64>, samples: u64) -> Value {
    debug_assert!(samples > 0, "frequency needs at least one sample");
    Value::Array(
        dist.iter()
            .map(|(ty, c)| json!({
                "cycle_type": ty,
                "count": c,
                "frequency": *c as f64 / samples as f64,
            }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use odoni_core::bipoly::bp_from_coeffs;
    use odoni_core::certify::{certify_full_symmetric, CertificateKind};
    use odoni_core::checks::{check_odoni, SearchBudget};
    use odoni_core::poly::PolyRing;

    fn f5() -> FieldSpec {
        FieldSpec::prime_field(5).unwrap()
    }

    /// Bivariate from rows of ascending `t`-coefficients, one row per
    /// ascending `x`-power.
    fn bp(field: &FieldSpec, rows: &[&[u64]]) -> BiPoly {
        let tr = PolyRing::new(field);
        let coeffs = rows
            .iter()
            .map(|row| tr.from_coeffs(row.iter().map(|&c| field.scalar(c)).collect()))
            .collect();
        bp_from_coeffs(field, coeffs)
    }

    #[test]
    fn renders_cycle_types_and_renamed_variables() {
        assert_eq!(cycle_type_text(&[3, 1]), "3+1");
        assert_eq!(cycle_type_text(&[9]), "9");
        let field = f5();
        let g = bp(&field, &[&[0, 1], &[1]]); // x + t, read as y + t
        assert_eq!(outer_var_text(&field, &g, 'y'), "y + t");
        assert_eq!(bipoly_text(&field, &g), "x + t");
    }

    #[test]
    fn verdicts_carry_their_failure_reasons() {
        let field = f5();
        let f = bp(&field, &[&[0, 1], &[], &[1]]); // x^2 + t
        let v = check_odoni(&field, &f, 1, &SearchBudget::default(), 0);
        let val = verdict_value(&field, &v);
        assert_eq!(val["conclusion"]["status"], "fails");
        assert_eq!(val["conclusion"]["reasons"][0], "d > 2");
        assert_eq!(val["basic"]["degree_x"], 2);
        assert_eq!(val["basic"]["monic_in_x"], true);
        assert!(val["predicted_order"].is_string());
        // Objects serialize with sorted keys, so reports are byte-stable.
        let text = serde_json::to_string(&val).unwrap();
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&reparsed).unwrap(), text);
    }

    #[test]
    fn certificates_mirror_their_struct() {
        let field = f5();
        let f = bp(&field, &[&[0, 1], &[0, 1], &[], &[1]]); // x^3 + t*x + t
        let cert = certify_full_symmetric(&field, &f, &SearchBudget::default());
        assert!(matches!(cert.kind, CertificateKind::FullSymmetric { order: 6 }));
        let val = certificate_value(&field, &cert);
        assert_eq!(val["kind"]["type"], "full-symmetric");
        assert_eq!(val["kind"]["order"], 6);
        assert_eq!(val["witnesses"].as_array().unwrap().len(), cert.witnesses.len());
        let chain = cert.chain.as_ref().unwrap();
        assert_eq!(val["chain"]["level"], chain.level);
        assert_eq!(
            val["chain"]["minpolys"].as_array().unwrap().len(),
            chain.minpolys.len()
        );
        assert_eq!(val["chain"]["current"]["degree"], chain.current.degree());
    }
}
