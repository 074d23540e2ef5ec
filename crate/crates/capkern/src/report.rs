//! Report assembly and serialization. The structured rendering is stable
//! JSON with every number carried as a decimal string; the text rendering is
//! generated from the same data, so the two views always agree.

use num_bigint::BigInt;
use serde::Serialize;

use crate::capitulation::SequenceOutcome;
use crate::fgab::FgAbGroup;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSection {
    pub name: String,
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    pub order: String,
    pub structure: String,
}

pub fn group_section(name: &str, g: &FgAbGroup) -> GroupSection {
    GroupSection {
        name: name.to_string(),
        invariant_factors: g.invariant_factors().iter().map(BigInt::to_string).collect(),
        free_rank: g.free_rank(),
        order: g.order().map_or_else(|| "infinite".into(), |o| o.to_string()),
        structure: g.to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapSection {
    pub name: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessLine {
    pub node: String,
    pub composition_is_zero: bool,
    pub kernel_equals_image: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckSection {
    pub kernel_order: String,
    pub h1_units_order: String,
    pub isomorphism_verified: bool,
    pub resolvent_verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollarySection {
    pub isomorphism_holds: bool,
    pub kernel_order: String,
    pub unit_index: String,
    pub bound_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceSection {
    pub rendered: String,
    pub terms: Vec<GroupSection>,
    pub maps: Vec<MapSection>,
    pub exactness: Vec<ExactnessLine>,
    pub all_exact: bool,
    pub n_torsion_ok: bool,
    pub cross_check: CrossCheckSection,
    pub corollary: Option<CorollarySection>,
    pub norm_compatibility_ok: bool,
    pub kernel_witnesses: Vec<WitnessLine>,
    pub convention: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessLine {
    pub ideal: String,
    pub generator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: String,
    pub fixture: String,
    pub command: String,
    pub seed: u64,
    pub height_bound: i64,
    pub precision_start: u32,
    pub precision_ceiling: u32,
    /// Highest interval precision any unit recovery needed during the run.
    pub precision_used: u32,
    pub validation: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_groups: Option<Vec<GroupSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_ranks: Option<Vec<CheckLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<GroupSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<GroupSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_witnesses: Option<Vec<WitnessLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Vec<CheckLine>>,
    /// Whether Ψ satisfies a local-global principle is not computed by this
    /// tool; carried as metadata only.
    pub hasse_principle_for_psi: String,
}

impl Report {
    pub fn new(fixture: &str, command: &str, seed: u64, height_bound: i64, prec: (u32, u32)) -> Report {
        Report {
            format_version: FORMAT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            fixture: fixture.to_string(),
            command: command.to_string(),
            seed,
            height_bound,
            precision_start: prec.0,
            precision_ceiling: prec.1,
            precision_used: prec.0,
            validation: Vec::new(),
            class_groups: None,
            unit_ranks: None,
            cohomology: None,
            kernel: None,
            kernel_witnesses: None,
            sequence: None,
            expectations: None,
            hasse_principle_for_psi: "open question; not computed".to_string(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.validation.iter().all(|c| c.passed)
            && self.expectations.as_ref().is_none_or(|e| e.iter().all(|c| c.passed))
            && self.sequence.as_ref().is_none_or(|s| s.all_exact && s.n_torsion_ok)
    }

    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        p(&mut out, format!("fixture {} — {} (tool {}, format {})", self.fixture, self.command, self.tool_version, self.format_version));
        p(&mut out, format!(
            "seed {}  height-bound {}  precision {}..{} (used {})",
            self.seed, self.height_bound, self.precision_start, self.precision_ceiling,
            self.precision_used
        ));
        p(&mut out, "validation:".into());
        for c in &self.validation {
            p(&mut out, format!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
        }
        if let Some(cgs) = &self.class_groups {
            p(&mut out, "class groups:".into());
            for g in cgs {
                p(&mut out, format!("  {}: {} (order {})", g.name, g.structure, g.order));
            }
        }
        if let Some(units) = &self.unit_ranks {
            p(&mut out, "units:".into());
            for c in units {
                p(&mut out, format!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
            }
        }
        if let Some(cohs) = &self.cohomology {
            p(&mut out, "cohomology:".into());
            for g in cohs {
                p(&mut out, format!("  {}: {} (order {})", g.name, g.structure, g.order));
            }
        }
        if let Some(k) = &self.kernel {
            p(&mut out, format!("capitulation kernel: {} (order {})", k.structure, k.order));
        }
        if let Some(ws) = &self.kernel_witnesses {
            for w in ws {
                p(&mut out, format!("  witness: {} extends to ({})", w.ideal, w.generator));
            }
        }
        if let Some(seq) = &self.sequence {
            p(&mut out, "five-term sequence:".into());
            p(&mut out, format!("  {}", seq.rendered));
            for (i, t) in seq.terms.iter().enumerate() {
                p(&mut out, format!("  term {}: {} = {} (order {})", i + 1, t.name, t.structure, t.order));
            }
            for e in &seq.exactness {
                p(&mut out, format!(
                    "  node {}: composition zero: {}, Ker = Im: {}",
                    e.node, e.composition_is_zero, e.kernel_equals_image
                ));
            }
            p(&mut out, format!("  all nodes exact: {}", seq.all_exact));
            p(&mut out, format!("  every term killed by n: {}", seq.n_torsion_ok));
            p(&mut out, format!(
                "  cross-check |Ker j| = |H^1(Δ, U_K)|: {} = {} (isomorphism verified: {}, resolvent: {})",
                seq.cross_check.kernel_order,
                seq.cross_check.h1_units_order,
                seq.cross_check.isomorphism_verified,
                seq.cross_check.resolvent_verified
            ));
            if let Some(cor) = &seq.corollary {
                p(&mut out, format!(
                    "  corollary (odd n, trivial mu_n): Ker j ≅ Ψ-quotient: {}; |Ker j| = {} ≤ [U_K : U_F·U_K^n] = {}: {}",
                    cor.isomorphism_holds, cor.kernel_order, cor.unit_index, cor.bound_holds
                ));
            }
            p(&mut out, format!("  norm compatibility (restriction–corestriction): {}", seq.norm_compatibility_ok));
            for w in &seq.kernel_witnesses {
                p(&mut out, format!("  kernel witness: {} — generator {}", w.ideal, w.generator));
            }
            p(&mut out, format!("  sign convention: {}", seq.convention));
        }
        if let Some(exp) = &self.expectations {
            p(&mut out, "expectations:".into());
            for c in exp {
                p(&mut out, format!("  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
            }
        }
        p(&mut out, format!("Ψ Hasse principle: {}", self.hasse_principle_for_psi));
        out
    }
}

/// Render the five-term sequence as a one-line diagram with the maps named.
pub fn render_sequence(out: &SequenceOutcome) -> String {
    let mut s = String::from("0 → ");
    for (i, t) in out.terms.iter().enumerate() {
        s.push_str(&t.to_string());
        if i < 4 {
            s.push_str(&format!(" —{}→ ", out.map_names[i]));
        }
    }
    s
}

/// Build the sequence section of a report from a pipeline outcome.
pub fn sequence_section(out: &SequenceOutcome) -> SequenceSection {
    let node_names = ["term1", "term2", "term3", "term4"];
    let all_exact = out.exactness.iter().all(|v| v.kernel_equals_image);
    let corollary = out.corollary.as_ref().map(|c| CorollarySection {
        isomorphism_holds: c.isomorphism_holds,
        kernel_order: c.kernel_order.to_string(),
        unit_index: c.unit_index.to_string(),
        bound_holds: c.kernel_order <= c.unit_index,
    });
    SequenceSection {
        rendered: render_sequence(out),
        terms: out
            .terms
            .iter()
            .zip(out.term_names)
            .map(|(t, n)| group_section(n, t))
            .collect(),
        maps: out
            .maps
            .iter()
            .zip(out.map_names)
            .map(|(m, n)| MapSection {
                name: n.to_string(),
                matrix: (0..m.matrix().rows())
                    .map(|r| m.matrix().row(r).iter().map(BigInt::to_string).collect())
                    .collect(),
            })
            .collect(),
        exactness: out
            .exactness
            .iter()
            .map(|v| ExactnessLine {
                node: node_names[v.node].to_string(),
                composition_is_zero: v.composition_is_zero,
                kernel_equals_image: v.kernel_equals_image,
            })
            .collect(),
        all_exact,
        n_torsion_ok: out.n_torsion_ok,
        cross_check: CrossCheckSection {
            kernel_order: out.cross_check.kernel_order.to_string(),
            h1_units_order: out.cross_check.h1_units_order.to_string(),
            isomorphism_verified: out.cross_check.isomorphism_verified,
            resolvent_verified: out.cross_check.resolvent_verified,
        },
        corollary,
        norm_compatibility_ok: out.norm_compatibility_ok,
        kernel_witnesses: out
            .kernel_witnesses
            .iter()
            .map(|(i, g)| WitnessLine { ideal: i.clone(), generator: g.clone() })
            .collect(),
        convention: out.convention.to_string(),
    }
}
