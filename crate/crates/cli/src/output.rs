//! JSON output types. Polynomials render as canonical expression strings;
//! field order is fixed by the struct definitions, so output is
//! byte-stable for fixed inputs.

use foliation_core::first_integrals::FirstIntegralAlgebra;
use foliation_core::quotient::{Atlas, Chart, LeafReport, Separatedness, TransitionMap};
use foliation_core::stability::{StabilityCertificate, Verdict};
use serde::Serialize;

#[derive(Serialize)]
pub struct VerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Verified => VerdictJson {
                status: "verified".into(),
                witness: None,
                reason: None,
            },
            Verdict::Refuted { witness } => VerdictJson {
                status: "refuted".into(),
                witness: Some(witness.clone()),
                reason: None,
            },
            Verdict::Unknown { reason } => VerdictJson {
                status: "unknown".into(),
                witness: None,
                reason: Some(reason.clone()),
            },
        }
    }
}

#[derive(Serialize)]
pub struct InvolutiveJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub rank: usize,
    pub corank: usize,
}

#[derive(Serialize)]
pub struct AlgebraJson {
    pub chart: String,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    pub degree_bound: u32,
    pub complete: bool,
}

pub fn algebra_json(chart: &str, alg: &FirstIntegralAlgebra) -> AlgebraJson {
    AlgebraJson {
        chart: chart.to_string(),
        generators: alg.generators().iter().map(|g| g.to_string()).collect(),
        relations: alg
            .relations()
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect(),
        degree_bound: alg.degree_bound(),
        complete: alg.is_complete(),
    }
}

#[derive(Serialize)]
pub struct DimensionJson {
    pub expected: usize,
    pub computed: usize,
    pub verdict: VerdictJson,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub chart: String,
    pub invariant: VerdictJson,
    pub smooth: VerdictJson,
    pub relative_dimension: DimensionJson,
    pub connected_fibres: VerdictJson,
    pub overall: VerdictJson,
}

pub fn certificate_json(cert: &StabilityCertificate) -> CertificateJson {
    CertificateJson {
        chart: cert.chart_id.clone(),
        invariant: (&cert.invariant).into(),
        smooth: (&cert.smooth).into(),
        relative_dimension: DimensionJson {
            expected: cert.relative_dimension.expected,
            computed: cert.relative_dimension.computed,
            verdict: (&cert.relative_dimension.verdict).into(),
        },
        connected_fibres: (&cert.connected_fibres).into(),
        overall: (&cert.overall).into(),
    }
}

#[derive(Serialize)]
pub struct InvarianceJson {
    pub invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_variable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_class: Option<String>,
}

#[derive(Serialize)]
pub struct ChartJson {
    pub id: String,
    pub denominator: String,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    pub complete: bool,
    pub certificate: CertificateJson,
}

#[derive(Serialize)]
pub struct TransitionJson {
    pub from: String,
    pub to: String,
    pub overlap_generators: Vec<String>,
    pub overlap_relations: Vec<String>,
    pub localizer_from: String,
    pub localizer_to: String,
    /// images of the `to`-side generators over the localised tag ring
    /// `Q[t1..t{m+1}]`: tags `t1..tm` are the `from`-side generators and
    /// `t{m+1}` stands for `1/localizer_from`
    pub images: Vec<String>,
}

#[derive(Serialize)]
pub struct SeparatedJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct AtlasJson {
    pub schema_version: u32,
    pub charts: Vec<ChartJson>,
    pub transitions: Vec<TransitionJson>,
    pub cocycle_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_witness: Option<String>,
    pub separated: SeparatedJson,
    pub classification: String,
}

fn chart_json(chart: &Chart) -> ChartJson {
    ChartJson {
        id: chart.id.clone(),
        denominator: chart.denominator.to_string(),
        generators: chart
            .algebra
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect(),
        relations: chart
            .algebra
            .relations()
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect(),
        complete: chart.algebra.is_complete(),
        certificate: certificate_json(&chart.certificate),
    }
}

fn transition_json(t: &TransitionMap) -> TransitionJson {
    TransitionJson {
        from: t.from.clone(),
        to: t.to.clone(),
        overlap_generators: t
            .overlap_algebra
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect(),
        overlap_relations: t
            .overlap_algebra
            .relations()
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect(),
        localizer_from: t.localizer_from.to_string(),
        localizer_to: t.localizer_to.to_string(),
        images: t.images.iter().map(|p| p.to_string()).collect(),
    }
}

pub fn atlas_json(atlas: &Atlas) -> AtlasJson {
    let mut transitions: Vec<&TransitionMap> = atlas.transitions.iter().collect();
    transitions.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    AtlasJson {
        schema_version: 1,
        charts: atlas.charts.iter().map(chart_json).collect(),
        transitions: transitions.into_iter().map(transition_json).collect(),
        cocycle_ok: atlas.cocycle_ok,
        cocycle_witness: atlas.cocycle_witness.clone(),
        separated: match &atlas.separated {
            Separatedness::Yes => SeparatedJson {
                verdict: "yes".into(),
                pair: None,
                witness: None,
            },
            Separatedness::No { pair, witness } => SeparatedJson {
                verdict: "no".into(),
                pair: Some(pair.clone()),
                witness: Some(witness.to_string()),
            },
        },
        classification: atlas.classification.clone(),
    }
}

#[derive(Serialize)]
pub struct LeafJson {
    pub chart: String,
    pub point: Vec<String>,
    pub ideal: Vec<String>,
    pub dimension: Option<usize>,
    pub expected_dimension: usize,
    pub smooth: bool,
    pub irreducible: Option<bool>,
    pub tangent: bool,
    pub passes: bool,
}

pub fn leaf_json(report: &LeafReport) -> LeafJson {
    LeafJson {
        chart: report.chart_id.clone(),
        point: report.point.iter().map(|c| c.to_string()).collect(),
        ideal: report.ideal.iter().map(|g| g.to_string()).collect(),
        dimension: report.dimension,
        expected_dimension: report.expected_dimension,
        smooth: report.smooth,
        irreducible: report.irreducible,
        tangent: report.tangent,
        passes: report.passes(),
    }
}

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}
