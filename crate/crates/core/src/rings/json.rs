use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::{Field, PrimeField, Rationals};
use crate::steenrod::Prime;

use super::{validate, GradedAlgebra, RingError, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Prime { p: u32 },
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub i: usize,
    pub a: usize,
    pub j: usize,
    pub b: usize,
    pub coords: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteenrodEntry {
    pub op: String,
    pub k: u64,
    pub from_deg: usize,
    pub matrix: Vec<Vec<Value>>,
}

/// On-disk form of a ring. Omitted products are zero; rationals are
/// written as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steenrod: Option<Vec<SteenrodEntry>>,
    #[serde(default)]
    pub poincare: bool,
}

fn schema<T>(msg: impl Into<String>) -> Result<T, RingError> {
    Err(RingError::Schema(msg.into()))
}

impl<F: Field> GradedAlgebra<F> {
    pub fn from_literal(field: F, lit: &RingLiteral) -> Result<Self, RingError> {
        if lit.dims.len() != lit.n + 1 {
            return schema(format!("dims has {} entries, expected n + 1 = {}", lit.dims.len(), lit.n + 1));
        }
        let name = lit.name.clone().unwrap_or_else(|| "ring".to_string());
        let mut alg = GradedAlgebra::zero_tables(field.clone(), lit.dims.clone(), name)?;
        let coords = |vals: &[Value]| -> Result<Vec<F::Elem>, RingError> {
            vals.iter().map(|v| field.from_json(v).map_err(RingError::Schema)).collect()
        };
        for e in &lit.products {
            if e.i > lit.n || e.j > lit.n {
                return schema(format!("product degree out of range: ({}, {})", e.i, e.j));
            }
            alg.set_product(e.i, e.a, e.j, e.b, coords(&e.coords)?)?;
        }
        if let Some(labels) = &lit.labels {
            alg.set_labels(labels.clone())?;
        }
        alg.set_poincare(lit.poincare);
        if let Some(entries) = &lit.steenrod {
            let p = field
                .prime()
                .ok_or_else(|| RingError::Schema("Steenrod tables need a prime field".into()))?;
            alg.enable_steenrod()?;
            for e in entries {
                match (e.op.as_str(), p.is_two()) {
                    ("Sq", true) | ("P", false) => {}
                    ("Sq", false) => return schema(format!("Sq tables need p = 2, ring is over Z_{p}")),
                    ("P", true) => return schema("P tables need an odd prime; use Sq at p = 2"),
                    (other, _) => return schema(format!("unknown operation {other:?}")),
                }
                if e.from_deg > lit.n {
                    return schema(format!("from_deg {} exceeds n", e.from_deg));
                }
                let m = e.matrix.iter().map(|r| coords(r)).collect::<Result<Vec<_>, _>>()?;
                alg.set_steenrod(e.k, e.from_deg, m)?;
            }
        }
        Ok(alg)
    }

    pub fn to_literal(&self) -> RingLiteral {
        let f = self.field();
        let mut products = Vec::new();
        let n = self.n();
        for i in 0..=n {
            for a in 0..self.dim(i) {
                for j in 0..=n - i {
                    for b in 0..self.dim(j) {
                        let c = self.basis_product(i, a, j, b).unwrap();
                        if c.iter().all(|v| f.is_zero(v)) {
                            continue;
                        }
                        products.push(ProductEntry { i, a, j, b, coords: c.iter().map(|v| f.to_json(v)).collect() });
                    }
                }
            }
        }
        let steenrod = self.steenrod_tables().map(|tables| {
            let op = if self.prime().map(Prime::is_two).unwrap_or(false) { "Sq" } else { "P" };
            tables
                .iter()
                .map(|(&(k, from_deg), m)| SteenrodEntry {
                    op: op.to_string(),
                    k,
                    from_deg,
                    matrix: m.iter().map(|r| r.iter().map(|v| f.to_json(v)).collect()).collect(),
                })
                .collect()
        });
        let field = match self.prime() {
            Some(p) => FieldSpec::Prime { p: p.get() },
            None => FieldSpec::Named("Q".to_string()),
        };
        RingLiteral {
            name: Some(self.name().to_string()),
            n,
            field,
            dims: self.dims().to_vec(),
            labels: Some(self.labels().to_vec()),
            products,
            steenrod,
            poincare: self.poincare(),
        }
    }
}

/// A ring over either supported coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAlgebra {
    Fp(GradedAlgebra<PrimeField>),
    Q(GradedAlgebra<Rationals>),
}

impl From<GradedAlgebra<PrimeField>> for AnyAlgebra {
    fn from(a: GradedAlgebra<PrimeField>) -> Self {
        AnyAlgebra::Fp(a)
    }
}

impl From<GradedAlgebra<Rationals>> for AnyAlgebra {
    fn from(a: GradedAlgebra<Rationals>) -> Self {
        AnyAlgebra::Q(a)
    }
}

impl AnyAlgebra {
    pub fn from_literal(lit: &RingLiteral) -> Result<Self, RingError> {
        match &lit.field {
            FieldSpec::Prime { p } => {
                let p = Prime::new(*p).map_err(|e| RingError::Schema(e.to_string()))?;
                Ok(AnyAlgebra::Fp(GradedAlgebra::from_literal(PrimeField(p), lit)?))
            }
            FieldSpec::Named(s) if s == "Q" => Ok(AnyAlgebra::Q(GradedAlgebra::from_literal(Rationals, lit)?)),
            FieldSpec::Named(s) => schema(format!("unknown field {s:?}; use {{\"p\": int}} or \"Q\"")),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, RingError> {
        let lit: RingLiteral = serde_json::from_str(text).map_err(|e| RingError::Schema(e.to_string()))?;
        Self::from_literal(&lit)
    }

    pub fn to_literal(&self) -> RingLiteral {
        match self {
            AnyAlgebra::Fp(a) => a.to_literal(),
            AnyAlgebra::Q(a) => a.to_literal(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_literal()).expect("serializable")
    }

    pub fn name(&self) -> &str {
        match self {
            AnyAlgebra::Fp(a) => a.name(),
            AnyAlgebra::Q(a) => a.name(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyAlgebra::Fp(a) => a.n(),
            AnyAlgebra::Q(a) => a.n(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            AnyAlgebra::Fp(a) => a.dims(),
            AnyAlgebra::Q(a) => a.dims(),
        }
    }

    pub fn prime(&self) -> Option<Prime> {
        match self {
            AnyAlgebra::Fp(a) => a.prime(),
            AnyAlgebra::Q(_) => None,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            AnyAlgebra::Fp(a) => validate(a),
            AnyAlgebra::Q(a) => validate(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{build_connected_sum_m6, build_cp, build_product, build_sphere};

    #[test]
    fn literal_round_trip() {
        let z2 = PrimeField(Prime::TWO);
        let a = build_product(&build_sphere(3, z2).unwrap(), &build_cp(2, z2).unwrap()).unwrap();
        let any = AnyAlgebra::from(a.clone());
        let back = AnyAlgebra::from_json_str(&any.to_json_string()).unwrap();
        assert_eq!(back, any);

        let m6 = AnyAlgebra::from(build_connected_sum_m6(2).unwrap());
        let back = AnyAlgebra::from_json_str(&m6.to_json_string()).unwrap();
        assert_eq!(back, m6);
    }

    #[test]
    fn schema_errors() {
        assert!(AnyAlgebra::from_json_str(r#"{"n": 2, "field": "R", "dims": [1,0,1]}"#).is_err());
        assert!(AnyAlgebra::from_json_str(r#"{"n": 2, "field": "Q", "dims": [1,0]}"#).is_err());
        assert!(AnyAlgebra::from_json_str(r#"{"n": 2, "field": {"p": 4}, "dims": [1,0,1]}"#).is_err());
        assert!(AnyAlgebra::from_json_str(r#"{"n": 2, "field": "Q", "dims": [1,0,1], "extra": 1}"#).is_err());
        let bad_op = r#"{"n": 2, "field": {"p": 3}, "dims": [1,0,1],
            "steenrod": [{"op": "Sq", "k": 1, "from_deg": 0, "matrix": [[0]]}]}"#;
        assert!(AnyAlgebra::from_json_str(bad_op).is_err());
        let ok = r#"{"n": 2, "field": "Q", "dims": [1,0,1],
            "products": [{"i":0,"a":0,"j":0,"b":0,"coords":[1]},
                         {"i":0,"a":0,"j":2,"b":0,"coords":["2/2"]},
                         {"i":2,"a":0,"j":0,"b":0,"coords":[1]}],
            "poincare": true}"#;
        let a = AnyAlgebra::from_json_str(ok).unwrap();
        assert!(a.validate().passed());
    }
}
