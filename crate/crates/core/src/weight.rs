use crate::error::{Error, Result};
use crate::hypergraph::{Edge, HypergraphSpec};

/// Nonnegative finite weights indexed by canonical edge index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    spec: HypergraphSpec,
    values: Vec<f64>,
}

impl WeightVector {
    pub fn new(spec: HypergraphSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.edge_count() {
            return Err(Error::structural(format!(
                "weight vector has {} entries, spec has {} edges",
                values.len(),
                spec.edge_count()
            )));
        }
        if let Some((i, &w)) = values.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::domain(format!("weight of edge {i} is {w}, expected finite and >= 0")));
        }
        Ok(WeightVector { spec, values })
    }

    pub fn constant(spec: HypergraphSpec, c: f64) -> Result<Self> {
        Self::new(spec, vec![c; spec.edge_count()])
    }

    /// Weight computed per edge in canonical order.
    pub fn from_fn(spec: HypergraphSpec, mut f: impl FnMut(&Edge) -> f64) -> Result<Self> {
        let values = spec.enumerate_edges().map(|e| f(&e)).collect();
        Self::new(spec, values)
    }

    pub fn spec(&self) -> &HypergraphSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&w| w > 0.0)
    }

    /// Errors with the first non-positive entry.
    pub fn require_positive(&self) -> Result<()> {
        match self.values.iter().position(|&w| w <= 0.0) {
            Some(index) => Err(Error::Positivity { index, value: self.values[index] }),
            None => Ok(()),
        }
    }

    /// `ln w_S` per edge; zero weights map to `-inf`.
    pub fn ln_values(&self) -> Vec<f64> {
        self.values.iter().map(|w| w.ln()).collect()
    }

    pub fn total(&self) -> f64 {
        let mut acc = crate::numeric::CompensatedSum::default();
        self.values.iter().for_each(|&w| acc.add(w));
        acc.value()
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.spec, self.values.iter().map(|w| w * c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let s = HypergraphSpec::uniform(2, 2).unwrap();
        assert!(WeightVector::new(s, vec![1.0; 5]).is_err());
        assert!(WeightVector::new(s, vec![1.0, 1.0, -1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(WeightVector::new(s, vec![1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0]).is_err());
        let w = WeightVector::new(s, vec![1.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(!w.is_positive());
        assert!(matches!(w.require_positive(), Err(Error::Positivity { index: 1, .. })));
        assert_eq!(w.ln_values()[1], f64::NEG_INFINITY);
        assert_eq!(w.total(), 5.0);
    }
}
