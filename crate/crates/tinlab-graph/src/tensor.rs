use crate::error::{GraphError, Result};

/// Flat, row-major n-dimensional array of `f64` with an optional gradient
/// buffer of the same length.
///
/// Everything in this crate is effectively 1-D; the shape field exists so
/// that callers can round-trip whatever layout they loaded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    values: Vec<f64>,
    grad: Option<Vec<f64>>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if expected != values.len() {
            return Err(GraphError::Dimension(format!(
                "shape {:?} implies {} values, got {}",
                shape,
                expected,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GraphError::Domain("tensor holds a non-finite value".into()));
        }
        Ok(Self { shape, values, grad: None })
    }

    pub fn vector(values: Vec<f64>) -> Result<Self> {
        Self::new(vec![values.len()], values)
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(vec![1], vec![value])
    }

    pub fn zeros(len: usize) -> Self {
        Self { shape: vec![len], values: vec![0.0; len], grad: None }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grad(&self) -> Option<&[f64]> {
        self.grad.as_deref()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Overwrite the value buffer, keeping the allocation when lengths match.
    pub(crate) fn set_values(&mut self, src: &[f64]) {
        if self.values.len() == src.len() {
            self.values.copy_from_slice(src);
        } else {
            self.values = src.to_vec();
            self.shape = vec![src.len()];
        }
    }

    /// Zero the gradient buffer, allocating it on first use.
    pub(crate) fn reset_grad(&mut self) {
        match &mut self.grad {
            Some(g) => g.iter_mut().for_each(|v| *v = 0.0),
            None => self.grad = Some(vec![0.0; self.values.len()]),
        }
    }

    pub(crate) fn grad_mut(&mut self) -> &mut [f64] {
        if self.grad.is_none() {
            self.grad = Some(vec![0.0; self.values.len()]);
        }
        self.grad.as_mut().unwrap()
    }

    pub(crate) fn take_grad(&mut self) -> Option<Vec<f64>> {
        self.grad.take()
    }

    pub(crate) fn put_grad(&mut self, grad: Vec<f64>) {
        self.grad = Some(grad);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_must_match_value_count() {
        assert!(Tensor::new(vec![2, 3], vec![0.0; 6]).is_ok());
        assert!(matches!(
            Tensor::new(vec![2, 3], vec![0.0; 5]),
            Err(GraphError::Dimension(_))
        ));
    }

    #[test]
    fn non_finite_values_rejected() {
        assert!(matches!(
            Tensor::vector(vec![1.0, f64::NAN]),
            Err(GraphError::Domain(_))
        ));
        assert!(matches!(
            Tensor::vector(vec![f64::INFINITY]),
            Err(GraphError::Domain(_))
        ));
    }

    #[test]
    fn grad_buffer_tracks_length() {
        let mut t = Tensor::vector(vec![1.0, 2.0]).unwrap();
        assert!(t.grad().is_none());
        t.reset_grad();
        assert_eq!(t.grad().unwrap(), &[0.0, 0.0]);
    }
}
