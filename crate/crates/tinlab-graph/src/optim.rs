//! SGD and Adam parameter updates over a graph's trainable parameters.

use crate::error::{GraphError, Result};
use crate::graph::{GradMap, Graph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { lr: 1e-3, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        Self { lr, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0) {
            return Err(GraphError::Config("learning rate must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(GraphError::Config("adam betas must lie in [0, 1)".into()));
        }
        if !(self.eps > 0.0) {
            return Err(GraphError::Config("adam eps must be positive".into()));
        }
        Ok(())
    }
}

/// `w <- w - lr * g` for every trainable parameter present in `grads`.
pub fn sgd_step(graph: &mut Graph, grads: &GradMap, lr: f64) -> Result<()> {
    if !(lr > 0.0) {
        return Err(GraphError::Config("learning rate must be positive".into()));
    }
    for (&id, grad) in grads {
        let len = graph.param_values(id)?.len();
        if grad.len() != len {
            return Err(GraphError::Dimension(format!(
                "gradient length {} does not match parameter {} of length {}",
                grad.len(),
                id,
                len
            )));
        }
        {
            let values = graph.param_values_mut(id)?;
            for (w, &g) in values.iter_mut().zip(grad) {
                *w -= lr * g;
            }
        }
        graph.param_meta_mut(id)?.step_count += 1;
    }
    Ok(())
}

/// Bias-corrected Adam update; first/second moment buffers live on the
/// parameter and are created on first use.
pub fn adam_step(graph: &mut Graph, grads: &GradMap, cfg: &AdamConfig) -> Result<()> {
    cfg.validate()?;
    for (&id, grad) in grads {
        let len = graph.param_values(id)?.len();
        if grad.len() != len {
            return Err(GraphError::Dimension(format!(
                "gradient length {} does not match parameter {} of length {}",
                grad.len(),
                id,
                len
            )));
        }
        let (mut m1, mut m2, t) = {
            let meta = graph.param_meta_mut(id)?;
            meta.step_count += 1;
            let m1 = meta.m1.take().unwrap_or_else(|| vec![0.0; len]);
            let m2 = meta.m2.take().unwrap_or_else(|| vec![0.0; len]);
            (m1, m2, meta.step_count)
        };
        let c1 = 1.0 - cfg.beta1.powi(t as i32);
        let c2 = 1.0 - cfg.beta2.powi(t as i32);
        {
            let values = graph.param_values_mut(id)?;
            for i in 0..len {
                let g = grad[i];
                m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g;
                m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g * g;
                let m_hat = m1[i] / c1;
                let v_hat = m2[i] / c2;
                values[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
            }
        }
        let meta = graph.param_meta_mut(id)?;
        meta.m1 = Some(m1);
        meta.m2 = Some(m2);
    }
    Ok(())
}
