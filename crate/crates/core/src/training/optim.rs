//! ADAM with per-group step sizes and the piecewise-constant step schedule.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::networks::{Archive, ArchiveArray};
use crate::problem::ProblemFamily;

/// ADAM state. Moments persist across step-size drops.
#[derive(Clone, Debug, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new(n: usize) -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Number of steps taken.
    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One update with a single step size.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) -> Result<()> {
        let n = params.len();
        self.step_groups(params, grads, &[(0..n, lr)])
    }

    /// One update where each parameter range has its own step size. Ranges
    /// not listed are left unchanged. A non-finite gradient aborts before any
    /// state changes.
    pub fn step_groups(&mut self, params: &mut [f64], grads: &[f64], groups: &[(Range<usize>, f64)]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::Dimension(format!(
                "optimizer holds {} moments, got {} parameters and {} gradients",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite {
                epoch: 0,
                update: 0,
                detail: format!("gradient entry {i} is {}", grads[i]),
            });
        }
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for (range, lr) in groups {
            for i in range.clone() {
                let g = grads[i];
                self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
                self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
                let m_hat = self.m[i] / c1;
                let v_hat = self.v[i] / c2;
                params[i] -= lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
        Ok(())
    }

    pub fn write_archive(&self, a: &mut Archive) {
        a.push_meta("adam_t", self.t);
        a.push_meta("adam_beta1", self.beta1);
        a.push_meta("adam_beta2", self.beta2);
        a.push_meta("adam_eps", self.eps);
        a.arrays.push(ArchiveArray::new("adam:m", self.m.clone()));
        a.arrays.push(ArchiveArray::new("adam:v", self.v.clone()));
    }

    pub fn read_archive(a: &Archive) -> Result<Self> {
        let num = |key: &str| -> Result<f64> {
            let s = a.require_meta(key)?;
            s.parse()
                .map_err(|_| Error::Config(format!("archive metadata `{key}` is not a number: `{s}`")))
        };
        let arr = |name: &str| -> Result<Vec<f64>> {
            a.array(name)
                .map(|x| x.data.clone())
                .ok_or_else(|| Error::Config(format!("archive lacks array `{name}`")))
        };
        let t = a
            .require_meta("adam_t")?
            .parse()
            .map_err(|_| Error::Config("archive metadata `adam_t` is not an integer".into()))?;
        let (m, v) = (arr("adam:m")?, arr("adam:v")?);
        if m.len() != v.len() {
            return Err(Error::Dimension("optimizer moment arrays differ in length".into()));
        }
        Ok(Self {
            beta1: num("adam_beta1")?,
            beta2: num("adam_beta2")?,
            eps: num("adam_eps")?,
            m,
            v,
            t,
        })
    }
}

/// Step sizes for the physical-field networks (`psi`) and the level-set
/// network (`phi`). Before the first drop `alpha_psi = 10 alpha_phi`; each
/// drop sets both to the same value.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub total_epochs: usize,
    pub alpha_psi0: f64,
    pub alpha_phi0: f64,
    /// `(epoch, step size)`, applied from that epoch on.
    pub drops: Vec<(usize, f64)>,
}

impl Schedule {
    pub fn new(total_epochs: usize, alpha_psi0: f64, drops: Vec<(usize, f64)>) -> Result<Self> {
        let s = Self {
            total_epochs,
            alpha_psi0,
            alpha_phi0: alpha_psi0 / 10.0,
            drops,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_epochs == 0 {
            return Err(Error::Config("the schedule needs at least one epoch".into()));
        }
        let rates = std::iter::once(self.alpha_psi0)
            .chain(std::iter::once(self.alpha_phi0))
            .chain(self.drops.iter().map(|d| d.1));
        for r in rates {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Config(format!("step sizes must be positive, got {r}")));
            }
        }
        if self.drops.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Config("step-size drops must be at increasing epochs".into()));
        }
        Ok(())
    }

    /// Square and thermal matrices: 150k epochs, drops at 60k and 120k.
    pub fn matrix() -> Self {
        Self::new(150_000, 1e-3, vec![(60_000, 1e-4), (120_000, 1e-5)]).expect("valid preset")
    }

    /// Periodic layer: 200k epochs with the matrix drops.
    pub fn layer() -> Self {
        Self::new(200_000, 1e-3, vec![(60_000, 1e-4), (120_000, 1e-5)]).expect("valid preset")
    }

    /// Wide matrix: 50k epochs, drops at 16k and 40k.
    pub fn wide_matrix() -> Self {
        Self::new(50_000, 1e-3, vec![(16_000, 1e-4), (40_000, 1e-5)]).expect("valid preset")
    }

    pub fn for_family(family: ProblemFamily) -> Self {
        match family {
            ProblemFamily::Layer => Self::layer(),
            ProblemFamily::WideMatrix => Self::wide_matrix(),
            ProblemFamily::Matrix | ProblemFamily::Thermal { .. } => Self::matrix(),
        }
    }

    /// Same shape over `total_epochs`, with drop epochs scaled proportionally.
    pub fn scaled(&self, total_epochs: usize) -> Result<Self> {
        let drops = self
            .drops
            .iter()
            .map(|&(e, r)| {
                (
                    ((e as f64) * total_epochs as f64 / self.total_epochs as f64).round() as usize,
                    r,
                )
            })
            .collect();
        let s = Self {
            total_epochs,
            drops,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    /// `(alpha_psi, alpha_phi)` during 0-based `epoch`.
    pub fn rates(&self, epoch: usize) -> (f64, f64) {
        self.drops
            .iter()
            .rev()
            .find(|(e, _)| epoch >= *e)
            .map(|&(_, r)| (r, r))
            .unwrap_or((self.alpha_psi0, self.alpha_phi0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params() {
        let mut a = Adam::new(3);
        let mut p = vec![1.0, -2.0, 0.5];
        a.step(&mut p, &[0.0; 3], 0.1).unwrap();
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn first_step_moves_by_step_size() {
        let mut a = Adam::new(2);
        let mut p = vec![0.0, 0.0];
        a.step(&mut p, &[3.0, -0.2], 1e-3).unwrap();
        assert!((p[0] + 1e-3).abs() < 1e-11);
        assert!((p[1] - 1e-3).abs() < 1e-10);
    }

    #[test]
    fn quadratic_bowl_converges() {
        let mut a = Adam::new(4);
        let mut p = vec![1.0, -0.7, 0.3, 2.0];
        let mut steps = 0;
        while p.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-8 {
            let g: Vec<f64> = p.iter().map(|x| 2.0 * x).collect();
            a.step(&mut p, &g, 1e-2).unwrap();
            steps += 1;
            assert!(steps <= 5000, "not converged: {p:?}");
        }
    }

    #[test]
    fn nan_gradient_is_rejected_without_update() {
        let mut a = Adam::new(2);
        let mut p = vec![1.0, 1.0];
        assert!(matches!(
            a.step(&mut p, &[0.1, f64::NAN], 0.1),
            Err(Error::NonFinite { .. })
        ));
        assert_eq!(p, vec![1.0, 1.0]);
        assert_eq!(a.steps(), 0);
    }

    #[test]
    fn schedule_ratio_and_drops() {
        let s = Schedule::matrix();
        assert_eq!(s.rates(0), (1e-3, 1e-4));
        assert_eq!(s.rates(59_999), (1e-3, 1e-4));
        assert_eq!(s.rates(60_000), (1e-4, 1e-4));
        assert_eq!(s.rates(149_999), (1e-5, 1e-5));
        let d = s.scaled(30_000).unwrap();
        assert_eq!(d.drops, vec![(12_000, 1e-4), (24_000, 1e-5)]);
    }

    #[test]
    fn archive_roundtrip_is_exact() {
        let mut a = Adam::new(3);
        let mut p = vec![0.1, 0.2, 0.3];
        a.step(&mut p, &[0.3, -1.0 / 3.0, 1e-9], 1e-3).unwrap();
        let mut ar = Archive::default();
        a.write_archive(&mut ar);
        assert_eq!(Adam::read_archive(&ar).unwrap(), a);
    }
}
