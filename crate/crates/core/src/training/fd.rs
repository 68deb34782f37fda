use alloc::vec;
use alloc::vec::Vec;

use super::config::FdScheme;
use super::exec::Executor;
use super::pipeline::{Pass, Pipeline};
use crate::error::Result;
use crate::mesh::StateBatch;

/// Finite-difference gradient of a black-box scalar loss.
///
/// Coordinates with `trainable[i] == false` get 0 and are not evaluated.
pub fn fd_gradient<F>(
    mut loss: F,
    params: &[f64],
    scheme: FdScheme,
    delta: f64,
    trainable: Option<&[bool]>,
) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut p = params.to_vec();
    let base = match scheme {
        FdScheme::Forward => loss(&p),
        FdScheme::Central => 0.0,
    };
    let mut grad = vec![0.0; params.len()];
    for i in 0..params.len() {
        if trainable.is_some_and(|t| !t[i]) {
            continue;
        }
        let x = params[i];
        p[i] = x + delta;
        let up = loss(&p);
        grad[i] = match scheme {
            FdScheme::Forward => (up - base) / delta,
            FdScheme::Central => {
                p[i] = x - delta;
                (up - loss(&p)) / (2.0 * delta)
            }
        };
        p[i] = x;
    }
    grad
}

/// Finite differences over a compiled pipeline, one job per coordinate.
pub(crate) fn pipeline_fd_gradient(
    pipe: &Pipeline,
    pass: &Pass,
    targets: &StateBatch,
    scheme: FdScheme,
    delta: f64,
    trainable: &[bool],
    exec: &dyn Executor,
) -> Result<Vec<f64>> {
    let coords: Vec<usize> = (0..pipe.n_params())
        .filter(|&c| trainable[c] && pipe.affects_loss(c / 2))
        .collect();
    let job = |j: usize| -> Result<f64> {
        let c = coords[j];
        let x = pipe.param(c);
        let up = pipe.perturbed_loss(pass, targets, c, x + delta)?;
        Ok(match scheme {
            FdScheme::Forward => (up - pass.loss) / delta,
            FdScheme::Central => {
                let down = pipe.perturbed_loss(pass, targets, c, x - delta)?;
                (up - down) / (2.0 * delta)
            }
        })
    };
    let values = exec.map(coords.len(), &job);
    let mut grad = vec![0.0; pipe.n_params()];
    for (c, v) in coords.into_iter().zip(values) {
        grad[c] = v?;
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_probe() {
        let f = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>();
        let g = fd_gradient(f, &[1.0, -2.0], FdScheme::Central, 1e-6, None);
        assert!((g[0] - 2.0).abs() < 1e-6 && (g[1] + 4.0).abs() < 1e-6);
        let g = fd_gradient(f, &[1.0, -2.0], FdScheme::Forward, 1e-8, None);
        assert!((g[0] - 2.0).abs() < 1e-5 && (g[1] + 4.0).abs() < 1e-5);
    }

    #[test]
    fn constant_loss_gives_exact_zero() {
        for scheme in [FdScheme::Central, FdScheme::Forward] {
            let g = fd_gradient(|_: &[f64]| 3.25, &[0.1, 0.2, 0.3], scheme, 1e-6, None);
            assert_eq!(g, [0.0; 3]);
        }
    }

    #[test]
    fn masked_coordinates_are_skipped() {
        let mut calls = 0;
        let g = fd_gradient(
            |p: &[f64]| {
                calls += 1;
                p[0] + p[1]
            },
            &[0.0, 0.0],
            FdScheme::Central,
            1e-6,
            Some(&[true, false]),
        );
        assert_eq!(g[1], 0.0);
        assert_eq!(calls, 2);
    }
}
