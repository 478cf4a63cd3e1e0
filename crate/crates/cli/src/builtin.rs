//! Built-in fans used by the checks and the acceptance corpus.

use num_bigint::BigInt;
use std::sync::Arc;
use thiserror::Error;
use twistoric::fan::Fan;
use twistoric::lattice::int_vec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown builtin fan `{0}`")]
    UnknownName(String),
}

fn basis_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::from(1);
    v
}

/// The standard fan for a builtin name:
/// `affine:n`, `projective_space:n`, `p1xp1`, `hirzebruch:a`,
/// `weighted_p112`, `cone_over_square`, `a1_surface`.
pub fn builtin_fan(name: &str) -> Result<Fan, BuiltinError> {
    let unknown = || BuiltinError::UnknownName(name.to_string());
    let fan = if let Some(arg) = name.strip_prefix("affine:") {
        let n: usize = arg.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        let cone: Vec<Vec<BigInt>> = (0..n).map(|i| basis_vector(n, i)).collect();
        Fan::new(n, vec![cone])
    } else if let Some(arg) = name.strip_prefix("projective_space:") {
        let n: usize = arg.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        let mut rays: Vec<Vec<BigInt>> = (0..n).map(|i| basis_vector(n, i)).collect();
        rays.push(vec![BigInt::from(-1); n]);
        // maximal cones: all n-subsets of the n+1 rays
        let cones: Vec<Vec<Vec<BigInt>>> = (0..=n)
            .map(|skip| {
                rays.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, r)| r.clone())
                    .collect()
            })
            .collect();
        Fan::new(n, cones)
    } else if name == "p1xp1" {
        let quadrants = vec![
            vec![int_vec(&[1, 0]), int_vec(&[0, 1])],
            vec![int_vec(&[0, 1]), int_vec(&[-1, 0])],
            vec![int_vec(&[-1, 0]), int_vec(&[0, -1])],
            vec![int_vec(&[0, -1]), int_vec(&[1, 0])],
        ];
        Fan::new(2, quadrants)
    } else if let Some(arg) = name.strip_prefix("hirzebruch:") {
        let a: i64 = arg.parse().map_err(|_| unknown())?;
        let rays = [
            int_vec(&[1, 0]),
            int_vec(&[0, 1]),
            int_vec(&[-1, a]),
            int_vec(&[0, -1]),
        ];
        let cones = vec![
            vec![rays[0].clone(), rays[1].clone()],
            vec![rays[1].clone(), rays[2].clone()],
            vec![rays[2].clone(), rays[3].clone()],
            vec![rays[3].clone(), rays[0].clone()],
        ];
        Fan::new(2, cones)
    } else if name == "weighted_p112" {
        let rays = [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -2])];
        let cones = vec![
            vec![rays[0].clone(), rays[1].clone()],
            vec![rays[1].clone(), rays[2].clone()],
            vec![rays[2].clone(), rays[0].clone()],
        ];
        Fan::new(2, cones)
    } else if name == "cone_over_square" {
        Fan::new(
            3,
            vec![vec![
                int_vec(&[1, 0, 1]),
                int_vec(&[0, 1, 1]),
                int_vec(&[-1, 0, 1]),
                int_vec(&[0, -1, 1]),
            ]],
        )
    } else if name == "a1_surface" {
        Fan::new(2, vec![vec![int_vec(&[1, 0]), int_vec(&[1, 2])]])
    } else {
        return Err(unknown());
    };
    Ok(fan.expect("builtin fans are valid"))
}

/// The fixed corpus exercised by the acceptance checks.
pub fn acceptance_corpus() -> Vec<(String, Arc<Fan>)> {
    [
        "affine:1",
        "affine:2",
        "affine:3",
        "projective_space:1",
        "projective_space:2",
        "p1xp1",
        "hirzebruch:1",
        "hirzebruch:2",
        "weighted_p112",
        "a1_surface",
        "cone_over_square",
    ]
    .iter()
    .map(|name| {
        (
            name.to_string(),
            Arc::new(builtin_fan(name).expect("corpus fans exist")),
        )
    })
    .collect()
}
