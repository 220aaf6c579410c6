//! Seeded generators of random analytic immersions for the identity sweeps.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::expr::Expr;
use super::immersion::ImmersionSpec;
use super::mobius::{random_rotation, MobiusTransform};

/// A random analytic immersion: graphs with trigonometric-polynomial
/// heights, perturbed spheres, ellipsoids, and rigidly moved copies.
/// Coefficients are kept small enough that every catalog chart stays an
/// immersion with a well-conditioned metric.
pub fn random_immersion(rng: &mut ChaCha8Rng) -> ImmersionSpec {
    match rng.gen_range(0..4u8) {
        0 => random_graph(rng),
        1 => ImmersionSpec::PerturbedSphere {
            radius: rng.gen_range(0.6..1.8),
            amplitude: rng.gen_range(0.02..0.12),
            mode: rng.gen_range(1..4),
        },
        2 => {
            let mut axes = [0.0; 5];
            for a in &mut axes {
                *a = rng.gen_range(0.8..1.5);
            }
            ImmersionSpec::Ellipsoid { semi_axes: axes }
        }
        _ => {
            let inner = random_graph(rng);
            let transform = MobiusTransform::rotation(random_rotation(rng))
                .then(MobiusTransform::dilation(rng.gen_range(0.5..2.0)))
                .then(MobiusTransform::translation(std::array::from_fn(|_| {
                    rng.gen_range(-1.0..1.0)
                })));
            ImmersionSpec::MobiusImage {
                inner: Box::new(inner),
                transform,
            }
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng) -> ImmersionSpec {
    let mut height = Expr::Const(0.0);
    for _ in 0..rng.gen_range(2..5usize) {
        let i = rng.gen_range(0..4usize);
        let j = rng.gen_range(0..4usize);
        let c = rng.gen_range(-0.4..0.4);
        let term = match rng.gen_range(0..3u8) {
            0 => Expr::Mul(
                Box::new(Expr::Const(c)),
                Box::new(Expr::Mul(
                    Box::new(Expr::Sin(Box::new(Expr::Var(i)))),
                    Box::new(Expr::Cos(Box::new(Expr::Var(j)))),
                )),
            ),
            1 => Expr::Mul(
                Box::new(Expr::Const(c)),
                Box::new(Expr::Mul(Box::new(Expr::Var(i)), Box::new(Expr::Var(j)))),
            ),
            _ => Expr::Mul(
                Box::new(Expr::Const(c)),
                Box::new(Expr::Pow(Box::new(Expr::Var(i)), 3)),
            ),
        };
        height = Expr::Add(Box::new(height), Box::new(term));
    }
    ImmersionSpec::Graph { height }
}
