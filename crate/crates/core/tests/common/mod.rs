#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use restrep::pipoint::{canonical_pi_point, point_module, projective_points};
use restrep::{Algebra, Field, Representation};

pub fn klein(p: u32, e: u32) -> Arc<Algebra> {
    let f = Field::new(p, e).unwrap();
    Algebra::truncated_polynomial(&f, &[p as usize, p as usize]).unwrap()
}

fn random_vectors<R: Rng + ?Sized>(f: &Field, dim: usize, k: usize, rng: &mut R) -> Vec<Vec<u32>> {
    (0..k).map(|_| (0..dim).map(|_| rng.gen_range(0..f.order())).collect()).collect()
}

/// A random module of dimension at most `max_dim` over k[x,y]/(x^p,y^p).
pub fn random_module<R: Rng + ?Sized>(a: &Arc<Algebra>, max_dim: usize, rng: &mut R) -> Representation {
    let f = a.field().clone();
    let points = projective_points(&f, 2);
    loop {
        let m = match rng.gen_range(0..5) {
            0 => {
                let c = &points[rng.gen_range(0..points.len())];
                point_module(&canonical_pi_point(a, c).unwrap()).unwrap()
            }
            1 => {
                let reg = Representation::regular(a);
                let sub = reg.submodule_generated(&random_vectors(&f, reg.dim(), rng.gen_range(1..3), rng));
                reg.quotient(&sub).unwrap()
            }
            2 => {
                let reg = Representation::regular(a);
                let sub = reg.submodule_generated(&random_vectors(&f, reg.dim(), 1, rng));
                reg.submodule(&sub).unwrap()
            }
            3 if max_dim >= 2 => {
                let m1 = random_module(a, max_dim / 2, rng);
                let m2 = random_module(a, max_dim / 2, rng);
                m1.direct_sum(&m2).unwrap()
            }
            _ => Representation::trivial(a),
        };
        if m.dim() > 0 && m.dim() <= max_dim {
            return m;
        }
    }
}
