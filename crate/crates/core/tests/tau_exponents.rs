//! Boundary exponents of the tau function along degenerating families.

use num_complex::Complex64;
use spinlab_core::degen::{
    fit_tau_boundary_exponent, irreducible_family, reducible_family, terminal_coordinates,
    zg_family, TauBoundary,
};
use spinlab_core::spinor::enumerate_characteristics;
use spinlab_core::theta::Characteristic;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn geometric(t0: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t0 * ratio.powi(k as i32)).collect()
}

#[test]
fn tau_exponent_at_odd_pinch_is_six() {
    // genus 2 collision with the odd-pinch characteristic and the
    // t^{-1/8}-normalized spinor
    let fam = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 8),
        1e-10,
    )
    .unwrap();
    let eta = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| {
            c.top(1) == 1 && {
                let sq = spinlab_core::spinor::spinor(&fam.points[0].pd, c, 1e-12).unwrap();
                match sq.zeros[0].point {
                    spinlab_core::surface::SurfacePoint::Branch { index } => {
                        index < 2 || index > 3
                    }
                    _ => true,
                }
            }
        })
        .unwrap();
    let run = fit_tau_boundary_exponent(&fam, &eta, TauBoundary::A0, 1e-12, 3e-8).unwrap();
    println!("A0 slopes: {:?}", run.slopes);
    assert!(
        (run.final_slope - 6.0).abs() < 0.3,
        "A0 exponent {} (slopes {:?})",
        run.final_slope,
        run.slopes
    );
}

#[test]
fn tau_exponent_at_even_pinch_is_sixteen_in_r() {
    let fam = irreducible_family(
        vec![cx(-2.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0)],
        cx(0.0, 0.0),
        geometric(1e-2, 0.5, 8),
        1e-10,
    )
    .unwrap();
    let eta = enumerate_characteristics(2, 1)
        .into_iter()
        .find(|c| c.top(1) == 0)
        .unwrap();
    let run = fit_tau_boundary_exponent(&fam, &eta, TauBoundary::B0, 1e-12, 3e-8).unwrap();
    println!("B0 slopes: {:?}", run.slopes);
    assert!(
        (run.final_slope - 16.0).abs() < 0.8,
        "B0 exponent {} (slopes {:?})",
        run.final_slope,
        run.slopes
    );
}

#[test]
fn tau_exponent_at_separating_boundary_is_thirty_two() {
    // genus 3, j = 1: 16(g - j) = 32 against the plumbing parameter
    let fam = reducible_family(
        vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(2.2, 0.0)],
        vec![cx(6.0, 0.0), cx(7.5, 0.0), cx(9.0, 0.0), cx(10.5, 0.0), cx(12.0, 0.0)],
        1,
        geometric(4e-3, 0.5, 8),
        1e-10,
    )
    .unwrap();
    // odd on the inner block, even on the outer
    let eta = Characteristic::new(vec![1, 1, 0, 0, 0, 0]).unwrap();
    assert!(eta.is_odd());
    let run = fit_tau_boundary_exponent(&fam, &eta, TauBoundary::AjBj, 1e-12, 3e-8).unwrap();
    println!("AjBj slopes: {:?}", run.slopes);
    assert!(
        (run.final_slope - 32.0).abs() < 1.6,
        "A_j exponent {} (slopes {:?})",
        run.final_slope,
        run.slopes
    );
}

#[test]
fn tau_slope_against_vanishing_coordinate_for_merging_zeros() {
    // genus 3, colliding pair carrying the double zeros of the designated
    // spinor; the intrinsic abscissa is the vanishing relative coordinate
    let fam = zg_family(
        vec![
            cx(0.0, 0.0),
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(3.0, 0.0),
            cx(8.0, 0.0),
            cx(9.0, 0.0),
        ],
        cx(5.5, 0.0),
        geometric(1e-2, 0.5, 8),
        1e-10,
    )
    .unwrap();
    // find the characteristic whose zero pair is the colliding pair (sorted
    // slots 4 and 5 at g=3)
    let eta = enumerate_characteristics(3, 1)
        .into_iter()
        .find(|c| {
            let sq = match spinlab_core::spinor::spinor(&fam.points[0].pd, c, 1e-12) {
                Ok(s) => s,
                Err(_) => return false,
            };
            let idx: Vec<usize> = sq
                .zeros
                .iter()
                .filter_map(|z| match z.point {
                    spinlab_core::surface::SurfacePoint::Branch { index } => Some(index),
                    _ => None,
                })
                .collect();
            idx == vec![4, 5]
        })
        .expect("a characteristic with zeros at the colliding pair");
    // transversality: the relative coordinate shrinks along the family
    let (sq, coords) = terminal_coordinates(&fam, &eta, 1e-12).unwrap();
    assert!(sq.zeros.iter().all(|z| z.multiplicity == 2));
    let z_last = coords.z.last().unwrap().norm();
    assert!(z_last < 1e-2, "vanishing coordinate {z_last:e}");
    let run = fit_tau_boundary_exponent(&fam, &eta, TauBoundary::Zg, 1e-12, 3e-8).unwrap();
    println!(
        "Zg slopes vs |z_last|: {:?} (abscissa {:?})",
        run.slopes, run.abscissa
    );
    println!("Zg final slope: {} target 16/5 = 3.2", run.final_slope);
    assert!(
        (run.final_slope - 3.2).abs() < 0.16,
        "Zg intrinsic slope {} vs 16/5",
        run.final_slope
    );
}
