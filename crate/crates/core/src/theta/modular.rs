//! Symplectic action on period matrices and characteristics.

use super::{Characteristic, PeriodMatrix, ThetaError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Integer symplectic matrix in the cycle basis (a_1..a_g, b_1..b_g), stored as
/// the four g x g blocks of the row action (a'; b') = sigma (a; b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMap {
    pub s11: DMatrix<i64>,
    pub s12: DMatrix<i64>,
    pub s21: DMatrix<i64>,
    pub s22: DMatrix<i64>,
}

impl SymplecticMap {
    pub fn new(
        s11: DMatrix<i64>,
        s12: DMatrix<i64>,
        s21: DMatrix<i64>,
        s22: DMatrix<i64>,
    ) -> Result<Self, ThetaError> {
        let m = Self { s11, s12, s21, s22 };
        if !m.is_symplectic() {
            return Err(ThetaError::NotSymplectic);
        }
        Ok(m)
    }

    pub fn genus(&self) -> usize {
        self.s11.nrows()
    }

    pub fn identity(g: usize) -> Self {
        Self {
            s11: DMatrix::identity(g, g),
            s12: DMatrix::zeros(g, g),
            s21: DMatrix::zeros(g, g),
            s22: DMatrix::identity(g, g),
        }
    }

    pub fn full_matrix(&self) -> DMatrix<i64> {
        let g = self.genus();
        let mut m = DMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = self.s11[(i, j)];
                m[(i, j + g)] = self.s12[(i, j)];
                m[(i + g, j)] = self.s21[(i, j)];
                m[(i + g, j + g)] = self.s22[(i, j)];
            }
        }
        m
    }

    pub fn from_full(m: &DMatrix<i64>) -> Result<Self, ThetaError> {
        let n = m.nrows();
        assert!(n % 2 == 0 && m.ncols() == n);
        let g = n / 2;
        Self::new(
            m.view((0, 0), (g, g)).into_owned(),
            m.view((0, g), (g, g)).into_owned(),
            m.view((g, 0), (g, g)).into_owned(),
            m.view((g, g), (g, g)).into_owned(),
        )
    }

    /// Exact check of sigma J sigma^T = J for J = [[0, I], [-I, 0]].
    pub fn is_symplectic(&self) -> bool {
        let g = self.genus();
        let m = self.full_matrix();
        let mut j = DMatrix::<i64>::zeros(2 * g, 2 * g);
        for i in 0..g {
            j[(i, i + g)] = 1;
            j[(i + g, i)] = -1;
        }
        let lhs = &m * &j * m.transpose();
        lhs == j
    }

    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        SymplecticMap::from_full(&(self.full_matrix() * other.full_matrix())).unwrap()
    }

    fn block_c(&self, b: &DMatrix<i64>) -> DMatrix<Complex64> {
        b.map(|x| Complex64::new(x as f64, 0.0))
    }

    /// Action on the period matrix: (s22 Omega + s21)(s12 Omega + s11)^{-1}.
    pub fn act_on_period_matrix(
        &self,
        omega: &PeriodMatrix,
    ) -> Result<(PeriodMatrix, Complex64), ThetaError> {
        let om = omega.matrix();
        let den = self.block_c(&self.s12) * om + self.block_c(&self.s11);
        let num = self.block_c(&self.s22) * om + self.block_c(&self.s21);
        let aut = den.clone().lu().determinant();
        if aut.norm() < 1e-14 {
            return Err(ThetaError::SingularAutomorphyFactor);
        }
        let den_inv = den
            .try_inverse()
            .ok_or(ThetaError::SingularAutomorphyFactor)?;
        let new_om = num * den_inv;
        let pm = PeriodMatrix::new(new_om, omega.tolerance().max(1e-9))?;
        Ok((pm, aut))
    }

    /// Classical transformation of the characteristic, including the diagonal
    /// correction term, in bit arithmetic mod 2.
    pub fn act_on_characteristic(&self, eta: &Characteristic) -> Characteristic {
        let g = self.genus();
        assert_eq!(eta.genus(), g);
        let a: Vec<i64> = (0..g).map(|j| eta.top(j) as i64).collect();
        let b: Vec<i64> = (0..g).map(|j| eta.bottom(j) as i64).collect();
        let mut bits = vec![0u8; 2 * g];
        for i in 0..g {
            let mut ta = 0i64;
            let mut tb = 0i64;
            let mut diag_a = 0i64;
            let mut diag_b = 0i64;
            for j in 0..g {
                ta += self.s11[(i, j)] * a[j] - self.s12[(i, j)] * b[j];
                tb += -self.s21[(i, j)] * a[j] + self.s22[(i, j)] * b[j];
                diag_a += self.s12[(i, j)] * self.s11[(i, j)];
                diag_b += self.s22[(i, j)] * self.s21[(i, j)];
            }
            bits[2 * i] = ((ta + diag_a).rem_euclid(2)) as u8;
            bits[2 * i + 1] = ((tb + diag_b).rem_euclid(2)) as u8;
        }
        Characteristic::new(bits).unwrap()
    }
}

/// Apply a symplectic change of marking to (Omega, eta).
///
/// Returns the transformed period matrix, the transformed characteristic and
/// the automorphy factor det(s12 Omega + s11). Parity of the characteristic is
/// preserved exactly.
pub fn symplectic_transform(
    sigma: &SymplecticMap,
    omega: &PeriodMatrix,
    eta: &Characteristic,
) -> Result<(PeriodMatrix, Characteristic, Complex64), ThetaError> {
    if !sigma.is_symplectic() {
        return Err(ThetaError::NotSymplectic);
    }
    if sigma.genus() != omega.genus() || eta.genus() != omega.genus() {
        return Err(ThetaError::DimensionMismatch {
            expected: omega.genus(),
            got: sigma.genus(),
        });
    }
    let (om2, aut) = sigma.act_on_period_matrix(omega)?;
    let eta2 = sigma.act_on_characteristic(eta);
    debug_assert_eq!(eta2.parity(), eta.parity());
    Ok((om2, eta2, aut))
}

/// Random symplectic map as a short word in the standard generators, with all
/// entries bounded by `max_entry`.
pub fn random_symplectic<R: Rng>(g: usize, max_entry: i64, rng: &mut R) -> SymplecticMap {
    loop {
        let mut m = SymplecticMap::identity(g);
        let word_len = rng.gen_range(1..=4);
        for _ in 0..word_len {
            let gen = match rng.gen_range(0..3) {
                0 => {
                    // (a, b) -> (a, b + S a), S symmetric
                    let mut s = DMatrix::<i64>::zeros(g, g);
                    for i in 0..g {
                        for j in i..g {
                            let v = rng.gen_range(-1..=1);
                            s[(i, j)] = v;
                            s[(j, i)] = v;
                        }
                    }
                    SymplecticMap {
                        s11: DMatrix::identity(g, g),
                        s12: DMatrix::zeros(g, g),
                        s21: s,
                        s22: DMatrix::identity(g, g),
                    }
                }
                1 => {
                    // (a, b) -> (a + S b, b)
                    let mut s = DMatrix::<i64>::zeros(g, g);
                    for i in 0..g {
                        for j in i..g {
                            let v = rng.gen_range(-1..=1);
                            s[(i, j)] = v;
                            s[(j, i)] = v;
                        }
                    }
                    SymplecticMap {
                        s11: DMatrix::identity(g, g),
                        s12: s,
                        s21: DMatrix::zeros(g, g),
                        s22: DMatrix::identity(g, g),
                    }
                }
                _ => {
                    // full J swap
                    let mut j12 = DMatrix::<i64>::zeros(g, g);
                    let mut j21 = DMatrix::<i64>::zeros(g, g);
                    for i in 0..g {
                        j12[(i, i)] = 1;
                        j21[(i, i)] = -1;
                    }
                    SymplecticMap {
                        s11: DMatrix::zeros(g, g),
                        s12: j12,
                        s21: j21,
                        s22: DMatrix::zeros(g, g),
                    }
                }
            };
            m = gen.compose(&m);
        }
        let bounded = m.full_matrix().iter().all(|&x| x.abs() <= max_entry);
        if bounded && m.is_symplectic() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn identity_acts_trivially() {
        let om = PeriodMatrix::new(
            DMatrix::from_row_slice(1, 1, &[Complex64::new(0.3, 1.2)]),
            1e-12,
        )
        .unwrap();
        let eta = Characteristic::new(vec![1, 0]).unwrap();
        let id = SymplecticMap::identity(1);
        let (om2, eta2, aut) = symplectic_transform(&id, &om, &eta).unwrap();
        assert!((om2.matrix()[(0, 0)] - om.matrix()[(0, 0)]).norm() < 1e-14);
        assert_eq!(eta2, eta);
        assert!((aut - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn s_and_t_act_classically_at_g1() {
        let om = PeriodMatrix::new(
            DMatrix::from_row_slice(1, 1, &[Complex64::new(0.3, 1.2)]),
            1e-12,
        )
        .unwrap();
        // S: (a,b) -> (b, -a), Omega -> -1/Omega, [a;b] -> [b;a]
        let s = SymplecticMap::new(
            DMatrix::from_row_slice(1, 1, &[0]),
            DMatrix::from_row_slice(1, 1, &[1]),
            DMatrix::from_row_slice(1, 1, &[-1]),
            DMatrix::from_row_slice(1, 1, &[0]),
        )
        .unwrap();
        let eta = Characteristic::new(vec![1, 0]).unwrap();
        let (om2, eta2, _) = symplectic_transform(&s, &om, &eta).unwrap();
        let expect = -1.0 / om.matrix()[(0, 0)];
        assert!((om2.matrix()[(0, 0)] - expect).norm() < 1e-14);
        assert_eq!(eta2.bits(), &[0, 1]);
        // T: Omega -> Omega + 1, theta_3 -> theta_4
        let t = SymplecticMap::new(
            DMatrix::from_row_slice(1, 1, &[1]),
            DMatrix::from_row_slice(1, 1, &[0]),
            DMatrix::from_row_slice(1, 1, &[1]),
            DMatrix::from_row_slice(1, 1, &[1]),
        )
        .unwrap();
        let even = Characteristic::new(vec![0, 0]).unwrap();
        let (om3, eta3, _) = symplectic_transform(&t, &om, &even).unwrap();
        assert!((om3.matrix()[(0, 0)] - (om.matrix()[(0, 0)] + 1.0)).norm() < 1e-14);
        assert_eq!(eta3.bits(), &[0, 1]);
    }

    #[test]
    fn parity_preserved_over_random_maps() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let chars = super::super::all_characteristics(2);
        for _ in 0..100 {
            let m = random_symplectic(2, 3, &mut rng);
            for eta in &chars {
                assert_eq!(m.act_on_characteristic(eta).parity(), eta.parity());
            }
        }
    }
}
