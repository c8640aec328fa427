//! Plant, reference model, controllers and the parameter maps between them.
//!
//! The plant is `ẋ = A x + b u` with `A` in controllable canonical form
//! (last row `-a₁ … -aₙ`) and `b = eₙ`. Right-hand sides come in two
//! flavours: record-level functions (`l1ac_rhs`, `pi_rhs`, …) that validate
//! their inputs, and slice kernels used by the simulator's inner loop.

use crate::error::{Error, Result};
use crate::poly_linalg::{solve_lyapunov, SquareMatrix};

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{name} must have finite entries")));
    }
    Ok(())
}

/// Companion-form product: returns `A x` into `out` for the matrix with
/// ones on the superdiagonal and last row `-a`.
#[inline]
pub(crate) fn companion_apply(a: &[f64], x: &[f64], out: &mut [f64]) {
    let n = a.len();
    out[..n - 1].copy_from_slice(&x[1..n]);
    out[n - 1] = -dot(a, x);
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unknown plant coefficients `a₁ … aₙ`. Unstable plants are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantParams {
    a: Vec<f64>,
}

impl PlantParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("plant needs at least one coefficient"));
        }
        check_finite("plant coefficients", &a)?;
        Ok(PlantParams { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn system_matrix(&self) -> SquareMatrix {
        SquareMatrix::companion(&self.a).expect("validated coefficients")
    }
}

/// Designer reference model `A_m` (companion form with coefficients `a_m`),
/// the weight `Q` and the cached Lyapunov solution `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceModel {
    a_m: Vec<f64>,
    q: SquareMatrix,
    p: SquareMatrix,
}

impl ReferenceModel {
    pub fn new(a_m: Vec<f64>, q: SquareMatrix) -> Result<Self> {
        if a_m.is_empty() {
            return Err(Error::invalid("reference model needs at least one coefficient"));
        }
        check_finite("reference coefficients", &a_m)?;
        if let Some((i, v)) = a_m.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::invalid(format!(
                "reference coefficient a_m[{}] = {v} violates a^m_i > 0",
                i + 1
            )));
        }
        if q.n() != a_m.len() {
            return Err(Error::invalid(format!(
                "Q is {0}x{0} but the reference model has order {1}",
                q.n(),
                a_m.len()
            )));
        }
        let a_mat = SquareMatrix::companion(&a_m)?;
        let p = solve_lyapunov(&a_mat, &q).map_err(|e| match e {
            Error::NoSolution(msg) => Error::invalid(format!("reference model: {msg}")),
            other => other,
        })?;
        Ok(ReferenceModel { a_m, q, p })
    }

    /// Reference model with `Q = I`.
    pub fn with_identity_q(a_m: Vec<f64>) -> Result<Self> {
        let n = a_m.len();
        Self::new(a_m, SquareMatrix::identity(n.max(1)))
    }

    pub fn n(&self) -> usize {
        self.a_m.len()
    }

    pub fn a_m(&self) -> &[f64] {
        &self.a_m
    }

    pub fn q(&self) -> &SquareMatrix {
        &self.q
    }

    pub fn p(&self) -> &SquareMatrix {
        &self.p
    }

    pub fn system_matrix(&self) -> SquareMatrix {
        SquareMatrix::companion(&self.a_m).expect("validated coefficients")
    }

    /// Last column of `P`, i.e. `P b` with `b = eₙ`.
    pub fn p_b(&self) -> Vec<f64> {
        let n = self.n();
        (0..n).map(|i| self.p[(i, n - 1)]).collect()
    }
}

/// True parameter vector `θ = a - a_m`, so that `A + bθᵀ = A_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTrue(Vec<f64>);

impl ThetaTrue {
    /// Wraps an arbitrary parameter vector (used e.g. for norm scans).
    pub fn from_vec(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::invalid("theta must be non-empty"));
        }
        check_finite("theta", &theta)?;
        Ok(ThetaTrue(theta))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn theta_from(plant: &PlantParams, reference: &ReferenceModel) -> Result<ThetaTrue> {
    if plant.n() != reference.n() {
        return Err(Error::invalid(format!(
            "plant order {} differs from reference order {}",
            plant.n(),
            reference.n()
        )));
    }
    Ok(ThetaTrue(plant.a.iter().zip(&reference.a_m).map(|(a, am)| a - am).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Config {
    pub k: f64,
    pub gamma: f64,
    /// Radius of the ball `θ̂` is clamped to after each step, if any.
    pub projection_radius: Option<f64>,
}

impl L1Config {
    pub fn new(k: f64, gamma: f64, projection_radius: Option<f64>) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid(format!("filter gain k = {k} must be positive")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("adaptation gain gamma = {gamma} must be positive")));
        }
        if let Some(r) = projection_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid(format!("projection radius {r} must be positive")));
            }
        }
        Ok(L1Config { k, gamma, projection_radius })
    }
}

/// PI gains `K_I = k·a_m`, `K_P = k·eₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiGains {
    k_i: Vec<f64>,
    k_p: Vec<f64>,
}

impl PiGains {
    pub fn k_i(&self) -> &[f64] {
        &self.k_i
    }

    pub fn k_p(&self) -> &[f64] {
        &self.k_p
    }

    /// The filter gain the PI gains were built from.
    pub fn k(&self) -> f64 {
        *self.k_p.last().expect("non-empty gains")
    }
}

/// The gains depend on designer data only; no plant parameter enters.
pub fn pi_gains(k: f64, reference: &ReferenceModel) -> Result<PiGains> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("filter gain k = {k} must be positive")));
    }
    let n = reference.n();
    let k_i = reference.a_m.iter().map(|am| k * am).collect();
    let mut k_p = vec![0.0; n];
    k_p[n - 1] = k;
    Ok(PiGains { k_i, k_p })
}

/// State of the plant in closed loop with the L1-AC.
#[derive(Debug, Clone, PartialEq)]
pub struct L1State {
    pub x: Vec<f64>,
    pub u: f64,
    pub x_hat: Vec<f64>,
    pub theta_hat: Vec<f64>,
}

impl L1State {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Stacked layout `[x, u, x̂, θ̂]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut y = Vec::with_capacity(3 * self.n() + 1);
        y.extend_from_slice(&self.x);
        y.push(self.u);
        y.extend_from_slice(&self.x_hat);
        y.extend_from_slice(&self.theta_hat);
        y
    }

    pub fn from_slice(n: usize, y: &[f64]) -> Self {
        L1State {
            x: y[..n].to_vec(),
            u: y[n],
            x_hat: y[n + 1..2 * n + 1].to_vec(),
            theta_hat: y[2 * n + 1..3 * n + 1].to_vec(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.x.len() != n || self.x_hat.len() != n || self.theta_hat.len() != n {
            return Err(Error::invalid(format!("L1-AC state dimensions do not match n = {n}")));
        }
        if self.to_vec().iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup("non-finite L1-AC state".into()));
        }
        Ok(())
    }

    /// Parameter error `θ̃ = θ̂ - θ`.
    pub fn theta_tilde(&self, theta: &ThetaTrue) -> Vec<f64> {
        self.theta_hat.iter().zip(&theta.0).map(|(h, t)| h - t).collect()
    }

    /// Prediction error `x̃ = x̂ - x`.
    pub fn x_tilde(&self) -> Vec<f64> {
        self.x_hat.iter().zip(&self.x).map(|(h, x)| h - x).collect()
    }
}

/// State of the plant in closed loop with the (perturbed) PI controller.
/// The control is the output `u = v - K_Pᵀx`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiState {
    pub x: Vec<f64>,
    pub v: f64,
}

impl PiState {
    pub fn control(&self, gains: &PiGains) -> f64 {
        self.v - dot(&gains.k_p, &self.x)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.x.len() != n {
            return Err(Error::invalid(format!("PI state dimension does not match n = {n}")));
        }
        if !self.v.is_finite() || self.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup("non-finite PI state".into()));
        }
        Ok(())
    }
}

/// How `θ̂` evolves inside the L1-AC.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Estimator {
    /// State-predictor gradient law `θ̂̇ = γ x x̃ᵀ P b`.
    #[default]
    Adaptive,
    /// `θ̂ ≡ θ̂(0)`.
    Frozen,
    /// `θ̂ᵢ(t) = θ̂ᵢ(0) + amplitude·sin(ω t + i)`.
    Scripted { amplitude: f64, omega: f64 },
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Adaptive => "adaptive",
            Estimator::Frozen => "frozen",
            Estimator::Scripted { .. } => "scripted",
        }
    }
}

/// Derivative of the stacked L1-AC state `[x, u, x̂, θ̂]`.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn l1ac_kernel(
    t: f64,
    y: &[f64],
    dy: &mut [f64],
    a: &[f64],
    a_m: &[f64],
    p_b: &[f64],
    k: f64,
    gamma: f64,
    estimator: Estimator,
) {
    let n = a.len();
    let x = &y[..n];
    let u = y[n];
    let theta_hat = &y[2 * n + 1..3 * n + 1];

    companion_apply(a, x, &mut dy[..n]);
    dy[n - 1] += u;
    dy[n] = -k * (u - dot(theta_hat, x));
    estimator_kernel(t, y, u, &mut dy[n + 1..], a_m, p_b, gamma, estimator);
}

/// Estimator rows `[x̂̇, θ̂̇]` for a stacked state whose first `n` entries
/// are `x` and whose last `2n` entries are `[x̂, θ̂]`; `u` is the applied
/// control.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn estimator_kernel(
    t: f64,
    y: &[f64],
    u: f64,
    dest: &mut [f64],
    a_m: &[f64],
    p_b: &[f64],
    gamma: f64,
    estimator: Estimator,
) {
    let n = a_m.len();
    let x = &y[..n];
    let x_hat = &y[n + 1..2 * n + 1];
    let theta_hat = &y[2 * n + 1..3 * n + 1];
    let (dx_hat, dtheta) = dest.split_at_mut(n);

    companion_apply(a_m, x_hat, dx_hat);
    dx_hat[n - 1] -= dot(theta_hat, x) - u;

    match estimator {
        Estimator::Adaptive => {
            let err_pb: f64 = x_hat.iter().zip(x).zip(p_b).map(|((h, x), p)| (h - x) * p).sum();
            for (d, xi) in dtheta[..n].iter_mut().zip(x) {
                *d = gamma * xi * err_pb;
            }
        }
        Estimator::Frozen => dtheta[..n].iter_mut().for_each(|d| *d = 0.0),
        Estimator::Scripted { amplitude, omega } => {
            for (i, d) in dtheta[..n].iter_mut().enumerate() {
                *d = amplitude * omega * (omega * t + i as f64).cos();
            }
        }
    }
}

/// Derivative of the PI state `[x, v]` with an additive perturbation
/// `k·θ̃ᵀx` on `v̇` (zero for the implementable PI).
#[inline]
pub(crate) fn pi_kernel(y: &[f64], dy: &mut [f64], a: &[f64], gains: &PiGains, perturbation: f64) {
    let n = a.len();
    let x = &y[..n];
    let v = y[n];
    let u = v - dot(&gains.k_p, x);
    companion_apply(a, x, &mut dy[..n]);
    dy[n - 1] += u;
    dy[n] = -dot(&gains.k_i, x) + perturbation;
}

/// `d/dt` of the L1-AC closed loop, with the adaptive estimator.
pub fn l1ac_rhs(
    state: &L1State,
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
) -> Result<L1State> {
    let n = plant.n();
    if reference.n() != n {
        return Err(Error::invalid("plant and reference orders differ"));
    }
    state.validate(n)?;
    let y = state.to_vec();
    let mut dy = vec![0.0; y.len()];
    l1ac_kernel(
        0.0,
        &y,
        &mut dy,
        &plant.a,
        &reference.a_m,
        &reference.p_b(),
        cfg.k,
        cfg.gamma,
        Estimator::Adaptive,
    );
    if dy.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalBlowup("non-finite L1-AC derivative".into()));
    }
    Ok(L1State::from_slice(n, &dy))
}

/// `d/dt` of the plant under the implementable PI: `v̇ = -K_Iᵀx`,
/// `ẋ = A x + b (v - K_Pᵀx)`.
pub fn pi_rhs(state: &PiState, plant: &PlantParams, gains: &PiGains) -> Result<PiState> {
    perturbed_pi_rhs_inner(state, plant, gains, 0.0)
}

/// As [`pi_rhs`] with `v̇` incremented by `k·θ̃ᵀx`, the value of `θ̃ᵀx`
/// being supplied by the caller.
pub fn perturbed_pi_rhs(
    state: &PiState,
    plant: &PlantParams,
    gains: &PiGains,
    k: f64,
    theta_tilde_dot_x: f64,
) -> Result<PiState> {
    if !theta_tilde_dot_x.is_finite() || !k.is_finite() {
        return Err(Error::NumericalBlowup("non-finite perturbation".into()));
    }
    perturbed_pi_rhs_inner(state, plant, gains, k * theta_tilde_dot_x)
}

fn perturbed_pi_rhs_inner(
    state: &PiState,
    plant: &PlantParams,
    gains: &PiGains,
    perturbation: f64,
) -> Result<PiState> {
    let n = plant.n();
    if gains.k_i.len() != n {
        return Err(Error::invalid("PI gains do not match plant order"));
    }
    state.validate(n)?;
    let mut y = state.x.clone();
    y.push(state.v);
    let mut dy = vec![0.0; n + 1];
    pi_kernel(&y, &mut dy, &plant.a, gains, perturbation);
    if dy.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalBlowup("non-finite PI derivative".into()));
    }
    Ok(PiState { x: dy[..n].to_vec(), v: dy[n] })
}

/// Radial clamp of `θ̂` onto the closed ball of the given radius.
pub fn project_theta(theta_hat: &[f64], radius: f64) -> Vec<f64> {
    let mut out = theta_hat.to_vec();
    project_in_place(&mut out, radius);
    out
}

pub(crate) fn project_in_place(theta_hat: &mut [f64], radius: f64) {
    let norm = theta_hat.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > radius {
        let s = radius / norm;
        theta_hat.iter_mut().for_each(|v| *v *= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_setup() -> (PlantParams, ReferenceModel, L1Config) {
        let plant = PlantParams::new(vec![-1.0]).unwrap();
        let q = SquareMatrix::from_row_major(1, vec![2.0]).unwrap();
        let reference = ReferenceModel::new(vec![1.0], q).unwrap();
        (plant, reference, L1Config::new(4.0, 10.0, None).unwrap())
    }

    #[test]
    fn theta_examples() {
        let r = ReferenceModel::with_identity_q(vec![1.0, 2.0]).unwrap();
        let t = theta_from(&PlantParams::new(vec![2.0, 3.0]).unwrap(), &r).unwrap();
        assert_eq!(t.as_slice(), &[1.0, 1.0]);
        let t = theta_from(&PlantParams::new(vec![1.0, 2.0]).unwrap(), &r).unwrap();
        assert_eq!(t.as_slice(), &[0.0, 0.0]);
        let (plant, reference, _) = scalar_setup();
        assert_eq!(theta_from(&plant, &reference).unwrap().as_slice(), &[-2.0]);
        assert!(theta_from(&PlantParams::new(vec![1.0]).unwrap(), &r).is_err());
    }

    #[test]
    fn theta_reparameterises_companion() {
        let plant = PlantParams::new(vec![-0.25, 2.5, -1.0]).unwrap();
        let r = ReferenceModel::with_identity_q(vec![1.0, 3.0, 3.0]).unwrap();
        let theta = theta_from(&plant, &r).unwrap();
        let recovered: Vec<f64> = r.a_m().iter().zip(theta.as_slice()).map(|(m, t)| m + t).collect();
        assert_eq!(
            SquareMatrix::companion(&recovered).unwrap(),
            plant.system_matrix()
        );
    }

    #[test]
    fn pi_gain_examples() {
        let g = pi_gains(3.0, &ReferenceModel::with_identity_q(vec![1.0, 2.0]).unwrap()).unwrap();
        assert_eq!((g.k_i(), g.k_p()), (&[3.0, 6.0][..], &[0.0, 3.0][..]));
        let g = pi_gains(4.0, &ReferenceModel::with_identity_q(vec![1.0]).unwrap()).unwrap();
        assert_eq!((g.k_i(), g.k_p()), (&[4.0][..], &[4.0][..]));
        let g =
            pi_gains(1.0, &ReferenceModel::with_identity_q(vec![2.0, 3.0, 5.0]).unwrap()).unwrap();
        assert_eq!((g.k_i(), g.k_p()), (&[2.0, 3.0, 5.0][..], &[0.0, 0.0, 1.0][..]));
        assert!(pi_gains(0.0, &ReferenceModel::with_identity_q(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn reference_model_validation() {
        let err = ReferenceModel::with_identity_q(vec![1.0, -2.0]).unwrap_err();
        assert!(err.to_string().contains("a^m_i > 0"), "{err}");
        // Positive coefficients but not Hurwitz: s^3 + s^2 + s + 4.
        assert!(ReferenceModel::with_identity_q(vec![4.0, 1.0, 1.0]).is_err());
        assert!(ReferenceModel::new(vec![1.0], SquareMatrix::identity(2)).is_err());
    }

    #[test]
    fn l1ac_rhs_examples() {
        let (plant, reference, cfg) = scalar_setup();
        assert!((reference.p()[(0, 0)] - 1.0).abs() < 1e-14);

        let s = L1State { x: vec![1.0], u: 0.0, x_hat: vec![1.0], theta_hat: vec![0.0] };
        let d = l1ac_rhs(&s, &plant, &reference, &cfg).unwrap();
        assert_eq!((d.x[0], d.u, d.x_hat[0], d.theta_hat[0]), (1.0, 0.0, -1.0, 0.0));

        // x̃ = -1: θ̂̇ = γ·x·x̃·P = 10·1·(-1)·1
        let s = L1State { x_hat: vec![0.0], ..s };
        let d = l1ac_rhs(&s, &plant, &reference, &cfg).unwrap();
        assert!((d.theta_hat[0] + 10.0).abs() < 1e-13);

        // θ̂ = θ and u = θᵀx: the filter is at rest.
        let s = L1State { x: vec![1.0], u: -2.0, x_hat: vec![1.0], theta_hat: vec![-2.0] };
        assert_eq!(l1ac_rhs(&s, &plant, &reference, &cfg).unwrap().u, 0.0);
    }

    #[test]
    fn l1ac_rhs_rejects_bad_state() {
        let (plant, reference, cfg) = scalar_setup();
        let s = L1State { x: vec![f64::NAN], u: 0.0, x_hat: vec![0.0], theta_hat: vec![0.0] };
        assert!(matches!(
            l1ac_rhs(&s, &plant, &reference, &cfg),
            Err(Error::NumericalBlowup(_))
        ));
        let s = L1State { x: vec![1.0, 2.0], u: 0.0, x_hat: vec![0.0], theta_hat: vec![0.0] };
        assert!(l1ac_rhs(&s, &plant, &reference, &cfg).is_err());
    }

    #[test]
    fn pi_rhs_examples() {
        let (plant, reference, _) = scalar_setup();
        let gains = pi_gains(4.0, &reference).unwrap();
        let d = pi_rhs(&PiState { x: vec![1.0], v: 4.0 }, &plant, &gains).unwrap();
        assert_eq!((d.x[0], d.v), (1.0, -4.0));

        let d = pi_rhs(&PiState { x: vec![0.0], v: 2.5 }, &plant, &gains).unwrap();
        assert_eq!((d.x[0], d.v), (2.5, 0.0));
    }

    #[test]
    fn pi_rhs_matches_assembled_closed_loop_matrix() {
        use rand::{Rng, SeedableRng};
        let plant = PlantParams::new(vec![-1.5, 0.7]).unwrap();
        let reference = ReferenceModel::with_identity_q(vec![2.0, 3.0]).unwrap();
        let k = 2.5;
        let gains = pi_gains(k, &reference).unwrap();
        // [ẋ; v̇] = M [x; v], M = [[A - b K_Pᵀ, b], [-K_Iᵀ, 0]], assembled by hand.
        let (a1, a2) = (-1.5, 0.7);
        let m = [
            [0.0, 1.0, 0.0],
            [-a1, -a2 - k, 1.0],
            [-k * 2.0, -k * 3.0, 0.0],
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let y: [f64; 3] = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let d = pi_rhs(&PiState { x: y[..2].to_vec(), v: y[2] }, &plant, &gains).unwrap();
            let got = [d.x[0], d.x[1], d.v];
            for (row, g) in m.iter().zip(got) {
                let e: f64 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                assert!((e - g).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perturbed_pi_examples() {
        let (plant, reference, _) = scalar_setup();
        let gains = pi_gains(4.0, &reference).unwrap();
        let s = PiState { x: vec![1.0], v: 4.0 };
        assert_eq!(
            perturbed_pi_rhs(&s, &plant, &gains, 4.0, 0.0).unwrap(),
            pi_rhs(&s, &plant, &gains).unwrap()
        );
        assert_eq!(perturbed_pi_rhs(&s, &plant, &gains, 4.0, 0.5).unwrap().v, -2.0);
    }

    #[test]
    fn pi_gains_ignore_plant() {
        let reference = ReferenceModel::with_identity_q(vec![1.0, 2.0]).unwrap();
        // The signature admits no plant; two plants sharing a reference get
        // identical gains trivially.
        let _p1 = PlantParams::new(vec![5.0, -3.0]).unwrap();
        let _p2 = PlantParams::new(vec![-2.0, 0.1]).unwrap();
        assert_eq!(pi_gains(2.0, &reference).unwrap(), pi_gains(2.0, &reference).unwrap());
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_theta(&[3.0, 4.0], 10.0), vec![3.0, 4.0]);
        assert_eq!(project_theta(&[3.0, 4.0], 5.0), vec![3.0, 4.0]);
        let p = project_theta(&[6.0, 8.0], 5.0);
        assert!((p[0] - 3.0).abs() < 1e-15 && (p[1] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(L1Config::new(0.0, 1.0, None).is_err());
        assert!(L1Config::new(1.0, -1.0, None).is_err());
        assert!(L1Config::new(1.0, 1.0, Some(0.0)).is_err());
        assert!(PlantParams::new(vec![]).is_err());
    }
}
