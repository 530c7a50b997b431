//! Outer solvers: forward-backward splitting on the Anscombe fidelity, the
//! two Gaussian baselines, and plain Richardson-Lucy.
//!
//! All prox-based methods iterate
//!
//! ```text
//!   α_{t+1} = prox_{μ f₂}(α_t − μ ∇f₁(α_t)),    α₀ = 0,
//! ```
//!
//! differing only in the smooth term f₁ and its step-size bound:
//! `fb-poisson` uses the stabilised fidelity with bound
//! `(3/2)^{3/2}/(2A‖H‖²‖z‖_∞)`, the Gaussian methods use `½‖obs − HΦα‖²`
//! with bound `1/(A‖H‖²)`. Richardson-Lucy is the classical multiplicative
//! update and ignores dictionary and λ.

use alloc::vec::Vec;

use crate::conv::ConvOperator;
use crate::dict::{CoeffVector, Dictionary};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::math;
use crate::prox::{self, ProxConfig};
use crate::vst::{self, FidelityContext};

/// Feasibility slack for the objective's positivity indicator, relative to ‖α‖₂.
const FEASIBILITY_REL_TOL: f64 = 1e-8;

/// Guard added to blurred means inside the Richardson-Lucy ratio.
const RL_EPS: f64 = 1e-12;

/// Fraction of the theoretical step bound used when no step is specified.
const DEFAULT_STEP_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FbPoisson,
    NaiveGauss,
    AnsGauss,
    RichardsonLucy,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::FbPoisson => "fb-poisson",
            Method::NaiveGauss => "naive-gauss",
            Method::AnsGauss => "ans-gauss",
            Method::RichardsonLucy => "rl",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        match name {
            "fb-poisson" => Some(Method::FbPoisson),
            "naive-gauss" => Some(Method::NaiveGauss),
            "ans-gauss" => Some(Method::AnsGauss),
            "rl" => Some(Method::RichardsonLucy),
            _ => None,
        }
    }

    pub const ALL: [Method; 4] = [
        Method::FbPoisson,
        Method::NaiveGauss,
        Method::AnsGauss,
        Method::RichardsonLucy,
    ];
}

/// Solver settings shared by all methods.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Regularisation weight λ ≥ 0 (ignored by Richardson-Lucy).
    pub lambda: f64,
    /// Step size override; `None` uses 0.9 × the method's theoretical bound.
    /// Must satisfy 0 < μ < bound for the prox-based methods.
    pub mu: Option<f64>,
    /// Outer iteration count.
    pub iters: usize,
    /// Inner Douglas-Rachford settings.
    pub prox: ProxConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: 0.0,
            mu: None,
            iters: 200,
            prox: ProxConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        SolverConfig {
            lambda,
            ..SolverConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter("lambda must be nonnegative"));
        }
        if self.iters == 0 {
            return Err(Error::InvalidParameter("iteration count must be >= 1"));
        }
        self.prox.validate()
    }

    fn resolve_mu(&self, bound: f64) -> Result<f64> {
        match self.mu {
            None => Ok(DEFAULT_STEP_FRACTION * bound),
            Some(mu) => {
                if mu > 0.0 && mu < bound {
                    Ok(mu)
                } else {
                    Err(Error::StepSizeTooLarge { mu, bound })
                }
            }
        }
    }
}

/// Objective sample; infeasible iterates are flagged rather than mapped to a
/// float infinity so serialised traces stay finite-valued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Finite(f64),
    Infeasible,
}

impl Objective {
    pub fn is_finite(&self) -> bool {
        matches!(self, Objective::Finite(_))
    }

    /// Value with `Infeasible` mapped to +∞ (for comparisons).
    pub fn as_f64(&self) -> f64 {
        match self {
            Objective::Finite(v) => *v,
            Objective::Infeasible => f64::INFINITY,
        }
    }
}

/// Outcome of one solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub method: Method,
    /// Final coefficients α̂ (for Richardson-Lucy: the image itself under an
    /// identity layout).
    pub alpha: CoeffVector,
    /// Restored image x̂ = P_C(Φ α̂); nonnegative everywhere.
    pub image: Image,
    /// Per-iteration objective J(α_t) (Richardson-Lucy records the Kullback-
    /// Leibler divergence of the fit instead).
    pub objective_trace: Vec<Objective>,
    /// Per-iteration step length ‖α_{t+1} − α_t‖₂.
    pub residual_trace: Vec<f64>,
    /// Number of inner prox calls that hit the cap without converging.
    pub prox_failures: usize,
    /// Step size actually used (0 for Richardson-Lucy).
    pub mu: f64,
}

/// ∇f₁(α) = Φᵀ Hᵀ ∇F(H Φ α): the fidelity gradient pulled back through the
/// dictionary.
pub fn gradient_f1(
    ctx: &FidelityContext,
    d: &Dictionary,
    alpha: &CoeffVector,
) -> Result<CoeffVector> {
    d.analyze(&ctx.gradient(&d.synthesize(alpha)?)?)
}

/// J(α) = F(HΦα) + λ‖α‖₁ when Φα is feasible (≥ −1e−8·‖α‖ elementwise),
/// otherwise the infeasible marker.
pub fn objective_value(
    ctx: &FidelityContext,
    d: &Dictionary,
    alpha: &CoeffVector,
    lambda: f64,
) -> Result<Objective> {
    let synth = d.synthesize(alpha)?;
    if synth.min_value() < -FEASIBILITY_REL_TOL * alpha.norm_l2() {
        return Ok(Objective::Infeasible);
    }
    Ok(Objective::Finite(
        ctx.value(&synth)? + lambda * alpha.l1_norm(),
    ))
}

/// Kullback-Leibler divergence D(y ‖ m) = Σ [y·ln(y/m) − y + m], the natural
/// fit measure for Poisson data (used to monitor Richardson-Lucy).
pub fn kl_divergence(y: &Image, mean: &Image) -> Result<f64> {
    y.check_dims(mean)?;
    let mut acc = 0.0;
    for (&yi, &mi) in y.data().iter().zip(mean.data()) {
        let m = mi.max(RL_EPS);
        if yi > 0.0 {
            acc += yi * math::ln(yi / m) - yi + m;
        } else {
            acc += m;
        }
    }
    Ok(acc)
}

/// Dispatch by method; the dictionary is ignored by Richardson-Lucy.
pub fn solve(
    method: Method,
    y: &Image,
    psf: &Image,
    d: &Dictionary,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    match method {
        Method::FbPoisson => solve_fb_poisson(y, psf, d, cfg),
        Method::NaiveGauss => solve_naive_gauss(y, psf, d, cfg),
        Method::AnsGauss => solve_ans_gauss(y, psf, d, cfg),
        Method::RichardsonLucy => solve_rl(y, psf, cfg),
    }
}

/// Forward-backward iteration on the Anscombe-stabilised fidelity.
pub fn solve_fb_poisson(
    y: &Image,
    psf: &Image,
    d: &Dictionary,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_problem_dims(y, psf, d)?;
    let op = ConvOperator::new(psf);
    let ctx = FidelityContext::from_counts(y, &op)?;
    let bound = ctx.step_size_bound(d.frame_constant())?;
    let mu = cfg.resolve_mu(bound)?;

    let loop_out = forward_backward(
        d,
        cfg,
        mu,
        |alpha| gradient_f1(&ctx, d, alpha),
        |alpha| objective_value(&ctx, d, alpha, cfg.lambda),
    )?;
    let image = prox::project_positive(&d.synthesize(&loop_out.alpha)?);
    Ok(loop_out.into_result(Method::FbPoisson, image, mu))
}

/// Same iteration with the plain Gaussian fidelity ½‖y − HΦα‖² on raw counts.
pub fn solve_naive_gauss(
    y: &Image,
    psf: &Image,
    d: &Dictionary,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_problem_dims(y, psf, d)?;
    let op = ConvOperator::new(psf);
    let loop_out = gaussian_loop(y, &op, d, cfg)?;
    let mu = loop_out.1;
    let image = prox::project_positive(&d.synthesize(&loop_out.0.alpha)?);
    Ok(loop_out.0.into_result(Method::NaiveGauss, image, mu))
}

/// Gaussian fidelity applied to the stabilised observation z = anscombe(y),
/// with the final image mapped back through the algebraic inverse transform.
pub fn solve_ans_gauss(
    y: &Image,
    psf: &Image,
    d: &Dictionary,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_problem_dims(y, psf, d)?;
    let op = ConvOperator::new(psf);
    let z = vst::anscombe(y)?;
    let loop_out = gaussian_loop(&z, &op, d, cfg)?;
    let mu = loop_out.1;
    let image = vst::inverse_anscombe(&prox::project_positive(&d.synthesize(&loop_out.0.alpha)?));
    Ok(loop_out.0.into_result(Method::AnsGauss, image, mu))
}

/// Richardson-Lucy multiplicative update `x ← x ⊙ Hᵀ(y ⊘ (Hx + ε))`,
/// started at the mean of the observation.
pub fn solve_rl(y: &Image, psf: &Image, cfg: &SolverConfig) -> Result<SolveResult> {
    if cfg.iters == 0 {
        return Err(Error::InvalidParameter("iteration count must be >= 1"));
    }
    if y.width() != psf.width() || y.height() != psf.height() {
        return Err(Error::DimensionMismatch {
            expected: (y.width(), y.height()),
            got: (psf.width(), psf.height()),
        });
    }
    for (i, &v) in y.data().iter().enumerate() {
        if v < 0.0 {
            return Err(Error::NegativeCount { index: i, value: v });
        }
    }
    let op = ConvOperator::new(psf);
    let mean0 = (y.sum() / y.len() as f64).max(f64::EPSILON);
    let mut x = Image::constant(y.width(), y.height(), mean0);

    let mut objective_trace = Vec::with_capacity(cfg.iters);
    let mut residual_trace = Vec::with_capacity(cfg.iters);
    for _ in 0..cfg.iters {
        let hx = op.apply(&x)?;
        let ratio = hx.zip_map(y, |m, yi| yi / (m.max(0.0) + RL_EPS))?;
        let update = op.apply_adjoint(&ratio)?;
        let next = x.zip_map(&update, |xi, u| xi * u)?;
        residual_trace.push(next.sub(&x)?.norm_l2());
        x = next;
        objective_trace.push(Objective::Finite(kl_divergence(y, &op.apply(&x)?)?));
    }

    let image = prox::project_positive(&x);
    let alpha = CoeffVector::from_vec(
        crate::dict::CoeffLayout::Identity {
            width: image.width(),
            height: image.height(),
        },
        image.data().to_vec(),
    )?;
    Ok(SolveResult {
        method: Method::RichardsonLucy,
        alpha,
        image,
        objective_trace,
        residual_trace,
        prox_failures: 0,
        mu: 0.0,
    })
}

struct LoopOutput {
    alpha: CoeffVector,
    objective_trace: Vec<Objective>,
    residual_trace: Vec<f64>,
    prox_failures: usize,
}

impl LoopOutput {
    fn into_result(self, method: Method, image: Image, mu: f64) -> SolveResult {
        SolveResult {
            method,
            alpha: self.alpha,
            image,
            objective_trace: self.objective_trace,
            residual_trace: self.residual_trace,
            prox_failures: self.prox_failures,
            mu,
        }
    }
}

fn forward_backward(
    d: &Dictionary,
    cfg: &SolverConfig,
    mu: f64,
    grad: impl Fn(&CoeffVector) -> Result<CoeffVector>,
    objective: impl Fn(&CoeffVector) -> Result<Objective>,
) -> Result<LoopOutput> {
    let mut alpha = CoeffVector::zeros(d.layout());
    let mut objective_trace = Vec::with_capacity(cfg.iters);
    let mut residual_trace = Vec::with_capacity(cfg.iters);
    let mut prox_failures = 0usize;

    for _ in 0..cfg.iters {
        let g = grad(&alpha)?;
        let beta = alpha.add_scaled(-mu, &g)?;
        let out = prox::prox_f2(d, &beta, mu * cfg.lambda, &cfg.prox)?;
        if !out.converged {
            prox_failures += 1;
        }
        residual_trace.push(out.coeffs.sub(&alpha)?.norm_l2());
        alpha = out.coeffs;
        objective_trace.push(objective(&alpha)?);
    }

    Ok(LoopOutput {
        alpha,
        objective_trace,
        residual_trace,
        prox_failures,
    })
}

/// Shared body of the two Gaussian baselines; returns the loop output and the
/// resolved step size.
fn gaussian_loop(
    obs: &Image,
    op: &ConvOperator,
    d: &Dictionary,
    cfg: &SolverConfig,
) -> Result<(LoopOutput, f64)> {
    let h = op.operator_norm();
    if h <= 0.0 {
        return Err(Error::InvalidParameter("operator norm must be positive"));
    }
    let bound = 1.0 / (d.frame_constant() * h * h);
    let mu = cfg.resolve_mu(bound)?;

    let out = forward_backward(
        d,
        cfg,
        mu,
        |alpha| {
            let resid = op.apply(&d.synthesize(alpha)?)?.sub(obs)?;
            d.analyze(&op.apply_adjoint(&resid)?)
        },
        |alpha| {
            let synth = d.synthesize(alpha)?;
            if synth.min_value() < -FEASIBILITY_REL_TOL * alpha.norm_l2() {
                return Ok(Objective::Infeasible);
            }
            let r = op.apply(&synth)?.sub(obs)?;
            let v = 0.5 * r.data().iter().map(|x| x * x).sum::<f64>();
            Ok(Objective::Finite(v + cfg.lambda * alpha.l1_norm()))
        },
    )?;
    Ok((out, mu))
}

fn check_problem_dims(y: &Image, psf: &Image, d: &Dictionary) -> Result<()> {
    if y.width() != psf.width() || y.height() != psf.height() {
        return Err(Error::DimensionMismatch {
            expected: (y.width(), y.height()),
            got: (psf.width(), psf.height()),
        });
    }
    if y.width() != d.width() || y.height() != d.height() {
        return Err(Error::DimensionMismatch {
            expected: (d.width(), d.height()),
            got: (y.width(), y.height()),
        });
    }
    Ok(())
}
