"""Reference quantities for the two population models, derived
independently of the package.

Everything here is computed from the model definitions alone (closed
forms, numeric root finding, numeric integration); nothing imports the
package under test. Frozen literals pin the values so a regression in
either route is caught by ``verify_consistency``.
"""
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize

# ------------------------------------------------------------ prediction
# Types: Z ~ N(0,1), gamma ~ U(0, 1.5), R ~ N(0,1); report X = Z +
# gamma*b1, score W = b0 + b1*X, outcome Y = Z + R. Expanding
# E[(Y - W)^2] over the types gives a quartic in the policy:
#   mse(b) = (1 - b1)^2 + 1 + b0^2 + 1.5*b0*b1^2 + 0.75*b1^4
# using E[gamma] = 0.75 and E[gamma^2] = 0.75.

GAMMA_MAX_CLS = 1.5


def cls_mse(beta) -> float:
    b0, b1 = float(beta[0]), float(beta[1])
    return (1 - b1) ** 2 + 1 + b0 ** 2 + 1.5 * b0 * b1 ** 2 + 0.75 * b1 ** 4


def cls_mse_grad(beta) -> np.ndarray:
    b0, b1 = float(beta[0]), float(beta[1])
    return np.array([2 * b0 + 1.5 * b1 ** 2,
                     -2 * (1 - b1) + 3 * b0 * b1 + 3 * b1 ** 3])


def cls_mse_hessian(beta) -> np.ndarray:
    b0, b1 = float(beta[0]), float(beta[1])
    return np.array([[2.0, 3 * b1],
                     [3 * b1, 2 + 3 * b0 + 9 * b1 ** 2]])


def cls_optimum() -> tuple:
    """Minimize the closed-form mse by Newton iteration."""
    b = np.array([-0.5, 0.8])
    for _ in range(60):
        step = np.linalg.solve(cls_mse_hessian(b), cls_mse_grad(b))
        b = b - step
        if np.max(np.abs(step)) < 1e-14:
            break
    return b, cls_mse(b)


def cls_fixed_point() -> np.ndarray:
    """Self-reproducing refit of the prediction rule.

    Under announced slope b1 the reported covariate is X = Z + gamma*b1,
    so the population least-squares refit of Y on (1, X) has slope
    1/(1 + Var(gamma)*b1^2) with Var(gamma) = 0.1875. A fixed point
    solves 0.1875*s^3 + s - 1 = 0; the intercept is -E[gamma]*s^2.
    """
    s = brentq(lambda v: 0.1875 * v ** 3 + v - 1.0, 0.5, 1.0, xtol=1e-15)
    return np.array([-0.75 * s * s, s])


def cls_refit_map(beta) -> np.ndarray:
    """Population least-squares refit against reports induced by beta."""
    b1 = float(beta[1])
    slope = 1.0 / (1.0 + 0.1875 * b1 * b1)
    return np.array([-0.75 * slope * b1, slope])


def cls_rrm_average_mse(t_max: int) -> float:
    """Average closed-form mse along the population refit path."""
    beta = np.array([0.0, 0.0])
    total = 0.0
    for _ in range(t_max):
        beta = cls_refit_map(beta)
        total += cls_mse(beta)
    return total / t_max


# --------------------------------------------------------------- pricing
# Types: Z ~ U(10, 20), V ~ N(5 + Z, sd 2), gamma ~ U(0, 2.4); report
# X = (Z - gamma*p1*(V - p0))/d with d = 1 - p1^2*gamma, price
# W = p0 + p1*X, demand Y = V - W, revenue pi = W*Y. Writing
# A = V - p0 - p1*Z one gets W = V - A/d and Y = A/d, hence
#   E[pi] = m1(p1) E[V*A] - m2(p1) E[A^2]
# where m1 = E[1/d] = -log(1 - a*g)/(a*g) and m2 = E[1/d^2] =
# 1/(1 - a*g), with a = p1^2 and g the gamma upper bound.

GAMMA_MAX_PRC = 2.4
EV, EZ = 20.0, 15.0
VAR_Z = 100.0 / 12.0
EV2 = 412.0 + 1.0 / 3.0  # Var(V) + EV^2 = (100/12 + 4) + 400
EZ2 = 700.0 / 3.0
EVZ = 308.0 + 1.0 / 3.0  # Cov(V,Z) + EV*EZ = 100/12 + 300


def corr_vz() -> float:
    return float(np.sqrt(VAR_Z / (VAR_Z + 4.0)))


def prc_revenue(p, g: float = GAMMA_MAX_PRC) -> float:
    p0, p1 = float(p[0]), float(p[1])
    a = p1 * p1
    ag = a * g
    if ag >= 1.0:
        return -np.inf
    m1 = 1.0 if ag == 0.0 else -np.log1p(-ag) / ag
    m2 = 1.0 / (1.0 - ag)
    eva = EV2 - p0 * EV - p1 * EVZ
    ea2 = (EV2 + p0 * p0 + a * EZ2 - 2 * p0 * EV - 2 * p1 * EVZ
           + 2 * p0 * p1 * EZ)
    return m1 * eva - m2 * ea2


def prc_optimum() -> tuple:
    res = minimize(lambda p: -prc_revenue(p), x0=np.array([7.6, 0.19]),
                   method="Nelder-Mead",
                   options=dict(xatol=1e-12, fatol=1e-13, maxiter=20000))
    return res.x, -res.fun


def prc_naive_fit() -> np.ndarray:
    """Population fit on reports with no price discrimination.

    With p1 = 0 the report is X = Z and the reconstructed valuation is
    V itself; least squares of V on (1, Z) gives intercept 5, slope 1,
    and the revenue-maximizing rule against exogenous covariates is
    half of that.
    """
    return np.array([2.5, 0.5])


def _x_moments(p, g: float = GAMMA_MAX_PRC) -> tuple:
    """E[X], E[X^2], E[V*X] for reports induced by announced prices."""
    p0, p1 = float(p[0]), float(p[1])
    a = p1 * p1

    def ex(gm):
        d = 1.0 - a * gm
        return (EZ - gm * p1 * (EV - p0)) / d

    def evx(gm):
        d = 1.0 - a * gm
        return (EVZ - gm * p1 * (EV2 - p0 * EV)) / d

    def ex2(gm):
        d = 1.0 - a * gm
        num = (EZ2 - 2 * gm * p1 * (EVZ - p0 * EZ)
               + gm * gm * a * (EV2 - 2 * p0 * EV + p0 * p0))
        return num / (d * d)

    out = []
    for f in (ex, ex2, evx):
        val, _ = quad(f, 0.0, g, epsabs=1e-12, epsrel=1e-12)
        out.append(val / g)
    return tuple(out)


def prc_refit_map(p, g: float = GAMMA_MAX_PRC) -> np.ndarray:
    """Population refit: least squares of the reconstructed valuation
    on (1, X), halved."""
    ex, ex2, evx = _x_moments(p, g)
    var_x = ex2 - ex * ex
    slope = (evx - EV * ex) / var_x
    intercept = EV - slope * ex
    return 0.5 * np.array([intercept, slope])


def prc_rrm_path(t_max: int, g: float = GAMMA_MAX_PRC) -> tuple:
    """Deployed prices and average revenue along the refit path."""
    p = np.array([10.0, 0.0])
    fits, total = [], 0.0
    for _ in range(t_max):
        p = prc_refit_map(p, g)
        fits.append(p.copy())
        total += prc_revenue(p, g)
    return np.array(fits), total / t_max


# ------------------------------------------------------------- constants
CLS_BETA_STAR = np.array([-0.48558399768860017, 0.8046398761256286])
CLS_MSE_STAR = 1.1167628509372904
CLS_BETA_FP = np.array([-0.5736588640784271, 0.8745733162164867])
CLS_MSE_FP = 1.1254266837835132
PRC_P_STAR = np.array([7.640390281073724, 0.18568414352986445])
PRC_PI_STAR = 100.81104760704186
PRC_PI_UNIFORM = 100.0  # revenue at (10, 0): 10 * E[V - 10]
PRC_NAIVE_REGRET = -48.11740202070301
CORR_VZ = 0.8219949365267865


def verify_consistency() -> None:
    """Recompute every frozen literal from scratch."""
    b, v = cls_optimum()
    assert np.allclose(b, CLS_BETA_STAR, atol=1e-12)
    assert abs(v - CLS_MSE_STAR) < 1e-12
    assert np.max(np.abs(cls_mse_grad(CLS_BETA_STAR))) < 1e-12

    fp = cls_fixed_point()
    assert np.allclose(fp, CLS_BETA_FP, atol=1e-12)
    assert np.allclose(cls_refit_map(fp), fp, atol=1e-12)
    assert abs(cls_mse(fp) - CLS_MSE_FP) < 1e-12

    p, pi = prc_optimum()
    assert np.allclose(p, PRC_P_STAR, atol=1e-6)
    assert abs(pi - PRC_PI_STAR) < 1e-9
    assert abs(prc_revenue((10.0, 0.0)) - PRC_PI_UNIFORM) < 1e-9

    naive = prc_naive_fit()
    assert abs(prc_revenue(naive) - PRC_PI_STAR - PRC_NAIVE_REGRET) < 1e-9
    # the naive fit reproduces itself only approximately; the refit map
    # applied to the uniform price must return it exactly
    assert np.allclose(prc_refit_map((10.0, 0.0)), naive, atol=1e-9)

    assert abs(corr_vz() - CORR_VZ) < 1e-15
