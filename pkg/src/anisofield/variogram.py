"""Variograms, covariances and scale envelopes.

The variogram of a pinned stationary-increment field,

    v(h) = 2 int_{R^N} (1 - cos<h, lambda>) f(lambda) dlambda,

determines every second-order quantity in the package: the covariance of
the pinned field is C(s, t) = (v(s) + v(t) - v(s - t)) / 2, kriging
systems are assembled from it, and its small-lag behaviour along axis j
follows the scale function sigma_j.

This module also carries the separable space-time covariance family
(:class:`GneitingModel`), which is stationary rather than pinned and is
used for exact dense simulation and the space-time dimension tables.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError, QuadratureError
from .models import density_parts, legitimacy_check
from .quadrature import QuadratureSpec, spectral_integral


def variogram_numeric(model, h, quad=None):
    """Variogram v(h) by spectral quadrature.

    Parameters
    ----------
    model : SpectralModel
    h : array_like, shape (dims,)
        Lag vector; v(0) = 0 and v(h) = v(-h).
    quad : QuadratureSpec, optional

    Returns
    -------
    (value, err) : tuple of floats

    Raises
    ------
    QuadratureError
        If the error estimate exceeds ``quad.rel_tol`` times the value.
    ModelError
        If the model fails the legitimacy check.
    """
    quad = quad or QuadratureSpec()
    verdict = legitimacy_check(model)
    if not verdict.ok:
        raise ModelError(f"illegitimate model: {verdict.reason}")
    h = np.asarray(h, dtype=float)
    if h.shape != (model.dims,):
        raise ModelError(f"lag must have shape ({model.dims},)")
    if np.all(h == 0):
        return 0.0, 0.0
    value, err = spectral_integral(density_parts(model), model.dims, h, quad,
                                   increment=True)
    value, err = 2.0 * value, 2.0 * err
    if value < 0:
        if value < -err:
            raise QuadratureError(
                f"variogram came out negative ({value:g}) beyond its error "
                f"estimate {err:g}", value=value, err=err)
        value = 0.0
    if err > quad.rel_tol * value and value > 0:
        raise QuadratureError(
            f"variogram error estimate {err:g} exceeds rel_tol * value = "
            f"{quad.rel_tol * value:g}; enlarge truncation or panels",
            value=value, err=err)
    return value, err


def covariance_increment(model, s, t, quad=None):
    """Covariance C(s, t) = (v(s) + v(t) - v(s - t)) / 2 of the pinned field."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    vs, _ = variogram_numeric(model, s, quad)
    vt, _ = variogram_numeric(model, t, quad)
    vst, _ = variogram_numeric(model, s - t, quad)
    return 0.5 * (vs + vt - vst)


def sigma_scale(h_exponent, r):
    """Scale function sigma_j(r) for one axis.

    Equals r^(2H_j) for H_j < 1, r^2 |log r| at H_j = 1 (natural log),
    and r^2 for H_j > 1; sigma_j(0) = 0 in all branches.
    """
    if not r >= 0:
        raise ModelError("sigma_scale takes a nonnegative separation")
    if not h_exponent > 0:
        raise ModelError("sigma_scale takes a positive exponent")
    if r == 0:
        return 0.0
    if h_exponent < 1:
        return r ** (2.0 * h_exponent)
    if h_exponent == 1:
        return r**2 * abs(math.log(r))
    return r**2


def variogram_envelope(exponents, h):
    """Two-sided envelope shape sum_j sigma_j(|h_j|) for v near 0.

    Both bounds share the same shape (they differ only by constants), so
    the pair (shape, shape) is returned.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (len(exponents.h),):
        raise ModelError("lag length must match the exponent vector")
    shape = sum(sigma_scale(hj, abs(x)) for hj, x in zip(exponents.h, h))
    return shape, shape


def modulus_envelope(exponents, eps):
    """Uniform modulus of continuity shape sqrt(phi * log(1 + 1/phi)).

    Here phi(eps) = sum_j sigma_j(|eps_j|); the envelope vanishes at 0.
    """
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (len(exponents.h),):
        raise ModelError("eps length must match the exponent vector")
    phi = sum(sigma_scale(hj, abs(x)) for hj, x in zip(exponents.h, eps))
    if phi == 0:
        return 0.0
    return math.sqrt(phi * math.log1p(1.0 / phi))


@dataclass(frozen=True)
class VariogramTable:
    """Lags with variogram values and error estimates."""

    model_id: str
    lags: np.ndarray
    values: np.ndarray
    errs: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "lags", np.atleast_2d(np.asarray(self.lags, float)))
        object.__setattr__(self, "values", np.asarray(self.values, float))
        object.__setattr__(self, "errs", np.asarray(self.errs, float))
        n = self.lags.shape[0]
        if self.values.shape != (n,) or self.errs.shape != (n,):
            raise ModelError("table lags, values and errs must align")


def variogram_table(model, lags, quad=None, model_id=None):
    """Evaluate the variogram on a list of lag vectors."""
    lags = np.atleast_2d(np.asarray(lags, dtype=float))
    values = np.empty(lags.shape[0])
    errs = np.empty(lags.shape[0])
    for i, h in enumerate(lags):
        values[i], errs[i] = variogram_numeric(model, h, quad)
    return VariogramTable(model_id=model_id or model.kind, lags=lags,
                          values=values, errs=errs)


# ---------------------------------------------------------------------------
# Separable space-time covariance family


@dataclass(frozen=True)
class GneitingModel:
    """Stationary space-time covariance on R^d x R.

    C(x, t) = sigma2 / psi^(beta d / 2) * exp(-c |x|^(2 gamma) / psi^(beta gamma)),
    with psi = 1 + a |t|^(2 alpha).  Time smoothness is alpha, space
    smoothness gamma, and beta in (0, 1] couples the two.
    """

    d: int
    sigma2: float = 1.0
    a: float = 1.0
    c: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ModelError("spatial dimension d must be a positive integer")
        for name in ("sigma2", "a", "c"):
            if not getattr(self, name) > 0:
                raise ModelError(f"{name} must be positive")
        for name in ("alpha", "beta", "gamma"):
            val = getattr(self, name)
            if not 0 < val <= 1:
                raise ModelError(f"{name} must lie in (0, 1]")


def gneiting_covariance(gm, x, t):
    """Covariance C(x, t) at spatial lag x and time lag t."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape[-1] != gm.d:
        raise ModelError(f"spatial lag must have {gm.d} coordinates")
    psi = 1.0 + gm.a * np.abs(t) ** (2.0 * gm.alpha)
    r2g = np.sum(np.abs(x) ** 2, axis=-1) ** gm.gamma
    value = gm.sigma2 * psi ** (-0.5 * gm.beta * gm.d) * np.exp(
        -gm.c * r2g / psi ** (gm.beta * gm.gamma))
    return float(value) if np.ndim(value) == 0 else value


def gneiting_increment_variance(gm, x, t, y, s):
    """E[(Y(x, t) - Y(y, s))^2] = 2 C(0, 0) - 2 C(x - y, t - s)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 2.0 * gm.sigma2 - 2.0 * gneiting_covariance(gm, x - y, t - s)


_GNEITING_FIELDS = {"kind", "d", "sigma2", "a", "c", "alpha", "beta", "gamma"}


def gneiting_to_dict(gm):
    return {"kind": "gneiting", "d": gm.d, "sigma2": gm.sigma2, "a": gm.a,
            "c": gm.c, "alpha": gm.alpha, "beta": gm.beta, "gamma": gm.gamma}


def gneiting_from_dict(doc):
    if not isinstance(doc, dict) or doc.get("kind") != "gneiting":
        raise ModelError("expected an object with kind = 'gneiting'")
    extra = set(doc) - _GNEITING_FIELDS
    if extra:
        raise ModelError(f"unknown gneiting fields: {sorted(extra)}")
    try:
        return GneitingModel(d=doc["d"], sigma2=doc.get("sigma2", 1.0),
                             a=doc.get("a", 1.0), c=doc.get("c", 1.0),
                             alpha=doc.get("alpha", 1.0), beta=doc.get("beta", 1.0),
                             gamma=doc.get("gamma", 1.0))
    except KeyError as exc:
        raise ModelError(f"missing gneiting field: {exc.args[0]}") from None


def gneiting_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid gneiting JSON: {exc}") from None
    return gneiting_from_dict(doc)
