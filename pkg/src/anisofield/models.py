"""Spectral model families for anisotropic Gaussian fields.

A model is a spectral density f on R^N, even in each coordinate, whose
high-frequency envelope is comparable to (sum_j |lambda_j|^{beta_j})^{-gamma}.
The field it induces has stationary increments, is pinned to zero at the
origin, and its smoothness along axis j is summarized by the exponent

    H_j = (beta_j / 2) * (gamma - sum_i 1/beta_i),

finite exactly when gamma > sum_j 1/beta_j (the legitimacy condition,
which is also what makes the increment variance integral converge).

Three families are provided:

* ``canonical_c``: f(lambda) = c0 / (1 + sum_j |lambda_j|^{beta_j})^gamma,
  the reference anisotropic family.
* ``fbm``: the isotropic density c(H, N) |lambda|^{-(2H+N)} normalized so
  the variogram at unit lag equals one, i.e. the field is fractional
  Brownian motion with index H.
* ``stein``: f(lambda) = (sum_j c_j (a_j + lambda_j^2)^{alpha_j})^{-nu},
  a space-time family with envelope exponents beta_j = alpha_j and
  gamma = 2 nu, hence H_j = alpha_j (nu - sum_l 1/(2 alpha_l)).
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, SingularDensityError
from .quadrature import QuadratureSpec, spectral_integral

KIND_CANONICAL = "canonical_c"
KIND_FBM = "fbm"
KIND_STEIN = "stein"


@dataclass(frozen=True)
class SpectralModel:
    """Tagged record for one spectral density.

    Use the module factories (:func:`canonical_c`, :func:`fbm`,
    :func:`stein`) instead of the raw constructor; they validate
    parameters and fill in derived fields.
    """

    kind: str
    dims: int
    beta: tuple = None
    gamma: float = None
    scale: float = 1.0
    hurst: float = None
    fbm_const: float = None
    stein_c: tuple = None
    stein_a: tuple = None
    stein_alpha: tuple = None
    nu: float = None


@dataclass(frozen=True)
class Legitimacy:
    """Outcome of the integrability check, with the violated inequality."""

    ok: bool
    reason: str = None


@dataclass(frozen=True)
class SmoothnessExponents:
    """Per-axis smoothness exponents H_j with Q = sum_j 1/H_j."""

    h: tuple
    q: float

    @property
    def h_bar(self):
        return tuple(min(1.0, v) for v in self.h)


def _positive_vector(name, values):
    vec = tuple(float(v) for v in values)
    if len(vec) == 0:
        raise ModelError(f"{name} must be non-empty")
    if any(not v > 0 or not math.isfinite(v) for v in vec):
        raise ModelError(f"{name} entries must be positive and finite")
    return vec


def canonical_c(beta, gamma, scale=1.0):
    """Model with density c0 / (1 + sum_j |lambda_j|^{beta_j})^gamma."""
    beta = _positive_vector("beta", beta)
    if not gamma > 0 or not math.isfinite(gamma):
        raise ModelError("gamma must be positive and finite")
    if not scale > 0 or not math.isfinite(scale):
        raise ModelError("scale must be positive and finite")
    return SpectralModel(kind=KIND_CANONICAL, dims=len(beta), beta=beta,
                         gamma=float(gamma), scale=float(scale))


def fbm(hurst, dims, fbm_const=None, quad=None):
    """Fractional Brownian motion of index ``hurst`` on R^dims.

    The spectral constant is chosen so the variogram at any unit lag
    equals one; pass ``fbm_const`` to reuse a previously computed value.
    """
    if not 0 < hurst < 1:
        raise ModelError("fbm requires hurst in (0, 1)")
    if not (isinstance(dims, (int, np.integer)) and dims >= 1):
        raise ModelError("dims must be a positive integer")
    if fbm_const is None:
        fbm_const = normalize_fbm_constant(hurst, dims, quad=quad)
    elif not fbm_const > 0:
        raise ModelError("fbm_const must be positive")
    return SpectralModel(kind=KIND_FBM, dims=int(dims), hurst=float(hurst),
                         fbm_const=float(fbm_const))


def stein(c, a, alpha, nu):
    """Model with density (sum_j c_j (a_j + lambda_j^2)^{alpha_j})^{-nu}."""
    c = _positive_vector("c", c)
    a = _positive_vector("a", a)
    alpha = _positive_vector("alpha", alpha)
    if not (len(c) == len(a) == len(alpha)):
        raise ModelError("c, a and alpha must have equal length")
    if not nu > 0 or not math.isfinite(nu):
        raise ModelError("nu must be positive and finite")
    return SpectralModel(kind=KIND_STEIN, dims=len(alpha), stein_c=c,
                         stein_a=a, stein_alpha=alpha, nu=float(nu))


@dataclass(frozen=True)
class DensityParts:
    """Density split as outer_map(sum_j axis_term(j, |lambda_j|)).

    All three families have this separable-sum structure, which lets the
    quadrature assemble the density on tensor grids by broadcasting
    per-axis transforms.  ``point`` evaluates the density at one
    coordinate vector.
    """

    axis_term: object
    outer_map: object
    point: object


def density_parts(model):
    """Build vectorized evaluation callables for ``model``."""
    if model.kind == KIND_CANONICAL:
        beta, gamma, scale = model.beta, model.gamma, model.scale

        def axis_term(a, x):
            return np.abs(x) ** beta[a]

        def outer_map(S):
            return scale * (1.0 + S) ** (-gamma)

    elif model.kind == KIND_FBM:
        expo = -(2.0 * model.hurst + model.dims) / 2.0
        const = model.fbm_const if model.fbm_const is not None else 1.0

        def axis_term(a, x):
            return np.asarray(x) ** 2

        def outer_map(S):
            return const * S**expo

    elif model.kind == KIND_STEIN:
        c, a_par, alpha, nu = model.stein_c, model.stein_a, model.stein_alpha, model.nu

        def axis_term(a, x):
            return c[a] * (a_par[a] + np.asarray(x) ** 2) ** alpha[a]

        def outer_map(S):
            return S ** (-nu)

    else:
        raise ModelError(f"unknown model kind: {model.kind!r}")

    def point(lam):
        lam = np.asarray(lam, dtype=float)
        S = 0.0
        for a in range(model.dims):
            S = S + axis_term(a, lam[..., a] if lam.ndim > 1 else lam[a])
        if model.kind == KIND_FBM and np.any(S == 0):
            raise SingularDensityError("fbm density is singular at lambda = 0")
        return outer_map(S)

    return DensityParts(axis_term=axis_term, outer_map=outer_map, point=point)


def evaluate_density(model, freq):
    """Evaluate f(lambda); accepts a vector or an (..., N) array."""
    freq = np.asarray(freq, dtype=float)
    if freq.shape[-1] != model.dims and freq.ndim >= 1:
        raise ModelError(f"frequency must have {model.dims} coordinates")
    value = density_parts(model).point(freq)
    return float(value) if np.ndim(value) == 0 else value


def legitimacy_check(model):
    """Check the integrability condition gamma > sum_j 1/beta_j."""
    if model.kind == KIND_CANONICAL:
        s = sum(1.0 / b for b in model.beta)
        if model.gamma > s:
            return Legitimacy(ok=True)
        return Legitimacy(ok=False, reason=(
            f"gamma = {model.gamma:g} must exceed sum(1/beta) = {s:g}"))
    if model.kind == KIND_FBM:
        return Legitimacy(ok=True)
    if model.kind == KIND_STEIN:
        s = sum(1.0 / a for a in model.stein_alpha)
        if 2.0 * model.nu > s:
            return Legitimacy(ok=True)
        return Legitimacy(ok=False, reason=(
            f"2*nu = {2 * model.nu:g} must exceed sum(1/alpha) = {s:g}"))
    raise ModelError(f"unknown model kind: {model.kind!r}")


def smoothness_exponents(model):
    """Per-axis exponents H_j of the induced field.

    Raises ModelError when the model fails the legitimacy check, since
    the exponents are only defined for integrable densities.
    """
    verdict = legitimacy_check(model)
    if not verdict.ok:
        raise ModelError(f"illegitimate model: {verdict.reason}")
    if model.kind == KIND_CANONICAL:
        gap = model.gamma - sum(1.0 / b for b in model.beta)
        h = tuple(0.5 * b * gap for b in model.beta)
    elif model.kind == KIND_FBM:
        h = (model.hurst,) * model.dims
    else:
        gap = model.nu - sum(0.5 / a for a in model.stein_alpha)
        h = tuple(a * gap for a in model.stein_alpha)
    q = sum(1.0 / v for v in h)
    return SmoothnessExponents(h=h, q=q)


def normalize_fbm_constant(hurst, dims, quad=None):
    """Spectral constant c(H, N) giving unit variogram at unit lags.

    Computed by integrating the unnormalized density against the
    increment kernel at h = e_1 and inverting, so the normalization is
    exact for the same quadrature settings.
    """
    if not 0 < hurst < 1:
        raise ModelError("fbm requires hurst in (0, 1)")
    quad = quad or QuadratureSpec()
    unit = SpectralModel(kind=KIND_FBM, dims=int(dims), hurst=float(hurst),
                         fbm_const=1.0)
    h = np.zeros(dims)
    h[0] = 1.0
    value, _ = spectral_integral(density_parts(unit), dims, h, quad, increment=True)
    return 1.0 / (2.0 * value)


_JSON_FIELDS = {
    KIND_CANONICAL: {"kind", "dims", "beta", "gamma", "scale"},
    KIND_FBM: {"kind", "dims", "hurst", "fbm_const"},
    KIND_STEIN: {"kind", "dims", "c", "a", "alpha", "nu"},
}


def model_to_dict(model):
    """JSON-ready dict with exactly the family's fields."""
    if model.kind == KIND_CANONICAL:
        return {"kind": model.kind, "dims": model.dims, "beta": list(model.beta),
                "gamma": model.gamma, "scale": model.scale}
    if model.kind == KIND_FBM:
        return {"kind": model.kind, "dims": model.dims, "hurst": model.hurst,
                "fbm_const": model.fbm_const}
    if model.kind == KIND_STEIN:
        return {"kind": model.kind, "dims": model.dims, "c": list(model.stein_c),
                "a": list(model.stein_a), "alpha": list(model.stein_alpha),
                "nu": model.nu}
    raise ModelError(f"unknown model kind: {model.kind!r}")


def model_from_dict(doc):
    """Inverse of :func:`model_to_dict`; unknown keys are rejected."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ModelError("model document must be an object with a 'kind' field")
    kind = doc["kind"]
    allowed = _JSON_FIELDS.get(kind)
    if allowed is None:
        raise ModelError(f"unknown model kind: {kind!r}")
    extra = set(doc) - allowed
    if extra:
        raise ModelError(f"unknown model fields: {sorted(extra)}")
    try:
        if kind == KIND_CANONICAL:
            model = canonical_c(doc["beta"], doc["gamma"], doc.get("scale", 1.0))
        elif kind == KIND_FBM:
            model = fbm(doc["hurst"], doc["dims"], fbm_const=doc.get("fbm_const"))
        else:
            model = stein(doc["c"], doc["a"], doc["alpha"], doc["nu"])
    except KeyError as exc:
        raise ModelError(f"missing model field: {exc.args[0]}") from None
    if "dims" in doc and model.dims != doc["dims"]:
        raise ModelError("dims is inconsistent with the parameter vectors")
    return model


def model_to_json(model):
    return json.dumps(model_to_dict(model))


def model_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid model JSON: {exc}") from None
    return model_from_dict(doc)
