"""Unimodal map families with a power-law critical point.

Every family is a one-parameter collection ``f_eps`` of unimodal maps of a
symmetric interval ``[lo, hi]`` (``hi = -lo``) with critical point at 0:
``f_eps`` is strictly increasing on ``[lo, 0]``, strictly decreasing on
``[0, hi]``, maps both endpoints to ``lo`` and the critical point to the
top of the range (``1 + eps`` on the normalized domain ``[-1, 1]``).

Built-in presets:

* ``quadratic``            -- ``1 + eps - (2 + eps) x^2``
* ``gamma_power(gamma)``   -- ``1 + eps - (2 + eps) |x|^gamma``
* ``figure6(c)``           -- the quartic ``-x^2 + 2 + c x^2 (4 - x^2)``
  on ``[-2, 2]``, affinely rescaled to ``[-1, 1]`` by default; the
  critical value always equals the right endpoint value, so ``eps = 0``
  and ``c`` is the sweep parameter.
* ``tent``                 -- ``1 + eps - (2 + eps) |x|``, the piecewise
  linear degenerate (``gamma = 1``) oracle.
* ``asym_quadratic(beta)`` -- a quartic perturbation of the quadratic with
  different one-sided limits of ``f'(x)/|x|`` at the critical point, so
  the map is genuinely asymmetric at the critical point.

All evaluation methods accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterRangeError

# Finite-difference steps: first derivative, and the wider step used for
# the second/third-derivative stencils (truncation vs roundoff at binary64).
FD_STEP_FIRST = 1e-6
FD_STEP_HIGH = 1e-4


@dataclass(frozen=True)
class SmoothnessReport:
    """Empirical smoothness diagnostics of one map of the family.

    ``schwarzian_max`` is the maximum of S(f) on a sample grid that
    excludes a neighbourhood of the critical point; it is ``None`` when
    the Schwarzian is undefined (piecewise linear map).
    """

    schwarzian_max: float | None
    expanding_at_endpoints: bool
    endpoint_derivatives: tuple[float, float]
    residual_holder_estimate: tuple[float, float]
    schwarzian_defined: bool = True


class MapFamily:
    """Base class for the presets.  Subclasses fill in closed forms."""

    kind: str = "base"

    def __init__(self, gamma: float, domain: tuple[float, float],
                 param_range: tuple[float, float], extra: dict | None = None):
        self.gamma = float(gamma)
        self.domain = (float(domain[0]), float(domain[1]))
        self.param_range = (float(param_range[0]), float(param_range[1]))
        self.extra = dict(extra or {})

    # -- validation -------------------------------------------------------

    def check_param(self, eps: float) -> float:
        lo, hi = self.param_range
        if not (lo <= eps <= hi):
            raise ParameterRangeError(
                f"{self.kind}: eps={eps} outside [{lo}, {hi}]")
        return float(eps)

    def check_domain(self, x) -> None:
        lo, hi = self.domain
        x = np.asarray(x)
        if np.any(x < lo - 1e-12) or np.any(x > hi + 1e-12):
            raise DomainError(f"{self.kind}: point outside [{lo}, {hi}]")

    # -- core evaluations (subclasses override the raw forms) -------------

    def _eval_raw(self, eps: float, x):
        raise NotImplementedError

    def _deriv_raw(self, eps: float, x):
        raise NotImplementedError

    def eval(self, eps: float, x):
        """f_eps(x); vectorized over x."""
        eps = self.check_param(eps)
        self.check_domain(x)
        return self._eval_raw(eps, x)

    def deriv(self, eps: float, x, side: int | None = None):
        """f_eps'(x); at x = 0 the one-sided derivative when ``side`` is given.

        For gamma > 1 the two-sided derivative at the critical point is 0
        and ``side`` is optional; the tent preset overrides this.
        """
        eps = self.check_param(eps)
        self.check_domain(x)
        return self._deriv_raw(eps, x)

    def critical_value(self, eps: float) -> float:
        return float(self.eval(eps, 0.0))

    # -- power-law residual ----------------------------------------------

    def power_law_residual(self, eps: float, x):
        """r_f(x) = f'(x) / |x|^(gamma - 1), undefined at x = 0."""
        eps = self.check_param(eps)
        x = np.asarray(x, dtype=float)
        if np.any(x == 0.0):
            raise DomainError("power_law_residual undefined at x = 0")
        r = self._deriv_raw(eps, x) / np.abs(x) ** (self.gamma - 1.0)
        return float(r) if r.ndim == 0 else r

    def residual_limits(self, eps: float, probe: float = 1e-9) -> tuple[float, float]:
        """One-sided limits (A, -B) of the residual at the critical point."""
        return (float(self.power_law_residual(eps, -probe)),
                float(self.power_law_residual(eps, probe)))

    # -- inverse branches -------------------------------------------------

    def inverse_branch(self, eps: float, side: int, y):
        """The unique preimage of y on [lo, 0] (side 0) or [0, hi] (side 1).

        Safeguarded bisection-Newton hybrid: the bisection bracket is always
        maintained and a Newton step is accepted only when it lands inside
        the bracket.  Subclasses with closed-form inverses override this.
        Absolute tolerance 1e-13 on x.
        """
        eps = self.check_param(eps)
        self.check_domain(y)
        return self._inverse_numeric(eps, side, y)

    def _inverse_numeric(self, eps: float, side: int, y):
        y_arr = np.asarray(y, dtype=float)
        scalar = y_arr.ndim == 0
        y_arr = np.atleast_1d(y_arr)
        dlo, dhi = self.domain
        if side == 0:
            lo = np.full_like(y_arr, dlo)
            hi = np.zeros_like(y_arr)
            increasing = True
        elif side == 1:
            lo = np.zeros_like(y_arr)
            hi = np.full_like(y_arr, dhi)
            increasing = False
        else:
            raise ValueError(f"side must be 0 or 1, got {side}")

        x = 0.5 * (lo + hi)
        tol = 1e-13
        for _ in range(200):
            # freeze converged elements so each result depends only on its
            # own input, not on what else shares the array (nested-cylinder
            # telescoping needs bit-for-bit reproducible endpoints)
            active = (hi - lo) >= tol
            if not np.any(active):
                break
            fx = self._eval_raw(eps, x) - y_arr
            go_right = (fx < 0) if increasing else (fx > 0)
            lo = np.where(active & go_right, x, lo)
            hi = np.where(active & ~go_right, x, hi)
            mid = 0.5 * (lo + hi)
            d = self._deriv_raw(eps, x)
            with np.errstate(divide="ignore", invalid="ignore"):
                xn = x - fx / d
            inside = np.isfinite(xn) & (xn > lo) & (xn < hi)
            x = np.where(active, np.where(inside, xn, mid), x)
        else:
            raise _tolerance_error(self.kind)
        x = 0.5 * (lo + hi)
        # Newton polish: the bracket tolerance is absolute, which is poor in
        # relative terms for roots near 0; a few unguarded steps recover
        # relative accuracy (at the critical value itself fx/d -> nan and
        # the bracket midpoint is kept).
        for _ in range(3):
            fx = self._eval_raw(eps, x) - y_arr
            d = self._deriv_raw(eps, x)
            with np.errstate(divide="ignore", invalid="ignore"):
                xn = x - fx / d
            ok = np.isfinite(xn) & (xn >= dlo) & (xn <= dhi)
            x = np.where(ok, xn, x)
        # at the critical value the root is the critical point exactly, but
        # f' -> 0 leaves the solvers with square-root conditioning; snap so
        # both branches agree there to machine precision
        x = np.where(y_arr >= float(self._eval_raw(eps, 0.0)), 0.0, x)
        # both domain endpoints map to the lower endpoint; returning them
        # exactly lets nested-cylinder computations telescope bit-for-bit
        x = np.where(y_arr == dlo, dlo if side == 0 else dhi, x)
        return float(x[0]) if scalar else x

    # -- diagnostics ------------------------------------------------------

    def smoothness_report(self, eps: float, grid_size: int = 400) -> SmoothnessReport:
        """Sampled Schwarzian sign, endpoint expansion and residual regularity."""
        eps = self.check_param(eps)
        dlo, dhi = self.domain
        half = dhi
        d_lo = abs(float(self._deriv_raw(eps, np.asarray(dlo + 1e-9))))
        d_hi = abs(float(self._deriv_raw(eps, np.asarray(dhi - 1e-9))))
        expanding = d_lo > 1.0 and d_hi > 1.0

        schwarzian_max = None
        defined = not self.piecewise_linear
        if defined:
            # exclude a neighbourhood of the critical point and the endpoints
            xs = np.linspace(dlo + 0.02 * half, dhi - 0.02 * half, grid_size)
            xs = xs[np.abs(xs) > 0.05 * half]
            h = FD_STEP_HIGH * half
            f1 = self._deriv_raw(eps, xs)
            f2 = (self._deriv_raw(eps, xs + h) - self._deriv_raw(eps, xs - h)) / (2 * h)
            f3 = (self._deriv_raw(eps, xs + h) - 2 * f1
                  + self._deriv_raw(eps, xs - h)) / h**2
            with np.errstate(divide="ignore", invalid="ignore"):
                s = f3 / f1 - 1.5 * (f2 / f1) ** 2
            s = s[np.isfinite(s)]
            schwarzian_max = float(np.max(s)) if s.size else None

        return SmoothnessReport(
            schwarzian_max=schwarzian_max,
            expanding_at_endpoints=expanding,
            endpoint_derivatives=(d_lo, d_hi),
            residual_holder_estimate=self._residual_holder(eps),
            schwarzian_defined=defined,
        )

    def _residual_holder(self, eps: float) -> tuple[float, float]:
        # empirical Holder-1 constant of r_f on each side via dyadic sampling
        ks = np.arange(3, 12)
        out = []
        for sign in (-1.0, 1.0):
            xs = sign * 0.5 ** ks
            r = np.asarray([self.power_law_residual(eps, float(x)) for x in xs])
            num = np.abs(np.diff(r))
            den = np.abs(np.diff(xs))
            out.append(float(np.max(num / den)))
        return (out[0], out[1])

    @property
    def piecewise_linear(self) -> bool:
        return False

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}(gamma={self.gamma}, extra={self.extra})"


def _tolerance_error(kind: str):
    from .errors import ConvergenceError
    return ConvergenceError(f"{kind}: inverse branch tolerance not reached "
                            "after 200 iterations")


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------


class Quadratic(MapFamily):
    """q_eps(x) = 1 + eps - (2 + eps) x^2 on [-1, 1]; gamma = 2."""

    kind = "quadratic"

    def __init__(self, param_range=(0.0, 1.0)):
        super().__init__(gamma=2.0, domain=(-1.0, 1.0), param_range=param_range)

    def _eval_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        return 1.0 + eps - (2.0 + eps) * x * x

    def _deriv_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        return -2.0 * (2.0 + eps) * x

    def _inverse_numeric(self, eps, side, y):
        y = np.asarray(y, dtype=float)
        t = np.sqrt(np.maximum((1.0 + eps - y) / (2.0 + eps), 0.0))
        x = -t if side == 0 else t
        return float(x) if x.ndim == 0 else x


class GammaPower(MapFamily):
    """f_eps(x) = 1 + eps - (2 + eps) |x|^gamma on [-1, 1]."""

    kind = "gamma_power"

    def __init__(self, gamma: float, param_range=(0.0, 1.0)):
        if not gamma > 1.0:
            raise ParameterRangeError("gamma_power requires gamma > 1")
        super().__init__(gamma=gamma, domain=(-1.0, 1.0),
                         param_range=param_range, extra={"gamma": gamma})

    def _eval_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        return 1.0 + eps - (2.0 + eps) * np.abs(x) ** self.gamma

    def _deriv_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        g = self.gamma
        return -g * (2.0 + eps) * np.abs(x) ** (g - 1.0) * np.sign(x)

    def _inverse_numeric(self, eps, side, y):
        y = np.asarray(y, dtype=float)
        t = np.maximum((1.0 + eps - y) / (2.0 + eps), 0.0) ** (1.0 / self.gamma)
        x = -t if side == 0 else t
        return float(x) if x.ndim == 0 else x


class Tent(MapFamily):
    """f_eps(x) = 1 + eps - (2 + eps) |x|: piecewise linear closed-form oracle."""

    kind = "tent"

    def __init__(self, param_range=(0.0, 1.0)):
        super().__init__(gamma=1.0, domain=(-1.0, 1.0), param_range=param_range)

    def _eval_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        return 1.0 + eps - (2.0 + eps) * np.abs(x)

    def _deriv_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        return -(2.0 + eps) * np.sign(x)

    def deriv(self, eps, x, side=None):
        eps = self.check_param(eps)
        self.check_domain(x)
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr == 0.0):
            if side is None:
                raise DomainError("tent: side flag required at the critical point")
            slope = (2.0 + eps) if side == 0 else -(2.0 + eps)
            d = np.where(x_arr == 0.0, slope, self._deriv_raw(eps, x_arr))
            return float(d) if d.ndim == 0 else d
        return self._deriv_raw(eps, x_arr)

    def _inverse_numeric(self, eps, side, y):
        y = np.asarray(y, dtype=float)
        t = np.maximum(1.0 + eps - y, 0.0) / (2.0 + eps)
        x = -t if side == 0 else t
        return float(x) if x.ndim == 0 else x

    @property
    def piecewise_linear(self) -> bool:
        return True


class Figure6(MapFamily):
    """The quartic family f_c(x) = -x^2 + 2 + c x^2 (4 - x^2) on [-2, 2].

    The critical value equals the right endpoint value for every ``c``
    (eps = 0 identically); ``c`` is the shape parameter.  By default the
    family is affinely rescaled to [-1, 1], which leaves every ratio
    quantity invariant; pass ``normalize=False`` to work on the raw
    domain (used by the conjugation-invariance tests).
    """

    kind = "figure6"
    C_RANGE = (-0.06, 0.06)

    def __init__(self, c: float, normalize: bool = True):
        lo, hi = self.C_RANGE
        if not (lo <= c <= hi):
            raise ParameterRangeError(f"figure6: c={c} outside [{lo}, {hi}]")
        dom = (-1.0, 1.0) if normalize else (-2.0, 2.0)
        super().__init__(gamma=2.0, domain=dom, param_range=(0.0, 0.0),
                         extra={"c": float(c), "normalized": normalize})
        self.c = float(c)
        self.normalized = normalize

    def _eval_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        c = self.c
        if self.normalized:
            # (1/2) f_c(2x):  1 - 2 x^2 + 8 c x^2 (1 - x^2)
            x2 = x * x
            return 1.0 - 2.0 * x2 + 8.0 * c * x2 * (1.0 - x2)
        x2 = x * x
        return -x2 + 2.0 + c * x2 * (4.0 - x2)

    def _deriv_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        c = self.c
        if self.normalized:
            return -4.0 * x + 16.0 * c * x * (1.0 - 2.0 * x * x)
        return -2.0 * x + c * (8.0 * x - 4.0 * x ** 3)


class AsymQuadratic(MapFamily):
    """A quartic-corrected quadratic with asymmetric power law at 0.

    On each side the map is ``1 + eps - k x^2 - (2 + eps - k) x^4`` with
    ``k = (2 + eps)(1 + beta)`` on the left and ``k = (2 + eps)(1 - beta)``
    on the right, ``|beta| < 1``.  Both endpoints map to -1 and the
    critical value is ``1 + eps``; the one-sided residual limits are
    ``A = 2 (2 + eps)(1 + beta)`` and ``B = 2 (2 + eps)(1 - beta)``, so the
    asymmetry A/B equals ``(1 + beta) / (1 - beta)``.  ``beta = 0``
    recovers the quadratic preset.
    """

    kind = "asym_quadratic"

    def __init__(self, beta: float, param_range=(0.0, 0.5)):
        if not abs(beta) < 1.0:
            raise ParameterRangeError("asym_quadratic requires |beta| < 1")
        super().__init__(gamma=2.0, domain=(-1.0, 1.0),
                         param_range=param_range, extra={"beta": float(beta)})
        self.beta = float(beta)

    def _coeffs(self, eps):
        a = (2.0 + eps) * (1.0 + self.beta)
        b = (2.0 + eps) * (1.0 - self.beta)
        return a, b

    def _eval_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        a, b = self._coeffs(eps)
        k = np.where(x <= 0.0, a, b)
        x2 = x * x
        return 1.0 + eps - k * x2 - (2.0 + eps - k) * x2 * x2

    def _deriv_raw(self, eps, x):
        x = np.asarray(x, dtype=float)
        a, b = self._coeffs(eps)
        k = np.where(x <= 0.0, a, b)
        return -2.0 * k * x - 4.0 * (2.0 + eps - k) * x ** 3


# ---------------------------------------------------------------------------
# Construction from a specification record
# ---------------------------------------------------------------------------

_PRESETS = ("quadratic", "gamma_power", "figure6", "tent", "asym_quadratic")


def make_family(kind: str, **params) -> MapFamily:
    """Build a preset by name.  Recognized params: gamma, c, beta, normalize."""
    if kind == "quadratic":
        return Quadratic()
    if kind == "gamma_power":
        return GammaPower(gamma=params.get("gamma", 2.0))
    if kind == "figure6":
        return Figure6(c=params.get("c", 0.0),
                       normalize=params.get("normalize", True))
    if kind == "tent":
        return Tent()
    if kind == "asym_quadratic":
        return AsymQuadratic(beta=params.get("beta", 0.0))
    raise ParameterRangeError(f"unknown family kind {kind!r}; "
                              f"expected one of {_PRESETS}")


def family_from_spec(spec: dict) -> MapFamily:
    """Build a family from a CLI config record.

    Keys: ``kind`` (required), ``gamma``, ``params`` (numeric map),
    ``beta`` (asymmetry, optional).
    """
    if "kind" not in spec:
        raise ParameterRangeError("family spec missing key 'kind'")
    params = dict(spec.get("params") or {})
    if "gamma" in spec:
        params.setdefault("gamma", spec["gamma"])
    if "beta" in spec:
        params.setdefault("beta", spec["beta"])
    return make_family(spec["kind"], **params)
