"""Standard operator monotone functions and the skew-information weight kernel.

A standard monotone ``f`` satisfies ``f(1) = 1`` and ``f(x) = x f(1/x)``;
only regular ones (``f(0) > 0``) are admitted. For a state with spectrum
``{lambda_i}`` the skew information is ``sum_ij w(lambda_i, lambda_j) |H_ij|^2``
with

    w(x, y) = f(0)/2 * (x - y)**2 / (y * f(x / y))

and the limits ``w(x, x) = 0``, ``w(x, 0) = x/2``, ``w(0, y) = y/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "MonotoneFunction",
    "AxiomReport",
    "wigner_yanase",
    "wyd",
    "sld",
    "from_table",
    "builtin",
    "registered",
    "weight",
    "validate_standard",
    "default_grid",
]

# relative threshold below which x and y (or x and 1) count as equal
SINGULAR_RTOL = 1e-8
AXIOM_TOL = 1e-9


@dataclass(frozen=True)
class MonotoneFunction:
    """A standard operator monotone function.

    ``func`` must accept and return numpy arrays. ``f_at_zero`` is stored
    explicitly rather than evaluated, since several closed forms are only
    defined as limits at zero.
    """

    id: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    f_at_zero: float
    params: tuple = ()
    # largest inconsistency found while building a table-backed function
    table_conflict: float = field(default=0.0, repr=False)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @property
    def label(self) -> str:
        if self.params:
            return f"{self.id}({', '.join(f'{p:g}' for p in self.params)})"
        return self.id


def _wy(x):
    return ((1.0 + np.sqrt(x)) / 2.0) ** 2


def _sld(x):
    return (1.0 + x) / 2.0


def wigner_yanase() -> MonotoneFunction:
    return MonotoneFunction("WY", _wy, 0.25)


def sld() -> MonotoneFunction:
    return MonotoneFunction("SLD", _sld, 0.5)


def wyd(alpha: float) -> MonotoneFunction:
    """Wigner-Yanase-Dyson function for ``0 < alpha < 1``.

    ``f(x) = a(1-a)(x-1)^2 / ((x^a - 1)(x^(1-a) - 1))``, with the removable
    singularity at ``x = 1`` replaced by its limit 1.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"WYD parameter must lie in (0, 1), got {alpha}")
    c = alpha * (1.0 - alpha)

    def func(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        near_one = np.abs(x - 1.0) <= SINGULAR_RTOL * np.maximum(x, 1.0)
        zero = x == 0.0
        gen = ~(near_one | zero)
        xg = x[gen]
        lx = np.log(xg)
        # expm1 keeps the factors accurate close to x = 1
        out[gen] = c * (xg - 1.0) ** 2 / (np.expm1(alpha * lx) * np.expm1((1.0 - alpha) * lx))
        out[near_one] = 1.0
        out[zero] = c
        return out

    return MonotoneFunction("WYD", func, c, (alpha,))


def from_table(name: str, f0: float, samples, *, validate: bool = True) -> MonotoneFunction:
    """Build ``f`` from sampled values by monotone cubic interpolation.

    Samples with ``x > 1`` are folded onto ``(0, 1)`` through
    ``f(x) = x f(1/x)``; the interpolant lives on ``[0, 1]`` and the same
    relation extends it to ``x > 1``, so the symmetry axiom holds by
    construction. Disagreeing folded samples are recorded as a symmetry
    violation.

    With ``validate`` (the default) the result must pass
    :func:`validate_standard`; otherwise ``ValueError`` is raised.
    """
    pts: dict[float, float] = {0.0: float(f0)}
    conflict = 0.0
    for x, fx in samples:
        x, fx = float(x), float(fx)
        if x < 0:
            raise ValueError(f"table sample at negative x={x}")
        if x > 1.0:
            x, fx = 1.0 / x, fx / x
        key = min(pts, key=lambda k: abs(k - x))
        if abs(key - x) <= 1e-12 * max(x, 1.0):
            conflict = max(conflict, abs(pts[key] - fx) / max(1.0, abs(fx)))
        else:
            pts[x] = fx
    if 1.0 not in pts:
        raise ValueError("table must include a sample at x = 1 (or its mirror)")
    xs = np.array(sorted(pts))
    ys = np.array([pts[x] for x in xs])
    interp = PchipInterpolator(xs, ys, extrapolate=False)

    def func(x):
        x = np.asarray(x, dtype=float)
        big = x > 1.0
        out = np.empty_like(x)
        out[~big] = interp(x[~big])
        out[big] = x[big] * interp(1.0 / x[big])
        return out

    f = MonotoneFunction(str(name), func, float(f0), table_conflict=conflict)
    if validate:
        report = validate_standard(f)
        if not report.passed:
            raise ValueError(f"table function {name!r} is not a regular standard monotone: {report.failures()}")
    return f


_REGISTRY = {
    "WY": lambda alpha=None: wigner_yanase(),
    "SLD": lambda alpha=None: sld(),
    "WYD": lambda alpha=None: wyd(0.5 if alpha is None else alpha),
}


def builtin(fid: str, alpha: float | None = None) -> MonotoneFunction:
    """Look up a built-in function by id (``WY``, ``WYD``, ``SLD``)."""
    key = fid.upper()
    if key not in _REGISTRY:
        raise ValueError(f"unknown monotone function {fid!r}; choose from {sorted(_REGISTRY)}")
    return _REGISTRY[key](alpha)


def registered() -> list[MonotoneFunction]:
    """Representative instances of every built-in family."""
    return [wigner_yanase(), sld()] + [wyd(a) for a in (0.1, 0.25, 0.5, 0.75, 0.9)]


def weight(f: MonotoneFunction, x, y):
    """Kernel ``w(x, y)`` of the spectral skew-information sum.

    Vectorised over broadcastable ``x`` and ``y``. Returns a float when both
    inputs are scalars.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if np.any(x_arr < 0) or np.any(y_arr < 0):
        raise ValueError("weight is defined for nonnegative arguments only")
    xb, yb = np.broadcast_arrays(x_arr, y_arr)
    out = np.zeros(xb.shape)

    x_zero = xb == 0.0
    y_zero = yb == 0.0
    close = np.abs(xb - yb) <= SINGULAR_RTOL * np.maximum(np.maximum(xb, yb), 1e-300)
    out[y_zero & ~x_zero] = xb[y_zero & ~x_zero] / 2.0
    out[x_zero & ~y_zero] = yb[x_zero & ~y_zero] / 2.0

    gen = ~(x_zero | y_zero | close)
    # y f(x/y) = x f(y/x): dividing by the larger argument keeps f's input in
    # (0, 1), which avoids overflow and makes the kernel exactly symmetric
    big = np.maximum(xb[gen], yb[gen])
    small = np.minimum(xb[gen], yb[gen])
    out[gen] = 0.5 * f.f_at_zero * (big - small) ** 2 / (big * f(small / big))

    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out)
    return out


@dataclass
class AxiomReport:
    symmetry: float
    normalization: float
    monotonicity: float
    f_at_zero: float
    tol: float = AXIOM_TOL

    @property
    def regular(self) -> bool:
        return self.f_at_zero > 0

    @property
    def passed(self) -> bool:
        return (self.symmetry <= self.tol and self.normalization <= self.tol
                and self.monotonicity <= self.tol and self.regular)

    def failures(self) -> list[str]:
        out = []
        if self.symmetry > self.tol:
            out.append(f"symmetry f(x)=x f(1/x) violated by {self.symmetry:.3e}")
        if self.normalization > self.tol:
            out.append(f"normalization f(1)=1 violated by {self.normalization:.3e}")
        if self.monotonicity > self.tol:
            out.append(f"monotonicity violated by {self.monotonicity:.3e}")
        if not self.regular:
            out.append(f"not regular: f(0)={self.f_at_zero}")
        return out


def default_grid(n: int = 241) -> np.ndarray:
    return np.logspace(-6, 6, n)


def validate_standard(f: MonotoneFunction, grid=None, tol: float = AXIOM_TOL) -> AxiomReport:
    """Check the sampled necessary conditions for a regular standard monotone.

    Violations are measured relative to ``max(1, |f(x)|)``; monotonicity is
    the largest relative drop between consecutive grid points.
    """
    grid = default_grid() if grid is None else np.sort(np.asarray(grid, dtype=float))
    if np.any(grid <= 0):
        raise ValueError("validation grid must be strictly positive")
    fx = f(grid)
    mirrored = grid * f(1.0 / grid)
    scale = np.maximum(1.0, np.abs(fx))
    symmetry = float(np.max(np.abs(fx - mirrored) / scale))
    symmetry = max(symmetry, f.table_conflict)
    normalization = abs(float(f(np.array([1.0]))[0]) - 1.0)
    drops = (fx[:-1] - fx[1:]) / scale[:-1]
    monotonicity = float(max(0.0, np.max(drops))) if drops.size else 0.0
    if not math.isfinite(symmetry + normalization + monotonicity):
        symmetry = math.inf
    return AxiomReport(symmetry, normalization, monotonicity, float(f.f_at_zero), tol)
