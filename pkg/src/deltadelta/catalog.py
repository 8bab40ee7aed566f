"""Closed-form solutions of  lambda u - A u = f  on (a, b).

The operator is the finite Hilbert transform

    A u(x) = 1/(i pi) p.v. int_a^b u(y) / (y - x) dy.

Three exact pairs (u, A u) are shipped, all obtained from boundary values of
Cauchy integrals and rescaled so that the solutions are real:

    const   u = 1                      A u = (i/pi) log((x-a)/(b-x))
    bump    u = sqrt((x-a)(b-x))       A u = i (x - (a+b)/2)
    power   u = sin(pi al) rho**al     A u = i (cos(pi al) rho**al - 1)

with rho = (x-a)/(b-x) and -1/2 < al < 1/2.  Right-hand sides follow as
f = lambda u - A u, so no quadrature is ever needed.

Everything is evaluated from the endpoint gaps (x - a, b - x); the
``*_gaps`` entry points let callers that already know those distances (for
example quadrature close to an endpoint) avoid the cancellation in b - x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnstableParameterError, ValidationError

KINDS = ("const", "bump", "power")
STABILITY_FLOOR = 1e-12


def segment_distance(lam: complex) -> float:
    """Distance from lam to the segment [-1, 1] of the real axis."""
    lam = complex(lam)
    if -1.0 <= lam.real <= 1.0:
        return abs(lam.imag)
    return min(abs(lam - 1.0), abs(lam + 1.0))


@dataclass(frozen=True)
class SpectralParameter:
    lam: complex
    dist_to_C: float

    def __init__(self, lam):
        lam = complex(lam)
        dist = segment_distance(lam)
        if not np.isfinite(dist) or dist < STABILITY_FLOOR:
            raise UnstableParameterError(lam, dist)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "dist_to_C", dist)

    @property
    def near_spectrum(self) -> bool:
        return self.dist_to_C < 1e-3


def _as_param(lam) -> complex:
    return lam.lam if isinstance(lam, SpectralParameter) else complex(lam)


@dataclass(frozen=True)
class ExactCase:
    kind: str
    a: float
    b: float
    alpha: float = 0.25

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown example {self.kind!r}; pick one of {KINDS}", field="example")
        if not self.b > self.a:
            raise ValidationError(f"need a < b, got ({self.a}, {self.b})", field="b")
        if self.kind == "power" and not -0.5 < self.alpha < 0.5:
            raise ValidationError(f"alpha must lie in (-1/2, 1/2), got {self.alpha}", field="alpha")

    @property
    def interval(self) -> tuple[float, float]:
        return self.a, self.b

    def gaps(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if not np.all((x > self.a) & (x < self.b)):
            bad = x[~((x > self.a) & (x < self.b))].ravel()[0]
            raise DomainError(f"x={bad!r} is not inside the open interval ({self.a}, {self.b})", field="x")
        return x - self.a, self.b - x

    # --- gap-based kernels -------------------------------------------------

    def _log_ratio(self, left, right):
        return np.log(left) - np.log(right)

    def u_gaps(self, left, right) -> np.ndarray:
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        if self.kind == "const":
            return np.ones(np.broadcast(left, right).shape, dtype=complex)
        if self.kind == "bump":
            return np.sqrt(left * right) + 0j
        rho_al = np.exp(self.alpha * self._log_ratio(left, right))
        return np.sin(np.pi * self.alpha) * rho_al + 0j

    def Au_gaps(self, left, right) -> np.ndarray:
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        if self.kind == "const":
            return 1j / np.pi * self._log_ratio(left, right)
        if self.kind == "bump":
            # x - (a+b)/2 written through the gaps
            return 1j * 0.5 * (left - right)
        rho_al = np.exp(self.alpha * self._log_ratio(left, right))
        return 1j * (np.cos(np.pi * self.alpha) * rho_al - 1.0)

    # --- pointwise evaluation ---------------------------------------------

    def u(self, x) -> np.ndarray:
        return self.u_gaps(*self.gaps(x))

    def Au(self, x) -> np.ndarray:
        return self.Au_gaps(*self.gaps(x))

    def f(self, lam, x) -> np.ndarray:
        left, right = self.gaps(x)
        return _as_param(lam) * self.u_gaps(left, right) - self.Au_gaps(left, right)

    def f_gaps(self, lam, left, right) -> np.ndarray:
        return _as_param(lam) * self.u_gaps(left, right) - self.Au_gaps(left, right)


def make_case(kind: str, a: float, b: float, alpha: float = 0.25) -> ExactCase:
    return ExactCase(kind, float(a), float(b), float(alpha))


def _scalar(v):
    return complex(v) if np.ndim(v) == 0 else v


def eval_u(case: ExactCase, x):
    return _scalar(case.u(x))


def eval_Au(case: ExactCase, x):
    return _scalar(case.Au(x))


def eval_f(case: ExactCase, lam, x):
    return _scalar(case.f(lam, x))
