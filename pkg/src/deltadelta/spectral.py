"""Sampled checks of the numerical range and resolvent of T.

The claims being checked are containment claims (W(T_M) inside [-1, 1],
||(lambda I - T_M)^-1|| <= 1/dist(lambda, [-1, 1])), so random sampling is
used instead of an eigendecomposition.  Sampling uses numpy's PCG64 stream
seeded through ``SeedSequence``: batch i draws from the i-th spawned child
of the master seed, so reports are bit-reproducible and batches could be run
in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import SpectralParameter
from .solver import DiscreteSystem, check_stability, solve
from .toeplitz import ToeplitzOperator

BATCH = 1000


@dataclass
class SpectralReport:
    M: int
    rayleigh_min: float = 0.0
    rayleigh_max: float = 0.0
    max_imag_rayleigh: float = 0.0
    samples: int = 0
    resolvent_samples: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "samples": self.samples,
            "rayleigh_min": self.rayleigh_min,
            "rayleigh_max": self.rayleigh_max,
            "max_imag_rayleigh": self.max_imag_rayleigh,
            "resolvent_samples": [
                {"lambda_re": lam.real, "lambda_im": lam.imag, "norm_ratio": ratio}
                for lam, ratio in self.resolvent_samples
            ],
        }


def random_unit_vectors(rng: np.random.Generator, M: int, count: int) -> np.ndarray:
    """``count`` complex Gaussian vectors, normalized, as columns."""
    v = rng.standard_normal((M, count)) + 1j * rng.standard_normal((M, count))
    return v / np.linalg.norm(v, axis=0)


def rayleigh_quotients(T: ToeplitzOperator, V) -> np.ndarray:
    """<v, T v> for each column v of V (not normalized)."""
    V = np.asarray(V, dtype=complex)
    return np.sum(np.conj(V) * T.matvec(V), axis=0)


def _batches(seed: int, total: int):
    children = np.random.SeedSequence(seed).spawn((total + BATCH - 1) // BATCH)
    for i, child in enumerate(children):
        yield np.random.default_rng(child), min(BATCH, total - i * BATCH)


def rayleigh_scan(T: ToeplitzOperator, samples: int, seed: int = 0) -> SpectralReport:
    """Extremes of <v, T v> over random unit vectors and the coordinate vectors."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    # coordinate vectors give the diagonal, which is zero
    diagonal = T.first_row[0]
    lo = hi = diagonal.real
    imag = abs(diagonal.imag)
    for rng, count in _batches(seed, samples):
        q = rayleigh_quotients(T, random_unit_vectors(rng, T.M, count))
        lo = min(lo, float(q.real.min()))
        hi = max(hi, float(q.real.max()))
        imag = max(imag, float(np.abs(q.imag).max()))
    return SpectralReport(T.M, float(lo), float(hi), float(imag), samples)


def resolvent_probe(T: ToeplitzOperator, lam_list, trials: int, seed: int = 0, method: str = "auto") -> SpectralReport:
    """max over random F of ||U|| dist(lambda, [-1, 1]) / ||F|| for each lambda."""
    params = [check_stability(lam) for lam in lam_list]
    report = SpectralReport(T.M)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    F = rng.standard_normal((T.M, trials)) + 1j * rng.standard_normal((T.M, trials))
    for lam in params:
        sol = solve(DiscreteSystem(lam, T, F), method)
        report.resolvent_samples.append((lam.lam, sol.bound_ratio))
    return report


def segment_resolvent_bound(lam) -> float:
    """1/dist(lambda, [-1, 1]), the bound every finite section obeys."""
    lam = lam if isinstance(lam, SpectralParameter) else check_stability(lam)
    return 1.0 / lam.dist_to_C
