"""The discrete Hilbert matrix T with entries 1/(i pi (n - m)) and zero diagonal.

Because h/(x_n - x_m) = 1/(n - m) on a regular mesh, the matrix does not
depend on the mesh width, only on its size M.  It is stored by its first row
and first column; ``dense`` materializes it when a factorization needs it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, DomainError, ValidationError

# rows per block in the direct product, bounds the temporary at ~64 MB
_DIRECT_BLOCK_BYTES = 1 << 26


def kernel(k) -> np.ndarray:
    """t_k = 1/(i pi k) for k != 0, t_0 = 0."""
    k = np.asarray(k)
    out = np.zeros(k.shape, dtype=complex)
    nz = k != 0
    out[nz] = 1.0 / (1j * np.pi * k[nz])
    return out


@dataclass(frozen=True)
class ToeplitzOperator:
    """Finite section of size M.

    ``first_row[k]`` is entry(0, k) = t_k and ``first_col[k]`` is
    entry(k, 0) = t_{-k}; entry(m, n) = t_{n-m}.
    """

    M: int
    first_row: np.ndarray
    first_col: np.ndarray

    def entry(self, m: int, n: int) -> complex:
        """Entry at 0-based row m (evaluation node) and column n (source node)."""
        if not (0 <= m < self.M and 0 <= n < self.M):
            raise IndexError(f"({m}, {n}) outside a {self.M}x{self.M} matrix")
        k = n - m
        return complex(self.first_row[k] if k >= 0 else self.first_col[-k])

    def dense(self) -> np.ndarray:
        idx = np.arange(self.M)
        k = idx[None, :] - idx[:, None]
        return np.where(k >= 0, self.first_row[np.abs(k)], self.first_col[np.abs(k)])

    @cached_property
    def _circulant_fft(self) -> np.ndarray:
        size = 2 * self.M
        column = np.zeros(size, dtype=complex)
        column[: self.M] = self.first_col
        column[self.M + 1 :] = self.first_row[1:][::-1]
        return np.fft.fft(column)

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.ndim not in (1, 2) or v.shape[0] != self.M:
            raise DimensionError(f"expected {self.M} rows, got shape {v.shape}", field="v")
        return v

    def matvec_direct(self, v) -> np.ndarray:
        """O(M^2) product; accepts a vector or a stack of column vectors."""
        v = self._check(v)
        rows = max(1, _DIRECT_BLOCK_BYTES // (16 * self.M))
        idx = np.arange(self.M)
        out = np.empty(v.shape, dtype=complex)
        for start in range(0, self.M, rows):
            stop = min(start + rows, self.M)
            block = kernel(idx[None, :] - idx[start:stop, None])
            out[start:stop] = block @ v
        return out

    def matvec_fft(self, v) -> np.ndarray:
        """Product through the circulant of size 2M embedding this section."""
        v = self._check(v)
        spectrum = self._circulant_fft if v.ndim == 1 else self._circulant_fft[:, None]
        padded = np.fft.fft(v, n=2 * self.M, axis=0)
        return np.fft.ifft(spectrum * padded, axis=0)[: self.M]

    def matvec(self, v) -> np.ndarray:
        return self.matvec_direct(v) if self.M <= 256 else self.matvec_fft(v)


def assemble(M: int) -> ToeplitzOperator:
    if int(M) != M or M < 1:
        raise ValidationError(f"section size must be a positive integer, got {M}", field="M")
    M = int(M)
    k = np.arange(M)
    row = kernel(k)
    col = kernel(-k)
    row.flags.writeable = False
    col.flags.writeable = False
    return ToeplitzOperator(M, row, col)


def symbol(tau: float, terms: int) -> tuple[float, float]:
    """Partial Fourier sum of the symbol and its closed form sign(tau) - tau/pi."""
    if not -np.pi < tau < np.pi:
        raise DomainError(f"tau must lie in (-pi, pi), got {tau}", field="tau")
    if int(terms) != terms or terms < 1:
        raise ValidationError(f"terms must be a positive integer, got {terms}", field="terms")
    m = np.arange(1, int(terms) + 1)
    partial = float(np.sum(2.0 * np.sin(m * tau) / (np.pi * m)))
    closed = float(np.sign(tau) - tau / np.pi) if tau != 0 else 0.0
    return partial, closed
