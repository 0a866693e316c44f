"""Dense complex linear algebra with one explicit tolerance policy.

Every other module funnels its numerical decisions (equality thresholds,
rank cutoffs, iteration limits) through a `Tolerance` value defined here,
so the policy lives in a single place instead of scattered magic numbers.
All matrices are dense ``complex128`` arrays; the scale of interest is
small (ambient dimension up to a few dozen), so nothing here tries to be
clever about storage or asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotProjector,
    ValidationError,
)


@dataclass(frozen=True)
class Tolerance:
    """Shared numerical policy.

    eq_tol
        Operator-norm threshold below which two matrices count as equal.
    rank_tol
        Relative singular-value cutoff for rank and null-space decisions.
    conv_tol
        Convergence threshold for iterative limits.
    max_iter
        Iteration cap for those limits.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-8
    conv_tol: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        for name in ("eq_tol", "rank_tol", "conv_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


DEFAULT_TOL = Tolerance()


def as_matrix(m, square: bool = True) -> np.ndarray:
    """Coerce ``m`` to a read-only complex matrix, validating shape and finiteness."""
    a = np.array(m, dtype=complex, order="C")
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got array of shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"matrix must be nonempty, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix entries must be finite (no NaN or Inf)")
    a.setflags(write=False)
    return a


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m, square=False).conj().T


def operator_norm(m) -> float:
    """Spectral norm: the square root of the largest eigenvalue of ``m* m``."""
    a = np.asarray(m, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, ord=2))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a† b)``."""
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(a))


def hermitian_eig(m, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a self-adjoint matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    descending order and matching orthonormal eigenvector columns, so
    that ``m == V @ diag(w) @ V†`` up to rounding.

    Raises
    ------
    NotHermitian
        If ``||m - m*||`` exceeds ``tol.eq_tol``.
    """
    a = as_matrix(m)
    defect = operator_norm(a - a.conj().T)
    if defect > tol.eq_tol:
        raise NotHermitian(f"matrix is not self-adjoint: ||m - m*|| = {defect:.3e}")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def rank_of(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: count of singular values above ``rank_tol`` times the largest.

    A matrix whose largest singular value does not exceed ``rank_tol``
    itself counts as zero and has rank 0. The operators handled by this
    package have O(1) scale, so a purely relative cutoff would mistake
    accumulated rounding noise for full rank.
    """
    a = as_matrix(m, square=False)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] <= tol.rank_tol:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s[0]))


def null_space(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``ker(m)``, returned as matrix columns.

    Accepts rectangular input (used for stacked systems); the kernel
    lives in the column dimension. The returned columns ``b`` satisfy
    ``||m b|| <= rank_tol * ||m||`` and the column count equals
    ``columns(m) - rank_of(m)``; the zero-matrix convention matches
    `rank_of`.
    """
    a = as_matrix(m, square=False)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = 0
    if s.size and s[0] > tol.rank_tol:
        rank = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return vh[rank:].conj().T.copy()


def is_projector(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``m`` is self-adjoint and idempotent within ``tol.eq_tol``."""
    try:
        ensure_projector(m, tol)
    except ValidationError:
        return False
    return True


def ensure_projector(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate that ``m`` is an orthogonal projector and return it read-only.

    Self-adjointness plus idempotence forces the spectrum into {0, 1},
    so no separate eigenvalue check is needed.
    """
    a = as_matrix(m)
    herm = operator_norm(a - a.conj().T)
    if herm > tol.eq_tol:
        raise NotProjector(f"not self-adjoint: ||p - p*|| = {herm:.3e}")
    idem = operator_norm(a @ a - a)
    if idem > tol.eq_tol:
        raise NotProjector(f"not idempotent: ||p^2 - p|| = {idem:.3e}")
    return a


def gap_clusters(values, threshold: float) -> list[tuple[int, int]]:
    """Split a sorted 1-d real array into contiguous ``[start, stop)`` runs.

    A new run begins wherever consecutive entries differ by more than
    ``threshold``.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return []
    bounds = [0]
    for i in range(1, v.size):
        if v[i] - v[i - 1] > threshold:
            bounds.append(i)
    bounds.append(int(v.size))
    return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]


def matrix_to_json(m) -> list:
    """Serialize a matrix as a JSON array of rows; each entry is ``[re, im]``."""
    a = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def matrix_from_json(rows, expected_dim: int | None = None, square: bool = True) -> np.ndarray:
    """Parse the ``[re, im]``-pair row format back into a complex matrix."""
    if not isinstance(rows, list) or not rows:
        raise ValidationError("matrix JSON must be a nonempty array of rows")
    data = []
    for row in rows:
        if not isinstance(row, list):
            raise ValidationError("matrix JSON rows must be arrays")
        parsed = []
        for entry in row:
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ValidationError("matrix entries must be [re, im] pairs of numbers")
            parsed.append(complex(entry[0], entry[1]))
        data.append(parsed)
    if len({len(row) for row in data}) != 1:
        raise ValidationError("matrix JSON rows must all have the same length")
    a = as_matrix(np.array(data, dtype=complex), square=square)
    if expected_dim is not None and a.shape != (expected_dim, expected_dim):
        raise DimensionMismatch(
            f"expected a {expected_dim}x{expected_dim} matrix, got shape {a.shape}"
        )
    return a
