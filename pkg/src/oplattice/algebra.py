"""Unital *-closed matrix algebras.

An algebra is carried concretely as a Hilbert-Schmidt orthonormal basis
of its span inside M_d. Bases are non-canonical: two results are "the
same algebra" when their spans agree, which is what `same_span` tests.
The main entry points are `close` (generate the smallest unital
*-algebra containing a set of matrices), `commutant`, `baire_envelope`
(the generated von Neumann algebra, i.e. the bicommutant) and `center`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureNotReached, DimensionMismatch, ValidationError
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    hs_inner,
    hs_norm,
    matrix_from_json,
    matrix_to_json,
    null_space,
    operator_norm,
)


@dataclass(frozen=True)
class GeneratorSet:
    """A nonempty list of d x d matrices that will generate an algebra."""

    ambient_dim: int
    generators: tuple = field(repr=False)

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValidationError(f"ambient_dim must be positive, got {self.ambient_dim}")
        gens = tuple(self.generators)
        if not gens:
            raise ValidationError("a generator set needs at least one generator")
        checked = []
        for g in gens:
            m = as_matrix(g)
            if m.shape != (self.ambient_dim, self.ambient_dim):
                raise DimensionMismatch(
                    f"generator of shape {m.shape} does not match ambient dimension "
                    f"{self.ambient_dim}"
                )
            checked.append(m)
        object.__setattr__(self, "generators", tuple(checked))

    @classmethod
    def from_matrices(cls, mats) -> "GeneratorSet":
        mats = list(mats)
        if not mats:
            raise ValidationError("a generator set needs at least one generator")
        first = as_matrix(mats[0])
        return cls(ambient_dim=first.shape[0], generators=tuple(mats))


@dataclass(frozen=True)
class AlgebraBasis:
    """Hilbert-Schmidt orthonormal basis of a unital *-closed subspace of M_d.

    `basis` is a read-only array of shape (k, d, d). The span is closed
    under products and adjoints and contains the identity; `close` and
    `commutant` only ever construct bases with these properties, and the
    test suite verifies them as invariants.
    """

    ambient_dim: int
    basis: np.ndarray = field(repr=False)
    contains_unit: bool = True

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 3 or b.shape[1:] != (self.ambient_dim, self.ambient_dim):
            raise DimensionMismatch(
                f"basis stack of shape {b.shape} does not match ambient dimension "
                f"{self.ambient_dim}"
            )
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        """Linear dimension of the span."""
        return int(self.basis.shape[0])


def hs_coefficients(alg: AlgebraBasis, m) -> np.ndarray:
    """Coefficients of the Hilbert-Schmidt projection of ``m`` onto the span."""
    a = np.asarray(m, dtype=complex)
    return np.tensordot(alg.basis.conj(), a, axes=([1, 2], [0, 1]))


def project_onto(alg: AlgebraBasis, m) -> np.ndarray:
    """Hilbert-Schmidt orthogonal projection of ``m`` onto the span of ``alg``."""
    coeffs = hs_coefficients(alg, m)
    return np.tensordot(coeffs, alg.basis, axes=(0, 0))


def contains(alg: AlgebraBasis, m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``m`` lies in the span of ``alg``.

    Decided by projecting in the Hilbert-Schmidt geometry and comparing
    the residual against ``eq_tol * (1 + ||m||)``.
    """
    a = as_matrix(m)
    if a.shape[0] != alg.ambient_dim:
        raise DimensionMismatch(
            f"matrix of dimension {a.shape[0]} vs algebra in M_{alg.ambient_dim}"
        )
    residual = operator_norm(a - project_onto(alg, a))
    return residual <= tol.eq_tol * (1.0 + operator_norm(a))


def same_span(a: AlgebraBasis, b: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Subspace equality: every basis vector of each side lies in the other.

    Basis choices are non-canonical, so this is the meaningful notion of
    equality between algebra values.
    """
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("cannot compare algebras in different ambient dimensions")
    if a.dim != b.dim:
        return False

    def covered(x: AlgebraBasis, y: AlgebraBasis) -> bool:
        return all(hs_norm(v - project_onto(y, v)) <= tol.eq_tol for v in x.basis)

    return covered(a, b) and covered(b, a)


def close(
    gens: GeneratorSet,
    tol: Tolerance = DEFAULT_TOL,
    word_cap: int | None = None,
) -> AlgebraBasis:
    """Smallest unital *-closed, product-closed subspace of M_d containing the generators.

    Breadth-first over words in the generators and their adjoints: the
    unit is adjoined first, then each round multiplies the newly found
    directions by every generator and adjoint on both sides, extending
    the orthonormal basis by re-orthogonalized Gram-Schmidt. A round
    that adds no direction with relative residual above ``rank_tol``
    terminates the search. The resulting span does not depend on the
    generator ordering.

    Raises
    ------
    ClosureNotReached
        If new directions still appear at word length ``word_cap``
        (default ``2 d^2``), which signals the cap is too small.
    """
    d = gens.ambient_dim
    cap = 2 * d * d if word_cap is None else int(word_cap)
    if cap < 1:
        raise ValidationError(f"word_cap must be positive, got {cap}")

    multipliers = []
    for g in gens.generators:
        multipliers.append(np.asarray(g))
        multipliers.append(np.asarray(g).conj().T)

    basis: list[np.ndarray] = []

    def try_extend(candidate: np.ndarray) -> np.ndarray | None:
        scale = hs_norm(candidate)
        if scale == 0.0:
            return None
        r = candidate / scale
        for _ in range(2):  # re-orthogonalization: twice is enough at this scale
            for b in basis:
                r = r - hs_inner(b, r) * b
        residual = hs_norm(r)
        if residual <= tol.rank_tol:
            return None
        r = r / residual
        basis.append(r)
        return r

    frontier: list[np.ndarray] = []
    for seed_mat in [np.eye(d, dtype=complex), *multipliers]:
        added = try_extend(seed_mat)
        if added is not None:
            frontier.append(added)

    word_len = 1
    while frontier:
        if word_len >= cap:
            raise ClosureNotReached(
                f"closure still growing at word length {word_len} (cap {cap}); "
                f"span dimension so far {len(basis)}"
            )
        word_len += 1
        fresh: list[np.ndarray] = []
        for x in frontier:
            for g in multipliers:
                for candidate in (x @ g, g @ x):
                    added = try_extend(candidate)
                    if added is not None:
                        fresh.append(added)
        frontier = fresh

    return AlgebraBasis(ambient_dim=d, basis=np.stack(basis), contains_unit=True)


def commutant(alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """All of M_d commuting with every element of ``alg``.

    Assembles the joint linear system ``x a - a x = 0`` over the matrix
    entries (one d^2 x d^2 block per basis element, in the column-major
    vectorization where ``vec(a x) = (I (x) a) vec(x)``) and extracts its
    null space. The kernel vectors are orthonormal in C^{d^2}, hence the
    reshaped matrices are Hilbert-Schmidt orthonormal. The result is
    itself unital and *-closed.
    """
    d = alg.ambient_dim
    eye = np.eye(d)
    blocks = [np.kron(eye, a) - np.kron(a.T, eye) for a in alg.basis]
    system = np.vstack(blocks)
    kernel = null_space(system, tol)
    mats = [kernel[:, j].reshape(d, d, order="F") for j in range(kernel.shape[1])]
    return AlgebraBasis(ambient_dim=d, basis=np.stack(mats), contains_unit=True)


def baire_envelope(alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Monotone sequential closure of ``alg``.

    At finite dimension this is the von Neumann algebra generated by
    ``alg``, i.e. the bicommutant, which is how it is computed. It
    contains ``alg`` and applying it twice adds nothing.
    """
    return commutant(commutant(alg, tol), tol)


def center(alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Intersection of ``alg`` with its commutant.

    Solved inside the algebra: elements ``x = sum c_j b_j`` whose
    commutator with every basis element vanishes. Working in basis
    coefficients keeps the result exactly inside the span and maps the
    orthonormal coefficient kernel to a Hilbert-Schmidt orthonormal
    basis. The center is commutative and contains the identity.
    """
    k = alg.dim
    cols = []
    for b_j in alg.basis:
        rows_j = np.concatenate([(b_j @ b_i - b_i @ b_j).ravel() for b_i in alg.basis])
        cols.append(rows_j)
    system = np.stack(cols, axis=1)
    coeff_kernel = null_space(system, tol)
    mats = [
        np.tensordot(coeff_kernel[:, t], alg.basis, axes=(0, 0))
        for t in range(coeff_kernel.shape[1])
    ]
    if not mats:
        # cannot happen for a unital algebra; keep the shape contract anyway
        stack = np.zeros((0, alg.ambient_dim, alg.ambient_dim), dtype=complex)
    else:
        stack = np.stack(mats)
    return AlgebraBasis(ambient_dim=alg.ambient_dim, basis=stack, contains_unit=True)


def is_commutative(alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff all basis pairs commute within ``eq_tol``."""
    k = alg.dim
    for i in range(k):
        a = alg.basis[i]
        for j in range(i + 1, k):
            b = alg.basis[j]
            if operator_norm(a @ b - b @ a) > tol.eq_tol:
                return False
    return True


def generator_set_to_json(gens: GeneratorSet) -> dict:
    """Serialize as ``{"dim": d, "generators": [matrix, ...]}``."""
    return {
        "dim": gens.ambient_dim,
        "generators": [matrix_to_json(g) for g in gens.generators],
    }


def generator_set_from_json(data) -> GeneratorSet:
    if not isinstance(data, dict) or "dim" not in data or "generators" not in data:
        raise ValidationError('generator set JSON needs "dim" and "generators" keys')
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f'"dim" must be a positive integer, got {dim!r}')
    gens = data["generators"]
    if not isinstance(gens, list) or not gens:
        raise ValidationError('"generators" must be a nonempty array')
    mats = [matrix_from_json(g, expected_dim=dim) for g in gens]
    return GeneratorSet(ambient_dim=dim, generators=tuple(mats))


def algebra_to_json(alg: AlgebraBasis) -> dict:
    """Serialize an algebra basis (ambient dimension, span dimension, basis)."""
    return {
        "ambient_dim": alg.ambient_dim,
        "dim": alg.dim,
        "basis": [matrix_to_json(b) for b in alg.basis],
    }
