"""Superselection sectors of a closed matrix algebra.

A unital *-closed algebra inside M_d splits along the minimal projectors
of its center into blocks, each unitarily equivalent to ``M_n (x) 1_m``
(a full matrix factor of size n acting with multiplicity m). This module
finds that block structure, classifies factors, and computes the
integer-valued dimension function on projector equivalence classes
(two projectors are equivalent when a partial isometry inside the
algebra maps one range onto the other; in each block the complete
invariant is the reduced rank).

Only type I structure exists at finite dimension; algebras without
minimal projectors (types II and III) have no matrix realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .algebra import AlgebraBasis, center, contains
from .errors import CenterDiagonalizationFailed, NotInAlgebra
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    ensure_projector,
    gap_clusters,
    hs_norm,
    matrix_to_json,
    operator_norm,
    rank_of,
)

# Internal reproducibility seeds; every randomized subroutine in this
# module derives its generator from one of these plus the attempt index,
# so identical inputs always produce identical output.
_CENTER_STREAM = 101
_BLOCK_STREAM = 102
_GENERIC_STREAM = 103

_MAX_ATTEMPTS = 5


def _internal_rng(stream: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((stream, attempt)))


@dataclass(frozen=True)
class Sector:
    """One block of the decomposition.

    `central_projector` is the minimal central projector carving out the
    block, `block_size` (n) the size of the full matrix factor,
    `multiplicity` (m) how many identical copies it acts on, and
    `isometry` a d x (n*m) matrix with orthonormal columns mapping block
    coordinates into ambient space: compressing any algebra element by
    the isometry yields ``beta (x) 1_m`` for an n x n matrix beta.
    """

    central_projector: np.ndarray = field(repr=False)
    block_size: int
    multiplicity: int
    isometry: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SectorDecomposition:
    ambient_dim: int
    sectors: tuple


def minimal_central_projectors(
    alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> list[np.ndarray]:
    """Pairwise-orthogonal minimal projectors of the center, summing to 1.

    A generic real combination of a self-adjoint basis of the center
    separates the joint spectrum with probability 1: its eigenvalue
    clusters are exactly the minimal central projectors. On cluster
    ambiguity the combination is redrawn, up to five times.
    """
    ctr = center(alg, tol)
    k = ctr.dim
    sa = []
    for b in ctr.basis:
        sa.append((b + b.conj().T) / 2.0)
        sa.append((b - b.conj().T) / 2.0j)

    for attempt in range(_MAX_ATTEMPTS):
        rng = _internal_rng(_CENTER_STREAM, attempt)
        h = np.zeros((alg.ambient_dim, alg.ambient_dim), dtype=complex)
        for s in sa:
            h = h + rng.standard_normal() * s
        h = (h + h.conj().T) / 2.0
        w, v = np.linalg.eigh(h)
        spread = float(w[-1] - w[0]) if w.size else 0.0
        clusters = gap_clusters(w, tol.rank_tol * max(1.0, spread))
        if len(clusters) != k:
            continue
        projs = []
        for start, stop in clusters:
            cols = v[:, start:stop]
            p = cols @ cols.conj().T
            projs.append((p + p.conj().T) / 2.0)
        if all(contains(ctr, p, tol) for p in projs):
            return projs

    raise CenterDiagonalizationFailed(
        f"could not separate the center into {k} eigenvalue clusters after "
        f"{_MAX_ATTEMPTS} attempts; the rank tolerance {tol.rank_tol} is likely degenerate"
    )


def _random_span_element(comp_basis: np.ndarray, rng: np.random.Generator, hermitian: bool):
    k = comp_basis.shape[0]
    coeffs = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    x = np.tensordot(coeffs, comp_basis, axes=(0, 0))
    if hermitian:
        x = (x + x.conj().T) / 2.0
    return x


def _block_isometry(
    comp_basis: np.ndarray, n: int, m: int, r: int, tol: Tolerance
) -> np.ndarray:
    """Orthonormal columns of C^r exhibiting the compressed span as M_n (x) 1_m.

    A generic self-adjoint element of the span has n eigenvalue clusters
    of size m; the clusters are the minimal projectors of the block. A
    generic span element then supplies the partial isometries aligning
    the multiplicity spaces of the clusters (polar parts of its
    compressions between cluster ranges).
    """
    for attempt in range(_MAX_ATTEMPTS):
        rng = _internal_rng(_BLOCK_STREAM, attempt)
        h = _random_span_element(comp_basis, rng, hermitian=True)
        w, v = np.linalg.eigh(h)
        spread = float(w[-1] - w[0]) if w.size else 0.0
        clusters = gap_clusters(w, tol.rank_tol * max(1.0, spread))
        if len(clusters) != n or any(stop - start != m for start, stop in clusters):
            continue
        copies = [v[:, start:stop] for start, stop in clusters]
        if n == 1:
            return copies[0]
        g = _random_span_element(comp_basis, rng, hermitian=False)
        cols = [copies[0]]
        aligned = True
        for j in range(1, n):
            w_j = copies[j].conj().T @ g @ copies[0]
            uu, ss, vv = np.linalg.svd(w_j)
            if ss[-1] <= tol.rank_tol * ss[0]:
                aligned = False
                break
            cols.append(copies[j] @ (uu @ vv))
        if aligned:
            return np.hstack(cols)

    raise CenterDiagonalizationFailed(
        f"could not exhibit a block of size {r} as a {n}-dimensional factor with "
        f"multiplicity {m} after {_MAX_ATTEMPTS} attempts"
    )


def _tensor_form_defect(isometry: np.ndarray, alg: AlgebraBasis, n: int, m: int) -> float:
    """Largest deviation of compressed basis elements from beta (x) 1_m form."""
    worst = 0.0
    eye_m = np.eye(m)
    for a in alg.basis:
        c = isometry.conj().T @ a @ isometry
        c4 = c.reshape(n, m, n, m)
        beta = np.einsum("jsks->jk", c4) / m
        worst = max(worst, hs_norm(c4 - np.einsum("jk,st->jskt", beta, eye_m)))
    return worst


def block_decomposition(
    alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> SectorDecomposition:
    """Full block structure of a closed algebra.

    Per minimal central projector z: compress the algebra to the range
    of z, read the block size n off the compressed span dimension (which
    is n^2 for a full matrix factor), require the multiplicity
    m = rank(z)/n to be integral, and build the isometry exhibiting the
    ``M_n (x) 1_m`` form. *-closed matrix algebras are always semisimple,
    so the structural sanity conditions are asserted rather than
    reported.
    """
    d = alg.ambient_dim
    zs = minimal_central_projectors(alg, tol)
    sectors = []
    for z in zs:
        r = int(round(float(np.trace(z).real)))
        w, v = np.linalg.eigh(z)
        q = v[:, d - r :]
        compressed = np.stack([q.conj().T @ a @ q for a in alg.basis])
        span_dim = rank_of(compressed.reshape(alg.dim, r * r), tol)
        n = isqrt(span_dim)
        if n * n != span_dim:
            raise CenterDiagonalizationFailed(
                f"compressed block span has dimension {span_dim}, not a perfect square; "
                "tolerances are likely degenerate"
            )
        m, rem = divmod(r, n)
        if rem != 0:
            raise CenterDiagonalizationFailed(
                f"block rank {r} is not divisible by block size {n}"
            )
        flat = compressed.reshape(alg.dim, r * r)
        _, s, vh = np.linalg.svd(flat, full_matrices=False)
        keep = s > tol.rank_tol * s[0]
        comp_basis = vh[keep].reshape(-1, r, r)
        block_cols = _block_isometry(comp_basis, n, m, r, tol)
        isometry = q @ block_cols
        defect = _tensor_form_defect(isometry, alg, n, m)
        assert defect <= 1e-8, f"transported block deviates from tensor form by {defect:.3e}"
        sectors.append(
            Sector(
                central_projector=z,
                block_size=n,
                multiplicity=m,
                isometry=isometry,
            )
        )
    assert sum(s.block_size * s.multiplicity for s in sectors) == d
    return SectorDecomposition(ambient_dim=d, sectors=tuple(sectors))


def is_factor(alg: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the center consists of multiples of the identity only."""
    return center(alg, tol).dim == 1


def _validated_projector_in(alg: AlgebraBasis, p, tol: Tolerance) -> np.ndarray:
    mat = ensure_projector(p, tol)
    if not contains(alg, mat, tol):
        raise NotInAlgebra("projector does not lie in the algebra span")
    return mat


def _reduced_ranks(
    decomp: SectorDecomposition, p: np.ndarray, tol: Tolerance
) -> list[int]:
    out = []
    for sector in decomp.sectors:
        r = rank_of(sector.central_projector @ p, tol)
        reduced, rem = divmod(r, sector.multiplicity)
        assert rem == 0, "blockwise rank not divisible by multiplicity"
        out.append(int(reduced))
    return out


def mvn_dimension(
    alg: AlgebraBasis,
    p,
    tol: Tolerance = DEFAULT_TOL,
    decomposition: SectorDecomposition | None = None,
) -> list[int]:
    """Per-sector reduced rank of a projector in the algebra.

    Entry i is the rank of p compressed to block i divided by that
    block's multiplicity. The vector is zero exactly for p = 0, additive
    on orthogonal pairs, monotone under sub-projections, and a complete
    equivalence invariant. Extending the single-factor dimension
    function to one entry per sector is a convention of this package.
    """
    mat = _validated_projector_in(alg, p, tol)
    decomp = decomposition if decomposition is not None else block_decomposition(alg, tol)
    return _reduced_ranks(decomp, mat, tol)


def projectors_equivalent(
    alg: AlgebraBasis,
    p,
    q,
    tol: Tolerance = DEFAULT_TOL,
    decomposition: SectorDecomposition | None = None,
) -> bool:
    """True iff a partial isometry V in the algebra has V*V = p and VV* = q.

    Decided by comparing the per-sector reduced ranks, the complete
    invariant for finite type I algebras; `equivalence_isometry` builds
    an explicit V as an independent cross-check.
    """
    pm = _validated_projector_in(alg, p, tol)
    qm = _validated_projector_in(alg, q, tol)
    decomp = decomposition if decomposition is not None else block_decomposition(alg, tol)
    return _reduced_ranks(decomp, pm, tol) == _reduced_ranks(decomp, qm, tol)


def equivalence_isometry(
    alg: AlgebraBasis,
    p,
    q,
    tol: Tolerance = DEFAULT_TOL,
    attempts: int = 8,
) -> np.ndarray | None:
    """Explicit partial isometry V in the algebra with V*V = p, VV* = q, or None.

    Debug oracle for `projectors_equivalent`: takes the polar part of
    ``q w p`` for a generic algebra element w. When the projectors are
    equivalent, a generic w makes that compression full-rank and its
    polar part is the required isometry (and stays inside the algebra);
    when they are not, no attempt can succeed.
    """
    pm = _validated_projector_in(alg, p, tol)
    qm = _validated_projector_in(alg, q, tol)
    rp = rank_of(pm, tol)
    if rank_of(qm, tol) != rp:
        return None
    if rp == 0:
        return np.zeros_like(pm)
    for attempt in range(attempts):
        rng = _internal_rng(_GENERIC_STREAM, attempt)
        w = _random_span_element(alg.basis, rng, hermitian=False)
        x = qm @ w @ pm
        if rank_of(x, tol) != rp:
            continue
        uu, _, vv = np.linalg.svd(x)
        v_iso = uu[:, :rp] @ vv[:rp, :]
        if (
            operator_norm(v_iso.conj().T @ v_iso - pm) <= 1e-8
            and operator_norm(v_iso @ v_iso.conj().T - qm) <= 1e-8
            and contains(alg, v_iso, tol)
        ):
            return v_iso
    return None


def decomposition_to_json(decomp: SectorDecomposition) -> list[dict]:
    """Serialize as a list of ``{block_size, multiplicity, central_projector}``."""
    return [
        {
            "block_size": s.block_size,
            "multiplicity": s.multiplicity,
            "central_projector": matrix_to_json(s.central_projector),
        }
        for s in decomp.sectors
    ]
