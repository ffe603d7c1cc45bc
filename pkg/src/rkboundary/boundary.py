"""Boundary factorization machinery: membership defects, boundary isometries,
Carleson constants, adjoints, least-squares projections, and measure morphisms.

A boundary pair (extension, measure) "factors" a kernel when the matrix of
weighted boundary products reproduces the conjugated Gram matrix of every
finite section.  All diagnostics below quantify how far a candidate pair is
from that identity and what it implies: the transform into L2 of the measure
is an isometry exactly for members, members have Carleson constant one, and
the adjoint inverts the transform on section spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg

from ._linalg import NotPositiveSemidefiniteError, pivoted_cholesky
from .kernels import (
    BoundaryExtension,
    Cantor4Kernel,
    RkhsElement,
    Section,
    SectionError,
    h_norm_sq,
)
from .measures import QuadMeasure, cantor4_fourier, pushforward
from .reconstruct import lambda4_set

__all__ = [
    "MEMBERSHIP_TOL",
    "ALGEBRA_TOL",
    "PENCIL_PRUNE_TOL",
    "BoundaryMatrix",
    "MembershipReport",
    "ProjectionResult",
    "MorphismReport",
    "CommutingReport",
    "boundary_gram",
    "membership_defect",
    "isometry_defect",
    "boundary_transform",
    "adjoint_apply",
    "pencil_eigenvalues",
    "carleson_eigenvalues",
    "carleson_constant",
    "onto_residual",
    "morphism_check",
    "commuting_diagram_defect",
]

MEMBERSHIP_TOL = 1e-8
ALGEBRA_TOL = 1e-10
PENCIL_PRUNE_TOL = 1e-12
RIDGE_FACTOR = 1e-12


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Matrix of boundary products <K^B(s_i, .), K^B(s_j, .)> in L2 of the measure."""

    section: Section
    measure: QuadMeasure
    matrix: np.ndarray


@dataclass(frozen=True)
class MembershipReport:
    """Factorization verdict: worst entrywise deviation plus the Carleson estimate."""

    defect: float
    carleson_constant: float
    tolerance: float
    passed: bool


def _check_pair(ext: BoundaryExtension, section: Section) -> None:
    if ext.kernel is section.kernel or ext.kernel == section.kernel:
        return
    raise SectionError("extension and section are built on different kernels")


def boundary_gram(ext: BoundaryExtension, measure: QuadMeasure, section: Section) -> BoundaryMatrix:
    """Assemble N_ij = integral of conj(K^B(s_i, b)) K^B(s_j, b) dmu(b).

    Hermitian symmetry is enforced by symmetrized accumulation.  The node-free
    exact Cantor measure is evaluated through the frequency double sum with
    the measure's Fourier transform instead of quadrature.
    """
    _check_pair(ext, section)
    if measure.kind == "cantor-exact":
        n = _cantor_exact_gram(ext.kernel, section.points) * measure.scale
    else:
        e = ext(section.points[:, None], measure.nodes[None, :])
        n = np.conj(e) @ (e * measure.weights).T
    n = 0.5 * (n + n.conj().T)
    return BoundaryMatrix(section=section, measure=measure, matrix=n)


def _cantor_exact_frequency_matrix(level: int) -> tuple[np.ndarray, np.ndarray]:
    lam = lambda4_set(level)
    diff = (lam[None, :] - lam[:, None]).astype(float)
    return lam, cantor4_fourier(diff)


def _cantor_exact_gram(kernel, points: np.ndarray) -> np.ndarray:
    if not isinstance(kernel, Cantor4Kernel):
        raise ValueError("the exact Cantor measure pairs only with the truncated Cantor kernel")
    lam, m = _cantor_exact_frequency_matrix(kernel.level)
    p = points[:, None] ** lam[None, :]
    return p @ m @ p.conj().T


def membership_defect(
    ext: BoundaryExtension,
    measure: QuadMeasure,
    section: Section,
    tol: float = MEMBERSHIP_TOL,
) -> MembershipReport:
    """Compare the boundary product matrix with the conjugated Gram matrix.

    The deviation is measured against conj(G): under the toolkit's norm
    orientation that is the identity the canonical circle/plane/Cantor
    extensions satisfy exactly, and for real-symmetric kernels conj(G) = G.
    """
    nmat = boundary_gram(ext, measure, section).matrix
    if section.size:
        defect = float(np.max(np.abs(nmat - np.conj(section.gram))))
        constant = float(pencil_eigenvalues(nmat, np.conj(section.gram))[-1])
    else:
        defect = 0.0
        constant = 0.0
    return MembershipReport(
        defect=defect,
        carleson_constant=constant,
        tolerance=float(tol),
        passed=bool(defect < tol),
    )


def boundary_transform(f: RkhsElement, ext: BoundaryExtension):
    """Boundary-side function b -> sum_j c_j K^B(s_j, b), as a vectorized callable."""
    points = f.section.points
    coeffs = f.coeffs

    def transform(b):
        arr = np.asarray(b)
        vals = ext(points[:, None], np.atleast_1d(arr)[None, :])
        out = coeffs @ vals
        return complex(out[0]) if arr.ndim == 0 else out

    return transform


def isometry_defect(f: RkhsElement, ext: BoundaryExtension, measure: QuadMeasure) -> float:
    """|  ||f||^2 - ||transform of f||^2_{L2(mu)}  |, the L2 side by direct quadrature."""
    native = h_norm_sq(f)
    if measure.kind == "cantor-exact":
        boundary_sq = _cantor_exact_l2_norm_sq(f, ext.kernel) * measure.scale
    else:
        vals = boundary_transform(f, ext)(measure.nodes)
        boundary_sq = float(np.sum(measure.weights * np.abs(vals) ** 2))
    return abs(native - boundary_sq)


def _cantor_exact_l2_norm_sq(f: RkhsElement, kernel) -> float:
    if not isinstance(kernel, Cantor4Kernel):
        raise ValueError("the exact Cantor measure pairs only with the truncated Cantor kernel")
    lam, m = _cantor_exact_frequency_matrix(kernel.level)
    amp = f.coeffs @ (np.conj(f.section.points)[:, None] ** lam[None, :])
    return float(np.real(np.vdot(amp, m @ amp)))


def adjoint_apply(boundary_values, ext: BoundaryExtension, measure: QuadMeasure, s):
    """Adjoint of the boundary transform: s -> integral conj(K^B(s, b)) F(b) dmu(b).

    ``boundary_values`` is a callable on the quadrature nodes or an array of
    samples aligned with them; ``s`` may be a scalar point or an array.
    """
    if measure.nodes is None:
        raise ValueError("adjoint evaluation needs a node-based measure")
    fv = np.asarray(
        boundary_values(measure.nodes) if callable(boundary_values) else boundary_values,
        dtype=complex,
    )
    if fv.shape != measure.nodes.shape:
        raise ValueError("boundary samples must align with the quadrature nodes")
    arr = np.asarray(s)
    cols = ext(np.atleast_1d(arr)[:, None], measure.nodes[None, :])
    out = (np.conj(cols) * measure.weights) @ fv
    return complex(out[0]) if arr.ndim == 0 else out


def pencil_eigenvalues(nmat: np.ndarray, norm_matrix: np.ndarray, prune_tol: float = PENCIL_PRUNE_TOL) -> np.ndarray:
    """Generalized eigenvalues of (N, Q) ascending, with Q pruned by pivoted factorization.

    Q is the matrix of the native norm's quadratic form.  Kernel Gram matrices
    are notoriously ill conditioned for clustered points, so the pencil is
    restricted to the pivots a Cholesky factorization retains at the given
    relative tolerance (escalated if the dense solver still balks).
    """
    for tol in (prune_tol, prune_tol * 1e2, prune_tol * 1e4):
        _, pivots, rank = pivoted_cholesky(norm_matrix, rel_tol=tol)
        if rank == 0:
            raise NotPositiveSemidefiniteError(
                "norm form is numerically singular; pruning exhausted the section"
            )
        idx = np.sort(pivots[:rank])
        nr = nmat[np.ix_(idx, idx)]
        qr = norm_matrix[np.ix_(idx, idx)]
        try:
            return scipy.linalg.eigh(nr, qr, eigvals_only=True)
        except np.linalg.LinAlgError:
            continue
    raise NotPositiveSemidefiniteError("generalized eigenproblem failed after pruning")


def carleson_eigenvalues(
    ext: BoundaryExtension,
    measure: QuadMeasure,
    section: Section,
    prune_tol: float = PENCIL_PRUNE_TOL,
) -> np.ndarray:
    """Spectrum of the boundary matrix against the norm form, ascending.

    The maximum is the exact supremum of the boundary-to-native norm ratio
    over the section's span, hence a finite-section *estimate* (a lower bound)
    of the least Carleson constant of the measure.
    """
    nmat = boundary_gram(ext, measure, section).matrix
    return pencil_eigenvalues(nmat, np.conj(section.gram), prune_tol)


def carleson_constant(
    ext: BoundaryExtension,
    measure: QuadMeasure,
    section: Section,
    prune_tol: float = PENCIL_PRUNE_TOL,
) -> float:
    """Largest generalized eigenvalue of the (boundary matrix, norm form) pencil."""
    return float(carleson_eigenvalues(ext, measure, section, prune_tol)[-1])


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    """Least-squares projection of boundary samples onto a section's boundary span."""

    residual: float
    coeffs: np.ndarray
    target_norm: float
    ridged: bool


def onto_residual(
    boundary_values,
    ext: BoundaryExtension,
    measure: QuadMeasure,
    section: Section,
    ridge_factor: float = RIDGE_FACTOR,
) -> ProjectionResult:
    """Project boundary samples onto span{K^B(s_j, .)} in L2 of the measure.

    Solves the normal equations built from the boundary matrix and the
    adjoint; a numerically singular system is ridge-stabilized and flagged.
    The residual is recomputed by direct quadrature of |F - fit|^2, so it is
    meaningful either way and always lies in [0, ||F||].
    """
    if measure.nodes is None:
        raise ValueError("projection needs a node-based measure")
    fv = np.asarray(
        boundary_values(measure.nodes) if callable(boundary_values) else boundary_values,
        dtype=complex,
    )
    if fv.shape != measure.nodes.shape:
        raise ValueError("boundary samples must align with the quadrature nodes")
    nmat = boundary_gram(ext, measure, section).matrix
    rhs = adjoint_apply(fv, ext, measure, section.points)
    w = np.linalg.eigvalsh(nmat)
    ridged = bool(w[0] <= 1e-12 * max(float(w[-1]), 0.0))
    if ridged:
        ridge = ridge_factor * float(np.real(np.trace(nmat))) / max(section.size, 1)
        solve_mat = nmat + ridge * np.eye(section.size)
    else:
        solve_mat = nmat
    coeffs = np.linalg.solve(solve_mat, rhs)
    e = ext(section.points[:, None], measure.nodes[None, :])
    resid = fv - coeffs @ e
    resid_sq = float(np.sum(measure.weights * np.abs(resid) ** 2))
    target_sq = float(np.sum(measure.weights * np.abs(fv) ** 2))
    return ProjectionResult(
        residual=float(np.sqrt(max(resid_sq, 0.0))),
        coeffs=coeffs,
        target_norm=float(np.sqrt(max(target_sq, 0.0))),
        ridged=ridged,
    )


@dataclass(frozen=True)
class MorphismReport:
    """Atom-by-atom comparison of a pushforward with its intended image measure."""

    passed: bool
    max_mass_error: float


def morphism_check(
    mu_coarse: QuadMeasure,
    mu_fine: QuadMeasure,
    atom_map: Mapping,
    tol: float = 1e-12,
) -> MorphismReport:
    """Verify the image of the fine measure under the atom map is the coarse one.

    The sigma-algebra half of the ordering holds by construction here: the
    fine partition is taken to be the preimage partition of the map, so only
    the mass identity needs checking.
    """
    image = pushforward(mu_fine, atom_map)
    pushed = dict(zip(image.nodes.tolist(), image.weights.tolist()))
    target = dict(zip(mu_coarse.nodes.tolist(), mu_coarse.weights.tolist()))
    err = 0.0
    for atom in set(pushed) | set(target):
        err = max(err, abs(pushed.get(atom, 0.0) - target.get(atom, 0.0)))
    return MorphismReport(passed=bool(err <= tol), max_mass_error=float(err))


@dataclass(frozen=True)
class CommutingReport:
    """Agreement of the two boundary transforms through a refining atom map."""

    transform_defect: float
    pullback_isometry_defect: float


def commuting_diagram_defect(
    ext_coarse: BoundaryExtension,
    ext_fine: BoundaryExtension,
    mu_coarse: QuadMeasure,
    mu_fine: QuadMeasure,
    atom_map: Mapping,
    f: RkhsElement,
) -> CommutingReport:
    """Sup-norm gap between the fine transform and the coarse transform pulled
    back through the atom map, plus the pullback's isometry defect.

    Requires the atom map to push the fine measure onto the coarse one; both
    boundary pairs are expected to factor the kernel (checked by the caller
    via :func:`membership_defect` when in doubt).
    """
    check = morphism_check(mu_coarse, mu_fine, atom_map)
    if not check.passed:
        raise ValueError(
            "atom map does not push the fine measure onto the coarse one "
            f"(mass error {check.max_mass_error:.3e})"
        )
    coarse_vals = np.atleast_1d(boundary_transform(f, ext_coarse)(mu_coarse.nodes))
    fine_vals = np.atleast_1d(boundary_transform(f, ext_fine)(mu_fine.nodes))
    index_of = {atom: i for i, atom in enumerate(mu_coarse.nodes.tolist())}
    pulled = np.asarray(
        [coarse_vals[index_of[atom_map[b]]] for b in mu_fine.nodes.tolist()],
        dtype=complex,
    )
    transform_defect = float(np.max(np.abs(pulled - fine_vals))) if pulled.size else 0.0
    fine_sq = float(np.sum(mu_fine.weights * np.abs(pulled) ** 2))
    coarse_sq = float(np.sum(mu_coarse.weights * np.abs(coarse_vals) ** 2))
    return CommutingReport(
        transform_defect=transform_defect,
        pullback_isometry_defect=abs(fine_sq - coarse_sq),
    )
