"""Minimal dense kernels: l0 counting, column normalization, dominant singular pair.

Only the dominant singular triple is ever needed by the dictionary update, so
it is computed with alternating power iteration instead of a full
decomposition.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import ZeroMatrixError
from .validation import as_matrix, as_vector

_SIGN_TOL = 1e-12


class Rank1Result(NamedTuple):
    """Dominant singular triple: ``matrix ~ singular_value * outer(left, right)``."""

    left: np.ndarray
    singular_value: float
    right: np.ndarray


def vector_l0(v, tol: float = 0.0) -> int:
    """Count entries of ``v`` whose magnitude exceeds ``tol``.

    An empty vector counts 0. ``tol`` must be nonnegative.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    arr = as_vector(v, "v")
    return int(np.count_nonzero(np.abs(arr) > tol))


def normalize_columns(m) -> tuple[np.ndarray, np.ndarray]:
    """Scale every nonzero column of ``m`` to unit l2 norm.

    Returns the normalized matrix and the vector of original column norms.
    Zero columns are left as-is and report scale 0.
    """
    mat = as_matrix(m)
    scales = np.linalg.norm(mat, axis=0)
    safe = np.where(scales > 0.0, scales, 1.0)
    return mat / safe, scales


def rank1_svd(m, max_iters: int = 200, conv_tol: float = 1e-10) -> Rank1Result:
    """Dominant singular triple of ``m`` by alternating power iteration.

    The start vector is the column of ``m`` with the largest norm, which makes
    the result deterministic. Iteration stops once successive singular-value
    estimates differ by less than ``conv_tol`` or after ``max_iters`` rounds.
    The sign is canonicalized so the first entry of ``left`` with magnitude
    above 1e-12 is nonnegative.

    Raises ZeroMatrixError when ``m`` has zero Frobenius norm.
    """
    mat = as_matrix(m)
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    col_norms = np.linalg.norm(mat, axis=0)
    j0 = int(np.argmax(col_norms))
    if col_norms[j0] == 0.0:
        raise ZeroMatrixError("cannot factor an all-zero matrix")

    u = mat[:, j0] / col_norms[j0]
    sigma = 0.0
    for _ in range(max_iters):
        w = mat.T @ u
        wn = float(np.linalg.norm(w))
        if wn == 0.0:
            break
        z = mat @ (w / wn)
        zn = float(np.linalg.norm(z))
        if zn == 0.0:
            break
        u = z / zn
        if abs(zn - sigma) < conv_tol:
            sigma = zn
            break
        sigma = zn

    # Re-pair right/singular value with the final left vector so that
    # ||m - sigma * u v^T||_F^2 == ||m||_F^2 - sigma^2 holds exactly.
    w = mat.T @ u
    sigma = float(np.linalg.norm(w))
    v = w / sigma

    lead = np.flatnonzero(np.abs(u) > _SIGN_TOL)
    if lead.size and u[lead[0]] < 0.0:
        u = -u
        v = -v
    return Rank1Result(u, sigma, v)
