"""Greedy sparse coding (orthogonal matching pursuit) against a fixed dictionary.

The solver works on Gram-domain quantities (``D^T D`` and ``D^T x``), which
lets a batch share one Gram matrix while staying bit-identical with
single-sample calls. Coefficients are re-solved by least squares on the
current support after every selection, so the residual stays orthogonal to
all selected atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import as_matrix, as_vector, check_unit_columns


@dataclass(frozen=True)
class CodingParams:
    """Stopping rules for the pursuit.

    max_atoms caps the support size per sample; error_tol is the squared
    residual norm at which a sample counts as explained; numeric_tol is the
    threshold under which correlations and coefficients count as zero.
    """

    max_atoms: int = 32
    error_tol: float = 0.0
    numeric_tol: float = 1e-12

    def __post_init__(self):
        if self.max_atoms < 1:
            raise ValueError("max_atoms must be at least 1")
        if self.error_tol < 0:
            raise ValueError("error_tol must be nonnegative")
        if self.numeric_tol <= 0:
            raise ValueError("numeric_tol must be positive")


@dataclass
class SparseCode:
    """Per-sample sparse coefficients over a dictionary with ``n_atoms`` atoms.

    ``supports[m]`` holds strictly increasing atom indices for sample m and
    ``coefficients[m]`` the matching values.
    """

    n_atoms: int
    supports: list = field(default_factory=list)
    coefficients: list = field(default_factory=list)

    @property
    def n_samples(self) -> int:
        return len(self.supports)

    def sample(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        return self.supports[m], self.coefficients[m]

    def to_dense(self) -> np.ndarray:
        """Expand into the full (n_atoms, n_samples) coefficient matrix."""
        dense = np.zeros((self.n_atoms, self.n_samples))
        for m, (supp, coef) in enumerate(zip(self.supports, self.coefficients)):
            dense[supp, m] = coef
        return dense

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "SparseCode":
        """Build a code from a dense coefficient matrix, keeping exact nonzeros."""
        mat = as_matrix(a, "coefficients")
        code = cls(n_atoms=mat.shape[0])
        for m in range(mat.shape[1]):
            supp = np.flatnonzero(mat[:, m])
            code.supports.append(supp.astype(np.int64))
            code.coefficients.append(mat[supp, m].copy())
        return code


def _greedy_gram(gram, dtx, x_sq, params):
    """Pursuit on Gram-domain data; returns (sorted support, coefficients)."""
    selected: list[int] = []
    coef = np.empty(0)
    corr = dtx
    resid_sq = x_sq
    while len(selected) < params.max_atoms and resid_sq > params.error_tol:
        score = np.abs(corr)
        if selected:
            score[selected] = -1.0
        k = int(np.argmax(score))
        if score[k] <= params.numeric_tol:
            break
        selected.append(k)
        gss = gram[np.ix_(selected, selected)]
        bs = dtx[selected]
        try:
            coef = np.linalg.solve(gss, bs)
        except np.linalg.LinAlgError:
            coef = np.linalg.lstsq(gss, bs, rcond=None)[0]
        corr = dtx - gram[:, selected] @ coef
        resid_sq = max(x_sq - float(bs @ coef), 0.0)

    support = np.asarray(selected, dtype=np.int64)
    order = np.argsort(support)
    return support[order], np.asarray(coef, dtype=np.float64)[order]


def omp_encode(dictionary, x, params: CodingParams, *, gram=None):
    """Sparse-code one sample.

    Greedy selection picks the atom with the largest absolute correlation to
    the residual (ties go to the lowest index), then re-solves the
    coefficients by least squares on the support via the normal equations.
    Stops when the squared residual reaches ``params.error_tol``, the support
    reaches ``params.max_atoms``, or no correlation exceeds
    ``params.numeric_tol``.

    Returns (support, coefficients) with the support sorted ascending.
    Raises NotNormalizedError unless all atoms have unit norm within 1e-6.
    """
    d = as_matrix(dictionary, "dictionary")
    vec = as_vector(x, "x")
    if vec.size != d.shape[0]:
        raise ValueError(f"sample length {vec.size} does not match atom length {d.shape[0]}")
    if params.max_atoms > d.shape[1]:
        raise ValueError("max_atoms exceeds the number of dictionary atoms")
    check_unit_columns(d)
    if gram is None:
        gram = d.T @ d
    return _greedy_gram(gram, d.T @ vec, float(vec @ vec), params)


def batch_encode(dictionary, x_matrix, params: CodingParams) -> SparseCode:
    """Sparse-code every column of ``x_matrix`` independently."""
    d = as_matrix(dictionary, "dictionary")
    data = as_matrix(x_matrix, "x_matrix")
    if data.shape[0] != d.shape[0]:
        raise ValueError(
            f"sample length {data.shape[0]} does not match atom length {d.shape[0]}"
        )
    if params.max_atoms > d.shape[1]:
        raise ValueError("max_atoms exceeds the number of dictionary atoms")
    check_unit_columns(d)

    gram = d.T @ d
    code = SparseCode(n_atoms=d.shape[1])
    for m in range(data.shape[1]):
        x = data[:, m]
        supp, coef = _greedy_gram(gram, d.T @ x, float(x @ x), params)
        code.supports.append(supp)
        code.coefficients.append(coef)
    return code
