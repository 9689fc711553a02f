"""Overcomplete dictionary learning by alternating sparse coding and rank-1 atom refits.

One learning step codes all samples, then sweeps the atoms in ascending index
order: the samples using an atom define a restricted residual matrix whose
dominant singular pair becomes the new atom and its coefficient row. Atoms
nobody uses are re-seeded from the currently worst-represented samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptyDataError, ZeroMatrixError
from .linalg import rank1_svd
from .omp import CodingParams, SparseCode, batch_encode
from .validation import as_matrix, check_unit_columns

_COLLISION_COS = 1.0 - 1e-6


@dataclass(frozen=True)
class Dictionary:
    """Unit-norm atom collection, one atom per column of ``atoms``.

    Dictionaries are over-complete by construction (more atoms than atom
    dimensions); pass ``allow_undercomplete=True`` for truncated bases and
    small test instances.
    """

    atoms: np.ndarray
    allow_undercomplete: bool = False

    def __post_init__(self):
        mat = as_matrix(self.atoms, "atoms")
        object.__setattr__(self, "atoms", mat)
        check_unit_columns(mat, tol=1e-8)
        if not self.allow_undercomplete and mat.shape[1] <= mat.shape[0]:
            raise ValueError(
                f"dictionary with {mat.shape[1]} atoms of dimension {mat.shape[0]} "
                "is not over-complete; pass allow_undercomplete=True to permit this"
            )

    @property
    def atom_dim(self) -> int:
        return self.atoms.shape[0]

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]


@dataclass(frozen=True)
class LearnConfig:
    n_atoms: int = 256
    iterations: int = 10
    coding: CodingParams = field(default_factory=CodingParams)
    seed: int = 0
    unused_threshold: int = 0
    allow_undercomplete: bool = False

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.unused_threshold < 0:
            raise ValueError("unused_threshold must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


def _random_unit(rng, n):
    while True:
        v = rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm > 0:
            return v / norm


def init_dictionary(x_matrix, cfg: LearnConfig) -> Dictionary:
    """Seeded initialization from the data itself.

    With at least ``cfg.n_atoms`` samples the atoms are distinct normalized
    data columns sampled without replacement; near-duplicates (cosine
    similarity above 1 - 1e-6) are swapped for seeded random unit vectors.
    With fewer samples all atoms are seeded random unit vectors.
    """
    data = as_matrix(x_matrix, "x_matrix")
    n, m = data.shape
    if m == 0:
        raise EmptyDataError("cannot initialize a dictionary from zero samples")
    rng = np.random.default_rng(cfg.seed)
    k = cfg.n_atoms

    candidates = None
    if m >= k:
        chosen = rng.choice(m, size=k, replace=False)
        candidates = data[:, chosen]

    atoms = np.empty((n, k))
    for j in range(k):
        if candidates is not None:
            cand = candidates[:, j]
            norm = np.linalg.norm(cand)
            cand = cand / norm if norm > 0 else _random_unit(rng, n)
        else:
            cand = _random_unit(rng, n)
        while j > 0 and float(np.max(np.abs(atoms[:, :j].T @ cand))) > _COLLISION_COS:
            cand = _random_unit(rng, n)
        atoms[:, j] = cand
    return Dictionary(atoms, allow_undercomplete=cfg.allow_undercomplete)


def ksvd_step(dictionary: Dictionary, x_matrix, coding: CodingParams,
              unused_threshold: int = 0):
    """One full learning iteration.

    Codes every sample against the current dictionary, then refits each atom
    (ascending index, residuals updated incrementally) with the dominant
    singular pair of its restricted residual matrix. A refit is kept only if
    it does not increase the restricted error, so the objective never goes up.
    Atoms used by at most ``unused_threshold`` samples are replaced by
    distinct worst-represented samples, normalized; ties break toward the
    lowest sample index.

    Returns (new dictionary, new code, squared Frobenius approximation error).
    """
    data = as_matrix(x_matrix, "x_matrix")
    atoms = dictionary.atoms.copy()
    if data.shape[0] != dictionary.atom_dim:
        raise ValueError(
            f"data dimension {data.shape[0]} does not match atom dimension "
            f"{dictionary.atom_dim}"
        )

    code = batch_encode(atoms, data, coding)
    dense = code.to_dense()
    resid = data - atoms @ dense
    tol = coding.numeric_tol
    n_samples = data.shape[1]
    unused = []

    for k in range(dictionary.n_atoms):
        row = dense[k, :]
        using = np.flatnonzero(np.abs(row) > tol)
        if using.size <= unused_threshold:
            unused.append(k)
            continue
        ek = resid[:, using] + np.outer(atoms[:, k], row[using])
        try:
            top = rank1_svd(ek)
        except ZeroMatrixError:
            unused.append(k)
            continue
        new_coef = top.singular_value * top.right
        old_err = float(np.linalg.norm(ek - np.outer(atoms[:, k], row[using])) ** 2)
        new_err = float(np.linalg.norm(ek - np.outer(top.left, new_coef)) ** 2)
        if new_err <= old_err:
            atoms[:, k] = top.left
            dense[k, using] = new_coef
            resid[:, using] = ek - np.outer(top.left, new_coef)

    if unused:
        # Re-seed dead atoms from the samples the dictionary fails on. Only
        # samples still above the coding tolerance qualify: once everything
        # is represented within error_tol there is nothing to rescue, and
        # replacing atoms would just memorize individual samples.
        resid_norms = np.linalg.norm(resid, axis=0)
        candidates = np.flatnonzero(resid_norms**2 > coding.error_tol)
        order = candidates[np.lexsort((candidates, -resid_norms[candidates]))]
        for i, k in enumerate(unused):
            if i >= order.size:
                break  # fewer failing samples than dead atoms; leave the rest
            col = data[:, order[i]]
            norm = np.linalg.norm(col)
            if norm == 0.0:
                continue
            nz = np.flatnonzero(dense[k, :])
            if nz.size:
                resid[:, nz] += np.outer(atoms[:, k], dense[k, nz])
                dense[k, nz] = 0.0
            atoms[:, k] = col / norm

    new_dictionary = Dictionary(atoms, allow_undercomplete=dictionary.allow_undercomplete)
    new_code = SparseCode.from_dense(dense)
    objective = float(np.linalg.norm(data - atoms @ dense, "fro") ** 2)
    return new_dictionary, new_code, objective


def learn(x_matrix, cfg: LearnConfig):
    """Initialize and run ``cfg.iterations`` learning steps.

    Returns (dictionary, code, objective trace), the trace holding the
    approximation error after each step.
    """
    data = as_matrix(x_matrix, "x_matrix")
    if data.shape[1] == 0:
        raise EmptyDataError("cannot learn a dictionary from zero samples")
    dictionary = init_dictionary(data, cfg)
    code = None
    trace = np.empty(cfg.iterations)
    for i in range(cfg.iterations):
        dictionary, code, objective = ksvd_step(
            dictionary, data, cfg.coding, unused_threshold=cfg.unused_threshold
        )
        trace[i] = objective
    return dictionary, code, trace


def save_dictionary(dictionary: Dictionary, path) -> None:
    """Write atoms as text: header line, then one atom per line, full precision."""
    atoms = dictionary.atoms
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"PBADICT v1 {dictionary.atom_dim} {dictionary.n_atoms}\n")
        for k in range(dictionary.n_atoms):
            fh.write(" ".join(f"{x:.17g}" for x in atoms[:, k]))
            fh.write("\n")


def load_dictionary(path) -> Dictionary:
    """Read a dictionary written by :func:`save_dictionary`."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "PBADICT" or header[1] != "v1":
            raise ValueError(f"{path}: not a PBADICT v1 file")
        n, k = int(header[2]), int(header[3])
        atoms = np.empty((n, k))
        for j in range(k):
            values = fh.readline().split()
            if len(values) != n:
                raise ValueError(f"{path}: atom {j} has {len(values)} values, expected {n}")
            atoms[:, j] = [float(x) for x in values]
    return Dictionary(atoms, allow_undercomplete=True)
