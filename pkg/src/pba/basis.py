"""Atom ranking by usage and principal-basis truncation.

An atom's significance is how reproducible it is: the number of samples whose
sparse code actually uses it. Atoms are ranked by that count, the histogram
of the counts locates the bulk of rarely-used atoms, and everything above the
modal count survives truncation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import BasisSizeError
from .ksvd import Dictionary
from .omp import SparseCode


@dataclass(frozen=True)
class UsageProfile:
    """Per-atom usage: l0_count samples use the atom; l1_mass sums |coefficient|."""

    l0_count: np.ndarray
    l1_mass: np.ndarray
    n_samples: int

    @property
    def n_atoms(self) -> int:
        return self.l0_count.shape[0]


@dataclass(frozen=True)
class AtomRanking:
    """Atoms ordered by descending usage; ``sorted_l0[i]`` is the count of ``order[i]``."""

    order: np.ndarray
    sorted_l0: np.ndarray


@dataclass(frozen=True)
class PrincipalBasis:
    """Truncated dictionary of the most-used atoms, in ranked order.

    ``provenance[i]`` is the index the i-th atom had in the source dictionary.
    """

    dictionary: Dictionary
    provenance: np.ndarray

    @property
    def n_principal(self) -> int:
        return self.dictionary.n_atoms


class ReportRow(NamedTuple):
    atom_index: int
    l0_count: int
    l1_mass: float
    rank: int
    selected: bool


def usage_profile(code: SparseCode, numeric_tol: float = 1e-12) -> UsageProfile:
    """Count, per atom, the samples using it and the total coefficient mass.

    A sample uses an atom when the coefficient magnitude exceeds
    ``numeric_tol``; the l1 mass sums all magnitudes regardless.
    """
    l0 = np.zeros(code.n_atoms, dtype=np.int64)
    l1 = np.zeros(code.n_atoms)
    for supp, coef in zip(code.supports, code.coefficients):
        mag = np.abs(coef)
        l0[supp[mag > numeric_tol]] += 1
        l1[supp] += mag
    return UsageProfile(l0, l1, code.n_samples)


def rank_atoms(profile: UsageProfile) -> AtomRanking:
    """Sort atoms by descending usage count.

    Ties break toward the larger l1 mass, then toward the lower original
    index, so the order is total and deterministic.
    """
    idx = np.arange(profile.n_atoms)
    order = np.lexsort((idx, -profile.l1_mass, -profile.l0_count))
    return AtomRanking(order, profile.l0_count[order])


def select_p(ranking: AtomRanking) -> int:
    """Number of atoms to keep, read off the usage-count histogram.

    The histogram of the sorted counts uses integer bins of width 1; its
    modal value (smallest count on frequency ties) marks the bulk of
    low-reproducibility atoms, and every atom counted strictly above it is
    kept. The result is clamped to [1, n_atoms].
    """
    counts = ranking.sorted_l0
    if counts.size == 0:
        raise BasisSizeError("cannot select a basis size from an empty ranking")
    freq = np.bincount(counts)
    v_star = int(np.argmax(freq))
    p = int(np.sum(counts > v_star))
    return min(max(p, 1), counts.size)


def principal_basis(dictionary: Dictionary, ranking: AtomRanking, p: int) -> PrincipalBasis:
    """Keep the ``p`` highest-ranked atoms as an exact-copy truncated dictionary."""
    if not 1 <= p <= dictionary.n_atoms:
        raise BasisSizeError(f"basis size {p} outside [1, {dictionary.n_atoms}]")
    keep = np.asarray(ranking.order[:p], dtype=np.int64)
    atoms = dictionary.atoms[:, keep].copy()
    return PrincipalBasis(Dictionary(atoms, allow_undercomplete=True), keep.copy())


def reproducibility_report(profile: UsageProfile, ranking: AtomRanking, p: int):
    """One row per atom in ranked order; ``selected`` marks the kept atoms."""
    if not 1 <= p <= profile.n_atoms:
        raise BasisSizeError(f"basis size {p} outside [1, {profile.n_atoms}]")
    rows = []
    for rank, k in enumerate(ranking.order):
        rows.append(ReportRow(
            atom_index=int(k),
            l0_count=int(profile.l0_count[k]),
            l1_mass=float(profile.l1_mass[k]),
            rank=rank,
            selected=rank < p,
        ))
    return rows


def write_report_csv(rows, path) -> None:
    """Emit report rows as CSV with a fixed header and full-precision masses."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["atom_index", "l0_count", "l1_mass", "rank", "selected"])
        for row in rows:
            writer.writerow([
                row.atom_index,
                row.l0_count,
                f"{row.l1_mass:.17g}",
                row.rank,
                int(row.selected),
            ])


def read_report_csv(path):
    """Parse a CSV written by :func:`write_report_csv` back into rows."""
    rows = []
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["atom_index", "l0_count", "l1_mass", "rank", "selected"]:
            raise ValueError(f"{path}: unexpected report header {header}")
        for record in reader:
            rows.append(ReportRow(
                atom_index=int(record[0]),
                l0_count=int(record[1]),
                l1_mass=float(record[2]),
                rank=int(record[3]),
                selected=bool(int(record[4])),
            ))
    return rows
