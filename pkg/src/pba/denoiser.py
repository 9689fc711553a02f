"""End-to-end denoising estimator.

``fit`` learns an over-complete dictionary from the (noisy) image's own
patches, profiles atom usage, and truncates to the most reproducible atoms;
``transform`` recodes an image against the kept atoms and merges the patch
estimates with the noisy pixels. The estimator follows the scikit-learn
protocol (``get_params`` / ``set_params`` / ``fit_transform``), so it clones
and composes like any other transformer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .basis import principal_basis, rank_atoms, reproducibility_report, select_p, usage_profile
from .ksvd import LearnConfig, learn
from .omp import CodingParams, batch_encode
from .patches import PatchGeometry, extract_patches, reassemble
from .validation import as_image

TRUNCATION_MODES = ("pba", "none", "fixed-p")


class PrincipalBasisDenoiser(TransformerMixin, BaseEstimator):
    """Patch-dictionary denoiser with reproducibility-based atom truncation.

    Parameters
    ----------
    patch_side, stride : patch grid geometry (pixels).
    n_atoms : dictionary size K.
    iterations : learning sweeps over the data.
    max_atoms : per-sample sparsity cap (clamped to n_atoms).
    sigma : noise standard deviation; None means noise-free defaults
        (zero coding tolerance, gamma 1).
    error_gain : safety gain g in the per-sample coding tolerance
        N * (g * sigma)**2.
    gamma : fidelity weight for reassembly; None picks 30/sigma when sigma
        is known, else 1.
    truncation_mode : "pba" (histogram-selected basis size), "none" (keep
        the full dictionary), or "fixed-p" (force ``fixed_p`` atoms).
    fixed_p : basis size for the "fixed-p" mode.
    remove_dc : subtract each patch's mean before coding and add it back
        after reconstruction.
    unused_threshold : usage count at or below which an atom is re-seeded
        during learning.
    numeric_tol : magnitude under which coefficients count as zero.
    seed : seeds dictionary initialization.
    """

    def __init__(self, patch_side=8, stride=1, n_atoms=256, iterations=10,
                 max_atoms=32, sigma=None, error_gain=1.15, gamma=None,
                 truncation_mode="pba", fixed_p=None, remove_dc=False,
                 unused_threshold=0, numeric_tol=1e-12, seed=0):
        self.patch_side = patch_side
        self.stride = stride
        self.n_atoms = n_atoms
        self.iterations = iterations
        self.max_atoms = max_atoms
        self.sigma = sigma
        self.error_gain = error_gain
        self.gamma = gamma
        self.truncation_mode = truncation_mode
        self.fixed_p = fixed_p
        self.remove_dc = remove_dc
        self.unused_threshold = unused_threshold
        self.numeric_tol = numeric_tol
        self.seed = seed

    def _geometry(self, img: np.ndarray) -> PatchGeometry:
        return PatchGeometry(
            patch_side=self.patch_side,
            stride=self.stride,
            image_width=img.shape[1],
            image_height=img.shape[0],
        )

    def _coding_params(self) -> CodingParams:
        if self.sigma is not None and self.sigma > 0:
            error_tol = self.patch_side**2 * (self.error_gain * self.sigma) ** 2
        else:
            error_tol = 0.0
        return CodingParams(
            max_atoms=min(self.max_atoms, self.n_atoms),
            error_tol=error_tol,
            numeric_tol=self.numeric_tol,
        )

    def _resolve_gamma(self) -> float:
        if self.gamma is not None:
            if self.gamma < 0:
                raise ValueError("gamma must be nonnegative")
            return float(self.gamma)
        if self.sigma is not None and self.sigma > 0:
            return 30.0 / float(self.sigma)
        return 1.0

    def fit(self, X, y=None):
        """Learn the dictionary and its principal basis from a 2-D image."""
        if self.truncation_mode not in TRUNCATION_MODES:
            raise ValueError(
                f"truncation_mode must be one of {TRUNCATION_MODES}, "
                f"got {self.truncation_mode!r}"
            )
        img = as_image(X)
        geom = self._geometry(img)
        patches = extract_patches(img, geom)
        if self.remove_dc:
            patches = patches - patches.mean(axis=0)

        coding = self._coding_params()
        cfg = LearnConfig(
            n_atoms=self.n_atoms,
            iterations=self.iterations,
            coding=coding,
            seed=self.seed,
            unused_threshold=self.unused_threshold,
        )
        dictionary, code, trace = learn(patches, cfg)
        profile = usage_profile(code, numeric_tol=self.numeric_tol)
        ranking = rank_atoms(profile)

        if self.truncation_mode == "pba":
            p = select_p(ranking)
        elif self.truncation_mode == "fixed-p":
            if self.fixed_p is None:
                raise ValueError("fixed-p truncation requires fixed_p")
            p = int(self.fixed_p)
        else:
            p = dictionary.n_atoms

        self.dictionary_ = dictionary
        self.code_ = code
        self.objective_trace_ = trace
        self.usage_profile_ = profile
        self.ranking_ = ranking
        self.n_principal_ = p
        if self.truncation_mode == "none":
            self.principal_basis_ = None
            self._recode_atoms = dictionary.atoms
        else:
            basis = principal_basis(dictionary, ranking, p)
            self.principal_basis_ = basis
            self._recode_atoms = basis.dictionary.atoms
        self.coding_params_ = coding
        self.recode_params_ = CodingParams(
            max_atoms=min(coding.max_atoms, self._recode_atoms.shape[1]),
            error_tol=coding.error_tol,
            numeric_tol=coding.numeric_tol,
        )
        self.error_tol_ = coding.error_tol
        self.gamma_ = self._resolve_gamma()
        return self

    def transform(self, X) -> np.ndarray:
        """Denoise a 2-D image with the fitted basis; returns float64 pixels."""
        check_is_fitted(self, "dictionary_")
        img = as_image(X)
        geom = self._geometry(img)
        patches = extract_patches(img, geom)
        dc = None
        if self.remove_dc:
            dc = patches.mean(axis=0)
            patches = patches - dc
        code = batch_encode(self._recode_atoms, patches, self.recode_params_)
        estimates = self._recode_atoms @ code.to_dense()
        if dc is not None:
            estimates = estimates + dc
        return reassemble(estimates, img, geom, self.gamma_)

    def report_rows(self):
        """Reproducibility report rows for the fitted dictionary."""
        check_is_fitted(self, "dictionary_")
        p = self.n_principal_
        return reproducibility_report(self.usage_profile_, self.ranking_, p)


def equivalent_sigma(img, looks: int) -> float:
    """Noise-scale proxy for L-look speckle: mean intensity over sqrt(looks)."""
    image = as_image(img)
    if looks < 1:
        raise ValueError("looks must be at least 1")
    return float(image.mean() / np.sqrt(looks))
