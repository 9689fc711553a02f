"""Principal basis analysis: reproducibility-ranked sparse dictionaries.

Learn an over-complete patch dictionary from corrupted data, rank its atoms
by how many samples actually use them, keep the reproducible ones, and
reconstruct. Exposes the building blocks (patch grids, pursuit coding,
dictionary learning, atom ranking, noise synthesis, quality metrics) plus a
scikit-learn style denoiser and a file-based CLI (``pba``).
"""

from .basis import (
    AtomRanking,
    PrincipalBasis,
    ReportRow,
    UsageProfile,
    principal_basis,
    rank_atoms,
    read_report_csv,
    reproducibility_report,
    select_p,
    usage_profile,
    write_report_csv,
)
from .denoiser import PrincipalBasisDenoiser, equivalent_sigma
from .exceptions import (
    BasisSizeError,
    DimensionMismatchError,
    EmptyDataError,
    GeometryMismatchError,
    ImageTooSmallError,
    NegativeInputError,
    NotNormalizedError,
    PBAError,
    PgmError,
    ZeroMatrixError,
)
from .ksvd import (
    Dictionary,
    LearnConfig,
    init_dictionary,
    ksvd_step,
    learn,
    load_dictionary,
    save_dictionary,
)
from .linalg import Rank1Result, normalize_columns, rank1_svd, vector_l0
from .metrics import MetricConfig, psnr, ssim
from .noise import NoiseSpec, add_gaussian, add_speckle, apply_noise, uniform_field
from .omp import CodingParams, SparseCode, batch_encode, omp_encode
from .patches import PatchGeometry, cover_counts, extract_patches, reassemble
from .pgm import quantize, read_pgm, write_pgm

__version__ = "0.1.0"

__all__ = [
    "AtomRanking",
    "BasisSizeError",
    "CodingParams",
    "Dictionary",
    "DimensionMismatchError",
    "EmptyDataError",
    "GeometryMismatchError",
    "ImageTooSmallError",
    "LearnConfig",
    "MetricConfig",
    "NegativeInputError",
    "NoiseSpec",
    "NotNormalizedError",
    "PBAError",
    "PatchGeometry",
    "PgmError",
    "PrincipalBasis",
    "PrincipalBasisDenoiser",
    "Rank1Result",
    "ReportRow",
    "SparseCode",
    "UsageProfile",
    "ZeroMatrixError",
    "add_gaussian",
    "add_speckle",
    "apply_noise",
    "batch_encode",
    "cover_counts",
    "equivalent_sigma",
    "extract_patches",
    "init_dictionary",
    "ksvd_step",
    "learn",
    "load_dictionary",
    "normalize_columns",
    "omp_encode",
    "principal_basis",
    "psnr",
    "quantize",
    "rank1_svd",
    "rank_atoms",
    "read_pgm",
    "read_report_csv",
    "reassemble",
    "reproducibility_report",
    "save_dictionary",
    "select_p",
    "ssim",
    "uniform_field",
    "usage_profile",
    "vector_l0",
    "write_pgm",
    "write_report_csv",
]
