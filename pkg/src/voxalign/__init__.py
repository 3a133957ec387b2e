"""Desk-scale volume/text dual encoder with low-rank adapters.

Subpackages cover the full pipeline: raw volume preprocessing, stochastic
augmentation, report tokenization, the factorized dual encoder, low-rank
adapter injection and merging, training, zero-shot prompt scoring, and the
multi-label evaluation suite. The ``voxalign`` CLI orchestrates runs.
"""

__version__ = "0.1.0"

from voxalign.errors import (  # noqa: F401
    ConfigError,
    DataError,
    ContractViolation,
    MissingGradientError,
    NumericFault,
    VoxalignError,
)
