"""Bootstrap unit root tests for time series and panels.

Every test takes the keyword options ``level``, ``boot``, ``B``, ``l``,
``ar_awb``, ``seed``, ``workers``, ``p_min``, ``p_max``, ``ic``, ``ic_scale``,
``union``, ``dc`` and ``detr``. Arrays are T x N with NaN for missing values.
"""

from ._core import (
    DegenerateInputError,
    ValidationError,
    adf_statistic,
    boot_adf,
    boot_union,
    bsqt,
    check_missing_insample,
    diff_mult,
    fdr,
    iadf,
    load_csv,
    order_integration,
    panel_test,
)

__all__ = [
    "DegenerateInputError",
    "ValidationError",
    "adf_statistic",
    "boot_adf",
    "boot_union",
    "bsqt",
    "check_missing_insample",
    "diff_mult",
    "fdr",
    "iadf",
    "load_csv",
    "order_integration",
    "panel_test",
]
