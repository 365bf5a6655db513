"""Hot loops behind the classifiers and the information-gain code.

The compiled ``_core`` extension is used when it was built; otherwise the numpy
``_fallback`` module is used. Setting ``NETPREP_PURE=1`` forces the fallback.
"""
import os

from netprep.kernels import _fallback

if os.environ.get("NETPREP_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from netprep.kernels import _core as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

contingency = _impl.contingency
best_numeric_split = _impl.best_numeric_split
knn_predict = _impl.knn_predict

__all__ = ["BACKEND", "contingency", "best_numeric_split", "knn_predict"]
