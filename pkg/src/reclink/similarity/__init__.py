"""String similarity kernels with a compiled core and pure-Python fallback.

The compiled extension is preferred when importable; set
``RECLINK_PURE_PYTHON=1`` to force the fallback (useful for benchmarking
and for debugging the reference implementation).
"""

import os

from . import _strings_py

if os.environ.get("RECLINK_PURE_PYTHON") == "1":
    _impl = _strings_py
    BACKEND = "python"
else:
    try:
        from . import _strings_cy as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _strings_py
        BACKEND = "python"

jaro_winkler = _impl.jaro_winkler
padded_levenshtein_sim = _impl.padded_levenshtein_sim
jaro_winkler_pairs = _impl.jaro_winkler_pairs
padded_levenshtein_pairs = _impl.padded_levenshtein_pairs

__all__ = [
    "BACKEND",
    "jaro_winkler",
    "padded_levenshtein_sim",
    "jaro_winkler_pairs",
    "padded_levenshtein_pairs",
]
