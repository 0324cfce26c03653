"""Hot loops, compiled when possible.

The compiled extension ``_ckernels`` is preferred; when it is missing (or
``DIAMGRAPH_PURE=1`` is set) the pure-Python module ``_pykernels`` is used.
``BACKEND`` names the module in use.
"""

import os

from . import _pykernels

_FUNCS = ("max_pair_sq", "pairs_at_least", "soft_score", "anneal", "classify_arc_pairs")

_compiled = None
if os.environ.get("DIAMGRAPH_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _pykernels
BACKEND = "cython" if _compiled is not None else "python"

max_pair_sq = _impl.max_pair_sq
pairs_at_least = _impl.pairs_at_least
soft_score = _impl.soft_score
anneal = _impl.anneal
classify_arc_pairs = _impl.classify_arc_pairs

ARC_CODES = ("disjoint", "shared_endpoint", "touch", "proper_crossing", "overlap")


def backends() -> dict:
    """All importable backends keyed by name (used by tests and benchmarks)."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
