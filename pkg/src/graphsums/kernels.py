"""Kernel backend chosen at import time.

The compiled extension is used when it was built; otherwise the pure-Python
module is. Set ``GRAPHSUMS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py as python

try:
    from . import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and not os.environ.get("GRAPHSUMS_PURE_PYTHON"):
    backend = compiled
    BACKEND = "cython"
else:
    backend = python
    BACKEND = "python"

count_sums = backend.count_sums
greedy_labeling = backend.greedy_labeling
anneal = backend.anneal
sum_graph_walks = backend.sum_graph_walks
