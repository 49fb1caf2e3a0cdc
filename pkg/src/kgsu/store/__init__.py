"""Quad index backends.

The index core is the hot path of the engine (bulk loads insert hundreds
of thousands of quads, each touching four orderings). A compiled Cython
implementation is used when the extension was built; otherwise the
pure-Python twin is selected. Set ``KGSU_PURE_PYTHON=1`` to force the
fallback. Both expose the same interface over integer term ids:

    insert(s, p, o, g) -> bool
    remove(s, p, o, g) -> bool
    contains(s, p, o, g) -> bool
    match(s, p, o, g) -> iterator of (s, p, o, g), -1 meaning wildcard
    count() -> int
    graph_ids() -> iterable of graph ids
    copy() -> independent clone
"""

import os

from kgsu.store._indexes_py import PyQuadIndex

try:
    from kgsu.store._indexes_cy import CyQuadIndex

    _HAVE_CYTHON = True
except ImportError:
    CyQuadIndex = None
    _HAVE_CYTHON = False


def available_backends():
    backends = ["python"]
    if _HAVE_CYTHON:
        backends.append("cython")
    return backends


def default_backend() -> str:
    if _HAVE_CYTHON and os.environ.get("KGSU_PURE_PYTHON") != "1":
        return "cython"
    return "python"


def new_quad_index(backend=None):
    if backend is None:
        backend = default_backend()
    if backend == "python":
        return PyQuadIndex()
    if backend == "cython":
        if not _HAVE_CYTHON:
            raise RuntimeError("cython index backend was not built")
        return CyQuadIndex()
    raise ValueError(f"unknown backend: {backend!r}")
