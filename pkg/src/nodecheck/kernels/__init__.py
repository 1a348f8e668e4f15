"""Numeric kernels behind the explicit-state checker.

Two interchangeable implementations: loop kernels compiled with numba
(default) and a vectorized numpy/scipy fallback. Selection: the
``NODECHECK_DISABLE_NUMBA`` environment variable (``1``/``true``/``yes``)
forces the fallback, as does an unavailable numba; tests and the
benchmark switch explicitly via :func:`set_backend`.

Kernel contract (identical results, identical orderings, both backends):

- ``expand_frontier(states, *tables) -> (succ_rows, offsets)``:
  per-state successor blocks, last variable varying fastest.
- ``ex_mask(succ_indptr, succ_indices, target) -> mask``:
  states with a successor in ``target``.
- ``eu_mask(succ_indptr, succ_indices, pred_indptr, pred_indices, a, b)``:
  least fixpoint of ``b | (a & EX result)``.
- ``scc_ids(succ_indptr, succ_indices, mask) -> int64 ids`` (-1 outside
  ``mask``; numbering is backend-specific, membership is not).
- ``bfs_tree(succ_indptr, succ_indices, sources, allowed) -> parents``
  (-1 for sources, -2 unreached; deterministic discovery order).
"""

from __future__ import annotations

import os

_FORCED: str | None = None
_impl = None


def _env_disabled() -> bool:
    return os.environ.get("NODECHECK_DISABLE_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
    }


def set_backend(name: str | None) -> None:
    """Force ``"numba"`` or ``"numpy"``; ``None`` restores auto-selection."""
    global _FORCED, _impl
    if name not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _FORCED = name
    _impl = None


def get_impl():
    global _impl
    if _impl is not None:
        return _impl
    choice = _FORCED
    if choice is None:
        choice = "numpy" if _env_disabled() else "numba"
    if choice == "numba":
        try:
            from . import numba_impl as impl
        except ImportError:
            from . import numpy_impl as impl
    else:
        from . import numpy_impl as impl
    _impl = impl
    return impl


def backend_name() -> str:
    return get_impl().BACKEND
