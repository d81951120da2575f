"""Kernel backend selection.

The compiled extension is used when it imports; set ``NCONN_KERNELS=python``
to force the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("NCONN_KERNELS", "").lower() == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
rank_from_bases = _impl.rank_from_bases
rank_from_circuits = _impl.rank_from_circuits
dual_table = _impl.dual_table
minor_table = _impl.minor_table
kappa = _impl.kappa
exchange_violation = _impl.exchange_violation
scan_grounds = _impl.scan_grounds
first_witness = _impl.first_witness

__all__ = [
    "BACKEND",
    "rank_from_bases",
    "rank_from_circuits",
    "dual_table",
    "minor_table",
    "kappa",
    "exchange_violation",
    "scan_grounds",
    "first_witness",
]
