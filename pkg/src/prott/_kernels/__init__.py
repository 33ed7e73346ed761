"""Kernel backend selection.

The compiled extension is used when importable; setting the environment
variable ``PROTT_PURE_PYTHON=1`` forces the pure fallback. Both backends
implement identical contracts (see tests/test_kernels.py).
"""

from __future__ import annotations

import os

from . import pure

_speed_mod = None
if not os.environ.get("PROTT_PURE_PYTHON"):
    try:
        from . import _speed as _speed_mod  # type: ignore[no-redef]
    except ImportError:
        _speed_mod = None

BACKEND = "compiled" if _speed_mod is not None else "pure"


def close_mask_pure(mul_rows, seed_mask: int) -> int:
    return pure.close_mask(mul_rows, seed_mask)


def conjugate_mask_pure(mul_rows, inv_row, mask: int, g: int) -> int:
    return pure.conjugate_mask(mul_rows, inv_row, mask, g)


def close_mask_compiled(mul_np, seed_mask: int) -> int:
    return _speed_mod.close_mask(mul_np, seed_mask)


def conjugate_mask_compiled(mul_np, inv_np, mask: int, g: int) -> int:
    return _speed_mod.conjugate_mask(mul_np, inv_np, mask, g)


image_mask = pure.image_mask
