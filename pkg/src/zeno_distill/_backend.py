"""Pick the compiled kernels when available.

Set ``ZENO_DISTILL_BACKEND=python`` to force the numpy fallback.
"""
import os

from . import _fallback

BACKENDS = {"python": _fallback}

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None
else:
    BACKENDS["compiled"] = _kernels

_choice = os.environ.get("ZENO_DISTILL_BACKEND", "").strip().lower()
if _choice and _choice not in ("python", "compiled"):
    raise ImportError(f"unknown ZENO_DISTILL_BACKEND={_choice!r}")
if _choice == "compiled" and _kernels is None:
    raise ImportError("ZENO_DISTILL_BACKEND=compiled but the extension is not built")

NAME = _choice or ("compiled" if _kernels is not None else "python")
_impl = BACKENDS[NAME]

displacement_elements = _impl.displacement_elements
projected_sum = _impl.projected_sum
