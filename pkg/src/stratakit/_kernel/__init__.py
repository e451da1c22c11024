"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``STRATAKIT_KERNEL=pure`` (or ``compiled``) to force a backend; the
default prefers the compiled extension and silently falls back.  Both
backends implement the same functions with identical results, and
``benchmarks/compare_kernels.py`` measures the difference.
"""

import os

_choice = os.environ.get("STRATAKIT_KERNEL", "").strip().lower()

if _choice == "pure":
    from . import _pure as _impl
elif _choice == "compiled":
    from . import _core as _impl  # ImportError here is deliberate: user asked
else:
    try:
        from . import _core as _impl
    except ImportError:
        from . import _pure as _impl

BACKEND = _impl.BACKEND
combine = _impl.combine
scale_terms = _impl.scale_terms
content = _impl.content
strip_content = _impl.strip_content
find_divisor = _impl.find_divisor
reduce_full = _impl.reduce_full
pair_candidates = _impl.pair_candidates
chain_filter = _impl.chain_filter
