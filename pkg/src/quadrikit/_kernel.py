"""Kernel selection: compiled term arithmetic when available, pure Python otherwise.

Set QUADRIKIT_PURE=1 to force the pure-Python kernel (used by the benchmark
and by tests that compare the two backends).
"""

import os

if os.environ.get("QUADRIKIT_PURE"):
    from quadrikit import _poly_core_py as impl
else:
    try:
        from quadrikit import _poly_core_cy as impl  # type: ignore[no-redef]
    except ImportError:
        from quadrikit import _poly_core_py as impl  # type: ignore[no-redef]

add_terms = impl.add_terms
sub_terms = impl.sub_terms
neg_terms = impl.neg_terms
scale_terms = impl.scale_terms
shift_terms = impl.shift_terms
mul_terms = impl.mul_terms
leading_monomial = impl.leading_monomial


def backend_name():
    return impl.BACKEND
