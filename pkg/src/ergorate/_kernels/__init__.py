"""Backend selection for the hot detector-scan kernel.

A compiled extension (`_scan`, built from _scan.pyx) provides the per-point
loop in C; the `pure` module is a batched numpy implementation of the same
interface.  The compiled backend is used when importable unless overridden by
ERGORATE_BACKEND=pure|compiled.
"""

import os

from . import pure

try:
    from . import _scan as compiled
except ImportError:
    compiled = None

_FORCED = os.environ.get("ERGORATE_BACKEND", "").strip().lower()


def available_backends():
    out = {"pure": pure}
    if compiled is not None:
        out["compiled"] = compiled
    return out

def get_backend(name=None):
    backends = available_backends()
    if name is None:
        name = _FORCED or ("compiled" if "compiled" in backends else "pure")
    if name not in backends:
        raise ImportError(
            f"kernel backend {name!r} unavailable (have: {sorted(backends)}); "
            "build the extension with `python setup.py build_ext --inplace`"
        )
    return backends[name]


def backend_name():
    return get_backend().name
