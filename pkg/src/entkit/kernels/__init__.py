"""Kernel backend selection.

The hot numerical kernels (hermitian eigensolver, ensemble rotation
sweeps) exist twice: a compiled Cython core and a pure numpy fallback.
The compiled backend is used when importable; set ``ENTKIT_KERNELS`` to
``python`` or ``compiled`` to force a choice (``compiled`` raises if the
extension is missing).
"""

import os

_choice = os.environ.get("ENTKIT_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "python", "compiled"):
    raise RuntimeError(
        f"ENTKIT_KERNELS must be 'auto', 'python' or 'compiled', got {_choice!r}"
    )

if _choice == "python":
    from . import _pyk as _impl
else:
    try:
        from . import _cyk as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _pyk as _impl

BACKEND = _impl.BACKEND
eigh = _impl.eigh
column_scores = _impl.column_scores
eof_sweep = _impl.eof_sweep


def available_backends():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    try:
        from . import _cyk  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return a specific backend module ('python' or 'compiled')."""
    if name == "python":
        from . import _pyk

        return _pyk
    if name == "compiled":
        from . import _cyk

        return _cyk
    raise ValueError(f"unknown kernel backend {name!r}")
