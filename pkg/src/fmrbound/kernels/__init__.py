"""Box-classification kernel backends.

The solver spends essentially all its time classifying boxes, so that
one function exists twice: a compiled Cython version (built at install
time when a toolchain is present) and a pure-Python reference.  Both
implement the same contract as resonance.classify_raw and must agree
verdict-for-verdict; the agreement is part of the test suite.  The
compiled version is picked automatically when importable.
"""

from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _ckernel

    _DEFAULT = _ckernel
    _NAME = "c"
except ImportError:
    _ckernel = None
    _DEFAULT = _pykernel
    _NAME = "python"

# honored both by setup.py (skip building) and here (skip selecting), so
# one knob forces the pure-Python kernel end to end
if os.environ.get("FMRBOUND_NO_EXT") == "1":
    _DEFAULT = _pykernel
    _NAME = "python"

__all__ = ["get_backend", "backend_name", "load_backend", "available_backends"]


def get_backend():
    """The default (fastest importable) kernel module."""
    return _DEFAULT


def backend_name() -> str:
    """'c' when the compiled kernel is active, 'python' otherwise."""
    return _NAME


def available_backends() -> dict:
    out = {"python": _pykernel}
    if _ckernel is not None:
        out["c"] = _ckernel
    return out


def load_backend(name: str):
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"no kernel backend {name!r}") from None
