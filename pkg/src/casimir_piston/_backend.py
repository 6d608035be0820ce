"""Select the compiled kernels when available, else the numpy fallback.

Set ``CASIMIR_PISTON_PURE=1`` in the environment to force the fallback.
"""
import os

from . import _pykernels

python_kernels = _pykernels
compiled_kernels = None

if os.environ.get("CASIMIR_PISTON_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "compiled" if compiled_kernels is not None else "python"


def available_backends():
    """Names and modules of every usable backend, compiled first."""
    out = {}
    if compiled_kernels is not None:
        out["compiled"] = compiled_kernels
    out["python"] = python_kernels
    return out


def get(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return kernels
    backends = available_backends()
    if name not in backends:
        raise ValueError(f"backend {name!r} not available; have {sorted(backends)}")
    return backends[name]
