"""Hot loops with a compiled backend and a numpy fallback.

The compiled extension is used when it was built at install time; otherwise
the numpy implementations are used. ``use_backend`` switches explicitly.
"""

from __future__ import annotations

from types import ModuleType

from srlie.kernels import _pykernels

try:
    from srlie.kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _ckernels is not None else ("python",)


def use_backend(name: str) -> str:
    """Select "compiled" or "python"; returns the previously active backend name."""
    global _active
    previous = active_backend()
    if name == "python":
        _active = _pykernels
    elif name == "compiled":
        if _ckernels is None:
            raise RuntimeError("the compiled kernels are not built in this installation")
        _active = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}; expected 'compiled' or 'python'")
    return previous


def active_backend() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def backend() -> ModuleType:
    """The module currently providing endpoints/scan/integrate."""
    return _active
