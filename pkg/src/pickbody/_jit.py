"""Kernel loading with optional numba compilation.

The hot kernels live in ``pickbody._kernels`` as plain numpy functions.
When numba is importable and ``PICKBODY_DISABLE_JIT`` is not set, they are
compiled with ``@njit(cache=True)`` at import; otherwise the interpreted
numpy versions run unchanged. ``build_kernels`` loads a fresh, independent
copy of the module so that tests and the benchmark can hold both variants
in one process.
"""

import importlib.util
import os

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def jit_disabled_by_env() -> bool:
    return os.environ.get("PICKBODY_DISABLE_JIT", "").strip().lower() in {
        "1", "true", "yes", "on",
    }


JIT_ENABLED = HAVE_NUMBA and not jit_disabled_by_env()


def build_kernels(use_jit: bool):
    """Load an independent instance of the kernel module.

    With ``use_jit`` the kernels are rebound to their compiled versions in
    dependency order; numba resolves cross-calls through the module
    globals at first call, so dependents pick up the compiled callees.
    """
    spec = importlib.util.find_spec("pickbody._kernels")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    if use_jit:
        from numba import njit
        for name in mod.JIT_KERNELS:
            setattr(mod, name, njit(cache=True)(getattr(mod, name)))
    return mod


kernels = build_kernels(JIT_ENABLED)
