"""Backend selection for the eigen-trajectory kernel.

The compiled extension is used when it was built and
``CQHM_PURE_PYTHON`` is unset; otherwise the pure-Python twin is used.
"""
import os

from . import _kernel_py

BACKEND = "python"
eigen_flow = _kernel_py.eigen_flow

if not os.environ.get("CQHM_PURE_PYTHON"):
    try:
        from ._kernel import eigen_flow  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

python_eigen_flow = _kernel_py.eigen_flow
