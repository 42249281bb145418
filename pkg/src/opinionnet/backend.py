"""Selects the RK4 kernel backend at import time.

The compiled extension is preferred; set ``OPINIONNET_PURE_PYTHON=1`` to
force the numpy fallback (used by the backend benchmark and CI without a
compiler).
"""
from __future__ import annotations

import os

if os.environ.get("OPINIONNET_PURE_PYTHON"):
    from . import _stepper_py as stepper
else:
    try:
        from . import _stepper as stepper  # type: ignore[no-redef]
    except ImportError:
        from . import _stepper_py as stepper  # type: ignore[no-redef]

BACKEND_NAME: str = stepper.BACKEND_NAME

rk4_trajectory = stepper.rk4_trajectory
rk4_final = stepper.rk4_final
rk4_to_equilibrium = stepper.rk4_to_equilibrium
