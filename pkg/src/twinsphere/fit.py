"""Least-squares fit of tau(2, 10^x) ~ a - b / (x^2 + c)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import SingularFit

REFERENCE_MODEL = (2.47299, 1.63688, 0.325582)


@dataclass(frozen=True)
class ModelFit:
    a: float
    b: float
    c: float
    residual_norm: float

    def __call__(self, x):
        return tau2_model(np.asarray(x, dtype=np.float64), self.a, self.b, self.c)


def tau2_model(x, a, b, c):
    return a - b / (x * x + c)


def _jac(params, x, y):
    a, b, c = params
    g = 1.0 / (x * x + c)
    return np.column_stack([np.ones_like(x), -g, b * g * g])


def fit_tau2_model(samples: Sequence[tuple[float, float]]) -> ModelFit:
    """Levenberg-Marquardt fit of a - b/(x^2 + c) to (x, tau) samples."""
    if len(samples) < 4:
        raise SingularFit(f"need at least 4 samples for 3 parameters, got {len(samples)}")
    x = np.array([p[0] for p in samples], dtype=np.float64)
    y = np.array([p[1] for p in samples], dtype=np.float64)
    if len(np.unique(x)) != len(x):
        raise SingularFit("sample abscissae must be distinct")

    # linear solve for (a, b) at c = 1 gives the starting point
    g = 1.0 / (x * x + 1.0)
    (a0, b0), *_ = np.linalg.lstsq(np.column_stack([np.ones_like(x), -g]), y, rcond=None)

    res = least_squares(
        lambda p: tau2_model(x, *p) - y,
        x0=[a0, b0, 1.0],
        jac=lambda p: _jac(p, x, y),
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=10000,
    )
    a, b, c = res.x
    if np.linalg.matrix_rank(res.jac) < 3:
        raise SingularFit("Jacobian is rank-deficient at the solution")
    if not c > 0:
        raise SingularFit(f"fitted pole c = {c:g} is not positive")
    return ModelFit(float(a), float(b), float(c), float(np.linalg.norm(res.fun)))
