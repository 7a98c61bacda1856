"""
Scaling Fits

Least-squares fit of mean waits across a p grid to y = a * g(p), with
g(p) = 1/p or (1/p) ln(1/p).
"""

from typing import Iterable, Tuple

import numpy as np
from pydantic import BaseModel

from ..config.simulation_config import ScalingModel


class ScalingFit(BaseModel):
    """Fitted coefficient and worst relative deviation."""
    model: ScalingModel
    coefficient: float
    residual: float
    points: int


def scaling_basis(p: np.ndarray, model: ScalingModel) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if model is ScalingModel.ONE_OVER_P:
        return 1.0 / p
    return (1.0 / p) * np.log(1.0 / p)


def fit_scaling(points: Iterable[Tuple[float, float]], model: ScalingModel) -> ScalingFit:
    """
    Fit y = a * g(p) without intercept.

    Args:
        points: (p, mean_wait) pairs with distinct p
        model: basis g

    Returns:
        ScalingFit with residual = max |y - a g(p)| / (a g(p)), 0 where both are 0

    Raises:
        ValueError: fewer than 3 points, repeated p, or p outside (0, 1)
    """
    model = ScalingModel(model)
    data = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if len(data) < 3:
        raise ValueError(f"a scaling fit needs at least 3 points, got {len(data)}")
    p, y = data[:, 0], data[:, 1]
    if len(np.unique(p)) != len(p):
        raise ValueError("grid points must have distinct p")
    if ((p <= 0) | (p >= 1)).any():
        raise ValueError("every p must lie in (0, 1)")

    g = scaling_basis(p, model)
    (a,), *_ = np.linalg.lstsq(g[:, None], y, rcond=None)
    fitted = a * g
    gap = np.abs(y - fitted)
    scale = np.abs(fitted)
    # a zero fit of zero data has no relative error
    relative = np.divide(gap, scale, out=np.where(gap == 0, 0.0, np.inf), where=scale > 0)
    residual = float(np.max(relative))
    return ScalingFit(model=model, coefficient=float(a), residual=residual, points=len(p))
