"""Constant-velocity linear-regression baseline.

A line y = a x + b is fitted to the observed top-left corners and another to
the bottom-right corners. Each corner's x keeps moving by its average observed
per-frame displacement and y is read off the corner's line. A corner whose x
barely moves has no usable y-versus-x slope; its y is regressed on the frame
index instead and its x is held.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from sklearn.linear_model import LinearRegression

from configs.constants import BOX_SIZE, MIN_DEGENERATE_X_VARIANCE, T_OBSV, T_PRED
from data_manager.schema import PredictionSet, TrackWindow
from exceptions import ContractError

TOP_LEFT = (0, 1)
BOTTOM_RIGHT = (2, 3)


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    # x-step per frame
    alpha: float
    x_last: float
    degenerate: bool

    def extrapolate(self, offset: int, t0: int) -> Tuple[float, float]:
        if self.degenerate:
            return self.x_last, self.slope * (t0 + offset) + self.intercept
        x = self.x_last + offset * self.alpha
        return x, self.slope * x + self.intercept


@dataclass(frozen=True)
class CornerRegression:
    top_left: LineFit
    bottom_right: LineFit
    t_obsv: int = T_OBSV


def fit_line(x: np.ndarray, y: np.ndarray) -> LineFit:
    t_obsv = x.shape[0]
    alpha = (x[-1] - x[0]) / (t_obsv - 1)
    degenerate = float(np.var(x)) < MIN_DEGENERATE_X_VARIANCE
    regressor = np.arange(t_obsv, dtype=np.float64) if degenerate else x

    fit = LinearRegression().fit(regressor.reshape(-1, 1), y)

    return LineFit(slope=float(fit.coef_[0]), intercept=float(fit.intercept_), alpha=float(alpha),
                   x_last=float(x[-1]), degenerate=degenerate)


def lr_fit(observed: np.ndarray) -> CornerRegression:
    observed = np.asarray(observed, dtype=np.float64)
    if observed.ndim != 2 or observed.shape[0] < 2 or observed.shape[1] != BOX_SIZE:
        raise ContractError('LR needs at least two observed boxes, got shape {}'.format(observed.shape))

    lines = [fit_line(observed[:, xc], observed[:, yc]) for xc, yc in (TOP_LEFT, BOTTOM_RIGHT)]

    return CornerRegression(lines[0], lines[1], t_obsv=observed.shape[0])


def lr_rollout(regression: CornerRegression, t_pred: int = T_PRED) -> np.ndarray:
    """Boxes for offsets +1 ... +t_pred."""
    t0 = regression.t_obsv - 1
    predictions = np.empty((t_pred, BOX_SIZE))
    for k in range(1, t_pred + 1):
        x1, y1 = regression.top_left.extrapolate(k, t0)
        x2, y2 = regression.bottom_right.extrapolate(k, t0)
        predictions[k - 1] = (x1, y1, x2, y2)

    return predictions


def lr_fit_predict(window: TrackWindow, t_obsv: int = T_OBSV, t_pred: int = T_PRED) -> PredictionSet:
    regression = lr_fit(window.boxes[:t_obsv])
    predictions = lr_rollout(regression, t_pred)

    return PredictionSet(predictions[1:], tuple(range(2, t_pred + 1)))
