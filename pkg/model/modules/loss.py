from typing import Tuple

import numpy as np

from exceptions import DimensionError


def mse_loss(predictions: np.ndarray, targets: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean squared error over every element, with its gradient w.r.t. predictions.

    predictions and targets are ``(steps, 4, batch)`` stacks of normalized boxes.
    """
    if predictions.shape != targets.shape:
        raise DimensionError('mse_loss', predictions.shape, targets.shape)

    residual = predictions - targets
    loss = float(np.mean(residual ** 2))
    grad = 2. * residual / residual.size

    return loss, grad
