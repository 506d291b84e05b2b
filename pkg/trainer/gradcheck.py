import logging
from collections import OrderedDict
from typing import Callable, Dict

import numpy as np
from tqdm import tqdm

from model.params import ParamStore
from exceptions import ContractError

logger = logging.getLogger(__name__)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1., abs(analytic), abs(numeric))


def grad_check_groups(forward: Callable[[ParamStore], float],
                      store: ParamStore,
                      analytic: Dict[str, np.ndarray],
                      h: float = 1e-5,
                      show_progress: bool = False) -> Dict[str, float]:
    """Max relative error per parameter, central differences against ``analytic``.

    ``store`` is perturbed in place one element at a time and restored exactly.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError('finite-difference step must be in [1e-7, 1e-3], got {}'.format(h))

    reference = forward(store)
    if forward(store) != reference:
        raise ContractError('forward is not deterministic: two evaluations at the same point differ')

    errors = OrderedDict()
    names = store.names()
    for name in tqdm(names, desc='gradient check', disable=not show_progress):
        param = store[name]
        grad = analytic[name]
        worst = 0.
        for idx in np.ndindex(param.shape):
            original = param[idx]

            param[idx] = original + h
            f_plus = forward(store)
            param[idx] = original - h
            f_minus = forward(store)
            param[idx] = original

            numeric = (f_plus - f_minus) / (2. * h)
            worst = max(worst, relative_error(float(grad[idx]), numeric))
        errors[name] = worst
        logger.debug('{}: max relative error {:.3e}'.format(name, worst))

    return errors


def grad_check(forward: Callable[[ParamStore], float],
               store: ParamStore,
               h: float = 1e-5,
               gradient: Callable[[ParamStore], Dict[str, np.ndarray]] = None) -> float:
    """Max relative error over every parameter element.

    ``gradient`` returns the analytic gradients at ``store``; without it the
    gradients already accumulated in ``store`` are used.
    """
    analytic = gradient(store) if gradient is not None else store.gradients()

    return max(grad_check_groups(forward, store, analytic, h).values(), default=0.)
