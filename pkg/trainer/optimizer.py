from dataclasses import dataclass

import numpy as np

from model.params import ParamStore
from exceptions import NumericError


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if not 0. < self.beta1 < 1.:
            raise ValueError('beta1 must be in (0, 1), got {}'.format(self.beta1))
        if not 0. < self.beta2 < 1.:
            raise ValueError('beta2 must be in (0, 1), got {}'.format(self.beta2))
        if self.learning_rate <= 0.:
            raise ValueError('learning rate must be positive, got {}'.format(self.learning_rate))
        if self.epsilon <= 0.:
            raise ValueError('epsilon must be positive, got {}'.format(self.epsilon))


def adam_step(store: ParamStore, cfg: AdamConfig) -> ParamStore:
    """One bias-corrected Adam update of every parameter in place; clears gradients."""
    for name in store.names():
        if not np.all(np.isfinite(store.grad(name))):
            raise NumericError(name)

    step = store.step + 1
    bias_correction1 = 1. - cfg.beta1 ** step
    bias_correction2 = 1. - cfg.beta2 ** step

    for name, param in store.items():
        grad = store.grad(name)
        m = store.first_moment(name)
        v = store.second_moment(name)

        m *= cfg.beta1
        m += (1. - cfg.beta1) * grad
        v *= cfg.beta2
        v += (1. - cfg.beta2) * (grad * grad)

        m_hat = m / bias_correction1
        v_hat = v / bias_correction2
        param -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)

    store.zero_grad()
    store.step = step

    return store
