from collections import OrderedDict
from typing import Dict, Iterator, Tuple

import numpy as np

from exceptions import DimensionError


class ParamStore(object):
    """Named float64 parameters with gradient accumulators and Adam moments.

    Parameters keep their insertion order; that order defines the parameter
    groups reported by gradient checking and the layout of checkpoints.
    """
    def __init__(self):
        self._params = OrderedDict()
        self._grads = OrderedDict()
        self._first_moments = OrderedDict()
        self._second_moments = OrderedDict()
        self.step = 0

    def add(self, name: str, value: np.ndarray) -> None:
        if name in self._params:
            raise ValueError('duplicated parameter name: {}'.format(name))
        value = np.array(value, dtype=np.float64)
        self._params[name] = value
        self._grads[name] = np.zeros_like(value)
        self._first_moments[name] = np.zeros_like(value)
        self._second_moments[name] = np.zeros_like(value)

    def __getitem__(self, name: str) -> np.ndarray:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __len__(self) -> int:
        return len(self._params)

    def names(self):
        return list(self._params.keys())

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        return iter(self._params.items())

    def grad(self, name: str) -> np.ndarray:
        return self._grads[name]

    def first_moment(self, name: str) -> np.ndarray:
        return self._first_moments[name]

    def second_moment(self, name: str) -> np.ndarray:
        return self._second_moments[name]

    def accumulate(self, name: str, grad: np.ndarray) -> None:
        if grad.shape != self._params[name].shape:
            raise DimensionError('accumulate {}'.format(name), self._params[name].shape, grad.shape)
        self._grads[name] += grad

    def zero_grad(self) -> None:
        for grad in self._grads.values():
            grad.fill(0.)

    def gradients(self) -> Dict[str, np.ndarray]:
        return OrderedDict((name, grad.copy()) for name, grad in self._grads.items())

    def load_state(self, params: Dict[str, np.ndarray], first_moments: Dict[str, np.ndarray] = None,
                   second_moments: Dict[str, np.ndarray] = None, step: int = 0) -> None:
        for name, value in params.items():
            if name not in self._params:
                self.add(name, value)
            elif self._params[name].shape != np.shape(value):
                raise DimensionError('load {}'.format(name), self._params[name].shape, np.shape(value))
            else:
                self._params[name][...] = value
        for moments, source in ((self._first_moments, first_moments), (self._second_moments, second_moments)):
            if source is None:
                continue
            for name, value in source.items():
                moments[name][...] = value
        self.step = int(step)

    def state(self) -> Dict[str, Dict[str, np.ndarray]]:
        return {'params': OrderedDict(self._params),
                'first_moments': OrderedDict(self._first_moments),
                'second_moments': OrderedDict(self._second_moments)}
