from typing import NamedTuple, Tuple

import numpy as np

from model.operations import matmul, sigmoid, tanh
from model.params import ParamStore
from exceptions import DimensionError


class LSTMStepCache(NamedTuple):
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    i: np.ndarray
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray


class LSTMLayer(object):
    """One LSTM layer evaluated a step at a time on ``(features, batch)`` columns.

    Gate rows are stacked as input, forget, cell, output, each ``hidden`` tall,
    which matches the ``weight_ih_l0`` layout of ``torch.nn.LSTM``.
    """
    def __init__(self, name: str, input_size: int, hidden_size: int) -> None:
        self.name = name
        self.input_size = input_size
        self.hidden_size = hidden_size

    @property
    def w_ih(self):
        return self.name + '.w_ih'

    @property
    def w_hh(self):
        return self.name + '.w_hh'

    @property
    def bias(self):
        return self.name + '.b'

    def init_params(self, store: ParamStore, rng: np.random.Generator, forget_bias: float = 1.) -> None:
        hidden = self.hidden_size
        store.add(self.w_ih, _uniform_fan_in(rng, (4 * hidden, self.input_size), self.input_size))
        store.add(self.w_hh, _uniform_fan_in(rng, (4 * hidden, hidden), hidden))
        bias = np.zeros((4 * hidden, 1))
        bias[hidden:2 * hidden] = forget_bias
        store.add(self.bias, bias)

    def zero_state(self, batch_size: int) -> Tuple[np.ndarray, np.ndarray]:
        return np.zeros((self.hidden_size, batch_size)), np.zeros((self.hidden_size, batch_size))

    def step(self, store: ParamStore, x: np.ndarray, h_prev: np.ndarray,
             c_prev: np.ndarray) -> Tuple[np.ndarray, np.ndarray, LSTMStepCache]:
        if x.shape[0] != self.input_size:
            raise DimensionError(self.name, store[self.w_ih].shape, x.shape)

        hidden = self.hidden_size
        gates = matmul(store[self.w_ih], x) + matmul(store[self.w_hh], h_prev) + store[self.bias]

        i = sigmoid(gates[:hidden])
        f = sigmoid(gates[hidden:2 * hidden])
        g = tanh(gates[2 * hidden:3 * hidden])
        o = sigmoid(gates[3 * hidden:])

        c = f * c_prev + i * g
        tanh_c = tanh(c)
        h = o * tanh_c

        return h, c, LSTMStepCache(x, h_prev, c_prev, i, f, g, o, c, tanh_c)

    def step_backward(self, store: ParamStore, cache: LSTMStepCache, dh: np.ndarray,
                      dc: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Accumulates parameter gradients; returns (dx, dh_prev, dc_prev)."""
        do = dh * cache.tanh_c
        dc = dc + dh * cache.o * (1. - cache.tanh_c ** 2)

        di = dc * cache.g
        dg = dc * cache.i
        df = dc * cache.c_prev
        dc_prev = dc * cache.f

        dgates = np.concatenate([di * cache.i * (1. - cache.i),
                                 df * cache.f * (1. - cache.f),
                                 dg * (1. - cache.g ** 2),
                                 do * cache.o * (1. - cache.o)], axis=0)

        store.accumulate(self.w_ih, matmul(dgates, cache.x.T))
        store.accumulate(self.w_hh, matmul(dgates, cache.h_prev.T))
        store.accumulate(self.bias, dgates.sum(axis=1, keepdims=True))

        dx = matmul(store[self.w_ih].T, dgates)
        dh_prev = matmul(store[self.w_hh].T, dgates)

        return dx, dh_prev, dc_prev


def _uniform_fan_in(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    bound = 1. / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)
