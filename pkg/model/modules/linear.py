import numpy as np

from model.operations import matmul
from model.params import ParamStore


class Linear(object):
    """Affine map ``W x + b`` on ``(features, batch)`` columns, no output nonlinearity."""
    def __init__(self, name: str, in_features: int, out_features: int) -> None:
        self.name = name
        self.in_features = in_features
        self.out_features = out_features

    @property
    def weight(self):
        return self.name + '.w'

    @property
    def bias(self):
        return self.name + '.b'

    def init_params(self, store: ParamStore, rng: np.random.Generator) -> None:
        bound = 1. / np.sqrt(self.in_features)
        store.add(self.weight, rng.uniform(-bound, bound, size=(self.out_features, self.in_features)))
        store.add(self.bias, np.zeros((self.out_features, 1)))

    def forward(self, store: ParamStore, x: np.ndarray) -> np.ndarray:
        return matmul(store[self.weight], x) + store[self.bias]

    def backward(self, store: ParamStore, x: np.ndarray, dout: np.ndarray) -> np.ndarray:
        store.accumulate(self.weight, matmul(dout, x.T))
        store.accumulate(self.bias, dout.sum(axis=1, keepdims=True))

        return matmul(store[self.weight].T, dout)
