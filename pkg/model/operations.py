"""Dense float64 matrix operations used by the hand-written LSTM.

A matrix is a 2-D ``numpy.ndarray`` of dtype float64. Every function here
returns a new array and never mutates its operands.
"""
import numpy as np

from exceptions import DimensionError

ADD = 'add'
MUL = 'mul'
SIGMOID = 'sigmoid'
TANH = 'tanh'
DROPOUT = 'dropout_mask_apply'


def as_matrix(values) -> np.ndarray:
    matrix = np.array(values, dtype=np.float64)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    elif matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    elif matrix.ndim != 2:
        raise DimensionError('as_matrix', matrix.shape, (None, None))

    return np.ascontiguousarray(matrix)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError('matmul', a.shape, b.shape)

    return a @ b


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_broadcast('add', a, b)
    return a + b


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_broadcast('mul', a, b)
    return a * b


def sigmoid(x: np.ndarray) -> np.ndarray:
    # split by sign so exp never overflows
    out = np.empty_like(x, dtype=np.float64)
    positive = x >= 0
    out[positive] = 1. / (1. + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1. + exp_x)

    return out


def tanh(x: np.ndarray) -> np.ndarray:
    return np.tanh(x)


def dropout_mask(shape, p: float, rng: np.random.Generator) -> np.ndarray:
    """Inverted-dropout mask: 0 with probability p, 1/(1-p) otherwise."""
    if not 0. <= p < 1.:
        raise ValueError('dropout probability must be in [0, 1), got {}'.format(p))
    if p == 0.:
        return np.ones(shape, dtype=np.float64)

    keep = rng.random(shape) >= p

    return keep.astype(np.float64) / (1. - p)


def dropout_mask_apply(x: np.ndarray, mask: np.ndarray) -> np.ndarray:
    if x.shape != mask.shape:
        raise DimensionError(DROPOUT, x.shape, mask.shape)

    return x * mask


def elementwise(op: str, *args) -> np.ndarray:
    if op == ADD:
        return add(*args)
    elif op == MUL:
        return mul(*args)
    elif op == SIGMOID:
        return sigmoid(*args)
    elif op == TANH:
        return tanh(*args)
    elif op == DROPOUT:
        return dropout_mask_apply(*args)
    else:
        raise ValueError('unknown element-wise operation: {}'.format(op))


def _check_broadcast(op, a, b):
    if a.shape == b.shape:
        return
    # column-vector biases broadcast across the batch columns
    if a.ndim == 2 and b.ndim == 2 and b.shape == (a.shape[0], 1):
        return

    raise DimensionError(op, a.shape, b.shape)
