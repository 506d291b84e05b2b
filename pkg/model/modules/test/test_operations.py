import numpy as np
import pytest

from exceptions import DimensionError
from model.modules.linear import Linear
from model.modules.loss import mse_loss
from model.operations import ADD, MUL, SIGMOID, TANH, as_matrix, dropout_mask, dropout_mask_apply, elementwise, \
    matmul, sigmoid, tanh
from model.params import ParamStore
from trainer.gradcheck import grad_check


def test_matmul():
    a = as_matrix([[1, 2], [3, 4]])

    assert np.array_equal(matmul(a, as_matrix([[5], [6]])), [[17.], [39.]])
    assert np.array_equal(matmul(a, np.eye(2)), a)
    assert not matmul(np.zeros((3, 2)), a).any()


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_associative():
    rng = np.random.default_rng(0)
    a, b, c = rng.normal(size=(3, 4)), rng.normal(size=(4, 5)), rng.normal(size=(5, 2))

    np.testing.assert_allclose(matmul(matmul(a, b), c), matmul(a, matmul(b, c)), atol=1e-12)


def test_elementwise():
    x = as_matrix([[0., 1.], [-1., 2.]])

    assert sigmoid(as_matrix(0.))[0, 0] == 0.5
    assert tanh(as_matrix(0.))[0, 0] == 0.
    assert np.array_equal(elementwise(ADD, x, x), 2 * x)
    assert np.array_equal(elementwise(MUL, x, x), x ** 2)
    assert np.array_equal(elementwise(SIGMOID, x), sigmoid(x))
    assert np.array_equal(elementwise(TANH, x), np.tanh(x))
    with pytest.raises(DimensionError):
        elementwise(ADD, x, np.ones((3, 3)))


def test_sigmoid_is_finite_for_large_inputs():
    out = sigmoid(as_matrix([[-1000., 1000.]]))

    assert np.all(np.isfinite(out))
    assert out[0, 0] == 0. and out[0, 1] == 1.


def test_dropout_mask():
    x = np.ones((1, 1000))
    out = dropout_mask_apply(x, dropout_mask(x.shape, 0.5, np.random.default_rng(0)))

    assert abs(out.mean() - 1.) <= 0.15
    assert set(np.unique(out)) <= {0., 2.}
    assert np.array_equal(dropout_mask_apply(x, dropout_mask(x.shape, 0., np.random.default_rng(0))), x)


def test_mse_loss():
    predictions = np.zeros((2, 4, 3))
    targets = np.ones((2, 4, 3))

    loss, grad = mse_loss(predictions, targets)

    assert loss == 1.
    np.testing.assert_allclose(grad, -2. / 24)
    assert mse_loss(targets, targets)[0] == 0.


def test_linear_backward():
    head = Linear('head', 5, 4)
    store = ParamStore()
    head.init_params(store, np.random.default_rng(0))
    rng = np.random.default_rng(1)
    x = rng.normal(size=(5, 3))
    weights = rng.normal(size=(4, 3))

    def forward(params):
        return float(np.sum(head.forward(params, x) * weights))

    def gradient(params):
        params.zero_grad()
        head.backward(params, x, weights)
        return params.gradients()

    assert grad_check(forward, store, h=1e-5, gradient=gradient) < 1e-8
