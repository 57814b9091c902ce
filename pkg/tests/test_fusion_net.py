import numpy as np
import pytest

from classify.fusion_net import (
    FusionConfig,
    FusionNet,
    fusion_forward,
    fusion_gradients,
    fusion_logits,
    fusion_loss,
    fusion_train,
    fusion_train_restarts,
    gradient_check,
    history_summary,
    init_fusion_net,
)
from errors import InputError, NumericalError


def _blobs(rng, k, per_class=20, spread=0.3):
    dim = k * (k - 1)
    centres = 2.0 * rng.standard_normal((k, dim))
    labels = np.repeat(np.arange(k), per_class)
    inputs = centres[labels] + spread * rng.standard_normal((labels.size, dim))
    return (inputs - inputs.mean(axis=0)) / inputs.std(axis=0), labels


def test_initialization_shapes_and_biases():
    net = init_fusion_net(6, seed=3)
    assert [w.shape for w in net.weights] == [(30, 8), (8, 4), (4, 6)]
    assert all(np.all(b == 0.01) for b in net.biases)
    assert net.class_count == 6 and net.input_dim == 30
    again = init_fusion_net(6, seed=3)
    assert all(np.array_equal(a, b) for a, b in zip(net.weights, again.weights))
    with pytest.raises(InputError):
        init_fusion_net(1, seed=0)


def test_net_rejects_inconsistent_layers():
    with pytest.raises(InputError):
        FusionNet([np.zeros((3, 8)), np.zeros((8, 4)), np.zeros((4, 2))], [np.zeros(8), np.zeros(4), np.zeros(2)])
    with pytest.raises(InputError):
        FusionNet([np.zeros((2, 8)), np.zeros((7, 4)), np.zeros((4, 2))], [np.zeros(8), np.zeros(4), np.zeros(2)])


def test_forward_gives_probabilities(rng):
    net = init_fusion_net(3, seed=0)
    batch = rng.standard_normal((7, 6))
    probabilities = fusion_forward(net, batch)
    assert probabilities.shape == (7, 3)
    assert np.all(probabilities >= 0.0)
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0, atol=1e-9)
    single = fusion_forward(net, batch[0])
    np.testing.assert_allclose(single, probabilities[0])
    with pytest.raises(InputError):
        fusion_forward(net, np.zeros(5))


def test_softmax_ignores_constant_output_shift(rng):
    net = init_fusion_net(4, seed=1)
    shifted = net.copy()
    shifted.biases[2] += 123.0
    batch = rng.standard_normal((5, 12))
    np.testing.assert_allclose(fusion_forward(shifted, batch), fusion_forward(net, batch), atol=1e-12)


def test_huge_activations_are_numerical_errors():
    net = init_fusion_net(2, seed=0)
    net.weights[2][:] = 1e308
    net.biases[1][:] = 1e308
    with pytest.raises(NumericalError):
        fusion_forward(net, np.ones(2))


def test_loss_matches_gradient_report(rng):
    net = init_fusion_net(3, seed=2)
    batch = rng.standard_normal((4, 6))
    labels = np.array([0, 1, 2, 1])
    loss, grads = fusion_gradients(net, batch, labels)
    assert loss == pytest.approx(fusion_loss(net, batch, labels))
    assert [g.shape for g in grads] == [p.shape for p in net.parameters()]
    logits = fusion_logits(net, batch)
    expected = -np.mean(logits[np.arange(4), labels] - np.log(np.exp(logits).sum(axis=1)))
    assert loss == pytest.approx(expected)


@pytest.mark.parametrize("k", [2, 6])
def test_backpropagation_matches_central_differences(k):
    rng = np.random.default_rng(100 + k)
    for draw in range(10):
        net = init_fusion_net(k, seed=draw)
        batch = rng.standard_normal((5, k * (k - 1)))
        labels = rng.integers(0, k, size=5)
        assert gradient_check(net, batch, labels) <= 1e-4


def test_training_reduces_loss_and_records_history(rng):
    inputs, labels = _blobs(rng, 3)
    net = init_fusion_net(3, seed=4)
    trained = fusion_train(net, inputs, labels, epochs=400, lr=0.05, monitor=(inputs[:10], labels[:10]))
    history = trained.history
    assert len(history.train_loss) == 400
    assert len(history.monitor_loss) == 400
    assert history.train_loss[0] == pytest.approx(fusion_loss(net, inputs, labels))
    assert history.train_loss[-1] < history.train_loss[0]
    assert np.mean(np.argmax(fusion_forward(trained, inputs), axis=1) == labels) > 0.7
    assert history_summary(history)["train_loss"] == history.train_loss[-1]
    # The input net is left untouched.
    assert np.array_equal(net.weights[0], init_fusion_net(3, seed=4).weights[0])


def test_training_rows_and_seeded_reinitialization(rng):
    inputs, labels = _blobs(rng, 2)
    net = init_fusion_net(2, seed=0, config=FusionConfig(hidden=(5, 3)))
    a = fusion_train(net, inputs, labels, epochs=5, seed=9)
    b = fusion_train(net, inputs, labels, epochs=5, seed=9)
    assert a.weights[0].shape == (2, 5)
    assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))
    rows = a.history.rows()
    assert len(rows) == 5
    assert rows[0][0] == 0 and rows[0][3] == ""
    assert history_summary(init_fusion_net(2, 0).history)["train_loss"] is None


def test_training_argument_errors(rng):
    net = init_fusion_net(2, seed=0)
    with pytest.raises(InputError):
        fusion_train(net, np.zeros((3, 2)), [0, 1, 2], epochs=1)
    with pytest.raises(InputError):
        fusion_train(net, np.zeros((3, 2)), [0, 1, 1], epochs=1, lr=0.0)
    with pytest.raises(InputError):
        fusion_train(net, np.zeros((3, 2)), [0, 1], epochs=1)


def test_separable_classes_are_fitted_exactly(rng):
    labels = np.repeat([0, 1], 30)
    signs = np.where(labels == 1, 1.0, -1.0)[:, None]
    inputs = signs + 0.2 * rng.standard_normal((labels.size, 2))
    net = fusion_train_restarts(2, inputs, labels, seed=0)
    assert len(net.history.train_loss) == 1000
    assert fusion_loss(net, inputs, labels) < 0.05
    assert np.all(np.argmax(fusion_forward(net, inputs), axis=1) == labels)


def test_restarts_keep_the_lowest_training_loss(rng):
    inputs, labels = _blobs(rng, 3)
    config = FusionConfig(epochs=50, restarts=4)
    kept = fusion_train_restarts(3, inputs, labels, seed=7, config=config)
    singles = [
        fusion_loss(fusion_train(init_fusion_net(3, 7 + r, config), inputs, labels, epochs=50), inputs, labels)
        for r in range(4)
    ]
    assert fusion_loss(kept, inputs, labels) == pytest.approx(min(singles))
    again = fusion_train_restarts(3, inputs, labels, seed=7, config=config)
    assert all(np.array_equal(a, b) for a, b in zip(kept.weights, again.weights))
