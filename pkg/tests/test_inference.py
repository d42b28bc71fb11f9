import dataclasses

import numpy as np
import pytest

from tinydense.activations import ActivationKind
from tinydense.inference import Batch, dense, effective_kind, forward, neuron, predict
from tinydense.linalg import Matrix, ShapeError
from tinydense.network import LayerSpec, NetworkSpec, builtin


def np_forward(spec, rows):
    """Independent oracle: numpy matmul plus vectorized activations."""
    h = np.asarray(rows, dtype=np.float64)
    for layer in spec.layers:
        w = np.asarray(layer.weights.to_rows())
        b = np.asarray(layer.biases)
        z = h @ w + b
        kind = layer.activation.kind
        if spec.dispatch_mode == "paper_compat":
            kind = {"softmax": "tanh", "leaky_relu": "relu"}.get(kind, kind)
        if kind == "relu":
            h = np.maximum(z, 0.0)
        elif kind == "sigmoid":
            h = 1.0 / (1.0 + np.exp(-z))
        elif kind == "tanh":
            h = np.tanh(z)
        elif kind == "leaky_relu":
            h = np.where(z >= 0, z, layer.activation.alpha * z)
        else:  # softmax per sample across units
            e = np.exp(z - z.max(axis=1, keepdims=True))
            h = e / e.sum(axis=1, keepdims=True)
    return h.T  # units x samples, matching the engine's layout


def random_spec(rng, index=0, max_units=5):
    input_dim = int(rng.integers(1, max_units + 1))
    width = input_dim
    layers = []
    for _ in range(int(rng.integers(1, 4))):
        units = int(rng.integers(1, max_units + 1))
        weights = Matrix.from_rows(rng.uniform(-3, 3, size=(width, units)).tolist())
        biases = tuple(float(b) for b in rng.uniform(-3, 3, size=units))
        kind = str(rng.choice(["sigmoid", "relu", "leaky_relu", "tanh", "softmax"]))
        layers.append(LayerSpec(units, weights, biases, ActivationKind(kind)))
        width = units
    return NetworkSpec(f"oracle-{index}", input_dim, tuple(layers))


class TestNeuron:
    def test_hand_matrix_arithmetic(self):
        x = Matrix.from_rows([[1, -2], [0, 3]])  # 2 features x 2 samples
        out = neuron(x, [1.0, 1.0], 0.0, ActivationKind("relu"))
        assert out == [1.0, 1.0]

    def test_zero_weights_sigmoid(self):
        x = Matrix.from_rows([[3.7, -2.1, 0.4], [9.9, 0.0, -8.8]])
        out = neuron(x, [0.0, 0.0], 0.0, ActivationKind("sigmoid"))
        assert out == [0.5, 0.5, 0.5]

    def test_paper_compat_softmax_is_tanh(self):
        x = Matrix.from_rows([[0.3, -1.2], [2.0, 0.7]])
        w, b = [0.5, -0.25], 0.1
        compat = neuron(x, w, b, ActivationKind("softmax"), mode="paper_compat")
        as_tanh = neuron(x, w, b, ActivationKind("tanh"), mode="corrected")
        assert compat == as_tanh

    def test_paper_compat_leaky_is_relu(self):
        x = Matrix.from_rows([[-5.0, 5.0]])
        compat = neuron(x, [1.0], 0.0, ActivationKind("leaky_relu"), mode="paper_compat")
        assert compat == neuron(x, [1.0], 0.0, ActivationKind("relu"))

    def test_length_mismatch(self):
        x = Matrix.from_rows([[1.0], [2.0]])
        with pytest.raises(ShapeError):
            neuron(x, [1.0], 0.0, ActivationKind("relu"))

    def test_unknown_mode(self):
        x = Matrix.from_rows([[1.0]])
        with pytest.raises(ValueError):
            neuron(x, [1.0], 0.0, ActivationKind("relu"), mode="fast")


class TestDense:
    def test_identity_weights_on_nonnegative_input(self):
        x = Matrix.from_rows([[1, 0], [0, 1]])
        weights = Matrix.from_rows([[1, 0], [0, 1]])
        out = dense(2, x, weights, [0.0, 0.0], ActivationKind("relu"))
        assert out.to_rows() == [[1.0, 0.0], [0.0, 1.0]]

    def test_hand_sigmoid_single_unit(self):
        x = Matrix.from_rows([[2.0], [3.0]])
        weights = Matrix.from_rows([[0.5], [0.5]])
        out = dense(1, x, weights, [-2.5], ActivationKind("sigmoid"))
        assert out.to_rows() == [[0.5]]

    def test_first_builtin_layer_matches_matmul_oracle(self):
        spec = builtin("iris-8")
        rng = np.random.default_rng(21)
        rows = rng.uniform(0, 8, size=(6, 4))
        layer = spec.layers[0]
        x = Matrix.from_rows(rows.T.tolist())
        out = dense(layer.units, x, layer.weights, layer.biases, layer.activation)
        expected = np.maximum(rows @ np.asarray(layer.weights.to_rows())
                              + np.asarray(layer.biases), 0.0).T
        np.testing.assert_allclose(out.to_rows(), expected, atol=1e-12)

    def test_shape_mismatches_named(self):
        x = Matrix.from_rows([[1.0, 2.0]])
        weights = Matrix.from_rows([[1.0, 2.0]])
        with pytest.raises(ShapeError, match="unit count"):
            dense(3, x, weights, [0.0, 0.0, 0.0], ActivationKind("relu"))
        with pytest.raises(ShapeError, match="bias length"):
            dense(2, x, weights, [0.0], ActivationKind("relu"))
        bad = Matrix.from_rows([[1.0, 2.0], [3.0, 4.0]])
        with pytest.raises(ShapeError, match="input rows"):
            dense(2, x, bad, [0.0, 0.0], ActivationKind("relu"))

    def test_corrected_softmax_normalizes_each_sample(self):
        x = Matrix.from_rows([[1.0, -2.0, 0.5]])
        weights = Matrix.from_rows([[1.0, 2.0, -0.5]])
        out = dense(3, x, weights, [0.1, -0.2, 0.3], ActivationKind("softmax"))
        cols = [out.col(j) for j in range(out.cols)]
        for col in cols:
            assert sum(col) == pytest.approx(1.0, abs=1e-12)
            assert all(0 < p <= 1 for p in col)


class TestForward:
    def test_iris6_single_sample_matches_unrolled_oracle(self):
        spec = builtin("iris-6")
        sample = [5.0, 3.0, 4.0, 1.0]
        got = forward(spec, Batch.from_rows([sample])).at(0, 0)
        expected = np_forward(spec, [sample])[0, 0]
        assert got == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch_rejected(self):
        spec = builtin("iris-8")
        with pytest.raises(ShapeError, match="features"):
            forward(spec, Batch.from_rows([[1.0, 2.0, 3.0]]))

    def test_identical_rows_identical_outputs(self):
        spec = builtin("iris-6")
        batch = Batch.from_rows([[6.1, 2.8, 4.7, 1.2]] * 5)
        out = forward(spec, batch)
        assert (out.rows, out.cols) == (1, 5)
        assert len(set(out.row(0))) == 1

    def test_output_shape_and_range_for_builtins(self):
        rng = np.random.default_rng(22)
        rows = rng.uniform(0, 8, size=(10, 4)).tolist()
        for name in ("iris-8", "iris-6"):
            out = forward(builtin(name), Batch.from_rows(rows))
            assert (out.rows, out.cols) == (1, 10)
            assert all(0.0 < p < 1.0 for p in out.row(0))

    def test_per_sample_independence(self):
        rng = np.random.default_rng(23)
        spec = random_spec(rng)
        rows = rng.uniform(-2, 2, size=(8, spec.input_dim)).tolist()
        whole = forward(spec, Batch.from_rows(rows))
        for j, row in enumerate(rows):
            single = forward(spec, Batch.from_rows([row]))
            np.testing.assert_allclose(single.col(0), whole.col(j), atol=1e-12)

    def test_oracle_equivalence_on_random_networks(self):
        rng = np.random.default_rng(24)
        for i in range(60):
            spec = random_spec(rng, i)
            rows = rng.uniform(-3, 3, size=(4, spec.input_dim)).tolist()
            engine = forward(spec, Batch.from_rows(rows))
            expected = np_forward(spec, rows)
            np.testing.assert_allclose(engine.to_rows(), expected, atol=1e-9)

    def test_mode_equivalence_without_softmax_or_leaky(self):
        rng = np.random.default_rng(25)
        for i in range(20):
            spec = random_spec(rng, i)
            safe_layers = tuple(
                dataclasses.replace(
                    l,
                    activation=ActivationKind(
                        {"softmax": "tanh", "leaky_relu": "sigmoid"}.get(
                            l.activation.kind, l.activation.kind
                        )
                    ),
                )
                for l in spec.layers
            )
            spec = dataclasses.replace(spec, layers=safe_layers)
            rows = rng.uniform(-3, 3, size=(3, spec.input_dim)).tolist()
            compat = forward(dataclasses.replace(spec, dispatch_mode="paper_compat"),
                             Batch.from_rows(rows))
            corrected = forward(dataclasses.replace(spec, dispatch_mode="corrected"),
                                Batch.from_rows(rows))
            assert compat == corrected

    def test_paper_compat_equals_substituted_corrected_exactly(self):
        rng = np.random.default_rng(26)
        for i in range(20):
            spec = random_spec(rng, i)
            rows = rng.uniform(-3, 3, size=(3, spec.input_dim)).tolist()
            compat = forward(dataclasses.replace(spec, dispatch_mode="paper_compat"),
                             Batch.from_rows(rows))
            substituted_layers = tuple(
                dataclasses.replace(
                    l,
                    activation=ActivationKind(
                        {"softmax": "tanh", "leaky_relu": "relu"}.get(
                            l.activation.kind, l.activation.kind
                        ),
                        l.activation.alpha,
                    ),
                )
                for l in spec.layers
            )
            corrected = forward(
                dataclasses.replace(spec, layers=substituted_layers,
                                    dispatch_mode="corrected"),
                Batch.from_rows(rows),
            )
            assert compat == corrected


class TestPredict:
    def test_threshold_rule(self):
        spec = NetworkSpec(
            "passthrough", 1,
            (LayerSpec(1, Matrix.from_rows([[1.0]]), (0.0,), ActivationKind("sigmoid")),),
        )
        # sigmoid(2.2) ~ 0.900, sigmoid(-2.2) ~ 0.100
        labels = predict(spec, Batch.from_rows([[2.2], [-2.2]]))
        assert labels == [1, 0]

    def test_boundary_is_positive(self):
        spec = NetworkSpec(
            "boundary", 1,
            (LayerSpec(1, Matrix.from_rows([[1.0]]), (0.0,), ActivationKind("sigmoid")),),
        )
        assert predict(spec, Batch.from_rows([[0.0]])) == [1]  # exactly 0.5 >= 0.5

    def test_multi_unit_final_layer_rejected(self):
        spec = NetworkSpec(
            "wide", 1,
            (LayerSpec(2, Matrix.from_rows([[1.0, 1.0]]), (0.0, 0.0),
                       ActivationKind("sigmoid")),),
        )
        with pytest.raises(ValueError, match="single-output"):
            predict(spec, Batch.from_rows([[1.0]]))

    def test_custom_threshold(self):
        spec = NetworkSpec(
            "strict", 1,
            (LayerSpec(1, Matrix.from_rows([[1.0]]), (0.0,), ActivationKind("sigmoid")),),
            threshold=0.9,
        )
        labels = predict(spec, Batch.from_rows([[2.0], [3.0]]))
        # sigmoid(2) ~ 0.881 < 0.9 <= sigmoid(3) ~ 0.953
        assert labels == [0, 1]


class TestEffectiveKind:
    def test_corrected_is_identity(self):
        for name in ("sigmoid", "relu", "leaky_relu", "tanh", "softmax"):
            kind = ActivationKind(name)
            assert effective_kind(kind, "corrected") == kind

    def test_paper_compat_substitutions(self):
        assert effective_kind(ActivationKind("softmax"), "paper_compat").kind == "tanh"
        assert effective_kind(ActivationKind("leaky_relu"), "paper_compat").kind == "relu"
        assert effective_kind(ActivationKind("sigmoid"), "paper_compat").kind == "sigmoid"
