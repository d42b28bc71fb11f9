"""Embedded invariant suite behind ``tinydense selftest``.

Everything here runs from fixed seeds, needs no third-party packages, and
finishes in well under a second, so it is safe to run on CI or after an
install to confirm the engine computes what it should.
"""

import math
import random

from . import activations, network
from .inference import Batch, forward
from .linalg import Matrix

_IDENTITY_TOL = 1e-12
_ORACLE_TOL = 1e-9

# Fixed-input regression probes: any corruption of the built-in constants
# shifts these outputs far beyond the tolerance.
_PROBE_SAMPLE = [5.0, 3.0, 4.0, 1.0]
_PROBES = {
    "iris-6": 0.892824829335587,
    "iris-8": 0.635761211375383,
}

_BUILTIN_WIDTHS = {"iris-8": [4, 2, 3, 2, 1], "iris-6": [4, 3, 2, 1]}
_BUILTIN_CORNERS = {
    # (layer, row, col) of first weight, value; last bias value
    "iris-8": (-0.75323504, -1.2177287),
    "iris-6": (0.50914556, 0.4316521),
}


def _check_activation_identities() -> str | None:
    rng = random.Random(20240917)
    for _ in range(2000):
        v = rng.uniform(-500.0, 500.0)
        s = activations.sigmoid([v])[0] + activations.sigmoid([-v])[0]
        if abs(s - 1.0) > _IDENTITY_TOL:
            return f"sigmoid symmetry off by {abs(s - 1.0):.3e} at x={v!r}"
        t = activations.tanh([v])[0]
        ts = 2.0 * activations.sigmoid([2.0 * v])[0] - 1.0
        if abs(t - ts) > _IDENTITY_TOL:
            return f"tanh/sigmoid identity off by {abs(t - ts):.3e} at x={v!r}"
    for _ in range(500):
        vec = [rng.uniform(-500.0, 500.0) for _ in range(5)]
        total = sum(activations.softmax(vec))
        if abs(total - 1.0) > _IDENTITY_TOL:
            return f"softmax sum off by {abs(total - 1.0):.3e}"
        shift = rng.uniform(-100.0, 100.0)
        shifted = activations.softmax([v + shift for v in vec])
        base = activations.softmax(vec)
        worst = max(abs(a - b) for a, b in zip(base, shifted))
        if worst > _IDENTITY_TOL:
            return f"softmax shift invariance off by {worst:.3e}"
        if activations.leaky_relu(vec, 0.0) != activations.relu(vec):
            return "leaky_relu with alpha=0 differs from relu"
    return None


def _random_spec(rng: random.Random, index: int) -> network.NetworkSpec:
    input_dim = rng.randint(1, 5)
    n_layers = rng.randint(1, 3)
    layers = []
    width = input_dim
    for _ in range(n_layers):
        units = rng.randint(1, 5)
        weights = Matrix.from_rows(
            [[rng.uniform(-3.0, 3.0) for _ in range(units)] for _ in range(width)]
        )
        biases = tuple(rng.uniform(-3.0, 3.0) for _ in range(units))
        kind = rng.choice(activations.ACTIVATION_NAMES)
        layers.append(
            network.LayerSpec(units, weights, biases, activations.ActivationKind(kind))
        )
        width = units
    mode = rng.choice(network.DISPATCH_MODES)
    return network.NetworkSpec(f"selftest-{index}", input_dim, tuple(layers),
                               dispatch_mode=mode)


def _naive_forward_sample(spec: network.NetworkSpec, sample: list[float]) -> list[float]:
    """Independent per-sample forward pass used as the oracle."""
    values = list(sample)
    for layer in spec.layers:
        pre = []
        for u in range(layer.units):
            acc = layer.biases[u]
            for i, v in enumerate(values):
                acc += layer.weights.at(i, u) * v
            pre.append(acc)
        kind = layer.activation.kind
        alpha = layer.activation.alpha
        if spec.dispatch_mode == "paper_compat":
            kind = {"softmax": "tanh", "leaky_relu": "relu"}.get(kind, kind)
        if kind == "softmax":
            m = max(pre)
            exps = [math.exp(v - m) for v in pre]
            values = [e / sum(exps) for e in exps]
        elif kind == "sigmoid":
            values = [1.0 / (1.0 + math.exp(-v)) if v >= 0
                      else math.exp(v) / (1.0 + math.exp(v)) for v in pre]
        elif kind == "tanh":
            values = [math.tanh(v) for v in pre]
        elif kind == "relu":
            values = [v if v >= 0 else 0.0 for v in pre]
        else:
            values = [v if v >= 0 else alpha * v for v in pre]
    return values


def _check_forward_oracle() -> str | None:
    rng = random.Random(987654321)
    for index in range(20):
        spec = _random_spec(rng, index)
        samples = [
            [rng.uniform(-2.0, 2.0) for _ in range(spec.input_dim)] for _ in range(4)
        ]
        engine = forward(spec, Batch.from_rows(samples))
        for j, sample in enumerate(samples):
            expected = _naive_forward_sample(spec, sample)
            got = engine.col(j)
            worst = max(abs(a - b) for a, b in zip(expected, got))
            if worst > _ORACLE_TOL:
                return (
                    f"net {index} sample {j}: engine differs from naive "
                    f"oracle by {worst:.3e}"
                )
    return None


def _check_builtins() -> str | None:
    for name, widths in _BUILTIN_WIDTHS.items():
        spec = network.builtin(name)
        report = network.validate(spec)
        if not report.ok:
            return f"{name} failed validation: {report}"
        if spec.widths() != widths:
            return f"{name} widths {spec.widths()} != expected {widths}"
        first, last = _BUILTIN_CORNERS[name]
        if spec.layers[0].weights.at(0, 0) != first:
            return f"{name} first weight {spec.layers[0].weights.at(0, 0)!r} != {first!r}"
        if spec.layers[-1].biases[-1] != last:
            return f"{name} final bias {spec.layers[-1].biases[-1]!r} != {last!r}"
        probe = forward(spec, Batch.from_rows([_PROBE_SAMPLE])).at(0, 0)
        if abs(probe - _PROBES[name]) > _ORACLE_TOL:
            return (
                f"{name} probe output {probe!r} differs from frozen "
                f"{_PROBES[name]!r} by {abs(probe - _PROBES[name]):.3e}"
            )
    return None


def run_selftest() -> list[tuple[str, str | None]]:
    """Run every invariant; returns (check name, failure detail or None) pairs."""
    checks = [
        ("activation identities", _check_activation_identities),
        ("forward pass vs naive oracle", _check_forward_oracle),
        ("built-in model fidelity", _check_builtins),
    ]
    return [(name, fn()) for name, fn in checks]
