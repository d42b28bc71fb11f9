"""Batch forward pass over dense layers, with two dispatch modes.

Internally a batch travels transposed: features x samples on entry, then
units x samples after every layer, so each neuron produces one row spanning
the whole batch.

Dispatch modes:

* ``corrected`` applies every activation by its mathematical definition.
  Softmax is taken per sample across the units of the layer.
* ``paper_compat`` reproduces the published dispatcher faithfully, including
  its fall-throughs: a softmax layer actually applies tanh and a leaky_relu
  layer actually applies relu.  The two modes agree exactly on networks that
  use only sigmoid, relu and tanh.
"""

from dataclasses import dataclass
from typing import Sequence

from . import activations
from .activations import ACTIVATION_NAMES, ActivationKind
from .linalg import Matrix, ShapeError, Vector, transpose, zero_vector
from .network import DISPATCH_MODES, NetworkSpec

# Literal behavior of the published dispatcher's softmax and leaky_relu branches.
PAPER_COMPAT_SUBSTITUTIONS = {"softmax": "tanh", "leaky_relu": "relu"}


@dataclass(frozen=True)
class Batch:
    """Input batch: one row per sample, one column per feature."""

    features: Matrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Batch":
        return cls(Matrix.from_rows(rows))

    @property
    def size(self) -> int:
        return self.features.rows

    @property
    def input_dim(self) -> int:
        return self.features.cols


def effective_kind(kind: ActivationKind, mode: str) -> ActivationKind:
    """The activation actually applied under the given dispatch mode."""
    if mode not in DISPATCH_MODES:
        raise ValueError(f"unknown dispatch mode {mode!r}, expected one of {DISPATCH_MODES}")
    if mode == "paper_compat" and kind.kind in PAPER_COMPAT_SUBSTITUTIONS:
        return ActivationKind(PAPER_COMPAT_SUBSTITUTIONS[kind.kind], kind.alpha)
    return kind


def linear_response(x: Matrix, w: Vector, b: float) -> Vector:
    """Weighted sum plus bias for one neuron, one value per sample (column)."""
    if len(w) != x.rows:
        raise ShapeError(f"weight vector length {len(w)} != input rows {x.rows}")
    tmp = zero_vector(x.cols)
    for i in range(x.rows):
        wi = w[i]
        row = x.row(i)
        tmp = [t + wi * v for t, v in zip(tmp, row)]
    return [t + b for t in tmp]


def neuron(
    x: Matrix, w: Vector, b: float, kind: ActivationKind, mode: str = "corrected"
) -> Vector:
    """One neuron over a batch: activation(sum_i w_i * x[i][j] + b) per sample j."""
    eff = effective_kind(kind, mode)
    if eff.kind not in ACTIVATION_NAMES:  # unreachable via ActivationKind
        raise ValueError(f"unknown activation function {eff.kind!r}")
    z = linear_response(x, w, b)
    if eff.kind == "softmax":
        # per-sample scope: a lone neuron is a unit group of one
        return [activations.softmax([v])[0] for v in z]
    return activations.apply(eff, z)


def dense(
    nunit: int,
    x: Matrix,
    weights: Matrix,
    biases: Sequence[float],
    kind: ActivationKind,
    mode: str = "corrected",
) -> Matrix:
    """A dense layer over a batch; neuron i uses column i of `weights`.

    Result is nunit x samples.  Under corrected dispatch a softmax layer is
    normalized per sample across its units; everything else is row i equals
    ``neuron(x, weights.col(i), biases[i], kind, mode)``.
    """
    if weights.cols != nunit:
        raise ShapeError(f"weight columns {weights.cols} != unit count {nunit}")
    if len(biases) != nunit:
        raise ShapeError(f"bias length {len(biases)} != unit count {nunit}")
    if weights.rows != x.rows:
        raise ShapeError(f"weight rows {weights.rows} != input rows {x.rows}")
    eff = effective_kind(kind, mode)
    if eff.kind == "softmax":
        pre = [linear_response(x, weights.col(i), biases[i]) for i in range(nunit)]
        per_sample = [
            activations.softmax([pre[u][j] for u in range(nunit)])
            for j in range(x.cols)
        ]
        rows = [[per_sample[j][u] for j in range(x.cols)] for u in range(nunit)]
        return Matrix.from_rows(rows)
    rows = [neuron(x, weights.col(i), biases[i], eff) for i in range(nunit)]
    return Matrix.from_rows(rows)


def forward(spec: NetworkSpec, batch: Batch) -> Matrix:
    """Run the whole network; result is final-layer units x samples."""
    if batch.input_dim != spec.input_dim:
        raise ShapeError(
            f"batch has {batch.input_dim} features, model {spec.name!r} "
            f"expects {spec.input_dim}"
        )
    x = transpose(batch.features)
    for layer in spec.layers:
        x = dense(layer.units, x, layer.weights, layer.biases,
                  layer.activation, spec.dispatch_mode)
    return x


def predict(spec: NetworkSpec, batch: Batch) -> list[int]:
    """Binary labels from a single-output network: 1 where output >= threshold."""
    if spec.layers[-1].units != 1:
        raise ValueError(
            f"predict needs a single-output network, final layer has "
            f"{spec.layers[-1].units} units"
        )
    outputs = forward(spec, batch).row(0)
    return [1 if p >= spec.threshold else 0 for p in outputs]
