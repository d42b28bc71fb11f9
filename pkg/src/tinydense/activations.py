"""The five activation functions, as numerically stable element-wise maps.

All functions take and return plain lists of floats.  Formulations are chosen
so that no input in the representable range overflows: sigmoid is evaluated
sign-split, softmax subtracts the running maximum before exponentiating.
"""

import math
from dataclasses import dataclass

from .linalg import Vector

ACTIVATION_NAMES = ("sigmoid", "relu", "leaky_relu", "tanh", "softmax")
DEFAULT_LEAKY_ALPHA = 0.01


@dataclass(frozen=True)
class ActivationKind:
    """A named activation; `alpha` is the negative-region slope of leaky_relu."""

    kind: str
    alpha: float = DEFAULT_LEAKY_ALPHA

    def __post_init__(self):
        if self.kind not in ACTIVATION_NAMES:
            raise ValueError(
                f"unknown activation {self.kind!r}, expected one of {ACTIVATION_NAMES}"
            )
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


def sigmoid(x: Vector) -> Vector:
    """1 / (1 + e^-v), stable for arbitrarily large |v|."""
    out = []
    for v in x:
        if v >= 0:
            out.append(1.0 / (1.0 + math.exp(-v)))
        else:
            e = math.exp(v)
            out.append(e / (1.0 + e))
    return out


def relu(x: Vector) -> Vector:
    """v if v >= 0 else 0."""
    return [v if v >= 0 else 0.0 for v in x]


def leaky_relu(x: Vector, alpha: float = DEFAULT_LEAKY_ALPHA) -> Vector:
    """v if v >= 0 else alpha * v."""
    if not alpha >= 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return [v if v >= 0 else alpha * v for v in x]


def tanh(x: Vector) -> Vector:
    """Hyperbolic tangent, saturating to +/-1 without overflow."""
    return [math.tanh(v) for v in x]


def softmax(x: Vector) -> Vector:
    """e^(v - max) / sum over the whole vector; outputs sum to 1."""
    if not x:
        raise ValueError("softmax needs at least one value")
    m = max(x)
    exps = [math.exp(v - m) for v in x]
    total = sum(exps)
    return [e / total for e in exps]


def apply(kind: ActivationKind, x: Vector) -> Vector:
    """Apply the named function to a vector (corrected semantics)."""
    if kind.kind == "leaky_relu":
        return leaky_relu(x, kind.alpha)
    return _SIMPLE[kind.kind](x)


_SIMPLE = {
    "sigmoid": sigmoid,
    "relu": relu,
    "tanh": tanh,
    "softmax": softmax,
}
