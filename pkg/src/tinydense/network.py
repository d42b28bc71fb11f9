"""Model representation, validation, serialization and the built-in networks.

A network is an ordered chain of dense layers.  Weight matrices are stored in
the published orientation: one row per input feature, one column per neuron,
so ``weights.col(i)`` is neuron i's weight vector.  Models serialize to a
strict JSON document (see :func:`save`); numbers round-trip bit-exactly.
"""

import json
from dataclasses import dataclass

from .activations import ACTIVATION_NAMES, DEFAULT_LEAKY_ALPHA, ActivationKind
from .linalg import Matrix

DISPATCH_MODES = ("corrected", "paper_compat")
BUILTIN_NAMES = ("iris-8", "iris-6")

_TOP_KEYS_REQUIRED = ("name", "input_dim", "layers")
_TOP_KEYS_OPTIONAL = ("threshold", "dispatch_mode")
_LAYER_KEYS_REQUIRED = ("units", "activation", "weights", "biases")
_LAYER_KEYS_OPTIONAL = ("alpha",)


class ModelFormatError(ValueError):
    """Unparseable or invalid model document."""


@dataclass(frozen=True)
class LayerSpec:
    """One dense layer: `units` neurons, fully connected to the layer below."""

    units: int
    weights: Matrix
    biases: tuple[float, ...]
    activation: ActivationKind

    def __post_init__(self):
        object.__setattr__(self, "biases", tuple(float(b) for b in self.biases))


@dataclass(frozen=True)
class NetworkSpec:
    """A whole model: layer chain plus decision threshold and dispatch mode."""

    name: str
    input_dim: int
    layers: tuple[LayerSpec, ...]
    threshold: float = 0.5
    dispatch_mode: str = "corrected"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.dispatch_mode not in DISPATCH_MODES:
            raise ValueError(
                f"unknown dispatch mode {self.dispatch_mode!r}, "
                f"expected one of {DISPATCH_MODES}"
            )
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")

    def widths(self) -> list[int]:
        """Layer widths including the input: e.g. [4, 2, 3, 2, 1]."""
        return [self.input_dim] + [layer.units for layer in self.layers]


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.problems)


def validate(spec: NetworkSpec) -> ValidationReport:
    """Check shape consistency across the layer chain; report, never raise."""
    problems = []
    if spec.input_dim < 1:
        problems.append(f"input_dim must be positive, got {spec.input_dim}")
    if not spec.layers:
        problems.append("network has no layers")
    expected_in = spec.input_dim
    for i, layer in enumerate(spec.layers):
        if layer.units < 1:
            problems.append(f"layer {i}: units must be positive, got {layer.units}")
        if layer.weights.cols != layer.units:
            problems.append(
                f"layer {i}: weight columns {layer.weights.cols} != units {layer.units}"
            )
        if len(layer.biases) != layer.units:
            problems.append(
                f"layer {i}: bias length {len(layer.biases)} != units {layer.units}"
            )
        if layer.weights.rows != expected_in:
            problems.append(
                f"layer {i}: weight rows {layer.weights.rows} != "
                f"expected input width {expected_in}"
            )
        expected_in = layer.units
    return ValidationReport(tuple(problems))


# Published parameters of the two pre-trained Iris classifiers, kept at the
# exact printed precision.  Weight layout: input rows x neuron columns.

_IRIS8_LAYERS = (
    (
        2,
        "relu",
        [[-0.75323504, -0.25906014],
         [-0.46379513, -0.5019245],
         [2.1273055, 1.7724446],
         [1.1853403, 0.88468695]],
        [0.53405946, 0.32578036],
    ),
    (
        3,
        "tanh",
        [[-1.6785783, 2.0158117, 1.2769054],
         [-1.4055765, 0.6828738, 1.5902631]],
        [1.18362, -1.1555661, -1.0966455],
    ),
    (
        2,
        "softmax",
        [[0.729278, -1.0240695],
         [-0.80972326, 1.4383037],
         [-0.90892404, 1.6760625]],
        [0.10695826, 0.01635581],
    ),
    (
        1,
        "sigmoid",
        [[-0.2019448],
         [1.5772797]],
        [-1.2177287],
    ),
)

_IRIS6_LAYERS = (
    (
        3,
        "relu",
        [[0.50914556, -0.18116623, -0.04498423],
         [0.33949652, -0.42303845, -0.37400272],
         [-1.4968083, 1.2034143, 0.95544535],
         [-1.344156, 0.39220142, 1.2244085]],
        [0.83684736, 0.5311056, 0.7652087],
    ),
    (
        2,
        "sigmoid",
        [[-2.1645586, 1.3892978],
         [0.43439832, -1.8758974],
         [0.92036045, -1.5745732]],
        [0.9615521, 0.4445824],
    ),
    (
        1,
        "sigmoid",
        [[1.6905344],
         [-2.6346245]],
        [0.4316521],
    ),
)

_BUILTINS = {"iris-8": _IRIS8_LAYERS, "iris-6": _IRIS6_LAYERS}


def builtin(name: str) -> NetworkSpec:
    """Return one of the two pre-trained Iris classifiers by name.

    Built-ins default to paper_compat dispatch so they reproduce the published
    accuracy figures; switch to corrected mode for true softmax semantics.
    """
    if name not in _BUILTINS:
        raise ModelFormatError(
            f"unknown built-in model {name!r}, expected one of {BUILTIN_NAMES}"
        )
    layers = tuple(
        LayerSpec(
            units=units,
            weights=Matrix.from_rows(weights),
            biases=tuple(biases),
            activation=ActivationKind(kind),
        )
        for units, kind, weights, biases in _BUILTINS[name]
    )
    return NetworkSpec(
        name=name,
        input_dim=4,
        layers=layers,
        threshold=0.5,
        dispatch_mode="paper_compat",
    )


def save(spec: NetworkSpec) -> str:
    """Serialize to the canonical model document (UTF-8 JSON, LF, trailing newline).

    Floats are written in shortest round-trip form, so load(save(s)) restores
    bit-identical parameters and save is a fixed point on its own output.
    """
    layers = []
    for layer in spec.layers:
        entry: dict = {
            "units": layer.units,
            "activation": layer.activation.kind,
        }
        if layer.activation.kind == "leaky_relu" or layer.activation.alpha != DEFAULT_LEAKY_ALPHA:
            entry["alpha"] = layer.activation.alpha
        entry["weights"] = layer.weights.to_rows()
        entry["biases"] = list(layer.biases)
        layers.append(entry)
    doc = {
        "name": spec.name,
        "input_dim": spec.input_dim,
        "threshold": spec.threshold,
        "dispatch_mode": spec.dispatch_mode,
        "layers": layers,
    }
    return json.dumps(doc, indent=2) + "\n"


def load(text: str) -> NetworkSpec:
    """Parse and validate a model document; strict about unknown fields."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as err:
        raise ModelFormatError(
            f"model document is not valid JSON: {err.msg} "
            f"(line {err.lineno} column {err.colno})"
        ) from err
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")

    unknown = sorted(set(doc) - set(_TOP_KEYS_REQUIRED) - set(_TOP_KEYS_OPTIONAL))
    if unknown:
        raise ModelFormatError(f"unknown top-level fields: {', '.join(unknown)}")
    missing = [k for k in _TOP_KEYS_REQUIRED if k not in doc]
    if missing:
        raise ModelFormatError(f"missing required fields: {', '.join(missing)}")

    name = doc["name"]
    if not isinstance(name, str):
        raise ModelFormatError("name must be a string")
    input_dim = _require_int(doc["input_dim"], "input_dim")
    threshold = _require_number(doc.get("threshold", 0.5), "threshold")
    if not 0.0 <= threshold <= 1.0:
        raise ModelFormatError(f"threshold must be in [0, 1], got {threshold}")
    dispatch_mode = doc.get("dispatch_mode", "corrected")
    if dispatch_mode not in DISPATCH_MODES:
        raise ModelFormatError(
            f"unknown dispatch_mode {dispatch_mode!r}, expected one of {DISPATCH_MODES}"
        )
    if not isinstance(doc["layers"], list) or not doc["layers"]:
        raise ModelFormatError("layers must be a non-empty array")

    layers = []
    for i, entry in enumerate(doc["layers"]):
        layers.append(_parse_layer(entry, i))

    spec = NetworkSpec(
        name=name,
        input_dim=input_dim,
        layers=tuple(layers),
        threshold=threshold,
        dispatch_mode=dispatch_mode,
    )
    report = validate(spec)
    if not report.ok:
        raise ModelFormatError(f"model failed validation: {report}")
    return spec


def _parse_layer(entry, index: int) -> LayerSpec:
    where = f"layer {index}"
    if not isinstance(entry, dict):
        raise ModelFormatError(f"{where}: must be a JSON object")
    unknown = sorted(set(entry) - set(_LAYER_KEYS_REQUIRED) - set(_LAYER_KEYS_OPTIONAL))
    if unknown:
        raise ModelFormatError(f"{where}: unknown fields: {', '.join(unknown)}")
    missing = [k for k in _LAYER_KEYS_REQUIRED if k not in entry]
    if missing:
        raise ModelFormatError(f"{where}: missing fields: {', '.join(missing)}")

    kind = entry["activation"]
    if kind not in ACTIVATION_NAMES:
        raise ModelFormatError(
            f"{where}: unknown activation {kind!r}, expected one of {ACTIVATION_NAMES}"
        )
    alpha = _require_number(entry.get("alpha", DEFAULT_LEAKY_ALPHA), f"{where}: alpha")
    if not alpha >= 0:
        raise ModelFormatError(f"{where}: alpha must be >= 0, got {alpha}")

    weights = entry["weights"]
    if (
        not isinstance(weights, list)
        or not weights
        or not all(isinstance(row, list) for row in weights)
    ):
        raise ModelFormatError(f"{where}: weights must be a non-empty array of rows")
    ncols = len(weights[0])
    rows = []
    for r, row in enumerate(weights):
        if len(row) != ncols:
            raise ModelFormatError(
                f"{where}: weight row {r} has {len(row)} values, expected {ncols}"
            )
        rows.append([_require_number(v, f"{where}: weights[{r}]") for v in row])
    if ncols < 1:
        raise ModelFormatError(f"{where}: weight rows must not be empty")

    biases = entry["biases"]
    if not isinstance(biases, list) or not biases:
        raise ModelFormatError(f"{where}: biases must be a non-empty array")

    return LayerSpec(
        units=_require_int(entry["units"], f"{where}: units"),
        weights=Matrix.from_rows(rows),
        biases=tuple(_require_number(v, f"{where}: biases") for v in biases),
        activation=ActivationKind(kind, alpha),
    )


def _reject_constant(token: str) -> float:
    raise ModelFormatError(f"non-finite number {token!r} is not allowed")


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _require_number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFormatError(f"{what} must be a number, got {value!r}")
    return float(value)
