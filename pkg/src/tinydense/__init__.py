"""tinydense: a tiny dense-network inference engine and MicroPython deployment toolchain.

Pure-stdlib forward pass for small fully connected networks, two bundled
pre-trained Iris classifiers, strict JSON model serialization, evaluation
metrics, and a deterministic emitter that turns any model into a
self-contained MicroPython program.
"""

from .activations import ACTIVATION_NAMES, ActivationKind
from .codegen import emit_micropython, emit_model_card
from .evaluation import (
    ConfusionMatrix,
    DatasetFormatError,
    EvaluationReport,
    LabeledDataset,
    bundled_dataset,
    confusion,
    evaluate,
    load_csv,
    load_features_csv,
    scale_features,
)
from .inference import Batch, dense, forward, neuron, predict
from .linalg import (
    Matrix,
    ShapeError,
    Vector,
    add_vectors,
    format_matrix,
    transpose,
    zero_vector,
    zeros,
)
from .network import (
    BUILTIN_NAMES,
    DISPATCH_MODES,
    LayerSpec,
    ModelFormatError,
    NetworkSpec,
    ValidationReport,
    builtin,
    load,
    save,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVATION_NAMES",
    "ActivationKind",
    "BUILTIN_NAMES",
    "Batch",
    "ConfusionMatrix",
    "DISPATCH_MODES",
    "DatasetFormatError",
    "EvaluationReport",
    "LabeledDataset",
    "LayerSpec",
    "Matrix",
    "ModelFormatError",
    "NetworkSpec",
    "ShapeError",
    "ValidationReport",
    "Vector",
    "add_vectors",
    "builtin",
    "bundled_dataset",
    "confusion",
    "dense",
    "emit_micropython",
    "emit_model_card",
    "evaluate",
    "format_matrix",
    "forward",
    "load",
    "load_csv",
    "load_features_csv",
    "neuron",
    "predict",
    "save",
    "scale_features",
    "transpose",
    "validate",
    "zero_vector",
    "zeros",
    "__version__",
]
