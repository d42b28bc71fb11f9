"""Emit self-contained MicroPython programs and model cards.

The emitted file needs nothing beyond the interpreter's ``math`` module.  It
contains, in fixed order: the math basics (zero_dim, add_dim, zeros,
transpose, print_matrix), the activation functions, the neuron and dense
layer, the model's weight and bias literals in the published row layout, a
``forward``/``predict`` pipeline, and optionally an embedded demo batch with
a confusion-matrix block.

By default the activations and the dispatcher are the corrected versions.
With ``compat=True`` the file reproduces the historical source instead, with
its dispatch fall-throughs (softmax runs tanh, leaky_relu runs relu) and its
defective softmax body, kept verbatim for archival fidelity.

Emission is a pure function of its arguments: identical inputs give
byte-identical text, and every float literal round-trips to the exact
binary64 value of the spec.
"""

from typing import Sequence

from .linalg import Matrix
from .network import NetworkSpec, validate

_MATH_BASICS = '''\
def zero_dim(x):
    z = [0 for i in range(len(x))]
    return z


def add_dim(x, y):
    z = [x[i] + y[i] for i in range(len(x))]
    return z


def zeros(rows, cols):
    M = []
    while len(M) < rows:
        M.append([])
        while len(M[-1]) < cols:
            M[-1].append(0.0)
    return M


def transpose(M):
    if not isinstance(M[0], list):
        M = [M]
    rows = len(M)
    cols = len(M[0])
    MT = zeros(cols, rows)
    for i in range(rows):
        for j in range(cols):
            MT[j][i] = M[i][j]
    return MT


def print_matrix(M, decimals=3):
    for row in M:
        print([round(x, decimals) + 0 for x in row])
'''

_ACTIVATIONS_CORRECTED = '''\
def sigmoid(x):
    z = []
    for v in x:
        if v >= 0:
            z.append(1.0 / (1.0 + math.exp(-v)))
        else:
            e = math.exp(v)
            z.append(e / (1.0 + e))
    return z


def relu(x):
    y = []
    for i in range(len(x)):
        if x[i] >= 0:
            y.append(x[i])
        else:
            y.append(0)
    return y


def leaky_relu(x, alpha=0.01):
    p = []
    for i in range(len(x)):
        if x[i] >= 0:
            p.append(x[i])
        else:
            p.append(alpha * x[i])
    return p


def tanh(x):
    t = []
    for v in x:
        e = math.exp(-2.0 * abs(v))
        y = (1.0 - e) / (1.0 + e)
        t.append(y if v >= 0 else -y)
    return t


def softmax(x):
    max_x = max(x)
    exp_x = [math.exp(v - max_x) for v in x]
    sum_exp_x = sum(exp_x)
    s = [v / sum_exp_x for v in exp_x]
    return s
'''

_ACTIVATIONS_COMPAT = '''\
def sigmoid(x):
    z = [1 / (1 + math.exp(-x[val])) for val in range(len(x))]
    return z


def relu(x):
    y = []
    for i in range(len(x)):
        if x[i] >= 0:
            y.append(x[i])
        else:
            y.append(0)
    return y


def leaky_relu(x, alpha=0.01):
    p = []
    for i in range(len(x)):
        if x[i] >= 0:
            p.append(x[i])
        else:
            p.append(alpha * x[i])
    return p


def tanh(x):
    t = [(math.exp(x[val]) - math.exp(-x[val])) / (math.exp(x[val])
      + math.exp(-x[val])) for val in range(len(x))]
    return t


def softmax(x):
    # historical body, unreachable: neuron() routes 'softmax' to tanh
    max_x = max(x[val])
    exp_x = [math.exp(val - max_x) for val in range(len(x))]
    sum_exp_x = sum(exp_x)
    s = [j / sum_exp_x for j in exp_x]
    return s
'''

_NEURON_CORRECTED = '''\
def neuron(x, w, b, activation, alpha=0.01):
    tmp = zero_dim(x[0])
    for i in range(len(x)):
        tmp = add_dim(tmp, [w[i] * x[i][j] for j in range(len(x[0]))])
    z = [tmp[i] + b for i in range(len(tmp))]
    if activation == 'sigmoid':
        return sigmoid(z)
    elif activation == 'relu':
        return relu(z)
    elif activation == 'leaky_relu':
        return leaky_relu(z, alpha)
    elif activation == 'tanh':
        return tanh(z)
    elif activation == 'linear':
        return z
    else:
        raise ValueError('Function unknown!')


def dense(nunit, x, w, b, activation, alpha=0.01):
    wt = transpose(w)  # neuron i reads column i of the published weight layout
    if activation == 'softmax':
        rows = [neuron(x, wt[i], b[i], 'linear') for i in range(nunit)]
        return transpose([softmax(col) for col in transpose(rows)])
    res = []
    for i in range(nunit):
        z = neuron(x, wt[i], b[i], activation, alpha)
        res.append(z)
    return res
'''

_NEURON_COMPAT = '''\
def neuron(x, w, b, activation):

    tmp = zero_dim(x[0])

    for i in range(len(x)):
        tmp = add_dim(tmp, [(float(w[i]) * float(x[i][j]))
          for j in range(len(x[0]))])

    if activation == "sigmoid":
        yp = sigmoid([tmp[i] + b for i in range(len(tmp))])
    elif activation == "relu":
        yp = relu([tmp[i] + b for i in range(len(tmp))])
    elif activation == "leaky_relu":
        yp = relu([tmp[i] + b for i in range(len(tmp))])
    elif activation == "tanh":
        yp = tanh([tmp[i] + b for i in range(len(tmp))])
    elif activation == "softmax":
        yp = tanh([tmp[i] + b for i in range(len(tmp))])
    else:
        print("Function unknown!")

    return yp


def dense(nunit, x, w, b, activation):
    wt = transpose(w)  # neuron i reads column i of the published weight layout
    res = []
    for i in range(nunit):
        z = neuron(x, wt[i], b[i], activation)
        res.append(z)
    return res
'''


def _matrix_literal(name: str, m: Matrix) -> str:
    indent = " " * (len(name) + 3)
    rows = m.to_rows()
    lines = []
    for i, row in enumerate(rows):
        body = "[" + ", ".join(repr(v) for v in row) + "]"
        prefix = f"{name} = [" if i == 0 else indent
        suffix = "]" if i == len(rows) - 1 else ","
        lines.append(prefix + body + suffix)
    return "\n".join(lines)


def _vector_literal(name: str, values: Sequence[float]) -> str:
    return f"{name} = [" + ", ".join(repr(float(v)) for v in values) + "]"


def _rows_literal(name: str, rows: Sequence[Sequence[float]]) -> str:
    return _matrix_literal(name, Matrix.from_rows(rows))


def _pipeline(spec: NetworkSpec, compat: bool) -> str:
    lines = ["def forward(xtest):"]
    source = "transpose(xtest)"
    out = "yout0"
    for i, layer in enumerate(spec.layers, start=1):
        out = "yout%d" % i
        call = "dense(%d, %s, w%d, b%d, '%s'" % (
            layer.units, source, i, i, layer.activation.kind)
        if not compat and layer.activation.kind == "leaky_relu":
            call += ", %s" % repr(layer.activation.alpha)
        call += ")"
        lines.append("    %s = %s" % (out, call))
        source = out
    lines.append("    return %s" % out)
    text = "\n".join(lines) + "\n"
    if spec.layers[-1].units == 1:
        text += (
            "\n\n"
            "def predict(xtest):\n"
            "    return [1 if p >= THRESHOLD else 0 for p in forward(xtest)[0]]\n"
        )
    return text


def _demo_block(include_eval: bool) -> str:
    lines = [
        "if __name__ == '__main__':",
        "    outputs = forward(Xtest)",
        "    for row in outputs:",
        "        print(' '.join([repr(v) for v in row]))",
    ]
    if include_eval:
        lines += [
            "    predicted = predict(Xtest)",
            "    tp = fn = fp = tn = 0",
            "    for i in range(len(ytest)):",
            "        if ytest[i] == 1:",
            "            if predicted[i] == 1:",
            "                tp += 1",
            "            else:",
            "                fn += 1",
            "        else:",
            "            if predicted[i] == 1:",
            "                fp += 1",
            "            else:",
            "                tn += 1",
            "    print('confusion', tp, fn, fp, tn)",
            "    print('accuracy', (tp + tn) / len(ytest))",
        ]
    return "\n".join(lines) + "\n"


def emit_micropython(
    spec: NetworkSpec,
    compat: bool = False,
    include_eval: bool = False,
    demo_features: Sequence[Sequence[float]] | None = None,
    demo_labels: Sequence[int] | None = None,
) -> str:
    """Render the deployment program for `spec` as MicroPython source.

    `demo_features` (rows of spec.input_dim values) embeds a batch the file
    evaluates when run as a script; with `include_eval` the matching
    `demo_labels` are embedded too and the script prints its own confusion
    matrix and accuracy.  Without demo data the file just defines the model.
    """
    report = validate(spec)
    if not report.ok:
        raise ValueError(f"cannot emit an invalid model: {report}")
    if include_eval:
        if demo_features is None or demo_labels is None:
            raise ValueError("include_eval needs demo_features and demo_labels")
        if spec.layers[-1].units != 1:
            raise ValueError("the evaluation block needs a single-output network")
    if demo_labels is not None and demo_features is not None:
        if len(demo_labels) != len(demo_features):
            raise ValueError(
                f"{len(demo_labels)} labels for {len(demo_features)} demo samples"
            )
    if demo_features is not None:
        for i, row in enumerate(demo_features):
            if len(row) != spec.input_dim:
                raise ValueError(
                    f"demo sample {i} has {len(row)} features, "
                    f"model expects {spec.input_dim}"
                )

    arrow = " -> ".join(str(w) for w in spec.widths())
    acts = ", ".join(layer.activation.kind for layer in spec.layers)
    mode_note = "historical-compatible dispatch" if compat else "corrected dispatch"
    header = (
        f"# {spec.name}: dense-network inference, generated for MicroPython.\n"
        f"# Layer widths {arrow}; activations: {acts}; {mode_note}.\n"
        f"# Needs only the math module.\n"
    )

    sections = [header, "import math\n"]
    sections.append("# ---- math basics ----\n\n" + _MATH_BASICS)
    sections.append(
        "# ---- activation functions ----\n\n"
        + (_ACTIVATIONS_COMPAT if compat else _ACTIVATIONS_CORRECTED)
    )
    sections.append(
        "# ---- neuron and dense layer ----\n\n"
        + (_NEURON_COMPAT if compat else _NEURON_CORRECTED)
    )

    params = ["# ---- model parameters ----\n"]
    for i, layer in enumerate(spec.layers, start=1):
        params.append(_matrix_literal(f"w{i}", layer.weights))
        params.append(_vector_literal(f"b{i}", layer.biases))
    params.append(f"THRESHOLD = {spec.threshold!r}")
    sections.append("\n".join(params) + "\n")

    sections.append("# ---- forward pipeline ----\n\n" + _pipeline(spec, compat))

    if demo_features is not None:
        demo = ["# ---- embedded demo data ----\n"]
        demo.append(_rows_literal("Xtest", demo_features))
        if include_eval:
            demo.append("ytest = [" + ", ".join(str(int(v)) for v in demo_labels) + "]")
        sections.append("\n".join(demo) + "\n")
        sections.append(_demo_block(include_eval))

    return "\n\n".join(sections)


def emit_model_card(spec: NetworkSpec) -> str:
    """Human-readable architecture and memory summary."""
    report = validate(spec)
    if not report.ok:
        raise ValueError(f"cannot describe an invalid model: {report}")
    n_weights = sum(layer.weights.rows * layer.weights.cols for layer in spec.layers)
    n_biases = sum(len(layer.biases) for layer in spec.layers)
    n_params = n_weights + n_biases
    n_neurons = sum(layer.units for layer in spec.layers)
    lines = [
        f"Model: {spec.name}",
        f"Input features: {spec.input_dim}",
        f"Widths: {' -> '.join(str(w) for w in spec.widths())}",
        "Layers:",
    ]
    for i, layer in enumerate(spec.layers, start=1):
        act = layer.activation.kind
        if act == "leaky_relu":
            act += f" (alpha={layer.activation.alpha!r})"
        lines.append(f"  {i}: units={layer.units}, activation={act}")
    lines += [
        f"Neurons: {n_neurons}",
        f"Parameters: {n_params} ({n_weights} weights + {n_biases} biases)",
        f"Dispatch mode: {spec.dispatch_mode}",
        f"Decision threshold: {spec.threshold!r}",
        f"Parameter memory: {n_params * 8} bytes as binary64, "
        f"{n_params * 4} bytes as binary32",
        "Target budgets: RP2040 264 KB SRAM / 2 MB flash; "
        "RP2350 520 KB SRAM / 4 MB flash",
    ]
    return "\n".join(lines) + "\n"
