"""CmDocument: the JSON interchange format for covariance matrices.

A document looks like::

    {"modes": 2, "ordering": "xxpp", "partition": ["A", "B"],
     "V": [[...], ...], "s": [...]}

The JSON schema ships as ``gaussrt/data/cmdocument.schema.json`` (copied in
``docs/``).  Documents store numbers at full double precision: rounding a
pure state to fewer digits can push it outside ``V >= i Omega`` by more than
the validation tolerance.  Reports printed by the CLI use 9 significant
digits (:func:`round_sig`).
"""
import json
from importlib import resources

import jsonschema
import numpy as np

from .errors import ValidationError
from .states import GaussianState
from .symplectic import ModePartition, validate_qcm

__all__ = [
    "SIG_DIGITS",
    "load_schema",
    "round_sig",
    "state_to_document",
    "document_to_state",
    "parse_partition",
    "read_document",
    "write_document",
]

SIG_DIGITS = 9


def load_schema():
    text = resources.files("gaussrt").joinpath("data/cmdocument.schema.json").read_text()
    return json.loads(text)


def round_sig(x, digits=SIG_DIGITS):
    """Round floats (also inside lists, dicts and arrays) to ``digits`` significant digits."""
    if isinstance(x, np.ndarray):
        return round_sig(x.tolist(), digits)
    if isinstance(x, dict):
        return {k: round_sig(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round_sig(v, digits) for v in x]
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{digits}g}")
    return x


def state_to_document(state, meta=None):
    doc = {
        "modes": state.n,
        "ordering": "xxpp",
        "partition": list(state.partition.labels),
        "V": np.asarray(state.V, dtype=float).tolist(),
        "s": np.asarray(state.s, dtype=float).tolist(),
    }
    if meta:
        doc["meta"] = meta
    return doc


def parse_partition(text, n):
    """Partition from a command-line string.

    Accepted forms (``n`` is the mode count; it may be ``None`` for forms
    that fix it themselves):

    * ``2:1`` -- mode counts per party, labelled ``A``, ``B``, ...
    * ``A=2:B=1`` -- named counts
    * ``A:B`` -- labels only; modes are split evenly
    * ``A,B,A,B`` -- one label per mode
    """
    text = text.strip()
    if "," in text:
        labels = tuple(x.strip() for x in text.split(","))
    else:
        parts = [x.strip() for x in text.split(":")]
        if not all(parts):
            raise ValidationError(f"bad partition {text!r}")
        if all(p.isdigit() for p in parts):
            sizes = {chr(ord("A") + i): int(p) for i, p in enumerate(parts)}
        elif all("=" in p for p in parts):
            sizes = {}
            for p in parts:
                name, count = p.split("=", 1)
                if not count.strip().isdigit():
                    raise ValidationError(f"bad party size in {text!r}")
                sizes[name.strip()] = int(count)
        else:
            if n is None:
                raise ValidationError(f"partition {text!r} needs an explicit mode count")
            if n % len(parts):
                raise ValidationError(
                    f"cannot split {n} modes evenly over parties {parts}; give counts like 2:1"
                )
            sizes = {p: n // len(parts) for p in parts}
        labels = tuple(lab for name, k in sizes.items() for lab in [name] * k)
    if (n is not None and len(labels) != n) or not all(labels):
        raise ValidationError(f"partition {text!r} does not describe {n} modes")
    return ModePartition(labels)


def document_to_state(doc, partition=None, tol=1e-9):
    """Validate a parsed document and build a :class:`GaussianState`.

    ``partition`` (a string in :func:`parse_partition` syntax or a
    :class:`ModePartition`) overrides the document's own partition.
    """
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise ValidationError(f"schema violation at {where}: {exc.message}") from None
    n = doc["modes"]
    V = np.asarray(doc["V"], dtype=float)
    if V.shape != (2 * n, 2 * n):
        raise ValidationError(f"V must be {2 * n}x{2 * n} for {n} modes, got {V.shape}")
    s = np.asarray(doc.get("s", np.zeros(2 * n)), dtype=float)
    if s.shape != (2 * n,):
        raise ValidationError(f"s must have length {2 * n}")
    if len(doc["partition"]) != n:
        raise ValidationError(f"partition lists {len(doc['partition'])} labels for {n} modes")
    report = validate_qcm(V, tol=tol)
    if not report.valid:
        raise ValidationError(
            f"V is not a quantum covariance matrix: min eigenvalue of V - i*Omega is "
            f"{report.min_eigenvalue:.3e}, asymmetry {report.asymmetry:.3e}"
        )
    if partition is None:
        part = ModePartition(tuple(doc["partition"]))
    elif isinstance(partition, ModePartition):
        part = partition
    else:
        part = parse_partition(partition, n)
    return GaussianState(V, s, part)


def read_document(path, partition=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from None
    return document_to_state(doc, partition)


def write_document(state, path=None, meta=None):
    """Write ``state`` as a CmDocument; returns the JSON text."""
    text = json.dumps(state_to_document(state, meta), indent=2) + "\n"
    if path is not None and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    return text
