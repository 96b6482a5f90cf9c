"""Problem and solution containers for small dense LMI programs.

A problem is

    minimize    c^T y
    subject to  F0_b + sum_i y_i F_ib  >= 0     for every block b

where each block is real symmetric or complex Hermitian.  Its dual is

    maximize    -sum_b <F0_b, Z_b>
    subject to  sum_b <F_ib, Z_b> = c_i,   Z_b >= 0

with the pairing ``<X, Y> = Re tr(X Y)``.
"""
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError

__all__ = [
    "LmiBlock",
    "SdpProblem",
    "SdpSolution",
    "embed_hermitian",
    "unembed_dual",
    "hermitian_inner",
    "dump_problem",
    "load_problem",
    "dumps_problem",
    "loads_problem",
]

HERMITIAN_TOL = 1e-12


def _check_hermitian(H, what):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"{what} must be square, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if H.size and np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL * scale:
        raise ValidationError(f"{what} is not Hermitian")
    H = 0.5 * (H + H.conj().T)
    if np.iscomplexobj(H) and not np.any(H.imag):
        H = H.real
    return H


def embed_hermitian(H):
    """Real symmetric embedding ``[[Re H, -Im H], [Im H, Re H]]``.

    ``H >= 0`` iff the embedding is PSD; each eigenvalue of ``H`` appears
    twice in the embedding.
    """
    H = _check_hermitian(H, "embed_hermitian input")
    re, im = H.real, np.imag(H)
    return np.block([[re, -im], [im, re]])


def unembed_dual(Z):
    """Map a real dual block of an embedded constraint back to Hermitian form.

    With ``Z = [[Z11, Z12], [Z21, Z22]]`` the Hermitian matrix
    ``W = (Z11 + Z22) + i (Z21 - Z12)`` satisfies
    ``<H, W> = <embed_hermitian(H), Z>`` for every Hermitian ``H``, and
    ``W >= 0`` whenever ``Z >= 0``.
    """
    d = Z.shape[0] // 2
    Z11, Z12 = Z[:d, :d], Z[:d, d:]
    Z21, Z22 = Z[d:, :d], Z[d:, d:]
    W = (Z11 + Z22) + 1j * (Z21 - Z12)
    return 0.5 * (W + W.conj().T)


def hermitian_inner(X, Y):
    return float(np.real(np.sum(np.asarray(X) * np.asarray(Y).T)))


@dataclass
class LmiBlock:
    """Affine constraint ``F0 + sum_i y_i F[i] >= 0``."""

    F0: np.ndarray
    F: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.F0 = _check_hermitian(self.F0, f"block {self.name!r} constant")
        F = np.asarray(self.F)
        d = self.F0.shape[0]
        if F.ndim != 3 or F.shape[1:] != (d, d):
            raise ValidationError(
                f"block {self.name!r}: coefficients must have shape (m, {d}, {d}), got {F.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(F)))) if F.size else 1.0
        if F.size and np.max(np.abs(F - np.conj(np.swapaxes(F, 1, 2)))) > HERMITIAN_TOL * scale:
            raise ValidationError(f"block {self.name!r}: coefficient matrix is not Hermitian")
        F = 0.5 * (F + np.conj(np.swapaxes(F, 1, 2)))
        if np.iscomplexobj(F) and not np.any(F.imag):
            F = F.real
        self.F = F

    @property
    def dim(self):
        return self.F0.shape[0]

    @property
    def is_complex(self):
        return np.iscomplexobj(self.F0) or np.iscomplexobj(self.F)

    def value(self, y):
        return self.F0 + np.tensordot(np.asarray(y, dtype=float), self.F, axes=1)

    def real_form(self):
        """``(F0, F)`` as real symmetric arrays (embedded when complex)."""
        if not self.is_complex:
            return np.asarray(self.F0, dtype=float), np.asarray(self.F, dtype=float)
        F0 = embed_hermitian(self.F0)
        F = np.array([embed_hermitian(Fi) for Fi in self.F]).reshape(len(self.F), *F0.shape)
        return F0, F


@dataclass
class SdpProblem:
    """``minimize c^T y`` subject to a list of :class:`LmiBlock` constraints."""

    c: np.ndarray
    blocks: list
    variable_names: list = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        m = self.c.size
        if not self.blocks:
            raise ValidationError("an SDP needs at least one constraint block")
        for b in self.blocks:
            if b.F.shape[0] != m:
                raise ValidationError(
                    f"block {b.name!r} has {b.F.shape[0]} coefficient matrices, expected {m}"
                )
        if self.variable_names is not None and len(self.variable_names) != m:
            raise ValidationError("variable_names must have one entry per decision variable")

    @property
    def m(self):
        return self.c.size

    def add_bound(self, index, lower=None, upper=None):
        """Append scalar bounds on ``y[index]`` as 1x1 blocks."""
        e = np.zeros((self.m, 1, 1))
        e[index, 0, 0] = 1.0
        if lower is not None:
            self.blocks.append(LmiBlock(np.array([[-float(lower)]]), e, name=f"y{index}>=lb"))
        if upper is not None:
            self.blocks.append(LmiBlock(np.array([[float(upper)]]), -e, name=f"y{index}<=ub"))
        return self


@dataclass
class SdpSolution:
    status: str
    y: np.ndarray
    Z: list
    S: list
    primal_objective: float
    dual_objective: float
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    certificate: object = None
    message: str = ""
    history: list = field(default_factory=list, repr=False)

    @property
    def optimal(self):
        return self.status == "optimal"

    def diagnostics(self):
        return {
            "status": self.status,
            "iterations": self.iterations,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "primal_infeasibility": self.primal_infeasibility,
            "dual_infeasibility": self.dual_infeasibility,
        }


# -- plain-text LMI format ---------------------------------------------------

_HEADER = "gaussrt-lmi 1"


def _fmt(x):
    if isinstance(x, complex) or np.iscomplexobj(x):
        x = complex(x)
        if x.imag == 0:
            return repr(float(x.real))
        return f"{x.real!r}{x.imag:+.17g}j"
    return repr(float(x))


def _write_matrix(lines, M):
    for row in np.asarray(M):
        lines.append(" ".join(_fmt(v) for v in row))


def dumps_problem(problem):
    """Serialize to the documented plain-text LMI format (see ``docs/lmi_format.md``)."""
    lines = [_HEADER, f"m {problem.m}", "c " + " ".join(_fmt(v) for v in problem.c)]
    lines.append(f"blocks {len(problem.blocks)}")
    for b in problem.blocks:
        field_ = "complex" if b.is_complex else "real"
        name = b.name.replace(" ", "_") or "-"
        lines.append(f"block {name} dim {b.dim} field {field_}")
        lines.append("F0")
        _write_matrix(lines, b.F0)
        for i in range(problem.m):
            lines.append(f"F{i + 1}")
            _write_matrix(lines, b.F[i])
    return "\n".join(lines) + "\n"


def loads_problem(text):
    rows = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    it = iter(rows)

    def expect(prefix):
        line = next(it)
        if not line.startswith(prefix):
            raise ValidationError(f"LMI format: expected {prefix!r}, got {line!r}")
        return line[len(prefix):].strip()

    if next(it) != _HEADER:
        raise ValidationError("LMI format: missing header line")
    m = int(expect("m"))
    c = np.array([float(v) for v in expect("c").split()]) if m else np.zeros(0)
    nblocks = int(expect("blocks"))
    blocks = []
    for _ in range(nblocks):
        parts = expect("block").split()
        name, d, field_ = parts[0], int(parts[2]), parts[4]
        dtype = complex if field_ == "complex" else float

        def read_matrix():
            return np.array([[dtype(v) for v in next(it).split()] for _ in range(d)], dtype=dtype)

        expect("F0")
        F0 = read_matrix()
        F = np.zeros((m, d, d), dtype=dtype)
        for i in range(m):
            expect(f"F{i + 1}")
            F[i] = read_matrix()
        blocks.append(LmiBlock(F0, F, name="" if name == "-" else name))
    return SdpProblem(c, blocks)


def dump_problem(problem, path):
    with open(path, "w") as fh:
        fh.write(dumps_problem(problem))


def load_problem(path):
    with open(path) as fh:
        return loads_problem(fh.read())
