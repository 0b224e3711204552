"""Truncated composite Hilbert space for a qubit coupled to two boson modes.

The basis ordering is fixed once and for all: the state |q, n_a, n_b> sits at
index q*(Ca*Cb) + n_a*Cb + n_b, where Ca, Cb are the photon-number cutoffs
(Fock states 0 .. C-1) and q = 0 for the lower qubit state |-> and q = 1 for
|+>.  The qubit is the slowest index so the qubit reduction is a 2x2 block
contraction.

Truncation is plain matrix truncation: ladder operators simply lose the
matrix elements that would leave the retained Fock window.  Adequacy of a
cutoff is judged downstream by the trace/norm monitor of the dynamics module,
not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "SpaceDescriptor",
    "Operator",
    "build_space",
    "identity",
    "mode_annihilator",
    "mode_number",
    "qubit_operator",
    "rotated_mode_operators",
    "partial_trace",
    "reduce_density",
    "reduce_pure",
]


@dataclass(frozen=True)
class SpaceDescriptor:
    """Cutoffs and index map of the qubit (x) mode-a (x) mode-b product space."""

    cutoff_a: int
    cutoff_b: int

    def __post_init__(self):
        if self.cutoff_a < 1 or self.cutoff_b < 1:
            raise ValueError(
                f"cutoffs must be >= 1, got ({self.cutoff_a}, {self.cutoff_b})"
            )

    @property
    def dim(self) -> int:
        return 2 * self.cutoff_a * self.cutoff_b

    @property
    def dims(self) -> tuple[int, int, int]:
        """Subsystem dimensions in basis order (qubit, mode a, mode b)."""
        return (2, self.cutoff_a, self.cutoff_b)

    def index(self, q: int, n_a: int, n_b: int) -> int:
        """Basis index of |q, n_a, n_b>; q = 0 is |->, q = 1 is |+>."""
        if not (0 <= q < 2 and 0 <= n_a < self.cutoff_a and 0 <= n_b < self.cutoff_b):
            raise ValueError(f"state ({q}, {n_a}, {n_b}) outside space {self.dims}")
        return (q * self.cutoff_a + n_a) * self.cutoff_b + n_b

    def unindex(self, i: int) -> tuple[int, int, int]:
        """Inverse of index()."""
        if not 0 <= i < self.dim:
            raise ValueError(f"index {i} outside dimension {self.dim}")
        i, n_b = divmod(i, self.cutoff_b)
        q, n_a = divmod(i, self.cutoff_a)
        return q, n_a, n_b


def build_space(cutoff_a: int, cutoff_b: int) -> SpaceDescriptor:
    """Construct the truncated space descriptor; cutoffs count Fock states."""
    if int(cutoff_a) != cutoff_a or int(cutoff_b) != cutoff_b:
        raise ValueError("cutoffs must be integers")
    return SpaceDescriptor(int(cutoff_a), int(cutoff_b))


@dataclass(frozen=True)
class Operator:
    """A linear operator on a SpaceDescriptor space.

    Storage may be scipy sparse or a dense ndarray; the two are semantically
    identical and all comparisons go through max_abs_diff / dense().
    """

    space: SpaceDescriptor
    mat: object  # csr_matrix or ndarray, dim x dim

    def __post_init__(self):
        n = self.space.dim
        if self.mat.shape != (n, n):
            raise ValueError(f"matrix shape {self.mat.shape} does not match dim {n}")

    def dense(self) -> np.ndarray:
        if sp.issparse(self.mat):
            return np.asarray(self.mat.todense())
        return np.asarray(self.mat)

    def sparse(self) -> sp.csr_matrix:
        if sp.issparse(self.mat):
            return self.mat.tocsr()
        return sp.csr_matrix(self.mat)

    def dag(self) -> "Operator":
        return Operator(self.space, self.mat.conj().T.tocsr() if sp.issparse(self.mat)
                        else self.mat.conj().T)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.mat + other.mat)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.mat - other.mat)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.mat)

    def __mul__(self, c: complex) -> "Operator":
        return Operator(self.space, self.mat * c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.mat @ other.mat)

    def _check(self, other):
        if self.space != other.space:
            raise ValueError("operators live on different spaces")

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.mat @ vec

    def expect(self, state) -> complex:
        """<O> for a QuantumState, pure vector or density matrix."""
        data = getattr(state, "data", state)
        if data.ndim == 1:
            return complex(np.vdot(data, self.mat @ data))
        prod = self.mat @ data
        return complex(prod.diagonal().sum() if sp.issparse(prod) else np.trace(prod))

    def hermiticity_defect(self) -> float:
        d = self.mat - self.mat.conj().T
        return float(abs(d).max()) if not sp.issparse(d) else \
            (float(np.abs(d.data).max()) if d.nnz else 0.0)

    def max_abs_diff(self, other: "Operator") -> float:
        self._check(other)
        d = self.mat - other.mat
        if sp.issparse(d):
            return float(np.abs(d.data).max()) if d.nnz else 0.0
        return float(np.abs(d).max())


def identity(space: SpaceDescriptor) -> Operator:
    return Operator(space, sp.identity(space.dim, dtype=complex, format="csr"))


def _single_mode_ladder(cutoff: int) -> sp.csr_matrix:
    # <n-1| a |n> = sqrt(n); action at the cutoff boundary is plain truncation
    return sp.diags(np.sqrt(np.arange(1, cutoff)), 1, dtype=complex, format="csr")


def _kron3(q_op, a_op, b_op) -> sp.csr_matrix:
    return sp.kron(sp.kron(q_op, a_op, format="csr"), b_op, format="csr")


_QUBIT_MATS = {
    # basis order (|->, |+>)
    "sz": np.array([[-1, 0], [0, 1]], dtype=complex),
    "sx": np.array([[0, 1], [1, 0]], dtype=complex),
    "sy": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "sp": np.array([[0, 0], [1, 0]], dtype=complex),   # |+><-|
    "sm": np.array([[0, 1], [0, 0]], dtype=complex),   # |-><+|
}


def mode_annihilator(space: SpaceDescriptor, mode: str) -> Operator:
    """Annihilation operator of mode 'a' or 'b' on the composite space."""
    i2 = sp.identity(2, dtype=complex, format="csr")
    ia = sp.identity(space.cutoff_a, dtype=complex, format="csr")
    ib = sp.identity(space.cutoff_b, dtype=complex, format="csr")
    if mode == "a":
        return Operator(space, _kron3(i2, _single_mode_ladder(space.cutoff_a), ib))
    if mode == "b":
        return Operator(space, _kron3(i2, ia, _single_mode_ladder(space.cutoff_b)))
    raise ValueError(f"unknown mode {mode!r}, expected 'a' or 'b'")


def mode_number(space: SpaceDescriptor, mode: str) -> Operator:
    """Number operator a^dag a of the chosen mode (diagonal)."""
    a = mode_annihilator(space, mode)
    return a.dag() @ a


def qubit_operator(space: SpaceDescriptor, which: str) -> Operator:
    """Pauli or ladder operator on the qubit factor, identity on both modes.

    Tags: 'sz', 'sx', 'sy', 'sp' (raising |+><-|), 'sm' (lowering |-><+|).
    """
    if which not in _QUBIT_MATS:
        raise ValueError(f"unknown qubit operator {which!r}, "
                         f"expected one of {sorted(_QUBIT_MATS)}")
    i_f = sp.identity(space.cutoff_a * space.cutoff_b, dtype=complex, format="csr")
    return Operator(space, sp.kron(sp.csr_matrix(_QUBIT_MATS[which]), i_f, format="csr"))


def rotated_mode_operators(space: SpaceDescriptor, theta: float) -> tuple[Operator, Operator]:
    """Beam-splitter pair A = cos(t) a + sin(t) b, B = -sin(t) a + cos(t) b."""
    a = mode_annihilator(space, "a")
    b = mode_annihilator(space, "b")
    c, s = np.cos(theta), np.sin(theta)
    return c * a + s * b, (-s) * a + c * b


# ---------------------------------------------------------------------------
# partial traces

_KEEP_AXES = {"qubit": (0,), "fields": (1, 2), "mode_a": (1,), "mode_b": (2,)}


def reduce_density(rho: np.ndarray, dims: tuple[int, ...], keep) -> np.ndarray:
    """Partial trace of a density matrix over the subsystems not in `keep`.

    `dims` are the subsystem dimensions in basis order, `keep` a tuple of
    axis positions to retain.
    """
    n_sub = len(dims)
    keep = tuple(keep)
    resh = rho.reshape(dims + dims)
    for ax in sorted(set(range(n_sub)) - set(keep), reverse=True):
        resh = np.trace(resh, axis1=ax, axis2=ax + n_sub)
        n_sub -= 1
    d_keep = int(np.prod([dims[k] for k in keep]))
    return np.ascontiguousarray(resh.reshape(d_keep, d_keep))


def reduce_pure(psi: np.ndarray, dims: tuple[int, ...], keep) -> np.ndarray:
    """Reduced density matrix of a pure state without forming |psi><psi|."""
    keep = tuple(keep)
    rest = tuple(ax for ax in range(len(dims)) if ax not in keep)
    mat = np.transpose(psi.reshape(dims), keep + rest)
    d_keep = int(np.prod([dims[k] for k in keep]))
    mat = mat.reshape(d_keep, -1)
    return mat @ mat.conj().T


def partial_trace(state, keep: str):
    """Reduced density matrix of `state` over the kept subsystem.

    `keep` is one of 'qubit', 'fields', 'mode_a', 'mode_b'.  Pure states are
    handled without promotion to a full density matrix.  Returns a
    QuantumState in density form over the kept factor(s).
    """
    from .states import QuantumState  # deferred, states imports this module

    if keep not in _KEEP_AXES:
        raise ValueError(f"unknown subsystem {keep!r}, expected one of "
                         f"{sorted(_KEEP_AXES)}")
    axes = _KEEP_AXES[keep]
    dims = state.dims
    if len(dims) != 3:
        raise ValueError(f"partial_trace expects a composite state, got dims {dims}")
    if state.is_pure:
        red = reduce_pure(state.data, dims, axes)
    else:
        red = reduce_density(state.data, dims, axes)
    return QuantumState(tuple(dims[k] for k in axes), red, check=False)
