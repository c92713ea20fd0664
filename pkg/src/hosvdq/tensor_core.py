"""Dense complex tensors, matrix unfolding and reduced density matrices.

Storage is row-major over the multi-index (i_1, ..., i_N). Mode numbers and
multi-index entries are 1-based at the API surface, matching the |1>, |2>
labels used for qubits.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np

NORM_TOL = 1e-12


class NotNormalizedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ComplexTensor:
    """Order-N complex tensor with per-mode dimensions."""

    dims: tuple
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 2:
            raise ValueError("a tensor needs at least two modes")
        if any(d < 1 for d in dims):
            raise ValueError(f"dimensions must be positive, got {dims}")
        data = np.asarray(self.data, dtype=complex)
        if data.size != int(np.prod(dims)):
            raise ValueError(f"data has {data.size} entries, dims {dims} need {int(np.prod(dims))}")
        data = data.reshape(dims).copy()
        data.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=complex)
        return cls(arr.shape, arr)

    @classmethod
    def from_amplitudes(cls, dims, amps):
        """Build from a mapping {1-based multi-index: amplitude}."""
        arr = np.zeros(tuple(dims), dtype=complex)
        for idx, val in amps.items():
            arr[to_zero_based(idx, dims)] = val
        return cls(tuple(dims), arr)

    @property
    def order(self):
        return len(self.dims)

    @property
    def flat(self):
        return self.data.reshape(-1)

    def __getitem__(self, idx):
        return self.data[to_zero_based(idx, self.dims)]

    def norm(self):
        return float(np.linalg.norm(self.data))

    def is_normalized(self, tol=NORM_TOL):
        return abs(self.norm() - 1.0) <= tol

    def normalized(self):
        return ComplexTensor(self.dims, self.data / self.norm())

    def amplitudes(self, threshold=0.0):
        """Nonzero entries as {1-based multi-index: amplitude}."""
        out = {}
        for pos in zip(*np.nonzero(np.abs(self.data) > threshold)):
            out[tuple(int(p) + 1 for p in pos)] = complex(self.data[pos])
        return out


@dataclass(frozen=True)
class UnfoldedMatrix:
    mode: int
    data: np.ndarray
    dims: tuple = field(default=())

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]


@dataclass(frozen=True)
class DensityMatrix:
    data: np.ndarray
    label: tuple
    normalized_input: bool = True

    @property
    def dim(self):
        return self.data.shape[0]

    def trace(self):
        return complex(np.trace(self.data))


def to_zero_based(idx, dims):
    idx = tuple(int(i) for i in idx)
    if len(idx) != len(dims):
        raise IndexError(f"multi-index {idx} has wrong length for dims {dims}")
    for i, d in zip(idx, dims):
        if not 1 <= i <= d:
            raise IndexError(f"multi-index {idx} out of range for dims {dims}")
    return tuple(i - 1 for i in idx)


def _check_mode(t, n):
    if not 1 <= n <= t.order:
        raise ValueError(f"mode {n} out of range 1..{t.order}")


def cyclic_order(order, n):
    """Modes n+1, ..., N, 1, ..., n-1 (1-based)."""
    return tuple(((n - 1 + k) % order) + 1 for k in range(1, order))


def unfold(t, n):
    """n-th matrix unfolding with cyclic column order n+1..N,1..n-1."""
    _check_mode(t, n)
    axes = [n - 1] + [m - 1 for m in cyclic_order(t.order, n)]
    mat = np.transpose(t.data, axes).reshape(t.dims[n - 1], -1)
    return UnfoldedMatrix(n, mat, t.dims)


def fold(m, n, dims):
    """Inverse of unfold."""
    dims = tuple(dims)
    data = np.asarray(m.data if isinstance(m, UnfoldedMatrix) else m)
    order = len(dims)
    if not 1 <= n <= order:
        raise ValueError(f"mode {n} out of range 1..{order}")
    cyc = cyclic_order(order, n)
    if data.shape != (dims[n - 1], int(np.prod(dims)) // dims[n - 1]):
        raise ValueError(f"matrix shape {data.shape} does not match dims {dims} at mode {n}")
    arr = data.reshape((dims[n - 1],) + tuple(dims[m - 1] for m in cyc))
    axes = [n - 1] + [m - 1 for m in cyc]
    return ComplexTensor(dims, np.transpose(arr, np.argsort(axes)))


def _warn_norm(t):
    ok = t.is_normalized()
    if not ok:
        warnings.warn("tensor is not normalized", NotNormalizedWarning, stacklevel=3)
    return ok


def rdm_one_body(t, n):
    """rho_n = Psi_(n) Psi_(n)^dagger."""
    _check_mode(t, n)
    ok = _warn_norm(t)
    m = unfold(t, n).data
    return DensityMatrix(m @ m.conj().T, (n,), ok)


def rdm_complement(t, n):
    """(N-1)-body RDM Psi_(n)^T conj(Psi_(n)), modes in cyclic order n+1..N,1..n-1."""
    _check_mode(t, n)
    ok = _warn_norm(t)
    m = unfold(t, n).data
    return DensityMatrix(m.T @ m.conj(), cyclic_order(t.order, n), ok)


def permute_modes(t, perm):
    """New entry at (i_perm(1), ..., i_perm(N)) equals the old one at (i_1, ..., i_N)."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, t.order + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{t.order}")
    return ComplexTensor.from_array(np.transpose(t.data, [p - 1 for p in perm]))
