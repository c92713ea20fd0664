"""Higher-order SVD of multi-qubit states via one-body RDM eigenbases."""

from dataclasses import dataclass, field

import numpy as np

from .tensor_core import ComplexTensor, unfold

DEGENERACY_TOL = 1e-9
AOC_TOL = 1e-10
# off-diagonal size below which rho_n is taken as already diagonal
DIAGONAL_TOL = 1e-14


@dataclass(frozen=True)
class HosvdResult:
    core: ComplexTensor
    factors: list
    sigma_sq: list
    aoc_residual: float
    degenerate_modes: frozenset
    normalized_input: bool = True

    def reconstruct(self):
        return apply_factors(self.core, self.factors)


@dataclass(frozen=True)
class AocReport:
    """entries[(n, alpha, beta)] = <T_{i_n=alpha}, T_{i_n=beta}>, 1-based."""

    entries: dict = field(default_factory=dict)

    def max_abs(self, modes=None):
        vals = [abs(v) for (n, _, _), v in self.entries.items() if modes is None or n in modes]
        return max(vals, default=0.0)


def fix_phase(vecs):
    """Scale each column so its largest-magnitude entry is real positive.

    Ties go to the lower row index (argmax returns the first maximum)."""
    out = np.array(vecs, dtype=complex)
    for j in range(out.shape[1]):
        mags = np.abs(out[:, j])
        k = int(np.argmax(np.round(mags, 12)))
        if mags[k] > 0:
            out[:, j] *= np.conj(out[k, j]) / mags[k]
    return out


def _eigbasis(rho):
    """Eigenvalues (descending) and phase-fixed eigenvectors of a Hermitian matrix."""
    d = rho.shape[0]
    off = rho - np.diag(np.diag(rho))
    if d == 1 or np.max(np.abs(off)) <= DIAGONAL_TOL:
        # already diagonal: keep the computational basis, stable descending order
        diag = np.real(np.diag(rho))
        order = sorted(range(d), key=lambda i: -diag[i])
        # values within the degeneracy tolerance keep their original order
        order = _stable_ties(order, diag)
        vecs = np.eye(d, dtype=complex)[:, order]
        return diag[order], vecs
    w, v = np.linalg.eigh(rho)
    w, v = w[::-1], v[:, ::-1]
    return w, fix_phase(v)


def _stable_ties(order, vals):
    out = list(order)
    changed = True
    while changed:
        changed = False
        for k in range(len(out) - 1):
            a, b = out[k], out[k + 1]
            if a > b and abs(vals[a] - vals[b]) < DEGENERACY_TOL:
                out[k], out[k + 1] = b, a
                changed = True
    return out


def mode_product(t, mat, n):
    """Contract mat (I_n x I_n) with mode n: new[.., j, ..] = sum_i mat[j, i] t[.., i, ..]."""
    arr = np.moveaxis(t.data, n - 1, 0)
    arr = np.tensordot(mat, arr, axes=1)
    return ComplexTensor.from_array(np.moveaxis(arr, 0, n - 1))


def apply_factors(core, factors):
    out = core
    for n, u in enumerate(factors, start=1):
        out = mode_product(out, u, n)
    return out


def hosvd(psi):
    """HOSVD of psi; factors are eigenbases of rho_n sorted by descending eigenvalue."""
    if not isinstance(psi, ComplexTensor):
        psi = ComplexTensor.from_array(psi)
    norm_ok = psi.is_normalized()
    factors, sigma_sq, degenerate = [], [], set()
    for n in range(1, psi.order + 1):
        m = unfold(psi, n).data
        rho = m @ m.conj().T
        w, v = _eigbasis(rho)
        factors.append(v)
        sigma_sq.append(np.clip(np.real(w), 0.0, None))
        if np.any(np.abs(np.diff(w)) < DEGENERACY_TOL):
            degenerate.add(n)
    core = apply_factors(psi, [u.conj().T for u in factors])
    resid = aoc_report(core).max_abs()
    return HosvdResult(core, factors, sigma_sq, float(resid), frozenset(degenerate), norm_ok)


def n_mode_singular_values(t):
    """Per mode, squared Frobenius norms of the slices T_{i_n=i} (explicit sums)."""
    out = []
    for n in range(1, t.order + 1):
        arr = np.moveaxis(np.abs(t.data) ** 2, n - 1, 0)
        out.append(arr.reshape(arr.shape[0], -1).sum(axis=1))
    return out


def aoc_report(t):
    """All inner products <T_{i_n=a}, T_{i_n=b}>, a != b.

    The value for (n, a, b) is the (b, a) entry of rdm_one_body(t, n), i.e.
    sum over the other indices of conj(t[..a..]) * t[..b..]."""
    entries = {}
    for n in range(1, t.order + 1):
        m = unfold(t, n).data
        gram = m.conj() @ m.T
        d = t.dims[n - 1]
        for a in range(d):
            for b in range(d):
                if a != b:
                    entries[(n, a + 1, b + 1)] = complex(gram[a, b])
    return AocReport(entries)


def is_core_tensor(t, tol=AOC_TOL):
    """True iff all AOCs vanish and slice norms are non-increasing, within tol.

    Returns (ok, report) where report holds the worst AOC value and any
    ordering violations as (mode, slice) pairs."""
    aoc = aoc_report(t).max_abs()
    violations = []
    for n, s in enumerate(n_mode_singular_values(t), start=1):
        for i in range(len(s) - 1):
            if s[i + 1] - s[i] > tol:
                violations.append((n, i + 2))
    ok = aoc <= tol and not violations
    return ok, {"aoc_max": aoc, "ordering_violations": violations}


def three_qubit_identities(t):
    """Residuals of the 3-qubit core-tensor identities obtained by eliminating t_111, t_222.

    Keys: 'pencil' (the bilinear identity), 'real_part' (its modulus-only
    part), 'sigma_form' (same in terms of first n-mode singular values) and
    'phase_part' (the relative-phase part)."""
    if not isinstance(t, ComplexTensor):
        t = ComplexTensor.from_array(t)
    if t.dims != (2, 2, 2):
        raise ValueError(f"three-qubit tensor required, got dims {t.dims}")

    def v(i):
        return t[tuple(int(c) for c in str(i))]

    def a2(i):
        return abs(v(i)) ** 2

    c = np.conj
    pencil = ((c(v(221)) * v(121) - c(v(212)) * v(112)) * (c(v(112)) * v(212) + c(v(121)) * v(221))
              + (c(v(122)) * v(112) - c(v(221)) * v(211)) * (c(v(211)) * v(221) + c(v(112)) * v(122))
              + (c(v(212)) * v(211) - c(v(122)) * v(121)) * (c(v(211)) * v(212) + c(v(121)) * v(122)))
    real_part = (a2(112) * (a2(122) - a2(212)) + a2(121) * (a2(221) - a2(122))
                 + a2(211) * (a2(212) - a2(221)))
    s1 = [s[0] for s in n_mode_singular_values(t)]
    sigma_form = (a2(112) * (s1[0] - s1[1]) + a2(211) * (s1[1] - s1[2])
                  + a2(121) * (s1[2] - s1[0]))
    phase_part = (c(v(112)) * c(v(221)) * (v(122) * v(211) - v(121) * v(212))
                  + c(v(121)) * c(v(212)) * (v(112) * v(221) - v(122) * v(211))
                  + c(v(122)) * c(v(211)) * (v(121) * v(212) - v(112) * v(221)))
    return {
        "pencil": float(abs(pencil)),
        "real_part": float(abs(real_part)),
        "sigma_form": float(abs(sigma_form)),
        "phase_part": float(abs(phase_part)),
    }
