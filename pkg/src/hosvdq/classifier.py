"""Classification of qubit states by their HOSVD core and first n-mode singular values."""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
import warnings

import numpy as np
from scipy.optimize import least_squares, linprog

from .enumerator import (
    FamilyRecord,
    SymbolicStatePattern,
    enumerate_special_states,
    is_generic,
    sigma_signature,
)
from .hosvd import hosvd, is_core_tensor, n_mode_singular_values
from .tensor_core import ComplexTensor, NotNormalizedWarning

SUPPORT_TOL = 1e-9
SIGNATURE_TOL = 1e-8
# a pairwise sigma_1 gap within this factor of tol is flagged as near the boundary
BOUNDARY_FACTOR = 10.0
# largest n for which classify matches against an enumeration
MATCH_MAX_QUBITS = 5
ORDER_MARGIN = 1e-3
MIN_MAGNITUDE = 1e-3
MAX_TRIES = 2000


@dataclass(frozen=True)
class ClassificationRecord:
    sigma1_sq: tuple
    equality_signature: tuple
    signature_margin: float
    near_boundary: bool
    matched_family: FamilyRecord = None
    containing_families: tuple = ()
    core_support: frozenset = frozenset()
    flags: dict = field(default_factory=dict)
    core: ComplexTensor = None

    @property
    def family_id(self):
        return self.matched_family.family_id if self.matched_family else None


@lru_cache(maxsize=None)
def enumeration_for(n_qubits):
    """Cached enumeration used for matching."""
    return enumerate_special_states(n_qubits)


def _check_qubits(psi):
    if not isinstance(psi, ComplexTensor):
        psi = ComplexTensor.from_array(psi)
    if any(d != 2 for d in psi.dims):
        raise ValueError(f"qubit state required, got dims {psi.dims}")
    if not psi.is_normalized():
        warnings.warn("state is not normalized; normalizing", NotNormalizedWarning, stacklevel=3)
        psi = psi.normalized()
    return psi


def polytope_coordinates(psi):
    """First squared n-mode singular values (sigma_1^(1)^2, ..., sigma_1^(N)^2)."""
    psi = _check_qubits(psi)
    return tuple(float(s[0]) for s in hosvd(psi).sigma_sq)


def equality_signature(values, tol=SIGNATURE_TOL):
    """Partition of 1-based modes; modes are linked when their values differ by <= tol.

    Returns (signature, margin, near) where margin is the smallest distance
    of a pairwise difference to the tolerance, i.e. how far the labelling is
    from flipping, and near says some difference lies within a factor of
    BOUNDARY_FACTOR of tol."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    margin, near = np.inf, False
    for i, j in combinations(range(n), 2):
        diff = abs(values[i] - values[j])
        margin = min(margin, abs(diff - tol))
        near = near or tol / BOUNDARY_FACTOR <= diff <= tol * BOUNDARY_FACTOR
        if diff <= tol:
            parent[find(j)] = find(i)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i + 1)
    sig = tuple(sorted(tuple(g) for g in groups.values()))
    return sig, float(margin), near


def _constraint_residual(core, constraint):
    return abs(sum(np.conj(core[a]) * core[b] for a, b in constraint))


def classify(psi, tol=SIGNATURE_TOL):
    """HOSVD core, polytope coordinates, sigma signature and family match of a qubit state."""
    psi = _check_qubits(psi)
    res = hosvd(psi)
    core = res.core
    n = core.order
    sigma1 = tuple(float(s[0]) for s in res.sigma_sq)
    sig, margin, near = equality_signature(sigma1, tol)
    support = frozenset(core.amplitudes(SUPPORT_TOL))

    matched, containing = None, ()
    if n <= MATCH_MAX_QUBITS and n >= 3:
        enum = enumeration_for(n)
        for rec in enum.all_records():
            if rec.support == support and all(
                    _constraint_residual(core, c) <= tol for c in rec.constraints):
                matched = rec
                break
        containing = tuple(r.family_id for r in enum.families
                           if support < r.support)

    flags = {
        "ghz": support == frozenset({(1,) * n, (2,) * n}),
        "product": all(abs(s - 1.0) <= tol for s in sigma1),
        "degenerate": bool(res.degenerate_modes),
        "non_generic": not is_generic(support, n),
    }
    return ClassificationRecord(
        sigma1_sq=sigma1,
        equality_signature=sig,
        signature_margin=margin,
        near_boundary=near,
        matched_family=matched,
        containing_families=containing,
        core_support=support,
        flags=flags,
        core=core,
    )


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _twos(idx):
    return sum(1 for i in idx if i == 2)


def _designations(pattern):
    """Candidate (unknowns, conjugate flags) for solving the constraints linearly.

    Each constraint may be conjugated so all unknowns appear unconjugated; no
    term may contain two unknowns. Unknowns with many 2s come first so that
    solved amplitudes tend to sit in the second slices."""
    cons = pattern.constraints
    k = len(cons)
    if k == 0:
        return [((), ())]
    variables = sorted(pattern.support, key=lambda s: (-_twos(s), s))
    out = []
    for unknowns in combinations(variables, k):
        u = set(unknowns)
        flips = []
        for c in cons:
            if any(a in u and b in u for a, b in c):
                break
            plain = any(b in u for a, b in c)
            conj = any(a in u for a, b in c)
            if plain and conj:
                break
            flips.append(conj)
        else:
            out.append((unknowns, tuple(flips)))
    return out


def _solve(pattern, free, unknowns, flips):
    """Fill the unknowns so every constraint holds; None if singular."""
    k = len(unknowns)
    if k == 0:
        return dict(free)
    col = {u: i for i, u in enumerate(unknowns)}
    mat = np.zeros((k, k), dtype=complex)
    rhs = np.zeros(k, dtype=complex)
    for r, (c, flip) in enumerate(zip(pattern.constraints, flips)):
        for a, b in c:
            # term conj(t_a) t_b; the conjugated constraint has conj(t_b) t_a
            if flip:
                a, b = b, a
            if b in col:
                mat[r, col[b]] += np.conj(free[a])
            else:
                rhs[r] -= np.conj(free[a]) * free[b]
    if np.linalg.cond(mat) > 1e8:
        return None
    sol = np.linalg.solve(mat, rhs)
    vals = dict(free)
    for u, i in col.items():
        vals[u] = complex(sol[i])
    return vals


def _slice_sets(pattern):
    n = pattern.n_qubits
    return [(frozenset(s for s in pattern.support if s[m] == 1),
             frozenset(s for s in pattern.support if s[m] == 2)) for m in range(n)]


def _pinned_modes(pattern):
    """Modes whose ordering can only hold with sigma_1 = sigma_2 = 1/2.

    Per mode, a linear program over the weights |t_s|^2 maximizes the slice
    gap subject to ordering in every mode; a zero optimum pins the mode.
    Bilinear constraints are ignored here."""
    support = sorted(pattern.support)
    pos = {s: i for i, s in enumerate(support)}
    rows = []
    for one, two in _slice_sets(pattern):
        r = np.zeros(len(support))
        for s in one:
            r[pos[s]] += 1
        for s in two:
            r[pos[s]] -= 1
        rows.append(r)
    rows = np.array(rows)
    pinned = set()
    for m in range(pattern.n_qubits):
        if not rows[m].any() or np.all(rows[m] >= 0):
            continue
        res = linprog(-rows[m], A_ub=-rows, b_ub=np.zeros(len(rows)),
                      A_eq=np.ones((1, len(support))), b_eq=[1.0],
                      bounds=[(0, 1)] * len(support), method="highs")
        if res.status == 0 and -res.fun < 1e-9:
            pinned.add(m)
    return pinned


def _tie_sets(pattern):
    """Term sets A with sum_A |t|^2 forced to 1/2, and the modes they pin."""
    pinned = _pinned_modes(pattern)
    sl = _slice_sets(pattern)
    ties = []
    for m in sorted(pinned):
        if sl[m][0] not in ties:
            ties.append(sl[m][0])
    return ties, pinned


def _to_tensor(n, vals):
    t = ComplexTensor.from_amplitudes((2,) * n, vals)
    return t.normalized()


def _acceptable(pattern, t, pinned):
    n = pattern.n_qubits
    if any(abs(t[s]) < MIN_MAGNITUDE for s in pattern.support):
        return False
    for m, s in enumerate(n_mode_singular_values(t)):
        if m in pinned:
            if abs(s[0] - s[1]) > 1e-12:
                return False
        elif s[1] > 0 and s[0] - s[1] < ORDER_MARGIN:
            return False
    ok, _ = is_core_tensor(t, 1e-12)
    return ok


def sample_family(record, seed=None):
    """Seeded random normalized state on a family's support that satisfies its constraints.

    Accepts a FamilyRecord, a SymbolicStatePattern or the string 'GHZ' (then
    use sample_ghz). Slice norms are strictly ordered with a margin, except
    for modes that the pattern pins to 1/2, which are tied exactly."""
    pattern = record.pattern if isinstance(record, FamilyRecord) else record
    if not isinstance(pattern, SymbolicStatePattern):
        raise TypeError("expected a FamilyRecord or SymbolicStatePattern")
    rng = np.random.default_rng(seed)
    n = pattern.n_qubits
    support = sorted(pattern.support)
    designations = _designations(pattern)
    if not designations:
        raise ValueError("constraints cannot be solved linearly for any choice of unknowns")
    ties, pinned = _tie_sets(pattern)
    for _ in range(MAX_TRIES):
        unknowns, flips = designations[int(rng.integers(min(len(designations), 4)))]
        free_idx = [s for s in support if s not in unknowns]
        mags = rng.uniform(0.2, 1.0, len(free_idx)) * 0.5 ** np.array([_twos(s) for s in free_idx])
        phases = np.exp(2j * np.pi * rng.uniform(size=len(free_idx)))
        if ties:
            vals = _fit_ties(pattern, free_idx, mags, phases, unknowns, flips, ties, pinned)
        else:
            vals = _solve(pattern, dict(zip(free_idx, mags * phases)), unknowns, flips)
        if vals is None:
            continue
        t = _to_tensor(n, vals)
        if _acceptable(pattern, t, pinned):
            return t
    raise RuntimeError(f"no acceptable sample after {MAX_TRIES} draws")


def _fit_ties(pattern, free_idx, mags, phases, unknowns, flips, ties, pinned):
    """Adjust free magnitudes (log scale) until each tie set carries half the weight.

    Hinge terms push the remaining modes past the ordering margin."""
    sl = _slice_sets(pattern)
    free_modes = [m for m in range(pattern.n_qubits) if m not in pinned and sl[m][1]]

    def values(logm):
        return _solve(pattern, dict(zip(free_idx, np.exp(logm) * phases)), unknowns, flips)

    def resid(logm):
        vals = values(logm)
        if vals is None:
            return np.full(len(ties) + len(free_modes), 1e3)
        w = {s: abs(v) ** 2 for s, v in vals.items()}
        total = sum(w.values())
        out = [(2 * sum(w[s] for s in a) - total) / total for a in ties]
        for m in free_modes:
            gap = (sum(w[s] for s in sl[m][0]) - sum(w[s] for s in sl[m][1])) / total
            out.append(max(0.0, 2 * ORDER_MARGIN - gap))
        return np.array(out)

    fit = least_squares(resid, np.log(mags), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if np.max(np.abs(fit.fun)) > 1e-13:
        return None
    return values(fit.x)


def sample_ghz(n_qubits, seed=None):
    """t_1..1 |1..1> + t_2..2 |2..2> with |t_1..1| > |t_2..2|."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.05, np.pi / 4 - 0.05)
    phi = rng.uniform(0, 2 * np.pi)
    return ComplexTensor.from_amplitudes(
        (2,) * n_qubits, {(1,) * n_qubits: np.cos(theta), (2,) * n_qubits: np.sin(theta) * np.exp(1j * phi)})


def sample_random(n_qubits, seed=None):
    """Normalized complex Gaussian state (Haar distributed)."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2 ** n_qubits) + 1j * rng.normal(size=2 ** n_qubits)
    return ComplexTensor((2,) * n_qubits, v / np.linalg.norm(v))


def signature_of(record):
    return sigma_signature(record.support, record.n_qubits)
