"""Symbolic enumeration of special core tensors of n-qubit states.

Every all-orthogonality condition (AOC) of a qubit core tensor is a sum of
terms conj(t_a) t_b where a and b differ in one mode only. Branches zero out
coefficients so that each system of AOCs, written as lines
alpha x + beta y + gamma = 0 in a pair of conjugate concurrent variables
(x, y) = (conj(t_p), t_q), has concurrent lines. The leaves are supports plus
residual bilinear constraints.

Multi-indices are tuples of 1s and 2s. Internally a multi-index is an int
whose most significant of n bits is mode 1, with bit value 1 meaning index 2.
"""

from dataclasses import dataclass, field
from itertools import combinations
import random

# ---------------------------------------------------------------------------
# index helpers
# ---------------------------------------------------------------------------


def to_bits(idx):
    v = 0
    for i in idx:
        if i not in (1, 2):
            raise ValueError(f"qubit multi-index entries must be 1 or 2, got {idx}")
        v = (v << 1) | (i - 1)
    return v


def from_bits(v, n):
    return tuple(((v >> (n - 1 - k)) & 1) + 1 for k in range(n))


def label(idx):
    return "".join(str(i) for i in idx)


def parse_label(s):
    return tuple(int(c) for c in s)


def complement(idx):
    return tuple(3 - i for i in idx)


def _mode_bit(n, m):
    return 1 << (n - m)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicAoc:
    """AOC of one mode: sum of conj(t_a) t_b over terms (a, b), a_mode = 1, b_mode = 2."""

    mode: int
    terms: tuple

    def __str__(self):
        return " + ".join(f"~t{label(a)} t{label(b)}" for a, b in self.terms) + " = 0"


@dataclass(frozen=True)
class CcvPair:
    x: tuple  # appears conjugated
    y: tuple  # appears plain

    def __str__(self):
        return f"(~t{label(self.x)}, t{label(self.y)})"


@dataclass(frozen=True)
class Line:
    """alpha x + beta y + gamma = 0; alpha is plain t_alpha, beta is conj(t_beta)."""

    mode: int
    alpha: tuple
    beta: tuple
    gamma: tuple  # remaining terms (a, b) meaning conj(t_a) t_b
    conjugated: bool  # whether the AOC was conjugated to expose x and y

    @property
    def homogeneous(self):
        return not self.gamma


@dataclass(frozen=True)
class ConcurrencySystem:
    ccv: CcvPair
    lines: tuple

    def triples(self):
        if len(self.lines) < 3:
            raise ValueError("concurrency of three lines needs at least three lines")
        return list(combinations(self.lines, 3))


@dataclass(frozen=True)
class SymbolicStatePattern:
    n_qubits: int
    support: frozenset
    constraints: tuple = ()
    provenance: tuple = ()

    @property
    def zero_set(self):
        full = {from_bits(v, self.n_qubits) for v in range(2 ** self.n_qubits)}
        return frozenset(full - set(self.support))

    def key(self):
        return (tuple(sorted(self.support)), self.constraints)


@dataclass(frozen=True)
class FamilyRecord:
    family_id: str
    pattern: SymbolicStatePattern
    signature: tuple  # partition of modes (tuples of 1-based modes)
    generic: bool

    @property
    def n_qubits(self):
        return self.pattern.n_qubits

    @property
    def support(self):
        return self.pattern.support

    @property
    def constraints(self):
        return self.pattern.constraints


@dataclass
class EnumerationResult:
    n_qubits: int
    families: list  # generic FamilyRecords
    nongeneric: list  # non-generic FamilyRecords
    checks: dict = field(default_factory=dict)  # iteration -> row + column checks

    @property
    def total_checks(self):
        return sum(self.checks.values())

    @property
    def iterations(self):
        return max(self.checks, default=0)

    def all_records(self):
        return self.families + self.nongeneric

    def by_id(self, family_id):
        for rec in self.all_records():
            if rec.family_id == family_id:
                return rec
        raise KeyError(family_id)


# ---------------------------------------------------------------------------
# AOCs and CCVs
# ---------------------------------------------------------------------------


def _aocs_bits(n, S):
    """Nonempty restricted AOCs as (mode, frozenset of (a, b)) with int indices."""
    out = []
    for m in range(1, n + 1):
        bit = _mode_bit(n, m)
        terms = frozenset((a, a | bit) for a in S if not a & bit and (a | bit) in S)
        if terms:
            out.append((m, terms))
    return out


def build_aocs(n_qubits, support=None):
    """One AOC per mode restricted to support; empty AOCs are dropped."""
    if n_qubits < 2:
        raise ValueError("need at least two qubits")
    if support is None:
        S = set(range(2 ** n_qubits))
    else:
        S = {to_bits(s) for s in support}
        if not S:
            raise ValueError("empty support")
    out = []
    for m, terms in _aocs_bits(n_qubits, S):
        ts = tuple(sorted((from_bits(a, n_qubits), from_bits(b, n_qubits)) for a, b in terms))
        out.append(SymbolicAoc(m, ts))
    return out


def _ccv_ok(eqs, p, q):
    for _, terms in eqs:
        cp = [a == p for a, b in terms if p in (a, b)]
        cq = [a == q for a, b in terms if q in (a, b)]
        # each exactly once, with opposite conjugation status
        if len(cp) != 1 or len(cq) != 1 or cp[0] == cq[0]:
            return False
    return True


def _ccvs_bits(n, eqs, S):
    mask = (1 << n) - 1
    out = []
    for p in sorted(S):
        q = p ^ mask
        if p < q and q in S and _ccv_ok(eqs, p, q):
            out.append((p, q))
    return out


def detect_ccv(aocs, support=None):
    """Complementary pairs present exactly once in every AOC with preserved relative phase.

    aocs is a list of SymbolicAoc (qubits) or, for general local dimension,
    a list of term lists [(a, b), ...] with a, b multi-indices; for those the
    candidate pairs are all variable pairs and the result is usually empty."""
    if not aocs:
        return []
    if isinstance(aocs[0], SymbolicAoc):
        n = len(aocs[0].terms[0][0])
        if support is None:
            support = {i for eq in aocs for t in eq.terms for i in t}
        S = {to_bits(s) for s in support}
        eqs = [(eq.mode, frozenset((to_bits(a), to_bits(b)) for a, b in eq.terms)) for eq in aocs]
        return [CcvPair(from_bits(p, n), from_bits(q, n)) for p, q in _ccvs_bits(n, eqs, S)]
    # generic path: any two distinct variables
    eqs = [(k, frozenset(tuple(map(tuple, t)) for t in terms)) for k, terms in enumerate(aocs)]
    variables = sorted({v for _, terms in eqs for t in terms for v in t})
    out = []
    for p, q in combinations(variables, 2):
        if _ccv_ok(eqs, p, q):
            out.append(CcvPair(p, q))
    return out


def _lines_bits(eqs, p, q):
    lines = []
    for m, terms in eqs:
        conj = any(b == p for a, b in terms)
        if conj:
            terms = frozenset((b, a) for a, b in terms)
        alpha = next(b for a, b in terms if a == p)
        beta = next(a for a, b in terms if b == q)
        gamma = tuple(sorted(t for t in terms if t[0] != p and t[1] != q))
        lines.append((m, alpha, beta, gamma, conj))
    return lines


def build_concurrency_systems(aocs, ccv):
    """Lines alpha x + beta y + gamma = 0 for each AOC in the CCV pair."""
    n = len(ccv.x)
    eqs = [(eq.mode, frozenset((to_bits(a), to_bits(b)) for a, b in eq.terms)) for eq in aocs]
    p, q = to_bits(ccv.x), to_bits(ccv.y)
    if not _ccv_ok(eqs, p, q):
        raise ValueError(f"{ccv} is not a CCV pair of these AOCs")
    lines = []
    for m, al, be, ga, cj in _lines_bits(eqs, p, q):
        gamma = tuple((from_bits(a, n), from_bits(b, n)) for a, b in ga)
        lines.append(Line(m, from_bits(al, n), from_bits(be, n), gamma, cj))
    return ConcurrencySystem(ccv, tuple(lines))


# ---------------------------------------------------------------------------
# endgame, genericity, canonical form
# ---------------------------------------------------------------------------


def resolve_endgame(system, support):
    """Branches for homogeneous lines alpha_i x + beta_i y = 0.

    Either x = y = 0, or for each line i all other lines lose both
    coefficients, leaving line i as a residual constraint. For two lines
    the second option is the same as zeroing one line's coefficient pair."""
    if not all(ln.homogeneous for ln in system.lines):
        raise ValueError("endgame needs homogeneous lines")
    support = frozenset(support)
    out = [support - {system.ccv.x, system.ccv.y}]
    for i in range(len(system.lines)):
        zero = set()
        for j, ln in enumerate(system.lines):
            if j != i:
                zero |= {ln.alpha, ln.beta}
        out.append(support - zero)
    n = len(system.ccv.x)
    patterns = []
    for S in out:
        cons = tuple(sorted(canonical_constraint(eq.terms) for eq in build_aocs(n, S))) if S else ()
        patterns.append(SymbolicStatePattern(n, S, cons))
    return patterns


def canonical_constraint(terms):
    """Equation and its conjugate are the same constraint; pick the smaller form."""
    terms = [tuple(t) for t in terms]
    a = tuple(sorted(terms))
    b = tuple(sorted((y, x) for x, y in terms))
    return min(a, b)


def _slices(support, n):
    out = []
    for m in range(n):
        out.append((frozenset(s for s in support if s[m] == 1),
                    frozenset(s for s in support if s[m] == 2)))
    return out


def is_generic(support, n):
    """False if sigma_1 of some mode has the same |t|^2 terms as sigma_2 of another.

    Ordering then pins both to 1/2, which is a measure-zero locus."""
    sl = _slices(support, n)
    for i in range(n):
        for j in range(n):
            if i != j and sl[i][0] == sl[j][1]:
                return False
    return True


def filter_generic(pattern):
    return is_generic(pattern.support, pattern.n_qubits)


def sigma_signature(support, n):
    """Modes grouped by identical first-slice term sets."""
    sl = _slices(support, n)
    groups = []
    for m in range(n):
        for g in groups:
            if sl[g[0]][0] == sl[m][0]:
                g.append(m)
                break
        else:
            groups.append([m])
    return tuple(tuple(x + 1 for x in g) for g in groups)


def _case_number(signature):
    sizes = sorted((len(g) for g in signature), reverse=True)
    if sizes[0] == 1:
        return 1
    if sizes[0] == 2 and (len(sizes) < 2 or sizes[1] == 1):
        return 2
    if sizes[0] == 2 and sizes[1] == 2:
        return 3
    if sizes[0] == 3:
        return 4
    return 5


def _sig_key(signature):
    return tuple(g for g in signature if len(g) > 1)


def canonicalize_and_group(patterns):
    """Dedupe patterns and assign family ids and signatures.

    Ids: three qubits use B1, B2 (no constraint), S1.. (one equal pair) and
    NG1.. for non-generic patterns; four qubits use the case number of the
    sigma_1 equality pattern followed by a letter; other sizes use F1...
    Records are ordered by genericity, case, equal-mode sets, then by
    decreasing support size and the sorted support labels."""
    seen = {}
    for p in patterns:
        seen.setdefault(p.key(), p)
    items = []
    for p in seen.values():
        n = p.n_qubits
        sig = sigma_signature(p.support, n)
        gen = is_generic(p.support, n)
        items.append((p, sig, gen))

    def order(item):
        p, sig, gen = item
        return (not gen, _case_number(sig), _sig_key(sig), -len(p.support),
                sorted(label(s) for s in p.support), p.constraints)

    items.sort(key=order)
    records = []
    counters = {}
    for p, sig, gen in items:
        n = p.n_qubits
        if not gen:
            group = "NG"
        elif n == 3:
            case = _case_number(sig)
            group = {1: "B", 2: "S"}.get(case, f"C{case}-")
        elif n == 4:
            group = f"{_case_number(sig)}"
        else:
            group = "F"
        k = counters.get(group, 0)
        counters[group] = k + 1
        if n == 4 and gen:
            fid = group + _letters(k)
        else:
            fid = f"{group}{k + 1}"
        records.append(FamilyRecord(fid, p, sig, gen))
    return records


def _letters(k):
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(ord("a") + r) + s
    return s


# ---------------------------------------------------------------------------
# recursion
# ---------------------------------------------------------------------------


def _min_vertex_covers(edges):
    verts = sorted({v for e in edges for v in e})
    for k in range(1, len(verts) + 1):
        res = [frozenset(c) for c in combinations(verts, k)
               if all(a in c or b in c for a, b in edges)]
        if res:
            return res
    return [frozenset()]


class _Search:
    def __init__(self, n, first_ccv=None, shuffle_seed=None):
        self.n = n
        self.mask = (1 << n) - 1
        self.first_ccv = first_ccv
        self.rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
        self.seen = set()
        self.results = {}
        self.checks = {}

    def _order(self, branches):
        if self.rng is not None:
            branches = list(branches)
            self.rng.shuffle(branches)
        return branches

    def emit(self, S, eqs, trace):
        key = (frozenset(S), frozenset(t for _, t in eqs))
        self.results.setdefault(key, trace)

    def node(self, S, it, via_column, trace):
        key = (S, via_column)
        if key in self.seen:
            return
        self.seen.add(key)
        n = self.n
        eqs = _aocs_bits(n, S)
        if not eqs:
            return self.emit(S, eqs, trace)
        # a one-term AOC conj(t_a) t_b = 0 forces t_a = 0 or t_b = 0
        mono = [next(iter(t)) for _, t in eqs if len(t) == 1]
        if mono:
            for vc in self._order(_min_vertex_covers(mono)):
                self.node(S - vc, it, via_column, trace + (("cover", tuple(sorted(vc))),))
            return
        cc = _ccvs_bits(n, eqs, S)
        if it == 0 and self.first_ccv is not None:
            p0, q0 = (to_bits(self.first_ccv.x), to_bits(self.first_ccv.y))
            if (p0, q0) not in cc and (q0, p0) not in cc:
                raise ValueError(f"{self.first_ccv} is not a CCV pair")
            cc = [(min(p0, q0), max(p0, q0))]
        lines = _lines_bits(eqs, *cc[0]) if cc else None
        if lines and len(lines) >= 2 and all(not ln[3] for ln in lines):
            return self._endgame(S, it, via_column, trace, cc[0], lines)
        if len(eqs) <= 2:
            return self.emit(S, eqs, trace)
        if not cc:
            if via_column:
                # a column check must resolve without further splitting
                return
            pairs = [a for a in sorted(S) if a < a ^ self.mask and a ^ self.mask in S]
            for a in self._order(pairs):
                self.node(S - {a, a ^ self.mask}, it, False, trace + (("pair", a),))
            return
        self._checks(S, it, trace, cc[0], lines)

    def _endgame(self, S, it, via_column, trace, pq, lines):
        branches = [(S - set(pq), ("endgame", "xy"))]
        for i in range(len(lines)):
            zero = set()
            for j, ln in enumerate(lines):
                if j != i:
                    zero |= {ln[1], ln[2]}
            branches.append((S - zero, ("endgame", lines[i][0])))
        for S2, step in self._order(branches):
            self.node(frozenset(S2), it, via_column, trace + (step,))

    def _checks(self, S, it, trace, pq, lines):
        p, q = pq
        k = len(lines)
        rowsets = list(combinations(range(k), k - 2))
        self.checks[it + 1] = self.checks.get(it + 1, 0) + 3 + len(rowsets)
        alphas = {ln[1] for ln in lines}
        betas = {ln[2] for ln in lines}
        branches = [
            # column of alphas zero; the lines reduce to beta y + gamma, y = 0
            (S - alphas - {q}, True, ("column", 1)),
            (S - betas - {p}, True, ("column", 2)),
            # gamma column zero: lines through the origin, x = y = 0
            (S - {p, q}, False, ("column", 3)),
        ]
        for rows in rowsets:
            zero = set()
            for r in rows:
                zero |= {lines[r][1], lines[r][2]}
            branches.append((S - zero, False, ("rows", tuple(lines[r][0] for r in rows))))
        for S2, via_col, step in self._order(branches):
            self.node(frozenset(S2), it + 1, via_col, trace + ((it + 1,) + step,))


def enumerate_special_states(n_qubits, first_ccv=None, shuffle_seed=None):
    """Run the concurrency-of-three-lines search for n qubits.

    first_ccv overrides the CCV used at the root (default: the
    lexicographically smallest pair, (conj t_1..1, t_2..2)). shuffle_seed
    randomizes branch exploration order.

    Check counting: every concurrency system of k lines that is split adds
    3 column checks and C(k, 2) row checks to its iteration. A support reached
    along several branches is expanded and counted once."""
    if n_qubits < 3:
        raise ValueError("enumeration needs at least three qubits")
    search = _Search(n_qubits, first_ccv, shuffle_seed)
    search.node(frozenset(range(2 ** n_qubits)), 0, False, ())
    patterns = []
    n = n_qubits
    for (S, eqs), trace in search.results.items():
        support = frozenset(from_bits(v, n) for v in S)
        cons = tuple(sorted(canonical_constraint([(from_bits(a, n), from_bits(b, n)) for a, b in t])
                            for t in eqs))
        patterns.append(SymbolicStatePattern(n, support, cons, _render_trace(trace, n)))
    records = canonicalize_and_group(patterns)
    return EnumerationResult(
        n,
        [r for r in records if r.generic],
        [r for r in records if not r.generic],
        dict(sorted(search.checks.items())),
    )


def _render_trace(trace, n):
    out = []
    for step in trace:
        if step[0] == "cover":
            out.append("zero " + ",".join(label(from_bits(v, n)) for v in step[1]))
        elif step[0] == "pair":
            a = step[1]
            out.append(f"zero pair {label(from_bits(a, n))},{label(from_bits(a ^ ((1 << n) - 1), n))}")
        elif step[0] == "endgame":
            out.append("endgame x=y=0" if step[1] == "xy" else f"endgame keep line {step[1]}")
        elif step[1] == "column":
            out.append(f"it{step[0]} column {step[2]} = 0")
        else:
            out.append(f"it{step[0]} rows {'-'.join(str(r) for r in step[2])} = 0")
    return tuple(out)


def pattern_from_labels(support, constraints=()):
    """Convenience constructor: support labels like '1122', constraints as label pairs."""
    sup = frozenset(parse_label(s) for s in support)
    n = len(next(iter(sup)))
    cons = tuple(sorted(canonical_constraint([(parse_label(a), parse_label(b)) for a, b in c])
                        for c in constraints))
    return SymbolicStatePattern(n, sup, cons)
