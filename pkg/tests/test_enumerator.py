import pytest

from hosvdq.enumerator import (
    CcvPair,
    build_aocs,
    build_concurrency_systems,
    canonical_constraint,
    detect_ccv,
    enumerate_special_states,
    from_bits,
    is_generic,
    parse_label,
    pattern_from_labels,
    resolve_endgame,
    sigma_signature,
    to_bits,
)
from oracles import (
    AOCS_2X2X3,
    CCV_3QUBIT,
    TABLE1_GENERIC,
    TABLE1_NONGENERIC,
    TABLE2,
    golden_set,
    record_key,
    table2_set,
)


def lab(idx):
    return "".join(map(str, idx))


@pytest.fixture(scope="module")
def enum3():
    return enumerate_special_states(3)


@pytest.fixture(scope="module")
def enum4():
    return enumerate_special_states(4)


def test_bits_round_trip():
    for v in range(16):
        assert to_bits(from_bits(v, 4)) == v
    assert from_bits(0b0011, 4) == (1, 1, 2, 2)
    with pytest.raises(ValueError):
        to_bits((1, 3))


def test_three_qubit_aocs():
    aocs = build_aocs(3)
    assert [a.mode for a in aocs] == [1, 2, 3]
    terms = {a.mode: {(lab(x), lab(y)) for x, y in a.terms} for a in aocs}
    assert terms[1] == {("111", "211"), ("121", "221"), ("112", "212"), ("122", "222")}
    assert terms[2] == {("111", "121"), ("211", "221"), ("112", "122"), ("212", "222")}
    assert terms[3] == {("111", "112"), ("211", "212"), ("121", "122"), ("221", "222")}


def test_restricted_aocs_drop_empty():
    aocs = build_aocs(3, [parse_label(s) for s in ("111", "122", "212", "221")])
    assert aocs == []
    with pytest.raises(ValueError):
        build_aocs(3, [])


def test_ccv_three_qubits():
    pairs = {(lab(p.x), lab(p.y)) for p in detect_ccv(build_aocs(3))}
    assert pairs == CCV_3QUBIT


def test_same_conjugation_is_not_ccv():
    aocs = build_aocs(3)
    pairs = {(lab(p.x), lab(p.y)) for p in detect_ccv(aocs)}
    assert ("111", "112") not in pairs
    with pytest.raises(ValueError):
        build_concurrency_systems(aocs, CcvPair((1, 1, 1), (1, 1, 2)))


def test_no_ccv_for_2x2x3():
    aocs = [[(parse_label(a), parse_label(b)) for a, b in eq] for eq in AOCS_2X2X3]
    assert detect_ccv(aocs) == []


def test_concurrency_lines():
    sys3 = build_concurrency_systems(build_aocs(3), CcvPair((1, 1, 1), (2, 2, 2)))
    assert len(sys3.lines) == 3 and len(sys3.triples()) == 1
    ln = sys3.lines[0]
    # mode 1: conj(t111) t211 + conj(t122) t222 + ...
    assert ln.alpha == (2, 1, 1) and ln.beta == (1, 2, 2)
    assert len(ln.gamma) == 2 and not ln.homogeneous


def test_endgame_branches():
    # two AOCs, each holding only the CCV terms
    support = [parse_label(s) for s in ("1111", "2222", "2111", "1222", "1211", "2122")]
    system = build_concurrency_systems(build_aocs(4, support), CcvPair((1,) * 4, (2,) * 4))
    assert len(system.lines) == 2
    assert all(ln.homogeneous for ln in system.lines)
    out = resolve_endgame(system, support)
    assert len(out) == 3
    assert {lab(s) for s in out[0].support} == {"2111", "1222", "1211", "2122"}
    # keeping line 1 zeroes the coefficients of line 2
    assert {lab(s) for s in out[1].support} == {"1111", "2222", "2111", "1222"}
    assert len(out[1].constraints) == 1


def test_canonical_constraint_conjugation():
    a = canonical_constraint([((1, 1), (1, 2)), ((2, 1), (2, 2))])
    b = canonical_constraint([((1, 2), (1, 1)), ((2, 2), (2, 1))])
    assert a == b


def test_genericity_and_signature():
    s1 = [parse_label(s) for s in ("111", "112", "221", "222")]
    assert is_generic(s1, 3)
    assert sigma_signature(s1, 3) == ((1, 2), (3,))
    ng = [parse_label(s) for s in ("121", "122", "211", "212")]
    assert not is_generic(ng, 3)


def test_table1(enum3):
    got = {r.family_id: record_key(r) for r in enum3.families}
    want = {k: next(iter(golden_set([v]))) for k, v in TABLE1_GENERIC.items()}
    assert got == want
    assert {record_key(r) for r in enum3.nongeneric} == golden_set(TABLE1_NONGENERIC)
    assert all(not r.generic for r in enum3.nongeneric)
    assert enum3.checks == {1: 6}


def test_ghz_not_enumerated(enum3, enum4):
    for res in (enum3, enum4):
        n = res.n_qubits
        assert all(r.support != frozenset({(1,) * n, (2,) * n}) for r in res.all_records())


def test_table2(enum4):
    assert {record_key(r) for r in enum4.families} == table2_set()
    assert len(enum4.families) == 24


def test_table2_case_headers(enum4):
    by_key = {record_key(r): r for r in enum4.families}
    for case, rows in TABLE2.items():
        for row in rows:
            rec = by_key[next(iter(golden_set([row])))]
            assert rec.family_id.startswith(str(case))
            sizes = sorted(len(g) for g in rec.signature)
            assert sizes == {1: [1, 1, 1, 1], 2: [1, 1, 2], 3: [2, 2], 4: [1, 3]}[case]


def test_case3b_signature(enum4):
    rec = enum4.by_id("3b")
    assert {lab(s) for s in rec.support} == {"1111", "1212", "2121", "2222"}
    assert rec.signature == ((1, 3), (2, 4))


def test_check_counts(enum4):
    assert enum4.checks == {1: 9, 2: 63, 3: 9}
    assert enum4.iterations == 3


@pytest.mark.parametrize("pair", sorted(CCV_3QUBIT))
def test_ccv_choice_independence(enum3, pair):
    res = enumerate_special_states(3, first_ccv=CcvPair(parse_label(pair[0]), parse_label(pair[1])))
    assert [(r.family_id, record_key(r)) for r in res.all_records()] == \
        [(r.family_id, record_key(r)) for r in enum3.all_records()]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_branch_order_independence(enum4, seed):
    res = enumerate_special_states(4, shuffle_seed=seed)
    assert {record_key(r) for r in res.all_records()} == {record_key(r) for r in enum4.all_records()}
    assert res.total_checks == enum4.total_checks


def test_patterns_satisfy_aocs_symbolically(enum4):
    # every AOC left on the support is listed as a constraint
    for rec in enum4.all_records():
        left = {canonical_constraint(a.terms) for a in build_aocs(4, rec.support)}
        assert left == set(rec.constraints)


def test_provenance_recorded(enum4):
    assert all(r.pattern.provenance for r in enum4.families)


def test_five_qubits_runs():
    res = enumerate_special_states(5)
    assert res.families and res.iterations >= 3


def test_rejects_small_n():
    with pytest.raises(ValueError):
        enumerate_special_states(2)


def test_pattern_from_labels():
    p = pattern_from_labels(["111", "112", "221", "222"], [[("111", "112"), ("221", "222")]])
    assert p.n_qubits == 3 and len(p.zero_set) == 4
