"""Generator families: determinism and structural invariants."""
import pytest

from lpcc_relax.generate import (Family, GenSpec, gen_cmkpc, gen_one_regular,
                                 gen_tpesc, generate)
from lpcc_relax.model import Direction, Sense, to_json


def test_identical_spec_identical_bytes():
    for fam, size in ((Family.TPESC, (4, 5)), (Family.CMKPC, (12, 3)),
                      (Family.ONE_REG, (4, 3, 5))):
        spec = GenSpec(fam, size, 0.3 if fam is not Family.ONE_REG else 0.0,
                       seed=11)
        assert to_json(generate(spec)) == to_json(generate(spec))


def test_different_seeds_differ():
    a = generate(GenSpec(Family.CMKPC, (12, 3), 0.3, seed=0))
    b = generate(GenSpec(Family.CMKPC, (12, 3), 0.3, seed=1))
    assert to_json(a) != to_json(b)


def test_spec_validation():
    with pytest.raises(ValueError):
        GenSpec(Family.CMKPC, (0, 3), 0.1)
    with pytest.raises(ValueError):
        GenSpec(Family.CMKPC, (5, 3), 1.2)


def test_spec_label():
    assert GenSpec(Family.CMKPC, (20, 5), 0.35, 7).label() == \
        "cmkpc(20,5,rho=0.35)"


def test_tpesc_structure():
    for seed in range(5):
        inst = gen_tpesc(GenSpec(Family.TPESC, (4, 6), 0.5, seed))
        s, d = 4, 6
        assert inst.direction is Direction.MIN
        assert inst.num_x == 0 and inst.num_y == s * d
        assert len(inst.rows) == s + d
        assert all(r.sense is Sense.EQ for r in inst.rows)
        # balanced: total supply equals total demand
        supply = sum(r.rhs for r in inst.rows[:s])
        demand = sum(r.rhs for r in inst.rows[s:])
        assert supply == demand
        # each supply row covers exactly the d cells of one source
        for i, r in enumerate(inst.rows[:s]):
            hot = [j for j, cj in enumerate(r.coeffs_y) if cj]
            assert hot == list(range(i * d, (i + 1) * d))
        # conflicts pair same-destination cells of two sources
        for (u, v) in inst.edges:
            assert u % d == v % d and u // d != v // d


def test_cmkpc_structure():
    inst = gen_cmkpc(GenSpec(Family.CMKPC, (15, 4), 0.4, seed=3))
    assert inst.direction is Direction.MAX
    assert inst.num_x == 0 and inst.num_y == 15
    assert len(inst.rows) == 4
    for r in inst.rows:
        assert r.sense is Sense.LE
        assert all(10 <= w <= 25 for w in r.coeffs_y)
        assert r.rhs == pytest.approx(0.3 * sum(r.coeffs_y))
    assert all(10 <= c <= 25 for c in inst.objective_y)


def test_one_regular_structure():
    n, p, m = 5, 3, 4
    inst = gen_one_regular(GenSpec(Family.ONE_REG, (n, p, m), 0.0, seed=9))
    assert inst.direction is Direction.MAX
    assert inst.num_x == p and inst.num_y == 2 * n
    # conflict graph is the perfect matching y_i -- z_i
    assert sorted(inst.edges) == [(i, n + i) for i in range(n)]
    # m data rows followed by 2p box rows on x
    assert len(inst.rows) == m + 2 * p
    for r in inst.rows[m:]:
        assert sum(1 for a in r.coeffs_x if a) == 1
        assert not any(r.coeffs_y)
    # the paired column blocks are anti-correlated: B + C has small magnitude
    for r in inst.rows[:m]:
        B = r.coeffs_y[:n]
        C = r.coeffs_y[n:]
        assert all(abs(b + c) <= 20.0 + 1e-9 for b, c in zip(B, C))


def test_one_regular_rhs_between_row_extremes():
    # d_i = floor(theta_i * sum(B + C)) with theta in (0, 1) keeps the rhs
    # between 0 and the full activation of the y-block (whichever ordering)
    inst = gen_one_regular(GenSpec(Family.ONE_REG, (6, 2, 5), 0.0, seed=2))
    for r in inst.rows[:5]:
        total = sum(r.coeffs_y)
        lo, hi = min(0.0, total), max(0.0, total)
        assert lo - 1.0 <= r.rhs <= hi
