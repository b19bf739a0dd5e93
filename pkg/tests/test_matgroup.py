import pytest

from tworank.elements import Mat
from tworank.gf import field_make
from tworank.matgroup import (
    CENSUS_CSV_HEADER,
    borel_subgroup,
    census_csv_row,
    gl_context,
    gl_context_q,
    involution_census,
    monomial_subgroup,
    singer_element,
    singer_normalizer,
    sylow2_gl,
    sylow2_gl2,
    sylow2_symmetric_gens,
    verify_sylowtwoingln,
    wreath_involution_count,
)
from tworank.groups import closure
from tworank.partarith import gl_order_two_part, part_pow


def test_gl_context_orders():
    assert gl_context(2, 7).order == 2016
    assert gl_context(1, 7).order == 6
    assert gl_context(3, 7).order == 33784128
    ctx = gl_context(2, 7)
    assert ctx.hypothesis_ok() and ctx.q_mod_4 == 3
    assert not gl_context(2, 3, 2).hypothesis_ok()  # p = 3
    assert not gl_context(2, 5).hypothesis_ok()  # 5 = 2 mod 3


def test_sylow2_symmetric_gens_orders():
    for k in (1, 2, 3, 4, 5, 6, 7, 8, 12):
        gens, _ = sylow2_symmetric_gens(k)
        if not gens:
            assert k == 1
            continue
        G = closure(gens)
        import math

        assert G.order == part_pow(math.factorial(k), 2)


def test_sylow2_gl2_q7_census():
    desc = sylow2_gl2(7)
    assert desc.group.order == 32
    assert desc.census_total == 9
    assert desc.census_central == 1
    assert desc.construction == "Presentation4q1"


def test_sylow2_gl2_q31_census():
    desc = sylow2_gl2(31)
    assert desc.group.order == 128
    assert desc.census_total == 33
    assert desc.census_central == 1


def test_sylow2_gl2_q19():
    desc = sylow2_gl2(19)
    # |GL_2(19)|_2 = (18)_2 (360)_2 = 2 * 8
    assert desc.group.order == gl_order_two_part(2, 19) == 16
    assert desc.census_total <= 19 + 2
    assert desc.census_total - desc.census_central <= 19 + 1


def test_sylow2_gl2_presentation_relations():
    for q in (7, 19, 31):
        desc = sylow2_gl2(q)
        rel = desc.presentation
        t2 = part_pow(q + 1, 2)
        assert rel["a_order"] == 2 * t2
        assert rel["b_order"] == 4
        assert rel["a^(2(q+1)_2)=1"] and rel["b^4=1"]
        assert rel["a^((q+1)_2)=b^2"] and rel["b^-1*a*b=a^q"]
        a, b = desc.generators
        # the central involution a^{(q+1)_2} is scalar
        assert (a**t2).is_scalar()


def test_sylow2_gl2_rejects_wrong_residue():
    with pytest.raises(ValueError):
        sylow2_gl2(13)


def test_sylow2_gl_orders_match_formula():
    for (n, q) in [(1, 7), (2, 7), (3, 7), (4, 7), (2, 13), (3, 13), (2, 9), (1, 13)]:
        desc = sylow2_gl(n, q)
        assert desc.group.order == gl_order_two_part(n, q), (n, q)


def test_sylow2_gl3_q7_census():
    desc = sylow2_gl(3, 7)
    assert desc.group.order == 64
    # C_2 x (32-element base): pairs (h, eps) with h^2 = 1
    assert desc.census_total == 2 * 9 + 1 == 19
    assert desc.construction == "OddSplit"


def test_sylow2_gl4_q7_census_and_wreath_oracle():
    desc = sylow2_gl(4, 7)
    assert desc.group.order == 2048
    assert desc.census_total == 131
    assert wreath_involution_count(9, 32) == 131
    assert desc.construction == "WreathEven"


def test_sylow2_gl2_q13_diagonal_wreath():
    desc = sylow2_gl(2, 13)
    assert desc.group.order == 32
    assert desc.census_total == 7
    assert desc.construction == "DiagonalWreath"


def test_involution_census_endpoint():
    desc = sylow2_gl2(7)
    total, central = involution_census(desc.group, desc.context)
    assert (total, central) == (9, 1)
    F = field_make(7)
    pm = closure([Mat.scalar(F, 2, F.neg_code(1))])
    assert involution_census(pm, desc.context) == (1, 1)
    with pytest.raises(ValueError):
        involution_census(pm, gl_context(3, 7))


def test_verify_statement1():
    r = verify_sylowtwoingln(1, 3, 19)
    assert r.verdict == "verified"
    assert r.counts["sylow2_order"] == 32 and r.counts["bound"] == 381
    for q in (19, 31):
        for n in range(3, 7):
            if (q, n) == (31, 4):
                continue
            assert verify_sylowtwoingln(1, n, q).verdict == "verified"
    # side conditions: q = 7 is excluded, (31, 4) is excluded
    assert verify_sylowtwoingln(1, 3, 7).verdict == "not-applicable"
    assert verify_sylowtwoingln(1, 4, 31).verdict == "not-applicable"


def test_verify_statement2_exact_census():
    r = verify_sylowtwoingln(2, 4, 31)
    assert r.verdict == "verified"
    assert r.counts["sylow2_order"] == 32768
    assert r.counts["involutions"] == 1283
    assert r.counts["wreath_formula"] == 1283
    assert r.counts["crude_wreath_bound"] == 2 * 34**2
    assert r.counts["involutions"] < 30784


def test_verify_statement3():
    for q in (7, 19, 31):
        r = verify_sylowtwoingln(3, 2, q)
        assert r.verdict == "verified", (q, r.counts)
        assert r.counts["involutions"] <= q + 2
        assert r.counts["non_central"] <= q + 1
    # hypothesis-violating q: construction works, verification refuses
    assert verify_sylowtwoingln(3, 2, 11).verdict == "not-applicable"  # 11 = 2 mod 3
    assert verify_sylowtwoingln(3, 2, 3).verdict == "not-applicable"


def test_verify_statement4():
    r = verify_sylowtwoingln(4, 4, 7)
    assert r.verdict == "verified"
    assert r.counts["involutions"] == 131 and r.counts["bound"] == 400
    assert verify_sylowtwoingln(4, 2, 7).verdict == "not-applicable"
    r5 = verify_sylowtwoingln(4, 5, 7)
    assert r5.verdict == "verified" and r5.counts["involutions"] == 263


def test_verify_statement5():
    r = verify_sylowtwoingln(5, 2, 13)
    assert r.verdict == "verified"
    assert r.counts["involutions"] == 7 and r.counts["bound"] == 14
    assert verify_sylowtwoingln(5, 1, 13).verdict == "not-applicable"
    assert verify_sylowtwoingln(5, 2, 9).verdict == "not-applicable"  # p = 3


def test_verify_handles_resource_cap():
    r = verify_sylowtwoingln(2, 4, 31, cap=100)
    assert r.verdict == "skipped-resource"


def test_census_csv():
    desc = sylow2_gl2(31)
    row = census_csv_row(desc)
    assert CENSUS_CSV_HEADER.split(",") == ["n", "q", "construction", "order",
                                            "involutions", "central", "bound", "verdict"]
    assert row == "2,31,Presentation4q1,128,33,1,33,within-bound"


def test_structured_families_gl27():
    ctx = gl_context_q(2, 7)
    assert borel_subgroup(ctx).order == 7 * 36
    assert monomial_subgroup(ctx).order == 72
    s = singer_element(ctx)
    assert s.order() == 48
    assert singer_normalizer(ctx).order == 96


def test_structured_families_gl213():
    ctx = gl_context_q(2, 13)
    assert borel_subgroup(ctx).order == 13 * 144
    assert singer_normalizer(ctx).order == 2 * (13 * 13 - 1)
