import pytest

from tworank.acceptance_instances import pair_action_of_s4, singer_normalizer_group
from tworank.elements import Mat, Perm
from tworank.groups import closure
from tworank.plane import (
    Collineation,
    PlaneGroup,
    counting_identity_check,
    fixed_structure,
    fixpoint_transitivity_check,
    frobenius_collineation,
    gl3_collineation_generators,
    odd_transitive_search,
    pg2,
    singer_collineation,
)


def test_pg2_9_sizes():
    P = pg2(9)
    assert P.num_points == 91
    assert all(len(pts) == 10 for pts in P.points_on_line)


def test_pg2_3_sizes():
    P = pg2(3)
    assert P.num_points == 13
    assert all(len(ls) == 4 for ls in P.lines_through_point)


def test_pg2_even_q_propagates_field_error():
    # characteristic-2 fields are outside the field module's contract, so
    # the plane constructor propagates the rejection
    with pytest.raises(ValueError):
        pg2(4)


def test_collineation_requires_incidence_preservation():
    P = pg2(3)
    # an arbitrary transposition of two points is almost never a collineation
    bad = Perm.from_cycles(13, (0, 1))
    with pytest.raises(ValueError):
        Collineation(P, bad)


def test_frobenius_collineation_pg9():
    P = pg2(9)
    fr = frobenius_collineation(P)
    assert (fr.point_perm * fr.point_perm).is_identity()
    fs = fixed_structure(fr)
    assert fs.num_points == 13
    assert fs.num_lines == 13
    assert fs.subplane_order == 3
    assert fs.spectrum == "u2+u+1"


def test_frobenius_collineation_pg49():
    P = pg2(49)
    fr = frobenius_collineation(P)
    assert len(fr.fixed_points()) == 57  # 7^2 + 7 + 1


def test_frobenius_rejects_nonsquare():
    with pytest.raises(ValueError):
        frobenius_collineation(pg2(7))


def test_homology_fixed_structure():
    P = pg2(9)
    F = P.field
    hom = Collineation.from_matrix(
        P, Mat.from_rows(F, [[1, 0, 0], [0, 1, 0], [0, 0, F.neg_code(1)]])
    )
    fs = fixed_structure(hom)
    # a homology fixes a line pointwise plus its center: 10 + 1 points
    assert fs.num_points == 11
    assert fs.subplane_order is None
    assert fs.spectrum == "u2+2"


def test_identity_fixed_structure():
    P = pg2(9)
    ident = Collineation(P, Perm.identity_of(91))
    fs = fixed_structure(ident)
    assert fs.num_points == 91 and fs.spectrum == "other"


def test_counting_identity_on_pg9():
    P = pg2(9)
    fr = frobenius_collineation(P)
    G = PlaneGroup(P, gl3_collineation_generators(P) + [fr])
    r = counting_identity_check(G, fr)
    assert r.verdict == "verified"
    assert r.counts["ratio"] == 7
    assert r.counts["class_size"] == 7560
    assert r.counts["class_in_stabilizer"] == 1080
    assert r.counts["per_point_constant"] == 1


def test_counting_identity_membership_guard():
    P = pg2(9)
    fr = frobenius_collineation(P)
    s = singer_collineation(P)
    small = PlaneGroup(P, [s])  # does not contain the Baer involution
    with pytest.raises(ValueError):
        counting_identity_check(small, fr)


def test_counting_identity_not_applicable_cases():
    P7 = pg2(7)  # not a square order
    gens = gl3_collineation_generators(P7)
    G = PlaneGroup(P7, gens)
    F = P7.field
    hom = Collineation.from_matrix(
        P7, Mat.from_rows(F, [[1, 0, 0], [0, 1, 0], [0, 0, F.neg_code(1)]])
    )
    r = counting_identity_check(G, hom)
    assert r.verdict == "not-applicable"
    # intransitive group on PG(2,9)
    P9 = pg2(9)
    fr = frobenius_collineation(P9)
    G9 = PlaneGroup(P9, [fr])
    r = counting_identity_check(G9, fr)
    assert r.verdict == "not-applicable"


def test_singer_collineation():
    P = pg2(9)
    s = singer_collineation(P)
    assert s.order() == 91
    assert len(s.point_perm.cycles()) == 1


def test_singer_normalizer_group_structure():
    SN = singer_normalizer_group(pg2(9))
    G = SN.group()
    assert G.order == 546
    assert SN.is_transitive()
    invs = G.involutions()
    assert invs
    fs = fixed_structure(Collineation(SN.plane, invs[0]))
    assert fs.num_points == 13 and fs.subplane_order == 3


def test_fixpoint_transitivity_baer_instance():
    SN = singer_normalizer_group(pg2(9))
    stab = SN.point_stabilizer(0)
    assert stab.order == 6
    k2 = closure([next(h for h in stab.elements if h.order() == 2)])
    r = fixpoint_transitivity_check(SN, k2)
    assert r.verdict == "verified"
    assert r.counts["normalizer_transitive_on_fix"] == 1
    assert r.counts["fusion_equal"] == 1
    assert r.counts["fix_size"] == 13


def test_fixpoint_transitivity_false_side():
    pairs_group, transposition_image = pair_action_of_s4()
    K = closure([transposition_image])
    r = fixpoint_transitivity_check(pairs_group, K)
    assert r.verdict == "verified"
    assert r.counts["normalizer_transitive_on_fix"] == 0
    assert r.counts["fusion_equal"] == 0


def test_fixpoint_transitivity_trivial_k():
    from tworank.groups import FiniteGroup

    SN = singer_normalizer_group(pg2(9))
    K = FiniteGroup._from_elements([SN.group().identity], [])
    r = fixpoint_transitivity_check(SN, K)
    assert r.verdict == "verified"
    assert r.counts["fix_size"] == 91
    assert r.counts["normalizer_transitive_on_fix"] == 1


def test_fixpoint_transitivity_rejects_bad_k():
    import tworank.constructions as lib

    s4 = lib.symmetric(4)
    moving = closure([Perm.from_cycles(4, (0, 1))])  # moves the base point
    with pytest.raises(ValueError):
        fixpoint_transitivity_check(s4, moving)


def test_odd_transitive_search_singer():
    SN = singer_normalizer_group(pg2(9))
    witness, rep = odd_transitive_search(SN)
    assert rep.verdict == "verified"
    assert witness is not None
    assert witness.order % 2 == 1
    assert 273 % witness.order == 0


def test_odd_transitive_search_odd_group_returns_itself():
    P = pg2(9)
    s = singer_collineation(P)
    G = PlaneGroup(P, [s])
    witness, rep = odd_transitive_search(G)
    assert witness is not None and witness.order == 91
    assert rep.counts["mode"] == 0


def test_odd_transitive_search_intransitive():
    P = pg2(9)
    fr = frobenius_collineation(P)
    G = PlaneGroup(P, [fr])
    witness, rep = odd_transitive_search(G)
    assert witness is None and rep.verdict == "not-applicable"


def test_baer_prime_condition():
    from tworank.plane import baer_prime_condition

    for u in (2, 3, 4, 5, 7, 8, 9, 11):
        cond = baer_prime_condition(u)
        assert cond["primes_1_mod_3_or_3"] == 1, u
        assert cond["nine_free"] == 1, u
    assert baer_prime_condition(3)["m"] == 13


def test_plane_export_roundtrip():
    P = pg2(3)
    d = P.to_json_dict()
    assert d["order"] == 3 and len(d["points"]) == 13
    csv = P.incidence_csv()
    rows = csv.splitlines()
    assert len(rows) == 13
    assert all(row.count("1") == 4 for row in rows)
