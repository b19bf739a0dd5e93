import pytest
from hypothesis import given, strategies as st

from tworank.errors import ResourceLimitError
from tworank.gf import field_make, frobenius


def naive_is_irreducible_quadratic_mod3(c1, c0):
    return all((x * x + c1 * x + c0) % 3 != 0 for x in range(3))


def test_prime_field_has_x_modulus():
    F = field_make(7)
    assert F.modulus == (0, 1)
    assert F.q == 7 and F.a == 1


def test_gf9_modulus_is_lexicographically_first():
    # oracle: scan (c1, c0) in lexicographic order for the first
    # irreducible x^2 + c1 x + c0 over GF(3)
    first = next(
        (c1, c0)
        for c1 in range(3)
        for c0 in range(3)
        if naive_is_irreducible_quadratic_mod3(c1, c0)
    )
    assert first == (0, 1)  # x^2 + 1
    F9 = field_make(3, 2)
    assert F9.modulus == (1, 0, 1)


def test_even_p_rejected():
    with pytest.raises(ValueError):
        field_make(2, 1)
    with pytest.raises(ValueError):
        field_make(9, 1)  # not prime


def test_size_cap():
    with pytest.raises(ResourceLimitError):
        field_make(1048583, 1)


def test_field_interning():
    assert field_make(7) is field_make(7)
    assert field_make(3, 2) is field_make(3, 2)


def test_inverse_and_order_in_gf7():
    F = field_make(7)
    assert F.inv_code(3) == 5
    assert F.mult_order(3) == 6
    with pytest.raises(ZeroDivisionError):
        F.inv_code(0)


def test_mixed_field_operations_rejected():
    a = field_make(7).element(3)
    b = field_make(11).element(3)
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a * b


def test_frobenius_prime_field_is_identity():
    F = field_make(7)
    assert all(frobenius(x) == x for x in F.elements())


def test_frobenius_iterates_to_identity():
    F = field_make(3, 2)
    for x in F.elements():
        assert frobenius(frobenius(x)) == x


def test_frobenius_gf49_moves_non_subfield_points():
    F = field_make(7, 2)
    fixed = [x for x in range(F.q) if F.frob_code(x) == x]
    # the fixed field of x -> x^7 is GF(7)
    assert len(fixed) == 7


def test_generator_attains_full_order():
    for (p, a) in ((7, 1), (3, 2), (7, 2), (3, 4)):
        F = field_make(p, a)
        assert F.mult_order(F.generator) == F.q - 1


@given(st.integers(0, 48), st.integers(0, 48))
def test_frobenius_is_additive_and_multiplicative(i, j):
    F = field_make(7, 2)
    x, y = F.element(i), F.element(j)
    assert frobenius(x * y) == frobenius(x) * frobenius(y)
    assert frobenius(x + y) == frobenius(x) + frobenius(y)


@given(st.integers(1, 80))
def test_mult_order_divides_group_order(i):
    F = field_make(3, 4)
    x = F.element(i % (F.q - 1) + 1)
    assert (F.q - 1) % F.mult_order(x.code) == 0


@given(st.integers(0, 342), st.integers(0, 342), st.integers(0, 342))
def test_field_axioms_gf343(i, j, k):
    F = field_make(7, 3)
    x, y, z = F.element(i), F.element(j), F.element(k)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if i != 0:
        assert x * x.inv() == F.one


def test_inv_roundtrip_larger_field():
    F = field_make(3, 6)  # 729 elements, table-backed
    for c in (1, 2, 57, 500, 728):
        assert F.mul_code(c, F.inv_code(c)) == 1


def test_untabled_field_arithmetic():
    # above the table threshold: generic polynomial arithmetic path
    F = field_make(3, 11)  # 177147 > 2^16
    a, b = 5, 11
    assert F.mul_code(a, F.inv_code(a)) == 1
    assert F.mul_code(F.mul_code(a, b), F.inv_code(b)) == a
    assert F.frob_code(F.frob_code(F.one.code)) == 1
