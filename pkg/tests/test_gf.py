import pytest
from hypothesis import given, strategies as st

from jplt.gf import FieldElement, FieldMismatchError, PrimeField, is_prime

F11 = PrimeField(11)
F13 = PrimeField(13)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}
    for n in range(-2, 42):
        assert is_prime(n) == (n in primes)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61)
    assert is_prime(1009)
    assert not is_prime(1007)  # 19 * 53


def test_field_rejects_non_prime():
    for bad in (0, 1, 4, 9, 12, 100, 2**64 + 13):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_construction_normalizes():
    assert F11(14).value == 3
    assert F11(-1).value == 10
    assert F11(11).value == 0
    assert int(F11(25)) == 3


def test_basic_arithmetic():
    assert F11(3) + F11(10) == F11(2)
    assert F11(3) - F11(10) == F11(4)
    assert F11(3) * F11(10) == F11(8)
    assert -F11(4) == F11(7)
    assert F11(6) ** 6 == F11(5)


def test_pow_matches_repeated_multiplication():
    for a in range(11):
        acc = F11(1)
        for e in range(13):
            assert F11(a) ** e == acc
            acc = acc * F11(a)


def test_pow_zero_conventions():
    assert F11(0) ** 0 == F11(1)
    with pytest.raises(ValueError):
        F11(3) ** -1
    with pytest.raises(TypeError):
        F11(3) ** 1.5


@pytest.mark.parametrize("q", [2, 3, 11, 101])
def test_inverse_exhaustive(q):
    field = PrimeField(q)
    for a in range(1, q):
        el = field(a)
        assert el.inverse() * el == field.one
        assert field.one / el == el.inverse()


@pytest.mark.parametrize("q", [2, 3, 11, 101])
def test_fermat_exhaustive(q):
    field = PrimeField(q)
    for a in range(1, q):
        assert field(a) ** (q - 1) == field.one


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        F11(0).inverse()
    with pytest.raises(ZeroDivisionError):
        F11(5) / F11(0)


def test_field_mismatch_raises():
    with pytest.raises(FieldMismatchError):
        F11(1) + F13(1)
    with pytest.raises(FieldMismatchError):
        F11(1) * F13(1)
    with pytest.raises(FieldMismatchError):
        F11(1) / F13(1)


def test_mixing_raw_ints_is_rejected():
    with pytest.raises(TypeError):
        F11(1) + 1  # type: ignore[operator]


def test_equality_and_hash():
    assert F11(3) == PrimeField(11)(14)
    assert F11(3) != F13(3)
    assert hash(F11(3)) == hash(PrimeField(11)(3))
    assert F11 == PrimeField(11)
    assert repr(F11(7)) == "F11(7)"


@given(
    q=st.sampled_from([2, 3, 11, 101, 1009]),
    a=st.integers(),
    b=st.integers(),
    c=st.integers(),
)
def test_field_axioms(q, a, b, c):
    field = PrimeField(q)
    x, y, z = field(a), field(b), field(c)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == field.zero
    assert x - y == x + (-y)
    if y != field.zero:
        assert (x / y) * y == x
