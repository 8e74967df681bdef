"""Prime-field scalar arithmetic.

Every matrix, code, and protocol in this package works over GF(q) for a
prime q.  Residues are kept normalized to [0, q) after every operation, so
two elements are equal exactly when their stored values are equal.
"""

from __future__ import annotations

__all__ = ["FieldMismatchError", "FieldElement", "PrimeField", "is_prime"]

# Witness set that makes Miller-Rabin deterministic for all n < 3.3 * 10^24,
# comfortably covering the supported modulus range (q < 2^64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FieldMismatchError(ValueError):
    """Raised when an operation mixes elements of different fields."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, valid for n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field GF(q) for a prime modulus q < 2**64."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, int) or q >= 1 << 64 or not is_prime(q):
            raise ValueError(f"modulus must be a prime below 2**64, got {q!r}")
        self.q = q

    def __call__(self, value: int) -> "FieldElement":
        """Build the element representing value mod q."""
        return FieldElement(value, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"


class FieldElement:
    """A residue in GF(q) with operator-based arithmetic."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.q
        self.field = field

    def _coerce(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"cannot combine GF({self.field.q}) with GF({other.field.q})"
            )
        return other

    def __add__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value + other.value, self.field)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value - other.value, self.field)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value * other.value, self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        other = self._coerce(other)
        return self * other.inverse()

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.field)

    def __pow__(self, exponent: int) -> "FieldElement":
        if not isinstance(exponent, int):
            raise TypeError("exponent must be an int")
        if exponent < 0:
            raise ValueError("exponent must be non-negative")
        return FieldElement(pow(self.value, exponent, self.field.q), self.field)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via Fermat exponentiation."""
        if self.value == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        q = self.field.q
        return FieldElement(pow(self.value, q - 2, q), self.field)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElement)
            and other.field == self.field
            and other.value == self.value
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.value})"
