"""Prime-field arithmetic: GF(q) for prime q, the scalar domain of every code here.

Elements are immutable and carry a reference to their field; mixing elements
of different fields raises. Inverses use the extended Euclidean algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass


class FieldError(ValueError):
    """Invalid field construction or use."""


class FieldMismatchError(FieldError):
    """Operation between elements of different fields."""


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all moduli below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_above(n: int) -> int:
    """Smallest prime strictly greater than n (and never below 3)."""
    candidate = max(n + 1, 3)
    while not is_prime(candidate):
        candidate += 1
    return candidate


class PrimeField:
    """GF(q) with q a prime >= 3."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not isinstance(q, int):
            raise FieldError(f"modulus must be an integer, got {q!r}")
        if q < 3:
            raise FieldError(f"field size must be at least 3, got {q}")
        if not is_prime(q):
            raise FieldError(f"field size must be prime, got {q}")
        self.q = q

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.q, self)

    def element(self, value: int) -> "FieldElement":
        return self(value)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self):
        """All field elements in value order."""
        for v in range(self.q):
            yield FieldElement(v, self)

    def inv_int(self, a: int) -> int:
        """Inverse of a mod q via extended Euclid. Raises on zero."""
        a %= self.q
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        # Invariant: old_s * a == old_r (mod q).
        old_r, r = a, self.q
        old_s, s = 1, 0
        while r:
            quot = old_r // r
            old_r, r = r, old_r - quot * r
            old_s, s = s, old_s - quot * s
        return old_s % self.q

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    """A residue in [0, q) tied to its PrimeField."""

    value: int
    field: PrimeField

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot combine elements of {self.field} and {other.field}"
                )
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement((self.value + o.value) % self.field.q, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement((self.value - o.value) % self.field.q, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.value * o.value % self.field.q, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.field.q, self.field)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.field.q), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv_int(self.value), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"
