"""Exact arithmetic in cyclotomic fields Q[zeta_m] and in finite fields F_p, F_p[alpha].

Elements are coefficient vectors in the power basis of the field generator
(zeta_m for cyclotomic fields, alpha for finite extensions), always reduced
modulo the defining polynomial so that equality is a coefficient check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian

import sympy


class FieldError(ValueError):
    """Raised for invalid descriptors, missing roots of unity or mixed fields."""


class InvariantViolation(AssertionError):
    """Raised when an exactness guarantee the constructions rely on fails."""


# ---------------------------------------------------------------------------
# polynomial helpers; coefficient lists, lowest degree first


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _int_exact_div(num, den):
    """Divide integer polynomials where den is monic and the division is exact."""
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for shift in range(len(quot) - 1, -1, -1):
        c = num[shift + len(den) - 1]
        quot[shift] = c
        if c:
            for i, b in enumerate(den):
                num[shift + i] -= c * b
    if any(num):
        raise InvariantViolation("inexact polynomial division")
    return quot


def _divmod_q(a, b):
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    a = _trim(a)
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        a.pop()
        _trim(a)
    return _trim(q), a


def _divmod_p(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - c * x) % p
        a.pop()
        _trim(a)
    return _trim(q), a


def _poly_mul_generic(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _inverse_mod(a, modulus, p=None):
    """Inverse of a modulo an irreducible polynomial via the extended Euclid algorithm."""
    if p is None:
        divmod_ = _divmod_q
        reduce = lambda v: _trim(list(v))
    else:
        divmod_ = lambda x, y: _divmod_p(x, y, p)
        reduce = lambda v: _trim([x % p for x in v])
    r0, r1 = reduce(modulus), reduce(a)
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, reduce(_poly_sub(s0, _poly_mul_generic(q, s1)))
    # r0 is a nonzero constant since the modulus is irreducible
    if len(r0) != 1:
        raise InvariantViolation("element shares a factor with the modulus")
    if p is None:
        c = Fraction(1) / r0[0]
        return [x * c for x in s0]
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Phi_m as integer coefficients (lowest first), by exact division of x^m - 1."""
    if m < 1:
        raise FieldError("cyclotomic order must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _int_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def is_irreducible_mod_p(coeffs, p) -> bool:
    """Irreducibility of a polynomial over F_p (coefficients lowest first)."""
    poly = sympy.Poly(list(reversed([c % p for c in coeffs])), sympy.Symbol("x"), modulus=p)
    return poly.degree() >= 1 and poly.is_irreducible


@lru_cache(maxsize=None)
def first_irreducible(p: int, degree: int) -> tuple:
    """The first monic irreducible polynomial of the given degree over F_p.

    Candidates are scanned in ascending order of their lower coefficients read
    as a base-p integer, so the choice is reproducible.
    """
    if degree == 1:
        return (0, 1)
    for digits in cartesian(range(p), repeat=degree):
        coeffs = tuple(reversed(digits)) + (1,)
        if coeffs[0] == 0:
            continue
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise InvariantViolation("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    m: int = 0
    p: int = 0
    minpoly: tuple = ()

    def __post_init__(self):
        if self.kind == "cyclotomic":
            if self.m < 1:
                raise FieldError("cyclotomic order must be >= 1")
        elif self.kind == "prime":
            if not sympy.isprime(self.p):
                raise FieldError(f"{self.p} is not prime")
        elif self.kind == "extension":
            if not sympy.isprime(self.p):
                raise FieldError(f"{self.p} is not prime")
            mp = tuple(int(c) % self.p for c in self.minpoly)
            object.__setattr__(self, "minpoly", mp)
            if len(mp) < 2 or mp[-1] != 1:
                raise FieldError("minpoly must be monic of degree >= 1")
            if not is_irreducible_mod_p(mp, self.p):
                raise FieldError(f"minpoly {mp} is reducible over F_{self.p}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind != "cyclotomic"

    @property
    def modulus(self) -> tuple:
        if self.kind == "cyclotomic":
            return cyclotomic_polynomial(self.m)
        if self.kind == "prime":
            return (0, 1)
        return self.minpoly

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "cyclotomic" else self.p

    @property
    def order(self):
        """Number of elements for finite fields, None for cyclotomic fields."""
        return self.p ** self.degree if self.is_finite else None

    def __str__(self):
        if self.kind == "cyclotomic":
            return "Q" if self.m <= 2 else f"Q(zeta_{self.m})"
        if self.kind == "prime":
            return f"F_{self.p}"
        return f"F_{self.p}[x]/({_poly_str(self.minpoly)})"

    # element constructors

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.field.is_finite and self.is_finite and value.field.p == self.p:
                if value.field.degree == 1 or all(c == 0 for c in value.coeffs[1:]):
                    return self.element(value.coeffs[0])
            if value.field.kind == "cyclotomic" and self.kind == "cyclotomic":
                lm = lift_map(value.field, self)
                return self.element([sum(lm[u][t] * c for t, c in enumerate(value.coeffs)) for u in range(self.degree)])
            raise FieldError(f"cannot move {value} from {value.field} into {self}")
        k = self.degree
        if isinstance(value, (list, tuple)):
            coeffs = list(value)
            if len(coeffs) > k:
                return self.from_poly(coeffs)
            coeffs = coeffs + [0] * (k - len(coeffs))
        else:
            coeffs = [value] + [0] * (k - 1)
        if self.is_finite:
            out = []
            for c in coeffs:
                if isinstance(c, Fraction):
                    c = c.numerator * pow(c.denominator, -1, self.p)
                out.append(int(c) % self.p)
            return FieldElement(self, tuple(out))
        return FieldElement(self, tuple(Fraction(c) for c in coeffs))

    def from_poly(self, coeffs) -> "FieldElement":
        """Element given by an arbitrary-degree polynomial in the generator."""
        table = power_basis(self, len(coeffs))
        k = self.degree
        acc = [0] * k
        for j, c in enumerate(coeffs):
            if c:
                row = table[j]
                for t in range(k):
                    if row[t]:
                        acc[t] += c * row[t]
        return self.element(acc)

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    @property
    def gen(self):
        """zeta_m for cyclotomic fields, alpha for extensions, 1 for prime fields."""
        if self.kind == "prime":
            return self.one
        return self.from_poly([0, 1])


def _poly_str(coeffs):
    terms = []
    for i, c in reversed(list(enumerate(coeffs))):
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if mono and c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{'*' if mono else ''}{mono}")
    return " + ".join(terms) or "0"


def cyclotomic(m: int) -> FieldDescriptor:
    return FieldDescriptor("cyclotomic", m=m)


def prime_field(p: int) -> FieldDescriptor:
    return FieldDescriptor("prime", p=p)


def extension_field(p: int, minpoly=None, degree=None) -> FieldDescriptor:
    """F_p[x]/(minpoly); searches the first irreducible when only a degree is given."""
    if minpoly is None:
        if degree is None:
            raise FieldError("need a minpoly or a degree")
        if degree == 1:
            return prime_field(p)
        minpoly = first_irreducible(p, degree)
    return FieldDescriptor("extension", p=p, minpoly=tuple(minpoly))


def finite_field(p: int, degree: int = 1) -> FieldDescriptor:
    return prime_field(p) if degree == 1 else extension_field(p, degree=degree)


RATIONALS = cyclotomic(1)


@lru_cache(maxsize=None)
def _power_basis_cached(field: FieldDescriptor, length: int):
    k = field.degree
    mod = field.modulus
    p = field.p if field.is_finite else None
    rows = []
    cur = [1] + [0] * (k - 1)
    for _ in range(length):
        rows.append(tuple(cur))
        # multiply by x and reduce by the monic modulus
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for t in range(k):
                nxt[t] -= top * mod[t]
        if p is not None:
            nxt = [c % p for c in nxt]
        cur = nxt
    return tuple(rows)


def power_basis(field: FieldDescriptor, length: int):
    """Rows x^j mod modulus for 0 <= j < length, as integer tuples."""
    size = 16
    while size < length:
        size *= 2
    return _power_basis_cached(field, size)[:length]


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FieldElement:
    field: FieldDescriptor
    coeffs: tuple

    # construction from raw coefficient vectors that are already canonical
    @classmethod
    def _raw(cls, field, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        vals = [a + b for a, b in zip(self.coeffs, other.coeffs)]
        if self.field.is_finite:
            vals = [v % self.field.p for v in vals]
        return FieldElement._raw(self.field, vals)

    __radd__ = __add__

    def __neg__(self):
        if self.field.is_finite:
            return FieldElement._raw(self.field, [(-a) % self.field.p for a in self.coeffs])
        return FieldElement._raw(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        k = field.degree
        if k == 1:
            v = self.coeffs[0] * other.coeffs[0]
            if field.is_finite:
                v %= field.p
            return FieldElement._raw(field, (v,))
        prod = _poly_mul_generic(self.coeffs, other.coeffs)
        table = power_basis(field, len(prod))
        acc = list(prod[:k]) + [0] * max(0, k - len(prod))
        for j in range(k, len(prod)):
            c = prod[j]
            if c:
                row = table[j]
                for t in range(k):
                    if row[t]:
                        acc[t] += c * row[t]
        if field.is_finite:
            acc = [a % field.p for a in acc]
        return FieldElement._raw(field, acc)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        field = self.field
        if field.kind == "prime":
            return FieldElement._raw(field, (pow(self.coeffs[0], -1, field.p),))
        if field.kind == "cyclotomic" and field.degree == 1:
            return FieldElement._raw(field, (1 / self.coeffs[0],))
        p = field.p if field.is_finite else None
        inv = _inverse_mod(list(self.coeffs), list(field.modulus), p)
        return field.element(list(inv) + [0] * (field.degree - len(inv)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self == self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def in_prime_subfield(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def frobenius(self, times: int = 1) -> "FieldElement":
        """x -> x^(p^times)."""
        if not self.field.is_finite:
            raise FieldError("Frobenius is only defined over finite fields")
        return self ** (self.field.p ** times)

    def __repr__(self):
        if self.field.degree == 1:
            return f"{self.coeffs[0]}"
        sym = "z" if self.field.kind == "cyclotomic" else "a"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (sym if i == 1 else f"{sym}^{i}")
            terms.append(f"{c}{'*' if mono else ''}{mono}")
        return "(" + " + ".join(terms) + ")" if terms else "0"


def arithmetic(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldError(f"mixed fields {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# roots of unity


@dataclass(frozen=True)
class RootOfUnity:
    element: FieldElement
    order: int

    def __post_init__(self):
        n = self.order
        if n < 1 or self.element ** n != self.element.field.one:
            raise InvariantViolation(f"{self.element} is not an {n}-th root of unity")
        for ell in sympy.primefactors(n):
            if self.element ** (n // ell) == self.element.field.one:
                raise InvariantViolation(f"{self.element} has order smaller than {n}")

    @property
    def field(self):
        return self.element.field

    def power(self, e: int) -> FieldElement:
        return self.element ** (e % self.order)


@lru_cache(maxsize=None)
def multiplicative_generator(field: FieldDescriptor) -> FieldElement:
    """Smallest generator of the multiplicative group, scanning coefficient vectors as base-p integers."""
    if not field.is_finite:
        raise FieldError("only finite fields have a cyclic multiplicative group")
    q = field.order
    p, k = field.p, field.degree
    ells = sympy.primefactors(q - 1)
    for code in range(1, q):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        g = FieldElement._raw(field, coeffs)
        if all(g ** ((q - 1) // ell) != field.one for ell in ells):
            return g
    raise InvariantViolation("no generator found")


def has_root_of_unity(field: FieldDescriptor, n: int) -> bool:
    if n < 1:
        return False
    if field.kind == "cyclotomic":
        m = field.m
        return m % n == 0 or (m % 2 == 1 and (2 * m) % n == 0)
    return (field.order - 1) % n == 0


def primitive_root_of_unity(field: FieldDescriptor, n: int) -> RootOfUnity:
    """Canonical primitive n-th root of unity.

    For cyclotomic(m) this is zeta_m^(m/n).  When m is odd the field also holds
    the 2m-th roots (-zeta_m generates them), so n | 2m is accepted too.  For
    finite fields it is g^((q-1)/n) with g the generator found by
    multiplicative_generator, which keeps all roots mutually consistent.
    """
    if n < 1:
        raise FieldError("order must be positive")
    if field.kind == "cyclotomic":
        m = field.m
        if m % n == 0:
            return RootOfUnity(field.from_poly([0] * (m // n) + [1]), n)
        if m % 2 == 1 and (2 * m) % n == 0:
            zeta = field.from_poly([0] * ((m + 1) // 2) + [1]) if m > 1 else field.one
            base = -zeta  # order 2m
            return RootOfUnity(base ** (2 * m // n), n)
        raise FieldError(f"{field} has no primitive {n}-th root of unity")
    q = field.order
    if (q - 1) % n != 0:
        raise FieldError(f"{n} does not divide {q} - 1, no primitive {n}-th root in {field}")
    g = multiplicative_generator(field)
    return RootOfUnity(g ** ((q - 1) // n), n)


def root_power_table(root: RootOfUnity):
    """Coefficient vectors of root^e for 0 <= e < order (integer entries)."""
    field = root.field
    if field.kind == "cyclotomic":
        m = field.m
        if m % root.order == 0:
            step = m // root.order
            table = power_basis(field, m)
            return [tuple(int(c) for c in table[(e * step) % m]) for e in range(root.order)]
    out = []
    cur = field.one
    for _ in range(root.order):
        out.append(tuple(int(c) for c in cur.coeffs))
        cur = cur * root.element
    return out


# ---------------------------------------------------------------------------
# Galois helpers for finite fields


def frobenius_conjugates(x: FieldElement, base_degree: int = 1) -> list:
    """Distinct x^(q^j) with q = p^base_degree."""
    if not x.field.is_finite:
        raise FieldError("conjugation over Q is not supported; use a finite field")
    if x.field.degree % base_degree:
        raise FieldError("base degree must divide the extension degree")
    out = [x]
    y = x.frobenius(base_degree)
    while y != x:
        out.append(y)
        y = y.frobenius(base_degree)
    return out


def power_sum_weight(conjugates: list):
    """Smallest k in [0, g-1] with gamma_1^k + ... + gamma_g^k != 0, and that sum."""
    if not conjugates:
        raise ValueError("need at least one conjugate")
    g = len(conjugates)
    field = conjugates[0].field
    for k in range(g):
        s = field.zero
        for c in conjugates:
            s = s + c ** k
        if not s.is_zero():
            if field.is_finite and s.frobenius() != s:
                raise InvariantViolation("power sum left the prime field")
            return k, s
    raise InvariantViolation("all power sums vanished; conjugates are not distinct")


def field_with_roots(field: FieldDescriptor, orders) -> FieldDescriptor:
    """Smallest field of the same family that contains primitive roots of every given order.

    Cyclotomic fields grow to Q(zeta_lcm); a prime field F_p grows to the
    extension of degree ord_lcm(p).  Fields that already host the roots are
    returned unchanged.
    """
    orders = [int(n) for n in orders if int(n) > 1]
    if all(has_root_of_unity(field, n) for n in orders):
        return field
    from math import lcm

    total = lcm(*orders) if orders else 1
    if field.kind == "cyclotomic":
        return cyclotomic(lcm(field.m, total))
    if total % field.p == 0:
        raise FieldError(f"characteristic {field.p} divides the root order {total}")
    if field.kind == "extension":
        raise FieldError(f"{field} lacks the required roots; start from its prime field")
    k = 1
    while (field.p ** k - 1) % total:
        k += 1
    return finite_field(field.p, k)


def to_prime_subfield(x: FieldElement, base: FieldDescriptor) -> FieldElement:
    if not x.in_prime_subfield():
        raise FieldError(f"{x} is not in {base}")
    return base.element(x.coeffs[0])


def _tonelli_shanks(x: FieldElement):
    field = x.field
    q = field.order
    if q % 2 == 0:
        return x ** (q // 2)
    if x ** ((q - 1) // 2) != field.one:
        return None
    Q, S = q - 1, 0
    while Q % 2 == 0:
        Q //= 2
        S += 1
    c = multiplicative_generator(field) ** Q
    t = x ** Q
    r = x ** ((Q + 1) // 2)
    M = S
    while t != field.one:
        i, t2 = 0, t
        while t2 != field.one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (M - i - 1))
        M = i
        c = b * b
        t = t * c
        r = r * b
    return r


def _rational_sqrt(r: Fraction, field: FieldDescriptor):
    """Square root of a rational inside Q(zeta_m) using roots of unity and Gauss sums."""
    if r == 0:
        return field.zero
    sign = 1 if r > 0 else -1
    num, den = abs(r.numerator), r.denominator
    num *= den
    den *= den  # now r = sign * num / den with den a perfect square
    square, free = 1, 1
    for ell, e in sympy.factorint(num).items():
        square *= ell ** (e // 2)
        if e % 2:
            free *= ell
    out = field.element(Fraction(square, sympy.integer_nthroot(den, 2)[0]))
    m = field.m if field.m % 2 == 0 else 2 * field.m
    have_i = m % 4 == 0
    got_sign = 1
    for ell in sympy.primefactors(free):
        if ell == 2:
            if m % 8:
                return None
            z8 = primitive_root_of_unity(field, 8).element
            out = out * (z8 + z8 ** 7)  # square is 2
            continue
        if m % ell:
            return None
        z = primitive_root_of_unity(field, ell)
        gauss = field.zero
        for a in range(1, ell):
            gauss = gauss + int(sympy.legendre_symbol(a, ell)) * z.power(a)
        out = out * gauss  # square is (-1)^((ell-1)/2) * ell
        if ell % 4 == 3:
            got_sign = -got_sign
    if got_sign != sign:
        if not have_i:
            return None
        out = out * primitive_root_of_unity(field, 4).element
    return out


def square_root(x: FieldElement):
    """Some y in the same field with y * y == x, or None when no such y is found.

    Finite fields use Tonelli-Shanks.  In Q(zeta_m) the search covers x equal to
    a root of unity times a rational whose square root is built from Gauss sums.
    """
    field = x.field
    if x.is_zero():
        return x
    if field.is_finite:
        y = _tonelli_shanks(x)
    else:
        m = field.m if field.m % 2 == 0 else 2 * field.m
        xi = primitive_root_of_unity(field, m)
        y = None
        for j in range(m):
            rest = x * xi.power(-2 * j)
            if all(c == 0 for c in rest.coeffs[1:]):
                s = _rational_sqrt(rest.coeffs[0], field)
                if s is not None:
                    y = s * xi.power(j)
                    break
    if y is not None and y * y != x:
        raise InvariantViolation("square root check failed")
    return y


def lift_map(src: FieldDescriptor, dst: FieldDescriptor):
    """Integer matrix (dst.degree x src.degree) embedding src coefficient vectors into dst.

    Supports Q(zeta_m) inside Q(zeta_M) for m | M, rational fields anywhere, and
    a prime field inside an extension of the same characteristic.
    """
    if src == dst:
        return [[int(u == t) for t in range(src.degree)] for u in range(dst.degree)]
    if src.degree == 1 and (src.is_finite == dst.is_finite) and src.characteristic == dst.characteristic:
        return [[int(u == 0)] for u in range(dst.degree)]
    if src.kind == "cyclotomic" and dst.kind == "cyclotomic" and dst.m % src.m == 0:
        step = dst.m // src.m
        table = power_basis(dst, src.degree * step)
        return [[int(table[t * step][u]) for t in range(src.degree)] for u in range(dst.degree)]
    raise FieldError(f"no embedding of {src} into {dst}")
