"""Exact arithmetic over finite fields GF(p^m).

Elements are canonical integers in [0, q).  For prime fields the encoding is
the residue itself; for extension fields an element sum(c_i * x^i) is packed
as the base-p integer sum(c_i * p^i).  The reduction polynomial is the
lexicographically smallest monic irreducible (coefficients compared from the
constant term upward), so encodings are reproducible bit-for-bit.

`Field` methods take and return raw ints (the hot path used by the matrix
code); `Fe` wraps an int together with its field and overloads the usual
operators for scalar work.
"""

from __future__ import annotations

from .errors import DivisionByZero, FieldMismatch, NotPrimePower, OrderNotDivisible


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int):
    """Return (p, m) with q = p^m and p prime, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p:
            continue
        m, rest = 0, q
        while rest % p == 0:
            rest //= p
            m += 1
        return (p, m) if rest == 1 else None
    return (q, 1)  # no factor <= sqrt(q): q is prime


def _poly_mulmod(a, b, red, p):
    # a, b: coefficient tuples (constant first), red: monic reduction poly of degree m
    m = len(red) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for d in range(len(out) - 1, m - 1, -1):
        c = out[d]
        if c:
            out[d] = 0
            for j in range(m):
                out[d - m + j] = (out[d - m + j] - c * red[j]) % p
    return tuple(out[:m]) + (0,) * (m - len(out))


def _poly_divides(d, f, p):
    # True if polynomial d divides f over GF(p); both constant-first, d monic
    f = list(f)
    degd = len(d) - 1
    while len(f) > degd and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 < degd:
            break
        c = f[-1]
        shift = len(f) - 1 - degd
        for j in range(len(d)):
            f[shift + j] = (f[shift + j] - c * d[j]) % p
    return not any(f)


def _is_irreducible(poly, p):
    m = len(poly) - 1
    if poly[0] == 0:  # divisible by x
        return m == 1
    for deg in range(1, m // 2 + 1):
        for packed in range(p**deg):
            cand = [0] * (deg + 1)
            v = packed
            for j in range(deg):
                cand[j] = v % p
                v //= p
            cand[deg] = 1
            if _poly_divides(tuple(cand), poly, p):
                return False
    return True


def _smallest_irreducible(p: int, m: int):
    """Lexicographically smallest monic irreducible of degree m over GF(p)."""
    if m == 1:
        return (0, 1)
    for packed in range(p**m):
        # lexicographic on (c_0, ..., c_{m-1}): constant term varies slowest
        coeffs = [0] * m
        v = packed
        for j in range(m - 1, -1, -1):
            coeffs[j] = v % p
            v //= p
        cand = tuple(coeffs) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """The finite field GF(p^m) with q = p^m elements.

    Immutable after construction; all operations are pure.
    """

    __slots__ = ("p", "m", "q", "reduction_polynomial", "primitive",
                 "_exp", "_log", "_add_table", "_np_cache")

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p**m
        self.reduction_polynomial = _smallest_irreducible(p, m)
        self._np_cache = None
        if m == 1:
            self._exp = None
            self._log = None
            self._add_table = None
        else:
            self._build_tables()
        self.primitive = self._find_primitive()

    # -- construction helpers --

    def _unpack(self, v: int):
        out = []
        for _ in range(self.m):
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def _pack(self, coeffs) -> int:
        v = 0
        for c in reversed(tuple(coeffs)):
            v = v * self.p + c
        return v

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        red = self.reduction_polynomial
        # find a multiplicative generator by exhaustive order check, smallest first
        gen = None
        for v in range(2, q):
            x, order = v, 1
            while x != 1:
                x = self._pack(_poly_mulmod(self._unpack(x), self._unpack(v), red, p))
                order += 1
                if order > q:
                    raise AssertionError("element order overflow")
            if order == q - 1:
                gen = v
                break
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._pack(_poly_mulmod(self._unpack(x), self._unpack(gen), red, p))
        self._exp = exp
        self._log = log
        if q <= 1024:
            self._add_table = [
                [self._add_slow(a, b) for b in range(q)] for a in range(q)
            ]
        else:
            self._add_table = None

    def _add_slow(self, a: int, b: int) -> int:
        return self._pack((x + y) % self.p for x, y in zip(self._unpack(a), self._unpack(b)))

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        if self.m == 1:
            for v in range(1, self.q):
                if self.element_order(v) == self.q - 1:
                    return v
        # extension field: smallest encoded value with full order, via log table
        for v in range(1, self.q):
            if self.element_order(v) == self.q - 1:
                return v
        raise AssertionError("no primitive element")  # unreachable

    # -- basic queries --

    def element_order(self, a: int) -> int:
        if a % self.q == 0:
            raise DivisionByZero("zero has no multiplicative order")
        if self.m == 1:
            x, k = a % self.p, 1
            while x != 1:
                x = (x * a) % self.p
                k += 1
            return k
        k = self._log[a]
        from math import gcd
        return (self.q - 1) // gcd(k, self.q - 1)

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.m, self.reduction_polynomial)
                == (other.p, other.m, other.reduction_polynomial))

    def __hash__(self):
        return hash((self.p, self.m, self.reduction_polynomial))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.m})"

    # -- arithmetic on raw ints --

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._pack((-x) % self.p for x in self._unpack(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a %= self.q
        if e < 0:
            a = self.inv(a)
            e = -e
        if self.m == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # -- element wrapper --

    def elem(self, value: int) -> "Fe":
        return Fe(self, value % self.q)

    @property
    def zero(self) -> "Fe":
        return Fe(self, 0)

    @property
    def one(self) -> "Fe":
        return Fe(self, 1)

    def elements(self):
        for v in range(self.q):
            yield Fe(self, v)


class Fe:
    """A field element: canonical value in [0, q) plus its owning field."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        if not 0 <= value < field.q:
            value %= field.q
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, Fe):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.q
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.div(self.value, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else Fe(self.field, self.field.div(v, self.value))

    def __neg__(self):
        return Fe(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Fe(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Fe):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.q))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fe({self.value} in {self.field})"


def arith(a: Fe, b: Fe, op: str) -> Fe:
    """Dispatch form of the binary operators: op in add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


_FIELD_CACHE: dict[int, Field] = {}


def field_new(q: int) -> Field:
    """The field of order q with the canonical reduction polynomial and the
    smallest primitive element under the integer encoding."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    cached = _FIELD_CACHE.get(q)
    if cached is not None:
        return cached
    pm = prime_power(q)
    if pm is None:
        raise NotPrimePower(f"{q} is not a prime power")
    f = Field(*pm)
    _FIELD_CACHE[q] = f
    return f


def rth_root_of_unity(f: Field, r: int) -> Fe:
    """delta = c^((q-1)/r), a primitive r-th root of unity."""
    if r < 1 or (f.q - 1) % r != 0:
        raise OrderNotDivisible(f"{r} does not divide q-1 = {f.q - 1}")
    return f.elem(f.pow(f.primitive, (f.q - 1) // r))
