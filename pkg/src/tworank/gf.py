"""Finite field arithmetic GF(p^a) for odd p.

Field elements are stored as integer codes: the element with coefficient
vector (c_0, ..., c_{a-1}) over GF(p) gets code c_0 + c_1*p + ... +
c_{a-1}*p^{a-1}.  Matrix entries elsewhere in the package are raw codes and
go through the FieldSpec code-level operations; FieldElem is a thin wrapper
for callers who want operator syntax.

The modulus is the lexicographically smallest monic irreducible polynomial
of the requested degree (high-degree coefficients compared first), so field
construction is deterministic across runs.  Cross-field operations are hard
errors, never coercions.
"""

from functools import lru_cache

from .errors import ResourceLimitError
from .partarith import factorize, is_prime

FIELD_SIZE_CAP = 1 << 20
_TABLE_CAP = 1 << 16  # below this, multiplication runs on exp/log tables


def _poly_trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _poly_mulmod(u, v, modulus, p):
    """(u * v) mod modulus over GF(p); vectors are little-endian coeff lists."""
    if not u or not v:
        return []
    out = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                out[i + j] = (out[i + j] + ui * vj) % p
    return _poly_modred(out, modulus, p)


def _poly_modred(u, modulus, p):
    """Reduce u modulo the monic polynomial `modulus` over GF(p)."""
    u = list(u)
    deg_m = len(modulus) - 1
    for i in range(len(u) - 1, deg_m - 1, -1):
        c = u[i] % p
        if c:
            for j in range(deg_m + 1):
                u[i - deg_m + j] = (u[i - deg_m + j] - c * modulus[j]) % p
        u[i] = 0
    return _poly_trim(u[:deg_m])


def _poly_powmod(u, e, modulus, p):
    result = [1]
    base = _poly_modred(u, modulus, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _poly_gcd(u, v, p):
    u, v = list(u), list(v)
    while v:
        # u mod v with v made monic
        inv_lead = pow(v[-1], p - 2, p)
        vm = [(c * inv_lead) % p for c in v]
        u = _poly_trim([c % p for c in _poly_rem(u, vm, p)])
        u, v = v, u
    return u


def _poly_rem(u, v, p):
    u = list(u)
    dv = len(v) - 1
    while len(u) - 1 >= dv and u:
        c = u[-1]
        if c:
            shift = len(u) - 1 - dv
            for j in range(dv + 1):
                u[shift + j] = (u[shift + j] - c * v[j]) % p
        u.pop()
    return u


def _is_irreducible(coeffs, p, a):
    """Irreducibility of a monic degree-a polynomial over GF(p).

    Degree 2 and 3 reduce to a root scan; higher degrees use the standard
    x^{p^a} = x test together with gcd checks at the maximal subfield levels.
    """
    if a == 1:
        return True
    if a <= 3:
        return all(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p != 0 for x in range(p)
        )
    x = [0, 1]
    if _poly_trim(list(_poly_powmod(x, p**a, coeffs, p))) != x:
        return False
    for r in factorize(a):
        u = _poly_powmod(x, p ** (a // r), coeffs, p)
        diff = list(u) + [0] * (2 - len(u))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(_poly_trim(diff), list(coeffs), p)
        if len(g) - 1 != 0:
            return False
    return True


def _smallest_irreducible(p, a):
    """Lexicographically smallest monic irreducible of degree a over GF(p).

    Candidates x^a + c_{a-1}x^{a-1} + ... + c_0 are ordered by the tuple
    (c_{a-1}, ..., c_0), i.e. by k = sum c_i p^i read with c_{a-1} most
    significant.
    """
    if a == 1:
        return (0, 1)  # the polynomial x
    for k in range(p**a):
        digits = []
        kk = k
        for _ in range(a):
            digits.append(kk % p)
            kk //= p
        coeffs = tuple(reversed(digits)) + (1,)  # (c_0, ..., c_{a-1}, 1)
        if _is_irreducible(coeffs, p, a):
            return coeffs
    raise RuntimeError(f"no irreducible polynomial of degree {a} over GF({p})")


class FieldSpec:
    """GF(p^a) with code-level arithmetic. Immutable after construction."""

    def __init__(self, p, a, _token=None):
        if _token is not _FIELD_TOKEN:
            raise ValueError("use field_make(p, a), not the constructor")
        self.p = p
        self.a = a
        self.q = p**a
        self.modulus = _smallest_irreducible(p, a)
        self._powers = tuple(p**i for i in range(a))
        self._decode = None
        self._log = None
        self._exp = None
        self._frob = None
        if self.q <= _TABLE_CAP:
            self._build_tables()

    # -- construction helpers -------------------------------------------

    def _build_tables(self):
        p, a, q = self.p, self.a, self.q
        decode = []
        for c in range(q):
            cc = c
            digits = []
            for _ in range(a):
                digits.append(cc % p)
                cc //= p
            decode.append(tuple(digits))
        self._decode = tuple(decode)
        gen = self._find_generator()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            exp[i + q - 1] = acc
            log[acc] = i
            acc = self._mul_generic(acc, gen)
        if acc != 1:
            raise RuntimeError("generator order check failed")
        self._exp = exp
        self._log = log
        self.generator = gen
        self._frob = tuple(self.pow_code(c, p) for c in range(q))

    def _find_generator(self):
        # smallest code of full multiplicative order; existence certifies
        # cyclicity of the unit group
        q1 = self.q - 1
        prime_divs = list(factorize(q1))
        for c in range(1, self.q):
            if all(self._pow_generic(c, q1 // r) != 1 for r in prime_divs):
                if self._pow_generic(c, q1) != 1:
                    raise RuntimeError("unit group order check failed")
                return c
        raise RuntimeError(f"GF({self.q}) unit group is not cyclic")

    # -- code arithmetic -------------------------------------------------

    def decode(self, c):
        if self._decode is not None:
            return self._decode[c]
        digits = []
        for _ in range(self.a):
            digits.append(c % self.p)
            c //= self.p
        return tuple(digits)

    def encode(self, coeffs):
        return sum(c % self.p * w for c, w in zip(coeffs, self._powers))

    def add_code(self, x, y):
        if self.a == 1:
            return (x + y) % self.p
        dx, dy = self.decode(x), self.decode(y)
        p = self.p
        return self.encode(tuple((u + v) % p for u, v in zip(dx, dy)))

    def neg_code(self, x):
        if self.a == 1:
            return (-x) % self.p
        p = self.p
        return self.encode(tuple((-u) % p for u in self.decode(x)))

    def sub_code(self, x, y):
        return self.add_code(x, self.neg_code(y))

    def _mul_generic(self, x, y):
        if self.a == 1:
            return (x * y) % self.p
        prod = _poly_mulmod(list(self.decode(x)), list(self.decode(y)), list(self.modulus), self.p)
        return self.encode(tuple(prod) + (0,) * (self.a - len(prod)))

    def mul_code(self, x, y):
        if self.a == 1:
            return (x * y) % self.p
        if self._log is not None:
            if x == 0 or y == 0:
                return 0
            return self._exp[self._log[x] + self._log[y]]
        return self._mul_generic(x, y)

    def _pow_generic(self, x, e):
        result = 1
        base = x
        while e:
            if e & 1:
                result = self._mul_generic(result, base)
            base = self._mul_generic(base, base)
            e >>= 1
        return result

    def pow_code(self, x, e):
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        e %= self.q - 1
        if self._log is not None:
            return self._exp[self._log[x] * e % (self.q - 1)]
        return self._pow_generic(x, e)

    def inv_code(self, x):
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        if self.a == 1:
            return pow(x, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1) - self._log[x]]
        return self._pow_generic(x, self.q - 2)

    def frob_code(self, x):
        """x^p, the absolute Frobenius."""
        if self.a == 1:
            return x
        if self._frob is not None:
            return self._frob[x]
        return self.pow_code(x, self.p)

    def mult_order(self, x):
        if x == 0:
            raise ValueError("0 has no multiplicative order")
        order = self.q - 1
        for r in factorize(order):
            while order % r == 0 and self.pow_code(x, order // r) == 1:
                order //= r
        return order

    # -- element-level API -----------------------------------------------

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def element(self, code):
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for GF({self.q})")
        return FieldElem(self, code)

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.a:
            raise ValueError(f"expected {self.a} coefficients")
        return FieldElem(self, self.encode(coeffs))

    def elements(self):
        return (FieldElem(self, c) for c in range(self.q))

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (field_make, (self.p, self.a))


class FieldElem:
    """An element of a FieldSpec; value-like, hashable, operator-friendly."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def _check(self, other):
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError(f"mixed fields: {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.add_code(self.code, other.code))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.sub_code(self.code, other.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_code(self.code))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.mul_code(self.code, other.code))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.mul_code(self.code, self.field.inv_code(other.code)))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow_code(self.code, e))

    def inv(self):
        return FieldElem(self.field, self.field.inv_code(self.code))

    def frobenius(self):
        return FieldElem(self.field, self.field.frob_code(self.code))

    def mult_order(self):
        return self.field.mult_order(self.code)

    @property
    def coeffs(self):
        return self.field.decode(self.code)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and other.field is self.field
            and other.code == self.code
        )

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __repr__(self):
        return f"{self.field}:{self.code}"


_FIELD_TOKEN = object()


@lru_cache(maxsize=None)
def _field_cached(p, a):
    return FieldSpec(p, a, _token=_FIELD_TOKEN)


def field_make(p: int, a: int = 1) -> FieldSpec:
    """Construct (and intern) GF(p^a) for odd prime p, p^a <= 2^20.

    Interning guarantees one FieldSpec instance per (p, a), so identity
    checks between elements of "the same" field are reliable.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    if a < 1:
        raise ValueError(f"expected degree >= 1, got {a}")
    if p**a > FIELD_SIZE_CAP:
        raise ResourceLimitError(f"field size {p**a} exceeds cap {FIELD_SIZE_CAP}")
    return _field_cached(p, int(a))


def frobenius(x: FieldElem) -> FieldElem:
    """x^p. Applying it `a` times is the identity on GF(p^a)."""
    return x.frobenius()
