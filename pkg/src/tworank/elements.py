"""Group element variants: permutations, matrices, tuples and wreath pairs.

All elements are immutable values with structural equality and hashing, so
closure sets can be shared read-only.  Every variant implements ``*``,
``inv()``, ``identity()``, ``is_identity()``, ``order()`` and a ``key()``
usable for deterministic sorting.  Elements of different shapes never
compare equal and refuse to multiply.
"""

class GroupElement:
    """Common behaviour; concrete variants implement the arithmetic."""

    __slots__ = ()

    def order(self):
        n = 1
        x = self
        while not x.is_identity():
            x = x * self
            n += 1
        return n

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        result = self.identity()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self, g):
        """g * self * g^{-1}."""
        return g * self * g.inv()

    def __ne__(self, other):
        return not self.__eq__(other)


class Perm(GroupElement):
    """A permutation of {0, ..., n-1} given by its image tuple.

    Composition is function composition: (p * q)(i) = p(q(i)).
    """

    __slots__ = ("img", "_hash")

    def __init__(self, img):
        img = tuple(img)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {img}")
        self.img = img
        self._hash = hash(("perm", img))

    @classmethod
    def identity_of(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n, *cycles):
        img = list(range(n))
        for cycle in cycles:
            m = len(cycle)
            for i in range(m):
                img[cycle[i]] = cycle[(i + 1) % m]
        return cls(img)

    @property
    def degree(self):
        return len(self.img)

    def __call__(self, i):
        return self.img[i]

    def __mul__(self, other):
        if not isinstance(other, Perm) or len(other.img) != len(self.img):
            raise ValueError("cannot compose permutations of different shapes")
        s = self.img
        return Perm(s[j] for j in other.img)

    def inv(self):
        img = self.img
        out = [0] * len(img)
        for i, j in enumerate(img):
            out[j] = i
        return Perm(out)

    def identity(self):
        return Perm(range(len(self.img)))

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.img))

    def cycles(self):
        seen = set()
        out = []
        for i in range(len(self.img)):
            if i in seen or self.img[i] == i:
                continue
            cycle = [i]
            j = self.img[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.img[j]
            out.append(tuple(cycle))
        return out

    def key(self):
        return ("perm", self.img)

    def __eq__(self, other):
        return isinstance(other, Perm) and other.img == self.img

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


class Mat(GroupElement):
    """An invertible n x n matrix over a FieldSpec, stored as a flat
    row-major tuple of field codes."""

    __slots__ = ("field", "n", "vals", "_hash")

    def __init__(self, field, n, vals, _checked=False):
        self.field = field
        self.n = n
        self.vals = vals = tuple(vals)
        if len(vals) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(vals)}")
        self._hash = hash(("mat", field.q, n, vals))
        if not _checked and self.det() == 0:
            raise ValueError("matrix is singular")

    @classmethod
    def from_rows(cls, field, rows):
        n = len(rows)
        flat = []
        for row in rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
            flat.extend(row)
        return cls(field, n, flat)

    @classmethod
    def identity_of(cls, field, n):
        vals = [0] * (n * n)
        for i in range(n):
            vals[i * n + i] = 1
        return cls(field, n, vals, _checked=True)

    @classmethod
    def scalar(cls, field, n, code):
        vals = [0] * (n * n)
        for i in range(n):
            vals[i * n + i] = code
        return cls(field, n, vals)

    def rows(self):
        n = self.n
        return tuple(self.vals[i * n : (i + 1) * n] for i in range(n))

    def __mul__(self, other):
        if not isinstance(other, Mat) or other.n != self.n:
            raise ValueError("cannot multiply matrices of different shapes")
        F = self.field
        if other.field is not F:
            raise ValueError(f"mixed fields: {F} and {other.field}")
        n = self.n
        A, B = self.vals, other.vals
        if F.a == 1:
            p = F.p
            if n == 2:
                a, b, c, d = A
                e, f, g, h = B
                vals = (
                    (a * e + b * g) % p,
                    (a * f + b * h) % p,
                    (c * e + d * g) % p,
                    (c * f + d * h) % p,
                )
            else:
                vals = tuple(
                    sum(A[i * n + k] * B[k * n + j] for k in range(n)) % p
                    for i in range(n)
                    for j in range(n)
                )
        else:
            mul, add = F.mul_code, F.add_code
            out = []
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for k in range(n):
                        acc = add(acc, mul(A[i * n + k], B[k * n + j]))
                    out.append(acc)
            vals = tuple(out)
        return Mat(self.field, n, vals, _checked=True)

    def det(self):
        # Gaussian elimination over the field; returns a field code
        F, n = self.field, self.n
        m = [list(self.vals[i * n : (i + 1) * n]) for i in range(n)]
        det = 1
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                return 0
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = F.neg_code(det)
            det = F.mul_code(det, m[col][col])
            inv_p = F.inv_code(m[col][col])
            for r in range(col + 1, n):
                if m[r][col] != 0:
                    factor = F.mul_code(m[r][col], inv_p)
                    for c in range(col, n):
                        m[r][c] = F.sub_code(m[r][c], F.mul_code(factor, m[col][c]))
        return det

    def inv(self):
        F, n = self.field, self.n
        m = [list(self.vals[i * n : (i + 1) * n]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
            inv_p = F.inv_code(m[col][col])
            m[col] = [F.mul_code(inv_p, c) for c in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    factor = m[r][col]
                    m[r] = [F.sub_code(c, F.mul_code(factor, d)) for c, d in zip(m[r], m[col])]
        vals = []
        for i in range(n):
            vals.extend(m[i][n:])
        return Mat(F, n, vals, _checked=True)

    def identity(self):
        return Mat.identity_of(self.field, self.n)

    def is_identity(self):
        n = self.n
        return all(self.vals[i * n + j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def is_scalar(self):
        n, vals = self.n, self.vals
        c = vals[0]
        return all(vals[i * n + j] == (c if i == j else 0) for i in range(n) for j in range(n))

    def frobenius_entrywise(self):
        F = self.field
        return Mat(F, self.n, tuple(F.frob_code(v) for v in self.vals), _checked=True)

    def key(self):
        return ("mat", self.field.q, self.n, self.vals)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and other.field is self.field
            and other.n == self.n
            and other.vals == self.vals
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Mat{self.rows()}@GF({self.field.q})"


class DirectTuple(GroupElement):
    """An element of a direct product: an ordered tuple of components."""

    __slots__ = ("parts", "_hash")

    def __init__(self, parts):
        self.parts = parts = tuple(parts)
        self._hash = hash(("tuple", parts))

    def __mul__(self, other):
        if not isinstance(other, DirectTuple) or len(other.parts) != len(self.parts):
            raise ValueError("cannot multiply tuples of different shapes")
        return DirectTuple(tuple(a * b for a, b in zip(self.parts, other.parts)))

    def inv(self):
        return DirectTuple(tuple(a.inv() for a in self.parts))

    def identity(self):
        return DirectTuple(tuple(a.identity() for a in self.parts))

    def is_identity(self):
        return all(a.is_identity() for a in self.parts)

    def project(self, start, stop=None):
        """The sub-tuple of components [start:stop]; a single component if
        stop is None and the slice has length one."""
        parts = self.parts[start:stop]
        return DirectTuple(parts)

    def key(self):
        return ("tuple", tuple(a.key() for a in self.parts))

    def __eq__(self, other):
        return isinstance(other, DirectTuple) and other.parts == self.parts

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "(" + ", ".join(repr(a) for a in self.parts) + ")"


class WreathElem(GroupElement):
    """A wreath product element (base; top): a tuple of k base components
    and a top permutation of the k coordinates.

    Product: (m; h)(m'; h') = (m * h(m'); h h') where h acts on base tuples
    by (h(m))_i = m_{h^{-1}(i)}.
    """

    __slots__ = ("base", "top", "_hash")

    def __init__(self, base, top):
        self.base = base = tuple(base)
        if not isinstance(top, Perm) or top.degree != len(base):
            raise ValueError("top permutation degree must match base length")
        self.top = top
        self._hash = hash(("wreath", base, top.img))

    def __mul__(self, other):
        if not isinstance(other, WreathElem) or len(other.base) != len(self.base):
            raise ValueError("cannot multiply wreath elements of different shapes")
        h = self.top
        hinv_img = h.inv().img
        moved = tuple(other.base[hinv_img[i]] for i in range(len(self.base)))
        return WreathElem(
            tuple(a * b for a, b in zip(self.base, moved)), h * other.top
        )

    def inv(self):
        hinv = self.top.inv()
        inv_parts = tuple(a.inv() for a in self.base)
        # (m; h)^{-1} = (h^{-1}(m^{-1}); h^{-1})
        moved = tuple(inv_parts[self.top.img[i]] for i in range(len(self.base)))
        return WreathElem(moved, hinv)

    def identity(self):
        return WreathElem(
            tuple(a.identity() for a in self.base), self.top.identity()
        )

    def is_identity(self):
        return self.top.is_identity() and all(a.is_identity() for a in self.base)

    def key(self):
        return ("wreath", tuple(a.key() for a in self.base), self.top.img)

    def __eq__(self, other):
        return (
            isinstance(other, WreathElem)
            and other.base == self.base
            and other.top == self.top
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"[{', '.join(repr(a) for a in self.base)}; {self.top!r}]"


def same_shape(x, y):
    """True when x and y live in the same variant family and can multiply."""
    if type(x) is not type(y):
        return False
    try:
        x * y
    except (ValueError, TypeError):
        return False
    return True
