"""GL_n(q) machinery: exact order arithmetic, constructive Sylow 2-subgroups
and involution censuses.

For odd q the Sylow 2-subgroups are built explicitly:

* n = 2, q = 3 mod 4: generated by the 2-power part `a` of a torus element
  (companion matrix of an irreducible quadratic whose root has full 2-part
  order) together with a torus-inverting element `b` of order 4 satisfying
  b^2 = a^{(q+1)_2} and b a b^{-1} = a^q.  The result has order 4*(q+1)_2.
* even n, q = 3 mod 4: block copies of the 2x2 group wreathed by a Sylow
  2-subgroup of the symmetric group permuting the 2x2 blocks.
* odd n, q = 3 mod 4: the (n-1)-construction times a -1 scalar on the last
  coordinate.
* q = 1 mod 4: the 2-part of the diagonal torus wreathed by a Sylow
  2-subgroup of S_n.

Every construction is checked on the spot against the exact order formula
|GL_n(q)|_2 = prod (q^i - 1)_2.
"""

from dataclasses import dataclass

from .elements import Mat, Perm
from .errors import ResourceLimitError
from .gf import FieldSpec, field_make
from .groups import FiniteGroup, closure
from .partarith import (
    geom_sum,
    gl_order,
    gl_order_two_part,
    part_pow,
    prime_power_decompose,
)
from .report import (
    NOT_APPLICABLE,
    SKIPPED,
    VERIFIED,
    VIOLATED,
    VerificationReport,
    stopwatch,
)


@dataclass(frozen=True)
class GLContext:
    """Ambient GL_n(q) with its exact order and hypothesis flags."""

    n: int
    field: FieldSpec

    @property
    def q(self):
        return self.field.q

    @property
    def p(self):
        return self.field.p

    @property
    def order(self):
        return gl_order(self.n, self.q)

    @property
    def order_two_part(self):
        return gl_order_two_part(self.n, self.q)

    @property
    def p_at_least_7(self):
        return self.p >= 7

    @property
    def p_is_1_mod_3(self):
        return self.p % 3 == 1

    @property
    def q_mod_4(self):
        return self.q % 4

    def hypothesis_ok(self):
        """The standing hypothesis: q = p^a with p >= 7 and p = 1 mod 3."""
        return self.p_at_least_7 and self.p_is_1_mod_3

    def identity(self):
        return Mat.identity_of(self.field, self.n)


def gl_context(n: int, p: int, a: int = 1) -> GLContext:
    if n < 1:
        raise ValueError(f"expected n >= 1, got {n}")
    return GLContext(n, field_make(p, a))


def gl_context_q(n: int, q: int) -> GLContext:
    p, a = prime_power_decompose(q)
    return gl_context(n, p, a)


@dataclass
class SylowTwoDescriptor:
    context: GLContext
    construction: str  # Presentation4q1 | WreathEven | OddSplit | DiagonalWreath
    generators: list
    group: FiniteGroup
    census_total: int
    census_central: int
    presentation: dict | None = None  # for the 2x2 construction

    def __post_init__(self):
        expected = self.context.order_two_part
        if self.group.order != expected:
            raise RuntimeError(
                f"constructed 2-group has order {self.group.order}, "
                f"expected |GL|_2 = {expected}"
            )


def sylow2_symmetric_gens(k: int):
    """Generators of a Sylow 2-subgroup of S_k on {0..k-1}.

    One iterated-wreath tower per dyadic block of the binary decomposition
    of k; the generators of a tower on 2^a points are the swaps of the two
    halves of each prefix block of size 2^l, l = 1..a.
    Returns (generators, block sizes).
    """
    if k < 1:
        raise ValueError(f"expected k >= 1, got {k}")
    gens = []
    blocks = []
    rem = k
    bit = 1 << (k.bit_length() - 1)
    while rem:
        if rem >= bit:
            blocks.append(bit)
            rem -= bit
        bit >>= 1
    offset = 0
    for size in blocks:
        levels = size.bit_length() - 1
        for l in range(1, levels + 1):
            half = 1 << (l - 1)
            img = list(range(k))
            for i in range(half):
                img[offset + i], img[offset + half + i] = (
                    img[offset + half + i],
                    img[offset + i],
                )
            gens.append(Perm(img))
        offset += size
    return gens, blocks


def block_embed(field, n, small, offset):
    """Embed an m x m matrix into the identity n x n at diagonal `offset`."""
    m = small.n
    vals = [0] * (n * n)
    for i in range(n):
        vals[i * n + i] = 1
    for i in range(m):
        for j in range(m):
            vals[(offset + i) * n + (offset + j)] = small.vals[i * m + j]
    return Mat(field, n, vals, _checked=True)


def block_perm_matrix(field, n, perm, bsize):
    """The matrix permuting coordinate blocks of size `bsize` by `perm`;
    coordinates beyond the blocks are fixed."""
    k = perm.degree
    vals = [0] * (n * n)
    for blk in range(k):
        tgt = perm.img[blk]
        for i in range(bsize):
            vals[(tgt * bsize + i) * n + (blk * bsize + i)] = 1
    for i in range(k * bsize, n):
        vals[i * n + i] = 1
    return Mat(field, n, vals, _checked=True)


def _twist_kernel_basis(field, s, s_target):
    """Basis of {X : X s = s_target X} as flat n^2 coefficient vectors."""
    n = s.n
    nn = n * n
    sv, tv = s.vals, s_target.vals
    rows = []
    for i in range(n):
        for j in range(n):
            row = [0] * nn
            for k in range(n):
                row[i * n + k] = field.add_code(row[i * n + k], sv[k * n + j])
                row[k * n + j] = field.sub_code(row[k * n + j], tv[i * n + k])
            rows.append(row)
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    for c in range(nn):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv_code(m[r][c])
        m[r] = [field.mul_code(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.sub_code(v, field.mul_code(f, w)) for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(nn) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * nn
        vec[fc] = 1
        for ri, pc in enumerate(pivots):
            vec[pc] = field.neg_code(m[ri][fc])
        basis.append(vec)
    return basis


def _torus_two_part_generator(field, q):
    """The 2-part `a` of a torus generator of GL_2(q): companion matrix of
    the first (lexicographic) irreducible monic quadratic whose root has
    full 2-part order in F_{q^2}^*, raised to the odd part of q^2 - 1."""
    target = part_pow(q * q - 1, 2)
    odd = (q * q - 1) // target
    for c1 in range(q):
        for c0 in range(q):
            has_root = any(
                field.add_code(
                    field.add_code(field.mul_code(x, x), field.mul_code(c1, x)), c0
                )
                == 0
                for x in range(q)
            )
            if has_root:
                continue
            companion = Mat.from_rows(
                field, [[0, field.neg_code(c0)], [1, field.neg_code(c1)]]
            )
            a = companion**odd
            if a.order() == target:
                return a, (c0, c1)
    raise RuntimeError(f"no quadratic with full 2-part torus order over GF({q})")


def _twist_elements(field, s, s_target):
    """Invertible X with X s X^{-1} = s_target, enumerated deterministically
    over the kernel of X -> X s - s_target X."""
    basis = _twist_kernel_basis(field, s, s_target)
    n = s.n
    nn = n * n
    from itertools import product as iter_product

    for combo in iter_product(range(field.q), repeat=len(basis)):
        if all(u == 0 for u in combo):
            continue
        vec = [0] * nn
        for u, bvec in zip(combo, basis):
            if u:
                for t in range(nn):
                    if bvec[t]:
                        vec[t] = field.add_code(vec[t], field.mul_code(u, bvec[t]))
        try:
            yield Mat(field, n, vec)
        except ValueError:
            continue


def _torus_inverting_element(field, a, q, target_square):
    """An order-4 matrix b with b a b^{-1} = a^q and b^2 = target_square.

    All solutions W of W a = a^q W form a 2-dimensional linear space; it is
    enumerated deterministically and the first invertible W with the right
    square is returned.
    """
    for W in _twist_elements(field, a, a**q):
        if W * W == target_square:
            return W
    raise RuntimeError("no torus-inverting element of order 4 found")


def sylow2_gl2(q: int) -> SylowTwoDescriptor:
    """Sylow 2-subgroup of GL_2(q) for q = 3 mod 4, from the explicit
    two-generator construction; order 4*(q+1)_2."""
    if q % 4 != 3:
        raise ValueError(f"construction requires q = 3 mod 4, got {q}")
    ctx = gl_context_q(2, q)
    field = ctx.field
    a, quadratic = _torus_two_part_generator(field, q)
    t2 = part_pow(q + 1, 2)
    central = a**t2  # the unique involution of the torus 2-part: -identity
    b = _torus_inverting_element(field, a, q, central)
    group = closure([a, b])
    relations = {
        "a_order": a.order(),
        "b_order": b.order(),
        "a^(2(q+1)_2)=1": (a ** (2 * t2)).is_identity(),
        "b^4=1": (b**4).is_identity(),
        "a^((q+1)_2)=b^2": a**t2 == b * b,
        "b^-1*a*b=a^q": (b.inv() * a) * b == a**q,
        "quadratic": quadratic,
    }
    total, central_count = _census(group)
    return SylowTwoDescriptor(
        context=ctx,
        construction="Presentation4q1",
        generators=[a, b],
        group=group,
        census_total=total,
        census_central=central_count,
        presentation=relations,
    )


def _census(group):
    total = 0
    central = 0
    for g in group.elements:
        if not g.is_identity() and (g * g).is_identity():
            total += 1
            if g.is_scalar():
                central += 1
    return total, central


def involution_census(P: FiniteGroup, context: GLContext):
    """(total involutions, involutions scalar in GL_n(q)) of a matrix group."""
    probe = P.identity
    if not isinstance(probe, Mat) or probe.n != context.n or probe.field is not context.field:
        raise ValueError("group shape does not match the GL context")
    return _census(P)


def sylow2_gl(n: int, q: int, cap=None) -> SylowTwoDescriptor:
    """Sylow 2-subgroup of GL_n(q) for odd q, by the block constructions."""
    if q % 2 == 0:
        raise ValueError(f"expected odd q, got {q}")
    if n == 2 and q % 4 == 3:
        return sylow2_gl2(q)
    ctx = gl_context_q(n, q)
    field = ctx.field
    gens = []
    if q % 4 == 3:
        if n == 1:
            gens = [Mat(field, 1, (field.neg_code(1),))]
            construction = "OddSplit"
        else:
            base = sylow2_gl2(q)
            k = n // 2
            perm_gens, blocks = sylow2_symmetric_gens(k) if k > 1 else ([], [1])
            offsets = []
            off = 0
            for size in blocks:
                offsets.append(off)
                off += size
            for o in offsets:
                for g in base.generators:
                    gens.append(block_embed(field, n, g, 2 * o))
            for s in perm_gens:
                gens.append(block_perm_matrix(field, n, s, 2))
            construction = "WreathEven"
            if n % 2 == 1:
                vals = [0] * (n * n)
                for i in range(n):
                    vals[i * n + i] = 1
                vals[(n - 1) * n + (n - 1)] = field.neg_code(1)
                gens.append(Mat(field, n, vals, _checked=True))
                construction = "OddSplit"
    else:
        t2 = part_pow(q - 1, 2)
        zeta = field.pow_code(field.generator, (q - 1) // t2)
        perm_gens, blocks = sylow2_symmetric_gens(n) if n > 1 else ([], [1])
        offsets = []
        off = 0
        for size in blocks:
            offsets.append(off)
            off += size
        for o in offsets:
            vals = [0] * (n * n)
            for i in range(n):
                vals[i * n + i] = 1
            vals[o * n + o] = zeta
            gens.append(Mat(field, n, vals, _checked=True))
        for s in perm_gens:
            gens.append(block_perm_matrix(field, n, s, 1))
        construction = "DiagonalWreath"
    group = closure(gens) if cap is None else closure(gens, cap=cap)
    total, central = _census(group)
    return SylowTwoDescriptor(
        context=ctx,
        construction=construction,
        generators=gens,
        group=group,
        census_total=total,
        census_central=central,
    )


def wreath_involution_count(base_involutions: int, base_order: int) -> int:
    """Involution count of (base wreath C_2): pairs of order-at-most-2
    components for the trivial top, plus one inverse-pair family per base
    element for the swapping top."""
    return (base_involutions + 1) ** 2 - 1 + base_order


def _statement_conditions(statement, n, q):
    if statement == 1:
        return q % 4 == 3 and q > 7 and n > 2 and (q, n) != (31, 4)
    if statement == 2:
        return (q, n) == (31, 4)
    if statement == 3:
        return q % 4 == 3 and n == 2
    if statement == 4:
        return q == 7 and n > 2
    if statement == 5:
        return q % 4 == 1 and n >= 2
    raise ValueError(f"unknown statement {statement}")


def verify_sylowtwoingln(statement: int, n: int, q: int, cap=None) -> VerificationReport:
    """Check one of the five Sylow-2 size/census bounds for GL_n(q)."""
    lemma_id = f"sylow2-gl.{statement}"
    params = {"statement": statement, "n": n, "q": q}
    with stopwatch() as clock:
        try:
            ctx = gl_context_q(n, q)
        except ValueError as exc:
            return VerificationReport(lemma_id, params, NOT_APPLICABLE, counts={}, witness=None)
        if not ctx.hypothesis_ok() or not _statement_conditions(statement, n, q):
            return VerificationReport(
                lemma_id,
                params,
                NOT_APPLICABLE,
                counts={
                    "hypothesis_ok": int(ctx.hypothesis_ok()),
                    "side_conditions_ok": int(_statement_conditions(statement, n, q)),
                },
            )
        bound = geom_sum(q, n)
        counts = {"bound": bound}
        try:
            if statement == 1:
                size = gl_order_two_part(n, q)
                counts["sylow2_order"] = size
                ok = size < bound
                witness = None if ok else {"sylow2_order": size, "bound": bound}
            elif statement == 2:
                desc = sylow2_gl(n, q, cap=cap)
                base = sylow2_gl2(q)
                formula = wreath_involution_count(base.census_total, base.group.order)
                crude = 2 * (base.census_total + 1) ** 2
                counts.update(
                    {
                        "sylow2_order": desc.group.order,
                        "involutions": desc.census_total,
                        "central_involutions": desc.census_central,
                        "wreath_formula": formula,
                        "crude_wreath_bound": crude,
                    }
                )
                ok = desc.census_total < bound and formula == desc.census_total
                witness = None if ok else {"involutions": desc.census_total, "bound": bound}
            elif statement == 3:
                desc = sylow2_gl2(q)
                rel = desc.presentation
                counts.update(
                    {
                        "sylow2_order": desc.group.order,
                        "involutions": desc.census_total,
                        "central_involutions": desc.census_central,
                        "non_central": desc.census_total - desc.census_central,
                        "total_bound": q + 2,
                        "non_central_bound": q + 1,
                    }
                )
                relations_ok = (
                    rel["a^(2(q+1)_2)=1"]
                    and rel["b^4=1"]
                    and rel["a^((q+1)_2)=b^2"]
                    and rel["b^-1*a*b=a^q"]
                )
                counts["relations_ok"] = int(relations_ok)
                params["conjugation_relation"] = "b^-1*a*b = a^q"
                ok = (
                    desc.census_total <= q + 2
                    and desc.census_total - desc.census_central <= q + 1
                    and relations_ok
                )
                witness = None if ok else {"census": desc.census_total}
            else:  # statements 4 and 5: census against the geometric-sum bound
                desc = sylow2_gl(n, q, cap=cap)
                counts.update(
                    {
                        "sylow2_order": desc.group.order,
                        "involutions": desc.census_total,
                        "central_involutions": desc.census_central,
                    }
                )
                ok = desc.census_total < bound
                witness = None if ok else {"involutions": desc.census_total, "bound": bound}
        except ResourceLimitError as exc:
            return VerificationReport(
                lemma_id,
                params,
                SKIPPED,
                counts={"partial": exc.partial or 0},
                elapsed_ms=clock.get("elapsed_ms", 0),
            )
    return VerificationReport(
        lemma_id,
        params,
        VERIFIED if ok else VIOLATED,
        counts=counts,
        witness=witness,
        elapsed_ms=clock["elapsed_ms"],
    )


# -- structured subgroups used by the sampled bound campaigns ----------------


def borel_subgroup(ctx: GLContext, cap=None) -> FiniteGroup:
    """Upper-triangular invertible matrices: diagonal torus generators plus
    the superdiagonal transvections."""
    field, n = ctx.field, ctx.n
    gens = []
    zeta = field.generator if field.q > 2 else 1
    for i in range(n):
        vals = [0] * (n * n)
        for d in range(n):
            vals[d * n + d] = 1
        vals[i * n + i] = zeta
        gens.append(Mat(field, n, vals, _checked=True))
    for i in range(n - 1):
        vals = [0] * (n * n)
        for d in range(n):
            vals[d * n + d] = 1
        vals[i * n + (i + 1)] = 1
        gens.append(Mat(field, n, vals, _checked=True))
    group = closure(gens) if cap is None else closure(gens, cap=cap)
    expected = field.q ** (n * (n - 1) // 2) * (field.q - 1) ** n
    if group.order != expected:
        raise RuntimeError(f"Borel subgroup has order {group.order}, expected {expected}")
    return group


def monomial_subgroup(ctx: GLContext, cap=None) -> FiniteGroup:
    """Monomial matrices: the diagonal torus extended by the permutation
    matrices of S_n."""
    field, n = ctx.field, ctx.n
    gens = []
    zeta = field.generator
    for i in range(n):
        vals = [0] * (n * n)
        for d in range(n):
            vals[d * n + d] = 1
        vals[i * n + i] = zeta
        gens.append(Mat(field, n, vals, _checked=True))
    if n > 1:
        gens.append(block_perm_matrix(field, n, Perm.from_cycles(n, (0, 1)), 1))
        gens.append(block_perm_matrix(field, n, Perm.from_cycles(n, tuple(range(n))), 1))
    return closure(gens) if cap is None else closure(gens, cap=cap)


def singer_element(ctx: GLContext) -> Mat:
    """A cyclic torus generator of order q^n - 1: the companion matrix of
    the first primitive monic polynomial of degree n."""
    from itertools import product as iter_product

    from .partarith import factorize

    field, n = ctx.field, ctx.n
    q = field.q
    full = q**n - 1
    prime_divs = list(factorize(full))
    ident = Mat.identity_of(field, n)
    for coeffs in iter_product(range(q), repeat=n):
        # polynomial x^n + c_{n-1} x^{n-1} + ... + c_0 with digits ordered
        # most-significant first
        c = tuple(reversed(coeffs))
        if c[0] == 0:
            continue  # x divides it
        vals = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                vals[i][j] = 1 if j == i - 1 else 0
            vals[i][n - 1] = field.neg_code(c[i])
        try:
            companion = Mat.from_rows(field, vals)
        except ValueError:
            continue
        if companion**full != ident:
            continue
        if all(companion ** (full // r) != ident for r in prime_divs):
            return companion
    raise RuntimeError(f"no primitive polynomial of degree {n} over GF({q})")


def singer_normalizer(ctx: GLContext, cap=None) -> FiniteGroup:
    """The Singer torus extended by a twist conjugating it to its q-th
    power; order n (q^n - 1)."""
    s = singer_element(ctx)
    field = ctx.field
    twist = next(iter(_twist_elements(field, s, s**field.q)), None)
    if twist is None:
        raise RuntimeError("no invertible Singer twist found")
    group = closure([s, twist]) if cap is None else closure([s, twist], cap=cap)
    return group


def random_invertible(ctx: GLContext, rng) -> Mat:
    """A uniformly sampled invertible matrix (rejection on singularity)."""
    field, n = ctx.field, ctx.n
    while True:
        vals = tuple(rng.randrange(field.q) for _ in range(n * n))
        try:
            return Mat(field, n, vals)
        except ValueError:
            continue


CENSUS_CSV_HEADER = "n,q,construction,order,involutions,central,bound,verdict"


def census_csv_row(desc: SylowTwoDescriptor) -> str:
    n, q = desc.context.n, desc.context.q
    # the applicable census bound: q+2 in the 2x2 torus case, the
    # geometric sum otherwise
    if n == 2 and q % 4 == 3:
        bound = q + 2
        within = desc.census_total <= bound
    else:
        bound = geom_sum(q, n)
        within = desc.census_total < bound
    verdict = "within-bound" if within else "exceeds-bound"
    return (
        f"{n},{q},{desc.construction},"
        f"{desc.group.order},{desc.census_total},{desc.census_central},"
        f"{bound},{verdict}"
    )
