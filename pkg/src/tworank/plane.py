"""Projective planes, collineations, Baer involutions and the fixed-point
counting checks.

Planes are the Desarguesian PG(2, q): points are canonical projective
triples over GF(q) (first nonzero coordinate 1), lines the dual triples,
incidence the zero dot product.  Collineation groups are built from
explicit generators (matrix-induced maps plus field automorphisms); the
conjugacy-class and orbit computations deliberately avoid materializing
the full group, so point-transitive groups far above the element cap can
still be checked.
"""

from collections import deque
from dataclasses import dataclass, field as dc_field
from math import isqrt

from .elements import Mat, Perm
from .errors import ResourceLimitError
from .gf import field_make
from .groups import FiniteGroup, closure
from .partarith import prime_power_decompose
from .report import (
    NOT_APPLICABLE,
    SKIPPED,
    VERIFIED,
    VIOLATED,
    VerificationReport,
    stopwatch,
)

PLANE_EXHAUSTIVE_AXIOM_CAP = 16
DEFAULT_CLASS_CAP = 500_000
DEFAULT_GROUP_CAP = 200_000


class IncidencePlane:
    """PG(2, q): q^2+q+1 points and lines, q+1 points per line."""

    def __init__(self, field):
        self.field = field
        q = field.q
        self.order = q
        triples = []
        for y in range(q):
            for z in range(q):
                triples.append((1, y, z))
        for z in range(q):
            triples.append((0, 1, z))
        triples.append((0, 0, 1))
        self.points = tuple(triples)
        self.lines = tuple(triples)
        self.point_index = {p: i for i, p in enumerate(self.points)}
        add, mul = field.add_code, field.mul_code
        on_line = []
        for a, b, c in self.lines:
            pts = frozenset(
                i
                for i, (x, y, z) in enumerate(self.points)
                if add(add(mul(a, x), mul(b, y)), mul(c, z)) == 0
            )
            on_line.append(pts)
        self.points_on_line = tuple(on_line)
        self.line_index_by_set = {pts: i for i, pts in enumerate(on_line)}
        through = [[] for _ in self.points]
        for li, pts in enumerate(on_line):
            for pi in pts:
                through[pi].append(li)
        self.lines_through_point = tuple(tuple(ls) for ls in through)
        self._verify_axioms()

    @property
    def num_points(self):
        return len(self.points)

    def _verify_axioms(self):
        q = self.order
        n = self.num_points
        if n != q * q + q + 1:
            raise RuntimeError(f"point count {n} is not q^2+q+1")
        for pts in self.points_on_line:
            if len(pts) != q + 1:
                raise RuntimeError("line does not carry q+1 points")
        for ls in self.lines_through_point:
            if len(ls) != q + 1:
                raise RuntimeError("point does not lie on q+1 lines")
        if q <= PLANE_EXHAUSTIVE_AXIOM_CAP:
            for i in range(n):
                for j in range(i + 1, n):
                    common = [
                        li for li in self.lines_through_point[i]
                        if j in self.points_on_line[li]
                    ]
                    if len(common) != 1:
                        raise RuntimeError("two points do not span a unique line")

    def normalize(self, vec):
        """Scale a nonzero coordinate triple to its canonical representative."""
        F = self.field
        for c in vec:
            if c != 0:
                if c == 1:
                    return tuple(vec)
                inv = F.inv_code(c)
                return tuple(F.mul_code(inv, x) for x in vec)
        raise ValueError("zero vector does not define a point")

    def line_perm_from_point_perm(self, point_perm):
        """The induced line permutation; raises if incidence is broken."""
        img = [0] * len(self.lines)
        for li, pts in enumerate(self.points_on_line):
            mapped = frozenset(point_perm.img[p] for p in pts)
            target = self.line_index_by_set.get(mapped)
            if target is None:
                raise ValueError("point permutation does not preserve incidence")
            img[li] = target
        return Perm(img)

    def to_json_dict(self):
        return {
            "order": self.order,
            "num_points": self.num_points,
            "points": [list(p) for p in self.points],
            "lines": [sorted(s) for s in self.points_on_line],
        }

    def incidence_csv(self):
        rows = []
        for pts in self.points_on_line:
            rows.append(",".join("1" if i in pts else "0" for i in range(self.num_points)))
        return "\n".join(rows)


def pg2(q: int) -> IncidencePlane:
    p, a = prime_power_decompose(q)
    return IncidencePlane(field_make(p, a))


class Collineation:
    """A line-preserving point permutation of a plane."""

    def __init__(self, plane, point_perm):
        self.plane = plane
        self.point_perm = point_perm
        self.line_perm = plane.line_perm_from_point_perm(point_perm)

    @classmethod
    def from_matrix(cls, plane, mat, frob_power=0):
        """The semilinear map v -> M * v^(p^frob_power) on canonical points."""
        F = plane.field
        if mat.field is not F or mat.n != 3:
            raise ValueError("matrix must be 3x3 over the plane's field")
        img = []
        vals = mat.vals
        for pt in plane.points:
            v = pt
            for _ in range(frob_power % F.a):
                v = tuple(F.frob_code(c) for c in v)
            w = []
            for i in range(3):
                acc = 0
                for j in range(3):
                    acc = F.add_code(acc, F.mul_code(vals[i * 3 + j], v[j]))
                w.append(acc)
            img.append(plane.point_index[plane.normalize(w)])
        return cls(plane, Perm(img))

    def fixed_points(self):
        return tuple(i for i, j in enumerate(self.point_perm.img) if i == j)

    def fixed_lines(self):
        return tuple(i for i, j in enumerate(self.line_perm.img) if i == j)

    def order(self):
        return self.point_perm.order()

    def __mul__(self, other):
        if other.plane is not self.plane:
            raise ValueError("collineations of different planes")
        return Collineation(self.plane, self.point_perm * other.point_perm)

    def inv(self):
        return Collineation(self.plane, self.point_perm.inv())

    def __eq__(self, other):
        return isinstance(other, Collineation) and self.plane is other.plane and self.point_perm == other.point_perm

    def __hash__(self):
        return hash(("coll", id(self.plane), self.point_perm.img))

    def __repr__(self):
        return f"Collineation({self.point_perm!r})"


def frobenius_collineation(plane: IncidencePlane) -> Collineation:
    """The coordinatewise u-th power map on PG(2, u^2); an involution whose
    fixed points form a subplane of order u."""
    F = plane.field
    if F.a % 2:
        raise ValueError(f"plane order {plane.order} is not a square")
    half = F.a // 2
    img = []
    for pt in plane.points:
        v = pt
        for _ in range(half):
            v = tuple(F.frob_code(c) for c in v)
        img.append(plane.point_index[v])
    return Collineation(plane, Perm(img))


@dataclass
class FixedStructure:
    num_points: int
    num_lines: int
    subplane_order: int | None
    spectrum: str  # for square plane order x = u^2: u2+u+1 | u2+1 | u2+2 | other | below-u2
    fixed_points: tuple = dc_field(default=(), repr=False)


def _subplane_order(plane, point_set):
    """The order u if the point set carries a subplane (with its induced
    lines), else None.  Checked directly against the plane axioms."""
    m = len(point_set)
    if m < 7:
        return None
    u = None
    for cand in range(2, isqrt(m) + 1):
        if cand * cand + cand + 1 == m:
            u = cand
            break
    if u is None:
        return None
    pts = set(point_set)
    restricted = {}
    for li, on in enumerate(plane.points_on_line):
        meet = on & pts
        if len(meet) >= 2:
            restricted[li] = meet
    if len(restricted) != m:
        return None
    if any(len(meet) != u + 1 for meet in restricted.values()):
        return None
    per_point = {p: 0 for p in pts}
    for meet in restricted.values():
        for p in meet:
            per_point[p] += 1
    if any(c != u + 1 for c in per_point.values()):
        return None
    lines = list(restricted.values())
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if len(lines[i] & lines[j]) != 1:
                return None
    return u


def fixed_structure(g: Collineation) -> FixedStructure:
    plane = g.plane
    fp = g.fixed_points()
    fl = g.fixed_lines()
    sub = _subplane_order(plane, fp)
    x = plane.order
    u = isqrt(x)
    if u * u != x:
        spectrum = "other"
    elif len(fp) < u * u:
        spectrum = "below-u2"
    elif len(fp) == u * u + u + 1:
        spectrum = "u2+u+1"
    elif len(fp) == u * u + 1:
        spectrum = "u2+1"
    elif len(fp) == u * u + 2:
        spectrum = "u2+2"
    else:
        spectrum = "other"
    return FixedStructure(len(fp), len(fl), sub, spectrum, fp)


class PlaneGroup:
    """A collineation group given by generators.

    Orbit and conjugacy-class computations run straight off the generators;
    the full element set is only materialized on demand (and under a cap),
    so groups the size of the full collineation group remain usable for
    class-based checks.
    """

    def __init__(self, plane, collineations, cap=DEFAULT_GROUP_CAP):
        self.plane = plane
        self.collineations = list(collineations)
        if not self.collineations:
            raise ValueError("need at least one generator")
        self.gens = [c.point_perm for c in self.collineations]
        self.cap = cap
        self._group = None

    @property
    def degree(self):
        return self.plane.num_points

    def point_orbit(self, start=0):
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for g in self.gens:
                y = g.img[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def is_transitive(self):
        return len(self.point_orbit(0)) == self.degree

    def group(self):
        """The materialized permutation group (may hit the cap)."""
        if self._group is None:
            self._group = closure(self.gens, cap=self.cap)
        return self._group

    def conj_class_of(self, perm, cap=DEFAULT_CLASS_CAP):
        """BFS of the conjugacy class of `perm` under the generators; does
        not require materializing the group."""
        orbit = dict.fromkeys([perm])
        queue = deque([perm])
        inv_gens = [(g, g.inv()) for g in self.gens]
        while queue:
            x = queue.popleft()
            for g, ginv in inv_gens:
                y = (g * x) * ginv
                if y not in orbit:
                    if len(orbit) >= cap:
                        raise ResourceLimitError("conjugacy class cap", partial=len(orbit))
                    orbit[y] = None
                    queue.append(y)
        return tuple(orbit)

    def contains_certainly(self, perm):
        """Exact membership when the group is materialized or `perm` is a
        generator/inverse/product thereof found during a short probe."""
        if perm in self.gens:
            return True
        if self._group is not None:
            return perm in self._group
        try:
            return perm in self.group()
        except ResourceLimitError:
            return False

    def point_stabilizer(self, alpha=0):
        G = self.group()
        elems = [g for g in G.elements if g.img[alpha] == alpha]
        return FiniteGroup._from_elements(elems, [], cap=self.cap, name="stabilizer")


def singer_collineation(plane: IncidencePlane) -> Collineation:
    """A collineation of order q^2+q+1 acting regularly on points: induced
    by the companion matrix of the first primitive cubic over GF(q)."""
    F = plane.field
    q = F.q
    full = q**3 - 1
    from .partarith import factorize

    prime_divs = list(factorize(full))
    for c2 in range(q):
        for c1 in range(q):
            for c0 in range(1, q):
                has_root = any(
                    F.add_code(
                        F.add_code(
                            F.add_code(F.mul_code(F.mul_code(x, x), x), F.mul_code(c2, F.mul_code(x, x))),
                            F.mul_code(c1, x),
                        ),
                        c0,
                    )
                    == 0
                    for x in range(q)
                )
                if has_root:
                    continue
                companion = Mat.from_rows(
                    F,
                    [
                        [0, 0, F.neg_code(c0)],
                        [1, 0, F.neg_code(c1)],
                        [0, 1, F.neg_code(c2)],
                    ],
                )
                ident = Mat.identity_of(F, 3)
                if companion**full != ident:
                    continue
                if all(companion ** (full // r) != ident for r in prime_divs):
                    coll = Collineation.from_matrix(plane, companion)
                    if coll.order() != q * q + q + 1:
                        raise RuntimeError("Singer point order is off")
                    return coll
    raise RuntimeError(f"no primitive cubic found over GF({q})")


def gl3_collineation_generators(plane: IncidencePlane):
    """Collineations generating the full linear group action on the plane:
    a torus generator, a transvection, and a coordinate 3-cycle."""
    F = plane.field
    zeta = F.generator if F.a > 1 or F.q > 3 else F.neg_code(1)
    mats = [
        Mat.from_rows(F, [[zeta, 0, 0], [0, 1, 0], [0, 0, 1]]),
        Mat.from_rows(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        Mat.from_rows(F, [[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
    ]
    return [Collineation.from_matrix(plane, m) for m in mats]


def baer_prime_condition(u: int) -> dict:
    """Hypothesis check on the subplane point count m = u^2 + u + 1: every
    prime divisor is 1 mod 3 or equals 3, and 9 does not divide m."""
    from .partarith import factorize

    m = u * u + u + 1
    factors = factorize(m)
    return {
        "m": m,
        "primes_1_mod_3_or_3": int(all(p % 3 == 1 or p == 3 for p in factors)),
        "nine_free": int(factors.get(3, 0) <= 1),
    }


def counting_identity_check(G: PlaneGroup, g) -> VerificationReport:
    """For a point-transitive G on a plane of square order u^2 in which all
    conjugates of the involution g fix u^2+u+1 points:
    |g^G| / |g^G n G_alpha| must equal u^2-u+1 exactly.

    Both sides are computed by explicit orbit/scan work, and the ratio is
    cross-checked by double counting fixed points over the class.
    """
    plane = G.plane
    params = {"q": plane.order}
    if isinstance(g, Collineation):
        g = g.point_perm
    with stopwatch() as clock:
        x = plane.order
        u = isqrt(x)
        if u * u != x or u < 2:
            return VerificationReport("plane-counting", params, NOT_APPLICABLE,
                                      counts={"reason_square_order": 0})
        if g.is_identity() or not (g * g).is_identity():
            return VerificationReport("plane-counting", params, NOT_APPLICABLE,
                                      counts={"reason_involution": 0})
        if not G.contains_certainly(g):
            raise ValueError("the candidate involution is not known to lie in the group")
        if not G.is_transitive():
            return VerificationReport("plane-counting", params, NOT_APPLICABLE,
                                      counts={"reason_transitive": 0})
        baer_count = u * u + u + 1
        try:
            cls = G.conj_class_of(g)
        except ResourceLimitError as exc:
            return VerificationReport("plane-counting", params, SKIPPED,
                                      counts={"partial": exc.partial or 0})
        n_pts = plane.num_points
        for h in cls:
            fixed = sum(1 for i in range(n_pts) if h.img[i] == i)
            if fixed != baer_count:
                return VerificationReport(
                    "plane-counting", params, NOT_APPLICABLE,
                    counts={"reason_conjugate_fixes": fixed, "expected": baer_count},
                )
        class_size = len(cls)
        fix_alpha = sum(1 for h in cls if h.img[0] == 0)
        expected = u * u - u + 1
        prime_cond = baer_prime_condition(u)
        counts = {
            "class_size": class_size,
            "class_in_stabilizer": fix_alpha,
            "expected_ratio": expected,
            "baer_primes_ok": prime_cond["primes_1_mod_3_or_3"] & prime_cond["nine_free"],
        }
        ok = fix_alpha > 0 and class_size % fix_alpha == 0
        ratio = class_size // fix_alpha if ok else None
        if ok:
            counts["ratio"] = ratio
            # double-count cross-check: per-point incidence counts of the
            # class must be constant over points of a transitive group
            per_point = [0] * n_pts
            for h in cls:
                img = h.img
                for i in range(n_pts):
                    if img[i] == i:
                        per_point[i] += 1
            constant = all(c == per_point[0] for c in per_point)
            counts["per_point_constant"] = int(constant)
            counts["double_count"] = class_size * baer_count
            ok = (
                constant
                and per_point[0] == fix_alpha
                and class_size * baer_count == n_pts * fix_alpha
                and ratio == expected
            )
    return VerificationReport(
        "plane-counting",
        params,
        VERIFIED if ok else VIOLATED,
        counts=counts,
        witness=None if ok else {"counts": counts},
        elapsed_ms=clock["elapsed_ms"],
    )


def fixpoint_transitivity_check(G, K, alpha=0) -> VerificationReport:
    """Equivalence check: N_G(K) is transitive on Fix(K) if and only if
    every G-conjugate of K inside G_alpha is already a G_alpha-conjugate.

    G may be a PlaneGroup or any materialized permutation FiniteGroup; both
    sides are computed exhaustively.
    """
    params = {}
    with stopwatch() as clock:
        if isinstance(G, PlaneGroup):
            try:
                big = G.group()
            except ResourceLimitError as exc:
                return VerificationReport("fix-transitivity", params, SKIPPED,
                                          counts={"partial": exc.partial or 0})
            degree = G.degree
        else:
            big = G.materialize()
            degree = len(big.identity.img)
        params["G_order"] = big.order
        params["K_order"] = K.order
        kset = K.element_set
        if not kset <= big.element_set:
            raise ValueError("K must be a subgroup of G")
        if any(k.img[alpha] != alpha for k in K.gens):
            raise ValueError("K must fix the base point")
        fix = [i for i in range(degree) if all(k.img[i] == i for k in K.gens)]
        fix_set = set(fix)
        kgens = K.gens
        normalizer = [
            h for h in big.elements
            if all((h * k) * h.inv() in kset for k in kgens)
        ]
        orbit = {alpha}
        queue = deque([alpha])
        norm_perms = normalizer
        while queue:
            ptx = queue.popleft()
            for h in norm_perms:
                y = h.img[ptx]
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        side_transitive = orbit == fix_set
        stab = [h for h in big.elements if h.img[alpha] == alpha]
        k_sorted = kset
        conj_in_stab_G = set()
        stab_set = set(stab)
        for h in big.elements:
            hinv = h.inv()
            image = frozenset((h * k) * hinv for k in k_sorted)
            if image <= stab_set:
                conj_in_stab_G.add(image)
        conj_in_stab_H = set()
        for h in stab:
            hinv = h.inv()
            conj_in_stab_H.add(frozenset((h * k) * hinv for k in k_sorted))
        side_fusion = conj_in_stab_G == conj_in_stab_H
        counts = {
            "fix_size": len(fix),
            "normalizer_order": len(normalizer),
            "normalizer_transitive_on_fix": int(side_transitive),
            "conjugates_in_stabilizer_G": len(conj_in_stab_G),
            "conjugates_in_stabilizer_H": len(conj_in_stab_H),
            "fusion_equal": int(side_fusion),
        }
        ok = side_transitive == side_fusion
    return VerificationReport(
        "fix-transitivity",
        params,
        VERIFIED if ok else VIOLATED,
        counts=counts,
        witness=None if ok else {"counts": counts},
        elapsed_ms=clock["elapsed_ms"],
    )


def odd_transitive_search(G: PlaneGroup, closure_budget=100_000, candidate_budget=1000, seed=0):
    """Search G for an odd-order subgroup transitive on the plane's points.

    Order of attack: G itself if odd; cyclic subgroups generated by single
    odd-order elements (a full-length cycle suffices); then closures of
    small odd-order generator sets within the budget.  Returns
    (witness FiniteGroup or None, VerificationReport).
    """
    import random as _random

    plane = G.plane
    n_pts = plane.num_points
    params = {"q": plane.order}
    rng = _random.Random(seed)
    with stopwatch() as clock:
        if not G.is_transitive():
            return None, VerificationReport("odd-transitive", params, NOT_APPLICABLE,
                                            counts={"reason_transitive": 0})
        try:
            big = G.group()
            universe = list(big.elements)
        except ResourceLimitError:
            universe = None
        if universe is not None and big.order % 2 == 1:
            rep = VerificationReport(
                "odd-transitive", params, VERIFIED,
                counts={"witness_order": big.order, "mode": 0},
                elapsed_ms=clock.get("elapsed_ms", 0), seed=seed,
            )
            return big, rep
        # single elements: an odd-order element with one full cycle
        candidates = universe if universe is not None else [
            _random_word(G, rng) for _ in range(candidate_budget)
        ]
        for h in candidates:
            d = h.order()
            if d % 2 == 1 and d >= n_pts:
                cyc = h.cycles()
                if len(cyc) == 1 and len(cyc[0]) == n_pts:
                    witness = closure([h])
                    rep = VerificationReport(
                        "odd-transitive", params, VERIFIED,
                        counts={"witness_order": witness.order, "mode": 1},
                        elapsed_ms=clock.get("elapsed_ms", 0), seed=seed,
                    )
                    return witness, rep
        # small odd-order generator sets
        odd_pool = [h for h in candidates if h.order() % 2 == 1 and not h.is_identity()]
        for _ in range(min(candidate_budget, len(odd_pool) ** 2 if odd_pool else 0)):
            pair = [rng.choice(odd_pool), rng.choice(odd_pool)]
            try:
                sub = closure(pair, cap=closure_budget)
            except ResourceLimitError:
                continue
            if sub.order % 2 == 1:
                orbit = {0}
                queue = deque([0])
                while queue:
                    ptx = queue.popleft()
                    for gp in sub.gens:
                        y = gp.img[ptx]
                        if y not in orbit:
                            orbit.add(y)
                            queue.append(y)
                if len(orbit) == n_pts:
                    rep = VerificationReport(
                        "odd-transitive", params, VERIFIED,
                        counts={"witness_order": sub.order, "mode": 2},
                        elapsed_ms=clock.get("elapsed_ms", 0), seed=seed,
                    )
                    return sub, rep
    rep = VerificationReport(
        "odd-transitive", params, NOT_APPLICABLE,
        counts={"exhausted": 1},
        elapsed_ms=clock["elapsed_ms"], seed=seed,
    )
    return None, rep


def _random_word(G: PlaneGroup, rng, length=12):
    w = G.gens[0].identity()
    for _ in range(rng.randrange(2, length)):
        w = w * rng.choice(G.gens)
    return w
