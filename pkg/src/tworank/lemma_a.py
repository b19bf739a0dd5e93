"""Involution-index bound campaigns over subgroups of GL_n(q).

The claim under test, for q = p^a with p >= 7 and p = 1 mod 3: every
even-order subgroup H of GL_n(q) contains an involution g whose
centralizer index |H:C_H(g)|, reduced to its heart part coprime to p,
is at most q^{n-1} + ... + q + 1.

Two stream modes feed the check:

* ExhaustiveLattice: every subgroup of the ambient up to conjugacy, found
  by breadth-first one-element extensions of class representatives.  A
  subgroup equal to <H, g> only depends on the double coset HgH, and every
  subgroup is reachable by a chain of one-element extensions, so the walk
  is complete.  Completeness is additionally self-tested against a
  no-dedup oracle on small ambients.
* RandomGenerated: seeded closures of 1-3 random elements, deduplicated,
  plus the structured families (Sylow-2, Borel, monomial, Singer
  normalizer, and the ambient itself when it fits the cap).

Also here: the primitive permutation-group bound harnesses (odd-order
groups against n^{log2 n}, even-order ones against 42^{(n-2)/2}).
"""

import hashlib
import random
from collections import deque
from dataclasses import dataclass

from .dense import DenseGroup
from .elements import Perm
from .errors import ResourceLimitError
from .groups import FiniteGroup, closure
from .matgroup import (
    GLContext,
    borel_subgroup,
    gl_context_q,
    monomial_subgroup,
    random_invertible,
    singer_normalizer,
    sylow2_gl,
)
from .partarith import geom_sum, heart_coprime
from .report import (
    NOT_APPLICABLE,
    SKIPPED,
    VERIFIED,
    VIOLATED,
    VerificationReport,
    stopwatch,
)

LATTICE_AMBIENT_CAP = 2500
ORACLE_AMBIENT_CAP = 500

SATISFIED = "satisfied"
VIOLATED_TAG = "VIOLATED"
ODD_SKIP = "odd-order-skip"


@dataclass
class LemmaAVerdict:
    subgroup_order: int
    subgroup_generators: tuple
    num_involutions: int
    verdict: str
    bound: int
    best_involution: str | None = None
    index: int | None = None
    index_part: int | None = None
    source: str = "stream"

    def csv_row(self):
        return (
            f"{self.subgroup_order},{self.num_involutions},"
            f"{self.index if self.index is not None else ''},"
            f"{self.index_part if self.index_part is not None else ''},"
            f"{self.bound},{self.verdict}"
        )


VERDICT_CSV_HEADER = "order,involutions,best_index,part,bound,verdict"


# ---------------------------------------------------------------------------
# Exhaustive subgroup lattice (up to conjugacy) on a dense group
# ---------------------------------------------------------------------------

@dataclass
class SubgroupClass:
    elems: frozenset
    gens: tuple
    order: int
    conjugates: int


class SubgroupLattice:
    """All subgroups of a materialized ambient group, up to conjugacy.

    Every conjugate of every discovered class is registered by element
    set, so deduplication is a set lookup and the sum of registered sets
    counts all subgroups exactly.
    """

    def __init__(self, D: DenseGroup):
        self.D = D
        self.by_set = {}
        self.classes = []
        self._conj_rows = None

    def _rows(self):
        if self._conj_rows is None:
            D = self.D
            inv = D.inv_table()
            self._conj_rows = []
            for g in D.group.gens:
                j = D.index[g]
                self._conj_rows.append((D.lrow(j), D.rrow(inv[j])))
        return self._conj_rows

    def _register(self, elems, gens):
        fs = frozenset(elems)
        if fs in self.by_set:
            return None
        cid = len(self.classes)
        orbit = {fs}
        self.by_set[fs] = cid
        queue = deque([fs])
        rows = self._rows()
        while queue:
            S = queue.popleft()
            for lr, rr in rows:
                T = frozenset(lr[rr[x]] for x in S)
                if T not in self.by_set:
                    self.by_set[T] = cid
                    orbit.add(T)
                    queue.append(T)
        self.classes.append(SubgroupClass(fs, tuple(gens), len(fs), len(orbit)))
        return cid

    def build(self):
        D = self.D
        n = D.n
        self._register([D.id_idx], ())
        worklist = []
        for i in range(n):
            if i == D.id_idx:
                continue
            row = D.rrow(i)
            cyc = [D.id_idx]
            x = row[D.id_idx]
            while x != D.id_idx:
                cyc.append(x)
                x = row[x]
            cid = self._register(cyc, (i,))
            if cid is not None:
                worklist.append(cid)
        head = 0
        while head < len(worklist):
            cls = self.classes[worklist[head]]
            head += 1
            if cls.order == n:
                continue
            for g in self._double_coset_reps(cls):
                K = D.close(list(cls.elems), list(cls.gens) + [g])
                cid = self._register(K, tuple(cls.gens) + (g,))
                if cid is not None:
                    worklist.append(cid)
        return self.classes

    def _double_coset_reps(self, cls):
        """One representative per double coset H g H, skipping H itself.
        Extensions by elements of one double coset generate equal
        subgroups, so one representative suffices."""
        D = self.D
        n = D.n
        helems = sorted(cls.elems)
        hrows = [D.rrow(h) for h in helems]  # x -> x * h: left coset xH
        coset_id = [-1] * n
        coset_rep = []
        for e in range(n):
            if coset_id[e] < 0:
                c = len(coset_rep)
                coset_rep.append(e)
                for row in hrows:
                    coset_id[row[e]] = c
        # orbit of cosets under left multiplication by the subgroup gens
        gen_lrows = [D.lrow(g) for g in (cls.gens or sorted(cls.elems)[:1])]
        seen = [False] * len(coset_rep)
        seen[coset_id[D.id_idx]] = True
        reps = []
        for c in range(len(coset_rep)):
            if seen[c]:
                continue
            reps.append(coset_rep[c])
            queue = deque([c])
            seen[c] = True
            while queue:
                x = queue.popleft()
                for lrow in gen_lrows:
                    y = coset_id[lrow[coset_rep[x]]]
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
        return reps

    def total_subgroups(self):
        return len(self.by_set)


def all_subgroups_oracle(D: DenseGroup):
    """Every subgroup as an element-index frozenset, with no conjugacy
    shortcut.  Exponential-ish; for self-tests on ambients of order <= 500."""
    if D.n > ORACLE_AMBIENT_CAP:
        raise ResourceLimitError(f"oracle capped at ambient order {ORACLE_AMBIENT_CAP}")
    found = {frozenset([D.id_idx]): ()}
    queue = deque()
    for i in range(D.n):
        if i == D.id_idx:
            continue
        row = D.rrow(i)
        cyc = [D.id_idx]
        x = row[D.id_idx]
        while x != D.id_idx:
            cyc.append(x)
            x = row[x]
        fs = frozenset(cyc)
        if fs not in found:
            found[fs] = (i,)
            queue.append((fs, (i,)))
    while queue:
        elems, gens = queue.popleft()
        if len(elems) == D.n:
            continue
        helems = sorted(elems)
        hrows = [D.rrow(h) for h in helems]
        covered = set()
        for e in range(D.n):
            if e in covered:
                continue
            for row in hrows:
                covered.add(row[e])
            if e in elems:
                continue
            K = frozenset(D.close(helems, list(gens) + [e]))
            if K not in found:
                kg = tuple(gens) + (e,)
                found[K] = kg
                queue.append((K, kg))
    return found


# ---------------------------------------------------------------------------
# The bound check itself
# ---------------------------------------------------------------------------

def _dense_check(D: DenseGroup, elems, gens, ctx: GLContext, source="stream") -> LemmaAVerdict:
    bound = geom_sum(ctx.q, ctx.n)
    order = len(elems)
    gen_reprs = tuple(repr(D.elems[g]) for g in gens)
    orders = D.orders()
    invs = [i for i in elems if orders[i] == 2]
    if order % 2:
        return LemmaAVerdict(order, gen_reprs, 0, ODD_SKIP, bound, source=source)
    inv_table = D.inv_table()
    conj_rows = [(D.lrow(g), D.rrow(inv_table[g])) for g in gens]
    seen = set()
    best = None
    for i in sorted(invs):
        if i in seen:
            continue
        orbit = {i}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for lr, rr in conj_rows:
                y = lr[rr[x]]
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        seen.update(orbit)
        index = len(orbit)
        part = heart_coprime(index, ctx.p)
        if best is None or (part, index) < best[:2]:
            best = (part, index, i)
    part, index, witness = best
    verdict = SATISFIED if part <= bound else VIOLATED_TAG
    return LemmaAVerdict(
        order, gen_reprs, len(invs), verdict, bound,
        best_involution=repr(D.elems[witness]), index=index, index_part=part,
        source=source,
    )


def lemma_a_check(H: FiniteGroup, ctx: GLContext, source="direct") -> LemmaAVerdict:
    """Best involution heart-part index of H against the geometric bound.

    The reported involution minimizes the p'-heart part of its centralizer
    index over all involutions of H (conjugates share an index, so class
    representatives suffice)."""
    bound = geom_sum(ctx.q, ctx.n)
    H.materialize()
    gen_reprs = tuple(repr(g) for g in H.gens)
    if H.order % 2:
        return LemmaAVerdict(H.order, gen_reprs, 0, ODD_SKIP, bound, source=source)
    invs = H.involutions()
    seen = set()
    best = None
    for g in invs:
        if g in seen:
            continue
        orbit = H.conj_class(g)
        seen.update(orbit)
        index = len(orbit)
        part = heart_coprime(index, ctx.p)
        if best is None or (part, index) < best[:2]:
            best = (part, index, g)
    part, index, witness = best
    verdict = SATISFIED if part <= bound else VIOLATED_TAG
    return LemmaAVerdict(
        H.order, gen_reprs, len(invs), verdict, bound,
        best_involution=repr(witness), index=index, index_part=part,
        source=source,
    )


# ---------------------------------------------------------------------------
# Streams and campaigns
# ---------------------------------------------------------------------------

@dataclass
class StreamStats:
    mode: str
    emitted: int = 0
    truncated: int = 0
    duplicates: int = 0
    candidates: int = 0


@dataclass
class SubgroupStream:
    """A deduplicated stream of subgroups of an ambient group.

    ExhaustiveLattice items are conjugacy-class representatives (complete
    within the ambient cap); RandomGenerated items are deduplicated by
    element set only, so distinct conjugates can both appear (their
    verdicts agree, which the tests pin down).
    """

    mode: str
    seed: int | None
    max_order: int | None
    max_count: int | None
    items: list  # (source tag, FiniteGroup)
    stats: StreamStats

    def groups(self):
        return [g for _, g in self.items]


def subgroups(ambient, mode, seed=0, max_order=None, max_count=None) -> SubgroupStream:
    """Stream subgroups of `ambient` (a materialized FiniteGroup).

    mode='exhaustive': every subgroup up to conjugacy (ambient order
    capped); mode='random': seeded closures of 1-3 random elements.
    """
    ambient.materialize()
    if mode == "exhaustive":
        if ambient.order > LATTICE_AMBIENT_CAP:
            raise ResourceLimitError(
                f"exhaustive lattice capped at ambient order {LATTICE_AMBIENT_CAP}",
                partial=ambient.order,
            )
        D = DenseGroup(ambient)
        lattice = SubgroupLattice(D)
        classes = lattice.build()
        items = []
        for cls in classes:
            if max_order is not None and cls.order > max_order:
                continue
            items.append(
                ("lattice", D.subgroup_from_indices(sorted(cls.elems), cls.gens))
            )
            if max_count is not None and len(items) >= max_count:
                break
        stats = StreamStats(mode="ExhaustiveLattice", emitted=len(items))
        return SubgroupStream("exhaustive", None, max_order, max_count, items, stats)
    if mode == "random":
        rng = random.Random(seed)
        cap = max_order or ambient.order
        want = max_count or 100
        stats = StreamStats(mode="RandomGenerated")
        seen = set()
        items = []
        while stats.emitted < want and stats.candidates < 6 * want:
            stats.candidates += 1
            k = rng.choices((1, 2, 3), weights=(70, 25, 5))[0]
            gens = [rng.choice(ambient.elements) for _ in range(k)]
            try:
                H = closure(gens, cap=cap)
            except ResourceLimitError:
                stats.truncated += 1
                continue
            key = _group_key(H)
            if key in seen:
                stats.duplicates += 1
                continue
            seen.add(key)
            items.append((f"random-{k}gen", H))
            stats.emitted += 1
        return SubgroupStream("random", seed, max_order, max_count, items, stats)
    raise ValueError(f"unknown stream mode {mode!r}")


def _group_key(H: FiniteGroup):
    """Cheap dedup key: order plus a digest of the sorted element keys.
    Collisions would only merge two distinct stream entries, never alter a
    verdict."""
    h = hashlib.sha256()
    for key in sorted(repr(k) for k in (g.key() for g in H.elements)):
        h.update(key.encode())
    return (H.order, h.hexdigest())


def exhaustive_campaign(ctx: GLContext, ambient: FiniteGroup) -> tuple:
    """lemma_a verdicts for every subgroup class of the ambient."""
    if ambient.order > LATTICE_AMBIENT_CAP:
        raise ResourceLimitError(
            f"exhaustive lattice capped at ambient order {LATTICE_AMBIENT_CAP}",
            partial=ambient.order,
        )
    D = DenseGroup(ambient)
    lattice = SubgroupLattice(D)
    classes = lattice.build()
    verdicts = []
    for cls in classes:
        verdicts.append(_dense_check(D, cls.elems, cls.gens or (D.id_idx,), ctx, source="lattice"))
    stats = StreamStats(mode="ExhaustiveLattice", emitted=len(classes))
    return verdicts, stats, lattice


def random_stream_campaign(
    ctx: GLContext,
    seed: int,
    count_target: int,
    max_order: int,
    max_candidates: int | None = None,
) -> tuple:
    """lemma_a verdicts over seeded random closures plus structured
    families; dedup by element-set digest, truncations flagged."""
    rng = random.Random(seed)
    stats = StreamStats(mode="RandomGenerated")
    verdicts = []
    seen = set()
    if max_candidates is None:
        max_candidates = 4 * count_target

    def emit(H, source):
        key = _group_key(H)
        if key in seen:
            stats.duplicates += 1
            return
        seen.add(key)
        verdicts.append(lemma_a_check(H, ctx, source=source))
        stats.emitted += 1

    structured = []
    try:
        structured.append(("sylow2", sylow2_gl(ctx.n, ctx.q).group))
    except (ResourceLimitError, RuntimeError):
        stats.truncated += 1
    for name, builder in (
        ("borel", borel_subgroup),
        ("monomial", monomial_subgroup),
        ("singer-normalizer", singer_normalizer),
    ):
        try:
            structured.append((name, builder(ctx, cap=250_000)))
        except ResourceLimitError:
            stats.truncated += 1
    if ctx.order <= max_order:
        try:
            emit(closure(_gl_generators(ctx), cap=max_order + 1), "ambient")
        except ResourceLimitError:
            stats.truncated += 1
    for name, grp in structured:
        emit(grp, name)
    while stats.emitted < count_target and stats.candidates < max_candidates:
        stats.candidates += 1
        k = rng.choices((1, 2, 3), weights=(70, 25, 5))[0]
        gens = [random_invertible(ctx, rng) for _ in range(k)]
        try:
            H = closure(gens, cap=max_order)
        except ResourceLimitError:
            stats.truncated += 1
            continue
        emit(H, f"random-{k}gen")
    return verdicts, stats


def lemma_a_campaign(
    n: int,
    q: int,
    mode: str = "exhaustive",
    seed: int = 0,
    trials: int = 1000,
    max_order: int | None = None,
) -> tuple:
    """Run a full campaign; returns (aggregate report, verdicts).

    Any VIOLATED verdict wins the aggregate and carries a full witness
    (it indicates an engine bug: the bound is a theorem in the hypothesis
    range)."""
    ctx = gl_context_q(n, q)
    lemma_id = "lemma-a"
    params = {"n": n, "q": q, "mode": mode}
    if not ctx.hypothesis_ok():
        return (
            VerificationReport(lemma_id, params, NOT_APPLICABLE,
                               counts={"hypothesis_ok": 0}, seed=seed),
            [],
        )
    with stopwatch() as clock:
        if mode == "exhaustive":
            ambient_gens = _gl_generators(ctx)
            try:
                ambient = closure(ambient_gens, cap=LATTICE_AMBIENT_CAP + 1)
                if ambient.order != ctx.order:
                    raise RuntimeError(
                        f"ambient closure has order {ambient.order}, expected {ctx.order}"
                    )
                verdicts, stats, _ = exhaustive_campaign(ctx, ambient)
            except ResourceLimitError as exc:
                return (
                    VerificationReport(lemma_id, params, SKIPPED,
                                       counts={"partial": exc.partial or 0}, seed=seed),
                    [],
                )
        elif mode == "random":
            if max_order is None:
                max_order = 30_000 if n <= 2 else 4_000
            verdicts, stats = random_stream_campaign(ctx, seed, trials, max_order)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        bound = geom_sum(q, n)
        even = [v for v in verdicts if v.verdict != ODD_SKIP]
        violated = [v for v in verdicts if v.verdict == VIOLATED_TAG]
        parts = sorted(v.index_part for v in even)
        histogram = {}
        for v in even:
            bucket = f"{v.index_part}/{bound}"
            histogram[bucket] = histogram.get(bucket, 0) + 1
        counts = {
            "bound": bound,
            "subgroups": stats.emitted,
            "even_order": len(even),
            "odd_skipped": len(verdicts) - len(even),
            "violations": len(violated),
            "max_part": parts[-1] if parts else 0,
            "min_part": parts[0] if parts else 0,
            "truncated": stats.truncated,
            "duplicates": stats.duplicates,
            "base_case_ceiling_q_plus_1": int(
                (parts[-1] if parts else 0) <= q + 1
            ) if n == 2 else -1,
        }
        witness = None
        if violated:
            v = violated[0]
            witness = {
                "subgroup_generators": list(v.subgroup_generators),
                "best_involution": v.best_involution,
                "index": v.index,
                "index_part": v.index_part,
                "bound": v.bound,
            }
        verdict = VIOLATED if violated else VERIFIED
        if stats.truncated and not violated:
            # truncation does not undermine the checked subgroups, but the
            # stream is declared incomplete
            counts["stream_complete"] = 0
        else:
            counts["stream_complete"] = int(mode == "exhaustive")
    return (
        VerificationReport(
            lemma_id, params, verdict, counts=counts, witness=witness,
            elapsed_ms=clock["elapsed_ms"], seed=seed,
        ),
        verdicts,
    )


def _gl_generators(ctx: GLContext):
    """Generators of GL_n(q): a torus element, the two 2x2-block
    transvections, and (for n > 2) a coordinate cycle."""
    from .matgroup import Mat, block_perm_matrix

    F, n = ctx.field, ctx.n
    zeta = F.generator
    gens = []
    vals = [0] * (n * n)
    for d in range(n):
        vals[d * n + d] = 1
    vals[0] = zeta
    gens.append(Mat(F, n, vals, _checked=True))
    if n > 1:
        for (i, j) in ((0, 1), (1, 0)):
            vals = [0] * (n * n)
            for d in range(n):
                vals[d * n + d] = 1
            vals[i * n + j] = 1
            gens.append(Mat(F, n, vals, _checked=True))
    if n > 2:
        gens.append(block_perm_matrix(F, n, Perm.from_cycles(n, tuple(range(n))), 1))
    return gens


# ---------------------------------------------------------------------------
# Primitive permutation-group bound harnesses
# ---------------------------------------------------------------------------

def minimal_block_size(gens, degree, alpha, beta):
    """Size of the smallest block of imprimitivity containing alpha, beta."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return None
        parent[ry] = rx
        return rx, ry

    queue = deque()
    if union(alpha, beta):
        queue.append((alpha, beta))
    while queue:
        x, y = queue.popleft()
        for g in gens:
            merged = union(g.img[x], g.img[y])
            if merged:
                queue.append((g.img[x], g.img[y]))
    root = find(alpha)
    return sum(1 for i in range(degree) if find(i) == root)


def is_primitive(H: FiniteGroup):
    """Transitive with only trivial blocks."""
    gens = H.gens
    degree = len(H.identity.img)
    if degree < 2:
        return False
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g.img[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != degree:
        return False
    return all(
        minimal_block_size(gens, degree, 0, beta) == degree for beta in range(1, degree)
    )


def _lt_pow_log2(h: int, n: int) -> bool:
    """Exact decision of h < n^{log2 n}: integer powers when n is a power
    of two, otherwise certified high-precision comparison of log2(h) with
    log2(n)^2, escalating precision until a margin is cleared."""
    if h < 1 or n < 2:
        raise ValueError("need h >= 1 and n >= 2")
    if n & (n - 1) == 0:
        k = n.bit_length() - 1
        return h < n**k
    import mpmath

    for dps in (40, 80, 160, 320, 640):
        with mpmath.workdps(dps):
            lhs = mpmath.log(h, 2)
            rhs = mpmath.log(n, 2) ** 2
            margin = mpmath.mpf(10) ** (12 - dps)
            if abs(lhs - rhs) > margin:
                return lhs < rhs
    raise ResourceLimitError("power comparison undecided at maximum precision")


def sn_bound_check(kind: str, H: FiniteGroup) -> VerificationReport:
    """Bound harness on a primitive subgroup of S_n.

    kind='oddsn': |H| < n^{log2 n} for odd-order H.
    kind='sninvolutions': some involution has |H:C_H(g)| < 42^{(n-2)/2}
    for even-order H (compared as index^2 < 42^{n-2}, exactly).
    """
    if kind not in ("oddsn", "sninvolutions"):
        raise ValueError(f"unknown kind {kind!r}")
    degree = len(H.identity.img)
    params = {"kind": kind, "degree": degree, "order": H.order}
    with stopwatch() as clock:
        if not is_primitive(H):
            return VerificationReport("sn-bounds", params, NOT_APPLICABLE,
                                      counts={"reason_primitive": 0})
        if kind == "oddsn":
            if H.order % 2 == 0:
                return VerificationReport("sn-bounds", params, NOT_APPLICABLE,
                                          counts={"reason_parity": 0})
            ok = _lt_pow_log2(H.order, degree)
            counts = {"order": H.order, "degree": degree}
        else:
            if H.order % 2:
                return VerificationReport("sn-bounds", params, NOT_APPLICABLE,
                                          counts={"reason_parity": 0})
            invs = H.involutions()
            seen = set()
            best = None
            for g in invs:
                if g in seen:
                    continue
                orbit = H.conj_class(g)
                seen.update(orbit)
                if best is None or len(orbit) < best:
                    best = len(orbit)
            ok = best * best < 42 ** (degree - 2)
            counts = {"best_index": best, "bound_squared": 42 ** (degree - 2)}
    return VerificationReport(
        "sn-bounds",
        params,
        VERIFIED if ok else VIOLATED,
        counts=counts,
        witness=None if ok else {"counts": counts},
        elapsed_ms=clock["elapsed_ms"],
    )
