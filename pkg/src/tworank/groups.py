"""Generic finite-group machinery over immutable elements.

Groups are given by generators; the element set is materialized once by a
breadth-first product closure (deterministic order: identity first, then
insertion order driven by the sorted generator list) and shared read-only
afterwards.  Everything downstream -- centralizers, conjugacy classes,
Sylow subgroups, normal-subgroup lattices, quotients -- is exhaustive and
exact; caps abort with ResourceLimitError rather than subsample.
"""

import threading
from collections import deque
from itertools import combinations

from .errors import ResourceLimitError
from .partarith import factorize, part_pow

DEFAULT_ELEMENT_CAP = 5_000_000
DEFAULT_NORMAL_ENUM_CAP = 10_000


def _bfs_closure(seeds, gens, cap):
    """Product closure of `seeds` under right multiplication by `gens`."""
    elems = dict.fromkeys(seeds)
    queue = deque(elems)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in elems:
                if len(elems) >= cap:
                    raise ResourceLimitError(
                        f"closure exceeded cap {cap}", partial=len(elems)
                    )
                elems[y] = None
                queue.append(y)
    return list(elems)


class FiniteGroup:
    """A finite group generated by explicit elements.

    Immutable once materialized; materialization is synchronized so the
    group can be shared across threads.
    """

    def __init__(self, generators, cap=DEFAULT_ELEMENT_CAP, name=None):
        generators = [g for g in generators if g is not None]
        if not generators:
            raise ValueError("generators must be nonempty")
        shape_witness = generators[0]
        for g in generators[1:]:
            if type(g) is not type(shape_witness):
                raise ValueError("generators must share one variant shape")
        seen = {}
        for g in sorted(generators, key=lambda g: g.key()):
            if not g.is_identity():
                seen.setdefault(g, None)
        self.identity = shape_witness.identity()
        self.gens = tuple(seen) if seen else (self.identity,)
        self.cap = cap
        self.name = name
        self._elements = None
        self._element_set = None
        self._lock = threading.Lock()

    @classmethod
    def _from_elements(cls, elements, generators, cap=DEFAULT_ELEMENT_CAP, name=None):
        """Wrap an already-closed element collection (internal use)."""
        group = cls(list(generators) or list(elements), cap=cap, name=name)
        elements = list(elements)
        if not any(e.is_identity() for e in elements):
            elements.insert(0, group.identity)
        group._elements = tuple(elements)
        group._element_set = frozenset(elements)
        return group

    # -- materialization ---------------------------------------------------

    def materialize(self):
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    elems = _bfs_closure([self.identity], self.gens, self.cap)
                    self._elements = tuple(elems)
                    self._element_set = frozenset(elems)
        return self

    @property
    def elements(self):
        self.materialize()
        return self._elements

    @property
    def element_set(self):
        self.materialize()
        return self._element_set

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def __repr__(self):
        size = len(self._elements) if self._elements is not None else "?"
        label = self.name or "group"
        return f"<{label} on {len(self.gens)} generators, order {size}>"

    # -- basic queries -------------------------------------------------------

    def subgroup(self, generators, name=None):
        return FiniteGroup(list(generators), cap=self.cap, name=name).materialize()

    def is_subgroup_of(self, other):
        return self.element_set <= other.element_set

    def is_normal_in(self, other):
        """Whether self is a normal subgroup of `other` (both materialized)."""
        if not self.is_subgroup_of(other):
            return False
        sset = self.element_set
        return all(
            (h * s) * h.inv() in sset for h in other.gens for s in self.gens
        )

    def centralizer(self, g):
        if g not in self:
            raise ValueError("element lies outside the group")
        cent = [h for h in self.elements if h * g == g * h]
        return FiniteGroup._from_elements(cent, [], cap=self.cap, name="centralizer")

    def conj_class(self, g):
        """The conjugacy class g^H as a deterministic tuple."""
        if g not in self:
            raise ValueError("element lies outside the group")
        orbit = dict.fromkeys([g])
        queue = deque([g])
        while queue:
            x = queue.popleft()
            for s in self.gens:
                y = (s * x) * s.inv()
                if y not in orbit:
                    orbit[y] = None
                    queue.append(y)
        return tuple(orbit)

    def conjugacy_classes(self):
        """All conjugacy classes, ordered by first appearance of a member."""
        seen = set()
        classes = []
        for g in self.elements:
            if g not in seen:
                cls = self.conj_class(g)
                seen.update(cls)
                classes.append(cls)
        return classes

    def involutions(self):
        return tuple(g for g in self.elements if not g.is_identity() and (g * g).is_identity())

    def element_order(self, g):
        return g.order()

    def is_abelian(self):
        return all(a * b == b * a for a, b in combinations(self.gens, 2))

    def is_cyclic(self):
        n = self.order
        prime_divs = list(factorize(n)) if n > 1 else []
        for g in self.elements:
            if all(not (g ** (n // r)).is_identity() for r in prime_divs):
                return True
        return n == 1

    # -- Sylow subgroups -------------------------------------------------------

    def sylow_p(self, p):
        """A Sylow p-subgroup found by greedy normalizer climbing."""
        target = part_pow(self.order, p)
        if target == 1:
            return FiniteGroup._from_elements([self.identity], [], cap=self.cap, name=f"sylow{p}")
        seed = None
        for g in self.elements:
            d = g.order()
            if d % p == 0:
                nonp = d // part_pow(d, p)
                seed = g**nonp
                break
        P = self.subgroup([seed], name=f"sylow{p}")
        while P.order < target:
            z = self._climbing_element(P, p)
            P = self.subgroup(list(P.gens) + [z], name=f"sylow{p}")
        if P.order != target:
            raise RuntimeError("Sylow climb overshot the target order")
        return P

    def _climbing_element(self, P, p):
        pset = P.element_set
        pgens = P.gens
        for h in self.elements:
            if h in pset:
                continue
            if all((h * s) * h.inv() in pset for s in pgens):
                d = h.order()
                if d % p == 0:
                    z = h ** (d // part_pow(d, p))
                    if z not in pset:
                        return z
        raise RuntimeError("no normalizing p-element found; climb is stuck")

    def sylow_two(self):
        return self.sylow_p(2)

    # -- normal structure -------------------------------------------------------

    def _span(self, needed):
        """Subgroup generated by `needed`, built with a greedily chosen
        small generating subset.  Returns (element list, generators)."""
        gens = []
        current = {self.identity}
        elems = [self.identity]
        for x in needed:
            if x not in current:
                gens.append(x)
                elems = _bfs_closure(elems, gens, self.cap)
                current = set(elems)
        return elems, gens

    def normal_subgroups(self, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
        """All normal subgroups: joins of normal closures of conjugacy
        classes.  Capped by group order; exact within the cap."""
        if self.order > enum_cap:
            raise ResourceLimitError(
                f"normal-subgroup enumeration capped at order {enum_cap}",
                partial=self.order,
            )
        from .dense import DenseGroup

        D = DenseGroup(self)
        atoms = []
        for cls in D.classes():
            if len(cls) == 1 and cls[0] == D.id_idx:
                continue
            elems, gens = D.span(cls)
            atoms.append((frozenset(elems), tuple(gens)))
        found = {frozenset([D.id_idx]): ()}
        frontier = []
        for atom, gens in atoms:
            if atom not in found:
                found[atom] = gens
                frontier.append((atom, gens))
        while frontier:
            fresh = []
            for a, agens in frontier:
                for b, bgens in list(found.items()):
                    if a >= b or a <= b:
                        continue
                    jgens = tuple(agens) + tuple(bgens)
                    join = frozenset(D.close([D.id_idx], jgens))
                    if join not in found:
                        found[join] = jgens
                        fresh.append((join, jgens))
            frontier = fresh
        groups = [D.subgroup_from_indices(sorted(idxs), gens) for idxs, gens in found.items()]
        return sorted(
            groups, key=lambda n: (n.order, sorted(g.key() for g in n.elements))
        )

    def odd_core(self, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
        """O(H): the largest normal subgroup of odd order."""
        odd = [n for n in self.normal_subgroups(enum_cap) if n.order % 2 == 1]
        best = max(odd, key=lambda n: n.order)
        for n in odd:
            if not n.element_set <= best.element_set:
                raise RuntimeError("odd normal subgroups do not form a chain to the core")
        best.name = "odd-core"
        return best

    def _is_nilpotent(self):
        return all(
            self.sylow_p(p).is_normal_in(self) for p in factorize(self.order)
        ) if self.order > 1 else True

    def fitting(self, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
        """F(H): the largest nilpotent normal subgroup."""
        nilpotent = [n for n in self.normal_subgroups(enum_cap) if n._is_nilpotent()]
        best = max(nilpotent, key=lambda n: n.order)
        for n in nilpotent:
            if not n.element_set <= best.element_set:
                raise RuntimeError("maximal nilpotent normal subgroup is not unique")
        best.name = "fitting"
        return best

    def derived_subgroup(self):
        comms = set()
        for a in self.gens:
            for b in self.gens:
                comms.add(((a * b) * a.inv()) * b.inv())
        closed = set()
        for c in comms:
            closed.update(self.conj_class(c))
        elems, gens = self._span(sorted(closed, key=lambda g: g.key()))
        return FiniteGroup._from_elements(elems, gens, cap=self.cap, name="derived")

    # -- quotients -------------------------------------------------------

    def quotient(self, N):
        """The action of self on left cosets of the normal subgroup N.

        Returns (quotient group of Perm elements, projection Homomorphism).
        """
        from .elements import Perm

        if not N.is_subgroup_of(self):
            raise ValueError("quotient requires a subgroup")
        if not N.is_normal_in(self):
            raise ValueError("quotient requires a normal subgroup")
        coset_of = {}
        reps = []
        for h in self.elements:
            if h not in coset_of:
                idx = len(reps)
                reps.append(h)
                for n in N.elements:
                    coset_of[h * n] = idx
        k = len(reps)

        def project(h):
            return Perm(coset_of[h * reps[i]] for i in range(k))

        gen_images = {g: project(g) for g in self.gens}
        q_order = self.order // N.order
        quo = FiniteGroup(list(gen_images.values()) or [Perm.identity_of(k)], cap=self.cap, name="quotient")
        quo.materialize()
        if quo.order != q_order:
            raise RuntimeError(f"coset action has order {quo.order}, expected {q_order}")
        hom = Homomorphism(self, quo, gen_images, project)
        return quo, hom

    # -- 2-rank and quaternion recognition ------------------------------------

    def two_rank(self):
        """The largest r with an elementary abelian subgroup of order 2^r."""
        P = self.sylow_two()
        invs = P.involutions()
        if not invs:
            return 0
        level = {frozenset([self.identity, v]) for v in invs}
        rank = 1
        while True:
            nxt = set()
            for E in level:
                for h in invs:
                    if h in E:
                        continue
                    if all(h * x == x * h for x in E):
                        nxt.add(E | frozenset(x * h for x in E))
            if not nxt:
                return rank
            rank += 1
            level = nxt


class Homomorphism:
    """A group homomorphism given by generator images plus an evaluation rule.

    Multiplicativity is verified on all generator pairs at construction.
    """

    def __init__(self, domain, codomain, gen_images, rule):
        self.domain = domain
        self.codomain = codomain
        self.gen_images = dict(gen_images)
        self._rule = rule
        for a in domain.gens:
            for b in domain.gens:
                if rule(a * b) != rule(a) * rule(b):
                    raise ValueError("rule is not multiplicative on generator pairs")

    def __call__(self, g):
        return self._rule(g)

    def kernel(self):
        elems = [g for g in self.domain.elements if self(g).is_identity()]
        return FiniteGroup._from_elements(elems, [], cap=self.domain.cap, name="kernel")

    def image(self):
        elems = dict.fromkeys(self(g) for g in self.domain.elements)
        return FiniteGroup._from_elements(list(elems), list(self.gen_images.values()), cap=self.domain.cap, name="image")


def closure(generators, cap=DEFAULT_ELEMENT_CAP):
    """Materialized group generated by `generators` (BFS product closure)."""
    return FiniteGroup(list(generators), cap=cap).materialize()


def centralizer(H, g):
    return H.centralizer(g)


def conj_class(H, g):
    return H.conj_class(g)


def involutions(H):
    return H.involutions()


def sylow_two(H):
    return H.sylow_two()


def normal_subgroups(H, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
    return H.normal_subgroups(enum_cap)


def odd_core(H, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
    return H.odd_core(enum_cap)


def fitting(H, enum_cap=DEFAULT_NORMAL_ENUM_CAP):
    return H.fitting(enum_cap)


def quotient(H, N):
    return H.quotient(N)


def two_rank(H):
    return H.two_rank()


def is_generalized_quaternion(P):
    """Exact census test: a 2-group of order >= 8 with a unique involution
    that is not cyclic is generalized quaternion."""
    order = P.order
    if order & (order - 1):
        raise ValueError("expected a 2-group")
    if order < 8:
        return False
    return len(P.involutions()) == 1 and not P.is_cyclic()


def _sl2_param(m):
    """The odd prime power q with q(q^2 - 1) = m, or None."""
    q = 2
    while q * (q * q - 1) < m:
        q += 1
    if q * (q * q - 1) != m or q % 2 == 0:
        return None
    try:
        factors = factorize(q)
    except ResourceLimitError:
        return None
    return q if len(factors) == 1 else None


def classify_quaternion_structure(G):
    """Match G/O(G) against the three shapes available to a group whose
    Sylow 2-subgroups are cyclic or generalized quaternion.

    Returns (tag, info) with tag in {"TwoGroup", "ZA7", "SL2qD", "Unknown"}.
    Recognition is by invariants (orders, involution censuses, cyclicity of
    quotients), not isomorphism testing; "Unknown" is a legitimate verdict.
    """
    P = G.sylow_two()
    if not (P.is_cyclic() or P.order < 8 or is_generalized_quaternion(P)):
        raise ValueError("Sylow 2-subgroup is neither cyclic nor generalized quaternion")
    core = G.odd_core()
    gbar, _ = G.quotient(core)
    m = gbar.order
    if m & (m - 1) == 0:
        return "TwoGroup", {"order": m, "odd_core": core.order}
    if m == 5040:
        invs = gbar.involutions()
        if len(invs) >= 1:
            z = invs[0]
            central = all(z * g == g * z for g in gbar.gens)
            if central and len(gbar.involutions()) == 1:
                Z = gbar.subgroup([z])
                simple_part, _ = gbar.quotient(Z)
                if simple_part.order == 2520 and len(simple_part.normal_subgroups(6000)) == 2:
                    return "ZA7", {"order": m, "odd_core": core.order}
    for N in gbar.normal_subgroups(enum_cap=max(DEFAULT_NORMAL_ENUM_CAP, m)):
        q = _sl2_param(N.order)
        if q is None or q < 4:
            continue
        if len(N.involutions()) != 1:
            continue
        if N.derived_subgroup().order != N.order:
            continue
        quo, _ = gbar.quotient(N)
        if quo.order % 2 == 1 and quo.is_cyclic():
            return "SL2qD", {"q": q, "d": quo.order, "odd_core": core.order}
    return "Unknown", {"order": m, "odd_core": core.order}
