"""Indexed view of a materialized group.

Subgroup-lattice work (normal-subgroup enumeration, exhaustive subgroup
streams) multiplies the same elements millions of times.  DenseGroup maps
elements to integer indices and builds multiplication rows lazily, one per
needed factor, so closures and conjugacy orbits run on plain ints.  Rows
are cached; everything stays exact.
"""

from collections import deque

from .errors import ResourceLimitError


class DenseGroup:
    def __init__(self, group):
        group.materialize()
        self.group = group
        self.elems = group.elements
        self.n = len(self.elems)
        self.index = {g: i for i, g in enumerate(self.elems)}
        self.id_idx = self.index[group.identity]
        self._rrows = {}
        self._lrows = {}
        self._inv = None
        self._orders = None
        self._classes = None
        self._class_of = None

    # -- lazy tables --------------------------------------------------------

    def inv_table(self):
        if self._inv is None:
            self._inv = [self.index[g.inv()] for g in self.elems]
        return self._inv

    def rrow(self, j):
        """Right multiplication row: rrow(j)[i] = index of elems[i] * elems[j]."""
        row = self._rrows.get(j)
        if row is None:
            g = self.elems[j]
            index = self.index
            row = [index[x * g] for x in self.elems]
            self._rrows[j] = row
        return row

    def lrow(self, j):
        """Left multiplication row: lrow(j)[i] = index of elems[j] * elems[i]."""
        row = self._lrows.get(j)
        if row is None:
            g = self.elems[j]
            index = self.index
            row = [index[g * x] for x in self.elems]
            self._lrows[j] = row
        return row

    def orders(self):
        if self._orders is None:
            self._orders = [g.order() for g in self.elems]
        return self._orders

    def mul(self, i, j):
        return self.rrow(j)[i]

    def conj(self, i, j):
        """elems[j] * elems[i] * elems[j]^-1."""
        jinv = self.inv_table()[j]
        return self.lrow(j)[self.rrow(jinv)[i]]

    # -- closures -----------------------------------------------------------

    def close(self, seeds, gen_idxs, cap=None):
        """Indices of the subgroup generated by seeds and gens; seeds must
        contain the identity or be extendable by it."""
        seen = dict.fromkeys(seeds)
        if self.id_idx not in seen:
            seen = dict.fromkeys([self.id_idx] + list(seeds))
        rows = [self.rrow(j) for j in gen_idxs]
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for row in rows:
                y = row[x]
                if y not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise ResourceLimitError("dense closure cap", partial=len(seen))
                    seen[y] = None
                    queue.append(y)
        return list(seen)

    def span(self, needed, cap=None):
        """(elements, generators) of the subgroup generated by `needed`,
        with a greedily chosen small generating subset (all indices)."""
        gens = []
        elems = [self.id_idx]
        current = {self.id_idx}
        for x in needed:
            if x not in current:
                gens.append(x)
                elems = self.close(elems, gens, cap=cap)
                current = set(elems)
        return elems, gens

    # -- conjugacy ------------------------------------------------------------

    def _conj_gen_rows(self):
        inv = self.inv_table()
        rows = []
        for g in self.group.gens:
            j = self.index[g]
            rows.append((self.lrow(j), self.rrow(inv[j])))
        return rows

    def class_orbit(self, i):
        rows = self._conj_gen_rows()
        orbit = dict.fromkeys([i])
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for lr, rr in rows:
                y = lr[rr[x]]
                if y not in orbit:
                    orbit[y] = None
                    queue.append(y)
        return list(orbit)

    def classes(self):
        """All conjugacy classes as index lists, with a class-id table."""
        if self._classes is None:
            class_of = [-1] * self.n
            classes = []
            for i in range(self.n):
                if class_of[i] < 0:
                    orbit = self.class_orbit(i)
                    cid = len(classes)
                    for x in orbit:
                        class_of[x] = cid
                    classes.append(orbit)
            self._classes = classes
            self._class_of = class_of
        return self._classes

    def class_of(self):
        self.classes()
        return self._class_of

    # -- conversions ------------------------------------------------------------

    def subgroup_from_indices(self, idxs, gen_idxs):
        from .groups import FiniteGroup

        elems = [self.elems[i] for i in idxs]
        gens = [self.elems[i] for i in gen_idxs]
        return FiniteGroup._from_elements(elems, gens, cap=self.group.cap)
