"""Finite groupoids as explicit composition tables.

A finite groupoid is a small category in which every arrow is invertible:
a list of objects, a list of arrows with source and target, a composition
defined exactly on endpoint-matching pairs, a unit arrow per object, and an
inversion.  Composition is function-like: ``compose(g, h)`` is defined when
``src(g) == tgt(h)`` and runs ``h`` first.

Relation-derived groupoids model a partially defined multiplication on a
set: the ordered pair ``(x, y)`` is an arrow with target ``x`` and source
``y`` exactly when the product ``x*y`` is declared.  Then composition is
``(x, y) o (y, z) = (x, z)``, inversion swaps the slots, and the unit at
``x`` is ``(x, x)``.  Such groupoids carry at most one arrow per ordered
pair of objects; general groupoids may have isotropy (parallel loops).

All tables are plain Python lists and dicts; every enumeration follows the
stored object/arrow order, so reports are reproducible.  Instances are
treated as immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (GroupalgError, NotClosed, NotRelationGroupoid, UnknownLabel,
                     UnknownObject)
from .report import Report


@dataclass(frozen=True)
class Arrow:
    """One arrow, identified by its integer index within the groupoid."""

    id: int
    tgt: int
    src: int


def _auto_ids(n: int) -> list[str]:
    width = max(2, len(str(max(n - 1, 0))))
    return [f"a{i:0{width}d}" for i in range(n)]


class FiniteGroupoid:
    """Explicit-table groupoid; construction checks shapes, not axioms.

    The constructor only verifies that indices are in range, so deliberately
    corrupted tables can be built and then diagnosed with :func:`validate`.
    ``unit_of`` entries may be ``None`` for objects whose unit is missing
    (validate reports them).
    """

    def __init__(self, objects, src, tgt, compose_table, inverse, unit_of,
                 arrow_ids=None):
        self.objects: list[str] = [str(o) for o in objects]
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object labels must be distinct")
        self.src: list[int] = [int(s) for s in src]
        self.tgt: list[int] = [int(t) for t in tgt]
        if len(self.src) != len(self.tgt):
            raise ValueError("src and tgt lists differ in length")
        n_obj, n_arr = len(self.objects), len(self.src)
        for v in self.src + self.tgt:
            if not 0 <= v < n_obj:
                raise ValueError(f"object index {v} out of range")
        self.compose_table: dict[tuple[int, int], int] = {
            (int(a), int(b)): int(c) for (a, b), c in dict(compose_table).items()
        }
        for (a, b), c in self.compose_table.items():
            if not (0 <= a < n_arr and 0 <= b < n_arr and 0 <= c < n_arr):
                raise ValueError(f"compose entry ({a},{b})->{c} out of range")
        self.inverse: list[int] = [int(i) for i in inverse]
        if len(self.inverse) != n_arr or any(not 0 <= i < n_arr for i in self.inverse):
            raise ValueError("inverse table malformed")
        self.unit_of: list[int | None] = [None if u is None else int(u) for u in unit_of]
        if len(self.unit_of) != n_obj:
            raise ValueError("unit table must have one entry per object")
        for u in self.unit_of:
            if u is not None and not 0 <= u < n_arr:
                raise ValueError(f"unit index {u} out of range")
        self.arrow_ids: list[str] = list(arrow_ids) if arrow_ids else _auto_ids(n_arr)
        if len(self.arrow_ids) != n_arr or len(set(self.arrow_ids)) != n_arr:
            raise ValueError("arrow ids must be unique, one per arrow")
        self._object_index = {lab: i for i, lab in enumerate(self.objects)}
        self._arrow_index = {aid: i for i, aid in enumerate(self.arrow_ids)}
        self._target_fibers: list[tuple[int, ...]] = [() for _ in range(n_obj)]
        self._source_fibers: list[tuple[int, ...]] = [() for _ in range(n_obj)]
        tf: list[list[int]] = [[] for _ in range(n_obj)]
        sf: list[list[int]] = [[] for _ in range(n_obj)]
        for a in range(n_arr):
            tf[self.tgt[a]].append(a)
            sf[self.src[a]].append(a)
        self._target_fibers = [tuple(v) for v in tf]
        self._source_fibers = [tuple(v) for v in sf]
        self._conv_plan = None
        self._by_endpoints: dict[tuple[int, int], int] | None = None

    # -- basic structure ---------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    def arrow(self, a: int) -> Arrow:
        return Arrow(a, self.tgt[a], self.src[a])

    def object_index(self, label: str) -> int:
        try:
            return self._object_index[label]
        except KeyError:
            raise UnknownLabel(f"unknown object label {label!r}") from None

    def arrow_index(self, arrow_id: str) -> int:
        try:
            return self._arrow_index[arrow_id]
        except KeyError:
            raise UnknownLabel(f"unknown arrow id {arrow_id!r}") from None

    def _check_object(self, x: int) -> None:
        if not 0 <= x < self.n_objects:
            raise UnknownObject(f"object index {x} out of range")

    def target_fiber(self, x: int) -> tuple[int, ...]:
        """All arrows into ``x`` (tgt == x)."""
        self._check_object(x)
        return self._target_fibers[x]

    def source_fiber(self, y: int) -> tuple[int, ...]:
        """All arrows out of ``y`` (src == y)."""
        self._check_object(y)
        return self._source_fibers[y]

    def compose(self, a: int, b: int) -> int:
        """Composite ``a o b`` (b first); raises if the pair is not in the table."""
        try:
            return self.compose_table[(a, b)]
        except KeyError:
            raise ValueError(
                f"arrows {self.arrow_ids[a]} and {self.arrow_ids[b]} do not compose"
            ) from None

    def composable_pairs(self) -> list[tuple[int, int]]:
        """All (a, b) with src(a) == tgt(b), in object-then-arrow order."""
        pairs = []
        for y in range(self.n_objects):
            for a in self._source_fibers[y]:
                for b in self._target_fibers[y]:
                    pairs.append((a, b))
        return pairs

    def is_unit(self, a: int) -> bool:
        x = self.tgt[a]
        return self.src[a] == x and self.unit_of[x] == a

    # -- relation view -----------------------------------------------------

    def is_relation_groupoid(self) -> bool:
        """True when every loop is a unit and endpoints identify arrows."""
        seen: set[tuple[int, int]] = set()
        for a in range(self.n_arrows):
            if self.tgt[a] == self.src[a] and not self.is_unit(a):
                return False
            key = (self.tgt[a], self.src[a])
            if key in seen:
                return False
            seen.add(key)
        return True

    def arrow_by_endpoints(self, tgt: int, src: int) -> int | None:
        """The unique arrow tgt<-src, for relation-derived groupoids."""
        if self._by_endpoints is None:
            table: dict[tuple[int, int], int] = {}
            for a in range(self.n_arrows):
                key = (self.tgt[a], self.src[a])
                if key in table:
                    raise NotRelationGroupoid(
                        "groupoid has parallel arrows; endpoints are ambiguous")
                table[key] = a
            self._by_endpoints = table
        return self._by_endpoints.get((tgt, src))

    def relation_pairs(self) -> list[tuple[str, str]]:
        """Label pairs (tgt, src) of all arrows, i.e. the declared products."""
        if not self.is_relation_groupoid():
            raise NotRelationGroupoid("groupoid has isotropy beyond units")
        return [(self.objects[self.tgt[a]], self.objects[self.src[a]])
                for a in range(self.n_arrows)]

    # -- reachability ------------------------------------------------------

    def orbits(self) -> list[list[int]]:
        """Partition of the objects by arrow reachability, block-sorted."""
        parent = list(range(self.n_objects))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a in range(self.n_arrows):
            ri, rj = find(self.tgt[a]), find(self.src[a])
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        blocks: dict[int, list[int]] = {}
        for x in range(self.n_objects):
            blocks.setdefault(find(x), []).append(x)
        return [sorted(b) for _, b in sorted(blocks.items())]

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    # -- convolution support -----------------------------------------------

    def convolution_plan(self):
        """Cached triples (out, left, right) with out = left o right.

        For every arrow ``out`` and every ``left`` in the target fiber of
        ``tgt(out)``, ``right = inverse(left) o out``.  Returned as three
        parallel numpy int arrays; used by the convolution kernels.
        """
        if self._conv_plan is None:
            import numpy as np

            outs, lefts, rights = [], [], []
            for out in range(self.n_arrows):
                for left in self._target_fibers[self.tgt[out]]:
                    right = self.compose_table.get((self.inverse[left], out))
                    if right is None:
                        raise GroupalgError("compose table incomplete; validate first")
                    outs.append(out)
                    lefts.append(left)
                    rights.append(right)
            self._conv_plan = (np.asarray(outs, dtype=np.intp),
                               np.asarray(lefts, dtype=np.intp),
                               np.asarray(rights, dtype=np.intp))
        return self._conv_plan

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.n_objects} objects, {self.n_arrows} arrows)"


# ---------------------------------------------------------------------------
# construction from a relation

def _closure(objects: list[str], pairs: list[tuple[str, str]]):
    """Reflexive-symmetric-transitive closure on the support, via union-find."""
    support = []
    seen = set()
    for x, y in pairs:
        for lab in (x, y):
            if lab not in seen:
                seen.add(lab)
                support.append(lab)
    order = {lab: objects.index(lab) for lab in support}
    support.sort(key=lambda lab: order[lab])
    idx = {lab: i for i, lab in enumerate(support)}
    parent = list(range(len(support)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x, y in pairs:
        ri, rj = find(idx[x]), find(idx[y])
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    closed = [(x, y) for x in support for y in support
              if find(idx[x]) == find(idx[y])]
    return support, closed


def build_from_relation(objects, pairs, closure_policy: str = "strict") -> FiniteGroupoid:
    """Groupoid of a relation: one arrow per declared ordered pair.

    The pair ``(x, y)`` declares the product ``x*y`` and becomes the arrow
    with target ``x`` and source ``y``.  ``strict`` rejects (NotClosed) any
    relation that is not reflexive-on-support, symmetric and transitive;
    ``complete`` closes the relation first.  Either way the groupoid lives
    on the objects touched by the pairs, in the order given by ``objects``.
    """
    objects = [str(o) for o in objects]
    if len(set(objects)) != len(objects):
        raise ValueError("object labels must be distinct")
    known = set(objects)
    pairs = [(str(x), str(y)) for x, y in pairs]
    for x, y in pairs:
        if x not in known or y not in known:
            bad = x if x not in known else y
            raise UnknownLabel(f"pair ({x}, {y}) references unknown label {bad!r}")
    if closure_policy not in ("strict", "complete"):
        raise ValueError(f"unknown closure_policy {closure_policy!r}")

    pair_set = set(pairs)
    support = [o for o in objects if any(o in p for p in pair_set)]
    if closure_policy == "strict":
        for x, y in pairs:
            for u, z in pairs:
                if y == u and (x, z) not in pair_set:
                    raise NotClosed(f"missing composite pair ({x}, {z})", (x, z))
        for x, y in pairs:
            if (y, x) not in pair_set:
                raise NotClosed(f"missing inverse pair ({y}, {x})", (y, x))
        for x in support:
            if (x, x) not in pair_set:
                raise NotClosed(f"missing unit pair ({x}, {x})", (x, x))
        closed = sorted(pair_set, key=lambda p: (objects.index(p[0]), objects.index(p[1])))
    else:
        support, closed = _closure(objects, pairs)
        closed.sort(key=lambda p: (support.index(p[0]), support.index(p[1])))

    idx = {lab: i for i, lab in enumerate(support)}
    tgt = [idx[x] for x, _ in closed]
    src = [idx[y] for _, y in closed]
    by_pair = {(idx[x], idx[y]): a for a, (x, y) in enumerate(closed)}
    compose_table = {}
    for a, (x, y) in enumerate(closed):
        for b, (u, z) in enumerate(closed):
            if idx[y] == idx[u]:
                compose_table[(a, b)] = by_pair[(idx[x], idx[z])]
    inverse = [by_pair[(src[a], tgt[a])] for a in range(len(closed))]
    unit_of = [by_pair[(x, x)] for x in range(len(support))]
    return FiniteGroupoid(support, src, tgt, compose_table, inverse, unit_of)


# ---------------------------------------------------------------------------
# axiom validation

def validate(G: FiniteGroupoid) -> Report:
    """Exhaustively check the groupoid axioms; violations become entries.

    Checks: composition defined exactly on endpoint-matching pairs with the
    right endpoints, associativity on all composable triples, unit laws, and
    inverse laws.  Each entry carries a minimal witness in arrow/object ids.
    """
    rep = Report("groupoid-axioms")
    aid = G.arrow_ids

    for (a, b), c in sorted(G.compose_table.items()):
        if G.src[a] != G.tgt[b]:
            rep.add("compose-domain",
                    f"table defines {aid[a]} o {aid[b]} but src/tgt do not match")
        else:
            if G.tgt[c] != G.tgt[a] or G.src[c] != G.src[b]:
                rep.add("compose-endpoints",
                        f"{aid[a]} o {aid[b]} = {aid[c]} has wrong endpoints")
    for a, b in G.composable_pairs():
        if (a, b) not in G.compose_table:
            rep.add("compose-missing", f"{aid[a]} o {aid[b]} undefined")

    for a, b in G.composable_pairs():
        ab = G.compose_table.get((a, b))
        if ab is None:
            continue
        for c in G._target_fibers[G.src[b]]:
            bc = G.compose_table.get((b, c))
            ab_c = G.compose_table.get((ab, c))
            a_bc = G.compose_table.get((a, bc)) if bc is not None else None
            if bc is None or ab_c is None or a_bc is None:
                continue
            if ab_c != a_bc:
                rep.add("associativity",
                        f"({aid[a]} o {aid[b]}) o {aid[c]} = {aid[ab_c]} "
                        f"!= {aid[a_bc]} = {aid[a]} o ({aid[b]} o {aid[c]})")

    for x in range(G.n_objects):
        u = G.unit_of[x]
        if u is None:
            rep.add("unit-missing", f"object {G.objects[x]} has no unit arrow")
            continue
        if G.tgt[u] != x or G.src[u] != x:
            rep.add("unit-endpoints", f"unit of {G.objects[x]} is {aid[u]}, not a loop at it")
    for a in range(G.n_arrows):
        us, ut = G.unit_of[G.src[a]], G.unit_of[G.tgt[a]]
        if us is not None and G.compose_table.get((a, us)) not in (None, a):
            rep.add("unit-law", f"{aid[a]} o unit({G.objects[G.src[a]]}) != {aid[a]}")
        if ut is not None and G.compose_table.get((ut, a)) not in (None, a):
            rep.add("unit-law", f"unit({G.objects[G.tgt[a]]}) o {aid[a]} != {aid[a]}")

    for a in range(G.n_arrows):
        inv = G.inverse[a]
        if G.tgt[inv] != G.src[a] or G.src[inv] != G.tgt[a]:
            rep.add("inverse-endpoints", f"inverse({aid[a]}) = {aid[inv]} does not swap endpoints")
            continue
        if G.inverse[inv] != a:
            rep.add("inverse-involution", f"inverse(inverse({aid[a]})) = {aid[G.inverse[inv]]}")
        ut, us = G.unit_of[G.tgt[a]], G.unit_of[G.src[a]]
        got = G.compose_table.get((a, inv))
        if ut is not None and got not in (None, ut):
            rep.add("inverse-law", f"{aid[a]} o {aid[inv]} != unit({G.objects[G.tgt[a]]})")
        got = G.compose_table.get((inv, a))
        if us is not None and got not in (None, us):
            rep.add("inverse-law", f"{aid[inv]} o {aid[a]} != unit({G.objects[G.src[a]]})")
    return rep


# ---------------------------------------------------------------------------
# multipliers of a relation groupoid

@dataclass(frozen=True)
class MultiplierSets:
    """Left/right multiplier objects of a relation groupoid and their intersection."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    ideal: tuple[int, ...]
    certificate: Report


def multipliers(G: FiniteGroupoid) -> MultiplierSets:
    """Objects that multiply everything on one side, plus the two-sided ideal.

    ``left`` is every object x with (x, u) declared for all u, i.e. whose
    target fiber reaches every object; ``right`` mirrors it on sources.  The
    certificate re-checks closure from scratch: composing any arrow incident
    to an ideal object with any endpoint-compatible arrow must land on a
    declared pair again.
    """
    if not G.is_relation_groupoid():
        raise NotRelationGroupoid("multipliers need a relation-derived groupoid")
    n = G.n_objects
    everything = set(range(n))
    left = tuple(x for x in range(n)
                 if {G.src[a] for a in G.target_fiber(x)} == everything)
    right = tuple(y for y in range(n)
                  if {G.tgt[a] for a in G.source_fiber(y)} == everything)
    ideal = tuple(sorted(set(left) & set(right)))

    cert = Report("multiplier-ideal-closure")
    declared = {(G.tgt[a], G.src[a]) for a in range(G.n_arrows)}
    for x in ideal:
        incident = sorted(set(G.target_fiber(x)) | set(G.source_fiber(x)))
        for a in incident:
            for b in G.source_fiber(G.tgt[a]):
                if (G.tgt[b], G.src[a]) not in declared:
                    cert.add("ideal-closure",
                             f"pair ({G.objects[G.tgt[b]]}, {G.objects[G.src[a]]}) "
                             f"missing for ideal object {G.objects[x]}")
            for b in G.target_fiber(G.src[a]):
                if (G.tgt[a], G.src[b]) not in declared:
                    cert.add("ideal-closure",
                             f"pair ({G.objects[G.tgt[a]]}, {G.objects[G.src[b]]}) "
                             f"missing for ideal object {G.objects[x]}")
    return MultiplierSets(left, right, ideal, cert)


# ---------------------------------------------------------------------------
# isotropy

class IsotropyGroup:
    """The group of loops at one object, with an index-level Cayley table."""

    def __init__(self, G: FiniteGroupoid, x: int):
        G._check_object(x)
        self.groupoid = G
        self.object = x
        self.arrows: tuple[int, ...] = tuple(
            a for a in G.target_fiber(x) if G.src[a] == x)
        index = {a: i for i, a in enumerate(self.arrows)}
        u = G.unit_of[x]
        if u is None or u not in index:
            raise ValueError(f"object {G.objects[x]} has no unit loop")
        self.unit_index = index[u]
        self.table = [[index[G.compose(a, b)] for b in self.arrows]
                      for a in self.arrows]
        self.inverse_table = [index[G.inverse[a]] for a in self.arrows]

    @property
    def order(self) -> int:
        return len(self.arrows)

    def mult(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse_table[i]

    def index_of(self, arrow: int) -> int:
        return self.arrows.index(arrow)

    def is_abelian(self) -> bool:
        k = self.order
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(k) for j in range(k))


def isotropy(G: FiniteGroupoid, x: int) -> IsotropyGroup:
    """The isotropy group at object ``x``: arrows x -> x under composition."""
    return IsotropyGroup(G, x)


def isotropy_bundle(G: FiniteGroupoid) -> FiniteGroupoid:
    """The disjoint union of all isotropy groups, as a groupoid on the same objects."""
    loops = [a for a in range(G.n_arrows) if G.tgt[a] == G.src[a]]
    new_index = {a: i for i, a in enumerate(loops)}
    src = [G.src[a] for a in loops]
    tgt = [G.tgt[a] for a in loops]
    compose_table = {}
    for a in loops:
        for b in loops:
            if G.src[a] == G.tgt[b]:
                compose_table[(new_index[a], new_index[b])] = new_index[G.compose(a, b)]
    inverse = [new_index[G.inverse[a]] for a in loops]
    unit_of = [None if G.unit_of[x] is None else new_index.get(G.unit_of[x])
               for x in range(G.n_objects)]
    return FiniteGroupoid(G.objects, src, tgt, compose_table, inverse, unit_of)


# ---------------------------------------------------------------------------
# structure-preserving maps

@dataclass(frozen=True)
class GroupoidMorphism:
    """Object and arrow maps from one groupoid into another."""

    object_map: tuple[int, ...]
    arrow_map: tuple[int, ...]


def morphism_report(A: FiniteGroupoid, B: FiniteGroupoid, phi: GroupoidMorphism,
                    require_injective: bool = False, title: str = "morphism") -> Report:
    """Check that ``phi`` preserves src, tgt, units, composition and inverses."""
    rep = Report(title)
    om, am = phi.object_map, phi.arrow_map
    if len(om) != A.n_objects or len(am) != A.n_arrows:
        rep.add("shape", "object/arrow map lengths do not match the domain groupoid")
        return rep
    if any(not 0 <= x < B.n_objects for x in om) or \
       any(not 0 <= a < B.n_arrows for a in am):
        rep.add("shape", "map hits an index outside the codomain groupoid")
        return rep
    if require_injective:
        if len(set(om)) != len(om):
            rep.add("injectivity", "object map identifies two objects")
        if len(set(am)) != len(am):
            rep.add("injectivity", "arrow map identifies two arrows")
    for a in range(A.n_arrows):
        if B.src[am[a]] != om[A.src[a]] or B.tgt[am[a]] != om[A.tgt[a]]:
            rep.add("endpoints", f"arrow {A.arrow_ids[a]} maps with wrong src/tgt")
        if B.inverse[am[a]] != am[A.inverse[a]]:
            rep.add("inverse", f"arrow {A.arrow_ids[a]}: inverse not preserved")
    for x in range(A.n_objects):
        ua, ub = A.unit_of[x], B.unit_of[om[x]]
        if ua is not None and (ub is None or am[ua] != ub):
            rep.add("units", f"unit of {A.objects[x]} not sent to a unit")
    for (a, b), c in sorted(A.compose_table.items()):
        got = B.compose_table.get((am[a], am[b]))
        if got != am[c]:
            rep.add("composition",
                    f"{A.arrow_ids[a]} o {A.arrow_ids[b]}: image composite disagrees")
    return rep


def relation_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid) -> GroupoidMorphism | None:
    """Explicit isomorphism between two relation groupoids, if one exists.

    Orbits of a relation groupoid are complete blocks, so the groupoids are
    isomorphic exactly when their orbit-size multisets agree; the returned
    map pairs blocks by (size, smallest label) and objects label-sorted
    within each block.  Returns None when the size multisets differ.
    """
    if not (G.is_relation_groupoid() and H.is_relation_groupoid()):
        raise NotRelationGroupoid("relation_isomorphism needs relation groupoids")

    def keyed_blocks(K: FiniteGroupoid):
        blocks = K.orbits()
        return sorted(blocks, key=lambda b: (len(b), min(K.objects[x] for x in b)))

    bg, bh = keyed_blocks(G), keyed_blocks(H)
    if [len(b) for b in bg] != [len(b) for b in bh]:
        return None
    if G.n_arrows != H.n_arrows:
        return None
    obj_map = [0] * G.n_objects
    for blk_g, blk_h in zip(bg, bh):
        gs = sorted(blk_g, key=lambda x: G.objects[x])
        hs = sorted(blk_h, key=lambda x: H.objects[x])
        for x, y in zip(gs, hs):
            obj_map[x] = y
    arrow_map = []
    for a in range(G.n_arrows):
        b = H.arrow_by_endpoints(obj_map[G.tgt[a]], obj_map[G.src[a]])
        if b is None:
            return None
        arrow_map.append(b)
    phi = GroupoidMorphism(tuple(obj_map), tuple(arrow_map))
    if not morphism_report(G, H, phi, require_injective=True).ok:
        return None
    return phi
