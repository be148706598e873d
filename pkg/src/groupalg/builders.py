"""Stock groupoids: pair groupoids, one-object groups, products, unions."""

from __future__ import annotations

import itertools

from .groupoid import FiniteGroupoid


def pair_groupoid(labels) -> FiniteGroupoid:
    """The full pair groupoid on ``labels``: one arrow per ordered pair.

    Arrows are ordered target-major, so arrow t*n + s runs s -> t.
    """
    labels = [str(x) for x in labels]
    n = len(labels)
    tgt = [k // n for k in range(n * n)]
    src = [k % n for k in range(n * n)]
    compose_table = {}
    for t1 in range(n):
        for s1 in range(n):
            for s2 in range(n):
                compose_table[(t1 * n + s1, s1 * n + s2)] = t1 * n + s2
    inverse = [src[k] * n + tgt[k] for k in range(n * n)]
    unit_of = [x * n + x for x in range(n)]
    return FiniteGroupoid(labels, src, tgt, compose_table, inverse, unit_of)


def group_groupoid(elements, table, object_label: str = "*") -> FiniteGroupoid:
    """A finite group as a one-object groupoid; ``table[i][j]`` indexes e_i e_j."""
    elements = [str(e) for e in elements]
    n = len(elements)
    unit = None
    for e in range(n):
        if all(table[e][j] == j and table[j][e] == j for j in range(n)):
            unit = e
            break
    if unit is None:
        raise ValueError("multiplication table has no identity element")
    inverse = []
    for i in range(n):
        js = [j for j in range(n) if table[i][j] == unit and table[j][i] == unit]
        if len(js) != 1:
            raise ValueError(f"element {elements[i]} has no unique inverse")
        inverse.append(js[0])
    compose_table = {(i, j): table[i][j] for i in range(n) for j in range(n)}
    return FiniteGroupoid([object_label], [0] * n, [0] * n, compose_table,
                          inverse, [unit], arrow_ids=elements)


def cyclic_table(n: int) -> tuple[list[str], list[list[int]]]:
    elements = [f"g{k}" for k in range(n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return elements, table


def klein_table() -> tuple[list[str], list[list[int]]]:
    elements = ["e", "a", "b", "ab"]
    table = [[i ^ j for j in range(4)] for i in range(4)]
    return elements, table


def symmetric_table(n: int) -> tuple[list[str], list[list[int]]]:
    """The symmetric group on n letters; composition applies the right factor first."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    elements = ["".join(map(str, p)) for p in perms]
    table = [[index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms]
    return elements, table


def product(G: FiniteGroupoid, H: FiniteGroupoid) -> FiniteGroupoid:
    """Direct product groupoid: everything componentwise.

    Object labels are "g|h", except that a one-object factor keeps the other
    factor's labels unchanged.
    """
    if H.n_objects == 1:
        labels = list(G.objects)
    elif G.n_objects == 1:
        labels = list(H.objects)
    else:
        labels = [f"{g}|{h}" for g in G.objects for h in H.objects]
    no_h, na_h = H.n_objects, H.n_arrows

    def obj(gx, hx):
        return gx * no_h + hx

    def arr(ga, ha):
        return ga * na_h + ha

    src = [obj(G.src[ga], H.src[ha])
           for ga in range(G.n_arrows) for ha in range(na_h)]
    tgt = [obj(G.tgt[ga], H.tgt[ha])
           for ga in range(G.n_arrows) for ha in range(na_h)]
    compose_table = {}
    for (ga, gb), gc in G.compose_table.items():
        for (ha, hb), hc in H.compose_table.items():
            compose_table[(arr(ga, ha), arr(gb, hb))] = arr(gc, hc)
    inverse = [arr(G.inverse[ga], H.inverse[ha])
               for ga in range(G.n_arrows) for ha in range(na_h)]
    unit_of = []
    for gx in range(G.n_objects):
        for hx in range(no_h):
            gu, hu = G.unit_of[gx], H.unit_of[hx]
            unit_of.append(None if gu is None or hu is None else arr(gu, hu))
    return FiniteGroupoid(labels, src, tgt, compose_table, inverse, unit_of)


def disjoint_union(*pieces: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union; clashing object labels get a piece-index prefix."""
    all_labels = [lab for P in pieces for lab in P.objects]
    clash = len(set(all_labels)) != len(all_labels)
    labels, src, tgt, inverse, unit_of = [], [], [], [], []
    compose_table = {}
    obj_off = arr_off = 0
    for k, P in enumerate(pieces):
        labels.extend(f"{k}:{lab}" if clash else lab for lab in P.objects)
        src.extend(s + obj_off for s in P.src)
        tgt.extend(t + obj_off for t in P.tgt)
        inverse.extend(i + arr_off for i in P.inverse)
        unit_of.extend(None if u is None else u + arr_off for u in P.unit_of)
        for (a, b), c in P.compose_table.items():
            compose_table[(a + arr_off, b + arr_off)] = c + arr_off
        obj_off += P.n_objects
        arr_off += P.n_arrows
    return FiniteGroupoid(labels, src, tgt, compose_table, inverse, unit_of)
