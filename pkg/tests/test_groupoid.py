"""Groupoid kernel: construction, validation, fibers, multipliers, isotropy."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupalg import (NotClosed, NotRelationGroupoid, UnknownLabel,
                      UnknownObject, build_from_relation, isotropy,
                      isotropy_bundle, multipliers, validate)
from groupalg.builders import (cyclic_table, disjoint_union, group_groupoid,
                               pair_groupoid, product)
from groupalg.groupoid import FiniteGroupoid, relation_isomorphism


def brute_force_closure(pairs):
    """Independent oracle: grow the pair set until nothing new appears."""
    closed = set(pairs)
    support = {z for p in closed for z in p}
    closed |= {(x, x) for x in support}
    changed = True
    while changed:
        changed = False
        for x, y in list(closed):
            if (y, x) not in closed:
                closed.add((y, x))
                changed = True
        for x, y in list(closed):
            for u, z in list(closed):
                if y == u and (x, z) not in closed:
                    closed.add((x, z))
                    changed = True
    return closed


class TestBuildFromRelation:
    def test_single_unit(self):
        G = build_from_relation(["x"], [("x", "x")], "strict")
        assert G.n_objects == 1 and G.n_arrows == 1
        assert G.is_unit(0)

    def test_strict_transitivity_witness(self):
        with pytest.raises(NotClosed) as exc:
            build_from_relation(["a", "b", "c"], [("a", "b"), ("b", "c")], "strict")
        assert exc.value.witness == ("a", "c")

    def test_complete_closure_matches_brute_force(self):
        pairs = [("a", "b"), ("b", "c")]
        G = build_from_relation(["a", "b", "c"], pairs, "complete")
        want = brute_force_closure(pairs)
        got = {(t, s) for t, s in G.relation_pairs()}
        assert got == want
        assert G.n_arrows == 9
        assert validate(G).ok

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            build_from_relation(["a"], [("a", "z")], "strict")

    def test_support_restriction(self):
        G = build_from_relation(["a", "b", "c"], [("a", "a")], "strict")
        assert G.objects == ["a"]

    def test_strict_missing_symmetry(self):
        with pytest.raises(NotClosed) as exc:
            build_from_relation(["a", "b"],
                                [("a", "a"), ("b", "b"), ("a", "b")], "strict")
        assert exc.value.witness == ("b", "a")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=12))
def test_complete_mode_always_builds_a_groupoid(int_pairs):
    labels = [f"o{i}" for i in range(5)]
    pairs = [(labels[i], labels[j]) for i, j in int_pairs]
    if not pairs:
        return
    G = build_from_relation(labels, pairs, "complete")
    assert validate(G).ok
    got = {(t, s) for t, s in G.relation_pairs()}
    assert got == brute_force_closure(pairs)


class TestValidate:
    def test_pair3_clean(self):
        assert validate(pair_groupoid("abc")).ok

    def test_corrupted_composition_detected(self):
        G = pair_groupoid("abc")
        table = dict(G.compose_table)
        # redirect one non-unit composite to a wrong arrow with same endpoints profile
        (key, old) = next((k, v) for k, v in sorted(table.items())
                          if not G.is_unit(v))
        table[key] = G.unit_of[0]
        bad = FiniteGroupoid(G.objects, G.src, G.tgt, table, G.inverse, G.unit_of)
        rep = validate(bad)
        assert not rep.ok
        assert any(e.check in ("compose-endpoints", "associativity", "unit-law",
                               "inverse-law") for e in rep.errors)

    def test_missing_unit_names_object(self):
        G = pair_groupoid("ab")
        units = list(G.unit_of)
        units[1] = None
        bad = FiniteGroupoid(G.objects, G.src, G.tgt, G.compose_table,
                             G.inverse, units)
        rep = validate(bad)
        assert any(e.check == "unit-missing" and "b" in e.witness for e in rep.errors)

    def test_inverse_endpoint_violation(self):
        G = pair_groupoid("ab")
        inv = list(G.inverse)
        inv[1] = 1  # (a,b) declared self-inverse: endpoints do not swap
        bad = FiniteGroupoid(G.objects, G.src, G.tgt, G.compose_table, inv,
                             G.unit_of)
        assert any(e.check == "inverse-endpoints" for e in validate(bad).errors)


class TestFibers:
    def test_pair3_target_fiber_enumeration(self):
        G = pair_groupoid("abc")
        a = G.object_index("a")
        # oracle: filter all arrows by their stored target
        want = tuple(k for k in range(G.n_arrows) if G.tgt[k] == a)
        assert G.target_fiber(a) == want
        assert {(G.objects[G.tgt[k]], G.objects[G.src[k]]) for k in want} == \
            {("a", "a"), ("a", "b"), ("a", "c")}

    def test_single_unit_fiber(self):
        G = build_from_relation(["x"], [("x", "x")], "strict")
        assert G.target_fiber(0) == (0,)
        assert G.source_fiber(0) == (0,)

    def test_disjoint_union_fibers_stay_in_component(self):
        G = disjoint_union(pair_groupoid("ab"), pair_groupoid("cd"))
        c = G.object_index("c")
        fiber = G.target_fiber(c)
        assert all(G.objects[G.src[k]] in ("c", "d") for k in fiber)
        assert len(fiber) == 2

    def test_unknown_object(self):
        with pytest.raises(UnknownObject):
            pair_groupoid("ab").target_fiber(5)


class TestMultipliers:
    def test_full_pair_everything(self):
        G = pair_groupoid("abcd")
        ms = multipliers(G)
        assert ms.left == ms.right == ms.ideal == (0, 1, 2, 3)
        assert ms.certificate.ok

    def test_exhaustive_scan_oracle(self):
        # relation {(a,a),(a,b),(b,b)} completed
        G = build_from_relation(["a", "b"], [("a", "a"), ("a", "b"), ("b", "b")],
                                "complete")
        pairs = {(t, s) for t, s in G.relation_pairs()}
        labels = G.objects
        left_oracle = {x for x in labels if all((x, u) in pairs for u in labels)}
        right_oracle = {y for y in labels if all((v, y) in pairs for v in labels)}
        ms = multipliers(G)
        assert {labels[i] for i in ms.left} == left_oracle
        assert {labels[i] for i in ms.right} == right_oracle
        assert {labels[i] for i in ms.ideal} == left_oracle & right_oracle

    def test_two_orbits_empty_ideal(self):
        G = disjoint_union(pair_groupoid("ab"), pair_groupoid("cd"))
        ms = multipliers(G)
        assert ms.left == () and ms.right == () and ms.ideal == ()
        assert ms.certificate.ok

    def test_isotropy_rejected(self):
        Z2 = group_groupoid(*cyclic_table(2))
        with pytest.raises(NotRelationGroupoid):
            multipliers(Z2)


class TestIsotropy:
    def test_pair_groupoid_trivial(self):
        G = pair_groupoid("abc")
        for x in range(3):
            assert isotropy(G, x).order == 1

    def test_z2_isotropy_everywhere(self):
        G = product(pair_groupoid("abc"), group_groupoid(*cyclic_table(2)))
        z2 = cyclic_table(2)[1]
        for x in range(3):
            iso = isotropy(G, x)
            assert iso.order == 2
            # group-table comparison against the abstract Z2 table
            relabel = {iso.unit_index: 0, 1 - iso.unit_index: 1}
            got = {(relabel[i], relabel[j]): relabel[iso.mult(i, j)]
                   for i in range(2) for j in range(2)}
            assert got == {(i, j): z2[i][j] for i in range(2) for j in range(2)}

    def test_bundle_counts_and_validates(self):
        G = product(pair_groupoid("abc"), group_groupoid(*cyclic_table(2)))
        xi = isotropy_bundle(G)
        assert xi.n_objects == 3 and xi.n_arrows == 6
        assert validate(xi).ok
        assert xi.orbits() == [[0], [1], [2]]


class TestOrbits:
    def test_pair_single_block(self):
        assert pair_groupoid("abc").orbits() == [[0, 1, 2]]

    def test_union_two_blocks(self):
        G = disjoint_union(pair_groupoid("ab"), pair_groupoid("cd"))
        assert G.orbits() == [[0, 1], [2, 3]]

    def test_reachability_oracle(self):
        G = build_from_relation(
            ["a", "b", "c", "d", "e"],
            [("a", "b"), ("c", "d"), ("e", "e")], "complete")
        # oracle: breadth-first reachability over undirected arrow endpoints
        adj = {x: set() for x in range(G.n_objects)}
        for k in range(G.n_arrows):
            adj[G.src[k]].add(G.tgt[k])
            adj[G.tgt[k]].add(G.src[k])
        seen, blocks = set(), []
        for x in range(G.n_objects):
            if x in seen:
                continue
            frontier, block = [x], set()
            while frontier:
                v = frontier.pop()
                if v in block:
                    continue
                block.add(v)
                frontier.extend(adj[v] - block)
            seen |= block
            blocks.append(sorted(block))
        assert G.orbits() == blocks

    def test_fiber_sizes_constant_on_orbits(self):
        G = product(pair_groupoid("abc"), group_groupoid(*cyclic_table(3)))
        sizes = {len(G.target_fiber(x)) for x in range(G.n_objects)}
        assert len(sizes) == 1


class TestRelationView:
    def test_involution_squared_and_endpoint_swap(self):
        G = pair_groupoid("abcd")
        for a in range(G.n_arrows):
            assert G.inverse[G.inverse[a]] == a
            assert (G.tgt[G.inverse[a]], G.src[G.inverse[a]]) == (G.src[a], G.tgt[a])

    def test_relation_isomorphism_found(self):
        A = build_from_relation(list("wxyz"), [("w", "x"), ("y", "z")], "complete")
        B = build_from_relation(list("pqrs"), [("p", "q"), ("r", "s")], "complete")
        phi = relation_isomorphism(A, B)
        assert phi is not None

    def test_relation_isomorphism_absent(self):
        A = build_from_relation(list("abc"), [("a", "b")], "complete")
        B = build_from_relation(list("abc"), [("a", "b"), ("b", "c")], "complete")
        assert relation_isomorphism(A, B) is None


def test_pair_groupoid_agrees_with_relation_constructor():
    # independent construction paths must coincide arrow-for-arrow
    for n in (2, 3, 4):
        labels = [chr(ord("a") + i) for i in range(n)]
        direct = pair_groupoid(labels)
        rel = build_from_relation(labels, list(itertools.product(labels, labels)),
                                  "strict")
        assert direct.objects == rel.objects
        assert direct.relation_pairs() == rel.relation_pairs()
        assert direct.compose_table == rel.compose_table
        assert direct.inverse == rel.inverse
