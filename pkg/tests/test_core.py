import itertools

import pytest

from palg import (
    FiniteAlgebra,
    StructureError,
    enumerate_embeddings,
    enumerate_homomorphisms,
    generated_subalgebra,
    is_isomorphic,
    is_subdirectly_irreducible,
    make_bn,
    product,
    trivial_algebra,
    validate_palgebra,
)
from palg.core import ResourceLimitError, principal_congruence


def three_chain_stone():
    # 0 < e < 1 with e* = 0: the one-atom subdirectly irreducible
    meet = [[0, 0, 0], [0, 1, 1], [0, 1, 2]]
    join = [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    return FiniteAlgebra(3, meet, join, [2, 0, 0], 0, 2)


class TestValidate:
    def test_bn2_is_valid(self, bn):
        assert validate_palgebra(bn[2]).ok

    def test_bad_star_named_violation(self):
        # two-element Boolean algebra with star redefined as identity
        a = FiniteAlgebra(2, [[0, 0], [0, 1]], [[0, 1], [1, 1]], [0, 1], 0, 1)
        rep = validate_palgebra(a)
        assert not rep.ok
        assert any(v.law == "1* = 0" and v.witness == (1,) for v in rep.violations)

    def test_three_chain_is_b1(self):
        a = three_chain_stone()
        assert validate_palgebra(a).ok
        assert is_isomorphic(a, make_bn(1))[0]

    def test_malformed_shape_is_structural(self):
        with pytest.raises(StructureError):
            FiniteAlgebra(2, [[0, 0]], [[0, 1], [1, 1]], [1, 0], 0, 1)
        bad = FiniteAlgebra(2, [[0, 5], [0, 1]], [[0, 1], [1, 1]], [1, 0], 0, 1)
        with pytest.raises(StructureError):
            validate_palgebra(bad)

    def test_broken_lattice_laws_reported(self):
        a = FiniteAlgebra(2, [[0, 1], [0, 1]], [[0, 1], [1, 1]], [1, 0], 0, 1)
        rep = validate_palgebra(a)
        assert not rep.ok
        assert any(v.law == "meet commutative" for v in rep.violations)


class TestMakeBn:
    @pytest.mark.parametrize("n,size", [(0, 2), (1, 3), (2, 5), (3, 9), (4, 17)])
    def test_sizes(self, n, size):
        a = make_bn(n)
        assert a.size == size
        assert validate_palgebra(a).ok

    def test_n0_is_two_element_boolean(self):
        two = make_bn(0)
        assert two.star == (1, 0)
        assert two.meet[0][1] == 0 and two.join[0][1] == 1

    def test_atoms_sit_at_powers_of_two(self):
        b3 = make_bn(3)
        e = 7
        for atom in (1, 2, 4):
            assert b3.meet[atom][e] == atom
            assert b3.star[atom] == e ^ atom  # complement in the Boolean part

    def test_bound(self):
        with pytest.raises(ResourceLimitError):
            make_bn(13)


class TestProduct:
    def test_two_times_two_is_boolean_square(self):
        p = product([make_bn(0), make_bn(0)])
        assert p.size == 4
        assert validate_palgebra(p).ok
        assert is_subdirectly_irreducible(p) is False

    def test_unary_product_has_identical_tables(self, bn):
        assert product([bn[1]]) == bn[1]

    def test_mixed_product_validates(self, bn):
        p = product([bn[1], bn[2]])
        assert p.size == 15
        assert validate_palgebra(p).ok

    def test_index_order_leftmost_most_significant(self, bn):
        p = product([bn[1], bn[2]])
        # element (t0, t1) lives at t0 * 5 + t1
        assert p.one == 2 * 5 + 4
        assert p.meet[1 * 5 + 3][2 * 5 + 1] == 1 * 5 + (bn[2].meet[3][1])

    def test_associative_up_to_isomorphism(self, bn):
        triples = [(bn[0], bn[1], bn[1]), (bn[0], bn[0], bn[2])]
        for a, b, c in triples:
            left = product([product([a, b]), c])
            right = product([a, product([b, c])])
            flat = product([a, b, c])
            assert is_isomorphic(left, flat)[0]
            assert is_isomorphic(right, flat)[0]

    def test_overflow_is_resource_error(self, bn):
        with pytest.raises(ResourceLimitError):
            product([bn[4]] * 4)


class TestGeneratedSubalgebra:
    def test_atoms_generate_bn2(self, bn):
        sub, inc = generated_subalgebra(bn[2], {1, 2})
        assert sub.size == 5
        assert inc.is_embedding()

    def test_empty_generators_give_bounds(self, bn):
        sub, _ = generated_subalgebra(bn[2], set())
        assert sub.size == 2

    def test_empty_generators_on_trivial(self):
        sub, _ = generated_subalgebra(trivial_algebra(), set())
        assert sub.size == 1

    def test_output_validates_and_includes(self, bn):
        for gens in ({1}, {3}, {1, 4}):
            sub, inc = generated_subalgebra(bn[3], gens)
            assert validate_palgebra(sub).ok
            assert inc.is_embedding()

    def test_free_generator_closure_in_product(self, free1):
        # independent route to the one-generated free algebra: close the
        # separating tuple (0, e, a) inside bn0 x bn1 x bn2
        parent = product([make_bn(0), make_bn(1), make_bn(2)])
        gen = (0 * 3 + 1) * 5 + 1
        sub, _ = generated_subalgebra(parent, {gen})
        assert sub.size == 7
        assert is_isomorphic(sub, free1.algebra)[0]


class TestEmbeddings:
    def test_b1_into_b2(self, bn):
        res = enumerate_embeddings(bn[1], bn[2])
        assert res.complete
        assert [m.table for m in res.maps] == [(0, 3, 4)]

    def test_b3_into_b2_impossible(self, bn):
        res = enumerate_embeddings(bn[3], bn[2])
        assert res.complete and not res.maps

    def test_witnesses_are_embeddings(self, bn):
        for small, big in [(bn[1], bn[3]), (bn[2], bn[3])]:
            res = enumerate_embeddings(small, big)
            assert res.complete and res.maps
            for m in res.maps:
                assert m.is_embedding()

    def test_budget_reports_incomplete(self, bn):
        res = enumerate_embeddings(bn[2], bn[4], budget=3)
        assert not res.complete

    def test_homomorphisms_include_collapse(self, bn):
        # bn1 -> bn0 collapsing e to 1 is a homomorphism
        res = enumerate_homomorphisms(bn[1], bn[0])
        assert res.complete
        assert (0, 1, 1) in [m.table for m in res.maps]
        for m in res.maps:
            assert m.is_homomorphism()


class TestIsomorphism:
    def test_identity_witness(self, bn):
        ok, w = is_isomorphic(bn[2], bn[2])
        assert ok and w.table == (0, 1, 2, 3, 4)

    def test_relabelled_chain(self):
        # same 3-chain with elements listed 1 < 2 < 0
        meet = [[0, 1, 2], [1, 1, 1], [2, 1, 2]]
        join = [[0, 0, 0], [0, 1, 2], [0, 2, 2]]
        a = FiniteAlgebra(3, meet, join, [1, 0, 1], 1, 0)
        assert validate_palgebra(a).ok
        assert is_isomorphic(a, make_bn(1))[0]

    def test_size_mismatch(self, bn):
        assert is_isomorphic(bn[2], product([bn[0], bn[0]]))[0] is False


class TestSubdirectIrreducibility:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_bn_is_si(self, n):
        assert is_subdirectly_irreducible(make_bn(n)) is True

    def test_product_is_not_si(self, bn):
        assert is_subdirectly_irreducible(product([bn[0], bn[0]])) is False

    def test_free1_is_not_si(self, free1):
        assert is_subdirectly_irreducible(free1.algebra) is False

    def test_trivial_is_not_si(self):
        assert is_subdirectly_irreducible(trivial_algebra()) is False

    def test_methods_agree_on_small_corpus(self, bn, free1):
        corpus = [bn[0], bn[1], bn[2], bn[3], product([bn[0], bn[0]]),
                  product([bn[0], bn[1]]), free1.algebra, trivial_algebra(),
                  three_chain_stone()]
        for a in corpus:
            if a.size <= 12:
                is_subdirectly_irreducible(a, diagnostics=True)  # raises on mismatch

    def test_principal_congruence_collapse(self, bn):
        # collapsing e with 1 in bn1 merges only that pair
        cls = principal_congruence(bn[1], 1, 2)
        assert cls[1] == cls[2] and cls[0] != cls[1]


def test_thread_safety_of_shared_values(bn):
    from concurrent.futures import ThreadPoolExecutor

    def work(_):
        res = enumerate_embeddings(bn[1], bn[3])
        return tuple(m.table for m in res.maps)

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(work, range(8)))
    assert len(set(results)) == 1
