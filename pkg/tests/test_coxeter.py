import itertools

import pytest

from coxhecke.coxeter import (
    CoxeterMatrix,
    CoxeterSystem,
    Element,
    IDENTITY,
    Side,
    validate_matrix,
)
from coxhecke.diagrams import SubsetType
from coxhecke.errors import (
    AsymmetricError,
    BadDiagonalError,
    BadOrderError,
    IndexOutOfRangeError,
    MatrixShapeError,
    NotSphericalError,
)
from tests.conftest import (
    A2,
    FINITE_CASES,
    TRIANGLE,
    b2_oracle,
    type_a_oracle,
)


def E(*word):
    return Element(tuple(word))


# ── Matrix Validation ────────────────────────────────────────────────────

class TestMatrixValidation:

    def test_type_a2_is_valid(self):
        validate_matrix([[1, 3], [3, 1]])

    def test_infinity_sentinel_is_valid(self):
        validate_matrix([[1, 0], [0, 1]])

    def test_asymmetric_names_indices(self):
        with pytest.raises(AsymmetricError) as exc:
            validate_matrix([[1, 3], [2, 1]])
        assert (exc.value.i, exc.value.j) == (0, 1)

    def test_bad_diagonal(self):
        with pytest.raises(BadDiagonalError) as exc:
            validate_matrix([[1, 3], [3, 2]])
        assert exc.value.i == 1

    def test_order_one_off_diagonal_rejected(self):
        with pytest.raises(BadOrderError, match=r"\(0,1\)"):
            validate_matrix([[1, 1], [1, 1]])

    def test_negative_sentinel_rejected(self):
        with pytest.raises(BadOrderError):
            validate_matrix([[1, -1], [-1, 1]])

    def test_non_square_rejected(self):
        with pytest.raises(MatrixShapeError):
            validate_matrix([[1, 3], [3]])

    def test_empty_rejected(self):
        with pytest.raises(MatrixShapeError):
            validate_matrix([])

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            CoxeterMatrix.from_rows([[1, 3], [2, 1]])

    def test_content_hash_depends_on_entries(self):
        h1 = CoxeterMatrix.from_rows([[1, 3], [3, 1]]).content_hash()
        h2 = CoxeterMatrix.from_rows([[1, 4], [4, 1]]).content_hash()
        assert h1 != h2
        assert h1 == CoxeterMatrix.from_rows([[1, 3], [3, 1]]).content_hash()

    def test_rank_one_is_legal(self):
        sys = CoxeterSystem([[1]])
        assert sys.ball(3) == [IDENTITY, E(0)]


# ── Normal Forms ─────────────────────────────────────────────────────────

class TestNormalize:

    def test_square_of_generator_is_identity(self, a2):
        assert a2.normalize([0, 0]) == IDENTITY

    def test_stst_matches_oracle(self, a2):
        oracle = type_a_oracle(2)
        assert a2.normalize([0, 1, 0, 1]).word == oracle.shortlex_word([0, 1, 0, 1])
        assert a2.normalize([0, 1, 0, 1]).word == (1, 0)

    def test_alternating_words_stay_reduced(self, dihedral_inf):
        assert dihedral_inf.normalize([0, 1, 0, 1, 0]).word == (0, 1, 0, 1, 0)

    def test_index_out_of_range(self, a2):
        with pytest.raises(IndexOutOfRangeError):
            a2.normalize([0, 2])

    @pytest.mark.parametrize("name,rows,make_oracle", FINITE_CASES)
    def test_all_short_words_match_oracle(self, name, rows, make_oracle):
        sys = CoxeterSystem(rows)
        oracle = make_oracle()
        for n in range(6):
            for word in itertools.product(range(sys.rank), repeat=n):
                w = sys.normalize(word)
                assert w.word == oracle.shortlex_word(word), (name, word)

    def test_idempotent(self, triangle):
        for n in range(5):
            for word in itertools.product(range(3), repeat=n):
                w = triangle.normalize(word)
                assert triangle.normalize(w.word) == w

    def test_generator_times_identity(self, a2):
        assert a2.right_multiply_generator(IDENTITY, 1) == E(1)
        assert a2.left_multiply_generator(1, IDENTITY) == E(1)
        assert a2.multiply(IDENTITY, E(0, 1)) == E(0, 1)

    def test_rank_one_system(self):
        sys = CoxeterSystem([[1]])
        assert sys.ball(3) == [IDENTITY, E(0)]
        assert sys.normalize([0, 0, 0]) == E(0)
        assert sys.longest_element([0]) == E(0)

    def test_memos_stay_within_cap(self):
        capped = CoxeterSystem(A2, cache_cap=10)
        for n in range(8):
            capped.normalize([0, 1] * n + [1, 1])
            assert capped.memo_size <= 10
        assert capped.normalize([1, 1, 0, 1, 0]) == E(0, 1, 0)

    def test_bounded_cache_gives_same_answers(self):
        capped = CoxeterSystem(A2, cache_cap=3)
        free = CoxeterSystem(A2)
        for n in range(6):
            for word in itertools.product(range(2), repeat=n):
                assert capped.normalize(word) == free.normalize(word)


# ── Oracle Equivalence ───────────────────────────────────────────────────

class TestOracleEquivalence:

    @pytest.mark.parametrize("name,rows,make_oracle", FINITE_CASES)
    def test_group_order(self, name, rows, make_oracle):
        sys = CoxeterSystem(rows)
        oracle = make_oracle()
        top = sys.longest_element(sys.generators).length
        assert len(sys.ball(top)) == oracle.order()
        assert len(sys.ball(top + 3)) == oracle.order()

    @pytest.mark.parametrize("name,rows,make_oracle", FINITE_CASES)
    def test_multiply_inverse_length(self, name, rows, make_oracle):
        sys = CoxeterSystem(rows)
        oracle = make_oracle()
        group = sys.ball(sys.longest_element(sys.generators).length)
        for u in group:
            assert u.length == oracle.length(u.word)
            inv = sys.inverse(u)
            assert oracle.perm(inv.word) == oracle.perm(u.word) ** -1
            assert sys.multiply(inv, u) == IDENTITY
            for v in group:
                uv = sys.multiply(u, v)
                assert oracle.perm(uv.word) == oracle.perm(u.word) * oracle.perm(v.word)

    @pytest.mark.parametrize("name,rows,make_oracle", FINITE_CASES)
    def test_descents(self, name, rows, make_oracle):
        sys = CoxeterSystem(rows)
        oracle = make_oracle()
        for w in sys.ball(sys.longest_element(sys.generators).length):
            left = tuple(s for s in sys.generators if oracle.length((s,) + w.word) < w.length)
            right = tuple(s for s in sys.generators if oracle.length(w.word + (s,)) < w.length)
            assert sys.descents(w, Side.LEFT) == left
            assert sys.descents(w, Side.RIGHT) == right

    def test_descent_examples(self, a2, dihedral_inf):
        assert a2.descents(IDENTITY) == ()
        assert a2.descents(E(0, 1, 0)) == (0, 1)
        assert dihedral_inf.descents(E(0, 1)) == (0,)

    def test_inverse_of_reduced_pair(self, dihedral_inf):
        assert dihedral_inf.inverse(E(0, 1)) == E(1, 0)
        assert dihedral_inf.inverse(IDENTITY) == IDENTITY


# ── Length Properties ────────────────────────────────────────────────────

class TestLengthProperties:

    @pytest.mark.parametrize("rows,radius", [(A2, 3), ([[1, 0], [0, 1]], 6), (TRIANGLE, 4)])
    def test_parity(self, rows, radius):
        sys = CoxeterSystem(rows)
        ball = sys.ball(radius)
        for u in ball:
            for v in ball:
                uv = sys.multiply(u, v)
                assert uv.length <= u.length + v.length
                assert (uv.length - u.length - v.length) % 2 == 0

    @pytest.mark.parametrize("rows,radius", [(A2, 3), ([[1, 4], [4, 1]], 4), ([[1, 3, 2], [3, 1, 3], [2, 3, 1]], 6), (TRIANGLE, 6)])
    def test_exchange_via_braid_closure(self, rows, radius):
        sys = CoxeterSystem(rows)
        for w in sys.ball(radius):
            words = sys.reduced_words(w)
            assert all(len(x) == w.length for x in words)
            assert all(sys.normalize(x) == w for x in words)
            assert tuple(sorted({x[0] for x in words if x})) == sys.descents(w, Side.LEFT)
            assert sys.support(w) == tuple(sorted({s for x in words for s in x}))

    def test_support_examples(self, a2):
        assert a2.support(IDENTITY) == ()
        assert a2.support(E(0, 1, 0)) == (0, 1)


# ── Parabolic Cosets ─────────────────────────────────────────────────────

class TestCosets:

    def test_parabolic_element_reduces_to_identity(self, a2):
        assert a2.min_coset_rep([0], E(0)) == IDENTITY
        assert a2.min_coset_rep([0], IDENTITY) == IDENTITY

    def test_left_coset_minimum_by_brute_force(self, a2):
        w = E(0, 1)
        coset = {w, a2.left_multiply_generator(0, w)}
        assert a2.min_coset_rep([0], w, Side.LEFT) == min(coset)
        assert a2.min_coset_rep([0], w, Side.LEFT) == E(1)

    def test_double_coset_minimum(self, a2):
        assert a2.min_coset_rep([0], E(0, 1, 0), Side.DOUBLE) == E(1)

    @pytest.mark.parametrize("rows", [A2, [[1, 4], [4, 1]], TRIANGLE])
    def test_factorization_is_length_additive(self, rows):
        sys = CoxeterSystem(rows)
        for w in sys.ball(4):
            for k in range(sys.rank + 1):
                for J in itertools.combinations(range(sys.rank), k):
                    y, x = sys.coset_factorization(J, w, Side.LEFT)
                    assert set(y.word) <= set(J)
                    assert sys.multiply(y, x) == w
                    assert y.length + x.length == w.length
                    assert not set(sys.descents(x, Side.LEFT)) & set(J)

                    x2, y2 = sys.coset_factorization(J, w, Side.RIGHT)
                    assert sys.multiply(y2, x2) == w
                    assert set(x2.word) <= set(J)
                    assert x2.length + y2.length == w.length

    def test_double_coset_ball(self, a2):
        coset = a2.double_coset_ball([0], E(1), 3)
        assert coset == [E(1), E(0, 1), E(1, 0), E(0, 1, 0)]
        assert a2.double_coset_ball([0], E(1), 2) == [E(1), E(0, 1), E(1, 0)]


# ── Subsets and Classification ───────────────────────────────────────────

class TestSubsets:

    def test_components(self, a2, triangle):
        assert a2.irreducible_components([]) == []
        assert a2.irreducible_components([0, 1]) == [(0, 1)]
        assert triangle.irreducible_components([0, 2]) == [(0, 2)]

    def test_commuting_generators_split(self, a1a1):
        assert a1a1.irreducible_components([0, 1]) == [(0,), (1,)]

    def test_perp(self, a2, a1a1, triangle):
        assert a2.perp([0, 1]) == ()
        assert a1a1.perp([0]) == (1,)
        assert triangle.perp([0, 1]) == ()

    def test_classify_examples(self, a2, dihedral_inf, triangle):
        assert a2.classify_subset([0])[0][1] == SubsetType.SPHERICAL
        (comp, kind, label), = dihedral_inf.classify_subset([0, 1])
        assert kind == SubsetType.AFFINE and label == "~A1"
        assert triangle.subset_type([0, 1, 2]) == SubsetType.INDEFINITE
        assert triangle.subset_type([0, 1]) == SubsetType.SPHERICAL
        assert triangle.subset_type([1, 2]) == SubsetType.AFFINE

    @pytest.mark.parametrize("rows,label", [
        ([[1, 3, 2], [3, 1, 3], [2, 3, 1]], "A3"),
        ([[1, 3, 2], [3, 1, 4], [2, 4, 1]], "B3"),
        ([[1, 5, 2], [5, 1, 3], [2, 3, 1]], "H3"),
        ([[1, 3, 2, 2], [3, 1, 4, 2], [2, 4, 1, 3], [2, 2, 3, 1]], "F4"),
        ([[1, 3, 2, 2], [3, 1, 3, 3], [2, 3, 1, 2], [2, 3, 2, 1]], "D4"),
        ([[1, 7], [7, 1]], "I2(7)"),
    ])
    def test_finite_table(self, rows, label):
        sys = CoxeterSystem(rows)
        (comp, kind, found), = sys.classify_subset(sys.generators)
        assert kind == SubsetType.SPHERICAL
        assert found == label

    @pytest.mark.parametrize("rows,label", [
        ([[1, 3, 3], [3, 1, 3], [3, 3, 1]], "~A2"),
        ([[1, 4, 2], [4, 1, 4], [2, 4, 1]], "~C2"),
        ([[1, 6, 2], [6, 1, 3], [2, 3, 1]], "~G2"),
        ([[1, 2, 3, 2], [2, 1, 3, 2], [3, 3, 1, 4], [2, 2, 4, 1]], "~B3"),
    ])
    def test_affine_table(self, rows, label):
        sys = CoxeterSystem(rows)
        (comp, kind, found), = sys.classify_subset(sys.generators)
        assert kind == SubsetType.AFFINE
        assert found == label

    def test_hyperbolic_triangle_is_indefinite(self):
        sys = CoxeterSystem([[1, 3, 3], [3, 1, 4], [3, 4, 1]])
        assert sys.subset_type(sys.generators) == SubsetType.INDEFINITE

    def test_reducible_and_spherical_products(self, a2a1):
        assert a2a1.subset_type([0, 1, 2]) == SubsetType.SPHERICAL
        sys = CoxeterSystem([[1, 0, 2], [0, 1, 2], [2, 2, 1]])
        assert sys.subset_type([0, 1, 2]) == SubsetType.REDUCIBLE
        assert not sys.is_irreducible([0, 1, 2])

    def test_empty_subset_is_spherical(self, dihedral_inf):
        assert dihedral_inf.is_spherical([])
        assert dihedral_inf.longest_element([]) == IDENTITY


# ── Special Elements ─────────────────────────────────────────────────────

class TestSpecialElements:

    def test_longest_elements(self, a2, b2):
        assert a2.longest_element([0]) == E(0)
        assert a2.longest_element([0, 1]) == E(0, 1, 0)
        assert b2.longest_element([0, 1]) == E(0, 1, 0, 1)

    def test_longest_needs_spherical(self, dihedral_inf):
        with pytest.raises(NotSphericalError):
            dihedral_inf.longest_element([0, 1])

    def test_k_of(self, a2):
        assert a2.k_of([0, 1], IDENTITY) == (0, 1)
        assert a2.k_of([0], E(0, 1, 0)) == ()
        assert a2.k_of([], E(0)) == ()
        # w0 swaps the two generators
        assert a2.k_of([0, 1], E(0, 1, 0)) == (0, 1)

    def test_k_of_matches_oracle(self, a3):
        oracle = type_a_oracle(3)
        gens = {s: oracle.perm((s,)) for s in a3.generators}
        for w in a3.ball(6):
            for J in [(0,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]:
                pw = oracle.perm(w.word)
                expected = tuple(
                    s for s in J
                    if any(pw * gens[s] * pw ** -1 == gens[t] for t in J)
                )
                assert a3.k_of(J, w) == expected

    def test_extend_with_infinite_generator(self, a2):
        ext = a2.extend_with_infinite_generator([0])
        assert ext.matrix.rows[2] == (2, 0, 1)
        assert ext.matrix.rows[0][2] == 2 and ext.matrix.rows[1][2] == 0

        full = a2.extend_with_infinite_generator([0, 1])
        assert full.matrix.rows[2] == (2, 2, 1)

        empty = a2.extend_with_infinite_generator([])
        assert empty.matrix.rows[2] == (0, 0, 1)

    def test_lift_turns_partial_shifts_into_conjugation(self, a2):
        J = [0]
        ext = a2.extend_with_infinite_generator(J)
        for w in a2.ball(3):
            hat = a2.lift(ext, w)
            assert hat.length == w.length + 1
            for s in J:
                assert ext.conjugate(s, hat) == a2.lift(ext, a2.conjugate(s, w))


# ── Enumeration ──────────────────────────────────────────────────────────

class TestBall:

    def test_radius_zero(self, a2):
        assert a2.ball(0) == [IDENTITY]

    def test_a2_radius_three(self, a2):
        assert len(a2.ball(3)) == 6

    def test_infinite_dihedral_counts(self, dihedral_inf):
        sizes = [len(dihedral_inf.ball(n)) for n in range(7)]
        assert sizes == [2 * n + 1 for n in range(7)]

    def test_shortlex_sorted_without_duplicates(self, triangle):
        ball = triangle.ball(5)
        assert ball == sorted(set(ball))
        assert [len(triangle.ball(n)) for n in range(5)] == sorted(
            len(triangle.ball(n)) for n in range(5)
        )

    def test_budget(self, triangle):
        from coxhecke.errors import ResourceLimitError
        with pytest.raises(ResourceLimitError) as exc:
            triangle.ball(6, budget=10)
        assert exc.value.phase == "ball"


# ── Generator Classes ────────────────────────────────────────────────────

class TestGeneratorClasses:

    def test_odd_edges_join_classes(self, a2, b2, a1a1, triangle):
        assert a2.generator_classes == ((0, 1),)
        assert b2.generator_classes == ((0,), (1,))
        assert a1a1.num_classes == 2
        assert triangle.generator_classes == ((0, 1), (2,))
        assert triangle.class_of(1) == 0


# ── Cache Transfer ───────────────────────────────────────────────────────

class TestClosureTransfer:

    def test_export_then_import(self):
        warm = CoxeterSystem(A2)
        for w in warm.ball(3):
            warm.reduced_words(w)
        cold = CoxeterSystem(A2)
        assert cold.import_closures(warm.export_closures()) > 0
        for word in itertools.product(range(2), repeat=4):
            assert cold.normalize(word) == warm.normalize(word)

    def test_malformed_entries_rejected(self):
        sys = CoxeterSystem(A2)
        with pytest.raises(ValueError):
            sys.import_closures([[[1, 0], [0, 1]]])
        with pytest.raises(ValueError):
            sys.import_closures([[[0, 5]]])
