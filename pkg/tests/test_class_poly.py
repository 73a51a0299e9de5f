import pytest

from coxhecke.class_poly import (
    class_poly_max,
    class_poly_min,
    class_poly_min_all,
    min_class_table,
)
from coxhecke.conjugacy import decide_finite
from coxhecke.coxeter import CoxeterSystem, Element, IDENTITY
from coxhecke.errors import NotFiniteError, NotIrreducibleError
from coxhecke.hecke import parameters
from coxhecke.params import ParamPoly
from tests.conftest import A2, A3, B2, DIHEDRAL_INF, irreducible_subsets

a0, b0 = ParamPoly.a(0), ParamPoly.b(0)
a1, b1 = ParamPoly.a(1), ParamPoly.b(1)


def E(*word):
    return Element(tuple(word))


def finite_reports(sys, J, radius):
    """One report per finite W_J-class meeting the ball."""
    seen = set()
    for w in sys.ball(radius):
        if w in seen:
            continue
        report = decide_finite(sys, J, w)
        if report.is_finite:
            seen.update(report.orbit)
            yield report


# ── Min Variant ──────────────────────────────────────────────────────────

class TestMinVariant:

    @pytest.mark.parametrize("rows,count", [(A2, 3), (B2, 5), (A3, 5)])
    def test_class_count(self, rows, count):
        assert len(min_class_table(CoxeterSystem(rows))) == count

    def test_class_order(self, a2):
        classes = min_class_table(a2)
        assert classes[0] == (IDENTITY,)
        assert classes[1] == (E(0), E(1), E(0, 1, 0))
        assert classes[2] == (E(0, 1), E(1, 0))

    def test_longest_a2(self, a2):
        assert class_poly_min(a2, E(0, 1, 0)) == {1: b0, 2: a0}

    def test_minimal_elements_are_indicators(self, a2):
        assert class_poly_min(a2, E(1, 0)) == {2: ParamPoly.one()}
        assert class_poly_min(a2, IDENTITY) == {0: ParamPoly.one()}

    def test_infinite_group_refused(self, dihedral_inf):
        with pytest.raises(NotFiniteError):
            min_class_table(dihedral_inf)

    @pytest.mark.parametrize("rows", [A2, B2, A3])
    def test_recursion_holds_for_every_generator(self, rows):
        sys = CoxeterSystem(rows)
        table = class_poly_min_all(sys)
        zero = ParamPoly.zero()
        for w, f in table.items():
            for s in sys.generators:
                sws = sys.conjugate(s, w)
                if sws.length == w.length:
                    assert table[sws] == f
                elif sws.length == w.length + 2:
                    a, b = parameters(sys, s)
                    f_sw = table[sys.left_multiply_generator(s, w)]
                    expected = {
                        c: b * f.get(c, zero) + a * f_sw.get(c, zero)
                        for c in set(f) | set(f_sw)
                    }
                    assert table[sws] == {c: v for c, v in expected.items() if v}

    @pytest.mark.parametrize("rows", [A2, B2, A3])
    def test_group_specialization_is_class_indicator(self, rows):
        sys = CoxeterSystem(rows)
        classes = min_class_table(sys)
        point = {c: (0, 1) for c in range(sys.num_classes)}
        for w, f in class_poly_min_all(sys).items():
            values = {c: p.evaluate(point) for c, p in f.items()}
            values = {c: v for c, v in values.items() if v}
            cid = next(i for i, members in enumerate(classes) if w in members)
            assert values == {cid: 1}


# ── Max Variant ──────────────────────────────────────────────────────────

class TestMaxVariant:

    def test_a2_one_generator(self, a2):
        O = decide_finite(a2, [0], E(1))
        table = class_poly_max(a2, [0], O)
        assert table.as_dict() == {E(1): ParamPoly.b(0, -1), E(0, 1, 0): ParamPoly.one()}
        assert table.value(E(0, 1)) == 0
        assert table.class_rep == E(0, 1, 0)

    def test_a2_full_reflection_class(self, a2):
        O = decide_finite(a2, [0, 1], E(0))
        table = class_poly_max(a2, [0, 1], O)
        assert table.as_dict() == {
            E(0): ParamPoly.b(0, -1),
            E(1): ParamPoly.b(0, -1),
            E(0, 1, 0): ParamPoly.one(),
        }

    def test_infinite_dihedral_rotation(self, dihedral_inf):
        O = decide_finite(dihedral_inf, [0, 1], E(0, 1))
        table = class_poly_max(dihedral_inf, [0, 1], O)
        assert table.as_dict() == {
            E(0): -a1 * ParamPoly.b(1, -1),
            E(1): -a0 * ParamPoly.b(0, -1),
            E(0, 1): ParamPoly.one(),
            E(1, 0): ParamPoly.one(),
        }

    def test_json(self, a2):
        O = decide_finite(a2, [0], E(1))
        data = class_poly_max(a2, [0], O).to_json(a2.num_classes)
        assert data["variant"] == "max"
        assert data["entries"][0] == {"word": [1], "poly": [[[0, -1], 1]], "text": "b0^-1"}

    def test_infinite_class_refused(self, dihedral_inf):
        O = decide_finite(dihedral_inf, [0, 1], E(0))
        with pytest.raises(NotFiniteError):
            class_poly_max(dihedral_inf, [0, 1], O)

    def test_report_for_other_j_refused(self, a2):
        O = decide_finite(a2, [0], E(1))
        with pytest.raises(ValueError):
            class_poly_max(a2, [0, 1], O)

    def test_reducible_j_refused(self, a1a1):
        O = decide_finite(a1a1, [0, 1], E(0))
        with pytest.raises(NotIrreducibleError):
            class_poly_max(a1a1, [0, 1], O)

    @pytest.mark.parametrize("rows", [A2, B2, A3])
    def test_well_defined_and_specializes_to_indicator(self, rows):
        sys = CoxeterSystem(rows)
        point = {c: (0, 1) for c in range(sys.num_classes)}
        for J in irreducible_subsets(sys):
            for O in finite_reports(sys, J, 3):
                table = class_poly_max(sys, J, O)
                values = {w: f.evaluate(point) for w, f in table.entries}
                assert {w for w, v in values.items() if v} == set(O.orbit)
                assert all(v in (0, 1) for v in values.values())
                assert all(w.length <= O.representative.length for w, _ in table.entries)

    def test_affine_classes_are_well_defined(self, dihedral_inf):
        point = {0: (0, 1), 1: (0, 1)}
        for O in finite_reports(dihedral_inf, [0, 1], 4):
            table = class_poly_max(dihedral_inf, [0, 1], O)
            assert table.value(O.representative) == 1
            nonzero = {w for w, f in table.entries if f.evaluate(point)}
            assert nonzero == set(O.orbit)
