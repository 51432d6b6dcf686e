from fractions import Fraction

from knotcocycle.quadruple import quadruple_meridians
from knotcocycle.rational_linalg import SparseMatrix, in_row_span
from knotcocycle.strata import (homogeneous_parts, normalise_row,
                                restrict_to_variables, reversal_on_rows,
                                row_of_meridian, ti_meridian, variable_basis)


def test_quadruple_movie_structure():
    ms = quadruple_meridians()
    assert len(ms) == 24
    for m in ms:
        assert len(m.germs) == 8
        assert all(g.kind == "R3" for g in m.germs)
        m.check_closed()
        assert not m.boundary()
        # positive braid-like: every crossing positive throughout
        for g in m.germs:
            assert all(s == 1 for s in g.g1.signs.values())


def test_exactly_two_novel_equations(cube_meridians, fixtures_dir):
    variables = variable_basis(3)
    var_index = {g: j for j, g in enumerate(variables)}
    cube_rows = sorted({row_of_meridian(m, var_index) for m in cube_meridians} - {()})
    cube_mat = SparseMatrix(len(cube_rows), len(variables),
                            [dict((j, Fraction(v)) for j, v in r) for r in cube_rows])
    qrows = []
    seen = set()
    for m in quadruple_meridians():
        part = homogeneous_parts(ti_meridian(m, frozenset())).get(3)
        norm = normalise_row(restrict_to_variables(part, var_index))
        if norm and norm not in seen:
            seen.add(norm)
            qrows.append(norm)
    assert len(qrows) == 6
    novel = [r for r in qrows
             if not in_row_span(cube_mat, dict((j, Fraction(v)) for j, v in r))]
    assert len(novel) == 2
    reverse_row = reversal_on_rows(variables, var_index)
    assert reverse_row(novel[0]) == novel[1]

    # fixture agreement
    from knotcocycle.cocycles import load_tetra_rows
    stored = []
    for fs in load_tetra_rows(fixtures_dir):
        stored.append(normalise_row(restrict_to_variables(fs, var_index)))
    assert sorted(stored) == sorted(novel)


def test_novel_rows_are_pure_partial():
    variables = variable_basis(3)
    var_index = {g: j for j, g in enumerate(variables)}
    for m in quadruple_meridians():
        part = homogeneous_parts(ti_meridian(m, frozenset())).get(3)
        row = restrict_to_variables(part, var_index)
        assert all(variables[j].kind == "P" for j in row)
