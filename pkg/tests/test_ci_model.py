import json

import pytest

from mirrorkit.ci_model import (
    AmbiguousWeightsError,
    Block,
    CISpec,
    NoPositiveSolutionError,
    SpecInvalidError,
    build_cayley,
    charges,
    derive_weights,
    supplied_weights,
    validate,
    weights_of,
)
from mirrorkit.rational_linalg import Matrix, invert

from paper_data import L_8, L_8_INV, L_13, L_13_INV


def test_validate_6_2(spec_6_2):
    report = validate(spec_6_2)
    assert report.ok
    assert report.weights.vectors == ((3, 2, 2, 7, 7),)
    assert report.charges.entries == ((21,),)


def test_validate_overlapping_index_sets():
    spec = CISpec(n=2, k=2, blocks=(
        Block(exponents=((2, 0),), index_set=(1,)),
        Block(exponents=((0, 2),), index_set=(1,)),
    ))
    report = validate(spec)
    assert not report.checks["partition"]


def test_validate_square_forces_zero_weight():
    # a single square with the product over the same variable: 2g = g
    spec = CISpec(n=1, k=1, blocks=(Block(exponents=((2,),), index_set=(1,)),))
    report = validate(spec)
    assert not report.checks["weights_solvable"]
    assert not report.checks["calabi_yau"]
    with pytest.raises(NoPositiveSolutionError):
        derive_weights(spec)


def test_derive_weights_6_2(spec_6_2):
    # oracle: 7g1 = 3g4 = 3g5 = 7g2+g4 = 7g3+g5 = sum(g), primitive
    assert derive_weights(spec_6_2).vectors == ((3, 2, 2, 7, 7),)


def test_derive_weights_quadric(quadric):
    assert derive_weights(quadric).vectors == ((1, 1),)


def test_derive_weights_6_1(spec_6_1):
    w = derive_weights(spec_6_1)
    assert w.vectors == ((1, 1, 1, 1, 0, 0, 0), (0, 0, 0, 0, 1, 1, 1))
    assert w.diagonal == (1, 1, 1, 1, 1, 1, 1)


def test_derive_weights_ambiguous():
    # block 1's monomials match its indicator on its own range: no constraint
    spec = CISpec(n=4, k=2, blocks=(
        Block(exponents=((1, 1, 1, 0), (1, 1, 0, 1)), index_set=(1, 2)),
        Block(exponents=((0, 0, 2, 0), (0, 0, 0, 2)), index_set=(3, 4)),
    ))
    with pytest.raises(AmbiguousWeightsError):
        derive_weights(spec)


def test_supplied_weights_shape_errors(spec_6_2):
    bad = CISpec(n=5, k=1, blocks=spec_6_2.blocks, weights=((3, 2, 2, 7, 0),))
    with pytest.raises(SpecInvalidError):
        supplied_weights(bad)


def test_weights_of_prefers_supplied(corrupted):
    assert weights_of(corrupted).vectors == ((3, 2, 2, 7, 8),)


def test_charges_6_2(spec_6_2):
    qm = charges(spec_6_2, derive_weights(spec_6_2))
    assert qm.entries == ((21,),)
    assert qm.column_lcms == (21,)


def test_charges_quadric(quadric):
    qm = charges(quadric, derive_weights(quadric))
    assert qm.entries == ((2,),)
    assert qm.column_lcms == (2,)


def test_charges_zero_pairing(spec_6_1):
    # block 1 never touches block 2's variables
    qm = charges(spec_6_1, derive_weights(spec_6_1))
    assert qm.entries == ((3, 0), (1, 3))
    assert qm.column_lcms == (3, 3)


def test_build_cayley_6_1_printed_matrix(spec_6_1):
    cm = build_cayley(spec_6_1)
    assert cm.matrix == Matrix.from_rows(L_13)
    assert invert(cm.matrix) == Matrix.from_json(L_13_INV)
    assert cm.a_indices == (7, 13)
    assert cm.i_lambda == (1, 2, 3, 4, 8, 9, 10)


def test_build_cayley_6_2_printed_matrix(spec_6_2):
    cm = build_cayley(spec_6_2)
    assert cm.matrix == Matrix.from_rows(L_8)
    assert invert(cm.matrix) == Matrix.from_json(L_8_INV)
    assert cm.a_indices == (8,)


def test_build_cayley_quadric_rows(quadric):
    # direct construction oracle from the block layout
    cm = build_cayley(quadric)
    assert [[int(x) for x in row] for row in cm.matrix.entries] == [
        [2, 0, 1, 0, 0],
        [0, 2, 1, 0, 0],
        [0, 0, 1, 0, 1],
        [1, 1, 0, 1, 0],
        [0, 0, 0, 1, 0],
    ]


def test_build_cayley_deterministic(spec_6_1):
    a = json.dumps(build_cayley(spec_6_1).to_json(), sort_keys=True)
    b = json.dumps(build_cayley(spec_6_1).to_json(), sort_keys=True)
    assert a == b


def test_quasihomogeneity_recheck(spec_6_1, spec_6_2, quadric):
    for spec in (spec_6_1, spec_6_2, quadric):
        w = derive_weights(spec)
        for j, blk in enumerate(spec.blocks, start=1):
            ind = blk.indicator(spec.n)
            for vec in w.vectors:
                pairings = {sum(a * g for a, g in zip(v, vec)) for v in blk.exponents}
                pairings.add(sum(a * g for a, g in zip(ind, vec)))
                assert len(pairings) == 1


def test_calabi_yau_identity(spec_6_1, spec_6_2, quadric):
    for spec in (spec_6_1, spec_6_2, quadric):
        w = derive_weights(spec)
        qm = charges(spec, w)
        for q in range(1, spec.k + 1):
            assert sum(qm.column(q)) == sum(w.vectors[q - 1])


def test_spec_json_roundtrip(spec_6_1, quadric):
    for spec in (spec_6_1, quadric):
        again = CISpec.from_json(json.loads(json.dumps(spec.to_json())))
        assert again == spec


def test_row_labels(quadric):
    cm = build_cayley(quadric)
    kinds = [lbl[1] for lbl in cm.row_labels]
    assert kinds == ["monomial", "monomial", "s-row", "product-row", "constant-row"]
