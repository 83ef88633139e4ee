"""Property suite over randomly generated valid small specifications.

The generator constructs specs that satisfy the structural conditions by
design and keeps only those whose weights re-derive uniquely and whose
Cayley matrix is nonsingular; every identity below must then hold with no
failures tolerated.
"""

from fractions import Fraction

import pytest

from mirrorkit.ci_model import build_cayley, derive_weights, charges
from mirrorkit.horn_system import horn_operators, index_partition
from mirrorkit.mellin import ZForm, check_sum_rules, classify_forms, compute_delta, solve_xi
from mirrorkit.rational_linalg import Matrix, invert
from mirrorkit.transposition import (
    NoInvolutiveNuError,
    NoValidShapeError,
    check_involution,
    transpose_spec,
)

from specgen import generate_valid_specs

SPECS = generate_valid_specs(200)


def test_generated_enough():
    assert len(SPECS) >= 200


def test_inverse_identity_everywhere():
    for spec in SPECS:
        cm = build_cayley(spec)
        inv = invert(cm.matrix)
        assert cm.matrix @ inv == Matrix.identity(cm.size)
        assert inv @ cm.matrix == Matrix.identity(cm.size)


def test_column_sums_and_global_relation():
    for spec in SPECS:
        forms = solve_xi(build_cayley(spec))
        report = check_sum_rules(forms)
        assert report.ok, (spec, report.checks)


def test_special_form_shapes():
    # per block: the two z forms and the reflected one, exactly
    for spec in SPECS:
        forms = solve_xi(build_cayley(spec))
        for nu in range(1, spec.k + 1):
            a = spec.a(nu)
            z_nu = ZForm.z(nu, spec.k)
            assert forms[a - 3].xi() == z_nu
            assert forms[a - 2].xi() == z_nu
            assert forms[a - 1].xi() == z_nu.reflect()


def test_classification_never_fails():
    for spec in SPECS:
        cm = build_cayley(spec)
        classify_forms(cm, solve_xi(cm))


def test_horn_degree_balance():
    for spec in SPECS:
        forms = solve_xi(build_cayley(spec))
        delta = compute_delta(forms)
        for q in range(1, spec.k + 1):
            plus, minus, _ = index_partition(forms, q)
            pos = sum(int(forms[a - 1].z_coeffs[q - 1] * delta) for a in plus)
            neg = -sum(int(forms[a - 1].z_coeffs[q - 1] * delta) for a in minus)
            assert pos == neg > 0
        for op in horn_operators(spec, forms):
            assert op.degrees[0] == op.degrees[1]


def test_involution_where_transposable():
    transposable = 0
    for spec in SPECS:
        try:
            tr = transpose_spec(spec)
        except (NoValidShapeError, NoInvolutiveNuError):
            continue
        transposable += 1
        assert check_involution(spec), spec
        # shape preservation: the transposed index sets still partition
        aggregate = sorted(i for blk in tr.tspec.blocks for i in blk.index_set)
        assert aggregate == list(range(1, spec.n + 1))
    assert transposable >= 20  # the suite must actually exercise the mirror


def test_transposed_weights_are_block_supported():
    for spec in SPECS:
        try:
            tr = transpose_spec(spec)
        except (NoValidShapeError, NoInvolutiveNuError):
            continue
        w = derive_weights(tr.tspec)
        for q, vec in enumerate(w.vectors, start=1):
            rng = set(tr.tspec.block_range(q))
            for i, g in enumerate(vec, start=1):
                assert (g > 0) == (i in rng)


def test_charges_nonnegative_and_cy():
    for spec in SPECS:
        w = derive_weights(spec)
        qm = charges(spec, w)
        assert all(c >= 0 for row in qm.entries for c in row)
        for q in range(1, spec.k + 1):
            assert sum(qm.column(q)) == sum(w.vectors[q - 1])


def test_minkowski_dimension_bounded():
    # the shifted polytopes live in the weight kernel, so the span can never
    # exceed n - k; equality is the sum condition, not guaranteed
    from mirrorkit.nef_partition import build_deltas, minkowski_dim
    for spec in SPECS:
        deltas = build_deltas(spec, derive_weights(spec))
        report = minkowski_dim(deltas, expected=spec.n - spec.k)
        assert report.dim <= spec.n - spec.k
