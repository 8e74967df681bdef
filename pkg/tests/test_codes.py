from itertools import combinations
from random import Random

import pytest

import golden
import oracles
from jplt.gf import PrimeField
from jplt.matrix import Matrix
from jplt.codes import (
    ExtensionChoice,
    ExtensionError,
    GrsCode,
    canonical_placement,
    dual_multipliers_for,
    extend_mds_generic,
    extend_mds_grs,
    grs_dual_multipliers,
    grs_generator,
    parity_to_generator,
    puncture,
    recovery_polynomials,
    supported_subcode,
)

F11 = PrimeField(11)
REF_CODE = GrsCode(F11, golden.V1_MULTIPLIERS, golden.V1_POINTS, golden.L)


def _eval_poly(coeffs, x, q):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


# --- GrsCode ------------------------------------------------------------------


def test_grs_code_validation():
    with pytest.raises(ValueError):
        GrsCode(F11, (1, 0), (2, 3), 1)  # zero multiplier
    with pytest.raises(ValueError):
        GrsCode(F11, (1, 1), (2, 2), 1)  # repeated point
    with pytest.raises(ValueError):
        GrsCode(F11, (1, 1), (2, 3), 3)  # dim > n
    with pytest.raises(ValueError):
        GrsCode(F11, (1,), (2, 3), 1)  # length mismatch
    with pytest.raises(ValueError):
        GrsCode(PrimeField(3), (1, 1, 1, 1), (0, 1, 2, 3), 2)  # n > q


def test_grs_generator_reference():
    assert grs_generator(REF_CODE).to_lists() == golden.V1


def test_grs_generator_dim_one_is_multipliers():
    code = GrsCode(F11, (4, 5, 6), (1, 2, 3), 1)
    assert grs_generator(code).to_lists() == [[4, 5, 6]]


def test_grs_generator_is_mds():
    rng = Random(2)
    for q in (11, 13, 101):
        field = PrimeField(q)
        for _ in range(5):
            n = rng.randrange(2, min(q, 11))
            k = rng.randrange(1, n + 1)
            code = GrsCode(
                field,
                tuple(1 + rng.randrange(q - 1) for _ in range(n)),
                tuple(rng.sample(range(q), n)),
                k,
            )
            assert grs_generator(code).is_mds()


# --- dual multipliers ----------------------------------------------------------


def test_dual_multipliers_reference():
    assert grs_dual_multipliers(REF_CODE) == golden.LAMBDA_DUAL


def test_dual_multipliers_two_points():
    code = GrsCode(F11, (1, 1), (0, 1), 1)
    assert grs_dual_multipliers(code) == (10, 1)


def test_dual_generator_annihilates_code():
    rng = Random(8)
    for _ in range(10):
        q = rng.choice((11, 13, 101))
        field = PrimeField(q)
        n = rng.randrange(2, min(q, 10))
        k = rng.randrange(1, n)
        code = GrsCode(
            field,
            tuple(1 + rng.randrange(q - 1) for _ in range(n)),
            tuple(rng.sample(range(q), n)),
            k,
        )
        dual = GrsCode(field, grs_dual_multipliers(code), code.points, n - k)
        assert (grs_generator(dual) @ grs_generator(code).transpose()).is_zero()


def test_dual_multipliers_for_validation():
    with pytest.raises(ValueError):
        dual_multipliers_for(F11, (1, 1), (2, 2))
    with pytest.raises(ValueError):
        dual_multipliers_for(F11, (0, 1), (2, 3))


# --- placement and extension ----------------------------------------------------


def test_canonical_placement_reference():
    assert canonical_placement(golden.W, golden.K) == golden.PLACEMENT


def test_canonical_placement_validation():
    with pytest.raises(ValueError):
        canonical_placement((3, 1), 5)
    with pytest.raises(ValueError):
        canonical_placement((0, 7), 5)


def test_extension_choice_validation():
    with pytest.raises(ValueError):
        ExtensionChoice((1,), (2,), (0, 0, 1))  # not a permutation
    with pytest.raises(ValueError):
        ExtensionChoice((1, 2), (3,), (0, 1, 2))  # length mismatch
    choice = ExtensionChoice.canonical((1, 3), 4, (5,), (6,))
    assert choice.placement == (1, 3, 0, 2)


def test_extend_mds_grs_reference():
    choice = ExtensionChoice.canonical(
        golden.W, golden.K, golden.EXTRA_MULTIPLIERS, golden.EXTRA_POINTS
    )
    h = extend_mds_grs(
        F11, golden.LAMBDA_DUAL, golden.V1_POINTS, golden.D - golden.L, golden.K, choice
    )
    assert h.to_lists() == golden.H
    assert h.is_mds()
    assert oracles.is_mds_minors(h.to_lists(), 11)


def test_extend_mds_grs_errors():
    choice = ExtensionChoice.canonical((0, 1), 3, (1,), (1,))
    with pytest.raises(ValueError):
        # extra point collides with a demand point
        extend_mds_grs(F11, (1, 1), (0, 1), 1, 3, choice)
    with pytest.raises(ExtensionError):
        # 13 distinct points do not exist in GF(11)
        big = ExtensionChoice.canonical(
            tuple(range(5)), 13, tuple([1] * 8), tuple(range(5, 13))
        )
        extend_mds_grs(F11, golden.LAMBDA_DUAL, golden.V1_POINTS, 3, 13, big)
    with pytest.raises(ValueError):
        zero = ExtensionChoice.canonical((0, 1), 3, (0,), (5,))
        extend_mds_grs(F11, (1, 1), (0, 1), 1, 3, zero)


def test_extend_mds_generic_single_row():
    e = extend_mds_generic(Matrix(F11, [[1, 1]]), 4, Random(0))
    assert e.shape == (1, 4)
    assert e.row(0)[:2] == [1, 1]
    assert all(v != 0 for v in e.row(0))


def test_extend_mds_generic_binary_field():
    e = extend_mds_generic(Matrix(PrimeField(2), [[1, 1]]), 3, Random(0))
    assert e.to_lists() == [[1, 1, 1]]


def test_extend_mds_generic_zero_rows():
    e = extend_mds_generic(Matrix(F11, [], cols=2), 5, Random(0))
    assert e.shape == (0, 5)


def test_extend_mds_generic_preserves_mds():
    rng = Random(4)
    lam = Matrix(F11, golden.V1).null_space()
    e = extend_mds_generic(lam, 8, rng)
    assert e.shape == (3, 8)
    assert e.select_columns(range(5)) == lam
    assert e.is_mds()
    assert oracles.is_mds_minors(e.to_lists(), 11)


def test_extend_mds_generic_requires_mds_input():
    with pytest.raises(ValueError):
        extend_mds_generic(Matrix(F11, [[1, 0], [0, 0]]), 4, Random(0))


def test_extend_mds_generic_impossible_target():
    # [n, 2] MDS over GF(3) caps at n = 4, so 5 columns must fail
    m = Matrix(PrimeField(3), [[1, 1, 1], [0, 1, 2]])
    assert m.is_mds()
    with pytest.raises(ExtensionError):
        extend_mds_generic(m, 5, Random(0), max_retries=40)


# --- generator from parity-check -------------------------------------------------


def test_parity_to_generator_reference():
    h = Matrix(F11, golden.H)
    g = parity_to_generator(h)
    assert g.shape == (7, 10)
    assert (g @ h.transpose()).is_zero()
    assert oracles.rowspace_equal(g, Matrix(F11, golden.G1))


def test_parity_to_generator_small():
    g = parity_to_generator(Matrix(F11, [[1, 1]]))
    assert g.to_lists() == [[10, 1]]


def test_parity_to_generator_rejects_rank_deficient():
    with pytest.raises(ValueError):
        parity_to_generator(Matrix(F11, [[1, 2], [2, 4]]))


# --- puncture and supported subcode ----------------------------------------------


def test_puncture():
    m = Matrix(F11, [[1, 2, 3], [4, 5, 6]])
    assert puncture(m, [2, 0]).to_lists() == [[1, 3], [4, 6]]
    assert puncture(m, [1, 1]).to_lists() == [[2], [5]]
    with pytest.raises(IndexError):
        puncture(m, [3])


def test_supported_subcode_identity():
    eye = Matrix.identity(F11, 4)
    b = supported_subcode(eye, [1, 3])
    assert b.to_lists() == [[0, 1, 0, 0], [0, 0, 0, 1]]


def test_supported_subcode_full_support_is_rref():
    g = Matrix(F11, golden.G1)
    b = supported_subcode(g, range(10))
    assert b.shape == (7, 10)
    assert oracles.rowspace_equal(b, g)


def test_supported_subcode_reference_support():
    g = Matrix(F11, golden.G1)
    b = supported_subcode(g, golden.W)
    assert b.rows == golden.L
    # off-support columns vanish
    off = [j for j in range(golden.K) if j not in golden.W]
    assert puncture(b, off).is_zero()
    # on the support the subcode is exactly the demand code
    assert oracles.rowspace_equal(puncture(b, golden.W), Matrix(F11, golden.V1))
    assert b.solve_in_rowspace(Matrix(F11, golden.U1)) is not None


def test_supported_subcode_dimension_oracle():
    g = Matrix(F11, golden.G1)
    lists = g.to_lists()
    rng = Random(6)
    for _ in range(12):
        size = rng.randrange(1, 10)
        s = sorted(rng.sample(range(10), size))
        comp = [j for j in range(10) if j not in s]
        expected = g.rows - oracles.rank_by_minors(
            [[row[j] for j in comp] for row in lists], 11
        ) if comp else g.rows
        assert supported_subcode(g, s).rows == expected


# --- recovery polynomials ---------------------------------------------------------


def test_recovery_polynomials_reference():
    cs = recovery_polynomials(F11, golden.EXTRA_POINTS, golden.L)
    assert cs == [golden.C1, golden.C2]


def test_recovery_polynomials_roots_and_shift():
    points = (2, 5, 7)
    cs = recovery_polynomials(F11, points, 3)
    assert len(cs) == 3 and all(len(c) == 6 for c in cs)
    for i, c in enumerate(cs):
        for p in points:
            assert _eval_poly(c, p, 11) == 0
        if i:
            assert c == [0] + cs[i - 1][:-1]


def test_recovery_polynomials_no_extension():
    assert recovery_polynomials(F11, (), 1) == [[1]]
    assert recovery_polynomials(F11, (), 2) == [[1, 0], [0, 1]]


def test_recovery_polynomials_combine_reference_query():
    # c_l against the reference query equals the spread demand row l
    g = Matrix(F11, golden.G1)
    cs = Matrix(F11, [golden.C1, golden.C2])
    assert cs @ g == Matrix(F11, golden.U1)
