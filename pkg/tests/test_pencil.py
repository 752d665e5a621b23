import json
from fractions import Fraction

import numpy as np
import pytest

from rzcert import corpus
from rzcert.pencil import (HERMITIAN, REAL_SYMMETRIC, MatrixPencil,
                           PencilFormatError, cauchy_cross_check,
                           definiteness, derdet_check, det_poly,
                           eigenspace_orthogonality_check, pairing_check,
                           realify, verify_lmi)
from rzcert.poly import Polynomial
from rzcert.scalars import QQi

CIRCLE = corpus.circle()


def _random_hermitian_pencil(n, seed, a0="identity"):
    rng = np.random.default_rng(seed)

    def herm():
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return (g + g.conj().T) / 2

    if a0 == "identity":
        first = np.eye(n)
    else:
        first = herm()
    mats = [first, herm() / np.sqrt(n), herm() / np.sqrt(n)]
    return MatrixPencil([[[complex(v) for v in row] for row in m]
                         for m in mats], HERMITIAN, "float")


def test_pencil_validation():
    with pytest.raises(PencilFormatError):
        MatrixPencil([[[0, 1], [2, 0]]])  # not hermitian
    with pytest.raises(PencilFormatError):
        MatrixPencil([[[QQi(0, 1), 0], [0, 0]]])  # imaginary diagonal
    MatrixPencil([[[0, QQi(0, 1)], [QQi(0, -1), 0]]])  # fine: hermitian
    with pytest.raises(PencilFormatError):
        MatrixPencil([[[0, QQi(0, 1)], [QQi(0, -1), 0]]],
                     sym_class=REAL_SYMMETRIC)


def test_pencil_json_round_trip():
    pencil = CIRCLE.pencil
    data = pencil.to_json_dict()
    back = MatrixPencil.from_json_dict(data)
    assert back.mats == pencil.mats
    assert back.sym_class == REAL_SYMMETRIC
    # float round trip
    pf = _random_hermitian_pencil(3, 5)
    back2 = MatrixPencil.from_json_dict(pf.to_json_dict())
    for a in range(3):
        assert np.allclose(back2.npmats()[a], pf.npmats()[a])


def test_pencil_json_unwraps_report():
    data = {"pencil": CIRCLE.pencil.to_json_dict(), "other": 1}
    assert MatrixPencil.from_json(json.dumps(data)).n == 2


def test_det_poly_circle():
    assert det_poly(CIRCLE.pencil) == CIRCLE.p


def test_det_poly_diagonal():
    mats = [
        [[2, 0], [0, 3]],
        [[1, 0], [0, 0]],
        [[0, 0], [0, -1]],
    ]
    pencil = MatrixPencil(mats, REAL_SYMMETRIC, "rational")
    # (2 + x1)(3 - x2)
    want = Polynomial(2, {(0, 0): 6, (1, 0): 3, (0, 1): -2, (1, 1): -1})
    assert det_poly(pencil) == want


def test_det_poly_zero_pencil():
    mats = [[[0, 0], [0, 0]]] * 3
    pencil = MatrixPencil(mats, REAL_SYMMETRIC, "rational")
    assert det_poly(pencil).is_zero()


def test_det_poly_interpolation_matches_symbolic():
    pencil = _random_hermitian_pencil(4, 2)
    sym = det_poly(pencil, symbolic_bound=8)
    interp = det_poly(pencil, symbolic_bound=3)
    diff = (sym - interp).chop(0)
    assert diff.max_abs_coeff() <= 1e-8 * max(1.0, sym.max_abs_coeff())


def test_verify_lmi_circle():
    rep, h = verify_lmi(CIRCLE.pencil, CIRCLE.p, CIRCLE.x0, samples=50)
    assert rep.status == "pass"
    assert h == Polynomial.constant(1, 2)
    assert rep.details["h_is_one"]


def test_verify_lmi_extra_block():
    # circle block plus (1 + x1) block: h = 1 + x1 > 0 near 0
    extra = MatrixPencil([[[1]], [[1]], [[0]]], REAL_SYMMETRIC, "rational")
    big = CIRCLE.pencil.direct_sum(extra)
    rep, h = verify_lmi(big, CIRCLE.p, CIRCLE.x0, samples=50)
    assert rep.status == "pass"
    assert h == Polynomial(2, {(0, 0): 1, (1, 0): 1})


def test_verify_lmi_sign_flip_fails_at_basepoint():
    flipped = CIRCLE.pencil.scaled(Fraction(-1))
    rep, h = verify_lmi(flipped, CIRCLE.p, CIRCLE.x0, samples=20)
    assert rep.status == "fail"
    assert rep.witness["stage"] == "basepoint"


def test_verify_lmi_wrong_polynomial_fails_divisibility():
    other = Polynomial(2, {(0, 0): 1, (2, 0): -1, (1, 1): -1})
    rep, _ = verify_lmi(CIRCLE.pencil, other, CIRCLE.x0, samples=20)
    assert rep.status == "fail"
    assert rep.witness["stage"] == "divisibility"


def test_pairing_check_circle():
    rep = pairing_check(CIRCLE.pencil, CIRCLE.x0, curve_samples=50)
    assert rep.status == "pass"
    assert rep.residuals["max_relative_residual"] <= 1e-8


def test_pairing_check_trivial_1x1():
    pencil = MatrixPencil([[[1]], [[1]], [[0]]], REAL_SYMMETRIC, "rational")
    rep = pairing_check(pencil, (0, 0), curve_samples=10)
    assert rep.status == "pass"


def test_pairing_check_random_pencil():
    inst = corpus.random_rz(3, seed=8)
    rep = pairing_check(inst.pencil, inst.x0, curve_samples=40)
    assert rep.status == "pass"
    assert rep.residuals["max_relative_residual"] <= 1e-8


def test_eigenspace_orthogonality_circle():
    rep = eigenspace_orthogonality_check(CIRCLE.pencil, CIRCLE.x0)
    assert rep.status == "pass"
    assert rep.details["definiteness"] == "positive"
    assert all(c > 0 for c in rep.details["compressions"])


def _ellipse_pencil():
    mats = [
        [[1, 0], [0, 1]],
        [[2, 0], [0, -2]],
        [[0, 3], [3, 0]],
    ]
    return MatrixPencil(mats, REAL_SYMMETRIC, "rational")


def test_eigenspace_orthogonality_flipped_block():
    # direct sum with a sign-flipped ellipse block: indefinite base point,
    # distinct factors keep the line eigenvalues separated
    flipped = _ellipse_pencil().scaled(Fraction(-1))
    big = CIRCLE.pencil.direct_sum(flipped)
    rep = eigenspace_orthogonality_check(big, CIRCLE.x0)
    assert rep.details["definiteness"] == "indefinite"
    comps = rep.details["compressions"]
    assert any(c < 0 for c in comps) and any(c > 0 for c in comps)
    assert rep.status == "pass"  # orthogonality + agreement both hold


def test_eigenspace_orthogonality_vacuous():
    pencil = MatrixPencil([[[1]], [[1]], [[0]]], REAL_SYMMETRIC, "rational")
    assert eigenspace_orthogonality_check(pencil, (0, 0)).status == "pass"


def test_cauchy_cross_check_circle():
    rep = cauchy_cross_check(CIRCLE.pencil, CIRCLE.p, CIRCLE.x0, num_lines=40)
    assert rep.status == "pass"
    assert rep.details["definiteness"] == "positive"
    assert rep.details["all_interlace"]


def test_cauchy_cross_check_indefinite_random():
    pencil = _random_hermitian_pencil(3, seed=31, a0="random")
    base = definiteness(pencil.value((0, 0)))
    if base in ("positive", "negative"):
        pytest.skip("random draw was definite")
    p = det_poly(pencil)
    rep = cauchy_cross_check(pencil, p, (0, 0), num_lines=40)
    assert rep.details["definiteness"] == "indefinite"
    assert not rep.details["all_interlace"]
    assert rep.status == "pass"  # agreement with Thm-style equivalence


def test_cauchy_cross_check_flipped_direct_sum_shared_factor():
    # reducible determinant: every diagonal cofactor shares a factor with it,
    # so interlacing fails at the relative-primality gate
    flipped = _ellipse_pencil().scaled(Fraction(-1))
    big = CIRCLE.pencil.direct_sum(flipped)
    rep = cauchy_cross_check(big, det_poly(big), CIRCLE.x0, num_lines=20)
    assert rep.details["definiteness"] == "indefinite"
    assert not rep.details["all_interlace"]
    assert rep.status == "pass"


def test_derdet_circle_and_diagonal():
    assert derdet_check(CIRCLE.pencil, samples=40).status == "pass"
    mats = [
        [[1, 0], [0, 2]],
        [[1, 0], [0, 0]],
        [[0, 0], [0, 1]],
    ]
    diag = MatrixPencil(mats, REAL_SYMMETRIC, "rational")
    assert derdet_check(diag, samples=40).status == "pass"


def test_derdet_random_hermitian_n4():
    pencil = _random_hermitian_pencil(4, seed=13)
    rep = derdet_check(pencil, samples=40)
    assert rep.status == "pass"
    assert rep.residuals["max_relative_residual"] <= 1e-9


def test_realify_example():
    mats = [[[0, QQi(0, -1)], [QQi(0, 1), 0]]]
    pencil = MatrixPencil(mats + [[[0, 0], [0, 0]]] * 2, HERMITIAN, "rational")
    doubled = realify(pencil)
    want = [
        [0, 0, 0, 1],
        [0, 0, -1, 0],
        [0, -1, 0, 0],
        [1, 0, 0, 0],
    ]
    assert doubled.mats[0] == [[Fraction(v) for v in row] for row in want]
    assert doubled.sym_class == REAL_SYMMETRIC


def test_realify_real_input_block_diagonal():
    doubled = realify(CIRCLE.pencil)
    n = CIRCLE.pencil.n
    for a, m in enumerate(doubled.mats):
        for i in range(n):
            for j in range(n):
                assert m[i][j] == CIRCLE.pencil.mats[a][i][j]
                assert m[n + i][n + j] == CIRCLE.pencil.mats[a][i][j]
                assert m[i][n + j] == 0 and m[n + i][j] == 0
    # determinant squared
    assert det_poly(doubled) == CIRCLE.p * CIRCLE.p


def test_realify_det_square_and_psd_region():
    pencil = _random_hermitian_pencil(3, seed=17)
    doubled = realify(pencil)
    rng = np.random.default_rng(23)
    for _ in range(100):
        x = rng.normal(size=2)
        dv = complex(np.linalg.det(pencil.value(x)))
        dd = complex(np.linalg.det(doubled.value(x)))
        want = dv * dv
        assert abs(dd - want) <= 1e-10 * max(1.0, abs(dd), abs(want))
        ea = float(np.linalg.eigvalsh(pencil.value(x))[0])
        eb = float(np.linalg.eigvalsh(doubled.value(x).real)[0])
        assert (ea >= -1e-9) == (eb >= -1e-9)
        # min eigenvalue signs match
        if abs(ea) > 1e-9:
            assert np.sign(ea) == np.sign(eb)
