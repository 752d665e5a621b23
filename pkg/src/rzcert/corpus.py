"""Named example polynomials and a generator of ground-truth real-zero
instances from random definite-at-origin pencils.

All instances are produced programmatically; a golden expanded file for the
eight-variable degree-4 matroid-basis polynomial lives with the tests and
guards against generator drift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .detrep import ConstructionError, assert_smooth_curve
from .pencil import HERMITIAN, REAL_SYMMETRIC, MatrixPencil, det_poly
from .poly import Polynomial, homogenize
from .scalars import FLOAT, QQi, RATIONAL


@dataclass
class Instance:
    name: str
    p: Polynomial
    x0: tuple
    expect_rz: bool
    note: str = ""
    pencil: MatrixPencil | None = None


def circle():
    """Unit disk boundary: 1 - x1^2 - x2^2, with its known 2x2 pencil."""
    p = Polynomial(2, {(0, 0): 1, (2, 0): -1, (0, 2): -1})
    mats = [
        [[1, 0], [0, 1]],
        [[1, 0], [0, -1]],
        [[0, 1], [1, 0]],
    ]
    pencil = MatrixPencil(mats, REAL_SYMMETRIC, RATIONAL)
    return Instance("circle", p, (0, 0), True,
                    "rigidly convex disk; det(I + x1 A1 + x2 A2) matches exactly",
                    pencil)


def tv_screen():
    """Flat quartic box: 1 - x1^4 - x2^4, convex but not rigidly convex."""
    p = Polynomial(2, {(0, 0): 1, (4, 0): -1, (0, 4): -1})
    return Instance("tv_screen", p, (0, 0), False,
                    "line restrictions acquire nonreal quartic roots")


def bad_quadratic(d):
    """(x1+1)^2 - x2^2 - ... - xd^2: real-zero at 0 for every d >= 2.

    For d >= 5 no positive self-adjoint representation of any size exists
    (d = 4 rules out the real symmetric kind); the instance only records the
    claim, nothing here attempts to refute it.
    """
    if d < 2:
        raise ValueError("bad_quadratic needs d >= 2")
    terms = {(0,) * d: 1}
    e1 = [0] * d
    e1[0] = 1
    terms[tuple(e1)] = 2
    e2 = [0] * d
    e2[0] = 2
    terms[tuple(e2)] = 1
    for i in range(1, d):
        e = [0] * d
        e[i] = 2
        terms[tuple(e)] = -1
    p = Polynomial(d, terms)
    return Instance(f"bad_quadratic:{d}", p, (0,) * d, True,
                    "no positive self-adjoint representation for d >= 5; "
                    "no positive real symmetric one for d = 4")


VAMOS_GROUND_SET = ("a", "b", "c", "d", "a'", "b'", "c'", "d'")
_VAMOS_EXCLUDED = (
    frozenset({"a", "a'", "b", "b'"}),
    frozenset({"b", "b'", "c", "c'"}),
    frozenset({"c", "c'", "d", "d'"}),
    frozenset({"d", "d'", "a", "a'"}),
    frozenset({"a", "a'", "c", "c'"}),
)


def vamos_bases():
    """All 4-subsets of the 8-element ground set except the five circuits."""
    out = []
    for s in itertools.combinations(VAMOS_GROUND_SET, 4):
        if frozenset(s) not in _VAMOS_EXCLUDED:
            out.append(s)
    return out


def vamos():
    """Degree-4 basis-generating polynomial of the rank-4 matroid on 8
    elements whose 65 bases exclude the five 4-point circuits; real-zero at 0
    but no power admits a positive real symmetric representation."""
    idx = {name: k for k, name in enumerate(VAMOS_GROUND_SET)}
    p = Polynomial.zero(8)
    one = Polynomial.constant(1, 8)
    for base in vamos_bases():
        term = one
        for j in base:
            term = term * (Polynomial.variable(idx[j], 8) + one)
        p = p + term
    return Instance("vamos", p, (0,) * 8, True,
                    "65 bases of the rank-4 cube-like matroid; p(0) = 65")


def random_rz(m, seed=0, mode=FLOAT, max_retries=12, require_smooth=True):
    """det(I + x1 B1 + x2 B2) for random hermitian B1, B2 of size m.

    Definite at the origin, hence real-zero there with the pencil as ground
    truth. Retries seeds until the homogenized determinant passes the
    smooth-curve certificate (needed by the construction round trip).
    """
    if m < 1:
        raise ValueError("size must be at least 1")
    for attempt in range(max_retries):
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 37, attempt])
        if mode == FLOAT:
            b1 = _random_hermitian_float(rng, m)
            b2 = _random_hermitian_float(rng, m)
            eye = np.eye(m)
            mats = [eye, b1, b2]
            pencil = MatrixPencil(
                [[[complex(v) for v in row] for row in mat] for mat in mats],
                HERMITIAN, FLOAT)
        else:
            b1 = _random_hermitian_exact(rng, m)
            b2 = _random_hermitian_exact(rng, m)
            eye = [[Fraction(1) if i == j else Fraction(0) for j in range(m)]
                   for i in range(m)]
            pencil = MatrixPencil([eye, b1, b2], HERMITIAN, RATIONAL)
        p = det_poly(pencil)
        if mode == FLOAT:
            p = p.chop(1e-12)
        if require_smooth and m >= 2:
            P = homogenize(p, m)
            try:
                assert_smooth_curve(P, seed=seed + attempt)
            except ConstructionError:
                continue
        return Instance(f"random_rz:{m}:{seed}", p, (0, 0), True,
                        f"determinant of a random hermitian pencil "
                        f"(attempt {attempt})", pencil)
    raise RuntimeError(f"random_rz({m}, seed={seed}): retries exhausted")


def _random_hermitian_float(rng, m, scale=None):
    g = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    h = (g + g.conj().T) / 2
    if scale is None:
        scale = 1.0 / np.sqrt(m)
    return h * scale


def _random_hermitian_exact(rng, m):
    out = [[None] * m for _ in range(m)]
    for i in range(m):
        out[i][i] = Fraction(int(rng.integers(-4, 5)), 2)
        for j in range(i + 1, m):
            re = Fraction(int(rng.integers(-4, 5)), 2)
            im = Fraction(int(rng.integers(-4, 5)), 2)
            out[i][j] = QQi(re, im)
            out[j][i] = QQi(re, -im)
    return out


def perturbed_non_rz(m, seed=0, strength=None):
    """A decisively perturbed random instance: add a top-degree bump that
    wrecks real-rootedness along most lines (used for agreement tests)."""
    base = random_rz(m, seed=seed, mode=FLOAT, require_smooth=False)
    if strength is None:
        strength = 4.0 + float(np.random.default_rng([seed, 41]).uniform(0, 2))
    bump = Polynomial(2, {(2 * ((m + 1) // 2), 0): strength,
                          (0, 2 * ((m + 1) // 2)): strength}, FLOAT)
    p = base.p.to_float() + bump
    return Instance(f"perturbed:{m}:{seed}", p, (0, 0), False,
                    "random ground-truth instance plus a quartic-style bump")


def named_instances():
    """The fixed corpus members (callables taking no arguments)."""
    return {
        "circle": circle,
        "tv_screen": tv_screen,
        "vamos": vamos,
    }


def get_instance(name):
    """Resolve 'circle', 'tv_screen', 'vamos', 'bad_quadratic:<d>',
    'random_rz:<m>:<seed>'."""
    fixed = named_instances()
    if name in fixed:
        return fixed[name]()
    if name.startswith("bad_quadratic:"):
        return bad_quadratic(int(name.split(":", 1)[1]))
    if name.startswith("random_rz:"):
        parts = name.split(":")
        m = int(parts[1])
        seed = int(parts[2]) if len(parts) > 2 else 0
        return random_rz(m, seed=seed)
    raise KeyError(f"unknown corpus instance {name!r}")


def corpus_names():
    return ["circle", "tv_screen", "vamos", "bad_quadratic:<d>",
            "random_rz:<m>:<seed>"]
