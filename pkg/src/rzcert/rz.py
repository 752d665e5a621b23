"""Real-zero certification: sampled line tests, the Hermite-matrix criterion,
Renegar derivatives, and the nested-inequality membership test.

A polynomial p satisfies the real-zero condition at x0 when every line
restriction p(x0 + t*dir) has only real roots. The sampled test draws seeded
directions on the sphere; the Hermite route builds the matrix of root power
sums of the reversed restriction symbolically and samples it for positive
semidefiniteness. The two must agree, and tests hold them to that.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .poly import (NEG_INF, LineRestrictor, Polynomial, directional_derivative,
                   homogenize, dehomogenize)
from .realroots import DEFAULT_TOL, INCONCLUSIVE_BAND, power_sums, real_root_profile
from .report import FAIL, INCONCLUSIVE, PASS, VerdictReport
from .scalars import FLOAT, is_zero

RZ_CONFIRMED = "rz-confirmed-sampled"
NOT_RZ = "not-rz"


@dataclass
class RzVerdict:
    status: str  # rz-confirmed-sampled | not-rz | inconclusive
    witness: dict | None
    lines_tested: int
    tol: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == NOT_RZ and self.witness is None:
            raise ValueError("not-rz verdicts must carry a witness line")

    @property
    def confirmed(self):
        return self.status == RZ_CONFIRMED


def line_rng(seed, index, tag=0):
    """Per-sample RNG stream: deterministic regardless of execution order."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, tag, index])


def sphere_direction(rng, d):
    v = rng.normal(size=d)
    n = np.linalg.norm(v)
    while n < 1e-12:
        v = rng.normal(size=d)
        n = np.linalg.norm(v)
    return v / n


def is_rz_sampled(p, x0, num_lines=200, tol=DEFAULT_TOL, seed=0, threads=1):
    """Probabilistic real-zero test along seeded random lines through x0."""
    px0 = complex(p.evaluate(list(x0)))
    if abs(px0) <= tol:
        raise ValueError("base point lies on the zero set: p(x0) = 0")
    pf = p.to_float()
    restrictor = LineRestrictor(pf, [complex(v) for v in x0])
    d = p.nvars

    def check_line(i):
        rng = line_rng(seed, i)
        direction = sphere_direction(rng, d)
        f = restrictor.univariate(direction)
        if f.is_zero():
            return ("real", direction, float("inf"))
        _, n_nonreal, margin = real_root_profile(f, tol)
        if n_nonreal == 0:
            return ("real", direction, float("inf"))
        if margin <= INCONCLUSIVE_BAND * tol:
            return ("unsure", direction, margin)
        return ("nonreal", direction, margin)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check_line, range(num_lines)))
    else:
        results = [check_line(i) for i in range(num_lines)]

    unsure = None
    for i, (kind, direction, margin) in enumerate(results):
        if kind == "nonreal":
            return RzVerdict(NOT_RZ,
                             {"x0": [float(v) for v in x0],
                              "direction": [float(v) for v in direction],
                              "nonreal_margin": margin,
                              "line_index": i},
                             num_lines, tol)
        if kind == "unsure" and unsure is None:
            unsure = (i, direction, margin)
    if unsure is not None:
        i, direction, margin = unsure
        return RzVerdict(INCONCLUSIVE,
                         {"x0": [float(v) for v in x0],
                          "direction": [float(v) for v in direction],
                          "nonreal_margin": margin,
                          "line_index": i},
                         num_lines, tol)
    return RzVerdict(RZ_CONFIRMED, None, num_lines, tol)


# ---------------------------------------------------------------------------
# Hermite matrix


@dataclass
class HermiteMatrix:
    """m x m Hankel matrix of root power sums of the reversed line restriction.

    Entry (i, j) is the power sum p_{i+j-2} of the roots of
    t^m p(x0 + x/t), a polynomial in the direction x. PSD for every real x
    exactly when p satisfies the real-zero condition at x0.
    """

    matrix: object  # PolyMatrix
    x0: tuple
    source: Polynomial

    @property
    def size(self):
        return self.matrix.nrows


def hermite_matrix(p, x0):
    from .poly import PolyMatrix  # local to avoid import noise at module top

    px0 = p.evaluate(list(x0))
    if is_zero(px0) or (p.mode == FLOAT and abs(complex(px0)) < 1e-14):
        raise ValueError("base point lies on the zero set: p(x0) = 0")
    deg = p.degree()
    m = int(deg) if deg != NEG_INF else 0
    if m == 0:
        return HermiteMatrix(PolyMatrix([]), tuple(x0), p)
    shifted = p.shift(list(x0))
    comps = shifted.homogeneous_components()
    zero = Polynomial.zero(p.nvars, p.mode)
    # reversed restriction in t has ascending coefficients c_m, ..., c_1, c_0
    coeffs = [comps.get(m - j, zero) for j in range(m + 1)]
    sums = power_sums(coeffs, 2 * m - 2)
    const = Polynomial.constant(m, p.nvars, p.mode)
    sums = [const if k == 0 else s for k, s in enumerate(sums)]
    entries = [[sums[i + j] for j in range(m)] for i in range(m)]
    return HermiteMatrix(PolyMatrix(entries), tuple(x0), p)


def hermite_psd_check(H, num_samples=100, tol=DEFAULT_TOL, seed=0):
    """Sample the Hermite matrix on sphere directions and test PSD."""
    m = H.size
    if m == 0:
        return VerdictReport("hermite-psd", PASS, details={"samples": 0, "size": 0})
    mat = H.matrix.to_float()
    d = mat.nvars
    worst = float("inf")
    for i in range(num_samples):
        rng = line_rng(seed, i, tag=1)
        x = sphere_direction(rng, d)
        value = np.array([[complex(e.evaluate(x)).real for e in row]
                          for row in mat.entries])
        value = (value + value.T) / 2
        eigs = np.linalg.eigvalsh(value)
        scale = max(1.0, float(np.max(np.abs(eigs))))
        floor = float(eigs[0])
        worst = min(worst, floor / scale)
        if floor < -tol * scale:
            return VerdictReport(
                "hermite-psd", FAIL,
                residuals={"min_eigenvalue_ratio": floor / scale},
                witness={"x": [float(v) for v in x], "min_eigenvalue": floor,
                         "sample_index": i},
                details={"samples": num_samples, "size": m})
    return VerdictReport("hermite-psd", PASS,
                         residuals={"min_eigenvalue_ratio": worst},
                         details={"samples": num_samples, "size": m})


# ---------------------------------------------------------------------------
# Renegar derivatives and membership


def renegar_derivative(p, x0, k):
    """Dehomogenized k-th derivative of P(X + s*X0) at s = 0, X0 = (1, x0)."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return p
    deg = p.degree()
    m = int(deg) if deg != NEG_INF else 0
    if k > m:
        return Polynomial.zero(p.nvars, p.mode)  # flagged by degree sentinel
    P = homogenize(p, m)
    coords = [1] + list(x0)
    for _ in range(k):
        P = directional_derivative(P, coords)
    return dehomogenize(P)


def renegar_chain(p, x0):
    """[p, p^(1), ..., p^(m-1)] with respect to x0."""
    deg = p.degree()
    m = int(deg) if deg != NEG_INF else 0
    chain = [p]
    P = homogenize(p, m)
    coords = [1] + list(x0)
    for _ in range(1, m):
        P = directional_derivative(P, coords)
        chain.append(dehomogenize(P))
    return chain


def membership(p, x0, x, tol=1e-9, chain=None):
    """Nested-derivative membership test for the rigidly convex component.

    Requires p to be RZ at x0 with p(x0) > 0 (caller-certified). True iff
    p(x) and every Renegar derivative up to order m-1 are >= -tol at x.
    """
    if chain is None:
        chain = renegar_chain(p, x0)
    for q in chain:
        v = complex(q.evaluate(list(x))).real
        if v < -tol:
            return False
    return True


def membership_report(p, x0, x, tol=1e-9, chain=None):
    """Like :func:`membership` but reporting the violated level as witness."""
    if chain is None:
        chain = renegar_chain(p, x0)
    values = []
    for k, q in enumerate(chain):
        v = complex(q.evaluate(list(x))).real
        values.append(v)
        if v < -tol:
            return VerdictReport("membership", FAIL,
                                 residuals={"value": v},
                                 witness={"level": k, "x": [float(t) for t in x],
                                          "value": v},
                                 details={"levels": len(chain)})
    return VerdictReport("membership", PASS,
                         residuals={"min_value": min(values)},
                         details={"levels": len(chain)})
