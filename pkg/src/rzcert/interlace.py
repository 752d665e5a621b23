"""Bezoutiants and interlacing verdicts.

The Bezoutiant of f (degree m) and g (degree <= m) is the symmetric m x m
matrix B with

    (f(t) g(s) - f(s) g(t)) / (t - s) = sum_{i,j=0}^{m-1} B[i][j] t^i s^j.

It is positive definite exactly when f has only real distinct roots and g
strictly separates them; its nullity counts common roots with multiplicity.
Both the scalar version and the polynomial-coefficient field version
B(P, Q; x0) are computed by the same synthetic division, which works over any
commutative coefficient ring.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .poly import (HomogeneousPolynomial, NEG_INF, LineRestrictor, PolyMatrix,
                   Polynomial, dehomogenize, restrict_to_line, uni_gcd)
from .realroots import DEFAULT_TOL, INCONCLUSIVE_BAND, real_root_profile
from .report import FAIL, INCONCLUSIVE, PASS, VerdictReport
from .rz import line_rng, sphere_direction
from .scalars import FLOAT, RATIONAL


def _bezout_table(fc, gc, zero):
    """Coefficient table B[i][j] over any ring; fc has degree m, gc padded."""
    m = len(fc) - 1
    gc = list(gc) + [zero] * (m + 1 - len(gc))

    def ncoef(k, j):
        return fc[k] * gc[j] - fc[j] * gc[k]

    # divide N(t, s) by (t - s) as a polynomial in t: q_{k-1} = n_k + s * q_k
    q = [None] * m  # q[k] = list of s-coefficients of the t^k quotient coeff
    q[m - 1] = [ncoef(m, j) for j in range(m + 1)]
    for k in range(m - 1, 0, -1):
        base = [ncoef(k, j) for j in range(m + 1)]
        shifted = [zero] + q[k]
        q[k - 1] = [a + b for a, b in zip(base, shifted + [zero] * (len(base) - len(shifted)))]
    table = [[q[i][j] if j < len(q[i]) else zero for j in range(m)] for i in range(m)]
    return table


def bezout_matrix(f, g):
    """Bezoutiant of univariate f (degree m >= 1) and g (degree <= m)."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    m = f.degree()
    if m == NEG_INF or m < 1:
        raise ValueError("deg f must be at least 1")
    if not g.is_zero() and g.degree() > m:
        raise ValueError("deg g must not exceed deg f")
    zero = 0 if f.mode == RATIONAL else 0j
    table = _bezout_table(list(f.coeffs), list(g.coeffs), zero)
    if f.mode == FLOAT:
        arr = np.array([[complex(v) for v in row] for row in table])
        return (arr + arr.T) / 2
    return table


def common_zero_count(f, g, tol=1e-10):
    """Nullity of the Bezoutiant: common roots of f and g with multiplicity."""
    b = bezout_matrix(f, g)
    m = int(f.degree())
    if f.mode == RATIONAL:
        _, pivots = linalg.rref(b)
        return m - len(pivots)
    s = np.linalg.svd(np.asarray(b), compute_uv=False)
    top = s[0] if s.size and s[0] > 0 else 1.0
    return int(np.sum(s <= tol * top))


# ---------------------------------------------------------------------------
# the polynomial-coefficient Bezoutiant field


def relatively_prime(P, Q, seed=0, tol=1e-10, attempts=4):
    """Certify gcd(P, Q) = 1 by restricting both to random lines.

    A shared factor restricts to a shared factor on every line, so a single
    line with coprime restrictions certifies coprimality. Persistent common
    roots over all attempts reports a shared factor.
    """
    if Q.is_zero():
        return False
    nv = P.nvars
    for attempt in range(attempts):
        rng = line_rng(seed, attempt, tag=2)
        if P.mode == RATIONAL:
            a = [int(v) for v in rng.integers(-9, 10, size=nv)]
            b = [int(v) for v in rng.integers(-9, 10, size=nv)]
            f = restrict_to_line(P, a, b)
            g = restrict_to_line(Q, a, b)
            if f.is_zero() or g.is_zero():
                continue
            if int(f.degree()) < int(P.degree()) or int(g.degree()) < int(Q.degree()):
                continue  # line hit special position; retry
            if uni_gcd(f, g).degree() == 0:
                return True
        else:
            a = rng.normal(size=nv)
            b = rng.normal(size=nv)
            f = restrict_to_line(P, list(a), list(b))
            g = restrict_to_line(Q, list(a), list(b))
            rf = np.roots(f.float_coeffs()[::-1])
            rg = np.roots(g.float_coeffs()[::-1])
            if rf.size == 0 or rg.size == 0:
                return True
            dist = np.min(np.abs(rf[:, None] - rg[None, :]))
            scale = 1.0 + float(np.max(np.abs(np.concatenate([rf, rg]))))
            if dist > 1e-6 * scale:
                return True
    return False


def bezoutiant_field(P, Q, x0, check_coprime=True, seed=0):
    """B(P, Q; x0): Bezoutiant of the reversed restrictions, entries in x.

    P is homogeneous of degree m, Q homogeneous of degree m-1, both in d+1
    variables; x0 is the affine base point. Entries are polynomials in the
    direction variables x1..xd.
    """
    m = P.hom_degree
    if Q.is_zero():
        raise ValueError("Q must be nonzero and relatively prime with P")
    if Q.hom_degree != m - 1:
        raise ValueError(f"deg Q = {Q.hom_degree}, expected m - 1 = {m - 1}")
    if check_coprime and not relatively_prime(P, Q, seed=seed):
        raise ValueError("P and Q share a factor")
    p = dehomogenize(P)
    q = dehomogenize(Q)
    zero = Polynomial.zero(p.nvars, p.mode)
    fc = _reversed_symbolic_coeffs(p, x0, m)
    gc = _reversed_symbolic_coeffs(q, x0, m - 1)
    table = _bezout_table(fc, gc, zero)
    # symmetrize: exact construction is symmetric, float mode averages noise
    sym = [[(table[i][j] + table[j][i]) * _half(p.mode) for j in range(len(table))]
           for i in range(len(table))]
    return PolyMatrix(sym)


def _half(mode):
    from fractions import Fraction
    return Fraction(1, 2) if mode == RATIONAL else 0.5


def _reversed_symbolic_coeffs(p, x0, m):
    """Ascending t-coefficients of t^m p(x0 + x/t) as polynomials in x."""
    shifted = p.shift(list(x0))
    comps = shifted.homogeneous_components()
    zero = Polynomial.zero(p.nvars, p.mode)
    return [comps.get(m - j, zero) for j in range(m + 1)]


# ---------------------------------------------------------------------------
# sampled interlacing verdicts


def _chain_violation(p_roots, q_roots, tol_band):
    """Check s_1 <= s'_1 <= s_2 <= ... <= s_m with a tolerance band.

    Returns None when the weak alternation chain holds, else (index, gap).
    """
    for i, q in enumerate(q_roots):
        lo = p_roots[i] - tol_band
        hi = p_roots[i + 1] + tol_band
        if q < lo:
            return i, float(lo - q)
        if q > hi:
            return i, float(q - hi)
    return None


def interlaces_sampled(P, Q, x0, num_lines=100, tol=DEFAULT_TOL, seed=0):
    """Root-alternation test of Q against P along sampled lines through x0.

    Works with the reversed restrictions, whose roots are exactly the
    intersections of the projective line with the two curves; every line
    carries m roots of P and m-1 roots of Q when both are real-rooted there.
    """
    m = P.hom_degree
    if Q.hom_degree != m - 1:
        raise ValueError(f"deg Q = {Q.hom_degree}, expected m - 1 = {m - 1}")
    if not relatively_prime(P, Q, seed=seed):
        raise ValueError("P and Q share a factor")
    p = dehomogenize(P).to_float()
    q = dehomogenize(Q).to_float()
    x0f = [complex(v) for v in x0]
    rp = LineRestrictor(p, x0f)
    rq = LineRestrictor(q, x0f)
    d = p.nvars
    unsure = None
    for i in range(num_lines):
        rng = line_rng(seed, i, tag=3)
        direction = sphere_direction(rng, d)
        f = rp.reversed(direction, m)
        g = rq.reversed(direction, m - 1)
        for poly, who, want in ((f, "P", m), (g, "Q", m - 1)):
            if int(poly.degree() if poly.degree() != NEG_INF else -1) != want:
                return VerdictReport(
                    "interlaces-sampled", FAIL,
                    witness={"x0": [float(v) for v in x0],
                             "direction": [float(v) for v in direction],
                             "reason": f"degenerate restriction of {who}"},
                    details={"lines": num_lines})
            n_real, n_nonreal, margin = real_root_profile(poly, tol)
            if n_nonreal:
                if margin <= INCONCLUSIVE_BAND * tol:
                    unsure = unsure or {"direction": [float(v) for v in direction],
                                        "margin": margin, "line_index": i}
                    break
                return VerdictReport(
                    "interlaces-sampled", FAIL,
                    residuals={"nonreal_margin": margin},
                    witness={"x0": [float(v) for v in x0],
                             "direction": [float(v) for v in direction],
                             "reason": f"nonreal roots of {who} restriction"},
                    details={"lines": num_lines, "line_index": i})
        else:
            p_roots = np.sort(np.roots(f.float_coeffs()[::-1]).real)
            q_roots = np.sort(np.roots(g.float_coeffs()[::-1]).real)
            scale = 1.0 + float(max(np.max(np.abs(p_roots)), 1.0))
            band = max(tol, 1e-7) * scale * 10
            bad = _chain_violation(p_roots, q_roots, band)
            if bad is not None:
                idx, gap = bad
                return VerdictReport(
                    "interlaces-sampled", FAIL,
                    residuals={"chain_gap": gap},
                    witness={"x0": [float(v) for v in x0],
                             "direction": [float(v) for v in direction],
                             "pair_index": idx,
                             "p_roots": [float(r) for r in p_roots],
                             "q_roots": [float(r) for r in q_roots]},
                    details={"lines": num_lines, "line_index": i})
    if unsure is not None:
        return VerdictReport("interlaces-sampled", INCONCLUSIVE,
                             witness=None, details={"lines": num_lines, **unsure})
    return VerdictReport("interlaces-sampled", PASS, details={"lines": num_lines})


def psd_interlacing_check(P, Q, x0, samples=100, tol=DEFAULT_TOL, seed=0):
    """Sample B(P, Q; x0) on sphere directions and test PSD.

    The criterion presumes the orientation q(x0) > 0 (an interlacer stays one
    under sign flips but its Bezoutiant flips sign), so Q is normalized by the
    sign of its base-point value first.
    """
    q_at_base = complex(Q.evaluate([1] + [complex(v) for v in x0]))
    if abs(q_at_base.imag) < 1e-9 * (1 + abs(q_at_base)) and q_at_base.real < 0:
        Q = HomogeneousPolynomial.from_polynomial(-1 * Q, Q.hom_degree)
    B = bezoutiant_field(P, Q, x0, seed=seed).to_float()
    d = B.nvars
    worst = float("inf")
    for i in range(samples):
        rng = line_rng(seed, i, tag=4)
        x = sphere_direction(rng, d)
        value = np.array([[complex(e.evaluate(x)).real for e in row]
                          for row in B.entries])
        value = (value + value.T) / 2
        eigs = np.linalg.eigvalsh(value)
        scale = max(1.0, float(np.max(np.abs(eigs))))
        floor = float(eigs[0])
        worst = min(worst, floor / scale)
        if floor < -tol * scale:
            return VerdictReport(
                "bezoutiant-psd", FAIL,
                residuals={"min_eigenvalue_ratio": floor / scale},
                witness={"x": [float(v) for v in x], "min_eigenvalue": floor,
                         "sample_index": i},
                details={"samples": samples, "size": B.nrows})
    return VerdictReport("bezoutiant-psd", PASS,
                         residuals={"min_eigenvalue_ratio": worst},
                         details={"samples": samples, "size": B.nrows})
