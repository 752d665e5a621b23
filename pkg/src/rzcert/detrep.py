"""Construction of positive self-adjoint determinantal representations of
smooth irreducible plane curves (d = 2) from an interlacing polynomial.

Pipeline: intersect the curve of P (degree m) with the interlacer curve of Q
(degree m-1); split the intersection divisor into conjugate halves D, D^tau;
interpolate the m-dimensional spaces of degree-(m-1) forms vanishing on each
half; complete the hermitian-structured matrix V entry by entry through the
rank-one compatibility solve; extract the linear pencil from adj(V) / P^(m-2);
and normalize it to the identity at the base point. Every stage verifies its
own postcondition and the final pencil is checked against p numerically (or
exactly when the divisor data is Gaussian-rational, as for the circle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .interlace import relatively_prime
from .pencil import HERMITIAN, REAL_SYMMETRIC, MatrixPencil, det_poly
from .poly import (HomogeneousPolynomial, NEG_INF, PolyMatrix, Polynomial,
                   ProjectivePoint, UnivariatePolynomial, dehomogenize,
                   directional_derivative, exact_divide, homogenize,
                   monomials_of_degree, uni_gcd)
from .polyio import poly_to_json_dict
from .realroots import yun_decomposition
from .rz import is_rz_sampled, line_rng
from .scalars import (FLOAT, RATIONAL, QQi, conj, demote, imag_part, invert,
                      is_zero, rational_sqrt, real_part)


class ConstructionError(RuntimeError):
    """Stage-tagged failure of the construction pipeline."""

    def __init__(self, stage, message, retries=0):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.retries = retries


# ---------------------------------------------------------------------------
# divisors


@dataclass
class Divisor:
    """Multiset of projective points with multiplicities on a source curve.

    ``pairing`` lists ("real", i) and ("pair", i, j) entries describing how
    coordinatewise conjugation permutes the support; split halves of a
    conjugation-stable divisor carry pairing=None.
    """

    points: list  # [(ProjectivePoint, multiplicity)]
    curve: object = None  # HomogeneousPolynomial the divisor lives on
    pairing: list | None = None
    mode: str = FLOAT

    def total_degree(self):
        return sum(m for _, m in self.points)

    def conjugate(self):
        return Divisor([(pt.conjugate(), m) for pt, m in self.points],
                       self.curve, None, self.mode)

    def to_json_dict(self):
        pts = []
        for pt, m in self.points:
            coords = [[complex(c).real, complex(c).imag] for c in pt.coords]
            pts.append({"coords": coords, "multiplicity": m})
        return {"points": pts, "degree": self.total_degree()}


def _build_pairing(points, mode, tol=1e-8):
    """Match every non-real point with its conjugate; None when impossible."""
    pairing = []
    used = set()
    for i, (pt, mult) in enumerate(points):
        if i in used:
            continue
        if pt.is_real(tol):
            pairing.append(("real", i))
            used.add(i)
            continue
        target = pt.conjugate()
        found = None
        for j, (other, mult2) in enumerate(points):
            if j == i or j in used:
                continue
            if mult2 == mult and other.approx_eq(target, tol):
                found = j
                break
        if found is None:
            return None
        pairing.append(("pair", i, found))
        used.update((i, found))
    return pairing


# ---------------------------------------------------------------------------
# coordinate changes and resultants


def transform_poly(P, T):
    """P(T @ Y) expanded: T is a (d+1)x(d+1) matrix of scalars."""
    n = P.nvars
    forms = []
    for a in range(n):
        terms = {}
        for b in range(n):
            v = T[a][b]
            if not is_zero(v) and (P.mode == RATIONAL or abs(complex(v)) > 0):
                e = [0] * n
                e[b] = 1
                terms[tuple(e)] = v
        forms.append(Polynomial(n, terms, P.mode))
    out = Polynomial.zero(n, P.mode)
    for e, c in P.terms():
        term = Polynomial.constant(c, n, P.mode)
        for a, ea in enumerate(e):
            if ea:
                term = term * forms[a] ** ea
        out = out + term
    hd = P.hom_degree if isinstance(P, HomogeneousPolynomial) else None
    if hd is not None:
        return HomogeneousPolynomial.from_polynomial(out, hd)
    return out


def coeffs_in_var(p, var):
    """Ascending coefficients of p in variable ``var`` as polynomials in the
    remaining variables."""
    deg = max((e[var] for e, _ in p.terms()), default=0)
    buckets = [dict() for _ in range(deg + 1)]
    for e, c in p.terms():
        rest = tuple(v for i, v in enumerate(e) if i != var)
        buckets[e[var]][rest] = c
    return [Polynomial(p.nvars - 1, b, p.mode) for b in buckets]


def sylvester_resultant(A, B, var):
    """Resultant of A and B with respect to variable index ``var``."""
    a = coeffs_in_var(A, var)
    b = coeffs_in_var(B, var)
    da, db = len(a) - 1, len(b) - 1
    if da < 1 or db < 1:
        raise ValueError("resultant needs positive degrees in the variable")
    n = da + db
    zero = Polynomial.zero(A.nvars - 1, A.mode)
    rows = []
    for i in range(db):
        row = [zero] * n
        for k, coef in enumerate(reversed(a)):  # a_da, ..., a_0
            row[i + k] = coef
        rows.append(row)
    for i in range(da):
        row = [zero] * n
        for k, coef in enumerate(reversed(b)):
            row[i + k] = coef
        rows.append(row)
    return PolyMatrix(rows).det()


def _random_coordinate_change(seed, attempt, mode):
    rng = line_rng(seed, attempt, tag=7)
    if mode == RATIONAL:
        while True:
            T = [[Fraction(int(v)) for v in row]
                 for row in rng.integers(-3, 4, size=(3, 3))]
            if linalg.det(T) != 0:
                return T
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    return [[float(v) for v in row] for row in q]


def _mat_vec(T, v):
    return [sum(T[i][j] * v[j] for j in range(len(v))) for i in range(len(T))]


# ---------------------------------------------------------------------------
# smoothness certificate


def assert_smooth_curve(P, seed=0, retries=5, tol=1e-7):
    """Certify that the projective plane curve of P is smooth (hence
    irreducible). Raises ConstructionError("singular-curve", ...) otherwise.

    Candidate singular points come from common roots of the resultants of the
    partial derivatives under a generic coordinate change; one generic
    projection with no common root certifies smoothness.
    """
    m = P.hom_degree
    if m <= 1:
        return
    last = "no attempt"
    for attempt in range(retries):
        T = _random_coordinate_change(seed, attempt, P.mode)
        PT = transform_poly(P, T)
        G = [PT.partial(a) for a in range(3)]
        try:
            R1 = sylvester_resultant(G[1], G[2], 2)
            R2 = sylvester_resultant(G[0], G[2], 2)
        except ValueError:
            last = "degenerate projection"
            continue
        if R1.is_zero() or R2.is_zero():
            raise ConstructionError(
                "singular-curve",
                "partial derivatives share a component: curve is singular",
                attempt)
        f1, ok1 = _dehom_univariate(R1)
        f2, ok2 = _dehom_univariate(R2)
        if not (ok1 and ok2):
            last = "projection sent a candidate to infinity"
            continue
        if P.mode == RATIONAL:
            g = uni_gcd(_to_fraction_poly(f1), _to_fraction_poly(f2))
            if g.degree() == 0:
                return
            raise ConstructionError(
                "singular-curve",
                "partial-derivative resultants share a root; curve appears "
                "singular (exact certificate unavailable for the candidate)",
                attempt)
        roots1 = np.roots(f1.float_coeffs()[::-1])
        roots2 = np.roots(f2.float_coeffs()[::-1])
        if roots1.size == 0 or roots2.size == 0:
            return
        singular = False
        for lam in roots1:
            if np.min(np.abs(roots2 - lam)) > tol * (1 + abs(lam)):
                continue
            # verify: all three partials share a zero on the fiber of lam
            u1 = _fiber_poly(G[1], lam)
            u2 = _fiber_poly(G[2], lam)
            r1 = np.roots(u1[::-1]) if len(u1) > 1 else np.array([])
            r2 = np.roots(u2[::-1]) if len(u2) > 1 else np.array([])
            if r1.size == 0 or r2.size == 0:
                continue
            d = np.abs(r1[:, None] - r2[None, :])
            i, j = np.unravel_index(np.argmin(d), d.shape)
            if d[i, j] > 1e-4 * (1 + abs(r1[i])):
                continue
            x2 = (r1[i] + r2[j]) / 2
            X = np.array([1.0, lam, x2], dtype=complex)
            scale = max(1.0, float(np.max(np.abs(X)))) ** (m - 1)
            vals = [abs(complex(g.evaluate(X))) for g in G]
            if max(vals) <= 1e-5 * scale * (1 + _coeff_scale(P)):
                singular = True
                break
        if singular:
            raise ConstructionError(
                "singular-curve", "common zero of the partial derivatives found",
                attempt)
        return
    raise ConstructionError("singular-curve",
                            f"smoothness could not be certified: {last}", retries)


def _coeff_scale(p):
    return max((abs(complex(c)) for _, c in p.terms()), default=1.0)


def _dehom_univariate(R):
    """R(1, t) as univariate; ok=False when R vanishes at [0:1] (degree drop)."""
    deg = int(R.degree())
    coeffs = [0] * (deg + 1)
    for e, c in R.terms():
        coeffs[e[1]] = coeffs[e[1]] + c
    f = UnivariatePolynomial(coeffs, R.mode)
    if R.mode == RATIONAL:
        ok = len(coeffs) == int(f.degree()) + 1 if not f.is_zero() else False
    else:
        mags = [abs(complex(c)) for c in coeffs]
        top = max(mags) if mags else 0.0
        ok = top > 0 and mags[-1] > 1e-9 * top
    return f, ok


def _to_fraction_poly(f):
    return UnivariatePolynomial([Fraction(real_part(c)) for c in f.coeffs], RATIONAL)


def _fiber_poly(g, lam):
    """Float coefficients of g(1, lam, X2) ascending in X2."""
    cs = coeffs_in_var(g, 2)
    return np.array([complex(c.evaluate([1.0, lam])) for c in cs])


# ---------------------------------------------------------------------------
# intersection divisor


def intersection_divisor(P, Q, seed=0, tol=1e-8, max_retries=6):
    """Divisor of Q on the curve of P: points with intersection multiplicities.

    Uses resultant elimination after a seeded random projective coordinate
    change (undone on output). Float mode Newton-refines every point on a
    regular augmented system; exact mode demands Gaussian-rational points.
    """
    m = P.hom_degree
    if Q.hom_degree != m - 1:
        raise ValueError("interlacer must have degree m - 1")
    if not relatively_prime(P, Q, seed=seed):
        raise ConstructionError("intersection", "P and Q share a component")
    last = "no attempt"
    for attempt in range(max_retries):
        T = _random_coordinate_change(seed, attempt, P.mode)
        PT = transform_poly(P, T)
        QT = transform_poly(Q, T)
        lead_p = PT.coeff((0, 0, m))
        lead_q = QT.coeff((0, 0, m - 1))
        if is_zero(lead_p) or is_zero(lead_q) or (
                P.mode == FLOAT and min(abs(complex(lead_p)), abs(complex(lead_q)))
                < 1e-8 * max(_coeff_scale(PT), _coeff_scale(QT))):
            last = "projection center on a curve"
            continue
        try:
            R = sylvester_resultant(PT, QT, 2)
        except ValueError:
            last = "degenerate resultant"
            continue
        if R.is_zero():
            raise ConstructionError("intersection", "vanishing resultant: "
                                    "P and Q share a component", attempt)
        f, ok = _dehom_univariate(R)
        if not ok or int(f.degree()) != m * (m - 1):
            last = "intersection point escaped to infinity"
            continue
        try:
            if P.mode == RATIONAL:
                points = _points_exact(PT, QT, f, T)
            else:
                points = _points_float(P, Q, PT, QT, f, T, tol)
        except _RetryCoordinates as exc:
            last = str(exc)
            continue
        if sum(mu for _, mu in points) != m * (m - 1):
            last = "multiplicity bookkeeping mismatch"
            continue
        pairing = _build_pairing(points, P.mode)
        if pairing is None:
            last = "conjugate pairing failed"
            continue
        points = _enforce_conjugate_symmetry(points, pairing, P.mode)
        return Divisor(points, P, pairing, P.mode)
    raise ConstructionError("intersection",
                            f"coordinate changes exhausted: {last}", max_retries)


class _RetryCoordinates(Exception):
    pass


def _points_exact(PT, QT, f, T):
    """Exact divisor points; only Gaussian-rational data is representable."""
    points = []
    Tinv_applied = []
    for factor, mult in yun_decomposition(f):
        for lam in _qqi_roots(factor):
            # fiber: common root of PT(1, lam, X2) and QT(1, lam, X2)
            pu = _exact_fiber(PT, lam)
            qu = _exact_fiber(QT, lam)
            g = uni_gcd(pu, qu)
            if int(g.degree()) != 1:
                raise _RetryCoordinates("fiber carries more than one point")
            x2 = demote(-g.coeffs[0] * invert(g.coeffs[1]))
            back = _mat_vec(T, [Fraction(1), lam, x2])
            points.append((ProjectivePoint(back, RATIONAL), mult))
    return points


def _qqi_roots(factor):
    """Roots of a squarefree rational polynomial inside QQ(i), or raise."""
    d = int(factor.degree())
    cs = [Fraction(c) for c in factor.coeffs]
    if d == 1:
        return [demote(-cs[0] / cs[1])]
    if d == 2:
        a, b, c = cs[2], cs[1], cs[0]
        disc = b * b - 4 * a * c
        s = rational_sqrt(disc) if disc >= 0 else None
        if s is not None:
            return [demote((-b + s) / (2 * a)), demote((-b - s) / (2 * a))]
        s = rational_sqrt(-disc)
        if s is not None:
            re = -b / (2 * a)
            im = s / (2 * a)
            return [QQi(re, im), QQi(re, -im)]
    roots = []
    remaining = factor
    # peel off rational roots, then retry the quadratic case
    changed = True
    while changed and int(remaining.degree()) > 2:
        changed = False
        for cand in _rational_root_candidates(remaining):
            if remaining(cand) == 0:
                roots.append(cand)
                remaining, _ = remaining.divmod(
                    UnivariatePolynomial([-cand, Fraction(1)], RATIONAL))
                changed = True
                break
    if int(remaining.degree()) <= 2 and int(remaining.degree()) >= 1:
        return roots + _qqi_roots(remaining)
    raise ConstructionError(
        "intersection",
        "divisor points are not Gaussian-rational; use float mode")


def _rational_root_candidates(f):
    num = f.coeffs[0].numerator * math.prod(c.denominator for c in f.coeffs)
    den = f.coeffs[-1].numerator * math.prod(c.denominator for c in f.coeffs)
    num, den = abs(num), abs(den)
    for p in _divisors(num) | {0}:
        for q in _divisors(den):
            yield Fraction(p, q)
            yield Fraction(-p, q)


def _divisors(n):
    n = abs(int(n))
    if n == 0:
        return {1}
    out = set()
    for i in range(1, int(math.isqrt(n)) + 1):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
    return out


def _exact_fiber(PT, lam):
    cs = coeffs_in_var(PT, 2)
    return UnivariatePolynomial([c.evaluate([Fraction(1), lam])
                                 if isinstance(lam, Fraction)
                                 else c.evaluate([QQi(1), lam]) for c in cs],
                                RATIONAL)


def _points_float(P, Q, PT, QT, f, T, tol, cluster_tol=2e-5):
    lam_roots = np.roots(f.float_coeffs()[::-1])
    clusters = _cluster(lam_roots, cluster_tol)
    points = []
    for lam, mult in clusters:
        pu = _fiber_poly(PT, lam)
        qu = _fiber_poly(QT, lam)
        rp = np.roots(pu[::-1])
        rq = np.roots(qu[::-1])
        if rp.size == 0 or rq.size == 0:
            raise _RetryCoordinates("empty fiber")
        d = np.abs(rp[:, None] - rq[None, :])
        i, j = np.unravel_index(np.argmin(d), d.shape)
        scale = 1.0 + abs(rp[i])
        if d[i, j] > 1e-3 * scale:
            raise _RetryCoordinates("no common fiber root")
        # a second, separated common root on the same fiber means two
        # intersection points collided in the projection
        d2 = d.copy()
        d2[i, :] = np.inf
        d2[:, j] = np.inf
        if d2.size and np.min(d2) < 1e-3 * scale:
            k, l = np.unravel_index(np.argmin(d2), d2.shape)
            if abs(rp[k] - rp[i]) > 1e-3 * scale:
                raise _RetryCoordinates("projection merged two points")
        x2 = (rp[i] + rq[j]) / 2
        X = np.array(_mat_vec(T, [1.0, complex(lam), complex(x2)]), dtype=complex)
        X = _newton_refine(P, Q, X, contact=mult > 1)
        points.append((ProjectivePoint(list(X), FLOAT), mult))
    # merged refinements indicate a bad projection
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i][0].approx_eq(points[j][0], 1e-7):
                raise _RetryCoordinates("distinct clusters refined to one point")
    return points


def _cluster(values, tol):
    order = sorted(values, key=lambda z: (z.real, z.imag))
    groups = []
    for z in order:
        placed = False
        for g in groups:
            if abs(z - g[0] / g[1]) <= tol * (1 + abs(z)):
                groups[groups.index(g)] = (g[0] + z, g[1] + 1)
                placed = True
                break
        if not placed:
            groups.append((z, 1))
    return [(s / n, n) for s, n in groups]


def _newton_refine(P, Q, X, contact, iters=40):
    """Refine an intersection point to machine precision.

    Transversal points solve {P = 0, Q = 0}; contact points (intersection
    multiplicity 2) solve {P = 0, W = 0} with W a cross-product component of
    the two gradients, which is a regular system at first-order tangency.
    """
    Pf = P.to_float()
    Qf = Q.to_float()
    c = int(np.argmax(np.abs(X)))
    X = X / X[c]
    gradP = [Pf.partial(a) for a in range(3)]
    if contact:
        gradQ = [Qf.partial(a) for a in range(3)]
        a, b = [i for i in range(3) if i != c]
        # W = (grad P x grad Q)_c up to sign
        second = gradP[a] * gradQ[b] - gradP[b] * gradQ[a]
    else:
        second = Qf
    grad2 = [second.partial(k) for k in range(3)]
    if X.imag.max() == 0 and X.imag.min() == 0:
        X = X.real.astype(complex)
    for _ in range(iters):
        F = np.array([complex(Pf.evaluate(X)), complex(second.evaluate(X)), 0.0])
        J = np.zeros((3, 3), dtype=complex)
        J[0] = [complex(g.evaluate(X)) for g in gradP]
        J[1] = [complex(g.evaluate(X)) for g in grad2]
        J[2, c] = 1.0
        try:
            delta = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        X = X - delta
        if np.max(np.abs(delta)) < 1e-14 * (1 + np.max(np.abs(X))):
            break
    # a real-looking point of a real system stays real
    if np.max(np.abs(X.imag)) <= 1e-9 * (1 + np.max(np.abs(X.real))):
        X = X.real.astype(complex)
    res = abs(complex(Pf.evaluate(X)))
    scale = _coeff_scale(Pf) * max(1.0, float(np.max(np.abs(X)))) ** P.hom_degree
    if res > 1e-8 * scale:
        raise _RetryCoordinates("refinement did not converge")
    return X


def _enforce_conjugate_symmetry(points, pairing, mode):
    out = list(points)
    for entry in pairing:
        if entry[0] == "pair":
            _, i, j = entry
            pt, mult = out[i]
            out[j] = (pt.conjugate(), mult)
        elif mode == FLOAT:
            i = entry[1]
            pt, mult = out[i]
            coords = [complex(c).real for c in pt.coords]
            out[i] = (ProjectivePoint(coords, FLOAT), mult)
    return out


# ---------------------------------------------------------------------------
# divisor splitting


def split_divisor(divisor, seed=0, selection=None, return_bits=False):
    """(Q) = D + D^tau: halve real contact points, route conjugate pairs.

    Every real point needs even multiplicity (real contact); each conjugate
    pair contributes all copies of one member to D, chosen by ``selection``
    bits or the seed. D^tau is the coordinatewise conjugate of D. Returns
    (D, Dtau); with return_bits=True also the per-pair selection bits.
    """
    if divisor.pairing is None:
        raise ValueError("divisor lacks conjugation pairing")
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFF, 29])
    bits = []
    d_points = []
    pair_index = 0
    for entry in divisor.pairing:
        if entry[0] == "real":
            pt, mult = divisor.points[entry[1]]
            if mult % 2 != 0:
                raise ConstructionError(
                    "split",
                    f"real intersection point {pt} has odd multiplicity {mult}: "
                    "the interlacer is not a real contact curve")
            d_points.append((pt, mult // 2))
        else:
            _, i, j = entry
            if selection is not None:
                bit = int(selection[pair_index])
            else:
                bit = int(rng.integers(0, 2))
            bits.append(bit)
            pair_index += 1
            keep = divisor.points[i if bit == 0 else j]
            d_points.append(keep)
    D = Divisor(d_points, divisor.curve, None, divisor.mode)
    Dtau = D.conjugate()
    expect = divisor.total_degree() // 2
    if D.total_degree() != expect:
        raise ConstructionError(
            "split", f"half-divisor degree {D.total_degree()} != {expect}")
    return D, Dtau, bits


# ---------------------------------------------------------------------------
# vanishing spaces


def vanishing_basis(D, m, rtol=1e-9):
    """Basis of the degree-(m-1) forms vanishing on D (with first-order jet
    conditions along the curve at multiplicity-2 points). The nullspace must
    have dimension exactly m."""
    expected = m * (m - 1) // 2
    if D.total_degree() != expected:
        raise ValueError(f"divisor degree {D.total_degree()}, expected {expected}")
    monos = list(monomials_of_degree(3, m - 1))
    mode = D.mode
    rows = []
    P = D.curve
    for pt, mult in D.points:
        if mult > 2:
            raise ConstructionError(
                "vanishing-basis",
                f"contact order {mult} at a divisor point is not supported")
        rows.append(_point_row(monos, pt, mode))
        if mult == 2:
            rows.append(_jet_row(monos, pt, P, mode))
    if mode == RATIONAL:
        basis_vecs = linalg.nullspace(rows, ncols=len(monos))
    else:
        ns = linalg.nullspace_numeric(np.array(rows, dtype=complex), rtol=rtol)
        basis_vecs = [list(ns[:, k]) for k in range(ns.shape[1])]
    if len(basis_vecs) != m:
        raise ConstructionError(
            "vanishing-basis",
            f"vanishing space has dimension {len(basis_vecs)}, expected {m} "
            "(special position or failed linear-equivalence condition)")
    return [_vec_to_form(v, monos, mode, m - 1) for v in basis_vecs]


def _point_row(monos, pt, mode):
    coords = list(pt.coords)
    if mode == FLOAT:
        z = np.array([complex(c) for c in coords])
        z = z / np.max(np.abs(z))
        return [np.prod(z ** np.array(e)) for e in monos]
    return [_mono_eval(coords, e) for e in monos]


def _mono_eval(coords, e):
    v = Fraction(1)
    for c, k in zip(coords, e):
        for _ in range(k):
            v = v * c
    return demote(v)


def _jet_row(monos, pt, P, mode):
    """First-order vanishing along the curve branch: grad(F)(z) . tau = 0,
    with tau = z x grad(P)(z), a tangent direction of the smooth curve."""
    if P is None:
        raise ValueError("jet conditions need the source curve")
    Pp = P if mode == RATIONAL else P.to_float()
    coords = list(pt.coords)
    g = [Pp.partial(a).evaluate(coords) for a in range(3)]
    z = coords
    tau = [demote(z[1] * g[2] - z[2] * g[1]),
           demote(z[2] * g[0] - z[0] * g[2]),
           demote(z[0] * g[1] - z[1] * g[0])]
    if mode == FLOAT:
        tz = np.array([complex(t) for t in tau])
        top = np.max(np.abs(tz))
        if top < 1e-12:
            raise ConstructionError("vanishing-basis",
                                    "degenerate tangent at a contact point")
        tau = list(tz / top)
    row = []
    for e in monos:
        acc = 0j if mode == FLOAT else Fraction(0)
        for a in range(3):
            if e[a] == 0:
                continue
            de = list(e)
            de[a] -= 1
            acc = acc + e[a] * _mono_eval_any(z, de, mode) * tau[a]
        row.append(demote(acc) if mode == RATIONAL else acc)
    return row


def _mono_eval_any(coords, e, mode):
    if mode == FLOAT:
        z = np.array([complex(c) for c in coords])
        return complex(np.prod(z ** np.array(e)))
    return _mono_eval(coords, e)


def _vec_to_form(vec, monos, mode, hdeg):
    terms = {e: v for e, v in zip(monos, vec) if not is_zero(v)}
    p = Polynomial(3, terms, mode)
    if mode == FLOAT:
        p = p.chop(1e-12)
    return HomogeneousPolynomial.from_polynomial(p, hdeg)


def _form_to_vec(form, monos, mode):
    return [form.coeff(e) for e in monos]


def rotate_basis_to_q(basis, Q, rtol=1e-8):
    """Return a basis of the same span with Q as its first element."""
    m1 = Q.hom_degree
    monos = list(monomials_of_degree(3, m1))
    mode = Q.mode
    cols = [[_form_to_vec(b, monos, mode)[r] for b in basis]
            for r in range(len(monos))]
    target = _form_to_vec(Q, monos, mode)
    if mode == RATIONAL:
        sol, _ = linalg.solve(cols, target)
        if sol is None:
            raise ConstructionError("vanishing-basis",
                                    "interlacer is not in the vanishing space")
        pivot = max(range(len(sol)), key=lambda k: abs(complex(sol[k])))
        if is_zero(sol[pivot]):
            raise ConstructionError("vanishing-basis", "zero expansion of Q")
        out = [Q] + [b for k, b in enumerate(basis) if k != pivot]
        return out
    A = np.array(cols, dtype=complex)
    t = np.array(target, dtype=complex)
    sol, res = linalg.lstsq_residual(A, t)
    if res > rtol:
        raise ConstructionError(
            "vanishing-basis",
            f"interlacer is outside the vanishing space (residual {res:.2e})")
    # orthonormal complement of Q inside the span
    qv = t / np.linalg.norm(t)
    span = A  # columns are basis vectors
    proj = span - np.outer(qv, qv.conj() @ span)
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    keep = [u[:, k] for k in range(len(basis)) if s[k] > 1e-10 * s[0]]
    if len(keep) != len(basis) - 1:
        raise ConstructionError("vanishing-basis",
                                "basis rotation lost a dimension")
    out = [Q] + [_vec_to_form(list(v), monos, mode, m1) for v in keep]
    return out


# ---------------------------------------------------------------------------
# filling the adjoint matrix


def fill_matrix(P, Q, basis_d, basis_dtau, rtol=1e-8):
    """Complete V from its first row and column via the rank-one solve
    V11 * Vij + W * P = Vi1 * V1j (unknowns Vij of degree m-1, W of m-2)."""
    m = P.hom_degree
    mode = P.mode
    if basis_d[0] != Q or basis_dtau[0] != Q.conjugate():
        raise ValueError("bases must lead with Q and its conjugate")
    entries = [[None] * m for _ in range(m)]
    for i in range(m):
        entries[i][0] = basis_d[i]
        entries[0][i] = basis_dtau[i]
    monos_v = list(monomials_of_degree(3, m - 1))
    monos_w = list(monomials_of_degree(3, m - 2)) if m >= 2 else []
    monos_eq = list(monomials_of_degree(3, 2 * (m - 1)))
    cols = []
    for e in monos_v:
        prod = _mono_times(Q, e)
        cols.append([prod.get(t, 0) for t in monos_eq])
    for e in monos_w:
        prod = _mono_times(P, e)
        cols.append([prod.get(t, 0) for t in monos_eq])
    for i in range(1, m):
        for j in range(i, m):
            rhs_poly = entries[i][0] * entries[0][j]
            rhs = [rhs_poly.coeff(t) for t in monos_eq]
            if mode == RATIONAL:
                mat = [[cols[c][r] for c in range(len(cols))]
                       for r in range(len(monos_eq))]
                sol, unique = linalg.solve(mat, rhs)
                if sol is None or not unique:
                    raise ConstructionError(
                        "fill-matrix",
                        f"rank-one solve for entry ({i},{j}) is "
                        f"{'inconsistent' if sol is None else 'not unique'}")
                coeffs = sol[:len(monos_v)]
            else:
                A = np.array(cols, dtype=complex).T
                b = np.array([complex(v) for v in rhs])
                s = np.linalg.svd(A, compute_uv=False)
                if s[-1] <= 1e-10 * s[0]:
                    raise ConstructionError(
                        "fill-matrix", "rank-deficient rank-one solve")
                sol, res = linalg.lstsq_residual(A, b)
                if res > rtol:
                    raise ConstructionError(
                        "fill-matrix",
                        f"rank-one solve residual {res:.2e} for entry ({i},{j})")
                coeffs = list(sol[:len(monos_v)])
            vij = _vec_to_form(coeffs, monos_v, mode, m - 1)
            entries[i][j] = vij
            entries[j][i] = vij.conjugate()
    return PolyMatrix(entries)


def _mono_times(p, e):
    out = {}
    for pe, c in p.terms():
        out[tuple(a + b for a, b in zip(pe, e))] = c
    return out


# ---------------------------------------------------------------------------
# pencil extraction and normalization


def extract_pencil(V, P, tol=1e-8):
    """det V = c * P^(m-1); U = adj(V) / P^(m-2) has linear entries.

    Returns (coefficient matrices of U, c)."""
    m = P.hom_degree
    detv = V.det()
    if V.mode == FLOAT:
        detv = detv.chop(1e-12)
    if detv.is_zero():
        raise ConstructionError("extract", "det V vanishes identically")
    c_poly, ok = exact_divide(detv, _power(P, m - 1), tol=tol)
    if not ok or c_poly is None or int(c_poly.degree()) > 0:
        raise ConstructionError("extract", "det V is not c * P^(m-1)")
    c = c_poly.coeff((0, 0, 0))
    if is_zero(c) or (V.mode == FLOAT and abs(complex(c)) < 1e-10):
        raise ConstructionError("extract", "vanishing constant in det V")
    adj = V.adjugate()
    pm2 = _power(P, m - 2)
    mats = [[[None] * m for _ in range(m)] for _ in range(3)]
    for i in range(m):
        for j in range(m):
            q, ok = exact_divide(adj[i, j], pm2, tol=tol)
            if not ok or q is None:
                raise ConstructionError(
                    "extract", f"adj(V)[{i}][{j}] is not divisible by P^(m-2)")
            if q.degree() not in (NEG_INF, 0, 1):
                raise ConstructionError(
                    "extract", f"extracted entry ({i},{j}) has degree {q.degree()}")
            for a in range(3):
                e = [0, 0, 0]
                e[a] = 1
                mats[a][i][j] = q.coeff(tuple(e))
    # hermitian structure: exact by construction, symmetrized in float mode
    out = []
    herm_res = 0.0
    for a in range(3):
        grid = mats[a]
        if V.mode == FLOAT:
            for i in range(m):
                for j in range(i, m):
                    x, y = complex(grid[i][j]), complex(grid[j][i])
                    herm_res = max(herm_res, abs(x - conj(y)))
                    avg = (x + conj(y)) / 2
                    grid[i][j] = avg
                    grid[j][i] = conj(avg)
        out.append(grid)
    return out, c, herm_res


def _power(P, k):
    out = Polynomial.constant(1, P.nvars, P.mode)
    for _ in range(k):
        out = out * P
    return HomogeneousPolynomial.from_polynomial(out, P.hom_degree * k)


def normalize_at_basepoint(raw_mats, X0, mode, tol=1e-9):
    """Congruence-normalize U so that A(x0) = I; sign-flip first when U(X0)
    is negative definite. Raises when U(X0) is indefinite (invalid interlacer).

    The factorization U(X0) = T T* uses an UPPER triangular T (Cholesky/LDL*
    of the index-reversed matrix): T^{-1} then fixes span{e1}, which keeps the
    first principal minor of the normalized pencil proportional to the
    interlacer instead of mixing all adjugate entries.

    Returns (mats, notes); notes records sign flips and whether the exact
    square-root scaling survived in rational mode.
    """
    n = len(raw_mats[0])
    notes = {}

    def _flip(M):
        return [[M[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]

    if mode == RATIONAL:
        U0 = _exact_combo(raw_mats, X0)
        flip_sign = False
        try:
            L, D = linalg.ldl_hermitian(_flip(U0))
        except ValueError:
            L = D = None
        if D is not None and all(d > 0 for d in D):
            pass
        else:
            U0n = [[demote(-v) for v in row] for row in U0]
            try:
                L, D = linalg.ldl_hermitian(_flip(U0n))
            except ValueError as exc:
                raise ConstructionError(
                    "normalize", f"basepoint matrix is indefinite ({exc}); "
                    "interlacer invalid") from exc
            if not all(d > 0 for d in D):
                raise ConstructionError(
                    "normalize", "basepoint matrix is indefinite; interlacer invalid")
            flip_sign = True
            raw_mats = [[[demote(-v) for v in row] for row in m] for m in raw_mats]
        notes["sign_flipped"] = flip_sign
        # U0 = T diag(dd) T* with T = flip(L) unit upper triangular
        Ti = _flip(linalg.lower_triangular_inverse(L))
        Tis = linalg.conj_transpose(Ti)
        dd = [D[n - 1 - i] for i in range(n)]
        scaled = [linalg.mat_mul(linalg.mat_mul(Ti, A), Tis) for A in raw_mats]
        sqrts = {}
        exact_ok = True
        for i in range(n):
            for j in range(n):
                key = (min(i, j), max(i, j))
                if key not in sqrts:
                    sqrts[key] = rational_sqrt(dd[i] * dd[j])
                if sqrts[key] is None:
                    exact_ok = False
        notes["exact_sqrt"] = exact_ok
        if exact_ok:
            out = []
            for A in scaled:
                grid = [[demote(A[i][j] * invert(sqrts[(min(i, j), max(i, j))]))
                         for j in range(n)] for i in range(n)]
                out.append(grid)
            return out, notes
        # fall back to float scaling
        fl = []
        dvals = [float(d) for d in dd]
        for A in scaled:
            grid = [[complex(A[i][j]) / math.sqrt(dvals[i] * dvals[j])
                     for j in range(n)] for i in range(n)]
            fl.append(grid)
        notes["mode_degraded"] = True
        return fl, notes

    mats = [np.array([[complex(v) for v in row] for row in m]) for m in raw_mats]
    U0 = sum(complex(x) * A for x, A in zip(X0, mats))
    U0 = (U0 + U0.conj().T) / 2
    eigs = np.linalg.eigvalsh(U0)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    if eigs[0] > tol * scale:
        flip_sign = False
    elif eigs[-1] < -tol * scale:
        flip_sign = True
        mats = [-A for A in mats]
        U0 = -U0
    else:
        raise ConstructionError(
            "normalize",
            f"basepoint matrix is indefinite (eigs {eigs.tolist()}); "
            "interlacer invalid")
    notes["sign_flipped"] = flip_sign
    T = np.linalg.cholesky(U0[::-1, ::-1])[::-1, ::-1]  # upper, T T* = U0
    Ti = np.linalg.inv(T)
    out = []
    for A in mats:
        B = Ti @ A @ Ti.conj().T
        B = (B + B.conj().T) / 2
        out.append([[complex(v) for v in row] for row in B])
    return out, notes


def _exact_combo(raw_mats, X0):
    n = len(raw_mats[0])
    out = [[Fraction(0)] * n for _ in range(n)]
    for x, A in zip(X0, raw_mats):
        for i in range(n):
            for j in range(n):
                out[i][j] = demote(out[i][j] + x * A[i][j])
    return out


# ---------------------------------------------------------------------------
# end-to-end construction


@dataclass
class ConstructionTrace:
    divisor: Divisor | None = None
    split_bits: list = field(default_factory=list)
    half_divisor: Divisor | None = None
    column_basis: list = field(default_factory=list)
    adjoint_matrix: PolyMatrix | None = None
    det_constant: object = None
    interlacer: object = None
    gamma: object = None
    residuals: dict = field(default_factory=dict)
    retries: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def to_json_dict(self):
        out = {"residuals": {k: float(v) for k, v in self.residuals.items()},
               "retries": dict(self.retries), "notes": dict(self.notes),
               "split_bits": list(self.split_bits)}
        if self.divisor is not None:
            out["divisor"] = self.divisor.to_json_dict()
        if self.det_constant is not None:
            out["det_constant"] = [complex(self.det_constant).real,
                                   complex(self.det_constant).imag]
        if self.gamma is not None:
            out["first_minor_scale"] = [complex(self.gamma).real,
                                        complex(self.gamma).imag]
        if self.interlacer is not None:
            out["interlacer"] = poly_to_json_dict(self.interlacer)
        return out


def construct(p, x0, interlacer=None, seed=0, mode=None, tol=1e-8,
              rz_lines=120, check_rz=True, split_retries=4):
    """Build a positive self-adjoint determinantal representation of p.

    ``interlacer`` is None (directional derivative at x0), a point x'
    (derivative at x'), or an explicit homogeneous polynomial of degree m-1.
    Returns (MatrixPencil with A(x0) = I, ConstructionTrace).
    """
    if p.nvars != 2:
        raise ValueError("construction is restricted to d = 2")
    if mode is not None and mode != p.mode:
        p = p.to_float() if mode == FLOAT else p
        if mode == RATIONAL and p.mode != RATIONAL:
            raise ValueError("cannot promote float input to exact mode")
    mode = p.mode
    deg = p.degree()
    if deg == NEG_INF or deg < 1:
        raise ValueError("p must be nonconstant")
    m = int(deg)
    trace = ConstructionTrace()

    # normalize p(x0) = 1
    p0 = p.evaluate(list(x0))
    if is_zero(p0) or (mode == FLOAT and abs(complex(p0)) < 1e-12):
        raise ConstructionError("precondition", "p(x0) = 0")
    p = p * invert(p0)
    trace.notes["rescaled_by"] = float(complex(p0).real)

    if check_rz:
        verdict = is_rz_sampled(p, x0, num_lines=rz_lines, tol=tol, seed=seed)
        if verdict.status != "rz-confirmed-sampled":
            raise ConstructionError(
                "precondition",
                f"p is not certified real-zero at x0 (status {verdict.status}, "
                f"witness {verdict.witness})")

    P = homogenize(p, m)
    X0 = [1] + list(x0) if mode == RATIONAL else [1.0] + [float(v) for v in x0]

    if m == 1:
        return _linear_pencil(p, x0, trace), trace

    assert_smooth_curve(P, seed=seed)

    Q = _resolve_interlacer(P, x0, interlacer, mode)
    trace.interlacer = Q

    divisor = intersection_divisor(P, Q, seed=seed, tol=tol)
    trace.divisor = divisor
    bezout_degree = m * (m - 1)
    if divisor.total_degree() != bezout_degree:
        raise ConstructionError(
            "intersection",
            f"divisor degree {divisor.total_degree()} != {bezout_degree}")

    last_exc = None
    for attempt in range(split_retries):
        try:
            D, Dtau, bits = split_divisor(divisor, seed=seed + attempt)
            basis_raw = vanishing_basis(D, m)
            basis_d = rotate_basis_to_q(basis_raw, Q)
            basis_dtau = [b.conjugate() for b in basis_d]
            basis_dtau = [HomogeneousPolynomial.from_polynomial(b, m - 1)
                          for b in basis_dtau]
            V = fill_matrix(P, Q, basis_d, basis_dtau)
            raw_mats, c, herm_res = extract_pencil(V, P, tol=tol)
            trace.split_bits = bits
            trace.half_divisor = D
            trace.column_basis = basis_d
            trace.adjoint_matrix = V
            trace.det_constant = c
            trace.residuals["hermitian_asymmetry"] = herm_res
            trace.retries["split_attempts"] = attempt + 1
            break
        except ConstructionError as exc:
            if exc.stage == "split":
                raise
            last_exc = exc
    else:
        raise ConstructionError(
            last_exc.stage if last_exc else "construct",
            f"all split attempts failed: {last_exc}", split_retries)

    mats, notes = normalize_at_basepoint(raw_mats, X0, mode, tol=tol)
    trace.notes.update(notes)
    out_mode = RATIONAL if (mode == RATIONAL and not notes.get("mode_degraded")) \
        else FLOAT
    sym = REAL_SYMMETRIC if _all_real(mats, out_mode) else HERMITIAN
    pencil = MatrixPencil(mats, sym, out_mode)
    _verify_construction(pencil, p, x0, Q, trace, tol)
    return pencil, trace


def _all_real(mats, mode):
    for m_ in mats:
        for row in m_:
            for v in row:
                if mode == RATIONAL:
                    if not is_zero(imag_part(v)):
                        return False
                elif abs(complex(v).imag) > 1e-12:
                    return False
    return True


def _linear_pencil(p, x0, trace):
    # degree 1: the 1x1 pencil [p] is already the representation
    mats = [[[p.coeff((0, 0))]], [[p.coeff((1, 0))]], [[p.coeff((0, 1))]]]
    trace.notes["linear_case"] = True
    sym = REAL_SYMMETRIC if p.mode == RATIONAL or all(
        abs(complex(m_[0][0]).imag) < 1e-12 for m_ in mats) else HERMITIAN
    return MatrixPencil(mats, sym, p.mode)


def _resolve_interlacer(P, x0, interlacer, mode):
    m = P.hom_degree
    if interlacer is None or (isinstance(interlacer, str)
                              and interlacer == "derivative"):
        xp = list(x0)
    elif isinstance(interlacer, (list, tuple)) and not isinstance(
            interlacer, HomogeneousPolynomial):
        xp = list(interlacer)
    else:
        Q = interlacer
        if not isinstance(Q, HomogeneousPolynomial):
            raise ValueError("explicit interlacer must be homogeneous")
        if Q.mode != mode:
            Q = Q.to_float() if mode == FLOAT else Q
        if Q.hom_degree != m - 1:
            raise ValueError(f"interlacer degree {Q.hom_degree}, expected {m - 1}")
        return Q
    coords = [1] + xp if mode == RATIONAL else [1.0] + [float(v) for v in xp]
    return directional_derivative(P, coords)


def _verify_construction(pencil, p, x0, Q, trace, tol):
    # A(x0) = I
    U0 = pencil.value(x0)
    eye_res = float(np.max(np.abs(U0 - np.eye(pencil.n))))
    trace.residuals["basepoint_identity"] = eye_res
    if eye_res > max(tol, 1e-8):
        raise ConstructionError("verify", f"A(x0) - I residual {eye_res:.2e}")

    # det A = p
    if pencil.mode == RATIONAL and p.mode == RATIONAL:
        det = det_poly(pencil)
        diff = det - p
        trace.residuals["det_identity"] = 0.0 if diff.is_zero() else float(
            diff.max_abs_coeff())
        trace.notes["det_exact"] = diff.is_zero()
        if not diff.is_zero():
            raise ConstructionError("verify", "exact determinant mismatch")
    else:
        rng = np.random.default_rng([7, 31])
        pf = p.to_float()
        worst = 0.0
        for _ in range(200):
            x = np.asarray(x0, dtype=float) + rng.normal(size=2)
            dv = complex(np.linalg.det(pencil.value(x)))
            pv = complex(pf.evaluate(x))
            worst = max(worst, abs(dv - pv) / max(1.0, abs(dv), abs(pv)))
        trace.residuals["det_identity"] = worst
        if worst > 1e-6:
            raise ConstructionError("verify",
                                    f"determinant residual {worst:.2e} > 1e-6")

    # first principal minor proportional to the interlacer
    minor = pencil.hom_poly_matrix().minor(0, 0).det()
    if pencil.mode == FLOAT:
        minor = minor.chop(1e-11)
    qd = dehomogenize(Q) if Q.nvars == 3 else Q
    gamma, residual = _proportionality(minor, Q)
    trace.gamma = gamma
    trace.residuals["first_minor_proportionality"] = residual
    if gamma is None or residual > 1e-6:
        raise ConstructionError(
            "verify", f"first principal minor is not proportional to Q "
            f"(residual {residual})")
    del qd


def _proportionality(a, b):
    """gamma with a = gamma * b, plus a relative residual."""
    af = a.to_float()
    bf = b.to_float()
    pairs = dict(bf.terms())
    best = max(pairs, key=lambda e: abs(complex(pairs[e])))
    gamma = complex(af.coeff(best)) / complex(pairs[best])
    diff_terms = {}
    for e, c in af.terms():
        diff_terms[e] = complex(c)
    for e, c in bf.terms():
        diff_terms[e] = diff_terms.get(e, 0) - gamma * complex(c)
    scale = max(1.0, af.max_abs_coeff())
    residual = max((abs(v) for v in diff_terms.values()), default=0.0) / scale
    return gamma, residual
