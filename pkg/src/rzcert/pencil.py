"""Matrix pencils A0 + x1 A1 + ... + xd Ad: the data model, symbolic
determinants, LMI verification, the executable lemma suite, and the
hermitian-to-real-symmetric doubling.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .interlace import interlaces_sampled
from .poly import (HomogeneousPolynomial, NEG_INF, PolyMatrix, Polynomial,
                   directional_derivative, exact_divide, homogenize,
                   monomials_up_to, restrict_to_line)
from .report import FAIL, PASS, VerdictReport
from .rz import line_rng, membership, renegar_chain, sphere_direction
from .scalars import (FLOAT, RATIONAL, conj, demote, imag_part, is_zero,
                      real_part, scalar_from_json_pair, scalar_to_json_pair)

HERMITIAN = "hermitian"
REAL_SYMMETRIC = "real-symmetric"


class PencilFormatError(ValueError):
    pass


class MatrixPencil:
    """d+1 hermitian (or real symmetric) constant n x n matrices."""

    __slots__ = ("d", "n", "sym_class", "mode", "mats", "_np")

    def __init__(self, mats, sym_class=HERMITIAN, mode=None, validate=True,
                 tol=1e-9):
        self.mats = [[list(row) for row in m] for m in mats]
        self.d = len(self.mats) - 1
        if self.d < 0:
            raise PencilFormatError("a pencil needs at least one matrix")
        self.n = len(self.mats[0])
        self.sym_class = sym_class
        if mode is None:
            mode = FLOAT if any(
                isinstance(v, (float, complex))
                for m in self.mats for row in m for v in row) else RATIONAL
        self.mode = mode
        self._np = None
        for m in self.mats:
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise PencilFormatError("coefficient matrices must be square, same size")
        if validate:
            self._validate(tol)

    def _validate(self, tol):
        for a, m in enumerate(self.mats):
            for i in range(self.n):
                for j in range(self.n):
                    lhs, rhs = m[i][j], conj(m[j][i])
                    if self.mode == RATIONAL:
                        if demote(lhs - rhs) != 0:
                            raise PencilFormatError(
                                f"matrix {a} is not hermitian at ({i},{j})")
                        if self.sym_class == REAL_SYMMETRIC and imag_part(lhs) != 0:
                            raise PencilFormatError(
                                f"matrix {a} has an imaginary entry at ({i},{j})")
                    else:
                        if abs(complex(lhs) - complex(rhs)) > tol * (1 + abs(complex(lhs))):
                            raise PencilFormatError(
                                f"matrix {a} is not hermitian at ({i},{j})")
                        if (self.sym_class == REAL_SYMMETRIC
                                and abs(complex(lhs).imag) > tol):
                            raise PencilFormatError(
                                f"matrix {a} has an imaginary entry at ({i},{j})")

    # -- numeric views -------------------------------------------------------

    def npmats(self):
        if self._np is None:
            self._np = [np.array([[complex(v) for v in row] for row in m])
                        for m in self.mats]
        return self._np

    def value(self, x):
        """A0 + sum x_i A_i as a complex ndarray."""
        mats = self.npmats()
        out = mats[0].copy()
        for i, xi in enumerate(x):
            out = out + complex(xi) * mats[i + 1]
        return out

    def hom_value(self, X):
        mats = self.npmats()
        out = np.zeros((self.n, self.n), dtype=complex)
        for a, Xa in enumerate(X):
            out = out + complex(Xa) * mats[a]
        return out

    def basepoint_matrix(self, x0):
        return self.value(x0)

    # -- symbolic views ------------------------------------------------------

    def poly_matrix(self):
        """Affine PolyMatrix in d variables."""
        entries = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                terms = {}
                c0 = self.mats[0][i][j]
                if not is_zero(c0):
                    terms[(0,) * self.d] = c0
                for k in range(self.d):
                    c = self.mats[k + 1][i][j]
                    if not is_zero(c):
                        e = [0] * self.d
                        e[k] = 1
                        terms[tuple(e)] = c
                row.append(Polynomial(self.d, terms, self.mode))
            entries.append(row)
        return PolyMatrix(entries)

    def hom_poly_matrix(self):
        """Homogeneous PolyMatrix sum_a X_a A_a in d+1 variables."""
        entries = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                terms = {}
                for a in range(self.d + 1):
                    c = self.mats[a][i][j]
                    if not is_zero(c):
                        e = [0] * (self.d + 1)
                        e[a] = 1
                        terms[tuple(e)] = c
                row.append(Polynomial(self.d + 1, terms, self.mode))
            entries.append(row)
        return PolyMatrix(entries)

    # -- structure ops -------------------------------------------------------

    def direct_sum(self, other):
        if self.d != other.d:
            raise ValueError("variable counts differ")
        mode = FLOAT if FLOAT in (self.mode, other.mode) else RATIONAL
        zero = 0j if mode == FLOAT else Fraction(0)
        n = self.n + other.n
        mats = []
        for a in range(self.d + 1):
            m = [[zero] * n for _ in range(n)]
            for i in range(self.n):
                for j in range(self.n):
                    m[i][j] = self.mats[a][i][j]
            for i in range(other.n):
                for j in range(other.n):
                    m[self.n + i][self.n + j] = other.mats[a][i][j]
            mats.append(m)
        cls = REAL_SYMMETRIC if (self.sym_class == other.sym_class == REAL_SYMMETRIC) \
            else HERMITIAN
        return MatrixPencil(mats, cls, mode)

    def scaled(self, factor):
        return MatrixPencil([[[demote(v * factor) for v in row] for row in m]
                             for m in self.mats], self.sym_class, self.mode)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        out_mats = []
        for m in self.mats:
            re_m, im_m = [], []
            for row in m:
                re_row, im_row = [], []
                for v in row:
                    re_v, im_v = scalar_to_json_pair(v, self.mode)
                    re_row.append(re_v)
                    im_row.append(im_v)
                re_m.append(re_row)
                im_m.append(im_row)
            out_mats.append({"re": re_m, "im": im_m})
        return {"d": self.d, "n": self.n, "class": self.sym_class,
                "mode": self.mode, "matrices": out_mats}

    @classmethod
    def from_json_dict(cls, data):
        try:
            d = int(data["d"])
            n = int(data["n"])
            sym_class = data.get("class", HERMITIAN)
            raw = data["matrices"]
        except (KeyError, TypeError) as exc:
            raise PencilFormatError(f"pencil JSON missing field: {exc}") from exc
        if sym_class not in (HERMITIAN, REAL_SYMMETRIC):
            raise PencilFormatError(f"unknown symmetry class {sym_class!r}")
        if len(raw) != d + 1:
            raise PencilFormatError(f"expected {d + 1} matrices, found {len(raw)}")
        mode = data.get("mode")
        if mode is None:
            mode = RATIONAL if any(
                isinstance(v, str)
                for m in raw for grid in (m.get("re"), m.get("im")) if grid
                for row in grid for v in row) else FLOAT
        mats = []
        for a, m in enumerate(raw):
            re_m = m.get("re")
            im_m = m.get("im")
            if re_m is None:
                raise PencilFormatError(f"matrix {a}: missing 're' grid")
            grid = []
            for i in range(n):
                row = []
                for j in range(n):
                    re_v = re_m[i][j]
                    im_v = im_m[i][j] if im_m is not None else 0
                    row.append(scalar_from_json_pair(re_v, im_v, mode))
                grid.append(row)
            mats.append(grid)
        return cls(mats, sym_class, mode)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PencilFormatError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        if isinstance(data, dict) and "pencil" in data:
            data = data["pencil"]
        return cls.from_json_dict(data)

    def __repr__(self):
        return f"MatrixPencil(d={self.d}, n={self.n}, {self.sym_class})"


# ---------------------------------------------------------------------------
# determinant extraction


def det_poly(pencil, symbolic_bound=8, seed=0):
    """Determinant of the pencil as a polynomial in x1..xd.

    Exact (and small float) pencils expand symbolically; float pencils above
    the bound interpolate numeric determinants on random points.
    """
    if pencil.n == 0:
        return Polynomial.zero(pencil.d, pencil.mode)
    if pencil.n <= symbolic_bound:
        return pencil.poly_matrix().det()
    if pencil.mode == RATIONAL:
        raise ValueError(f"symbolic determinant bound {symbolic_bound} exceeded")
    support = list(monomials_up_to(pencil.d, pencil.n))
    rng = np.random.default_rng([seed, 11])
    npts = 2 * len(support)
    pts = rng.normal(size=(npts, pencil.d))
    a = np.zeros((npts, len(support)))
    b = np.zeros(npts)
    for r in range(npts):
        x = pts[r]
        for c, e in enumerate(support):
            a[r, c] = float(np.prod(x ** np.array(e)))
        b[r] = float(np.linalg.det(pencil.value(x)).real)
    coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)
    return Polynomial(pencil.d,
                      {e: complex(c) for e, c in zip(support, coeffs)},
                      FLOAT).chop(1e-10)


def numeric_adjugate(M):
    """adj(M) by signed minors: (i,j) entry is the (j,i) cofactor."""
    n = M.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    adj = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, j, axis=0), i, axis=1)
            sign = -1.0 if (i + j) % 2 else 1.0
            adj[i, j] = sign * np.linalg.det(minor)
    return adj


def definiteness(matrix, tol=1e-9):
    """'positive', 'negative', 'indefinite', or 'inconclusive' near zero."""
    m = np.asarray(matrix, dtype=complex)
    m = (m + m.conj().T) / 2
    eigs = np.linalg.eigvalsh(m)
    scale = max(1.0, float(np.max(np.abs(eigs))) if eigs.size else 1.0)
    lo, hi = float(eigs[0]), float(eigs[-1])
    if lo > tol * scale:
        return "positive"
    if hi < -tol * scale:
        return "negative"
    if lo < -tol * scale < tol * scale < hi:
        return "indefinite"
    return "inconclusive"


# ---------------------------------------------------------------------------
# LMI verification (positivity certificate)


def verify_lmi(pencil, p, x0, tol=1e-6, samples=200, seed=0, symbolic_bound=8):
    """Certify the pencil as an LMI representation for the component of x0.

    Checks (i) positive definiteness at the base point, (ii) det = p * h as
    polynomials, (iii) h > 0 at points of the component sampled through the
    nested-derivative membership oracle. Returns (VerdictReport, h).
    """
    px0 = complex(p.evaluate(list(x0))).real
    if px0 <= 0:
        raise ValueError("verify_lmi requires p(x0) > 0")
    U0 = pencil.value(x0)
    base_def = definiteness(U0)
    spectrum = [float(v) for v in np.linalg.eigvalsh((U0 + U0.conj().T) / 2)]
    if base_def != "positive":
        return VerdictReport(
            "verify-lmi", FAIL,
            residuals={"basepoint_min_eig": spectrum[0]},
            witness={"stage": "basepoint", "x0": [float(v) for v in x0],
                     "definiteness": base_def, "spectrum": spectrum},
            details={"n": pencil.n}), None

    det = det_poly(pencil, symbolic_bound=symbolic_bound, seed=seed)
    if det.mode != p.mode:
        det = det.to_float()
        p = p.to_float()
    h, ok = exact_divide(det, p, tol=tol)
    if not ok:
        return VerdictReport(
            "verify-lmi", FAIL,
            witness={"stage": "divisibility",
                     "reason": "det(pencil) is not divisible by p"},
            details={"n": pencil.n, "deg_det": _int_deg(det)}), None

    # residual of det = p*h at random points
    rng = np.random.default_rng([seed, 13])
    det_res = 0.0
    pf = p.to_float()
    hf = h.to_float()
    for _ in range(samples):
        x = np.asarray(x0, dtype=float) + rng.normal(size=pencil.d)
        dv = complex(np.linalg.det(pencil.value(x)))
        pv = complex(pf.evaluate(x)) * complex(hf.evaluate(x))
        det_res = max(det_res, abs(dv - pv) / max(1.0, abs(dv), abs(pv)))
    if det_res > tol:
        return VerdictReport(
            "verify-lmi", FAIL,
            residuals={"det_identity": det_res},
            witness={"stage": "det-identity", "residual": det_res},
            details={"n": pencil.n}), h

    # h > 0 on the component of x0 (rejection sampling via membership)
    chain = renegar_chain(pf, list(map(float, x0)))
    member_pts = [np.asarray(x0, dtype=float)]
    attempts = 0
    while len(member_pts) < samples and attempts < 40 * samples:
        attempts += 1
        r = rng.choice([0.1, 0.3, 1.0, 3.0])
        x = np.asarray(x0, dtype=float) + r * rng.normal(size=pencil.d)
        if membership(pf, x0, x, tol=1e-9, chain=chain):
            member_pts.append(x)
    h_min = float("inf")
    h_scale = max(1.0, hf.max_abs_coeff())
    for x in member_pts:
        hv = complex(hf.evaluate(x)).real
        h_min = min(h_min, hv)
        if hv < -tol * h_scale:
            return VerdictReport(
                "verify-lmi", FAIL,
                residuals={"h_min": h_min, "det_identity": det_res},
                witness={"stage": "cofactor-positivity",
                         "x": [float(v) for v in x], "h_value": hv},
                details={"n": pencil.n, "component_samples": len(member_pts)}), h
    return VerdictReport(
        "verify-lmi", PASS,
        residuals={"det_identity": det_res, "h_min_on_component": h_min},
        details={"n": pencil.n, "basepoint_spectrum": spectrum,
                 "h_degree": _int_deg(h), "h_is_one": _is_one(h),
                 "component_samples": len(member_pts)}), h


def _int_deg(p):
    d = p.degree()
    return int(d) if d != NEG_INF else -1


def _is_one(h):
    if h.mode == RATIONAL:
        return h == Polynomial.constant(1, h.nvars, RATIONAL)
    const = complex(h.coeff((0,) * h.nvars))
    rest = max((abs(complex(c)) for e, c in h.terms() if sum(e) > 0), default=0.0)
    return abs(const - 1) <= 1e-8 and rest <= 1e-8


# ---------------------------------------------------------------------------
# executable lemma suite


def _reduced_along_line(det, seed=0, tol=1e-7):
    """Squarefree test of the determinant restricted to a random line."""
    rng = np.random.default_rng([seed, 17])
    f = restrict_to_line(det.to_float(), list(rng.normal(size=det.nvars)),
                         list(rng.normal(size=det.nvars)))
    roots = np.roots(f.float_coeffs()[::-1])
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= tol * (1 + abs(roots[i])):
                return False
    return True


def curve_points(pencil, x0, count, seed=0, det=None):
    """Points (complex projective coordinates) on det U = 0, via line roots."""
    if det is None:
        det = det_poly(pencil)
    pf = det.to_float()
    d = pencil.d
    pts = []
    i = 0
    while len(pts) < count and i < 20 * count + 20:
        rng = line_rng(seed, i, tag=5)
        i += 1
        direction = sphere_direction(rng, d)
        f = restrict_to_line(pf, [float(v) for v in x0], list(direction))
        if f.degree() == NEG_INF or f.degree() < 1:
            continue
        for t in np.roots(f.float_coeffs()[::-1]):
            X = np.concatenate([[1.0 + 0j],
                                np.asarray(x0, dtype=complex) + t * direction])
            pts.append(X)
            if len(pts) >= count:
                break
    if len(pts) < count:
        raise RuntimeError("failed to locate enough curve points (degenerate pencil)")
    return pts


def pairing_check(pencil, x0, curve_samples=50, tol=1e-8, seed=0):
    """Row/column pairing identity of the adjugate at curve points:
    G_i U(X0) F_j = V_ij * P'_{X0}, i.e. V U(X0) V = P'_{X0}(X) V."""
    det = det_poly(pencil)
    if not _reduced_along_line(det, seed=seed):
        raise ValueError("pencil determinant is not reduced")
    m = _int_deg(det)
    P = homogenize(det.to_float(), m)
    X0 = [1.0] + [float(v) for v in x0]
    Pd = directional_derivative(P, X0)
    pts = curve_points(pencil, x0, curve_samples, seed=seed, det=det)
    U0 = pencil.value(x0)
    worst = 0.0
    witness = None
    for X in pts:
        UX = pencil.hom_value(X)
        V = numeric_adjugate(UX)
        lhs = V @ U0 @ V
        rhs = complex(Pd.evaluate(X)) * V
        scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
        res = float(np.max(np.abs(lhs - rhs))) / scale
        if res > worst:
            worst = res
            witness = [complex(v) for v in X]
    status = PASS if worst <= tol else FAIL
    return VerdictReport(
        "pairing", status,
        residuals={"max_relative_residual": worst},
        witness=None if status == PASS else {
            "X": [[v.real, v.imag] for v in witness]},
        details={"curve_points": len(pts), "tol": tol})


def eigenspace_orthogonality_check(pencil, x0, tol=1e-8, seed=0, retries=8):
    """Generalized eigenvectors along a line are U(X0)-orthogonal, and
    definiteness of U(X0) matches positivity of all compressions."""
    if pencil.n == 1:
        return VerdictReport("eigenspace-orthogonality", PASS,
                             details={"n": 1, "note": "vacuous"})
    U0 = pencil.value(x0)
    base_def = definiteness(U0)
    d = pencil.d
    last_err = None
    for attempt in range(retries):
        rng = line_rng(seed, attempt, tag=6)
        direction = sphere_direction(rng, d)
        UX = pencil.hom_value(np.concatenate([[0.0], direction]))
        try:
            evals, evecs = np.linalg.eig(np.linalg.solve(U0, UX))
        except np.linalg.LinAlgError as exc:
            last_err = str(exc)
            continue
        if np.max(np.abs(evals.imag)) > 1e-7 * (1 + np.max(np.abs(evals))):
            last_err = "complex generalized eigenvalues"
            continue
        gaps = np.min(np.abs(evals[:, None] - evals[None, :])
                      + np.eye(len(evals)) * 1e9)
        if gaps < 1e-6 * (1 + np.max(np.abs(evals))):
            last_err = "eigenvalue collision"
            continue
        compressions = np.array([
            (evecs[:, i].conj() @ U0 @ evecs[:, i]).real
            / (np.linalg.norm(evecs[:, i]) ** 2) for i in range(pencil.n)])
        ortho = 0.0
        for i in range(pencil.n):
            for j in range(pencil.n):
                if i == j:
                    continue
                num = abs(evecs[:, j].conj() @ U0 @ evecs[:, i])
                den = (np.linalg.norm(evecs[:, j]) * np.linalg.norm(evecs[:, i])
                       * max(1.0, float(np.linalg.norm(U0))))
                ortho = max(ortho, float(num / den))
        all_positive = bool(np.all(compressions > 0))
        all_negative = bool(np.all(compressions < 0))
        agrees = ((base_def == "positive" and all_positive)
                  or (base_def == "negative" and all_negative)
                  or (base_def == "indefinite" and not (all_positive or all_negative)))
        status = PASS if (ortho <= tol and agrees) else FAIL
        return VerdictReport(
            "eigenspace-orthogonality", status,
            residuals={"orthogonality": ortho},
            witness=None if status == PASS else {
                "direction": [float(v) for v in direction],
                "compressions": [float(c) for c in compressions],
                "definiteness": base_def},
            details={"definiteness": base_def,
                     "compressions": [float(c) for c in compressions],
                     "attempts": attempt + 1})
    raise RuntimeError(f"no usable line after {retries} retries: {last_err}")


def diagonal_cofactors(pencil):
    """Symbolic V_jj: determinants of the (j,j)-deleted homogeneous pencil."""
    U = pencil.hom_poly_matrix()
    out = []
    for j in range(pencil.n):
        out.append(U.minor(j, j).det())
    return out


def cauchy_cross_check(pencil, p, x0, num_lines=60, tol=1e-8, seed=0):
    """Diagonal cofactors interlace the determinant iff the base point is
    definite. Reports per-cofactor verdicts and the agreement."""
    det = det_poly(pencil)
    m = _int_deg(det)
    P = HomogeneousPolynomial.from_polynomial(homogenize(det.to_float(), m), m)
    base_def = definiteness(pencil.value(x0))
    per_j = []
    for j, vjj in enumerate(diagonal_cofactors(pencil)):
        if vjj.is_zero():
            raise ValueError(
                f"diagonal cofactor {j} vanishes identically "
                "(reducibility / saturation failure)")
        Vjj = HomogeneousPolynomial.from_polynomial(vjj.to_float(), m - 1)
        try:
            rep = interlaces_sampled(P, Vjj, x0, num_lines=num_lines, tol=tol,
                                     seed=seed)
            per_j.append({"j": j, "status": rep.status,
                          "witness": rep.witness})
        except ValueError as exc:
            per_j.append({"j": j, "status": FAIL,
                          "witness": {"reason": str(exc)}})
    all_interlace = all(v["status"] == PASS for v in per_j)
    definite = base_def in ("positive", "negative")
    agrees = all_interlace == definite
    status = PASS if agrees else FAIL
    return VerdictReport(
        "cauchy-cross-check", status,
        witness=None if agrees else {"definiteness": base_def,
                                     "cofactor_verdicts": per_j},
        details={"definiteness": base_def, "cofactors": per_j,
                 "all_interlace": all_interlace})


def derdet_check(pencil, samples=50, tol=1e-9, seed=0):
    """Trace identity dP/dX_a = trace(A_a adj U(X)) at random points."""
    det = det_poly(pencil)
    m = _int_deg(det)
    P = homogenize(det.to_float(), m)
    partials = [P.partial(a) for a in range(pencil.d + 1)]
    mats = pencil.npmats()
    rng = np.random.default_rng([seed, 19])
    worst = 0.0
    witness = None
    for _ in range(samples):
        X = rng.normal(size=pencil.d + 1)
        adj = numeric_adjugate(pencil.hom_value(X))
        for a in range(pencil.d + 1):
            lhs = complex(partials[a].evaluate(X))
            rhs = complex(np.trace(mats[a] @ adj))
            res = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
            if res > worst:
                worst = res
                witness = {"X": [float(v) for v in X], "alpha": a,
                           "lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag]}
    status = PASS if worst <= tol else FAIL
    return VerdictReport(
        "derdet", status,
        residuals={"max_relative_residual": worst},
        witness=None if status == PASS else witness,
        details={"samples": samples, "tol": tol})


# ---------------------------------------------------------------------------
# hermitian -> real symmetric doubling


def realify(pencil):
    """Map each A = B + iC to [[B, -C], [C, B]]: a real symmetric pencil of
    doubled size with squared determinant and the same PSD region."""
    n = pencil.n
    mats = []
    exact = pencil.mode == RATIONAL
    zero = Fraction(0) if exact else 0.0
    for m in pencil.mats:
        big = [[zero] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                b = real_part(m[i][j])
                c = imag_part(m[i][j])
                if not exact:
                    b, c = float(b), float(c)
                big[i][j] = b
                big[n + i][n + j] = b
                big[i][n + j] = -c
                big[n + i][j] = c
        mats.append(big)
    return MatrixPencil(mats, REAL_SYMMETRIC, pencil.mode)
