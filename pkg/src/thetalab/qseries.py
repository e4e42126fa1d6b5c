"""Exact q-expansion arithmetic and the weak Maass coefficient model.

Scalar series (Eisenstein series, Delta, j, eta quotients, theta blocks)
are kept with exact rational coefficients and rational exponents.  Weak
Maass forms are represented purely by their two coefficient tables
a+(h,n), a-(h,n); evaluation at a point of the upper half plane sums the
tables against exp/H kernels and is used only by test oracles.

Conventions.  A VVSeries with representation rho_L stores indices with
n = q(h) mod 1; the dual flag flips the sign of q.  The antilinear map xi
sends weight k to weight 2-k and conjugates the representation; on tables,

    b(h, m) = -2 (4 pi m)^(1-k) conj(a-(h, -m))     (m != 0),
    b(h, 0) = -2 (k-1) conj(a-(h, 0)).

The bilinear pairing of g (weight 2-k, dual rep) with f is the finite sum
sum_{h, n<=0} a+(h,n) b(h,-n); the primed variant omits n = 0.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .fqm import Lattice, WeilRep
from .special import h_kernel, root_of_unity

QQ = Fraction


# ---------------------------------------------------------------------------
# scalar q-series with rational exponents


class QExp:
    """Truncated q-series sum_{n < prec} c_n q^n with rational exponents."""

    def __init__(self, coeffs: dict, prec):
        self.prec = QQ(prec)
        self.coeffs = {QQ(n): c for n, c in coeffs.items() if c != 0 and QQ(n) < self.prec}

    @staticmethod
    def zero(prec) -> "QExp":
        return QExp({}, prec)

    @staticmethod
    def one(prec) -> "QExp":
        return QExp({QQ(0): QQ(1)}, prec)

    @staticmethod
    def monomial(n, c, prec) -> "QExp":
        return QExp({QQ(n): c}, prec)

    def order(self):
        return min(self.coeffs) if self.coeffs else None

    def __getitem__(self, n):
        return self.coeffs.get(QQ(n), QQ(0))

    def __add__(self, other):
        if not isinstance(other, QExp):
            other = QExp({QQ(0): other}, self.prec)
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) + c
        return QExp(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return QExp({n: -c for n, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        if not isinstance(other, QExp):
            other = QExp({QQ(0): other}, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QExp):
            return QExp({n: c * other for n, c in self.coeffs.items()}, self.prec)
        lo_s = self.order()
        lo_o = other.order()
        if lo_s is None or lo_o is None:
            return QExp({}, min(self.prec + (lo_o or 0), other.prec + (lo_s or 0))
                        if (lo_s is not None or lo_o is not None) else min(self.prec, other.prec))
        prec = min(self.prec + lo_o, other.prec + lo_s)
        out = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                if n < prec:
                    out[n] = out.get(n, 0) + c1 * c2
        return QExp(out, prec)

    __rmul__ = __mul__

    def shift(self, n) -> "QExp":
        n = QQ(n)
        return QExp({m + n: c for m, c in self.coeffs.items()}, self.prec + n)

    def inverse(self) -> "QExp":
        """Inverse of a series with invertible lowest term."""
        lo = self.order()
        if lo is None:
            raise ZeroDivisionError("inverting the zero series")
        unit = self.shift(-lo)
        c0 = unit[0]
        if c0 == 0:
            raise ZeroDivisionError("lowest coefficient vanished")
        scale = QQ(1) / c0 if isinstance(c0, (int, Fraction)) else 1.0 / c0
        rest = (unit - c0) * scale
        # geometric series in `rest`; rest has positive order, so the term
        # order climbs past the working precision and the loop stops
        inv = QExp.one(unit.prec)
        term = QExp.one(unit.prec)
        while True:
            term = term * (-rest)
            t_lo = term.order()
            if t_lo is None or t_lo >= unit.prec:
                break
            inv = inv + term
        return (inv * scale).shift(-lo)

    def __truediv__(self, other):
        if isinstance(other, QExp):
            return self * other.inverse()
        return self * (QQ(1) / QQ(other) if isinstance(other, (int, Fraction)) else 1.0 / other)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QExp.one(self.prec if self.order() is None else self.prec + (k - 1) * self.order())
        base = self
        e = k
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        # crude but safe precision: cap at self.prec + (k-1)*order
        return out

    def eval(self, tau: complex) -> complex:
        return sum(complex(c) * cmath.exp(2j * cmath.pi * complex(n) * tau) for n, c in self.coeffs.items())

    def __repr__(self):
        items = sorted(self.coeffs)[:6]
        body = " + ".join("%s q^%s" % (self.coeffs[n], n) for n in items)
        return "QExp(%s + O(q^%s))" % (body, self.prec)


def _sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def eisenstein_e4(prec: int) -> QExp:
    coeffs = {QQ(0): QQ(1)}
    for n in range(1, prec):
        coeffs[QQ(n)] = QQ(240) * _sigma(n, 3)
    return QExp(coeffs, prec)


def eisenstein_e6(prec: int) -> QExp:
    coeffs = {QQ(0): QQ(1)}
    for n in range(1, prec):
        coeffs[QQ(n)] = QQ(-504) * _sigma(n, 5)
    return QExp(coeffs, prec)


def eta_quotient(powers: dict, prec) -> QExp:
    """Product over d of eta(d tau)^{r_d} as an exact q-series.

    eta(d tau) = q^{d/24} prod_{n>=1} (1 - q^{dn}).
    """
    prec = QQ(prec)
    out = QExp.one(prec)
    shift = QQ(0)
    for d, r in sorted(powers.items()):
        d = int(d)
        r = int(r)
        shift += QQ(d, 24) * r
        block = QExp.one(prec)
        n = 1
        while QQ(d * n) < prec:
            block = block * QExp({QQ(0): QQ(1), QQ(d * n): QQ(-1)}, prec)
            n += 1
        out = out * (block ** r if r >= 0 else block.inverse() ** (-r))
    return out.shift(shift)


_CLASSIC_WEIGHTS = {
    "E4": QQ(4),
    "E6": QQ(6),
    "Delta": QQ(12),
    "j": QQ(0),
    "j_minus_744": QQ(0),
    "E4sqE6_over_DeltaSq": QQ(-10),
}


def classic_series(name: str, prec: int) -> "VVSeries":
    """Classical scalar series with exact rational coefficients up to q^prec."""
    if prec < 1:
        raise ValueError("prec must be >= 1")
    if name not in _CLASSIC_WEIGHTS:
        raise ValueError("unknown classic series %r" % name)
    # compute with enough guard terms for the divisions
    work = prec + 3
    e4 = eisenstein_e4(work)
    e6 = eisenstein_e6(work)
    if name == "E4":
        series = e4
    elif name == "E6":
        series = e6
    else:
        delta = (e4 ** 3 - e6 ** 2) / 1728
        if name == "Delta":
            series = delta
        elif name == "j":
            series = e4 ** 3 / delta
        elif name == "j_minus_744":
            series = e4 ** 3 / delta - 744
        else:
            series = e4 ** 2 * e6 / delta ** 2
    coeffs = {((), n): c for n, c in series.coeffs.items() if n < prec}
    return VVSeries(_CLASSIC_WEIGHTS[name], None, coeffs, prec)


# ---------------------------------------------------------------------------
# vector-valued series and weak Maass forms


def _coset_q(rep, h) -> Fraction:
    if rep is None:
        return QQ(0)
    q = rep.disc.q(h)
    return (-q) % 1 if rep.dual else q % 1


class VVSeries:
    """A holomorphic q-series valued in C[L#/L], stored as a coefficient table."""

    def __init__(self, weight, rep, coeffs: dict, prec):
        self.weight = QQ(weight)
        self.rep = rep
        self.prec = QQ(prec)
        self.coeffs = {}
        for (h, n), c in coeffs.items():
            if c == 0:
                continue
            n = QQ(n)
            if n >= self.prec:
                continue
            h = self._hkey(h)
            if (n - _coset_q(rep, h)) % 1 != 0:
                raise ValueError("index n=%s not supported on coset %s" % (n, (h,)))
            self.coeffs[(h, n)] = c

    def _hkey(self, h):
        if self.rep is None:
            return ()
        return self.rep.disc.reduce(h)

    def __getitem__(self, key):
        h, n = key
        return self.coeffs.get((self._hkey(h), QQ(n)), QQ(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def support_below(self, bound) -> list:
        return sorted((n, h) for (h, n) in self.coeffs if n < QQ(bound))

    def scalar_part(self) -> QExp:
        if self.rep is not None and self.rep.dim != 1:
            raise ValueError("series is not scalar")
        return QExp({n: c for (_h, n), c in self.coeffs.items()}, self.prec)

    def __add__(self, other):
        if not isinstance(other, VVSeries):
            raise TypeError
        if self.weight != other.weight:
            raise ValueError("weight mismatch")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return VVSeries(self.weight, self.rep or other.rep, out, min(self.prec, other.prec))

    def __mul__(self, scalar):
        return VVSeries(self.weight, self.rep,
                        {k: c * scalar for k, c in self.coeffs.items()}, self.prec)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * (-1)

    def eval(self, tau: complex) -> np.ndarray:
        """Value at tau as a vector over the discriminant group elements."""
        dim = 1 if self.rep is None else self.rep.dim
        out = np.zeros(dim, dtype=complex)
        for (h, n), c in self.coeffs.items():
            idx = 0 if self.rep is None else self.rep.disc.index(h)
            out[idx] += complex(c) * cmath.exp(2j * cmath.pi * complex(n) * tau)
        return out

    def conjugate_coeffs(self) -> "VVSeries":
        rep = None if self.rep is None else self.rep.conjugate()
        out = {}
        for (h, n), c in self.coeffs.items():
            cc = c.conjugate() if isinstance(c, complex) else c
            out[(h, n)] = cc
        return VVSeries(self.weight, rep, out, self.prec)


def tensor(a: VVSeries, b: VVSeries) -> VVSeries:
    """Componentwise product for the orthogonal direct sum of the lattices."""
    if a.rep is None or b.rep is None:
        raise ValueError("tensor needs genuine representations")
    if a.rep.dual != b.rep.dual:
        raise ValueError("mixed dual flags")
    la, lb = a.rep.lattice, b.rep.lattice
    na, nb = la.rank, lb.rank
    gram = [[0] * (na + nb) for _ in range(na + nb)]
    for i in range(na):
        for j in range(na):
            gram[i][j] = la.gram[i][j]
    for i in range(nb):
        for j in range(nb):
            gram[na + i][na + j] = lb.gram[i][j]
    lat = Lattice(tuple(map(tuple, gram)), name="%s+%s" % (la.name, lb.name))
    rep = WeilRep(lat, dual=a.rep.dual)
    prec_floor_a = min((n for (_h, n) in a.coeffs), default=QQ(0))
    prec_floor_b = min((n for (_h, n) in b.coeffs), default=QQ(0))
    prec = min(a.prec + prec_floor_b, b.prec + prec_floor_a)
    out = {}
    for (ha, na_), ca in a.coeffs.items():
        for (hb, nb_), cb in b.coeffs.items():
            n = na_ + nb_
            if n >= prec:
                continue
            key = (ha + hb, n)
            out[key] = out.get(key, 0) + ca * cb
    return VVSeries(a.weight + b.weight, rep, out, prec)


class WeakMaassForm:
    """Coefficient-table model of a weak Maass form f = f+ + f-."""

    CLASSES = ("weakly_holomorphic", "H_plus", "H_general")

    def __init__(self, weight, rep, plus: dict, minus: dict, cls: str = "H_plus",
                 prec=None):
        if cls not in self.CLASSES:
            raise ValueError("unknown class %r" % cls)
        self.weight = QQ(weight)
        self.rep = rep
        self.cls = cls
        self.prec = QQ(prec) if prec is not None else None
        self.plus = self._normalize(plus)
        self.minus = self._normalize(minus)
        if cls == "weakly_holomorphic" and self.minus:
            raise ValueError("weakly holomorphic forms have empty minus part")
        if cls == "H_plus":
            for (h, n) in self.minus:
                if n >= 0:
                    raise ValueError("H_plus requires a-(h,n)=0 for n >= 0")
        neg_plus = [k for k in self.plus if k[1] < 0]
        pos_minus = [k for k in self.minus if k[1] > 0]
        if len(neg_plus) > 10000 or len(pos_minus) > 10000:
            raise ValueError("principal part not finite")

    def _normalize(self, table):
        out = {}
        for (h, n), c in table.items():
            if c == 0:
                continue
            n = QQ(n)
            h = () if self.rep is None else self.rep.disc.reduce(h)
            if (n - _coset_q(self.rep, h)) % 1 != 0:
                raise ValueError("index n=%s not supported on coset %s" % (n, (h,)))
            out[(h, n)] = c
        return out

    @staticmethod
    def from_series(series: VVSeries, cls: str = "weakly_holomorphic") -> "WeakMaassForm":
        return WeakMaassForm(series.weight, series.rep, dict(series.coeffs), {},
                             cls=cls, prec=series.prec)

    def principal_support(self):
        return sorted((n, h) for (h, n) in self.plus if n <= 0)

    def a_plus(self, h, n):
        h = () if self.rep is None else self.rep.disc.reduce(h)
        return self.plus.get((h, QQ(n)), QQ(0))

    def a_minus(self, h, n):
        h = () if self.rep is None else self.rep.disc.reduce(h)
        return self.minus.get((h, QQ(n)), QQ(0))

    def symmetry_sign(self):
        """The sign s in the forced symmetry a(-h,n) = s a(h,n).

        Consistency under the center of the metaplectic group forces
        a(-h,n) = i^(P-Q-2k) a(h,n), where (P,Q) is the effective signature
        of the representation (swapped for the dual flag).  Odd exponent
        means no nonzero form exists at this weight at all; None is
        returned in that case.  For lift inputs (rep dual to the lattice,
        k = 2-(p+q)/2) this reduces to (-1)^q.
        """
        if self.rep is None:
            return 1
        pp, qq = self.rep.lattice.signature
        if self.rep.dual:
            pp, qq = qq, pp
        expo = (pp - qq) - 2 * self.weight
        if expo % 2 != 0:
            return None
        return 1 if expo % 4 == 0 else -1

    def symmetry_defect(self) -> float:
        """Max violation of the forced coefficient symmetry in h -> -h."""
        if self.rep is None:
            return 0.0
        sign = self.symmetry_sign()
        worst = 0.0
        for table in (self.plus, self.minus):
            for (h, n), c in table.items():
                if sign is None:
                    worst = max(worst, abs(complex(c)))
                    continue
                mirror = table.get((self.rep.disc.neg(h), n), QQ(0))
                worst = max(worst, abs(complex(mirror) - sign * complex(c)))
        return worst

    def eval(self, tau: complex) -> np.ndarray:
        """Sum the tables at tau; truncation error is the caller's concern."""
        dim = 1 if self.rep is None else self.rep.dim
        u, v = tau.real, tau.imag
        out = np.zeros(dim, dtype=complex)
        k = float(self.weight)
        for (h, n), c in self.plus.items():
            idx = 0 if self.rep is None else self.rep.disc.index(h)
            out[idx] += complex(c) * cmath.exp(2j * cmath.pi * complex(n) * tau)
        for (h, n), c in self.minus.items():
            idx = 0 if self.rep is None else self.rep.disc.index(h)
            if n == 0:
                out[idx] += complex(c) * v ** (1.0 - k)
            else:
                out[idx] += complex(c) * h_kernel(self.weight, 2.0 * math.pi * float(n) * v) \
                    * cmath.exp(2j * cmath.pi * float(n) * u)
        return out


def H_function(k, w: float) -> float:
    """Kernel H(w) of the nonholomorphic coefficients, relative accuracy 1e-12."""
    return h_kernel(QQ(k), w)


def xi_map(f: WeakMaassForm) -> VVSeries:
    """The antilinear map to weight 2-k with the conjugate representation."""
    k = f.weight
    rep = None if f.rep is None else f.rep.conjugate()
    out = {}
    for (h, n), c in f.minus.items():
        cc = c.conjugate() if isinstance(c, complex) else c
        if n == 0:
            out[(h, QQ(0))] = out.get((h, QQ(0)), 0) + (-2) * (k - 1) * cc
        else:
            m = -n
            amp = -2.0 * (4.0 * math.pi * float(m)) ** float(1 - k)
            out[(h, m)] = out.get((h, m), 0) + amp * complex(cc)
    prec = f.prec if f.prec is not None else (max((n for (_h, n) in out), default=QQ(0)) + 1)
    return VVSeries(2 - k, rep, out, prec)


def _check_pairable(g: VVSeries, f: WeakMaassForm):
    if g.weight != 2 - f.weight:
        raise ValueError("weights are not complementary")
    gr, fr = g.rep, f.rep
    if (gr is None) != (fr is None):
        raise ValueError("representation mismatch")
    if gr is not None:
        if gr.lattice.gram != fr.lattice.gram or gr.dual == fr.dual:
            raise ValueError("representations are not dual to each other")


def pairing(g: VVSeries, f: WeakMaassForm):
    """{g, f} = sum_{h, n <= 0} a+(h, n) b(h, -n)."""
    _check_pairable(g, f)
    total = QQ(0)
    for (h, n), a in f.plus.items():
        if n > 0:
            continue
        total = total + a * g[(h, -n)]
    return total


def pairing_prime(g: VVSeries, f: WeakMaassForm):
    """Primed pairing: only strictly negative indices of the principal part."""
    _check_pairable(g, f)
    total = QQ(0)
    for (h, n), a in f.plus.items():
        if n >= 0:
            continue
        total = total + a * g[(h, -n)]
    return total


def principal_part(f: WeakMaassForm) -> VVSeries:
    """The n <= 0 slice of f+ as a finite series."""
    coeffs = {(h, n): c for (h, n), c in f.plus.items() if n <= 0}
    return VVSeries(f.weight, f.rep, coeffs, QQ(1, 2))


def constant_term_orthogonal(f: WeakMaassForm, vector) -> bool:
    """Whether the constant term of f is orthogonal to a supplied vector."""
    dim = 1 if f.rep is None else f.rep.dim
    vec = np.asarray(vector, dtype=complex)
    if vec.shape != (dim,):
        raise ValueError("expected a vector of length %d" % dim)
    ct = np.zeros(dim, dtype=complex)
    for (h, n), c in f.plus.items():
        if n == 0:
            idx = 0 if f.rep is None else f.rep.disc.index(h)
            ct[idx] += complex(c)
    return bool(abs(np.vdot(vec, ct)) < 1e-12)


def witness_from_cusp_form(g: VVSeries, k, plus: dict | None = None) -> WeakMaassForm:
    """An H_plus table f with xi(f) = g, fabricated by inverting the xi formula.

    Only the minus table is constrained by xi; the plus table is free and
    defaults to empty.
    """
    k = QQ(k)
    if g.weight != 2 - k:
        raise ValueError("cusp form must have weight 2-k")
    rep = None if g.rep is None else g.rep.conjugate()
    minus = {}
    for (h, m), b in g.coeffs.items():
        if m <= 0:
            raise ValueError("input must be cuspidal (positive indices only)")
        amp = -2.0 * (4.0 * math.pi * float(m)) ** float(1 - k)
        c = complex(b) / amp
        minus[(h, -m)] = c.conjugate()
    return WeakMaassForm(k, rep, plus or {}, minus, cls="H_plus", prec=g.prec)


# ---------------------------------------------------------------------------
# modularity checks for coefficient tables


def t_residual(series: VVSeries, tau: complex) -> float:
    """|F(tau+1) - rho(T) F(tau)| evaluated from the table."""
    lhs = series.eval(tau + 1)
    if series.rep is None:
        rhs = series.eval(tau)
    else:
        rhs = series.rep.gen_t() @ series.eval(tau)
    return float(np.max(np.abs(lhs - rhs)))


def s_residual(series: VVSeries, tau: complex) -> float:
    """|F(-1/tau) - e(w/4) (-i tau)^w rho(S) F(tau)| from the table.

    The scalar factor e(w/4)(-i tau)^w is the branch-safe automorphy factor
    of weight w calibrated on the classical theta inversion.
    """
    w = float(series.weight)
    lhs = series.eval(-1 / tau)
    factor = cmath.exp(0.5j * math.pi * w) * cmath.exp(w * cmath.log(-1j * tau))
    if series.rep is None:
        rhs = factor * series.eval(tau)
    else:
        rhs = factor * (series.rep.gen_s() @ series.eval(tau))
    return float(np.max(np.abs(lhs - rhs)))


def induce_from_scalar(slash_data, rep: WeilRep, weight) -> VVSeries:
    """Average supplied coset slash-expansions into a vector-valued series.

    `slash_data` is a list of pairs (word, series) where `word` covers a
    coset representative gamma of the inducing subgroup and `series` is the
    scalar expansion of f|_weight gamma (a QExp with rational exponents).
    The output is sum_gamma rho(gamma)^{-1} (f|gamma e_0), whose modularity
    is verified numerically; an inconsistent multiplier system is reported
    through the residual in the raised error.
    """
    from .fqm import MetaplecticWord

    dim = rep.dim
    prec = min(QExp(s.coeffs, s.prec).prec if isinstance(s, QExp) else QQ(10)
               for _w, s in slash_data)
    acc = {}
    for word, series in slash_data:
        if not isinstance(word, MetaplecticWord):
            word = MetaplecticWord.from_matrix(word)
        mat = rep.element(word)
        col = np.linalg.inv(mat)[:, 0]
        for n, c in series.coeffs.items():
            for idx in range(dim):
                if abs(col[idx]) < 1e-14:
                    continue
                h = rep.disc.elements[idx]
                key = (h, QQ(n))
                acc[key] = acc.get(key, 0) + col[idx] * complex(c)
    # discard numerically-zero entries and entries violating the support rule
    out = {}
    worst_drop = 0.0
    for (h, n), c in acc.items():
        if abs(c) < 1e-11:
            continue
        if (n - _coset_q(rep, h)) % 1 != 0:
            worst_drop = max(worst_drop, abs(c))
            continue
        out[(h, n)] = c
    if worst_drop > 1e-8:
        raise ValueError(
            "inconsistent multiplier system: support residual %.3e" % worst_drop)
    result = VVSeries(weight, rep, out, prec)
    if result.is_zero():
        return result
    res = max(t_residual(result, 0.1 + 1.1j), s_residual(result, 0.2 + 0.9j))
    scale = max(abs(complex(c)) for c in result.coeffs.values())
    if res > 1e-8 * max(1.0, scale):
        raise ValueError("induced series is not modular: residual %.3e" % res)
    return result


# ---------------------------------------------------------------------------
# concrete vector-valued building blocks


def unary_theta(m: int, prec) -> VVSeries:
    """Theta series of the rank-one lattice [[2m]]: weight 1/2, symmetric."""
    lat = Lattice(((2 * m,),), name="[[%d]]" % (2 * m))
    rep = WeilRep(lat)
    prec = QQ(prec)
    coeffs = {}
    j = 0
    while QQ(j * j, 4 * m) < prec + 1:
        for n in (j, -j) if j else (0,):
            h = (QQ(n, 2 * m) % 1,)
            key = (h, QQ(n * n, 4 * m))
            if key[1] < prec:
                coeffs[key] = coeffs.get(key, QQ(0)) + 1
        j += 1
    return VVSeries(QQ(1, 2), rep, coeffs, prec)


def odd_unary_theta(m: int, prec) -> VVSeries:
    """Weight 3/2 theta of [[2m]] with the harmonic polynomial x: antisymmetric."""
    lat = Lattice(((2 * m,),), name="[[%d]]" % (2 * m))
    rep = WeilRep(lat)
    prec = QQ(prec)
    coeffs = {}
    j = 1
    while QQ(j * j, 4 * m) < prec:
        for n in (j, -j):
            h = (QQ(n, 2 * m) % 1,)
            key = (h, QQ(n * n, 4 * m))
            coeffs[key] = coeffs.get(key, QQ(0)) + n
        j += 1
    return VVSeries(QQ(3, 2), rep, coeffs, prec)


def _theta_pair_square(prec, char: str) -> dict:
    """Two-variable squares theta_x(tau,z)^2 as {(qexp, yexp): coeff}."""
    prec = QQ(prec)
    out = {}
    lim = int(math.isqrt(int(2 * prec) + 4)) + 2
    for m in range(-lim, lim + 1):
        for n in range(-lim, lim + 1):
            if char == "2":
                qe = QQ((2 * m + 1) ** 2 + (2 * n + 1) ** 2, 8)
                ye = m + n + 1
                sg = 1
            else:
                qe = QQ(m * m + n * n, 2)
                ye = m + n
                sg = -1 if (char == "4" and (m + n) % 2) else 1
            if qe >= prec:
                continue
            key = (qe, ye)
            out[key] = out.get(key, QQ(0)) + sg
    return out


def weak_jacobi_0_1(prec) -> dict:
    """Fourier coefficients of the weak Jacobi form of weight 0 and index 1.

    Returns {(qexp, yexp): Fraction} for 4[(th2(z)/th2)^2 + (th3(z)/th3)^2
    + (th4(z)/th4)^2].
    """
    prec = QQ(prec)
    total = {}
    for char in ("2", "3", "4"):
        sq = _theta_pair_square(prec + 2, char)
        # scalar theta squared = z -> 0 value: sum over y of the coefficients
        dcoef = {}
        for (qe, ye), c in sq.items():
            dcoef[qe] = dcoef.get(qe, QQ(0)) + c
        denom = QExp(dcoef, prec + 2)
        inv = denom.inverse()
        for (qe, ye), c in sq.items():
            for qe2, c2 in inv.coeffs.items():
                q = qe + qe2
                if q >= prec:
                    continue
                key = (q, ye)
                total[key] = total.get(key, QQ(0)) + 4 * c * c2
    return {k: v for k, v in total.items() if v != 0}


def jacobi_theta_decomposition(coeffs: dict, prec) -> VVSeries:
    """Theta-decompose an index-1 Jacobi form into a series for rho([[-2]]).

    The component attached to the coset r/2 collects c(n, l) at exponent
    n - l^2/4 over l = r mod 2; well-definedness (dependence on 4n - l^2 and
    l mod 2 only) is the Jacobi-form property and is asserted here.
    """
    prec = QQ(prec)
    lat = Lattice(((-2,),), name="[[-2]]")
    rep = WeilRep(lat)
    seen = {}
    for (qe, ye), c in coeffs.items():
        disc = 4 * qe - ye * ye
        key = (disc, ye % 2)
        if key in seen and seen[key] != c:
            raise ValueError("not an index-1 Jacobi form: c(n,r) not a function of (4n-r^2, r mod 2)")
        seen[key] = c
    out = {}
    for (disc, r), c in seen.items():
        n = QQ(disc, 4)
        if n >= prec:
            continue
        h = (QQ(r, 2) % 1,)
        out[(h, n)] = c
    return VVSeries(QQ(-1, 2), rep, out, prec)


def jacobi_block_g2(prec) -> VVSeries:
    """Components of the weight-0 weak Jacobi form: weight -1/2 for rho([[-2]])."""
    return jacobi_theta_decomposition(weak_jacobi_0_1(prec), prec)
