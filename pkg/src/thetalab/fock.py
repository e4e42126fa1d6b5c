"""Exact symbolic model of P(C^{p+q}) (x) Lambda(p*).

Coefficients live in the ring Q[i, sqrt2, pi, 1/pi]; every identity in this
module is certified with zero tolerance.  Polynomial variables z_1..z_{p+q}
are indexed 0..p+q-1 internally, wedge generators by pairs (alpha, mu) with
1 <= alpha <= p < mu <= p+q, stored sorted with a sign normalization.

The operators are

    omega(L)      =  2 pi sum_a d^2/dz_a^2  -  (1/8 pi) sum_m z_m^2,
    omega(R)      = -(1/8 pi) sum_a z_a^2   +  2 pi sum_m d^2/dz_m^2,
    omega(X_am)   = -4 pi d^2/dz_a dz_m + (1/4 pi) z_a z_m,
    d             =  sum_am omega(X_am) (x) A_am,
    h             =  sum_am z_m d/dz_a (x) A*_am,

with A_am exterior and A*_am interior multiplication.  For q = 2 the
complex operators are del, delbar, d^c = (1/4 pi i)(del - delbar) and
dd^c = -(1/2 pi i) del delbar.
"""

from __future__ import annotations

import random
from fractions import Fraction

QQ = Fraction


class Coeff:
    """Element of Q[i][sqrt2, pi, 1/pi]: dict (pi_pow, sqrt2_bit) -> (re, im)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, (re, im) in terms.items():
                re = QQ(re)
                im = QQ(im)
                if re or im:
                    self.terms[key] = (re, im)

    @staticmethod
    def make(re=0, im=0, pi_pow=0, sqrt2_bit=0) -> "Coeff":
        re, im = QQ(re), QQ(im)
        b = int(sqrt2_bit)
        if b not in (0, 1):
            # reduce (sqrt2)^b by pairs
            re *= QQ(2) ** (b // 2)
            im *= QQ(2) ** (b // 2)
            b %= 2
        return Coeff({(int(pi_pow), b): (re, im)})

    @staticmethod
    def zero() -> "Coeff":
        return Coeff()

    @staticmethod
    def one() -> "Coeff":
        return Coeff.make(1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Coeff") -> "Coeff":
        out = dict(self.terms)
        for key, (re, im) in other.terms.items():
            r0, i0 = out.get(key, (QQ(0), QQ(0)))
            out[key] = (r0 + re, i0 + im)
        return Coeff(out)

    def __neg__(self) -> "Coeff":
        return Coeff({k: (-re, -im) for k, (re, im) in self.terms.items()})

    def __sub__(self, other: "Coeff") -> "Coeff":
        return self + (-other)

    def __mul__(self, other: "Coeff") -> "Coeff":
        out = {}
        for (a1, b1), (r1, i1) in self.terms.items():
            for (a2, b2), (r2, i2) in other.terms.items():
                a = a1 + a2
                b = b1 + b2
                re = r1 * r2 - i1 * i2
                im = r1 * i2 + i1 * r2
                if b == 2:
                    re, im, b = 2 * re, 2 * im, 0
                key = (a, b)
                r0, i0 = out.get(key, (QQ(0), QQ(0)))
                out[key] = (r0 + re, i0 + im)
        return Coeff(out)

    def scale(self, r) -> "Coeff":
        r = QQ(r)
        return Coeff({k: (re * r, im * r) for k, (re, im) in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Coeff) and (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_complex(self) -> complex:
        import math

        out = 0j
        for (a, b), (re, im) in self.terms.items():
            out += complex(re, im) * (math.pi ** a) * (math.sqrt(2.0) ** b)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b), (re, im) in sorted(self.terms.items()):
            s = "(%s%s)" % (re, "+%si" % im if im else "")
            if b:
                s += "*sqrt2"
            if a:
                s += "*pi^%d" % a
            bits.append(s)
        return " + ".join(bits)


def _wedge_normalize(word):
    """Sort a tuple of generators, returning (sorted_word, sign) or None."""
    word = list(word)
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j] < word[j - 1]:
            word[j], word[j - 1] = word[j - 1], word[j]
            sign = -sign
            j -= 1
    for i in range(1, len(word)):
        if word[i] == word[i - 1]:
            return None
    return tuple(word), sign


class FockForm:
    """Polynomial-valued exterior form; terms map (exp, word) -> Coeff.

    `exp` is the tuple of z-exponents (length p+q) and `word` the sorted
    wedge word of (alpha, mu) generators.  The same container doubles as a
    polynomial in the Schroedinger variables x_j after the intertwiner.
    """

    def __init__(self, p: int, q: int, terms=None):
        self.p = int(p)
        self.q = int(q)
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if not c.is_zero():
                    self.terms[key] = c

    # -- construction helpers

    @property
    def n(self) -> int:
        return self.p + self.q

    def copy(self) -> "FockForm":
        return FockForm(self.p, self.q, dict(self.terms))

    def add_term(self, exp, word, coeff: Coeff):
        norm = _wedge_normalize(word)
        if norm is None or coeff.is_zero():
            return
        word, sign = norm
        if sign < 0:
            coeff = -coeff
        key = (tuple(exp), word)
        cur = self.terms.get(key)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    @staticmethod
    def constant(p, q, coeff: Coeff | None = None) -> "FockForm":
        f = FockForm(p, q)
        f.add_term((0,) * (p + q), (), coeff or Coeff.one())
        return f

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FockForm") -> "FockForm":
        out = self.copy()
        for (exp, word), c in other.terms.items():
            out.add_term(exp, word, c)
        return out

    def __neg__(self) -> "FockForm":
        return FockForm(self.p, self.q, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FockForm") -> "FockForm":
        return self + (-other)

    def __mul__(self, other: "FockForm") -> "FockForm":
        out = FockForm(self.p, self.q)
        for (e1, w1), c1 in self.terms.items():
            for (e2, w2), c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out.add_term(exp, w1 + w2, c1 * c2)
        return out

    def scale_coeff(self, coeff: Coeff) -> "FockForm":
        return FockForm(self.p, self.q, {k: c * coeff for k, c in self.terms.items()})

    def scale(self, r) -> "FockForm":
        return FockForm(self.p, self.q, {k: c.scale(r) for k, c in self.terms.items()})

    def degrees(self):
        return sorted({len(word) for (_e, word) in self.terms})

    def max_poly_degree(self) -> int:
        return max((sum(e) for (e, _w) in self.terms), default=0)

    def coefficient(self, exp, word) -> Coeff:
        norm = _wedge_normalize(tuple(word))
        if norm is None:
            return Coeff.zero()
        word, sign = norm
        c = self.terms.get((tuple(exp), word), Coeff.zero())
        return c if sign > 0 else -c

    def wedge_component(self, word) -> dict:
        """Map exp -> Coeff of the (sign-normalized) wedge word."""
        norm = _wedge_normalize(tuple(word))
        if norm is None:
            return {}
        word, sign = norm
        out = {}
        for (exp, w), c in self.terms.items():
            if w == word:
                out[exp] = c if sign > 0 else -c
        return out

    # -- polynomial operators

    def mul_var(self, j: int) -> "FockForm":
        out = FockForm(self.p, self.q)
        for (exp, word), c in self.terms.items():
            e = list(exp)
            e[j] += 1
            out.add_term(e, word, c)
        return out

    def diff_var(self, j: int) -> "FockForm":
        out = FockForm(self.p, self.q)
        for (exp, word), c in self.terms.items():
            if exp[j] == 0:
                continue
            e = list(exp)
            e[j] -= 1
            out.add_term(e, word, c.scale(exp[j]))
        return out

    # -- exterior operators

    def wedge_left(self, gen) -> "FockForm":
        out = FockForm(self.p, self.q)
        for (exp, word), c in self.terms.items():
            out.add_term(exp, (gen,) + word, c)
        return out

    def contract(self, gen) -> "FockForm":
        out = FockForm(self.p, self.q)
        for (exp, word), c in self.terms.items():
            if gen in word:
                i = word.index(gen)
                sign = -1 if i % 2 else 1
                out.add_term(exp, word[:i] + word[i + 1:], c.scale(sign))
        return out

    def __repr__(self):
        bits = []
        for (exp, word), c in sorted(self.terms.items())[:8]:
            bits.append("[z^%s w%s: %r]" % (exp, word, c))
        more = " ..." if len(self.terms) > 8 else ""
        return "FockForm(p=%d,q=%d; %s%s)" % (self.p, self.q, " ".join(bits), more)


# ---------------------------------------------------------------------------
# the representation operators


def _alphas(p):
    return range(p)


def _mus(p, q):
    return range(p, p + q)


def op_lowering(f: FockForm) -> FockForm:
    out = FockForm(f.p, f.q)
    for a in _alphas(f.p):
        out = out + f.diff_var(a).diff_var(a).scale_coeff(Coeff.make(2, 0, 1))
    for m in _mus(f.p, f.q):
        out = out + f.mul_var(m).mul_var(m).scale_coeff(Coeff.make(QQ(-1, 8), 0, -1))
    return out


def op_raising(f: FockForm) -> FockForm:
    out = FockForm(f.p, f.q)
    for a in _alphas(f.p):
        out = out + f.mul_var(a).mul_var(a).scale_coeff(Coeff.make(QQ(-1, 8), 0, -1))
    for m in _mus(f.p, f.q):
        out = out + f.diff_var(m).diff_var(m).scale_coeff(Coeff.make(2, 0, 1))
    return out


def op_x(f: FockForm, a: int, m: int) -> FockForm:
    """omega(X_{alpha mu}) with 0-based variable indices a < p <= m."""
    t1 = f.diff_var(a).diff_var(m).scale_coeff(Coeff.make(-4, 0, 1))
    t2 = f.mul_var(a).mul_var(m).scale_coeff(Coeff.make(QQ(1, 4), 0, -1))
    return t1 + t2


def op_d(f: FockForm) -> FockForm:
    out = FockForm(f.p, f.q)
    for a in _alphas(f.p):
        for m in _mus(f.p, f.q):
            out = out + op_x(f, a, m).wedge_left((a, m))
    return out


def op_h(f: FockForm) -> FockForm:
    out = FockForm(f.p, f.q)
    for a in _alphas(f.p):
        for m in _mus(f.p, f.q):
            out = out + f.contract((a, m)).diff_var(a).mul_var(m)
    return out


def _op_complex_pair(f: FockForm, conj: bool) -> FockForm:
    # del for conj=False, delbar for conj=True; requires q = 2
    if f.q != 2:
        raise ValueError("complex operators require q = 2")
    p = f.p
    m1, m2 = p, p + 1
    s = QQ(-1) if conj else QQ(1)
    out = FockForm(f.p, f.q)
    half = Coeff.make(QQ(1, 2))
    ihalf = Coeff.make(0, s * QQ(1, 2))
    for a in _alphas(p):
        x1 = op_x(f, a, m1)
        x2 = op_x(f, a, m2)
        # (X1 -+ i X2) (x) (w1 +- i w2) / 2
        out = out + x1.wedge_left((a, m1)).scale_coeff(half)
        out = out + x1.wedge_left((a, m2)).scale_coeff(ihalf)
        out = out + x2.wedge_left((a, m1)).scale_coeff(-ihalf)
        out = out + x2.wedge_left((a, m2)).scale_coeff(half)
    return out


def op_del(f: FockForm) -> FockForm:
    return _op_complex_pair(f, conj=False)


def op_delbar(f: FockForm) -> FockForm:
    return _op_complex_pair(f, conj=True)


def op_dc(f: FockForm) -> FockForm:
    """d^c = (1/4 pi i)(del - delbar) = (1/4 pi) sum_a [X_a,m1 (x) A_a,m2 - X_a,m2 (x) A_a,m1]."""
    if f.q != 2:
        raise ValueError("complex operators require q = 2")
    p = f.p
    m1, m2 = p, p + 1
    out = FockForm(f.p, f.q)
    quarter = Coeff.make(QQ(1, 4), 0, -1)
    for a in _alphas(p):
        out = out + op_x(f, a, m1).wedge_left((a, m2)).scale_coeff(quarter)
        out = out - op_x(f, a, m2).wedge_left((a, m1)).scale_coeff(quarter)
    return out


def op_ddc(f: FockForm) -> FockForm:
    """dd^c = -(1/2 pi i) del delbar."""
    inner = op_delbar(f)
    outer = op_del(inner)
    # -(1/2 pi i) = (i/2) pi^-1
    return outer.scale_coeff(Coeff.make(0, QQ(1, 2), -1))


_OP_NAMES = {
    "L": op_lowering,
    "R": op_raising,
    "d": op_d,
    "h": op_h,
    "del": op_del,
    "delbar": op_delbar,
    "dc": op_dc,
    "ddc": op_ddc,
}


def op_apply(name, f: FockForm) -> FockForm:
    """Apply a named operator; indexed ones are given as ('X', alpha, mu) etc.

    Indices here are the 1-based labels of the paper-facing interface:
    alpha in 1..p and mu in p+1..p+q.
    """
    if isinstance(name, str):
        if name in _OP_NAMES:
            return _OP_NAMES[name](f)
        raise ValueError("unknown operator %r" % name)
    tag = name[0]
    a, m = int(name[1]) - 1, int(name[2]) - 1
    if not (0 <= a < f.p and f.p <= m < f.n):
        raise ValueError("indices out of range for signature (%d,%d)" % (f.p, f.q))
    if tag == "X":
        return op_x(f, a, m)
    if tag == "A":
        return f.wedge_left((a, m))
    if tag == "Astar":
        return f.contract((a, m))
    raise ValueError("unknown operator %r" % (name,))


# ---------------------------------------------------------------------------
# the special forms


def build_phi0(p: int, q: int) -> FockForm:
    """The Gaussian: the constant polynomial 1 in the Fock model."""
    return FockForm.constant(p, q)


def build_phi_km(p: int, q: int) -> FockForm:
    """(-sqrt2/4 pi)^q sum_(a1..aq) z_a1..z_aq (x) w_{a1,p+1} ^ ... ^ w_{aq,p+q}."""
    if p < 1 or q < 1:
        raise ValueError("signature must have p,q >= 1")
    out = FockForm(p, q)
    # (-sqrt2/4pi)^q = (-1)^q 2^{q/2} 4^{-q} pi^{-q}
    pref = Coeff.make(QQ((-1) ** q, 4 ** q), 0, -q, q)
    for alphas in _tuples(range(p), q):
        exp = [0] * (p + q)
        for a in alphas:
            exp[a] += 1
        word = tuple((a, p + i) for i, a in enumerate(alphas))
        out.add_term(exp, word, pref)
    return out


def _tuples(rng, length):
    if length == 0:
        yield ()
        return
    for head in rng:
        for tail in _tuples(rng, length - 1):
            yield (head,) + tail


def build_psi(p: int, q: int) -> FockForm:
    """psi = -1/(2(p+q-1)) h(phi_KM)."""
    return op_h(build_phi_km(p, q)).scale(QQ(-1, 2 * (p + q - 1)))


def build_psi_determinant(p: int, q: int) -> FockForm:
    """psi from the first-row determinant expansion formula."""
    if q < 1:
        raise ValueError("q >= 1 required")
    out = FockForm(p, q)
    pref = Coeff.make(QQ((-1) ** q, 4 ** q), 0, -q, q).scale(QQ(-1, 2))
    fact = 1
    for i in range(1, q):
        fact *= i
    pref = pref.scale(QQ(1, fact))
    for alphas in _tuples(range(p), q - 1):
        # matrix rows: first the z_{p+j} row, then the wedge rows of alphas
        rows = []
        zrow = []
        for j in range(q):
            zf = FockForm(p, q)
            e = [0] * (p + q)
            e[p + j] += 1
            zf.add_term(e, (), Coeff.one())
            zrow.append(zf)
        rows.append(zrow)
        for a in alphas:
            rows.append([_gen_form(p, q, (a, p + j)) for j in range(q)])
        det = _first_row_det(p, q, rows)
        mono = FockForm(p, q)
        e = [0] * (p + q)
        for a in alphas:
            e[a] += 1
        mono.add_term(e, (), pref)
        out = out + mono * det
    return out


def _gen_form(p, q, gen) -> FockForm:
    f = FockForm(p, q)
    f.add_term((0,) * (p + q), (gen,), Coeff.one())
    return f


def _first_row_det(p, q, rows) -> FockForm:
    if len(rows) == 1:
        return rows[0][0]
    out = FockForm(p, q)
    for j, entry in enumerate(rows[0]):
        minor = [[row[k] for k in range(len(row)) if k != j] for row in rows[1:]]
        sub = _first_row_det(p, q, minor)
        term = entry * sub
        if j % 2:
            term = -term
        out = out + term
    return out


def build_euler(p: int, q: int) -> FockForm:
    """The Euler form e_q (zero for q odd), normalized with (-1/4 pi)^l / l!."""
    out = FockForm(p, q)
    if q % 2:
        return out
    el = q // 2
    import itertools

    pref = Coeff.make(QQ((-1) ** el, 4 ** el), 0, -el)
    fact = 1
    for i in range(1, el + 1):
        fact *= i
    pref = pref.scale(QQ(1, fact))
    for sigma in itertools.permutations(range(q)):
        sign = _perm_sign(sigma)
        prod = FockForm.constant(p, q, pref.scale(sign))
        for i in range(el):
            m1 = p + sigma[2 * i]
            m2 = p + sigma[2 * i + 1]
            prod = prod * _omega_mu_nu(p, q, m1, m2)
        out = out + prod
    return out


def _omega_mu_nu(p, q, m1, m2) -> FockForm:
    f = FockForm(p, q)
    for a in range(p):
        f.add_term((0,) * (p + q), ((a, m1), (a, m2)), Coeff.one())
    return f


def _perm_sign(sigma):
    sign = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def kahler_form(p: int) -> FockForm:
    """Omega = -e_2 on signature (p,2), the positive Kaehler form."""
    return -build_euler(p, 2)


# ---------------------------------------------------------------------------
# Schroedinger model


def fock_to_schrodinger(f: FockForm) -> FockForm:
    """Polynomial P(x) with f corresponding to P * (Gaussian).

    Each z_j acts on the polynomial part as (-4 pi x_j + d/dx_j); operators
    for distinct j commute, so terms are processed per variable.
    """
    out = FockForm(f.p, f.q)
    for (exp, word), c in f.terms.items():
        poly = {(0,) * f.n: Coeff.one()}
        for j, e in enumerate(exp):
            for _ in range(e):
                poly = _apply_zhat(poly, j, f.n)
        for xexp, pc in poly.items():
            out.add_term(xexp, word, pc * c)
    return out


def _apply_zhat(poly: dict, j: int, n: int) -> dict:
    out = {}

    def acc(key, val):
        cur = out.get(key)
        new = val if cur is None else cur + val
        if new.is_zero():
            out.pop(key, None)
        else:
            out[key] = new

    m4pi = Coeff.make(-4, 0, 1)
    for xexp, c in poly.items():
        up = list(xexp)
        up[j] += 1
        acc(tuple(up), c * m4pi)
        if xexp[j]:
            dn = list(xexp)
            dn[j] -= 1
            acc(tuple(dn), c.scale(xexp[j]))
    return out


def hermite_coefficients(q: int) -> list:
    """Integer coefficients of the physicists' Hermite polynomial H_q."""
    h_prev = [QQ(1)]
    if q == 0:
        return h_prev
    h_cur = [QQ(0), QQ(2)]
    for n in range(1, q):
        nxt = [QQ(0)] * (n + 2)
        for i, c in enumerate(h_cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(h_prev):
            nxt[i] -= 2 * n * c
        h_prev, h_cur = h_cur, nxt
    return h_cur


def hermite_profile(p: int, q: int, alpha: int) -> FockForm:
    """(4 pi)^{-q/2} H_q(sqrt(2 pi) x_alpha) as an exact x-polynomial."""
    out = FockForm(p, q)
    coeffs = hermite_coefficients(q)
    for m, cm in enumerate(coeffs):
        if cm == 0:
            continue
        # (4 pi)^{-q/2} (sqrt(2 pi))^m = 2^{(m-2q)/2} pi^{(m-q)/2}
        two_exp = m - 2 * q
        pi_exp = m - q
        if pi_exp % 2:
            raise AssertionError("parity violation in hermite profile")
        rational = QQ(2) ** (two_exp // 2)
        bit = two_exp % 2
        c = Coeff.make(cm * rational, 0, pi_exp // 2, bit)
        e = [0] * (p + q)
        e[alpha] = m
        out.add_term(e, (), c)
    return out


# ---------------------------------------------------------------------------
# identity certification

_SIG_CAP = 8

IDENTITIES = ("closed", "kmpsi", "ddc", "psiformel", "euler", "hermite")


def verify_identity(name: str, p: int, q: int) -> dict:
    """Certify one operator identity exactly; the report lists the residual
    term count of the difference form (0 = pass)."""
    if p + q > _SIG_CAP:
        raise ValueError("signature cap p+q <= %d exceeded" % _SIG_CAP)
    if p < 1 or q < 1:
        raise ValueError("p,q >= 1 required")
    if name == "closed":
        diff = op_d(build_phi_km(p, q))
    elif name == "kmpsi":
        diff = op_lowering(build_phi_km(p, q)) - op_d(build_psi(p, q))
    elif name == "ddc":
        if q != 2:
            raise ValueError("ddc identity requires q = 2")
        diff = op_lowering(build_phi_km(p, q)) + op_ddc(build_phi0(p, q))
    elif name == "psiformel":
        diff = build_psi(p, q) - build_psi_determinant(p, q)
    elif name == "euler":
        sch = fock_to_schrodinger(build_phi_km(p, q))
        const = FockForm(p, q, {
            (exp, word): c for (exp, word), c in sch.terms.items() if sum(exp) == 0})
        diff = const - build_euler(p, q)
    elif name == "hermite":
        sch = fock_to_schrodinger(build_phi_km(p, q))
        diff = FockForm(p, q)
        for alpha in range(p):
            word = tuple((alpha, p + j) for j in range(q))
            comp = sch.wedge_component(word)
            got = FockForm(p, q, {(exp, ()): c for exp, c in comp.items()})
            diff = diff + (got - hermite_profile(p, q, alpha))
    else:
        raise ValueError("unknown identity %r" % name)
    return {
        "identity": name,
        "sig": [p, q],
        "pass": diff.is_zero(),
        "diff_term_count": len(diff.terms),
    }


def random_form(p: int, q: int, rng: random.Random, n_terms: int = 4,
                max_deg: int = 2, max_wedge: int = 2) -> FockForm:
    out = FockForm(p, q)
    gens = [(a, m) for a in range(p) for m in range(p, p + q)]
    for _ in range(n_terms):
        exp = tuple(rng.randint(0, max_deg) for _ in range(p + q))
        k = rng.randint(0, min(max_wedge, len(gens)))
        word = tuple(rng.sample(gens, k))
        c = Coeff.make(rng.randint(-3, 3), rng.randint(-2, 2),
                       rng.randint(-1, 1), rng.randint(0, 1))
        out.add_term(exp, word, c)
    return out


def random_invariant_form(p: int, q: int, rng: random.Random) -> FockForm:
    """Random element of the K-invariant subcomplex, where d^2 = 0 holds.

    Built by applying short random words of the invariant-preserving
    operators (L, R, h, d) to the canonical forms and their products;
    on non-invariant forms d^2 picks up the [p,p] part of the Lie bracket,
    so arbitrary random forms are not a valid domain for that check.
    """
    seeds = [build_phi_km(p, q), build_psi(p, q), build_phi0(p, q),
             build_euler(p, q)]
    ops = [op_lowering, op_raising, op_h, op_d]
    out = seeds[rng.randrange(len(seeds))]
    for _ in range(rng.randint(0, 2)):
        out = ops[rng.randrange(len(ops))](out)
    if rng.random() < 0.5:
        out = out * seeds[rng.randrange(len(seeds))]
    return out
