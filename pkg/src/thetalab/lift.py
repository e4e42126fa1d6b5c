"""Regularized theta lifts and their geometric checks.

The scalar lift (q = 2, Gaussian kernel) and the form-valued lift (any
signature, kernel psi) are computed as

    [adaptive quadrature over F_1, the |tau| >= 1, v <= 1 part of the
     fundamental domain]
  + [v >= 1 strip: the u-integral picks the lattice terms with f-index
     n = -q(lambda); the f+ terms integrate in closed form to incomplete
     Gamma values at s = 0, the f- terms are integrated numerically, and
     the lambda = 0 term contributes a pure 1/s pole whose Laurent
     constant vanishes].

Geometry on the Grassmannian: tangent flows exp(t X_{alpha mu}) act by
right multiplication on the moving frame, so exterior derivatives of the
lift reduce to nested central differences of frame flows; d^c pairs the
flows through the complex structure (right multiplication by J).
"""

from __future__ import annotations

import math
import cmath
from fractions import Fraction

import numpy as np

from .fqm import Lattice, WeilRep
from .qseries import WeakMaassForm
from .special import exp1, h_kernel, upper_gamma
from .theta import (GrassmannPoint, Kernel, SingularityError, ThetaEngine,
                    builtin_kernel, choose_radius, enumerate_coset)

QQ = Fraction

EPS_MIN_DEFAULT = 1e-4
V_MIN_F1 = math.sqrt(3.0) / 2.0

# Laurent constant of lim_t int_{F_t} v^{1-s} dmu at s = 0; the v >= 1 strip
# is the pure pole, so C is the integral of v dmu over F_1:
# C = 1 - (3/2) log(3/2) - (1/2) log 2.
REG_CONSTANT = 1.0 - 1.5 * math.log(1.5) - 0.5 * math.log(2.0)


class LiftValue:
    def __init__(self, kind, value, error, regularization=None):
        self.kind = kind            # "scalar" or "form"
        self.value = value          # complex, or dict word -> complex
        self.error = float(error)
        self.regularization = regularization or {}

    def components(self) -> dict:
        if self.kind != "form":
            raise ValueError("scalar lift has no components")
        return self.value

    def __repr__(self):
        return "LiftValue(%s, %r, err=%.2e)" % (self.kind, self.value, self.error)


class SingularLocusReport:
    """Vectors defining nearby special-cycle components."""

    def __init__(self, entries):
        # entries: list of dicts with h, n, lam, dist
        self.entries = list(entries)

    def __len__(self):
        return len(self.entries)

    def min_dist(self) -> float:
        return min((e["dist"] for e in self.entries), default=float("inf"))

    def to_json(self):
        return [
            {
                "h": [str(x) for x in e["h"]],
                "n": str(e["n"]),
                "lambda": [str(x) for x in e["lam"]],
                "dist": e["dist"],
            }
            for e in self.entries
        ]


def _check_input_form(f: WeakMaassForm, lattice: Lattice):
    """The lift pairs theta for rho_L with forms for the dual rep."""
    if f.rep is None:
        if lattice.det not in (1, -1):
            raise ValueError("scalar input requires a unimodular lattice")
        return
    neg = tuple(tuple(-x for x in row) for row in lattice.gram)
    ok = (f.rep.lattice.gram == lattice.gram and f.rep.dual) or \
         (f.rep.lattice.gram == neg and not f.rep.dual)
    if not ok:
        raise ValueError("form representation is not dual to the lattice representation")
    defect = f.symmetry_defect()
    scale = max((abs(complex(c)) for c in f.plus.values()), default=1.0)
    if defect > 1e-9 * max(scale, 1.0):
        raise ValueError("coefficients violate a+(-h,n) = (-1)^q a+(h,n) (defect %.2e)" % defect)


def _hkey(vec):
    return tuple(Fraction(x) % 1 for x in vec)


def _table_on_lattice(table: dict, lattice: Lattice) -> dict:
    """Re-key a coefficient table by full coset vectors of the lattice.

    Scalar forms on unimodular lattices store the empty key (); everything
    else already uses reduced dual-coset vectors.
    """
    zero = (QQ(0),) * lattice.rank
    out = {}
    for (h, n), c in table.items():
        key = zero if len(h) != lattice.rank else _hkey(h)
        out[(key, QQ(n))] = c
    return out


def singular_set(f: WeakMaassForm, point: GrassmannPoint, eps: float,
                 lattice: Lattice | None = None) -> SingularLocusReport:
    """All lattice vectors with a+(h, -q(lambda)) != 0 and |q(lambda_z)| < eps."""
    lattice = lattice or point.lattice
    plus = _table_on_lattice(f.plus, lattice)
    principal = [(h, n) for (h, n), c in plus.items() if n < 0 and c != 0]
    if not principal:
        return SingularLocusReport([])
    entries = []
    seen_cosets = {}
    for h, n in principal:
        seen_cosets.setdefault(h, []).append(n)
    for h, ns in seen_cosets.items():
        radius = max(-2.0 * float(n) for n in ns) + 4.0 * eps + 1e-9
        for lam in enumerate_coset(lattice, h, point, radius):
            qlam = lattice.q_value(lam)
            if -qlam not in ns:
                continue
            qneg = point.q_negative([float(x) for x in lam])
            if abs(qneg) < eps:
                entries.append({
                    "h": h,
                    "n": -qlam,
                    "lam": lam,
                    "dist": math.sqrt(2.0 * abs(qneg)),
                })
    entries.sort(key=lambda e: e["dist"])
    return SingularLocusReport(entries)


# ---------------------------------------------------------------------------
# quadrature over F_1


def _gl_nodes(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def f1_quadrature(integrand, tol: float, n_comp: int = 1, max_panels: int = 400):
    """Integrate integrand(u_array, v_array) -> (n, n_comp) over F_1 du dv.

    F_1 = {|u| <= 1/2, sqrt(1-u^2) <= v <= 1}.  Adaptive bisection in u with
    tensor Gauss-Legendre panels; per-panel error from comparing 8- and
    12-point rules.
    """

    def panel(u0, u1, order):
        us, wu = _gl_nodes(order, u0, u1)
        total = np.zeros(n_comp, dtype=complex)
        for u, pw in zip(us, wu):
            vlow = math.sqrt(max(1.0 - u * u, 0.0))
            if vlow >= 1.0:
                continue
            vs, wv = _gl_nodes(order, vlow, 1.0)
            vals = integrand(np.full(len(vs), u), vs)
            total += pw * np.sum(vals * wv[:, None], axis=0)
        return total

    panels = [(-0.5, 0.5)]
    values = {}
    errors = {}
    for key in panels:
        coarse = panel(key[0], key[1], 8)
        fine = panel(key[0], key[1], 12)
        values[key] = fine
        errors[key] = float(np.max(np.abs(fine - coarse)))
    while sum(errors.values()) > tol and len(panels) < max_panels:
        worst = max(panels, key=lambda k: errors[k])
        panels.remove(worst)
        del values[worst], errors[worst]
        mid = 0.5 * (worst[0] + worst[1])
        for key in ((worst[0], mid), (mid, worst[1])):
            coarse = panel(key[0], key[1], 8)
            fine = panel(key[0], key[1], 12)
            values[key] = fine
            errors[key] = float(np.max(np.abs(fine - coarse)))
            panels.append(key)
    total = np.zeros(n_comp, dtype=complex)
    for key in panels:
        total += values[key]
    return total, sum(errors.values())


def _eval_f_at_nodes(f: WeakMaassForm, lattice: Lattice, cosets, us, vs) -> np.ndarray:
    """Table evaluation of f on nodes: array (n_cosets, n_nodes)."""
    idx = {h: i for i, h in enumerate(cosets)}
    out = np.zeros((len(cosets), len(us)), dtype=complex)
    taus = us + 1j * vs
    for (h, n), c in _table_on_lattice(f.plus, lattice).items():
        i = idx.get(h)
        if i is None:
            continue
        out[i] += complex(c) * np.exp(2j * math.pi * float(n) * taus)
    kf = f.weight
    for (h, n), c in _table_on_lattice(f.minus, lattice).items():
        i = idx.get(h)
        if i is None:
            continue
        if n == 0:
            out[i] += complex(c) * vs ** float(1 - kf)
        else:
            hv = np.array([h_kernel(kf, 2.0 * math.pi * float(n) * v) for v in vs])
            out[i] += complex(c) * hv * np.exp(2j * math.pi * float(n) * us)
    return out


def _f_truncation_error(f: WeakMaassForm, v_min: float) -> float:
    """Crude bound for the dropped tail of the plus-table beyond its precision."""
    if f.prec is None:
        return 0.0
    n_max = float(f.prec)
    biggest = max((abs(complex(c)) for (h, n), c in f.plus.items()
                   if float(n) > n_max - 2), default=0.0)
    return 20.0 * biggest * math.exp(-2.0 * math.pi * n_max * v_min)


# ---------------------------------------------------------------------------
# the v >= 1 contributions


def _plus_terms_closed_form(f, lattice, point, kernel, tol):
    """Sum over lambda != 0 of a+(h, -q(lambda)) * closed-form v-integrals.

    Per lambda and wedge word the integral is
        int_1^inf v^{vpow + deg/2} e^{4 pi v q(lambda_z)} v^{-2-s} dv
      = A^{s - m/2} Gamma(m/2 - s, A),   A = |4 pi q(lambda_z)|,
    at s = 0, with m/2 = vpow + deg/2 - 1; for the Gaussian kernel m = 0
    and the value is E_1(A).
    """
    words = kernel.words()
    out = {w: 0.0 + 0.0j for w in words}
    err = 0.0
    ns_by_coset = {}
    for (h, n), c in _table_on_lattice(f.plus, lattice).items():
        ns_by_coset.setdefault(h, {})[QQ(n)] = c
    cut = (math.log(10.0 / tol) + 6.0) / math.pi
    for h, table in ns_by_coset.items():
        neg2n = [-2.0 * float(n) for n in table]
        radius = max(max(neg2n), 0.0) + cut
        for lam in enumerate_coset(lattice, h, point, radius):
            qlam = lattice.q_value(lam)
            n = -qlam
            c = table.get(n)
            if c is None or all(x == 0 for x in lam):
                continue
            xi = point.coords([float(x) for x in lam])
            qneg = -0.5 * float(np.dot(xi[point.p:], xi[point.p:]))
            big_a = 4.0 * math.pi * abs(qneg)
            if big_a < 1e-300:
                raise SingularityError("lattice vector lies on the evaluation plane")
            for word, rows in kernel.components.items():
                acc = 0.0 + 0.0j
                for deg, exp, coeff in rows:
                    mono = 1.0
                    for j, e in enumerate(exp):
                        if e:
                            mono *= xi[j] ** e
                    mexp = kernel.v_power + deg / 2.0 - 1.0
                    if abs(mexp) < 1e-12:
                        val = exp1(big_a)
                    else:
                        val = big_a ** (-mexp) * upper_gamma(mexp, big_a)
                    acc += coeff * mono * val
                out[word] += complex(c) * acc
    # truncation of the table tail: the first omitted index pairs with
    # vectors of |q(lambda_z)| >= n, so E1(4 pi n) bounds the error envelope
    if f.prec is not None:
        n0 = float(f.prec)
        biggest = max((abs(complex(c)) for (h, n), c in f.plus.items()
                       if float(n) > n0 - 2), default=0.0)
        if n0 > 0.25:
            err += 40.0 * biggest * math.exp(-4.0 * math.pi * n0)
    return out, err


def v_integral_closed(m_half: float, big_a: float) -> float:
    """int_1^inf v^{m_half - 1} e^{-A v} dv = A^{-m_half} Gamma(m_half, A)."""
    if abs(m_half) < 1e-12:
        return exp1(big_a)
    return big_a ** (-m_half) * upper_gamma(m_half, big_a)


def v_integral_numeric(m_half: float, big_a: float, tol: float = 1e-12) -> float:
    """The same integral by panelled Gauss-Legendre, used as the dual route."""
    v_cut = 1.0
    # advance until the integrand envelope is negligible
    while (v_cut ** max(m_half - 1.0, 0.0)) * math.exp(-big_a * v_cut) > tol * 1e-3 and v_cut < 1e4:
        v_cut *= 1.5
    total = 0.0
    a = 1.0
    while a < v_cut:
        b = min(a * 2.0, v_cut)
        xs, ws = _gl_nodes(40, a, b)
        total += float(np.sum(ws * xs ** (m_half - 1.0) * np.exp(-big_a * xs)))
        a = b
    return total


def _minus_terms_numeric(f, lattice, point, kernel, tol):
    """Numeric v >= 1 integrals of the nonholomorphic coefficient terms."""
    words = kernel.words()
    out = {w: 0.0 + 0.0j for w in words}
    if not f.minus:
        return out, 0.0
    kf = f.weight
    err = 0.0
    for (h, n), c in _table_on_lattice(f.minus, lattice).items():
        if n == 0:
            continue  # only enters through lambda = 0, where the kernel vanishes
        # vectors with q(lambda) = -n
        q_target = -QQ(n)
        radius = 2.0 * abs(float(q_target)) + (math.log(10.0 / tol) + 6.0) / math.pi
        for lam in enumerate_coset(lattice, h, point, radius):
            if lattice.q_value(lam) != q_target or all(x == 0 for x in lam):
                continue
            xi = point.coords([float(x) for x in lam])
            maj = float(np.dot(xi, xi))
            decay = math.pi * (maj + 2.0 * float(n))  # exponent rate, positive
            if decay <= 0:
                raise SingularityError("nonholomorphic term fails to decay")
            v_cut = 1.0
            while math.exp(-decay * v_cut) > tol * 1e-3 and v_cut < 1e4:
                v_cut *= 1.5
            for word, rows in kernel.components.items():
                acc = 0.0
                a = 1.0
                while a < v_cut:
                    b = min(2.0 * a, v_cut)
                    vs, ws = _gl_nodes(32, a, b)
                    hv = np.array([h_kernel(kf, 2.0 * math.pi * float(n) * v) for v in vs])
                    pol = np.zeros(len(vs), dtype=complex)
                    for deg, exp, coeff in rows:
                        mono = 1.0
                        for j, e in enumerate(exp):
                            if e:
                                mono *= xi[j] ** e
                        pol += coeff * vs ** (deg / 2.0) * mono
                    integ = hv * pol * vs ** (kernel.v_power - 2.0) * np.exp(-math.pi * maj * vs)
                    acc += float(np.sum(ws * integ).real) + 1j * float(np.sum(ws * integ).imag)
                    a = b
                out[word] += complex(c) * acc
    return out, err


# ---------------------------------------------------------------------------
# the two lifts


def _lift_common(f: WeakMaassForm, point: GrassmannPoint, kernel_name: str,
                 tol: float, lattice: Lattice | None, eps_min: float):
    lattice = lattice or point.lattice
    _check_input_form(f, lattice)
    if f.cls == "H_general":
        raise ValueError("lift inputs are restricted to H_plus and weakly holomorphic forms")
    report = singular_set(f, point, eps_min, lattice)
    if len(report):
        raise SingularityError(
            "evaluation point is within eps of the singular locus", report=report)
    p, q = lattice.signature
    kernel = builtin_kernel(kernel_name, p, q)
    rep = WeilRep(lattice)
    radius = choose_radius(lattice, point, kernel, tol, V_MIN_F1)
    engine = ThetaEngine(lattice, point, kernel, radius, rep=rep)
    cosets = engine.cosets

    words = kernel.words()
    word_index = {w: i for i, w in enumerate(words)}

    def integrand(us, vs):
        taus = us + 1j * vs
        fvals = _eval_f_at_nodes(f, lattice, cosets, us, vs)
        out = np.zeros((len(us), len(words)), dtype=complex)
        for i, tau in enumerate(taus):
            comps = engine.components(tau)
            for w in words:
                acc = 0.0 + 0.0j
                for ci, h in enumerate(cosets):
                    acc += fvals[ci, i] * comps[(h, w)]
                out[i, word_index[w]] = acc
        return out / (vs ** 2)[:, None]

    quad, quad_err = f1_quadrature(integrand, tol / 3.0, n_comp=len(words))
    plus_part, plus_err = _plus_terms_closed_form(f, lattice, point, kernel, tol)
    minus_part, minus_err = _minus_terms_numeric(f, lattice, point, kernel, tol)
    theta_err = engine.tail_bound(V_MIN_F1) * 2.0
    f_err = _f_truncation_error(f, V_MIN_F1)
    total_err = quad_err + plus_err + minus_err + theta_err + f_err
    comps = {}
    for w in words:
        comps[w] = quad[word_index[w]] + plus_part[w] + minus_part[w]
    return comps, total_err


def lift_phi0(f: WeakMaassForm, point: GrassmannPoint, tol: float = 1e-6,
              lattice: Lattice | None = None, eps_min: float = EPS_MIN_DEFAULT) -> LiftValue:
    """The scalar regularized lift against the Gaussian kernel (q = 2)."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if q != 2:
        raise ValueError("the Gaussian lift requires signature (p, 2)")
    comps, err = _lift_common(f, point, "phi0", tol, lattice, eps_min)
    value = comps[()]
    a00 = complex(f.a_plus((QQ(0),) * lattice.rank if lattice.rank else (), 0))
    reg = {"C": REG_CONSTANT, "a_plus_00": a00, "uses_constant": bool(abs(a00) > 0)}
    return LiftValue("scalar", complex(value), err, regularization=reg)


def lift_psi(f: WeakMaassForm, point: GrassmannPoint, tol: float = 1e-6,
             lattice: Lattice | None = None, eps_min: float = EPS_MIN_DEFAULT) -> LiftValue:
    """The (q-1)-form-valued regularized lift against the kernel psi."""
    lattice = lattice or point.lattice
    comps, err = _lift_common(f, point, "psi", tol, lattice, eps_min)
    return LiftValue("form", comps, err, regularization={})


# ---------------------------------------------------------------------------
# derivatives along frame flows


def _flow(point: GrassmannPoint, steps) -> GrassmannPoint:
    out = point
    for (a, m, t) in steps:
        out = out.move(a, m, t)
    return out


class _LiftCache:
    """Scalar-lift evaluations keyed by the flow steps from a base point."""

    def __init__(self, f, point, tol, lattice, kind="phi0"):
        self.f = f
        self.point = point
        self.tol = tol
        self.lattice = lattice or point.lattice
        self.kind = kind
        self.cache = {}
        self.errors = []

    def value(self, steps):
        key = tuple(steps)
        if key not in self.cache:
            pt = _flow(self.point, steps)
            if self.kind == "phi0":
                lv = lift_phi0(self.f, pt, self.tol, self.lattice)
                self.cache[key] = lv.value.real
            else:
                lv = lift_psi(self.f, pt, self.tol, self.lattice)
                self.cache[key] = {w: c for w, c in lv.value.items()}
            self.errors.append(lv.error)
        return self.cache[key]


def _dc_data(p: int):
    """d^c component rule for q = 2: word -> (sign, flow generator).

    (d^c Phi)(X_{a,p+1}) = -(1/4pi) dPhi(X_{a,p+2}),
    (d^c Phi)(X_{a,p+2}) = +(1/4pi) dPhi(X_{a,p+1}).
    """
    data = {}
    for a in range(p):
        data[(a, p)] = (-1.0, (a, p + 1))
        data[(a, p + 1)] = (+1.0, (a, p))
    return data


def dc_lift(f: WeakMaassForm, point: GrassmannPoint, tol: float = 1e-6,
            lattice: Lattice | None = None, step: float = 1e-3,
            cache: "_LiftCache" | None = None) -> dict:
    """d^c of the scalar lift by central differences with Richardson."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if q != 2:
        raise ValueError("d^c requires q = 2")
    cache = cache or _LiftCache(f, point, tol, lattice)
    rule = _dc_data(p)
    out = {}
    for word, (sign, gen) in rule.items():
        a, m = gen

        def deriv(h):
            plus = cache.value(((a, m, h),))
            minus = cache.value(((a, m, -h),))
            return (plus - minus) / (2.0 * h)

        d1 = deriv(step)
        d2 = deriv(step / 2.0)
        out[(word,)] = sign / (4.0 * math.pi) * ((4.0 * d2 - d1) / 3.0)
    return out


def lambda_b(f: WeakMaassForm, point: GrassmannPoint, tol: float = 1e-6,
             lattice: Lattice | None = None, step: float = 1e-3) -> dict:
    """dd^c of the scalar lift: components on wedge pairs by nested differences."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if q != 2:
        raise ValueError("dd^c requires q = 2")
    if step < 1e-5:
        raise ValueError("step too small for the target tolerance")
    cache = _LiftCache(f, point, tol, lattice)
    rule = _dc_data(p)
    gens = sorted(rule)

    def mixed_at(ga, gb, h):
        (a1, m1), (a2, m2) = ga, gb
        vals = {}
        for s1 in (1, -1):
            for s2 in (1, -1):
                vals[(s1, s2)] = cache.value(((a1, m1, s1 * h), (a2, m2, s2 * h)))
        return (vals[(1, 1)] - vals[(1, -1)] - vals[(-1, 1)] + vals[(-1, -1)]) / (4 * h * h)

    def mixed(ga, gb):
        coarse = mixed_at(ga, gb, step)
        fine = mixed_at(ga, gb, step / 2.0)
        return (4.0 * fine - coarse) / 3.0

    out = {}
    for i, g1 in enumerate(gens):
        for g2 in gens[i + 1:]:
            s2, flow2 = rule[g2]
            s1, flow1 = rule[g1]
            val = (s2 * mixed(g1, flow2) - s1 * mixed(g2, flow1)) / (4.0 * math.pi)
            out[(g1, g2)] = val
    return out


def d_of_one_form(form_at, point: GrassmannPoint, p: int, q: int,
                  step: float = 1e-3) -> dict:
    """Exterior derivative of a 1-form given by a callable point -> dict.

    form_at(pt) returns {(gen,): value}; the result is indexed by wedge
    pairs (g1, g2) with (d w)(X1, X2) = X1 w(X2) - X2 w(X1) in the moving
    frame (the [p,p] bracket drops for a symmetric pair).
    """
    gens = [(a, m) for a in range(p) for m in range(p, p + q)]

    def dval(g_flow, g_comp):
        a, m = g_flow
        plus = form_at(point.move(a, m, step))[(g_comp,)]
        minus = form_at(point.move(a, m, -step))[(g_comp,)]
        return (plus - minus) / (2.0 * step)

    out = {}
    for i, g1 in enumerate(gens):
        for g2 in gens[i + 1:]:
            out[(g1, g2)] = dval(g1, g2) - dval(g2, g1)
    return out


def kahler_components(p: int) -> dict:
    """Components of Omega = -e_2 on wedge pairs: (1/2pi) sum_a w_a,p+1 ^ w_a,p+2."""
    comp = {}
    for a in range(p):
        comp[((a, p), (a, p + 1))] = 1.0 / (2.0 * math.pi)
    return comp


# ---------------------------------------------------------------------------
# wall crossing and the logarithmic singularity


def wall_crossing_time(point: GrassmannPoint, gen, lam, t_range=(-1.0, 1.0),
                       samples: int = 200):
    """Parameter where the wall of lam is crossed along the flow of gen."""
    a, m = gen
    lamf = [float(Fraction(x)) for x in lam]

    def height(t):
        # signed coordinate of lam on the negative line (q = 1)
        pt = point.move(a, m, t)
        return float(pt.coords(lamf)[pt.p])

    ts = np.linspace(t_range[0], t_range[1], samples)
    hs = [height(t) for t in ts]
    for i in range(len(ts) - 1):
        if hs[i] == 0.0:
            return float(ts[i])
        if hs[i] * hs[i + 1] < 0:
            lo, hi = ts[i], ts[i + 1]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if height(lo) * height(mid) <= 0:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
    raise ValueError("no wall crossing of the given vector in the range")


def jump_check(f: WeakMaassForm, point: GrassmannPoint, gen, lam,
               delta: float = 5e-3, tol: float = 1e-5,
               lattice: Lattice | None = None) -> dict:
    """Measured vs predicted jump of the scalar psi-lift across one wall (q=1).

    The prediction per +-lambda pair through the wall is 2 |a+(h, n)|; the
    sign is reported relative to the path orientation and is convention
    dependent.
    """
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if q != 1:
        raise ValueError("wall crossing requires signature (p, 1)")
    a, m = gen
    t_star = wall_crossing_time(point, gen, lam)
    pt_star = point.move(a, m, t_star)
    near = singular_set(f, pt_star, 1e-4, lattice)
    pairs = {}
    for e in near.entries:
        key = tuple(sorted([tuple(e["lam"]), tuple(-x for x in e["lam"])]))
        pairs.setdefault(key, e)
    if len(pairs) != 1:
        raise ValueError("path crosses multiple walls (%d vector pairs nearby)" % len(pairs))
    entry = next(iter(pairs.values()))
    a_plus = f.a_plus(entry["h"], entry["n"])
    predicted = 2.0 * abs(complex(a_plus))
    vals = {}
    for s in (1, -1):
        pt = point.move(a, m, t_star + s * delta)
        vals[s] = lift_psi(f, pt, tol, lattice).value[()].real
    measured = vals[1] - vals[-1]
    return {
        "t_star": t_star,
        "measured": measured,
        "predicted_magnitude": predicted,
        "vector": entry["lam"],
        "coefficient": complex(a_plus),
    }


def log_singularity_check(f: WeakMaassForm, points_with_dist, multiplicity: int,
                          tol: float = 1e-5, lattice: Lattice | None = None) -> dict:
    """Non-blowup certificate: Phi(z_t) + 2 m log dist(z_t) has small variation.

    `points_with_dist` is a list of (GrassmannPoint, dist) pairs approaching
    the wall; dist is the majorant distance |lambda_z|.
    """
    values = []
    for pt, dist in points_with_dist:
        lv = lift_phi0(f, pt, tol, lattice, eps_min=1e-12)
        values.append(lv.value.real + 2.0 * multiplicity * math.log(dist))
    variation = sum(abs(values[i + 1] - values[i]) for i in range(len(values) - 1))
    return {"values": values, "variation": variation, "bounded": variation < 0.5}


# ---------------------------------------------------------------------------
# kernel-path consistency (truncated Petersson product)


def petersson_kernel_product(cusp: "VVSeries", point: GrassmannPoint,
                             v_max: float = 40.0, tol: float = 1e-6,
                             lattice: Lattice | None = None) -> dict:
    """(Theta(phi_KM), g)_Pet truncated at v <= v_max, per wedge word.

    The strip 1 <= v <= v_max is integrated after the exact u-integral
    (which pairs each lattice vector with the matching cusp coefficient);
    F_1 is integrated by the adaptive rule.
    """
    lattice = lattice or point.lattice
    p, q = lattice.signature
    kappa = QQ(p + q, 2)
    kernel = builtin_kernel("phikm", p, q)
    rep = WeilRep(lattice)
    radius = choose_radius(lattice, point, kernel, tol, V_MIN_F1)
    engine = ThetaEngine(lattice, point, kernel, radius, rep=rep)
    words = kernel.words()
    word_index = {w: i for i, w in enumerate(words)}
    cosets = engine.cosets
    conj_coeffs = {}
    for (h, n), c in cusp.coeffs.items():
        conj_coeffs[(h, QQ(n))] = complex(c).conjugate()

    def integrand(us, vs):
        out = np.zeros((len(us), len(words)), dtype=complex)
        for i, (u, v) in enumerate(zip(us, vs)):
            comps = engine.components(u + 1j * v)
            gv = {}
            for h in cosets:
                acc = 0j
                for (hh, n), cc in conj_coeffs.items():
                    if hh == h:
                        acc += cc * cmath.exp(-2j * math.pi * float(n) * u -
                                              2.0 * math.pi * float(n) * v)
                gv[h] = acc
            for w in words:
                out[i, word_index[w]] = sum(comps[(h, w)] * gv[h] for h in cosets)
        return out * (vs ** float(kappa - 2))[:, None]

    quad, _err = f1_quadrature(integrand, tol, n_comp=len(words))
    # strip 1 <= v <= v_max: u-integral picks n = q(lambda)
    strip = {w: 0j for w in words}
    for w in words:
        rows = engine.word_terms[w]
        for idx in range(engine.nvec):
            n = engine.qvals[idx]
            c = conj_coeffs.get((engine.cosets[engine.coset_idx[idx]], n))
            if c is None:
                continue
            decay = math.pi * engine.maj[idx] + 2.0 * math.pi * float(n)
            acc = 0.0
            aa = 1.0
            while aa < v_max:
                bb = min(2.0 * aa, v_max)
                vs, wsq = _gl_nodes(32, aa, bb)
                pol = np.zeros(len(vs), dtype=complex)
                for deg, coeff, mono in rows:
                    pol += coeff * vs ** (deg / 2.0) * mono[idx]
                acc += np.sum(wsq * pol * vs ** (float(kappa) - 2.0) * np.exp(-decay * vs))
                aa = bb
            strip[w] += c * acc
    return {w: quad[word_index[w]] + strip[w] for w in words}
