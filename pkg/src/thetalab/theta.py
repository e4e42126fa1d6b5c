"""Siegel theta series for polynomial Schwartz kernels on O(p,q).

A point of the Grassmannian of negative q-planes is carried by a frame
matrix F (columns: an orthogonal basis of V(R) in lattice coordinates,
positive vectors first) with F^T G F = diag(1_p, -1_q).  The majorant is
(x,x)_z = x^T (F F^T)^{-1} x and coordinates in the moving frame are
xi = F^{-1} x.

For a kernel P * phi_0 of modular weight w (P from the Fock model via the
Schroedinger intertwiner), the lattice-sum component on the coset h is

    theta_h(tau, z) = v^{(p+q)/4 - w/2} sum_{l in L+h}
                      P(sqrt(v) xi(l)) e(q(l) u) exp(-pi v (l,l)_z),

and under the generators

    theta(tau+1) = rho(T) theta(tau),
    theta(-1/tau) = e(w/4) (-i tau)^w rho(S) theta(tau),

with rho from the fqm module; (-i tau)^w is the principal power.
"""

from __future__ import annotations

import cmath
import math
import warnings
from fractions import Fraction

import numpy as np

from .fock import FockForm, build_euler, build_phi0, build_phi_km, build_psi, \
    fock_to_schrodinger, op_ddc
from .fqm import Lattice, WeilRep

QQ = Fraction


class SingularityError(ValueError):
    """Raised when an evaluation point is too close to a singular locus."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# Grassmannian points


def base_frame(lattice: Lattice) -> np.ndarray:
    """Frame of the base point: F0 with F0^T G F0 = diag(1_p, -1_q)."""
    n = lattice.rank
    if n == 0:
        return np.zeros((0, 0))
    g = np.array(lattice.gram, dtype=float)
    vals, vecs = np.linalg.eigh(g)
    order = np.argsort(-vals)  # positive eigenvalues first
    vals = vals[order]
    vecs = vecs[:, order]
    return vecs / np.sqrt(np.abs(vals))


class GrassmannPoint:
    """A negative q-plane given by a moving frame over the base point."""

    def __init__(self, lattice: Lattice, frame: np.ndarray, check: bool = True):
        self.lattice = lattice
        self.p, self.q = lattice.signature
        self.frame = np.asarray(frame, dtype=float)
        n = lattice.rank
        if self.frame.shape != (n, n):
            raise ValueError("frame must be %dx%d" % (n, n))
        if check and n:
            g = np.array(lattice.gram, dtype=float)
            ipq = np.diag([1.0] * self.p + [-1.0] * self.q)
            resid = np.max(np.abs(self.frame.T @ g @ self.frame - ipq))
            if resid > 1e-8:
                raise ValueError("frame is not orthonormal for the form (residual %.2e)" % resid)
        self._inv = np.linalg.inv(self.frame) if n else np.zeros((0, 0))

    @staticmethod
    def base(lattice: Lattice) -> "GrassmannPoint":
        return GrassmannPoint(lattice, base_frame(lattice), check=False)

    def coords(self, x) -> np.ndarray:
        """Frame coordinates xi with x = F xi."""
        return self._inv @ np.asarray(x, dtype=float)

    def majorant(self) -> np.ndarray:
        if self.lattice.rank == 0:
            return np.zeros((0, 0))
        return self._inv.T @ self._inv

    def majorant_value(self, x) -> float:
        xi = self.coords(x)
        return float(np.dot(xi, xi))

    def q_negative(self, x) -> float:
        """q(x_z) = -(1/2) |xi_negative|^2."""
        xi = self.coords(x)
        return -0.5 * float(np.dot(xi[self.p:], xi[self.p:]))

    def move(self, alpha: int, mu: int, t: float) -> "GrassmannPoint":
        """Flow along exp(t X_{alpha mu}); 0-based alpha < p <= mu."""
        n = self.lattice.rank
        if not (0 <= alpha < self.p and self.p <= mu < n):
            raise ValueError("invalid tangent indices")
        rot = np.eye(n)
        c, s = math.cosh(t), math.sinh(t)
        rot[alpha, alpha] = c
        rot[mu, mu] = c
        rot[alpha, mu] = s
        rot[mu, alpha] = s
        return GrassmannPoint(self.lattice, self.frame @ rot, check=False)

    def apply_isometry(self, gamma) -> "GrassmannPoint":
        return GrassmannPoint(self.lattice, np.asarray(gamma, dtype=float) @ self.frame)


def grassmann_from_group(lattice: Lattice, g) -> GrassmannPoint:
    """Point moved from the base by an isometry g (checked to 1e-10)."""
    g = np.asarray(g, dtype=float)
    gram = np.array(lattice.gram, dtype=float)
    resid = float(np.max(np.abs(g.T @ gram @ g - gram))) if lattice.rank else 0.0
    if resid > 1e-10:
        raise ValueError("matrix is not an isometry (residual %.2e)" % resid)
    return GrassmannPoint(lattice, g @ base_frame(lattice), check=False)


# the hyperbolic-plane-squared benchmark lattice in matrix coordinates:
# (x1,x2,x3,x4) <-> [[x1, x3], [-x4, x2]], q(x) = det = x1 x2 + x3 x4.

UU_GRAM = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))


def _uu_vec(m11, m12, m21, m22) -> np.ndarray:
    return np.array([m11, m22, m12, -m21])


def grassmann_from_h2(lattice: Lattice, z1: complex, z2: complex) -> GrassmannPoint:
    """The negative 2-plane attached to (z1, z2) in H x H for U + U."""
    if tuple(lattice.gram) != UU_GRAM:
        raise ValueError("h2 coordinates require the U+U Gram matrix")
    y1, y2 = z1.imag, z2.imag
    if y1 <= 0 or y2 <= 0:
        raise ValueError("points must lie in the upper half plane")
    if min(y1, y2) < 1e-6:
        warnings.warn("point is nearly degenerate (Im -> 0); conditioning suffers")
    zv = _uu_vec(z1 * z2, z1, z2, 1)          # isotropic, spans the negative plane
    zv2 = _uu_vec(z1 * np.conj(z2), z1, np.conj(z2), 1)  # positive partner
    norm = math.sqrt(2.0 * y1 * y2)
    cols = [zv2.real / norm, zv2.imag / norm, zv.real / norm, zv.imag / norm]
    return GrassmannPoint(lattice, np.array(cols).T)


def uu_pair_action(g1, g2) -> np.ndarray:
    """Integer isometry of U+U induced by X -> g1 X g2^T on 2x2 matrices."""
    basis = [(1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0), (0, 0, -1, 0)]
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    cols = []
    for m11, m12, m21, m22 in basis:
        mat = np.array([[m11, m12], [m21, m22]], dtype=float)
        out = g1 @ mat @ g2.T
        cols.append(_uu_vec(out[0, 0], out[0, 1], out[1, 0], out[1, 1]))
    return np.array(cols).T


# ---------------------------------------------------------------------------
# lattice point enumeration


def enumerate_coset(lattice: Lattice, coset, point: GrassmannPoint, radius: float):
    """All vectors of L + coset with majorant (l,l)_z <= radius.

    Returns a list of rational vectors (tuples of Fractions).  Fincke-Pohst
    style recursion on the Cholesky factor of the majorant.
    """
    n = lattice.rank
    if n == 0:
        return [()] if radius >= 0 else []
    maj = point.majorant()
    chol = np.linalg.cholesky(maj).T  # upper triangular R with R^T R = maj
    center = [float(Fraction(c)) for c in coset]
    out = []
    xs = [0] * n

    def rec(level, offset, remaining):
        # offset[i] = sum_{j > level} R[i, j] (x_j + c_j) for i <= level
        rkk = chol[level, level]
        lim = math.sqrt(max(remaining, 0.0))
        lo = math.ceil((-lim - offset[level]) / rkk - center[level] - 1e-12)
        hi = math.floor((lim - offset[level]) / rkk - center[level] + 1e-12)
        for x in range(lo, hi + 1):
            vk = x + center[level]
            row = offset[level] + rkk * vk
            rem = remaining - row * row
            if rem < -1e-9:
                continue
            xs[level] = x
            if level == 0:
                out.append(tuple(Fraction(c) + xx for c, xx in zip(coset, xs)))
            else:
                rec(level - 1, offset[:level] + chol[:level, level] * vk, rem)

    rec(n - 1, np.zeros(n), float(radius) + 1e-9)
    return out


# ---------------------------------------------------------------------------
# kernels


class Kernel:
    """Schwartz kernel P * phi_0 with P per wedge word, plus its weight."""

    def __init__(self, name: str, p: int, q: int, weight, fock: FockForm):
        self.name = name
        self.p = p
        self.q = q
        self.weight = QQ(weight)
        self.fock = fock
        sch = fock_to_schrodinger(fock)
        self.components = {}
        for (exp, word), c in sch.terms.items():
            self.components.setdefault(word, []).append((sum(exp), exp, c.to_complex()))
        self.max_degree = max((sum(e) for (e, _w) in sch.terms), default=0)
        self.coeff_scale = sum(abs(c.to_complex()) for c in sch.terms.values()) or 1.0
        self.parity = 1 if all(sum(e) % 2 == 0 for (e, _w) in sch.terms) else -1

    @property
    def v_power(self) -> float:
        return (self.p + self.q) / 4.0 - float(self.weight) / 2.0

    def words(self):
        return sorted(self.components)


def builtin_kernel(name: str, p: int, q: int) -> Kernel:
    if name == "phi0":
        return Kernel(name, p, q, QQ(p - q, 2), build_phi0(p, q))
    if name == "phikm":
        return Kernel(name, p, q, QQ(p + q, 2), build_phi_km(p, q))
    if name == "psi":
        return Kernel(name, p, q, QQ(p + q, 2) - 2, build_psi(p, q))
    if name == "ddcphi0":
        if q != 2:
            raise ValueError("ddcphi0 requires q = 2")
        return Kernel(name, p, q, QQ(p + q, 2) - 2, op_ddc(build_phi0(p, q)))
    raise ValueError("unknown kernel %r" % name)


def kernel_from_fock(name: str, fock: FockForm, weight) -> Kernel:
    return Kernel(name, fock.p, fock.q, weight, fock)


# ---------------------------------------------------------------------------
# evaluation engine


class ThetaValue:
    def __init__(self, components: dict, error: float, weight, rep_dim: int):
        self.components = components  # (hkey, word) -> complex
        self.error = float(error)
        self.weight = weight
        self.rep_dim = rep_dim

    def vector(self, word=()) -> dict:
        return {h: c for (h, w), c in self.components.items() if w == word}

    def max_abs(self) -> float:
        return max((abs(c) for c in self.components.values()), default=0.0)


class ThetaEngine:
    """Precomputed lattice data at a point; evaluates components at any tau."""

    def __init__(self, lattice: Lattice, point: GrassmannPoint, kernel: Kernel,
                 radius: float, rep: WeilRep | None = None):
        self.lattice = lattice
        self.point = point
        self.kernel = kernel
        self.radius = float(radius)
        self.rep = rep or WeilRep(lattice)
        disc = self.rep.disc
        self.cosets = disc.elements
        vec_rows = []
        self.coset_idx = []
        self.qvals = []
        for ci, h in enumerate(self.cosets):
            for vec in enumerate_coset(lattice, h, point, self.radius):
                vec_rows.append([float(x) for x in vec])
                self.coset_idx.append(ci)
                self.qvals.append(lattice.q_value(vec))
        self.nvec = len(vec_rows)
        n = lattice.rank
        arr = np.array(vec_rows, dtype=float) if vec_rows else np.zeros((0, n))
        self.coset_idx = np.array(self.coset_idx, dtype=int)
        self.qfloat = np.array([float(q) for q in self.qvals])
        self.xi = (point._inv @ arr.T).T if n else np.zeros((len(vec_rows), 0))
        self.maj = np.sum(self.xi ** 2, axis=1)
        self.qneg = -0.5 * np.sum(self.xi[:, self.point.p:] ** 2, axis=1)
        # per-word monomial tables
        self.word_terms = {}
        for word, terms in kernel.components.items():
            rows = []
            for deg, exp, coeff in terms:
                mono = np.ones(self.nvec)
                for j, e in enumerate(exp):
                    if e:
                        mono = mono * self.xi[:, j] ** e
                rows.append((deg, coeff, mono))
            self.word_terms[word] = rows

    def tail_bound(self, v: float) -> float:
        """Gaussian-comparison tail bound at the enumeration radius, x10 safety."""
        n = max(self.lattice.rank, 1)
        det_m = abs(np.linalg.det(self.point.majorant())) if self.lattice.rank else 1.0
        ball = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
        count_scale = ball / math.sqrt(max(det_m, 1e-300)) * (2.0 ** n)
        r = self.radius
        poly = (1.0 + v * r) ** (self.kernel.max_degree / 2.0)
        envelope = self.kernel.coeff_scale * count_scale * (1.0 + r) ** (n / 2.0)
        return 10.0 * envelope * poly * math.exp(-math.pi * v * r) * (1.0 + 1.0 / (math.pi * v))

    def components(self, tau: complex) -> dict:
        """(hkey, word) -> complex, including the v-power prefактор."""
        u, v = tau.real, tau.imag
        if v <= 0:
            raise ValueError("tau must lie in the upper half plane")
        phase = np.exp((2j * math.pi * u) * self.qfloat - (math.pi * v) * self.maj)
        out = {}
        vp = v ** self.kernel.v_power
        for word, rows in self.word_terms.items():
            pol = np.zeros(self.nvec, dtype=complex)
            for deg, coeff, mono in rows:
                pol += coeff * (v ** (deg / 2.0)) * mono
            vals = pol * phase
            per_coset = np.zeros(len(self.cosets), dtype=complex)
            np.add.at(per_coset, self.coset_idx, vals)
            for ci, h in enumerate(self.cosets):
                out[(h, word)] = vp * per_coset[ci]
        return out

    def lowered_components(self, tau: complex) -> dict:
        """Termwise lowering operator L_w applied to the theta function.

        L = -2 i v^2 d/dtau-bar acts on each lattice term; with the v-power
        prefactor v^a (a = kernel v_power) the product rule gives
        L[v^a T] = v^a (a v T + v^2 dT/dv + ...); here we differentiate the
        full term analytically.
        """
        u, v = tau.real, tau.imag
        phase = np.exp((2j * math.pi * u) * self.qfloat - (math.pi * v) * self.maj)
        a = self.kernel.v_power
        out = {}
        for word, rows in self.word_terms.items():
            pol = np.zeros(self.nvec, dtype=complex)
            dpol = np.zeros(self.nvec, dtype=complex)
            for deg, coeff, mono in rows:
                pol += coeff * (v ** (deg / 2.0)) * mono
                dpol += coeff * (deg / 2.0) * (v ** (deg / 2.0 - 1.0)) * mono
            # L[v^a P(sqrt v xi) e(q u) e^{-pi v maj}]
            #   = v^a [ (a/v) P + dP/dv + (2 pi q - pi maj) P ] v^2 e-factors
            bracket = (a / v) * pol + dpol + \
                (2.0 * math.pi * self.qfloat - math.pi * self.maj) * pol
            vals = (v ** a) * (v ** 2) * bracket * phase
            per_coset = np.zeros(len(self.cosets), dtype=complex)
            np.add.at(per_coset, self.coset_idx, vals)
            for ci, h in enumerate(self.cosets):
                out[(h, word)] = per_coset[ci]
        return out


def choose_radius(lattice: Lattice, point: GrassmannPoint, kernel: Kernel,
                  tol: float, v_min: float, radius_cap: float = 4000.0) -> float:
    """Smallest radius whose tail bound is below tol/10 at the given v."""
    n = max(lattice.rank, 1)
    r = max(4.0, (math.log(10.0 / tol) + 5.0) / (math.pi * v_min))
    for _ in range(80):
        probe = ThetaEngineBound(lattice, point, kernel, r)
        if probe.tail_bound(v_min) <= tol / 10.0:
            return r
        r *= 1.25
        if r > radius_cap:
            raise ValueError("tolerance %g requires enumeration radius beyond the cap" % tol)
    return r


class ThetaEngineBound:
    """Radius-only stand-in so choose_radius avoids full enumeration."""

    def __init__(self, lattice, point, kernel, radius):
        self.lattice = lattice
        self.point = point
        self.kernel = kernel
        self.radius = radius

    tail_bound = ThetaEngine.tail_bound


def theta_eval(kernel_name, tau: complex, point: GrassmannPoint, tol: float = 1e-8,
               lattice: Lattice | None = None, kernel: Kernel | None = None,
               rep: WeilRep | None = None) -> ThetaValue:
    """Evaluate the theta series attached to a named or explicit kernel."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if kernel is None:
        kernel = builtin_kernel(kernel_name, p, q)
    v = tau.imag
    radius = choose_radius(lattice, point, kernel, tol, v)
    engine = ThetaEngine(lattice, point, kernel, radius, rep=rep)
    comps = engine.components(tau)
    rep_dim = len(engine.cosets)
    return ThetaValue(comps, engine.tail_bound(v), kernel.weight, rep_dim)


def modularity_residual(kernel_name, tau: complex, point: GrassmannPoint,
                        generator: str, tol: float = 1e-10,
                        lattice: Lattice | None = None) -> float:
    """Max-norm residual of the T- or S-transformation at tau."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if lattice.rank == 0:
        return 0.0
    kernel = builtin_kernel(kernel_name, p, q)
    rep = WeilRep(lattice)
    if generator == "T":
        tau2 = tau + 1
    elif generator == "S":
        tau2 = -1 / tau
    else:
        raise ValueError("generator must be S or T")
    v_min = min(tau.imag, tau2.imag)
    radius = choose_radius(lattice, point, kernel, tol, v_min)
    engine = ThetaEngine(lattice, point, kernel, radius, rep=rep)
    base = engine.components(tau)
    moved = engine.components(tau2)
    disc = rep.disc
    words = kernel.words()
    if generator == "T":
        mat = rep.gen_t()
        factor = 1.0 + 0j
    else:
        mat = rep.gen_s()
        w = float(kernel.weight)
        factor = cmath.exp(0.5j * math.pi * w) * cmath.exp(w * cmath.log(-1j * tau))
    worst = 0.0
    for word in words:
        vec = np.array([base[(h, word)] for h in disc.elements])
        got = np.array([moved[(h, word)] for h in disc.elements])
        want = factor * (mat @ vec)
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


def lowering_theta_check(tau: complex, point: GrassmannPoint, tol: float = 1e-8,
                         lattice: Lattice | None = None) -> float:
    """Residual of L_{kappa} Theta(phi_KM) = -Theta(ddc phi_0), two code paths."""
    lattice = lattice or point.lattice
    p, q = lattice.signature
    if q != 2:
        raise ValueError("lowering check requires q = 2")
    km = builtin_kernel("phikm", p, q)
    dd = builtin_kernel("ddcphi0", p, q)
    v = tau.imag
    radius = max(choose_radius(lattice, point, km, tol, v),
                 choose_radius(lattice, point, dd, tol, v))
    rep = WeilRep(lattice)
    km_eng = ThetaEngine(lattice, point, km, radius, rep=rep)
    dd_eng = ThetaEngine(lattice, point, dd, radius, rep=rep)
    lhs = km_eng.lowered_components(tau)
    rhs = dd_eng.components(tau)
    worst = 0.0
    for key, val in rhs.items():
        worst = max(worst, abs(lhs.get(key, 0.0) + val))
    return worst


def lowering_term_residual(lattice: Lattice, point: GrassmannPoint, vec,
                           tau: complex) -> float:
    """Single-lambda version of the lowering identity (exact Schwartz identity)."""
    p, q = lattice.signature
    km = builtin_kernel("phikm", p, q)
    dd = builtin_kernel("ddcphi0", p, q)
    u, v = tau.real, tau.imag
    xi = point.coords([float(Fraction(x)) for x in vec])
    qv = float(lattice.q_value(vec))
    maj = float(np.dot(xi, xi))
    phase = cmath.exp(2j * math.pi * qv * u - math.pi * v * maj)
    worst = 0.0
    words = set(km.components) | set(dd.components)
    for word in words:
        pol = 0j
        dpol = 0j
        for deg, exp, coeff in km.components.get(word, []):
            mono = 1.0
            for j, e in enumerate(exp):
                if e:
                    mono *= xi[j] ** e
            pol += coeff * v ** (deg / 2.0) * mono
            dpol += coeff * (deg / 2.0) * v ** (deg / 2.0 - 1.0) * mono
        lhs = (v ** 2) * (dpol + (2 * math.pi * qv - math.pi * maj) * pol) * phase
        rhs = 0j
        for deg, exp, coeff in dd.components.get(word, []):
            mono = 1.0
            for j, e in enumerate(exp):
                if e:
                    mono *= xi[j] ** e
            rhs += coeff * v ** (deg / 2.0) * mono
        rhs *= v * phase
        worst = max(worst, abs(lhs + rhs))
    return worst
