"""Finite quadratic modules and the Weil representation.

An even lattice L with Gram matrix G determines the discriminant group
A = L#/L together with the Q/Z-valued quadratic form q(h) = h^T G h / 2 and
bilinear form b(h,h') = h^T G h'.  The metaplectic modular group acts on the
group algebra C[A] through the two generator matrices

    rho(T) = diag(e(q(h))),
    rho(S)_{h,h'} = sqrt(i)^(p-q) |A|^{-1/2} e(-b(h,h')),

and the dual representation (attached to the sign-flipped lattice) is the
entrywise complex conjugate.  Group elements are handled as words in S and T,
canonicalised from integer matrices by the continued-fraction algorithm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .special import root_of_unity


class LatticeError(ValueError):
    pass


def smith_normal_form(mat):
    """Smith normal form of an integer matrix.

    Returns (d, U, V) with U * mat * V = diag(d), U, V unimodular and
    d_1 | d_2 | ... (nonnegative).  Plain integer row/column reduction;
    fine for the desk-scale matrices that occur here.
    """
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    m = len(a[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        for k in range(m):
            a[dst][k] += c * a[src][k]
        for k in range(n):
            u[dst][k] += c * u[src][k]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(n, m):
        # find a nonzero pivot in the remaining block
        pivot = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] != 0:
                    if pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
        # enforce divisibility of later entries by a[t][t]
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, t, 1)
            continue
        if a[t][t] < 0:
            for k in range(m):
                a[t][k] = -a[t][k]
            for k in range(n):
                u[t][k] = -u[t][k]
        t += 1
    d = [a[i][i] for i in range(min(n, m))]
    return d, u, v


@dataclass(frozen=True)
class Lattice:
    """An even nondegenerate integral lattice given by its Gram matrix."""

    gram: tuple
    name: str = ""

    def __post_init__(self):
        g = [list(map(int, row)) for row in self.gram]
        n = len(g)
        for i, row in enumerate(g):
            if len(row) != n:
                raise LatticeError("gram matrix not square")
            if row[i] % 2:
                raise LatticeError("lattice not even")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix not symmetric")
        object.__setattr__(self, "gram", tuple(tuple(row) for row in g))
        if n and abs(_int_det(g)) == 0:
            raise LatticeError("singular lattice")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return _int_det([list(r) for r in self.gram])

    @property
    def signature(self):
        """(p, q) = numbers of positive/negative eigenvalues of the Gram matrix."""
        if not self.rank:
            return (0, 0)
        eig = np.linalg.eigvalsh(np.array(self.gram, dtype=float))
        p = int(np.sum(eig > 0))
        q = int(np.sum(eig < 0))
        if p + q != self.rank:
            raise LatticeError("singular lattice")
        return (p, q)

    def gram_fraction(self):
        return [[Fraction(x) for x in row] for row in self.gram]

    def q_value(self, vec) -> Fraction:
        """q(v) = (v, v)/2 for a rational vector in lattice coordinates."""
        v = [Fraction(x) for x in vec]
        tot = Fraction(0)
        for i, gi in enumerate(self.gram):
            for j, gij in enumerate(gi):
                tot += v[i] * gij * v[j]
        return tot / 2

    def bilinear(self, x, y) -> Fraction:
        xs = [Fraction(t) for t in x]
        ys = [Fraction(t) for t in y]
        tot = Fraction(0)
        for i, gi in enumerate(self.gram):
            for j, gij in enumerate(gi):
                tot += xs[i] * gij * ys[j]
        return tot


def _int_det(mat) -> int:
    n = len(mat)
    if n == 0:
        return 1
    # fraction-free Gaussian elimination (Bareiss)
    a = [[int(x) for x in row] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


_EAGER_LIMIT = 10 ** 6


class DiscriminantForm:
    """The finite quadratic module L#/L with its q- and b-values."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        n = lattice.rank
        if n == 0:
            self.divisors = ()
            self.order = 1
            self.elements = [()]
            self._index = {(): 0}
            self.level = 1
            return
        d, _u, v = smith_normal_form([list(r) for r in lattice.gram])
        if any(x == 0 for x in d):
            raise LatticeError("singular lattice")
        self.order = abs(lattice.det)
        if self.order > _EAGER_LIMIT:
            raise LatticeError(
                "discriminant group of order %d exceeds the eager limit" % self.order
            )
        # columns of V * diag(1/d) generate L#/L in lattice coordinates
        self._gens = []
        divs = []
        for j, dj in enumerate(d):
            if dj > 1:
                divs.append(dj)
                self._gens.append(tuple(Fraction(v[i][j], dj) % 1 for i in range(n)))
        self.divisors = tuple(divs)
        self.elements = []
        self._index = {}
        for combo in _mixed_radix(self.divisors):
            vec = [Fraction(0)] * n
            for g, c in zip(self._gens, combo):
                for i in range(n):
                    vec[i] = (vec[i] + c * g[i]) % 1
            key = tuple(vec)
            self._index[key] = len(self.elements)
            self.elements.append(key)
        assert len(self.elements) == self.order
        lev = 1
        for h in self.elements:
            lev = lcm(lev, (self.q(h) % 1).denominator)
        self.level = lev

    def reduce(self, vec):
        """Canonical representative of a rational vector mod Z^n."""
        return tuple(Fraction(x) % 1 for x in vec)

    def index(self, h) -> int:
        key = self.reduce(h)
        if key not in self._index:
            raise LatticeError("vector %r is not in the dual lattice" % (h,))
        return self._index[key]

    def q(self, h) -> Fraction:
        return self.lattice.q_value(h) % 1

    def b(self, h, k) -> Fraction:
        return self.lattice.bilinear(h, k) % 1

    def neg(self, h):
        return tuple((-Fraction(x)) % 1 for x in h)

    def divisor_coords(self, h):
        """Coordinates of h with respect to the elementary-divisor generators."""
        idx = self.index(h)
        coords = []
        for dj in reversed(self.divisors):
            coords.append(idx % dj)
            idx //= dj
        return tuple(reversed(coords))

    def from_divisor_coords(self, coords):
        if len(coords) != len(self.divisors):
            raise LatticeError("expected %d coordinates" % len(self.divisors))
        idx = 0
        for dj, c in zip(self.divisors, coords):
            idx = idx * dj + (int(c) % dj)
        return self.elements[idx]

    def report(self) -> dict:
        return {
            "invariants": list(self.divisors),
            "order": self.order,
            "level": self.level,
            "q_table": [
                {
                    "h": list(self.divisor_coords(h)),
                    "q": str(self.q(h)),
                }
                for h in self.elements
            ],
        }


def _mixed_radix(divisors):
    if not divisors:
        yield ()
        return
    head, tail = divisors[0], divisors[1:]
    for c in range(head):
        for rest in _mixed_radix(tail):
            yield (c,) + rest


def discriminant_group(lattice: Lattice) -> DiscriminantForm:
    return DiscriminantForm(lattice)


class WeilRep:
    """Action of the metaplectic group on C[L#/L] via the generator matrices."""

    def __init__(self, lattice: Lattice, dual: bool = False):
        self.lattice = lattice
        self.disc = discriminant_group(lattice)
        self.dual = bool(dual)
        p, q = lattice.signature
        self.signature_mod8 = (p - q) % 8

    @property
    def dim(self) -> int:
        return self.disc.order

    def conjugate(self) -> "WeilRep":
        return WeilRep(self.lattice, dual=not self.dual)

    def _phase(self, x: Fraction) -> complex:
        z = root_of_unity(x)
        return z.conjugate() if self.dual else z

    def gen_t(self) -> np.ndarray:
        d = self.disc
        diag = [self._phase(d.q(h)) for h in d.elements]
        return np.diag(np.array(diag, dtype=complex))

    def gen_s(self) -> np.ndarray:
        # Gauss-sum prefactor sqrt(i)^(q-p): with rho(T) = diag(e(q(h))) this
        # is the unique phase satisfying (ST)^3 = S^2, and it matches the
        # transformation of the attached theta series under tau -> -1/tau.
        d = self.disc
        n = d.order
        p, q = self.lattice.signature
        front = self._phase(Fraction(q - p, 8))
        mat = np.empty((n, n), dtype=complex)
        for i, h in enumerate(d.elements):
            for j, k in enumerate(d.elements):
                mat[i, j] = self._phase(-d.b(h, k))
        return front / np.sqrt(n) * mat

    def generator(self, name: str) -> np.ndarray:
        if name == "T":
            return self.gen_t()
        if name == "S":
            return self.gen_s()
        raise ValueError("unknown generator %r" % name)

    def element(self, word: "MetaplecticWord") -> np.ndarray:
        s = self.gen_s()
        t = self.gen_t()
        out = np.eye(self.dim, dtype=complex)
        for gen, exp in word.factors:
            base = s if gen == "S" else t
            if exp < 0:
                base = base.conj().T  # unitary inverse
                exp = -exp
            for _ in range(exp):
                out = out @ base
        return out

    def neg_permutation(self) -> np.ndarray:
        """Permutation matrix of e_h -> e_{-h}."""
        d = self.disc
        mat = np.zeros((d.order, d.order))
        for i, h in enumerate(d.elements):
            mat[d.index(d.neg(h)), i] = 1.0
        return mat


@dataclass(frozen=True)
class MetaplecticWord:
    """A word in the generators S, T; the matrix it covers is the product."""

    factors: tuple = ()

    def __post_init__(self):
        cleaned = []
        for gen, exp in self.factors:
            if gen not in ("S", "T"):
                raise ValueError("unknown generator %r" % gen)
            exp = int(exp)
            if exp == 0:
                continue
            if cleaned and cleaned[-1][0] == gen:
                prev = cleaned.pop()
                exp += prev[1]
                if exp == 0:
                    continue
            cleaned.append((gen, exp))
        object.__setattr__(self, "factors", tuple(cleaned))

    def __mul__(self, other: "MetaplecticWord") -> "MetaplecticWord":
        return MetaplecticWord(self.factors + other.factors)

    def matrix(self):
        s = ((0, -1), (1, 0))
        out = ((1, 0), (0, 1))
        for gen, exp in self.factors:
            if gen == "T":
                step = ((1, exp), (0, 1))
                out = _mat2_mul(out, step)
            else:
                base = s if exp > 0 else ((0, 1), (-1, 0))
                for _ in range(abs(exp)):
                    out = _mat2_mul(out, base)
        return out

    @staticmethod
    def identity() -> "MetaplecticWord":
        return MetaplecticWord()

    @staticmethod
    def from_matrix(mat, branch: int = 0) -> "MetaplecticWord":
        """Canonical word covering an integer matrix of determinant 1.

        The word's underlying matrix equals `mat` exactly; `branch` = 1 picks
        the other metaplectic lift by appending S^4 (which covers the
        identity matrix).
        """
        a, b = int(mat[0][0]), int(mat[0][1])
        c, d = int(mat[1][0]), int(mat[1][1])
        if a * d - b * c != 1:
            raise ValueError("matrix is not unimodular")
        factors = []
        # peel continued-fraction steps: mat = T^n S * rest
        while c != 0:
            n = a // c
            factors.append(("T", n))
            factors.append(("S", 1))
            # S^{-1} T^{-n} (a b; c d) = (c, d; -(a - n c), -(b - n d))
            a, b, c, d = c, d, -(a - n * c), -(b - n * d)
        # now c == 0, a = d = +-1, matrix is +-T^m
        if a == 1:
            factors.append(("T", b))
        else:
            factors.append(("T", -b))
            factors.append(("S", 2))  # S^2 covers -I
        if branch % 2:
            factors.append(("S", 4))
        word = MetaplecticWord(tuple(factors))
        assert word.matrix() == tuple(map(tuple, [[int(x) for x in row] for row in mat]))
        return word

    @staticmethod
    def random(max_len: int = 12, rng: random.Random | None = None) -> "MetaplecticWord":
        rng = rng or random
        factors = []
        for _ in range(rng.randint(1, max_len)):
            if rng.random() < 0.5:
                factors.append(("S", rng.choice([-1, 1])))
            else:
                factors.append(("T", rng.randint(-3, 3)))
        return MetaplecticWord(tuple(factors))


def _mat2_mul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def weil_generator(rep: WeilRep, gen: str) -> np.ndarray:
    return rep.generator(gen)


def weil_element(rep: WeilRep, word) -> np.ndarray:
    if not isinstance(word, MetaplecticWord):
        word = MetaplecticWord.from_matrix(word)
    return rep.element(word)


# ---------------------------------------------------------------------------
# shipped example lattices

U = Lattice(((0, 1), (1, 0)), name="U")
A1 = Lattice(((2,),), name="[[2]]")
A2 = Lattice(((2, -1), (-1, 2)), name="A2")
UU = Lattice(((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)), name="U+U")
DIAG_2_2_M2 = Lattice(((2, 0, 0), (0, 2, 0), (0, 0, -2)), name="diag(2,2,-2)")
DIAG_2_2_M6 = Lattice(((2, 0, 0), (0, 2, 0), (0, 0, -6)), name="diag(2,2,-6)")

EXAMPLE_LATTICES = (U, A1, A2, UU, DIAG_2_2_M2)
