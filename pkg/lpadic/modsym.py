"""
Weight-k modular symbols for Gamma0(N) in the Manin symbol presentation.

A Manin symbol (i, c, d) stands for [X^i Y^(k-2-i), (c:d)] = g(P{0, oo}) with g in SL2(Z) having
bottom row (c, d), where SL2 acts on polynomials by (gP)(X, Y) = P(dX - bY, -cX + aY). Matrices act
on symbols from the right by [P, (c, d)] * g = [P(aX + bY, cX + dY), (c, d) g]; Hecke operators are
sums of such actions over Merel's matrices. The star involution is [P(-X, Y), (-c, d)], whose +1
eigenspace carries the real part of 2 pi i int f(z) P(z) dz.
"""

import logging
import math
from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from sympy import Matrix, SparseMatrix, eye, zeros

from lpadic.errors import DomainError, NotNewformError, ResourceError
from lpadic.helpers import content, convergents, gcdex, is_prime, primes_up_to
from lpadic.linalg import clear_denominators, integer_kernel, left_kernel, rational_eigenvalues, to_fraction

log = logging.getLogger(__name__)

MAX_SYMBOLS = 4000

Cusp = Fraction | None  # None is the cusp at infinity


def lift_unit(n: int, d: int, a: int) -> int:
    """Given a divisor d of n and a unit a modulo d, lift a to a unit modulo n."""
    u, v = 1, n
    g = math.gcd(v, d)
    while g > 1:
        u *= g
        v //= g
        g = math.gcd(v, g)
    x, y, _ = gcdex(u, v)
    return (u * x + a * y * v) % n


class P1:
    """
    Representatives of P^1(Z/NZ), each (c, d) coprime as integers.
    """

    def __init__(self, N: int):
        if N < 1:
            raise DomainError(f"level must be positive, got {N}")
        self.N = N
        reps = set()
        for u in range(N):
            for v in range(N):
                try:
                    reps.add(self.reduce((u, v)))
                except ValueError:
                    continue
        self._list = sorted(reps)

    def __len__(self):
        return len(self._list)

    def __getitem__(self, i):
        return self._list[i]

    def __iter__(self):
        return iter(self._list)

    def reduce(self, pair: tuple[int, int]) -> tuple[int, int]:
        """
        Canonical representative of (u : v); ValueError if the pair is not in P^1(Z/NZ).
        """
        N = self.N
        u, v = pair[0] % N, pair[1] % N
        if N == 1:
            return 0, 1
        if u == 0:
            if math.gcd(N, v) == 1:
                return 0, 1
            raise ValueError(pair)
        _, s, g = gcdex(N, u)
        if math.gcd(g, v) > 1:
            raise ValueError(pair)
        s = lift_unit(N, N // g, s)
        u, v = g, (s * v) % N
        if g == 1:
            return 1, v
        v = min((v * t) % N for t in range(1, N, N // g) if math.gcd(N, t) == 1)
        return g, v

    def index(self, pair: tuple[int, int]) -> int:
        p0 = self.reduce(pair)
        i = bisect_left(self._list, p0)
        if i != len(self._list) and self._list[i] == p0:
            return i
        raise ValueError(pair)


def substitute(q: list, a: int, b: int, c: int, d: int) -> list:
    """
    Coefficients (of X^i Y^(w-i)) of Q(aX + bY, cX + dY).
    """
    w = len(q) - 1
    out = [0] * (w + 1)
    for i, coeff in enumerate(q):
        if coeff == 0:
            continue
        for u in range(i + 1):
            left = math.comb(i, u) * a**u * b ** (i - u)
            if left == 0:
                continue
            for v in range(w - i + 1):
                out[u + v] += coeff * left * math.comb(w - i, v) * c**v * d ** (w - i - v)
    return out


def merel(n: int):
    """The matrices (a, b, c, d) in Merel's set X_n."""
    for a in range(1, n + 1):
        for d in range((n + a - 1) // a, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    yield a, b, 0, d
                for c in range(1, d):
                    yield a, 0, c, d
            else:
                for b in range((bc - 1) // (d - 1) + 1, a):
                    if bc % b == 0:
                        yield a, b, bc // b, d


def unimodular_path(r: Fraction) -> list[tuple[int, int, int, int]]:
    """
    Matrices g_j in SL2(Z) with {0, r} = sum_j g_j{0, oo}, from the convergents of r.
    """
    conv = convergents(r)
    mats = []
    for idx in range(1, len(conv)):
        (p0, q0), (p1, q1) = conv[idx - 1], conv[idx]
        sign = 1 if idx % 2 else -1
        mats.append((sign * p1, p0, sign * q1, q0))
    return mats


class BoundarySymbols:
    def __init__(self, N: int):
        self.N = N
        self._list: list[tuple[int, int]] = []

    def __len__(self):
        return len(self._list)

    def is_equiv(self, p, q) -> bool:
        u1, v1 = p
        u2, v2 = q
        s1 = gcdex(u1, v1)[0]
        s2 = gcdex(u2, v2)[0]
        return (s1 * v2 - s2 * v1) % math.gcd(self.N, (v1 * v2) % self.N) == 0

    def index(self, p) -> int:
        for i, c in enumerate(self._list):
            if self.is_equiv(p, c):
                return i
        self._list.append(p)
        return len(self._list) - 1


class ModularSymbolSpace:
    """
    M_k(Gamma0(N)) over Q: Manin symbols modulo the 2- and 3-term relations.
    """

    def __init__(self, N: int, k: int, max_symbols: int = MAX_SYMBOLS):
        if k < 2 or k % 2:
            raise DomainError(f"weight must be even and at least 2, got {k}")
        self.N = N
        self.k = k
        self.p1 = P1(N)
        self.symbols = [(i, c, d) for i in range(k - 1) for c, d in self.p1]
        n = len(self.symbols)
        if n > max_symbols:
            raise ResourceError(f"{n} Manin symbols exceed the bound {max_symbols}")

        mat = SparseMatrix(2 * n, n, {})
        for row, (i, c, d) in enumerate(self.symbols):
            mat[row, self.index((i, c, d))] += 1
            mat[row, self.index((k - 2 - i, d, -c))] += (-1) ** i
            mat[row + n, self.index((i, c, d))] += 1
            for j in range(k - 2 - i + 1):
                mat[row + n, self.index((j, d, -c - d))] += (-1) ** (k - 2 + j) * math.comb(k - 2 - i, j)
            for j in range(i + 1):
                mat[row + n, self.index((k - 2 - i + j, -c - d, c))] += (-1) ** (k - 2 - i + j) * math.comb(i, j)

        mat, piv = mat.rref()
        self.free = tuple(j for j in range(n) if j not in piv)
        # rel[:, s] expresses symbol s in the free generators
        self.rel = zeros(len(self.free), n)
        for e, col in enumerate(piv):
            for row, j in enumerate(self.free):
                self.rel[row, col] = -mat[e, j]
        for row, col in enumerate(self.free):
            self.rel[row, col] = 1
        self._hecke: dict[int, Matrix] = {}
        log.debug(f"M_{k}(Gamma0({N})): {n} Manin symbols, dimension {self.dim}")

    @property
    def weight(self) -> int:
        return self.k - 2

    @property
    def dim(self) -> int:
        return len(self.free)

    def index(self, sym: tuple[int, int, int]) -> int:
        i, c, d = sym
        return i * len(self.p1) + self.p1.index((c, d))

    def reduce(self, vec: dict[int, Fraction]) -> Matrix:
        """
        Coordinates in the free generators of a combination of Manin symbols.
        """
        out = zeros(self.dim, 1)
        for s, coeff in vec.items():
            if coeff:
                out += self.rel[:, s] * coeff
        return out

    def right_action_matrix(self, g: tuple[int, int, int, int]) -> Matrix:
        """
        Matrix (columns are images of the free generators) of x -> x * g.
        """
        a, b, c0, d0 = g
        k, N = self.k, self.N
        ans = SparseMatrix(len(self.symbols), self.dim, {})
        for col, idx in enumerate(self.free):
            i, c, d = self.symbols[idx]
            c1 = (a * c + c0 * d) % N
            d1 = (b * c + d0 * d) % N
            if math.gcd(N, math.gcd(c1, d1)) > 1:
                continue
            mono = [0] * (k - 1)
            mono[i] = 1
            for j, coeff in enumerate(substitute(mono, a, b, c0, d0)):
                if coeff:
                    ans[self.index((j, c1, d1)), col] += coeff
        return self.rel * ans

    def hecke_operator(self, q: int) -> Matrix:
        if q not in self._hecke:
            t = zeros(self.dim, self.dim)
            for g in merel(q):
                t += self.right_action_matrix(g)
            self._hecke[q] = t
            log.debug(f"T_{q} on M_{self.k}(Gamma0({self.N})) computed")
        return self._hecke[q]

    def star_image(self, s: int) -> tuple[int, int]:
        i, c, d = self.symbols[s]
        return self.index((i, -c, d)), (-1) ** i

    @cached_property
    def star_matrix(self) -> Matrix:
        out = zeros(self.dim, self.dim)
        for col, s in enumerate(self.free):
            t, sign = self.star_image(s)
            out[:, col] = self.rel[:, t] * sign
        return out

    @cached_property
    def boundary(self) -> tuple[BoundarySymbols, Matrix]:
        """
        Boundary map on all Manin symbols (one column per symbol).
        """
        bsym = BoundarySymbols(self.N)
        entries: dict[tuple[int, int], int] = defaultdict(int)
        w = self.weight
        for col, (i, c, d) in enumerate(self.symbols):
            a, b, g = gcdex(d, -c)
            if g != 1:
                raise DomainError(f"symbol {(c, d)} is not a coprime pair")
            if i == w:
                entries[(bsym.index((a, c)), col)] += 1
            if i == 0:
                entries[(bsym.index((b, d)), col)] -= 1
        return bsym, SparseMatrix(max(len(bsym), 1), len(self.symbols), dict(entries))

    def boundary_matrix(self) -> Matrix:
        _, full = self.boundary
        return full.extract(list(range(full.rows)), list(self.free))

    def subspace(self, sign: int = 0, cuspidal: bool = False) -> Matrix:
        """
        Basis (as columns) of the star eigenspace for sign +1/-1 (whole space for 0), optionally cuspidal.
        """
        blocks = []
        if cuspidal:
            blocks.append(self.boundary_matrix())
        if sign:
            blocks.append(self.star_matrix - sign * eye(self.dim))
        if not blocks:
            return eye(self.dim)
        basis = Matrix.vstack(*blocks).nullspace()
        if not basis:
            return zeros(self.dim, 0)
        return Matrix.hstack(*basis)

    def cuspidal_dimension(self, sign: int = 0) -> int:
        return self.subspace(sign, cuspidal=True).cols

    def path_vector(self, q: list, alpha: Cusp, beta: Cusp) -> dict[int, Fraction]:
        """
        Q{alpha, beta} as a combination of Manin symbols; Q is given by its coefficients of X^i Y^(k-2-i).
        """
        vec: dict[int, Fraction] = defaultdict(Fraction)
        for sign, r in ((1, beta), (-1, alpha)):
            for s, coeff in self._from_zero(q, r).items():
                vec[s] += sign * coeff
        return {s: c for s, c in vec.items() if c}

    def _from_zero(self, q: list, r: Cusp) -> dict[int, Fraction]:
        # {0, oo} = [Q, (0, 1)]
        out: dict[int, Fraction] = defaultdict(Fraction)
        mats = [(1, 0, 0, 1)] if r is None else unimodular_path(Fraction(r))
        for a, b, c, d in mats:
            for i, coeff in enumerate(substitute(q, a, b, c, d)):
                if coeff:
                    out[self.index((i, c, d))] += coeff
        return out

    def fricke_matrix(self) -> Matrix:
        """
        W_N = (0 -1; N 0), scaled by N^(-(k-2)/2) so that it is an involution.
        """
        N, w = self.N, self.weight
        scale = Fraction(1, N ** (w // 2))
        out = zeros(self.dim, self.dim)
        for col, s in enumerate(self.free):
            i, c, d = self.symbols[s]
            a, b, _ = gcdex(d, -c)
            mono = [0] * (w + 1)
            mono[i] = 1
            gp = substitute(mono, d, -b, -c, a)
            wp = substitute(gp, 0, 1, -N, 0)
            vec = self.path_vector(wp, _fricke_cusp(b, d, N), _fricke_cusp(a, c, N))
            out[:, col] = self.reduce({t: x * scale for t, x in vec.items()})
        return out


def _fricke_cusp(num: int, den: int, N: int) -> Cusp:
    # image of num/den under z -> -1/(N z)
    if den == 0:
        return Fraction(0)
    if num == 0:
        return None
    return Fraction(-den, N * num)


def build_space(N: int, k: int, max_symbols: int = MAX_SYMBOLS) -> ModularSymbolSpace:
    return ModularSymbolSpace(N, k, max_symbols)


def hecke_operator(space: ModularSymbolSpace, q: int) -> Matrix:
    if not is_prime(q):
        raise DomainError(f"{q} is not a prime")
    return space.hecke_operator(q)


@dataclass
class EigenSymbol:
    """
    The eigen-functional phi^sign attached to a rational newform, stored through its value on every
    Manin symbol. Values are normalized to content 1 on the integral cuspidal sign-part.
    """

    N: int
    k: int
    sign: int
    eigenvalues: dict[int, int | Fraction]
    values: list[Fraction]
    eps: int = 1
    p1: P1 = field(init=False, repr=False)

    def __post_init__(self):
        self.p1 = P1(self.N)

    def index(self, sym: tuple[int, int, int]) -> int:
        i, c, d = sym
        return i * len(self.p1) + self.p1.index((c, d))

    def _path(self, q: list, r: Cusp) -> Fraction:
        total = Fraction(0)
        mats = [(1, 0, 0, 1)] if r is None else unimodular_path(Fraction(r))
        for a, b, c, d in mats:
            for i, coeff in enumerate(substitute(q, a, b, c, d)):
                if coeff:
                    total += coeff * self.values[self.index((i, c, d))]
        return total

    def value(self, q: list, alpha: Cusp, beta: Cusp) -> Fraction:
        """
        phi(Q{alpha, beta}) for a homogeneous Q of degree k-2.
        """
        if len(q) != self.k - 1:
            raise DomainError(f"polynomial of degree {len(q) - 1} is not homogeneous of degree {self.k - 2}")
        return self._path(q, beta) - self._path(q, alpha)

    def lambda_value(self, poly: list, a: int, m: int) -> Fraction:
        return lambda_value(self, poly, a, m)

    def a(self, q: int):
        return self.eigenvalues[q]

    def to_json(self, grid: list[tuple[int, int]] = ()) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "eps": self.eps,
            "sign": self.sign,
            "a_q": {str(q): str(v) for q, v in sorted(self.eigenvalues.items())},
            "symbol_values": [str(v) for v in self.values],
            "values": [{"a": a, "m": m, "value": str(self.lambda_value([1], a, m))} for a, m in grid],
        }

    @staticmethod
    def from_json(doc: dict) -> "EigenSymbol":
        return EigenSymbol(
            doc["N"],
            doc["k"],
            doc["sign"],
            {int(q): Fraction(v) for q, v in doc["a_q"].items()},
            [Fraction(v) for v in doc["symbol_values"]],
            doc.get("eps", 1),
        )


def homogenize_shift(poly: list, a: int, m: int, w: int) -> list:
    """
    Coefficients of sum_i poly[i] (mX + aY)^i Y^(w-i), the homogenization of P(mz + a).
    """
    if len(poly) - 1 > w:
        raise DomainError(f"degree {len(poly) - 1} exceeds k-2 = {w}")
    out = [0] * (w + 1)
    for i, coeff in enumerate(poly):
        if coeff == 0:
            continue
        for u in range(i + 1):
            out[u] += coeff * math.comb(i, u) * m**u * a ** (i - u)
    return out


def lambda_value(phi: EigenSymbol, poly: list, a: int, m: int) -> Fraction:
    """
    lambda^sign(f, P, a, m) = phi^sign(P(mz + a){oo, -a/m}); P is given by its coefficients in z.
    """
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    q = homogenize_shift(poly, a, m, phi.k - 2)
    return phi.value(q, None, Fraction(-a, m))


def _functional_values(space: ModularSymbolSpace, v: list[Fraction]) -> list[Fraction]:
    row = Matrix([v])
    return [to_fraction(x) for x in row * space.rel]


def _normalize(space: ModularSymbolSpace, values: list[Fraction], sign: int) -> list[Fraction]:
    # content 1 on integral cycles with zero boundary that the star fixes up to `sign`
    n = len(space.symbols)
    rows = []
    for r in range(space.dim):
        row = []
        for s in range(n):
            t, st = space.star_image(s)
            row.append(to_fraction(space.rel[r, t]) * st - sign * to_fraction(space.rel[r, s]))
        rows.append(clear_denominators(row))
    _, bmat = space.boundary
    rows += [[int(bmat[r, s]) for s in range(n)] for r in range(bmat.rows)]
    lattice = integer_kernel(rows, n)
    c = content(sum(x * values[s] for s, x in enumerate(vec) if x) for vec in lattice)
    if c == 0:
        raise NotNewformError("eigen-functional vanishes on the integral cuspidal lattice")
    values = [v / c for v in values]
    base = -values[space.index((0, 0, 1))]  # phi(1{oo, 0})
    lead = base if base else next((v for v in values if v), Fraction(1))
    if lead < 0:
        values = [-v for v in values]
    return values


def eigen_symbol(space: ModularSymbolSpace, sign: int, eigenvalues: dict[int, int | Fraction]) -> EigenSymbol:
    """
    The functional phi with phi T_q = a_q phi for the given eigenvalues and phi star = sign phi.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    blocks = [(space.star_matrix - sign * eye(space.dim)).T]
    for q, a_q in sorted(eigenvalues.items()):
        blocks.append((space.hecke_operator(q) - a_q * eye(space.dim)).T)
    kernel = left_kernel(Matrix.vstack(*blocks).T)
    if len(kernel) != 1:
        raise NotNewformError(f"eigenspace for {eigenvalues} with sign {sign} has dimension {len(kernel)}")
    values = _normalize(space, _functional_values(space, kernel[0]), sign)
    log.info(f"eigen-symbol for N={space.N}, k={space.k}, sign={sign}")
    return EigenSymbol(space.N, space.k, sign, dict(eigenvalues), values)


def rational_eigensystems(space: ModularSymbolSpace, sign: int, bound: int) -> list[dict[int, Fraction]]:
    """
    Systems of rational Hecke eigenvalues (q <= bound, q prime to N) cutting out one-dimensional pieces of
    the cuspidal sign-part.
    """
    basis = space.subspace(sign, cuspidal=True)
    if basis.cols == 0:
        return []
    pieces = [(basis, {})]
    for q in primes_up_to(bound):
        if space.N % q == 0:
            continue
        t = space.hecke_operator(q)
        refined = []
        for sub, system in pieces:
            restricted, _ = sub.gauss_jordan_solve(t * sub)
            for a_q in rational_eigenvalues(restricted):
                eig = (restricted - a_q * eye(restricted.rows)).nullspace()
                if eig:
                    refined.append((sub * Matrix.hstack(*eig), {**system, q: a_q}))
        pieces = refined
    return [system for sub, system in pieces if sub.cols == 1]
