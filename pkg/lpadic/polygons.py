"""
Newton and Hodge polygons, and the Hecke data of symmetric powers.

Polygons are stored with a vertex at every integer abscissa, so two polygons are equal exactly when
their vertex tuples are.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from lpadic.errors import DomainError
from lpadic.helpers import require_odd_prime, vp

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_slopes(slopes) -> "Polygon":
        y = Fraction(0)
        vertices = [(0, y)]
        for i, s in enumerate(sorted(Fraction(s) for s in slopes)):
            y += s
            vertices.append((i + 1, y))
        return Polygon(tuple(vertices))

    @property
    def slopes(self) -> list[Fraction]:
        return [y1 - y0 for (_, y0), (_, y1) in zip(self.vertices, self.vertices[1:])]

    @property
    def endpoint(self) -> tuple[int, Fraction]:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return self.vertices[-1][0]

    def breakpoints(self) -> list[tuple[int, Fraction]]:
        """
        Vertices where the slope changes, plus both ends.
        """
        s = self.slopes
        inner = [self.vertices[i] for i in range(1, len(s)) if s[i] != s[i - 1]]
        return [self.vertices[0], *inner, self.vertices[-1]] if s else [self.vertices[0]]

    def is_convex(self) -> bool:
        s = self.slopes
        return all(a <= b for a, b in zip(s, s[1:]))

    def to_json(self) -> dict:
        return {
            "vertices": [[x, str(y)] for x, y in self.breakpoints()],
            "slopes": [str(s) for s in self.slopes],
        }


@dataclass
class HodgeData:
    """
    Hodge numbers h(i, j) of a pure structure of weight w (entries (i, j, h) with i + j = w).
    """

    w: int
    numbers: list[tuple[int, int, int]]
    d_plus: int | None = None
    d_minus: int | None = None

    def __post_init__(self):
        for i, j, h in self.numbers:
            if i + j != self.w:
                raise DomainError(f"h({i},{j}) does not have weight {self.w}")
            if h < 0:
                raise DomainError(f"h({i},{j}) = {h} is negative")

    @property
    def rank(self) -> int:
        return sum(h for _, _, h in self.numbers)

    def is_symmetric(self) -> bool:
        table = {(i, j): h for i, j, h in self.numbers}
        return all(table.get((j, i), 0) == h for (i, j), h in table.items())


@dataclass
class HeckePolyData:
    """
    1 + A_1 T + ... + A_d T^d at the prime p.
    """

    p: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        self.coeffs = tuple(Fraction(c) for c in self.coeffs)
        if not self.coeffs or self.coeffs[0] != 1:
            raise DomainError("Hecke polynomials are normalized with constant term 1")

    @property
    def degree(self) -> int:
        nonzero = [i for i, c in enumerate(self.coeffs) if c]
        return nonzero[-1]

    def elementary(self) -> list[Fraction]:
        """
        e_i of the inverse roots, A_i = (-1)^i e_i.
        """
        return [c * (-1) ** i for i, c in enumerate(self.coeffs)]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def _fill(hull: list[tuple[int, Fraction]]) -> Polygon:
    vertices = [hull[0]]
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        s = Fraction(y1 - y0, x1 - x0)
        for x in range(x0 + 1, x1 + 1):
            vertices.append((x, y0 + s * (x - x0)))
    return Polygon(tuple((x, Fraction(y)) for x, y in vertices))


def newton_polygon(poly: HeckePolyData) -> Polygon:
    """
    Lower convex hull of the points (i, v_p(A_i)).
    """
    points = [(i, Fraction(vp(c, poly.p))) for i, c in enumerate(poly.coeffs) if c]
    return _fill(lower_hull(points))


def hodge_polygon(hodge: HodgeData) -> Polygon:
    """
    Slope i repeated h(i, j) times, in increasing order of i.
    """
    slopes = []
    for i, _, h in sorted(hodge.numbers):
        slopes += [i] * h
    return Polygon.from_slopes(slopes)


def is_nearly_ordinary(poly: HeckePolyData | Polygon, hodge: HodgeData) -> bool:
    newton = poly if isinstance(poly, Polygon) else newton_polygon(poly)
    if newton.length != hodge.rank:
        raise DomainError(f"Newton polygon of length {newton.length} against Hodge data of rank {hodge.rank}")
    return newton == hodge_polygon(hodge)


# --- modular and symmetric power data ---------------------------------------------


def modular_hodge_data(k: int, m: int = 1) -> HodgeData:
    """
    Sym^m of the motive of a weight-k form: h(i(k-1), (m-i)(k-1)) = 1.
    """
    w = m * (k - 1)
    return HodgeData(w, [(i * (k - 1), (m - i) * (k - 1), 1) for i in range(m + 1)])


def sym_power_hecke(a: int | Fraction, q: int | Fraction, m: int, p: int = 3) -> HeckePolyData:
    """
    Hecke data of Sym^m for the roots of X^2 - aX + q, through power sums of {alpha^(m-i) beta^i}
    and Newton's identities.
    """
    if m < 1:
        raise DomainError(f"symmetric power must be at least 1, got {m}")
    a, q = Fraction(a), Fraction(q)
    # pw[n] = alpha^n + beta^n
    pw = [Fraction(2), a]
    for n in range(2, m + 2):
        pw.append(a * pw[-1] - q * pw[-2])

    def power_sum(n: int) -> Fraction:
        # complete homogeneous h_m(alpha^n, beta^n)
        prev, cur = Fraction(1), pw[n]
        for _ in range(m - 1):
            prev, cur = cur, pw[n] * cur - q**n * prev
        return cur

    s = [None] + [power_sum(n) for n in range(1, m + 2)]
    e = [Fraction(1)]
    for n in range(1, m + 2):
        e.append(sum((-1) ** (i - 1) * e[n - i] * s[i] for i in range(1, n + 1)) / n)
    return HeckePolyData(p, tuple((-1) ** i * c for i, c in enumerate(e)))


@dataclass
class SymPowerReport:
    m: int
    k: int
    p: int
    ordinary: bool
    hecke: HeckePolyData
    newton: Polygon
    hodge: Polygon
    endpoint_expected: tuple[int, Fraction]

    @property
    def nearly_ordinary(self) -> bool:
        return self.newton == self.hodge

    @property
    def endpoint_ok(self) -> bool:
        return self.hodge.endpoint == self.endpoint_expected and self.newton.endpoint == self.endpoint_expected

    @property
    def passes(self) -> bool:
        return self.ordinary and self.nearly_ordinary and self.endpoint_ok

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "p": self.p,
            "ordinary": self.ordinary,
            "coefficients": [str(c) for c in self.hecke.elementary()[1:]],
            "newton": self.newton.to_json(),
            "hodge": self.hodge.to_json(),
            "endpoint": [self.endpoint_expected[0], str(self.endpoint_expected[1])],
            "nearly_ordinary": self.nearly_ordinary,
        }


def sym_power_ordinarity_report(a_p: int, eps: int, k: int, p: int, m: int) -> SymPowerReport:
    require_odd_prime(p)
    ordinary = a_p % p != 0
    if not ordinary:
        log.warning(f"a_{p} = {a_p} is not a unit: Sym^{m} is not expected to be nearly ordinary")
    hecke = sym_power_hecke(a_p, eps * p ** (k - 1), m, p)
    endpoint = (m + 1, Fraction((k - 1) * m * (m + 1), 2))
    return SymPowerReport(m, k, p, ordinary, hecke, newton_polygon(hecke), hodge_polygon(modular_hodge_data(k, m)), endpoint)


# --- GL(4) ---------------------------------------------------------------------------


def gl4_hodge_data() -> HodgeData:
    """
    Weight -1, Hodge indices -2, -1, 0, 1 each of multiplicity one.
    """
    return HodgeData(-1, [(-2, 1, 1), (-1, 0, 1), (0, -1, 1), (1, -2, 1)])


def gl4_slopes(nu_vals: tuple) -> list[Fraction]:
    """
    Valuations of the Hecke roots of the motive from v_p(nu_1(p)), v_p(nu_2(p)): {+-v_1, +-v_2} - 1/2.
    """
    if len(nu_vals) != 2:
        raise DomainError(f"need two nu-valuations, got {len(nu_vals)}")
    for v in nu_vals:
        if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
            raise DomainError(f"nu-valuation {v!r} is not an exact rational")
    half = Fraction(1, 2)
    return sorted(s * Fraction(v) - half for v in nu_vals for s in (1, -1))


def gl4_newton_polygon(nu_vals: tuple) -> Polygon:
    return Polygon.from_slopes(gl4_slopes(nu_vals))


def gl4_hecke_data(p: int, nu_vals: tuple) -> HeckePolyData:
    """
    A Hecke polynomial with inverse roots p^s for the GL(4) slopes s; these must be integral.
    """
    slopes = gl4_slopes(nu_vals)
    if any(s.denominator != 1 for s in slopes):
        raise DomainError(f"slopes {slopes} are not integral")
    e = [Fraction(1)]
    for s in slopes:
        r = Fraction(p) ** int(s)
        e = [c - (r * e[i - 1] if i else 0) for i, c in enumerate(e + [Fraction(0)])]
    return HeckePolyData(p, tuple(e))
