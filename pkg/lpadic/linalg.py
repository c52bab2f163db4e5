"""
Exact linear algebra helpers: integer kernels by row echelon over Z, denominator clearing,
rational kernels and rational eigenvalues through sympy.
"""

import logging
import math
from fractions import Fraction

from sympy import Matrix, factor_list, symbols

from lpadic.helpers import gcdex, to_fraction

log = logging.getLogger(__name__)


def clear_denominators(row) -> list[int]:
    """
    Smallest positive multiple of a rational vector that is integral.
    """
    row = [Fraction(x) for x in row]
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def integer_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """
    Z-basis of {x in Z^ncols : A x = 0}. Rows of [A^T | I] are reduced with unimodular operations until
    the A^T part is in echelon form; the rows whose A^T part vanished carry the basis in the I part.
    """
    nrows = len(rows)
    m = [[rows[r][c] for r in range(nrows)] + [1 if i == c else 0 for i in range(ncols)] for c in range(ncols)]
    piv_r = 0
    for piv_c in range(nrows):
        if piv_r >= ncols:
            break
        for r in range(piv_r + 1, ncols):
            a, b = m[piv_r][piv_c], m[r][piv_c]
            if b == 0:
                continue
            x, y, g = gcdex(a, b)
            ag, bg = a // g, b // g
            top = [x * u + y * v for u, v in zip(m[piv_r], m[r])]
            bottom = [-bg * u + ag * v for u, v in zip(m[piv_r], m[r])]
            m[piv_r], m[r] = top, bottom
        if m[piv_r][piv_c] != 0:
            piv_r += 1
    basis = [row[nrows:] for row in m if not any(row[:nrows])]
    log.debug(f"integer kernel: {len(basis)} vectors in Z^{ncols}")
    return basis


def rational_kernel(mat: Matrix) -> list[list[Fraction]]:
    """
    Q-basis of the right kernel of a sympy matrix, as lists of Fractions.
    """
    return [[to_fraction(x) for x in v] for v in mat.nullspace()]


def left_kernel(mat: Matrix) -> list[list[Fraction]]:
    return rational_kernel(mat.T)


def rational_eigenvalues(mat: Matrix) -> list[Fraction]:
    """
    Rational roots of the characteristic polynomial.
    """
    x = symbols("x")
    _, factors = factor_list(mat.charpoly(x).as_expr(), x)
    roots = set()
    for factor, _ in factors:
        poly = factor.as_poly(x)
        if poly.degree() == 1:
            c1, c0 = poly.all_coeffs()
            roots.add(to_fraction(-c0 / c1))
    return sorted(roots)
