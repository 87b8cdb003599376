"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Cartesian overlap distributions are expanded in
Hermite Gaussians (coefficients E), Coulomb integrals reduce to the Hermite
integrals R built on the Boys function.  Adequate for s and p shells.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import hyp1f1


def boys(n: int, x: float) -> float:
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2 * n + 1)


@lru_cache(maxsize=None)
def hermite_e(i: int, j: int, t: int, q: float, a: float, b: float) -> float:
    """Hermite expansion coefficient E_t^{ij} for a Gaussian product (q = Ax - Bx)."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return float(np.exp(-mu * q * q))
    if i > 0:
        return (
            hermite_e(i - 1, j, t - 1, q, a, b) / (2 * p)
            - mu * q / a * hermite_e(i - 1, j, t, q, a, b)
            + (t + 1) * hermite_e(i - 1, j, t + 1, q, a, b)
        )
    return (
        hermite_e(i, j - 1, t - 1, q, a, b) / (2 * p)
        + mu * q / b * hermite_e(i, j - 1, t, q, a, b)
        + (t + 1) * hermite_e(i, j - 1, t + 1, q, a, b)
    )


def _overlap_prim(la, lb, a, b, ra, rb) -> float:
    p = a + b
    s = (np.pi / p) ** 1.5
    for i in range(3):
        s *= hermite_e(la[i], lb[i], 0, ra[i] - rb[i], a, b)
    return s


def _kinetic_prim(la, lb, a, b, ra, rb) -> float:
    l, m, n = lb

    def shifted(dx, dy, dz):
        lbs = (l + dx, m + dy, n + dz)
        if min(lbs) < 0:
            return 0.0
        return _overlap_prim(la, lbs, a, b, ra, rb)

    term0 = b * (2 * (l + m + n) + 3) * shifted(0, 0, 0)
    term1 = -2 * b * b * (shifted(2, 0, 0) + shifted(0, 2, 0) + shifted(0, 0, 2))
    term2 = -0.5 * (
        l * (l - 1) * shifted(-2, 0, 0)
        + m * (m - 1) * shifted(0, -2, 0)
        + n * (n - 1) * shifted(0, 0, -2)
    )
    return term0 + term1 + term2


def _coulomb_table(p, pc):
    """Memoized Hermite Coulomb integrals R_{tuv}^{(n)} for one charge pair."""
    x2 = p * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2])
    memo = {}

    def r(t, u, v, n):
        if t < 0 or u < 0 or v < 0:
            return 0.0
        key = (t, u, v, n)
        if key in memo:
            return memo[key]
        if t == u == v == 0:
            value = (-2.0 * p) ** n * boys(n, x2)
        elif t > 0:
            value = (t - 1) * r(t - 2, u, v, n + 1) + pc[0] * r(t - 1, u, v, n + 1)
        elif u > 0:
            value = (u - 1) * r(t, u - 2, v, n + 1) + pc[1] * r(t, u - 1, v, n + 1)
        else:
            value = (v - 1) * r(t, u, v - 2, n + 1) + pc[2] * r(t, u, v - 1, n + 1)
        memo[key] = value
        return value

    return r


def _nuclear_prim(la, lb, a, b, ra, rb, rc) -> float:
    p = a + b
    rp = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    pc = tuple(rp - np.asarray(rc))
    r = _coulomb_table(p, pc)
    total = 0.0
    for t in range(la[0] + lb[0] + 1):
        et = hermite_e(la[0], lb[0], t, ra[0] - rb[0], a, b)
        for u in range(la[1] + lb[1] + 1):
            eu = hermite_e(la[1], lb[1], u, ra[1] - rb[1], a, b)
            for v in range(la[2] + lb[2] + 1):
                ev = hermite_e(la[2], lb[2], v, ra[2] - rb[2], a, b)
                total += et * eu * ev * r(t, u, v, 0)
    return 2 * np.pi / p * total


def _eri_prim(la, lb, lc, ld, a, b, c, d, ra, rb, rc, rd) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    rq = (c * np.asarray(rc) + d * np.asarray(rd)) / q
    r = _coulomb_table(alpha, tuple(rp - rq))

    def e_triplet(lx, ly, az, bz, rx, ry):
        return [
            [hermite_e(lx[i], ly[i], t, rx[i] - ry[i], az, bz) for t in range(lx[i] + ly[i] + 1)]
            for i in range(3)
        ]

    e_bra = e_triplet(la, lb, a, b, ra, rb)
    e_ket = e_triplet(lc, ld, c, d, rc, rd)
    total = 0.0
    for t in range(len(e_bra[0])):
        for u in range(len(e_bra[1])):
            for v in range(len(e_bra[2])):
                w_bra = e_bra[0][t] * e_bra[1][u] * e_bra[2][v]
                if w_bra == 0.0:
                    continue
                for t2 in range(len(e_ket[0])):
                    for u2 in range(len(e_ket[1])):
                        for v2 in range(len(e_ket[2])):
                            w_ket = e_ket[0][t2] * e_ket[1][u2] * e_ket[2][v2]
                            if w_ket == 0.0:
                                continue
                            total += (
                                w_bra
                                * w_ket
                                * (-1) ** (t2 + u2 + v2)
                                * r(t + t2, u + u2, v + v2, 0)
                            )
    return 2 * np.pi**2.5 / (p * q * np.sqrt(p + q)) * total


def _contract(f, ga, gb, *rest):
    total = 0.0
    for ca, aa in zip(ga.coefficients, ga.exponents):
        for cb, ab in zip(gb.coefficients, gb.exponents):
            total += ca * cb * f(aa, ab, *rest)
    return total


def overlap(ga, gb) -> float:
    return _contract(
        lambda a, b: _overlap_prim(ga.powers, gb.powers, a, b, ga.center, gb.center), ga, gb
    )


def _moment_prim(la, lb, a, b, ra, rb, axis) -> float:
    p = a + b
    rp = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    s = (np.pi / p) ** 1.5
    for i in range(3):
        e0 = hermite_e(la[i], lb[i], 0, ra[i] - rb[i], a, b)
        if i == axis:
            e1 = hermite_e(la[i], lb[i], 1, ra[i] - rb[i], a, b)
            s *= e1 + rp[i] * e0
        else:
            s *= e0
    return s


def moment(ga, gb, axis) -> float:
    """Cartesian first-moment integral <a| r_axis |b> about the origin."""
    return _contract(
        lambda a, b: _moment_prim(ga.powers, gb.powers, a, b, ga.center, gb.center, axis),
        ga, gb,
    )


def moment_tables(functions):
    """The three AO dipole-moment matrices (x, y, z)."""
    m = len(functions)
    out = np.zeros((3, m, m))
    for axis in range(3):
        for i in range(m):
            for j in range(i + 1):
                out[axis, i, j] = out[axis, j, i] = moment(functions[i], functions[j], axis)
    return out


def kinetic(ga, gb) -> float:
    return _contract(
        lambda a, b: _kinetic_prim(ga.powers, gb.powers, a, b, ga.center, gb.center), ga, gb
    )


def nuclear(ga, gb, rc) -> float:
    return _contract(
        lambda a, b: _nuclear_prim(ga.powers, gb.powers, a, b, ga.center, gb.center, rc), ga, gb
    )


def eri(ga, gb, gc, gd) -> float:
    total = 0.0
    for ca, aa in zip(ga.coefficients, ga.exponents):
        for cb, ab in zip(gb.coefficients, gb.exponents):
            for cc, ac in zip(gc.coefficients, gc.exponents):
                for cd, ad in zip(gd.coefficients, gd.exponents):
                    total += ca * cb * cc * cd * _eri_prim(
                        ga.powers, gb.powers, gc.powers, gd.powers,
                        aa, ab, ac, ad,
                        ga.center, gb.center, gc.center, gd.center,
                    )
    return total


def integral_tables(functions, charges_and_centers):
    """All AO integrals: overlap, core Hamiltonian pieces, chemist-notation ERI."""
    m = len(functions)
    s = np.zeros((m, m))
    t = np.zeros((m, m))
    v = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1):
            s[i, j] = s[j, i] = overlap(functions[i], functions[j])
            t[i, j] = t[j, i] = kinetic(functions[i], functions[j])
            vij = sum(
                -z * nuclear(functions[i], functions[j], rc) for z, rc in charges_and_centers
            )
            v[i, j] = v[j, i] = vij

    g = np.zeros((m, m, m, m))
    for i in range(m):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(m):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    value = eri(functions[i], functions[j], functions[k], functions[l])
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            g[a, b, c, d] = value
                            g[c, d, a, b] = value
    return s, t, v, g


def nuclear_repulsion(charges_and_centers) -> float:
    e = 0.0
    items = list(charges_and_centers)
    for i in range(len(items)):
        for j in range(i):
            zi, ri = items[i]
            zj, rj = items[j]
            e += zi * zj / float(np.linalg.norm(np.asarray(ri) - np.asarray(rj)))
    return e
