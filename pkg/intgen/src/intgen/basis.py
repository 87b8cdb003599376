"""STO-3G basis construction for H through F.

Each Slater orbital is expanded in three Gaussians using the standard
least-squares templates; element-specific Slater exponents zeta scale the
template exponents by zeta**2.  Only s and p shells occur in this row of
the periodic table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903

# template exponents / contraction coefficients for a zeta = 1 Slater fit
_1S_EXP = np.array([2.227660584, 0.405771156, 0.109818])
_1S_COEF = np.array([0.154328967, 0.535328142, 0.444634542])
_2SP_EXP = np.array([0.994203, 0.231031, 0.0751386])
_2S_COEF = np.array([-0.09996723, 0.39951283, 0.70011547])
_2P_COEF = np.array([0.15591627, 0.60768372, 0.39195739])

# Slater exponents (zeta_1s, zeta_2sp) per element
_ZETA = {
    "H": (1.24, None),
    "He": (1.69, None),
    "Li": (2.69, 0.80),
    "Be": (3.68, 1.15),
    "B": (4.68, 1.50),
    "C": (5.67, 1.72),
    "N": (6.67, 1.95),
    "O": (7.66, 2.25),
    "F": (8.65, 2.55),
}

ATOMIC_NUMBER = {"H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9}


@dataclass(frozen=True)
class ContractedGaussian:
    """Cartesian contracted Gaussian: sum_i c_i N_i x^l y^m z^n exp(-a_i r^2)."""

    center: tuple
    powers: tuple  # (l, m, n)
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive and contraction normalization


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _primitive_norm(alpha: float, powers) -> float:
    l, m, n = powers
    num = (2 * alpha / np.pi) ** 0.75 * (4 * alpha) ** ((l + m + n) / 2)
    den = np.sqrt(
        _double_factorial(2 * l - 1) * _double_factorial(2 * m - 1) * _double_factorial(2 * n - 1)
    )
    return num / den


def _normalize(cgf: ContractedGaussian) -> ContractedGaussian:
    # scale so the contracted self-overlap is exactly 1
    from .integrals import overlap

    s = overlap(cgf, cgf)
    return ContractedGaussian(
        cgf.center, cgf.powers, cgf.exponents, cgf.coefficients / np.sqrt(s)
    )


def _shell(center, powers, template_exp, template_coef, zeta) -> ContractedGaussian:
    exponents = template_exp * zeta**2
    coefficients = template_coef * np.array(
        [_primitive_norm(a, powers) for a in exponents]
    )
    return _normalize(ContractedGaussian(tuple(center), tuple(powers), exponents, coefficients))


def build_basis(atoms) -> list[ContractedGaussian]:
    """Basis functions for a geometry given as [(element, (x, y, z) in Bohr), ...]."""
    functions = []
    for element, center in atoms:
        zeta_1s, zeta_2sp = _ZETA[element]
        functions.append(_shell(center, (0, 0, 0), _1S_EXP, _1S_COEF, zeta_1s))
        if zeta_2sp is not None:
            functions.append(_shell(center, (0, 0, 0), _2SP_EXP, _2S_COEF, zeta_2sp))
            for powers in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                functions.append(_shell(center, powers, _2SP_EXP, _2P_COEF, zeta_2sp))
    return functions
