"""Classical orthogonal polynomials and the two base Hamiltonians.

Jacobi polynomials are generated from the explicit Gamma-ratio sum in powers
of (1+z); Laguerre polynomials from the falling-product sum, which stays
valid for negative integer parameters (needed for the type-II states
L_N^{(-N-1)}).  Both normalizations agree with the standard three-term
recurrences; tests pin that down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exactalg import ExactPoly, RadialGauged, RationalFn, TrigGauged

_ONE_PLUS = ExactPoly([1, 1])


def jacobi(n: int, alpha: int, beta: int) -> ExactPoly:
    """Jacobi polynomial P_n^(alpha,beta), integer parameters >= 0."""
    if n < 0:
        raise ValueError("negative degree")
    if alpha < 0 or beta < 0:
        raise ValueError("jacobi needs nonnegative integer parameters")
    acc = ExactPoly.zero()
    for k in range(n + 1):
        c = Fraction(
            (-1) ** k * comb(n, k) * factorial(n + alpha + beta + k),
            2**k * factorial(beta + k),
        )
        acc = acc + _ONE_PLUS**k * c
    pref = Fraction(
        (-1) ** n * factorial(n + beta), factorial(n) * factorial(n + alpha + beta)
    )
    return acc * pref


def laguerre(n: int, alpha: int) -> ExactPoly:
    """Laguerre polynomial L_n^(alpha); alpha may be any integer."""
    if n < 0:
        raise ValueError("negative degree")
    coeffs = []
    for k in range(n + 1):
        prod = 1
        for j in range(k + 1, n + 1):
            prod *= j + alpha
        coeffs.append(Fraction((-1) ** k * prod, factorial(k) * factorial(n - k)))
    return ExactPoly(coeffs)


@dataclass(frozen=True)
class TrigPoschlTeller:
    """V(x) = (N+1/2)(N-1/2)/sin^2(x) + (M+1/2)(M-1/2)/cos^2(x) - (N+M+1)^2
    on 0 < x < pi/2, with integer N, M >= 1.

    In the variable z = cos(2x) the bound states are
    psi_n = (1-z)^{(2N+1)/4} (1+z)^{(2M+1)/4} P_n^(N,M)(z) with
    E_n = 4n(N+M+1+n).
    """

    N: int
    M: int

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ValueError("integer parameters N, M >= 1 required")

    def energy(self, n: int) -> Fraction:
        return Fraction(4 * n * (self.N + self.M + 1 + n))

    def v_zform(self) -> RationalFn:
        N, M = self.N, self.M
        return (
            RationalFn(2 * (Fraction(N) ** 2 - Fraction(1, 4)), ExactPoly([1, -1]))
            + RationalFn(2 * (Fraction(M) ** 2 - Fraction(1, 4)), ExactPoly([1, 1]))
            - Fraction((N + M + 1) ** 2)
        )

    def v(self, x: float) -> float:
        N, M = self.N, self.M
        return (
            (N * N - 0.25) / math.sin(x) ** 2
            + (M * M - 0.25) / math.cos(x) ** 2
            - (N + M + 1) ** 2
        )

    def eigenstate(self, n: int) -> TrigGauged:
        return TrigGauged(
            Fraction(2 * self.N + 1, 4),
            Fraction(2 * self.M + 1, 4),
            RationalFn(jacobi(n, self.N, self.M)),
        )


@dataclass(frozen=True)
class IsotonicOscillator:
    """V(x) = w^2 x^2/4 + (N+1/2)(N-1/2)/x^2 - w(N+1) on x > 0, integer N >= 1.

    In z = w x^2/2 the bound states are psi_n = z^{(2N+1)/4} e^{-z/2} L_n^N(z)
    with E_n = 2 n w.  Exact data is stored in units of w throughout (the
    potential and energies are uniformly linear in w), so identities are
    frequency-free.
    """

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("integer parameter N >= 1 required")

    def energy_units(self, n: int) -> Fraction:
        """E_n in units of w."""
        return Fraction(2 * n)

    def v_zform_units(self) -> RationalFn:
        N = self.N
        return (
            RationalFn(ExactPoly([0, 1]), 2)
            + RationalFn(Fraction(N * N, 1) - Fraction(1, 4), ExactPoly([0, 2]))
            - Fraction(N + 1)
        )

    def v(self, x: float, omega: float) -> float:
        N = self.N
        return (
            omega * omega * x * x / 4.0
            + (N * N - 0.25) / (x * x)
            - omega * (N + 1)
        )

    def eigenstate(self, n: int) -> RadialGauged:
        return RadialGauged(
            Fraction(2 * self.N + 1, 4),
            -1,
            0,
            RationalFn(laguerre(n, self.N)),
        )

    def norm_sq_units(self, n: int) -> Fraction:
        """Squared L2 norm of eigenstate(n) in units of (2w)^{-1/2}."""
        return Fraction(factorial(n + self.N), factorial(n))
