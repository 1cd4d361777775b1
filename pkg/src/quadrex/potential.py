"""Symplectic potentials of separable metrics H_{A,B}.

With I_k(x) = ∫_{x0}^x t^k / A(t) dt and J_k(y) = ∫_{y0}^y t^k / B(t) dt
(base points in the open intervals):

* orthotoric, σ = (x + y, xy):
  G = −(I2 − σ1 I1 + σ2 I0)(x) + (J2 − σ1 J1 + σ2 J0)(y),
  ∇G = (I1 − J1, J0 − I0);
* Calabi, σ = (x, xy):
  G = σ2 J0 − σ1 J1 + σ1 I1 − I2,  ∇G = (I1 − J1, J0);
* product of two intervals: G = Σ (t I0 − I1) per factor, ∇G = (I0(μ1), J0(μ2)).

G is defined up to an affine function, which depends on the base points.
A and B need not come from the extremal solution: any pair positive on the
open intervals with the right boundary behaviour gives a potential.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NonPositivePolynomial, QuadratureFailure

KINDS = ("Orthotoric", "Calabi", "Product")


@dataclass(frozen=True)
class ABPotential:
    kind: str
    A: tuple
    B: tuple
    alphas: tuple
    betas: tuple
    tol: float = 1e-10
    depth: int = 40

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "A", tuple(float(c) for c in self.A))
        object.__setattr__(self, "B", tuple(float(c) for c in self.B))
        object.__setattr__(self, "alphas", tuple(float(c) for c in self.alphas))
        object.__setattr__(self, "betas", tuple(float(c) for c in self.betas))

    @classmethod
    def from_polynomials(cls, poly, **kw) -> "ABPotential":
        return cls(poly.kind, poly.A, poly.B, poly.alphas, poly.betas, **kw)

    def perturbed(self, ca: float, cb: float) -> "ABPotential":
        """A + ca (x−α1)²(x−α2)², B + cb (y−β1)²(y−β2)²: same boundary data."""
        def bump(p, lo, hi, c):
            q = np.polymul(np.polymul([1.0, -lo], [1.0, -lo]), np.polymul([1.0, -hi], [1.0, -hi]))
            return tuple(np.polyadd(p, c * q))
        return ABPotential(self.kind, bump(self.A, *self.alphas, ca), bump(self.B, *self.betas, cb),
                           self.alphas, self.betas, self.tol, self.depth)

    # ------------------------------------------------------------ integrals
    def _moments(self, coeffs, interval, t):
        base = 0.5 * (interval[0] + interval[1])
        shape = np.shape(t)
        out, status = kernels.cumulative_moments(np.asarray(coeffs), base, np.ravel(t), self.tol, self.depth)
        if status == kernels.NONPOSITIVE:
            raise NonPositivePolynomial("polynomial is not positive at a quadrature node")
        if status == kernels.FAILED:
            raise QuadratureFailure("adaptive quadrature did not reach the tolerance")
        return [out[:, k].reshape(shape) for k in range(3)]

    def _ij(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self._moments(self.A, self.alphas, x), self._moments(self.B, self.betas, y)

    # ------------------------------------------------------ public evaluators
    def sigma(self, x, y):
        if self.kind == "Orthotoric":
            return x + y, x * y
        if self.kind == "Calabi":
            return x, x * y
        return x, y

    def value(self, x, y):
        """G at parameter coordinates (x, y) (chart coordinates for Product)."""
        (i0, i1, i2), (j0, j1, j2) = self._ij(x, y)
        s1, s2 = self.sigma(np.asarray(x, float), np.asarray(y, float))
        if self.kind == "Orthotoric":
            return -(i2 - s1 * i1 + s2 * i0) + (j2 - s1 * j1 + s2 * j0)
        if self.kind == "Calabi":
            return s2 * j0 - s1 * j1 + s1 * i1 - i2
        return s1 * i0 - i1 + s2 * j0 - j1

    def gradient(self, x, y):
        (i0, i1, _), (j0, j1, _) = self._ij(x, y)
        if self.kind == "Orthotoric":
            return i1 - j1, j0 - i0
        if self.kind == "Calabi":
            return i1 - j1, j0
        return i0, j0

    def h(self, x, y):
        """(H11, H12, H22) of H_{A,B} at parameter coordinates."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        a, b = np.polyval(self.A, x), np.polyval(self.B, y)
        if self.kind == "Orthotoric":
            d = x - y
            return (a + b) / d, (y * a + x * b) / d, (y * y * a + x * x * b) / d
        if self.kind == "Calabi":
            return a / x, y * a / x, (x * x * b + y * y * a) / x
        return a, np.zeros_like(a * b), b

    def hessian(self, x, y):
        """Hess G = H⁻¹ as (G11, G12, G22)."""
        h11, h12, h22 = self.h(x, y)
        det = h11 * h22 - h12 * h12
        return h22 / det, -h12 / det, h11 / det

    def jacobian(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "Orthotoric":
            return np.abs(x - y)
        if self.kind == "Calabi":
            return np.abs(x)
        return np.ones_like(x * y)

    def params_of(self, m1, m2):
        """Parameter coordinates of chart points (floats)."""
        m1 = np.asarray(m1, dtype=float)
        m2 = np.asarray(m2, dtype=float)
        if self.kind == "Orthotoric":
            r = np.sqrt(m1 * m1 - 4 * m2)
            return (m1 + r) / 2, (m1 - r) / 2
        if self.kind == "Calabi":
            return m1, m2 / m1
        return m1, m2

    def at_mu(self, m1, m2):
        return self.value(*self.params_of(m1, m2))
