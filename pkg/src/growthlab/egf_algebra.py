"""Truncated exponential generating functions over exact rationals.

An Egf stores the power-series coefficients c_0..c_N of
sum a_n x^n / n!, so c_n = a_n / n!.  The three operations mirror how
the injective-tuple growth sequence composes:

  * a disjoint union of two structures multiplies their EGFs,
  * spreading a structure along an equivalence relation with infinitely
    many infinite classes substitutes its EGF minus one into the outer
    one, and the fully symmetric outer layer specialises that to
    exp(f - 1).

Truncation order is fixed at construction and binary operations require
equal orders, so every coefficient's provenance is auditable; there is
no silent re-truncation.  Denominators stay below N!, harmless for the
prefix lengths used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .seq_core import IntSeq


class NonIntegralError(ValueError):
    """A coefficient times n! is not a non-negative integer.

    Growth-sequence EGFs always convert back to integer sequences; this
    firing signals a malformed composition input or an implementation
    bug, never a rounding issue to tolerate.
    """


@dataclass(frozen=True)
class Egf:
    """Power-series coefficients c_0..c_N with exact rational entries."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("Egf needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]


def from_seq(a: IntSeq) -> Egf:
    """EGF of an integer sequence: c_n = a_n / n!."""
    return Egf(tuple(Fraction(a[n], math.factorial(n)) for n in range(len(a))))


def to_seq(f: Egf, label: str = "") -> IntSeq:
    """Recover a_n = c_n * n!, demanding non-negative integers.

    Raises NonIntegralError naming the offending index otherwise.
    """
    vals = []
    for n, c in enumerate(f.coeffs):
        a = c * math.factorial(n)
        if a.denominator != 1 or a < 0:
            raise NonIntegralError(
                f"coefficient at index {n} gives a_n = {a}, not a non-negative integer"
            )
        vals.append(int(a))
    return IntSeq(tuple(vals), label)


def _same_order(f: Egf, g: Egf) -> int:
    if f.order != g.order:
        raise ValueError(f"truncation orders differ: {f.order} vs {g.order}")
    return f.order


def _mul_trunc(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(min(len(b), order + 1 - i)):
            out[i + j] += ai * b[j]
    return out


def egf_product(f: Egf, g: Egf) -> Egf:
    """Cauchy product truncated at the common order.

    On sequences this is the binomial convolution
    a_n = sum_k C(n, k) f_k g_{n-k}, the growth sequence of a disjoint
    union acted on componentwise.
    """
    order = _same_order(f, g)
    return Egf(tuple(_mul_trunc(list(f.coeffs), list(g.coeffs), order)))


def egf_wreath(f_g: Egf, f_h: Egf) -> Egf:
    """Composition f_h(f_g - 1) truncated at the common order.

    Requires c_0(f_g) = 1 so the inner series has zero constant term and
    the composition of truncations is well defined.  Evaluated by Horner
    steps on truncated series in rational arithmetic.
    """
    order = _same_order(f_g, f_h)
    if f_g[0] != 1:
        raise ValueError(f"inner EGF must have constant term 1, got {f_g[0]}")
    inner = list(f_g.coeffs)
    inner[0] = Fraction(0)
    acc = [f_h[order]] + [Fraction(0)] * order
    for i in range(order - 1, -1, -1):
        acc = _mul_trunc(acc, inner, order)
        acc[0] += f_h[i]
    return Egf(tuple(acc))


def egf_exp_shift(f: Egf) -> Egf:
    """exp(f - 1) truncated at the order of f.

    Requires c_0(f) = 1.  Computed by the recurrence obtained from
    h' = h * f' with h_0 = 1:

        h_n = (1/n) * sum_{k=1}^{n} k * f_k * h_{n-k}

    which agrees with egf_wreath(f, exp-prefix) coefficient by
    coefficient, at a quadratic rather than cubic cost.
    """
    if f[0] != 1:
        raise ValueError(f"exp shift needs constant term 1, got {f[0]}")
    order = f.order
    h = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if f[k]:
                acc += k * f[k] * h[n - k]
        h[n] = acc / n
    return Egf(tuple(h))
