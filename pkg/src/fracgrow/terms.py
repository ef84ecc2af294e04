"""Closed term algebra and the Adomian decomposition recursion.

Every function this engine manipulates is a finite sum of basis terms

    c * e^{k * r * s} * t^n / n!

with integer k >= 0 and n >= 0.  The family is closed under the spatial
operator (via the exponential rule), the inverse time operator (exact under
the factorial normalization), and products, which is all the decomposition
recursion needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import TermOverflowError, ValidationError
from .fractional import FracOrder

T_POWER_CAP = 64
COEFF_LIMIT = 1e300


@dataclass(frozen=True)
class SeriesTerm:
    """One basis term c * e^{exp_mult * r * s} * t^t_power / t_power!."""

    coeff: float
    exp_mult: int
    t_power: int

    def __post_init__(self):
        if self.exp_mult < 0 or self.t_power < 0:
            raise ValidationError("exp_mult and t_power must be non-negative")


class TermSum:
    """Canonical finite sum of :class:`SeriesTerm` values.

    Canonical means: at most one term per (exp_mult, t_power) key and no
    zero coefficients.  Instances are immutable; all operations return
    fresh sums.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, terms: Iterable[SeriesTerm] = ()):
        coeffs: Dict[Tuple[int, int], float] = {}
        for t in terms:
            key = (t.exp_mult, t.t_power)
            coeffs[key] = coeffs.get(key, 0.0) + t.coeff
        self._coeffs = {k: c for k, c in coeffs.items() if c != 0.0}
        for c in self._coeffs.values():
            if abs(c) > COEFF_LIMIT:
                raise TermOverflowError(f"coefficient magnitude {c} exceeds {COEFF_LIMIT}")

    @classmethod
    def _from_coeffs(cls, coeffs: Mapping[Tuple[int, int], float]) -> "TermSum":
        out = cls.__new__(cls)
        out._coeffs = {k: c for k, c in coeffs.items() if c != 0.0}
        for c in out._coeffs.values():
            if abs(c) > COEFF_LIMIT:
                raise TermOverflowError(f"coefficient magnitude {c} exceeds {COEFF_LIMIT}")
        return out

    @classmethod
    def zero(cls) -> "TermSum":
        return cls(())

    @classmethod
    def single(cls, coeff: float, exp_mult: int = 0, t_power: int = 0) -> "TermSum":
        return cls((SeriesTerm(coeff, exp_mult, t_power),))

    @property
    def terms(self) -> Tuple[SeriesTerm, ...]:
        return tuple(
            SeriesTerm(c, k, n) for (k, n), c in sorted(self._coeffs.items())
        )

    def coefficient(self, exp_mult: int, t_power: int) -> float:
        return self._coeffs.get((exp_mult, t_power), 0.0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def scaled(self, factor: float) -> "TermSum":
        if factor == 0.0:
            return TermSum.zero()
        return TermSum._from_coeffs({k: c * factor for k, c in self._coeffs.items()})

    def __add__(self, other: "TermSum") -> "TermSum":
        return term_add(self, other)

    def __sub__(self, other: "TermSum") -> "TermSum":
        return term_add(self, other.scaled(-1.0))

    def __mul__(self, other: "TermSum") -> "TermSum":
        return term_multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermSum):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __len__(self) -> int:
        return len(self._coeffs)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "TermSum(0)"
        parts = [
            f"{c:g}*e^({k}rs)*t^{n}/{n}!" for (k, n), c in sorted(self._coeffs.items())
        ]
        return "TermSum(" + " + ".join(parts) + ")"


@dataclass(frozen=True)
class PolynomialNonlinearity:
    """N(w) = sum_j c_j w^j over integer powers j >= 1."""

    coefficients: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        for j, _ in self.coefficients:
            if j < 1:
                raise ValidationError(f"nonlinearity powers must be >= 1, got {j}")

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, float]) -> "PolynomialNonlinearity":
        return cls(tuple(sorted(coeffs.items())))


def term_add(x: TermSum, y: TermSum) -> TermSum:
    """Coefficient-wise merge on (exp_mult, t_power) keys."""
    coeffs = dict(x._coeffs)
    for k, c in y._coeffs.items():
        coeffs[k] = coeffs.get(k, 0.0) + c
    return TermSum._from_coeffs(coeffs)


def term_multiply(x: TermSum, y: TermSum, n_cap: int = T_POWER_CAP) -> TermSum:
    """Product of two sums.

    The binomial factor C(n1+n2, n1) converts (t^n1/n1!)(t^n2/n2!) into
    the normalized t^(n1+n2)/(n1+n2)! form.
    """
    coeffs: Dict[Tuple[int, int], float] = {}
    for (k1, n1), c1 in sorted(x._coeffs.items()):
        for (k2, n2), c2 in sorted(y._coeffs.items()):
            n = n1 + n2
            if n > n_cap:
                raise TermOverflowError(f"time power {n} exceeds cap {n_cap}")
            key = (k1 + k2, n)
            coeffs[key] = coeffs.get(key, 0.0) + c1 * c2 * math.comb(n, n1)
    return TermSum._from_coeffs(coeffs)


def apply_Ls(x: TermSum, order: FracOrder, r: float) -> TermSum:
    """Spatial fractional derivative under the exponential rule.

    Each term (c, k, n) maps to (c * (k r)^beta, k, n); terms constant in s
    (k = 0) are annihilated, consistent with the Caputo derivative of a
    constant being zero.
    """
    if r <= 0:
        raise ValidationError(f"growth rate r must be positive, got {r}")
    coeffs: Dict[Tuple[int, int], float] = {}
    for (k, n), c in x._coeffs.items():
        if k == 0:
            continue
        coeffs[(k, n)] = c * (k * r) ** order.beta
    return TermSum._from_coeffs(coeffs)


def apply_Lt_inverse(x: TermSum, n_cap: int = T_POWER_CAP) -> TermSum:
    """Definite time integral from 0 to t: (c, k, n) -> (c, k, n+1)."""
    coeffs: Dict[Tuple[int, int], float] = {}
    for (k, n), c in x._coeffs.items():
        if n + 1 > n_cap:
            raise TermOverflowError(f"time power {n + 1} exceeds cap {n_cap}")
        coeffs[(k, n + 1)] = c
    return TermSum._from_coeffs(coeffs)


def adomian_polynomials(
    nl: PolynomialNonlinearity, w_terms: Sequence[TermSum], n: int
) -> TermSum:
    """n-th Adomian polynomial of the nonlinearity over the given iterates.

    For N(w) = w^j, A_n is the coefficient of lambda^n in (sum_i lambda^i
    w_i)^j, i.e. the sum over compositions i_1 + ... + i_j = n of the term
    products; linear combinations follow from the polynomial coefficients.
    """
    if len(w_terms) < n + 1:
        raise ValidationError(
            f"need at least {n + 1} iterates for A_{n}, got {len(w_terms)}"
        )
    seq = list(w_terms[: n + 1])
    result = TermSum.zero()
    for j, c in nl.coefficients:
        if c == 0.0:
            continue
        power = seq
        for _ in range(j - 1):
            power = _convolve(power, seq, n)
        result = term_add(result, power[n].scaled(c))
    return result


def _convolve(a: List[TermSum], b: List[TermSum], n: int) -> List[TermSum]:
    out = []
    for m in range(n + 1):
        acc = TermSum.zero()
        for i in range(m + 1):
            acc = term_add(acc, term_multiply(a[i], b[m - i]))
        out.append(acc)
    return out


def adm_iterate(
    w0: TermSum,
    order: FracOrder,
    r: float,
    eta: float,
    nl: Optional[PolynomialNonlinearity] = None,
    source: Optional[TermSum] = None,
    n_iterations: int = 1,
) -> List[TermSum]:
    """Run the decomposition recursion, returning [w_0, ..., w_N].

    Each step computes

        w_{n+1} = Lt^-1(source) - Lt^-1(Ls(w_n)) + eta * Lt^-1(w_n) - Lt^-1(A_n)

    with the source and nonlinear contributions dropped when absent.
    """
    if n_iterations < 0:
        raise ValidationError("n_iterations must be non-negative")
    ws = [w0]
    for i in range(n_iterations):
        nxt = TermSum.zero()
        if source is not None and not source.is_zero():
            nxt = term_add(nxt, apply_Lt_inverse(source))
        nxt = term_add(nxt, apply_Lt_inverse(apply_Ls(ws[i], order, r)).scaled(-1.0))
        nxt = term_add(nxt, apply_Lt_inverse(ws[i]).scaled(eta))
        if nl is not None:
            a_n = adomian_polynomials(nl, ws, i)
            nxt = term_add(nxt, apply_Lt_inverse(a_n).scaled(-1.0))
        ws.append(nxt)
    return ws


def evaluate(x: TermSum, r: float, s: float, t: float) -> float:
    """Numeric value sum of c * e^{k r s} * t^n / n! over all terms."""
    total = 0.0
    for (k, n), c in sorted(x._coeffs.items()):
        factor = 1.0
        for i in range(1, n + 1):
            factor *= t / i
        total += c * math.exp(k * r * s) * factor
    return total
