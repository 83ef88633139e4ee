"""Horn-type operators and monodromy characteristic polynomials.

The sign pattern of the z-coefficients of the linear forms splits the row
index set per deformation variable; the positive side builds the left
factor product, the negative side the right one, and the two degrees agree
because the column sums vanish.  Operators stay in factored symbolic form;
expansion into a theta-polynomial is available but capped, since factored
form is canonical and the examples reach degree 21.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ci_model import ChargeMatrix, charges, CISpec, WeightSystem
from .mellin import compute_delta, LinearForm
from .poincare import CyclotomicRatio
from .rational_linalg import rat_str
from .transposition import TransposeResult

EXPANSION_DEGREE_CAP = 64


class HornError(Exception):
    pass


class DegenerateOperatorError(HornError):
    """A variable with an empty positive or negative index side."""


@dataclass(frozen=True)
class ThetaFactor:
    """Affine factor c0 + shift + sum_q c_q * theta_q."""

    coeffs: tuple[Fraction, ...]
    const: Fraction
    shift: int

    def __str__(self) -> str:
        parts = []
        total = self.const + self.shift
        if total or not any(self.coeffs):
            parts.append(rat_str(total))
        for q, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            mag = rat_str(abs(c))
            body = f"th{q}" if mag == "1" else f"{mag}*th{q}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return "(" + " ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"coeffs": {f"th{q}": rat_str(c) for q, c in enumerate(self.coeffs, start=1) if c},
                "const": rat_str(self.const), "shift": self.shift}


@dataclass(frozen=True)
class HornOperator:
    """Factored operator P - (variable)^delta_power * Q."""

    q: int
    p_factors: tuple[ThetaFactor, ...]
    q_factors: tuple[ThetaFactor, ...]
    delta_power: int
    variable: str = "s"

    @property
    def degrees(self) -> tuple[int, int]:
        return len(self.p_factors), len(self.q_factors)

    def expand(self, side: str) -> dict[tuple[int, ...], Fraction]:
        """Expanded theta-polynomial of one side; refuses degrees above the cap."""
        factors = self.p_factors if side == "p" else self.q_factors
        if len(factors) > EXPANSION_DEGREE_CAP:
            raise HornError(f"degree {len(factors)} exceeds expansion cap")
        k = len(factors[0].coeffs) if factors else 1
        poly: dict[tuple[int, ...], Fraction] = {tuple(0 for _ in range(k)): Fraction(1)}
        for f in factors:
            term: dict[tuple[int, ...], Fraction] = {}
            base = {tuple(0 for _ in range(k)): f.const + f.shift}
            for q, c in enumerate(f.coeffs):
                if c:
                    base[tuple(1 if i == q else 0 for i in range(k))] = c
            for e1, c1 in poly.items():
                for e2, c2 in base.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    term[e] = term.get(e, Fraction(0)) + c1 * c2
            poly = {e: c for e, c in term.items() if c}
        return poly

    def __str__(self) -> str:
        p = "".join(str(f) for f in self.p_factors) or "1"
        qq = "".join(str(f) for f in self.q_factors) or "1"
        power = f"^{self.delta_power}" if self.delta_power != 1 else ""
        return f"{p} - {self.variable}{self.q}{power} * {qq}"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "p_factors": [f.to_json() for f in self.p_factors],
            "q_factors": [f.to_json() for f in self.q_factors],
            "delta_power": self.delta_power,
            "variable": self.variable,
        }


def index_partition(forms, q: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Row indices split by the sign of the z_q coefficient."""
    plus, minus, zero = [], [], []
    for a, form in enumerate(forms, start=1):
        c = form.z_coeffs[q - 1]
        (plus if c > 0 else minus if c < 0 else zero).append(a)
    return tuple(plus), tuple(minus), tuple(zero)


def _theta_factor(form: LinearForm, shift: int) -> ThetaFactor:
    """The form at i = 0, zeta = 0 with z replaced by -theta, plus an integer shift."""
    return ThetaFactor(tuple(-c for c in form.z_coeffs), form.const, shift)


def horn_operators(spec: CISpec, forms) -> tuple[HornOperator, ...]:
    """One operator per deformation variable, factors counted by the integer
    z-numerators with respect to the global modulus."""
    delta = compute_delta(forms)
    ops = []
    for q in range(1, spec.k + 1):
        plus, minus, _ = index_partition(forms, q)
        if not plus or not minus:
            raise DegenerateOperatorError(f"variable {q}: empty sign class")
        p_factors = []
        for a in plus:
            b = int(forms[a - 1].z_coeffs[q - 1] * delta)
            p_factors.extend(_theta_factor(forms[a - 1], j) for j in range(b))
        q_factors = []
        for a in minus:
            b = -int(forms[a - 1].z_coeffs[q - 1] * delta)
            q_factors.extend(_theta_factor(forms[a - 1], j) for j in range(b))
        ops.append(HornOperator(q, tuple(p_factors), tuple(q_factors), delta))
    return tuple(ops)


@dataclass(frozen=True)
class RestrictedOperator:
    """Single-variable restriction together with the full multi-variable form."""

    nu: int
    restricted: HornOperator
    full: HornOperator


def restricted_operator(tweights: WeightSystem, tcharges: ChargeMatrix,
                        nu: int) -> RestrictedOperator:
    """Operator annihilating the inverse transform, restricted to one torus axis.

    Left factors run over the transposed weight entries g: (-g*theta + r)
    for r < g.  Right factors run over the per-block charges c under weight
    nu: (c*theta - r) for r < c, with theta contracted against the full
    charge row in the unrestricted version.
    """
    k = tcharges.k
    left = []
    for g in tweights.support_values(nu):
        for r in range(g):
            left.append(ThetaFactor(
                tuple(Fraction(-g) if i == nu - 1 else Fraction(0) for i in range(k)),
                Fraction(r), 0))
    right_restricted = []
    right_full = []
    for q in range(1, k + 1):
        c = tcharges.entries[q - 1][nu - 1]
        row = tcharges.entries[q - 1]
        for r in range(c):
            right_restricted.append(ThetaFactor(
                tuple(Fraction(c) if i == nu - 1 else Fraction(0) for i in range(k)),
                Fraction(-r), 0))
            right_full.append(ThetaFactor(
                tuple(Fraction(row[i]) for i in range(k)), Fraction(-r), 0))
    return RestrictedOperator(
        nu=nu,
        restricted=HornOperator(nu, tuple(left), tuple(right_restricted), 1, variable="t"),
        full=HornOperator(nu, tuple(left), tuple(right_full), 1, variable="t"),
    )


@dataclass(frozen=True)
class CharPolyPair:
    """Monodromy characteristic polynomials around the origin and infinity."""

    q: int
    chi: int
    at_zero: tuple[int, ...]       # coefficients, ascending degree
    at_infinity: tuple[int, ...]
    zero_exponents: tuple[int, ...]
    infinity_exponents: tuple[int, ...]

    @staticmethod
    def _poly(exponents) -> tuple[int, ...]:
        coeffs = [1]
        for d in exponents:
            nxt = coeffs + [0] * d
            for i, c in enumerate(coeffs):
                nxt[i + d] -= c
            coeffs = nxt
        return tuple(coeffs)

    def factored(self, side: str) -> str:
        exps = self.zero_exponents if side == "zero" else self.infinity_exponents
        grouped: dict[int, int] = {}
        for d in exps:
            grouped[d] = grouped.get(d, 0) + 1
        return " ".join(f"(1-λ^{d})" + (f"^{m}" if m > 1 else "")
                        for d, m in sorted(grouped.items())) or "1"

    def to_json(self) -> dict:
        return {
            "q": self.q, "chi": self.chi,
            "at_zero": list(self.at_zero), "at_infinity": list(self.at_infinity),
            "at_zero_factored": self.factored("zero"),
            "at_infinity_factored": self.factored("infinity"),
        }


def char_polys(tweights: WeightSystem, tcharges: ChargeMatrix, q: int) -> CharPolyPair:
    """Both polynomials for grading q: weights at the origin, charges at infinity.

    Zero charges contribute no factor (their block is invisible to this
    grading); the degrees still agree because charges and weights balance.
    """
    zero_exps = tuple(tweights.support_values(q))
    inf_exps = tuple(c for c in tcharges.column(q) if c)
    pair = CharPolyPair(
        q=q,
        chi=sum(zero_exps),
        at_zero=CharPolyPair._poly(zero_exps),
        at_infinity=CharPolyPair._poly(inf_exps),
        zero_exponents=zero_exps,
        infinity_exponents=inf_exps,
    )
    return pair


def m_function(tweights: WeightSystem, tcharges: ChargeMatrix) -> CyclotomicRatio:
    """Product over gradings of the infinity polynomial over the origin one."""
    k = tcharges.k
    num = [(q, c) for q in range(1, k + 1) for c in tcharges.column(q)]
    den = [(q, g) for q in range(1, k + 1) for g in tweights.support_values(q)]
    return CyclotomicRatio.build(k, num, den)


@dataclass(frozen=True)
class SymmetryReport:
    """Cyclic symmetry orders on both sides of the mirror pair."""

    q_bars: tuple[int, ...]
    t_q_bars: tuple[int, ...]
    weight_divisibility: dict[str, bool]

    def group(self, side: str) -> str:
        orders = self.q_bars if side == "original" else self.t_q_bars
        return " x ".join(f"Z_{d}" for d in orders)

    def to_json(self) -> dict:
        return {
            "quantum_orders": list(self.q_bars),
            "transposed_quantum_orders": list(self.t_q_bars),
            "quantum_group": self.group("original"),
            "transposed_quantum_group": self.group("transposed"),
            "weight_divisibility": dict(self.weight_divisibility),
        }


def symmetry_report(spec: CISpec, tr: TransposeResult,
                    weights: WeightSystem, tweights: WeightSystem) -> SymmetryReport:
    """Cyclic group orders: column LCMs of the charge matrices on both sides.

    Also reports, per grading, whether every weight divides the matching
    cyclic order; this holds in the cleanest examples but not universally,
    so it is informational.
    """
    qm = charges(spec, weights)
    tqm = charges(tr.tspec, tweights)
    divis = {}
    for q in range(1, spec.k + 1):
        bar = qm.column_lcm(q)
        divis[f"weights_divide_order_{q}"] = all(
            bar % g == 0 for g in weights.support_values(q))
    for q in range(1, tr.tspec.k + 1):
        bar = tqm.column_lcm(q)
        divis[f"transposed_weights_divide_order_{q}"] = all(
            bar % g == 0 for g in tweights.support_values(q))
    return SymmetryReport(
        q_bars=qm.column_lcms,
        t_q_bars=tqm.column_lcms,
        weight_divisibility=divis,
    )
