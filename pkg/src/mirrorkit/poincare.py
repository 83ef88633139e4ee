"""Cyclotomic ratios: graded Poincaré series and their duality.

The structural algebra of a weighted complete intersection has a Poincaré
series of the classical quotient shape prod (1 - t^{charge}) over
prod (1 - t^{weight}); the Euler-characteristic generating function and the
monodromy ratio take the same shape over the transposed data.  All of them
live here as multisets of (variable, exponent) factors, with equality
decided by exact cross-multiplied polynomial expansion.

A charge of zero contributes no factor: such a pairing couples a block to a
grading it does not touch, and the product formula skips it (the degree
count, which must balance per grading, is unaffected).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .ci_model import ChargeMatrix, charges, CISpec, derive_weights, weights_of, WeightSystem
from .transposition import transpose_spec, TransposeResult, double_transpose_relabel


Poly = dict[tuple[int, ...], int]  # exponent vector -> integer coefficient


class PoincareError(Exception):
    pass


class NotExpandableError(PoincareError):
    pass


@dataclass(frozen=True)
class CyclotomicRatio:
    """Ratio of products of factors (1 - lambda_q^d), canonically cancelled."""

    k: int
    num: tuple[tuple[int, int], ...]  # (variable 1..k, exponent d >= 1), sorted
    den: tuple[tuple[int, int], ...]

    @staticmethod
    def build(k: int, num: Iterable[tuple[int, int]],
              den: Iterable[tuple[int, int]]) -> "CyclotomicRatio":
        ns = sorted((q, d) for q, d in num if d)
        ds = sorted((q, d) for q, d in den if d)
        for pair in list(ns):
            if pair in ds:
                ns.remove(pair)
                ds.remove(pair)
        return CyclotomicRatio(k, tuple(ns), tuple(ds))

    @staticmethod
    def one(k: int) -> "CyclotomicRatio":
        return CyclotomicRatio(k, (), ())

    def degree_per_variable(self) -> tuple[tuple[int, int], ...]:
        """(numerator degree, denominator degree) per variable."""
        out = []
        for q in range(1, self.k + 1):
            out.append((sum(d for v, d in self.num if v == q),
                        sum(d for v, d in self.den if v == q)))
        return tuple(out)

    def degree_balanced(self) -> bool:
        return all(a == b for a, b in self.degree_per_variable())

    def __str__(self) -> str:
        def side(factors):
            if not factors:
                return "1"
            grouped: dict[tuple[int, int], int] = {}
            for q, d in factors:
                grouped[(q, d)] = grouped.get((q, d), 0) + 1
            var = (lambda q: "t" if self.k == 1 else f"t{q}")
            parts = []
            for (q, d), m in sorted(grouped.items()):
                body = f"(1-{var(q)}^{d})" if d != 1 else f"(1-{var(q)})"
                parts.append(body + (f"^{m}" if m > 1 else ""))
            return "".join(parts)
        return f"{side(self.num)} / {side(self.den)}" if self.den else side(self.num)

    def to_json(self) -> dict:
        return {"k": self.k, "num": [list(p) for p in self.num],
                "den": [list(p) for p in self.den]}

    @staticmethod
    def from_json(data: dict) -> "CyclotomicRatio":
        return CyclotomicRatio.build(
            int(data["k"]),
            [(int(q), int(d)) for q, d in data["num"]],
            [(int(q), int(d)) for q, d in data["den"]],
        )


# ---------------------------------------------------------------------------
# exact polynomial helpers
# ---------------------------------------------------------------------------


def _poly_mul(a: Poly, b: Poly, k: int, order: int | None = None) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if order is not None and sum(e) > order:
                continue
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _factor_poly(q: int, d: int, k: int) -> Poly:
    zero = tuple(0 for _ in range(k))
    e = tuple(d if i == q - 1 else 0 for i in range(k))
    return {zero: 1, e: -1}


def _expand_product(factors, k: int, order: int | None = None) -> Poly:
    poly: Poly = {tuple(0 for _ in range(k)): 1}
    for q, d in factors:
        poly = _poly_mul(poly, _factor_poly(q, d, k), k, order)
    return poly


def ratio_equal(a: CyclotomicRatio, b: CyclotomicRatio) -> bool:
    """Exact equality as rational functions via cross-multiplied expansion."""
    if a.k != b.k:
        raise PoincareError("variable counts differ")
    left = _expand_product(tuple(a.num) + tuple(b.den), a.k)
    right = _expand_product(tuple(b.num) + tuple(a.den), a.k)
    return left == right


def series_expand(r: CyclotomicRatio, order: int) -> dict[tuple[int, ...], int]:
    """Power-series coefficients of r up to total degree `order`, exact integers."""
    if any(d < 1 for _, d in r.den):
        raise NotExpandableError("denominator factor with exponent < 1")
    k = r.k
    poly = _expand_product(r.num, k, order)
    for q, d in r.den:
        geo: Poly = {}
        m = 0
        while m * d <= order:
            geo[tuple(m * d if i == q - 1 else 0 for i in range(k))] = 1
            m += 1
        poly = _poly_mul(poly, geo, k, order)
    return poly


def series_coefficients_1d(r: CyclotomicRatio, order: int) -> list[int]:
    """Single-variable convenience: coefficients by total degree 0..order."""
    table = series_expand(r, order)
    out = [0] * (order + 1)
    for e, c in table.items():
        out[sum(e)] += c
    return out


# ---------------------------------------------------------------------------
# the graded series
# ---------------------------------------------------------------------------


def poincare_structure(weights: WeightSystem, qm: ChargeMatrix) -> CyclotomicRatio:
    """Structural-algebra series: charges upstairs, weights downstairs, per grading."""
    k = qm.k
    num = [(nu, qm.entries[q - 1][nu - 1]) for nu in range(1, k + 1)
           for q in range(1, k + 1)]
    den = [(nu, g) for nu in range(1, k + 1) for g in weights.support_values(nu)]
    return CyclotomicRatio.build(k, num, den)


def poincare_euler(tweights: WeightSystem, tqm: ChargeMatrix) -> CyclotomicRatio:
    """Euler-characteristic generating function over the transposed data."""
    k = tqm.k
    num = [(q, tqm.entries[nu - 1][q - 1]) for q in range(1, k + 1)
           for nu in range(1, k + 1)]
    den = [(q, g) for q in range(1, k + 1) for g in tweights.support_values(q)]
    return CyclotomicRatio.build(k, num, den)


@dataclass(frozen=True)
class DualityReport:
    identities: dict[str, bool]
    notes: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return all(self.identities.values())

    def to_json(self) -> dict:
        return {"identities": dict(self.identities), "notes": list(self.notes), "ok": self.ok}


def _recovered_original_data(spec: CISpec, tr: TransposeResult
                             ) -> tuple[WeightSystem, ChargeMatrix] | None:
    """Weight data of the double transpose, aligned to the original block order.

    Deriving weights from the twice-transposed spec and matching its blocks
    back to the original ones gives an independent reconstruction of the
    original grading data; disagreement with the annotated weights is
    exactly what the duality check should expose.
    """
    from .transposition import _apply_variable_permutation
    tr2 = transpose_spec(tr.tspec)
    sigma = double_transpose_relabel(spec, tr, tr2)
    recovered = _apply_variable_permutation(tr2.tspec, sigma)

    match: list[int] = []  # original block j -> recovered block index
    used = set()
    for blk in spec.blocks:
        key = (sorted(blk.exponents), tuple(blk.index_set))
        found = None
        for m, rblk in enumerate(recovered.blocks, start=1):
            if m in used:
                continue
            if (sorted(rblk.exponents), tuple(rblk.index_set)) == key:
                found = m
                break
        if found is None:
            return None
        used.add(found)
        match.append(found)

    rec_weights = derive_weights(tr2.tspec)
    # weight vector of recovered block m, expressed over original variables
    vecs = []
    for m in match:
        raw = rec_weights.vectors[m - 1]
        full = [0] * spec.n
        for p, g in enumerate(raw, start=1):
            full[sigma[p - 1] - 1] = g
        vecs.append(tuple(full))
    qm_rows = []
    for blk in spec.blocks:
        v = blk.exponents[0]
        qm_rows.append(tuple(sum(a * g for a, g in zip(v, vec)) for vec in vecs))
    return (WeightSystem(tuple(vecs)), ChargeMatrix(tuple(qm_rows)))


def verify_duality(spec: CISpec, tr: TransposeResult) -> DualityReport:
    """Check the monodromy / Euler-characteristic / structural-series equalities.

    Four named identities: the ratio built from the transposed data must
    equal the mirror partner's Euler and structural series, and the ratio
    rebuilt from the double transpose must equal the original ones.
    """
    from .horn_system import m_function
    identities: dict[str, bool] = {}
    notes: list[str] = []

    tw = derive_weights(tr.tspec)
    tq = charges(tr.tspec, tw)
    m_x = m_function(tw, tq)
    p_a_y = poincare_structure(tw, tq)
    po_y = poincare_euler(tw, tq)
    identities["M_X = PO_Ybar"] = ratio_equal(m_x, po_y)
    identities["PO_Ybar = P_A_Y"] = ratio_equal(po_y, p_a_y)

    xw = weights_of(spec)
    xq = charges(spec, xw)
    p_a_x = poincare_structure(xw, xq)
    po_x = poincare_euler(xw, xq)
    recovered = _recovered_original_data(spec, tr)
    if recovered is None:
        identities["M_Y = PO_Xbar"] = False
        identities["PO_Xbar = P_A_X"] = False
        notes.append("double transposition did not recover the original blocks")
    else:
        rw, rq = recovered
        m_y = m_function(rw, rq)
        identities["M_Y = PO_Xbar"] = ratio_equal(m_y, po_x)
        identities["PO_Xbar = P_A_X"] = ratio_equal(po_x, p_a_x)
        if not identities["M_Y = PO_Xbar"]:
            notes.append("monodromy ratio from the double transpose disagrees "
                         "with the annotated grading data")

    for name, ratio in (("M_X", m_x), ("P_A_X", p_a_x)):
        if not ratio.degree_balanced():
            notes.append(f"{name}: numerator/denominator degrees unbalanced")
    return DualityReport(identities=identities, notes=tuple(notes))
