"""Lattice polytopes of the blocks and the dual nef-partition solve.

Shifting each block's monomials by its product indicator puts the block
polytopes into the common weight-kernel sublattice; their Minkowski sum
should fill it.  The dual vertices come from one exact linear solve: the
pairing of the original difference vectors against the dual vertices must
reproduce the transposed difference matrix.  The solution is only
determined modulo the weight lines, so a deterministic coordinate section
(lowest-index standard basis vectors completing the weights to a basis)
pins the representatives.

The per-vertex equality clauses printed alongside the matrix equation are
internally inconsistent, so they are validated and reported rather than
imposed; the matrix equation is the primary solve path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ci_model import CayleyMatrix, CISpec, derive_weights, WeightSystem
from .rational_linalg import (
    Matrix,
    primitive_integer_vector,
    rank,
    right_kernel,
    solve_general,
)
from .transposition import TransposeResult


class NefError(Exception):
    pass


class UnsolvableError(NefError):
    """The dual-vertex matrix equation is inconsistent."""


@dataclass(frozen=True)
class LatticePolytope:
    ambient_dim: int
    vertices: tuple[tuple[int, ...], ...]      # origin first, then distinct shifts
    kernel_basis: tuple[tuple[int, ...], ...]  # basis of the weight-kernel sublattice

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim,
                "vertices": [list(v) for v in self.vertices],
                "kernel_basis": [list(v) for v in self.kernel_basis]}


@dataclass(frozen=True)
class MinkowskiReport:
    dim: int
    expected: int
    ok: bool

    def to_json(self) -> dict:
        return {"dim": self.dim, "expected": self.expected, "ok": self.ok}


def difference_matrix(spec: CISpec) -> Matrix:
    """Rows v - indicator, over all blocks in order; the torus embedding exponents."""
    rows = []
    for blk in spec.blocks:
        ind = blk.indicator(spec.n)
        for v in blk.exponents:
            rows.append(tuple(a - b for a, b in zip(v, ind)))
    return Matrix.from_rows(rows)


def torus_embedding(spec: CISpec) -> Matrix:
    return difference_matrix(spec)


def _kernel_basis(weights: WeightSystem) -> tuple[tuple[int, ...], ...]:
    w = Matrix.from_rows([list(v) for v in weights.vectors])
    return tuple(primitive_integer_vector(v) for v in right_kernel(w))


def build_deltas(spec: CISpec, weights: WeightSystem) -> tuple[LatticePolytope, ...]:
    """One polytope per block: the origin plus the shifted monomials."""
    basis = _kernel_basis(weights)
    out = []
    for blk in spec.blocks:
        ind = blk.indicator(spec.n)
        pts: list[tuple[int, ...]] = [tuple(0 for _ in range(spec.n))]
        for v in blk.exponents:
            shifted = tuple(a - b for a, b in zip(v, ind))
            if shifted not in pts:
                pts.append(shifted)
        out.append(LatticePolytope(spec.n, tuple(pts), basis))
    return tuple(out)


def minkowski_dim(deltas, expected: int | None = None) -> MinkowskiReport:
    """Rank of the span of all vertices; equality with n - k is the sum condition."""
    rows = [v for d in deltas for v in d.vertices if any(v)]
    dim = rank(Matrix.from_rows(rows)) if rows else 0
    exp = expected if expected is not None else dim
    return MinkowskiReport(dim=dim, expected=exp, ok=(dim == exp))


def support_phi(deltas, q: int, y) -> Fraction:
    """Value of the block-q support function at y: -min over vertices of <x, y>."""
    vals = [sum(Fraction(a) * Fraction(b) for a, b in zip(v, y))
            for v in deltas[q - 1].vertices]
    return -min(vals)


@dataclass(frozen=True)
class NefPartitionData:
    deltas: tuple[LatticePolytope, ...]
    duals: tuple[tuple[tuple[Fraction, ...], ...], ...]  # per block, its dual vertices
    p_matrix: Matrix
    pairings: Matrix                       # <diff_i, dual_c>
    sigma_generators: tuple[tuple[int, ...], ...]
    sigma_dual_generators: tuple[tuple[Fraction, ...], ...]
    j_indices: dict[tuple[int, int, int], int]   # (block l, vertex r, other block q) -> j_q
    flags: dict[str, bool]
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        from .rational_linalg import rat_str
        return {
            "deltas": [d.to_json() for d in self.deltas],
            "duals": [[[rat_str(x) for x in m] for m in grp] for grp in self.duals],
            "P": self.p_matrix.to_json(),
            "pairings": self.pairings.to_json(),
            "sigma_generators": [list(v) for v in self.sigma_generators],
            "sigma_dual_generators": [[rat_str(x) for x in v]
                                      for v in self.sigma_dual_generators],
            "j_indices": {f"{l},{r},{q}": j for (l, r, q), j in self.j_indices.items()},
            "flags": dict(self.flags),
            "notes": list(self.notes),
        }


def _integral_representative_exists(col, weights: WeightSystem) -> bool:
    """Can the column be shifted by real multiples of the weight vectors into Z^n?

    Supports are disjoint, so each block contributes an independent
    congruence c * g_i + p_i in Z over its own support; one period of the
    finest admissible step is searched exhaustively.
    """
    import math
    for vec in weights.vectors:
        support = [(g, col[i]) for i, g in enumerate(vec) if g]
        if all(p.denominator == 1 for _, p in support):
            continue
        step = 1
        for g, p in support:
            step = step * (g * p.denominator) // math.gcd(step, g * p.denominator)
        found = False
        for j in range(step):
            c = Fraction(j, step)
            if all((c * g + p).denominator == 1 for g, p in support):
                found = True
                break
        if not found:
            return False
    return True


def _section_indices(spec: CISpec, weights: WeightSystem) -> list[int]:
    """Lowest-index standard basis vectors completing the weights to a basis."""
    rows = [ [Fraction(x) for x in v] for v in weights.vectors]
    chosen: list[int] = []
    for i in range(spec.n):
        e = [Fraction(0)] * spec.n
        e[i] = Fraction(1)
        candidate = rows + [e]
        if rank(Matrix.from_rows(candidate)) > len(rows):
            rows = candidate
            chosen.append(i)
        if len(chosen) == spec.n - spec.k:
            break
    return chosen


def solve_dual_partition(spec: CISpec, tr: TransposeResult,
                         weights: WeightSystem | None = None) -> NefPartitionData:
    """Solve for the dual vertices and verify the nef-partition conditions.

    The pairing of row i of the difference matrix with dual vertex c is
    prescribed by the transposed difference matrix, transported through the
    recorded row/variable correspondences.  Solutions are taken in the
    fixed coordinate section; integrality is reported, not required.
    """
    if weights is None:
        weights = derive_weights(spec)
    n, k = spec.n, spec.k
    notes: list[str] = []
    flags: dict[str, bool] = {}

    deltas = build_deltas(spec, weights)
    mink = minkowski_dim(deltas, expected=n - k)
    flags["minkowski_dim"] = mink.ok
    if not mink.ok:
        raise UnsolvableError(
            f"Minkowski sum has dimension {mink.dim}, expected {n - k}")

    a_mat = difference_matrix(spec)
    t_diff = difference_matrix(tr.tspec)
    if tr.tspec.taus != spec.taus:
        raise UnsolvableError("transposed block sizes do not mirror the original order")

    # pairing target: entry (i, c) = transposed difference of monomial c at the
    # variable carrying original monomial i
    i_lam = spec.i_lambda()
    var_of = {r: v for r, v in tr.row_to_var}
    target = Matrix.from_rows([
        [t_diff[c, var_of[i_lam[i]] - 1] for c in range(n)]
        for i in range(n)])

    section = _section_indices(spec, weights)
    a_cols = Matrix.from_rows([[a_mat[i, j] for j in section] for i in range(n)])
    p_cols = []
    for c in range(n):
        rhs = [target[i, c] for i in range(n)]
        sol = solve_general(a_cols, rhs)
        if sol is None:
            raise UnsolvableError(f"dual vertex {c + 1}: inconsistent system")
        full = [Fraction(0)] * n
        for idx, val in zip(section, sol):
            full[idx] = val
        p_cols.append(tuple(full))
    p_matrix = Matrix.from_rows([[p_cols[c][i] for c in range(n)] for i in range(n)])
    pairings = a_mat @ p_matrix
    if pairings != target:
        raise UnsolvableError("pairing matrix does not reproduce the target")

    flags["integral_P_section"] = all(
        x.denominator == 1 for row in p_matrix.entries for x in row)
    flags["integral_P_exists"] = all(
        _integral_representative_exists(col, weights) for col in p_cols)
    if not flags["integral_P_section"]:
        notes.append("dual vertices are not integral in the chosen section"
                     + ("" if not flags["integral_P_exists"]
                        else "; integral representatives exist modulo the weight lines"))

    # dual vertices of block l are the columns of the transposed block sourced
    # from l: that block's monomials are the transposed polynomials realizing
    # the dual polytope, so the grouping follows the block bijection
    duals = []
    for l in range(1, k + 1):
        pos_l = tr.block_sources.index(l) + 1
        base = tr.tspec.b(pos_l - 1)
        duals.append(tuple(p_cols[base + r] for r in range(tr.tspec.taus[pos_l - 1])))

    # support function values: phi_q(dual vertex of block l) must be delta_{ql}
    phi_ok = True
    for l in range(1, k + 1):
        for m in duals[l - 1]:
            for q in range(1, k + 1):
                if support_phi(deltas, q, m) != (1 if q == l else 0):
                    phi_ok = False
    flags["phi_kronecker"] = phi_ok

    sigma = []
    for q in range(1, k + 1):
        eps = tuple(1 if i == q - 1 else 0 for i in range(k))
        sigma.append(tuple([0] * n) + eps)
        base = spec.b(q - 1)
        for j in range(spec.taus[q - 1]):
            sigma.append(tuple(int(x) for x in a_mat.row(base + j)) + eps)
    sigma_dual = []
    for l in range(1, k + 1):
        eps = tuple(Fraction(int(i == l - 1)) for i in range(k))
        sigma_dual.append(tuple([Fraction(0)] * n) + eps)
        for m in duals[l - 1]:
            sigma_dual.append(tuple(m) + eps)
    flags["cone_pairings_nonnegative"] = all(
        sum(Fraction(a) * b for a, b in zip(v, m)) >= 0
        for v in sigma for m in sigma_dual)

    j_indices: dict[tuple[int, int, int], int] = {}
    five_six_1 = True   # within-block pairings -1 with at most one exception
    five_six_2 = True   # the exceptional own-block pairing also -1 (printed clause)
    five_six_34 = True  # cross-block: zeros except at most one nonnegative j_q
    dual_cols: dict[tuple[int, int], tuple[Fraction, ...]] = {}
    for l in range(1, k + 1):
        for r, m in enumerate(duals[l - 1], start=1):
            dual_cols[(l, r)] = m
    for (l, r), m in sorted(dual_cols.items()):
        for q in range(1, k + 1):
            base = spec.b(q - 1)
            vals = [sum(Fraction(a) * b for a, b in zip(a_mat.row(base + j), m))
                    for j in range(spec.taus[q - 1])]
            if q == l:
                exceptional = [(j, v) for j, v in enumerate(vals, start=1) if v != -1]
                if len(exceptional) > 1:
                    five_six_1 = False
                if exceptional:
                    five_six_2 = False
                    j_indices[(l, r, q)] = exceptional[0][0]
            else:
                nonzero = [(j, v) for j, v in enumerate(vals, start=1) if v != 0]
                if len(nonzero) > 1 or any(v < 0 for _, v in nonzero):
                    five_six_34 = False
                if len(nonzero) == 1:
                    j_indices[(l, r, q)] = nonzero[0][0]
    flags["five_six_1_off_vertex"] = five_six_1
    flags["five_six_2_own_vertex"] = five_six_2
    flags["five_six_34_cross_block"] = five_six_34

    diag = weights.diagonal
    flags["lemma52_G_identity"] = all(g == 1 for g in diag)
    flags["lemma52_TG_identity"] = all(
        g == 1 for g in derive_weights(tr.tspec).diagonal)
    flags["lemma52_lambda_identity"] = tr.lam.is_identity()

    return NefPartitionData(
        deltas=deltas, duals=tuple(duals), p_matrix=p_matrix, pairings=pairings,
        sigma_generators=tuple(sigma), sigma_dual_generators=tuple(sigma_dual),
        j_indices=j_indices, flags=flags, notes=tuple(notes),
    )


def cone_generators(spec: CISpec, nef: NefPartitionData
                    ) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[Fraction, ...], ...]]:
    return nef.sigma_generators, nef.sigma_dual_generators


@dataclass(frozen=True)
class MagicSquareReport:
    found: bool
    assignments: dict[int, int]                       # variable block q -> constant row block
    witnesses: dict[int, tuple[tuple[int, int], ...]]  # q -> ((row b, variable), ...)

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "assignments": {str(q): b for q, b in self.assignments.items()},
            "witnesses": {str(q): [list(p) for p in w] for q, w in self.witnesses.items()},
        }


def magic_square_check(cm: CayleyMatrix, forms) -> MagicSquareReport:
    """Match the z-coefficients over monomial rows against a constant-row column.

    For each deformation variable q, look for a constant row whose variable
    coefficients form the same multiset as the z_q coefficients of the
    monomial-row forms; a witness bijection is produced by sorted matching.
    The natural pairing q -> q is tried first, and the assignment across
    all q must be one-to-one.
    """
    spec = cm.spec
    k, n = spec.k, spec.n
    i_lam = cm.i_lambda

    def witness(q, qq):
        pvals = sorted(((forms[b - 1].z_coeffs[q - 1], b) for b in i_lam))
        wvals = sorted(((forms[spec.a(qq) - 1].i_coeffs[i], i + 1) for i in range(n)))
        if [v for v, _ in pvals] != [v for v, _ in wvals]:
            return None
        return tuple((b, i) for (_, b), (_, i) in zip(pvals, wvals))

    assignments: dict[int, int] = {}
    witnesses: dict[int, tuple[tuple[int, int], ...]] = {}
    used: set[int] = set()
    for q in range(1, k + 1):
        found = None
        for qq in [q] + [x for x in range(1, k + 1) if x != q]:
            if qq in used:
                continue
            w = witness(q, qq)
            if w is not None:
                found = (qq, w)
                break
        if found is None:
            return MagicSquareReport(False, assignments, witnesses)
        used.add(found[0])
        assignments[q] = found[0]
        witnesses[q] = found[1]
    return MagicSquareReport(True, assignments, witnesses)
