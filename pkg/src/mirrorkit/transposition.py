"""Transposed mirror candidate construction.

Transposing the Cayley matrix and re-reading its rows as monomials yields
a new complete intersection of the same combinatorial shape.  The row and
column bookkeeping is fixed by the matrix structure itself:

  * each x-column of L becomes a monomial of the transposed system, and the
    columns sharing an index set form one new block;
  * each old product row becomes a y-variable carried by those monomials,
    the old s-term and constant rows become the remaining y and s variables;
  * the new index set of a block is the set of old monomial rows of the
    block it came from.

What the matrix does not fix is the order of the new blocks and variables.
We order blocks so the new size sequence equals the original one (forced by
the size-multiset condition and required for the double transposition to
return home), and group variables by the disjoint-support decomposition of
the weight kernel, which is exactly the grouping that admits positive
block-supported weights.  Within a group, old rows stay in ascending
order.  Both paper examples reproduce verbatim under these rules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .ci_model import (
    Block,
    CayleyMatrix,
    CISpec,
    build_cayley,
    derive_weights,
    SpecError,
)
from .rational_linalg import (
    Matrix,
    PermutationMap,
    primitive_integer_vector,
    right_kernel,
    vectors_proportional,
)


class TranspositionError(SpecError):
    pass


class NoValidShapeError(TranspositionError):
    """No row/column permutation of the transpose has the required block shape."""


class NoInvolutiveNuError(TranspositionError):
    """Every shape-valid block matching fails the involution requirement."""


class NoRhoError(TranspositionError):
    """No permutation satisfies the weight-column defining relation."""


class InternalInvariantError(TranspositionError):
    """A construction identity that must hold was violated (implementation bug)."""


@dataclass(frozen=True)
class TransposeResult:
    tspec: CISpec
    nu: PermutationMap             # nu(j) = position of old block j in the new order
    nu_star: Matrix                # k x k permutation matrix, column j = e_{nu(j)}
    lam: PermutationMap            # lam(r) = old column feeding new monomial r
    row_to_var: tuple[tuple[int, int], ...]  # (old matrix row, new variable position)
    block_sources: tuple[int, ...]  # position q -> old block index
    rho: PermutationMap | None
    t_rho: PermutationMap | None
    condition_flags: dict[str, bool]
    notes: tuple[str, ...]

    def var_of_row(self, row: int) -> int:
        for r, v in self.row_to_var:
            if r == row:
                return v
        raise KeyError(row)

    def to_json(self) -> dict:
        return {
            "tspec": self.tspec.to_json(),
            "nu": self.nu.to_json(),
            "nu_star": self.nu_star.to_json(),
            "lambda": self.lam.to_json(),
            "row_to_var": [list(p) for p in self.row_to_var],
            "block_sources": list(self.block_sources),
            "rho": self.rho.to_json() if self.rho else None,
            "t_rho": self.t_rho.to_json() if self.t_rho else None,
            "condition_flags": dict(self.condition_flags),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def _choose_nu(taus: tuple[int, ...], tilde_taus: tuple[int, ...]) -> PermutationMap:
    """Smallest involution nu with tau_{nu(j)} = tilde_tau_j for every j."""
    k = len(taus)
    best = None
    for perm in itertools.permutations(range(1, k + 1)):
        if any(taus[perm[j] - 1] != tilde_taus[j] for j in range(k)):
            continue
        if any(perm[perm[j] - 1] != j + 1 for j in range(k)):
            continue
        if best is None or perm < best:
            best = perm
    if best is None:
        raise NoInvolutiveNuError("no involutive block matching exists")
    return PermutationMap(best)


def _weight_classes(diff: Matrix, k: int) -> list[tuple[list[int], tuple[int, ...]]]:
    """Partition columns of `diff` into k groups each carrying a positive kernel vector.

    Returns (0-based positions, primitive positive weights) per group, or raises
    NoValidShapeError when the kernel does not decompose that way.
    """
    kernel = right_kernel(diff)
    if len(kernel) != k:
        raise NoValidShapeError(
            f"weight kernel has dimension {len(kernel)}, expected {k}")
    n = diff.cols
    basis_rows = [tuple(vec[i] for vec in kernel) for i in range(n)]
    classes: list[list[int]] = []
    for i, row in enumerate(basis_rows):
        if all(x == 0 for x in row):
            raise NoValidShapeError(f"variable {i + 1} carries no weight")
        for cls in classes:
            if vectors_proportional(basis_rows[cls[0]], row):
                cls.append(i)
                break
        else:
            classes.append([i])
    if len(classes) != k:
        raise NoValidShapeError(
            f"weight kernel splits into {len(classes)} support groups, expected {k}")
    result = []
    for cls in classes:
        complement = [i for i in range(n) if i not in cls]
        # kernel vector vanishing outside the class
        constraints = [list(row) for row in diff.entries]
        for i in complement:
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            constraints.append(e)
        sub = right_kernel(Matrix.from_rows(constraints))
        if len(sub) != 1:
            raise NoValidShapeError("support group does not carry a unique weight ray")
        gen = primitive_integer_vector(sub[0])
        vals = [gen[i] for i in cls]
        if all(v < 0 for v in vals):
            vals = [-v for v in vals]
        if any(v <= 0 for v in vals):
            raise NoValidShapeError("no positive weight vector on a support group")
        result.append((cls, tuple(vals)))
    return result


def transpose_spec(spec: CISpec) -> TransposeResult:
    """Build the transposed specification with all permutation bookkeeping."""
    cm = build_cayley(spec)
    L = cm.matrix
    n, k = spec.n, spec.k
    taus = spec.taus
    tilde_taus = tuple(len(b.index_set) for b in spec.blocks)
    notes: list[str] = []
    flags: dict[str, bool] = {}

    flags["size_multisets_1_11"] = sorted(taus) == sorted(tilde_taus)
    if not flags["size_multisets_1_11"]:
        raise NoValidShapeError(
            f"monomial counts {taus} and index-set sizes {tilde_taus} differ as multisets")

    nu = _choose_nu(taus, tilde_taus)
    flags["involution_nu"] = nu.is_involution()
    position_of = {j: nu(j) for j in range(1, k + 1)}
    block_sources = tuple(sorted(position_of, key=lambda j: position_of[j]))

    raw_vars = list(cm.i_lambda)  # old monomial rows, ascending; raw position = index
    raw_index = {row: i for i, row in enumerate(raw_vars)}

    # raw exponents of the new monomials: column i of L restricted to monomial rows
    def raw_monomial(col: int) -> tuple[Fraction, ...]:
        return tuple(L[row - 1, col - 1] for row in raw_vars)

    new_blocks_raw = []  # per position: (source block, monomial columns, raw exponents)
    for q in range(1, k + 1):
        src = block_sources[q - 1]
        cols = list(spec.blocks[src - 1].index_set)
        new_blocks_raw.append((src, cols, [raw_monomial(c) for c in cols]))

    # index sets in raw coordinates: the source block's monomial rows
    raw_index_sets = [
        [raw_index[row] for row in spec.monomial_rows(src)]
        for src, _, _ in new_blocks_raw
    ]

    diff_rows = []
    for (src, cols, exps), iset in zip(new_blocks_raw, raw_index_sets):
        ind = [Fraction(1) if i in set(iset) else Fraction(0) for i in range(n)]
        for v in exps:
            diff_rows.append(tuple(a - b for a, b in zip(v, ind)))
    classes = _weight_classes(Matrix.from_rows(diff_rows), k)

    # assign one class to each block position, matching sizes; ties broken by
    # the smallest raw position in the class
    unassigned = sorted(range(k), key=lambda c: classes[c][0][0])
    assigned: list[int] = []
    for q in range(1, k + 1):
        want = taus[q - 1]
        pick = next((c for c in unassigned if len(classes[c][0]) == want), None)
        if pick is None:
            raise NoValidShapeError(
                f"no variable group of size {want} left for block position {q}")
        assigned.append(pick)
        unassigned.remove(pick)

    var_map = [0] * n  # raw position -> new 1-based position
    weights = []
    pos = 1
    for c in assigned:
        members, vals = classes[c]  # members ascend by construction
        full = [0] * n
        for raw_pos, val in zip(members, vals):
            var_map[raw_pos] = pos
            full[pos - 1] = val
            pos += 1
        weights.append(tuple(full))

    def relabel(vec) -> tuple[int, ...]:
        out = [0] * n
        for raw_pos, val in enumerate(vec):
            out[var_map[raw_pos] - 1] = int(val)
        return tuple(out)

    tblocks = []
    lam: list[int] = []
    for (src, cols, exps), iset in zip(new_blocks_raw, raw_index_sets):
        tblocks.append(Block(
            exponents=tuple(relabel(v) for v in exps),
            index_set=tuple(sorted(var_map[i] for i in iset)),
        ))
        lam.extend(cols)
    tspec = CISpec(n=n, k=k, blocks=tuple(tblocks), weights=tuple(weights))

    row_to_var = tuple(sorted((row, var_map[raw_index[row]]) for row in raw_vars))
    _verify_permuted_transpose(cm, tspec, lam, row_to_var, block_sources)
    flags["row_multiset_identity"] = True

    flags["lambda_matrix_identity"] = _lambda_matrix_identity(spec, cm, lam)
    flags["lambda_v_identity"] = _lambda_v_identity(spec, lam, row_to_var)

    nu_star = nu.matrix()

    result = TransposeResult(
        tspec=tspec, nu=nu, nu_star=nu_star, lam=PermutationMap(tuple(lam)),
        row_to_var=row_to_var, block_sources=block_sources,
        rho=None, t_rho=None, condition_flags=flags, notes=tuple(notes),
    )
    return _attach_symmetry(spec, result)


def _verify_permuted_transpose(cm: CayleyMatrix, tspec: CISpec, lam: list[int],
                               row_to_var: tuple[tuple[int, int], ...],
                               block_sources: tuple[int, ...]) -> None:
    """Entrywise check: the new Cayley matrix is a row/column permuted transpose."""
    spec = cm.spec
    n, k = spec.n, spec.k
    tcm = build_cayley(tspec)
    var_to_row = {v: r for r, v in row_to_var}

    # new row index -> old column index (in matrix coordinates)
    old_col_of_row: list[int] = []
    for q in range(1, k + 1):
        src = block_sources[q - 1]
        for c in spec.blocks[src - 1].index_set:
            old_col_of_row.append(c)
        old_col_of_row.append(n + 2 * src)        # s-term row from old y_{2 src}
        old_col_of_row.append(n + 2 * src - 1)    # product row from old y_{2 src - 1}
        old_col_of_row.append(n + 2 * k + src)    # constant row from old s_src

    # new column index -> old row index
    old_row_of_col: list[int] = [var_to_row[p] for p in range(1, n + 1)]
    for q in range(1, k + 1):
        a = spec.a(block_sources[q - 1])
        old_row_of_col.extend([a - 1, a - 2])     # y_{2q-1}, y_{2q}
    for q in range(1, k + 1):
        old_row_of_col.append(spec.a(block_sources[q - 1]))  # s_q

    size = spec.total_rows
    for r in range(size):
        for c in range(size):
            if tcm.matrix[r, c] != cm.matrix[old_row_of_col[c] - 1, old_col_of_row[r] - 1]:
                raise InternalInvariantError(
                    f"transpose mismatch at new entry ({r + 1},{c + 1})")


def _lambda_matrix_identity(spec: CISpec, cm: CayleyMatrix, lam: list[int]) -> bool:
    """lambda row-selects t(L_monomial) into the transposed monomial matrix."""
    raw_vars = list(cm.i_lambda)
    l_lambda = [[cm.matrix[row - 1, c] for c in range(spec.n)] for row in raw_vars]
    t_l = [list(col) for col in zip(*l_lambda)]  # rows = old variables
    new_rows = [[cm.matrix[row - 1, old_col - 1] for row in raw_vars] for old_col in lam]
    return all(t_l[lam[r] - 1] == new_rows[r] for r in range(spec.n))


def _lambda_v_identity(spec, lam, row_to_var) -> bool:
    """Check lambda . V = TV with TV's column j read as block nu(j)'s index set."""
    k = spec.k
    n = spec.n
    membership = {}
    for j, blk in enumerate(spec.blocks, start=1):
        for i in blk.index_set:
            membership[i] = j
    lam_v = [[1 if membership[lam[r]] == j + 1 else 0 for j in range(k)]
             for r in range(n)]
    var_map = dict(row_to_var)
    tv = [[0] * k for _ in range(n)]
    for j in range(1, k + 1):
        for row in spec.monomial_rows(j):
            tv[var_map[row] - 1][j - 1] = 1
    return lam_v == tv


# ---------------------------------------------------------------------------
# involution and symmetry conditions
# ---------------------------------------------------------------------------


def _canonical_key(spec: CISpec):
    return sorted((tuple(sorted(b.exponents)), tuple(b.index_set)) for b in spec.blocks)


def double_transpose_relabel(spec: CISpec, tr: TransposeResult,
                             tr2: TransposeResult) -> tuple[int, ...]:
    """sigma[p-1] = original variable recovered at position p of tr2.tspec."""
    tspec = tr.tspec
    i_lam = list(tspec.i_lambda())
    var_to_row2 = {v: r for r, v in tr2.row_to_var}
    sigma = []
    for p in range(1, spec.n + 1):
        row = var_to_row2[p]                    # monomial row of tspec
        mono_pos = i_lam.index(row) + 1         # its position among tspec monomials
        sigma.append(tr.lam(mono_pos))          # the original variable it came from
    return tuple(sigma)


def _apply_variable_permutation(spec: CISpec, sigma: tuple[int, ...]) -> CISpec:
    """Relabel variable p as sigma[p-1] (weights dropped; order-preserving)."""
    def remap(vec):
        out = [0] * spec.n
        for p, val in enumerate(vec, start=1):
            out[sigma[p - 1] - 1] = val
        return tuple(out)
    blocks = tuple(Block(exponents=tuple(remap(v) for v in b.exponents),
                         index_set=tuple(sorted(sigma[i - 1] for i in b.index_set)))
                   for b in spec.blocks)
    return CISpec(n=spec.n, k=spec.k, blocks=blocks, weights=None)


def check_involution(spec: CISpec) -> bool:
    """True when transposing twice returns the spec up to recorded permutations."""
    tr = transpose_spec(spec)
    tr2 = transpose_spec(tr.tspec)
    sigma = double_transpose_relabel(spec, tr, tr2)
    recovered = _apply_variable_permutation(tr2.tspec, sigma)
    return _canonical_key(recovered) == _canonical_key(spec)


def _find_rho(spec: CISpec, weights) -> tuple[PermutationMap, tuple[int, ...], bool] | None:
    """Search an involution rho mapping each index set onto a block's variable range.

    Returns (rho images, pi block pairing, symmetric) or None.  Tries the
    identity block pairing first, then all size-compatible pairings.
    """
    n, k = spec.n, spec.k
    diag = weights.diagonal
    owner_set = {}
    for q, blk in enumerate(spec.blocks, start=1):
        for i in blk.index_set:
            owner_set[i] = q
    owner_range = {}
    for q in range(1, k + 1):
        for i in spec.block_range(q):
            owner_range[i] = q

    sizes_ok = []
    for perm in itertools.permutations(range(1, k + 1)):
        if all(len(spec.blocks[q - 1].index_set) == spec.taus[perm[q - 1] - 1]
               for q in range(1, k + 1)):
            sizes_ok.append(perm)
    sizes_ok.sort(key=lambda p: (p != tuple(range(1, k + 1)), p))

    for pi in sizes_ok:
        allowed = {}
        for i in range(1, n + 1):
            targets = set(spec.block_range(pi[owner_set[i] - 1]))
            allowed[i] = {j for j in targets if diag[j - 1] == diag[i - 1]
                          and i in set(spec.block_range(pi[owner_set[j] - 1]))}
        rho = _involution_matching(n, allowed)
        if rho is not None:
            perm = PermutationMap(rho)
            g_rho = Matrix.from_rows(
                [[diag[i] if rho[j] == i + 1 else 0 for j in range(n)] for i in range(n)])
            symmetric = g_rho == g_rho.transpose()
            return perm, pi, symmetric
    return None


def _involution_matching(n: int, allowed: dict[int, set[int]]) -> tuple[int, ...] | None:
    images: dict[int, int] = {}

    def place(i: int) -> bool:
        if i > n:
            return True
        if i in images:
            return place(i + 1)
        for j in sorted(allowed[i]):
            if j in images and images[j] != i:
                continue
            if j == i:
                images[i] = i
                if place(i + 1):
                    return True
                del images[i]
            elif j not in images and i in allowed[j]:
                images[i], images[j] = j, i
                if place(i + 1):
                    return True
                del images[i], images[j]
        return False

    if place(1):
        return tuple(images[i] for i in range(1, n + 1))
    return None


def find_rho(spec: CISpec) -> tuple[PermutationMap, tuple[int, ...], bool]:
    """Public wrapper: the permutation relating index sets to weight supports.

    Raises NoRhoError when no block pairing has compatible sizes or no
    weight-preserving involution exists for any of them.
    """
    found = _find_rho(spec, derive_weights(spec))
    if found is None:
        raise NoRhoError("no permutation maps index sets onto weight supports")
    return found


def check_symmetry_conditions(spec: CISpec, tr: TransposeResult) -> dict:
    """Find rho / t_rho and report whether the weighted permutations are symmetric."""
    rho, pi, sym = find_rho(spec)
    t_found = _find_rho(tr.tspec, derive_weights(tr.tspec))
    report = {
        "rho": rho,
        "rho_block_pairing": pi,
        "rho_symmetric_3_11": sym,
        "t_rho": t_found[0] if t_found else None,
        "t_rho_block_pairing": t_found[1] if t_found else None,
        "t_rho_symmetric_3_11T": t_found[2] if t_found else False,
    }
    return report


def _attach_symmetry(spec: CISpec, tr: TransposeResult) -> TransposeResult:
    flags = dict(tr.condition_flags)
    notes = list(tr.notes)
    rho = t_rho = None
    try:
        report = check_symmetry_conditions(spec, tr)
        rho = report["rho"]
        t_rho = report["t_rho"]
        flags["rho_symmetric_3_11"] = report["rho_symmetric_3_11"]
        flags["t_rho_symmetric_3_11T"] = report["t_rho_symmetric_3_11T"]
        if report["rho_block_pairing"] != tuple(range(1, spec.k + 1)):
            notes.append("rho pairs index sets with permuted block ranges")
    except NoRhoError as exc:
        flags["rho_symmetric_3_11"] = False
        flags["t_rho_symmetric_3_11T"] = False
        notes.append(str(exc))
    return replace(tr, rho=rho, t_rho=t_rho,
                   condition_flags=flags, notes=tuple(notes))
