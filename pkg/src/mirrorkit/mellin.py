"""Linear forms of the inverse Cayley matrix and Gamma-product identities.

Inverting the Cayley matrix turns the period integral's Mellin transform
into a product of Gamma factors with affine-linear arguments, one per
matrix row.  This module solves for those forms, normalizes them by the
integrality modulus Delta, checks the structural sum rules, and verifies
the two closed-form Gamma products (the plain one with a Gamma(z) prefactor
per block, and the factorized one expressed through the transposed weight
data) as exact argument-multiset identities.

Gamma products are compared up to reflection: a denominator factor
Gamma(1-x) and a numerator factor Gamma(x) differ by pi/sin(pi x), which is
precisely the periodic ambiguity the identities allow.  Canonicalization
moves every denominator factor to the numerator through x -> 1-x and
compares multisets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .ci_model import CayleyMatrix, charges, CISpec, derive_weights, WeightSystem
from .rational_linalg import Matrix, invert, rat_parse, rat_str
from .transposition import TransposeResult


class MellinError(Exception):
    pass


class ClassificationFailureError(MellinError):
    """A form matches no structural pattern; the spec or construction is broken."""


class LemmaShapeViolationError(MellinError):
    def __init__(self, index: int, message: str):
        super().__init__(f"row {index}: {message}")
        self.index = index


class NotFactorizableError(MellinError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class IdentityViolatedError(MellinError):
    def __init__(self, q: int, message: str):
        super().__init__(f"block {q}: {message}")
        self.q = q


# ---------------------------------------------------------------------------
# affine forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZForm:
    """Affine form c0 + sum_q c_q z_q over the k deformation variables."""

    coeffs: tuple[Fraction, ...]
    const: Fraction

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "ZForm") -> "ZForm":
        return ZForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                     self.const + other.const)

    def __sub__(self, other: "ZForm") -> "ZForm":
        return ZForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
                     self.const - other.const)

    def scale(self, c) -> "ZForm":
        c = Fraction(c)
        return ZForm(tuple(c * a for a in self.coeffs), c * self.const)

    def reflect(self) -> "ZForm":
        """1 - self."""
        return ZForm(tuple(-a for a in self.coeffs), 1 - self.const)

    def is_zero(self) -> bool:
        return self.const == 0 and all(c == 0 for c in self.coeffs)

    def sort_key(self):
        return (self.const, self.coeffs)

    @staticmethod
    def z(q: int, k: int) -> "ZForm":
        return ZForm(tuple(Fraction(int(i == q - 1)) for i in range(k)), Fraction(0))

    @staticmethod
    def one_minus_z(q: int, k: int) -> "ZForm":
        return ZForm.z(q, k).reflect()

    def __str__(self) -> str:
        d = 1
        for x in (self.const, *self.coeffs):
            d = d * x.denominator // math.gcd(d, x.denominator)
        terms = []
        c0 = self.const * d
        if c0:
            terms.append(str(c0.numerator))
        for q, c in enumerate(self.coeffs, start=1):
            ci = int(c * d)
            if ci == 0:
                continue
            mag = abs(ci)
            body = f"z{q}" if mag == 1 else f"{mag}*z{q}"
            if not terms:
                terms.append(body if ci > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if ci > 0 else f"- {body}")
        num = " ".join(terms) if terms else "0"
        if d == 1:
            return num
        return f"({num})/{d}" if " " in num else f"{num}/{d}"

    def to_json(self) -> dict:
        return {"coeffs": [rat_str(c) for c in self.coeffs], "const": rat_str(self.const)}

    @staticmethod
    def from_json(data: dict) -> "ZForm":
        return ZForm(tuple(rat_parse(c) for c in data["coeffs"]), rat_parse(data["const"]))


@dataclass(frozen=True)
class LinearForm:
    """One affine form with formal arguments i_1..i_n, z_1..z_k, zeta_1..zeta_2k.

    Coefficients are read off a column of the inverse Cayley matrix; the
    constant collects the +1 shifts attached to the i and zeta slots, so the
    base-point value (all i and zeta at zero) is const + <z-part, z>.
    """

    i_coeffs: tuple[Fraction, ...]
    zeta_coeffs: tuple[Fraction, ...]
    z_coeffs: tuple[Fraction, ...]
    const: Fraction

    @staticmethod
    def from_inverse_column(col, n: int, k: int) -> "LinearForm":
        i_c = tuple(col[:n])
        zeta_c = tuple(col[n:n + 2 * k])
        z_c = tuple(col[n + 2 * k:])
        return LinearForm(i_c, zeta_c, z_c, sum(i_c) + sum(zeta_c))

    @property
    def n(self) -> int:
        return len(self.i_coeffs)

    @property
    def k(self) -> int:
        return len(self.z_coeffs)

    def xi(self) -> ZForm:
        """Specialization at i = 0, zeta = 0."""
        return ZForm(self.z_coeffs, self.const)

    # coefficient aliases: w pairs with the torus variables, p with the
    # deformations, q with the hyperplane multipliers
    @property
    def w(self) -> tuple[Fraction, ...]:
        return self.i_coeffs

    @property
    def p(self) -> tuple[Fraction, ...]:
        return self.z_coeffs

    @property
    def q(self) -> tuple[Fraction, ...]:
        return self.zeta_coeffs

    def denominator(self) -> int:
        d = 1
        for x in (*self.i_coeffs, *self.zeta_coeffs, *self.z_coeffs):
            d = d * x.denominator // math.gcd(d, x.denominator)
        return d

    def numerators(self, delta: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Integer vectors (A, B, D) with respect to a given common modulus."""
        def ints(xs):
            out = []
            for x in xs:
                y = x * delta
                if y.denominator != 1:
                    raise MellinError(f"{delta} is not a common modulus")
                out.append(int(y))
            return tuple(out)
        return ints(self.i_coeffs), ints(self.z_coeffs), ints(self.zeta_coeffs)

    def reduced_numerators(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], int]:
        """(A, B, D, d) over the form's own denominator; gcd of all entries is 1."""
        d = self.denominator()
        a, b, dd = self.numerators(d)
        return a, b, dd, d

    def to_json(self) -> dict:
        return {
            "i_coeffs": [rat_str(c) for c in self.i_coeffs],
            "zeta_coeffs": [rat_str(c) for c in self.zeta_coeffs],
            "z_coeffs": [rat_str(c) for c in self.z_coeffs],
            "const": rat_str(self.const),
        }

    @staticmethod
    def from_json(data: dict) -> "LinearForm":
        form = LinearForm(
            tuple(rat_parse(c) for c in data["i_coeffs"]),
            tuple(rat_parse(c) for c in data["zeta_coeffs"]),
            tuple(rat_parse(c) for c in data["z_coeffs"]),
            rat_parse(data["const"]),
        )
        if form.const != sum(form.i_coeffs) + sum(form.zeta_coeffs):
            raise MellinError("constant term inconsistent with coefficient sums")
        return form


# ---------------------------------------------------------------------------
# Gamma products
# ---------------------------------------------------------------------------


def _grouped(forms) -> list[tuple[ZForm, int]]:
    out: list[tuple[ZForm, int]] = []
    for f in sorted(forms, key=ZForm.sort_key):
        if out and out[-1][0] == f:
            out[-1] = (f, out[-1][1] + 1)
        else:
            out.append((f, 1))
    return out


@dataclass(frozen=True)
class GammaProduct:
    """Product of Gamma factors, canonical up to the periodic reflection ambiguity."""

    numerator: tuple[ZForm, ...]
    denominator: tuple[ZForm, ...]
    delta: int
    note: str = "up to a Delta-periodic factor"

    def canonical_multiset(self) -> tuple[tuple, ...]:
        """All arguments as numerator factors, denominators reflected through 1-x."""
        forms = list(self.numerator) + [d.reflect() for d in self.denominator]
        return tuple(sorted(f.sort_key() for f in forms))

    def reflections(self) -> int:
        return len(self.denominator)

    def __str__(self) -> str:
        def side(forms):
            return "*".join(
                f"Gamma({f})" + (f"^{m}" if m > 1 else "")
                for f, m in _grouped(forms)) or "1"
        num = side(self.numerator)
        if not self.denominator:
            return num
        return f"{num} / [{side(self.denominator)}]"

    def to_json(self) -> dict:
        return {
            "numerator": [f.to_json() for f in self.numerator],
            "denominator": [f.to_json() for f in self.denominator],
            "delta": self.delta,
            "note": self.note,
        }

    @staticmethod
    def from_json(data: dict) -> "GammaProduct":
        return GammaProduct(
            tuple(ZForm.from_json(f) for f in data["numerator"]),
            tuple(ZForm.from_json(f) for f in data["denominator"]),
            int(data["delta"]),
            data.get("note", "up to a Delta-periodic factor"),
        )


def gamma_equal(a: GammaProduct, b: GammaProduct) -> bool:
    return a.canonical_multiset() == b.canonical_multiset()


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def solve_xi(cm: CayleyMatrix) -> tuple[LinearForm, ...]:
    """One form per matrix row, read off the columns of the inverse."""
    inv = invert(cm.matrix)
    n, k = cm.spec.n, cm.spec.k
    return tuple(LinearForm.from_inverse_column(inv.col(a), n, k)
                 for a in range(cm.size))


def compute_delta(forms) -> int:
    """Smallest positive integer clearing every denominator of every form."""
    d = 1
    for f in forms:
        fd = f.denominator()
        d = d * fd // math.gcd(d, fd)
    return d


def classify_forms(cm: CayleyMatrix, forms) -> tuple[str, ...]:
    """Tag each form by its structural pattern and check row-kind alignment.

    s-term rows give the pure form z_nu (type a); constant rows carry the
    signature zeta_{2nu-1} + zeta_{2nu} - z_nu (type b); monomial and
    product rows pair each z_l against -zeta_{2l-1} only (type c).
    """
    spec = cm.spec
    k = spec.k
    tags = []
    for a, form in enumerate(forms, start=1):
        block, kind, _ = cm.row_labels[a - 1]
        if not any((*form.i_coeffs, *form.zeta_coeffs, *form.z_coeffs, form.const)):
            # impossible for a nonsingular matrix
            raise ClassificationFailureError(f"form {a} is identically zero")
        tag = None
        if all(c == 0 for c in form.i_coeffs) and all(c == 0 for c in form.zeta_coeffs):
            nz = [q for q, c in enumerate(form.z_coeffs, start=1) if c != 0]
            if len(nz) == 1 and form.z_coeffs[nz[0] - 1] == 1 and form.const == 0:
                tag = "a"
        if tag is None:
            for nu in range(1, k + 1):
                zc = [Fraction(0)] * k
                zc[nu - 1] = Fraction(-1)
                zetac = [Fraction(0)] * (2 * k)
                zetac[2 * nu - 2] = Fraction(1)
                zetac[2 * nu - 1] = Fraction(1)
                if list(form.z_coeffs) == zc and list(form.zeta_coeffs) == zetac:
                    tag = "b"
                    break
        if tag is None:
            if all(form.zeta_coeffs[2 * l - 1] == 0
                   and form.zeta_coeffs[2 * l - 2] == -form.z_coeffs[l - 1]
                   for l in range(1, k + 1)):
                tag = "c"
        if tag is None:
            raise ClassificationFailureError(f"form {a} matches no pattern")
        expected = {"s-row": "a", "constant-row": "b",
                    "monomial": "c", "product-row": "c"}[kind]
        if tag != expected:
            raise ClassificationFailureError(
                f"form {a} tagged {tag} but its row kind {kind} requires {expected}")
        tags.append(tag)
    return tuple(tags)


@dataclass(frozen=True)
class SumRuleReport:
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"checks": dict(self.checks), "ok": self.ok}


def check_sum_rules(forms) -> SumRuleReport:
    """Column sums of the inverse vanish and the forms sum to zeta_1+..+zeta_2k+2k."""
    n = forms[0].n
    k = forms[0].k
    checks = {}
    checks["i_column_sums_vanish"] = all(
        sum(f.i_coeffs[j] for f in forms) == 0 for j in range(n))
    checks["z_column_sums_vanish"] = all(
        sum(f.z_coeffs[q] for f in forms) == 0 for q in range(k))
    checks["zeta_column_sums_one"] = all(
        sum(f.zeta_coeffs[l] for f in forms) == 1 for l in range(2 * k))
    checks["constants_sum_2k"] = sum(f.const for f in forms) == 2 * k
    return SumRuleReport(checks)


def lemma_form(cm: CayleyMatrix, forms) -> GammaProduct:
    """The plain Gamma product: Gamma(z_nu) per block times Gamma(xi_j) over monomial rows.

    Requires the three special forms of each block to be z_nu, z_nu and
    1 - z_nu; any deviation means the construction is broken.
    """
    spec = cm.spec
    k = spec.k
    for nu in range(1, k + 1):
        a = spec.a(nu)
        z_nu = ZForm.z(nu, k)
        if forms[a - 3].xi() != z_nu:
            raise LemmaShapeViolationError(a - 2, f"expected z{nu}")
        if forms[a - 2].xi() != z_nu:
            raise LemmaShapeViolationError(a - 1, f"expected z{nu}")
        if forms[a - 1].xi() != z_nu.reflect():
            raise LemmaShapeViolationError(a, f"expected 1 - z{nu}")
    numerator = [ZForm.z(nu, k) for nu in range(1, k + 1)]
    numerator.extend(forms[j - 1].xi() for j in cm.i_lambda)
    return GammaProduct(tuple(sorted(numerator, key=ZForm.sort_key)), (),
                        compute_delta(forms))


@dataclass(frozen=True)
class XiFactorization:
    """Common forms xi^(nu) with the transposed weights as proportionality factors."""

    xi_forms: tuple[ZForm, ...]                  # one per transposed block position
    factors: tuple[tuple[int, ...], ...]         # transposed weight values per block
    row_groups: tuple[tuple[int, ...], ...]      # matrix rows grouped per block
    p_tilde: Matrix | None                       # xi = p_tilde . (1 - z), when expressible

    def to_json(self) -> dict:
        return {
            "xi_forms": [f.to_json() for f in self.xi_forms],
            "factors": [list(f) for f in self.factors],
            "row_groups": [list(g) for g in self.row_groups],
            "p_tilde": self.p_tilde.to_json() if self.p_tilde else None,
        }


def factorize_xi(spec: CISpec, tr: TransposeResult, forms,
                 tweights: WeightSystem | None = None) -> XiFactorization:
    """Group the monomial-row forms by the transposed blocks and factor them.

    The form of matrix row a must equal (transposed weight of its image
    variable) times a common form xi^(nu), where nu is the transposed block
    whose variable range receives the row.
    """
    if tweights is None:
        tweights = derive_weights(tr.tspec)
    tsp = tr.tspec
    diag = tweights.diagonal
    xi_forms = []
    factor_lists = []
    row_groups = []
    for q in range(1, tsp.k + 1):
        rng = tsp.block_range(q)
        rows = sorted((v, r) for r, v in tr.row_to_var if v in set(rng))
        group_rows = tuple(r for _, r in rows)
        factors = tuple(diag[v - 1] for v, _ in rows)
        base_row, base_factor = group_rows[0], factors[0]
        xi_nu = forms[base_row - 1].xi().scale(Fraction(1, base_factor))
        for r, c in zip(group_rows, factors):
            if forms[r - 1].xi() != xi_nu.scale(c):
                raise NotFactorizableError(
                    r, f"form is not {c} times the common form of block {q}")
        xi_forms.append(xi_nu)
        factor_lists.append(factors)
        row_groups.append(group_rows)

    p_tilde = None
    k = tsp.k
    if all(sum(f.coeffs) == -f.const for f in xi_forms):
        p_tilde = Matrix.from_rows([[-c for c in f.coeffs] for f in xi_forms])
    return XiFactorization(tuple(xi_forms), tuple(factor_lists),
                           tuple(row_groups), p_tilde)


@dataclass(frozen=True)
class Theorem31Report:
    identity_holds: bool
    block_to_z: tuple[int, ...]       # block q's charge contraction equals 1 - z_{block_to_z[q-1]}
    matches_nu_inverse: bool
    reduces_to_lemma_form: bool
    symbolic: str                     # the product written through the xi symbols

    def to_json(self) -> dict:
        return {
            "identity_holds": self.identity_holds,
            "block_to_z": list(self.block_to_z),
            "matches_nu_inverse": self.matches_nu_inverse,
            "reduces_to_lemma_form": self.reduces_to_lemma_form,
            "symbolic": self.symbolic,
        }


def _symbolic_product(xi: "XiFactorization", contraction) -> str:
    """Render the factorized product through the xi^(q) symbols."""
    def sym(c, q):
        return f"xi^({q})" if c == 1 else f"{c}*xi^({q})"

    parts = []
    for q, factors in enumerate(xi.factors, start=1):
        grouped: dict[int, int] = {}
        for c in factors:
            grouped[c] = grouped.get(c, 0) + 1
        for c, m in sorted(grouped.items()):
            parts.append(f"Gamma({sym(c, q)})" + (f"^{m}" if m > 1 else ""))
    dens = []
    for row in contraction:
        terms = [sym(c, q) for q, c in enumerate(row, start=1) if c]
        dens.append("Gamma(" + " + ".join(terms) + ")")
    return "*".join(parts) + " / [" + "*".join(dens) + "]"


def verify_theorem_31(spec: CISpec, tr: TransposeResult, xi: XiFactorization,
                      forms, tweights: WeightSystem | None = None
                      ) -> tuple[Theorem31Report, GammaProduct]:
    """Check the charge contraction identity and emit the factorized Gamma product.

    For each transposed block q the contraction sum_nu (charge of block q
    under weight nu) * xi^(nu) must equal 1 - z_m for some m, bijectively.
    The resulting product of Gamma((weight) * xi^(nu)) over all transposed
    weight entries divided by the k contraction Gammas must reduce to the
    plain product by reflection alone.
    """
    if tweights is None:
        tweights = derive_weights(tr.tspec)
    tsp = tr.tspec
    k = tsp.k
    tq = charges(tsp, tweights)
    block_to_z = []
    used = set()
    for q in range(1, k + 1):
        d = ZForm(tuple(Fraction(0) for _ in range(k)), Fraction(0))
        for nu in range(1, k + 1):
            d = d + xi.xi_forms[nu - 1].scale(tq.entries[q - 1][nu - 1])
        match = next((m for m in range(1, k + 1)
                      if m not in used and d == ZForm.one_minus_z(m, k)), None)
        if match is None:
            raise IdentityViolatedError(q, f"contraction gives {d}, not of the form 1 - z_m")
        used.add(match)
        block_to_z.append(match)

    matches_nu_inverse = tuple(block_to_z) == tr.nu.inverse().images

    numerator = []
    for xi_nu, factors in zip(xi.xi_forms, xi.factors):
        numerator.extend(xi_nu.scale(c) for c in factors)
    denominator = [ZForm.one_minus_z(m, k) for m in block_to_z]
    product = GammaProduct(tuple(sorted(numerator, key=ZForm.sort_key)),
                           tuple(sorted(denominator, key=ZForm.sort_key)),
                           compute_delta(forms))

    cm_rows = {tuple(forms[r - 1].xi().sort_key()) for g in xi.row_groups for r in g}
    num_rows = {tuple(f.sort_key()) for f in numerator}
    if cm_rows != num_rows:
        raise IdentityViolatedError(0, "factor multiset does not match the monomial forms")

    from .ci_model import build_cayley
    lemma = lemma_form(build_cayley(spec), forms)
    report = Theorem31Report(
        identity_holds=True,
        block_to_z=tuple(block_to_z),
        matches_nu_inverse=matches_nu_inverse,
        reduces_to_lemma_form=gamma_equal(product, lemma),
        symbolic=_symbolic_product(xi, tq.entries),
    )
    return report, product
