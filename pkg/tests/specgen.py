"""Random valid specification generator for the property suite.

Valid specs are a measure-zero slice of random exponent data, so instead
of rejection sampling we construct them: pick block sizes, a partition
into index sets and positive weights first, then sample monomials whose
weighted degrees match the forced charges range by range.  A candidate is
kept only if its weights re-derive uniquely and its Cayley matrix is
nonsingular.
"""

import random

from mirrorkit.ci_model import (
    AmbiguousWeightsError,
    Block,
    CISpec,
    NoPositiveSolutionError,
    derive_weights,
    validate,
)

MAX_EXPONENT = 7


def _degree_vectors(weights, target, rng, cap=4000):
    """Nonnegative integer vectors u (entries <= MAX_EXPONENT) with <u, weights> = target."""
    solutions = []

    def rec(idx, remaining, prefix):
        if len(solutions) >= cap:
            return
        if idx == len(weights):
            if remaining == 0:
                solutions.append(tuple(prefix))
            return
        w = weights[idx]
        for e in range(min(MAX_EXPONENT, remaining // w) + 1):
            rec(idx + 1, remaining - e * w, prefix + [e])

    rec(0, target, [])
    return solutions


def random_spec(rng: random.Random, max_n: int = 8, max_k: int = 2) -> CISpec | None:
    k = rng.randint(1, max_k)
    taus = [rng.randint(1, 4) for _ in range(k)]
    n = sum(taus)
    if n > max_n or n < k:
        return None

    positions = list(range(1, n + 1))
    rng.shuffle(positions)
    index_sets = []
    cut = 0
    sizes = []
    remaining = n - k
    for q in range(k):
        extra = rng.randint(0, remaining) if q < k - 1 else remaining
        sizes.append(1 + extra)
        remaining -= extra
    for size in sizes:
        index_sets.append(tuple(sorted(positions[cut:cut + size])))
        cut += size

    diag = [rng.randint(1, 3) for _ in range(n)]
    ranges = []
    start = 0
    for t in taus:
        ranges.append(list(range(start, start + t)))
        start += t

    blocks = []
    for j in range(k):
        members = set(index_sets[j])
        targets = [sum(diag[i] for i in ranges[q] if i + 1 in members) for q in range(k)]
        rows = set()
        attempts = 0
        while len(rows) < taus[j] and attempts < 60:
            attempts += 1
            vec = [0] * n
            ok = True
            for q in range(k):
                ws = [diag[i] for i in ranges[q]]
                sols = _degree_vectors(ws, targets[q], rng)
                if not sols:
                    ok = False
                    break
                pick = rng.choice(sols)
                for i, e in zip(ranges[q], pick):
                    vec[i] = e
            if ok:
                rows.add(tuple(vec))
        if len(rows) < taus[j]:
            return None
        blocks.append(Block(exponents=tuple(sorted(rows)), index_set=index_sets[j]))

    spec = CISpec(n=n, k=k, blocks=tuple(blocks))
    try:
        derive_weights(spec)
    except (AmbiguousWeightsError, NoPositiveSolutionError):
        return None
    report = validate(spec)
    if not report.ok:
        return None
    return spec


def generate_valid_specs(count: int, seed: int = 20260810, max_n: int = 8,
                         max_k: int = 2) -> list[CISpec]:
    rng = random.Random(seed)
    specs = []
    attempts = 0
    while len(specs) < count and attempts < count * 300:
        attempts += 1
        spec = random_spec(rng, max_n=max_n, max_k=max_k)
        if spec is not None:
            specs.append(spec)
    if len(specs) < count:
        raise RuntimeError(f"only generated {len(specs)} specs in {attempts} attempts")
    return specs
