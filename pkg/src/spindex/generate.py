"""Seeded generators for randomized test data: block paths, ellipsoid
parameter vectors, orbit records, and filtered complexes.

Everything is driven by a caller-supplied random.Random so runs are
reproducible from a seed.  Quadratic values within one generated object
always share a single field so sums and ratios stay representable.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .blockpaths import BlockPath, Hyperbolic, Rotation, Shear
from .exact import ExactReal, exact
from .orbits import ellipsoid_system
from .persistence import FilteredComplex, Generator
from .recurrence import OrbitSystem

_FIELDS = (2, 3, 5, 6, 7, 10)


def random_rotation(rng: Random, d: int | None = None) -> Rotation:
    """Rotation with a rational or quadratic rotation number; quadratic
    ones live in Q(sqrt(d))."""
    if d is not None and rng.random() < 0.6:
        a = Fraction(rng.randrange(-3, 4), rng.randrange(1, 5))
        b = Fraction(rng.choice((-2, -1, 1, 2)), rng.randrange(1, 5))
        return Rotation(exact(a) + ExactReal.sqrt(d) * b)
    while True:
        lam = Fraction(rng.randrange(-12, 13), rng.randrange(2, 11))
        if lam.denominator > 1:
            return Rotation(exact(lam))


def random_block_path(rng: Random, max_half_dim: int = 4,
                      allow_shears: bool = True) -> BlockPath:
    """Random path of transverse half-dimension 1..max_half_dim."""
    d = rng.choice(_FIELDS) if rng.random() < 0.5 else None
    target = rng.randrange(1, max_half_dim + 1)
    blocks = []
    used = 0
    while used < target:
        room = target - used
        kind = rng.randrange(6 if allow_shears and room >= 1 else 4)
        if kind < 2:
            blocks.append(random_rotation(rng, d))
            used += 1
        elif kind < 4:
            h = rng.randrange(-3, 4)
            blocks.append(Hyperbolic(h, h % 2 == 1))
            used += 1
        else:
            form = rng.choice(("zero", "q0", "qplus", "qminus"))
            size = rng.choice((1, 3)) if form == "q0" else \
                rng.randrange(1, min(room, 2) + 1)
            if size > room:
                continue
            blocks.append(Shear(form, size))
            used += size
    return BlockPath(rng.randrange(-2, 4), tuple(blocks))


def random_nondegenerate_path(rng: Random, max_half_dim: int = 3
                              ) -> BlockPath:
    """Shear-free path; its low iterates are generically nondegenerate."""
    p = random_block_path(rng, max_half_dim, allow_shears=False)
    return p


def random_ellipsoid_deltas(rng: Random, n: int) -> tuple:
    """Strictly increasing parameters in one quadratic field with
    pairwise irrational ratios."""
    d = rng.choice(_FIELDS)
    root = ExactReal.sqrt(d)
    picked = []   # (p, q) with value p + q*sqrt(d)
    guard = 0
    while len(picked) < n:
        guard += 1
        if guard > 500:
            raise RuntimeError("parameter generation stalled")
        p = Fraction(rng.randrange(0, 9), rng.randrange(1, 4))
        q = Fraction(rng.randrange(1, 7), rng.randrange(1, 4))
        if any(p * q2 == p2 * q for p2, q2 in picked):
            continue   # proportional pair would give a rational ratio
        val = exact(p) + root * q
        if any(val == exact(p2) + root * q2 for p2, q2 in picked):
            continue
        picked.append((p, q))
    vals = sorted((exact(p) + root * q for p, q in picked),
                  key=lambda v: float(v))
    return tuple(vals)


def random_ellipsoid(rng: Random, n: int) -> OrbitSystem:
    return ellipsoid_system(random_ellipsoid_deltas(rng, n))


def random_filtered_complex(rng: Random, max_generators: int = 40,
                            field_char: int = 0) -> FilteredComplex:
    """Random complex with exact square-zero boundary.

    Built as a direct sum of two-generator cancelling pairs and
    essential singles, then scrambled by filtration-compatible integer
    basis changes, which preserve square-zero and homology.
    """
    count = rng.randrange(4, max_generators + 1)
    filts = []
    for _ in range(count):
        r = rng.random()
        if r < 0.75:
            filts.append(exact(Fraction(rng.randrange(1, 40),
                                        rng.randrange(1, 6))))
        elif r < 0.9:
            filts.append(ExactReal.sqrt(2) * Fraction(rng.randrange(1, 20),
                                                      rng.randrange(1, 4)))
        else:
            filts.append(exact(rng.randrange(1, 12)))
    gens = []
    boundary: dict[str, dict[str, int]] = {}
    i = 0
    gid = 0
    while i < count:
        deg = rng.randrange(0, 5)
        if i + 1 < count and rng.random() < 0.6:
            fa, fb = filts[i], filts[i + 1]
            if fb < fa:
                fa, fb = fb, fa
            a, b = f"g{gid}", f"g{gid + 1}"
            gens.append(Generator(a, deg, fa))
            gens.append(Generator(b, deg + 1, fb))
            coeff = rng.choice((-3, -2, -1, 1, 2, 3, 2, 3))
            boundary[b] = {a: coeff}
            gid += 2
            i += 2
        else:
            gens.append(Generator(f"g{gid}", deg, filts[i]))
            gid += 1
            i += 1
    # basis scrambling: e_i <- e_i + c e_j needs equal degrees and
    # filt(e_j) <= filt(e_i); boundary updates keep d*d = 0
    cols = {g.gid: dict(boundary.get(g.gid, {})) for g in gens}
    by_deg: dict[int, list] = {}
    for g in gens:
        by_deg.setdefault(g.degree, []).append(g)
    filt_of = {g.gid: g.filtration for g in gens}
    for _ in range(2 * count):
        deg = rng.choice(list(by_deg))
        pool = by_deg[deg]
        if len(pool) < 2:
            continue
        gi, gj = rng.sample(pool, 2)
        if filt_of[gi.gid] < filt_of[gj.gid]:
            gi, gj = gj, gi
        c = rng.choice((-2, -1, 1, 2))
        col_j = cols.get(gj.gid, {})
        col_i = cols.setdefault(gi.gid, {})
        for rid, v in col_j.items():
            col_i[rid] = col_i.get(rid, 0) + c * v
            if not col_i[rid]:
                del col_i[rid]
        for cid, col in cols.items():
            if gi.gid in col:
                a = col[gi.gid]
                col[gj.gid] = col.get(gj.gid, 0) - c * a
                if not col[gj.gid]:
                    del col[gj.gid]
    boundary = {cid: col for cid, col in cols.items() if col}
    return FilteredComplex(gens, boundary, field_char)
