"""Independent reference computations used to pin library outputs.

Everything here recomputes values by a different route than the
library: high-precision floating evaluation with an explicit safety
margin instead of integer sign certificates, and dense Gaussian
elimination instead of persistence column reduction.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

mpmath.mp.dps = 60
MARGIN = mpmath.mpf("1e-40")


def approx(x) -> mpmath.mpf:
    """Evaluate an exact quadratic value to 60 digits."""
    v = mpmath.mpf(x.num) / x.den
    if x.rad:
        v += mpmath.mpf(x.rad) / x.den * mpmath.sqrt(x.d)
    return v


def safe_floor(v: mpmath.mpf) -> int:
    n = int(mpmath.floor(v))
    # refuse to decide when v sits within the noise band of an integer
    assert abs(v - n) > MARGIN or v == n, f"floor undecidable at {v}"
    assert abs(v - (n + 1)) > MARGIN, f"floor undecidable at {v}"
    return n


def frac_part(v: mpmath.mpf) -> mpmath.mpf:
    return v - safe_floor(v)


def circle_dist(v: mpmath.mpf) -> mpmath.mpf:
    f = frac_part(v)
    return min(f, 1 - f)


def nearest_int(v: mpmath.mpf) -> int:
    n = safe_floor(v)
    return n if v - n < mpmath.mpf("0.5") else n + 1


def sign_of(v: mpmath.mpf) -> int:
    if abs(v) <= MARGIN:
        raise AssertionError(f"sign undecidable at {v}")
    return 1 if v > 0 else -1


def rotation_cz(lam_value: mpmath.mpf, k: int) -> int:
    """Index of the k-th iterate of a plane rotation by lam."""
    return 2 * safe_floor(k * lam_value) + 1


def ellipsoid_degree(delta_values, j: int, k: int) -> int:
    """Index of the k-th iterate of the j-th closed orbit (0-based)."""
    n = len(delta_values)
    total = 2 * k + (n - 1)
    for i, di in enumerate(delta_values):
        if i != j:
            total += 2 * safe_floor(k * delta_values[j] / di)
    return total


def spectrum_points(delta_values, count: int):
    """First `count` (value, orbit, k) action points, merged and sorted."""
    pts = []
    for j, dj in enumerate(delta_values):
        for k in range(1, count + 1):
            pts.append((k * dj, j, k))
    pts.sort(key=lambda t: t[0])
    for (a, _, _), (b, _, _) in zip(pts, pts[1:count]):
        assert b - a > MARGIN, "tied actions in oracle spectrum"
    return pts[:count]


def _rref_rank(rows, p: int) -> int:
    """Rank of an integer matrix over Q (p=0) or F_p."""
    if p:
        mat = [[c % p for c in row] for row in rows]
    else:
        mat = [[Fraction(c) for c in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p) if p else 1 / mat[rank][col]
        mat[rank] = [c * inv % p if p else c * inv for c in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p if p else a - f * b
                          for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def homology_rank(cx, t, degree: int) -> int:
    """dim H_degree of the sub-complex with filtration strictly below t.

    Works straight from the generator/boundary data; never calls the
    persistence reduction.
    """
    from spindex import SortKey

    key = SortKey(t)
    keep = [g for g in cx.generators if SortKey(g.filtration) < key]
    ids = {g.gid for g in keep}
    by_deg: dict[int, list] = {}
    for g in keep:
        by_deg.setdefault(g.degree, []).append(g.gid)

    def boundary_rank(deg: int) -> int:
        # rank of d: C_deg -> C_{deg-1} restricted to the kept span
        dom = by_deg.get(deg, [])
        cod = by_deg.get(deg - 1, [])
        if not dom or not cod:
            return 0
        pos = {gid: i for i, gid in enumerate(cod)}
        rows = []
        for gid in dom:
            row = [0] * len(cod)
            for rid, c in cx.boundary.get(gid, {}).items():
                if rid in ids:
                    row[pos[rid]] = c
            rows.append(row)
        return _rref_rank(rows, cx.field_char)

    dim = len(by_deg.get(degree, []))
    return dim - boundary_rank(degree) - boundary_rank(degree + 1)
