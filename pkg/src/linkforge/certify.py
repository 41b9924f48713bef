"""Interval certification that a germ's Jacobian has rank 2 off the origin.

Enclosures are outward-rounded (one ulp per endpoint operation), so every
"rank2-certified" verdict is sound: some 2x2 minor of the interval Jacobian
excludes 0, hence every point Jacobian in the box has rank 2.  Deficiency is
only certified by an exact symbolic argument (all minors identically zero,
or all minors vanishing at an exact rational point).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from .polymap import Poly, PolyMap, PolyMapError

RANK2 = "rank2-certified"
DEFICIENT = "deficiency-certified"
UNDECIDED = "undecided"


class CertifyError(Exception):
    pass


# ----------------------------------------------------------------------
# Directed-rounding interval kernels (vectorised over numpy arrays)
# ----------------------------------------------------------------------

def _down(a):
    return np.nextafter(a, -np.inf)


def _up(a):
    return np.nextafter(a, np.inf)


def _iadd(alo, ahi, blo, bhi):
    return _down(alo + blo), _up(ahi + bhi)


def _isub(alo, ahi, blo, bhi):
    return _down(alo - bhi), _up(ahi - blo)


def _imul(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _down(lo), _up(hi)


def _pow_up(x, k):
    # x >= 0 elementwise; upper bound of x^k by directed binary powering
    r = np.ones_like(x)
    b = x.copy()
    while k:
        if k & 1:
            r = _up(r * b)
        k >>= 1
        if k:
            b = _up(b * b)
    return r


def _pow_down(x, k):
    r = np.ones_like(x)
    b = x.copy()
    while k:
        if k & 1:
            r = np.maximum(_down(r * b), 0.0)
        k >>= 1
        if k:
            b = np.maximum(_down(b * b), 0.0)
    return r


def _ipow(alo, ahi, k: int):
    """Interval power with the tightened even-power rule [a,b]^{2m} >= 0."""
    if k == 0:
        return np.ones_like(alo), np.ones_like(ahi)
    if k == 1:
        return alo.copy(), ahi.copy()
    mag_hi = np.maximum(np.abs(alo), np.abs(ahi))
    contains0 = (alo <= 0.0) & (ahi >= 0.0)
    mag_lo = np.where(contains0, 0.0, np.minimum(np.abs(alo), np.abs(ahi)))
    if k % 2 == 0:
        return _pow_down(mag_lo, k), _pow_up(mag_hi, k)
    # odd powers are monotone; carry signs through the magnitude bounds
    def signed_down(x):
        mag = np.abs(x)
        return np.where(x >= 0, _pow_down(mag, k), -_pow_up(mag, k))

    def signed_up(x):
        mag = np.abs(x)
        return np.where(x >= 0, _pow_up(mag, k), -_pow_down(mag, k))

    return signed_down(alo), signed_up(ahi)


def _coeff_bounds(c: Fraction) -> Tuple[float, float]:
    cf = float(c)
    fc = Fraction(cf)
    lo = cf if fc <= c else float(np.nextafter(cf, -np.inf))
    hi = cf if fc >= c else float(np.nextafter(cf, np.inf))
    return lo, hi


def _lowered_interval(poly: Poly):
    """(E, clo, chi) with directed float enclosures of the coefficients."""
    items = list(poly.sorted_terms())
    if not items:
        return (np.zeros((0, poly.nvars), dtype=np.int64),
                np.zeros(0), np.zeros(0))
    E = np.array([e for e, _ in items], dtype=np.int64)
    bounds = [_coeff_bounds(c) for _, c in items]
    clo = np.array([b[0] for b in bounds])
    chi = np.array([b[1] for b in bounds])
    return E, clo, chi


def _interval_eval_batch(lowered, blo: np.ndarray, bhi: np.ndarray):
    """Enclose a polynomial over a batch of boxes; returns (lo, hi) arrays."""
    E, clo, chi = lowered
    B = blo.shape[0]
    slo = np.zeros(B)
    shi = np.zeros(B)
    for t in range(len(clo)):
        tlo = np.full(B, clo[t])
        thi = np.full(B, chi[t])
        for v in range(E.shape[1]):
            k = int(E[t, v])
            if k:
                plo, phi = _ipow(blo[:, v], bhi[:, v], k)
                tlo, thi = _imul(tlo, thi, plo, phi)
        slo, shi = _iadd(slo, shi, tlo, thi)
    return slo, shi


# ----------------------------------------------------------------------
# Public types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Box:
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise CertifyError("box lo/hi length mismatch")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise CertifyError("box has lo > hi")
        if not all(np.isfinite(self.lo)) or not all(np.isfinite(self.hi)):
            raise CertifyError("box must be finite")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def volume(self) -> float:
        return float(np.prod(np.array(self.hi) - np.array(self.lo)))

    def corner_key(self):
        return tuple(self.lo) + tuple(self.hi)

    @classmethod
    def cube(cls, n: int, radius: float) -> "Box":
        return cls((-radius,) * n, (radius,) * n)


@dataclass(frozen=True)
class BoxCertificate:
    box: Box
    verdict: str
    # for deficiency: the 2 x n interval Jacobian, every minor containing 0
    witness: Optional[Tuple[Tuple[Interval, ...], ...]] = None


@dataclass
class IsolationReport:
    germ: Optional[str]
    eps_in: float
    eps_out: float
    certified_volume: float
    undecided_volume: float
    certified_count: int
    undecided_count: int
    undecided: List[Box]
    max_depth_reached: int
    max_depth: int
    wall_ms: float
    deficient: bool = False
    witnesses: List[Tuple[float, ...]] = field(default_factory=list)

    @property
    def certified_fraction(self) -> float:
        total = self.certified_volume + self.undecided_volume
        if total == 0.0:
            return 1.0
        return self.certified_volume / total

    @property
    def undecided_fraction(self) -> float:
        return 1.0 - self.certified_fraction

    def to_json(self) -> dict:
        return {
            "germ": self.germ,
            "annulus": [self.eps_in, self.eps_out],
            "fraction_certified": self.certified_fraction,
            "certified_count": self.certified_count,
            "max_depth_reached": self.max_depth_reached,
            "deficient": self.deficient,
            "undecided": [[list(b.lo), list(b.hi)] for b in self.undecided],
            "witnesses": [list(w) for w in self.witnesses],
            "wall_ms": self.wall_ms,
        }


@dataclass(frozen=True)
class DeficiencyWitness:
    point: Tuple[float, ...]
    sigma_min: float
    exact: bool
    rational_point: Optional[Tuple[Fraction, ...]] = None


# ----------------------------------------------------------------------
# Symbolic helpers
# ----------------------------------------------------------------------

def _minor_polys(pm: PolyMap) -> List[Tuple[int, int, Poly]]:
    """All C(n,2) symbolic 2x2 minors of the Jacobian, cached on the map."""
    store = object.__getattribute__(pm, "_cache")
    if "minors" not in store:
        rows = pm.partials()
        out = []
        for i in range(pm.nvars):
            for j in range(i + 1, pm.nvars):
                out.append((i, j, rows[0][i] * rows[1][j]
                            - rows[0][j] * rows[1][i]))
        store["minors"] = out
    return store["minors"]


def symbolically_deficient(pm: PolyMap) -> bool:
    """True iff every 2x2 Jacobian minor is the identically-zero polynomial."""
    return all(m.is_zero() for _, _, m in _minor_polys(pm))


def _jacobian_lowered(pm: PolyMap):
    store = object.__getattribute__(pm, "_cache")
    if "jac_lowered" not in store:
        rows = pm.partials()
        store["jac_lowered"] = [[_lowered_interval(p) for p in row]
                                for row in rows]
    return store["jac_lowered"]


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------

def interval_evaluate(pm: PolyMap, box: Box) -> Tuple[Interval, Interval]:
    """Sound enclosure of {f(x) : x in box}, componentwise."""
    if box.dim != pm.nvars:
        raise PolyMapError("box dimension != nvars")
    blo = np.array([box.lo])
    bhi = np.array([box.hi])
    out = []
    store = object.__getattribute__(pm, "_cache")
    if "comp_lowered" not in store:
        store["comp_lowered"] = [_lowered_interval(c) for c in pm.components]
    for lowered in store["comp_lowered"]:
        lo, hi = _interval_eval_batch(lowered, blo, bhi)
        out.append(Interval(float(lo[0]), float(hi[0])))
    return out[0], out[1]


def _certify_batch(pm: PolyMap, blo: np.ndarray, bhi: np.ndarray) -> np.ndarray:
    """Boolean mask: some interval minor excludes 0 on each box."""
    jl = _jacobian_lowered(pm)
    n = pm.nvars
    J = [[None] * n, [None] * n]
    for i in range(2):
        for j in range(n):
            J[i][j] = _interval_eval_batch(jl[i][j], blo, bhi)
    certified = np.zeros(blo.shape[0], dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            a = _imul(*J[0][i], *J[1][j])
            b = _imul(*J[0][j], *J[1][i])
            dlo, dhi = _isub(*a, *b)
            certified |= (dlo > 0.0) | (dhi < 0.0)
            if certified.all():
                return certified
    return certified


def _interval_jacobian(pm: PolyMap, box: Box):
    jl = _jacobian_lowered(pm)
    blo = np.array([box.lo])
    bhi = np.array([box.hi])
    return tuple(
        tuple(Interval(float(lo[0]), float(hi[0]))
              for lo, hi in (_interval_eval_batch(jl[i][j], blo, bhi)
                             for j in range(pm.nvars)))
        for i in range(2))


def certify_rank2(pm: PolyMap, box: Box) -> BoxCertificate:
    """Certify rank 2 on a box via interval minors, or exact deficiency."""
    if box.dim != pm.nvars:
        raise PolyMapError("box dimension != nvars")
    if symbolically_deficient(pm):
        return BoxCertificate(box, DEFICIENT, witness=_interval_jacobian(pm, box))
    blo = np.array([box.lo])
    bhi = np.array([box.hi])
    if bool(_certify_batch(pm, blo, bhi)[0]):
        return BoxCertificate(box, RANK2)
    return BoxCertificate(box, UNDECIDED)


def _norm_sq_bounds(blo: np.ndarray, bhi: np.ndarray):
    """Directed bounds for |x|^2 over each box."""
    lo_sq = np.where((blo <= 0) & (bhi >= 0), 0.0,
                     np.minimum(np.abs(blo), np.abs(bhi)) ** 2)
    hi_sq = np.maximum(np.abs(blo), np.abs(bhi)) ** 2
    return _down(lo_sq.sum(axis=1)), _up(hi_sq.sum(axis=1))


def _initial_grid(n: int, eps_in: float, eps_out: float,
                  grid_side: Optional[float]):
    """Uniform cell cover of [-eps_out, eps_out]^n.

    Cell side defaults to eps_in/2 in dimension <= 4 and eps_in above that
    (cell counts grow exponentially with n).
    """
    if grid_side is None:
        grid_side = eps_in / 2 if n <= 4 else eps_in
    cells = max(1, int(np.ceil(2 * eps_out / grid_side)))
    edges = np.linspace(-eps_out, eps_out, cells + 1)
    axes = [np.arange(cells)] * n
    idx = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    blo = edges[idx]
    bhi = edges[idx + 1]
    return blo, bhi


def certify_isolated(pm: PolyMap, eps_in: float, eps_out: float,
                     max_depth: int = 12,
                     grid_side: Optional[float] = None) -> IsolationReport:
    """Adaptively certify rank 2 on a box cover of the annulus
    {eps_in <= |x| <= eps_out}.

    Boxes entirely inside the inner ball or outside the outer ball are
    discarded; undecided boxes are bisected along their widest coordinate
    until max_depth, then reported.  A fully certified annulus is evidence,
    not proof, of an isolated critical point at the origin; the report
    states exactly what was certified.
    """
    if not (0.0 < eps_in < eps_out):
        raise CertifyError("need 0 < eps_in < eps_out")
    if max_depth < 0:
        raise CertifyError("max_depth must be >= 0")
    t0 = time.perf_counter()
    n = pm.nvars

    if symbolically_deficient(pm):
        w = [0.0] * n
        w[0] = (eps_in + eps_out) / 2
        return IsolationReport(
            germ=pm.name, eps_in=eps_in, eps_out=eps_out,
            certified_volume=0.0, undecided_volume=0.0,
            certified_count=0, undecided_count=0, undecided=[],
            max_depth_reached=0, max_depth=max_depth,
            wall_ms=(time.perf_counter() - t0) * 1e3,
            deficient=True, witnesses=[tuple(w)])

    blo, bhi = _initial_grid(n, eps_in, eps_out, grid_side)
    certified_volume = 0.0
    certified_count = 0
    undecided_boxes: List[Box] = []
    depth_reached = 0

    depth = 0
    while blo.shape[0]:
        # discard cells clear of the annulus (directed comparisons)
        nlo, nhi = _norm_sq_bounds(blo, bhi)
        keep = ~((nhi < eps_in * eps_in) | (nlo > eps_out * eps_out))
        blo, bhi = blo[keep], bhi[keep]
        if not blo.shape[0]:
            break
        depth_reached = depth
        cert = _certify_batch(pm, blo, bhi)
        vols = np.prod(bhi - blo, axis=1)
        certified_volume += float(vols[cert].sum())
        certified_count += int(cert.sum())
        blo, bhi = blo[~cert], bhi[~cert]
        if not blo.shape[0]:
            break
        if depth == max_depth:
            undecided_boxes = [Box(tuple(l), tuple(h))
                               for l, h in zip(blo, bhi)]
            break
        # bisect widest coordinate of each undecided box
        widths = bhi - blo
        axis = np.argmax(widths, axis=1)
        mid = 0.5 * (np.take_along_axis(blo, axis[:, None], 1)
                     + np.take_along_axis(bhi, axis[:, None], 1))
        left_hi = bhi.copy()
        np.put_along_axis(left_hi, axis[:, None], mid, 1)
        right_lo = blo.copy()
        np.put_along_axis(right_lo, axis[:, None], mid, 1)
        blo = np.concatenate([blo, right_lo])
        bhi = np.concatenate([left_hi, bhi])
        depth += 1

    undecided_boxes.sort(key=Box.corner_key)
    undecided_volume = float(sum(b.volume() for b in undecided_boxes))
    return IsolationReport(
        germ=pm.name, eps_in=eps_in, eps_out=eps_out,
        certified_volume=certified_volume, undecided_volume=undecided_volume,
        certified_count=certified_count, undecided_count=len(undecided_boxes),
        undecided=undecided_boxes, max_depth_reached=depth_reached,
        max_depth=max_depth, wall_ms=(time.perf_counter() - t0) * 1e3)


# ----------------------------------------------------------------------
# Refutation search
# ----------------------------------------------------------------------

def _sigma_min_batch(J: np.ndarray) -> np.ndarray:
    """Smallest singular value of (B, 2, n) Jacobians, closed form via J J^T."""
    G = J @ np.swapaxes(J, 1, 2)
    a = G[:, 0, 0]
    b = G[:, 0, 1]
    c = G[:, 1, 1]
    half_tr = 0.5 * (a + c)
    disc = np.sqrt(np.maximum((0.5 * (a - c)) ** 2 + b * b, 0.0))
    return np.sqrt(np.maximum(half_tr - disc, 0.0))


def _sigma_min(pm: PolyMap, x: np.ndarray) -> float:
    return float(_sigma_min_batch(pm.jacobian_many(x[None, :]))[0])


_SNAP_DENOMS = (1, 2, 4, 5, 8, 10, 16, 20, 50, 100, 1000)


def _try_exact_witness(pm: PolyMap, x: np.ndarray,
                       zero_snap: float) -> Optional[Tuple[Fraction, ...]]:
    """Round x to a nearby rational point where all minors vanish exactly."""
    minors = _minor_polys(pm)
    scale = float(np.abs(x).max())
    if scale == 0.0:
        return None
    for denom in _SNAP_DENOMS:
        pt = []
        for v in x:
            if abs(v) < zero_snap * scale:
                pt.append(Fraction(0))
            else:
                pt.append(Fraction(v).limit_denominator(denom))
        if all(v == 0 for v in pt):
            continue
        if all(m.eval_fraction(pt) == 0 for _, _, m in minors):
            return tuple(pt)
    return None


def refute_isolated(pm: PolyMap, region: Box, samples: int, seed: int = 0,
                    exclude_norm_below: float = 0.0,
                    sigma_tol: float = 1e-8) -> Optional[DeficiencyWitness]:
    """Search the region for a non-origin point with rank-deficient Jacobian.

    Uniform sampling ranks candidates by the smallest singular value of the
    Jacobian; the best few are polished by Nelder-Mead (with a barrier
    keeping |x| >= exclude_norm_below).  A candidate below sigma_tol is
    returned as a witness; when a nearby rational point makes every minor
    vanish exactly, the witness is marked exact.
    """
    if region.dim != pm.nvars:
        raise PolyMapError("region dimension != nvars")
    rng = np.random.default_rng(seed)

    if symbolically_deficient(pm):
        center = 0.5 * (np.array(region.lo) + np.array(region.hi))
        if np.linalg.norm(center) < max(exclude_norm_below, 1e-9):
            center = np.array(region.hi) * 0.5
        exact = _try_exact_witness(pm, center, zero_snap=1e-7)
        return DeficiencyWitness(tuple(float(v) for v in center),
                                 _sigma_min(pm, center), exact is not None,
                                 exact)

    lo = np.array(region.lo)
    hi = np.array(region.hi)
    pts = rng.uniform(lo, hi, size=(samples, pm.nvars))
    if exclude_norm_below > 0.0:
        pts = pts[np.linalg.norm(pts, axis=1) >= exclude_norm_below]
        if not len(pts):
            return None
    sigmas = _sigma_min_batch(pm.jacobian_many(pts))
    order = np.argsort(sigmas)

    def objective(x):
        value = _sigma_min(pm, x)
        # stay inside the region and away from the excluded ball
        value += 1e3 * float(np.maximum(lo - x, 0.0).sum()
                             + np.maximum(x - hi, 0.0).sum())
        if exclude_norm_below > 0.0:
            value += 1e3 * max(0.0, exclude_norm_below - float(
                np.linalg.norm(x)))
        return value

    for idx in order[:8]:
        res = optimize.minimize(objective, pts[idx], method="Nelder-Mead",
                                options={"maxfev": 4000, "fatol": 1e-14,
                                         "xatol": 1e-12})
        x = np.asarray(res.x)
        norm = float(np.linalg.norm(x))
        if exclude_norm_below > 0.0 and norm < exclude_norm_below:
            continue
        if norm < 1e-9:
            continue  # origin hit, skipped per contract
        sigma = _sigma_min(pm, x)
        exact = _try_exact_witness(pm, x, zero_snap=1e-4)
        if exact is not None:
            return DeficiencyWitness(tuple(float(v) for v in x), sigma, True,
                                     exact)
        if sigma < sigma_tol:
            return DeficiencyWitness(tuple(float(v) for v in x), sigma, False)
    return None
