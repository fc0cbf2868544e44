"""Coefficients a(d) of the weight-3/2 forms attached to the four curves.

a(d) is a weighted, sign-twisted count of lattice points on positive
definite ternary quadratic forms.  Three independent routes compute it:
a batched scan over all d <= X (`theta_batch`), a single-d two-variable
loop (`theta_single`), and an eta-product q-expansion (`eta_product_oracle`)
for the specs that have one.  They must agree exactly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from . import arith
from .backend import kernels
from .errors import CapacityError, OverflowGuardError

FULL_TABLE_LIMIT = 1 << 27

THET_MAGIC = b"THET"
THET_VERSION = 1
THET_OVERFLOW = 0x7FFFFFFF


@dataclass(frozen=True)
class TernaryForm:
    """a*x^2 + b*y^2 + c*z^2 + dxy*xy + exz*xz + fyz*yz, positive definite."""

    a: int
    b: int
    c: int
    dxy: int = 0
    exz: int = 0
    fyz: int = 0

    def __post_init__(self):
        g = self.gram()
        m1 = g[0][0]
        m2 = g[0][0] * g[1][1] - g[0][1] ** 2
        if m1 <= 0 or m2 <= 0 or self.det_gram() <= 0:
            raise ValueError("form is not positive definite")

    def gram(self):
        """Doubled Gram matrix (integer entries)."""
        return [
            [2 * self.a, self.dxy, self.exz],
            [self.dxy, 2 * self.b, self.fyz],
            [self.exz, self.fyz, 2 * self.c],
        ]

    def det_gram(self) -> int:
        g = self.gram()
        return (
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] ** 2)
            - g[0][1] * (g[0][1] * g[2][2] - g[1][2] * g[0][2])
            + g[0][2] * (g[0][1] * g[1][2] - g[1][1] * g[0][2])
        )

    def value(self, x: int, y: int, z: int) -> int:
        return (
            self.a * x * x
            + self.b * y * y
            + self.c * z * z
            + self.dxy * x * y
            + self.exz * x * z
            + self.fyz * y * z
        )

    def permuted(self, perm: Tuple[int, int, int]) -> "TernaryForm":
        """Relabel variables: new variable i is old variable perm[i]."""
        g = self.gram()
        h = [[g[perm[i]][perm[j]] for j in range(3)] for i in range(3)]
        return TernaryForm(
            h[0][0] // 2, h[1][1] // 2, h[2][2] // 2, h[0][1], h[0][2], h[1][2]
        )

    def diag(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class Constraint:
    """(cx*x + cy*y + cz*z) mod modulus must land in `residues`."""

    cx: int
    cy: int
    cz: int
    modulus: int
    residues: frozenset

    def __post_init__(self):
        if not (2 <= self.modulus <= 63):
            raise ValueError("constraint modulus must be in [2, 63]")
        if not all(0 <= r < self.modulus for r in self.residues):
            raise ValueError("residues out of range")

    def coeffs(self) -> Tuple[int, int, int]:
        return (self.cx % self.modulus, self.cy % self.modulus, self.cz % self.modulus)

    def bitmask(self) -> int:
        m = 0
        for r in self.residues:
            m |= 1 << r
        return m

    def permuted(self, perm) -> "Constraint":
        c = (self.cx, self.cy, self.cz)
        return Constraint(c[perm[0]], c[perm[1]], c[perm[2]], self.modulus, self.residues)


@dataclass(frozen=True)
class SignRule:
    """Sign +-1 chosen by (sx*x + sy*y + sz*z) mod modulus."""

    sx: int
    sy: int
    sz: int
    modulus: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.modulus or not all(v in (-1, 1) for v in self.values):
            raise ValueError("sign rule needs one value of +-1 per residue")

    def coeffs(self) -> Tuple[int, int, int]:
        return (self.sx % self.modulus, self.sy % self.modulus, self.sz % self.modulus)

    def permuted(self, perm) -> "SignRule":
        c = (self.sx, self.sy, self.sz)
        return SignRule(c[perm[0]], c[perm[1]], c[perm[2]], self.modulus, self.values)


@dataclass(frozen=True)
class ThetaSpec:
    """Weighted combination of constrained theta series defining a(d)."""

    terms: Tuple[Tuple[TernaryForm, Fraction], ...]
    constraints: Tuple[Constraint, ...] = ()
    sign: Optional[SignRule] = None
    curve: Optional[str] = None

    def denominator(self) -> int:
        return lcm(*(w.denominator for _, w in self.terms))


class CoeffTable:
    """Dense coefficient table indexed by d (int64 values)."""

    def __init__(self, start: int, values: np.ndarray, curve: Optional[str] = None):
        self.start = start
        self.values = values
        self.curve = curve

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        """One past the last indexed d."""
        return self.start + len(self.values)

    def get(self, d: int) -> int:
        if not self.start <= d < self.end:
            raise IndexError(f"d={d} outside table range [{self.start}, {self.end})")
        return int(self.values[d - self.start])


# ----------------------------------------------------------------------
# built-in specs
# ----------------------------------------------------------------------

_HALF = Fraction(1, 2)


def builtin_spec(curve: str, variant: Optional[int] = None) -> ThetaSpec:
    """The exact a(d) recipe for one of the four curves.

    `variant` selects between the two eta-quotient weights for curve A
    (odd twists use variant 1); it is meaningless for the other curves.
    """
    if curve == "A":
        i = 1 if variant is None else variant
        if i not in (1, 2):
            raise ValueError(f"curve A has variants 1 and 2, not {variant}")
        return ThetaSpec(
            terms=(
                (TernaryForm(2**i, 1, 32), Fraction(1)),
                (TernaryForm(2**i, 1, 8), -_HALF),
            ),
            curve="A",
        )
    if variant is not None:
        raise ValueError(f"curve {curve} takes no variant")
    if curve == "B":
        return ThetaSpec(
            terms=((TernaryForm(1, 1, 1), _HALF),),
            constraints=(
                Constraint(1, 0, 0, 3, frozenset((1, 2))),
                Constraint(0, 1, 0, 3, frozenset((0,))),
                Constraint(1, 1, 0, 2, frozenset((1,))),
            ),
            sign=SignRule(0, 1, 0, 2, (1, -1)),
            curve="B",
        )
    if curve == "C":
        return ThetaSpec(
            terms=(
                (TernaryForm(1, 11, 11), _HALF),
                (TernaryForm(3, 4, 11, dxy=2), -_HALF),
            ),
            curve="C",
        )
    if curve == "D":
        return ThetaSpec(
            terms=(
                (TernaryForm(1, 14, 14), _HALF),
                (TernaryForm(2, 7, 14), -_HALF),
            ),
            curve="D",
        )
    raise ValueError(f"unknown curve label {curve!r}")


# ----------------------------------------------------------------------
# batch evaluation
# ----------------------------------------------------------------------


def _cons_arrays(cons: Sequence[Constraint], proj: Optional[Tuple[int, int]] = None):
    """Pack constraints into flat arrays; proj selects two coefficient slots."""
    k = len(cons)
    cx = np.zeros(k, dtype=np.int64)
    cy = np.zeros(k, dtype=np.int64)
    cz = np.zeros(k, dtype=np.int64)
    cm = np.zeros(k, dtype=np.int64)
    cb = np.zeros(k, dtype=np.uint64)
    for i, con in enumerate(cons):
        c = con.coeffs()
        if proj is None:
            cx[i], cy[i], cz[i] = c
        else:
            cx[i], cy[i] = c[proj[0]], c[proj[1]]
        cm[i] = con.modulus
        cb[i] = con.bitmask()
    return cx, cy, cz, cm, cb


def _shift_split(spec: ThetaSpec):
    """Choose a shift variable so batch = binary section + z^2 shifts.

    A variable qualifies when no cross term and no constraint or sign
    rule couples it to the other two.  Among qualifying variables the one
    with the largest diagonal coefficient (fewest shift passes) wins.
    Returns a permutation placing it last, or None when no split exists.
    """
    best = None
    for v in (0, 1, 2):
        ok = True
        for form, _ in spec.terms:
            cross = (
                (form.dxy, form.exz),
                (form.dxy, form.fyz),
                (form.exz, form.fyz),
            )[v]
            if cross != (0, 0):
                ok = False
                break
        if not ok:
            continue
        for con in spec.constraints:
            c = con.coeffs()
            if c[v] != 0 and (c[(v + 1) % 3] != 0 or c[(v + 2) % 3] != 0):
                ok = False
                break
        if ok and spec.sign is not None:
            c = spec.sign.coeffs()
            if c[v] != 0 and (c[(v + 1) % 3] != 0 or c[(v + 2) % 3] != 0):
                ok = False
        if not ok:
            continue
        diag = min(form.diag()[v] for form, _ in spec.terms)
        if best is None or diag > best[1]:
            best = (v, diag)
    if best is None:
        return None
    v = best[0]
    others = [i for i in (0, 1, 2) if i != v]
    return (others[0], others[1], v)


def _shift_weights(c: int, limit: int, zcons, zsign):
    """Per-offset weights for the z loop, folding +z and -z together."""
    offsets = []
    weights = []
    zmax = isqrt(limit // c) if c <= limit else -1
    for z in range(zmax + 1):
        w = 0
        for t in (z, -z) if z else (z,):
            ok = True
            for czv, mod, residues in zcons:
                if (czv * t) % mod not in residues:
                    ok = False
                    break
            if not ok:
                continue
            if zsign is not None:
                szv, mod, values = zsign
                w += values[(szv * t) % mod]
            else:
                w += 1
        if w:
            offsets.append(c * z * z)
            weights.append(w)
    return np.asarray(offsets, dtype=np.int64), np.asarray(weights, dtype=np.int64)


def _batch_term_split(form: TernaryForm, spec: ThetaSpec, perm, limit: int) -> np.ndarray:
    f = form.permuted(perm)
    pair_cons = []
    z_cons = []
    for con in spec.constraints:
        pc = con.permuted(perm)
        c = pc.coeffs()
        if c[2] != 0:
            z_cons.append((c[2], pc.modulus, pc.residues))
        else:
            pair_cons.append(pc)
    pair_sign = None
    z_sign = None
    if spec.sign is not None:
        ps = spec.sign.permuted(perm)
        c = ps.coeffs()
        if c[2] != 0:
            z_sign = (c[2], ps.modulus, ps.values)
        else:
            pair_sign = ps
    cx, cy, _, cm, cb = _cons_arrays(pair_cons, proj=(0, 1))
    if pair_sign is not None:
        sx, sy, _ = pair_sign.coeffs()
        smod = pair_sign.modulus
        svals = np.asarray(pair_sign.values, dtype=np.int8)
    else:
        sx = sy = smod = 0
        svals = np.zeros(0, dtype=np.int8)
    P = kernels.pair_table(limit, f.a, f.b, f.dxy, cx, cy, cm, cb, sx, sy, smod, svals)
    offsets, weights = _shift_weights(f.c, limit, z_cons, z_sign)
    peak = int(np.abs(P).max(initial=0))
    if peak * int(np.abs(weights).sum(initial=0)) >= 2**31:
        raise OverflowGuardError("per-term counter would overflow 32 bits")
    out = np.zeros(limit + 1, dtype=np.int32)
    kernels.shift_accumulate(out, P, offsets, weights)
    return out


def _term_arrays(form: TernaryForm, spec: ThetaSpec, perm):
    f = form.permuted(perm)
    cons = [c.permuted(perm) for c in spec.constraints]
    cx, cy, cz, cm, cb = _cons_arrays(cons)
    if spec.sign is not None:
        s = spec.sign.permuted(perm)
        sx, sy, sz = s.coeffs()
        smod = s.modulus
        svals = np.asarray(s.values, dtype=np.int64)
    else:
        sx = sy = sz = smod = 0
        svals = np.zeros(0, dtype=np.int64)
    return f, (cx, cy, cz, cm, cb), (sx, sy, sz, smod, svals)


def _batch_term_window(form, spec, lo, hi) -> np.ndarray:
    f, (cx, cy, cz, cm, cb), (sx, sy, sz, smod, svals) = _term_arrays(
        form, spec, (0, 1, 2)
    )
    out = np.zeros(hi - lo, dtype=np.int32)
    kernels.window_count(
        lo, hi, f.a, f.b, f.c, f.dxy, f.exz, f.fyz,
        cx, cy, cz, cm, cb, sx, sy, sz, int(smod),
        svals.astype(np.int64), out,
    )
    return out


_ELIGIBLE_MOD = {"A": (8, (1, 3)), "B": (12, (1, 5)), "C": (11, (1, 3, 4, 5, 9)), "D": (7, (1, 2, 4))}


def _combine_terms(spec: ThetaSpec, tables, start: int) -> np.ndarray:
    den = spec.denominator()
    total = np.zeros(len(tables[0]), dtype=np.int64)
    for (_, w), tab in zip(spec.terms, tables):
        total += int(w * den) * tab.astype(np.int64)
    if spec.curve is not None:
        bad = total % den != 0
        if start == 0:
            bad[0] = False  # the origin at d=0 is not a coefficient
        if bad.any():
            d = start + int(np.flatnonzero(bad)[0])
            raise ArithmeticError(f"non-integral coefficient at d={d}")
        total //= den
        if start == 0:
            total[0] = 0
        return total
    return total // den


def theta_batch(spec: ThetaSpec, limit: int, shard_count: int = 1) -> CoeffTable:
    """Exact a(d) for all 0 <= d <= limit as a dense table.

    Splittable specs (every built-in) run as a binary-section pass plus
    one shifted add per z value; others fall back to windowed direct
    enumeration.  Deterministic and independent of shard_count.
    """
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit == 0:
        return CoeffTable(1, np.zeros(0, dtype=np.int64), spec.curve)
    if limit > FULL_TABLE_LIMIT:
        raise CapacityError(
            f"dense table limit {limit} exceeds {FULL_TABLE_LIMIT}; "
            "use theta_batch_windows"
        )
    arith.check_budget(12 * (limit + 1), "theta batch tables")
    perm = _shift_split(spec)
    if perm is not None:
        tables = [_batch_term_split(form, spec, perm, limit) for form, _ in spec.terms]
    else:
        tables = [
            _batch_term_window(form, spec, 0, limit + 1) for form, _ in spec.terms
        ]
    values = _combine_terms(spec, tables, 0)
    return CoeffTable(0, values, spec.curve)


def theta_batch_windows(
    spec: ThetaSpec, limit: int, window: int = arith.DEFAULT_WINDOW
) -> Iterator[CoeffTable]:
    """Windowed rescan: yields CoeffTable chunks covering [1, limit].

    Each window re-walks the lattice but only touches in-window values,
    so memory stays O(window) while total work stays near one full pass.
    """
    if limit < 1 or window < 1:
        raise ValueError("limit and window must be positive")
    arith.check_budget(12 * window, "theta window")
    for lo in range(1, limit + 1, window):
        hi = min(lo + window, limit + 1)
        tables = [_batch_term_window(form, spec, lo, hi) for form, _ in spec.terms]
        yield CoeffTable(lo, _combine_terms(spec, tables, lo), spec.curve)


def theta_single(spec: ThetaSpec, d: int) -> Fraction:
    """a(d) for one d: two-variable loop, perfect-square test on the third.

    O(d) lattice work and no large table, so it stays usable for record
    checks far beyond any batched range.
    """
    if d < 1:
        raise ValueError("d must be positive")
    total = Fraction(0)
    for form, w in spec.terms:
        diag = form.diag()
        solve = min(range(3), key=lambda i: diag[i])
        others = [i for i in (0, 1, 2) if i != solve]
        perm = (solve, others[0], others[1])
        f, (cx, cy, cz, cm, cb), (sx, sy, sz, smod, svals) = _term_arrays(
            form, spec, perm
        )
        cnt = kernels.theta_single_term(
            f.a, f.b, f.c, f.dxy, f.exz, f.fyz,
            cx, cy, cz, cm, cb, sx, sy, sz, int(smod),
            svals.astype(np.int64), d,
        )
        total += w * cnt
    return total


# ----------------------------------------------------------------------
# eta-product oracle
# ----------------------------------------------------------------------


def _pentagonal_terms(step: int, limit: int):
    """Exponents and signs of prod(1 - q^(step*n)) truncated at q^limit."""
    out = []
    j = 0
    while True:
        for jj in (j, -j) if j else (j,):
            e = step * jj * (3 * jj - 1) // 2
            if e <= limit:
                out.append((e, -1 if jj % 2 else 1))
        if step * j * (3 * j + 1) // 2 > limit:
            break
        j += 1
    return out


def eta_product_oracle(spec_id: str, limit: int) -> CoeffTable:
    """Independent q-expansion route for the specs with an eta product.

    A1/A2: q * prod(1-q^8n) * prod(1-q^16n) * theta(2^i z);
    B:     q * prod(1-q^12n)^2 * theta(z).
    Sparse pentagonal-number series multiplied into a dense array.
    """
    if limit > 10**6:
        raise ValueError("oracle is for limit <= 10^6")
    if spec_id in ("A1", "A2"):
        i = int(spec_id[1])
        pa = _pentagonal_terms(8, limit)
        pb = _pentagonal_terms(16, limit)
        theta_step = 2**i
    elif spec_id == "B":
        pa = _pentagonal_terms(12, limit)
        pb = pa
        theta_step = 1
    else:
        raise ValueError(f"no eta product for {spec_id!r}")
    dense = np.zeros(limit + 1, dtype=np.int64)
    for e1, c1 in pa:
        for e2, c2 in pb:
            if e1 + e2 <= limit:
                dense[e1 + e2] += c1 * c2
    res = dense.copy()
    k = 1
    while theta_step * k * k <= limit:
        off = theta_step * k * k
        res[off:] += 2 * dense[: limit + 1 - off]
        k += 1
    values = np.zeros(limit + 1, dtype=np.int64)
    values[1:] = res[:-1]  # the leading q-prefactor shifts everything by one
    curve = "A" if spec_id.startswith("A") else "B"
    return CoeffTable(0, values, curve)


# ----------------------------------------------------------------------
# coefficient dump format
# ----------------------------------------------------------------------


def dump_coeffs(table: CoeffTable, path: str) -> None:
    """Write the binary coefficient dump (magic THET, version 1).

    Values outside int32 are clamped to the sentinel 0x7FFFFFFF, meaning
    "recompute this one via theta_single".
    """
    label = (table.curve or "?").encode()[0]
    vals = table.values
    clipped = np.clip(vals, -(2**31) + 1, THET_OVERFLOW - 1).astype(np.int32)
    over = np.abs(vals) >= THET_OVERFLOW
    clipped[over] = THET_OVERFLOW
    with open(path, "wb") as fh:
        fh.write(THET_MAGIC)
        fh.write(struct.pack("<HBQQ", THET_VERSION, label, table.start, len(vals)))
        fh.write(clipped.astype("<i4").tobytes())


def load_coeffs(path: str) -> CoeffTable:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != THET_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        version, label, start, count = struct.unpack("<HBQQ", fh.read(19))
        if version != THET_VERSION:
            raise ValueError(f"unsupported version {version}")
        vals = np.frombuffer(fh.read(4 * count), dtype="<i4").astype(np.int64)
    curve = chr(label) if chr(label) in arith.CURVE_LABELS else None
    return CoeffTable(start, vals, curve)
