"""Integral Weierstrass models and their arithmetic invariants.

Minimal models (Laska-Kraus-Connell), local data at every bad prime
(Tate's algorithm, all p including 2 and 3), rational torsion, the real
period by AGM, traces of Frobenius, and multiplicative a_n tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm, prod
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath as mp
import numpy as np

from . import arith
from .backend import kernels
from .errors import CapacityError


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6 over Z."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError("singular model")

    @property
    def b_invariants(self) -> Tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c_invariants(self) -> Tuple[int, int]:
        b2, b4, b6, _ = self.b_invariants
        return b2 * b2 - 24 * b4, -b2**3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def rhs(self, x):
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def transform(self, u: int, r: int, s: int, t: int) -> "WeierstrassModel":
        """Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        for n, k in ((n1, 1), (n2, 2), (n3, 3), (n4, 4), (n6, 6)):
            if n % u**k:
                raise ValueError("transformation is not integral")
        u1, u2, u3 = u, u * u, u**3
        return WeierstrassModel(n1 // u1, n2 // u2, n3 // u3, n4 // (u2 * u2), n6 // (u3 * u3))


@dataclass(frozen=True)
class LocalData:
    prime: int
    kodaira: str
    conductor_exponent: int
    tamagawa: int
    reduction: str  # good | split | nonsplit | additive

    def __post_init__(self):
        ok = (
            (self.conductor_exponent == 0) == (self.reduction == "good")
            and (self.conductor_exponent == 1)
            == (self.reduction in ("split", "nonsplit"))
        )
        if not ok:
            raise ValueError("conductor exponent inconsistent with reduction type")
        _check_tamagawa_table(self.kodaira, self.tamagawa, self.reduction)


def _check_tamagawa_table(kodaira: str, c: int, reduction: str) -> None:
    if kodaira == "I0":
        ok = c == 1
    elif kodaira.startswith("I") and kodaira.endswith("*"):
        n = int(kodaira[1:-1])
        ok = c == 1 if n == 0 else c in (2, 4)
        if n == 0:
            ok = c in (1, 2, 4)
    elif kodaira.startswith("I"):
        n = int(kodaira[1:])
        ok = c == n if reduction == "split" else c in (1, 2) and c == gcd(2, n) or c == n
    elif kodaira == "II" or kodaira == "II*":
        ok = c == 1
    elif kodaira == "III" or kodaira == "III*":
        ok = c == 2
    else:  # IV, IV*
        ok = c in (1, 3)
    if not ok:
        raise ValueError(f"tamagawa {c} impossible for type {kodaira}")


# ----------------------------------------------------------------------
# minimal models
# ----------------------------------------------------------------------


def _val(n: int, p: int) -> int:
    if n == 0:
        return 1 << 30  # effectively infinite
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _kraus_ok_2(c4: int, c6: int) -> bool:
    if c6 % 4 == 3:
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _model_from_c(c4: int, c6: int) -> WeierstrassModel:
    """Reduced integral model with the given c-invariants (Kraus-admissible)."""
    for a1 in (0, 1):
        for a2 in (-1, 0, 1):
            for a3 in (0, 1):
                b2 = a1 * a1 + 4 * a2
                num4 = b2 * b2 - c4
                if num4 % 24:
                    continue
                b4 = num4 // 24
                num6 = -(b2**3) + 36 * b2 * b4 - c6
                if num6 % 216:
                    continue
                b6 = num6 // 216
                if (b4 - a1 * a3) % 2 or (b6 - a3 * a3) % 4:
                    continue
                a4 = (b4 - a1 * a3) // 2
                a6 = (b6 - a3 * a3) // 4
                m = WeierstrassModel(a1, a2, a3, a4, a6)
                if m.c_invariants == (c4, c6):
                    return m
    raise ArithmeticError(f"no integral model for c4={c4}, c6={c6}")


def minimal_model(
    m: WeierstrassModel, bad_primes: Optional[Iterable[int]] = None
) -> Tuple[WeierstrassModel, Tuple[int, int, int, int]]:
    """Global minimal model plus the (u, r, s, t) transformation onto it.

    bad_primes may list a superset of the primes dividing the
    discriminant; by default the discriminant is factored.
    """
    c4, c6 = m.c_invariants
    disc = m.discriminant
    if bad_primes is None:
        bad_primes = arith.factorize(abs(disc)).primes
    u = 1
    for p in sorted(set(int(p) for p in bad_primes)):
        vd = _val(disc, p)
        if vd < 12:
            continue
        e = min(_val(c4, p) // 4, _val(c6, p) // 6, vd // 12)
        while e > 0:
            cc4, cc6 = c4 // p ** (4 * e), c6 // p ** (6 * e)
            if p == 2 and not _kraus_ok_2(cc4, cc6):
                e -= 1
            elif p == 3 and _val(cc6, 3) == 2:
                e -= 1
            else:
                break
        u *= p**e
    mm = _model_from_c(c4 // u**4, c6 // u**6)
    s_num = u * mm.a1 - m.a1
    assert s_num % 2 == 0
    s = s_num // 2
    r_num = u * u * mm.a2 - m.a2 + s * m.a1 + s * s
    assert r_num % 3 == 0
    r = r_num // 3
    t_num = u**3 * mm.a3 - m.a3 - r * m.a1
    assert t_num % 2 == 0
    t = t_num // 2
    assert m.transform(u, r, s, t) == mm
    return mm, (u, r, s, t)


# ----------------------------------------------------------------------
# Tate's algorithm
# ----------------------------------------------------------------------


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _sqrt_mod_p(a: int, p: int) -> Optional[int]:
    a %= p
    if p == 2:
        return a
    if a == 0:
        return 0
    if _legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    mvar, cvar, tvar, rvar = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while tvar != 1:
        i, t2 = 0, tvar
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        bexp = pow(cvar, 1 << (mvar - i - 1), p)
        mvar, cvar = i, bexp * bexp % p
        tvar, rvar = tvar * cvar % p, rvar * bexp % p
    return rvar


def _quad_info(A: int, B: int, C: int, p: int) -> Tuple[bool, int, int]:
    """(separable, #roots in F_p, one root) of A X^2 + B X + C mod p; A unit."""
    A, B, C = A % p, B % p, C % p
    if p == 2:
        sep = B == 1
        roots = [x for x in (0, 1) if (A * x * x + B * x + C) % 2 == 0]
        return sep, len(roots), roots[0] if roots else 0
    D = (B * B - 4 * A * C) % p
    if D == 0:
        root = (-B * pow(2 * A, p - 2, p)) % p
        return False, 1, root
    r = _sqrt_mod_p(D, p)
    if r is None:
        return True, 0, 0
    root = ((-B + r) * pow(2 * A, p - 2, p)) % p
    return True, 2, root


def _cubic_analysis(b: int, c: int, d: int, p: int):
    """Root structure of T^3 + b T^2 + c T + d over F_p.

    Returns ("distinct", nroots_in_Fp) or ("double", double_root) or
    ("triple", root).
    """
    b, c, d = b % p, c % p, d % p
    if p <= 3:
        roots = [t for t in range(p) if (t**3 + b * t * t + c * t + d) % p == 0]
        mult = {}
        for t in roots:
            m = 1
            # multiplicity via derivative chain
            if (3 * t * t + 2 * b * t + c) % p == 0:
                m = 2
                if (6 * t + 2 * b) % p == 0:
                    m = 3
            mult[t] = m
        for t, mm in mult.items():
            if mm == 3:
                return ("triple", t)
            if mm == 2:
                return ("double", t)
        # no rational multiple root: a multiple root over an extension is
        # impossible for cubics (it would be a double root fixed by Frobenius)
        disc = (18 * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * c**3 - 27 * d * d) % p
        if disc == 0 and not mult:
            # double root in F_p^bar \ F_p cannot happen for separable reasons;
            # fall through as distinct
            pass
        return ("distinct", len(roots))
    disc = (18 * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * c**3 - 27 * d * d) % p
    if disc != 0:
        return ("distinct", _count_cubic_roots(b, c, d, p))
    # multiple root: gcd(P, P') has degree 1 (double) or 2 (triple)
    # P' = 3T^2 + 2bT + c
    g = _poly_gcd_mod(( (1, b, c, d) ), (3, 2 * b, c), p)
    if len(g) == 3:  # degree 2: triple root
        root = (-b * pow(3, p - 2, p)) % p
        return ("triple", root)
    # degree 1: g = (g1, g0): root = -g0/g1
    root = (-g[1] * pow(g[0], p - 2, p)) % p
    return ("double", root)


def _poly_gcd_mod(f, g, p):
    """Monic-normalized gcd of small polynomials over F_p (tuple coeffs, deg desc)."""
    f = [x % p for x in f]
    g = [x % p for x in g]

    def norm(h):
        while h and h[0] == 0:
            h = h[1:]
        return h

    f, g = norm(f), norm(g)
    while g:
        inv = pow(g[0], p - 2, p)
        while len(f) >= len(g):
            coef = f[0] * inv % p
            shift = len(f) - len(g)
            f = [
                (fc - coef * (g[i - shift] if 0 <= i - shift < len(g) else 0)) % p
                for i, fc in enumerate(f)
            ]
            f = norm(f)
            if not f:
                break
        f, g = g, f
    return tuple(f)


def _count_cubic_roots(b: int, c: int, d: int, p: int) -> int:
    """#roots in F_p of separable T^3+bT^2+cT+d: deg gcd(T^p - T, P)."""
    # T^p mod P by square-and-multiply on degree-<3 polynomials
    P = (b % p, c % p, d % p)

    def mulmod3(u, v):
        # (u2 T^2 + u1 T + u0)(v2 T^2 + v1 T + v0) mod P
        w = [0] * 5
        for i in range(3):
            for j in range(3):
                w[i + j] = (w[i + j] + u[2 - i] * v[2 - j]) % p
        # w has degree up to 4 (w[k] multiplies T^(4-k) with this indexing)
        # reduce: T^3 = -bT^2 - cT - d
        for k in (0, 1):  # T^4 then T^3
            lead = w[k]
            if lead:
                w[k] = 0
                w[k + 1] = (w[k + 1] - lead * P[0]) % p
                w[k + 2] = (w[k + 2] - lead * P[1]) % p
                w[k + 3] = (w[k + 3] - lead * P[2]) % p
        return (w[2], w[3], w[4])

    base = (0, 1, 0)  # T
    acc = (0, 0, 1)  # 1
    e = p
    while e:
        if e & 1:
            acc = mulmod3(acc, base)
        base = mulmod3(base, base)
        e >>= 1
    # acc = T^p mod P; compute gcd(acc - T, P)
    diff = (acc[0], (acc[1] - 1) % p, acc[2])
    g = _poly_gcd_mod((1, b, c, d), diff, p)
    return len(g) - 1 if g else 3


def _singular_point(m: WeierstrassModel, p: int) -> Tuple[int, int]:
    """The unique singular point of the reduction mod p (additive/mult case)."""
    a1, a2, a3, a4, a6 = m.a1 % p, m.a2 % p, m.a3 % p, m.a4 % p, m.a6 % p
    if p <= 3:
        for x in range(p):
            for y in range(p):
                on = (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p
                if on:
                    continue
                dx = (3 * x * x + 2 * a2 * x + a4 - a1 * y) % p
                dy = (2 * y + a1 * x + a3) % p
                if dx == 0 and dy == 0:
                    return x, y
        raise ArithmeticError("no singular point found")
    # complete the square: w^2 = 4x^3 + b2 x^2 + 2b4 x + b6 =: 4 f2(x)
    b2, b4, b6, _ = m.b_invariants
    # singular x0 is the multiple root of the cubic 4x^3+b2x^2+2b4x+b6
    inv4 = pow(4, p - 2, p)
    kind, data = _cubic_analysis(
        b2 * inv4 % p, 2 * b4 * inv4 % p, b6 * inv4 % p, p
    )[:2]
    if kind == "distinct":
        raise ArithmeticError("reduction is not singular")
    x0 = data
    y0 = (-(a1 * x0 + a3) * pow(2, p - 2, p)) % p
    return x0, x0 and y0 or y0


def _step6_normalize(m: WeierstrassModel, p: int) -> WeierstrassModel:
    """Translate so that p | a1,a2; p^2 | a3,a4; p^3 | a6."""
    if p <= 3:
        for s in range(p):
            for r in range(p * p):
                for t in range(p**3):
                    mm = m.transform(1, r, s, t)
                    if (
                        mm.a1 % p == 0
                        and mm.a2 % p == 0
                        and mm.a3 % p**2 == 0
                        and mm.a4 % p**2 == 0
                        and mm.a6 % p**3 == 0
                    ):
                        return mm
        raise ArithmeticError(f"step-6 normalization failed at p={p}")
    p3 = p**3
    inv2 = pow(2, p3 - p3 // p - 1, p3) if False else pow(2, -1, p3)
    inv12 = pow(12, -1, p3)
    b2 = m.b_invariants[0]
    s = (-m.a1 * inv2) % p3
    r = (-b2 * inv12) % p3
    t = (-(m.a3 + r * m.a1) * inv2) % p3
    mm = m.transform(1, r, s, t)
    assert (
        mm.a1 % p == 0
        and mm.a2 % p == 0
        and mm.a3 % p**2 == 0
        and mm.a4 % p**2 == 0
        and mm.a6 % p**3 == 0
    ), "step-6 closed form failed"
    return mm


def tate_local(m: WeierstrassModel, p: int) -> LocalData:
    """Kodaira type, conductor exponent and Tamagawa number at p.

    Runs on any integral model: a model non-minimal at p is rescaled
    internally (the returned data always refers to the curve, not the
    model).
    """
    p = int(p)
    while True:
        disc = m.discriminant
        n = _val(disc, p)
        if n == 0:
            return LocalData(p, "I0", 0, 1, "good")
        c4, c6 = m.c_invariants
        if _val(c4, p) == 0:
            # multiplicative: split iff -c6 is a square in Q_p
            if p == 2:
                split = (-c6) % 8 == 1
            else:
                split = _legendre(-c6, p) == 1
            c = n if split else (2 if n % 2 == 0 else 1)
            return LocalData(p, f"I{n}", 1, c, "split" if split else "nonsplit")
        x0, y0 = _singular_point(m, p)
        m1 = m.transform(1, x0 % p, 0, y0 % p)
        if _val(m1.a6, p) < 2:
            return LocalData(p, "II", n, 1, "additive")
        if _val(m1.b_invariants[3], p) < 3:
            return LocalData(p, "III", n - 1, 2, "additive")
        if _val(m1.b_invariants[2], p) < 3:
            _, nroots, _ = _quad_info(1, m1.a3 // p, -(m1.a6 // p**2), p)
            return LocalData(p, "IV", n - 2, 3 if nroots else 1, "additive")
        m2 = _step6_normalize(m1, p)
        kind, data = _cubic_analysis(m2.a2 // p, m2.a4 // p**2, m2.a6 // p**3, p)
        if kind == "distinct":
            return LocalData(p, "I0*", n - 4, 1 + data, "additive")
        if kind == "double":
            # shift double root to T = 0, then walk the I_nu* chain
            m3 = m2.transform(1, p * int(data), 0, 0)
            nu = 1
            while True:
                if nu % 2 == 1:
                    k = (nu + 3) // 2
                    A, B, C = 1, m3.a3 // p**k, -(m3.a6 // p ** (nu + 3))
                else:
                    k = (nu + 4) // 2
                    A, B, C = m3.a2 // p, m3.a4 // p**k, m3.a6 // p ** (nu + 3)
                sep, nroots, root = _quad_info(A, B, C, p)
                if sep:
                    return LocalData(
                        p, f"I{nu}*", n - nu - 4, 4 if nroots else 2, "additive"
                    )
                if nu % 2 == 1:
                    m3 = m3.transform(1, 0, 0, p**k * int(root))
                else:
                    m3 = m3.transform(1, p ** (nu + 2) // p ** ((nu + 2) // 2) * 0 + p ** ((nu + 2) // 2) * int(root), 0, 0)
                nu += 1
                if nu > n:
                    raise ArithmeticError("runaway I_n* chain")
        # triple root
        m3 = m2.transform(1, p * int(data), 0, 0)
        sep, nroots, root = _quad_info(1, m3.a3 // p**2, -(m3.a6 // p**4), p)
        if sep:
            return LocalData(p, "IV*", n - 6, 3 if nroots else 1, "additive")
        m3 = m3.transform(1, 0, 0, p**2 * int(root))
        if _val(m3.a4, p) < 4:
            return LocalData(p, "III*", n - 7, 2, "additive")
        if _val(m3.a6, p) < 6:
            return LocalData(p, "II*", n - 8, 1, "additive")
        m = m3.transform(p, 0, 0, 0)


def local_data(
    m: WeierstrassModel, bad_primes: Optional[Iterable[int]] = None
) -> Tuple[WeierstrassModel, int, List[LocalData]]:
    """Minimal model, conductor, and local data at each bad prime."""
    mm, (u, _, _, _) = minimal_model(m, bad_primes)
    disc = mm.discriminant
    if bad_primes is None:
        primes = arith.factorize(abs(disc)).primes
    else:
        primes = tuple(sorted({int(p) for p in bad_primes} | {2, 3}))
    out = []
    N = 1
    for p in primes:
        if disc % p:
            continue
        ld = tate_local(mm, p)
        out.append(ld)
        N *= p**ld.conductor_exponent
    return mm, N, out


# ----------------------------------------------------------------------
# torsion
# ----------------------------------------------------------------------


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _poly_sub(f, g):
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)]


def _division_poly_parts(m: WeierstrassModel, nmax: int):
    """P[n] with psi_n = P[n] (n odd) or psi2 * P[n] (n even); coeffs low-first."""
    b2, b4, b6, b8 = m.b_invariants
    g = [b6, 2 * b4, b2, 4]  # psi2^2 as a polynomial in x
    P = {0: [0], 1: [1], 2: [1]}
    P[3] = [b8, 3 * b6, 3 * b4, b2, 3]
    P[4] = [
        b4 * b8 - b6 * b6,
        b2 * b8 - b4 * b6,
        10 * b8,
        10 * b6,
        5 * b4,
        b2,
        2,
    ]

    def get(n):
        if n in P:
            return P[n]
        m2, r = divmod(n, 2)
        if r:
            t1 = _poly_mul(get(m2 + 2), _poly_mul(get(m2), _poly_mul(get(m2), get(m2))))
            t2 = _poly_mul(get(m2 - 1), _poly_mul(get(m2 + 1), _poly_mul(get(m2 + 1), get(m2 + 1))))
            if m2 % 2 == 0:
                t1 = _poly_mul(_poly_mul(g, g), t1)
            else:
                t2 = _poly_mul(_poly_mul(g, g), t2)
            P[n] = _poly_sub(t1, t2)
        else:
            t1 = _poly_mul(get(m2 + 2), _poly_mul(get(m2 - 1), get(m2 - 1)))
            t2 = _poly_mul(get(m2 - 2), _poly_mul(get(m2 + 1), get(m2 + 1)))
            P[n] = _poly_mul(get(m2), _poly_sub(t1, t2))
        return P[n]

    for n in range(nmax + 1):
        get(n)
    return P, g


def _integer_roots(coeffs_low_first: Sequence[int]) -> List[int]:
    """All integer roots of an integer polynomial, via numeric isolation."""
    cs = list(coeffs_low_first)
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    shift = 0
    while cs[0] == 0:
        cs.pop(0)
        shift = 1  # x = 0 is a root
    roots = [0] if shift else []
    if len(cs) <= 1:
        return roots
    prec = 60 + max(abs(c).bit_length() for c in cs)
    with mp.workprec(prec):
        try:
            rts = mp.polyroots([mp.mpf(c) for c in reversed(cs)], maxsteps=200, extraprec=200)
        except mp.libmp.NoConvergence:
            rts = []
        cand = set()
        for r in rts:
            if abs(mp.im(r)) < 0.01:
                for k in (mp.floor(mp.re(r)), mp.ceil(mp.re(r))):
                    cand.add(int(k))
    for x in sorted(cand):
        if sum(c * x**i for i, c in enumerate(cs)) == 0:
            roots.append(x)
    return sorted(set(roots))


def _rational_quarter_roots(coeffs_low_first: Sequence[int]) -> List[Fraction]:
    """Rational roots with denominator dividing 4 (torsion x-coordinates)."""
    deg = len(coeffs_low_first) - 1
    # substitute x = X/4 and clear denominators: coefficient of X^i is c_i 4^(deg-i)
    scaled = [c * 4 ** (deg - i) for i, c in enumerate(coeffs_low_first)]
    return sorted({Fraction(X, 4) for X in _integer_roots(scaled)})


def _points_with_x(m: WeierstrassModel, x: Fraction) -> int:
    """Number of rational points on m with this x-coordinate (0, 1 or 2)."""
    lin = m.a1 * x + m.a3
    D = lin * lin + 4 * m.rhs(x)
    if D < 0:
        return 0
    if D == 0:
        return 1
    num, den = D.numerator, D.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return 0
    return 2


def torsion_order(m: WeierstrassModel) -> int:
    """Exact order of the rational torsion subgroup.

    Reduction mod five good odd primes bounds the order; candidate points
    are then exhibited through integer (or quarter-integer) roots of the
    relevant division polynomials.
    """
    mm, _ = minimal_model(m)
    disc = mm.discriminant
    bound_parts: dict[int, int] = {}
    counts = []
    p = 3
    while len(counts) < 5:
        if disc % p:
            ld_count = p + 1 - ap(mm, p)
            counts.append((p, ld_count))
        p = _next_prime(p)
    for ell in (2, 3, 5, 7, 11, 13):
        vals = [_val(c, ell) for (q, c) in counts if q != ell]
        bound_parts[ell] = min(vals) if vals else 0
    big = [q for (q, c) in counts for f in [c] if False]
    # primes > 13 cannot divide torsion (Mazur), no need to track them
    P, g = _division_poly_parts(mm, 9)
    total = 1
    for ell, cap in ((2, 8), (3, 9), (5, 5), (7, 7)):
        if bound_parts.get(ell, 0) == 0:
            continue
        nmax = min(cap, ell ** bound_parts[ell])
        best = 1
        n = ell
        while n <= nmax:
            xs = set(_rational_quarter_roots(P[n]))
            if n % 2 == 0:
                xs |= set(_rational_quarter_roots(g))
            cnt = 1
            for x in sorted(xs):
                cnt += _points_with_x(mm, x)
            best = cnt
            n *= ell
        total *= best
    if total not in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16):
        raise ArithmeticError(f"torsion order {total} violates the rational bound")
    return total


def _next_prime(p: int) -> int:
    q = p + 2 if p > 2 else 3
    while not arith.is_prime(q):
        q += 2
    return q


# ----------------------------------------------------------------------
# periods
# ----------------------------------------------------------------------


def real_period(m: WeierstrassModel, precision_digits: int = 20):
    """Least positive real period of the Neron differential (AGM).

    The model should be minimal; the value returned is an mpmath float
    carrying precision_digits significant digits.
    """
    b2, b4, b6, _ = m.b_invariants
    with mp.workdps(precision_digits + 15):
        roots = mp.polyroots(
            [mp.mpf(4), mp.mpf(b2), mp.mpf(2 * b4), mp.mpf(b6)],
            extraprec=120,
            maxsteps=200,
        )
        reals = [r for r in roots if abs(mp.im(r)) < mp.mpf(10) ** (-precision_digits)]
        if m.discriminant > 0:
            es = sorted((mp.re(r) for r in roots), reverse=True)
            e1, e2, e3 = es
            om = mp.pi / mp.agm(mp.sqrt(e1 - e3), mp.sqrt(e1 - e2))
        else:
            e1 = max(mp.re(r) for r in roots if abs(mp.im(r)) < 1e-10)
            comp = [r for r in roots if abs(mp.im(r)) >= 1e-10]
            rho = comp[0]
            A = abs(e1 - rho)
            Bq = mp.re(e1 - rho)
            om = mp.pi / mp.agm(mp.sqrt(A), mp.sqrt((A + Bq) / 2))
        return +om


# ----------------------------------------------------------------------
# traces of Frobenius and a_n
# ----------------------------------------------------------------------


def _count_points_small(m: WeierstrassModel, p: int) -> int:
    cnt = 1
    for x in range(p):
        for y in range(p):
            if (y * y + m.a1 * x * y + m.a3 * y - m.rhs(x)) % p == 0:
                cnt += 1
    return cnt


def ap(m: WeierstrassModel, p: int) -> int:
    """Trace of Frobenius; bad primes resolve through the local type."""
    p = int(p)
    disc = m.discriminant
    if disc % p == 0:
        ld = tate_local(m, p)
        if ld.reduction == "good":
            # model was non-minimal at p; recurse on the minimal model
            mm, _ = minimal_model(m, bad_primes=arith.factorize(abs(disc)).primes)
            return ap(mm, p)
        return {"split": 1, "nonsplit": -1, "additive": 0}[ld.reduction]
    if p < 5:
        return p + 1 - _count_points_small(m, p)
    c4, c6 = m.c_invariants
    A = (-27 * c4) % p
    B = (-54 * c6) % p
    if p < kernels.NAIVE_AP_CUT:
        a = int(kernels.ap_naive(A, B, p))
    else:
        a = int(kernels.ap_bsgs(A, B, p))
    assert a * a <= 4 * p, "Hasse bound violated"
    return a


def ap_vector(m: WeierstrassModel, primes: np.ndarray) -> np.ndarray:
    """a_p for many (good, >=5) primes at once through the fast kernel."""
    c4, c6 = m.c_invariants
    amods = np.empty(len(primes), dtype=np.uint64)
    bmods = np.empty(len(primes), dtype=np.uint64)
    for i, p in enumerate(primes):
        p = int(p)
        amods[i] = (-27 * c4) % p
        bmods[i] = (-54 * c6) % p
    return kernels.ap_batch(np.asarray(primes, dtype=np.uint64), amods, bmods)


def an_multiplicative(
    m: WeierstrassModel,
    limit: int,
    bad_primes: Optional[Iterable[int]] = None,
) -> np.ndarray:
    """Dense a_1..a_limit (int32, index 0 unused) for the minimal model."""
    arith.check_budget(16 * limit, "a_n table")
    mm, _ = minimal_model(m, bad_primes)
    disc = mm.discriminant
    primes = arith.primes_upto(limit)
    aps = np.zeros(len(primes), dtype=np.int64)
    is_bad = np.zeros(len(primes), dtype=np.uint8)
    good_idx = []
    for i, p in enumerate(primes):
        p = int(p)
        if disc % p == 0 or p < 5:
            aps[i] = ap(mm, p)
            is_bad[i] = 1 if disc % p == 0 else 0
        else:
            good_idx.append(i)
    if good_idx:
        gp = primes[good_idx]
        aps[good_idx] = ap_vector(mm, gp)
    return kernels.an_fill(limit, primes.astype(np.uint64), aps, is_bad)


# ----------------------------------------------------------------------
# assembled invariants
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CurveInvariants:
    minimal: WeierstrassModel
    discriminant: int
    conductor: int
    torsion_order: int
    omega: object  # mpmath float
    c_infinity: object
    c_fin: int
    local: Tuple[LocalData, ...]


def invariants(
    m: WeierstrassModel,
    precision_digits: int = 20,
    bad_primes: Optional[Iterable[int]] = None,
) -> CurveInvariants:
    mm, N, loc = local_data(m, bad_primes)
    om = real_period(mm, precision_digits)
    tors = torsion_order(mm)
    cfin = prod(ld.tamagawa for ld in loc)
    cinf = om if mm.discriminant < 0 else 2 * om
    return CurveInvariants(mm, mm.discriminant, N, tors, om, cinf, cfin, tuple(loc))
