"""Pure numpy/Python twin of the compiled kernels in `_core.pyx`.

Same function signatures, exact same outputs.  This module is the
fallback when the extension did not build and the reference side of the
backend-equivalence tests.  The lattice kernels are numpy-vectorized and
stay usable at scan scale; the point-counting kernels are plain Python
and noticeably slower than the compiled versions.
"""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np

NAIVE_AP_CUT = 1 << 16


# ----------------------------------------------------------------------
# lattice kernels
# ----------------------------------------------------------------------


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def pair_table(limit, qa, qb, qab, cx, cy, cmod, cbits, sx, sy, smod, svals):
    """Signed representation counts of the binary section qa*x^2+qab*xy+qb*y^2.

    Returns int32 P with P[m] = sum of sign(x, y) over all integer pairs
    with value m <= limit that pass every residue constraint.  Constraint
    i allows (cx[i]*x + cy[i]*y) mod cmod[i] exactly when that residue's
    bit is set in cbits[i].  smod == 0 means constant sign +1.
    """
    P = np.zeros(limit + 1, dtype=np.int32)
    det2 = 4 * qa * qb - qab * qab
    if det2 <= 0 or qa <= 0:
        raise ValueError("binary section is not positive definite")
    xmax = isqrt(4 * qb * limit // det2) + 1
    ncons = len(cmod)
    idx_chunks: list[np.ndarray] = []
    val_chunks: list[np.ndarray] = []
    pending = 0
    for x in range(-xmax, xmax + 1):
        D = 4 * qb * limit - det2 * x * x
        if D < 0:
            continue
        s = isqrt(D)
        ylo = _ceil_div(-qab * x - s, 2 * qb)
        yhi = _floor_div(-qab * x + s, 2 * qb)
        if ylo > yhi:
            continue
        ys = np.arange(ylo, yhi + 1, dtype=np.int64)
        vals = qa * x * x + qab * x * ys + qb * ys * ys
        keep = vals <= limit
        for i in range(ncons):
            res = (cx[i] * x + cy[i] * ys) % cmod[i]
            keep &= (np.uint64(cbits[i]) >> res.astype(np.uint64)) & np.uint64(1) == 1
        ys = ys[keep]
        vals = vals[keep]
        if not vals.size:
            continue
        if smod:
            sgn = np.asarray(svals, dtype=np.int64)[(sx * x + sy * ys) % smod]
        else:
            sgn = np.ones(vals.size, dtype=np.int64)
        idx_chunks.append(vals)
        val_chunks.append(sgn)
        pending += vals.size
        if pending >= 1 << 22:
            np.add.at(P, np.concatenate(idx_chunks), np.concatenate(val_chunks))
            idx_chunks, val_chunks, pending = [], [], 0
    if idx_chunks:
        np.add.at(P, np.concatenate(idx_chunks), np.concatenate(val_chunks))
    return P


def shift_accumulate(out, src, offsets, weights):
    """out[offsets[k]:] += weights[k] * src, clipped to the table end."""
    n_out = out.shape[0]
    n_src = src.shape[0]
    cache: dict[int, np.ndarray] = {}
    for off, w in zip(offsets, weights):
        off = int(off)
        w = int(w)
        if w == 0 or off >= n_out:
            continue
        n = min(n_src, n_out - off)
        prod = cache.get(w)
        if prod is None:
            prod = (src.astype(np.int32) * np.int32(w)) if w != 1 else src
            cache[w] = prod
        out[off : off + n] += prod[:n]


def window_count(
    lo, hi, a, b, c, p, q, r, cx, cy, cz, cmod, cbits, sx, sy, sz, smod, svals, out
):
    """Accumulate signed lattice counts for lo <= Q(x,y,z) < hi into out.

    Direct enumeration: outer loop on (x, y) over the projected ellipse,
    inner z runs only over the (at most two) integer intervals whose
    values land inside the window.  Handles arbitrary cross terms,
    constraints and sign rules; used for windowed batches and as the
    general fallback when a spec cannot be split into pair+shift form.
    """
    top = hi - 1
    detG = (
        8 * a * b * c + 2 * p * q * r - 2 * a * r * r - 2 * b * q * q - 2 * c * p * p
    )
    if detG <= 0:
        raise ValueError("form is not positive definite")
    adj_xx = 4 * b * c - r * r
    xmax = isqrt(2 * top * adj_xx // detG) + 1
    Ey = 4 * b * c - r * r
    Ex = 4 * a * c - q * q
    Exy = 4 * c * p - 2 * q * r
    fourc = 4 * c
    ncons = len(cmod)
    for x in range(-xmax, xmax + 1):
        By = Exy * x
        Dy = By * By - 4 * Ey * (Ex * x * x - fourc * top)
        if Dy < 0:
            continue
        sD = isqrt(Dy)
        ylo = _ceil_div(-By - sD, 2 * Ey)
        yhi = _floor_div(-By + sD, 2 * Ey)
        for y in range(ylo, yhi + 1):
            L = q * x + r * y
            M = a * x * x + b * y * y + p * x * y
            D1 = L * L - 4 * c * (M - top)
            if D1 < 0:
                continue
            s1 = isqrt(D1)
            z1a = _ceil_div(-L - s1, 2 * c)
            z1b = _floor_div(-L + s1, 2 * c)
            D2 = L * L - 4 * c * (M - (lo - 1))
            if D2 < 0:
                ranges = ((z1a, z1b),)
            else:
                s2 = isqrt(D2)
                z2a = _ceil_div(-L - s2, 2 * c)
                z2b = _floor_div(-L + s2, 2 * c)
                ranges = ((z1a, z2a - 1), (z2b + 1, z1b))
            for za, zb in ranges:
                for z in range(za, zb + 1):
                    val = M + L * z + c * z * z
                    if val < lo or val > top:
                        continue
                    ok = True
                    for i in range(ncons):
                        res = (cx[i] * x + cy[i] * y + cz[i] * z) % cmod[i]
                        if not (int(cbits[i]) >> res) & 1:
                            ok = False
                            break
                    if not ok:
                        continue
                    if smod:
                        out[val - lo] += svals[(sx * x + sy * y + sz * z) % smod]
                    else:
                        out[val - lo] += 1


def theta_single_term(
    a, b, c, p, q, r, cx, cy, cz, cmod, cbits, sx, sy, sz, smod, svals, d
):
    """Signed count of Q(x,y,z) = d by looping (y,z), solving for x.

    The caller permutes the form so the solved variable x carries the
    smallest diagonal coefficient.  Exact integer arithmetic throughout;
    candidate x values come from a perfect-square discriminant test.
    """
    detG = (
        8 * a * b * c + 2 * p * q * r - 2 * a * r * r - 2 * b * q * q - 2 * c * p * p
    )
    if detG <= 0:
        raise ValueError("form is not positive definite")
    # y-range of the (y,z) projection once x is eliminated
    Ay = 4 * a * b - p * p
    Az = 4 * a * c - q * q
    Ayz = 4 * a * r - 2 * p * q
    foura = 4 * a
    adj_yy = 4 * a * c - q * q
    ymax = isqrt(2 * d * adj_yy // detG) + 1
    total = 0
    ncons = len(cmod)
    for y in range(-ymax, ymax + 1):
        Bz = Ayz * y
        Dz = Bz * Bz - 4 * Az * (Ay * y * y - foura * d)
        if Dz < 0:
            continue
        sD = isqrt(Dz)
        zlo = _ceil_div(-Bz - sD, 2 * Az)
        zhi = _floor_div(-Bz + sD, 2 * Az)
        for z in range(zlo, zhi + 1):
            B = p * y + q * z
            C = b * y * y + c * z * z + r * y * z - d
            D = B * B - 4 * a * C
            if D < 0:
                continue
            s = isqrt(D)
            if s * s != D:
                continue
            for sig in ((s, -s) if s else (0,)):
                num = -B + sig
                if num % (2 * a):
                    continue
                x = num // (2 * a)
                ok = True
                for i in range(ncons):
                    res = (cx[i] * x + cy[i] * y + cz[i] * z) % cmod[i]
                    if not (int(cbits[i]) >> res) & 1:
                        ok = False
                        break
                if not ok:
                    continue
                if smod:
                    total += svals[(sx * x + sy * y + sz * z) % smod]
                else:
                    total += 1
    return total


# ----------------------------------------------------------------------
# point counting
# ----------------------------------------------------------------------


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def _sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks; a must be a quadratic residue mod odd prime p."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    t = p - 1
    e = 0
    while t % 2 == 0:
        t //= 2
        e += 1
    g = 2
    while _legendre(g, p) != -1:
        g += 1
    g = pow(g, t, p)
    x = pow(a, (t + 1) // 2, p)
    bval = pow(a, t, p)
    rexp = e
    while bval != 1:
        m = 0
        t2 = bval
        while t2 != 1:
            t2 = t2 * t2 % p
            m += 1
        w = pow(g, 1 << (rexp - m - 1), p)
        g = w * w % p
        x = x * w % p
        bval = bval * g % p
        rexp = m
    return x


def _ec_add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, p - 2, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _ec_mul(k, P, A, p):
    R = None
    Q = P
    while k:
        if k & 1:
            R = _ec_add(R, Q, A, p)
        Q = _ec_add(Q, Q, A, p)
        k >>= 1
    return R


def _order_multiple_in_range(P, A, p, lo, hi):
    """Smallest n in [lo, hi] with n*P = O (one exists when #E is in range)."""
    width = hi - lo + 1
    s = isqrt(width) + 1
    baby = {}
    R = None
    for j in range(s):
        if R is None and j:
            # ord(P) = j exactly; smallest multiple of j in the range
            n = lo + (-lo) % j
            return n if n <= hi else None
        baby[R] = j
        R = _ec_add(R, P, A, p)
    G = _ec_mul(s, P, A, p)
    T = _ec_mul(lo, P, A, p)
    best = None
    k = 0
    while k * s <= width:
        if T is None:
            n = lo + k * s
            if n <= hi:
                best = n if best is None else min(best, n)
                break
        else:
            xT, yT = T
            j = baby.get((xT, yT))
            if j is not None and j:
                n = lo + k * s - j
                if lo <= n <= hi:
                    best = n if best is None else min(best, n)
                    break
            j = baby.get((xT, (-yT) % p))
            if j is not None and j:
                n = lo + k * s + j
                if lo <= n <= hi:
                    best = n if best is None else min(best, n)
                    break
        T = _ec_add(T, G, A, p)
        k += 1
    return best


def _exact_order(P, A, p, multiple):
    order = multiple
    m = multiple
    f = 2
    fac = []
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            fac.append((f, e))
        f += 1 if f == 2 else 2
    if m > 1:
        fac.append((m, 1))
    for fp, fe in fac:
        for _ in range(fe):
            if order % fp == 0 and _ec_mul(order // fp, P, A, p) is None:
                order //= fp
            else:
                break
    return order


def ap_naive(A, B, p):
    """Trace via character sum with a quadratic-residue table; p odd >= 5."""
    x = np.arange(p, dtype=np.int64)
    qr = np.zeros(p, dtype=np.int8)
    qr[(x[: p // 2 + 1] * x[: p // 2 + 1]) % p] = 1
    f = ((x * x % p) * x + A * x + B) % p
    chi = np.where(f == 0, 0, np.where(qr[f] == 1, 1, -1))
    return -int(chi.sum())


def ap_bsgs(A, B, p):
    """Trace of Frobenius via Shanks-Mestre order finding; p odd >= 5."""
    if p < 512:
        # below Mestre's bound the unique-multiple exit is not guaranteed
        return ap_naive(A, B, p)
    w = isqrt(4 * p)
    lo, hi = p + 1 - w, p + 1 + w
    g = 2
    while _legendre(g, p) != -1:
        g += 1
    curves = ((A, B), (A * g * g % p, B * g * g * g % p))
    L = [1, 1]
    x = 0
    while True:
        u = (x * x * x + A * x + B) % p
        x += 1
        if u == 0:
            L[0] = L[0] if L[0] % 2 == 0 else L[0] * 2
            L[1] = L[1] if L[1] % 2 == 0 else L[1] * 2
        else:
            ci = 0 if _legendre(u, p) == 1 else 1
            Ac, _ = curves[ci]
            if ci == 0:
                Px = (x - 1) % p
                Py = _sqrt_mod(u, p)
            else:
                Px = (x - 1) * g % p
                Py = _sqrt_mod(u * pow(g, 3, p) % p, p)
            P = (Px, Py)
            mult = _order_multiple_in_range(P, Ac, p, lo, hi)
            if mult is not None:
                order = _exact_order(P, Ac, p, mult)
                L[ci] = L[ci] * order // gcd(L[ci], order)
        first = lo + (-lo) % L[0]
        cands = [
            n for n in range(first, hi + 1, L[0]) if (2 * p + 2 - n) % L[1] == 0
        ]
        if len(cands) == 1:
            return p + 1 - cands[0]
        if L[0] > hi and L[1] > hi:  # should not happen
            raise ArithmeticError(f"order search failed at p={p}")


def ap_batch(primes, amods, bmods):
    """a_p for y^2 = x^3 + A x + B over F_p, one entry per input prime."""
    out = np.empty(len(primes), dtype=np.int64)
    for i in range(len(primes)):
        p = int(primes[i])
        A = int(amods[i])
        B = int(bmods[i])
        if p < NAIVE_AP_CUT:
            out[i] = ap_naive(A, B, p)
        else:
            out[i] = ap_bsgs(A, B, p)
    return out


# ----------------------------------------------------------------------
# multiplicative coefficient fill
# ----------------------------------------------------------------------


def an_fill(limit, primes, aps, is_bad):
    """Dense a_1..a_limit from per-prime traces via the Hecke recurrences.

    Good p: a_{p^k} = a_p a_{p^{k-1}} - p a_{p^{k-2}}; bad p: a_{p^k} = a_p^k.
    Multiplicative across coprime indices.
    """
    a = np.ones(limit + 1, dtype=np.int64)
    a[0] = 0
    for i in range(len(primes)):
        pp = int(primes[i])
        if pp > limit:
            break
        ap_val = int(aps[i])
        bad = bool(is_bad[i])
        powers = []
        prev2, prev1 = 1, ap_val
        pk = pp
        while pk <= limit:
            powers.append(prev1)
            pk *= pp
            if bad:
                prev1 = prev1 * ap_val
            else:
                prev2, prev1 = prev1, ap_val * prev1 - pp * prev2
        pk = pp
        for k in range(len(powers)):
            m = np.arange(1, limit // pk + 1, dtype=np.int64)
            m = m[m % pp != 0]
            a[m * pk] *= powers[k]
            pk *= pp
    out = a.astype(np.int32)
    if not np.array_equal(out, a):
        raise OverflowError("a_n exceeded int32 range")
    return out
