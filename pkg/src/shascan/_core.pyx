# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: lattice enumeration, point counting, a_n fill.

Signature-for-signature twin of `_core_py`; outputs are identical.
"""

from libc.math cimport sqrt
from libc.stdlib cimport calloc, free, malloc

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.uint64_t u64
ctypedef cnp.int32_t i32
ctypedef cnp.int8_t i8
ctypedef cnp.uint8_t u8

cdef extern from *:
    ctypedef long long i128 "__int128"
    ctypedef unsigned long long u128 "unsigned __int128"

NAIVE_AP_CUT = 1 << 16

cdef i64 _NAIVE_CUT = 1 << 16


cdef inline i64 fdiv(i64 a, i64 b) nogil:
    cdef i64 q = a / b
    if a % b != 0 and a < 0:
        q -= 1
    return q


cdef inline i64 cdivc(i64 a, i64 b) nogil:
    return -fdiv(-a, b)


cdef inline i64 isqrt64(i64 n) nogil:
    if n <= 0:
        return 0
    cdef i64 r = <i64>sqrt(<double>n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i128 isqrt128(i128 n) nogil:
    if n <= 0:
        return 0
    cdef i128 r = <i128>sqrt(<double>n)
    if r < 0:
        r = 0
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i64 posmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


# ----------------------------------------------------------------------
# lattice kernels
# ----------------------------------------------------------------------


def pair_table(limit, qa, qb, qab,
               cnp.ndarray[i64, ndim=1] cx, cnp.ndarray[i64, ndim=1] cy,
               cnp.ndarray[i64, ndim=1] cmod, cnp.ndarray[u64, ndim=1] cbits,
               sx, sy, smod, cnp.ndarray[i8, ndim=1] svals):
    cdef i64 L = limit, a = qa, b = qb, ab = qab
    cdef i64 _sx = sx, _sy = sy, _sm = smod
    cdef i64 det2 = 4 * a * b - ab * ab
    if det2 <= 0 or a <= 0:
        raise ValueError("binary section is not positive definite")
    out_arr = np.zeros(L + 1, dtype=np.int32)
    cdef i32[::1] P = out_arr
    cdef Py_ssize_t nc = cmod.shape[0]
    cdef i64 xmax = isqrt64(4 * b * L / det2) + 1
    cdef i64 x, y, ylo, yhi, D, s, val, res, i
    cdef int ok, sgn
    with nogil:
        for x in range(-xmax, xmax + 1):
            D = 4 * b * L - det2 * x * x
            if D < 0:
                continue
            s = isqrt64(D)
            ylo = cdivc(-ab * x - s, 2 * b)
            yhi = fdiv(-ab * x + s, 2 * b)
            for y in range(ylo, yhi + 1):
                val = a * x * x + ab * x * y + b * y * y
                if val > L:
                    continue
                ok = 1
                for i in range(nc):
                    res = posmod(cx[i] * x + cy[i] * y, cmod[i])
                    if not (cbits[i] >> res) & 1:
                        ok = 0
                        break
                if not ok:
                    continue
                if _sm:
                    sgn = svals[posmod(_sx * x + _sy * y, _sm)]
                else:
                    sgn = 1
                P[val] += sgn
    return out_arr


def shift_accumulate(cnp.ndarray[i32, ndim=1] out, cnp.ndarray[i32, ndim=1] src,
                     cnp.ndarray[i64, ndim=1] offsets, cnp.ndarray[i64, ndim=1] weights):
    cdef i64 n_out = out.shape[0], n_src = src.shape[0]
    cdef i32[::1] o = out
    cdef i32[::1] s = src
    cdef Py_ssize_t k, j
    cdef i64 off, n
    cdef i32 w
    with nogil:
        for k in range(offsets.shape[0]):
            off = offsets[k]
            w = <i32>weights[k]
            if w == 0 or off >= n_out:
                continue
            n = n_src
            if n > n_out - off:
                n = n_out - off
            for j in range(n):
                o[off + j] += w * s[j]


def window_count(lo, hi, a, b, c, p, q, r,
                 cnp.ndarray[i64, ndim=1] cx, cnp.ndarray[i64, ndim=1] cy,
                 cnp.ndarray[i64, ndim=1] cz, cnp.ndarray[i64, ndim=1] cmod,
                 cnp.ndarray[u64, ndim=1] cbits,
                 sx, sy, sz, smod, cnp.ndarray[i64, ndim=1] svals,
                 cnp.ndarray[i32, ndim=1] out):
    cdef i64 _lo = lo, _hi = hi, A = a, B = b, C = c, Pq = p, Q = q, R = r
    cdef i64 _sx = sx, _sy = sy, _sz = sz, _sm = smod
    cdef i64 top = _hi - 1
    cdef i64 detG = (8 * A * B * C + 2 * Pq * Q * R - 2 * A * R * R
                     - 2 * B * Q * Q - 2 * C * Pq * Pq)
    if detG <= 0:
        raise ValueError("form is not positive definite")
    cdef i64 adj_xx = 4 * B * C - R * R
    cdef i64 Ey = 4 * B * C - R * R
    cdef i64 Ex = 4 * A * C - Q * Q
    cdef i64 Exy = 4 * C * Pq - 2 * Q * R
    cdef i64 fourc = 4 * C
    cdef Py_ssize_t nc = cmod.shape[0]
    cdef i32[::1] o = out
    cdef i64 xmax = isqrt64(<i64>(2 * <i128>top * adj_xx / detG)) + 1
    cdef i64 x, y, z, ylo, yhi, By, sD, L, M, D1, s1, D2, s2
    cdef i64 z1a, z1b, z2a, z2b, za, zb, val, res, i
    cdef i128 Dy
    cdef int ok, ri
    with nogil:
        for x in range(-xmax, xmax + 1):
            By = Exy * x
            Dy = <i128>By * By - 4 * <i128>Ey * (<i128>Ex * x * x - <i128>fourc * top)
            if Dy < 0:
                continue
            sD = <i64>isqrt128(Dy)
            ylo = cdivc(-By - sD, 2 * Ey)
            yhi = fdiv(-By + sD, 2 * Ey)
            for y in range(ylo, yhi + 1):
                L = Q * x + R * y
                M = A * x * x + B * y * y + Pq * x * y
                D1 = L * L - 4 * C * (M - top)
                if D1 < 0:
                    continue
                s1 = isqrt64(D1)
                z1a = cdivc(-L - s1, 2 * C)
                z1b = fdiv(-L + s1, 2 * C)
                D2 = L * L - 4 * C * (M - (_lo - 1))
                for ri in range(2):
                    if D2 < 0:
                        if ri == 1:
                            break
                        za = z1a
                        zb = z1b
                    else:
                        s2 = isqrt64(D2)
                        if ri == 0:
                            za = z1a
                            zb = cdivc(-L - s2, 2 * C) - 1
                        else:
                            za = fdiv(-L + s2, 2 * C) + 1
                            zb = z1b
                    for z in range(za, zb + 1):
                        val = M + L * z + C * z * z
                        if val < _lo or val > top:
                            continue
                        ok = 1
                        for i in range(nc):
                            res = posmod(cx[i] * x + cy[i] * y + cz[i] * z, cmod[i])
                            if not (cbits[i] >> res) & 1:
                                ok = 0
                                break
                        if not ok:
                            continue
                        if _sm:
                            o[val - _lo] += <i32>svals[posmod(_sx * x + _sy * y + _sz * z, _sm)]
                        else:
                            o[val - _lo] += 1


def theta_single_term(a, b, c, p, q, r,
                      cnp.ndarray[i64, ndim=1] cx, cnp.ndarray[i64, ndim=1] cy,
                      cnp.ndarray[i64, ndim=1] cz, cnp.ndarray[i64, ndim=1] cmod,
                      cnp.ndarray[u64, ndim=1] cbits,
                      sx, sy, sz, smod, cnp.ndarray[i64, ndim=1] svals, d):
    cdef i64 A = a, B = b, C = c, Pq = p, Q = q, R = r, dd = d
    cdef i64 _sx = sx, _sy = sy, _sz = sz, _sm = smod
    cdef i64 detG = (8 * A * B * C + 2 * Pq * Q * R - 2 * A * R * R
                     - 2 * B * Q * Q - 2 * C * Pq * Pq)
    if detG <= 0:
        raise ValueError("form is not positive definite")
    cdef i64 Ay = 4 * A * B - Pq * Pq
    cdef i64 Az = 4 * A * C - Q * Q
    cdef i64 Ayz = 4 * A * R - 2 * Pq * Q
    cdef i64 adj_yy = 4 * A * C - Q * Q
    cdef Py_ssize_t nc = cmod.shape[0]
    cdef i64 ymax = <i64>(2 * <i128>dd * adj_yy / detG)
    ymax = isqrt64(ymax) + 1
    cdef i64 total = 0
    cdef i64 y, z, zlo, zhi, sD64, Bq, s, num, x, res, i, sig
    cdef i128 Dz, Cq, D
    cdef int ok, which
    with nogil:
        for y in range(-ymax, ymax + 1):
            Dz = (<i128>Ayz * y) * (<i128>Ayz * y) - 4 * <i128>Az * (<i128>Ay * y * y - 4 * <i128>A * dd)
            if Dz < 0:
                continue
            sD64 = <i64>isqrt128(Dz)
            zlo = cdivc(-Ayz * y - sD64, 2 * Az)
            zhi = fdiv(-Ayz * y + sD64, 2 * Az)
            for z in range(zlo, zhi + 1):
                Bq = Pq * y + Q * z
                Cq = <i128>B * y * y + <i128>C * z * z + <i128>R * y * z - dd
                D = <i128>Bq * Bq - 4 * <i128>A * Cq
                if D < 0:
                    continue
                s = <i64>isqrt128(D)
                if <i128>s * s != D:
                    continue
                for which in range(2):
                    if which == 0:
                        sig = s
                    else:
                        if s == 0:
                            break
                        sig = -s
                    num = -Bq + sig
                    if num % (2 * A):
                        continue
                    x = num / (2 * A)
                    ok = 1
                    for i in range(nc):
                        res = posmod(cx[i] * x + cy[i] * y + cz[i] * z, cmod[i])
                        if not (cbits[i] >> res) & 1:
                            ok = 0
                            break
                    if not ok:
                        continue
                    if _sm:
                        total += svals[posmod(_sx * x + _sy * y + _sz * z, _sm)]
                    else:
                        total += 1
    return total


# ----------------------------------------------------------------------
# point counting
# ----------------------------------------------------------------------


cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    if p <= <u64>0xFFFFFFFF:
        return (a * b) % p
    return <u64>((<u128>a * b) % p)


cdef u64 powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


cdef inline int legendre(u64 a, u64 p) nogil:
    a %= p
    if a == 0:
        return 0
    cdef u64 t = powmod(a, (p - 1) >> 1, p)
    return 1 if t == 1 else -1


cdef u64 sqrt_mod(u64 a, u64 p) nogil:
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return powmod(a, (p + 1) >> 2, p)
    cdef u64 t = p - 1
    cdef int e = 0
    while t % 2 == 0:
        t >>= 1
        e += 1
    cdef u64 g = 2
    while legendre(g, p) != -1:
        g += 1
    g = powmod(g, t, p)
    cdef u64 x = powmod(a, (t + 1) >> 1, p)
    cdef u64 bb = powmod(a, t, p)
    cdef int rexp = e, m
    cdef u64 t2, w
    while bb != 1:
        m = 0
        t2 = bb
        while t2 != 1:
            t2 = mulmod(t2, t2, p)
            m += 1
        w = powmod(g, <u64>1 << (rexp - m - 1), p)
        g = mulmod(w, w, p)
        x = mulmod(x, w, p)
        bb = mulmod(bb, g, p)
        rexp = m
    return x


cdef inline u64 invmod(u64 a, u64 p) nogil:
    # extended Euclid; p prime, a not 0 mod p
    cdef i64 t = 0, newt = 1, r = <i64>p, newr = <i64>(a % p), q, tmp
    while newr:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <i64>p
    return <u64>t


# Jacobian coordinates: affine (X/Z^2, Y/Z^3), infinity <=> Z = 0.
cdef struct JPt:
    u64 X
    u64 Y
    u64 Z


cdef inline JPt jac_double(JPt P, u64 A, u64 p) nogil:
    cdef JPt R
    cdef u64 Y2, S, Z2, M, X3
    if P.Z == 0 or P.Y == 0:
        R.X = 1
        R.Y = 1
        R.Z = 0
        return R
    Y2 = mulmod(P.Y, P.Y, p)
    S = mulmod(4 * P.X % p, Y2, p)
    Z2 = mulmod(P.Z, P.Z, p)
    M = (mulmod(3 * P.X % p, P.X, p) + mulmod(A, mulmod(Z2, Z2, p), p)) % p
    X3 = (mulmod(M, M, p) + 2 * (p - S)) % p
    R.X = X3
    R.Y = (mulmod(M, (S + p - X3) % p, p) + p - mulmod(8 * Y2 % p, Y2, p) % p) % p
    R.Z = mulmod(2 * P.Y % p, P.Z, p)
    return R


cdef inline JPt jac_add_affine(JPt P, u64 qx, u64 qy, u64 A, u64 p) nogil:
    # mixed add P + (qx, qy)
    cdef JPt R
    cdef u64 Z2, U2, S2, H, r, H2, H3, U1H2
    if P.Z == 0:
        R.X = qx
        R.Y = qy
        R.Z = 1
        return R
    Z2 = mulmod(P.Z, P.Z, p)
    U2 = mulmod(qx, Z2, p)
    S2 = mulmod(qy, mulmod(Z2, P.Z, p), p)
    H = (U2 + p - P.X) % p
    r = (S2 + p - P.Y) % p
    if H == 0:
        if r == 0:
            return jac_double(P, A, p)
        R.X = 1
        R.Y = 1
        R.Z = 0
        return R
    H2 = mulmod(H, H, p)
    H3 = mulmod(H2, H, p)
    U1H2 = mulmod(P.X, H2, p)
    R.X = (mulmod(r, r, p) + p - H3 + 2 * (p - U1H2)) % p
    R.Y = (mulmod(r, (U1H2 + p - R.X) % p, p) + p - mulmod(P.Y, H3, p)) % p
    R.Z = mulmod(P.Z, H, p)
    return R


cdef JPt jac_mul_affine(u64 k, u64 qx, u64 qy, u64 A, u64 p) nogil:
    cdef JPt R
    R.X = 1
    R.Y = 1
    R.Z = 0
    cdef int bit = 63
    if k == 0:
        return R
    while not (k >> bit) & 1:
        bit -= 1
    while bit >= 0:
        R = jac_double(R, A, p)
        if (k >> bit) & 1:
            R = jac_add_affine(R, qx, qy, A, p)
        bit -= 1
    return R


cdef void batch_normalize(JPt* pts, i64 n, u64 p, u64* ax, u64* ay) nogil:
    """Affine coordinates for n Jacobian points with one inversion.

    Infinity entries get ax = sentinel (all ones)."""
    cdef u64* pref = <u64*>malloc((n + 1) * sizeof(u64))
    cdef i64 i
    cdef u64 acc, zinv, z2
    pref[0] = 1
    for i in range(n):
        pref[i + 1] = mulmod(pref[i], pts[i].Z if pts[i].Z else 1, p)
    acc = invmod(pref[n], p)
    for i in range(n - 1, -1, -1):
        if pts[i].Z == 0:
            ax[i] = <u64>-1
            ay[i] = 0
            continue
        zinv = mulmod(acc, pref[i], p)
        acc = mulmod(acc, pts[i].Z, p)
        z2 = mulmod(zinv, zinv, p)
        ax[i] = mulmod(pts[i].X, z2, p)
        ay[i] = mulmod(pts[i].Y, mulmod(z2, zinv, p), p)
    free(pref)


cdef void order_multiples(u64 px, u64 py, u64 A, u64 p, i64 lo, i64 hi,
                          i64* n1, i64* n2) nogil:
    """Two smallest n in [lo, hi] with n*P = O (n2 = -1 when unique)."""
    cdef i64 width = hi - lo + 1
    cdef i64 s = isqrt64(width) + 1
    cdef i64 j, k, n, cap, h, hsize, hmask, blk, b, nb
    n1[0] = -1
    n2[0] = -1
    cdef JPt* jp = <JPt*>malloc(s * sizeof(JPt))
    cdef u64* bx = <u64*>malloc(s * sizeof(u64))
    cdef u64* by = <u64*>malloc(s * sizeof(u64))
    cdef JPt R, G, T
    # baby steps 1P..(s-1)P in Jacobian, one shared inversion at the end
    R.X = px
    R.Y = py
    R.Z = 1
    jp[0] = R
    for j in range(1, s - 1):
        R = jac_add_affine(R, px, py, A, p)
        jp[j] = R
        if R.Z == 0:
            # ord(P) = j + 1
            n = lo + posmod(-lo, j + 1)
            if n <= hi:
                n1[0] = n
                if n + j + 1 <= hi:
                    n2[0] = n + j + 1
            free(jp)
            free(bx)
            free(by)
            return
    batch_normalize(jp, s - 1, p, bx + 1, by + 1)
    # hash table on baby x-coordinates (linear probing)
    hsize = 4
    while hsize < 4 * s:
        hsize *= 2
    hmask = hsize - 1
    cdef u64* hkey = <u64*>malloc(hsize * sizeof(u64))
    cdef i64* hval = <i64*>malloc(hsize * sizeof(i64))
    for h in range(hsize):
        hkey[h] = <u64>-1
    for j in range(1, s):
        h = <i64>(bx[j] * <u64>0x9E3779B97F4A7C15) & hmask
        while hkey[h] != <u64>-1:
            h = (h + 1) & hmask
        hkey[h] = bx[j]
        hval[h] = j
    # giant steps in blocks, normalized together
    G = jac_mul_affine(<u64>s, px, py, A, p)
    if G.Z == 0:
        # no baby hit infinity, so ord(P) = s exactly
        n = lo + posmod(-lo, s)
        if n <= hi:
            n1[0] = n
            if n + s <= hi:
                n2[0] = n + s
        free(jp)
        free(bx)
        free(by)
        free(hkey)
        free(hval)
        return
    cdef u64 gx, gy
    batch_normalize(&G, 1, p, &gx, &gy)
    T = jac_mul_affine(<u64>lo, px, py, A, p)
    cap = width / s + 2
    blk = 64
    cdef JPt* tb = <JPt*>malloc(blk * sizeof(JPt))
    cdef u64* tx = <u64*>malloc(blk * sizeof(u64))
    cdef u64* ty = <u64*>malloc(blk * sizeof(u64))
    cdef i64 cand_a, cand_b
    k = 0
    while k < cap:
        nb = blk if cap - k > blk else cap - k
        for b in range(nb):
            tb[b] = T
            T = jac_add_affine(T, gx, gy, A, p)
        batch_normalize(tb, nb, p, tx, ty)
        for b in range(nb):
            cand_a = -1
            cand_b = -1
            if tb[b].Z == 0:
                cand_a = lo + (k + b) * s
            else:
                h = <i64>(tx[b] * <u64>0x9E3779B97F4A7C15) & hmask
                while hkey[h] != <u64>-1:
                    if hkey[h] == tx[b]:
                        j = hval[h]
                        if ty[b] == (p - by[j]) % p:
                            cand_a = lo + (k + b) * s + j
                        if ty[b] == by[j]:
                            cand_b = lo + (k + b) * s - j
                        break
                    h = (h + 1) & hmask
            for j in range(2):
                n = cand_a if j == 0 else cand_b
                if n < lo or n > hi:
                    continue
                if n1[0] < 0:
                    n1[0] = n
                elif n < n1[0]:
                    n2[0] = n1[0]
                    n1[0] = n
                elif n != n1[0] and (n2[0] < 0 or n < n2[0]):
                    n2[0] = n
        k += nb
    free(jp)
    free(bx)
    free(by)
    free(hkey)
    free(hval)
    free(tb)
    free(tx)
    free(ty)


cdef i64 gcd64(i64 a, i64 b) nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef i64 ap_naive_c(u64 A, u64 B, u64 p) nogil:
    # character sum with finite-difference updates, no division in the loop
    cdef i8* qr = <i8*>calloc(p, sizeof(i8))
    cdef u64 x, sq = 0, step = 1 % p
    cdef u64 f = B % p, d1 = (1 + A) % p, d2 = 6 % p
    cdef i64 acc = 0
    for x in range(p // 2 + 1):
        qr[sq] = 1
        sq += step
        if sq >= p:
            sq -= p
        step += 2
        while step >= p:
            step -= p
    for x in range(p):
        if f != 0:
            acc += 1 if qr[f] else -1
        f += d1
        if f >= p:
            f -= p
        d1 += d2
        if d1 >= p:
            d1 -= p
        d2 += 6
        while d2 >= p:
            d2 -= p
    free(qr)
    return -acc


cdef i64 ap_bsgs_c(u64 A, u64 B, u64 p) nogil:
    if p < 512:
        # below Mestre's bound the unique-multiple exit is not guaranteed
        return ap_naive_c(A, B, p)
    cdef i64 w = isqrt64(<i64>(4 * p))
    cdef i64 lo = <i64>p + 1 - w, hi = <i64>p + 1 + w
    cdef u64 g = 2
    while legendre(g, p) != -1:
        g += 1
    cdef u64 A2 = mulmod(mulmod(A, g, p), g, p)
    cdef u64 B2 = mulmod(mulmod(mulmod(B, g, p), g, p), g, p)
    cdef i64 L0 = 1, L1 = 1
    cdef u64 x = 0, u, Ac, px, py
    cdef int ci
    cdef i64 n1, n2, order, first, n, count
    cdef i64 cand = 0
    while True:
        u = (mulmod(mulmod(x, x, p), x, p) + mulmod(A, x, p) + B) % p
        x += 1
        if u == 0:
            # 2-torsion x-coordinate; both the curve and its twist gain a 2
            if L0 % 2:
                L0 *= 2
            if L1 % 2:
                L1 *= 2
        else:
            if legendre(u, p) == 1:
                ci = 0
                Ac = A
                px = (x - 1) % p
                py = sqrt_mod(u, p)
            else:
                ci = 1
                Ac = A2
                px = mulmod((x - 1) % p, g, p)
                py = sqrt_mod(mulmod(u, mulmod(mulmod(g, g, p), g, p), p), p)
            order_multiples(px, py, Ac, p, lo, hi, &n1, &n2)
            if n1 >= 0 and n2 < 0:
                # unique multiple of ord(P): the group order itself
                return <i64>p + 1 - n1 if ci == 0 else n1 - <i64>p - 1
            if n1 >= 0:
                order = n2 - n1
                if ci == 0:
                    L0 = L0 / gcd64(L0, order) * order
                else:
                    L1 = L1 / gcd64(L1, order) * order
        first = lo + posmod(-lo, L0)
        count = 0
        n = first
        while n <= hi:
            if (2 * <i64>p + 2 - n) % L1 == 0:
                count += 1
                cand = n
                if count > 1:
                    break
            n += L0
        if count == 1:
            return <i64>p + 1 - cand


def ap_batch(cnp.ndarray[u64, ndim=1] primes, cnp.ndarray[u64, ndim=1] amods,
             cnp.ndarray[u64, ndim=1] bmods):
    out_arr = np.empty(primes.shape[0], dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef Py_ssize_t i
    cdef u64 p
    with nogil:
        for i in range(primes.shape[0]):
            p = primes[i]
            if p < <u64>_NAIVE_CUT:
                out[i] = ap_naive_c(amods[i], bmods[i], p)
            else:
                out[i] = ap_bsgs_c(amods[i], bmods[i], p)
    return out_arr


def ap_naive(A, B, p):
    return int(ap_naive_c(A % p, B % p, p))


def ap_bsgs(A, B, p):
    return int(ap_bsgs_c(A % p, B % p, p))


# ----------------------------------------------------------------------
# multiplicative coefficient fill
# ----------------------------------------------------------------------


def an_fill(limit, cnp.ndarray[u64, ndim=1] primes, cnp.ndarray[i64, ndim=1] aps,
            cnp.ndarray[u8, ndim=1] is_bad):
    """Dense a_1..a_limit (int32) from per-prime traces; see _core_py.an_fill."""
    cdef i64 N = limit
    out_arr = np.zeros(N + 1, dtype=np.int32)
    cdef i32[::1] a = out_arr
    cdef cnp.uint32_t* spf = <cnp.uint32_t*>calloc(N + 1, sizeof(cnp.uint32_t))
    cdef cnp.uint32_t* pw = <cnp.uint32_t*>calloc(N + 1, sizeof(cnp.uint32_t))
    cdef i32* ap_of = <i32*>calloc(N + 1, sizeof(i32))
    cdef u8* bad_of = <u8*>calloc(N + 1, sizeof(u8))
    cdef i64 i, pp, n, m, q, pk
    cdef i64 v
    with nogil:
        for i in range(primes.shape[0]):
            pp = <i64>primes[i]
            if pp > N:
                break
            ap_of[pp] = <i32>aps[i]
            bad_of[pp] = is_bad[i]
        for n in range(2, N + 1):
            if spf[n] == 0:
                i = n
                while i <= N:
                    if spf[i] == 0:
                        spf[i] = <cnp.uint32_t>n
                    i += n
        if N >= 1:
            a[1] = 1
        for n in range(2, N + 1):
            pp = spf[n]
            m = n / pp
            if m % pp != 0:
                pw[n] = <cnp.uint32_t>pp
                if m == 1:
                    a[n] = ap_of[pp]
                else:
                    a[n] = a[pp] * a[m]
            else:
                pw[n] = pw[m] * <cnp.uint32_t>pp
                q = n / pw[n]
                if q == 1:
                    if bad_of[pp]:
                        a[n] = a[pp] * a[n / pp]
                    else:
                        v = <i64>ap_of[pp] * a[n / pp] - pp * a[n / (pp * pp)]
                        a[n] = <i32>v
                else:
                    a[n] = a[pw[n]] * a[q]
    free(spf)
    free(pw)
    free(ap_of)
    free(bad_of)
    return out_arr
