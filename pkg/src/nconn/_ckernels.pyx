# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels; API mirrors ``nconn._pykernels``."""

from libc.stdlib cimport malloc, free

BACKEND = "cython"

ctypedef unsigned int mask_t


cdef inline int _popcount(mask_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef inline int _lowidx(mask_t x) nogil:
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


cdef bytes _rank_from_independent(int n, unsigned char* indep):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef bytearray out = bytearray(size)
    cdef unsigned char* rank = out
    cdef mask_t x, y, low
    cdef unsigned char best, v
    rank[0] = 0
    for x in range(1, size):
        if indep[x]:
            rank[x] = <unsigned char>_popcount(x)
            continue
        best = 0
        y = x
        while y:
            low = y & (~y + 1)
            v = rank[x ^ low]
            if v > best:
                best = v
            y ^= low
        rank[x] = best
    return bytes(out)


def rank_from_bases(int n, bases):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef bytearray buf = bytearray(size)
    cdef unsigned char* indep = buf
    cdef mask_t full = <mask_t>(size - 1)
    cdef mask_t rest, low, b
    cdef long long xi
    cdef mask_t x
    for b in bases:
        indep[b] = 1
    for xi in range(size - 1, -1, -1):
        x = <mask_t>xi
        if indep[x]:
            continue
        rest = full ^ x
        while rest:
            low = rest & (~rest + 1)
            if indep[x | low]:
                indep[x] = 1
                break
            rest ^= low
    return _rank_from_independent(n, indep)


def rank_from_circuits(int n, circuits):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef bytearray buf = bytearray(size)
    cdef unsigned char* dep = buf
    cdef mask_t x, y, low, c
    for c in circuits:
        dep[c] = 1
    for x in range(1, size):
        if dep[x]:
            continue
        y = x
        while y:
            low = y & (~y + 1)
            if dep[x ^ low]:
                dep[x] = 1
                break
            y ^= low
    for x in range(size):
        dep[x] = 1 - dep[x]
    return _rank_from_independent(n, dep)


def dual_table(const unsigned char[:] rank, int n):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef mask_t full = <mask_t>(size - 1)
    cdef int r = rank[full]
    cdef bytearray out = bytearray(size)
    cdef unsigned char* o = out
    cdef mask_t x
    for x in range(size):
        o[x] = <unsigned char>(_popcount(x) + rank[full ^ x] - r)
    return bytes(out)


def minor_table(const unsigned char[:] rank, int n, mask_t keep, mask_t contract):
    cdef int m = _popcount(keep)
    cdef mask_t pos[32]
    cdef int i, k = 0
    for i in range(n):
        if (keep >> i) & 1:
            pos[k] = (<mask_t>1) << i
            k += 1
    cdef Py_ssize_t size = (<Py_ssize_t>1) << m
    cdef mask_t* expand = <mask_t*>malloc(size * sizeof(mask_t))
    cdef bytearray out = bytearray(size)
    cdef unsigned char* o = out
    cdef int base = rank[contract]
    cdef mask_t y, low
    expand[0] = 0
    for y in range(1, size):
        low = y & (~y + 1)
        expand[y] = expand[y ^ low] | pos[_lowidx(low)]
        o[y] = <unsigned char>(rank[expand[y] | contract] - base)
    free(expand)
    return bytes(out)


def kappa(const unsigned char[:] rank, int n, mask_t a, mask_t b):
    cdef mask_t full = <mask_t>(((<Py_ssize_t>1) << n) - 1)
    cdef int r = rank[full]
    cdef mask_t free_ = full & ~(a | b)
    cdef int best = 1 << 30
    cdef int lam
    cdef mask_t y = 0, x
    while True:
        x = a | y
        lam = rank[x] + rank[full ^ x] - r
        if lam < best:
            best = lam
            if best == 0:
                return 0
        if y == free_:
            break
        y = (y - free_) & free_
    return best


def exchange_violation(bases):
    cdef list blist = list(bases)
    cdef set family = set(blist)
    cdef Py_ssize_t nb = len(blist), i, j
    cdef mask_t* arr = <mask_t*>malloc(nb * sizeof(mask_t))
    for i in range(nb):
        arr[i] = blist[i]
    cdef mask_t b1, b2, d1, d2, x, y, low, rem
    cdef bint ok
    try:
        for i in range(nb):
            b1 = arr[i]
            for j in range(nb):
                b2 = arr[j]
                d1 = b1 & ~b2
                if not d1:
                    continue
                d2 = b2 & ~b1
                while d1:
                    x = d1 & (~d1 + 1)
                    d1 ^= x
                    rem = b1 ^ x
                    y = d2
                    ok = False
                    while y:
                        low = y & (~y + 1)
                        if (rem | low) in family:
                            ok = True
                            break
                        y ^= low
                    if not ok:
                        return (b1, b2, x)
        return None
    finally:
        free(arr)


cdef int _expand_bits(mask_t pool, mask_t* bits) nogil:
    cdef int m = 0, i = 0
    while pool:
        if pool & 1:
            bits[m] = (<mask_t>1) << i
            m += 1
        pool >>= 1
        i += 1
    return m


cdef inline mask_t _expand(mask_t c, mask_t* bits) nogil:
    cdef mask_t x = 0, low
    while c:
        low = c & (~c + 1)
        x |= bits[_lowidx(low)]
        c ^= low
    return x


cdef inline mask_t _gosper(mask_t c) nogil:
    cdef mask_t low = c & (~c + 1)
    cdef mask_t ripple = c + low
    return (((ripple ^ c) >> 2) // low) | ripple


cdef class _Combos:
    cdef int count
    cdef int width
    cdef int* idx

    def __cinit__(self, combos):
        cdef list cl = [tuple(c) for c in combos]
        self.count = len(cl)
        self.width = len(cl[0]) if cl else 0
        self.idx = <int*>malloc(max(1, self.count * self.width) * sizeof(int))
        cdef int j, k
        for j in range(self.count):
            for k in range(self.width):
                self.idx[j * self.width + k] = cl[j][k]

    def __dealloc__(self):
        free(self.idx)


cdef object _signature(const unsigned char[:] rank, mask_t ground, mask_t contract,
                       int target, _Combos combos):
    cdef mask_t pos[32]
    _expand_bits(ground, pos)
    cdef unsigned long long sig = 0
    cdef object big
    cdef int j, k
    cdef mask_t x
    if combos.count <= 64:
        for j in range(combos.count):
            x = contract
            for k in range(combos.width):
                x |= pos[combos.idx[j * combos.width + k]]
            if rank[x] == target:
                sig |= (<unsigned long long>1) << j
        return sig
    big = 0
    for j in range(combos.count):
        x = contract
        for k in range(combos.width):
            x |= pos[combos.idx[j * combos.width + k]]
        if rank[x] == target:
            big |= (<object>1) << j
    return big


def scan_grounds(const unsigned char[:] rank, int n, int m, int kc, combos, sigs, mask_t required):
    cdef mask_t full = <mask_t>(((<Py_ssize_t>1) << n) - 1)
    cdef int rm = rank[full]
    cdef _Combos cb = _Combos(combos)
    cdef mask_t sbits[32]
    cdef mask_t cbits[32]
    cdef int ns = _expand_bits(full & ~required, sbits)
    cdef int need = m - _popcount(required)
    cdef list out = []
    cdef mask_t sc, s, cc, c, slimit, climit
    cdef int nc
    cdef object sig
    if need < 0 or need > ns:
        return out
    slimit = (<mask_t>1) << ns
    sc = ((<mask_t>1) << need) - 1
    while sc < slimit:
        s = required | _expand(sc, sbits)
        nc = _expand_bits(full & ~s, cbits)
        if kc <= nc:
            climit = (<mask_t>1) << nc
            cc = ((<mask_t>1) << kc) - 1
            while cc < climit:
                c = _expand(cc, cbits)
                if rank[c] == kc and rank[s | c] == rm:
                    sig = _signature(rank, s, c, rm, cb)
                    if sig in sigs:
                        out.append((s, c, sig))
                        break
                if cc == 0:
                    break
                cc = _gosper(cc)
        if sc == 0:
            break
        sc = _gosper(sc)
    return out


def first_witness(const unsigned char[:] rank, int n, int m, int kc, combos, sigs, mask_t required):
    cdef mask_t full = <mask_t>(((<Py_ssize_t>1) << n) - 1)
    cdef int rm = rank[full]
    cdef int kd = n - m - kc
    if kd < 0:
        return None
    cdef _Combos cb = _Combos(combos)
    cdef mask_t cbits[32]
    cdef mask_t dbits[32]
    cdef int ncpool = _expand_bits(full & ~required, cbits)
    cdef int nd
    cdef mask_t cc, c, dc, d, s, climit, dlimit
    cdef object sig
    if kc > ncpool:
        return None
    climit = (<mask_t>1) << ncpool
    cc = ((<mask_t>1) << kc) - 1
    while cc < climit:
        c = _expand(cc, cbits)
        if rank[c] == kc:
            nd = _expand_bits(full & ~(required | c), dbits)
            if kd <= nd:
                dlimit = (<mask_t>1) << nd
                dc = ((<mask_t>1) << kd) - 1
                while dc < dlimit:
                    d = _expand(dc, dbits)
                    s = full & ~(c | d)
                    if rank[s | c] == rm:
                        sig = _signature(rank, s, c, rm, cb)
                        if sig in sigs:
                            return (c, d, sig)
                    if dc == 0:
                        break
                    dc = _gosper(dc)
        if cc == 0:
            break
        cc = _gosper(cc)
    return None
