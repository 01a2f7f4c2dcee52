"""Submodules of G = Z/p^c1 + ... + Z/p^ck in canonical echelon form.

A subgroup N of G is stored through the full-rank lattice
L = lift(N) + (p^c1 Z + ... + p^ck Z) in Z^k, whose Hermite normal form is an
upper triangular matrix with p-power pivots and entries above each pivot
reduced modulo it.  That matrix is unique, so its bytes serve as a memo key,
and the F_p-length of N is the sum over columns of c_j - v_p(pivot_j).

Kernels work on int64 arrays while every product stays below 2^63, which holds
when the largest modulus is at most 2^30; beyond that the same kernel bodies
run uninterpreted on object arrays of Python integers.
"""
from __future__ import annotations

import numpy as np

from .._accel import interpreted, kernel

INT64_SAFE_MODULUS = 2 ** 30


@kernel
def _egcd(a, b):
    # returns (g, x, y) with x*a + y*b == g >= 0
    x0 = a - a + 1
    y0 = a - a
    x1 = a - a
    y1 = a - a + 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@kernel
def _insert_from(B, mods, w, start):
    # eliminate w against rows start.. of B, absorbing it where a pivot shrinks
    n = B.shape[0]
    grew = False
    for j in range(start, n):
        x = w[j] % mods[j]
        if x == 0:
            continue
        d = B[j, j]
        if x % d == 0:
            q = x // d
            for l in range(j + 1, n):
                w[l] = (w[l] - q * B[j, l]) % mods[l]
        else:
            g, a, b = _egcd(x, d)
            fx = x // g
            fd = d // g
            for l in range(j + 1, n):
                o = B[j, l]
                B[j, l] = (a * w[l] + b * o) % mods[l]
                w[l] = (fd * w[l] - fx * o) % mods[l]
            B[j, j] = g
            grew = True
        w[j] = x - x
    return grew


@kernel
def _howell(B, mods):
    # make p^c_j e_j lie in the row span: push (p^c_j / pivot_j) * row_j below j
    n = B.shape[0]
    h = B[0].copy()
    for j in range(n):
        f = mods[j] // B[j, j]
        for l in range(n):
            h[l] = h[l] - h[l]
        nz = False
        for l in range(j + 1, n):
            h[l] = (f * B[j, l]) % mods[l]
            if h[l] != 0:
                nz = True
        if nz:
            _insert_from(B, mods, h, j + 1)


@kernel
def insert_vec(B, mods, v):
    """Add v to the subgroup spanned by the rows of B; returns True if it grew."""
    n = B.shape[0]
    w = v.copy()
    for j in range(n):
        w[j] = w[j] % mods[j]
    grew = _insert_from(B, mods, w, 0)
    if grew:
        _howell(B, mods)
    return grew


@kernel
def normalize(B, mods):
    n = B.shape[0]
    for j in range(n):
        d = B[j, j]
        for i in range(j):
            q = B[i, j] // d
            if q != 0:
                for l in range(j, n):
                    B[i, l] = (B[i, l] - q * B[j, l]) % mods[l]
            # the .. % mods above keeps column j in [0, d) since d divides mods[j]


@kernel
def contains_vec(B, mods, v):
    n = B.shape[0]
    w = v.copy()
    for j in range(n):
        w[j] = w[j] % mods[j]
    for j in range(n):
        x = w[j]
        if x == 0:
            continue
        d = B[j, j]
        if x % d != 0:
            return False
        q = x // d
        for l in range(j + 1, n):
            w[l] = (w[l] - q * B[j, l]) % mods[l]
    return True


@kernel
def apply_action(target, mult, mods, v, out):
    n = v.shape[0]
    for j in range(n):
        out[j] = out[j] - out[j]
    for j in range(n):
        b = target[j]
        if b >= 0 and v[j] != 0:
            out[b] = (out[b] + v[j] * mult[j]) % mods[b]


@kernel
def close(B, mods, targets, mults, seeds, stack):
    """Insert the seed rows and close under all actions; returns True if B grew."""
    n = B.shape[0]
    r = targets.shape[0]
    top = 0
    for s in range(seeds.shape[0]):
        for l in range(n):
            stack[top, l] = seeds[s, l]
        top += 1
    grew = False
    tmp = stack[0].copy()
    while top > 0:
        top -= 1
        v = stack[top].copy()
        if insert_vec(B, mods, v):
            grew = True
            for a in range(r):
                apply_action(targets[a], mults[a], mods, v, tmp)
                nz = False
                for l in range(n):
                    if tmp[l] != 0:
                        nz = True
                        break
                if nz:
                    for l in range(n):
                        stack[top, l] = tmp[l]
                    top += 1
    normalize(B, mods)
    return grew


@kernel
def colon_matrix(B, mods, targets, mults, big_mods, A):
    """Echelon of {x : every sequence action sends x into span(B)}.

    A is a (d+1)k square work matrix over the column order
    [action block 1 .. action block d | x block]; big_mods is the matching
    modulus vector.  Rows (A_1 x, ..., A_d x, x) for unit x and rows of B
    placed in each action block are inserted; rows whose pivot lies in the
    x block then form the echelon of the colon lattice.
    """
    k = B.shape[0]
    d = targets.shape[0]
    n = (d + 1) * k
    for i in range(n):
        for l in range(n):
            A[i, l] = A[i, l] - A[i, l]
        A[i, i] = big_mods[i]
    row = A[0].copy()
    tmp = B[0].copy()
    unit = B[0].copy()
    for blk in range(d):
        for i in range(k):
            for l in range(n):
                row[l] = row[l] - row[l]
            for l in range(k):
                row[blk * k + l] = B[i, l]
            insert_vec(A, big_mods, row)
    for j in range(k):
        for l in range(k):
            unit[l] = unit[l] - unit[l]
        unit[j] = unit[j] - unit[j] + 1
        for l in range(n):
            row[l] = row[l] - row[l]
        for blk in range(d):
            apply_action(targets[blk], mults[blk], mods, unit, tmp)
            for l in range(k):
                row[blk * k + l] = tmp[l]
        row[d * k + j] = row[d * k + j] - row[d * k + j] + 1
        insert_vec(A, big_mods, row)
    normalize(A, big_mods)
    out = B.copy()
    for i in range(k):
        for l in range(k):
            out[i, l] = A[d * k + i, d * k + l]
    return out


def _dtype_for(mods):
    return np.int64 if max(mods, default=1) <= INT64_SAFE_MODULUS else object


def zero_echelon(mods) -> np.ndarray:
    dt = _dtype_for(mods)
    k = len(mods)
    B = np.zeros((k, k), dtype=dt)
    for j, m in enumerate(mods):
        B[j, j] = m
    return B


_KERNELS = ("_egcd", "_insert_from", "_howell", "insert_vec", "normalize", "contains_vec",
            "apply_action", "close", "colon_matrix")
_PLAIN = interpreted(globals(), _KERNELS)


def _call(fn, dtype, *args):
    if dtype is object:
        fn = getattr(_PLAIN, getattr(fn, "py_func", fn).__name__)
    return fn(*args)


class Echelon:
    """Kernel dispatch for one module's moduli and actions."""

    def __init__(self, moduli, ring_actions, seq_actions, p, dtype=None):
        """``dtype=object`` forces the arbitrary-precision path."""
        self.p = p
        self.mods_list = tuple(moduli)
        self.k = len(moduli)
        self.dtype = dtype if dtype is not None else _dtype_for(moduli)
        self.mods = np.array(moduli, dtype=self.dtype)
        self.exps = tuple(_vp(m, p) for m in moduli)
        self.ring_t, self.ring_m = self._pack(ring_actions)
        self.seq_t, self.seq_m = self._pack(seq_actions)
        d = len(seq_actions)
        self.big_mods = np.array(list(moduli) * (d + 1), dtype=self.dtype)
        r = len(ring_actions)
        total = sum(self.exps)
        self.stack_rows = (total + 2) * max(r, 1) + self.k + 2

    def _pack(self, actions):
        k = self.k
        t = np.full((len(actions), k), -1, dtype=np.int64)
        m = np.zeros((len(actions), k), dtype=self.dtype)
        for a, act in enumerate(actions):
            for j in range(k):
                t[a, j] = act.target[j]
                m[a, j] = self.p ** act.power[j] if act.target[j] >= 0 else 0
        return t, m

    def zero(self):
        return zero_echelon(self.mods_list).astype(self.dtype)

    def vector(self, v):
        return np.array([int(x) for x in v], dtype=self.dtype)

    def close(self, B, seeds):
        B = B.copy()
        seeds = np.array([[int(x) for x in s] for s in seeds], dtype=self.dtype).reshape(len(seeds), self.k)
        stack = np.zeros((self.stack_rows + len(seeds), self.k), dtype=self.dtype)
        _call(close, self.dtype, B, self.mods, self.ring_t, self.ring_m, seeds, stack)
        return B

    def contains(self, B, v) -> bool:
        return bool(_call(contains_vec, self.dtype, B, self.mods, self.vector(v)))

    def colon(self, B):
        n = (self.seq_t.shape[0] + 1) * self.k
        A = np.zeros((n, n), dtype=self.dtype)
        return _call(colon_matrix, self.dtype, B, self.mods, self.seq_t, self.seq_m, self.big_mods, A)

    def apply_seq(self, a, v):
        out = np.zeros(self.k, dtype=self.dtype)
        _call(apply_action, self.dtype, self.seq_t[a], self.seq_m[a], self.mods, self.vector(v), out)
        return out

    def colength(self, B) -> int:
        """F_p-length of G/N."""
        return sum(_vp(int(B[j, j]), self.p) for j in range(self.k))

    def length(self, B) -> int:
        return sum(self.exps) - self.colength(B)

    def is_full(self, B) -> bool:
        return all(int(B[j, j]) == 1 for j in range(self.k))

    def subset(self, B, C) -> bool:
        """Is span(B) contained in span(C)?"""
        return all(self.contains(C, B[i]) for i in range(self.k))

    @staticmethod
    def key(B) -> bytes:
        if B.dtype == object:
            return repr(B.tolist()).encode()
        return B.tobytes()


def _vp(n, p):
    n = int(n)
    v = 0
    while n % p == 0 and n:
        n //= p
        v += 1
    return v
