"""Table-driven arithmetic in GF(q) for q <= 9.

Elements are encoded as integers 0..q-1.  For a prime field the encoding is
the residue itself.  For q = p^h with h > 1 the base-p digits of the code are
the coefficients of a polynomial in the generator ``x`` (lowest degree
first), reduced modulo the Conway polynomial listed in ``CONWAY``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# Conway polynomials, coefficients lowest degree first (monic, leading 1 omitted
# only in the sense that it is the last entry).
CONWAY = {
    (2, 1): (1, 1),          # x + 1
    (3, 1): (1, 1),          # x + 1
    (5, 1): (3, 1),          # x + 3
    (7, 1): (4, 1),          # x + 4
    (2, 2): (1, 1, 1),       # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),    # x^3 + x + 1
    (3, 2): (2, 2, 1),       # x^2 + 2x + 2
}


class FieldError(ValueError):
    pass


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            h, r = 0, q
            while r % p == 0:
                r //= p
                h += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, h
    raise FieldError(f"{q} is not a prime power")


class FiniteField:
    """GF(q) with precomputed add/mul/log tables.

    The multiplicative generator is the class of ``x`` modulo the Conway
    polynomial (for prime fields: the smallest primitive root, which is the
    root of the degree one Conway polynomial).
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            raise FieldError(f"unsupported field size {q}; supported: {SUPPORTED_ORDERS}")
        p, h = _factor_prime_power(q)
        self.p, self.h, self.q = p, h, q
        self.zero, self.one = 0, 1

        digits = np.array([[(a // p**k) % p for k in range(h)] for a in range(q)], dtype=np.int64)
        weights = np.array([p**k for k in range(h)], dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (summed @ weights).astype(np.int64)
        self.neg = ((-digits) % p) @ weights
        self.sub_table = self.add_table[:, self.neg]

        # antilog: powers of the generator
        poly = CONWAY[(p, h)]
        if h == 1:
            gen = (-poly[0]) % p
        else:
            gen = p  # the polynomial "x"
        exp = [1]
        cur = [1] + [0] * (h - 1)
        for _ in range(q - 2):
            if h == 1:
                cur = [(cur[0] * gen) % p]
            else:
                # multiply by x and reduce with x^h = -(c_0 + ... + c_{h-1} x^{h-1})
                top = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(c - top * poly[k]) % p for k, c in enumerate(cur)]
            exp.append(int(sum(c * p**k for k, c in enumerate(cur))))
        if len(set(exp)) != q - 1:
            raise FieldError(f"Conway polynomial for GF({q}) is not primitive")
        self.exp_table = np.array(exp + exp, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        for k, a in enumerate(exp):
            log[a] = k
        self.log_table = log

        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                mul[a, b] = self.exp_table[log[a] + log[b]]
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = self.exp_table[(q - 1 - log[a]) % (q - 1)]
        self.inv_table = inv

        # Frobenius x -> x^sqrt(q), only meaningful for square q
        self.sqrt_q = None
        self.conj_table = None
        if h % 2 == 0:
            r = p ** (h // 2)
            self.sqrt_q = r
            self.conj_table = np.array([self.pow(a, r) for a in range(q)], dtype=np.int64)

        for name in ("add_table", "neg", "sub_table", "exp_table", "log_table",
                     "mul_table", "inv_table", "conj_table"):
            arr = getattr(self, name)
            if arr is not None:
                arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def is_square(self) -> bool:
        return self.sqrt_q is not None

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def negate(self, a: int) -> int:
        return int(self.neg[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(q)")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 1 if n == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * n) % (self.q - 1)])

    def conj(self, a: int) -> int:
        if self.conj_table is None:
            raise FieldError(f"conjugation needs a square field size, got {self.q}")
        return int(self.conj_table[a])

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    # -- vectorised helpers (numpy arrays of element codes) ------------------

    def vadd(self, x, y):
        return self.add_table[x, y]

    def vmul(self, x, y):
        return self.mul_table[x, y]

    def vsum(self, x, axis=-1):
        x = np.asarray(x)
        x = np.moveaxis(x, axis, -1)
        acc = np.zeros(x.shape[:-1], dtype=np.int64)
        for k in range(x.shape[-1]):
            acc = self.add_table[acc, x[..., k]]
        return acc

    def matmul(self, X, Y):
        """Matrix product over GF(q) of element-code arrays."""
        X = np.asarray(X, dtype=np.int64)
        Y = np.asarray(Y, dtype=np.int64)
        if X.shape[-1] != Y.shape[0]:
            raise ValueError(f"shape mismatch {X.shape} @ {Y.shape}")
        acc = np.zeros(X.shape[:-1] + Y.shape[1:], dtype=np.int64)
        for k in range(X.shape[-1]):
            term = self.mul_table[X[..., k][..., None], Y[k][None, ...]] if Y.ndim > 1 \
                else self.mul_table[X[..., k], Y[k]]
            acc = self.add_table[acc, term]
        return acc


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    """Shared field instance for q."""
    return FiniteField(q)
