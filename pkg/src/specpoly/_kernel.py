"""Vectorized sums over blocks of A+(d).

Field values are int64 arrays whose last axis holds the F_p coordinates
(length e).  Products use the structure tensor of F_q over F_p; the final
contraction over the enumerated polynomials is a float64 matrix product,
which is exact because every partial sum stays below 2**53.
"""
from __future__ import annotations

import functools

import numpy as np

from .digits import digits_base_q
from .field import FieldCtx, field_embed

MAX_CELLS = 1 << 22
EXACT_LIMIT = 1 << 52


class FieldArrays:
    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p, self.e = ctx.p, ctx.e
        self.vecs = np.array([ctx.vec(c) for c in range(ctx.q)], dtype=np.int64).reshape(ctx.q, ctx.e)
        self.weights = np.array([ctx.p ** (ctx.e - 1 - i) for i in range(ctx.e)], dtype=np.int64)
        T = np.zeros((ctx.e, ctx.e, ctx.e), dtype=np.int64)
        for a in range(ctx.e):
            for b in range(ctx.e):
                ua = [0] * ctx.e
                ub = [0] * ctx.e
                ua[a] = ub[b] = 1
                T[a, b] = ctx.vec(ctx._mul_generic(ctx.code(ua), ctx.code(ub)))
        self.T = T
        one = np.zeros(ctx.e, dtype=np.int64)
        one[0] = 1
        self.one = one
        # row-vector matrix of x -> x^p
        frob = np.zeros((ctx.e, ctx.e), dtype=np.int64)
        for a in range(ctx.e):
            u = [0] * ctx.e
            u[a] = 1
            frob[a] = ctx.vec(ctx.pow(ctx.code(u), ctx.p))
        self.frob = frob

    def frobenius(self, V, times: int):
        """x -> x^(p^times) applied along the last axis."""
        for _ in range(times % self.e):
            V = (V @ self.frob) % self.p
        return V

    def mul(self, A, B):
        if self.e == 1:
            return (A * B) % self.p
        out = A[..., 0, None] * (B @ self.T[0])
        for a in range(1, self.e):
            out += A[..., a, None] * (B @ self.T[a])
        return out % self.p

    def codes(self, V) -> np.ndarray:
        return V @ self.weights


@functools.lru_cache(maxsize=None)
def field_arrays(ctx: FieldCtx) -> FieldArrays:
    return FieldArrays(ctx)


def monic_block(d: int, ctx: FieldCtx, start: int, stop: int) -> np.ndarray:
    """Coefficient codes of A+(d)[start:stop], shape (N, d+1), constant term first."""
    n = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(n), d + 1), dtype=np.int64)
    for k in range(d):
        n, out[:, k] = np.divmod(n, ctx.q)
    out[:, d] = ctx.one
    return out


def power_factor(coeffs: np.ndarray, beta: int, q: int, fa: FieldArrays):
    """Sparse coefficient arrays of a(t)^beta for every row a of ``coeffs``.

    ``coeffs`` has shape (N, d+1, e) in the arithmetic of ``fa``.  Uses
    a(t)^(p^j) = a^sigma(t^(p^j)), sigma the p^j-power map on coefficients, so
    a(t)^beta is a product of l_p(beta) sparse factors.  Returns (support,
    values) with values of shape (N, len(support), e).
    """
    N, dp1, e = coeffs.shape
    p = fa.p
    support = np.zeros(1, dtype=np.int64)
    vals = np.broadcast_to(fa.one, (N, 1, e)).copy()
    for j, b in enumerate(digits_base_q(beta, p)):
        step = p**j
        shifts = step * np.arange(dp1, dtype=np.int64)
        twisted = fa.frobenius(coeffs, j) if b else None
        for _ in range(b):
            new_support = np.unique((support[:, None] + shifts[None, :]).ravel())
            new_vals = np.zeros((N, len(new_support), e), dtype=np.int64)
            for k in range(dp1):
                idx = np.searchsorted(new_support, support + shifts[k])
                new_vals[:, idx, :] += fa.mul(vals, twisted[:, k, None, :])
            support, vals = new_support, new_vals % fa.p
    return support, vals


@functools.lru_cache(maxsize=None)
def support_size(beta: int, d: int, p: int) -> int:
    """Number of t-exponents power_factor can produce for a^beta, deg a = d."""
    support = {0}
    for j, b in enumerate(digits_base_q(beta, p)):
        shifts = [p**j * k for k in range(d + 1)]
        for _ in range(b):
            support = {s + t for s in support for t in shifts}
    return len(support)


def _outer(factors, fa: FieldArrays):
    """Tensor product over variables; flattened support grid and values."""
    sup, acc = factors[0]
    grids = [sup]
    for sup, vals in factors[1:]:
        N = acc.shape[0]
        acc = fa.mul(acc[:, :, None, :], vals[:, None, :, :]).reshape(N, -1, fa.e)
        grids.append(sup)
    mesh = np.meshgrid(*grids, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), acc


class TensorSum:
    """Running value of sum_n prod_i factor_i(n) over F_q.

    ``factors`` passed to ``add`` are (support, values) pairs sharing the
    leading axis n; supports must be the same on every call.  Variables are
    split into two halves whose tensor products meet in one matrix product.
    """

    def __init__(self, fa: FieldArrays):
        self.fa = fa
        self.S = None
        self.exps_l = self.exps_r = None

    def add(self, factors):
        fa = self.fa
        p, e = fa.p, fa.e
        N = factors[0][1].shape[0]
        half = (len(factors) + 1) // 2
        exps_l, X = _outer(factors[:half], fa)
        if len(factors) > half:
            exps_r, Y = _outer(factors[half:], fa)
        else:
            exps_r, Y = np.zeros((1, 0), dtype=np.int64), np.broadcast_to(fa.one, (N, 1, e))
        K1, K2 = X.shape[1], Y.shape[1]
        if self.S is None:
            self.S = np.zeros((K1, K2, e), dtype=np.int64)
            self.exps_l, self.exps_r = exps_l, exps_r
        S = self.S
        step = max(1, min(N, MAX_CELLS // max(K1, K2, 1), EXACT_LIMIT // max(1, (p - 1) ** 2)))
        for lo in range(0, N, step):
            # contiguous (e, K, n) float slabs keep the products on BLAS
            Xc = np.ascontiguousarray(np.moveaxis(X[lo:lo + step], (0, 2), (2, 0)), dtype=np.float64)
            Yc = np.ascontiguousarray(np.moveaxis(Y[lo:lo + step], (0, 1, 2), (2, 1, 0)), dtype=np.float64)
            for a in range(e):
                for b in range(e):
                    coeff = fa.T[a, b]
                    if not coeff.any():
                        continue
                    prod = np.rint(Xc[a] @ Yc[b].T).astype(np.int64) % p
                    if e == 1:
                        S[:, :, 0] += prod
                    else:
                        S += prod[:, :, None] * coeff[None, None, :]
            S %= p

    def result(self, ctx: FieldCtx) -> dict:
        """{exponent tuple: code} for the nonzero entries."""
        if self.S is None:
            return {}
        codes = self.S @ self.fa.weights
        i, j = np.nonzero(codes)
        if not len(i):
            return {}
        exps = np.concatenate([self.exps_l[i], self.exps_r[j]], axis=1)
        return dict(zip(map(tuple, exps.tolist()), codes[i, j].tolist()))


def block_size(q: int, d: int, betas) -> int:
    width = 1
    for b in betas:
        width *= b * d + 1
    width = max(1, int(width**0.5))
    return max(1, min(q**d, MAX_CELLS // width))


def direct_coefficient(betas, d: int, ctx: FieldCtx) -> dict:
    """sum_{a in A+(d)} prod_i chi_i(a)^beta_i, keyed by (e_1..e_s) -> code.

    All betas are positive.
    """
    fa = field_arrays(ctx)
    total = ctx.q**d
    if not betas:
        # sum of 1 over q^d polynomials
        return {(): ctx.one} if d == 0 else {}
    acc = TensorSum(fa)
    step = block_size(ctx.q, d, betas)
    for lo in range(0, total, step):
        codes = monic_block(d, ctx, lo, min(total, lo + step))
        coeffs = fa.vecs[codes]
        acc.add([power_factor(coeffs, b, ctx.q, fa) for b in betas])
    return acc.result(ctx)


def _eval_rows(coeffs: np.ndarray, x: np.ndarray, fa: FieldArrays) -> np.ndarray:
    """Horner evaluation of each row polynomial at the field vector x."""
    N = coeffs.shape[0]
    acc = np.zeros((N, fa.e), dtype=np.int64)
    xb = np.broadcast_to(x, (N, fa.e))
    for k in range(coeffs.shape[1] - 1, -1, -1):
        acc = (fa.mul(acc, xb) + coeffs[:, k, :]) % fa.p
    return acc


def dirichlet_coefficient(lambdas, exps, beta: int, d: int, ctx: FieldCtx, ext: FieldCtx) -> dict:
    """sum_{a in A+(d)} a^beta * prod_i a(lambda_i)^exps_i with coefficients in ``ext``.

    ``lambdas`` are codes of ``ext``; result maps theta-exponent -> code of ext.
    """
    fe = field_arrays(ext)
    emb = field_embed(ctx, ext)
    emb_vecs = fe.vecs[np.array([emb.code(c) for c in range(ctx.q)], dtype=np.int64)]
    total = ctx.q**d
    width = max(1, beta * d + 1)
    step = max(1, min(total, MAX_CELLS // width))
    acc = TensorSum(fe)
    for lo in range(0, total, step):
        codes = monic_block(d, ctx, lo, min(total, lo + step))
        coeffs = emb_vecs[codes]
        N = coeffs.shape[0]
        scalar = np.broadcast_to(fe.one, (N, fe.e)).copy()
        for lam, k in zip(lambdas, exps):
            val = _eval_rows(coeffs, fe.vecs[lam], fe)
            for _ in range(k):
                scalar = fe.mul(scalar, val)
        sup, vals = power_factor(coeffs, beta, ctx.q, fe)
        vals = fe.mul(vals, scalar[:, None, :])
        acc.add([(sup, vals)])
    return acc.result(ext)
